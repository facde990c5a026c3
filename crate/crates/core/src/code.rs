//! Binary linear codes induced by point multisets: exact weight-distribution
//! analytics, the Griesmer bound, residual codes, divisibility arguments,
//! Krawtchouk/MacWilliams machinery, and derived constraint profiles for the
//! hypothetical codes attached to (n,r,s) systems.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::system::{analyze, point_expansion, LineSystem, PointMultiset};

/// Weight enumeration walks all 2^k codewords.
pub const MAX_K: u8 = 20;
/// Columns accepted by [`code_from_points`].
pub const MAX_CODE_LEN: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("dimension k={0} outside 1..={MAX_K}")]
    DimOutOfRange(u8),
    #[error("length {0} exceeds the limit {MAX_CODE_LEN}")]
    TooLong(u64),
    #[error("generator must have rank k={expected}, got rank {got}")]
    RankDeficient { expected: u8, got: usize },
    #[error("point multiset does not span (rank {rank} < r={r}); the would-be dual has B₁ > 0")]
    NotSpanning { rank: usize, r: u8 },
    #[error("column value {0:#x} does not fit in k={1} bits")]
    ColumnOutOfRange(u32, u8),
    #[error("residual undefined: need d > w/2, got d={d}, w={w}")]
    ResidualPrecondition { d: u64, w: u64 },
    #[error("message index {0:#x} does not fit in k={1} bits")]
    MessageOutOfRange(u32, u8),
    #[error("invalid weight distribution: {0}")]
    BadDistribution(String),
    #[error("weight {w} is not divisible by Δ=2^{a}")]
    NotDivisible { w: u64, a: u32 },
    #[error("n_min table, line {line}: {msg}")]
    TableParse { line: usize, msg: String },
    #[error("griesmer undefined for k={k}, d={d}")]
    GriesmerDomain { k: u8, d: u64 },
}

/// A binary linear [n,k] code stored as the multiset of generator-matrix
/// columns (one `u32` bitmask per coordinate).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryCode {
    k: u8,
    columns: Vec<u32>,
}

impl BinaryCode {
    /// Builds a code from generator columns; requires rank exactly `k`.
    pub fn new(k: u8, columns: Vec<u32>) -> Result<Self, CodeError> {
        if k == 0 || k > MAX_K {
            return Err(CodeError::DimOutOfRange(k));
        }
        if columns.len() as u64 > MAX_CODE_LEN {
            return Err(CodeError::TooLong(columns.len() as u64));
        }
        for &c in &columns {
            if c >> k != 0 {
                return Err(CodeError::ColumnOutOfRange(c, k));
            }
        }
        let rank = bit_rank(columns.iter().copied());
        if rank != k as usize {
            return Err(CodeError::RankDeficient { expected: k, got: rank });
        }
        Ok(BinaryCode { k, columns })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> u64 {
        self.columns.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    /// Weight of the codeword belonging to message `m` (inner products with
    /// all columns).
    pub fn codeword_weight(&self, m: u32) -> Result<u64, CodeError> {
        if m >> self.k != 0 {
            return Err(CodeError::MessageOutOfRange(m, self.k));
        }
        Ok(self
            .columns
            .iter()
            .filter(|&&c| (c & m).count_ones() % 2 == 1)
            .count() as u64)
    }
}

/// Exact weight distribution of a code: A_w = #codewords of weight w.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightDistribution {
    a: BTreeMap<u64, u64>,
    n: u64,
    k: u8,
}

impl WeightDistribution {
    pub fn new(a: BTreeMap<u64, u64>, n: u64, k: u8) -> Result<Self, CodeError> {
        let total: u64 = a.values().sum();
        if total != 1u64 << k {
            return Err(CodeError::BadDistribution(format!(
                "ΣA_w = {total} ≠ 2^{k}"
            )));
        }
        if a.get(&0).copied().unwrap_or(0) != 1 {
            return Err(CodeError::BadDistribution("A₀ ≠ 1".into()));
        }
        if a.keys().any(|&w| w > n) {
            return Err(CodeError::BadDistribution("weight exceeds length".into()));
        }
        Ok(WeightDistribution { a, n, k })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn count(&self, w: u64) -> u64 {
        self.a.get(&w).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.a
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.a.iter().map(|(&w, &c)| (w, c))
    }

    /// Minimum positive weight (= minimum distance; exists since k ≥ 1).
    pub fn min_distance(&self) -> u64 {
        self.a
            .keys()
            .copied()
            .find(|&w| w > 0)
            .expect("rank-k code has a nonzero word")
    }

    pub fn max_weight(&self) -> u64 {
        self.a.keys().copied().max().unwrap_or(0)
    }

    /// Largest Δ = 2^e dividing every (nonzero) weight.
    pub fn divisibility(&self) -> u64 {
        let mut g: u64 = 0;
        for &w in self.a.keys() {
            g = g.gcd(&w);
        }
        if g == 0 {
            1
        } else {
            1u64 << g.trailing_zeros()
        }
    }
}

/// Rank of a set of GF(2) bit vectors.
fn bit_rank(vecs: impl IntoIterator<Item = u32>) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vecs {
        for &b in &basis {
            let lead = 1u32 << (31 - b.leading_zeros());
            if v & lead != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// One generator column per point occurrence; dimension r.
pub fn code_from_points(p: &PointMultiset) -> Result<BinaryCode, CodeError> {
    let r = p.r();
    if r == 0 || r > MAX_K {
        return Err(CodeError::DimOutOfRange(r));
    }
    if p.total() > MAX_CODE_LEN {
        return Err(CodeError::TooLong(p.total()));
    }
    let mut columns = Vec::with_capacity(p.total() as usize);
    for (pt, mult) in p.iter() {
        for _ in 0..mult {
            columns.push(pt.bits());
        }
    }
    let rank = bit_rank(columns.iter().copied());
    if rank != r as usize {
        return Err(CodeError::NotSpanning { rank, r });
    }
    BinaryCode::new(r, columns)
}

/// Exact weight distribution via a Walsh–Hadamard transform over the column
/// multiplicity array: the codeword of message m has weight (n − f̂[m])/2.
pub fn weight_distribution(c: &BinaryCode) -> WeightDistribution {
    let k = c.k();
    let n = c.len();
    let mut f = vec![0i64; 1usize << k];
    for &col in c.columns() {
        f[col as usize] += 1;
    }
    let mut h = 1usize;
    while h < f.len() {
        let mut i = 0;
        while i < f.len() {
            for j in i..i + h {
                let x = f[j];
                let y = f[j + h];
                f[j] = x + y;
                f[j + h] = x - y;
            }
            i += h * 2;
        }
        h *= 2;
    }
    let mut a: BTreeMap<u64, u64> = BTreeMap::new();
    for &v in &f {
        let w = (n as i64 - v) / 2;
        debug_assert_eq!((n as i64 - v) % 2, 0);
        *a.entry(w as u64).or_insert(0) += 1;
    }
    WeightDistribution { a, n, k }
}

/// Griesmer bound g(k,d) = Σ_{i<k} ⌈d/2^i⌉.
pub fn griesmer(k: u8, d: u64) -> Result<u64, CodeError> {
    if k == 0 || d == 0 {
        return Err(CodeError::GriesmerDomain { k, d });
    }
    let mut sum = 0u64;
    for i in 0..k as u32 {
        let p = 1u64 << i.min(63);
        sum += d.div_ceil(p);
    }
    Ok(sum)
}

/// One named check of the Lemma-1 contract.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct ContractCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Result of checking that a system's expansion code meets the 2-divisible
/// [3n, r, 2(n−s)] contract with maximum weight ≤ 2n.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct Lemma1Report {
    pub n: u64,
    pub r: u8,
    pub s_max: u64,
    pub length: u64,
    pub dimension: u8,
    pub min_dist: u64,
    pub max_weight: u64,
    pub divisibility: u64,
    pub griesmer_g: u64,
    pub checks: Vec<ContractCheck>,
    pub pass: bool,
}

/// Builds the expansion code of a spanning system and verifies: length 3n,
/// dimension r, minimum distance exactly 2(n − s_max), 2-divisibility,
/// maximum weight ≤ 2n, and g(r, 2(n−s)) ≤ 3n.
pub fn lemma1_check(s: &LineSystem) -> Result<(BinaryCode, Lemma1Report), CodeError> {
    let report = analyze(s);
    if !report.spanning {
        return Err(CodeError::NotSpanning { rank: report.rank, r: s.r() });
    }
    let code = code_from_points(&point_expansion(s))?;
    let wd = weight_distribution(&code);
    let n = report.n;
    let r = s.r();
    let s_max = report.s_max;
    let d_expected = 2 * (n - s_max);
    let g = griesmer(r, d_expected)?;
    let mut checks = Vec::new();
    let mut check = |name: &'static str, pass: bool, detail: String| {
        checks.push(ContractCheck { name, pass, detail });
    };
    check("length", code.len() == 3 * n, format!("{} vs 3n = {}", code.len(), 3 * n));
    check("dimension", code.k() == r, format!("{} vs r = {}", code.k(), r));
    check(
        "min_dist",
        wd.min_distance() == d_expected,
        format!("{} vs 2(n−s) = {}", wd.min_distance(), d_expected),
    );
    check(
        "two_divisible",
        wd.divisibility() % 2 == 0,
        format!("Δ = {}", wd.divisibility()),
    );
    check(
        "max_weight",
        wd.max_weight() <= 2 * n,
        format!("{} vs 2n = {}", wd.max_weight(), 2 * n),
    );
    check("griesmer", g <= 3 * n, format!("g({r},{d_expected}) = {g} ≤ {}", 3 * n));
    let pass = checks.iter().all(|c| c.pass);
    let (length, dimension) = (code.len(), code.k());
    Ok((
        code,
        Lemma1Report {
            n,
            r,
            s_max,
            length,
            dimension,
            min_dist: wd.min_distance(),
            max_weight: wd.max_weight(),
            divisibility: wd.divisibility(),
            griesmer_g: g,
            checks,
            pass,
        },
    ))
}

/// Parameters of the residual code w.r.t. a weight-w codeword:
/// [n−w, k−1, ≥ d−⌊w/2⌋]; requires d > w/2.
pub fn residual_params(n: u64, k: u8, d: u64, w: u64) -> Result<(u64, u8, u64), CodeError> {
    if 2 * d <= w {
        return Err(CodeError::ResidualPrecondition { d, w });
    }
    if k < 2 || w > n {
        return Err(CodeError::ResidualPrecondition { d, w });
    }
    Ok((n - w, k - 1, d - w / 2))
}

/// Expresses each vector in coordinates w.r.t. a basis of the span;
/// returns (rank, coordinate bitmasks in F_2^rank).
fn column_coordinates(cols: &[u32]) -> (usize, Vec<u32>) {
    // pivots: (reduced vector, its expression in chosen basis columns)
    let mut pivots: Vec<(u32, u32)> = Vec::new();
    let mut rank = 0usize;
    let mut coords = Vec::with_capacity(cols.len());
    for &c in cols {
        let mut v = c;
        let mut expr = 0u32;
        for &(pv, pe) in &pivots {
            let lead = 1u32 << (31 - pv.leading_zeros());
            if v & lead != 0 {
                v ^= pv;
                expr ^= pe;
            }
        }
        if v != 0 {
            let slot = 1u32 << rank;
            rank += 1;
            pivots.push((v, expr ^ slot));
            pivots.sort_by_key(|&(pv, _)| std::cmp::Reverse(pv));
            coords.push(slot);
        } else {
            coords.push(expr);
        }
    }
    (rank, coords)
}

/// Concrete residual: restriction of the generator to the zero coordinates of
/// the codeword of message `m`, re-expressed over a basis of its row space.
pub fn residual(c: &BinaryCode, m: u32) -> Result<BinaryCode, CodeError> {
    if m >> c.k() != 0 {
        return Err(CodeError::MessageOutOfRange(m, c.k()));
    }
    let kept: Vec<u32> = c
        .columns()
        .iter()
        .copied()
        .filter(|&col| (col & m).count_ones() % 2 == 0)
        .collect();
    let (rank, coords) = column_coordinates(&kept);
    if rank == 0 {
        return Err(CodeError::RankDeficient { expected: 1, got: 0 });
    }
    BinaryCode::new(rank as u8, coords)
}

/// Griesmer-code divisibility: when n = g(k,d), the code is 2^e-divisible for
/// the largest 2^e dividing d; returns `None` when n ≠ g(k,d).
pub fn ward_divisibility(n: u64, k: u8, d: u64) -> Option<u64> {
    let g = griesmer(k, d).ok()?;
    if n == g {
        Some(1u64 << d.trailing_zeros())
    } else {
        None
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binary Krawtchouk polynomial K_i(j) = Σ_s (−1)^s C(n−j, i−s) C(j, s).
pub fn krawtchouk(n: u64, i: u64, j: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for s in 0..=i.min(j) {
        let term = BigInt::from(binomial(n - j, i - s) * binomial(j, s));
        if s % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Column of Krawtchouk values K_0(j) .. K_lmax(j) by the three-term
/// recurrence (i+1)K_{i+1}(j) = (n−2j)K_i(j) − (n−i+1)K_{i−1}(j).
fn krawtchouk_column(n: u64, j: u64, l_max: u64) -> Vec<BigInt> {
    let mut col = Vec::with_capacity(l_max as usize + 1);
    col.push(BigInt::one());
    if l_max == 0 {
        return col;
    }
    col.push(BigInt::from(n as i64 - 2 * j as i64));
    for i in 1..l_max {
        let a = BigInt::from(n as i64 - 2 * j as i64) * &col[i as usize];
        let b = BigInt::from(n - i + 1) * &col[i as usize - 1];
        let next = (a - b) / BigInt::from(i + 1);
        col.push(next);
    }
    col
}

/// Exact MacWilliams transform of a (big-integer) weight distribution:
/// out_i = (Σ_j K_i(j) dist_j) / 2^log2_size for 0 ≤ i ≤ l_max.
/// Errors when some out_i is negative or non-integral.
pub fn macwilliams_general(
    dist: &BTreeMap<u64, BigUint>,
    n: u64,
    log2_size: u32,
    l_max: u64,
) -> Result<BTreeMap<u64, BigUint>, CodeError> {
    let mut sums = vec![BigInt::zero(); l_max as usize + 1];
    for (&j, c) in dist {
        if j > n {
            return Err(CodeError::BadDistribution("weight exceeds length".into()));
        }
        let col = krawtchouk_column(n, j, l_max);
        let c = BigInt::from(c.clone());
        for (i, kij) in col.iter().enumerate() {
            sums[i] += kij * &c;
        }
    }
    let denom = BigInt::from(1u8) << log2_size;
    let mut out = BTreeMap::new();
    for (i, sum) in sums.into_iter().enumerate() {
        if sum.is_negative() {
            return Err(CodeError::BadDistribution(format!("B_{i} < 0")));
        }
        let (q, rem) = sum.div_rem(&denom);
        if !rem.is_zero() {
            return Err(CodeError::BadDistribution(format!(
                "2^{log2_size} ∤ Σ K_{i}(j)A_j"
            )));
        }
        if !q.is_zero() {
            out.insert(i as u64, q.to_biguint().expect("checked non-negative"));
        }
    }
    out.entry(0).or_insert_with(BigUint::one);
    Ok(out)
}

/// Dual weight distribution B from A via Σ_j K_i(j) A_j = 2^k B_i.
pub fn macwilliams_transform(
    a: &BTreeMap<u64, u64>,
    n: u64,
    k: u8,
) -> Result<BTreeMap<u64, BigUint>, CodeError> {
    let total: u64 = a.values().sum();
    if total != 1u64 << k {
        return Err(CodeError::BadDistribution(format!("ΣA = {total} ≠ 2^{k}")));
    }
    let big: BTreeMap<u64, BigUint> = a
        .iter()
        .filter(|&(_, &c)| c > 0)
        .map(|(&w, &c)| (w, BigUint::from(c)))
        .collect();
    macwilliams_general(&big, n, k as u32, n)
}

/// Checks the first four MacWilliams power-moment identities (with B₁ = 0)
/// and returns the implied (B₂, B₃):
///   Σ_{i>0} A_i = 2^k − 1,
///   Σ i·A_i   = 2^{k−1} n,
///   Σ i²·A_i  = 2^{k−1}(B₂ + n(n+1)/2),
///   Σ i³·A_i  = 2^{k−2}(3(B₂n − B₃) + n²(n+3)/2).
pub fn first_identities_check(
    a: &BTreeMap<u64, u64>,
    n: u64,
    k: u8,
) -> Result<(BigInt, BigInt), CodeError> {
    let positive: u64 = a.iter().filter(|&(&w, _)| w > 0).map(|(_, &c)| c).sum();
    if positive != (1u64 << k) - 1 || a.get(&0).copied().unwrap_or(0) != 1 {
        return Err(CodeError::BadDistribution(format!(
            "Σ_{{i>0}} A_i = {positive} ≠ 2^{k} − 1"
        )));
    }
    let mut m1 = BigInt::zero();
    let mut m2 = BigInt::zero();
    let mut m3 = BigInt::zero();
    for (&w, &c) in a {
        let w = BigInt::from(w);
        let c = BigInt::from(c);
        m1 += &w * &c;
        m2 += &w * &w * &c;
        m3 += &w * &w * &w * &c;
    }
    let n_big = BigInt::from(n);
    let pow = |e: u32| BigInt::from(1u8) << e;
    if m1 != pow(k as u32 - 1) * &n_big {
        return Err(CodeError::BadDistribution(format!(
            "Σ iA_i = {m1} ≠ 2^{}·{n}",
            k - 1
        )));
    }
    let half = |x: BigInt| BigRational::new(x, BigInt::from(2));
    // B₂ from the third identity.
    let b2 = BigRational::from(m2) / BigRational::from(pow(k as u32 - 1))
        - half(&n_big * (&n_big + BigInt::one()));
    // B₃ from the fourth identity.
    let lhs = BigRational::from(m3) / BigRational::from(pow(k as u32 - 2));
    let b3 = (&b2 * BigRational::from(n_big.clone())
        - (lhs - half(&n_big * &n_big * (&n_big + BigInt::from(3))))
            / BigRational::from(BigInt::from(3)))
        .clone();
    for (name, v) in [("B₂", &b2), ("B₃", &b3)] {
        if !v.is_integer() || v.is_negative() {
            return Err(CodeError::BadDistribution(format!(
                "{name} = {v} is not a non-negative integer"
            )));
        }
    }
    Ok((b2.to_integer(), b3.to_integer()))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum CountCase {
    /// T < 2^{k−a}.
    Low,
    /// 2^{k−a} ≤ T ≤ 2^k − 2^{k−a}: only the divisibility condition applies.
    Middle,
    /// T > 2^k − 2^{k−a}.
    High,
}

/// Outcome of the doubly-even count conditions for 2^a-divisible codes.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct DivisibleCountReport {
    /// T = Σ_i A_{2Δi} including the zero word.
    pub t_count: u64,
    pub case: CountCase,
    /// Condition (1): 2^{⌊(k−1)/(a+1)⌋} divides T.
    pub divisor_ok: bool,
    /// The t parameter of cases (2)/(3), when T has the required shape.
    pub t_param: Option<u32>,
    /// δ = smallest positive weight divisible by 2Δ, if any.
    pub delta: Option<u64>,
    /// Implied [n, k', δ] subcode from cases (2)/(3).
    pub implied_subcode: Option<(u64, u8, u64)>,
    /// All conditions consistent with a genuine code.
    pub admissible: bool,
}

/// Count conditions for 2^a-divisible [n,k] codes: with T = Σ A_{2Δi},
/// (1) 2^{⌊(k−1)/(a+1)⌋} | T; (2) T < 2^{k−a} forces T = 2^{k−a} − 2^{k−a−t};
/// (3) T > 2^k − 2^{k−a} forces T = 2^k − 2^{k−a} + 2^{k−a−t}; both with
/// bounded t and an implied subcode of the stated dimension.
pub fn divisible_count_check(
    a_dist: &BTreeMap<u64, u64>,
    k: u8,
    a: u32,
) -> Result<DivisibleCountReport, CodeError> {
    let delta_w = 1u64 << a;
    for (&w, &c) in a_dist {
        if c > 0 && w % delta_w != 0 {
            return Err(CodeError::NotDivisible { w, a });
        }
    }
    let two_delta = 2 * delta_w;
    let t_count: u64 = a_dist
        .iter()
        .filter(|&(&w, _)| w % two_delta == 0)
        .map(|(_, &c)| c)
        .sum();
    let delta = a_dist
        .iter()
        .filter(|&(&w, &c)| w > 0 && c > 0 && w % two_delta == 0)
        .map(|(&w, _)| w)
        .min();
    let ka = k as u32 - a; // k − a (a < k for meaningful codes)
    let alpha = (k as i64 - a as i64 - 1).min(a as i64 + 1);
    let beta = (k as i64 - a as i64 + 1) / 2;
    let t_max = alpha.max(beta);
    let divisor = 1u64 << ((k as u32 - 1) / (a + 1));
    let divisor_ok = t_count % divisor == 0;
    let low_bar = 1u64 << ka;
    let high_bar = (1u64 << k) - low_bar;
    let n_len = a_dist.keys().copied().max().unwrap_or(0);

    let (case, t_param, shape_ok, implied_subcode) = if t_count < low_bar {
        // T = 2^{k−a} − 2^{k−a−t}
        let gap = low_bar - t_count;
        let t = gap
            .is_power_of_two()
            .then(|| ka.checked_sub(gap.trailing_zeros()))
            .flatten();
        match t {
            Some(t) if (1..=t_max.max(0) as u32).contains(&t) => {
                let sub_k = if (t as i64) > beta {
                    k as i64 - a as i64 - 2
                } else {
                    k as i64 - a as i64 - t as i64
                };
                let sub = delta
                    .filter(|_| sub_k >= 1)
                    .map(|d| (n_len, sub_k as u8, d));
                (CountCase::Low, Some(t), true, sub)
            }
            _ => (CountCase::Low, None, false, None),
        }
    } else if t_count > high_bar {
        // T = 2^k − 2^{k−a} + 2^{k−a−t}
        let gap = t_count - high_bar;
        let t = gap
            .is_power_of_two()
            .then(|| ka.checked_sub(gap.trailing_zeros()))
            .flatten();
        match t {
            Some(t) if (t as i64) <= t_max => {
                let sub_k = if a == 1 {
                    k as i64 - t as i64
                } else if t == a + 1 && (a as i64 + 1) <= k as i64 - a as i64 - 1 {
                    k as i64 - 2
                } else {
                    k as i64 - 1
                };
                let sub = delta
                    .filter(|_| sub_k >= 1)
                    .map(|d| (n_len, sub_k as u8, d));
                (CountCase::High, Some(t), true, sub)
            }
            _ => (CountCase::High, None, false, None),
        }
    } else {
        (CountCase::Middle, None, true, None)
    };

    Ok(DivisibleCountReport {
        t_count,
        case,
        divisor_ok,
        t_param,
        delta,
        implied_subcode,
        admissible: divisor_ok && shape_ok,
    })
}

/// External table of minimal lengths n_min(k,d) of binary linear codes.
/// Missing entries mean "unknown": the oracle then cannot exclude.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NminTable {
    entries: BTreeMap<(u8, u64), u64>,
}

impl NminTable {
    /// Parses `k,d,n_min` lines; '#' starts a comment.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let stripped = stripped.trim();
            if stripped.is_empty() {
                continue;
            }
            let parts: Vec<&str> = stripped.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(CodeError::TableParse {
                    line,
                    msg: format!("expected `k,d,n_min`, got {stripped:?}"),
                });
            }
            let k: u8 = parts[0].parse().map_err(|e| CodeError::TableParse {
                line,
                msg: format!("bad k: {e}"),
            })?;
            let d: u64 = parts[1].parse().map_err(|e| CodeError::TableParse {
                line,
                msg: format!("bad d: {e}"),
            })?;
            let n_min: u64 = parts[2].parse().map_err(|e| CodeError::TableParse {
                line,
                msg: format!("bad n_min: {e}"),
            })?;
            let g = griesmer(k, d).map_err(|_| CodeError::TableParse {
                line,
                msg: format!("bad parameters k={k}, d={d}"),
            })?;
            if n_min < g {
                return Err(CodeError::TableParse {
                    line,
                    msg: format!("n_min({k},{d}) = {n_min} below Griesmer bound {g}"),
                });
            }
            entries.insert((k, d), n_min);
        }
        Ok(NminTable { entries })
    }

    pub fn lookup(&self, k: u8, d: u64) -> Option<u64> {
        self.entries.get(&(k, d)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, u64, u64)> + '_ {
        self.entries.iter().map(|(&(k, d), &n)| (k, d, n))
    }
}

/// Why an [n,k,d] code is impossible.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum DenyReason {
    /// g(k,d) exceeds n.
    Griesmer { bound: u64 },
    /// The external table's minimal length exceeds n.
    Table { n_min: u64 },
}

/// Nonexistence oracle for [n,k,d]₂ codes: the Griesmer bound, optionally
/// sharpened by an external n_min table.
#[derive(Clone, Debug, Default)]
pub struct NonexistenceOracle {
    table: Option<NminTable>,
}

impl NonexistenceOracle {
    pub fn griesmer_only() -> Self {
        NonexistenceOracle { table: None }
    }

    pub fn with_table(table: NminTable) -> Self {
        NonexistenceOracle { table: Some(table) }
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn table(&self) -> Option<&NminTable> {
        self.table.as_ref()
    }

    /// Returns the reason an [n,k,d] code cannot exist, or `None` when the
    /// oracle cannot exclude it. d = 0 is never denied.
    pub fn deny(&self, n: u64, k: u8, d: u64) -> Option<DenyReason> {
        if d == 0 || k == 0 {
            return None;
        }
        let g = griesmer(k, d).ok()?;
        if g > n {
            return Some(DenyReason::Griesmer { bound: g });
        }
        if let Some(table) = &self.table {
            if let Some(n_min) = table.lookup(k, d) {
                if n_min > n {
                    return Some(DenyReason::Table { n_min });
                }
            }
        }
        None
    }
}

/// Justification tag for a derived constraint.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum Justification {
    /// Point-expansion contract: length 3n, dim r, min dist 2(n−s), max 2n.
    Expansion,
    /// Griesmer-attaining divisibility.
    Ward,
    /// Residual-code Griesmer filtering.
    GriesmerResidual,
    /// External n_min table applied to a residual.
    ExternalTable,
    /// Counting points of PG(r−1,2).
    PointCount,
}

/// A weight ruled out by its residual code.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct WeightExclusion {
    /// The denied residual parameters [n', k', d'].
    pub residual: (u64, u8, u64),
    pub reason: DenyReason,
    pub tag: Justification,
}

/// Parameter sheet of the hypothetical [3n, r, 2(n−s)] code of an (n,r,s)
/// system, with per-field justification.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct CodeConstraintProfile {
    pub n: u64,
    pub r: u8,
    pub s: u64,
    pub length: u64,
    pub dimension: u8,
    pub min_dist: u64,
    /// Largest admissible weight: 2n, rounded down to the Δ-grid.
    pub max_weight: u64,
    pub divisibility: u64,
    pub divisibility_tag: Justification,
    /// Denial of the base [3n, r, 2(n−s)] parameters themselves, if any.
    pub base_denial: Option<DenyReason>,
    /// Excluded weights on the Δ-grid within [min_dist, max_weight].
    pub excluded_weights: BTreeMap<u64, WeightExclusion>,
    /// ⌈3n / (2^r − 1)⌉: some point must repeat this often.
    pub multiplicity_floor: u64,
    /// Largest m such that the oracle admits a [3n−m, r−1, 2(n−s)] code.
    pub multiplicity_cap: Option<u64>,
    /// Reason the cap binds (denial at cap+1).
    pub cap_denial: Option<(u64, u8, u64, DenyReason)>,
    /// Set when floor = cap.
    pub exact_multiplicity: Option<u64>,
    /// True when no external table entries were consulted successfully.
    pub griesmer_limited: bool,
}

/// Derives the constraint profile of the hypothetical expansion code of an
/// (n,r,s) system: base parameters from the expansion contract, divisibility
/// via the Griesmer-attaining criterion (else 2), residual-filtered weight
/// exclusions, and point-multiplicity bounds.
pub fn derive_constraints(
    n: u64,
    r: u8,
    s: u64,
    oracle: &NonexistenceOracle,
) -> Result<CodeConstraintProfile, CodeError> {
    if r <= 2 || n <= s {
        return Err(CodeError::GriesmerDomain { k: r, d: 0 });
    }
    let length = 3 * n;
    let d = 2 * (n - s);
    let (divisibility, divisibility_tag) = match ward_divisibility(length, r, d) {
        Some(delta) if delta > 2 => (delta, Justification::Ward),
        _ => (2, Justification::Expansion),
    };
    let max_weight = (2 * n) - (2 * n) % divisibility;
    let base_denial = oracle.deny(length, r, d);

    let mut used_table = false;
    let mut excluded_weights = BTreeMap::new();
    let mut w = d;
    while w <= max_weight {
        if w < 2 * d {
            let (rn, rk, rd) = residual_params(length, r, d, w)?;
            if let Some(reason) = oracle.deny(rn, rk, rd) {
                let tag = match reason {
                    DenyReason::Griesmer { .. } => Justification::GriesmerResidual,
                    DenyReason::Table { .. } => {
                        used_table = true;
                        Justification::ExternalTable
                    }
                };
                excluded_weights.insert(w, WeightExclusion { residual: (rn, rk, rd), reason, tag });
            }
        }
        w += divisibility;
    }

    let points = (1u64 << r) - 1;
    let multiplicity_floor = length.div_ceil(points);
    // A point of multiplicity m yields a [3n−m, r−1, d] code (restrict to the
    // codewords vanishing at the point and delete its m zero coordinates).
    let mut multiplicity_cap = None;
    let mut cap_denial = None;
    let mut m = 1u64;
    while m <= length {
        match oracle.deny(length - m, r - 1, d) {
            Some(reason) => {
                if matches!(reason, DenyReason::Table { .. }) {
                    used_table = true;
                }
                multiplicity_cap = Some(m - 1);
                cap_denial = Some((length - m, r - 1, d, reason));
                break;
            }
            None => m += 1,
        }
    }
    let exact_multiplicity = match multiplicity_cap {
        Some(cap) if cap == multiplicity_floor => Some(cap),
        _ => None,
    };

    Ok(CodeConstraintProfile {
        n,
        r,
        s,
        length,
        dimension: r,
        min_dist: d,
        max_weight,
        divisibility,
        divisibility_tag,
        base_denial,
        excluded_weights,
        multiplicity_floor,
        multiplicity_cap,
        cap_denial,
        exact_multiplicity,
        griesmer_limited: !used_table,
    })
}
