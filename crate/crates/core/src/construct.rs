//! Constructive machinery: Desarguesian line spreads, MRD-lifted vector
//! space partitions, partial-spread systems, partition types σ[r]−Σεᵢ[i]
//! with exact parameter formulas, their realization on the canonical chain,
//! the Griesmer parameterization, surplus, and asymptotic families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{
    enumerate_lines, enumerate_points, GeomError, Gf2Vector, Line, Subspace, MAX_ENUM_R,
};
use crate::system::{verify_system, LineSystem, SystemError, SystemReport, VerifyFailure};

/// Size guard for realized systems.
pub const MAX_REALIZE_LINES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("line spreads exist only for even r (got r={0})")]
    SpreadParity(u8),
    #[error("r={0} outside the supported range {1}..={2}")]
    DimOutOfRange(u8, u8, u8),
    #[error("need r > a > 2 with r ≡ a (mod 2), got r={r}, a={a}")]
    VspDomain { r: u8, a: u8 },
    #[error("not a valid type: {0}")]
    InvalidType(String),
    #[error("type string {0:?}: {1}")]
    ParseType(String, String),
    #[error("type parameters require a concrete σ, got ⋆")]
    StarSigma,
    #[error("realization requires ε₁ = 0, got ε₁={0}")]
    Epsilon1(i64),
    #[error(
        "not partitionable: Σ εᵢ(2^i−1) = {lhs} ≢ 0 (mod {modulus})"
    )]
    NotPartitionable { lhs: i64, modulus: i64 },
    #[error("σ={requested} unreachable: construction needs σ ≡ {minimal} (mod {step}), σ ≥ {minimal}")]
    SigmaUnreachable { requested: u64, minimal: u64, step: u64 },
    #[error("surplus is negative (θ={0}): n exceeds the Griesmer upper bound")]
    NegativeSurplus(i64),
    #[error("realized system would exceed {MAX_REALIZE_LINES} lines")]
    TooLarge,
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Code(#[from] crate::code::CodeError),
    #[error("instantiation verified wrong parameters: {0}")]
    VerifyFailed(#[from] VerifyFailure),
}

// ---------------------------------------------------------------------------
// GF(2^m) polynomial arithmetic (bitmask coefficients, bit i = zⁱ).

fn poly_deg(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_deg(b);
    while poly_deg(a) >= db && a != 0 {
        a ^= b << (poly_deg(a) - db);
    }
    a
}

fn poly_irreducible(p: u32) -> bool {
    let d = poly_deg(p);
    if d < 1 || p & 1 == 0 {
        return d == 1 && p == 2; // only z itself, never used here
    }
    for q in 2..1u32 << (d / 2 + 1) {
        if poly_deg(q) >= 1 && poly_rem(p, q) == 0 {
            return false;
        }
    }
    true
}

/// Lexicographically least irreducible polynomial of degree m over GF(2).
fn least_irreducible(m: u32) -> u32 {
    let base = 1u32 << m;
    (base..2 * base)
        .find(|&p| poly_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

/// Multiplication in F_{2^m} = F₂[z]/(p).
fn gf_mul(a: u32, b: u32, p: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    for i in 0..m {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    let mut acc = acc;
    while poly_deg(acc) >= m as i32 {
        acc ^= p << (poly_deg(acc) - m as i32);
    }
    acc
}

// ---------------------------------------------------------------------------
// Spreads and vector space partitions.

/// The Desarguesian line spread of PG(r−1,2) for even r: lines
/// {p, T(p), p⊕T(p)} where T applies (a,b) ↦ (b, a⊕b) to each 2-bit block
/// (scalar multiplication by a primitive cube root of unity in GF(4)).
pub fn line_spread(r: u8) -> Result<LineSystem, ConstructError> {
    if r % 2 != 0 {
        return Err(ConstructError::SpreadParity(r));
    }
    if !(4..=MAX_ENUM_R).contains(&r) {
        return Err(ConstructError::DimOutOfRange(r, 4, MAX_ENUM_R));
    }
    let t = |p: u32| -> u32 {
        let mut out = 0u32;
        for j in 0..(r as u32 / 2) {
            let a = p >> (2 * j) & 1;
            let b = p >> (2 * j + 1) & 1;
            out |= b << (2 * j) | (a ^ b) << (2 * j + 1);
        }
        out
    };
    let mut seen = vec![false; 1 << r];
    let mut lines = Vec::new();
    for p in 1u32..1 << r {
        if seen[p as usize] {
            continue;
        }
        let q = t(p);
        for x in [p, q, p ^ q] {
            seen[x as usize] = true;
        }
        lines.push(Line::from_points(
            Gf2Vector::new(p, r).expect("in range"),
            Gf2Vector::new(q, r).expect("in range"),
        )?);
    }
    Ok(LineSystem::from_lines(r, lines)?)
}

/// A multiset of subspaces covering every nonzero point exactly once.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorSpacePartition {
    r: u8,
    members: Vec<Subspace>,
}

impl VectorSpacePartition {
    /// Validates the exact-cover property at construction.
    pub fn new(r: u8, members: Vec<Subspace>) -> Result<Self, ConstructError> {
        if r > MAX_ENUM_R {
            return Err(ConstructError::DimOutOfRange(r, 2, MAX_ENUM_R));
        }
        let mut cover = vec![0u32; 1 << r];
        for m in &members {
            if m.r() != r {
                return Err(ConstructError::Domain(format!(
                    "member of ambient dimension {} in PG({},2)",
                    m.r(),
                    r - 1
                )));
            }
            for p in m.points() {
                cover[p.bits() as usize] += 1;
            }
        }
        if let Some(p) = (1..1u32 << r).find(|&p| cover[p as usize] != 1) {
            return Err(ConstructError::Domain(format!(
                "point {p:#x} covered {} times",
                cover[p as usize]
            )));
        }
        Ok(VectorSpacePartition { r, members })
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    /// Type signature: dimension → member count.
    pub fn type_signature(&self) -> BTreeMap<usize, u64> {
        let mut sig = BTreeMap::new();
        for m in &self.members {
            *sig.entry(m.dim()).or_insert(0) += 1;
        }
        sig
    }
}

/// Lines of one MRD level: at bit offset `off` inside an ambient space of
/// dimension `ambient`, the local space has dimension `dim` and the lines are
/// spanned by (e₁ | x) and (e₂ | γx) for x ∈ F_{2^{dim−2}} with γ = z.
fn mrd_level_lines(ambient: u8, off: u32, dim: u8) -> Vec<Line> {
    let m = dim as u32 - 2;
    let p = least_irreducible(m);
    let gamma = 0b10u32;
    let mut lines = Vec::with_capacity(1 << m);
    for x in 0u32..1 << m {
        let u = (1 | x << 2) << off;
        let v = (2 | gf_mul(gamma, x, p, m) << 2) << off;
        lines.push(
            Line::from_points(
                Gf2Vector::new(u, ambient).expect("in range"),
                Gf2Vector::new(v, ambient).expect("in range"),
            )
            .expect("distinct unit blocks give rank 2"),
        );
    }
    lines
}

fn trailing_subspace(r: u8, off: u32, dim: u8) -> Subspace {
    let basis: Vec<Gf2Vector> = (0..dim as u32)
        .map(|j| Gf2Vector::new(1 << (off + j), r).expect("in range"))
        .collect();
    crate::geom::rref(&basis).expect("independent unit vectors")
}

/// Internal: lines of the partition of type 2^{t₂} a^1 plus the bit offset of
/// the trailing a-space.
fn vsp_lines(r: u8, a: u8) -> Result<(Vec<Line>, u32), ConstructError> {
    if !(r > a && a > 2 && r % 2 == a % 2) {
        return Err(ConstructError::VspDomain { r, a });
    }
    if r > MAX_ENUM_R {
        return Err(ConstructError::DimOutOfRange(r, 4, MAX_ENUM_R));
    }
    let mut lines = Vec::new();
    let mut off = 0u32;
    let mut dim = r;
    while dim > a {
        lines.extend(mrd_level_lines(r, off, dim));
        off += 2;
        dim -= 2;
    }
    Ok((lines, off))
}

/// Vector space partition of PG(r−1,2) of type 2^{t₂} a^1 with
/// t₂ = 2^a (2^{r−a}−1)/3, by recursively replacing the co-dimension-2
/// member of the MRD lift.
pub fn vsp_2a(r: u8, a: u8) -> Result<VectorSpacePartition, ConstructError> {
    let (lines, off) = vsp_lines(r, a)?;
    let mut members: Vec<Subspace> = lines.iter().map(|l| l.subspace()).collect();
    members.push(trailing_subspace(r, off, a));
    VectorSpacePartition::new(r, members)
}

/// Vector space partition of type 2^{2^{r−2}} (r−2)^1 from a rank-distance-2
/// MRD code prefixed by 2×2 unit matrices.
pub fn mrd_lifted_partition(r: u8) -> Result<VectorSpacePartition, ConstructError> {
    if r <= 4 {
        return Err(ConstructError::DimOutOfRange(r, 5, MAX_ENUM_R));
    }
    vsp_2a(r, r - 2)
}

/// The line part of [`vsp_2a`], remapped so that the uncovered a-space is the
/// canonical span{e₁,…,eₐ}; returns (system, s, s_A) where every hyperplane
/// holds at most s = 2^{a−2}(2^{r−a}−1)/3 lines and the hyperplanes through
/// the a-space hold exactly s − 2^{a−2}.
pub fn partial_spread_system(r: u8, a: u8) -> Result<(LineSystem, u64, u64), ConstructError> {
    let (lines, off) = vsp_lines(r, a)?;
    debug_assert_eq!(off, (r - a) as u32);
    // Rotate bits so the hole moves from the trailing positions to the low
    // positions: bit (r−a)+j ↦ j, bit j ↦ a+j.
    let remap = |bits: u32| -> u32 {
        let mut out = 0u32;
        for j in 0..r as u32 {
            if bits >> j & 1 == 1 {
                let dst = if j >= off { j - off } else { a as u32 + j };
                out |= 1 << dst;
            }
        }
        out
    };
    let mapped: Vec<Line> = lines
        .iter()
        .map(|l| {
            let [p, q, _] = l.point_bits();
            Line::from_points(
                Gf2Vector::new(remap(p), r).expect("in range"),
                Gf2Vector::new(remap(q), r).expect("in range"),
            )
            .expect("bit permutations preserve rank")
        })
        .collect();
    let s = (1u64 << (a - 2)) * ((1u64 << (r - a)) - 1) / 3;
    let s_a = s - (1u64 << (a - 2));
    Ok((LineSystem::from_lines(r, mapped)?, s, s_a))
}

/// Re-interprets a system in a larger ambient space (same point bitmasks).
pub fn embed(sys: &LineSystem, r: u8) -> Result<LineSystem, ConstructError> {
    if r < sys.r() {
        return Err(ConstructError::Domain(format!(
            "cannot embed dimension {} into {}",
            sys.r(),
            r
        )));
    }
    let entries = sys.iter().map(|(line, mult)| {
        let [p, q, _] = line.point_bits();
        let lifted = Line::from_points(
            Gf2Vector::new(p, r).expect("in range"),
            Gf2Vector::new(q, r).expect("in range"),
        )
        .expect("embedding preserves rank");
        (lifted, mult)
    });
    Ok(LineSystem::new(r, entries.collect::<Vec<_>>())?)
}

// ---------------------------------------------------------------------------
// Partition types.

/// A type σ[r] − Σ εᵢ[i] on the canonical chain Sᵢ = span{e₁,…,eᵢ}; σ may be
/// unspecified (⋆).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionType {
    r: u8,
    sigma: Option<u64>,
    /// eps[i−1] = εᵢ for 1 ≤ i ≤ r−1.
    eps: Vec<i64>,
}

impl PartitionType {
    pub fn new(r: u8, sigma: Option<u64>, eps: Vec<i64>) -> Result<Self, ConstructError> {
        if r < 3 || r > MAX_ENUM_R {
            return Err(ConstructError::DimOutOfRange(r, 3, MAX_ENUM_R));
        }
        if eps.len() != r as usize - 1 {
            return Err(ConstructError::InvalidType(format!(
                "expected {} ε-values, got {}",
                r - 1,
                eps.len()
            )));
        }
        Ok(PartitionType { r, sigma, eps })
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn sigma(&self) -> Option<u64> {
        self.sigma
    }

    pub fn with_sigma(&self, sigma: u64) -> PartitionType {
        PartitionType { r: self.r, sigma: Some(sigma), eps: self.eps.clone() }
    }

    /// εᵢ for 1 ≤ i ≤ r−1.
    pub fn eps(&self, i: u8) -> i64 {
        self.eps[i as usize - 1]
    }

    pub fn eps_slice(&self) -> &[i64] {
        &self.eps
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sigma {
            Some(s) => write!(f, "{s}[{}]", self.r)?,
            None => write!(f, "*[{}]", self.r)?,
        }
        for i in (1..self.r).rev() {
            let e = self.eps(i);
            if e > 0 {
                write!(f, "-{e}[{i}]")?;
            } else if e < 0 {
                write!(f, "+{}[{i}]", -e)?;
            }
        }
        Ok(())
    }
}

impl FromStr for PartitionType {
    type Err = ConstructError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |msg: &str| ConstructError::ParseType(text.to_string(), msg.to_string());
        // Split into signed terms.
        let mut terms: Vec<(i64, &str)> = Vec::new();
        let mut rest = s.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        while !rest.is_empty() {
            let next = rest[1..]
                .find(['+', '-'])
                .map(|p| p + 1)
                .unwrap_or(rest.len());
            terms.push((sign, &rest[..next]));
            if next == rest.len() {
                break;
            }
            sign = if rest.as_bytes()[next] == b'-' { -1 } else { 1 };
            rest = &rest[next + 1..];
        }
        if terms.is_empty() {
            return Err(err("empty type"));
        }
        let parse_term = |t: &str| -> Result<(Option<u64>, u8), ConstructError> {
            let open = t.find('[').ok_or_else(|| err("missing '['"))?;
            if !t.ends_with(']') {
                return Err(err("missing ']'"));
            }
            let coef = &t[..open];
            let idx: u8 = t[open + 1..t.len() - 1]
                .parse()
                .map_err(|_| err("bad bracket index"))?;
            let coef = if coef == "*" || coef == "⋆" {
                None
            } else {
                Some(coef.parse::<u64>().map_err(|_| err("bad coefficient"))?)
            };
            Ok((coef, idx))
        };
        let (lead_sign, lead) = terms[0];
        let (sigma, r) = parse_term(lead)?;
        if lead_sign < 0 {
            return Err(err("leading σ[r] term cannot be negative"));
        }
        if r < 3 || r > MAX_ENUM_R {
            return Err(err("ambient term [r] needs 3 ≤ r ≤ 16"));
        }
        let mut eps = vec![0i64; r as usize - 1];
        for &(sign, t) in &terms[1..] {
            let (coef, i) = parse_term(t)?;
            let Some(coef) = coef else {
                return Err(err("⋆ is only allowed for σ"));
            };
            if i == 0 || i >= r {
                return Err(err("ε index must satisfy 1 ≤ i ≤ r−1"));
            }
            // "−ε[i]" subtracts the i-space: εᵢ = +coef.
            eps[i as usize - 1] += -sign * coef as i64;
        }
        PartitionType::new(r, sigma, eps)
    }
}

/// Parameters derived from a concrete type via the counting formulas.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct TypeParams {
    pub n: u64,
    pub s: u64,
    pub s1: i64,
    /// s_j = s₁ − Σ_{i<j} εᵢ2^{i−2} for j = 1..=r.
    pub s_profile: Vec<i64>,
}

/// n, s and the hyperplane profile of a type:
/// n = (σ(2ʳ−1) − Σεᵢ(2ⁱ−1))/3,
/// s₁ = (σ(2^{r−2}−1) − Σ_{i≥2}εᵢ(2^{i−2}−1) + ε₁/2)/3,
/// s = max_j s_j.
pub fn type_parameters(t: &PartitionType) -> Result<TypeParams, ConstructError> {
    let Some(sigma) = t.sigma() else {
        return Err(ConstructError::StarSigma);
    };
    let r = t.r() as u32;
    let sigma = sigma as i128;
    let e = |i: u32| t.eps(i as u8) as i128;
    if e(1) % 2 != 0 {
        return Err(ConstructError::InvalidType(format!(
            "ε₁ = {} is odd (s₂ would not be an integer)",
            e(1)
        )));
    }
    let pow = |x: u32| (1i128 << x) - 1;
    let n_num = sigma * pow(r) - (1..r).map(|i| e(i) * pow(i)).sum::<i128>();
    if n_num % 3 != 0 {
        return Err(ConstructError::InvalidType(format!(
            "σ(2ʳ−1) − Σεᵢ(2ⁱ−1) = {n_num} ≢ 0 (mod 3)"
        )));
    }
    let n = n_num / 3;
    if n < 1 {
        return Err(ConstructError::InvalidType(format!("n = {n} < 1")));
    }
    let s1_num = sigma * pow(r - 2) - (2..r).map(|i| e(i) * pow(i - 2)).sum::<i128>() + e(1) / 2;
    if s1_num % 3 != 0 {
        return Err(ConstructError::InvalidType(format!(
            "s₁ numerator {s1_num} ≢ 0 (mod 3)"
        )));
    }
    let s1 = s1_num / 3;
    let mut s_profile = Vec::with_capacity(r as usize);
    let mut acc = 0i128; // Σ_{i<j} εᵢ 2^{i−2}, using ε₁/2 for the i=1 term
    for j in 1..=r {
        s_profile.push((s1 - acc) as i64);
        if j < r {
            acc += if j == 1 { e(1) / 2 } else { e(j) * (1i128 << (j - 2)) };
        }
    }
    let s = *s_profile.iter().max().expect("nonempty");
    if s_profile.iter().any(|&v| v < 0) {
        return Err(ConstructError::InvalidType(format!(
            "negative hyperplane count in profile {s_profile:?}"
        )));
    }
    Ok(TypeParams { n: n as u64, s: s as u64, s1: s1 as i64, s_profile })
}

// ---------------------------------------------------------------------------
// Griesmer parameterization and surplus.

/// Writes d = σ2^{k−1} − Σ εᵢ2^{i−1} with εᵢ ∈ {0,1}; then
/// g(k,d) = σ(2^k−1) − Σεᵢ(2^i−1).
pub fn griesmer_rep(k: u8, d: u64) -> Result<(u64, Vec<u8>), ConstructError> {
    if k == 0 || k > 32 || d == 0 {
        return Err(ConstructError::Domain(format!("griesmer_rep({k},{d})")));
    }
    let block = 1u64 << (k - 1);
    let sigma = d.div_ceil(block);
    let delta = sigma * block - d;
    debug_assert!(delta < block);
    let eps = (1..k as u32).map(|i| (delta >> (i - 1) & 1) as u8).collect();
    Ok((sigma, eps))
}

/// Surplus θ(n,r,s) = 3n − g(r, 2(n−s)); negative iff n exceeds the Griesmer
/// upper bound.
pub fn surplus(n: u64, r: u8, s: u64) -> Result<i64, ConstructError> {
    if !(n > s && s >= 1 && r > 2) {
        return Err(ConstructError::Domain(format!("surplus({n},{r},{s})")));
    }
    let g = crate::code::griesmer(r, 2 * (n - s))?;
    Ok(3 * n as i64 - g as i64)
}

// ---------------------------------------------------------------------------
// Realization of types (generalized Solomon–Stiffler construction).

/// A realized type: the system together with the σ the construction produced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Realization {
    pub system: LineSystem,
    pub sigma: u64,
}

struct Accumulator {
    r: u8,
    map: BTreeMap<Line, u64>,
    total: u64,
}

impl Accumulator {
    fn new(r: u8) -> Self {
        Accumulator { r, map: BTreeMap::new(), total: 0 }
    }

    fn add(&mut self, sys: &LineSystem, times: u64) -> Result<(), ConstructError> {
        if times == 0 {
            return Ok(());
        }
        debug_assert_eq!(sys.r(), self.r);
        self.total += sys.n() * times;
        if self.total > MAX_REALIZE_LINES {
            return Err(ConstructError::TooLarge);
        }
        for (line, mult) in sys.iter() {
            *self.map.entry(*line).or_insert(0) += mult * times;
        }
        Ok(())
    }

    fn subtract(&mut self, sys: &LineSystem) -> bool {
        // All-or-nothing multiset subtraction.
        for (line, mult) in sys.iter() {
            if self.map.get(line).copied().unwrap_or(0) < mult {
                return false;
            }
        }
        for (line, mult) in sys.iter() {
            let slot = self.map.get_mut(line).expect("checked");
            *slot -= mult;
            if *slot == 0 {
                self.map.remove(line);
            }
        }
        self.total -= sys.n();
        true
    }

    fn n(&self) -> u64 {
        self.map.values().sum()
    }

    fn into_system(self) -> Result<LineSystem, ConstructError> {
        Ok(LineSystem::new(self.r, self.map)?)
    }
}

/// All seven lines of the Fano plane span{e₁,e₂,e₃}, as a system in dim r.
fn fano_cover(r: u8) -> Result<LineSystem, ConstructError> {
    let fano = LineSystem::from_lines(3, enumerate_lines(3)?)?;
    embed(&fano, r)
}

/// A triple cover of PG(j−1,2) by lines, for odd j ≥ 3 (the 3[j] piece).
pub fn triple_cover(j: u8) -> Result<LineSystem, ConstructError> {
    if j % 2 == 0 || j < 3 {
        return Err(ConstructError::Domain(format!(
            "triple covers are the odd-dimension pieces (got {j})"
        )));
    }
    if j == 3 {
        return fano_cover(3);
    }
    let mut acc = Accumulator::new(j);
    acc.add(&fano_cover(j)?, 1)?;
    acc.add(&partial_spread_system(j, 3)?.0, 3)?;
    acc.into_system()
}

/// A single cover of the subspace span{e₁,…,eᵢ} (even i): a spread.
fn even_cover(r: u8, i: u8) -> Result<LineSystem, ConstructError> {
    let inner = if i == 2 {
        let e1 = Gf2Vector::new(1, 2).expect("in range");
        let e2 = Gf2Vector::new(2, 2).expect("in range");
        LineSystem::from_lines(2, vec![Line::from_points(e1, e2)?])?
    } else {
        line_spread(i)?
    };
    embed(&inner, r)
}

/// The [r]−[i] piece for i ≡ r (mod 2): a spread minus the line span{e₁,e₂}
/// for i = 2, else the partial-spread system with hole span{e₁,…,eᵢ}.
fn same_parity_piece(r: u8, i: u8) -> Result<LineSystem, ConstructError> {
    if i == 2 {
        let spread = line_spread(r)?;
        let e1 = Gf2Vector::new(1, r).expect("in range");
        let e2 = Gf2Vector::new(2, r).expect("in range");
        let line = Line::from_points(e1, e2)?;
        spread
            .checked_subtract(&line, 1)
            .ok_or_else(|| ConstructError::Domain("spread misses span{e₁,e₂}".into()))
            .map_err(Into::into)
    } else {
        Ok(partial_spread_system(r, i)?.0)
    }
}

/// All lines of PG(r−1,2) not contained in the hyperplane span{e₁,…,e_{r−1}}.
fn lines_outside_hyperplane(r: u8) -> Result<LineSystem, ConstructError> {
    let top = 1u32 << (r - 1);
    let lines: Vec<Line> = enumerate_lines(r)?
        .into_iter()
        .filter(|l| l.point_bits().iter().any(|&p| p & top != 0))
        .collect();
    Ok(LineSystem::from_lines(r, lines)?)
}

/// The hyperplane piece consuming ε_{r−1}: for odd r it has type
/// (2^{r−1}−1)[r] − 1[r−1]; for even r, (2^{r−1}−1)[r] − 3[r−1].
/// Returns (system, σ contribution, ε units consumed).
fn hyperplane_piece(r: u8) -> Result<(LineSystem, u64, u64), ConstructError> {
    let mut acc = Accumulator::new(r);
    acc.add(&lines_outside_hyperplane(r)?, 1)?;
    let sigma = (1u64 << (r - 1)) - 1;
    if r % 2 == 1 {
        // r−1 even: spreads of S_{r−1}; inside multiplicity 2^{r−2} + c = σ−1.
        let c = (1u64 << (r - 2)) - 2;
        acc.add(&even_cover(r, r - 1)?, c)?;
        Ok((acc.into_system()?, sigma, 1))
    } else {
        // r−1 odd: triple covers; inside multiplicity 2^{r−2} + 3·c/3 = σ−3.
        let c = (1u64 << (r - 2)) - 4;
        acc.add(&embed(&triple_cover(r - 1)?, r)?, c / 3)?;
        Ok((acc.into_system()?, sigma, 3))
    }
}

/// The full cover used to bump σ by one step: a spread (even r) or a triple
/// cover (odd r).
fn full_cover(r: u8) -> Result<(LineSystem, u64), ConstructError> {
    if r % 2 == 0 {
        Ok((line_spread(r)?, 1))
    } else {
        Ok((triple_cover(r)?, 3))
    }
}

/// σ increment granted by unions with full covers: 3/(2^{gcd(r,2)}−1).
pub fn sigma_step(r: u8) -> u64 {
    if r % 2 == 0 {
        1
    } else {
        3
    }
}

/// Checks the defining identity: every nonzero point P has multiplicity
/// σ − Σ_{i : P ∈ Sᵢ} εᵢ in the expansion (Sᵢ = span{e₁..eᵢ}).
pub fn check_type_identity(sys: &LineSystem, sigma: u64, eps: &[i64]) -> bool {
    let r = sys.r();
    let expansion = crate::system::point_expansion(sys);
    for p in enumerate_points(r).expect("r validated") {
        let h = 31 - p.bits().leading_zeros(); // P ∈ Sᵢ iff i ≥ h+1
        let reduction: i64 = (h + 1..r as u32).map(|i| eps[i as usize - 1]).sum();
        let expected = sigma as i64 - reduction;
        if expected < 0 || expansion.multiplicity(p) != expected as u64 {
            return false;
        }
    }
    true
}

/// Realizes ⋆[r] − Σ_{i≥2} εᵢ[i] on the canonical chain (or a concrete σ,
/// reached by padding with full covers). Requires ε₁ = 0 and the packing
/// condition Σ εᵢ(2ⁱ−1) ≡ 0 (mod 2^{gcd(r,2)}−1).
pub fn realize_type(t: &PartitionType) -> Result<Realization, ConstructError> {
    let r = t.r();
    if t.eps(1) != 0 {
        return Err(ConstructError::Epsilon1(t.eps(1)));
    }
    let modulus: i64 = if r % 2 == 0 { 3 } else { 1 };
    let lhs: i64 = (2..r).map(|i| t.eps(i) * ((1i64 << i) - 1)).sum();
    if lhs.rem_euclid(modulus) != 0 {
        return Err(ConstructError::NotPartitionable { lhs, modulus });
    }

    let mut acc = Accumulator::new(r);
    let mut sigma: u64 = 0;
    let mut work: Vec<i64> = (0..r as usize).map(|i| t.eps_slice().get(i).copied().unwrap_or(0)).collect();
    // work[i−1] = εᵢ; lift negatives by adding covers of Sᵢ.
    for i in 2..r {
        let e = work[i as usize - 1];
        if e < 0 {
            if i % 2 == 0 {
                acc.add(&even_cover(r, i)?, (-e) as u64)?;
                work[i as usize - 1] = 0;
            } else {
                let lifts = (-e as u64).div_ceil(3);
                acc.add(&embed(&triple_cover(i)?, r)?, lifts)?;
                work[i as usize - 1] = e + 3 * lifts as i64;
            }
        }
    }
    // Same-parity εᵢ (i ≤ r−2): [r]−[i] pieces, each contributing σ += 1.
    for i in 2..=(r - 2) {
        let e = work[i as usize - 1];
        if e > 0 && i % 2 == r % 2 {
            acc.add(&same_parity_piece(r, i)?, e as u64)?;
            sigma += e as u64;
            work[i as usize - 1] = 0;
        }
    }
    // Opposite-parity εᵢ (i ≤ r−3): [r−1]−[i] pieces inside S_{r−1}; each
    // adds a cover surplus at level r−1, booked as extra ε_{r−1} debt.
    let mut debt: u64 = 0;
    for i in 2..=(r.saturating_sub(3)) {
        let e = work[i as usize - 1];
        if e > 0 && i % 2 != r % 2 {
            acc.add(&embed(&same_parity_piece(r - 1, i)?, r)?, e as u64)?;
            debt += e as u64;
            work[i as usize - 1] = 0;
        }
    }
    // Consume ε_{r−1} + debt with hyperplane pieces.
    let total = work[r as usize - 2] as u64 + debt;
    if total > 0 {
        let (piece, piece_sigma, unit) = hyperplane_piece(r)?;
        debug_assert_eq!(total % unit, 0, "guaranteed by the packing condition");
        let copies = total / unit;
        acc.add(&piece, copies)?;
        sigma += piece_sigma * copies;
    }
    // Ensure n ≥ 1.
    let (cover, cover_sigma) = full_cover(r)?;
    if acc.n() == 0 {
        acc.add(&cover, 1)?;
        sigma += cover_sigma;
    }
    // Reduce σ where full covers happen to be subtractable (⋆ only).
    if t.sigma().is_none() {
        while sigma > cover_sigma && acc.n() > cover.n() && acc.subtract(&cover) {
            sigma -= cover_sigma;
        }
    }
    // Pad to a requested concrete σ.
    if let Some(req) = t.sigma() {
        let step = sigma_step(r);
        if req < sigma || (req - sigma) % step != 0 {
            return Err(ConstructError::SigmaUnreachable { requested: req, minimal: sigma, step });
        }
        acc.add(&cover, (req - sigma) / step)?;
        sigma = req;
    }
    let system = acc.into_system()?;
    if !check_type_identity(&system, sigma, t.eps_slice()) {
        return Err(ConstructError::Domain(
            "internal: realized system violates the type identity".into(),
        ));
    }
    Ok(Realization { system, sigma })
}

/// The σ produced by the construction for given ε₂..ε_{r−1}, and the step in
/// which larger σ are reachable.
pub fn minimal_sigma(eps: &[i64], r: u8) -> Result<(u64, u64), ConstructError> {
    if eps.len() != r as usize - 2 {
        return Err(ConstructError::InvalidType(format!(
            "expected ε₂..ε_{{r−1}} ({} values), got {}",
            r - 2,
            eps.len()
        )));
    }
    let mut full = vec![0i64; r as usize - 1];
    full[1..].copy_from_slice(eps);
    let t = PartitionType::new(r, None, full)?;
    let realization = realize_type(&t)?;
    Ok((realization.sigma, sigma_step(r)))
}

// ---------------------------------------------------------------------------
// Asymptotic families.

/// The family of types (σ′ + t·step)[r] − Σ εᵢ′[i] obtained from a base
/// system with nonnegative surplus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeFamily {
    pub r: u8,
    pub base_n: u64,
    pub base_s: u64,
    pub theta: u64,
    pub sigma_prime: u64,
    /// ε′₁..ε′_{r−1} (all nonnegative, ε′₁ = 0).
    pub eps_prime: Vec<i64>,
    pub step_n: u64,
    pub step_s: u64,
    pub sigma_step: u64,
}

impl TypeFamily {
    /// (n_t, s_t) = (n + t·(2ʳ−1)/(2^g−1), s + t·(2^{r−2}−1)/(2^g−1)).
    pub fn params(&self, t: u64) -> (u64, u64) {
        (self.base_n + t * self.step_n, self.base_s + t * self.step_s)
    }

    pub fn family_type(&self, t: u64) -> PartitionType {
        PartitionType::new(
            self.r,
            Some(self.sigma_prime + t * self.sigma_step),
            self.eps_prime.clone(),
        )
        .expect("validated at construction")
    }

    /// Realizes the t-th member and verifies its (n_t, s_t) parameters.
    pub fn instantiate(&self, t: u64) -> Result<(LineSystem, SystemReport), ConstructError> {
        let (n_t, s_t) = self.params(t);
        let realization = realize_type(&self.family_type(t))?;
        let report = verify_system(&realization.system, n_t, s_t)?;
        Ok((realization.system, report))
    }
}

/// Builds the asymptotic family of a base (n,r,s) with θ(n,r,s) ≥ 0:
/// d′ = 2(n−s), (σ,ε) its Griesmer representation, τ = θ, σ′ = σ + τ,
/// ε′_{r−1} = ε_{r−1} + 2τ.
pub fn asymptotic_family(n: u64, r: u8, s: u64) -> Result<TypeFamily, ConstructError> {
    if r < 3 || r > MAX_ENUM_R {
        return Err(ConstructError::DimOutOfRange(r, 3, MAX_ENUM_R));
    }
    let theta = surplus(n, r, s)?;
    if theta < 0 {
        return Err(ConstructError::NegativeSurplus(theta));
    }
    let theta = theta as u64;
    let d_prime = 2 * (n - s);
    let (sigma, eps01) = griesmer_rep(r, d_prime)?;
    debug_assert_eq!(eps01[0], 0, "d′ is even");
    let mut eps_prime: Vec<i64> = eps01.iter().map(|&e| e as i64).collect();
    eps_prime[r as usize - 2] += 2 * theta as i64;
    let g = if r % 2 == 0 { 3 } else { 1 };
    Ok(TypeFamily {
        r,
        base_n: n,
        base_s: s,
        theta,
        sigma_prime: sigma + theta,
        eps_prime,
        step_n: ((1u64 << r) - 1) / g,
        step_s: ((1u64 << (r - 2)) - 1) / g,
        sigma_step: sigma_step(r),
    })
}
