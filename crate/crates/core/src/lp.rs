//! Exact-rational linear programming: a two-phase tableau simplex with
//! Bland's rule over `BigRational`, Farkas infeasibility certificates, and a
//! builder for the standard weight-distribution LP of a putative code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::code::krawtchouk;

/// Hard cap from the interface contract: variable count ≤ 10³.
pub const MAX_LP_VARS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint has {got} coefficients, expected {expected}")]
    CoeffLen { expected: usize, got: usize },
    #[error("objective has {got} coefficients, expected {expected}")]
    ObjectiveLen { expected: usize, got: usize },
    #[error("LP has {0} variables, limit is {MAX_LP_VARS}")]
    TooManyVars(usize),
    #[error("LP has no variables")]
    NoVars,
    #[error("internal error: produced Farkas certificate failed verification")]
    CertificateInvalid,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub rel: Relation,
    pub rhs: BigRational,
}

/// An LP over variables x ≥ 0 with exact rational data.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalLp {
    names: Vec<String>,
    constraints: Vec<Constraint>,
    objective: Option<(Sense, Vec<BigRational>)>,
}

/// Multipliers proving infeasibility: one per constraint, ≤ 0 on ≤-rows,
/// ≥ 0 on ≥-rows, free on equalities, with Σ μᵢaᵢ ≤ 0 componentwise and
/// Σ μᵢbᵢ > 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FarkasCertificate {
    pub multipliers: Vec<BigRational>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LpVerdict {
    /// No objective was set; a feasible point is returned.
    Feasible { witness: Vec<BigRational> },
    /// Optimum reached.
    Optimal { witness: Vec<BigRational>, value: BigRational },
    /// No feasible point; certificate is pre-verified.
    Infeasible { certificate: FarkasCertificate },
    /// Feasible but the objective is unbounded.
    Unbounded,
}

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn rat_u(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn rat_big(x: BigInt) -> BigRational {
    BigRational::from_integer(x)
}

impl RationalLp {
    pub fn new(names: Vec<String>) -> Result<Self, LpError> {
        if names.is_empty() {
            return Err(LpError::NoVars);
        }
        if names.len() > MAX_LP_VARS {
            return Err(LpError::TooManyVars(names.len()));
        }
        Ok(RationalLp { names, constraints: Vec::new(), objective: None })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<&(Sense, Vec<BigRational>)> {
        self.objective.as_ref()
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<BigRational>,
        rel: Relation,
        rhs: BigRational,
    ) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars() {
            return Err(LpError::CoeffLen { expected: self.num_vars(), got: coeffs.len() });
        }
        self.constraints.push(Constraint { coeffs, rel, rhs });
        Ok(())
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<BigRational>) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars() {
            return Err(LpError::ObjectiveLen { expected: self.num_vars(), got: coeffs.len() });
        }
        self.objective = Some((sense, coeffs));
        Ok(())
    }

    /// Checks a candidate point against every constraint (and x ≥ 0).
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        if x.len() != self.num_vars() || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c
                .coeffs
                .iter()
                .zip(x)
                .map(|(a, v)| a * v)
                .fold(BigRational::zero(), |acc, t| acc + t);
            match c.rel {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }
}

/// Verifies a Farkas certificate against the original constraints.
pub fn verify_farkas(lp: &RationalLp, cert: &FarkasCertificate) -> bool {
    if cert.multipliers.len() != lp.constraints().len() {
        return false;
    }
    for (c, mu) in lp.constraints().iter().zip(&cert.multipliers) {
        match c.rel {
            Relation::Le if mu.is_positive() => return false,
            Relation::Ge if mu.is_negative() => return false,
            _ => {}
        }
    }
    let n = lp.num_vars();
    for j in 0..n {
        let combo: BigRational = lp
            .constraints()
            .iter()
            .zip(&cert.multipliers)
            .map(|(c, mu)| &c.coeffs[j] * mu)
            .fold(BigRational::zero(), |acc, t| acc + t);
        if combo.is_positive() {
            return false;
        }
    }
    let rhs_combo: BigRational = lp
        .constraints()
        .iter()
        .zip(&cert.multipliers)
        .map(|(c, mu)| &c.rhs * mu)
        .fold(BigRational::zero(), |acc, t| acc + t);
    rhs_combo.is_positive()
}

struct Tableau {
    /// rows[i][j]: columns are structural vars, then slacks/surplus, then
    /// artificials, then rhs (last).
    rows: Vec<Vec<BigRational>>,
    obj: Vec<BigRational>,
    basis: Vec<usize>,
    n_struct: usize,
    art_start: usize,
    n_cols: usize, // excluding rhs
    /// Identity column installed for each original row (slack or artificial);
    /// used to read off dual multipliers.
    row_identity_col: Vec<usize>,
    /// +1/−1 sign applied to each original row during normalization.
    row_flip: Vec<i32>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.n_cols]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        for v in self.rows[pr].iter_mut() {
            *v *= &inv;
        }
        let prow = self.rows[pr].clone();
        for i in 0..self.rows.len() {
            if i != pr && !self.rows[i][pc].is_zero() {
                let f = self.rows[i][pc].clone();
                for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[pc].is_zero() {
            let f = self.obj[pc].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                *v -= &f * p;
            }
        }
        self.basis[pr] = pc;
    }

    /// Bland's rule minimization over the allowed columns. Returns false on
    /// unboundedness.
    fn iterate(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.n_cols).find(|&j| allowed(j) && self.obj[j].is_negative());
            let Some(pc) = entering else { return true };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][pc].is_positive() {
                    let ratio = self.rhs(i) / &self.rows[i][pc];
                    match &best {
                        None => best = Some((i, ratio)),
                        Some((bi, br)) => {
                            // Bland ties: smallest basic-variable index.
                            if ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]) {
                                best = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            match best {
                Some((pr, _)) => self.pivot(pr, pc),
                None => return false,
            }
        }
    }
}

/// Exact feasibility / optimization by two-phase simplex.
pub fn lp_feasible(lp: &RationalLp) -> Result<LpVerdict, LpError> {
    let n = lp.num_vars();
    let m = lp.constraints().len();

    // Normalize rows to rhs ≥ 0 and count auxiliary columns.
    let mut flips = Vec::with_capacity(m);
    let mut norm: Vec<(Vec<BigRational>, Relation, BigRational)> = Vec::with_capacity(m);
    let mut n_slack = 0usize;
    for c in lp.constraints() {
        let (coeffs, rel, rhs, flip) = if c.rhs.is_negative() {
            let flipped_rel = match c.rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (c.coeffs.iter().map(|v| -v).collect(), flipped_rel, -&c.rhs, -1)
        } else {
            (c.coeffs.clone(), c.rel, c.rhs.clone(), 1)
        };
        if !matches!(rel, Relation::Eq) {
            n_slack += 1;
        }
        flips.push(flip);
        norm.push((coeffs, rel, rhs));
    }
    let n_art: usize = norm
        .iter()
        .filter(|(_, rel, _)| !matches!(rel, Relation::Le))
        .count();
    let art_start = n + n_slack;
    let n_cols = art_start + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut row_identity_col = Vec::with_capacity(m);
    let mut slack_idx = n;
    let mut art_idx = art_start;
    for (coeffs, rel, rhs) in &norm {
        let mut row = vec![BigRational::zero(); n_cols + 1];
        row[..n].clone_from_slice(coeffs);
        row[n_cols] = rhs.clone();
        match rel {
            Relation::Le => {
                row[slack_idx] = BigRational::one();
                basis.push(slack_idx);
                row_identity_col.push(slack_idx);
                slack_idx += 1;
            }
            Relation::Ge => {
                row[slack_idx] = -BigRational::one();
                slack_idx += 1;
                row[art_idx] = BigRational::one();
                basis.push(art_idx);
                row_identity_col.push(art_idx);
                art_idx += 1;
            }
            Relation::Eq => {
                row[art_idx] = BigRational::one();
                basis.push(art_idx);
                row_identity_col.push(art_idx);
                art_idx += 1;
            }
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        obj: vec![BigRational::zero(); n_cols + 1],
        basis,
        n_struct: n,
        art_start,
        n_cols,
        row_identity_col,
        row_flip: flips,
    };

    // Phase 1: minimize the sum of artificials. Cost row: 1 on artificials,
    // priced out over the initial basis.
    for j in art_start..n_cols {
        tab.obj[j] = BigRational::one();
    }
    for i in 0..m {
        if tab.basis[i] >= art_start {
            let row = tab.rows[i].clone();
            for (v, p) in tab.obj.iter_mut().zip(&row) {
                *v -= p;
            }
        }
    }
    tab.iterate(&|_| true);
    let phase1_value = -tab.obj[tab.n_cols].clone();
    if phase1_value.is_positive() {
        // Dual multipliers from the identity columns: y_i = c_col − rc(col).
        let mut multipliers = Vec::with_capacity(m);
        for i in 0..m {
            let col = tab.row_identity_col[i];
            let cost = if col >= art_start { BigRational::one() } else { BigRational::zero() };
            let y = cost - &tab.obj[col];
            let mu = if tab.row_flip[i] < 0 { -y } else { y };
            multipliers.push(mu);
        }
        let certificate = FarkasCertificate { multipliers };
        if !verify_farkas(lp, &certificate) {
            return Err(LpError::CertificateInvalid);
        }
        return Ok(LpVerdict::Infeasible { certificate });
    }

    // Drive any residual artificials out of the basis (they sit at 0).
    let mut dead_rows = Vec::new();
    for i in 0..tab.rows.len() {
        if tab.basis[i] >= tab.art_start {
            let pivot_col = (0..tab.art_start).find(|&j| !tab.rows[i][j].is_zero());
            match pivot_col {
                Some(pc) => tab.pivot(i, pc),
                None => dead_rows.push(i),
            }
        }
    }
    for &i in dead_rows.iter().rev() {
        tab.rows.remove(i);
        tab.basis.remove(i);
    }

    let Some((sense, coeffs)) = lp.objective().cloned() else {
        return Ok(LpVerdict::Feasible { witness: extract_witness(&tab) });
    };

    // Phase 2 cost row (always minimize; negate for maximization).
    let minimize: Vec<BigRational> = match sense {
        Sense::Minimize => coeffs,
        Sense::Maximize => coeffs.iter().map(|v| -v).collect(),
    };
    tab.obj = vec![BigRational::zero(); tab.n_cols + 1];
    tab.obj[..n].clone_from_slice(&minimize);
    for i in 0..tab.rows.len() {
        let b = tab.basis[i];
        if !tab.obj[b].is_zero() {
            let f = tab.obj[b].clone();
            let row = tab.rows[i].clone();
            for (v, p) in tab.obj.iter_mut().zip(&row) {
                *v -= &f * p;
            }
        }
    }
    let art_start_cap = tab.art_start;
    let bounded = tab.iterate(&move |j| j < art_start_cap);
    if !bounded {
        return Ok(LpVerdict::Unbounded);
    }
    let min_value = -tab.obj[tab.n_cols].clone();
    let value = match sense {
        Sense::Minimize => min_value,
        Sense::Maximize => -min_value,
    };
    Ok(LpVerdict::Optimal { witness: extract_witness(&tab), value })
}

fn extract_witness(tab: &Tableau) -> Vec<BigRational> {
    let mut x = vec![BigRational::zero(); tab.n_struct];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < tab.n_struct {
            x[b] = tab.rhs(i).clone();
        }
    }
    x
}

/// Builds the standard LP for a putative [n,k] code with nonzero weights
/// restricted to `admissible`: variables A_w ≥ 0, Σ A_w = 2^k − 1, the dual
/// constraint B₁ = 0, and B_i ≥ 0 for 2 ≤ i ≤ l_max via the MacWilliams
/// transform (the A₀ = 1 term is folded into the right-hand sides).
pub fn build_code_lp(n: u64, k: u8, admissible: &[u64], l_max: u64) -> Result<RationalLp, LpError> {
    let mut weights: Vec<u64> = admissible.to_vec();
    weights.sort_unstable();
    weights.dedup();
    weights.retain(|&w| w > 0 && w <= n);
    let names: Vec<String> = weights.iter().map(|w| format!("A{w}")).collect();
    let mut lp = RationalLp::new(names)?;

    let ones = vec![BigRational::one(); weights.len()];
    lp.add_constraint(ones, Relation::Eq, rat_u((1u64 << k) - 1))?;

    // B₁ = 0: Σ_w K₁(w) A_w = −K₁(0) = −n.
    let k1: Vec<BigRational> = weights
        .iter()
        .map(|&w| rat_big(krawtchouk(n, 1, w)))
        .collect();
    lp.add_constraint(k1, Relation::Eq, -rat_u(n))?;

    for i in 2..=l_max.min(n) {
        let coeffs: Vec<BigRational> = weights
            .iter()
            .map(|&w| rat_big(krawtchouk(n, i, w)))
            .collect();
        let rhs = -rat_big(krawtchouk(n, i, 0));
        lp.add_constraint(coeffs, Relation::Ge, rhs)?;
    }
    Ok(lp)
}
