//! Bit-level linear algebra over GF(2) and enumeration of the projective
//! geometry PG(r−1,2): points, lines, hyperplanes, subspaces, incidence.
//!
//! Vectors of `F_2^r` are bitmask integers with bit `i` holding coordinate
//! `i+1`; when vectors are printed or parsed as binary strings, the leftmost
//! character is coordinate 1 (bit 0). All enumerations run in ascending
//! bitmask order of the canonical representative, so output is deterministic.

use std::fmt;

use thiserror::Error;

/// Largest ambient dimension for which all incidence tests stay single-word.
pub const MAX_R: u8 = 31;
/// Largest ambient dimension for full line enumeration (≈ 1.4·10⁷ lines).
pub const MAX_ENUM_R: u8 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("ambient dimension r={0} out of range (2 ≤ r ≤ {MAX_R})")]
    DimOutOfRange(u8),
    #[error("r={0} exceeds the line-enumeration limit r ≤ {MAX_ENUM_R}")]
    EnumLimit(u8),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimMismatch(u8, u8),
    #[error("bitmask {bits:#x} has bits above position r−1 (r={r})")]
    BitsOutOfRange { bits: u32, r: u8 },
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("generators span a {0}-dimensional space, expected 2")]
    NotALine(usize),
    #[error("binary string {0:?} contains a character other than '0'/'1'")]
    BadBinaryString(String),
    #[error("binary string has length {got}, expected {expected}")]
    BadStringLength { got: usize, expected: usize },
}

fn check_r(r: u8) -> Result<(), GeomError> {
    if (2..=MAX_R).contains(&r) {
        Ok(())
    } else {
        Err(GeomError::DimOutOfRange(r))
    }
}

/// A vector of `F_2^r` stored as a bitmask (bit i = coordinate i+1).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Gf2Vector {
    bits: u32,
    r: u8,
}

impl Gf2Vector {
    pub fn new(bits: u32, r: u8) -> Result<Self, GeomError> {
        check_r(r)?;
        if r < 32 && bits >> r != 0 {
            return Err(GeomError::BitsOutOfRange { bits, r });
        }
        Ok(Gf2Vector { bits, r })
    }

    pub fn zero(r: u8) -> Result<Self, GeomError> {
        Self::new(0, r)
    }

    /// The i-th standard basis vector (1-based, matching coordinate labels).
    pub fn unit(i: u8, r: u8) -> Result<Self, GeomError> {
        if i == 0 || i > r {
            return Err(GeomError::BitsOutOfRange { bits: 0, r });
        }
        Self::new(1 << (i - 1), r)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn r(self) -> u8 {
        self.r
    }

    pub fn is_zero(self) -> bool {
        self.bits == 0
    }

    pub fn add(self, other: Gf2Vector) -> Result<Gf2Vector, GeomError> {
        if self.r != other.r {
            return Err(GeomError::DimMismatch(self.r, other.r));
        }
        Ok(Gf2Vector { bits: self.bits ^ other.bits, r: self.r })
    }

    /// Standard bilinear form ⟨u,v⟩ over GF(2).
    pub fn dot(self, other: Gf2Vector) -> Result<bool, GeomError> {
        if self.r != other.r {
            return Err(GeomError::DimMismatch(self.r, other.r));
        }
        Ok((self.bits & other.bits).count_ones() % 2 == 1)
    }

    /// Parses a binary string; the leftmost character is coordinate 1 (bit 0).
    pub fn parse(s: &str) -> Result<Self, GeomError> {
        let r = s.len();
        if !(2..=MAX_R as usize).contains(&r) {
            return Err(GeomError::DimOutOfRange(r.min(255) as u8));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(GeomError::BadBinaryString(s.to_string())),
            }
        }
        Self::new(bits, r as u8)
    }

    /// Parses a binary string of prescribed length.
    pub fn parse_with_r(s: &str, r: u8) -> Result<Self, GeomError> {
        if s.len() != r as usize {
            return Err(GeomError::BadStringLength { got: s.len(), expected: r as usize });
        }
        Self::parse(s)
    }
}

impl fmt::Display for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.r {
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        Ok(())
    }
}

/// A subspace of `F_2^r` held as a reduced-row-echelon basis.
///
/// Basis rows are nonzero, pairwise distinct, sorted by strictly decreasing
/// leading-bit position, and each pivot bit occurs in exactly one row, so the
/// representation is canonical: two subspaces are equal iff their bases are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    basis: Vec<u32>,
    r: u8,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn basis(&self) -> Vec<Gf2Vector> {
        self.basis.iter().map(|&b| Gf2Vector { bits: b, r: self.r }).collect()
    }

    pub fn contains(&self, v: Gf2Vector) -> Result<bool, GeomError> {
        if v.r != self.r {
            return Err(GeomError::DimMismatch(v.r, self.r));
        }
        let mut x = v.bits;
        for &b in &self.basis {
            let lead = 31 - b.leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= b;
            }
        }
        Ok(x == 0)
    }

    /// All nonzero elements, ascending by bitmask.
    pub fn points(&self) -> Vec<Gf2Vector> {
        let k = self.basis.len();
        let mut pts = Vec::with_capacity((1usize << k) - 1);
        for m in 1u32..1 << k {
            let mut v = 0u32;
            for (j, &b) in self.basis.iter().enumerate() {
                if m >> j & 1 == 1 {
                    v ^= b;
                }
            }
            pts.push(Gf2Vector { bits: v, r: self.r });
        }
        pts.sort();
        pts
    }
}

/// Gaussian elimination of `rows` to the canonical RREF basis. Zero rows are
/// dropped; the span is preserved.
pub fn rref(rows: &[Gf2Vector]) -> Result<Subspace, GeomError> {
    let r = match rows.first() {
        Some(v) => v.r,
        None => return Err(GeomError::DimOutOfRange(0)),
    };
    for v in rows {
        if v.r != r {
            return Err(GeomError::DimMismatch(r, v.r));
        }
    }
    let mut basis: Vec<u32> = Vec::new();
    for v in rows {
        let mut x = v.bits;
        for &b in &basis {
            let lead = 31 - b.leading_zeros();
            if x >> lead & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            // Back-substitute the new pivot out of existing rows, keep sorted.
            let lead = 31 - x.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> lead & 1 == 1 {
                    *b ^= x;
                }
            }
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    Ok(Subspace { basis, r })
}

/// Convenience: RREF of raw bitmasks.
pub fn rref_bits(rows: &[u32], r: u8) -> Result<Subspace, GeomError> {
    check_r(r)?;
    let vecs: Result<Vec<_>, _> = rows.iter().map(|&b| Gf2Vector::new(b, r)).collect();
    rref(&vecs?)
}

/// A line of PG(r−1,2): a 2-dimensional subspace, canonically represented by
/// its sorted point triple. For any two of the points the third is their sum.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Line {
    pts: [u32; 3],
    r: u8,
}

impl Line {
    pub fn from_points(a: Gf2Vector, b: Gf2Vector) -> Result<Line, GeomError> {
        if a.r != b.r {
            return Err(GeomError::DimMismatch(a.r, b.r));
        }
        if a.is_zero() || b.is_zero() {
            return Err(GeomError::NotALine(if a.is_zero() && b.is_zero() { 0 } else { 1 }));
        }
        if a.bits == b.bits {
            return Err(GeomError::NotALine(1));
        }
        let mut pts = [a.bits, b.bits, a.bits ^ b.bits];
        pts.sort_unstable();
        Ok(Line { pts, r: a.r })
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    /// The three nonzero points, ascending.
    pub fn points(&self) -> [Gf2Vector; 3] {
        [
            Gf2Vector { bits: self.pts[0], r: self.r },
            Gf2Vector { bits: self.pts[1], r: self.r },
            Gf2Vector { bits: self.pts[2], r: self.r },
        ]
    }

    pub fn point_bits(&self) -> [u32; 3] {
        self.pts
    }

    /// Canonical RREF basis of the spanned 2-space.
    pub fn subspace(&self) -> Subspace {
        rref_bits(&self.pts[..2], self.r).expect("line points are valid")
    }

    /// The two canonical generator rows (RREF basis).
    pub fn basis(&self) -> [Gf2Vector; 2] {
        let s = self.subspace();
        let b = s.basis();
        [b[0], b[1]]
    }

    pub fn contains_point(&self, p: Gf2Vector) -> Result<bool, GeomError> {
        if p.r != self.r {
            return Err(GeomError::DimMismatch(p.r, self.r));
        }
        Ok(self.pts.contains(&p.bits))
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.basis();
        write!(f, "{a}/{b}")
    }
}

/// A hyperplane of PG(r−1,2), identified by its nonzero dual vector `h`:
/// the incident points are exactly {p ≠ 0 : ⟨p,h⟩ = 0}.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Hyperplane {
    dual: u32,
    r: u8,
}

impl Hyperplane {
    pub fn new(dual: Gf2Vector) -> Result<Self, GeomError> {
        if dual.is_zero() {
            return Err(GeomError::ZeroPoint);
        }
        Ok(Hyperplane { dual: dual.bits, r: dual.r })
    }

    pub fn from_bits(dual: u32, r: u8) -> Result<Self, GeomError> {
        Self::new(Gf2Vector::new(dual, r)?)
    }

    pub fn dual(&self) -> Gf2Vector {
        Gf2Vector { bits: self.dual, r: self.r }
    }

    pub fn dual_bits(&self) -> u32 {
        self.dual
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn contains_point(&self, p: Gf2Vector) -> Result<bool, GeomError> {
        if p.r != self.r {
            return Err(GeomError::DimMismatch(p.r, self.r));
        }
        Ok((self.dual & p.bits).count_ones() % 2 == 0)
    }
}

/// True iff both basis points of `l` are orthogonal to the dual of `h`
/// (equivalently, all three points of `l` lie in `h`).
pub fn line_in_hyperplane(l: &Line, h: &Hyperplane) -> Result<bool, GeomError> {
    if l.r != h.r {
        return Err(GeomError::DimMismatch(l.r, h.r));
    }
    Ok(line_in_dual(l, h.dual))
}

/// Incidence against a raw dual bitmask (hot path for counting loops).
#[inline]
pub fn line_in_dual(l: &Line, dual: u32) -> bool {
    (l.pts[0] & dual).count_ones() % 2 == 0 && (l.pts[1] & dual).count_ones() % 2 == 0
}

/// All 2ʳ−1 nonzero vectors, ascending bitmask.
pub fn enumerate_points(r: u8) -> Result<Vec<Gf2Vector>, GeomError> {
    check_r(r)?;
    Ok((1..1u64 << r).map(|b| Gf2Vector { bits: b as u32, r }).collect())
}

/// All (2ʳ−1)(2^{r−1}−1)/3 lines, ordered by ascending (smallest point,
/// second point) of the canonical triple.
pub fn enumerate_lines(r: u8) -> Result<Vec<Line>, GeomError> {
    check_r(r)?;
    if r > MAX_ENUM_R {
        return Err(GeomError::EnumLimit(r));
    }
    let top = 1u32 << r;
    let mut lines = Vec::new();
    for a in 1..top {
        for b in a + 1..top {
            // Keep the line only at its lexicographically least generator
            // pair, i.e. when a < b < a^b.
            if a ^ b > b {
                lines.push(Line { pts: [a, b, a ^ b], r });
            }
        }
    }
    Ok(lines)
}

/// All 2ʳ−1 hyperplanes, ascending by dual bitmask.
pub fn enumerate_hyperplanes(r: u8) -> Result<Vec<Hyperplane>, GeomError> {
    check_r(r)?;
    Ok((1..1u64 << r).map(|b| Hyperplane { dual: b as u32, r }).collect())
}
