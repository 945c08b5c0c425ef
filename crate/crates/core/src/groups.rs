//! Group elements of SU(2)×ℝ and SO(3)×ℝ and the double covering
//! `Π̃: SU(2)×ℝ → SO(3)×ℝ`.
//!
//! An element of SU(2)×ℝ is stored as `(A, B, v)` standing for the block
//! matrix `[[A, B], [−B̄, Ā]] ⊕ eᵛ`; an element of SO(3)×ℝ as `(C, v)`. The
//! line coordinate `v` is kept additive.

use nalgebra::{Matrix3, SVD};
use num_complex::Complex64;

use crate::algebra::{exp_so3, exp_su2, AlgebraVector, BasisKind};
use crate::{Error, Result};

/// Tolerance for the membership checks applied at construction.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Su2R,
    So3R,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Su2R => "su2r",
            GroupKind::So3R => "so3r",
        }
    }
}

/// A point `(A, B, v)` of SU(2)×ℝ with `|A|² + |B|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2RPoint {
    a: Complex64,
    b: Complex64,
    v: f64,
}

impl Su2RPoint {
    pub const IDENTITY: Su2RPoint = Su2RPoint {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        v: 0.0,
    };

    /// Checked constructor. Pairs within [`MEMBERSHIP_TOL`] of the unit
    /// sphere are projected onto it; anything else is rejected.
    pub fn new(a: Complex64, b: Complex64, v: f64) -> Result<Self> {
        if !(a.re.is_finite() && a.im.is_finite() && b.re.is_finite() && b.im.is_finite() && v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let n2 = a.norm_sqr() + b.norm_sqr();
        if (n2 - 1.0).abs() > MEMBERSHIP_TOL {
            return Err(Error::InvalidPoint(format!(
                "|A|^2 + |B|^2 = {n2} is not 1 within {MEMBERSHIP_TOL:e}"
            )));
        }
        if n2 == 1.0 {
            return Ok(Su2RPoint { a, b, v });
        }
        let s = n2.sqrt().recip();
        Ok(Su2RPoint { a: a * s, b: b * s, v })
    }

    /// Builds a point the caller knows to be on the group.
    pub(crate) fn from_parts(a: Complex64, b: Complex64, v: f64) -> Self {
        Su2RPoint { a, b, v }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn with_v(&self, v: f64) -> Self {
        Su2RPoint { v, ..*self }
    }

    /// The antipodal point `(−A, −B, v)`, the other preimage under `Π̃`.
    pub fn antipode(&self) -> Self {
        Su2RPoint {
            a: -self.a,
            b: -self.b,
            v: self.v,
        }
    }

    pub fn mul(&self, h: &Su2RPoint) -> Su2RPoint {
        su2r_mul(self, h)
    }

    pub fn inverse(&self) -> Su2RPoint {
        su2r_inverse(self)
    }

    /// The 2×2 compact block.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.a, self.b], [-self.b.conj(), self.a.conj()]]
    }

    /// `(Re A, Im A, Re B, Im B, v)`.
    pub fn coordinates(&self) -> [f64; 5] {
        [self.a.re, self.a.im, self.b.re, self.b.im, self.v]
    }
}

/// Block product; the line coordinates add.
pub fn su2r_mul(g: &Su2RPoint, h: &Su2RPoint) -> Su2RPoint {
    Su2RPoint {
        a: g.a * h.a - g.b * h.b.conj(),
        b: g.a * h.b + g.b * h.a.conj(),
        v: g.v + h.v,
    }
}

pub fn su2r_inverse(g: &Su2RPoint) -> Su2RPoint {
    Su2RPoint {
        a: g.a.conj(),
        b: -g.b,
        v: -g.v,
    }
}

/// A point `(C, v)` of SO(3)×ℝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3RPoint {
    c: Matrix3<f64>,
    v: f64,
}

impl So3RPoint {
    pub fn identity() -> Self {
        So3RPoint {
            c: Matrix3::identity(),
            v: 0.0,
        }
    }

    /// Checked constructor. Matrices within [`MEMBERSHIP_TOL`] of SO(3) are
    /// replaced by their nearest rotation (polar factor).
    pub fn new(c: Matrix3<f64>, v: f64) -> Result<Self> {
        if !(c.iter().all(|x| x.is_finite()) && v.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let dev = (c.transpose() * c - Matrix3::identity()).amax();
        if dev > MEMBERSHIP_TOL {
            return Err(Error::InvalidPoint(format!(
                "C^T C deviates from E by {dev:e} (tolerance {MEMBERSHIP_TOL:e})"
            )));
        }
        if c.determinant() <= 0.0 {
            return Err(Error::InvalidPoint("det C is not positive".into()));
        }
        if dev <= 4.0 * f64::EPSILON {
            return Ok(So3RPoint { c, v });
        }
        let svd = SVD::new(c, true, true);
        let (u, vt) = (svd.u.expect("requested U"), svd.v_t.expect("requested V^T"));
        Ok(So3RPoint { c: u * vt, v })
    }

    pub(crate) fn from_parts(c: Matrix3<f64>, v: f64) -> Self {
        So3RPoint { c, v }
    }

    pub fn c(&self) -> &Matrix3<f64> {
        &self.c
    }

    /// Entry `c_ij` with one-based indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.c[(i - 1, j - 1)]
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn with_v(&self, v: f64) -> Self {
        So3RPoint { c: self.c, v }
    }

    pub fn mul(&self, h: &So3RPoint) -> So3RPoint {
        so3r_mul(self, h)
    }

    pub fn inverse(&self) -> So3RPoint {
        so3r_inverse(self)
    }

    /// Row-major entries of `C` followed by `v`.
    pub fn coordinates(&self) -> [f64; 10] {
        let mut out = [0.0; 10];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.c[(i, j)];
            }
        }
        out[9] = self.v;
        out
    }
}

pub fn so3r_mul(g: &So3RPoint, h: &So3RPoint) -> So3RPoint {
    So3RPoint {
        c: g.c * h.c,
        v: g.v + h.v,
    }
}

pub fn so3r_inverse(g: &So3RPoint) -> So3RPoint {
    So3RPoint {
        c: g.c.transpose(),
        v: -g.v,
    }
}

/// A point on either group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupPoint {
    Su2R(Su2RPoint),
    So3R(So3RPoint),
}

impl GroupPoint {
    pub fn identity(group: GroupKind) -> Self {
        match group {
            GroupKind::Su2R => GroupPoint::Su2R(Su2RPoint::IDENTITY),
            GroupKind::So3R => GroupPoint::So3R(So3RPoint::identity()),
        }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupPoint::Su2R(_) => GroupKind::Su2R,
            GroupPoint::So3R(_) => GroupKind::So3R,
        }
    }

    pub fn v(&self) -> f64 {
        match self {
            GroupPoint::Su2R(p) => p.v(),
            GroupPoint::So3R(p) => p.v(),
        }
    }

    pub fn with_v(&self, v: f64) -> Self {
        match self {
            GroupPoint::Su2R(p) => GroupPoint::Su2R(p.with_v(v)),
            GroupPoint::So3R(p) => GroupPoint::So3R(p.with_v(v)),
        }
    }

    /// Product `self · h`.
    ///
    /// # Panics
    /// If the two points live on different groups.
    pub fn mul(&self, h: &GroupPoint) -> GroupPoint {
        match (self, h) {
            (GroupPoint::Su2R(g), GroupPoint::Su2R(h)) => GroupPoint::Su2R(su2r_mul(g, h)),
            (GroupPoint::So3R(g), GroupPoint::So3R(h)) => GroupPoint::So3R(so3r_mul(g, h)),
            _ => panic!("cannot multiply points of different groups"),
        }
    }

    pub fn inverse(&self) -> GroupPoint {
        match self {
            GroupPoint::Su2R(g) => GroupPoint::Su2R(su2r_inverse(g)),
            GroupPoint::So3R(g) => GroupPoint::So3R(so3r_inverse(g)),
        }
    }

    /// Real coordinates of the matrix realization: 5 for SU(2)×ℝ, 10 for
    /// SO(3)×ℝ.
    pub fn coordinates(&self) -> Vec<f64> {
        match self {
            GroupPoint::Su2R(p) => p.coordinates().to_vec(),
            GroupPoint::So3R(p) => p.coordinates().to_vec(),
        }
    }

    /// Frobenius distance between the compact blocks plus `|Δv|`.
    ///
    /// # Panics
    /// If the two points live on different groups.
    pub fn endpoint_error(&self, other: &GroupPoint) -> f64 {
        match (self, other) {
            (GroupPoint::Su2R(p), GroupPoint::Su2R(q)) => su2r_endpoint_error(p, q),
            (GroupPoint::So3R(p), GroupPoint::So3R(q)) => so3r_endpoint_error(p, q),
            _ => panic!("cannot compare points of different groups"),
        }
    }
}

impl From<Su2RPoint> for GroupPoint {
    fn from(p: Su2RPoint) -> Self {
        GroupPoint::Su2R(p)
    }
}

impl From<So3RPoint> for GroupPoint {
    fn from(p: So3RPoint) -> Self {
        GroupPoint::So3R(p)
    }
}

pub fn su2r_endpoint_error(p: &Su2RPoint, q: &Su2RPoint) -> f64 {
    // the 2×2 block repeats each of A, B once more (conjugated)
    (2.0 * ((p.a - q.a).norm_sqr() + (p.b - q.b).norm_sqr())).sqrt() + (p.v - q.v).abs()
}

pub fn so3r_endpoint_error(p: &So3RPoint, q: &So3RPoint) -> f64 {
    (p.c - q.c).norm() + (p.v - q.v).abs()
}

/// `exp(t·x)` in the matrix realization of `group`.
pub fn one_param_subgroup(x: &AlgebraVector, basis: BasisKind, group: GroupKind, t: f64) -> GroupPoint {
    let v = t * x.line_part(basis);
    match group {
        GroupKind::Su2R => {
            let (a, b) = exp_su2(&x.su2_part(basis).scale(t));
            GroupPoint::Su2R(Su2RPoint { a, b, v })
        }
        GroupKind::So3R => GroupPoint::So3R(So3RPoint {
            c: exp_so3(&x.so3_part(basis).scale(t)),
            v,
        }),
    }
}

/// `Π(A, B)` without the unit-norm check.
pub(crate) fn pi_matrix(a: Complex64, b: Complex64) -> Matrix3<f64> {
    let (a1, a2, b1, b2) = (a.re, a.im, b.re, b.im);
    Matrix3::new(
        a1 * a1 - a2 * a2 + b1 * b1 - b2 * b2,
        2.0 * (b1 * b2 - a1 * a2),
        2.0 * (a1 * b2 + a2 * b1),
        2.0 * (a1 * a2 + b1 * b2),
        a1 * a1 - a2 * a2 - b1 * b1 + b2 * b2,
        2.0 * (a2 * b2 - a1 * b1),
        2.0 * (a2 * b1 - a1 * b2),
        2.0 * (a1 * b1 + a2 * b2),
        a1 * a1 + a2 * a2 - b1 * b1 - b2 * b2,
    )
}

/// The double covering `Π: SU(2) → SO(3)`.
pub fn covering_pi(a: Complex64, b: Complex64) -> Result<Matrix3<f64>> {
    let n2 = a.norm_sqr() + b.norm_sqr();
    if !n2.is_finite() || (n2 - 1.0).abs() > MEMBERSHIP_TOL {
        return Err(Error::InvalidPoint(format!("|A|^2 + |B|^2 = {n2} is not 1")));
    }
    Ok(pi_matrix(a, b))
}

/// `Π̃(A, B, v) = (Π(A, B), v)`.
pub fn covering_pi_tilde(g: &Su2RPoint) -> So3RPoint {
    So3RPoint {
        c: pi_matrix(g.a, g.b),
        v: g.v,
    }
}

/// The two preimages of `p` under `Π̃`. The first has the largest of
/// `|A₁|, |A₂|, |B₁|, |B₂|` positive; the second is its antipode.
pub fn lifts(p: &So3RPoint) -> (Su2RPoint, Su2RPoint) {
    let c = |i: usize, j: usize| p.c[(i - 1, j - 1)];
    let (c11, c22, c33) = (c(1, 1), c(2, 2), c(3, 3));
    let sq = [
        1.0 + c11 + c22 + c33,
        1.0 - c11 - c22 + c33,
        1.0 + c11 - c22 - c33,
        1.0 - c11 + c22 - c33,
    ];
    let pivot = (0..4).fold(0, |k, i| if sq[i] > sq[k] { i } else { k });
    let r = 0.5 * sq[pivot].max(0.0).sqrt();
    let q = 0.25 / r;
    let (a1, a2, b1, b2) = match pivot {
        0 => (r, (c(2, 1) - c(1, 2)) * q, (c(3, 2) - c(2, 3)) * q, (c(1, 3) - c(3, 1)) * q),
        1 => ((c(2, 1) - c(1, 2)) * q, r, (c(1, 3) + c(3, 1)) * q, (c(3, 2) + c(2, 3)) * q),
        2 => ((c(3, 2) - c(2, 3)) * q, (c(1, 3) + c(3, 1)) * q, r, (c(1, 2) + c(2, 1)) * q),
        _ => ((c(1, 3) - c(3, 1)) * q, (c(3, 2) + c(2, 3)) * q, (c(1, 2) + c(2, 1)) * q, r),
    };
    let n = (a1 * a1 + a2 * a2 + b1 * b1 + b2 * b2).sqrt();
    let g = Su2RPoint {
        a: Complex64::new(a1 / n, a2 / n),
        b: Complex64::new(b1 / n, b2 / n),
        v: p.v,
    };
    (g, g.antipode())
}
