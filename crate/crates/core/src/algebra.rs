//! The Lie algebra su(2)⊕ℝ ≅ so(3)⊕ℝ in the two adapted bases, its
//! brackets, and closed-form exponentials of the compact blocks.
//!
//! Both bases are expressed through a fixed reference basis `E1..E4` with
//! `[E1,E2]=E3`, `[E2,E3]=E1`, `[E3,E1]=E2` and `E4` central:
//!
//! | basis | e1 | e2      | e3 | e4 |
//! |-------|----|---------|----|----|
//! | `D1`  | E1 | E4 − E3 | E2 | E3 |
//! | `D2`  | E1 | E4      | E2 | E3 |
//!
//! The horizontal space of either metric is `span(e1, e2, e3)` with that
//! triple orthonormal.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;
use num_complex::Complex64;

/// Below this argument `sinc` and `versine_ratio` switch to Taylor series.
const SERIES_CUTOFF: f64 = 1e-4;

/// Which adapted basis (equivalently, which metric) is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Horizontal space does not contain the central direction.
    D1,
    /// Horizontal space contains the central direction `e2 = E4`.
    D2,
}

impl BasisKind {
    /// Metric index as printed on the command line (1 or 2).
    pub fn index(self) -> u8 {
        match self {
            BasisKind::D1 => 1,
            BasisKind::D2 => 2,
        }
    }
}

/// Coefficients `(c1, c2, c3, c4)` in the ordered basis `e1..e4` of a
/// [`BasisKind`]. The same coefficients denote different matrices under
/// `D1` and `D2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraVector(pub [f64; 4]);

impl AlgebraVector {
    pub const ZERO: AlgebraVector = AlgebraVector([0.0; 4]);

    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        AlgebraVector([c1, c2, c3, c4])
    }

    /// The basis vector `e_i`, `i` in `1..=4`.
    pub fn basis(i: usize) -> Self {
        assert!((1..=4).contains(&i), "basis index {i} out of range 1..=4");
        let mut c = [0.0; 4];
        c[i - 1] = 1.0;
        AlgebraVector(c)
    }

    pub fn c1(&self) -> f64 {
        self.0[0]
    }
    pub fn c2(&self) -> f64 {
        self.0[1]
    }
    pub fn c3(&self) -> f64 {
        self.0[2]
    }
    pub fn c4(&self) -> f64 {
        self.0[3]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Coefficients with respect to the reference basis `E1..E4`.
    pub fn to_reference(&self, basis: BasisKind) -> [f64; 4] {
        let [c1, c2, c3, c4] = self.0;
        match basis {
            BasisKind::D1 => [c1, c3, c4 - c2, c2],
            BasisKind::D2 => [c1, c3, c4, c2],
        }
    }

    /// Inverse of [`AlgebraVector::to_reference`].
    pub fn from_reference(k: [f64; 4], basis: BasisKind) -> Self {
        let [k1, k2, k3, k4] = k;
        match basis {
            BasisKind::D1 => AlgebraVector([k1, k4, k2, k3 + k4]),
            BasisKind::D2 => AlgebraVector([k1, k4, k2, k3]),
        }
    }

    /// The su(2) component in the 2×2 realization.
    pub fn su2_part(&self, basis: BasisKind) -> Su2Tangent {
        let [k1, k2, k3, _] = self.to_reference(basis);
        Su2Tangent {
            x: 0.5 * k3,
            y: Complex64::new(0.5 * k1, 0.5 * k2),
        }
    }

    /// The so(3) component in the 3×3 realization.
    pub fn so3_part(&self, basis: BasisKind) -> So3Tangent {
        let [k1, k2, k3, _] = self.to_reference(basis);
        So3Tangent {
            c12: -k3,
            c13: k2,
            c23: -k1,
        }
    }

    /// The coefficient of the central generator `E4`.
    pub fn line_part(&self, basis: BasisKind) -> f64 {
        self.to_reference(basis)[3]
    }
}

impl Add for AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(rhs.0) {
            *a += b;
        }
        AlgebraVector(c)
    }
}

impl Sub for AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> Self {
        AlgebraVector(self.0.map(|c| -c))
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, rhs: AlgebraVector) -> AlgebraVector {
        AlgebraVector(rhs.0.map(|c| self * c))
    }
}

/// `C[i][j][k]` is the structure constant `C^k_{ij}` with zero-based indices,
/// so `[e_i, e_j] = Σ_k C[i][j][k] e_k`.
pub type StructureConstants = [[[i8; 4]; 4]; 4];

const fn table(entries: &[(usize, usize, usize, i8)]) -> StructureConstants {
    let mut c = [[[0i8; 4]; 4]; 4];
    let mut n = 0;
    while n < entries.len() {
        let (i, j, k, s) = entries[n];
        c[i - 1][j - 1][k - 1] = s;
        c[j - 1][i - 1][k - 1] = -s;
        n += 1;
    }
    c
}

// [e1,e2] = -[e1,e4] = e3, [e1,e3] = e4, [e2,e3] = [e3,e4] = e1, [e2,e4] = 0
const D1_TABLE: StructureConstants =
    table(&[(1, 2, 3, 1), (1, 4, 3, -1), (1, 3, 4, 1), (2, 3, 1, 1), (3, 4, 1, 1)]);

// [e1,e2] = [e2,e3] = [e2,e4] = 0, [e1,e3] = e4, [e1,e4] = -e3, [e3,e4] = e1
const D2_TABLE: StructureConstants = table(&[(1, 3, 4, 1), (1, 4, 3, -1), (3, 4, 1, 1)]);

pub fn structure_constants(basis: BasisKind) -> &'static StructureConstants {
    match basis {
        BasisKind::D1 => &D1_TABLE,
        BasisKind::D2 => &D2_TABLE,
    }
}

/// Lie bracket by table lookup.
pub fn bracket(x: &AlgebraVector, y: &AlgebraVector, basis: BasisKind) -> AlgebraVector {
    let c = structure_constants(basis);
    let mut out = [0.0; 4];
    for i in 0..4 {
        if x.0[i] == 0.0 {
            continue;
        }
        for j in 0..4 {
            let xy = x.0[i] * y.0[j];
            if xy == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let s = c[i][j][k];
                if s != 0 {
                    *o += f64::from(s) * xy;
                }
            }
        }
    }
    AlgebraVector(out)
}

/// `Ad(exp(θ e4))` restricted to the algebra: rotates `(c1, c3)` by `θ` and
/// fixes `c2`, `c4`. Identical for both bases.
pub fn ad_e4_rotation(theta: f64, x: &AlgebraVector) -> AlgebraVector {
    let (s, c) = theta.sin_cos();
    let [c1, c2, c3, c4] = x.0;
    AlgebraVector([c1 * c - c3 * s, c2, c1 * s + c3 * c, c4])
}

/// `sin(w)/w`, equal to 1 at `w = 0`.
pub fn sinc(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        let w2 = w * w;
        1.0 - w2 / 6.0 * (1.0 - w2 / 20.0)
    } else {
        w.sin() / w
    }
}

/// `(1 − cos w)/w²`, equal to 1/2 at `w = 0`.
pub fn versine_ratio(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        let w2 = w * w;
        0.5 - w2 / 24.0 * (1.0 - w2 / 30.0)
    } else {
        // 1 - cos w = 2 sin²(w/2) avoids cancellation for moderate w
        let h = (0.5 * w).sin();
        2.0 * h * h / (w * w)
    }
}

/// A traceless skew-hermitian 2×2 matrix `[[iX, Y], [−Ȳ, −iX]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Tangent {
    pub x: f64,
    pub y: Complex64,
}

impl Su2Tangent {
    pub fn new(x: f64, y: Complex64) -> Self {
        Su2Tangent { x, y }
    }

    /// `√(X² + |Y|²)`.
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y.norm_sqr()).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Su2Tangent {
            x: self.x * t,
            y: self.y * t,
        }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(0.0, self.x), self.y],
            [-self.y.conj(), Complex64::new(0.0, -self.x)],
        ]
    }
}

/// Exponential of an su(2) element, returned as the first row `(A, B)` of
/// `[[A, B], [−B̄, Ā]]`: `exp(z) = cos(w)·e + sinc(w)·z`.
pub fn exp_su2(z: &Su2Tangent) -> (Complex64, Complex64) {
    let w = z.norm();
    let s = sinc(w);
    (Complex64::new(w.cos(), s * z.x), z.y * s)
}

/// Upper-triangle entries of a skew-symmetric 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So3Tangent {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
}

impl So3Tangent {
    pub fn new(c12: f64, c13: f64, c23: f64) -> Self {
        So3Tangent { c12, c13, c23 }
    }

    pub fn norm(&self) -> f64 {
        (self.c12 * self.c12 + self.c13 * self.c13 + self.c23 * self.c23).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        So3Tangent {
            c12: self.c12 * t,
            c13: self.c13 * t,
            c23: self.c23 * t,
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0, self.c12, self.c13, //
            -self.c12, 0.0, self.c23, //
            -self.c13, -self.c23, 0.0,
        )
    }
}

/// Rodrigues exponential `E + sinc(w)·C + ((1 − cos w)/w²)·C²`.
pub fn exp_so3(c: &So3Tangent) -> Matrix3<f64> {
    let w = c.norm();
    let m = c.matrix();
    Matrix3::identity() + m * sinc(w) + (m * m) * versine_ratio(w)
}
