//! Arclength-parametrized normal geodesics from the identity.
//!
//! A geodesic is fixed by a unit covector `(α₁, α₂, α₃)` on the horizontal
//! space and a vertical parameter `β`. With `φ₀` the polar angle of
//! `(α₁, α₃)`, the family is also written `(φ₀, α₂, β)`. Metric `D1` is
//! reduced to `D2` by `β ↦ β − α₂` followed by a right factor
//! `exp(−tα₂e₄)`, which is what the shared `b_eff` below encodes.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::algebra::{sinc, versine_ratio, BasisKind};
use crate::groups::{GroupKind, GroupPoint, So3RPoint, Su2RPoint};
use crate::{Error, Result};

/// `|α₂|` at or above `1 − ABNORMAL_TOL` selects the abnormal branch.
pub const ABNORMAL_TOL: f64 = 1e-12;

/// Tolerance on `α₁² + α₂² + α₃² = 1` accepted by [`GeodesicParams::new`].
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub beta: f64,
    pub metric: BasisKind,
    pub group: GroupKind,
}

impl GeodesicParams {
    /// Requires `|α|² = 1` within [`NORM_TOL`]; the α's are then rescaled
    /// onto the sphere.
    pub fn new(alpha: [f64; 3], beta: f64, metric: BasisKind, group: GroupKind) -> Result<Self> {
        Self::normalized(alpha, beta, metric, group, NORM_TOL)
    }

    /// Like [`GeodesicParams::new`] with a caller-chosen tolerance on
    /// `|α|² − 1`.
    pub fn normalized(alpha: [f64; 3], beta: f64, metric: BasisKind, group: GroupKind, tol: f64) -> Result<Self> {
        if !(alpha.iter().all(|a| a.is_finite()) && beta.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        let n2: f64 = alpha.iter().map(|a| a * a).sum();
        if (n2 - 1.0).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "alpha1^2 + alpha2^2 + alpha3^2 = {n2} is not 1 within {tol:e}"
            )));
        }
        let s = n2.sqrt().recip();
        let mut p = GeodesicParams {
            alpha1: alpha[0] * s,
            alpha2: alpha[1] * s,
            alpha3: alpha[2] * s,
            beta,
            metric,
            group,
        };
        if p.alpha2.abs() >= 1.0 - ABNORMAL_TOL {
            p.alpha1 = 0.0;
            p.alpha3 = 0.0;
            p.alpha2 = p.alpha2.signum();
        }
        Ok(p)
    }

    /// From the `(φ₀, α₂, β)` form; requires `|α₂| ≤ 1`.
    pub fn from_phi0(phi0: f64, alpha2: f64, beta: f64, metric: BasisKind, group: GroupKind) -> Result<Self> {
        if !(phi0.is_finite() && alpha2.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if alpha2.abs() > 1.0 {
            return Err(Error::InvalidParams(format!("|alpha2| = {} exceeds 1", alpha2.abs())));
        }
        let r = (1.0 - alpha2 * alpha2).sqrt();
        let (s, c) = phi0.sin_cos();
        Self::new([r * c, alpha2, r * s], beta, metric, group)
    }

    pub fn with_group(self, group: GroupKind) -> Self {
        GeodesicParams { group, ..self }
    }

    pub fn with_metric(self, metric: BasisKind) -> Self {
        GeodesicParams { metric, ..self }
    }

    /// `φ₀ ∈ (−π, π]`; zero on the abnormal branch.
    pub fn phi0(&self) -> f64 {
        self.alpha3.atan2(self.alpha1)
    }

    /// `1 − α₂²`, evaluated as `α₁² + α₃²`.
    pub fn horizontal_sq(&self) -> f64 {
        self.alpha1 * self.alpha1 + self.alpha3 * self.alpha3
    }

    /// `β` for `D2`, `β − α₂` for `D1`.
    pub fn effective_beta(&self) -> f64 {
        match self.metric {
            BasisKind::D1 => self.beta - self.alpha2,
            BasisKind::D2 => self.beta,
        }
    }

    /// The frequency `wᵢ = √(1 − α₂² + b_eff²)`.
    pub fn w(&self) -> f64 {
        let b = self.effective_beta();
        (self.horizontal_sq() + b * b).sqrt()
    }

    pub fn is_abnormal(&self) -> bool {
        is_abnormal(self)
    }

    /// `ψ₁..ψ₄` at time `t`.
    pub fn psi(&self, t: f64) -> [f64; 4] {
        let (s, c) = (self.beta * t).sin_cos();
        [
            self.alpha1 * c - self.alpha3 * s,
            self.alpha2,
            self.alpha1 * s + self.alpha3 * c,
            self.effective_beta(),
        ]
    }
}

pub fn is_abnormal(params: &GeodesicParams) -> bool {
    params.alpha2.abs() >= 1.0 - ABNORMAL_TOL
}

/// The quantities `w`, `n = cos(wt/2)`, `m = sin(wt/2)/w` at a time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicFrame {
    pub w: f64,
    pub n: f64,
    pub m: f64,
}

pub fn frame(params: &GeodesicParams, t: f64) -> GeodesicFrame {
    frame_at(params.w(), t)
}

fn frame_at(w: f64, t: f64) -> GeodesicFrame {
    let half = 0.5 * w * t;
    GeodesicFrame {
        w,
        n: half.cos(),
        m: 0.5 * t * sinc(half),
    }
}

pub fn geodesic_su2r(params: &GeodesicParams, t: f64) -> Su2RPoint {
    let v = params.alpha2 * t;
    if params.is_abnormal() {
        let a = match params.metric {
            BasisKind::D1 => Complex64::from_polar(1.0, -0.5 * params.alpha2 * t),
            BasisKind::D2 => Complex64::new(1.0, 0.0),
        };
        return Su2RPoint::from_parts(a, Complex64::new(0.0, 0.0), v);
    }
    let b = params.effective_beta();
    let GeodesicFrame { n, m, .. } = frame(params, t);
    let rot = Complex64::from_polar(1.0, 0.5 * params.beta * t);
    let a = Complex64::new(n, b * m) * rot.conj();
    let bb = Complex64::new(params.alpha1, params.alpha3) * m * rot;
    Su2RPoint::from_parts(a, bb, v)
}

/// The compact block of the SO(3)×ℝ geodesic for a non-abnormal `params`.
fn so3_block(params: &GeodesicParams, t: f64) -> Matrix3<f64> {
    let (a1, a3) = (params.alpha1, params.alpha3);
    let b = params.effective_beta();
    let wt = params.w() * t;
    let mu = t * sinc(wt);
    let nu = t * t * versine_ratio(wt);
    let m = Matrix3::new(
        1.0 - nu * (a3 * a3 + b * b),
        a1 * a3 * nu - b * mu,
        a1 * b * nu + a3 * mu,
        a1 * a3 * nu + b * mu,
        1.0 - nu * (a1 * a1 + b * b),
        a3 * b * nu - a1 * mu,
        a1 * b * nu - a3 * mu,
        a3 * b * nu + a1 * mu,
        1.0 - nu * (a1 * a1 + a3 * a3),
    );
    m * z_rotation(params.beta * t)
}

/// `[[cos θ, sin θ, 0], [−sin θ, cos θ, 0], [0, 0, 1]]`.
pub fn z_rotation(theta: f64) -> Matrix3<f64> {
    let (s, c) = theta.sin_cos();
    Matrix3::new(c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0)
}

pub fn geodesic_so3r(params: &GeodesicParams, t: f64) -> So3RPoint {
    let v = params.alpha2 * t;
    if params.is_abnormal() {
        let c = match params.metric {
            BasisKind::D1 => z_rotation(params.alpha2 * t),
            BasisKind::D2 => Matrix3::identity(),
        };
        return So3RPoint::from_parts(c, v);
    }
    So3RPoint::from_parts(so3_block(params, t), v)
}

/// Dispatches on `params.group`.
pub fn geodesic(params: &GeodesicParams, t: f64) -> GroupPoint {
    match params.group {
        GroupKind::Su2R => GroupPoint::Su2R(geodesic_su2r(params, t)),
        GroupKind::So3R => GroupPoint::So3R(geodesic_so3r(params, t)),
    }
}

/// The `D2` parameters whose geodesic, right-multiplied by `exp(−tα₂e₄)`,
/// is the `D1` geodesic of `params`.
pub fn reparam_d1_to_d2(params: &GeodesicParams) -> Result<GeodesicParams> {
    if params.metric != BasisKind::D1 {
        return Err(Error::InvalidParams("reparametrization expects metric 1".into()));
    }
    Ok(GeodesicParams {
        beta: params.beta - params.alpha2,
        metric: BasisKind::D2,
        ..*params
    })
}

/// Parameters of `s ↦ γ(t₀)⁻¹ γ(t₀ + s)`.
pub fn leftshift_params(params: &GeodesicParams, t0: f64) -> GeodesicParams {
    let (s, c) = (params.beta * t0).sin_cos();
    GeodesicParams {
        alpha1: params.alpha1 * c - params.alpha3 * s,
        alpha3: params.alpha1 * s + params.alpha3 * c,
        ..*params
    }
}
