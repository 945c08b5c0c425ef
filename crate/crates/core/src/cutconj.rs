//! Conjugate times, cut times, and membership in the first conjugate locus
//! and the cut locus, for geodesics issued from the identity.

use std::f64::consts::{PI, TAU};
use std::sync::RwLock;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::algebra::BasisKind;
use crate::geodesics::GeodesicParams;
use crate::groups::{lifts, GroupKind, GroupPoint, So3RPoint, Su2RPoint};
use crate::oracle::bisect;
use crate::{Error, Result};

/// Default tolerance for locus membership tests.
pub const LOCUS_TOL: f64 = 1e-9;

const TAN_ROOT_DELTA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocusClass {
    /// The endpoint is a first conjugate point.
    LocalBranch,
    /// The endpoint is reached by a second geodesic of equal length that is
    /// not conjugate (symmetric, trace −1 rotations on SO(3)×ℝ).
    GlobalBranch,
    /// Abnormal geodesic; it minimizes for all time.
    MetricLine,
}

impl LocusClass {
    pub fn name(self) -> &'static str {
        match self {
            LocusClass::LocalBranch => "LocalBranch",
            LocusClass::GlobalBranch => "GlobalBranch",
            LocusClass::MetricLine => "MetricLine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutInfo {
    /// `+∞` for metric lines.
    pub cut_time: f64,
    pub locus_class: LocusClass,
    /// `+∞` for metric lines.
    pub first_conjugate_time: f64,
}

/// How the winding condition `ψ + v ≠ 2πn` of the local cut branch under
/// metric `D1` on SO(3)×ℝ ranges over `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WindingReading {
    /// `n ∈ ℤ`; agrees with the covering picture.
    #[default]
    AllIntegers,
    /// `n ∈ {1, 2, …}` with `ψ` taken in `[0, 2π)`.
    NaturalNumbers,
}

static TAN_ROOTS: RwLock<Vec<f64>> = RwLock::new(Vec::new());

/// The `m`-th positive root (`m ≥ 1`) of `tan x = x`, in `(mπ, mπ + π/2)`.
///
/// Roots are bisected on `sin x − x cos x` and memoized; concurrent first
/// access fills the table idempotently.
pub fn tan_x_root(m: usize) -> f64 {
    assert!(m >= 1, "roots of tan x = x are numbered from 1");
    if let Some(&x) = TAN_ROOTS.read().expect("root table poisoned").get(m - 1) {
        return x;
    }
    let mut table = TAN_ROOTS.write().expect("root table poisoned");
    while table.len() < m {
        let k = (table.len() + 1) as f64;
        let lo = k * PI + TAN_ROOT_DELTA;
        let hi = k * PI + 0.5 * PI - TAN_ROOT_DELTA;
        let x = bisect(|x| x.sin() - x * x.cos(), lo, hi, 0.0)
            .expect("sin x - x cos x changes sign on every root bracket");
        table.push(x);
    }
    table[m - 1]
}

fn require_normal(params: &GeodesicParams) -> Result<()> {
    if params.is_abnormal() {
        return Err(Error::InvalidParams(
            "abnormal geodesic (alpha2 = ±1) has no conjugate times".into(),
        ));
    }
    Ok(())
}

/// The `n`-th conjugate time, `n ≥ 1`.
pub fn conjugate_time(params: &GeodesicParams, n: usize) -> Result<f64> {
    require_normal(params)?;
    if n == 0 {
        return Err(Error::InvalidParams("conjugate times are numbered from 1".into()));
    }
    let w = params.w();
    let m = n.div_ceil(2);
    Ok(if n % 2 == 1 {
        TAU * m as f64 / w
    } else {
        2.0 * tan_x_root(m) / w
    })
}

/// `sin(wt/2)·(sin(wt/2) − (wt/2)·cos(wt/2))`, vanishing exactly at the
/// conjugate times.
pub fn conjugate_criterion(params: &GeodesicParams, t: f64) -> f64 {
    let x = 0.5 * params.w() * t;
    let s = x.sin();
    s * (s - x * x.cos())
}

/// The real part of the (twisted, for `D1`) `A`-coordinate along the
/// SU(2)×ℝ geodesic; its first zero is the cut time of the global branch.
pub fn global_branch_function(params: &GeodesicParams, t: f64) -> f64 {
    let b = params.effective_beta().abs();
    let w = params.w();
    let (sw, cw) = (0.5 * t * w).sin_cos();
    let (sb, cb) = (0.5 * t * b).sin_cos();
    cw * cb + (b / w) * sw * sb
}

pub fn cut_time(params: &GeodesicParams) -> Result<CutInfo> {
    if params.is_abnormal() {
        return Ok(CutInfo {
            cut_time: f64::INFINITY,
            locus_class: LocusClass::MetricLine,
            first_conjugate_time: f64::INFINITY,
        });
    }
    let w = params.w();
    let t1 = TAU / w;
    let local = CutInfo {
        cut_time: t1,
        locus_class: LocusClass::LocalBranch,
        first_conjugate_time: t1,
    };
    match params.group {
        GroupKind::Su2R => Ok(local),
        GroupKind::So3R => {
            let b = params.effective_beta().abs();
            if b >= (params.horizontal_sq() / 3.0).sqrt() {
                return Ok(local);
            }
            let eps = 1e-12 * t1;
            let t = bisect(|t| global_branch_function(params, t), eps, t1 - eps, 0.0)?;
            Ok(CutInfo {
                cut_time: t,
                locus_class: LocusClass::GlobalBranch,
                first_conjugate_time: t1,
            })
        }
    }
}

fn su2r_conjugate(p: &Su2RPoint, metric: BasisKind, tol: f64) -> bool {
    if (p.a().norm() - 1.0).abs() > tol {
        return false;
    }
    let a = match metric {
        BasisKind::D1 => p.a() * Complex64::from_polar(1.0, 0.5 * p.v()),
        BasisKind::D2 => p.a(),
    };
    (a - 1.0).norm() > tol
}

pub fn in_first_conjugate_locus(point: &GroupPoint, metric: BasisKind, tol: f64) -> bool {
    match point {
        GroupPoint::Su2R(p) => su2r_conjugate(p, metric, tol),
        GroupPoint::So3R(p) => {
            let (g, h) = lifts(p);
            su2r_conjugate(&g, metric, tol) || su2r_conjugate(&h, metric, tol)
        }
    }
}

/// `C·exp(vE₃)`: rotates the first two columns of `C` by `v`.
pub fn twist_columns(c: &Matrix3<f64>, v: f64) -> Matrix3<f64> {
    let (s, co) = v.sin_cos();
    let mut out = *c;
    for i in 0..3 {
        out[(i, 0)] = c[(i, 0)] * co + c[(i, 1)] * s;
        out[(i, 1)] = -c[(i, 0)] * s + c[(i, 1)] * co;
    }
    out
}

/// The angle `ψ ∈ [0, 2π)` when `C` is a rotation about the third axis
/// `[[cos ψ, −sin ψ, 0], [sin ψ, cos ψ, 0], [0, 0, 1]]`.
pub fn z_rotation_angle(c: &Matrix3<f64>, tol: f64) -> Option<f64> {
    let off = [c[(0, 2)], c[(1, 2)], c[(2, 0)], c[(2, 1)], c[(2, 2)] - 1.0];
    if off.iter().any(|x| x.abs() > tol) {
        return None;
    }
    let psi = c[(1, 0)].atan2(c[(0, 0)]);
    Some(if psi < 0.0 { psi + TAU } else { psi })
}

/// Distance from `x` to the nearest point of `2π·set`, where `set` is ℤ or
/// ℕ = {1, 2, …}.
fn winding_gap(x: f64, reading: WindingReading) -> f64 {
    let k = (x / TAU).round();
    let k = match reading {
        WindingReading::AllIntegers => k,
        WindingReading::NaturalNumbers => k.max(1.0),
    };
    (x - TAU * k).abs()
}

fn so3_global(c: &Matrix3<f64>, tol: f64) -> bool {
    (c - c.transpose()).amax() <= tol && (c.trace() + 1.0).abs() <= tol
}

fn so3r_cut(p: &So3RPoint, metric: BasisKind, tol: f64, reading: WindingReading) -> Option<LocusClass> {
    let local = match metric {
        BasisKind::D2 => z_rotation_angle(p.c(), tol).map(|psi| psi.min(TAU - psi) > tol),
        BasisKind::D1 => z_rotation_angle(p.c(), tol).map(|psi| winding_gap(psi + p.v(), reading) > tol),
    };
    if local == Some(true) {
        return Some(LocusClass::LocalBranch);
    }
    let c = match metric {
        BasisKind::D2 => *p.c(),
        BasisKind::D1 => twist_columns(p.c(), p.v()),
    };
    so3_global(&c, tol).then_some(LocusClass::GlobalBranch)
}

/// Cut-locus membership with the default [`WindingReading`].
///
/// A point matching both SO(3)×ℝ branches is reported as
/// [`LocusClass::LocalBranch`].
pub fn in_cut_locus(point: &GroupPoint, metric: BasisKind, tol: f64) -> Option<LocusClass> {
    in_cut_locus_with(point, metric, tol, WindingReading::default())
}

pub fn in_cut_locus_with(
    point: &GroupPoint,
    metric: BasisKind,
    tol: f64,
    reading: WindingReading,
) -> Option<LocusClass> {
    match point {
        GroupPoint::Su2R(p) => su2r_conjugate(p, metric, tol).then_some(LocusClass::LocalBranch),
        GroupPoint::So3R(p) => so3r_cut(p, metric, tol, reading),
    }
}
