//! Sub-Riemannian distance from the identity.
//!
//! Under metric `D2` the squared distance splits as `v² + d₀²`, where `d₀`
//! depends only on the compact block. On SU(2)×ℝ, `d₀` is one of five
//! cases in `|A|` and `arg A`; cases 4 and 5 need an auxiliary root `ξ`.
//! The two defining equations for `ξ` fix a single angle modulo 2π, so each
//! is solved as one monotone phase equation by bisection on
//! `|ξ| ≤ |A|/|B|`. With `a = |A|`, `s = |B|`, `r = √(1 + ξ²)` the arcsines
//! are evaluated as
//!
//! ```text
//! asin(s·r)     = atan2(s·r, c)
//! asin(ξ·s/a)   = atan2(ξ·s, c)        c = √((a − s|ξ|)(a + s|ξ|))
//! ```
//!
//! which stays accurate at the ends of the bracket. The SO(3)×ℝ distance
//! is the SU(2)×ℝ one at the lift with `Re A ≥ 0`, and metric `D1` reduces
//! to `D2` by a twist of the point.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::algebra::BasisKind;
use crate::cutconj::twist_columns;
use crate::groups::{lifts, GroupPoint, So3RPoint, Su2RPoint};
use crate::oracle::bisect;
use crate::{Error, Result};

/// Threshold on `|A|` and `|B|` for the degenerate cases.
pub const CASE_TOL: f64 = 1e-12;

/// Relative width of the case-3 boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceResult {
    pub value: f64,
    /// 1..=5, or 0 for the identity shortcut.
    pub case_label: u8,
    pub xi: Option<f64>,
    /// Largest residual of the defining equations at `xi`; zero when no
    /// root was needed.
    pub residual: f64,
}

/// Which arcsine argument the second case-4 equation is read with.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Case4Reading {
    /// `asin(ξ·√(1−|A|²)/|A|)`, the same term as in the first equation.
    #[default]
    Xi,
    /// `asin(β·√(1−|A|²)/|A|)` with the given `β`.
    LiteralBeta(f64),
}

/// Distance at `v = 0` from `(a, s, θ)`.
#[derive(Debug, Clone, Copy)]
struct Compact {
    d0: f64,
    case_label: u8,
    xi: Option<f64>,
    /// The angle `Φ(ξ)` the equations were solved for, and the data it has
    /// to reproduce as `(cos, sin)`.
    phase: Option<(f64, f64, f64)>,
}

struct Parts {
    r: f64,
    big: f64,
    small: f64,
}

/// `r`, `asin(s·r)` and `asin(ξ·s/a)`.
fn parts(xi: f64, a: f64, s: f64) -> Parts {
    let r = (1.0 + xi * xi).sqrt();
    let c = ((a - s * xi.abs()).max(0.0) * (a + s * xi.abs())).sqrt();
    Parts {
        r,
        big: (s * r).atan2(c),
        small: (xi * s).atan2(c),
    }
}

fn phase4(xi: f64, a: f64, s: f64) -> f64 {
    let p = parts(xi, a, s);
    -xi / p.r * p.big + p.small
}

fn phase5(xi: f64, a: f64, s: f64) -> f64 {
    let p = parts(xi, a, s);
    xi / p.r * (PI - p.big) + p.small
}

fn compact(a_raw: Complex64, b_abs: f64, reading: Case4Reading) -> Result<Compact> {
    let n = a_raw.norm().hypot(b_abs);
    let (a, s) = (a_raw.norm() / n, b_abs / n);
    if a < CASE_TOL {
        return Ok(Compact { d0: PI, case_label: 1, xi: None, phase: None });
    }
    let theta = a_raw.arg();
    let (cos_t, sin_t) = (a_raw.re / (a * n), a_raw.im / (a * n));
    if s < CASE_TOL {
        let t = theta.abs();
        return Ok(Compact {
            d0: (4.0 * t * (TAU - t)).sqrt(),
            case_label: 2,
            xi: None,
            phase: None,
        });
    }
    let xi_max = a / s;
    // (π/2)(1 − a), written to avoid cancellation when a → 1
    let boundary = 0.5 * PI * s * s / (1.0 + a);
    let gap = theta.abs() - boundary;
    if gap.abs() <= BOUNDARY_TOL * boundary {
        return Ok(Compact { d0: PI * s, case_label: 3, xi: None, phase: None });
    }
    if gap < 0.0 {
        let xi = match reading {
            Case4Reading::Xi => bisect(|x| phase4(x, a, s) - theta, -xi_max, xi_max, 0.0)?,
            Case4Reading::LiteralBeta(beta) => literal_case4(beta, a, s, cos_t, sin_t, xi_max)?,
        };
        let p = parts(xi, a, s);
        let phi = match reading {
            Case4Reading::Xi => phase4(xi, a, s),
            Case4Reading::LiteralBeta(beta) => -xi / p.r * p.big + (beta * s / a).asin(),
        };
        return Ok(Compact {
            d0: 2.0 / p.r * p.big,
            case_label: 4,
            xi: Some(xi),
            phase: Some((phi, cos_t, sin_t)),
        });
    }
    let target = PI.copysign(theta) - theta;
    let xi = bisect(|x| phase5(x, a, s) - target, -xi_max, xi_max, 0.0)?;
    let p = parts(xi, a, s);
    Ok(Compact {
        d0: 2.0 / p.r * (PI - p.big),
        case_label: 5,
        xi: Some(xi),
        phase: Some((phase5(xi, a, s), -cos_t, sin_t)),
    })
}

/// Case 4 read literally: `Φ(ξ) = −(ξ/r)·asin(s·r) + asin(β·s/a)` must
/// reproduce `(cos θ, sin θ)`. There is no monotone structure to exploit,
/// so the residual is scanned and the best cell refined.
fn literal_case4(beta: f64, a: f64, s: f64, cos_t: f64, sin_t: f64, xi_max: f64) -> Result<f64> {
    let arg = beta * s / a;
    if arg.abs() > 1.0 {
        return Err(Error::Solver(format!(
            "literal case-4 system has no solution: arcsine argument {arg} outside [-1, 1]"
        )));
    }
    let k = arg.asin();
    let residual = |xi: f64| {
        let p = parts(xi, a, s);
        let phi = -xi / p.r * p.big + k;
        (phi.cos() - cos_t).abs().max((phi.sin() - sin_t).abs())
    };
    const N: usize = 4000;
    let h = 2.0 * xi_max / N as f64;
    let best = (0..=N)
        .map(|i| -xi_max + h * i as f64)
        .min_by(|x, y| residual(*x).total_cmp(&residual(*y)))
        .expect("non-empty scan");
    let xi = golden_min(&residual, (best - h).max(-xi_max), (best + h).min(xi_max), 200);
    let r = residual(xi);
    if r > 1e-10 {
        return Err(Error::Solver(format!(
            "literal case-4 system has no solution: smallest residual {r:e} at xi = {xi}"
        )));
    }
    Ok(xi)
}

/// Golden-section minimization on `[lo, hi]`.
pub(crate) fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

fn phase_residual(c: &Compact) -> f64 {
    c.phase.map_or(0.0, |(phi, cs, sn)| (phi.cos() - cs).abs().max((phi.sin() - sn).abs()))
}

fn finish(c: Compact, v: f64, residual: f64) -> DistanceResult {
    DistanceResult {
        value: c.d0.hypot(v),
        case_label: c.case_label,
        xi: c.xi,
        residual,
    }
}

pub fn dist_su2r_d2(p: &Su2RPoint) -> Result<DistanceResult> {
    dist_su2r_d2_with(p, Case4Reading::Xi)
}

pub fn dist_su2r_d2_with(p: &Su2RPoint, reading: Case4Reading) -> Result<DistanceResult> {
    let c = compact(p.a(), p.b().norm(), reading)?;
    Ok(finish(c, p.v(), phase_residual(&c)))
}

/// `(A·e^{iv/2}, B·e^{−iv/2}, v)`: the point whose metric-2 distance is
/// the metric-1 distance of `p`.
pub fn twist_su2r(p: &Su2RPoint) -> Su2RPoint {
    let z = Complex64::from_polar(1.0, 0.5 * p.v());
    Su2RPoint::from_parts(p.a() * z, p.b() * z.conj(), p.v())
}

pub fn dist_su2r_d1(p: &Su2RPoint) -> Result<DistanceResult> {
    dist_su2r_d2(&twist_su2r(p))
}

/// `(C·exp(vE₃), v)`: the point whose metric-2 distance is the metric-1
/// distance of `p`.
pub fn twist_so3r(p: &So3RPoint) -> So3RPoint {
    So3RPoint::from_parts(twist_columns(p.c(), p.v()), p.v())
}

pub fn dist_so3r_rho2(p: &So3RPoint) -> Result<DistanceResult> {
    dist_so3r_rho2_with(p, Case4Reading::Xi)
}

pub fn dist_so3r_rho2_with(p: &So3RPoint, reading: Case4Reading) -> Result<DistanceResult> {
    let Some((lift, sign)) = canonical_lift(p, reading)? else {
        return Ok(DistanceResult {
            value: p.v().abs(),
            case_label: 0,
            xi: None,
            residual: 0.0,
        });
    };
    let c = compact(lift.a(), lift.b().norm(), reading)?;
    // the defining equations use 1 + c11 + c22 + c33 = 4(Re A)²,
    // 1 − c11 − c22 + c33 = 4(Im A)² and 1 + c33 = 2|A|²; the lift form
    // avoids the cancellation of the entry sums near the identity
    let a = lift.a();
    let trace_p = 4.0 * a.re * a.re;
    let trace_m = 4.0 * a.im * a.im;
    let den = 4.0 * a.norm_sqr();
    let misfit = |phi: f64, want_c: f64, want_s: f64| (phi.cos() - want_c).abs().max((phi.sin() - want_s).abs());
    let (xi, residual) = match c.case_label {
        2 => {
            // cos(πξ/√(1+ξ²)) = −½√(1+c11+c22+c33), sin(…) = ½·sgn·√(1−c11−c22+c33)
            let (want_c, want_s) = (-0.5 * trace_p.sqrt(), 0.5 * sign * trace_m.sqrt());
            let u = want_s.atan2(want_c) / PI;
            let xi = u / ((1.0 - u) * (1.0 + u)).sqrt();
            (Some(xi), misfit(PI * xi / (1.0 + xi * xi).sqrt(), want_c, want_s))
        }
        4 | 5 => {
            let (phi, _, _) = c.phase.expect("cases 4 and 5 carry a phase");
            let want_c = (trace_p / den).sqrt();
            let want_c = if c.case_label == 4 { want_c } else { -want_c };
            (c.xi, misfit(phi, want_c, sign * (trace_m / den).sqrt()))
        }
        _ => (None, 0.0),
    };
    Ok(DistanceResult {
        xi,
        residual,
        ..finish(c, p.v(), residual)
    })
}

/// The lift with `Re A ≥ 0` whose `Im A` carries `sgn(c21 − c12)`, and
/// that sign; `None` for the identity block.
fn canonical_lift(p: &So3RPoint, reading: Case4Reading) -> Result<Option<(Su2RPoint, f64)>> {
    let (g, h) = lifts(p);
    let lift = if g.a().re >= 0.0 { g } else { h };
    if lift.a() == Complex64::new(1.0, 0.0) && lift.b() == Complex64::new(0.0, 0.0) {
        return Ok(None);
    }
    let diff = p.entry(2, 1) - p.entry(1, 2);
    if diff != 0.0 {
        return Ok(Some((lift, diff.signum())));
    }
    if lift.a().re > 0.0 {
        // Im A = 0 here, so the sign has no effect on the lift
        return Ok(Some((lift, 1.0)));
    }
    // sgn(0): both lifts have Re A = 0 and are mirror images; take +1 once
    // they are confirmed to agree
    let other = lift.antipode();
    let a = compact(lift.a(), lift.b().norm(), reading)?;
    let b = compact(other.a(), other.b().norm(), reading)?;
    if (a.d0 - b.d0).abs() > 1e-9 {
        return Err(Error::Solver(format!(
            "sgn(c21 - c12) = 0 but the two sign choices give {} and {}",
            a.d0, b.d0
        )));
    }
    let lift = if lift.a().im < 0.0 { other } else { lift };
    Ok(Some((lift, 1.0)))
}

pub fn dist_so3r_rho1(p: &So3RPoint) -> Result<DistanceResult> {
    dist_so3r_rho2(&twist_so3r(p))
}

/// Distance from the identity under `metric`.
pub fn dist(point: &GroupPoint, metric: BasisKind) -> Result<DistanceResult> {
    match (point, metric) {
        (GroupPoint::Su2R(p), BasisKind::D1) => dist_su2r_d1(p),
        (GroupPoint::Su2R(p), BasisKind::D2) => dist_su2r_d2(p),
        (GroupPoint::So3R(p), BasisKind::D1) => dist_so3r_rho1(p),
        (GroupPoint::So3R(p), BasisKind::D2) => dist_so3r_rho2(p),
    }
}

/// `d(g, h) = d(Id, g⁻¹h)`.
pub fn dist_between(g: &GroupPoint, h: &GroupPoint, metric: BasisKind) -> Result<DistanceResult> {
    if g.kind() != h.kind() {
        return Err(Error::InvalidPoint("points on different groups".into()));
    }
    dist(&g.inverse().mul(h), metric)
}

/// `|d²(p) − v² − d²(p with v = 0)|` under metric `D2`.
pub fn splitting_check(point: &GroupPoint) -> Result<f64> {
    let full = dist(point, BasisKind::D2)?.value;
    let flat = dist(&point.with_v(0.0), BasisKind::D2)?.value;
    let v = point.v();
    Ok((full * full - v * v - flat * flat).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{geodesic, GeodesicParams};
    use crate::groups::{covering_pi_tilde, GroupKind};
    use crate::cutconj::cut_time;
    use nalgebra::Matrix3;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn su(a: Complex64, b: Complex64, v: f64) -> Su2RPoint {
        Su2RPoint::new(a, b, v).unwrap()
    }

    fn unit_point() -> impl Strategy<Value = Su2RPoint> {
        (prop::array::uniform4(-1.0..1.0f64), -3.0..3.0f64)
            .prop_filter("nonzero", |(q, _)| q.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|(q, v)| {
                let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                Su2RPoint::from_parts(c(q[0] / n, q[1] / n), c(q[2] / n, q[3] / n), v)
            })
    }

    fn params_strategy() -> impl Strategy<Value = GeodesicParams> {
        (-PI..PI, -0.95..0.95f64, -3.0..3.0f64, prop::bool::ANY, prop::bool::ANY).prop_map(
            |(phi0, a2, beta, d1, su2)| {
                let metric = if d1 { BasisKind::D1 } else { BasisKind::D2 };
                let group = if su2 { GroupKind::Su2R } else { GroupKind::So3R };
                GeodesicParams::from_phi0(phi0, a2, beta, metric, group).unwrap()
            },
        )
    }

    #[test]
    fn special_values() {
        let d = dist_su2r_d2(&Su2RPoint::IDENTITY).unwrap();
        assert_eq!((d.value, d.case_label), (0.0, 2));
        let d = dist_su2r_d2(&su(c(0.0, 0.0), c(1.0, 0.0), 0.0)).unwrap();
        assert_eq!((d.value, d.case_label), (PI, 1));
        let d = dist_su2r_d2(&su(c(0.0, 0.0), c(0.6, -0.8), 1.0)).unwrap();
        assert!((d.value - (1.0 + PI * PI).sqrt()).abs() < 1e-15);
        let d = dist_su2r_d2(&su(c(-1.0, 0.0), c(0.0, 0.0), 0.0)).unwrap();
        assert!((d.value - TAU).abs() < 1e-15);
        let v = 0.7;
        let d = dist_su2r_d1(&su(Complex64::from_polar(1.0, -v / 2.0), c(0.0, 0.0), v)).unwrap();
        assert!((d.value - v).abs() < 1e-15);
    }

    #[test]
    fn so3r_special_values() {
        let d = dist_so3r_rho2(&So3RPoint::identity()).unwrap();
        assert_eq!((d.value, d.case_label), (0.0, 0));
        let (s, co) = 0.4f64.sin_cos();
        let flip = Matrix3::new(co, s, 0.0, s, -co, 0.0, 0.0, 0.0, -1.0);
        let d = dist_so3r_rho2(&So3RPoint::new(flip, 2.0).unwrap()).unwrap();
        assert_eq!(d.case_label, 1);
        assert!((d.value - (4.0 + PI * PI).sqrt()).abs() < 1e-10);
        let half = So3RPoint::new(Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, -1.0, 1.0)), 0.0).unwrap();
        let d = dist_so3r_rho2(&half).unwrap();
        let lift = dist_su2r_d2(&su(c(0.0, 1.0), c(0.0, 0.0), 0.0)).unwrap();
        assert_eq!(d.case_label, 2);
        assert!((d.value - lift.value).abs() < 1e-12);
        assert!((d.value - (PI * 3.0 * PI).sqrt()).abs() < 1e-12);
        assert!(d.residual < 1e-12);
        let e = So3RPoint::new(Matrix3::identity(), 0.8).unwrap();
        let d = dist_so3r_rho1(&e).unwrap();
        let want = dist_so3r_rho2(&So3RPoint::new(crate::geodesics::z_rotation(-0.8), 0.8).unwrap()).unwrap();
        assert_eq!(d, want);
    }

    #[test]
    fn splitting_special_values() {
        let p = GroupPoint::Su2R(su(c(0.3, 0.4), c(0.0, 0.866_025_403_784_438_6), 0.0));
        assert_eq!(splitting_check(&p).unwrap(), 0.0);
        let p = GroupPoint::Su2R(su(c(0.0, 0.0), c(1.0, 0.0), 2.5));
        assert!(splitting_check(&p).unwrap() < 1e-12);
    }

    #[test]
    fn case_boundary_is_continuous() {
        let a: f64 = 0.6;
        let s = (1.0 - a * a).sqrt();
        let bd = 0.5 * PI * (1.0 - a);
        let mut prev: Option<f64> = None;
        for k in -200..=200 {
            let th = bd + 1e-4 * k as f64 / 200.0;
            let d = dist_su2r_d2(&su(Complex64::from_polar(a, th), c(s, 0.0), 0.0)).unwrap().value;
            if let Some(p) = prev {
                assert!((d - p).abs() < 1e-6);
            }
            prev = Some(d);
        }
        let on = dist_su2r_d2(&su(Complex64::from_polar(a, bd), c(s, 0.0), 0.0)).unwrap();
        assert!((on.value - PI * s).abs() < 1e-12);
    }

    #[test]
    fn literal_reading_is_rejected_or_wrong() {
        // a geodesic endpoint in case 4 whose ξ differs from its β
        let q = GeodesicParams::from_phi0(0.4, 0.6, 1.0, BasisKind::D2, GroupKind::Su2R).unwrap();
        let t = 1.2;
        let g = crate::geodesics::geodesic_su2r(&q, t).with_v(0.0);
        let good = dist_su2r_d2(&g).unwrap();
        assert_eq!(good.case_label, 4);
        let want = t * (1.0 - 0.36f64).sqrt();
        assert!((good.value - want).abs() < 1e-9);
        match dist_su2r_d2_with(&g, Case4Reading::LiteralBeta(q.beta)) {
            Err(Error::Solver(_)) => {}
            Ok(d) => assert!((d.value - want).abs() > 1e-4),
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    proptest! {
        #[test]
        fn roundtrip_below_cut(q in params_strategy(), frac in 0.0..1.0f64) {
            let t = frac * cut_time(&q).unwrap().cut_time;
            let g = geodesic(&q, t);
            let d = dist(&g, q.metric).unwrap();
            prop_assert!((d.value - t).abs() < 1e-6, "{:?} t={} d={:?}", q, t, d);
            prop_assert!(d.value >= g.v().abs());
            if d.xi.is_some() {
                prop_assert!(d.residual <= 1e-10, "{:?}", d);
            }
        }

        #[test]
        fn beyond_cut_is_shorter(q in params_strategy()) {
            let t = 1.1 * cut_time(&q).unwrap().cut_time;
            let d = dist(&geodesic(&q, t), q.metric).unwrap();
            prop_assert!(d.value < t - 1e-6);
        }

        #[test]
        fn covering_law(g in unit_point()) {
            let p = covering_pi_tilde(&g);
            let d2 = dist_so3r_rho2(&p).unwrap().value;
            let m2 = dist_su2r_d2(&g).unwrap().value.min(dist_su2r_d2(&g.antipode()).unwrap().value);
            prop_assert!((d2 - m2).abs() < 1e-8);
            let d1 = dist_so3r_rho1(&p).unwrap().value;
            let m1 = dist_su2r_d1(&g).unwrap().value.min(dist_su2r_d1(&g.antipode()).unwrap().value);
            prop_assert!((d1 - m1).abs() < 1e-8);
        }

        #[test]
        fn symmetric_under_inversion(g in unit_point()) {
            for metric in [BasisKind::D1, BasisKind::D2] {
                let p = GroupPoint::Su2R(g);
                let a = dist(&p, metric).unwrap().value;
                let b = dist(&p.inverse(), metric).unwrap().value;
                prop_assert!((a - b).abs() < 1e-8);
                let p = GroupPoint::So3R(covering_pi_tilde(&g));
                let a = dist(&p, metric).unwrap().value;
                let b = dist(&p.inverse(), metric).unwrap().value;
                prop_assert!((a - b).abs() < 1e-8);
            }
        }

        #[test]
        fn triangle_inequality(g in unit_point(), h in unit_point()) {
            for metric in [BasisKind::D1, BasisKind::D2] {
                let (pg, ph) = (GroupPoint::Su2R(g), GroupPoint::Su2R(h));
                let lhs = dist(&pg.mul(&ph), metric).unwrap().value;
                let rhs = dist(&pg, metric).unwrap().value + dist(&ph, metric).unwrap().value;
                prop_assert!(lhs <= rhs + 1e-8);
            }
        }

        #[test]
        fn splitting_law(g in unit_point()) {
            prop_assert!(splitting_check(&GroupPoint::Su2R(g)).unwrap() <= 1e-9);
            prop_assert!(splitting_check(&GroupPoint::So3R(covering_pi_tilde(&g))).unwrap() <= 1e-9);
        }

        #[test]
        fn abnormal_endpoints_are_metric_lines(v in -10.0..10.0f64, alpha2 in 0.1..0.99f64) {
            let d = dist_su2r_d2(&Su2RPoint::IDENTITY.with_v(v)).unwrap().value;
            prop_assert!((d - v.abs()).abs() < 1e-12);
            // a normal geodesic reaching (1, 0, v) needs length |v/α₂|
            prop_assert!((v / alpha2).abs() >= d);
        }
    }
}
