//! Seeded property sweeps over the whole crate. Each suite reports its
//! largest residual against a fixed tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::BasisKind;
use crate::cutconj::{cut_time, global_branch_function};
use crate::distance::{dist, dist_su2r_d1, dist_su2r_d2, splitting_check};
use crate::geodesics::{geodesic, GeodesicParams};
use crate::groups::{covering_pi_tilde, GroupKind, GroupPoint, Su2RPoint};
use crate::oracle::{integrate_geodesic, shooting_distance, CovectorState, ShootingConfig};
use crate::{Error, Result};

pub const ODE_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ode,
    Roundtrip,
    Covering,
    Splitting,
    Monotonicity,
    Shooting,
}

impl Suite {
    /// Suites run by `all`; shooting is added only on request.
    pub const DEFAULT: [Suite; 5] = [Suite::Ode, Suite::Roundtrip, Suite::Covering, Suite::Splitting, Suite::Monotonicity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ode => "ode",
            Suite::Roundtrip => "roundtrip",
            Suite::Covering => "covering",
            Suite::Splitting => "splitting",
            Suite::Monotonicity => "monotonicity",
            Suite::Shooting => "shooting",
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Suite::Ode => 1e-8,
            Suite::Roundtrip => 1e-6,
            Suite::Covering => 1e-8,
            Suite::Splitting => 1e-9,
            Suite::Monotonicity => 1e-10,
            Suite::Shooting => 1e-4,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::Ode, Suite::Roundtrip, Suite::Covering, Suite::Splitting, Suite::Monotonicity, Suite::Shooting]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn report(suite: Suite, samples: usize, max_residual: f64) -> SuiteReport {
    SuiteReport {
        name: suite.name(),
        samples,
        max_residual,
        tolerance: suite.tolerance(),
        passed: max_residual <= suite.tolerance(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform `φ₀`, `α₂ ∈ [−0.95, 0.95]`, `β ∈ [−3, 3]`.
pub fn random_params(rng: &mut impl Rng, metric: BasisKind, group: GroupKind) -> GeodesicParams {
    let phi0 = rng.gen_range(-PI..PI);
    let alpha2 = rng.gen_range(-0.95..0.95);
    let beta = rng.gen_range(-3.0..3.0);
    GeodesicParams::from_phi0(phi0, alpha2, beta, metric, group).expect("sampled inside the valid range")
}

/// Uniform on the unit 3-sphere, `v ∈ [−3, 3]`.
pub fn random_su2r(rng: &mut impl Rng) -> Su2RPoint {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n2: f64 = q.iter().map(|x| x * x).sum();
        if n2 > 1e-2 && n2 <= 1.0 {
            let n = n2.sqrt();
            let v = rng.gen_range(-3.0..3.0);
            return Su2RPoint::new(Complex64::new(q[0] / n, q[1] / n), Complex64::new(q[2] / n, q[3] / n), v)
                .expect("normalized");
        }
    }
}

pub const COMBOS: [(GroupKind, BasisKind); 4] = [
    (GroupKind::Su2R, BasisKind::D1),
    (GroupKind::Su2R, BasisKind::D2),
    (GroupKind::So3R, BasisKind::D1),
    (GroupKind::So3R, BasisKind::D2),
];

/// Integrator endpoint against the closed form, `t ∈ [0, 5]`.
pub fn ode_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let (group, metric) = COMBOS[i % 4];
        let q = random_params(rng, metric, group);
        let t = rng.gen_range(0.0..5.0);
        let tr = integrate_geodesic(metric, group, CovectorState::from_params(&q), t, ODE_STEPS)?;
        let end = tr.points.last().expect("non-empty trajectory");
        worst = worst.max(end.endpoint_error(&geodesic(&q, t)));
    }
    Ok(worst)
}

/// `|dist(geodesic(q, T)) − T|` for `T` below the cut time, `count` per
/// group/metric pair.
pub fn roundtrip_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (group, metric) in COMBOS {
        for _ in 0..count {
            let q = random_params(rng, metric, group);
            let t = rng.gen_range(0.0..1.0) * cut_time(&q)?.cut_time;
            worst = worst.max((dist(&geodesic(&q, t), metric)?.value - t).abs());
        }
    }
    Ok(worst)
}

/// SO(3)×ℝ distance at `Π̃(g)` against the smaller of the two lifts.
pub fn covering_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let g = random_su2r(rng);
        let p = GroupPoint::So3R(covering_pi_tilde(&g));
        let h = g.antipode();
        let m2 = dist_su2r_d2(&g)?.value.min(dist_su2r_d2(&h)?.value);
        let m1 = dist_su2r_d1(&g)?.value.min(dist_su2r_d1(&h)?.value);
        worst = worst.max((dist(&p, BasisKind::D2)?.value - m2).abs());
        worst = worst.max((dist(&p, BasisKind::D1)?.value - m1).abs());
    }
    Ok(worst)
}

/// `|d² − v² − d²|_{v=0}|` under metric `D2`, `count` points per group.
pub fn splitting_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let g = random_su2r(rng);
        worst = worst.max(splitting_check(&GroupPoint::Su2R(g))?);
        worst = worst.max(splitting_check(&GroupPoint::So3R(covering_pi_tilde(&g)))?);
    }
    Ok(worst)
}

/// Shape of the SO(3)×ℝ, `D2` cut time as a function of `|β|`: rising up
/// to `√((1 − α₂²)/3)`, falling after, `π/√(1 − α₂²)` at `β = 0`, and
/// `F(T) = 0` on the global branch. Returns the largest violation.
pub fn monotonicity_violation(alpha2: f64) -> Result<f64> {
    let h = 1.0 - alpha2 * alpha2;
    let r = h.sqrt();
    let threshold = (h / 3.0).sqrt();
    let mut worst: f64 = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..50 {
        let b = 3.0 * k as f64 / 49.0;
        let q = GeodesicParams::new([r, alpha2, 0.0], b, BasisKind::D2, GroupKind::So3R)?;
        let info = cut_time(&q)?;
        let t = info.cut_time;
        let w = q.w();
        if b >= threshold {
            worst = worst.max((t - 2.0 * PI / w).abs());
        } else {
            worst = worst.max(global_branch_function(&q, t).abs());
            if t >= 2.0 * PI / w {
                worst = worst.max(t - 2.0 * PI / w);
            }
        }
        if k == 0 {
            worst = worst.max((t - PI / r).abs());
        }
        if let Some((b0, t0)) = prev {
            if b <= threshold {
                worst = worst.max(t0 - t);
            } else if b0 >= threshold {
                worst = worst.max(t - t0);
            }
        }
        prev = Some((b, t));
    }
    Ok(worst)
}

pub fn monotonicity_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let mut worst = monotonicity_violation(0.0)?.max(monotonicity_violation(0.5)?);
    for _ in 0..count {
        worst = worst.max(monotonicity_violation(rng.gen_range(-0.95..0.95))?);
    }
    Ok(worst)
}

/// Closed-form distance against the shooting oracle at geodesic endpoints,
/// `count` targets per group/metric pair.
pub fn shooting_residual(rng: &mut impl Rng, count: usize) -> Result<f64> {
    let cfg = ShootingConfig::default();
    let mut worst: f64 = 0.0;
    for (group, metric) in COMBOS {
        for _ in 0..count {
            let q = random_params(rng, metric, group);
            let t = rng.gen_range(0.2..1.0) * cut_time(&q)?.cut_time.min(6.0);
            let target = geodesic(&q, t);
            let closed = dist(&target, metric)?.value;
            let shot = shooting_distance(&target, metric, &cfg)?.best_distance;
            worst = worst.max((closed - shot).abs());
        }
    }
    Ok(worst)
}

/// Runs one suite. Numerical failures inside a suite count as an infinite
/// residual so the summary is still produced.
pub fn run_suite(suite: Suite, count: usize, seed: u64) -> SuiteReport {
    let mut r = rng(seed);
    let res = match suite {
        Suite::Ode => ode_residual(&mut r, count),
        Suite::Roundtrip => roundtrip_residual(&mut r, count),
        Suite::Covering => covering_residual(&mut r, count),
        Suite::Splitting => splitting_residual(&mut r, count),
        Suite::Monotonicity => monotonicity_residual(&mut r, count),
        Suite::Shooting => shooting_residual(&mut r, count),
    };
    report(suite, count, res.unwrap_or(f64::INFINITY))
}

pub fn run_all(count: usize, seed: u64, deep: bool) -> Vec<SuiteReport> {
    let mut suites = Suite::DEFAULT.to_vec();
    if deep {
        suites.push(Suite::Shooting);
    }
    suites.into_iter().map(|s| run_suite(s, count, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in [Suite::Ode, Suite::Roundtrip, Suite::Covering, Suite::Splitting, Suite::Monotonicity, Suite::Shooting] {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("all".parse::<Suite>().is_err());
    }

    #[test]
    fn cheap_suites_pass_and_are_deterministic() {
        for s in [Suite::Roundtrip, Suite::Covering, Suite::Splitting, Suite::Monotonicity] {
            let a = run_suite(s, 20, 7);
            assert!(a.passed, "{a:?}");
            assert_eq!(a, run_suite(s, 20, 7));
        }
    }

    #[test]
    fn splitting_zero_at_v_zero() {
        let mut r = rng(3);
        for _ in 0..50 {
            let g = random_su2r(&mut r).with_v(0.0);
            assert_eq!(splitting_check(&GroupPoint::Su2R(g)).unwrap(), 0.0);
        }
    }
}
