//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use rand::Rng;

use srlie_core::cutconj::{conjugate_time, cut_time, global_branch_function, tan_x_root};
use srlie_core::distance::{dist, dist_so3r_rho2, dist_su2r_d2, dist_su2r_d2_with, splitting_check, Case4Reading};
use srlie_core::geodesics::{geodesic, geodesic_su2r};
use srlie_core::oracle::{shooting_distance, ShootingConfig};
use srlie_core::verify::{
    covering_residual, monotonicity_violation, ode_residual, random_params, random_su2r, rng, roundtrip_residual,
    COMBOS,
};
use srlie_core::{BasisKind, GeodesicParams, GroupKind, GroupPoint, LocusClass, So3RPoint, Su2RPoint};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(elapsed: Duration, budget_s: u64) -> bool {
    elapsed <= Duration::from_secs(budget_s)
}

fn c1_closed_form_vs_ode() -> Outcome {
    let t0 = Instant::now();
    let err = ode_residual(&mut rng(101), 100).unwrap_or(f64::INFINITY);
    let el = t0.elapsed();
    outcome(
        err <= 1e-8 && within(el, 30),
        format!("max endpoint error {err:.3e} over 100 runs, {:.1}s", el.as_secs_f64()),
    )
}

fn c2_distance_roundtrip() -> Outcome {
    let t0 = Instant::now();
    let err = roundtrip_residual(&mut rng(102), 200).unwrap_or(f64::INFINITY);
    let el = t0.elapsed();
    outcome(
        err <= 1e-6 && within(el, 60),
        format!("max |dist - T| {err:.3e} over 4x200 geodesics, {:.1}s", el.as_secs_f64()),
    )
}

fn c3_special_values() -> Outcome {
    let mut r = rng(103);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let v = r.gen_range(-5.0..5.0);
        let th = r.gen_range(-PI..PI);
        let p = Su2RPoint::new(Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, th), v).unwrap();
        worst = worst.max((dist_su2r_d2(&p).unwrap().value - (v * v + PI * PI).sqrt()).abs());
        let (s, c) = th.sin_cos();
        let flip = Matrix3::new(c, s, 0.0, s, -c, 0.0, 0.0, 0.0, -1.0);
        let q = So3RPoint::new(flip, v).unwrap();
        worst = worst.max((dist_so3r_rho2(&q).unwrap().value - (v * v + PI * PI).sqrt()).abs());
    }
    let m = Su2RPoint::new(Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), 0.0).unwrap();
    worst = worst.max((dist_su2r_d2(&m).unwrap().value - TAU).abs());
    outcome(worst <= 1e-10, format!("max deviation {worst:.3e}"))
}

fn c4_splitting() -> Outcome {
    let mut r = rng(104);
    let mut worst: f64 = 0.0;
    let mut at_zero: f64 = 0.0;
    for _ in 0..500 {
        let g = random_su2r(&mut r);
        for p in [GroupPoint::Su2R(g), GroupPoint::So3R(srlie_core::groups::covering_pi_tilde(&g))] {
            worst = worst.max(splitting_check(&p).unwrap());
            at_zero = at_zero.max(splitting_check(&p.with_v(0.0)).unwrap());
        }
    }
    outcome(
        worst <= 1e-9 && at_zero == 0.0,
        format!("max residual {worst:.3e}, at v = 0: {at_zero:e}"),
    )
}

fn c5_covering() -> Outcome {
    let err = covering_residual(&mut rng(105), 200).unwrap_or(f64::INFINITY);
    outcome(err <= 1e-8, format!("max deviation {err:.3e} over 200 points, both metrics"))
}

fn c6_cut_time_law() -> Outcome {
    let mut r = rng(106);
    let mut local: f64 = 0.0;
    let mut f_res: f64 = 0.0;
    let mut below = true;
    for _ in 0..500 {
        let q = random_params(&mut r, BasisKind::D2, GroupKind::So3R);
        let info = cut_time(&q).unwrap();
        let t1 = TAU / q.w();
        if q.beta.abs() >= (q.horizontal_sq() / 3.0).sqrt() {
            local = local.max((info.cut_time - t1).abs());
            below &= info.locus_class == LocusClass::LocalBranch;
        } else {
            f_res = f_res.max(global_branch_function(&q, info.cut_time).abs());
            below &= info.cut_time < t1 && info.locus_class == LocusClass::GlobalBranch;
        }
    }
    let shape = monotonicity_violation(0.0).unwrap().max(monotonicity_violation(0.5).unwrap());
    outcome(
        local <= 1e-12 && f_res <= 1e-12 && below && shape <= 1e-10,
        format!("local branch {local:.1e}, F(T) residual {f_res:.1e}, T < 2pi/w: {below}, shape violation {shape:.1e}"),
    )
}

/// Singular values of the Jacobian of `(φ₀, α₂, β, t) ↦ coordinates`.
fn endpoint_svd_ratio(q: &GeodesicParams, t: f64) -> f64 {
    let x = [q.phi0(), q.alpha2, q.beta, t];
    let f = |x: [f64; 4]| {
        let p = GeodesicParams::from_phi0(x[0], x[1], x[2], q.metric, q.group).unwrap();
        geodesic(&p, x[3]).coordinates()
    };
    let m = f(x).len();
    let h = 1e-6;
    let mut jac = DMatrix::<f64>::zeros(m, 4);
    for j in 0..4 {
        let (mut xp, mut xm) = (x, x);
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(xp), f(xm));
        for i in 0..m {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let sv = jac.singular_values();
    sv.min() / sv.max()
}

fn c7_conjugate_structure() -> Outcome {
    let x1 = tan_x_root(1);
    let tan_res = (x1.tan() - x1).abs();
    let mut r = rng(107);
    let mut times: f64 = 0.0;
    let (mut at_conj, mut before): (f64, f64) = (0.0, f64::INFINITY);
    for i in 0..20 {
        let (group, metric) = COMBOS[i % 4];
        let phi0 = r.gen_range(-PI..PI);
        let alpha2 = r.gen_range(-0.8..0.8);
        let beta = r.gen_range(-2.0..2.0);
        let q = GeodesicParams::from_phi0(phi0, alpha2, beta, metric, group).unwrap();
        let w = q.w();
        let t1 = conjugate_time(&q, 1).unwrap();
        times = times.max((t1 - TAU / w).abs());
        times = times.max((conjugate_time(&q, 2).unwrap() - 2.0 * x1 / w).abs());
        at_conj = at_conj.max(endpoint_svd_ratio(&q, t1));
        before = before.min(endpoint_svd_ratio(&q, 0.9 * t1));
    }
    outcome(
        tan_res <= 1e-12 && times <= 1e-12 && at_conj < 1e-5 && before > 1e-3,
        format!(
            "tan residual {tan_res:.1e}, time deviation {times:.1e}, sv ratio at t1 <= {at_conj:.1e}, at 0.9 t1 >= {before:.1e}"
        ),
    )
}

/// Targets on the geodesic family, `T` below the cut time.
fn shooting_targets(seed: u64, group: GroupKind, metric: BasisKind, n: usize) -> Vec<GroupPoint> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let q = random_params(&mut r, metric, group);
            let t = r.gen_range(0.2..1.0) * cut_time(&q).unwrap().cut_time.min(6.0);
            geodesic(&q, t)
        })
        .collect()
}

fn c8_shooting() -> Outcome {
    let t0 = Instant::now();
    let cfg = ShootingConfig::default();
    let mut worst: f64 = 0.0;
    for (k, (group, metric)) in COMBOS.into_iter().enumerate() {
        for target in shooting_targets(108 + k as u64, group, metric, 20) {
            let closed = dist(&target, metric).unwrap().value;
            let shot = shooting_distance(&target, metric, &cfg).map_or(f64::INFINITY, |s| s.best_distance);
            worst = worst.max((closed - shot).abs());
        }
    }
    let el = t0.elapsed();
    outcome(
        worst <= 1e-4 && within(el, 300),
        format!("max |closed - shooting| {worst:.3e} over 4x20 targets, {:.1}s", el.as_secs_f64()),
    )
}

fn c9_metric_lines() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut infinite = true;
    for (group, metric) in COMBOS {
        for a2 in [1.0, -1.0] {
            for t in [0.5, 3.0, 17.0] {
                let q = GeodesicParams::new([0.0, a2, 0.0], 0.7, metric, group).unwrap();
                let g = geodesic(&q, t);
                worst = worst.max((g.v() - a2 * t).abs());
                worst = worst.max((dist(&g, metric).unwrap().value - t).abs());
                infinite &= cut_time(&q).unwrap().cut_time == f64::INFINITY;
            }
        }
    }
    for v in [-4.0, 0.3, 9.0] {
        for group in [GroupKind::Su2R, GroupKind::So3R] {
            let p = GroupPoint::identity(group).with_v(v);
            worst = worst.max((dist(&p, BasisKind::D2).unwrap().value - v.abs()).abs());
        }
    }
    outcome(
        worst <= 1e-10 && infinite,
        format!("max deviation {worst:.1e}, cut times infinite: {infinite}"),
    )
}

fn c10_case4_reading() -> Outcome {
    let cfg = ShootingConfig::default();
    let mut r = rng(110);
    let (mut n, mut xi_worst, mut literal_failures) = (0, 0.0f64, 0);
    while n < 20 {
        let alpha2 = r.gen_range(0.3..0.8);
        let beta = r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let q = GeodesicParams::from_phi0(r.gen_range(-PI..PI), alpha2, beta, BasisKind::D2, GroupKind::Su2R).unwrap();
        let t = r.gen_range(0.1..1.0) * PI / q.w();
        let g = geodesic_su2r(&q, t);
        let d = dist_su2r_d2(&g).unwrap();
        if d.case_label != 4 {
            continue;
        }
        n += 1;
        let shot = shooting_distance(&GroupPoint::Su2R(g), BasisKind::D2, &cfg).map_or(f64::INFINITY, |s| s.best_distance);
        xi_worst = xi_worst.max((d.value - shot).abs());
        match dist_su2r_d2_with(&g, Case4Reading::LiteralBeta(q.beta)) {
            Ok(lit) if (lit.value - shot).abs() <= 1e-4 => {}
            _ => literal_failures += 1,
        }
    }
    outcome(
        xi_worst <= 1e-4 && literal_failures > 0,
        format!("xi reading max deviation {xi_worst:.1e}; literal beta reading fails on {literal_failures}/{n} case-4 targets"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed form vs ODE integrator", c1_closed_form_vs_ode),
        ("distance roundtrip", c2_distance_roundtrip),
        ("special values", c3_special_values),
        ("splitting law", c4_splitting),
        ("covering law", c5_covering),
        ("SO3R/D2 cut-time law", c6_cut_time_law),
        ("conjugate structure", c7_conjugate_structure),
        ("shooting-oracle agreement", c8_shooting),
        ("metric lines", c9_metric_lines),
        ("case-4 reading arbitration", c10_case4_reading),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name} ({})", i + 1, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
