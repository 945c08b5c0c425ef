//! Independent numerical ground truth for the closed forms: a Runge–Kutta
//! integrator for the normal Hamiltonian system, a brute-force shooting
//! search for distances, and the bisection used by all root finders.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::{bracket, structure_constants, AlgebraVector, BasisKind};
use crate::distance::golden_min;
use crate::geodesics::{geodesic, GeodesicParams};
use crate::groups::{lifts, one_param_subgroup, GroupKind, GroupPoint, Su2RPoint};
use crate::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops when the bracket is at most `tol` wide or cannot be split further
/// in floating point; `tol = 0` therefore means full machine precision.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if lo >= hi || tol.is_nan() || tol < 0.0 || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Solver(format!("bad bisection bracket [{lo}, {hi}] with tol {tol}")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..2100 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// The vertical coordinates `ψ₁..ψ₄` of the covector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovectorState {
    pub psi: [f64; 4],
}

impl CovectorState {
    /// `(α₁, α₂, α₃, ψ₄(0))` with `ψ₄(0) = β` for `D2` and `β − α₂` for `D1`.
    pub fn from_params(params: &GeodesicParams) -> Self {
        CovectorState { psi: params.psi(0.0) }
    }

    pub fn horizontal_norm_sq(&self) -> f64 {
        self.psi[..3].iter().map(|p| p * p).sum()
    }

    /// `u = ψ₁e₁ + ψ₂e₂ + ψ₃e₃`.
    pub fn control(&self) -> AlgebraVector {
        AlgebraVector([self.psi[0], self.psi[1], self.psi[2], 0.0])
    }
}

/// `ψ̇_j = Σ_{k=1..4} Σ_{i=1..3} C^k_{ij} ψ_i ψ_k`.
fn covector_rhs(psi: &[f64; 4], basis: BasisKind) -> [f64; 4] {
    let c = structure_constants(basis);
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for k in 0..4 {
                let s = c[i][j][k];
                if s != 0 {
                    *o += f64::from(s) * psi[i] * psi[k];
                }
            }
        }
    }
    out
}

/// Truncated `dexp⁻¹`: `Ω̇ = u + ½[Ω, u] + (1/12)[Ω, [Ω, u]]`.
fn omega_rhs(omega: &AlgebraVector, u: &AlgebraVector, basis: BasisKind) -> AlgebraVector {
    let ou = bracket(omega, u, basis);
    *u + 0.5 * ou + (1.0 / 12.0) * bracket(omega, &ou, basis)
}

fn axpy(x: &[f64; 4], h: f64, k: &[f64; 4]) -> [f64; 4] {
    std::array::from_fn(|i| x[i] + h * k[i])
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<GroupPoint>,
    pub covectors: Vec<CovectorState>,
}

/// Integrates `ġ = g·u(ψ)` together with the covector system by classical
/// RK4, advancing the group element with the exact block exponential of
/// the step's algebra increment (Runge–Kutta–Munthe-Kaas).
pub fn integrate_geodesic(
    metric: BasisKind,
    group: GroupKind,
    init: CovectorState,
    t_end: f64,
    steps: usize,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidParams("steps must be at least 1".into()));
    }
    let n2 = init.horizontal_norm_sq();
    if (n2 - 1.0).abs() > 1e-10 || !init.psi.iter().all(|p| p.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "initial horizontal covector has squared norm {n2}, expected 1"
        )));
    }
    if !t_end.is_finite() {
        return Err(Error::InvalidParams("non-finite end time".into()));
    }
    let mut g = GroupPoint::identity(group);
    if t_end == 0.0 {
        return Ok(Trajectory {
            times: vec![0.0],
            points: vec![g],
            covectors: vec![init],
        });
    }
    let h = t_end / steps as f64;
    let mut psi = init.psi;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        points: Vec::with_capacity(steps + 1),
        covectors: Vec::with_capacity(steps + 1),
    };
    traj.times.push(0.0);
    traj.points.push(g);
    traj.covectors.push(init);
    let u_of = |p: &[f64; 4]| AlgebraVector([p[0], p[1], p[2], 0.0]);
    for n in 1..=steps {
        let k1p = covector_rhs(&psi, metric);
        let k1o = omega_rhs(&AlgebraVector::ZERO, &u_of(&psi), metric);

        let p2 = axpy(&psi, 0.5 * h, &k1p);
        let o2 = (0.5 * h) * k1o;
        let k2p = covector_rhs(&p2, metric);
        let k2o = omega_rhs(&o2, &u_of(&p2), metric);

        let p3 = axpy(&psi, 0.5 * h, &k2p);
        let o3 = (0.5 * h) * k2o;
        let k3p = covector_rhs(&p3, metric);
        let k3o = omega_rhs(&o3, &u_of(&p3), metric);

        let p4 = axpy(&psi, h, &k3p);
        let o4 = h * k3o;
        let k4p = covector_rhs(&p4, metric);
        let k4o = omega_rhs(&o4, &u_of(&p4), metric);

        psi = std::array::from_fn(|i| psi[i] + h / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i] + k4p[i]));
        let omega = (h / 6.0) * (k1o + 2.0 * k2o + 2.0 * k3o + k4o);
        g = g.mul(&one_param_subgroup(&omega, metric, group, 1.0));

        traj.times.push(h * n as f64);
        traj.points.push(g);
        traj.covectors.push(CovectorState { psi });
    }
    Ok(traj)
}

/// Search grid and refinement settings for [`shooting_distance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub phi_count: usize,
    pub alpha2_count: usize,
    pub alpha2_max: f64,
    pub beta_count: usize,
    pub beta_max: f64,
    pub t_count: usize,
    /// Golden-section iterations per coordinate and sweep.
    pub refine_iters: usize,
    /// Number of best grid slices refined.
    pub seeds: usize,
    /// Endpoint error below which a refined candidate hits the target.
    pub capture_tol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            phi_count: 64,
            alpha2_count: 33,
            alpha2_max: 0.98,
            beta_count: 65,
            beta_max: 6.0,
            t_count: 128,
            refine_iters: 40,
            seeds: 48,
            capture_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingReport {
    pub best_distance: f64,
    pub best_params: GeodesicParams,
    pub best_time: f64,
    pub endpoint_error: f64,
    pub grid_spec: String,
    pub refinement_iterations: usize,
}

/// Grid candidate: endpoint error and the grid coordinates.
#[derive(Debug, Clone, Copy)]
struct Cell {
    err: f64,
    phi0: f64,
    alpha2: f64,
    beta: f64,
    t: f64,
}

const SWEEPS: usize = 3;
const LM_ITERS: usize = 60;
const ALPHA2_CLAMP: f64 = 1.0 - 1e-9;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Scans one `(α₂, β)` slice. Both endpoint metrics are functions of the
/// real inner product `q = ⟨(A,B), (A*,B*)⟩` with a lift of the target:
/// `‖ΔU‖_F = 2√(1 − q)` on SU(2) and `‖ΔC‖_F = √(8(1 − q²))` on SO(3).
fn scan_slice(
    target: &Su2RPoint,
    group: GroupKind,
    metric: BasisKind,
    alpha2: f64,
    beta: f64,
    phis: &[(f64, f64, f64)],
    t_count: usize,
) -> Cell {
    let r = (1.0 - alpha2 * alpha2).sqrt();
    let b = match metric {
        BasisKind::D1 => beta - alpha2,
        BasisKind::D2 => beta,
    };
    let w = (r * r + b * b).sqrt();
    let horizon = TAU / w;
    let (ta, tb) = (target.a(), target.b());
    let mut best = Cell {
        err: f64::INFINITY,
        phi0: 0.0,
        alpha2,
        beta,
        t: 0.0,
    };
    for k in 1..=t_count {
        let t = horizon * k as f64 / t_count as f64;
        let dv = (alpha2 * t - target.v()).abs();
        if dv >= best.err {
            continue;
        }
        let (sn, cn) = (0.5 * w * t).sin_cos();
        let m = sn / w;
        let rot = Complex64::from_polar(1.0, 0.5 * beta * t);
        let a = Complex64::new(cn, b * m) * rot.conj();
        let qa = a.re * ta.re + a.im * ta.im;
        // B = r·m·e^{iφ₀}·rot, so Re(conj(B)·B*) = r·m·Re(e^{−iφ₀}·z)
        let z = rot.conj() * tb * (r * m);
        for &(phi0, c, s) in phis {
            let q = qa + c * z.re + s * z.im;
            let e = match group {
                GroupKind::Su2R => 2.0 * (1.0 - q).max(0.0).sqrt(),
                GroupKind::So3R => (8.0 * (1.0 - q * q).max(0.0)).sqrt(),
            } + dv;
            if e < best.err {
                best = Cell { err: e, phi0, alpha2, beta, t };
            }
        }
    }
    best
}

fn params_of(x: &[f64; 4], metric: BasisKind, group: GroupKind) -> GeodesicParams {
    let alpha2 = x[1].clamp(-ALPHA2_CLAMP, ALPHA2_CLAMP);
    GeodesicParams::from_phi0(x[0], alpha2, x[2], metric, group).expect("clamped parameters are valid")
}

fn residual_vec(x: &[f64; 4], metric: BasisKind, group: GroupKind, target: &GroupPoint) -> Vec<f64> {
    let p = params_of(x, metric, group);
    let g = geodesic(&p, x[3]);
    g.coordinates()
        .iter()
        .zip(target.coordinates())
        .map(|(a, b)| a - b)
        .collect()
}

/// Levenberg–Marquardt on the coordinate residual with a central-difference
/// Jacobian.
fn levenberg_marquardt(x0: [f64; 4], metric: BasisKind, group: GroupKind, target: &GroupPoint) -> [f64; 4] {
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
    let mut x = x0;
    let mut r = residual_vec(&x, metric, group, target);
    let mut cost = norm(&r);
    let mut lambda = 1e-3;
    for _ in 0..LM_ITERS {
        if cost < 1e-30 {
            break;
        }
        let m = r.len();
        let mut jac = DMatrix::<f64>::zeros(m, 4);
        for j in 0..4 {
            let h = 1e-7 * (1.0 + x[j].abs());
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let rp = residual_vec(&xp, metric, group, target);
            let rm = residual_vec(&xm, metric, group, target);
            for i in 0..m {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rv = DVector::from_vec(r.clone());
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for j in 0..4 {
                a[(j, j)] += lambda * (1.0 + jtj[(j, j)]);
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let xn: [f64; 4] = std::array::from_fn(|j| x[j] + step[j]);
            let rn = residual_vec(&xn, metric, group, target);
            let cn = norm(&rn);
            if cn < cost {
                x = xn;
                r = rn;
                cost = cn;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    x
}

fn refine(
    cell: &Cell,
    steps: [f64; 4],
    metric: BasisKind,
    group: GroupKind,
    target: &GroupPoint,
    iters: usize,
) -> ([f64; 4], f64) {
    let err = |x: &[f64; 4]| {
        let p = params_of(x, metric, group);
        geodesic(&p, x[3]).endpoint_error(target)
    };
    let mut x = [cell.phi0, cell.alpha2, cell.beta, cell.t];
    let mut h = steps;
    for _ in 0..SWEEPS {
        for j in 0..4 {
            let f = |y: f64| {
                let mut z = x;
                z[j] = y;
                err(&z)
            };
            let (lo, hi) = (x[j] - h[j], x[j] + h[j]);
            let y = golden_min(&f, lo, hi, iters);
            if f(y) < f(x[j]) {
                x[j] = y;
            }
        }
        h = h.map(|v| 0.25 * v);
    }
    let x = levenberg_marquardt(x, metric, group, target);
    (x, err(&x))
}

/// Shortest time along the normal geodesic family that reaches `target`.
pub fn shooting_distance(target: &GroupPoint, metric: BasisKind, config: &ShootingConfig) -> Result<ShootingReport> {
    let group = target.kind();
    let grid_spec = format!(
        "{} phi0 x {} alpha2 in [-{}, {}] x {} beta in [-{}, {}] x {} t in (0, 2pi/w]",
        config.phi_count,
        config.alpha2_count,
        config.alpha2_max,
        config.alpha2_max,
        config.beta_count,
        config.beta_max,
        config.beta_max,
        config.t_count
    );
    let identity = GroupPoint::identity(group);
    let trivial = GeodesicParams::new([1.0, 0.0, 0.0], 0.0, metric, group)?;
    let e0 = identity.endpoint_error(target);
    if e0 <= config.capture_tol {
        return Ok(ShootingReport {
            best_distance: 0.0,
            best_params: trivial,
            best_time: 0.0,
            endpoint_error: e0,
            grid_spec,
            refinement_iterations: 0,
        });
    }
    let lift = match target {
        GroupPoint::Su2R(p) => *p,
        GroupPoint::So3R(p) => lifts(p).0,
    };
    let phis: Vec<(f64, f64, f64)> = (0..config.phi_count)
        .map(|i| {
            let phi = -PI + TAU * i as f64 / config.phi_count as f64;
            let (s, c) = phi.sin_cos();
            (phi, c, s)
        })
        .collect();
    let alphas = linspace(-config.alpha2_max, config.alpha2_max, config.alpha2_count);
    let betas = linspace(-config.beta_max, config.beta_max, config.beta_count);
    let slices: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| betas.iter().map(move |&b| (a, b))).collect();
    let mut cells: Vec<Cell> = slices
        .par_iter()
        .map(|&(a, b)| scan_slice(&lift, group, metric, a, b, &phis, config.t_count))
        .collect();
    cells.sort_by(|x, y| x.err.total_cmp(&y.err).then(x.t.total_cmp(&y.t)));
    cells.truncate(config.seeds);

    let d_phi = TAU / config.phi_count as f64;
    let d_alpha = 2.0 * config.alpha2_max / (config.alpha2_count.max(2) - 1) as f64;
    let d_beta = 2.0 * config.beta_max / (config.beta_count.max(2) - 1) as f64;
    let results: Vec<([f64; 4], f64)> = cells
        .par_iter()
        .map(|cell| {
            let r = (1.0 - cell.alpha2 * cell.alpha2).sqrt();
            let b = match metric {
                BasisKind::D1 => cell.beta - cell.alpha2,
                BasisKind::D2 => cell.beta,
            };
            let d_t = TAU / (r * r + b * b).sqrt() / config.t_count as f64;
            refine(cell, [d_phi, d_alpha, d_beta, d_t], metric, group, target, config.refine_iters)
        })
        .collect();

    let best_err = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let hit = results
        .iter()
        .filter(|(x, e)| *e <= config.capture_tol && x[3] > 0.0)
        .min_by(|(x, _), (y, _)| {
            x[3].total_cmp(&y[3])
                .then(x[0].total_cmp(&y[0]))
                .then(x[1].total_cmp(&y[1]))
                .then(x[2].total_cmp(&y[2]))
        });
    let Some((x, e)) = hit else {
        return Err(Error::NoCapture {
            radius: config.capture_tol,
            best: best_err,
        });
    };
    Ok(ShootingReport {
        best_distance: x[3],
        best_params: params_of(x, metric, group),
        best_time: x[3],
        endpoint_error: *e,
        grid_spec,
        refinement_iterations: SWEEPS * 4 * config.refine_iters,
    })
}
