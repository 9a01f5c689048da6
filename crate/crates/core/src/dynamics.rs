//! Integration of the coadjoint control system `a' = -ad*(u) a` with the
//! control `u(t)` confined to the maximizing face `C(a(t))`, plus extremal
//! verification and reconstruction of group curves in matrix groups.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::lie_algebra::LieAlgebra;
use crate::linalg::{Covector, Vector};
use crate::polynorm::{relative_interior_point, Face, PolyNorm, FACE_TOL};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const REP_TOL: f64 = 1e-10;

/// Sampled control `(t, a(t), C(a(t))) -> u`.
pub type ControlFn = Arc<dyn Fn(f64, &Covector, &Face) -> Vector + Send + Sync>;

/// How the control is picked inside the maximizing face.
#[derive(Clone)]
pub enum ControlPolicy {
    /// Barycenter of the maximizing face.
    Barycenter,
    /// A fixed vertex of the unit ball, by index into its vertex list.
    FixedVertex(usize),
    /// Piecewise constant: entry `(t_i, u_i)` is used on `[t_i, t_{i+1})`.
    /// Times before the first entry use the first control.
    Schedule(Vec<(f64, Vector)>),
    Custom(ControlFn),
}

impl fmt::Debug for ControlPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlPolicy::Barycenter => write!(f, "Barycenter"),
            ControlPolicy::FixedVertex(i) => write!(f, "FixedVertex({i})"),
            ControlPolicy::Schedule(s) => f.debug_tuple("Schedule").field(s).finish(),
            ControlPolicy::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ControlPolicy {
    /// First schedule breakpoint strictly after `t`.
    fn next_breakpoint(&self, t: f64) -> Option<f64> {
        match self {
            ControlPolicy::Schedule(s) => s.iter().map(|(ts, _)| *ts).find(|ts| *ts > t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Relative tolerance for the maximizing face and for control membership.
    pub face_tol: f64,
    /// Rescale `a` after each step so `F*(a)` keeps its initial value.
    pub project: bool,
    /// Bound on face switches resolved inside one step.
    pub max_events_per_step: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            face_tol: FACE_TOL,
            project: false,
            max_events_per_step: 16,
        }
    }
}

/// Whether `u` lies in `C(a)`: `F(u) <= 1` and `a(u) = F*(a)`, both up to a
/// relative `tol`.
pub fn in_maximizing_set(norm: &PolyNorm, a: &Covector, u: &Vector, tol: f64) -> Result<bool> {
    let fu = norm.eval(u)?;
    let fs = norm.dual_eval(a)?;
    Ok(fu <= 1.0 + tol && a.apply(u) >= fs - tol * fs.abs().max(f64::MIN_POSITIVE))
}

/// A point of `C(a)` chosen according to `policy`.
pub fn select_control(norm: &PolyNorm, a: &Covector, policy: &ControlPolicy, t: f64) -> Result<Vector> {
    select_control_with(norm, a, policy, t, FACE_TOL)
}

pub fn select_control_with(
    norm: &PolyNorm,
    a: &Covector,
    policy: &ControlPolicy,
    t: f64,
    face_tol: f64,
) -> Result<Vector> {
    check_dim(norm.dim(), a.dim())?;
    if a.is_zero() {
        return Err(Error::input("covector a = 0 has no maximizing face"));
    }
    let face = norm.maximizing_face(a, face_tol)?;
    let u = match policy {
        ControlPolicy::Barycenter => return relative_interior_point(&face),
        ControlPolicy::FixedVertex(i) => {
            return match face.vertex_ids().binary_search(i) {
                Ok(_) => Ok(norm.unit_ball().vertices()[*i].clone()),
                Err(_) => Err(Error::PolicyViolation {
                    time: t,
                    reason: format!("vertex {i} is not on the maximizing face {}", face.id()),
                }),
            };
        }
        ControlPolicy::Schedule(s) => {
            let (_, u) = s
                .iter()
                .rev()
                .find(|(ts, _)| *ts <= t)
                .or_else(|| s.first())
                .ok_or_else(|| Error::input("empty control schedule"))?;
            u.clone()
        }
        ControlPolicy::Custom(f) => f(t, a, &face),
    };
    check_dim(norm.dim(), u.dim())?;
    if !in_maximizing_set(norm, a, &u, face_tol)? {
        return Err(Error::PolicyViolation {
            time: t,
            reason: format!("control {:?} is outside the maximizing face {}", u.coords(), face.id()),
        });
    }
    Ok(u)
}

/// Sampled extremal candidate. Control `u_samples[j]` acts on
/// `[times[j], times[j + 1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    times: Vec<f64>,
    a_samples: Vec<Covector>,
    u_samples: Vec<Vector>,
    face_ids: Vec<String>,
    switch_times: Vec<f64>,
    dual_values: Vec<f64>,
}

impl Trajectory {
    /// Assembles a trajectory from samples, computing face ids and dual values.
    pub fn new(
        norm: &PolyNorm,
        times: Vec<f64>,
        a_samples: Vec<Covector>,
        u_samples: Vec<Vector>,
        switch_times: Vec<f64>,
    ) -> Result<Self> {
        let len = times.len();
        if len == 0 || a_samples.len() != len || u_samples.len() != len {
            return Err(Error::input("trajectory arrays must be non-empty and of equal length"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::input("trajectory times must be finite and strictly increasing"));
        }
        let mut face_ids = Vec::with_capacity(len);
        let mut dual_values = Vec::with_capacity(len);
        for (a, u) in a_samples.iter().zip(&u_samples) {
            check_dim(norm.dim(), a.dim())?;
            check_dim(norm.dim(), u.dim())?;
            face_ids.push(if a.is_zero() {
                String::new()
            } else {
                norm.maximizing_face(a, FACE_TOL)?.id()
            });
            dual_values.push(norm.dual_eval(a)?);
        }
        Ok(Self {
            times,
            a_samples,
            u_samples,
            face_ids,
            switch_times,
            dual_values,
        })
    }

    /// Same vertical part with a different control at each sample.
    pub fn with_controls(&self, u_samples: Vec<Vector>) -> Result<Self> {
        if u_samples.len() != self.len() {
            return Err(Error::input("control count does not match trajectory length"));
        }
        let mut t = self.clone();
        t.u_samples = u_samples;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.a_samples[0].dim()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn a_samples(&self) -> &[Covector] {
        &self.a_samples
    }

    pub fn u_samples(&self) -> &[Vector] {
        &self.u_samples
    }

    pub fn face_ids(&self) -> &[String] {
        &self.face_ids
    }

    pub fn switch_times(&self) -> &[f64] {
        &self.switch_times
    }

    pub fn dual_values(&self) -> &[f64] {
        &self.dual_values
    }
}

fn rk4(m: &DMatrix<f64>, a: &DVector<f64>, dt: f64) -> DVector<f64> {
    let k1 = m * a;
    let k2 = m * (a + &k1 * (dt / 2.0));
    let k3 = m * (a + &k2 * (dt / 2.0));
    let k4 = m * (a + &k3 * dt);
    a + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// Fixed-step RK4 with the default [`IntegratorConfig`].
pub fn integrate(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    a0: &Covector,
    policy: &ControlPolicy,
    t_final: f64,
    h: f64,
) -> Result<Trajectory> {
    integrate_with(alg, norm, a0, policy, t_final, h, &IntegratorConfig::default())
}

/// Fixed-step RK4 over `[0, t_final]`, control frozen on each step. A change of
/// maximizing-face signature inside a step is located by bisection to
/// `h * 1e-6`; the step is split there, a sample is inserted, and the rest of
/// the step uses the control chosen on the new face. Schedule breakpoints also
/// split steps.
pub fn integrate_with(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    a0: &Covector,
    policy: &ControlPolicy,
    t_final: f64,
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    check_dim(alg.dim(), norm.dim())?;
    check_dim(alg.dim(), a0.dim())?;
    if a0.is_zero() || !a0.is_finite() {
        return Err(Error::input("initial covector must be non-zero and finite"));
    }
    if !(t_final > 0.0 && t_final.is_finite()) || !(h > 0.0 && h.is_finite()) {
        return Err(Error::input("final time and step must be positive and finite"));
    }
    let signature = |a: &DVector<f64>| -> Result<Vec<usize>> {
        Ok(norm
            .maximizing_face(&Covector::from_dvector(a), cfg.face_tol)?
            .active_facets()
            .to_vec())
    };
    let r0 = norm.dual_eval(a0)?;
    let eps = h * 1e-9;
    let bisect_width = h * 1e-6;

    let mut times = vec![0.0];
    let mut a_samples = vec![a0.clone()];
    let u0 = select_control_with(norm, a0, policy, 0.0, cfg.face_tol)?;
    let mut u_samples = vec![u0];
    let mut switch_times = Vec::new();

    let mut t = 0.0;
    let mut a = a0.to_dvector();
    let mut step = 0usize;
    while t < t_final - eps {
        step += 1;
        let mut t_end = (step as f64 * h).min(t_final);
        if t_final - t_end < eps {
            t_end = t_final;
        }
        let mut events = 0;
        while t < t_end - eps {
            let target = match policy.next_breakpoint(t + eps) {
                Some(b) if b < t_end - eps => b,
                _ => t_end,
            };
            let m = alg.coadjoint_matrix(u_samples.last().expect("non-empty"));
            let sig0 = signature(&a)?;
            let a_new = rk4(&m, &a, target - t);
            let (t_next, a_next) = if events < cfg.max_events_per_step && signature(&a_new)? != sig0 {
                let (mut lo, mut hi) = (t, target);
                while hi - lo > bisect_width {
                    let mid = 0.5 * (lo + hi);
                    if signature(&rk4(&m, &a, mid - t))? == sig0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                events += 1;
                if target - hi > eps {
                    switch_times.push(hi);
                    (hi, rk4(&m, &a, hi - t))
                } else {
                    switch_times.push(target);
                    (target, a_new)
                }
            } else {
                (target, a_new)
            };
            t = t_next;
            a = a_next;
            if cfg.project {
                let r = norm.dual_eval(&Covector::from_dvector(&a))?;
                if r > 0.0 {
                    a *= r0 / r;
                }
            }
            let a_cov = Covector::from_dvector(&a);
            if a_cov.is_zero() || !a_cov.is_finite() {
                return Err(Error::Degenerate(t));
            }
            let u = select_control_with(norm, &a_cov, policy, t, cfg.face_tol)?;
            times.push(t);
            a_samples.push(a_cov);
            u_samples.push(u);
        }
    }
    Trajectory::new(norm, times, a_samples, u_samples, switch_times)
}

/// Diagnostics from [`verify_extremal`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalCheck {
    /// Max-abs mismatch between the finite-difference derivative of `a` and
    /// the coadjoint right-hand side.
    pub residual: f64,
    /// Sample indices whose control is outside the maximizing face.
    pub face_violations: Vec<usize>,
    pub accepted: bool,
}

/// Checks the sampled pair `(u, a)` against `a' = -ad*(u) a` and `u in C(a)`.
///
/// Each interval `[t_j, t_{j+1}]` carries the constant control `u_j`; there the
/// difference quotient of `a` is compared with the end-corrected trapezoid
/// average of the right-hand side, `M (a_j + a_{j+1}) / 2 - dt M^2 (a_{j+1} - a_j) / 12`
/// with `M` the coadjoint matrix of `u_j`. This is fourth-order consistent for
/// any sample spacing, so inserted switch samples do not degrade it.
pub fn verify_extremal(alg: &LieAlgebra, norm: &PolyNorm, traj: &Trajectory, tol: f64) -> Result<ExtremalCheck> {
    verify_extremal_with(alg, norm, traj, tol, FACE_TOL)
}

pub fn verify_extremal_with(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    traj: &Trajectory,
    tol: f64,
    face_tol: f64,
) -> Result<ExtremalCheck> {
    check_dim(alg.dim(), norm.dim())?;
    check_dim(alg.dim(), traj.dim())?;
    let t = &traj.times;
    let a: Vec<DVector<f64>> = traj.a_samples.iter().map(Covector::to_dvector).collect();
    let u = &traj.u_samples;
    let interval = |j: usize| -> f64 {
        let dt = t[j + 1] - t[j];
        let m = alg.coadjoint_matrix(&u[j]);
        let diff = &a[j + 1] - &a[j];
        let fd = &diff / dt;
        let avg = &m * (&a[j] + &a[j + 1]) * 0.5 - &m * (&m * &diff) * (dt / 12.0);
        (fd - avg).amax()
    };
    let residual = (0..t.len().saturating_sub(1)).map(interval).fold(0.0, f64::max);
    let mut face_violations = Vec::new();
    for (j, (aj, uj)) in traj.a_samples.iter().zip(u).enumerate() {
        if aj.is_zero() || !in_maximizing_set(norm, aj, uj, face_tol)? {
            face_violations.push(j);
        }
    }
    Ok(ExtremalCheck {
        residual,
        accepted: residual <= tol && face_violations.is_empty(),
        face_violations,
    })
}

/// `max_j |F*(a_j) - F*(a_0)|`.
pub fn dual_value_drift(traj: &Trajectory) -> f64 {
    let d0 = traj.dual_values[0];
    traj.dual_values
        .iter()
        .map(|d| (d - d0).abs())
        .fold(0.0, f64::max)
}

/// Linear representation of a Lie algebra by matrices, `e_i -> X_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRep {
    generators: Vec<DMatrix<f64>>,
}

impl MatrixRep {
    /// Fails unless `[X_i, X_j] = sum_k c_ijk X_k` to [`REP_TOL`].
    pub fn new(alg: &LieAlgebra, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        check_dim(alg.dim(), generators.len())?;
        let size = generators[0].nrows();
        if generators.iter().any(|g| g.nrows() != size || g.ncols() != size) {
            return Err(Error::input("representation matrices must be square of one size"));
        }
        let rep = Self { generators };
        let r = rep.bracket_residual(alg);
        if r > REP_TOL {
            return Err(Error::input(format!(
                "representation does not respect brackets (residual {r:e})"
            )));
        }
        Ok(rep)
    }

    pub fn bracket_residual(&self, alg: &LieAlgebra) -> f64 {
        let n = alg.dim();
        let c = alg.constants();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (&self.generators[i], &self.generators[j]);
                let mut d = x * y - y * x;
                for k in 0..n {
                    d -= &self.generators[k] * c.get(i, j, k);
                }
                worst = worst.max(d.amax());
            }
        }
        worst
    }

    /// Faithful representations for the matrix-group catalog entries.
    pub fn catalog(name: &str, alg: &LieAlgebra) -> Result<Self> {
        let e = |size: usize, entries: &[(usize, usize, f64)]| {
            let mut m = DMatrix::zeros(size, size);
            for &(r, c, v) in entries {
                m[(r, c)] = v;
            }
            m
        };
        let gens = if let Some(rest) = name.strip_prefix("abelian") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::UnknownAlgebra(name.to_string()))?;
            (0..n).map(|i| e(n + 1, &[(i, n, 1.0)])).collect()
        } else if let Some(rest) = name.strip_prefix("solvable3") {
            let lambda = rest.strip_prefix(':').map_or(Ok(-1.0), |l| {
                l.parse::<f64>()
                    .map_err(|_| Error::UnknownAlgebra(name.to_string()))
            })?;
            vec![
                e(3, &[(0, 2, 1.0)]),
                e(3, &[(1, 2, 1.0)]),
                e(3, &[(0, 0, 1.0), (1, 1, lambda)]),
            ]
        } else {
            match name {
                "nonabelian2d" => vec![e(2, &[(0, 1, 1.0)]), e(2, &[(0, 0, 1.0)])],
                "heisenberg3" => vec![e(3, &[(0, 1, 1.0)]), e(3, &[(1, 2, 1.0)]), e(3, &[(0, 2, 1.0)])],
                "so3" => vec![
                    e(3, &[(1, 2, -1.0), (2, 1, 1.0)]),
                    e(3, &[(0, 2, 1.0), (2, 0, -1.0)]),
                    e(3, &[(0, 1, -1.0), (1, 0, 1.0)]),
                ],
                "sl2" => vec![e(2, &[(0, 0, 1.0), (1, 1, -1.0)]), e(2, &[(0, 1, 1.0)]), e(2, &[(1, 0, 1.0)])],
                "e2" => vec![e(3, &[(1, 0, 1.0), (0, 1, -1.0)]), e(3, &[(0, 2, 1.0)]), e(3, &[(1, 2, 1.0)])],
                _ => {
                    return Err(Error::input(format!(
                        "no built-in matrix representation for `{name}`"
                    )))
                }
            }
        };
        Self::new(alg, gens)
    }

    pub fn size(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    /// `sum_i u^i X_i`.
    pub fn matrix(&self, u: &Vector) -> Result<DMatrix<f64>> {
        check_dim(self.generators.len(), u.dim())?;
        let mut m = DMatrix::zeros(self.size(), self.size());
        for (g, ui) in self.generators.iter().zip(u.coords()) {
            m += g * *ui;
        }
        Ok(m)
    }
}

/// Group curve `x(t)` sampled at `times`, as matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupTrajectory {
    pub times: Vec<f64>,
    pub matrices: Vec<DMatrix<f64>>,
}

impl GroupTrajectory {
    /// Matrices as row-major nested lists.
    pub fn rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.matrices
            .iter()
            .map(|m| (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect())
            .collect()
    }
}

/// Solves `x' = x rep(u(t))` for the piecewise-constant control
/// `u = controls[j]` on `[times[j], times[j + 1])`, via
/// `x <- x exp(dt rep(u))` with substeps no longer than `h`.
pub fn reconstruct_group(
    rep: &MatrixRep,
    times: &[f64],
    controls: &[Vector],
    x0: &DMatrix<f64>,
    h: f64,
) -> Result<GroupTrajectory> {
    if times.len() != controls.len() || times.is_empty() {
        return Err(Error::input("control schedule needs one control per time"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::input("control times must be strictly increasing"));
    }
    if !(h > 0.0) {
        return Err(Error::input("step must be positive"));
    }
    if x0.nrows() != rep.size() || x0.ncols() != rep.size() {
        return Err(Error::input("initial matrix has the wrong size"));
    }
    let mut out_t = vec![times[0]];
    let mut out_x = vec![x0.clone()];
    let mut x = x0.clone();
    for j in 0..times.len() - 1 {
        let m = rep.matrix(&controls[j])?;
        let span = times[j + 1] - times[j];
        let sub = (span / h - 1e-9).ceil().max(1.0) as usize;
        let dt = span / sub as f64;
        let step = (&m * dt).exp();
        for s in 1..=sub {
            x = &x * &step;
            out_t.push(if s == sub { times[j + 1] } else { times[j] + s as f64 * dt });
            out_x.push(x.clone());
        }
    }
    Ok(GroupTrajectory {
        times: out_t,
        matrices: out_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::catalog;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    fn cv(c: &[f64]) -> Covector {
        Covector::new(c.to_vec())
    }

    fn square() -> PolyNorm {
        PolyNorm::new(2, vec![cv(&[1.0, 0.0]), cv(&[-1.0, 0.0]), cv(&[0.0, 1.0]), cv(&[0.0, -1.0])]).unwrap()
    }

    fn cube(n: usize) -> PolyNorm {
        let mut fs = Vec::new();
        for i in 0..n {
            for s in [1.0, -1.0] {
                let mut c = vec![0.0; n];
                c[i] = s;
                fs.push(cv(&c));
            }
        }
        PolyNorm::new(n, fs).unwrap()
    }

    fn heisenberg_norm() -> PolyNorm {
        // ball conv{±e1, ±0.05 e2, ±e3}
        let mut fs = Vec::new();
        for s1 in [1.0, -1.0] {
            for s2 in [20.0, -20.0] {
                for s3 in [1.0, -1.0] {
                    fs.push(cv(&[s1, s2, s3]));
                }
            }
        }
        PolyNorm::new(3, fs).unwrap()
    }

    fn vertex_index(norm: &PolyNorm, x: &Vector) -> usize {
        norm.unit_ball().vertices().iter().position(|w| w.dist(x) < 1e-12).unwrap()
    }

    #[test]
    fn select_control_examples() {
        let sq = square();
        assert_eq!(select_control(&sq, &cv(&[1.0, 0.0]), &ControlPolicy::Barycenter, 0.0).unwrap(), v(&[1.0, 0.0]));
        let corner = v(&[1.0, 1.0]);
        let i = vertex_index(&sq, &corner);
        for p in [ControlPolicy::Barycenter, ControlPolicy::FixedVertex(i)] {
            assert_eq!(select_control(&sq, &cv(&[1.0, 1.0]), &p, 0.0).unwrap(), corner);
        }
        assert!(matches!(
            select_control(&sq, &cv(&[0.0, 0.0]), &ControlPolicy::Barycenter, 0.0),
            Err(Error::Input(_))
        ));
        let j = vertex_index(&sq, &v(&[-1.0, -1.0]));
        assert!(matches!(
            select_control(&sq, &cv(&[1.0, 0.0]), &ControlPolicy::FixedVertex(j), 2.5),
            Err(Error::PolicyViolation { time, .. }) if time == 2.5
        ));
        let sched = ControlPolicy::Schedule(vec![(0.0, v(&[1.0, 0.5])), (1.0, v(&[0.0, 0.0]))]);
        assert_eq!(select_control(&sq, &cv(&[1.0, 0.0]), &sched, 0.5).unwrap(), v(&[1.0, 0.5]));
        assert!(matches!(
            select_control(&sq, &cv(&[1.0, 0.0]), &sched, 1.5),
            Err(Error::PolicyViolation { .. })
        ));
    }

    #[test]
    fn abelian_trajectory_is_constant() {
        let alg = catalog("abelian3").unwrap();
        let n = cube(3);
        let a0 = cv(&[0.4, -1.0, 0.2]);
        let tr = integrate(&alg, &n, &a0, &ControlPolicy::Barycenter, 1.0, 0.01).unwrap();
        assert!(tr.a_samples().iter().all(|a| *a == a0));
        assert_eq!(dual_value_drift(&tr), 0.0);
        let chk = verify_extremal(&alg, &n, &tr, RESIDUAL_TOL).unwrap();
        assert_eq!(chk.residual, 0.0);
        assert!(chk.accepted);
    }

    #[test]
    fn heisenberg_closed_form() {
        let alg = catalog("heisenberg3").unwrap();
        let n = heisenberg_norm();
        let e1 = vertex_index(&n, &v(&[1.0, 0.0, 0.0]));
        let a0 = cv(&[1.0, -5.0, 1.0]);
        let tr = integrate(&alg, &n, &a0, &ControlPolicy::FixedVertex(e1), 10.0, 1e-3).unwrap();
        assert_eq!(tr.len(), 10_001);
        assert!(tr.switch_times().is_empty());
        for (t, a) in tr.times().iter().zip(tr.a_samples()) {
            assert!(a.dist(&cv(&[1.0, -5.0 + t, 1.0])) <= 1e-9);
        }
        assert!(dual_value_drift(&tr) <= 1e-12);
        assert!(verify_extremal(&alg, &n, &tr, RESIDUAL_TOL).unwrap().accepted);
    }

    #[test]
    fn control_outside_face_is_reported() {
        let alg = catalog("heisenberg3").unwrap();
        let n = heisenberg_norm();
        let e1 = vertex_index(&n, &v(&[1.0, 0.0, 0.0]));
        let tr = integrate(&alg, &n, &cv(&[1.0, -5.0, 1.0]), &ControlPolicy::FixedVertex(e1), 1.0, 1e-2).unwrap();
        let bad = tr.with_controls(vec![v(&[-1.0, 0.0, 0.0]); tr.len()]).unwrap();
        let chk = verify_extremal(&alg, &n, &bad, RESIDUAL_TOL).unwrap();
        assert_eq!(chk.face_violations.len(), tr.len());
        assert!(!chk.accepted);
    }

    #[test]
    fn so3_rotation_preserves_length() {
        let alg = catalog("so3").unwrap();
        let n = cube(3);
        let tr = integrate(&alg, &n, &cv(&[1.0, 0.0, 0.0]), &ControlPolicy::Barycenter, 10.0, 1e-3).unwrap();
        for a in tr.a_samples() {
            assert!((a.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn so3_switch_is_located() {
        // a0 = (1, 0.5, 0) maximizes on the cube edge {x = y = 1}; rotation about the
        // barycenter (1, 1, 0) lifts the third coordinate at once, shrinking the face to a vertex.
        let alg = catalog("so3").unwrap();
        let n = cube(3);
        let tr = integrate(&alg, &n, &cv(&[1.0, 0.5, 0.0]), &ControlPolicy::Barycenter, 0.5, 1e-3).unwrap();
        assert_eq!(tr.u_samples()[0], v(&[1.0, 1.0, 0.0]));
        assert!(!tr.switch_times().is_empty());
        assert!(tr.switch_times()[0] < 1e-7);
        assert_eq!(tr.u_samples()[1].coords()[..2], [1.0, 1.0]);
        assert_eq!(tr.u_samples()[1].coords()[2].abs(), 1.0);
        let chk = verify_extremal(&alg, &n, &tr, RESIDUAL_TOL).unwrap();
        assert!(chk.accepted, "{chk:?}");
    }

    #[test]
    fn schedule_breakpoints_split_steps() {
        let alg = catalog("abelian2").unwrap();
        let sq = square();
        let sched = ControlPolicy::Schedule(vec![(0.0, v(&[1.0, -0.5])), (0.255, v(&[1.0, 0.5]))]);
        let tr = integrate(&alg, &sq, &cv(&[1.0, 0.0]), &sched, 0.5, 0.01).unwrap();
        assert!(tr.times().iter().any(|t| (t - 0.255).abs() < 1e-15));
        let k = tr.times().iter().position(|t| (t - 0.255).abs() < 1e-15).unwrap();
        assert_eq!(tr.u_samples()[k - 1], v(&[1.0, -0.5]));
        assert_eq!(tr.u_samples()[k], v(&[1.0, 0.5]));
    }

    #[test]
    fn zero_initial_covector_rejected() {
        let alg = catalog("heisenberg3").unwrap();
        let r = integrate(&alg, &cube(3), &cv(&[0.0; 3]), &ControlPolicy::Barycenter, 1.0, 1e-3);
        assert!(matches!(r, Err(Error::Input(_))));
    }

    #[test]
    fn corrupted_sample_shows_drift() {
        let alg = catalog("heisenberg3").unwrap();
        let n = heisenberg_norm();
        let e1 = vertex_index(&n, &v(&[1.0, 0.0, 0.0]));
        let tr = integrate(&alg, &n, &cv(&[1.0, -5.0, 1.0]), &ControlPolicy::FixedVertex(e1), 1.0, 1e-2).unwrap();
        let mut a = tr.a_samples().to_vec();
        a[40] = a[40].scale(1.1);
        let bad = Trajectory::new(&n, tr.times().to_vec(), a, tr.u_samples().to_vec(), vec![]).unwrap();
        assert!((dual_value_drift(&bad) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn representations_respect_brackets() {
        for name in ["abelian3", "nonabelian2d", "heisenberg3", "so3", "sl2", "e2", "solvable3", "solvable3:0.5"] {
            let alg = catalog(name).unwrap();
            let rep = MatrixRep::catalog(name, &alg).unwrap();
            assert!(rep.bracket_residual(&alg) <= 1e-15, "{name}");
        }
        let h = catalog("heisenberg3").unwrap();
        let so3 = MatrixRep::catalog("so3", &catalog("so3").unwrap()).unwrap();
        assert!(MatrixRep::new(&h, so3.generators().to_vec()).is_err());
    }

    #[test]
    fn heisenberg_one_parameter_subgroup() {
        let alg = catalog("heisenberg3").unwrap();
        let rep = MatrixRep::catalog("heisenberg3", &alg).unwrap();
        let u = v(&[1.0, 0.0, 0.0]);
        let x0 = DMatrix::identity(3, 3);
        let g = reconstruct_group(&rep, &[0.0, 2.0], &[u.clone(), u], &x0, 0.1).unwrap();
        assert_eq!(g.times.len(), 21);
        let last = g.matrices.last().unwrap();
        let mut expect = DMatrix::identity(3, 3);
        expect[(0, 1)] = 2.0;
        assert!((last - expect).amax() < 1e-14);
    }

    #[test]
    fn abelian_translation_is_straight_line() {
        let alg = catalog("abelian2").unwrap();
        let rep = MatrixRep::catalog("abelian2", &alg).unwrap();
        let u = v(&[0.6, -0.8]);
        let g = reconstruct_group(&rep, &[0.0, 1.0], &[u.clone(), u], &DMatrix::identity(3, 3), 0.25).unwrap();
        for (t, x) in g.times.iter().zip(&g.matrices) {
            assert!((x[(0, 2)] - 0.6 * t).abs() < 1e-14);
            assert!((x[(1, 2)] + 0.8 * t).abs() < 1e-14);
        }
    }
}
