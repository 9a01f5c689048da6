//! Uniqueness of the control behind a given vertical part `a(t)`.
//!
//! Two controls can share the vertical part `a(t)` exactly when their
//! difference `w` satisfies `a([w, .]) = 0`, which ties non-uniqueness to the
//! vanishing of the asymptotic flag curvature. In dimension 3 this is decided
//! by whether `ker a(t)` is a subalgebra.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::curvature::k_vanishes_3d;
use crate::dynamics::{verify_extremal_with, Trajectory};
use crate::error::{Error, Result};
use crate::lie_algebra::LieAlgebra;
use crate::linalg::{for_each_combination, kernel_basis, Covector, Vector};
use crate::polynorm::{relative_interior_point, Face, PolyNorm, FACE_TOL};

pub const MEASURE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Unique,
    InfinitelyMany,
    Inconclusive,
}

/// Ids of a face of the unit sphere and its dual face.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacePair {
    pub face_id: String,
    pub dual_face_id: String,
    pub face_vertices: Vec<Vector>,
    pub dual_face_vertices: Vec<Vector>,
}

impl FacePair {
    fn new(face: &Face, dual: &Face) -> Self {
        Self {
            face_id: face.id(),
            dual_face_id: dual.id(),
            face_vertices: face.vertices().to_vec(),
            dual_face_vertices: dual.vertices().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub vanishing_fraction: f64,
    pub classification: Classification,
    /// Alternative control on the same vertical part, when one was built.
    #[serde(skip)]
    pub witness: Option<Trajectory>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_csv_path: Option<String>,
    pub residual_of_witness: Option<f64>,
    pub residual_of_trajectory: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<FacePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<FacePair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stationary_control: Option<Vector>,
}

/// Whether some non-zero `v2 in ker a` has vanishing asymptotic flag curvature.
///
/// For `n = 2` this is `a([e1, e2]) = 0`. For `n >= 3` it is the existence of
/// `v2 in ker a` with `a([v2, ker a]) = 0`, i.e. singularity of the
/// antisymmetric form `a([z_i, z_j])` on an orthonormal basis of `ker a`.
pub fn vanishes_at(alg: &LieAlgebra, a: &Covector, tol: f64) -> Result<bool> {
    let n = alg.dim();
    if a.is_zero() {
        return Err(Error::input("covector must be non-zero"));
    }
    let a = a.scale(1.0 / a.norm());
    if n == 1 {
        return Ok(true);
    }
    if n == 2 {
        let br = alg.bracket(&Vector::basis(2, 0), &Vector::basis(2, 1))?;
        return Ok(a.apply(&br).abs() <= tol);
    }
    if n == 3 {
        return k_vanishes_3d(alg, &a, tol);
    }
    let z = kernel_basis(&a)?;
    let m = n - 1;
    let mut form = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            let v = a.apply(&alg.bracket(&z[i], &z[j])?);
            form[(i, j)] = v;
            form[(j, i)] = -v;
        }
    }
    let sv = form.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(smin <= tol)
}

/// Fraction of samples at which the flag curvature vanishes for some `v2`.
pub fn vanishing_measure(alg: &LieAlgebra, traj: &Trajectory, tol: f64) -> Result<f64> {
    let mut count = 0usize;
    for a in traj.a_samples() {
        if vanishes_at(alg, a, tol)? {
            count += 1;
        }
    }
    Ok(count as f64 / traj.len() as f64)
}

fn edge_geometry(edge: &Face) -> (Vector, Vector, f64) {
    let p = &edge.vertices()[0];
    let q = &edge.vertices()[1];
    let mid = (p + q).scale(0.5);
    let d = q - p;
    let len = d.norm();
    (mid, d.scale(1.0 / len), 0.5 * len)
}

fn check_edge_confinement(norm: &PolyNorm, traj: &Trajectory, edge: &Face, tol: f64) -> Result<()> {
    let ball = norm.unit_ball();
    for (j, (a, u)) in traj.a_samples().iter().zip(traj.u_samples()).enumerate() {
        let time = traj.times()[j];
        let fail = |reason: String| Error::SamplePrecondition { index: j, time, reason };
        if !ball.face_contains(edge, u, tol) {
            return Err(fail(format!("control {:?} is not on the edge {}", u.coords(), edge.id())));
        }
        if a.is_zero() {
            return Err(fail("covector is zero".into()));
        }
        let c = norm.maximizing_face(a, tol)?;
        if !edge.is_subface_of(&c) {
            return Err(fail(format!(
                "covector is not on the dual face of edge {} (maximizing face {})",
                edge.id(),
                c.id()
            )));
        }
    }
    Ok(())
}

/// Alternative controls `u + lambda w` on the edge `L`: `w` is the unit edge
/// direction, `lambda = 0` where the curvature does not vanish, and
/// `lambda = +r_L` (control in the half towards the first endpoint, midpoint
/// included) or `-r_L` (other half) where it does.
pub fn construct_alternative(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    traj: &Trajectory,
    edge: &Face,
    tol: f64,
) -> Result<Vec<Vector>> {
    if alg.dim() != 3 || norm.dim() != 3 {
        return Err(Error::input("the edge construction is defined for dimension 3"));
    }
    norm.unit_ball().check_face(edge)?;
    if edge.dim() != 1 || edge.vertices().len() != 2 {
        return Err(Error::input("face is not an edge"));
    }
    check_edge_confinement(norm, traj, edge, FACE_TOL).map_err(|e| Error::input(e.to_string()))?;
    let (mid, w, r) = edge_geometry(edge);
    traj.a_samples()
        .iter()
        .zip(traj.u_samples())
        .map(|(a, u)| {
            if !vanishes_at(alg, a, tol)? {
                return Ok(u.clone());
            }
            let s = (u - &mid).dot(&w);
            let lambda = if s <= 0.0 { r } else { -r };
            Ok(u.axpy(lambda, &w))
        })
        .collect()
}

/// Edge case: decides whether `a(t)` admits infinitely many controls on the
/// edge `L = C(a)` carrying the trajectory.
pub fn classify_edge(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    traj: &Trajectory,
    measure_threshold: f64,
    tol: f64,
) -> Result<UniquenessReport> {
    classify_edge_with(alg, norm, traj, measure_threshold, tol, tol)
}

/// As [`classify_edge`], with separate tolerances for curvature vanishing and
/// for accepting the witness residual.
pub fn classify_edge_with(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    traj: &Trajectory,
    measure_threshold: f64,
    vanishing_tol: f64,
    residual_tol: f64,
) -> Result<UniquenessReport> {
    if alg.dim() != 3 || norm.dim() != 3 || traj.dim() != 3 {
        return Err(Error::input("edge classification is defined for dimension 3"));
    }
    let mut edge = None;
    for (j, a) in traj.a_samples().iter().enumerate() {
        if a.is_zero() {
            return Err(Error::SamplePrecondition {
                index: j,
                time: traj.times()[j],
                reason: "covector is zero".into(),
            });
        }
        let c = norm.maximizing_face(a, FACE_TOL)?;
        if c.dim() == 1 {
            edge = Some(c);
            break;
        }
    }
    let edge = edge.ok_or_else(|| Error::SamplePrecondition {
        index: 0,
        time: traj.times()[0],
        reason: "no sample has an edge as maximizing face".into(),
    })?;
    check_edge_confinement(norm, traj, &edge, FACE_TOL)?;
    let dual = norm.psi(&edge)?;

    let base = verify_extremal_with(alg, norm, traj, residual_tol, FACE_TOL)?;
    let fraction = vanishing_measure(alg, traj, vanishing_tol)?;
    let mut report = UniquenessReport {
        vanishing_fraction: fraction,
        classification: Classification::Inconclusive,
        witness: None,
        witness_csv_path: None,
        residual_of_witness: None,
        residual_of_trajectory: Some(base.residual),
        edge: Some(FacePair::new(&edge, &dual)),
        vertex: None,
        stationary_control: None,
    };
    if fraction == 0.0 {
        report.classification = Classification::Unique;
    } else if fraction > measure_threshold {
        let controls = construct_alternative(alg, norm, traj, &edge, vanishing_tol)?;
        let witness = traj.with_controls(controls)?;
        let check = verify_extremal_with(alg, norm, &witness, residual_tol, FACE_TOL)?;
        report.residual_of_witness = Some(check.residual);
        if check.accepted && witness.u_samples() != traj.u_samples() {
            report.classification = Classification::InfinitelyMany;
        }
        report.witness = Some(witness);
    }
    Ok(report)
}

/// One piece of a trajectory split at maximizing-face changes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentReport {
    pub start_index: usize,
    pub end_index: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub report: Option<UniquenessReport>,
    pub skipped: Option<String>,
}

/// Splits the trajectory wherever the maximizing face changes and runs
/// [`classify_edge`] on each piece with at least three samples. Pieces that
/// fail the edge preconditions are reported as skipped.
pub fn classify_segments(
    alg: &LieAlgebra,
    norm: &PolyNorm,
    traj: &Trajectory,
    measure_threshold: f64,
    tol: f64,
) -> Result<Vec<SegmentReport>> {
    let ids = traj.face_ids();
    let mut bounds = vec![0];
    for j in 1..ids.len() {
        if ids[j] != ids[j - 1] {
            bounds.push(j);
        }
    }
    bounds.push(ids.len());
    let mut out = Vec::new();
    for w in bounds.windows(2) {
        let (s, e) = (w[0], w[1]);
        let mut seg = SegmentReport {
            start_index: s,
            end_index: e - 1,
            t_start: traj.times()[s],
            t_end: traj.times()[e - 1],
            report: None,
            skipped: None,
        };
        if e - s < 3 {
            seg.skipped = Some("fewer than three samples".into());
        } else {
            let piece = Trajectory::new(
                norm,
                traj.times()[s..e].to_vec(),
                traj.a_samples()[s..e].to_vec(),
                traj.u_samples()[s..e].to_vec(),
                vec![],
            )?;
            match classify_edge(alg, norm, &piece, measure_threshold, tol) {
                Ok(r) => seg.report = Some(r),
                Err(e @ (Error::SamplePrecondition { .. } | Error::Input(_))) => seg.skipped = Some(e.to_string()),
                Err(e) => return Err(e),
            }
        }
        out.push(seg);
    }
    Ok(out)
}

/// A point `u` of `face` with `a([u, .]) = 0`, if any. Tries the vertices and
/// the barycenter, then solves `sum lambda_k rhs(v_k) = 0` with
/// `lambda >= 0, sum lambda = 1` over subsets of at most `n + 1` vertices,
/// which by Caratheodory is exhaustive.
pub fn find_stationary_control(alg: &LieAlgebra, a: &Covector, face: &Face, tol: f64) -> Result<Option<Vector>> {
    let n = alg.dim();
    let rhs_norm = |u: &Vector| -> Result<f64> { Ok(alg.coadjoint_rhs(u, a)?.max_abs()) };
    for v in face.vertices() {
        if rhs_norm(v)? <= tol {
            return Ok(Some(v.clone()));
        }
    }
    let bary = relative_interior_point(face)?;
    if rhs_norm(&bary)? <= tol {
        return Ok(Some(bary));
    }
    let images: Vec<DVector<f64>> = face
        .vertices()
        .iter()
        .map(|v| alg.coadjoint_rhs(v, a).map(|c| c.to_dvector()))
        .collect::<Result<_>>()?;
    let mut found = None;
    for k in 2..=(n + 1).min(face.vertices().len()) {
        for_each_combination(face.vertices().len(), k, |subset| {
            if found.is_some() {
                return;
            }
            let sys = DMatrix::from_fn(n + 1, k, |r, c| if r < n { images[subset[c]][r] } else { 1.0 });
            let mut b = DVector::zeros(n + 1);
            b[n] = 1.0;
            let Ok(lambda) = sys.clone().svd(true, true).solve(&b, 1e-14) else {
                return;
            };
            if lambda.iter().any(|l| *l < -1e-12) || (&sys * &lambda - &b).amax() > tol {
                return;
            }
            let mut u = Vector::zeros(n);
            for (c, &i) in subset.iter().enumerate() {
                u = u.axpy(lambda[c].max(0.0), &face.vertices()[i]);
            }
            if rhs_norm(&u).is_ok_and(|r| r <= tol) {
                found = Some(u);
            }
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// Vertex case: `a0` a vertex of the dual sphere with `a(t) = a0` a vertical
/// part. Infinitely many controls iff `ker a0` is a subalgebra.
pub fn classify_vertex(alg: &LieAlgebra, norm: &PolyNorm, a0: &Covector, tol: f64) -> Result<UniquenessReport> {
    if alg.dim() != 3 || norm.dim() != 3 || a0.dim() != 3 {
        return Err(Error::input("vertex classification is defined for dimension 3"));
    }
    let fs = norm.dual_eval(a0)?;
    if a0.is_zero() || !(fs > 0.0) {
        return Err(Error::input("covector must be non-zero"));
    }
    let an = a0.scale(1.0 / fs);
    let dual = norm.dual_polytope();
    let idx = dual
        .vertices()
        .iter()
        .position(|v| v.dist(&an.to_vector()) <= 1e-9 * an.max_abs().max(1.0))
        .ok_or_else(|| Error::Precondition("a0 is not a vertex of the dual unit sphere".into()))?;
    let dual_vertex = dual.face_from_vertex_ids(&[idx]);
    let face = norm.psi_inverse(&dual_vertex)?;
    let u = find_stationary_control(alg, &an, &face, tol)?
        .ok_or_else(|| Error::Precondition("no control on the maximizing face keeps a0 stationary".into()))?;

    let vanishes = k_vanishes_3d(alg, &an, tol)?;
    let mut report = UniquenessReport {
        vanishing_fraction: if vanishes { 1.0 } else { 0.0 },
        classification: Classification::Unique,
        witness: None,
        witness_csv_path: None,
        residual_of_witness: None,
        residual_of_trajectory: Some(alg.coadjoint_rhs(&u, &an)?.max_abs()),
        edge: None,
        vertex: Some(FacePair::new(&face, &dual_vertex)),
        stationary_control: Some(u.clone()),
    };
    if vanishes {
        let alt = face
            .vertices()
            .iter()
            .find(|v| v.dist(&u) > 1e-9)
            .cloned()
            .unwrap_or_else(|| relative_interior_point(&face).expect("non-empty face"));
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let witness = Trajectory::new(norm, times, vec![an.clone(); 11], vec![alt; 11], vec![])?;
        let check = verify_extremal_with(alg, norm, &witness, tol, FACE_TOL)?;
        let residual = check
            .residual
            .max(alg.coadjoint_rhs(&witness.u_samples()[0], &an)?.max_abs());
        report.residual_of_witness = Some(residual);
        report.classification = if check.accepted && residual <= tol {
            Classification::InfinitelyMany
        } else {
            Classification::Inconclusive
        };
        report.witness = Some(witness);
    }
    Ok(report)
}
