//! Asymmetric polyhedral norms `F = max_i alpha_i`, their unit balls, face
//! lattices and polar duals.
//!
//! A [`PolyNorm`] lives on a vector space `V` with elements typed [`Vector`]
//! and functionals typed [`Covector`]. For the dual norm on `V*` the roles are
//! swapped coordinate-wise: its "vectors" are covectors of `V`, and the
//! conversion is a plain coordinate transpose.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{affine_rank, for_each_combination, orthogonal_complement, Covector, Vector};

/// Absolute tolerance for hyperplane activity, feasibility and vertex deduplication.
pub const VERTEX_TOL: f64 = 1e-9;

/// Default relative tolerance when selecting the vertices that maximize a covector.
pub const FACE_TOL: f64 = 1e-9;

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Validity {
    Valid,
    /// Every functional is non-positive along `witness`, so the unit ball is
    /// unbounded in that direction.
    Invalid { witness: Vector },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Checks that `max_i alpha_i(y) > 0` for every `y != 0`.
///
/// Exact combinatorial test on the recession cone `{y : alpha_i(y) <= 0}`:
/// a non-trivial lineality space yields a null direction; otherwise the cone
/// is pointed and is non-trivial iff it has an extreme ray, and every extreme
/// ray is cut out by `n - 1` independent functionals. The witness is the sum
/// of all extreme rays found, scaled to unit max-norm.
pub fn validate(dim: usize, functionals: &[Covector]) -> Result<Validity> {
    if dim == 0 {
        return Err(Error::input("norm dimension must be positive"));
    }
    for f in functionals {
        check_dim(dim, f.dim())?;
        if !f.is_finite() {
            return Err(Error::input("functional coordinates must be finite"));
        }
    }
    let rows: Vec<DVector<f64>> = functionals.iter().map(Covector::to_dvector).collect();
    let null = orthogonal_complement(&rows, dim);
    if let Some(d) = null.first() {
        return Ok(Validity::Invalid {
            witness: unit_max(Vector::from_dvector(d)),
        });
    }

    let in_cone = |y: &DVector<f64>| {
        rows.iter()
            .all(|r| r.dot(y) <= 1e-12 * r.norm().max(1.0))
    };
    let mut rays: Vec<Vector> = Vec::new();
    for_each_combination(rows.len(), dim - 1, |subset| {
        let sub: Vec<DVector<f64>> = subset.iter().map(|&i| rows[i].clone()).collect();
        let comp = orthogonal_complement(&sub, dim);
        if comp.len() != 1 {
            return;
        }
        for sign in [1.0, -1.0] {
            let y = &comp[0] * sign;
            if in_cone(&y) {
                let ray = unit_max(Vector::from_dvector(&y));
                if !rays.iter().any(|r| r.dist(&ray) <= 1e-9) {
                    rays.push(ray);
                }
            }
        }
    });
    if rays.is_empty() {
        return Ok(Validity::Valid);
    }
    let sum = rays
        .iter()
        .skip(1)
        .fold(rays[0].clone(), |acc, r| &acc + r);
    Ok(Validity::Invalid {
        witness: unit_max(sum),
    })
}

fn unit_max(v: Vector) -> Vector {
    let m = v.max_abs();
    if m > 0.0 {
        v.scale(1.0 / m)
    } else {
        v
    }
}

/// A face of a [`Polytope`], identified by the set of facets active on all of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    active_facets: Vec<usize>,
    vertex_ids: Vec<usize>,
    vertices: Vec<Vector>,
    dim: usize,
}

impl Face {
    /// Sorted indices of the facets containing the face.
    pub fn active_facets(&self) -> &[usize] {
        &self.active_facets
    }

    /// Sorted indices of the polytope vertices lying on the face.
    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `self ⊆ other` as sets.
    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.vertex_ids.iter().all(|v| other.vertex_ids.binary_search(v).is_ok())
    }

    /// Compact textual id built from the active facet set, e.g. `"0.3"`.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self.active_facets.iter().map(|i| i.to_string()).collect();
        parts.join(".")
    }
}

/// Barycenter of the face vertices, a point of the relative interior.
pub fn relative_interior_point(face: &Face) -> Result<Vector> {
    let first = face
        .vertices
        .first()
        .ok_or_else(|| Error::input("empty face has no relative interior"))?;
    let sum = face.vertices[1..]
        .iter()
        .fold(first.clone(), |acc, v| &acc + v);
    Ok(sum.scale(1.0 / face.vertices.len() as f64))
}

/// Bounded polytope `{y : alpha_i(y) <= 1}` with the origin in its interior,
/// stored with both representations and the vertex-facet incidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Covector>,
    /// For each vertex, the sorted facet indices active at it.
    incidence: Vec<Vec<usize>>,
}

/// Plain JSON dump of a polytope: vertices, facet functionals, and for each
/// vertex the facets active at it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeDump {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Vec<f64>>,
    pub incidence: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Covector] {
        &self.facets
    }

    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Smallest face whose active set contains `facets`: all vertices active on
    /// every listed facet, with the active set closed up again.
    pub fn face_from_facets(&self, facets: &[usize]) -> Face {
        let vertex_ids: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| facets.iter().all(|f| self.incidence[v].binary_search(f).is_ok()))
            .collect();
        let active = self.common_facets(&vertex_ids);
        self.build_face(active, vertex_ids)
    }

    /// Smallest face containing the listed vertices.
    pub fn face_from_vertex_ids(&self, ids: &[usize]) -> Face {
        let active = self.common_facets(ids);
        self.face_from_facets(&active)
    }

    fn common_facets(&self, vertex_ids: &[usize]) -> Vec<usize> {
        match vertex_ids.split_first() {
            None => (0..self.facets.len()).collect(),
            Some((&first, rest)) => self.incidence[first]
                .iter()
                .copied()
                .filter(|f| rest.iter().all(|&v| self.incidence[v].binary_search(f).is_ok()))
                .collect(),
        }
    }

    fn build_face(&self, active_facets: Vec<usize>, vertex_ids: Vec<usize>) -> Face {
        let vertices: Vec<Vector> = vertex_ids.iter().map(|&i| self.vertices[i].clone()).collect();
        let dim = affine_rank(&vertices, VERTEX_TOL);
        Face {
            active_facets,
            vertex_ids,
            vertices,
            dim,
        }
    }

    /// Every non-empty proper face, obtained by closing the facet list under
    /// intersection. Sorted by dimension, then by vertex ids.
    pub fn faces(&self) -> Vec<Face> {
        let facet_sets: Vec<Vec<usize>> = (0..self.facets.len())
            .map(|f| self.face_from_facets(&[f]).vertex_ids)
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = facet_sets.iter().cloned().collect();
        let mut queue: Vec<Vec<usize>> = seen.iter().cloned().collect();
        while let Some(set) = queue.pop() {
            for fs in &facet_sets {
                let inter: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|v| fs.binary_search(v).is_ok())
                    .collect();
                if !inter.is_empty() && seen.insert(inter.clone()) {
                    queue.push(inter);
                }
            }
        }
        let mut faces: Vec<Face> = seen
            .into_iter()
            .map(|ids| self.face_from_vertex_ids(&ids))
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.vertex_ids.cmp(&b.vertex_ids)));
        faces.dedup_by(|a, b| a.vertex_ids == b.vertex_ids);
        faces
    }

    /// Errors unless `face` is exactly a face of this polytope.
    pub fn check_face(&self, face: &Face) -> Result<()> {
        let not_face = || Error::input("input is not a face of the stated polytope");
        if face.vertex_ids.is_empty()
            || face.vertex_ids.iter().any(|&v| v >= self.vertices.len())
            || face.active_facets.iter().any(|&f| f >= self.facets.len())
        {
            return Err(not_face());
        }
        let canonical = self.face_from_facets(&face.active_facets);
        if canonical.vertex_ids != face.vertex_ids || canonical.active_facets != face.active_facets {
            return Err(not_face());
        }
        if face.vertices.len() != canonical.vertices.len()
            || face
                .vertices
                .iter()
                .zip(&canonical.vertices)
                .any(|(a, b)| a.dim() != b.dim() || a.dist(b) > VERTEX_TOL)
        {
            return Err(not_face());
        }
        Ok(())
    }

    /// Whether `y` lies on `face`: inside the polytope and on each active facet,
    /// both within `tol`.
    pub fn face_contains(&self, face: &Face, y: &Vector, tol: f64) -> bool {
        if y.dim() != self.dim {
            return false;
        }
        let inside = self.facets.iter().all(|f| f.apply(y) <= 1.0 + tol);
        inside
            && face
                .active_facets
                .iter()
                .all(|&i| (self.facets[i].apply(y) - 1.0).abs() <= tol)
    }

    pub fn dump(&self) -> PolytopeDump {
        PolytopeDump {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.coords().to_vec()).collect(),
            facets: self.facets.iter().map(|f| f.coords().to_vec()).collect(),
            incidence: self.incidence.clone(),
        }
    }

    /// The polar polytope by incidence transposition: facets become vertices
    /// and vertices become facet functionals.
    fn polar(&self) -> Polytope {
        let mut incidence = vec![Vec::new(); self.facets.len()];
        for (v, active) in self.incidence.iter().enumerate() {
            for &f in active {
                incidence[f].push(v);
            }
        }
        Polytope {
            dim: self.dim,
            vertices: self.facets.iter().map(Covector::to_vector).collect(),
            facets: self.vertices.iter().map(Vector::to_covector).collect(),
            incidence,
        }
    }
}

/// Vertex enumeration by intersecting all `n`-subsets of facet hyperplanes.
/// Returns the polytope with redundant functionals dropped, plus the indices
/// (into `functionals`) of the dropped ones.
fn enumerate(dim: usize, functionals: &[Covector]) -> (Polytope, Vec<usize>) {
    let mut redundant = Vec::new();
    let mut candidates: Vec<(usize, Covector)> = Vec::new();
    for (i, f) in functionals.iter().enumerate() {
        if f.max_abs() <= VERTEX_TOL || candidates.iter().any(|(_, g)| g.dist(f) <= VERTEX_TOL) {
            redundant.push(i);
        } else {
            candidates.push((i, f.clone()));
        }
    }
    let m = candidates.len();
    let rows = DMatrix::from_fn(m, dim, |r, c| candidates[r].1[c]);

    let mut vertices: Vec<DVector<f64>> = Vec::new();
    for_each_combination(m, dim, |subset| {
        let a = DMatrix::from_fn(dim, dim, |r, c| rows[(subset[r], c)]);
        let ones = DVector::from_element(dim, 1.0);
        let Some(v) = a.clone().lu().solve(&ones) else {
            return;
        };
        if !v.iter().all(|x| x.is_finite()) || (&a * &v - &ones).amax() > VERTEX_TOL {
            return;
        }
        if (&rows * &v).iter().any(|x| *x > 1.0 + VERTEX_TOL) {
            return;
        }
        if !vertices.iter().any(|w| (w - &v).amax() <= VERTEX_TOL) {
            vertices.push(v);
        }
    });

    // Polish each vertex by least squares over all its active hyperplanes.
    let active_rows = |v: &DVector<f64>| -> Vec<usize> {
        let vals = &rows * v;
        (0..m).filter(|&i| (vals[i] - 1.0).abs() <= VERTEX_TOL).collect()
    };
    for v in vertices.iter_mut() {
        let act = active_rows(v);
        let a = DMatrix::from_fn(act.len(), dim, |r, c| rows[(act[r], c)]);
        let ones = DVector::from_element(act.len(), 1.0);
        let before = (&a * &*v - &ones).amax();
        if let Ok(p) = a.clone().svd(true, true).solve(&ones, 1e-14) {
            if (&p - &*v).amax() <= VERTEX_TOL && (&a * &p - &ones).amax() < before {
                *v = p;
            }
        }
    }

    let incidence_raw: Vec<Vec<usize>> = vertices.iter().map(active_rows).collect();
    // `+ 0.0` folds negative zeros.
    let vertex_vecs: Vec<Vector> = vertices.iter().map(|v| Vector::from_dvector(&v.map(|x| x + 0.0))).collect();

    // A functional supports a facet iff its active vertices span an (n-1)-dim affine hull.
    let mut keep = Vec::new();
    for (i, cand) in candidates.iter().enumerate().take(m) {
        let pts: Vec<Vector> = incidence_raw
            .iter()
            .enumerate()
            .filter(|(_, act)| act.contains(&i))
            .map(|(v, _)| vertex_vecs[v].clone())
            .collect();
        if !pts.is_empty() && affine_rank(&pts, VERTEX_TOL) == dim - 1 {
            keep.push(i);
        } else {
            redundant.push(cand.0);
        }
    }
    redundant.sort_unstable();
    let remap: Vec<Option<usize>> = (0..m).map(|i| keep.iter().position(|&k| k == i)).collect();
    let incidence = incidence_raw
        .into_iter()
        .map(|act| act.into_iter().filter_map(|i| remap[i]).collect())
        .collect();
    let facets = keep.iter().map(|&i| candidates[i].1.clone()).collect();
    (
        Polytope {
            dim,
            vertices: vertex_vecs,
            facets,
            incidence,
        },
        redundant,
    )
}

/// An asymmetric polyhedral norm. The unit ball and its polar are computed
/// eagerly at construction; all queries are read-only afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyNorm {
    dim: usize,
    ball: Polytope,
    dual_ball: Polytope,
    redundant: Vec<usize>,
}

/// JSON norm descriptor `{"dim": n, "functionals": [[c1..cn], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormDescriptor {
    pub dim: usize,
    pub functionals: Vec<Vec<f64>>,
}

impl NormDescriptor {
    pub fn build(&self) -> Result<PolyNorm> {
        PolyNorm::new(
            self.dim,
            self.functionals.iter().cloned().map(Covector::new).collect(),
        )
    }
}

impl PolyNorm {
    /// `F = max_i functionals[i]`. Fails with [`Error::InvalidNorm`] when the
    /// unit ball is unbounded. Redundant and duplicate functionals are dropped
    /// (see [`PolyNorm::redundant`]).
    pub fn new(dim: usize, functionals: Vec<Covector>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::input("a norm needs at least one functional"));
        }
        if let Validity::Invalid { witness } = validate(dim, &functionals)? {
            return Err(Error::InvalidNorm {
                witness: witness.into_coords(),
            });
        }
        let (ball, redundant) = enumerate(dim, &functionals);
        let dual_ball = ball.polar();
        Ok(Self {
            dim,
            ball,
            dual_ball,
            redundant,
        })
    }

    /// The norm whose unit ball is the convex hull of `vertices` (the origin
    /// must be interior to it).
    pub fn from_vertices(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        Ok(PolyNorm::new(dim, vertices.into_iter().map(|v| v.to_covector()).collect())?.dual())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Canonical functionals, one per facet of the unit ball.
    pub fn functionals(&self) -> &[Covector] {
        &self.ball.facets
    }

    /// Indices of input functionals that support no facet (or duplicate another).
    pub fn redundant(&self) -> &[usize] {
        &self.redundant
    }

    pub fn unit_ball(&self) -> &Polytope {
        &self.ball
    }

    /// Unit ball of the dual norm, with vertex `i` equal to facet functional `i`
    /// and facet `j` equal to vertex `j` of the unit ball.
    pub fn dual_polytope(&self) -> &Polytope {
        &self.dual_ball
    }

    pub fn eval(&self, y: &Vector) -> Result<f64> {
        check_dim(self.dim, y.dim())?;
        Ok(self
            .ball
            .facets
            .iter()
            .map(|f| f.apply(y))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Dual norm `F*(a) = max_{v in B} a(v)`, attained at a vertex.
    pub fn dual_eval(&self, a: &Covector) -> Result<f64> {
        check_dim(self.dim, a.dim())?;
        Ok(self
            .ball
            .vertices
            .iter()
            .map(|v| a.apply(v))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// The dual norm as a norm on `V*`: the two polytopes swap roles.
    pub fn dual(&self) -> PolyNorm {
        PolyNorm {
            dim: self.dim,
            ball: self.dual_ball.clone(),
            dual_ball: self.ball.clone(),
            redundant: Vec::new(),
        }
    }

    /// The face of the unit sphere on which `a` attains its maximum: all
    /// vertices within `tol * |max|` of the maximum, closed to a face.
    pub fn maximizing_face(&self, a: &Covector, tol: f64) -> Result<Face> {
        check_dim(self.dim, a.dim())?;
        if a.is_zero() || !a.is_finite() {
            return Err(Error::input("maximizing face of the zero covector is undefined"));
        }
        let vals: Vec<f64> = self.ball.vertices.iter().map(|v| a.apply(v)).collect();
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cut = max - tol * max.abs();
        let ids: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] >= cut).collect();
        Ok(self.ball.face_from_vertex_ids(&ids))
    }

    /// Duality correspondence: the face of the dual sphere spanned by the
    /// facet functionals active on all of `face`.
    pub fn psi(&self, face: &Face) -> Result<Face> {
        self.ball.check_face(face)?;
        Ok(self.dual_ball.face_from_vertex_ids(&face.active_facets))
    }

    /// Inverse correspondence from faces of the dual sphere.
    pub fn psi_inverse(&self, dual_face: &Face) -> Result<Face> {
        self.dual_ball.check_face(dual_face)?;
        Ok(self.ball.face_from_vertex_ids(&dual_face.active_facets))
    }
}

/// `a1 * F1 + a2 * F2` as the max over pairwise sums of scaled functionals.
pub fn combine(n1: &PolyNorm, n2: &PolyNorm, a1: f64, a2: f64) -> Result<PolyNorm> {
    check_dim(n1.dim, n2.dim)?;
    if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(Error::input("combination weights must be positive and finite"));
    }
    let mut fs = Vec::with_capacity(n1.functionals().len() * n2.functionals().len());
    for f in n1.functionals() {
        for g in n2.functionals() {
            fs.push(&f.scale(a1) + &g.scale(a2));
        }
    }
    PolyNorm::new(n1.dim, fs)
}
