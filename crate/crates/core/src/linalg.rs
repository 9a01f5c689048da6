//! Coordinate vectors, covectors and the small dense linear algebra the rest
//! of the crate needs.
//!
//! Everything lives in a fixed basis `{e_1..e_n}` of the Lie algebra and the
//! dual basis `{e^1..e^n}` of its dual. The Euclidean inner product of the
//! coordinate basis is used only as a numerical device (projections, Gram-Schmidt),
//! never as geometric data.

use std::ops::{Add, Index, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

macro_rules! coord_type {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(coords: Vec<f64>) -> Self {
                Self(coords)
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![0.0; n])
            }

            /// The `i`-th (0-based) basis element.
            pub fn basis(n: usize, i: usize) -> Self {
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                Self(c)
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[f64] {
                &self.0
            }

            pub fn into_coords(self) -> Vec<f64> {
                self.0
            }

            pub fn scale(&self, s: f64) -> Self {
                Self(self.0.iter().map(|x| x * s).collect())
            }

            /// Euclidean coordinate norm.
            pub fn norm(&self) -> f64 {
                self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
            }

            pub fn max_abs(&self) -> f64 {
                self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|x| *x == 0.0)
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|x| x.is_finite())
            }

            pub fn dot(&self, other: &Self) -> f64 {
                self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
            }

            /// Max-abs coordinate distance.
            pub fn dist(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(&other.0)
                    .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
            }

            pub fn to_dvector(&self) -> DVector<f64> {
                DVector::from_column_slice(&self.0)
            }

            pub fn from_dvector(v: &DVector<f64>) -> Self {
                Self(v.iter().copied().collect())
            }

            pub fn axpy(&self, s: f64, other: &Self) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|a| -a).collect())
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

coord_type!(Vector);
coord_type!(Covector);

impl Covector {
    /// Pairing `a(v)`.
    pub fn apply(&self, v: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), v.dim());
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// Reinterprets the coordinates as a vector (coordinate transpose).
    pub fn to_vector(&self) -> Vector {
        Vector(self.0.clone())
    }
}

impl Vector {
    pub fn to_covector(&self) -> Covector {
        Covector(self.0.clone())
    }
}

/// Linear span of a list of linearly independent vectors.
#[derive(Debug, Clone)]
pub struct Subspace {
    dim: usize,
    basis: Vec<Vector>,
    orthonormal: Vec<DVector<f64>>,
}

/// Default tolerance for rank and membership decisions.
pub const SUBSPACE_TOL: f64 = 1e-10;

impl Subspace {
    /// Builds the span of `basis` inside an `n`-dimensional space. Fails if the
    /// vectors are dependent at relative tolerance `SUBSPACE_TOL`.
    pub fn new(n: usize, basis: Vec<Vector>) -> Result<Self> {
        for b in &basis {
            check_dim(n, b.dim())?;
            if !b.is_finite() {
                return Err(Error::input("subspace basis has non-finite coordinates"));
            }
        }
        let orthonormal = gram_schmidt(basis.iter().map(Vector::to_dvector), SUBSPACE_TOL)
            .ok_or_else(|| Error::input("subspace basis vectors are linearly dependent"))?;
        Ok(Self {
            dim: n,
            basis,
            orthonormal,
        })
    }

    /// The hyperplane `ker a`, spanned by an orthonormal (coordinate) basis.
    pub fn kernel_of(a: &Covector) -> Result<Self> {
        let basis = kernel_basis(a)?;
        Self::new(a.dim(), basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Distance from `v` to the span, measured as the norm of the residual of
    /// the orthogonal projection.
    pub fn residual(&self, v: &Vector) -> f64 {
        let mut r = v.to_dvector();
        for q in &self.orthonormal {
            let c = q.dot(&r);
            r.axpy(-c, q, 1.0);
        }
        r.norm()
    }

    /// Membership test: residual at most `tol * max(1, |v|)`.
    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        self.residual(v) <= tol * v.norm().max(1.0)
    }
}

/// Modified Gram-Schmidt. Returns `None` if some input is (relatively) dependent
/// on the previous ones.
pub(crate) fn gram_schmidt<I>(vectors: I, tol: f64) -> Option<Vec<DVector<f64>>>
where
    I: IntoIterator<Item = DVector<f64>>,
{
    let mut out: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let scale = v.norm();
        let mut r = v;
        for q in &out {
            let c = q.dot(&r);
            r.axpy(-c, q, 1.0);
        }
        let nr = r.norm();
        if scale == 0.0 || nr <= tol * scale {
            return None;
        }
        out.push(r / nr);
    }
    Some(out)
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in `R^n`.
pub(crate) fn orthogonal_complement(vectors: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    // Orthonormalize the spanning set, skipping dependent members.
    let mut q: Vec<DVector<f64>> = Vec::new();
    for v in vectors {
        let scale = v.norm();
        let mut r = v.clone();
        for e in &q {
            let c = e.dot(&r);
            r.axpy(-c, e, 1.0);
        }
        let nr = r.norm();
        if scale > 0.0 && nr > 1e-10 * scale {
            q.push(r / nr);
        }
    }
    let row_rank = q.len();
    // Complete with the standard basis vectors that have the largest residual.
    let mut complement = Vec::new();
    while q.len() < n {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for i in 0..n {
            let mut r = DVector::<f64>::zeros(n);
            r[i] = 1.0;
            for e in &q {
                let c = e.dot(&r);
                r.axpy(-c, e, 1.0);
            }
            let nr = r.norm();
            if best.as_ref().is_none_or(|(b, _)| nr > *b) {
                best = Some((nr, r));
            }
        }
        let (nr, r) = best.expect("n > 0");
        let e = r / nr;
        q.push(e.clone());
        complement.push(e);
    }
    debug_assert_eq!(complement.len(), n - row_rank);
    complement
}

/// Orthonormal basis of `ker a` built from the Householder reflection that
/// maps the dominant coordinate axis onto the normal direction of `a`.
pub fn kernel_basis(a: &Covector) -> Result<Vec<Vector>> {
    let n = a.dim();
    if n == 0 || a.is_zero() || !a.is_finite() {
        return Err(Error::input("kernel of a zero or non-finite covector"));
    }
    let normal = a.to_dvector() / a.norm();
    let p = normal.iamax();
    let mut w = normal.clone();
    w[p] -= normal[p].signum();
    let wn2 = w.norm_squared();
    let mut out = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != p) {
        // Column i of H = I - 2 w w^T / |w|^2.
        let mut col = DVector::<f64>::zeros(n);
        col[i] = 1.0;
        if wn2 > 0.0 {
            let c = 2.0 * w[i] / wn2;
            col.axpy(-c, &w, 1.0);
        }
        out.push(Vector::from_dvector(&col));
    }
    Ok(out)
}

/// Rank of a set of points' differences (the dimension of their affine hull).
pub fn affine_rank(points: &[Vector], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<DVector<f64>> = points[1..].iter().map(|p| (p - base).to_dvector()).collect();
    matrix_rank(&diffs, tol)
}

/// Numerical rank of the matrix whose columns are `cols`.
pub fn matrix_rank(cols: &[DVector<f64>], tol: f64) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(cols);
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0f64, |a, b| a.max(*b));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * smax.max(1.0)).count()
}

/// Matrix whose columns are the given vectors.
pub fn columns_matrix(vs: &[Vector]) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = vs.iter().map(Vector::to_dvector).collect();
    DMatrix::from_columns(&cols)
}

/// Calls `f` with every `k`-subset of `0..m` in lexicographic order.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(m: usize, k: usize, mut f: F) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + m - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
