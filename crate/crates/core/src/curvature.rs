//! Sectional curvature of left-invariant metrics and the asymptotic flag
//! curvature `K_B(a)` of a covector.
//!
//! Given `a != 0`, a flagpole `v1` with `a(v1) = 1` and a basis `v2, .., vn` of
//! `ker a`, the basis `B^k = {v1, k v2, .., k vn}` defines a left-invariant
//! metric `g_k`. The sectional curvature `kappa_{g_k}(v1, v2)` is a polynomial
//! in `k`; its top coefficient (slot `k^2` for `n = 2`, `k^4` otherwise) is
//! `K_B(a)`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::lie_algebra::{LieAlgebra, StructureConstants};
use crate::linalg::{kernel_basis, matrix_rank, Covector, Subspace, Vector};
use crate::polynorm::{relative_interior_point, PolyNorm, FACE_TOL};

/// Default absolute tolerance on `|K_B|` (with `a` normalized to dual norm 1).
pub const VANISHING_TOL: f64 = 1e-10;

const ADAPTED_TOL: f64 = 1e-10;

/// Sectional curvature of the plane `span{v_i, v_j}` for the left-invariant
/// metric making the basis orthonormal (Milnor's formula).
pub fn milnor_sectional(c: &StructureConstants, i: usize, j: usize) -> Result<f64> {
    let n = c.dim();
    if i == j {
        return Err(Error::input("sectional curvature needs two distinct indices"));
    }
    if i >= n || j >= n {
        return Err(Error::input(format!("index out of range for dimension {n}")));
    }
    let a = |p: usize, q: usize, r: usize| c.get(p, q, r);
    let mut kappa = 0.0;
    for l in 0..n {
        let (aijl, ajli, alij) = (a(i, j, l), a(j, l, i), a(l, i, j));
        kappa += 0.5 * aijl * (-aijl + ajli + alij)
            - 0.25 * (aijl - ajli + alij) * (aijl + ajli - alij)
            - a(l, i, i) * a(l, j, j);
    }
    Ok(kappa)
}

/// Basis `{v1, v2, .., vn}` with `a(v1) = 1` and `v2, .., vn` spanning `ker a`,
/// together with the structure constants of the algebra in that basis.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    a: Covector,
    v1: Vector,
    kernel_basis: Vec<Vector>,
    constants: StructureConstants,
}

impl AdaptedBasis {
    pub fn new(alg: &LieAlgebra, a: Covector, v1: Vector, kernel: Vec<Vector>) -> Result<Self> {
        let n = alg.dim();
        check_dim(n, a.dim())?;
        check_dim(n, v1.dim())?;
        if a.is_zero() || !a.is_finite() {
            return Err(Error::input("covector must be non-zero and finite"));
        }
        if (a.apply(&v1) - 1.0).abs() > ADAPTED_TOL {
            return Err(Error::input(format!(
                "flagpole must satisfy a(v1) = 1, got {}",
                a.apply(&v1)
            )));
        }
        if kernel.len() != n - 1 {
            return Err(Error::input(format!(
                "kernel basis needs {} vectors, got {}",
                n - 1,
                kernel.len()
            )));
        }
        for v in &kernel {
            check_dim(n, v.dim())?;
            if a.apply(v).abs() > ADAPTED_TOL * v.norm().max(1.0) {
                return Err(Error::input("kernel basis vector is not in ker a"));
            }
        }
        let mut basis = vec![v1.clone()];
        basis.extend(kernel.iter().cloned());
        let cols: Vec<DVector<f64>> = basis.iter().map(Vector::to_dvector).collect();
        if matrix_rank(&cols, ADAPTED_TOL) != n {
            return Err(Error::input("adapted basis is not of full rank"));
        }
        let constants = alg.constants().in_basis(&basis)?;
        Ok(Self {
            a,
            v1,
            kernel_basis: kernel,
            constants,
        })
    }

    /// Completes `v2` (or, if absent, nothing) to a basis of `ker a` with
    /// orthonormalized coordinate-kernel vectors.
    pub fn complete(alg: &LieAlgebra, a: &Covector, v1: &Vector, v2: Option<&Vector>) -> Result<Self> {
        let n = alg.dim();
        check_dim(n, a.dim())?;
        let kb = kernel_basis(a)?;
        let kernel = match v2 {
            None => kb,
            Some(v2) => {
                check_dim(n, v2.dim())?;
                if v2.is_zero() {
                    return Err(Error::input("v2 must be non-zero"));
                }
                if a.apply(v2).abs() > ADAPTED_TOL * (a.norm() * v2.norm()).max(1.0) {
                    return Err(Error::input("v2 is not in ker a"));
                }
                let mut q = vec![v2.to_dvector() / v2.norm()];
                let mut out = vec![v2.clone()];
                for k in &kb {
                    if out.len() == n - 1 {
                        break;
                    }
                    let mut r = k.to_dvector();
                    for e in &q {
                        let c = e.dot(&r);
                        r.axpy(-c, e, 1.0);
                    }
                    let nr = r.norm();
                    if nr > 1e-8 {
                        let e = r / nr;
                        out.push(Vector::from_dvector(&e));
                        q.push(e);
                    }
                }
                out
            }
        };
        Self::new(alg, a.clone(), v1.clone(), kernel)
    }

    /// Adapted basis for a norm: `a` rescaled to `F*(a) = 1` and `v1` the
    /// barycenter of the maximizing face, so `a(v1) = 1`.
    pub fn from_norm(alg: &LieAlgebra, norm: &PolyNorm, a: &Covector, v2: Option<&Vector>) -> Result<Self> {
        check_dim(norm.dim(), alg.dim())?;
        let fstar = norm.dual_eval(a)?;
        if !(fstar > 0.0) {
            return Err(Error::input("covector must be non-zero"));
        }
        let a = a.scale(1.0 / fstar);
        let face = norm.maximizing_face(&a, FACE_TOL)?;
        let bary = relative_interior_point(&face)?;
        let v1 = bary.scale(1.0 / a.apply(&bary));
        Self::complete(alg, &a, &v1, v2)
    }

    pub fn a(&self) -> &Covector {
        &self.a
    }

    pub fn v1(&self) -> &Vector {
        &self.v1
    }

    pub fn v2(&self) -> Option<&Vector> {
        self.kernel_basis.first()
    }

    pub fn kernel_basis(&self) -> &[Vector] {
        &self.kernel_basis
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    /// Structure constants of `B^k = {v1, k v2, .., k vn}`.
    pub fn scaled_constants(&self, k: f64) -> Result<StructureConstants> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::input("scale factor k must be positive and finite"));
        }
        let c = &self.constants;
        let w = |i: usize| i32::from(i >= 1);
        Ok(StructureConstants::from_fn(c.dim(), |i, j, l| {
            c.get(i, j, l) * k.powi(w(i) + w(j) - w(l))
        }))
    }
}

/// `kappa_{g_k}(v1, v2) = sum_d coeffs[d] k^d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvaturePolynomial {
    pub coeffs: [f64; 5],
    pub dim: usize,
    pub v1: Vector,
    pub v2: Vector,
}

impl CurvaturePolynomial {
    pub fn eval(&self, k: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * k + c)
    }

    /// `K_B`: the `k^2` coefficient for `n = 2`, the `k^4` coefficient otherwise,
    /// reported even when it is zero.
    pub fn leading_coefficient(&self) -> f64 {
        if self.dim == 2 {
            self.coeffs[2]
        } else {
            self.coeffs[4]
        }
    }
}

/// Closed-form coefficients of `kappa_{g_k}(v1, v2)` from the constants of `B`.
pub fn curvature_polynomial(b: &AdaptedBasis) -> CurvaturePolynomial {
    let c = &b.constants;
    let n = c.dim();
    let a = |i: usize, j: usize, l: usize| c.get(i, j, l);
    let mut coeffs = [0.0; 5];
    if n == 2 {
        coeffs[2] = -a(0, 1, 0).powi(2);
        coeffs[0] = -a(0, 1, 1).powi(2);
    } else {
        coeffs[4] = 0.25 * (2..n).map(|j| a(1, j, 0).powi(2)).sum::<f64>();
        coeffs[2] = -a(0, 1, 0).powi(2)
            + (1..n)
                .map(|j| {
                    a(1, j, 0) * (0.5 * a(0, 1, j) - 0.5 * a(j, 0, 1)) - a(j, 0, 0) * a(j, 1, 1)
                })
                .sum::<f64>();
        coeffs[0] = (1..n)
            .map(|j| a(0, 1, j) * (-0.75 * a(0, 1, j) + 0.5 * a(j, 0, 1)) + 0.25 * a(j, 0, 1).powi(2))
            .sum::<f64>();
    }
    CurvaturePolynomial {
        coeffs,
        dim: n,
        v1: b.v1.clone(),
        v2: b.kernel_basis[0].clone(),
    }
}

pub fn leading_coefficient(p: &CurvaturePolynomial) -> f64 {
    p.leading_coefficient()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagCurvatureReport {
    #[serde(rename = "K_B")]
    pub k_b: f64,
    pub vanishes: bool,
    pub polynomial: CurvaturePolynomial,
}

pub fn flag_curvature(b: &AdaptedBasis, tol: f64) -> FlagCurvatureReport {
    let polynomial = curvature_polynomial(b);
    let k_b = polynomial.leading_coefficient();
    FlagCurvatureReport {
        k_b,
        vanishes: k_b.abs() < tol,
        polynomial,
    }
}

/// `K_B(a) = 0` iff `v2` normalizes `ker a` (for `n >= 3`).
pub fn k_vanishes(alg: &LieAlgebra, a: &Covector, v2: &Vector, tol: f64) -> Result<bool> {
    let n = alg.dim();
    if n < 3 {
        return Err(Error::input("the normalizer criterion needs dimension at least 3"));
    }
    check_dim(n, a.dim())?;
    check_dim(n, v2.dim())?;
    if v2.is_zero() {
        return Err(Error::input("v2 must be non-zero"));
    }
    let ker = Subspace::kernel_of(a)?;
    if !ker.contains(v2, tol) {
        return Err(Error::input("v2 is not in ker a"));
    }
    alg.in_normalizer(v2, &ker, tol)
}

/// In dimension 3, `K(a) = 0` iff `ker a` is a subalgebra.
pub fn k_vanishes_3d(alg: &LieAlgebra, a: &Covector, tol: f64) -> Result<bool> {
    if alg.dim() != 3 {
        return Err(Error::input("k_vanishes_3d requires a 3-dimensional algebra"));
    }
    check_dim(3, a.dim())?;
    let ker = Subspace::kernel_of(a)?;
    alg.is_subalgebra(&ker, tol)
}
