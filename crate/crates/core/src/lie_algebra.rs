//! Finite-dimensional real Lie algebras given by structure constants.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{columns_matrix, Covector, Subspace, Vector};

/// Entrywise bound on the Jacobi residual accepted by [`LieAlgebra::new`].
pub const JACOBI_TOL: f64 = 1e-12;

/// Dense array `c[i][j][k]` with `[v_i, v_j] = sum_k c[i][j][k] v_k`.
///
/// No invariant is enforced here: rescaled or re-expressed constants are
/// plain data. [`LieAlgebra`] is the validated wrapper.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    fn slot(&mut self, i: usize, j: usize, k: usize) -> &mut f64 {
        &mut self.data[(i * self.dim + j) * self.dim + k]
    }

    /// Sets `[e_i, e_j] = sum_k coeffs[k] e_k` and the antisymmetric partner.
    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: &[f64]) {
        assert!(i != j, "[e_i, e_i] is always zero");
        for (k, &c) in coeffs.iter().enumerate() {
            *self.slot(i, j, k) = c;
            *self.slot(j, i, k) = -c;
        }
    }

    pub fn bracket_coords(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for (i, &xi) in x.iter().enumerate().take(n) {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate().take(n) {
                let xy = xi * yj;
                if xy == 0.0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += xy * self.get(i, j, k);
                }
            }
        }
        out
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut r = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r = r.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        r
    }

    /// Largest entry of the cyclic Jacobi sum over all index quadruples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.get(i, j, m) * self.get(m, l, k)
                                + self.get(j, l, m) * self.get(m, i, k)
                                + self.get(l, i, m) * self.get(m, j, k);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Constants of the same bracket expressed in a new basis `basis`
    /// (coordinates of each new basis vector in the current basis).
    pub fn in_basis(&self, basis: &[Vector]) -> Result<StructureConstants> {
        let n = self.dim;
        check_dim(n, basis.len())?;
        for b in basis {
            check_dim(n, b.dim())?;
        }
        let lu = columns_matrix(basis).lu();
        let mut out = StructureConstants::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let br = DVector::from_vec(self.bracket_coords(basis[i].coords(), basis[j].coords()));
                let c = lu
                    .solve(&br)
                    .ok_or_else(|| Error::input("basis is singular"))?;
                for k in 0..n {
                    *out.slot(i, j, k) = c[k];
                }
            }
        }
        Ok(out)
    }
}

/// A validated Lie algebra: antisymmetric constants satisfying Jacobi.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    constants: StructureConstants,
}

impl LieAlgebra {
    /// Validates `constants`. Only the entries with `i < j` are read; the rest
    /// is filled in by antisymmetry.
    pub fn new(constants: StructureConstants) -> Result<Self> {
        let n = constants.dim();
        if n == 0 {
            return Err(Error::input("Lie algebra dimension must be positive"));
        }
        if constants.data.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("structure constants must be finite"));
        }
        let constants = StructureConstants::from_fn(n, |i, j, k| match i.cmp(&j) {
            std::cmp::Ordering::Less => constants.get(i, j, k),
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => -constants.get(j, i, k),
        });
        let jac = constants.jacobi_residual();
        if jac > JACOBI_TOL {
            return Err(Error::Jacobi(jac));
        }
        Ok(Self { constants })
    }

    /// Builds an algebra from a list of `(i, j, [e_i, e_j])` brackets with 0-based
    /// indices. Unlisted pairs bracket to zero.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<f64>)]) -> Result<Self> {
        let mut c = StructureConstants::zeros(dim);
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(Error::input(format!("bracket index ({i}, {j}) out of range for dim {dim}")));
            }
            if i == j {
                return Err(Error::input(format!("bracket of e_{} with itself must be omitted", i + 1)));
            }
            check_dim(dim, coeffs.len())?;
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::input(format!("bracket ({}, {}) given twice", i + 1, j + 1)));
            }
            c.set_bracket(i, j, coeffs);
        }
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.constants.dim()
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn jacobi_residual(&self) -> f64 {
        self.constants.jacobi_residual()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        check_dim(self.dim(), x.dim())?;
        check_dim(self.dim(), y.dim())?;
        Ok(Vector::new(self.constants.bracket_coords(x.coords(), y.coords())))
    }

    /// Right-hand side of the coadjoint system: the covector `v -> a([u, v])`,
    /// i.e. `-ad*(u)(a)`.
    pub fn coadjoint_rhs(&self, u: &Vector, a: &Covector) -> Result<Covector> {
        check_dim(self.dim(), u.dim())?;
        check_dim(self.dim(), a.dim())?;
        let m = self.coadjoint_matrix(u);
        Ok(Covector::from_dvector(&(m * a.to_dvector())))
    }

    /// Matrix `M(u)` with `coadjoint_rhs(u, a) = M(u) a`, so
    /// `M[i][k] = sum_p u^p c[p][i][k]`.
    pub fn coadjoint_matrix(&self, u: &Vector) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, k| {
            (0..n).map(|p| u[p] * self.constants.get(p, i, k)).sum()
        })
    }

    /// Whether `[b_i, b_j]` lies in `span(S)` for every pair of basis vectors.
    pub fn is_subalgebra(&self, s: &Subspace, tol: f64) -> Result<bool> {
        check_dim(self.dim(), s.ambient_dim())?;
        let b = s.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let br = self.bracket(&b[i], &b[j])?;
                if !s.contains(&br, tol) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `v` normalizes `S`: `[v, b]` lies in `span(S)` for each basis vector `b`.
    pub fn in_normalizer(&self, v: &Vector, s: &Subspace, tol: f64) -> Result<bool> {
        check_dim(self.dim(), v.dim())?;
        check_dim(self.dim(), s.ambient_dim())?;
        for b in s.basis() {
            let br = self.bracket(v, b)?;
            if !s.contains(&br, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Names accepted by [`catalog`]. `abelian<n>` accepts any positive `n` and
/// `solvable3:<lambda>` any finite `lambda`.
pub const CATALOG_NAMES: &[&str] = &[
    "abelian<n>",
    "nonabelian2d",
    "heisenberg3",
    "so3",
    "sl2",
    "e2",
    "solvable3",
    "solvable3:<lambda>",
    "oscillator4",
    "filiform4",
];

/// Standard low-dimensional algebras in textbook bases (0-based `e_i` below
/// written 1-based):
///
/// * `abelian<n>`: all brackets zero.
/// * `nonabelian2d`: `[e1, e2] = -e1`.
/// * `heisenberg3`: `[e1, e2] = e3`.
/// * `so3`: `[e1, e2] = e3`, `[e2, e3] = e1`, `[e3, e1] = e2`.
/// * `sl2`: basis `(H, E, F)`, `[H, E] = 2E`, `[H, F] = -2F`, `[E, F] = H`.
/// * `e2`: rotation `e1`, translations `e2, e3`; `[e1, e2] = e3`, `[e1, e3] = -e2`.
/// * `solvable3` / `solvable3:<l>`: `[e3, e1] = e1`, `[e3, e2] = l e2` (default `l = -1`).
/// * `oscillator4`: `[e1, e2] = e3`, `[e4, e1] = e2`, `[e4, e2] = -e1`.
/// * `filiform4`: `[e1, e2] = e3`, `[e1, e3] = e4`.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let unknown = || Error::UnknownAlgebra(name.to_string());
    if let Some(rest) = name.strip_prefix("abelian") {
        let n: usize = rest.parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        return LieAlgebra::from_brackets(n, &[]);
    }
    if let Some(rest) = name.strip_prefix("solvable3") {
        let lambda = match rest {
            "" => -1.0,
            r => r
                .strip_prefix(':')
                .and_then(|l| l.parse::<f64>().ok())
                .filter(|l| l.is_finite())
                .ok_or_else(unknown)?,
        };
        return LieAlgebra::from_brackets(
            3,
            &[(2, 0, vec![1.0, 0.0, 0.0]), (2, 1, vec![0.0, lambda, 0.0])],
        );
    }
    match name {
        "nonabelian2d" => LieAlgebra::from_brackets(2, &[(0, 1, vec![-1.0, 0.0])]),
        "heisenberg3" => LieAlgebra::from_brackets(3, &[(0, 1, vec![0.0, 0.0, 1.0])]),
        "so3" => LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![0.0, 0.0, 1.0]),
                (1, 2, vec![1.0, 0.0, 0.0]),
                (2, 0, vec![0.0, 1.0, 0.0]),
            ],
        ),
        "sl2" => LieAlgebra::from_brackets(
            3,
            &[
                (0, 1, vec![0.0, 2.0, 0.0]),
                (0, 2, vec![0.0, 0.0, -2.0]),
                (1, 2, vec![1.0, 0.0, 0.0]),
            ],
        ),
        "e2" => LieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, 1.0]), (0, 2, vec![0.0, -1.0, 0.0])],
        ),
        "oscillator4" => LieAlgebra::from_brackets(
            4,
            &[
                (0, 1, vec![0.0, 0.0, 1.0, 0.0]),
                (3, 0, vec![0.0, 1.0, 0.0, 0.0]),
                (3, 1, vec![-1.0, 0.0, 0.0, 0.0]),
            ],
        ),
        "filiform4" => LieAlgebra::from_brackets(
            4,
            &[(0, 1, vec![0.0, 0.0, 1.0, 0.0]), (0, 2, vec![0.0, 0.0, 0.0, 1.0])],
        ),
        _ => Err(unknown()),
    }
}

/// JSON algebra descriptor: either `{"catalog": "<name>"}` or
/// `{"dim": n, "brackets": [[i, j, [coeffs...]], ...]}` with 1-based indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraDescriptor {
    Catalog(CatalogRef),
    Explicit(ExplicitAlgebra),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogRef {
    pub catalog: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitAlgebra {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, Vec<f64>)>,
}

impl AlgebraDescriptor {
    pub fn build(&self) -> Result<LieAlgebra> {
        match self {
            AlgebraDescriptor::Catalog(c) => catalog(&c.catalog),
            AlgebraDescriptor::Explicit(e) => {
                let mut zero_based = Vec::with_capacity(e.brackets.len());
                for (i, j, coeffs) in &e.brackets {
                    if *i == 0 || *j == 0 {
                        return Err(Error::input("bracket indices are 1-based"));
                    }
                    zero_based.push((i - 1, j - 1, coeffs.clone()));
                }
                LieAlgebra::from_brackets(e.dim, &zero_based)
            }
        }
    }
}
