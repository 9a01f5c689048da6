#![allow(dead_code)]

use polyfinsler::lie_algebra::JACOBI_TOL;
use polyfinsler::linalg::kernel_basis;
use polyfinsler::{catalog, validate, Classification, ControlPolicy, Covector, LieAlgebra, PolyNorm, Vector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec())
}

pub fn cv(c: &[f64]) -> Covector {
    Covector::new(c.to_vec())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let x = Vector::new(uniform(rng, n, 1.0));
        if x.norm() > 0.2 {
            return x;
        }
    }
}

pub fn random_covector(rng: &mut ChaCha8Rng, n: usize) -> Covector {
    random_vector(rng, n).to_covector()
}

/// Random valid norm with `m` functionals drawn from the cube `[-1, 1]^n`.
pub fn random_norm(rng: &mut ChaCha8Rng, n: usize, m: usize) -> PolyNorm {
    loop {
        let fs: Vec<Covector> = (0..m).map(|_| Covector::new(uniform(rng, n, 1.0))).collect();
        if validate(n, &fs).unwrap().is_valid() {
            return PolyNorm::new(n, fs).unwrap();
        }
    }
}

/// As [`random_norm`], keeping only balls inside the Euclidean ball of
/// radius `r_max`, so that controls stay of moderate size.
pub fn random_bounded_norm(rng: &mut ChaCha8Rng, n: usize, m: usize, r_max: f64) -> PolyNorm {
    loop {
        let norm = random_norm(rng, n, m);
        if norm.unit_ball().vertices().iter().all(|y| y.norm() <= r_max) {
            return norm;
        }
    }
}

pub fn cube(n: usize) -> PolyNorm {
    let fs = (0..n)
        .flat_map(|i| [1.0, -1.0].map(|s| Covector::basis(n, i).scale(s)))
        .collect();
    PolyNorm::new(n, fs).unwrap()
}

pub fn cross(n: usize) -> PolyNorm {
    PolyNorm::new(n, sign_patterns(n).into_iter().map(Covector::new).collect()).unwrap()
}

pub fn sign_patterns(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect())
        .collect()
}

/// Polytopes used wherever a fixed catalogue of norms is needed.
pub fn fixture_norms() -> Vec<(String, PolyNorm)> {
    let mut out = vec![
        ("square".into(), cube(2)),
        ("diamond".into(), cross(2)),
        (
            "hexagon".into(),
            PolyNorm::new(
                2,
                vec![
                    cv(&[1.0, 0.0]),
                    cv(&[0.5, 1.0]),
                    cv(&[-0.5, 1.0]),
                    cv(&[-1.0, 0.0]),
                    cv(&[-0.5, -1.0]),
                    cv(&[0.5, -1.0]),
                ],
            )
            .unwrap(),
        ),
        (
            "triangle".into(),
            PolyNorm::new(2, vec![cv(&[1.0, 1.0]), cv(&[-2.0, 1.0]), cv(&[0.5, -3.0])]).unwrap(),
        ),
        ("cube".into(), cube(3)),
        ("octahedron".into(), cross(3)),
        ("heisenberg".into(), heisenberg_norm()),
        ("simplex3".into(), simplex(3)),
        ("tesseract".into(), cube(4)),
        ("cross4".into(), cross(4)),
        ("simplex4".into(), simplex(4)),
    ];
    let mut r = rng(7);
    for (i, (n, m)) in [(2, 5), (3, 8), (3, 12), (4, 10)].into_iter().enumerate() {
        out.push((format!("random{i}"), random_norm(&mut r, n, m)));
    }
    out
}

/// `F(y) = max(y_i, -sum y_j / 2)`: a norm whose ball is a simplex.
pub fn simplex(n: usize) -> PolyNorm {
    let mut fs: Vec<Covector> = (0..n).map(|i| Covector::basis(n, i)).collect();
    fs.push(Covector::new(vec![-0.5; n]));
    PolyNorm::new(n, fs).unwrap()
}

/// `F = max(|y1|, 20|y2|, |y3|)` without the `y1 - y3` mixing: the ball has
/// edge `conv{e1, e3}` dual to `conv{(1, -20, 1), (1, 20, 1)}`.
pub fn heisenberg_norm() -> PolyNorm {
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

/// Random Lie algebra of dimension 3 or 4: a catalogue algebra in a random
/// well-conditioned basis.
pub fn random_algebra(rng: &mut ChaCha8Rng, n: usize) -> (String, LieAlgebra) {
    let names: &[&str] = if n == 3 {
        &["heisenberg3", "so3", "sl2", "e2", "solvable3", "solvable3:0.5", "abelian3"]
    } else {
        &["oscillator4", "filiform4", "abelian4"]
    };
    let name = names[rng.gen_range(0..names.len())];
    let base = catalog(name).unwrap();
    loop {
        let basis: Vec<Vector> = (0..n)
            .map(|i| {
                let mut c = uniform(rng, n, 0.5);
                c[i] += 1.0;
                Vector::new(c)
            })
            .collect();
        let Ok(c) = base.constants().in_basis(&basis) else {
            continue;
        };
        if c.jacobi_residual() > JACOBI_TOL * 0.1 {
            continue;
        }
        if let Ok(alg) = LieAlgebra::new(c) {
            return (name.to_string(), alg);
        }
    }
}

/// Covector `a` on an algebra with a stationary control `u*`
/// (`a([u*, .]) = 0`, `a(u*) = 1`).
pub struct StationaryCase {
    pub name: &'static str,
    pub alg: LieAlgebra,
    pub a: Covector,
    pub u_star: Vector,
    pub expect: Classification,
}

pub fn stationary_cases() -> Vec<StationaryCase> {
    use Classification::*;
    let case = |name, alg: &str, a: &[f64], u: &[f64], expect| StationaryCase {
        name,
        alg: catalog(alg).unwrap(),
        a: cv(a),
        u_star: v(u),
        expect,
    };
    vec![
        case("heisenberg3 e^1", "heisenberg3", &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], InfinitelyMany),
        case("heisenberg3 e^3", "heisenberg3", &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], Unique),
        case("heisenberg3 e^1+e^3", "heisenberg3", &[1.0, 0.0, 1.0], &[0.0, 0.0, 1.0], Unique),
        case("so3 e^3", "so3", &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], Unique),
        case("so3 oblique", "so3", &[0.6, 0.0, 0.8], &[0.6, 0.0, 0.8], Unique),
        case("sl2 H*", "sl2", &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], Unique),
        case("e2 e^1", "e2", &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], InfinitelyMany),
        case("e2 e^2", "e2", &[0.0, 1.0, 0.0], &[0.0, 1.0, 0.0], Unique),
        case("solvable3 e^3", "solvable3", &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0], InfinitelyMany),
        case("solvable3 e^1+e^2", "solvable3", &[1.0, 1.0, 0.0], &[0.5, 0.5, 0.0], Unique),
        case("abelian3", "abelian3", &[0.3, -0.5, 1.0], &[0.0, 0.0, 1.0], InfinitelyMany),
    ]
}

/// Maps frame coordinates `(alpha, beta, gamma)` to `alpha p + beta w + gamma z`.
pub fn frame_points(p: &Vector, w: &Vector, z: &Vector, coords: &[[f64; 3]]) -> Vec<Vector> {
    coords
        .iter()
        .map(|[al, be, ga]| &(&p.scale(*al) + &w.scale(*be)) + &z.scale(*ga))
        .collect()
}

/// Edge shapes in frame coordinates. The points with `alpha = 1` are exactly
/// `(1, -1, 0)` and `(1, 2, 0)`, so `a` is maximized on the edge
/// `[u* - w, u* + 2w]`.
pub const EDGE_SHAPES: [(&str, &[[f64; 3]]); 3] = [
    (
        "symmetric",
        &[[1.0, -1.0, 0.0], [1.0, 2.0, 0.0], [-1.0, 1.0, 0.0], [-1.0, -2.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]],
    ),
    (
        "skew",
        &[
            [1.0, -1.0, 0.0],
            [1.0, 2.0, 0.0],
            [-0.5, 0.3, 1.2],
            [-0.7, -0.4, -1.0],
            [0.2, 1.0, -0.8],
            [-1.0, 0.5, 0.1],
            [0.6, -1.5, 0.4],
        ],
    ),
    (
        "wedge",
        &[
            [1.0, -1.0, 0.0],
            [1.0, 2.0, 0.0],
            [0.5, -1.5, 1.0],
            [0.5, -1.5, -1.0],
            [0.5, 2.5, 1.0],
            [0.5, 2.5, -1.0],
            [-1.0, 0.0, 0.5],
            [-1.0, 0.0, -0.5],
        ],
    ),
];

/// Name, frame coordinates, and the `beta` and `gamma` ranges of the facet.
pub type FacetShape = (&'static str, &'static [[f64; 3]], [f64; 2], [f64; 2]);

/// Facet shapes in frame coordinates; the facet is `alpha = 1`.
pub const FACET_SHAPES: [FacetShape; 3] = [
    (
        "box",
        &[
            [1.0, -1.0, -1.0],
            [1.0, -1.0, 1.0],
            [1.0, 1.0, -1.0],
            [1.0, 1.0, 1.0],
            [-1.0, -1.0, -1.0],
            [-1.0, -1.0, 1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, 1.0, 1.0],
        ],
        [-1.0, 1.0],
        [-1.0, 1.0],
    ),
    (
        "pyramid",
        &[[1.0, -1.0, -1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0], [1.0, 1.0, 1.0], [-1.0, 0.0, 0.0]],
        [-1.0, 1.0],
        [-1.0, 1.0],
    ),
    (
        "offset",
        &[
            [1.0, -1.0, -1.0],
            [1.0, -1.0, 1.5],
            [1.0, 2.0, -1.0],
            [1.0, 2.0, 1.5],
            [-0.8, 0.5, 0.2],
            [-0.3, -2.0, 1.0],
            [-0.5, 1.0, -2.0],
        ],
        [-1.0, 2.0],
        [-1.0, 1.5],
    ),
];

/// Orthonormal basis `(w, z)` of `ker a`.
pub fn kernel_frame(a: &Covector) -> (Vector, Vector) {
    let k = kernel_basis(a).unwrap();
    (k[0].clone(), k[1].clone())
}

/// An edge extremal together with the edge it runs on and the expected verdict.
pub struct EdgeFixture {
    pub name: String,
    pub alg: LieAlgebra,
    pub norm: PolyNorm,
    pub a0: Covector,
    /// Control used to generate the trajectory.
    pub policy: ControlPolicy,
    pub t_final: f64,
    pub h: f64,
    /// Endpoints of the edge.
    pub p: Vector,
    pub q: Vector,
    pub expect: Classification,
}

pub fn edge_fixtures() -> Vec<EdgeFixture> {
    let mut out = Vec::new();
    for case in stationary_cases() {
        let (w, z) = kernel_frame(&case.a);
        for (shape, coords) in EDGE_SHAPES {
            let pts = frame_points(&case.u_star, &w, &z, coords);
            out.push(EdgeFixture {
                name: format!("{} / {shape}", case.name),
                alg: case.alg.clone(),
                norm: PolyNorm::from_vertices(3, pts.clone()).unwrap(),
                a0: case.a.clone(),
                policy: ControlPolicy::Schedule(vec![(0.0, case.u_star.clone())]),
                t_final: 1.0,
                h: 1e-2,
                p: pts[0].clone(),
                q: pts[1].clone(),
                expect: case.expect,
            });
        }
    }
    out.push(EdgeFixture {
        name: "heisenberg3 moving".into(),
        alg: catalog("heisenberg3").unwrap(),
        norm: heisenberg_norm(),
        a0: cv(&[1.0, -5.0, 1.0]),
        policy: ControlPolicy::Schedule(vec![(0.0, v(&[1.0, 0.0, 0.0]))]),
        t_final: 10.0,
        h: 1e-3,
        p: v(&[1.0, 0.0, 0.0]),
        q: v(&[0.0, 0.0, 1.0]),
        expect: Classification::Unique,
    });
    out.push(EdgeFixture {
        name: "solvable3 moving".into(),
        alg: catalog("solvable3").unwrap(),
        norm: solvable_norm(),
        a0: cv(&[0.0, 1.0, -5.0]),
        policy: ControlPolicy::Schedule(vec![(0.0, v(&[0.3, 1.0, 0.0]))]),
        t_final: 10.0,
        h: 1e-3,
        p: v(&[-1.0, 1.0, 0.0]),
        q: v(&[1.0, 1.0, 0.0]),
        expect: Classification::InfinitelyMany,
    });
    out
}

/// Ball `conv{(±1, ±1, 0), (0, 0, ±0.1)}`: the edge `y = 1, z = 0` is dual to
/// the covectors `(0, 1, s)`, `|s| <= 10`.
pub fn solvable_norm() -> PolyNorm {
    PolyNorm::from_vertices(
        3,
        vec![
            v(&[1.0, 1.0, 0.0]),
            v(&[-1.0, 1.0, 0.0]),
            v(&[1.0, -1.0, 0.0]),
            v(&[-1.0, -1.0, 0.0]),
            v(&[0.0, 0.0, 0.1]),
            v(&[0.0, 0.0, -0.1]),
        ],
    )
    .unwrap()
}

/// A covector maximized on a facet, with a stationary control in that facet.
pub struct VertexFixture {
    pub name: String,
    pub alg: LieAlgebra,
    pub norm: PolyNorm,
    pub a0: Covector,
    pub u_star: Vector,
    pub w: Vector,
    pub z: Vector,
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    pub expect: Classification,
}

pub fn vertex_fixtures() -> Vec<VertexFixture> {
    let mut out = Vec::new();
    for case in stationary_cases() {
        let (w, z) = kernel_frame(&case.a);
        for (shape, coords, beta, gamma) in FACET_SHAPES {
            let pts = frame_points(&case.u_star, &w, &z, coords);
            out.push(VertexFixture {
                name: format!("{} / {shape}", case.name),
                alg: case.alg.clone(),
                norm: PolyNorm::from_vertices(3, pts).unwrap(),
                a0: case.a.clone(),
                u_star: case.u_star.clone(),
                w: w.clone(),
                z: z.clone(),
                beta,
                gamma,
                expect: case.expect,
            });
        }
    }
    out
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1.0)
}
