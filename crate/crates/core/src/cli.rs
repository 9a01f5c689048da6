//! Command-line front end: JSON run configs, CSV/JSON artifacts, dispatch.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::curvature::{flag_curvature, k_vanishes, k_vanishes_3d, AdaptedBasis};
use crate::dynamics::{
    dual_value_drift, integrate_with, reconstruct_group, verify_extremal_with, ControlPolicy, IntegratorConfig,
    MatrixRep, Trajectory,
};
use crate::error::{Error, Result};
use crate::lie_algebra::{AlgebraDescriptor, LieAlgebra};
use crate::linalg::{Covector, Vector};
use crate::polynorm::{validate, NormDescriptor, PolyNorm, Validity};
use crate::uniqueness::{classify_edge_with, classify_segments, classify_vertex, Classification, MEASURE_THRESHOLD};

/// Environment variable holding the default output directory.
pub const OUT_ENV: &str = "POLYFINSLER_OUT";

#[derive(Debug, Parser)]
#[command(name = "polyfinsler", version, about = "Extremals and flag curvature of left-invariant polyhedral Finsler structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// JSON object overriding entries of the tolerances block.
    #[arg(long, global = true)]
    pub tol_overrides: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the algebra (Jacobi identity) and the norm (boundedness of the ball).
    Validate,
    /// Integrate the coadjoint system and write the trajectory.
    Simulate,
    /// Curvature polynomial and asymptotic flag curvature of a covector.
    Curvature,
    /// Edge or vertex uniqueness analysis.
    Uniqueness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraInput {
    Name(String),
    Descriptor(AlgebraDescriptor),
}

impl AlgebraInput {
    pub fn build(&self) -> Result<LieAlgebra> {
        match self {
            AlgebraInput::Name(n) => crate::lie_algebra::catalog(n),
            AlgebraInput::Descriptor(d) => d.build(),
        }
    }

    fn catalog_name(&self) -> Option<&str> {
        match self {
            AlgebraInput::Name(n) => Some(n),
            AlgebraInput::Descriptor(AlgebraDescriptor::Catalog(c)) => Some(&c.catalog),
            AlgebraInput::Descriptor(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexNorm {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

/// A norm given by its functionals or by the vertices of its unit ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormInput {
    Functionals(NormDescriptor),
    Vertices(VertexNorm),
}

impl NormInput {
    pub fn build(&self) -> Result<PolyNorm> {
        match self {
            NormInput::Functionals(d) => d.build(),
            NormInput::Vertices(v) => PolyNorm::from_vertices(v.dim, v.vertices.iter().cloned().map(Vector::new).collect()),
        }
    }

    /// Validity of the raw description (for vertices: origin interior to the hull).
    fn validity(&self) -> Result<Validity> {
        match self {
            NormInput::Functionals(d) => validate(d.dim, &d.functionals.iter().cloned().map(Covector::new).collect::<Vec<_>>()),
            NormInput::Vertices(v) => validate(v.dim, &v.vertices.iter().cloned().map(Covector::new).collect::<Vec<_>>()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PolicyInput {
    Barycenter,
    /// A unit-ball vertex given by index or by coordinates.
    FixedVertex {
        #[serde(default)]
        index: Option<usize>,
        #[serde(default)]
        vertex: Option<Vec<f64>>,
    },
    /// `[[t_0, [u...]], [t_1, [u...]], ...]`.
    Schedule { segments: Vec<(f64, Vec<f64>)> },
}

impl PolicyInput {
    pub fn build(&self, norm: &PolyNorm) -> Result<ControlPolicy> {
        match self {
            PolicyInput::Barycenter => Ok(ControlPolicy::Barycenter),
            PolicyInput::FixedVertex { index: Some(i), vertex: None } => {
                if *i >= norm.unit_ball().vertices().len() {
                    return Err(Error::input(format!("vertex index {i} out of range")));
                }
                Ok(ControlPolicy::FixedVertex(*i))
            }
            PolicyInput::FixedVertex { index: None, vertex: Some(v) } => {
                let v = Vector::new(v.clone());
                norm.unit_ball()
                    .vertices()
                    .iter()
                    .position(|w| w.dim() == v.dim() && w.dist(&v) <= 1e-9)
                    .map(ControlPolicy::FixedVertex)
                    .ok_or_else(|| Error::input(format!("{:?} is not a vertex of the unit ball", v.coords())))
            }
            PolicyInput::FixedVertex { .. } => Err(Error::input("fixed_vertex needs exactly one of `index` or `vertex`")),
            PolicyInput::Schedule { segments } => {
                if segments.is_empty() || segments.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::input("schedule needs increasing switch times"));
                }
                Ok(ControlPolicy::Schedule(
                    segments.iter().map(|(t, u)| (*t, Vector::new(u.clone()))).collect(),
                ))
            }
        }
    }
}

fn default_step() -> f64 {
    crate::dynamics::DEFAULT_STEP
}

fn default_policy() -> PolicyInput {
    PolicyInput::Barycenter
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateBlock {
    pub a0: Vec<f64>,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(default = "default_step")]
    pub h: f64,
    #[serde(default = "default_policy")]
    pub policy: PolicyInput,
    /// Rescale `a` onto its initial dual-norm level after each step.
    #[serde(default)]
    pub project: bool,
    /// Also write the group curve for catalog algebras with a matrix representation.
    #[serde(default)]
    pub reconstruct_group: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureBlock {
    pub a: Vec<f64>,
    #[serde(default)]
    pub v1: Option<Vec<f64>>,
    #[serde(default)]
    pub v2: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniquenessMode {
    Edge,
    Vertex,
}

fn default_threshold() -> f64 {
    MEASURE_THRESHOLD
}

fn default_mode() -> UniquenessMode {
    UniquenessMode::Edge
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniquenessBlock {
    #[serde(default = "default_mode")]
    pub mode: UniquenessMode,
    /// Trajectory CSV as written by `simulate`; relative paths resolve against the config file.
    #[serde(default)]
    pub trajectory: Option<PathBuf>,
    /// Inline simulation (falls back to the top-level `simulate` block).
    #[serde(default)]
    pub simulate: Option<SimulateBlock>,
    /// Vertex mode covector.
    #[serde(default)]
    pub a0: Option<Vec<f64>>,
    #[serde(default = "default_threshold")]
    pub measure_threshold: f64,
    /// Classify each constant-face piece separately instead of requiring a single edge.
    #[serde(default)]
    pub split_segments: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance for maximizing faces and control membership.
    pub face: f64,
    /// Acceptance bound for the extremal residual.
    pub residual: f64,
    /// Absolute bound on `|K_B|` and on bracket residuals for vanishing tests.
    pub vanishing: f64,
    /// Subspace membership tolerance.
    pub subspace: f64,
    /// Face switches resolved per integration step.
    pub max_events_per_step: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            face: crate::polynorm::FACE_TOL,
            residual: crate::dynamics::RESIDUAL_TOL,
            vanishing: crate::curvature::VANISHING_TOL,
            subspace: crate::linalg::SUBSPACE_TOL,
            max_events_per_step: 16,
        }
    }
}

impl Tolerances {
    /// Applies a JSON object of overrides; unknown keys are rejected.
    pub fn with_overrides(&self, overrides: &str) -> Result<Self> {
        let patch: Value = serde_json::from_str(overrides).map_err(|e| Error::input(format!("tolerance overrides: {e}")))?;
        let Value::Object(patch) = patch else {
            return Err(Error::input("tolerance overrides must be a JSON object"));
        };
        let mut base = serde_json::to_value(self).expect("tolerances serialize");
        let obj = base.as_object_mut().expect("object");
        for (k, v) in patch {
            obj.insert(k, v);
        }
        serde_json::from_value(base).map_err(|e| Error::input(format!("tolerance overrides: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algebra: AlgebraInput,
    #[serde(default)]
    pub norm: Option<NormInput>,
    #[serde(default)]
    pub simulate: Option<SimulateBlock>,
    #[serde(default)]
    pub curvature: Option<CurvatureBlock>,
    #[serde(default)]
    pub uniqueness: Option<UniquenessBlock>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("config: {e}")))
    }

    fn norm(&self) -> Result<PolyNorm> {
        self.norm
            .as_ref()
            .ok_or_else(|| Error::input("config has no `norm` block"))?
            .build()
    }
}

/// What a command produced: a JSON summary for stdout and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    pub exit_code: i32,
}

/// Writes a trajectory as CSV with header `t, a_1..a_n, u_1..u_n, face_id, dual_value`.
pub fn trajectory_to_csv(traj: &Trajectory) -> Result<String> {
    let n = traj.dim();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("a_{i}")));
    header.extend((1..=n).map(|i| format!("u_{i}")));
    header.push("face_id".into());
    header.push("dual_value".into());
    w.write_record(&header).map_err(io_err)?;
    for j in 0..traj.len() {
        let mut row = vec![traj.times()[j].to_string()];
        row.extend(traj.a_samples()[j].coords().iter().map(f64::to_string));
        row.extend(traj.u_samples()[j].coords().iter().map(f64::to_string));
        row.push(traj.face_ids()[j].clone());
        row.push(traj.dual_values()[j].to_string());
        w.write_record(&row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads a trajectory CSV; face ids and dual values are recomputed for `norm`.
pub fn trajectory_from_csv(norm: &PolyNorm, text: &str, switch_times: Vec<f64>) -> Result<Trajectory> {
    let n = norm.dim();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(io_err)?.clone();
    if header.len() != 2 * n + 3 || &header[0] != "t" {
        return Err(Error::input(format!("trajectory header does not match dimension {n}")));
    }
    let (mut times, mut a, mut u) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(io_err)?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("trajectory row {}: bad number `{}`", line + 1, &rec[i])))
        };
        times.push(num(0)?);
        a.push(Covector::new((1..=n).map(num).collect::<Result<_>>()?));
        u.push(Vector::new((n + 1..=2 * n).map(num).collect::<Result<_>>()?));
    }
    Trajectory::new(norm, times, a, u, switch_times)
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::input(e.to_string())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Everything a command needs besides the command itself.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub config_dir: PathBuf,
    pub out: PathBuf,
    pub tol: Tolerances,
}

impl Context {
    pub fn load(config: &Path, out: Option<PathBuf>, overrides: Option<&str>) -> Result<Self> {
        let config_text = read_file(config)?;
        let cfg = RunConfig::from_json(&config_text)?;
        let tol = match overrides {
            Some(o) => cfg.tolerances.with_overrides(o)?,
            None => cfg.tolerances,
        };
        let out = out.unwrap_or_else(|| PathBuf::from("."));
        fs::create_dir_all(&out).map_err(|e| Error::input(format!("cannot create {}: {e}", out.display())))?;
        Ok(Self {
            config: cfg,
            config_dir: config.parent().map(Path::to_path_buf).unwrap_or_default(),
            out,
            tol,
        })
    }

    fn integrator(&self, project: bool) -> IntegratorConfig {
        IntegratorConfig {
            face_tol: self.tol.face,
            project,
            max_events_per_step: self.tol.max_events_per_step,
        }
    }
}

pub fn run(cmd: Command, ctx: &Context) -> Result<Outcome> {
    match cmd {
        Command::Validate => cmd_validate(ctx),
        Command::Simulate => cmd_simulate(ctx),
        Command::Curvature => cmd_curvature(ctx),
        Command::Uniqueness => cmd_uniqueness(ctx),
    }
}

pub fn cmd_validate(ctx: &Context) -> Result<Outcome> {
    let alg = ctx.config.algebra.build()?;
    let mut summary = json!({
        "algebra_dim": alg.dim(),
        "jacobi_residual": alg.jacobi_residual(),
    });
    let mut exit_code = 0;
    if let Some(norm_input) = &ctx.config.norm {
        match norm_input.validity()? {
            Validity::Valid => {
                let norm = norm_input.build()?;
                if norm.dim() != alg.dim() {
                    return Err(Error::DimensionMismatch { expected: alg.dim(), got: norm.dim() });
                }
                summary["norm_valid"] = json!(true);
                summary["ball_vertices"] = json!(norm.unit_ball().vertices().len());
                summary["ball_facets"] = json!(norm.unit_ball().facets().len());
                summary["redundant_functionals"] = json!(norm.redundant());
            }
            Validity::Invalid { witness } => {
                summary["norm_valid"] = json!(false);
                summary["witness"] = json!(witness.coords());
                exit_code = 2;
            }
        }
    }
    write_file(&ctx.out.join("validate.json"), &to_json(&summary))?;
    Ok(Outcome { summary, exit_code })
}

fn simulate(ctx: &Context, alg: &LieAlgebra, norm: &PolyNorm, block: &SimulateBlock) -> Result<Trajectory> {
    let policy = block.policy.build(norm)?;
    integrate_with(
        alg,
        norm,
        &Covector::new(block.a0.clone()),
        &policy,
        block.t_final,
        block.h,
        &ctx.integrator(block.project),
    )
}

pub fn cmd_simulate(ctx: &Context) -> Result<Outcome> {
    let alg = ctx.config.algebra.build()?;
    let norm = ctx.config.norm()?;
    let block = ctx
        .config
        .simulate
        .as_ref()
        .ok_or_else(|| Error::input("config has no `simulate` block"))?;
    let traj = simulate(ctx, &alg, &norm, block)?;
    let check = verify_extremal_with(&alg, &norm, &traj, ctx.tol.residual, ctx.tol.face)?;
    write_file(&ctx.out.join("trajectory.csv"), &trajectory_to_csv(&traj)?)?;
    write_file(&ctx.out.join("switch_times.json"), &to_json(&traj.switch_times()))?;
    let mut summary = json!({
        "samples": traj.len(),
        "switch_count": traj.switch_times().len(),
        "dual_value_drift": dual_value_drift(&traj),
        "residual": check.residual,
        "face_violations": check.face_violations.len(),
        "accepted": check.accepted,
    });
    if block.reconstruct_group {
        let name = ctx
            .config
            .algebra
            .catalog_name()
            .ok_or_else(|| Error::input("group reconstruction needs a catalog algebra"))?;
        let rep = MatrixRep::catalog(name, &alg)?;
        let x0 = DMatrix::identity(rep.size(), rep.size());
        let g = reconstruct_group(&rep, traj.times(), traj.u_samples(), &x0, block.h)?;
        write_file(&ctx.out.join("group_trajectory.json"), &to_json(&json!({
            "times": g.times,
            "matrices": g.rows(),
        })))?;
        summary["group_samples"] = json!(g.times.len());
    }
    write_file(&ctx.out.join("summary.json"), &to_json(&summary))?;
    Ok(Outcome {
        summary,
        exit_code: if check.accepted { 0 } else { 3 },
    })
}

pub fn cmd_curvature(ctx: &Context) -> Result<Outcome> {
    let alg = ctx.config.algebra.build()?;
    let block = ctx
        .config
        .curvature
        .as_ref()
        .ok_or_else(|| Error::input("config has no `curvature` block"))?;
    let a = Covector::new(block.a.clone());
    let v2 = block.v2.clone().map(Vector::new);
    let basis = match &block.v1 {
        Some(v1) => AdaptedBasis::complete(&alg, &a, &Vector::new(v1.clone()), v2.as_ref())?,
        None => AdaptedBasis::from_norm(&alg, &ctx.config.norm()?, &a, v2.as_ref())?,
    };
    let report = flag_curvature(&basis, ctx.tol.vanishing);
    let mut summary = serde_json::to_value(&report).expect("serializable");
    summary["a_normalized"] = json!(basis.a().coords());
    summary["kernel_basis"] = json!(basis.kernel_basis().iter().map(Vector::coords).collect::<Vec<_>>());
    if alg.dim() >= 3 {
        let v2 = basis.v2().expect("n >= 3");
        summary["normalizer_criterion"] = json!(k_vanishes(&alg, basis.a(), v2, ctx.tol.vanishing)?);
    }
    if alg.dim() == 3 {
        summary["kernel_is_subalgebra"] = json!(k_vanishes_3d(&alg, basis.a(), ctx.tol.vanishing)?);
    }
    write_file(&ctx.out.join("curvature.json"), &to_json(&summary))?;
    Ok(Outcome { summary, exit_code: 0 })
}

pub fn cmd_uniqueness(ctx: &Context) -> Result<Outcome> {
    let alg = ctx.config.algebra.build()?;
    let norm = ctx.config.norm()?;
    let block = ctx
        .config
        .uniqueness
        .as_ref()
        .ok_or_else(|| Error::input("config has no `uniqueness` block"))?;
    let mut report = match block.mode {
        UniquenessMode::Vertex => {
            let a0 = block
                .a0
                .clone()
                .or_else(|| ctx.config.simulate.as_ref().map(|s| s.a0.clone()))
                .ok_or_else(|| Error::input("vertex mode needs `a0`"))?;
            classify_vertex(&alg, &norm, &Covector::new(a0), ctx.tol.vanishing)?
        }
        UniquenessMode::Edge => {
            let traj = match (&block.trajectory, block.simulate.as_ref().or(ctx.config.simulate.as_ref())) {
                (Some(path), _) => {
                    let path = if path.is_absolute() { path.clone() } else { ctx.config_dir.join(path) };
                    let sidecar = path.with_file_name("switch_times.json");
                    let switches = match fs::read_to_string(&sidecar) {
                        Ok(s) => serde_json::from_str(&s).map_err(|e| Error::input(format!("switch times: {e}")))?,
                        Err(_) => vec![],
                    };
                    trajectory_from_csv(&norm, &read_file(&path)?, switches)?
                }
                (None, Some(sim)) => simulate(ctx, &alg, &norm, sim)?,
                (None, None) => return Err(Error::input("edge mode needs a trajectory or a simulate block")),
            };
            if block.split_segments {
                let segments = classify_segments(&alg, &norm, &traj, block.measure_threshold, ctx.tol.vanishing)?;
                let summary = json!({ "split": segments.len() > 1, "segments": segments });
                write_file(&ctx.out.join("uniqueness.json"), &to_json(&summary))?;
                return Ok(Outcome { summary, exit_code: 0 });
            }
            classify_edge_with(&alg, &norm, &traj, block.measure_threshold, ctx.tol.vanishing, ctx.tol.residual)?
        }
    };
    if report.classification == Classification::InfinitelyMany {
        if let Some(w) = &report.witness {
            let path = ctx.out.join("witness.csv");
            write_file(&path, &trajectory_to_csv(w)?)?;
            report.witness_csv_path = Some(path.display().to_string());
        }
    }
    let summary = serde_json::to_value(&report).expect("serializable");
    write_file(&ctx.out.join("uniqueness.json"), &to_json(&summary))?;
    Ok(Outcome { summary, exit_code: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let ok = r#"{"algebra": "heisenberg3", "norm": {"dim": 3, "functionals": [[1,0,0]]}}"#;
        assert!(RunConfig::from_json(ok).is_ok());
        let bad = r#"{"algebra": "heisenberg3", "colour": 1}"#;
        assert!(RunConfig::from_json(bad).is_err());
        let bad_block = r#"{"algebra": "so3", "simulate": {"a0": [1,0,0], "T": 1, "dt": 0.1}}"#;
        assert!(RunConfig::from_json(bad_block).is_err());
        assert!(RunConfig::from_json("{not json").is_err());
    }

    #[test]
    fn algebra_and_norm_forms() {
        let c = RunConfig::from_json(
            r#"{"algebra": {"dim": 3, "brackets": [[1, 2, [0, 0, 1]]]},
                "norm": {"dim": 2, "vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]}}"#,
        )
        .unwrap();
        assert_eq!(c.algebra.build().unwrap(), crate::lie_algebra::catalog("heisenberg3").unwrap());
        let n = c.norm().unwrap();
        assert_eq!(n.unit_ball().facets().len(), 4);
        let c = RunConfig::from_json(r#"{"algebra": {"catalog": "so3"}}"#).unwrap();
        assert_eq!(c.algebra.catalog_name(), Some("so3"));
    }

    #[test]
    fn tolerance_overrides() {
        let t = Tolerances::default();
        let u = t.with_overrides(r#"{"residual": 1e-4}"#).unwrap();
        assert_eq!(u.residual, 1e-4);
        assert_eq!(u.face, t.face);
        assert!(t.with_overrides(r#"{"nope": 1}"#).is_err());
        assert!(t.with_overrides("[1]").is_err());
    }

    #[test]
    fn policy_inputs() {
        let sq = PolyNorm::new(
            2,
            vec![
                Covector::new(vec![1.0, 0.0]),
                Covector::new(vec![-1.0, 0.0]),
                Covector::new(vec![0.0, 1.0]),
                Covector::new(vec![0.0, -1.0]),
            ],
        )
        .unwrap();
        let p: PolicyInput = serde_json::from_str(r#"{"kind": "fixed_vertex", "vertex": [1, -1]}"#).unwrap();
        match p.build(&sq).unwrap() {
            ControlPolicy::FixedVertex(i) => assert_eq!(sq.unit_ball().vertices()[i].coords(), &[1.0, -1.0]),
            other => panic!("{other:?}"),
        }
        let p: PolicyInput = serde_json::from_str(r#"{"kind": "fixed_vertex", "vertex": [1, 0]}"#).unwrap();
        assert!(p.build(&sq).is_err());
        let p: PolicyInput = serde_json::from_str(r#"{"kind": "schedule", "segments": [[0, [1, 0]], [0.5, [1, 1]]]}"#).unwrap();
        assert!(matches!(p.build(&sq).unwrap(), ControlPolicy::Schedule(s) if s.len() == 2));
        assert!(serde_json::from_str::<PolicyInput>(r#"{"kind": "greedy"}"#).is_err());
    }
}
