//! Command-line front door: parse groupoid/kernel/measure/representation
//! files or pick a built-in, run a named check, and emit a JSON report on
//! stdout. Exit code 0 means the check passed, 1 means it failed, 2 means
//! the inputs could not be used. `--pretty` adds a table on stderr and
//! never changes the exit semantics.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use groupoidal_core::algebra::{DensityWeights, GFunction};
use groupoidal_core::groupoid::{
    build_action_groupoid, build_cyclic_group, build_pair_groupoid, build_quantum_ratchet,
    build_symmetric_s3, FiniteGroupoid, MorphismId, ObjectId,
};
use groupoidal_core::io;
use groupoidal_core::kernels::{
    check_quasi_invariant, quasi_invariant_basis_scan, CompositeMeasure, QuasiInvReading,
};
use groupoidal_core::linalg;
use groupoidal_core::rep::{extend_from_isotropy, rebuild_from_pair, split_along_section, Representation};
use groupoidal_core::report::{CheckReport, Status};
use groupoidal_core::tannaka;
use groupoidal_core::TOL;

type C = Complex64;

#[derive(Parser)]
#[command(
    name = "groupoidal",
    about = "Finite groupoids, their convolution algebras, Haar systems, representations, and reconstruction checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Built-in groupoid: quantum-ratchet | pair:<n> | group:Z<n> | group:S3 | action:<k>cycle,<m>
    #[arg(long)]
    builtin: Option<String>,
    /// Groupoid presentation file (JSON)
    #[arg(long)]
    groupoid: Option<PathBuf>,
    /// Function file (JSON); repeat for operations taking two functions
    #[arg(long = "function")]
    functions: Vec<PathBuf>,
    /// Kernel file (JSON)
    #[arg(long)]
    kernel: Option<PathBuf>,
    /// Object-measure file (JSON)
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Modular-function file (JSON)
    #[arg(long)]
    modular: Option<PathBuf>,
    /// Representation file (JSON)
    #[arg(long)]
    rep: Option<PathBuf>,
    /// Group shorthand for group-level checks: Z<n> | S3
    #[arg(long)]
    group: Option<String>,
    /// RNG seed; the env var GROUPOIDAL_SEED overrides this flag
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance for pass/fail decisions (default 1e-9)
    #[arg(long)]
    tol: Option<f64>,
    /// Render a human-readable table on stderr in addition to the JSON
    #[arg(long)]
    pretty: bool,
    /// Anchor object (rep-split, rep-extend)
    #[arg(long)]
    object: Option<String>,
    /// Morphism id (rep-extend's transport ω)
    #[arg(long)]
    morphism: Option<String>,
    /// Output directory (builtin emission)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the source-fiber reading of t_{α⁻¹} in quasi-invariance
    #[arg(long)]
    alternate_reading: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the groupoid axioms, listing each violation with witnesses
    Validate(Common),
    /// Convolve two functions (with --kernel: the Haar-weighted form)
    Convolve(Common),
    /// The involution f*(α) = conj f(α⁻¹)
    Adjoint(Common),
    /// Apply a density (first --function: weights; second: the argument)
    Density(Common),
    /// Apply a kernel to a function, yielding a value per object
    KernelApply(Common),
    /// Is the kernel a transverse function?
    CheckTransverse(Common),
    /// Does the modular function satisfy the cocycle identity?
    CheckModular(Common),
    /// Quasi-invariance residual of (measure, kernel, modular[, function])
    CheckQuasiInvariant(Common),
    /// Functoriality and unitarity of a representation
    RepCheck(Common),
    /// Decompose a unitary representation into irreducible pieces
    RepDecompose(Common),
    /// Split into (isotropy representation, section images) and round-trip
    RepSplit(Common),
    /// Extend an isotropy representation to the whole groupoid
    RepExtend(Common),
    /// Realize a matrix coefficient for seeded random vectors
    Coeff(Common),
    /// Mean value of a function on a finite group
    Mean(Common),
    /// Mean-value dichotomy for irreducible representations
    MvLemma(Common),
    /// Mean value vs. fixed-space projector on random vectors
    DecLemma(Common),
    /// Does a generated family separate all morphisms?
    Separation(Common),
    /// Full reconstruction check: homomorphism, units, inverses, injectivity
    PhiCheck(Common),
    /// Enumerate monoidal assignments on the dual of a finite abelian group
    AbelianDuality(Common),
    /// Write a built-in groupoid (and its golden tables) to --out
    Builtin(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Convolve(_) => "convolve",
            Command::Adjoint(_) => "adjoint",
            Command::Density(_) => "density",
            Command::KernelApply(_) => "kernel-apply",
            Command::CheckTransverse(_) => "check-transverse",
            Command::CheckModular(_) => "check-modular",
            Command::CheckQuasiInvariant(_) => "check-quasi-invariant",
            Command::RepCheck(_) => "rep-check",
            Command::RepDecompose(_) => "rep-decompose",
            Command::RepSplit(_) => "rep-split",
            Command::RepExtend(_) => "rep-extend",
            Command::Coeff(_) => "coeff",
            Command::Mean(_) => "mean",
            Command::MvLemma(_) => "mv-lemma",
            Command::DecLemma(_) => "dec-lemma",
            Command::Separation(_) => "separation",
            Command::PhiCheck(_) => "phi-check",
            Command::AbelianDuality(_) => "abelian-duality",
            Command::Builtin(_) => "builtin",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Convolve(c)
            | Command::Adjoint(c)
            | Command::Density(c)
            | Command::KernelApply(c)
            | Command::CheckTransverse(c)
            | Command::CheckModular(c)
            | Command::CheckQuasiInvariant(c)
            | Command::RepCheck(c)
            | Command::RepDecompose(c)
            | Command::RepSplit(c)
            | Command::RepExtend(c)
            | Command::Coeff(c)
            | Command::Mean(c)
            | Command::MvLemma(c)
            | Command::DecLemma(c)
            | Command::Separation(c)
            | Command::PhiCheck(c)
            | Command::AbelianDuality(c)
            | Command::Builtin(c) => c,
        }
    }
}

/// Anything that stops a check from running at all (exit 2).
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type RunResult = Result<CheckReport, InputError>;

fn parse_builtin(name: &str) -> Result<FiniteGroupoid, InputError> {
    if name == "quantum-ratchet" {
        return Ok(build_quantum_ratchet());
    }
    if let Some(n) = name.strip_prefix("pair:") {
        let n: usize = n
            .parse()
            .map_err(|_| InputError(format!("bad pair size in `{name}`")))?;
        return Ok(build_pair_groupoid(n)?);
    }
    if let Some(g) = name.strip_prefix("group:") {
        return parse_group(g);
    }
    if let Some(spec) = name.strip_prefix("action:") {
        let (cycle, period) = spec
            .split_once(',')
            .ok_or_else(|| InputError(format!("action spec `{spec}` needs `<k>cycle,<m>`")))?;
        let k: usize = cycle
            .strip_suffix("cycle")
            .and_then(|k| k.parse().ok())
            .ok_or_else(|| InputError(format!("bad cycle length in `{spec}`")))?;
        let m: usize = period
            .parse()
            .map_err(|_| InputError(format!("bad period in `{spec}`")))?;
        if k == 0 {
            return Err(InputError("cycle length must be positive".into()));
        }
        let perm: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        return Ok(build_action_groupoid(&perm, m)?);
    }
    Err(InputError(format!("unknown builtin `{name}`")))
}

fn parse_group(name: &str) -> Result<FiniteGroupoid, InputError> {
    if let Some(n) = name.strip_prefix('Z') {
        let n: usize = n
            .parse()
            .map_err(|_| InputError(format!("bad cyclic order `{name}`")))?;
        return Ok(build_cyclic_group(n)?);
    }
    if name == "S3" {
        return Ok(build_symmetric_s3());
    }
    Err(InputError(format!("unknown group `{name}` (use Z<n> or S3)")))
}

fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read `{}`: {e}", path.display())))
}

/// Loads the groupoid named by --builtin/--groupoid/--group and returns
/// it with its designator string (echoed in reports and matched against
/// the `groupoid` field of data files).
fn load_groupoid(c: &Common) -> Result<(Arc<FiniteGroupoid>, String), InputError> {
    match (&c.builtin, &c.groupoid, &c.group) {
        (Some(_), Some(_), _) => Err(InputError(
            "--builtin and --groupoid are mutually exclusive".into(),
        )),
        (Some(name), None, _) => Ok((Arc::new(parse_builtin(name)?), name.clone())),
        (None, Some(path), _) => {
            let g = io::groupoid_from_json(&read_file(path)?)?;
            let report = g.validate();
            if !report.is_valid() {
                return Err(InputError(format!(
                    "groupoid in `{}` violates the axioms: {}",
                    path.display(),
                    serde_json::to_string(&report).unwrap_or_default()
                )));
            }
            Ok((Arc::new(g), path.display().to_string()))
        }
        (None, None, Some(group)) => Ok((Arc::new(parse_group(group)?), group.clone())),
        (None, None, None) => Err(InputError(
            "need one of --builtin, --groupoid, or --group".into(),
        )),
    }
}

fn check_cross_reference(field: &str, designator: &str, what: &str) -> Result<(), InputError> {
    if !field.is_empty() && field != designator {
        return Err(InputError(format!(
            "{what} references groupoid `{field}` but the request uses `{designator}`"
        )));
    }
    Ok(())
}

fn load_function(
    path: &Path,
    base: &Arc<FiniteGroupoid>,
    designator: &str,
) -> Result<GFunction, InputError> {
    let raw = read_file(path)?;
    let file: io::GFunctionFile =
        serde_json::from_str(&raw).map_err(|e| InputError(format!("function file: {e}")))?;
    check_cross_reference(&file.groupoid, designator, "function file")?;
    Ok(file.to_function(base)?)
}

fn load_kernel(
    c: &Common,
    base: &Arc<FiniteGroupoid>,
    designator: &str,
) -> Result<groupoidal_core::kernels::GKernel, InputError> {
    let path = c
        .kernel
        .as_ref()
        .ok_or_else(|| InputError("need --kernel".into()))?;
    let raw = read_file(path)?;
    let file: io::KernelFile =
        serde_json::from_str(&raw).map_err(|e| InputError(format!("kernel file: {e}")))?;
    check_cross_reference(&file.groupoid, designator, "kernel file")?;
    Ok(file.to_kernel(base)?)
}

fn load_rep(
    c: &Common,
    g: &Arc<FiniteGroupoid>,
    designator: &str,
) -> Result<Representation, InputError> {
    let path = c.rep.as_ref().ok_or_else(|| InputError("need --rep".into()))?;
    let raw = read_file(path)?;
    let file: io::RepresentationFile =
        serde_json::from_str(&raw).map_err(|e| InputError(format!("representation file: {e}")))?;
    check_cross_reference(&file.groupoid, designator, "representation file")?;
    Ok(file.to_representation(g)?)
}

fn anchor_object(c: &Common, g: &Arc<FiniteGroupoid>) -> Result<ObjectId, InputError> {
    match &c.object {
        Some(o) => {
            let id = ObjectId(o.clone());
            g.require_object(&id)?;
            Ok(id)
        }
        None => Ok(g.objects()[0].clone()),
    }
}

fn complex_json(z: C) -> Value {
    json!([z.re, z.im])
}

fn function_json(f: &GFunction) -> Value {
    let map: BTreeMap<String, Value> = f
        .to_id_map()
        .into_iter()
        .map(|(m, z)| (m.0, complex_json(z)))
        .collect();
    json!(map)
}

fn rep_distance(a: &Representation, b: &Representation) -> f64 {
    let g = a.base();
    (0..g.num_morphisms())
        .map(|m| linalg::max_abs_diff(a.mat_idx(m), b.mat_idx(m)))
        .fold(0.0, f64::max)
}

fn effective_seed(c: &Common) -> u64 {
    match std::env::var("GROUPOIDAL_SEED") {
        Ok(v) => v.parse().unwrap_or(c.seed),
        Err(_) => c.seed,
    }
}

fn effective_tol(c: &Common) -> f64 {
    c.tol.unwrap_or(TOL)
}

fn run(cmd: &Command) -> RunResult {
    let c = cmd.common();
    let seed = effective_seed(c);
    let tol = effective_tol(c);

    match cmd {
        Command::Builtin(c) => {
            let name = c
                .builtin
                .as_ref()
                .ok_or_else(|| InputError("builtin emission needs --builtin".into()))?;
            let g = parse_builtin(name)?;
            let out = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&out)
                .map_err(|e| InputError(format!("cannot create `{}`: {e}", out.display())))?;
            let stem: String = name
                .chars()
                .map(|ch| if ch.is_alphanumeric() { ch } else { '_' })
                .collect();
            let groupoid_path = out.join(format!("{stem}.json"));
            std::fs::write(&groupoid_path, io::groupoid_to_json(&g) + "\n")
                .map_err(|e| InputError(format!("cannot write groupoid file: {e}")))?;
            let mut files = vec![groupoid_path.display().to_string()];
            if name == "quantum-ratchet" {
                let inverses: BTreeMap<String, String> = g
                    .morphisms()
                    .iter()
                    .map(|m| (m.0.clone(), g.inverse(m).unwrap().0.clone()))
                    .collect();
                let path = out.join(format!("{stem}_inverses.json"));
                std::fs::write(
                    &path,
                    serde_json::to_string_pretty(&inverses).unwrap() + "\n",
                )
                .map_err(|e| InputError(format!("cannot write inverse table: {e}")))?;
                files.push(path.display().to_string());
            }
            let mut report = CheckReport::new("builtin", name.clone(), seed);
            report.details = json!({ "files": files });
            Ok(report)
        }

        Command::Validate(c) => {
            // parse leniently: axiom violations belong in the report here
            let (g, designator) = match (&c.builtin, &c.groupoid) {
                (None, Some(path)) => {
                    let raw = read_file(path)?;
                    let p: io::GroupoidPresentation = serde_json::from_str(&raw)
                        .map_err(|e| InputError(format!("groupoid file: {e}")))?;
                    match p.to_groupoid() {
                        Ok(g) => (Arc::new(g), path.display().to_string()),
                        Err(e) => {
                            let mut report =
                                CheckReport::new("validate", path.display().to_string(), seed);
                            report.status = Status::Fail;
                            report.witnesses =
                                vec![json!({ "kind": "structural", "detail": e.to_string() })];
                            return Ok(report);
                        }
                    }
                }
                _ => load_groupoid(c)?,
            };
            let validation = g.validate();
            let mut report = CheckReport::new("validate", designator, seed);
            report.status = if validation.is_valid() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = validation
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).unwrap())
                .collect();
            report.details = json!({
                "objects": g.num_objects(),
                "morphisms": g.num_morphisms(),
            });
            Ok(report)
        }

        Command::Convolve(c) => {
            let (g, designator) = load_groupoid(c)?;
            if c.functions.len() != 2 {
                return Err(InputError(
                    "convolve needs exactly two --function files".into(),
                ));
            }
            let f = load_function(&c.functions[0], &g, &designator)?;
            let h = load_function(&c.functions[1], &g, &designator)?;
            let (result, form) = match &c.kernel {
                Some(_) => {
                    let kernel = load_kernel(c, &g, &designator)?;
                    (f.convolve_haar(&h, &kernel)?, "haar")
                }
                None => (f.convolve(&h)?, "plain"),
            };
            let mut report = CheckReport::new("convolve", designator, seed);
            report.details = json!({ "form": form, "result": function_json(&result) });
            Ok(report)
        }

        Command::Adjoint(c) => {
            let (g, designator) = load_groupoid(c)?;
            if c.functions.len() != 1 {
                return Err(InputError("adjoint needs exactly one --function file".into()));
            }
            let f = load_function(&c.functions[0], &g, &designator)?;
            let mut report = CheckReport::new("adjoint", designator, seed);
            report.details = json!({ "result": function_json(&f.adjoint()) });
            Ok(report)
        }

        Command::Density(c) => {
            let (g, designator) = load_groupoid(c)?;
            if c.functions.len() != 2 {
                return Err(InputError(
                    "density needs two --function files: weights, then the argument".into(),
                ));
            }
            let weights = load_function(&c.functions[0], &g, &designator)?;
            let f = load_function(&c.functions[1], &g, &designator)?;
            let rho = DensityWeights::new(g.clone(), &weights.to_id_map())?;
            let value = rho.apply(&f)?;
            let mut report = CheckReport::new("density", designator, seed);
            let non_positive = rho.lint_non_positive();
            report.details = json!({
                "value": complex_json(value),
                "non_positive_weights": non_positive.iter().map(|m| m.0.clone()).collect::<Vec<_>>(),
            });
            Ok(report)
        }

        Command::KernelApply(c) => {
            let (g, designator) = load_groupoid(c)?;
            let kernel = load_kernel(c, &g, &designator)?;
            if c.functions.len() != 1 {
                return Err(InputError("kernel-apply needs one --function file".into()));
            }
            let f = load_function(&c.functions[0], &g, &designator)?;
            let out = kernel.apply(&f)?;
            let values: BTreeMap<String, Value> = out
                .into_iter()
                .map(|(o, z)| (o.0, complex_json(z)))
                .collect();
            let mut report = CheckReport::new("kernel-apply", designator, seed);
            report.details = json!({
                "values": values,
                "faithful": kernel.is_faithful(),
            });
            Ok(report)
        }

        Command::CheckTransverse(c) => {
            let (g, designator) = load_groupoid(c)?;
            let kernel = load_kernel(c, &g, &designator)?;
            let result = kernel.check_transverse();
            let mut report = CheckReport::new("check-transverse", designator, seed);
            report.status = if result.is_transverse() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = result
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).unwrap())
                .collect();
            report.details = json!({ "faithful": kernel.is_faithful() });
            Ok(report)
        }

        Command::CheckModular(c) => {
            let (g, designator) = load_groupoid(c)?;
            let path = c
                .modular
                .as_ref()
                .ok_or_else(|| InputError("need --modular".into()))?;
            let modular = io::modular_from_json(&read_file(path)?, &g)?;
            let result = modular.check_modular();
            let mut report = CheckReport::new("check-modular", designator, seed);
            report.status = if result.is_modular() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = result
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).unwrap())
                .collect();
            Ok(report)
        }

        Command::CheckQuasiInvariant(c) => {
            let (g, designator) = load_groupoid(c)?;
            let kernel = load_kernel(c, &g, &designator)?;
            let measure_path = c
                .measure
                .as_ref()
                .ok_or_else(|| InputError("need --measure".into()))?;
            let measure = io::measure_from_json(&read_file(measure_path)?, &g)?;
            let modular_path = c
                .modular
                .as_ref()
                .ok_or_else(|| InputError("need --modular".into()))?;
            let modular = io::modular_from_json(&read_file(modular_path)?, &g)?;
            let reading = if c.alternate_reading {
                QuasiInvReading::SourceFiber
            } else {
                QuasiInvReading::Literal
            };

            let mut report = CheckReport::new("check-quasi-invariant", designator.clone(), seed);
            let composite = CompositeMeasure::new(measure.clone(), kernel.clone())?;
            match c.functions.first() {
                Some(path) => {
                    let f = load_function(path, &g, &designator)?;
                    let residual = check_quasi_invariant(&measure, &kernel, &modular, &f, reading)?;
                    let m_residual = composite.symmetry_residual(&f, &modular)?;
                    report.max_residual = residual.norm().max(m_residual.norm());
                    report.status = if report.max_residual <= tol {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    report.details = json!({
                        "reading": serde_json::to_value(reading).unwrap(),
                        "residual": complex_json(residual),
                        "composite_residual": complex_json(m_residual),
                    });
                }
                None => {
                    let (max, witness) =
                        quasi_invariant_basis_scan(&measure, &kernel, &modular, reading)?;
                    report.max_residual = max;
                    report.status = if max <= tol { Status::Pass } else { Status::Fail };
                    if max > tol {
                        if let Some(w) = witness {
                            report.witnesses = vec![json!({ "basis": w.0 })];
                        }
                    }
                    report.details = json!({
                        "reading": serde_json::to_value(reading).unwrap(),
                        "scan": "canonical-potential basis",
                    });
                }
            }
            Ok(report)
        }

        Command::RepCheck(c) => {
            let (g, designator) = load_groupoid(c)?;
            let rep = load_rep(c, &g, &designator)?;
            let functorial = rep.check_representation();
            let unitary = rep.check_unitary();
            let mut report = CheckReport::new("rep-check", designator, seed);
            report.max_residual = functorial.max_residual.max(unitary.max_residual);
            report.status = if functorial.is_ok() && unitary.is_ok() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = functorial
                .violations
                .iter()
                .chain(unitary.violations.iter())
                .map(|v| serde_json::to_value(v).unwrap())
                .collect();
            Ok(report)
        }

        Command::RepDecompose(c) => {
            let (g, designator) = load_groupoid(c)?;
            let rep = load_rep(c, &g, &designator)?;
            let dec = rep.decompose(seed)?;
            let pieces: Vec<Value> = dec
                .pieces
                .iter()
                .map(|p| {
                    json!({
                        "dim": p.rep.common_dim().map(|d| d as i64).unwrap_or(-1),
                        "commutant_dim": p.rep.commutant_dimension().map(|d| d as i64).unwrap_or(-1),
                        "unitary": p.rep.is_unitary(),
                    })
                })
                .collect();
            let assembled = dec.assemble()?;
            let equivalent = rep
                .equivalence(&assembled, seed.wrapping_add(1))?
                .is_equivalent();
            let all_scalar = dec
                .pieces
                .iter()
                .all(|p| p.rep.commutant_dimension().map(|d| d == 1).unwrap_or(false));
            let mut report = CheckReport::new("rep-decompose", designator, seed);
            report.status = if equivalent && all_scalar {
                Status::Pass
            } else {
                Status::Fail
            };
            report.details = json!({
                "pieces": pieces,
                "sum_equivalent_to_input": equivalent,
            });
            Ok(report)
        }

        Command::RepSplit(c) => {
            let (g, designator) = load_groupoid(c)?;
            let rep = load_rep(c, &g, &designator)?;
            let anchor = anchor_object(c, &g)?;
            let section = g.section_omega(&anchor)?;
            let pair = split_along_section(&rep, &section)?;
            let rebuilt = rebuild_from_pair(&pair, &section)?;
            let residual = rep_distance(&rep, &rebuilt);
            let mut report = CheckReport::new("rep-split", designator, seed);
            report.max_residual = residual;
            report.status = if residual <= tol { Status::Pass } else { Status::Fail };
            report.details = json!({
                "anchor": anchor.0,
                "isotropy_dim": pair.lambda().common_dim().map(|d| d as i64).unwrap_or(-1),
                "roundtrip_residual": residual,
            });
            Ok(report)
        }

        Command::RepExtend(c) => {
            let (g, designator) = load_groupoid(c)?;
            let anchor = g.objects()[0].clone();
            let section = g.section_omega(&anchor)?;
            let x = c
                .object
                .clone()
                .map(ObjectId)
                .ok_or_else(|| InputError("rep-extend needs --object (the isotropy site)".into()))?;
            g.require_object(&x)?;
            let omega = match &c.morphism {
                Some(m) => MorphismId(m.clone()),
                None => section.omega(&x)?.clone(),
            };
            let iso = Arc::new(g.isotropy_group(&x)?);
            let rep_path = c.rep.as_ref().ok_or_else(|| InputError("need --rep".into()))?;
            let raw = read_file(rep_path)?;
            let file: io::RepresentationFile = serde_json::from_str(&raw)
                .map_err(|e| InputError(format!("representation file: {e}")))?;
            let lambda = file.to_representation(&iso)?;
            let extended = extend_from_isotropy(&g, &lambda, &omega, &section)?;
            let restricted = extended.restrict_to_isotropy(&x)?;
            let residual = rep_distance(&lambda, &restricted);
            let mut report = CheckReport::new("rep-extend", designator, seed);
            report.max_residual = residual;
            report.status =
                if residual <= tol && extended.is_representation() && extended.is_unitary() {
                    Status::Pass
                } else {
                    Status::Fail
                };
            report.details = json!({
                "site": x.0,
                "omega": omega.0,
                "extended_dim": extended.common_dim().map(|d| d as i64).unwrap_or(-1),
                "restriction_residual": residual,
            });
            Ok(report)
        }

        Command::Coeff(c) => {
            let (g, designator) = load_groupoid(c)?;
            let rep = load_rep(c, &g, &designator)?;
            let d = rep.common_dim()?;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let u = linalg::random_vector(&mut rng, d);
            let v = linalg::random_vector(&mut rng, d);
            let f = tannaka::matrix_coefficient(&rep, &u, &v)?;
            let vec_json = |w: &linalg::CVec| -> Value {
                json!(w.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>())
            };
            let mut report = CheckReport::new("coeff", designator, seed);
            report.details = json!({
                "u": vec_json(&u),
                "v": vec_json(&v),
                "realized": function_json(&f),
            });
            Ok(report)
        }

        Command::Mean(c) => {
            let (g, designator) = load_groupoid(c)?;
            if !g.is_group() {
                return Err(InputError("mean needs a single-object groupoid".into()));
            }
            if c.functions.len() != 1 {
                return Err(InputError("mean needs one --function file".into()));
            }
            let f = load_function(&c.functions[0], &g, &designator)?;
            let value = tannaka::mean_value(&f)?;
            let mut report = CheckReport::new("mean", designator, seed);
            report.details = json!({ "value": complex_json(value) });
            Ok(report)
        }

        Command::MvLemma(c) => {
            let (g, designator) = load_groupoid(c)?;
            let mut report = CheckReport::new("mv-lemma", designator.clone(), seed);
            let mut cases = Vec::new();
            let mut max_residual = 0.0_f64;
            match &c.rep {
                Some(_) => {
                    let rep = load_rep(c, &g, &designator)?;
                    let out = tannaka::check_mv_lemma(&rep, 20, seed)?;
                    max_residual = out.max_residual;
                    cases.push(serde_json::to_value(&out).unwrap());
                }
                None => {
                    // no representation given: test every irreducible piece
                    // of the regular representation
                    let reg = Representation::regular(&g)?;
                    let dec = reg.decompose(seed)?;
                    for p in &dec.pieces {
                        let out = tannaka::check_mv_lemma(&p.rep, 20, seed)?;
                        max_residual = max_residual.max(out.max_residual);
                        cases.push(serde_json::to_value(&out).unwrap());
                    }
                }
            }
            report.max_residual = max_residual;
            report.status = if max_residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            };
            report.details = json!({ "cases": cases });
            Ok(report)
        }

        Command::DecLemma(c) => {
            let (g, designator) = load_groupoid(c)?;
            let rep = match &c.rep {
                Some(_) => load_rep(c, &g, &designator)?,
                None => Representation::regular(&g)?,
            };
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = rep.common_dim()?;
            let mut max_residual = 0.0_f64;
            for _ in 0..100 {
                let u = linalg::random_vector(&mut rng, d);
                let v = linalg::random_vector(&mut rng, d);
                max_residual = max_residual.max(tannaka::check_dec_lemma(&rep, &u, &v)?);
            }
            let mut report = CheckReport::new("dec-lemma", designator, seed);
            report.max_residual = max_residual;
            report.status = if max_residual <= tol {
                Status::Pass
            } else {
                Status::Fail
            };
            report.details = json!({ "draws": 100 });
            Ok(report)
        }

        Command::Separation(c) => {
            let (g, designator) = load_groupoid(c)?;
            let (family, separation, attempts) = tannaka::separating_family(&g, seed)?;
            let mut report = CheckReport::new("separation", designator, seed);
            report.family = family.descriptors();
            report.status = if separation.separates() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = separation
                .unseparated
                .iter()
                .map(|(a, b)| json!({ "first": a.0, "second": b.0 }))
                .collect();
            report.details = json!({
                "total_pairs": separation.total_pairs,
                "attempts": attempts,
            });
            Ok(report)
        }

        Command::PhiCheck(c) => {
            let (g, designator) = load_groupoid(c)?;
            let (family, separation, attempts) = tannaka::separating_family(&g, seed)?;
            let rec = tannaka::check_reconstruction(&family)?;
            let mut report = CheckReport::new("phi-check", designator, seed);
            report.family = family.descriptors();
            report.max_residual = rec.homomorphism_max_residual;
            report.status = if rec.all_ok() && separation.separates() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.witnesses = rec.failures.iter().map(|f| json!(f)).collect();
            report.details = json!({
                "homomorphism_pairs": rec.homomorphism_pairs,
                "units_ok": rec.units_ok,
                "inverses_ok": rec.inverses_ok,
                "injective": rec.injective,
                "distinct_image_pairs": rec.distinct_images,
                "ideal_condition_ok": rec.ideal_condition_ok,
                "separation_ok": rec.separation_ok,
                "attempts": attempts,
            });
            Ok(report)
        }

        Command::AbelianDuality(c) => {
            let (g, designator) = load_groupoid(c)?;
            let out = tannaka::abelian_tannaka_surjectivity(&g, seed)?;
            let mut report = CheckReport::new("abelian-duality", designator, seed);
            report.status = if out.surjective() {
                Status::Pass
            } else {
                Status::Fail
            };
            report.details = serde_json::to_value(&out).unwrap();
            Ok(report)
        }
    }
}

fn pretty_print(report: &CheckReport) {
    eprintln!("┌─ {} on {}", report.check, report.groupoid);
    eprintln!(
        "│ status        {}",
        match report.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Undecided => "undecided",
        }
    );
    eprintln!("│ max residual  {:.3e}", report.max_residual);
    eprintln!("│ seed          {}", report.seed);
    if !report.family.is_empty() {
        eprintln!("│ family        {}", report.family.join("; "));
    }
    for w in &report.witnesses {
        eprintln!("│ witness       {w}");
    }
    eprintln!("└─");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let c = cli.command.common();
    match run(&cli.command) {
        Ok(report) => {
            println!("{}", report.to_json());
            if c.pretty {
                pretty_print(&report);
            }
            match report.status {
                Status::Pass => ExitCode::SUCCESS,
                Status::Fail | Status::Undecided => ExitCode::from(1),
            }
        }
        Err(InputError(msg)) => {
            let mut report = CheckReport::new(name, "<unavailable>", effective_seed(c));
            report.status = Status::Fail;
            report.details = json!({ "input_error": msg });
            println!("{}", report.to_json());
            if c.pretty {
                pretty_print(&report);
            }
            ExitCode::from(2)
        }
    }
}
