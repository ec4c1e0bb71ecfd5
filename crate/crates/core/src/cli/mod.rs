//! The `eo` command line.

pub mod gate;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{ExactValue, FieldMode};
use crate::classify::{membership_a, membership_p, verdict_extended, Class, ExtendedMode};
use crate::error::{Error, Result};
use crate::generate::{delta_realizability, Caps};
use crate::grid::io::{format_grid, read_grid};
use crate::grid::Grid;
use crate::signature::io::{format_signatures, read_signatures};
use crate::signature::Signature;
use crate::tractable::{
    eval_affine, eval_fpnp_report, eval_product, interpolate_delta, prune_with_report,
    reduce_single_delta_report, OracleBackend,
};
use crate::transforms::{grid_pad_or_zero, grid_restrict_eo, pad_to_eo, restrict_eo};

#[derive(Parser, Debug)]
#[command(name = "eo", version, about = "Exact Eulerian-orientation Holant toolkit")]
struct Cli {
    /// Cap the worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Brute,
    Affine,
    Product,
    Fpnp,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    A,
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TransformOp {
    RestrictEo,
    Pad,
    GridPad,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition function of a closed grid.
    Eval {
        grid: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        engine: Engine,
        /// Oracle for the fpnp engine: exhaustive or external:<cmd>.
        #[arg(long, default_value = "exhaustive")]
        backend: String,
        /// Tractable class the fpnp engine should use.
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Dichotomy verdict for a signature set.
    Classify {
        set: PathBuf,
        #[arg(long, default_value = "eo")]
        mode: String,
        /// Also write the verdict document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the generating process on the first signature of a file.
    Generate {
        signature: PathBuf,
        #[arg(long, default_value = "steps=8,size=4096,order=64")]
        caps: String,
        /// Write one line per generated binary with its recipe.
        #[arg(long)]
        recipes: Option<PathBuf>,
    },
    /// Prune every vertex to its effective support.
    Prune {
        grid: PathBuf,
        #[arg(long, default_value = "exhaustive")]
        backend: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a grid with Δ occurrences by interpolation.
    Interp {
        grid: PathBuf,
        /// Interpolation node; not a root of unity.
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        x: String,
        /// Use the single-pin reduction instead (exactly one Δ).
        #[arg(long)]
        single: bool,
        /// Vertex bound of the asymmetric-gate search.
        #[arg(long, default_value_t = crate::tractable::DEFAULT_GATE_BOUND)]
        bound: usize,
    },
    /// Signature and grid rewriting.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: TransformOp,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a gadget script and print the resulting signature.
    Gate { script: PathBuf },
}

/// Outcome of one invocation. Everything except `elapsed_ms` is a function
/// of the command line and the input files.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub engine: Option<Engine>,
    pub value: Option<String>,
    pub elapsed_ms: u128,
    pub payload: Value,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub json: bool,
}

impl RunReport {
    fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            engine: None,
            value: None,
            elapsed_ms: 0,
            payload: Value::Null,
            text: String::new(),
            json: false,
        }
    }

    /// What the binary prints on stdout (or stderr on failure).
    pub fn render(&self) -> String {
        if self.json {
            serde_json::to_string_pretty(self).unwrap()
        } else {
            self.text.clone()
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn is_grid_file(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(text.lines().any(|l| {
        let t = l.trim_start();
        t.starts_with("vertex ") || t.starts_with("edge ") || t.starts_with("dangle ")
    }))
}

fn first_signature(path: &Path, mode: FieldMode) -> Result<Signature> {
    read_signatures(path, mode)?
        .into_iter()
        .next()
        .ok_or(Error::EmptyInput)
}

/// Engine for `--engine auto`: a direct tractable evaluator when every
/// vertex has a certificate, the oracle pipeline when the signature set is
/// tractable, brute force otherwise.
pub fn choose_engine(grid: &Grid) -> Engine {
    let all = |pred: &dyn Fn(&Signature) -> bool| grid.vertices.iter().all(|v| pred(&v.signature));
    if all(&|s| s.is_zero() || membership_p(s).is_ok_and(|m| m.is_member())) {
        return Engine::Product;
    }
    if all(&|s| s.is_zero() || membership_a(s).is_ok_and(|m| m.is_member())) {
        return Engine::Affine;
    }
    if grid.is_closed() && all(&|s| s.is_eo()) {
        let mut set: Vec<Signature> = Vec::new();
        for v in &grid.vertices {
            if !set.contains(&v.signature) {
                set.push(v.signature.clone());
            }
        }
        if crate::classify::dichotomy_verdict(&set).is_ok_and(|v| !v.outcome.is_hard()) {
            return Engine::Fpnp;
        }
    }
    Engine::Brute
}

fn run(cli: Cli, report: &mut RunReport) -> Result<()> {
    let mode = FieldMode::from_env()?;
    match cli.command {
        Command::Eval { grid, engine, backend, class } => {
            let g = read_grid(&grid, mode)?;
            let backend: OracleBackend = backend.parse()?;
            let used = if engine == Engine::Auto { choose_engine(&g) } else { engine };
            let mut extra = Value::Null;
            let z = match used {
                Engine::Brute | Engine::Auto => g.brute_force_partition()?,
                Engine::Affine => eval_affine(&g)?,
                Engine::Product => eval_product(&g)?,
                Engine::Fpnp => {
                    let hint = class.map(|c| match c {
                        ClassArg::A => Class::A,
                        ClassArg::P => Class::P,
                    });
                    let r = eval_fpnp_report(&g, hint, &backend)?;
                    extra = to_json(&r);
                    r.value
                }
            };
            report.engine = Some(used);
            report.value = Some(z.to_string());
            report.payload = json!({ "value": z.to_string(), "engine": used, "details": extra });
            report.text = format!("Z = {z}");
        }
        Command::Classify { set, mode: m, out } => {
            let m: ExtendedMode = m.parse()?;
            let sigs = read_signatures(&set, mode)?;
            let v = verdict_extended(&sigs, m)?;
            let doc = to_json(&v);
            if let Some(out) = out {
                write_file(&out, &serde_json::to_string_pretty(&doc).unwrap())?;
            }
            let mut text = String::new();
            let kind = match &v.outcome {
                o if o.is_hard() => "#P-hard".to_string(),
                o if o.is_fp() => "FP".to_string(),
                _ => "FP^NP".to_string(),
            };
            text.push_str(&format!("verdict: {kind}\n"));
            if !v.outcome.is_hard() {
                text.push_str(&format!(
                    "classes: {:?}\ndirections: {:?}\n",
                    v.outcome.classes(),
                    v.outcome.directions()
                ));
            }
            for n in &v.notes {
                text.push_str(&format!("note: {n}\n"));
            }
            report.value = Some(kind);
            report.payload = doc;
            report.text = text.trim_end().to_string();
        }
        Command::Generate { signature, caps, recipes } => {
            let f = first_signature(&signature, mode)?;
            let caps: Caps = caps.parse()?;
            let (r, state) = delta_realizability(&f, caps)?;
            if let Some(path) = recipes {
                let mut lines = String::new();
                for h in &state.history {
                    lines.push_str(&format!(
                        "{}\t{}\t{}\n",
                        h.step,
                        h.raw,
                        serde_json::to_string(&h.recipe).unwrap()
                    ));
                }
                write_file(&path, &lines)?;
            }
            report.value = Some(r.descriptor.to_string());
            report.text = format!(
                "{}\nroute: {:?}\nsymmetry: {}\nsteps: {}\nsizes: {:?}",
                r.descriptor,
                r.route,
                r.symmetry,
                state.step,
                state.b_sizes
            );
            report.payload = json!({
                "descriptor": to_json(&r.descriptor),
                "report": to_json(&r),
                "b": state.b_ratios().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "b_sizes": state.b_sizes,
                "history": state.history.len(),
            });
        }
        Command::Prune { grid, backend, out } => {
            let g = read_grid(&grid, mode)?;
            let backend: OracleBackend = backend.parse()?;
            let (p, r) = prune_with_report(&g, &backend)?;
            if let Some(out) = out {
                write_file(&out, &format_grid(&p))?;
            }
            let mut text = String::new();
            for vs in &r.vertices {
                let eff: Vec<&str> = vs
                    .strings
                    .iter()
                    .filter(|s| s.effective)
                    .map(|s| s.string.as_str())
                    .collect();
                text.push_str(&format!("{}: {{{}}}\n", vs.vertex, eff.join(",")));
            }
            text.push_str(&format!("queries: {}", r.queries));
            report.payload = to_json(&r);
            report.text = text;
        }
        Command::Interp { grid, x, single, bound } => {
            let g = read_grid(&grid, mode)?;
            if single {
                let r = reduce_single_delta_report(&g, bound)?;
                report.value = Some(r.value.to_string());
                report.text = format!("Z = {}", r.value);
                report.payload = to_json(&r);
            } else {
                let x: ExactValue = mode.parse_value(&x)?;
                let z = interpolate_delta(&g, &x)?;
                report.value = Some(z.to_string());
                report.text = format!("Z = {z}");
                report.payload = json!({
                    "value": z.to_string(),
                    "x": x.to_string(),
                    "delta_occurrences": g.delta_occurrences().len(),
                });
            }
        }
        Command::Transform { file, op, out } => {
            let text = match op {
                TransformOp::GridPad => {
                    let g = read_grid(&file, mode)?;
                    let (p, diag) = grid_pad_or_zero(&g)?;
                    report.payload = json!({
                        "vertices": p.vertices.len(),
                        "diagnostic": diag.as_ref().map(|e| e.to_string()),
                    });
                    format_grid(&p)
                }
                TransformOp::RestrictEo if is_grid_file(&file)? => {
                    let g = read_grid(&file, mode)?;
                    let p = grid_restrict_eo(&g);
                    report.payload = json!({ "vertices": p.vertices.len() });
                    format_grid(&p)
                }
                TransformOp::RestrictEo | TransformOp::Pad => {
                    let sigs = read_signatures(&file, mode)?;
                    let outs = sigs
                        .iter()
                        .map(|f| {
                            let r = if op == TransformOp::Pad { pad_to_eo(f)? } else { restrict_eo(f) };
                            Ok(match f.name() {
                                Some(n) => r.with_name(n),
                                None => r,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    report.payload = to_json(&outs);
                    format_signatures(&outs)
                }
            };
            if let Some(out) = out {
                write_file(&out, &text)?;
            }
            report.text = text.trim_end().to_string();
        }
        Command::Gate { script } => {
            let text = std::fs::read_to_string(&script)
                .map_err(|e| Error::Io(format!("{}: {e}", script.display())))?;
            let trace = gate::run_gate_script(&text, script.parent(), mode)?;
            report.text = format_signatures(&[trace.result.clone()]).trim_end().to_string();
            report.payload = to_json(&trace);
        }
    }
    Ok(())
}

/// Parse `argv` (including the program name), run the command, and return
/// the report with the process exit code: 0 on success, 1 on domain
/// errors, 2 on usage errors.
pub fn dispatch<I, T>(argv: I) -> (RunReport, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = RunReport::new(echo);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            report.text = e.render().to_string().trim_end().to_string();
            report.payload = json!({ "error": report.text });
            return (report, code);
        }
    };
    report.json = cli.json;
    if let Some(n) = cli.threads {
        // a pool that is already set up (tests, repeated calls) stays as it is
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let start = Instant::now();
    let result = run(cli, &mut report);
    report.elapsed_ms = start.elapsed().as_millis();
    match result {
        Ok(()) => (report, 0),
        Err(e) => {
            report.text = format!("error: {e}");
            report.payload = json!({ "error": e.to_string(), "usage": e.is_usage() });
            (report, if e.is_usage() { 2 } else { 1 })
        }
    }
}
