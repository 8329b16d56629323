//! Command-line front end.
//!
//! ```text
//! probelab spectrum   --model model_i --bc obc --cells 60
//! probelab saddle     --model model_ii --v 0.5
//! probelab lyapunov   --model model_iii --delta 1 --v 0,0.5
//! probelab sweep      --model model_ii --out results
//! probelab scan-delta --t 0.6 --tp 1
//! probelab verdict    --model model_ii --t 0.6 --tp 1 --delta 1
//! probelab reproduce  fig4 --out out
//! ```
//!
//! `--config FILE` reads a JSON object whose keys are flag names (`"cells":
//! 60`, `"v_min": -2`, `"sequential": true`); its entries are inserted
//! before the command-line flags, so explicit flags win. Results go to
//! standard output unless `--out DIR` is given.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nhse_core::dynamics::{
    evolve, lyapunov_sweep, ray_traces, Boundary, Component, EvolveOptions, LatticeState, LyapunovEstimate,
    LyapunovOptions,
};
use nhse_core::model::{load_model_file, named_from_params, TwoBandModel};
use nhse_core::par::Execution;
use nhse_core::saddle::{nhse_verdict, saddle_sweep, SaddleOptions, SaddleReport, Verdict, VerdictReport};
use nhse_core::spectra::{
    default_angle_grid, default_radius_grid, gbz_spectrum, obc_spectrum, obc_spectrum_gbz, pbc_spectrum, ObcMethod,
    SpectrumSet,
};
use serde::Serialize;

use crate::error::{LabError, LabResult, EXIT_OK, EXIT_USAGE};
use crate::output::{
    lyapunov_table, num, ray_table, saddle_table, scan_table, spectrum_table, sweep_table, to_json,
    trajectory_table, write_file, Table,
};
use crate::reproduce::{reproduce, FigureId, ReproduceOptions};
use crate::scan::{scan_delta_model3, ScanOptions};
use crate::sweep::{sweep_lyapunov, uniform_grid, SweepOptions, SweepResult};

/// Probes of the non-Hermitian skin effect in two-band lattices.
#[derive(Debug, Parser)]
#[command(name = "probelab", version, args_override_self = true)]
pub struct Cli {
    /// JSON object of flag values; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Periodic and open-chain energy spectra.
    #[command(allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Saddle points and predicted Lyapunov exponents per drift velocity.
    #[command(allow_negative_numbers = true)]
    Saddle(SaddleArgs),
    /// Lyapunov exponents fitted from real-space dynamics.
    #[command(allow_negative_numbers = true)]
    Lyapunov(LyapunovArgs),
    /// Simulated versus predicted λ(v) over a velocity grid.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Zero-velocity growth rate of model III across a δ grid.
    #[command(allow_negative_numbers = true)]
    ScanDelta(ScanArgs),
    /// Skin-effect verdicts from the saddle criterion and from dynamics.
    #[command(allow_negative_numbers = true)]
    Verdict(VerdictArgs),
    /// Data and manifest for one of the reference figures.
    #[command(allow_negative_numbers = true)]
    Reproduce(ReproduceArgs),
}

/// Subcommand names, used to place `--config` entries.
const SUBCOMMANDS: [&str; 7] = ["spectrum", "saddle", "lyapunov", "sweep", "scan-delta", "verdict", "reproduce"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ModelName {
    ModelI,
    ModelIi,
    ModelIii,
    ModelIv,
    ModelAppC,
}

impl ModelName {
    fn builder(self) -> &'static str {
        match self {
            ModelName::ModelI => "model_i",
            ModelName::ModelIi => "model_ii",
            ModelName::ModelIii => "model_iii",
            ModelName::ModelIv => "model_iv",
            ModelName::ModelAppC => "model_app_c",
        }
    }

    /// Parameter names and the defaults of the first figure (model I–IV)
    /// and of the first cusp-model case.
    fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            ModelName::ModelI => &[("t", 1.0), ("tp", 1.5), ("delta", 1.0)],
            ModelName::ModelIi => &[("t", 0.6), ("tp", 1.0), ("delta", 1.0)],
            ModelName::ModelIii => &[("t", 0.6), ("tp", 1.0), ("delta", 0.3)],
            ModelName::ModelIv => &[("t1", 1.0), ("t2", 1.5), ("t3", 0.2), ("delta", 0.35)],
            ModelName::ModelAppC => &[("t", -0.5), ("delta", 1.0)],
        }
    }
}

/// Model selection: a named builder with parameters, or a JSON file.
#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    /// Named model builder; parameters default to the reference values.
    #[arg(long, value_enum, required_unless_present = "model_file")]
    pub model: Option<ModelName>,
    /// JSON model definition (takes precedence over --model).
    #[arg(long, value_name = "FILE")]
    pub model_file: Option<PathBuf>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub tp: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub t3: Option<f64>,
}

impl ModelArgs {
    pub fn build(&self) -> LabResult<TwoBandModel> {
        if let Some(path) = &self.model_file {
            return Ok(load_model_file(path).map_err(|e| LabError::io(path, e))??);
        }
        let name = self.model.ok_or_else(|| LabError::Usage("--model or --model-file is required".into()))?;
        let given = [
            ("t", self.t),
            ("tp", self.tp),
            ("delta", self.delta),
            ("t1", self.t1),
            ("t2", self.t2),
            ("t3", self.t3),
        ];
        let defaults = name.defaults();
        let mut params: BTreeMap<String, f64> = defaults.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        for (key, value) in given {
            if let Some(v) = value {
                if !defaults.iter().any(|&(k, _)| k == key) {
                    return Err(LabError::Usage(format!("--{key} does not apply to {}", name.builder())));
                }
                params.insert(key.to_string(), v);
            }
        }
        Ok(named_from_params(name.builder(), &params)?.build())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Where and how results are written.
#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Output directory (standard output when omitted).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Run grid workloads on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
}

impl OutputArgs {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    /// Writes `table` or `json` (per `--format`) to `<out>/<name>.<ext>`, or
    /// to standard output.
    fn emit(&self, name: &str, table: &Table, json: &impl Serialize) -> LabResult<()> {
        let (text, ext) = match self.format {
            Format::Csv => (table.to_csv_string()?, "csv"),
            Format::Json => (to_json(json)?, "json"),
        };
        match &self.out {
            Some(dir) => {
                let path = dir.join(format!("{name}.{ext}"));
                write_file(&path, text.as_bytes())?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    fn require_out(&self, flag: &str) -> LabResult<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| LabError::Usage(format!("{flag} needs --out")))
    }
}

/// Velocity grid.
#[derive(Clone, Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -2.5)]
    pub v_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub v_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dv: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComponentArg {
    A,
    B,
}

/// Real-space propagation and fit settings.
#[derive(Clone, Debug, Args)]
pub struct DynamicsArgs {
    /// Chain length in unit cells.
    #[arg(long, default_value_t = 501)]
    pub cells: usize,
    #[arg(long, default_value_t = 80.0)]
    pub t_end: f64,
    /// Time step (chosen from the spectral radius when omitted).
    #[arg(long)]
    pub dt: Option<f64>,
    /// The fit window starts at this fraction of --t-end.
    #[arg(long, default_value_t = 0.4)]
    pub fit_lo_frac: f64,
    #[arg(long, value_enum, default_value_t = ComponentArg::A)]
    pub component: ComponentArg,
    #[arg(long, default_value_t = 0.05)]
    pub sample_interval: f64,
}

impl DynamicsArgs {
    fn options(&self) -> LyapunovOptions {
        LyapunovOptions {
            cells: self.cells,
            t_end: self.t_end,
            dt: self.dt,
            fit_lo_frac: self.fit_lo_frac,
            component: match self.component {
                ComponentArg::A => Component::A,
                ComponentArg::B => Component::B,
            },
            sample_interval: self.sample_interval,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bc {
    Pbc,
    Obc,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Full,
    H0,
    ClosedForm,
    Gbz,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Bc::Obc)]
    pub bc: Bc,
    /// Open-chain length in unit cells.
    #[arg(long, default_value_t = 60)]
    pub cells: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Full)]
    pub method: MethodArg,
    /// Momentum samples of the periodic spectrum.
    #[arg(long, default_value_t = 512)]
    pub num_k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SaddleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Single drift velocity (overrides the grid).
    #[arg(long)]
    pub v: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub tol_radius: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LyapunovArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated drift velocities.
    #[arg(long, default_value = "0")]
    pub v: String,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    /// Also write the sampled rays (`ray.csv`, needs --out).
    #[arg(long)]
    pub rays: bool,
    /// Also write lattice snapshots every this many time units
    /// (`trajectory.csv`, needs --out).
    #[arg(long, value_name = "INTERVAL")]
    pub trajectory: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub tol_radius: f64,
    /// Plateau tolerance when locating v_m.
    #[arg(long, default_value_t = 0.02)]
    pub plateau_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl SweepArgs {
    fn options(&self) -> SweepOptions {
        sweep_options(&self.grid, &self.dynamics, self.tol_radius, self.plateau_tol, self.output.exec())
    }
}

fn sweep_options(grid: &GridArgs, dynamics: &DynamicsArgs, tol_radius: f64, plateau_tol: f64, exec: Execution) -> SweepOptions {
    SweepOptions {
        v_min: grid.v_min,
        v_max: grid.v_max,
        dv: grid.dv,
        lyapunov: dynamics.options(),
        saddle: SaddleOptions {
            radius_tol: tol_radius,
            ..SaddleOptions::default()
        },
        tol_radius,
        plateau_tol,
        exec,
    }
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 0.6)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tp: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 1.2)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta_step: f64,
    /// λ₀ below this value counts as the unbroken phase.
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerdictArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub tol_radius: f64,
    /// Skip the λ(v) sweep and report the saddle criterion only.
    #[arg(long)]
    pub no_dynamics: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
    #[arg(long, default_value_t = 0.02)]
    pub plateau_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Figure id, or `all`.
    pub figure: String,
    /// Output root; files go to `<out>/<figure>/`.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub sequential: bool,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match expand_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Replaces `--config FILE` by the flags it lists, placed right after the
/// subcommand name so that later command-line flags override them.
pub fn expand_config(argv: Vec<OsString>) -> LabResult<Vec<OsString>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config: Option<PathBuf> = None;
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            let path = iter.next().ok_or_else(|| LabError::Usage("--config needs a file".into()))?;
            config = Some(path.into());
        } else if let Some(path) = text.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
    let flags = config_flags(&text)?;
    let at = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map_or(rest.len(), |i| i + 1);
    rest.splice(at..at, flags.into_iter().map(OsString::from));
    Ok(rest)
}

/// Flags encoded by a JSON config object. Keys may use `_` or `-`; `true`
/// becomes a bare switch, `false` and `null` are dropped, arrays are joined
/// with commas.
pub fn config_flags(text: &str) -> LabResult<Vec<String>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| LabError::Usage(format!("config file: {e}")))?;
    let serde_json::Value::Object(map) = value else {
        return Err(LabError::Usage("config file must hold a JSON object".into()));
    };
    let scalar = |key: &str, v: &serde_json::Value| -> LabResult<String> {
        match v {
            serde_json::Value::Number(n) => Ok(n.to_string()),
            serde_json::Value::String(s) => Ok(s.clone()),
            _ => Err(LabError::Usage(format!("config key `{key}` must be a number, string or list"))),
        }
    };
    let mut flags = Vec::new();
    for (key, v) in &map {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            serde_json::Value::Bool(true) => flags.push(flag),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Array(items) => {
                let parts = items.iter().map(|x| scalar(key, x)).collect::<LabResult<Vec<_>>>()?;
                flags.push(format!("{flag}={}", parts.join(",")));
            }
            other => flags.push(format!("{flag}={}", scalar(key, other)?)),
        }
    }
    Ok(flags)
}

fn execute(command: Command) -> LabResult<()> {
    match command {
        Command::Spectrum(a) => spectrum(&a),
        Command::Saddle(a) => saddle(&a),
        Command::Lyapunov(a) => lyapunov(&a),
        Command::Sweep(a) => {
            let model = a.model.build()?;
            let res = sweep_lyapunov(&model, &a.options())?;
            report_sweep(&res);
            a.output.emit("sweep", &sweep_table(&res), &res)
        }
        Command::ScanDelta(a) => {
            if !(a.delta_step > 0.0) || !(a.delta_max > a.delta_min) {
                return Err(LabError::Usage("need --delta-step > 0 and --delta-max > --delta-min".into()));
            }
            let opts = ScanOptions {
                lyapunov: a.dynamics.options(),
                threshold: a.threshold,
                exec: a.output.exec(),
            };
            let grid = uniform_grid(a.delta_min, a.delta_max, a.delta_step);
            let scan = scan_delta_model3(a.t, a.tp, &grid, &opts)?;
            eprintln!("critical delta: {}", num(scan.critical_delta));
            a.output.emit("scan", &scan_table(&scan), &scan)
        }
        Command::Verdict(a) => verdict(&a),
        Command::Reproduce(a) => {
            let figures: Vec<FigureId> = if a.figure.eq_ignore_ascii_case("all") {
                FigureId::ALL.to_vec()
            } else {
                vec![a.figure.parse()?]
            };
            let exec = if a.sequential { Execution::Sequential } else { Execution::Parallel };
            let mut opts = ReproduceOptions::default();
            opts.sweep.exec = exec;
            opts.scan.exec = exec;
            for f in figures {
                for path in reproduce(f, &a.out, &opts)? {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
    }
}

fn spectrum(a: &SpectrumArgs) -> LabResult<()> {
    let model = a.model.build()?;
    let mut sets: Vec<SpectrumSet> = Vec::new();
    if matches!(a.bc, Bc::Pbc | Bc::Both) {
        sets.push(pbc_spectrum(&model, a.num_k)?);
    }
    if matches!(a.bc, Bc::Obc | Bc::Both) {
        sets.push(match a.method {
            MethodArg::Full => obc_spectrum(&model, a.cells, ObcMethod::Full)?,
            MethodArg::H0 => obc_spectrum(&model, a.cells, ObcMethod::H0)?,
            MethodArg::ClosedForm => obc_spectrum(&model, a.cells, ObcMethod::ClosedForm)?,
            MethodArg::Gbz => {
                let radii = nhse_core::saddle::saddle_points(&model, 0.0)?.radii();
                let samples = obc_spectrum_gbz(
                    &model,
                    &default_radius_grid(&radii, 240),
                    &default_angle_grid(720),
                    1e-7,
                    a.output.exec(),
                )?;
                gbz_spectrum(&samples)
            }
        });
    }
    a.output.emit("spectrum", &spectrum_table(&model.label, &sets), &sets)
}

fn saddle(a: &SaddleArgs) -> LabResult<()> {
    let model = a.model.build()?;
    let grid = match a.v {
        Some(v) => vec![v],
        None => SweepOptions {
            v_min: a.grid.v_min,
            v_max: a.grid.v_max,
            dv: a.grid.dv,
            ..SweepOptions::default()
        }
        .grid()?,
    };
    let opts = SaddleOptions {
        radius_tol: a.tol_radius,
        ..SaddleOptions::default()
    };
    let reports: Vec<SaddleReport> = saddle_sweep(&model, &grid, &opts, a.output.exec())
        .into_iter()
        .collect::<Result<_, _>>()?;
    let verdict = nhse_verdict(&model, a.tol_radius, 1024)?.verdict;
    a.output.emit("saddle", &saddle_table(&model.label, &reports, verdict), &reports)
}

#[derive(Serialize)]
struct LyapunovRow {
    v: f64,
    estimate: Option<LyapunovEstimate>,
    error: Option<String>,
}

fn parse_list(flag: &str, text: &str) -> LabResult<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| LabError::Usage(format!("{flag}: `{s}` is not a finite number")))
        })
        .collect::<LabResult<Vec<f64>>>()?;
    Ok(values)
}

fn lyapunov(a: &LyapunovArgs) -> LabResult<()> {
    let model = a.model.build()?;
    let velocities = parse_list("--v", &a.v)?;
    let opts = a.dynamics.options();
    if a.rays {
        a.output.require_out("--rays")?;
    }
    if a.trajectory.is_some() {
        a.output.require_out("--trajectory")?;
    }
    let estimates = lyapunov_sweep(&model, &velocities, &opts, a.output.exec())?;
    let rows: Vec<(f64, Result<LyapunovEstimate, String>)> = velocities
        .iter()
        .zip(estimates)
        .map(|(&v, e)| {
            if let Err(err) = &e {
                eprintln!("v = {v}: {err}");
            }
            (v, e.map_err(|e| e.to_string()))
        })
        .collect();
    let json: Vec<LyapunovRow> = rows
        .iter()
        .map(|(v, e)| LyapunovRow {
            v: *v,
            estimate: e.as_ref().ok().copied(),
            error: e.as_ref().err().cloned(),
        })
        .collect();
    a.output.emit("lyapunov", &lyapunov_table(&model.label, &rows), &json)?;
    if a.rays {
        let traces = ray_traces(&model, &velocities, &opts)?;
        a.output.emit("ray", &ray_table(&model.label, &traces), &traces)?;
    }
    if let Some(interval) = a.trajectory {
        opts.validate()?;
        if !(interval > 0.0) {
            return Err(LabError::Usage("--trajectory interval must be positive".into()));
        }
        // Shrink the step so that the recording interval is a whole number
        // of steps.
        let dt = opts.dt.unwrap_or_else(|| nhse_core::dynamics::auto_dt(&model));
        let per_record = (interval / dt - 1e-9).ceil().max(1.0);
        let initial = LatticeState::centered(opts.cells);
        let traj = evolve(
            &model,
            &initial,
            &EvolveOptions {
                t_end: opts.t_end,
                dt: interval / per_record,
                boundary: Boundary::Obc,
                record_every: per_record as usize,
            },
        )?;
        let table = trajectory_table(&model.label, &traj.snapshots, initial.center());
        a.output.emit("trajectory", &table, &traj)?;
    }
    Ok(())
}

fn report_sweep(res: &SweepResult) {
    eprintln!(
        "v_m (sim) = {}, v_m (pred) = {}, dynamics: {}, saddle criterion: {}",
        num(res.v_m_sim),
        num(res.v_m_pred),
        res.verdict_dynamics.as_str(),
        res.verdict_saddle.as_str()
    );
}

#[derive(Serialize)]
struct VerdictOutput<'a> {
    label: &'a str,
    verdict_saddle: Verdict,
    saddle: &'a VerdictReport,
    verdict_dynamics: Option<Verdict>,
    v_m_sim: Option<f64>,
    summary: &'a str,
}

/// One-line summary such as
/// `NHSE (saddle criterion: radius 2.0000; dynamics: v_m ≠ 0, v_m = 0.95)`.
pub fn verdict_line(report: &VerdictReport, dynamics: Option<(Verdict, f64)>) -> String {
    let saddle = match report
        .saddle_radii
        .iter()
        .copied()
        .max_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()))
    {
        Some(r) => {
            let cusp = if report.cusps.iter().any(|&c| c) { ", cusp on the unit circle" } else { "" };
            format!("radius {r:.4}{cusp}")
        }
        None => format!("no saddle, periodic spectrum {:?}", report.geometry),
    };
    let dynamics = match dynamics {
        Some((Verdict::Nhse, v_m)) => format!("v_m ≠ 0, v_m = {v_m:.3}"),
        Some((_, v_m)) => format!("v_m = 0 within one grid step, v_m = {v_m:.3}"),
        None => "skipped".to_string(),
    };
    format!("{} (saddle criterion: {saddle}; dynamics: {dynamics})", report.verdict.as_str())
}

fn verdict(a: &VerdictArgs) -> LabResult<()> {
    let model = a.model.build()?;
    let report = nhse_verdict(&model, a.tol_radius, 1024)?;
    let dynamics = if a.no_dynamics {
        None
    } else {
        let opts = sweep_options(&a.grid, &a.dynamics, a.tol_radius, a.plateau_tol, a.output.exec());
        let res = sweep_lyapunov(&model, &opts)?;
        Some((res.verdict_dynamics, res.v_m_sim))
    };
    let line = verdict_line(&report, dynamics);
    println!("{line}");
    if a.output.out.is_some() {
        let mut table = Table::new(
            "verdict",
            &["verdict_saddle", "max_radius_offset", "verdict_dynamics", "v_m_sim"],
        )
        .meta("model", &model.label);
        table.push(vec![
            report.verdict.as_str().into(),
            num(report.max_radius_offset),
            dynamics.map_or(String::new(), |(v, _)| v.as_str().into()),
            num(dynamics.map_or(f64::NAN, |(_, v)| v)),
        ]);
        let json = VerdictOutput {
            label: &model.label,
            verdict_saddle: report.verdict,
            saddle: &report,
            verdict_dynamics: dynamics.map(|d| d.0),
            v_m_sim: dynamics.map(|d| d.1),
            summary: &line,
        };
        a.output.emit("verdict", &table, &json)?;
    }
    Ok(())
}
