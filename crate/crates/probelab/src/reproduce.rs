//! Figure reproduction: CSV data plus a JSON manifest per figure.
//!
//! Every figure writes into `<out>/<figure id>/`. Files contain no
//! timestamps or host information, so repeated runs with the same options
//! are byte-identical.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nhse_core::dynamics::{fit_trace, ray_traces, LyapunovOptions};
use nhse_core::model::{model_app_c, model_i, model_ii, model_iii, model_iv, TwoBandModel};
use nhse_core::saddle::lyapunov_predicted;
use nhse_core::spectra::{obc_spectrum, pbc_spectrum, ObcMethod, SpectrumSet};

use crate::error::{LabError, LabResult};
use crate::output::{num, ray_table, scan_table, spectrum_table, sweep_table, to_json, write_file, Table};
use crate::scan::{scan_delta_model3, ScanOptions};
use crate::sweep::{model_params, sweep_lyapunov, uniform_grid, SweepOptions};

/// The reproducible figures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Fig1c,
    Fig1d,
    Fig1e,
    Fig2,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig4,
    Fig5,
    Fig8,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig1c,
        FigureId::Fig1d,
        FigureId::Fig1e,
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1c => "fig1c",
            FigureId::Fig1d => "fig1d",
            FigureId::Fig1e => "fig1e",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3a => "fig3a",
            FigureId::Fig3b => "fig3b",
            FigureId::Fig3c => "fig3c",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig8 => "fig8",
        }
    }

    /// Comma-separated list of valid ids, for error messages.
    pub fn valid_ids() -> String {
        Self::ALL.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = LabError;

    fn from_str(s: &str) -> LabResult<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| LabError::Usage(format!("unknown figure `{s}`; valid ids: {}", Self::valid_ids())))
    }
}

/// The four models of the first figure, at its parameter values.
pub fn fig1_models() -> [TwoBandModel; 4] {
    [
        model_i(1.0, 1.5, 1.0),
        model_ii(0.6, 1.0, 1.0),
        model_iii(0.6, 1.0, 0.3),
        model_iv(1.0, 1.5, 0.2, 0.35),
    ]
}

/// The two cusp-model parameter sets `(t, δ)`.
pub const APP_C_PARAMS: [(f64, f64); 2] = [(-0.5, 1.0), (-1.0, 1.0)];

/// Drift velocities of the ray traces in the second figure.
pub const FIG2_VELOCITIES: [f64; 6] = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5];

/// `δ` values of the fifth figure (models II/III share their spectra).
pub const FIG5_DELTAS: [f64; 4] = [2.0, 0.9, 0.5, 0.2];

/// Options shared by all figures.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ReproduceOptions {
    pub sweep: SweepOptions,
    pub scan: ScanOptions,
    /// Open-chain length of dense spectra.
    pub obc_cells: usize,
    /// `k` samples of periodic spectra.
    pub num_k: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            sweep: SweepOptions::default(),
            scan: ScanOptions::default(),
            obc_cells: 60,
            num_k: 512,
        }
    }
}

struct Writer<'a> {
    dir: PathBuf,
    figure: FigureId,
    opts: &'a ReproduceOptions,
    files: Vec<String>,
    models: Vec<serde_json::Value>,
    summary: serde_json::Map<String, serde_json::Value>,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, table: &Table) -> LabResult<()> {
        table.save(&self.dir.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn model(&mut self, model: &TwoBandModel) {
        let params: serde_json::Map<String, serde_json::Value> =
            model_params(model).into_iter().map(|(k, v)| (k, v.into())).collect();
        let entry = serde_json::json!({ "label": model.label, "params": params });
        if !self.models.contains(&entry) {
            self.models.push(entry);
        }
    }

    fn spectra(&mut self, model: &TwoBandModel, name: &str, extra: &[ObcMethod]) -> LabResult<()> {
        self.model(model);
        let mut sets: Vec<SpectrumSet> = vec![pbc_spectrum(model, self.opts.num_k)?];
        sets.push(obc_spectrum(model, self.opts.obc_cells, ObcMethod::Full)?);
        for &m in extra {
            sets.push(obc_spectrum(model, self.opts.obc_cells, m)?);
        }
        self.table(name, &spectrum_table(&model.label, &sets))
    }

    fn sweep(&mut self, model: &TwoBandModel, name: &str) -> LabResult<()> {
        self.model(model);
        let res = sweep_lyapunov(model, &self.opts.sweep)?;
        self.summary.insert(
            name.trim_end_matches(".csv").to_string(),
            serde_json::json!({
                "v_m_sim": res.v_m_sim,
                "v_m_pred": res.v_m_pred,
                "lambda_max": res.lambda_max,
                "max_lambda_sim": res.max_lambda_sim(),
                "verdict_dynamics": res.verdict_dynamics.as_str(),
                "verdict_saddle": res.verdict_saddle.as_str(),
            }),
        );
        self.table(name, &sweep_table(&res))
    }

    fn finish(self) -> LabResult<Vec<PathBuf>> {
        let manifest = serde_json::json!({
            "figure": self.figure.as_str(),
            "schema_version": crate::output::SCHEMA_VERSION,
            "files": self.files,
            "models": self.models,
            "options": self.opts,
            "tolerances": {
                "lambda_agreement": 0.05,
                "lambda_agreement_near_transition": 0.15,
                "critical_delta": 0.05,
                "saddle_radius": self.opts.sweep.tol_radius,
            },
            "summary": self.summary,
            "versions": {
                "probelab": env!("CARGO_PKG_VERSION"),
                "nhse-core": nhse_core::VERSION,
            },
        });
        let path = self.dir.join("manifest.json");
        write_file(&path, to_json(&manifest)?.as_bytes())?;
        let mut out: Vec<PathBuf> = self.files.iter().map(|f| self.dir.join(f)).collect();
        out.push(path);
        Ok(out)
    }
}

fn file_stem(model: &TwoBandModel) -> String {
    model
        .origin
        .map(|o| o.builder_name().to_string())
        .unwrap_or_else(|| "custom".into())
}

/// Writes the data of `figure` under `out/<figure>/` and returns the paths
/// written (the manifest last).
pub fn reproduce(figure: FigureId, out: &Path, opts: &ReproduceOptions) -> LabResult<Vec<PathBuf>> {
    let mut w = Writer {
        dir: out.join(figure.as_str()),
        figure,
        opts,
        files: Vec::new(),
        models: Vec::new(),
        summary: serde_json::Map::new(),
    };
    match figure {
        FigureId::Fig1c | FigureId::Fig1d => {
            for m in fig1_models() {
                w.spectra(&m, &format!("spectrum_{}.csv", file_stem(&m)), &[])?;
            }
        }
        FigureId::Fig1e => {
            for m in fig1_models() {
                w.sweep(&m, &format!("sweep_{}.csv", file_stem(&m)))?;
            }
        }
        FigureId::Fig2 => {
            let m = model_ii(0.6, 1.0, 1.0);
            w.model(&m);
            fig2(&mut w, &m, &opts.sweep.lyapunov)?;
        }
        FigureId::Fig3a | FigureId::Fig3b | FigureId::Fig3c => {
            let [m1, m2, m3, _] = fig1_models();
            let m = match figure {
                FigureId::Fig3a => m1,
                FigureId::Fig3b => m2,
                _ => m3,
            };
            w.sweep(&m, &format!("sweep_{}.csv", file_stem(&m)))?;
        }
        FigureId::Fig4 => {
            let grid = uniform_grid(0.1, 1.2, 0.05);
            let scan = scan_delta_model3(0.6, 1.0, &grid, &opts.scan)?;
            w.model(&model_iii(0.6, 1.0, 0.6));
            w.summary.insert("critical_delta".into(), scan.critical_delta.into());
            w.table("scan_model_iii.csv", &scan_table(&scan))?;
        }
        FigureId::Fig5 => {
            for delta in FIG5_DELTAS {
                let m = model_ii(0.6, 1.0, delta);
                w.spectra(&m, &format!("spectrum_delta_{delta}.csv"), &[ObcMethod::ClosedForm])?;
            }
        }
        FigureId::Fig8 => {
            for (i, (t, delta)) in APP_C_PARAMS.into_iter().enumerate() {
                let m = model_app_c(t, delta);
                let tag = ["a", "c"][i];
                w.spectra(&m, &format!("spectrum_{tag}_t{t}.csv"), &[])?;
                w.sweep(&m, &format!("sweep_{}_t{t}.csv", ["b", "d"][i]))?;
            }
        }
    }
    w.finish()
}

/// Ray traces for a few velocities plus fitted and predicted slopes.
fn fig2(w: &mut Writer<'_>, m: &TwoBandModel, lyap: &LyapunovOptions) -> LabResult<()> {
    let traces = ray_traces(m, &FIG2_VELOCITIES, lyap)?;
    w.table("ray_model_ii.csv", &ray_table(&m.label, &traces))?;
    let mut slopes = Table::new("slopes", &["v", "lambda_fit", "lambda_pred"]).meta("model", &m.label);
    for tr in &traces {
        let fit = fit_trace(tr, lyap.fit_lo_frac * lyap.t_end, lyap.t_end)
            .map(|e| e.lambda)
            .unwrap_or(f64::NAN);
        let pred = lyapunov_predicted(m, tr.velocity)?;
        slopes.push(vec![num(tr.velocity), num(fit), num(pred)]);
    }
    w.table("slopes_model_ii.csv", &slopes)
}
