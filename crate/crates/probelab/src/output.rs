//! CSV tables with `#` metadata lines, and JSON emission.
//!
//! Every CSV starts with `# schema: probelab/<kind>/v<N>` followed by
//! `# key: value` metadata lines, then an RFC-4180 header row and data rows.
//! Floats are written in Rust's shortest round-trip form, so identical
//! inputs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nhse_core::dynamics::{LatticeState, LyapunovEstimate, RayTrace};
use nhse_core::saddle::{SaddleReport, Verdict};
use nhse_core::spectra::SpectrumSet;

use crate::error::{LabError, LabResult};
use crate::scan::TransitionScan;
use crate::sweep::SweepResult;

/// Version of every CSV layout written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip decimal form of `x` (`NaN`, `inf` and `-inf` for
/// non-finite values).
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// An in-memory CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub meta: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(kind: &'static str, header: &[&'static str]) -> Self {
        Self {
            kind,
            meta: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, mut w: impl Write) -> LabResult<()> {
        let mut head = format!("# schema: probelab/{}/v{SCHEMA_VERSION}\n", self.kind);
        for (k, v) in &self.meta {
            // Keep metadata on one line whatever the value contains.
            head.push_str(&format!("# {k}: {}\n", v.replace(['\n', '\r'], " ")));
        }
        w.write_all(head.as_bytes())
            .map_err(|e| LabError::Serialize(e.to_string()))?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush().map_err(|e| LabError::Serialize(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> LabResult<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        String::from_utf8(buf).map_err(|e| LabError::Serialize(e.to_string()))
    }

    /// Writes the table to `path`, creating parent directories.
    pub fn save(&self, path: &Path) -> LabResult<()> {
        let text = self.to_csv_string()?;
        write_file(path, text.as_bytes())
    }
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: &[u8]) -> LabResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| LabError::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> LabResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Spectrum rows `{re_E, im_E, re_E2, im_E2, provenance, param, N, edge}`.
pub fn spectrum_table(label: &str, sets: &[SpectrumSet]) -> Table {
    let mut t = Table::new(
        "spectrum",
        &["re_E", "im_E", "re_E2", "im_E2", "provenance", "param", "N", "edge"],
    )
    .meta("model", label);
    for set in sets {
        let cells = set.cells.map(|n| n.to_string()).unwrap_or_default();
        for ((e, p), edge) in set.energies.iter().zip(&set.parameter).zip(&set.edge) {
            let e2 = e * e;
            t.push(vec![
                num(e.re),
                num(e.im),
                num(e2.re),
                num(e2.im),
                set.provenance.as_str().to_string(),
                num(*p),
                cells.clone(),
                edge.to_string(),
            ]);
        }
    }
    t
}

/// Saddle rows `{v, lambda_pred, n_saddles, dominant_re_beta,
/// dominant_im_beta, dominant_radius, verdict}`.
pub fn saddle_table(label: &str, reports: &[SaddleReport], verdict: Verdict) -> Table {
    let mut t = Table::new(
        "saddle",
        &[
            "v",
            "lambda_pred",
            "n_saddles",
            "dominant_re_beta",
            "dominant_im_beta",
            "dominant_radius",
            "verdict",
        ],
    )
    .meta("model", label);
    for r in reports {
        let (re, im, radius) = match r.dominant_saddle() {
            Some(s) => (num(s.beta_s.re), num(s.beta_s.im), num(s.beta_s.norm())),
            None => (num(f64::NAN), num(f64::NAN), num(f64::NAN)),
        };
        t.push(vec![
            num(r.velocity),
            num(r.lambda_pred),
            r.saddles.len().to_string(),
            re,
            im,
            radius,
            verdict.as_str().to_string(),
        ]);
    }
    t
}

/// Sweep rows `{v, lambda_sim, lambda_pred, abs_diff, near_kink}` with the
/// peak velocities and verdicts as metadata.
pub fn sweep_table(res: &SweepResult) -> Table {
    let params: Vec<String> = res.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
    let mut t = Table::new("sweep", &["v", "lambda_sim", "lambda_pred", "abs_diff", "near_kink"])
        .meta("model", &res.label)
        .meta("params", params.join(" "))
        .meta("v_m_sim", num(res.v_m_sim))
        .meta("v_m_pred", num(res.v_m_pred))
        .meta("lambda_max", num(res.lambda_max))
        .meta("lambda_max_velocity", num(res.lambda_max_velocity))
        .meta("verdict_dynamics", res.verdict_dynamics.as_str())
        .meta("verdict_saddle", res.verdict_saddle.as_str());
    for i in 0..res.v_grid.len() {
        t.push(vec![
            num(res.v_grid[i]),
            num(res.lambda_sim[i]),
            num(res.lambda_pred[i]),
            num(res.abs_diff[i]),
            res.near_kink(i, 2).to_string(),
        ]);
    }
    t
}

/// Lyapunov-fit rows `{v, lambda_sim, stderr, t_lo, t_hi, n_points,
/// truncated}`.
pub fn lyapunov_table(label: &str, estimates: &[(f64, Result<LyapunovEstimate, String>)]) -> Table {
    let mut t = Table::new(
        "lyapunov",
        &["v", "lambda_sim", "stderr", "t_lo", "t_hi", "n_points", "truncated"],
    )
    .meta("model", label);
    for (v, e) in estimates {
        match e {
            Ok(e) => t.push(vec![
                num(*v),
                num(e.lambda),
                num(e.stderr),
                num(e.fit_window.0),
                num(e.fit_window.1),
                e.n_points.to_string(),
                e.truncated.to_string(),
            ]),
            Err(_) => t.push(vec![
                num(*v),
                num(f64::NAN),
                num(f64::NAN),
                num(f64::NAN),
                num(f64::NAN),
                "0".into(),
                "false".into(),
            ]),
        }
    }
    t
}

/// Ray rows `{v, t, log_abs_psi}`.
pub fn ray_table(label: &str, traces: &[RayTrace]) -> Table {
    let mut t = Table::new("ray", &["v", "t", "log_abs_psi"]).meta("model", label);
    for tr in traces {
        for &(time, y) in &tr.samples {
            t.push(vec![num(tr.velocity), num(time), num(y)]);
        }
    }
    t
}

/// Trajectory rows `{t, n, re_a, im_a, re_b, im_b, log_scale}`; `n` is the
/// cell index relative to `seed`.
pub fn trajectory_table(label: &str, snapshots: &[LatticeState], seed: usize) -> Table {
    let mut t = Table::new("trajectory", &["t", "n", "re_a", "im_a", "re_b", "im_b", "log_scale"]).meta("model", label);
    for s in snapshots {
        for n in 0..s.cells {
            t.push(vec![
                num(s.time),
                (n as i64 - seed as i64).to_string(),
                num(s.a[n].re),
                num(s.a[n].im),
                num(s.b[n].re),
                num(s.b[n].im),
                num(s.log_scale),
            ]);
        }
    }
    t
}

/// Scan rows `{delta, lambda0_sim, lambda0_theory}`.
pub fn scan_table(scan: &TransitionScan) -> Table {
    let mut t = Table::new("scan", &["delta", "lambda0_sim", "lambda0_theory"])
        .meta("model", "model_iii")
        .meta("t", num(scan.t))
        .meta("tp", num(scan.tp))
        .meta("critical_delta", num(scan.critical_delta));
    for i in 0..scan.delta_grid.len() {
        t.push(vec![
            num(scan.delta_grid[i]),
            num(scan.lambda0_sim[i]),
            num(scan.lambda0_theory[i]),
        ]);
    }
    t
}

/// `dir/name`.
pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
