//! Amplitudes sampled along space-time rays `n = vt`.

use super::{LatticeState, Trajectory};

/// Minimum distance (in cells) a ray keeps from the chain ends.
pub const SAFE_MARGIN: usize = 10;

/// Sublattice sampled along a ray.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Component {
    #[default]
    A,
    B,
}

/// `log|ψ(t)|` along one ray.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RayTrace {
    pub velocity: f64,
    pub component: Component,
    /// `(t, log|ψ(t)|)` with strictly increasing `t`; the log includes the
    /// state's `log_scale`.
    pub samples: Vec<(f64, f64)>,
    /// Distinct sites (relative to the seed) in the order they were visited.
    pub sites_visited: Vec<i64>,
    /// Samples discarded because the amplitude was exactly zero or not finite.
    pub dropped: usize,
    /// Set when the ray left the safe interior: the last time it was inside.
    pub truncated_at: Option<f64>,
}

impl RayTrace {
    fn new(velocity: f64, component: Component) -> Self {
        Self {
            velocity,
            component,
            samples: Vec::new(),
            sites_visited: Vec::new(),
            dropped: 0,
            truncated_at: None,
        }
    }
}

/// Streams many rays out of one evolution.
///
/// Feed every state (in time order) to [`RayRecorder::observe`]; the site
/// sampled at time `t` is the nearest integer to `seed + vt`.
#[derive(Clone, Debug)]
pub struct RayRecorder {
    seed: usize,
    margin: usize,
    traces: Vec<RayTrace>,
}

impl RayRecorder {
    pub fn new(velocities: &[f64], seed: usize, component: Component, margin: usize) -> Self {
        Self {
            seed,
            margin,
            traces: velocities.iter().map(|&v| RayTrace::new(v, component)).collect(),
        }
    }

    pub fn observe(&mut self, state: &LatticeState) {
        let lo = self.margin as i64;
        let hi = state.cells as i64 - 1 - self.margin as i64;
        for trace in &mut self.traces {
            if trace.truncated_at.is_some() {
                continue;
            }
            if trace.samples.last().is_some_and(|&(t, _)| state.time <= t) {
                continue;
            }
            let offset = (trace.velocity * state.time).round() as i64;
            let site = self.seed as i64 + offset;
            if site < lo || site > hi {
                let last = trace.samples.last().map_or(state.time, |&(t, _)| t);
                trace.truncated_at = Some(last);
                continue;
            }
            let field = match trace.component {
                Component::A => &state.a,
                Component::B => &state.b,
            };
            let amp = field[site as usize].norm();
            if trace.sites_visited.last() != Some(&offset) {
                trace.sites_visited.push(offset);
            }
            let log_abs = amp.ln() + state.log_scale;
            if amp > 0.0 && log_abs.is_finite() {
                trace.samples.push((state.time, log_abs));
            } else {
                trace.dropped += 1;
            }
        }
    }

    pub fn finish(self) -> Vec<RayTrace> {
        self.traces
    }
}

/// Samples one ray out of a recorded trajectory seeded at cell `seed`.
pub fn sample_ray(trajectory: &Trajectory, seed: usize, v: f64, component: Component) -> RayTrace {
    let mut rec = RayRecorder::new(&[v], seed, component, SAFE_MARGIN);
    for s in &trajectory.snapshots {
        rec.observe(s);
    }
    rec.finish().pop().expect("one velocity recorded")
}
