use std::io::Write;

use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::error::{Error, Result};

/// States with Euclidean norm above this are reported as divergent.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub time: f64,
    pub norm: f64,
}

/// Uniformly sampled solution curve. On divergence the samples stop at the
/// last state inside the guard.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub step: f64,
    pub divergence: Option<Divergence>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Number of steps and the uniform step actually used: the requested step,
/// shrunk just enough to land on `horizon` exactly.
fn step_grid(step: f64, horizon: f64) -> (usize, f64) {
    let ratio = horizon / step;
    let nearest = ratio.round();
    let count = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    let count = count.max(1.0) as usize;
    (count, horizon / count as f64)
}

/// Classical fixed-step fourth-order Runge–Kutta.
///
/// The step is uniform; when `horizon / step` is not an integer it is reduced
/// so the last sample falls on `horizon`.
pub fn simulate(f: &VectorField, x0: &[f64], step: f64, horizon: f64) -> Result<Trajectory> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Parameter(format!("step must be positive, got {step}")));
    }
    if !(horizon >= step) || !horizon.is_finite() {
        return Err(Error::Parameter(format!(
            "horizon {horizon} must be at least one step ({step})"
        )));
    }
    if x0.len() != f.n() {
        return Err(Error::Dimension {
            expected: f.n(),
            found: x0.len(),
        });
    }
    let (count, h) = step_grid(step, horizon);
    let n = f.n();
    let mut times = Vec::with_capacity(count + 1);
    let mut states = Vec::with_capacity(count + 1);
    times.push(0.0);
    states.push(x0.to_vec());
    let mut x = x0.to_vec();
    let mut tmp = vec![0.0; n];
    let mut divergence = None;
    for k in 1..=count {
        let k1 = f.eval(&x);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        let k2 = f.eval(&tmp);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        let k3 = f.eval(&tmp);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        let k4 = f.eval(&tmp);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = k as f64 * h;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm <= DIVERGENCE_GUARD) {
            divergence = Some(Divergence { time: t, norm });
            break;
        }
        times.push(t);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        step: h,
        divergence,
    })
}

/// Writes `t,x1,...,xn[,extra...]` rows.
pub fn write_csv<W: Write>(
    mut w: W,
    traj: &Trajectory,
    extra: &[(&str, Vec<f64>)],
) -> std::io::Result<()> {
    let n = traj.states.first().map(Vec::len).unwrap_or(0);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x{i}")));
    header.extend(extra.iter().map(|(name, _)| name.to_string()));
    writeln!(w, "{}", header.join(","))?;
    for (k, (t, x)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(x.iter().map(f64::to_string));
        row.extend(extra.iter().map(|(_, col)| col[k].to_string()));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
