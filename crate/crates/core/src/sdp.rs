//! Semidefinite feasibility problems and the interior-point adapter.
//!
//! A problem has PSD blocks `X_1, ..., X_k` and affine rows
//! `Σ value · X_b[i][j] = rhs`, written in upper-triangle coordinates (an
//! off-diagonal coordinate stands for both symmetric entries). The Gram
//! system is shifted, `P = I + P0` and `Q = I + Q0`, so the blocks are plain
//! PSD variables.
//!
//! # Text export
//!
//! [`SdpProblem::to_sdpa_text`] writes a sparse, SDPA-like layout:
//!
//! ```text
//! "comment lines start with a double quote or an asterisk"
//! <rows>
//! <blocks>
//! <size_1> <size_2> ...
//! <rhs_1> <rhs_2> ...
//! <row> <block> <i> <j> <value>
//! ...
//! ```
//!
//! Row, block and matrix indices are 1-based, `i <= j`, and each entry line
//! is one coefficient of one row; the objective is zero and not written.

use std::time::Instant;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::sosgram::{upper_coords, AffineGramSystem, Block};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdBlock {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpEntry {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpRow {
    pub entries: Vec<SdpEntry>,
    pub rhs: f64,
}

/// Pure feasibility problem over PSD blocks; the objective is zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    blocks: Vec<PsdBlock>,
    rows: Vec<SdpRow>,
}

impl SdpProblem {
    /// Validates indices and puts every row in canonical form: entries sorted
    /// by `(block, i, j)`, duplicates summed, exact zeros dropped. Entries
    /// given with `i > j` are mirrored.
    pub fn new(blocks: Vec<PsdBlock>, rows: Vec<SdpRow>) -> Result<Self> {
        let mut canonical = Vec::with_capacity(rows.len());
        for (k, row) in rows.into_iter().enumerate() {
            let mut entries = Vec::with_capacity(row.entries.len());
            for mut e in row.entries {
                if e.i > e.j {
                    std::mem::swap(&mut e.i, &mut e.j);
                }
                let size = blocks
                    .get(e.block)
                    .ok_or_else(|| Error::Parameter(format!("row {k}: no block {}", e.block)))?
                    .size;
                if e.j >= size {
                    return Err(Error::Parameter(format!(
                        "row {k}: index ({}, {}) outside block {} of size {size}",
                        e.i, e.j, e.block
                    )));
                }
                if !e.value.is_finite() || !row.rhs.is_finite() {
                    return Err(Error::Parameter(format!("row {k}: non-finite data")));
                }
                entries.push(e);
            }
            entries.sort_by_key(|e| (e.block, e.i, e.j));
            let mut merged: Vec<SdpEntry> = Vec::with_capacity(entries.len());
            for e in entries {
                match merged.last_mut() {
                    Some(last) if (last.block, last.i, last.j) == (e.block, e.i, e.j) => {
                        last.value += e.value
                    }
                    _ => merged.push(e),
                }
            }
            merged.retain(|e| e.value != 0.0);
            canonical.push(SdpRow {
                entries: merged,
                rhs: row.rhs,
            });
        }
        Ok(SdpProblem {
            blocks,
            rows: canonical,
        })
    }

    pub fn blocks(&self) -> &[PsdBlock] {
        &self.blocks
    }

    pub fn rows(&self) -> &[SdpRow] {
        &self.rows
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.entries.iter().map(|e| e.value.abs()).chain([r.rhs.abs()]))
            .fold(0.0, f64::max)
    }

    /// `Σ value · X_b[i][j] - rhs` per row.
    pub fn residuals(&self, values: &[SymMatrix]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                row.entries
                    .iter()
                    .map(|e| e.value * values[e.block].get(e.i, e.j))
                    .sum::<f64>()
                    - row.rhs
            })
            .collect()
    }

    pub fn to_sdpa_text(&self) -> String {
        let mut out = String::new();
        out.push_str("\"ratlyap sparse SDP export: rows, blocks, sizes, rhs, then `row block i j value`\n");
        out.push_str(&format!("{}\n{}\n", self.rows.len(), self.blocks.len()));
        let sizes: Vec<String> = self.blocks.iter().map(|b| b.size.to_string()).collect();
        out.push_str(&sizes.join(" "));
        out.push('\n');
        let rhs: Vec<String> = self.rows.iter().map(|r| format!("{:?}", r.rhs)).collect();
        out.push_str(&rhs.join(" "));
        out.push('\n');
        for (k, row) in self.rows.iter().enumerate() {
            for e in &row.entries {
                out.push_str(&format!(
                    "{} {} {} {} {:?}\n",
                    k + 1,
                    e.block + 1,
                    e.i + 1,
                    e.j + 1,
                    e.value
                ));
            }
        }
        out
    }

    /// Reads the layout written by [`SdpProblem::to_sdpa_text`]. Block names
    /// are not part of the layout and come back as `X1, X2, ...`.
    pub fn from_sdpa_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))
        };
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer `{s}`")))
        };
        let parse_f64 = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))
        };
        let nrows = parse_usize(next("row count")?)?;
        let nblocks = parse_usize(next("block count")?)?;
        let sizes = next("block sizes")?
            .split_whitespace()
            .map(parse_usize)
            .collect::<Result<Vec<_>>>()?;
        if sizes.len() != nblocks {
            return Err(Error::Parse(format!(
                "expected {nblocks} block sizes, found {}",
                sizes.len()
            )));
        }
        let rhs = if nrows == 0 {
            Vec::new()
        } else {
            next("right-hand sides")?
                .split_whitespace()
                .map(parse_f64)
                .collect::<Result<Vec<_>>>()?
        };
        if rhs.len() != nrows {
            return Err(Error::Parse(format!(
                "expected {nrows} right-hand sides, found {}",
                rhs.len()
            )));
        }
        let mut rows: Vec<SdpRow> = rhs
            .into_iter()
            .map(|rhs| SdpRow {
                entries: Vec::new(),
                rhs,
            })
            .collect();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(Error::Parse(format!("bad entry line `{line}`")));
            }
            let (k, b, i, j) = (
                parse_usize(f[0])?,
                parse_usize(f[1])?,
                parse_usize(f[2])?,
                parse_usize(f[3])?,
            );
            if k == 0 || b == 0 || i == 0 || j == 0 || k > nrows {
                return Err(Error::Parse(format!("index out of range in `{line}`")));
            }
            rows[k - 1].entries.push(SdpEntry {
                block: b - 1,
                i: i - 1,
                j: j - 1,
                value: parse_f64(f[4])?,
            });
        }
        let blocks = sizes
            .into_iter()
            .enumerate()
            .map(|(k, size)| PsdBlock {
                name: format!("X{}", k + 1),
                size,
            })
            .collect();
        SdpProblem::new(blocks, rows)
    }
}

/// Shifted standard form of a Gram system: blocks `P0` and `Q0`, with
/// `P = I + P0` and `Q = I + Q0`. Each row's right-hand side is minus the
/// row evaluated at `P = I, Q = I`.
pub fn to_sdp(system: &AffineGramSystem) -> SdpProblem {
    let blocks = vec![
        PsdBlock {
            name: "P0".into(),
            size: system.p_size(),
        },
        PsdBlock {
            name: "Q0".into(),
            size: system.q_size(),
        },
    ];
    let rows = system
        .rows
        .iter()
        .map(|row| {
            let identity_part: f64 = row
                .entries
                .iter()
                .filter(|e| e.i == e.j)
                .map(|e| e.coeff)
                .sum();
            SdpRow {
                entries: row
                    .entries
                    .iter()
                    .map(|e| SdpEntry {
                        block: match e.block {
                            Block::P => 0,
                            Block::Q => 1,
                        },
                        i: e.i,
                        j: e.j,
                        value: e.coeff,
                    })
                    .collect(),
                rhs: -identity_part,
            }
        })
        .collect();
    SdpProblem::new(blocks, rows).expect("assembled indices are in range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdpStatus {
    Feasible,
    Infeasible,
    Inaccurate,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpSettings {
    /// Equality residual tolerance, relative to `max(1, max |coefficient|)`.
    pub feas_tol: f64,
    /// Allowed negative eigenvalue of a PSD block.
    pub eig_tol: f64,
    pub max_iter: u32,
    /// Seconds; `None` means no limit.
    pub time_limit: Option<f64>,
}

impl Default for SdpSettings {
    fn default() -> Self {
        SdpSettings {
            feas_tol: 1e-7,
            eig_tol: 1e-8,
            max_iter: 200,
            time_limit: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Solver's own status name, for diagnostics.
    pub solver_status: String,
    pub blocks: Vec<SymMatrix>,
    /// Recomputed max |row residual|; present whenever block values exist.
    pub max_residual: Option<f64>,
    /// Recomputed smallest eigenvalue of each block.
    pub min_eigenvalues: Vec<f64>,
    pub iterations: u32,
    pub solve_time: f64,
}

fn svec_index(i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    j * (j + 1) / 2 + i
}

/// Solves the feasibility problem and classifies the outcome from
/// independently recomputed residuals and spectra.
pub fn solve(problem: &SdpProblem, settings: &SdpSettings) -> SdpSolution {
    let start = Instant::now();
    let offsets: Vec<usize> = problem
        .blocks
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.size * (b.size + 1) / 2;
            Some(o)
        })
        .collect();
    let nvars: usize = problem.blocks.iter().map(|b| b.size * (b.size + 1) / 2).sum();

    if problem.rows.is_empty() {
        let blocks: Vec<SymMatrix> = problem.blocks.iter().map(|b| SymMatrix::zeros(b.size)).collect();
        return finish(problem, settings, SolverStatus::Solved, blocks, 0, start);
    }

    let sqrt2 = std::f64::consts::SQRT_2;
    let (mut ri, mut ci, mut vals) = (Vec::new(), Vec::new(), Vec::new());
    for (k, row) in problem.rows.iter().enumerate() {
        for e in &row.entries {
            let scale = if e.i == e.j { 1.0 } else { 1.0 / sqrt2 };
            ri.push(k);
            ci.push(offsets[e.block] + svec_index(e.i, e.j));
            vals.push(e.value * scale);
        }
    }
    let m = problem.rows.len();
    for v in 0..nvars {
        ri.push(m + v);
        ci.push(v);
        vals.push(-1.0);
    }
    let a = CscMatrix::new_from_triplets(m + nvars, nvars, ri, ci, vals);
    let mut b: Vec<f64> = problem.rows.iter().map(|r| r.rhs).collect();
    b.extend(std::iter::repeat_n(0.0, nvars));
    let mut cones = vec![SupportedConeT::ZeroConeT(m)];
    cones.extend(
        problem
            .blocks
            .iter()
            .filter(|blk| blk.size > 0)
            .map(|blk| SupportedConeT::PSDTriangleConeT(blk.size)),
    );
    let p = CscMatrix::zeros((nvars, nvars));
    let q = vec![0.0; nvars];

    let mut builder = DefaultSettingsBuilder::default();
    builder.verbose(false).max_iter(settings.max_iter);
    if let Some(t) = settings.time_limit {
        builder.time_limit(t);
    }
    let clarabel_settings = match builder.build() {
        Ok(s) => s,
        Err(_) => return failed(problem, "invalid solver settings", start),
    };
    let mut solver = match DefaultSolver::new(&p, &q, &a, &b, &cones, clarabel_settings) {
        Ok(s) => s,
        Err(e) => return failed(problem, &format!("setup error: {e}"), start),
    };
    solver.solve();
    let status = solver.solution.status;
    let x = &solver.solution.x;
    let blocks = problem
        .blocks
        .iter()
        .zip(&offsets)
        .map(|(blk, off)| {
            let mut mat = SymMatrix::zeros(blk.size);
            for (i, j) in upper_coords(blk.size) {
                let v = x[off + svec_index(i, j)];
                mat.set(i, j, if i == j { v } else { v / sqrt2 });
            }
            mat
        })
        .collect();
    finish(problem, settings, status, blocks, solver.info.iterations, start)
}

fn failed(problem: &SdpProblem, why: &str, start: Instant) -> SdpSolution {
    SdpSolution {
        status: SdpStatus::Failed,
        solver_status: why.to_string(),
        blocks: problem.blocks.iter().map(|b| SymMatrix::zeros(b.size)).collect(),
        max_residual: None,
        min_eigenvalues: Vec::new(),
        iterations: 0,
        solve_time: start.elapsed().as_secs_f64(),
    }
}

fn finish(
    problem: &SdpProblem,
    settings: &SdpSettings,
    solver_status: SolverStatus,
    blocks: Vec<SymMatrix>,
    iterations: u32,
    start: Instant,
) -> SdpSolution {
    let finite = blocks.iter().all(|b| b.matrix().iter().all(|v| v.is_finite()));
    let (max_residual, min_eigenvalues) = if finite {
        let res = problem
            .residuals(&blocks)
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        (Some(res), blocks.iter().map(SymMatrix::min_eigenvalue).collect())
    } else {
        (None, Vec::new())
    };
    let scale = problem.max_abs_coeff().max(1.0);
    let certified = match max_residual {
        Some(r) => {
            r <= settings.feas_tol * scale
                && min_eigenvalues.iter().all(|&e| e >= -settings.eig_tol)
        }
        None => false,
    };
    let status = match solver_status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {
            if certified {
                SdpStatus::Feasible
            } else {
                SdpStatus::Inaccurate
            }
        }
        SolverStatus::PrimalInfeasible => SdpStatus::Infeasible,
        SolverStatus::AlmostPrimalInfeasible
        | SolverStatus::DualInfeasible
        | SolverStatus::AlmostDualInfeasible
        | SolverStatus::MaxIterations
        | SolverStatus::InsufficientProgress => SdpStatus::Inaccurate,
        SolverStatus::MaxTime
        | SolverStatus::NumericalError
        | SolverStatus::CallbackTerminated
        | SolverStatus::Unsolved => SdpStatus::Failed,
    };
    SdpSolution {
        status,
        solver_status: format!("{solver_status:?}"),
        blocks,
        max_residual,
        min_eigenvalues,
        iterations,
        solve_time: start.elapsed().as_secs_f64(),
    }
}
