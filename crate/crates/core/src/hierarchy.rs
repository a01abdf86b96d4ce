//! The level schedule: `s = 2, 4, ..., s_max`, and for each `s`,
//! `r = 0, ..., s/2 - 1`. The first level whose solution verifies wins.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::sdp::{solve, to_sdp, SdpSettings, SdpStatus};
use crate::sosgram::{assemble, CandidateShape};
use crate::verify::{check_certificate, Certificate, ShapeInfo, VerifySettings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RMode {
    Free,
    ZeroOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub s_max: u32,
    pub r_mode: RMode,
    /// Seconds per level, passed to the solver.
    pub level_time_limit: Option<f64>,
    /// Solve the `r` levels of one `s` on separate threads.
    pub parallel: bool,
    pub sdp: SdpSettings,
    pub verify: VerifySettings,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            s_max: 12,
            r_mode: RMode::Free,
            level_time_limit: None,
            parallel: false,
            sdp: SdpSettings::default(),
            verify: VerifySettings::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.s_max < 2 || self.s_max % 2 != 0 {
            return Err(Error::Parameter(format!(
                "s_max must be an even integer >= 2, got {}",
                self.s_max
            )));
        }
        Ok(())
    }

    /// Levels in the order they are attempted.
    pub fn schedule(&self) -> Vec<(u32, u32)> {
        (1..=self.s_max / 2)
            .map(|h| 2 * h)
            .flat_map(|s| {
                let rs = match self.r_mode {
                    RMode::Free => 0..s / 2,
                    RMode::ZeroOnly => 0..1,
                };
                rs.map(move |r| (s, r))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Certified,
    Exhausted,
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub s: u32,
    pub r: u32,
    pub status: SdpStatus,
    pub solver_status: String,
    /// `None` when there was nothing to verify.
    pub verified: Option<bool>,
    pub max_residual: Option<f64>,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub summary: String,
    pub n: usize,
    pub d: u32,
    pub s_max: u32,
    pub r_mode: RMode,
    pub levels: Vec<LevelRecord>,
    pub certificate: Option<Certificate>,
    pub wall_time: f64,
}

impl SearchReport {
    /// `(s, r)` of the certificate, if any.
    pub fn certified_level(&self) -> Option<(u32, u32)> {
        self.certificate.as_ref().map(|c| (c.shape.s, c.shape.r))
    }

    pub fn level(&self, s: u32, r: u32) -> Option<&LevelRecord> {
        self.levels.iter().find(|l| l.s == s && l.r == r)
    }
}

/// Outcome of a single level.
#[derive(Clone, Debug)]
pub struct LevelResult {
    pub record: LevelRecord,
    pub certificate: Option<Certificate>,
}

/// Assemble, solve, shift back and verify one level. Solver trouble shows up
/// in the record, never as an error.
pub fn certify_level(
    f: &VectorField,
    s: u32,
    r: u32,
    sdp: &SdpSettings,
    verify: &VerifySettings,
) -> Result<LevelResult> {
    let start = Instant::now();
    let (d, _) = f.homogeneous_parts()?;
    let shape = CandidateShape::new(f.n(), s, r, d)?;
    let system = assemble(f, &shape)?;
    let sol = solve(&to_sdp(&system), sdp);

    let mut record = LevelRecord {
        s,
        r,
        status: sol.status,
        solver_status: sol.solver_status.clone(),
        verified: None,
        max_residual: sol.max_residual,
        wall_time: 0.0,
        failures: Vec::new(),
    };
    let mut certificate = None;
    let worth_checking = matches!(sol.status, SdpStatus::Feasible | SdpStatus::Inaccurate)
        && sol.max_residual.is_some();
    if worth_checking {
        let p = SymMatrix::identity(shape.m_basis.len()).add(&sol.blocks[0]);
        let q = SymMatrix::identity(shape.z_basis.len()).add(&sol.blocks[1]);
        let mut cert = Certificate::new(ShapeInfo { n: f.n(), d, s, r }, p, q, verify.seed);
        let check = check_certificate(f, &cert, verify)?;
        record.verified = Some(check.passed);
        record.failures = check.failures;
        cert.diagnostics = Some(check.diagnostics);
        if check.passed {
            certificate = Some(cert);
        }
    }
    record.wall_time = start.elapsed().as_secs_f64();
    Ok(LevelResult {
        record,
        certificate,
    })
}

/// Runs the schedule until a level verifies.
///
/// Even-degree fields are rejected with [`Error::EvenDegree`], and fields
/// without a common degree with [`Error::NotHomogeneous`]. A level whose
/// solver fails outright aborts the search, since the levels after it would
/// no longer be the first.
pub fn search(f: &VectorField, config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let start = Instant::now();
    let (d, _) = f.homogeneous_parts()?;
    if d % 2 == 0 {
        return Err(Error::EvenDegree(d));
    }
    let mut sdp = config.sdp.clone();
    if config.level_time_limit.is_some() {
        sdp.time_limit = config.level_time_limit;
    }

    let schedule = config.schedule();
    let mut levels = Vec::new();
    let mut certificate = None;
    let mut aborted = false;
    let mut s_values: Vec<u32> = schedule.iter().map(|l| l.0).collect();
    s_values.dedup();
    'outer: for s in s_values {
        let group: Vec<u32> = schedule.iter().filter(|l| l.0 == s).map(|l| l.1).collect();
        let results = if config.parallel && group.len() > 1 {
            let sdp = &sdp;
            std::thread::scope(|scope| {
                let handles: Vec<_> = group
                    .iter()
                    .map(|&r| scope.spawn(move || certify_level(f, s, r, sdp, &config.verify)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("level thread panicked"))
                    .collect::<Result<Vec<_>>>()
            })?
        } else {
            let mut out = Vec::new();
            for &r in &group {
                let res = certify_level(f, s, r, &sdp, &config.verify)?;
                let stop = res.certificate.is_some() || res.record.status == SdpStatus::Failed;
                out.push(res);
                if stop {
                    break;
                }
            }
            out
        };
        // Commit in schedule order regardless of completion order.
        for res in results {
            let failed = res.record.status == SdpStatus::Failed;
            levels.push(res.record);
            if res.certificate.is_some() {
                certificate = res.certificate;
                break 'outer;
            }
            if failed {
                aborted = true;
                break 'outer;
            }
        }
    }

    let outcome = if certificate.is_some() {
        Outcome::Certified
    } else if aborted {
        Outcome::Aborted
    } else {
        Outcome::Exhausted
    };
    let summary = match (&outcome, &certificate) {
        (Outcome::Certified, Some(c)) => format!(
            "certified: V = m(x)'Pm(x) / |x|^{} with s = {}, r = {}",
            2 * c.shape.r,
            c.shape.s,
            c.shape.r
        ),
        (Outcome::Aborted, _) => {
            let last = levels.last().expect("an aborted search attempted a level");
            format!(
                "aborted: solver failed at (s, r) = ({}, {}) [{}]; no conclusion about stability or instability",
                last.s, last.r, last.solver_status
            )
        }
        _ => format!(
            "exhausted: no certificate with s <= {}; no conclusion about instability \
             (a larger s may still succeed)",
            config.s_max
        ),
    };
    Ok(SearchReport {
        outcome,
        summary,
        n: f.n(),
        d,
        s_max: config.s_max,
        r_mode: config.r_mode,
        levels,
        certificate,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
