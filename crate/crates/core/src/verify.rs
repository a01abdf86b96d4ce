//! Certificate checking, kept independent of the solver.
//!
//! [`check_certificate`] rebuilds both sides of the Gram identity from `P`,
//! `Q` and the vector field, checks the spectral margins `P ⪰ I`, `Q ⪰ I`,
//! and samples the unit sphere. It never looks at solver residuals.
//! [`check_candidate`] and [`trajectory_decrease`] are falsifiers for any
//! candidate function; they prove nothing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dynamics::{Trajectory, VectorField};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::polyalg::{dot, dot_with_x, HomogPoly};
use crate::sosgram::{gram_poly, lie_numerator_map, CandidateShape};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `V(x) = p(x) / ‖x‖^{2r}` with `p` homogeneous of degree `s > 2r`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalLyapunov {
    numerator: HomogPoly,
    r: u32,
}

/// `-V̇(x) = numerator(x) / ‖x‖^{2 · denominator_exponent}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LyapunovDerivative {
    pub numerator: HomogPoly,
    pub denominator_exponent: u32,
}

impl RationalLyapunov {
    pub fn new(numerator: HomogPoly, r: u32) -> Result<Self> {
        if numerator.degree() <= 2 * r {
            return Err(Error::Shape(format!(
                "numerator degree {} must exceed 2r = {}",
                numerator.degree(),
                2 * r
            )));
        }
        Ok(RationalLyapunov { numerator, r })
    }

    /// `m(x)ᵀ P m(x) / ‖x‖^{2r}` over the degree-`s/2` monomials of `shape`.
    pub fn from_gram(p: &SymMatrix, shape: &CandidateShape) -> Result<Self> {
        Self::new(gram_poly(p, &shape.m_basis)?, shape.r)
    }

    /// `W(x, y) = (x⁴ + y⁴) / (x² + y²)`, the known Lyapunov function of the
    /// quintic family for `0 < θ < π`.
    pub fn quintic_w() -> Self {
        let p = HomogPoly::parse("x1^4 + x2^4", 2).expect("builtin polynomial");
        RationalLyapunov { numerator: p, r: 1 }
    }

    pub fn numerator(&self) -> &HomogPoly {
        &self.numerator
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.numerator.n()
    }

    /// Degree of homogeneity of `V`.
    pub fn degree(&self) -> i64 {
        self.numerator.degree() as i64 - 2 * self.r as i64
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.numerator.eval_rational(self.r, x)
    }

    /// `-V̇(x)` evaluated directly.
    pub fn eval_decrease(&self, f: &VectorField, x: &[f64]) -> Result<f64> {
        Ok(lyapunov_derivative(self, f)?
            .numerator
            .eval_rational(self.r + 1, x))
    }
}

/// `-⟨∇V, f⟩ = (-‖x‖²⟨∇p, f⟩ + 2r p ⟨x, f⟩) / ‖x‖^{2(r+1)}`, computed from
/// the gradient of the numerator.
pub fn lyapunov_derivative(v: &RationalLyapunov, f: &VectorField) -> Result<LyapunovDerivative> {
    if f.n() != v.n() {
        return Err(Error::Dimension {
            expected: v.n(),
            found: f.n(),
        });
    }
    let (_, fs) = f.homogeneous_parts()?;
    let n = v.n();
    let grad = v.numerator.gradient();
    let mut num = HomogPoly::norm_sq(n).mul(&dot(&grad, &fs)?)?.scale(-1.0);
    if v.r > 0 {
        let radial = v.numerator.mul(&dot_with_x(&fs)?)?.scale(2.0 * v.r as f64);
        num = num.add(&radial)?;
    }
    Ok(LyapunovDerivative {
        numerator: num,
        denominator_exponent: v.r + 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeInfo {
    pub n: usize,
    pub d: u32,
    pub s: u32,
    pub r: u32,
}

/// Tolerances for [`check_certificate`] and [`check_candidate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    /// Identity residual bound, relative to the largest coefficient on either side.
    pub residual_tol: f64,
    pub eig_tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Strict-positivity margin for sampled candidate checks.
    pub margin_tol: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            residual_tol: 1e-6,
            eig_tol: 1e-8,
            samples: 200,
            seed: 0x5eed,
            margin_tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Largest coefficient mismatch between `zᵀQz` and the Lie numerator.
    pub identity_residual: f64,
    /// Largest coefficient magnitude on either side.
    pub coefficient_scale: f64,
    pub min_eig_p: f64,
    pub min_eig_q: f64,
    /// Minimum over sphere samples of `m(x)ᵀPm(x)`.
    pub sphere_min_w_numerator: f64,
    /// Minimum over sphere samples of the `-Ẇ` numerator.
    pub sphere_min_decrease_numerator: f64,
    pub samples: usize,
    pub seed: u64,
    pub residual_tol: f64,
    pub eig_tol: f64,
}

/// A witness `(s, r, P, Q)` of the Gram identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub shape: ShapeInfo,
    pub p: SymMatrix,
    pub q: SymMatrix,
    pub diagnostics: Option<Diagnostics>,
    pub tool_version: String,
    pub seed: u64,
}

impl Certificate {
    pub fn new(shape: ShapeInfo, p: SymMatrix, q: SymMatrix, seed: u64) -> Self {
        Certificate {
            shape,
            p,
            q,
            diagnostics: None,
            tool_version: TOOL_VERSION.to_string(),
            seed,
        }
    }

    pub fn candidate_shape(&self) -> Result<CandidateShape> {
        let s = &self.shape;
        CandidateShape::new(s.n, s.s, s.r, s.d)
    }

    pub fn lyapunov(&self) -> Result<RationalLyapunov> {
        RationalLyapunov::from_gram(&self.p, &self.candidate_shape()?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub failures: Vec<String>,
    pub diagnostics: Diagnostics,
}

/// Uniform points on the unit sphere from a fixed seed.
pub fn sphere_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    out
}

/// Rebuilds the identity `zᵀQz = -2‖x‖²⟨J(m)ᵀPm, f⟩ + 2r mᵀPm⟨x, f⟩` and
/// checks it together with `P ⪰ I`, `Q ⪰ I` and sphere samples.
///
/// Shape inconsistencies are errors; a certificate that is merely wrong
/// comes back with `passed == false`.
pub fn check_certificate(
    f: &VectorField,
    cert: &Certificate,
    settings: &VerifySettings,
) -> Result<CertificateCheck> {
    let shape = cert.candidate_shape()?;
    for (m, expected) in [(&cert.p, shape.m_basis.len()), (&cert.q, shape.z_basis.len())] {
        if m.dim() != expected {
            return Err(Error::MatrixSize {
                expected,
                found: m.dim(),
            });
        }
    }
    let rhs = lie_numerator_map(f, &shape)?.apply(&cert.p)?;
    let lhs = gram_poly(&cert.q, &shape.z_basis)?;
    let identity_residual = lhs.max_abs_diff(&rhs)?;
    let coefficient_scale = lhs.max_abs_coeff().max(rhs.max_abs_coeff()).max(1.0);
    let min_eig_p = cert.p.min_eigenvalue();
    let min_eig_q = cert.q.min_eigenvalue();

    let w_num = gram_poly(&cert.p, &shape.m_basis)?;
    let mut min_w = f64::INFINITY;
    let mut min_dec = f64::INFINITY;
    let mut failures = Vec::new();
    let nrows = shape.row_basis().len() as f64;
    let eval_slack = 1e-12 * coefficient_scale * nrows;
    let mut sample_failure = None;
    for x in sphere_samples(shape.n, settings.samples, settings.seed) {
        let mx = shape.m_basis.eval(&x);
        let zx = shape.z_basis.eval(&x);
        let w = w_num.eval(&x);
        let dec = rhs.eval(&x);
        min_w = min_w.min(w);
        min_dec = min_dec.min(dec);
        let w_bound = min_eig_p * mx.iter().map(|v| v * v).sum::<f64>();
        let dec_bound = min_eig_q * zx.iter().map(|v| v * v).sum::<f64>();
        // |rhs(x) - zᵀQz(x)| <= residual · #monomials on the unit sphere
        let dec_slack = identity_residual * nrows + eval_slack;
        if sample_failure.is_none() && (w < w_bound - eval_slack || dec < dec_bound - dec_slack) {
            sample_failure = Some(format!(
                "sphere sample {x:?}: W numerator {w:.3e} (bound {w_bound:.3e}), \
                 decrease numerator {dec:.3e} (bound {dec_bound:.3e})"
            ));
        }
        if sample_failure.is_none() && (w <= 0.0 || dec <= 0.0) {
            sample_failure = Some(format!("sphere sample {x:?}: nonpositive value"));
        }
    }

    if identity_residual > settings.residual_tol * coefficient_scale {
        failures.push(format!(
            "identity residual {identity_residual:.3e} exceeds {:.1e} x scale {coefficient_scale:.3e}",
            settings.residual_tol
        ));
    }
    if min_eig_p < 1.0 - settings.eig_tol {
        failures.push(format!("min eigenvalue of P is {min_eig_p:.6e} < 1"));
    }
    if min_eig_q < 1.0 - settings.eig_tol {
        failures.push(format!("min eigenvalue of Q is {min_eig_q:.6e} < 1"));
    }
    failures.extend(sample_failure);

    Ok(CertificateCheck {
        passed: failures.is_empty(),
        failures,
        diagnostics: Diagnostics {
            identity_residual,
            coefficient_scale,
            min_eig_p,
            min_eig_q,
            sphere_min_w_numerator: min_w,
            sphere_min_decrease_numerator: min_dec,
            samples: settings.samples,
            seed: settings.seed,
            residual_tol: settings.residual_tol,
            eig_tol: settings.eig_tol,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateCheck {
    pub passed: bool,
    /// `min V / max |V|` over the samples.
    pub min_value_ratio: f64,
    /// `min (-V̇ numerator) / max (magnitude bound)` over the samples.
    pub min_decrease_ratio: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Samples the unit sphere and checks `V > 0` and `-V̇ > 0`, each normalized.
///
/// `V` is normalized by its largest sampled magnitude. The `-V̇` numerator is
/// normalized by the largest sampled value of its Cauchy–Schwarz bound
/// `‖x‖²‖∇p‖‖f‖ + 2r|p|‖x‖‖f‖`, so a decrease that is only rounding noise
/// (for example a rotation angle of exactly π in floating point) fails.
pub fn check_candidate(
    v: &RationalLyapunov,
    f: &VectorField,
    settings: &VerifySettings,
) -> Result<CandidateCheck> {
    let deriv = lyapunov_derivative(v, f)?;
    let grad = v.numerator.gradient();
    let r = v.r as f64;
    let (mut min_v, mut max_v) = (f64::INFINITY, 0.0f64);
    let (mut min_dec, mut max_bound) = (f64::INFINITY, 0.0f64);
    for x in sphere_samples(v.n(), settings.samples, settings.seed) {
        let val = v.numerator.eval(&x);
        min_v = min_v.min(val);
        max_v = max_v.max(val.abs());
        min_dec = min_dec.min(deriv.numerator.eval(&x));
        let g: f64 = grad.iter().map(|p| p.eval(&x).powi(2)).sum::<f64>().sqrt();
        let fx: f64 = f.eval(&x).iter().map(|a| a * a).sum::<f64>().sqrt();
        max_bound = max_bound.max(g * fx + 2.0 * r * val.abs() * fx);
    }
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { f64::NEG_INFINITY };
    let min_value_ratio = ratio(min_v, max_v);
    let min_decrease_ratio = ratio(min_dec, max_bound);
    Ok(CandidateCheck {
        passed: min_value_ratio > settings.margin_tol && min_decrease_ratio > settings.margin_tol,
        min_value_ratio,
        min_decrease_ratio,
        samples: settings.samples,
        seed: settings.seed,
    })
}

/// Largest increase `V(x_{k+1}) - V(x_k)` along a sampled trajectory.
pub fn trajectory_decrease<F>(v: F, traj: &Trajectory) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let values: Vec<f64> = traj.states.iter().map(|x| v(x)).collect();
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}
