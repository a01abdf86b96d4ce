use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::VectorField;
use crate::error::{Error, Result};
use crate::polyalg::HomogPoly;

fn p2(text: &str) -> HomogPoly {
    HomogPoly::parse(text, 2).expect("builtin polynomial")
}

/// `ẋ = -x + xy`, `ẏ = -y`: globally asymptotically stable but not
/// homogeneous, and without any rational Lyapunov function.
pub fn family_nonhomog_counterexample() -> VectorField {
    VectorField::new(
        2,
        vec![vec![p2("-x1"), p2("x1*x2")], vec![p2("-x2")]],
    )
    .expect("builtin field")
}

/// The cubic family: rotation by `theta` of the field whose orbits are the
/// level curves of `(x²+y²)(2x²+y²)^λ`.
///
/// At `theta = 0` the origin is a center; for `0 < theta < π` it is
/// asymptotically stable. The rotation is expanded into the coefficients.
pub fn family_cubic(theta: f64, lambda: f64) -> Result<VectorField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let r2 = p2("x1^2 + x2^2");
    let e2 = p2("2*x1^2 + x2^2");
    let x = p2("x1");
    let y = p2("x2");
    // g1 = -2λ y (x²+y²) - 2 y (2x²+y²),  g2 = 4λ x (x²+y²) + 2 x (2x²+y²)
    let g1 = y
        .mul(&r2)?
        .scale(-2.0 * lambda)
        .add(&y.mul(&e2)?.scale(-2.0))?;
    let g2 = x
        .mul(&r2)?
        .scale(4.0 * lambda)
        .add(&x.mul(&e2)?.scale(2.0))?;
    let (s, c) = theta.sin_cos();
    let f1 = g1.scale(c).add(&g2.scale(-s))?;
    let f2 = g1.scale(s).add(&g2.scale(c))?;
    VectorField::homogeneous(vec![f1, f2])
}

/// The quintic family `f_θ = 2 R(θ) (x(x⁴+2x²y²-y⁴), y(-x⁴+2x²y²+y⁴))`
/// with `R(θ) = [[-sin θ, -cos θ], [cos θ, -sin θ]]`.
pub fn family_quintic(theta: f64) -> VectorField {
    let h1 = p2("x1^5 + 2*x1^3*x2^2 - x1*x2^4");
    let h2 = p2("-x1^4*x2 + 2*x1^2*x2^3 + x2^5");
    let (s, c) = theta.sin_cos();
    let f1 = h1.scale(-2.0 * s).add(&h2.scale(-2.0 * c)).unwrap();
    let f2 = h1.scale(2.0 * c).add(&h2.scale(-2.0 * s)).unwrap();
    VectorField::homogeneous(vec![f1, f2]).expect("builtin field")
}

/// `f(x) = A x`.
pub fn family_linear(a: &DMatrix<f64>) -> Result<VectorField> {
    if !a.is_square() {
        return Err(Error::Parameter(format!(
            "linear field needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    let rows = (0..n)
        .map(|i| {
            HomogPoly::new(
                n,
                1,
                (0..n).map(|j| (crate::polyalg::Monomial::var(n, j), a[(i, j)])),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().all(|p| p.is_zero()) {
        return Err(Error::Parameter("zero matrix".into()));
    }
    VectorField::homogeneous(rows)
}

/// A random `n x n` matrix whose eigenvalues all have real part at most
/// `-margin`: Gaussian entries, shifted left by the spectral abscissa plus a
/// uniform extra in `[0, 1)`.
pub fn random_hurwitz<R: Rng + ?Sized>(n: usize, margin: f64, rng: &mut R) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let abscissa = m
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = abscissa + margin + rng.random::<f64>();
    m - DMatrix::identity(n, n) * shift
}

/// `I(x, y) = (x²+y²)(2x²+y²)^λ`, a first integral of the θ = 0 cubic field.
pub fn conserved_i(lambda: f64, x: &[f64]) -> f64 {
    let (a, b) = (x[0], x[1]);
    (a * a + b * b) * (2.0 * a * a + b * b).powf(lambda)
}
