//! Sparse homogeneous polynomial algebra.
//!
//! Polynomials are stored as ordered maps from exponent vectors to `f64`
//! coefficients. Every [`HomogPoly`] carries its degree, and every arithmetic
//! result is re-checked against the degree-uniformity invariant. Only exact
//! zeros are pruned; any tolerance policy lives in [`crate::verify`].

mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub use text::{parse_graded, PolyJson, TermJson};

/// Exponent vector of a monomial `x1^a1 * ... * xn^an`.
///
/// Ordered graded-lexicographically: lower total degree first, then larger
/// exponent of `x1` first, so the degree-2 monomials in two variables sort as
/// `x1^2, x1*x2, x2^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The monomial `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n(), other.n());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }

    /// Derivative with respect to `x_i`: `(factor, monomial)`, or `None` if it vanishes.
    fn derivative(&self, i: usize) -> Option<(f64, Monomial)> {
        let e = self.0[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.0.clone();
        exps[i] -= 1;
        Some((e as f64, Monomial(exps)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Homogeneous polynomial in `n` variables with real coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogPoly {
    n: usize,
    degree: u32,
    terms: BTreeMap<Monomial, f64>,
}

impl HomogPoly {
    /// Builds a polynomial from terms; duplicate monomials are summed and
    /// exact zeros dropped.
    pub fn new<I>(n: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, f64)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if m.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: m.n(),
                });
            }
            if m.degree() != degree {
                return Err(Error::Degree {
                    expected: degree,
                    found: m.degree(),
                });
            }
            *map.entry(m).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(HomogPoly {
            n,
            degree,
            terms: map,
        })
    }

    pub fn zero(n: usize, degree: u32) -> Self {
        HomogPoly {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn monomial(n: usize, m: Monomial, c: f64) -> Self {
        assert_eq!(m.n(), n, "monomial dimension");
        let degree = m.degree();
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            terms.insert(m, c);
        }
        HomogPoly { n, degree, terms }
    }

    /// The coordinate polynomial `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(n, Monomial::var(n, i), 1.0)
    }

    /// `x1^2 + ... + xn^2`.
    pub fn norm_sq(n: usize) -> Self {
        let terms = (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (Monomial(e), 1.0)
        });
        Self::new(n, 2, terms).expect("well-formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> f64 {
        self.terms.get(m).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    fn check_compatible(&self, other: &HomogPoly) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::Degree {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_in_place(other, 1.0);
        Ok(out)
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_in_place(other, -1.0);
        Ok(out)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, other: &HomogPoly, alpha: f64) -> Result<HomogPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled_in_place(other, alpha);
        Ok(out)
    }

    fn add_scaled_in_place(&mut self, other: &HomogPoly, alpha: f64) {
        for (m, c) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert(0.0);
            *e += alpha * c;
            if *e == 0.0 {
                self.terms.remove(m);
            }
        }
    }

    pub fn scale(&self, alpha: f64) -> HomogPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), alpha * c))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        HomogPoly {
            n: self.n,
            degree: self.degree,
            terms,
        }
    }

    pub fn mul(&self, other: &HomogPoly) -> Result<HomogPoly> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n,
            });
        }
        let mut terms: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *terms.entry(ma.mul(mb)).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Ok(HomogPoly {
            n: self.n,
            degree: self.degree + other.degree,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> HomogPoly {
        let mut acc = HomogPoly::constant(self.n, 1.0);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// `∂p/∂x_i`. A degree-0 polynomial differentiates to the degree-0 zero.
    pub fn partial(&self, i: usize) -> HomogPoly {
        if self.degree == 0 {
            return HomogPoly::zero(self.n, 0);
        }
        let mut terms: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.derivative(i) {
                *terms.entry(dm).or_insert(0.0) += k * c;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        HomogPoly {
            n: self.n,
            degree: self.degree - 1,
            terms,
        }
    }

    pub fn gradient(&self) -> Vec<HomogPoly> {
        (0..self.n).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point dimension");
        self.terms.iter().map(|(m, c)| c * m.eval(x)).sum()
    }

    /// Evaluates `self(x) / ‖x‖^(2r)`.
    pub fn eval_rational(&self, r: u32, x: &[f64]) -> f64 {
        let nsq: f64 = x.iter().map(|v| v * v).sum();
        self.eval(x) / nsq.powi(r as i32)
    }

    /// Largest coefficient gap against `other`, over the union of supports.
    pub fn max_abs_diff(&self, other: &HomogPoly) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_coeff())
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, &c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            match (k, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag:?}")?;
            } else {
                write!(f, "{mag:?}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `Σ a_i b_i` for equal-length vectors of polynomials.
pub fn dot(a: &[HomogPoly], b: &[HomogPoly]) -> Result<HomogPoly> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    let mut iter = a.iter().zip(b);
    let (a0, b0) = iter
        .next()
        .ok_or_else(|| Error::Parameter("empty polynomial vector".into()))?;
    let mut acc = a0.mul(b0)?;
    for (ai, bi) in iter {
        acc = acc.add(&ai.mul(bi)?)?;
    }
    Ok(acc)
}

/// `⟨x, v⟩ = Σ x_i v_i` for a vector of polynomials of common degree.
pub fn dot_with_x(v: &[HomogPoly]) -> Result<HomogPoly> {
    let n = v.first().map(|p| p.n()).unwrap_or(0);
    let xs: Vec<HomogPoly> = (0..n).map(|i| HomogPoly::var(n, i)).collect();
    dot(&xs, v)
}

/// All monomials of one degree, in graded-lex order, with index lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    half_degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    /// Every monomial of degree `k` in `n` variables; `C(n+k-1, k)` of them.
    pub fn enumerate(n: usize, k: u32) -> Self {
        assert!(n >= 1, "at least one variable");
        let mut monomials = Vec::new();
        let mut current = vec![0u32; n];
        fill(&mut current, 0, k, &mut monomials);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            n,
            half_degree: k,
            monomials,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_degree(&self) -> u32 {
        self.half_degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Basis monomials as polynomials.
    pub fn as_polys(&self) -> Vec<HomogPoly> {
        self.monomials
            .iter()
            .map(|m| HomogPoly::monomial(self.n, m.clone(), 1.0))
            .collect()
    }

    /// Values of every basis monomial at `x`.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.monomials.iter().map(|m| m.eval(x)).collect()
    }

    /// Entry `(i, j)` is `∂m_i/∂x_j`.
    pub fn jacobian(&self) -> Vec<Vec<HomogPoly>> {
        self.as_polys().iter().map(|m| m.gradient()).collect()
    }
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(Monomial(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// Binomial coefficient, for basis-size bookkeeping.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn poly(n: usize, deg: u32, terms: &[(&[u32], f64)]) -> HomogPoly {
        HomogPoly::new(n, deg, terms.iter().map(|(e, c)| (mono(e), *c))).unwrap()
    }

    #[test]
    fn basis_two_vars_degree_two() {
        let b = MonomialBasis::enumerate(2, 2);
        assert_eq!(b.monomials(), &[mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]);
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(MonomialBasis::enumerate(1, 5).monomials(), &[mono(&[5])]);
        assert_eq!(MonomialBasis::enumerate(3, 2).len(), 6);
        for n in 1..5 {
            for k in 0..7 {
                let b = MonomialBasis::enumerate(n, k);
                assert_eq!(b.len() as u64, binomial((n as u64) + k as u64 - 1, k as u64));
                assert!(b.monomials().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn basis_is_deterministic() {
        let a = MonomialBasis::enumerate(3, 4);
        let b = MonomialBasis::enumerate(3, 4);
        assert_eq!(a.monomials(), b.monomials());
        for (i, m) in a.monomials().iter().enumerate() {
            assert_eq!(a.index_of(m), Some(i));
        }
    }

    #[test]
    fn construction_rejects_mixed_degree() {
        let err = HomogPoly::new(2, 2, vec![(mono(&[2, 0]), 1.0), (mono(&[1, 0]), 1.0)]);
        assert!(matches!(err, Err(Error::Degree { .. })));
        let err = HomogPoly::new(2, 1, vec![(mono(&[1, 0, 0]), 1.0)]);
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn exact_zeros_are_pruned() {
        let p = HomogPoly::new(2, 1, vec![(mono(&[1, 0]), 1.0), (mono(&[1, 0]), -1.0)]).unwrap();
        assert!(p.is_zero());
        let x = HomogPoly::var(2, 0);
        assert!(x.sub(&x).unwrap().is_zero());
        assert!(x.scale(0.0).is_zero());
    }

    #[test]
    fn gradient_examples() {
        let p = HomogPoly::norm_sq(2);
        let g = p.gradient();
        assert_eq!(g[0], poly(2, 1, &[(&[1, 0], 2.0)]));
        assert_eq!(g[1], poly(2, 1, &[(&[0, 1], 2.0)]));

        let q = poly(2, 4, &[(&[4, 0], 1.0), (&[0, 4], 1.0)]);
        let g = q.gradient();
        assert_eq!(g[0], poly(2, 3, &[(&[3, 0], 4.0)]));
        assert_eq!(g[1], poly(2, 3, &[(&[0, 3], 4.0)]));
    }

    #[test]
    fn gradient_of_constant_is_zero_vector() {
        let g = HomogPoly::constant(3, 5.0).gradient();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|p| p.is_zero() && p.degree() == 0));
    }

    #[test]
    fn jacobian_examples() {
        let j = MonomialBasis::enumerate(2, 2).jacobian();
        let x = HomogPoly::var(2, 0);
        let y = HomogPoly::var(2, 1);
        let z = HomogPoly::zero(2, 1);
        assert_eq!(j[0], vec![x.scale(2.0), z.clone()]);
        assert_eq!(j[1], vec![y.clone(), x.clone()]);
        assert_eq!(j[2], vec![z, y.scale(2.0)]);

        let j = MonomialBasis::enumerate(1, 1).jacobian();
        assert_eq!(j, vec![vec![HomogPoly::constant(1, 1.0)]]);
    }

    #[test]
    fn jacobian_euler_identity() {
        let basis = MonomialBasis::enumerate(2, 3);
        let jac = basis.jacobian();
        for (row, m) in jac.iter().zip(basis.as_polys()) {
            let lhs = dot_with_x(row).unwrap();
            assert_eq!(lhs, m.scale(3.0));
        }
    }

    #[test]
    fn product_examples() {
        let x = HomogPoly::var(2, 0);
        let y = HomogPoly::var(2, 1);
        let p = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        assert_eq!(p, poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]));
        assert_eq!(
            HomogPoly::norm_sq(2),
            poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], 1.0)])
        );
    }

    #[test]
    fn mismatched_operands_are_structural_errors() {
        let a = HomogPoly::var(2, 0);
        let b = HomogPoly::var(3, 0);
        assert!(matches!(a.mul(&b), Err(Error::Dimension { .. })));
        assert!(matches!(a.add(&b), Err(Error::Dimension { .. })));
        assert!(matches!(
            a.add(&HomogPoly::norm_sq(2)),
            Err(Error::Degree { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(HomogPoly::norm_sq(2).eval(&[3.0, 4.0]), 25.0);
        let q = poly(2, 4, &[(&[4, 0], 1.0), (&[0, 4], 1.0)]);
        assert_eq!(q.eval(&[1.0, 1.0]), 2.0);
        assert_eq!(q.eval_rational(1, &[1.0, 1.0]), 1.0);
    }

    #[test]
    fn display_is_readable() {
        let p = poly(2, 3, &[(&[3, 0], 1.0), (&[1, 2], -2.5)]);
        assert_eq!(p.to_string(), "1.0*x1^3 - 2.5*x1*x2^2");
        assert_eq!(HomogPoly::zero(2, 3).to_string(), "0");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(11, 10), 11);
        assert_eq!(binomial(3, 5), 0);
    }
}
