//! Polynomial vector fields, the benchmark families, and a fixed-step
//! simulator.

mod families;
mod simulate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{parse_graded, HomogPoly, PolyJson};

pub use families::{
    conserved_i, family_cubic, family_linear, family_nonhomog_counterexample, family_quintic,
    random_hurwitz,
};
pub use simulate::{simulate, write_csv, Divergence, Trajectory, DIVERGENCE_GUARD};

/// `ẋ = f(x)` with polynomial components, each stored as its nonzero graded
/// parts in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    n: usize,
    components: Vec<Vec<HomogPoly>>,
    declared_degree: Option<u32>,
}

impl VectorField {
    /// Builds a field from graded parts. Parts of equal degree are merged and
    /// zero parts dropped.
    pub fn new(n: usize, components: Vec<Vec<HomogPoly>>) -> Result<Self> {
        if components.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: components.len(),
            });
        }
        let mut normalized = Vec::with_capacity(n);
        for parts in components {
            let mut merged: Vec<HomogPoly> = Vec::new();
            for p in parts {
                if p.n() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: p.n(),
                    });
                }
                match merged.iter_mut().find(|q| q.degree() == p.degree()) {
                    Some(q) => *q = q.add(&p)?,
                    None => merged.push(p),
                }
            }
            merged.retain(|p| !p.is_zero());
            merged.sort_by_key(|p| p.degree());
            normalized.push(merged);
        }
        Ok(VectorField {
            n,
            components: normalized,
            declared_degree: None,
        })
    }

    /// Builds a field homogeneous of degree `d`, one polynomial per component.
    pub fn homogeneous(components: Vec<HomogPoly>) -> Result<Self> {
        let n = components.len();
        let d = components
            .iter()
            .find(|p| !p.is_zero())
            .map(|p| p.degree())
            .ok_or_else(|| Error::Parameter("vector field is identically zero".into()))?;
        for p in &components {
            if !p.is_zero() && p.degree() != d {
                return Err(Error::NotHomogeneous(format!(
                    "components have degrees {} and {d}",
                    p.degree()
                )));
            }
        }
        let mut f = Self::new(n, components.into_iter().map(|p| vec![p]).collect())?;
        f.declared_degree = Some(d);
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Vec<HomogPoly>] {
        &self.components
    }

    pub fn declared_degree(&self) -> Option<u32> {
        self.declared_degree
    }

    /// True iff every nonzero graded part has degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.components
            .iter()
            .flatten()
            .all(|p| p.degree() == d)
    }

    /// The common degree of all graded parts, if there is one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.components.iter().flatten().map(|p| p.degree());
        match degrees.next() {
            None => self.declared_degree,
            Some(d) => degrees.all(|e| e == d).then_some(d),
        }
    }

    /// Components as degree-`d` polynomials, zero components included.
    pub fn homogeneous_parts(&self) -> Result<(u32, Vec<HomogPoly>)> {
        let d = self.homogeneous_degree().ok_or_else(|| {
            let degrees: Vec<u32> = self
                .components
                .iter()
                .flatten()
                .map(|p| p.degree())
                .collect();
            Error::NotHomogeneous(format!(
                "graded parts of degrees {degrees:?}; rational Lyapunov certificates of this \
                 form need not exist without homogeneity (see the ẋ = -x + xy, ẏ = -y example)"
            ))
        })?;
        let parts = self
            .components
            .iter()
            .map(|c| c.first().cloned().unwrap_or_else(|| HomogPoly::zero(self.n, d)))
            .collect();
        Ok((d, parts))
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "point dimension");
        self.components
            .iter()
            .map(|parts| parts.iter().map(|p| p.eval(x)).sum())
            .collect()
    }

    /// `c · f`.
    pub fn scale(&self, c: f64) -> VectorField {
        VectorField {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|parts| {
                    parts
                        .iter()
                        .map(|p| p.scale(c))
                        .filter(|p| !p.is_zero())
                        .collect()
                })
                .collect(),
            declared_degree: self.declared_degree,
        }
    }

    pub fn to_json(&self) -> VectorFieldJson {
        VectorFieldJson {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|parts| ComponentJson::Parts(parts.iter().map(PolyJson::from).collect()))
                .collect(),
        }
    }

    pub fn from_json(j: VectorFieldJson) -> Result<Self> {
        let n = j.n;
        let mut components = Vec::with_capacity(j.components.len());
        for c in j.components {
            let parts = match c {
                ComponentJson::Text(s) => parse_graded(&s, n)?,
                ComponentJson::Poly(p) => vec![HomogPoly::try_from(p)?],
                ComponentJson::Parts(ps) => ps
                    .into_iter()
                    .map(HomogPoly::try_from)
                    .collect::<Result<_>>()?,
            };
            components.push(parts);
        }
        let f = Self::new(n, components)?;
        Ok(f.with_declared_degree())
    }

    /// Parses one component per nonempty line of text.
    pub fn parse_text(text: &str, n: usize) -> Result<Self> {
        let components = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| parse_graded(l, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(n, components)?.with_declared_degree())
    }

    fn with_declared_degree(mut self) -> Self {
        self.declared_degree = self.homogeneous_degree();
        self
    }
}

/// File form of a vector field: one entry per component, each either a text
/// polynomial, a JSON polynomial, or a list of JSON graded parts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorFieldJson {
    pub n: usize,
    pub components: Vec<ComponentJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentJson {
    Text(String),
    Poly(PolyJson),
    Parts(Vec<PolyJson>),
}
