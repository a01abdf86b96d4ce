//! Affine constraint system tying a numerator Gram matrix `P` to a Gram
//! matrix `Q` of the Lyapunov decrease.
//!
//! For a candidate `W(x) = m(x)ᵀ P m(x) / ‖x‖^{2r}` with `m` the monomials of
//! degree `s/2`, the numerator of `-Ẇ` over `‖x‖^{2r+2}` is
//!
//! ```text
//! -2 ‖x‖² ⟨J(m)ᵀ P m, f⟩ + 2r (mᵀ P m) ⟨x, f⟩
//! ```
//!
//! a form of degree `s + d + 1`. The system asks it to equal `z(x)ᵀ Q z(x)`
//! with `z` the monomials of degree `(s + d + 1) / 2`, one row per monomial.
//!
//! Linear functionals on symmetric matrices are written in upper-triangle
//! coordinates: the coordinate `(i, j)` with `i < j` stands for both
//! `A[i][j]` and `A[j][i]`, so its coefficient counts the pair twice.

use serde::{Deserialize, Serialize};

use crate::dynamics::VectorField;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::polyalg::{dot, dot_with_x, HomogPoly, Monomial, MonomialBasis};

/// One level `(s, r)` of the hierarchy for an `n`-dimensional field of
/// degree `d`.
#[derive(Clone, Debug)]
pub struct CandidateShape {
    pub n: usize,
    pub s: u32,
    pub r: u32,
    pub d: u32,
    pub m_basis: MonomialBasis,
    pub z_basis: MonomialBasis,
}

impl CandidateShape {
    pub fn new(n: usize, s: u32, r: u32, d: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("dimension must be at least 1".into()));
        }
        if s == 0 || s % 2 != 0 {
            return Err(Error::Shape(format!("s must be a positive even integer, got {s}")));
        }
        if 2 * r >= s {
            return Err(Error::Shape(format!("need 2r < s, got s = {s}, r = {r}")));
        }
        if (s + d + 1) % 2 != 0 {
            return Err(Error::Shape(format!(
                "s + d + 1 must be even (d odd), got s = {s}, d = {d}"
            )));
        }
        Ok(CandidateShape {
            n,
            s,
            r,
            d,
            m_basis: MonomialBasis::enumerate(n, s / 2),
            z_basis: MonomialBasis::enumerate(n, (s + d + 1) / 2),
        })
    }

    /// Degree of both sides of the identity.
    pub fn identity_degree(&self) -> u32 {
        self.s + self.d + 1
    }

    pub fn row_basis(&self) -> MonomialBasis {
        MonomialBasis::enumerate(self.n, self.identity_degree())
    }

    fn check_field(&self, f: &VectorField) -> Result<Vec<HomogPoly>> {
        if f.n() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: f.n(),
            });
        }
        let (d, parts) = f.homogeneous_parts()?;
        if d != self.d {
            return Err(Error::Shape(format!(
                "shape expects a degree-{} field, got degree {d}",
                self.d
            )));
        }
        Ok(parts)
    }
}

/// Upper-triangle coordinates `(i, j)`, `i <= j`, of an `n x n` symmetric matrix.
pub fn upper_coords(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

/// The linear map `P ↦ -2‖x‖²⟨J(m)ᵀPm, f⟩ + 2r mᵀPm ⟨x, f⟩`, stored as the
/// image of every upper-triangle coordinate.
#[derive(Clone, Debug)]
pub struct LieNumeratorMap {
    size: usize,
    degree: u32,
    n: usize,
    images: Vec<((usize, usize), HomogPoly)>,
}

impl LieNumeratorMap {
    pub fn images(&self) -> &[((usize, usize), HomogPoly)] {
        &self.images
    }

    pub fn apply(&self, p: &SymMatrix) -> Result<HomogPoly> {
        if p.dim() != self.size {
            return Err(Error::MatrixSize {
                expected: self.size,
                found: p.dim(),
            });
        }
        let mut acc = HomogPoly::zero(self.n, self.degree);
        for ((i, j), img) in &self.images {
            let v = p.get(*i, *j);
            if v != 0.0 {
                acc = acc.add_scaled(img, v)?;
            }
        }
        Ok(acc)
    }
}

pub fn lie_numerator_map(f: &VectorField, shape: &CandidateShape) -> Result<LieNumeratorMap> {
    let fs = shape.check_field(f)?;
    let n = shape.n;
    let degree = shape.identity_degree();
    let m = shape.m_basis.as_polys();
    let jac = shape.m_basis.jacobian();
    // Lie derivatives ⟨∇m_a, f⟩, each of degree s/2 + d - 1.
    let lie: Vec<HomogPoly> = jac.iter().map(|row| dot(row, &fs)).collect::<Result<_>>()?;
    let norm_sq = HomogPoly::norm_sq(n);
    let x_dot_f = dot_with_x(&fs)?;
    let r = shape.r as f64;

    let mut images = Vec::new();
    for (i, j) in upper_coords(m.len()) {
        // ⟨J(m)ᵀ E m, f⟩ and mᵀ E m for the symmetric unit coordinate E.
        let (jterm, quad) = if i == j {
            (m[i].mul(&lie[i])?, m[i].mul(&m[i])?)
        } else {
            (
                m[j].mul(&lie[i])?.add(&m[i].mul(&lie[j])?)?,
                m[i].mul(&m[j])?.scale(2.0),
            )
        };
        let mut img = norm_sq.mul(&jterm)?.scale(-2.0);
        if shape.r > 0 {
            img = img.add(&quad.mul(&x_dot_f)?.scale(2.0 * r))?;
        }
        debug_assert_eq!(img.degree(), degree);
        images.push(((i, j), img));
    }
    Ok(LieNumeratorMap {
        size: m.len(),
        degree,
        n,
        images,
    })
}

/// `z(x)ᵀ Q z(x)`.
pub fn gram_poly(q: &SymMatrix, basis: &MonomialBasis) -> Result<HomogPoly> {
    if q.dim() != basis.len() {
        return Err(Error::MatrixSize {
            expected: basis.len(),
            found: q.dim(),
        });
    }
    let terms = upper_coords(basis.len()).filter_map(|(a, b)| {
        let v = q.get(a, b);
        (v != 0.0).then(|| {
            let mult = if a == b { 1.0 } else { 2.0 };
            (basis.get(a).mul(basis.get(b)), mult * v)
        })
    });
    HomogPoly::new(basis.n(), 2 * basis.half_degree(), terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramEntry {
    pub block: Block,
    pub i: usize,
    pub j: usize,
    pub coeff: f64,
}

/// `Σ coeff · block[i][j] = 0` for one monomial of degree `s + d + 1`.
#[derive(Clone, Debug)]
pub struct GramRow {
    pub monomial: Monomial,
    pub entries: Vec<GramEntry>,
}

/// Coefficientwise form of `z(x)ᵀ Q z(x) - lie_numerator(P) = 0`.
#[derive(Clone, Debug)]
pub struct AffineGramSystem {
    pub shape: CandidateShape,
    pub rows: Vec<GramRow>,
}

pub fn assemble(f: &VectorField, shape: &CandidateShape) -> Result<AffineGramSystem> {
    let map = lie_numerator_map(f, shape)?;
    let row_basis = shape.row_basis();
    let mut rows: Vec<GramRow> = row_basis
        .monomials()
        .iter()
        .map(|m| GramRow {
            monomial: m.clone(),
            entries: Vec::new(),
        })
        .collect();

    let z = &shape.z_basis;
    for (a, b) in upper_coords(z.len()) {
        let mono = z.get(a).mul(z.get(b));
        let k = row_basis.index_of(&mono).expect("degree bookkeeping");
        rows[k].entries.push(GramEntry {
            block: Block::Q,
            i: a,
            j: b,
            coeff: if a == b { 1.0 } else { 2.0 },
        });
    }
    for ((i, j), img) in map.images() {
        for (mono, c) in img.terms() {
            let k = row_basis.index_of(mono).expect("degree bookkeeping");
            rows[k].entries.push(GramEntry {
                block: Block::P,
                i: *i,
                j: *j,
                coeff: -c,
            });
        }
    }
    for row in &mut rows {
        row.entries
            .sort_by(|x, y| (x.block, x.i, x.j).cmp(&(y.block, y.i, y.j)));
    }
    Ok(AffineGramSystem {
        shape: shape.clone(),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triplet {
    pub row: usize,
    pub block: Block,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Sparse triplet dump of a system, for debugging with external solvers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripletJson {
    pub n: usize,
    pub s: u32,
    pub r: u32,
    pub d: u32,
    pub rows: usize,
    pub p_size: usize,
    pub q_size: usize,
    pub triplets: Vec<Triplet>,
}

impl AffineGramSystem {
    pub fn p_size(&self) -> usize {
        self.shape.m_basis.len()
    }

    pub fn q_size(&self) -> usize {
        self.shape.z_basis.len()
    }

    /// Row-wise residuals `Σ coeff · block[i][j]` at the given matrices.
    pub fn residuals(&self, p: &SymMatrix, q: &SymMatrix) -> Result<Vec<f64>> {
        for (m, expected) in [(p, self.p_size()), (q, self.q_size())] {
            if m.dim() != expected {
                return Err(Error::MatrixSize {
                    expected,
                    found: m.dim(),
                });
            }
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.entries
                    .iter()
                    .map(|e| {
                        let m = if e.block == Block::P { p } else { q };
                        e.coeff * m.get(e.i, e.j)
                    })
                    .sum()
            })
            .collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| &r.entries)
            .fold(0.0, |m, e| m.max(e.coeff.abs()))
    }

    pub fn to_triplets(&self) -> TripletJson {
        let triplets = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(k, row)| {
                row.entries.iter().map(move |e| Triplet {
                    row: k,
                    block: e.block,
                    i: e.i,
                    j: e.j,
                    value: e.coeff,
                })
            })
            .collect();
        TripletJson {
            n: self.shape.n,
            s: self.shape.s,
            r: self.shape.r,
            d: self.shape.d,
            rows: self.rows.len(),
            p_size: self.p_size(),
            q_size: self.q_size(),
            triplets,
        }
    }
}
