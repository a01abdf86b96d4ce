//! Text and JSON encodings of polynomials.
//!
//! Text form: a sum of terms `coeff * x1^a1 * ... * xn^an`, e.g.
//! `2*x1^3 - 0.5*x1*x2^2 + x2^3`. Coefficients default to 1, exponents to 1,
//! and variables are written `x1..xn`.
//!
//! JSON form: `{"n": 2, "degree": 3, "terms": [{"exps": [3, 0], "coeff": 2.0}]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{HomogPoly, Monomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub n: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl From<&HomogPoly> for PolyJson {
    fn from(p: &HomogPoly) -> Self {
        PolyJson {
            n: p.n(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    exps: m.exponents().to_vec(),
                    coeff: c,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for HomogPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        HomogPoly::new(
            j.n,
            j.degree,
            j.terms.into_iter().map(|t| (Monomial::new(t.exps), t.coeff)),
        )
    }
}

impl HomogPoly {
    /// Parses a homogeneous polynomial in text form. A zero polynomial parses
    /// with degree 0.
    pub fn parse(text: &str, n: usize) -> Result<HomogPoly> {
        let mut parts = parse_graded(text, n)?;
        match parts.len() {
            0 => Ok(HomogPoly::zero(n, 0)),
            1 => Ok(parts.remove(0)),
            _ => Err(Error::NotHomogeneous(format!(
                "`{text}` mixes degrees {:?}",
                parts.iter().map(|p| p.degree()).collect::<Vec<_>>()
            ))),
        }
    }
}

/// Parses a general polynomial into its nonzero homogeneous parts, ordered by
/// increasing degree.
pub fn parse_graded(text: &str, n: usize) -> Result<Vec<HomogPoly>> {
    let tokens = tokenize(text)?;
    let mut by_degree: BTreeMap<u32, Vec<(Monomial, f64)>> = BTreeMap::new();
    let mut pos = 0;
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = 1.0;
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -1.0;
                pos += 1;
            }
            _ if !first => return Err(Error::Parse(format!("expected `+` or `-` in `{text}`"))),
            _ => {}
        }
        first = false;
        let (coeff, exps, next) = parse_term(&tokens, pos, n, text)?;
        pos = next;
        let m = Monomial::new(exps);
        by_degree
            .entry(m.degree())
            .or_default()
            .push((m, sign * coeff));
    }
    let mut out = Vec::new();
    for (deg, terms) in by_degree {
        let p = HomogPoly::new(n, deg, terms)?;
        if !p.is_zero() {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse(format!(
                        "variable without index at offset {i} in `{text}`"
                    )));
                }
                let idx: usize = chars[start..j].iter().collect::<String>().parse().unwrap();
                if idx == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                out.push(Token::Var(idx - 1));
                i = j;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                    let mut k = j + 1;
                    if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let s: String = chars[start..j].iter().collect();
                let v = s
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
                out.push(Token::Num(v));
                i = j;
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` in `{text}`"
                )))
            }
        }
    }
    Ok(out)
}

fn parse_term(tokens: &[Token], mut pos: usize, n: usize, text: &str) -> Result<(f64, Vec<u32>, usize)> {
    let mut coeff = 1.0;
    let mut exps = vec![0u32; n];
    let mut expect_factor = true;
    while pos < tokens.len() {
        if !expect_factor {
            match tokens[pos] {
                Token::Star => {
                    pos += 1;
                    expect_factor = true;
                    continue;
                }
                Token::Plus | Token::Minus => break,
                _ => return Err(Error::Parse(format!("expected `*` in `{text}`"))),
            }
        }
        match tokens[pos] {
            Token::Num(v) => {
                coeff *= v;
                pos += 1;
            }
            Token::Var(i) => {
                if i >= n {
                    return Err(Error::Dimension {
                        expected: n,
                        found: i + 1,
                    });
                }
                pos += 1;
                let mut e = 1;
                if pos < tokens.len() && tokens[pos] == Token::Caret {
                    match tokens.get(pos + 1) {
                        Some(Token::Num(v)) if v.fract() == 0.0 && *v >= 0.0 => {
                            e = *v as u32;
                            pos += 2;
                        }
                        _ => {
                            return Err(Error::Parse(format!(
                                "exponent must be a nonnegative integer in `{text}`"
                            )))
                        }
                    }
                }
                exps[i] += e;
            }
            _ => return Err(Error::Parse(format!("expected a factor in `{text}`"))),
        }
        expect_factor = false;
    }
    if expect_factor {
        return Err(Error::Parse(format!("dangling operator in `{text}`")));
    }
    Ok((coeff, exps, pos))
}
