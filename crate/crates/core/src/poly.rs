//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(m, Rational::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Highest exponent of any single variable.
    pub fn max_exponent(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, monomial: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(monomial);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[var] -= 1;
            out.add_term(dm, c * Rational::from_integer(m[var].into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "evaluation point arity");
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(rational::to_f64(c), |acc, (&e, &x)| acc * x.powi(e as i32))
            })
            .sum()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `x_i ↦ images[i]`; all images share an arity.
    pub fn compose(&self, images: &[Poly]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, Poly::nvars);
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (img, &e) in images.iter().zip(m) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Substitutes the linear change of variables `x ↦ A x`.
    pub fn substitute_linear(&self, matrix: &[Vec<Rational>]) -> Self {
        let n = self.nvars;
        let images: Vec<Poly> = matrix
            .iter()
            .map(|row| {
                let mut p = Self::zero(n);
                for (j, a) in row.iter().enumerate() {
                    let mut m = vec![0; n];
                    m[j] = 1;
                    p.add_term(m, a.clone());
                }
                p
            })
            .collect();
        self.compose(&images)
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let abs = c.abs();
            let is_const = m.iter().all(|&e| e == 0);
            let mut factors = Vec::new();
            if !abs.is_one() || is_const {
                factors.push(rational::format_rational(&abs));
            }
            for (i, &e) in m.iter().enumerate() {
                let name = names.get(i).copied().unwrap_or("x");
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial arity mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct PolyParseError(pub String);

/// Parses expressions such as `z^2 + 1/2`, `-3/4*x1*y1^2 + x2`, `2z`.
///
/// Numeric literals are integers or `p/q` fractions; variables come from
/// `names`. Products may be written with `*` or by juxtaposition.
pub fn parse_poly(text: &str, names: &[&str]) -> Result<Poly, PolyParseError> {
    let nvars = names.len();
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(PolyParseError("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut out = Poly::zero(nvars);
    let mut first = true;
    while pos < chars.len() {
        let mut sign = Rational::one();
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if !first => return Err(PolyParseError(format!("expected '+' or '-' at offset {pos}"))),
            _ => {}
        }
        first = false;
        let mut coeff = sign;
        let mut mono = vec![0u32; nvars];
        let mut factors = 0;
        loop {
            if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                break;
            }
            if chars[pos] == '*' {
                if factors == 0 {
                    return Err(PolyParseError(format!("dangling '*' at offset {pos}")));
                }
                pos += 1;
                if pos >= chars.len() || chars[pos] == '+' || chars[pos] == '-' {
                    return Err(PolyParseError("dangling '*'".into()));
                }
            }
            let c = chars[pos];
            if c.is_ascii_digit() {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < chars.len() && chars[pos] == '/' {
                    pos += 1;
                    let dstart = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if dstart == pos {
                        return Err(PolyParseError(format!("malformed fraction at offset {start}")));
                    }
                }
                let lit: String = chars[start..pos].iter().collect();
                let value = rational::parse_rational(&lit)
                    .ok_or_else(|| PolyParseError(format!("malformed rational '{lit}'")))?;
                coeff *= value;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = pos;
                while pos < chars.len() && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_') {
                    pos += 1;
                }
                let ident: String = chars[start..pos].iter().collect();
                let var = names
                    .iter()
                    .position(|n| *n == ident)
                    .ok_or_else(|| PolyParseError(format!("unknown variable '{ident}'")))?;
                let mut exp = 1u32;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    let estart = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let lit: String = chars[estart..pos].iter().collect();
                    exp = lit
                        .parse()
                        .map_err(|_| PolyParseError(format!("malformed exponent after '{ident}'")))?;
                }
                mono[var] += exp;
            } else {
                return Err(PolyParseError(format!("unexpected character '{c}'")));
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(PolyParseError("empty term".into()));
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parse_and_evaluate() {
        let p = parse_poly("z^2 + 1/2", &["z"]).unwrap();
        assert_eq!(p.eval(&[int(3)]), frac(19, 2));
        let q = parse_poly("-3/4*x*y^2 + 2y - 1", &["x", "y"]).unwrap();
        assert_eq!(q.eval(&[int(2), int(1)]), frac(-1, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_poly("", &["z"]).is_err());
        assert!(parse_poly("w", &["z"]).is_err());
        assert!(parse_poly("1/0", &["z"]).is_err());
        assert!(parse_poly("z +", &["z"]).is_err());
        assert!(parse_poly("z*", &["z"]).is_err());
    }

    #[test]
    fn derivative_and_compose() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = &(&x * &x) * &y;
        assert_eq!(p.derivative(0), &(&x * &y).scale(&int(2)) + &Poly::zero(2));
        // x ↦ y, y ↦ x
        let swapped = p.compose(&[y.clone(), x.clone()]);
        assert_eq!(swapped, &(&y * &y) * &x);
    }

    #[test]
    fn display_round_trips() {
        let names = ["x", "y"];
        let p = parse_poly("-x^2*y + 1/3 - y", &names).unwrap();
        let again = parse_poly(&p.display_with(&names), &names).unwrap();
        assert_eq!(p, again);
    }
}
