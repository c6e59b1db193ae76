//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! A [`Cyclotomic`] stores its value as a polynomial in `ζ_N` reduced modulo
//! the `N`-th cyclotomic polynomial `Φ_N`, which makes the representation
//! canonical: two values of the same order are equal iff their coefficient
//! vectors are. Values of different orders are compared and combined after
//! promotion to the least common multiple of the orders.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::poly::{parse_poly, PolyParseError};
use crate::rational::{self, Rational};

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first. `Φ_n` is monic.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(p) = cyclotomic_cache().lock().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let div = cyclotomic_polynomial(d);
        num = divide_monic(&num, &div);
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().expect("cache poisoned").insert(n, arc.clone());
    arc
}

fn divide_monic(num: &[i64], div: &[i64]) -> Vec<i64> {
    let dn = div.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (j, &d) in div.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (cyclotomic_polynomial(n).len() - 1) as u32
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

/// An element of ℚ(ζ_N), ζ_N = e^{2πi/N}.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds `Σ coeffs[k] ζ_N^k`; exponents are taken modulo `N`.
    pub fn new(order: u32, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let n = order as usize;
        let mut folded = vec![Rational::zero(); n];
        for (k, c) in coeffs.into_iter().enumerate() {
            folded[k % n] += c;
        }
        Self::reduced(order, folded)
    }

    fn reduced(order: u32, mut coeffs: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for i in (deg..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &p) in phi.iter().enumerate().take(deg) {
                if p != 0 {
                    coeffs[i - deg + j] -= &c * Rational::from_integer(p.into());
                }
            }
        }
        coeffs.resize(deg, Rational::zero());
        Self { order, coeffs }
    }

    pub fn from_rational(value: Rational) -> Self {
        Self { order: 1, coeffs: vec![value] }
    }

    pub fn from_int(value: i64) -> Self {
        Self::from_rational(rational::int(value))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_N^k`.
    pub fn root_of_unity(order: u32, k: u32) -> Self {
        let mut coeffs = vec![Rational::zero(); order as usize];
        coeffs[(k % order) as usize] = Rational::one();
        Self::reduced(order, coeffs)
    }

    /// Parses a polynomial in `z` (meaning `ζ_N`) with rational coefficients.
    pub fn parse(text: &str, order: u32) -> Result<Self, PolyParseError> {
        let p = parse_poly(text, &["z"])?;
        let mut coeffs = vec![Rational::zero(); order as usize];
        for (m, c) in p.terms() {
            coeffs[(m[0] % order) as usize] += c;
        }
        Ok(Self::new(order, coeffs))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Canonical coefficients (degree below `φ(N)`).
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Re-expresses the value in ℚ(ζ_M); `M` must be a multiple of the order.
    pub fn promote(&self, order: u32) -> Self {
        assert!(order.is_multiple_of(self.order), "cannot promote ζ_{} into ζ_{}", self.order, order);
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut coeffs = vec![Rational::zero(); order as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k * step] = c.clone();
        }
        Self::reduced(order, coeffs)
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let order = lcm(a.order, b.order);
        (a.promote(order), b.promote(order))
    }

    /// Complex conjugation, ζ ↦ ζ^{N-1}.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - k) % n] += c;
        }
        Self::reduced(self.order, coeffs)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Image under the canonical embedding ζ_N ↦ e^{2πi/N}.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (k, c)| {
            let angle = std::f64::consts::TAU * k as f64 / n;
            let c = rational::to_f64(c);
            (re + c * angle.cos(), im + c * angle.sin())
        })
    }

    /// Sign of a real value, certified against the floating-point error of
    /// the embedding. `None` if the value is not real or too close to zero to
    /// decide in double precision without being exactly zero.
    pub fn real_sign(&self) -> Option<Ordering> {
        if !self.is_real() {
            return None;
        }
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Some(r.cmp(&Rational::zero()));
        }
        let (re, _) = self.to_complex();
        let scale: f64 = self.coeffs.iter().map(|c| rational::to_f64(&c.abs())).sum();
        let bound = 1e-12 * scale.max(1.0);
        if re > bound {
            Some(Ordering::Greater)
        } else if re < -bound {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::aligned(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Cyclotomic::aligned(self, rhs);
        Cyclotomic {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if let Some(r) = self.as_rational() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(&r);
        }
        let (a, b) = Cyclotomic::aligned(self, rhs);
        let len = a.coeffs.len() + b.coeffs.len();
        let mut prod = vec![Rational::zero(); len.max(1)];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::reduced(a.order, prod)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, &Rational)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        terms.reverse();
        for (idx, (k, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let abs = c.abs();
            let coeff = rational::format_rational(&abs);
            match (k, abs.is_one()) {
                (0, _) => f.write_str(&coeff)?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{coeff}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{coeff}*z^{k}")?,
            }
        }
        Ok(())
    }
}
