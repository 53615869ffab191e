//! Laurent polynomials `Z[v, v^-1]`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// `Σ c_i v^(min + i)`; trimmed so that the first and last coefficients are
/// nonzero, and the zero polynomial has no coefficients and `min == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    min: i32,
    coeffs: Vec<i64>,
}

fn ck_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

fn ck_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Laurent coefficient overflow")
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, c)
    }

    /// `c v^e`.
    pub fn monomial(e: i32, c: i64) -> Self {
        Self::from_coeffs(e, vec![c])
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn v_inv() -> Self {
        Self::monomial(-1, 1)
    }

    /// `v + v^-1`.
    pub fn quantum_two() -> Self {
        Self::from_coeffs(-1, vec![1, 0, 1])
    }

    pub fn from_coeffs(min: i32, coeffs: Vec<i64>) -> Self {
        let mut p = LaurentPoly { min, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut acc = Self::zero();
        for (e, c) in terms {
            acc += &Self::monomial(e, c);
        }
        acc
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.min = 0;
            }
            Some(k) => {
                let last = self.coeffs.iter().rposition(|&c| c != 0).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..k);
                self.min += k as i32;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.min)
    }

    pub fn max_exp(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.min + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, e: i32) -> i64 {
        let i = e - self.min;
        if i < 0 {
            return 0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0)
    }

    /// Nonzero terms `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (self.min + i as i32, c))
    }

    /// The involution `v ↦ v^-1`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.coeffs.clone();
        c.reverse();
        LaurentPoly { min: -self.max_exp().unwrap(), coeffs: c }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min: self.min + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_coeffs(self.min, self.coeffs.iter().map(|&c| ck_mul(c, k)).collect())
    }

    /// Evaluation at `v = 1`.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().fold(0, |a, &c| ck_add(a, c))
    }

    pub fn is_nonneg(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    /// Coefficientwise `self <= other`.
    pub fn leq_coeffwise(&self, other: &Self) -> bool {
        (other - self).is_nonneg()
    }

    /// Part with strictly positive exponents.
    pub fn positive_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|&(e, _)| e > 0))
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    fn add_scaled(&mut self, other: &Self, sign: i64) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.scale(sign);
            return;
        }
        let lo = self.min.min(other.min);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut c = vec![0i64; (hi - lo + 1) as usize];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[(self.min - lo) as usize + i] = x;
        }
        for (i, &x) in other.coeffs.iter().enumerate() {
            let k = (other.min - lo) as usize + i;
            c[k] = ck_add(c[k], ck_mul(x, sign));
        }
        *self = Self::from_coeffs(lo, c);
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, 1);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, -1);
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = ck_add(c[i + j], ck_mul(a, b));
            }
        }
        LaurentPoly::from_coeffs(self.min + rhs.min, c)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if mag != 1 {
                        write!(f, "{}", mag)?;
                    }
                    if e == 1 {
                        write!(f, "v")?;
                    } else {
                        write!(f, "v^{}", e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the rendering produced by `Display`; whitespace is optional.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid Laurent polynomial {:?}", s));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<(i64, &str)> = Vec::new();
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut sign = 1i64;
        if bytes[0] == b'-' || bytes[0] == b'+' {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            start = 1;
        }
        let mut i = start;
        while i <= bytes.len() {
            let at_end = i == bytes.len();
            // a sign directly after '^' belongs to the exponent
            let is_sep = !at_end && (bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^';
            if at_end || is_sep {
                terms.push((sign, &compact[start..i]));
                if !at_end {
                    sign = if bytes[i] == b'-' { -1 } else { 1 };
                }
                start = i + 1;
            }
            i += 1;
        }
        let mut acc = LaurentPoly::zero();
        for (sign, t) in terms {
            if t.is_empty() {
                return Err(bad());
            }
            let (coef, exp) = match t.find('v') {
                None => (t.parse::<i64>().map_err(|_| bad())?, 0),
                Some(p) => {
                    let c = if p == 0 { 1 } else { t[..p].parse::<i64>().map_err(|_| bad())? };
                    let rest = &t[p + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            acc += &LaurentPoly::monomial(exp, sign * coef);
        }
        Ok(acc)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
