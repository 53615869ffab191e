//! Exact arithmetic in the ring `K = Z[θ]`, `θ = 2cos(π/N)`.
//!
//! Every Cartan pairing `-2cos(π/m)` of a Coxeter system whose finite
//! entries all divide `N` lives in this ring. Elements are stored as the
//! canonical remainder modulo the minimal polynomial `p_N` of `θ`, so
//! equality and the zero test are purely syntactic.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Starting precision (in bits) of the interval refinement used by [`CycInt::sign`].
const START_PRECISION: u64 = 64;

/// Static data attached to one ring parameter `N`.
#[derive(Debug)]
pub struct CycRing {
    n: u32,
    /// Monic minimal polynomial of θ, low degree first (length `degree + 1`).
    minpoly: Vec<i64>,
    theta: f64,
    /// Interval bracket `[lo, hi] / 2^bits` of θ, refined on demand.
    bracket: Mutex<(BigInt, BigInt, u64)>,
}

impl CycRing {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree of `p_N`, i.e. the rank of `K` as a `Z`-module.
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[i64] {
        &self.minpoly
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn build(n: u32) -> Self {
        assert!(n >= 1, "ring parameter must be positive");
        let minpoly = if n == 1 {
            // θ = 2cos(π) = -2
            vec![2, 1]
        } else {
            minimal_polynomial(n)
        };
        let theta = 2.0 * (std::f64::consts::PI / n as f64).cos();
        let ring = CycRing {
            n,
            minpoly,
            theta,
            bracket: Mutex::new((BigInt::zero(), BigInt::zero(), 0)),
        };
        ring.init_bracket();
        ring
    }

    /// Evaluates `p_N` at the dyadic `a / 2^bits` and returns the sign.
    fn minpoly_sign_at(&self, a: &BigInt, bits: u64) -> i32 {
        let d = self.degree();
        let mut acc = BigInt::zero();
        for (i, &c) in self.minpoly.iter().enumerate() {
            acc += (BigInt::from(c) * a.pow(i as u32)) << (bits as usize * (d - i));
        }
        sign_of(&acc)
    }

    fn init_bracket(&self) {
        if self.degree() == 1 {
            // θ is an integer; it never appears in a canonical form.
            return;
        }
        // The next-largest conjugate is 2cos(3π/N); isolate θ well inside the gap.
        let gap = self.theta - 2.0 * (3.0 * std::f64::consts::PI / self.n as f64).cos();
        let eps = (gap / 4.0).min(1e-3);
        let bits = 32u64;
        let scale = (1u64 << bits) as f64;
        let lo = BigInt::from(((self.theta - eps) * scale).floor() as i64);
        let hi = BigInt::from(((self.theta + eps) * scale).ceil() as i64);
        let (slo, shi) = (self.minpoly_sign_at(&lo, bits), self.minpoly_sign_at(&hi, bits));
        assert!(slo * shi < 0, "failed to isolate θ for N = {}", self.n);
        *self.bracket.lock().unwrap() = (lo, hi, bits);
        self.refine_to(START_PRECISION);
    }

    /// Bisects the bracket until its width is `2^-bits`.
    fn refine_to(&self, bits: u64) {
        let mut guard = self.bracket.lock().unwrap();
        let (lo, hi, cur) = &mut *guard;
        if *cur >= bits {
            return;
        }
        let shift = (bits - *cur) as usize;
        *lo <<= shift;
        *hi <<= shift;
        *cur = bits;
        let s_lo = self.minpoly_sign_at(lo, bits);
        while &*hi - &*lo > BigInt::from(1) {
            let mid: BigInt = (&*lo + &*hi) >> 1usize;
            let s_mid = self.minpoly_sign_at(&mid, bits);
            if s_mid == 0 {
                *lo = mid.clone();
                *hi = mid;
                break;
            }
            if s_mid == s_lo {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }

    fn bracket_at(&self, bits: u64) -> (BigInt, BigInt) {
        self.refine_to(bits);
        let guard = self.bracket.lock().unwrap();
        let (lo, hi, cur) = &*guard;
        let shift = (*cur - bits) as usize;
        (lo >> shift, (hi + ((BigInt::from(1) << shift) - 1)) >> shift)
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Integer polynomial helpers (low degree first).
fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn cyclotomic(k: u32) -> Vec<i64> {
    // Φ_k = (z^k - 1) / Π_{d | k, d < k} Φ_d
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    let mut den = vec![1i64];
    for d in 1..k {
        if k.is_multiple_of(d) {
            den = poly_mul(&den, &cyclotomic(d));
        }
    }
    poly_div_exact(&num, &den)
}

/// `p_N` from `Φ_{2N}(z) = z^k p_N(z + 1/z)`.
fn minimal_polynomial(n: u32) -> Vec<i64> {
    let phi = cyclotomic(2 * n);
    let k = (phi.len() - 1) / 2;
    let mut p = vec![0i64; k + 1];
    p[0] = phi[k];
    for j in 1..=k {
        let dj = dickson(j);
        for (i, &c) in dj.iter().enumerate() {
            p[i] += phi[k + j] * c;
        }
    }
    p
}

/// Integer polynomial `D_j` with `D_j(z + 1/z) = z^j + z^-j`.
fn dickson(j: usize) -> Vec<i64> {
    let mut prev = vec![2i64];
    let mut cur = vec![0i64, 1];
    if j == 0 {
        return prev;
    }
    for _ in 1..j {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Returns the shared ring data for parameter `n`.
pub fn ring(n: u32) -> &'static CycRing {
    static RINGS: OnceLock<Mutex<HashMap<u32, &'static CycRing>>> = OnceLock::new();
    let map = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = map.lock().unwrap().get(&n) {
        return r;
    }
    let built: &'static CycRing = Box::leak(Box::new(CycRing::build(n)));
    map.lock().unwrap().entry(n).or_insert(built)
}

/// An element `Σ c_i θ^i` of `K`, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    n: u32,
    coeffs: Vec<i64>,
}

fn ck_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("cyclotomic coefficient overflow")
}

fn ck_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("cyclotomic coefficient overflow")
}

impl CycInt {
    pub fn zero(n: u32) -> Self {
        Self::from_int(n, 0)
    }

    pub fn one(n: u32) -> Self {
        Self::from_int(n, 1)
    }

    /// Integer embedding `Z -> K`.
    pub fn from_int(n: u32, k: i64) -> Self {
        let mut coeffs = vec![0; ring(n).degree()];
        coeffs[0] = k;
        CycInt { n, coeffs }
    }

    /// θ itself.
    pub fn theta(n: u32) -> Self {
        Self::from_poly(n, &[0, 1])
    }

    /// Reduces an arbitrary integer polynomial in θ.
    pub fn from_poly(n: u32, poly: &[i64]) -> Self {
        let r = ring(n);
        let d = r.degree();
        let mut c: Vec<i64> = poly.to_vec();
        if c.len() < d {
            c.resize(d, 0);
        }
        // θ^d = -Σ_{i<d} p_i θ^i
        for top in (d..c.len()).rev() {
            let lead = c[top];
            if lead == 0 {
                continue;
            }
            c[top] = 0;
            for i in 0..d {
                let idx = top - d + i;
                c[idx] = ck_add(c[idx], -ck_mul(lead, r.minpoly[i]));
            }
        }
        c.truncate(d);
        CycInt { n, coeffs: c }
    }

    /// `-2cos(π/m)` where `m = None` stands for `∞`. Requires `m | N` unless
    /// the value is an integer (`m ∈ {1, 2, 3, ∞}`).
    pub fn cos_entry(n: u32, m: Option<u32>) -> Result<Self> {
        match m {
            None => Ok(Self::from_int(n, -2)),
            Some(1) => Ok(Self::from_int(n, 2)),
            Some(2) => Ok(Self::zero(n)),
            Some(3) => Ok(Self::from_int(n, -1)),
            Some(m) => {
                if m == 0 || !n.is_multiple_of(m) {
                    return Err(Error::RingParameter { n, m });
                }
                let d = dickson((n / m) as usize);
                Ok(-Self::from_poly(n, &d))
            }
        }
    }

    /// Wraps coefficients that are already reduced (length = ring degree).
    pub fn from_canonical(n: u32, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), ring(n).degree(), "not a canonical coefficient vector");
        CycInt { n, coeffs }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// The integer value when no power of θ occurs.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn to_f64(&self) -> f64 {
        let t = ring(self.n).theta;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c as f64)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RingMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| ck_add(a, b)).collect();
        Ok(CycInt { n: self.n, coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if let Some(k) = self.as_integer() {
            return Ok(other.scale(k));
        }
        if let Some(k) = other.as_integer() {
            return Ok(self.scale(k));
        }
        let mut prod = vec![0i64; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = ck_add(prod[i + j], ck_mul(a, b));
            }
        }
        Ok(Self::from_poly(self.n, &prod))
    }

    pub fn scale(&self, k: i64) -> Self {
        CycInt { n: self.n, coeffs: self.coeffs.iter().map(|&c| ck_mul(c, k)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_int_exact(&self, k: i64) -> Option<Self> {
        if k == 0 || self.coeffs.iter().any(|&c| c % k != 0) {
            return None;
        }
        Some(CycInt { n: self.n, coeffs: self.coeffs.iter().map(|&c| c / k).collect() })
    }

    /// Exact sign of the real number obtained by `θ ↦ 2cos(π/N)`.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.coeffs.len() == 1 {
            return self.coeffs[0].signum() as i32;
        }
        // Fast path: floating evaluation with a generous error bound.
        let approx = self.to_f64();
        let magnitude: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (c as f64).abs() * 2f64.powi(i as i32))
            .sum();
        if approx.abs() > 1e-9 * (1.0 + magnitude) {
            return if approx > 0.0 { 1 } else { -1 };
        }
        let r = ring(self.n);
        let mut bits = START_PRECISION;
        loop {
            let (lo, hi) = r.bracket_at(bits);
            let d = self.coeffs.len() - 1;
            // Scale everything by 2^(bits*d); θ > 0 so powers are monotone.
            let mut low = BigInt::zero();
            let mut high = BigInt::zero();
            for (i, &c) in self.coeffs.iter().enumerate() {
                let shift = bits as usize * (d - i);
                let a = (BigInt::from(c) * lo.pow(i as u32)) << shift;
                let b = (BigInt::from(c) * hi.pow(i as u32)) << shift;
                if c >= 0 {
                    low += a;
                    high += b;
                } else {
                    low += b;
                    high += a;
                }
            }
            if low.is_positive() {
                return 1;
            }
            if high.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "θ".to_string(),
                _ => format!("θ^{}", i),
            };
            let term = match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                (-1, _) => format!("-{}", mono),
                _ => format!("{}{}", c, mono),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(t);
                }
            }
        }
        write!(f, "{}", out)
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("mixed ring parameters")
            }
        }
        impl $trait<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
