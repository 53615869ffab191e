//! Polynomials in the simple roots `α_s` over `K`, the quotient `R_I` that
//! kills `α_s` for `s ∈ I`, and fractions with denominators that are products
//! of (images of) roots.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coxeter::{Element, GroupBall, ParabolicSubset};
use crate::error::{Error, Result};
use crate::scalars::{ring, CycInt};

/// Exponent vector, one entry per simple root.
pub type Monomial = Vec<u16>;

/// A polynomial in `α_1 .. α_r` over `K`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: u32,
    nvars: usize,
    terms: BTreeMap<Monomial, CycInt>,
}

/// A polynomial whose variables indexed by `I` have been set to zero.
pub type PolyRI = Poly;

impl Poly {
    pub fn zero(n: u32, nvars: usize) -> Self {
        Poly { n, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycInt, nvars: usize) -> Self {
        let mut p = Self::zero(c.n(), nvars);
        p.add_term(vec![0; nvars], &c);
        p
    }

    pub fn one(n: u32, nvars: usize) -> Self {
        Self::constant(CycInt::one(n), nvars)
    }

    /// The variable `α_i`.
    pub fn var(n: u32, nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(n, nvars);
        p.add_term(m, &CycInt::one(n));
        p
    }

    pub fn from_linear(form: &LinearForm) -> Self {
        let nvars = form.coeffs.len();
        let mut p = Self::zero(form.n, nvars);
        for (i, c) in form.coeffs.iter().enumerate() {
            let mut m = vec![0; nvars];
            m[i] = 1;
            p.add_term(m, c);
        }
        p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> CycInt {
        self.terms.get(m).cloned().unwrap_or_else(|| CycInt::zero(self.n))
    }

    pub fn add_term(&mut self, m: Monomial, c: &CycInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = &*e + c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Degree in the grading where every `α_s` has degree 2; `None` for zero
    /// or non-homogeneous polynomials.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| 2 * m.iter().map(|&k| k as usize).sum::<usize>());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycInt::from_int(self.n, -1))
    }

    pub fn scale(&self, c: &CycInt) -> Self {
        let mut out = Self::zero(self.n, self.nvars);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), &(d * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `α_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Self {
        let mut out = Self::zero(self.n, self.nvars);
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Self::one(self.n, p.nvars), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut term = Self::constant(c.clone(), self.nvars);
            for (i, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Sets `α_s = 0` for `s ∈ I`.
    pub fn reduce_mod(&self, i: ParabolicSubset) -> PolyRI {
        Poly {
            n: self.n,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().enumerate().all(|(k, &e)| e == 0 || !i.contains(k)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient by a nonzero linear form, if it exists over `K`.
    pub fn div_linear(&self, form: &LinearForm) -> Option<Self> {
        let j = form.coeffs.iter().position(|c| !c.is_zero())?;
        let lead = &form.coeffs[j];
        let mut rest = self.clone();
        let mut quot = Self::zero(self.n, self.nvars);
        // Peel terms by decreasing α_j-degree; each step lowers that degree.
        while let Some((m, c)) = rest
            .terms
            .iter()
            .max_by(|a, b| (a.0[j], a.0).cmp(&(b.0[j], b.0)))
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if m[j] == 0 {
                return None;
            }
            let q = divide_in_k(&c, lead)?;
            let mut qm = m.clone();
            qm[j] -= 1;
            for (i, fc) in form.coeffs.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let mut mm = qm.clone();
                mm[i] += 1;
                rest.add_term(mm, &-(&q * fc));
            }
            quot.add_term(qm, &q);
        }
        Some(quot)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64() * m.iter().zip(point).map(|(&k, &x)| x.powi(k as i32)).product::<f64>())
            .sum()
    }

    /// Exact value at an integer point.
    pub fn eval_int(&self, point: &[i64]) -> CycInt {
        let mut acc = CycInt::zero(self.n);
        for (m, c) in &self.terms {
            let k: i64 = m.iter().zip(point).map(|(&e, &x)| x.pow(e as u32)).product();
            acc = &acc + &c.scale(k);
        }
        acc
    }

    /// The polynomial as a `K`-constant, if it has degree 0.
    pub fn as_constant(&self) -> Option<CycInt> {
        if self.is_zero() {
            return Some(CycInt::zero(self.n));
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.iter().all(|&k| k == 0) {
                return Some(c.clone());
            }
        }
        None
    }
}

/// `a / b` in `K`, or `None` when the quotient leaves `K`.
fn divide_in_k(a: &CycInt, b: &CycInt) -> Option<CycInt> {
    if let Some(k) = b.as_integer() {
        return a.div_int_exact(k);
    }
    let inv = KFrac::from_cyc(b).inv()?;
    KFrac::from_cyc(a).mul(&inv).to_cyc()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("a{}", i + 1) } else { format!("a{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    format!("{}", c)
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("({})*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `Σ c_i α_i`; used for roots and their images in `R_I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    n: u32,
    coeffs: Vec<CycInt>,
}

impl PartialOrd for CycInt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycInt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n(), self.coeffs()).cmp(&(other.n(), other.coeffs()))
    }
}

impl LinearForm {
    pub fn new(coeffs: Vec<CycInt>) -> Self {
        let n = coeffs[0].n();
        LinearForm { n, coeffs }
    }

    /// `x(α_s)` in coordinates of `Δ`.
    pub fn root_image(ball: &GroupBall, x: Element, s: usize) -> Self {
        Self::new(ball.root_image(x, s))
    }

    pub fn simple(ball: &GroupBall, s: usize) -> Self {
        Self::root_image(ball, Element::IDENTITY, s)
    }

    pub fn coeffs(&self) -> &[CycInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn support(&self) -> ParabolicSubset {
        ParabolicSubset::from_indices((0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()))
    }

    pub fn reduce_mod(&self, i: ParabolicSubset) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if i.contains(k) { CycInt::zero(self.n) } else { c.clone() })
            .collect();
        LinearForm { n: self.n, coeffs }
    }

    /// `x(Σ c_i α_i) = Σ c_i x(α_i)`.
    pub fn act(&self, ball: &GroupBall, x: Element) -> Self {
        let r = self.coeffs.len();
        let mut out = vec![CycInt::zero(self.n); r];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, v) in ball.root_image(x, i).iter().enumerate() {
                out[k] = &out[k] + &(c * v);
            }
        }
        LinearForm { n: self.n, coeffs: out }
    }

    /// Splits off the sign so that the first nonzero coefficient is positive.
    pub fn normalized(&self) -> (i32, Self) {
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).map_or(0, |c| c.sign());
        if lead < 0 {
            (-1, LinearForm { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() })
        } else {
            (1, self.clone())
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.coeffs.iter().zip(point).map(|(c, x)| c.to_f64() * x).sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::from_linear(self))
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The action `w(f)`: each `α_s` is replaced by `w(α_s)`.
pub fn w_action(ball: &GroupBall, w: Element, f: &Poly) -> Poly {
    let images: Vec<Poly> =
        (0..ball.rank()).map(|s| Poly::from_linear(&LinearForm::root_image(ball, w, s))).collect();
    f.substitute(&images)
}

/// `∂_s(f) = (f - s f) / α_s`.
pub fn demazure(ball: &GroupBall, s: usize, f: &Poly) -> Result<Poly> {
    let sx = ball.from_word(&[s as u8])?;
    let diff = f.sub(&w_action(ball, sx, f));
    diff.div_linear(&LinearForm::simple(ball, s))
        .ok_or_else(|| Error::Internal("f - s(f) is not divisible by α_s".into()))
}

/// `numerator / Π denominators` in `Q_I`; denominators are normalized linear
/// forms kept as a sorted multiset. Equality is by cross-multiplication.
#[derive(Clone)]
pub struct QCoeff {
    num: Poly,
    den: Vec<LinearForm>,
}

impl QCoeff {
    pub fn from_poly(num: Poly) -> Self {
        QCoeff { num, den: Vec::new() }
    }

    pub fn zero(n: u32, nvars: usize) -> Self {
        Self::from_poly(Poly::zero(n, nvars))
    }

    pub fn one(n: u32, nvars: usize) -> Self {
        Self::from_poly(Poly::one(n, nvars))
    }

    pub fn constant(c: CycInt, nvars: usize) -> Self {
        Self::from_poly(Poly::constant(c, nvars))
    }

    pub fn linear(form: &LinearForm) -> Self {
        Self::from_poly(Poly::from_linear(form))
    }

    /// `1 / form`; the form must be nonzero.
    pub fn inv_linear(form: &LinearForm) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::NotInvertible(format!("zero linear form {}", form)));
        }
        let (sign, f) = form.normalized();
        let nvars = form.coeffs.len();
        Ok(QCoeff { num: Poly::constant(CycInt::from_int(form.n, sign as i64), nvars), den: vec![f] })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominators(&self) -> &[LinearForm] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    fn den_poly(&self) -> Poly {
        self.den.iter().fold(Poly::one(self.num.n(), self.num.nvars()), |acc, f| acc.mul(&Poly::from_linear(f)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.num.n(), self.num.nvars());
        }
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        den.sort();
        QCoeff { num: self.num.mul(&other.num), den }.cancel()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lcm, miss_a, miss_b) = merge_multisets(&self.den, &other.den);
        let scale = |p: &Poly, miss: &[LinearForm]| miss.iter().fold(p.clone(), |acc, f| acc.mul(&Poly::from_linear(f)));
        let num = scale(&self.num, &miss_a).add(&scale(&other.num, &miss_b));
        QCoeff { num, den: lcm }.cancel()
    }

    pub fn neg(&self) -> Self {
        QCoeff { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Removes denominator forms that divide the numerator exactly.
    fn cancel(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
            return self;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for f in std::mem::take(&mut self.den) {
            match self.num.div_linear(&f) {
                Some(q) => self.num = q,
                None => kept.push(f),
            }
        }
        self.den = kept;
        self
    }

    /// Applies `x` and then kills `α_s` for `s ∈ I`.
    pub fn twist(&self, ball: &GroupBall, x: Element, i: ParabolicSubset) -> Result<Self> {
        let num = w_action(ball, x, &self.num).reduce_mod(i);
        let mut out = QCoeff::from_poly(num);
        for f in &self.den {
            let g = f.act(ball, x).reduce_mod(i);
            out = out.mul(&QCoeff::inv_linear(&g)?);
        }
        Ok(out)
    }

    pub fn reduce_mod(&self, i: ParabolicSubset) -> Result<Self> {
        let mut out = QCoeff::from_poly(self.num.reduce_mod(i));
        for f in &self.den {
            out = out.mul(&QCoeff::inv_linear(&f.reduce_mod(i))?);
        }
        Ok(out)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.iter().map(|f| f.eval_f64(point)).product::<f64>()
    }

    /// Exact value at an integer point; `None` if a denominator vanishes there.
    pub fn eval_int(&self, point: &[i64]) -> Option<KFrac> {
        let mut val = KFrac::from_cyc(&self.num.eval_int(point));
        for f in &self.den {
            let d = Poly::from_linear(f).eval_int(point);
            val = val.mul(&KFrac::from_cyc(&d).inv()?);
        }
        Some(val)
    }

    /// Value in `F_p` at a point, for `θ`-free coefficients; `None` if a
    /// denominator vanishes mod `p` or `θ` occurs.
    pub fn eval_mod_p(&self, point: &[u64], p: u64) -> Option<u64> {
        let eval = |poly: &Poly| -> Option<u64> {
            let mut acc = 0u64;
            for (m, c) in poly.terms() {
                let k = c.as_integer()?.rem_euclid(p as i64) as u64;
                let mono = m.iter().zip(point).fold(1u64, |a, (&e, &x)| mulmod(a, powmod(x % p, e as u64, p), p));
                acc = (acc + mulmod(k, mono, p)) % p;
            }
            Some(acc)
        };
        let mut val = eval(&self.num)?;
        for f in &self.den {
            let d = eval(&Poly::from_linear(f))?;
            if d == 0 {
                return None;
            }
            val = mulmod(val, powmod(d, p - 2, p), p);
        }
        Some(val)
    }

    /// Degree-0 value as an element of `Frac(K)`; `None` if not constant.
    pub fn constant_value(&self) -> Option<KFrac> {
        let d = self.den_poly();
        if self.num.is_zero() {
            return Some(KFrac::zero(self.num.n()));
        }
        let (lm, lc) = d.terms.iter().next_back()?;
        let kappa = KFrac::from_cyc(&self.num.coeff(lm)).mul(&KFrac::from_cyc(lc).inv()?);
        let ok = self.num.terms().all(|(m, _)| d.terms.contains_key(m))
            && d.terms().all(|(m, c)| KFrac::from_cyc(&self.num.coeff(m)) == kappa.mul(&KFrac::from_cyc(c)));
        ok.then_some(kappa)
    }

    /// Writes the value as `unit · Π forms` using the given candidate roots;
    /// returns the `K`-constant and the forms divided out of the numerator.
    pub fn factor_roots(&self, candidates: &[LinearForm]) -> Option<(CycInt, Vec<LinearForm>)> {
        let mut num = self.num.clone();
        let mut used = Vec::new();
        'outer: while num.as_constant().is_none() {
            for f in candidates {
                if let Some(q) = num.div_linear(f) {
                    num = q;
                    used.push(f.clone());
                    continue 'outer;
                }
            }
            return None;
        }
        Some((num.as_constant().unwrap(), used))
    }
}

/// Multiset union-max of two sorted lists, with the parts each side lacks.
fn merge_multisets(a: &[LinearForm], b: &[LinearForm]) -> (Vec<LinearForm>, Vec<LinearForm>, Vec<LinearForm>) {
    let (mut i, mut j) = (0, 0);
    let (mut lcm, mut miss_a, mut miss_b) = (Vec::new(), Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            lcm.push(a[i].clone());
            miss_b.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            lcm.push(b[j].clone());
            miss_a.push(b[j].clone());
            j += 1;
        } else {
            lcm.push(a[i].clone());
            i += 1;
            j += 1;
        }
    }
    (lcm, miss_a, miss_b)
}

impl PartialEq for QCoeff {
    fn eq(&self, other: &Self) -> bool {
        let (_, miss_a, miss_b) = merge_multisets(&self.den, &other.den);
        let lhs = miss_a.iter().fold(self.num.clone(), |acc, f| acc.mul(&Poly::from_linear(f)));
        let rhs = miss_b.iter().fold(other.num.clone(), |acc, f| acc.mul(&Poly::from_linear(f)));
        lhs == rhs
    }
}

impl Eq for QCoeff {}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let dens: Vec<String> = self.den.iter().map(|d| format!("({})", d)).collect();
        write!(f, "({}) / {}", self.num, dens.join(""))
    }
}

impl fmt::Debug for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `1/β` in `Q_I`; fails when `β ∈ Φ_I`, i.e. its support lies in `I`.
pub fn qi_invert_root(beta: &LinearForm, i: ParabolicSubset) -> Result<QCoeff> {
    if beta.support().is_subset(i) {
        return Err(Error::NotInvertible(format!("root {} lies in Φ_I", beta)));
    }
    QCoeff::inv_linear(&beta.reduce_mod(i))
}

/// An element of the fraction field `Q(θ)` of `K`.
#[derive(Clone, PartialEq, Eq)]
pub struct KFrac {
    n: u32,
    coeffs: Vec<BigRational>,
}

impl KFrac {
    pub fn zero(n: u32) -> Self {
        KFrac { n, coeffs: vec![BigRational::zero(); ring(n).degree()] }
    }

    pub fn from_cyc(c: &CycInt) -> Self {
        KFrac { n: c.n(), coeffs: c.coeffs().iter().map(|&k| BigRational::from_integer(BigInt::from(k))).collect() }
    }

    pub fn from_ratio(n: u32, num: i64, den: i64) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = BigRational::new(BigInt::from(num), BigInt::from(den));
        z
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        KFrac { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        KFrac { n: self.n, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let p = ring(self.n).minpoly();
        for top in (d..prod.len()).rev() {
            let lead = std::mem::take(&mut prod[top]);
            if lead.is_zero() {
                continue;
            }
            for (k, &pk) in p.iter().take(d).enumerate() {
                prod[top - d + k] -= &lead * BigRational::from_integer(BigInt::from(pk));
            }
        }
        prod.truncate(d);
        KFrac { n: self.n, coeffs: prod }
    }

    /// Inverse via the linear system `self · y = 1`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.coeffs.len();
        // Column j of the multiplication matrix is self · θ^j.
        let mut cols = Vec::with_capacity(d);
        let mut basis = Self::zero(self.n);
        basis.coeffs[0] = BigRational::one();
        for j in 0..d {
            let mut e = Self::zero(self.n);
            e.coeffs[j] = BigRational::one();
            cols.push(self.mul(&e).coeffs);
        }
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(basis.coeffs[i].clone());
                row
            })
            .collect();
        let sol = solve_augmented(&mut a)?;
        Some(KFrac { n: self.n, coeffs: sol })
    }

    /// The value in `K`, when all coefficients are integers.
    pub fn to_cyc(&self) -> Option<CycInt> {
        let ints: Option<Vec<i64>> =
            self.coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect();
        Some(CycInt::from_canonical(self.n, ints?))
    }

    /// The rational value when `θ` does not occur.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(|c| c.is_zero()).then(|| &self.coeffs[0])
    }

    pub fn to_f64(&self) -> f64 {
        let t = ring(self.n).theta();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for KFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{}", c),
                1 => format!("{}θ", c),
                _ => format!("{}θ^{}", c, i),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for KFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Solves a square system given as an augmented matrix; `None` if singular.
fn solve_augmented(a: &mut [Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let d = a.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
    }
    Some(a.iter().map(|row| row[d].clone()).collect())
}

/// Rank over `Frac(K)`.
pub fn rank_kfrac(rows: &[Vec<KFrac>]) -> usize {
    let mut m: Vec<Vec<KFrac>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].mul(&inv);
                let pivot_row = m[rank].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    *v = v.sub(&factor.mul(pv));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `F_p` of a rational matrix; `None` if some denominator is divisible by `p`.
pub fn rank_mod_p(rows: &[Vec<BigRational>], p: u64) -> Option<usize> {
    let pb = BigInt::from(p);
    let reduce = |q: &BigRational| -> Option<u64> {
        let den = q.denom().mod_floor_positive(&pb);
        if den.is_zero() {
            return None;
        }
        let num = q.numer().mod_floor_positive(&pb);
        let inv = den.modpow(&(&pb - 2u32), &pb);
        (num * inv % &pb).to_u64()
    };
    let m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(reduce).collect::<Option<Vec<_>>>()).collect::<Option<_>>()?;
    Some(rank_mod_p_u64(m, p))
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Rank over `F_p` of a matrix already reduced into `[0, p)`.
pub fn rank_mod_p_u64(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, piv);
        let inv = powmod(m[rank][col], p - 2, p);
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let factor = mulmod(m[r][col], inv, p);
                let pivot = m[rank].clone();
                for (x, &y) in m[r].iter_mut().zip(&pivot) {
                    *x = (*x + p - mulmod(factor, y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

trait ModFloorPositive {
    fn mod_floor_positive(&self, m: &BigInt) -> BigInt;
}

impl ModFloorPositive for BigInt {
    fn mod_floor_positive(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}
