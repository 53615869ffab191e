//! The Hecke algebra in the standard basis, its bar involution and the
//! Kazhdan–Lusztig basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::coxeter::{Element, GroupBall};
use crate::error::Result;
use crate::laurent::LaurentPoly;

/// A finitely supported `Element -> LaurentPoly`; no zero values are stored.
/// Serves for the Hecke algebra as well as the (anti)spherical modules.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Combination {
    terms: BTreeMap<Element, LaurentPoly>,
}

pub type HeckeElt = Combination;

impl Combination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: Element) -> Self {
        Self::term(x, LaurentPoly::one())
    }

    pub fn term(x: Element, p: LaurentPoly) -> Self {
        let mut c = Self::zero();
        c.add_term(x, &p);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: Element) -> LaurentPoly {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn get(&self, x: Element) -> Option<&LaurentPoly> {
        self.terms.get(&x)
    }

    /// Terms in increasing element order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (Element, &LaurentPoly)> {
        self.terms.iter().map(|(&x, p)| (x, p))
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = Element> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, x: Element, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry(x).or_default();
        *e += p;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        for (x, p) in other.iter() {
            self.add_term(x, &(p * c));
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (x, p) in other.iter() {
            self.add_term(x, p);
        }
    }

    pub fn sub(&mut self, other: &Self) {
        for (x, p) in other.iter() {
            self.add_term(x, &-p);
        }
    }

    pub fn scaled(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies `v ↦ v^-1` to every coefficient.
    pub fn bar_coeffs(&self) -> Self {
        Combination { terms: self.terms.iter().map(|(&x, p)| (x, p.bar())).collect() }
    }

    /// Renders as `p·[word] + ...` in element order.
    pub fn display<'a>(&'a self, ball: &'a GroupBall) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Combination, &'a GroupBall);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_zero() {
                    return write!(f, "0");
                }
                let parts: Vec<String> =
                    self.0.iter().map(|(x, p)| format!("({})[{}]", p, self.1.format(x))).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
        D(self, ball)
    }
}

impl fmt::Debug for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(x, p)| (x.0, p))).finish()
    }
}

/// Right action of `b_s = h_s + v`: `h_x b_s = h_{xs} + v h_x` if `xs > x`,
/// `h_{xs} + v^-1 h_x` otherwise.
pub fn mul_bs(ball: &GroupBall, h: &HeckeElt, s: usize) -> Result<HeckeElt> {
    let mut out = HeckeElt::zero();
    for (x, p) in h.iter() {
        let xs = ball.right_mul_checked(x, s)?;
        out.add_term(xs, p);
        let shift = if ball.length(xs) > ball.length(x) { 1 } else { -1 };
        out.add_term(x, &p.shift(shift));
    }
    Ok(out)
}

/// Right multiplication by `h_s`; for `xs < x`, `h_x h_s = h_{xs} + (v^-1 - v) h_x`.
pub fn mul_hs(ball: &GroupBall, h: &HeckeElt, s: usize) -> Result<HeckeElt> {
    let quad = LaurentPoly::from_coeffs(-1, vec![1, 0, -1]);
    let mut out = HeckeElt::zero();
    for (x, p) in h.iter() {
        let xs = ball.right_mul_checked(x, s)?;
        out.add_term(xs, p);
        if ball.length(xs) < ball.length(x) {
            out.add_term(x, &(p * &quad));
        }
    }
    Ok(out)
}

/// Right multiplication by `h_s^-1 = h_s + (v - v^-1)`.
pub fn mul_hs_inv(ball: &GroupBall, h: &HeckeElt, s: usize) -> Result<HeckeElt> {
    let mut out = mul_hs(ball, h, s)?;
    out.add_scaled(h, &LaurentPoly::from_coeffs(-1, vec![-1, 0, 1]));
    Ok(out)
}

/// Product in the standard basis: `h · h_{s1} ... h_{sk}` over reduced words.
pub fn mul_hecke(ball: &GroupBall, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
    let mut out = HeckeElt::zero();
    for (y, q) in b.iter() {
        let mut part = a.scaled(q);
        for &s in ball.word(y) {
            part = mul_hs(ball, &part, s as usize)?;
        }
        out.add(&part);
    }
    Ok(out)
}

/// Memo of `bar(h_x) = bar(h_{xs}) h_s^-1` along canonical words.
#[derive(Default)]
pub struct BarMemo {
    memo: HashMap<Element, HeckeElt>,
}

impl BarMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bar_standard(&mut self, ball: &GroupBall, x: Element) -> Result<HeckeElt> {
        if let Some(h) = self.memo.get(&x) {
            return Ok(h.clone());
        }
        let out = match ball.word(x).last() {
            None => HeckeElt::basis(x),
            Some(&s) => {
                let prev = ball.right_mul_checked(x, s as usize)?;
                let base = self.bar_standard(ball, prev)?;
                mul_hs_inv(ball, &base, s as usize)?
            }
        };
        self.memo.insert(x, out.clone());
        Ok(out)
    }

    /// The antilinear bar involution.
    pub fn bar(&mut self, ball: &GroupBall, h: &HeckeElt) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (x, p) in h.iter() {
            let bx = self.bar_standard(ball, x)?;
            out.add_scaled(&bx, &p.bar());
        }
        Ok(out)
    }
}

/// Memoized Kazhdan–Lusztig basis `b_x = Σ_y h_{y,x} h_y`.
pub struct KLTable<'a> {
    ball: &'a GroupBall,
    basis: HashMap<Element, HeckeElt>,
}

impl<'a> KLTable<'a> {
    pub fn new(ball: &'a GroupBall) -> Self {
        KLTable { ball, basis: HashMap::new() }
    }

    pub fn ball(&self) -> &'a GroupBall {
        self.ball
    }

    /// `b_x`, computed as `b_y b_s` minus the `v^0`-parts of lower terms,
    /// where `s` is the last letter of the canonical word of `x = ys`.
    pub fn compute(&mut self, x: Element) -> Result<&HeckeElt> {
        if !self.basis.contains_key(&x) {
            let b = self.build(x)?;
            self.basis.insert(x, b);
        }
        Ok(&self.basis[&x])
    }

    fn build(&mut self, x: Element) -> Result<HeckeElt> {
        let ball = self.ball;
        let Some(&s) = ball.word(x).last() else {
            return Ok(HeckeElt::basis(x));
        };
        let y = ball.right_mul_checked(x, s as usize)?;
        let by = self.compute(y)?.clone();
        let mut p = mul_bs(ball, &by, s as usize)?;
        // Clear constant terms in decreasing (length, ShortLex) order.
        loop {
            let next = p.iter().rev().find(|&(z, c)| z != x && c.coeff(0) != 0).map(|(z, c)| (z, c.coeff(0)));
            let Some((z, c0)) = next else { break };
            let bz = self.compute(z)?.clone();
            p.add_scaled(&bz, &LaurentPoly::constant(-c0));
        }
        Ok(p)
    }

    /// Computes `b_x` for every element of the ball.
    pub fn fill(&mut self) -> Result<()> {
        for x in self.ball.elements() {
            self.compute(x)?;
        }
        Ok(())
    }

    pub fn get(&self, x: Element) -> Option<&HeckeElt> {
        self.basis.get(&x)
    }

    pub fn h_poly(&mut self, y: Element, x: Element) -> Result<LaurentPoly> {
        Ok(self.compute(x)?.coeff(y))
    }

    /// Coefficient of `v` in `h_{y,x}`.
    pub fn mu(&mut self, y: Element, x: Element) -> Result<i64> {
        Ok(self.h_poly(y, x)?.coeff(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use rand::{Rng, SeedableRng};

    fn ball(name: &str, cap: usize) -> GroupBall {
        GroupBall::new(CoxeterMatrix::builtin(name).unwrap(), cap).unwrap()
    }

    fn lp(min: i32, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(min, c.to_vec())
    }

    /// Classical recursion for `P_{y,w}(q)` using left descents:
    /// `P_{x,w} = q^{1-c} P_{sx,u} + q^c P_{x,u} - Σ μ(z,u) q^{(l(w)-l(z))/2} P_{x,z}`
    /// with `w = su`, `c = [sx < x]`, the sum over `z < u`, `sz < z`.
    fn classical_kl(b: &GroupBall) -> HashMap<(Element, Element), Vec<i64>> {
        fn add(a: &mut Vec<i64>, b: &[i64], shift: usize, sign: i64) {
            if a.len() < b.len() + shift {
                a.resize(b.len() + shift, 0);
            }
            for (i, &c) in b.iter().enumerate() {
                a[i + shift] += sign * c;
            }
        }
        let mut p: HashMap<(Element, Element), Vec<i64>> = HashMap::new();
        let get = |p: &HashMap<(Element, Element), Vec<i64>>, x: Element, w: Element| -> Vec<i64> {
            p.get(&(x, w)).cloned().unwrap_or_default()
        };
        for w in b.elements() {
            for x in b.elements() {
                if !b.bruhat_leq(x, w) {
                    continue;
                }
                if w == Element::IDENTITY {
                    p.insert((x, w), vec![1]);
                    continue;
                }
                let s = (0..b.rank()).find(|&s| b.left_descends(s, w)).unwrap();
                let u = b.left_mul(s, w).unwrap();
                let sx = b.left_mul(s, x).unwrap();
                let c = usize::from(b.left_descends(s, x));
                let mut acc = Vec::new();
                add(&mut acc, &get(&p, sx, u), 1 - c, 1);
                add(&mut acc, &get(&p, x, u), c, 1);
                for z in b.elements() {
                    if z == u || !b.left_descends(s, z) || !b.bruhat_leq(z, u) || !b.bruhat_leq(x, z) {
                        continue;
                    }
                    let d = b.length(u) - b.length(z);
                    if d.is_multiple_of(2) {
                        continue;
                    }
                    let mu = get(&p, z, u).get((d - 1) / 2).copied().unwrap_or(0);
                    if mu != 0 {
                        let pxz: Vec<i64> = get(&p, x, z).iter().map(|&c| c * mu).collect();
                        add(&mut acc, &pxz, (b.length(w) - b.length(z)) / 2, -1);
                    }
                }
                while acc.last() == Some(&0) {
                    acc.pop();
                }
                p.insert((x, w), acc);
            }
        }
        p
    }

    #[test]
    fn small_cases() {
        let b = ball("A2", 10);
        let mut t = KLTable::new(&b);
        let s = b.from_word(&[0]).unwrap();
        let sts = b.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(t.compute(Element::IDENTITY).unwrap(), &HeckeElt::basis(Element::IDENTITY));
        let mut bs = HeckeElt::basis(s);
        bs.add_term(Element::IDENTITY, &LaurentPoly::v());
        assert_eq!(t.compute(s).unwrap(), &bs);
        let bsts = t.compute(sts).unwrap().clone();
        for y in b.elements() {
            let d = (b.length(sts) - b.length(y)) as i32;
            assert_eq!(bsts.coeff(y), LaurentPoly::monomial(d, 1));
        }
        assert_eq!(t.h_poly(s, sts).unwrap(), LaurentPoly::monomial(2, 1));
        assert_eq!(t.mu(s, sts).unwrap(), 0);
        assert_eq!(t.mu(s, b.from_word(&[0, 1]).unwrap()).unwrap(), 1);
    }

    #[test]
    fn bs_action() {
        let b = ball("A2", 10);
        let s = b.from_word(&[0]).unwrap();
        let e = Element::IDENTITY;
        let once = mul_bs(&b, &HeckeElt::basis(e), 0).unwrap();
        let mut bs = HeckeElt::basis(s);
        bs.add_term(e, &LaurentPoly::v());
        assert_eq!(once, bs);
        let twice = mul_bs(&b, &once, 0).unwrap();
        assert_eq!(twice, bs.scaled(&LaurentPoly::quantum_two()));
        assert!(mul_bs(&b, &HeckeElt::zero(), 0).unwrap().is_zero());
    }

    #[test]
    fn bar_basics() {
        let b = ball("A2", 10);
        let mut memo = BarMemo::new();
        let s = b.from_word(&[0]).unwrap();
        let mut bs = HeckeElt::basis(s);
        bs.add_term(Element::IDENTITY, &LaurentPoly::v());
        assert_eq!(memo.bar(&b, &bs).unwrap(), bs);
        assert_eq!(
            memo.bar(&b, &HeckeElt::basis(Element::IDENTITY)).unwrap(),
            HeckeElt::basis(Element::IDENTITY)
        );
    }

    #[test]
    fn bar_is_involution_on_random_elements() {
        let b = ball("B3", 20);
        let mut memo = BarMemo::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut h = HeckeElt::zero();
            for _ in 0..4 {
                let x = Element(rng.gen_range(0..b.len() as u32));
                h.add_term(x, &lp(rng.gen_range(-3..3), &[rng.gen_range(-3..4), rng.gen_range(-3..4)]));
            }
            let bb = memo.bar(&b, &h).unwrap();
            assert_eq!(memo.bar(&b, &bb).unwrap(), h);
        }
    }

    #[test]
    fn associativity_spot_checks() {
        let b = ball("A3", 20);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let e = Element::IDENTITY;
        for _ in 0..50 {
            let mut h = HeckeElt::zero();
            for _ in 0..3 {
                let x = Element(rng.gen_range(0..b.len() as u32));
                h.add_term(x, &lp(rng.gen_range(-2..2), &[rng.gen_range(-3..4), 1]));
            }
            let (s, t) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let left = mul_bs(&b, &mul_bs(&b, &h, s).unwrap(), t).unwrap();
            let bsbt = mul_bs(&b, &mul_bs(&b, &HeckeElt::basis(e), s).unwrap(), t).unwrap();
            assert_eq!(left, mul_hecke(&b, &h, &bsbt).unwrap());
        }
    }

    #[test]
    fn kl_basis_matches_classical_recursion() {
        for name in ["A3", "B3", "H3", "I2 5"] {
            let b = ball(name, 40);
            let oracle = classical_kl(&b);
            let mut t = KLTable::new(&b);
            t.fill().unwrap();
            let mut memo = BarMemo::new();
            for x in b.elements() {
                let bx = t.get(x).unwrap().clone();
                assert_eq!(memo.bar(&b, &bx).unwrap(), bx, "{name}: b_x not self-dual");
                for y in b.elements() {
                    let h = bx.coeff(y);
                    let expect = match oracle.get(&(y, x)) {
                        None => LaurentPoly::zero(),
                        Some(pq) => {
                            let lx = b.length(x) as i32 - b.length(y) as i32;
                            LaurentPoly::from_terms(pq.iter().enumerate().map(|(i, &c)| (lx - 2 * i as i32, c)))
                        }
                    };
                    assert_eq!(h, expect, "{name}: h_{{{},{}}}", b.format(y), b.format(x));
                    if y != x && !h.is_zero() {
                        assert!(h.min_exp().unwrap() >= 1);
                    }
                }
                assert_eq!(bx.coeff(x), LaurentPoly::one());
            }
        }
    }

    #[test]
    fn quadratic_relation_on_kl_elements() {
        let b = ball("affA2", 8);
        let mut t = KLTable::new(&b);
        for x in b.elements_of_length(5).collect::<Vec<_>>() {
            for s in 0..3 {
                if b.right_descends(x, s) {
                    let bx = t.compute(x).unwrap().clone();
                    assert_eq!(mul_bs(&b, &bx, s).unwrap(), bx.scaled(&LaurentPoly::quantum_two()));
                }
            }
        }
    }
}
