//! The antispherical module `N` and the spherical module `M` attached to a
//! parabolic subset `I`, their bar involutions, the bases `d_x` and `c_x`,
//! and identities relating them to the Hecke algebra.

use std::collections::HashMap;

use crate::coxeter::{Element, GroupBall, ParabolicSubset, Verdict};
use crate::error::{Error, Result};
use crate::hecke::{BarMemo, Combination, HeckeElt, KLTable};
use crate::laurent::LaurentPoly;

pub type NElt = Combination;
pub type MElt = Combination;

/// Which parabolic module: `N` (antispherical) or `M` (spherical).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum ModuleKind {
    Antispherical,
    Spherical,
}

/// Right action of `b_s` on `N` or `M`. With `x ∈ ^IW`:
/// `xs ∈ ^IW, xs > x`: `e_{xs} + v e_x`; `xs ∈ ^IW, xs < x`: `e_{xs} + v^-1 e_x`;
/// `xs ∉ ^IW`: `0` on `N`, `(v + v^-1) e_x` on `M`.
pub fn module_mul_bs(
    ball: &GroupBall,
    i: ParabolicSubset,
    kind: ModuleKind,
    n: &Combination,
    s: usize,
) -> Result<Combination> {
    let mut out = Combination::zero();
    for (x, p) in n.iter() {
        match ball.parabolic_test(x, s, i)? {
            Verdict::InQuotient => {
                let xs = ball.right_mul_checked(x, s)?;
                out.add_term(xs, p);
                let shift = if ball.length(xs) > ball.length(x) { 1 } else { -1 };
                out.add_term(x, &p.shift(shift));
            }
            Verdict::ExitsVia(_) => {
                if kind == ModuleKind::Spherical {
                    out.add_term(x, &(p * &LaurentPoly::quantum_two()));
                }
            }
        }
    }
    Ok(out)
}

pub fn n_mul_bs(ball: &GroupBall, i: ParabolicSubset, n: &NElt, s: usize) -> Result<NElt> {
    module_mul_bs(ball, i, ModuleKind::Antispherical, n, s)
}

pub fn m_mul_bs(ball: &GroupBall, i: ParabolicSubset, m: &MElt, s: usize) -> Result<MElt> {
    module_mul_bs(ball, i, ModuleKind::Spherical, m, s)
}

/// `h_{ux} ↦ (-v)^{l(u)} n_x` on `N`, `h_{ux} ↦ v^{-l(u)} m_x` on `M`.
pub fn project(ball: &GroupBall, i: ParabolicSubset, kind: ModuleKind, h: &HeckeElt) -> Combination {
    let mut out = Combination::zero();
    for (w, p) in h.iter() {
        let (u, x) = ball.coset_decompose(w, i);
        let l = ball.length(u) as i32;
        let factor = match kind {
            ModuleKind::Antispherical => LaurentPoly::monomial(l, if l % 2 == 0 { 1 } else { -1 }),
            ModuleKind::Spherical => LaurentPoly::monomial(-l, 1),
        };
        out.add_term(x, &(p * &factor));
    }
    out
}

pub fn project_pi(ball: &GroupBall, i: ParabolicSubset, h: &HeckeElt) -> NElt {
    project(ball, i, ModuleKind::Antispherical, h)
}

/// Bar involution on `N` or `M`: `e_x ↦ π(bar(h_x))`, antilinear.
pub fn module_bar(
    ball: &GroupBall,
    i: ParabolicSubset,
    kind: ModuleKind,
    memo: &mut BarMemo,
    n: &Combination,
) -> Result<Combination> {
    let mut out = Combination::zero();
    for (x, p) in n.iter() {
        let bx = memo.bar_standard(ball, x)?;
        out.add_scaled(&project(ball, i, kind, &bx), &p.bar());
    }
    Ok(out)
}

/// Memoized `d_x = Σ n_{y,x} n_y` (antispherical) or `c_x = Σ m_{y,x} m_y`
/// (spherical), for `x ∈ ^IW`.
pub struct ParabolicKLTable<'a> {
    ball: &'a GroupBall,
    i: ParabolicSubset,
    kind: ModuleKind,
    basis: HashMap<Element, Combination>,
}

impl<'a> ParabolicKLTable<'a> {
    pub fn new(ball: &'a GroupBall, i: ParabolicSubset, kind: ModuleKind) -> Self {
        ParabolicKLTable { ball, i, kind, basis: HashMap::new() }
    }

    pub fn antispherical(ball: &'a GroupBall, i: ParabolicSubset) -> Self {
        Self::new(ball, i, ModuleKind::Antispherical)
    }

    pub fn spherical(ball: &'a GroupBall, i: ParabolicSubset) -> Self {
        Self::new(ball, i, ModuleKind::Spherical)
    }

    pub fn ball(&self) -> &'a GroupBall {
        self.ball
    }

    pub fn subset(&self) -> ParabolicSubset {
        self.i
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    /// Basis element for `x ∈ ^IW`: `d_y b_s` (resp. `c_y b_s`) for the last
    /// letter `s` of the canonical word of `x = ys`, minus the `v^0`-parts of
    /// lower terms, cleared from the top.
    pub fn compute(&mut self, x: Element) -> Result<&Combination> {
        if !self.basis.contains_key(&x) {
            if !self.ball.is_min_rep(x, self.i) {
                return Err(Error::NotMinRep);
            }
            let b = self.build(x)?;
            self.basis.insert(x, b);
        }
        Ok(&self.basis[&x])
    }

    fn build(&mut self, x: Element) -> Result<Combination> {
        let ball = self.ball;
        let Some(&s) = ball.word(x).last() else {
            return Ok(Combination::basis(x));
        };
        let y = ball.right_mul_checked(x, s as usize)?;
        let dy = self.compute(y)?.clone();
        let mut p = module_mul_bs(ball, self.i, self.kind, &dy, s as usize)?;
        loop {
            let next = p.iter().rev().find(|&(z, c)| z != x && c.coeff(0) != 0).map(|(z, c)| (z, c.coeff(0)));
            let Some((z, c0)) = next else { break };
            let dz = self.compute(z)?.clone();
            p.add_scaled(&dz, &LaurentPoly::constant(-c0));
        }
        Ok(p)
    }

    /// Computes the basis element of every `x ∈ ^IW` in the ball.
    pub fn fill(&mut self) -> Result<()> {
        for x in self.ball.min_reps(self.i) {
            self.compute(x)?;
        }
        Ok(())
    }

    pub fn get(&self, x: Element) -> Option<&Combination> {
        self.basis.get(&x)
    }

    /// `n_{y,x}` (resp. `m_{y,x}`).
    pub fn poly(&mut self, y: Element, x: Element) -> Result<LaurentPoly> {
        Ok(self.compute(x)?.coeff(y))
    }

    /// Writes `n` as `Σ a_x d_x`, peeling off the largest support element.
    pub fn decompose(&mut self, n: &Combination) -> Result<Combination> {
        let mut rest = n.clone();
        let mut out = Combination::zero();
        loop {
            let top = rest.iter().next_back().map(|(x, p)| (x, p.clone()));
            let Some((x, p)) = top else { break };
            let dx = self.compute(x)?.clone();
            rest.add_scaled(&dx, &-&p);
            out.add_term(x, &p);
        }
        Ok(out)
    }
}

/// Both sides of `n_{y,x} = Σ_{z ∈ W_I} (-v)^{l(z)} h_{zy,x}`. Only `zy ≤ x`
/// contributes, so the sum runs over `W_I y` truncated at length `l(x)`.
pub fn deodhar_sides(
    anti: &mut ParabolicKLTable<'_>,
    kl: &mut KLTable<'_>,
    y: Element,
    x: Element,
) -> Result<(LaurentPoly, LaurentPoly)> {
    let ball = anti.ball();
    let i = anti.subset();
    let lhs = anti.poly(y, x)?;
    let bx = kl.compute(x)?.clone();
    let mut rhs = LaurentPoly::zero();
    let mut seen = std::collections::HashSet::from([y]);
    let mut queue = vec![y];
    while let Some(w) = queue.pop() {
        let lz = (ball.length(w) - ball.length(y)) as i32;
        let sign = if lz % 2 == 0 { 1 } else { -1 };
        rhs += &(&bx.coeff(w) * &LaurentPoly::monomial(lz, sign));
        for s in i.iter() {
            if ball.left_descends(s, w) || ball.length(w) >= ball.length(x) {
                continue;
            }
            let sw = ball.left_mul_checked(s, w)?;
            if seen.insert(sw) {
                queue.push(sw);
            }
        }
    }
    Ok((lhs, rhs))
}

pub fn check_deodhar(
    anti: &mut ParabolicKLTable<'_>,
    kl: &mut KLTable<'_>,
    y: Element,
    x: Element,
) -> Result<bool> {
    let (l, r) = deodhar_sides(anti, kl, y, x)?;
    Ok(l == r)
}

/// `m_{y,x} = h_{w_0 y, w_0 x}` for finitary `I`.
pub fn check_finitary(
    sph: &mut ParabolicKLTable<'_>,
    kl: &mut KLTable<'_>,
    y: Element,
    x: Element,
) -> Result<bool> {
    let ball = sph.ball();
    let w0 = ball.longest_element(sph.subset())?;
    let lhs = sph.poly(y, x)?;
    let rhs = kl.h_poly(ball.mul(w0, y)?, ball.mul(w0, x)?)?;
    Ok(lhs == rhs)
}

/// `n^I_{y,x} ≤ n^J_{y,x}` coefficientwise, for `J ⊆ I` and `y, x ∈ ^IW`.
pub fn check_monotonicity(
    big: &mut ParabolicKLTable<'_>,
    small: &mut ParabolicKLTable<'_>,
    y: Element,
    x: Element,
) -> Result<bool> {
    if !small.subset().is_subset(big.subset()) {
        return Err(Error::Internal("monotonicity needs J ⊆ I".into()));
    }
    let a = big.poly(y, x)?;
    let b = small.poly(y, x)?;
    Ok(a.leq_coeffwise(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use crate::hecke::mul_bs;
    use rand::{Rng, SeedableRng};

    fn ball(name: &str, cap: usize) -> GroupBall {
        GroupBall::new(CoxeterMatrix::builtin(name).unwrap(), cap).unwrap()
    }

    fn comb(terms: &[(Element, LaurentPoly)]) -> Combination {
        let mut c = Combination::zero();
        for (x, p) in terms {
            c.add_term(*x, p);
        }
        c
    }

    #[test]
    fn module_actions() {
        let b = ball("A2", 10);
        let e = Element::IDENTITY;
        let i = ParabolicSubset::from_indices([0]);
        let t = b.from_word(&[1]).unwrap();
        let v = LaurentPoly::v();
        assert!(n_mul_bs(&b, i, &Combination::basis(e), 0).unwrap().is_zero());
        let nt = comb(&[(t, LaurentPoly::one()), (e, v.clone())]);
        assert_eq!(n_mul_bs(&b, i, &Combination::basis(e), 1).unwrap(), nt);
        assert_eq!(
            m_mul_bs(&b, i, &Combination::basis(e), 0).unwrap(),
            Combination::term(e, LaurentPoly::quantum_two())
        );
        assert_eq!(m_mul_bs(&b, i, &Combination::basis(e), 1).unwrap(), nt);
        assert!(m_mul_bs(&b, i, &Combination::zero(), 0).unwrap().is_zero());

        let a = ball("affA1", 10);
        let t = a.from_word(&[1]).unwrap();
        let got = n_mul_bs(&a, i, &Combination::basis(t), 1).unwrap();
        assert_eq!(got, comb(&[(e, LaurentPoly::one()), (t, LaurentPoly::v_inv())]));
    }

    #[test]
    fn projection() {
        let b = ball("A2", 10);
        let i = ParabolicSubset::from_indices([0]);
        let t = b.from_word(&[1]).unwrap();
        let st = b.from_word(&[0, 1]).unwrap();
        assert_eq!(project_pi(&b, i, &HeckeElt::basis(t)), Combination::basis(t));
        assert_eq!(project_pi(&b, i, &HeckeElt::basis(st)), Combination::term(t, LaurentPoly::monomial(1, -1)));
        let h = comb(&[(st, LaurentPoly::v())]);
        assert_eq!(project_pi(&b, ParabolicSubset::empty(), &h), h);
    }

    #[test]
    fn projection_intertwines_action() {
        let b = ball("B3", 20);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let i = ParabolicSubset::from_indices((0..3).filter(|_| rng.gen_bool(0.5)));
            let mut h = HeckeElt::zero();
            for _ in 0..3 {
                let x = Element(rng.gen_range(0..b.len() as u32));
                if b.length(x) < 9 {
                    h.add_term(x, &LaurentPoly::monomial(rng.gen_range(-2..3), rng.gen_range(-3..4)));
                }
            }
            let s = rng.gen_range(0..3);
            for kind in [ModuleKind::Antispherical, ModuleKind::Spherical] {
                let lhs = project(&b, i, kind, &mul_bs(&b, &h, s).unwrap());
                let rhs = module_mul_bs(&b, i, kind, &project(&b, i, kind, &h), s).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn bar_involution_on_modules() {
        let b = ball("affA2", 8);
        let mut memo = BarMemo::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let i = ParabolicSubset::from_indices([0]);
        let reps = b.min_reps(i);
        assert_eq!(
            module_bar(&b, i, ModuleKind::Antispherical, &mut memo, &Combination::basis(Element::IDENTITY)).unwrap(),
            Combination::basis(Element::IDENTITY)
        );
        for _ in 0..100 {
            let mut n = Combination::zero();
            for _ in 0..3 {
                let x = reps[rng.gen_range(0..reps.len())];
                n.add_term(x, &LaurentPoly::monomial(rng.gen_range(-2..3), rng.gen_range(-3..4)));
            }
            for kind in [ModuleKind::Antispherical, ModuleKind::Spherical] {
                let once = module_bar(&b, i, kind, &mut memo, &n).unwrap();
                assert_eq!(module_bar(&b, i, kind, &mut memo, &once).unwrap(), n);
            }
        }
    }

    #[test]
    fn small_d_and_c_bases() {
        let b = ball("A2", 10);
        let i = ParabolicSubset::from_indices([0]);
        let e = Element::IDENTITY;
        let t = b.from_word(&[1]).unwrap();
        let ts = b.from_word(&[1, 0]).unwrap();
        let mut d = ParabolicKLTable::antispherical(&b, i);
        assert_eq!(d.compute(e).unwrap(), &Combination::basis(e));
        let dt = d.compute(t).unwrap().clone();
        let mut memo = BarMemo::new();
        assert_eq!(module_bar(&b, i, ModuleKind::Antispherical, &mut memo, &dt).unwrap(), dt);
        assert_eq!(d.compute(ts).unwrap(), &comb(&[(ts, LaurentPoly::one()), (t, LaurentPoly::v())]));
        assert_eq!(d.poly(t, ts).unwrap(), LaurentPoly::v());
        assert!(d.poly(e, ts).unwrap().is_zero());
        assert_eq!(d.compute(b.from_word(&[0]).unwrap()).err(), Some(Error::NotMinRep));

        let a = ball("affA1", 10);
        let mut d = ParabolicKLTable::antispherical(&a, i);
        let tst = a.from_word(&[1, 0, 1]).unwrap();
        let ts = a.from_word(&[1, 0]).unwrap();
        assert_eq!(d.compute(tst).unwrap(), &comb(&[(tst, LaurentPoly::one()), (ts, LaurentPoly::v())]));
    }

    #[test]
    fn bases_are_self_dual_positive_and_deodhar() {
        for name in ["A3", "B3"] {
            let b = ball(name, 20);
            let mut kl = KLTable::new(&b);
            let mut memo = BarMemo::new();
            for i in ParabolicSubset::all(3) {
                for kind in [ModuleKind::Antispherical, ModuleKind::Spherical] {
                    let mut t = ParabolicKLTable::new(&b, i, kind);
                    for x in b.min_reps(i) {
                        let dx = t.compute(x).unwrap().clone();
                        assert_eq!(module_bar(&b, i, kind, &mut memo, &dx).unwrap(), dx);
                        assert_eq!(dx.coeff(x), LaurentPoly::one());
                        for (y, p) in dx.iter() {
                            assert!(p.is_nonneg());
                            if y != x {
                                assert!(p.min_exp().unwrap() >= 1);
                            }
                        }
                    }
                }
                let mut anti = ParabolicKLTable::antispherical(&b, i);
                let reps = b.min_reps(i);
                for &x in &reps {
                    for &y in &reps {
                        assert!(check_deodhar(&mut anti, &mut kl, y, x).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn empty_subset_is_hecke() {
        let b = ball("H3", 30);
        let mut kl = KLTable::new(&b);
        let mut t = ParabolicKLTable::antispherical(&b, ParabolicSubset::empty());
        let mut c = ParabolicKLTable::spherical(&b, ParabolicSubset::empty());
        for x in b.elements() {
            assert_eq!(t.compute(x).unwrap(), kl.compute(x).unwrap());
            assert_eq!(c.compute(x).unwrap(), kl.compute(x).unwrap());
        }
    }

    #[test]
    fn finitary_and_monotone_in_a3() {
        let b = ball("A3", 20);
        let mut kl = KLTable::new(&b);
        for i in ParabolicSubset::all(3) {
            let mut sph = ParabolicKLTable::spherical(&b, i);
            let reps = b.min_reps(i);
            for &x in &reps {
                for &y in &reps {
                    assert!(check_finitary(&mut sph, &mut kl, y, x).unwrap());
                }
            }
        }
        let i = ParabolicSubset::from_indices([0]);
        let mut big = ParabolicKLTable::antispherical(&b, i);
        let mut small = ParabolicKLTable::antispherical(&b, ParabolicSubset::empty());
        let reps = b.min_reps(i);
        for &x in &reps {
            for &y in &reps {
                assert!(check_monotonicity(&mut big, &mut small, y, x).unwrap());
            }
        }
    }

    #[test]
    fn decomposition_inverts_expansion() {
        let b = ball("affA2", 7);
        let i = ParabolicSubset::from_indices([2]);
        let mut t = ParabolicKLTable::antispherical(&b, i);
        let reps = b.min_reps(i);
        let mut target = Combination::zero();
        let mut expect = Combination::zero();
        for (k, &x) in reps.iter().enumerate().filter(|(k, _)| k % 3 == 0) {
            let p = LaurentPoly::monomial(k as i32 % 3 - 1, 2);
            target.add_scaled(t.compute(x).unwrap(), &p);
            expect.add_term(x, &p);
        }
        assert_eq!(t.decompose(&target).unwrap(), expect);
    }
}
