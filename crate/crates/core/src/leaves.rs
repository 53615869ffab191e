//! Subexpressions of a word: Bruhat strolls, U/D decorations, defect,
//! the I-antispherical condition, path dominance and graded ranks.

use serde::Serialize;

use crate::coxeter::{Element, GroupBall, ParabolicSubset, Verdict};
use crate::error::Result;
use crate::hecke::Combination;
use crate::laurent::LaurentPoly;

/// Step type: `U` if `x_{i-1} s_i > x_{i-1}`, digit = bit `e_i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Deco {
    U0,
    U1,
    D0,
    D1,
}

impl Deco {
    pub fn is_up(self) -> bool {
        matches!(self, Deco::U0 | Deco::U1)
    }

    pub fn bit(self) -> bool {
        matches!(self, Deco::U1 | Deco::D1)
    }

    /// Contribution to the defect: `U0 = +1`, `D0 = -1`.
    pub fn defect(self) -> i32 {
        match self {
            Deco::U0 => 1,
            Deco::D0 => -1,
            _ => 0,
        }
    }
}

/// A 01-sequence `e` on a word with stroll `x_i = x_{i-1} s_i^{e_i}`, `x_0 = e`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedSubexpr {
    pub bits: Vec<bool>,
    pub stroll: Vec<Element>,
    pub decorations: Vec<Deco>,
    pub defect: i32,
}

impl DecoratedSubexpr {
    pub fn endpoint(&self) -> Element {
        *self.stroll.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn export(&self, ball: &GroupBall) -> SubexprExport {
        SubexprExport {
            bits: self.bit_string(),
            stroll: self.stroll.iter().map(|&x| ball.format(x)).collect(),
            decorations: self.decorations.clone(),
            defect: self.defect,
            endpoint: ball.format(self.endpoint()),
        }
    }
}

/// Serializable view of a [`DecoratedSubexpr`] with elements as words.
#[derive(Clone, Debug, Serialize)]
pub struct SubexprExport {
    pub bits: String,
    pub stroll: Vec<String>,
    pub decorations: Vec<Deco>,
    pub defect: i32,
    pub endpoint: String,
}

pub fn decorate(ball: &GroupBall, word: &[u8], bits: &[bool]) -> Result<DecoratedSubexpr> {
    assert_eq!(word.len(), bits.len(), "bits must match the word");
    let mut x = Element::IDENTITY;
    let mut stroll = vec![x];
    let mut decorations = Vec::with_capacity(word.len());
    for (&s, &b) in word.iter().zip(bits) {
        let xs = ball.right_mul_checked(x, s as usize)?;
        let up = ball.length(xs) > ball.length(x);
        decorations.push(match (up, b) {
            (true, false) => Deco::U0,
            (true, true) => Deco::U1,
            (false, false) => Deco::D0,
            (false, true) => Deco::D1,
        });
        if b {
            x = xs;
        }
        stroll.push(x);
    }
    let defect = decorations.iter().map(|d| d.defect()).sum();
    Ok(DecoratedSubexpr { bits: bits.to_vec(), stroll, decorations, defect })
}

/// `x_k s_{k+1} ∈ ^IW` for every `0 ≤ k < m`.
pub fn is_antispherical(ball: &GroupBall, word: &[u8], d: &DecoratedSubexpr, i: ParabolicSubset) -> Result<bool> {
    for (k, &s) in word.iter().enumerate() {
        let x = d.stroll[k];
        if !ball.is_min_rep(x, i) {
            return Ok(false);
        }
        if ball.parabolic_test(x, s as usize, i)? != Verdict::InQuotient {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All I-antispherical subexpressions, in lexicographic order of bits with `1 < 0`.
pub fn antispherical_subexpressions(
    ball: &GroupBall,
    word: &[u8],
    i: ParabolicSubset,
) -> Result<Vec<DecoratedSubexpr>> {
    let mut out = Vec::new();
    let mut bits = Vec::with_capacity(word.len());
    let mut stroll = vec![Element::IDENTITY];
    dfs(ball, word, i, &mut bits, &mut stroll, &mut out)?;
    Ok(out)
}

fn dfs(
    ball: &GroupBall,
    word: &[u8],
    i: ParabolicSubset,
    bits: &mut Vec<bool>,
    stroll: &mut Vec<Element>,
    out: &mut Vec<DecoratedSubexpr>,
) -> Result<()> {
    let k = bits.len();
    if k == word.len() {
        out.push(decorate(ball, word, bits)?);
        return Ok(());
    }
    let x = stroll[k];
    let s = word[k] as usize;
    if ball.parabolic_test(x, s, i)? != Verdict::InQuotient {
        return Ok(());
    }
    let xs = ball.right_mul_checked(x, s)?;
    for (b, next) in [(true, xs), (false, x)] {
        bits.push(b);
        stroll.push(next);
        dfs(ball, word, i, bits, stroll, out)?;
        bits.pop();
        stroll.pop();
    }
    Ok(())
}

/// Pointwise Bruhat comparison of strolls: `e ≤ f`.
pub fn path_dom_leq(ball: &GroupBall, e: &DecoratedSubexpr, f: &DecoratedSubexpr) -> bool {
    e.stroll.len() == f.stroll.len() && e.stroll.iter().zip(&f.stroll).all(|(&a, &b)| ball.bruhat_leq(a, b))
}

pub fn double_path_dom_leq(
    ball: &GroupBall,
    (e1, f1): (&DecoratedSubexpr, &DecoratedSubexpr),
    (e2, f2): (&DecoratedSubexpr, &DecoratedSubexpr),
) -> bool {
    path_dom_leq(ball, e1, e2) && path_dom_leq(ball, f1, f2)
}

/// `Σ v^{defect(e)}` over I-antispherical `e` with endpoint `x`.
pub fn graded_rank(ball: &GroupBall, word: &[u8], x: Element, i: ParabolicSubset) -> Result<LaurentPoly> {
    let mut acc = LaurentPoly::zero();
    for e in antispherical_subexpressions(ball, word, i)? {
        if e.endpoint() == x {
            acc += &LaurentPoly::monomial(e.defect, 1);
        }
    }
    Ok(acc)
}

/// `Σ_x graded_rank(word, x) n_x`.
pub fn char_of_word(ball: &GroupBall, word: &[u8], i: ParabolicSubset) -> Result<Combination> {
    let mut out = Combination::zero();
    for e in antispherical_subexpressions(ball, word, i)? {
        out.add_term(e.endpoint(), &LaurentPoly::monomial(e.defect, 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use crate::hecke::{mul_bs, HeckeElt};
    use crate::parabolic::n_mul_bs;
    use proptest::prelude::*;

    fn ball(name: &str, cap: usize) -> GroupBall {
        GroupBall::new(CoxeterMatrix::builtin(name).unwrap(), cap).unwrap()
    }

    fn all_bits(m: usize) -> impl Iterator<Item = Vec<bool>> {
        (0u32..1 << m).map(move |k| (0..m).map(|i| k >> (m - 1 - i) & 1 == 0).collect())
    }

    #[test]
    fn decorations() {
        let b = ball("A2", 10);
        let d = decorate(&b, &[0, 0], &[true, true]).unwrap();
        assert_eq!(d.decorations, [Deco::U1, Deco::D1]);
        assert_eq!((d.defect, d.endpoint()), (0, Element::IDENTITY));
        let d = decorate(&b, &[0, 0], &[false, false]).unwrap();
        assert_eq!(d.decorations, [Deco::U0, Deco::U0]);
        assert_eq!((d.defect, d.endpoint()), (2, Element::IDENTITY));
        let d = decorate(&b, &[], &[]).unwrap();
        assert_eq!((d.defect, d.endpoint()), (0, Element::IDENTITY));
    }

    #[test]
    fn antispherical_filter() {
        let b = ball("A2", 10);
        let s = ParabolicSubset::from_indices([0]);
        for bits in all_bits(3) {
            let d = decorate(&b, &[0, 1, 0], &bits).unwrap();
            assert!(is_antispherical(&b, &[0, 1, 0], &d, ParabolicSubset::empty()).unwrap());
        }
        for bits in [[true], [false]] {
            let d = decorate(&b, &[0], &bits).unwrap();
            assert!(!is_antispherical(&b, &[0], &d, s).unwrap());
        }
        let a = ball("affA1", 10);
        let word = [1, 0, 1];
        let d = decorate(&a, &word, &[true, false, false]).unwrap();
        assert!(is_antispherical(&a, &word, &d, s).unwrap());
        let listed = antispherical_subexpressions(&a, &word, s).unwrap();
        let brute: Vec<_> = all_bits(3)
            .map(|bits| decorate(&a, &word, &bits).unwrap())
            .filter(|d| is_antispherical(&a, &word, d, s).unwrap())
            .collect();
        assert_eq!(listed, brute);
    }

    #[test]
    fn enumeration_order() {
        let b = ball("A2", 10);
        let all = antispherical_subexpressions(&b, &[0, 1], ParabolicSubset::empty()).unwrap();
        let order: Vec<String> = all.iter().map(|d| d.bit_string()).collect();
        assert_eq!(order, ["11", "10", "01", "00"]);
    }

    #[test]
    fn path_dominance() {
        let b = ball("A2", 10);
        let e11 = decorate(&b, &[0, 0], &[true, true]).unwrap();
        let e00 = decorate(&b, &[0, 0], &[false, false]).unwrap();
        assert!(path_dom_leq(&b, &e11, &e11));
        assert!(path_dom_leq(&b, &e00, &e11));
        assert!(!path_dom_leq(&b, &e11, &e00));
        let e10 = decorate(&b, &[0, 1], &[true, false]).unwrap();
        let e01 = decorate(&b, &[0, 1], &[false, true]).unwrap();
        assert!(!path_dom_leq(&b, &e10, &e01) && !path_dom_leq(&b, &e01, &e10));
        assert!(double_path_dom_leq(&b, (&e00, &e01), (&e11, &e01)));
    }

    #[test]
    fn graded_ranks_and_characters() {
        let a = ball("affA1", 10);
        let s = ParabolicSubset::from_indices([0]);
        let t = a.from_word(&[1]).unwrap();
        assert_eq!(graded_rank(&a, &[1, 0, 1], t, s).unwrap(), LaurentPoly::one());
        assert!(graded_rank(&a, &[0], t, s).unwrap().is_zero());
        assert_eq!(graded_rank(&a, &[], Element::IDENTITY, s).unwrap(), LaurentPoly::one());
        let ch = char_of_word(&a, &[1, 0, 1], s).unwrap();
        let mut expect = Combination::zero();
        expect.add_term(a.from_word(&[1, 0, 1]).unwrap(), &LaurentPoly::one());
        expect.add_term(a.from_word(&[1, 0]).unwrap(), &LaurentPoly::v());
        expect.add_term(t, &LaurentPoly::one());
        expect.add_term(Element::IDENTITY, &LaurentPoly::v());
        assert_eq!(ch, expect);
        assert!(char_of_word(&a, &[0], s).unwrap().is_zero());
        assert_eq!(char_of_word(&a, &[], s).unwrap(), Combination::basis(Element::IDENTITY));
    }

    #[test]
    fn defect_matches_hecke_products() {
        for name in ["A2", "B2", "affA1"] {
            let b = ball(name, 8);
            for m in 0..=6usize {
                for k in 0..(1u32 << m) {
                    let word: Vec<u8> = (0..m).map(|i| (k >> i & 1) as u8).collect();
                    let mut h = HeckeElt::basis(Element::IDENTITY);
                    for &s in &word {
                        h = mul_bs(&b, &h, s as usize).unwrap();
                    }
                    assert_eq!(char_of_word(&b, &word, ParabolicSubset::empty()).unwrap(), h);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn character_matches_module_action(word in prop::collection::vec(0u8..3, 0..8), mask in 0u64..8) {
            let b = ball("A3", 12);
            let i = ParabolicSubset::from_indices((0..3).filter(|&k| mask >> k & 1 == 1));
            let mut n = Combination::basis(Element::IDENTITY);
            for &s in &word {
                n = n_mul_bs(&b, i, &n, s as usize).unwrap();
            }
            prop_assert_eq!(char_of_word(&b, &word, i).unwrap(), n);
        }

        #[test]
        fn path_dominance_is_a_partial_order(word in prop::collection::vec(0u8..2, 1..6)) {
            let b = ball("affA1", 8);
            let subs = antispherical_subexpressions(&b, &word, ParabolicSubset::empty()).unwrap();
            for e in &subs {
                prop_assert!(path_dom_leq(&b, e, e));
                for f in &subs {
                    if e.endpoint() != f.endpoint() {
                        continue;
                    }
                    if path_dom_leq(&b, e, f) && path_dom_leq(&b, f, e) {
                        prop_assert_eq!(e, f);
                    }
                    for g in &subs {
                        if g.endpoint() == e.endpoint() && path_dom_leq(&b, e, f) && path_dom_leq(&b, f, g) {
                            prop_assert!(path_dom_leq(&b, e, g));
                        }
                    }
                }
            }
        }
    }
}
