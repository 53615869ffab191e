use super::*;
use crate::coxeter::CoxeterMatrix;
use crate::hecke::Combination;
use crate::laurent::LaurentPoly;
use crate::leaves;
use crate::parabolic::ParabolicKLTable;
use crate::polyring::{LinearForm, Poly};
use proptest::prelude::*;

fn ball(name: &str, cap: usize) -> GroupBall {
    GroupBall::new(CoxeterMatrix::builtin(name).unwrap(), cap).unwrap()
}

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|b| b == b'1').collect()
}

fn subset(idx: &[usize]) -> ParabolicSubset {
    ParabolicSubset::from_indices(idx.iter().copied())
}

#[test]
fn relation_oracle_holds() {
    let a2 = ball("A2", 8);
    for i in ParabolicSubset::all(2) {
        let rep = Localization::new(&a2, i).relation_oracle(2).unwrap();
        assert!(rep.passed(), "A2 {i}: {:?}", rep.failures);
        assert!(rep.checked > 500);
    }
    let aff = ball("affA1", 8);
    let rep = Localization::new(&aff, subset(&[0])).relation_oracle(3).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    let a1a1 = GroupBall::new(CoxeterMatrix::dihedral(Some(2)).unwrap(), 4).unwrap();
    let rep = Localization::new(&a1a1, ParabolicSubset::empty()).relation_oracle(2).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn relation_checks_are_not_vacuous() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let ts = [1u8, 0];
    let ops = |l: &[(Gen, usize)]| l.iter().map(|(g, s)| Op::new(g.clone(), *s)).collect::<Vec<_>>();
    let dotted = loc.matrix(&ops(&[(Gen::StartDot(0), 0), (Gen::Braid(0, 1), 0)]), &ts).unwrap();
    let a = loc.matrix(&ops(&[(Gen::StartDot(1), 2)]), &ts).unwrap();
    let c = loc.matrix(&ops(&[(Gen::EndDot(0), 1), (Gen::Split(1), 0), (Gen::StartDot(0), 1)]), &ts).unwrap();
    assert!(!dotted.is_zero() && !a.is_zero() && !c.is_zero());
    assert!(dotted.same_as(&a.add(&c)));
    assert!(!dotted.same_as(&a));
    let minus = c.scale(&loc.one().neg());
    assert!(!dotted.same_as(&a.add(&minus)));
    // Rescaling the braid's t-block breaks two-color associativity.
    let sts = [0u8, 1, 0];
    let braid = loc.gen_matrix(Gen::Braid(0, 1), 0, &sts).unwrap();
    let split = loc.gen_matrix(Gen::Split(1), 2, &[1, 0, 1]).unwrap();
    let lhs = split.compose(&braid).unwrap();
    let rhs = loc
        .matrix(&ops(&[(Gen::Split(0), 0), (Gen::Braid(0, 1), 1), (Gen::Braid(0, 1), 0)]), &sts)
        .unwrap();
    assert!(lhs.same_as(&rhs));
    let two = QCoeff::constant(crate::scalars::CycInt::from_int(1, 2), 2);
    assert!(!split.compose(&braid.scale(&two)).unwrap().same_as(&rhs));
}

#[test]
fn decompose_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, subset(&[0]));
    assert!(loc.decompose(&[0]).unwrap().is_empty());
    let t = b.from_word(&[1]).unwrap();
    let d = loc.decompose(&[1]).unwrap();
    assert_eq!(d, vec![SummandIndex { bits: bits("1"), endpoint: t }, SummandIndex { bits: bits("0"), endpoint: Element::IDENTITY }]);
    assert_eq!(loc.decompose(&[]).unwrap(), vec![SummandIndex { bits: vec![], endpoint: Element::IDENTITY }]);
}

#[test]
fn appending_a_strand_splits_each_summand() {
    let aff = ball("affA1", 10);
    let a2 = ball("A2", 10);
    for (b, i) in [(&aff, subset(&[0])), (&a2, subset(&[1])), (&a2, ParabolicSubset::empty())] {
        let loc = Localization::new(b, i);
        for w in [vec![1u8, 0, 1], vec![1, 0], vec![0, 1, 0, 1], vec![1, 1, 0]] {
            let base = loc.decompose(&w).unwrap();
            for s in 0..2u8 {
                let mut ws = w.clone();
                ws.push(s);
                let mut expect = Vec::new();
                for e in &base {
                    let xs = b.right_mul(e.endpoint, s as usize).unwrap();
                    if b.is_min_rep(xs, i) {
                        let mut one = e.bits.clone();
                        one.push(true);
                        let mut zero = e.bits.clone();
                        zero.push(false);
                        expect.push(SummandIndex { bits: one, endpoint: xs });
                        expect.push(SummandIndex { bits: zero, endpoint: e.endpoint });
                    }
                }
                let mut got = loc.decompose(&ws).unwrap();
                got.sort();
                expect.sort();
                assert_eq!(got, expect);
            }
        }
    }
}

#[test]
fn generator_matrix_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let (n, r) = (b.ring_n(), b.rank());
    let f = Poly::var(n, r, 0).add(&Poly::var(n, r, 1).scale(&crate::scalars::CycInt::from_int(1, 3)));
    let m = loc.gen_matrix(Gen::Poly(f.clone()), 0, &[0, 1]).unwrap();
    for (k, s) in m.domain.iter().enumerate() {
        assert_eq!(m.get(k, k).unwrap(), &QCoeff::from_poly(f.clone()));
        assert_eq!(m.codomain[k], *s);
    }
    assert_eq!(m.nnz(), m.domain.len());
    // Barbell after the prefix st: the scalar is the twisted root.
    let loc_i = Localization::new(&b, subset(&[1]));
    let prefix = [1u8, 0];
    let ops = vec![Op::new(Gen::StartDot(1), 2), Op::new(Gen::EndDot(1), 2)];
    let bar = loc_i.matrix(&ops, &prefix).unwrap();
    for (k, s) in bar.domain.iter().enumerate() {
        let root = LinearForm::root_image(&b, s.endpoint, 1).reduce_mod(subset(&[1]));
        assert_eq!(bar.get(k, k).unwrap(), &QCoeff::linear(&root));
    }
    // Round trip of braids keeps the top coefficient.
    let sts = [0u8, 1, 0];
    let rt = loc.matrix(&[Op::new(Gen::Braid(0, 1), 0), Op::new(Gen::Braid(1, 0), 0)], &sts).unwrap();
    assert_eq!(rt.entry_by_bits(&bits("111"), &bits("111")).unwrap(), &loc.one());
    assert_eq!(rt.endpoint_mismatches(), 0);
}

#[test]
fn light_leaf_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let empty = loc.light_leaves(&[], None).unwrap();
    assert_eq!(empty.len(), 1);
    let m = loc.eval_lightleaf(&empty[0]).unwrap();
    assert_eq!((m.domain.len(), m.codomain.len(), m.nnz()), (1, 1, 1));
    assert_eq!(m.get(0, 0).unwrap(), &loc.one());

    let dot = loc.light_leaves(&[0], Some(Element::IDENTITY)).unwrap();
    let round = loc.eval_lightleaf(&dot[0]).unwrap().compose(&loc.eval_lightleaf_flipped(&dot[0]).unwrap()).unwrap();
    assert_eq!(round.get(0, 0).unwrap(), &QCoeff::linear(&LinearForm::simple(&b, 0)));

    let aff = ball("affA1", 8);
    let la = Localization::new(&aff, subset(&[0]));
    let leaf = LightLeaf::build(&aff, &[1, 0, 1], leaves::decorate(&aff, &[1, 0, 1], &bits("100")).unwrap()).unwrap();
    assert_eq!(leaf.target, vec![1]);
    let m = la.eval_lightleaf(&leaf).unwrap();
    assert!(!m.is_zero());
    assert_eq!(m.endpoint_mismatches(), 0);
    assert_eq!(m.codomain.len(), 2);
}

#[test]
fn leaf_degree_is_defect() {
    let b = ball("A2", 8);
    for i in ParabolicSubset::all(2) {
        for w in [vec![0u8, 1, 0, 1, 0], vec![0, 0, 1, 1, 0, 1], vec![1, 0, 1, 0, 1, 0]] {
            for l in Localization::new(&b, i).light_leaves(&w, None).unwrap() {
                assert_eq!(l.degree(), l.subexpr.defect);
            }
        }
    }
}

#[test]
fn pairing_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let p = loc.pairing(&[0, 0], &bits("00"), &bits("00")).unwrap();
    let a = QCoeff::linear(&LinearForm::simple(&b, 0));
    assert_eq!(p, a.mul(&a));
    assert!(loc.pairing(&[0, 0], &bits("00"), &bits("10")).unwrap().is_zero());
    let d = loc.pairing(&[0, 1, 0], &bits("100"), &bits("100")).unwrap();
    assert!(!d.is_zero());
}

#[test]
fn intersection_form_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let sts = b.from_word(&[0, 1, 0]).unwrap();
    let top = loc.intersection_form(&[0, 1, 0], sts, 0).unwrap();
    assert_eq!(top.blocks.len(), 1);
    assert_eq!(top.blocks[&0].entries, vec![vec![crate::polyring::KFrac::from_ratio(1, 1, 1)]]);
    let s = b.from_word(&[0]).unwrap();
    let form = loc.intersection_form(&[0, 1, 0], s, 0).unwrap();
    assert_eq!(form.leaves.len(), 2);
    assert_eq!(form.multiplicity, LaurentPoly::one());
    let aff = ball("affA1", 8);
    let la = Localization::new(&aff, subset(&[0]));
    let t = aff.from_word(&[1]).unwrap();
    assert_eq!(la.intersection_form(&[1, 0, 1], t, 0).unwrap().multiplicity, LaurentPoly::one());
}

fn combo(b: &GroupBall, items: &[(&[u8], LaurentPoly)]) -> Combination {
    let mut c = Combination::zero();
    for (w, p) in items {
        c.add_term(b.from_word(w).unwrap(), p);
    }
    c
}

#[test]
fn pcanonical_examples() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    assert_eq!(loc.pcanonical(&[0, 1, 0], 0).unwrap(), combo(&b, &[(&[0, 1, 0], LaurentPoly::one()), (&[0], LaurentPoly::one())]));
    assert_eq!(loc.pcanonical(&[], 0).unwrap(), combo(&b, &[(&[], LaurentPoly::one())]));
    let li = Localization::new(&b, subset(&[0]));
    assert_eq!(li.pcanonical(&[1, 0], 0).unwrap(), combo(&b, &[(&[1, 0], LaurentPoly::one())]));
    let aff = ball("affA1", 8);
    let la = Localization::new(&aff, subset(&[0]));
    assert_eq!(la.pcanonical(&[1, 0, 1], 0).unwrap(), combo(&aff, &[(&[1, 0, 1], LaurentPoly::one()), (&[1], LaurentPoly::one())]));
    assert_eq!(loc.pcanonical(&[0, 0], 0).unwrap(), combo(&b, &[(&[0], LaurentPoly::quantum_two())]));
}

#[test]
fn characteristic_restrictions() {
    let h = ball("I2 5", 6);
    let loc = Localization::new(&h, ParabolicSubset::empty());
    assert_eq!(loc.pcanonical(&[0, 1], 2).unwrap_err(), Error::UnsupportedCharacteristic(2));
    let b = ball("A2", 6);
    let la = Localization::new(&b, ParabolicSubset::empty());
    assert_eq!(la.pcanonical(&[0], 4).unwrap_err(), Error::UnsupportedCharacteristic(4));
    let b2 = ball("B2", 8);
    let lb = Localization::new(&b2, ParabolicSubset::empty());
    assert_eq!(lb.pcanonical(&[0, 1, 0, 1, 0], 0).unwrap_err(), Error::UnsupportedBraid(4));
}

#[test]
fn certificates_on_short_words() {
    let b = ball("A2", 8);
    for i in ParabolicSubset::all(2) {
        let loc = Localization::new(&b, i);
        for w in [vec![0u8, 1, 0], vec![0, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 1, 0]] {
            let c = loc.certify(&w).unwrap();
            assert!(c.passed(), "{i} {:?}", c);
        }
    }
}

#[test]
fn json_dump_lists_entries() {
    let b = ball("A2", 8);
    let loc = Localization::new(&b, ParabolicSubset::empty());
    let m = loc.gen_matrix(Gen::Merge(0), 0, &[0, 0]).unwrap();
    let j = m.to_json(&b);
    assert_eq!(j["entries"].as_array().unwrap().len(), 4);
    assert_eq!(j["codomain_word"], "s1");
}

fn word_strategy(len: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 0..=len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn pcanonical_matches_kl_in_char_zero(w in word_strategy(6), which in 0usize..2) {
        let b = ball("A2", 8);
        let i = if which == 0 { ParabolicSubset::empty() } else { subset(&[0]) };
        let loc = Localization::new(&b, i);
        let mut table = ParabolicKLTable::antispherical(&b, i);
        let expect = table.decompose(&leaves::char_of_word(&b, &w, i).unwrap()).unwrap();
        prop_assert_eq!(loc.pcanonical(&w, 0).unwrap(), expect);
    }

    #[test]
    fn ranks_drop_mod_p(w in word_strategy(7), p in prop::sample::select(vec![2u64, 3, 5])) {
        let b = ball("affA1", 10);
        let loc = Localization::new(&b, subset(&[0]));
        let zero = loc.pcanonical(&w, 0).unwrap();
        let modp = loc.pcanonical(&w, p).unwrap();
        for (x, m) in modp.iter() {
            prop_assert!(m.leq_coeffwise(&zero.coeff(x)));
        }
    }
}
