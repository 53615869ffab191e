//! The acceptance suite. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any criterion fails or overruns its time limit.

use std::time::{Duration, Instant};

use antispherical::coxeter::Verdict;
use antispherical::hecke::{mul_bs, KLTable};
use antispherical::leaves::char_of_word;
use antispherical::localization::Localization;
use antispherical::parabolic::{check_deodhar, check_finitary, check_monotonicity, n_mul_bs, ParabolicKLTable};
use antispherical::{Combination, CoxeterMatrix, Element, GroupBall, ParabolicSubset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECIALIZATION_LIMIT: Duration = Duration::from_secs(5);
const POSITIVITY_LIMIT: Duration = Duration::from_secs(120);
const COSET_LIMIT: Duration = Duration::from_secs(30);
const PCANONICAL_LIMIT: Duration = Duration::from_secs(120);
const RANDOM_WORDS: usize = 1000;
const DESCENT_SAMPLES: usize = 10_000;
const SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ball(name: &str, cap: usize) -> GroupBall {
    GroupBall::new(CoxeterMatrix::builtin(name).expect("builtin type"), cap).expect("ball")
}

fn subset(idx: &[usize]) -> ParabolicSubset {
    ParabolicSubset::from_indices(idx.iter().copied())
}

fn all_words(rank: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..rank).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// The balls of the positivity criterion with the subsets checked on each.
fn positivity_cases() -> Vec<(&'static str, GroupBall, Vec<ParabolicSubset>)> {
    let h3_small: Vec<ParabolicSubset> = ParabolicSubset::all(3).filter(|i| i.len() <= 1).collect();
    vec![
        ("A3", ball("A3", 10), ParabolicSubset::all(3).collect()),
        ("B3", ball("B3", 12), ParabolicSubset::all(3).collect()),
        ("H3", ball("H3", 20), h3_small),
        ("affA1 cap 20", ball("affA1", 20), ParabolicSubset::all(2).collect()),
        ("affA2 cap 10", ball("affA2", 10), ParabolicSubset::all(3).collect()),
    ]
}

fn c1_specialization() -> Outcome {
    let b = ball("A3", 10);
    let mut kl = KLTable::new(&b);
    let mut anti = ParabolicKLTable::antispherical(&b, ParabolicSubset::empty());
    let mut pairs = 0;
    for x in b.elements() {
        for y in b.elements() {
            if anti.poly(y, x).map_err(err)? != kl.h_poly(y, x).map_err(err)? {
                return Err(format!("n_{{{},{}}} differs from h", b.format(y), b.format(x)));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs equal"))
}

fn c2_positivity() -> Outcome {
    let mut cells = 0usize;
    for (name, b, subsets) in positivity_cases() {
        for i in subsets {
            let mut t = ParabolicKLTable::antispherical(&b, i);
            t.fill().map_err(err)?;
            for x in b.min_reps(i) {
                for (y, p) in t.get(x).unwrap().iter() {
                    cells += 1;
                    if !p.is_nonneg() {
                        return Err(format!("{name} I={i}: n_{{{},{}}} = {p}", b.format(y), b.format(x)));
                    }
                }
            }
        }
    }
    Ok(format!("{cells} nonzero polynomials checked"))
}

fn c3_deodhar() -> Outcome {
    let mut pairs = 0usize;
    for (name, b, subsets) in positivity_cases() {
        let mut kl = KLTable::new(&b);
        for i in subsets {
            let mut t = ParabolicKLTable::antispherical(&b, i);
            let reps = b.min_reps(i);
            for &x in &reps {
                for &y in &reps {
                    pairs += 1;
                    if !check_deodhar(&mut t, &mut kl, y, x).map_err(err)? {
                        return Err(format!("{name} I={i}: ({}, {})", b.format(y), b.format(x)));
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn c4_finitary() -> Outcome {
    let b = ball("A3", 10);
    let mut kl = KLTable::new(&b);
    let mut pairs = 0usize;
    for i in ParabolicSubset::all(3) {
        let mut sph = ParabolicKLTable::spherical(&b, i);
        let reps = b.min_reps(i);
        for &x in &reps {
            for &y in &reps {
                pairs += 1;
                if !check_finitary(&mut sph, &mut kl, y, x).map_err(err)? {
                    return Err(format!("I={i}: ({}, {})", b.format(y), b.format(x)));
                }
            }
        }
    }
    Ok(format!("{pairs} pairs over 8 subsets"))
}

fn c5_monotonicity() -> Outcome {
    let chain = [subset(&[]), subset(&[0]), subset(&[0, 1])];
    let mut pairs = 0usize;
    for name in ["A3", "B3"] {
        let b = ball(name, 12);
        for w in chain.windows(2) {
            let (small, big) = (w[0], w[1]);
            let mut tb = ParabolicKLTable::antispherical(&b, big);
            let mut ts = ParabolicKLTable::antispherical(&b, small);
            let reps = b.min_reps(big);
            for &x in &reps {
                for &y in &reps {
                    pairs += 1;
                    if !check_monotonicity(&mut tb, &mut ts, y, x).map_err(err)? {
                        return Err(format!("{name} {small} ⊆ {big}: ({}, {})", b.format(y), b.format(x)));
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn c6_character() -> Outcome {
    let a3 = ball("A3", 10);
    let aff = ball("affA1", 12);
    let cases = [
        (&a3, subset(&[])),
        (&a3, subset(&[0])),
        (&a3, subset(&[0, 1])),
        (&aff, subset(&[0])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (b, i) in cases {
        for _ in 0..RANDOM_WORDS {
            let len = rng.gen_range(0..=10);
            let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..b.rank() as u8)).collect();
            let mut n = Combination::basis(Element::IDENTITY);
            for &s in &word {
                n = n_mul_bs(b, i, &n, s as usize).map_err(err)?;
            }
            if char_of_word(b, &word, i).map_err(err)? != n {
                return Err(format!("I={i} word {}", antispherical::coxeter::format_word(&word)));
            }
        }
    }
    Ok(format!("{} seeded words", 4 * RANDOM_WORDS))
}

fn c7_cosets() -> Outcome {
    let b = GroupBall::new(CoxeterMatrix::type_a(7).map_err(err)?, 28).map_err(err)?;
    let i = subset(&[0, 1, 2]);
    let wi = b.parabolic_subgroup(i).map_err(err)?.len();
    let reps = b.min_reps(i).len();
    if (b.len(), wi, reps) != (40320, 24, 1680) {
        return Err(format!("|W| = {}, |W_I| = {wi}, |^IW| = {reps}", b.len()));
    }
    Ok(format!("|W| = 40320, |W_I| = {wi}, |^IW| = {reps}"))
}

fn c8_parabolic_property() -> Outcome {
    let mut checked = 0usize;
    for (name, b, subsets) in positivity_cases() {
        for i in subsets {
            for x in b.min_reps(i) {
                if b.length(x) >= b.cap() {
                    continue;
                }
                for s in 0..b.rank() {
                    let root = b.parabolic_test(x, s, i).map_err(err)?;
                    let xs = b.right_mul(x, s).unwrap();
                    let comb = if b.is_min_rep(xs, i) {
                        Verdict::InQuotient
                    } else {
                        match i.iter().find(|&r| b.left_mul(r, x) == Some(xs)) {
                            Some(r) => Verdict::ExitsVia(r),
                            None => return Err(format!("{name}: xs ∉ ^IW but no r with xs = rx")),
                        }
                    };
                    checked += 1;
                    if root != comb {
                        return Err(format!("{name} I={i}: x={} s{}", b.format(x), s + 1));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let h3 = ball("H3", 20);
    let aff = ball("affA2", 10);
    for k in 0..DESCENT_SAMPLES {
        let b = if k % 2 == 0 { &h3 } else { &aff };
        let x = Element(rng.gen_range(0..b.len() as u32));
        let s = rng.gen_range(0..b.rank());
        let Some(xs) = b.right_mul(x, s) else { continue };
        if b.right_descends(x, s) != (b.length(xs) < b.length(x)) {
            return Err(format!("descent test at {} s{}", b.format(x), s + 1));
        }
    }
    Ok(format!("{checked} verdict pairs, {DESCENT_SAMPLES} descent samples"))
}

fn c9_certificates() -> Outcome {
    let a2 = ball("A2", 8);
    let aff = ball("affA1", 8);
    let mut cases: Vec<(&GroupBall, ParabolicSubset)> = ParabolicSubset::all(2).map(|i| (&a2, i)).collect();
    cases.push((&aff, subset(&[0])));
    let (mut relations, mut words, mut pairs) = (0usize, 0usize, 0usize);
    for (b, i) in cases {
        let loc = Localization::new(b, i);
        let rep = loc.relation_oracle(3).map_err(err)?;
        if !rep.passed() {
            return Err(format!("relations I={i}: {:?}", rep.failures));
        }
        relations += rep.checked;
        for w in all_words(2, 6) {
            let c = loc.certify(&w).map_err(err)?;
            if !c.passed() {
                return Err(format!("I={i}: {c:?}"));
            }
            words += 1;
            pairs += c.pairs_checked;
        }
    }
    Ok(format!("{relations} relation instances, {words} words, {pairs} leaf pairs"))
}

fn c10_pcanonical() -> Outcome {
    let a2 = ball("A2", 8);
    let aff = ball("affA1", 10);
    let cases = [(&a2, subset(&[]), 6), (&a2, subset(&[0]), 6), (&aff, subset(&[0]), 8)];
    let mut words = 0usize;
    for (b, i, len) in cases {
        let loc = Localization::new(b, i);
        let mut table = ParabolicKLTable::antispherical(b, i);
        for w in all_words(2, len) {
            let expect = table.decompose(&char_of_word(b, &w, i).map_err(err)?).map_err(err)?;
            let got = loc.pcanonical(&w, 0).map_err(err)?;
            if got != expect {
                return Err(format!("I={i} word {}", antispherical::coxeter::format_word(&w)));
            }
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn c11_defect() -> Outcome {
    let mut words = 0usize;
    for name in ["A2", "B2", "affA1"] {
        let b = ball(name, 9);
        for w in all_words(2, 8) {
            let mut h = Combination::basis(Element::IDENTITY);
            for &s in &w {
                h = mul_bs(&b, &h, s as usize).map_err(err)?;
            }
            if char_of_word(&b, &w, ParabolicSubset::empty()).map_err(err)? != h {
                return Err(format!("{name} word {}", antispherical::coxeter::format_word(&w)));
            }
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("specialization n = h on A3", Some(SPECIALIZATION_LIMIT), c1_specialization),
        ("positivity of n_{y,x}", Some(POSITIVITY_LIMIT), c2_positivity),
        ("Deodhar identity", None, c3_deodhar),
        ("finitary relation m = h(w0 y, w0 x)", None, c4_finitary),
        ("monotonicity along subset chains", None, c5_monotonicity),
        ("character identity on random words", None, c6_character),
        ("coset counts in S8", Some(COSET_LIMIT), c7_cosets),
        ("parabolic property and descents", None, c8_parabolic_property),
        ("localization certificates", None, c9_certificates),
        ("p-canonical closed loop in char 0", Some(PCANONICAL_LIMIT), c10_pcanonical),
        ("defect oracle", None, c11_defect),
    ];
    let mut failed = 0;
    for (k, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("[{tag}] criterion {:>2}: {name}: {detail} ({elapsed:.2?})", k + 1);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
