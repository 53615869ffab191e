//! The computations behind each subcommand, independent of argument parsing
//! and rendering.

use antispherical::coxeter::format_word;
use antispherical::hecke::KLTable;
use antispherical::leaves::char_of_word;
use antispherical::localization::Localization;
use antispherical::parabolic::{check_deodhar, check_finitary, check_monotonicity, n_mul_bs, ParabolicKLTable};
use antispherical::{Combination, Element, Error, GroupBall, LaurentPoly, ParabolicSubset, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    N,
    M,
    Kl,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::N => "npoly",
            TableKind::M => "mpoly",
            TableKind::Kl => "klpoly",
        }
    }
}

/// One nonzero entry `p_{y,x}`; words are ShortLex reduced words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub y: Vec<u8>,
    pub x: Vec<u8>,
    pub poly: LaurentPoly,
}

/// All nonzero entries, ordered by `x` and then `y` in ShortLex order.
pub fn table(ball: &GroupBall, i: ParabolicSubset, kind: TableKind) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let mut push = |x: Element, c: &Combination| {
        for (y, p) in c.iter() {
            rows.push(Row { y: ball.word(y).to_vec(), x: ball.word(x).to_vec(), poly: p.clone() });
        }
    };
    match kind {
        TableKind::Kl => {
            let mut t = KLTable::new(ball);
            t.fill()?;
            for x in ball.elements() {
                push(x, t.get(x).expect("filled"));
            }
        }
        TableKind::N | TableKind::M => {
            let mut t = match kind {
                TableKind::N => ParabolicKLTable::antispherical(ball, i),
                _ => ParabolicKLTable::spherical(ball, i),
            };
            t.fill()?;
            for x in ball.min_reps(i) {
                push(x, t.get(x).expect("filled"));
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<String>,
}

impl CheckReport {
    fn new(check: &str) -> Self {
        CheckReport { check: check.into(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.counterexamples.push(what());
        }
    }

    fn finish(mut self) -> Self {
        self.passed = self.counterexamples.is_empty();
        self
    }
}

fn pair(ball: &GroupBall, y: Element, x: Element) -> String {
    format!("({}, {})", ball.format(y), ball.format(x))
}

pub fn check_positivity(ball: &GroupBall, i: ParabolicSubset) -> Result<CheckReport> {
    let mut rep = CheckReport::new("positivity");
    let mut t = ParabolicKLTable::antispherical(ball, i);
    t.fill()?;
    for x in ball.min_reps(i) {
        for (y, p) in t.get(x).expect("filled").iter() {
            rep.record(p.is_nonneg(), || format!("{} = {p}", pair(ball, y, x)));
        }
    }
    Ok(rep.finish())
}

pub fn check_deodhar_all(ball: &GroupBall, i: ParabolicSubset) -> Result<CheckReport> {
    let mut rep = CheckReport::new("deodhar");
    let mut kl = KLTable::new(ball);
    let mut t = ParabolicKLTable::antispherical(ball, i);
    let reps = ball.min_reps(i);
    for &x in &reps {
        for &y in &reps {
            let ok = check_deodhar(&mut t, &mut kl, y, x)?;
            rep.record(ok, || pair(ball, y, x));
        }
    }
    Ok(rep.finish())
}

pub fn check_finitary_all(ball: &GroupBall, i: ParabolicSubset) -> Result<CheckReport> {
    let mut rep = CheckReport::new("finitary");
    ball.longest_element(i)?;
    let mut kl = KLTable::new(ball);
    let mut t = ParabolicKLTable::spherical(ball, i);
    let reps = ball.min_reps(i);
    for &x in &reps {
        for &y in &reps {
            let ok = check_finitary(&mut t, &mut kl, y, x)?;
            rep.record(ok, || pair(ball, y, x));
        }
    }
    Ok(rep.finish())
}

/// Compares consecutive members of the chain `∅ ⊆ {i1} ⊆ {i1,i2} ⊆ ...`
/// built from the generators of `order` in the given order.
pub fn check_monotonicity_chain(ball: &GroupBall, order: &[usize]) -> Result<CheckReport> {
    let mut rep = CheckReport::new("monotonicity");
    let mut small = ParabolicSubset::empty();
    for &s in order {
        let mut big = small;
        big.insert(s);
        let mut tb = ParabolicKLTable::antispherical(ball, big);
        let mut ts = ParabolicKLTable::antispherical(ball, small);
        let reps = ball.min_reps(big);
        for &x in &reps {
            for &y in &reps {
                let ok = check_monotonicity(&mut tb, &mut ts, y, x)?;
                rep.record(ok, || format!("{small} ⊆ {big}: {}", pair(ball, y, x)));
            }
        }
        small = big;
    }
    Ok(rep.finish())
}

/// Seeded random words of length at most the cap; for each, the graded
/// ranks of antispherical subexpressions must reproduce `n_e · b_word`.
pub fn check_gradedrank(ball: &GroupBall, i: ParabolicSubset, words: usize, seed: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("gradedrank");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..words {
        let len = rng.gen_range(0..=ball.cap());
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..ball.rank() as u8)).collect();
        let mut n = Combination::basis(Element::IDENTITY);
        for &s in &word {
            n = n_mul_bs(ball, i, &n, s as usize)?;
        }
        let ok = char_of_word(ball, &word, i)? == n;
        rep.record(ok, || format_word(&word));
    }
    Ok(rep.finish())
}

/// The relation oracle plus a certificate for every word up to the cap.
pub fn check_localization(ball: &GroupBall, i: ParabolicSubset, prefix: usize) -> Result<CheckReport> {
    let mut rep = CheckReport::new("localization");
    let loc = Localization::new(ball, i);
    let rel = loc.relation_oracle(prefix)?;
    rep.checked += rel.checked;
    rep.counterexamples.extend(rel.failures.into_iter().map(|f| format!("relation: {f}")));
    let rank = ball.rank() as u8;
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for len in 0..=ball.cap() {
        if len > 0 {
            layer = layer
                .iter()
                .flat_map(|w| (0..rank).map(move |s| [w.as_slice(), &[s]].concat()))
                .collect();
        }
        for w in &layer {
            let c = loc.certify(w)?;
            rep.record(c.passed(), || format!("certificate: {c:?}"));
        }
    }
    Ok(rep.finish())
}

#[derive(Clone, Debug, Serialize)]
pub struct PcanResult {
    pub terms: Vec<(Vec<u8>, LaurentPoly)>,
    /// `Some(agrees)` when the characteristic-zero cross-check ran.
    pub cross_check: Option<bool>,
}

/// Multiplicities in descending ShortLex order. In characteristic zero the
/// result is compared with the decomposition of the word's character in
/// the parabolic KL basis.
pub fn pcan(ball: &GroupBall, i: ParabolicSubset, word: &[u8], char: u64) -> Result<PcanResult> {
    if word.len() > ball.cap() {
        return Err(Error::CapExceeded { cap: ball.cap() });
    }
    let got = Localization::new(ball, i).pcanonical(word, char)?;
    let cross_check = if char == 0 {
        let expect = ParabolicKLTable::antispherical(ball, i).decompose(&char_of_word(ball, word, i)?)?;
        Some(expect == got)
    } else {
        None
    };
    let terms = got.iter().rev().map(|(x, p)| (ball.word(x).to_vec(), p.clone())).collect();
    Ok(PcanResult { terms, cross_check })
}
