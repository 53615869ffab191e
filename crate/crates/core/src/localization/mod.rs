//! The localized antispherical category. A Bott-Samelson object `N_w`
//! splits over `Q_I` into standard summands `Q_x`, one per I-antispherical
//! subexpression of `w`; morphisms become matrices over `Q_I` whose entries
//! vanish between summands with distinct endpoints.

mod forms;
mod generators;
mod lightleaves;
mod relations;

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::coxeter::{Element, GroupBall, ParabolicSubset};
use crate::error::{Error, Result};
use crate::polyring::QCoeff;

pub use forms::{Certificate, IntersectionForm, PairingBlock};
pub use generators::{flip_program, Gen, Op};
pub use lightleaves::{rex_path, BraidMove, LightLeaf};
pub use relations::RelationReport;

use generators::local_matrix;

/// A standard summand of `N_w`: antispherical bits and their endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SummandIndex {
    pub bits: Vec<bool>,
    pub endpoint: Element,
}

impl SummandIndex {
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A sparse vector over the summands of one object, keyed by bits.
pub type Vector = BTreeMap<Vec<bool>, QCoeff>;

/// A morphism `N_dom → N_cod`; the entry at `(row, col)` maps summand
/// `domain[col]` to `codomain[row]`.
#[derive(Clone, Debug)]
pub struct StdMatrix {
    pub dom_word: Vec<u8>,
    pub cod_word: Vec<u8>,
    pub domain: Vec<SummandIndex>,
    pub codomain: Vec<SummandIndex>,
    entries: BTreeMap<(usize, usize), QCoeff>,
}

impl StdMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<&QCoeff> {
        self.entries.get(&(row, col))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &QCoeff)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entry between summands given by bits, zero if absent.
    pub fn entry_by_bits(&self, row: &[bool], col: &[bool]) -> Option<&QCoeff> {
        let r = self.codomain.iter().position(|s| s.bits == row)?;
        let c = self.domain.iter().position(|s| s.bits == col)?;
        self.get(r, c)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &StdMatrix) -> Result<StdMatrix> {
        if rhs.cod_word != self.dom_word {
            return Err(Error::Internal("composing matrices of mismatched objects".into()));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &QCoeff)>> = BTreeMap::new();
        for (&(r, c), q) in &self.entries {
            by_row.entry(c).or_default().push((r, q));
        }
        let mut entries: BTreeMap<(usize, usize), QCoeff> = BTreeMap::new();
        for (&(mid, c), q) in &rhs.entries {
            for &(r, p) in by_row.get(&mid).map(|v| v.as_slice()).unwrap_or(&[]) {
                let term = p.mul(q);
                let slot = entries.entry((r, c)).or_insert_with(|| QCoeff::zero(q.numerator().n(), q.nvars()));
                *slot = slot.add(&term);
            }
        }
        entries.retain(|_, q| !q.is_zero());
        Ok(StdMatrix {
            dom_word: rhs.dom_word.clone(),
            cod_word: self.cod_word.clone(),
            domain: rhs.domain.clone(),
            codomain: self.codomain.clone(),
            entries,
        })
    }

    pub fn add(&self, other: &StdMatrix) -> StdMatrix {
        let mut out = self.clone();
        for (k, q) in &other.entries {
            let v = match out.entries.get(k) {
                Some(p) => p.add(q),
                None => q.clone(),
            };
            out.entries.insert(*k, v);
        }
        out.entries.retain(|_, q| !q.is_zero());
        out
    }

    pub fn scale(&self, c: &QCoeff) -> StdMatrix {
        let mut out = self.clone();
        out.entries = self.entries.iter().map(|(k, q)| (*k, q.mul(c))).filter(|(_, q)| !q.is_zero()).collect();
        out
    }

    /// Exact equality of objects and all entries.
    pub fn same_as(&self, other: &StdMatrix) -> bool {
        self.dom_word == other.dom_word
            && self.cod_word == other.cod_word
            && self.entries.len() == other.entries.len()
            && self.entries.iter().all(|(k, q)| other.entries.get(k).is_some_and(|p| p == q))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries joining summands with different endpoints.
    pub fn endpoint_mismatches(&self) -> usize {
        self.entries.keys().filter(|(r, c)| self.codomain[*r].endpoint != self.domain[*c].endpoint).count()
    }

    pub fn to_json(&self, ball: &GroupBall) -> serde_json::Value {
        let summands = |v: &[SummandIndex]| -> Vec<serde_json::Value> {
            v.iter()
                .map(|s| serde_json::json!({"bits": s.bit_string(), "endpoint": ball.format(s.endpoint)}))
                .collect()
        };
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(&(r, c), q)| {
                serde_json::json!({
                    "row": self.codomain[r].bit_string(),
                    "col": self.domain[c].bit_string(),
                    "numerator": q.numerator().to_string(),
                    "roots": q.denominators().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "domain_word": crate::coxeter::format_word(&self.dom_word),
            "codomain_word": crate::coxeter::format_word(&self.cod_word),
            "domain": summands(&self.domain),
            "codomain": summands(&self.codomain),
            "entries": entries,
        })
    }
}

/// Local entries after twisting by a prefix endpoint; `None` marks a
/// coefficient whose denominator vanishes in `Q_I`.
type Twisted = Vec<(Vec<bool>, Vec<bool>, Option<QCoeff>)>;

/// Evaluation context for one group ball and one `I`.
pub struct Localization<'a> {
    ball: &'a GroupBall,
    subset: ParabolicSubset,
    cache: RefCell<HashMap<(Gen, Element), Rc<Twisted>>>,
}

impl<'a> Localization<'a> {
    pub fn new(ball: &'a GroupBall, subset: ParabolicSubset) -> Self {
        Localization { ball, subset, cache: RefCell::new(HashMap::new()) }
    }

    pub fn ball(&self) -> &'a GroupBall {
        self.ball
    }

    pub fn subset(&self) -> ParabolicSubset {
        self.subset
    }

    pub fn zero(&self) -> QCoeff {
        QCoeff::zero(self.ball.ring_n(), self.ball.rank())
    }

    pub fn one(&self) -> QCoeff {
        QCoeff::one(self.ball.ring_n(), self.ball.rank())
    }

    /// The endpoint if `x_k s_{k+1} ∈ ^IW` for every `k`, else `None`.
    pub fn summand_endpoint(&self, word: &[u8], bits: &[bool]) -> Result<Option<Element>> {
        let mut x = Element::IDENTITY;
        for (&s, &b) in word.iter().zip(bits) {
            let xs = self.ball.right_mul_checked(x, s as usize)?;
            if !self.ball.is_min_rep(xs, self.subset) {
                return Ok(None);
            }
            if b {
                x = xs;
            }
        }
        Ok(Some(x))
    }

    fn prefix_endpoint(&self, word: &[u8], bits: &[bool], site: usize) -> Result<Element> {
        let mut x = Element::IDENTITY;
        for (&s, &b) in word[..site].iter().zip(&bits[..site]) {
            if b {
                x = self.ball.right_mul_checked(x, s as usize)?;
            }
        }
        Ok(x)
    }

    /// The I-antispherical summands of `N_word` in canonical order; an
    /// empty list is the zero object.
    pub fn decompose(&self, word: &[u8]) -> Result<Vec<SummandIndex>> {
        Ok(crate::leaves::antispherical_subexpressions(self.ball, word, self.subset)?
            .into_iter()
            .map(|d| SummandIndex { endpoint: d.endpoint(), bits: d.bits })
            .collect())
    }

    fn twisted(&self, gen: &Gen, y: Element) -> Result<Rc<Twisted>> {
        let key = (gen.clone(), y);
        if let Some(t) = self.cache.borrow().get(&key) {
            return Ok(t.clone());
        }
        let local = local_matrix(self.ball, gen)?;
        let twisted: Twisted = local
            .into_iter()
            .filter_map(|e| match e.coeff.twist(self.ball, y, self.subset) {
                Ok(c) if c.is_zero() => None,
                Ok(c) => Some((e.out, e.inp, Some(c))),
                Err(_) => Some((e.out, e.inp, None)),
            })
            .collect();
        let rc = Rc::new(twisted);
        self.cache.borrow_mut().insert(key, rc.clone());
        Ok(rc)
    }

    /// The object after applying `op` to `word`.
    pub fn target_word(&self, op: &Op, word: &[u8]) -> Result<Vec<u8>> {
        let inp = op.gen.input(self.ball)?;
        let end = op.site + inp.len();
        if end > word.len() || word[op.site..end] != inp[..] {
            return Err(Error::Internal(format!(
                "{:?} does not apply at site {} of {}",
                op.gen,
                op.site,
                crate::coxeter::format_word(word)
            )));
        }
        let mut out = word[..op.site].to_vec();
        out.extend(op.gen.output(self.ball)?);
        out.extend_from_slice(&word[end..]);
        Ok(out)
    }

    fn coeff_or_err(c: &Option<QCoeff>) -> Result<&QCoeff> {
        c.as_ref().ok_or_else(|| Error::NotInvertible("a local coefficient has a root of Φ_I in its denominator".into()))
    }

    /// Pushes a column vector over summands of `word` through `op`.
    pub fn push(&self, op: &Op, word: &[u8], v: &Vector) -> Result<(Vec<u8>, Vector)> {
        let out_word = self.target_word(op, word)?;
        let k = op.gen.input(self.ball)?.len();
        let mut out = Vector::new();
        for (b, c) in v {
            let y = self.prefix_endpoint(word, b, op.site)?;
            let local = &b[op.site..op.site + k];
            for (lo, li, lc) in self.twisted(&op.gen, y)?.iter() {
                if li[..] != *local {
                    continue;
                }
                let mut nb = b[..op.site].to_vec();
                nb.extend_from_slice(lo);
                nb.extend_from_slice(&b[op.site + k..]);
                if self.summand_endpoint(&out_word, &nb)?.is_none() {
                    continue;
                }
                let Some(lc) = lc else {
                    Self::coeff_or_err(lc)?;
                    continue;
                };
                add_into(&mut out, nb, c.mul(lc));
            }
        }
        Ok((out_word, out))
    }

    /// Pulls a row vector over summands of `op(word)` back to `word`.
    pub fn pull(&self, op: &Op, word: &[u8], v: &Vector) -> Result<Vector> {
        let k = op.gen.output(self.ball)?.len();
        let mut out = Vector::new();
        for (b, c) in v {
            let y = self.prefix_endpoint(word, b, op.site)?;
            let local = &b[op.site..op.site + k];
            for (lo, li, lc) in self.twisted(&op.gen, y)?.iter() {
                if lo[..] != *local {
                    continue;
                }
                let mut nb = b[..op.site].to_vec();
                nb.extend_from_slice(li);
                nb.extend_from_slice(&b[op.site + k..]);
                if self.summand_endpoint(word, &nb)?.is_none() {
                    continue;
                }
                let Some(lc) = lc else {
                    Self::coeff_or_err(lc)?;
                    continue;
                };
                add_into(&mut out, nb, c.mul(lc));
            }
        }
        Ok(out)
    }

    /// The chain of objects visited by a composite.
    pub fn words(&self, ops: &[Op], word: &[u8]) -> Result<Vec<Vec<u8>>> {
        let mut chain = vec![word.to_vec()];
        for op in ops {
            let next = self.target_word(op, chain.last().unwrap())?;
            chain.push(next);
        }
        Ok(chain)
    }

    /// Applies `ops` (first op first) to a column vector.
    pub fn run_col(&self, ops: &[Op], word: &[u8], v: Vector) -> Result<(Vec<u8>, Vector)> {
        let mut cur = (word.to_vec(), v);
        for op in ops {
            cur = self.push(op, &cur.0, &cur.1)?;
        }
        Ok(cur)
    }

    /// Pulls a row vector on the final object back to `word`.
    pub fn run_row(&self, ops: &[Op], word: &[u8], v: Vector) -> Result<Vector> {
        let chain = self.words(ops, word)?;
        let mut cur = v;
        for (op, w) in ops.iter().zip(&chain).rev() {
            cur = self.pull(op, w, &cur)?;
        }
        Ok(cur)
    }

    /// The matrix of a composite `ops` starting at `word`.
    pub fn matrix(&self, ops: &[Op], word: &[u8]) -> Result<StdMatrix> {
        let cod_word = self.words(ops, word)?.pop().unwrap();
        let domain = self.decompose(word)?;
        let codomain = self.decompose(&cod_word)?;
        let row_of: HashMap<&Vec<bool>, usize> = codomain.iter().enumerate().map(|(i, s)| (&s.bits, i)).collect();
        let mut entries = BTreeMap::new();
        for (c, s) in domain.iter().enumerate() {
            let (_, col) = self.run_col(ops, word, Vector::from([(s.bits.clone(), self.one())]))?;
            for (b, q) in col {
                let r = *row_of.get(&b).ok_or_else(|| Error::Internal("column left the summand list".into()))?;
                entries.insert((r, c), q);
            }
        }
        Ok(StdMatrix { dom_word: word.to_vec(), cod_word, domain, codomain, entries })
    }

    /// The identity of `N_word`.
    pub fn identity(&self, word: &[u8]) -> Result<StdMatrix> {
        self.matrix(&[], word)
    }

    /// The matrix of one generator at `site` on `word`.
    pub fn gen_matrix(&self, gen: Gen, site: usize, word: &[u8]) -> Result<StdMatrix> {
        self.matrix(&[Op::new(gen, site)], word)
    }
}

fn add_into(v: &mut Vector, key: Vec<bool>, q: QCoeff) {
    if q.is_zero() {
        return;
    }
    match v.get_mut(&key) {
        Some(e) => {
            *e = e.add(&q);
            if e.is_zero() {
                v.remove(&key);
            }
        }
        None => {
            v.insert(key, q);
        }
    }
}

#[cfg(test)]
mod tests;
