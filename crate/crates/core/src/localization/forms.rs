//! Pairings of light leaves, local intersection forms, p-canonical
//! multiplicities and the triangularity certificates.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::coxeter::Element;
use crate::error::{Error, Result};
use crate::hecke::Combination;
use crate::laurent::LaurentPoly;
use crate::leaves::{self, DecoratedSubexpr};
use crate::polyring::{rank_kfrac, rank_mod_p, rank_mod_p_u64, KFrac, LinearForm, QCoeff};

use super::{LightLeaf, Localization, StdMatrix, Vector};

/// Degree-0 Gram blocks of the light leaves expressing `x`: block `k` has
/// rows the leaves of defect `k` and columns the leaves of defect `-k`.
#[derive(Clone, Debug)]
pub struct IntersectionForm {
    pub x: Element,
    pub leaves: Vec<DecoratedSubexpr>,
    pub blocks: BTreeMap<i32, PairingBlock>,
    /// `Σ_k rank(block k) v^k`.
    pub multiplicity: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct PairingBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Vec<KFrac>>,
    pub rank: usize,
}

/// Outcome of the localization checks on one word.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Certificate {
    pub word: String,
    pub pairs_checked: usize,
    pub endpoint_mismatches: usize,
    pub triangularity_failures: Vec<String>,
    pub non_root_diagonals: Vec<String>,
    pub singular: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.endpoint_mismatches == 0
            && self.triangularity_failures.is_empty()
            && self.non_root_diagonals.is_empty()
            && self.singular.is_empty()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl<'a> Localization<'a> {
    /// Light leaves of `word`, optionally only those expressing `x`.
    pub fn light_leaves(&self, word: &[u8], x: Option<Element>) -> Result<Vec<LightLeaf>> {
        leaves::antispherical_subexpressions(self.ball, word, self.subset)?
            .into_iter()
            .filter(|d| x.is_none_or(|x| d.endpoint() == x))
            .map(|d| LightLeaf::build(self.ball, word, d))
            .collect()
    }

    fn leaf_of(&self, word: &[u8], bits: &[bool]) -> Result<LightLeaf> {
        let d = leaves::decorate(self.ball, word, bits)?;
        if !leaves::is_antispherical(self.ball, word, &d, self.subset)? {
            return Err(Error::Internal(format!("{} is not I-antispherical", bit_string(bits))));
        }
        LightLeaf::build(self.ball, word, d)
    }

    fn top(leaf: &LightLeaf) -> Vec<bool> {
        vec![true; leaf.target.len()]
    }

    /// `LL_e : N_word → N_target` as a matrix.
    pub fn eval_lightleaf(&self, leaf: &LightLeaf) -> Result<StdMatrix> {
        self.matrix(&leaf.ops, &leaf.word)
    }

    /// `LL-bar_e : N_target → N_word` as a matrix.
    pub fn eval_lightleaf_flipped(&self, leaf: &LightLeaf) -> Result<StdMatrix> {
        self.matrix(&leaf.flipped(), &leaf.target)
    }

    /// Row `top` of `LL_e`.
    fn top_row(&self, leaf: &LightLeaf) -> Result<Vector> {
        self.run_row(&leaf.ops, &leaf.word, Vector::from([(Self::top(leaf), self.one())]))
    }

    /// Column `top` of `LL-bar_f`.
    fn top_col(&self, leaf: &LightLeaf) -> Result<Vector> {
        Ok(self.run_col(&leaf.flipped(), &leaf.target, Vector::from([(Self::top(leaf), self.one())]))?.1)
    }

    /// `p^{f,e}_{f,e}`: the leading coefficient of `LL-bar_f ∘ LL_e`, read on
    /// the top summand of the target rex; zero if the endpoints differ.
    pub fn pairing(&self, word: &[u8], e: &[bool], f: &[bool]) -> Result<QCoeff> {
        let le = self.leaf_of(word, e)?;
        let lf = self.leaf_of(word, f)?;
        if le.subexpr.endpoint() != lf.subexpr.endpoint() {
            return Ok(self.zero());
        }
        let row = self.top_row(&le)?;
        let col = self.top_col(&lf)?;
        match (row.get(e), col.get(f)) {
            (Some(a), Some(b)) => Ok(a.mul(b)),
            _ => Ok(self.zero()),
        }
    }

    /// The graded local intersection form at `x`. In characteristic `p > 0`
    /// the entries must be rational with denominators prime to `p`.
    pub fn intersection_form(&self, word: &[u8], x: Element, char: u64) -> Result<IntersectionForm> {
        if char != 0 && (!is_prime(char) || self.ball.ring_n() != 1) {
            return Err(Error::UnsupportedCharacteristic(char));
        }
        let leaves = self.light_leaves(word, Some(x))?;
        let rows: Vec<Vector> = leaves.iter().map(|l| self.top_row(l)).collect::<Result<_>>()?;
        let cols: Vec<Vector> = leaves.iter().map(|l| self.top_col(l)).collect::<Result<_>>()?;
        let mut by_defect: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, l) in leaves.iter().enumerate() {
            by_defect.entry(l.subexpr.defect).or_default().push(i);
        }
        let mut blocks = BTreeMap::new();
        let mut multiplicity = LaurentPoly::zero();
        for (&k, row_idx) in &by_defect {
            let Some(col_idx) = by_defect.get(&-k) else { continue };
            let mut entries = Vec::with_capacity(row_idx.len());
            for &r in row_idx {
                let mut line = Vec::with_capacity(col_idx.len());
                for &c in col_idx {
                    let q = dot(&rows[r], &cols[c], self.zero());
                    let val = q.constant_value().ok_or_else(|| {
                        Error::Internal(format!("degree-0 pairing {} is not a constant", q))
                    })?;
                    line.push(val);
                }
                entries.push(line);
            }
            let rank = if char == 0 {
                rank_kfrac(&entries)
            } else {
                let rational: Vec<Vec<_>> = entries
                    .iter()
                    .map(|l| l.iter().map(|v| v.as_rational().cloned()).collect::<Option<Vec<_>>>())
                    .collect::<Option<_>>()
                    .ok_or(Error::UnsupportedCharacteristic(char))?;
                rank_mod_p(&rational, char).ok_or(Error::UnsupportedCharacteristic(char))?
            };
            if rank > 0 {
                multiplicity += &LaurentPoly::monomial(k, rank as i64);
            }
            blocks.insert(k, PairingBlock { rows: row_idx.clone(), cols: col_idx.clone(), entries, rank });
        }
        Ok(IntersectionForm { x, leaves: leaves.into_iter().map(|l| l.subexpr).collect(), blocks, multiplicity })
    }

    /// Graded multiplicities of the indecomposable summands of `N_word`,
    /// visiting endpoints by decreasing length with ShortLex tiebreak.
    pub fn pcanonical(&self, word: &[u8], char: u64) -> Result<Combination> {
        let mut xs: Vec<Element> = self.decompose(word)?.into_iter().map(|s| s.endpoint).collect();
        xs.sort_by_key(|&x| (std::cmp::Reverse(self.ball.length(x)), x));
        xs.dedup();
        let mut out = Combination::zero();
        for x in xs {
            let form = self.intersection_form(word, x, char)?;
            out.add_term(x, &form.multiplicity);
        }
        Ok(out)
    }

    /// Normalized root images `y(α_s) mod I` for `l(y) ≤ max_len`, nonzero.
    fn root_candidates(&self, max_len: usize) -> Vec<LinearForm> {
        let mut out: Vec<LinearForm> = Vec::new();
        for y in self.ball.elements().take_while(|&y| self.ball.length(y) <= max_len) {
            for s in 0..self.ball.rank() {
                let f = LinearForm::root_image(self.ball, y, s).reduce_mod(self.subset);
                if !f.is_zero() {
                    out.push(f.normalized().1);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Runs the triangularity, diagonal, endpoint and invertibility checks
    /// on every pair of light leaves of `word` with a common endpoint.
    pub fn certify(&self, word: &[u8]) -> Result<Certificate> {
        let mut cert = Certificate { word: crate::coxeter::format_word(word), ..Default::default() };
        let summands: HashMap<Vec<bool>, DecoratedSubexpr> = leaves::antispherical_subexpressions(self.ball, word, self.subset)?
            .into_iter()
            .map(|d| (d.bits.clone(), d))
            .collect();
        let candidates = self.root_candidates(word.len());
        let all = self.light_leaves(word, None)?;
        let mut by_x: BTreeMap<Element, Vec<&LightLeaf>> = BTreeMap::new();
        for l in &all {
            by_x.entry(l.subexpr.endpoint()).or_default().push(l);
        }
        for (x, group) in by_x {
            let ll: Vec<StdMatrix> = group.iter().map(|l| self.eval_lightleaf(l)).collect::<Result<_>>()?;
            let llbar: Vec<StdMatrix> = group.iter().map(|l| self.eval_lightleaf_flipped(l)).collect::<Result<_>>()?;
            for m in ll.iter().chain(&llbar) {
                cert.endpoint_mismatches += m.endpoint_mismatches();
            }
            // Full pairing matrix: rows (f', e'), columns (f, e), over leaves expressing x.
            let n = group.len();
            let mut full: Vec<Vec<QCoeff>> = vec![vec![self.zero(); n * n]; n * n];
            for (ie, e) in group.iter().enumerate() {
                for (jf, f) in group.iter().enumerate() {
                    cert.pairs_checked += 1;
                    let double = llbar[jf].compose(&ll[ie])?;
                    cert.endpoint_mismatches += double.endpoint_mismatches();
                    let name = format!("x={} e={} f={}", self.ball.format(x), bit_string(e.bits()), bit_string(f.bits()));
                    let mut diagonal = None;
                    for (&(r, c), q) in double.entries() {
                        let (fp, ep) = (&double.codomain[r].bits, &double.domain[c].bits);
                        if !(leaves::path_dom_leq(self.ball, &summands[ep], &e.subexpr)
                            && leaves::path_dom_leq(self.ball, &summands[fp], &f.subexpr))
                        {
                            cert.triangularity_failures.push(format!("{name}: nonzero at f'={} e'={}", bit_string(fp), bit_string(ep)));
                        }
                        if ep == e.bits() && fp == f.bits() {
                            diagonal = Some(q.clone());
                        }
                        let (Some(a), Some(b)) = (group.iter().position(|l| l.bits() == &ep[..]), group.iter().position(|l| l.bits() == &fp[..])) else {
                            continue;
                        };
                        full[b * n + a][jf * n + ie] = q.clone();
                    }
                    match diagonal {
                        Some(q) if q.factor_roots(&candidates).is_some() => {}
                        Some(q) => cert.non_root_diagonals.push(format!("{name}: {q}")),
                        None => cert.non_root_diagonals.push(format!("{name}: zero")),
                    }
                }
            }
            if !self.invertible_at_points(&full) {
                cert.singular.push(self.ball.format(x));
            }
        }
        Ok(cert)
    }

    /// Full rank at one of a few integer points where all entries are
    /// defined; full rank at any point implies invertibility over `Q_I`.
    fn invertible_at_points(&self, m: &[Vec<QCoeff>]) -> bool {
        let r = self.ball.rank() as i64;
        let points = || (0..6i64).map(move |k| (0..r).map(|i| 3 + 7 * k + (i + 1) * (i + 2 + 5 * k) + i * i * 11).collect::<Vec<i64>>());
        if self.ball.ring_n() == 1 {
            // Full rank mod p forces a nonzero determinant over Q.
            const P: u64 = (1 << 61) - 1;
            for point in points() {
                let pu: Vec<u64> = point.iter().map(|&x| x as u64).collect();
                let vals: Option<Vec<Vec<u64>>> = m.iter().map(|row| row.iter().map(|q| q.eval_mod_p(&pu, P)).collect()).collect();
                if vals.is_some_and(|v| rank_mod_p_u64(v, P) == m.len()) {
                    return true;
                }
            }
        }
        for point in points() {
            let vals: Option<Vec<Vec<KFrac>>> =
                m.iter().map(|row| row.iter().map(|q| q.eval_int(&point)).collect()).collect();
            if let Some(vals) = vals {
                if rank_kfrac(&vals) == m.len() {
                    return true;
                }
            }
        }
        false
    }
}

fn dot(row: &Vector, col: &Vector, zero: QCoeff) -> QCoeff {
    let mut acc = zero;
    for (g, a) in row {
        if let Some(b) = col.get(g) {
            acc = acc.add(&a.mul(b));
        }
    }
    acc
}
