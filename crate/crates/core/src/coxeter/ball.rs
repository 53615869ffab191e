use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalars::{ring, CycInt};

use super::{format_word, CoxeterMatrix, Element, ParabolicSubset};

/// Default bound on the number of elements a ball may hold.
pub const DEFAULT_ELEMENT_BUDGET: usize = 2_000_000;
const LETTERS_PER_ELEMENT: usize = 64;

const NONE: u32 = u32::MAX;

/// Outcome of the root test for `xs` with `x ∈ ^IW`.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// `xs ∈ ^IW`.
    InQuotient,
    /// `x(α_s) = α_r` with `r ∈ I`, hence `xs = rx ∉ ^IW`.
    ExitsVia(usize),
}

/// All elements of length at most `cap`, identified by their exact matrices in
/// the reflection representation with basis `Δ = {α_s}`.
///
/// Matrices are stored flat: column `t` (the coordinates of `x(α_t)`) holds
/// `rank` coordinates, each `deg` integers (a canonical element of `K`).
#[derive(Debug)]
pub struct GroupBall {
    matrix: CoxeterMatrix,
    cap: usize,
    rank: usize,
    ring_n: u32,
    deg: usize,
    cartan: Vec<CycInt>,
    cartan_int: Vec<Option<i64>>,
    mats: Vec<i64>,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    level_start: Vec<usize>,
    right: Vec<u32>,
    left: Vec<u32>,
    index: HashMap<Vec<i64>, u32>,
}

impl GroupBall {
    pub fn new(matrix: CoxeterMatrix, cap: usize) -> Result<Self> {
        Self::with_budget(matrix, cap, DEFAULT_ELEMENT_BUDGET)
    }

    /// Breadth-first enumeration by length. Lengths are Cayley-graph distances
    /// (every product `xs` is looked up), independent of the root-sign test.
    pub fn with_budget(matrix: CoxeterMatrix, cap: usize, budget: usize) -> Result<Self> {
        let rank = matrix.rank();
        let ring_n = matrix.ring_n();
        let deg = ring(ring_n).degree();
        let mut cartan = Vec::with_capacity(rank * rank);
        for s in 0..rank {
            for t in 0..rank {
                cartan.push(matrix.cartan(s, t));
            }
        }
        let cartan_int = cartan.iter().map(|c| c.as_integer()).collect();
        let mut ball = GroupBall {
            matrix,
            cap,
            rank,
            ring_n,
            deg,
            cartan,
            cartan_int,
            mats: Vec::new(),
            words: Vec::new(),
            lengths: Vec::new(),
            level_start: vec![0],
            right: Vec::new(),
            left: Vec::new(),
            index: HashMap::new(),
        };
        let stride = rank * rank * deg;
        let mut id_mat = vec![0i64; stride];
        for t in 0..rank {
            id_mat[(t * rank + t) * deg] = 1;
        }
        ball.push(id_mat, Vec::new(), 0);
        let mut level = 0usize;
        let mut letters = 0usize;
        loop {
            let (lo, hi) = (ball.level_start[level], ball.words.len());
            if lo == hi {
                break;
            }
            for x in lo..hi {
                for s in 0..rank {
                    let m = ball.right_mul_matrix(x, s);
                    match ball.index.get(&m) {
                        Some(&y) => ball.right[x * rank + s] = y,
                        None if level < cap => {
                            if ball.words.len() >= budget {
                                return Err(Error::Resource(format!(
                                    "ball exceeds the element budget of {}",
                                    budget
                                )));
                            }
                            // Stored words grow quadratically in thin infinite balls.
                            letters += level + 1;
                            if letters > budget.saturating_mul(LETTERS_PER_ELEMENT) {
                                return Err(Error::Resource(format!(
                                    "ball words exceed {} letters",
                                    budget.saturating_mul(LETTERS_PER_ELEMENT)
                                )));
                            }
                            let mut w = ball.words[x].clone();
                            w.push(s as u8);
                            let y = ball.push(m, w, level as u32 + 1);
                            ball.right[x * rank + s] = y;
                        }
                        None => {}
                    }
                }
            }
            level += 1;
            ball.level_start.push(hi);
        }
        ball.level_start.pop();
        for x in 0..ball.words.len() {
            for s in 0..rank {
                let m = ball.left_mul_matrix(x, s);
                if let Some(&y) = ball.index.get(&m) {
                    ball.left[x * rank + s] = y;
                }
            }
        }
        Ok(ball)
    }

    fn push(&mut self, mat: Vec<i64>, word: Vec<u8>, len: u32) -> u32 {
        let id = self.words.len() as u32;
        self.mats.extend_from_slice(&mat);
        self.index.insert(mat, id);
        self.words.push(word);
        self.lengths.push(len);
        self.right.extend(std::iter::repeat_n(NONE, self.rank));
        self.left.extend(std::iter::repeat_n(NONE, self.rank));
        id
    }

    fn mat(&self, x: usize) -> &[i64] {
        let stride = self.rank * self.rank * self.deg;
        &self.mats[x * stride..(x + 1) * stride]
    }

    /// `dst -= a * src` for canonical coefficient slices.
    fn sub_scaled(&self, dst: &mut [i64], a_idx: usize, src: &[i64]) {
        match self.cartan_int[a_idx] {
            Some(0) => {}
            Some(k) => {
                for (d, &v) in dst.iter_mut().zip(src) {
                    *d = d
                        .checked_sub(k.checked_mul(v).expect("matrix entry overflow"))
                        .expect("matrix entry overflow");
                }
            }
            None => {
                for (dc, sc) in dst.chunks_mut(self.deg).zip(src.chunks(self.deg)) {
                    let prod = &CycInt::from_canonical(self.ring_n, sc.to_vec()) * &self.cartan[a_idx];
                    for (d, &v) in dc.iter_mut().zip(prod.coeffs()) {
                        *d = d.checked_sub(v).expect("matrix entry overflow");
                    }
                }
            }
        }
    }

    /// `(xs)(α_t) = x(α_t) - a_{st} x(α_s)`.
    fn right_mul_matrix(&self, x: usize, s: usize) -> Vec<i64> {
        let (r, d) = (self.rank, self.deg);
        let src = self.mat(x);
        let mut out = src.to_vec();
        let col_s = &src[s * r * d..(s + 1) * r * d];
        for t in 0..r {
            let mut col_t = out[t * r * d..(t + 1) * r * d].to_vec();
            self.sub_scaled(&mut col_t, s * r + t, col_s);
            out[t * r * d..(t + 1) * r * d].copy_from_slice(&col_t);
        }
        out
    }

    /// `s(v) = v - (Σ_i a_{si} v_i) α_s`, applied to every column.
    fn left_mul_matrix(&self, x: usize, s: usize) -> Vec<i64> {
        let (r, d) = (self.rank, self.deg);
        let src = self.mat(x);
        let mut out = src.to_vec();
        for t in 0..r {
            let col = &src[t * r * d..(t + 1) * r * d];
            let mut entry = col[s * d..(s + 1) * d].to_vec();
            for i in 0..r {
                self.sub_scaled(&mut entry, s * r + i, &col[i * d..(i + 1) * d]);
            }
            out[(t * r + s) * d..(t * r + s + 1) * d].copy_from_slice(&entry);
        }
        out
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Ring parameter `N` of the scalars `K`.
    pub fn ring_n(&self) -> u32 {
        self.ring_n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Element> + ExactSizeIterator {
        (0..self.words.len() as u32).map(Element)
    }

    /// Elements of length exactly `l`.
    pub fn elements_of_length(&self, l: usize) -> impl Iterator<Item = Element> {
        let lo = self.level_start.get(l).copied().unwrap_or(self.len());
        let hi = self.level_start.get(l + 1).copied().unwrap_or(self.len());
        (lo as u32..hi as u32).map(Element)
    }

    /// Largest length present.
    pub fn max_length(&self) -> usize {
        self.level_start.len() - 1
    }

    pub fn length(&self, x: Element) -> usize {
        self.lengths[x.index()] as usize
    }

    /// The ShortLex-least reduced word (0-based generator indices).
    pub fn word(&self, x: Element) -> &[u8] {
        &self.words[x.index()]
    }

    pub fn format(&self, x: Element) -> String {
        format_word(self.word(x))
    }

    /// `xs`, or `None` when it lies beyond the cap.
    pub fn right_mul(&self, x: Element, s: usize) -> Option<Element> {
        let y = self.right[x.index() * self.rank + s];
        (y != NONE).then_some(Element(y))
    }

    /// `sx`, or `None` when it lies beyond the cap.
    pub fn left_mul(&self, s: usize, x: Element) -> Option<Element> {
        let y = self.left[x.index() * self.rank + s];
        (y != NONE).then_some(Element(y))
    }

    pub fn right_mul_checked(&self, x: Element, s: usize) -> Result<Element> {
        self.right_mul(x, s).ok_or(Error::CapExceeded { cap: self.cap })
    }

    pub fn left_mul_checked(&self, s: usize, x: Element) -> Result<Element> {
        self.left_mul(s, x).ok_or(Error::CapExceeded { cap: self.cap })
    }

    /// Evaluates an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[u8]) -> Result<Element> {
        let mut x = Element::IDENTITY;
        for &s in word {
            if s as usize >= self.rank {
                return Err(Error::Parse(format!("generator index {} out of range", s)));
            }
            x = self.right_mul_checked(x, s as usize)?;
        }
        Ok(x)
    }

    pub fn mul(&self, a: Element, b: Element) -> Result<Element> {
        let mut x = a;
        for &s in self.word(b) {
            x = self.right_mul_checked(x, s as usize)?;
        }
        Ok(x)
    }

    pub fn inverse(&self, x: Element) -> Element {
        let mut w = self.word(x).to_vec();
        w.reverse();
        self.from_word(&w).expect("inverse has the same length")
    }

    /// Coordinates of `x(α_s)` in the basis `Δ`.
    pub fn root_image(&self, x: Element, s: usize) -> Vec<CycInt> {
        let (r, d) = (self.rank, self.deg);
        let m = self.mat(x.index());
        (0..r)
            .map(|i| CycInt::from_canonical(self.ring_n, m[(s * r + i) * d..(s * r + i + 1) * d].to_vec()))
            .collect()
    }

    fn coord_sign(&self, x: Element, s: usize, i: usize) -> i32 {
        let (r, d) = (self.rank, self.deg);
        let c = &self.mat(x.index())[(s * r + i) * d..(s * r + i + 1) * d];
        if d == 1 {
            c[0].signum() as i32
        } else {
            CycInt::from_canonical(self.ring_n, c.to_vec()).sign()
        }
    }

    /// Sign of every coordinate of `x(α_s)`.
    pub fn root_signs(&self, x: Element, s: usize) -> Vec<i32> {
        (0..self.rank).map(|i| self.coord_sign(x, s, i)).collect()
    }

    /// `l(xs) < l(x)`, decided by `x(α_s)` being a negative root.
    pub fn right_descends(&self, x: Element, s: usize) -> bool {
        (0..self.rank)
            .map(|i| self.coord_sign(x, s, i))
            .find(|&g| g != 0)
            .expect("roots are nonzero")
            < 0
    }

    /// `l(sx) < l(x)`.
    pub fn left_descends(&self, s: usize, x: Element) -> bool {
        self.left_mul(s, x).is_some_and(|y| self.lengths[y.index()] < self.lengths[x.index()])
    }

    pub fn right_descent_set(&self, x: Element) -> ParabolicSubset {
        ParabolicSubset::from_indices((0..self.rank).filter(|&s| self.right_descends(x, s)))
    }

    pub fn left_descent_set(&self, x: Element) -> ParabolicSubset {
        ParabolicSubset::from_indices((0..self.rank).filter(|&s| self.left_descends(s, x)))
    }

    /// Bruhat order: for `sx < x`, `y ≤ x` iff `min(y, sy) ≤ sx`.
    pub fn bruhat_leq(&self, y: Element, x: Element) -> bool {
        let (mut y, mut x) = (y, x);
        loop {
            if self.length(y) > self.length(x) {
                return false;
            }
            if y == Element::IDENTITY {
                return true;
            }
            if self.length(y) == self.length(x) {
                return y == x;
            }
            let s = (0..self.rank).find(|&s| self.left_descends(s, x)).expect("x is not the identity");
            if self.left_descends(s, y) {
                y = self.left_mul(s, y).unwrap();
            }
            x = self.left_mul(s, x).unwrap();
        }
    }

    /// `sx > x` for all `s ∈ I`.
    pub fn is_min_rep(&self, x: Element, i: ParabolicSubset) -> bool {
        i.iter().all(|s| !self.left_descends(s, x))
    }

    pub fn in_parabolic(&self, x: Element, i: ParabolicSubset) -> bool {
        self.word(x).iter().all(|&s| i.contains(s as usize))
    }

    /// Minimal coset representatives `^IW` in the ball, in id order.
    pub fn min_reps(&self, i: ParabolicSubset) -> Vec<Element> {
        self.elements().filter(|&x| self.is_min_rep(x, i)).collect()
    }

    /// `w = u x` with `u ∈ W_I`, `x ∈ ^IW` and `l(w) = l(u) + l(x)`.
    pub fn coset_decompose(&self, w: Element, i: ParabolicSubset) -> (Element, Element) {
        let mut x = w;
        let mut stripped = Vec::new();
        while let Some(s) = i.iter().find(|&s| self.left_descends(s, x)) {
            x = self.left_mul(s, x).unwrap();
            stripped.push(s as u8);
        }
        let u = self.from_word(&stripped).expect("prefix of a reduced word stays in the ball");
        (u, x)
    }

    /// Root test for `xs` given `x ∈ ^IW`; cross-checked against descents.
    pub fn parabolic_test(&self, x: Element, s: usize, i: ParabolicSubset) -> Result<Verdict> {
        if !self.is_min_rep(x, i) {
            return Err(Error::NotMinRep);
        }
        let (r, d) = (self.rank, self.deg);
        let col = &self.mat(x.index())[s * r * d..(s + 1) * r * d];
        let unit = (0..r).find(|&k| {
            (0..r).all(|j| {
                let c = &col[j * d..(j + 1) * d];
                let want = i64::from(j == k);
                c[0] == want && c[1..].iter().all(|&v| v == 0)
            })
        });
        let verdict = match unit {
            Some(k) if i.contains(k) => Verdict::ExitsVia(k),
            _ => Verdict::InQuotient,
        };
        if let Some(xs) = self.right_mul(x, s) {
            let comb = self.is_min_rep(xs, i);
            assert_eq!(
                comb,
                verdict == Verdict::InQuotient,
                "root test disagrees with descents at {} s{}",
                self.format(x),
                s + 1
            );
            if let Verdict::ExitsVia(k) = verdict {
                assert_eq!(self.left_mul(k, x), Some(xs), "xs != rx at {}", self.format(x));
            }
        }
        Ok(verdict)
    }

    /// Elements of `W_I`; fails if `W_I` is not exhausted inside the ball.
    pub fn parabolic_subgroup(&self, i: ParabolicSubset) -> Result<Vec<Element>> {
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut out = vec![Element::IDENTITY];
        let mut k = 0;
        while k < out.len() {
            let x = out[k];
            k += 1;
            for s in i.iter() {
                let y = self.right_mul(x, s).ok_or(Error::NotFinitary)?;
                if !seen[y.index()] {
                    seen[y.index()] = true;
                    out.push(y);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The element of `W_I` for which every `s ∈ I` is a right descent.
    pub fn longest_element(&self, i: ParabolicSubset) -> Result<Element> {
        let group = self.parabolic_subgroup(i)?;
        group
            .into_iter()
            .find(|&x| i.iter().all(|s| self.right_descends(x, s)))
            .ok_or_else(|| Error::Internal("finite parabolic without longest element".into()))
    }
}
