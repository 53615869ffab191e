//! Light leaves as programs of generators. Strands are processed left to
//! right while the processed part stays a reduced expression of the current
//! stroll element: U1 keeps the strand, U0 caps it with a dot, D0 merges it
//! into a matching last strand and D1 caps it against one. Rex moves follow
//! a shortest path in the rex graph, ties broken by site order.

use std::collections::{HashMap, VecDeque};

use crate::coxeter::GroupBall;
use crate::error::{Error, Result};
use crate::leaves::{Deco, DecoratedSubexpr};

use super::generators::{alternating, flip_program, Gen, Op};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidMove {
    pub site: usize,
    pub s: u8,
    pub t: u8,
}

impl BraidMove {
    pub fn op(&self) -> Op {
        Op::new(Gen::Braid(self.s, self.t), self.site)
    }
}

fn braid_neighbours(ball: &GroupBall, w: &[u8]) -> Vec<(BraidMove, Vec<u8>)> {
    let mut out = Vec::new();
    for j in 0..w.len().saturating_sub(1) {
        let (s, t) = (w[j], w[j + 1]);
        if s == t {
            continue;
        }
        let Some(m) = ball.matrix().m(s as usize, t as usize) else { continue };
        let m = m as usize;
        if j + m > w.len() || w[j..j + m] != alternating(s, t, m as u32)[..] {
            continue;
        }
        let mut next = w.to_vec();
        next[j..j + m].copy_from_slice(&alternating(t, s, m as u32));
        out.push((BraidMove { site: j, s, t }, next));
    }
    out
}

/// A shortest sequence of braid moves from `start` to a reduced expression
/// satisfying `goal`.
pub fn rex_path(ball: &GroupBall, start: &[u8], goal: impl Fn(&[u8]) -> bool) -> Result<Vec<BraidMove>> {
    let mut parent: HashMap<Vec<u8>, Option<(Vec<u8>, BraidMove)>> = HashMap::new();
    parent.insert(start.to_vec(), None);
    let mut queue = VecDeque::from([start.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if goal(&w) {
            let mut path = Vec::new();
            let mut cur = w;
            while let Some(Some((prev, mv))) = parent.get(&cur).cloned() {
                path.push(mv);
                cur = prev;
            }
            path.reverse();
            return Ok(path);
        }
        for (mv, next) in braid_neighbours(ball, &w) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((w.clone(), mv)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::Internal(format!("no rex of {} reaches the requested form", crate::coxeter::format_word(start))))
}

/// The light leaf `N_word → N_target` of an antispherical subexpression,
/// where `target` is the ShortLex reduced word of the endpoint.
#[derive(Clone, Debug)]
pub struct LightLeaf {
    pub word: Vec<u8>,
    pub subexpr: DecoratedSubexpr,
    pub target: Vec<u8>,
    pub ops: Vec<Op>,
}

impl LightLeaf {
    pub fn build(ball: &GroupBall, word: &[u8], subexpr: DecoratedSubexpr) -> Result<Self> {
        let mut ops = Vec::new();
        let mut cur: Vec<u8> = Vec::new();
        for (&s, deco) in word.iter().zip(&subexpr.decorations) {
            let pos = cur.len();
            match deco {
                Deco::U1 => cur.push(s),
                Deco::U0 => ops.push(Op::new(Gen::EndDot(s), pos)),
                Deco::D0 | Deco::D1 => {
                    for mv in rex_path(ball, &cur, |w| w.last() == Some(&s))? {
                        cur = apply_move(ball, &cur, &mv);
                        ops.push(mv.op());
                    }
                    ops.push(Op::new(Gen::Merge(s), pos - 1));
                    if *deco == Deco::D1 {
                        ops.push(Op::new(Gen::EndDot(s), pos - 1));
                        cur.pop();
                    }
                }
            }
        }
        let target = ball.word(subexpr.endpoint()).to_vec();
        for mv in rex_path(ball, &cur, |w| w == target.as_slice())? {
            cur = apply_move(ball, &cur, &mv);
            ops.push(mv.op());
        }
        debug_assert_eq!(cur, target);
        Ok(LightLeaf { word: word.to_vec(), subexpr, target, ops })
    }

    /// `LL-bar`, the flipped program `N_target → N_word`.
    pub fn flipped(&self) -> Vec<Op> {
        flip_program(&self.ops)
    }

    /// Sum of generator degrees; equals the defect.
    pub fn degree(&self) -> i32 {
        self.ops.iter().map(|o| o.gen.degree()).sum()
    }

    pub fn bits(&self) -> &[bool] {
        &self.subexpr.bits
    }
}

fn apply_move(ball: &GroupBall, w: &[u8], mv: &BraidMove) -> Vec<u8> {
    let m = ball.matrix().m(mv.s as usize, mv.t as usize).unwrap();
    let mut next = w.to_vec();
    next[mv.site..mv.site + m as usize].copy_from_slice(&alternating(mv.t, mv.s, m));
    next
}
