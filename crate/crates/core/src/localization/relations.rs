//! Exact matrix checks of the one-color and two-color relations, embedded
//! after every prefix word up to a given length and before an optional
//! one-letter suffix.

use serde::Serialize;

use crate::error::Result;
use crate::polyring::{demazure, w_action, Poly as Polynomial};

use super::generators::alternating;
use super::{Gen, Localization, Op, StdMatrix};

#[derive(Clone, Debug, Default, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn words_up_to(rank: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..rank {
                let mut v: Vec<u8> = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn ops(list: &[(Gen, usize)]) -> Vec<Op> {
    list.iter().map(|(g, s)| Op::new(g.clone(), *s)).collect()
}

impl<'a> Localization<'a> {
    fn check_eq(&self, report: &mut RelationReport, name: &str, word: &[u8], lhs: &[Op], rhs: &[StdMatrix]) -> Result<()> {
        report.checked += 1;
        let l = self.matrix(lhs, word)?;
        let mut sum = match rhs.first() {
            Some(m) => m.clone(),
            None => {
                if !l.is_zero() {
                    report.failures.push(format!("{name} on {}", crate::coxeter::format_word(word)));
                }
                return Ok(());
            }
        };
        for m in &rhs[1..] {
            sum = sum.add(m);
        }
        if !l.same_as(&sum) {
            report.failures.push(format!("{name} on {}", crate::coxeter::format_word(word)));
        }
        Ok(())
    }

    /// Checks the relations for every generator and every supported pair.
    pub fn relation_oracle(&self, max_prefix: usize) -> Result<RelationReport> {
        let ball = self.ball;
        let rank = ball.rank() as u8;
        let (n, r) = (ball.ring_n(), ball.rank());
        let mut rep = RelationReport::default();
        let suffixes: Vec<Vec<u8>> = std::iter::once(vec![]).chain((0..rank).map(|u| vec![u])).collect();
        for p in words_up_to(rank, max_prefix) {
            let at = p.len();
            for q in &suffixes {
                let with = |mid: &[u8]| -> Vec<u8> { [p.as_slice(), mid, q.as_slice()].concat() };
                for s in 0..rank {
                    let ws = with(&[s]);
                    let id = self.identity(&ws)?;
                    use Gen::*;
                    self.check_eq(&mut rep, "unit (left dot on split)", &ws, &ops(&[(Split(s), at), (EndDot(s), at)]), std::slice::from_ref(&id))?;
                    self.check_eq(&mut rep, "unit (right dot on split)", &ws, &ops(&[(Split(s), at), (EndDot(s), at + 1)]), std::slice::from_ref(&id))?;
                    self.check_eq(&mut rep, "unit (left dot on merge)", &ws, &ops(&[(StartDot(s), at), (Merge(s), at)]), std::slice::from_ref(&id))?;
                    self.check_eq(&mut rep, "unit (right dot on merge)", &ws, &ops(&[(StartDot(s), at + 1), (Merge(s), at)]), std::slice::from_ref(&id))?;
                    let split_assoc = self.matrix(&ops(&[(Split(s), at), (Split(s), at + 1)]), &ws)?;
                    self.check_eq(&mut rep, "split associativity", &ws, &ops(&[(Split(s), at), (Split(s), at)]), &[split_assoc])?;
                    let www = with(&[s, s, s]);
                    let merge_assoc = self.matrix(&ops(&[(Merge(s), at + 1), (Merge(s), at)]), &www)?;
                    self.check_eq(&mut rep, "merge associativity", &www, &ops(&[(Merge(s), at), (Merge(s), at)]), &[merge_assoc])?;
                    self.check_eq(&mut rep, "needle", &ws, &ops(&[(Split(s), at), (Merge(s), at)]), &[])?;
                    let w0 = with(&[]);
                    let alpha = Polynomial::var(n, r, s as usize);
                    let barbell = self.matrix(&ops(&[(Poly(alpha), at)]), &w0)?;
                    self.check_eq(&mut rep, "barbell", &w0, &ops(&[(StartDot(s), at), (EndDot(s), at)]), &[barbell])?;
                    let zigzag = ops(&[(StartDot(s), at + 1), (Split(s), at + 1), (Merge(s), at), (EndDot(s), at)]);
                    self.check_eq(&mut rep, "zigzag", &ws, &zigzag, std::slice::from_ref(&id))?;
                    let sx = ball.from_word(&[s])?;
                    for v in 0..r {
                        let f = Polynomial::var(n, r, v);
                        let sf = w_action(ball, sx, &f);
                        let df = demazure(ball, s as usize, &f)?;
                        let left = self.matrix(&ops(&[(Poly(sf), at)]), &ws)?;
                        let broken = self.matrix(&ops(&[(EndDot(s), at), (Poly(df), at), (StartDot(s), at)]), &ws)?;
                        self.check_eq(&mut rep, "polynomial forcing", &ws, &ops(&[(Poly(f), at + 1)]), &[left, broken])?;
                    }
                    for t in 0..rank {
                        if t != s {
                            self.two_color(&mut rep, &p, q, s, t)?;
                        }
                    }
                }
            }
        }
        Ok(rep)
    }

    fn two_color(&self, rep: &mut RelationReport, p: &[u8], q: &[u8], s: u8, t: u8) -> Result<()> {
        use Gen::*;
        let Some(m) = self.ball.matrix().m(s as usize, t as usize) else { return Ok(()) };
        if m > 3 {
            return Ok(());
        }
        let at = p.len();
        let mu = m as usize;
        let with = |mid: &[u8]| -> Vec<u8> { [p, mid, q].concat() };
        let src = with(&alternating(s, t, m));
        let last = alternating(t, s, m)[mu - 1];
        let rhs = self.matrix(&ops(&[(Split(s), at), (Braid(s, t), at + 1), (Braid(s, t), at)]), &src)?;
        self.check_eq(rep, "two-color associativity", &src, &ops(&[(Braid(s, t), at), (Split(last), at + mu - 1)]), &[rhs])?;
        let lower = ops(&[(Split(s), at), (StartDot(t), at + 1), (Braid(s, t), at)]);
        if m == 3 {
            self.check_eq(rep, "braid kills the lower summand", &with(&[s]), &lower, &[])?;
        }
        let back = self.matrix(&ops(&[(Braid(s, t), at), (Braid(t, s), at)]), &src)?;
        if m == 2 {
            self.check_eq(rep, "crossing squared", &src, &ops(&[(Braid(s, t), at), (Braid(t, s), at)]), &[self.identity(&src)?])?;
            let wt = with(&[t]);
            let slid = self.matrix(&ops(&[(StartDot(s), at + 1)]), &wt)?;
            self.check_eq(rep, "dot through crossing", &wt, &ops(&[(StartDot(s), at), (Braid(s, t), at)]), &[slid])?;
        } else {
            rep.checked += 1;
            let top = vec![true; src.len()];
            let ok = self.summand_endpoint(&src, &top)?.is_none()
                || back.entry_by_bits(&top, &top).is_some_and(|c| *c == self.one());
            if !ok {
                rep.failures.push(format!("braid round trip top coefficient on {}", crate::coxeter::format_word(&src)));
            }
            // A dot on the braid expands into the two Jones-Wenzl terms.
            let wts = with(&[t, s]);
            let dotted = self.matrix(&ops(&[(StartDot(s), at), (Braid(s, t), at)]), &wts)?;
            let a = self.matrix(&ops(&[(StartDot(t), at + 2)]), &wts)?;
            let c = self.matrix(&ops(&[(EndDot(s), at + 1), (Split(t), at), (StartDot(s), at + 1)]), &wts)?;
            rep.checked += 1;
            if !dotted.same_as(&a.add(&c)) {
                rep.failures.push(format!("dotted braid on {}", crate::coxeter::format_word(&wts)));
            }
        }
        Ok(())
    }
}
