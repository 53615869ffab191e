//! Generating morphisms and their local matrices in tensor-product
//! coordinates: `B_s ⊗ Q ≅ Q_e ⊕ Q_s` via `f ⊗ g ↦ (fg, f·s(g))`, bit 0 for
//! the `Q_e` component. Entries are scalars in the region left of the
//! generator; embedding at a prefix with endpoint `y` twists them by `y`.

use crate::coxeter::{Element, GroupBall};
use crate::error::{Error, Result};
use crate::polyring::{LinearForm, Poly, QCoeff};
use crate::scalars::CycInt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    /// A polynomial box in the region at the site.
    Poly(Poly),
    StartDot(u8),
    EndDot(u8),
    Merge(u8),
    Split(u8),
    /// The `2m`-valent vertex from the alternating word starting with `s`
    /// to the one starting with `t`.
    Braid(u8, u8),
}

impl Gen {
    /// Letters consumed at the site.
    pub fn input(&self, ball: &GroupBall) -> Result<Vec<u8>> {
        Ok(match *self {
            Gen::Poly(_) | Gen::StartDot(_) => vec![],
            Gen::EndDot(s) | Gen::Split(s) => vec![s],
            Gen::Merge(s) => vec![s, s],
            Gen::Braid(s, t) => alternating(s, t, braid_order(ball, s, t)?),
        })
    }

    /// Letters produced at the site.
    pub fn output(&self, ball: &GroupBall) -> Result<Vec<u8>> {
        Ok(match *self {
            Gen::Poly(_) | Gen::EndDot(_) => vec![],
            Gen::StartDot(s) | Gen::Merge(s) => vec![s],
            Gen::Split(s) => vec![s, s],
            Gen::Braid(s, t) => alternating(t, s, braid_order(ball, s, t)?),
        })
    }

    /// The vertical reflection.
    pub fn flip(&self) -> Gen {
        match self {
            Gen::Poly(f) => Gen::Poly(f.clone()),
            Gen::StartDot(s) => Gen::EndDot(*s),
            Gen::EndDot(s) => Gen::StartDot(*s),
            Gen::Merge(s) => Gen::Split(*s),
            Gen::Split(s) => Gen::Merge(*s),
            Gen::Braid(s, t) => Gen::Braid(*t, *s),
        }
    }

    /// Dots have degree 1, trivalent vertices -1, braids 0, roots 2.
    pub fn degree(&self) -> i32 {
        match self {
            Gen::Poly(f) => f.degree().map_or(0, |d| d as i32),
            Gen::StartDot(_) | Gen::EndDot(_) => 1,
            Gen::Merge(_) | Gen::Split(_) => -1,
            Gen::Braid(..) => 0,
        }
    }
}

/// A generator placed at a strand (or region, for polynomials) index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Op {
    pub gen: Gen,
    pub site: usize,
}

impl Op {
    pub fn new(gen: Gen, site: usize) -> Self {
        Op { gen, site }
    }

    pub fn flip(&self) -> Op {
        Op { gen: self.gen.flip(), site: self.site }
    }
}

/// Reverses a composite and flips each factor.
pub fn flip_program(ops: &[Op]) -> Vec<Op> {
    ops.iter().rev().map(Op::flip).collect()
}

pub(crate) fn alternating(s: u8, t: u8, m: u32) -> Vec<u8> {
    (0..m).map(|i| if i % 2 == 0 { s } else { t }).collect()
}

fn braid_order(ball: &GroupBall, s: u8, t: u8) -> Result<u32> {
    match ball.matrix().m(s as usize, t as usize) {
        Some(m) if m >= 2 => Ok(m),
        _ => Err(Error::Internal(format!("no braid relation between s{} and s{}", s + 1, t + 1))),
    }
}

/// One nonzero entry: output local bits, input local bits, coefficient in `Q`.
#[derive(Clone, Debug)]
pub(crate) struct LocalEntry {
    pub out: Vec<bool>,
    pub inp: Vec<bool>,
    pub coeff: QCoeff,
}

fn bits(s: &str) -> Vec<bool> {
    s.bytes().map(|b| b == b'1').collect()
}

fn entry(out: &str, inp: &str, coeff: QCoeff) -> LocalEntry {
    LocalEntry { out: bits(out), inp: bits(inp), coeff }
}

/// The matrix of a generator at the identity prefix.
pub(crate) fn local_matrix(ball: &GroupBall, gen: &Gen) -> Result<Vec<LocalEntry>> {
    let (n, r) = (ball.ring_n(), ball.rank());
    let one = QCoeff::one(n, r);
    let neg = |q: &QCoeff| q.neg();
    Ok(match gen {
        Gen::Poly(f) => vec![entry("", "", QCoeff::from_poly(f.clone()))],
        Gen::StartDot(s) => vec![entry("0", "", QCoeff::linear(&LinearForm::simple(ball, *s as usize)))],
        Gen::EndDot(_) => vec![entry("", "0", one)],
        Gen::Merge(s) => {
            let inv = QCoeff::inv_linear(&LinearForm::simple(ball, *s as usize))?;
            vec![
                entry("0", "00", inv.clone()),
                entry("0", "11", neg(&inv)),
                entry("1", "01", inv.clone()),
                entry("1", "10", neg(&inv)),
            ]
        }
        Gen::Split(_) => vec![
            entry("00", "0", one.clone()),
            entry("11", "0", one.clone()),
            entry("01", "1", one.clone()),
            entry("10", "1", one),
        ],
        Gen::Braid(s, t) => match braid_order(ball, *s, *t)? {
            2 => ["00", "01", "10", "11"]
                .iter()
                .map(|b| {
                    let swapped: String = b.chars().rev().collect();
                    entry(&swapped, b, one.clone())
                })
                .collect(),
            3 => braid3(ball, *s as usize, *t as usize)?,
            m => return Err(Error::UnsupportedBraid(m)),
        },
    })
}

/// The degree-0 map `sts → tst` with top coefficient 1 that kills the
/// lower summand `B_s ⊂ B_s B_t B_s`, i.e. composes to 0 with
/// `(id ⊗ startdot_t ⊗ id) ∘ split_s`. On each endpoint block the rows
/// are `(A, B)` with `A·α_t + B·s(α_t) = 0` and `A + B = 1`.
fn braid3(ball: &GroupBall, s: usize, t: usize) -> Result<Vec<LocalEntry>> {
    let (n, r) = (ball.ring_n(), ball.rank());
    let sx: Element = ball.from_word(&[s as u8])?;
    let j1 = LinearForm::simple(ball, t);
    let j2 = LinearForm::root_image(ball, sx, t);
    let diff: Vec<CycInt> = j2.coeffs().iter().zip(j1.coeffs()).map(|(a, b)| a - b).collect();
    let inv = QCoeff::inv_linear(&LinearForm::new(diff))?;
    let a = QCoeff::linear(&j2).mul(&inv);
    let b = QCoeff::linear(&j1).mul(&inv).neg();
    let one = QCoeff::one(n, r);
    Ok(vec![
        entry("000", "000", a.clone()),
        entry("000", "101", b.clone()),
        entry("101", "000", a.clone()),
        entry("101", "101", b.clone()),
        entry("010", "001", a),
        entry("010", "100", b),
        entry("100", "010", one.clone()),
        entry("001", "010", one.clone()),
        entry("011", "110", one.clone()),
        entry("110", "011", one.clone()),
        entry("111", "111", one),
    ])
}
