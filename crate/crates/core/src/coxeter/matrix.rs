use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::CycInt;

/// Symmetric Coxeter matrix; `None` encodes `m = ∞`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<Option<u32>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonEntry {
    Finite(u32),
    Symbol(String),
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    rank: usize,
    entries: Vec<Vec<JsonEntry>>,
}

impl CoxeterMatrix {
    /// Builds and validates a matrix from rows.
    pub fn from_rows(rows: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidMatrix("rank must be positive".into()));
        }
        if rank > 64 {
            return Err(Error::InvalidMatrix("rank above 64 is not supported".into()));
        }
        let mut entries = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidMatrix(format!("row {} has length {}", i + 1, row.len())));
            }
            entries.extend_from_slice(row);
        }
        for i in 0..rank {
            for j in 0..rank {
                let e = entries[i * rank + j];
                if e != entries[j * rank + i] {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({}, {})", i + 1, j + 1)));
                }
                match (i == j, e) {
                    (true, Some(1)) => {}
                    (true, _) => {
                        return Err(Error::InvalidMatrix(format!("diagonal entry {} is not 1", i + 1)))
                    }
                    (false, Some(m)) if m < 2 => {
                        return Err(Error::InvalidMatrix(format!("entry ({}, {}) below 2", i + 1, j + 1)))
                    }
                    _ => {}
                }
            }
        }
        Ok(CoxeterMatrix { rank, entries })
    }

    /// A matrix with `m = 2` off the diagonal, then the listed edges set.
    fn from_edges(rank: usize, edges: &[(usize, usize, Option<u32>)]) -> Result<Self> {
        let mut rows = vec![vec![Some(2u32); rank]; rank];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        for &(a, b, m) in edges {
            rows[a][b] = m;
            rows[b][a] = m;
        }
        Self::from_rows(rows)
    }

    fn chain(rank: usize) -> Vec<(usize, usize, Option<u32>)> {
        (1..rank).map(|i| (i - 1, i, Some(3))).collect()
    }

    pub fn type_a(n: usize) -> Result<Self> {
        Self::from_edges(n, &Self::chain(n))
    }

    /// `B_n` with `m(s1, s2) = 4`.
    pub fn type_b(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidMatrix("B n needs n >= 2".into()));
        }
        let mut edges = Self::chain(n);
        edges[0].2 = Some(4);
        Self::from_edges(n, &edges)
    }

    /// `D_n`: a chain `s1 .. s(n-1)` with `s_n` attached to `s(n-2)`.
    pub fn type_d(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidMatrix("D n needs n >= 4".into()));
        }
        let mut edges = Self::chain(n - 1);
        edges.push((n - 3, n - 1, Some(3)));
        Self::from_edges(n, &edges)
    }

    /// `H_3` with `m(s1, s2) = 5`, `m(s2, s3) = 3`.
    pub fn type_h3() -> Self {
        Self::from_edges(3, &[(0, 1, Some(5)), (1, 2, Some(3))]).unwrap()
    }

    /// Dihedral `I_2(m)`; `None` is the infinite dihedral group.
    pub fn dihedral(m: Option<u32>) -> Result<Self> {
        Self::from_edges(2, &[(0, 1, m)])
    }

    /// Affine type `A_n` (rank `n + 1`); `affA 1` has `m = ∞`.
    pub fn affine_a(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::InvalidMatrix("affA n needs n >= 1".into())),
            1 => Self::dihedral(None),
            _ => {
                let mut edges = Self::chain(n + 1);
                edges.push((0, n, Some(3)));
                Self::from_edges(n + 1, &edges)
            }
        }
    }

    /// Parses names such as `A3`, `B 3`, `D4`, `H3`, `I2 5`, `I2(5)`, `affA2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown Coxeter type {:?}", name));
        let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = compact.strip_prefix("affA") {
            return Self::affine_a(num(rest)?);
        }
        if let Some(rest) = compact.strip_prefix("I2") {
            let rest = rest.trim_start_matches('(').trim_end_matches(')');
            if rest == "inf" || rest == "∞" {
                return Self::dihedral(None);
            }
            let m = rest.parse::<u32>().map_err(|_| bad())?;
            return Self::dihedral(Some(m));
        }
        let (head, rest) = compact.split_at(compact.char_indices().nth(1).map_or(compact.len(), |(i, _)| i));
        match head {
            "A" => Self::type_a(num(rest)?),
            "B" => Self::type_b(num(rest)?),
            "D" => Self::type_d(num(rest)?),
            "H" if rest == "3" => Ok(Self::type_h3()),
            _ => Err(bad()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: JsonMatrix = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = parsed
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| match e {
                        JsonEntry::Finite(m) => Ok(Some(m)),
                        JsonEntry::Symbol(s) if s == "inf" => Ok(None),
                        JsonEntry::Symbol(s) => Err(Error::Parse(format!("bad entry {:?}", s))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != parsed.rank {
            return Err(Error::InvalidMatrix(format!("rank {} but {} rows", parsed.rank, rows.len())));
        }
        Self::from_rows(rows)
    }

    /// Canonical JSON `{"rank":..,"entries":[[..]]}` with `"inf"` for `∞`.
    pub fn to_json(&self) -> String {
        let m = JsonMatrix {
            rank: self.rank,
            entries: (0..self.rank)
                .map(|i| {
                    (0..self.rank)
                        .map(|j| match self.m(i, j) {
                            Some(m) => JsonEntry::Finite(m),
                            None => JsonEntry::Symbol("inf".into()),
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string(&m).expect("matrix serializes")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        self.entries[s * self.rank + t]
    }

    /// Smallest `N` such that every pairing `-2cos(π/m)` lies in `Z[2cos(π/N)]`.
    pub fn ring_n(&self) -> u32 {
        self.entries
            .iter()
            .filter_map(|&e| e)
            .filter(|&m| m > 3)
            .fold(1u32, |acc, m| acc.lcm(&m))
    }

    /// Cartan pairing `a_{st} = -2cos(π/m_{st})`, so `s(α_t) = α_t - a_{st} α_s`.
    pub fn cartan(&self, s: usize, t: usize) -> CycInt {
        CycInt::cos_entry(self.ring_n(), self.m(s, t)).expect("ring parameter covers all entries")
    }

    pub fn is_finite_dihedral(&self, s: usize, t: usize) -> bool {
        self.m(s, t).is_some()
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rank {
            let row: Vec<String> = (0..self.rank)
                .map(|j| self.m(i, j).map_or("inf".to_string(), |m| m.to_string()))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
