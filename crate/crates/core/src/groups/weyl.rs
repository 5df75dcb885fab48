//! The 27 lines of a blown-up plane as labels `a_i, b_i, c_ij`, their
//! incidences, and W(E6) acting on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Perm, PermGroup};

/// Divisor class of a line on the blow-up of six points `z_0..z_5`:
/// `A(i)` the exceptional curve, `B(i)` the conic through the other five,
/// `C(i, j)` (with `i < j`) the line through `z_i, z_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LineLabel {
    A(u8),
    B(u8),
    C(u8, u8),
}

impl LineLabel {
    /// Index in `0..27`: the `a`s, then the `b`s, then the `c`s in
    /// lexicographic order of `(i, j)`.
    pub fn index(self) -> usize {
        match self {
            LineLabel::A(i) => i as usize,
            LineLabel::B(i) => 6 + i as usize,
            LineLabel::C(i, j) => {
                let (i, j) = (i as usize, j as usize);
                12 + (0..i).map(|k| 5 - k).sum::<usize>() + (j - i - 1)
            }
        }
    }

    pub fn from_index(k: usize) -> LineLabel {
        all_labels()[k]
    }

    fn c(i: u8, j: u8) -> LineLabel {
        LineLabel::C(i.min(j), i.max(j))
    }

    /// Intersection number 1 (the lines meet).
    pub fn meets(self, other: LineLabel) -> bool {
        use LineLabel::*;
        match (self, other) {
            (A(i), B(j)) | (B(j), A(i)) => i != j,
            (A(i), C(j, k)) | (C(j, k), A(i)) | (B(i), C(j, k)) | (C(j, k), B(i)) => i == j || i == k,
            (C(i, j), C(k, l)) => i != k && i != l && j != k && j != l,
            _ => false,
        }
    }

    /// Image under the permutation `sigma` of the six points.
    fn permute(self, sigma: &[u8; 6]) -> LineLabel {
        match self {
            LineLabel::A(i) => LineLabel::A(sigma[i as usize]),
            LineLabel::B(i) => LineLabel::B(sigma[i as usize]),
            LineLabel::C(i, j) => LineLabel::c(sigma[i as usize], sigma[j as usize]),
        }
    }

    /// Image under the quadratic transformation based at `z_0, z_1, z_2`
    /// (reflection in the root `H - E_0 - E_1 - E_2`).
    fn cremona(self) -> LineLabel {
        let other = |x: u8, y: u8, set: [u8; 3]| -> (u8, u8) {
            let mut r = set.iter().copied().filter(|&v| v != x && v != y);
            let a = r.next().expect("three elements");
            (a, a)
        };
        let low = [0u8, 1, 2];
        let high = [3u8, 4, 5];
        match self {
            LineLabel::A(i) if i < 3 => {
                let rest: Vec<u8> = low.iter().copied().filter(|&v| v != i).collect();
                LineLabel::c(rest[0], rest[1])
            }
            LineLabel::B(i) if i >= 3 => {
                let rest: Vec<u8> = high.iter().copied().filter(|&v| v != i).collect();
                LineLabel::c(rest[0], rest[1])
            }
            LineLabel::C(i, j) if j < 3 => LineLabel::A(other(i, j, low).0),
            LineLabel::C(i, j) if i >= 3 => LineLabel::B(other(i, j, high).0),
            l => l,
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineLabel::A(i) => write!(f, "a{}", i + 1),
            LineLabel::B(i) => write!(f, "b{}", i + 1),
            LineLabel::C(i, j) => write!(f, "c{}{}", i + 1, j + 1),
        }
    }
}

impl Serialize for LineLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LineLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        all_labels()
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown line label `{s}`")))
    }
}

/// The 27 labels in index order.
pub fn all_labels() -> Vec<LineLabel> {
    let mut v: Vec<LineLabel> = (0..6).map(LineLabel::A).collect();
    v.extend((0..6).map(LineLabel::B));
    for i in 0..6 {
        for j in i + 1..6 {
            v.push(LineLabel::C(i, j));
        }
    }
    v
}

/// Incidence matrix of the 27 labels.
pub fn blowup_adjacency() -> Vec<Vec<bool>> {
    let l = all_labels();
    l.iter().map(|a| l.iter().map(|b| a.meets(*b)).collect()).collect()
}

fn label_perm(f: impl Fn(LineLabel) -> LineLabel) -> Perm {
    Perm::new(all_labels().into_iter().map(|l| f(l).index() as u32).collect()).expect("label map is a bijection")
}

/// Generators of W(E6) on the 27 labels: a transposition and a 6-cycle of
/// the points, and one Cremona involution.
pub fn we6_generators() -> Vec<Perm> {
    let swap = [1u8, 0, 2, 3, 4, 5];
    let cycle = [1u8, 2, 3, 4, 5, 0];
    vec![label_perm(|l| l.permute(&swap)), label_perm(|l| l.permute(&cycle)), label_perm(LineLabel::cremona)]
}

pub fn we6() -> PermGroup {
    PermGroup::new(27, we6_generators()).expect("degree 27")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{composition_factors, FactorLabel};

    #[test]
    fn labels_index_roundtrip() {
        for (k, l) in all_labels().into_iter().enumerate() {
            assert_eq!(l.index(), k);
            assert_eq!(LineLabel::from_index(k), l);
        }
        assert_eq!(LineLabel::C(0, 1).to_string(), "c12");
        let s = serde_json::to_string(&LineLabel::B(3)).unwrap();
        assert_eq!(serde_json::from_str::<LineLabel>(&s).unwrap(), LineLabel::B(3));
    }

    #[test]
    fn blowup_graph_is_ten_regular() {
        let adj = blowup_adjacency();
        for (i, row) in adj.iter().enumerate() {
            assert!(!row[i]);
            assert_eq!(row.iter().filter(|&&b| b).count(), 10);
        }
    }

    #[test]
    fn generators_preserve_incidence() {
        let adj = blowup_adjacency();
        for g in we6_generators() {
            for i in 0..27 {
                for j in 0..27 {
                    assert_eq!(adj[i][j], adj[g.apply(i)][g.apply(j)]);
                }
            }
        }
        let cr = &we6_generators()[2];
        assert!(cr.then(cr).is_identity());
        assert_eq!(cr.apply(LineLabel::A(0).index()), LineLabel::C(1, 2).index());
        assert_eq!(cr.apply(LineLabel::C(3, 4).index()), LineLabel::B(5).index());
    }

    #[test]
    fn we6_order_and_factors() {
        let g = we6();
        assert_eq!(g.order(), 51840);
        let d = g.derived_subgroup();
        assert_eq!(d.order(), 25920);
        assert_eq!(composition_factors(&g).unwrap(), vec![FactorLabel::Cyclic(2), FactorLabel::WE6Plus]);
    }
}
