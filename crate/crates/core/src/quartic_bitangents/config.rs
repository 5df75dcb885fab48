use std::collections::BTreeSet;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm, singular_values};
use crate::scalar::C64;

use super::Bitangent;

/// Relative smallest singular value below which contacts lie on a conic.
const ON_CONIC_TOL: f64 = 1e-7;
/// Relative smallest singular value above which they certainly do not.
const OFF_CONIC_TOL: f64 = 1e-5;
/// Required ratio between the last two singular values for a clean drop.
const GAP: f64 = 1e3;
/// Contacts closer than this count as one (hyperflex).
const HYPERFLEX_TOL: f64 = 1e-6;
/// Triple-table lookups allowed in the Aronhold search.
const ARONHOLD_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Syzygy {
    Syzygetic,
    Asyzygetic,
    /// Neither verdict is numerically clean.
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyzygyReport {
    pub verdict: Syzygy,
    /// `s[4] / s[5]` of the conic evaluation matrix.
    pub gap: f64,
    /// `s[5] / s[0]`.
    pub smallest: f64,
    pub hyperflex: bool,
}

fn conic_row(p: &[C64; 3]) -> [C64; 6] {
    let n = norm(p);
    let x = p.map(|c| c / n);
    [x[0] * x[0], x[0] * x[1], x[0] * x[2], x[1] * x[1], x[1] * x[2], x[2] * x[2]]
}

fn contacts_coincide(b: &Bitangent) -> bool {
    let [p, q] = &b.contacts;
    crate::linalg::projective_distance(p, q) < HYPERFLEX_TOL
}

fn report(rows: &[[C64; 6]], hyperflex: bool) -> SyzygyReport {
    let m = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let mut s = singular_values(&m);
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(6, 0.0);
    let smallest = if s[0] > 0.0 { s[5] / s[0] } else { 0.0 };
    let gap = if s[5] > 0.0 { s[4] / s[5] } else { f64::INFINITY };
    let verdict = if hyperflex {
        Syzygy::Ambiguous
    } else if smallest < ON_CONIC_TOL && gap >= GAP {
        Syzygy::Syzygetic
    } else if smallest > OFF_CONIC_TOL {
        Syzygy::Asyzygetic
    } else {
        Syzygy::Ambiguous
    };
    SyzygyReport { verdict, gap, smallest, hyperflex }
}

/// Whether the `2n` contacts of `set` (n >= 3) lie on a conic, by the rank
/// of the 6-column conic evaluation matrix.
pub fn syzygy_test(set: &[Bitangent]) -> Result<SyzygyReport> {
    if set.len() < 3 {
        return Err(Error::invalid(format!("syzygy test needs at least 3 bitangents, got {}", set.len())));
    }
    let rows: Vec<[C64; 6]> = set.iter().flat_map(|b| b.contacts.iter().map(conic_row)).collect();
    Ok(report(&rows, set.iter().any(contacts_coincide)))
}

/// Count under the two resolutions of ambiguous verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountInterval {
    pub lo: u64,
    pub hi: u64,
}

impl CountInterval {
    fn of(a: u64, b: u64) -> Self {
        CountInterval { lo: a.min(b), hi: a.max(b) }
    }

    pub fn exact(&self) -> Option<u64> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationCounts {
    pub steiner: CountInterval,
    pub aronhold: CountInterval,
    pub syzygetic_triples: CountInterval,
    pub ambiguous_triples: u64,
    pub ambiguous_tetrads: u64,
    /// Hyperflex or ambiguous verdicts present: counts may be off.
    pub flagged: bool,
}

fn triple_index(i: usize, j: usize, k: usize) -> usize {
    (i * 28 + j) * 28 + k
}

struct Tables {
    /// `triples[triple_index(i,j,k)]` for `i < j < k`.
    triples: Vec<Syzygy>,
    /// The 3276 verdicts in lexicographic order.
    triple_list: Vec<Syzygy>,
    /// Tetrads in lexicographic order of sorted index tuples.
    tetrads: Vec<([u8; 4], Syzygy)>,
}

fn tables(all: &[Bitangent]) -> Tables {
    let rows: Vec<[[C64; 6]; 2]> = all.iter().map(|b| b.contacts.each_ref().map(conic_row)).collect();
    let hf: Vec<bool> = all.iter().map(contacts_coincide).collect();
    let mut idx3 = Vec::new();
    let mut idx4 = Vec::new();
    for i in 0..28 {
        for j in i + 1..28 {
            for k in j + 1..28 {
                idx3.push([i, j, k]);
                for l in k + 1..28 {
                    idx4.push([i as u8, j as u8, k as u8, l as u8]);
                }
            }
        }
    }
    let gather = |ix: &[usize]| -> (Vec<[C64; 6]>, bool) {
        (ix.iter().flat_map(|&i| rows[i]).collect(), ix.iter().any(|&i| hf[i]))
    };
    let mut triples = vec![Syzygy::Ambiguous; 28 * 28 * 28];
    let verdicts: Vec<Syzygy> = idx3
        .par_iter()
        .map(|t| {
            let (r, h) = gather(t);
            report(&r, h).verdict
        })
        .collect();
    for (t, v) in idx3.iter().zip(&verdicts) {
        triples[triple_index(t[0], t[1], t[2])] = *v;
    }
    let tetrads = idx4
        .par_iter()
        .map(|t| {
            let (r, h) = gather(&t.map(usize::from));
            (*t, report(&r, h).verdict)
        })
        .collect();
    Tables { triples, triple_list: verdicts, tetrads }
}

fn resolve(v: Syzygy, ambiguous_as_syzygetic: bool) -> bool {
    match v {
        Syzygy::Syzygetic => true,
        Syzygy::Asyzygetic => false,
        Syzygy::Ambiguous => ambiguous_as_syzygetic,
    }
}

/// Steiner complexes: the pair `{a, b}` together with every disjoint pair
/// `{c, d}` making a syzygetic tetrad; kept when it has exactly 6 pairs.
fn steiner_count(tetrads: &[([u8; 4], Syzygy)], policy: bool) -> u64 {
    let mut partners: Vec<Vec<(u8, u8)>> = vec![Vec::new(); 28 * 28];
    for (t, v) in tetrads {
        if !resolve(*v, policy) {
            continue;
        }
        let [a, b, c, d] = *t;
        for ((p, q), (r, s)) in [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))] {
            partners[p as usize * 28 + q as usize].push((r, s));
            partners[r as usize * 28 + s as usize].push((p, q));
        }
    }
    let mut complexes: BTreeSet<Vec<(u8, u8)>> = BTreeSet::new();
    for a in 0..28u8 {
        for b in a + 1..28 {
            let mut cx = partners[a as usize * 28 + b as usize].clone();
            cx.push((a, b));
            cx.sort();
            cx.dedup();
            if cx.len() == 6 {
                complexes.insert(cx);
            }
        }
    }
    complexes.len() as u64
}

struct Search<'a> {
    triples: &'a [Syzygy],
    policy: bool,
    lookups: u64,
    found: u64,
}

impl Search<'_> {
    fn asyzygetic(&mut self, i: usize, j: usize, k: usize) -> Result<bool> {
        self.lookups += 1;
        if self.lookups > ARONHOLD_BUDGET {
            return Err(Error::Resource(format!("Aronhold search exceeded {ARONHOLD_BUDGET} triple lookups")));
        }
        Ok(!resolve(self.triples[triple_index(i, j, k)], self.policy))
    }

    fn extend(&mut self, chosen: &mut Vec<usize>, candidates: &[usize]) -> Result<()> {
        if chosen.len() == 7 {
            self.found += 1;
            return Ok(());
        }
        for (n, &c) in candidates.iter().enumerate() {
            if chosen.len() + candidates.len() - n < 7 {
                break;
            }
            let mut next = Vec::with_capacity(candidates.len() - n);
            'cand: for &d in &candidates[n + 1..] {
                for &a in chosen.iter() {
                    if !self.asyzygetic(a, c, d)? {
                        continue 'cand;
                    }
                }
                next.push(d);
            }
            chosen.push(c);
            self.extend(chosen, &next)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Aronhold sets: 7-subsets all of whose triples are asyzygetic.
fn aronhold_count(triples: &[Syzygy], policy: bool) -> Result<u64> {
    let mut s = Search { triples, policy, lookups: 0, found: 0 };
    let all: Vec<usize> = (0..28).collect();
    s.extend(&mut Vec::new(), &all)?;
    Ok(s.found)
}

/// Counts of Steiner complexes and Aronhold sets among the 28 bitangents.
pub fn classify_configurations(all: &[Bitangent]) -> Result<ConfigurationCounts> {
    if all.len() != 28 {
        return Err(Error::invalid(format!("expected 28 bitangents, got {}", all.len())));
    }
    let t = tables(all);
    let ambiguous_triples = t.triple_list.iter().filter(|v| **v == Syzygy::Ambiguous).count() as u64;
    let ambiguous_tetrads = t.tetrads.iter().filter(|(_, v)| *v == Syzygy::Ambiguous).count() as u64;
    let syz = |p| t.triple_list.iter().filter(|v| resolve(**v, p)).count() as u64;
    let hyperflex = all.iter().any(contacts_coincide);
    Ok(ConfigurationCounts {
        steiner: CountInterval::of(steiner_count(&t.tetrads, false), steiner_count(&t.tetrads, true)),
        aronhold: CountInterval::of(aronhold_count(&t.triples, false)?, aronhold_count(&t.triples, true)?),
        syzygetic_triples: CountInterval::of(syz(false), syz(true)),
        ambiguous_triples,
        ambiguous_tetrads,
        flagged: hyperflex || ambiguous_triples > 0 || ambiguous_tetrads > 0,
    })
}
