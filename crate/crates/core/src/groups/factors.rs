//! Composition factors by derived series, sampled normal closures and
//! identification by order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Perm, PermGroup};
use crate::error::{Error, Result};
use crate::rng::SeedTree;

pub const DEFAULT_ORDER_BUDGET: u128 = 10_000_000;

/// Random elements drawn per simplicity test.
const SAMPLES: usize = 200;
/// Representatives tested per cycle type.
const PER_CYCLE_TYPE: usize = 3;

/// A simple composition factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorLabel {
    Cyclic(u64),
    Alternating(u32),
    Psl27,
    /// Simple group of order 25920.
    WE6Plus,
    /// Simple group of order 1451520.
    WE7Plus,
    Unknown(u128),
}

impl FactorLabel {
    pub fn order(&self) -> u128 {
        match self {
            FactorLabel::Cyclic(p) => *p as u128,
            FactorLabel::Alternating(n) => (1..=*n as u128).product::<u128>() / 2,
            FactorLabel::Psl27 => 168,
            FactorLabel::WE6Plus => 25920,
            FactorLabel::WE7Plus => 1451520,
            FactorLabel::Unknown(o) => *o,
        }
    }

    /// Label of a nonabelian simple group of the given order, when the order
    /// determines it among the groups we know.
    pub fn simple_of_order(order: u128) -> FactorLabel {
        match order {
            168 => FactorLabel::Psl27,
            25920 => FactorLabel::WE6Plus,
            1451520 => FactorLabel::WE7Plus,
            // A8 and PSL(3,4) share this order
            20160 => FactorLabel::Unknown(order),
            _ => {
                let mut f: u128 = 1;
                for n in 1..=34u32 {
                    f *= n as u128;
                    if n >= 5 && f / 2 == order {
                        return FactorLabel::Alternating(n);
                    }
                    if f / 2 > order {
                        break;
                    }
                }
                FactorLabel::Unknown(order)
            }
        }
    }

    pub fn parse(s: &str) -> Option<FactorLabel> {
        let s = s.trim();
        match s {
            "PSL(2,7)" | "PSL(3,2)" => return Some(FactorLabel::Psl27),
            "W(E6)+" => return Some(FactorLabel::WE6Plus),
            "W(E7)+" => return Some(FactorLabel::WE7Plus),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("unknown(").and_then(|r| r.strip_suffix(')')) {
            return rest.parse().ok().map(FactorLabel::Unknown);
        }
        if let Some(p) = s.strip_prefix('C') {
            return p.parse().ok().filter(|&p| is_prime(p)).map(FactorLabel::Cyclic);
        }
        if let Some(n) = s.strip_prefix('A') {
            return n.parse().ok().filter(|&n| n >= 5).map(FactorLabel::Alternating);
        }
        None
    }
}

impl fmt::Display for FactorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorLabel::Cyclic(p) => write!(f, "C{p}"),
            FactorLabel::Alternating(n) => write!(f, "A{n}"),
            FactorLabel::Psl27 => write!(f, "PSL(2,7)"),
            FactorLabel::WE6Plus => write!(f, "W(E6)+"),
            FactorLabel::WE7Plus => write!(f, "W(E7)+"),
            FactorLabel::Unknown(o) => write!(f, "unknown({o})"),
        }
    }
}

impl Serialize for FactorLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FactorLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FactorLabel::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown factor label `{s}`")))
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn prime_factors(mut n: u128) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        while n % d == 0 {
            out.push(d as u64);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n as u64);
    }
    out
}

/// Composition factors with seed 0 and the default order budget.
pub fn composition_factors(g: &PermGroup) -> Result<Vec<FactorLabel>> {
    composition_factors_with(g, 0, DEFAULT_ORDER_BUDGET)
}

/// Composition factors, sorted. Abelian layers of the derived series split
/// into cyclic factors of prime order; a perfect layer is tested for
/// simplicity by normal closures of sampled elements (seeded) and
/// identified by its order.
pub fn composition_factors_with(g: &PermGroup, seed: u64, budget: u128) -> Result<Vec<FactorLabel>> {
    let order = g.order();
    if order > budget {
        return Err(Error::Resource(format!("group order {order} exceeds the budget {budget}")));
    }
    let mut out = Vec::new();
    factors_rec(g, &SeedTree::new(seed).child("composition"), &mut out);
    out.sort();
    Ok(out)
}

fn factors_rec(g: &PermGroup, seeds: &SeedTree, out: &mut Vec<FactorLabel>) {
    let order = g.order();
    if order == 1 {
        return;
    }
    let d = g.derived_subgroup();
    let dorder = d.order();
    if dorder < order {
        out.extend(prime_factors(order / dorder).into_iter().map(FactorLabel::Cyclic));
        factors_rec(&d, &seeds.child("derived"), out);
        return;
    }
    match proper_normal_subgroup(g, seeds) {
        Some(n) => {
            let q = order / n.order();
            factors_rec(&n, &seeds.child("normal"), out);
            // the quotient of a perfect group is perfect; we do not split it further
            out.push(FactorLabel::simple_of_order(q));
        }
        None => out.push(FactorLabel::simple_of_order(order)),
    }
}

/// A proper nontrivial normal subgroup found among normal closures of
/// sampled elements, grouped by cycle type.
fn proper_normal_subgroup(g: &PermGroup, seeds: &SeedTree) -> Option<PermGroup> {
    let mut rng = seeds.child("samples").rng();
    let mut by_type: BTreeMap<Vec<usize>, Vec<Perm>> = BTreeMap::new();
    for _ in 0..SAMPLES {
        let x = g.random_element(&mut rng);
        if x.is_identity() {
            continue;
        }
        let reps = by_type.entry(x.cycle_type()).or_default();
        if reps.len() < PER_CYCLE_TYPE && !reps.contains(&x) {
            reps.push(x);
        }
    }
    let order = g.order();
    for reps in by_type.values() {
        for x in reps {
            let n = g.closure_unchecked(std::slice::from_ref(x));
            if n.order() < order {
                return Some(n);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[FactorLabel]) -> Vec<String> {
        v.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn symmetric_and_cyclic() {
        assert_eq!(labels(&composition_factors(&PermGroup::symmetric(6)).unwrap()), ["C2", "A6"]);
        assert_eq!(labels(&composition_factors(&PermGroup::cyclic(12)).unwrap()), ["C2", "C2", "C3"]);
        assert!(composition_factors(&PermGroup::trivial(3)).unwrap().is_empty());
    }

    #[test]
    fn psl27_on_seven_points() {
        // PSL(3,2) acting on the Fano plane
        let a = Perm::from_cycles(7, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap();
        let b = Perm::from_cycles(7, &[&[1, 2, 4], &[3, 6, 5]]).unwrap();
        let c = Perm::from_cycles(7, &[&[0, 1], &[3, 6]]).unwrap();
        let g = PermGroup::new(7, vec![a, b, c]).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(composition_factors(&g).unwrap(), vec![FactorLabel::Psl27]);
    }

    #[test]
    fn non_simple_perfect_group_is_split() {
        // A5 x A5 on 10 points
        let mut gens = Vec::new();
        for k in 2..5 {
            gens.push(Perm::from_cycles(10, &[&[0, 1, k]]).unwrap());
            gens.push(Perm::from_cycles(10, &[&[5, 6, 5 + k]]).unwrap());
        }
        let g = PermGroup::new(10, gens).unwrap();
        assert_eq!(g.order(), 3600);
        let f = composition_factors(&g).unwrap();
        assert_eq!(f.iter().map(FactorLabel::order).product::<u128>(), 3600);
        assert_eq!(labels(&f), ["A5", "A5"]);
    }

    #[test]
    fn budget_is_enforced() {
        let e = composition_factors_with(&PermGroup::symmetric(12), 0, DEFAULT_ORDER_BUDGET).unwrap_err();
        assert!(matches!(e, Error::Resource(_)));
    }

    #[test]
    fn labels_roundtrip() {
        for l in ["C2", "A6", "PSL(2,7)", "W(E6)+", "W(E7)+", "unknown(20160)"] {
            assert_eq!(FactorLabel::parse(l).unwrap().to_string(), l);
        }
        assert_eq!(FactorLabel::simple_of_order(20160), FactorLabel::Unknown(20160));
        assert_eq!(FactorLabel::simple_of_order(60), FactorLabel::Alternating(5));
        assert!(FactorLabel::parse("C4").is_none());
    }
}
