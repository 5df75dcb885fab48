//! Permutation groups: Schreier–Sims, membership, normal closures, derived
//! series and composition factors.

mod factors;
mod perm;
pub mod weyl;

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use factors::{composition_factors, composition_factors_with, FactorLabel, DEFAULT_ORDER_BUDGET};
pub use perm::Perm;

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base_point: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `reps[beta]` maps the base point to `beta`.
    reps: HashMap<usize, Perm>,
}

impl Level {
    fn new(base_point: usize, gens: Vec<Perm>, d: usize) -> Self {
        let mut l = Level { base_point, gens, orbit: Vec::new(), reps: HashMap::new() };
        l.rebuild(d);
        l
    }

    fn rebuild(&mut self, d: usize) {
        self.orbit = vec![self.base_point];
        self.reps.clear();
        self.reps.insert(self.base_point, Perm::identity(d));
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            for s in &self.gens {
                let y = s.apply(x);
                if !self.reps.contains_key(&y) {
                    let r = self.reps[&x].then(s);
                    self.reps.insert(y, r);
                    self.orbit.push(y);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set.
#[derive(Clone, Debug)]
struct Bsgs {
    levels: Vec<Level>,
}

impl Bsgs {
    /// Deterministic Schreier–Sims.
    fn build(d: usize, gens: &[Perm]) -> Bsgs {
        let mut b = Bsgs { levels: Vec::new() };
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        if gens.is_empty() {
            return b;
        }
        for g in &gens {
            if b.levels.iter().all(|l| g.apply(l.base_point) == l.base_point) {
                let bp = g.first_moved().expect("non-identity");
                b.levels.push(Level::new(bp, Vec::new(), d));
            }
        }
        for i in 0..b.levels.len() {
            let prefix: Vec<usize> = b.levels[..i].iter().map(|l| l.base_point).collect();
            b.levels[i].gens = gens.iter().filter(|g| prefix.iter().all(|&p| g.apply(p) == p)).cloned().collect();
            b.levels[i].rebuild(d);
        }
        let mut i = b.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut added = None;
            'scan: for &beta in &b.levels[lvl].orbit {
                for s in &b.levels[lvl].gens {
                    let u = &b.levels[lvl].reps[&beta];
                    let v = &b.levels[lvl].reps[&s.apply(beta)];
                    let h = u.then(s).then(&v.inverse());
                    let (res, j) = b.strip(h, lvl + 1);
                    if j < b.levels.len() || !res.is_identity() {
                        added = Some((res, j));
                        break 'scan;
                    }
                }
            }
            match added {
                Some((res, j)) => {
                    if j == b.levels.len() {
                        let bp = res.first_moved().expect("non-identity residue");
                        b.levels.push(Level::new(bp, Vec::new(), d));
                    }
                    for l in lvl + 1..=j {
                        b.levels[l].gens.push(res.clone());
                        b.levels[l].rebuild(d);
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        b
    }

    /// Sifts `h` from level `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it went through).
    fn strip(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base_point);
            match level.reps.get(&beta) {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    fn order(&self) -> u128 {
        self.levels.iter().fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }
}

/// Permutation group given by generators; the stabilizer chain is built on
/// first use and cached.
#[derive(Serialize, Deserialize)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    #[serde(skip)]
    bsgs: OnceLock<Bsgs>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let g = PermGroup::raw(self.degree, self.generators.clone());
        if let Some(b) = self.bsgs.get() {
            let _ = g.bsgs.set(b.clone());
        }
        g
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.degree).field("generators", &self.generators).finish()
    }
}

/// Orders along the derived series and the solvability verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedSeries {
    pub orders: Vec<u128>,
    pub solvable: bool,
}

impl PermGroup {
    fn raw(degree: usize, generators: Vec<Perm>) -> Self {
        PermGroup { degree, generators, bsgs: OnceLock::new() }
    }

    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(format!("generator of degree {} in a group of degree {degree}", g.degree())));
        }
        Ok(Self::raw(degree, generators))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::raw(degree, Vec::new())
    }

    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return Self::trivial(n);
        }
        let t = Perm::from_cycles(n, &[&[0, 1]]).expect("valid");
        let c = Perm::from_cycles(n, &[&(0..n).collect::<Vec<_>>()]).expect("valid");
        Self::raw(n, vec![t, c])
    }

    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return Self::trivial(n);
        }
        let gens = (2..n).map(|k| Perm::from_cycles(n, &[&[0, 1, k]]).expect("valid")).collect();
        Self::raw(n, gens)
    }

    pub fn cyclic(n: usize) -> Self {
        if n < 2 {
            return Self::trivial(n.max(1));
        }
        Self::raw(n, vec![Perm::from_cycles(n, &[&(0..n).collect::<Vec<_>>()]).expect("valid")])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    fn bsgs(&self) -> &Bsgs {
        self.bsgs.get_or_init(|| Bsgs::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        self.bsgs().order()
    }

    /// Base points of the stabilizer chain.
    pub fn base(&self) -> Vec<usize> {
        self.bsgs().levels.iter().map(|l| l.base_point).collect()
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::invalid(format!("permutation of degree {} tested against degree {}", g.degree(), self.degree)));
        }
        let b = self.bsgs();
        let (res, j) = b.strip(g.clone(), 0);
        Ok(j == b.levels.len() && res.is_identity())
    }

    /// Uniform random element (product of random coset representatives).
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Perm {
        let mut g = Perm::identity(self.degree);
        for l in self.bsgs().levels.iter().rev() {
            let beta = l.orbit[rng.random_range(0..l.orbit.len())];
            g = g.then(&l.reps[&beta]);
        }
        g
    }

    /// All elements; intended for small groups in tests.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for l in self.bsgs().levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * l.orbit.len());
            for g in &out {
                for beta in &l.orbit {
                    next.push(g.then(&l.reps[beta]));
                }
            }
            out = next;
        }
        out
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest normal subgroup of `self` containing `s`.
    pub fn normal_closure(&self, s: &[Perm]) -> Result<PermGroup> {
        for x in s {
            if !self.contains(x)? {
                return Err(Error::invalid(format!("{x:?} is not in the group")));
            }
        }
        Ok(self.closure_unchecked(s))
    }

    fn closure_unchecked(&self, s: &[Perm]) -> PermGroup {
        let mut n = PermGroup::raw(self.degree, s.iter().filter(|x| !x.is_identity()).cloned().collect());
        let mut k = 0;
        while k < n.generators.len() {
            let x = n.generators[k].clone();
            for g in &self.generators {
                let c = x.conjugate(g);
                if !n.contains(&c).expect("same degree") {
                    let mut gens = n.generators.clone();
                    gens.push(c);
                    n = PermGroup::raw(self.degree, gens);
                }
            }
            k += 1;
        }
        n
    }

    /// Commutator subgroup: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.closure_unchecked(&comms)
    }

    pub fn derived_series(&self) -> DerivedSeries {
        let mut orders = vec![self.order()];
        let mut g = self.clone();
        loop {
            let d = g.derived_subgroup();
            let o = d.order();
            if o == *orders.last().expect("nonempty") {
                break;
            }
            orders.push(o);
            if o == 1 {
                break;
            }
            g = d;
        }
        let solvable = *orders.last().expect("nonempty") == 1;
        DerivedSeries { orders, solvable }
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().solvable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure_by_enumeration(d: usize, gens: &[Perm]) -> HashSet<Perm> {
        let mut set: HashSet<Perm> = HashSet::from([Perm::identity(d)]);
        let mut frontier = vec![Perm::identity(d)];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = x.then(g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(PermGroup::symmetric(5).order(), 120);
        assert_eq!(PermGroup::alternating(5).order(), 60);
        assert_eq!(PermGroup::trivial(4).order(), 1);
        assert_eq!(PermGroup::cyclic(12).order(), 12);
        assert_eq!(PermGroup::symmetric(9).order(), 362880);
    }

    #[test]
    fn membership_matches_enumeration() {
        let g = PermGroup::new(
            6,
            vec![Perm::from_cycles(6, &[&[0, 1, 2]]).unwrap(), Perm::from_cycles(6, &[&[2, 3], &[4, 5]]).unwrap()],
        )
        .unwrap();
        let all = closure_by_enumeration(6, g.generators());
        assert_eq!(g.order(), all.len() as u128);
        for p in PermGroup::symmetric(6).elements() {
            assert_eq!(g.contains(&p).unwrap(), all.contains(&p));
        }
        let a5 = PermGroup::alternating(5);
        assert!(a5.contains(&Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap()).unwrap());
        assert!(!a5.contains(&Perm::from_cycles(5, &[&[0, 1]]).unwrap()).unwrap());
        assert!(a5.contains(&Perm::identity(5)).unwrap());
        assert!(a5.contains(&Perm::identity(4)).is_err());
    }

    #[test]
    fn derived_series_examples() {
        let s4 = PermGroup::symmetric(4);
        assert_eq!(s4.derived_series(), DerivedSeries { orders: vec![24, 12, 4, 1], solvable: true });
        // brute-force commutator subgroup of S4
        let els = s4.elements();
        let comms: Vec<Perm> = els.iter().flat_map(|a| els.iter().map(move |b| a.commutator(b))).collect();
        assert_eq!(closure_by_enumeration(4, &comms).len(), 12);
        assert_eq!(PermGroup::alternating(5).derived_series(), DerivedSeries { orders: vec![60], solvable: false });
        assert_eq!(PermGroup::cyclic(6).derived_series(), DerivedSeries { orders: vec![6, 1], solvable: true });
    }

    #[test]
    fn normal_closures() {
        let s5 = PermGroup::symmetric(5);
        let t = Perm::from_cycles(5, &[&[0, 1]]).unwrap();
        assert_eq!(s5.normal_closure(&[t]).unwrap().order(), 120);
        let c3 = Perm::from_cycles(5, &[&[0, 1, 2]]).unwrap();
        let n = s5.normal_closure(&[c3.clone()]).unwrap();
        assert_eq!(n.order(), 60);
        // brute force: all conjugates of the 3-cycle generate A5
        let conj: Vec<Perm> = s5.elements().iter().map(|g| c3.conjugate(g)).collect();
        assert_eq!(closure_by_enumeration(5, &conj).len(), 60);
        assert_eq!(s5.normal_closure(&[Perm::identity(5)]).unwrap().order(), 1);
        let a4 = PermGroup::alternating(4);
        assert!(a4.normal_closure(&[Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).is_err());
    }

    #[test]
    fn random_elements_are_members() {
        let g = PermGroup::alternating(7);
        let mut rng = crate::rng::SeedTree::new(1).rng();
        for _ in 0..50 {
            let x = g.random_element(&mut rng);
            assert!(x.is_even());
            assert!(g.contains(&x).unwrap());
        }
    }
}
