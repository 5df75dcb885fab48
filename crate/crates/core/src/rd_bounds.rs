//! Resolvent-degree upper bounds: the classical polynomial schedules and
//! the Jordan–Hölder bound for groups over a catalogue of known values.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{composition_factors, FactorLabel, PermGroup};

const BUILTIN_CATALOGUE: &str = include_str!("../data/rd_catalogue.json");

/// Hamilton's thresholds `H(4..=9)`.
const HAMILTON_H: [u64; 6] = [5, 11, 47, 923, 409_619, 83_763_206_255];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Degree(u64),
    Group(String),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Degree(n) => write!(f, "degree {n}"),
            Subject::Group(g) => f.write_str(g),
        }
    }
}

/// An upper bound on resolvent degree with the rules that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub subject: Subject,
    pub bound: u64,
    pub provenance: Vec<String>,
}

/// `1` for `n <= 5`, `n - 4` above.
pub fn bring_hamilton_bound(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::invalid(format!("degree {n} < 2")));
    }
    Ok(if n <= 5 { 1 } else { n - 4 })
}

/// Largest `r >= 2` with `(r-1)! + 1 <= n`.
pub fn brauer_r(n: u64) -> u64 {
    let mut r = 2u64;
    let mut fact = 1u64; // (r-1)!
    loop {
        match fact.checked_mul(r).filter(|&next| next < n) {
            Some(next) => fact = next,
            None => return r,
        }
        r += 1;
    }
}

/// `n - r*` with `r*` from [`brauer_r`].
pub fn brauer_bound(n: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::invalid(format!("Brauer's schedule needs n >= 4, got {n}")));
    }
    Ok(n - brauer_r(n))
}

/// Minimum of the Bring–Hamilton and Brauer schedules, citing the winner
/// (Bring–Hamilton on ties).
pub fn best_classical_bound(n: u64) -> Result<BoundReport> {
    let bh = bring_hamilton_bound(n)?;
    let (bound, rule) = match brauer_bound(n) {
        Ok(b) if b < bh => (b, format!("Brauer (r* = {})", brauer_r(n))),
        _ => (bh, "Bring-Hamilton".to_string()),
    };
    Ok(BoundReport { subject: Subject::Degree(n), bound, provenance: vec![rule] })
}

pub fn hamilton_h(r: u32) -> Result<u64> {
    match r {
        4..=9 => Ok(HAMILTON_H[r as usize - 4]),
        _ => Err(Error::Unsupported(format!("H({r}) is tabulated only for 4 <= r <= 9"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub bound: u64,
    pub citation: String,
}

/// Known bounds keyed by group label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCatalogue {
    pub entries: BTreeMap<String, CatalogueEntry>,
}

impl Default for BoundCatalogue {
    fn default() -> Self {
        Self::builtin()
    }
}

impl BoundCatalogue {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN_CATALOGUE).expect("built-in catalogue parses")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: BoundCatalogue =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("catalogue: {e}")))?;
        for (k, e) in &c.entries {
            if e.citation.trim().is_empty() {
                return Err(Error::invalid(format!("catalogue entry `{k}` has no citation")));
            }
        }
        Ok(c)
    }

    fn lookup(&self, label: &str) -> Option<(u64, String)> {
        self.entries.get(label).map(|e| (e.bound, format!("{label}: {}", e.citation)))
    }

    /// Bound for one simple composition factor.
    fn factor_bound(&self, f: &FactorLabel) -> Result<(u64, String)> {
        let label = f.to_string();
        if let Some(hit) = self.lookup(&label) {
            return Ok(hit);
        }
        match f {
            FactorLabel::Cyclic(_) => Ok((1, format!("{label}: solvable"))),
            FactorLabel::Alternating(n) => {
                let r = best_classical_bound(*n as u64)?;
                Ok((r.bound, format!("{label}: {}", r.provenance.join(", "))))
            }
            _ => Err(Error::NoBound(label)),
        }
    }

    /// Bound for a labelled group: a catalogue entry, `Cn`, `An` or `Sn`.
    pub fn label_bound(&self, label: &str) -> Result<BoundReport> {
        let subject = Subject::Group(label.to_string());
        if let Some((bound, cite)) = self.lookup(label) {
            return Ok(BoundReport { subject, bound, provenance: vec![cite] });
        }
        let degree = |p: char| label.strip_prefix(p).and_then(|r| r.parse::<u64>().ok());
        if degree('C').is_some_and(|n| n >= 1) {
            return Ok(BoundReport { subject, bound: 1, provenance: vec![format!("{label}: solvable")] });
        }
        for p in ['S', 'A'] {
            if let Some(n) = degree(p) {
                if n <= 4 {
                    return Ok(BoundReport { subject, bound: 1, provenance: vec![format!("{label}: solvable")] });
                }
                let r = best_classical_bound(n)?;
                return Ok(BoundReport { subject, bound: r.bound, provenance: r.provenance });
            }
        }
        match FactorLabel::parse(label) {
            Some(f) => {
                let (bound, cite) = self.factor_bound(&f)?;
                Ok(BoundReport { subject, bound, provenance: vec![cite] })
            }
            None => Err(Error::NoBound(label.to_string())),
        }
    }

    /// Jordan–Hölder bound: the maximum over composition factors.
    pub fn group_bound(&self, g: &PermGroup) -> Result<BoundReport> {
        let factors = composition_factors(g)?;
        let mut bound = 1;
        let mut provenance = vec!["Jordan-Hölder maximum over composition factors".to_string()];
        for f in factors.iter().collect::<std::collections::BTreeSet<_>>() {
            let (b, cite) = self.factor_bound(f)?;
            bound = bound.max(b);
            provenance.push(cite);
        }
        let subject = Subject::Group(format!("order {}", g.order()));
        Ok(BoundReport { subject, bound, provenance })
    }
}

/// Subject of [`group_rd_bound`].
pub enum GroupSubject<'a> {
    Group(&'a PermGroup),
    Label(&'a str),
}

/// Bound from the built-in catalogue.
pub fn group_rd_bound(subject: GroupSubject<'_>) -> Result<BoundReport> {
    let cat = BoundCatalogue::builtin();
    match subject {
        GroupSubject::Group(g) => cat.group_bound(g),
        GroupSubject::Label(l) => cat.label_bound(l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::weyl::we6;

    #[test]
    fn schedules() {
        assert_eq!(bring_hamilton_bound(5).unwrap(), 1);
        assert_eq!(bring_hamilton_bound(6).unwrap(), 2);
        assert_eq!(bring_hamilton_bound(9).unwrap(), 5);
        assert!(bring_hamilton_bound(1).is_err());
        assert_eq!(brauer_bound(25).unwrap(), 20);
        assert_eq!(brauer_bound(24).unwrap(), 20);
        assert_eq!(brauer_bound(121).unwrap(), 115);
        assert!(brauer_bound(3).is_err());
        assert_eq!(brauer_r(u64::MAX), 21);
    }

    #[test]
    fn best_classical_cites_the_winner() {
        let r = best_classical_bound(7).unwrap();
        assert_eq!((r.bound, r.provenance[0].as_str()), (3, "Bring-Hamilton"));
        assert_eq!(best_classical_bound(8).unwrap().bound, 4);
        let r = best_classical_bound(1000).unwrap();
        assert_eq!(r.bound, 993);
        assert!(r.provenance[0].starts_with("Brauer"));
    }

    #[test]
    fn hamilton_table() {
        assert_eq!(hamilton_h(4).unwrap(), 5);
        assert_eq!(hamilton_h(6).unwrap(), 47);
        assert_eq!(hamilton_h(9).unwrap(), 83_763_206_255);
        assert!(matches!(hamilton_h(10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn group_bounds() {
        let b = |l: &str| group_rd_bound(GroupSubject::Label(l)).map(|r| r.bound);
        assert_eq!(b("S6").unwrap(), 2);
        assert_eq!(b("W(E6)").unwrap(), 3);
        assert_eq!(b("PSL(2,7)").unwrap(), 1);
        assert_eq!(b("C7").unwrap(), 1);
        assert!(matches!(b("W(E7)+"), Err(Error::NoBound(_))));
        assert!(matches!(b("M11"), Err(Error::NoBound(_))));
        assert_eq!(group_rd_bound(GroupSubject::Group(&we6())).unwrap().bound, 3);
        assert_eq!(group_rd_bound(GroupSubject::Group(&PermGroup::symmetric(4))).unwrap().bound, 1);
        assert_eq!(group_rd_bound(GroupSubject::Group(&PermGroup::symmetric(6))).unwrap().bound, 2);
    }

    #[test]
    fn catalogue_override_and_validation() {
        let c = BoundCatalogue::from_json(r#"{"entries":{"W(E7)+":{"bound":23,"citation":"S28"}}}"#).unwrap();
        assert_eq!(c.label_bound("W(E7)+").unwrap().bound, 23);
        assert!(BoundCatalogue::from_json(r#"{"entries":{"X":{"bound":1,"citation":" "}}}"#).is_err());
        let r = c.label_bound("S7").unwrap();
        assert_eq!(serde_json::from_str::<BoundReport>(&serde_json::to_string(&r).unwrap()).unwrap(), r);
    }
}
