//! Solution towers: ordered records of invertible reduction steps.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{roots, AnyPoly, ComplexPoly, RootSet, DEFAULT_TOL};
use crate::scalar::{Num, C64};

/// Residual accepted for roots pulled back to the source polynomial.
pub const TOWER_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepKind {
    LinearShift,
    RadicalAdjunction { degree: u32 },
    QuadricDiagonalization,
    LineOnQuadric,
    AuxiliaryCubic,
    TschirnhausSubstitution,
    CoefficientScaling,
}

/// Rational expression in one variable, serialized as a tree tagged by `op`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Expr {
    Var,
    Const { value: Num },
    Add { args: Vec<Expr> },
    Mul { args: Vec<Expr> },
    Div { num: Box<Expr>, den: Box<Expr> },
    Neg { arg: Box<Expr> },
    /// Polynomial in the variable, highest degree first.
    Poly { coeffs: Vec<Num> },
}

impl Expr {
    pub fn constant(value: impl Into<Num>) -> Self {
        Expr::Const { value: value.into() }
    }

    /// `scale * y + shift`.
    pub fn affine(scale: impl Into<Num>, shift: impl Into<Num>) -> Self {
        Expr::Add { args: vec![Expr::Mul { args: vec![Expr::constant(scale), Expr::Var] }, Expr::constant(shift)] }
    }

    pub fn poly(coeffs: Vec<Num>) -> Self {
        Expr::Poly { coeffs }
    }

    pub fn ratio(num: Expr, den: Expr) -> Self {
        Expr::Div { num: Box::new(num), den: Box::new(den) }
    }

    pub fn neg(arg: Expr) -> Self {
        Expr::Neg { arg: Box::new(arg) }
    }

    pub fn eval(&self, y: C64) -> C64 {
        match self {
            Expr::Var => y,
            Expr::Const { value } => value.to_c64(),
            Expr::Add { args } => args.iter().map(|a| a.eval(y)).sum(),
            Expr::Mul { args } => args.iter().map(|a| a.eval(y)).product(),
            Expr::Div { num, den } => num.eval(y) / den.eval(y),
            Expr::Neg { arg } => -arg.eval(y),
            Expr::Poly { coeffs } => coeffs.iter().fold(C64::new(0.0, 0.0), |acc, c| acc * y + c.to_c64()),
        }
    }
}

/// One reduction step. Steps that change the polynomial carry the new
/// polynomial in `result`, the forward root map in `map` and the inverse in
/// `inverse`; the others only record adjoined quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub forward: BTreeMap<String, Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Expr>,
    pub inverse: Expr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<AnyPoly>,
}

impl TowerStep {
    /// A step that adjoins data without changing the polynomial.
    pub fn record(kind: StepKind, forward: BTreeMap<String, Vec<Num>>, branch: Option<usize>) -> Self {
        TowerStep { kind, forward, branch, map: None, inverse: Expr::Var, result: None }
    }

    pub fn transform(
        kind: StepKind,
        forward: BTreeMap<String, Vec<Num>>,
        map: Expr,
        inverse: Expr,
        result: AnyPoly,
    ) -> Self {
        TowerStep { kind, forward, branch: None, map: Some(map), inverse, result: Some(result) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionTower {
    pub source: AnyPoly,
    pub steps: Vec<TowerStep>,
    pub target: AnyPoly,
}

impl SolutionTower {
    pub fn new(source: AnyPoly) -> Self {
        SolutionTower { target: source.clone(), source, steps: Vec::new() }
    }

    pub fn push(&mut self, step: TowerStep) {
        if let Some(r) = &step.result {
            self.target = r.clone();
        }
        self.steps.push(step);
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tower serializes")
    }
}

/// Roots of a tower's source with per-root diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerSolution {
    pub roots: RootSet,
    /// Source residuals of the composed recipes before the final polish.
    pub raw_residuals: Vec<f64>,
    /// Roots whose pull-back met a degenerate fiber at some stage.
    pub degenerate: Vec<bool>,
}

/// Roots of `tower.source` from the roots of `tower.target`, pulled back
/// through the inverse recipes with a Newton polish at every stage.
pub fn solve_via_tower(tower: &SolutionTower) -> Result<TowerSolution> {
    let mut stages: Vec<ComplexPoly> = vec![tower.source.to_complex()];
    for s in &tower.steps {
        if let Some(r) = &s.result {
            stages.push(r.to_complex());
        }
    }
    let target = stages.last().expect("source stage");
    let rs = roots(target, DEFAULT_TOL.max(1e-9))?;
    let n = rs.len();
    let mut ys = rs.roots.clone();
    let mut raw = ys.clone();
    let mut degenerate = vec![false; n];
    let mut stage = stages.len() - 1;
    for step in tower.steps.iter().rev() {
        if step.result.is_none() {
            continue;
        }
        stage -= 1;
        let prev = &stages[stage];
        let map = step.map.as_ref().ok_or_else(|| Error::invalid("transform step lacks a forward map"))?;
        let fiber = roots(prev, 1e-6)?.roots;
        let mut used = vec![false; fiber.len()];
        let mut next = vec![C64::new(0.0, 0.0); n];
        let mut claimed = vec![false; n];
        for i in 0..n {
            let c = step.inverse.eval(ys[i]);
            if !(c.re.is_finite() && c.im.is_finite()) {
                continue;
            }
            let c = prev.newton_polish(c, 4);
            let near = nearest(&fiber, &used, |r| (r - c).norm());
            if let Some(j) = near.filter(|&j| (fiber[j] - c).norm() <= 1e-6 * c.norm().max(1.0)) {
                used[j] = true;
                claimed[i] = true;
                next[i] = c;
                raw[i] = step.inverse.eval(raw[i]);
            }
        }
        // collapsed or colliding recipes: match the rest through the forward map
        for i in (0..n).filter(|&i| !claimed[i]) {
            let j = nearest(&fiber, &used, |r| (map.eval(r) - ys[i]).norm())
                .ok_or_else(|| Error::numerical("fiber matching ran out of roots"))?;
            used[j] = true;
            next[i] = prev.newton_polish(fiber[j], 4);
            raw[i] = fiber[j];
            degenerate[i] = true;
        }
        ys = next;
    }
    let source = &stages[0];
    let mut rows: Vec<(C64, f64, f64, bool)> = (0..n)
        .map(|i| (ys[i], source.scaled_residual(ys[i]), source.scaled_residual(raw[i]), degenerate[i]))
        .collect();
    rows.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let residuals: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > TOWER_TOL {
        return Err(Error::NoConvergence { iterations: 0, worst_residual: worst });
    }
    Ok(TowerSolution {
        roots: RootSet { roots: rows.iter().map(|r| r.0).collect(), residuals, tolerance: TOWER_TOL },
        raw_residuals: rows.iter().map(|r| r.2).collect(),
        degenerate: rows.iter().map(|r| r.3).collect(),
    })
}

fn nearest(pts: &[C64], used: &[bool], dist: impl Fn(C64) -> f64) -> Option<usize> {
    (0..pts.len())
        .filter(|&j| !used[j])
        .min_by(|&a, &b| dist(pts[a]).total_cmp(&dist(pts[b])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::scalar::{rat_int, Rational};

    #[test]
    fn expression_tree_roundtrip() {
        let e = Expr::ratio(Expr::neg(Expr::poly(vec![rat_int(1).into(), rat_int(-2).into()])), Expr::affine(rat_int(3), C64::new(0.0, 1.0)));
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains(r#""op":"div""#));
        let back: Expr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        let y = C64::new(2.0, 0.0);
        // -(y - 2) / (3y + i) at y = 2
        assert_eq!(e.eval(y), C64::new(0.0, 0.0));
    }

    #[test]
    fn step_json_has_kind_tag() {
        let st = TowerStep::record(StepKind::RadicalAdjunction { degree: 2 }, BTreeMap::new(), Some(0));
        let s = serde_json::to_string(&st).unwrap();
        assert!(s.contains(r#""kind":"radical-adjunction","degree":2"#));
        let back: TowerStep = serde_json::from_str(&s).unwrap();
        assert_eq!(back, st);
    }

    #[test]
    fn identity_tower_gives_cube_roots_of_unity() {
        let p: Poly<Rational> = Poly::from_i64s_descending(&[1, 0, 0, -1]);
        let sol = solve_via_tower(&SolutionTower::new(p.into())).unwrap();
        assert_eq!(sol.roots.len(), 3);
        for r in &sol.roots.roots {
            assert!((r.powu(3) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
