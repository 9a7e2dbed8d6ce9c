use std::sync::Arc;

use serde::Serialize;

use super::Result;
use crate::algebra::{
    enumerate_effect_tables, enumerate_s_algebras, AlgebraError, AxiomReport, Builtin, CheckMode,
    Element, Family, FiniteAlgebra, Origin, Violation,
};
use crate::semantics::{eval_depth, eval_width, Budget};
use crate::transforms::counterexample_machine;

/// Built-in algebras plus every enumerated lattice QMV algebra on at most
/// `max_k` elements, including extended effect tables.
pub fn catalog(max_k: usize) -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = ["L2", "L3", "L4", "L5", "D4", "L2xL2", "L2xL3", "L3xL3"]
        .iter()
        .map(|n| {
            n.parse::<Builtin>()
                .and_then(|b| b.build())
                .expect("built-in algebra")
        })
        .collect();
    let keep = |a: &FiniteAlgebra| {
        a.is_lattice()
            && a.check_axioms(Family::Qmv, CheckMode::FirstViolation)
                .map(|r| r.pass)
                .unwrap_or(false)
    };
    for k in 2..=max_k {
        out.extend(enumerate_s_algebras(k).into_iter().filter(keep));
        out.extend(
            enumerate_effect_tables(k)
                .into_iter()
                .filter_map(|t| t.extend().ok())
                .filter(keep),
        );
    }
    out
}

fn passes(a: &FiniteAlgebra, f: Family) -> Result<bool, AlgebraError> {
    Ok(a.check_axioms(f, CheckMode::FirstViolation)?.pass)
}

/// On a lattice QMV algebra, `MV` holds iff `DISTRIBUTIVE` does; on an
/// extended effect algebra, also `DISTRIBUTIVE` iff `MV ∧ LINEAR`.
///
/// Reported under the `DISTRIBUTIVE` family; each violation names the
/// equivalence that broke and lists the truth values of its sides.
pub fn mv_distributivity_theorem_check(a: &FiniteAlgebra) -> Result<AxiomReport, AlgebraError> {
    for pre in [Family::Qmv, Family::Lattice] {
        if !passes(a, pre)? {
            return Err(AlgebraError::Prerequisite {
                family: Family::Distributive,
                prerequisite: pre,
            });
        }
    }
    let mv = passes(a, Family::Mv)?;
    let dist = passes(a, Family::Distributive)?;
    let mut violations = Vec::new();
    let mismatch = |axiom: &str, lhs: bool, rhs: bool| Violation {
        axiom: axiom.to_string(),
        witness: vec![a.name().to_string()],
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    };
    if mv != dist {
        violations.push(mismatch("MV⇔DISTRIBUTIVE", mv, dist));
    }
    if a.origin() == Origin::ExtendedEffect {
        let linear = passes(a, Family::Linear)?;
        if dist != (mv && linear) {
            violations.push(mismatch("DISTRIBUTIVE⇔MV∧LINEAR", dist, mv && linear));
        }
    }
    Ok(AxiomReport::new(Family::Distributive, violations))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub a: String,
    pub b: String,
    pub c: String,
    pub depth: String,
    pub width: String,
    /// `(b ⊞ 0 ⊞ a) ∧ (c ⊞ 0 ⊞ a)`, which is `(a ⊞ b) ∧ (a ⊞ c)` when `0` is neutral.
    pub depth_formula: String,
    /// `((b ⊞ 0) ∧ (c ⊞ 0)) ⊞ a`.
    pub width_formula: String,
}

/// The three-state separating machine run on every triple of one algebra.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub algebra: String,
    pub triples: usize,
    pub distributive: bool,
    /// Triples where the two semantics differ.
    pub separating: Vec<SweepRow>,
    /// Triples where an evaluation disagrees with its closed form.
    pub formula_mismatches: Vec<SweepRow>,
    /// Triples whose runs did not finish.
    pub incomplete: usize,
}

impl SweepReport {
    /// Semantics coincide on every triple exactly when the algebra is
    /// distributive, and every value matches its closed form.
    pub fn agrees(&self) -> bool {
        self.incomplete == 0
            && self.formula_mismatches.is_empty()
            && self.separating.is_empty() == self.distributive
    }
}

pub fn proposition_sweep(alg: &Arc<FiniteAlgebra>, budget: &Budget) -> Result<SweepReport> {
    let distributive = alg
        .check_axioms(Family::Distributive, CheckMode::FirstViolation)?
        .pass;
    let els: Vec<Element> = alg.elements().collect();
    let mut report = SweepReport {
        algebra: alg.name().to_string(),
        triples: 0,
        distributive,
        separating: Vec::new(),
        formula_mismatches: Vec::new(),
        incomplete: 0,
    };
    for &a in &els {
        for &b in &els {
            for &c in &els {
                report.triples += 1;
                let m = counterexample_machine(alg, a, b, c)?;
                let input = m.parse_input("s")?;
                let d = eval_depth(&m, &input, budget)?;
                let w = eval_width(&m, &input, budget)?;
                if !d.complete || !w.complete {
                    report.incomplete += 1;
                    continue;
                }
                // Path values are `I ⊞ δ ⊞ T` with `δ = 0`; `x ⊞ 0 = x` fails in
                // some QMV algebras, so the 0 stays in.
                let z = alg.zero();
                let bz = alg.boxplus(b, z)?;
                let cz = alg.boxplus(c, z)?;
                let df = alg.meet(alg.boxplus(bz, a)?, alg.boxplus(cz, a)?)?;
                let wf = alg.boxplus(alg.meet(bz, cz)?, a)?;
                let n = |e| alg.name_of(e).to_string();
                let row = SweepRow {
                    a: n(a),
                    b: n(b),
                    c: n(c),
                    depth: n(d.value),
                    width: n(w.value),
                    depth_formula: n(df),
                    width_formula: n(wf),
                };
                if d.value != df || w.value != wf {
                    report.formula_mismatches.push(row.clone());
                }
                if d.value != w.value {
                    report.separating.push(row);
                }
            }
        }
    }
    Ok(report)
}
