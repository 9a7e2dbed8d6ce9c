//! Checks that compare machines, and the corpus they run on.

mod corpus;
mod theorems;
mod verify;

pub use corpus::{
    all_inputs, contains_11, converge_machine, cycle_machine, edge_machine, scan_machine, Corpus,
    Fixture,
};
pub use theorems::{
    catalog, mv_distributivity_theorem_check, proposition_sweep, SweepReport, SweepRow,
};
pub use verify::{verify, Check, VerifyReport};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra};
use crate::machine::{Machine, MachineError, SymbolId};
use crate::semantics::{eval_depth, eval_width, Budget, EvalResult, SemanticsError};
use crate::transforms::{encode_input, TransformError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("machines are over different algebras")]
    Mismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Depth,
    Width,
}

impl Mode {
    pub fn eval(self, m: &Machine, input: &[SymbolId], budget: &Budget) -> Result<EvalResult> {
        Ok(match self {
            Mode::Depth => eval_depth(m, input, budget)?,
            Mode::Width => eval_width(m, input, budget)?,
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Depth => "depth",
            Mode::Width => "width",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "depth" | "d" => Ok(Mode::Depth),
            "width" | "w" => Ok(Mode::Width),
            _ => Err(format!("unknown mode `{s}` (expected depth or width)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Every conclusive row satisfies the relation and none is inconclusive.
    Holds,
    /// Some conclusive row breaks the relation.
    Violated,
    /// No row breaks it, but some row could not be decided.
    Inconclusive,
}

impl Verdict {
    /// Combines row verdicts: any violation wins, then any inconclusive row.
    pub fn combine(items: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Holds;
        for v in items {
            match v {
                Verdict::Violated => return Verdict::Violated,
                Verdict::Inconclusive => out = Verdict::Inconclusive,
                Verdict::Holds => {}
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Equal,
    /// Left value ≤ right value.
    #[serde(rename = "<=")]
    Leq,
}

#[derive(Debug, Clone)]
pub struct EquivRow {
    pub input: String,
    pub left: EvalResult,
    pub right: EvalResult,
    pub verdict: Verdict,
}

/// Per-input comparison of two evaluations.
#[derive(Debug, Clone)]
pub struct EquivReport {
    pub left: String,
    pub right: String,
    /// `None` for the width-versus-depth order check.
    pub mode: Option<Mode>,
    pub relation: Relation,
    pub algebra: Arc<FiniteAlgebra>,
    pub rows: Vec<EquivRow>,
    pub verdict: Verdict,
}

impl EquivReport {
    pub fn witnesses(&self) -> impl Iterator<Item = &EquivRow> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Violated)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let alg = &self.algebra;
        json!({
            "left": self.left,
            "right": self.right,
            "mode": self.mode.map(|m| m.to_string()).unwrap_or_else(|| "width<=depth".into()),
            "relation": self.relation,
            "verdict": self.verdict,
            "rows": self.rows.iter().map(|r| json!({
                "input": r.input,
                "left": r.left.to_json(alg),
                "right": r.right.to_json(alg),
                "verdict": r.verdict,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let alg = &self.algebra;
        let rel = match self.relation {
            Relation::Equal => "=",
            Relation::Leq => "<=",
        };
        let mode = self
            .mode
            .map(|m| m.to_string())
            .unwrap_or_else(|| "width vs depth".into());
        writeln!(
            f,
            "{} {rel} {} ({mode}): {}",
            self.left, self.right, self.verdict
        )?;
        let w = self
            .rows
            .iter()
            .map(|r| r.input.len())
            .max()
            .unwrap_or(5)
            .max(5);
        writeln!(
            f,
            "  {:<w$}  {:<16}  {:<16}  verdict",
            "input", "left", "right"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "  {:<w$}  {:<16}  {:<16}  {}",
                r.input,
                r.left.display(alg).to_string(),
                r.right.display(alg).to_string(),
                r.verdict
            )?;
        }
        Ok(())
    }
}

fn row_verdict(
    alg: &FiniteAlgebra,
    rel: Relation,
    left: &EvalResult,
    right: &EvalResult,
) -> Verdict {
    if !left.complete || !right.complete {
        return Verdict::Inconclusive;
    }
    let ok = match rel {
        Relation::Equal => left.value == right.value,
        Relation::Leq => {
            if !left.defined || !right.defined {
                return Verdict::Inconclusive;
            }
            alg.leq_ix(left.value.index(), right.value.index())
        }
    };
    if ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

/// Evaluates both machines on each input and compares the values where both
/// runs are complete.
///
/// `encode` maps `m1`'s input symbols to `m2`'s (as recorded by the
/// transitions-depth sidecar); `m2` then gets `6n + 1` steps for every `n`
/// given to `m1`. Otherwise `m2` gets one extra step, enough for the bridging
/// step added by the initial-state construction.
pub fn equiv_check(
    m1: &Machine,
    m2: &Machine,
    mode: Mode,
    inputs: &[Vec<SymbolId>],
    budget: &Budget,
    encode: Option<&BTreeMap<String, String>>,
) -> Result<EquivReport> {
    if m1.algebra().id() != m2.algebra().id() {
        return Err(HarnessError::Mismatch);
    }
    let right_budget = Budget {
        max_steps: match encode {
            Some(_) => budget.max_steps * 6 + 1,
            None => budget.max_steps + 1,
        },
        prune: budget.prune,
    };
    let alg = m1.algebra();
    let mut rows = Vec::new();
    for s in inputs {
        let left = mode.eval(m1, s, budget)?;
        let s2 = match encode {
            Some(map) => encode_input(m1, m2, map, s)?,
            None => {
                m2.input_from_names(&s.iter().map(|&c| m1.symbol_name(c)).collect::<Vec<_>>())?
            }
        };
        let right = mode.eval(m2, &s2, &right_budget)?;
        let verdict = row_verdict(alg, Relation::Equal, &left, &right);
        rows.push(EquivRow {
            input: m1.format_input(s),
            left,
            right,
            verdict,
        });
    }
    Ok(EquivReport {
        left: m1.name().to_string(),
        right: m2.name().to_string(),
        mode: Some(mode),
        relation: Relation::Equal,
        algebra: alg.clone(),
        verdict: Verdict::combine(rows.iter().map(|r| r.verdict)),
        rows,
    })
}

/// `width ≤ depth` on each input where both runs are complete and defined.
pub fn order_check(m: &Machine, inputs: &[Vec<SymbolId>], budget: &Budget) -> Result<EquivReport> {
    let alg = m.algebra();
    let mut rows = Vec::new();
    for s in inputs {
        let left = eval_width(m, s, budget)?;
        let right = eval_depth(m, s, budget)?;
        let verdict = row_verdict(alg, Relation::Leq, &left, &right);
        rows.push(EquivRow {
            input: m.format_input(s),
            left,
            right,
            verdict,
        });
    }
    Ok(EquivReport {
        left: format!("{} (width)", m.name()),
        right: format!("{} (depth)", m.name()),
        mode: None,
        relation: Relation::Leq,
        algebra: alg.clone(),
        verdict: Verdict::combine(rows.iter().map(|r| r.verdict)),
        rows,
    })
}
