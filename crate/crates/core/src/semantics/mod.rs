//! Depth-first and width-first E-valued languages under an exploration budget.
//!
//! A path starts at an initial configuration `q₀s`, follows effective
//! transitions and ends at a halting configuration. Its value is
//! `I(q₀) ⊞ δ₁ ⊞ … ⊞ δₙ ⊞ T(qₙ)`. Initial configurations that already halt
//! form zero-step paths worth `I(q₀) ⊞ T(q₀)`.
//!
//! Branches are told apart by transition label, so two different
//! transitions that happen to produce the same configuration are two paths.

mod depth;
mod width;

pub use depth::eval_depth;
pub use width::eval_width;

use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::algebra::{Element, FiniteAlgebra};
use crate::machine::{Configuration, Machine, MachineError};

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("max_steps must be at least 1")]
    ZeroBudget,
    #[error("algebra `{0}` is not lattice-ordered, so ∧ over paths is undefined")]
    NotALattice(String),
    #[error("step {0} of the path is not effective")]
    NotEffective(usize),
    #[error("configuration {0} of the path halts before the end")]
    HaltsEarly(usize),
    #[error("the path does not end in a halting configuration")]
    NotHalting,
    #[error("the path does not start in an initial configuration")]
    NotInitial,
    #[error("the path is empty")]
    EmptyPath,
    #[error("step value {0} lies outside R_M")]
    OutsideRange(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

pub type Result<T, E = SemanticsError> = std::result::Result<T, E>;

/// Exploration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Longest path (depth-first) or deepest level (width-first) explored.
    pub max_steps: usize,
    /// Dominance pruning for depth-first search. Ignored when the algebra
    /// fails the monotone-addition probe.
    pub prune: bool,
}

impl Budget {
    pub fn new(max_steps: usize) -> Self {
        Budget {
            max_steps,
            prune: true,
        }
    }

    pub fn unpruned(max_steps: usize) -> Self {
        Budget {
            max_steps,
            prune: false,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(500)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EvalResult {
    /// ∧ over the halting paths found; `1` when there are none.
    pub value: Element,
    /// No non-halting configuration was cut off by the budget.
    pub complete: bool,
    /// At least one halting path exists.
    pub defined: bool,
    pub levels_explored: usize,
    pub paths_counted: usize,
    pub pruned_count: usize,
}

impl EvalResult {
    /// `complete ∧ defined`: the value is the language value exactly.
    pub fn is_exact(&self) -> bool {
        self.complete && self.defined
    }

    pub fn to_json(&self, alg: &FiniteAlgebra) -> serde_json::Value {
        json!({
            "value": alg.name_of(self.value),
            "complete": self.complete,
            "defined": self.defined,
            "levels": self.levels_explored,
            "paths": self.paths_counted,
            "pruned": self.pruned_count,
        })
    }

    pub fn display<'a>(&'a self, alg: &'a FiniteAlgebra) -> impl fmt::Display + 'a {
        DisplayResult(self, alg)
    }
}

struct DisplayResult<'a>(&'a EvalResult, &'a FiniteAlgebra);

impl fmt::Display for DisplayResult<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        let value = if r.defined {
            self.1.name_of(r.value)
        } else {
            "undefined"
        };
        write!(f, "{value}")?;
        if !r.complete {
            write!(f, " (incomplete)")?;
        }
        Ok(())
    }
}

/// Counts of each `R_M` value along a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KVector {
    pub basis: Vec<Element>,
    pub counts: Vec<u32>,
}

impl KVector {
    /// `v₁·x₁ ⊞ … ⊞ v_k·x_k`.
    pub fn value(&self, alg: &FiniteAlgebra) -> Element {
        let mut acc = alg.zero_ix();
        for (x, &n) in self.basis.iter().zip(&self.counts) {
            for _ in 0..n {
                acc = alg.add_ix(acc, x.index());
            }
        }
        alg.elem(acc)
    }
}

/// `v ≤ w` componentwise. Vectors of different lengths are incomparable.
pub fn dominates(v: &[u32], w: &[u32]) -> bool {
    v.len() == w.len() && v.iter().zip(w).all(|(a, b)| a <= b)
}

fn require_lattice(m: &Machine) -> Result<()> {
    if m.algebra().is_lattice() {
        Ok(())
    } else {
        Err(SemanticsError::NotALattice(m.algebra().name().to_string()))
    }
}

/// The values along a path: `I(q₀)`, each step, then `T(St(Cₙ))`.
fn path_labels(m: &Machine, path: &[Configuration]) -> Result<Vec<Element>> {
    let first = path.first().ok_or(SemanticsError::EmptyPath)?;
    let alg = m.algebra();
    if !first.left().is_empty() || alg.is_one(m.initial_value(first.state())) {
        return Err(SemanticsError::NotInitial);
    }
    let mut values = vec![m.initial_value(first.state())];
    for (i, pair) in path.windows(2).enumerate() {
        if m.is_halting(&pair[0]) {
            return Err(SemanticsError::HaltsEarly(i));
        }
        let v = m.delta_star(&pair[0], &pair[1]);
        if alg.is_one(v) {
            return Err(SemanticsError::NotEffective(i + 1));
        }
        values.push(v);
    }
    let last = path.last().unwrap();
    if !m.is_halting(last) {
        return Err(SemanticsError::NotHalting);
    }
    values.push(m.final_value(last.state()));
    Ok(values)
}

/// `I(q₀) ⊞ δ*(C₀, C₁) ⊞ … ⊞ T(St(Cₙ))` for a halting path `C₀ … Cₙ`.
pub fn path_value(m: &Machine, path: &[Configuration]) -> Result<Element> {
    let alg = m.algebra();
    let values = path_labels(m, path)?;
    Ok(alg.elem(
        values
            .iter()
            .fold(alg.zero_ix(), |acc, v| alg.add_ix(acc, v.index())),
    ))
}

/// The k-vector of a halting path over the basis `R_M`.
pub fn path_vector(m: &Machine, path: &[Configuration]) -> Result<KVector> {
    let basis: Vec<Element> = m.machine_range().iter().collect();
    let mut counts = vec![0u32; basis.len()];
    for v in path_labels(m, path)? {
        let slot = basis
            .iter()
            .position(|&x| x == v)
            .ok_or_else(|| SemanticsError::OutsideRange(m.algebra().name_of(v).to_string()))?;
        counts[slot] += 1;
    }
    Ok(KVector { basis, counts })
}
