//! Machine constructions: classical initial and final functions, classical
//! transitions (width-first and depth-first versions), the order
//! counterexample machine and the acceptance wrapper.

mod depth;
mod width;

pub use depth::{classicalize_transitions_depth, encode_input};
pub use width::{classicalize_transitions_width, WidthVariant};

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, FiniteAlgebra};
use crate::machine::{Machine, MachineDef, MachineError, Move, TransitionDef};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("more than {0} function states")]
    StateLimit(usize),
    #[error("base machine is not classical: {0}")]
    NotClassical(String),
    #[error("x must lie strictly between 0 and 1")]
    NotStrictlyBetween,
    #[error("algebra `{0}` is not lattice-ordered")]
    NotALattice(String),
}

pub type Result<T, E = TransformError> = std::result::Result<T, E>;

/// Metadata written next to a transformed machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Sidecar {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub source: String,
    pub states: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_m_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_plus_size: Option<usize>,
    /// Input symbol of the source machine to input symbol of the output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<BTreeMap<String, String>>,
}

impl Sidecar {
    pub fn new(kind: &str, source: &Machine, out: &Machine) -> Self {
        Sidecar {
            kind: kind.to_string(),
            source: source.name().to_string(),
            states: out.states().len(),
            ..Default::default()
        }
    }
}

/// `base`, or `base` followed by enough primes to avoid `taken`.
pub(crate) fn fresh(base: &str, taken: &HashSet<&str>) -> String {
    let mut name = base.to_string();
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    name
}

/// A new unique initial state `pI` with `I = 0` and `T = 1`, bridging with
/// `δ(pI, a, q, a, S) = I(q)` for every `a ∈ Γ`. The old states get `I = 1`.
pub fn classicalize_initial(m: &Machine) -> Machine {
    let mut def = m.to_def();
    let taken: HashSet<&str> = m.states().iter().map(String::as_str).collect();
    let pi = fresh("pI", &taken);
    let initial = std::mem::take(&mut def.initial);
    for (q, &v) in &initial {
        for a in &def.tape_alphabet {
            def.transitions
                .push(TransitionDef::new(&pi, a, q, a, Move::S, v));
        }
    }
    def.states.insert(0, pi.clone());
    def.initial = BTreeMap::from([(pi, m.algebra().zero())]);
    def.name = format!("{}_I", m.name());
    def.build()
        .expect("classicalize_initial preserves validity")
}

/// States become `(p,T(p))`; transitions into `q` with `T(q) ≠ 1` absorb
/// `T(q)`; the new `T` is `0` where the old one was not `1`.
///
/// When `T(p) ≠ 1` the initial value of `(p,T(p))` is `I(p) ⊞ T(p)`, so that
/// a run halting immediately in `p` keeps its value.
pub fn classicalize_final(m: &Machine) -> Machine {
    let alg = m.algebra();
    let def = m.to_def();
    let rename = |p: &str| -> String {
        let t = m.final_value(m.state_id(p).unwrap());
        format!("({},{})", p, alg.name_of(t))
    };
    let t_of = |p: &str| m.final_value(m.state_id(p).unwrap());
    let add = |a: Element, b: Element| alg.boxplus(a, b).expect("same algebra");
    let out = MachineDef {
        name: format!("{}_T", m.name()),
        algebra: alg.clone(),
        states: def.states.iter().map(|p| rename(p)).collect(),
        input_alphabet: def.input_alphabet.clone(),
        tape_alphabet: def.tape_alphabet.clone(),
        blank: def.blank.clone(),
        initial: def
            .initial
            .iter()
            .map(|(p, &v)| {
                let t = t_of(p);
                let v = if alg.is_one(t) { v } else { add(v, t) };
                (rename(p), v)
            })
            .collect(),
        final_values: def
            .final_values
            .keys()
            .map(|p| (rename(p), alg.zero()))
            .collect(),
        transitions: def
            .transitions
            .iter()
            .map(|t| {
                let tq = t_of(&t.to);
                let value = if alg.is_one(tq) {
                    t.value
                } else {
                    add(t.value, tq)
                };
                TransitionDef::new(
                    &rename(&t.from),
                    &t.read,
                    &rename(&t.to),
                    &t.write,
                    t.mv,
                    value,
                )
            })
            .collect(),
    };
    out.build().expect("classicalize_final preserves validity")
}

/// `classicalize_final ∘ classicalize_initial`.
pub fn classicalize_both(m: &Machine) -> Machine {
    classicalize_final(&classicalize_initial(m))
}

/// The three-state machine separating the two semantics:
/// depth value `(a ⊞ b) ∧ (a ⊞ c)`, width value `(b ∧ c) ⊞ a` on input `s`.
pub fn counterexample_machine(
    alg: &Arc<FiniteAlgebra>,
    a: Element,
    b: Element,
    c: Element,
) -> Result<Machine> {
    for e in [a, b, c] {
        if !alg.owns(e) {
            return Err(AlgebraError::Mismatch.into());
        }
    }
    let def = MachineDef {
        name: format!(
            "mprop_{}_{}_{}_{}",
            alg.name(),
            alg.name_of(a),
            alg.name_of(b),
            alg.name_of(c)
        ),
        algebra: alg.clone(),
        states: vec!["q0".into(), "q1".into(), "q2".into()],
        input_alphabet: vec!["s".into()],
        tape_alphabet: vec!["B".into(), "s".into()],
        blank: "B".into(),
        initial: [("q0", b), ("q1", c)]
            .into_iter()
            .filter(|(_, v)| !alg.is_one(*v))
            .map(|(q, v)| (q.to_string(), v))
            .collect(),
        final_values: if alg.is_one(a) {
            BTreeMap::new()
        } else {
            BTreeMap::from([("q2".to_string(), a)])
        },
        transitions: vec![
            TransitionDef::new("q0", "s", "q2", "s", Move::R, alg.zero()),
            TransitionDef::new("q1", "s", "q2", "s", Move::R, alg.zero()),
        ],
    };
    Ok(def.build()?)
}

/// Runs a classical base machine alongside a branch that halts at once with
/// value `x`.
///
/// The base must have `0`/`1` values only, a single initial state, and
/// accept by `T = 0`. Fresh states `qI` and `qT` are added, with
/// `δ(qI, a, p_I, a, S) = δ(qI, a, qT, a, S) = 0` for `a ∈ Σ` and
/// `T(qT) = x`. The result has depth value `0` on inputs the base accepts and
/// `x` on all others.
pub fn acceptance_wrapper(base: &Machine, x: Element) -> Result<Machine> {
    let alg = base.algebra();
    if !alg.owns(x) {
        return Err(AlgebraError::Mismatch.into());
    }
    if alg.is_zero(x) || alg.is_one(x) || !alg.leq(alg.zero(), x)? || !alg.leq(x, alg.one())? {
        return Err(TransformError::NotStrictlyBetween);
    }
    let class = base.classify();
    if !(class.classical_delta && class.classical_initial && class.classical_final) {
        return Err(TransformError::NotClassical(format!("{class:?}")));
    }
    let starts: Vec<_> = base
        .state_ids()
        .filter(|&q| alg.is_zero(base.initial_value(q)))
        .collect();
    if starts.len() != 1 {
        return Err(TransformError::NotClassical(format!(
            "{} initial states",
            starts.len()
        )));
    }
    let start = base.state_name(starts[0]).to_string();
    let mut def = base.to_def();
    let taken: HashSet<&str> = base.states().iter().map(String::as_str).collect();
    let qi = fresh("qI", &taken);
    let qt = fresh("qT", &taken);
    for a in &def.input_alphabet {
        def.transitions
            .push(TransitionDef::new(&qi, a, &start, a, Move::S, alg.zero()));
        def.transitions
            .push(TransitionDef::new(&qi, a, &qt, a, Move::S, alg.zero()));
    }
    def.states.insert(0, qi.clone());
    def.states.push(qt.clone());
    def.initial = BTreeMap::from([(qi, alg.zero())]);
    def.final_values.insert(qt, x);
    def.name = format!("wrap_{}", base.name());
    Ok(def.build()?)
}
