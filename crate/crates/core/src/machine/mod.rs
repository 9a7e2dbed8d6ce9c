//! E-valued Turing machines: data model, single-step semantics, reachability
//! and classification.
//!
//! `δ`, `I` and `T` are total maps into the machine's algebra; only entries
//! whose value differs from `1` are stored. A transition whose value is `1`
//! is ineffective and never produces a successor.

mod config;

pub use config::{Configuration, Move, StateId, SymbolId};

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{
    AlgebraError, AxiomReport, Element, ElementSet, Family, FiniteAlgebra, Violation,
};

/// A transition tuple `(p, a, q, b, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    pub read: SymbolId,
    pub to: StateId,
    pub write: SymbolId,
    pub mv: Move,
}

/// A transition together with its value `δ(p, a, q, b, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransitionLabel {
    pub transition: Transition,
    pub value: Element,
}

/// Name-based machine description, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineDef {
    pub name: String,
    pub algebra: Arc<FiniteAlgebra>,
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub tape_alphabet: Vec<String>,
    pub blank: String,
    /// Missing states have initial value `1`.
    pub initial: BTreeMap<String, Element>,
    /// Missing states have final value `1`.
    pub final_values: BTreeMap<String, Element>,
    pub transitions: Vec<TransitionDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDef {
    pub from: String,
    pub read: String,
    pub to: String,
    pub write: String,
    pub mv: Move,
    pub value: Element,
}

impl TransitionDef {
    pub fn new(from: &str, read: &str, to: &str, write: &str, mv: Move, value: Element) -> Self {
        TransitionDef {
            from: from.to_string(),
            read: read.to_string(),
            to: to.to_string(),
            write: write.to_string(),
            mv,
            value,
        }
    }
}

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("invalid machine: {0}")]
    Invalid(AxiomReport),
    #[error("input must be non-empty")]
    EmptyInput,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is not in the input alphabet")]
    NotInputSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which parts of a machine take only the values `0` and `1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Classification {
    pub deterministic: bool,
    pub classical_delta: bool,
    pub classical_initial: bool,
    pub classical_final: bool,
}

impl MachineDef {
    /// Checks the structural invariants; the report lists every problem found.
    pub fn validate(&self) -> AxiomReport {
        let mut out = Vec::new();
        let mut bad = |axiom: &str, witness: Vec<String>, lhs: String, rhs: &str| {
            out.push(Violation {
                axiom: axiom.to_string(),
                witness,
                lhs,
                rhs: rhs.to_string(),
            })
        };
        if self.states.is_empty() {
            bad("Q≠∅", vec![], "no states".into(), "at least one state");
        }
        let mut states = HashSet::new();
        for s in &self.states {
            if s.is_empty() || !states.insert(s.as_str()) {
                bad(
                    "unique-state",
                    vec![s.clone()],
                    "duplicate or empty".into(),
                    "unique name",
                );
            }
        }
        let mut tape = HashSet::new();
        for s in &self.tape_alphabet {
            if s.is_empty() || !tape.insert(s.as_str()) {
                bad(
                    "unique-symbol",
                    vec![s.clone()],
                    "duplicate or empty".into(),
                    "unique name",
                );
            }
        }
        if !tape.contains(self.blank.as_str()) {
            bad(
                "B∈Γ",
                vec![self.blank.clone()],
                "blank not in Γ".into(),
                "B∈Γ",
            );
        }
        let mut input = HashSet::new();
        for s in &self.input_alphabet {
            if !input.insert(s.as_str()) {
                bad(
                    "unique-input",
                    vec![s.clone()],
                    "duplicate".into(),
                    "unique name",
                );
            }
            if *s == self.blank || !tape.contains(s.as_str()) {
                bad(
                    "Σ⊆Γ\\{B}",
                    vec![s.clone()],
                    format!("{s} ∉ Γ\\{{B}}"),
                    "Σ⊆Γ\\{B}",
                );
            }
        }
        let alg = &self.algebra;
        let check_value =
            |what: &str, witness: Vec<String>, e: Element, out: &mut Vec<Violation>| {
                if !alg.owns(e) {
                    out.push(Violation {
                        axiom: "value∈E".into(),
                        witness,
                        lhs: format!("{what} value from algebra {}", e.algebra()),
                        rhs: format!("algebra {}", alg.id()),
                    });
                }
            };
        let mut out2 = Vec::new();
        for (map, what) in [(&self.initial, "I"), (&self.final_values, "T")] {
            for (s, &e) in map {
                if !states.contains(s.as_str()) {
                    out2.push(Violation {
                        axiom: "declared-state".into(),
                        witness: vec![s.clone()],
                        lhs: format!("{what} refers to undeclared state"),
                        rhs: "declared state".into(),
                    });
                }
                check_value(what, vec![s.clone()], e, &mut out2);
            }
        }
        let mut seen = HashSet::new();
        for t in &self.transitions {
            let witness = vec![
                t.from.clone(),
                t.read.clone(),
                t.to.clone(),
                t.write.clone(),
                t.mv.to_string(),
            ];
            for s in [&t.from, &t.to] {
                if !states.contains(s.as_str()) {
                    out2.push(Violation {
                        axiom: "declared-state".into(),
                        witness: witness.clone(),
                        lhs: format!("undeclared state {s}"),
                        rhs: "declared state".into(),
                    });
                }
            }
            for s in [&t.read, &t.write] {
                if !tape.contains(s.as_str()) {
                    out2.push(Violation {
                        axiom: "declared-symbol".into(),
                        witness: witness.clone(),
                        lhs: format!("undeclared symbol {s}"),
                        rhs: "declared symbol".into(),
                    });
                }
            }
            if !seen.insert((&t.from, &t.read, &t.to, &t.write, t.mv)) {
                out2.push(Violation {
                    axiom: "unique-transition".into(),
                    witness: witness.clone(),
                    lhs: "duplicate key".into(),
                    rhs: "one entry per (p,a,q,b,D)".into(),
                });
            }
            check_value("δ", witness, t.value, &mut out2);
        }
        out.extend(out2);
        AxiomReport::new(Family::Machine, out)
    }

    pub fn build(&self) -> Result<Machine, MachineError> {
        let report = self.validate();
        if !report.pass {
            return Err(MachineError::Invalid(report));
        }
        Ok(Machine::from_valid(self))
    }
}

/// A validated E-valued Turing machine.
#[derive(Debug, Clone)]
pub struct Machine {
    name: String,
    algebra: Arc<FiniteAlgebra>,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    symbols: Vec<String>,
    symbol_index: HashMap<String, SymbolId>,
    input: Vec<SymbolId>,
    blank: SymbolId,
    initial: Vec<Element>,
    final_values: Vec<Element>,
    delta: BTreeMap<Transition, Element>,
    /// Effective transitions per `(state, scanned)`, sorted by `(q, b, D)` names.
    outgoing: Vec<Vec<TransitionLabel>>,
}

impl Machine {
    fn from_valid(def: &MachineDef) -> Self {
        let alg = def.algebra.clone();
        let one = alg.one();
        let state_index: HashMap<String, StateId> = def
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), StateId(i as u32)))
            .collect();
        let symbol_index: HashMap<String, SymbolId> = def
            .tape_alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), SymbolId(i as u32)))
            .collect();
        let mut input: Vec<SymbolId> = def.input_alphabet.iter().map(|s| symbol_index[s]).collect();
        input.sort();
        let mut initial = vec![one; def.states.len()];
        for (s, &e) in &def.initial {
            initial[state_index[s].index()] = e;
        }
        let mut final_values = vec![one; def.states.len()];
        for (s, &e) in &def.final_values {
            final_values[state_index[s].index()] = e;
        }
        let mut delta = BTreeMap::new();
        for t in &def.transitions {
            if alg.is_one(t.value) {
                continue;
            }
            let tr = Transition {
                from: state_index[&t.from],
                read: symbol_index[&t.read],
                to: state_index[&t.to],
                write: symbol_index[&t.write],
                mv: t.mv,
            };
            delta.insert(tr, t.value);
        }
        let ns = def.tape_alphabet.len();
        let mut outgoing = vec![Vec::new(); def.states.len() * ns];
        for (&transition, &value) in &delta {
            outgoing[transition.from.index() * ns + transition.read.index()]
                .push(TransitionLabel { transition, value });
        }
        for list in &mut outgoing {
            list.sort_by(|x, y| {
                let (a, b) = (x.transition, y.transition);
                (
                    &def.states[a.to.index()],
                    &def.tape_alphabet[a.write.index()],
                    a.mv,
                )
                    .cmp(&(
                        &def.states[b.to.index()],
                        &def.tape_alphabet[b.write.index()],
                        b.mv,
                    ))
            });
        }
        Machine {
            name: def.name.clone(),
            algebra: alg,
            states: def.states.clone(),
            state_index,
            symbols: def.tape_alphabet.clone(),
            symbol_index: symbol_index.clone(),
            input,
            blank: symbol_index[&def.blank],
            initial,
            final_values,
            delta,
            outgoing,
        }
    }

    /// Back to a name-based description listing only non-`1` entries.
    pub fn to_def(&self) -> MachineDef {
        let one = self.algebra.one();
        let named = |values: &[Element]| {
            values
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != one)
                .map(|(i, &e)| (self.states[i].clone(), e))
                .collect()
        };
        MachineDef {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            states: self.states.clone(),
            input_alphabet: self
                .input
                .iter()
                .map(|&s| self.symbol_name(s).to_string())
                .collect(),
            tape_alphabet: self.symbols.clone(),
            blank: self.symbol_name(self.blank).to_string(),
            initial: named(&self.initial),
            final_values: named(&self.final_values),
            transitions: self
                .delta
                .iter()
                .map(|(t, &value)| TransitionDef {
                    from: self.state_name(t.from).to_string(),
                    read: self.symbol_name(t.read).to_string(),
                    to: self.state_name(t.to).to_string(),
                    write: self.symbol_name(t.write).to_string(),
                    mv: t.mv,
                    value,
                })
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn tape_alphabet(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn input_alphabet(&self) -> &[SymbolId] {
        &self.input
    }

    pub fn blank(&self) -> SymbolId {
        self.blank
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.symbols[s.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymbolId> {
        self.symbol_index.get(name).copied()
    }

    pub fn initial_value(&self, s: StateId) -> Element {
        self.initial[s.index()]
    }

    pub fn final_value(&self, s: StateId) -> Element {
        self.final_values[s.index()]
    }

    /// `δ(p, a, q, b, D)`, `1` when absent.
    pub fn delta(&self, t: &Transition) -> Element {
        self.delta
            .get(t)
            .copied()
            .unwrap_or_else(|| self.algebra.one())
    }

    /// All effective transitions in key order.
    pub fn transitions(&self) -> impl Iterator<Item = TransitionLabel> + '_ {
        self.delta
            .iter()
            .map(|(&transition, &value)| TransitionLabel { transition, value })
    }

    /// Effective transitions from `(state, read)` in successor order.
    pub fn outgoing(&self, state: StateId, read: SymbolId) -> &[TransitionLabel] {
        &self.outgoing[state.index() * self.symbols.len() + read.index()]
    }

    /// Resolves symbol names to ids, requiring every symbol to be in `Σ`.
    pub fn input_from_names<S: AsRef<str>>(
        &self,
        names: &[S],
    ) -> Result<Vec<SymbolId>, MachineError> {
        if names.is_empty() {
            return Err(MachineError::EmptyInput);
        }
        names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                let id = self
                    .symbol_id(n)
                    .ok_or_else(|| MachineError::UnknownSymbol(n.to_string()))?;
                if self.input.contains(&id) {
                    Ok(id)
                } else {
                    Err(MachineError::NotInputSymbol(n.to_string()))
                }
            })
            .collect()
    }

    /// Parses an input string: comma-separated symbol names (commas inside
    /// parentheses do not separate), or one symbol per character.
    pub fn parse_input(&self, text: &str) -> Result<Vec<SymbolId>, MachineError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(MachineError::EmptyInput);
        }
        let pieces = split_symbols(text);
        if pieces.len() > 1 || self.symbol_id(text).is_some() {
            return self.input_from_names(&pieces);
        }
        let chars: Vec<String> = text.chars().map(String::from).collect();
        self.input_from_names(&chars)
    }

    /// Renders an input as it would be typed on the command line.
    pub fn format_input(&self, input: &[SymbolId]) -> String {
        let names: Vec<&str> = input.iter().map(|&s| self.symbol_name(s)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(",")
        }
    }

    pub fn render(&self, c: &Configuration) -> String {
        let mut parts: Vec<&str> = c.left().iter().map(|&s| self.symbol_name(s)).collect();
        let state = format!("<{}>", self.state_name(c.state()));
        parts.push(&state);
        parts.extend(c.right().iter().map(|&s| self.symbol_name(s)));
        parts.join(" ")
    }

    /// Value of moving from `c1` to `c2` in one step, `1` if no transition
    /// pattern matches.
    ///
    /// Decompositions are unique except when the step leaves an entirely
    /// blank tape, where `(q, B, L)`, `(q, B, S)` and `(q, B, R)` all produce
    /// the bare configuration `q`; then the lattice meet of the matching
    /// values is returned.
    pub fn delta_star(&self, c1: &Configuration, c2: &Configuration) -> Element {
        let alg = &self.algebra;
        let mut value = alg.one_ix();
        for label in self.outgoing(c1.state(), c1.scanned(self.blank)) {
            let t = label.transition;
            if t.to == c2.state() && c1.step(t.to, t.write, t.mv, self.blank) == *c2 {
                value = if alg.is_lattice() {
                    alg.meet_ix(value, label.value.index())
                } else {
                    label.value.index()
                };
            }
        }
        alg.elem(value)
    }

    /// Configurations reachable in one effective step, in `(q, b, D)` order.
    pub fn effective_successors(&self, c: &Configuration) -> Vec<(Configuration, TransitionLabel)> {
        self.outgoing(c.state(), c.scanned(self.blank))
            .iter()
            .map(|&label| {
                let t = label.transition;
                (c.step(t.to, t.write, t.mv, self.blank), label)
            })
            .collect()
    }

    pub fn has_successors(&self, c: &Configuration) -> bool {
        !self.outgoing(c.state(), c.scanned(self.blank)).is_empty()
    }

    /// A machine halts in a state with `T < 1`, or when no effective
    /// transition applies.
    pub fn is_halting(&self, c: &Configuration) -> bool {
        !self.algebra.is_one(self.final_value(c.state())) || !self.has_successors(c)
    }

    /// `(q₀ s, I(q₀))` for every state with `I(q₀) ≠ 1`.
    pub fn initial_distribution(
        &self,
        input: &[SymbolId],
    ) -> Result<Vec<(Configuration, Element)>, MachineError> {
        self.check_input(input)?;
        Ok(self
            .state_ids()
            .filter(|&q| !self.algebra.is_one(self.initial_value(q)))
            .map(|q| {
                (
                    Configuration::initial(q, input, self.blank),
                    self.initial_value(q),
                )
            })
            .collect())
    }

    fn check_input(&self, input: &[SymbolId]) -> Result<(), MachineError> {
        if input.is_empty() {
            return Err(MachineError::EmptyInput);
        }
        for &s in input {
            if !self.input.contains(&s) {
                let name = self
                    .symbols
                    .get(s.index())
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", s.0));
                return Err(MachineError::NotInputSymbol(name));
            }
        }
        Ok(())
    }

    /// Configurations reachable by exactly `n` effective steps, never
    /// expanding past a halting configuration.
    pub fn reachable_ids(
        &self,
        input: &[SymbolId],
        n: usize,
    ) -> Result<BTreeSet<Configuration>, MachineError> {
        let mut level: BTreeSet<Configuration> = self
            .initial_distribution(input)?
            .into_iter()
            .map(|(c, _)| c)
            .collect();
        for _ in 0..n {
            level = level
                .iter()
                .filter(|c| !self.is_halting(c))
                .flat_map(|c| self.effective_successors(c))
                .map(|(c, _)| c)
                .collect();
        }
        Ok(level)
    }

    /// `R_M = R(I) ∪ R(δ) ∪ R(T)`, always including the default value `1`.
    pub fn machine_range(&self) -> ElementSet {
        let mut set = ElementSet::empty(&self.algebra);
        let values = self
            .initial
            .iter()
            .chain(&self.final_values)
            .chain(self.delta.values())
            .copied()
            .chain(std::iter::once(self.algebra.one()));
        for e in values {
            set.insert(e).expect("validated machine values");
        }
        set
    }

    pub fn classify(&self) -> Classification {
        let alg = &self.algebra;
        let classical = |e: &Element| alg.is_zero(*e) || alg.is_one(*e);
        Classification {
            deterministic: self.outgoing.iter().all(|l| l.len() <= 1),
            classical_delta: self.delta.values().all(classical),
            classical_initial: self.initial.iter().all(classical),
            classical_final: self.final_values.iter().all(classical),
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} over {}: {} states, {} symbols, {} transitions",
            self.name,
            self.algebra.name(),
            self.states.len(),
            self.symbols.len(),
            self.delta.len()
        )
    }
}

/// Splits on commas that are not nested inside parentheses.
pub(crate) fn split_symbols(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(ch),
        }
    }
    out.push(cur.trim().to_string());
    out
}
