use std::sync::Arc;

use crate::algebra::{Builtin, CheckMode, Family, FiniteAlgebra};
use crate::machine::{Machine, MachineDef, Move, SymbolId, TransitionDef};
use crate::semantics::Budget;
use crate::transforms::{acceptance_wrapper, counterexample_machine};

/// A machine with the inputs and budget it is checked on.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub machine: Machine,
    pub inputs: Vec<Vec<SymbolId>>,
    pub budget: Budget,
}

impl Fixture {
    pub fn new(machine: Machine, max_len: usize) -> Self {
        Fixture {
            name: machine.name().to_string(),
            inputs: all_inputs(&machine, max_len),
            machine,
            budget: Budget::default(),
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.machine.algebra()
    }

    pub fn has(&self, f: Family) -> bool {
        self.algebra()
            .check_axioms(f, CheckMode::FirstViolation)
            .map(|r| r.pass)
            .unwrap_or(false)
    }
}

/// Every non-empty word over the input alphabet up to `max_len`, shortest
/// first.
pub fn all_inputs(m: &Machine, max_len: usize) -> Vec<Vec<SymbolId>> {
    let sigma = m.input_alphabet();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<SymbolId>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                sigma.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub fixtures: Vec<Fixture>,
}

fn algebra(name: &str) -> Arc<FiniteAlgebra> {
    Arc::new(
        name.parse::<Builtin>()
            .and_then(|b| b.build())
            .expect("built-in algebra"),
    )
}

type Row<'a> = (&'a str, &'a str, &'a str, &'a str, Move, &'a str);

/// `states` are `(name, I, T)` with `"-"` for `1`; the tape alphabet is the
/// blank `B` followed by `symbols`.
fn build(
    name: &str,
    alg: &Arc<FiniteAlgebra>,
    states: &[(&str, &str, &str)],
    symbols: &[&str],
    extra_tape: &[&str],
    delta: &[Row],
) -> Machine {
    // `0` and `1` also name the bounds of product algebras.
    let el = |n: &str| match n {
        "0" => alg.zero(),
        "1" => alg.one(),
        n => alg.element(n).expect("element of the fixture algebra"),
    };
    let mut tape = vec!["B".to_string()];
    tape.extend(symbols.iter().chain(extra_tape).map(|s| s.to_string()));
    MachineDef {
        name: name.to_string(),
        algebra: alg.clone(),
        states: states.iter().map(|s| s.0.to_string()).collect(),
        input_alphabet: symbols.iter().map(|s| s.to_string()).collect(),
        tape_alphabet: tape,
        blank: "B".into(),
        initial: states
            .iter()
            .filter(|s| s.1 != "-")
            .map(|s| (s.0.to_string(), el(s.1)))
            .collect(),
        final_values: states
            .iter()
            .filter(|s| s.2 != "-")
            .map(|s| (s.0.to_string(), el(s.2)))
            .collect(),
        transitions: delta
            .iter()
            .map(|&(p, r, q, w, d, v)| TransitionDef::new(p, r, q, w, d, el(v)))
            .collect(),
    }
    .build()
    .expect("fixture machine is well formed")
}

/// Two start states scanning right; `r0` charges for each `b`, `r1` for
/// each `a`, and `r0` may hand over to `r1` on any `a`. Both tracks end in
/// the same halting configuration.
/// `v = [I(r0), I(r1), δ(r0,b), δ(r1,a), T(h)]`.
pub fn scan_machine(alg: &Arc<FiniteAlgebra>, v: [&str; 5]) -> Machine {
    use Move::*;
    build(
        &format!("scan_{}", alg.name()),
        alg,
        &[("r0", v[0], "-"), ("r1", v[1], "-"), ("h", "-", v[4])],
        &["a", "b"],
        &[],
        &[
            ("r0", "a", "r0", "a", R, "0"),
            ("r0", "a", "r1", "a", R, "0"),
            ("r0", "b", "r0", "b", R, v[2]),
            ("r0", "B", "h", "B", S, "0"),
            ("r1", "a", "r1", "a", R, v[3]),
            ("r1", "b", "r1", "b", R, "0"),
            ("r1", "B", "h", "B", S, "0"),
        ],
    )
}

/// Steps off the left end of the tape, comes back and scans right charging
/// for each `a`. `v = [δ(l0,a), δ(l1,B), T(h)]`.
pub fn edge_machine(alg: &Arc<FiniteAlgebra>, v: [&str; 3]) -> Machine {
    use Move::*;
    build(
        &format!("edge_{}", alg.name()),
        alg,
        &[
            ("l0", "0", "-"),
            ("l1", "-", "-"),
            ("l2", "-", "-"),
            ("h", "-", v[2]),
        ],
        &["a", "b"],
        &[],
        &[
            ("l0", "a", "l1", "b", L, v[0]),
            ("l0", "b", "l2", "b", R, v[1]),
            ("l1", "B", "l2", "a", R, v[1]),
            ("l2", "b", "l2", "b", R, "0"),
            ("l2", "a", "l2", "a", R, v[0]),
            ("l2", "B", "h", "B", L, "0"),
        ],
    )
}

/// `c0` and `c1` bounce on a stationary head over an `a`; `c1` spins forever
/// on `b`. Leaving the loop, `c2` scans right charging for each `b`.
/// `v = [δ(c0,a→c1), δ(c2,b), T(h)]`.
pub fn cycle_machine(alg: &Arc<FiniteAlgebra>, v: [&str; 3]) -> Machine {
    use Move::*;
    build(
        &format!("cycle_{}", alg.name()),
        alg,
        &[
            ("c0", "0", "-"),
            ("c1", "-", "-"),
            ("c2", "-", "-"),
            ("h", "-", v[2]),
        ],
        &["a", "b"],
        &[],
        &[
            ("c0", "a", "c1", "a", S, v[0]),
            ("c1", "a", "c0", "a", S, "0"),
            ("c0", "a", "c2", "a", R, "0"),
            ("c0", "b", "c2", "b", R, v[1]),
            ("c1", "b", "c1", "b", S, "0"),
            ("c2", "a", "c2", "a", R, "0"),
            ("c2", "b", "c2", "b", R, v[1]),
            ("c2", "B", "h", "B", S, "0"),
        ],
    )
}

/// Two histories that write different symbols and then the same one, so
/// they meet in a single configuration. `v = [δ(first), δ(second), T(r2)]`.
pub fn converge_machine(alg: &Arc<FiniteAlgebra>, v: [&str; 3]) -> Machine {
    use Move::*;
    build(
        &format!("converge_{}", alg.name()),
        alg,
        &[("p0", "0", "-"), ("r1", "-", "-"), ("r2", "-", v[2])],
        &["a"],
        &["c", "d", "e"],
        &[
            ("p0", "a", "r1", "c", S, v[0]),
            ("p0", "a", "r1", "d", S, v[1]),
            ("r1", "c", "r2", "e", S, "0"),
            ("r1", "d", "r2", "e", S, "0"),
        ],
    )
}

/// Classical machine accepting (by `T = 0`) words containing `11`.
pub fn contains_11(alg: &Arc<FiniteAlgebra>) -> Machine {
    use Move::*;
    build(
        "contains_11",
        alg,
        &[("s0", "0", "-"), ("s1", "-", "-"), ("acc", "-", "0")],
        &["0", "1"],
        &[],
        &[
            ("s0", "0", "s0", "0", R, "0"),
            ("s0", "1", "s1", "1", R, "0"),
            ("s1", "0", "s0", "0", R, "0"),
            ("s1", "1", "acc", "1", S, "0"),
        ],
    )
}

impl Corpus {
    /// Fixed fixtures over `L3`, `L4`, `D4` and `L2xL3`, inputs up to length
    /// 4, budget 500 steps. Every run on them finishes within the budget.
    pub fn standard() -> Corpus {
        let l3 = algebra("L3");
        let l4 = algebra("L4");
        let d4 = algebra("D4");
        let prod = algebra("L2xL3");
        let mprop = |a: &Arc<FiniteAlgebra>, x: &str, y: &str, z: &str| {
            let e = |n: &str| a.element(n).expect("element");
            Fixture::new(
                counterexample_machine(a, e(x), e(y), e(z)).expect("mprop"),
                1,
            )
        };
        let wrapper = acceptance_wrapper(&contains_11(&l3), l3.element("1/2").expect("1/2"))
            .expect("wrapper");
        let fixtures = vec![
            mprop(&l3, "1/2", "1/2", "1/2"),
            mprop(&l4, "1/3", "1/3", "2/3"),
            mprop(&d4, "p", "p", "q"),
            mprop(&prod, "(1,0)", "(0,1/2)", "(1,1/2)"),
            Fixture::new(scan_machine(&l4, ["0", "1/3", "1/3", "1/3", "0"]), 4),
            Fixture::new(scan_machine(&d4, ["0", "0", "p", "q", "p"]), 4),
            Fixture::new(
                scan_machine(&prod, ["0", "(1,0)", "(0,1/2)", "(0,1/2)", "0"]),
                4,
            ),
            Fixture::new(edge_machine(&l3, ["1/2", "0", "0"]), 4),
            Fixture::new(edge_machine(&d4, ["p", "q", "0"]), 4),
            Fixture::new(cycle_machine(&l4, ["1/3", "1/3", "0"]), 4),
            Fixture::new(cycle_machine(&d4, ["p", "q", "0"]), 4),
            Fixture::new(converge_machine(&l3, ["0", "1/2", "1/2"]), 4),
            Fixture::new(converge_machine(&d4, ["p", "q", "p"]), 4),
            Fixture::new(wrapper, 4),
        ];
        Corpus { fixtures }
    }

    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }
}
