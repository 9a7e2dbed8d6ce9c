use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;

use qmvtm::algebra::{Builtin, CheckMode, Element, Family, FiniteAlgebra};
use qmvtm::machine::{Configuration, Machine, MachineDef, Move, StateId, SymbolId, TransitionDef};
use qmvtm::semantics::{eval_depth, eval_width, Budget, EvalResult};
use qmvtm::transforms::{
    classicalize_final, classicalize_initial, classicalize_transitions_depth,
    classicalize_transitions_width, counterexample_machine, encode_input, WidthVariant,
};

const ALGEBRAS: [&str; 5] = ["L3", "L4", "D4", "L2xL3", "L2xL2"];

thread_local! {
    static BUILT: Vec<Arc<FiniteAlgebra>> = ALGEBRAS
        .iter()
        .map(|n| Arc::new(n.parse::<Builtin>().unwrap().build().unwrap()))
        .collect();
}

fn algebra(i: usize) -> Arc<FiniteAlgebra> {
    BUILT.with(|b| b[i].clone())
}

/// Raw choices for a random machine over `{B, a, b}` with input `{a, b}`.
#[derive(Debug, Clone)]
struct Shape {
    alg: usize,
    states: usize,
    initial: Vec<Option<usize>>,
    finals: Vec<Option<usize>>,
    /// For each `(state, read)` pair, up to three `(to, write, move, value)`.
    delta: Vec<Vec<(usize, usize, usize, usize)>>,
}

fn shape() -> impl Strategy<Value = Shape> {
    let alg = prop_oneof![2 => Just(2usize), 1 => 0..ALGEBRAS.len()];
    (alg, 1usize..=4).prop_flat_map(|(alg, n)| {
        let e = 0usize..9;
        (
            Just(alg),
            Just(n),
            e.clone(),
            proptest::collection::vec(proptest::option::weighted(0.4, e.clone()), n),
            proptest::collection::vec(proptest::option::weighted(0.4, e.clone()), n),
            proptest::collection::vec(
                proptest::collection::vec((0..n, 0usize..3, 0usize..3, e), 0..=3),
                n * 3,
            ),
        )
            .prop_map(|(alg, states, first, mut initial, finals, delta)| {
                // At least one start state.
                initial[0] = Some(first);
                Shape {
                    alg,
                    states,
                    initial,
                    finals,
                    delta,
                }
            })
    })
}

fn build(s: &Shape) -> Machine {
    let alg = algebra(s.alg);
    // Never pick the top element for a start value, so some start exists.
    let el = |i: usize| alg.elem(i % alg.size());
    let start = |i: usize| {
        let e = el(i);
        if alg.is_one(e) {
            alg.zero()
        } else {
            e
        }
    };
    let q = |i: usize| format!("q{i}");
    let sym = ["B", "a", "b"];
    let mut seen = BTreeSet::new();
    let mut transitions = Vec::new();
    for (k, list) in s.delta.iter().enumerate() {
        let (p, r) = (k / 3, k % 3);
        for &(to, w, d, v) in list {
            if seen.insert((p, r, to, w, d)) {
                transitions.push(TransitionDef::new(
                    &q(p),
                    sym[r],
                    &q(to),
                    sym[w],
                    Move::ALL[d],
                    el(v),
                ));
            }
        }
    }
    let values =
        |v: &[Option<usize>], pick: &dyn Fn(usize) -> Element| -> BTreeMap<String, Element> {
            v.iter()
                .enumerate()
                .filter_map(|(i, e)| e.map(|e| (q(i), pick(e))))
                .filter(|(_, e)| !alg.is_one(*e))
                .collect()
        };
    MachineDef {
        name: "rand".into(),
        algebra: alg.clone(),
        states: (0..s.states).map(q).collect(),
        input_alphabet: vec!["a".into(), "b".into()],
        tape_alphabet: sym.iter().map(|s| s.to_string()).collect(),
        blank: "B".into(),
        initial: values(&s.initial, &start),
        final_values: values(&s.finals, &el),
        transitions,
    }
    .build()
    .unwrap()
}

fn input() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1usize..3, 1..4)
}

fn ids(m: &Machine, raw: &[usize]) -> Vec<SymbolId> {
    let names: Vec<&str> = raw.iter().map(|&i| ["B", "a", "b"][i]).collect();
    m.input_from_names(&names).unwrap()
}

/// Every path up to `n` steps, folded left: `I ⊞ δ₁ ⊞ … ⊞ T`.
fn depth_oracle(m: &Machine, input: &[SymbolId], n: usize) -> (Element, bool, bool) {
    let alg = m.algebra();
    let mut value = alg.one();
    let mut complete = true;
    let mut defined = false;
    fn go(
        m: &Machine,
        c: &Configuration,
        acc: Element,
        depth: usize,
        n: usize,
        out: &mut (Element, bool, bool),
    ) {
        let alg = m.algebra();
        if m.is_halting(c) {
            let v = alg.boxplus(acc, m.final_value(c.state())).unwrap();
            out.0 = alg.meet(out.0, v).unwrap();
            out.2 = true;
            return;
        }
        if depth == n {
            out.1 = false;
            return;
        }
        for (next, label) in m.effective_successors(c) {
            go(
                m,
                &next,
                alg.boxplus(acc, label.value).unwrap(),
                depth + 1,
                n,
                out,
            );
        }
    }
    let mut out = (value, complete, defined);
    for (c, i) in m.initial_distribution(input).unwrap() {
        go(m, &c, i, 0, n, &mut out);
    }
    (value, complete, defined) = out;
    (value, complete, defined)
}

/// Levels merged by `∧`, with no repeat detection.
fn width_oracle(m: &Machine, input: &[SymbolId], n: usize) -> (Element, bool) {
    let alg = m.algebra();
    let mut level: BTreeMap<Configuration, Element> =
        m.initial_distribution(input).unwrap().into_iter().collect();
    let mut acc = alg.one();
    let mut complete = true;
    for k in 0..=n {
        let mut next: BTreeMap<Configuration, Element> = BTreeMap::new();
        for (c, w) in &level {
            if m.is_halting(c) {
                acc = alg
                    .meet(acc, alg.boxplus(*w, m.final_value(c.state())).unwrap())
                    .unwrap();
            } else if k == n {
                complete = false;
            } else {
                for (s, label) in m.effective_successors(c) {
                    let v = alg.boxplus(*w, label.value).unwrap();
                    let e = next.entry(s).or_insert(alg.one());
                    *e = alg.meet(*e, v).unwrap();
                }
            }
        }
        level = next;
    }
    (acc, complete)
}

fn has(alg: &FiniteAlgebra, f: Family) -> bool {
    alg.check_axioms(f, CheckMode::FirstViolation).unwrap().pass
}

fn agree(a: &EvalResult, b: &EvalResult) -> bool {
    !(a.complete && b.complete) || a.value == b.value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn canonical_form_is_idempotent(left in proptest::collection::vec(0u32..3, 0..6),
                                    right in proptest::collection::vec(0u32..3, 0..6)) {
        let blank = SymbolId(0);
        let wrap = |v: &[u32]| v.iter().map(|&i| SymbolId(i)).collect::<Vec<_>>();
        let c = Configuration::new(wrap(&left), StateId(0), wrap(&right), blank);
        prop_assert!(c.left().first() != Some(&blank));
        prop_assert!(c.right().last() != Some(&blank));
        let again = Configuration::new(c.left().to_vec(), c.state(), c.right().to_vec(), blank);
        prop_assert_eq!(&again, &c);
        // Blank padding on either side is invisible.
        let mut l = vec![blank; 2];
        l.extend(c.left());
        let mut r = c.right().to_vec();
        r.extend([blank; 3]);
        prop_assert_eq!(Configuration::new(l, c.state(), r, blank), c);
    }

    #[test]
    fn step_then_reverse_restores(left in proptest::collection::vec(0u32..3, 0..5),
                                  right in proptest::collection::vec(0u32..3, 0..5),
                                  write in 0u32..3, d in 0usize..3) {
        let blank = SymbolId(0);
        let wrap = |v: &[u32]| v.iter().map(|&i| SymbolId(i)).collect::<Vec<_>>();
        let c = Configuration::new(wrap(&left), StateId(0), wrap(&right), blank);
        let mv = Move::ALL[d];
        let back = match mv { Move::L => Move::R, Move::S => Move::S, Move::R => Move::L };
        let c1 = c.step(StateId(1), SymbolId(write), mv, blank);
        let c2 = c1.step(StateId(1), c1.scanned(blank), back, blank);
        let c3 = c2.step(StateId(0), c.scanned(blank), Move::S, blank);
        prop_assert_eq!(c3, c);
    }

    #[test]
    fn delta_star_matches_brute_force(s in shape(), raw in input(), n in 0usize..4) {
        let m = build(&s);
        let alg = m.algebra();
        let w = ids(&m, &raw);
        for c in m.reachable_ids(&w, n).unwrap() {
            let mut expected: BTreeMap<Configuration, Element> = BTreeMap::new();
            for label in m.transitions() {
                let t = label.transition;
                if t.from == c.state() && t.read == c.scanned(m.blank()) {
                    let to = c.step(t.to, t.write, t.mv, m.blank());
                    let e = expected.entry(to).or_insert(alg.one());
                    *e = alg.meet(*e, label.value).unwrap();
                }
            }
            let succ: BTreeSet<Configuration> = m.effective_successors(&c).into_iter().map(|(x, _)| x).collect();
            prop_assert_eq!(&succ, &expected.keys().cloned().collect::<BTreeSet<_>>());
            for (to, v) in &expected {
                prop_assert_eq!(m.delta_star(&c, to), *v);
            }
            // A configuration that is not a successor gets 1.
            let far = Configuration::new(vec![], c.state(), vec![SymbolId(1); 7], m.blank());
            if !expected.contains_key(&far) {
                prop_assert!(alg.is_one(m.delta_star(&c, &far)));
            }
        }
    }

    #[test]
    fn reachable_sets_match_path_enumeration(s in shape(), raw in input(), n in 0usize..4) {
        let m = build(&s);
        let w = ids(&m, &raw);
        let mut frontier: Vec<Configuration> = m.initial_distribution(&w).unwrap().into_iter().map(|x| x.0).collect();
        for _ in 0..n {
            frontier = frontier
                .iter()
                .filter(|c| !m.is_halting(c))
                .flat_map(|c| m.effective_successors(c).into_iter().map(|x| x.0))
                .collect();
        }
        prop_assert_eq!(m.reachable_ids(&w, n).unwrap(), frontier.into_iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn depth_search_matches_path_enumeration(s in shape(), raw in input(), n in 1usize..7) {
        let m = build(&s);
        let w = ids(&m, &raw);
        let (value, complete, defined) = depth_oracle(&m, &w, n);
        let r = eval_depth(&m, &w, &Budget::unpruned(n)).unwrap();
        prop_assert_eq!((r.value, r.complete, r.defined), (value, complete, defined));
        // Pruning changes only how much is explored.
        let p = eval_depth(&m, &w, &Budget::new(n)).unwrap();
        prop_assert_eq!(p.defined, defined);
        if p.complete && complete {
            prop_assert_eq!(p.value, value);
        }
        if p.complete {
            prop_assert!(m.algebra().leq(p.value, value).unwrap());
        }
    }

    #[test]
    fn pruned_search_is_exact_when_complete(s in shape(), raw in input()) {
        let m = build(&s);
        let w = ids(&m, &raw);
        let p = eval_depth(&m, &w, &Budget::new(14)).unwrap();
        let u = eval_depth(&m, &w, &Budget::unpruned(7)).unwrap();
        if u.complete {
            prop_assert!(p.complete);
            prop_assert_eq!(p.value, u.value);
        }
    }

    #[test]
    fn width_matches_level_enumeration(s in shape(), raw in input(), n in 1usize..8) {
        let m = build(&s);
        let w = ids(&m, &raw);
        let (value, complete) = width_oracle(&m, &w, n);
        let r = eval_width(&m, &w, &Budget::new(n)).unwrap();
        prop_assert_eq!(r.value, value);
        if complete {
            prop_assert!(r.complete);
        }
    }

    #[test]
    fn width_below_depth(s in shape(), raw in input()) {
        let m = build(&s);
        let w = ids(&m, &raw);
        let d = eval_depth(&m, &w, &Budget::new(12)).unwrap();
        let wd = eval_width(&m, &w, &Budget::new(12)).unwrap();
        if d.is_exact() && wd.is_exact() {
            prop_assert!(m.algebra().leq(wd.value, d.value).unwrap());
        }
    }

    #[test]
    fn semantics_coincide_over_mv(s in shape(), raw in input()) {
        let m = build(&s);
        prop_assume!(has(m.algebra(), Family::Mv));
        let w = ids(&m, &raw);
        let d = eval_depth(&m, &w, &Budget::new(12)).unwrap();
        let wd = eval_width(&m, &w, &Budget::new(12)).unwrap();
        prop_assert!(agree(&d, &wd));
    }

    #[test]
    fn deterministic_means_one_successor(mut s in shape(), raw in input(), n in 0usize..6) {
        for list in &mut s.delta {
            list.truncate(1);
        }
        let m = build(&s);
        prop_assert!(m.classify().deterministic);
        let w = ids(&m, &raw);
        for c in m.reachable_ids(&w, n).unwrap() {
            prop_assert!(m.effective_successors(&c).len() <= 1);
        }
    }

    #[test]
    fn initial_construction_preserves_both(s in shape(), raw in input()) {
        let m = build(&s);
        let mi = classicalize_initial(&m);
        prop_assert!(mi.classify().classical_initial);
        let w = ids(&m, &raw);
        let wi = ids(&mi, &raw);
        prop_assert!(agree(&eval_depth(&m, &w, &Budget::new(12)).unwrap(), &eval_depth(&mi, &wi, &Budget::new(13)).unwrap()));
        prop_assert!(agree(&eval_width(&m, &w, &Budget::new(12)).unwrap(), &eval_width(&mi, &wi, &Budget::new(13)).unwrap()));
    }

    #[test]
    fn final_construction_preserves_depth(s in shape(), raw in input()) {
        let m = build(&s);
        let mt = classicalize_final(&m);
        prop_assert!(mt.classify().classical_final);
        let w = ids(&m, &raw);
        prop_assert!(agree(&eval_depth(&m, &w, &Budget::new(12)).unwrap(), &eval_depth(&mt, &ids(&mt, &raw), &Budget::new(12)).unwrap()));
    }

    #[test]
    fn width_construction_preserves_width_over_mv(s in shape(), raw in input()) {
        let m = build(&s);
        prop_assume!(has(m.algebra(), Family::Mv));
        let (mw, _) = classicalize_transitions_width(&m, 64, WidthVariant::Aligned).unwrap();
        prop_assert!(mw.classify().classical_delta);
        let w = ids(&m, &raw);
        let a = eval_width(&m, &w, &Budget::new(12)).unwrap();
        let b = eval_width(&mw, &ids(&mw, &raw), &Budget::new(13)).unwrap();
        prop_assert!(agree(&a, &b), "{} vs {}", a.display(m.algebra()), b.display(m.algebra()));
    }

    #[test]
    fn depth_construction_preserves_depth(s in shape(), raw in input()) {
        let m = build(&s);
        prop_assume!(has(m.algebra(), Family::LocallyFinite));
        let (mc, info) = classicalize_transitions_depth(&m, 64).unwrap();
        prop_assert!(mc.classify().classical_delta);
        let w = ids(&m, &raw);
        let wc = encode_input(&m, &mc, info.encoding.as_ref().unwrap(), &w).unwrap();
        let a = eval_depth(&m, &w, &Budget::new(12)).unwrap();
        let b = eval_depth(&mc, &wc, &Budget::new(6 * 12 + 1)).unwrap();
        prop_assert!(agree(&a, &b), "{} vs {}", a.display(m.algebra()), b.display(m.algebra()));
    }

    #[test]
    fn separating_machine_closed_forms(alg in 0..ALGEBRAS.len(), a in 0usize..9, b in 0usize..9, c in 0usize..9) {
        let alg = algebra(alg);
        let e = |i: usize| alg.elem(i % alg.size());
        let (a, b, c) = (e(a), e(b), e(c));
        let m = counterexample_machine(&alg, a, b, c).unwrap();
        let s = m.parse_input("s").unwrap();
        let d = eval_depth(&m, &s, &Budget::default()).unwrap();
        let w = eval_width(&m, &s, &Budget::default()).unwrap();
        let plus = |x, y| alg.boxplus(x, y).unwrap();
        let meet = |x, y| alg.meet(x, y).unwrap();
        let z = alg.zero();
        prop_assert_eq!(d.value, meet(plus(plus(b, z), a), plus(plus(c, z), a)));
        prop_assert_eq!(w.value, plus(meet(plus(b, z), plus(c, z)), a));
        prop_assert!(alg.leq(w.value, d.value).unwrap());
        if has(&alg, Family::Distributive) {
            prop_assert_eq!(w.value, d.value);
        }
    }
}
