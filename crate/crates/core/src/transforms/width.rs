use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use super::{classicalize_initial, Result, Sidecar, TransformError};
use crate::algebra::Element;
use crate::machine::{Machine, MachineDef, Move, StateId, SymbolId, TransitionDef};

/// Which successor rule the function-state construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WidthVariant {
    /// Successor functions only draw on states with `T = 1`, and are split
    /// into a part on states with `T = 1` and a part on states with `T ≠ 1`.
    /// A function state then halts exactly when every configuration it
    /// stands for halts.
    #[default]
    Aligned,
    /// `Y(q) = ⋀_p X(p) ⊞ δ(p, a, q, b, D)` over all `p`, one successor per
    /// `(a, b, D)`. A function state with some `X(p) ⊞ T(p) < 1` halts even
    /// if other states it stands for would go on.
    Literal,
}

impl fmt::Display for WidthVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthVariant::Aligned => "aligned",
            WidthVariant::Literal => "literal",
        })
    }
}

/// Function states materialized before giving up.
const STATE_LIMIT: usize = 200_000;

type Func = Vec<usize>;

/// Classical-transition machine whose states are functions `Q → S_M`.
///
/// Unless `m` already has a single initial state with value `0`, it is first
/// passed through [`classicalize_initial`]. Only function states reachable
/// from the initial one are built, and edges into the constant-`1` function
/// are left out: that state contributes `1` to every `∧` and would only
/// wander off along the tape.
pub fn classicalize_transitions_width(
    m: &Machine,
    cap: usize,
    variant: WidthVariant,
) -> Result<(Machine, Sidecar)> {
    let alg = m.algebra();
    if !alg.is_lattice() {
        return Err(TransformError::NotALattice(alg.name().to_string()));
    }
    let single = {
        let non_one: Vec<StateId> = m
            .state_ids()
            .filter(|&q| !alg.is_one(m.initial_value(q)))
            .collect();
        non_one.len() == 1 && alg.is_zero(m.initial_value(non_one[0]))
    };
    let base = if single {
        m.clone()
    } else {
        classicalize_initial(m)
    };
    let s_m = alg.subalgebra_closure(&base.machine_range(), cap)?;

    let one = alg.one_ix();
    let nq = base.states().len();
    let halts: Vec<bool> = base
        .state_ids()
        .map(|p| !alg.is_one(base.final_value(p)))
        .collect();
    let start: Func = base
        .state_ids()
        .map(|q| {
            if alg.is_one(base.initial_value(q)) {
                one
            } else {
                alg.zero_ix()
            }
        })
        .collect();

    // State names sort by name, not by index.
    let mut by_name: Vec<StateId> = base.state_ids().collect();
    by_name.sort_by(|a, b| base.state_name(*a).cmp(base.state_name(*b)));
    let name_of = |f: &Func| -> String {
        let entries: Vec<String> = by_name
            .iter()
            .filter(|q| f[q.index()] != one)
            .map(|&q| {
                format!(
                    "{}:{}",
                    base.state_name(q),
                    alg.name_of(alg.elem(f[q.index()]))
                )
            })
            .collect();
        format!("X{{{}}}", entries.join(","))
    };

    let mut index: HashMap<Func, usize> = HashMap::new();
    let mut funcs: Vec<Func> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    funcs.push(start.clone());
    queue.push_back(0);
    let mut edges: Vec<(usize, SymbolId, usize, SymbolId, Move)> = Vec::new();

    while let Some(xi) = queue.pop_front() {
        let x = funcs[xi].clone();
        let mut targets: BTreeMap<(SymbolId, SymbolId, Move), Func> = BTreeMap::new();
        for p in base.state_ids() {
            if x[p.index()] == one || (variant == WidthVariant::Aligned && halts[p.index()]) {
                continue;
            }
            for a in base.symbol_ids() {
                for label in base.outgoing(p, a) {
                    let t = label.transition;
                    let y = targets
                        .entry((a, t.write, t.mv))
                        .or_insert_with(|| vec![one; nq]);
                    let v = alg.add_ix(x[p.index()], label.value.index());
                    y[t.to.index()] = alg.meet_ix(y[t.to.index()], v);
                }
            }
        }
        for ((a, b, mv), y) in targets {
            let parts = match variant {
                WidthVariant::Literal => vec![y],
                WidthVariant::Aligned => {
                    let pick = |keep_halting: bool| -> Func {
                        (0..nq)
                            .map(|q| if halts[q] == keep_halting { y[q] } else { one })
                            .collect()
                    };
                    vec![pick(false), pick(true)]
                }
            };
            for y in parts {
                if y.iter().all(|&v| v == one) {
                    continue;
                }
                debug_assert!(y.iter().all(|&v| s_m.contains(alg.elem(v))));
                let yi = match index.get(&y) {
                    Some(&i) => i,
                    None => {
                        if funcs.len() >= STATE_LIMIT {
                            return Err(TransformError::StateLimit(STATE_LIMIT));
                        }
                        let i = funcs.len();
                        index.insert(y.clone(), i);
                        funcs.push(y);
                        queue.push_back(i);
                        i
                    }
                };
                edges.push((xi, a, yi, b, mv));
            }
        }
    }

    let names: Vec<String> = funcs.iter().map(name_of).collect();
    let t_bar = |f: &Func| -> Element {
        let mut acc = one;
        for (p, &x) in f.iter().enumerate().take(nq) {
            acc = alg.meet_ix(
                acc,
                alg.add_ix(x, base.final_value(StateId(p as u32)).index()),
            );
        }
        alg.elem(acc)
    };
    let def = MachineDef {
        name: format!("{}_W", m.name()),
        algebra: alg.clone(),
        states: names.clone(),
        input_alphabet: base
            .input_alphabet()
            .iter()
            .map(|&s| base.symbol_name(s).to_string())
            .collect(),
        tape_alphabet: base.tape_alphabet().to_vec(),
        blank: base.symbol_name(base.blank()).to_string(),
        initial: BTreeMap::from([(names[0].clone(), alg.zero())]),
        final_values: funcs
            .iter()
            .zip(&names)
            .map(|(f, n)| (n.clone(), t_bar(f)))
            .filter(|(_, v)| !alg.is_one(*v))
            .collect(),
        transitions: edges
            .iter()
            .map(|&(x, a, y, b, mv)| {
                TransitionDef::new(
                    &names[x],
                    base.symbol_name(a),
                    &names[y],
                    base.symbol_name(b),
                    mv,
                    alg.zero(),
                )
            })
            .collect(),
    };
    debug_assert_eq!(names.iter().collect::<HashSet<_>>().len(), names.len());
    let out = def.build()?;
    let mut info = Sidecar::new("transitions-width", m, &out);
    info.variant = Some(variant.to_string());
    info.s_m_size = Some(s_m.len());
    Ok((out, info))
}
