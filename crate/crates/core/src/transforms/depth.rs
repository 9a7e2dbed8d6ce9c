use std::collections::{BTreeMap, HashSet};

use super::{Result, Sidecar};
use crate::algebra::{AlgebraError, Element};
use crate::machine::{Machine, MachineDef, MachineError, Move, SymbolId, TransitionDef};

/// Classical-transition machine that carries the running path value on the
/// tape.
///
/// Every cell holds a pair `(c,z)` of a tape symbol and an element of
/// `R_M^⊞`. One step `δ(p, a, q, b, D) = y` of the source machine becomes six
/// steps through staging states `q@w@i.0` … `q@w@i.4` (with `w = x ⊞ y` and
/// `i` the number of the transition) that write `w` onto the scanned cell
/// and both neighbours. From any source state the machine may instead jump
/// to `q@z@f`, whose final value is `z ⊞ T(q)`.
///
/// Transitions are numbered `1..N` over the effective entries, ordered by
/// state and symbol names.
/// Neighbour cells may still be the plain blank, so the two neighbour
/// steps also read `B` and write `(B,w)`. Source states with `T ≠ 1` get no
/// simulation step, since the source machine halts there.
///
/// Inputs must be re-encoded with [`encode_input`].
pub fn classicalize_transitions_depth(m: &Machine, cap: usize) -> Result<(Machine, Sidecar)> {
    let alg = m.algebra();
    let r_plus: Vec<Element> = alg.boxplus_closure(&m.machine_range())?.iter().collect();
    if r_plus.len() > cap {
        return Err(AlgebraError::CapExceeded(cap).into());
    }
    let zname = |z| alg.name_of(z).to_string();
    let pair = |c: SymbolId, z| format!("({},{})", m.symbol_name(c), zname(z));
    let blank = m.symbol_name(m.blank()).to_string();
    let stage = |q, w, i: usize, j: usize| format!("{}@{}@{}.{}", m.state_name(q), zname(w), i, j);
    let fin = |q, z| format!("{}@{}@f", m.state_name(q), zname(z));

    let mut tape = vec![blank.clone()];
    for c in m.symbol_ids() {
        for &z in &r_plus {
            tape.push(pair(c, z));
        }
    }
    // Every annotated symbol, plus the plain blank for fresh neighbour cells.
    let mut neighbours: Vec<(String, SymbolId)> = vec![(blank.clone(), m.blank())];
    for c in m.symbol_ids() {
        for &z in &r_plus {
            neighbours.push((pair(c, z), c));
        }
    }

    let mut states: Vec<String> = m.states().to_vec();
    let mut seen_states: HashSet<String> = states.iter().cloned().collect();
    let mut add_state = |s: String, states: &mut Vec<String>| {
        if seen_states.insert(s.clone()) {
            states.push(s);
        }
    };
    let mut transitions: Vec<TransitionDef> = Vec::new();
    let mut seen: HashSet<(String, String, String, String, Move)> = HashSet::new();
    let mut push = |t: TransitionDef, out: &mut Vec<TransitionDef>| {
        if seen.insert((
            t.from.clone(),
            t.read.clone(),
            t.to.clone(),
            t.write.clone(),
            t.mv,
        )) {
            out.push(t);
        }
    };
    let zero = alg.zero();

    let mut labels: Vec<_> = m.transitions().collect();
    labels.sort_by_key(|l| {
        let t = l.transition;
        (
            m.state_name(t.from),
            m.symbol_name(t.read),
            m.state_name(t.to),
            m.symbol_name(t.write),
            t.mv,
        )
    });
    for (i, label) in labels.into_iter().enumerate() {
        let i = i + 1;
        let t = label.transition;
        if !alg.is_one(m.final_value(t.from)) {
            continue;
        }
        let y = label.value;
        for &x in &r_plus {
            let w = alg.boxplus(x, y)?;
            let st: Vec<String> = (0..5).map(|j| stage(t.to, w, i, j)).collect();
            for s in &st {
                add_state(s.clone(), &mut states);
            }
            let bw = pair(t.write, w);
            let p = m.state_name(t.from);
            let q = m.state_name(t.to);
            // Write the new symbol and accumulator in place.
            push(
                TransitionDef::new(p, &pair(t.read, x), &st[0], &bw, Move::S, zero),
                &mut transitions,
            );
            // Step left.
            push(
                TransitionDef::new(&st[0], &bw, &st[1], &bw, Move::L, zero),
                &mut transitions,
            );
            // Stamp the left neighbour, come back.
            for (read, c) in &neighbours {
                push(
                    TransitionDef::new(&st[1], read, &st[2], &pair(*c, w), Move::R, zero),
                    &mut transitions,
                );
            }
            // Step right.
            push(
                TransitionDef::new(&st[2], &bw, &st[3], &bw, Move::R, zero),
                &mut transitions,
            );
            // Stamp the right neighbour, come back.
            for (read, c) in &neighbours {
                push(
                    TransitionDef::new(&st[3], read, &st[4], &pair(*c, w), Move::L, zero),
                    &mut transitions,
                );
            }
            // The original move.
            push(
                TransitionDef::new(&st[4], &bw, q, &bw, t.mv, zero),
                &mut transitions,
            );
        }
    }

    // Stop here with the accumulated value.
    let mut final_values = BTreeMap::new();
    for q in m.state_ids() {
        for &z in &r_plus {
            let f = fin(q, z);
            add_state(f.clone(), &mut states);
            let v = alg.boxplus(z, m.final_value(q))?;
            if !alg.is_one(v) {
                final_values.insert(f.clone(), v);
            }
            for c in m.symbol_ids() {
                let cz = pair(c, z);
                push(
                    TransitionDef::new(m.state_name(q), &cz, &f, &cz, Move::S, zero),
                    &mut transitions,
                );
            }
        }
    }

    let encoding: BTreeMap<String, String> = m
        .input_alphabet()
        .iter()
        .map(|&a| (m.symbol_name(a).to_string(), pair(a, zero)))
        .collect();
    let def = MachineDef {
        name: format!("{}_C", m.name()),
        algebra: alg.clone(),
        states,
        input_alphabet: encoding.values().cloned().collect(),
        tape_alphabet: tape,
        blank,
        initial: m.to_def().initial,
        final_values,
        transitions,
    };
    let out = def.build()?;
    let mut info = Sidecar::new("transitions-depth", m, &out);
    info.r_plus_size = Some(r_plus.len());
    info.encoding = Some(encoding);
    Ok((out, info))
}

/// `s ↦ s × {0}` through a sidecar's encoding map.
pub fn encode_input(
    source: &Machine,
    target: &Machine,
    encoding: &BTreeMap<String, String>,
    input: &[SymbolId],
) -> std::result::Result<Vec<SymbolId>, MachineError> {
    let names: Vec<&str> = input
        .iter()
        .map(|&s| {
            let name = source.symbol_name(s);
            encoding
                .get(name)
                .map(String::as_str)
                .ok_or_else(|| MachineError::NotInputSymbol(name.to_string()))
        })
        .collect::<std::result::Result<_, _>>()?;
    target.input_from_names(&names)
}
