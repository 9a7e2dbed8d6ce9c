use std::collections::{BTreeMap, HashSet};

use super::{require_lattice, Budget, EvalResult, Result};
use crate::machine::{Configuration, Machine, SymbolId};

/// Level-synchronous evaluation.
///
/// Level `n` maps each configuration to the `∧` of the values of all
/// `n`-step prefixes reaching it. Halting configurations add `W ⊞ T` to the
/// accumulator and are not expanded; the others feed level `n + 1`. A level
/// identical to an earlier one means the sequence of levels is periodic from
/// there on, so nothing new can be contributed and the run is complete.
pub fn eval_width(m: &Machine, input: &[SymbolId], budget: &Budget) -> Result<EvalResult> {
    if budget.max_steps == 0 {
        return Err(super::SemanticsError::ZeroBudget);
    }
    require_lattice(m)?;
    let alg = m.algebra();

    let mut level: BTreeMap<Configuration, usize> = BTreeMap::new();
    for (c, init) in m.initial_distribution(input)? {
        let w = level.entry(c).or_insert(alg.one_ix());
        *w = alg.meet_ix(*w, init.index());
    }

    let mut acc = alg.one_ix();
    let mut complete = true;
    let mut defined = false;
    let mut paths = 0;
    let mut n = 0;
    let mut history: HashSet<BTreeMap<Configuration, usize>> = HashSet::new();

    loop {
        let mut next: BTreeMap<Configuration, usize> = BTreeMap::new();
        for (c, &w) in &level {
            if m.is_halting(c) {
                let t = m.final_value(c.state()).index();
                acc = alg.meet_ix(acc, alg.add_ix(w, t));
                defined = true;
                paths += 1;
                continue;
            }
            if n >= budget.max_steps {
                complete = false;
                continue;
            }
            for (succ, label) in m.effective_successors(c) {
                let v = alg.add_ix(w, label.value.index());
                next.entry(succ)
                    .and_modify(|old| *old = alg.meet_ix(*old, v))
                    .or_insert(v);
            }
        }
        if next.is_empty() {
            break;
        }
        n += 1;
        history.insert(std::mem::take(&mut level));
        if history.contains(&next) {
            break;
        }
        level = next;
    }

    Ok(EvalResult {
        value: alg.elem(acc),
        complete,
        defined,
        levels_explored: n,
        paths_counted: paths,
        pruned_count: 0,
    })
}
