use std::collections::HashMap;

use super::{dominates, require_lattice, Budget, EvalResult, Result};
use crate::machine::{Configuration, Machine, SymbolId};

struct Frame {
    config: Configuration,
    value: usize,
    /// Label counts over `R_M`, then the path length in the last slot.
    key: Vec<u32>,
}

/// Per-configuration antichains of visited keys.
#[derive(Default)]
struct Store {
    seen: HashMap<Configuration, Vec<Vec<u32>>>,
}

impl Store {
    /// Records `key` at `c` unless a stored key is below it. Returns whether
    /// the path should be explored.
    fn admit(&mut self, c: &Configuration, key: &[u32]) -> bool {
        let list = self.seen.entry(c.clone()).or_default();
        if list.iter().any(|old| dominates(old, key)) {
            return false;
        }
        list.retain(|old| !dominates(key, old));
        list.push(key.to_vec());
        true
    }
}

/// `∧` over the values of every halting path of length at most
/// `budget.max_steps`.
///
/// With pruning on, a path reaching a configuration with label counts and
/// length both at least those of an earlier path through the same
/// configuration is dropped: every continuation of it is available to the
/// earlier path at a value no smaller, provided `a ≤ a ⊞ b` holds.
pub fn eval_depth(m: &Machine, input: &[SymbolId], budget: &Budget) -> Result<EvalResult> {
    if budget.max_steps == 0 {
        return Err(super::SemanticsError::ZeroBudget);
    }
    require_lattice(m)?;
    let alg = m.algebra();
    let prune = budget.prune && alg.is_monotone_addition();
    let basis: Vec<usize> = m.machine_range().iter().map(|e| e.index()).collect();
    let mut slot = vec![usize::MAX; alg.size()];
    for (i, &x) in basis.iter().enumerate() {
        slot[x] = i;
    }
    let depth_slot = basis.len();

    let mut acc = alg.one_ix();
    let mut complete = true;
    let mut defined = false;
    let mut levels = 0;
    let mut paths = 0;
    let mut pruned = 0;
    let mut store = Store::default();

    let mut stack = Vec::new();
    for (config, init) in m.initial_distribution(input)?.into_iter().rev() {
        let mut key = vec![0u32; basis.len() + 1];
        key[slot[init.index()]] += 1;
        stack.push(Frame {
            config,
            value: init.index(),
            key,
        });
    }
    // Initial frames are admitted up front so that their keys seed the store.
    if prune {
        stack.retain(|f| {
            let keep = store.admit(&f.config, &f.key);
            if !keep {
                pruned += 1;
            }
            keep
        });
    }

    while let Some(frame) = stack.pop() {
        let depth = frame.key[depth_slot] as usize;
        levels = levels.max(depth);
        if m.is_halting(&frame.config) {
            let t = m.final_value(frame.config.state()).index();
            acc = alg.meet_ix(acc, alg.add_ix(frame.value, t));
            defined = true;
            paths += 1;
            continue;
        }
        if depth >= budget.max_steps {
            complete = false;
            continue;
        }
        let successors = m.effective_successors(&frame.config);
        for (config, label) in successors.into_iter().rev() {
            let v = label.value.index();
            let mut key = frame.key.clone();
            key[slot[v]] += 1;
            key[depth_slot] += 1;
            if prune && !store.admit(&config, &key) {
                pruned += 1;
                continue;
            }
            stack.push(Frame {
                config,
                value: alg.add_ix(frame.value, v),
                key,
            });
        }
    }

    Ok(EvalResult {
        value: alg.elem(acc),
        complete,
        defined,
        levels_explored: levels,
        paths_counted: paths,
        pruned_count: pruned,
    })
}
