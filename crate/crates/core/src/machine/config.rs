use std::fmt;

use serde::{Deserialize, Serialize};

/// Index of a state in its machine's state list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

/// Index of a symbol in its machine's tape alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Head movement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    L,
    S,
    R,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::L, Move::S, Move::R];
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::S => "S",
            Move::R => "R",
        })
    }
}

/// An instantaneous description `α₁ q α₂` in canonical form.
///
/// `left` holds the cells strictly left of the head (leftmost first) without
/// leading blanks; `right` starts at the scanned cell and has no trailing
/// blanks. An empty `right` means the head scans a blank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    left: Vec<SymbolId>,
    state: StateId,
    right: Vec<SymbolId>,
}

impl Configuration {
    pub fn new(left: Vec<SymbolId>, state: StateId, right: Vec<SymbolId>, blank: SymbolId) -> Self {
        let mut c = Configuration { left, state, right };
        c.canonicalize(blank);
        c
    }

    /// `q s`: head on the first input symbol.
    pub fn initial(state: StateId, input: &[SymbolId], blank: SymbolId) -> Self {
        Self::new(Vec::new(), state, input.to_vec(), blank)
    }

    fn canonicalize(&mut self, blank: SymbolId) {
        let lead = self.left.iter().take_while(|&&s| s == blank).count();
        if lead > 0 {
            self.left.drain(..lead);
        }
        while self.right.last() == Some(&blank) {
            self.right.pop();
        }
    }

    pub fn left(&self) -> &[SymbolId] {
        &self.left
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn right(&self) -> &[SymbolId] {
        &self.right
    }

    pub fn scanned(&self, blank: SymbolId) -> SymbolId {
        self.right.first().copied().unwrap_or(blank)
    }

    /// Writes `write` under the head, enters `to` and moves.
    pub fn step(&self, to: StateId, write: SymbolId, mv: Move, blank: SymbolId) -> Self {
        let mut left = self.left.clone();
        let mut right = self.right.clone();
        if right.is_empty() {
            right.push(write);
        } else {
            right[0] = write;
        }
        match mv {
            Move::S => {}
            Move::R => {
                left.push(right.remove(0));
            }
            Move::L => {
                let c = left.pop().unwrap_or(blank);
                right.insert(0, c);
            }
        }
        Self::new(left, to, right, blank)
    }
}
