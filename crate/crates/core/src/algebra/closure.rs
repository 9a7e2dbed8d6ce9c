use super::{AlgebraError, ElementSet, FiniteAlgebra, Result};

impl FiniteAlgebra {
    /// Least superset of `seed ∪ {0, 1}` closed under `⊞`, `'`, and, when the
    /// algebra is lattice-ordered, under `∧` and `∨`.
    pub fn subalgebra_closure(&self, seed: &ElementSet, cap: usize) -> Result<ElementSet> {
        if seed.algebra() != self.id() {
            return Err(AlgebraError::Mismatch);
        }
        let mut set = seed.clone();
        set.insert(self.zero())?;
        set.insert(self.one())?;
        if set.len() > cap {
            return Err(AlgebraError::CapExceeded(cap));
        }
        loop {
            let members = set.indices();
            let mut grown = false;
            for &a in &members {
                grown |= set.insert(self.elem(self.neg_ix(a)))?;
                for &b in &members {
                    grown |= set.insert(self.elem(self.add_ix(a, b)))?;
                    if self.is_lattice() {
                        grown |= set.insert(self.elem(self.meet_ix(a, b)))?;
                        grown |= set.insert(self.elem(self.join_ix(a, b)))?;
                    }
                }
            }
            if set.len() > cap {
                return Err(AlgebraError::CapExceeded(cap));
            }
            if !grown {
                return Ok(set);
            }
        }
    }

    /// Closure of `seed` under `⊞` alone, with `0` adjoined.
    pub fn boxplus_closure(&self, seed: &ElementSet) -> Result<ElementSet> {
        if seed.algebra() != self.id() {
            return Err(AlgebraError::Mismatch);
        }
        let mut set = seed.clone();
        set.insert(self.zero())?;
        let generators = seed.indices();
        let mut frontier = set.indices();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for &g in &generators {
                    let y = self.add_ix(x, g);
                    if set.insert(self.elem(y))? {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use crate::algebra::{AlgebraError, Builtin, ElementSet, FiniteAlgebra};

    fn set(a: &FiniteAlgebra, names: &[&str]) -> ElementSet {
        ElementSet::from_elements(a, names.iter().map(|n| a.element(n).unwrap())).unwrap()
    }

    fn names(a: &FiniteAlgebra, s: &ElementSet) -> Vec<String> {
        s.iter().map(|e| a.name_of(e).to_string()).collect()
    }

    #[test]
    fn subalgebra_examples() {
        let l3 = Builtin::Lukasiewicz(3).build().unwrap();
        let s = l3.subalgebra_closure(&set(&l3, &["1/2"]), 16).unwrap();
        assert_eq!(names(&l3, &s), ["0", "1/2", "1"]);

        let d4 = Builtin::Diamond.build().unwrap();
        let s = d4.subalgebra_closure(&set(&d4, &["p"]), 16).unwrap();
        assert_eq!(names(&d4, &s), ["0", "p", "q", "1"]);

        let s = d4.subalgebra_closure(&set(&d4, &[]), 16).unwrap();
        assert_eq!(names(&d4, &s), ["0", "1"]);
    }

    #[test]
    fn subalgebra_cap() {
        let d4 = Builtin::Diamond.build().unwrap();
        let err = d4.subalgebra_closure(&set(&d4, &["p"]), 3);
        assert_eq!(err, Err(AlgebraError::CapExceeded(3)));
    }

    #[test]
    fn boxplus_closure_examples() {
        let d4 = Builtin::Diamond.build().unwrap();
        let s = d4.boxplus_closure(&set(&d4, &["p"])).unwrap();
        assert_eq!(names(&d4, &s), ["0", "p", "1"]);

        let l3 = Builtin::Lukasiewicz(3).build().unwrap();
        let s = l3.boxplus_closure(&set(&l3, &["1/2"])).unwrap();
        assert_eq!(names(&l3, &s), ["0", "1/2", "1"]);

        let s = l3.boxplus_closure(&set(&l3, &[])).unwrap();
        assert_eq!(names(&l3, &s), ["0"]);
    }

    #[test]
    fn l5_subalgebra_of_half() {
        let l5 = Builtin::Lukasiewicz(5).build().unwrap();
        let s = l5.subalgebra_closure(&set(&l5, &["1/2"]), 16).unwrap();
        assert_eq!(names(&l5, &s), ["0", "1/2", "1"]);
        let s = l5.subalgebra_closure(&set(&l5, &["1/4"]), 16).unwrap();
        assert_eq!(s.len(), 5);
    }
}
