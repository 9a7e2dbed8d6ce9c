use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, FiniteAlgebra, Result};

/// Axiom families that can be checked exhaustively on a finite table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    S,
    Mv,
    Qmv,
    Effect,
    Lattice,
    Quasilinear,
    Linear,
    LocallyFinite,
    Distributive,
    MonotoneAddition,
    /// Structural well-formedness of a machine description.
    Machine,
}

impl Family {
    /// Families that apply to a total algebra, in reporting order.
    pub const TOTAL: [Family; 9] = [
        Family::S,
        Family::Mv,
        Family::Qmv,
        Family::Lattice,
        Family::Quasilinear,
        Family::Linear,
        Family::LocallyFinite,
        Family::Distributive,
        Family::MonotoneAddition,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::S => "S",
            Family::Mv => "MV",
            Family::Qmv => "QMV",
            Family::Effect => "EFFECT",
            Family::Lattice => "LATTICE",
            Family::Quasilinear => "QUASILINEAR",
            Family::Linear => "LINEAR",
            Family::LocallyFinite => "LOCALLY_FINITE",
            Family::Distributive => "DISTRIBUTIVE",
            Family::MonotoneAddition => "MONOTONE_ADDITION",
            Family::Machine => "MACHINE",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "s" => Family::S,
            "mv" => Family::Mv,
            "qmv" => Family::Qmv,
            "effect" => Family::Effect,
            "lattice" => Family::Lattice,
            "quasilinear" => Family::Quasilinear,
            "linear" => Family::Linear,
            "locally_finite" => Family::LocallyFinite,
            "distributive" => Family::Distributive,
            "monotone" | "monotone_addition" => Family::MonotoneAddition,
            "machine" => Family::Machine,
            _ => return Err(format!("unknown axiom family `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckMode {
    #[default]
    FirstViolation,
    AllViolations,
}

/// One failed instance of an axiom: the tuple that breaks it and both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at ({}): {} vs {}",
            self.axiom,
            self.witness.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub family: Family,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn new(family: Family, violations: Vec<Violation>) -> Self {
        AxiomReport {
            family,
            pass: violations.is_empty(),
            violations,
        }
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.family,
            if self.pass { "pass" } else { "FAIL" }
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

/// An equational law over up to three variables. Returning `None` means the
/// premise of a conditional law does not hold for this tuple.
type Law = fn(&FiniteAlgebra, [usize; 3]) -> Option<(usize, usize)>;

const S_LAWS: &[(&str, usize, Law)] = &[
    ("S1", 2, |m, [a, b, _]| {
        Some((m.add_ix(a, b), m.add_ix(b, a)))
    }),
    ("S2", 3, |m, [a, b, c]| {
        Some((m.add_ix(a, m.add_ix(b, c)), m.add_ix(m.add_ix(a, b), c)))
    }),
    ("S3", 1, |m, [a, _, _]| {
        Some((m.add_ix(a, m.neg_ix(a)), m.one_ix()))
    }),
    ("S4", 1, |m, [a, _, _]| Some((m.add_ix(a, m.zero_ix()), a))),
    ("S5", 1, |m, [a, _, _]| Some((m.neg_ix(m.neg_ix(a)), a))),
    ("S6", 1, |m, [a, _, _]| {
        Some((m.add_ix(a, m.one_ix()), m.one_ix()))
    }),
];

const MV_LAWS: &[(&str, usize, Law)] = &[("MV", 2, |m, [a, b, _]| {
    let lhs = m.add_ix(m.neg_ix(m.add_ix(m.neg_ix(a), b)), b);
    let rhs = m.add_ix(m.neg_ix(m.add_ix(a, m.neg_ix(b))), a);
    Some((lhs, rhs))
})];

const QMV_LAWS: &[(&str, usize, Law)] = &[
    ("QMV1", 2, |m, [a, b, _]| {
        Some((m.qjoin_ix(a, m.qmeet_ix(b, a)), a))
    }),
    ("QMV2", 3, |m, [a, b, c]| {
        let ab = m.qmeet_ix(a, b);
        Some((m.qmeet_ix(ab, c), m.qmeet_ix(ab, m.qmeet_ix(b, c))))
    }),
    ("QMV3", 3, |m, [a, b, c]| {
        let neg_ac = m.neg_ix(m.add_ix(a, c));
        let lhs = m.add_ix(a, m.qmeet_ix(b, neg_ac));
        let rhs = m.qmeet_ix(m.add_ix(a, b), m.add_ix(a, neg_ac));
        Some((lhs, rhs))
    }),
    ("QMV4", 2, |m, [a, b, _]| {
        Some((m.add_ix(a, m.qmeet_ix(m.neg_ix(a), b)), m.add_ix(a, b)))
    }),
    ("QMV5", 2, |m, [a, b, _]| {
        let lhs = m.qjoin_ix(m.add_ix(m.neg_ix(a), b), m.add_ix(m.neg_ix(b), a));
        Some((lhs, m.one_ix()))
    }),
];

const QUASILINEAR_LAWS: &[(&str, usize, Law)] = &[("QUASILINEAR", 2, |m, [a, b, _]| {
    if m.leq_ix(a, b) {
        None
    } else {
        Some((m.qmeet_ix(a, b), b))
    }
})];

const DISTRIBUTIVE_LAWS: &[(&str, usize, Law)] = &[("DISTRIBUTIVE", 3, |m, [a, b, c]| {
    let lhs = m.meet_ix(m.add_ix(a, b), m.add_ix(a, c));
    let rhs = m.add_ix(a, m.meet_ix(b, c));
    Some((lhs, rhs))
})];

// a ≤ a ⊞ b, written as a ⊓ (a ⊞ b) = a.
const MONOTONE_LAWS: &[(&str, usize, Law)] = &[("MONOTONE_ADDITION", 2, |m, [a, b, _]| {
    Some((m.qmeet_ix(a, m.add_ix(a, b)), a))
})];

struct Collector<'a> {
    alg: &'a FiniteAlgebra,
    mode: CheckMode,
    violations: Vec<Violation>,
}

impl<'a> Collector<'a> {
    fn new(alg: &'a FiniteAlgebra, mode: CheckMode) -> Self {
        Collector {
            alg,
            mode,
            violations: Vec::new(),
        }
    }

    fn done(&self) -> bool {
        self.mode == CheckMode::FirstViolation && !self.violations.is_empty()
    }

    fn push(&mut self, axiom: &str, witness: &[usize], lhs: String, rhs: String) {
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness: witness
                .iter()
                .map(|&i| self.alg.carrier[i].clone())
                .collect(),
            lhs,
            rhs,
        });
    }

    fn laws(&mut self, laws: &[(&str, usize, Law)]) {
        let k = self.alg.size();
        for &(tag, arity, law) in laws {
            let total = k.pow(arity as u32);
            for n in 0..total {
                if self.done() {
                    return;
                }
                let t = [n % k, (n / k) % k, (n / (k * k)) % k];
                // Enumerate with the first variable varying slowest.
                let mut tuple = [0usize; 3];
                for (i, slot) in tuple.iter_mut().enumerate().take(arity) {
                    *slot = t[arity - 1 - i];
                }
                if let Some((lhs, rhs)) = law(self.alg, tuple) {
                    if lhs != rhs {
                        let l = self.alg.carrier[lhs].clone();
                        let r = self.alg.carrier[rhs].clone();
                        self.push(tag, &tuple[..arity], l, r);
                    }
                }
            }
        }
    }
}

impl FiniteAlgebra {
    /// Exhaustively checks one axiom family.
    ///
    /// `EFFECT` applies to [`PartialEffectTable`](super::PartialEffectTable)
    /// only, and `DISTRIBUTIVE` needs the lattice structure.
    pub fn check_axioms(&self, family: Family, mode: CheckMode) -> Result<AxiomReport> {
        let mut c = Collector::new(self, mode);
        match family {
            Family::S => c.laws(S_LAWS),
            Family::Mv => c.laws(MV_LAWS),
            Family::Qmv => c.laws(QMV_LAWS),
            Family::Quasilinear => c.laws(QUASILINEAR_LAWS),
            Family::MonotoneAddition => c.laws(MONOTONE_LAWS),
            Family::Distributive => {
                if !self.is_lattice() {
                    return Err(AlgebraError::Prerequisite {
                        family,
                        prerequisite: Family::Lattice,
                    });
                }
                c.laws(DISTRIBUTIVE_LAWS)
            }
            Family::Lattice => self.lattice_violations(&mut c),
            Family::Linear => {
                let k = self.size();
                'outer: for a in 0..k {
                    for b in a + 1..k {
                        if c.done() {
                            break 'outer;
                        }
                        if !self.leq_ix(a, b) && !self.leq_ix(b, a) {
                            c.push("LINEAR", &[a, b], "a ≰ b".into(), "b ≰ a".into());
                        }
                    }
                }
            }
            Family::LocallyFinite => {
                for a in 0..self.size() {
                    if c.done() {
                        break;
                    }
                    if a == self.zero {
                        continue;
                    }
                    if let Err(stuck) = self.reaches_one(a) {
                        let lhs = format!("n·a cycles at {}", self.carrier[stuck]);
                        c.push("LOCALLY_FINITE", &[a], lhs, self.carrier[self.one].clone());
                    }
                }
            }
            Family::Effect | Family::Machine => return Err(AlgebraError::WrongInput(family)),
        }
        Ok(AxiomReport::new(family, c.violations))
    }

    /// Iterates `n·a` until it hits `1`; on a cycle returns the first repeated value.
    fn reaches_one(&self, a: usize) -> std::result::Result<usize, usize> {
        let mut seen = vec![false; self.size()];
        let mut x = a;
        loop {
            if x == self.one {
                return Ok(x);
            }
            if seen[x] {
                return Err(x);
            }
            seen[x] = true;
            x = self.add_ix(x, a);
        }
    }

    fn lattice_violations(&self, c: &mut Collector<'_>) {
        let k = self.size();
        for a in 0..k {
            if !self.leq_ix(a, a) {
                c.push("reflexive", &[a], "a ≰ a".into(), String::new());
            }
        }
        for a in 0..k {
            for b in 0..k {
                if a != b && self.leq_ix(a, b) && self.leq_ix(b, a) {
                    c.push("antisymmetric", &[a, b], "a ≤ b".into(), "b ≤ a".into());
                }
                for x in 0..k {
                    if self.leq_ix(a, b) && self.leq_ix(b, x) && !self.leq_ix(a, x) {
                        c.push("transitive", &[a, b, x], "a ≤ b ≤ c".into(), "a ≰ c".into());
                    }
                }
            }
        }
        if c.done() || !c.violations.is_empty() {
            if c.mode == CheckMode::FirstViolation {
                c.violations.truncate(1);
            }
            return;
        }
        for a in 0..k {
            for b in a..k {
                if c.done() {
                    return;
                }
                let lower: Vec<usize> = (0..k)
                    .filter(|&x| self.leq_ix(x, a) && self.leq_ix(x, b))
                    .collect();
                if !lower
                    .iter()
                    .any(|&g| lower.iter().all(|&x| self.leq_ix(x, g)))
                {
                    c.push(
                        "glb",
                        &[a, b],
                        "no greatest lower bound".into(),
                        String::new(),
                    );
                }
                let upper: Vec<usize> = (0..k)
                    .filter(|&x| self.leq_ix(a, x) && self.leq_ix(b, x))
                    .collect();
                if !upper
                    .iter()
                    .any(|&l| upper.iter().all(|&x| self.leq_ix(l, x)))
                {
                    c.push("lub", &[a, b], "no least upper bound".into(), String::new());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Builtin;

    fn check(alg: &FiniteAlgebra, f: Family) -> AxiomReport {
        alg.check_axioms(f, CheckMode::FirstViolation).unwrap()
    }

    #[test]
    fn l3_is_mv_and_locally_finite() {
        let l3 = Builtin::Lukasiewicz(3).build().unwrap();
        for f in [
            Family::S,
            Family::Mv,
            Family::Qmv,
            Family::Lattice,
            Family::LocallyFinite,
        ] {
            assert!(check(&l3, f).pass, "{f}");
        }
    }

    #[test]
    fn d4_mv_witness() {
        let d4 = Builtin::Diamond.build().unwrap();
        let r = check(&d4, Family::Mv);
        assert!(!r.pass);
        let v = r.first().unwrap();
        assert_eq!(v.witness, vec!["p", "q"]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("q", "p"));
    }

    #[test]
    fn d4_distributive_witness() {
        let d4 = Builtin::Diamond.build().unwrap();
        let r = check(&d4, Family::Distributive);
        let v = r.first().unwrap();
        assert_eq!(v.witness, vec!["p", "p", "q"]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("1", "p"));
    }

    #[test]
    fn d4_is_quasilinear_qmv() {
        let d4 = Builtin::Diamond.build().unwrap();
        for f in [Family::S, Family::Qmv, Family::Lattice, Family::Quasilinear] {
            assert!(check(&d4, f).pass, "{f}");
        }
        assert!(!check(&d4, Family::Linear).pass);
    }

    #[test]
    fn all_mode_collects_every_violation() {
        let d4 = Builtin::Diamond.build().unwrap();
        let r = d4
            .check_axioms(Family::Mv, CheckMode::AllViolations)
            .unwrap();
        // (p,q) and (q,p) are the only failing pairs.
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn distributive_needs_lattice() {
        // The QMV order of this table has no glb for some pair.
        let carrier: Vec<String> = ["0", "a", "b", "1"].iter().map(|s| s.to_string()).collect();
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 0, 3],
            vec![2, 0, 0, 3],
            vec![3, 3, 3, 3],
        ];
        let alg = FiniteAlgebra::from_tables("x", carrier, 0, 3, t, vec![3, 1, 2, 0]).unwrap();
        assert!(!alg.is_lattice());
        assert!(matches!(
            alg.check_axioms(Family::Distributive, CheckMode::FirstViolation),
            Err(AlgebraError::Prerequisite { .. })
        ));
    }

    #[test]
    fn effect_family_is_wrong_input_for_total_tables() {
        let l3 = Builtin::Lukasiewicz(3).build().unwrap();
        assert_eq!(
            l3.check_axioms(Family::Effect, CheckMode::FirstViolation),
            Err(AlgebraError::WrongInput(Family::Effect))
        );
    }

    #[test]
    fn family_names_parse() {
        assert_eq!(
            "locally-finite".parse::<Family>().unwrap(),
            Family::LocallyFinite
        );
        assert_eq!("MV".parse::<Family>().unwrap(), Family::Mv);
        assert!("bogus".parse::<Family>().is_err());
    }
}
