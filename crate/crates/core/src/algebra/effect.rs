use super::axioms::{AxiomReport, CheckMode, Family, Violation};
use super::{AlgebraError, FiniteAlgebra, Origin, Result};

/// A finite effect algebra given by its partial `⊕` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialEffectTable {
    pub name: String,
    pub carrier: Vec<String>,
    pub zero: usize,
    pub one: usize,
    /// Row-major `k×k`; `None` where `a ⊕ b` is undefined.
    oplus: Vec<Option<usize>>,
}

impl PartialEffectTable {
    pub fn new(
        name: impl Into<String>,
        carrier: Vec<String>,
        zero: usize,
        one: usize,
        oplus: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        let k = carrier.len();
        if k < 2 {
            return Err(AlgebraError::TooSmall);
        }
        for (i, n) in carrier.iter().enumerate() {
            if n.is_empty() {
                return Err(AlgebraError::EmptyName);
            }
            if carrier[..i].contains(n) {
                return Err(AlgebraError::DuplicateName(n.clone()));
            }
        }
        if zero >= k || one >= k {
            return Err(AlgebraError::OutOfRange(zero.max(one)));
        }
        if zero == one {
            return Err(AlgebraError::ZeroIsOne);
        }
        if oplus.len() != k {
            return Err(AlgebraError::Shape {
                table: "oplus",
                expected: k,
                found: oplus.len(),
            });
        }
        let mut flat = Vec::with_capacity(k * k);
        for row in oplus {
            if row.len() != k {
                return Err(AlgebraError::Shape {
                    table: "oplus row",
                    expected: k,
                    found: row.len(),
                });
            }
            for v in row {
                if let Some(v) = v {
                    if v >= k {
                        return Err(AlgebraError::OutOfRange(v));
                    }
                }
                flat.push(v);
            }
        }
        Ok(PartialEffectTable {
            name: name.into(),
            carrier,
            zero,
            one,
            oplus: flat,
        })
    }

    pub fn from_names(
        name: impl Into<String>,
        carrier: Vec<String>,
        zero: &str,
        one: &str,
        oplus: &[Vec<Option<String>>],
    ) -> Result<Self> {
        let lookup = |n: &str| {
            carrier
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| AlgebraError::UnknownElement(n.to_string()))
        };
        let zero = lookup(zero)?;
        let one = lookup(one)?;
        let oplus = oplus
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.as_deref().map(lookup).transpose())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, carrier, zero, one, oplus)
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn oplus(&self, a: usize, b: usize) -> Option<usize> {
        self.oplus[a * self.size() + b]
    }

    pub fn oplus_names(&self) -> Vec<Vec<Option<String>>> {
        let k = self.size();
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| self.oplus(a, b).map(|v| self.carrier[v].clone()))
                    .collect()
            })
            .collect()
    }

    /// The effect-algebra order: `a ≤ b` iff `a ⊕ c = b` for some `c`.
    pub fn effect_leq(&self, a: usize, b: usize) -> bool {
        (0..self.size()).any(|c| self.oplus(a, c) == Some(b))
    }

    /// Checks E1–E4 exhaustively.
    pub fn check_axioms(&self, mode: CheckMode) -> AxiomReport {
        let k = self.size();
        let name = |i: usize| self.carrier[i].clone();
        let show = |v: Option<usize>| v.map_or_else(|| "undefined".to_string(), name);
        let mut out: Vec<Violation> = Vec::new();
        let stop = |out: &Vec<Violation>| mode == CheckMode::FirstViolation && !out.is_empty();

        // E1
        for a in 0..k {
            for b in 0..k {
                if stop(&out) {
                    return AxiomReport::new(Family::Effect, out);
                }
                if self.oplus(a, b).is_some() && self.oplus(a, b) != self.oplus(b, a) {
                    out.push(Violation {
                        axiom: "E1".into(),
                        witness: vec![name(a), name(b)],
                        lhs: show(self.oplus(a, b)),
                        rhs: show(self.oplus(b, a)),
                    });
                }
            }
        }
        // E2
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    if stop(&out) {
                        return AxiomReport::new(Family::Effect, out);
                    }
                    let Some(bc) = self.oplus(b, c) else { continue };
                    let Some(lhs) = self.oplus(a, bc) else {
                        continue;
                    };
                    let rhs = self.oplus(a, b).and_then(|ab| self.oplus(ab, c));
                    if rhs != Some(lhs) {
                        out.push(Violation {
                            axiom: "E2".into(),
                            witness: vec![name(a), name(b), name(c)],
                            lhs: name(lhs),
                            rhs: show(rhs),
                        });
                    }
                }
            }
        }
        // E3
        for a in 0..k {
            if stop(&out) {
                return AxiomReport::new(Family::Effect, out);
            }
            let n = (0..k)
                .filter(|&b| self.oplus(a, b) == Some(self.one))
                .count();
            if n != 1 {
                out.push(Violation {
                    axiom: "E3".into(),
                    witness: vec![name(a)],
                    lhs: format!("{n} complements"),
                    rhs: "1 complement".into(),
                });
            }
        }
        // E4
        for a in 0..k {
            if stop(&out) {
                return AxiomReport::new(Family::Effect, out);
            }
            if self.oplus(self.one, a).is_some() && a != self.zero {
                out.push(Violation {
                    axiom: "E4".into(),
                    witness: vec![name(a)],
                    lhs: format!("1 ⊕ {} defined", name(a)),
                    rhs: "a = 0".into(),
                });
            }
        }
        AxiomReport::new(Family::Effect, out)
    }

    /// Totalizes `⊕`: `a ⊞ b = a ⊕ b` where defined and `1` otherwise; `a'` is
    /// the unique `b` with `a ⊕ b = 1`.
    pub fn extend(&self) -> Result<FiniteAlgebra> {
        let report = self.check_axioms(CheckMode::FirstViolation);
        if let Some(v) = report.first() {
            return Err(AlgebraError::EffectAxioms(v.to_string()));
        }
        let k = self.size();
        let boxplus = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| self.oplus(a, b).unwrap_or(self.one))
                    .collect()
            })
            .collect();
        let complement = (0..k)
            .map(|a| {
                (0..k)
                    .find(|&b| self.oplus(a, b) == Some(self.one))
                    .expect("E3 checked above")
            })
            .collect();
        let alg = FiniteAlgebra::from_tables(
            self.name.clone(),
            self.carrier.clone(),
            self.zero,
            self.one,
            boxplus,
            complement,
        )?;
        Ok(alg.with_origin(Origin::ExtendedEffect))
    }
}
