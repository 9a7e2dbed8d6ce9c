//! Finite, table-driven S-algebras.
//!
//! A [`FiniteAlgebra`] is given by its `⊞` and `'` tables together with the
//! constants `0` and `1`. Everything else (the derived operations `⊙`, `⊓`,
//! `⊔`, the order, and lattice meet/join when they exist) is computed once at
//! construction time, so an algebra is immutable and cheap to share.
//!
//! Elements carry the identity of the algebra they were drawn from; mixing
//! elements of different algebras is reported as [`AlgebraError::Mismatch`].

mod axioms;
mod builtin;
mod closure;
mod effect;
mod enumerate;

pub use axioms::{AxiomReport, CheckMode, Family, Violation};
pub use builtin::{diamond_effect_table, lukasiewicz_effect_table, Builtin};
pub use effect::PartialEffectTable;
pub use enumerate::{enumerate_effect_tables, enumerate_s_algebras};

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Structural identity of an algebra: a hash of its name and tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraId(u64);

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// An element of a specific [`FiniteAlgebra`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    algebra: AlgebraId,
    index: u32,
}

impl Element {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn algebra(self) -> AlgebraId {
        self.algebra
    }
}

/// Where an algebra's tables came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Table,
    /// Totalization of a partial effect algebra (undefined sums become `1`).
    ExtendedEffect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedOp {
    /// `a ⊙ b = (a' ⊞ b')'`
    Odot,
    /// `a ⊓ b = (a ⊞ b') ⊙ b`
    QMeet,
    /// `a ⊔ b = (a ⊙ b') ⊞ b`
    QJoin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Meet,
    Join,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("element belongs to a different algebra")]
    Mismatch,
    #[error("algebra `{0}` is not lattice-ordered")]
    NotALattice(String),
    #[error("carrier must have at least two elements")]
    TooSmall,
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("element names must be non-empty")]
    EmptyName,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("zero and one must be distinct elements")]
    ZeroIsOne,
    #[error("{table} table has wrong shape: expected {expected} entries, found {found}")]
    Shape {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("table entry {0} is out of range")]
    OutOfRange(usize),
    #[error("{family} check requires {prerequisite} to pass first")]
    Prerequisite {
        family: Family,
        prerequisite: Family,
    },
    #[error("{0} check does not apply to a total algebra")]
    WrongInput(Family),
    #[error("closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("effect algebra axioms violated ({0})")]
    EffectAxioms(String),
    #[error("Lukasiewicz chain needs n >= 2, got {0}")]
    ChainTooShort(usize),
    #[error("unknown built-in algebra `{0}`")]
    UnknownBuiltin(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

/// A finite S-algebra `(E, ⊞, ', 0, 1)` with its derived structure cached.
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    id: AlgebraId,
    name: String,
    carrier: Vec<String>,
    by_name: HashMap<String, usize>,
    zero: usize,
    one: usize,
    boxplus: Vec<usize>,
    complement: Vec<usize>,
    odot: Vec<usize>,
    qmeet: Vec<usize>,
    qjoin: Vec<usize>,
    leq: Vec<bool>,
    lattice: Option<LatticeTables>,
    origin: Origin,
}

#[derive(Debug, Clone)]
struct LatticeTables {
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.carrier == other.carrier
            && self.boxplus == other.boxplus
            && self.complement == other.complement
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    /// Builds an algebra from index tables. `boxplus[a][b]` is `a ⊞ b`.
    pub fn from_tables(
        name: impl Into<String>,
        carrier: Vec<String>,
        zero: usize,
        one: usize,
        boxplus: Vec<Vec<usize>>,
        complement: Vec<usize>,
    ) -> Result<Self> {
        let k = carrier.len();
        if k < 2 {
            return Err(AlgebraError::TooSmall);
        }
        let mut by_name = HashMap::with_capacity(k);
        for (i, n) in carrier.iter().enumerate() {
            if n.is_empty() {
                return Err(AlgebraError::EmptyName);
            }
            if by_name.insert(n.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateName(n.clone()));
            }
        }
        if zero >= k {
            return Err(AlgebraError::OutOfRange(zero));
        }
        if one >= k {
            return Err(AlgebraError::OutOfRange(one));
        }
        if zero == one {
            return Err(AlgebraError::ZeroIsOne);
        }
        if boxplus.len() != k {
            return Err(AlgebraError::Shape {
                table: "boxplus",
                expected: k,
                found: boxplus.len(),
            });
        }
        let mut flat = Vec::with_capacity(k * k);
        for row in &boxplus {
            if row.len() != k {
                return Err(AlgebraError::Shape {
                    table: "boxplus row",
                    expected: k,
                    found: row.len(),
                });
            }
            for &v in row {
                if v >= k {
                    return Err(AlgebraError::OutOfRange(v));
                }
                flat.push(v);
            }
        }
        if complement.len() != k {
            return Err(AlgebraError::Shape {
                table: "complement",
                expected: k,
                found: complement.len(),
            });
        }
        if let Some(&v) = complement.iter().find(|&&v| v >= k) {
            return Err(AlgebraError::OutOfRange(v));
        }
        let name = name.into();
        Ok(Self::assemble(
            name, carrier, by_name, zero, one, flat, complement,
        ))
    }

    /// Builds an algebra from element names, as found in algebra files.
    pub fn from_names(
        name: impl Into<String>,
        carrier: Vec<String>,
        zero: &str,
        one: &str,
        boxplus: &[Vec<String>],
        complement: &[String],
    ) -> Result<Self> {
        let lookup = |n: &str| {
            carrier
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| AlgebraError::UnknownElement(n.to_string()))
        };
        let zero = lookup(zero)?;
        let one = lookup(one)?;
        let boxplus = boxplus
            .iter()
            .map(|row| row.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let complement = complement
            .iter()
            .map(|n| lookup(n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_tables(name, carrier, zero, one, boxplus, complement)
    }

    fn assemble(
        name: String,
        carrier: Vec<String>,
        by_name: HashMap<String, usize>,
        zero: usize,
        one: usize,
        boxplus: Vec<usize>,
        complement: Vec<usize>,
    ) -> Self {
        let k = carrier.len();
        let mut hasher = DefaultHasher::new();
        name.hash(&mut hasher);
        carrier.hash(&mut hasher);
        zero.hash(&mut hasher);
        one.hash(&mut hasher);
        boxplus.hash(&mut hasher);
        complement.hash(&mut hasher);
        let id = AlgebraId(hasher.finish());

        let add = |a: usize, b: usize| boxplus[a * k + b];
        let neg = |a: usize| complement[a];
        let mut odot = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                odot[a * k + b] = neg(add(neg(a), neg(b)));
            }
        }
        let mut qmeet = vec![0; k * k];
        let mut qjoin = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                qmeet[a * k + b] = odot[add(a, neg(b)) * k + b];
                qjoin[a * k + b] = add(odot[a * k + neg(b)], b);
            }
        }
        let mut leq = vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                leq[a * k + b] = qmeet[a * k + b] == a;
            }
        }
        let lattice = lattice_tables(k, &leq);
        FiniteAlgebra {
            id,
            name,
            carrier,
            by_name,
            zero,
            one,
            boxplus,
            complement,
            odot,
            qmeet,
            qjoin,
            leq,
            lattice,
            origin: Origin::Table,
        }
    }

    pub(crate) fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// Number of carrier elements.
    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn zero(&self) -> Element {
        self.elem(self.zero)
    }

    pub fn one(&self) -> Element {
        self.elem(self.one)
    }

    /// The element at carrier position `index`. Panics when out of range.
    pub fn elem(&self, index: usize) -> Element {
        assert!(index < self.size(), "element index {index} out of range");
        Element {
            algebra: self.id,
            index: index as u32,
        }
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        self.by_name
            .get(name)
            .map(|&i| self.elem(i))
            .ok_or_else(|| AlgebraError::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size()).map(|i| self.elem(i))
    }

    pub fn name_of(&self, e: Element) -> &str {
        &self.carrier[e.index()]
    }

    pub fn owns(&self, e: Element) -> bool {
        e.algebra == self.id && e.index() < self.size()
    }

    fn check(&self, e: Element) -> Result<usize> {
        if self.owns(e) {
            Ok(e.index())
        } else {
            Err(AlgebraError::Mismatch)
        }
    }

    pub fn is_zero(&self, e: Element) -> bool {
        self.owns(e) && e.index() == self.zero
    }

    pub fn is_one(&self, e: Element) -> bool {
        self.owns(e) && e.index() == self.one
    }

    pub fn boxplus(&self, a: Element, b: Element) -> Result<Element> {
        Ok(self.elem(self.add_ix(self.check(a)?, self.check(b)?)))
    }

    pub fn complement(&self, a: Element) -> Result<Element> {
        Ok(self.elem(self.neg_ix(self.check(a)?)))
    }

    pub fn derived_op(&self, kind: DerivedOp, a: Element, b: Element) -> Result<Element> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        let table = match kind {
            DerivedOp::Odot => &self.odot,
            DerivedOp::QMeet => &self.qmeet,
            DerivedOp::QJoin => &self.qjoin,
        };
        Ok(self.elem(table[a * self.size() + b]))
    }

    /// `a ≤ b` iff `a = a ⊓ b`.
    pub fn leq(&self, a: Element, b: Element) -> Result<bool> {
        Ok(self.leq_ix(self.check(a)?, self.check(b)?))
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice.is_some()
    }

    pub fn lattice_op(&self, kind: LatticeOp, a: Element, b: Element) -> Result<Element> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        let tables = self
            .lattice
            .as_ref()
            .ok_or_else(|| AlgebraError::NotALattice(self.name.clone()))?;
        let k = self.size();
        let v = match kind {
            LatticeOp::Meet => tables.meet[a * k + b],
            LatticeOp::Join => tables.join[a * k + b],
        };
        Ok(self.elem(v))
    }

    pub fn meet(&self, a: Element, b: Element) -> Result<Element> {
        self.lattice_op(LatticeOp::Meet, a, b)
    }

    pub fn join(&self, a: Element, b: Element) -> Result<Element> {
        self.lattice_op(LatticeOp::Join, a, b)
    }

    /// `a ⊞ a ⊞ … ⊞ a` (`n` copies); `0·a = 0`.
    pub fn multiple(&self, n: usize, a: Element) -> Result<Element> {
        let a = self.check(a)?;
        let mut acc = self.zero;
        for _ in 0..n {
            acc = self.add_ix(acc, a);
        }
        Ok(self.elem(acc))
    }

    // Unchecked index-level operations for hot loops inside the crate.

    #[inline]
    pub(crate) fn add_ix(&self, a: usize, b: usize) -> usize {
        self.boxplus[a * self.size() + b]
    }

    #[inline]
    pub(crate) fn neg_ix(&self, a: usize) -> usize {
        self.complement[a]
    }

    #[inline]
    pub(crate) fn qmeet_ix(&self, a: usize, b: usize) -> usize {
        self.qmeet[a * self.size() + b]
    }

    #[inline]
    pub(crate) fn qjoin_ix(&self, a: usize, b: usize) -> usize {
        self.qjoin[a * self.size() + b]
    }

    #[inline]
    pub(crate) fn leq_ix(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    /// Lattice meet by index. Callers must have checked [`is_lattice`](Self::is_lattice).
    #[inline]
    pub(crate) fn meet_ix(&self, a: usize, b: usize) -> usize {
        let t = self
            .lattice
            .as_ref()
            .expect("meet on a non-lattice algebra");
        t.meet[a * self.size() + b]
    }

    #[inline]
    pub(crate) fn join_ix(&self, a: usize, b: usize) -> usize {
        let t = self
            .lattice
            .as_ref()
            .expect("join on a non-lattice algebra");
        t.join[a * self.size() + b]
    }

    pub(crate) fn zero_ix(&self) -> usize {
        self.zero
    }

    pub(crate) fn one_ix(&self) -> usize {
        self.one
    }

    /// The `⊞` table as element names, row `a`, column `b`.
    pub fn boxplus_names(&self) -> Vec<Vec<String>> {
        let k = self.size();
        (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| self.carrier[self.add_ix(a, b)].clone())
                    .collect()
            })
            .collect()
    }

    pub fn complement_names(&self) -> Vec<String> {
        self.complement
            .iter()
            .map(|&c| self.carrier[c].clone())
            .collect()
    }

    /// Probe for `a ≤ a ⊞ b` over all pairs; dominance pruning relies on it.
    pub fn is_monotone_addition(&self) -> bool {
        let k = self.size();
        (0..k).all(|a| (0..k).all(|b| self.leq_ix(a, self.add_ix(a, b))))
    }
}

/// Meet and join tables when `leq` is a partial order with all binary glbs and lubs.
fn lattice_tables(k: usize, leq: &[bool]) -> Option<LatticeTables> {
    let le = |a: usize, b: usize| leq[a * k + b];
    for a in 0..k {
        if !le(a, a) {
            return None;
        }
        for b in 0..k {
            if a != b && le(a, b) && le(b, a) {
                return None;
            }
            for c in 0..k {
                if le(a, b) && le(b, c) && !le(a, c) {
                    return None;
                }
            }
        }
    }
    let mut meet = vec![0; k * k];
    let mut join = vec![0; k * k];
    for a in 0..k {
        for b in 0..k {
            let lower: Vec<usize> = (0..k).filter(|&x| le(x, a) && le(x, b)).collect();
            let glb = lower
                .iter()
                .copied()
                .find(|&g| lower.iter().all(|&x| le(x, g)))?;
            let upper: Vec<usize> = (0..k).filter(|&x| le(a, x) && le(b, x)).collect();
            let lub = upper
                .iter()
                .copied()
                .find(|&l| upper.iter().all(|&x| le(l, x)))?;
            meet[a * k + b] = glb;
            join[a * k + b] = lub;
        }
    }
    Some(LatticeTables { meet, join })
}

/// A subset of one algebra's carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    algebra: AlgebraId,
    members: Vec<bool>,
}

impl ElementSet {
    pub fn empty(algebra: &FiniteAlgebra) -> Self {
        ElementSet {
            algebra: algebra.id(),
            members: vec![false; algebra.size()],
        }
    }

    pub fn from_elements(
        algebra: &FiniteAlgebra,
        elements: impl IntoIterator<Item = Element>,
    ) -> Result<Self> {
        let mut set = Self::empty(algebra);
        for e in elements {
            set.insert(e)?;
        }
        Ok(set)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    /// Adds `e`; returns whether it was newly inserted.
    pub fn insert(&mut self, e: Element) -> Result<bool> {
        if e.algebra != self.algebra || e.index() >= self.members.len() {
            return Err(AlgebraError::Mismatch);
        }
        let fresh = !self.members[e.index()];
        self.members[e.index()] = true;
        Ok(fresh)
    }

    pub fn contains(&self, e: Element) -> bool {
        e.algebra == self.algebra && self.members.get(e.index()).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in carrier order.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let algebra = self.algebra;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(i, _)| Element {
                algebra,
                index: i as u32,
            })
    }

    pub(crate) fn indices(&self) -> Vec<usize> {
        self.iter().map(Element::index).collect()
    }
}
