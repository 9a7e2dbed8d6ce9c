//! JSON files for algebras, effect tables and machines.
//!
//! Algebra: `{"name", "carrier", "zero", "one", "boxplus", "complement"}`.
//! Effect table: the same with `"oplus"` (entries may be `null`) in place of
//! `"boxplus"` and `"complement"`. Machine: `{"name", "algebra", "states",
//! "input_alphabet", "tape_alphabet", "blank", "initial", "final",
//! "transitions"}` where `"algebra"` is a built-in name or a path relative to
//! the machine file, and omitted entries mean `1`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Builtin, FiniteAlgebra, PartialEffectTable};
use crate::machine::{Machine, MachineDef, MachineError, Move, TransitionDef};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error("algebra file needs either `boxplus` and `complement`, or `oplus`")]
    MissingTables,
    #[error("unknown algebra `{0}`: neither a built-in name nor a readable file")]
    UnknownAlgebra(String),
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    carrier: Vec<String>,
    zero: String,
    one: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boxplus: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    complement: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oplus: Option<Vec<Vec<Option<String>>>>,
}

/// Contents of an algebra file.
#[derive(Debug, Clone)]
pub enum AlgebraSource {
    Total(Box<FiniteAlgebra>),
    Effect(PartialEffectTable),
}

impl AlgebraSource {
    /// The total algebra, extending an effect table if needed.
    pub fn into_algebra(self) -> Result<FiniteAlgebra> {
        match self {
            AlgebraSource::Total(a) => Ok(*a),
            AlgebraSource::Effect(p) => Ok(p.extend()?),
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<AlgebraSource> {
    let f: AlgebraFile = serde_json::from_str(text)?;
    match (f.boxplus, f.complement, f.oplus) {
        (Some(b), Some(c), None) => Ok(AlgebraSource::Total(Box::new(FiniteAlgebra::from_names(
            f.name, f.carrier, &f.zero, &f.one, &b, &c,
        )?))),
        (None, None, Some(o)) => Ok(AlgebraSource::Effect(PartialEffectTable::from_names(
            f.name, f.carrier, &f.zero, &f.one, &o,
        )?)),
        _ => Err(IoError::MissingTables),
    }
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    let f = AlgebraFile {
        name: a.name().to_string(),
        carrier: a.carrier().to_vec(),
        zero: a.name_of(a.zero()).to_string(),
        one: a.name_of(a.one()).to_string(),
        boxplus: Some(a.boxplus_names()),
        complement: Some(a.complement_names()),
        oplus: None,
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

pub fn effect_to_json(p: &PartialEffectTable) -> String {
    let f = AlgebraFile {
        name: p.name.clone(),
        carrier: p.carrier.clone(),
        zero: p.carrier[p.zero].clone(),
        one: p.carrier[p.one].clone(),
        boxplus: None,
        complement: None,
        oplus: Some(p.oplus_names()),
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_algebra_source(path: &Path) -> Result<AlgebraSource> {
    parse_algebra(&read(path)?)
}

/// A built-in name such as `L3`, `D4` or `L2xL3`, or a path to an algebra
/// file (relative paths are taken from `base_dir`).
pub fn resolve_algebra(reference: &str, base_dir: Option<&Path>) -> Result<FiniteAlgebra> {
    let path = match base_dir {
        Some(dir) => dir.join(reference),
        None => PathBuf::from(reference),
    };
    if path.is_file() {
        return load_algebra_source(&path)?.into_algebra();
    }
    match reference.parse::<Builtin>() {
        Ok(b) => Ok(b.build()?),
        Err(_) => Err(IoError::UnknownAlgebra(reference.to_string())),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    from: String,
    read: String,
    to: String,
    write: String,
    #[serde(rename = "move")]
    mv: Move,
    value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineFile {
    name: String,
    algebra: String,
    states: Vec<String>,
    input_alphabet: Vec<String>,
    tape_alphabet: Vec<String>,
    blank: String,
    #[serde(default)]
    initial: BTreeMap<String, String>,
    #[serde(default, rename = "final")]
    final_values: BTreeMap<String, String>,
    #[serde(default)]
    transitions: Vec<TransitionFile>,
}

/// The `"algebra"` field of a machine file without loading the machine.
pub fn machine_algebra_ref(text: &str) -> Result<String> {
    #[derive(Deserialize)]
    struct Head {
        algebra: String,
    }
    Ok(serde_json::from_str::<Head>(text)?.algebra)
}

/// Parses and validates a machine; `resolve` turns the `"algebra"` field
/// into an algebra.
pub fn parse_machine(
    text: &str,
    resolve: impl FnOnce(&str) -> Result<Arc<FiniteAlgebra>>,
) -> Result<Machine> {
    let f: MachineFile = serde_json::from_str(text)?;
    let alg = resolve(&f.algebra)?;
    let e = |n: &str| alg.element(n);
    let map = |m: &BTreeMap<String, String>| -> Result<BTreeMap<_, _>> {
        m.iter().map(|(k, v)| Ok((k.clone(), e(v)?))).collect()
    };
    let def = MachineDef {
        name: f.name,
        algebra: alg.clone(),
        states: f.states,
        input_alphabet: f.input_alphabet,
        tape_alphabet: f.tape_alphabet,
        blank: f.blank,
        initial: map(&f.initial)?,
        final_values: map(&f.final_values)?,
        transitions: f
            .transitions
            .iter()
            .map(|t| {
                Ok(TransitionDef::new(
                    &t.from,
                    &t.read,
                    &t.to,
                    &t.write,
                    t.mv,
                    e(&t.value)?,
                ))
            })
            .collect::<Result<_>>()?,
    };
    Ok(def.build()?)
}

/// Loads a machine file, resolving its algebra next to the file.
pub fn load_machine(path: &Path) -> Result<Machine> {
    let text = read(path)?;
    let dir = path.parent().map(Path::to_path_buf);
    parse_machine(&text, |r| Ok(Arc::new(resolve_algebra(r, dir.as_deref())?)))
}

/// Serializes a machine; `algebra_ref` is written to the `"algebra"` field.
pub fn machine_to_json(m: &Machine, algebra_ref: &str) -> String {
    let def = m.to_def();
    let alg = m.algebra();
    let names = |map: &BTreeMap<String, crate::algebra::Element>| {
        map.iter()
            .map(|(k, &v)| (k.clone(), alg.name_of(v).to_string()))
            .collect()
    };
    let f = MachineFile {
        name: def.name.clone(),
        algebra: algebra_ref.to_string(),
        states: def.states.clone(),
        input_alphabet: def.input_alphabet.clone(),
        tape_alphabet: def.tape_alphabet.clone(),
        blank: def.blank.clone(),
        initial: names(&def.initial),
        final_values: names(&def.final_values),
        transitions: def
            .transitions
            .iter()
            .map(|t| TransitionFile {
                from: t.from.clone(),
                read: t.read.clone(),
                to: t.to.clone(),
                write: t.write.clone(),
                mv: t.mv,
                value: alg.name_of(t.value).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}
