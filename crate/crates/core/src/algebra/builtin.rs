use std::fmt;
use std::str::FromStr;

use super::{AlgebraError, FiniteAlgebra, Origin, PartialEffectTable, Result};

/// Catalog of algebras that can be built without a table file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    /// The `n`-element Łukasiewicz chain `{0, 1/(n-1), …, 1}`.
    Lukasiewicz(usize),
    /// The four-element diamond `{0, p, q, 1}`, extended from its effect table.
    Diamond,
    /// Componentwise product.
    Product(Box<Builtin>, Box<Builtin>),
}

impl Builtin {
    pub fn build(&self) -> Result<FiniteAlgebra> {
        match self {
            Builtin::Lukasiewicz(n) => lukasiewicz(*n),
            Builtin::Diamond => diamond_effect_table().extend(),
            Builtin::Product(a, b) => product(&a.build()?, &b.build()?),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Lukasiewicz(n) => write!(f, "L{n}"),
            Builtin::Diamond => f.write_str("D4"),
            Builtin::Product(a, b) => write!(f, "{a}x{b}"),
        }
    }
}

impl FromStr for Builtin {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || AlgebraError::UnknownBuiltin(s.to_string());
        if let Some(inner) = s.strip_prefix("product(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = split_top_level(inner).ok_or_else(unknown)?;
            return Ok(Builtin::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        if let Some((a, b)) = s.split_once('x') {
            if !a.is_empty() && !b.is_empty() {
                return Ok(Builtin::Product(Box::new(a.parse()?), Box::new(b.parse()?)));
            }
        }
        let lower = s.to_lowercase();
        if lower == "d4" || lower == "diamond" {
            return Ok(Builtin::Diamond);
        }
        let digits = lower
            .strip_prefix("lukasiewicz(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix('l'))
            .or_else(|| lower.strip_prefix('ł'))
            .ok_or_else(unknown)?;
        let n: usize = digits.parse().map_err(|_| unknown())?;
        Ok(Builtin::Lukasiewicz(n))
    }
}

fn split_top_level(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((s[..i].trim(), s[i + 1..].trim())),
            _ => {}
        }
    }
    None
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn chain_names(n: usize) -> Vec<String> {
    let d = n - 1;
    (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == d => "1".to_string(),
            i => {
                let g = gcd(i, d);
                format!("{}/{}", i / g, d / g)
            }
        })
        .collect()
}

fn lukasiewicz(n: usize) -> Result<FiniteAlgebra> {
    if n < 2 {
        return Err(AlgebraError::ChainTooShort(n));
    }
    let top = n - 1;
    let boxplus = (0..n)
        .map(|a| (0..n).map(|b| (a + b).min(top)).collect())
        .collect();
    let complement = (0..n).map(|a| top - a).collect();
    FiniteAlgebra::from_tables(format!("L{n}"), chain_names(n), 0, top, boxplus, complement)
}

/// The Łukasiewicz chain as an effect algebra: `a ⊕ b` defined iff `a + b ≤ 1`.
pub fn lukasiewicz_effect_table(n: usize) -> Result<PartialEffectTable> {
    if n < 2 {
        return Err(AlgebraError::ChainTooShort(n));
    }
    let top = n - 1;
    let oplus = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if a + b <= top { Some(a + b) } else { None })
                .collect()
        })
        .collect();
    PartialEffectTable::new(format!("L{n}"), chain_names(n), 0, top, oplus)
}

/// The diamond effect algebra: `p ⊕ q = 1`, `p ⊕ p` and `q ⊕ q` undefined.
pub fn diamond_effect_table() -> PartialEffectTable {
    let carrier = ["0", "p", "q", "1"].iter().map(|s| s.to_string()).collect();
    let n = None;
    let oplus = vec![
        vec![Some(0), Some(1), Some(2), Some(3)],
        vec![Some(1), n, Some(3), n],
        vec![Some(2), Some(3), n, n],
        vec![Some(3), n, n, n],
    ];
    PartialEffectTable::new("D4", carrier, 0, 3, oplus).expect("static diamond table")
}

fn product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let (ka, kb) = (a.size(), b.size());
    let idx = |i: usize, j: usize| i * kb + j;
    let carrier = (0..ka)
        .flat_map(|i| (0..kb).map(move |j| (i, j)))
        .map(|(i, j)| format!("({},{})", a.carrier()[i], b.carrier()[j]))
        .collect();
    let mut boxplus = vec![vec![0; ka * kb]; ka * kb];
    for i in 0..ka {
        for j in 0..kb {
            for x in 0..ka {
                for y in 0..kb {
                    boxplus[idx(i, j)][idx(x, y)] = idx(a.add_ix(i, x), b.add_ix(j, y));
                }
            }
        }
    }
    let complement = (0..ka)
        .flat_map(|i| (0..kb).map(move |j| (i, j)))
        .map(|(i, j)| idx(a.neg_ix(i), b.neg_ix(j)))
        .collect();
    let alg = FiniteAlgebra::from_tables(
        format!("{}x{}", a.name(), b.name()),
        carrier,
        idx(a.zero_ix(), b.zero_ix()),
        idx(a.one_ix(), b.one_ix()),
        boxplus,
        complement,
    )?;
    Ok(alg.with_origin(Origin::Table))
}
