//! Exhaustive enumeration of small algebras, used to test the algebra-level
//! theorems beyond the built-in catalog. Isomorphic copies are not removed.

use super::{CheckMode, FiniteAlgebra, PartialEffectTable};

fn carrier(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| match i {
            0 => "0".to_string(),
            i if i == k - 1 => "1".to_string(),
            i => format!("e{i}"),
        })
        .collect()
}

/// All involutions on `1..=m` (fixed points allowed), as complement tables
/// over `0..m+2` with `0 ↔ m+1`.
fn involutions(m: usize) -> Vec<Vec<usize>> {
    fn go(perm: &mut Vec<Option<usize>>, i: usize, out: &mut Vec<Vec<usize>>) {
        let m = perm.len();
        if i == m {
            out.push(perm.iter().map(|p| p.unwrap()).collect());
            return;
        }
        if perm[i].is_some() {
            return go(perm, i + 1, out);
        }
        perm[i] = Some(i);
        go(perm, i + 1, out);
        for j in i + 1..m {
            if perm[j].is_none() {
                perm[i] = Some(j);
                perm[j] = Some(i);
                go(perm, i + 1, out);
                perm[j] = None;
            }
        }
        perm[i] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; m], 0, &mut out);
    out.into_iter()
        .map(|p| {
            let mut c = vec![m + 1];
            c.extend(p.into_iter().map(|x| x + 1));
            c.push(0);
            c
        })
        .collect()
}

/// Every S-algebra (S1–S6) on `k` labelled elements with `0` first and `1` last.
pub fn enumerate_s_algebras(k: usize) -> Vec<FiniteAlgebra> {
    assert!(
        (2..=6).contains(&k),
        "enumeration is limited to 2..=6 elements"
    );
    let top = k - 1;
    let middle: Vec<usize> = (1..top).collect();
    let pairs: Vec<(usize, usize)> = middle
        .iter()
        .flat_map(|&a| {
            middle
                .iter()
                .filter(move |&&b| b >= a)
                .map(move |&b| (a, b))
        })
        .collect();
    let mut out = Vec::new();
    for complement in involutions(k - 2) {
        let mut table = vec![0usize; k * k];
        for a in 0..k {
            table[a] = a;
            table[a * k] = a;
            table[top * k + a] = top;
            table[a * k + top] = top;
        }
        let mut digits = vec![0usize; pairs.len()];
        'next: loop {
            for (&(a, b), &v) in pairs.iter().zip(&digits) {
                table[a * k + b] = v;
                table[b * k + a] = v;
            }
            let ok_s3 = middle.iter().all(|&a| table[a * k + complement[a]] == top);
            let ok_s2 = ok_s3
                && (0..k).all(|a| {
                    (0..k).all(|b| {
                        (0..k).all(|c| {
                            table[a * k + table[b * k + c]] == table[table[a * k + b] * k + c]
                        })
                    })
                });
            if ok_s2 {
                let rows = (0..k).map(|a| table[a * k..(a + 1) * k].to_vec()).collect();
                let name = format!("S{k}#{}", out.len());
                let alg =
                    FiniteAlgebra::from_tables(name, carrier(k), 0, top, rows, complement.clone())
                        .expect("enumerated tables are well-formed");
                out.push(alg);
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < k {
                    continue 'next;
                }
                *d = 0;
            }
            break;
        }
    }
    out
}

/// Every effect algebra on `k` labelled elements with `0` first and `1` last.
pub fn enumerate_effect_tables(k: usize) -> Vec<PartialEffectTable> {
    assert!(
        (2..=6).contains(&k),
        "enumeration is limited to 2..=6 elements"
    );
    let top = k - 1;
    let middle: Vec<usize> = (1..top).collect();
    let pairs: Vec<(usize, usize)> = middle
        .iter()
        .flat_map(|&a| {
            middle
                .iter()
                .filter(move |&&b| b >= a)
                .map(move |&b| (a, b))
        })
        .collect();
    let mut out = Vec::new();
    // Digit 0 encodes "undefined", digit d encodes element d - 1.
    let mut digits = vec![0usize; pairs.len()];
    'next: loop {
        let mut table = vec![vec![None; k]; k];
        for (a, row) in table.iter_mut().enumerate() {
            row[0] = Some(a);
        }
        table[0] = (0..k).map(Some).collect();
        for (&(a, b), &d) in pairs.iter().zip(&digits) {
            let v = d.checked_sub(1);
            table[a][b] = v;
            table[b][a] = v;
        }
        let name = format!("E{k}#{}", out.len());
        let p = PartialEffectTable::new(name, carrier(k), 0, top, table)
            .expect("enumerated tables are well-formed");
        if p.check_axioms(CheckMode::FirstViolation).pass {
            out.push(p);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d <= k {
                continue 'next;
            }
            *d = 0;
        }
        break;
    }
    out
}
