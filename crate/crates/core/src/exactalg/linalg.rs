//! Dense Gaussian elimination over a [`FieldSpec`].

use super::field::{FieldElement, FieldSpec};

/// Row-reduce in place; returns the pivot columns.
pub fn row_reduce(f: &FieldSpec, rows: &mut Vec<Vec<FieldElement>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let k = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = f.sub(*x, f.mul(k, y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FieldSpec, mut rows: Vec<Vec<FieldElement>>) -> usize {
    row_reduce(f, &mut rows).len()
}

/// Basis of `{v : M v = 0}`.
pub fn kernel(f: &FieldSpec, mut rows: Vec<Vec<FieldElement>>, ncols: usize) -> Vec<Vec<FieldElement>> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; ncols];
                v[i] = FieldElement::ONE;
                v
            })
            .collect();
    }
    let pivots = row_reduce(f, &mut rows);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::ZERO; ncols];
        v[free] = FieldElement::ONE;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(rows[i][free]);
        }
        out.push(v);
    }
    out
}
