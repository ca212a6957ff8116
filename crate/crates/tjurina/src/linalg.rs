//! Small dense linear algebra over a [`Field`].

use crate::field::{Field, Scalar};

/// Row-reduce in place; returns pivot columns.
pub fn rref(f: &Field, m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !f.is_zero(&m[k][c])) else {
            continue;
        };
        m.swap(r, k);
        let inv = f.inv(&m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let prow = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || f.is_zero(&row[c]) {
                continue;
            }
            let s = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x = f.sub(x, &f.mul(&s, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, m: &[Vec<Scalar>]) -> usize {
    let mut m = m.to_vec();
    rref(f, &mut m).len()
}
