//! Sparse row echelon form with lowest-column pivots.

use std::collections::HashMap;

use crate::field::{Field, Scalar};
use crate::series::{Monomial, SeriesPoly};

/// Sparse vector, strictly increasing indices, no zero entries.
pub type Row = Vec<(u32, Scalar)>;

/// `a - c*b`.
pub fn axpy(f: &Field, a: &[(u32, Scalar)], c: &Scalar, b: &[(u32, Scalar)]) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map_or(u32::MAX, |e| e.0);
        let kb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, f.neg(&f.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = f.sub(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((ka, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_row(f: &Field, a: &mut Row, c: &Scalar) {
    for e in a.iter_mut() {
        e.1 = f.mul(&e.1, c);
    }
}

/// Monomials up to a degree, indexed in ascending order.
#[derive(Clone, Debug)]
pub struct Columns {
    nvars: usize,
    max_degree: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    /// `starts[d]` is the first column of degree `d`; one extra entry at the end.
    starts: Vec<usize>,
}

impl Columns {
    pub fn new(nvars: usize, max_degree: u32) -> Self {
        let mut monos = Vec::new();
        let mut starts = Vec::new();
        for d in 0..=max_degree {
            starts.push(monos.len());
            monos.extend(Monomial::of_degree(nvars, d));
        }
        starts.push(monos.len());
        let index = monos
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        Columns {
            nvars,
            max_degree,
            monos,
            index,
            starts,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monomial(&self, c: u32) -> &Monomial {
        &self.monos[c as usize]
    }

    pub fn col(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// Column range of degree `d`.
    pub fn degree_range(&self, d: u32) -> std::ops::Range<usize> {
        self.starts[d as usize]..self.starts[d as usize + 1]
    }

    /// First column of degree `d` (or the end).
    pub fn start(&self, d: u32) -> usize {
        self.starts[(d as usize).min(self.starts.len() - 1)]
    }

    /// Row of `p`, dropping terms above the column range.
    pub fn row(&self, p: &SeriesPoly) -> Row {
        p.terms()
            .filter(|(m, _)| m.degree() <= self.max_degree)
            .map(|(m, c)| (self.index[m], c.clone()))
            .collect::<std::collections::BTreeMap<_, _>>()
            .into_iter()
            .collect()
    }

    /// Row of `u * p`, dropping terms above the column range.
    pub fn shifted_row(&self, p: &SeriesPoly, u: &Monomial) -> Row {
        let du = u.degree();
        let mut r: Row = p
            .terms()
            .take_while(|(m, _)| m.degree() + du <= self.max_degree)
            .map(|(m, c)| (self.index[&m.mul(u)], c.clone()))
            .collect();
        r.sort_unstable_by_key(|e| e.0);
        r
    }
}

/// Echelon basis of a row space. Every stored row has leading coefficient 1
/// at its lowest column. Optionally each stored row remembers how it was
/// combined from the inserted rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    pivot_row: Vec<Option<u32>>,
    rows: Vec<Row>,
    combos: Option<Vec<Row>>,
    inserted: u32,
}

impl Echelon {
    pub fn new(field: &Field, ncols: usize, track: bool) -> Self {
        Echelon {
            field: field.clone(),
            pivot_row: vec![None; ncols],
            rows: Vec::new(),
            combos: track.then(Vec::new),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize].is_some()
    }

    pub fn pivot_count_below(&self, col: usize) -> usize {
        self.pivot_row[..col].iter().filter(|p| p.is_some()).count()
    }

    pub fn tracking(&self) -> bool {
        self.combos.is_some()
    }

    /// Number of rows offered so far; the label of the next inserted row.
    pub fn inserted(&self) -> u32 {
        self.inserted
    }

    /// Reduce the leading entry until it is not a pivot. Returns the residue
    /// and, when tracking, the combination `c` of inserted rows with
    /// `row = residue + sum c_i * inserted_i`.
    pub fn lead_reduce(&self, mut row: Row) -> (Row, Row) {
        let f = &self.field;
        let mut combo: Row = Vec::new();
        while let Some((c, v)) = row.first().cloned() {
            let Some(k) = self.pivot_row[c as usize] else {
                break;
            };
            row = axpy(f, &row, &v, &self.rows[k as usize]);
            if let Some(cs) = &self.combos {
                combo = axpy(f, &combo, &f.neg(&v), &cs[k as usize]);
            }
        }
        (row, combo)
    }

    /// Eliminate every pivot column below `limit`; entries at or above
    /// `limit` are dropped.
    pub fn full_reduce(&self, row: Row, limit: u32) -> (Row, Row) {
        let f = &self.field;
        let mut row: Row = row.into_iter().filter(|e| e.0 < limit).collect();
        let mut combo: Row = Vec::new();
        let mut i = 0;
        while i < row.len() {
            let (c, v) = row[i].clone();
            match self.pivot_row[c as usize] {
                Some(k) => {
                    let pr: Row = self.rows[k as usize]
                        .iter()
                        .filter(|e| e.0 < limit)
                        .cloned()
                        .collect();
                    row = axpy(f, &row, &v, &pr);
                    if let Some(cs) = &self.combos {
                        combo = axpy(f, &combo, &f.neg(&v), &cs[k as usize]);
                    }
                }
                None => i += 1,
            }
        }
        (row, combo)
    }

    /// Add a row; returns its pivot column if it enlarged the span.
    pub fn insert(&mut self, row: Row) -> Option<u32> {
        let label = self.inserted;
        self.inserted += 1;
        let (mut row, combo) = self.lead_reduce(row);
        let (c, v) = row.first().cloned()?;
        let f = self.field.clone();
        let inv = f.inv(&v).unwrap();
        scale_row(&f, &mut row, &inv);
        if let Some(cs) = &mut self.combos {
            let mut combo = axpy(&f, &[(label, f.one())], &f.one(), &combo);
            scale_row(&f, &mut combo, &inv);
            cs.push(combo);
        }
        self.pivot_row[c as usize] = Some(self.rows.len() as u32);
        self.rows.push(row);
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracked_combination_reconstructs_the_row() {
        let f = Field::prime(7).unwrap();
        let r = |v: &[(u32, i64)]| -> Row { v.iter().map(|&(c, x)| (c, f.from_int(x))).collect() };
        let inputs = vec![
            r(&[(0, 1), (2, 3)]),
            r(&[(0, 2), (1, 1)]),
            r(&[(1, 5), (2, 1)]),
        ];
        let mut e = Echelon::new(&f, 3, true);
        for row in &inputs {
            e.insert(row.clone());
        }
        assert_eq!(e.rank(), 3);
        let target = r(&[(0, 4), (1, 6), (2, 2)]);
        let (res, combo) = e.lead_reduce(target.clone());
        assert!(res.is_empty());
        let mut acc: Row = Vec::new();
        for (label, c) in &combo {
            acc = axpy(&f, &acc, &f.neg(c), &inputs[*label as usize]);
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn columns_are_graded() {
        let c = Columns::new(2, 3);
        assert_eq!(c.len(), 10);
        assert_eq!(c.degree_range(2), 3..6);
        assert_eq!(c.monomial(3).exps(), &[2, 0]);
    }
}
