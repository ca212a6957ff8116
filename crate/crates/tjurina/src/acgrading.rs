//! The AC-graded Tjurina algebra: graded pieces, regular bases and counts of
//! high-valuation basis monomials.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::localalg::{self, Echelon, IdealGens, LocalQuotient, Row};
use crate::newton::CPolytope;
use crate::series::{Monomial, SeriesPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AcError {
    #[error("no window of vanishing pieces below valuation {cap}")]
    NotFinite { cap: i64 },
    #[error("extended Tjurina algebra not certified finite below degree cap {0}")]
    Uncertified(u32),
    #[error("zero series")]
    ZeroSeries,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceReport {
    pub degree: i64,
    pub piece_dimension: usize,
    pub standard_monomials: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularBasis {
    /// Basis monomials with their valuations, by valuation then monomial order.
    pub monomials: Vec<(Monomial, i64)>,
    pub finite: bool,
    /// Valuations `[lo, hi]` over which every piece was checked to vanish.
    pub certificate_window: (i64, i64),
}

impl RegularBasis {
    pub fn max_valuation(&self) -> Option<i64> {
        self.monomials.iter().map(|(_, v)| *v).max()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{a >= 0 : (W_l - W_j) . a >= 0 for all l}`.
fn cone_rays(p: &CPolytope, j: usize) -> Vec<Vec<i64>> {
    let n = p.nvars();
    let w = p.weights();
    let mut cons: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|k| i64::from(i == k)).collect())
        .collect();
    for (l, wl) in w.iter().enumerate() {
        if l != j {
            cons.push(wl.iter().zip(&w[j]).map(|(a, b)| a - b).collect());
        }
    }
    let feasible = |r: &[i64]| cons.iter().all(|c| dot(c, r) >= 0) && r.iter().any(|&x| x != 0);
    let mut cands: Vec<Vec<i64>> = Vec::new();
    match n {
        1 => cands.push(vec![1]),
        2 => {
            for c in &cons {
                cands.push(vec![c[1], -c[0]]);
                cands.push(vec![-c[1], c[0]]);
            }
        }
        _ => {
            for (a, ca) in cons.iter().enumerate() {
                for cb in &cons[a + 1..] {
                    let r = vec![
                        ca[1] * cb[2] - ca[2] * cb[1],
                        ca[2] * cb[0] - ca[0] * cb[2],
                        ca[0] * cb[1] - ca[1] * cb[0],
                    ];
                    cands.push(r.iter().map(|x| -x).collect());
                    cands.push(r);
                }
            }
        }
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    for r in cands {
        if !feasible(&r) {
            continue;
        }
        let g = r.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
        let r: Vec<i64> = r.into_iter().map(|x| x / g).collect();
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Largest facet value of a Hilbert basis element of the cone where facet `j`
/// attains the minimum. Every lattice point of that cone is a sum of such
/// elements, each of facet value at most this bound.
fn hilbert_window(p: &CPolytope, j: usize) -> i64 {
    let n = p.nvars();
    let w = &p.weights()[j];
    let rays = cone_rays(p, j);
    let bound: i64 = rays.iter().map(|r| dot(w, r)).sum();
    let in_cone = |a: &[u32]| p.v_exps(a) == p.facet_value(j, a);
    // lattice points of the cone with facet value <= bound
    let mut pts: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(w: &[i64], i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0u32;
        while e as i64 * w[i] <= left {
            cur[i] = e;
            rec(w, i + 1, left - e as i64 * w[i], cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(w, 0, bound, &mut cur, &mut pts);
    pts.retain(|a| a.iter().any(|&x| x > 0) && in_cone(a));
    pts.sort_by_key(|a| p.facet_value(j, a));
    let mut irreducible: Vec<Vec<u32>> = Vec::new();
    for a in &pts {
        let reducible = irreducible.iter().any(|h| {
            h.iter().zip(a).all(|(x, y)| x <= y) && {
                let rest: Vec<u32> = a.iter().zip(h).map(|(x, y)| x - y).collect();
                rest.iter().any(|&x| x > 0) && in_cone(&rest)
            }
        });
        if !reducible {
            irreducible.push(a.clone());
        }
    }
    irreducible
        .iter()
        .map(|h| p.facet_value(j, h))
        .max()
        .unwrap_or(0)
}

/// Length of the window of vanishing pieces that certifies finiteness.
pub fn window_length(p: &CPolytope) -> i64 {
    (0..p.weights().len())
        .map(|j| hilbert_window(p, j))
        .max()
        .unwrap()
}

/// Monomials bucketed by valuation and by the valuation of `u * d/dx_i`.
struct Buckets {
    by_value: BTreeMap<i64, Vec<Monomial>>,
    by_derivation: Vec<HashMap<i64, Vec<Monomial>>>,
    reach: i64,
}

impl Buckets {
    fn new(p: &CPolytope, reach: i64) -> Self {
        let n = p.nvars();
        let maxw: Vec<i64> = (0..n)
            .map(|i| p.weights().iter().map(|w| w[i]).max().unwrap())
            .collect();
        let top = reach + maxw.iter().max().unwrap();
        let mut by_value: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
        let mut by_derivation = vec![HashMap::new(); n];
        for m in p.monomials_up_to(top) {
            let v = p.v_monomial(&m);
            for (i, map) in by_derivation.iter_mut().enumerate() {
                let vd = p.v_derivation(&m, i);
                if vd <= reach {
                    map.entry(vd).or_insert_with(Vec::new).push(m.clone());
                }
            }
            if v <= reach {
                by_value.entry(v).or_default().push(m);
            }
        }
        Buckets {
            by_value,
            by_derivation,
            reach,
        }
    }
}

/// Graded pieces of `gr^AC` for one series and polytope.
pub struct AcGrading {
    f: SeriesPoly,
    p: CPolytope,
    vf: i64,
    grad: Vec<SeriesPoly>,
    buckets: Buckets,
}

impl AcGrading {
    /// Pieces up to valuation `reach`. With `raw`, pieces are built from `f`
    /// itself instead of its initial part.
    pub fn new(f: &SeriesPoly, p: &CPolytope, reach: i64, raw: bool) -> Result<Self, AcError> {
        if f.is_zero() {
            return Err(AcError::ZeroSeries);
        }
        let f = if raw { f.clone() } else { p.initial_part(f) };
        let vf = p.v_series(&f).unwrap();
        Ok(AcGrading {
            grad: f.gradient(),
            f,
            p: p.clone(),
            vf,
            buckets: Buckets::new(p, reach),
        })
    }

    pub fn v_f(&self) -> i64 {
        self.vf
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.buckets.by_value.keys().copied()
    }

    pub fn piece(&self, d: i64) -> GradedPieceReport {
        assert!(
            d <= self.buckets.reach,
            "valuation beyond precomputed reach"
        );
        let cols: Vec<Monomial> = self.buckets.by_value.get(&d).cloned().unwrap_or_default();
        let index: HashMap<&Monomial, u32> = cols
            .iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32))
            .collect();
        let field = self.f.field();
        let mut ech = Echelon::new(field, cols.len(), false);
        let mut push = |g: &SeriesPoly| {
            let mut row: Row = self
                .p
                .graded_part(g, d)
                .terms()
                .map(|(m, c)| (index[m], c.clone()))
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            ech.insert(row);
        };
        let e = d - self.vf;
        if let Some(us) = self.buckets.by_value.get(&e) {
            for u in us {
                push(&self.f.mul_monomial(u));
            }
        }
        for (i, map) in self.buckets.by_derivation.iter().enumerate() {
            if let Some(us) = map.get(&e) {
                for u in us {
                    push(&self.grad[i].mul_monomial(u));
                }
            }
        }
        let standard: Vec<Monomial> = (0..cols.len() as u32)
            .filter(|&c| !ech.is_pivot(c))
            .map(|c| cols[c as usize].clone())
            .collect();
        GradedPieceReport {
            degree: d,
            piece_dimension: standard.len(),
            standard_monomials: standard,
        }
    }
}

pub fn ac_piece(f: &SeriesPoly, p: &CPolytope, d: i64) -> Result<GradedPieceReport, AcError> {
    Ok(AcGrading::new(f, p, d.max(0), false)?.piece(d))
}

/// Default valuation cap: the degree cap times the largest variable value.
pub fn default_valuation_cap(p: &CPolytope) -> i64 {
    localalg::default_cap(p.nvars()) as i64 * p.var_values().into_iter().max().unwrap()
}

/// Regular basis, declared finite once a window of vanishing pieces of length
/// [`window_length`] is seen.
pub fn regular_basis(
    f: &SeriesPoly,
    p: &CPolytope,
    cap: i64,
    raw: bool,
) -> Result<RegularBasis, AcError> {
    let win = window_length(p);
    let g = AcGrading::new(f, p, cap, raw)?;
    let mut monomials = Vec::new();
    // start of the current run of vanishing pieces
    let mut run_start: Option<i64> = None;
    for d in g.values().collect::<Vec<_>>() {
        let piece = g.piece(d);
        if piece.piece_dimension > 0 {
            monomials.extend(piece.standard_monomials.into_iter().map(|m| (m, d)));
            run_start = None;
            continue;
        }
        let lo = *run_start.get_or_insert(d);
        if d >= lo + win {
            return Ok(RegularBasis {
                monomials,
                finite: true,
                certificate_window: (lo, d),
            });
        }
    }
    Err(AcError::NotFinite { cap })
}

/// Standard monomials of the extended Tjurina algebra with
/// `v_P(f) <= v <= l`.
pub fn high_valuation_count(
    f: &SeriesPoly,
    p: &CPolytope,
    l: i64,
    cap: u32,
) -> Result<usize, AcError> {
    let q = LocalQuotient::compute(&IdealGens::tangent_ext(f), cap, false);
    let rep = q.report();
    if !rep.is_finite() {
        return Err(AcError::Uncertified(rep.cap_used));
    }
    let d = p.v_series(f).ok_or(AcError::ZeroSeries)?;
    Ok(rep
        .standard_monomials
        .iter()
        .filter(|m| (d..=l).contains(&p.v_monomial(m)))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::series::Ring;

    fn ring(p: u64) -> Ring {
        Ring::standard(Field::from_characteristic(p).unwrap(), 2)
    }

    fn p(r: &Ring, t: &[(i64, &[u32])]) -> SeriesPoly {
        SeriesPoly::from_ints(r, t)
    }

    fn w(v: &[i64]) -> CPolytope {
        CPolytope::from_weights(vec![v.to_vec()]).unwrap()
    }

    #[test]
    fn pieces() {
        let r = ring(0);
        let f = p(&r, &[(1, &[3, 0]), (1, &[0, 5])]);
        assert_eq!(ac_piece(&f, &w(&[5, 3]), 17).unwrap().piece_dimension, 0);
        let r7 = ring(7);
        let f = p(&r7, &[(1, &[3, 0]), (1, &[0, 8])]);
        let piece = ac_piece(&f, &w(&[8, 3]), 26).unwrap();
        assert_eq!(piece.piece_dimension, 1);
        assert_eq!(piece.standard_monomials[0].exps(), &[1, 6]);
        // far below v(f) even the derivations cannot reach
        let f = p(&r, &[(1, &[3, 0]), (1, &[0, 5])]);
        let c = w(&[5, 3]);
        assert_eq!(ac_piece(&f, &c, 6).unwrap().piece_dimension, 1);
        assert_eq!(ac_piece(&f, &c, 8).unwrap().piece_dimension, 1);
    }

    #[test]
    fn window_lengths() {
        assert_eq!(window_length(&w(&[5, 3])), 5);
        let two = CPolytope::from_weights(vec![vec![1, 3], vec![3, 1]]).unwrap();
        // the cone of the first facet is spanned by (1,0) and (1,1)
        assert!(window_length(&two) >= 4);
    }

    #[test]
    fn regular_bases() {
        let r7 = ring(7);
        let f0 = p(&r7, &[(1, &[3, 0]), (1, &[1, 4]), (1, &[0, 6])]);
        let rb = regular_basis(&f0, &w(&[2, 1]), 120, false).unwrap();
        let mut got: Vec<Vec<u32>> = rb
            .monomials
            .iter()
            .map(|(m, _)| m.exps().to_vec())
            .collect();
        got.sort();
        // quasi-homogeneous, so the count equals tau = 10
        let mut want = vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![1, 2]];
        want.extend((1..=6).map(|j| vec![0, j]));
        want.sort();
        assert_eq!(got, want);

        let r = ring(7);
        let g = p(&r, &[(1, &[2, 0]), (1, &[0, 2])]);
        let rb = regular_basis(&g, &w(&[1, 1]), 60, false).unwrap();
        assert_eq!(rb.monomials.len(), 1);

        let r31 = ring(31);
        let f0 = p(&r31, &[(1, &[3, 0]), (1, &[1, 4]), (1, &[0, 6])]);
        assert!(matches!(
            regular_basis(&f0, &w(&[2, 1]), 120, false),
            Err(AcError::NotFinite { .. })
        ));
    }

    #[test]
    fn high_valuation_counts() {
        let r7 = ring(7);
        let f = p(&r7, &[(1, &[3, 0]), (1, &[0, 5])]);
        assert_eq!(high_valuation_count(&f, &w(&[5, 3]), 100, 40).unwrap(), 0);
        let f = p(&r7, &[(1, &[3, 0]), (1, &[0, 8])]);
        assert_eq!(high_valuation_count(&f, &w(&[8, 3]), 26, 40).unwrap(), 1);
    }
}
