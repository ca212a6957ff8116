//! Determinacy bounds, complete transversals and semiuniversal bases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::acgrading::{self, AcError};
use crate::localalg::{Columns, Echelon, IdealGens, LocalQuotient};
use crate::newton::CPolytope;
use crate::series::{Monomial, SeriesPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("singularity not isolated below degree cap {0}")]
    NotIsolated(u32),
    #[error("no determinacy bound below degree cap {0}")]
    NoBoundBelowCap(u32),
    #[error("regular basis is not finite: {0}")]
    RegularBasisInfinite(AcError),
    #[error("extended Tjurina algebra not certified below degree cap {0}")]
    Uncertified(u32),
    #[error("jet range needs k <= l, got ({0}, {1})")]
    BadRange(u32, u32),
    #[error("series vanishes")]
    ZeroSeries,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Method {
    /// `m^(k0+2)` lies in `m<f> + m^2 j(f)`; the containment was certified at
    /// that degree.
    TangentImage { k0: u32 },
    /// `d` bounds the regular basis; every monomial of degree `k+1` has
    /// valuation at least `witness > d`.
    Polytope { d: i64, witness: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminacyBound {
    pub k: u32,
    pub method: Method,
}

pub fn determinacy_tangent(f: &SeriesPoly, cap: u32) -> Result<DeterminacyBound, DetError> {
    let ord = f.ord().ok_or(DetError::ZeroSeries)?;
    if !crate::localalg::tau(f, cap).is_finite() {
        return Err(DetError::NotIsolated(cap));
    }
    let q = LocalQuotient::compute(&IdealGens::m_tangent(f), cap, false);
    let d = q
        .report()
        .certificate_degree
        .ok_or(DetError::NoBoundBelowCap(cap))?;
    let k0 = d.saturating_sub(2);
    let k = (2 * k0 + 2).saturating_sub(ord);
    Ok(DeterminacyBound {
        k,
        method: Method::TangentImage { k0 },
    })
}

/// Smallest value of `v_P` over monomials of degree `deg`.
pub fn min_value_of_degree(p: &CPolytope, deg: u32) -> i64 {
    Monomial::of_degree(p.nvars(), deg)
        .iter()
        .map(|m| p.v_monomial(m))
        .min()
        .unwrap()
}

pub fn determinacy_polytope(
    f: &SeriesPoly,
    p: &CPolytope,
    cap: i64,
) -> Result<DeterminacyBound, DetError> {
    let rb = acgrading::regular_basis(f, p, cap, false).map_err(DetError::RegularBasisInfinite)?;
    let vin = p.v_series(f).ok_or(DetError::ZeroSeries)?;
    let d = rb.max_valuation().map_or(vin, |m| m.max(vin));
    let mut k = 0;
    loop {
        let w = min_value_of_degree(p, k + 1);
        if w > d {
            return Ok(DeterminacyBound {
                k,
                method: Method::Polytope { d, witness: w },
            });
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transversal {
    pub k: u32,
    pub l: u32,
    pub basis: Vec<Monomial>,
    /// Dimension of the tangent image inside `P_{k,l}`.
    pub tangent_dim: usize,
    /// Dimension of `P_{k,l}`.
    pub layer_dim: usize,
}

impl Transversal {
    pub fn codim(&self) -> usize {
        self.basis.len()
    }
}

/// Complement of `(<f> + m j(f)) mod m^(l+1)` inside the degrees `k+1..=l`.
pub fn complete_transversal(f: &SeriesPoly, k: u32, l: u32) -> Result<Transversal, DetError> {
    if k > l {
        return Err(DetError::BadRange(k, l));
    }
    let ideal = IdealGens::tangent_ext(f);
    let q = LocalQuotient::at_depth(&ideal, l, false);
    transversal_from(q.columns(), q.echelon(), k, l)
}

fn transversal_from(
    cols: &Columns,
    ech: &Echelon,
    k: u32,
    l: u32,
) -> Result<Transversal, DetError> {
    let range = cols.start(k + 1)..cols.start(l + 1);
    let basis: Vec<Monomial> = range
        .clone()
        .filter(|&c| !ech.is_pivot(c as u32))
        .map(|c| cols.monomial(c as u32).clone())
        .collect();
    let layer_dim = range.len();
    Ok(Transversal {
        k,
        l,
        tangent_dim: layer_dim - basis.len(),
        basis,
        layer_dim,
    })
}

/// `cod(f + a)`: codimension of the tangent image of `f + a` in `P_{k,l}`.
pub fn transversal_cod(f: &SeriesPoly, a: &SeriesPoly, k: u32, l: u32) -> Result<usize, DetError> {
    Ok(complete_transversal(&f.add(a), k, l)?.codim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cod0Estimate {
    pub value: usize,
    /// True when every point of the transversal was tried.
    pub exhaustive: bool,
    pub samples: usize,
}

/// Minimum of `cod(f + a)` over `a` in the complete transversal: exhaustive
/// when the transversal has at most `budget` points, else over `samples`
/// seeded random points.
pub fn cod0_estimate(
    f: &SeriesPoly,
    k: u32,
    l: u32,
    samples: usize,
    budget: u64,
    seed: u64,
) -> Result<Cod0Estimate, DetError> {
    let c = complete_transversal(f, k, l)?;
    let field = f.field();
    let ring = f.ring();
    let point = |coeffs: &[crate::field::Scalar]| {
        SeriesPoly::from_terms(ring, c.basis.iter().cloned().zip(coeffs.iter().cloned()))
    };
    let size = field
        .order()
        .and_then(|q| {
            let q: u64 = q.try_into().ok()?;
            q.checked_pow(c.basis.len() as u32)
        })
        .filter(|&s| s <= budget);
    let mut best = usize::MAX;
    let mut count = 0;
    if let Some(total) = size {
        let elems = field.elements(u64::MAX).unwrap();
        let q = elems.len() as u64;
        for idx in 0..total {
            let mut rest = idx;
            let coeffs: Vec<_> = (0..c.basis.len())
                .map(|_| {
                    let e = elems[(rest % q) as usize].clone();
                    rest /= q;
                    e
                })
                .collect();
            best = best.min(transversal_cod(f, &point(&coeffs), k, l)?);
            count += 1;
        }
        return Ok(Cod0Estimate {
            value: best,
            exhaustive: true,
            samples: count,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples.max(1) {
        let coeffs: Vec<_> = c.basis.iter().map(|_| field.random(&mut rng)).collect();
        best = best.min(transversal_cod(f, &point(&coeffs), k, l)?);
        count += 1;
    }
    Ok(Cod0Estimate {
        value: best,
        exhaustive: false,
        samples: count,
    })
}

/// Standard monomials of `m / (<f> + m j(f))`.
pub fn semiuniversal_basis(f: &SeriesPoly, cap: u32) -> Result<Vec<Monomial>, DetError> {
    let rep = crate::localalg::tau_ext(f, cap);
    if !rep.is_finite() {
        return Err(DetError::Uncertified(rep.cap_used));
    }
    Ok(rep
        .standard_monomials
        .into_iter()
        .filter(|m| m.degree() > 0)
        .collect())
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

    fn exps(v: &[Monomial]) -> Vec<Vec<u32>> {
        let mut e: Vec<Vec<u32>> = v.iter().map(|m| m.exps().to_vec()).collect();
        e.sort();
        e
    }

    #[test]
    fn tangent_bounds() {
        let r = ring(0);
        let f = p(&r, &[(1, &[2, 1]), (1, &[1, 2])]);
        let b = determinacy_tangent(&f, 30).unwrap();
        assert_eq!(b.k, 3);
        assert_eq!(b.method, Method::TangentImage { k0: 2 });
        assert_eq!(
            determinacy_tangent(&p(&r, &[(1, &[2, 0]), (1, &[0, 2])]), 30)
                .unwrap()
                .k,
            2
        );
        let b = determinacy_tangent(&p(&r, &[(1, &[3, 0]), (1, &[0, 4])]), 30).unwrap();
        assert!(b.k >= 4);
        assert_eq!(
            determinacy_tangent(&p(&r, &[(1, &[2, 0])]), 12),
            Err(DetError::NotIsolated(12))
        );
    }

    #[test]
    fn polytope_bounds() {
        let r7 = ring(7);
        let f = p(&r7, &[(1, &[3, 0]), (1, &[1, 4]), (1, &[0, 6])]);
        let w = CPolytope::from_weights(vec![vec![2, 1]]).unwrap();
        let b = determinacy_polytope(&f, &w, 120).unwrap();
        assert_eq!(
            b,
            DeterminacyBound {
                k: 6,
                method: Method::Polytope { d: 6, witness: 7 }
            }
        );
        let g = p(&r7, &[(1, &[2, 0]), (1, &[0, 2])]);
        let w = CPolytope::from_weights(vec![vec![1, 1]]).unwrap();
        assert_eq!(determinacy_polytope(&g, &w, 60).unwrap().k, 2);
        let r = ring(0);
        let h = p(&r, &[(1, &[3, 0]), (1, &[0, 5])]);
        let w = CPolytope::from_weights(vec![vec![5, 3]]).unwrap();
        assert_eq!(
            determinacy_polytope(&h, &w, 300).unwrap(),
            DeterminacyBound {
                k: 5,
                method: Method::Polytope { d: 15, witness: 18 }
            }
        );
    }

    #[test]
    fn transversals() {
        let r = ring(0);
        let t = complete_transversal(&p(&r, &[(1, &[3, 0])]), 3, 6).unwrap();
        assert_eq!(
            exps(&t.basis),
            vec![
                vec![0, 4],
                vec![0, 5],
                vec![0, 6],
                vec![1, 3],
                vec![1, 4],
                vec![1, 5]
            ]
        );
        assert_eq!(t.codim() + t.tangent_dim, t.layer_dim);
        let t = complete_transversal(&p(&r, &[(1, &[2, 2])]), 4, 6).unwrap();
        assert_eq!(
            exps(&t.basis),
            vec![vec![0, 5], vec![0, 6], vec![5, 0], vec![6, 0]]
        );
        let r7 = ring(7);
        // xy(x+y)(x+2y) = x^3 y + 3 x^2 y^2 + 2 x y^3
        let f = p(&r7, &[(1, &[3, 1]), (3, &[2, 2]), (2, &[1, 3])]);
        assert!(complete_transversal(&f, 4, 6).unwrap().basis.is_empty());
        let t = complete_transversal(&f, 4, 4).unwrap();
        assert_eq!(t.layer_dim, 0);
    }

    #[test]
    fn codimensions() {
        let r = ring(0);
        let f = p(&r, &[(1, &[2, 1]), (1, &[1, 2])]);
        assert_eq!(transversal_cod(&f, &SeriesPoly::zero(&r), 3, 4).unwrap(), 0);
        let r7 = ring(7);
        let f = p(&r7, &[(1, &[4, 0])]);
        let a = p(&r7, &[(1, &[2, 4]), (1, &[1, 6]), (1, &[0, 8])]);
        let c1 = transversal_cod(&f, &a, 5, 8).unwrap();
        assert!(c1 >= 2);
        // a(x, 2y) over F_7
        let a2 = p(&r7, &[(2, &[2, 4]), (1, &[1, 6]), (4, &[0, 8])]);
        assert_eq!(transversal_cod(&f, &a2, 5, 8).unwrap(), c1);
    }

    #[test]
    fn semiuniversal() {
        let r7 = ring(7);
        let b = semiuniversal_basis(&p(&r7, &[(1, &[3, 0]), (1, &[0, 5])]), 40).unwrap();
        assert_eq!(
            exps(&b),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![0, 4],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2],
                vec![1, 3],
                vec![2, 0]
            ]
        );
        let b = semiuniversal_basis(&p(&r7, &[(1, &[2, 0]), (1, &[0, 2])]), 40).unwrap();
        assert_eq!(exps(&b), vec![vec![0, 1], vec![1, 0]]);
        let b = semiuniversal_basis(&p(&r7, &[(1, &[3, 0]), (1, &[0, 8])]), 40).unwrap();
        assert_eq!(b.len(), 15);
    }

    #[test]
    fn cod0_exhaustive_small() {
        let r5 = ring(5);
        let f = p(&r5, &[(1, &[2, 1]), (1, &[1, 2])]);
        let e = cod0_estimate(&f, 3, 4, 16, 10_000, 1).unwrap();
        assert!(e.exhaustive);
        assert_eq!(e.value, 0);
    }
}
