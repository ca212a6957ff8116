//! Newton diagrams, C-polytopes and the piecewise linear valuation `v_P`.

use num_integer::Integer;
use num_rational::Rational64;
use thiserror::Error;

use crate::series::{Monomial, SeriesPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("not convenient: no pure power of variable(s) {0:?}")]
    NotConvenient(Vec<usize>),
    #[error("still not convenient after adding points: missing axes {0:?}")]
    StillNotConvenient(Vec<usize>),
    #[error("Newton diagrams are implemented for at most 3 variables, got {0}")]
    TooManyVariables(usize),
    #[error("zero series has no Newton diagram")]
    ZeroSeries,
    #[error("weight vectors must be nonempty with positive entries of the ring's arity")]
    BadWeights,
    #[error("no compact facet found")]
    NoFacet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    NewtonDiagram,
    UserWeights,
    ExpandedDiagram(Vec<Vec<Rational64>>),
}

/// Compact facet of a lower hull: primitive inner normal and the value of
/// `normal . p` on the facet, in the integer coordinates used for the hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

/// Weight vectors `W_i = N_P * w_i`, stored as integers; the valuation of
/// `x^a` is `min_i W_i . a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CPolytope {
    weights: Vec<Vec<i64>>,
    scale: i64,
    source: Source,
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = gcd_all(&v);
    if g == 0 {
        v
    } else {
        v.into_iter().map(|x| x / g).collect()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Normals spanned by pairs (plane) or triples (space) of points, each with
/// one of the points that spanned it.
fn candidate_normals(points: &[Vec<i64>]) -> Vec<(Vec<i64>, &[i64])> {
    let n = points.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    match n {
        1 => out.push((vec![1], points[0].as_slice())),
        2 => {
            for (i, a) in points.iter().enumerate() {
                for b in &points[i + 1..] {
                    let d = [b[0] - a[0], b[1] - a[1]];
                    out.push((vec![d[1], -d[0]], a.as_slice()));
                }
            }
        }
        3 => {
            for (i, a) in points.iter().enumerate() {
                for (j, b) in points.iter().enumerate().skip(i + 1) {
                    for c in &points[j + 1..] {
                        let u: Vec<i64> = (0..3).map(|k| b[k] - a[k]).collect();
                        let v: Vec<i64> = (0..3).map(|k| c[k] - a[k]).collect();
                        out.push((
                            vec![
                                u[1] * v[2] - u[2] * v[1],
                                u[2] * v[0] - u[0] * v[2],
                                u[0] * v[1] - u[1] * v[0],
                            ],
                            a.as_slice(),
                        ));
                    }
                }
            }
        }
        _ => {}
    }
    out
}

/// Compact lower-hull facets of an integer point set in dimension at most 3:
/// every candidate normal spanned by the points whose entries are all
/// positive (after a sign flip) and whose hyperplane through the spanning
/// points supports the set from below.
pub fn lower_facets(points: &[Vec<i64>]) -> Vec<Facet> {
    let n = points.first().map_or(0, Vec::len);
    let mut out: Vec<Facet> = Vec::new();
    for (cand, anchor) in candidate_normals(points) {
        let cand = if cand.iter().all(|&x| x <= 0) {
            cand.into_iter().map(|x| -x).collect()
        } else {
            cand
        };
        if cand.iter().any(|&x| x <= 0) {
            continue;
        }
        let normal = primitive(cand);
        let offset = points.iter().map(|p| dot(&normal, p)).min().unwrap();
        if dot(&normal, anchor) != offset {
            continue;
        }
        if !out.iter().any(|f| f.normal == normal) {
            out.push(Facet { normal, offset });
        }
    }
    if n == 1 {
        out.truncate(1);
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal));
    out
}

fn missing_axes(points: &[Vec<Rational64>], n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&i| {
            !points.iter().any(|p| {
                p.iter().enumerate().all(|(j, x)| {
                    if j == i {
                        *x > Rational64::from(0)
                    } else {
                        *x == Rational64::from(0)
                    }
                })
            })
        })
        .collect()
}

impl CPolytope {
    /// Weights given directly as integer vectors.
    pub fn from_weights(weights: Vec<Vec<i64>>) -> Result<Self, NewtonError> {
        let n = weights
            .first()
            .map(Vec::len)
            .ok_or(NewtonError::BadWeights)?;
        if weights
            .iter()
            .any(|w| w.len() != n || w.iter().any(|&x| x <= 0))
        {
            return Err(NewtonError::BadWeights);
        }
        let mut weights = weights;
        weights.sort();
        weights.dedup();
        Ok(CPolytope {
            weights,
            scale: 1,
            source: Source::UserWeights,
        })
    }

    fn from_points(points: &[Vec<Rational64>], source: Source) -> Result<Self, NewtonError> {
        let denom = points.iter().flatten().fold(1i64, |l, q| l.lcm(q.denom()));
        let ints: Vec<Vec<i64>> = points
            .iter()
            .map(|p| p.iter().map(|q| (q * denom).to_integer()).collect())
            .collect();
        let facets = lower_facets(&ints);
        if facets.is_empty() {
            return Err(NewtonError::NoFacet);
        }
        // facet i is {a : (denom * n_i / c_i) . a = 1}
        let fracs: Vec<Vec<Rational64>> = facets
            .iter()
            .map(|f| {
                f.normal
                    .iter()
                    .map(|&x| Rational64::new(x * denom, f.offset))
                    .collect()
            })
            .collect();
        let scale = fracs.iter().flatten().fold(1i64, |l, q| l.lcm(q.denom()));
        let mut weights: Vec<Vec<i64>> = fracs
            .iter()
            .map(|w| w.iter().map(|q| (q * scale).to_integer()).collect())
            .collect();
        weights.sort();
        Ok(CPolytope {
            weights,
            scale,
            source,
        })
    }

    /// C-polytope of a convenient series.
    pub fn newton_diagram(f: &SeriesPoly) -> Result<Self, NewtonError> {
        let n = f.ring().nvars();
        if n > 3 {
            return Err(NewtonError::TooManyVariables(n));
        }
        if f.is_zero() {
            return Err(NewtonError::ZeroSeries);
        }
        let pts = support_points(f);
        let miss = missing_axes(&pts, n);
        if !miss.is_empty() {
            return Err(NewtonError::NotConvenient(miss));
        }
        Self::from_points(&pts, Source::NewtonDiagram)
    }

    /// Diagram of the support enlarged by rational points (ring variable order).
    pub fn expand_diagram(f: &SeriesPoly, extra: &[Vec<Rational64>]) -> Result<Self, NewtonError> {
        let n = f.ring().nvars();
        if n > 3 {
            return Err(NewtonError::TooManyVariables(n));
        }
        let mut pts = support_points(f);
        pts.extend(extra.iter().cloned());
        if pts.is_empty() {
            return Err(NewtonError::ZeroSeries);
        }
        let miss = missing_axes(&pts, n);
        if !miss.is_empty() {
            return Err(NewtonError::StillNotConvenient(miss));
        }
        Self::from_points(&pts, Source::ExpandedDiagram(extra.to_vec()))
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// `N_P`, the common denominator cleared from the facet equations.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn nvars(&self) -> usize {
        self.weights[0].len()
    }

    /// `v_i(x^a)` for facet `i`.
    pub fn facet_value(&self, i: usize, exps: &[u32]) -> i64 {
        self.weights[i]
            .iter()
            .zip(exps)
            .map(|(w, &e)| w * e as i64)
            .sum()
    }

    pub fn v_exps(&self, exps: &[u32]) -> i64 {
        (0..self.weights.len())
            .map(|i| self.facet_value(i, exps))
            .min()
            .unwrap()
    }

    pub fn v_monomial(&self, m: &Monomial) -> i64 {
        self.v_exps(m.exps())
    }

    /// `v(u * d/dx_i)`, which may be negative.
    pub fn v_derivation(&self, u: &Monomial, i: usize) -> i64 {
        self.weights
            .iter()
            .map(|w| dot(w, &u.exps().iter().map(|&e| e as i64).collect::<Vec<_>>()) - w[i])
            .min()
            .unwrap()
    }

    /// `None` stands for the value of the zero series.
    pub fn v_series(&self, f: &SeriesPoly) -> Option<i64> {
        f.support().map(|m| self.v_monomial(m)).min()
    }

    pub fn v_facet_series(&self, i: usize, f: &SeriesPoly) -> Option<i64> {
        f.support().map(|m| self.facet_value(i, m.exps())).min()
    }

    /// `v(x_i)` for every variable.
    pub fn var_values(&self) -> Vec<i64> {
        let n = self.nvars();
        (0..n)
            .map(|i| self.v_monomial(&Monomial::var(n, i)))
            .collect()
    }

    /// Terms of `f` attaining `v_P(f)`.
    pub fn initial_part(&self, f: &SeriesPoly) -> SeriesPoly {
        let Some(v) = self.v_series(f) else {
            return f.clone();
        };
        f.map_terms(|m, c| (self.v_monomial(m) == v).then(|| c.clone()))
            .exact()
    }

    /// Terms of valuation exactly `d`.
    pub fn graded_part(&self, f: &SeriesPoly, d: i64) -> SeriesPoly {
        f.map_terms(|m, c| (self.v_monomial(m) == d).then(|| c.clone()))
            .exact()
    }

    /// Monomials with `v <= d`, ascending.
    pub fn monomials_up_to(&self, d: i64) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = std::collections::BTreeSet::new();
        if d < 0 {
            return Vec::new();
        }
        for w in &self.weights {
            let mut cur = vec![0u32; n];
            fn rec(
                w: &[i64],
                i: usize,
                left: i64,
                cur: &mut Vec<u32>,
                out: &mut std::collections::BTreeSet<Monomial>,
            ) {
                if i == w.len() {
                    out.insert(Monomial::new(cur.clone()));
                    return;
                }
                let mut e = 0;
                while e as i64 * w[i] <= left {
                    cur[i] = e;
                    rec(w, i + 1, left - e as i64 * w[i], cur, out);
                    e += 1;
                }
                cur[i] = 0;
            }
            rec(w, 0, d, &mut cur, &mut out);
        }
        out.into_iter().collect()
    }

    pub fn monomials_with_value(&self, d: i64) -> Vec<Monomial> {
        self.monomials_up_to(d)
            .into_iter()
            .filter(|m| self.v_monomial(m) == d)
            .collect()
    }

    /// Sorted distinct values `<= d` realized by monomials.
    pub fn values_up_to(&self, d: i64) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .monomials_up_to(d)
            .iter()
            .map(|m| self.v_monomial(m))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn support_points(f: &SeriesPoly) -> Vec<Vec<Rational64>> {
    f.support()
        .map(|m| {
            m.exps()
                .iter()
                .map(|&e| Rational64::from(e as i64))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductCheck {
    /// `v(fg) = v(f) + v(g)`, both attained on this facet.
    Equality {
        facet: usize,
    },
    StrictInequality,
}

/// Decide `v(fg) = v(f) + v(g)` through a common facet attaining both values.
pub fn vp_product_check(f: &SeriesPoly, g: &SeriesPoly, p: &CPolytope) -> ProductCheck {
    let (vf, vg) = (p.v_series(f), p.v_series(g));
    for i in 0..p.weights().len() {
        if p.v_facet_series(i, f) == vf && p.v_facet_series(i, g) == vg {
            return ProductCheck::Equality { facet: i };
        }
    }
    ProductCheck::StrictInequality
}
