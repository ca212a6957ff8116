//! Contact transformations that simplify tails: jet-by-jet elimination along
//! the tangent image, valuation-graded elimination along `tj^AC`, and
//! diagonal rescaling of coefficients.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;

use super::ClassifyError;
use crate::acgrading::{default_valuation_cap, regular_basis};
use crate::field::{nth_root, Field, Scalar, UPoly};
use crate::localalg::{Echelon, Row};
use crate::newton::CPolytope;
use crate::series::{Monomial, SeriesPoly};

/// `(1 - a) f(x - xi)` modulo `m^(n+1)`.
pub fn first_order_step(
    f: &SeriesPoly,
    a: &SeriesPoly,
    xi: &[SeriesPoly],
    n: u32,
) -> Result<SeriesPoly, ClassifyError> {
    let r = f.ring();
    let phi: Vec<SeriesPoly> = xi
        .iter()
        .enumerate()
        .map(|(i, x)| SeriesPoly::var(r, i).sub(x))
        .collect();
    let g = f.clone().exact().subst(&phi, n)?.exact();
    let ag = a.clone().exact().mul_trunc(&g, n)?.exact();
    Ok(g.sub(&ag).exact())
}

fn row_of(p: &SeriesPoly, index: &HashMap<Monomial, u32>) -> Row {
    let mut r: Row = p
        .terms()
        .filter_map(|(m, c)| index.get(m).map(|&i| (i, c.clone())))
        .collect();
    r.sort_unstable_by_key(|e| e.0);
    r
}

/// Where an inserted row came from: `u * g` or `u * dg/dx_i`.
#[derive(Clone, Debug)]
enum Source {
    Unit(Monomial),
    Vector(usize, Monomial),
}

fn assemble(f: &SeriesPoly, combo: &Row, sources: &[Source]) -> (SeriesPoly, Vec<SeriesPoly>) {
    let r = f.ring();
    let mut a = SeriesPoly::zero(r);
    let mut xi = vec![SeriesPoly::zero(r); r.nvars()];
    for (label, c) in combo {
        match &sources[*label as usize] {
            Source::Unit(u) => a.add_term(u.clone(), c.clone()),
            Source::Vector(i, u) => xi[*i].add_term(u.clone(), c.clone()),
        }
    }
    (a, xi)
}

/// Removes, degree by degree from `k+1` to `bound`, every part of the tail
/// that lies in the tangent image of the `k`-jet. What survives in each
/// degree is spanned by the non-pivot monomials of that degree.
pub fn reduce_jet(f: &SeriesPoly, k: u32, bound: u32) -> Result<SeriesPoly, ClassifyError> {
    reduce_jet_with(f, k, bound, |_| false)
}

/// As [`reduce_jet`], but monomials for which `late` holds are ordered last,
/// so they are the ones kept in the complement whenever possible.
pub fn reduce_jet_with(
    f: &SeriesPoly,
    k: u32,
    bound: u32,
    late: impl Fn(&Monomial) -> bool,
) -> Result<SeriesPoly, ClassifyError> {
    let n = f.ring().nvars();
    let field = f.field().clone();
    let g = f.homogeneous_part(k).exact();
    let grad = g.gradient();
    let mut cur = f.jet(bound).exact();
    for l in k + 1..=bound {
        let h = cur.homogeneous_part(l);
        if h.is_zero() {
            continue;
        }
        let (mut cols, rest): (Vec<Monomial>, Vec<Monomial>) = Monomial::of_degree(n, l)
            .into_iter()
            .partition(|m| !late(m));
        cols.extend(rest);
        let index: HashMap<Monomial, u32> = cols
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut ech = Echelon::new(&field, cols.len(), true);
        let mut sources = Vec::new();
        for u in Monomial::of_degree(n, l - k) {
            ech.insert(row_of(&g.mul_monomial(&u), &index));
            sources.push(Source::Unit(u));
        }
        for (i, gi) in grad.iter().enumerate() {
            for u in Monomial::of_degree(n, l - k + 1) {
                ech.insert(row_of(&gi.mul_monomial(&u), &index));
                sources.push(Source::Vector(i, u));
            }
        }
        let (_, combo) = ech.full_reduce(row_of(&h, &index), cols.len() as u32);
        if combo.is_empty() {
            continue;
        }
        let (a, xi) = assemble(&cur, &combo, &sources);
        cur = first_order_step(&cur, &a, &xi, bound)?;
    }
    Ok(cur)
}

#[derive(Clone, Debug)]
pub struct TailReduction {
    pub form: SeriesPoly,
    /// Valuation bound above which terms were dropped.
    pub top: i64,
    pub levels: usize,
    /// False when the level budget ran out first.
    pub complete: bool,
}

/// Valuation-graded tail reduction: afterwards every term above `v_P(f)` is
/// a regular-basis monomial, and terms above the regular basis are dropped.
pub fn reduce_tail(
    f: &SeriesPoly,
    p: &CPolytope,
    budget: usize,
) -> Result<TailReduction, ClassifyError> {
    let vin = p.v_series(f).ok_or(ClassifyError::DegenerateForm)?;
    let rb = regular_basis(f, p, default_valuation_cap(p), false)?;
    let top = rb.max_valuation().map_or(vin, |m| m.max(vin));
    let keep = |g: SeriesPoly| {
        g.map_terms(|m, c| (p.v_monomial(m) <= top).then(|| c.clone()))
            .exact()
    };
    let mons = p.monomials_up_to(top);
    let n_deg = mons.iter().map(|m| m.degree()).max().unwrap_or(0);
    let nv = f.ring().nvars();
    let mut cur = keep(f.jet(n_deg));
    let in_f = p.initial_part(&cur);
    let grad = in_f.gradient();
    let reach = top - vin;
    let maxw = p.var_values().into_iter().max().unwrap();
    let mut units: HashMap<i64, Vec<Monomial>> = HashMap::new();
    let mut vectors: Vec<HashMap<i64, Vec<Monomial>>> = vec![HashMap::new(); nv];
    for u in p.monomials_up_to(reach + maxw) {
        let v = p.v_monomial(&u);
        if v <= reach {
            units.entry(v).or_default().push(u.clone());
        }
        for (i, map) in vectors.iter_mut().enumerate() {
            let vd = p.v_derivation(&u, i);
            if vd > 0 && vd <= reach {
                map.entry(vd).or_default().push(u.clone());
            }
        }
    }
    let field = f.field().clone();
    let mut levels = 0;
    for level in p.values_up_to(top).into_iter().filter(|&v| v > vin) {
        let h = p.graded_part(&cur, level);
        if h.is_zero() {
            continue;
        }
        if levels == budget {
            return Ok(TailReduction {
                form: cur,
                top,
                levels,
                complete: false,
            });
        }
        levels += 1;
        let cols = p.monomials_with_value(level);
        let index: HashMap<Monomial, u32> = cols
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        let mut ech = Echelon::new(&field, cols.len(), true);
        let mut sources = Vec::new();
        let e = level - vin;
        for u in units.get(&e).into_iter().flatten() {
            ech.insert(row_of(&p.graded_part(&in_f.mul_monomial(u), level), &index));
            sources.push(Source::Unit(u.clone()));
        }
        for (i, map) in vectors.iter().enumerate() {
            for u in map.get(&e).into_iter().flatten() {
                ech.insert(row_of(
                    &p.graded_part(&grad[i].mul_monomial(u), level),
                    &index,
                ));
                sources.push(Source::Vector(i, u.clone()));
            }
        }
        let (_, combo) = ech.full_reduce(row_of(&h, &index), cols.len() as u32);
        if combo.is_empty() {
            continue;
        }
        let (a, xi) = assemble(&cur, &combo, &sources);
        cur = keep(first_order_step(&cur, &a, &xi, n_deg)?);
    }
    Ok(TailReduction {
        form: cur,
        top,
        levels,
        complete: true,
    })
}

/// Solve `sum m_t rows_t = target` over the rationals; `None` if outside the
/// row span.
pub(crate) fn rational_combination(rows: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rational64>> {
    let m = rows.len();
    let n = target.len();
    // columns are the rows; augmented matrix n x (m + 1)
    let mut a: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            let mut r: Vec<Rational64> = rows.iter().map(|row| Rational64::from(row[i])).collect();
            r.push(Rational64::from(target[i]));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(piv) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, piv);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let c = a[r][col];
                for j in 0..=m {
                    let v = a[row][j];
                    a[r][j] -= c * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[m].is_zero()) {
        return None;
    }
    let mut out = vec![Rational64::zero(); m];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = a[r][m];
    }
    Some(out)
}

/// The value of a modulus: `lambda^q` is an invariant of the scaling orbit,
/// `lambda` itself only up to `q`-th roots of unity.
#[derive(Clone, Debug)]
pub struct Modulus {
    pub q: u32,
    pub lambda_q: Scalar,
    /// Smallest `q`-th root of `lambda_q` in the field, when one exists.
    pub lambda: Option<Scalar>,
}

/// Modulus carried by the coefficient of `lam` once the `fixed` coefficients
/// are scaled to 1 by `x_i -> alpha_i x_i` and a constant factor.
pub fn modulus(
    field: &Field,
    fixed: &[(Vec<u32>, Scalar)],
    lam: &(Vec<u32>, Scalar),
    seed: u64,
) -> Result<Modulus, ClassifyError> {
    let ext = |e: &[u32]| -> Vec<i64> {
        let mut v: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        v.push(1);
        v
    };
    let rows: Vec<Vec<i64>> = fixed.iter().map(|(e, _)| ext(e)).collect();
    let m = rational_combination(&rows, &ext(&lam.0)).ok_or_else(|| {
        ClassifyError::ObstructedScaling("the modulus term can be scaled independently".into())
    })?;
    let q = m.iter().fold(1i64, |acc, r| acc.lcm(r.denom())) as u32;
    let mut val = field.pow_u64(&lam.1, q as u64);
    for ((_, c), mt) in fixed.iter().zip(&m) {
        let e = -(mt * Rational64::from(q as i64));
        val = field.mul(&val, &field.pow_i64(c, e.to_integer())?);
    }
    let lambda = if q == 1 {
        Some(val.clone())
    } else {
        canonical_root(field, &val, q, seed)?
    };
    Ok(Modulus {
        q,
        lambda_q: val,
        lambda,
    })
}

/// Smallest `r` in the field with `r^q = v`.
pub fn canonical_root(
    field: &Field,
    v: &Scalar,
    q: u32,
    seed: u64,
) -> Result<Option<Scalar>, ClassifyError> {
    if field.is_zero(v) {
        return Ok(Some(field.zero()));
    }
    let mut cs = vec![field.zero(); q as usize + 1];
    cs[0] = field.neg(v);
    cs[q as usize] = field.one();
    let poly = UPoly::new(field, cs);
    if !field.is_finite() {
        return Ok(nth_root(field, v, q, seed).ok().map(|r| {
            if q.is_multiple_of(2) {
                r.root.clone().min(field.neg(&r.root))
            } else {
                r.root
            }
        }));
    }
    let facs = crate::field::factor(field, &poly, seed)?;
    Ok(facs
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| field.neg(&g.coeffs()[0]))
        .min())
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub form: SeriesPoly,
    /// `x_i -> alphas[i] x_i`, then multiply by `factor`.
    pub alphas: Vec<Scalar>,
    pub factor: Scalar,
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // cofactor (j, i)
                    let minor: Vec<Vec<i64>> = m
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != j)
                        .map(|(_, row)| {
                            row.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != i)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor)
                })
                .collect()
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Diagonal substitution and constant factor that give the listed monomials
/// the target coefficients, adjoining roots when needed.
pub fn alpha_beta_normalize(
    f: &SeriesPoly,
    targets: &[(Monomial, Scalar)],
    seed: u64,
) -> Result<Normalized, ClassifyError> {
    let n = f.ring().nvars();
    let base = f.field().clone();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut ratios: Vec<Scalar> = Vec::new();
    for (m, t) in targets {
        let c = f.coeff(m);
        if base.is_zero(&c) {
            return Err(ClassifyError::ObstructedScaling(format!(
                "coefficient of {} vanishes",
                m.format(f.ring().vars())
            )));
        }
        let mut row: Vec<i64> = m.exps().iter().map(|&e| e as i64).collect();
        row.push(1);
        if rational_combination(&rows, &row).is_some() && !rows.is_empty() {
            // dependent equation; checked after solving
            continue;
        }
        rows.push(row);
        ratios.push(base.div(t, &c)?);
    }
    let k = rows.len();
    // pick the square submatrix whose determinant needs the cheapest roots
    let q1 = base.order().map(|o| o - 1u32);
    let mut best: Option<((u64, u64), Vec<usize>)> = None;
    for cols in subsets(n + 1, k) {
        let sq: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        let d = det(&sq);
        if d == 0 {
            continue;
        }
        let ad = d.unsigned_abs();
        let cost = match &q1 {
            // gcd(d, q - 1) = 1 means every element has a unique d-th root
            Some(q) => {
                let r: u64 = (q % num_bigint::BigUint::from(ad)).try_into().unwrap();
                (num_integer::gcd(ad, r), ad)
            }
            None => (ad, ad),
        };
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, cols));
        }
    }
    let Some((_, cols)) = best else {
        return Err(ClassifyError::ObstructedScaling(
            "singular exponent system".into(),
        ));
    };
    let sq: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c]).collect())
        .collect();
    let mut d = det(&sq);
    let mut adj = adjugate(&sq);
    if d < 0 {
        d = -d;
        for r in adj.iter_mut() {
            for x in r.iter_mut() {
                *x = -*x;
            }
        }
    }
    let mut field = base.clone();
    let mut ratios = ratios;
    let mut unknowns: Vec<Scalar> = vec![base.one(); n + 1];
    for (j, &col) in cols.iter().enumerate() {
        let mut w = field.one();
        for (t, r) in ratios.iter().enumerate() {
            w = field.mul(&w, &field.pow_i64(r, adj[j][t])?);
        }
        let root = if d == 1 {
            w
        } else {
            let nr = nth_root(&field, &w, d as u32, seed)
                .map_err(|e| ClassifyError::ObstructedScaling(e.to_string()))?;
            if nr.extended {
                let old = field.clone();
                field = nr.field.clone();
                ratios = ratios
                    .iter()
                    .map(|r| field.embed(&old, r).unwrap())
                    .collect();
                unknowns = unknowns
                    .iter()
                    .map(|u| field.embed(&old, u).unwrap())
                    .collect();
            }
            nr.root
        };
        unknowns[col] = root;
    }
    let ring = f.ring().with_field(field.clone());
    let g = f.embed(&ring)?;
    let phi: Vec<SeriesPoly> = (0..n)
        .map(|i| SeriesPoly::term(&ring, Monomial::var(n, i), unknowns[i].clone()))
        .collect();
    let prec = g.max_degree().unwrap_or(0).max(g.trunc().unwrap_or(0));
    let out = g
        .subst(&phi, prec)?
        .with_trunc(f.trunc())
        .scale(&unknowns[n]);
    for (m, t) in targets {
        let t = field.embed(&base, t)?;
        if out.coeff(m) != t {
            return Err(ClassifyError::ObstructedScaling(format!(
                "coefficient of {} cannot reach its target",
                m.format(f.ring().vars())
            )));
        }
    }
    Ok(Normalized {
        form: out,
        alphas: unknowns[..n].to_vec(),
        factor: unknowns[n].clone(),
    })
}
