//! Sparse polynomials that double as truncated power series.

mod monomial;
mod solve;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};

pub use monomial::Monomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("substitution does not map the maximal ideal into itself (variable {0})")]
    NotLocalMap(usize),
    #[error("series has zero constant term and is not a unit")]
    NotAUnit,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("characteristic 2 is not supported here")]
    CharTwoUnsupported,
    #[error("variable index {0} out of range")]
    BadIndex(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

struct RingInner {
    field: Field,
    vars: Vec<String>,
}

/// Coefficient field plus named variables.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.field == o.0.field && self.0.vars == o.0.vars)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[[{}]]", self.0.field, self.0.vars.join(","))
    }
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S]) -> Self {
        Ring(Arc::new(RingInner {
            field,
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
        }))
    }

    /// Ring over `field` in the first `n` of x, y, z, w (x1.. beyond that).
    pub fn standard(field: Field, n: usize) -> Self {
        let names: Vec<String> = if n <= 4 {
            ["x", "y", "z", "w"][..n]
                .iter()
                .map(|s| s.to_string())
                .collect()
        } else {
            (1..=n).map(|i| format!("x{i}")).collect()
        };
        Ring::new(field, &names)
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn with_field(&self, field: Field) -> Ring {
        Ring::new(field, &self.0.vars)
    }

    /// Same field, a subset of the variables (kept in their original order).
    pub fn restrict(&self, keep: &[usize]) -> Ring {
        let names: Vec<&String> = keep.iter().map(|&i| &self.0.vars[i]).collect();
        Ring::new(self.field().clone(), &names)
    }
}

/// Polynomial with optional truncation: `trunc = Some(N)` means the value is
/// only known modulo `m^(N+1)` and no term above degree `N` is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesPoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Scalar>,
    trunc: Option<u32>,
}

fn min_trunc(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl SeriesPoly {
    pub fn zero(ring: &Ring) -> Self {
        SeriesPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
            trunc: None,
        }
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn term(ring: &Ring, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    pub fn monomial(ring: &Ring, m: Monomial) -> Self {
        Self::term(ring, m, ring.field().one())
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Integer coefficients, e.g. `from_ints(&r, &[(1, &[3, 0]), (1, &[0, 5])])`.
    pub fn from_ints(ring: &Ring, terms: &[(i64, &[u32])]) -> Self {
        let f = ring.field();
        Self::from_terms(
            ring,
            terms
                .iter()
                .map(|(c, e)| (Monomial::new(e.to_vec()), f.from_int(*c))),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn with_trunc(mut self, n: Option<u32>) -> Self {
        self.trunc = min_trunc(self.trunc, n);
        if let Some(n) = self.trunc {
            self.terms.retain(|m, _| m.degree() <= n);
        }
        self
    }

    /// Forget any truncation, treating the stored terms as an exact polynomial.
    pub fn exact(mut self) -> Self {
        self.trunc = None;
        self
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Lowest total degree, `None` for zero.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.ord() == self.max_degree()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        assert_eq!(m.nvars(), self.ring.nvars(), "monomial arity");
        if self.trunc.is_some_and(|n| m.degree() > n) {
            return;
        }
        let f = self.ring.field().clone();
        if f.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), &c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, o: &SeriesPoly) -> Result<(), SeriesError> {
        if self.ring == o.ring {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    pub fn add(&self, o: &SeriesPoly) -> SeriesPoly {
        self.check(o).expect("ring mismatch");
        let mut r = self.clone().with_trunc(o.trunc);
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> SeriesPoly {
        let f = self.field();
        SeriesPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.neg(c)))
                .collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, o: &SeriesPoly) -> SeriesPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> SeriesPoly {
        let f = self.field();
        let mut r = SeriesPoly::zero(&self.ring);
        r.trunc = self.trunc;
        if f.is_zero(c) {
            return r;
        }
        r.terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), f.mul(a, c)))
            .collect();
        r
    }

    pub fn mul_monomial(&self, u: &Monomial) -> SeriesPoly {
        SeriesPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(u), c.clone()))
                .collect(),
            trunc: self.trunc.map(|n| n + u.degree()),
        }
    }

    /// Precision of a product, following the error terms of both factors.
    fn product_trunc(&self, o: &SeriesPoly) -> Option<u32> {
        let mut t = None;
        if let Some(a) = self.trunc {
            t = min_trunc(t, o.ord().map(|k| a + k));
        }
        if let Some(b) = o.trunc {
            t = min_trunc(t, self.ord().map(|k| b + k));
        }
        if let (Some(a), Some(b)) = (self.trunc, o.trunc) {
            t = min_trunc(t, Some(a + b + 1));
        }
        t
    }

    fn mul_upto(&self, o: &SeriesPoly, cap: Option<u32>) -> SeriesPoly {
        let f = self.field().clone();
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            for (m2, c2) in &o.terms {
                if cap.is_some_and(|n| d1 + m2.degree() > n) {
                    // terms of `o` are sorted by degree
                    break;
                }
                let m = m1.mul(m2);
                let c = f.mul(c1, c2);
                let e = acc.entry(m).or_insert_with(|| f.zero());
                *e = f.add(e, &c);
            }
        }
        acc.retain(|_, c| !f.is_zero(c));
        SeriesPoly {
            ring: self.ring.clone(),
            terms: acc,
            trunc: cap,
        }
    }

    /// Exact product, keeping whatever precision the factors allow.
    pub fn mul(&self, o: &SeriesPoly) -> SeriesPoly {
        self.check(o).expect("ring mismatch");
        let t = self.product_trunc(o);
        self.mul_upto(o, t)
    }

    /// `(self * o) mod m^(n+1)`.
    pub fn mul_trunc(&self, o: &SeriesPoly, n: u32) -> Result<SeriesPoly, SeriesError> {
        self.check(o)?;
        let t = min_trunc(Some(n), self.product_trunc(o));
        Ok(self.mul_upto(o, t))
    }

    pub fn pow_trunc(&self, e: u32, n: u32) -> SeriesPoly {
        let mut acc = SeriesPoly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul_trunc(self, n).unwrap();
        }
        acc
    }

    /// Terms of degree at most `k`.
    pub fn jet(&self, k: u32) -> SeriesPoly {
        self.clone().with_trunc(Some(k))
    }

    pub fn homogeneous_part(&self, d: u32) -> SeriesPoly {
        let mut r = SeriesPoly::zero(&self.ring);
        r.terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        r
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn diff(&self, i: usize) -> SeriesPoly {
        assert!(i < self.ring.nvars(), "variable index");
        let f = self.field();
        let mut r = SeriesPoly::zero(&self.ring);
        r.trunc = self.trunc.map(|n| n.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            r.add_term(m.lower(i).unwrap(), f.mul(c, &f.from_int(e as i64)));
        }
        r
    }

    pub fn gradient(&self) -> Vec<SeriesPoly> {
        (0..self.ring.nvars()).map(|i| self.diff(i)).collect()
    }

    /// `self(phi_1, ..., phi_n) mod m^(n+1)`; the result lives in the ring of
    /// the `phi_i`.
    pub fn subst(&self, phi: &[SeriesPoly], n: u32) -> Result<SeriesPoly, SeriesError> {
        if phi.len() != self.ring.nvars() {
            return Err(SeriesError::PreconditionViolated(format!(
                "expected {} substitutions, got {}",
                self.ring.nvars(),
                phi.len()
            )));
        }
        let target = match phi.first() {
            Some(p) => p.ring.clone(),
            None => self.ring.clone(),
        };
        for (i, p) in phi.iter().enumerate() {
            if p.ring != target {
                return Err(SeriesError::RingMismatch);
            }
            if !p.field().is_zero(&p.constant_term()) {
                return Err(SeriesError::NotLocalMap(i));
            }
        }
        if *target.field() != *self.field() {
            return Err(SeriesError::RingMismatch);
        }
        let mut prec = min_trunc(Some(n), self.trunc);
        for p in phi {
            prec = min_trunc(prec, p.trunc);
        }
        let cap = prec.unwrap();
        let maxe: Vec<u32> = (0..phi.len())
            .map(|i| {
                self.terms
                    .keys()
                    .map(|m| m.exps()[i])
                    .max()
                    .unwrap_or(0)
                    .min(cap)
            })
            .collect();
        let powers: Vec<Vec<SeriesPoly>> = phi
            .iter()
            .zip(&maxe)
            .map(|(p, &e)| {
                let p = p.clone().exact();
                let mut v = vec![SeriesPoly::one(&target)];
                for k in 1..=e {
                    let nxt = v[k as usize - 1].mul_trunc(&p, cap).unwrap().exact();
                    v.push(nxt);
                }
                v
            })
            .collect();
        let mut out = SeriesPoly::zero(&target);
        out.trunc = Some(cap);
        for (m, c) in &self.terms {
            if m.degree() > cap {
                continue;
            }
            let mut t = SeriesPoly::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul_trunc(&powers[i][e as usize], cap)?.exact();
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        out.trunc = prec;
        Ok(out)
    }

    /// `v` with `self * v = 1 mod m^(n+1)`.
    pub fn invert_unit(&self, n: u32) -> Result<SeriesPoly, SeriesError> {
        let f = self.field().clone();
        let c = self.constant_term();
        if f.is_zero(&c) {
            return Err(SeriesError::NotAUnit);
        }
        let ci = f.inv(&c)?;
        let n = min_trunc(Some(n), self.trunc).unwrap();
        // w = 1 - u/c lies in m, and 1/u = (1 + w + w^2 + ...)/c
        let w = SeriesPoly::one(&self.ring).sub(&self.scale(&ci)).exact();
        let one = SeriesPoly::one(&self.ring);
        let mut acc = one.clone();
        for _ in 0..n {
            acc = one.add(&w.mul_trunc(&acc, n)?.exact());
        }
        Ok(acc.scale(&ci).with_trunc(Some(n)))
    }

    /// Move coefficients into a larger field.
    pub fn embed(&self, ring: &Ring) -> Result<SeriesPoly, SeriesError> {
        let (from, to) = (self.field(), ring.field());
        let mut r = SeriesPoly::zero(ring);
        r.trunc = self.trunc;
        for (m, c) in &self.terms {
            r.add_term(m.clone(), to.embed(from, c)?);
        }
        Ok(r)
    }

    /// Re-index variables: variable `i` of `self` becomes variable `map[i]` of
    /// `ring`.
    pub fn rename(&self, ring: &Ring, map: &[usize]) -> SeriesPoly {
        let mut r = SeriesPoly::zero(ring);
        r.trunc = self.trunc;
        for (m, c) in &self.terms {
            let mut e = vec![0; ring.nvars()];
            for (i, &k) in m.exps().iter().enumerate() {
                e[map[i]] += k;
            }
            r.add_term(Monomial::new(e), c.clone());
        }
        r
    }

    pub fn map_terms(&self, mut g: impl FnMut(&Monomial, &Scalar) -> Option<Scalar>) -> SeriesPoly {
        let mut r = SeriesPoly::zero(&self.ring);
        r.trunc = self.trunc;
        for (m, c) in &self.terms {
            if let Some(c2) = g(m, c) {
                r.add_term(m.clone(), c2);
            }
        }
        r
    }

    /// Random series of degree between `lo` and `hi` with about `density`
    /// chance per monomial.
    pub fn random<R: Rng + ?Sized>(
        ring: &Ring,
        lo: u32,
        hi: u32,
        density: f64,
        rng: &mut R,
    ) -> SeriesPoly {
        let f = ring.field();
        let mut p = SeriesPoly::zero(ring);
        for d in lo..=hi {
            for m in Monomial::of_degree(ring.nvars(), d) {
                if rng.gen_bool(density) {
                    p.add_term(m, f.random(rng));
                }
            }
        }
        p
    }

    /// Canonical text form, ascending in the monomial order.
    pub fn to_text(&self) -> String {
        let f = self.field();
        let vars = self.ring.vars();
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, c) = match c {
                Scalar::Rat(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, f.neg(&Scalar::Rat(r.clone())))
                }
                _ => (false, c.clone()),
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mono = m.degree() > 0;
            let cs = f.format(&c);
            let cs = if f.is_atomic(&c) {
                cs
            } else {
                format!("({cs})")
            };
            match (mono, f.is_one(&c)) {
                (true, true) => out.push_str(&m.format(vars)),
                (true, false) => {
                    out.push_str(&cs);
                    out.push('*');
                    out.push_str(&m.format(vars));
                }
                (false, _) => out.push_str(&cs),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())?;
        if let Some(n) = self.trunc {
            write!(f, " + O({})", n + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub use solve::{hensel_solve, hensel_solve_linear, hessian_corank, quadratic_form};
