//! Dimensions and monomial bases of m-primary quotients of the power series
//! ring, by Macaulay elimination plus a Nakayama certificate.

mod echelon;

use thiserror::Error;

use crate::field::Scalar;
use crate::series::{Monomial, Ring, SeriesPoly};

pub use echelon::{axpy, Columns, Echelon, Row};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("quotient not certified finite below degree cap {0}")]
    Uncertified(u32),
    #[error("generators live in different rings")]
    RingMismatch,
}

/// Default degree caps: 60 in two variables, 40 in three, 24 beyond.
pub fn default_cap(nvars: usize) -> u32 {
    match nvars {
        0..=2 => 60,
        3 => 40,
        _ => 24,
    }
}

/// Generators of an ideal of the power series ring. Generators are read as
/// exact polynomials.
#[derive(Clone, Debug)]
pub struct IdealGens {
    ring: Ring,
    gens: Vec<SeriesPoly>,
}

impl IdealGens {
    pub fn new(ring: &Ring, gens: Vec<SeriesPoly>) -> Result<Self, LocalError> {
        if gens.iter().any(|g| g.ring() != ring) {
            return Err(LocalError::RingMismatch);
        }
        let gens = gens
            .into_iter()
            .map(SeriesPoly::exact)
            .filter(|g| !g.is_zero())
            .collect();
        Ok(IdealGens {
            ring: ring.clone(),
            gens,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn gens(&self) -> &[SeriesPoly] {
        &self.gens
    }

    /// `<f, df/dx_1, ..., df/dx_n>`.
    pub fn tjurina(f: &SeriesPoly) -> Self {
        let mut g = vec![f.clone()];
        g.extend(f.gradient());
        Self::new(f.ring(), g).unwrap()
    }

    /// `<f> + m * j(f)`, the tangent image of the contact orbit.
    pub fn tangent_ext(f: &SeriesPoly) -> Self {
        let n = f.ring().nvars();
        let mut g = vec![f.clone()];
        for d in f.gradient() {
            for j in 0..n {
                g.push(d.mul_monomial(&Monomial::var(n, j)));
            }
        }
        Self::new(f.ring(), g).unwrap()
    }

    /// `<f> + m^k * j(f)`.
    pub fn tk(f: &SeriesPoly, k: u32) -> Self {
        let n = f.ring().nvars();
        let mut g = vec![f.clone()];
        for d in f.gradient() {
            for u in Monomial::of_degree(n, k) {
                g.push(d.mul_monomial(&u));
            }
        }
        Self::new(f.ring(), g).unwrap()
    }

    /// `m * <f> + m^2 * j(f)`.
    pub fn m_tangent(f: &SeriesPoly) -> Self {
        let n = f.ring().nvars();
        let mut g = Vec::new();
        for j in 0..n {
            g.push(f.mul_monomial(&Monomial::var(n, j)));
        }
        for d in f.gradient() {
            for u in Monomial::of_degree(n, 2) {
                g.push(d.mul_monomial(&u));
            }
        }
        Self::new(f.ring(), g).unwrap()
    }

    fn has_unit(&self) -> bool {
        let f = self.ring.field();
        self.gens.iter().any(|g| !f.is_zero(&g.constant_term()))
    }
}

/// Outcome of a quotient computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    /// `None` when no certificate was found below the cap.
    pub dimension: Option<usize>,
    pub standard_monomials: Vec<Monomial>,
    pub certificate_degree: Option<u32>,
    pub cap_used: u32,
    /// `dim R/(I + m^d)` for `d = 1, 2, ...` as far as computed.
    pub dims: Vec<usize>,
}

impl QuotientReport {
    pub fn is_finite(&self) -> bool {
        self.dimension.is_some()
    }
}

/// Macaulay rows of an ideal at a fixed truncation, with the resulting
/// certificate.
#[derive(Clone, Debug)]
pub struct LocalQuotient {
    ideal: IdealGens,
    cols: Columns,
    ech: Echelon,
    /// `(generator index, multiplier)` of every inserted row.
    labels: Vec<(usize, Monomial)>,
    report: QuotientReport,
}

fn grow(d: u32) -> u32 {
    (d * 3).div_ceil(2)
}

impl LocalQuotient {
    /// Eliminate at truncation `depth` only.
    pub fn at_depth(ideal: &IdealGens, depth: u32, track: bool) -> Self {
        let n = ideal.ring.nvars();
        let cols = Columns::new(n, depth);
        let mut ech = Echelon::new(ideal.ring.field(), cols.len(), track);
        let mut labels = Vec::new();
        for (gi, g) in ideal.gens.iter().enumerate() {
            let o = g.ord().unwrap();
            if o > depth {
                continue;
            }
            for u in Monomial::up_to(n, depth - o) {
                let row = cols.shifted_row(g, &u);
                labels.push((gi, u));
                ech.insert(row);
            }
        }
        let mut dims = Vec::new();
        let mut cert = None;
        for d in 1..=depth {
            let below = cols.start(d);
            dims.push(below - ech.pivot_count_below(below));
            if cert.is_none() && cols.degree_range(d).all(|c| ech.is_pivot(c as u32)) {
                cert = Some(d);
            }
        }
        let mut report = QuotientReport {
            dimension: None,
            standard_monomials: Vec::new(),
            certificate_degree: cert,
            cap_used: depth,
            dims,
        };
        if let Some(d) = cert {
            let below = cols.start(d);
            report.standard_monomials = (0..below as u32)
                .filter(|&c| !ech.is_pivot(c))
                .map(|c| cols.monomial(c).clone())
                .collect();
            report.dimension = Some(report.standard_monomials.len());
            report.dims.truncate(d as usize);
        }
        LocalQuotient {
            ideal: ideal.clone(),
            cols,
            ech,
            labels,
            report,
        }
    }

    /// Grow the truncation until a certificate appears or `cap` is reached.
    pub fn compute(ideal: &IdealGens, cap: u32, track: bool) -> Self {
        let cap = cap.max(1);
        if ideal.has_unit() {
            let q = Self::at_depth(ideal, 0, track);
            return LocalQuotient {
                report: QuotientReport {
                    dimension: Some(0),
                    standard_monomials: Vec::new(),
                    certificate_degree: Some(0),
                    cap_used: 0,
                    dims: Vec::new(),
                },
                ..q
            };
        }
        if ideal.gens.is_empty() {
            let q = Self::at_depth(ideal, 1, track);
            return LocalQuotient {
                report: QuotientReport {
                    cap_used: 0,
                    ..q.report.clone()
                },
                ..q
            };
        }
        let mut depth = cap.min(8);
        loop {
            let q = Self::at_depth(ideal, depth, track);
            if q.report.certificate_degree.is_some() || depth >= cap {
                return q;
            }
            depth = grow(depth).min(cap);
        }
    }

    pub fn report(&self) -> &QuotientReport {
        &self.report
    }

    pub fn into_report(self) -> QuotientReport {
        self.report
    }

    pub fn ideal(&self) -> &IdealGens {
        &self.ideal
    }

    pub fn columns(&self) -> &Columns {
        &self.cols
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }

    pub fn labels(&self) -> &[(usize, Monomial)] {
        &self.labels
    }

    fn limit(&self) -> Result<u32, LocalError> {
        self.report
            .certificate_degree
            .map(|d| self.cols.start(d) as u32)
            .ok_or(LocalError::Uncertified(self.report.cap_used))
    }

    /// Coordinates of `h` modulo the ideal in the standard monomial basis.
    pub fn normal_form(&self, h: &SeriesPoly) -> Result<SeriesPoly, LocalError> {
        let limit = self.limit()?;
        let (row, _) = self.ech.full_reduce(self.cols.row(h), limit);
        Ok(self.poly_of(&row))
    }

    /// Membership of `h`, decided exactly for a certified quotient.
    pub fn contains(&self, h: &SeriesPoly) -> Result<bool, LocalError> {
        let limit = self.limit()?;
        let row: Row = self
            .cols
            .row(h)
            .into_iter()
            .filter(|e| e.0 < limit)
            .collect();
        let (rest, _) = self.ech.lead_reduce(row);
        Ok(rest.iter().all(|e| e.0 >= limit))
    }

    /// `h = sum c * u * g_i` modulo `m^(d+1)`, read off a tracked
    /// elimination. Returns `(generator index, multiplier, coefficient)`.
    pub fn express(&self, h: &SeriesPoly, d: u32) -> Option<Vec<(usize, Monomial, Scalar)>> {
        assert!(self.ech.tracking(), "express needs a tracked elimination");
        assert!(d <= self.cols.max_degree(), "degree beyond the truncation");
        let limit = self.cols.start(d + 1) as u32;
        let row: Row = self
            .cols
            .row(h)
            .into_iter()
            .filter(|e| e.0 < limit)
            .collect();
        let (rest, combo) = self.ech.lead_reduce(row);
        if rest.iter().any(|e| e.0 < limit) {
            return None;
        }
        Some(
            combo
                .into_iter()
                .map(|(l, c)| {
                    let (g, u) = &self.labels[l as usize];
                    (*g, u.clone(), c)
                })
                .collect(),
        )
    }

    pub fn poly_of(&self, row: &[(u32, Scalar)]) -> SeriesPoly {
        SeriesPoly::from_terms(
            &self.ideal.ring,
            row.iter()
                .map(|(c, v)| (self.cols.monomial(*c).clone(), v.clone())),
        )
    }
}

pub fn local_quotient_dim(ideal: &IdealGens, cap: u32) -> QuotientReport {
    LocalQuotient::compute(ideal, cap, false).into_report()
}

/// Tjurina number as a quotient report.
pub fn tau(f: &SeriesPoly, cap: u32) -> QuotientReport {
    local_quotient_dim(&IdealGens::tjurina(f), cap)
}

pub fn tau_ext(f: &SeriesPoly, cap: u32) -> QuotientReport {
    local_quotient_dim(&IdealGens::tangent_ext(f), cap)
}

pub fn dim_tk(f: &SeriesPoly, k: u32, cap: u32) -> QuotientReport {
    local_quotient_dim(&IdealGens::tk(f, k), cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Tjurina,
    Extended,
}

/// Whether `monomials` map to a basis of the (extended) Tjurina algebra.
pub fn is_basis(
    f: &SeriesPoly,
    variant: Variant,
    monomials: &[Monomial],
    cap: u32,
) -> Result<bool, LocalError> {
    let ideal = match variant {
        Variant::Tjurina => IdealGens::tjurina(f),
        Variant::Extended => IdealGens::tangent_ext(f),
    };
    let q = LocalQuotient::compute(&ideal, cap, false);
    basis_check(&q, monomials)
}

pub fn basis_check(q: &LocalQuotient, monomials: &[Monomial]) -> Result<bool, LocalError> {
    let limit = q.limit()?;
    if Some(monomials.len()) != q.report.dimension {
        return Ok(false);
    }
    let ring = q.ideal.ring.clone();
    let mut e = Echelon::new(ring.field(), q.cols.len(), false);
    for m in monomials {
        let p = SeriesPoly::monomial(&ring, m.clone());
        let (row, _) = q.ech.full_reduce(q.cols.row(&p), limit);
        if e.insert(row).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Certified: the ideal contains `m^d` with `d = certificate_degree`, or
    /// `(1 - a) h` was exhibited in the ideal for some `a` in `m` (no degree).
    InIdeal { certificate_degree: Option<u32> },
    /// `certified` tells whether this is a proof or only a search up to the cap.
    NotInIdeal { certified: bool },
}

pub fn membership(h: &SeriesPoly, ideal: &IdealGens, cap: u32) -> Membership {
    let q = LocalQuotient::compute(ideal, cap, false);
    if let Ok(inside) = q.contains(h) {
        return if inside {
            Membership::InIdeal {
                certificate_degree: q.report.certificate_degree,
            }
        } else {
            Membership::NotInIdeal { certified: true }
        };
    }
    if exact_search(h, ideal, cap) {
        Membership::InIdeal {
            certificate_degree: None,
        }
    } else {
        Membership::NotInIdeal { certified: false }
    }
}

/// Untruncated elimination against multiples of the generators and of
/// `m * h`. Reaching zero gives `h - a h` in the ideal with `a` in `m`, and
/// `1 - a` is a unit.
fn exact_search(h: &SeriesPoly, ideal: &IdealGens, cap: u32) -> bool {
    let Some(oh) = h.ord() else { return true };
    let n = ideal.ring.nvars();
    let mut rows: Vec<SeriesPoly> = Vec::new();
    for g in &ideal.gens {
        let o = g.ord().unwrap();
        if o > cap {
            continue;
        }
        for u in Monomial::up_to(n, cap - o) {
            rows.push(g.mul_monomial(&u));
        }
    }
    if oh < cap {
        for u in Monomial::up_to(n, cap - oh).into_iter().skip(1) {
            rows.push(h.mul_monomial(&u));
        }
    }
    let top = rows
        .iter()
        .chain(std::iter::once(h))
        .filter_map(SeriesPoly::max_degree)
        .max()
        .unwrap_or(0);
    let cols = Columns::new(n, top);
    let mut e = Echelon::new(ideal.ring.field(), cols.len(), false);
    for r in &rows {
        e.insert(cols.row(r));
    }
    e.lead_reduce(cols.row(h)).0.is_empty()
}
