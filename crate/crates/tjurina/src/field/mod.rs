//! Exact scalars over the rationals, prime fields and towers of finite
//! extensions.
//!
//! A [`Field`] is a cheap shared handle; raw [`Scalar`] values carry no field
//! tag and are interpreted by the field that operates on them. Canonical
//! representatives make structural equality coincide with field equality.

mod factor;
mod upoly;

pub use factor::{factor, is_irreducible, nth_root, roots, squarefree_decomposition, NthRoot};
pub use upoly::UPoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension modulus must be monic and irreducible over its base")]
    BadModulus,
    #[error("operation needs a finite coefficient field")]
    NotFiniteField,
    #[error("{value} has no rational {n}-th root")]
    NoRationalRoot { value: String, n: u32 },
    #[error("coefficient {0} is not defined in this field")]
    CoefficientNotInField(String),
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
}

/// Raw field value. Its meaning depends on the [`Field`] that owns it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    /// Residue in `[0, p)`.
    Mod(u64),
    /// Residue polynomial over the base field, padded to the modulus degree.
    Poly(Vec<Scalar>),
}

#[derive(Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
    Extension {
        base: Field,
        modulus: UPoly,
        generator: String,
    },
}

#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Extension {
                base,
                modulus,
                generator,
            } => write!(
                f,
                "{base}[{generator}]/({})",
                modulus.format(base, generator)
            ),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Self {
        Field(Arc::new(FieldSpec::Rationals))
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldSpec::Prime(p))))
    }

    /// `0` selects the rationals.
    pub fn from_characteristic(p: u64) -> Result<Self, FieldError> {
        if p == 0 {
            Ok(Self::rationals())
        } else {
            Self::prime(p)
        }
    }

    /// `base[t]/(modulus)`; the modulus is checked to be monic and irreducible.
    pub fn extension(base: &Field, modulus: UPoly, generator: &str) -> Result<Self, FieldError> {
        if !base.is_finite() {
            return Err(FieldError::NotFiniteField);
        }
        match modulus.degree() {
            Some(d) if d >= 1 => {}
            _ => return Err(FieldError::BadModulus),
        }
        if !base.is_one(modulus.lead().unwrap()) || !is_irreducible(base, &modulus) {
            return Err(FieldError::BadModulus);
        }
        Ok(Field(Arc::new(FieldSpec::Extension {
            base: base.clone(),
            modulus,
            generator: generator.to_string(),
        })))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension { base, .. } => base.characteristic(),
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(&*self.0, FieldSpec::Rationals)
    }

    /// Degree over the prime field (1 for the rationals).
    pub fn absolute_degree(&self) -> u32 {
        match &*self.0 {
            FieldSpec::Extension { base, modulus, .. } => {
                base.absolute_degree() * modulus.degree().unwrap() as u32
            }
            _ => 1,
        }
    }

    pub fn order(&self) -> Option<BigUint> {
        match &*self.0 {
            FieldSpec::Rationals => None,
            _ => Some(BigUint::from(self.characteristic()).pow(self.absolute_degree())),
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match &*self.0 {
            FieldSpec::Extension { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Generator names along the tower, innermost first.
    pub fn generator_names(&self) -> Vec<String> {
        match &*self.0 {
            FieldSpec::Extension {
                base, generator, ..
            } => {
                let mut v = base.generator_names();
                v.push(generator.clone());
                v
            }
            _ => Vec::new(),
        }
    }

    pub fn fresh_generator_name(&self) -> String {
        let used = self.generator_names();
        if !used.iter().any(|g| g == "t") {
            return "t".into();
        }
        (1..)
            .map(|i| format!("t{i}"))
            .find(|c| !used.contains(c))
            .unwrap()
    }

    fn ext_degree(&self) -> usize {
        match &*self.0 {
            FieldSpec::Extension { modulus, .. } => modulus.degree().unwrap(),
            _ => 1,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.0 {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
            FieldSpec::Extension { base, .. } => Scalar::Poly(vec![base.zero(); self.ext_degree()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match &*self.0 {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Mod(r.to_u64().unwrap())
            }
            FieldSpec::Extension { base, .. } => {
                let mut v = vec![base.zero(); self.ext_degree()];
                v[0] = base.from_bigint(n);
                Scalar::Poly(v)
            }
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
            .map_err(|_| FieldError::CoefficientNotInField(q.to_string()))
    }

    /// Lifts an element of `base` (or of any field below it in the tower).
    pub fn embed(&self, from: &Field, a: &Scalar) -> Result<Scalar, FieldError> {
        if self == from {
            return Ok(a.clone());
        }
        match &*self.0 {
            FieldSpec::Extension { base, .. } => {
                let inner = base.embed(from, a)?;
                let mut v = vec![base.zero(); self.ext_degree()];
                v[0] = inner;
                Ok(Scalar::Poly(v))
            }
            _ => Err(FieldError::FieldMismatch),
        }
    }

    /// Whether `other` is this field or a subfield in its tower.
    pub fn contains_field(&self, other: &Field) -> bool {
        self == other || self.base().is_some_and(|b| b.contains_field(other))
    }

    /// The adjoined generator of an extension.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.0 {
            FieldSpec::Extension { base, .. } => {
                let mut v = vec![base.zero(); self.ext_degree()];
                if v.len() == 1 {
                    // degree-one extensions are identified with the base
                    let FieldSpec::Extension { modulus, .. } = &*self.0 else {
                        unreachable!()
                    };
                    v[0] = base.neg(&modulus.coeffs()[0]);
                } else {
                    v[1] = base.one();
                }
                Some(Scalar::Poly(v))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(v) => *v == 0,
            Scalar::Poly(cs) => {
                let base = self.base().expect("polynomial scalar outside an extension");
                cs.iter().all(|c| base.is_zero(c))
            }
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (FieldSpec::Extension { base, .. }, Scalar::Poly(x), Scalar::Poly(y)) => {
                Scalar::Poly(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (&*self.0, a) {
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Extension { base, .. }, Scalar::Poly(x)) => {
                Scalar::Poly(x.iter().map(|u| base.neg(u)).collect())
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (&*self.0, a, b) {
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (FieldSpec::Extension { base, modulus, .. }, Scalar::Poly(x), Scalar::Poly(y)) => {
                let d = x.len();
                let mut prod = vec![base.zero(); 2 * d - 1];
                for (i, u) in x.iter().enumerate() {
                    if base.is_zero(u) {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        if !base.is_zero(v) {
                            prod[i + j] = base.add(&prod[i + j], &base.mul(u, v));
                        }
                    }
                }
                let m = modulus.coeffs();
                for k in (d..prod.len()).rev() {
                    let c = std::mem::replace(&mut prod[k], base.zero());
                    if base.is_zero(&c) {
                        continue;
                    }
                    for (j, mj) in m.iter().take(d).enumerate() {
                        let t = base.mul(&c, mj);
                        prod[k - d + j] = base.sub(&prod[k - d + j], &t);
                    }
                }
                prod.truncate(d);
                Scalar::Poly(prod)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (_, Scalar::Rat(x)) => Scalar::Rat(x.recip()),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => {
                let (g, s, _) = ext_gcd_i128(*x as i128, *p as i128);
                debug_assert_eq!(g, 1);
                Scalar::Mod(s.rem_euclid(*p as i128) as u64)
            }
            (FieldSpec::Extension { base, modulus, .. }, Scalar::Poly(x)) => {
                let ap = UPoly::new(base, x.clone());
                let (g, s, _) = ap.ext_gcd(base, modulus);
                // g is a nonzero constant because the modulus is irreducible
                let ginv = base.inv(&g.coeffs()[0])?;
                let s = s.scale(base, &ginv);
                self.pad(s)
            }
            _ => panic!("scalar does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: &BigUint) -> Scalar {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &Scalar, e: u64) -> Scalar {
        self.pow(a, &BigUint::from(e))
    }

    /// Signed powers; negative exponents invert first.
    pub fn pow_i64(&self, a: &Scalar, e: i64) -> Result<Scalar, FieldError> {
        if e >= 0 {
            Ok(self.pow_u64(a, e as u64))
        } else {
            Ok(self.pow_u64(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// `a^p`; additive and multiplicative in characteristic `p`.
    pub fn frobenius(&self, a: &Scalar) -> Scalar {
        match self.characteristic() {
            0 => a.clone(),
            p => self.pow_u64(a, p),
        }
    }

    /// Residue polynomial as a padded scalar.
    pub(crate) fn pad(&self, p: UPoly) -> Scalar {
        let FieldSpec::Extension { base, .. } = &*self.0 else {
            panic!("pad on a non-extension field");
        };
        let mut v = p.into_coeffs();
        v.resize(self.ext_degree(), base.zero());
        Scalar::Poly(v)
    }

    /// Uniform element of a finite field; small integers for the rationals.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match &*self.0 {
            FieldSpec::Rationals => {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                Scalar::Rat(BigRational::new(n.into(), d.into()))
            }
            FieldSpec::Prime(p) => Scalar::Mod(rng.gen_range(0..*p)),
            FieldSpec::Extension { base, .. } => {
                Scalar::Poly((0..self.ext_degree()).map(|_| base.random(rng)).collect())
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let a = self.random(rng);
            if !self.is_zero(&a) {
                return a;
            }
        }
    }

    /// All elements of a finite field with at most `limit` elements.
    pub fn elements(&self, limit: u64) -> Option<Vec<Scalar>> {
        let q = self.order()?.to_u64()?;
        if q > limit {
            return None;
        }
        Some(match &*self.0 {
            FieldSpec::Prime(p) => (0..*p).map(Scalar::Mod).collect(),
            FieldSpec::Extension { base, .. } => {
                let be = base.elements(limit)?;
                let mut out = vec![Vec::new()];
                for _ in 0..self.ext_degree() {
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<Scalar>| {
                            be.iter().map(move |b| {
                                let mut w = v.clone();
                                w.push(b.clone());
                                w
                            })
                        })
                        .collect();
                }
                out.into_iter().map(Scalar::Poly).collect()
            }
            FieldSpec::Rationals => unreachable!(),
        })
    }

    /// Integer representative for prime-field and rational integers, if any.
    pub fn to_i64(&self, a: &Scalar) -> Option<i64> {
        match a {
            Scalar::Mod(v) => i64::try_from(*v).ok(),
            Scalar::Rat(r) if r.is_integer() => r.numer().to_i64(),
            _ => None,
        }
    }

    pub fn format(&self, a: &Scalar) -> String {
        match (&*self.0, a) {
            (_, Scalar::Rat(r)) => r.to_string(),
            (_, Scalar::Mod(v)) => v.to_string(),
            (
                FieldSpec::Extension {
                    base, generator, ..
                },
                Scalar::Poly(cs),
            ) => UPoly::new(base, cs.clone()).format(base, generator),
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    /// True for values that print without a leading minus and without `+`.
    pub fn is_atomic(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => !r.is_negative(),
            Scalar::Mod(_) => true,
            Scalar::Poly(cs) => {
                let base = self.base().unwrap();
                cs.iter().filter(|c| !base.is_zero(c)).count() <= 1
                    && cs.iter().all(|c| base.is_atomic(c))
            }
        }
    }

    pub fn element(&self, value: Scalar) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }
}

fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i128(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// A scalar paired with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Scalar,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Field, value: Scalar) -> Self {
        field.element(value)
    }

    pub fn from_int(field: &Field, n: i64) -> Self {
        field.element(field.from_int(n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn into_value(self) -> Scalar {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        let f = &self.field;
        let (a, b) = (&self.value, &other.value);
        let v = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(f.element(v))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow_u64(&self.value, e))
    }

    pub fn nth_root(&self, n: u32, seed: u64) -> Result<NthRoot, FieldError> {
        nth_root(&self.field, &self.value, n, seed)
    }
}

pub(crate) fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root = |z: &BigInt| -> Option<BigInt> {
        let r = z.abs().nth_root(n);
        (r.pow(n) == z.abs()).then(|| if z.is_negative() { -r } else { r })
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}
