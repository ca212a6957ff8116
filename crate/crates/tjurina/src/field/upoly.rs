use num_bigint::BigUint;

use super::{Field, FieldError, Scalar};

/// Dense univariate polynomial, coefficients from low to high degree, with no
/// trailing zeros. The owning field is passed to every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(f: &Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| f.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(f: &Field, c: Scalar) -> Self {
        Self::new(f, vec![c])
    }

    pub fn one(f: &Field) -> Self {
        Self::constant(f, f.one())
    }

    /// `c * X^k`.
    pub fn monomial(f: &Field, c: Scalar, k: usize) -> Self {
        let mut v = vec![f.zero(); k];
        v.push(c);
        Self::new(f, v)
    }

    pub fn x(f: &Field) -> Self {
        Self::monomial(f, f.one(), 1)
    }

    pub fn from_ints(f: &Field, cs: &[i64]) -> Self {
        Self::new(f, cs.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, f: &Field, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_one(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && f.is_one(&self.coeffs[0])
    }

    pub fn add(&self, f: &Field, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| f.add(&self.coeff(f, i), &o.coeff(f, i)))
            .collect();
        UPoly::new(f, v)
    }

    pub fn neg(&self, f: &Field) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, f: &Field, o: &UPoly) -> UPoly {
        self.add(f, &o.neg(f))
    }

    pub fn scale(&self, f: &Field, c: &Scalar) -> UPoly {
        UPoly::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &Field, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        UPoly::new(f, v)
    }

    pub fn divrem(&self, f: &Field, d: &UPoly) -> Result<(UPoly, UPoly), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        let inv = f.inv(d.lead().unwrap())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(&r[k], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = f.sub(&r[k - dd + j], &f.mul(&c, dj));
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(f, q), UPoly::new(f, r)))
    }

    pub fn rem(&self, f: &Field, d: &UPoly) -> UPoly {
        self.divrem(f, d).expect("nonzero divisor").1
    }

    pub fn div_exact(&self, f: &Field, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(f, d).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self, f: &Field) -> UPoly {
        match self.lead() {
            None => UPoly::zero(),
            Some(l) => self.scale(f, &f.inv(l).unwrap()),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, f: &Field, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(g, s, t)` with `s*self + t*o = g`, `g` not normalized.
    pub fn ext_gcd(&self, f: &Field, o: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UPoly::one(f), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1).unwrap();
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(f, &q.mul(f, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(f, &q.mul(f, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    pub fn derivative(&self, f: &Field) -> UPoly {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        UPoly::new(f, v)
    }

    pub fn eval(&self, f: &Field, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mulmod(&self, f: &Field, o: &UPoly, m: &UPoly) -> UPoly {
        self.mul(f, o).rem(f, m)
    }

    pub fn powmod(&self, f: &Field, e: &BigUint, m: &UPoly) -> UPoly {
        let mut acc = UPoly::one(f).rem(f, m);
        let base = self.rem(f, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(f, &acc, m);
            if e.bit(i) {
                acc = acc.mulmod(f, &base, m);
            }
        }
        acc
    }

    /// Coefficient map, e.g. lifting into an extension.
    pub fn map(&self, to: &Field, g: impl Fn(&Scalar) -> Scalar) -> UPoly {
        UPoly::new(to, self.coeffs.iter().map(g).collect())
    }

    pub fn format(&self, f: &Field, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format(c);
            let cs = if f.is_atomic(c) {
                cs
            } else {
                format!("({cs})")
            };
            parts.push(match k {
                0 => cs,
                _ => {
                    let pw = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    if f.is_one(c) {
                        pw
                    } else {
                        format!("{cs}*{pw}")
                    }
                }
            });
        }
        parts.join("+")
    }
}
