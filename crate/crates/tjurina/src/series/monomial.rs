use std::cmp::Ordering;
use std::fmt;

/// Exponent vector. Ordered by total degree first; inside a degree, monomials
/// with more weight on earlier variables come first, so `x^3 < x^2*y < y^3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    /// `o / self` when `self` divides `o`.
    pub fn quotient(&self, o: &Monomial) -> Option<Monomial> {
        self.divides(o).then(|| Monomial {
            exps: o.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Divide by `x_i`, if possible.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        (self.exps[i] > 0).then(|| {
            let mut exps = self.exps.clone();
            exps[i] -= 1;
            Monomial { exps }
        })
    }

    pub fn raise(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Monomial { exps }
    }

    /// All monomials of total degree `d` in `n` variables, ascending.
    pub fn of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(Monomial::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(n, d - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::new(vec![]));
            }
            return out;
        }
        rec(n, d, &mut Vec::new(), &mut out);
        out
    }

    /// All monomials of degree at most `d`, ascending.
    pub fn up_to(n: usize, d: u32) -> Vec<Monomial> {
        (0..=d).flat_map(|k| Monomial::of_degree(n, k)).collect()
    }

    pub fn format(&self, vars: &[String]) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| o.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_inside_a_degree() {
        let ms = Monomial::of_degree(2, 3);
        let ex: Vec<Vec<u32>> = ms.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(ex, vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(sorted, ms);
        assert!(Monomial::new(vec![0, 2]) < Monomial::new(vec![3, 0]));
    }

    #[test]
    fn counts() {
        assert_eq!(Monomial::of_degree(3, 4).len(), 15);
        assert_eq!(Monomial::up_to(2, 3).len(), 10);
    }

    #[test]
    fn formatting() {
        let v: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        assert_eq!(Monomial::new(vec![1, 3]).format(&v), "x*y^3");
        assert_eq!(Monomial::one(2).format(&v), "1");
    }
}
