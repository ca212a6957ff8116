use super::{Monomial, Ring, SeriesError, SeriesPoly};
use crate::field::Scalar;
use crate::linalg;

fn check_hensel(big: &SeriesPoly) -> Result<(Ring, usize), SeriesError> {
    let r = big.ring();
    let n = r.nvars();
    if n == 0 {
        return Err(SeriesError::PreconditionViolated(
            "no solve variable".into(),
        ));
    }
    let f = r.field();
    if !f.is_zero(&big.constant_term()) {
        return Err(SeriesError::PreconditionViolated(
            "F(x,0) is not in the ideal of the x-variables".into(),
        ));
    }
    let dy = big.coeff(&Monomial::var(n, n - 1));
    if f.is_zero(&dy) {
        return Err(SeriesError::PreconditionViolated(
            "dF/dy(x,0) is not a unit".into(),
        ));
    }
    let keep: Vec<usize> = (0..n - 1).collect();
    Ok((r.restrict(&keep), n - 1))
}

/// Plug `y(x)` into `F(x, y)` where `y` is the last variable.
fn eval_at(big: &SeriesPoly, small: &Ring, y: &SeriesPoly, n: u32) -> SeriesPoly {
    let mut phi: Vec<SeriesPoly> = (0..small.nvars())
        .map(|i| SeriesPoly::var(small, i))
        .collect();
    phi.push(y.clone());
    big.subst(&phi, n).unwrap()
}

/// Unique `y(x)` in the maximal ideal with `F(x, y(x)) = 0 mod m^(n+1)`, by
/// Newton iteration. `F` lives in a ring whose last variable is `y`; the
/// answer lives in the ring of the remaining variables.
pub fn hensel_solve(big: &SeriesPoly, n: u32) -> Result<SeriesPoly, SeriesError> {
    let (small, iy) = check_hensel(big)?;
    let big = big.clone().exact();
    let dfdy = big.diff(iy);
    let mut y = SeriesPoly::zero(&small);
    // y agrees with the solution modulo m^prec
    let mut prec = 1u32;
    while prec <= n {
        let next = (2 * prec).min(n + 1);
        let t = next - 1;
        let res = eval_at(&big, &small, &y, t);
        let d = eval_at(&dfdy, &small, &y, t).invert_unit(t)?;
        y = y.sub(&res.mul_trunc(&d, t)?).exact().jet(t).exact();
        prec = next;
    }
    Ok(y.with_trunc(Some(n)))
}

/// Same solution through the fixed-point iteration `y <- y - F(x,y)/c`, with
/// `c = dF/dy(0,0)`; gains one degree per step.
pub fn hensel_solve_linear(big: &SeriesPoly, n: u32) -> Result<SeriesPoly, SeriesError> {
    let (small, iy) = check_hensel(big)?;
    let f = small.field().clone();
    let c = big.coeff(&Monomial::var(iy + 1, iy));
    let ci = f.inv(&c)?;
    let big = big.clone().exact();
    let mut y = SeriesPoly::zero(&small);
    for _ in 0..=n {
        let res = eval_at(&big, &small, &y, n);
        y = y.sub(&res.scale(&ci)).exact();
    }
    Ok(y.with_trunc(Some(n)))
}

/// Hessian at the origin as a symmetric matrix.
pub fn quadratic_form(f: &SeriesPoly) -> Vec<Vec<Scalar>> {
    let k = f.field();
    let n = f.ring().nvars();
    let mut h = vec![vec![k.zero(); n]; n];
    for (m, c) in f.terms().filter(|(m, _)| m.degree() == 2) {
        let idx: Vec<usize> = (0..n).filter(|&i| m.exps()[i] > 0).collect();
        match idx.as_slice() {
            [i] => h[*i][*i] = k.mul(c, &k.from_int(2)),
            [i, j] => {
                h[*i][*j] = c.clone();
                h[*j][*i] = c.clone();
            }
            _ => unreachable!(),
        }
    }
    h
}

/// `n - rank` of the Hessian at the origin.
pub fn hessian_corank(f: &SeriesPoly) -> Result<usize, SeriesError> {
    if f.field().characteristic() == 2 {
        return Err(SeriesError::CharTwoUnsupported);
    }
    let h = quadratic_form(f);
    Ok(h.len() - linalg::rank(f.field(), &h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use num_rational::BigRational;

    fn ring(p: u64, n: usize) -> Ring {
        Ring::standard(Field::from_characteristic(p).unwrap(), n)
    }

    #[test]
    fn hensel_examples() {
        let r = ring(0, 2);
        let x = SeriesPoly::var(&r, 0);
        let y = SeriesPoly::var(&r, 1);
        let y1 = hensel_solve(&y.sub(&x), 5).unwrap();
        assert_eq!(y1.to_text(), "x");

        // (1+y)^2 (1+x) - 1 over Q
        let one = SeriesPoly::one(&r);
        let big = one.add(&y).mul(&one.add(&y)).mul(&one.add(&x)).sub(&one);
        let sol = hensel_solve(&big, 2).unwrap();
        let q = Field::rationals();
        let c = |a: i64, b: i64| {
            q.from_rational(&BigRational::new(a.into(), b.into()))
                .unwrap()
        };
        assert_eq!(sol.coeff(&Monomial::new(vec![1])), c(-1, 2));
        assert_eq!(sol.coeff(&Monomial::new(vec![2])), c(3, 8));
        assert_eq!(sol.len(), 2);

        let r7 = ring(7, 2);
        let big = SeriesPoly::from_ints(&r7, &[(1, &[0, 1]), (1, &[1, 0]), (1, &[0, 2])]);
        let sol = hensel_solve(&big, 3).unwrap();
        assert_eq!(sol.to_text(), "6*x + 6*x^2 + 5*x^3");
        assert_eq!(sol, hensel_solve_linear(&big, 3).unwrap());
        let small = sol.ring().clone();
        let back = eval_at(&big, &small, &sol.clone().exact(), 3);
        assert!(back.is_zero());
    }

    #[test]
    fn hensel_preconditions() {
        let r = ring(0, 2);
        let bad = SeriesPoly::from_ints(&r, &[(1, &[0, 2]), (1, &[1, 0])]);
        assert!(matches!(
            hensel_solve(&bad, 3),
            Err(SeriesError::PreconditionViolated(_))
        ));
        let bad = SeriesPoly::from_ints(&r, &[(1, &[0, 0]), (1, &[0, 1])]);
        assert!(matches!(
            hensel_solve(&bad, 3),
            Err(SeriesError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn corank_examples() {
        let r7 = ring(7, 3);
        let f = SeriesPoly::from_ints(&r7, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])]);
        assert_eq!(hessian_corank(&f).unwrap(), 0);
        let q = ring(0, 2);
        assert_eq!(
            hessian_corank(&SeriesPoly::from_ints(&q, &[(1, &[2, 0]), (1, &[0, 3])])).unwrap(),
            1
        );
        assert_eq!(
            hessian_corank(&SeriesPoly::from_ints(&q, &[(1, &[3, 0]), (1, &[0, 3])])).unwrap(),
            2
        );
        let r2 = ring(2, 2);
        assert_eq!(
            hessian_corank(&SeriesPoly::from_ints(&r2, &[(1, &[2, 0])])),
            Err(SeriesError::CharTwoUnsupported)
        );
    }
}
