//! Splitting off nondegenerate squares.

use super::ClassifyError;
use crate::series::hensel_solve;
use crate::series::{Monomial, Ring, SeriesPoly};

#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Series in the surviving variables, with zero quadratic part.
    pub residual: SeriesPoly,
    pub squares: usize,
    /// Indices of the surviving variables in the input ring.
    pub kept: Vec<usize>,
    pub log: Vec<String>,
}

fn square_coeff(g: &SeriesPoly, i: usize) -> crate::field::Scalar {
    let n = g.ring().nvars();
    let mut e = vec![0; n];
    e[i] = 2;
    g.coeff(&Monomial::new(e))
}

/// `f ~ residual + (number of squares)`, computed modulo `m^(n+1)`.
pub fn split(f: &SeriesPoly, n: u32) -> Result<SplitResult, ClassifyError> {
    let field = f.field().clone();
    if field.characteristic() == 2 {
        return Err(ClassifyError::CharTwo);
    }
    let mut g = f.jet(n);
    let mut kept: Vec<usize> = (0..f.ring().nvars()).collect();
    let mut squares = 0;
    let mut log = Vec::new();
    loop {
        let r = g.ring().clone();
        let k = r.nvars();
        let mut pivot = (0..k).find(|&i| !field.is_zero(&square_coeff(&g, i)));
        if pivot.is_none() {
            let mixed = g.terms().find(|(m, _)| m.degree() == 2).map(|(m, _)| {
                let idx: Vec<usize> = (0..k).filter(|&i| m.exps()[i] > 0).collect();
                (idx[0], idx[1])
            });
            if let Some((i, j)) = mixed {
                // x_i -> x_i + x_j turns x_i x_j into a square of x_j
                let phi: Vec<SeriesPoly> = (0..k)
                    .map(|a| {
                        let v = SeriesPoly::var(&r, a);
                        if a == i {
                            v.add(&SeriesPoly::var(&r, j))
                        } else {
                            v
                        }
                    })
                    .collect();
                g = g.subst(&phi, n)?;
                log.push(format!("{0} -> {0} + {1}", r.vars()[i], r.vars()[j]));
                pivot = Some(j);
            }
        }
        let Some(i) = pivot else { break };
        // move x_i last and solve dg/dx_i = 0 for it
        let others: Vec<usize> = (0..k).filter(|&a| a != i).collect();
        let mut order = others.clone();
        order.push(i);
        let names: Vec<&String> = order.iter().map(|&a| &r.vars()[a]).collect();
        let moved = Ring::new(field.clone(), &names);
        let mut map = vec![0; k];
        for (pos, &a) in order.iter().enumerate() {
            map[a] = pos;
        }
        let dg = g.diff(i).rename(&moved, &map);
        let h = hensel_solve(&dg, n)?;
        let small = h.ring().clone();
        let phi: Vec<SeriesPoly> = (0..k)
            .map(|a| match others.iter().position(|&b| b == a) {
                Some(pos) => SeriesPoly::var(&small, pos),
                None => h.clone(),
            })
            .collect();
        let next = g.subst(&phi, n)?;
        log.push(format!(
            "{0} -> {0} + ({1}); square split off",
            r.vars()[i],
            h.clone().exact()
        ));
        g = next;
        kept.remove(i);
        squares += 1;
    }
    Ok(SplitResult {
        residual: g,
        squares,
        kept,
        log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::localalg::tau;

    fn poly(p: u64, n: usize, terms: &[(i64, &[u32])]) -> SeriesPoly {
        SeriesPoly::from_ints(
            &Ring::standard(Field::from_characteristic(p).unwrap(), n),
            terms,
        )
    }

    #[test]
    fn completes_one_square() {
        let f = poly(0, 2, &[(1, &[2, 0]), (1, &[1, 3]), (1, &[0, 3])]);
        let s = split(&f, 8).unwrap();
        assert_eq!(s.squares, 1);
        assert_eq!(s.kept, vec![1]);
        assert_eq!(s.residual.clone().exact().to_text(), "y^3 - 1/4*y^6");
    }

    #[test]
    fn full_rank_and_identity() {
        let f = poly(7, 3, &[(1, &[2, 0, 0]), (1, &[0, 2, 0]), (1, &[0, 0, 2])]);
        let s = split(&f, 6).unwrap();
        assert_eq!(s.squares, 3);
        assert!(s.residual.is_zero());

        let g = poly(7, 2, &[(1, &[3, 0]), (1, &[0, 3])]);
        let s = split(&g, 6).unwrap();
        assert_eq!(s.squares, 0);
        assert_eq!(s.residual.clone().exact(), g);
    }

    #[test]
    fn mixed_term_only() {
        // xy + z^3 has corank 1
        let f = poly(5, 3, &[(1, &[1, 1, 0]), (1, &[0, 0, 3])]);
        let s = split(&f, 6).unwrap();
        assert_eq!(s.squares, 2);
        assert_eq!(s.residual.clone().exact().to_text(), "z^3");
    }

    #[test]
    fn char_two_is_refused() {
        let f = poly(2, 1, &[(1, &[2])]);
        assert!(matches!(split(&f, 4), Err(ClassifyError::CharTwo)));
    }

    #[test]
    fn tau_is_kept() {
        // x^2 + 2xy^2 + y^5 + z^2 + zx^3 over F_7
        let f = poly(
            7,
            3,
            &[
                (1, &[2, 0, 0]),
                (2, &[1, 2, 0]),
                (1, &[0, 5, 0]),
                (1, &[0, 0, 2]),
                (1, &[3, 0, 1]),
            ],
        );
        let s = split(&f, 12).unwrap();
        let r = s.residual.clone().exact();
        let t_f = tau(&f, 12).dimension;
        let t_r = tau(&r, 12).dimension;
        assert_eq!(t_f, t_r);
    }
}
