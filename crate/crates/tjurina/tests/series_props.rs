use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tjurina::field::Field;
use tjurina::series::{hensel_solve, hensel_solve_linear, hessian_corank, Monomial, Ring, SeriesPoly};

fn ring(p: u64, n: usize) -> Ring {
    Ring::standard(Field::from_characteristic(p).unwrap(), n)
}

fn random(r: &Ring, lo: u32, hi: u32, seed: u64) -> SeriesPoly {
    SeriesPoly::random(r, lo, hi, 0.4, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn char_of(i: usize) -> u64 {
    [0, 5, 7, 101][i]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn identity_substitution(i in 0..4usize, n in 1usize..4, seed in any::<u64>()) {
        let r = ring(char_of(i), n);
        let f = random(&r, 0, 8, seed);
        let id: Vec<SeriesPoly> = (0..n).map(|j| SeriesPoly::var(&r, j)).collect();
        prop_assert_eq!(f.subst(&id, 6).unwrap().exact(), f.jet(6).exact());
    }

    #[test]
    fn substitution_composes(i in 0..4usize, seed in any::<u64>()) {
        let r = ring(char_of(i), 2);
        let f = random(&r, 0, 5, seed);
        let phi: Vec<SeriesPoly> = (0..2).map(|j| random(&r, 1, 3, seed ^ (j + 1))).collect();
        let psi: Vec<SeriesPoly> = (0..2).map(|j| random(&r, 1, 3, seed ^ (j + 7))).collect();
        let inner: Vec<SeriesPoly> = phi.iter().map(|p| p.subst(&psi, 7).unwrap()).collect();
        let a = f.subst(&inner, 7).unwrap().exact();
        let b = f.subst(&phi, 7).unwrap().subst(&psi, 7).unwrap().exact();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unit_inverse(i in 0..4usize, n in 1usize..4, seed in any::<u64>()) {
        let r = ring(char_of(i), n);
        let k = r.field().clone();
        let c = k.random_nonzero(&mut ChaCha8Rng::seed_from_u64(seed));
        let u = random(&r, 1, 5, seed).add(&SeriesPoly::constant(&r, c));
        let v = u.invert_unit(9).unwrap();
        prop_assert_eq!(u.mul_trunc(&v, 9).unwrap().exact(), SeriesPoly::one(&r));
    }

    #[test]
    fn leibniz_rule(i in 0..4usize, seed in any::<u64>()) {
        let r = ring(char_of(i), 3);
        let f = random(&r, 0, 5, seed);
        let g = random(&r, 0, 5, seed.wrapping_add(1));
        for j in 0..3 {
            let lhs = f.mul(&g).diff(j);
            let rhs = f.diff(j).mul(&g).add(&f.mul(&g.diff(j)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hensel_solution_solves(i in 0..4usize, seed in any::<u64>()) {
        // F(x, y) = c y + (terms of order >= 2) + (terms in x alone)
        let r = ring(char_of(i), 2);
        let k = r.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut big = random(&r, 2, 5, seed);
        big.add_term(Monomial::new(vec![0, 1]), k.random_nonzero(&mut rng));
        big.add_term(Monomial::new(vec![1, 0]), k.from_int(rng.gen_range(-3..4)));
        let big = big.exact();
        let y = hensel_solve(&big, 10).unwrap();
        prop_assert_eq!(&y, &hensel_solve_linear(&big, 10).unwrap());
        let small = y.ring().clone();
        let back = big.subst(&[SeriesPoly::var(&small, 0), y.clone()], 10).unwrap();
        prop_assert!(back.is_zero(), "{}", back.to_text());
    }

    #[test]
    fn corank_of_diagonal_forms(
        i in 1..4usize,
        diag in proptest::collection::vec(0i64..3, 1..5),
        seed in any::<u64>(),
    ) {
        let n = diag.len();
        let r = ring(char_of(i), n);
        let k = r.field().clone();
        let mut f = random(&r, 3, 4, seed);
        for (j, &d) in diag.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 2;
            f.add_term(Monomial::new(e), k.from_int(d));
        }
        let zeros = diag.iter().filter(|&&d| d == 0).count();
        prop_assert_eq!(hessian_corank(&f).unwrap(), zeros);
    }
}

#[test]
fn corank_survives_linear_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let r = ring(7, 3);
    let samples = [
        SeriesPoly::from_ints(&r, &[(1, &[2, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3])]),
        SeriesPoly::from_ints(&r, &[(1, &[2, 0, 0]), (3, &[0, 2, 0]), (1, &[0, 0, 4])]),
        SeriesPoly::from_ints(&r, &[(1, &[1, 1, 0]), (1, &[0, 0, 2]), (1, &[3, 0, 0])]),
        SeriesPoly::from_ints(&r, &[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[1, 1, 1])]),
    ];
    let k = r.field().clone();
    for f in &samples {
        let c = hessian_corank(f).unwrap();
        let mut trials = 0;
        while trials < 20 {
            let a: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(-3..4)).collect())
                .collect();
            let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            if det.rem_euclid(7) == 0 {
                continue;
            }
            let phi: Vec<SeriesPoly> = a
                .iter()
                .map(|row| {
                    let mut v = SeriesPoly::zero(&r);
                    for (j, &x) in row.iter().enumerate() {
                        v.add_term(Monomial::var(3, j), k.from_int(x));
                    }
                    v
                })
                .collect();
            let g = f.subst(&phi, 6).unwrap();
            assert_eq!(hessian_corank(&g).unwrap(), c, "{}", g.to_text());
            trials += 1;
        }
    }
}
