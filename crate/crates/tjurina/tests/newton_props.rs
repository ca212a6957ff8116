use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tjurina::acgrading::{ac_piece, default_valuation_cap, regular_basis};
use tjurina::field::Field;
use tjurina::localalg::tau;
use tjurina::newton::{lower_facets, vp_product_check, CPolytope, ProductCheck};
use tjurina::series::{Monomial, Ring, SeriesPoly};

fn ring(p: u64, n: usize) -> Ring {
    Ring::standard(Field::from_characteristic(p).unwrap(), n)
}

/// A convenient polynomial: pure powers of every variable plus random terms.
fn convenient(r: &Ring, seed: u64) -> SeriesPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = r.nvars();
    let k = r.field().clone();
    let mut f = SeriesPoly::random(r, 2, 6, 0.2, &mut rng);
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = rng.gen_range(2..8);
        let m = Monomial::new(e);
        // make the coefficient of the pure power exactly 1
        let c = k.sub(&k.one(), &f.coeff(&m));
        f.add_term(m, c);
    }
    f
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower hull in the plane by a monotone chain; compact edges are the ones
/// going strictly down.
fn hull_2d(points: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort();
    pts.dedup();
    let mut chain: Vec<(i64, i64)> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
        .windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| {
            let (dx, dy) = (w[1].0 - w[0].0, w[0].1 - w[1].1);
            let g = gcd(dx, dy);
            vec![dy / g, dx / g]
        })
        .collect()
}

/// Every plane through three affinely independent points that supports the
/// set from below with a strictly positive normal.
fn hull_3d(points: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate().skip(i + 1) {
            for c in points.iter().skip(j + 1) {
                let (u, v) = (sub(b, a), sub(c, a));
                let mut nrm = vec![
                    u[1] * v[2] - u[2] * v[1],
                    u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0],
                ];
                if nrm.iter().all(|&x| x <= 0) {
                    nrm.iter_mut().for_each(|x| *x = -*x);
                }
                if nrm.iter().any(|&x| x <= 0) {
                    continue;
                }
                let g = nrm.iter().fold(0, |g, &x| gcd(g, x));
                nrm.iter_mut().for_each(|x| *x /= g);
                let off = dot(&nrm, a);
                if points.iter().all(|p| dot(&nrm, p) >= off) {
                    out.insert(nrm);
                }
            }
        }
    }
    out
}

fn support(f: &SeriesPoly) -> Vec<Vec<i64>> {
    f.support()
        .map(|m| m.exps().iter().map(|&e| e as i64).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn hull_matches_brute_force(n in 2usize..4, seed in any::<u64>()) {
        let r = ring(7, n);
        let mut pts = support(&convenient(&r, seed));
        pts.truncate(12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = rng.gen_range(2..8);
            pts.push(e);
        }
        let got: BTreeSet<Vec<i64>> = lower_facets(&pts).into_iter().map(|f| f.normal).collect();
        let want = if n == 2 { hull_2d(&pts) } else { hull_3d(&pts) };
        prop_assert_eq!(got, want);
    }

    #[test]
    fn valuation_inequalities(n in 2usize..4, seed in any::<u64>()) {
        let r = ring(0, n);
        let p = CPolytope::newton_diagram(&convenient(&r, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..2 {
            let f = SeriesPoly::random(&r, 1, 5, 0.3, &mut rng);
            let g = SeriesPoly::random(&r, 1, 5, 0.3, &mut rng);
            let (Some(vf), Some(vg)) = (p.v_series(&f), p.v_series(&g)) else { continue };
            let vfg = p.v_series(&f.mul(&g)).unwrap();
            prop_assert!(vfg >= vf + vg);
            if let Some(vs) = p.v_series(&f.add(&g)) {
                prop_assert!(vs >= vf.min(vg));
            }
            let eq = matches!(vp_product_check(&f, &g, &p), ProductCheck::Equality { .. });
            prop_assert_eq!(eq, vfg == vf + vg);
        }
    }

    #[test]
    fn initial_part_is_idempotent(n in 2usize..4, seed in any::<u64>()) {
        let r = ring(5, n);
        let f = convenient(&r, seed);
        let p = CPolytope::newton_diagram(&f).unwrap();
        let g = p.initial_part(&f);
        prop_assert_eq!(p.initial_part(&g), g.clone());
        prop_assert_eq!(p.v_series(&g), p.v_series(&f));
        if let Some(v) = p.v_series(&f.sub(&g)) {
            prop_assert!(v > p.v_series(&f).unwrap());
        }
    }
}

fn samples_2d(seed: u64) -> SeriesPoly {
    let r = ring([0, 7, 11][(seed % 3) as usize], 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (rng.gen_range(3..6), rng.gen_range(3..8));
    let mut f = SeriesPoly::from_ints(&r, &[(1, &[a, 0]), (1, &[0, b])]);
    let k = r.field().clone();
    for _ in 0..2 {
        let (i, j) = (rng.gen_range(1..a), rng.gen_range(1..b));
        f.add_term(Monomial::new(vec![i, j]), k.from_int(rng.gen_range(1..4)));
    }
    f
}

#[test]
fn graded_algebra_surjects() {
    for seed in 0..20 {
        let f = samples_2d(seed);
        let p = CPolytope::newton_diagram(&f).unwrap();
        let t = tau(&f, 40);
        let Ok(rb) = regular_basis(&f, &p, default_valuation_cap(&p), false) else { continue };
        if let Some(t) = t.dimension {
            assert!(rb.monomials.len() >= t, "{}: {} < {t}", f.to_text(), rb.monomials.len());
        }
    }
}

#[test]
fn graded_algebra_sees_only_the_initial_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checked = 0;
    for seed in 0..40 {
        let f0 = samples_2d(seed);
        let p = CPolytope::newton_diagram(&f0).unwrap();
        let in_f = p.initial_part(&f0);
        let v = p.v_series(&in_f).unwrap();
        // tail strictly above the diagram
        let r = f0.ring().clone();
        let mut f = in_f.clone();
        for m in Monomial::up_to(2, 10) {
            if p.v_monomial(&m) > v && rng.gen_bool(0.15) {
                f.add_term(m, r.field().from_int(rng.gen_range(1..5)));
            }
        }
        let (Ok(a), Ok(b)) = (
            regular_basis(&f, &p, default_valuation_cap(&p), false),
            regular_basis(&in_f, &p, default_valuation_cap(&p), false),
        ) else {
            continue;
        };
        assert_eq!(a.monomials, b.monomials, "{}", f.to_text());
        for d in [v - 1, v, v + 1] {
            assert_eq!(
                ac_piece(&f, &p, d).unwrap().piece_dimension,
                ac_piece(&in_f, &p, d).unwrap().piece_dimension
            );
        }
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn quasi_homogeneous_regular_basis_has_tau_elements() {
    let r = ring(0, 2);
    let forms: [&[(i64, &[u32])]; 5] = [
        &[(1, &[3, 0]), (1, &[0, 4])],
        &[(1, &[3, 0]), (1, &[0, 5])],
        &[(1, &[4, 0]), (1, &[0, 6])],
        &[(1, &[3, 0]), (1, &[1, 4]), (1, &[0, 6])],
        &[(1, &[2, 0]), (1, &[0, 7])],
    ];
    for terms in forms {
        let f = SeriesPoly::from_ints(&r, terms);
        let p = CPolytope::newton_diagram(&f).unwrap();
        assert_eq!(p.weights().len(), 1);
        let rb = regular_basis(&f, &p, default_valuation_cap(&p), false).unwrap();
        assert_eq!(Some(rb.monomials.len()), tau(&f, 40).dimension, "{}", f.to_text());
    }
}
