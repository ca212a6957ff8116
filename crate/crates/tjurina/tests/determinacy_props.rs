use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tjurina::determinacy::{complete_transversal, determinacy_polytope, determinacy_tangent};
use tjurina::acgrading::default_valuation_cap;
use tjurina::field::Field;
use tjurina::localalg::{tau, tau_ext};
use tjurina::newton::CPolytope;
use tjurina::series::{Ring, SeriesPoly};

fn forms() -> Vec<SeriesPoly> {
    let r = |p: u64| Ring::standard(Field::from_characteristic(p).unwrap(), 2);
    vec![
        SeriesPoly::from_ints(&r(0), &[(1, &[2, 1]), (1, &[1, 2])]),
        SeriesPoly::from_ints(&r(0), &[(1, &[2, 0]), (1, &[0, 2])]),
        SeriesPoly::from_ints(&r(7), &[(1, &[3, 0]), (1, &[0, 5])]),
        SeriesPoly::from_ints(&r(0), &[(1, &[3, 0]), (1, &[1, 4]), (1, &[0, 6])]),
        SeriesPoly::from_ints(&r(11), &[(1, &[4, 0]), (1, &[2, 2]), (1, &[0, 5])]),
        SeriesPoly::from_ints(&r(5), &[(1, &[3, 0]), (1, &[1, 5]), (1, &[0, 7])]),
    ]
}

#[test]
fn tails_above_the_bound_keep_tau() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for f in forms() {
        let k = determinacy_tangent(&f, 40).unwrap().k;
        let t = tau(&f, 40).dimension;
        let te = tau_ext(&f, 40).dimension;
        for _ in 0..20 {
            let tail = SeriesPoly::random(f.ring(), k + 1, k + 3, 0.5, &mut rng);
            let g = f.add(&tail);
            assert_eq!(tau(&g, 40).dimension, t, "{}", g.to_text());
            assert_eq!(tau_ext(&g, 40).dimension, te, "{}", g.to_text());
        }
    }
}

#[test]
fn polytope_bound_against_tangent_bound() {
    // logged rather than asserted: the polytope bound is not always smaller
    for f in forms() {
        let Ok(p) = CPolytope::newton_diagram(&f) else { continue };
        let tangent = determinacy_tangent(&f, 40).unwrap().k;
        match determinacy_polytope(&f, &p, default_valuation_cap(&p)) {
            Ok(b) if b.k > tangent => {
                eprintln!("{}: polytope bound {} > tangent bound {tangent}", f.to_text(), b.k)
            }
            Ok(_) => {}
            Err(e) => eprintln!("{}: {e}", f.to_text()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn transversal_dimensions_add_up(i in 0..6usize, k in 2u32..6, extra in 0u32..3) {
        let f = &forms()[i];
        let l = k + extra;
        let c = complete_transversal(f, k, l).unwrap();
        prop_assert_eq!(c.codim() + c.tangent_dim, c.layer_dim);
        let same = complete_transversal(f, k, k).unwrap();
        prop_assert!(same.basis.is_empty());
        prop_assert_eq!(same.layer_dim, 0);
    }
}
