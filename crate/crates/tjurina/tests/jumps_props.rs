use proptest::prelude::*;

use tjurina::frontend::{parse_range, parse_template};
use tjurina::jumps::{predict_jumps, scan_family, FamilyKind, ScanOptions};

fn vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

#[test]
fn scan_is_deterministic() {
    let a = parse_range("k=14..22").unwrap();
    let r = parse_range("r=10,13").unwrap();
    let t1 = parse_template("x^3 + x*y^{r} + y^{k}", &vars(), &[r.clone(), a.clone()], &[7, 0, 5])
        .unwrap();
    let t2 = parse_template("x^3 + x*y^{r} + y^{k}", &vars(), &[a, r], &[5, 7, 0]).unwrap();
    let serial = ScanOptions {
        threads: 1,
        ..Default::default()
    };
    let parallel = ScanOptions {
        threads: 6,
        ..Default::default()
    };
    let rows = scan_family(&t1, &serial).unwrap();
    assert_eq!(rows, scan_family(&t2, &parallel).unwrap());
    assert_eq!(rows, scan_family(&t1, &parallel).unwrap());
    for row in &rows {
        assert!(row.tau_ext >= row.tau, "{row:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn extended_algebra_is_never_smaller(s in 4i64..14, k in 2i64..14, pi in 0..3usize) {
        let p = [5u64, 7, 11][pi];
        let t = parse_template(
            "x^3 + y^{s} + x*y^{k}",
            &vars(),
            &[("s".into(), vec![s]), ("k".into(), vec![k])],
            &[0, p],
        )
        .unwrap();
        for row in scan_family(&t, &ScanOptions::default()).unwrap() {
            if let (Some(a), Some(e)) = (row.tau, row.tau_ext) {
                prop_assert!(e >= a);
            }
        }
    }

    #[test]
    fn predictions_are_pure_arithmetic(s in 4i64..30, k in 2i64..30, pi in 0..4usize) {
        let p = [5u64, 7, 11, 13][pi];
        let ranges = [("s".to_string(), vec![s]), ("k".to_string(), vec![k])];
        let hit = !predict_jumps(FamilyKind::X3YsXyk, p, &ranges).unwrap().is_empty();
        let cone = k < s && 3 * k > 2 * s;
        prop_assert_eq!(hit, cone && (3 * k - 2 * s) % p as i64 == 0);
    }
}
