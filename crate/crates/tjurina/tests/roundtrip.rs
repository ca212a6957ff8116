//! Every table row, instantiated at its smallest admissible parameters, is
//! recognised again by the classifier.

use tjurina::classify::{
    check_table_conditions, classify, ClassificationVerdict, Params, TableRow, ROWS,
};
use tjurina::field::{Field, FieldElement};

/// Integer parameter vectors ordered by their sum, then lexicographically.
fn vectors(n: usize, max_sum: i64) -> Vec<Vec<i64>> {
    fn go(n: usize, sum: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            if sum == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for v in 1..=sum {
            acc.push(v);
            go(n - 1, sum - v, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for s in n as i64..=max_sum {
        go(n, s, &mut Vec::new(), &mut out);
    }
    out
}

fn smallest_admissible(row: &TableRow, field: &Field, p: u64, count: usize) -> Vec<Params> {
    let mut out = Vec::new();
    let lambdas: Vec<Option<FieldElement>> = if row.has_lambda() {
        (1..p as i64)
            .map(|l| Some(FieldElement::from_int(field, l)))
            .collect()
    } else {
        vec![None]
    };
    for v in vectors(row.params.len(), 48) {
        for lam in &lambdas {
            let mut params = Params::new(row.params.iter().copied().zip(v.iter().copied()));
            if let Some(l) = lam {
                params = params.with_lambda(l.clone());
            }
            if check_table_conditions(row.symbol, &params, p)
                .unwrap()
                .is_unimodal()
            {
                out.push(params);
                if out.len() == count {
                    return out;
                }
                break;
            }
        }
    }
    out
}

#[test]
fn rows_round_trip() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for p in [5u64, 7, 11] {
        let field = Field::prime(p).unwrap();
        for row in ROWS {
            for params in smallest_admissible(row, &field, p, 2) {
                let f = row.normal_form(&params, &field).unwrap();
                let verdict = classify(&f, 3).unwrap().verdict;
                checked += 1;
                let ok = matches!(&verdict, ClassificationVerdict::Unimodal { symbol, .. } if symbol == row.symbol);
                if !ok {
                    failures.push(format!(
                        "p={p} {} ({}) {f}: {verdict}",
                        row.symbol,
                        params.describe()
                    ));
                }
            }
        }
    }
    assert!(checked > 250, "only {checked} rows instantiated");
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
