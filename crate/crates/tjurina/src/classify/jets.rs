//! Normal forms of low jets: binary cubics and quartics, ternary cubics.

use super::ClassifyError;
use crate::field::{roots, squarefree_decomposition, Field, Scalar, UPoly};
use crate::series::{Monomial, Ring, SeriesPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetTag {
    /// `x^3`
    Cube,
    /// `x^2 y`
    DoubleLine,
    /// `x^2 y + x y^2`
    ThreeLines,
    /// `x^4`
    Fourth,
    /// `x^3 y`
    TripleLine,
    /// `x^2 y^2`
    TwoDoubleLines,
    /// `x^2 y (x + y)`
    DoubleAndTwo,
    /// `x y (x + y)(x + a y)`
    FourLines,
}

impl JetTag {
    pub fn canonical_text(&self) -> &'static str {
        match self {
            JetTag::Cube => "x^3",
            JetTag::DoubleLine => "x^2*y",
            JetTag::ThreeLines => "x^2*y + x*y^2",
            JetTag::Fourth => "x^4",
            JetTag::TripleLine => "x^3*y",
            JetTag::TwoDoubleLines => "x^2*y^2",
            JetTag::DoubleAndTwo => "x^2*y*(x+y)",
            JetTag::FourLines => "x*y*(x+y)*(x+a*y)",
        }
    }
}

/// A linear substitution `(x, y) -> N (x, y)` followed by a constant factor.
#[derive(Clone, Debug)]
pub struct LinearChange {
    pub field: Field,
    /// `x_i -> sum_j matrix[i][j] x_j`.
    pub matrix: Vec<Vec<Scalar>>,
    pub scale: Scalar,
}

impl LinearChange {
    pub fn identity(field: &Field, n: usize) -> Self {
        LinearChange {
            field: field.clone(),
            matrix: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { field.one() } else { field.zero() })
                        .collect()
                })
                .collect(),
            scale: field.one(),
        }
    }

    /// `scale * f(N x)` modulo `m^(n+1)`, over the field of the change.
    pub fn apply(&self, f: &SeriesPoly, n: u32) -> Result<SeriesPoly, ClassifyError> {
        let ring = f.ring().with_field(self.field.clone());
        let g = f.embed(&ring)?;
        let phi: Vec<SeriesPoly> = self
            .matrix
            .iter()
            .map(|row| {
                let mut s = SeriesPoly::zero(&ring);
                for (j, c) in row.iter().enumerate() {
                    s.add_term(Monomial::var(row.len(), j), c.clone());
                }
                s
            })
            .collect();
        Ok(g.subst(&phi, n)?.scale(&self.scale))
    }

    pub fn describe(&self, vars: &[String]) -> String {
        let f = &self.field;
        let rows: Vec<String> = self
            .matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut s = SeriesPoly::zero(&Ring::new(f.clone(), vars));
                for (j, c) in row.iter().enumerate() {
                    s.add_term(Monomial::var(row.len(), j), c.clone());
                }
                format!("{} -> {}", vars[i], s)
            })
            .collect();
        format!("{}; multiply by {}", rows.join(", "), f.format(&self.scale))
    }
}

#[derive(Clone, Debug)]
pub struct JetType2 {
    pub tag: JetTag,
    pub change: LinearChange,
    /// Cross-ratio parameter of four distinct lines, and `b = 2 - 4a`.
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
}

impl JetType2 {
    /// The canonical jet over the field of the substitution.
    pub fn canonical(&self, ring: &Ring) -> SeriesPoly {
        let f = &self.change.field;
        let r = ring.with_field(f.clone());
        let t = |c: Scalar, e: [u32; 2]| (Monomial::new(e.to_vec()), c);
        let one = f.one();
        let terms = match self.tag {
            JetTag::Cube => vec![t(one, [3, 0])],
            JetTag::DoubleLine => vec![t(one, [2, 1])],
            JetTag::ThreeLines => vec![t(one.clone(), [2, 1]), t(one, [1, 2])],
            JetTag::Fourth => vec![t(one, [4, 0])],
            JetTag::TripleLine => vec![t(one, [3, 1])],
            JetTag::TwoDoubleLines => vec![t(one, [2, 2])],
            JetTag::DoubleAndTwo => vec![t(one.clone(), [3, 1]), t(one, [2, 2])],
            JetTag::FourLines => {
                let a = self.a.clone().unwrap();
                vec![
                    t(one.clone(), [3, 1]),
                    t(f.add(&one, &a), [2, 2]),
                    t(a, [1, 3]),
                ]
            }
        };
        SeriesPoly::from_terms(&r, terms)
    }
}

/// Linear factors `p x + q y` of a binary form with multiplicities, highest
/// multiplicity first, over a field where the form splits.
fn linear_factors(
    form: &[Scalar],
    field: &Field,
    seed: u64,
) -> Result<(Field, Vec<([Scalar; 2], u32)>), ClassifyError> {
    let d = form.len() - 1;
    // F(t, 1) = sum c_i t^(d-i)
    let coeffs: Vec<Scalar> = form.iter().rev().cloned().collect();
    let poly = UPoly::new(field, coeffs);
    let deg = poly.degree().unwrap_or(0);
    let at_infinity = (d - deg) as u32;
    let (ext, rts) = if deg == 0 {
        (field.clone(), Vec::new())
    } else {
        roots(field, &poly, seed)?
            .ok_or_else(|| ClassifyError::RootsUnavailable(poly.format(field, "t")))?
    };
    let mut out: Vec<([Scalar; 2], u32)> = rts
        .into_iter()
        .map(|(t, m)| ([ext.one(), ext.neg(&t)], m))
        .collect();
    if at_infinity > 0 {
        out.push(([ext.zero(), ext.one()], at_infinity));
    }
    out.sort_by(|a, b| b.1.cmp(&a.1));
    Ok((ext, out))
}

/// Multiplicities of the linear factors over an algebraic closure, sorted
/// descending. Needs no roots.
pub fn multiplicity_type(form: &[Scalar], field: &Field) -> Vec<u32> {
    let d = form.len() - 1;
    let coeffs: Vec<Scalar> = form.iter().rev().cloned().collect();
    let poly = UPoly::new(field, coeffs);
    let deg = poly.degree().unwrap_or(0);
    let mut out = Vec::new();
    if deg > 0 {
        for (g, m) in squarefree_decomposition(field, &poly) {
            for _ in 0..g.degree().unwrap() {
                out.push(m);
            }
        }
    }
    if d > deg {
        out.push((d - deg) as u32);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Coefficients of `x^(d-i) y^i`.
pub fn binary_coeffs(g: &SeriesPoly, d: u32) -> Vec<Scalar> {
    (0..=d)
        .map(|i| g.coeff(&Monomial::new(vec![d - i, i])))
        .collect()
}

fn inverse2(f: &Field, m: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    let det = f.sub(&f.mul(&m[0][0], &m[1][1]), &f.mul(&m[0][1], &m[1][0]));
    let di = f.inv(&det).expect("independent linear forms");
    [
        [f.mul(&m[1][1], &di), f.neg(&f.mul(&m[0][1], &di))],
        [f.neg(&f.mul(&m[1][0], &di)), f.mul(&m[0][0], &di)],
    ]
}

/// Cross-ratio `a` of four lines taken in order, for `xy(x+y)(x+ay)`.
fn cross_ratio(k: &Field, l: &[[Scalar; 2]]) -> Result<Scalar, ClassifyError> {
    let inv = inverse2(k, &[l[0].clone(), l[1].clone()]);
    let to_new = |v: &[Scalar; 2]| -> [Scalar; 2] {
        [
            k.add(&k.mul(&v[0], &inv[0][0]), &k.mul(&v[1], &inv[1][0])),
            k.add(&k.mul(&v[0], &inv[0][1]), &k.mul(&v[1], &inv[1][1])),
        ]
    };
    let (l3, l4) = (to_new(&l[2]), to_new(&l[3]));
    Ok(k.div(&k.mul(&l4[1], &l3[0]), &k.mul(&l4[0], &l3[1]))?)
}

/// Order of four distinct lines whose `b = 2 - 4a` is the smallest nonzero
/// value reachable (zero only when nothing else is).
fn best_four_line_order(
    k: &Field,
    lines: Vec<([Scalar; 2], u32)>,
) -> Result<Vec<([Scalar; 2], u32)>, ClassifyError> {
    let mut best: Option<((bool, Scalar), Vec<([Scalar; 2], u32)>)> = None;
    for perm in permutations4() {
        let ordered: Vec<([Scalar; 2], u32)> = perm.iter().map(|&i| lines[i].clone()).collect();
        let forms: Vec<[Scalar; 2]> = ordered.iter().map(|l| l.0.clone()).collect();
        let a = cross_ratio(k, &forms)?;
        let b = k.sub(&k.from_int(2), &k.mul(&k.from_int(4), &a));
        let key = (k.is_zero(&b), b);
        if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
            best = Some((key, ordered));
        }
    }
    Ok(best.unwrap().1)
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && a != c && b != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

/// Type of the degree-`d` part of a series in two variables and a linear
/// change bringing it to the canonical form exactly.
pub fn jet_type_2(f: &SeriesPoly, d: u32, seed: u64) -> Result<JetType2, ClassifyError> {
    if f.ring().nvars() != 2 {
        return Err(ClassifyError::WrongDegree(format!(
            "{} variables",
            f.ring().nvars()
        )));
    }
    if d != 3 && d != 4 {
        return Err(ClassifyError::WrongDegree(format!("degree {d}")));
    }
    let g = f.homogeneous_part(d);
    if g.is_zero() {
        return Err(ClassifyError::DegenerateForm);
    }
    let base = f.field();
    let (k, mut lines) = linear_factors(&binary_coeffs(&g, d), base, seed)?;
    let mults: Vec<u32> = lines.iter().map(|l| l.1).collect();
    if mults == [1, 1, 1, 1] {
        lines = best_four_line_order(&k, lines)?;
    }
    // first new coordinate: the line of highest multiplicity; second: the next
    // line, or an independent axis
    let l1 = lines[0].0.clone();
    let l2 = match lines.get(1) {
        Some(l) => l.0.clone(),
        None if !k.is_zero(&l1[0]) => [k.zero(), k.one()],
        None => [k.one(), k.zero()],
    };
    let m = [l1, l2];
    let inv = inverse2(&k, &m);
    let to_new = |l: &[Scalar; 2]| -> [Scalar; 2] {
        [
            k.add(&k.mul(&l[0], &inv[0][0]), &k.mul(&l[1], &inv[1][0])),
            k.add(&k.mul(&l[0], &inv[0][1]), &k.mul(&l[1], &inv[1][1])),
        ]
    };
    let mut change = LinearChange {
        field: k.clone(),
        matrix: inv.iter().map(|r| r.to_vec()).collect(),
        scale: k.one(),
    };
    let h = change.apply(&g, d)?;
    let c = |i: u32, j: u32| h.coeff(&Monomial::new(vec![i, j]));
    let one = k.one();
    // diagonal scaling (alpha, beta) and the constant factor
    let (tag, alpha, beta, lead, a) = match (d, mults.as_slice()) {
        (3, [3]) => (JetTag::Cube, one.clone(), one.clone(), c(3, 0), None),
        (3, [2, 1]) => (JetTag::DoubleLine, one.clone(), one.clone(), c(2, 1), None),
        (3, [1, 1, 1]) => (JetTag::ThreeLines, c(1, 2), c(2, 1), c(2, 1), None),
        (4, [4]) => (JetTag::Fourth, one.clone(), one.clone(), c(4, 0), None),
        (4, [3, 1]) => (JetTag::TripleLine, one.clone(), one.clone(), c(3, 1), None),
        (4, [2, 2]) => (
            JetTag::TwoDoubleLines,
            one.clone(),
            one.clone(),
            c(2, 2),
            None,
        ),
        (4, [2, 1, 1]) => (JetTag::DoubleAndTwo, c(2, 2), c(3, 1), c(3, 1), None),
        (4, [1, 1, 1, 1]) => {
            let l3 = to_new(&lines[2].0);
            let l4 = to_new(&lines[3].0);
            let alpha = k.inv(&l3[0])?;
            let beta = k.inv(&l3[1])?;
            let a = k.div(&k.mul(&l4[1], &l3[0]), &k.mul(&l4[0], &l3[1]))?;
            (JetTag::FourLines, alpha, beta, c(3, 1), Some(a))
        }
        _ => unreachable!("multiplicities {mults:?} in degree {d}"),
    };
    // coefficient of the leading canonical monomial after scaling
    let (e0, e1) = match tag {
        JetTag::Cube => (3, 0),
        JetTag::DoubleLine | JetTag::ThreeLines => (2, 1),
        JetTag::Fourth => (4, 0),
        JetTag::TwoDoubleLines => (2, 2),
        _ => (3, 1),
    };
    let scaled = k.mul(&lead, &k.mul(&k.pow_u64(&alpha, e0), &k.pow_u64(&beta, e1)));
    change.scale = k.inv(&scaled)?;
    for row in change.matrix.iter_mut() {
        row[0] = k.mul(&row[0], &alpha);
        row[1] = k.mul(&row[1], &beta);
    }
    let b = a
        .as_ref()
        .map(|a| k.sub(&k.from_int(2), &k.mul(&k.from_int(4), a)));
    Ok(JetType2 { tag, change, a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape3 {
    /// `x^3 + y^3 + z^3 + a xyz`
    ThreeCubes,
    /// `x^3 + y^3 + xyz`
    TwoCubes,
    /// `x^3 + xyz`
    OneCube,
    /// `xyz`
    Product,
    /// `x^3 + y z^2`
    CubeYz2,
    /// `x^2 z + y z^2`
    X2zYz2,
    /// `x^3 + x z^2`
    CubeXz2,
    /// `x^2 y`
    X2y,
    /// `x^3`
    X3,
}

const SHAPES: &[(Shape3, &[[u32; 3]])] = &[
    (
        Shape3::ThreeCubes,
        &[[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1]],
    ),
    (Shape3::ThreeCubes, &[[3, 0, 0], [0, 3, 0], [0, 0, 3]]),
    (Shape3::TwoCubes, &[[3, 0, 0], [0, 3, 0], [1, 1, 1]]),
    (Shape3::OneCube, &[[3, 0, 0], [1, 1, 1]]),
    (Shape3::Product, &[[1, 1, 1]]),
    (Shape3::CubeYz2, &[[3, 0, 0], [0, 1, 2]]),
    (Shape3::X2zYz2, &[[2, 0, 1], [0, 1, 2]]),
    (Shape3::CubeXz2, &[[3, 0, 0], [1, 0, 2]]),
    (Shape3::X2y, &[[2, 1, 0]]),
    (Shape3::X3, &[[3, 0, 0]]),
];

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

#[derive(Clone, Debug)]
pub struct Jet3 {
    pub shape: Shape3,
    /// Old variable `i` becomes variable `perm[i]`.
    pub perm: [usize; 3],
    /// `a^3` for the first shape, with `a^3 + 27 != 0`.
    pub a_cubed: Option<Scalar>,
}

/// Matches a ternary cubic against the canonical list up to permuting and
/// rescaling variables.
pub fn jet_match_3(f3: &SeriesPoly) -> Result<Jet3, ClassifyError> {
    let ring = f3.ring();
    if ring.nvars() != 3 {
        return Err(ClassifyError::WrongDegree(format!(
            "{} variables",
            ring.nvars()
        )));
    }
    if f3.is_zero() || f3.support().any(|m| m.degree() != 3) {
        return Err(ClassifyError::WrongDegree(
            "not a nonzero cubic form".into(),
        ));
    }
    let k = f3.field();
    for perm in PERMS {
        let g = f3.rename(ring, &perm);
        let mut supp: Vec<Vec<u32>> = g.support().map(|m| m.exps().to_vec()).collect();
        supp.sort();
        for &(shape, pattern) in SHAPES {
            let mut pat: Vec<Vec<u32>> = pattern.iter().map(|e| e.to_vec()).collect();
            pat.sort();
            if pat != supp {
                continue;
            }
            let a_cubed = (shape == Shape3::ThreeCubes).then(|| {
                let c = |e: [u32; 3]| g.coeff(&Monomial::new(e.to_vec()));
                let prod = k.mul(&c([3, 0, 0]), &k.mul(&c([0, 3, 0]), &c([0, 0, 3])));
                k.div(&k.pow_u64(&c([1, 1, 1]), 3), &prod).unwrap()
            });
            if let Some(a3) = &a_cubed {
                if k.is_zero(&k.add(a3, &k.from_int(27))) {
                    return Err(ClassifyError::NoMatch(
                        "x^3+y^3+z^3+a*xyz with a^3 = -27".into(),
                    ));
                }
            }
            return Ok(Jet3 {
                shape,
                perm,
                a_cubed,
            });
        }
    }
    Err(ClassifyError::NoMatch(format!("cubic {f3}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, n: usize, terms: &[(i64, &[u32])]) -> SeriesPoly {
        SeriesPoly::from_ints(
            &Ring::standard(Field::from_characteristic(p).unwrap(), n),
            terms,
        )
    }

    fn check(f: &SeriesPoly, d: u32) -> JetType2 {
        let t = jet_type_2(f, d, 1).unwrap();
        let got = t.change.apply(&f.homogeneous_part(d), d).unwrap().exact();
        assert_eq!(got, t.canonical(f.ring()), "{:?}", t.tag);
        t
    }

    #[test]
    fn cubic_types() {
        // (x+y)^3
        let f = poly(
            0,
            2,
            &[(1, &[3, 0]), (3, &[2, 1]), (3, &[1, 2]), (1, &[0, 3])],
        );
        assert_eq!(check(&f, 3).tag, JetTag::Cube);
        // x^2 (x+y)
        let f = poly(7, 2, &[(1, &[3, 0]), (1, &[2, 1])]);
        assert_eq!(check(&f, 3).tag, JetTag::DoubleLine);
        let f = poly(7, 2, &[(3, &[2, 1]), (5, &[1, 2]), (1, &[0, 3])]);
        assert_eq!(check(&f, 3).tag, JetTag::ThreeLines);
        // x^3 + y^3 splits only over F_49 when p = 5
        let f = poly(5, 2, &[(1, &[3, 0]), (1, &[0, 3])]);
        assert_eq!(check(&f, 3).tag, JetTag::ThreeLines);
    }

    #[test]
    fn quartic_types() {
        let k = Field::prime(7).unwrap();
        // xy(x+y)(x+2y) = x^3y + 3x^2y^2 + 2xy^3
        let f = poly(7, 2, &[(1, &[3, 1]), (3, &[2, 2]), (2, &[1, 3])]);
        let t = check(&f, 4);
        assert_eq!(t.tag, JetTag::FourLines);
        let b = t.b.unwrap();
        assert_eq!(b, k.one());
        let f = poly(7, 2, &[(1, &[4, 0]), (1, &[0, 4])]);
        assert_eq!(check(&f, 4).tag, JetTag::FourLines);
        let f = poly(7, 2, &[(1, &[3, 1]), (1, &[2, 2])]);
        assert_eq!(check(&f, 4).tag, JetTag::DoubleAndTwo);
        let f = poly(7, 2, &[(1, &[2, 2]), (2, &[1, 3]), (1, &[0, 4])]);
        assert_eq!(check(&f, 4).tag, JetTag::TwoDoubleLines);
        let f = poly(7, 2, &[(1, &[1, 3])]);
        assert_eq!(check(&f, 4).tag, JetTag::TripleLine);
        let f = poly(7, 2, &[(1, &[0, 4])]);
        assert_eq!(check(&f, 4).tag, JetTag::Fourth);
    }

    #[test]
    fn errors() {
        let f = poly(7, 2, &[(1, &[2, 0])]);
        assert!(matches!(
            jet_type_2(&f, 3, 1),
            Err(ClassifyError::DegenerateForm)
        ));
        assert!(matches!(
            jet_type_2(&f, 5, 1),
            Err(ClassifyError::WrongDegree(_))
        ));
    }

    #[test]
    fn ternary_cubics() {
        let f = poly(
            5,
            3,
            &[
                (1, &[3, 0, 0]),
                (1, &[0, 3, 0]),
                (1, &[0, 0, 3]),
                (1, &[1, 1, 1]),
            ],
        );
        let j = jet_match_3(&f).unwrap();
        assert_eq!(j.shape, Shape3::ThreeCubes);
        let k = f.field();
        assert!(!k.is_zero(&k.add(&j.a_cubed.unwrap(), &k.from_int(27))));

        let f = poly(5, 3, &[(1, &[0, 2, 1]), (1, &[3, 0, 0])]);
        let j = jet_match_3(&f).unwrap();
        assert_eq!(j.shape, Shape3::CubeYz2);
        let g = f.rename(f.ring(), &j.perm);
        assert_eq!(g.to_text(), "x^3 + y*z^2");

        let f = poly(5, 3, &[(1, &[3, 0, 0]), (1, &[2, 1, 0]), (1, &[0, 3, 0])]);
        assert!(matches!(jet_match_3(&f), Err(ClassifyError::NoMatch(_))));
    }
}
