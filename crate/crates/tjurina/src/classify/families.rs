//! Family analysis for corank 2 and 3: jet normalization, reading of the
//! surviving exponents, candidate normal forms and the table verdict.

use num_rational::Rational64;

use super::jets::{jet_match_3, jet_type_2, JetTag, Shape3};
use super::reduce::{modulus, reduce_jet_with, reduce_tail};
use super::table::{check_table_conditions, divides, lookup, Params, TableCheck, INFINITY};
use super::{invariants, ClassificationVerdict, ClassifyError, ClassifyOptions};
use crate::acgrading::AcError;
use crate::field::{nth_root, FieldElement};
use crate::newton::CPolytope;
use crate::series::{Monomial, Ring, SeriesPoly};

type Verdict = ClassificationVerdict;

#[derive(Clone, Debug)]
struct Cand {
    symbol: &'static str,
    ints: Vec<(&'static str, i64)>,
    lambda: Option<FieldElement>,
}

fn cand(symbol: &'static str, ints: &[(&'static str, i64)]) -> Cand {
    Cand {
        symbol,
        ints: ints.to_vec(),
        lambda: None,
    }
}

/// Candidates in order of preference, read off `form`.
struct Reading {
    form: SeriesPoly,
    cands: Vec<Cand>,
    /// The tail could not be reduced completely; only a rejection is final.
    partial: Option<String>,
}

enum Step {
    Done(Verdict),
    Read(Reading),
}

fn done_m2(reason: impl Into<String>) -> Step {
    Step::Done(Verdict::ModalityAtLeast2 {
        reason: reason.into(),
        witness: None,
    })
}

fn undetermined(reason: impl Into<String>) -> Step {
    Step::Done(Verdict::Undetermined {
        reason: reason.into(),
    })
}

fn mono(e: &[u32]) -> Monomial {
    Monomial::new(e.to_vec())
}

fn has(f: &SeriesPoly, e: &[u32]) -> bool {
    !f.field().is_zero(&f.coeff(&mono(e)))
}

/// Smallest value of `pick` over the support, `INFINITY` if it never applies.
fn min_exp(f: &SeriesPoly, pick: impl Fn(&[u32]) -> Option<u32>) -> i64 {
    f.support()
        .filter_map(|m| pick(m.exps()))
        .map(i64::from)
        .min()
        .unwrap_or(INFINITY)
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn fin(v: i64) -> bool {
    v != INFINITY
}

/// Polynomial in the first two variables obtained by setting the others to 0.
fn restrict2(f: &SeriesPoly) -> SeriesPoly {
    let r2 = Ring::new(f.field().clone(), &f.ring().vars()[..2]);
    SeriesPoly::from_terms(
        &r2,
        f.terms()
            .filter(|(m, _)| m.exps()[2..].iter().all(|&e| e == 0))
            .map(|(m, c)| (mono(&m.exps()[..2]), c.clone())),
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cubic {
    /// `x^3 + ...` in two variables.
    E,
    /// `x^3 y + ...`.
    Z,
    /// The `x, y` part of `x^3 + y z^2 + ...`.
    Q,
}

pub(crate) struct Context<'a> {
    g: SeriesPoly,
    k: u32,
    cap: u32,
    p: u64,
    opts: &'a ClassifyOptions,
    log: &'a mut Vec<String>,
    tau: (Option<usize>, Option<usize>),
    /// Read exponents off the jet-reduced form, skipping the graded reduction.
    raw: bool,
}

impl<'a> Context<'a> {
    pub(crate) fn new(
        g: &SeriesPoly,
        k: u32,
        cap: u32,
        opts: &'a ClassifyOptions,
        log: &'a mut Vec<String>,
    ) -> Result<Self, ClassifyError> {
        Ok(Context {
            g: g.clone(),
            k,
            cap,
            p: g.field().characteristic(),
            opts,
            log,
            tau: invariants(g, cap),
            raw: false,
        })
    }

    pub(crate) fn run(&mut self) -> Result<Verdict, ClassifyError> {
        let step = if self.g.ring().nvars() == 2 {
            self.corank2()?
        } else {
            self.corank3()?
        };
        match step {
            Step::Done(v) => Ok(v),
            Step::Read(r) => self.settle(r),
        }
    }

    fn corank2(&mut self) -> Result<Step, ClassifyError> {
        let ord = self.g.ord().unwrap_or(self.k + 1);
        if ord >= 5 {
            return Ok(done_m2(format!("order {ord} in two variables")));
        }
        let seed = self.opts.seed;
        let jt = jet_type_2(&self.g, ord, seed)?;
        let h = jt.change.apply(&self.g, self.k)?.exact();
        self.log.push(format!(
            "{}-jet normalized to {}: {}",
            ord,
            jt.tag.canonical_text(),
            jt.change.describe(self.g.ring().vars())
        ));
        match jt.tag {
            JetTag::ThreeLines => Ok(Step::Done(Verdict::Simple {
                symbol: "D_4".into(),
            })),
            JetTag::DoubleLine => {
                let h = self.jet_reduce(&h, 3, |_| true)?;
                let s = min_exp(&h, |e| (e[0] == 0).then_some(e[1]));
                Ok(if fin(s) {
                    Step::Done(Verdict::Simple {
                        symbol: format!("D_{}", s + 1),
                    })
                } else {
                    undetermined("x^2 y jet without a pure power of y below the determinacy bound")
                })
            }
            JetTag::Cube => self.cubic(&h, Cubic::E),
            JetTag::TripleLine => self.cubic(&h, Cubic::Z),
            JetTag::Fourth => self.w_family(&h),
            JetTag::TwoDoubleLines => {
                let h =
                    self.jet_reduce(&h, 4, |m| m.exps().iter().filter(|&&e| e > 0).count() == 1)?;
                let r = min_exp(&h, |e| (e[1] == 0).then_some(e[0]));
                let s = min_exp(&h, |e| (e[0] == 0).then_some(e[1]));
                if !fin(r) || !fin(s) {
                    return Ok(undetermined("x^2 y^2 jet without both pure powers"));
                }
                let (a, b) = (r.min(s), r.max(s));
                Ok(self.read(h, vec![cand("T_{r,s,2}", &[("r", a), ("s", b)])]))
            }
            JetTag::DoubleAndTwo => {
                let h = self.jet_reduce(&h, 4, |m| m.exps()[0] == 0)?;
                let s = min_exp(&h, |e| (e[0] == 0).then_some(e[1]));
                if !fin(s) {
                    return Ok(undetermined("x^2 y (x + y) jet without a pure power of y"));
                }
                Ok(self.read(h, vec![cand("T_{4,s,2}", &[("s", s)])]))
            }
            JetTag::FourLines => {
                let b = jt.b.clone().unwrap();
                let lam = FieldElement::new(&jt.change.field, b);
                let mut c = cand("T_{4,4,2}", &[]);
                c.lambda = Some(lam);
                Ok(self.read(h, vec![c]))
            }
        }
    }

    fn corank3(&mut self) -> Result<Step, ClassifyError> {
        let ord = self.g.ord().unwrap_or(self.k + 1);
        if ord >= 4 {
            return Ok(done_m2(format!("order {ord} in three variables")));
        }
        let j = match jet_match_3(&self.g.homogeneous_part(3)) {
            Ok(j) => j,
            Err(ClassifyError::NoMatch(s)) => {
                return Ok(undetermined(format!("3-jet not recognized: {s}")))
            }
            Err(e) => return Err(e),
        };
        let h = self.g.rename(self.g.ring(), &j.perm);
        self.log.push(format!(
            "3-jet matched {:?} after renaming to {}",
            j.shape,
            h.homogeneous_part(3)
        ));
        let pure = |m: &Monomial| m.exps().iter().filter(|&&e| e > 0).count() == 1;
        match j.shape {
            Shape3::ThreeCubes => Ok(self.read(h, vec![cand("T_{3,3,3}", &[])])),
            Shape3::TwoCubes | Shape3::OneCube | Shape3::Product => {
                let h = self.jet_reduce(&h, 3, pure)?;
                let mut v: Vec<i64> = (0..3)
                    .map(|i| {
                        min_exp(&h, |e| {
                            (e.iter().enumerate().all(|(a, &x)| a == i || x == 0)).then_some(e[i])
                        })
                    })
                    .collect();
                if v.iter().any(|&x| !fin(x)) {
                    return Ok(undetermined("xyz jet without all three pure powers"));
                }
                v.sort();
                Ok(self.read(
                    h,
                    vec![cand("T_{r,s,t}", &[("r", v[0]), ("s", v[1]), ("t", v[2])])],
                ))
            }
            Shape3::CubeYz2 => self.q_family(&h),
            Shape3::X2zYz2 => self.s_family(&h),
            Shape3::CubeXz2 => self.u_family(&h),
            Shape3::X2y | Shape3::X3 => Ok(done_m2(format!("3-jet of type {:?}", j.shape))),
        }
    }

    fn jet_reduce(
        &mut self,
        h: &SeriesPoly,
        d: u32,
        late: impl Fn(&Monomial) -> bool,
    ) -> Result<SeriesPoly, ClassifyError> {
        let r = reduce_jet_with(h, d, self.k, late)?;
        self.log.push(format!(
            "tail reduced along the tangent image of the {d}-jet: {r}"
        ));
        Ok(r)
    }

    fn read(&self, form: SeriesPoly, cands: Vec<Cand>) -> Step {
        Step::Read(Reading {
            form,
            cands,
            partial: None,
        })
    }

    /// Tail reduction over `poly`; on failure the form is kept and the reading
    /// is marked partial.
    fn tail(
        &mut self,
        h: &SeriesPoly,
        poly: Result<CPolytope, crate::newton::NewtonError>,
    ) -> Result<(SeriesPoly, Option<String>), ClassifyError> {
        if self.raw {
            return Ok((h.clone(), None));
        }
        let poly = match poly {
            Ok(p) => p,
            Err(e) => return Ok((h.clone(), Some(format!("no C-polytope: {e}")))),
        };
        match reduce_tail(h, &poly, self.opts.tail_budget) {
            Ok(t) if t.complete => {
                self.log.push(format!(
                    "valuation-graded reduction with weights {:?}: {}",
                    poly.weights(),
                    t.form
                ));
                Ok((t.form, None))
            }
            Ok(t) => Ok((
                t.form,
                Some(format!("tail budget of {} levels exhausted", t.levels)),
            )),
            Err(ClassifyError::Graded(AcError::NotFinite { cap })) => Ok((
                h.clone(),
                Some(format!("regular basis not finite below valuation {cap}")),
            )),
            Err(e) => Err(e),
        }
    }

    fn cubic(&mut self, h: &SeriesPoly, mode: Cubic) -> Result<Step, ClassifyError> {
        let p = self.p as i64;
        let z = i64::from(mode == Cubic::Z);
        let d = 3 + z as u32;
        let h = self.jet_reduce(h, d, |m| m.exps()[0] <= 1)?;
        let r = min_exp(&h, |e| (e[0] == 1 && e[1] > z as u32).then_some(e[1]));
        let s = min_exp(&h, |e| (e[0] == 0).then_some(e[1]));
        if !fin(r) && !fin(s) {
            return Ok(undetermined("no tail term below the determinacy bound"));
        }
        if mode == Cubic::E {
            let simple = if s == 4 {
                Some("E_6")
            } else if r == 3 {
                Some("E_7")
            } else if s == 5 {
                Some("E_8")
            } else {
                None
            };
            if let Some(sym) = simple {
                return Ok(Step::Done(Verdict::Simple { symbol: sym.into() }));
            }
        }
        let xy = |l: i64| [1, l as u32];
        let yy = |l: i64| [0, l as u32];
        // support of the reduced form above a given exponent
        let above = |f: &SeriesPoly, from: i64, pure: bool| -> Vec<i64> {
            let mut v: Vec<i64> = f
                .support()
                .filter(|m| m.exps()[0] == u32::from(!pure) && i64::from(m.exps()[1]) > from)
                .map(|m| i64::from(m.exps()[1]))
                .collect();
            v.sort();
            v
        };
        let (case_i, case_ii, case_iii, r0);
        if mode == Cubic::Z {
            case_i = fin(s) && (!fin(r) || 2 * s + 1 < 3 * r);
            case_iii = fin(s) && fin(r) && 2 * s + 1 == 3 * r;
            r0 = fin(r) && (!fin(s) || 2 * s >= 4 * r);
            case_ii = !case_i && !case_iii && !r0;
        } else {
            case_i = fin(s) && (!fin(r) || 2 * s < 3 * r);
            case_iii = fin(s) && fin(r) && 2 * s == 3 * r;
            r0 = fin(r) && (!fin(s) || 2 * s >= 4 * r);
            case_ii = !case_i && !case_iii && !r0;
        }
        let sym = |e: &'static str, zz: &'static str| if mode == Cubic::Z { zz } else { e };
        // polytope of x^3 + xy^r (resp. x^3y + xy^r) alone
        let r0_extra = if !fin(r) {
            Vec::new()
        } else if mode == Cubic::Z {
            vec![
                vec![rat(3 * r - 1, r - 1), rat(0, 1)],
                vec![rat(0, 1), rat(3 * r - 1, 2)],
            ]
        } else {
            vec![vec![rat(0, 1), rat(3 * r, 2)]]
        };
        if case_ii && !self.raw {
            // y^s may still lie in the tangent image of the r-part
            let (form, partial) = self.tail(&h, CPolytope::expand_diagram(&h, &r0_extra))?;
            if partial.is_none() && form.support().all(|m| m.exps()[0] > 0) {
                let c = cand(sym("E_{r,0}", "Z_{r,0}"), &[("r", r)]);
                return Ok(self.read(form, vec![c]));
            }
        }
        if r0 {
            let (form, partial) = self.tail(&h, CPolytope::expand_diagram(&h, &r0_extra))?;
            let c = cand(sym("E_{r,0}", "Z_{r,0}"), &[("r", r)]);
            return Ok(Step::Read(Reading {
                form,
                cands: vec![c],
                partial,
            }));
        }
        if !fin(r) {
            return Ok(self.read(h, vec![cand(sym("E_{0,s}", "Z_{0,s}"), &[("s", s)])]));
        }
        // shifted criterion: p | 3k - 2s (x^3) or p | 3k - 2s - 1 (x^3 y)
        let crit = |k: i64| divides(p, 3 * k - 2 * s - z);
        if case_i {
            let poly = if mode == Cubic::Z {
                CPolytope::expand_diagram(&h, &[vec![rat(3 * s, s - 1), rat(0, 1)]])
            } else {
                CPolytope::newton_diagram(&h)
            };
            let (form, partial) = self.tail(&h, poly)?;
            let form = self.settle_cube(form, z as u32)?;
            let ls = above(&form, 0, false);
            let cands = match ls.first() {
                None => vec![cand(sym("E_{0,s}", "Z_{0,s}"), &[("s", s)])],
                Some(&k) if !crit(k) => {
                    vec![cand(sym("E^0_{r,s}", "Z^0_{r,s}"), &[("r", k), ("s", s)])]
                }
                Some(&k) => match ls[1..].iter().find(|&&l| !crit(l)) {
                    Some(&l) => vec![cand(
                        sym("E^0_{k,s,l}", "Z^0_{k,s,l}"),
                        &[("k", k), ("s", s), ("l", l)],
                    )],
                    None => vec![cand(sym("E^0'_{r,s}", "Z^0_{r,s}"), &[("r", k), ("s", s)])],
                },
            };
            let _ = xy;
            return Ok(Step::Read(Reading {
                form,
                cands,
                partial,
            }));
        }
        if case_ii {
            let poly = if mode == Cubic::Z {
                CPolytope::expand_diagram(&h, &[vec![rat(3 * r - 1, r - 1), rat(0, 1)]])
            } else {
                CPolytope::newton_diagram(&h)
            };
            let (form, partial) = self.tail(&h, poly)?;
            let form = self.settle_cube(form, z as u32)?;
            let ls = above(&form, r, false);
            let cands = if mode == Cubic::Z {
                match ls.iter().find(|&&l| !crit(l)) {
                    Some(&l) if crit(r) => {
                        vec![cand("Z^1_{k,s,l}", &[("k", r), ("s", s), ("l", l)])]
                    }
                    _ => vec![cand("Z^1_{r,s}", &[("r", r), ("s", s)])],
                }
            } else {
                let l = ls.iter().find(|&&l| !divides(p, l)).copied();
                match l {
                    Some(l) if divides(p, r) && divides(p, s) => {
                        vec![cand("E^1_{k,s,l}", &[("k", r), ("s", s), ("l", l)])]
                    }
                    _ if !crit(r) => vec![cand("E^1_{r,s}", &[("r", r), ("s", s)])],
                    _ => vec![cand("E^1'_{r,s}", &[("r", r), ("s", s)])],
                }
            };
            return Ok(Step::Read(Reading {
                form,
                cands,
                partial,
            }));
        }
        // 2s = 3r (resp. 2s + 1 = 3r)
        let t = if mode == Cubic::Z { (r - 1) / 2 } else { r / 2 };
        if p == 31 {
            return Ok(undetermined(format!(
                "weighted homogeneous initial part with 2s{}=3r at p = 31",
                if z == 1 { "+1" } else { "" }
            )));
        }
        let poly = if mode == Cubic::Z {
            CPolytope::expand_diagram(&h, &[vec![rat(3 * t + 1, t), rat(0, 1)]])
        } else {
            CPolytope::newton_diagram(&h)
        };
        let (form, partial) = self.tail(&h, poly)?;
        let form = self.settle_cube(form, z as u32)?;
        let ls = above(&form, s, true);
        let cands = match ls.iter().find(|&&l| !divides(p, l - s)) {
            Some(&l) => vec![cand(
                sym("E_{2t,3t,l}", "Z_{2t,3t,l}"),
                &[("t", t), ("l", l)],
            )],
            None => vec![cand(sym("E_{2t,3t,0}", "Z_{2t,3t,0}"), &[("t", t)])],
        };
        let _ = yy;
        Ok(Step::Read(Reading {
            form,
            cands,
            partial,
        }))
    }

    fn settle_cube(&mut self, form: SeriesPoly, z: u32) -> Result<SeriesPoly, ClassifyError> {
        let out = unit_cube(&form, z, self.k)?;
        if out != form {
            self.log.push(format!(
                "x -> x*u(y) with u^3 inverse to the x^3 coefficient: {out}"
            ));
        }
        Ok(out)
    }

    fn w_family(&mut self, h: &SeriesPoly) -> Result<Step, ClassifyError> {
        let h = self.jet_reduce(h, 4, |m| m.exps()[0] <= 2)?;
        let r = min_exp(&h, |e| (e[0] == 2).then_some(e[1]));
        let s = min_exp(&h, |e| (e[0] == 1).then_some(e[1]));
        let t = min_exp(&h, |e| (e[0] == 0).then_some(e[1]));
        if r >= 4 && s >= 6 && t >= 8 {
            return Ok(done_m2(format!(
                "x^4 jet with x^2y^{}, xy^{}, y^{} all beyond the unimodal range",
                show(r),
                show(s),
                show(t)
            )));
        }
        let nd = |h: &SeriesPoly| CPolytope::newton_diagram(h);
        // (polytope, base candidate, optional (monomial, candidate) pairs)
        type Extra = Vec<([u32; 2], &'static str)>;
        let (poly, base, extras): (_, Cand, Extra) = if t == 5 {
            (nd(&h), cand("W_12", &[]), vec![([2, 3], "W_12'")])
        } else if s == 4 {
            (
                CPolytope::expand_diagram(&h, &[vec![rat(0, 1), rat(16, 3)]]),
                cand("W_13", &[]),
                vec![([0, 6], "W_13'")],
            )
        } else if r == 3 && t == 6 {
            (nd(&h), cand("W_{1,0}", &[]), vec![([0, 7], "W_{1,0}'")])
        } else if r == 3 && fin(t) {
            (nd(&h), cand("W_{1,t}", &[("t", t)]), vec![])
        } else if t == 6 {
            (nd(&h), cand("W^#_{1,0}", &[]), vec![([2, 4], "W^#'_{1,0}")])
        } else if s == 5 {
            (
                CPolytope::expand_diagram(&h, &[vec![rat(0, 1), rat(20, 3)]]),
                cand("W_17", &[]),
                vec![([0, 7], "W_17'"), ([0, 8], "W_17''")],
            )
        } else if t == 7 {
            (
                nd(&h),
                cand("W_18", &[]),
                vec![([2, 4], "W_18'"), ([2, 5], "W_18''")],
            )
        } else {
            return Ok(undetermined(format!(
                "x^4 jet with x^2y^{}, xy^{}, y^{} outside the listed cases",
                show(r),
                show(s),
                show(t)
            )));
        };
        let (form, partial) = self.tail(&h, poly)?;
        Ok(Step::Read(Reading {
            cands: with_extras(&form, base, &extras),
            form,
            partial,
        }))
    }

    fn q_family(&mut self, h: &SeriesPoly) -> Result<Step, ClassifyError> {
        let h = self.jet_reduce(h, 3, |m| m.exps()[2] == 0 && m.exps()[0] <= 1)?;
        let h2 = restrict2(&h);
        let step = self.cubic(&h2, Cubic::Q)?;
        let Step::Read(reading) = step else {
            return Ok(step);
        };
        // the reduction in x, y alone may remove terms that z still sees, so
        // the readings of the unreduced form are kept as fallbacks
        self.raw = true;
        let raw = self.cubic(&h2, Cubic::Q);
        self.raw = false;
        let mut read: Vec<(Cand, &SeriesPoly)> = reading
            .cands
            .iter()
            .map(|c| (c.clone(), &reading.form))
            .collect();
        if let Ok(Step::Read(r)) = &raw {
            for c in &r.cands {
                if !read
                    .iter()
                    .any(|(d, _)| d.symbol == c.symbol && d.ints == c.ints)
                {
                    read.push((c.clone(), &h2));
                }
            }
        }
        // carry the reading over to the three-variable table
        let mut cands = Vec::new();
        for (c, form) in read {
            let row = lookup(c.symbol)?;
            let params = Params::new(c.ints.iter().copied());
            let lambda = if row.has_lambda() {
                self.lambda_from(form, row, &params)?
            } else {
                None
            };
            let q = ROW_MAP
                .iter()
                .find(|(e, _)| *e == c.symbol)
                .map(|(_, q)| *q)
                .ok_or_else(|| ClassifyError::UnknownSymbol(c.symbol.into()))?;
            cands.push(Cand {
                symbol: q,
                ints: c.ints,
                lambda,
            });
        }
        Ok(Step::Read(Reading {
            form: h,
            cands,
            partial: reading.partial,
        }))
    }

    fn s_family(&mut self, h: &SeriesPoly) -> Result<Step, ClassifyError> {
        let h = self.jet_reduce(h, 3, |m| m.exps()[2] == 0)?;
        let zf = |e: &[u32], a: u32| (e[2] == 0 && e[0] == a).then_some(e[1]);
        let r = min_exp(&h, |e| zf(e, 2));
        let s = min_exp(&h, |e| zf(e, 1));
        let t = min_exp(&h, |e| zf(e, 0));
        let c = |s: &'static str| cand(s, &[]);
        let cands = if t == 4 {
            vec![c("S_11"), c("S_11'")]
        } else if s == 3 {
            vec![c("S_12")]
        } else if r == 2 && s == 4 {
            vec![c("S^2_{1,0}")]
        } else if r == 2 && t == 5 {
            vec![c("S_{1,0}"), c("S^1_{1,0}")]
        } else if r == 2 && s >= 5 && fin(s) && s + 2 <= t && t <= 2 * s - 3 {
            vec![cand("S_{1,s,t}", &[("s", s), ("t", t)])]
        } else if r == 2 && s >= 5 && fin(s) && t > 2 * s - 3 {
            vec![cand("S_{1,s,0}", &[("s", s), ("t", t)])]
        } else if r == 2 && t >= 6 && fin(t) && (!fin(s) || t < s + 2) {
            vec![cand("S_{1,0,t}", &[("t", t), ("s", s)])]
        } else if r >= 3 && s == 4 {
            vec![c("S_16"), c("S_16'"), c("S_16''")]
        } else if r >= 3 && s >= 5 && t == 5 {
            vec![c("S^3_{1,0}"), c("S^4_{1,0}")]
        } else if r >= 3 && s >= 5 && t == 6 {
            vec![c("S_17"), c("S_17'"), c("S_17''")]
        } else if r >= 3 && s >= 5 && t >= 7 {
            return Ok(done_m2(format!(
                "x^2z + yz^2 jet with x^2y^{}, xy^{}, y^{} beyond the unimodal range",
                show(r),
                show(s),
                show(t)
            )));
        } else {
            return Ok(undetermined("x^2z + yz^2 jet outside the listed cases"));
        };
        Ok(self.read(h, cands))
    }

    fn u_family(&mut self, h: &SeriesPoly) -> Result<Step, ClassifyError> {
        let h = self.jet_reduce(h, 3, |m| m.exps()[2] <= 1)?;
        let r = min_exp(&h, |e| (e[2] == 0 && e[0] == 2).then_some(e[1]));
        let s = min_exp(&h, |e| (e[2] == 0 && e[0] == 1).then_some(e[1]));
        let t = min_exp(&h, |e| (e[2] == 1 && e[0] == 0).then_some(e[1]));
        let w = min_exp(&h, |e| (e[2] == 0 && e[0] == 0).then_some(e[1]));
        if s >= 4 && t >= 4 && w >= 6 {
            return Ok(done_m2(format!(
                "x^3 + xz^2 jet with xy^{}, y^{}z, y^{} beyond the unimodal range",
                show(s),
                show(t),
                show(w)
            )));
        }
        let _ = r;
        let c = |s: &'static str| cand(s, &[]);
        let mut cands = Vec::new();
        if w == 4 {
            cands.extend([c("U_12"), c("U_12'")]);
        }
        if s == 3 && t == 3 {
            cands.extend([c("U_{1,0}"), c("U_{1,0}'")]);
        } else if s == 3 && fin(t) {
            cands.push(cand("U_{1,t}", &[("t", t)]));
        }
        if t == 3 && s != 3 {
            cands.extend([c("U_*"), c("U_*'")]);
        }
        if w == 5 {
            cands.extend([c("U_16"), c("U_16'")]);
        }
        if cands.is_empty() {
            return Ok(undetermined("x^3 + xz^2 jet outside the listed cases"));
        }
        Ok(self.read(h, cands))
    }

    /// Modulus of the row's `λ` term on `form`; `None` if a fixed term is
    /// missing.
    fn lambda_from(
        &self,
        form: &SeriesPoly,
        row: &super::table::TableRow,
        params: &Params,
    ) -> Result<Option<FieldElement>, ClassifyError> {
        let k = form.field().clone();
        let mut fixed = Vec::new();
        let mut lam = None;
        for (is_l, e) in row.exponents(params)? {
            let c = form.coeff(&mono(&e));
            if is_l {
                lam = Some((e, c));
            } else {
                if k.is_zero(&c) {
                    return Ok(None);
                }
                fixed.push((e, c));
            }
        }
        let lam = lam.expect("row has a λ term");
        if k.is_zero(&lam.1) {
            return Ok(Some(FieldElement::new(&k, k.zero())));
        }
        match modulus(&k, &fixed, &lam, self.opts.seed) {
            Ok(m) => Ok(Some(match m.lambda {
                Some(l) => FieldElement::new(&k, l),
                None => {
                    let nr = nth_root(&k, &m.lambda_q, m.q, self.opts.seed)?;
                    FieldElement::new(&nr.field, nr.root)
                }
            })),
            // the term scales independently and can be made 1
            Err(ClassifyError::ObstructedScaling(_)) => Ok(Some(FieldElement::new(&k, k.one()))),
            Err(e) => Err(e),
        }
    }

    fn settle(&mut self, reading: Reading) -> Result<Verdict, ClassifyError> {
        let p = self.p;
        let mut tried = Vec::new();
        for (i, c) in reading.cands.iter().enumerate() {
            let row = lookup(c.symbol)?;
            let mut params = Params::new(c.ints.iter().copied());
            let field = if row.has_lambda() {
                let lam = match &c.lambda {
                    Some(l) => Some(l.clone()),
                    None => self.lambda_from(&reading.form, row, &params)?,
                };
                let Some(lam) = lam else {
                    tried.push(format!("{} (fixed term missing)", c.symbol));
                    continue;
                };
                let f = lam.field().clone();
                params = params.with_lambda(lam);
                f
            } else {
                reading.form.field().clone()
            };
            let check = check_table_conditions(c.symbol, &params, p)?;
            if i == 0 {
                if let TableCheck::Rejected {
                    reason, witness, ..
                } = &check
                {
                    return Ok(Verdict::ModalityAtLeast2 {
                        reason: format!("{} ({}): {}", c.symbol, params.describe(), reason),
                        witness: witness.clone(),
                    });
                }
            }
            if let Some(why) = &reading.partial {
                return Ok(Verdict::Undetermined {
                    reason: format!("{why}; candidate {} not confirmed", c.symbol),
                });
            }
            let nf = row.normal_form(&params, &field)?;
            let inv = invariants(&nf, self.cap);
            if inv != self.tau || inv.0.is_none() {
                tried.push(format!(
                    "{} (tau, tau_ext = {:?} vs {:?})",
                    c.symbol, inv, self.tau
                ));
                continue;
            }
            self.log
                .push(format!("normal form {nf} has matching tau and tau_ext"));
            return Ok(match check {
                TableCheck::Unimodal { evaluations } => Verdict::Unimodal {
                    symbol: c.symbol.to_string(),
                    params,
                    normal_form: nf.to_text(),
                    evaluations,
                },
                TableCheck::Rejected {
                    reason, witness, ..
                } => Verdict::ModalityAtLeast2 {
                    reason: format!("{} ({}): {}", c.symbol, params.describe(), reason),
                    witness,
                },
            });
        }
        Ok(Verdict::Undetermined {
            reason: format!(
                "no candidate normal form matches the invariants: {}",
                tried.join("; ")
            ),
        })
    }
}

/// Absorbs `x^3 y^z a(y)` into `x^3 y^z` by `x -> x a(y)^(-1/3)`, so that
/// the tail is carried by `x y^l` and `y^l` terms only.
fn unit_cube(form: &SeriesPoly, z: u32, k: u32) -> Result<SeriesPoly, ClassifyError> {
    let ring = form.ring();
    let field = form.field().clone();
    if form.support().any(|m| m.exps()[0] == 2 || m.exps()[0] > 3) {
        return Ok(form.clone());
    }
    let a = SeriesPoly::from_terms(
        ring,
        form.terms()
            .filter(|(m, _)| m.exps()[0] == 3)
            .map(|(m, c)| (mono(&[0, m.exps()[1] - z]), c.clone())),
    );
    let c0 = a.constant_term();
    if field.is_zero(&c0) || a.len() == 1 {
        return Ok(form.clone());
    }
    let a = a.scale(&field.inv(&c0)?);
    let one = SeriesPoly::one(ring);
    let third = field.inv(&field.from_int(3))?;
    let mut b = one.clone();
    let mut prec = 1;
    while prec < 2 * k {
        let err = one.sub(&a.mul_trunc(&b.pow_trunc(3, k), k)?);
        b = b.add(&b.mul_trunc(&err, k)?.scale(&third));
        prec *= 2;
    }
    let x = SeriesPoly::var(ring, 0);
    let phi = [x.mul_trunc(&b, k)?, SeriesPoly::var(ring, 1)];
    Ok(form.subst(&phi, k)?.exact())
}

fn show(v: i64) -> String {
    if fin(v) {
        v.to_string()
    } else {
        "inf".into()
    }
}

fn with_extras(form: &SeriesPoly, base: Cand, extras: &[([u32; 2], &'static str)]) -> Vec<Cand> {
    let mut present: Vec<Cand> = Vec::new();
    let mut absent: Vec<Cand> = Vec::new();
    for (e, sym) in extras {
        let c = cand(
            sym,
            &base.ints.iter().map(|&(k, v)| (k, v)).collect::<Vec<_>>(),
        );
        if has(form, e) {
            present.push(c);
        } else {
            absent.push(c);
        }
    }
    let mut out = present;
    out.push(base);
    out.extend(absent);
    out
}

const ROW_MAP: &[(&str, &str)] = &[
    ("E_{0,s}", "Q_{0,s}"),
    ("E_{r,0}", "Q_{r,0}"),
    ("E^0_{r,s}", "Q^0_{r,s}"),
    ("E^0'_{r,s}", "Q^0'_{r,s}"),
    ("E^1_{r,s}", "Q^1_{r,s}"),
    ("E^1'_{r,s}", "Q^1'_{r,s}"),
    ("E^0_{k,s,l}", "Q^0_{k,s,l}"),
    ("E^1_{k,s,l}", "Q^1_{k,s,l}"),
    ("E_{2t,3t,0}", "Q_{2t,3t,0}"),
    ("E_{2t,3t,l}", "Q_{2t,3t,l}"),
];
