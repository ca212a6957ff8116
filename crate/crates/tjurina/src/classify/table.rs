//! Unimodal normal forms and their side conditions, evaluated exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::ClassifyError;
use crate::field::{Field, FieldElement};
use crate::series::{Monomial, Ring, SeriesPoly};

/// Stand-in for an unbounded parameter.
pub const INFINITY: i64 = i64::MAX;

pub(crate) fn divides(p: i64, n: i64) -> bool {
    if p == 0 {
        n == 0
    } else {
        n.rem_euclid(p) == 0
    }
}

/// The two arithmetic conditions on pairs `(u, v)` that block unimodality:
/// one attached to the `x^3` families, one to the `x^3 y` families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairCondition {
    Cubic,
    CubicLinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Clause {
    A,
    B,
    C,
    D,
}

impl Clause {
    pub const ALL: [Clause; 4] = [Clause::A, Clause::B, Clause::C, Clause::D];
}

impl fmt::Display for PairCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCondition::Cubic => "x^3 condition",
            PairCondition::CubicLinear => "x^3y condition",
        })
    }
}

/// Whether one clause holds at `(u, v)` in characteristic `p` (0 for the
/// rationals, where `p | n` means `n = 0`).
pub fn clause_holds(cond: PairCondition, clause: Clause, p: i64, u: i64, v: i64) -> bool {
    match cond {
        PairCondition::Cubic => match clause {
            Clause::A => {
                (2 * v).div_euclid(3) < u && u + p <= v - 3 && divides(p, 3 * u - 2 * v)
            }
            Clause::B => {
                divides(p, u)
                    && divides(p, v)
                    && 3 * u < 2 * v
                    && 2 * v < 4 * u
                    && u < u + p
                    && u + p <= 3 * u - v - 2
            }
            Clause::C => {
                p != 31
                    && u % 2 == 0
                    && 3 * u / 2 < v
                    && v <= 2 * u - 3
                    && divides(p, v - 3 * u / 2)
            }
            Clause::D => p == 31 && u % 2 == 0 && 3 * u / 2 < v && divides(p, v - 3 * u / 2),
        },
        PairCondition::CubicLinear => {
            if u < 4 || v < 5 {
                return false;
            }
            let odd = u.rem_euclid(2) == 1;
            match clause {
                Clause::A => {
                    (2 * v + 1).div_euclid(3) < u
                        && u + p <= v - 3
                        && divides(p, 3 * u - 2 * v - 1)
                }
                Clause::B => divides(p, 3 * u - 2 * v - 1) && u < u + p && u + p <= 3 * u - v,
                Clause::C => {
                    p != 31
                        && odd
                        && (3 * u + 1) / 2 <= v
                        && v <= 2 * u - 3
                        && divides(p, v - (3 * u - 3) / 2)
                }
                Clause::D => {
                    p == 31 && odd && (3 * u + 1) / 2 <= v && divides(p, v - (3 * u - 3) / 2)
                }
            }
        }
    }
}

/// First clause of `cond` holding at `(u, v)`.
pub fn pair_condition(cond: PairCondition, p: i64, u: i64, v: i64) -> Option<Clause> {
    Clause::ALL
        .into_iter()
        .find(|&c| clause_holds(cond, c, p, u, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub condition: PairCondition,
    pub clause: Clause,
    pub u: i64,
    pub v: i64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} clause {:?} at (u,v) = ({},{})",
            self.condition, self.clause, self.u, self.v
        )
    }
}

/// A box of `(u, v)` pairs that must avoid every listed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairScan {
    pub u: RangeInclusive<i64>,
    pub v: RangeInclusive<i64>,
    pub u_below_v: bool,
    pub conditions: Vec<PairCondition>,
}

impl PairScan {
    /// Witness found by scanning condition, then clause, then `u`, then `v`.
    pub fn find(&self, p: i64) -> Option<Witness> {
        for &condition in &self.conditions {
            for clause in Clause::ALL {
                for u in self.u.clone() {
                    for v in self.v.clone() {
                        if self.u_below_v && u >= v {
                            continue;
                        }
                        if clause_holds(condition, clause, p, u, v) {
                            return Some(Witness {
                                condition,
                                clause,
                                u,
                                v,
                            });
                        }
                    }
                }
            }
        }
        None
    }

    fn describe(&self) -> String {
        let names: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
        format!(
            "no {}u in {}..={}, v in {}..={} satisfies the {}",
            if self.u_below_v { "u < v with " } else { "" },
            self.u.start(),
            self.u.end(),
            self.v.start(),
            self.v.end(),
            names.join(" or the ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionEval {
    pub condition: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TableCheck {
    Unimodal {
        evaluations: Vec<ConditionEval>,
    },
    Rejected {
        reason: String,
        witness: Option<Witness>,
        evaluations: Vec<ConditionEval>,
    },
}

impl TableCheck {
    pub fn is_unimodal(&self) -> bool {
        matches!(self, TableCheck::Unimodal { .. })
    }

    pub fn evaluations(&self) -> &[ConditionEval] {
        match self {
            TableCheck::Unimodal { evaluations } | TableCheck::Rejected { evaluations, .. } => {
                evaluations
            }
        }
    }
}

/// Integer parameters by name plus an optional modulus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub ints: BTreeMap<String, i64>,
    pub lambda: Option<FieldElement>,
}

impl Params {
    pub fn new<'a>(ints: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        Params {
            ints: ints.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            lambda: None,
        }
    }

    pub fn with_lambda(mut self, l: FieldElement) -> Self {
        self.lambda = Some(l);
        self
    }

    pub fn get(&self, name: &str) -> Result<i64, ClassifyError> {
        self.ints
            .get(name)
            .copied()
            .ok_or_else(|| ClassifyError::IncompleteParams(name.to_string()))
    }

    pub fn lambda(&self) -> Result<&FieldElement, ClassifyError> {
        self.lambda
            .as_ref()
            .ok_or_else(|| ClassifyError::IncompleteParams("λ".into()))
    }

    /// `s=30, λ=1`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = self
            .ints
            .iter()
            .map(|(k, &v)| {
                if v == INFINITY {
                    format!("{k}=inf")
                } else {
                    format!("{k}={v}")
                }
            })
            .collect();
        if let Some(l) = &self.lambda {
            parts.push(format!("λ={l}"));
        }
        parts.join(", ")
    }
}

/// One row of the tables: symbol, variable count, integer parameters, and
/// terms as `(carries λ, exponent expressions)`.
#[derive(Clone, Copy, Debug)]
pub struct TableRow {
    pub symbol: &'static str,
    pub nvars: usize,
    pub params: &'static [&'static str],
    pub terms: &'static [(bool, &'static str)],
}

impl TableRow {
    pub fn has_lambda(&self) -> bool {
        self.terms.iter().any(|t| t.0)
    }

    /// Exponent vectors of the terms at concrete parameters.
    pub fn exponents(&self, params: &Params) -> Result<Vec<(bool, Vec<u32>)>, ClassifyError> {
        self.terms
            .iter()
            .map(|&(lam, e)| {
                let v = e
                    .split(',')
                    .map(|x| eval_exponent(x, params))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((lam, v))
            })
            .collect()
    }

    /// The normal form at concrete parameters, in `x, y(, z)` over `field`.
    pub fn normal_form(&self, params: &Params, field: &Field) -> Result<SeriesPoly, ClassifyError> {
        let names: &[&str] = if self.nvars == 2 {
            &["x", "y"]
        } else {
            &["x", "y", "z"]
        };
        let ring = Ring::new(field.clone(), names);
        let mut out = SeriesPoly::zero(&ring);
        for (lam, e) in self.exponents(params)? {
            let c = if lam {
                let l = params.lambda()?;
                field.embed(l.field(), l.value()).map_err(|_| {
                    ClassifyError::IncompleteParams("λ in the coefficient field".into())
                })?
            } else {
                field.one()
            };
            out.add_term(Monomial::new(e), c);
        }
        Ok(out)
    }
}

/// `2t+1`, `3t`, `s`, `4`, `l-1`.
fn eval_exponent(text: &str, params: &Params) -> Result<u32, ClassifyError> {
    let t = text.trim();
    let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = &t[digits.len()..];
    let name: String = rest
        .chars()
        .take_while(|c| c.is_ascii_alphabetic())
        .collect();
    let tail = &rest[name.len()..];
    let value = if name.is_empty() {
        digits.parse::<i64>().unwrap()
    } else {
        let mult = if digits.is_empty() {
            1
        } else {
            digits.parse::<i64>().unwrap()
        };
        let v = params.get(&name)?;
        if v == INFINITY {
            return Err(ClassifyError::IncompleteParams(format!("finite {name}")));
        }
        mult * v
            + if tail.is_empty() {
                0
            } else {
                tail.parse::<i64>().unwrap()
            }
    };
    u32::try_from(value).map_err(|_| ClassifyError::IncompleteParams(format!("exponent {t}")))
}

macro_rules! row {
    ($sym:expr, $n:expr, [$($p:expr),*], [$(($l:expr, $e:expr)),* $(,)?]) => {
        TableRow { symbol: $sym, nvars: $n, params: &[$($p),*], terms: &[$(($l, $e)),*] }
    };
}

const F: bool = false;
const L: bool = true;

pub const ROWS: &[TableRow] = &[
    row!("E_{0,s}", 2, ["s"], [(F, "3,0"), (F, "0,s")]),
    row!("E_{r,0}", 2, ["r"], [(F, "3,0"), (F, "1,r")]),
    row!(
        "E^0_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,0"), (F, "0,s"), (F, "1,r")]
    ),
    row!(
        "E^0'_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,0"), (F, "0,s"), (F, "1,r")]
    ),
    row!(
        "E^1_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,0"), (F, "0,s"), (F, "1,r")]
    ),
    row!(
        "E^1'_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,0"), (F, "0,s"), (F, "1,r")]
    ),
    row!(
        "E^0_{k,s,l}",
        2,
        ["k", "s", "l"],
        [(F, "3,0"), (F, "0,s"), (L, "1,k"), (F, "1,l")]
    ),
    row!(
        "E^1_{k,s,l}",
        2,
        ["k", "s", "l"],
        [(F, "3,0"), (F, "0,s"), (L, "1,k"), (F, "1,l")]
    ),
    row!(
        "E_{2t,3t,0}",
        2,
        ["t"],
        [(F, "3,0"), (F, "1,2t"), (L, "0,3t")]
    ),
    row!(
        "E_{2t,3t,l}",
        2,
        ["t", "l"],
        [(F, "3,0"), (F, "1,2t"), (L, "0,3t"), (F, "0,l")]
    ),
    row!("W_12", 2, [], [(F, "4,0"), (F, "0,5")]),
    row!("W_12'", 2, [], [(F, "4,0"), (F, "0,5"), (F, "2,3")]),
    row!("W_13", 2, [], [(F, "4,0"), (F, "1,4")]),
    row!("W_13'", 2, [], [(F, "4,0"), (F, "1,4"), (F, "0,6")]),
    row!("W_{1,0}", 2, [], [(F, "4,0"), (F, "2,3"), (L, "0,6")]),
    row!(
        "W_{1,0}'",
        2,
        [],
        [(F, "4,0"), (F, "2,3"), (L, "0,6"), (F, "0,7")]
    ),
    row!("W_{1,t}", 2, ["t"], [(F, "4,0"), (F, "2,3"), (F, "0,t")]),
    row!("W^#_{1,0}", 2, [], [(F, "4,0"), (F, "0,6")]),
    row!("W^#'_{1,0}", 2, [], [(F, "4,0"), (F, "2,4"), (F, "0,6")]),
    row!("W_17", 2, [], [(F, "4,0"), (F, "1,5")]),
    row!("W_17'", 2, [], [(F, "4,0"), (F, "1,5"), (F, "0,7")]),
    row!("W_17''", 2, [], [(F, "4,0"), (F, "1,5"), (F, "0,8")]),
    row!("W_18", 2, [], [(F, "4,0"), (F, "0,7")]),
    row!("W_18'", 2, [], [(F, "4,0"), (F, "0,7"), (F, "2,4")]),
    row!("W_18''", 2, [], [(F, "4,0"), (F, "0,7"), (F, "2,5")]),
    row!("Z_{0,s}", 2, ["s"], [(F, "3,1"), (F, "0,s")]),
    row!("Z_{r,0}", 2, ["r"], [(F, "3,1"), (F, "1,r")]),
    row!(
        "Z^0_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,1"), (F, "1,r"), (F, "0,s")]
    ),
    row!(
        "Z^1_{r,s}",
        2,
        ["r", "s"],
        [(F, "3,1"), (F, "1,r"), (F, "0,s")]
    ),
    row!(
        "Z^0_{k,s,l}",
        2,
        ["k", "s", "l"],
        [(F, "3,1"), (F, "0,s"), (L, "1,k"), (F, "1,l")]
    ),
    row!(
        "Z^1_{k,s,l}",
        2,
        ["k", "s", "l"],
        [(F, "3,1"), (F, "0,s"), (L, "1,k"), (F, "1,l")]
    ),
    row!(
        "Z_{2t,3t,0}",
        2,
        ["t"],
        [(F, "3,1"), (F, "1,2t+1"), (L, "0,3t+1")]
    ),
    row!(
        "Z_{2t,3t,l}",
        2,
        ["t", "l"],
        [(F, "3,1"), (F, "1,2t+1"), (L, "0,3t+1"), (F, "0,l")]
    ),
    row!("T_{4,s,2}", 2, ["s"], [(F, "4,0"), (F, "2,2"), (F, "0,s")]),
    row!(
        "T_{r,s,2}",
        2,
        ["r", "s"],
        [(F, "r,0"), (F, "2,2"), (F, "0,s")]
    ),
    row!("T_{4,4,2}", 2, [], [(F, "4,0"), (L, "2,2"), (F, "0,4")]),
    row!(
        "T_{3,3,3}",
        3,
        [],
        [(F, "3,0,0"), (F, "0,3,0"), (F, "0,0,3"), (L, "1,1,1")]
    ),
    row!(
        "T_{r,s,t}",
        3,
        ["r", "s", "t"],
        [(F, "r,0,0"), (F, "0,s,0"), (F, "0,0,t"), (F, "1,1,1")]
    ),
    row!(
        "Q_{0,s}",
        3,
        ["s"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "0,s,0")]
    ),
    row!(
        "Q_{r,0}",
        3,
        ["r"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "1,r,0")]
    ),
    row!(
        "Q^0_{r,s}",
        3,
        ["r", "s"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "0,s,0"), (F, "1,r,0")]
    ),
    row!(
        "Q^0'_{r,s}",
        3,
        ["r", "s"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "0,s,0"), (F, "1,r,0")]
    ),
    row!(
        "Q^1_{r,s}",
        3,
        ["r", "s"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "0,s,0"), (F, "1,r,0")]
    ),
    row!(
        "Q^1'_{r,s}",
        3,
        ["r", "s"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "0,s,0"), (F, "1,r,0")]
    ),
    row!(
        "Q^0_{k,s,l}",
        3,
        ["k", "s", "l"],
        [
            (F, "3,0,0"),
            (F, "0,1,2"),
            (F, "0,s,0"),
            (L, "1,k,0"),
            (F, "1,l,0")
        ]
    ),
    row!(
        "Q^1_{k,s,l}",
        3,
        ["k", "s", "l"],
        [
            (F, "3,0,0"),
            (F, "0,1,2"),
            (F, "0,s,0"),
            (L, "1,k,0"),
            (F, "1,l,0")
        ]
    ),
    row!(
        "Q_{2t,3t,0}",
        3,
        ["t"],
        [(F, "3,0,0"), (F, "0,1,2"), (F, "1,2t,0"), (L, "0,3t,0")]
    ),
    row!(
        "Q_{2t,3t,l}",
        3,
        ["t", "l"],
        [
            (F, "3,0,0"),
            (F, "0,1,2"),
            (F, "1,2t,0"),
            (L, "0,3t,0"),
            (F, "0,l,0")
        ]
    ),
    row!("S_11", 3, [], [(F, "2,0,1"), (F, "0,1,2"), (F, "0,4,0")]),
    row!(
        "S_11'",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "0,4,0"), (L, "2,2,0")]
    ),
    row!("S_12", 3, [], [(F, "2,0,1"), (F, "0,1,2"), (F, "1,3,0")]),
    row!(
        "S_{1,0}",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "2,2,0"), (L, "0,5,0")]
    ),
    row!(
        "S^1_{1,0}",
        3,
        [],
        [
            (F, "2,0,1"),
            (F, "0,1,2"),
            (F, "2,2,0"),
            (L, "0,5,0"),
            (F, "0,6,0")
        ]
    ),
    row!(
        "S^2_{1,0}",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "2,2,0"), (F, "1,4,0")]
    ),
    row!(
        "S^3_{1,0}",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "0,5,0")]
    ),
    row!(
        "S^4_{1,0}",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "2,3,0"), (F, "0,5,0")]
    ),
    row!(
        "S_{1,0,t}",
        3,
        ["t", "s"],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "2,2,0"), (F, "0,t,0")]
    ),
    row!(
        "S_{1,s,0}",
        3,
        ["s", "t"],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "2,2,0"), (F, "1,s,0")]
    ),
    row!(
        "S_{1,s,t}",
        3,
        ["s", "t"],
        [
            (F, "2,0,1"),
            (F, "0,1,2"),
            (F, "2,2,0"),
            (F, "1,s,0"),
            (L, "0,t,0")
        ]
    ),
    row!("S_16", 3, [], [(F, "2,0,1"), (F, "0,1,2"), (F, "1,4,0")]),
    row!(
        "S_16'",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "1,4,0"), (F, "0,6,0")]
    ),
    row!(
        "S_16''",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "1,4,0"), (F, "0,7,0")]
    ),
    row!("S_17", 3, [], [(F, "2,0,1"), (F, "0,1,2"), (F, "0,6,0")]),
    row!(
        "S_17'",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "0,6,0"), (F, "2,3,0")]
    ),
    row!(
        "S_17''",
        3,
        [],
        [(F, "2,0,1"), (F, "0,1,2"), (F, "0,6,0"), (F, "2,4,0")]
    ),
    row!("U_12", 3, [], [(F, "3,0,0"), (F, "1,0,2"), (F, "0,4,0")]),
    row!(
        "U_12'",
        3,
        [],
        [(F, "3,0,0"), (F, "1,0,2"), (F, "0,4,0"), (F, "2,2,0")]
    ),
    row!(
        "U_{1,0}",
        3,
        [],
        [(F, "3,0,0"), (F, "1,0,2"), (F, "1,3,0"), (L, "0,3,1")]
    ),
    row!(
        "U_{1,0}'",
        3,
        [],
        [
            (F, "3,0,0"),
            (F, "1,0,2"),
            (F, "1,3,0"),
            (L, "0,3,1"),
            (F, "0,4,1")
        ]
    ),
    row!(
        "U_{1,t}",
        3,
        ["t"],
        [(F, "3,0,0"), (F, "1,0,2"), (F, "1,3,0"), (F, "0,t,1")]
    ),
    row!("U_16", 3, [], [(F, "3,0,0"), (F, "1,0,2"), (F, "0,5,0")]),
    row!(
        "U_16'",
        3,
        [],
        [(F, "3,0,0"), (F, "1,0,2"), (F, "0,5,0"), (F, "2,3,0")]
    ),
    row!("U_*", 3, [], [(F, "3,0,0"), (F, "1,0,2"), (F, "0,3,1")]),
    row!(
        "U_*'",
        3,
        [],
        [(F, "3,0,0"), (F, "1,0,2"), (F, "0,3,1"), (F, "1,4,0")]
    ),
];

fn squash(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
        .collect()
}

pub fn lookup(symbol: &str) -> Result<&'static TableRow, ClassifyError> {
    let key = squash(symbol);
    ROWS.iter()
        .find(|r| squash(r.symbol) == key)
        .ok_or_else(|| ClassifyError::UnknownSymbol(symbol.to_string()))
}

/// Conditions of one row split into those that identify the row among its
/// neighbours (`shape`) and those that decide unimodality (`side`, `scan`).
#[derive(Clone, Debug, Default)]
pub struct RowEval {
    pub shape: Vec<ConditionEval>,
    pub side: Vec<ConditionEval>,
    pub scan: Option<PairScan>,
}

impl RowEval {
    pub fn shape_ok(&self) -> bool {
        self.shape.iter().all(|c| c.holds)
    }

    fn shape(&mut self, label: impl Into<String>, holds: bool) {
        self.shape.push(ConditionEval {
            condition: label.into(),
            holds,
        });
    }

    fn side(&mut self, label: impl Into<String>, holds: bool) {
        self.side.push(ConditionEval {
            condition: label.into(),
            holds,
        });
    }

    fn p_not(&mut self, p: i64, bad: &[i64]) {
        for &q in bad {
            self.side(format!("p != {q}"), p != q);
        }
    }

    fn scan(
        &mut self,
        u: RangeInclusive<i64>,
        v: RangeInclusive<i64>,
        u_below_v: bool,
        conditions: &[PairCondition],
    ) {
        self.scan = Some(PairScan {
            u,
            v,
            u_below_v,
            conditions: conditions.to_vec(),
        });
    }
}

struct Lam<'a>(&'a FieldElement);

impl Lam<'_> {
    fn f(&self) -> &Field {
        self.0.field()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn pow(&self, e: u64) -> crate::field::Scalar {
        self.f().pow_u64(self.0.value(), e)
    }

    fn square_is(&self, n: i64) -> bool {
        self.pow(2) == self.f().from_int(n)
    }
}

const CUBIC: &[PairCondition] = &[PairCondition::Cubic];
const BOTH: &[PairCondition] = &[PairCondition::Cubic, PairCondition::CubicLinear];

fn e_family(row: &str, q: bool, params: &Params, p: i64) -> Result<RowEval, ClassifyError> {
    let mut e = RowEval::default();
    let g = |n: &str| params.get(n);
    match row {
        "0,s" => {
            let s = g("s")?;
            let lo = if q { 4 } else { 6 };
            e.shape(format!("s >= {lo}"), s >= lo);
            let top = if divides(p, s) { s } else { s - 1 };
            e.scan(3..=top, 3..=top, true, CUBIC);
        }
        "r,0" => {
            let r = g("r")?;
            let lo = if q { 3 } else { 4 };
            e.shape(format!("r >= {lo}"), r >= lo);
            let top = if divides(p, r) { 2 * r - 1 } else { 2 * r - 2 };
            e.scan(3..=r - 1, 4..=top, false, CUBIC);
        }
        "0" | "0'" => {
            let (r, s) = (g("r")?, g("s")?);
            let top = if divides(p, s) { s - 1 } else { s - 2 };
            e.shape("s >= 4", s >= 4);
            e.shape("2s/3 < r", 2 * s < 3 * r);
            e.shape(
                format!("r <= {}", if divides(p, s) { "s-1" } else { "s-2" }),
                r <= top,
            );
            if row == "0" {
                e.shape("p does not divide 3r-2s", !divides(p, 3 * r - 2 * s));
                if !q {
                    e.side("not x^3+xy^4+y^5 at p = 5", !(p == 5 && r == 4 && s == 5));
                }
                e.scan(3..=r - 1, 4..=s - 1, false, CUBIC);
            } else {
                e.shape("p divides 3r-2s", divides(p, 3 * r - 2 * s));
                e.side("not x^3+xy^4+y^5 at p = 5", !(p == 5 && r == 4 && s == 5));
                e.scan(3..=s - 2, 4..=s - 1, false, CUBIC);
            }
        }
        "1" | "1'" => {
            let (r, s) = (g("r")?, g("s")?);
            // r = 3 is the simple x^3 + xy^3
            let lo = if q { 3 } else { 4 };
            e.shape(format!("r >= {lo}"), r >= lo);
            e.shape("3r < 2s < 4r", 3 * r < 2 * s && 2 * s < 4 * r);
            // y^(2r-1) is removable next to x^3 + xy^r unless p | r
            e.shape("s <= 2r-2 unless p | r", s <= 2 * r - 2 || divides(p, r));
            if row == "1" {
                e.shape("p does not divide 3r-2s", !divides(p, 3 * r - 2 * s));
                e.scan(3..=r - 1, 4..=s - 1, false, CUBIC);
            } else {
                e.shape("p divides 3r-2s", divides(p, 3 * r - 2 * s));
                let utop = if divides(p, r) && divides(p, s) {
                    3 * r - s - 1
                } else {
                    r - 1
                };
                e.scan(3..=utop, 4..=s, false, CUBIC);
            }
        }
        "0kl" | "1kl" => {
            let (k, s, l) = (g("k")?, g("s")?, g("l")?);
            e.shape("s >= 4", s >= 4);
            if row == "0kl" {
                let top = if divides(p, s) { s - 1 } else { s - 2 };
                e.shape("2s/3 < k < l", 2 * s < 3 * k && k < l);
                e.shape(
                    format!("l <= {}", if divides(p, s) { "s-1" } else { "s-2" }),
                    l <= top,
                );
                e.shape("p divides 3k-2s", divides(p, 3 * k - 2 * s));
                e.shape("p does not divide 3l-2s", !divides(p, 3 * l - 2 * s));
            } else {
                e.shape("s/2 < k < l < 2s/3", s < 2 * k && k < l && 3 * l < 2 * s);
                e.shape("p divides k and s", divides(p, k) && divides(p, s));
                e.shape("p does not divide l", !divides(p, l));
            }
            e.shape("λ != 0", !Lam(params.lambda()?).is_zero());
            e.scan(3..=l - 1, 4..=s - 1, false, CUBIC);
        }
        "t0" => {
            let t = g("t")?;
            let lam = Lam(params.lambda()?);
            e.shape("t >= 2", t >= 2);
            e.shape("λ != 0", !lam.is_zero());
            e.p_not(p, &[31]);
            let disc = lam.f().add(
                &lam.f().from_int(4),
                &lam.f().mul(&lam.f().from_int(27), &lam.pow(2)),
            );
            e.side("4 + 27λ^2 != 0", !lam.f().is_zero(&disc));
            let top = if divides(p, t) { 4 * t - 1 } else { 4 * t - 2 };
            e.scan(3..=2 * t - 1, 4..=top, false, CUBIC);
        }
        "tl" => {
            let (t, l) = (g("t")?, g("l")?);
            e.shape("t >= 2", t >= 2);
            e.shape("l > 3t", l > 3 * t);
            // beyond these bounds y^l is removable
            if p != 31 {
                let (top, text) = if divides(p, t) || q {
                    (4 * t - 1, "4t-1")
                } else {
                    (4 * t - 2, "4t-2")
                };
                e.shape(format!("l <= {text}"), l <= top);
            }
            e.shape("p does not divide l-3t", !divides(p, l - 3 * t));
            e.shape("λ != 0", !Lam(params.lambda()?).is_zero());
            e.scan(3..=2 * t - 1, 4..=l - 1, false, CUBIC);
        }
        _ => unreachable!(),
    }
    Ok(e)
}

fn z_family(row: &str, params: &Params, p: i64) -> Result<RowEval, ClassifyError> {
    let mut e = RowEval::default();
    let g = |n: &str| params.get(n);
    match row {
        "0,s" => {
            let s = g("s")?;
            e.shape("s >= 5", s >= 5);
            e.scan(3..=s - 1, 3..=s - 1, false, BOTH);
        }
        "r,0" => {
            let r = g("r")?;
            e.shape("r >= 4", r >= 4);
            e.scan(3..=r - 1, 3..=2 * r - 2, false, BOTH);
        }
        "0" => {
            let (r, s) = (g("r")?, g("s")?);
            let top = if divides(p, s) { s - 1 } else { s - 2 };
            e.shape("s >= 5", s >= 5);
            e.shape("(2s+1)/3 < r", 2 * s + 1 < 3 * r);
            e.shape(
                format!("r <= {}", if divides(p, s) { "s-1" } else { "s-2" }),
                r <= top,
            );
            let utop = if divides(p, 3 * r - 2 * s - 1) {
                s - 1
            } else {
                r - 1
            };
            e.scan(3..=utop, 3..=s - 1, false, BOTH);
        }
        "1" => {
            let (r, s) = (g("r")?, g("s")?);
            e.shape("r >= 4", r >= 4);
            e.shape("3r-1 < 2s < 4r", 3 * r - 1 < 2 * s && 2 * s < 4 * r);
            e.shape("s <= 2r-2", s <= 2 * r - 2);
            e.shape("p does not divide 3r-2s-1", !divides(p, 3 * r - 2 * s - 1));
            let utop = if divides(p, 3 * r - 2 * s - 1) {
                3 * r - s + 1
            } else {
                r - 1
            };
            e.scan(3..=utop, 3..=s - 1, false, BOTH);
        }
        "0kl" | "1kl" => {
            let (k, s, l) = (g("k")?, g("s")?, g("l")?);
            e.shape("s >= 5", s >= 5);
            if row == "0kl" {
                let top = if divides(p, s) { s - 1 } else { s - 2 };
                e.shape("(2s+1)/3 < k < l", 2 * s + 1 < 3 * k && k < l);
                e.shape(
                    format!("l <= {}", if divides(p, s) { "s-1" } else { "s-2" }),
                    l <= top,
                );
            } else {
                e.shape(
                    "s/2 < k < l < (2s+1)/3",
                    s < 2 * k && k < l && 3 * l < 2 * s + 1,
                );
            }
            e.shape("p divides 3k-2s-1", divides(p, 3 * k - 2 * s - 1));
            e.shape("p does not divide 3l-2s-1", !divides(p, 3 * l - 2 * s - 1));
            e.shape("λ != 0", !Lam(params.lambda()?).is_zero());
            e.scan(3..=l - 1, 3..=s - 1, false, BOTH);
        }
        "t0" => {
            let t = g("t")?;
            let lam = Lam(params.lambda()?);
            e.shape("t >= 2", t >= 2);
            e.shape("λ != 0", !lam.is_zero());
            e.p_not(p, &[31]);
            let disc = lam.f().add(
                &lam.f().from_int(4),
                &lam.f().mul(&lam.f().from_int(27), &lam.pow(2)),
            );
            e.side("4 + 27λ^2 != 0", !lam.f().is_zero(&disc));
            e.scan(3..=2 * t, 3..=4 * t, false, BOTH);
        }
        "tl" => {
            let (t, l) = (g("t")?, g("l")?);
            e.shape("t >= 2", t >= 2);
            e.shape("l > 3t+1", l > 3 * t + 1);
            if p != 31 {
                e.shape("l <= 4t", l <= 4 * t);
            }
            e.shape("p does not divide l-3t-1", !divides(p, l - 3 * t - 1));
            e.shape("λ != 0", !Lam(params.lambda()?).is_zero());
            e.scan(3..=2 * t, 3..=l - 1, false, BOTH);
        }
        _ => unreachable!(),
    }
    Ok(e)
}

/// Conditions of a row at concrete parameters.
pub fn row_conditions(row: &TableRow, params: &Params, p: i64) -> Result<RowEval, ClassifyError> {
    let sym = row.symbol;
    let family_key = |s: &str| -> &'static str {
        match s {
            "E_{0,s}" | "Q_{0,s}" | "Z_{0,s}" => "0,s",
            "E_{r,0}" | "Q_{r,0}" | "Z_{r,0}" => "r,0",
            "E^0_{r,s}" | "Q^0_{r,s}" | "Z^0_{r,s}" => "0",
            "E^0'_{r,s}" | "Q^0'_{r,s}" => "0'",
            "E^1_{r,s}" | "Q^1_{r,s}" | "Z^1_{r,s}" => "1",
            "E^1'_{r,s}" | "Q^1'_{r,s}" => "1'",
            "E^0_{k,s,l}" | "Q^0_{k,s,l}" | "Z^0_{k,s,l}" => "0kl",
            "E^1_{k,s,l}" | "Q^1_{k,s,l}" | "Z^1_{k,s,l}" => "1kl",
            "E_{2t,3t,0}" | "Q_{2t,3t,0}" | "Z_{2t,3t,0}" => "t0",
            _ => "tl",
        }
    };
    match sym.as_bytes()[0] {
        b'E' => return e_family(family_key(sym), false, params, p),
        b'Q' => return e_family(family_key(sym), true, params, p),
        b'Z' => return z_family(family_key(sym), params, p),
        _ => {}
    }
    let mut e = RowEval::default();
    let g = |n: &str| params.get(n);
    match sym {
        "W_12" | "W_12'" | "W_13" | "W_13'" | "W^#_{1,0}" | "W^#'_{1,0}" | "W_17" | "W_17'"
        | "W_17''" => e.p_not(p, &[5]),
        "W_18" | "W_18'" | "W_18''" => e.p_not(p, &[5, 7]),
        "W_{1,0}" | "W_{1,0}'" => {
            let lam = Lam(params.lambda()?);
            e.shape("λ != 0", !lam.is_zero());
            let quarter = lam.f().inv(&lam.f().from_int(4)).unwrap();
            e.side("λ != 1/4", *lam.0.value() != quarter);
            e.p_not(p, &[5]);
        }
        "W_{1,t}" => {
            e.shape("t >= 7", g("t")? >= 7);
            e.p_not(p, &[5]);
        }
        "T_{4,s,2}" => e.shape("s >= 5", g("s")? >= 5),
        "T_{r,s,2}" => {
            let (r, s) = (g("r")?, g("s")?);
            e.shape("r, s >= 5", r >= 5 && s >= 5);
        }
        "T_{4,4,2}" => {
            let lam = Lam(params.lambda()?);
            e.side("λ^2 != 4", !lam.square_is(4));
        }
        "T_{3,3,3}" => {
            let lam = Lam(params.lambda()?);
            let v = lam.f().add(&lam.pow(3), &lam.f().from_int(27));
            e.side("λ^3 + 27 != 0", !lam.f().is_zero(&v));
        }
        "T_{r,s,t}" => {
            let (r, s, t) = (g("r")?, g("s")?, g("t")?);
            e.shape("r, s, t >= 3", r >= 3 && s >= 3 && t >= 3);
            e.shape("max(r,s,t) >= 4", r.max(s).max(t) >= 4);
        }
        "S_11" | "S_12" | "S^2_{1,0}" => {}
        "S_11'" => e.shape("λ != 0", !Lam(params.lambda()?).is_zero()),
        "S_{1,0}" | "S^1_{1,0}" => e.shape("λ != 0", !Lam(params.lambda()?).is_zero()),
        "S^3_{1,0}" | "S^4_{1,0}" | "S_16" | "S_16'" | "S_16''" | "S_17" | "S_17'" | "S_17''"
        | "U_16" | "U_16'" => e.p_not(p, &[5]),
        "S_{1,0,t}" => {
            let (t, s) = (g("t")?, g("s")?);
            e.shape("6 <= t < s+2", 6 <= t && t < s.saturating_add(2));
        }
        "S_{1,s,0}" => {
            let (s, t) = (g("s")?, g("t")?);
            e.shape("s >= 5", s >= 5);
            e.shape("t >= 2s-2", t >= 2 * s - 2);
        }
        "S_{1,s,t}" => {
            let (s, t) = (g("s")?, g("t")?);
            e.shape("s >= 5", s >= 5);
            e.shape("s+2 <= t <= 2s-3", s + 2 <= t && t <= 2 * s - 3);
            e.shape("λ != 0", !Lam(params.lambda()?).is_zero());
        }
        "U_12" | "U_12'" | "U_*" | "U_*'" => {}
        "U_{1,0}" | "U_{1,0}'" => {
            let lam = Lam(params.lambda()?);
            e.shape("λ != 0", !lam.is_zero());
            e.side("λ^2 != -1", !lam.square_is(-1));
        }
        "U_{1,t}" => {
            e.shape("t >= 4", g("t")? >= 4);
            e.p_not(p, &[5]);
        }
        _ => unreachable!("row {sym} has no conditions"),
    }
    Ok(e)
}

/// Exact evaluation of every condition of a row.
pub fn check_table_conditions(
    symbol: &str,
    params: &Params,
    p: u64,
) -> Result<TableCheck, ClassifyError> {
    let row = lookup(symbol)?;
    for name in row.params {
        params.get(name)?;
    }
    if row.has_lambda() {
        params.lambda()?;
    }
    let p = p as i64;
    let eval = row_conditions(row, params, p)?;
    let witness = eval.scan.as_ref().and_then(|s| s.find(p));
    let mut evaluations: Vec<ConditionEval> =
        eval.shape.iter().chain(&eval.side).cloned().collect();
    if let Some(s) = &eval.scan {
        evaluations.push(ConditionEval {
            condition: s.describe(),
            holds: witness.is_none(),
        });
    }
    Ok(match evaluations.iter().find(|c| !c.holds) {
        None => TableCheck::Unimodal { evaluations },
        Some(bad) => TableCheck::Rejected {
            reason: match &witness {
                Some(w) if bad.condition.starts_with("no ") => format!("{w}"),
                _ => format!("fails: {}", bad.condition),
            },
            witness,
            evaluations,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(v: &[(&str, i64)]) -> Params {
        Params::new(v.iter().copied())
    }

    #[test]
    fn quartic_modulus_one_is_unimodal_at_seven() {
        let f7 = Field::prime(7).unwrap();
        let p = Params::default().with_lambda(FieldElement::from_int(&f7, 1));
        assert!(check_table_conditions("T_{4,4,2}", &p, 7)
            .unwrap()
            .is_unimodal());
        let p = Params::default().with_lambda(FieldElement::from_int(&f7, 2));
        assert!(!check_table_conditions("T_{4,4,2}", &p, 7)
            .unwrap()
            .is_unimodal());
    }

    #[test]
    fn e0s_at_five() {
        let r = check_table_conditions("E_{0,s}", &params(&[("s", 30)]), 5).unwrap();
        match r {
            TableCheck::Rejected {
                witness: Some(w), ..
            } => {
                assert_eq!((w.clause, w.u, w.v), (Clause::A, 21, 29));
            }
            other => panic!("{other:?}"),
        }
        assert!(check_table_conditions("E_{0,s}", &params(&[("s", 17)]), 5)
            .unwrap()
            .is_unimodal());
    }

    #[test]
    fn w12_needs_p_not_five() {
        let r = check_table_conditions("W_12", &Params::default(), 5).unwrap();
        assert!(matches!(r, TableCheck::Rejected { witness: None, .. }));
        assert!(check_table_conditions("W_12", &Params::default(), 7)
            .unwrap()
            .is_unimodal());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            check_table_conditions("X_9", &Params::default(), 7),
            Err(ClassifyError::UnknownSymbol(_))
        ));
        assert!(matches!(
            check_table_conditions("E_{0,s}", &Params::default(), 7),
            Err(ClassifyError::IncompleteParams(_))
        ));
        assert!(check_table_conditions("E_0,s", &params(&[("s", 7)]), 7).is_ok());
    }

    #[test]
    fn normal_forms_instantiate() {
        let f = Field::prime(7).unwrap();
        let row = lookup("Z_{2t,3t,l}").unwrap();
        let p = params(&[("t", 2), ("l", 9)]).with_lambda(FieldElement::from_int(&f, 3));
        let g = row.normal_form(&p, &f).unwrap();
        assert_eq!(g.to_text(), "x^3*y + x*y^5 + 3*y^7 + y^9");
    }

    #[test]
    fn clause_c_of_the_xy_condition() {
        // u = 13: 20 <= v <= 23 and 5 | v - 18
        assert!(clause_holds(
            PairCondition::CubicLinear,
            Clause::C,
            5,
            13,
            23
        ));
        assert!(!clause_holds(
            PairCondition::CubicLinear,
            Clause::C,
            7,
            13,
            23
        ));
        assert!(!clause_holds(
            PairCondition::CubicLinear,
            Clause::C,
            5,
            13,
            19
        ));
    }
}
