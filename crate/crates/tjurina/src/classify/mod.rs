//! Contact classification of isolated singularities of modality at most one
//! in characteristic `p > 3` (and over the rationals).

mod families;
pub mod jets;
pub mod reduce;
pub mod split;
pub mod table;

use std::fmt;

use thiserror::Error;

use crate::acgrading::AcError;
use crate::determinacy::{determinacy_tangent, DetError};
use crate::field::FieldError;
use crate::localalg::{default_cap, tau, tau_ext};
use crate::newton::NewtonError;
use crate::series::{SeriesError, SeriesPoly};

pub use jets::{jet_match_3, jet_type_2, Jet3, JetTag, JetType2, LinearChange, Shape3};
pub use reduce::{
    alpha_beta_normalize, modulus, reduce_jet, reduce_jet_with, reduce_tail, Modulus, Normalized,
    TailReduction,
};
pub use split::{split, SplitResult};
pub use table::{
    check_table_conditions, lookup, ConditionEval, Params, TableCheck, TableRow, Witness, ROWS,
};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("characteristic 2 is not supported")]
    CharTwo,
    #[error("characteristic {0} is too small for the classification")]
    SmallCharUnsupported(u64),
    #[error("wrong degree: {0}")]
    WrongDegree(String),
    #[error("degenerate form")]
    DegenerateForm,
    #[error("no canonical cubic matches: {0}")]
    NoMatch(String),
    #[error("roots not available: {0}")]
    RootsUnavailable(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("obstructed scaling: {0}")]
    ObstructedScaling(String),
    #[error("unknown table symbol {0}")]
    UnknownSymbol(String),
    #[error("incomplete parameters: {0}")]
    IncompleteParams(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Determinacy(#[from] DetError),
    #[error(transparent)]
    Graded(#[from] AcError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

#[derive(Clone, Debug)]
pub enum ClassificationVerdict {
    NotIsolated,
    Simple {
        symbol: String,
    },
    Unimodal {
        symbol: String,
        params: Params,
        normal_form: String,
        evaluations: Vec<ConditionEval>,
    },
    ModalityAtLeast2 {
        reason: String,
        witness: Option<Witness>,
    },
    Undetermined {
        reason: String,
    },
}

impl ClassificationVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassificationVerdict::NotIsolated => "NotIsolated",
            ClassificationVerdict::Simple { .. } => "Simple",
            ClassificationVerdict::Unimodal { .. } => "Unimodal",
            ClassificationVerdict::ModalityAtLeast2 { .. } => "ModalityAtLeast2",
            ClassificationVerdict::Undetermined { .. } => "Undetermined",
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match self {
            ClassificationVerdict::Simple { symbol }
            | ClassificationVerdict::Unimodal { symbol, .. } => Some(symbol),
            _ => None,
        }
    }
}

impl fmt::Display for ClassificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassificationVerdict::NotIsolated => write!(f, "NotIsolated"),
            ClassificationVerdict::Simple { symbol } => write!(f, "Simple {symbol}"),
            ClassificationVerdict::Unimodal { symbol, params, .. } => {
                let d = params.describe();
                if d.is_empty() {
                    write!(f, "Unimodal {symbol}")
                } else {
                    write!(f, "Unimodal {symbol} ({d})")
                }
            }
            ClassificationVerdict::ModalityAtLeast2 { reason, witness } => match witness {
                Some(w) => write!(f, "ModalityAtLeast2: {reason}; witness {w}"),
                None => write!(f, "ModalityAtLeast2: {reason}"),
            },
            ClassificationVerdict::Undetermined { reason } => write!(f, "Undetermined: {reason}"),
        }
    }
}

/// A verdict with the substitutions that led to it.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: ClassificationVerdict,
    pub transform_log: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub seed: u64,
    /// Degree cap for the quotient computations; `None` picks the default.
    pub cap: Option<u32>,
    /// Number of valuation levels the tail reduction may touch.
    pub tail_budget: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            seed: 0,
            cap: None,
            tail_budget: 400,
        }
    }
}

pub fn classify(f: &SeriesPoly, seed: u64) -> Result<Classification, ClassifyError> {
    classify_with(
        f,
        &ClassifyOptions {
            seed,
            ..Default::default()
        },
    )
}

pub fn classify_with(
    f: &SeriesPoly,
    opts: &ClassifyOptions,
) -> Result<Classification, ClassifyError> {
    let p = f.field().characteristic();
    if p == 2 || p == 3 {
        return Err(ClassifyError::SmallCharUnsupported(p));
    }
    let f = f.clone().exact();
    let n = f.ring().nvars();
    let cap = opts.cap.unwrap_or_else(|| default_cap(n));
    let mut log = Vec::new();
    let done = |verdict, log| {
        Ok(Classification {
            verdict,
            transform_log: log,
        })
    };
    if f.is_zero() || !f.field().is_zero(&f.constant_term()) {
        return done(
            ClassificationVerdict::Undetermined {
                reason: "input is not in the maximal ideal".into(),
            },
            log,
        );
    }
    if f.ord() == Some(1) {
        return done(
            ClassificationVerdict::Simple {
                symbol: "A_0".into(),
            },
            log,
        );
    }
    if tau(&f, cap).dimension.is_none() {
        return done(ClassificationVerdict::NotIsolated, log);
    }
    let k = determinacy_tangent(&f, cap)?.k;
    log.push(format!("{k}-determined; working modulo degree {}", k + 1));
    let s = split(&f.jet(k), k)?;
    log.extend(s.log.iter().cloned());
    let g = s.residual.clone().exact();
    let c = s.kept.len();
    log.push(format!("corank {c}, residual {g}"));
    let verdict = match c {
        0 => ClassificationVerdict::Simple {
            symbol: "A_1".into(),
        },
        1 => {
            let ord = g.ord().unwrap_or(k + 1);
            ClassificationVerdict::Simple {
                symbol: format!("A_{}", ord - 1),
            }
        }
        2 | 3 => {
            let mut ctx = families::Context::new(&g, k, cap, opts, &mut log)?;
            ctx.run()?
        }
        _ => ClassificationVerdict::ModalityAtLeast2 {
            reason: format!("corank {c} exceeds 3"),
            witness: None,
        },
    };
    done(verdict, log)
}

/// Tjurina and extended Tjurina numbers, used to guard candidate normal forms.
pub(crate) fn invariants(f: &SeriesPoly, cap: u32) -> (Option<usize>, Option<usize>) {
    (tau(f, cap).dimension, tau_ext(f, cap).dimension)
}
