//! Tabulating τ and τ^e over template families and characteristics, and the
//! arithmetic rules that predict where τ jumps above its value over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::frontend::{FamilyTemplate, ParseError};
use crate::localalg::{tau, tau_ext};
use crate::series::SeriesPoly;

pub type Point = BTreeMap<String, i64>;

#[derive(Debug, Error)]
pub enum JumpError {
    #[error("grid of {size} rows exceeds the budget of {budget}")]
    BudgetExceeded { size: usize, budget: usize },
    #[error("unknown family kind `{0}` (expected x3-ys-xyk, x3y, x3-yz2 or generic-E)")]
    UnknownFamilyKind(String),
    #[error("characteristic {0} is not supported here; need p > 3")]
    SmallCharacteristic(u64),
    #[error("no range given for `{0}`")]
    MissingRange(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Shapes with a known jump rule. `s` is always the pure `y` exponent and
/// `k` the exponent of `x y^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `x^3 + y^s + x y^k`
    X3YsXyk,
    /// `x^3 y + y^s + x y^k`
    X3y,
    /// `x^3 + y z^2 + y^s + x y^k`
    X3Yz2,
    /// `x^3 + y^s`
    GenericE,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::X3YsXyk,
        FamilyKind::X3y,
        FamilyKind::X3Yz2,
        FamilyKind::GenericE,
    ];

    pub fn roles(self) -> &'static [&'static str] {
        match self {
            FamilyKind::GenericE => &["s"],
            _ => &["k", "s"],
        }
    }

    /// The range of exponents the rule speaks about.
    pub fn in_cone(self, pt: &Point) -> bool {
        let s = pt.get("s").copied().unwrap_or(0);
        let k = pt.get("k").copied().unwrap_or(0);
        match self {
            FamilyKind::X3YsXyk | FamilyKind::X3Yz2 => s >= 4 && k < s && 3 * k > 2 * s,
            FamilyKind::X3y => s >= 5 && k < s && 3 * k > 2 * s + 1,
            FamilyKind::GenericE => s >= 4,
        }
    }

    /// Whether the rule predicts a jump at `pt` in characteristic `p`.
    pub fn fires(self, p: u64, pt: &Point) -> bool {
        if p == 0 || !self.in_cone(pt) {
            return false;
        }
        let p = p as i64;
        let s = pt.get("s").copied().unwrap_or(0);
        let k = pt.get("k").copied().unwrap_or(0);
        let n = match self {
            FamilyKind::X3YsXyk | FamilyKind::X3Yz2 => 3 * k - 2 * s,
            FamilyKind::X3y => 3 * k - 2 * s - 1,
            FamilyKind::GenericE => s,
        };
        n.rem_euclid(p) == 0
    }

    /// Reads the roles off the support of `f`, if `f` has this shape.
    pub fn read(self, f: &SeriesPoly) -> Option<Point> {
        let n = f.ring().nvars();
        let support: Vec<Vec<u32>> = f.support().map(|m| m.exps().to_vec()).collect();
        let (fixed, free): (&[&[u32]], usize) = match (self, n) {
            (FamilyKind::X3YsXyk, 2) => (&[&[3, 0]], 2),
            (FamilyKind::X3y, 2) => (&[&[3, 1]], 2),
            (FamilyKind::X3Yz2, 3) => (&[&[3, 0, 0], &[0, 1, 2]], 2),
            (FamilyKind::GenericE, 2) => (&[&[3, 0]], 1),
            _ => return None,
        };
        if support.len() != fixed.len() + free || fixed.iter().any(|m| !support.contains(&m.to_vec()))
        {
            return None;
        }
        let mut pt = Point::new();
        for e in support.iter().filter(|e| !fixed.contains(&e.as_slice())) {
            let rest_zero = e[2.min(n)..].iter().all(|&v| v == 0);
            match (e[0], rest_zero) {
                (0, true) if free >= 1 => pt.insert("s".into(), e[1] as i64),
                (1, true) if free == 2 => pt.insert("k".into(), e[1] as i64),
                _ => return None,
            };
        }
        (pt.len() == free).then_some(pt)
    }

    /// The first kind whose shape matches `f`.
    pub fn detect(f: &SeriesPoly) -> Option<(FamilyKind, Point)> {
        FamilyKind::ALL
            .into_iter()
            .find_map(|k| k.read(f).map(|pt| (k, pt)))
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::X3YsXyk => "x3-ys-xyk",
            FamilyKind::X3y => "x3y",
            FamilyKind::X3Yz2 => "x3-yz2",
            FamilyKind::GenericE => "generic-E",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = JumpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| JumpError::UnknownFamilyKind(s.to_string()))
    }
}

/// Points of the grid spanned by `ranges` (keyed by role name) where the
/// rule of `kind` fires in characteristic `p`. Pure integer arithmetic.
pub fn predict_jumps(
    kind: FamilyKind,
    p: u64,
    ranges: &[(String, Vec<i64>)],
) -> Result<Vec<Point>, JumpError> {
    if p <= 3 {
        return Err(JumpError::SmallCharacteristic(p));
    }
    let mut grid = vec![Point::new()];
    for role in kind.roles() {
        let values = ranges
            .iter()
            .find(|(n, _)| n == role)
            .map(|(_, v)| v)
            .ok_or_else(|| JumpError::MissingRange(role.to_string()))?;
        grid = grid
            .into_iter()
            .flat_map(|pt| {
                values.iter().map(move |&v| {
                    let mut q = pt.clone();
                    q.insert(role.to_string(), v);
                    q
                })
            })
            .collect();
    }
    Ok(grid.into_iter().filter(|pt| kind.fires(p, pt)).collect())
}

/// One scanned instance. `None` in `tau`/`tau_ext` marks a quotient that was
/// not certified finite within the cap; `jump` is then `None` as well.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub characteristic: u64,
    pub params: Point,
    pub tau: Option<usize>,
    pub tau_ext: Option<usize>,
    /// τ in this characteristic exceeds τ over ℚ at the same parameters.
    pub jump: Option<bool>,
    /// What the arithmetic rule says, when the instance has a known shape.
    pub predicted: Option<bool>,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub cap: u32,
    /// Largest number of rows a scan may produce.
    pub budget: usize,
    /// Rule for the predicted flag; detected from the shape when absent.
    pub kind: Option<FamilyKind>,
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            cap: 60,
            budget: 5000,
            kind: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Copy)]
struct Job<'a> {
    p: u64,
    point: &'a Point,
    ext: bool,
}

/// τ and τ^e for every characteristic and parameter point of `t`, sorted by
/// characteristic and then parameters.
pub fn scan_family(t: &FamilyTemplate, opts: &ScanOptions) -> Result<Vec<ScanRow>, JumpError> {
    let size = t.grid_size();
    if size > opts.budget {
        return Err(JumpError::BudgetExceeded {
            size,
            budget: opts.budget,
        });
    }
    let mut chars = t.chars.clone();
    chars.sort_unstable();
    chars.dedup();
    let fields: BTreeMap<u64, Field> = std::iter::once(0)
        .chain(chars.iter().copied())
        .map(|p| Field::from_characteristic(p).map(|f| (p, f)))
        .collect::<Result<_, _>>()?;
    let points = t.points();
    // instantiate everything up front so that template errors surface first
    let mut polys: BTreeMap<(u64, &Point), SeriesPoly> = BTreeMap::new();
    for pt in &points {
        for (&p, field) in &fields {
            polys.insert((p, pt), t.instantiate(field, pt)?);
        }
    }
    let mut jobs = Vec::new();
    for pt in &points {
        // the baseline over ℚ is computed once per point
        jobs.push(Job {
            p: 0,
            point: pt,
            ext: chars.contains(&0),
        });
        for &p in chars.iter().filter(|&&p| p != 0) {
            jobs.push(Job {
                p,
                point: pt,
                ext: true,
            });
        }
    }
    let results = run_jobs(&jobs, &polys, opts);
    let mut rows = Vec::new();
    for &p in &chars {
        for pt in &points {
            let (tp, te) = results[&(p, pt)];
            let t0 = results[&(0, pt)].0;
            let jump = if p == 0 {
                Some(false)
            } else {
                match (tp, t0) {
                    (Some(a), Some(b)) => Some(a > b),
                    _ => None,
                }
            };
            let q = &polys[&(0, pt)];
            let rule = match opts.kind {
                Some(k) => k.read(q).map(|roles| (k, roles)),
                None => FamilyKind::detect(q),
            };
            let predicted = rule.map(|(k, roles)| k.fires(p, &roles));
            rows.push(ScanRow {
                characteristic: p,
                params: pt.clone(),
                tau: tp,
                tau_ext: te,
                jump,
                predicted,
            });
        }
    }
    Ok(rows)
}

type Invariants = (Option<usize>, Option<usize>);

fn run_jobs<'a>(
    jobs: &[Job<'a>],
    polys: &BTreeMap<(u64, &'a Point), SeriesPoly>,
    opts: &ScanOptions,
) -> BTreeMap<(u64, &'a Point), Invariants> {
    let next = AtomicUsize::new(0);
    let out = Mutex::new(BTreeMap::new());
    let threads = opts.threads.clamp(1, jobs.len().max(1));
    std::thread::scope(|sc| {
        for _ in 0..threads {
            sc.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let f = &polys[&(job.p, job.point)];
                let t = tau(f, opts.cap).dimension;
                let e = if job.ext {
                    tau_ext(f, opts.cap).dimension
                } else {
                    None
                };
                out.lock().unwrap().insert((job.p, job.point), (t, e));
            });
        }
    });
    out.into_inner().unwrap()
}
