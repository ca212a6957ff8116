use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tjurina::classify::{
    check_table_conditions, classify_with, ClassificationVerdict, ClassifyError, ClassifyOptions,
    Params, TableCheck,
};
use tjurina::determinacy::{
    complete_transversal, determinacy_polytope, determinacy_tangent, semiuniversal_basis,
    DetError, Method,
};
use tjurina::field::{Field, FieldError, UPoly};
use tjurina::frontend::{
    emit, infer_vars, parse_poly, parse_range, parse_template, quotient_to_json, Format,
    ParseError, Report, ScanTable,
};
use tjurina::jumps::{scan_family, FamilyKind, JumpError, ScanOptions};
use tjurina::localalg::{
    default_cap, dim_tk, is_basis, membership, tau, tau_ext, IdealGens, LocalError, Membership,
    QuotientReport, Variant,
};
use tjurina::newton::{CPolytope, NewtonError};
use tjurina::acgrading::{regular_basis, AcError};
use tjurina::series::{Monomial, Ring, SeriesPoly};

#[derive(Parser)]
#[command(
    name = "tjurina",
    version,
    about = "Tjurina numbers, determinacy and unimodal classification of hypersurface singularities"
)]
struct Cli {
    /// Characteristic of the ground field; 0 means the rationals.
    #[arg(long = "char", global = true, default_value_t = 0)]
    characteristic: u64,
    /// Irreducible monic modulus for an extension of F_p, e.g. "a^2+2".
    #[arg(long, global = true)]
    ext: Option<String>,
    /// Comma-separated variable names; inferred from x, y, z when omitted.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Vec<String>,
    /// Degree cap for the quotient computations.
    #[arg(long, global = true)]
    trunc: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// text, json or csv.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum DetMethod {
    Tangent,
    Polytope,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tjurina number with its standard monomials.
    Tau { poly: String },
    /// Dimension of the extended Tjurina algebra.
    TauExt { poly: String },
    /// Dimension of R / <f, m^k j(f)>.
    Tk {
        #[arg(long)]
        k: u32,
        poly: String,
    },
    /// Whether the given monomials form a basis of the (extended) Tjurina algebra.
    Basis {
        poly: String,
        /// Comma-separated monomials, e.g. "1,y,y^2,x".
        #[arg(long, value_delimiter = ',', required = true)]
        monomials: Vec<String>,
        #[arg(long)]
        extended: bool,
    },
    /// Membership of h in the ideal spanned by the given generators.
    Membership {
        h: String,
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// A determinacy bound.
    Determinacy {
        poly: String,
        #[arg(long, value_enum, default_value = "tangent")]
        method: DetMethod,
    },
    /// Facets, weights, N_P and v_P(f) of the Newton diagram.
    Newton {
        poly: String,
        /// Extra point enlarging the support, e.g. "3/2,4". Repeatable.
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Initial part with respect to the Newton diagram.
    Inpart {
        poly: String,
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Regular basis of the graded Tjurina algebra.
    Regbasis {
        poly: String,
        #[arg(long = "point")]
        points: Vec<String>,
    },
    /// Complete transversal between jet orders k and l.
    Transversal {
        poly: String,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// Monomial basis of a semiuniversal unfolding.
    Semiuniversal { poly: String },
    /// Classify a singularity of corank at most 3.
    Classify { poly: String },
    /// Evaluate the unimodality conditions of one table row.
    Check {
        #[arg(long)]
        symbol: String,
        /// Integer parameter, e.g. s=30. Repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Tabulate τ and τ^e over a template family.
    Scan {
        #[arg(long)]
        template: String,
        /// Placeholder range: r=13, k=14..24 or k=1,3,5. Repeatable.
        #[arg(long = "range")]
        ranges: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        chars: Vec<u64>,
        /// Jump rule: x3-ys-xyk, x3y, x3-yz2 or generic-E.
        #[arg(long)]
        kind: Option<FamilyKind>,
        #[arg(long, default_value_t = 5000)]
        budget: usize,
    },
}

/// Failures sorted by exit code.
enum Failure {
    Parse(String),
    Uncertified(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Uncertified(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Uncertified(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Precondition(e.to_string())
    }
}

impl From<LocalError> for Failure {
    fn from(e: LocalError) -> Self {
        match e {
            LocalError::Uncertified(_) => Failure::Uncertified(e.to_string()),
            LocalError::RingMismatch => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<NewtonError> for Failure {
    fn from(e: NewtonError) -> Self {
        Failure::Precondition(e.to_string())
    }
}

impl From<AcError> for Failure {
    fn from(e: AcError) -> Self {
        match e {
            AcError::ZeroSeries => Failure::Precondition(e.to_string()),
            _ => Failure::Uncertified(e.to_string()),
        }
    }
}

impl From<DetError> for Failure {
    fn from(e: DetError) -> Self {
        match e {
            DetError::NotIsolated(_) | DetError::BadRange(..) | DetError::ZeroSeries => {
                Failure::Precondition(e.to_string())
            }
            _ => Failure::Uncertified(e.to_string()),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::BudgetExhausted(_)
            | ClassifyError::NoMatch(_)
            | ClassifyError::RootsUnavailable(_)
            | ClassifyError::ObstructedScaling(_)
            | ClassifyError::Determinacy(_)
            | ClassifyError::Graded(_) => Failure::Uncertified(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

impl From<JumpError> for Failure {
    fn from(e: JumpError) -> Self {
        match e {
            JumpError::Parse(p) => p.into(),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

/// A printed report plus whether the result counts as certified.
struct Outcome {
    report: Box<dyn Report>,
    certified: bool,
}

impl Outcome {
    fn ok(report: impl Report + 'static) -> Self {
        Outcome {
            report: Box::new(report),
            certified: true,
        }
    }
}

struct Ctx {
    field: Field,
    vars: Vec<String>,
    trunc: Option<u32>,
    seed: u64,
}

impl Ctx {
    fn ring(&self, texts: &[&str]) -> Ring {
        let vars = if self.vars.is_empty() {
            infer_vars(&texts.concat())
        } else {
            self.vars.clone()
        };
        Ring::new(self.field.clone(), &vars)
    }

    fn cap(&self, ring: &Ring) -> u32 {
        self.trunc.unwrap_or_else(|| default_cap(ring.nvars()))
    }
}

fn build_field(p: u64, ext: Option<&str>) -> Result<Field, Failure> {
    let base = Field::from_characteristic(p)?;
    let Some(text) = ext else { return Ok(base) };
    let name: String = text
        .chars()
        .skip_while(|c| !c.is_alphabetic())
        .take_while(|c| c.is_alphanumeric())
        .collect();
    if name.is_empty() {
        return Err(Failure::Parse(format!("modulus `{text}` names no generator")));
    }
    let ring = Ring::new(base.clone(), &[name.as_str()]);
    let m = parse_poly(text, &ring)?;
    let deg = m.max_degree().unwrap_or(0) as usize;
    let coeffs = (0..=deg)
        .map(|i| m.coeff(&Monomial::new(vec![i as u32])))
        .collect();
    Ok(Field::extension(&base, UPoly::new(&base, coeffs), &name)?)
}

fn parse_monomial(text: &str, ring: &Ring) -> Result<Monomial, Failure> {
    let f = parse_poly(text, ring)?;
    let m = match f.terms().next() {
        Some((m, c)) if f.len() == 1 && ring.field().is_one(c) => Some(m.clone()),
        _ => None,
    };
    m.ok_or_else(|| Failure::Parse(format!("`{text}` is not a monomial")))
}

/// `"3/2,4"` as a rational point.
fn parse_point(text: &str) -> Result<Vec<num_rational::Rational64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::Parse(format!("bad point coordinate `{s}`")))
        })
        .collect()
}

fn polytope(f: &SeriesPoly, points: &[String]) -> Result<CPolytope, Failure> {
    if points.is_empty() {
        return Ok(CPolytope::newton_diagram(f)?);
    }
    let extra = points
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CPolytope::expand_diagram(f, &extra)?)
}

fn monomial_list(ms: &[Monomial], vars: &[String]) -> Vec<String> {
    ms.iter().map(|m| m.format(vars)).collect()
}

fn quotient(name: &str, r: &QuotientReport, vars: &[String]) -> Outcome {
    let mut ms = r.standard_monomials.clone();
    ms.sort();
    let text = match r.dimension {
        Some(d) => format!(
            "{name} = {d} (certificate degree {})\nstandard monomials: {}",
            r.certificate_degree.unwrap_or_default(),
            monomial_list(&ms, vars).join(", ")
        ),
        None => format!("{name}: not certified finite below degree {}", r.cap_used),
    };
    Outcome {
        report: Box::new((text, quotient_to_json(r, vars))),
        certified: r.is_finite(),
    }
}

fn check_report(symbol: &str, p: u64, c: &TableCheck) -> (String, Value) {
    let evaluations: Vec<Value> = c
        .evaluations()
        .iter()
        .map(|e| json!({"condition": e.condition, "holds": e.holds}))
        .collect();
    match c {
        TableCheck::Unimodal { .. } => (
            format!("{symbol} over characteristic {p}: Unimodal"),
            json!({"symbol": symbol, "char": p, "verdict": "Unimodal", "evaluations": evaluations}),
        ),
        TableCheck::Rejected {
            reason, witness, ..
        } => {
            let w = witness.as_ref().map(|w| {
                json!({"condition": w.condition.to_string(), "clause": format!("{:?}", w.clause), "u": w.u, "v": w.v})
            });
            (
                format!("{symbol} over characteristic {p}: Rejected ({reason})"),
                json!({
                    "symbol": symbol,
                    "char": p,
                    "verdict": "Rejected",
                    "reason": reason,
                    "witness": w,
                    "evaluations": evaluations,
                }),
            )
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cx = Ctx {
        field: build_field(cli.characteristic, cli.ext.as_deref())?,
        vars: cli.vars.clone(),
        trunc: cli.trunc,
        seed: cli.seed,
    };
    let poly = |text: &str| -> Result<(Ring, SeriesPoly), Failure> {
        let ring = cx.ring(&[text]);
        let f = parse_poly(text, &ring)?.exact();
        Ok((ring, f))
    };
    match &cli.cmd {
        Cmd::Tau { poly: t } => {
            let (r, f) = poly(t)?;
            Ok(quotient("tau", &tau(&f, cx.cap(&r)), r.vars()))
        }
        Cmd::TauExt { poly: t } => {
            let (r, f) = poly(t)?;
            Ok(quotient("tau_ext", &tau_ext(&f, cx.cap(&r)), r.vars()))
        }
        Cmd::Tk { k, poly: t } => {
            let (r, f) = poly(t)?;
            Ok(quotient(&format!("T_{k}"), &dim_tk(&f, *k, cx.cap(&r)), r.vars()))
        }
        Cmd::Basis {
            poly: t,
            monomials,
            extended,
        } => {
            let (r, f) = poly(t)?;
            let ms = monomials
                .iter()
                .map(|m| parse_monomial(m, &r))
                .collect::<Result<Vec<_>, _>>()?;
            let variant = if *extended {
                Variant::Extended
            } else {
                Variant::Tjurina
            };
            let ok = is_basis(&f, variant, &ms, cx.cap(&r))?;
            Ok(Outcome::ok((
                format!("is basis: {ok}"),
                json!({"is_basis": ok, "monomials": monomial_list(&ms, r.vars())}),
            )))
        }
        Cmd::Membership { h, gens } => {
            let mut texts: Vec<&str> = gens.iter().map(String::as_str).collect();
            texts.push(h);
            let r = cx.ring(&texts);
            let hp = parse_poly(h, &r)?.exact();
            let gs = gens
                .iter()
                .map(|g| parse_poly(g, &r).map(SeriesPoly::exact))
                .collect::<Result<Vec<_>, _>>()?;
            let ideal = IdealGens::new(&r, gs)?;
            let (text, v, certified) = match membership(&hp, &ideal, cx.cap(&r)) {
                Membership::InIdeal { certificate_degree } => (
                    "in ideal".to_string(),
                    json!({"in_ideal": true, "certified": true, "certificate_degree": certificate_degree}),
                    true,
                ),
                Membership::NotInIdeal { certified } => (
                    if certified {
                        "not in ideal".to_string()
                    } else {
                        "not found in ideal below the degree cap (uncertified)".to_string()
                    },
                    json!({"in_ideal": false, "certified": certified, "certificate_degree": null}),
                    certified,
                ),
            };
            Ok(Outcome {
                report: Box::new((text, v)),
                certified,
            })
        }
        Cmd::Determinacy { poly: t, method } => {
            let (r, f) = poly(t)?;
            let b = match method {
                DetMethod::Tangent => determinacy_tangent(&f, cx.cap(&r))?,
                DetMethod::Polytope => {
                    let p = CPolytope::newton_diagram(&f)?;
                    determinacy_polytope(&f, &p, valuation_cap(&cx, &r, &p))?
                }
            };
            let (text, v) = match b.method {
                Method::TangentImage { k0 } => (
                    format!("{}-determined (tangent image contains m^{})", b.k, k0 + 2),
                    json!({"k": b.k, "method": "tangent", "k0": k0}),
                ),
                Method::Polytope { d, witness } => (
                    format!("{}-determined (max regular valuation {d} < {witness})", b.k),
                    json!({"k": b.k, "method": "polytope", "d": d, "witness": witness}),
                ),
            };
            Ok(Outcome::ok((text, v)))
        }
        Cmd::Newton { poly: t, points } => {
            let (_, f) = poly(t)?;
            let p = polytope(&f, points)?;
            let vf = p.v_series(&f);
            let facets: Vec<Value> = p
                .weights()
                .iter()
                .map(|w| {
                    let normalized: Vec<String> = w
                        .iter()
                        .map(|&x| num_rational::Rational64::new(x, p.scale()).to_string())
                        .collect();
                    json!({"weight": w, "normalized": normalized})
                })
                .collect();
            let mut text = String::new();
            for w in p.weights() {
                text.push_str(&format!("facet weight {w:?}\n"));
            }
            text.push_str(&format!("N_P = {}\n", p.scale()));
            if let Some(v) = vf {
                text.push_str(&format!("v_P(f) = {v}"));
            }
            Ok(Outcome::ok((
                text,
                json!({"facets": facets, "N_P": p.scale(), "v_P": vf}),
            )))
        }
        Cmd::Inpart { poly: t, points } => {
            let (_, f) = poly(t)?;
            let p = polytope(&f, points)?;
            let g = p.initial_part(&f);
            Ok(Outcome::ok((
                g.to_text(),
                json!({"initial_part": g.to_text(), "v_P": p.v_series(&f)}),
            )))
        }
        Cmd::Regbasis { poly: t, points } => {
            let (r, f) = poly(t)?;
            let p = polytope(&f, points)?;
            let rb = regular_basis(&f, &p, valuation_cap(&cx, &r, &p), false)?;
            let items: Vec<Value> = rb
                .monomials
                .iter()
                .map(|(m, v)| json!({"monomial": m.format(r.vars()), "valuation": v}))
                .collect();
            let text = rb
                .monomials
                .iter()
                .map(|(m, v)| format!("{}\t{v}", m.format(r.vars())))
                .chain([format!(
                    "window [{}, {}]",
                    rb.certificate_window.0, rb.certificate_window.1
                )])
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok((
                text,
                json!({
                    "monomials": items,
                    "finite": rb.finite,
                    "certificate_window": [rb.certificate_window.0, rb.certificate_window.1],
                }),
            )))
        }
        Cmd::Transversal { poly: t, from, to } => {
            let (r, f) = poly(t)?;
            let c = complete_transversal(&f, *from, *to)?;
            let ms = monomial_list(&c.basis, r.vars());
            Ok(Outcome::ok((
                format!("transversal ({from},{to}): {{{}}}", ms.join(", ")),
                json!({
                    "k": c.k,
                    "l": c.l,
                    "basis": ms,
                    "codim": c.codim(),
                    "tangent_dim": c.tangent_dim,
                    "layer_dim": c.layer_dim,
                }),
            )))
        }
        Cmd::Semiuniversal { poly: t } => {
            let (r, f) = poly(t)?;
            let ms = monomial_list(&semiuniversal_basis(&f, cx.cap(&r))?, r.vars());
            let text = if ms.is_empty() {
                f.to_text()
            } else {
                format!("{} + {}", f.to_text(), ms.iter().enumerate().map(|(i, m)| format!("t{}*{m}", i + 1)).collect::<Vec<_>>().join(" + "))
            };
            Ok(Outcome::ok((text, json!({"monomials": ms}))))
        }
        Cmd::Classify { poly: t } => {
            let (_, f) = poly(t)?;
            let opts = ClassifyOptions {
                seed: cx.seed,
                cap: cx.trunc,
                ..Default::default()
            };
            let c = classify_with(&f, &opts)?;
            let certified = !matches!(c.verdict, ClassificationVerdict::Undetermined { .. });
            Ok(Outcome {
                report: Box::new(c),
                certified,
            })
        }
        Cmd::Check {
            symbol,
            params,
            lambda,
        } => {
            let mut ps = Params::default();
            for p in params {
                let (name, v) = p
                    .split_once('=')
                    .ok_or_else(|| Failure::Parse(format!("bad parameter `{p}`")))?;
                let v: i64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Failure::Parse(format!("bad parameter `{p}`")))?;
                ps.ints.insert(name.trim().to_string(), v);
            }
            if let Some(l) = lambda {
                let r = Ring::new(cx.field.clone(), &["x"]);
                let c = parse_poly(l, &r)?;
                if c.ord().is_some_and(|o| o > 0) {
                    return Err(Failure::Parse(format!("λ = `{l}` is not a constant")));
                }
                ps = ps.with_lambda(cx.field.element(c.constant_term()));
            }
            let p = cx.field.characteristic();
            let c = check_table_conditions(symbol, &ps, p)?;
            Ok(Outcome::ok(check_report(symbol, p, &c)))
        }
        Cmd::Scan {
            template,
            ranges,
            chars,
            kind,
            budget,
        } => {
            let ranges = ranges
                .iter()
                .map(|r| parse_range(r))
                .collect::<Result<Vec<_>, _>>()?;
            let vars = if cx.vars.is_empty() {
                infer_vars(template)
            } else {
                cx.vars.clone()
            };
            let t = parse_template(template, &vars, &ranges, chars)?;
            let mut opts = ScanOptions {
                budget: *budget,
                kind: *kind,
                ..Default::default()
            };
            if let Some(cap) = cx.trunc {
                opts.cap = cap;
            }
            let rows = scan_family(&t, &opts)?;
            let certified = rows.iter().all(|r| r.tau.is_some());
            Ok(Outcome {
                report: Box::new(ScanTable(rows)),
                certified,
            })
        }
    }
}

/// Valuation cap for graded computations: the degree cap times the largest
/// variable value.
fn valuation_cap(cx: &Ctx, r: &Ring, p: &CPolytope) -> i64 {
    let top = p.var_values().into_iter().max().unwrap_or(1);
    cx.cap(r) as i64 * top
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let bytes = emit(out.report.as_ref(), cli.format);
            let _ = std::io::stdout().write_all(&bytes);
            if out.certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
