//! The `loopspace` command line: argument parsing, dispatch, and the text and
//! JSON renderings of every result.
//!
//! [`run`] is the whole program minus process I/O, so tests drive it
//! directly. Output is a pure function of the arguments.

use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use loopspace::acceptance::{self, CriterionReport};
use loopspace::ccnf::{cc_factor, CCNormalForm};
use loopspace::classify::{census_classes, classify_family, pi0_census};
use loopspace::covers::{count_homs, surface_relation, GeneratorAssignment, Perm};
use loopspace::curve::{check_on_curve, classify, lift_x_to_loop, ComponentClass, CurveModel, Loop};
use loopspace::forms::{residue_along, residue_at_place, third_kind};
use loopspace::par::Strategy;
use loopspace::ring::RingDescriptor;
use loopspace::series::{Branch, Precision};
use loopspace::syntax::{parse_curve, parse_form, parse_place, parse_rational_list, parse_ring, parse_series};
use loopspace::{Error, DEFAULT_TERMS};

pub mod golden;
pub mod roundtrip;

#[derive(Parser, Debug)]
#[command(name = "loopspace", version, about = "Connected components of loop spaces of affine curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Terms kept when an exact input expands to an infinite series.
    #[arg(long, global = true, default_value_t = DEFAULT_TERMS)]
    prec: u32,
    /// Coefficient ring: rational, poly, or nilpotent:k. Inferred when absent.
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an invertible Laurent series.
    Factor {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Component of a loop.
    Classify(LoopArgs),
    /// Components modulo coverings.
    Census {
        #[arg(long)]
        curve: String,
    },
    /// Components of the fibres of a family over ℚ[t].
    Family {
        #[command(flatten)]
        lp: LoopArgs,
        /// Comma-separated parameter values.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Residue of a form along a loop or at a place.
    Residue {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// A place: `a`, `(a,b)`, or a puncture `0`, `inf`, `inf+`, `inf-`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "x")]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "at")]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        branch: Option<String>,
    },
    /// Verified form with residues +1 at p and -1 at q.
    Thirdkind {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Homomorphism counts from surface and free groups into S_n.
    Covers {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        symmetric: usize,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Run one criterion (1 to 9).
        #[arg(long)]
        criterion: Option<u8>,
        /// Disable data parallelism.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args, Debug)]
struct LoopArgs {
    #[arg(long)]
    curve: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Explicit y series; otherwise y is solved from x.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Sign of the leading coefficient of the solved y: `+` or `-`.
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<String>,
}

/// Exit status and the text the process prints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug)]
enum Failure {
    Parse(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse_error() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

/// A result in both renderings.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: EXIT_OK }
    }
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("loopspace".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return Outcome {
                code,
                output: e.render().to_string(),
            };
        }
    };
    let json = cli.json;
    match dispatch(&cli) {
        Ok(report) => Outcome {
            code: report.code,
            output: if json {
                pretty(&report.json)
            } else {
                report.text
            },
        },
        Err(failure) => {
            let (code, kind, msg) = match failure {
                Failure::Parse(m) => (EXIT_PARSE, "parse", m),
                Failure::Domain(m) => (EXIT_DOMAIN, "domain", m),
            };
            let output = if json {
                pretty(&json!({ "error": msg, "kind": kind }))
            } else {
                format!("error: {msg}\n")
            };
            Outcome { code, output }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let ring = cli.ring.as_deref().map(parse_ring).transpose()?;
    let terms = cli.prec;
    match &cli.command {
        Command::Factor { series } => factor(series, ring, terms),
        Command::Classify(lp) => {
            let lp = build_loop(lp, ring, terms)?;
            let class = classify(&lp)?;
            Ok(Report::ok(format!("{class}\n"), class_json(&class)))
        }
        Command::Census { curve } => census(curve),
        Command::Family { lp, t } => family(lp, t, terms),
        Command::Residue { curve, form, at, x, y, branch } => {
            let curve = Arc::new(parse_curve(curve)?);
            let form = parse_form(form, &curve)?;
            let value = match (at, x) {
                (Some(at), _) => residue_at_place(&form, &parse_place(at)?, terms)?.to_string(),
                (None, Some(x)) => {
                    let args = LoopArgs {
                        curve: String::new(),
                        x: x.clone(),
                        y: y.clone(),
                        branch: branch.clone(),
                    };
                    let lp = loop_on(&curve, &args, ring, terms)?;
                    residue_along(&form, &lp, terms)?.to_string()
                }
                (None, None) => unreachable!("clap requires --at or --x"),
            };
            Ok(Report::ok(
                format!("residue={value}\n"),
                json!({ "form": form.to_string(), "residue": value }),
            ))
        }
        Command::Thirdkind { curve, p, q } => {
            let curve = Arc::new(parse_curve(curve)?);
            let (p, q) = (parse_place(p)?, parse_place(q)?);
            let tk = third_kind(&curve, &p, &q, terms)?;
            let mut text = format!("form={}\n", tk.form);
            for (place, r) in &tk.residues {
                text.push_str(&format!("residue {place}={r}\n"));
            }
            let sum: loopspace::Rat = tk.residues.iter().map(|(_, r)| r.clone()).sum();
            text.push_str(&format!("sum={sum}\n"));
            let residues: Vec<Value> = tk
                .residues
                .iter()
                .map(|(place, r)| json!({ "place": place.to_string(), "residue": r.to_string() }))
                .collect();
            Ok(Report::ok(
                text,
                json!({ "form": tk.form.to_string(), "residues": residues, "sum": sum.to_string() }),
            ))
        }
        Command::Covers { genus, symmetric } => covers(*genus, *symmetric),
        Command::Selftest { criterion, sequential } => {
            let strategy = if *sequential { Strategy::Sequential } else { Strategy::default() };
            Ok(selftest(*criterion, strategy))
        }
    }
}

fn factor(text: &str, ring: Option<RingDescriptor>, terms: u32) -> Result<Report, Failure> {
    let series = parse_series(text, ring, terms)?;
    let nf = cc_factor(&series, terms)?;
    Ok(Report::ok(format!("{nf}\n"), normal_form_json(&nf)))
}

fn normal_form_json(nf: &CCNormalForm) -> Value {
    let map = |m: &std::collections::BTreeMap<i64, loopspace::ring::Coeff>| {
        Value::Object(m.iter().map(|(i, c)| (i.to_string(), Value::String(c.to_string()))).collect())
    };
    json!({
        "ring": nf.ring().to_string(),
        "unit": nf.unit.to_string(),
        "order": nf.order,
        "neg": map(&nf.neg),
        "pos": map(&nf.pos),
        "prec": match nf.prec {
            Precision::Finite(n) => Value::from(n),
            Precision::Exact => Value::Null,
        },
    })
}

fn class_json(class: &ComponentClass) -> Value {
    match class {
        ComponentClass::Arc => json!({ "class": "Arc" }),
        ComponentClass::Pole { puncture, order } => {
            json!({ "class": "Pole", "puncture": puncture.as_str(), "order": order })
        }
        ComponentClass::A1Connected { has_pole } => json!({ "class": "A1", "has_pole": has_pole }),
    }
}

fn parse_branch(text: Option<&str>) -> Result<Branch, Failure> {
    match text.map(str::trim) {
        None | Some("+") | Some("plus") => Ok(Branch::Plus),
        Some("-") | Some("minus") => Ok(Branch::Minus),
        Some(other) => Err(Failure::Parse(format!("branch must be + or -, got {other:?}"))),
    }
}

fn build_loop(args: &LoopArgs, ring: Option<RingDescriptor>, terms: u32) -> Result<Loop, Failure> {
    let curve = Arc::new(parse_curve(&args.curve)?);
    loop_on(&curve, args, ring, terms)
}

/// The loop given by `--x` and either `--y` or `--branch`; an explicit `y`
/// must satisfy the curve equation.
fn loop_on(curve: &Arc<CurveModel>, args: &LoopArgs, ring: Option<RingDescriptor>, terms: u32) -> Result<Loop, Failure> {
    let x = parse_series(&args.x, ring, terms)?;
    let ring = Some(ring.unwrap_or(x.ring()));
    if !curve.is_hyperelliptic() {
        if args.y.is_some() || args.branch.is_some() {
            return Err(Failure::Domain(format!("{curve} has no y coordinate")));
        }
        return Ok(Loop::new(Arc::clone(curve), x, None)?);
    }
    match &args.y {
        Some(y) => {
            if args.branch.is_some() {
                return Err(Failure::Domain("give either --y or --branch, not both".into()));
            }
            let lp = Loop::new(Arc::clone(curve), x, Some(parse_series(y, ring, terms)?))?;
            if !check_on_curve(&lp)? {
                return Err(Error::NotOnCurve(format!("y^2 differs from h(x) along {lp}")).into());
            }
            Ok(lp)
        }
        None => Ok(lift_x_to_loop(curve, x, parse_branch(args.branch.as_deref())?, terms)?),
    }
}

fn census(curve: &str) -> Result<Report, Failure> {
    let curve = parse_curve(curve)?;
    let count = pi0_census(&curve);
    let classes: Vec<String> = match census_classes(&curve) {
        c if c.is_empty() => vec!["A1 connected".to_string()],
        c => c.iter().map(ToString::to_string).collect(),
    };
    let mut text = format!("classes={count}\n");
    for c in &classes {
        text.push_str(c);
        text.push('\n');
    }
    Ok(Report::ok(text, json!({ "curve": curve.to_string(), "classes": count, "list": classes })))
}

fn family(args: &LoopArgs, t: &str, terms: u32) -> Result<Report, Failure> {
    let lp = build_loop(args, Some(RingDescriptor::PolyParam), terms)?;
    let ts = parse_rational_list(t)?;
    let report = classify_family(&lp, &ts)?;
    let mut text = String::new();
    let mut fibers = Vec::new();
    for (t, c) in &report.fibers {
        match c {
            Ok(c) => {
                text.push_str(&format!("t={t} {c}\n"));
                let mut v = class_json(c);
                v["t"] = Value::String(t.to_string());
                fibers.push(v);
            }
            Err(e) => {
                text.push_str(&format!("t={t} error: {e}\n"));
                fibers.push(json!({ "t": t.to_string(), "error": e.to_string() }));
            }
        }
    }
    let generic = match &report.generic {
        Ok(c) => {
            text.push_str(&format!("generic {c}\n"));
            class_json(c)
        }
        Err(e) => {
            text.push_str(&format!("generic error: {e}\n"));
            json!({ "error": e.to_string() })
        }
    };
    let jumps: Vec<String> = report.jumps().iter().map(ToString::to_string).collect();
    if jumps.is_empty() {
        text.push_str("jumps=none\n");
    } else {
        text.push_str(&format!("jumps={}\n", jumps.join(",")));
    }
    Ok(Report::ok(text, json!({ "fibers": fibers, "generic": generic, "jumps": jumps })))
}

fn covers(genus: usize, n: usize) -> Result<Report, Failure> {
    let counts = count_homs(genus, n)?;
    let nonsurjective = counts.witnesses_nonsurjectivity();
    let mut text = format!(
        "free_count={}\nsurface_count={}\nnonsurjective={nonsurjective}\n",
        counts.free, counts.surface
    );
    let mut out = json!({
        "genus": genus,
        "symmetric": n,
        "free_count": counts.free.to_string(),
        "surface_count": counts.surface.to_string(),
        "nonsurjective": nonsurjective,
    });
    // α₁ ↦ (12), β₁ ↦ (123) inside S_n
    if n >= 3 {
        let mut images = vec![Perm::identity(n); 2 * genus];
        images[0] = Perm::from_cycles(n, &[&[1, 2]])?;
        images[1] = Perm::from_cycles(n, &[&[1, 2, 3]])?;
        let witness = GeneratorAssignment::new(genus, images)?;
        let relation = surface_relation(&witness);
        text.push_str(&format!("witness {witness}\nrelation={relation}\n"));
        out["witness"] = Value::String(witness.to_string());
        out["relation"] = Value::String(relation.to_string());
    } else {
        text.push_str("witness none\n");
        out["witness"] = Value::Null;
    }
    Ok(Report::ok(text, out))
}

/// Criterion 9: the golden corpus reproduces byte for byte, and printed
/// values parse back to themselves.
pub fn cli_criterion() -> CriterionReport {
    let outcome = golden::check(golden::CORPUS).and_then(|cases| {
        roundtrip::check_all(acceptance::SEED, 200).map(|n| format!("{cases} golden cases, {n} round-trips"))
    });
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionReport {
        id: 9,
        title: acceptance::title(9),
        passed,
        detail,
    }
}

/// Criteria 1 to 9, or just `only`.
pub fn acceptance_reports(only: Option<u8>, strategy: Strategy) -> Vec<CriterionReport> {
    match only {
        Some(9) => vec![cli_criterion()],
        Some(id) => vec![acceptance::run_criterion(id, strategy)],
        None => {
            let mut all = acceptance::run_all(strategy);
            all.push(cli_criterion());
            all
        }
    }
}

fn selftest(only: Option<u8>, strategy: Strategy) -> Report {
    let reports = acceptance_reports(only, strategy);
    let passed = reports.iter().filter(|r| r.passed).count();
    let mut text: String = reports.iter().map(|r| format!("{r}\n")).collect();
    text.push_str(&format!("selftest: {passed}/{} passed\n", reports.len()));
    let json = json!({
        "criteria": reports
            .iter()
            .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail }))
            .collect::<Vec<_>>(),
        "passed": passed,
        "total": reports.len(),
    });
    Report {
        text,
        json,
        code: if passed == reports.len() { EXIT_OK } else { EXIT_DOMAIN },
    }
}
