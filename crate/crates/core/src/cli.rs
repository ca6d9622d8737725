//! Command-line front end.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arith::{to_f64, BigRational, RatFun};
use crate::combinat::Partition;
use crate::error::{Error, Result};
use crate::invariant::{self, diagrams, FanSpec, XSpec};
use crate::montecarlo::{estimate_moment, estimate_sphere_moment, SamplerConfig};
use crate::query::{canonicalize, IndexSet, MomentQuery};
use crate::sphere::sphere_moment;
use crate::suites::{run_suite, SUITES};
use crate::weingarten::{self, MomentValue, NMode};

#[derive(Parser, Debug)]
#[command(
    name = "haar-moments",
    version,
    about = "Exact Haar and sphere moments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Exact,
    Symbolic,
    Float,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Group,
    Invariant,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Group => "group",
            Method::Invariant => "invariant",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate <I,J|K,L>. Without --n the result is a function of n.
    Moment {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "I", value_parser = parse_indices, default_value = "")]
        i: IndexSet,
        #[arg(long = "J", value_parser = parse_indices, default_value = "")]
        j: IndexSet,
        #[arg(long = "K", value_parser = parse_indices, default_value = "")]
        k: IndexSet,
        #[arg(long = "L", value_parser = parse_indices, default_value = "")]
        l: IndexSet,
        /// Keep n symbolic even if --n is given.
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
        /// One query JSON per line; one result JSON per line.
        #[arg(long)]
        batch: Option<String>,
    },
    /// Class integral xi(c) for a cycle type such as 2,1.
    Wg {
        /// Degree; must match the weight of --class when given.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long = "class")]
        class: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
    },
    /// Fan integral F(m_1, ..., m_t).
    Fan {
        #[arg(long, value_parser = parse_indices)]
        m: IndexSet,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
    },
    /// Z integral Z(m1, m2, m3).
    Zint {
        #[arg(long, value_parser = parse_indices)]
        m: IndexSet,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
    },
    /// X integral with weights r,s,t,u,r',s',t',u'.
    Xint {
        #[arg(long, value_parser = parse_indices)]
        w: IndexSet,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
    },
    /// Monomial integral over the unit sphere in R^n.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_indices)]
        exponents: IndexSet,
        #[arg(long, value_enum, default_value_t = Output::Exact)]
        output: Output,
    },
    /// Monte Carlo estimate of a unitary moment, or of a sphere monomial
    /// with --exponents and --n.
    Mc {
        /// Query JSON, e.g. {"n":2,"I":[1,2],"J":[1,2],"K":[1,2],"L":[2,1]}
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_parser = parse_indices)]
        exponents: Option<IndexSet>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Output::Json)]
        output: Output,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
    },
}

fn parse_indices(s: &str) -> std::result::Result<IndexSet, String> {
    IndexSet::parse(s).map_err(|e| e.to_string())
}

/// Caps the global thread pool from `HAAR_MOMENTS_THREADS`.
pub fn configure_threads() {
    if let Some(k) = std::env::var("HAAR_MOMENTS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
    {
        // fails only if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global();
    }
}

/// 15 significant digits.
pub fn format_float(x: f64) -> String {
    let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// A computed value with where it came from.
#[derive(Clone, Debug)]
pub struct Computed {
    pub query: Value,
    pub method: String,
    pub value: MomentValue,
    pub validity_min_n: Option<i64>,
}

fn value_json(v: &MomentValue) -> Value {
    match v {
        MomentValue::Exact(q) => json!({
            "kind": "rational",
            "value": q.to_string(),
            "float": to_f64(q),
        }),
        MomentValue::Symbolic(f) => json!({
            "kind": "ratfun",
            "value": f.to_string(),
            "num": f.num().to_string(),
            "den": f.den().to_string(),
        }),
    }
}

impl Computed {
    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "query": self.query,
            "method": self.method,
            "value": value_json(&self.value),
        });
        if let Some(v) = self.validity_min_n {
            out["validity_min_n"] = json!(v);
        }
        out
    }

    pub fn render(&self, output: Output) -> Result<String> {
        match (output, &self.value) {
            (Output::Json, _) => Ok(self.to_json().to_string()),
            (Output::Float, MomentValue::Exact(q)) => Ok(format_float(to_f64(q))),
            (Output::Float, MomentValue::Symbolic(_)) => Err(Error::InvalidParameter(
                "float output needs a fixed n".into(),
            )),
            (_, v) => Ok(v.to_string()),
        }
    }
}

fn mode_for(n: Option<u32>, output: Output) -> NMode {
    match (n, output) {
        (Some(n), o) if o != Output::Symbolic => NMode::Fixed(n),
        _ => NMode::Symbolic,
    }
}

fn closed_value(f: RatFun, mode: NMode) -> Result<(MomentValue, Option<i64>)> {
    let min = f.validity_min_n();
    Ok(match mode {
        NMode::Symbolic => (MomentValue::Symbolic(f), Some(min)),
        NMode::Fixed(n) => (MomentValue::Exact(f.eval(n as i64)?), Some(min)),
    })
}

/// The `moment` pipeline for one query.
pub fn compute_moment(q: &MomentQuery, symbolic: bool, method: Method) -> Result<Computed> {
    if q.n < 1 {
        return Err(Error::InvalidSize);
    }
    let mode = if symbolic {
        NMode::Symbolic
    } else {
        NMode::Fixed(u32::try_from(q.n).map_err(|_| Error::InvalidSize)?)
    };
    let query = serde_json::to_value(q).expect("query serializes");
    let canonical = canonicalize(q)?;
    let group = |canonical| -> Result<Computed> {
        let value = weingarten::moment(&canonical, mode)?;
        let validity_min_n = match &value {
            MomentValue::Symbolic(f) if !f.is_zero() => Some(f.validity_min_n()),
            _ => None,
        };
        Ok(Computed {
            query: query.clone(),
            method: Method::Group.name().into(),
            value,
            validity_min_n,
        })
    };
    if method == Method::Group {
        return group(canonical);
    }
    if canonical.zero || canonical.p == 0 {
        let mut c = group(canonical)?;
        c.method = method.name().into();
        return Ok(c);
    }
    match diagrams::recognize(q)? {
        Some(form) => {
            let f = form.value();
            let usable = match mode {
                NMode::Symbolic => true,
                NMode::Fixed(n) => n as i64 >= f.validity_min_n(),
            };
            if !usable && method == Method::Auto {
                return group(canonical);
            }
            let (value, validity_min_n) = closed_value(f, mode)?;
            Ok(Computed {
                query: query.clone(),
                method: format!("invariant:{form}"),
                value,
                validity_min_n,
            })
        }
        None if method == Method::Auto => group(canonical),
        None => Err(Error::NoClosedForm),
    }
}

fn finish(out: &mut impl Write, line: String) -> i32 {
    let _ = writeln!(out, "{line}");
    0
}

fn fail(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    1
}

fn run_batch(path: &str, symbolic: bool, method: Method, out: &mut impl Write) -> i32 {
    let reader: Box<dyn BufRead> = if path == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        match File::open(path) {
            Ok(f) => Box::new(BufReader::new(f)),
            Err(e) => return fail(format!("{path}: {e}")),
        }
    };
    let mut code = 0;
    for line in reader.lines() {
        let line = match line {
            Ok(l) => l,
            Err(e) => return fail(e),
        };
        if line.trim().is_empty() {
            continue;
        }
        let result = serde_json::from_str::<MomentQuery>(&line)
            .map_err(|e| Error::MalformedQuery(e.to_string()))
            .and_then(|q| compute_moment(&q, symbolic, method));
        let json = match result {
            Ok(c) => c.to_json(),
            Err(e) => {
                code = 1;
                json!({ "query": line, "error": e.to_string() })
            }
        };
        let _ = writeln!(out, "{json}");
    }
    code
}

fn simple(query: Value, method: &str, f: RatFun, mode: NMode, output: Output) -> Result<String> {
    let (value, validity_min_n) = closed_value(f, mode)?;
    Computed {
        query,
        method: method.into(),
        value,
        validity_min_n,
    }
    .render(output)
}

/// Runs a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut impl Write) -> i32 {
    configure_threads();
    let result: Result<String> = match cli.command {
        Command::Moment {
            n,
            i,
            j,
            k,
            l,
            symbolic,
            method,
            output,
            batch,
        } => {
            let symbolic = symbolic || output == Output::Symbolic;
            if let Some(path) = batch {
                return run_batch(&path, symbolic, method, out);
            }
            let mut q = MomentQuery::new(n.unwrap_or(0), i, j, k, l);
            let symbolic = symbolic || n.is_none();
            if n.is_none() {
                q.n = q.max_index().max(1);
            }
            compute_moment(&q, symbolic, method).and_then(|c| c.render(output))
        }
        Command::Wg {
            p,
            class,
            n,
            output,
        } => class
            .parse::<Partition>()
            .and_then(|c| match p {
                Some(p) if p != c.weight() => Err(Error::WeightMismatch {
                    rep: p,
                    class: c.weight(),
                }),
                _ => Ok(c),
            })
            .and_then(|c| weingarten::xi(&c, mode_for(n, output)))
            .and_then(|value| {
                Computed {
                    query: json!({ "class": class, "n": n }),
                    method: "group".into(),
                    validity_min_n: None,
                    value,
                }
                .render(output)
            }),
        Command::Fan { m, n, output } => FanSpec::new(m.0.clone()).and_then(|spec| {
            let m = m.0;
            let q = json!({ "fan": m, "n": n });
            simple(
                q,
                "invariant:fan",
                invariant::fan_f(&spec),
                mode_for(n, output),
                output,
            )
        }),
        Command::Zint { m, n, output } => match m.0[..] {
            [a, b, c] => simple(
                json!({ "z": m.0, "n": n }),
                "invariant:z",
                invariant::z_integral(a, b, c),
                mode_for(n, output),
                output,
            ),
            _ => Err(Error::InvalidParameter("--m needs three values".into())),
        },
        Command::Xint { w, n, output } => {
            let w = w.0;
            let weights: Result<[usize; 8]> = w
                .clone()
                .try_into()
                .map_err(|_| Error::InvalidParameter("--w needs eight weights".into()));
            weights.and_then(XSpec::new).and_then(|spec| {
                let mode = mode_for(n, output);
                let value = invariant::x_integral(&spec, mode)?;
                let method = if invariant::x_closed_form(&spec).is_some() {
                    "invariant:x"
                } else {
                    "group"
                };
                Computed {
                    query: json!({ "x": w, "n": n }),
                    method: method.into(),
                    validity_min_n: None,
                    value,
                }
                .render(output)
            })
        }
        Command::Sphere {
            n,
            exponents,
            output,
        } => sphere_command(n, &exponents.0, output),
        Command::Mc {
            query,
            exponents,
            n,
            samples,
            seed,
            output,
        } => mc_command(query, exponents.map(|e| e.0), n, samples, seed, output),
        Command::Verify { suite } => return verify_command(&suite, out),
    };
    match result {
        Ok(line) => finish(out, line),
        Err(e) => fail(e),
    }
}

fn sphere_command(n: usize, exponents: &[usize], output: Output) -> Result<String> {
    if n < 1 {
        return Err(Error::InvalidSize);
    }
    if exponents.len() > n {
        return Err(Error::TooManyCoordinates);
    }
    let mut e = exponents.to_vec();
    e.resize(n, 0);
    let v = sphere_moment(&e)?;
    let x = to_f64(&v);
    Ok(match output {
        Output::Json => json!({
            "query": { "n": n, "exponents": exponents },
            "method": "invariant:sphere",
            "value": { "kind": "rational", "value": v.to_string(), "float": x },
        })
        .to_string(),
        Output::Float => format_float(x),
        Output::Symbolic => {
            return Err(Error::InvalidParameter(
                "sphere values are computed at fixed n".into(),
            ))
        }
        Output::Exact => format!("{v} ~ {}", format_float(x)),
    })
}

fn mc_command(
    query: Option<String>,
    exponents: Option<Vec<usize>>,
    n: Option<usize>,
    samples: u64,
    seed: u64,
    output: Output,
) -> Result<String> {
    if output == Output::Symbolic {
        return Err(Error::InvalidParameter("mc has no symbolic output".into()));
    }
    let (est, exact): (_, Option<BigRational>) = match (query, exponents) {
        (Some(text), None) => {
            let mut q: MomentQuery =
                serde_json::from_str(&text).map_err(|e| Error::MalformedQuery(e.to_string()))?;
            if let Some(n) = n {
                q.n = n;
            }
            let cfg = SamplerConfig::new(seed, samples, q.n)?;
            (
                estimate_moment(&q, &cfg)?,
                weingarten::evaluate_fixed(&q).ok(),
            )
        }
        (None, Some(e)) => {
            let n = n.unwrap_or(e.len());
            let cfg = SamplerConfig::new(seed, samples, n)?;
            let mut padded = e.clone();
            padded.resize(n.max(e.len()), 0);
            (
                estimate_sphere_moment(&e, &cfg)?,
                sphere_moment(&padded).ok(),
            )
        }
        _ => {
            return Err(Error::InvalidParameter(
                "give exactly one of --query and --exponents".into(),
            ))
        }
    };
    let x = exact.as_ref().map(to_f64);
    let out = json!({
        "mean_re": est.mean.re,
        "mean_im": est.mean.im,
        "stderr": est.stderr,
        "samples": est.samples,
        "exact": exact.as_ref().map(|q| q.to_string()),
        "sigmas": x.map(|x| est.sigmas(x)),
    });
    Ok(match output {
        Output::Float => format!(
            "{} +- {}",
            format_float(est.mean.re),
            format_float(est.stderr)
        ),
        _ => out.to_string(),
    })
}

fn verify_command(suites: &[String], out: &mut impl Write) -> i32 {
    let names: Vec<&str> = if suites.iter().any(|s| s == "all") {
        SUITES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut code = 0;
    for name in names {
        let report = match run_suite(name) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        for check in &report.checks {
            let _ = writeln!(out, "[{name}] {check}");
        }
        let failed = report.failures().len();
        let _ = writeln!(
            out,
            "[{name}] {} of {} checks passed",
            report.checks.len() - failed,
            report.checks.len()
        );
        if failed > 0 {
            code = 1;
        }
    }
    code
}

/// Parses `args` and runs; convenient for tests.
pub fn run_args<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
