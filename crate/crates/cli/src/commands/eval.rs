use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, ValueEnum};
use num_complex::Complex64;

use lipschitz_core::appell::AppellSequence;
use lipschitz_core::lipschitz::RepresentingFunction;
use lipschitz_core::par;
use lipschitz_core::polylog::{delta_eval, extended_delta_eval, EvalResult, ExtendedDeltaSpec};
use lipschitz_core::report::{fmt_f64, json_object, json_str};

use crate::config::{config_err, parse_complex_list, parse_grid, parse_int_list, DescriptorArgs, OutputArgs, RunConfig};
use crate::output::{emit, Render, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Function {
    /// δ_n(q)
    Delta,
    /// Δ_n(q) for the chosen descriptor.
    ExtendedDelta,
    /// The representing function φ(τ).
    Phi,
}

impl Function {
    fn name(self) -> &'static str {
        match self {
            Function::Delta => "delta",
            Function::ExtendedDelta => "extended-delta",
            Function::Phi => "phi",
        }
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    /// Orders: `n`, `a..b` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// Comma list of complex points such as `0.5` or `1/4+i`.
    #[arg(long, alias = "tau", allow_hyphen_values = true, conflicts_with = "grid")]
    pub q: Option<String>,
    /// `start:stop:count[,start:stop:count]` over the real and imaginary axes.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub desc: DescriptorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub struct Row {
    n: i64,
    point: Complex64,
    result: Result<EvalResult, String>,
}

pub struct EvalOutput {
    function: Function,
    label: String,
    rows: Vec<Row>,
}

impl EvalOutput {
    fn fields(&self, r: &Row) -> [String; 10] {
        let (value, truncation, tail, method, error) = match &r.result {
            Ok(e) => (e.value, e.truncation.to_string(), fmt_f64(e.tail_bound), e.method.to_string(), String::new()),
            Err(msg) => (Complex64::new(f64::NAN, f64::NAN), String::new(), String::new(), String::new(), msg.clone()),
        };
        [
            self.function.name().into(),
            r.n.to_string(),
            fmt_f64(r.point.re),
            fmt_f64(r.point.im),
            fmt_f64(value.re),
            fmt_f64(value.im),
            truncation,
            tail,
            method,
            error,
        ]
    }
}

const HEADER: [&str; 10] = ["fn", "n", "re", "im", "value_re", "value_im", "truncation", "tail_bound", "method", "error"];

impl Render for EvalOutput {
    fn json(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let mut fields = vec![
                ("fn", json_str(self.function.name())),
                ("label", json_str(&self.label)),
                ("n", r.n.to_string()),
                ("re", fmt_f64(r.point.re)),
                ("im", fmt_f64(r.point.im)),
            ];
            match &r.result {
                Ok(e) => fields.extend([
                    ("value_re", fmt_f64(e.value.re)),
                    ("value_im", fmt_f64(e.value.im)),
                    ("truncation", e.truncation.to_string()),
                    ("tail_bound", fmt_f64(e.tail_bound)),
                    ("method", json_str(&e.method.to_string())),
                ]),
                Err(msg) => fields.push(("error", json_str(msg))),
            }
            writeln!(s, "{}", json_object(&fields)).unwrap();
        }
        s
    }

    fn csv(&self) -> Result<String> {
        let mut t = Table::new(&HEADER);
        for r in &self.rows {
            t.push(self.fields(r).to_vec());
        }
        t.to_csv()
    }

    fn pretty(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let p = r.point;
            match &r.result {
                Ok(e) => writeln!(
                    s,
                    "{}_{}({}{:+}i) = {}{:+}i  [{}, terms {}, tail {:.1e}]",
                    self.function.name(),
                    r.n,
                    p.re,
                    p.im,
                    e.value.re,
                    e.value.im,
                    e.method,
                    e.truncation,
                    e.tail_bound
                ),
                Err(msg) => writeln!(s, "{}_{}({}{:+}i): error: {msg}", self.function.name(), r.n, p.re, p.im),
            }
            .unwrap();
        }
        s
    }
}

fn evaluate(function: Function, seq: Option<&AppellSequence>, n: i64, z: Complex64) -> lipschitz_core::Result<EvalResult> {
    match function {
        Function::Delta => delta_eval(n, z),
        Function::ExtendedDelta => extended_delta_eval(&ExtendedDeltaSpec::new(seq.expect("sequence"), n)?, z),
        Function::Phi => {
            let rf = RepresentingFunction::for_sequence(seq.expect("sequence"), n)?;
            Ok(EvalResult {
                value: rf.eval(z)?,
                truncation: 0,
                tail_bound: 0.0,
                method: lipschitz_core::polylog::Method::RationalClosedForm,
            })
        }
    }
}

pub fn run(args: &EvalArgs) -> Result<()> {
    let cfg = RunConfig::new(&args.output)?;
    let ns = parse_int_list(&args.n)?;
    let points = match (&args.q, &args.grid) {
        (Some(q), _) => parse_complex_list(q)?,
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => return Err(config_err("one of --q/--tau or --grid is required")),
    };
    let max_n = ns.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
    let seq = match args.function {
        Function::Delta => None,
        _ => {
            let d = args.desc.resolve(max_n + 2)?;
            Some(d.sequence().map_err(|e| config_err(e.to_string()))?)
        }
    };
    let label = if seq.is_some() { args.desc.label.clone() } else { String::new() };
    let jobs: Vec<(i64, Complex64)> = ns.iter().flat_map(|&n| points.iter().map(move |&z| (n, z))).collect();
    let rows = cfg.run(|exec| {
        par::map(exec, &jobs, |&(n, z)| Row { n, point: z, result: evaluate(args.function, seq.as_ref(), n, z).map_err(|e| e.to_string()) })
    })?;
    emit(&cfg, &EvalOutput { function: args.function, label, rows })
}
