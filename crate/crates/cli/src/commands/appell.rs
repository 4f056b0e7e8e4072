use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use lipschitz_core::appell::{r_poly, Parity};
use lipschitz_core::rational::format_rational;
use lipschitz_core::Polynomial;

use crate::config::{config_err, DescriptorArgs, OutputArgs, RunConfig};
use crate::output::{emit, Render, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    All,
    Polys,
    Phi,
    RPoly,
}

#[derive(Args, Debug)]
pub struct AppellArgs {
    #[command(flatten)]
    pub desc: DescriptorArgs,
    /// Highest degree n.
    #[arg(long, default_value_t = 6)]
    pub max: usize,
    #[arg(long, value_enum, default_value_t = Emit::All)]
    pub emit: Emit,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub struct AppellOutput {
    label: String,
    max: usize,
    emit: Emit,
    polys: Vec<Polynomial>,
    phi: Vec<String>,
    parity: Parity,
    r_polys: Vec<Polynomial>,
}

impl AppellOutput {
    fn shows(&self, e: Emit) -> bool {
        self.emit == Emit::All || self.emit == e
    }
}

fn poly_json(n: usize, p: &Polynomial) -> Value {
    let coeffs: Vec<String> = p.coeffs().iter().map(format_rational).collect();
    json!({ "n": n, "coefficients": coeffs, "text": p.to_string() })
}

fn push_coeffs(t: &mut Table, kind: &str, n: usize, p: &Polynomial) {
    for (d, c) in p.coeffs().iter().enumerate() {
        t.push(vec![kind.into(), n.to_string(), d.to_string(), format_rational(c)]);
    }
}

impl Render for AppellOutput {
    fn json(&self) -> String {
        let mut obj = serde_json::Map::new();
        obj.insert("label".into(), json!(self.label));
        obj.insert("max".into(), json!(self.max));
        if self.shows(Emit::Polys) {
            obj.insert("polynomials".into(), self.polys.iter().enumerate().map(|(n, p)| poly_json(n, p)).collect());
        }
        if self.shows(Emit::Phi) {
            obj.insert("phi".into(), json!(self.phi));
            obj.insert("parity".into(), json!(self.parity.to_string()));
        }
        if self.shows(Emit::RPoly) {
            obj.insert("r_polynomials".into(), self.r_polys.iter().enumerate().map(|(i, p)| poly_json(i + 1, p)).collect());
        }
        serde_json::to_string_pretty(&Value::Object(obj)).expect("json")
    }

    fn csv(&self) -> Result<String> {
        let mut t = Table::new(&["kind", "n", "index", "value"]);
        if self.shows(Emit::Polys) {
            for (n, p) in self.polys.iter().enumerate() {
                push_coeffs(&mut t, "A", n, p);
            }
        }
        if self.shows(Emit::Phi) {
            for (j, v) in self.phi.iter().enumerate() {
                t.push(vec!["phi".into(), self.max.to_string(), (j + 1).to_string(), v.clone()]);
            }
        }
        if self.shows(Emit::RPoly) {
            for (i, p) in self.r_polys.iter().enumerate() {
                push_coeffs(&mut t, "R", i + 1, p);
            }
        }
        t.to_csv()
    }

    fn pretty(&self) -> String {
        let mut s = format!("descriptor {}\n", self.label);
        if self.shows(Emit::Polys) {
            for (n, p) in self.polys.iter().enumerate() {
                writeln!(s, "A_{n}(x) = {p}").unwrap();
            }
        }
        if self.shows(Emit::Phi) {
            writeln!(s, "phi = [{}]  ({})", self.phi.join(", "), self.parity).unwrap();
        }
        if self.shows(Emit::RPoly) {
            for (i, p) in self.r_polys.iter().enumerate() {
                writeln!(s, "R_{}(x) = {p}", i + 1).unwrap();
            }
        }
        s
    }
}

pub fn run(args: &AppellArgs) -> Result<()> {
    let cfg = RunConfig::new(&args.output)?;
    let desc = args.desc.resolve(args.max)?;
    let seq = desc.sequence().map_err(|e| config_err(e.to_string()))?;
    let polys = (0..=args.max).map(|n| seq.poly(n)).collect::<Result<Vec<_>, _>>().map_err(|e| config_err(e.to_string()))?;
    let phi = seq.phi(args.max)?;
    let out = AppellOutput {
        label: desc.label().to_string(),
        max: args.max,
        emit: args.emit,
        r_polys: polys[1..].iter().map(r_poly).collect(),
        phi: phi.values.iter().map(format_rational).collect(),
        parity: phi.parity,
        polys,
    };
    emit(&cfg, &out)
}
