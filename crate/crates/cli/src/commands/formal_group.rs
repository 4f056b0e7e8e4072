use std::fmt::Write as _;

use anyhow::Result;
use clap::Args;
use serde_json::{json, Value};

use lipschitz_core::formal_group::{build_formal_group, universal_bernoulli, MAX_BERNOULLI_INDEX, MAX_ORDER};
use lipschitz_core::MultiPoly;

use crate::config::{config_err, OutputArgs, RunConfig};
use crate::output::{emit, Render, Table};

#[derive(Args, Debug)]
pub struct FormalGroupArgs {
    /// Truncation order of F and G in the formal variable.
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Also emit the universal Bernoulli numbers up to this index.
    #[arg(long)]
    pub bernoulli: Option<usize>,
    /// Also emit the universal Bernoulli polynomials (needs --bernoulli).
    #[arg(long, requires = "bernoulli")]
    pub polys: bool,
    /// Also emit the coefficients of the two-variable law.
    #[arg(long)]
    pub law: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// One labelled coefficient: `kind`, up to two indices and a polynomial in c₁, c₂, ….
struct Entry {
    kind: &'static str,
    i: usize,
    j: Option<usize>,
    value: MultiPoly,
}

pub struct FormalGroupOutput {
    order: usize,
    entries: Vec<Entry>,
}

impl Render for FormalGroupOutput {
    fn json(&self) -> String {
        let mut groups: serde_json::Map<String, Value> = serde_json::Map::new();
        for e in &self.entries {
            let mut item = json!({ "index": e.i, "text": e.value.to_string(), "terms": e.value });
            if let Some(j) = e.j {
                item["index2"] = json!(j);
            }
            groups.entry(e.kind).or_insert_with(|| Value::Array(Vec::new())).as_array_mut().expect("array").push(item);
        }
        groups.insert("order".into(), json!(self.order));
        serde_json::to_string_pretty(&Value::Object(groups)).expect("json")
    }

    fn csv(&self) -> Result<String> {
        let mut t = Table::new(&["kind", "index", "index2", "value"]);
        for e in &self.entries {
            t.push(vec![e.kind.into(), e.i.to_string(), e.j.map(|j| j.to_string()).unwrap_or_default(), e.value.to_string()]);
        }
        t.to_csv()
    }

    fn pretty(&self) -> String {
        let mut s = format!("formal group to order {}\n", self.order);
        for e in &self.entries {
            let idx = match e.j {
                Some(j) => format!("{},{}", e.i, j),
                None => e.i.to_string(),
            };
            writeln!(s, "{}[{idx}] = {}", e.kind, e.value).unwrap();
        }
        s
    }
}

pub fn run(args: &FormalGroupArgs) -> Result<()> {
    let cfg = RunConfig::new(&args.output)?;
    if !(1..=MAX_ORDER).contains(&args.order) {
        return Err(config_err(format!("--order must lie in 1..={MAX_ORDER}")));
    }
    if args.bernoulli.is_some_and(|n| n > MAX_BERNOULLI_INDEX) {
        return Err(config_err(format!("--bernoulli must be at most {MAX_BERNOULLI_INDEX}")));
    }
    let fg = build_formal_group(args.order).map_err(|e| config_err(e.to_string()))?;
    let mut entries = Vec::new();
    let series = |kind, s: &lipschitz_core::TruncatedSeries<MultiPoly>| {
        (0..=s.order()).map(move |i| Entry { kind, i, j: None, value: s.coeff(i).clone() }).collect::<Vec<_>>()
    };
    entries.extend(series("F", fg.f()));
    entries.extend(series("G", fg.g()));
    if let Some(n) = args.bernoulli {
        let ub = universal_bernoulli(n)?;
        entries.extend(ub.numbers().iter().enumerate().map(|(i, b)| Entry { kind: "bernoulli", i, j: None, value: b.clone() }));
        if args.polys {
            for (k, p) in ub.polynomials().iter().enumerate() {
                entries.extend(p.coeffs().iter().enumerate().map(|(d, c)| Entry { kind: "bernoulli_poly", i: k, j: Some(d), value: c.clone() }));
            }
        }
    }
    if args.law {
        let law = fg.two_variable_law();
        for i in 0..=args.order {
            for j in 0..=args.order - i {
                let value = law.coeff(i, j);
                if !value.is_empty() {
                    entries.push(Entry { kind: "law", i, j: Some(j), value });
                }
            }
        }
    }
    emit(&cfg, &FormalGroupOutput { order: args.order, entries })
}
