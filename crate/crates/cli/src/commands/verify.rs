use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, ValueEnum};
use num_complex::Complex64;

use lipschitz_core::appell::AppellSequence;
use lipschitz_core::formal_group::{congruence_suite, CongruenceVerdict};
use lipschitz_core::lipschitz::{
    boundary_value_check, classical_lipschitz_check, classical_truncation, lipschitz_defect_corrected, lipschitz_defect_with,
    pairing_check, Rectangle, RepresentingFunction,
};
use lipschitz_core::numeric::TWO_PI;
use lipschitz_core::par::{self, Execution};
use lipschitz_core::polylog::inversion_report;
use lipschitz_core::report::{fmt_f64, json_object, json_str, sort_reports, DefectReport};

use crate::config::{
    check_tolerance, config_err, parse_complex_list, parse_f64_list, parse_grid, parse_int_list, ConfigError, DescriptorArgs,
    OutputArgs, RunConfig,
};
use crate::output::{emit, Render, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Inversion,
    Lipschitz,
    ClassicalLipschitz,
    Boundary,
    Pairing,
    Congruences,
    All,
}

impl Suite {
    const EACH: [Suite; 6] =
        [Suite::Inversion, Suite::Lipschitz, Suite::ClassicalLipschitz, Suite::Boundary, Suite::Pairing, Suite::Congruences];

    fn name(self) -> &'static str {
        match self {
            Suite::Inversion => "inversion",
            Suite::Lipschitz => "lipschitz",
            Suite::ClassicalLipschitz => "classical-lipschitz",
            Suite::Boundary => "boundary",
            Suite::Pairing => "pairing",
            Suite::Congruences => "congruences",
            Suite::All => "all",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Suite::Inversion => 1e-10,
            Suite::Lipschitz => 1e-3,
            Suite::ClassicalLipschitz => 1e-8,
            Suite::Boundary => 1e-6,
            Suite::Pairing => 1e-9,
            Suite::Congruences | Suite::All => 0.0,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Orders: `n`, `a..b` or a comma list. Defaults depend on the suite.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Exponents k for the classical suite.
    #[arg(long, default_value = "2..6")]
    pub k: String,
    /// Points z for the classical suite.
    #[arg(long, default_value = "i,1/2+i,0.3+0.7i", allow_hyphen_values = true)]
    pub z: String,
    /// Points τ for the Lipschitz suite; conjugates are added.
    #[arg(long, default_value = "i,1/4+i,1/2+2i", allow_hyphen_values = true)]
    pub tau: String,
    /// Points q for the inversion suite.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    pub q: Option<String>,
    /// q grid for the inversion suite, `start:stop:count[,start:stop:count]`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Truncation K. The classical suite picks K from its tail bound when omitted.
    #[arg(short = 'K', long = "trunc")]
    pub trunc: Option<u64>,
    /// Add the Euler–Maclaurin tail estimate to Lipschitz partial sums.
    #[arg(long)]
    pub corrected: bool,
    /// Points x in (0,1) for the boundary suite.
    #[arg(long, default_value = "0.25,0.5,0.75")]
    pub x: String,
    /// Starting ε for the boundary extrapolation.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Highest moment xᵐ for the pairing suite.
    #[arg(long, default_value_t = 4)]
    pub moments: usize,
    /// Tolerance for every numerical suite, replacing the per-suite defaults.
    #[arg(long, env = "APPELL_VERIFY_TOL")]
    pub tol: Option<f64>,
    /// Highest index for the congruence suite.
    #[arg(long, default_value_t = 14)]
    pub max_n: usize,
    /// Primes for the Kummer congruences.
    #[arg(long, default_value = "5,7,11")]
    pub primes: String,
    #[command(flatten)]
    pub desc: DescriptorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Inputs validated before any computation starts.
struct Plan {
    suites: Vec<Suite>,
    tol: Option<f64>,
    inversion: Option<(Vec<i64>, Vec<Complex64>)>,
    lipschitz: Option<(AppellSequence, Vec<i64>, Vec<Complex64>, u64)>,
    classical: Option<(Vec<u32>, Vec<Complex64>)>,
    boundary: Option<(Vec<i64>, Vec<f64>)>,
    pairing: Option<(AppellSequence, Vec<i64>)>,
    primes: Vec<u64>,
}

fn ints(s: Option<&str>, default: &str) -> Result<Vec<i64>> {
    parse_int_list(s.unwrap_or(default))
}

/// 100 points: radii 0.3..0.7 on 10 rays off the positive real axis.
fn default_q_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for ri in 0..10 {
        let r = 0.3 + 0.4 * ri as f64 / 9.0;
        for ai in 0..10 {
            out.push(Complex64::from_polar(r, TWO_PI * (ai as f64 + 0.5) / 10.0));
        }
    }
    out
}

fn plan(args: &VerifyArgs) -> Result<Plan> {
    let suites: Vec<Suite> = if args.suite == Suite::All { Suite::EACH.to_vec() } else { vec![args.suite] };
    let tol = args.tol.map(check_tolerance).transpose()?;
    args.desc.resolve(0)?;
    let runs = |s: Suite| suites.contains(&s);
    let n_arg = args.n.as_deref();
    let sequence = |max_n: usize| -> Result<AppellSequence> {
        args.desc.resolve(max_n + 2)?.sequence().map_err(|e| config_err(e.to_string()))
    };
    let max_abs = |ns: &[i64]| ns.iter().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0);
    let mut p = Plan {
        suites: suites.clone(),
        tol,
        inversion: None,
        lipschitz: None,
        classical: None,
        boundary: None,
        pairing: None,
        primes: Vec::new(),
    };
    if runs(Suite::Inversion) {
        let ns = ints(n_arg, "-3..3")?;
        let qs = match (&args.q, &args.grid) {
            (Some(q), _) => parse_complex_list(q)?,
            (None, Some(g)) => parse_grid(g)?,
            (None, None) => default_q_grid(),
        };
        p.inversion = Some((ns, qs));
    }
    if runs(Suite::Lipschitz) {
        let ns = ints(n_arg, "-2..2")?;
        let mut taus = parse_complex_list(&args.tau)?;
        if taus.iter().any(|t| t.im == 0.0) {
            return Err(config_err("tau must lie off the real axis"));
        }
        let conj: Vec<Complex64> = taus.iter().map(|t| t.conj()).collect();
        taus.extend(conj);
        let k = args.trunc.unwrap_or(100_000);
        if k == 0 {
            return Err(config_err("K must be at least 1"));
        }
        p.lipschitz = Some((sequence(max_abs(&ns))?, ns, taus, k));
    }
    if runs(Suite::ClassicalLipschitz) {
        let ks = parse_int_list(&args.k)?;
        if ks.iter().any(|&k| k < 2) {
            return Err(config_err("k must be at least 2"));
        }
        let zs = parse_complex_list(&args.z)?;
        if zs.iter().any(|z| z.im <= 0.0) {
            return Err(config_err("z must lie in the upper half-plane"));
        }
        if args.trunc == Some(0) {
            return Err(config_err("K must be at least 1"));
        }
        p.classical = Some((ks.into_iter().map(|k| k as u32).collect(), zs));
    }
    if runs(Suite::Boundary) {
        let ns = ints(n_arg, "-4..-1")?;
        if ns.iter().any(|&n| n > -1) {
            return Err(config_err("boundary suite needs n <= -1"));
        }
        let xs = parse_f64_list(&args.x)?;
        if xs.iter().any(|x| !(*x > 0.0 && *x < 1.0)) {
            return Err(config_err("x must lie in (0,1)"));
        }
        if !(args.eps > 0.0 && args.eps <= 0.1) {
            return Err(config_err("eps must lie in (0, 0.1]"));
        }
        p.boundary = Some((ns, xs));
    }
    if runs(Suite::Pairing) {
        let ns = ints(n_arg, "-3..4")?;
        p.pairing = Some((sequence(max_abs(&ns))?, ns));
    }
    if runs(Suite::Congruences) {
        p.primes = parse_int_list(&args.primes)?.into_iter().map(|q| q as u64).collect();
        if p.primes.iter().any(|&q| q < 2) {
            return Err(config_err("primes must be at least 2"));
        }
    }
    Ok(p)
}

struct Checked {
    report: DefectReport,
    tol: f64,
}

impl Checked {
    fn passes(&self) -> bool {
        self.report.passes(self.tol)
    }
}

pub struct VerifyOutput {
    suite: Suite,
    defects: Vec<Checked>,
    verdicts: Vec<CongruenceVerdict>,
    error: Option<String>,
}

impl VerifyOutput {
    fn failed(&self) -> usize {
        self.defects.iter().filter(|c| !c.passes()).count() + self.verdicts.iter().filter(|v| !v.holds).count()
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.failed() == 0
    }

    fn summary(&self) -> String {
        let mut fields = vec![
            ("summary", json_str(self.suite.name())),
            ("records", (self.defects.len() + self.verdicts.len()).to_string()),
            ("failed", self.failed().to_string()),
        ];
        if let Some(e) = &self.error {
            fields.push(("error", json_str(e)));
        }
        fields.push(("pass", self.passed().to_string()));
        json_object(&fields)
    }
}

const HEADER: [&str; 13] =
    ["identity", "label", "n", "p", "re", "im", "K", "abs_defect", "rel_defect", "tail_estimate", "defect", "tolerance", "pass"];

impl Render for VerifyOutput {
    fn json(&self) -> String {
        let mut s = String::new();
        for c in &self.defects {
            writeln!(s, "{}", c.report.to_json_line(Some(c.tol))).unwrap();
        }
        for v in &self.verdicts {
            writeln!(s, "{}", v.to_json()).unwrap();
        }
        writeln!(s, "{}", self.summary()).unwrap();
        s
    }

    fn csv(&self) -> Result<String> {
        let mut t = Table::new(&HEADER);
        for c in &self.defects {
            let r = &c.report;
            t.push(vec![
                r.identity.clone(),
                r.label.clone(),
                r.n.to_string(),
                String::new(),
                fmt_f64(r.point.re),
                fmt_f64(r.point.im),
                r.truncation.to_string(),
                fmt_f64(r.abs_defect),
                fmt_f64(r.rel_defect),
                fmt_f64(r.tail_estimate),
                fmt_f64(r.defect()),
                fmt_f64(c.tol),
                c.passes().to_string(),
            ]);
        }
        for v in &self.verdicts {
            let mut row = vec![String::new(); HEADER.len()];
            row[0] = format!("{:?}", v.id);
            row[2] = v.n.to_string();
            row[3] = v.p.map(|p| p.to_string()).unwrap_or_default();
            row[12] = v.holds.to_string();
            t.push(row);
        }
        t.to_csv()
    }

    fn pretty(&self) -> String {
        let mut s = String::new();
        for c in &self.defects {
            let r = &c.report;
            writeln!(
                s,
                "{} {} {} n={} at {}{:+}i K={}: defect {:.3e} (tol {:.1e})",
                if c.passes() { "PASS" } else { "FAIL" },
                r.identity,
                r.label,
                r.n,
                r.point.re,
                r.point.im,
                r.truncation,
                r.defect(),
                c.tol
            )
            .unwrap();
        }
        for v in &self.verdicts {
            let p = v.p.map(|p| format!(" p={p}")).unwrap_or_default();
            writeln!(s, "{} {:?} n={}{p}", if v.holds { "PASS" } else { "FAIL" }, v.id, v.n).unwrap();
        }
        match &self.error {
            Some(e) => writeln!(s, "{}: error: {e}", self.suite.name()).unwrap(),
            None => writeln!(s, "{}: {} records, {} failed", self.suite.name(), self.defects.len() + self.verdicts.len(), self.failed()).unwrap(),
        }
        s
    }
}

fn collect(results: Vec<lipschitz_core::Result<DefectReport>>) -> Result<Vec<DefectReport>> {
    results.into_iter().collect::<Result<Vec<_>, _>>().map_err(|e| config_err(e.to_string()))
}

fn execute(p: &Plan, args: &VerifyArgs, exec: Execution) -> Result<(Vec<Checked>, Vec<CongruenceVerdict>)> {
    let mut defects = Vec::new();
    let mut verdicts = Vec::new();
    let mut add = |suite: Suite, mut reports: Vec<DefectReport>| {
        sort_reports(&mut reports);
        let tol = p.tol.unwrap_or(suite.default_tolerance());
        defects.extend(reports.into_iter().map(|report| Checked { report, tol }));
    };
    for &suite in &p.suites {
        match suite {
            Suite::Inversion => {
                let (ns, qs) = p.inversion.as_ref().expect("planned");
                let jobs: Vec<(i64, Complex64)> = ns.iter().flat_map(|&n| qs.iter().map(move |&q| (n, q))).collect();
                add(suite, collect(par::map(exec, &jobs, |&(n, q)| inversion_report(n, q)))?);
            }
            Suite::Lipschitz => {
                let (seq, ns, taus, k) = p.lipschitz.as_ref().expect("planned");
                let mut reports = Vec::new();
                for &n in ns {
                    let rf = RepresentingFunction::for_sequence(seq, n).map_err(|e| config_err(e.to_string()))?;
                    for &tau in taus {
                        let r = if args.corrected {
                            lipschitz_defect_corrected(exec, &rf, tau, *k)
                        } else {
                            lipschitz_defect_with(exec, &rf, tau, *k)
                        };
                        reports.push(r.map_err(|e| config_err(e.to_string()))?);
                    }
                }
                add(suite, reports);
            }
            Suite::ClassicalLipschitz => {
                let (ks, zs) = p.classical.as_ref().expect("planned");
                let jobs: Vec<(u32, Complex64)> = ks.iter().flat_map(|&k| zs.iter().map(move |&z| (k, z))).collect();
                let trunc = args.trunc;
                add(
                    suite,
                    collect(par::map(exec, &jobs, |&(k, z)| {
                        let t = match trunc {
                            Some(t) => t,
                            None => classical_truncation(k, z)?,
                        };
                        classical_lipschitz_check(k, z, t)
                    }))?,
                );
            }
            Suite::Boundary => {
                let (ns, xs) = p.boundary.as_ref().expect("planned");
                let jobs: Vec<(i64, f64)> = ns.iter().flat_map(|&n| xs.iter().map(move |&x| (n, x))).collect();
                add(suite, collect(par::map(exec, &jobs, |&(n, x)| boundary_value_check(n, x, args.eps)))?);
            }
            Suite::Pairing => {
                let (seq, ns) = p.pairing.as_ref().expect("planned");
                let rect = Rectangle::with_margin(0.25);
                let mut jobs = Vec::new();
                for &n in ns {
                    let rf = RepresentingFunction::for_sequence(seq, n).map_err(|e| config_err(e.to_string()))?;
                    jobs.extend((0..=args.moments).map(|m| (rf.clone(), m)));
                }
                add(suite, collect(par::map(exec, &jobs, |(rf, m)| pairing_check(rf, *m, rect)))?);
            }
            Suite::Congruences => {
                verdicts = congruence_suite(exec, args.max_n, &p.primes).map_err(|e| config_err(e.to_string()))?;
            }
            Suite::All => unreachable!("expanded in plan"),
        }
    }
    Ok((defects, verdicts))
}

/// Runs the suite and always emits a report. Returns whether every record
/// passed; configuration errors are returned after the report is written.
pub fn run(args: &VerifyArgs) -> Result<bool> {
    let cfg = RunConfig::new(&args.output)?;
    let outcome = plan(args).and_then(|p| cfg.run(|exec| execute(&p, args, exec))?);
    let (out, err) = match outcome {
        Ok((defects, verdicts)) => (VerifyOutput { suite: args.suite, defects, verdicts, error: None }, None),
        Err(e) => {
            let out = VerifyOutput { suite: args.suite, defects: Vec::new(), verdicts: Vec::new(), error: Some(e.to_string()) };
            (out, Some(e))
        }
    };
    emit(&cfg, &out)?;
    match err {
        Some(e) if e.is::<ConfigError>() => Err(e),
        Some(e) => Err(config_err(e.to_string())),
        None => Ok(out.passed()),
    }
}
