//! Argument parsing helpers and the validated run configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::{Args, ValueEnum};
use num_complex::Complex64;

use lipschitz_core::appell::{AppellDescriptor, BUILTIN_LABELS, DEFAULT_MAX_DEGREE};
use lipschitz_core::numeric::parse_complex;
use lipschitz_core::par::Execution;

/// A configuration problem detected before any computation; exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DescriptorArgs {
    /// Descriptor label: a built-in or one from --registry.
    #[arg(long = "desc", default_value = "bernoulli")]
    pub label: String,
    /// JSON file with one descriptor or an array of them.
    #[arg(long)]
    pub registry: Option<PathBuf>,
}

impl DescriptorArgs {
    /// Resolves the label against the registry first, then the built-ins.
    pub fn resolve(&self, max_degree: usize) -> Result<AppellDescriptor> {
        if let Some(path) = &self.registry {
            let text = read(path)?;
            let registry = AppellDescriptor::registry_from_json(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
            if let Some(d) = registry.into_iter().find(|d| d.label() == self.label) {
                if max_degree > d.max_degree() {
                    return Err(config_err(format!(
                        "degree {max_degree} exceeds max_degree {} of descriptor {:?}",
                        d.max_degree(),
                        self.label
                    )));
                }
                return Ok(d);
            }
        }
        if BUILTIN_LABELS.contains(&self.label.as_str()) {
            return AppellDescriptor::builtin(&self.label, max_degree.max(DEFAULT_MAX_DEGREE)).map_err(|e| config_err(e.to_string()));
        }
        Err(config_err(format!("unknown descriptor label {:?}", self.label)))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// The validated settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn new(args: &OutputArgs) -> Result<Self> {
        if args.jobs == Some(0) {
            return Err(config_err("--jobs must be at least 1"));
        }
        Ok(RunConfig { format: args.format, out: args.out.clone(), jobs: args.jobs })
    }

    /// Runs `f` on a pool of the configured size.
    pub fn run<T: Send>(&self, f: impl FnOnce(Execution) -> T + Send) -> Result<T> {
        match self.jobs {
            Some(1) => Ok(f(Execution::Sequential)),
            #[cfg(feature = "parallel")]
            Some(j) => {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(j).build()?;
                Ok(pool.install(|| f(Execution::Parallel)))
            }
            _ => Ok(f(Execution::default())),
        }
    }
}

/// `a`, `a..b` (inclusive) or a comma list of either.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let bad = || config_err(format!("invalid integer range {s:?}"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                if b < a {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(|p| parse_complex(p).map_err(|e| config_err(e.to_string())))
        .collect()
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| config_err(format!("invalid number {p:?}"))))
        .collect()
}

/// `start:stop:count` per axis, real axis then imaginary axis separated by
/// a comma. A single axis gives points on the real line.
pub fn parse_grid(s: &str) -> Result<Vec<Complex64>> {
    let axes: Vec<Vec<f64>> = s.split(',').map(parse_axis).collect::<Result<_>>()?;
    let points: Vec<Complex64> = match axes.as_slice() {
        [re] => re.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        [re, im] => im.iter().flat_map(|&y| re.iter().map(move |&x| Complex64::new(x, y))).collect(),
        _ => return Err(config_err(format!("grid {s:?} needs one or two axes"))),
    };
    if points.is_empty() {
        return Err(config_err(format!("grid {s:?} is empty")));
    }
    Ok(points)
}

fn parse_axis(s: &str) -> Result<Vec<f64>> {
    let bad = || config_err(format!("invalid grid axis {s:?}, expected start:stop:count"));
    let parts: Vec<&str> = s.trim().split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    })
}

pub fn check_tolerance(tol: f64) -> Result<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(config_err(format!("tolerance must be positive, got {tol}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_int_list("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_int_list("-2..=1").unwrap(), vec![-2, -1, 0, 1]);
        assert_eq!(parse_int_list("3,1,1").unwrap(), vec![1, 3]);
        assert!(parse_int_list("5..2").is_err());
        assert!(parse_int_list("x").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-1:1:3,0.5:0.5:1").unwrap();
        assert_eq!(g, vec![Complex64::new(-1.0, 0.5), Complex64::new(0.0, 0.5), Complex64::new(1.0, 0.5)]);
        assert!(parse_grid("empty").unwrap_err().is::<ConfigError>());
        assert!(parse_grid("0:1:0").is_err());
        assert_eq!(parse_grid("0:1:2").unwrap().len(), 2);
    }

    #[test]
    fn complex_lists() {
        assert_eq!(parse_complex_list("i, 1/2+i").unwrap(), vec![Complex64::new(0.0, 1.0), Complex64::new(0.5, 1.0)]);
        assert!(parse_complex_list("i,,2").unwrap_err().is::<ConfigError>());
    }
}
