//! Experiment configuration: defaults, KEY=VALUE config files, flag
//! overrides, and validation.

use std::fmt;
use std::path::{Path, PathBuf};

use collodae::{BasisKind, BoundaryWeighting, DaeProblem, NodeKind, WeightVariant};

use crate::CliError;

/// Which sweep to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    RepmapConditioning,
    ConstraintConditioning,
    SystemConditioning,
    Solve,
    Convergence,
    ProjectionTest,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "repmap-conditioning" => Ok(Self::RepmapConditioning),
            "constraint-conditioning" => Ok(Self::ConstraintConditioning),
            "system-conditioning" => Ok(Self::SystemConditioning),
            "solve" => Ok(Self::Solve),
            "convergence" => Ok(Self::Convergence),
            "projection-test" => Ok(Self::ProjectionTest),
            other => Err(CliError::config(format!(
                "unknown experiment {other:?}; expected one of repmap-conditioning, \
                 constraint-conditioning, system-conditioning, solve, convergence, \
                 projection-test"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::RepmapConditioning => "repmap-conditioning",
            Self::ConstraintConditioning => "constraint-conditioning",
            Self::SystemConditioning => "system-conditioning",
            Self::Solve => "solve",
            Self::Convergence => "convergence",
            Self::ProjectionTest => "projection-test",
        }
    }

    /// Whether cells of this experiment depend on the functional variant.
    pub fn uses_variant(&self) -> bool {
        matches!(
            self,
            Self::SystemConditioning | Self::Solve | Self::Convergence
        )
    }
}

/// Number of collocation points per interval, as a function of the ansatz
/// degree N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    /// M = N + offset (the default is N+1, the minimum admissible).
    Offset(usize),
    /// The same M for every N.
    Fixed(usize),
}

impl MRule {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let t = s.trim().to_ascii_uppercase();
        if let Some(rest) = t.strip_prefix("N+") {
            let off: usize = rest
                .parse()
                .map_err(|_| CliError::config(format!("bad M rule {s:?}")))?;
            if off == 0 {
                return Err(CliError::config("M rule N+0 is below the minimum N+1"));
            }
            Ok(MRule::Offset(off))
        } else {
            let m: usize = t
                .parse()
                .map_err(|_| CliError::config(format!("bad M rule {s:?}: expected N+k or an integer")))?;
            Ok(MRule::Fixed(m))
        }
    }

    pub fn m_for(&self, degree: usize) -> usize {
        match *self {
            MRule::Offset(off) => degree + off,
            MRule::Fixed(m) => m,
        }
    }
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MRule::Offset(off) => write!(f, "N+{off}"),
            MRule::Fixed(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Md,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Md),
            other => Err(CliError::config(format!(
                "unknown output format {other:?}; expected csv or md"
            ))),
        }
    }
}

/// Benchmark problem selector with its scalar parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSelector {
    /// Index-3 problem with decay parameter η.
    Index3 { eta: f64 },
    /// Hessenberg index-2 problem with parameters η, λ.
    Hessenberg2 { eta: f64, lambda: f64 },
    /// Index-3 multibody model with spring constant ρ ≠ 0.
    CampbellMoore { rho: f64 },
}

impl ProblemSelector {
    pub fn build(&self) -> Result<DaeProblem, CliError> {
        match *self {
            ProblemSelector::Index3 { eta } => Ok(collodae::example_index3(eta)),
            ProblemSelector::Hessenberg2 { eta, lambda } => {
                Ok(collodae::example_hessenberg2(eta, lambda))
            }
            ProblemSelector::CampbellMoore { rho } => collodae::example_campbell_moore(rho)
                .map_err(|e| CliError::config(format!("bad problem parameters: {e}"))),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ProblemSelector::Index3 { eta } => format!("index3 (eta={eta})"),
            ProblemSelector::Hessenberg2 { eta, lambda } => {
                format!("hessenberg2 (eta={eta}, lambda={lambda})")
            }
            ProblemSelector::CampbellMoore { rho } => format!("campbell-moore (rho={rho})"),
        }
    }
}

/// A fully resolved experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub bases: Vec<BasisKind>,
    pub degrees: Vec<usize>,
    pub grids: Vec<usize>,
    pub variants: Vec<WeightVariant>,
    pub m_rule: MRule,
    pub nodes: NodeKind,
    pub problem: ProblemSelector,
    pub boundary: BoundaryWeighting,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

/// Raw key-value settings gathered from the config file and flags, before
/// defaults are applied. Later sources override earlier ones.
#[derive(Debug, Default, Clone)]
pub struct Settings {
    pub experiment: Option<String>,
    pub basis: Option<String>,
    pub degrees: Option<String>,
    pub grids: Option<String>,
    pub variant: Option<String>,
    pub m_rule: Option<String>,
    pub nodes: Option<String>,
    pub problem: Option<String>,
    pub eta: Option<f64>,
    pub lambda: Option<f64>,
    pub rho: Option<f64>,
    pub boundary: Option<String>,
    pub out_dir: Option<String>,
    pub format: Option<String>,
}

impl Settings {
    /// Overlay `other` on top of `self`: set fields win.
    pub fn overlay(mut self, other: Settings) -> Settings {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(
            experiment, basis, degrees, grids, variant, m_rule, nodes, problem, eta, lambda,
            rho, boundary, out_dir, format
        );
        self
    }

    /// Parse a KEY=VALUE config file (one setting per line, `#` comments).
    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!(
                    "{}:{}: expected KEY=VALUE, got {raw:?}",
                    path.display(),
                    lineno + 1
                ))
            })?;
            // keys are case-sensitive: N is the degree list, n the grid list
            let key = key.trim();
            let value = value.trim().to_string();
            let parse_f64 = |v: &str, k: &str| -> Result<f64, CliError> {
                v.parse().map_err(|_| {
                    CliError::config(format!("bad numeric value for {k}: {v:?}"))
                })
            };
            match key {
                "experiment" => s.experiment = Some(value),
                "basis" => s.basis = Some(value),
                "N" => s.degrees = Some(value),
                "n" => s.grids = Some(value),
                "variant" => s.variant = Some(value),
                "M" => s.m_rule = Some(value),
                "nodes" => s.nodes = Some(value),
                "problem" => s.problem = Some(value),
                "eta" => s.eta = Some(parse_f64(&value, "eta")?),
                "lambda" => s.lambda = Some(parse_f64(&value, "lambda")?),
                "rho" => s.rho = Some(parse_f64(&value, "rho")?),
                "boundary" => s.boundary = Some(value),
                "out" => s.out_dir = Some(value),
                "format" => s.format = Some(value),
                other => {
                    return Err(CliError::config(format!(
                        "{}:{}: unknown key {other:?} (expected experiment, basis, N, n, \
                         variant, M, nodes, problem, eta, lambda, rho, boundary, out, format)",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    /// Apply defaults and validate into a runnable configuration.
    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let experiment = ExperimentKind::parse(
            self.experiment
                .as_deref()
                .ok_or_else(|| CliError::config("no experiment selected (use --experiment)"))?,
        )?;

        let bases = match self.basis.as_deref() {
            None => BasisKind::all().to_vec(),
            Some(list) if list.trim().eq_ignore_ascii_case("all") => BasisKind::all().to_vec(),
            Some(list) => split_list(list)
                .map(|tok| BasisKind::parse(tok).map_err(|e| CliError::config(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?,
        };

        let degrees = parse_usize_list(self.degrees.as_deref().unwrap_or("3,5,10,20"), "N")?;
        let grids = parse_usize_list(
            self.grids.as_deref().unwrap_or("10,20,40,80,160,320"),
            "n",
        )?;

        let variants = match self.variant.as_deref() {
            None => vec![WeightVariant::C],
            Some(list) => split_list(list)
                .map(|tok| WeightVariant::parse(tok).map_err(|e| CliError::config(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?,
        };

        let m_rule = match self.m_rule.as_deref() {
            None => MRule::Offset(1),
            Some(rule) => MRule::parse(rule)?,
        };

        let nodes = match self.nodes.as_deref() {
            None => NodeKind::GaussLegendre,
            Some(s) => match s.trim().to_ascii_lowercase().as_str() {
                "gauss" | "gauss-legendre" => NodeKind::GaussLegendre,
                "uniform" => NodeKind::Uniform,
                other => {
                    return Err(CliError::config(format!(
                        "unknown node kind {other:?}; expected gauss-legendre or uniform"
                    )))
                }
            },
        };

        let problem = match self
            .problem
            .as_deref()
            .map(|p| p.trim().to_ascii_lowercase())
            .as_deref()
        {
            None | Some("index3") => ProblemSelector::Index3 {
                eta: self.eta.unwrap_or(-2.0),
            },
            Some("hessenberg2") => ProblemSelector::Hessenberg2 {
                eta: self.eta.unwrap_or(-25.0),
                lambda: self.lambda.unwrap_or(-1.0),
            },
            Some("campbell-moore") | Some("multibody") => ProblemSelector::CampbellMoore {
                rho: self.rho.unwrap_or(5.0),
            },
            Some(other) => {
                return Err(CliError::config(format!(
                    "unknown problem {other:?}; expected index3, hessenberg2, or campbell-moore"
                )))
            }
        };

        let boundary = match self.boundary.as_deref() {
            None => BoundaryWeighting::Unscaled,
            Some(s) => match s.trim().to_ascii_lowercase().as_str() {
                "unscaled" | "unit" => BoundaryWeighting::Unscaled,
                "sqrt-mean-step" | "sqrt_mean_step" => BoundaryWeighting::SqrtMeanStep,
                other => {
                    return Err(CliError::config(format!(
                        "unknown boundary weighting {other:?}; expected unscaled or sqrt-mean-step"
                    )))
                }
            },
        };

        let format = match self.format.as_deref() {
            None => OutputFormat::Csv,
            Some(f) => OutputFormat::parse(f)?,
        };

        let config = ExperimentConfig {
            experiment,
            bases,
            degrees,
            grids,
            variants,
            m_rule,
            nodes,
            problem,
            boundary,
            out_dir: PathBuf::from(self.out_dir.as_deref().unwrap_or(".")),
            format,
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.bases.is_empty() {
            return Err(CliError::config("empty basis list"));
        }
        if self.degrees.is_empty() {
            return Err(CliError::config("empty N list"));
        }
        if self.grids.is_empty() {
            return Err(CliError::config("empty n list"));
        }
        if self.variants.is_empty() {
            return Err(CliError::config("empty variant list"));
        }
        for &degree in &self.degrees {
            if degree == 0 || degree > 60 {
                return Err(CliError::config(format!(
                    "ansatz degree N = {degree} out of the supported range 1..=60"
                )));
            }
        }
        for &n in &self.grids {
            if n == 0 {
                return Err(CliError::config("grid size n = 0"));
            }
        }
        // problem parameters are checked by building once up front
        self.problem.build()?;
        Ok(())
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_usize_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    let items: Vec<usize> = split_list(s)
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| CliError::config(format!("bad {what} list entry {tok:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if items.is_empty() {
        return Err(CliError::config(format!("empty {what} list")));
    }
    Ok(items)
}
