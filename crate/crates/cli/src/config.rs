//! Flat experiment configuration shared by the config file and the flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use mbqc_core::averaging::{Coupling, GaussianScheme};
use mbqc_core::protocols::{CnotVariant, OutcomeMode, RotationVariant};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Transfer,
    Rotate,
    Cnot,
    Bbb3,
    Verify,
    Sweep,
}

/// Protocol family swept by `sweep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Transfer,
    Rotate,
    Cnot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Stabilizer,
    Observation1,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Inputs {
    /// Gauss-Legendre x trapezoid quadrature over the Bloch sphere.
    Bloch,
    /// Closed-form uniform average (exhaustive mode only).
    Haar,
    /// Real inputs a|0> + sqrt(1-a^2)|1> (and c for the target line).
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Gauss-Hermite for up to four noisy dimensions, Monte Carlo beyond.
    Auto,
    GaussHermite,
    MonteCarlo,
    Trigonometric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Exhaustive,
    PostselectZeros,
}

impl From<ModeArg> for OutcomeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => OutcomeMode::Exhaustive,
            ModeArg::PostselectZeros => OutcomeMode::PostselectZeros,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingArg {
    CommonTheta,
    IidPerEdge,
}

impl From<CouplingArg> for Coupling {
    fn from(c: CouplingArg) -> Self {
        match c {
            CouplingArg::CommonTheta => Coupling::CommonTheta,
            CouplingArg::IidPerEdge => Coupling::IidPerEdge,
        }
    }
}

/// Grid of values: a single number, a comma list, or `start:stop:step` (inclusive).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "String")]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GridRepr {
    Text(String),
    Number(f64),
    List(Vec<f64>),
}

impl TryFrom<GridRepr> for Grid {
    type Error = String;

    fn try_from(r: GridRepr) -> Result<Self, String> {
        match r {
            GridRepr::Text(s) => s.parse(),
            GridRepr::Number(x) => Ok(Grid::List(vec![x])),
            GridRepr::List(v) => Ok(Grid::List(v)),
        }
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            Grid::Range { start, stop, step } => write!(f, "{start}:{stop}:{step}"),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("`{}` is not a number", t.trim()));
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range `{s}` must look like start:stop:step"));
            }
            let g = Grid::Range { start: num(parts[0])?, stop: num(parts[1])?, step: num(parts[2])? };
            g.values()?;
            Ok(g)
        } else {
            Ok(Grid::List(s.split(',').map(num).collect::<Result<_, _>>()?))
        }
    }
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match *self {
            Grid::List(ref v) => {
                if v.is_empty() {
                    return Err("empty grid".into());
                }
                Ok(v.clone())
            }
            Grid::Range { start, stop, step } => {
                if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
                    return Err(format!("range {start}:{stop}:{step} needs step > 0 and stop >= start"));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if n > 100_000 {
                    return Err(format!("range {start}:{stop}:{step} has {n} points"));
                }
                Ok((0..n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
            }
        }
    }
}

/// Everything a run needs. Every field is optional so that a config file
/// and the command-line flags can be layered; see [`ExperimentConfig::merge`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    /// Family for `sweep`; implied by the other commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Family>,
    /// Chain lengths for transfer.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<usize>,
    /// Layout variants for rotate (rot5, rot7) or cnot (squashed-i, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variant: Vec<String>,
    /// Euler triples (zeta, nu, xi) for rotate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub euler: Vec<[f64; 3]>,
    /// Common unwanted phase grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<Grid>,
    /// Gaussian width grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Inputs>,
    /// Polar and azimuthal quadrature orders for Bloch averaging.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    /// Gauss-Hermite order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    /// Monte Carlo sample count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Cap on elementary evaluations per grid point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Bridge angle for bbb3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Bridge outcome for bbb3; both when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    /// CSV destination; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Optional TOML dump of the full fidelity report.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000_000;
pub const DEFAULT_SAMPLES: usize = 20_000;
pub const DEFAULT_ORDER: usize = 20;

macro_rules! overlay {
    ($dst:ident, $src:ident; opt: $($o:ident),*; vec: $($v:ident),*) => {
        $(if $src.$o.is_some() { $dst.$o = $src.$o.clone(); })*
        $(if !$src.$v.is_empty() { $dst.$v = $src.$v.clone(); })*
    };
}

fn field(name: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("field `{name}`: {msg}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Values set in `over` replace those in `self`.
    pub fn merge(mut self, over: &ExperimentConfig) -> Self {
        let dst = &mut self;
        overlay!(dst, over;
            opt: command, protocol, theta, sigma, inputs, bloch, a, c, mode, coupling, scheme, order, samples,
                 seed, budget, alpha, outcome, suite, output, report;
            vec: n, variant, euler);
        self
    }

    pub fn mode(&self) -> OutcomeMode {
        self.mode.unwrap_or(ModeArg::Exhaustive).into()
    }

    pub fn coupling(&self) -> Coupling {
        self.coupling.unwrap_or(CouplingArg::IidPerEdge).into()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    /// Family the protocol fields refer to.
    pub fn family(&self) -> Result<Family, CliError> {
        let implied = match self.command {
            Some(Command::Transfer) => Some(Family::Transfer),
            Some(Command::Rotate) => Some(Family::Rotate),
            Some(Command::Cnot) => Some(Family::Cnot),
            _ => None,
        };
        match (implied, self.protocol) {
            (Some(a), Some(b)) if a != b => Err(field("protocol", format!("{b:?} conflicts with the {a:?} command"))),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(field("protocol", "sweep needs transfer, rotate or cnot")),
        }
    }

    pub fn chain_lengths(&self) -> Result<Vec<usize>, CliError> {
        let n = if self.n.is_empty() { vec![3] } else { self.n.clone() };
        for v in &n {
            if !(2..=15).contains(v) {
                return Err(field("n", format!("{v} is outside 2..=15")));
            }
        }
        Ok(n)
    }

    pub fn rotation_variants(&self) -> Result<Vec<RotationVariant>, CliError> {
        if self.variant.is_empty() {
            return Ok(vec![RotationVariant::Rot5]);
        }
        self.variant
            .iter()
            .map(|v| match v.as_str() {
                "rot5" => Ok(RotationVariant::Rot5),
                "rot7" => Ok(RotationVariant::Rot7),
                other => Err(field("variant", format!("`{other}` is not rot5 or rot7"))),
            })
            .collect()
    }

    pub fn cnot_variants(&self) -> Result<Vec<CnotVariant>, CliError> {
        if self.variant.is_empty() {
            return Ok(vec![CnotVariant::SquashedI]);
        }
        self.variant
            .iter()
            .map(|v| {
                CnotVariant::ALL
                    .into_iter()
                    .find(|c| c.layout_name() == v)
                    .ok_or_else(|| field("variant", format!("`{v}` is not one of squashed-i, squashed-i-redundant, helix, cnot4")))
            })
            .collect()
    }

    pub fn euler_sets(&self) -> Result<Vec<[f64; 3]>, CliError> {
        let e = if self.euler.is_empty() { vec![[0.0; 3]] } else { self.euler.clone() };
        if e.iter().flatten().any(|x| !x.is_finite()) {
            return Err(field("euler", "angles must be finite"));
        }
        Ok(e)
    }

    /// The swept axis; a zero phase when neither grid is given.
    pub fn axis(&self) -> Result<(bool, Vec<f64>), CliError> {
        match (&self.theta, &self.sigma) {
            (Some(_), Some(_)) => Err(field("sigma", "give either theta or sigma, not both")),
            (Some(t), None) => Ok((false, t.values().map_err(|e| field("theta", e))?)),
            (None, Some(s)) => {
                let v = s.values().map_err(|e| field("sigma", e))?;
                if v.iter().any(|x| *x < 0.0) {
                    return Err(field("sigma", "widths must be >= 0"));
                }
                Ok((true, v))
            }
            (None, None) => Ok((false, vec![0.0])),
        }
    }

    pub fn gaussian_scheme(&self) -> Result<Option<GaussianScheme>, CliError> {
        if let Some(o) = self.order {
            if o == 0 || o > 200 {
                return Err(field("order", format!("{o} is outside 1..=200")));
            }
        }
        if let Some(s) = self.samples {
            if s < 2 {
                return Err(field("samples", "need at least two samples"));
            }
        }
        let seed = self.seed();
        Ok(match self.scheme.unwrap_or(Scheme::Auto) {
            Scheme::Auto => match (self.order, self.samples) {
                (Some(order), None) => Some(GaussianScheme::GaussHermite { order }),
                (None, Some(samples)) => Some(GaussianScheme::MonteCarlo { samples, seed }),
                (Some(_), Some(_)) => return Err(field("scheme", "set scheme explicitly when giving both order and samples")),
                (None, None) => None,
            },
            Scheme::GaussHermite => Some(GaussianScheme::GaussHermite { order: self.order.unwrap_or(DEFAULT_ORDER) }),
            Scheme::MonteCarlo => Some(GaussianScheme::MonteCarlo { samples: self.samples.unwrap_or(DEFAULT_SAMPLES), seed }),
            Scheme::Trigonometric => {
                if self.mode() != OutcomeMode::Exhaustive {
                    return Err(field("scheme", "trigonometric needs mode = exhaustive"));
                }
                Some(GaussianScheme::Trigonometric)
            }
        })
    }

    pub fn fixed_amplitude(&self, name: &'static str) -> Result<Option<f64>, CliError> {
        let v = match name {
            "a" => self.a,
            _ => self.c,
        };
        match v {
            Some(x) if !(0.0..=1.0).contains(&x) => Err(field(name, format!("{x} is outside [0, 1]"))),
            other => Ok(other),
        }
    }

    pub fn bloch_orders(&self, lines: usize) -> Result<[usize; 2], CliError> {
        let o = self.bloch.unwrap_or(if lines == 1 { [16, 16] } else { [8, 8] });
        if o[0] < 2 || o[1] < 1 {
            return Err(field("bloch", "need at least 2 polar and 1 azimuthal nodes"));
        }
        Ok(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!("0.6".parse::<Grid>().unwrap().values().unwrap(), vec![0.6]);
        assert_eq!("0,0.5,1".parse::<Grid>().unwrap().values().unwrap(), vec![0.0, 0.5, 1.0]);
        let r = "0:1.2:0.05".parse::<Grid>().unwrap().values().unwrap();
        assert_eq!(r.len(), 25);
        assert_eq!(r[3], 0.15);
        assert_eq!(*r.last().unwrap(), 1.2);
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("x".parse::<Grid>().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig { command: Some(Command::Transfer), n: vec![5], seed: Some(1), ..Default::default() };
        let flags = ExperimentConfig { seed: Some(9), ..Default::default() };
        let m = file.merge(&flags);
        assert_eq!(m.n, vec![5]);
        assert_eq!(m.seed, Some(9));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = ExperimentConfig::from_toml("command = \"transfer\"\nsigmma = 0.5\n").unwrap_err();
        assert!(e.to_string().contains("sigmma"), "{e}");
    }

    #[test]
    fn family_conflicts() {
        let c = ExperimentConfig { command: Some(Command::Transfer), protocol: Some(Family::Cnot), ..Default::default() };
        assert!(c.family().is_err());
        let s = ExperimentConfig { command: Some(Command::Sweep), ..Default::default() };
        assert!(s.family().is_err());
    }
}
