//! Turning a config into a sweep and a sweep into a table.

use mbqc_core::averaging::{sweep, Axis, ExperimentSpec, FidelityReport, InputAveraging, ProtocolSpec, CLASSICAL_THRESHOLD};
use mbqc_core::protocols::{bbb3_matrix, Euler, OutcomeMode};

use crate::config::{Command, ExperimentConfig, Family, Inputs};
use crate::error::CliError;
use crate::output::{fmt_coord, fmt_value, Table};
use crate::verify;

/// Result of one run: the CSV table plus what else the caller may persist.
#[derive(Clone, Debug)]
pub struct Output {
    pub table: Table,
    pub report: Option<FidelityReport>,
    /// Human-readable lines (verify only).
    pub log: Vec<String>,
    pub failures: usize,
}

impl Output {
    fn table(table: Table) -> Self {
        Output { table, report: None, log: Vec::new(), failures: 0 }
    }
}

fn config_err(name: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{name}`: {msg}"))
}

pub fn euler_label(e: &[f64; 3]) -> String {
    e.iter().map(|x| fmt_coord(*x)).collect::<Vec<_>>().join("_")
}

fn series(cfg: &ExperimentConfig, family: Family) -> Result<Vec<(String, ProtocolSpec)>, CliError> {
    Ok(match family {
        Family::Transfer => cfg.chain_lengths()?.into_iter().map(|n| (format!("F{n}"), ProtocolSpec::Transfer { n })).collect(),
        Family::Rotate => {
            let eulers = cfg.euler_sets()?;
            let mut out = Vec::new();
            for v in cfg.rotation_variants()? {
                for e in &eulers {
                    let name = if eulers.len() == 1 { v.layout_name().to_string() } else { format!("{}@{}", v.layout_name(), euler_label(e)) };
                    out.push((name, ProtocolSpec::Rotation { variant: v, euler: Euler::new(e[0], e[1], e[2]) }));
                }
            }
            out
        }
        Family::Cnot => cfg.cnot_variants()?.into_iter().map(|v| (v.layout_name().to_string(), ProtocolSpec::Cnot { variant: v })).collect(),
    })
}

fn inputs(cfg: &ExperimentConfig, lines: usize) -> Result<InputAveraging, CliError> {
    let a = cfg.fixed_amplitude("a")?;
    let c = cfg.fixed_amplitude("c")?;
    if c.is_some() && lines == 1 {
        return Err(config_err("c", "only two-line protocols take a target input"));
    }
    let kind = cfg.inputs.unwrap_or(if a.is_some() || c.is_some() {
        Inputs::Fixed
    } else if cfg.mode() == OutcomeMode::Exhaustive {
        Inputs::Haar
    } else {
        Inputs::Bloch
    });
    if kind != Inputs::Fixed && (a.is_some() || c.is_some()) {
        return Err(config_err("inputs", "a and c only apply to fixed inputs"));
    }
    Ok(match kind {
        Inputs::Fixed => {
            let a = a.ok_or_else(|| config_err("a", "fixed inputs need a"))?;
            let mut amplitudes = vec![a];
            if lines == 2 {
                amplitudes.push(c.ok_or_else(|| config_err("c", "fixed two-line inputs need c"))?);
            }
            InputAveraging::Fixed { amplitudes }
        }
        Inputs::Haar => {
            if cfg.mode() != OutcomeMode::Exhaustive {
                return Err(config_err("inputs", "haar needs mode = exhaustive; use bloch"));
            }
            InputAveraging::Haar
        }
        Inputs::Bloch => {
            let [polar, azimuth] = cfg.bloch_orders(lines)?;
            InputAveraging::Bloch { polar, azimuth }
        }
    })
}

/// Sweep spec for the transfer, rotate, cnot and sweep commands.
pub fn experiment(cfg: &ExperimentConfig) -> Result<(ExperimentSpec, Family), CliError> {
    let family = cfg.family()?;
    let lines = if family == Family::Cnot { 2 } else { 1 };
    let (is_sigma, values) = cfg.axis()?;
    let spec = ExperimentSpec {
        series: series(cfg, family)?,
        axis: if is_sigma { Axis::Sigma(values) } else { Axis::Theta(values) },
        inputs: inputs(cfg, lines)?,
        mode: cfg.mode(),
        coupling: cfg.coupling(),
        scheme: cfg.gaussian_scheme()?,
        seed: cfg.seed(),
        budget: cfg.budget(),
    };
    Ok((spec, family))
}

/// One row per grid value; a lone series is called `fidelity`.
pub fn report_table(report: &FidelityReport, threshold: bool) -> Table {
    let single = report.series.len() == 1;
    let mut header = vec![report.axis_name.clone()];
    let mut with_err = Vec::new();
    for s in &report.series {
        let name = if single { "fidelity".to_string() } else { s.name.clone() };
        let has_err = s.points.iter().any(|p| p.stderr.is_some());
        header.push(name.clone());
        if has_err {
            header.push(if single { "stderr".into() } else { format!("{name}_stderr") });
        }
        with_err.push(has_err);
    }
    if threshold {
        header.push("threshold".into());
    }
    let mut t = Table::new(header);
    for (i, x) in report.axis.iter().enumerate() {
        let mut row = vec![fmt_coord(*x)];
        for (s, e) in report.series.iter().zip(&with_err) {
            row.push(fmt_value(s.points[i].mean));
            if *e {
                row.push(fmt_value(s.points[i].stderr.unwrap_or(0.0)));
            }
        }
        if threshold {
            row.push(fmt_value(CLASSICAL_THRESHOLD));
        }
        t.push(row);
    }
    t
}

fn bbb3_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let alpha = cfg.alpha.unwrap_or(std::f64::consts::FRAC_PI_2);
    if !alpha.is_finite() {
        return Err(config_err("alpha", "must be finite"));
    }
    let outcomes: Vec<u8> = match cfg.outcome {
        None => vec![0, 1],
        Some(o @ (0 | 1)) => vec![o],
        Some(o) => return Err(config_err("outcome", format!("{o} is not 0 or 1"))),
    };
    let mut t = Table::new(["outcome", "row", "col", "re", "im"]);
    for o in outcomes {
        let m = bbb3_matrix::<f64>(alpha, o == 1)?;
        for r in 0..m.dim() {
            for c in 0..m.dim() {
                let v = m.get(r, c);
                t.push(vec![o.to_string(), r.to_string(), c.to_string(), fmt_value(v.re), fmt_value(v.im)]);
            }
        }
    }
    Ok(t)
}

pub fn run(cfg: &ExperimentConfig) -> Result<Output, CliError> {
    let command = cfg.command.ok_or_else(|| config_err("command", "missing"))?;
    match command {
        Command::Bbb3 => Ok(Output::table(bbb3_table(cfg)?)),
        Command::Verify => {
            let checks = verify::run_suite(cfg.suite.unwrap_or(crate::config::Suite::All), cfg.seed());
            let log = checks.iter().map(|c| format!("{} {}/{}: {}", if c.passed { "PASS" } else { "FAIL" }, c.suite, c.case, c.detail)).collect();
            let failures = checks.iter().filter(|c| !c.passed).count();
            Ok(Output { table: verify::table(&checks), report: None, log, failures })
        }
        Command::Transfer | Command::Rotate | Command::Cnot | Command::Sweep => {
            let (spec, family) = experiment(cfg)?;
            let report = sweep::<f64>(&spec)?;
            let table = report_table(&report, family == Family::Transfer);
            Ok(Output { table, report: Some(report), log: Vec::new(), failures: 0 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_toml(text).unwrap()
    }

    #[test]
    fn transfer_at_zero_is_perfect() {
        let out = run(&cfg("command = \"transfer\"\nn = [3]\ntheta = 0")).unwrap();
        assert_eq!(out.table.header, ["theta", "fidelity", "threshold"]);
        assert_eq!(out.table.column("fidelity").unwrap(), ["1.000000000000"]);
    }

    #[test]
    fn input_defaults_follow_mode() {
        let c = cfg("command = \"cnot\"");
        assert_eq!(experiment(&c).unwrap().0.inputs, InputAveraging::Haar);
        let c = cfg("command = \"cnot\"\nmode = \"postselect-zeros\"");
        assert_eq!(experiment(&c).unwrap().0.inputs, InputAveraging::Bloch { polar: 8, azimuth: 8 });
        let c = cfg("command = \"cnot\"\na = 0.5");
        assert!(matches!(experiment(&c), Err(CliError::Config(m)) if m.contains("`c`")));
        let c = cfg("command = \"rotate\"\na = 0.5\nc = 0.5");
        assert!(matches!(experiment(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn multi_series_columns() {
        let out =
            run(&cfg("command = \"rotate\"\nvariant = [\"rot5\", \"rot7\"]\nsigma = \"0,0.5\"\nscheme = \"monte-carlo\"\nsamples = 50")).unwrap();
        assert_eq!(out.table.header, ["sigma", "rot5", "rot5_stderr", "rot7", "rot7_stderr"]);
        assert_eq!(out.table.rows.len(), 2);
    }

    #[test]
    fn bbb3_lists_both_outcomes() {
        let out = run(&cfg("command = \"bbb3\"")).unwrap();
        assert_eq!(out.table.rows.len(), 32);
        assert_eq!(out.table.rows[0][..3], ["0", "0", "0"]);
    }
}
