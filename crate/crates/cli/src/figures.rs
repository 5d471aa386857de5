//! Full data grids behind the transfer, rotation and CNOT fidelity plots.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use mbqc_core::averaging::{
    sweep, Axis, Coupling, ExperimentSpec, FidelityReport, GaussianScheme, InputAveraging, ProtocolSpec, CLASSICAL_THRESHOLD,
};
use mbqc_core::protocols::{CnotVariant, Euler, OutcomeMode, RotationVariant};

use crate::config::{Grid, DEFAULT_BUDGET};
use crate::error::CliError;
use crate::output::{fmt_coord, fmt_value, Table};
use crate::run::report_table;

pub const FIGURES: [&str; 6] = ["fig6a", "fig6b", "fig8a", "fig8b", "fig9a", "fig9b"];

/// Euler sets (zeta, nu, xi) of the rotation plots, with their column labels.
pub const EULER_SETS: [(&str, [f64; 3]); 4] = [
    ("pi/4_0_0", [FRAC_PI_4, 0.0, 0.0]),
    ("pi/2_pi/2_0", [FRAC_PI_2, FRAC_PI_2, 0.0]),
    ("0_pi/4_pi/4", [0.0, FRAC_PI_4, FRAC_PI_4]),
    ("0_pi_0", [0.0, PI, 0.0]),
];

/// Gauss-Hermite orders per noisy edge for the rotation plots (4 and 6 edges).
pub const FIG6A_ORDER: usize = 10;
pub const FIG6B_ORDER: usize = 6;
pub const FIG8B_SAMPLES: usize = crate::config::DEFAULT_SAMPLES;
pub const FIG8B_BLOCH: [usize; 2] = [8, 8];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureOptions {
    pub seed: u64,
    /// Monte Carlo samples for fig8b.
    pub samples: Option<usize>,
    /// Bloch orders for fig8b.
    pub bloch: Option<[usize; 2]>,
    pub budget: Option<u64>,
}

fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    Grid::Range { start, stop, step }.values().expect("static grid")
}

fn spec(
    series: Vec<(String, ProtocolSpec)>,
    axis: Axis,
    inputs: InputAveraging,
    mode: OutcomeMode,
    coupling: Coupling,
    scheme: Option<GaussianScheme>,
    o: &FigureOptions,
) -> ExperimentSpec {
    ExperimentSpec { series, axis, inputs, mode, coupling, scheme, seed: o.seed, budget: o.budget.unwrap_or(DEFAULT_BUDGET) }
}

fn rotation_series(variant: RotationVariant) -> Vec<(String, ProtocolSpec)> {
    EULER_SETS.iter().map(|(l, e)| (l.to_string(), ProtocolSpec::Rotation { variant, euler: Euler::new(e[0], e[1], e[2]) })).collect()
}

pub fn rotation_report(variant: RotationVariant, order: usize, o: &FigureOptions) -> Result<FidelityReport, CliError> {
    let s = spec(
        rotation_series(variant),
        Axis::Sigma(grid(0.0, 1.0, 0.05)),
        InputAveraging::Bloch { polar: 16, azimuth: 16 },
        OutcomeMode::PostselectZeros,
        Coupling::IidPerEdge,
        Some(GaussianScheme::GaussHermite { order }),
        o,
    );
    Ok(sweep::<f64>(&s)?)
}

/// Transfer curves F3..F9 against a common phase.
pub fn fig9a(o: &FigureOptions) -> Result<Table, CliError> {
    let series = [3, 5, 7, 9].into_iter().map(|n| (format!("F{n}"), ProtocolSpec::Transfer { n })).collect();
    let s = spec(series, Axis::Theta(grid(0.0, 1.2, 0.05)), InputAveraging::Haar, OutcomeMode::Exhaustive, Coupling::CommonTheta, None, o);
    Ok(report_table(&sweep::<f64>(&s)?, true))
}

/// Gaussian-averaged transfer against chain length, one column per width.
pub fn fig9b(o: &FigureOptions) -> Result<Table, CliError> {
    let sigmas = [0.5, 1.0];
    let mut t = Table::new(["n", "sigma_0.5", "sigma_1", "threshold"]);
    for n in 2..=9 {
        let s = spec(
            vec![(format!("F{n}"), ProtocolSpec::Transfer { n })],
            Axis::Sigma(sigmas.to_vec()),
            InputAveraging::Haar,
            OutcomeMode::Exhaustive,
            Coupling::IidPerEdge,
            Some(GaussianScheme::Trigonometric),
            o,
        );
        let r = sweep::<f64>(&s)?;
        let mut row = vec![n.to_string()];
        row.extend(r.series[0].points.iter().map(|p| fmt_value(p.mean)));
        row.push(fmt_value(CLASSICAL_THRESHOLD));
        t.push(row);
    }
    Ok(t)
}

/// Postselected five-qubit rotation fidelity against sigma for each Euler set.
pub fn fig6a(o: &FigureOptions) -> Result<Table, CliError> {
    Ok(report_table(&rotation_report(RotationVariant::Rot5, FIG6A_ORDER, o)?, false))
}

/// Five-qubit minus seven-qubit rotation fidelity for each Euler set.
pub fn fig6b(o: &FigureOptions) -> Result<Table, CliError> {
    let r5 = rotation_report(RotationVariant::Rot5, FIG6B_ORDER, o)?;
    let r7 = rotation_report(RotationVariant::Rot7, FIG6B_ORDER, o)?;
    let mut t = Table::new(std::iter::once("sigma".to_string()).chain(EULER_SETS.iter().map(|(l, _)| l.to_string())));
    for (i, x) in r5.axis.iter().enumerate() {
        let mut row = vec![fmt_coord(*x)];
        for (a, b) in r5.series.iter().zip(&r7.series) {
            row.push(fmt_value(a.points[i].mean - b.points[i].mean));
        }
        t.push(row);
    }
    Ok(t)
}

/// Postselected squashed-I fidelity over (a = c, theta), long format.
pub fn fig8a(o: &FigureOptions) -> Result<Table, CliError> {
    let thetas = grid(0.0, 3.1, 0.1);
    let mut t = Table::new(["a", "theta", "fidelity"]);
    for a in grid(0.0, 1.0, 0.05) {
        let s = spec(
            vec![("squashed-i".into(), ProtocolSpec::Cnot { variant: CnotVariant::SquashedI })],
            Axis::Theta(thetas.clone()),
            InputAveraging::Fixed { amplitudes: vec![a, a] },
            OutcomeMode::PostselectZeros,
            Coupling::CommonTheta,
            None,
            o,
        );
        let r = sweep::<f64>(&s)?;
        for (th, p) in r.axis.iter().zip(&r.series[0].points) {
            t.push(vec![fmt_coord(a), fmt_coord(*th), fmt_value(p.mean)]);
        }
    }
    Ok(t)
}

/// Postselected, Bloch-averaged CNOT fidelity of every layout against sigma.
pub fn fig8b(o: &FigureOptions) -> Result<Table, CliError> {
    let [polar, azimuth] = o.bloch.unwrap_or(FIG8B_BLOCH);
    let series = [CnotVariant::Cnot4, CnotVariant::Helix, CnotVariant::SquashedI, CnotVariant::SquashedIRedundant]
        .into_iter()
        .map(|v| (v.layout_name().to_string(), ProtocolSpec::Cnot { variant: v }))
        .collect();
    let s = spec(
        series,
        Axis::Sigma(grid(0.0, 1.0, 0.1)),
        InputAveraging::Bloch { polar, azimuth },
        OutcomeMode::PostselectZeros,
        Coupling::IidPerEdge,
        Some(GaussianScheme::MonteCarlo { samples: o.samples.unwrap_or(FIG8B_SAMPLES), seed: o.seed }),
        o,
    );
    Ok(report_table(&sweep::<f64>(&s)?, false))
}

pub fn figure(name: &str, o: &FigureOptions) -> Result<Table, CliError> {
    match name {
        "fig6a" => fig6a(o),
        "fig6b" => fig6b(o),
        "fig8a" => fig8a(o),
        "fig8b" => fig8b(o),
        "fig9a" => fig9a(o),
        "fig9b" => fig9b(o),
        other => Err(CliError::Config(format!("unknown figure `{other}`; expected one of {}", FIGURES.join(", ")))),
    }
}
