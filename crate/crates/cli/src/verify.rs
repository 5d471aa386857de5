//! Self-check suites: stabilizers, schedule equivalence and θ=0 decoding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mbqc_core::cluster::{builtin_layout, correlation_eigencheck, entangle_all, EdgePhases, Params, PhaseAssignment, BUILTIN_NAMES};
use mbqc_core::pauliframe::LogicalProgram;
use mbqc_core::protocols::circuits::equivalent_circuit;
use mbqc_core::protocols::{execute, OutcomeMode, Plan, Protocol, Schedule};
use mbqc_core::{EigenCheck, InputState, C};

use crate::config::Suite;
use crate::output::Table;

const TOL: f64 = 1e-10;

/// Layouts built by concatenating blocks (no redundant sites).
pub const CONCATENATED: &[&str] = &["bbb1", "bbb2", "bbb3", "box", "cnot4", "rot5", "bridge-ebb", "helix", "squashed-i"];

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

fn check(suite: &'static str, case: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { suite, case: case.into(), passed, detail: detail.into() }
}

fn random_input(r: &mut ChaCha8Rng) -> InputState<f64> {
    InputState::from_bloch_cos(r.random_range(-1.0..1.0), r.random_range(0.0..std::f64::consts::TAU))
}

/// Parameter values each built-in is exercised with.
pub fn sample_params(name: &str, r: &mut ChaCha8Rng) -> Params {
    let mut p = Params::new();
    let keys: &[&str] = match name {
        "bbb1" => &["alpha"],
        "box" => &["alpha", "beta"],
        "rot5" | "rot7" => &["zeta", "nu", "xi"],
        _ => &[],
    };
    for k in keys {
        p.insert((*k).to_string(), r.random_range(-3.0..3.0));
    }
    if name == "bbb3" {
        p.insert("alpha".into(), std::f64::consts::FRAC_PI_2);
    }
    p
}

pub fn stabilizer() -> Vec<Check> {
    let mut out = Vec::new();
    for name in BUILTIN_NAMES {
        let run = || -> mbqc_core::Result<(bool, bool, f64)> {
            let l = builtin_layout(name)?;
            let ideal = entangle_all::<f64>(&l, &EdgePhases::zero(&l))?;
            let noisy = entangle_all::<f64>(&l, &EdgePhases::common(&l, 0.5))?;
            let mut all_plus = true;
            let mut all_fail = true;
            let mut min_res = f64::INFINITY;
            for s in &l.sites {
                all_plus &= correlation_eigencheck(&ideal, &l, *s)? == EigenCheck::Eigenvalue(1);
                match correlation_eigencheck(&noisy, &l, *s)? {
                    EigenCheck::NotEigen { residual } => min_res = min_res.min(residual),
                    EigenCheck::Eigenvalue(_) => all_fail = false,
                }
            }
            Ok((all_plus, all_fail, min_res))
        };
        match run() {
            Ok((plus, fail, res)) => {
                out.push(check("stabilizer", format!("{name} ideal"), plus, "eigenvalue +1 at every site"));
                out.push(check("stabilizer", format!("{name} theta=0.5"), fail && res > 0.0, format!("min residual {res:.3e}")));
            }
            Err(e) => out.push(check("stabilizer", *name, false, e.to_string())),
        }
    }
    out
}

pub fn observation1(seed: u64) -> Vec<Check> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for name in CONCATENATED {
        let params = sample_params(name, &mut r);
        let mut run = || -> mbqc_core::Result<f64> {
            let l = builtin_layout(name)?;
            let staged = Plan::new(&l, Schedule::Staged)?;
            let mono = Plan::new(&l, Schedule::Monolithic)?;
            let mut worst = 0.0f64;
            for trial in 0..2u64 {
                let ph = if trial == 0 {
                    EdgePhases::zero(&l)
                } else {
                    PhaseAssignment::IidGaussian { sigma: 0.8, seed: seed ^ 0x5eed }.resolve::<f64>(&l)?
                };
                let inputs: Vec<_> = (0..l.lines).map(|_| random_input(&mut r)).collect();
                let a = execute(&l, &staged, &ph, &params, &inputs, OutcomeMode::Exhaustive)?;
                let b = execute(&l, &mono, &ph, &params, &inputs, OutcomeMode::Exhaustive)?;
                if a.len() != b.len() {
                    return Ok(f64::INFINITY);
                }
                for (x, y) in a.iter().zip(&b) {
                    if x.outcomes != y.outcomes || x.state.labels() != y.state.labels() {
                        return Ok(f64::INFINITY);
                    }
                    for (u, v) in x.state.amplitudes().iter().zip(y.state.amplitudes()) {
                        worst = worst.max((u - v).norm());
                    }
                }
            }
            Ok(worst)
        };
        match run() {
            Ok(d) => out.push(check("observation1", *name, d < TOL, format!("max amplitude difference {d:.3e}"))),
            Err(e) => out.push(check("observation1", *name, false, e.to_string())),
        }
    }
    out
}

/// Every branch of every built-in, decoded, against the drawn circuit at θ=0.
pub fn oracle(seed: u64) -> Vec<Check> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for name in BUILTIN_NAMES {
        let params = sample_params(name, &mut r);
        let mut run = || -> mbqc_core::Result<(f64, f64, f64)> {
            let p = Protocol::builtin(name, params.clone())?;
            let circ = equivalent_circuit::<f64>(name, &params)?;
            let prog = LogicalProgram::from_layout(&p.layout)?.unitary::<f64>(&params)?;
            let ch = p.channel(&EdgePhases::<f64>::zero(&p.layout), OutcomeMode::Exhaustive, Schedule::Lazy)?;
            let m = ch.branches.len() as f64;
            let mut worst_f = 0.0f64;
            let mut worst_p = 0.0f64;
            for _ in 0..20 {
                let ins: Vec<_> = (0..p.lines()).map(|_| random_input(&mut r)).collect();
                let mut psi = vec![C::new(1.0, 0.0)];
                for s in &ins {
                    let a = s.amplitudes();
                    let mut next: Vec<C<f64>> = psi.iter().map(|x| x * a[0]).collect();
                    next.extend(psi.iter().map(|x| x * a[1]));
                    psi = next;
                }
                let want = circ.apply(&psi);
                let mut total = 0.0;
                for (_, k) in &ch.branches {
                    let got = k.apply(&psi);
                    let pr: f64 = got.iter().map(|x| x.norm_sqr()).sum();
                    total += pr;
                    worst_p = worst_p.max((pr * m - 1.0).abs());
                    let ov: C<f64> = want.iter().zip(&got).map(|(w, g)| w.conj() * g).sum();
                    worst_f = worst_f.max((1.0 - ov.norm_sqr() / pr).abs());
                }
                worst_p = worst_p.max((total - 1.0).abs());
            }
            Ok((worst_f, worst_p, prog.distance_up_to_phase(&circ)))
        };
        match run() {
            Ok((f, pr, d)) => out.push(check(
                "oracle",
                *name,
                f < TOL && pr < TOL && d < TOL,
                format!("max infidelity {f:.3e}, probability error {pr:.3e}, circuit distance {d:.3e}"),
            )),
            Err(e) => out.push(check("oracle", *name, false, e.to_string())),
        }
    }
    out
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Stabilizer => stabilizer(),
        Suite::Observation1 => observation1(seed),
        Suite::Oracle => oracle(seed),
        Suite::All => {
            let mut v = stabilizer();
            v.extend(observation1(seed));
            v.extend(oracle(seed));
            v
        }
    }
}

pub fn table(checks: &[Check]) -> Table {
    let mut t = Table::new(["suite", "case", "result", "detail"]);
    for c in checks {
        t.push(vec![c.suite.into(), c.case.clone(), if c.passed { "pass" } else { "FAIL" }.into(), c.detail.clone()]);
    }
    t
}
