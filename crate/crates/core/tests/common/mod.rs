#![allow(dead_code)]

use mbqc_core::cluster::Params;
use mbqc_core::InputState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random qubit.
pub fn random_state(r: &mut ChaCha8Rng) -> InputState<f64> {
    let u: f64 = r.random_range(-1.0..1.0);
    let phi: f64 = r.random_range(0.0..std::f64::consts::TAU);
    InputState::from_bloch_cos(u, phi)
}

/// Angle parameters each built-in expects.
pub fn builtin_params(name: &str, r: &mut ChaCha8Rng) -> Params {
    let mut p = Params::new();
    let mut put = |k: &str, v: f64| {
        p.insert(k.to_string(), v);
    };
    match name {
        "bbb1" => put("alpha", r.random_range(-3.0..3.0)),
        "bbb3" => put("alpha", std::f64::consts::FRAC_PI_2),
        "box" => {
            put("alpha", r.random_range(-3.0..3.0));
            put("beta", r.random_range(-3.0..3.0));
        }
        "rot5" | "rot7" => {
            put("zeta", r.random_range(-3.0..3.0));
            put("nu", r.random_range(-3.0..3.0));
            put("xi", r.random_range(-3.0..3.0));
        }
        _ => {}
    }
    p
}
