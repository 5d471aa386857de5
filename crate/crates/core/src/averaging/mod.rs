//! Outcome, input and phase averages.

mod channel;
mod gaussian;
mod quadrature;
mod sweep;

pub use channel::ChannelFidelity;
pub use gaussian::{default_scheme, derive_seed, evaluation_count, gauss_hermite_expectation, gaussian_average, Coupling, Estimate, GaussianScheme};
pub use quadrature::{bloch_average, haar_overlap_average, product_bloch_average, product_haar_overlap_average, BlochQuadrature};
pub use sweep::{
    input_averaged_fidelity, sweep, Axis, ExperimentSpec, FidelityReport, InputAveraging, PointEstimate, ProtocolSpec, Series, CLASSICAL_THRESHOLD,
};
