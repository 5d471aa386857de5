//! Measurement-based quantum computation on noisy cluster states.
//!
//! Cluster layouts are assembled from two- and three-site building blocks,
//! entangled with imperfect controlled-phase gates and consumed by adaptive
//! single-qubit measurements. Every outcome branch is decoded through its
//! Pauli frame and compared with the ideal logical gate.
//!
//! The kernels are generic over [`Real`]; `f64` aliases are provided.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod cluster;
pub mod error;
pub mod gate;
pub mod input;
pub mod pauliframe;
pub mod protocols;
pub mod scalar;
pub mod site;
pub mod statevector;

pub use error::{Error, Result};
pub use gate::{Gate2x2, Matrix};
pub use input::InputState;
pub use scalar::{Real, C};
pub use site::Site;
pub use statevector::{EigenCheck, Projection, StateVector};

pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type Gate64 = Gate2x2<f64>;
pub type Gate32 = Gate2x2<f32>;
pub type Matrix64 = Matrix<f64>;
pub type InputState64 = InputState<f64>;
pub type InputState32 = InputState<f32>;
pub type EdgePhases64 = cluster::EdgePhases<f64>;
pub type ProtocolResult64 = protocols::ProtocolResult<f64>;
pub type Channel64 = protocols::Channel<f64>;
