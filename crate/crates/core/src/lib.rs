//! Simulator and learning library for quantum weightless neural networks.
//!
//! * [`qstate`]: sparse state vectors over named qubit registers.
//! * [`ops`]: oracles, memory-read operators, counters and the nonlinear OR.
//! * [`wnn`]: classical RAM networks and the brute-force oracle.
//! * [`qwnn`]: qRAM networks as permutations of a sparse state.
//! * [`sal`]: bit-by-bit learning of selectors and architectures.
//! * [`data`]: bundled datasets and the dataset text format.
//!
//! Amplitude arithmetic is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod data;
pub mod error;
pub mod ops;
pub mod qstate;
pub mod qwnn;
pub mod sal;
pub mod scalar;
pub mod wnn;

pub use data::{Dataset, Pattern};
pub use error::{Error, Result};
pub use qstate::{BasisLabel, Field, Qubit, RegisterLayout, SingleQubitGate, SparseState};
pub use qwnn::{QLayoutPlan, QNetworkOperator};
pub use sal::{LOrder, SalConfig, SalOutcome, SalStatus, SalTrace};
pub use scalar::Real;
pub use wnn::{Architecture, OracleHit, RamNeuron, SelectorString, Source};

pub type Amplitude = num_complex::Complex<f64>;
pub type State = SparseState<f64>;
pub type StateF32 = SparseState<f32>;
pub type Gate = SingleQubitGate<f64>;
pub type QplnParams = ops::QplnParams<f64>;
