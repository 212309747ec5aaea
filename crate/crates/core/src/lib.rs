//! Exact simulation and resource analysis of polarization-encoded W-state
//! fusion.
//!
//! The crate builds W states photon by photon, runs the optical fusion
//! gates (plain and Fredkin-enhanced) as exact operations, enumerates every
//! detection outcome with its probability, verifies the fused states and
//! computes expected resource costs for growing large W states from Bell
//! pairs.
//!
//! - [`state`]: sparse pure states over labeled polarization qubits.
//! - [`optics`]: half-wave plate, polarizing beamsplitter, Fredkin gate and
//!   diagonal-basis projection.
//! - [`fusion`]: the end-to-end protocols with exhaustive branch
//!   enumeration and feed-forward correction.
//! - [`strategy`]: closed-form probabilities, cost recursions and Monte
//!   Carlo cross-checks.

pub mod error;
mod exact;
pub mod fusion;
pub mod optics;
pub mod state;
pub mod strategy;

pub use error::{Error, Result};
pub use fusion::{
    enumerate_input_cases, feed_forward_correct, fuse, fuse_fg, fuse_fgf, BranchClass,
    DetectionOutcome, FusionReport, GateKind, InputCase,
};
pub use optics::{
    apply_fredkin, apply_hwp, project_diagonal, route_pbs, DetectorArm, DiagonalOutcome, PbsPort,
};
pub use state::{
    apply_single_qubit, fidelity, make_w_state, tensor, w_recursion_check, BasisKet, Party,
    PhotonLabel, PhotonRegister, Polarization, PureState, Site,
};
pub use strategy::{
    expected_cost, literature_constants, monte_carlo_growth, p_fg, p_fgf, CostModel, CostResult,
    McStats, PairingPolicy, RecyclePolicy,
};

pub use num_rational::Rational64;
