use crate::fusion::BranchClass;
use crate::state::PhotonLabel;
use thiserror::Error;

/// Errors reported by state construction, optical operations and the
/// strategy analyzer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be at least {min} (got {got})")]
    TooSmall {
        what: &'static str,
        got: usize,
        min: usize,
    },

    #[error("duplicate photon label {0} in register")]
    DuplicateLabel(PhotonLabel),

    #[error("photon registers overlap at label {0}")]
    OverlappingRegisters(PhotonLabel),

    #[error("photon {0} is not in the register")]
    UnknownPhoton(PhotonLabel),

    #[error("register sizes differ ({left} vs {right} photons)")]
    ShapeMismatch { left: usize, right: usize },

    #[error("basis ket length {ket_len} does not match register size {register_len}")]
    KetLengthMismatch { ket_len: usize, register_len: usize },

    #[error("matrix is not unitary (max deviation {max_deviation:.3e} exceeds {tol:.0e})")]
    NotUnitary { max_deviation: f64, tol: f64 },

    #[error("gate photon labels must be distinct")]
    DuplicateGatePhotons,

    #[error("feed-forward correction applies only to success branches (got {0})")]
    NotSuccessBranch(BranchClass),

    #[error("unknown pairing strategy '{0}' (available: balanced-tree, incremental)")]
    UnknownStrategy(String),

    #[error("primitive cost must be nonnegative (got {0})")]
    NegativeCost(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
