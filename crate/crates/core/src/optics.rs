//! The optical elements of the fusion setup as exact operations:
//! half-wave-plate rotation, polarizing-beamsplitter routing, the Fredkin
//! (controlled-SWAP) gate and projection onto the diagonal basis.
//!
//! Detectors are ideal: unit efficiency, perfect discrimination. Each
//! detector unit is modeled abstractly as arm occupancy plus a D/Dbar
//! result per photon; loss is out of scope.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{BasisKet, Polarization, PhotonLabel, PureState};

/// One of the two detector arms behind the beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DetectorArm {
    D1,
    D2,
}

impl fmt::Display for DetectorArm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DetectorArm::D1 => write!(f, "D1"),
            DetectorArm::D2 => write!(f, "D2"),
        }
    }
}

/// Result of measuring one photon in the diagonal basis,
/// |D> = (|H>+|V>)/sqrt(2) or |Dbar> = (|H>-|V>)/sqrt(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DiagonalOutcome {
    D,
    Dbar,
}

impl DiagonalOutcome {
    /// Overlap <outcome|pol>.
    pub fn overlap(self, pol: Polarization) -> f64 {
        match (self, pol) {
            (DiagonalOutcome::Dbar, Polarization::V) => -std::f64::consts::FRAC_1_SQRT_2,
            _ => std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

impl fmt::Display for DiagonalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagonalOutcome::D => write!(f, "D"),
            DiagonalOutcome::Dbar => write!(f, "Dbar"),
        }
    }
}

/// Beamsplitter input port. Mode 1 carries Alice's gate photon, mode 2
/// Bob's (after the half-wave plate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbsPort {
    Mode1,
    Mode2,
}

/// Half-wave-plate action on one photon: H and V amplitudes swapped
/// (exact Pauli-X; waveplate phases are global within each branch and
/// do not affect probabilities or fidelities).
pub fn apply_hwp(state: &PureState, photon: PhotonLabel) -> Result<PureState> {
    let pos = state
        .register()
        .position(photon)
        .ok_or(Error::UnknownPhoton(photon))?;
    let mut amplitudes = std::collections::BTreeMap::new();
    for (ket, amp) in state.amplitudes() {
        amplitudes.insert(ket.flipped_at(pos), *amp);
    }
    PureState::new(state.register().clone(), amplitudes)
}

/// Controlled-SWAP: for every basis ket, exchanges the two target
/// polarizations when the control photon is V; linear extension to
/// superpositions. Self-inverse.
pub fn apply_fredkin(
    state: &PureState,
    control: PhotonLabel,
    target1: PhotonLabel,
    target2: PhotonLabel,
) -> Result<PureState> {
    if control == target1 || control == target2 || target1 == target2 {
        return Err(Error::DuplicateGatePhotons);
    }
    let register = state.register();
    let c = register
        .position(control)
        .ok_or(Error::UnknownPhoton(control))?;
    let t1 = register
        .position(target1)
        .ok_or(Error::UnknownPhoton(target1))?;
    let t2 = register
        .position(target2)
        .ok_or(Error::UnknownPhoton(target2))?;

    let mut amplitudes = std::collections::BTreeMap::new();
    for (ket, amp) in state.amplitudes() {
        let new_ket = if ket.pol_at(c) == Polarization::V {
            ket.swapped(t1, t2)
        } else {
            ket.clone()
        };
        amplitudes.insert(new_ket, *amp);
    }
    PureState::new(register.clone(), amplitudes)
}

/// Deterministic polarization-preserving routing through the beamsplitter.
///
/// The table is the unique routing consistent with the four detection
/// cases of the fusion gate: photons entering with orthogonal polarizations
/// (same polarization before the mode-2 half-wave plate) bunch on one arm,
/// same-polarization pairs produce a coincidence.
pub fn route_pbs(input_port: PbsPort, pol: Polarization) -> DetectorArm {
    match (input_port, pol) {
        (PbsPort::Mode1, Polarization::H) => DetectorArm::D1,
        (PbsPort::Mode1, Polarization::V) => DetectorArm::D2,
        (PbsPort::Mode2, Polarization::H) => DetectorArm::D2,
        (PbsPort::Mode2, Polarization::V) => DetectorArm::D1,
    }
}

/// Projects one photon onto a diagonal-basis outcome and removes it from
/// the register. Returns the unnormalized residual state and the branch
/// weight (its squared norm). The weights of the two outcomes for the same
/// photon sum to the squared norm of the input.
pub fn project_diagonal(
    state: &PureState,
    photon: PhotonLabel,
    outcome: DiagonalOutcome,
) -> Result<(PureState, f64)> {
    let pos = state
        .register()
        .position(photon)
        .ok_or(Error::UnknownPhoton(photon))?;
    let reduced_register = state.register().without_index(pos);

    let mut amplitudes: std::collections::BTreeMap<BasisKet, Complex64> =
        std::collections::BTreeMap::new();
    for (ket, amp) in state.amplitudes() {
        let coeff = outcome.overlap(ket.pol_at(pos));
        let residual_ket = ket.without_index(pos);
        *amplitudes
            .entry(residual_ket)
            .or_insert(Complex64::new(0.0, 0.0)) += coeff * amp;
    }
    let residual = PureState::new(reduced_register, amplitudes)?;
    let weight = residual.norm_sqr();
    Ok((residual, weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{
        fidelity, make_w_state, tensor, Party, PhotonRegister, PRUNE_THRESHOLD,
    };
    use approx::assert_abs_diff_eq;

    fn ket(s: &str) -> BasisKet {
        BasisKet::new(
            s.chars()
                .map(|c| match c {
                    'H' => Polarization::H,
                    'V' => Polarization::V,
                    _ => panic!("bad ket char"),
                })
                .collect(),
        )
    }

    fn three_photon_register() -> PhotonRegister {
        PhotonRegister::new(vec![
            PhotonLabel::mode1(),
            PhotonLabel::mode2(),
            PhotonLabel::ancilla(),
        ])
        .unwrap()
    }

    fn basis(s: &str) -> PureState {
        let register = match s.len() {
            1 => PhotonRegister::new(vec![PhotonLabel::mode1()]).unwrap(),
            3 => three_photon_register(),
            n => panic!("unexpected ket size {n}"),
        };
        PureState::basis_state(register, ket(s)).unwrap()
    }

    #[test]
    fn hwp_exchanges_h_and_v() {
        let flipped = apply_hwp(&basis("H"), PhotonLabel::mode1()).unwrap();
        assert_abs_diff_eq!(flipped.amplitude(&ket("V")).re, 1.0, epsilon = 1e-15);
        let back = apply_hwp(&flipped, PhotonLabel::mode1()).unwrap();
        assert_abs_diff_eq!(back.amplitude(&ket("H")).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hwp_leaves_x_eigenstate_unchanged() {
        let plus = crate::state::apply_single_qubit(
            &basis("H"),
            PhotonLabel::mode1(),
            &crate::state::hadamard(),
        )
        .unwrap();
        let rotated = apply_hwp(&plus, PhotonLabel::mode1()).unwrap();
        assert_abs_diff_eq!(fidelity(&rotated, &plus).unwrap(), 1.0, epsilon = 1e-12);
    }

    /// Full controlled-SWAP truth table, including |VVH> -> |VHV>.
    const FREDKIN_TRUTH_TABLE: [(&str, &str); 8] = [
        ("HHH", "HHH"),
        ("HHV", "HHV"),
        ("HVH", "HVH"),
        ("HVV", "HVV"),
        ("VHH", "VHH"),
        ("VHV", "VVH"),
        ("VVH", "VHV"),
        ("VVV", "VVV"),
    ];

    #[test]
    fn fredkin_matches_truth_table() {
        for (input, expected) in FREDKIN_TRUTH_TABLE {
            let out = apply_fredkin(
                &basis(input),
                PhotonLabel::mode1(),
                PhotonLabel::mode2(),
                PhotonLabel::ancilla(),
            )
            .unwrap();
            assert_abs_diff_eq!(
                out.amplitude(&ket(expected)).re,
                1.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn fredkin_is_self_inverse_on_superpositions() {
        let w3 = PureState::w_state_on(three_photon_register()).unwrap();
        let once = apply_fredkin(
            &w3,
            PhotonLabel::mode1(),
            PhotonLabel::mode2(),
            PhotonLabel::ancilla(),
        )
        .unwrap();
        let twice = apply_fredkin(
            &once,
            PhotonLabel::mode1(),
            PhotonLabel::mode2(),
            PhotonLabel::ancilla(),
        )
        .unwrap();
        assert_abs_diff_eq!(fidelity(&twice, &w3).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn fredkin_rejects_duplicate_labels() {
        let w3 = PureState::w_state_on(three_photon_register()).unwrap();
        assert!(matches!(
            apply_fredkin(
                &w3,
                PhotonLabel::mode1(),
                PhotonLabel::mode1(),
                PhotonLabel::ancilla()
            ),
            Err(Error::DuplicateGatePhotons)
        ));
    }

    #[test]
    fn pbs_routing_table() {
        assert_eq!(route_pbs(PbsPort::Mode1, Polarization::H), DetectorArm::D1);
        assert_eq!(route_pbs(PbsPort::Mode1, Polarization::V), DetectorArm::D2);
        assert_eq!(route_pbs(PbsPort::Mode2, Polarization::H), DetectorArm::D2);
        assert_eq!(route_pbs(PbsPort::Mode2, Polarization::V), DetectorArm::D1);
    }

    #[test]
    fn pbs_same_polarization_pairs_coincide() {
        // Photons that reach the beamsplitter with the same polarization
        // land on distinct arms; orthogonal pairs bunch.
        for pol in [Polarization::H, Polarization::V] {
            assert_ne!(
                route_pbs(PbsPort::Mode1, pol),
                route_pbs(PbsPort::Mode2, pol)
            );
            assert_eq!(
                route_pbs(PbsPort::Mode1, pol),
                route_pbs(PbsPort::Mode2, pol.flipped())
            );
        }
    }

    #[test]
    fn projection_weights() {
        let (residual, weight) =
            project_diagonal(&basis("H"), PhotonLabel::mode1(), DiagonalOutcome::D).unwrap();
        assert_abs_diff_eq!(weight, 0.5, epsilon = 1e-12);
        assert_eq!(residual.num_photons(), 0);

        let (residual, weight) =
            project_diagonal(&basis("V"), PhotonLabel::mode1(), DiagonalOutcome::Dbar).unwrap();
        assert_abs_diff_eq!(weight, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            residual.amplitude(&BasisKet::new(vec![])).re,
            -std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn projection_of_orthogonal_state_has_zero_weight() {
        let plus = crate::state::apply_single_qubit(
            &basis("H"),
            PhotonLabel::mode1(),
            &crate::state::hadamard(),
        )
        .unwrap();
        let (residual, weight) =
            project_diagonal(&plus, PhotonLabel::mode1(), DiagonalOutcome::Dbar).unwrap();
        assert!(weight < PRUNE_THRESHOLD);
        assert!(residual.amplitudes().is_empty());
    }

    #[test]
    fn operations_reject_unknown_photons() {
        let state = basis("H");
        let missing = PhotonLabel::bob(7);
        assert!(matches!(
            apply_hwp(&state, missing),
            Err(Error::UnknownPhoton(_))
        ));
        assert!(matches!(
            project_diagonal(&state, missing, DiagonalOutcome::D),
            Err(Error::UnknownPhoton(_))
        ));
    }

    #[test]
    fn projection_outcomes_are_complete() {
        let w3 = PureState::w_state_on(three_photon_register()).unwrap();
        for photon in w3.register().labels().to_vec() {
            let (_, w_d) = project_diagonal(&w3, photon, DiagonalOutcome::D).unwrap();
            let (_, w_dbar) = project_diagonal(&w3, photon, DiagonalOutcome::Dbar).unwrap();
            assert_abs_diff_eq!(w_d + w_dbar, w3.norm_sqr(), epsilon = 1e-12);
        }
    }

    #[test]
    fn unitaries_preserve_norm_on_larger_states() {
        // Random-ish ten-photon state assembled from W states.
        let a = make_w_state(5, Party::Alice).unwrap();
        let b = make_w_state(5, Party::Bob).unwrap();
        let state = tensor(&a, &b).unwrap();
        let rotated = apply_hwp(&state, PhotonLabel::mode2()).unwrap();
        assert_abs_diff_eq!(rotated.norm_sqr(), 1.0, epsilon = 1e-12);
        let swapped = apply_fredkin(
            &rotated,
            PhotonLabel::mode1(),
            PhotonLabel::mode2(),
            PhotonLabel::bob(0),
        )
        .unwrap();
        assert_abs_diff_eq!(swapped.norm_sqr(), 1.0, epsilon = 1e-12);
    }
}
