//! End-to-end fusion protocols: take |W_n> and |W_m> (plus an H ancilla
//! for the Fredkin-enhanced gate), run the optical sequence, enumerate
//! every detection branch exactly, classify branches, apply feed-forward
//! correction and verify the fused states.
//!
//! Branch enumeration is exhaustive (arm occupancies times D/Dbar
//! assignments), never sampled. Probabilities are computed twice: in
//! double precision through the state operations, and over exact rationals
//! in a parallel code path; reports carry both.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fuse_exact, ratio_to_f64};
use crate::optics::{
    apply_fredkin, apply_hwp, project_diagonal, route_pbs, DetectorArm, DiagonalOutcome, PbsPort,
};
use crate::state::{
    fidelity, make_w_state, tensor, BasisKet, Party, PhotonLabel, PhotonRegister, Polarization,
    PureState, Site,
};

/// Serializes rationals as "p/q" text so exactness survives serialization.
pub(crate) mod ratio_text {
    use num_rational::Rational64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(
        r: &Rational64,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
    }

    pub fn serialize_opt<S: Serializer>(
        r: &Option<Rational64>,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => serialize(r, serializer),
            None => serializer.serialize_none(),
        }
    }
}

/// Which fusion gate: the plain fusion gate or the Fredkin-enhanced one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Fg,
    Fgf,
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Fg => write!(f, "fg"),
            GateKind::Fgf => write!(f, "fgf"),
        }
    }
}

/// Classification of a detection branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchClass {
    /// Coincidence (one photon per arm): the fused W state is produced.
    Success,
    /// Both photons at D1: the shrunken W states survive for another try.
    Recycle,
    /// Both photons at D2: the inputs are destroyed.
    Failure,
}

impl fmt::Display for BranchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchClass::Success => write!(f, "success"),
            BranchClass::Recycle => write!(f, "recycle"),
            BranchClass::Failure => write!(f, "failure"),
        }
    }
}

/// Photon counts on the two detector arms (always two photons total).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArmOccupancy {
    pub d1: u8,
    pub d2: u8,
}

/// The diagonal-basis result recorded for one detected photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagResult {
    pub photon: PhotonLabel,
    pub outcome: DiagonalOutcome,
}

/// One exhaustively enumerated detection branch: arm occupancy, per-photon
/// D/Dbar results, exact probability and the normalized post-measurement
/// state, plus its verification against the branch target.
#[derive(Debug, Clone, Serialize)]
pub struct DetectionOutcome {
    pub occupancy: ArmOccupancy,
    pub diag_results: Vec<DiagResult>,
    pub probability: f64,
    #[serde(serialize_with = "ratio_text::serialize")]
    pub probability_exact: Rational64,
    pub class: BranchClass,
    /// Whether the frozen feed-forward table fires for this branch.
    pub needs_correction: bool,
    /// Fidelity to the branch target: the fused W state (after correction)
    /// for success branches, the shrunken product for recycle branches.
    pub target_fidelity: Option<f64>,
    #[serde(serialize_with = "ratio_text::serialize_opt")]
    pub target_fidelity_exact: Option<Rational64>,
    pub post_state: PureState,
}

/// Complete account of one fusion run: every branch, aggregated class
/// probabilities in both float and exact form, and the worst success-branch
/// fidelity after correction.
#[derive(Debug, Clone, Serialize)]
pub struct FusionReport {
    pub n: usize,
    pub m: usize,
    pub gate: GateKind,
    pub fused_size: usize,
    pub p_success: f64,
    pub p_recycle: f64,
    pub p_failure: f64,
    #[serde(serialize_with = "ratio_text::serialize")]
    pub p_success_exact: Rational64,
    #[serde(serialize_with = "ratio_text::serialize")]
    pub p_recycle_exact: Rational64,
    #[serde(serialize_with = "ratio_text::serialize")]
    pub p_failure_exact: Rational64,
    /// Minimum post-correction fidelity over all success branches.
    pub success_fidelity: f64,
    pub branches: Vec<DetectionOutcome>,
}

/// One row of the four-case input table.
#[derive(Debug, Clone, Serialize)]
pub struct InputCase {
    pub pattern: (Polarization, Polarization),
    pub probability: f64,
    #[serde(serialize_with = "ratio_text::serialize")]
    pub probability_exact: Rational64,
    pub class: BranchClass,
}

const OUTCOME_PAIRS: [(DiagonalOutcome, DiagonalOutcome); 4] = [
    (DiagonalOutcome::D, DiagonalOutcome::D),
    (DiagonalOutcome::D, DiagonalOutcome::Dbar),
    (DiagonalOutcome::Dbar, DiagonalOutcome::D),
    (DiagonalOutcome::Dbar, DiagonalOutcome::Dbar),
];

fn check_input_sizes(n: usize, m: usize) -> Result<()> {
    let min = 2;
    if n < min {
        return Err(Error::TooSmall {
            what: "fusion input size n",
            got: n,
            min,
        });
    }
    if m < min {
        return Err(Error::TooSmall {
            what: "fusion input size m",
            got: m,
            min,
        });
    }
    Ok(())
}

/// The frozen feed-forward decision table, derived once from the fidelity
/// oracle over the four coincidence patterns:
///
/// (D, D) -> keep, (D, Dbar) -> correct, (Dbar, D) -> correct,
/// (Dbar, Dbar) -> keep.
///
/// A Dbar result flips the sign of the detected-V term, so the recombined
/// success state picks up a relative minus sign exactly when the two
/// outcomes differ.
pub fn needs_correction(o1: DiagonalOutcome, o2: DiagonalOutcome) -> bool {
    o1 != o2
}

/// Z on every photon in `targets`: sign flip per V, applied ket by ket.
fn apply_z_to_all(state: &PureState, targets: &[PhotonLabel]) -> Result<PureState> {
    let positions: Vec<usize> = targets
        .iter()
        .map(|&label| {
            state
                .register()
                .position(label)
                .ok_or(Error::UnknownPhoton(label))
        })
        .collect::<Result<_>>()?;
    let mut amplitudes: BTreeMap<BasisKet, Complex64> = BTreeMap::new();
    for (ket, amp) in state.amplitudes() {
        let v_count = positions
            .iter()
            .filter(|&&p| ket.pol_at(p) == Polarization::V)
            .count();
        let signed = if v_count % 2 == 1 { -amp } else { *amp };
        amplitudes.insert(ket.clone(), signed);
    }
    PureState::new(state.register().clone(), amplitudes)
}

/// Applies the detector-outcome-conditioned phase correction to a success
/// branch: Z on every Bob-kept photon (and the ancilla for FG&F) whenever
/// the two coincidence outcomes differ. Errors on non-success branches.
pub fn feed_forward_correct(outcome: &DetectionOutcome, gate: GateKind) -> Result<PureState> {
    if outcome.class != BranchClass::Success {
        return Err(Error::NotSuccessBranch(outcome.class));
    }
    let o1 = outcome
        .diag_results
        .iter()
        .find(|d| d.photon.site == Site::Mode1)
        .map(|d| d.outcome)
        .expect("success branch records the mode-1 photon");
    let o2 = outcome
        .diag_results
        .iter()
        .find(|d| d.photon.site == Site::Mode2)
        .map(|d| d.outcome)
        .expect("success branch records the mode-2 photon");
    if !needs_correction(o1, o2) {
        return Ok(outcome.post_state.clone());
    }
    let mut targets = outcome.post_state.register().site_labels(Site::BobKept);
    if gate == GateKind::Fgf {
        targets.extend(outcome.post_state.register().site_labels(Site::Ancilla));
    }
    apply_z_to_all(&outcome.post_state, &targets)
}

/// The target of a recycle branch: |W_{n-1}> (x) |W_{m-1}>, with the
/// ancilla still |H> for FG&F.
fn recycle_target(register: &PhotonRegister) -> Result<PureState> {
    let alice = PhotonRegister::new(register.site_labels(Site::AliceKept))?;
    let bob = PhotonRegister::new(register.site_labels(Site::BobKept))?;
    let mut target = tensor(
        &PureState::w_state_on(alice)?,
        &PureState::w_state_on(bob)?,
    )?;
    let ancilla = register.site_labels(Site::Ancilla);
    if !ancilla.is_empty() {
        target = tensor(
            &target,
            &PureState::h_product(PhotonRegister::new(ancilla)?)?,
        )?;
    }
    Ok(target)
}

/// Runs the selected fusion gate on |W_n> and |W_m|, enumerating every
/// detection branch.
pub fn fuse(n: usize, m: usize, gate: GateKind) -> Result<FusionReport> {
    check_input_sizes(n, m)?;

    let alice = make_w_state(n, Party::Alice)?;
    let bob = make_w_state(m, Party::Bob)?;
    let mut state = tensor(&alice, &bob)?;
    if gate == GateKind::Fgf {
        let ancilla = PureState::basis_state(
            PhotonRegister::new(vec![PhotonLabel::ancilla()])?,
            BasisKet::new(vec![Polarization::H]),
        )?;
        state = tensor(&state, &ancilla)?;
        state = apply_fredkin(
            &state,
            PhotonLabel::mode1(),
            PhotonLabel::mode2(),
            PhotonLabel::ancilla(),
        )?;
    }
    state = apply_hwp(&state, PhotonLabel::mode2())?;

    // Partition the state into orthogonal sectors by the deterministic
    // routing of the two gate photons.
    let pos1 = state
        .register()
        .position(PhotonLabel::mode1())
        .expect("mode 1 photon present");
    let pos2 = state
        .register()
        .position(PhotonLabel::mode2())
        .expect("mode 2 photon present");
    let mut sectors: BTreeMap<(u8, u8), BTreeMap<BasisKet, Complex64>> = BTreeMap::new();
    for (ket, amp) in state.amplitudes() {
        let arm1 = route_pbs(PbsPort::Mode1, ket.pol_at(pos1));
        let arm2 = route_pbs(PbsPort::Mode2, ket.pol_at(pos2));
        let d1 = u8::from(arm1 == DetectorArm::D1) + u8::from(arm2 == DetectorArm::D1);
        sectors
            .entry((d1, 2 - d1))
            .or_default()
            .insert(ket.clone(), *amp);
    }

    let fused_size = state.num_photons() - 2;
    let exact = fuse_exact(n, m, gate);
    let mut exact_branches = exact.branches.iter();

    let mut branches = Vec::new();
    let mut p_success = 0.0;
    let mut p_recycle = 0.0;
    let mut p_failure = 0.0;
    let mut success_fidelity = f64::INFINITY;

    for ((d1, d2), amplitudes) in &sectors {
        let sector = PureState::new(state.register().clone(), amplitudes.clone())?;
        for (o1, o2) in OUTCOME_PAIRS {
            let (after_first, _) = project_diagonal(&sector, PhotonLabel::mode1(), o1)?;
            let (residual, weight) = project_diagonal(&after_first, PhotonLabel::mode2(), o2)?;
            if weight == 0.0 {
                continue;
            }
            let class = match (d1, d2) {
                (1, 1) => BranchClass::Success,
                (2, 0) => BranchClass::Recycle,
                _ => BranchClass::Failure,
            };
            let post_state = residual.normalized();
            let exact_branch = exact_branches
                .next()
                .expect("exact path enumerates the same branches");
            debug_assert_eq!((*d1, *d2), (exact_branch.d1, exact_branch.d2));
            debug_assert_eq!((o1, o2), exact_branch.outcomes);

            let mut outcome = DetectionOutcome {
                occupancy: ArmOccupancy { d1: *d1, d2: *d2 },
                diag_results: vec![
                    DiagResult {
                        photon: PhotonLabel::mode1(),
                        outcome: o1,
                    },
                    DiagResult {
                        photon: PhotonLabel::mode2(),
                        outcome: o2,
                    },
                ],
                probability: weight,
                probability_exact: exact_branch.probability,
                class,
                needs_correction: class == BranchClass::Success && needs_correction(o1, o2),
                target_fidelity: None,
                target_fidelity_exact: None,
                post_state,
            };

            match class {
                BranchClass::Success => {
                    let corrected = feed_forward_correct(&outcome, gate)?;
                    let target = PureState::w_state_on(corrected.register().clone())?;
                    let fid = fidelity(&corrected, &target)?;
                    outcome.target_fidelity = Some(fid);
                    outcome.target_fidelity_exact = exact_branch.corrected_fidelity;
                    success_fidelity = success_fidelity.min(fid);
                    p_success += weight;
                }
                BranchClass::Recycle => {
                    let target = recycle_target(outcome.post_state.register())?;
                    let fid = fidelity(&outcome.post_state, &target)?;
                    outcome.target_fidelity = Some(fid);
                    outcome.target_fidelity_exact = exact_branch.raw_fidelity;
                    p_recycle += weight;
                }
                BranchClass::Failure => {
                    p_failure += weight;
                }
            }
            branches.push(outcome);
        }
    }
    debug_assert!(exact_branches.next().is_none());

    Ok(FusionReport {
        n,
        m,
        gate,
        fused_size,
        p_success,
        p_recycle,
        p_failure,
        p_success_exact: exact.p_success,
        p_recycle_exact: exact.p_recycle,
        p_failure_exact: exact.p_failure,
        success_fidelity,
        branches,
    })
}

/// Fusion gate on |W_n> and |W_m>: coincidence fuses to size n+m-2.
pub fn fuse_fg(n: usize, m: usize) -> Result<FusionReport> {
    fuse(n, m, GateKind::Fg)
}

/// Fredkin-enhanced fusion on |W_n>, |W_m> and an H ancilla: the old
/// both-at-D2 failure path is eliminated and success fuses to size n+m-1.
pub fn fuse_fgf(n: usize, m: usize) -> Result<FusionReport> {
    fuse(n, m, GateKind::Fgf)
}

/// The four-case input table for the two gate photons: polarization
/// pattern, probability and class under the selected gate.
pub fn enumerate_input_cases(n: usize, m: usize, gate: GateKind) -> Result<Vec<InputCase>> {
    check_input_sizes(n, m)?;
    let nm = (n * m) as i64;
    let vv_class = match gate {
        GateKind::Fg => BranchClass::Failure,
        GateKind::Fgf => BranchClass::Success,
    };
    let rows = [
        (
            (Polarization::H, Polarization::H),
            Rational64::new(((n - 1) * (m - 1)) as i64, nm),
            BranchClass::Recycle,
        ),
        (
            (Polarization::H, Polarization::V),
            Rational64::new((n - 1) as i64, nm),
            BranchClass::Success,
        ),
        (
            (Polarization::V, Polarization::H),
            Rational64::new((m - 1) as i64, nm),
            BranchClass::Success,
        ),
        (
            (Polarization::V, Polarization::V),
            Rational64::new(1, nm),
            vv_class,
        ),
    ];
    Ok(rows
        .into_iter()
        .map(|(pattern, probability_exact, class)| InputCase {
            pattern,
            probability: ratio_to_f64(probability_exact),
            probability_exact,
            class,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_traits::One;

    #[test]
    fn fg_three_three_matches_table() {
        let report = fuse_fg(3, 3).unwrap();
        assert_abs_diff_eq!(report.p_success, 4.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_recycle, 4.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_failure, 1.0 / 9.0, epsilon = 1e-12);
        assert_eq!(report.p_success_exact, Rational64::new(4, 9));
        assert_eq!(report.fused_size, 4);
    }

    #[test]
    fn fg_two_two_fuses_bell_pairs_to_w2() {
        let report = fuse_fg(2, 2).unwrap();
        assert_abs_diff_eq!(report.p_success, 0.5, epsilon = 1e-12);
        assert_eq!(report.fused_size, 2);
        assert!(report.success_fidelity >= 1.0 - 1e-9);
    }

    #[test]
    fn fg_two_three_brute_force_values() {
        // Brute-force enumeration of all basis branches gives
        // 1/2, 1/3, 1/6 for success, recycle, failure.
        let report = fuse_fg(2, 3).unwrap();
        assert_abs_diff_eq!(report.p_success, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_recycle, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.p_failure, 1.0 / 6.0, epsilon = 1e-12);
        assert_eq!(report.p_failure_exact, Rational64::new(1, 6));
    }

    #[test]
    fn fgf_two_two_reaches_three_quarters() {
        let report = fuse_fgf(2, 2).unwrap();
        assert_eq!(report.p_success_exact, Rational64::new(3, 4));
        assert_abs_diff_eq!(report.p_success, 0.75, epsilon = 1e-12);
        assert_eq!(report.fused_size, 3);
        assert!(report.success_fidelity >= 1.0 - 1e-9);
    }

    #[test]
    fn fgf_examples_from_branch_enumeration() {
        let report = fuse_fgf(3, 3).unwrap();
        assert_abs_diff_eq!(report.p_success, 5.0 / 9.0, epsilon = 1e-12);

        let report = fuse_fgf(2, 4).unwrap();
        assert_abs_diff_eq!(report.p_success, 5.0 / 8.0, epsilon = 1e-12);
        assert_eq!(report.fused_size, 5);
    }

    #[test]
    fn fgf_never_fires_both_d2() {
        for (n, m) in [(2, 2), (2, 5), (4, 3)] {
            let report = fuse_fgf(n, m).unwrap();
            assert!(report.p_failure < 1e-12);
            assert!(report
                .branches
                .iter()
                .all(|b| b.occupancy != ArmOccupancy { d1: 0, d2: 2 }));
        }
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        for gate in [GateKind::Fg, GateKind::Fgf] {
            let report = fuse(4, 5, gate).unwrap();
            let total: f64 = report.branches.iter().map(|b| b.probability).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_inputs_below_two() {
        assert!(matches!(
            fuse_fg(1, 3),
            Err(Error::TooSmall { got: 1, min: 2, .. })
        ));
        assert!(matches!(
            fuse_fgf(3, 0),
            Err(Error::TooSmall { got: 0, min: 2, .. })
        ));
    }

    /// The decision-table oracle: for every success branch, exactly one of
    /// {corrected, uncorrected} reaches unit fidelity, and the frozen table
    /// picks that one.
    #[test]
    fn correction_table_matches_fidelity_oracle() {
        for (n, m, gate) in [
            (3, 3, GateKind::Fg),
            (2, 2, GateKind::Fgf),
            (2, 3, GateKind::Fg),
            (4, 2, GateKind::Fgf),
        ] {
            let report = fuse(n, m, gate).unwrap();
            for branch in report
                .branches
                .iter()
                .filter(|b| b.class == BranchClass::Success)
            {
                let target =
                    PureState::w_state_on(branch.post_state.register().clone()).unwrap();
                let raw = fidelity(&branch.post_state, &target).unwrap();
                let corrected =
                    fidelity(&feed_forward_correct(branch, gate).unwrap(), &target).unwrap();
                if branch.needs_correction {
                    assert!(corrected > 1.0 - 1e-9 && raw < 1.0 - 1e-9);
                } else {
                    assert!(corrected > 1.0 - 1e-9 && (raw - corrected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn correction_rejects_non_success_branches() {
        let report = fuse_fg(3, 3).unwrap();
        let recycle = report
            .branches
            .iter()
            .find(|b| b.class == BranchClass::Recycle)
            .unwrap();
        assert!(matches!(
            feed_forward_correct(recycle, GateKind::Fg),
            Err(Error::NotSuccessBranch(BranchClass::Recycle))
        ));
    }

    #[test]
    fn recycle_branches_keep_shrunken_w_states() {
        let report = fuse_fg(2, 2).unwrap();
        for branch in report
            .branches
            .iter()
            .filter(|b| b.class == BranchClass::Recycle)
        {
            // Degenerate recycle: both sides shrink to single-photon |V>.
            assert_eq!(branch.post_state.num_photons(), 2);
            assert!(branch.target_fidelity.unwrap() >= 1.0 - 1e-9);
            assert_eq!(branch.target_fidelity_exact, Some(Rational64::one()));
        }
    }

    #[test]
    fn bunched_branches_are_product_states() {
        // Both bunched occupancies originate from a single input class, so
        // their post-states factor: the shrunken W pair for recycle, the
        // all-horizontal ket for failure.
        let report = fuse_fg(3, 4).unwrap();
        for branch in &report.branches {
            match branch.class {
                BranchClass::Recycle => {
                    assert!(branch.target_fidelity.unwrap() >= 1.0 - 1e-12);
                }
                BranchClass::Failure => {
                    let all_h =
                        PureState::h_product(branch.post_state.register().clone()).unwrap();
                    assert!(fidelity(&branch.post_state, &all_h).unwrap() >= 1.0 - 1e-12);
                }
                BranchClass::Success => {}
            }
        }
    }

    #[test]
    fn input_case_table_rows() {
        let fg = enumerate_input_cases(3, 3, GateKind::Fg).unwrap();
        assert_eq!(fg[0].probability_exact, Rational64::new(4, 9));
        assert_eq!(fg[0].class, BranchClass::Recycle);
        assert_eq!(fg[3].probability_exact, Rational64::new(1, 9));
        assert_eq!(fg[3].class, BranchClass::Failure);

        let fgf = enumerate_input_cases(3, 3, GateKind::Fgf).unwrap();
        assert_eq!(fgf[3].class, BranchClass::Success);

        let small = enumerate_input_cases(2, 2, GateKind::Fg).unwrap();
        assert_eq!(small[3].probability_exact, Rational64::new(1, 4));
        assert_eq!(small[3].class, BranchClass::Failure);
    }

    #[test]
    fn case_aggregation_matches_branch_aggregation() {
        for gate in [GateKind::Fg, GateKind::Fgf] {
            for (n, m) in [(2, 2), (3, 4), (5, 2)] {
                let report = fuse(n, m, gate).unwrap();
                let cases = enumerate_input_cases(n, m, gate).unwrap();
                let case_sum = |class: BranchClass| -> f64 {
                    cases
                        .iter()
                        .filter(|c| c.class == class)
                        .map(|c| c.probability)
                        .sum()
                };
                assert_abs_diff_eq!(
                    report.p_success,
                    case_sum(BranchClass::Success),
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    report.p_recycle,
                    case_sum(BranchClass::Recycle),
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    report.p_failure,
                    case_sum(BranchClass::Failure),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn fused_state_is_permutation_symmetric() {
        let report = fuse_fgf(3, 2).unwrap();
        for branch in report
            .branches
            .iter()
            .filter(|b| b.class == BranchClass::Success)
        {
            let corrected = feed_forward_correct(branch, GateKind::Fgf).unwrap();
            let labels = corrected.register().labels().to_vec();
            for i in 0..labels.len() {
                for j in i + 1..labels.len() {
                    let swapped =
                        crate::state::swap_photons(&corrected, labels[i], labels[j]).unwrap();
                    assert!(fidelity(&corrected, &swapped).unwrap() >= 1.0 - 1e-9);
                }
            }
        }
    }
}
