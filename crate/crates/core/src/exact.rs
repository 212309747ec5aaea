//! Exact-rational mirror of the fusion pipeline.
//!
//! Every amplitude the protocol produces has the form c * sqrt(f) with a
//! rational coefficient c and a shared positive rational factor f, because
//! the only operations are ket permutations and diagonal projections (which
//! contribute factors of 1/2). Tracking (c, f) pairs therefore yields branch
//! probabilities and fidelities as exact rationals, turning the table checks
//! into equality checks. This path is secondary; floating point remains the
//! primary representation.
//!
//! The mirror works positionally on the canonical register layout
//! (Alice-kept .. mode 1 .. Bob-kept .. mode 2 .. ancilla) and is kept
//! independent of the floating-point operation implementations.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::fusion::{BranchClass, GateKind};
use crate::optics::{route_pbs, DetectorArm, DiagonalOutcome, PbsPort};
use crate::state::{BasisKet, Polarization};

/// Converts an exact probability or fidelity to the nearest double.
pub fn ratio_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Sparse state with amplitudes c_k * sqrt(factor).
#[derive(Debug, Clone)]
struct ExactState {
    coeffs: BTreeMap<BasisKet, Rational64>,
    factor: Rational64,
}

impl ExactState {
    fn coeff_sum_sqr(&self) -> Rational64 {
        self.coeffs.values().map(|c| c * c).sum()
    }

    fn norm_sqr(&self) -> Rational64 {
        self.factor * self.coeff_sum_sqr()
    }

    fn normalized(&self) -> ExactState {
        let sum = self.coeff_sum_sqr();
        assert!(!sum.is_zero(), "cannot normalize a null exact state");
        ExactState {
            coeffs: self.coeffs.clone(),
            factor: sum.recip(),
        }
    }

    fn flip_at(&self, pos: usize) -> ExactState {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(ket, c)| (ket.flipped_at(pos), *c))
            .collect();
        ExactState {
            coeffs,
            factor: self.factor,
        }
    }

    fn fredkin(&self, control: usize, t1: usize, t2: usize) -> ExactState {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(ket, c)| {
                let new_ket = if ket.pol_at(control) == Polarization::V {
                    ket.swapped(t1, t2)
                } else {
                    ket.clone()
                };
                (new_ket, *c)
            })
            .collect();
        ExactState {
            coeffs,
            factor: self.factor,
        }
    }

    /// Diagonal projection of the photon at `pos`; removes it and halves
    /// the norm factor. Returns the residual and its exact weight.
    fn project(&self, pos: usize, outcome: DiagonalOutcome) -> (ExactState, Rational64) {
        let mut coeffs: BTreeMap<BasisKet, Rational64> = BTreeMap::new();
        for (ket, c) in &self.coeffs {
            let signed = match (outcome, ket.pol_at(pos)) {
                (DiagonalOutcome::Dbar, Polarization::V) => -*c,
                _ => *c,
            };
            let entry = coeffs.entry(ket.without_index(pos)).or_insert_with(Rational64::zero);
            *entry += signed;
        }
        coeffs.retain(|_, c| !c.is_zero());
        let residual = ExactState {
            coeffs,
            factor: self.factor / 2,
        };
        let weight = residual.norm_sqr();
        (residual, weight)
    }

    /// Sign flip on kets with an odd number of V among `positions`
    /// (Z applied to each of those photons).
    fn z_at(&self, positions: &[usize]) -> ExactState {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(ket, c)| {
                let v_count = positions
                    .iter()
                    .filter(|&&p| ket.pol_at(p) == Polarization::V)
                    .count();
                let signed = if v_count % 2 == 1 { -*c } else { *c };
                (ket.clone(), signed)
            })
            .collect();
        ExactState {
            coeffs,
            factor: self.factor,
        }
    }

    /// |<self|other>|^2 for normalized real-amplitude states.
    fn fidelity(&self, other: &ExactState) -> Rational64 {
        let overlap: Rational64 = self
            .coeffs
            .iter()
            .map(|(ket, c)| {
                other
                    .coeffs
                    .get(ket)
                    .map(|d| c * d)
                    .unwrap_or_else(Rational64::zero)
            })
            .sum();
        overlap * overlap * self.factor * other.factor
    }
}

/// W state over `len` photons: coefficient 1 on each one-V ket.
fn w_over(len: usize) -> ExactState {
    let mut coeffs = BTreeMap::new();
    for i in 0..len {
        let mut pols = vec![Polarization::H; len];
        pols[i] = Polarization::V;
        coeffs.insert(BasisKet::new(pols), Rational64::one());
    }
    ExactState {
        coeffs,
        factor: Rational64::new(1, len as i64),
    }
}

/// One enumerated detection branch of the exact pipeline.
#[derive(Debug, Clone)]
pub(crate) struct ExactBranch {
    pub d1: u8,
    pub d2: u8,
    pub outcomes: (DiagonalOutcome, DiagonalOutcome),
    pub probability: Rational64,
    #[allow(dead_code)] // read by the parallel-path tests
    pub class: BranchClass,
    /// Fidelity to the size n+m-2 (or n+m-1) W state after the frozen
    /// feed-forward correction; success branches only.
    pub corrected_fidelity: Option<Rational64>,
    /// Fidelity to the branch target without any correction: the W target
    /// for success branches, the shrunken product for recycle branches.
    pub raw_fidelity: Option<Rational64>,
}

#[derive(Debug, Clone)]
pub(crate) struct ExactFusion {
    pub p_success: Rational64,
    pub p_recycle: Rational64,
    pub p_failure: Rational64,
    pub branches: Vec<ExactBranch>,
}

const OUTCOME_PAIRS: [(DiagonalOutcome, DiagonalOutcome); 4] = [
    (DiagonalOutcome::D, DiagonalOutcome::D),
    (DiagonalOutcome::D, DiagonalOutcome::Dbar),
    (DiagonalOutcome::Dbar, DiagonalOutcome::D),
    (DiagonalOutcome::Dbar, DiagonalOutcome::Dbar),
];

/// Runs the full fusion pipeline over exact rationals.
///
/// Register layout by position: Alice-kept 0..n-1, mode 1 at n-1,
/// Bob-kept n..n+m-2, mode 2 at n+m-1, ancilla at n+m (FG&F only).
pub(crate) fn fuse_exact(n: usize, m: usize, gate: GateKind) -> ExactFusion {
    assert!(n >= 2 && m >= 2, "exact fusion needs sizes >= 2");
    let mode1 = n - 1;
    let mode2 = n + m - 1;
    let ancilla = n + m;
    let total = if gate == GateKind::Fgf { n + m + 1 } else { n + m };

    // |W_n> (x) |W_m> (x) |H>_anc, built directly ket by ket.
    let mut coeffs = BTreeMap::new();
    for i in 0..n {
        for j in 0..m {
            let mut pols = vec![Polarization::H; total];
            pols[i] = Polarization::V;
            pols[n + j] = Polarization::V;
            coeffs.insert(BasisKet::new(pols), Rational64::one());
        }
    }
    let mut state = ExactState {
        coeffs,
        factor: Rational64::new(1, (n * m) as i64),
    };

    if gate == GateKind::Fgf {
        state = state.fredkin(mode1, mode2, ancilla);
    }
    state = state.flip_at(mode2);

    // Partition by detector-arm occupancy of the two gate photons.
    let mut sectors: BTreeMap<(u8, u8), ExactState> = BTreeMap::new();
    for (ket, c) in &state.coeffs {
        let arm1 = route_pbs(PbsPort::Mode1, ket.pol_at(mode1));
        let arm2 = route_pbs(PbsPort::Mode2, ket.pol_at(mode2));
        let d1 = u8::from(arm1 == DetectorArm::D1) + u8::from(arm2 == DetectorArm::D1);
        let d2 = 2 - d1;
        let sector = sectors.entry((d1, d2)).or_insert_with(|| ExactState {
            coeffs: BTreeMap::new(),
            factor: state.factor,
        });
        sector.coeffs.insert(ket.clone(), *c);
    }

    // Post-detection photon positions (mode photons removed).
    let bob_kept: Vec<usize> = (mode1..mode1 + m - 1).collect();
    let correction_targets: Vec<usize> = if gate == GateKind::Fgf {
        bob_kept.iter().copied().chain([n + m - 2]).collect()
    } else {
        bob_kept.clone()
    };
    let fused_size = total - 2;

    let recycle_target = {
        // |W_{n-1}> (x) |W_{m-1}> (x) |H>_anc on the kept photons.
        let kept = fused_size;
        let mut coeffs = BTreeMap::new();
        for i in 0..n - 1 {
            for j in 0..m - 1 {
                let mut pols = vec![Polarization::H; kept];
                pols[i] = Polarization::V;
                pols[n - 1 + j] = Polarization::V;
                coeffs.insert(BasisKet::new(pols), Rational64::one());
            }
        }
        ExactState {
            coeffs,
            factor: Rational64::new(1, ((n - 1) * (m - 1)) as i64),
        }
    };
    let success_target = w_over(fused_size);

    let mut branches = Vec::new();
    let mut p_success = Rational64::zero();
    let mut p_recycle = Rational64::zero();
    let mut p_failure = Rational64::zero();

    for ((d1, d2), sector) in &sectors {
        for (o1, o2) in OUTCOME_PAIRS {
            let (after_first, _) = sector.project(mode1, o1);
            // Mode 2 shifts down one position once mode 1 is removed.
            let (residual, weight) = after_first.project(mode2 - 1, o2);
            if weight.is_zero() {
                continue;
            }
            let class = match (d1, d2) {
                (1, 1) => BranchClass::Success,
                (2, 0) => BranchClass::Recycle,
                _ => BranchClass::Failure,
            };
            let normalized = residual.normalized();
            let (corrected_fidelity, raw_fidelity) = match class {
                BranchClass::Success => {
                    let raw = normalized.fidelity(&success_target);
                    let corrected = if o1 != o2 {
                        normalized.z_at(&correction_targets).fidelity(&success_target)
                    } else {
                        raw
                    };
                    (Some(corrected), Some(raw))
                }
                BranchClass::Recycle => (None, Some(normalized.fidelity(&recycle_target))),
                BranchClass::Failure => (None, None),
            };
            match class {
                BranchClass::Success => p_success += weight,
                BranchClass::Recycle => p_recycle += weight,
                BranchClass::Failure => p_failure += weight,
            }
            branches.push(ExactBranch {
                d1: *d1,
                d2: *d2,
                outcomes: (o1, o2),
                probability: weight,
                class,
                corrected_fidelity,
                raw_fidelity,
            });
        }
    }

    ExactFusion {
        p_success,
        p_recycle,
        p_failure,
        branches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_class_probabilities_match_closed_forms() {
        for n in 2..=6 {
            for m in 2..=6 {
                let nm = (n * m) as i64;
                let fg = fuse_exact(n, m, GateKind::Fg);
                assert_eq!(fg.p_recycle, Rational64::new(((n - 1) * (m - 1)) as i64, nm));
                assert_eq!(fg.p_success, Rational64::new((n + m - 2) as i64, nm));
                assert_eq!(fg.p_failure, Rational64::new(1, nm));

                let fgf = fuse_exact(n, m, GateKind::Fgf);
                assert_eq!(fgf.p_success, Rational64::new((n + m - 1) as i64, nm));
                assert_eq!(fgf.p_failure, Rational64::zero());
                assert_eq!(
                    fgf.p_success + fgf.p_recycle + fgf.p_failure,
                    Rational64::one()
                );
            }
        }
    }

    #[test]
    fn exact_success_branches_reach_unit_fidelity_after_correction() {
        for gate in [GateKind::Fg, GateKind::Fgf] {
            let report = fuse_exact(3, 4, gate);
            for branch in report
                .branches
                .iter()
                .filter(|b| b.class == BranchClass::Success)
            {
                assert_eq!(branch.corrected_fidelity, Some(Rational64::one()));
            }
        }
    }

    #[test]
    fn exact_recycle_branches_keep_shrunken_product() {
        let report = fuse_exact(4, 3, GateKind::Fgf);
        for branch in report
            .branches
            .iter()
            .filter(|b| b.class == BranchClass::Recycle)
        {
            assert_eq!(branch.raw_fidelity, Some(Rational64::one()));
        }
    }
}
