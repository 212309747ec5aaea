//! Expected-resource recursions for the Discard policy and the Reuse
//! fixed point solved by value iteration.

use std::collections::HashMap;

use crate::exact::ratio_to_f64;
use crate::fusion::GateKind;
use crate::strategy::{p_gate, w3_seed_probability, CostModel, PairingPolicy};

/// Relative tolerance for the Reuse value iteration.
const VALUE_ITERATION_TOL: f64 = 1e-10;
const VALUE_ITERATION_MAX_ITERS: usize = 5_000_000;
/// Values beyond this are treated as diverging (target unreachable).
const DIVERGENCE_BOUND: f64 = 1e15;

/// Expected counts of the three tracked resources.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Resources {
    pub bells: f64,
    pub ancillas: f64,
    pub attempts: f64,
}

impl Resources {
    pub const ZERO: Resources = Resources {
        bells: 0.0,
        ancillas: 0.0,
        attempts: 0.0,
    };

    pub fn units(&self, model: &CostModel) -> f64 {
        self.bells * model.bell_pair_cost + self.ancillas * model.ancilla_photon_cost
    }

    fn add(self, other: Resources) -> Resources {
        Resources {
            bells: self.bells + other.bells,
            ancillas: self.ancillas + other.ancillas,
            attempts: self.attempts + other.attempts,
        }
    }

    fn scale(self, factor: f64) -> Resources {
        Resources {
            bells: self.bells * factor,
            ancillas: self.ancillas * factor,
            attempts: self.attempts * factor,
        }
    }

    fn max_abs(&self) -> f64 {
        self.bells.abs().max(self.ancillas.abs()).max(self.attempts.abs())
    }

    fn relative_change(&self, previous: &Resources) -> f64 {
        let diff = Resources {
            bells: self.bells - previous.bells,
            ancillas: self.ancillas - previous.ancillas,
            attempts: self.attempts - previous.attempts,
        };
        diff.max_abs() / self.max_abs().max(1.0)
    }
}

/// The smallest state the gate can start from: a Bell pair for FG&F, a
/// W3 seed for FG (Bell-pair fusion yields no size gain under FG).
pub(crate) fn base_size(gate: GateKind) -> usize {
    match gate {
        GateKind::Fg => 3,
        GateKind::Fgf => 2,
    }
}

/// The smallest fresh partner that grows the held state by one.
pub(crate) fn partner_size(gate: GateKind) -> usize {
    base_size(gate)
}

/// Size of the fused state on success.
pub(crate) fn fused_size(gate: GateKind, n: usize, m: usize) -> usize {
    match gate {
        GateKind::Fg => n + m - 2,
        GateKind::Fgf => n + m - 1,
    }
}

/// Expected resources of one base primitive: a Bell pair, or for FG the
/// W3 seed (one Bell pair plus one photon per attempt at probability 3/10).
pub(crate) fn primitive_resources(gate: GateKind, size: usize) -> Resources {
    match (gate, size) {
        (_, 2) => Resources {
            bells: 1.0,
            ancillas: 0.0,
            attempts: 0.0,
        },
        (GateKind::Fg, 3) => {
            let tries = 1.0 / ratio_to_f64(w3_seed_probability());
            Resources {
                bells: tries,
                ancillas: tries,
                attempts: 0.0,
            }
        }
        _ => panic!("no primitive of size {size} for {gate}"),
    }
}

/// Resources consumed by one fusion attempt beyond its input states.
fn attempt_resources(gate: GateKind) -> Resources {
    Resources {
        bells: 0.0,
        ancillas: if gate == GateKind::Fgf { 1.0 } else { 0.0 },
        attempts: 1.0,
    }
}

/// The pairing policy's decomposition of a target size (target > base).
pub(crate) fn plan(target: usize, gate: GateKind, policy: PairingPolicy) -> (usize, usize) {
    debug_assert!(target > base_size(gate));
    match policy {
        PairingPolicy::BalancedTree => {
            let sum = match gate {
                GateKind::Fg => target + 2,
                GateKind::Fgf => target + 1,
            };
            let n = sum.div_ceil(2);
            (n, sum - n)
        }
        PairingPolicy::Incremental => (target - 1, partner_size(gate)),
    }
}

fn class_probs(n: usize, m: usize, gate: GateKind) -> (f64, f64, f64) {
    let p_success = ratio_to_f64(p_gate(n, m, gate).expect("sizes validated"));
    let p_recycle = ((n - 1) * (m - 1)) as f64 / (n * m) as f64;
    let p_failure = match gate {
        GateKind::Fg => 1.0 / (n * m) as f64,
        GateKind::Fgf => 0.0,
    };
    (p_success, p_recycle, p_failure)
}

/// Discard-policy recursion: every non-success outcome rebuilds both
/// inputs, so C(k) = (C(n) + C(m) + attempt) / p_success(n, m).
pub(crate) fn discard_cost(target: usize, gate: GateKind, policy: PairingPolicy) -> Resources {
    fn build(
        k: usize,
        gate: GateKind,
        policy: PairingPolicy,
        memo: &mut HashMap<usize, Resources>,
    ) -> Resources {
        if k <= base_size(gate) {
            return primitive_resources(gate, k);
        }
        if let Some(&cached) = memo.get(&k) {
            return cached;
        }
        let (n, m) = plan(k, gate, policy);
        let (p_success, _, _) = class_probs(n, m, gate);
        let per_attempt = build(n, gate, policy, memo)
            .add(build(m, gate, policy, memo))
            .add(attempt_resources(gate));
        let result = per_attempt.scale(1.0 / p_success);
        memo.insert(k, result);
        result
    }
    build(target, gate, policy, &mut HashMap::new())
}

/// State of the Reuse fixed point for one stage.
struct ReuseStage {
    /// Total stage cost including restarts: x = B(n) + B(m) + chain[0].
    stage: Resources,
    /// chain[t]: about to fuse the recycled pair (n-t, m-t).
    chain: Vec<Resources>,
    /// top[s - 2]: holding a W_s below the target, topping up with fresh
    /// minimal partners.
    top: Vec<Resources>,
}

/// Solves one Reuse stage for target k given the fresh-build costs of the
/// planned inputs. Returns None if value iteration diverges.
fn solve_reuse_stage(
    k: usize,
    n: usize,
    m: usize,
    inputs: Resources,
    gate: GateKind,
) -> Option<Resources> {
    let attempt = attempt_resources(gate);
    let partner = primitive_resources(gate, partner_size(gate));
    let chain_len = n.min(m) - 1; // t = 0..=min-2
    let top_len = k - 2; // s = 2..=k-1

    let mut state = ReuseStage {
        stage: Resources::ZERO,
        chain: vec![Resources::ZERO; chain_len],
        top: vec![Resources::ZERO; top_len],
    };

    for _ in 0..VALUE_ITERATION_MAX_ITERS {
        let restart = state.stage;

        let new_top: Vec<Resources> = (0..top_len)
            .map(|idx| {
                let s = idx + 2;
                let q = partner_size(gate);
                let (p_success, p_recycle, p_failure) = class_probs(s, q, gate);
                let grown = fused_size(gate, s, q);
                let mut value = partner.add(attempt);
                if grown < k {
                    value = value.add(state.top[grown - 2].scale(p_success));
                }
                if s > 2 {
                    value = value.add(state.top[idx - 1].scale(p_recycle));
                } else {
                    value = value.add(restart.scale(p_recycle));
                }
                value.add(restart.scale(p_failure))
            })
            .collect();

        let new_chain: Vec<Resources> = (0..chain_len)
            .map(|t| {
                let (i, j) = (n - t, m - t);
                let (p_success, p_recycle, p_failure) = class_probs(i, j, gate);
                let fused = fused_size(gate, i, j);
                let mut value = attempt;
                if fused < k {
                    value = value.add(new_top[fused - 2].scale(p_success));
                }
                if t + 1 < chain_len {
                    value = value.add(state.chain[t + 1].scale(p_recycle));
                } else {
                    value = value.add(restart.scale(p_recycle));
                }
                value.add(restart.scale(p_failure))
            })
            .collect();

        let new_stage = inputs.add(new_chain[0]);

        let mut change = new_stage.relative_change(&state.stage);
        for (new, old) in new_chain.iter().zip(&state.chain) {
            change = change.max(new.relative_change(old));
        }
        for (new, old) in new_top.iter().zip(&state.top) {
            change = change.max(new.relative_change(old));
        }

        state = ReuseStage {
            stage: new_stage,
            chain: new_chain,
            top: new_top,
        };

        if state.stage.max_abs() > DIVERGENCE_BOUND {
            return None;
        }
        if change < VALUE_ITERATION_TOL {
            return Some(state.stage);
        }
    }
    None
}

/// Incremental growth under Reuse: a random walk on the held size with
/// fresh minimal partners, recycles stepping down one size and failures
/// restarting from the base primitive.
fn reuse_incremental(target: usize, gate: GateKind) -> Option<Resources> {
    let start = base_size(gate);
    let start_res = primitive_resources(gate, start);
    if target <= start {
        return Some(start_res);
    }
    let attempt = attempt_resources(gate);
    let partner = primitive_resources(gate, partner_size(gate));
    let q = partner_size(gate);

    // walk[s - 2]: expected remaining cost holding a W_s, s in 2..=target-1.
    let mut walk = vec![Resources::ZERO; target - 2];
    for _ in 0..VALUE_ITERATION_MAX_ITERS {
        let restart = start_res.add(walk[start - 2]);
        let new_walk: Vec<Resources> = (0..walk.len())
            .map(|idx| {
                let s = idx + 2;
                let (p_success, p_recycle, p_failure) = class_probs(s, q, gate);
                let grown = fused_size(gate, s, q);
                let mut value = partner.add(attempt);
                if grown < target {
                    value = value.add(walk[grown - 2].scale(p_success));
                }
                if s > 2 {
                    value = value.add(walk[idx - 1].scale(p_recycle));
                } else {
                    value = value.add(restart.scale(p_recycle));
                }
                value.add(restart.scale(p_failure))
            })
            .collect();

        let change = new_walk
            .iter()
            .zip(&walk)
            .map(|(new, old)| new.relative_change(old))
            .fold(0.0, f64::max);
        walk = new_walk;

        if walk[start - 2].max_abs() > DIVERGENCE_BOUND {
            return None;
        }
        if change < VALUE_ITERATION_TOL {
            return Some(start_res.add(walk[start - 2]));
        }
    }
    None
}

/// Reuse-policy expected cost for the target under the pairing policy.
pub(crate) fn reuse_cost(
    target: usize,
    gate: GateKind,
    policy: PairingPolicy,
) -> Option<Resources> {
    match policy {
        PairingPolicy::Incremental => reuse_incremental(target, gate),
        PairingPolicy::BalancedTree => {
            let base = base_size(gate);
            if target <= base {
                return Some(primitive_resources(gate, target));
            }
            let mut memo: HashMap<usize, Resources> = HashMap::new();
            fn build(
                k: usize,
                gate: GateKind,
                memo: &mut HashMap<usize, Resources>,
            ) -> Option<Resources> {
                if k <= base_size(gate) {
                    return Some(primitive_resources(gate, k));
                }
                if let Some(&cached) = memo.get(&k) {
                    return Some(cached);
                }
                let (n, m) = plan(k, gate, PairingPolicy::BalancedTree);
                let inputs = build(n, gate, memo)?.add(build(m, gate, memo)?);
                let result = solve_reuse_stage(k, n, m, inputs, gate)?;
                memo.insert(k, result);
                Some(result)
            }
            build(target, gate, &mut memo)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn balanced_plans() {
        assert_eq!(plan(3, GateKind::Fgf, PairingPolicy::BalancedTree), (2, 2));
        assert_eq!(plan(4, GateKind::Fgf, PairingPolicy::BalancedTree), (3, 2));
        assert_eq!(plan(4, GateKind::Fg, PairingPolicy::BalancedTree), (3, 3));
        assert_eq!(plan(7, GateKind::Fg, PairingPolicy::BalancedTree), (5, 4));
    }

    #[test]
    fn incremental_plans() {
        assert_eq!(plan(5, GateKind::Fgf, PairingPolicy::Incremental), (4, 2));
        assert_eq!(plan(5, GateKind::Fg, PairingPolicy::Incremental), (4, 3));
    }

    #[test]
    fn discard_fg_first_fusion_by_hand() {
        // C(4) under FG fuses two W3 seeds at p = 4/9: bells and photons
        // are each 2 * (10/3) / (4/9) = 15.
        let resources = discard_cost(4, GateKind::Fg, PairingPolicy::BalancedTree);
        assert_abs_diff_eq!(resources.bells, 15.0, epsilon = 1e-9);
        assert_abs_diff_eq!(resources.ancillas, 15.0, epsilon = 1e-9);
        assert_abs_diff_eq!(resources.attempts, 9.0 / 4.0, epsilon = 1e-9);
    }

    #[test]
    fn reuse_stage_with_no_reusable_material_matches_discard() {
        // Fusing two Bell pairs leaves nothing reusable on recycle, so the
        // Reuse and Discard expectations coincide at target 3.
        let discard = discard_cost(3, GateKind::Fgf, PairingPolicy::BalancedTree);
        let reuse = reuse_cost(3, GateKind::Fgf, PairingPolicy::BalancedTree).unwrap();
        assert_abs_diff_eq!(reuse.bells, discard.bells, epsilon = 1e-8);
        assert_abs_diff_eq!(reuse.attempts, discard.attempts, epsilon = 1e-8);
    }
}
