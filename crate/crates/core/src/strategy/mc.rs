//! Sampled growth runs cross-checking the analytic cost expectations.
//!
//! Attempt outcomes are drawn from the exhaustively enumerated branch
//! probabilities of the fusion module, not from the closed forms. Trials
//! are batched; each batch draws from its own counter-derived ChaCha
//! stream, so results are bit-identical for a fixed seed regardless of
//! how many workers run the batches.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fusion::{fuse, BranchClass, GateKind};
use crate::strategy::{
    base_size, fused_size, partner_size, plan, CostModel, McStats, PairingPolicy, RecyclePolicy,
};

const BATCH_SIZE: u64 = 4096;
const CONFIDENCE_95: f64 = 1.959963984540054;

/// Per-trial resource counters.
#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    bells: u64,
    ancillas: u64,
    attempts: u64,
    successes: u64,
}

struct McContext {
    target: usize,
    gate: GateKind,
    policy: PairingPolicy,
    reuse: bool,
    /// Cumulative branch probability tables keyed by input sizes.
    tables: HashMap<(usize, usize), Vec<(f64, BranchClass)>>,
}

impl McContext {
    fn new(
        target: usize,
        gate: GateKind,
        policy: PairingPolicy,
        reuse: bool,
    ) -> Result<Self> {
        let mut tables = HashMap::new();
        for (n, m) in reachable_pairs(target, gate, policy, reuse) {
            let report = fuse(n, m, gate)?;
            let mut cumulative = 0.0;
            let table = report
                .branches
                .iter()
                .map(|branch| {
                    cumulative += branch.probability;
                    (cumulative, branch.class)
                })
                .collect();
            tables.insert((n, m), table);
        }
        Ok(McContext {
            target,
            gate,
            policy,
            reuse,
            tables,
        })
    }

    fn sample_class(&self, n: usize, m: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) -> BranchClass {
        tally.attempts += 1;
        if self.gate == GateKind::Fgf {
            tally.ancillas += 1;
        }
        let table = &self.tables[&(n, m)];
        let u: f64 = rng.random();
        let class = table
            .iter()
            .find(|(cumulative, _)| u < *cumulative)
            .map(|(_, class)| *class)
            .unwrap_or_else(|| table.last().expect("nonempty branch table").1);
        if class == BranchClass::Success {
            tally.successes += 1;
        }
        class
    }

    /// Draws one base primitive: a Bell pair, or the FG W3 seed sampled
    /// attempt by attempt at probability 3/10.
    fn sample_primitive(&self, size: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        match (self.gate, size) {
            (_, 2) => tally.bells += 1,
            (GateKind::Fg, 3) => {
                let p = crate::exact::ratio_to_f64(crate::strategy::w3_seed_probability());
                loop {
                    tally.bells += 1;
                    tally.ancillas += 1;
                    if rng.random::<f64>() < p {
                        break;
                    }
                }
            }
            _ => panic!("no primitive of size {size}"),
        }
    }

    fn run_trial(&self, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        match (self.reuse, self.policy) {
            (false, _) => self.build_discard(self.target, rng, tally),
            (true, PairingPolicy::Incremental) => self.grow_reuse_incremental(rng, tally),
            (true, PairingPolicy::BalancedTree) => {
                self.build_reuse_balanced(self.target, rng, tally)
            }
        }
    }

    fn build_discard(&self, k: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        if k <= base_size(self.gate) {
            self.sample_primitive(k, rng, tally);
            return;
        }
        let (n, m) = plan(k, self.gate, self.policy);
        loop {
            self.build_discard(n, rng, tally);
            self.build_discard(m, rng, tally);
            if self.sample_class(n, m, rng, tally) == BranchClass::Success {
                return;
            }
        }
    }

    fn grow_reuse_incremental(&self, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        let start = base_size(self.gate);
        let q = partner_size(self.gate);
        self.sample_primitive(start, rng, tally);
        let mut held = start;
        while held < self.target {
            self.sample_primitive(q, rng, tally);
            match self.sample_class(held, q, rng, tally) {
                BranchClass::Success => held = fused_size(self.gate, held, q),
                BranchClass::Recycle => {
                    if held == 2 {
                        self.sample_primitive(start, rng, tally);
                        held = start;
                    } else {
                        held -= 1;
                    }
                }
                BranchClass::Failure => {
                    self.sample_primitive(start, rng, tally);
                    held = start;
                }
            }
        }
    }

    fn build_reuse_balanced(&self, k: usize, rng: &mut ChaCha8Rng, tally: &mut Tally) {
        if k <= base_size(self.gate) {
            self.sample_primitive(k, rng, tally);
            return;
        }
        let (n, m) = plan(k, self.gate, self.policy);
        let q = partner_size(self.gate);
        'stage: loop {
            self.build_reuse_balanced(n, rng, tally);
            self.build_reuse_balanced(m, rng, tally);
            let (mut i, mut j) = (n, m);
            loop {
                match self.sample_class(i, j, rng, tally) {
                    BranchClass::Success => {
                        let mut held = fused_size(self.gate, i, j);
                        if held >= k {
                            return;
                        }
                        // Top up the under-sized chain result one photon
                        // at a time with fresh minimal partners.
                        loop {
                            self.sample_primitive(q, rng, tally);
                            match self.sample_class(held, q, rng, tally) {
                                BranchClass::Success => {
                                    held = fused_size(self.gate, held, q);
                                    if held >= k {
                                        return;
                                    }
                                }
                                BranchClass::Recycle => {
                                    if held == 2 {
                                        continue 'stage;
                                    }
                                    held -= 1;
                                }
                                BranchClass::Failure => continue 'stage,
                            }
                        }
                    }
                    BranchClass::Recycle => {
                        i -= 1;
                        j -= 1;
                        if i < 2 || j < 2 {
                            continue 'stage;
                        }
                    }
                    BranchClass::Failure => continue 'stage,
                }
            }
        }
    }
}

/// Every (n, m) pair the growth process can ask the fusion gate to fuse.
fn reachable_pairs(
    target: usize,
    gate: GateKind,
    policy: PairingPolicy,
    reuse: bool,
) -> BTreeSet<(usize, usize)> {
    let base = base_size(gate);
    let q = partner_size(gate);
    let mut pairs = BTreeSet::new();
    match policy {
        PairingPolicy::Incremental => {
            if reuse {
                for held in 2..target.max(3) {
                    pairs.insert((held, q));
                }
            } else {
                for k in base + 1..=target {
                    pairs.insert(plan(k, gate, policy));
                }
            }
        }
        PairingPolicy::BalancedTree => {
            let mut stack = vec![target];
            let mut seen = BTreeSet::new();
            while let Some(k) = stack.pop() {
                if k <= base || !seen.insert(k) {
                    continue;
                }
                let (n, m) = plan(k, gate, policy);
                pairs.insert((n, m));
                if reuse {
                    for t in 1..n.min(m) - 1 {
                        pairs.insert((n - t, m - t));
                    }
                    for held in 2..k {
                        pairs.insert((held, q));
                    }
                }
                stack.push(n);
                stack.push(m);
            }
        }
    }
    pairs
}

#[derive(Debug, Default, Clone, Copy)]
struct BatchPartial {
    sum_bells: f64,
    sumsq_bells: f64,
    sum_ancillas: f64,
    sumsq_ancillas: f64,
    sum_attempts: f64,
    sumsq_attempts: f64,
    sum_units: f64,
    sumsq_units: f64,
    attempts: u64,
    successes: u64,
}

/// Samples `trials` growth runs to size >= `target` and reports empirical
/// resource statistics. Deterministic for a fixed seed.
pub fn monte_carlo_growth(
    target: usize,
    gate: GateKind,
    model: &CostModel,
    policy: PairingPolicy,
    trials: u64,
    seed: u64,
) -> Result<McStats> {
    if trials < 1 {
        return Err(Error::TooSmall {
            what: "monte carlo trials",
            got: 0,
            min: 1,
        });
    }
    if target < 3 {
        return Err(Error::TooSmall {
            what: "cost target size",
            got: target,
            min: 3,
        });
    }
    CostModel::new(
        model.recycle_policy,
        model.bell_pair_cost,
        model.ancilla_photon_cost,
    )?;
    let reuse = model.recycle_policy == RecyclePolicy::Reuse;
    let ctx = McContext::new(target, gate, policy, reuse)?;

    let num_batches = trials.div_ceil(BATCH_SIZE);
    let partials: Vec<BatchPartial> = (0..num_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(batch);
            let count = BATCH_SIZE.min(trials - batch * BATCH_SIZE);
            let mut partial = BatchPartial::default();
            for _ in 0..count {
                let mut tally = Tally::default();
                ctx.run_trial(&mut rng, &mut tally);
                let bells = tally.bells as f64;
                let ancillas = tally.ancillas as f64;
                let attempts = tally.attempts as f64;
                let units =
                    bells * model.bell_pair_cost + ancillas * model.ancilla_photon_cost;
                partial.sum_bells += bells;
                partial.sumsq_bells += bells * bells;
                partial.sum_ancillas += ancillas;
                partial.sumsq_ancillas += ancillas * ancillas;
                partial.sum_attempts += attempts;
                partial.sumsq_attempts += attempts * attempts;
                partial.sum_units += units;
                partial.sumsq_units += units * units;
                partial.attempts += tally.attempts;
                partial.successes += tally.successes;
            }
            partial
        })
        .collect();

    // Merge in fixed batch order so the result is worker-count independent.
    let mut total = BatchPartial::default();
    for partial in partials {
        total.sum_bells += partial.sum_bells;
        total.sumsq_bells += partial.sumsq_bells;
        total.sum_ancillas += partial.sum_ancillas;
        total.sumsq_ancillas += partial.sumsq_ancillas;
        total.sum_attempts += partial.sum_attempts;
        total.sumsq_attempts += partial.sumsq_attempts;
        total.sum_units += partial.sum_units;
        total.sumsq_units += partial.sumsq_units;
        total.attempts += partial.attempts;
        total.successes += partial.successes;
    }

    let t = trials as f64;
    let variance = |sum: f64, sumsq: f64| {
        if trials < 2 {
            0.0
        } else {
            ((sumsq - sum * sum / t) / (t - 1.0)).max(0.0)
        }
    };
    let var_units = variance(total.sum_units, total.sumsq_units);

    // A base-sized target consumes primitives without any fusion attempt.
    let success_rate = if total.attempts == 0 {
        0.0
    } else {
        total.successes as f64 / total.attempts as f64
    };

    Ok(McStats {
        trials,
        success_rate,
        mean_bell_pairs: total.sum_bells / t,
        var_bell_pairs: variance(total.sum_bells, total.sumsq_bells),
        mean_ancillas: total.sum_ancillas / t,
        var_ancillas: variance(total.sum_ancillas, total.sumsq_ancillas),
        mean_attempts: total.sum_attempts / t,
        var_attempts: variance(total.sum_attempts, total.sumsq_attempts),
        mean_cost_units: total.sum_units / t,
        var_cost_units: var_units,
        confidence_halfwidth_95: CONFIDENCE_95 * (var_units / t).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::expected_cost;

    #[test]
    fn fixed_seed_is_reproducible() {
        let model = CostModel::default();
        let a = monte_carlo_growth(3, GateKind::Fgf, &model, PairingPolicy::BalancedTree, 5000, 42)
            .unwrap();
        let b = monte_carlo_growth(3, GateKind::Fgf, &model, PairingPolicy::BalancedTree, 5000, 42)
            .unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_growth(3, GateKind::Fgf, &model, PairingPolicy::BalancedTree, 5000, 43)
            .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let model = CostModel::default();
        let run = || {
            monte_carlo_growth(
                4,
                GateKind::Fgf,
                &model,
                PairingPolicy::Incremental,
                20_000,
                7,
            )
            .unwrap()
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let several = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single, several);
    }

    #[test]
    fn per_attempt_success_rate_matches_bell_fusion() {
        let model = CostModel::default();
        let stats = monte_carlo_growth(
            3,
            GateKind::Fgf,
            &model,
            PairingPolicy::BalancedTree,
            100_000,
            1,
        )
        .unwrap();
        let sigma = (0.75 * 0.25 / 100_000.0f64).sqrt();
        assert!((stats.success_rate - 0.75).abs() < 4.0 * sigma);
    }

    #[test]
    fn discard_means_agree_with_recursion() {
        let model = CostModel::default();
        let analytic =
            expected_cost(5, GateKind::Fgf, &model, PairingPolicy::BalancedTree).unwrap();
        let stats = monte_carlo_growth(
            5,
            GateKind::Fgf,
            &model,
            PairingPolicy::BalancedTree,
            100_000,
            11,
        )
        .unwrap();
        let se = (stats.var_bell_pairs / stats.trials as f64).sqrt();
        assert!(
            (stats.mean_bell_pairs - analytic.expected_bell_pairs).abs() < 4.0 * se,
            "bells {} vs {}",
            stats.mean_bell_pairs,
            analytic.expected_bell_pairs
        );
    }

    #[test]
    fn reuse_means_agree_with_value_iteration() {
        for gate in [GateKind::Fg, GateKind::Fgf] {
            for policy in [PairingPolicy::BalancedTree, PairingPolicy::Incremental] {
                let model = CostModel::new(RecyclePolicy::Reuse, 1.0, 0.1).unwrap();
                let target = if gate == GateKind::Fg { 5 } else { 6 };
                let analytic = expected_cost(target, gate, &model, policy).unwrap();
                let stats =
                    monte_carlo_growth(target, gate, &model, policy, 100_000, 23).unwrap();
                let se = (stats.var_cost_units / stats.trials as f64).sqrt();
                assert!(
                    (stats.mean_cost_units - analytic.expected_cost_units).abs() < 4.0 * se,
                    "{gate} {policy}: {} vs {}",
                    stats.mean_cost_units,
                    analytic.expected_cost_units
                );
            }
        }
    }

    #[test]
    fn rejects_zero_trials() {
        let model = CostModel::default();
        assert!(matches!(
            monte_carlo_growth(3, GateKind::Fgf, &model, PairingPolicy::BalancedTree, 0, 0),
            Err(Error::TooSmall { min: 1, .. })
        ));
    }
}
