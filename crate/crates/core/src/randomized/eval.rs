//! Evaluation of randomized strategies: exact best responses over P2
//! memoryless strategies, guarantee checks, support-graph energy checks and
//! seeded Monte Carlo simulation.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::{chain_mean_payoff, induced_chain, ChainValue, Q};
use super::RMStrategy;
use crate::error::{Error, Result};
use crate::game::{GameStructure, Player};
use crate::graph::bellman_ford;
use crate::strategy::{enumerate_p2_memoryless, Memoryless, Verdict};

pub const RNG_NAME: &str = "ChaCha8";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponse {
    /// Component-wise minimal expectations over all P2 memoryless strategies.
    pub worst: Vec<Vec<Q>>,
    /// The P2 strategy minimising `min_j (E_j − threshold_j)`.
    pub witness: Memoryless,
    pub witness_value: Vec<Q>,
    /// Some P2 strategy keeps the expectation from dominating the threshold.
    pub below_threshold: bool,
    pub responses: usize,
}

fn dominates(a: &[Q], b: &[Q]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Exact expectations of `s1` against every P2 memoryless strategy.
/// `thresholds` defaults to the zero vector.
pub fn best_response_expectation(
    g: &GameStructure,
    s1: &RMStrategy,
    thresholds: Option<&[Q]>,
) -> Result<BestResponse> {
    let zero = vec![Q::zero(); g.dimension()];
    let thresholds = thresholds.unwrap_or(&zero);
    if thresholds.len() != g.dimension() {
        return Err(Error::Precondition("threshold dimension differs from the game".into()));
    }
    let mut values: Vec<Vec<Q>> = Vec::new();
    let mut best: Option<(Q, Memoryless, Vec<Q>)> = None;
    let mut below = false;
    let mut responses = 0;
    for adv in enumerate_p2_memoryless(g)? {
        responses += 1;
        let e = chain_mean_payoff(&induced_chain(g, s1, &adv)?)?.expectation;
        below |= !dominates(&e, thresholds);
        let margin = e.iter().zip(thresholds).map(|(x, t)| x - t).min().unwrap();
        if best.as_ref().is_none_or(|(m, _, _)| margin < *m) {
            best = Some((margin, adv, e.clone()));
        }
        if !values.contains(&e) {
            values.push(e);
        }
    }
    let worst = values
        .iter()
        .filter(|v| !values.iter().any(|u| u != *v && dominates(v, u)))
        .cloned()
        .collect();
    let (_, witness, witness_value) = best.expect("at least one P2 strategy");
    Ok(BestResponse {
        worst,
        witness,
        witness_value,
        below_threshold: below,
        responses,
    })
}

fn check_all(
    g: &GameStructure,
    s1: &RMStrategy,
    ok: impl Fn(&ChainValue, &[usize], &[u32]) -> bool,
) -> Result<Option<Memoryless>> {
    for adv in enumerate_p2_memoryless(g)? {
        let chain = induced_chain(g, s1, &adv)?;
        let value = chain_mean_payoff(&chain)?;
        if !ok(&value, &chain.states, &chain.priorities) {
            return Ok(Some(adv));
        }
    }
    Ok(None)
}

/// Against every P2 memoryless strategy, every BSCC of the induced chain
/// contains an `f` state and has mean payoff ≥ −ε in every dimension.
/// Returns a violating P2 strategy if there is one.
pub fn check_buchi_guarantee(
    g: &GameStructure,
    s1: &RMStrategy,
    f: &[bool],
    epsilon: &Q,
) -> Result<Option<Memoryless>> {
    let floor = -epsilon.clone();
    check_all(g, s1, |v, states, _| {
        v.bsccs.iter().all(|b| {
            b.nodes.iter().any(|&n| f[states[n]]) && b.mean_payoff.iter().all(|m| *m >= floor)
        })
    })
}

/// Against every P2 memoryless strategy, every BSCC of the induced chain has
/// an even minimal priority and mean payoff ≥ −ε.
pub fn check_parity_guarantee(g: &GameStructure, s1: &RMStrategy, epsilon: &Q) -> Result<Option<Memoryless>> {
    let floor = -epsilon.clone();
    check_all(g, s1, |v, _, prio| {
        v.bsccs.iter().all(|b| {
            b.nodes.iter().map(|&n| prio[n]).min().unwrap() % 2 == 0
                && b.mean_payoff.iter().all(|m| *m >= floor)
        })
    })
}

/// Energy check on the support graph: every path that follows an edge of
/// positive probability at P1 states and any edge at P2 states keeps
/// `v0 + EL ≥ 0`. Randomization cannot avoid a bad path of positive
/// probability, so this is the almost-sure verdict.
pub fn verify_support(g: &GameStructure, s1: &RMStrategy, v0: &[i64]) -> Result<Verdict> {
    s1.validate(g)?;
    if v0.len() != g.dimension() {
        return Err(Error::Precondition("credit dimension differs from the game".into()));
    }
    let mut arcs = Vec::new();
    for s in 0..g.num_states() {
        match g.owner(s) {
            Player::One => arcs.extend(s1.support(s).map(|t| (s, t))),
            Player::Two => arcs.extend(g.successors(s).map(|t| (s, t))),
        }
    }
    for (d, &credit) in v0.iter().enumerate() {
        let edges: Vec<(usize, usize, i64)> =
            arcs.iter().map(|&(s, t)| (s, t, g.weight(s, t).unwrap()[d])).collect();
        let sp = bellman_ford(g.num_states(), &edges, g.initial());
        if sp.negative_cycle.is_some()
            || sp.dist.iter().flatten().any(|&x| x + (credit as i128) < 0)
        {
            return Ok(Verdict::Losing);
        }
    }
    Ok(Verdict::Winning)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub generator: &'static str,
    pub seed: u64,
    pub horizon: u64,
    /// Per-episode average payoff, one vector per episode.
    pub episode_means: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
    /// Total visits per state over all episodes.
    pub visits: Vec<u64>,
    /// Number of episodes visiting each state at least once.
    pub episodes_visiting: Vec<usize>,
    /// Minimal priority seen in the second half of each episode.
    pub tail_min_priority: Vec<u32>,
}

impl MonteCarloReport {
    pub fn episodes(&self) -> usize {
        self.episode_means.len()
    }
}

/// Simulates `episodes` plays of `horizon` steps. Episode `i` uses a
/// ChaCha8 stream `i` keyed by `seed`, so results do not depend on the
/// order episodes are run in.
pub fn monte_carlo_eval(
    g: &GameStructure,
    s1: &RMStrategy,
    s2: &[Option<usize>],
    horizon: u64,
    episodes: usize,
    seed: u64,
) -> Result<MonteCarloReport> {
    if horizon == 0 || episodes == 0 {
        return Err(Error::Precondition("horizon and episodes must be at least 1".into()));
    }
    s1.validate(g)?;
    let n = g.num_states();
    // Cumulative distributions in f64 for sampling.
    let mut table: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for s in 0..n {
        match g.owner(s) {
            Player::One => {
                let mut acc = 0.0;
                for (t, p) in s1.distribution(s) {
                    acc += p.to_f64().unwrap_or(0.0);
                    table[s].push((*t, acc));
                }
            }
            Player::Two => {
                let t = s2.get(s).copied().flatten().filter(|&t| g.edge_between(s, t).is_some());
                let t = t.ok_or_else(|| {
                    Error::MalformedStrategy(format!("adversary has no valid move at `{}`", g.id(s)))
                })?;
                table[s].push((t, 1.0));
            }
        }
    }
    let k = g.dimension();
    let mut episode_means = Vec::with_capacity(episodes);
    let mut visits = vec![0u64; n];
    let mut episodes_visiting = vec![0usize; n];
    let mut tail_min_priority = Vec::with_capacity(episodes);
    for e in 0..episodes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(e as u64);
        let mut seen = vec![false; n];
        let mut level = vec![0i128; k];
        let mut s = g.initial();
        let mut tail_min = u32::MAX;
        for step in 0..horizon {
            visits[s] += 1;
            seen[s] = true;
            if step >= horizon / 2 {
                tail_min = tail_min.min(g.priority(s));
            }
            let row = &table[s];
            let t = if row.len() == 1 {
                row[0].0
            } else {
                let x: f64 = rng.random::<f64>() * row.last().unwrap().1;
                row.iter().find(|(_, c)| x < *c).unwrap_or(row.last().unwrap()).0
            };
            for (l, w) in level.iter_mut().zip(g.weight(s, t).unwrap()) {
                *l += *w as i128;
            }
            s = t;
        }
        for (v, c) in episodes_visiting.iter_mut().zip(&seen) {
            *v += *c as usize;
        }
        episode_means.push(level.iter().map(|&l| l as f64 / horizon as f64).collect::<Vec<_>>());
        tail_min_priority.push(tail_min);
    }
    let count = episodes as f64;
    let mean: Vec<f64> = (0..k)
        .map(|d| episode_means.iter().map(|m| m[d]).sum::<f64>() / count)
        .collect();
    let std_dev = (0..k)
        .map(|d| {
            let var = episode_means.iter().map(|m| (m[d] - mean[d]).powi(2)).sum::<f64>() / count;
            var.sqrt()
        })
        .collect();
    Ok(MonteCarloReport {
        generator: RNG_NAME,
        seed,
        horizon,
        episode_means,
        mean,
        std_dev,
        visits,
        episodes_visiting,
        tail_min_priority,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_paper_fixture, FixtureId};
    use crate::randomized::chain::q;
    use crate::randomized::mix_strategies;

    fn fig6_strategy(g: &GameStructure, p: &Q) -> RMStrategy {
        let s = |id: &str| g.index_of(id).unwrap();
        let mut dist = vec![Vec::new(); g.num_states()];
        dist[s("s2")] = vec![(s("s4"), q(1, 1))];
        dist[s("s3")] = vec![(s("s4"), q(1, 1))];
        dist[s("s4")] = if p.is_zero() {
            vec![(s("s6"), q(1, 1))]
        } else if *p == q(1, 1) {
            vec![(s("s5"), q(1, 1))]
        } else {
            vec![(s("s5"), p.clone()), (s("s6"), q(1, 1) - p)]
        };
        dist[s("s5")] = vec![(s("s1"), q(1, 1))];
        dist[s("s6")] = vec![(s("s1"), q(1, 1))];
        RMStrategy::new(g, dist).unwrap()
    }

    #[test]
    fn fig6_best_responses() {
        let g = gen_paper_fixture(FixtureId::Fig6);
        let s2 = g.index_of("s2").unwrap();
        let s3 = g.index_of("s3").unwrap();
        let r = best_response_expectation(&g, &fig6_strategy(&g, &q(1, 2)), None).unwrap();
        assert_eq!(r.witness[0], Some(s2));
        assert_eq!(r.witness_value, vec![q(1, 4), q(-1, 4)]);
        assert!(r.below_threshold);
        let r = best_response_expectation(&g, &fig6_strategy(&g, &q(1, 4)), None).unwrap();
        assert_eq!(r.witness[0], Some(s3));
        assert_eq!(r.witness_value, vec![q(-3, 8), q(3, 8)]);
        assert_eq!(r.responses, 2);
    }

    #[test]
    fn one_player_best_response_is_the_chain_value() {
        let g = gen_paper_fixture(FixtureId::Fig5);
        let coin = RMStrategy::new(
            &g,
            vec![vec![(1, q(1, 2)), (2, q(1, 2))], vec![(1, q(1, 1))], vec![(2, q(1, 1))]],
        )
        .unwrap();
        let r = best_response_expectation(&g, &coin, None).unwrap();
        assert_eq!(r.worst, vec![vec![q(1, 1), q(1, 1)]]);
        assert!(!r.below_threshold);
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let g = gen_paper_fixture(FixtureId::Fig7);
        let s = mix_strategies(&g, &[Some(0), Some(0)], &[Some(1), None], &q(1, 9)).unwrap();
        let a = monte_carlo_eval(&g, &s, &[None, None], 2000, 10, 42).unwrap();
        let b = monte_carlo_eval(&g, &s, &[None, None], 2000, 10, 42).unwrap();
        assert_eq!(a, b);
        assert!((a.mean[0] - 0.6).abs() < 0.1);
        assert_eq!(a.episodes_visiting, vec![10, 10]);
        assert_eq!(a.generator, "ChaCha8");

        let pure = RMStrategy::from_memoryless(&g, &[Some(0), Some(0)]).unwrap();
        let r = monte_carlo_eval(&g, &pure, &[None, None], 100, 5, 1).unwrap();
        assert_eq!(r.std_dev, vec![0.0]);
        assert_eq!(r.mean, vec![1.0]);
        assert!(monte_carlo_eval(&g, &pure, &[None, None], 0, 5, 1).is_err());
    }

    #[test]
    fn support_graph_energy() {
        let g = gen_paper_fixture(FixtureId::Fig7);
        let loop_only = RMStrategy::from_memoryless(&g, &[Some(0), Some(0)]).unwrap();
        assert_eq!(verify_support(&g, &loop_only, &[0]).unwrap(), Verdict::Winning);
        // The s1 -> s2 -> s1 cycle has weight −2 and positive probability.
        let mixed = mix_strategies(&g, &[Some(0), Some(0)], &[Some(1), None], &q(1, 9)).unwrap();
        assert_eq!(verify_support(&g, &mixed, &[100]).unwrap(), Verdict::Losing);
    }
}
