//! Randomized memoryless strategies: construction from lassos, mixing of
//! good-for-energy and attractor strategies for mean-payoff Büchi and parity
//! objectives, and exact or sampled evaluation.

mod buchi;
mod chain;
mod eval;
mod parity;
mod regions;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{GameStructure, Lasso, Player};
use crate::strategy::Memoryless;

pub use buchi::{buchi_gamma, mp_buchi_pure, mp_buchi_randomized, phase_lengths, GammaParameters};
pub use chain::{
    chain_mean_payoff, induced_chain, stationary_distribution, BsccValue, ChainValue, FiniteChain,
    Transition, Q,
};
pub use eval::{
    best_response_expectation, check_buchi_guarantee, check_parity_guarantee, monte_carlo_eval,
    verify_support, BestResponse, MonteCarloReport, RNG_NAME,
};
pub use parity::mp_parity_randomized;
pub use regions::{
    attractor, good_for_energy, mp_buchi_region, mp_parity_region, Attractor,
};

/// A randomized memoryless strategy for player one: a distribution over
/// successors for every P1 state, listed in increasing successor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMStrategy {
    dist: Vec<Vec<(usize, Q)>>,
}

impl RMStrategy {
    /// Builds and validates a strategy from per-state distributions (empty
    /// for P2 states).
    pub fn new(g: &GameStructure, dist: Vec<Vec<(usize, Q)>>) -> Result<Self> {
        let mut dist = dist;
        for row in &mut dist {
            row.sort_by_key(|(t, _)| *t);
        }
        let s = RMStrategy { dist };
        s.validate(g)?;
        Ok(s)
    }

    /// The pure strategy picking `choice[s]` at every P1 state.
    pub fn from_memoryless(g: &GameStructure, choice: &[Option<usize>]) -> Result<Self> {
        let dist = (0..g.num_states())
            .map(|s| match (g.owner(s), choice.get(s).copied().flatten()) {
                (Player::One, Some(t)) => Ok(vec![(t, Q::one())]),
                (Player::One, None) => {
                    Err(Error::MalformedStrategy(format!("no choice at `{}`", g.id(s))))
                }
                (Player::Two, _) => Ok(Vec::new()),
            })
            .collect::<Result<_>>()?;
        RMStrategy::new(g, dist)
    }

    pub fn distribution(&self, s: usize) -> &[(usize, Q)] {
        &self.dist[s]
    }

    pub fn probability(&self, s: usize, t: usize) -> Q {
        self.dist[s]
            .iter()
            .find(|(u, _)| *u == t)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Successors played with positive probability.
    pub fn support(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.dist[s].iter().map(|(t, _)| *t)
    }

    pub fn is_pure(&self) -> bool {
        self.dist.iter().all(|row| row.len() <= 1)
    }

    /// The successor of every P1 state, when the strategy is pure.
    pub fn as_memoryless(&self) -> Option<Memoryless> {
        self.is_pure()
            .then(|| self.dist.iter().map(|row| row.first().map(|(t, _)| *t)).collect())
    }

    pub fn validate(&self, g: &GameStructure) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedStrategy(m));
        if self.dist.len() != g.num_states() {
            return bad(format!(
                "strategy covers {} states, game has {}",
                self.dist.len(),
                g.num_states()
            ));
        }
        for (s, row) in self.dist.iter().enumerate() {
            match g.owner(s) {
                Player::Two if !row.is_empty() => {
                    return bad(format!("distribution given at P2 state `{}`", g.id(s)))
                }
                Player::Two => continue,
                Player::One => {}
            }
            if row.is_empty() {
                return bad(format!("no distribution at `{}`", g.id(s)));
            }
            let mut total = Q::zero();
            for (i, (t, p)) in row.iter().enumerate() {
                if g.edge_between(s, *t).is_none() {
                    return bad(format!("{} -> {} is not an edge", g.id(s), g.id(*t)));
                }
                if *p <= Q::zero() || (i > 0 && row[i - 1].0 == *t) {
                    return bad(format!("bad probability entry at `{}`", g.id(s)));
                }
                total += p;
            }
            if !total.is_one() {
                return bad(format!("probabilities at `{}` sum to {total}", g.id(s)));
            }
        }
        Ok(())
    }
}

pub fn write_rm(g: &GameStructure, s: &RMStrategy) -> String {
    let mut out = String::from("rm\n");
    for (v, row) in s.dist.iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        let _ = write!(out, "dist {}", g.id(v));
        for (t, p) in row {
            let _ = write!(out, " {}:{}/{}", g.id(*t), p.numer(), p.denom());
        }
        out.push('\n');
    }
    out
}

/// Parses the `rm` format. P1 states without a `dist` line are rejected by
/// validation.
pub fn parse_rm(text: &str, g: &GameStructure) -> Result<RMStrategy> {
    let syntax = |line: usize, message: String| Error::Syntax { line, message };
    let mut seen_header = false;
    let mut dist = vec![Vec::new(); g.num_states()];
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match tok[0] {
            "rm" if tok.len() == 1 && !seen_header => seen_header = true,
            "dist" if seen_header && tok.len() >= 3 => {
                let s = g.index_of(tok[1])?;
                if !dist[s].is_empty() {
                    return Err(syntax(line_no, format!("second distribution for `{}`", tok[1])));
                }
                for entry in &tok[2..] {
                    let (succ, p) = entry
                        .split_once(':')
                        .ok_or_else(|| syntax(line_no, format!("expected succ:p, got `{entry}`")))?;
                    let p = crate::reduction::parse_rational(p)
                        .map_err(|_| syntax(line_no, format!("bad probability `{p}`")))?;
                    dist[s].push((g.index_of(succ)?, p));
                }
            }
            other => return Err(syntax(line_no, format!("unexpected line starting with `{other}`"))),
        }
    }
    if !seen_header {
        return Err(syntax(1, "missing `rm` header".into()));
    }
    RMStrategy::new(g, dist)
}

/// The frequency strategy of a one-player lasso. Cycle states play each
/// outgoing cycle transition with its relative frequency; states seen only on
/// the prefix pick uniformly among their prefix transitions; the rest take
/// their first successor.
pub fn rm_from_lasso(g: &GameStructure, lasso: &Lasso) -> Result<RMStrategy> {
    if !g.is_one_player() {
        return Err(Error::Precondition("rm_from_lasso needs a one-player game".into()));
    }
    lasso.validate(g)?;
    let n = g.num_states();
    let closed = lasso.closed_cycle();
    let mut cycle_counts: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
    for w in closed.windows(2) {
        *cycle_counts[w[0]].entry(w[1]).or_default() += 1;
    }
    let mut prefix_moves: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); n];
    let mut play = lasso.prefix.clone();
    play.push(lasso.cycle[0]);
    for w in play.windows(2) {
        prefix_moves[w[0]].insert(w[1], 1);
    }
    let dist = (0..n)
        .map(|s| {
            let counts = if !cycle_counts[s].is_empty() {
                &cycle_counts[s]
            } else if !prefix_moves[s].is_empty() {
                &prefix_moves[s]
            } else {
                return vec![(g.successors(s).next().unwrap(), Q::one())];
            };
            let total: i64 = counts.values().sum();
            counts
                .iter()
                .map(|(&t, &c)| (t, Q::new(BigInt::from(c), BigInt::from(total))))
                .collect()
        })
        .collect();
    RMStrategy::new(g, dist)
}

/// Mixes two memoryless strategies: where both are defined and differ, the
/// first is played with probability `1 − gamma` and the second with `gamma`.
/// States where only one is defined follow it; P1 states where neither is
/// defined take their first successor.
pub fn mix_strategies(
    g: &GameStructure,
    primary: &[Option<usize>],
    secondary: &[Option<usize>],
    gamma: &Q,
) -> Result<RMStrategy> {
    if *gamma <= Q::zero() || *gamma >= Q::one() {
        return Err(Error::GammaOutOfRange(format!("mixing weight {gamma} is not in (0, 1)")));
    }
    let pick = |v: &[Option<usize>], s: usize| v.get(s).copied().flatten();
    let dist = (0..g.num_states())
        .map(|s| {
            if g.owner(s) == Player::Two {
                return Vec::new();
            }
            match (pick(primary, s), pick(secondary, s)) {
                (Some(a), Some(b)) if a != b => {
                    vec![(a, Q::one() - gamma), (b, gamma.clone())]
                }
                (Some(a), _) | (None, Some(a)) => vec![(a, Q::one())],
                (None, None) => vec![(g.successors(s).next().unwrap(), Q::one())],
            }
        })
        .collect();
    RMStrategy::new(g, dist)
}

/// Lifts a strategy of a subgame (states `to_orig`) into `dst`.
pub(crate) fn lift_into(dst: &mut [Vec<(usize, Q)>], sub: &RMStrategy, to_orig: &[usize]) {
    for (i, &s) in to_orig.iter().enumerate() {
        if !sub.dist[i].is_empty() {
            dst[s] = sub.dist[i].iter().map(|(t, p)| (to_orig[*t], p.clone())).collect();
        }
    }
}
