//! ε-optimal strategies for mean payoff ≥ 0 with a Büchi condition: a pure
//! two-phase machine and its randomized memoryless counterpart.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::chain::{q, Q};
use super::regions::{attractor, good_for_energy, mp_buchi_region};
use super::{mix_strategies, RMStrategy};
use crate::error::{Error, Result};
use crate::game::{game_stats, GameStructure, Player};
use crate::strategy::{Memoryless, MooreStrategy};

fn check_epsilon(epsilon: &Q) -> Result<()> {
    if *epsilon <= Q::zero() {
        return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Lengths `(a, b)` of the energy phase and the attractor phase:
/// `a = max(0, ⌈2·W·n/ε⌉ − n)` and `b = n`.
pub fn phase_lengths(max_weight: i64, n: usize, epsilon: &Q) -> Result<(u64, u64)> {
    check_epsilon(epsilon)?;
    let n_big = BigInt::from(n);
    let total = ceil_q(&(Q::from_integer(BigInt::from(2 * max_weight) * &n_big) / epsilon));
    let a = (total - &n_big).max(BigInt::zero());
    let a = u64::try_from(a).map_err(|_| Error::Overflow("phase length"))?;
    Ok((a, n as u64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaParameters {
    pub k_star: BigInt,
    pub eta: Q,
    pub gamma: Q,
}

/// `k* = ⌈W(n+1)/ε⌉`, `η = W(n+1)/(k*+1)` and `γ* = (η − ε)/(k*(η − W))`.
/// With `W = 0` every cycle has weight 0 and `γ = 1/2` is used.
pub fn buchi_gamma(max_weight: i64, n: usize, epsilon: &Q) -> Result<GammaParameters> {
    check_epsilon(epsilon)?;
    if max_weight == 0 {
        return Ok(GammaParameters {
            k_star: BigInt::zero(),
            eta: Q::zero(),
            gamma: q(1, 2),
        });
    }
    let w = Q::from_integer(BigInt::from(max_weight));
    let wn = &w * Q::from_integer(BigInt::from(n + 1));
    let k_star = ceil_q(&(&wn / epsilon));
    let kq = Q::from_integer(k_star.clone());
    let eta = &wn / (&kq + Q::one());
    let denom = &kq * (&eta - &w);
    if denom.is_zero() {
        return Err(Error::GammaOutOfRange(format!("γ* undefined for ε = {epsilon}")));
    }
    let gamma = (&eta - epsilon) / denom;
    if gamma <= Q::zero() || gamma >= Q::one() {
        return Err(Error::GammaOutOfRange(format!(
            "γ* = {gamma} is not in (0, 1) for ε = {epsilon}; choose a smaller ε"
        )));
    }
    Ok(GammaParameters { k_star, eta, gamma })
}

/// The winning region for the Büchi set `f` with `s_init` checked inside it.
fn winning_region(g: &GameStructure, f: &[bool]) -> Result<Vec<bool>> {
    if f.len() != g.num_states() {
        return Err(Error::Precondition("Büchi set does not match the game".into()));
    }
    let region = mp_buchi_region(g, f)?;
    if !region[g.initial()] {
        return Err(Error::Precondition(format!(
            "`{}` is not winning for mean payoff ≥ 0 with the Büchi condition",
            g.id(g.initial())
        )));
    }
    Ok(region)
}

/// Good-for-energy and attractor-to-`f` strategies on a closed region. The
/// attractor strategy is undefined on `f` and outside the attractor.
pub(crate) fn region_strategies(
    g: &GameStructure,
    region: &[bool],
    f: &[bool],
) -> Result<(Memoryless, Memoryless, i64, usize)> {
    let gfe = good_for_energy(g, region)?;
    let (sub, to_orig) = g.subgame(region)?;
    let target: Vec<bool> = to_orig.iter().map(|&s| f[s]).collect();
    let attr = attractor(&sub, &target, Player::One);
    let mut to_f = vec![None; g.num_states()];
    for (i, t) in attr.strategy.iter().enumerate() {
        to_f[to_orig[i]] = t.map(|t| to_orig[t]);
    }
    Ok((gfe, to_f, game_stats(&sub).max_weight, sub.num_states()))
}

/// The mixture on a region assumed winning, with `γ` from [`buchi_gamma`].
pub(crate) fn buchi_mix(
    g: &GameStructure,
    region: &[bool],
    f: &[bool],
    epsilon: &Q,
) -> Result<(RMStrategy, Q)> {
    let (gfe, to_f, w, n) = region_strategies(g, region, f)?;
    let gamma = buchi_gamma(w, n, epsilon)?.gamma;
    Ok((mix_strategies(g, &gfe, &to_f, &gamma)?, gamma))
}

/// The randomized memoryless strategy that plays good-for-energy with
/// probability `1 − γ*` and attractor-to-`f` with probability `γ*`.
pub fn mp_buchi_randomized(g: &GameStructure, f: &[bool], epsilon: &Q) -> Result<(RMStrategy, Q)> {
    check_epsilon(epsilon)?;
    let region = winning_region(g, f)?;
    buchi_mix(g, &region, f, epsilon)
}

/// The pure two-phase machine: `a` steps of good-for-energy play, then `b`
/// steps of attractor play towards `f` (good-for-energy again once in `f`),
/// repeated forever. Memory is `(state, step counter)`.
pub fn mp_buchi_pure(g: &GameStructure, f: &[bool], epsilon: &Q) -> Result<MooreStrategy> {
    check_epsilon(epsilon)?;
    let region = winning_region(g, f)?;
    let (gfe, to_f, w, n) = region_strategies(g, &region, f)?;
    let (a, b) = phase_lengths(w, n, epsilon)?;
    let period = a + b;
    let act = |s: usize, c: u64| -> usize {
        let pick = if c < a || f[s] { gfe[s] } else { to_f[s].or(gfe[s]) };
        pick.expect("region strategies cover every P1 state of the region")
    };

    let start = (g.initial(), 0u64);
    let mut memory = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut action = BTreeMap::new();
    let mut update = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(mi) = queue.pop_front() {
        let (s, c) = memory[mi];
        let targets: Vec<usize> = match g.owner(s) {
            Player::One => {
                let t = act(s, c);
                action.insert(mi, t);
                vec![t]
            }
            Player::Two => g.successors(s).collect(),
        };
        for t in targets {
            let key = (t, (c + 1) % period);
            let j = *index.entry(key).or_insert_with(|| {
                memory.push(key);
                queue.push_back(memory.len() - 1);
                memory.len() - 1
            });
            update.insert((mi, t), j);
        }
    }
    let m = MooreStrategy {
        memory: memory.into_iter().map(|(s, c)| (s, vec![c as i64])).collect(),
        initial: 0,
        action,
        update,
    };
    m.validate(g)?;
    Ok(m)
}
