//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use menergy::game::{GameStructure, Lasso, Player};
use menergy::strategy::MooreStrategy;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A random lasso of a one-player game whose cycle may revisit states.
/// Walks from the initial state, picks a cycle anchor on the walk and keeps
/// walking until the anchor comes back.
pub fn random_lasso(g: &GameStructure, rng: &mut impl Rng) -> Lasso {
    loop {
        let mut walk = vec![g.initial()];
        for _ in 0..rng.random_range(0..4) {
            let s = *walk.last().unwrap();
            let succ: Vec<usize> = g.successors(s).collect();
            walk.push(succ[rng.random_range(0..succ.len())]);
        }
        let anchor = *walk.last().unwrap();
        let mut cycle = vec![anchor];
        let mut s = anchor;
        for _ in 0..40 {
            let succ: Vec<usize> = g.successors(s).collect();
            s = succ[rng.random_range(0..succ.len())];
            if s == anchor {
                walk.pop();
                return Lasso::new(walk, cycle);
            }
            cycle.push(s);
        }
    }
}

/// A random Moore machine with up to `max_mem` memory states per game state.
pub fn random_moore(g: &GameStructure, max_mem: usize, rng: &mut impl Rng) -> MooreStrategy {
    let n = g.num_states();
    let mut memory = Vec::new();
    let mut of_state: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..n {
        for j in 0..rng.random_range(1..=max_mem) {
            of_state[s].push(memory.len());
            memory.push((s, vec![j as i64]));
        }
    }
    let mut action = BTreeMap::new();
    let mut update = BTreeMap::new();
    for (i, (s, _)) in memory.iter().enumerate() {
        let succ: Vec<usize> = g.successors(*s).collect();
        if g.owner(*s) == Player::One {
            action.insert(i, succ[rng.random_range(0..succ.len())]);
        }
        for t in succ {
            let opts = &of_state[t];
            update.insert((i, t), opts[rng.random_range(0..opts.len())]);
        }
    }
    let initial = of_state[g.initial()][0];
    MooreStrategy {
        memory,
        initial,
        action,
        update,
    }
}

/// Depth-bounded search for a violation: a prefix dropping below zero, or a
/// closed cycle with negative weight in some dimension or odd minimal priority.
pub fn exhaustive_violation(g: &GameStructure, m: &MooreStrategy, v0: &[i64], depth: usize) -> bool {
    fn go(
        g: &GameStructure,
        m: &MooreStrategy,
        path: &mut Vec<(usize, usize)>,
        levels: &mut Vec<Vec<i64>>,
        depth: usize,
    ) -> bool {
        let (s, mem) = *path.last().unwrap();
        if levels.last().unwrap().iter().any(|&x| x < 0) {
            return true;
        }
        if path.len() > depth {
            return false;
        }
        let targets: Vec<usize> = match g.owner(s) {
            Player::One => vec![m.choose(g, s, mem).unwrap()],
            Player::Two => g.successors(s).collect(),
        };
        for t in targets {
            let next = (t, m.next_memory(g, s, mem, t).unwrap());
            let mut level = levels.last().unwrap().clone();
            for (l, w) in level.iter_mut().zip(g.weight(s, t).unwrap()) {
                *l += w;
            }
            if let Some(pos) = path.iter().position(|&x| x == next) {
                let start = &levels[pos];
                let negative = level.iter().zip(start).any(|(a, b)| a < b);
                let prio = path[pos..].iter().map(|&(u, _)| g.priority(u)).min().unwrap();
                if negative || prio % 2 == 1 || level.iter().any(|&x| x < 0) {
                    return true;
                }
                continue;
            }
            path.push(next);
            levels.push(level);
            if go(g, m, path, levels, depth) {
                return true;
            }
            path.pop();
            levels.pop();
        }
        false
    }
    let mut path = vec![(g.initial(), m.initial)];
    let mut levels = vec![v0.to_vec()];
    go(g, m, &mut path, &mut levels, depth)
}
