//! The symbolic controllable-predecessor fixed point over antichains, an
//! explicit-set oracle for it, and the incremental cap schedule.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::antichain::{Antichain, Credit};
use crate::error::{Error, Result};
use crate::game::{game_stats, GameStructure, Player};
use crate::reduction::completeness_cap;

/// Default bound on `|S|·(C+1)^k` for the explicit oracle.
pub const ORACLE_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointResult {
    pub cap: u64,
    /// Minimal elements of the greatest fixed point within `U(C)`.
    pub winning: Antichain,
    /// Number of operator applications, including the one confirming stability.
    pub iterations: usize,
    /// Antichain size of every iterate `U_0, U_1, …` up to the fixed point.
    pub sizes: Vec<usize>,
}

impl FixpointResult {
    /// Number of strict descents `U_i ⊋ U_{i+1}` before stabilisation.
    pub fn descents(&self) -> usize {
        self.iterations - 1
    }

    pub fn initial_credits(&self, g: &GameStructure) -> &[Credit] {
        self.winning.at(g.initial())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Won {
        cap: u64,
        initial_credits: Vec<Credit>,
        fixpoint: FixpointResult,
    },
    UnknownUpTo { cap: u64 },
}

fn cap_i64(cap: u64) -> i64 {
    i64::try_from(cap).expect("cap exceeds i64")
}

/// Minimal credits `max(0, e2 − w)` that still fit below the cap.
fn edge_requirements(w: &[i64], target: &[Credit], cap: i64) -> Vec<Credit> {
    target
        .iter()
        .filter_map(|e2| {
            let e: Credit = e2.iter().zip(w).map(|(&a, &b)| a.saturating_sub(b).max(0)).collect();
            e.iter().all(|&x| x <= cap).then_some(e)
        })
        .collect()
}

fn minimize(mut v: Vec<Credit>) -> Vec<Credit> {
    v.sort();
    v.dedup();
    let mut out: Vec<Credit> = Vec::with_capacity(v.len());
    for e in v {
        if !out.iter().any(|x| crate::antichain::leq(x, &e)) {
            out.retain(|x| !crate::antichain::leq(&e, x));
            out.push(e);
        }
    }
    out
}

/// One application of `Cpre_C`.
pub fn cpre_step(g: &GameStructure, v: &Antichain) -> Antichain {
    let cap = cap_i64(v.cap());
    let k = g.dimension();
    let mut out = Antichain::empty(g.num_states(), k, v.cap());
    for s in 0..g.num_states() {
        let edges = g.out_edges(s).iter().map(|&e| g.edge(e));
        let candidates = match g.owner(s) {
            Player::One => edges
                .flat_map(|e| edge_requirements(&e.weight, v.at(e.target), cap))
                .collect(),
            Player::Two => {
                let mut acc: Vec<Credit> = vec![vec![0; k]];
                for e in edges {
                    let req = edge_requirements(&e.weight, v.at(e.target), cap);
                    let mut next = Vec::with_capacity(acc.len() * req.len());
                    for a in &acc {
                        for b in &req {
                            next.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
                        }
                    }
                    acc = minimize(next);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
        };
        out.set_state(s, candidates);
    }
    out
}

/// All iterates `U_0 = U(C), U_1, …, U_n` where `U_n` is the first fixed point.
pub fn cpre_chain(g: &GameStructure, cap: u64) -> Vec<Antichain> {
    let mut chain = vec![Antichain::full(g.num_states(), g.dimension(), cap)];
    loop {
        let next = cpre_step(g, chain.last().unwrap());
        if &next == chain.last().unwrap() {
            return chain;
        }
        chain.push(next);
    }
}

/// Greatest fixed point of `Cpre_C` by successive approximation from `U(C)`.
pub fn cpre_fixpoint(g: &GameStructure, cap: u64) -> FixpointResult {
    let mut current = Antichain::full(g.num_states(), g.dimension(), cap);
    let mut sizes = vec![current.len()];
    let mut iterations = 0;
    loop {
        let next = cpre_step(g, &current);
        iterations += 1;
        if next == current {
            return FixpointResult {
                cap,
                winning: current,
                iterations,
                sizes,
            };
        }
        sizes.push(next.len());
        current = next;
    }
}

/// Runs the fixed point for each cap of `schedule` until the initial state wins.
/// `on_run` sees every computed fixed point (for telemetry).
pub fn incremental_solve_with(
    g: &GameStructure,
    schedule: &[u64],
    hard_cap: u64,
    mut on_run: impl FnMut(&FixpointResult),
) -> Result<SolveOutcome> {
    if schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) || *schedule.last().unwrap() > hard_cap {
        return Err(Error::BadSchedule);
    }
    for &cap in schedule {
        let fp = cpre_fixpoint(g, cap);
        on_run(&fp);
        let credits = fp.initial_credits(g).to_vec();
        if !credits.is_empty() {
            return Ok(SolveOutcome::Won {
                cap,
                initial_credits: credits,
                fixpoint: fp,
            });
        }
    }
    Ok(SolveOutcome::UnknownUpTo {
        cap: *schedule.last().unwrap(),
    })
}

pub fn incremental_solve(g: &GameStructure, schedule: &[u64], hard_cap: u64) -> Result<SolveOutcome> {
    incremental_solve_with(g, schedule, hard_cap, |_| {})
}

/// Powers of two times `max(W,1)`, up to `min(hard_cap, completeness_cap)`.
pub fn default_schedule(g: &GameStructure, c_const: u32, hard_cap: u64) -> Vec<u64> {
    let theoretical = completeness_cap(g, c_const);
    let limit = theoretical.to_u64().unwrap_or(u64::MAX).min(hard_cap);
    let mut cap = game_stats(g).max_weight.max(1) as u64;
    let mut out = Vec::new();
    while cap <= limit {
        out.push(cap);
        match cap.checked_mul(2) {
            Some(c) => cap = c,
            None => break,
        }
    }
    if out.last() != Some(&limit) && (out.is_empty() || limit > *out.last().unwrap()) {
        out.push(limit);
    }
    out
}

/// Whether a cap equals the theoretical completeness cap.
pub fn is_complete_cap(g: &GameStructure, c_const: u32, cap: u64) -> bool {
    completeness_cap(g, c_const) <= BigUint::from(cap)
}

/// An explicitly materialised subset of `U(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitSet {
    num_states: usize,
    dimension: usize,
    cap: u64,
    side: usize,
    per_state: usize,
    bits: Vec<bool>,
}

impl ExplicitSet {
    fn new(num_states: usize, dimension: usize, cap: u64, limit: u128) -> Result<Self> {
        let side = cap as u128 + 1;
        let per_state = side
            .checked_pow(dimension as u32)
            .ok_or(Error::LimitExceeded {
                what: "|U(C)|",
                size: u128::MAX,
                limit,
            })?;
        let size = per_state * num_states as u128;
        if size > limit {
            return Err(Error::LimitExceeded {
                what: "|U(C)|",
                size,
                limit,
            });
        }
        Ok(ExplicitSet {
            num_states,
            dimension,
            cap,
            side: side as usize,
            per_state: per_state as usize,
            bits: vec![false; size as usize],
        })
    }

    fn offset(&self, e: &[i64]) -> usize {
        e.iter().rev().fold(0, |acc, &x| acc * self.side + x as usize)
    }

    fn decode(&self, mut off: usize) -> Credit {
        (0..self.dimension)
            .map(|_| {
                let x = off % self.side;
                off /= self.side;
                x as i64
            })
            .collect()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Whether `(s, e)` is a member; `e` must be within `[0, C]^k`.
    pub fn contains(&self, s: usize, e: &[i64]) -> bool {
        if e.iter().any(|&x| x < 0 || x as u64 > self.cap) {
            return false;
        }
        self.bits[s * self.per_state + self.offset(e)]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn members(&self) -> Vec<(usize, Credit)> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i / self.per_state, self.decode(i % self.per_state)))
            .collect()
    }

    /// Minimal elements, assuming the set is upward-closed within `U(C)`.
    pub fn to_antichain(&self) -> Antichain {
        let mut a = Antichain::empty(self.num_states, self.dimension, self.cap);
        for (s, e) in self.members() {
            let minimal = (0..self.dimension).all(|j| {
                if e[j] == 0 {
                    return true;
                }
                let mut d = e.clone();
                d[j] -= 1;
                !self.contains(s, &d)
            });
            if minimal {
                a.insert_unchecked(s, &e);
            }
        }
        a
    }

    /// Whether the set is closed upward within `U(C)`.
    pub fn is_upward_closed(&self) -> bool {
        self.members().iter().all(|(s, e)| {
            (0..self.dimension).all(|j| {
                if e[j] as u64 == self.cap {
                    return true;
                }
                let mut u = e.clone();
                u[j] += 1;
                self.contains(*s, &u)
            })
        })
    }

    /// Materialises the upward closure of an antichain.
    pub fn from_antichain(a: &Antichain, limit: u128) -> Result<Self> {
        let mut x = ExplicitSet::new(a.num_states(), a.dimension(), a.cap(), limit)?;
        for i in 0..x.bits.len() {
            let s = i / x.per_state;
            let e = x.decode(i % x.per_state);
            x.bits[i] = a.contains_upward(s, &e);
        }
        Ok(x)
    }

    /// For each `x`, whether some member `e ≤ x` exists (per state).
    fn downward_witness(&self) -> Vec<bool> {
        let mut p = self.bits.clone();
        let mut stride = 1;
        for _ in 0..self.dimension {
            for s in 0..self.num_states {
                let base = s * self.per_state;
                for off in 0..self.per_state {
                    if (off / stride) % self.side != 0 && p[base + off - stride] {
                        p[base + off] = true;
                    }
                }
            }
            stride *= self.side;
        }
        p
    }
}

/// The same greatest fixed point computed on the fully materialised universe.
pub fn naive_fixpoint_oracle(g: &GameStructure, cap: u64) -> Result<ExplicitSet> {
    naive_fixpoint_oracle_with_limit(g, cap, ORACLE_LIMIT)
}

pub fn naive_fixpoint_oracle_with_limit(g: &GameStructure, cap: u64, limit: u128) -> Result<ExplicitSet> {
    let mut v = ExplicitSet::new(g.num_states(), g.dimension(), cap, limit)?;
    v.bits.iter_mut().for_each(|b| *b = true);
    let c = cap_i64(cap);
    loop {
        let below = v.downward_witness();
        let lands = |e: &[i64], edge: usize| {
            let edge = g.edge(edge);
            let mut x = Vec::with_capacity(e.len());
            for (a, b) in e.iter().zip(&edge.weight) {
                let y = a.saturating_add(*b);
                if y < 0 {
                    return false;
                }
                x.push(y.min(c));
            }
            below[edge.target * v.per_state + v.offset(&x)]
        };
        let mut next = v.clone();
        for (i, bit) in next.bits.iter_mut().enumerate() {
            let s = i / v.per_state;
            let e = v.decode(i % v.per_state);
            let mut edges = g.out_edges(s).iter();
            *bit = match g.owner(s) {
                Player::One => edges.any(|&ed| lands(&e, ed)),
                Player::Two => edges.all(|&ed| lands(&e, ed)),
            };
        }
        if next.bits == v.bits {
            return Ok(v);
        }
        v = next;
    }
}
