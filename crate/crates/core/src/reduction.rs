//! Objective reductions: parity to extra energy dimensions, mean-payoff
//! thresholds to energy, and the theoretical completeness caps.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::game::{game_stats, GameStructure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub original_dimension: usize,
    pub added_dimensions: usize,
    /// Odd priority `q` to the (0-based) weight index tracking it.
    pub priority_to_dimension: BTreeMap<u32, usize>,
    pub reward: i64,
    /// `2 · l · max(W, 1)` with the reward used as the depth constant.
    pub cap_hint: BigUint,
}

fn exponent(n: usize) -> u32 {
    u32::try_from(n).expect("bound exponent exceeds u32")
}

/// `2^((d−1)·|S|) · (max(W,1)·|S| + 1)^(c·k²)`.
pub fn depth_bound(g: &GameStructure, c_const: u32) -> BigUint {
    let st = game_stats(g);
    let n = g.num_states();
    let k = g.dimension();
    let w = st.max_weight.max(1) as u64;
    let first = BigUint::one() << ((st.branching.saturating_sub(1)) * n);
    let base = BigUint::from(w) * BigUint::from(n) + BigUint::one();
    first * base.pow(exponent(c_const as usize * k * k))
}

/// `2 · depth_bound(g, c) · max(W, 1)`.
pub fn completeness_cap(g: &GameStructure, c_const: u32) -> BigUint {
    let w = game_stats(g).max_weight.max(1) as u64;
    depth_bound(g, c_const) * BigUint::from(2u32) * BigUint::from(w)
}

/// Replaces the parity condition by one extra energy dimension per odd
/// priority. The charge is taken on the target of each edge: the dimension of
/// odd `q` loses 1 when entering priority `q` and gains `l` when entering an
/// even priority below `q`.
pub fn parity_to_energy(g: &GameStructure, l: i64) -> Result<(GameStructure, ReductionReport)> {
    if l < 1 {
        return Err(Error::Precondition("reward l must be positive".into()));
    }
    let k = g.dimension();
    let m = g.max_priority().div_ceil(2) as usize;
    let priority_to_dimension: BTreeMap<u32, usize> =
        (0..m).map(|i| (2 * i as u32 + 1, k + i)).collect();
    let weights = g
        .edges()
        .iter()
        .map(|e| {
            let pt = g.priority(e.target);
            let mut w = e.weight.clone();
            for &q in priority_to_dimension.keys() {
                w.push(if pt == q {
                    -1
                } else if pt.is_multiple_of(2) && pt < q {
                    l
                } else {
                    0
                });
            }
            w
        })
        .collect();
    let reduced = g
        .with_weights(k + m, weights)?
        .with_priorities(&vec![0; g.num_states()])?;
    let w = game_stats(g).max_weight.max(1) as u64;
    let report = ReductionReport {
        original_dimension: k,
        added_dimensions: m,
        priority_to_dimension,
        reward: l,
        cap_hint: BigUint::from(2u32) * BigUint::from(l as u64) * BigUint::from(w),
    };
    Ok((reduced, report))
}

/// Shifts a mean-payoff threshold into an energy game: with `v(j) = n/d` in
/// lowest terms, every weight becomes `d·w − n`.
pub fn mp_to_energy(g: &GameStructure, v: &[BigRational]) -> Result<GameStructure> {
    if v.len() != g.dimension() {
        return Err(Error::Validation(format!(
            "threshold has {} entries, game has dimension {}",
            v.len(),
            g.dimension()
        )));
    }
    let scale: Vec<(i64, i64)> = v
        .iter()
        .map(|q| {
            let n = q.numer().to_i64();
            let d = q.denom().abs().to_i64();
            match (n, d) {
                (Some(n), Some(d)) => Ok((n, d)),
                _ => Err(Error::Overflow("scaling a mean-payoff threshold")),
            }
        })
        .collect::<Result<_>>()?;
    let weights = g
        .edges()
        .iter()
        .map(|e| {
            e.weight
                .iter()
                .zip(&scale)
                .map(|(&w, &(n, d))| {
                    d.checked_mul(w)
                        .and_then(|x| x.checked_sub(n))
                        .ok_or(Error::Overflow("scaling weights"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    g.with_weights(g.dimension(), weights)
}

/// Parses `n/d` or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Validation(format!("bad rational `{text}`"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
