//! Recursive construction of ε-optimal randomized memoryless strategies for
//! single-dimension mean-payoff parity games.

use num_traits::One;

use super::buchi::buchi_mix;
use super::chain::Q;
use super::regions::{attractor, mp_parity_region};
use super::{lift_into, RMStrategy};
use crate::error::{Error, Result};
use crate::game::{GameStructure, Player};
use crate::graph::{bellman_ford, is_nontrivial, sccs};
use crate::strategy::{enumerate_memoryless, Memoryless, ENUMERATION_LIMIT};

/// A randomized memoryless strategy winning, up to `ε`, from every state of
/// the mean-payoff parity winning region. The initial state must be winning.
pub fn mp_parity_randomized(g: &GameStructure, epsilon: &Q) -> Result<RMStrategy> {
    let win = mp_parity_region(g)?;
    if !win[g.initial()] {
        return Err(Error::Precondition(format!(
            "`{}` is not winning for mean payoff ≥ 0 with parity",
            g.id(g.initial())
        )));
    }
    let (h, to_orig) = g.subgame(&win)?;
    let sub = solve(&h, epsilon)?;
    let mut dist = vec![Vec::new(); g.num_states()];
    lift_into(&mut dist, &sub, &to_orig);
    fill_first_successor(g, &mut dist);
    RMStrategy::new(g, dist)
}

fn fill_first_successor(g: &GameStructure, dist: &mut [Vec<(usize, Q)>]) {
    for s in g.states_of(Player::One) {
        if dist[s].is_empty() {
            dist[s] = vec![(g.successors(s).next().unwrap(), Q::one())];
        }
    }
}

fn complement(mask: &[bool]) -> Vec<bool> {
    mask.iter().map(|&b| !b).collect()
}

/// `h` is assumed winning from every state.
fn solve(h: &GameStructure, epsilon: &Q) -> Result<RMStrategy> {
    let n = h.num_states();
    let lowest = (0..n).map(|s| h.priority(s)).min().unwrap();
    let shift = lowest - lowest % 2;
    let prio: Vec<u32> = (0..n).map(|s| h.priority(s) - shift).collect();
    let highest = *prio.iter().max().unwrap();
    let all = vec![true; n];

    if n == 1 {
        let only: Memoryless = vec![h.successors(0).next()];
        return RMStrategy::from_memoryless(h, &only);
    }
    if highest <= 1 {
        if !prio.contains(&0) {
            return Err(Error::Precondition("odd priorities only in a winning subgame".into()));
        }
        let f: Vec<bool> = prio.iter().map(|&p| p == 0).collect();
        return Ok(buchi_mix(h, &all, &f, epsilon)?.0);
    }
    if lowest % 2 == 1 && highest - (lowest - shift) == 1 {
        return cobuchi(h);
    }

    let mut dist = vec![Vec::new(); n];
    if prio.contains(&0) {
        let u0: Vec<bool> = prio.iter().map(|&p| p == 0).collect();
        let a1 = attractor(h, &u0, Player::One);
        // States attracted to U0 mix between energy play and reaching U0;
        // the P1-trap outside the attractor is solved recursively.
        let (mix, _) = buchi_mix(h, &all, &u0, epsilon)?;
        for s in 0..n {
            if a1.set[s] {
                dist[s] = mix.distribution(s).to_vec();
            }
        }
        if a1.set.iter().any(|&a| !a) {
            let (hb, map) = h.subgame(&complement(&a1.set))?;
            lift_into(&mut dist, &solve(&hb, epsilon)?, &map);
        }
    } else {
        let u1: Vec<bool> = prio.iter().map(|&p| p == 1).collect();
        let a2 = attractor(h, &u1, Player::Two);
        let b = complement(&a2.set);
        if !b.iter().any(|&x| x) {
            return Err(Error::Precondition("player two attracts every state to an odd minimum".into()));
        }
        // Only the part of the P2-trap that wins on its own is kept; the
        // other states of H may need to pass through U1 on their way to it.
        let (hb, map) = h.subgame(&b)?;
        let inner = mp_parity_region(&hb)?;
        if !inner.iter().any(|&x| x) {
            return Err(Error::Precondition("no state wins the subgame avoiding odd minima".into()));
        }
        let (hw, map_w) = hb.subgame(&inner)?;
        let keep: Vec<usize> = map_w.iter().map(|&i| map[i]).collect();
        lift_into(&mut dist, &solve(&hw, epsilon)?, &keep);
        let mut won = vec![false; n];
        for &s in &keep {
            won[s] = true;
        }
        let a1 = attractor(h, &won, Player::One);
        for s in 0..n {
            if a1.set[s] && !won[s] {
                if let Some(t) = a1.strategy[s] {
                    dist[s] = vec![(t, Q::one())];
                }
            }
        }
        let c = complement(&a1.set);
        if c.iter().any(|&x| x) {
            let (hc, map) = h.subgame(&c)?;
            lift_into(&mut dist, &solve(&hc, epsilon)?, &map);
        }
    }
    fill_first_successor(h, &mut dist);
    RMStrategy::new(h, dist)
}

/// Priorities are `{q, q+1}` with `q` odd: search for a P1 memoryless
/// strategy under which every cycle has non-negative weight and even
/// minimal priority.
fn cobuchi(h: &GameStructure) -> Result<RMStrategy> {
    let n = h.num_states();
    for choice in enumerate_memoryless(h, Player::One, ENUMERATION_LIMIT)? {
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|s| match choice[s] {
                Some(t) => vec![t],
                None => h.successors(s).collect(),
            })
            .collect();
        let odd_cycle = {
            let low = (0..n).map(|s| h.priority(s)).min().unwrap();
            sccs(&adj, |_| true)
                .iter()
                .any(|c| is_nontrivial(&adj, c) && c.iter().any(|&v| h.priority(v) == low))
        };
        if odd_cycle {
            continue;
        }
        // Virtual source n reaches every state; a negative cycle anywhere is found.
        let mut edges: Vec<(usize, usize, i64)> = (0..n).map(|s| (n, s, 0)).collect();
        for (u, succ) in adj.iter().enumerate() {
            edges.extend(succ.iter().map(|&v| (u, v, h.weight(u, v).unwrap()[0])));
        }
        if bellman_ford(n + 1, &edges, n).negative_cycle.is_none() {
            return RMStrategy::from_memoryless(h, &choice);
        }
    }
    Err(Error::Precondition("no memoryless coBüchi strategy wins the subgame".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_paper_fixture, FixtureId};
    use crate::game::GameBuilder;
    use crate::randomized::chain::q;
    use crate::randomized::check_parity_guarantee;

    #[test]
    fn all_zero_priorities_are_buchi() {
        let g = gen_paper_fixture(FixtureId::Fig7).with_priorities(&[0, 0]).unwrap();
        let s = mp_parity_randomized(&g, &q(1, 4)).unwrap();
        // Every state is in F: the mixture collapses to energy play.
        assert!(s.is_pure());
        assert_eq!(s.distribution(0), &[(0, q(1, 1))]);
    }

    #[test]
    fn cobuchi_base_case_is_pure() {
        let g = GameBuilder::new(1)
            .state("a", Player::One, 1)
            .state("b", Player::One, 2)
            .state("c", Player::Two, 2)
            .initial("a")
            .edge("a", "a", &[1])
            .edge("a", "b", &[0])
            .edge("b", "b", &[-1])
            .edge("b", "c", &[0])
            .edge("c", "b", &[1])
            .edge("c", "c", &[0])
            .build()
            .unwrap();
        let s = mp_parity_randomized(&g, &q(1, 4)).unwrap();
        assert!(s.is_pure());
        assert_eq!(s.as_memoryless().unwrap()[1], Some(2));
        assert!(check_parity_guarantee(&g, &s, &q(1, 4)).unwrap().is_none());
    }

    #[test]
    fn fig1_first_dimension() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        let weights = g.edges().iter().map(|e| vec![e.weight[0]]).collect();
        let g = g.with_weights(1, weights).unwrap();
        let s = mp_parity_randomized(&g, &q(1, 4)).unwrap();
        assert!(check_parity_guarantee(&g, &s, &q(1, 4)).unwrap().is_none());
    }

    #[test]
    fn losing_initial_state_is_rejected() {
        let g = GameBuilder::new(1)
            .state("a", Player::One, 1)
            .initial("a")
            .edge("a", "a", &[0])
            .build()
            .unwrap();
        assert!(matches!(mp_parity_randomized(&g, &q(1, 4)), Err(Error::Precondition(_))));
    }
}
