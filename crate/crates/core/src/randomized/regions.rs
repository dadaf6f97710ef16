//! Attractors, good-for-energy strategies and winning regions of
//! single-dimension mean-payoff parity games.

use crate::error::{Error, Result};
use crate::game::{game_stats, GameStructure, Player};
use crate::graph::{bellman_ford, is_nontrivial, reachable, sccs};
use crate::solver::cpre_fixpoint;
use crate::strategy::{enumerate_p2_memoryless, Memoryless};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    pub set: Vec<bool>,
    /// Step at which each state entered the attractor (0 for the target).
    pub rank: Vec<Option<usize>>,
    /// For the attracting player's states outside the target, a successor
    /// of strictly smaller rank.
    pub strategy: Memoryless,
}

/// States from which `player` forces a visit to `target`.
pub fn attractor(g: &GameStructure, target: &[bool], player: Player) -> Attractor {
    let n = g.num_states();
    let mut rank: Vec<Option<usize>> = (0..n).map(|s| target[s].then_some(0)).collect();
    let mut strategy = vec![None; n];
    let mut step = 0;
    loop {
        step += 1;
        let mut added = Vec::new();
        for s in 0..n {
            if rank[s].is_some() {
                continue;
            }
            let inside = |t: usize| rank[t].is_some_and(|r| r < step);
            if g.owner(s) == player {
                if let Some(t) = g.successors(s).find(|&t| inside(t)) {
                    added.push(s);
                    strategy[s] = Some(t);
                }
            } else if g.successors(s).all(inside) {
                added.push(s);
            }
        }
        if added.is_empty() {
            break;
        }
        for s in added {
            rank[s] = Some(step);
        }
    }
    Attractor {
        set: rank.iter().map(Option::is_some).collect(),
        rank,
        strategy,
    }
}

fn require_one_dimension(g: &GameStructure) -> Result<()> {
    if g.dimension() != 1 {
        return Err(Error::Precondition(format!(
            "single-dimension game expected, got dimension {}",
            g.dimension()
        )));
    }
    Ok(())
}

/// A memoryless strategy on `region` whose outcome cycles have non-negative
/// weight. The region must be closed and winning for the one-dimensional
/// energy objective at cap `|region|·W`.
pub fn good_for_energy(g: &GameStructure, region: &[bool]) -> Result<Memoryless> {
    require_one_dimension(g)?;
    let (sub, to_orig) = g.subgame(region)?;
    let w = game_stats(&sub).max_weight.max(1) as u64;
    let cap = sub.num_states() as u64 * w;
    let fp = cpre_fixpoint(&sub, cap);
    let mut credit = Vec::with_capacity(sub.num_states());
    for s in 0..sub.num_states() {
        match fp.winning.at(s).first() {
            Some(c) => credit.push(c[0]),
            None => {
                return Err(Error::Precondition(format!(
                    "state `{}` is not energy-winning at cap {cap}",
                    sub.id(s)
                )))
            }
        }
    }
    let mut choice = vec![None; g.num_states()];
    for s in sub.states_of(Player::One) {
        let best = sub
            .successors(s)
            .min_by_key(|&t| credit[t] - sub.weight(s, t).unwrap()[0])
            .expect("every state has a successor");
        choice[to_orig[s]] = Some(to_orig[best]);
    }
    Ok(choice)
}

/// Winning states of the one-player game where P2 states follow `adv`:
/// those reaching a strongly connected set with an even minimal priority
/// that contains a cycle of non-negative weight.
fn one_player_winning(g: &GameStructure, adv: &[Option<usize>]) -> Vec<bool> {
    let n = g.num_states();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|s| match g.owner(s) {
            Player::One => g.successors(s).collect(),
            Player::Two => vec![adv[s].expect("adversary covers every P2 state")],
        })
        .collect();
    let mut evens: Vec<u32> = g.states().iter().map(|s| s.priority).filter(|p| p % 2 == 0).collect();
    evens.sort_unstable();
    evens.dedup();
    let scale = n as i64 + 1;
    let mut good = vec![false; n];
    for p in evens {
        let allowed = |v: usize| g.priority(v) >= p;
        for scc in sccs(&adj, allowed) {
            if !is_nontrivial(&adj, &scc) || !scc.iter().any(|&v| g.priority(v) == p) {
                continue;
            }
            let inside = |v: usize| scc.binary_search(&v).is_ok();
            // A cycle has weight ≥ 0 iff it is positive under (n+1)·w + 1;
            // search for it as a negative cycle of the negated weights.
            let edges: Vec<(usize, usize, i64)> = scc
                .iter()
                .flat_map(|&u| adj[u].iter().filter(|&&v| inside(v)).map(move |&v| (u, v)))
                .map(|(u, v)| (u, v, -(scale * g.weight(u, v).unwrap()[0] + 1)))
                .collect();
            if bellman_ford(n, &edges, scc[0]).negative_cycle.is_some() {
                for &v in &scc {
                    good[v] = true;
                }
            }
        }
    }
    let mut rev = vec![Vec::new(); n];
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            rev[v].push(u);
        }
    }
    let mut win = vec![false; n];
    for v in (0..n).filter(|&v| good[v]) {
        if !win[v] {
            for (u, r) in reachable(&rev, v, |_| true).into_iter().enumerate() {
                win[u] |= r;
            }
        }
    }
    win
}

/// States from which P1 ensures mean payoff ≥ 0 together with the parity
/// condition, computed by enumerating P2 memoryless strategies.
pub fn mp_parity_region(g: &GameStructure) -> Result<Vec<bool>> {
    require_one_dimension(g)?;
    let mut win = vec![true; g.num_states()];
    for adv in enumerate_p2_memoryless(g)? {
        for (w, r) in win.iter_mut().zip(one_player_winning(g, &adv)) {
            *w &= r;
        }
        if !win.iter().any(|&w| w) {
            break;
        }
    }
    Ok(win)
}

/// Winning region for mean payoff ≥ 0 with infinitely many visits to `f`.
pub fn mp_buchi_region(g: &GameStructure, f: &[bool]) -> Result<Vec<bool>> {
    let prios: Vec<u32> = (0..g.num_states()).map(|s| if f[s] { 0 } else { 1 }).collect();
    mp_parity_region(&g.with_priorities(&prios)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_paper_fixture, FixtureId};
    use crate::game::GameBuilder;
    use crate::reduction::{mp_to_energy, parse_rational};

    #[test]
    fn attractor_examples() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        let s5 = g.index_of("s5").unwrap();
        let mut target = vec![false; 6];
        target[s5] = true;
        let a = attractor(&g, &target, Player::One);
        assert_eq!(a.set, vec![true; 6]);
        let s3 = g.index_of("s3").unwrap();
        assert_eq!(a.strategy[s3], Some(s5));
        for s in 0..6 {
            if let Some(t) = a.strategy[s] {
                assert!(a.rank[t] < a.rank[s]);
            }
        }

        let all = attractor(&g, &[true; 6], Player::Two);
        assert!(all.rank.iter().all(|r| *r == Some(0)));

        // A P2 state that can run to a sink avoiding the target stays out.
        let g = GameBuilder::new(1)
            .state("a", Player::Two, 0)
            .state("goal", Player::One, 0)
            .state("sink", Player::One, 0)
            .initial("a")
            .edge("a", "goal", &[0])
            .edge("a", "sink", &[0])
            .edge("goal", "goal", &[0])
            .edge("sink", "sink", &[0])
            .build()
            .unwrap();
        let a = attractor(&g, &[false, true, false], Player::One);
        assert_eq!(a.set, vec![false, true, false]);
        let a = attractor(&g, &[false, true, false], Player::Two);
        assert_eq!(a.set, vec![true, true, false]);
    }

    #[test]
    fn good_for_energy_examples() {
        let g = gen_paper_fixture(FixtureId::Fig7);
        let shifted = mp_to_energy(&g, &[parse_rational("3/5").unwrap()]).unwrap();
        assert_eq!(good_for_energy(&shifted, &[true, true]).unwrap()[0], Some(0));

        let g = GameBuilder::new(1)
            .state("s", Player::One, 0)
            .state("t", Player::One, 0)
            .initial("s")
            .edge("s", "s", &[-1])
            .edge("s", "t", &[1])
            .edge("t", "t", &[1])
            .build()
            .unwrap();
        assert_eq!(good_for_energy(&g, &[true, true]).unwrap(), vec![Some(1), Some(1)]);

        let lose = GameBuilder::new(1)
            .state("s", Player::One, 0)
            .initial("s")
            .edge("s", "s", &[-1])
            .build()
            .unwrap();
        assert!(matches!(good_for_energy(&lose, &[true]), Err(Error::Precondition(_))));
    }

    #[test]
    fn regions() {
        let g = gen_paper_fixture(FixtureId::Fig7);
        assert_eq!(mp_buchi_region(&g, &[false, true]).unwrap(), vec![true, true]);
        let shifted = mp_to_energy(&g, &[parse_rational("3/5").unwrap()]).unwrap();
        assert_eq!(mp_buchi_region(&shifted, &[false, true]).unwrap(), vec![true, true]);
        // Values up to 1 are reachable with ever rarer s2 visits.
        let at_one = mp_to_energy(&g, &[parse_rational("1").unwrap()]).unwrap();
        assert_eq!(mp_buchi_region(&at_one, &[false, true]).unwrap(), vec![true, true]);
        let above = mp_to_energy(&g, &[parse_rational("3/2").unwrap()]).unwrap();
        assert_eq!(mp_buchi_region(&above, &[false, true]).unwrap(), vec![false, false]);

        // Staying at s0 forever has odd priority; the value needs s1 visits of
        // vanishing frequency, which the region admits.
        let g = gen_paper_fixture(FixtureId::Mpp);
        assert_eq!(mp_parity_region(&g).unwrap(), vec![true, true]);
    }
}
