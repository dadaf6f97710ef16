mod common;

use menergy::antichain::{leq, Antichain};
use menergy::game::{alternation_transform, energy_level, lasso_values, parse_game, write_game, GameStructure, Player};
use menergy::randomized::{
    best_response_expectation, good_for_energy, mp_buchi_region, parse_rm, verify_support, write_rm, RMStrategy, Q,
};
use menergy::reduction::{mp_to_energy, parity_to_energy};
use menergy::solver::{cpre_fixpoint, cpre_step, naive_fixpoint_oracle};
use menergy::strategy::{parse_moore, verify_sure_winning, write_moore, MooreStrategy, Verdict};
use menergy::{gen_random_game, Lasso};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{q, random_lasso, random_moore};

fn game(seed: u64, n: usize, k: usize, w: i64, owner: f64, prio: u32) -> GameStructure {
    gen_random_game(n, k, w, owner, prio, seed)
}

fn one_player(seed: u64, n: usize, k: usize) -> GameStructure {
    game(seed, n, k, 3, 1.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn antichain_matches_upward_closure(
        points in prop::collection::vec((0usize..3, prop::collection::vec(0i64..4, 2)), 0..20),
        probe in (0usize..3, prop::collection::vec(0i64..4, 2)),
    ) {
        let mut a = Antichain::empty(3, 2, 3);
        for (s, e) in &points {
            a.insert_min(*s, e).unwrap();
        }
        for s in 0..3 {
            for x in a.at(s) {
                prop_assert_eq!(a.at(s).iter().filter(|y| leq(y, x)).count(), 1);
            }
        }
        let expected = points.iter().any(|(s, e)| *s == probe.0 && leq(e, &probe.1));
        prop_assert_eq!(a.contains_upward(probe.0, &probe.1), expected);
    }

    #[test]
    fn game_text_round_trips(seed in any::<u64>(), n in 1usize..7, k in 1usize..4) {
        let g = game(seed, n, k, 5, 0.5, 4);
        prop_assert_eq!(parse_game(&write_game(&g)).unwrap(), g);
    }

    #[test]
    fn energy_level_is_additive(seed in any::<u64>(), n in 1usize..6, split in 0usize..8) {
        let g = game(seed, n, 2, 3, 0.5, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut path = vec![0];
        for _ in 0..8 {
            let succ: Vec<usize> = g.successors(*path.last().unwrap()).collect();
            path.push(succ[rng.random_range(0..succ.len())]);
        }
        let (a, b) = (&path[..=split], &path[split..]);
        let sum: Vec<i64> = energy_level(&g, a).unwrap().iter()
            .zip(energy_level(&g, b).unwrap())
            .map(|(x, y)| x + y)
            .collect();
        prop_assert_eq!(energy_level(&g, &path).unwrap(), sum);
    }

    #[test]
    fn cpre_is_monotone(seed in any::<u64>(), n in 1usize..6, k in 1usize..3) {
        let g = game(seed, n, k, 2, 0.5, 0);
        // The fixed point lies below the full set, so one step maps it below
        // the step of the full set.
        let full = Antichain::full(n, k, 3);
        let fp = cpre_fixpoint(&g, 3).winning;
        prop_assert!(fp.is_subset(&full).unwrap());
        prop_assert!(cpre_step(&g, &fp).is_subset(&cpre_step(&g, &full)).unwrap());
        // A larger cap never loses a credit.
        let big = cpre_fixpoint(&g, 4).winning;
        for (s, e) in fp.min_elements() {
            prop_assert!(big.contains_upward(s, &e));
        }
    }

    #[test]
    fn alternation_preserves_credits(seed in any::<u64>(), n in 1usize..6, k in 1usize..3) {
        let g = game(seed, n, k, 2, 0.5, 0);
        let (alt, map) = alternation_transform(&g);
        let here = naive_fixpoint_oracle(&g, 3).unwrap();
        let there = naive_fixpoint_oracle(&alt, 3).unwrap();
        for (s, e) in there.members() {
            if let Some(o) = map.original[s] {
                prop_assert!(here.contains(o, &e));
            }
        }
        for (s, e) in here.members() {
            prop_assert!(there.contains(s, &e));
        }
    }

    #[test]
    fn reduction_charges_odd_cycles(seed in any::<u64>(), n in 1usize..6) {
        let g = one_player(seed, n, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        let lasso = random_lasso(&g, &mut rng);
        let l = lasso.cycle.len() as i64 + 1;
        let (red, report) = parity_to_energy(&g, l).unwrap();
        let before = lasso_values(&g, &lasso).unwrap();
        let after = lasso_values(&red, &lasso).unwrap();
        prop_assert_eq!(&after.cycle_energy[..1], &before.cycle_energy[..]);
        let low = lasso.cycle.iter().map(|&s| g.priority(s)).min().unwrap();
        for (&p, &d) in &report.priority_to_dimension {
            let e = after.cycle_energy[d];
            if p == low {
                prop_assert!(e < 0);
            } else if p > low && low % 2 == 0 {
                prop_assert!(e > 0);
            } else if p < low {
                prop_assert_eq!(e, 0);
            }
        }
    }

    #[test]
    fn threshold_shift_scales_cycles(seed in any::<u64>(), n in 1usize..6, num in -6i64..7, den in 1i64..5) {
        let g = one_player(seed, n, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 11);
        let lasso = random_lasso(&g, &mut rng);
        let v = q(num, den);
        let shifted = mp_to_energy(&g, std::slice::from_ref(&v)).unwrap();
        let (vn, vd) = (v.numer().try_into().unwrap_or(0i64), v.denom().try_into().unwrap_or(1i64));
        let len = lasso.cycle.len() as i64;
        let before = lasso_values(&g, &lasso).unwrap().cycle_energy[0];
        let after = lasso_values(&shifted, &lasso).unwrap().cycle_energy[0];
        prop_assert_eq!(after, vd * before - vn * len);
    }

    #[test]
    fn support_winning_covers_pure_refinements(seed in any::<u64>(), n in 2usize..6, v in 0i64..4) {
        let g = game(seed, n, 1, 2, 0.5, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 13);
        let s1 = random_rm(&g, &mut rng);
        let verdict = verify_support(&g, &s1, &[v]).unwrap();
        let mut all_win = true;
        for choice in refinements(&g, &s1) {
            let m = MooreStrategy::from_memoryless(&g, &choice).unwrap();
            all_win &= verify_sure_winning(&g, &m, &[v]).unwrap().verdict == Verdict::Winning;
        }
        prop_assert_eq!(verdict == Verdict::Winning, all_win);
    }

    #[test]
    fn sure_energy_win_gives_nonnegative_expectation(seed in any::<u64>(), n in 2usize..6, v in 0i64..4) {
        let g = game(seed, n, 1, 2, 0.5, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 17);
        let s1 = random_rm(&g, &mut rng);
        if verify_support(&g, &s1, &[v]).unwrap() == Verdict::Winning {
            let r = best_response_expectation(&g, &s1, Some(&[Q::zero()])).unwrap();
            prop_assert!(!r.below_threshold);
        }
    }

    #[test]
    fn good_for_energy_cycles_are_nonnegative(seed in any::<u64>(), n in 1usize..6) {
        let g = game(seed, n, 1, 2, 0.5, 0);
        let region = mp_buchi_region(&g, &vec![true; n]).unwrap();
        prop_assume!(region.iter().any(|&x| x));
        let (h, _) = g.subgame(&region).unwrap();
        let choice = good_for_energy(&h, &vec![true; h.num_states()]).unwrap();
        // Credit |S|·W suffices when no reachable cycle is negative.
        let credit = (h.num_states() * 2) as i64;
        for s in 0..h.num_states() {
            let hs = h.with_initial(s);
            let m = MooreStrategy::from_memoryless(&hs, &choice).unwrap();
            let r = verify_sure_winning(&hs, &m, &[credit]).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Winning);
        }
    }

    #[test]
    fn moore_text_round_trips(seed in any::<u64>(), n in 1usize..6, k in 1usize..3) {
        let g = game(seed, n, k, 2, 0.5, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_moore(&g, 3, &mut rng);
        prop_assert_eq!(parse_moore(&write_moore(&g, &m), &g).unwrap(), m);
    }

    #[test]
    fn rm_text_round_trips(seed in any::<u64>(), n in 1usize..6) {
        let g = game(seed, n, 1, 2, 0.5, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_rm(&g, &mut rng);
        prop_assert_eq!(parse_rm(&write_rm(&g, &s), &g).unwrap(), s);
    }
}

/// A random distribution over a random non-empty subset of successors at
/// every P1 state.
fn random_rm(g: &GameStructure, rng: &mut impl Rng) -> RMStrategy {
    let dist = (0..g.num_states())
        .map(|s| {
            if g.owner(s) != Player::One {
                return Vec::new();
            }
            let succ: Vec<usize> = g.successors(s).collect();
            let mut picked: Vec<usize> = succ.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            if picked.is_empty() {
                picked.push(succ[rng.random_range(0..succ.len())]);
            }
            let weights: Vec<i64> = picked.iter().map(|_| rng.random_range(1..4)).collect();
            let total: i64 = weights.iter().sum();
            picked.into_iter().zip(weights).map(|(t, w)| (t, q(w, total))).collect()
        })
        .collect();
    RMStrategy::new(g, dist).unwrap()
}

/// Every pure memoryless strategy choosing inside the support.
fn refinements(g: &GameStructure, s: &RMStrategy) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![None; g.num_states()]];
    for st in g.states_of(Player::One) {
        out = out
            .into_iter()
            .flat_map(|c| {
                s.support(st).map(move |t| {
                    let mut c = c.clone();
                    c[st] = Some(t);
                    c
                })
            })
            .collect();
    }
    out
}

#[test]
fn fixed_lasso_reduction_values() {
    // Frozen: a two-state cycle 1 → 0 → 1 with priorities (1, 0) and l = 3.
    let g = menergy::GameBuilder::new(1)
        .state("a", Player::One, 0)
        .state("b", Player::One, 1)
        .initial("a")
        .edge("a", "b", &[2])
        .edge("b", "a", &[-1])
        .build()
        .unwrap();
    let (red, _) = parity_to_energy(&g, 3).unwrap();
    let lasso = Lasso::new(vec![], vec![0, 1]);
    assert_eq!(lasso_values(&red, &lasso).unwrap().cycle_energy, vec![1, 2]);
}
