//! Paper fixtures, the exponential-memory family, and seeded random games.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{parse_game, Edge, GameBuilder, GameStructure, Player, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixtureId {
    /// Two-dimensional energy parity game.
    Fig1,
    /// One-player game where the uniform coin reaches expectation (1,1).
    Fig5,
    /// Two-player game defeating randomized memoryless strategies.
    Fig6,
    /// MP-Büchi game mixing Büchi and energy strategies.
    Fig7,
    /// Game needing randomized finite memory.
    Fig8,
    /// Mean-payoff parity game where optimality needs infinite memory.
    Mpp,
    /// The exponential-memory family with parameter `K`.
    ExpFamily(usize),
}

impl FixtureId {
    pub const NAMES: [&'static str; 7] = ["fig1", "fig5", "fig6", "fig7", "fig8", "mpp", "expfam"];
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureId::Fig1 => f.write_str("fig1"),
            FixtureId::Fig5 => f.write_str("fig5"),
            FixtureId::Fig6 => f.write_str("fig6"),
            FixtureId::Fig7 => f.write_str("fig7"),
            FixtureId::Fig8 => f.write_str("fig8"),
            FixtureId::Mpp => f.write_str("mpp"),
            FixtureId::ExpFamily(k) => write!(f, "expfam{k}"),
        }
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    /// Accepts `fig1`, `fig5`, `fig6`, `fig7` (or `randbuchi`), `fig8` (or
    /// `rfm`), `mpp` (or `fig2`) and `expfam<K>`.
    fn from_str(s: &str) -> Result<Self> {
        let id = match s.to_ascii_lowercase().as_str() {
            "fig1" => FixtureId::Fig1,
            "fig5" => FixtureId::Fig5,
            "fig6" => FixtureId::Fig6,
            "fig7" | "randbuchi" => FixtureId::Fig7,
            "fig8" | "rfm" => FixtureId::Fig8,
            "mpp" | "fig2" => FixtureId::Mpp,
            other => match other.strip_prefix("expfam").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => FixtureId::ExpFamily(k),
                _ => return Err(Error::UnknownFixture(s.to_string())),
            },
        };
        Ok(id)
    }
}

const FIG1: &str = include_str!("../fixtures/fig1.game");
const FIG5: &str = include_str!("../fixtures/fig5.game");
const FIG6: &str = include_str!("../fixtures/fig6.game");
const FIG7: &str = include_str!("../fixtures/fig7.game");
const FIG8: &str = include_str!("../fixtures/fig8.game");
const MPP: &str = include_str!("../fixtures/mpp.game");

pub fn gen_paper_fixture(id: FixtureId) -> GameStructure {
    let text = match id {
        FixtureId::Fig1 => FIG1,
        FixtureId::Fig5 => FIG5,
        FixtureId::Fig6 => FIG6,
        FixtureId::Fig7 => FIG7,
        FixtureId::Fig8 => FIG8,
        FixtureId::Mpp => MPP,
        FixtureId::ExpFamily(k) => return gen_exp_family(k),
    };
    parse_game(text).expect("bundled fixture is valid")
}

/// The family `G(K)` with `k = 2K` dimensions: `K` adversarial gadgets
/// `s_i → s_iL | s_iR` followed by `K` controlled gadgets `t_i → t_iL | t_iR`
/// with the same weights, chained in a ring.
pub fn gen_exp_family(k: usize) -> GameStructure {
    assert!(k >= 1, "the family starts at K = 1");
    let dim = 2 * k;
    let mut b = GameBuilder::new(dim);
    for (prefix, owner) in [("s", Player::Two), ("t", Player::One)] {
        for i in 1..=k {
            for suffix in ["", "L", "R"] {
                b = b.state(&format!("{prefix}{i}{suffix}"), owner, 0);
            }
        }
    }
    let gadget_weight = |i: usize, sign: i64| {
        let mut w = vec![0i64; dim];
        w[2 * i - 2] = sign;
        w[2 * i - 1] = -sign;
        w
    };
    let zero = vec![0i64; dim];
    for prefix in ["s", "t"] {
        for i in 1..=k {
            let next = match (prefix, i == k) {
                (_, false) => format!("{prefix}{}", i + 1),
                ("s", true) => "t1".to_string(),
                _ => "s1".to_string(),
            };
            let head = format!("{prefix}{i}");
            for (suffix, sign) in [("L", 1), ("R", -1)] {
                let arm = format!("{head}{suffix}");
                b = b.edge(&head, &arm, &gadget_weight(i, sign));
                b = b.edge(&arm, &next, &zero);
            }
        }
    }
    b.initial("s1").build().expect("family is valid")
}

/// A seeded random game. Every state gets between one and three distinct
/// successors; weights are uniform in `[−W, W]`; a state is P1-owned with
/// probability `owner_ratio`.
pub fn gen_random_game(
    n_states: usize,
    k: usize,
    max_weight: i64,
    owner_ratio: f64,
    priority_max: u32,
    seed: u64,
) -> GameStructure {
    assert!(n_states >= 1 && k >= 1 && max_weight >= 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<State> = (0..n_states)
        .map(|i| State {
            id: format!("s{i}"),
            owner: if rng.random_bool(owner_ratio.clamp(0.0, 1.0)) {
                Player::One
            } else {
                Player::Two
            },
            priority: rng.random_range(0..=priority_max),
        })
        .collect();
    let mut edges = Vec::new();
    for s in 0..n_states {
        let degree = rng.random_range(1..=3.min(n_states));
        let mut targets: Vec<usize> = Vec::with_capacity(degree);
        while targets.len() < degree {
            let t = rng.random_range(0..n_states);
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            let weight = (0..k).map(|_| rng.random_range(-max_weight..=max_weight)).collect();
            edges.push(Edge {
                source: s,
                target: t,
                weight,
            });
        }
    }
    GameStructure::new(k, states, 0, edges).expect("random game is valid")
}
