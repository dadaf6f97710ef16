//! End-to-end solving: parity reduction, alternation, incremental fixed
//! point, strategy extraction and self-check.

use crate::error::{Error, Result};
use crate::game::{alternation_transform, GameStructure};
use crate::reduction::{completeness_cap, parity_to_energy, ReductionReport};
use crate::solver::{default_schedule, incremental_solve_with, is_complete_cap, SolveOutcome};
use crate::strategy::{extract_moore, verify_sure_winning, MooreStrategy, Verdict, VerifyReport};

/// Hard cap used when none is given. The theoretical completeness cap is
/// usually far out of reach.
pub const DEFAULT_HARD_CAP: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Reward of the parity reduction, `|S| + 1` when unset.
    pub l: Option<i64>,
    pub c_const: u32,
    /// Explicit cap schedule; the doubling schedule when unset.
    pub schedule: Option<Vec<u64>>,
    pub hard_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            l: None,
            c_const: 1,
            schedule: None,
            hard_cap: DEFAULT_HARD_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapRun {
    pub cap: u64,
    pub iterations: usize,
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    /// The energy game actually solved (before alternation).
    pub energy_game: GameStructure,
    pub reduction: Option<ReductionReport>,
    /// Alternating form of `energy_game`; the strategy lives here.
    pub alternated: GameStructure,
    /// Alternating form of the input game, same states as `alternated`.
    pub alternated_input: GameStructure,
    pub schedule: Vec<u64>,
    pub runs: Vec<CapRun>,
    pub outcome: SolveOutcome,
    /// Whether the last cap tried reaches the completeness cap.
    pub complete: bool,
    pub strategy: Option<MooreStrategy>,
    pub energy_check: Option<VerifyReport>,
    pub input_check: Option<VerifyReport>,
}

/// Whether the game needs the parity reduction (some priority is odd).
pub fn has_parity(g: &GameStructure) -> bool {
    g.states().iter().any(|s| s.priority % 2 == 1)
}

/// The hard cap meaning "go up to the completeness cap".
pub fn theoretical_cap(g: &GameStructure, opts: &SolveOptions) -> Result<u64> {
    let energy = energy_form(g, opts)?.0;
    let cap = completeness_cap(&energy, opts.c_const);
    u64::try_from(&cap).map_err(|_| Error::LimitExceeded {
        what: "completeness cap",
        size: u128::try_from(&cap).unwrap_or(u128::MAX),
        limit: u64::MAX as u128,
    })
}

fn energy_form(g: &GameStructure, opts: &SolveOptions) -> Result<(GameStructure, Option<ReductionReport>)> {
    if has_parity(g) {
        let l = opts.l.unwrap_or(g.num_states() as i64 + 1);
        let (red, report) = parity_to_energy(g, l)?;
        Ok((red, Some(report)))
    } else {
        Ok((g.clone(), None))
    }
}

/// Solves `g` and, when won, extracts a Moore machine and checks it both on
/// the solved energy game and on the input game (original credit components
/// plus parity). A machine that fails either check is an error.
pub fn solve_game(g: &GameStructure, opts: &SolveOptions) -> Result<Solved> {
    let (energy_game, reduction) = energy_form(g, opts)?;
    let (alternated, _) = alternation_transform(&energy_game);
    let (alternated_input, _) = alternation_transform(g);
    let schedule = match &opts.schedule {
        Some(s) => s.clone(),
        None => default_schedule(&energy_game, opts.c_const, opts.hard_cap),
    };
    let mut runs = Vec::new();
    let outcome = incremental_solve_with(&alternated, &schedule, opts.hard_cap, |fp| {
        runs.push(CapRun {
            cap: fp.cap,
            iterations: fp.iterations,
            sizes: fp.sizes.clone(),
        })
    })?;
    let last = *schedule.last().unwrap();
    let complete = is_complete_cap(&energy_game, opts.c_const, last);
    let mut solved = Solved {
        energy_game,
        reduction,
        alternated,
        alternated_input,
        schedule,
        runs,
        outcome,
        complete,
        strategy: None,
        energy_check: None,
        input_check: None,
    };
    if let SolveOutcome::Won {
        initial_credits,
        fixpoint,
        ..
    } = &solved.outcome
    {
        let v0 = initial_credits[0].clone();
        let m = extract_moore(&solved.alternated, fixpoint, &v0)?;
        let energy_check = verify_sure_winning(&solved.alternated, &m, &v0)?;
        let input_check = verify_sure_winning(&solved.alternated_input, &m, &v0[..g.dimension()])?;
        if energy_check.verdict != Verdict::Winning || input_check.verdict != Verdict::Winning {
            return Err(Error::Precondition(
                "extracted strategy failed its own verification".into(),
            ));
        }
        solved.strategy = Some(m);
        solved.energy_check = Some(energy_check);
        solved.input_check = Some(input_check);
    }
    Ok(solved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_paper_fixture, FixtureId};
    use crate::game::GameBuilder;
    use crate::game::Player;

    #[test]
    fn fig1_end_to_end() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        let s = solve_game(&g, &SolveOptions::default()).unwrap();
        assert_eq!(s.reduction.as_ref().unwrap().reward, 7);
        assert!(matches!(s.outcome, SolveOutcome::Won { .. }));
        assert!(s.strategy.is_some());
        assert_eq!(s.runs.len(), s.schedule.iter().position(|&c| c == s.runs.last().unwrap().cap).unwrap() + 1);
    }

    #[test]
    fn losing_loop_is_unknown() {
        let g = GameBuilder::new(1)
            .state("s", Player::One, 0)
            .initial("s")
            .edge("s", "s", &[-1])
            .build()
            .unwrap();
        let s = solve_game(&g, &SolveOptions::default()).unwrap();
        assert!(matches!(s.outcome, SolveOutcome::UnknownUpTo { .. }));
        // Completeness cap 2·l·W with l = 2^0·(1·1+1)^1 = 2: cap 4 decides.
        assert!(s.complete);
        assert_eq!(theoretical_cap(&g, &SolveOptions::default()).unwrap(), 4);
    }
}
