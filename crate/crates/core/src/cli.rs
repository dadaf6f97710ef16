//! Command-line front end. `run_cli` returns the exit code and the text to
//! print so the binary stays a thin wrapper and tests can drive it directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::bench::{gen_exp_family, gen_paper_fixture, gen_random_game, FixtureId};
use crate::error::{Error, Result};
use crate::game::{alternation_transform, lasso_values, parse_game, write_game, GameStructure, Lasso, Player};
use crate::pipeline::{solve_game, theoretical_cap, SolveOptions, DEFAULT_HARD_CAP};
use crate::randomized::{
    check_buchi_guarantee, check_parity_guarantee, mp_buchi_randomized, mp_parity_randomized,
    monte_carlo_eval, parse_rm, rm_from_lasso, write_rm, Q,
};
use crate::reduction::{mp_to_energy, parity_to_energy, parse_rational};
use crate::solver::SolveOutcome;
use crate::strategy::{parse_moore, verify_sure_winning, write_moore, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
/// Not winnable up to the cap tried, or a strategy found losing.
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "menergy", version, about = "Solver for multi-dimensional energy and mean-payoff parity games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute winning initial credits and a verified Moore strategy.
    Solve {
        game: PathBuf,
        /// Comma-separated cap schedule (default: doubling from max(W,1)).
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<u64>>,
        /// Largest cap tried: a number or `theoretical`.
        #[arg(long, default_value_t = DEFAULT_HARD_CAP.to_string())]
        hard_cap: String,
        #[arg(long, default_value_t = 1)]
        c_const: u32,
        /// Reward of the parity reduction (default |S|+1).
        #[arg(long)]
        l: Option<i64>,
        /// Where to write the strategy.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the energy game obtained from the parity reduction.
    Reduce {
        game: PathBuf,
        #[arg(long)]
        l: Option<i64>,
    },
    /// Check a Moore strategy from an initial credit.
    Verify {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        credit: Vec<i64>,
    },
    /// Monte Carlo evaluation of a randomized memoryless strategy.
    Simulate {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// P2 moves as `state:succ,...`; other P2 states take their first successor.
        #[arg(long, value_delimiter = ',')]
        adversary: Vec<String>,
    },
    /// Build a randomized memoryless strategy.
    Randomize {
        game: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value = "1/4")]
        epsilon: String,
        /// Mean-payoff threshold (buchi and parity modes).
        #[arg(long, default_value = "0")]
        threshold: String,
        /// Büchi states (default: the states of priority 0).
        #[arg(long, value_delimiter = ',')]
        buchi: Vec<String>,
        /// Lasso prefix and cycle state ids (lasso mode).
        #[arg(long, value_delimiter = ',')]
        prefix: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a bundled fixture, a member of the exponential family or a random game.
    Gen {
        /// fig1, fig5, fig6, fig7, fig8, mpp, expfam or random.
        name: String,
        /// K for expfam.
        param: Option<usize>,
        #[arg(long, default_value_t = 5)]
        states: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
        #[arg(long, default_value_t = 0.5)]
        owner_ratio: f64,
        #[arg(long, default_value_t = 0)]
        priorities: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Lasso,
    Buchi,
    Parity,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<GameStructure> {
    parse_game(&read(path)?).map_err(|e| match e {
        Error::Syntax { line, message } => Error::Io(format!("{}:{line}: {message}", path.display())),
        other => Error::Io(format!("{}: {other}", path.display())),
    })
}

fn fmt_credit(c: &[i64]) -> String {
    let parts: Vec<String> = c.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn fmt_q(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(Q::to_string).collect();
    format!("({})", parts.join(","))
}

/// Runs one invocation. Output for help and version requests is returned
/// with exit code 0.
pub fn run_cli<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let mut out = String::new();
    match dispatch(cli.command, &mut out) {
        Ok(code) => (code, out),
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            (EXIT_ERROR, out)
        }
    }
}

fn dispatch(cmd: Command, out: &mut String) -> Result<i32> {
    match cmd {
        Command::Solve {
            game,
            caps,
            hard_cap,
            c_const,
            l,
            out: path,
        } => solve(&game, caps, &hard_cap, c_const, l, path.as_deref(), out),
        Command::Reduce { game, l } => {
            let g = load_game(&game)?;
            let l = l.unwrap_or(g.num_states() as i64 + 1);
            let (red, report) = parity_to_energy(&g, l)?;
            let _ = writeln!(
                out,
                "# reward l={l} added_dimensions={} cap_hint={}",
                report.added_dimensions, report.cap_hint
            );
            out.push_str(&write_game(&red));
            Ok(EXIT_OK)
        }
        Command::Verify {
            game,
            strategy,
            credit,
        } => verify(&game, &strategy, &credit, out),
        Command::Simulate {
            game,
            strategy,
            horizon,
            episodes,
            seed,
            adversary,
        } => simulate(&game, &strategy, horizon, episodes, seed, &adversary, out),
        Command::Randomize {
            game,
            mode,
            epsilon,
            threshold,
            buchi,
            prefix,
            cycle,
            out: path,
        } => randomize(&game, mode, &epsilon, &threshold, &buchi, &prefix, &cycle, path.as_deref(), out),
        Command::Gen {
            name,
            param,
            states,
            dim,
            max_weight,
            owner_ratio,
            priorities,
            seed,
        } => {
            let g = match name.as_str() {
                "random" => {
                    if states == 0 || dim == 0 || max_weight < 0 {
                        return Err(Error::Precondition("random games need states, dim >= 1 and max-weight >= 0".into()));
                    }
                    let _ = writeln!(
                        out,
                        "# random states={states} dim={dim} max_weight={max_weight} owner_ratio={owner_ratio} priorities={priorities} seed={seed}"
                    );
                    gen_random_game(states, dim, max_weight, owner_ratio, priorities, seed)
                }
                "expfam" => match param {
                    Some(k) if k >= 1 => gen_exp_family(k),
                    _ => return Err(Error::Precondition("expfam needs K >= 1".into())),
                },
                other => gen_paper_fixture(other.parse::<FixtureId>()?),
            };
            out.push_str(&write_game(&g));
            Ok(EXIT_OK)
        }
    }
}

fn solve(
    path: &Path,
    caps: Option<Vec<u64>>,
    hard_cap: &str,
    c_const: u32,
    l: Option<i64>,
    strategy_out: Option<&Path>,
    out: &mut String,
) -> Result<i32> {
    let g = load_game(path)?;
    let mut opts = SolveOptions {
        l,
        c_const,
        schedule: caps,
        hard_cap: DEFAULT_HARD_CAP,
    };
    opts.hard_cap = match hard_cap {
        "theoretical" => theoretical_cap(&g, &opts)?,
        n => n
            .parse::<u64>()
            .map_err(|_| Error::Precondition(format!("--hard-cap expects a number or `theoretical`, got `{n}`")))?,
    };
    let solved = solve_game(&g, &opts)?;
    let caps: Vec<String> = solved.schedule.iter().map(u64::to_string).collect();
    let _ = writeln!(
        out,
        "config: command=solve game={} caps={} hard_cap={} c_const={c_const} l={}",
        path.display(),
        caps.join(","),
        opts.hard_cap,
        solved
            .reduction
            .as_ref()
            .map_or("none".to_string(), |r| r.reward.to_string()),
    );
    for run in &solved.runs {
        let _ = writeln!(out, "cap={}", run.cap);
        for (i, size) in run.sizes.iter().enumerate() {
            let _ = writeln!(out, "iter={i} antichain_size={size}");
        }
    }
    match &solved.outcome {
        SolveOutcome::Won {
            cap,
            initial_credits,
            ..
        } => {
            let credits: Vec<String> = initial_credits.iter().map(|c| fmt_credit(c)).collect();
            let _ = writeln!(out, "result: won at cap {cap}");
            let _ = writeln!(out, "minimal credits at {}: {}", g.id(g.initial()), credits.join(" "));
            let m = solved.strategy.as_ref().expect("won games carry a strategy");
            let v0 = &initial_credits[0];
            let _ = writeln!(
                out,
                "strategy: {} memory states, verifier verdict Winning from {} (input game credit {})",
                m.len(),
                fmt_credit(v0),
                fmt_credit(&v0[..g.dimension()])
            );
            if let Some(p) = strategy_out {
                write_file(p, &write_moore(&solved.alternated, m))?;
                let _ = writeln!(out, "strategy written to {}", p.display());
            }
            Ok(EXIT_OK)
        }
        SolveOutcome::UnknownUpTo { cap } => {
            if solved.complete {
                let _ = writeln!(
                    out,
                    "result: unknown up to cap {cap}; the cap reaches the completeness bound, so the initial state is losing"
                );
            } else {
                let _ = writeln!(
                    out,
                    "result: unknown up to cap {cap}; no credit within the cap wins, but completeness only holds at the theoretical cap (use --hard-cap theoretical)"
                );
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn verify(game: &Path, strategy: &Path, credit: &[i64], out: &mut String) -> Result<i32> {
    let g = load_game(game)?;
    let text = read(strategy)?;
    // Strategies produced by `solve` live on the alternating form.
    let (g, m) = match parse_moore(&text, &g) {
        Ok(m) => (g, m),
        Err(Error::UnknownState(_)) => {
            let (alt, _) = alternation_transform(&g);
            let m = parse_moore(&text, &alt)?;
            (alt, m)
        }
        Err(e) => return Err(e),
    };
    let report = verify_sure_winning(&g, &m, credit)?;
    let _ = writeln!(
        out,
        "config: command=verify game={} strategy={} credit={}",
        game.display(),
        strategy.display(),
        fmt_credit(credit)
    );
    let _ = writeln!(out, "product: {} nodes", report.product.len());
    let ids = |path: &[usize]| -> String {
        let v: Vec<&str> = path.iter().map(|&n| g.id(report.product.state(n))).collect();
        v.join(" ")
    };
    match &report.witness {
        None => {
            let _ = writeln!(out, "verdict: Winning");
            Ok(EXIT_OK)
        }
        Some(w) => {
            let _ = writeln!(out, "verdict: Losing");
            match w {
                Witness::Energy {
                    dimension,
                    prefix,
                    cycle,
                    repetitions,
                } => {
                    let _ = writeln!(
                        out,
                        "witness: energy dimension {dimension}, prefix [{}], cycle [{}] x{repetitions}",
                        ids(prefix),
                        ids(cycle)
                    );
                }
                Witness::Parity {
                    priority,
                    prefix,
                    cycle,
                } => {
                    let _ = writeln!(
                        out,
                        "witness: odd priority {priority}, prefix [{}], cycle [{}]",
                        ids(prefix),
                        ids(cycle)
                    );
                }
            }
            Ok(EXIT_NEGATIVE)
        }
    }
}

fn parse_adversary(g: &GameStructure, moves: &[String]) -> Result<Vec<Option<usize>>> {
    let mut adv: Vec<Option<usize>> = (0..g.num_states())
        .map(|s| (g.owner(s) == Player::Two).then(|| g.successors(s).next().unwrap()))
        .collect();
    for m in moves {
        let (s, t) = m
            .split_once(':')
            .ok_or_else(|| Error::Precondition(format!("adversary move `{m}` is not state:succ")))?;
        let (s, t) = (g.index_of(s)?, g.index_of(t)?);
        if g.owner(s) != Player::Two || g.edge_between(s, t).is_none() {
            return Err(Error::Precondition(format!("`{m}` is not a P2 move of the game")));
        }
        adv[s] = Some(t);
    }
    Ok(adv)
}

fn simulate(
    game: &Path,
    strategy: &Path,
    horizon: u64,
    episodes: usize,
    seed: u64,
    adversary: &[String],
    out: &mut String,
) -> Result<i32> {
    let g = load_game(game)?;
    let s1 = parse_rm(&read(strategy)?, &g)?;
    let adv = parse_adversary(&g, adversary)?;
    let r = monte_carlo_eval(&g, &s1, &adv, horizon, episodes, seed)?;
    let _ = writeln!(
        out,
        "config: command=simulate game={} strategy={} horizon={horizon} episodes={episodes} seed={seed} generator={}",
        game.display(),
        strategy.display(),
        r.generator
    );
    let mean: Vec<String> = r.mean.iter().map(|m| format!("{m:.6}")).collect();
    let sd: Vec<String> = r.std_dev.iter().map(|m| format!("{m:.6}")).collect();
    let _ = writeln!(out, "mean payoff: ({})", mean.join(","));
    let _ = writeln!(out, "std dev: ({})", sd.join(","));
    for s in 0..g.num_states() {
        let _ = writeln!(
            out,
            "state {} visits={} episodes_visiting={}",
            g.id(s),
            r.visits[s],
            r.episodes_visiting[s]
        );
    }
    let even = r.tail_min_priority.iter().filter(|p| *p % 2 == 0).count();
    let _ = writeln!(out, "episodes with even tail priority: {even}/{episodes}");
    Ok(EXIT_OK)
}

fn report_guarantee(out: &mut String, holds: bool) {
    let verdict = if holds { "holds" } else { "fails" };
    let _ = writeln!(out, "guarantee against every P2 memoryless strategy: {verdict}");
}

#[allow(clippy::too_many_arguments)]
fn randomize(
    game: &Path,
    mode: Mode,
    epsilon: &str,
    threshold: &str,
    buchi: &[String],
    prefix: &[String],
    cycle: &[String],
    strategy_out: Option<&Path>,
    out: &mut String,
) -> Result<i32> {
    let g = load_game(game)?;
    let eps = parse_rational(epsilon)?;
    let v = parse_rational(threshold)?;
    let _ = writeln!(
        out,
        "config: command=randomize game={} mode={} epsilon={eps} threshold={v}",
        game.display(),
        mode.to_possible_value().expect("no skipped variants").get_name()
    );
    let shifted = || -> Result<GameStructure> {
        if v.is_zero() {
            Ok(g.clone())
        } else {
            mp_to_energy(&g, &vec![v.clone(); g.dimension()])
        }
    };
    let mut holds = true;
    let s = match mode {
        Mode::Lasso => {
            let lasso = Lasso::from_ids(&g, prefix, cycle)?;
            let mp = lasso_values(&g, &lasso)?.mean_payoff;
            let _ = writeln!(out, "lasso mean payoff: {}", fmt_q(&mp));
            rm_from_lasso(&g, &lasso)?
        }
        Mode::Buchi => {
            let h = shifted()?;
            let f: Vec<bool> = if buchi.is_empty() {
                (0..g.num_states()).map(|s| g.priority(s) == 0).collect()
            } else {
                let mut f = vec![false; g.num_states()];
                for s in g.indices_of(buchi)? {
                    f[s] = true;
                }
                f
            };
            let (s, gamma) = mp_buchi_randomized(&h, &f, &eps)?;
            let _ = writeln!(out, "gamma: {gamma}");
            holds = check_buchi_guarantee(&h, &s, &f, &eps)?.is_none();
            report_guarantee(out, holds);
            s
        }
        Mode::Parity => {
            let h = shifted()?;
            let s = mp_parity_randomized(&h, &eps)?;
            holds = check_parity_guarantee(&h, &s, &eps)?.is_none();
            report_guarantee(out, holds);
            s
        }
    };
    let text = write_rm(&g, &s);
    match strategy_out {
        Some(p) => {
            write_file(p, &text)?;
            let _ = writeln!(out, "strategy written to {}", p.display());
        }
        None => out.push_str(&text),
    }
    Ok(if holds { EXIT_OK } else { EXIT_NEGATIVE })
}
