use menergy::pipeline::{solve_game, SolveOptions};
use menergy::randomized::{
    self, chain_mean_payoff, induced_chain, monte_carlo_eval, parse_rm, rm_from_lasso, write_rm, RMStrategy, Q,
};
use menergy::reduction::parse_rational;
use menergy::strategy::{parse_moore, verify_sure_winning, write_moore, MooreStrategy, Verdict};
use menergy::{FixtureId, GameStructure, Lasso, SolveOutcome};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: menergy::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<Q> {
    parse_rational(text).map_err(err)
}

fn fractions(py: Python<'_>, v: &[Q]) -> PyResult<Vec<Py<PyAny>>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    v.iter()
        .map(|x| Ok(fraction.call1((x.to_string(),))?.unbind()))
        .collect()
}

#[pyclass(name = "Game", frozen)]
struct PyGame {
    inner: GameStructure,
}

#[pymethods]
impl PyGame {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        menergy::parse_game(text).map(|inner| PyGame { inner }).map_err(err)
    }

    /// A named fixture: `fig1`, `fig5` ... `fig8`, `mpp` or `expfam<K>`.
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let id: FixtureId = name.parse().map_err(err)?;
        Ok(PyGame {
            inner: menergy::gen_paper_fixture(id),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (states, dim=1, max_weight=2, owner_ratio=0.5, priorities=0, seed=0))]
    fn random(states: usize, dim: usize, max_weight: i64, owner_ratio: f64, priorities: u32, seed: u64) -> PyResult<Self> {
        if states == 0 || dim == 0 || max_weight < 0 {
            return Err(PyValueError::new_err("states and dim must be >= 1, max_weight >= 0"));
        }
        Ok(PyGame {
            inner: menergy::gen_random_game(states, dim, max_weight, owner_ratio, priorities, seed),
        })
    }

    fn text(&self) -> String {
        menergy::write_game(&self.inner)
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        (0..self.inner.num_states()).map(|s| self.inner.id(s).to_string()).collect()
    }

    /// Parity-to-energy reduction with reward `l` (`|S|+1` by default).
    #[pyo3(signature = (l=None))]
    fn reduce(&self, l: Option<i64>) -> PyResult<PyGame> {
        let l = l.unwrap_or(self.inner.num_states() as i64 + 1);
        let (inner, _) = menergy::parity_to_energy(&self.inner, l).map_err(err)?;
        Ok(PyGame { inner })
    }

    fn __repr__(&self) -> String {
        format!("Game(states={}, dimension={})", self.inner.num_states(), self.inner.dimension())
    }
}

/// Finite-memory pure strategy. Memory labels refer to the alternating form
/// of the game it was extracted from.
#[pyclass(name = "MooreStrategy", frozen)]
struct PyMoore {
    inner: MooreStrategy,
    game: GameStructure,
}

#[pymethods]
impl PyMoore {
    #[staticmethod]
    fn parse(text: &str, game: &PyGame) -> PyResult<Self> {
        let (alt, _) = menergy::alternation_transform(&game.inner);
        let (inner, g) = match parse_moore(text, &game.inner) {
            Ok(m) => (m, game.inner.clone()),
            Err(_) => (parse_moore(text, &alt).map_err(err)?, alt),
        };
        Ok(PyMoore { inner, game: g })
    }

    fn text(&self) -> String {
        write_moore(&self.game, &self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// True when every consistent play keeps every dimension at or above
    /// zero from `credit` (and satisfies parity).
    fn verify(&self, credit: Vec<i64>) -> PyResult<bool> {
        let r = verify_sure_winning(&self.game, &self.inner, &credit).map_err(err)?;
        Ok(r.verdict == Verdict::Winning)
    }
}

#[pyclass(name = "Solved", frozen, get_all)]
struct PySolved {
    won: bool,
    cap: u64,
    credits: Vec<Vec<i64>>,
    complete: bool,
    strategy: Option<Py<PyMoore>>,
}

/// Solves for sure winning with finite initial credit. `caps` overrides the
/// doubling schedule.
#[pyfunction]
#[pyo3(signature = (game, caps=None, hard_cap=menergy::pipeline::DEFAULT_HARD_CAP, l=None))]
fn solve(py: Python<'_>, game: &PyGame, caps: Option<Vec<u64>>, hard_cap: u64, l: Option<i64>) -> PyResult<PySolved> {
    let opts = SolveOptions {
        l,
        schedule: caps,
        hard_cap,
        ..SolveOptions::default()
    };
    let s = py.detach(|| solve_game(&game.inner, &opts)).map_err(err)?;
    let strategy = match s.strategy {
        Some(m) => Some(Py::new(
            py,
            PyMoore {
                inner: m,
                game: s.alternated.clone(),
            },
        )?),
        None => None,
    };
    Ok(match s.outcome {
        SolveOutcome::Won {
            cap, initial_credits, ..
        } => PySolved {
            won: true,
            cap,
            credits: initial_credits,
            complete: s.complete,
            strategy,
        },
        SolveOutcome::UnknownUpTo { cap } => PySolved {
            won: false,
            cap,
            credits: Vec::new(),
            complete: s.complete,
            strategy,
        },
    })
}

#[pyclass(name = "RandomizedStrategy", frozen)]
struct PyRM {
    inner: RMStrategy,
    game: GameStructure,
}

fn responses(game: &GameStructure, adversary: &[(String, String)]) -> PyResult<Vec<Option<usize>>> {
    let mut s2 = vec![None; game.num_states()];
    for (s, t) in adversary {
        let (s, t) = (game.index_of(s).map_err(err)?, game.index_of(t).map_err(err)?);
        s2[s] = Some(t);
    }
    Ok(s2)
}

#[pymethods]
impl PyRM {
    /// Frequency strategy of a lasso in a one-player game.
    #[staticmethod]
    #[pyo3(signature = (game, cycle, prefix=Vec::new()))]
    fn from_lasso(game: &PyGame, cycle: Vec<String>, prefix: Vec<String>) -> PyResult<Self> {
        let lasso = Lasso::from_ids(&game.inner, &prefix, &cycle).map_err(err)?;
        let inner = rm_from_lasso(&game.inner, &lasso).map_err(err)?;
        Ok(PyRM {
            inner,
            game: game.inner.clone(),
        })
    }

    #[staticmethod]
    fn parse(text: &str, game: &PyGame) -> PyResult<Self> {
        Ok(PyRM {
            inner: parse_rm(text, &game.inner).map_err(err)?,
            game: game.inner.clone(),
        })
    }

    fn text(&self) -> String {
        write_rm(&self.game, &self.inner)
    }

    fn probability(&self, py: Python<'_>, source: &str, target: &str) -> PyResult<Py<PyAny>> {
        let (s, t) = (self.game.index_of(source).map_err(err)?, self.game.index_of(target).map_err(err)?);
        Ok(fractions(py, &[self.inner.probability(s, t)])?.remove(0))
    }

    /// Exact expected mean payoff against a memoryless adversary given as
    /// `(state, successor)` pairs.
    #[pyo3(signature = (adversary=Vec::new()))]
    fn expectation(&self, py: Python<'_>, adversary: Vec<(String, String)>) -> PyResult<Vec<Py<PyAny>>> {
        let s2 = responses(&self.game, &adversary)?;
        let chain = induced_chain(&self.game, &self.inner, &s2).map_err(err)?;
        fractions(py, &chain_mean_payoff(&chain).map_err(err)?.expectation)
    }

    /// Mean over episodes of the finite-horizon mean payoff.
    #[pyo3(signature = (horizon=10_000, episodes=100, seed=0, adversary=Vec::new()))]
    fn simulate(&self, horizon: u64, episodes: usize, seed: u64, adversary: Vec<(String, String)>) -> PyResult<Vec<f64>> {
        let s2 = responses(&self.game, &adversary)?;
        let r = monte_carlo_eval(&self.game, &self.inner, &s2, horizon, episodes, seed).map_err(err)?;
        Ok(r.mean)
    }
}

/// Randomized memoryless strategy for mean payoff ≥ −ε with Büchi set `f`.
/// Returns the strategy and its mixing probability.
#[pyfunction]
fn mp_buchi(py: Python<'_>, game: &PyGame, f: Vec<String>, epsilon: &str) -> PyResult<(PyRM, Py<PyAny>)> {
    let mut mask = vec![false; game.inner.num_states()];
    for s in game.inner.indices_of(&f).map_err(err)? {
        mask[s] = true;
    }
    let (inner, gamma) = randomized::mp_buchi_randomized(&game.inner, &mask, &rational(epsilon)?).map_err(err)?;
    let gamma = fractions(py, &[gamma])?.remove(0);
    Ok((
        PyRM {
            inner,
            game: game.inner.clone(),
        },
        gamma,
    ))
}

/// Randomized memoryless strategy for mean payoff ≥ −ε with parity.
#[pyfunction]
fn mp_parity(game: &PyGame, epsilon: &str) -> PyResult<PyRM> {
    let inner = randomized::mp_parity_randomized(&game.inner, &rational(epsilon)?).map_err(err)?;
    Ok(PyRM {
        inner,
        game: game.inner.clone(),
    })
}

#[pymodule]
fn menergy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_class::<PyMoore>()?;
    m.add_class::<PySolved>()?;
    m.add_class::<PyRM>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(mp_buchi, m)?)?;
    m.add_function(wrap_pyfunction!(mp_parity, m)?)?;
    Ok(())
}
