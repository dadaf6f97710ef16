//! Game structures: multi-weighted two-player graphs with priorities, their
//! text format, and exact arithmetic over plays.
//!
//! States are identified by string tokens in the text format and by dense
//! indices everywhere else. Index order is the declaration order of the
//! `state` lines and is the canonical order used for tie-breaking.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// A `k`-dimensional integer weight (or energy level) vector.
pub type WeightVector = Vec<i64>;

/// The two players. Player one is the protagonist (the one we synthesize for).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub id: String,
    pub owner: Player,
    pub priority: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: WeightVector,
}

/// A validated game structure. Immutable once built.
#[derive(Clone, Debug)]
pub struct GameStructure {
    dimension: usize,
    states: Vec<State>,
    initial: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    ids: HashMap<String, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl PartialEq for GameStructure {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.initial == other.initial
            && self.states == other.states
            && self.edges == other.edges
    }
}

impl Eq for GameStructure {}

impl GameStructure {
    /// Builds and validates a game.
    pub fn new(
        dimension: usize,
        states: Vec<State>,
        initial: usize,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        if states.is_empty() {
            return Err(Error::Validation("game has no states".into()));
        }
        if initial >= states.len() {
            return Err(Error::Validation("initial state out of range".into()));
        }
        let mut ids = HashMap::with_capacity(states.len());
        for (i, s) in states.iter().enumerate() {
            if s.id.is_empty() || s.id.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(Error::Validation(format!("invalid state id `{}`", s.id)));
            }
            if ids.insert(s.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate state id `{}`", s.id)));
            }
        }
        let mut out = vec![Vec::new(); states.len()];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.source >= states.len() || e.target >= states.len() {
                return Err(Error::Validation(format!("edge {i} has an endpoint out of range")));
            }
            if e.weight.len() != dimension {
                return Err(Error::Validation(format!(
                    "edge {} -> {} has {} weights, expected {}",
                    states[e.source].id,
                    states[e.target].id,
                    e.weight.len(),
                    dimension
                )));
            }
            if edge_index.insert((e.source, e.target), i).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate edge {} -> {}",
                    states[e.source].id, states[e.target].id
                )));
            }
            out[e.source].push(i);
        }
        if let Some(s) = out.iter().position(|o| o.is_empty()) {
            return Err(Error::Validation(format!(
                "state `{}` has no outgoing edge",
                states[s].id
            )));
        }
        Ok(GameStructure {
            dimension,
            states,
            initial,
            edges,
            out,
            ids,
            edge_index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, s: usize) -> &State {
        &self.states[s]
    }

    pub fn id(&self, s: usize) -> &str {
        &self.states[s].id
    }

    pub fn owner(&self, s: usize) -> Player {
        self.states[s].owner
    }

    pub fn priority(&self, s: usize) -> u32 {
        self.states[s].priority
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Indices of the edges leaving `s`, in declaration order.
    pub fn out_edges(&self, s: usize) -> &[usize] {
        &self.out[s]
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[s].iter().map(move |&e| self.edges[e].target)
    }

    pub fn edge_between(&self, s: usize, t: usize) -> Option<&Edge> {
        self.edge_index.get(&(s, t)).map(|&e| &self.edges[e])
    }

    pub fn weight(&self, s: usize, t: usize) -> Option<&WeightVector> {
        self.edge_between(s, t).map(|e| &e.weight)
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn states_of(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(move |&s| self.states[s].owner == player)
    }

    pub fn is_one_player(&self) -> bool {
        self.states.iter().all(|s| s.owner == Player::One)
    }

    pub fn max_priority(&self) -> u32 {
        self.states.iter().map(|s| s.priority).max().unwrap_or(0)
    }

    /// Same graph and weights, new priority labels.
    pub fn with_priorities(&self, priorities: &[u32]) -> Result<GameStructure> {
        if priorities.len() != self.num_states() {
            return Err(Error::Validation("priority vector length mismatch".into()));
        }
        let mut g = self.clone();
        for (s, &p) in g.states.iter_mut().zip(priorities) {
            s.priority = p;
        }
        Ok(g)
    }

    /// Same graph, weights replaced edge by edge (in edge order).
    pub fn with_weights(&self, dimension: usize, weights: Vec<WeightVector>) -> Result<GameStructure> {
        if weights.len() != self.edges.len() {
            return Err(Error::Validation("weight list length mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, weight)| Edge {
                source: e.source,
                target: e.target,
                weight,
            })
            .collect();
        GameStructure::new(dimension, self.states.clone(), self.initial, edges)
    }

    /// The restriction of the game to `mask`. Returns the subgame and the
    /// map from subgame indices to indices of `self`. The initial state is
    /// kept when it lies in the mask, otherwise the first masked state is used.
    pub fn subgame(&self, mask: &[bool]) -> Result<(GameStructure, Vec<usize>)> {
        let to_orig: Vec<usize> = (0..self.num_states()).filter(|&s| mask[s]).collect();
        if to_orig.is_empty() {
            return Err(Error::Validation("empty subgame".into()));
        }
        let mut to_sub = vec![usize::MAX; self.num_states()];
        for (i, &s) in to_orig.iter().enumerate() {
            to_sub[s] = i;
        }
        let states = to_orig.iter().map(|&s| self.states[s].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| mask[e.source] && mask[e.target])
            .map(|e| Edge {
                source: to_sub[e.source],
                target: to_sub[e.target],
                weight: e.weight.clone(),
            })
            .collect();
        let initial = if mask[self.initial] { to_sub[self.initial] } else { 0 };
        let g = GameStructure::new(self.dimension, states, initial, edges)?;
        Ok((g, to_orig))
    }

    /// Same game with another initial state.
    pub fn with_initial(&self, initial: usize) -> GameStructure {
        assert!(initial < self.num_states());
        let mut g = self.clone();
        g.initial = initial;
        g
    }
}

/// Incremental construction of a game by state ids.
#[derive(Debug, Default)]
pub struct GameBuilder {
    dimension: usize,
    states: Vec<State>,
    initial: Option<String>,
    edges: Vec<(String, String, WeightVector)>,
}

impl GameBuilder {
    pub fn new(dimension: usize) -> Self {
        GameBuilder {
            dimension,
            ..Default::default()
        }
    }

    pub fn state(mut self, id: &str, owner: Player, priority: u32) -> Self {
        self.states.push(State {
            id: id.to_string(),
            owner,
            priority,
        });
        self
    }

    pub fn initial(mut self, id: &str) -> Self {
        self.initial = Some(id.to_string());
        self
    }

    pub fn edge(mut self, source: &str, target: &str, weight: &[i64]) -> Self {
        self.edges
            .push((source.to_string(), target.to_string(), weight.to_vec()));
        self
    }

    pub fn build(self) -> Result<GameStructure> {
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownState(id.to_string()))
        };
        let initial = match &self.initial {
            Some(id) => lookup(id)?,
            None => 0,
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (s, t, w) in &self.edges {
            edges.push(Edge {
                source: lookup(s)?,
                target: lookup(t)?,
                weight: w.clone(),
            });
        }
        GameStructure::new(self.dimension, self.states, initial, edges)
    }
}

/// Parses the line-oriented game format.
///
/// ```text
/// game k=2
/// state s0 owner=2 prio=2 init
/// edge s0 s1 -1 1
/// ```
pub fn parse_game(text: &str) -> Result<GameStructure> {
    let syntax = |line: usize, message: String| Error::Syntax { line, message };
    let mut dimension: Option<usize> = None;
    let mut states: Vec<State> = Vec::new();
    let mut initial: Option<usize> = None;
    let mut raw_edges: Vec<(usize, String, String, WeightVector)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();
        if dimension.is_none() && keyword != "game" {
            return Err(syntax(line_no, "expected `game k=<int>` header".into()));
        }
        match keyword {
            "game" => {
                if dimension.is_some() {
                    return Err(syntax(line_no, "duplicate `game` header".into()));
                }
                let [arg] = rest.as_slice() else {
                    return Err(syntax(line_no, "expected `game k=<int>`".into()));
                };
                let k = arg
                    .strip_prefix("k=")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| syntax(line_no, format!("bad dimension `{arg}`")))?;
                dimension = Some(k);
            }
            "state" => {
                if rest.len() < 3 || rest.len() > 4 {
                    return Err(syntax(
                        line_no,
                        "expected `state <id> owner=<1|2> prio=<int> [init]`".into(),
                    ));
                }
                let id = rest[0].to_string();
                let owner = rest[1]
                    .strip_prefix("owner=")
                    .and_then(|v| v.parse::<u8>().ok())
                    .and_then(Player::from_number)
                    .ok_or_else(|| syntax(line_no, format!("bad owner `{}`", rest[1])))?;
                let priority = rest[2]
                    .strip_prefix("prio=")
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(|| syntax(line_no, format!("bad priority `{}`", rest[2])))?;
                if let Some(flag) = rest.get(3) {
                    if *flag != "init" {
                        return Err(syntax(line_no, format!("unexpected token `{flag}`")));
                    }
                    if initial.is_some() {
                        return Err(syntax(line_no, "more than one initial state".into()));
                    }
                    initial = Some(states.len());
                }
                states.push(State { id, owner, priority });
            }
            "edge" => {
                let k = dimension.unwrap_or_default();
                if rest.len() != 2 + k {
                    return Err(syntax(
                        line_no,
                        format!("expected `edge <src> <dst>` followed by {k} weights"),
                    ));
                }
                let weight = rest[2..]
                    .iter()
                    .map(|w| w.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| syntax(line_no, format!("bad weight: {e}")))?;
                raw_edges.push((line_no, rest[0].to_string(), rest[1].to_string(), weight));
            }
            other => return Err(syntax(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    let dimension = dimension.ok_or_else(|| syntax(1, "missing `game k=<int>` header".into()))?;
    let initial =
        initial.ok_or_else(|| Error::Validation("no state is marked `init`".into()))?;
    let index: HashMap<&str, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id.as_str(), i))
        .collect();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (line_no, s, t, weight) in raw_edges {
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| syntax(line_no, format!("unknown state `{id}`")))
        };
        edges.push(Edge {
            source: lookup(&s)?,
            target: lookup(&t)?,
            weight,
        });
    }
    GameStructure::new(dimension, states, initial, edges)
}

/// Canonical text form: header, states in index order, edges in edge order.
pub fn write_game(g: &GameStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "game k={}", g.dimension);
    for (i, s) in g.states.iter().enumerate() {
        let _ = write!(out, "state {} owner={} prio={}", s.id, s.owner.number(), s.priority);
        if i == g.initial {
            out.push_str(" init");
        }
        out.push('\n');
    }
    for e in &g.edges {
        let _ = write!(out, "edge {} {}", g.id(e.source), g.id(e.target));
        for w in &e.weight {
            let _ = write!(out, " {w}");
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for GameStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_game(self))
    }
}

pub(crate) fn add_assign(acc: &mut [i64], w: &[i64]) -> Result<()> {
    for (a, b) in acc.iter_mut().zip(w) {
        *a = a.checked_add(*b).ok_or(Error::Overflow("summing weights"))?;
    }
    Ok(())
}

/// Component-wise sum of the edge weights along `path`.
pub fn energy_level(g: &GameStructure, path: &[usize]) -> Result<WeightVector> {
    let mut level = vec![0i64; g.dimension()];
    for pair in path.windows(2) {
        let w = g.weight(pair[0], pair[1]).ok_or_else(|| Error::NotConnected {
            from: g.id(pair[0]).to_string(),
            to: g.id(pair[1]).to_string(),
        })?;
        add_assign(&mut level, w)?;
    }
    Ok(level)
}

/// An eventually periodic play `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        Lasso { prefix, cycle }
    }

    pub fn from_ids<S: AsRef<str>>(g: &GameStructure, prefix: &[S], cycle: &[S]) -> Result<Self> {
        let l = Lasso {
            prefix: g.indices_of(prefix)?,
            cycle: g.indices_of(cycle)?,
        };
        l.validate(g)?;
        Ok(l)
    }

    /// Checks that the lasso is a play of `g` starting in the initial state.
    pub fn validate(&self, g: &GameStructure) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::InvalidLasso("empty cycle".into()));
        }
        if self
            .prefix
            .iter()
            .chain(&self.cycle)
            .any(|&s| s >= g.num_states())
        {
            return Err(Error::InvalidLasso("state out of range".into()));
        }
        let first = self.prefix.first().unwrap_or(&self.cycle[0]);
        if *first != g.initial() {
            return Err(Error::InvalidLasso(format!(
                "play starts at `{}`, not at the initial state",
                g.id(*first)
            )));
        }
        let check = |a: usize, b: usize| {
            if g.edge_between(a, b).is_none() {
                Err(Error::InvalidLasso(format!("no edge {} -> {}", g.id(a), g.id(b))))
            } else {
                Ok(())
            }
        };
        for pair in self.prefix.windows(2) {
            check(pair[0], pair[1])?;
        }
        if let Some(&last) = self.prefix.last() {
            check(last, self.cycle[0])?;
        }
        for pair in self.cycle.windows(2) {
            check(pair[0], pair[1])?;
        }
        check(*self.cycle.last().unwrap(), self.cycle[0])
    }

    /// The cycle as a closed walk (first state appended at the end).
    pub fn closed_cycle(&self) -> Vec<usize> {
        let mut c = self.cycle.clone();
        c.push(self.cycle[0]);
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoValues {
    pub mean_payoff: Vec<BigRational>,
    pub min_cycle_priority: u32,
    pub cycle_energy: WeightVector,
}

/// Exact mean-payoff, parity and cycle energy of a lasso.
pub fn lasso_values(g: &GameStructure, lasso: &Lasso) -> Result<LassoValues> {
    lasso.validate(g)?;
    let cycle_energy = energy_level(g, &lasso.closed_cycle())?;
    let len = BigInt::from(lasso.cycle.len());
    let mean_payoff = cycle_energy
        .iter()
        .map(|&e| BigRational::new(BigInt::from(e), len.clone()))
        .collect();
    let min_cycle_priority = lasso.cycle.iter().map(|&s| g.priority(s)).min().unwrap();
    Ok(LassoValues {
        mean_payoff,
        min_cycle_priority,
        cycle_energy,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameStats {
    /// Largest absolute weight on any edge, over all dimensions.
    pub max_weight: i64,
    /// Largest out-degree.
    pub branching: usize,
    /// Number of distinct odd priorities occurring.
    pub odd_priorities: usize,
    pub priority_range: (u32, u32),
}

pub fn game_stats(g: &GameStructure) -> GameStats {
    let max_weight = g
        .edges()
        .iter()
        .flat_map(|e| e.weight.iter())
        .map(|w| w.saturating_abs())
        .max()
        .unwrap_or(0);
    let branching = (0..g.num_states()).map(|s| g.out_edges(s).len()).max().unwrap_or(0);
    let mut odd: Vec<u32> = g
        .states()
        .iter()
        .map(|s| s.priority)
        .filter(|p| p % 2 == 1)
        .collect();
    odd.sort_unstable();
    odd.dedup();
    let lo = g.states().iter().map(|s| s.priority).min().unwrap_or(0);
    GameStats {
        max_weight,
        branching,
        odd_priorities: odd.len(),
        priority_range: (lo, g.max_priority()),
    }
}

/// Correspondence between an alternating game and the game it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMap {
    /// For every state of the transformed game, the original state it is, or
    /// `None` for an inserted dummy.
    pub original: Vec<Option<usize>>,
    /// For every original edge, the dummy state splitting it, if any.
    pub dummy_of_edge: Vec<Option<usize>>,
}

impl StateMap {
    pub fn is_dummy(&self, s: usize) -> bool {
        self.original[s].is_none()
    }
}

/// Splits every edge between two states of the same owner with a dummy state
/// of the other owner, so that ownership alternates along every edge.
///
/// The dummy carries the source priority; the first half-edge carries the
/// full weight and the second half-edge weight zero. Original states keep
/// their indices; dummies are appended.
pub fn alternation_transform(g: &GameStructure) -> (GameStructure, StateMap) {
    let n = g.num_states();
    let mut states: Vec<State> = g.states().to_vec();
    let mut taken: std::collections::HashSet<String> =
        states.iter().map(|s| s.id.clone()).collect();
    let mut original: Vec<Option<usize>> = (0..n).map(Some).collect();
    let mut dummy_of_edge = Vec::with_capacity(g.edges().len());
    let mut edges = Vec::with_capacity(g.edges().len() * 2);
    for e in g.edges() {
        let (s, t) = (e.source, e.target);
        if g.owner(s) != g.owner(t) {
            dummy_of_edge.push(None);
            edges.push(e.clone());
            continue;
        }
        let mut id = format!("{}~{}", g.id(s), g.id(t));
        while taken.contains(&id) {
            id.push('\'');
        }
        taken.insert(id.clone());
        let d = states.len();
        states.push(State {
            id,
            owner: g.owner(s).opponent(),
            priority: g.priority(s),
        });
        original.push(None);
        dummy_of_edge.push(Some(d));
        edges.push(Edge {
            source: s,
            target: d,
            weight: e.weight.clone(),
        });
        edges.push(Edge {
            source: d,
            target: t,
            weight: vec![0; g.dimension()],
        });
    }
    let alt = GameStructure::new(g.dimension(), states, g.initial(), edges)
        .expect("splitting edges preserves validity");
    (
        alt,
        StateMap {
            original,
            dummy_of_edge,
        },
    )
}

/// True when every edge joins states of different owners.
pub fn is_alternating(g: &GameStructure) -> bool {
    g.edges().iter().all(|e| g.owner(e.source) != g.owner(e.target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_paper_fixture, FixtureId};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fig1_parses_with_expected_shape() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        assert_eq!(g.num_states(), 6);
        assert_eq!(g.dimension(), 2);
        let mut prios: Vec<u32> = g.states().iter().map(|s| s.priority).collect();
        prios.sort_unstable();
        prios.dedup();
        assert_eq!(prios, vec![0, 1, 2, 3]);
    }

    #[test]
    fn minimal_game_and_missing_edge() {
        let g = parse_game("game k=1\nstate s owner=1 prio=0 init\nedge s s 0\n").unwrap();
        assert_eq!(g.num_states(), 1);
        assert_eq!(write_game(&g).lines().count(), 3);

        let err = parse_game("game k=1\nstate a owner=1 prio=0 init\nstate b owner=2 prio=0\nedge a b 1\n")
            .unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("`b` has no outgoing edge")), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_game("game k=1\n# comment\nstate s owner=3 prio=0 init\n").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 3, message: "bad owner `owner=3`".into() });
        let err = parse_game("game k=2\nstate s owner=1 prio=0 init\nedge s s 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = parse_game("state s owner=1 prio=0 init\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
    }

    #[test]
    fn fig1_energy_levels() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        let p = g.indices_of(&["s0", "s1", "s3"]).unwrap();
        assert_eq!(energy_level(&g, &p).unwrap(), vec![-1, 2]);
        let p = g.indices_of(&["s0", "s2", "s3", "s5", "s3"]).unwrap();
        assert_eq!(energy_level(&g, &p).unwrap(), vec![0, 3]);
        assert_eq!(energy_level(&g, &[4]).unwrap(), vec![0, 0]);
        let bad = g.indices_of(&["s0", "s3"]).unwrap();
        assert!(matches!(energy_level(&g, &bad), Err(Error::NotConnected { .. })));
    }

    #[test]
    fn lasso_values_on_fixtures() {
        let g = gen_paper_fixture(FixtureId::Fig7);
        let mut cycle = vec!["s1"; 9];
        cycle.push("s2");
        let l = Lasso::from_ids(&g, &[] as &[&str], &cycle).unwrap();
        let v = lasso_values(&g, &l).unwrap();
        assert_eq!(v.mean_payoff, vec![q(3, 5)]);
        assert_eq!(v.cycle_energy, vec![6]);
        assert_eq!(v.min_cycle_priority, 0);

        let g = gen_paper_fixture(FixtureId::Fig5);
        let l = Lasso::from_ids(&g, &["s1"], &["s2"]).unwrap();
        assert_eq!(lasso_values(&g, &l).unwrap().mean_payoff, vec![q(2, 1), q(0, 1)]);

        let g = parse_game("game k=1\nstate s owner=1 prio=0 init\nedge s s 0\n").unwrap();
        let v = lasso_values(&g, &Lasso::new(vec![], vec![0])).unwrap();
        assert_eq!(v.mean_payoff, vec![q(0, 1)]);
        assert_eq!(v.cycle_energy, vec![0]);
    }

    #[test]
    fn invalid_lassos_are_rejected() {
        let g = gen_paper_fixture(FixtureId::Fig5);
        let s2 = g.index_of("s2").unwrap();
        let s3 = g.index_of("s3").unwrap();
        assert!(Lasso::new(vec![], vec![s2]).validate(&g).is_err());
        assert!(Lasso::new(vec![0, s2], vec![s3]).validate(&g).is_err());
        assert!(Lasso::new(vec![0], vec![]).validate(&g).is_err());
    }

    #[test]
    fn stats() {
        let s = game_stats(&gen_paper_fixture(FixtureId::Fig1));
        assert_eq!((s.max_weight, s.branching), (2, 2));
        assert_eq!(s.odd_priorities, 2);
        assert_eq!(s.priority_range, (0, 3));
        let g = parse_game("game k=2\nstate s owner=1 prio=0 init\nedge s s 0 0\n").unwrap();
        assert_eq!(game_stats(&g).max_weight, 0);
        let s = game_stats(&crate::bench::gen_exp_family(2));
        assert_eq!((s.max_weight, s.branching), (1, 2));
    }

    #[test]
    fn alternation_splits_same_owner_edges() {
        let g = parse_game(
            "game k=1\nstate a owner=1 prio=4 init\nstate b owner=1 prio=1\nedge a b 3\nedge b a 0\n",
        )
        .unwrap();
        let (alt, map) = alternation_transform(&g);
        assert!(is_alternating(&alt));
        assert_eq!(alt.num_states(), 4);
        let d = map.dummy_of_edge[0].unwrap();
        assert_eq!(alt.owner(d), Player::Two);
        assert_eq!(alt.priority(d), 4);
        assert_eq!(alt.weight(0, d).unwrap(), &vec![3]);
        assert_eq!(alt.weight(d, 1).unwrap(), &vec![0]);
        assert_eq!(map.original[..2], [Some(0), Some(1)]);
        assert!(map.is_dummy(d));
    }

    #[test]
    fn alternation_is_identity_on_alternating_games() {
        let g = parse_game(
            "game k=1\nstate a owner=1 prio=0 init\nstate b owner=2 prio=0\nedge a b 3\nedge b a -1\n",
        )
        .unwrap();
        let (alt, map) = alternation_transform(&g);
        assert_eq!(alt, g);
        assert!(map.dummy_of_edge.iter().all(Option::is_none));
    }

    #[test]
    fn alternation_on_fig1() {
        let g = gen_paper_fixture(FixtureId::Fig1);
        let (alt, map) = alternation_transform(&g);
        assert!(is_alternating(&alt));
        let split: Vec<(&str, &str)> = g
            .edges()
            .iter()
            .zip(&map.dummy_of_edge)
            .filter(|(_, d)| d.is_some())
            .map(|(e, _)| (g.id(e.source), g.id(e.target)))
            .collect();
        assert_eq!(
            split,
            vec![("s0", "s1"), ("s0", "s2"), ("s3", "s4"), ("s3", "s5"), ("s5", "s3")]
        );
        assert_eq!(alt.num_states(), 11);
        let d = map.dummy_of_edge[0].unwrap();
        assert_eq!(alt.owner(d), Player::One);
    }
}
