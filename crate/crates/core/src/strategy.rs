//! Moore-machine strategies: extraction from the fixed point, the product with
//! the game, an independent sure-winning verifier, and memoryless enumeration.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::antichain::Credit;
use crate::error::{Error, Result};
use crate::game::{add_assign, is_alternating, GameStructure, Lasso, Player};
use crate::graph::{bellman_ford, bfs_path, is_nontrivial, reachable, sccs};
use crate::solver::FixpointResult;

/// Default bound on the number of memoryless strategies enumerated.
pub const ENUMERATION_LIMIT: u128 = 100_000;

/// A finite-memory pure strategy for player one.
///
/// Memory states are labelled by a game state and a vector (a credit for
/// extracted machines, a counter for phase machines). At a P1 node `(s, m)`
/// the machine moves to `act(m)`; on observing the next state `t` the memory
/// becomes `upd(m, t)` when defined and otherwise stays `m`. At P2 nodes every
/// possible successor must have an update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreStrategy {
    pub memory: Vec<(usize, Vec<i64>)>,
    pub initial: usize,
    pub action: BTreeMap<usize, usize>,
    pub update: BTreeMap<(usize, usize), usize>,
}

impl MooreStrategy {
    pub fn len(&self) -> usize {
        self.memory.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memory.is_empty()
    }

    /// Wraps a P1 memoryless choice (`choice[s]` for every P1 state `s`).
    pub fn from_memoryless(g: &GameStructure, choice: &[Option<usize>]) -> Result<MooreStrategy> {
        let n = g.num_states();
        let mut action = BTreeMap::new();
        let mut update = BTreeMap::new();
        for s in 0..n {
            if g.owner(s) == Player::One {
                let t = choice
                    .get(s)
                    .copied()
                    .flatten()
                    .ok_or_else(|| Error::MalformedStrategy(format!("no choice at `{}`", g.id(s))))?;
                action.insert(s, t);
            }
            for t in g.successors(s) {
                update.insert((s, t), t);
            }
        }
        let m = MooreStrategy {
            memory: (0..n).map(|s| (s, Vec::new())).collect(),
            initial: g.initial(),
            action,
            update,
        };
        m.validate(g)?;
        Ok(m)
    }

    pub fn validate(&self, g: &GameStructure) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedStrategy(m));
        if self.initial >= self.memory.len() {
            return bad("initial memory out of range".into());
        }
        if self.memory.iter().any(|(s, _)| *s >= g.num_states()) {
            return bad("memory state labelled with an unknown game state".into());
        }
        for (i, (s, _)) in self.memory.iter().enumerate() {
            let owned = g.owner(*s) == Player::One;
            match self.action.get(&i) {
                Some(&t) if !owned => {
                    return bad(format!("action {} at memory {i} over a P2 state", g.id(t)))
                }
                Some(&t) if g.edge_between(*s, t).is_none() => {
                    return bad(format!("action at memory {i} is not an edge of `{}`", g.id(*s)))
                }
                None if owned => return bad(format!("memory {i} over a P1 state has no action")),
                _ => {}
            }
        }
        for (&(i, obs), &j) in &self.update {
            if i >= self.memory.len() || j >= self.memory.len() || obs >= g.num_states() {
                return bad(format!("update ({i}, {obs}) -> {j} out of range"));
            }
        }
        if self.action.keys().any(|&i| i >= self.memory.len()) {
            return bad("action for an unknown memory state".into());
        }
        Ok(())
    }

    /// The successor chosen at P1 node `(s, m)`.
    pub fn choose(&self, g: &GameStructure, s: usize, m: usize) -> Result<usize> {
        let t = *self
            .action
            .get(&m)
            .ok_or_else(|| Error::MalformedStrategy(format!("no action for memory {m}")))?;
        if g.edge_between(s, t).is_none() {
            return Err(Error::MalformedStrategy(format!(
                "memory {m} plays {} which is not a successor of {}",
                g.id(t),
                g.id(s)
            )));
        }
        Ok(t)
    }

    /// Memory after moving from `s` (with memory `m`) to `t`.
    pub fn next_memory(&self, g: &GameStructure, s: usize, m: usize, t: usize) -> Result<usize> {
        match (self.update.get(&(m, t)), g.owner(s)) {
            (Some(&j), _) => Ok(j),
            (None, Player::One) => Ok(m),
            (None, Player::Two) => Err(Error::MalformedStrategy(format!(
                "no update for memory {m} when the environment moves {} -> {}",
                g.id(s),
                g.id(t)
            ))),
        }
    }
}

pub fn write_moore(g: &GameStructure, m: &MooreStrategy) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "moore states={} init={}", m.memory.len(), m.initial);
    for (i, (s, label)) in m.memory.iter().enumerate() {
        let _ = write!(out, "mem {i} {}", g.id(*s));
        for c in label {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
    }
    for (i, t) in &m.action {
        let _ = writeln!(out, "act {i} {}", g.id(*t));
    }
    for ((i, obs), j) in &m.update {
        let _ = writeln!(out, "upd {i} {} {j}", g.id(*obs));
    }
    out
}

pub fn parse_moore(text: &str, g: &GameStructure) -> Result<MooreStrategy> {
    let syntax = |line: usize, message: String| Error::Syntax { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut memory: BTreeMap<usize, (usize, Vec<i64>)> = BTreeMap::new();
    let mut action = BTreeMap::new();
    let mut update = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("expected an index, got `{s}`")))
        };
        match tok[0] {
            "moore" => {
                let get = |key: &str| {
                    tok[1..]
                        .iter()
                        .find_map(|t| t.strip_prefix(key))
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| syntax(line_no, format!("missing `{key}<int>`")))
                };
                header = Some((get("states=")?, get("init=")?));
            }
            "mem" if tok.len() >= 3 => {
                let label = tok[3..]
                    .iter()
                    .map(|c| c.parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| syntax(line_no, format!("bad label: {e}")))?;
                memory.insert(int(tok[1])?, (g.index_of(tok[2])?, label));
            }
            "act" if tok.len() == 3 => {
                action.insert(int(tok[1])?, g.index_of(tok[2])?);
            }
            "upd" if tok.len() == 4 => {
                update.insert((int(tok[1])?, g.index_of(tok[2])?), int(tok[3])?);
            }
            other => return Err(syntax(line_no, format!("unexpected line starting with `{other}`"))),
        }
    }
    let (count, initial) = header.ok_or_else(|| syntax(1, "missing `moore` header".into()))?;
    if memory.len() != count || memory.keys().enumerate().any(|(i, &k)| i != k) {
        return Err(Error::MalformedStrategy(format!(
            "expected memory states 0..{count}, found {}",
            memory.len()
        )));
    }
    let m = MooreStrategy {
        memory: memory.into_values().collect(),
        initial,
        action,
        update,
    };
    m.validate(g)?;
    Ok(m)
}

fn plus(a: &[i64], b: &[i64]) -> Result<Credit> {
    let mut out = a.to_vec();
    add_assign(&mut out, b)?;
    Ok(out)
}

/// Builds a Moore machine from a fixed point of an alternating game.
///
/// Memory states are minimal P1 elements `(t, u)` of the fixed point,
/// restricted to those reachable from the initial memory. When the initial
/// state is P2-owned an extra initial memory `(s_init, u0)` is added.
pub fn extract_moore(g: &GameStructure, fp: &FixpointResult, v0: &[i64]) -> Result<MooreStrategy> {
    if !is_alternating(g) {
        return Err(Error::Precondition("extraction needs an alternating game".into()));
    }
    if v0.len() != g.dimension() {
        return Err(Error::Precondition("credit dimension differs from the game".into()));
    }
    let win = &fp.winning;
    let init = g.initial();
    let u0 = win.first_below(init, v0).cloned().ok_or_else(|| {
        Error::Precondition(format!(
            "no winning credit below {v0:?} at the initial state `{}`",
            g.id(init)
        ))
    })?;

    let mut memory: Vec<(usize, Credit)> = vec![(init, u0)];
    let mut index: HashMap<(usize, Credit), usize> = HashMap::new();
    index.insert(memory[0].clone(), 0);
    let mut action = BTreeMap::new();
    let mut update = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);

    let mut intern = |memory: &mut Vec<(usize, Credit)>, queue: &mut VecDeque<usize>, key: (usize, Credit)| {
        *index.entry(key.clone()).or_insert_with(|| {
            memory.push(key);
            queue.push_back(memory.len() - 1);
            memory.len() - 1
        })
    };

    while let Some(mi) = queue.pop_front() {
        let (t, u) = memory[mi].clone();
        // Observations after which memory is re-minimised: the P2 moves from
        // `from`, starting from credit `base`.
        let (from, base) = match g.owner(t) {
            Player::One => {
                let chosen = g
                    .successors(t)
                    .filter_map(|t1| {
                        let e = plus(&u, g.weight(t, t1).unwrap()).ok()?;
                        win.contains_upward(t1, &e).then_some((t1, e))
                    })
                    .min_by_key(|(t1, _)| *t1);
                let (t1, e) = chosen.ok_or_else(|| {
                    Error::Precondition(format!("({}, {u:?}) has no winning move", g.id(t)))
                })?;
                action.insert(mi, t1);
                (t1, e)
            }
            Player::Two => (t, u.clone()),
        };
        for t2 in g.successors(from).collect::<Vec<_>>() {
            let bound = plus(&base, g.weight(from, t2).unwrap())?;
            let u2 = win.first_below(t2, &bound).cloned().ok_or_else(|| {
                Error::Precondition(format!(
                    "fixed point not closed: no element at `{}` below {bound:?}",
                    g.id(t2)
                ))
            })?;
            let j = intern(&mut memory, &mut queue, (t2, u2));
            update.insert((mi, t2), j);
        }
    }
    let m = MooreStrategy {
        memory,
        initial: 0,
        action,
        update,
    };
    m.validate(g)?;
    Ok(m)
}

/// The reachable part of the game/strategy product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    /// `(game state, memory index)` per node; node 0 is initial.
    pub nodes: Vec<(usize, usize)>,
    pub succ: Vec<Vec<usize>>,
}

impl Product {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn state(&self, node: usize) -> usize {
        self.nodes[node].0
    }

    pub fn weighted_edges(&self, g: &GameStructure, dim: usize) -> Vec<(usize, usize, i64)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| {
                vs.iter()
                    .map(move |&v| (u, v, g.weight(self.state(u), self.state(v)).unwrap()[dim]))
            })
            .collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ.get(u).is_some_and(|s| s.contains(&v))
    }
}

pub fn strategy_product(g: &GameStructure, m: &MooreStrategy) -> Result<Product> {
    m.validate(g)?;
    let start = (g.initial(), m.initial);
    let mut nodes = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let (s, mem) = nodes[u];
        let targets: Vec<usize> = match g.owner(s) {
            Player::One => vec![m.choose(g, s, mem)?],
            Player::Two => g.successors(s).collect(),
        };
        for t in targets {
            let key = (t, m.next_memory(g, s, mem, t)?);
            let v = *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            succ[u].push(v);
        }
    }
    Ok(Product { nodes, succ })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Winning,
    Losing,
}

/// A violation found in the product. Paths are product node sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Following `prefix` and then `cycle` `repetitions` times (returning to
    /// the cycle's first node each time) drives `dimension` below the credit.
    Energy {
        dimension: usize,
        prefix: Vec<usize>,
        cycle: Vec<usize>,
        repetitions: u64,
    },
    /// A reachable cycle whose minimal priority `priority` is odd; `prefix`
    /// ends at the cycle's first node.
    Parity {
        priority: u32,
        prefix: Vec<usize>,
        cycle: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub product: Product,
    pub witness: Option<Witness>,
}

impl VerifyReport {
    /// Checks that the witness is a real violation in the product.
    pub fn witness_replays(&self, g: &GameStructure, v0: &[i64]) -> bool {
        match &self.witness {
            None => self.verdict == Verdict::Winning,
            Some(w) => self.verdict == Verdict::Losing && replay_witness(g, &self.product, v0, w),
        }
    }
}

fn path_is_valid(p: &Product, path: &[usize]) -> bool {
    path.first() == Some(&0) && path.windows(2).all(|w| p.has_edge(w[0], w[1]))
}

pub fn replay_witness(g: &GameStructure, p: &Product, v0: &[i64], w: &Witness) -> bool {
    match w {
        Witness::Energy {
            dimension,
            prefix,
            cycle,
            repetitions,
        } => {
            let Some(&last) = prefix.last() else { return false };
            if !path_is_valid(p, prefix) {
                return false;
            }
            let mut level = v0[*dimension] as i128;
            let mut dipped = level < 0;
            for pair in prefix.windows(2) {
                level += g.weight(p.state(pair[0]), p.state(pair[1])).unwrap()[*dimension] as i128;
                dipped |= level < 0;
            }
            if *repetitions > 0 {
                if cycle.first() != Some(&last) {
                    return false;
                }
                let mut closed = cycle.clone();
                closed.push(cycle[0]);
                if !closed.windows(2).all(|w| p.has_edge(w[0], w[1])) {
                    return false;
                }
                let step: Vec<i128> = closed
                    .windows(2)
                    .map(|w| g.weight(p.state(w[0]), p.state(w[1])).unwrap()[*dimension] as i128)
                    .collect();
                let total: i128 = step.iter().sum();
                // Only the last repetition can reach a new minimum when the
                // cycle is negative, so replay the first and last explicitly.
                let mut check = |start: i128| {
                    let mut l = start;
                    for d in &step {
                        l += d;
                        dipped |= l < 0;
                    }
                };
                check(level);
                check(level + total * (*repetitions as i128 - 1));
            }
            dipped
        }
        Witness::Parity {
            priority,
            prefix,
            cycle,
        } => {
            if cycle.is_empty() || prefix.last() != cycle.first() || !path_is_valid(p, prefix) {
                return false;
            }
            let mut closed = cycle.clone();
            closed.push(cycle[0]);
            closed.windows(2).all(|w| p.has_edge(w[0], w[1]))
                && priority % 2 == 1
                && cycle.iter().map(|&n| g.priority(p.state(n))).min() == Some(*priority)
        }
    }
}

/// Decides whether every play consistent with `m` keeps every dimension of
/// `v0 + EL` non-negative and satisfies parity.
pub fn verify_sure_winning(g: &GameStructure, m: &MooreStrategy, v0: &[i64]) -> Result<VerifyReport> {
    if v0.len() != g.dimension() {
        return Err(Error::Precondition(format!(
            "credit has {} components, game has dimension {}",
            v0.len(),
            g.dimension()
        )));
    }
    let product = strategy_product(g, m)?;
    let n = product.len();
    let all = |_: usize| true;

    for (dim, &credit) in v0.iter().enumerate() {
        let sp = bellman_ford(n, &product.weighted_edges(g, dim), 0);
        if let Some(cycle) = sp.negative_cycle.clone() {
            let prefix = sp
                .path_to(cycle[0])
                .or_else(|| bfs_path(&product.succ, 0, |v| v == cycle[0], all, false))
                .expect("cycle is reachable");
            let weight = |path: &[usize]| -> i128 {
                path.windows(2)
                    .map(|w| g.weight(product.state(w[0]), product.state(w[1])).unwrap()[dim] as i128)
                    .sum()
            };
            let mut closed = cycle.clone();
            closed.push(cycle[0]);
            let c = weight(&closed);
            let start = credit as i128 + weight(&prefix);
            let repetitions = if start < 0 { 1 } else { (start / -c + 1) as u64 };
            let witness = Witness::Energy {
                dimension: dim,
                prefix,
                cycle,
                repetitions,
            };
            return Ok(VerifyReport {
                verdict: Verdict::Losing,
                product,
                witness: Some(witness),
            });
        }
        if let Some(v) = (0..n).find(|&v| sp.dist[v].is_some_and(|d| d + (credit as i128) < 0)) {
            let prefix = sp.path_to(v).expect("reachable");
            let witness = Witness::Energy {
                dimension: dim,
                prefix,
                cycle: Vec::new(),
                repetitions: 0,
            };
            return Ok(VerifyReport {
                verdict: Verdict::Losing,
                product,
                witness: Some(witness),
            });
        }
    }

    if let Some(witness) = odd_cycle(g, &product) {
        return Ok(VerifyReport {
            verdict: Verdict::Losing,
            product,
            witness: Some(witness),
        });
    }
    Ok(VerifyReport {
        verdict: Verdict::Winning,
        product,
        witness: None,
    })
}

/// A reachable product cycle with odd minimal priority, if any.
pub fn odd_cycle(g: &GameStructure, product: &Product) -> Option<Witness> {
    let prio = |v: usize| g.priority(product.state(v));
    let mut odd: Vec<u32> = (0..product.len()).map(prio).filter(|p| p % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    for q in odd {
        let allowed = |v: usize| prio(v) >= q;
        for scc in sccs(&product.succ, allowed) {
            if !is_nontrivial(&product.succ, &scc) {
                continue;
            }
            let Some(&c) = scc.iter().find(|&&v| prio(v) == q) else { continue };
            let in_scc = |v: usize| scc.binary_search(&v).is_ok();
            let mut cycle = bfs_path(&product.succ, c, |v| v == c, in_scc, true)?;
            cycle.pop();
            let prefix = bfs_path(&product.succ, 0, |v| v == c, |_| true, false)?;
            return Some(Witness::Parity {
                priority: q,
                prefix,
                cycle,
            });
        }
    }
    None
}

/// A memoryless strategy: the chosen successor for each owned state.
pub type Memoryless = Vec<Option<usize>>;

/// Odometer over all memoryless strategies of one player, in lexicographic
/// order of (state index, out-edge order).
#[derive(Clone, Debug)]
pub struct MemorylessIter {
    n: usize,
    choices: Vec<(usize, Vec<usize>)>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for MemorylessIter {
    type Item = Memoryless;

    fn next(&mut self) -> Option<Memoryless> {
        if self.done {
            return None;
        }
        let mut out = vec![None; self.n];
        for ((s, succ), &c) in self.choices.iter().zip(&self.counter) {
            out[*s] = Some(succ[c]);
        }
        self.done = true;
        for i in (0..self.counter.len()).rev() {
            self.counter[i] += 1;
            if self.counter[i] < self.choices[i].1.len() {
                self.done = false;
                break;
            }
            self.counter[i] = 0;
        }
        Some(out)
    }
}

pub fn count_memoryless(g: &GameStructure, player: Player) -> u128 {
    g.states_of(player)
        .map(|s| g.out_edges(s).len() as u128)
        .try_fold(1u128, |acc, d| acc.checked_mul(d))
        .unwrap_or(u128::MAX)
}

pub fn enumerate_memoryless(g: &GameStructure, player: Player, limit: u128) -> Result<MemorylessIter> {
    let size = count_memoryless(g, player);
    if size > limit {
        return Err(Error::LimitExceeded {
            what: "memoryless strategies",
            size,
            limit,
        });
    }
    let choices: Vec<(usize, Vec<usize>)> = g
        .states_of(player)
        .map(|s| (s, g.successors(s).collect()))
        .collect();
    Ok(MemorylessIter {
        n: g.num_states(),
        counter: vec![0; choices.len()],
        choices,
        done: false,
    })
}

pub fn enumerate_p2_memoryless(g: &GameStructure) -> Result<MemorylessIter> {
    enumerate_memoryless(g, Player::Two, ENUMERATION_LIMIT)
}

/// Shortest period of `cycle` as a cyclic word.
fn primitive_period(cycle: &[usize]) -> usize {
    let n = cycle.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| cycle[i] == cycle[(i + p) % n]))
        .unwrap_or(n)
}

/// Turns a play `prefix · cycle^ω` into its shortest lasso form.
pub fn normalize_lasso(mut prefix: Vec<usize>, cycle: Vec<usize>) -> Lasso {
    let p = primitive_period(&cycle);
    let mut cycle: VecDeque<usize> = cycle[..p].iter().copied().collect();
    while let Some(&last) = prefix.last() {
        if cycle.back() != Some(&last) {
            break;
        }
        prefix.pop();
        cycle.rotate_right(1);
    }
    Lasso {
        prefix,
        cycle: cycle.into(),
    }
}

/// The unique play of `m` against a P2 memoryless strategy.
pub fn pure_outcome_lasso(g: &GameStructure, m: &MooreStrategy, adversary: &[Option<usize>]) -> Result<Lasso> {
    m.validate(g)?;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut play: Vec<usize> = Vec::new();
    let (mut s, mut mem) = (g.initial(), m.initial);
    loop {
        if let Some(&pos) = seen.get(&(s, mem)) {
            let cycle = play.split_off(pos);
            return Ok(normalize_lasso(play, cycle));
        }
        seen.insert((s, mem), play.len());
        play.push(s);
        let t = match g.owner(s) {
            Player::One => m.choose(g, s, mem)?,
            Player::Two => {
                let t = adversary.get(s).copied().flatten().ok_or_else(|| {
                    Error::MalformedStrategy(format!("adversary has no move at `{}`", g.id(s)))
                })?;
                if g.edge_between(s, t).is_none() {
                    return Err(Error::MalformedStrategy(format!(
                        "adversary move {} -> {} is not an edge",
                        g.id(s),
                        g.id(t)
                    )));
                }
                t
            }
        };
        mem = m.next_memory(g, s, mem, t)?;
        s = t;
    }
}

/// The label of the initial memory state (the credit for extracted machines).
pub fn initial_credit(m: &MooreStrategy) -> &[i64] {
    &m.memory[m.initial].1
}

/// Reachable states of a product, projected to the game.
pub fn product_states(p: &Product, n_states: usize) -> Vec<bool> {
    let seen = reachable(&p.succ, 0, |_| true);
    let mut out = vec![false; n_states];
    for (v, &r) in seen.iter().enumerate() {
        if r {
            out[p.state(v)] = true;
        }
    }
    out
}
