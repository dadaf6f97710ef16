//! Finite Markov chains with exact rational transitions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::game::{GameStructure, Player};
use crate::graph::sccs;
use crate::randomized::RMStrategy;

pub type Q = BigRational;

pub(crate) fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub target: usize,
    pub probability: Q,
    pub weight: Vec<i64>,
}

/// A chain over labelled nodes. Node `initial` is where runs start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteChain {
    /// The game state each node stands for (product chains repeat states).
    pub states: Vec<usize>,
    pub priorities: Vec<u32>,
    pub dimension: usize,
    pub initial: usize,
    pub transitions: Vec<Vec<Transition>>,
    /// Bottom strongly connected components, each sorted.
    pub bsccs: Vec<Vec<usize>>,
    pub transient: Vec<usize>,
}

impl FiniteChain {
    pub fn new(
        states: Vec<usize>,
        priorities: Vec<u32>,
        dimension: usize,
        initial: usize,
        transitions: Vec<Vec<Transition>>,
    ) -> Result<Self> {
        let n = transitions.len();
        if states.len() != n || priorities.len() != n || initial >= n.max(1) {
            return Err(Error::Validation("chain label vectors disagree in length".into()));
        }
        for (u, row) in transitions.iter().enumerate() {
            let total: Q = row.iter().map(|t| t.probability.clone()).sum();
            if !total.is_one()
                || row.iter().any(|t| {
                    t.target >= n || t.probability <= Q::zero() || t.weight.len() != dimension
                })
            {
                return Err(Error::Validation(format!("chain row {u} is not a distribution")));
            }
        }
        let adj: Vec<Vec<usize>> = transitions
            .iter()
            .map(|row| row.iter().map(|t| t.target).collect())
            .collect();
        let comps = sccs(&adj, |_| true);
        let mut comp_of = vec![0; n];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut bsccs = Vec::new();
        let mut transient = Vec::new();
        for (i, c) in comps.iter().enumerate() {
            if c.iter().all(|&v| adj[v].iter().all(|&w| comp_of[w] == i)) {
                bsccs.push(c.clone());
            } else {
                transient.extend(c.iter().copied());
            }
        }
        bsccs.sort();
        transient.sort_unstable();
        Ok(FiniteChain {
            states,
            priorities,
            dimension,
            initial,
            transitions,
            bsccs,
            transient,
        })
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    /// The sub-chain on a closed node set (e.g. a BSCC), renumbered in order.
    pub fn restrict(&self, nodes: &[usize]) -> Result<FiniteChain> {
        let mut map = vec![usize::MAX; self.len()];
        for (i, &v) in nodes.iter().enumerate() {
            map[v] = i;
        }
        let mut rows = Vec::with_capacity(nodes.len());
        for &v in nodes {
            let mut row = Vec::new();
            for t in &self.transitions[v] {
                if map[t.target] == usize::MAX {
                    return Err(Error::Validation("restriction to a non-closed set".into()));
                }
                row.push(Transition {
                    target: map[t.target],
                    ..t.clone()
                });
            }
            rows.push(row);
        }
        FiniteChain::new(
            nodes.iter().map(|&v| self.states[v]).collect(),
            nodes.iter().map(|&v| self.priorities[v]).collect(),
            self.dimension,
            0,
            rows,
        )
    }

    /// Expected one-step weight from each node.
    fn expected_weight(&self, v: usize) -> Vec<Q> {
        let mut acc = vec![Q::zero(); self.dimension];
        for t in &self.transitions[v] {
            for (a, &w) in acc.iter_mut().zip(&t.weight) {
                *a += &t.probability * Q::from_integer(BigInt::from(w));
            }
        }
        acc
    }
}

/// The chain obtained by fixing a randomized memoryless P1 strategy and a
/// pure memoryless P2 strategy, on the states reachable from the initial one.
pub fn induced_chain(g: &GameStructure, s1: &RMStrategy, s2: &[Option<usize>]) -> Result<FiniteChain> {
    s1.validate(g)?;
    let row_of = |s: usize| -> Result<Vec<(usize, Q)>> {
        match g.owner(s) {
            Player::One => Ok(s1.distribution(s).to_vec()),
            Player::Two => {
                let t = s2.get(s).copied().flatten().ok_or_else(|| {
                    Error::MalformedStrategy(format!("adversary has no move at `{}`", g.id(s)))
                })?;
                if g.edge_between(s, t).is_none() {
                    return Err(Error::MalformedStrategy(format!(
                        "adversary move {} -> {} is not an edge",
                        g.id(s),
                        g.id(t)
                    )));
                }
                Ok(vec![(t, Q::one())])
            }
        }
    };
    let mut index = vec![usize::MAX; g.num_states()];
    let mut order = vec![g.initial()];
    index[g.initial()] = 0;
    let mut rows = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        let mut row = Vec::new();
        for (t, p) in row_of(s)? {
            if index[t] == usize::MAX {
                index[t] = order.len();
                order.push(t);
            }
            row.push(Transition {
                target: index[t],
                probability: p,
                weight: g.weight(s, t).unwrap().clone(),
            });
        }
        rows.push(row);
        i += 1;
    }
    let priorities = order.iter().map(|&s| g.priority(s)).collect();
    FiniteChain::new(order, priorities, g.dimension(), 0, rows)
}

/// Solves `A x = b` exactly; `None` if `A` is singular.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for x in b[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            for c in 0..b[r].len() {
                let d = &f * &b[col][c];
                b[r][c] -= d;
            }
        }
    }
    Some(b)
}

/// The unique `ν` with `νP = ν` and `Σν = 1` of an irreducible chain.
pub fn stationary_distribution(c: &FiniteChain) -> Result<Vec<Q>> {
    let n = c.len();
    if n == 0 {
        return Err(Error::Reducible("empty chain".into()));
    }
    if c.bsccs.len() != 1 || !c.transient.is_empty() {
        return Err(Error::Reducible(format!(
            "{} bottom components and {} transient nodes",
            c.bsccs.len(),
            c.transient.len()
        )));
    }
    // Rows: (P^T − I) ν = 0, with the last equation replaced by Σν = 1.
    let mut a = vec![vec![Q::zero(); n]; n];
    for (u, row) in c.transitions.iter().enumerate() {
        for t in row {
            a[t.target][u] += &t.probability;
        }
        a[u][u] -= Q::one();
    }
    a[n - 1] = vec![Q::one(); n];
    let mut b = vec![vec![Q::zero()]; n];
    b[n - 1][0] = Q::one();
    let x = solve(a, b).ok_or_else(|| Error::Reducible("singular stationary system".into()))?;
    Ok(x.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BsccValue {
    pub nodes: Vec<usize>,
    pub stationary: Vec<Q>,
    pub mean_payoff: Vec<Q>,
    /// Probability of ending in this component from the initial node.
    pub reach: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainValue {
    pub bsccs: Vec<BsccValue>,
    pub expectation: Vec<Q>,
}

impl ChainValue {
    /// BSCCs that the initial node reaches with positive probability.
    pub fn reached(&self) -> impl Iterator<Item = &BsccValue> {
        self.bsccs.iter().filter(|b| !b.reach.is_zero())
    }
}

/// Per-BSCC mean payoff, absorption probabilities and overall expectation.
pub fn chain_mean_payoff(c: &FiniteChain) -> Result<ChainValue> {
    let n = c.len();
    let mut comp_of = vec![usize::MAX; n];
    for (i, b) in c.bsccs.iter().enumerate() {
        for &v in b {
            comp_of[v] = i;
        }
    }
    // Absorption probabilities for transient nodes: (I − Q) x = R.
    let tpos: Vec<usize> = {
        let mut p = vec![usize::MAX; n];
        for (i, &v) in c.transient.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    let m = c.transient.len();
    let k = c.bsccs.len();
    let absorb = if m == 0 {
        Vec::new()
    } else {
        let mut a = vec![vec![Q::zero(); m]; m];
        let mut r = vec![vec![Q::zero(); k]; m];
        for (i, &v) in c.transient.iter().enumerate() {
            a[i][i] += Q::one();
            for t in &c.transitions[v] {
                if tpos[t.target] != usize::MAX {
                    a[i][tpos[t.target]] -= &t.probability;
                } else {
                    r[i][comp_of[t.target]] += &t.probability;
                }
            }
        }
        solve(a, r).ok_or_else(|| Error::Reducible("singular absorption system".into()))?
    };
    let reach_of = |b: usize| -> Q {
        if comp_of[c.initial] != usize::MAX {
            if comp_of[c.initial] == b {
                Q::one()
            } else {
                Q::zero()
            }
        } else {
            absorb[tpos[c.initial]][b].clone()
        }
    };

    let mut expectation = vec![Q::zero(); c.dimension];
    let mut values = Vec::with_capacity(k);
    for (i, nodes) in c.bsccs.iter().enumerate() {
        let sub = c.restrict(nodes)?;
        let nu = stationary_distribution(&sub)?;
        let mut mp = vec![Q::zero(); c.dimension];
        for (j, p) in nu.iter().enumerate() {
            for (a, w) in mp.iter_mut().zip(sub.expected_weight(j)) {
                *a += p * w;
            }
        }
        let reach = reach_of(i);
        for (e, v) in expectation.iter_mut().zip(&mp) {
            *e += &reach * v;
        }
        values.push(BsccValue {
            nodes: nodes.clone(),
            stationary: nu,
            mean_payoff: mp,
            reach,
        });
    }
    Ok(ChainValue {
        bsccs: values,
        expectation,
    })
}
