//! The three generator axioms (irreducible, unifilar, probabilistically
//! distinct states) and synchronizing-word search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::Result;
use crate::graph;
use crate::machine::{Machine, State, Symbol};

/// Tolerance when comparing next-symbol probabilities during refinement.
pub const EPS_DIST: f64 = 1e-9;

/// Hard ceiling on subsets visited by the synchronizing-word search.
const SUBSET_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub components: Vec<Vec<State>>,
}

pub fn is_irreducible(machine: &Machine) -> Irreducibility {
    let components = machine.strongly_connected_components();
    Irreducibility {
        irreducible: components.len() == 1,
        components,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unifilarity {
    pub unifilar: bool,
    /// `(state, symbol)` pairs with more than one outgoing edge.
    pub violations: Vec<(State, Symbol)>,
}

pub fn is_unifilar(machine: &Machine) -> Unifilarity {
    let k = machine.n_symbols();
    let mut count = vec![0usize; machine.n_states() * k];
    for e in machine.edges().iter().filter(|e| e.prob > 0.0) {
        count[e.from * k + e.symbol] += 1;
    }
    let violations: Vec<_> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 1)
        .map(|(idx, _)| (idx / k, idx % k))
        .collect();
    Unifilarity {
        unifilar: violations.is_empty(),
        violations,
    }
}

/// Disjoint blocks of states covering every state, ordered by their lowest
/// member; members sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePartition {
    blocks: Vec<Vec<State>>,
}

impl StatePartition {
    /// Canonical partition from a block label per state.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut blocks: Vec<Vec<State>> = Vec::new();
        for (s, &l) in labels.iter().enumerate() {
            match order.iter().position(|&o| o == l) {
                Some(b) => blocks[b].push(s),
                None => {
                    order.push(l);
                    blocks.push(vec![s]);
                }
            }
        }
        StatePartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<State>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_states(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every state.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n_states()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &s in block {
                labels[s] = b;
            }
        }
        labels
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Moore refinement of a unifilar machine, keeping the labels of every
/// round so that separating words can be reconstructed.
#[derive(Clone, Debug)]
pub struct Refinement {
    rounds: Vec<Vec<usize>>,
    eps: f64,
}

impl Refinement {
    pub fn run(machine: &Machine, eps: f64) -> Result<Self> {
        let n = machine.n_states();
        let k = machine.n_symbols();
        // fails early on nonunifilar machines
        let delta: Vec<Vec<Option<State>>> = (0..n)
            .map(|s| {
                (0..k)
                    .map(|x| machine.transition_function(s, x))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;

        let probs: Vec<Vec<f64>> = (0..n).map(|s| machine.symbol_probs(s)).collect();
        let mut reps: Vec<State> = Vec::new();
        let mut labels = vec![0usize; n];
        for s in 0..n {
            match reps.iter().position(|&r| within(&probs[r], &probs[s], eps)) {
                Some(b) => labels[s] = b,
                None => {
                    labels[s] = reps.len();
                    reps.push(s);
                }
            }
        }

        let mut rounds = vec![labels];
        // Moore bound: a fixpoint is reached within n - 1 refinements.
        for _ in 0..n.saturating_sub(1) {
            let prev = rounds.last().expect("at least one round");
            let mut sig_ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let sig = (
                        prev[s],
                        delta[s].iter().map(|d| d.map(|t| prev[t])).collect(),
                    );
                    let fresh = sig_ids.len();
                    *sig_ids.entry(sig).or_insert(fresh)
                })
                .collect();
            let changed = count_distinct(&next) != count_distinct(prev);
            rounds.push(next);
            if !changed {
                break;
            }
        }
        Ok(Refinement { rounds, eps })
    }

    pub fn partition(&self) -> StatePartition {
        StatePartition::from_labels(self.rounds.last().expect("at least one round"))
    }

    /// Number of refinement rounds performed after the initial split.
    pub fn n_rounds(&self) -> usize {
        self.rounds.len() - 1
    }

    /// A word on which `a` and `b` differ, read off the round that split
    /// them; ties broken by alphabet order. `None` when they share a block.
    pub fn separating_word(&self, machine: &Machine, a: State, b: State) -> Option<Vec<Symbol>> {
        let r = self.rounds.iter().position(|l| l[a] != l[b])?;
        let mut word = Vec::new();
        let (mut a, mut b, mut r) = (a, b, r);
        loop {
            if r == 0 {
                let (pa, pb) = (machine.symbol_probs(a), machine.symbol_probs(b));
                let x = (0..pa.len())
                    .find(|&x| (pa[x] - pb[x]).abs() > self.eps)
                    .expect("round-0 split implies a differing symbol");
                word.push(x);
                return Some(word);
            }
            let prev = &self.rounds[r - 1];
            let mut step = None;
            for x in 0..machine.n_symbols() {
                let da = machine.transition_function(a, x).ok().flatten();
                let db = machine.transition_function(b, x).ok().flatten();
                match (da, db) {
                    (Some(ta), Some(tb)) if prev[ta] != prev[tb] => {
                        step = Some((x, Some((ta, tb))));
                        break;
                    }
                    (Some(_), None) | (None, Some(_)) => {
                        step = Some((x, None));
                        break;
                    }
                    _ => {}
                }
            }
            let (x, next) = step.expect("split at round r implies a differing successor");
            word.push(x);
            match next {
                None => return Some(word),
                Some((ta, tb)) => {
                    a = ta;
                    b = tb;
                    r = self
                        .rounds
                        .iter()
                        .position(|l| l[a] != l[b])
                        .expect("successors were split");
                }
            }
        }
    }
}

fn within(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
}

fn count_distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<HashSet<_>>().len()
}

/// Coarsest partition whose blocks agree on every word probability.
pub fn distinctness_partition(machine: &Machine, eps: f64) -> Result<StatePartition> {
    Refinement::run(machine, eps).map(|r| r.partition())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub irreducible: bool,
    pub unifilar: bool,
    /// `None` when not applicable (nonunifilar machine).
    pub probabilistically_distinct: Option<bool>,
    pub components: Vec<Vec<State>>,
    /// `(a, b)` with `b` unreachable from `a`.
    pub unreachable_pair: Option<(State, State)>,
    pub unifilar_violations: Vec<(State, Symbol)>,
    pub indistinct_pair: Option<(State, State)>,
    pub partition: Option<StatePartition>,
}

impl AxiomReport {
    pub fn is_generator_em(&self) -> bool {
        self.irreducible && self.unifilar && self.probabilistically_distinct == Some(true)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        write!(f, "{:<28}{}", "irreducible:", yes_no(self.irreducible))?;
        if let Some((a, b)) = self.unreachable_pair {
            write!(f, "   (state {b} unreachable from state {a})")?;
        }
        writeln!(f)?;
        write!(f, "{:<28}{}", "unifilar:", yes_no(self.unifilar))?;
        if let Some(&(s, x)) = self.unifilar_violations.first() {
            write!(f, "   (state {s} has several edges on symbol {x})")?;
        }
        writeln!(f)?;
        match self.probabilistically_distinct {
            None => writeln!(f, "{:<28}n/a", "probabilistically distinct:")?,
            Some(d) => {
                write!(f, "{:<28}{}", "probabilistically distinct:", yes_no(d))?;
                if let Some((a, b)) = self.indistinct_pair {
                    write!(f, "   (states {a} and {b} are equivalent)")?;
                }
                writeln!(f)?;
            }
        }
        writeln!(
            f,
            "{:<28}{}",
            "generator epsilon-machine:",
            yes_no(self.is_generator_em())
        )
    }
}

pub fn is_generator_em(machine: &Machine) -> AxiomReport {
    is_generator_em_with(machine, EPS_DIST)
}

pub fn is_generator_em_with(machine: &Machine, eps: f64) -> AxiomReport {
    let irr = is_irreducible(machine);
    let unreachable_pair = if irr.irreducible {
        None
    } else {
        let adj = machine.adjacency();
        (0..machine.n_states()).find_map(|a| {
            let seen = graph::reachable_from(&adj, [a]);
            seen.iter().position(|&r| !r).map(|b| (a, b))
        })
    };
    let uni = is_unifilar(machine);
    let (distinct, indistinct_pair, partition) = if uni.unifilar {
        let p = distinctness_partition(machine, eps).expect("unifilar machine refines");
        let pair = p
            .blocks()
            .iter()
            .find(|b| b.len() > 1)
            .map(|b| (b[0], b[1]));
        (Some(p.is_discrete()), pair, Some(p))
    } else {
        (None, None, None)
    };
    AxiomReport {
        irreducible: irr.irreducible,
        unifilar: uni.unifilar,
        probabilistically_distinct: distinct,
        components: irr.components,
        unreachable_pair,
        unifilar_violations: uni.violations,
        indistinct_pair,
        partition,
    }
}

/// Shortest (then lexicographically least) word after which an observer
/// who starts knowing nothing is certain of the state, searching words up
/// to `max_len`. The empty word is returned for one-state machines.
pub fn find_sync_word(machine: &Machine, max_len: usize) -> Result<Option<Vec<Symbol>>> {
    let n = machine.n_states();
    let k = machine.n_symbols();
    let mut delta = vec![None; n * k];
    for s in 0..n {
        for x in 0..k {
            delta[s * k + x] = machine.transition_function(s, x)?;
        }
    }
    let start: Vec<State> = (0..n).collect();
    if start.len() == 1 {
        return Ok(Some(Vec::new()));
    }
    let cap = if n >= 20 {
        SUBSET_CAP
    } else {
        (1usize << n).min(SUBSET_CAP)
    };
    let mut parent: HashMap<Vec<State>, Option<(Vec<State>, Symbol)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);

    while let Some((set, depth)) = queue.pop_front() {
        if depth >= max_len {
            continue;
        }
        for x in 0..k {
            let mut next: Vec<State> = set.iter().filter_map(|&s| delta[s * k + x]).collect();
            if next.is_empty() {
                continue;
            }
            next.sort_unstable();
            next.dedup();
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((set.clone(), x)));
            if next.len() == 1 {
                let mut word = Vec::new();
                let mut cur = next;
                while let Some(Some((prev, sym))) = parent.get(&cur) {
                    word.push(*sym);
                    cur = prev.clone();
                }
                word.reverse();
                return Ok(Some(word));
            }
            if parent.len() >= cap {
                return Ok(None);
            }
            queue.push_back((next, depth + 1));
        }
    }
    Ok(None)
}

/// [`find_sync_word`] with the default length bound `4N`.
pub fn find_sync_word_default(machine: &Machine) -> Result<Option<Vec<Symbol>>> {
    find_sync_word(machine, 4 * machine.n_states())
}
