//! Sampling symbol/state paths and counting words in samples.
//!
//! Randomness comes from ChaCha8 seeded with a `u64`. Independent chains use
//! the same seed on different ChaCha streams ([`chain_rng`]), so chain `c` of
//! seed `s` is the same sequence no matter how many chains run or in which
//! order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::machine::{Machine, State, Symbol};

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for chain number `chain` under `seed`.
pub fn chain_rng(seed: u64, chain: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub enum Start {
    Stationary,
    State(State),
    Distribution(Vec<f64>),
}

impl Start {
    fn distribution(&self, machine: &Machine) -> Result<Vec<f64>> {
        let n = machine.n_states();
        match self {
            Start::Stationary => Ok(machine.stationary_distribution()?.pi),
            Start::State(s) => {
                machine.check_state(*s)?;
                let mut e = vec![0.0; n];
                e[*s] = 1.0;
                Ok(e)
            }
            Start::Distribution(d) => {
                if d.len() != n {
                    return Err(Error::Distribution(format!(
                        "expected {n} entries, got {}",
                        d.len()
                    )));
                }
                if d.iter().any(|&p| p.is_nan() || p < 0.0) {
                    return Err(Error::Distribution("entries must be nonnegative".into()));
                }
                let s: f64 = d.iter().sum();
                if (s - 1.0).abs() > crate::machine::EPS_STOCH {
                    return Err(Error::Distribution(format!("entries sum to {s}")));
                }
                Ok(d.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleRun {
    pub symbols: Vec<Symbol>,
    /// `symbols.len() + 1` states, starting with the initial one.
    pub states: Vec<State>,
    pub seed: u64,
    pub start: Vec<f64>,
}

impl SampleRun {
    /// Every `(state, symbol, next)` step is a positive-probability edge.
    pub fn is_edge_consistent(&self, machine: &Machine) -> bool {
        self.states.len() == self.symbols.len() + 1
            && self.symbols.iter().enumerate().all(|(t, &x)| {
                machine
                    .outgoing(self.states[t])
                    .any(|e| e.symbol == x && e.to == self.states[t + 1] && e.prob > 0.0)
            })
    }
}

fn draw_index(weights: impl Iterator<Item = f64>, u: f64) -> Option<usize> {
    let mut acc = 0.0;
    let mut last = None;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = Some(i);
        if u < acc {
            return Some(i);
        }
    }
    last
}

/// Sampler with each state's outgoing edges laid out for cumulative
/// inversion in file order.
pub struct Walker<'m> {
    machine: &'m Machine,
    edges: Vec<Vec<(Symbol, f64, State)>>,
}

impl<'m> Walker<'m> {
    pub fn new(machine: &'m Machine) -> Self {
        let edges = (0..machine.n_states())
            .map(|s| {
                machine
                    .outgoing(s)
                    .map(|e| (e.symbol, e.prob, e.to))
                    .collect()
            })
            .collect();
        Walker { machine, edges }
    }

    pub fn initial_state<R: Rng>(&self, dist: &[f64], rng: &mut R) -> State {
        let total: f64 = dist.iter().sum();
        draw_index(dist.iter().copied(), rng.gen::<f64>() * total)
            .expect("distribution has positive mass")
    }

    /// One step from `state`: `(symbol, next state)`.
    pub fn step<R: Rng>(&self, state: State, rng: &mut R) -> (Symbol, State) {
        let out = &self.edges[state];
        let total: f64 = out.iter().map(|e| e.1).sum();
        let i = draw_index(out.iter().map(|e| e.1), rng.gen::<f64>() * total)
            .expect("every state has an outgoing edge");
        (out[i].0, out[i].2)
    }

    pub fn machine(&self) -> &Machine {
        self.machine
    }
}

pub fn sample_path(machine: &Machine, start: &Start, len: usize, seed: u64) -> Result<SampleRun> {
    sample_path_with(machine, start, len, seed, &mut rng_from_seed(seed))
}

pub(crate) fn sample_path_with<R: Rng>(
    machine: &Machine,
    start: &Start,
    len: usize,
    seed: u64,
    rng: &mut R,
) -> Result<SampleRun> {
    let dist = start.distribution(machine)?;
    if let Some(s) =
        (0..machine.n_states()).find(|&s| dist[s] > 0.0 && machine.outgoing(s).next().is_none())
    {
        return Err(Error::Parameter(format!("state {s} has no outgoing edges")));
    }
    let walker = Walker::new(machine);
    let mut state = walker.initial_state(&dist, rng);
    let mut states = Vec::with_capacity(len + 1);
    let mut symbols = Vec::with_capacity(len);
    states.push(state);
    for _ in 0..len {
        let (x, next) = walker.step(state, rng);
        symbols.push(x);
        states.push(next);
        state = next;
    }
    Ok(SampleRun {
        symbols,
        states,
        seed,
        start: dist,
    })
}

/// Sliding-window word counts for all lengths `1..=max_len`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalWordTable {
    n_symbols: usize,
    length: usize,
    max_len: usize,
    counts: Vec<BTreeMap<u64, u64>>,
}

fn encode(k: usize, w: &[Symbol]) -> u64 {
    w.iter().fold(0u64, |acc, &x| acc * k as u64 + x as u64)
}

fn decode(k: usize, len: usize, mut code: u64) -> Vec<Symbol> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (code % k as u64) as usize;
        code /= k as u64;
    }
    w
}

impl EmpiricalWordTable {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn count(&self, w: &[Symbol]) -> u64 {
        if w.is_empty() {
            return self.length as u64;
        }
        if w.len() > self.max_len || w.iter().any(|&x| x >= self.n_symbols) {
            return 0;
        }
        self.counts[w.len() - 1]
            .get(&encode(self.n_symbols, w))
            .copied()
            .unwrap_or(0)
    }

    /// Count divided by the number of windows of that length.
    pub fn freq(&self, w: &[Symbol]) -> f64 {
        let windows = (self.length + 1).saturating_sub(w.len());
        if windows == 0 {
            return 0.0;
        }
        self.count(w) as f64 / windows as f64
    }

    /// Total count over all words of one length.
    pub fn total(&self, len: usize) -> u64 {
        if len == 0 {
            return self.length as u64;
        }
        self.counts.get(len - 1).map_or(0, |m| m.values().sum())
    }

    /// Observed words (count > 0), shortest first, then lexicographic.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<Symbol>, u64)> + '_ {
        self.counts.iter().enumerate().flat_map(move |(i, m)| {
            m.iter()
                .map(move |(&code, &c)| (decode(self.n_symbols, i + 1, code), c))
        })
    }
}

pub fn empirical_word_probs(
    symbols: &[Symbol],
    n_symbols: usize,
    max_len: usize,
) -> Result<EmpiricalWordTable> {
    if max_len > symbols.len() {
        return Err(Error::Parameter(format!(
            "max_len {max_len} exceeds sample length {}",
            symbols.len()
        )));
    }
    if n_symbols == 0 || (n_symbols as f64).powi(max_len as i32) > u64::MAX as f64 / 2.0 {
        return Err(Error::Parameter("word codes would overflow".into()));
    }
    if let Some(&x) = symbols.iter().find(|&&x| x >= n_symbols) {
        return Err(Error::SymbolIndex {
            index: x,
            n_symbols,
        });
    }
    let k = n_symbols as u64;
    let mut counts = vec![BTreeMap::new(); max_len];
    let mut dense: Vec<Option<Vec<u64>>> = (1..=max_len)
        .map(|l| {
            let size = k.checked_pow(l as u32).filter(|&s| s <= 1 << 22);
            size.map(|s| vec![0u64; s as usize])
        })
        .collect();
    for t in 0..symbols.len() {
        let mut code = 0u64;
        for l in 1..=max_len.min(symbols.len() - t) {
            code = code * k + symbols[t + l - 1] as u64;
            match &mut dense[l - 1] {
                Some(v) => v[code as usize] += 1,
                None => *counts[l - 1].entry(code).or_insert(0) += 1,
            }
        }
    }
    for (l, d) in dense.into_iter().enumerate() {
        if let Some(v) = d {
            counts[l] = v
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(code, c)| (code as u64, c))
                .collect();
        }
    }
    Ok(EmpiricalWordTable {
        n_symbols,
        length: symbols.len(),
        max_len,
        counts,
    })
}
