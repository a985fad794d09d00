//! Edge-emitting hidden Markov models stored as symbol-labeled transition
//! matrices, together with the word-probability machinery built on them.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph;
use crate::linalg::{self, Matrix};

pub type State = usize;
pub type Symbol = usize;

/// Tolerance on row sums of the overall transition matrix.
pub const EPS_STOCH: f64 = 1e-9;
/// Residual tolerance for the stationary distribution.
pub const EPS_SOLVE: f64 = 1e-12;
/// Largest state count solved by dense elimination; above it we iterate.
pub const DENSE_SOLVE_LIMIT: usize = 64;
const POWER_MAX_ITER: usize = 1_000_000;

/// Ordered set of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Parameter("alphabet must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(Error::Parameter(format!("bad symbol name {n:?}")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::Parameter(format!("duplicate symbol {n:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// `{0, 1}`.
    pub fn binary() -> Self {
        Alphabet {
            names: vec!["0".into(), "1".into()],
        }
    }

    /// Symbols named `0`, `1`, ..., `k-1`.
    pub fn numbered(k: usize) -> Self {
        assert!(k > 0, "alphabet must be nonempty");
        Alphabet {
            names: (0..k).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, x: Symbol) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name)
    }

    /// Parse a word written as concatenated single-character names, or as
    /// whitespace-separated names when any name is longer than one character.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        let text = text.trim();
        let lookup = |tok: &str| {
            self.index_of(tok)
                .ok_or_else(|| Error::Parameter(format!("unknown symbol {tok:?}")))
        };
        if text.split_whitespace().count() > 1 || self.names.iter().any(|n| n.chars().count() > 1) {
            text.split_whitespace().map(lookup).collect()
        } else {
            text.chars()
                .map(|c| lookup(c.encode_utf8(&mut [0; 4])))
                .collect()
        }
    }

    pub fn format_word(&self, w: &[Symbol]) -> String {
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter()
            .map(|&x| self.name(x))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// One positive-probability labeled transition `from --symbol/prob--> to`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub from: State,
    pub symbol: Symbol,
    pub prob: f64,
    pub to: State,
}

impl Edge {
    pub fn new(from: State, symbol: Symbol, prob: f64, to: State) -> Self {
        Edge {
            from,
            symbol,
            prob,
            to,
        }
    }
}

/// An edge-emitting HMM: `N` states and one `N×N` matrix `T^(x)` per symbol.
///
/// Immutable once built. Zero-probability edges are dropped and repeated
/// `(from, symbol, to)` triples are summed; edge order is otherwise kept, and
/// it is the order used when sampling.
#[derive(Clone)]
pub struct Machine {
    n_states: usize,
    alphabet: Alphabet,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    matrices: Vec<Matrix>,
    stationary: OnceLock<std::result::Result<Vec<f64>, Error>>,
    delta: OnceLock<DeltaTable>,
}

impl PartialEq for Machine {
    fn eq(&self, other: &Self) -> bool {
        self.n_states == other.n_states
            && self.alphabet == other.alphabet
            && self.edges == other.edges
    }
}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Machine")
            .field("n_states", &self.n_states)
            .field("alphabet", &self.alphabet.names)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Transition table, or the first `(state, symbol)` with several edges.
type DeltaTable = std::result::Result<Vec<Option<State>>, (State, Symbol)>;

/// One problem found by [`Machine::validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Negative {
        from: State,
        symbol: Symbol,
        to: State,
        prob: f64,
    },
    RowSum {
        state: State,
        sum: f64,
    },
    UselessSymbol {
        symbol: Symbol,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative {
                from,
                symbol,
                to,
                prob,
            } => {
                write!(
                    f,
                    "negative probability {prob} on edge {from} -{symbol}-> {to}"
                )
            }
            Violation::RowSum { state, sum } => write!(f, "row {state} sums to {sum}"),
            Violation::UselessSymbol { symbol } => write!(f, "symbol {symbol} labels no edge"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `π` with `πT = π`, `Σπ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryDistribution {
    pub pi: Vec<f64>,
}

impl StationaryDistribution {
    /// `‖πT − π‖_∞` against the machine it came from.
    pub fn residual(&self, machine: &Machine) -> f64 {
        let next = machine.overall_matrix().left_mul(&self.pi);
        linalg::max_abs_diff(&next, &self.pi)
    }
}

impl Machine {
    pub fn new(
        n_states: usize,
        alphabet: Alphabet,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        if n_states == 0 {
            return Err(Error::Parameter("machine needs at least one state".into()));
        }
        let k = alphabet.len();
        let mut kept: Vec<Edge> = Vec::new();
        for e in edges {
            if e.from >= n_states {
                return Err(Error::StateIndex {
                    index: e.from,
                    n_states,
                });
            }
            if e.to >= n_states {
                return Err(Error::StateIndex {
                    index: e.to,
                    n_states,
                });
            }
            if e.symbol >= k {
                return Err(Error::SymbolIndex {
                    index: e.symbol,
                    n_symbols: k,
                });
            }
            if !e.prob.is_finite() {
                return Err(Error::Parameter(format!(
                    "non-finite probability on edge {e:?}"
                )));
            }
            if e.prob == 0.0 {
                continue;
            }
            match kept
                .iter_mut()
                .find(|d| d.from == e.from && d.symbol == e.symbol && d.to == e.to)
            {
                Some(d) => d.prob += e.prob,
                None => kept.push(e),
            }
        }
        let mut matrices = vec![Matrix::zeros(n_states); k];
        let mut out = vec![Vec::new(); n_states];
        for (idx, e) in kept.iter().enumerate() {
            matrices[e.symbol][(e.from, e.to)] = e.prob;
            out[e.from].push(idx);
        }
        Ok(Machine {
            n_states,
            alphabet,
            edges: kept,
            out,
            matrices,
            stationary: OnceLock::new(),
            delta: OnceLock::new(),
        })
    }

    /// Build from per-symbol matrices given as rows.
    pub fn from_matrices(alphabet: Alphabet, matrices: &[Vec<Vec<f64>>]) -> Result<Self> {
        if matrices.len() != alphabet.len() {
            return Err(Error::Parameter("one matrix per symbol required".into()));
        }
        let n = matrices.first().map_or(0, Vec::len);
        let mut edges = Vec::new();
        for i in 0..n {
            for (x, m) in matrices.iter().enumerate() {
                if m.len() != n || m[i].len() != n {
                    return Err(Error::Parameter(
                        "matrices must be square and equally sized".into(),
                    ));
                }
                for (j, &p) in m[i].iter().enumerate() {
                    edges.push(Edge::new(i, x, p, j));
                }
            }
        }
        Machine::new(n, alphabet, edges)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Outgoing edges of `state` in insertion order.
    pub fn outgoing(&self, state: State) -> impl Iterator<Item = &Edge> + '_ {
        self.out[state].iter().map(move |&i| &self.edges[i])
    }

    /// `T^(x)`.
    pub fn symbol_matrix(&self, x: Symbol) -> &Matrix {
        &self.matrices[x]
    }

    pub fn check_state(&self, i: State) -> Result<()> {
        if i < self.n_states {
            Ok(())
        } else {
            Err(Error::StateIndex {
                index: i,
                n_states: self.n_states,
            })
        }
    }

    pub fn check_word(&self, w: &[Symbol]) -> Result<()> {
        let k = self.n_symbols();
        match w.iter().find(|&&x| x >= k) {
            Some(&x) => Err(Error::SymbolIndex {
                index: x,
                n_symbols: k,
            }),
            None => Ok(()),
        }
    }

    pub fn validate(&self, tolerance: f64) -> ValidationReport {
        let mut violations = Vec::new();
        for e in &self.edges {
            if e.prob < 0.0 {
                violations.push(Violation::Negative {
                    from: e.from,
                    symbol: e.symbol,
                    to: e.to,
                    prob: e.prob,
                });
            }
        }
        for i in 0..self.n_states {
            let sum: f64 = self.outgoing(i).map(|e| e.prob).sum();
            if (sum - 1.0).abs() > tolerance {
                violations.push(Violation::RowSum { state: i, sum });
            }
        }
        for x in 0..self.n_symbols() {
            if !self.edges.iter().any(|e| e.symbol == x && e.prob > 0.0) {
                violations.push(Violation::UselessSymbol { symbol: x });
            }
        }
        ValidationReport { violations }
    }

    /// `T = Σ_x T^(x)`.
    pub fn overall_matrix(&self) -> Matrix {
        let mut t = Matrix::zeros(self.n_states);
        for e in &self.edges {
            t[(e.from, e.to)] += e.prob;
        }
        t
    }

    /// `T^(w) = T^(w_0) ⋯ T^(w_{l-1})`.
    pub fn word_matrix(&self, w: &[Symbol]) -> Result<Matrix> {
        let (&first, rest) = w.split_first().ok_or(Error::EmptyWord)?;
        self.check_word(w)?;
        let mut m = self.matrices[first].clone();
        for &x in rest {
            m = &m * &self.matrices[x];
        }
        Ok(m)
    }

    /// Row vector `v·T^(x)`.
    pub fn step(&self, v: &[f64], x: Symbol) -> Vec<f64> {
        let mut out = vec![0.0; self.n_states];
        for e in self.edges.iter().filter(|e| e.symbol == x) {
            out[e.to] += v[e.from] * e.prob;
        }
        out
    }

    /// Row vector `v·T^(w)`, folded one symbol at a time.
    pub fn propagate(&self, v: &[f64], w: &[Symbol]) -> Vec<f64> {
        w.iter().fold(v.to_vec(), |acc, &x| self.step(&acc, x))
    }

    /// `‖ρ T^(w)‖₁` for an arbitrary initial distribution `ρ`.
    pub fn word_prob_from(&self, rho: &[f64], w: &[Symbol]) -> Result<f64> {
        self.check_word(w)?;
        if rho.len() != self.n_states {
            return Err(Error::Distribution(format!(
                "length {} does not match {} states",
                rho.len(),
                self.n_states
            )));
        }
        Ok(self.propagate(rho, w).iter().sum())
    }

    /// `P_σi(w) = ‖e_i T^(w)‖₁`. The empty word has probability 1.
    pub fn word_prob_from_state(&self, i: State, w: &[Symbol]) -> Result<f64> {
        self.check_state(i)?;
        let mut e = vec![0.0; self.n_states];
        e[i] = 1.0;
        self.word_prob_from(&e, w)
    }

    /// `ℙ(w) = ‖π T^(w)‖₁`.
    pub fn word_prob_stationary(&self, w: &[Symbol]) -> Result<f64> {
        let pi = self.stationary_pi()?;
        self.word_prob_from(pi, w)
    }

    /// `P_σi(x)`.
    pub fn symbol_prob(&self, i: State, x: Symbol) -> f64 {
        self.outgoing(i)
            .filter(|e| e.symbol == x)
            .map(|e| e.prob)
            .sum()
    }

    /// Next-symbol distribution of a state.
    pub fn symbol_probs(&self, i: State) -> Vec<f64> {
        let mut p = vec![0.0; self.n_symbols()];
        for e in self.outgoing(i) {
            p[e.symbol] += e.prob;
        }
        p
    }

    /// Successor lists of the positive-edge digraph (deduplicated).
    pub fn adjacency(&self) -> Vec<Vec<State>> {
        let mut adj = vec![Vec::new(); self.n_states];
        for e in self.edges.iter().filter(|e| e.prob > 0.0) {
            if !adj[e.from].contains(&e.to) {
                adj[e.from].push(e.to);
            }
        }
        adj
    }

    pub(crate) fn strongly_connected_components(&self) -> Vec<Vec<State>> {
        graph::strongly_connected_components(&self.adjacency())
    }

    pub fn stationary_distribution(&self) -> Result<StationaryDistribution> {
        self.stationary_pi()
            .map(|pi| StationaryDistribution { pi: pi.to_vec() })
    }

    pub(crate) fn stationary_pi(&self) -> Result<&[f64]> {
        self.stationary
            .get_or_init(|| {
                let comps = self.strongly_connected_components();
                if comps.len() != 1 {
                    return Err(Error::NotIrreducible {
                        n_components: comps.len(),
                    });
                }
                let t = self.overall_matrix();
                if self.n_states <= DENSE_SOLVE_LIMIT {
                    if let Some(pi) = linalg::stationary_dense(&t) {
                        return Ok(pi);
                    }
                }
                Ok(linalg::stationary_power(&t, EPS_SOLVE, POWER_MAX_ITER))
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn delta_table(&self) -> Result<&[Option<State>]> {
        self.delta
            .get_or_init(|| {
                let k = self.n_symbols();
                let mut table = vec![None; self.n_states * k];
                for e in self.edges.iter().filter(|e| e.prob > 0.0) {
                    let slot = &mut table[e.from * k + e.symbol];
                    if slot.is_some() {
                        return Err((e.from, e.symbol));
                    }
                    *slot = Some(e.to);
                }
                Ok(table)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(|&(state, symbol)| Error::NotUnifilar { state, symbol })
    }

    pub fn is_unifilar(&self) -> bool {
        self.delta_table().is_ok()
    }

    /// `δ(σ_i, x)`: the unique successor on `x`, or `None` when `σ_i` cannot
    /// emit `x`.
    pub fn transition_function(&self, i: State, x: Symbol) -> Result<Option<State>> {
        self.check_state(i)?;
        self.check_word(&[x])?;
        let table = self.delta_table()?;
        Ok(table[i * self.n_symbols() + x])
    }

    /// Word probability by stepping through `δ`. Returns the product of the
    /// per-step symbol probabilities and the visited states `s_1..s_l`, or
    /// `(0, None)` as soon as a symbol cannot be emitted.
    pub fn unifilar_word_prob(&self, i: State, w: &[Symbol]) -> Result<(f64, Option<Vec<State>>)> {
        self.check_state(i)?;
        self.check_word(w)?;
        let table = self.delta_table()?;
        let k = self.n_symbols();
        let mut prob = 1.0;
        let mut state = i;
        let mut path = Vec::with_capacity(w.len());
        for &x in w {
            match table[state * k + x] {
                Some(next) => {
                    prob *= self.symbol_prob(state, x);
                    state = next;
                    path.push(state);
                }
                None => return Ok((0.0, None)),
            }
        }
        Ok((prob, Some(path)))
    }

    /// Same machine with states renumbered: old state `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[State]) -> Result<Machine> {
        if perm.len() != self.n_states {
            return Err(Error::Parameter("permutation length mismatch".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.from], e.symbol, e.prob, perm[e.to]));
        Machine::new(self.n_states, self.alphabet.clone(), edges)
    }
}

/// All words of length `len` over `k` symbols in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Vec<Symbol>> {
    let total = k.checked_pow(len as u32).expect("word space too large");
    (0..total).map(move |mut code| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn even() -> Machine {
        examples::even(0.5).unwrap()
    }

    fn close(a: &Matrix, rows: &[Vec<f64>]) -> bool {
        a.max_abs_diff(&Matrix::from_rows(rows)) < 1e-15
    }

    #[test]
    fn even_matrices_validate() {
        let m = even();
        assert!(m.validate(EPS_STOCH).accepted());
        assert!(close(m.symbol_matrix(0), &[vec![0.5, 0.0], vec![0.0, 0.0]]));
        assert!(close(m.symbol_matrix(1), &[vec![0.0, 0.5], vec![1.0, 0.0]]));
    }

    #[test]
    fn short_row_is_rejected() {
        let m = Machine::new(
            1,
            Alphabet::binary(),
            [Edge::new(0, 0, 0.4, 0), Edge::new(0, 1, 0.5, 0)],
        )
        .unwrap();
        let r = m.validate(EPS_STOCH);
        assert!(!r.accepted());
        assert!(matches!(
            r.violations[0],
            Violation::RowSum { state: 0, .. }
        ));
    }

    #[test]
    fn useless_symbol_is_rejected() {
        let m = Machine::new(1, Alphabet::binary(), [Edge::new(0, 0, 1.0, 0)]).unwrap();
        assert_eq!(
            m.validate(EPS_STOCH).violations,
            vec![Violation::UselessSymbol { symbol: 1 }]
        );
    }

    #[test]
    fn negative_entries_are_reported() {
        let m = Machine::new(
            1,
            Alphabet::binary(),
            [Edge::new(0, 0, 1.5, 0), Edge::new(0, 1, -0.5, 0)],
        )
        .unwrap();
        let r = m.validate(EPS_STOCH);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Negative { .. })));
    }

    #[test]
    fn overall_matrices() {
        assert!(close(
            &even().overall_matrix(),
            &[vec![0.5, 0.5], vec![1.0, 0.0]]
        ));
        let abc = examples::abc(0.4, 0.6).unwrap();
        assert!(close(
            &abc.overall_matrix(),
            &[vec![0.0, 1.0], vec![1.0, 0.0]]
        ));
        let coin = Machine::new(1, Alphabet::numbered(1), [Edge::new(0, 0, 1.0, 0)]).unwrap();
        assert!(close(&coin.overall_matrix(), &[vec![1.0]]));
    }

    #[test]
    fn word_matrices() {
        let m = even();
        assert!(close(
            &m.word_matrix(&[1, 1]).unwrap(),
            &[vec![0.5, 0.0], vec![0.0, 0.5]]
        ));
        assert!(close(
            &m.word_matrix(&[1, 0]).unwrap(),
            &[vec![0.0, 0.0], vec![0.5, 0.0]]
        ));
        assert!(close(
            &m.word_matrix(&[0]).unwrap(),
            &m.symbol_matrix(0).rows()
        ));
        assert_eq!(m.word_matrix(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn stationary_distributions() {
        let pi = even().stationary_distribution().unwrap().pi;
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-15 && (pi[1] - 1.0 / 3.0).abs() < 1e-15);
        let pi = examples::abc(0.3, 0.8)
            .unwrap()
            .stationary_distribution()
            .unwrap()
            .pi;
        assert!((pi[0] - 0.5).abs() < 1e-15);
        let coin = Machine::new(
            1,
            Alphabet::binary(),
            [Edge::new(0, 0, 0.5, 0), Edge::new(0, 1, 0.5, 0)],
        )
        .unwrap();
        assert_eq!(coin.stationary_distribution().unwrap().pi, vec![1.0]);
    }

    #[test]
    fn reducible_machine_has_no_unique_stationary_distribution() {
        let m = Machine::new(
            2,
            Alphabet::numbered(1),
            [Edge::new(0, 0, 1.0, 0), Edge::new(1, 0, 1.0, 1)],
        )
        .unwrap();
        assert_eq!(
            m.stationary_distribution(),
            Err(Error::NotIrreducible { n_components: 2 })
        );
        assert!(m.word_prob_stationary(&[0]).is_err());
    }

    #[test]
    fn word_probabilities() {
        let m = even();
        assert_eq!(m.word_prob_from_state(1, &[0]).unwrap(), 0.0);
        assert!((m.word_prob_from_state(0, &[1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.word_prob_from_state(0, &[]).unwrap(), 1.0);
        assert!(matches!(
            m.word_prob_from_state(2, &[0]),
            Err(Error::StateIndex { .. })
        ));
        assert!((m.word_prob_stationary(&[0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((m.word_prob_stationary(&[1, 1]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(m.word_prob_stationary(&[0, 1, 0]).unwrap(), 0.0);
        // "101" is legal: the left 1 can close an even block
        assert!((m.word_prob_stationary(&[1, 0, 1]).unwrap() - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn unifilar_paths() {
        let m = even();
        let (p, path) = m.unifilar_word_prob(0, &[1, 1, 0]).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
        assert_eq!(path, Some(vec![1, 0, 0]));
        assert_eq!(m.unifilar_word_prob(1, &[0]).unwrap(), (0.0, None));
        let sns = examples::sns(0.5, 0.5).unwrap();
        assert!(matches!(
            sns.unifilar_word_prob(0, &[1]),
            Err(Error::NotUnifilar { .. })
        ));
    }

    #[test]
    fn transition_function_follows_edges() {
        let m = even();
        assert_eq!(m.transition_function(0, 1).unwrap(), Some(1));
        assert_eq!(m.transition_function(1, 0).unwrap(), None);
        assert_eq!(m.transition_function(1, 1).unwrap(), Some(0));
    }

    #[test]
    fn duplicate_edges_merge_and_zero_edges_drop() {
        let m = Machine::new(
            1,
            Alphabet::binary(),
            [
                Edge::new(0, 0, 0.25, 0),
                Edge::new(0, 0, 0.25, 0),
                Edge::new(0, 1, 0.5, 0),
                Edge::new(0, 1, 0.0, 0),
            ],
        )
        .unwrap();
        assert_eq!(m.edges().len(), 2);
        assert_eq!(m.symbol_prob(0, 0), 0.5);
    }

    #[test]
    fn words_enumerate_lexicographically() {
        let ws: Vec<_> = words_of_length(2, 2).collect();
        assert_eq!(ws, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(
            words_of_length(3, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
    }
}
