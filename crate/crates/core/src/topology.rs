//! Probability-free presentations: labeled graphs, the minimal DFA of the
//! factor language, the Fischer cover and the Krieger states.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph;
use crate::machine::{Alphabet, Edge, Machine, State, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    pub n_vertices: usize,
    pub alphabet: Alphabet,
    /// `(from, symbol, to)`, sorted and deduplicated.
    pub edges: Vec<(usize, Symbol, usize)>,
}

impl LabeledGraph {
    pub fn new(
        n_vertices: usize,
        alphabet: Alphabet,
        mut edges: Vec<(usize, Symbol, usize)>,
    ) -> Result<Self> {
        for &(a, x, b) in &edges {
            for v in [a, b] {
                if v >= n_vertices {
                    return Err(Error::StateIndex {
                        index: v,
                        n_states: n_vertices,
                    });
                }
            }
            if x >= alphabet.len() {
                return Err(Error::SymbolIndex {
                    index: x,
                    n_symbols: alphabet.len(),
                });
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(LabeledGraph {
            n_vertices,
            alphabet,
            edges,
        })
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(a, _, b) in &self.edges {
            if !adj[a].contains(&b) {
                adj[a].push(b);
            }
        }
        adj
    }

    /// Subgraph on `keep` (renumbered in the given order) with every edge
    /// between kept vertices.
    pub fn induced(&self, keep: &[usize]) -> LabeledGraph {
        let mut index = vec![usize::MAX; self.n_vertices];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, _, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, x, b)| (index[a], x, index[b]))
            .collect();
        LabeledGraph::new(keep.len(), self.alphabet.clone(), edges).expect("indices stay in range")
    }

    /// At most one edge per (vertex, symbol).
    pub fn is_right_resolving(&self) -> bool {
        self.edges
            .windows(2)
            .all(|w| (w[0].0, w[0].1) != (w[1].0, w[1].1))
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n_vertices > 0 && graph::strongly_connected_components(&self.adjacency()).len() == 1
    }

    /// Machine with every edge carrying probability 1, for structural
    /// comparisons through the isomorphism module.
    pub fn to_unit_machine(&self) -> Result<Machine> {
        Machine::new(
            self.n_vertices,
            self.alphabet.clone(),
            self.edges.iter().map(|&(a, x, b)| Edge::new(a, x, 1.0, b)),
        )
    }

    /// Machine-file text with probability field 1.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "states {}", self.n_vertices);
        let _ = writeln!(s, "alphabet {}", self.alphabet.names().join(" "));
        for &(a, x, b) in &self.edges {
            let _ = writeln!(s, "edge {a} {} 1 {b}", self.alphabet.name(x));
        }
        s
    }
}

pub fn strip_probabilities(machine: &Machine) -> LabeledGraph {
    let edges = machine
        .edges()
        .iter()
        .filter(|e| e.prob > 0.0)
        .map(|e| (e.from, e.symbol, e.to))
        .collect();
    LabeledGraph::new(machine.n_states(), machine.alphabet().clone(), edges)
        .expect("machine indices are valid")
}

/// Vertices that lie on a bi-infinite walk: reachable from a cycle and
/// reaching a cycle.
pub fn trim_essential(g: &LabeledGraph) -> LabeledGraph {
    let adj = g.adjacency();
    let comps = graph::strongly_connected_components(&adj);
    let on_cycle: Vec<usize> = comps
        .iter()
        .filter(|c| graph::has_cycle(&adj, c))
        .flat_map(|c| c.iter().copied())
        .collect();
    let forward = graph::reachable_from(&adj, on_cycle.iter().copied());
    let backward = graph::reachable_from(&graph::reverse(&adj), on_cycle.iter().copied());
    let keep: Vec<usize> = (0..g.n_vertices)
        .filter(|&v| forward[v] && backward[v])
        .collect();
    g.induced(&keep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    /// `delta[state][symbol]`; `None` is the implicit reject sink.
    pub delta: Vec<Vec<Option<usize>>>,
    pub start: usize,
    /// Graph vertices of one subset that each state stands for.
    pub subsets: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut s = self.start;
        for &x in w {
            match self.delta[s].get(x).copied().flatten() {
                Some(t) => s = t,
                None => return false,
            }
        }
        true
    }

    pub fn graph(&self) -> LabeledGraph {
        let edges = self
            .delta
            .iter()
            .enumerate()
            .flat_map(|(s, row)| {
                row.iter()
                    .enumerate()
                    .filter_map(move |(x, t)| t.map(|t| (s, x, t)))
            })
            .collect();
        LabeledGraph::new(self.n_states(), self.alphabet.clone(), edges)
            .expect("dfa indices are valid")
    }

    /// Number of Moore classes (all states accepting, missing moves reject).
    pub fn moore_classes(&self) -> usize {
        moore_partition(&self.delta)
            .iter()
            .max()
            .map_or(0, |&m| m + 1)
    }

    pub fn to_text(&self) -> String {
        format!("# start {}\n{}", self.start, self.graph().to_text())
    }
}

/// Moore refinement of a partial DFA whose states all accept. Returns block
/// labels numbered by lowest member.
fn moore_partition(delta: &[Vec<Option<usize>>]) -> Vec<usize> {
    let n = delta.len();
    let mut labels = vec![0usize; n];
    let mut n_blocks = usize::from(n > 0);
    loop {
        let mut ids: HashMap<(usize, Vec<Option<usize>>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let key = (
                    labels[s],
                    delta[s].iter().map(|t| t.map(|t| labels[t])).collect(),
                );
                let fresh = ids.len();
                *ids.entry(key).or_insert(fresh)
            })
            .collect();
        let count = ids.len();
        labels = next;
        if count == n_blocks {
            return labels;
        }
        n_blocks = count;
    }
}

/// Subset construction from the all-vertex set over the essential part of
/// `g`, then Moore minimization.
pub fn minimal_dfa(g: &LabeledGraph) -> Dfa {
    let g = trim_essential(g);
    let k = g.alphabet.len();
    let mut succ: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; g.n_vertices];
    for &(a, x, b) in &g.edges {
        succ[a][x].push(b);
    }

    let start: Vec<usize> = (0..g.n_vertices).collect();
    let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut subsets = vec![start.clone()];
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    index.insert(start, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = vec![None; k];
        for (x, slot) in row.iter_mut().enumerate() {
            let mut next: Vec<usize> = subsets[i]
                .iter()
                .flat_map(|&v| succ[v][x].iter().copied())
                .collect();
            next.sort_unstable();
            next.dedup();
            if next.is_empty() {
                continue;
            }
            let id = *index.entry(next.clone()).or_insert_with(|| {
                subsets.push(next);
                queue.push_back(subsets.len() - 1);
                subsets.len() - 1
            });
            *slot = Some(id);
        }
        if delta.len() <= i {
            delta.resize(i + 1, Vec::new());
        }
        delta[i] = row;
    }

    // a graph with no essential vertex presents the empty shift: keep the
    // single start state with no moves
    let labels = moore_partition(&delta);
    let n_blocks = labels.iter().max().map_or(0, |&m| m + 1);
    let mut min_delta = vec![vec![None; k]; n_blocks];
    let mut min_subsets = vec![Vec::new(); n_blocks];
    let mut filled = vec![false; n_blocks];
    for (s, row) in delta.iter().enumerate() {
        let b = labels[s];
        if !filled[b] {
            filled[b] = true;
            min_delta[b] = row.iter().map(|t| t.map(|t| labels[t])).collect();
            min_subsets[b] = subsets[s].clone();
        }
    }
    Dfa {
        alphabet: g.alphabet.clone(),
        delta: min_delta,
        start: labels[0],
        subsets: min_subsets,
    }
}

/// The unique terminal strongly connected component of the DFA.
pub fn fischer_cover(dfa: &Dfa) -> Result<LabeledGraph> {
    fischer_states(dfa).map(|states| dfa.graph().induced(&states))
}

pub fn fischer_states(dfa: &Dfa) -> Result<Vec<State>> {
    let adj = dfa.graph().adjacency();
    let comps = graph::strongly_connected_components(&adj);
    let terminal = graph::terminal_components(&adj, &comps);
    match terminal[..] {
        [c] => Ok(comps[c].clone()),
        _ => Err(Error::NotIrreducibleShift {
            n_terminal: terminal.len(),
        }),
    }
}

/// States that can be reached by arbitrarily long words: those in or
/// downstream of a cycle-containing component.
pub fn krieger_states(dfa: &Dfa) -> Vec<State> {
    let adj = dfa.graph().adjacency();
    let reachable = graph::reachable_from(&adj, [dfa.start]);
    let comps = graph::strongly_connected_components(&adj);
    let cyclic = comps
        .iter()
        .filter(|c| graph::has_cycle(&adj, c) && reachable[c[0]])
        .flat_map(|c| c.iter().copied());
    let downstream = graph::reachable_from(&adj, cyclic);
    (0..dfa.n_states())
        .filter(|&s| downstream[s] && reachable[s])
        .collect()
}

pub fn krieger_cover(dfa: &Dfa) -> LabeledGraph {
    dfa.graph().induced(&krieger_states(dfa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::isomorphism::are_isomorphic;
    use crate::machine::words_of_length;

    fn graph(n: usize, k: usize, edges: &[(usize, usize, usize)]) -> LabeledGraph {
        LabeledGraph::new(n, Alphabet::numbered(k), edges.to_vec()).unwrap()
    }

    fn label_isomorphic(a: &LabeledGraph, b: &LabeledGraph) -> bool {
        are_isomorphic(
            &a.to_unit_machine().unwrap(),
            &b.to_unit_machine().unwrap(),
            0.0,
        )
        .unwrap()
        .is_some()
    }

    #[test]
    fn even_strip() {
        let g = strip_probabilities(&examples::even(0.5).unwrap());
        assert_eq!(g.edges, vec![(0, 0, 0), (0, 1, 1), (1, 1, 0)]);
        assert_eq!(trim_essential(&g), g);
    }

    #[test]
    fn trimming() {
        // 0 -> 1 -> 2 <-> 3, 3 -> 4 dead end
        let g = graph(
            5,
            1,
            &[(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 2), (3, 0, 4)],
        );
        let t = trim_essential(&g);
        assert_eq!(t.n_vertices, 2);
        assert_eq!(t.edges, vec![(0, 0, 1), (1, 0, 0)]);
    }

    #[test]
    fn even_dfa() {
        let dfa = minimal_dfa(&strip_probabilities(&examples::even(0.5).unwrap()));
        assert_eq!(dfa.n_states(), 3);
        assert_eq!(dfa.subsets, vec![vec![0, 1], vec![0], vec![1]]);
        assert!(!dfa.accepts(&[0, 1, 0]));
        assert!(dfa.accepts(&[1, 1, 0, 1]));
        assert_eq!(dfa.moore_classes(), 3);
        assert_eq!(krieger_states(&dfa), vec![0, 1, 2]);
        let fischer = fischer_cover(&dfa).unwrap();
        assert!(label_isomorphic(
            &fischer,
            &strip_probabilities(&examples::even(0.5).unwrap())
        ));
    }

    #[test]
    fn abc_is_the_full_shift() {
        let dfa = minimal_dfa(&strip_probabilities(&examples::abc(0.4, 0.6).unwrap()));
        assert_eq!(dfa.n_states(), 1);
        let f = fischer_cover(&dfa).unwrap();
        assert_eq!(f.n_vertices, 1);
        assert_eq!(f.edges.len(), 2);
    }

    #[test]
    fn full_shift_is_fixed() {
        let g = graph(1, 2, &[(0, 0, 0), (0, 1, 0)]);
        let dfa = minimal_dfa(&g);
        assert_eq!(dfa.n_states(), 1);
        assert_eq!(fischer_cover(&dfa).unwrap(), g);
        assert_eq!(krieger_states(&dfa), vec![0]);
    }

    #[test]
    fn transient_start_is_not_krieger() {
        // start reaches a self-loop state by one symbol and never returns
        let dfa = Dfa {
            alphabet: Alphabet::binary(),
            delta: vec![vec![Some(1), None], vec![Some(1), None]],
            start: 0,
            subsets: vec![vec![0], vec![1]],
        };
        assert_eq!(krieger_states(&dfa), vec![1]);
    }

    #[test]
    fn two_terminal_components() {
        let dfa = Dfa {
            alphabet: Alphabet::binary(),
            delta: vec![
                vec![Some(1), Some(2)],
                vec![Some(1), None],
                vec![None, Some(2)],
            ],
            start: 0,
            subsets: vec![vec![0, 1], vec![0], vec![1]],
        };
        assert_eq!(
            fischer_cover(&dfa),
            Err(Error::NotIrreducibleShift { n_terminal: 2 })
        );
    }

    #[test]
    fn languages_match_word_probabilities() {
        for m in [
            examples::even(0.5).unwrap(),
            examples::abc(0.4, 0.6).unwrap(),
            examples::np2(0.5).unwrap(),
        ] {
            let dfa = minimal_dfa(&strip_probabilities(&m));
            for len in 0..=8 {
                for w in words_of_length(2, len) {
                    assert_eq!(
                        dfa.accepts(&w),
                        m.word_prob_stationary(&w).unwrap() > 0.0,
                        "{w:?}"
                    );
                }
            }
        }
    }
}
