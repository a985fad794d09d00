use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use crate::axioms;
use crate::error::{Error, Result};
use crate::graph;
use crate::machine::{words_of_length, Edge, Machine, Symbol, EPS_STOCH};
use crate::mixed_state::{normalize_snapped, sync_quantities, BeliefState};

use super::{Provenance, ReconstructedMachine};

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticOptions {
    /// Longest word followed from `π`.
    pub depth: usize,
    /// Longest probe word; `None` means `2N + 2`.
    pub l_fut: Option<usize>,
    /// Beliefs whose futures agree within this are one class.
    pub tol: f64,
    pub class_cap: usize,
    /// Belief entries below this are zeroed, so that beliefs which only
    /// approach a vertex asymptotically still land on it.
    pub snap: f64,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        AnalyticOptions {
            depth: 256,
            l_fut: None,
            tol: 1e-9,
            class_cap: 4096,
            snap: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasEntry {
    pub belief: Vec<f64>,
    /// Word that first reached this class.
    pub word: Vec<Symbol>,
    /// Probabilities of the probe words.
    pub signature: Vec<f64>,
    /// Per symbol: `(P(x | class), successor class)`.
    pub successors: Vec<Option<(f64, usize)>>,
    pub expanded: bool,
    /// How many discovered beliefs fell into this class.
    pub merged: usize,
}

/// Belief classes discovered from `π`.
#[derive(Clone, Debug)]
pub struct BeliefAtlas {
    /// Words whose probabilities pin down a belief's whole future.
    pub probes: Vec<Vec<Symbol>>,
    pub entries: Vec<AtlasEntry>,
    /// Classes of the closed component, once found.
    pub recurrent: Option<Vec<usize>>,
    pub deepest: usize,
}

#[derive(Clone, Copy, PartialEq)]
struct Doubt(f64);

impl Eq for Doubt {}

impl PartialOrd for Doubt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Doubt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Words `w` (grown by prepending symbols) whose vectors `T^(w)·1` span the
/// space of future-probability functionals, chosen greedily shortest first.
fn probe_basis(machine: &Machine, max_len: usize) -> (Vec<Vec<Symbol>>, Vec<Vec<f64>>) {
    let n = machine.n_states();
    let k = machine.n_symbols();
    let mut words = Vec::new();
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    let mut queue = VecDeque::from([(Vec::new(), vec![1.0; n])]);
    while let Some((w, v)) = queue.pop_front() {
        if ortho.len() == n {
            break;
        }
        let norm = dot(&v, &v).sqrt();
        if norm == 0.0 {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &ortho {
                let c = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
            }
        }
        let rn = dot(&r, &r).sqrt();
        if rn <= 1e-10 * norm {
            continue;
        }
        ortho.push(r.into_iter().map(|a| a / rn).collect());
        if w.len() < max_len {
            for x in 0..k {
                let mut u = vec![0.0; n];
                for e in machine.edges().iter().filter(|e| e.symbol == x) {
                    u[e.from] += e.prob * v[e.to];
                }
                let mut xw = Vec::with_capacity(w.len() + 1);
                xw.push(x);
                xw.extend_from_slice(&w);
                queue.push_back((xw, u));
            }
        }
        words.push(w);
        vectors.push(v);
    }
    (words, vectors)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl BeliefAtlas {
    /// Explore from `π`, least doubtful belief first, until a closed set of
    /// fully expanded classes appears.
    pub fn explore(machine: &Machine, opts: &AnalyticOptions) -> Result<BeliefAtlas> {
        let k = machine.n_symbols();
        let l_fut = opts.l_fut.unwrap_or(2 * machine.n_states() + 2);
        let (probes, vectors) = probe_basis(machine, l_fut);
        let signature = |phi: &[f64]| -> Vec<f64> { vectors.iter().map(|v| dot(phi, v)).collect() };

        let mut pi = machine.stationary_pi()?.to_vec();
        normalize_snapped(&mut pi, opts.snap);
        let mut atlas = BeliefAtlas {
            probes,
            entries: Vec::new(),
            recurrent: None,
            deepest: 0,
        };
        let mut heap = BinaryHeap::new();
        let push = |atlas: &mut BeliefAtlas,
                    heap: &mut BinaryHeap<(Reverse<Doubt>, Reverse<usize>)>,
                    belief: Vec<f64>,
                    word: Vec<Symbol>| {
            let sig = signature(&belief);
            if let Some(i) = atlas.find(&sig, opts.tol) {
                atlas.entries[i].merged += 1;
                return Ok(i);
            }
            if atlas.entries.len() >= opts.class_cap {
                return Err(Error::ClassExplosion {
                    cap: opts.class_cap,
                });
            }
            let doubt = sync_quantities(&BeliefState {
                phi: belief.clone(),
            })
            .doubt;
            let id = atlas.entries.len();
            atlas.deepest = atlas.deepest.max(word.len());
            if word.len() < opts.depth {
                heap.push((Reverse(Doubt(doubt)), Reverse(id)));
            }
            atlas.entries.push(AtlasEntry {
                belief,
                word,
                signature: sig,
                successors: vec![None; k],
                expanded: false,
                merged: 1,
            });
            Ok(id)
        };
        push(&mut atlas, &mut heap, pi, Vec::new())?;
        // Pasts of a unifilar machine synchronize almost surely, so every
        // recurrent history class is already one of its vertices.
        if machine.is_unifilar() {
            for i in 0..machine.n_states() {
                push(
                    &mut atlas,
                    &mut heap,
                    BeliefState::vertex(machine.n_states(), i).phi,
                    Vec::new(),
                )?;
            }
        }

        while let Some((_, Reverse(id))) = heap.pop() {
            let belief = atlas.entries[id].belief.clone();
            let word = atlas.entries[id].word.clone();
            for x in 0..k {
                let mut next = machine.step(&belief, x);
                let p = normalize_snapped(&mut next, opts.snap);
                if p <= 0.0 {
                    continue;
                }
                let mut w = word.clone();
                w.push(x);
                let j = push(&mut atlas, &mut heap, next, w)?;
                atlas.entries[id].successors[x] = Some((p, j));
            }
            atlas.entries[id].expanded = true;
            if let Some(closed) = atlas.closed_component(id) {
                atlas.recurrent = Some(closed);
                return Ok(atlas);
            }
        }
        Ok(atlas)
    }

    fn find(&self, sig: &[f64], tol: f64) -> Option<usize> {
        self.entries.iter().position(|e| {
            e.signature
                .iter()
                .zip(sig)
                .all(|(a, b)| (a - b).abs() <= tol)
        })
    }

    /// If everything reachable from `from` is expanded, the terminal
    /// component of that closed set.
    fn closed_component(&self, from: usize) -> Option<Vec<usize>> {
        let mut local = vec![usize::MAX; self.entries.len()];
        let mut members = vec![from];
        local[from] = 0;
        let mut i = 0;
        while i < members.len() {
            let e = &self.entries[members[i]];
            if !e.expanded {
                return None;
            }
            for &(_, j) in e.successors.iter().flatten() {
                if local[j] == usize::MAX {
                    local[j] = members.len();
                    members.push(j);
                }
            }
            i += 1;
        }
        let adj: Vec<Vec<usize>> = members
            .iter()
            .map(|&m| {
                self.entries[m]
                    .successors
                    .iter()
                    .flatten()
                    .map(|&(_, j)| local[j])
                    .collect()
            })
            .collect();
        let comps = graph::strongly_connected_components(&adj);
        let terminal = graph::terminal_components(&adj, &comps);
        let mut closed: Vec<usize> = comps[terminal[0]].iter().map(|&l| members[l]).collect();
        closed.sort_unstable();
        Some(closed)
    }

    /// `P(w | class)` for every word of length `len`, in lexicographic order.
    pub fn future_distribution(&self, machine: &Machine, class: usize, len: usize) -> Vec<f64> {
        let phi = &self.entries[class].belief;
        words_of_length(machine.n_symbols(), len)
            .map(|w| machine.propagate(phi, &w).iter().sum())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticReport {
    pub depth: usize,
    pub l_fut: usize,
    pub tol: f64,
    pub snap: f64,
    /// Vertex beliefs were seeded next to `π`.
    pub vertex_seeds: bool,
    pub n_probes: usize,
    pub classes_found: usize,
    pub classes_expanded: usize,
    pub deepest: usize,
    /// Word first reaching each output state.
    pub class_words: Vec<Vec<Symbol>>,
    /// Discovered beliefs merged into each output state.
    pub class_sizes: Vec<usize>,
    pub transient_dropped: usize,
}

impl fmt::Display for AnalyticReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: analytic")?;
        writeln!(
            f,
            "depth limit: {}  future length: {}  tol: {:e}  snap: {:e}",
            self.depth, self.l_fut, self.tol, self.snap
        )?;
        writeln!(
            f,
            "classes found: {}  expanded: {}  deepest word: {}  probe words: {}",
            self.classes_found, self.classes_expanded, self.deepest, self.n_probes
        )?;
        writeln!(f, "transient classes dropped: {}", self.transient_dropped)?;
        if self.vertex_seeds {
            writeln!(f, "seeded with vertex beliefs")?;
        }
        for (i, (w, size)) in self.class_words.iter().zip(&self.class_sizes).enumerate() {
            let w: String = w
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(
                f,
                "state {i}: beliefs merged {size}, first reached by [{w}]"
            )?;
        }
        Ok(())
    }
}

pub fn reconstruct_analytic(
    machine: &Machine,
    depth: usize,
    l_fut: usize,
    tol: f64,
) -> Result<ReconstructedMachine> {
    let opts = AnalyticOptions {
        depth,
        l_fut: Some(l_fut),
        tol,
        ..AnalyticOptions::default()
    };
    reconstruct_analytic_with(machine, &opts)
}

pub fn reconstruct_analytic_with(
    machine: &Machine,
    opts: &AnalyticOptions,
) -> Result<ReconstructedMachine> {
    if let Some(v) = machine.validate(EPS_STOCH).violations.first() {
        return Err(Error::Parameter(format!("invalid machine: {v}")));
    }
    let irr = axioms::is_irreducible(machine);
    if !irr.irreducible {
        return Err(Error::NotIrreducible {
            n_components: irr.components.len(),
        });
    }
    if opts.tol.is_nan() || opts.tol < 0.0 || !(0.0..0.5).contains(&opts.snap) {
        return Err(Error::Parameter(
            "tolerances must be nonnegative and snap below 1/2".into(),
        ));
    }
    let atlas = BeliefAtlas::explore(machine, opts)?;
    let recurrent = atlas
        .recurrent
        .clone()
        .ok_or(Error::NoRecurrentClass { depth: opts.depth })?;

    let mut index = vec![usize::MAX; atlas.entries.len()];
    for (i, &c) in recurrent.iter().enumerate() {
        index[c] = i;
    }
    let mut edges = Vec::new();
    for (i, &c) in recurrent.iter().enumerate() {
        for (x, succ) in atlas.entries[c].successors.iter().enumerate() {
            if let Some((p, j)) = *succ {
                edges.push(Edge::new(i, x, p, index[j]));
            }
        }
    }
    let out = Machine::new(recurrent.len(), machine.alphabet().clone(), edges)?;
    let class_probability = out.stationary_distribution()?.pi;
    let report = AnalyticReport {
        depth: opts.depth,
        l_fut: opts.l_fut.unwrap_or(2 * machine.n_states() + 2),
        tol: opts.tol,
        snap: opts.snap,
        vertex_seeds: machine.is_unifilar(),
        n_probes: atlas.probes.len(),
        classes_found: atlas.entries.len(),
        classes_expanded: atlas.entries.iter().filter(|e| e.expanded).count(),
        deepest: atlas.deepest,
        class_words: recurrent
            .iter()
            .map(|&c| atlas.entries[c].word.clone())
            .collect(),
        class_sizes: recurrent.iter().map(|&c| atlas.entries[c].merged).collect(),
        transient_dropped: atlas.entries.len() - recurrent.len(),
    };
    Ok(ReconstructedMachine {
        machine: out,
        class_probability,
        provenance: Provenance::Analytic(report),
    })
}

/// `q_n = P(0 | 0 1^n)` for the simple nonunifilar source.
pub fn sns_belief_closed_form(p: f64, q: f64, n: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!(
            "p = {p}, q = {q} must lie in (0,1)"
        )));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let s: f64 = (0..n)
        .map(|m| p.powi(m as i32) * q.powi((n - 1 - m) as i32))
        .sum();
    Ok((1.0 - q) * (1.0 - p) * s / (p.powi(n as i32) + (1.0 - p) * s))
}
