use std::collections::HashMap;
use std::fmt;

use crate::axioms;
use crate::error::{Error, Result};
use crate::graph;
use crate::machine::{Alphabet, Edge, Machine, Symbol};
use crate::minimize;
use crate::par;

use super::{Provenance, ReconstructedMachine};

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalOptions {
    pub l_ctx: usize,
    pub l_fut: usize,
    pub significance: f64,
    pub min_count: u64,
    /// Floor of the clustering threshold.
    pub eps_stat: f64,
    /// Largest state count of the enumerated unifilar topologies.
    pub max_topology_states: usize,
    /// Skip a state count once it would need more topologies than this.
    pub topology_budget: usize,
    /// Symbols used to score competing structures.
    pub screen_len: usize,
}

impl Default for EmpiricalOptions {
    fn default() -> Self {
        EmpiricalOptions {
            l_ctx: 8,
            l_fut: 4,
            significance: 0.01,
            min_count: 100,
            eps_stat: 1e-6,
            max_topology_states: 3,
            topology_budget: 5000,
            screen_len: 20_000,
        }
    }
}

/// Counts of length-`l_fut` futures following each length-`l_ctx`
/// context. Only windows where context and full future fit are counted, so
/// every future length sums to the context count.
#[derive(Clone, Debug)]
pub struct ContextModel {
    pub l_ctx: usize,
    pub l_fut: usize,
    n_symbols: usize,
    /// Observed context codes, ascending.
    codes: Vec<u64>,
    counts: Vec<u64>,
    /// `joint[i][u]`: future `u` (length `l_fut`) after context `i`.
    joint: Vec<Vec<u64>>,
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

impl ContextModel {
    pub fn build(symbols: &[Symbol], n_symbols: usize, l_ctx: usize, l_fut: usize) -> Result<Self> {
        if l_fut == 0 {
            return Err(Error::Parameter("future length must be positive".into()));
        }
        if n_symbols == 0 {
            return Err(Error::Parameter("empty alphabet".into()));
        }
        if let Some(&x) = symbols.iter().find(|&&x| x >= n_symbols) {
            return Err(Error::SymbolIndex {
                index: x,
                n_symbols,
            });
        }
        let k = n_symbols as u64;
        let fut_size = k
            .checked_pow(l_fut as u32)
            .filter(|&s| s <= 1 << 16)
            .ok_or_else(|| Error::Parameter("future alphabet too large".into()))?;
        if k.checked_pow((l_ctx + l_fut) as u32).is_none() {
            return Err(Error::Parameter("context codes would overflow".into()));
        }
        let window = l_ctx + l_fut;
        let mut index: HashMap<u64, usize> = HashMap::new();
        let mut codes = Vec::new();
        let mut joint: Vec<Vec<u64>> = Vec::new();
        if symbols.len() >= window {
            for t in l_ctx..=symbols.len() - l_fut {
                let c = encode(n_symbols, &symbols[t - l_ctx..t]);
                let u = encode(n_symbols, &symbols[t..t + l_fut]) as usize;
                let i = *index.entry(c).or_insert_with(|| {
                    codes.push(c);
                    joint.push(vec![0; fut_size as usize]);
                    codes.len() - 1
                });
                joint[i][u] += 1;
            }
        }
        let mut order: Vec<usize> = (0..codes.len()).collect();
        order.sort_unstable_by_key(|&i| codes[i]);
        let codes: Vec<u64> = order.iter().map(|&i| codes[i]).collect();
        let joint: Vec<Vec<u64>> = order
            .iter()
            .map(|&i| std::mem::take(&mut joint[i]))
            .collect();
        let counts = joint.iter().map(|v| v.iter().sum()).collect();
        Ok(ContextModel {
            l_ctx,
            l_fut,
            n_symbols,
            codes,
            counts,
            joint,
        })
    }

    pub fn n_contexts(&self) -> usize {
        self.codes.len()
    }

    pub fn context(&self, i: usize) -> Vec<Symbol> {
        decode(self.n_symbols, self.l_ctx, self.codes[i])
    }

    pub fn count(&self, i: usize) -> u64 {
        self.counts[i]
    }

    pub fn index_of(&self, context: &[Symbol]) -> Option<usize> {
        if context.len() != self.l_ctx || context.iter().any(|&x| x >= self.n_symbols) {
            return None;
        }
        self.codes
            .binary_search(&encode(self.n_symbols, context))
            .ok()
    }

    /// Counts of the length-`f` futures of context `i`, indexed by code.
    pub fn future_counts(&self, i: usize, f: usize) -> Vec<u64> {
        assert!((1..=self.l_fut).contains(&f), "future length out of range");
        let block = self.n_symbols.pow((self.l_fut - f) as u32);
        self.joint[i]
            .chunks(block)
            .map(|c| c.iter().sum())
            .collect()
    }

    /// Empirical `P(u | context)` for all futures of lengths `1..=l_fut`,
    /// concatenated.
    fn profile(&self, i: usize) -> Vec<f64> {
        let n = self.counts[i] as f64;
        (1..=self.l_fut)
            .flat_map(|f| self.future_counts(i, f))
            .map(|c| c as f64 / n)
            .collect()
    }
}

/// Two contexts of one cluster whose one-symbol extensions land in
/// different clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct Inconsistency {
    pub cluster: usize,
    pub symbol: Symbol,
    pub first: (Vec<Symbol>, usize),
    pub second: (Vec<Symbol>, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Clustered,
    /// Enumerated topology with this many states.
    Topology {
        n_states: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalReport {
    pub l_ctx: usize,
    pub l_fut: usize,
    pub significance: f64,
    pub min_count: u64,
    pub n_symbols_seen: usize,
    pub contexts_observed: usize,
    pub contexts_kept: usize,
    pub clusters: usize,
    pub threshold_range: (f64, f64),
    pub candidate_states: usize,
    pub inconsistencies: Vec<Inconsistency>,
    pub n_inconsistent: usize,
    pub candidate_score: Option<f64>,
    pub topologies_scored: usize,
    pub selection: Selection,
    pub selected_score: f64,
    pub warnings: Vec<String>,
}

impl fmt::Display for EmpiricalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: empirical")?;
        writeln!(
            f,
            "context length: {}  future length: {}  significance: {}  min count: {}",
            self.l_ctx, self.l_fut, self.significance, self.min_count
        )?;
        writeln!(
            f,
            "contexts observed: {}  kept: {}  clusters: {}  threshold: {:.4}..{:.4}",
            self.contexts_observed,
            self.contexts_kept,
            self.clusters,
            self.threshold_range.0,
            self.threshold_range.1
        )?;
        writeln!(f, "clustered candidate states: {}", self.candidate_states)?;
        writeln!(
            f,
            "inconsistent extensions: {} (majority rule applied)",
            self.n_inconsistent
        )?;
        for inc in &self.inconsistencies {
            let w = |v: &[Symbol]| v.iter().map(|x| x.to_string()).collect::<String>();
            writeln!(
                f,
                "  cluster {} on {}: context {} -> {}, context {} -> {}",
                inc.cluster,
                inc.symbol,
                w(&inc.first.0),
                inc.first.1,
                w(&inc.second.0),
                inc.second.1
            )?;
        }
        match self.candidate_score {
            Some(s) => writeln!(f, "candidate score: {s:.3}")?,
            None => writeln!(f, "candidate score: unparseable")?,
        }
        writeln!(f, "topologies scored: {}", self.topologies_scored)?;
        match self.selection {
            Selection::Clustered => writeln!(
                f,
                "selected: clustered candidate (score {:.3})",
                self.selected_score
            )?,
            Selection::Topology { n_states } => writeln!(
                f,
                "selected: enumerated {n_states}-state topology (score {:.3})",
                self.selected_score
            )?,
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

type Delta = Vec<Vec<Option<usize>>>;

/// Counts of a unifilar parse of the sample.
struct Fit {
    loglik: f64,
    counts: Vec<Vec<u64>>,
}

fn parse_from(delta: &Delta, symbols: &[Symbol], start: usize) -> Option<Fit> {
    let k = delta.first().map_or(0, Vec::len);
    let mut counts = vec![vec![0u64; k]; delta.len()];
    let mut s = start;
    for &x in symbols {
        counts[s][x] += 1;
        s = delta[s][x]?;
    }
    let loglik = counts
        .iter()
        .map(|row| {
            let n: u64 = row.iter().sum();
            row.iter()
                .filter(|&&c| c > 0)
                .map(|&c| c as f64 * (c as f64 / n as f64).ln())
                .sum::<f64>()
        })
        .sum();
    Some(Fit { loglik, counts })
}

/// Best parse over all start states.
fn best_parse(delta: &Delta, symbols: &[Symbol]) -> Option<Fit> {
    (0..delta.len())
        .filter_map(|s| parse_from(delta, symbols, s))
        .fold(None, |best: Option<Fit>, f| match best {
            Some(b) if b.loglik >= f.loglik => Some(b),
            _ => Some(f),
        })
}

fn bic(fit: &Fit, delta: &Delta, n: usize) -> f64 {
    let params: usize = delta
        .iter()
        .map(|row| row.iter().flatten().count().saturating_sub(1))
        .sum();
    fit.loglik - 0.5 * params as f64 * (n.max(2) as f64).ln()
}

fn is_irreducible_delta(delta: &Delta) -> bool {
    let adj: Vec<Vec<usize>> = delta
        .iter()
        .map(|row| row.iter().flatten().copied().collect())
        .collect();
    graph::strongly_connected_components(&adj).len() == 1
}

/// All irreducible partial transition tables on `n` states over `k` symbols.
fn topologies(n: usize, k: usize) -> Vec<Delta> {
    let per_state = (n + 1).pow(k as u32) - 1;
    let total = per_state.pow(n as u32);
    let row = |mut code: usize| -> Vec<Option<usize>> {
        code += 1;
        (0..k)
            .map(|_| {
                let d = code % (n + 1);
                code /= n + 1;
                d.checked_sub(1)
            })
            .collect()
    };
    let rows: Vec<Vec<Option<usize>>> = (0..per_state).map(row).collect();
    (0..total)
        .filter_map(|mut code| {
            let delta: Delta = (0..n)
                .map(|_| {
                    let r = rows[code % per_state].clone();
                    code /= per_state;
                    r
                })
                .collect();
            is_irreducible_delta(&delta).then_some(delta)
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Candidate {
    delta: Delta,
    n_clusters: usize,
    kept: usize,
    thresholds: (f64, f64),
    inconsistencies: Vec<Inconsistency>,
    n_inconsistent: usize,
}

fn cluster_contexts(model: &ContextModel, opts: &EmpiricalOptions) -> Result<Candidate> {
    let kept: Vec<usize> = (0..model.n_contexts())
        .filter(|&i| model.count(i) >= opts.min_count)
        .collect();
    if kept.is_empty() {
        return Err(Error::InsufficientData {
            min_count: opts.min_count,
        });
    }
    let profiles: Vec<Vec<f64>> = kept.iter().map(|&i| model.profile(i)).collect();
    let log_term = (1.0 / opts.significance).ln();
    let threshold = |a: usize, b: usize| -> f64 {
        let n = model.count(kept[a]).min(model.count(kept[b])) as f64;
        opts.eps_stat.max(2.0 * (log_term / n).sqrt())
    };
    let links: Vec<Vec<usize>> = par::map_range(kept.len(), |a| {
        (a + 1..kept.len())
            .filter(|&b| {
                let d = profiles[a]
                    .iter()
                    .zip(&profiles[b])
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                d <= threshold(a, b)
            })
            .collect()
    });
    let mut uf = UnionFind((0..kept.len()).collect());
    for (a, bs) in links.iter().enumerate() {
        for &b in bs {
            uf.union(a, b);
        }
    }
    let mut cluster_of_root = HashMap::new();
    let cluster: Vec<usize> = (0..kept.len())
        .map(|a| {
            let r = uf.find(a);
            let next = cluster_of_root.len();
            *cluster_of_root.entry(r).or_insert(next)
        })
        .collect();
    let n_clusters = cluster_of_root.len();
    let counts: Vec<u64> = kept.iter().map(|&i| model.count(i)).collect();
    let min_n = *counts.iter().min().expect("kept is nonempty") as f64;
    let max_n = *counts.iter().max().expect("kept is nonempty") as f64;
    let thresholds = (
        opts.eps_stat.max(2.0 * (log_term / max_n).sqrt()),
        opts.eps_stat.max(2.0 * (log_term / min_n).sqrt()),
    );

    // votes[cluster][symbol]: destination cluster -> weight, with a witness context
    let k = model.n_symbols;
    let mut kept_index = vec![usize::MAX; model.n_contexts()];
    for (a, &i) in kept.iter().enumerate() {
        kept_index[i] = a;
    }
    let mut votes: Vec<Vec<Vec<(usize, u64, usize)>>> = vec![vec![Vec::new(); k]; n_clusters];
    for (a, &i) in kept.iter().enumerate() {
        let ctx = model.context(i);
        let next = model.future_counts(i, 1);
        for (x, &c) in next.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut ext = ctx.clone();
            ext.push(x);
            ext.remove(0);
            let Some(j) = model
                .index_of(&ext)
                .map(|j| kept_index[j])
                .filter(|&j| j != usize::MAX)
            else {
                continue;
            };
            let dest = cluster[j];
            let slot = &mut votes[cluster[a]][x];
            match slot.iter_mut().find(|v| v.0 == dest) {
                Some(v) => v.1 += c,
                None => slot.push((dest, c, i)),
            }
        }
    }
    let mut delta = vec![vec![None; k]; n_clusters];
    let mut inconsistencies = Vec::new();
    let mut n_inconsistent = 0;
    for (cl, per_symbol) in votes.iter().enumerate() {
        for (x, options) in per_symbol.iter().enumerate() {
            let Some(best) = options
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            else {
                continue;
            };
            delta[cl][x] = Some(best.0);
            if options.len() > 1 {
                n_inconsistent += 1;
                if inconsistencies.len() < 20 {
                    let other = options
                        .iter()
                        .find(|o| o.0 != best.0)
                        .expect("several options");
                    inconsistencies.push(Inconsistency {
                        cluster: cl,
                        symbol: x,
                        first: (model.context(best.2), best.0),
                        second: (model.context(other.2), other.0),
                    });
                }
            }
        }
    }

    // keep the closed component carrying the most context mass
    let adj: Vec<Vec<usize>> = delta
        .iter()
        .map(|row| row.iter().flatten().copied().collect())
        .collect();
    let comps = graph::strongly_connected_components(&adj);
    let mass = |c: &Vec<usize>| -> u64 {
        (0..kept.len())
            .filter(|&a| c.contains(&cluster[a]))
            .map(|a| counts[a])
            .sum()
    };
    let best = graph::terminal_components(&adj, &comps)
        .into_iter()
        .map(|t| &comps[t])
        .filter(|c| graph::has_cycle(&adj, c))
        .max_by_key(|c| mass(c))
        .ok_or(Error::InsufficientData {
            min_count: opts.min_count,
        })?;
    let mut local = vec![usize::MAX; n_clusters];
    for (i, &c) in best.iter().enumerate() {
        local[c] = i;
    }
    let delta = best
        .iter()
        .map(|&c| delta[c].iter().map(|t| t.map(|t| local[t])).collect())
        .collect();
    Ok(Candidate {
        delta,
        n_clusters,
        kept: kept.len(),
        thresholds,
        inconsistencies,
        n_inconsistent,
    })
}

pub fn reconstruct_empirical(
    symbols: &[Symbol],
    alphabet: &Alphabet,
    l_ctx: usize,
    l_fut: usize,
    significance: f64,
    min_count: u64,
) -> Result<ReconstructedMachine> {
    let opts = EmpiricalOptions {
        l_ctx,
        l_fut,
        significance,
        min_count,
        ..EmpiricalOptions::default()
    };
    reconstruct_empirical_with(symbols, alphabet, &opts)
}

pub fn reconstruct_empirical_with(
    symbols: &[Symbol],
    alphabet: &Alphabet,
    opts: &EmpiricalOptions,
) -> Result<ReconstructedMachine> {
    if !(opts.significance > 0.0 && opts.significance < 1.0) {
        return Err(Error::Parameter(format!(
            "significance {} outside (0,1)",
            opts.significance
        )));
    }
    let k = alphabet.len();
    let model = ContextModel::build(symbols, k, opts.l_ctx, opts.l_fut)?;
    let mut warnings = Vec::new();
    let span = (k as f64).powi((opts.l_ctx + opts.l_fut) as i32);
    if (symbols.len() as f64) < 10.0 * span {
        warnings.push(format!(
            "sample of {} symbols is short for {} context/future combinations",
            symbols.len(),
            span
        ));
    }
    let candidate = cluster_contexts(&model, opts)?;

    let screen = &symbols[..symbols.len().min(opts.screen_len.max(1))];
    let candidate_fit = best_parse(&candidate.delta, screen);
    let candidate_score = candidate_fit
        .as_ref()
        .map(|f| bic(f, &candidate.delta, screen.len()));

    let mut pool: Vec<Delta> = Vec::new();
    for n in 1..=opts.max_topology_states {
        let per_state = ((n + 1) as f64).powi(k as i32) - 1.0;
        if per_state.powi(n as i32) > opts.topology_budget as f64 {
            break;
        }
        pool.extend(topologies(n, k));
    }
    let scores: Vec<Option<f64>> = par::map_slice(&pool, |d| {
        best_parse(d, screen).map(|f| bic(&f, d, screen.len()))
    });

    // highest score; near-ties go to fewer states, then the clustered candidate
    let mut choice: Option<(f64, usize, Option<usize>)> =
        candidate_score.map(|s| (s, candidate.delta.len(), None));
    for (i, s) in scores.iter().enumerate() {
        let Some(s) = *s else { continue };
        let n = pool[i].len();
        let better = match choice {
            None => true,
            Some((bs, bn, _)) => {
                s > bs + 1e-9 * bs.abs().max(1.0)
                    || ((s - bs).abs() <= 1e-9 * bs.abs().max(1.0) && n < bn)
            }
        };
        if better {
            choice = Some((s, n, Some(i)));
        }
    }
    let (selected_score, _, picked) = choice.ok_or(Error::InsufficientData {
        min_count: opts.min_count,
    })?;
    let (delta, selection) = match picked {
        None => (candidate.delta.clone(), Selection::Clustered),
        Some(i) => (
            pool[i].clone(),
            Selection::Topology {
                n_states: pool[i].len(),
            },
        ),
    };

    let fit = best_parse(&delta, symbols).ok_or(Error::InsufficientData {
        min_count: opts.min_count,
    })?;
    let (machine, class_probability) = assemble(&delta, &fit, alphabet)?;

    let report = EmpiricalReport {
        l_ctx: opts.l_ctx,
        l_fut: opts.l_fut,
        significance: opts.significance,
        min_count: opts.min_count,
        n_symbols_seen: symbols.len(),
        contexts_observed: model.n_contexts(),
        contexts_kept: candidate.kept,
        clusters: candidate.n_clusters,
        threshold_range: candidate.thresholds,
        candidate_states: candidate.delta.len(),
        inconsistencies: candidate.inconsistencies,
        n_inconsistent: candidate.n_inconsistent,
        candidate_score,
        topologies_scored: pool.len(),
        selection,
        selected_score,
        warnings,
    };
    Ok(ReconstructedMachine {
        machine,
        class_probability,
        provenance: Provenance::Empirical(report),
    })
}

/// Machine with maximum-likelihood probabilities from the parse, restricted
/// to its recurrent part; `μ` is the parse's state occupancy.
fn assemble(delta: &Delta, fit: &Fit, alphabet: &Alphabet) -> Result<(Machine, Vec<f64>)> {
    let n = delta.len();
    let occupancy: Vec<u64> = fit.counts.iter().map(|r| r.iter().sum()).collect();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            (0..alphabet.len())
                .filter(|&x| fit.counts[s][x] > 0)
                .filter_map(|x| delta[s][x])
                .collect()
        })
        .collect();
    let comps = graph::strongly_connected_components(&adj);
    let comp = graph::terminal_components(&adj, &comps)
        .into_iter()
        .map(|t| &comps[t])
        .max_by_key(|c| c.iter().map(|&s| occupancy[s]).sum::<u64>())
        .expect("a finite graph has a terminal component");
    let mut local = vec![usize::MAX; n];
    for (i, &s) in comp.iter().enumerate() {
        local[s] = i;
    }
    let mut edges = Vec::new();
    for (i, &s) in comp.iter().enumerate() {
        let total = occupancy[s] as f64;
        for (x, (&c, &t)) in fit.counts[s].iter().zip(&delta[s]).enumerate() {
            if let (c @ 1.., Some(t)) = (c, t) {
                edges.push(Edge::new(i, x, c as f64 / total, local[t]));
            }
        }
    }
    let machine = Machine::new(comp.len(), alphabet.clone(), edges)?;
    let total: u64 = comp.iter().map(|&s| occupancy[s]).sum();
    let mu: Vec<f64> = comp
        .iter()
        .map(|&s| occupancy[s] as f64 / total as f64)
        .collect();

    if axioms::is_generator_em(&machine).is_generator_em() {
        return Ok((machine, mu));
    }
    let q = minimize::minimize_unifilar(&machine)?;
    let mut merged = vec![0.0; q.target.n_states()];
    for (s, &b) in q.class_of.iter().enumerate() {
        merged[b] += mu[s];
    }
    Ok((q.target, merged))
}
