//! Observer beliefs over machine states and how fast they synchronize.

use crate::axioms;
use crate::error::{Error, Result};
use crate::machine::{Machine, State, Symbol, EPS_STOCH};
use crate::par;
use crate::simulate::{chain_rng, Walker};

/// Entries below this are zeroed after each update.
pub const SNAP: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct BeliefState {
    pub phi: Vec<f64>,
}

impl BeliefState {
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if phi.is_empty() || phi.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::Distribution(
                "belief entries must be nonnegative".into(),
            ));
        }
        let s: f64 = phi.iter().sum();
        if (s - 1.0).abs() > EPS_STOCH {
            return Err(Error::Distribution(format!("belief sums to {s}")));
        }
        Ok(BeliefState { phi })
    }

    pub fn stationary(machine: &Machine) -> Result<Self> {
        Ok(BeliefState {
            phi: machine.stationary_pi()?.to_vec(),
        })
    }

    pub fn vertex(n: usize, i: State) -> Self {
        let mut phi = vec![0.0; n];
        phi[i] = 1.0;
        BeliefState { phi }
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// The state carrying all the mass, if there is one.
    pub fn vertex_index(&self) -> Option<State> {
        let mut nonzero = self.phi.iter().enumerate().filter(|(_, &p)| p > 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }
}

/// Zero entries below `threshold` and renormalize. Returns the mass before
/// normalization.
pub(crate) fn normalize_snapped(v: &mut [f64], threshold: f64) -> f64 {
    let total: f64 = v.iter().sum();
    if total <= 0.0 {
        return total;
    }
    for p in v.iter_mut() {
        *p /= total;
        if *p < threshold {
            *p = 0.0;
        }
    }
    let s: f64 = v.iter().sum();
    for p in v.iter_mut() {
        *p /= s;
    }
    total
}

/// `normalize(φ·T^(x))`.
pub fn belief_update(machine: &Machine, phi: &BeliefState, x: Symbol) -> Result<BeliefState> {
    if x >= machine.n_symbols() {
        return Err(Error::SymbolIndex {
            index: x,
            n_symbols: machine.n_symbols(),
        });
    }
    if phi.len() != machine.n_states() {
        return Err(Error::Distribution(format!(
            "belief has {} entries, machine has {} states",
            phi.len(),
            machine.n_states()
        )));
    }
    let mut next = machine.step(&phi.phi, x);
    if normalize_snapped(&mut next, SNAP) <= 0.0 {
        return Err(Error::ImpossibleSymbol { symbol: x });
    }
    Ok(BeliefState { phi: next })
}

/// Belief after observing `w` from the stationary prior; words outside the
/// language get `π` back.
pub fn belief_of_word(machine: &Machine, w: &[Symbol]) -> Result<BeliefState> {
    machine.check_word(w)?;
    let pi = BeliefState::stationary(machine)?;
    let mut phi = pi.clone();
    for &x in w {
        match belief_update(machine, &phi, x) {
            Ok(next) => phi = next,
            Err(Error::ImpossibleSymbol { .. }) => return Ok(pi),
            Err(e) => return Err(e),
        }
    }
    Ok(phi)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyncQuantities {
    pub best_state: State,
    pub p_best: f64,
    pub doubt: f64,
}

pub fn sync_quantities(phi: &BeliefState) -> SyncQuantities {
    let (best_state, p_best) =
        phi.phi
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bp), (i, p)| {
                if p > bp {
                    (i, p)
                } else {
                    (bi, bp)
                }
            });
    // sum the others directly so that vertices give exactly zero
    let doubt: f64 = phi
        .phi
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best_state)
        .map(|(_, p)| p)
        .sum();
    SyncQuantities {
        best_state,
        p_best,
        doubt: doubt.clamp(0.0, 1.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayEstimate {
    pub horizon: usize,
    pub alpha: f64,
    pub n_chains: usize,
    /// `E[Q_t]` for `t = 0..=horizon`.
    pub mean_doubt: Vec<f64>,
    /// Fraction of chains with `Q_t > α^t`.
    pub frac_exceed: Vec<f64>,
    /// Fraction of chains with `Q_t > 0`.
    pub frac_unsynced: Vec<f64>,
    /// Least-squares slope of `ln E[Q_t]` over `t ≥ 1` up to the first zero.
    pub decay_rate: Option<f64>,
}

impl DecayEstimate {
    pub fn alpha_hat(&self) -> Option<f64> {
        self.decay_rate.map(f64::exp)
    }

    /// Binomial standard error of `frac_unsynced[t]`.
    pub fn unsynced_std_err(&self, t: usize) -> f64 {
        let p = self.frac_unsynced[t];
        (p * (1.0 - p) / self.n_chains as f64).sqrt()
    }
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Doubt trajectory `Q_0..=Q_horizon` of one stationary run.
fn doubt_trajectory(
    machine: &Machine,
    walker: &Walker,
    pi: &[f64],
    horizon: usize,
    seed: u64,
    chain: u64,
) -> Vec<f64> {
    let mut rng = chain_rng(seed, chain);
    let mut state = walker.initial_state(pi, &mut rng);
    let mut phi = BeliefState { phi: pi.to_vec() };
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(sync_quantities(&phi).doubt);
    for _ in 0..horizon {
        let (x, next) = walker.step(state, &mut rng);
        state = next;
        phi = belief_update(machine, &phi, x).expect("sampled symbols have positive probability");
        out.push(sync_quantities(&phi).doubt);
    }
    out
}

pub fn estimate_decay(
    machine: &Machine,
    horizon: usize,
    n_chains: usize,
    seed: u64,
    alpha: f64,
) -> Result<DecayEstimate> {
    if n_chains == 0 {
        return Err(Error::Parameter("need at least one chain".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha {alpha} outside (0,1)")));
    }
    let report = axioms::is_generator_em(machine);
    if !report.irreducible {
        return Err(Error::NotIrreducible {
            n_components: report.components.len(),
        });
    }
    if let Some(&(state, symbol)) = report.unifilar_violations.first() {
        return Err(Error::NotUnifilar { state, symbol });
    }
    if let Some((a, b)) = report.indistinct_pair {
        return Err(Error::Parameter(format!(
            "states {a} and {b} are not probabilistically distinct"
        )));
    }
    let pi = machine.stationary_pi()?.to_vec();
    let walker = Walker::new(machine);
    let runs = par::map_range(n_chains, |c| {
        doubt_trajectory(machine, &walker, &pi, horizon, seed, c as u64)
    });

    let n = n_chains as f64;
    let mut mean_doubt = Vec::with_capacity(horizon + 1);
    let mut frac_exceed = Vec::with_capacity(horizon + 1);
    let mut frac_unsynced = Vec::with_capacity(horizon + 1);
    let mut column = vec![0.0; n_chains];
    for t in 0..=horizon {
        for (c, run) in runs.iter().enumerate() {
            column[c] = run[t];
        }
        let bound = alpha.powi(t as i32);
        mean_doubt.push(par::pairwise_sum(&column) / n);
        frac_exceed.push(column.iter().filter(|&&q| q > bound).count() as f64 / n);
        frac_unsynced.push(column.iter().filter(|&&q| q > 0.0).count() as f64 / n);
    }
    let tail: Vec<(f64, f64)> = mean_doubt
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(_, &q)| q > 0.0)
        .map(|(t, &q)| (t as f64, q.ln()))
        .collect();
    let decay_rate = least_squares_slope(&tail);
    Ok(DecayEstimate {
        horizon,
        alpha,
        n_chains,
        mean_doubt,
        frac_exceed,
        frac_unsynced,
        decay_rate,
    })
}
