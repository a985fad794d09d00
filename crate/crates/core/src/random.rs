//! Random unifilar machines for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::axioms;
use crate::error::{Error, Result};
use crate::machine::{Alphabet, Edge, Machine};

/// A random unifilar machine: every state emits a random nonempty subset of
/// the alphabet, each symbol going to a uniformly chosen state. Edge weights
/// are drawn from `[0.1, 1]` before normalization, so no edge is tiny.
pub fn random_unifilar<R: Rng>(rng: &mut R, n_states: usize, n_symbols: usize) -> Result<Machine> {
    if n_states == 0 || n_symbols == 0 {
        return Err(Error::Parameter(
            "need at least one state and one symbol".into(),
        ));
    }
    let symbols: Vec<usize> = (0..n_symbols).collect();
    let mut edges = Vec::new();
    for s in 0..n_states {
        let size = rng.gen_range(1..=n_symbols);
        let mut chosen: Vec<usize> = symbols.choose_multiple(rng, size).copied().collect();
        chosen.sort_unstable();
        let weights: Vec<f64> = chosen.iter().map(|_| rng.gen_range(0.1..=1.0)).collect();
        let total: f64 = weights.iter().sum();
        for (&x, w) in chosen.iter().zip(weights) {
            edges.push(Edge::new(s, x, w / total, rng.gen_range(0..n_states)));
        }
    }
    Machine::new(n_states, Alphabet::numbered(n_symbols), edges)
}

/// Rejection-samples [`random_unifilar`] until the draw is a generator
/// epsilon-machine that uses every symbol.
pub fn random_generator<R: Rng>(rng: &mut R, n_states: usize, n_symbols: usize) -> Result<Machine> {
    if n_states > 1 && n_symbols == 1 {
        return Err(Error::Parameter(
            "a one-symbol alphabet admits only the one-state machine".into(),
        ));
    }
    loop {
        let m = random_unifilar(rng, n_states, n_symbols)?;
        if m.validate(crate::machine::EPS_STOCH).accepted()
            && axioms::is_generator_em(&m).is_generator_em()
        {
            return Ok(m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::rng_from_seed;

    #[test]
    fn draws_are_generators() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let k = rng.gen_range(2..=3);
            let m = random_generator(&mut rng, n, k).unwrap();
            assert_eq!(m.n_states(), n);
            assert!(m.is_unifilar());
            assert!(axioms::is_generator_em(&m).is_generator_em());
        }
    }

    #[test]
    fn single_symbol_case() {
        let mut rng = rng_from_seed(1);
        assert!(random_generator(&mut rng, 2, 1).is_err());
        assert_eq!(random_generator(&mut rng, 1, 1).unwrap().n_states(), 1);
    }
}
