use emachine::examples;
use emachine::isomorphism::are_isomorphic;
use emachine::machine::words_of_length;
use emachine::mixed_state::estimate_decay;
use emachine::random::random_generator;
use emachine::reconstruct::{reconstruct_analytic, reconstruct_empirical, Provenance};
use emachine::simulate::{empirical_word_probs, rng_from_seed, sample_path, Start};
use emachine::Machine;

const LEN: usize = 1_000_000;

const BATCHES: usize = 100;

/// Standard error of a word frequency by batch means, which accounts for
/// overlapping windows and correlation along the chain.
fn batch_std_err(symbols: &[usize], k: usize, w: &[usize]) -> f64 {
    let size = symbols.len() / BATCHES;
    let freqs: Vec<f64> = symbols
        .chunks(size)
        .take(BATCHES)
        .map(|b| empirical_word_probs(b, k, w.len()).unwrap().freq(w))
        .collect();
    let mean = freqs.iter().sum::<f64>() / BATCHES as f64;
    let var = freqs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (BATCHES - 1) as f64;
    (var / BATCHES as f64).sqrt()
}

fn check_convergence(m: &Machine, seed: u64) {
    let run = sample_path(m, &Start::Stationary, LEN, seed).unwrap();
    assert!(run.is_edge_consistent(m));
    let table = empirical_word_probs(&run.symbols, m.n_symbols(), 4).unwrap();
    for len in 1..=4 {
        assert_eq!(table.total(len), (LEN - len + 1) as u64);
        for w in words_of_length(m.n_symbols(), len) {
            let p = m.word_prob_stationary(&w).unwrap();
            let f = table.freq(&w);
            if p == 0.0 {
                assert_eq!(table.count(&w), 0, "{w:?}");
                continue;
            }
            let se = batch_std_err(&run.symbols, m.n_symbols(), &w);
            assert!((f - p).abs() <= 5.0 * se, "{w:?}: {f} vs {p} (se {se})");
        }
    }
}

#[test]
fn even_word_frequencies_converge() {
    let m = examples::even(0.5).unwrap();
    check_convergence(&m, 42);
    let run = sample_path(&m, &Start::Stationary, LEN, 42).unwrap();
    let table = empirical_word_probs(&run.symbols, 2, 3).unwrap();
    assert!((table.freq(&[1, 1]) - 0.5).abs() < 0.005);
    let se = batch_std_err(&run.symbols, 2, &[0]);
    assert!((table.freq(&[0]) - 1.0 / 3.0).abs() < 3.0 * se);
}

#[test]
fn abc_word_frequencies_converge() {
    check_convergence(&examples::abc(0.4, 0.6).unwrap(), 43);
}

#[test]
fn sampling_is_reproducible() {
    let m = examples::abc(0.3, 0.8).unwrap();
    let a = sample_path(&m, &Start::Stationary, 10_000, 5).unwrap();
    let b = sample_path(&m, &Start::Stationary, 10_000, 5).unwrap();
    assert_eq!(a, b);
    let c = sample_path(&m, &Start::Stationary, 10_000, 6).unwrap();
    assert_ne!(a.symbols, c.symbols);
}

#[test]
fn decay_is_reproducible_and_exact_for_even() {
    let m = examples::even(0.5).unwrap();
    let a = estimate_decay(&m, 12, 5000, 17, 0.9).unwrap();
    let b = estimate_decay(&m, 12, 5000, 17, 0.9).unwrap();
    assert_eq!(a, b);
    for t in 0..=12 {
        let exact = m.word_prob_stationary(&vec![1; t]).unwrap();
        let se = (exact * (1.0 - exact) / 5000.0).sqrt().max(1e-3);
        assert!((a.frac_unsynced[t] - exact).abs() <= 5.0 * se, "t = {t}");
    }
    assert!(a.decay_rate.unwrap() < 0.0);
}

#[test]
fn one_state_machine_is_always_synchronized() {
    let m = random_generator(&mut rng_from_seed(1), 1, 2).unwrap();
    let est = estimate_decay(&m, 8, 100, 1, 0.5).unwrap();
    assert!(est.mean_doubt.iter().all(|&q| q == 0.0));
    assert_eq!(est.decay_rate, None);
}

#[test]
fn analytic_round_trip_on_relabeled_examples() {
    for m in [
        examples::even(0.3).unwrap(),
        examples::abc(0.2, 0.9).unwrap(),
        examples::np2_minimal(0.7).unwrap(),
    ] {
        let perm: Vec<usize> = (0..m.n_states()).rev().collect();
        let relabeled = m.relabel(&perm).unwrap();
        let r = reconstruct_analytic(&relabeled, 64, 8, 1e-9).unwrap();
        assert!(are_isomorphic(&r.machine, &m, 1e-9).unwrap().is_some());
        assert!(r.stationarity_residual() < 1e-12);
    }
}

#[test]
fn analytic_reconstruction_of_np2_is_its_quotient() {
    let r = reconstruct_analytic(&examples::np2(0.3).unwrap(), 64, 10, 1e-9).unwrap();
    let min = examples::np2_minimal(0.3).unwrap();
    assert!(are_isomorphic(&r.machine, &min, 1e-9).unwrap().is_some());
    let mu = &r.class_probability;
    let pi = min.stationary_distribution().unwrap().pi;
    let map = are_isomorphic(&r.machine, &min, 1e-9).unwrap().unwrap();
    for (a, &b) in map.mapping.iter().enumerate() {
        assert!((mu[a] - pi[b]).abs() < 1e-12);
    }
}

#[test]
fn empirical_reconstruction_of_abc() {
    let m = examples::abc(0.2, 0.7).unwrap();
    let run = sample_path(&m, &Start::Stationary, 300_000, 8).unwrap();
    let r = reconstruct_empirical(&run.symbols, m.alphabet(), 8, 4, 0.01, 100).unwrap();
    assert!(are_isomorphic(&r.machine, &m, 0.02).unwrap().is_some());
    assert!(r.stationarity_residual() < 1e-2);
    assert!(matches!(r.provenance, Provenance::Empirical(_)));
}
