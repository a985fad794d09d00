//! Isomorphism of irreducible unifilar machines.
//!
//! Because transitions are deterministic, fixing the image of one state
//! forces the image of every state reachable from it. We try each anchor for
//! state 0 in turn and propagate along `δ`.

use std::collections::VecDeque;

use crate::axioms;
use crate::error::{Error, Result};
use crate::machine::{Machine, State};

pub const EPS_ISO: f64 = 1e-9;

/// State bijection `A -> B`: `mapping[a]` is the image of `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub mapping: Vec<State>,
}

impl Isomorphism {
    pub fn identity(n: usize) -> Self {
        Isomorphism {
            mapping: (0..n).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (a, &b) in self.mapping.iter().enumerate() {
            inv[b] = a;
        }
        Isomorphism { mapping: inv }
    }

    /// `other ∘ self`: first this map, then `other`.
    pub fn then(&self, other: &Isomorphism) -> Self {
        Isomorphism {
            mapping: self.mapping.iter().map(|&b| other.mapping[b]).collect(),
        }
    }
}

fn require_generator_shape(m: &Machine) -> Result<()> {
    let irr = axioms::is_irreducible(m);
    if !irr.irreducible {
        return Err(Error::NotIrreducible {
            n_components: irr.components.len(),
        });
    }
    let uni = axioms::is_unifilar(m);
    if let Some(&(state, symbol)) = uni.violations.first() {
        return Err(Error::NotUnifilar { state, symbol });
    }
    Ok(())
}

/// An edge-, symbol- and probability-preserving bijection from `a` to `b`
/// (probabilities compared within `tolerance`), or `None`.
pub fn are_isomorphic(a: &Machine, b: &Machine, tolerance: f64) -> Result<Option<Isomorphism>> {
    require_generator_shape(a)?;
    require_generator_shape(b)?;
    if a.n_states() != b.n_states() || a.alphabet() != b.alphabet() {
        return Ok(None);
    }
    let n = a.n_states();
    let k = a.n_symbols();
    let table = |m: &Machine| -> Vec<(Vec<f64>, Vec<Option<State>>)> {
        (0..n)
            .map(|s| {
                let delta = (0..k)
                    .map(|x| m.transition_function(s, x).expect("checked unifilar"))
                    .collect();
                (m.symbol_probs(s), delta)
            })
            .collect()
    };
    let ta = table(a);
    let tb = table(b);
    let compatible = |sa: State, sb: State| -> bool {
        let (pa, da) = &ta[sa];
        let (pb, db) = &tb[sb];
        (0..k).all(|x| da[x].is_some() == db[x].is_some() && (pa[x] - pb[x]).abs() <= tolerance)
    };

    for anchor in 0..n {
        if !compatible(0, anchor) {
            continue;
        }
        if let Some(mapping) = propagate(&ta, &tb, anchor, &compatible) {
            return Ok(Some(Isomorphism { mapping }));
        }
    }
    Ok(None)
}

type Table = Vec<(Vec<f64>, Vec<Option<State>>)>;

fn propagate(
    ta: &Table,
    tb: &Table,
    anchor: State,
    compatible: &dyn Fn(State, State) -> bool,
) -> Option<Vec<State>> {
    let n = ta.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = anchor;
    used[anchor] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(sa) = queue.pop_front() {
        let sb = map[sa];
        for (x, next_a) in ta[sa].1.iter().enumerate() {
            let (Some(na), Some(nb)) = (*next_a, tb[sb].1[x]) else {
                continue;
            };
            if map[na] == usize::MAX {
                if used[nb] || !compatible(na, nb) {
                    return None;
                }
                map[na] = nb;
                used[nb] = true;
                queue.push_back(na);
            } else if map[na] != nb {
                return None;
            }
        }
    }
    // irreducibility of A means every state was reached
    map.iter().all(|&m| m != usize::MAX).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::machine::{words_of_length, Alphabet, Edge};

    #[test]
    fn even_is_isomorphic_to_itself() {
        let m = examples::even(0.5).unwrap();
        assert_eq!(
            are_isomorphic(&m, &m, EPS_ISO).unwrap(),
            Some(Isomorphism::identity(2))
        );
    }

    #[test]
    fn swapped_states_are_found() {
        let m = examples::even(0.5).unwrap();
        let swapped = m.relabel(&[1, 0]).unwrap();
        let iso = are_isomorphic(&m, &swapped, EPS_ISO).unwrap().unwrap();
        assert_eq!(iso.mapping, vec![1, 0]);
    }

    #[test]
    fn even_and_abc_differ() {
        let even = examples::even(0.5).unwrap();
        let abc = examples::abc(0.4, 0.6).unwrap();
        assert_eq!(are_isomorphic(&even, &abc, EPS_ISO).unwrap(), None);
    }

    #[test]
    fn tolerance_is_respected() {
        let a = examples::even(0.5).unwrap();
        let b = examples::even(0.505).unwrap();
        assert_eq!(are_isomorphic(&a, &b, 1e-3).unwrap(), None);
        assert!(are_isomorphic(&a, &b, 1e-2).unwrap().is_some());
    }

    #[test]
    fn nonunifilar_input_is_refused() {
        let sns = examples::sns(0.5, 0.5).unwrap();
        assert!(matches!(
            are_isomorphic(&sns, &sns, EPS_ISO),
            Err(Error::NotUnifilar { .. })
        ));
    }

    #[test]
    fn same_support_different_wiring() {
        // two 3-cycles with the same per-state probabilities but different
        // symbol-to-successor wiring
        let mk = |swap: bool| {
            let (a, b) = if swap { (2, 1) } else { (1, 2) };
            Machine::new(
                3,
                Alphabet::binary(),
                [
                    Edge::new(0, 0, 0.5, a),
                    Edge::new(0, 1, 0.5, b),
                    Edge::new(1, 0, 1.0, 2),
                    Edge::new(2, 1, 1.0, 0),
                ],
            )
            .unwrap()
        };
        assert_eq!(
            are_isomorphic(&mk(false), &mk(true), EPS_ISO).unwrap(),
            None
        );
        // isomorphic machines agree on stationary word probabilities
        let m = mk(false);
        let r = m.relabel(&[2, 0, 1]).unwrap();
        assert!(are_isomorphic(&m, &r, EPS_ISO).unwrap().is_some());
        for w in words_of_length(2, 5) {
            let d =
                (m.word_prob_stationary(&w).unwrap() - r.word_prob_stationary(&w).unwrap()).abs();
            assert!(d <= 5.0 * EPS_ISO);
        }
    }
}
