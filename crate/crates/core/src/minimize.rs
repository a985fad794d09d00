//! Quotient of a unifilar machine by its distinctness partition.

use crate::axioms::{self, StatePartition, EPS_DIST};
use crate::error::{Error, Result};
use crate::machine::{Edge, Machine, State};

/// Result of [`minimize_unifilar`]: the quotient machine and how source
/// states map onto its states.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub source: Machine,
    pub partition: StatePartition,
    pub target: Machine,
    pub class_of: Vec<usize>,
}

impl QuotientMap {
    pub fn is_identity(&self) -> bool {
        self.partition.is_discrete()
    }

    /// `state -> block` lines.
    pub fn to_map_text(&self) -> String {
        self.class_of
            .iter()
            .enumerate()
            .map(|(s, b)| format!("{s} -> {b}\n"))
            .collect()
    }
}

pub fn minimize_unifilar(machine: &Machine) -> Result<QuotientMap> {
    minimize_unifilar_with(machine, EPS_DIST)
}

pub fn minimize_unifilar_with(machine: &Machine, eps: f64) -> Result<QuotientMap> {
    let irr = axioms::is_irreducible(machine);
    if !irr.irreducible {
        return Err(Error::NotIrreducible {
            n_components: irr.components.len(),
        });
    }
    let partition = axioms::distinctness_partition(machine, eps)?;
    let class_of = partition.labels();

    let mut edges = Vec::new();
    for (b, block) in partition.blocks().iter().enumerate() {
        // lowest-index representative carries the block's probabilities
        let rep = block[0];
        for &other in &block[1..] {
            check_agreement(machine, rep, other, eps)?;
        }
        for e in machine.outgoing(rep) {
            edges.push(Edge::new(b, e.symbol, e.prob, class_of[e.to]));
        }
    }
    let target = Machine::new(partition.n_blocks(), machine.alphabet().clone(), edges)?;
    Ok(QuotientMap {
        source: machine.clone(),
        partition,
        target,
        class_of,
    })
}

fn check_agreement(machine: &Machine, a: State, b: State, eps: f64) -> Result<()> {
    let (pa, pb) = (machine.symbol_probs(a), machine.symbol_probs(b));
    match (0..pa.len()).find(|&x| (pa[x] - pb[x]).abs() > eps) {
        Some(symbol) => Err(Error::InconsistentBlock { a, b, symbol }),
        None => Ok(()),
    }
}
