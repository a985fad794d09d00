//! History epsilon-machines built from a known machine (belief closure) or
//! from a sample (context clustering).

mod analytic;
mod empirical;

use std::fmt;

pub use analytic::{
    reconstruct_analytic, reconstruct_analytic_with, sns_belief_closed_form, AnalyticOptions,
    AnalyticReport, AtlasEntry, BeliefAtlas,
};
pub use empirical::{
    reconstruct_empirical, reconstruct_empirical_with, ContextModel, EmpiricalOptions,
    EmpiricalReport, Inconsistency, Selection,
};

use crate::linalg;
use crate::machine::Machine;

#[derive(Clone, Debug)]
pub enum Provenance {
    Analytic(AnalyticReport),
    Empirical(EmpiricalReport),
}

#[derive(Clone, Debug)]
pub struct ReconstructedMachine {
    pub machine: Machine,
    /// `μ_i`, the probability of class `i`.
    pub class_probability: Vec<f64>,
    pub provenance: Provenance,
}

impl ReconstructedMachine {
    /// `‖μT − μ‖_∞`.
    pub fn stationarity_residual(&self) -> f64 {
        let next = self
            .machine
            .overall_matrix()
            .left_mul(&self.class_probability);
        linalg::max_abs_diff(&next, &self.class_probability)
    }
}

impl fmt::Display for ReconstructedMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.machine.n_states())?;
        let mu: Vec<String> = self
            .class_probability
            .iter()
            .map(|p| format!("{p:.6}"))
            .collect();
        writeln!(f, "class probabilities: {}", mu.join(" "))?;
        writeln!(
            f,
            "stationarity residual: {:.3e}",
            self.stationarity_residual()
        )?;
        match &self.provenance {
            Provenance::Analytic(r) => write!(f, "{r}"),
            Provenance::Empirical(r) => write!(f, "{r}"),
        }
    }
}
