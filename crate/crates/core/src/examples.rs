//! Built-in parametric machines over the binary alphabet.
//!
//! State `i` in code is `σ_{i+1}` in the usual one-based naming.

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Edge, Machine};

/// Names accepted by [`by_name`] with their parameter counts.
pub const NAMES: &[(&str, usize)] = &[
    ("even", 1),
    ("abc", 2),
    ("np2", 1),
    ("np2-min", 1),
    ("sns", 2),
];

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} must lie in (0, 1), got {v}"
        )))
    }
}

/// Even process: blocks of 1s have even length.
pub fn even(p: f64) -> Result<Machine> {
    check_open_unit("p", p)?;
    Machine::new(
        2,
        Alphabet::binary(),
        [
            Edge::new(0, 0, p, 0),
            Edge::new(0, 1, 1.0 - p, 1),
            Edge::new(1, 1, 1.0, 0),
        ],
    )
}

/// Alternating biased coins: the two states alternate, emitting 1 with
/// probability `p` from the first and `q` from the second.
pub fn abc(p: f64, q: f64) -> Result<Machine> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    if p == q {
        return Err(Error::Parameter("abc requires p != q".into()));
    }
    Machine::new(
        2,
        Alphabet::binary(),
        [
            Edge::new(0, 0, 1.0 - p, 1),
            Edge::new(0, 1, p, 1),
            Edge::new(1, 0, 1.0 - q, 0),
            Edge::new(1, 1, q, 0),
        ],
    )
}

/// Nonminimal four-state presentation of the noisy period-2 process:
/// a 4-cycle whose odd positions emit 1 and whose even positions emit 0
/// with probability `p`.
pub fn np2(p: f64) -> Result<Machine> {
    check_open_unit("p", p)?;
    Machine::new(
        4,
        Alphabet::binary(),
        [
            Edge::new(0, 1, 1.0, 1),
            Edge::new(1, 0, p, 2),
            Edge::new(1, 1, 1.0 - p, 2),
            Edge::new(2, 1, 1.0, 3),
            Edge::new(3, 0, p, 0),
            Edge::new(3, 1, 1.0 - p, 0),
        ],
    )
}

/// Two-state minimal machine for the noisy period-2 process.
pub fn np2_minimal(p: f64) -> Result<Machine> {
    check_open_unit("p", p)?;
    Machine::new(
        2,
        Alphabet::binary(),
        [
            Edge::new(0, 1, 1.0, 1),
            Edge::new(1, 0, p, 0),
            Edge::new(1, 1, 1.0 - p, 0),
        ],
    )
}

/// Simple nonunifilar source: the first state has two 1-edges.
pub fn sns(p: f64, q: f64) -> Result<Machine> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    Machine::new(
        2,
        Alphabet::binary(),
        [
            Edge::new(0, 1, p, 0),
            Edge::new(0, 1, 1.0 - p, 1),
            Edge::new(1, 1, q, 1),
            Edge::new(1, 0, 1.0 - q, 0),
        ],
    )
}

pub fn by_name(name: &str, params: &[f64]) -> Result<Machine> {
    let expected = NAMES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, k)| k)
        .ok_or_else(|| Error::Parameter(format!("unknown example {name:?}")))?;
    if params.len() != expected {
        return Err(Error::Parameter(format!(
            "{name} takes {expected} parameter(s), got {}",
            params.len()
        )));
    }
    match name {
        "even" => even(params[0]),
        "abc" => abc(params[0], params[1]),
        "np2" => np2(params[0]),
        "np2-min" => np2_minimal(params[0]),
        "sns" => sns(params[0], params[1]),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::EPS_STOCH;

    #[test]
    fn all_examples_validate() {
        for p in [0.1, 0.5, 0.9] {
            for m in [
                even(p),
                abc(p, 1.0 - p + 0.05),
                np2(p),
                np2_minimal(p),
                sns(p, 0.3),
            ] {
                assert!(m.unwrap().validate(EPS_STOCH).accepted());
            }
        }
    }

    #[test]
    fn parameter_domains() {
        assert!(even(0.0).is_err());
        assert!(even(1.0).is_err());
        assert!(abc(0.5, 0.5).is_err());
        assert!(sns(0.5, 0.5).is_ok());
        assert!(by_name("even", &[0.5, 0.5]).is_err());
        assert!(by_name("golden", &[0.5]).is_err());
    }

    #[test]
    fn sns_shape() {
        let m = sns(0.5, 0.5).unwrap();
        assert_eq!(m.n_states(), 2);
        assert!(!m.is_unifilar());
    }
}
