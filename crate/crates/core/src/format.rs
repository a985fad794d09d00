//! Line-oriented machine text format.
//!
//! ```text
//! # comment
//! states 2
//! alphabet 0 1
//! edge 0 0 1/2 0
//! edge 0 1 0.5 1
//! edge 1 1 1 0
//! ```
//!
//! States are 0-based. Probabilities are decimal literals or exact ratios
//! `a/b`; they are written back with 17 significant digits so that a
//! write/read cycle reproduces every `f64` bit for bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::machine::{Alphabet, Edge, Machine};

/// A parsed machine plus non-fatal findings (explicit zero-probability edges).
#[derive(Debug, Clone)]
pub struct Parsed {
    pub machine: Machine,
    pub warnings: Vec<String>,
}

pub fn parse_probability(text: &str) -> Option<f64> {
    let v = match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().ok()?;
            let b: f64 = b.trim().parse().ok()?;
            if b == 0.0 {
                return None;
            }
            a / b
        }
        None => text.parse().ok()?,
    };
    v.is_finite().then_some(v)
}

/// 17 significant digits, plain decimal where that stays short.
pub fn format_probability(p: f64) -> String {
    if p == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{p:e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..=15).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        format!("{p:.decimals$}")
    } else {
        format!("{p:.16e}")
    }
}

pub fn parse_machine(text: &str) -> Result<Parsed> {
    let mut n_states: Option<usize> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut edges = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let keyword = toks.next().expect("nonempty line has a token");
        let rest: Vec<&str> = toks.collect();
        match keyword {
            "states" => {
                if n_states.is_some() {
                    return Err(err("duplicate `states` line".into()));
                }
                let [n] = rest[..] else {
                    return Err(err("expected `states <N>`".into()));
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| err(format!("bad state count {n:?}")))?;
                if n == 0 {
                    return Err(err("state count must be positive".into()));
                }
                n_states = Some(n);
            }
            "alphabet" => {
                if n_states.is_none() {
                    return Err(err("`alphabet` must follow `states`".into()));
                }
                if alphabet.is_some() {
                    return Err(err("duplicate `alphabet` line".into()));
                }
                alphabet =
                    Some(Alphabet::new(rest.iter().copied()).map_err(|e| err(e.to_string()))?);
            }
            "edge" => {
                let (Some(n), Some(alpha)) = (n_states, alphabet.as_ref()) else {
                    return Err(err("`edge` before `states`/`alphabet`".into()));
                };
                let [from, sym, prob, to] = rest[..] else {
                    return Err(err("expected `edge <from> <symbol> <prob> <to>`".into()));
                };
                let state = |s: &str| -> Result<usize> {
                    let v: usize = s.parse().map_err(|_| err(format!("bad state {s:?}")))?;
                    if v >= n {
                        return Err(err(format!("state {v} out of range (states {n})")));
                    }
                    Ok(v)
                };
                let from = state(from)?;
                let to = state(to)?;
                let symbol = alpha
                    .index_of(sym)
                    .ok_or_else(|| err(format!("symbol {sym:?} not in alphabet")))?;
                let prob = parse_probability(prob)
                    .ok_or_else(|| err(format!("bad probability {prob:?}")))?;
                if prob == 0.0 {
                    warnings.push(format!("line {line_no}: zero-probability edge dropped"));
                    continue;
                }
                edges.push(Edge::new(from, symbol, prob, to));
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }

    let n = n_states.ok_or(Error::Parse {
        line: 0,
        message: "missing `states` line".into(),
    })?;
    let alphabet = alphabet.ok_or(Error::Parse {
        line: 0,
        message: "missing `alphabet` line".into(),
    })?;
    let machine = Machine::new(n, alphabet, edges)?;
    Ok(Parsed { machine, warnings })
}

pub fn write_machine(machine: &Machine) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "states {}", machine.n_states());
    let _ = writeln!(s, "alphabet {}", machine.alphabet().names().join(" "));
    for e in machine.edges() {
        let _ = writeln!(
            s,
            "edge {} {} {} {}",
            e.from,
            machine.alphabet().name(e.symbol),
            format_probability(e.prob),
            e.to
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use proptest::prelude::*;

    #[test]
    fn parses_rationals_and_comments() {
        let text = "# even process\nstates 2\nalphabet 0 1\nedge 0 0 1/2 0 # loop\nedge 0 1 0.5 1\n\nedge 1 1 1 0\n";
        let parsed = parse_machine(text).unwrap();
        assert_eq!(parsed.machine, examples::even(0.5).unwrap());
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn one_third_is_correctly_rounded() {
        assert_eq!(parse_probability("1/3"), Some(1.0 / 3.0));
        assert_eq!(parse_probability("2/0"), None);
        assert_eq!(parse_probability("abc"), None);
    }

    #[test]
    fn zero_edges_warn() {
        let text = "states 1\nalphabet a b\nedge 0 a 1 0\nedge 0 b 0 0\n";
        let parsed = parse_machine(text).unwrap();
        assert_eq!(parsed.machine.edges().len(), 1);
        assert_eq!(parsed.warnings.len(), 1);
    }

    #[test]
    fn structural_errors_carry_line_numbers() {
        let bad = [
            ("alphabet 0 1\n", 1),
            ("states 2\nalphabet 0 1\nedge 0 2 0.5 1\n", 3),
            ("states 2\nalphabet 0 1\nedge 0 0 0.5 2\n", 3),
            ("states 2\nalphabet 0 0\n", 2),
            ("states 2\nalphabet 0 1\nedge 0 0 x 1\n", 3),
            ("states 2\nfrobnicate\n", 2),
        ];
        for (text, line) in bad {
            match parse_machine(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
        assert!(parse_machine("states 2\n").is_err());
    }

    #[test]
    fn writes_seventeen_digits() {
        assert_eq!(format_probability(0.5), "0.50000000000000000");
        assert_eq!(format_probability(1.0), "1.0000000000000000");
        assert_eq!(
            format_probability(1.0 / 3.0).trim_start_matches("0.").len(),
            17
        );
    }

    proptest! {
        #[test]
        fn probabilities_round_trip_bitwise(p in 1e-300f64..1.0) {
            let s = format_probability(p);
            prop_assert_eq!(parse_probability(&s).unwrap().to_bits(), p.to_bits());
        }

        #[test]
        fn machines_round_trip(p in 0.001f64..0.999, q in 0.001f64..0.999) {
            let m = examples::sns(p, q).unwrap();
            let back = parse_machine(&write_machine(&m)).unwrap().machine;
            prop_assert_eq!(back, m);
        }
    }
}
