//! Reading and writing machine files, sample files and reports. A path of
//! `-` means standard input or output.

use std::fs;
use std::io::{self, Read, Write};

use anyhow::{bail, Context, Result};
use emachine::format::{parse_machine, write_machine};
use emachine::{Alphabet, Machine, Symbol};

pub fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

pub fn write_text(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

/// Parse a machine file without checking stochasticity; parse warnings go to
/// stderr.
pub fn load_machine_raw(path: &str) -> Result<Machine> {
    let text = read_text(path)?;
    let parsed = parse_machine(&text).with_context(|| format!("parsing {path}"))?;
    for w in &parsed.warnings {
        eprintln!("{path}: {w}");
    }
    Ok(parsed.machine)
}

/// Parse a machine file and reject it unless every row is stochastic.
pub fn load_machine(path: &str) -> Result<Machine> {
    let m = load_machine_raw(path)?;
    let report = m.validate(emachine::machine::EPS_STOCH);
    if let Some(v) = report.violations.first() {
        bail!("{path}: invalid machine: {v}");
    }
    Ok(m)
}

pub fn write_machine_to(path: &str, m: &Machine) -> Result<()> {
    write_text(path, &write_machine(m))
}

pub const ALPHABET_HEADER: &str = "# alphabet";

/// Sample file text: an alphabet header, then one symbol per line, or the
/// whole run on one line when `packed`.
pub fn format_sample(alphabet: &Alphabet, symbols: &[Symbol], packed: bool) -> String {
    let mut s = format!("{ALPHABET_HEADER} {}\n", alphabet.names().join(" "));
    if packed {
        s.push_str(&alphabet.format_word(symbols));
        s.push('\n');
    } else {
        for &x in symbols {
            s.push_str(alphabet.name(x));
            s.push('\n');
        }
    }
    s
}

/// Read a sample file. With an alphabet header, every line is a word over
/// that alphabet. Without one, every non-blank character is a symbol and
/// the alphabet is the sorted set of characters seen.
pub fn parse_sample(text: &str) -> Result<(Alphabet, Vec<Symbol>)> {
    let mut alphabet: Option<Alphabet> = None;
    let mut body = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(ALPHABET_HEADER) {
            if alphabet.is_some() || !body.is_empty() {
                bail!("line {}: alphabet header must come first", i + 1);
            }
            alphabet = Some(Alphabet::new(rest.split_whitespace())?);
        } else if !trimmed.is_empty() && !trimmed.starts_with('#') {
            body.push((i + 1, trimmed));
        }
    }
    match alphabet {
        Some(a) => {
            let mut symbols = Vec::new();
            for (line, text) in body {
                let w = a.parse_word(text).with_context(|| format!("line {line}"))?;
                symbols.extend(w);
            }
            Ok((a, symbols))
        }
        None => {
            let mut chars: Vec<char> = body
                .iter()
                .flat_map(|(_, t)| t.chars())
                .filter(|c| !c.is_whitespace())
                .collect();
            let all = chars.clone();
            chars.sort_unstable();
            chars.dedup();
            if chars.is_empty() {
                bail!("sample contains no symbols");
            }
            let a = Alphabet::new(chars.iter().map(|c| c.to_string()))?;
            let symbols = all
                .iter()
                .map(|c| chars.binary_search(c).expect("character was collected"))
                .collect();
            Ok((a, symbols))
        }
    }
}

pub fn load_sample(path: &str) -> Result<(Alphabet, Vec<Symbol>)> {
    parse_sample(&read_text(path)?).with_context(|| format!("reading sample {path}"))
}

/// Sidecar path of the state map written next to a minimized machine.
pub fn sidecar(path: &str) -> String {
    format!("{path}.map")
}
