//! Training sets: the bundled toy problems and the plain-text dataset format.
//!
//! The format is one pattern per line, `<input bits> <class bit>`, with `#`
//! starting a comment. Blank lines are ignored.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub input: Vec<bool>,
    pub target: bool,
}

impl Pattern {
    pub fn new(input: Vec<bool>, target: bool) -> Self {
        Self { input, target }
    }

    /// Input read as an integer with the first bit most significant.
    pub fn input_value(&self) -> u64 {
        self.input.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }
}

/// Ordered list of patterns sharing one input width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    n_inputs: usize,
    patterns: Vec<Pattern>,
}

impl Dataset {
    pub fn new(n_inputs: usize, patterns: Vec<Pattern>) -> Result<Self> {
        if n_inputs == 0 {
            return Err(Error::DatasetParse {
                line: 0,
                message: "patterns need at least one input bit".into(),
            });
        }
        if let Some(p) = patterns.iter().find(|p| p.input.len() != n_inputs) {
            return Err(Error::WidthMismatch {
                what: "pattern".into(),
                expected: n_inputs,
                actual: p.input.len(),
            });
        }
        Ok(Self { n_inputs, patterns })
    }

    /// Builds from `(input value, target)` pairs, values read most-significant first.
    pub fn from_values(n_inputs: usize, rows: impl IntoIterator<Item = (u64, bool)>) -> Result<Self> {
        let patterns = rows
            .into_iter()
            .map(|(x, t)| Pattern::new(bits_of(x, n_inputs), t))
            .collect();
        Self::new(n_inputs, patterns)
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[Pattern] {
        &self.patterns
    }

    /// Same patterns repeated `times` times, in order.
    pub fn repeated(&self, times: usize) -> Self {
        Self {
            n_inputs: self.n_inputs,
            patterns: (0..times).flat_map(|_| self.patterns.iter().cloned()).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.patterns {
            let bits: String = p.input.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "{} {}", bits, p.target as u8)?;
        }
        Ok(())
    }
}

fn bits_of(value: u64, width: usize) -> Vec<bool> {
    (0..width).rev().map(|b| (value >> b) & 1 == 1).collect()
}

/// 2-bit XOR in the order 00, 01, 10, 11.
pub fn builtin_xor() -> Dataset {
    Dataset::from_values(2, [(0b00, false), (0b01, true), (0b10, true), (0b11, false)]).expect("static dataset")
}

/// The 16-row artificial set separating the two bundled 4-input architectures.
pub fn builtin_table1() -> Dataset {
    const CLASSES: [u8; 16] = [1, 1, 0, 1, 1, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1];
    Dataset::from_values(4, (0..16u64).map(|x| (x, CLASSES[x as usize] == 1))).expect("static dataset")
}

/// All 16 four-bit patterns labelled with their parity.
pub fn builtin_parity4() -> Dataset {
    Dataset::from_values(4, (0..16u64).map(|x| (x, x.count_ones() % 2 == 1))).expect("static dataset")
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["xor", "parity4", "table1"];

pub fn builtin(name: &str) -> Option<Dataset> {
    match name {
        "xor" => Some(builtin_xor()),
        "parity4" => Some(builtin_parity4()),
        "table1" => Some(builtin_table1()),
        _ => None,
    }
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut width: Option<usize> = None;
    let mut patterns = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::DatasetParse { line: line_no, message };
        let mut parts = line.split_whitespace();
        let (bits, class) = match (parts.next(), parts.next(), parts.next()) {
            (Some(b), Some(c), None) => (b, c),
            _ => return Err(err("expected `<bits> <class>`".into())),
        };
        let input = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(err(format!("non-binary character `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let target = match class {
            "0" => false,
            "1" => true,
            other if other.chars().all(|c| c == '0' || c == '1') => {
                return Err(err(format!("multi-bit class `{other}` is not supported")))
            }
            other => return Err(err(format!("invalid class `{other}`"))),
        };
        match width {
            None => width = Some(input.len()),
            Some(w) if w != input.len() => {
                return Err(err(format!("ragged width: expected {w} bits, got {}", input.len())))
            }
            _ => {}
        }
        patterns.push(Pattern::new(input, target));
    }
    let n_inputs = width.ok_or(Error::DatasetParse {
        line: 0,
        message: "empty dataset file".into(),
    })?;
    Dataset::new(n_inputs, patterns)
}
