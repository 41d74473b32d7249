//! Classical RAM neurons, feed-forward weightless networks and the
//! exhaustive oracle used as ground truth for the quantum path.
//!
//! A neuron with inputs `(x1, ..., xn)` reads memory address
//! `x1 x2 ... xn` with `x1` as the most significant bit. A selector string is
//! the concatenation of every neuron's memory, in neuron order.
//!
//! Architecture files look like this:
//!
//! ```text
//! # comment
//! name n1
//! inputs 4
//! neuron in:0 in:1 in:2
//! neuron in:3
//! neuron n:0 n:1
//! output 2
//! ```
//!
//! `in:k` is network input `k` and `n:k` the output of neuron `k`, both 0-based.

use std::fmt;

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{Error, Result};

/// Default limit on selector bits for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

const MAX_NEURON_INPUTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Input(usize),
    Neuron(usize),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Input(i) => write!(f, "in:{i}"),
            Source::Neuron(n) => write!(f, "n:{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamNeuron {
    sources: Vec<Source>,
}

impl RamNeuron {
    pub fn new(sources: Vec<Source>) -> Self {
        Self { sources }
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    pub fn n_inputs(&self) -> usize {
        self.sources.len()
    }

    pub fn memory_size(&self) -> usize {
        1 << self.sources.len()
    }
}

/// Feed-forward wiring of RAM neurons with a single network output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Architecture {
    name: String,
    n_network_inputs: usize,
    neurons: Vec<RamNeuron>,
    output_neuron: usize,
    selector_offsets: Vec<usize>,
    selector_count: usize,
}

impl Architecture {
    pub fn new(
        name: impl Into<String>,
        n_network_inputs: usize,
        neurons: Vec<RamNeuron>,
        output_neuron: usize,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |m: String| Error::InvalidArchitecture(format!("{name}: {m}"));
        if n_network_inputs == 0 {
            return Err(invalid("needs at least one network input".into()));
        }
        if neurons.is_empty() {
            return Err(invalid("needs at least one neuron".into()));
        }
        if output_neuron >= neurons.len() {
            return Err(invalid(format!("output neuron {output_neuron} does not exist")));
        }
        let mut input_used = vec![false; n_network_inputs];
        for (idx, neuron) in neurons.iter().enumerate() {
            if neuron.n_inputs() == 0 || neuron.n_inputs() > MAX_NEURON_INPUTS {
                return Err(invalid(format!(
                    "neuron {idx} must have between 1 and {MAX_NEURON_INPUTS} inputs"
                )));
            }
            for src in neuron.sources() {
                match *src {
                    Source::Input(i) => {
                        if i >= n_network_inputs {
                            return Err(invalid(format!("neuron {idx} reads missing input {i}")));
                        }
                        if input_used[i] {
                            return Err(invalid(format!("network input {i} is wired more than once")));
                        }
                        input_used[i] = true;
                    }
                    Source::Neuron(n) => {
                        if n >= idx {
                            return Err(invalid(format!(
                                "neuron {idx} reads neuron {n}, which is not strictly earlier"
                            )));
                        }
                        if n == output_neuron {
                            return Err(invalid("the output neuron cannot feed another neuron".into()));
                        }
                    }
                }
            }
        }
        let mut selector_offsets = Vec::with_capacity(neurons.len());
        let mut acc = 0usize;
        for n in &neurons {
            selector_offsets.push(acc);
            acc += n.memory_size();
        }
        Ok(Self {
            name,
            n_network_inputs,
            neurons,
            output_neuron,
            selector_offsets,
            selector_count: acc,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_network_inputs(&self) -> usize {
        self.n_network_inputs
    }

    pub fn neurons(&self) -> &[RamNeuron] {
        &self.neurons
    }

    pub fn output_neuron(&self) -> usize {
        self.output_neuron
    }

    /// Number of memory bits across all neurons.
    pub fn selector_count(&self) -> usize {
        self.selector_count
    }

    /// Index of neuron `n`'s first memory bit in the selector string.
    pub fn selector_offset(&self, n: usize) -> usize {
        self.selector_offsets[n]
    }

    /// Parses the text format; `default_name` is used when the file has no `name` line.
    pub fn parse(text: &str, default_name: &str) -> Result<Self> {
        let mut name = None;
        let mut inputs = None;
        let mut neurons = Vec::new();
        let mut output = None;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::ArchitectureParse { line: line_no, message };
            let mut words = line.split_whitespace();
            let key = words.next().unwrap_or_default();
            let rest: Vec<&str> = words.collect();
            match key {
                "name" => match rest.as_slice() {
                    [n] => name = Some((*n).to_string()),
                    _ => return Err(err("expected `name <identifier>`".into())),
                },
                "inputs" => match rest.as_slice() {
                    [n] => inputs = Some(n.parse::<usize>().map_err(|_| err(format!("bad input count `{n}`")))?),
                    _ => return Err(err("expected `inputs <count>`".into())),
                },
                "neuron" => {
                    if output.is_some() {
                        return Err(err("neuron declared after `output`".into()));
                    }
                    let sources = rest
                        .iter()
                        .map(|tok| parse_source(tok).ok_or_else(|| err(format!("bad source `{tok}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    neurons.push(RamNeuron::new(sources));
                }
                "output" => match rest.as_slice() {
                    [n] => output = Some(n.parse::<usize>().map_err(|_| err(format!("bad output index `{n}`")))?),
                    _ => return Err(err("expected `output <neuron index>`".into())),
                },
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let missing = |what: &str| Error::ArchitectureParse {
            line: last_line,
            message: format!("missing `{what}` line"),
        };
        let inputs = inputs.ok_or_else(|| missing("inputs"))?;
        let output = output.ok_or_else(|| missing("output"))?;
        Self::new(
            name.unwrap_or_else(|| default_name.to_string()),
            inputs,
            neurons,
            output,
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("name {}\ninputs {}\n", self.name, self.n_network_inputs);
        for n in &self.neurons {
            let srcs: Vec<String> = n.sources().iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("neuron {}\n", srcs.join(" ")));
        }
        out.push_str(&format!("output {}\n", self.output_neuron));
        out
    }
}

fn parse_source(tok: &str) -> Option<Source> {
    if let Some(i) = tok.strip_prefix("in:") {
        i.parse().ok().map(Source::Input)
    } else if let Some(n) = tok.strip_prefix("n:") {
        n.parse().ok().map(Source::Neuron)
    } else {
        None
    }
}

/// Names accepted by [`builtin_arch`].
pub const BUILTIN_ARCHS: [&str; 4] = ["single2", "pyramid4", "n0", "n1"];

pub fn builtin_arch(name: &str) -> Option<Architecture> {
    let text = match name {
        "single2" => include_str!("../fixtures/archs/single2.arch"),
        "pyramid4" => include_str!("../fixtures/archs/pyramid4.arch"),
        "n0" => include_str!("../fixtures/archs/n0.arch"),
        "n1" => include_str!("../fixtures/archs/n1.arch"),
        _ => return None,
    };
    Some(Architecture::parse(text, name).expect("bundled architecture parses"))
}

/// Memory contents of every neuron, concatenated in neuron order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelectorString {
    bits: Vec<bool>,
}

impl SelectorString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    /// `value` read with the first selector bit most significant.
    pub fn from_value(value: u64, len: usize) -> Self {
        Self {
            bits: (0..len).rev().map(|b| (value >> b) & 1 == 1).collect(),
        }
    }

    /// Accepts `0`/`1` with optional spaces, commas or underscores between groups.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                ' ' | ',' | '_' => {}
                _ => return Err(Error::InvalidBits(text.to_string())),
            }
        }
        if bits.is_empty() {
            return Err(Error::InvalidBits(text.to_string()));
        }
        Ok(Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn value(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    /// Bits split per neuron with spaces, e.g. `01010111 01 1101`.
    pub fn grouped(&self, arch: &Architecture) -> String {
        let mut parts = Vec::new();
        for (i, n) in arch.neurons().iter().enumerate() {
            let start = arch.selector_offset(i);
            let end = (start + n.memory_size()).min(self.bits.len());
            if start >= end {
                break;
            }
            parts.push(bits_to_string(&self.bits[start..end]));
        }
        parts.join(" ")
    }
}

impl fmt::Display for SelectorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.bits))
    }
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Output of the network on input `x`.
pub fn eval_network(arch: &Architecture, s: &SelectorString, x: &[bool]) -> Result<bool> {
    if x.len() != arch.n_network_inputs() {
        return Err(Error::WidthMismatch {
            what: "input pattern".into(),
            expected: arch.n_network_inputs(),
            actual: x.len(),
        });
    }
    if s.len() != arch.selector_count() {
        return Err(Error::WidthMismatch {
            what: "selector string".into(),
            expected: arch.selector_count(),
            actual: s.len(),
        });
    }
    Ok(eval_unchecked(arch, s.bits(), x))
}

fn eval_unchecked(arch: &Architecture, s: &[bool], x: &[bool]) -> bool {
    let mut outputs = Vec::with_capacity(arch.neurons().len());
    for (i, neuron) in arch.neurons().iter().enumerate() {
        let address = neuron.sources().iter().fold(0usize, |acc, src| {
            let bit = match *src {
                Source::Input(k) => x[k],
                Source::Neuron(n) => outputs[n],
            };
            (acc << 1) | bit as usize
        });
        outputs.push(s[arch.selector_offset(i) + address]);
    }
    outputs[arch.output_neuron()]
}

/// Number of patterns the configured network classifies correctly.
pub fn performance(arch: &Architecture, s: &SelectorString, data: &Dataset) -> Result<usize> {
    if data.n_inputs() != arch.n_network_inputs() && !data.is_empty() {
        return Err(Error::WidthMismatch {
            what: "dataset".into(),
            expected: arch.n_network_inputs(),
            actual: data.n_inputs(),
        });
    }
    let mut correct = 0;
    for p in data.patterns() {
        if eval_network(arch, s, &p.input)? == p.target {
            correct += 1;
        }
    }
    Ok(correct)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleHit {
    pub arch_index: usize,
    pub selectors: SelectorString,
    pub performance: usize,
}

/// Every `(architecture, selector)` pair scoring at least `theta`, sorted by
/// architecture index and then selector value.
pub fn oracle_search(archs: &[Architecture], data: &Dataset, theta: usize) -> Result<Vec<OracleHit>> {
    oracle_search_with_cap(archs, data, theta, DEFAULT_ENUMERATION_CAP)
}

pub fn oracle_search_with_cap(
    archs: &[Architecture],
    data: &Dataset,
    theta: usize,
    cap: usize,
) -> Result<Vec<OracleHit>> {
    for arch in archs {
        if arch.selector_count() > cap.min(40) {
            return Err(Error::EnumerationCap {
                name: arch.name().to_string(),
                selectors: arch.selector_count(),
                cap,
            });
        }
        if data.n_inputs() != arch.n_network_inputs() {
            return Err(Error::WidthMismatch {
                what: "dataset".into(),
                expected: arch.n_network_inputs(),
                actual: data.n_inputs(),
            });
        }
    }
    let mut hits = Vec::new();
    for (arch_index, arch) in archs.iter().enumerate() {
        let n = arch.selector_count();
        let found: Vec<OracleHit> = (0..1u64 << n)
            .into_par_iter()
            .filter_map(|v| {
                let s = SelectorString::from_value(v, n);
                let perf = data
                    .patterns()
                    .iter()
                    .filter(|p| eval_unchecked(arch, s.bits(), &p.input) == p.target)
                    .count();
                (perf >= theta).then_some(OracleHit {
                    arch_index,
                    selectors: s,
                    performance: perf,
                })
            })
            .collect();
        hits.extend(found);
    }
    Ok(hits)
}
