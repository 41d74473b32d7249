//! Quantum RAM networks as basis permutations over a [`SparseState`].
//!
//! A network is evaluated neuron by neuron: each non-output neuron writes the
//! selector bit it addresses into its own ancilla qubit, and the output neuron
//! writes into `o`. [`QNetworkOperator::unapply`] runs the same lookups in the
//! reverse order, clearing ancillas and output again. With several
//! architectures the `arch` register picks which one acts on each entry.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::data::{Dataset, Pattern};
use crate::error::{Error, Result};
use crate::qstate::{BasisLabel, Field, Qubit, RegisterLayout, SparseState, DEFAULT_QUBIT_CAP};
use crate::scalar::Real;
use crate::wnn::{Architecture, Source};

pub const REG_INPUT: &str = "i";
pub const REG_SELECTORS: &str = "s";
pub const REG_OUTPUT: &str = "o";
pub const REG_DESIRED: &str = "d";
pub const REG_PERF: &str = "perf";
pub const REG_OBJECTIVE: &str = "obj";
pub const REG_ARCH: &str = "arch";
pub const REG_HIDDEN: &str = "hidden";

/// Bits needed to hold values `0..=n`.
pub(crate) fn bits_for(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Register layout for running a set of architectures over `n_t` patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLayoutPlan {
    layout: Arc<RegisterLayout>,
    pub input: Field,
    pub selectors: Field,
    pub output: Field,
    pub desired: Field,
    pub perf: Field,
    pub objective: Field,
    pub arch: Option<Field>,
    pub hidden: Option<Field>,
    n_patterns: usize,
}

impl QLayoutPlan {
    pub fn layout(&self) -> &Arc<RegisterLayout> {
        &self.layout
    }

    pub fn n_patterns(&self) -> usize {
        self.n_patterns
    }

    /// All-zero state over this layout.
    pub fn zero_state<T: Real>(&self) -> SparseState<T> {
        SparseState::from_label(Arc::clone(&self.layout), BasisLabel(0))
    }
}

pub fn build_plan(archs: &[Architecture], n_t: usize) -> Result<QLayoutPlan> {
    build_plan_with_cap(archs, n_t, DEFAULT_QUBIT_CAP)
}

pub fn build_plan_with_cap(archs: &[Architecture], n_t: usize, cap: usize) -> Result<QLayoutPlan> {
    let first = archs
        .first()
        .ok_or_else(|| Error::InvalidArchitecture("no architectures given".into()))?;
    let n_in = first.n_network_inputs();
    if let Some(a) = archs.iter().find(|a| a.n_network_inputs() != n_in) {
        return Err(Error::WidthMismatch {
            what: format!("inputs of architecture `{}`", a.name()),
            expected: n_in,
            actual: a.n_network_inputs(),
        });
    }
    let s_width = archs.iter().map(Architecture::selector_count).max().unwrap_or(1);
    let perf_width = bits_for(n_t).max(1);
    let hidden_width = archs.iter().map(|a| a.neurons().len() - 1).max().unwrap_or(0);

    let mut regs: Vec<(&str, usize)> = vec![
        (REG_INPUT, n_in),
        (REG_SELECTORS, s_width),
        (REG_OUTPUT, 1),
        (REG_DESIRED, 1),
        (REG_PERF, perf_width),
        (REG_OBJECTIVE, 1),
    ];
    if archs.len() > 1 {
        regs.push((REG_ARCH, bits_for(archs.len() - 1)));
    }
    if hidden_width > 0 {
        regs.push((REG_HIDDEN, hidden_width));
    }
    let layout = Arc::new(RegisterLayout::with_cap(&regs, cap)?);
    let field = |n: &str| layout.field(n);
    Ok(QLayoutPlan {
        input: field(REG_INPUT)?,
        selectors: field(REG_SELECTORS)?,
        output: field(REG_OUTPUT)?,
        desired: field(REG_DESIRED)?,
        perf: field(REG_PERF)?,
        objective: field(REG_OBJECTIVE)?,
        arch: layout.contains(REG_ARCH).then(|| field(REG_ARCH)).transpose()?,
        hidden: layout.contains(REG_HIDDEN).then(|| field(REG_HIDDEN)).transpose()?,
        layout,
        n_patterns: n_t,
    })
}

#[derive(Clone, Debug)]
struct CompiledNeuron {
    sources: Vec<Qubit>,
    memory: Vec<Qubit>,
    target: Qubit,
}

#[derive(Clone, Debug)]
struct CompiledArch {
    neurons: Vec<CompiledNeuron>,
}

/// One or more architectures wired onto a shared layout.
#[derive(Clone, Debug)]
pub struct QNetworkOperator {
    archs: Vec<Architecture>,
    plan: QLayoutPlan,
    compiled: Vec<CompiledArch>,
}

impl QNetworkOperator {
    pub fn new(archs: Vec<Architecture>, plan: QLayoutPlan) -> Result<Self> {
        if archs.is_empty() {
            return Err(Error::InvalidArchitecture("no architectures given".into()));
        }
        let arch_codes = plan.arch.map_or(1, |f| 1usize << f.width());
        if archs.len() > arch_codes {
            return Err(Error::WidthMismatch {
                what: REG_ARCH.into(),
                expected: bits_for(archs.len() - 1),
                actual: plan.arch.map_or(0, Field::width),
            });
        }
        let compiled = archs.iter().map(|a| compile(a, &plan)).collect::<Result<Vec<_>>>()?;
        Ok(Self { archs, plan, compiled })
    }

    /// Builds the plan for `n_t` patterns and the operator in one go.
    pub fn for_archs(archs: Vec<Architecture>, n_t: usize, cap: usize) -> Result<Self> {
        let plan = build_plan_with_cap(&archs, n_t, cap)?;
        Self::new(archs, plan)
    }

    pub fn archs(&self) -> &[Architecture] {
        &self.archs
    }

    pub fn plan(&self) -> &QLayoutPlan {
        &self.plan
    }

    #[inline]
    fn arch_code(&self, l: BasisLabel) -> usize {
        self.plan.arch.map_or(0, |f| f.get(l) as usize)
    }

    #[inline]
    pub(crate) fn forward_label(&self, mut l: BasisLabel) -> BasisLabel {
        let Some(arch) = self.compiled.get(self.arch_code(l)) else {
            return l;
        };
        for n in &arch.neurons {
            if n.memory[address(&n.sources, l)].is_set(l) {
                l = n.target.flip(l);
            }
        }
        l
    }

    #[inline]
    pub(crate) fn backward_label(&self, mut l: BasisLabel) -> BasisLabel {
        let Some(arch) = self.compiled.get(self.arch_code(l)) else {
            return l;
        };
        for n in arch.neurons.iter().rev() {
            if n.memory[address(&n.sources, l)].is_set(l) {
                l = n.target.flip(l);
            }
        }
        l
    }

    fn ancilla_mask(&self) -> u64 {
        self.plan.output.mask() | self.plan.hidden.map_or(0, Field::mask)
    }

    /// Writes every entry's network output into `o`.
    pub fn apply<T: Real>(&self, state: SparseState<T>) -> Result<SparseState<T>> {
        self.check_layout(&state)?;
        let mask = self.ancilla_mask();
        state.try_for_each_label(|l| {
            if l.0 & mask == 0 {
                Ok(())
            } else {
                Err(Error::DirtyAncilla)
            }
        })?;
        Ok(state.map_labels(|l| self.forward_label(l)))
    }

    /// Inverse of [`apply`](Self::apply): clears `o` and the hidden ancillas.
    pub fn unapply<T: Real>(&self, state: SparseState<T>) -> Result<SparseState<T>> {
        self.check_layout(&state)?;
        Ok(state.map_labels(|l| self.backward_label(l)))
    }

    fn check_layout<T: Real>(&self, state: &SparseState<T>) -> Result<()> {
        if state.layout() != self.plan.layout.as_ref() {
            return Err(Error::LayoutMismatch);
        }
        Ok(())
    }
}

#[inline]
fn address(sources: &[Qubit], l: BasisLabel) -> usize {
    sources.iter().fold(0usize, |acc, q| (acc << 1) | q.is_set(l) as usize)
}

fn compile(arch: &Architecture, plan: &QLayoutPlan) -> Result<CompiledArch> {
    let out_of_range = |what: &str, index: usize, width: usize| Error::QubitOutOfRange {
        register: what.into(),
        index,
        width,
    };
    if arch.n_network_inputs() != plan.input.width() {
        return Err(Error::WidthMismatch {
            what: REG_INPUT.into(),
            expected: arch.n_network_inputs(),
            actual: plan.input.width(),
        });
    }
    // Ancilla slot of each non-output neuron.
    let mut slot = vec![None; arch.neurons().len()];
    let mut next = 0;
    for (i, s) in slot.iter_mut().enumerate() {
        if i != arch.output_neuron() {
            *s = Some(next);
            next += 1;
        }
    }
    let hidden_width = plan.hidden.map_or(0, Field::width);
    let hidden_qubit = |j: usize| {
        plan.hidden
            .and_then(|h| h.qubit(j))
            .ok_or_else(|| out_of_range(REG_HIDDEN, j, hidden_width))
    };
    let mut neurons = Vec::with_capacity(arch.neurons().len());
    for (i, neuron) in arch.neurons().iter().enumerate() {
        let sources = neuron
            .sources()
            .iter()
            .map(|src| match *src {
                Source::Input(k) => plan
                    .input
                    .qubit(k)
                    .ok_or_else(|| out_of_range(REG_INPUT, k, plan.input.width())),
                Source::Neuron(n) => hidden_qubit(slot[n].expect("validated: output neuron feeds nothing")),
            })
            .collect::<Result<Vec<_>>>()?;
        let base = arch.selector_offset(i);
        let memory = (0..neuron.memory_size())
            .map(|a| {
                plan.selectors
                    .qubit(base + a)
                    .ok_or_else(|| out_of_range(REG_SELECTORS, base + a, plan.selectors.width()))
            })
            .collect::<Result<Vec<_>>>()?;
        let target = match slot[i] {
            Some(j) => hidden_qubit(j)?,
            None => plan.output.qubit(0).expect("output register has width 1"),
        };
        neurons.push(CompiledNeuron {
            sources,
            memory,
            target,
        });
    }
    Ok(CompiledArch { neurons })
}

pub fn apply_network_forward<T: Real>(state: SparseState<T>, op: &QNetworkOperator) -> Result<SparseState<T>> {
    op.apply(state)
}

pub fn unapply_network_forward<T: Real>(state: SparseState<T>, op: &QNetworkOperator) -> Result<SparseState<T>> {
    op.unapply(state)
}

fn pattern_fields(plan: &QLayoutPlan, pattern: &Pattern) -> Result<(u64, u64)> {
    if pattern.input.len() != plan.input.width() {
        return Err(Error::WidthMismatch {
            what: REG_INPUT.into(),
            expected: plan.input.width(),
            actual: pattern.input.len(),
        });
    }
    Ok((pattern.input_value(), pattern.target as u64))
}

/// XORs `x` into `i` and `d(x)` into `d`; both must be zero beforehand.
pub fn load_pattern<T: Real>(state: SparseState<T>, plan: &QLayoutPlan, pattern: &Pattern) -> Result<SparseState<T>> {
    let (x, d) = pattern_fields(plan, pattern)?;
    xor_pattern(state, plan, (0, 0), (x, d))
}

/// Undoes [`load_pattern`]; `i` and `d` must hold exactly `x` and `d(x)`.
pub fn remove_pattern<T: Real>(state: SparseState<T>, plan: &QLayoutPlan, pattern: &Pattern) -> Result<SparseState<T>> {
    let (x, d) = pattern_fields(plan, pattern)?;
    xor_pattern(state, plan, (x, d), (x, d))
}

fn xor_pattern<T: Real>(
    state: SparseState<T>,
    plan: &QLayoutPlan,
    expect: (u64, u64),
    flip: (u64, u64),
) -> Result<SparseState<T>> {
    let (input, desired) = (plan.input, plan.desired);
    state.try_for_each_label(|l| {
        if input.get(l) != expect.0 {
            Err(Error::RegisterPrecondition(REG_INPUT.into()))
        } else if desired.get(l) != expect.1 {
            Err(Error::RegisterPrecondition(REG_DESIRED.into()))
        } else {
            Ok(())
        }
    })?;
    Ok(state.map_labels(|l| desired.xor(input.xor(l, flip.0), flip.1)))
}

/// Snapshot handed to a presentation listener after each pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationEvent {
    pub pattern_index: usize,
    pub entry_count: usize,
    /// Performance register value to number of entries holding it.
    pub perf_histogram: BTreeMap<u64, usize>,
}

pub type PresentationListener<'a> = dyn FnMut(&PresentationEvent) + 'a;

pub(crate) fn perf_histogram<T: Real>(state: &SparseState<T>, perf: Field) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for (l, _) in state.entries() {
        *h.entry(perf.get(*l)).or_insert(0) += 1;
    }
    h
}

/// Checks the dataset against the plan before an epoch.
pub(crate) fn check_dataset(plan: &QLayoutPlan, data: &Dataset) -> Result<()> {
    if !data.is_empty() && data.n_inputs() != plan.input.width() {
        return Err(Error::WidthMismatch {
            what: "dataset".into(),
            expected: plan.input.width(),
            actual: data.n_inputs(),
        });
    }
    if bits_for(data.len()) > plan.perf.width() {
        return Err(Error::WidthMismatch {
            what: REG_PERF.into(),
            expected: bits_for(data.len()),
            actual: plan.perf.width(),
        });
    }
    Ok(())
}
