//! Operator library: boolean oracles, memory-read `A` operators, the
//! controlled performance counter, objective marking and the nonlinear OR.

use crate::error::{Error, Result};
use crate::qstate::{BasisLabel, Field, Qubit, SingleQubitGate, SparseState};
use crate::scalar::Real;

/// Total boolean function `f: B^m -> B^n`, stored as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanFunction {
    arity_in: usize,
    arity_out: usize,
    table: Vec<u64>,
}

impl BooleanFunction {
    pub fn from_table(arity_in: usize, arity_out: usize, table: Vec<u64>) -> Result<Self> {
        if arity_in > 24 || arity_out > 63 {
            return Err(Error::InvalidFunction("arity too large".into()));
        }
        if table.len() != 1usize << arity_in {
            return Err(Error::InvalidFunction(format!(
                "expected {} rows, got {}",
                1usize << arity_in,
                table.len()
            )));
        }
        if let Some(v) = table.iter().find(|&&v| v >> arity_out != 0) {
            return Err(Error::InvalidFunction(format!(
                "output {v} does not fit {arity_out} bits"
            )));
        }
        Ok(Self {
            arity_in,
            arity_out,
            table,
        })
    }

    pub fn from_fn(arity_in: usize, arity_out: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        if arity_in > 24 {
            return Err(Error::InvalidFunction("arity too large".into()));
        }
        let table = (0..1u64 << arity_in).map(f).collect();
        Self::from_table(arity_in, arity_out, table)
    }

    pub fn arity_in(&self) -> usize {
        self.arity_in
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }
}

/// Parameters for the qPLN / qMPLN memory-read operators.
#[derive(Clone, Debug, PartialEq)]
pub struct QplnParams<T> {
    /// Operator applied when a qPLN selector pair reads `11`.
    pub u_gate: SingleQubitGate<T>,
    /// Rotation angle per qMPLN selector value, in radians.
    pub angles: Vec<T>,
}

impl<T: Real> Default for QplnParams<T> {
    fn default() -> Self {
        Self {
            u_gate: SingleQubitGate::sqrt_x(),
            angles: Vec::new(),
        }
    }
}

impl<T: Real> QplnParams<T> {
    pub fn with_angles(angles: Vec<T>) -> Self {
        Self {
            angles,
            ..Self::default()
        }
    }
}

fn check_positions<T: Real>(state: &SparseState<T>, qubits: &[Qubit]) -> Result<()> {
    let width = state.layout().total_width();
    for (i, q) in qubits.iter().enumerate() {
        if q.0 >= width {
            return Err(Error::QubitOutOfRange {
                register: "<layout>".into(),
                index: q.0,
                width,
            });
        }
        if qubits[..i].contains(q) {
            return Err(Error::PositionCollision(q.0));
        }
    }
    Ok(())
}

/// `U_f |x, c> = |x, c xor f(x)>` with `x` read from `input_reg`.
pub fn apply_uf<T: Real>(
    state: SparseState<T>,
    f: &BooleanFunction,
    input_reg: &str,
    target_reg: &str,
) -> Result<SparseState<T>> {
    let input = state.layout().field(input_reg)?;
    let target = state.layout().field(target_reg)?;
    if input_reg == target_reg {
        return Err(Error::PositionCollision(input.offset()));
    }
    if input.width() != f.arity_in() {
        return Err(Error::WidthMismatch {
            what: input_reg.into(),
            expected: f.arity_in(),
            actual: input.width(),
        });
    }
    if target.width() != f.arity_out() {
        return Err(Error::WidthMismatch {
            what: target_reg.into(),
            expected: f.arity_out(),
            actual: target.width(),
        });
    }
    Ok(state.map_labels(|l| target.xor(l, f.eval(input.get(l)))))
}

/// Controlled X: flips `output` on entries where `selector` is 1.
pub fn apply_a_cnot<T: Real>(state: SparseState<T>, selector: Qubit, output: Qubit) -> Result<SparseState<T>> {
    check_positions(&state, &[selector, output])?;
    Ok(state.map_labels(|l| if selector.is_set(l) { output.flip(l) } else { l }))
}

/// qPLN read: selector pair `00 -> I`, `01 -> X`, `10 -> H`, `11 -> U` on `output`.
/// The first selector is the high-order bit of the pair.
pub fn apply_a_qpln<T: Real>(
    state: SparseState<T>,
    selectors: [Qubit; 2],
    output: Qubit,
    params: &QplnParams<T>,
) -> Result<SparseState<T>> {
    check_positions(&state, &[selectors[0], selectors[1], output])?;
    if !params.u_gate.is_unitary(T::from_f64(1e-9)) {
        return Err(Error::NotUnitary);
    }
    let x = SingleQubitGate::pauli_x();
    let h = SingleQubitGate::hadamard();
    let u = params.u_gate;
    Ok(
        state.apply_gate_where(output, |l| match (selectors[0].is_set(l), selectors[1].is_set(l)) {
            (false, false) => None,
            (false, true) => Some(x),
            (true, false) => Some(h),
            (true, true) => Some(u),
        }),
    )
}

/// qMPLN read: selector value `k` rotates `output` by `angles[k]` using
/// `[[cos p, -sin p], [sin p, cos p]]`. `selectors[0]` is the high-order bit.
pub fn apply_a_qmpln<T: Real>(
    state: SparseState<T>,
    selectors: &[Qubit],
    output: Qubit,
    params: &QplnParams<T>,
) -> Result<SparseState<T>> {
    let mut all = selectors.to_vec();
    all.push(output);
    check_positions(&state, &all)?;
    if selectors.len() > 20 {
        return Err(Error::MissingAngle(1 << 20));
    }
    let needed = 1usize << selectors.len();
    if params.angles.len() < needed {
        return Err(Error::MissingAngle(params.angles.len()));
    }
    if params.angles.iter().any(|a| !a.is_finite()) {
        return Err(Error::NotUnitary);
    }
    let gates: Vec<_> = params.angles[..needed]
        .iter()
        .map(|&p| SingleQubitGate::rotation(p))
        .collect();
    Ok(state.apply_gate_where(output, |l| {
        let k = selectors
            .iter()
            .fold(0usize, |acc, q| (acc << 1) | q.is_set(l) as usize);
        Some(gates[k])
    }))
}

/// Adds 1 (mod 2^width) to `perf_reg` on entries where `out_reg == desired_reg`.
pub fn increment_if_equal<T: Real>(
    state: SparseState<T>,
    out_reg: &str,
    desired_reg: &str,
    perf_reg: &str,
) -> Result<SparseState<T>> {
    let layout = state.layout();
    let out = layout.field(out_reg)?;
    let desired = layout.field(desired_reg)?;
    let perf = layout.field(perf_reg)?;
    if out.width() != desired.width() {
        return Err(Error::WidthMismatch {
            what: desired_reg.into(),
            expected: out.width(),
            actual: desired.width(),
        });
    }
    if out_reg == perf_reg || desired_reg == perf_reg {
        return Err(Error::PositionCollision(perf.offset()));
    }
    Ok(state.map_labels(move |l| increment_step(l, out, desired, perf)))
}

#[inline]
pub(crate) fn increment_step(l: BasisLabel, out: Field, desired: Field, perf: Field) -> BasisLabel {
    if out.get(l) == desired.get(l) {
        let max = perf.mask() >> perf.offset();
        perf.set(l, (perf.get(l) + 1) & max)
    } else {
        l
    }
}

/// Sets the one-qubit `obj_reg` to `predicate(label)` on every entry.
pub fn mark_objective<T, P>(state: SparseState<T>, predicate: P, obj_reg: &str) -> Result<SparseState<T>>
where
    T: Real,
    P: Fn(BasisLabel) -> bool,
{
    let obj = state.layout().field(obj_reg)?;
    if obj.width() != 1 {
        return Err(Error::WidthMismatch {
            what: obj_reg.into(),
            expected: 1,
            actual: obj.width(),
        });
    }
    state.try_for_each_label(|l| {
        if obj.get(l) == 0 {
            Ok(())
        } else {
            Err(Error::ObjectiveNotClear)
        }
    })?;
    Ok(state.map_labels(|l| if predicate(l) { obj.set(l, 1) } else { l }))
}

/// Result of [`nonlinear_or_counted`].
#[derive(Clone, Debug)]
pub struct NonlinearOr<T> {
    pub state: SparseState<T>,
    pub flag: bool,
    /// Number of labels that collided once the flag was made uniform.
    pub merged: usize,
}

/// Nonlinear OR on a flag qubit: the flag becomes 1 on every entry iff at
/// least one entry carries 1. Colliding labels are summed and the state is
/// renormalized.
pub fn nonlinear_or<T: Real>(state: SparseState<T>, flag_reg: &str) -> Result<(SparseState<T>, bool)> {
    let r = nonlinear_or_counted(state, flag_reg)?;
    Ok((r.state, r.flag))
}

pub fn nonlinear_or_counted<T: Real>(mut state: SparseState<T>, flag_reg: &str) -> Result<NonlinearOr<T>> {
    let field = state.layout().field(flag_reg)?;
    if field.width() != 1 {
        return Err(Error::WidthMismatch {
            what: flag_reg.into(),
            expected: 1,
            actual: field.width(),
        });
    }
    let flag = state.entries().any(|(l, _)| field.get(*l) == 1);
    let value = flag as u64;
    let merged = state.map_labels_merging(|l| field.set(l, value));
    state.renormalize()?;
    Ok(NonlinearOr { state, flag, merged })
}
