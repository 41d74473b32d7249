//! Sparse complex state vector over a layout of named qubit registers.
//!
//! A basis label packs every register into one machine word. The first
//! register of the layout occupies the most significant bits, and inside a
//! register the leftmost displayed character is the most significant bit, so
//! sorting labels ascending is the same as sorting the displayed kets
//! lexicographically.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest layout accepted unless a caller asks for something else.
pub const DEFAULT_QUBIT_CAP: usize = 48;

/// Entries whose amplitude magnitude falls below this are dropped.
pub const DEFAULT_PRUNE_THRESHOLD: f64 = 1e-12;

/// Computational basis state, one bit per qubit of the layout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(pub u64);

/// Global qubit position inside a label; position 0 is the least significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qubit(pub usize);

impl Qubit {
    #[inline]
    pub fn is_set(self, label: BasisLabel) -> bool {
        (label.0 >> self.0) & 1 == 1
    }

    #[inline]
    pub fn flip(self, label: BasisLabel) -> BasisLabel {
        BasisLabel(label.0 ^ (1u64 << self.0))
    }

    #[inline]
    pub fn with(self, label: BasisLabel, bit: bool) -> BasisLabel {
        let mask = 1u64 << self.0;
        BasisLabel(if bit { label.0 | mask } else { label.0 & !mask })
    }
}

/// Bit-field view of one register inside a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    offset: u32,
    width: u32,
}

impl Field {
    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn offset(self) -> usize {
        self.offset as usize
    }

    #[inline]
    pub fn mask(self) -> u64 {
        low_mask(self.width) << self.offset
    }

    #[inline]
    pub fn get(self, label: BasisLabel) -> u64 {
        (label.0 >> self.offset) & low_mask(self.width)
    }

    #[inline]
    pub fn set(self, label: BasisLabel, value: u64) -> BasisLabel {
        debug_assert!(value <= low_mask(self.width));
        BasisLabel((label.0 & !self.mask()) | (value << self.offset))
    }

    #[inline]
    pub fn xor(self, label: BasisLabel, value: u64) -> BasisLabel {
        debug_assert!(value <= low_mask(self.width));
        BasisLabel(label.0 ^ (value << self.offset))
    }

    /// Qubit holding the `index`-th displayed character (0 = leftmost).
    pub fn qubit(self, index: usize) -> Option<Qubit> {
        (index < self.width()).then(|| Qubit(self.offset() + self.width() - 1 - index))
    }

    /// Renders the field value as a bit string, most significant bit first.
    pub fn format(self, label: BasisLabel) -> String {
        format_bits(self.get(label), self.width())
    }
}

#[inline]
fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

pub(crate) fn format_bits(value: u64, width: usize) -> String {
    (0..width)
        .rev()
        .map(|b| if (value >> b) & 1 == 1 { '1' } else { '0' })
        .collect()
}

pub(crate) fn parse_bits(bits: &str) -> Result<u64> {
    if bits.len() > 64 || bits.is_empty() {
        return Err(Error::InvalidBits(bits.to_string()));
    }
    bits.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::InvalidBits(bits.to_string())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub width: usize,
}

/// Ordered, named registers packed into one basis label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<Register>,
    offsets: Vec<usize>,
    total_width: usize,
}

impl RegisterLayout {
    pub fn new<S: AsRef<str>>(registers: &[(S, usize)]) -> Result<Self> {
        Self::with_cap(registers, DEFAULT_QUBIT_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(registers: &[(S, usize)], cap: usize) -> Result<Self> {
        let mut out: Vec<Register> = Vec::with_capacity(registers.len());
        for (name, width) in registers {
            let name = name.as_ref();
            if *width == 0 {
                return Err(Error::ZeroWidthRegister(name.to_string()));
            }
            if out.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRegister(name.to_string()));
            }
            out.push(Register {
                name: name.to_string(),
                width: *width,
            });
        }
        let total_width: usize = out.iter().map(|r| r.width).sum();
        let cap = cap.min(63);
        if total_width > cap {
            return Err(Error::QubitCap {
                required: total_width,
                cap,
            });
        }
        let mut offsets = vec![0; out.len()];
        let mut acc = 0;
        for (i, r) in out.iter().enumerate().rev() {
            offsets[i] = acc;
            acc += r.width;
        }
        Ok(Self {
            registers: out,
            offsets,
            total_width,
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn total_width(&self) -> usize {
        self.total_width
    }

    pub fn contains(&self, name: &str) -> bool {
        self.registers.iter().any(|r| r.name == name)
    }

    pub fn field(&self, name: &str) -> Result<Field> {
        let idx = self
            .registers
            .iter()
            .position(|r| r.name == name)
            .ok_or_else(|| Error::UnknownRegister(name.to_string()))?;
        Ok(Field {
            offset: self.offsets[idx] as u32,
            width: self.registers[idx].width as u32,
        })
    }

    /// Position of the `index`-th qubit (0 = leftmost) of `register`.
    pub fn qubit(&self, register: &str, index: usize) -> Result<Qubit> {
        let field = self.field(register)?;
        field.qubit(index).ok_or_else(|| Error::QubitOutOfRange {
            register: register.to_string(),
            index,
            width: field.width(),
        })
    }

    /// Ket string with registers separated by single spaces.
    pub fn format_label(&self, label: BasisLabel) -> String {
        self.registers
            .iter()
            .zip(&self.offsets)
            .map(|(r, &off)| format_bits((label.0 >> off) & low_mask(r.width as u32), r.width))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn label_from_assignment<S: AsRef<str>, B: AsRef<str>>(&self, assignment: &[(S, B)]) -> Result<BasisLabel> {
        for (name, _) in assignment {
            if !self.contains(name.as_ref()) {
                return Err(Error::UnknownRegister(name.as_ref().to_string()));
            }
        }
        let mut label = BasisLabel(0);
        for reg in &self.registers {
            let (_, bits) = assignment
                .iter()
                .find(|(n, _)| n.as_ref() == reg.name)
                .ok_or_else(|| Error::MissingAssignment(reg.name.clone()))?;
            let bits = bits.as_ref();
            if bits.chars().count() != reg.width {
                return Err(Error::WidthMismatch {
                    what: reg.name.clone(),
                    expected: reg.width,
                    actual: bits.chars().count(),
                });
            }
            let value = parse_bits(bits)?;
            label = self.field(&reg.name)?.set(label, value);
        }
        Ok(label)
    }
}

/// Dense single-qubit operator, rows indexed by output bit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitGate<T> {
    pub matrix: [[Complex<T>; 2]; 2],
}

impl<T: Real> SingleQubitGate<T> {
    pub fn new(matrix: [[Complex<T>; 2]; 2]) -> Self {
        Self { matrix }
    }

    pub fn from_real(m: [[T; 2]; 2]) -> Self {
        let c = |v: T| Complex::new(v, T::zero());
        Self::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::from_real([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn pauli_x() -> Self {
        Self::from_real([[T::zero(), T::one()], [T::one(), T::zero()]])
    }

    pub fn hadamard() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::from_real([[h, h], [h, -h]])
    }

    /// Real rotation `[[cos p, -sin p], [sin p, cos p]]`.
    pub fn rotation(angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::from_real([[c, -s], [s, c]])
    }

    /// `exp(-i pi/4 X)`: a square root of X without the global phase.
    pub fn sqrt_x() -> Self {
        let h = T::FRAC_1_SQRT_2();
        let re = Complex::new(h, T::zero());
        let im = Complex::new(T::zero(), -h);
        Self::new([[re, im], [im, re]])
    }

    /// Checks `U^dagger U = I` entry-wise within `tol`.
    pub fn is_unitary(&self, tol: T) -> bool {
        let m = &self.matrix;
        if m.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return false;
        }
        (0..2).all(|i| {
            (0..2).all(|j| {
                let dot = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let want = if i == j { T::one() } else { T::zero() };
                (dot - Complex::new(want, T::zero())).norm() <= tol
            })
        })
    }
}

/// Registers and their measured values, in the order they were requested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementOutcome {
    pub values: Vec<(String, String)>,
}

impl MeasurementOutcome {
    pub fn get(&self, register: &str) -> Option<&str> {
        self.values.iter().find(|(n, _)| n == register).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for MeasurementOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(n, v)| format!("{n}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Map from basis labels to amplitudes.
///
/// Labels are unique. Storage order is deterministic but unspecified; use
/// [`SparseState::sorted_entries`] when order matters.
#[derive(Clone, Debug)]
pub struct SparseState<T> {
    layout: Arc<RegisterLayout>,
    entries: Vec<(BasisLabel, Complex<T>)>,
    prune: T,
}

impl<T: Real> SparseState<T> {
    /// Single-entry state with amplitude 1 on the assigned label.
    pub fn init_basis<S: AsRef<str>, B: AsRef<str>>(
        layout: impl Into<Arc<RegisterLayout>>,
        assignment: &[(S, B)],
    ) -> Result<Self> {
        let layout = layout.into();
        let label = layout.label_from_assignment(assignment)?;
        Ok(Self::from_label(layout, label))
    }

    pub fn from_label(layout: impl Into<Arc<RegisterLayout>>, label: BasisLabel) -> Self {
        Self {
            layout: layout.into(),
            entries: vec![(label, Complex::new(T::one(), T::zero()))],
            prune: T::from_f64(DEFAULT_PRUNE_THRESHOLD),
        }
    }

    /// Builds a state from raw entries. Duplicate labels are summed and tiny
    /// amplitudes pruned; no normalization is applied.
    pub fn from_entries(
        layout: impl Into<Arc<RegisterLayout>>,
        entries: impl IntoIterator<Item = (BasisLabel, Complex<T>)>,
    ) -> Result<Self> {
        let layout = layout.into();
        let limit = if layout.total_width() >= 64 {
            u64::MAX
        } else {
            1u64 << layout.total_width()
        };
        let mut state = Self {
            layout,
            entries: Vec::new(),
            prune: T::from_f64(DEFAULT_PRUNE_THRESHOLD),
        };
        for (label, amp) in entries {
            if label.0 >= limit && limit != u64::MAX {
                return Err(Error::InvalidBits(format!("{:#x}", label.0)));
            }
            state.entries.push((label, amp));
        }
        state.merge_and_prune();
        Ok(state)
    }

    pub fn with_prune_threshold(mut self, threshold: T) -> Self {
        self.prune = threshold;
        self.merge_and_prune();
        self
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> Arc<RegisterLayout> {
        Arc::clone(&self.layout)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &(BasisLabel, Complex<T>)> {
        self.entries.iter()
    }

    pub fn sorted_entries(&self) -> Vec<(BasisLabel, Complex<T>)> {
        let mut v = self.entries.clone();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex<T> {
        self.entries
            .iter()
            .find(|e| e.0 == label)
            .map(|e| e.1)
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    /// Applies H to the listed qubits (0 = leftmost) of `register`.
    pub fn apply_hadamard<I>(self, register: &str, qubits: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let positions = qubits
            .into_iter()
            .map(|q| self.layout.qubit(register, q))
            .collect::<Result<Vec<_>>>()?;
        let h = SingleQubitGate::hadamard();
        let mut state = self;
        for q in positions {
            state = state.apply_gate_where(q, |_| Some(h));
        }
        Ok(state)
    }

    /// Applies H to every qubit of `register`.
    pub fn apply_hadamard_all(self, register: &str) -> Result<Self> {
        let width = self.layout.field(register)?.width();
        self.apply_hadamard(register, 0..width)
    }

    /// Applies the gate chosen per entry to `target`; `None` leaves the entry alone.
    pub(crate) fn apply_gate_where<F>(mut self, target: Qubit, gate_for: F) -> Self
    where
        F: Fn(BasisLabel) -> Option<SingleQubitGate<T>>,
    {
        let mut out = Vec::with_capacity(self.entries.len() * 2);
        for &(label, amp) in &self.entries {
            match gate_for(label) {
                None => out.push((label, amp)),
                Some(g) => {
                    let col = target.is_set(label) as usize;
                    out.push((target.with(label, false), g.matrix[0][col] * amp));
                    out.push((target.with(label, true), g.matrix[1][col] * amp));
                }
            }
        }
        self.entries = out;
        self.merge_and_prune();
        self
    }

    /// Rewrites every label through `map`, failing if two labels collide.
    pub fn apply_permutation<F>(self, map: F) -> Result<Self>
    where
        F: Fn(BasisLabel) -> BasisLabel,
    {
        let limit_bits = self.layout.total_width();
        let state = self.map_labels(map);
        let mut labels: Vec<u64> = state.entries.iter().map(|e| e.0 .0).collect();
        labels.sort_unstable();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::NotBijective(w[0]));
        }
        if limit_bits < 64 {
            if let Some(&top) = labels.last() {
                if top >> limit_bits != 0 {
                    return Err(Error::InvalidBits(format!("{top:#x}")));
                }
            }
        }
        Ok(state)
    }

    /// Label rewrite for maps that are bijective by construction.
    pub(crate) fn map_labels<F>(mut self, map: F) -> Self
    where
        F: Fn(BasisLabel) -> BasisLabel,
    {
        for e in &mut self.entries {
            e.0 = map(e.0);
        }
        self
    }

    pub(crate) fn try_for_each_label<F>(&self, mut check: F) -> Result<()>
    where
        F: FnMut(BasisLabel) -> Result<()>,
    {
        self.entries.iter().try_for_each(|e| check(e.0))
    }

    /// Like `map_labels`, but labels may collide; colliding amplitudes are
    /// summed. Returns the number of merged labels.
    pub(crate) fn map_labels_merging<F>(&mut self, map: F) -> usize
    where
        F: Fn(BasisLabel) -> BasisLabel,
    {
        let before = self.entries.len();
        for e in &mut self.entries {
            e.0 = map(e.0);
        }
        self.entries.sort_unstable_by_key(|e| e.0);
        let merged = merge_sorted(&mut self.entries);
        self.entries.retain(|e| e.1.norm() >= self.prune);
        debug_assert!(merged <= before);
        merged
    }

    pub(crate) fn renormalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || !norm.is_finite() {
            return Err(Error::Defect("state norm vanished".into()));
        }
        for e in &mut self.entries {
            e.1 = e.1 / norm;
        }
        Ok(())
    }

    /// Samples the named registers by their marginal Born probabilities and
    /// returns the outcome with the projected, renormalized state.
    pub fn measure<R, S>(&self, registers: &[S], rng: &mut R) -> Result<(MeasurementOutcome, Self)>
    where
        R: Rng + ?Sized,
        S: AsRef<str>,
    {
        if registers.is_empty() {
            return Err(Error::EmptyRegisterSet);
        }
        let fields = registers
            .iter()
            .map(|r| self.layout.field(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mask = fields.iter().fold(0u64, |m, f| m | f.mask());

        let mut marginal: BTreeMap<u64, f64> = BTreeMap::new();
        for (label, amp) in &self.entries {
            *marginal.entry(label.0 & mask).or_insert(0.0) += amp.norm_sqr().to_f64();
        }
        let total: f64 = marginal.values().sum();
        if total.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Defect("cannot measure a zero state".into()));
        }
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut chosen = *marginal.keys().next_back().expect("non-empty state");
        for (&key, &p) in &marginal {
            acc += p;
            if target < acc {
                chosen = key;
                break;
            }
        }

        let mut collapsed = Self {
            layout: Arc::clone(&self.layout),
            entries: self
                .entries
                .iter()
                .filter(|e| e.0 .0 & mask == chosen)
                .copied()
                .collect(),
            prune: self.prune,
        };
        collapsed.renormalize()?;
        let outcome = MeasurementOutcome {
            values: registers
                .iter()
                .zip(&fields)
                .map(|(r, f)| (r.as_ref().to_string(), f.format(BasisLabel(chosen))))
                .collect(),
        };
        Ok((outcome, collapsed))
    }

    /// Label-wise amplitude comparison; global phase is not factored out.
    pub fn state_equal(&self, other: &Self, tol: T) -> Result<bool> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        let mut diff: BTreeMap<BasisLabel, Complex<T>> = BTreeMap::new();
        for &(l, a) in &self.entries {
            *diff.entry(l).or_default() = a;
        }
        for &(l, b) in &other.entries {
            let e = diff.entry(l).or_default();
            *e = *e - b;
        }
        Ok(diff.values().all(|d| d.norm() <= tol))
    }

    /// One line per entry, `<ket grouped by register> <re> <im>`, ascending label.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (label, amp) in self.sorted_entries() {
            out.push_str(&format!("{} {} {}\n", self.layout.format_label(label), amp.re, amp.im));
        }
        out
    }

    fn merge_and_prune(&mut self) {
        self.entries.sort_unstable_by_key(|e| e.0);
        merge_sorted(&mut self.entries);
        let prune = self.prune;
        self.entries.retain(|e| e.1.norm() >= prune);
    }
}

fn merge_sorted<T: Real>(entries: &mut Vec<(BasisLabel, Complex<T>)>) -> usize {
    let before = entries.len();
    entries.dedup_by(|next, kept| {
        if next.0 == kept.0 {
            kept.1 = kept.1 + next.1;
            true
        } else {
            false
        }
    });
    before - entries.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn layout(regs: &[(&str, usize)]) -> Arc<RegisterLayout> {
        Arc::new(RegisterLayout::new(regs).unwrap())
    }

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn layout_offsets_put_first_register_high() {
        let l = layout(&[("s", 4), ("perf", 3)]);
        assert_eq!(l.field("s").unwrap().offset(), 3);
        assert_eq!(l.field("perf").unwrap().offset(), 0);
        assert_eq!(l.qubit("s", 0).unwrap(), Qubit(6));
        assert_eq!(l.qubit("s", 3).unwrap(), Qubit(3));
        assert!(l.qubit("s", 4).is_err());
    }

    #[test]
    fn layout_rejects_bad_registers() {
        assert!(matches!(
            RegisterLayout::new(&[("a", 1), ("a", 2)]),
            Err(Error::DuplicateRegister(_))
        ));
        assert!(matches!(
            RegisterLayout::new(&[("a", 0)]),
            Err(Error::ZeroWidthRegister(_))
        ));
        assert!(matches!(
            RegisterLayout::new(&[("a", 40), ("b", 9)]),
            Err(Error::QubitCap { required: 49, cap: 48 })
        ));
        assert!(RegisterLayout::with_cap(&[("a", 40), ("b", 9)], 50).is_ok());
    }

    #[test]
    fn init_basis_single_entry() {
        let s = SparseState::<f64>::init_basis(layout(&[("i", 2)]), &[("i", "00")]).unwrap();
        assert_eq!(s.dump(), "00 1 0\n");

        let s = SparseState::<f64>::init_basis(layout(&[("s", 4), ("perf", 3)]), &[("s", "0110"), ("perf", "000")])
            .unwrap();
        assert_eq!(s.dump(), "0110 000 1 0\n");
        assert_eq!(s.sorted_entries()[0].0, BasisLabel(0b011_0000));
    }

    #[test]
    fn init_basis_errors() {
        let l = layout(&[("i", 2)]);
        assert!(matches!(
            SparseState::<f64>::init_basis(l.clone(), &[("i", "001")]),
            Err(Error::WidthMismatch { .. })
        ));
        assert!(matches!(
            SparseState::<f64>::init_basis(l.clone(), &[("i", "00"), ("x", "1")]),
            Err(Error::UnknownRegister(_))
        ));
        assert!(matches!(
            SparseState::<f64>::init_basis(l.clone(), &[("i", "0a")]),
            Err(Error::InvalidBits(_))
        ));
        let empty: [(&str, &str); 0] = [];
        assert!(matches!(
            SparseState::<f64>::init_basis(l, &empty),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn hadamard_two_qubits_uniform() {
        let s = SparseState::<f64>::init_basis(layout(&[("i", 2)]), &[("i", "00")])
            .unwrap()
            .apply_hadamard_all("i")
            .unwrap();
        assert_eq!(s.len(), 4);
        for (_, a) in s.entries() {
            assert!((a - c(0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn hadamard_single_and_self_inverse() {
        let l = layout(&[("q", 1)]);
        let s = SparseState::<f64>::init_basis(l.clone(), &[("q", "0")])
            .unwrap()
            .apply_hadamard("q", [0])
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(BasisLabel(0)) - c(h)).norm() < 1e-15);
        assert!((s.amplitude(BasisLabel(1)) - c(h)).norm() < 1e-15);

        let back = s.apply_hadamard("q", [0]).unwrap();
        assert_eq!(back.len(), 1);
        let zero = SparseState::<f64>::init_basis(l, &[("q", "0")]).unwrap();
        assert!(back.state_equal(&zero, 1e-12).unwrap());
    }

    #[test]
    fn hadamard_index_out_of_range() {
        let s = SparseState::<f64>::init_basis(layout(&[("i", 2)]), &[("i", "00")]).unwrap();
        assert!(matches!(s.apply_hadamard("i", [2]), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn permutation_examples() {
        let l = layout(&[("q", 1)]);
        let x = Qubit(0);
        let s = SparseState::<f64>::init_basis(l.clone(), &[("q", "0")])
            .unwrap()
            .apply_permutation(|b| x.flip(b))
            .unwrap();
        assert_eq!(s.dump(), "1 1 0\n");

        let two = layout(&[("c", 1), ("t", 1)]);
        let s = SparseState::<f64>::init_basis(two.clone(), &[("c", "1"), ("t", "0")]).unwrap();
        let same = s.clone().apply_permutation(|b| b).unwrap();
        assert!(same.state_equal(&s, 0.0).unwrap());
        let cnot = s
            .apply_permutation(|b| if Qubit(1).is_set(b) { Qubit(0).flip(b) } else { b })
            .unwrap();
        assert_eq!(cnot.dump(), "1 1 1 0\n");
    }

    #[test]
    fn permutation_collision_is_rejected() {
        let s = SparseState::<f64>::init_basis(layout(&[("i", 2)]), &[("i", "00")])
            .unwrap()
            .apply_hadamard_all("i")
            .unwrap();
        assert!(matches!(
            s.apply_permutation(|_| BasisLabel(0)),
            Err(Error::NotBijective(0))
        ));
    }

    #[test]
    fn measure_basis_state_is_deterministic() {
        let s = SparseState::<f64>::init_basis(layout(&[("q", 1)]), &[("q", "0")]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (out, collapsed) = s.measure(&["q"], &mut rng).unwrap();
        assert_eq!(out.get("q"), Some("0"));
        assert!(collapsed.state_equal(&s, 0.0).unwrap());
        let none: [&str; 0] = [];
        assert!(matches!(s.measure(&none, &mut rng), Err(Error::EmptyRegisterSet)));
    }

    #[test]
    fn measure_one_register_of_product_state() {
        // (|01> + |11>)/sqrt2: second qubit is 1 with certainty.
        let l = layout(&[("a", 1), ("b", 1)]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = SparseState::from_entries(l, [(BasisLabel(0b01), c(h)), (BasisLabel(0b11), c(h))]).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (out, collapsed) = s.measure(&["b"], &mut rng).unwrap();
            assert_eq!(out.get("b"), Some("1"));
            assert_eq!(collapsed.len(), 2);
            assert!(collapsed.state_equal(&s, 1e-15).unwrap());
        }
    }

    #[test]
    fn measure_collapse_is_idempotent() {
        let s = SparseState::<f64>::init_basis(layout(&[("a", 2), ("b", 2)]), &[("a", "00"), ("b", "00")])
            .unwrap()
            .apply_hadamard_all("a")
            .unwrap()
            .apply_hadamard_all("b")
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (first, collapsed) = s.measure(&["a"], &mut rng).unwrap();
        for _ in 0..20 {
            let (again, _) = collapsed.measure(&["a"], &mut rng).unwrap();
            assert_eq!(again, first);
        }
        assert_eq!(collapsed.len(), 4);
        assert!((collapsed.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_equal_cases() {
        let l = layout(&[("q", 1)]);
        let zero = SparseState::<f64>::init_basis(l.clone(), &[("q", "0")]).unwrap();
        let one = SparseState::<f64>::init_basis(l.clone(), &[("q", "1")]).unwrap();
        let nudged = SparseState::from_entries(l, [(BasisLabel(0), c(1.0 + 1e-15))]).unwrap();
        assert!(zero.state_equal(&zero, 0.0).unwrap());
        assert!(zero.state_equal(&nudged, 1e-9).unwrap());
        assert!(!zero.state_equal(&one, 1e-9).unwrap());
        let other = SparseState::<f64>::init_basis(layout(&[("p", 1)]), &[("p", "0")]).unwrap();
        assert_eq!(zero.state_equal(&other, 1e-9), Err(Error::LayoutMismatch));
    }

    #[test]
    fn gates_are_unitary() {
        assert!(SingleQubitGate::<f64>::hadamard().is_unitary(1e-12));
        assert!(SingleQubitGate::<f64>::sqrt_x().is_unitary(1e-12));
        assert!(SingleQubitGate::<f64>::rotation(0.3).is_unitary(1e-12));
        assert!(!SingleQubitGate::<f64>::from_real([[1.0, 1.0], [0.0, 1.0]]).is_unitary(1e-9));
    }

    #[test]
    fn works_in_single_precision() {
        let s = SparseState::<f32>::init_basis(layout(&[("i", 3)]), &[("i", "000")])
            .unwrap()
            .apply_hadamard_all("i")
            .unwrap();
        assert_eq!(s.len(), 8);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-6);
    }
}
