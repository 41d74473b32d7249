//! Superposition-based architecture learning.
//!
//! The searched bit string (architecture code bits, then selector bits) is
//! fixed one bit per iteration. Iteration `k` starts from the known prefix
//! with every later bit in uniform superposition, accumulates each
//! configuration's score in `perf` over one pass of the training set, and
//! then asks the nonlinear OR whether any configuration with bit `k = l`
//! reaches `theta`. The first `l` that answers yes is kept.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::ops::{increment_step, mark_objective, nonlinear_or_counted};
use crate::qstate::{BasisLabel, Qubit, SparseState, DEFAULT_QUBIT_CAP};
use crate::qwnn::{
    check_dataset, load_pattern, perf_histogram, remove_pattern, PresentationEvent, PresentationListener,
    QNetworkOperator, REG_ARCH, REG_OBJECTIVE, REG_SELECTORS,
};
use crate::scalar::Real;
use crate::wnn::{performance, Architecture, SelectorString};

/// Which value of a searched bit is tried first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LOrder {
    #[default]
    ZeroFirst,
    OneFirst,
}

impl LOrder {
    pub fn values(self) -> [bool; 2] {
        match self {
            LOrder::ZeroFirst => [false, true],
            LOrder::OneFirst => [true, false],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LOrder::ZeroFirst => "01",
            LOrder::OneFirst => "10",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "01" => Some(LOrder::ZeroFirst),
            "10" => Some(LOrder::OneFirst),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalConfig {
    /// Required number of correctly classified patterns, inclusive.
    pub theta: usize,
    /// Seed for the measurements taken after each fixed bit.
    pub seed: u64,
    pub l_order: LOrder,
    pub qubit_cap: usize,
}

impl SalConfig {
    pub fn new(theta: usize) -> Self {
        Self {
            theta,
            seed: 0,
            l_order: LOrder::ZeroFirst,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_l_order(mut self, order: LOrder) -> Self {
        self.l_order = order;
        self
    }

    pub fn with_qubit_cap(mut self, cap: usize) -> Self {
        self.qubit_cap = cap;
        self
    }
}

/// What happened while fixing one searched bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRecord {
    /// 1-based position in the searched bit string.
    pub k: usize,
    /// Entries right after initialization.
    pub initial_entries: usize,
    /// `(l, flag)` per tried value, in order.
    pub tried: Vec<(bool, bool)>,
    pub chosen: Option<bool>,
    /// Entry count when the measurement was taken.
    pub entries_at_measurement: Option<usize>,
    /// Logged measurement outcome; it does not influence the search.
    pub measurement: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SalTrace {
    pub records: Vec<BitRecord>,
    pub searched_bits: usize,
    pub presentations: usize,
    pub nonlinear_calls: usize,
    pub peak_entries: usize,
}

impl SalTrace {
    /// One line per searched bit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tried: Vec<String> = r
                .tried
                .iter()
                .map(|(l, f)| format!("l={}:{}", *l as u8, *f as u8))
                .collect();
            out.push_str(&format!(
                "k={} entries={} tried=[{}] chosen={} measured={}\n",
                r.k,
                r.initial_entries,
                tried.join(","),
                r.chosen.map_or("-".to_string(), |b| (b as u8).to_string()),
                r.measurement.as_deref().unwrap_or("-"),
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SalStatus {
    Found,
    NoSolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalOutcome {
    pub status: SalStatus,
    pub arch_index: Option<usize>,
    pub selectors: Option<SelectorString>,
    /// Score of the returned configuration recomputed by the classical
    /// evaluator; 0 when nothing was found.
    pub verified_performance: usize,
    pub trace: SalTrace,
}

impl SalOutcome {
    pub fn is_found(&self) -> bool {
        self.status == SalStatus::Found
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepCounts {
    pub presentations: usize,
    pub nonlinear_calls: usize,
}

pub fn step_count_report(outcome: &SalOutcome) -> StepCounts {
    StepCounts {
        presentations: outcome.trace.presentations,
        nonlinear_calls: outcome.trace.nonlinear_calls,
    }
}

/// Presents every pattern once and leaves each entry's score in `perf`.
pub fn run_epoch<T: Real>(state: SparseState<T>, op: &QNetworkOperator, data: &Dataset) -> Result<SparseState<T>> {
    run_epoch_observed(state, op, data, None)
}

pub fn run_epoch_observed<T: Real>(
    mut state: SparseState<T>,
    op: &QNetworkOperator,
    data: &Dataset,
    mut listener: Option<&mut PresentationListener<'_>>,
) -> Result<SparseState<T>> {
    let plan = op.plan();
    check_dataset(plan, data)?;
    let (out, desired, perf) = (plan.output, plan.desired, plan.perf);
    for (index, pattern) in data.patterns().iter().enumerate() {
        state = load_pattern(state, plan, pattern)?;
        state = op.apply(state)?;
        state = state.map_labels(|l| increment_step(l, out, desired, perf));
        state = op.unapply(state)?;
        state = remove_pattern(state, plan, pattern)?;
        if let Some(cb) = listener.as_deref_mut() {
            cb(&PresentationEvent {
                pattern_index: index,
                entry_count: state.len(),
                perf_histogram: perf_histogram(&state, perf),
            });
        }
    }
    Ok(state)
}

/// Learns selectors for one architecture.
pub fn sal_train<T: Real>(arch: &Architecture, data: &Dataset, cfg: &SalConfig) -> Result<SalOutcome> {
    sal_search::<T>(std::slice::from_ref(arch), data, cfg, None)
}

/// Learns architecture and selectors together; the architecture code bits
/// are searched before the selector bits.
pub fn sal_select_architecture<T: Real>(archs: &[Architecture], data: &Dataset, cfg: &SalConfig) -> Result<SalOutcome> {
    sal_search::<T>(archs, data, cfg, None)
}

/// Shared driver behind [`sal_train`] and [`sal_select_architecture`].
pub fn sal_search<T: Real>(
    archs: &[Architecture],
    data: &Dataset,
    cfg: &SalConfig,
    mut listener: Option<&mut PresentationListener<'_>>,
) -> Result<SalOutcome> {
    if cfg.theta > data.len() {
        return Err(Error::ThetaOutOfRange {
            theta: cfg.theta,
            patterns: data.len(),
        });
    }
    let op = QNetworkOperator::for_archs(archs.to_vec(), data.len(), cfg.qubit_cap)?;
    let plan = op.plan().clone();
    let layout = plan.layout().clone();

    let arch_width = plan.arch.map_or(0, |f| f.width());
    let s_width = plan.selectors.width();
    let mut searched: Vec<Qubit> = Vec::with_capacity(arch_width + s_width);
    if let Some(f) = plan.arch {
        searched.extend((0..arch_width).map(|j| f.qubit(j).expect("in range")));
    }
    searched.extend((0..s_width).map(|j| plan.selectors.qubit(j).expect("in range")));
    let n_search = searched.len();

    let all_registers: Vec<String> = layout.registers().iter().map(|r| r.name.clone()).collect();
    let n_archs = archs.len() as u64;
    let (perf, arch_field) = (plan.perf, plan.arch);
    let theta = cfg.theta as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = SalTrace {
        searched_bits: n_search,
        ..SalTrace::default()
    };
    let mut prefix: Vec<bool> = Vec::with_capacity(n_search);

    for k in 0..n_search {
        let fixed = prefix
            .iter()
            .zip(&searched)
            .fold(BasisLabel(0), |l, (&b, q)| q.with(l, b));
        let mut state = SparseState::<T>::from_label(layout.clone(), fixed);
        let fresh_arch: Vec<usize> = (k..arch_width).collect();
        let fresh_s: Vec<usize> = (k.saturating_sub(arch_width)..s_width).collect();
        if !fresh_arch.is_empty() {
            state = state.apply_hadamard(REG_ARCH, fresh_arch)?;
        }
        state = state.apply_hadamard(REG_SELECTORS, fresh_s)?;
        let initial_entries = state.len();
        trace.peak_entries = trace.peak_entries.max(initial_entries);

        state = run_epoch_observed(state, &op, data, listener.as_deref_mut())?;
        trace.presentations += data.len();

        let target = searched[k];
        let mut record = BitRecord {
            k: k + 1,
            initial_entries,
            tried: Vec::with_capacity(2),
            chosen: None,
            entries_at_measurement: None,
            measurement: None,
        };
        for l in cfg.l_order.values() {
            let predicate = |lab: BasisLabel| {
                perf.get(lab) >= theta && target.is_set(lab) == l && arch_field.is_none_or(|f| f.get(lab) < n_archs)
            };
            let marked = mark_objective(state, predicate, REG_OBJECTIVE)?;
            let or = nonlinear_or_counted(marked, REG_OBJECTIVE)?;
            trace.nonlinear_calls += 1;
            if or.merged != 0 {
                return Err(Error::Defect(format!(
                    "objective flag collided on {} entries at bit {}",
                    or.merged,
                    k + 1
                )));
            }
            record.tried.push((l, or.flag));
            if or.flag {
                let (outcome, _) = or.state.measure(&all_registers, &mut rng)?;
                record.entries_at_measurement = Some(or.state.len());
                record.measurement = Some(outcome.to_string());
                record.chosen = Some(l);
                break;
            }
            state = or.state;
        }
        let chosen = record.chosen;
        trace.records.push(record);
        match chosen {
            Some(l) => prefix.push(l),
            None => {
                return Ok(SalOutcome {
                    status: SalStatus::NoSolution,
                    arch_index: None,
                    selectors: None,
                    verified_performance: 0,
                    trace,
                })
            }
        }
    }

    let arch_index = prefix[..arch_width]
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let arch = archs
        .get(arch_index)
        .ok_or_else(|| Error::Defect(format!("selected unused architecture code {arch_index}")))?;
    let selectors = SelectorString::new(prefix[arch_width..arch_width + arch.selector_count()].to_vec());
    let verified = performance(arch, &selectors, data)?;
    if verified < cfg.theta {
        return Err(Error::Defect(format!(
            "configuration {selectors} scores {verified}, below theta {}",
            cfg.theta
        )));
    }
    Ok(SalOutcome {
        status: SalStatus::Found,
        arch_index: Some(arch_index),
        selectors: Some(selectors),
        verified_performance: verified,
        trace,
    })
}
