//! Page–Wootters conditioning on an anyonic clock.
//!
//! A stationary clock ⊗ system state is conditioned on clock outcomes; the
//! sequence of conditional system states is the emergent dynamics. Tick
//! times are counted in ticks, so a schedule with angular step `ω` is
//! generated by `H_c = −(ω/2) Z` and tick `j` sits at `τ_j = j`.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde_json::{Map, Value};

use crate::anyon_model::AnyonModelSpec;
use crate::braiding::{BraidRepresentation, BraidWord, GateMatrix, GATE_TOL};
use crate::error::{Error, Result};
use crate::fusion_space::{clock_system_basis, standard_basis, Register, StateVector};
use crate::linalg::{self, cr, CMatrix, CVector};
use crate::measurement::{self, PovmEffect, ZERO_PROBABILITY};
use crate::report;

/// Fidelity tolerance for emergent-evolution and preparation checks.
pub const EVOLUTION_TOL: f64 = 1e-10;
/// Tolerance on the stationarity residual `‖(H_c ⊗ I + I ⊗ H_s)Ψ − EΨ‖`.
pub const EIGEN_TOL: f64 = 1e-10;
/// Tolerance on tick angles when recognising a uniform rotation orbit.
pub const ANGLE_TOL: f64 = 1e-9;
/// Braid word preparing the shared Bell pair from the vacuum.
pub const BELL_BRAID_WORD: &str = "s3 s4 s2";
/// Largest ancilla count for the universal dilation check.
pub const MAX_UNIVERSAL_ANCILLA: usize = 6;

/// `rot_z(2πj/n)|+⟩`.
pub fn tick_state(j: usize, n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::DegenerateSchedule(n));
    }
    if j >= n {
        return Err(Error::TickOutOfRange { index: j, n_ticks: n });
    }
    let angle = 2.0 * PI * j as f64 / n as f64;
    StateVector::new(Register::Qubits(1), measurement::equatorial_ket(angle))
}

/// Ordered clock outcomes. Tick 0 is the origin.
#[derive(Debug, Clone)]
pub struct ClockSchedule {
    effects: Vec<PovmEffect>,
    angles: Vec<f64>,
}

impl ClockSchedule {
    /// `N` equally spaced equatorial ticks, each the effect `(2/N)|τ_j⟩⟨τ_j|`.
    pub fn equatorial(n: usize) -> Result<Self> {
        let effects = measurement::covariant_equatorial_povm(n)?;
        let angles = (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect();
        Ok(Self { effects, angles })
    }

    /// Orders the non-zero effects of a complete POVM by their equatorial
    /// angle, counted anticlockwise from the first listed effect.
    pub fn from_effects(effects: Vec<PovmEffect>) -> Result<Self> {
        measurement::validate_povm(&effects)?;
        let mut kept: Vec<(f64, PovmEffect)> = Vec::new();
        for e in effects.into_iter().filter(|e| e.trace() > ZERO_PROBABILITY) {
            if e.matrix[(0, 1)].norm() < ANGLE_TOL {
                return Err(Error::InvalidSchedule(format!("effect {} has no equatorial angle", e.outcome)));
            }
            kept.push((e.tick_angle(), e));
        }
        if kept.len() < 2 {
            return Err(Error::DegenerateSchedule(kept.len()));
        }
        let origin = kept[0].0;
        let mut ordered: Vec<(f64, PovmEffect)> = kept
            .into_iter()
            .map(|(a, e)| {
                let rel = (a - origin).rem_euclid(2.0 * PI);
                (if 2.0 * PI - rel < ANGLE_TOL { 0.0 } else { rel }, e)
            })
            .collect();
        ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (angles, effects) = ordered.into_iter().unzip();
        Ok(Self { effects, angles })
    }

    pub fn n_ticks(&self) -> usize {
        self.effects.len()
    }

    pub fn effects(&self) -> &[PovmEffect] {
        &self.effects
    }

    /// Angles relative to the origin tick, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Nominal step `2π/N`.
    pub fn nominal_step(&self) -> f64 {
        2.0 * PI / self.n_ticks() as f64
    }

    /// The step `ω` if tick `j` sits at angle `jω`.
    pub fn uniform_step(&self) -> Option<f64> {
        let step = self.nominal_step();
        self.angles
            .iter()
            .enumerate()
            .all(|(j, a)| (a - j as f64 * step).abs() < ANGLE_TOL)
            .then_some(step)
    }

    /// `−(ω/2) Z` with `ω = 2π/N`.
    pub fn clock_hamiltonian(&self) -> CMatrix {
        linalg::pauli_z() * cr(-self.nominal_step() / 2.0)
    }
}

/// A clock ⊗ system state, clock factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalState {
    state: StateVector,
}

/// Outcome of conditioning on one clock effect.
#[derive(Debug, Clone)]
pub struct Conditioned {
    pub probability: f64,
    /// Dominant eigenvector of the conditional system density matrix.
    pub system: StateVector,
    /// `Tr ρ²` of the conditional system state; 1 for rank-one effects on
    /// pure global states.
    pub purity: f64,
}

impl GlobalState {
    pub fn new(state: StateVector) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: state.dim() });
        }
        Ok(Self { state })
    }

    /// `(|−+⟩ − |+−⟩)/√2`, which equals `(|01⟩ − |10⟩)/√2`.
    pub fn bell_singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let amps = CVector::from_column_slice(&[cr(0.0), cr(s), cr(-s), cr(0.0)]);
        Self { state: StateVector::new(Register::Fusion(clock_system_basis()), amps).expect("unit norm") }
    }

    /// Braids a pair created from the vacuum across the partition and
    /// checks the result against `(|+,0⟩ + |−,1⟩)/√2`.
    pub fn bell_via_braiding(model: &AnyonModelSpec) -> Result<Self> {
        let basis = standard_basis(model, 6, model.label_id("vac")?)?;
        let rep = BraidRepresentation::new(model, &basis)?;
        let gate = rep.evaluate(&BraidWord::parse(BELL_BRAID_WORD, 6)?)?;
        let mut vacuum = CVector::zeros(4);
        vacuum[0] = cr(1.0);
        let state = StateVector::new(Register::Fusion(basis), vacuum)?.apply(gate.matrix())?;
        let f = linalg::fidelity(state.amplitudes(), &braided_bell_target());
        if 1.0 - f > EVOLUTION_TOL {
            return Err(Error::BraidConvention(f));
        }
        Ok(Self { state })
    }

    pub fn product(clock: &StateVector, system: &StateVector) -> Result<Self> {
        Ok(Self { state: crate::fusion_space::two_triple_product(clock, system)? })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// `M[c][s]` with `|Ψ⟩ = Σ M[c][s] |c⟩|s⟩`.
    pub fn amplitude_matrix(&self) -> CMatrix {
        let a = self.state.amplitudes();
        CMatrix::from_row_slice(2, 2, &[a[0], a[1], a[2], a[3]])
    }

    pub fn reduced_clock(&self) -> CMatrix {
        let m = self.amplitude_matrix();
        &m * m.adjoint()
    }

    pub fn reduced_system(&self) -> CMatrix {
        let m = self.amplitude_matrix();
        m.transpose() * m.map(|z| z.conj())
    }

    /// Schmidt coefficients, largest first.
    pub fn schmidt_coefficients(&self) -> [f64; 2] {
        let a = self.state.amplitudes();
        let m = Matrix2::new(a[0], a[1], a[2], a[3]);
        let sv = m.singular_values();
        [sv[0].max(sv[1]), sv[0].min(sv[1])]
    }

    pub fn is_maximally_entangled(&self) -> bool {
        let [a, b] = self.schmidt_coefficients();
        (a - b).abs() < 1e-10
    }

    /// Unnormalised conditional system operator `Tr_c[(E ⊗ I)|Ψ⟩⟨Ψ|]`.
    fn conditional_operator(&self, effect: &CMatrix) -> CMatrix {
        let m = self.amplitude_matrix();
        m.transpose() * effect.transpose() * m.map(|z| z.conj())
    }

    fn branch(&self, effect: &CMatrix) -> Result<Conditioned> {
        if effect.shape() != (2, 2) {
            return Err(Error::DimensionMismatch { expected: 2, found: effect.nrows() });
        }
        let rho = self.conditional_operator(effect);
        let probability = (rho[(0, 0)] + rho[(1, 1)]).re;
        if probability < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability(probability));
        }
        let rho = rho / cr(probability);
        let purity = (&rho * &rho).trace().re;
        let system = StateVector::normalized(Register::Qubits(1), linalg::principal_eigenvector_2x2(&rho))?;
        Ok(Conditioned { probability, system, purity })
    }

    /// Conditions on a clock effect. The global state is consumed: a clock
    /// can be read only once.
    pub fn condition(self, effect: &PovmEffect) -> Result<Conditioned> {
        self.branch(&effect.matrix)
    }

    /// Conditions on a pure clock state, i.e. the effect `|τ⟩⟨τ|`.
    pub fn condition_on_tick(self, tick: &StateVector) -> Result<Conditioned> {
        if tick.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: tick.dim() });
        }
        self.branch(&tick.projector())
    }

    pub fn to_json(&self) -> Value {
        self.state.to_json()
    }
}

/// `(|+,0⟩ + |−,1⟩)/√2` on clock ⊗ system amplitudes.
pub fn braided_bell_target() -> CVector {
    let h = 0.5;
    CVector::from_column_slice(&[cr(h), cr(h), cr(h), cr(-h)])
}

#[derive(Debug, Clone)]
pub struct EffectiveHamiltonians {
    pub h_c: CMatrix,
    pub h_s: CMatrix,
    pub total_eigenvalue: f64,
    pub eigen_residual: f64,
}

impl EffectiveHamiltonians {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("h_c".into(), report::matrix(&self.h_c));
        m.insert("h_s".into(), report::matrix(&self.h_s));
        m.insert("total_eigenvalue".into(), report::num(self.total_eigenvalue));
        m.insert("eigen_residual".into(), report::num(self.eigen_residual));
        Value::Object(m)
    }
}

fn invert_2x2(m: &CMatrix) -> Option<CMatrix> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det.norm() < 1e-12 {
        return None;
    }
    Some(linalg::from_rows(&[&[m[(1, 1)], -m[(0, 1)]], &[-m[(1, 0)], m[(0, 0)]]]) / det)
}

/// The system Hamiltonian that makes the conditional states evolve as the
/// clock does, ignoring whether the global state is stationary.
fn candidate_system_hamiltonian(global: &GlobalState, h_c: &CMatrix) -> Option<CMatrix> {
    let m = global.amplitude_matrix();
    let [_, smaller] = global.schmidt_coefficients();
    if smaller < 1e-12 {
        return Some(CMatrix::zeros(2, 2));
    }
    // H_c M + M H_sᵀ = 0  ⇒  H_s = −Mᵀ conj(H_c) M⁻ᵀ
    let inv_t = invert_2x2(&m)?.transpose();
    let h_s = -(m.transpose() * h_c.map(|z| z.conj()) * inv_t);
    (linalg::hermiticity_error(&h_s) < EIGEN_TOL).then(|| (&h_s + h_s.adjoint()) * cr(0.5))
}

fn total_hamiltonian(h_c: &CMatrix, h_s: &CMatrix) -> CMatrix {
    let id = linalg::identity(2);
    linalg::kron(h_c, &id) + linalg::kron(&id, h_s)
}

/// Derives `H_c` from the schedule and `H_s` from the global state, then
/// checks stationarity and that conditioning reproduces `exp(−iH_s τ)`.
pub fn derive_effective_hamiltonians(global: &GlobalState, schedule: &ClockSchedule) -> Result<EffectiveHamiltonians> {
    let step = schedule
        .uniform_step()
        .ok_or_else(|| Error::InvalidSchedule("ticks are not an orbit of a single rotation".into()))?;
    let h_c = linalg::pauli_z() * cr(-step / 2.0);
    let h_s = candidate_system_hamiltonian(global, &h_c)
        .ok_or_else(|| Error::NonStationary("no Hermitian system Hamiltonian matches the clock".into()))?;
    let psi = global.state.amplitudes();
    let h_psi = total_hamiltonian(&h_c, &h_s) * psi;
    let energy = psi.dotc(&h_psi).re;
    let eigen_residual = (h_psi - psi * cr(energy)).norm();
    if eigen_residual > EIGEN_TOL {
        return Err(Error::NonStationary(format!("eigen residual {eigen_residual:.3e}")));
    }
    let hams = EffectiveHamiltonians { h_c, h_s, total_eigenvalue: energy, eigen_residual };
    let evolution = evolve_branches(global, schedule, Some(&hams.h_s));
    if let Some(worst) = evolution.iter().filter_map(|r| r.fidelity).reduce(f64::min) {
        if 1.0 - worst > EVOLUTION_TOL {
            return Err(Error::NonStationary(format!("tick fidelity {worst:.3e}")));
        }
    }
    Ok(hams)
}

#[derive(Debug, Clone)]
pub struct TickRecord {
    pub index: usize,
    pub angle: f64,
    pub probability: f64,
    /// `None` when the tick has zero probability.
    pub conditional_state: Option<StateVector>,
    pub purity: Option<f64>,
    /// Fidelity with `exp(−iH_s τ_j)` applied to the tick-0 conditional state.
    pub fidelity: Option<f64>,
}

impl TickRecord {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("index".into(), Value::from(self.index));
        m.insert("angle".into(), report::num(self.angle));
        m.insert("probability".into(), report::num(self.probability));
        m.insert(
            "conditional_state".into(),
            self.conditional_state.as_ref().map_or(Value::Null, |s| report::vector(s.amplitudes())),
        );
        m.insert("purity".into(), self.purity.map_or(Value::Null, report::num));
        m.insert("fidelity_vs_schrodinger".into(), self.fidelity.map_or(Value::Null, report::num));
        Value::Object(m)
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub ticks: Vec<TickRecord>,
    /// Present when the global state is stationary for this schedule.
    pub hamiltonians: Option<EffectiveHamiltonians>,
    /// Why no Hamiltonians could be derived.
    pub stationarity_error: Option<String>,
    pub total_probability: f64,
    pub uniform_probabilities: bool,
    pub delta_tau: f64,
}

impl EvolutionReport {
    pub fn min_fidelity(&self) -> Option<f64> {
        self.ticks.iter().filter_map(|t| t.fidelity).reduce(f64::min)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("n_ticks".into(), Value::from(self.ticks.len()));
        m.insert("ticks".into(), Value::Array(self.ticks.iter().map(TickRecord::to_json).collect()));
        m.insert("hamiltonians".into(), self.hamiltonians.as_ref().map_or(Value::Null, EffectiveHamiltonians::to_json));
        m.insert("stationary".into(), Value::from(self.hamiltonians.is_some()));
        if let Some(e) = &self.stationarity_error {
            m.insert("stationarity_error".into(), Value::from(e.clone()));
        }
        m.insert("total_probability".into(), report::num(self.total_probability));
        m.insert("uniform_probabilities".into(), Value::from(self.uniform_probabilities));
        m.insert("delta_tau".into(), report::num(self.delta_tau));
        m.insert("min_fidelity".into(), self.min_fidelity().map_or(Value::Null, report::num));
        Value::Object(m)
    }
}

fn evolve_branches(global: &GlobalState, schedule: &ClockSchedule, h_s: Option<&CMatrix>) -> Vec<TickRecord> {
    let step = schedule.nominal_step();
    let mut origin: Option<StateVector> = None;
    schedule
        .effects()
        .iter()
        .zip(schedule.angles())
        .enumerate()
        .map(|(index, (effect, &angle))| {
            let (probability, state, purity) = match global.branch(&effect.matrix) {
                Ok(b) => (b.probability, Some(b.system), Some(b.purity)),
                Err(_) => ((global.conditional_operator(&effect.matrix).trace()).re.max(0.0), None, None),
            };
            if index == 0 {
                origin = state.clone();
            }
            let fidelity = match (h_s, &origin, &state) {
                (Some(h), Some(o), Some(s)) => {
                    let u = linalg::evolve_2x2(h, angle / step);
                    Some(linalg::fidelity(&(u * o.amplitudes()), s.amplitudes()))
                }
                _ => None,
            };
            TickRecord { index, angle, probability, conditional_state: state, purity, fidelity }
        })
        .collect()
}

/// Conditions every branch of the schedule on the same prepared state. The
/// branches are alternatives of a single clock reading, not a sequence.
pub fn run_schedule(global: &GlobalState, schedule: &ClockSchedule) -> EvolutionReport {
    let (hamiltonians, stationarity_error, h_s) = match derive_effective_hamiltonians(global, schedule) {
        Ok(h) => {
            let h_s = h.h_s.clone();
            (Some(h), None, Some(h_s))
        }
        Err(e) => (None, Some(e.to_string()), candidate_system_hamiltonian(global, &schedule.clock_hamiltonian())),
    };
    let ticks = evolve_branches(global, schedule, h_s.as_ref());
    let total_probability = ticks.iter().map(|t| t.probability).sum();
    let p0 = ticks.first().map_or(0.0, |t| t.probability);
    let uniform_probabilities = ticks.iter().all(|t| (t.probability - p0).abs() < EVOLUTION_TOL);
    EvolutionReport {
        ticks,
        hamiltonians,
        stationarity_error,
        total_probability,
        uniform_probabilities,
        delta_tau: schedule.nominal_step(),
    }
}

/// Σ_j p_j |τ_j⟩⟨τ_j| ⊗ ρ_s(τ_j) for the normalised tick directions.
pub fn reconstruct_block_mixture(global: &GlobalState, schedule: &ClockSchedule) -> Result<CMatrix> {
    let mut total = CMatrix::zeros(4, 4);
    for effect in schedule.effects() {
        let rho = global.conditional_operator(&effect.matrix);
        let p = rho.trace().re;
        if p < ZERO_PROBABILITY {
            continue;
        }
        let dir = linalg::principal_eigenvector_2x2(&effect.matrix);
        total += linalg::kron(&(&dir * dir.adjoint()), &rho);
    }
    Ok(total)
}

/// A system-side unitary `L` with `(I ⊗ L)|from⟩ = |to⟩` up to phase.
pub fn local_equivalence(from: &GlobalState, to: &GlobalState) -> Option<GateMatrix> {
    // (I ⊗ L): M ↦ M Lᵀ
    let lt = invert_2x2(&from.amplitude_matrix())? * to.amplitude_matrix();
    let l = lt.transpose();
    (linalg::unitarity_error(&l) < GATE_TOL).then(|| GateMatrix::new(l).ok()).flatten()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateClass {
    Clifford,
    Universal,
}

impl std::str::FromStr for GateClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "clifford" => Ok(GateClass::Clifford),
            "universal" => Ok(GateClass::Universal),
            other => Err(format!("unknown gate class '{other}' (expected clifford or universal)")),
        }
    }
}

impl std::fmt::Display for GateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GateClass::Clifford => "clifford",
            GateClass::Universal => "universal",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TimeResolution {
    pub gates: GateClass,
    pub ancilla: usize,
    /// Most distinct ticks a single clock POVM resolves.
    pub n_max: usize,
    /// Equatorial rank-one effects available across all circuits.
    pub equatorial_ticks: usize,
    pub delta_tau: f64,
    pub outcome_bound: usize,
}

impl TimeResolution {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("gates".into(), Value::from(self.gates.to_string()));
        m.insert("ancilla".into(), Value::from(self.ancilla));
        m.insert("n_max".into(), Value::from(self.n_max));
        m.insert("equatorial_ticks".into(), Value::from(self.equatorial_ticks));
        m.insert("delta_tau".into(), report::num(self.delta_tau));
        m.insert("outcome_bound".into(), Value::from(self.outcome_bound));
        Value::Object(m)
    }
}

/// Smallest resolvable clock step for a gate class with `m` ancillas.
///
/// Universal gates realise the covariant POVM with `2^(m+1)` ticks through
/// an explicit dilation. For Clifford gates `N_max` is counted over every
/// braid-generated circuit.
pub fn time_resolution(model: &AnyonModelSpec, gates: GateClass, m: usize) -> Result<TimeResolution> {
    let outcome_bound = 2usize << m;
    let (n_max, equatorial_ticks) = match gates {
        GateClass::Universal => {
            if m > MAX_UNIVERSAL_ANCILLA {
                return Err(Error::ScaleGuard { m, max: MAX_UNIVERSAL_ANCILLA });
            }
            let target = measurement::covariant_equatorial_povm(outcome_bound)?;
            let u = measurement::naimark_dilation(&target, m)?;
            let effects = measurement::povm_from_circuit(&u, m)?;
            measurement::validate_povm(&effects)?;
            let n = measurement::distinct_equatorial_directions(&effects);
            (n, n)
        }
        GateClass::Clifford => {
            let catalog = measurement::enumerate_clifford_povms(model, m)?;
            (catalog.n_max(), catalog.n_equatorial_rank1())
        }
    };
    Ok(TimeResolution { gates, ancilla: m, n_max, equatorial_ticks, delta_tau: 2.0 * PI / n_max as f64, outcome_bound })
}
