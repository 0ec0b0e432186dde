//! Fusion measurements and clock POVMs.
//!
//! Fusing a pair of σ's inside one triple measures their total charge, which
//! is a projective Pauli measurement on the encoded qubit: the pair fused
//! first in the z tree gives Z, the other adjacent pair gives X and the outer
//! pair gives Y. The charge-vac eigenstate of the outer pair is `B|0⟩`, where
//! `B = F†RF` carries the middle anyon past its neighbour.
//!
//! Clock POVMs come from a unitary on the clock plus `m` ancillas prepared in
//! `|0…0⟩`, followed by a computational-basis readout of every qubit.

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;

use serde_json::{Map, Value};

use crate::anyon_model::AnyonModelSpec;
use crate::braiding::{self, GateMatrix, GATE_TOL};
use crate::error::{Error, Result};
use crate::fusion_space::{Register, StateVector, TreeShape, Triple};
use crate::linalg::{self, cr, CMatrix, CVector, C64};
use crate::report;

/// Probability below which an outcome has no post-measurement state.
pub const ZERO_PROBABILITY: f64 = 1e-14;
/// Completeness tolerance `‖Σ E − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Positivity tolerance on effect eigenvalues.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance for comparing trace-normalised effects.
pub const EFFECT_TOL: f64 = 1e-8;
/// Largest ancilla count the Clifford enumeration accepts.
pub const MAX_ENUMERATED_ANCILLA: usize = 2;
/// Largest ancilla count for the full group closure route.
pub const MAX_CLOSURE_ANCILLA: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::X => linalg::pauli_x(),
            Pauli::Y => linalg::pauli_y(),
            Pauli::Z => linalg::pauli_z(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FusionOutcome {
    pub pair: (usize, usize),
    pub charge: usize,
    pub charge_name: String,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub post_state: Option<StateVector>,
}

/// Which triple a pair lives in and which Pauli basis fusing it measures.
pub fn pair_basis(register: &Register, pair: (usize, usize)) -> Result<(Triple, Pauli)> {
    let (i, j) = if pair.0 <= pair.1 { pair } else { (pair.1, pair.0) };
    let n = match register {
        Register::Fusion(b) => b.n_anyons,
        Register::Qubits(1) => 3,
        Register::Qubits(2) => 6,
        Register::Qubits(w) => return Err(Error::DimensionMismatch { expected: 2, found: 1 << w }),
    };
    if i == 0 || j > n || i == j {
        return Err(Error::InvalidPair(pair.0, pair.1));
    }
    if n == 6 && i <= 3 && j >= 4 {
        return Err(Error::CrossPartitionFusion(pair.0, pair.1));
    }
    Ok(match (i, j) {
        (1, 2) => (Triple::Clock, Pauli::Z),
        (2, 3) => (Triple::Clock, Pauli::X),
        (1, 3) => (Triple::Clock, Pauli::Y),
        (5, 6) => (Triple::System, Pauli::Z),
        (4, 5) => (Triple::System, Pauli::X),
        (4, 6) => (Triple::System, Pauli::Y),
        _ => return Err(Error::InvalidPair(pair.0, pair.1)),
    })
}

/// Projector onto fusion channel `channel` (0 = vac, 1 = ψ) of a pair
/// measured in the given Pauli basis, on one triple.
pub fn channel_projector(model: &AnyonModelSpec, basis: Pauli, channel: usize) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    p[(channel, channel)] = cr(1.0);
    let f = &model.f_matrix;
    match basis {
        Pauli::Z => p,
        Pauli::X => f.adjoint() * p * f,
        Pauli::Y => {
            let b = f.adjoint() * &model.r_matrix * f;
            &b * p * b.adjoint()
        }
    }
}

/// Measures the total charge of `pair` with Born-rule probabilities and
/// renormalised post-measurement states, one entry per channel (vac, ψ).
pub fn fuse_pair(model: &AnyonModelSpec, state: &StateVector, pair: (usize, usize)) -> Result<Vec<FusionOutcome>> {
    let (triple, pauli) = pair_basis(state.register(), pair)?;
    let two_triples = match state.register() {
        Register::Fusion(b) => b.shape == TreeShape::TwoTriples,
        Register::Qubits(w) => *w == 2,
    };
    let mut outcomes = Vec::with_capacity(2);
    for (channel, name) in ["vac", "psi"].into_iter().enumerate() {
        let local = channel_projector(model, pauli, channel);
        let projector = if two_triples {
            let id = linalg::identity(2);
            match triple {
                Triple::Clock => linalg::kron(&local, &id),
                Triple::System => linalg::kron(&id, &local),
            }
        } else {
            local
        };
        let projected = &projector * state.amplitudes();
        let probability = projected.norm_squared();
        let post_state = if probability > ZERO_PROBABILITY {
            Some(StateVector::normalized(state.register().clone(), projected)?)
        } else {
            None
        };
        outcomes.push(FusionOutcome {
            pair,
            charge: model.label_id(name)?,
            charge_name: name.to_string(),
            probability,
            post_state,
        });
    }
    Ok(outcomes)
}

/// A positive effect on the clock qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmEffect {
    pub matrix: CMatrix,
    pub outcome: String,
}

impl PovmEffect {
    pub fn new(matrix: CMatrix, outcome: impl Into<String>) -> Self {
        Self { matrix, outcome: outcome.into() }
    }

    pub fn trace(&self) -> f64 {
        (self.matrix[(0, 0)] + self.matrix[(1, 1)]).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigenvalues_2x2(&self.matrix)[0]
    }

    pub fn is_rank_one(&self) -> bool {
        self.trace() > ZERO_PROBABILITY && self.min_eigenvalue().abs() < EFFECT_TOL * self.trace().max(1.0)
    }

    /// Bloch vector of the trace-normalised effect.
    pub fn bloch(&self) -> [f64; 3] {
        linalg::bloch_vector(&self.matrix)
    }

    pub fn is_equatorial(&self) -> bool {
        self.is_rank_one() && self.bloch()[2].abs() < EFFECT_TOL
    }

    /// Equatorial angle `φ` with `E ∝ rot_z(φ)|+⟩⟨+|rot_z(φ)†`, in `[0, 2π)`.
    pub fn tick_angle(&self) -> f64 {
        self.matrix[(0, 1)].arg().rem_euclid(2.0 * PI)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("outcome".into(), Value::from(self.outcome.clone()));
        m.insert("matrix".into(), report::matrix(&self.matrix));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidPovm(format!("effect {what}"));
        let outcome = v.get("outcome").and_then(Value::as_str).unwrap_or("").to_string();
        let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| bad("has no matrix"))?;
        if rows.len() != 2 {
            return Err(bad("matrix is not 2x2"));
        }
        let mut m = CMatrix::zeros(2, 2);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(|| bad("matrix is not 2x2"))?;
            for (j, z) in row.iter().enumerate() {
                let pair = z.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("entry is not [re, im]"))?;
                let re = pair[0].as_f64().ok_or_else(|| bad("entry is not numeric"))?;
                let im = pair[1].as_f64().ok_or_else(|| bad("entry is not numeric"))?;
                m[(i, j)] = linalg::c(re, im);
            }
        }
        Ok(Self { matrix: m, outcome })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PovmCheck {
    pub completeness_error: f64,
    pub min_eigenvalue: f64,
}

impl PovmCheck {
    pub fn passed(&self) -> bool {
        self.completeness_error <= COMPLETENESS_TOL && self.min_eigenvalue >= -PSD_TOL
    }
}

pub fn check_povm(effects: &[PovmEffect]) -> PovmCheck {
    let mut sum = CMatrix::zeros(2, 2);
    let mut min_eigenvalue = f64::INFINITY;
    for e in effects {
        sum += &e.matrix;
        min_eigenvalue = min_eigenvalue.min(e.min_eigenvalue());
    }
    PovmCheck { completeness_error: linalg::max_abs_diff(&sum, &linalg::identity(2)), min_eigenvalue }
}

pub fn validate_povm(effects: &[PovmEffect]) -> Result<PovmCheck> {
    if effects.is_empty() {
        return Err(Error::InvalidPovm("no effects".into()));
    }
    if effects.iter().any(|e| e.matrix.shape() != (2, 2)) {
        return Err(Error::InvalidPovm("effects must be 2x2".into()));
    }
    if effects.iter().any(|e| linalg::hermiticity_error(&e.matrix) > PSD_TOL) {
        return Err(Error::InvalidPovm("effect is not Hermitian".into()));
    }
    let check = check_povm(effects);
    if !check.passed() {
        return Err(Error::InvalidPovm(format!(
            "completeness error {:.3e}, min eigenvalue {:.3e}",
            check.completeness_error, check.min_eigenvalue
        )));
    }
    Ok(check)
}

fn outcome_label(z: usize, width: usize) -> String {
    format!("{z:0width$b}")
}

/// Columns of `U` that the clock states `|c⟩ ⊗ |0…0⟩` select.
fn clock_columns(m: usize) -> [usize; 2] {
    [0, 1 << m]
}

/// Effects of reading out every qubit after the isometry `V`
/// (`2^(m+1) × 2`): `E_z = r_z† r_z` for row `r_z` of `V`.
fn effects_of_isometry(v: &CMatrix, m: usize) -> Vec<PovmEffect> {
    (0..v.nrows())
        .map(|z| {
            let row = v.row(z);
            let e = CMatrix::from_fn(2, 2, |i, j| row[i].conj() * row[j]);
            PovmEffect::new(e, outcome_label(z, m + 1))
        })
        .collect()
}

/// Clock POVM realised by `U` on clock ⊗ `m` ancillas (clock most
/// significant), ancillas starting in `|0…0⟩`.
pub fn povm_from_circuit(u: &GateMatrix, m: usize) -> Result<Vec<PovmEffect>> {
    let dim = 2usize << m;
    if u.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: u.dim() });
    }
    let err = u.unitarity_error();
    if err > GATE_TOL {
        return Err(Error::NotUnitary(err));
    }
    let cols = clock_columns(m);
    let v = CMatrix::from_fn(dim, 2, |i, j| u.matrix()[(i, cols[j])]);
    Ok(effects_of_isometry(&v, m))
}

/// Tick state `rot_z(2πj/n)|+⟩` on the equator.
pub(crate) fn equatorial_ket(angle: f64) -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_column_slice(&[C64::from_polar(s, angle / 2.0), C64::from_polar(s, -angle / 2.0)])
}

/// `E_j = (2/n)|τ_j⟩⟨τ_j|` with `|τ_j⟩` at equatorial angle `2πj/n`.
pub fn covariant_equatorial_povm(n: usize) -> Result<Vec<PovmEffect>> {
    if n < 2 {
        return Err(Error::DegenerateSchedule(n));
    }
    Ok((0..n)
        .map(|j| {
            let ket = equatorial_ket(2.0 * PI * j as f64 / n as f64);
            PovmEffect::new(&ket * ket.adjoint() * cr(2.0 / n as f64), j.to_string())
        })
        .collect())
}

/// A unitary on clock ⊗ `m` ancillas whose readout reproduces the given
/// rank-one (or zero) effects, one per outcome, padded with zero effects.
pub fn naimark_dilation(effects: &[PovmEffect], m: usize) -> Result<GateMatrix> {
    validate_povm(effects)?;
    let dim = 2usize << m;
    if effects.len() > dim {
        return Err(Error::InvalidPovm(format!("{} effects do not fit {m} ancillas", effects.len())));
    }
    let mut v = CMatrix::zeros(dim, 2);
    for (z, e) in effects.iter().enumerate() {
        if e.trace() <= ZERO_PROBABILITY {
            continue;
        }
        if !e.is_rank_one() {
            return Err(Error::InvalidPovm(format!("effect {} is not rank one", e.outcome)));
        }
        let weight = linalg::eigenvalues_2x2(&e.matrix)[1];
        let dir = linalg::principal_eigenvector_2x2(&e.matrix);
        for j in 0..2 {
            v[(z, j)] = dir[j].conj() * cr(weight.sqrt());
        }
    }
    let cols = clock_columns(m);
    let columns: Vec<(usize, CVector)> = (0..2).map(|j| (cols[j], v.column(j).into_owned())).collect();
    let u = linalg::complete_to_unitary(&columns, dim)
        .ok_or_else(|| Error::InvalidPovm("isometry columns are not orthonormal".into()))?;
    GateMatrix::new(u)
}

/// How the ancillas are prepared before the clock circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaPrep {
    /// `|0…0⟩`
    Zero,
    /// Any braid-preparable (stabilizer) ancilla state.
    Stabilizer,
}

/// How circuits are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Orbit of the clock isometry `U (I ⊗ |prep⟩)`, i.e. the images of
    /// `|0⟩⊗|prep⟩` and `|1⟩⊗|prep⟩`, up to phase.
    IsometryOrbit,
    /// Every element of the full gate group (small `m` only).
    FullClosure,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Outcome label of the first circuit that produced this effect.
    pub outcome: String,
    /// Trace-normalised effect.
    pub matrix: CMatrix,
    pub rank_one: bool,
    pub equatorial: bool,
}

/// Distinct clock effects (up to scale) reachable by braid-generated circuits.
#[derive(Debug, Clone)]
pub struct EffectCatalog {
    pub ancilla: usize,
    entries: BTreeMap<Vec<i64>, CatalogEntry>,
    /// Most distinct effect directions inside a single POVM (`N_max`).
    pub max_outcomes_per_povm: usize,
    /// Most distinct equatorial rank-one directions inside a single POVM.
    pub max_equatorial_per_povm: usize,
    /// Circuits (isometries or group elements) examined.
    pub circuits: usize,
    pub worst_completeness_error: f64,
    pub min_effect_eigenvalue: f64,
}

impl EffectCatalog {
    pub fn n_distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn n_equatorial_rank1(&self) -> usize {
        self.entries.values().filter(|e| e.equatorial).count()
    }

    pub fn n_rank1(&self) -> usize {
        self.entries.values().filter(|e| e.rank_one).count()
    }

    /// `N_max`: the largest number of distinct ticks one POVM can resolve.
    pub fn n_max(&self) -> usize {
        self.max_outcomes_per_povm
    }

    pub fn entries(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.values()
    }

    pub fn same_effects(&self, other: &EffectCatalog) -> bool {
        self.entries.keys().eq(other.entries.keys())
    }

    pub fn is_subset_of(&self, other: &EffectCatalog) -> bool {
        self.entries.keys().all(|k| other.entries.contains_key(k))
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("ancilla".into(), Value::from(self.ancilla));
        m.insert("n_max".into(), Value::from(self.n_max()));
        m.insert("max_equatorial_ticks_per_povm".into(), Value::from(self.max_equatorial_per_povm));
        m.insert("equatorial_ticks".into(), Value::from(self.n_equatorial_rank1()));
        m.insert("n_distinct".into(), Value::from(self.n_distinct()));
        m.insert("circuits".into(), Value::from(self.circuits));
        m.insert(
            "effects".into(),
            Value::Array(
                self.entries
                    .values()
                    .map(|e| {
                        let mut o = Map::new();
                        o.insert("outcome".into(), Value::from(e.outcome.clone()));
                        o.insert("matrix".into(), report::matrix(&e.matrix));
                        o.insert("equatorial".into(), Value::from(e.equatorial));
                        o.insert("rank_one".into(), Value::from(e.rank_one));
                        Value::Object(o)
                    })
                    .collect(),
            ),
        );
        Value::Object(m)
    }
}

struct CatalogBuilder {
    ancilla: usize,
    entries: BTreeMap<Vec<i64>, CatalogEntry>,
    max_outcomes: usize,
    max_equatorial: usize,
    circuits: usize,
    worst_completeness: f64,
    min_eigenvalue: f64,
}

impl CatalogBuilder {
    fn new(ancilla: usize) -> Self {
        Self {
            ancilla,
            entries: BTreeMap::new(),
            max_outcomes: 0,
            max_equatorial: 0,
            circuits: 0,
            worst_completeness: 0.0,
            min_eigenvalue: f64::INFINITY,
        }
    }

    fn add_povm(&mut self, effects: &[PovmEffect]) {
        self.circuits += 1;
        let check = check_povm(effects);
        self.worst_completeness = self.worst_completeness.max(check.completeness_error);
        self.min_eigenvalue = self.min_eigenvalue.min(check.min_eigenvalue);
        let mut directions = HashSet::new();
        let mut equatorial = HashSet::new();
        for e in effects {
            let tr = e.trace();
            if tr <= ZERO_PROBABILITY {
                continue;
            }
            let normalized = &e.matrix / cr(tr);
            let key = linalg::rounded_key(&linalg::row_major(&normalized));
            let is_eq = e.is_equatorial();
            if is_eq {
                equatorial.insert(key.clone());
            }
            directions.insert(key.clone());
            self.entries.entry(key).or_insert_with(|| CatalogEntry {
                outcome: e.outcome.clone(),
                matrix: normalized,
                rank_one: e.is_rank_one(),
                equatorial: is_eq,
            });
        }
        self.max_outcomes = self.max_outcomes.max(directions.len());
        self.max_equatorial = self.max_equatorial.max(equatorial.len());
    }

    fn finish(self) -> EffectCatalog {
        EffectCatalog {
            ancilla: self.ancilla,
            entries: self.entries,
            max_outcomes_per_povm: self.max_outcomes,
            max_equatorial_per_povm: self.max_equatorial,
            circuits: self.circuits,
            worst_completeness_error: self.worst_completeness,
            min_effect_eigenvalue: self.min_eigenvalue,
        }
    }
}

/// Clock isometries `I ⊗ |s⟩` for each ancilla preparation `|s⟩`.
fn starting_isometries(model: &AnyonModelSpec, m: usize, prep: AncillaPrep) -> Result<Vec<CMatrix>> {
    let ancilla_states: Vec<CVector> = match (prep, m) {
        (_, 0) => vec![CVector::from_element(1, cr(1.0))],
        (AncillaPrep::Zero, _) => {
            let mut v = CVector::zeros(1 << m);
            v[0] = cr(1.0);
            vec![v]
        }
        (AncillaPrep::Stabilizer, _) => {
            let gens = braiding::register_generators(model, m)?;
            let group = braiding::group_closure(&gens, braiding::DEFAULT_MAX_GROUP)?;
            let mut zero = CVector::zeros(1 << m);
            zero[0] = cr(1.0);
            let start = StateVector::new(Register::Qubits(m), zero)?;
            braiding::reachable_states(&start, &group)?.into_iter().map(|s| s.amplitudes().clone()).collect()
        }
    };
    let id = linalg::identity(2);
    Ok(ancilla_states
        .into_iter()
        .map(|s| {
            let col = CMatrix::from_column_slice(s.len(), 1, s.as_slice());
            linalg::kron(&id, &col)
        })
        .collect())
}

fn isometry_key(v: &CMatrix) -> (Vec<i64>, CMatrix) {
    let mut entries = linalg::row_major(v);
    linalg::fix_global_phase(&mut entries);
    let key = linalg::rounded_key(&entries);
    (key, CMatrix::from_row_slice(v.nrows(), v.ncols(), &entries))
}

/// Distinct clock effects reachable with braid-generated gates on the clock
/// and `m` ancillas, ancillas in `|0…0⟩`, via the isometry orbit.
pub fn enumerate_clifford_povms(model: &AnyonModelSpec, m: usize) -> Result<EffectCatalog> {
    enumerate_clifford_povms_with(model, m, AncillaPrep::Zero, Enumeration::IsometryOrbit)
}

pub fn enumerate_clifford_povms_with(
    model: &AnyonModelSpec,
    m: usize,
    prep: AncillaPrep,
    method: Enumeration,
) -> Result<EffectCatalog> {
    if m > MAX_ENUMERATED_ANCILLA {
        return Err(Error::ScaleGuard { m, max: MAX_ENUMERATED_ANCILLA });
    }
    if method == Enumeration::FullClosure && m > MAX_CLOSURE_ANCILLA {
        return Err(Error::ScaleGuard { m, max: MAX_CLOSURE_ANCILLA });
    }
    let gens = braiding::register_generators(model, m + 1)?;
    let starts = starting_isometries(model, m, prep)?;
    let mut builder = CatalogBuilder::new(m);
    match method {
        Enumeration::FullClosure => {
            let group = braiding::group_closure(&gens, braiding::DEFAULT_MAX_GROUP)?;
            for u in group.iter() {
                for v0 in &starts {
                    builder.add_povm(&effects_of_isometry(&(u.matrix() * v0), m));
                }
            }
        }
        Enumeration::IsometryOrbit => {
            let mut seen = HashSet::new();
            let mut queue = Vec::new();
            for v0 in starts {
                let (key, v) = isometry_key(&v0);
                if seen.insert(key) {
                    queue.push(v);
                }
            }
            let mut cursor = 0;
            while cursor < queue.len() {
                let v = queue[cursor].clone();
                cursor += 1;
                builder.add_povm(&effects_of_isometry(&v, m));
                for g in &gens {
                    let (key, next) = isometry_key(&(g.matrix() * &v));
                    if seen.insert(key) {
                        if seen.len() > braiding::DEFAULT_MAX_GROUP {
                            return Err(Error::ClosureExceeded(braiding::DEFAULT_MAX_GROUP));
                        }
                        queue.push(next);
                    }
                }
            }
        }
    }
    Ok(builder.finish())
}

/// Distinct tick directions in a single POVM (zero effects dropped).
pub fn distinct_directions(effects: &[PovmEffect]) -> usize {
    let mut b = CatalogBuilder::new(0);
    b.add_povm(effects);
    b.max_outcomes
}

/// Distinct equatorial rank-one directions in a single POVM.
pub fn distinct_equatorial_directions(effects: &[PovmEffect]) -> usize {
    let mut b = CatalogBuilder::new(0);
    b.add_povm(effects);
    b.max_equatorial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon_model::su2_level2;
    use crate::fusion_space::{encode_qubit, QubitKet};
    use crate::linalg::c;

    fn proj(k: QubitKet) -> CMatrix {
        let v = k.vector();
        &v * v.adjoint()
    }

    #[test]
    fn pair_mapping() {
        let r3 = Register::Qubits(1);
        assert_eq!(pair_basis(&r3, (1, 2)).unwrap(), (Triple::Clock, Pauli::Z));
        assert_eq!(pair_basis(&r3, (3, 2)).unwrap(), (Triple::Clock, Pauli::X));
        assert_eq!(pair_basis(&r3, (1, 3)).unwrap(), (Triple::Clock, Pauli::Y));
        assert!(matches!(pair_basis(&r3, (1, 4)), Err(Error::InvalidPair(1, 4))));
        assert!(matches!(pair_basis(&r3, (2, 2)), Err(Error::InvalidPair(2, 2))));
        let r6 = Register::Qubits(2);
        assert_eq!(pair_basis(&r6, (5, 6)).unwrap(), (Triple::System, Pauli::Z));
        assert!(matches!(pair_basis(&r6, (3, 4)), Err(Error::CrossPartitionFusion(3, 4))));
        assert!(matches!(pair_basis(&r6, (1, 6)), Err(Error::CrossPartitionFusion(1, 6))));
    }

    #[test]
    fn fusion_of_basis_states() {
        let m = su2_level2();
        let out = fuse_pair(&m, &encode_qubit(QubitKet::Zero), (1, 2)).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-14 && out[1].probability < 1e-14);
        assert!(out[1].post_state.is_none());
        let out = fuse_pair(&m, &encode_qubit(QubitKet::Zero), (2, 3)).unwrap();
        assert!((out[0].probability - 0.5).abs() < 1e-14 && (out[1].probability - 0.5).abs() < 1e-14);
        // vac post-state of the (2,3) pair is |vac_X⟩ = |+⟩
        let post = out[0].post_state.as_ref().unwrap();
        assert!((post.fidelity(&encode_qubit(QubitKet::Plus)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outer_pair_measures_y() {
        let m = su2_level2();
        // |+i⟩ = e^{iπ/4} B|1⟩ carries charge ψ on the outer pair.
        let out = fuse_pair(&m, &encode_qubit(QubitKet::PlusI), (1, 3)).unwrap();
        assert!(out[0].probability < 1e-14);
        assert!((out[1].probability - 1.0).abs() < 1e-14);
        let out = fuse_pair(&m, &encode_qubit(QubitKet::MinusI), (1, 3)).unwrap();
        assert!((out[0].probability - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trivial_circuits() {
        let effects = povm_from_circuit(&GateMatrix::identity(2), 0).unwrap();
        assert!(linalg::max_abs_diff(&effects[0].matrix, &proj(QubitKet::Zero)) < 1e-15);
        assert!(linalg::max_abs_diff(&effects[1].matrix, &proj(QubitKet::One)) < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = GateMatrix::new(linalg::from_rows(&[&[cr(s), cr(s)], &[cr(s), cr(-s)]])).unwrap();
        let effects = povm_from_circuit(&h, 0).unwrap();
        assert!(linalg::max_abs_diff(&effects[0].matrix, &proj(QubitKet::Plus)) < 1e-15);
        assert!(linalg::max_abs_diff(&effects[1].matrix, &proj(QubitKet::Minus)) < 1e-15);
        assert_eq!(effects[1].outcome, "1");
    }

    #[test]
    fn circuit_errors() {
        assert!(matches!(
            povm_from_circuit(&GateMatrix::identity(4), 0),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
        let bad = GateMatrix::new_unchecked(linalg::diag(&[cr(1.0), cr(2.0)]));
        assert!(matches!(povm_from_circuit(&bad, 0), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn covariant_povm() {
        assert!(covariant_equatorial_povm(1).is_err());
        let two = covariant_equatorial_povm(2).unwrap();
        assert!(linalg::max_abs_diff(&two[0].matrix, &proj(QubitKet::Plus)) < 1e-15);
        assert!(linalg::max_abs_diff(&two[1].matrix, &proj(QubitKet::Minus)) < 1e-15);
        let four = covariant_equatorial_povm(4).unwrap();
        for (j, e) in four.iter().enumerate() {
            assert!((e.trace() - 0.5).abs() < 1e-15);
            assert!((e.tick_angle() - j as f64 * PI / 2.0).abs() < 1e-12);
        }
        assert!(check_povm(&four).passed());
    }

    #[test]
    fn dilation_reproduces_effects() {
        for m in 0..=3 {
            let n = 2usize << m;
            let target = covariant_equatorial_povm(n).unwrap();
            let u = naimark_dilation(&target, m).unwrap();
            let got = povm_from_circuit(&u, m).unwrap();
            for (a, b) in got.iter().zip(&target) {
                assert!(linalg::max_abs_diff(&a.matrix, &b.matrix) < 1e-12);
            }
            assert_eq!(distinct_equatorial_directions(&got), n);
        }
    }

    #[test]
    fn dilation_rejects_too_many_effects() {
        let eight = covariant_equatorial_povm(8).unwrap();
        assert!(naimark_dilation(&eight, 1).is_err());
        let mixed = vec![PovmEffect::new(linalg::identity(2) * cr(0.5), "a"), PovmEffect::new(linalg::identity(2) * cr(0.5), "b")];
        assert!(naimark_dilation(&mixed, 1).is_err());
    }

    #[test]
    fn effect_json_roundtrip() {
        let e = PovmEffect::new(proj(QubitKet::PlusI) * cr(0.5), "01");
        let back = PovmEffect::from_json(&e.to_json()).unwrap();
        assert_eq!(back.outcome, "01");
        assert!(linalg::max_abs_diff(&back.matrix, &e.matrix) < 1e-11);
        assert!(PovmEffect::from_json(&serde_json::json!({"matrix": [[1]]})).is_err());
    }

    #[test]
    fn single_qubit_catalog() {
        let cat = enumerate_clifford_povms(&su2_level2(), 0).unwrap();
        assert_eq!(cat.circuits, 24);
        assert_eq!(cat.n_distinct(), 6);
        assert_eq!(cat.n_rank1(), 6);
        assert_eq!(cat.n_equatorial_rank1(), 4);
        assert_eq!(cat.n_max(), 2);
    }

    #[test]
    fn scale_guard() {
        let m = su2_level2();
        assert!(matches!(enumerate_clifford_povms(&m, 3), Err(Error::ScaleGuard { m: 3, max: 2 })));
        assert!(matches!(
            enumerate_clifford_povms_with(&m, 2, AncillaPrep::Zero, Enumeration::FullClosure),
            Err(Error::ScaleGuard { m: 2, max: 1 })
        ));
    }

    #[test]
    fn validate_povm_rejects_incomplete() {
        let e = vec![PovmEffect::new(proj(QubitKet::Zero), "0")];
        assert!(validate_povm(&e).is_err());
        let neg = vec![
            PovmEffect::new(linalg::diag(&[cr(1.5), cr(1.0)]), "0"),
            PovmEffect::new(linalg::diag(&[cr(-0.5), cr(0.0)]), "1"),
        ];
        assert!(validate_povm(&neg).is_err());
        let nonherm = vec![PovmEffect::new(linalg::from_rows(&[&[cr(1.0), c(0.0, 0.5)], &[c(0.0, 0.5), cr(1.0)]]), "0")];
        assert!(validate_povm(&nonherm).is_err());
    }
}
