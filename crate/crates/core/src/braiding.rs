//! Braid generators as unitaries on fusion spaces, braid words, and the
//! finite group they generate modulo global phase.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::anyon_model::AnyonModelSpec;
use crate::error::{Error, Result};
use crate::fusion_space::{FusionBasis, Register, StateVector, TreeShape};
use crate::linalg::{self, CMatrix, C64};
use crate::report::ValidationReport;

/// Unitarity and relation tolerance for gates.
pub const GATE_TOL: f64 = 1e-10;

/// Default safety bound for [`group_closure`].
pub const DEFAULT_MAX_GROUP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Crossing {
    Over,
    Under,
}

/// A product of elementary crossings `σ_i^{±1}` on `n_strands` strands.
///
/// Crossings are stored in written order and read as an operator product,
/// so the rightmost crossing acts first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    pub n_strands: usize,
    pub crossings: Vec<(usize, Crossing)>,
}

impl BraidWord {
    pub fn new(n_strands: usize, crossings: Vec<(usize, Crossing)>) -> Result<Self> {
        for &(i, _) in &crossings {
            if i == 0 || i >= n_strands {
                return Err(Error::StrandOutOfRange { index: i, n_strands });
            }
        }
        Ok(Self { n_strands, crossings })
    }

    pub fn identity(n_strands: usize) -> Self {
        Self { n_strands, crossings: Vec::new() }
    }

    /// Parses whitespace-separated `s<i>` (over) / `S<i>` (under) tokens.
    pub fn parse(text: &str, n_strands: usize) -> Result<Self> {
        let mut crossings = Vec::new();
        for token in text.split_whitespace() {
            let (orientation, digits) = match token.split_at(1) {
                ("s", rest) => (Crossing::Over, rest),
                ("S", rest) => (Crossing::Under, rest),
                _ => return Err(Error::BraidParse(format!("bad token '{token}'"))),
            };
            let index: usize =
                digits.parse().map_err(|_| Error::BraidParse(format!("bad strand index in '{token}'")))?;
            crossings.push((index, orientation));
        }
        Self::new(n_strands, crossings)
    }

    pub fn inverse(&self) -> Self {
        let crossings = self
            .crossings
            .iter()
            .rev()
            .map(|&(i, c)| (i, if c == Crossing::Over { Crossing::Under } else { Crossing::Over }))
            .collect();
        Self { n_strands: self.n_strands, crossings }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .crossings
            .iter()
            .map(|&(i, c)| match c {
                Crossing::Over => format!("s{i}"),
                Crossing::Under => format!("S{i}"),
            })
            .collect();
        f.write_str(&tokens.join(" "))
    }
}

/// A dense unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix(CMatrix);

impl GateMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let err = linalg::unitarity_error(&m);
        if err > GATE_TOL {
            return Err(Error::NotUnitary(err));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(linalg::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `self · rhs`
    pub fn compose(&self, rhs: &GateMatrix) -> Self {
        Self(&self.0 * &rhs.0)
    }

    pub fn scale(&self, phase: C64) -> Self {
        Self(&self.0 * phase)
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.0)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        state.apply(&self.0)
    }

    /// Equality up to a global phase at the hashing resolution.
    pub fn equals_up_to_phase(&self, other: &GateMatrix) -> bool {
        self.dim() == other.dim() && PhaseCanonicalGate::new(self).key == PhaseCanonicalGate::new(other).key
    }
}

/// A gate with its global phase fixed: the first row-major entry of
/// non-negligible modulus is made real positive, and entries are keyed on a
/// 1e-8 grid.
#[derive(Debug, Clone)]
pub struct PhaseCanonicalGate {
    matrix: CMatrix,
    key: Vec<i64>,
}

impl PhaseCanonicalGate {
    pub fn new(gate: &GateMatrix) -> Self {
        Self::from_matrix(gate.matrix())
    }

    fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = linalg::row_major(m);
        linalg::fix_global_phase(&mut entries);
        let key = linalg::rounded_key(&entries);
        let matrix = CMatrix::from_row_slice(m.nrows(), m.ncols(), &entries);
        Self { matrix, key }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn gate(&self) -> GateMatrix {
        GateMatrix(self.matrix.clone())
    }

    pub fn key(&self) -> &[i64] {
        &self.key
    }
}

impl PartialEq for PhaseCanonicalGate {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for PhaseCanonicalGate {}

impl Hash for PhaseCanonicalGate {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

/// All braid generators of one fusion space, computed once.
#[derive(Debug, Clone)]
pub struct BraidRepresentation {
    n_strands: usize,
    generators: Vec<GateMatrix>,
}

impl BraidRepresentation {
    pub fn new(model: &AnyonModelSpec, basis: &FusionBasis) -> Result<Self> {
        let r = channel_gate(model, basis, &model.r_matrix)?;
        let b = half_twist(model, &r);
        let generators = match basis.shape {
            TreeShape::Triple => vec![r, b],
            TreeShape::TwoTriples => {
                let id = linalg::identity(2);
                vec![
                    linalg::kron(&r, &id),
                    linalg::kron(&b, &id),
                    cross_exchange(model, basis)?,
                    linalg::kron(&id, &b),
                    linalg::kron(&id, &r),
                ]
            }
        };
        Ok(Self {
            n_strands: basis.n_strands(),
            generators: generators.into_iter().map(GateMatrix::new_unchecked).collect(),
        })
    }

    pub fn n_strands(&self) -> usize {
        self.n_strands
    }

    /// Generator exchanging strands `i` and `i + 1` (1-based).
    pub fn generator(&self, i: usize) -> Result<&GateMatrix> {
        if i == 0 || i >= self.n_strands {
            return Err(Error::StrandOutOfRange { index: i, n_strands: self.n_strands });
        }
        Ok(&self.generators[i - 1])
    }

    pub fn generators(&self) -> &[GateMatrix] {
        &self.generators
    }

    pub fn evaluate(&self, word: &BraidWord) -> Result<GateMatrix> {
        if word.n_strands != self.n_strands {
            return Err(Error::StrandOutOfRange { index: word.n_strands, n_strands: self.n_strands });
        }
        let dim = self.generators[0].dim();
        let mut acc = linalg::identity(dim);
        for &(i, orientation) in &word.crossings {
            let g = self.generator(i)?;
            acc = match orientation {
                Crossing::Over => acc * g.matrix(),
                Crossing::Under => acc * g.matrix().adjoint(),
            };
        }
        Ok(GateMatrix(acc))
    }
}

/// `R` in the basis order of a three-σ fusion space.
fn channel_gate(model: &AnyonModelSpec, basis: &FusionBasis, m: &CMatrix) -> Result<CMatrix> {
    // The per-triple qubit is {vac, ψ} in the channel order F and R use.
    let channels: Vec<usize> = match basis.shape {
        TreeShape::Triple => basis.states.iter().map(|s| s[0]).collect(),
        TreeShape::TwoTriples => {
            let mut v: Vec<usize> = basis.states.iter().map(|s| s[0]).collect();
            v.dedup();
            v
        }
    };
    let order: Option<Vec<usize>> = channels.iter().map(|&l| model.channel_index(l)).collect();
    match order {
        Some(o) if o == [0, 1] => Ok(m.clone()),
        _ => Err(Error::DimensionMismatch { expected: 2, found: channels.len() }),
    }
}

/// `F† R F`: exchange of the pair that shares a channel only in the x tree.
fn half_twist(model: &AnyonModelSpec, r: &CMatrix) -> CMatrix {
    let f = &model.f_matrix;
    f.adjoint() * r * f
}

/// Exchange of anyons 3 and 4 across the clock/system cut.
///
/// Starting from `[((1 2)_a 3)_σ (4 (5 6)_b)_σ]_vac`, associate the system
/// triple's anyon 4 onto the clock triple, `[[((1 2)_a 3)_σ 4]_b (5 6)_b]_vac`,
/// then move anyon 3 next to 4, `[(1 2)_a (3 4)_c]_b` with `c = a × b`. Both
/// moves are one-dimensional with unit coefficient, so the exchange is
/// diagonal in `(a, b)` with the phase `R_c`.
fn cross_exchange(model: &AnyonModelSpec, basis: &FusionBasis) -> Result<CMatrix> {
    let phases = basis
        .states
        .iter()
        .map(|s| {
            let outcomes = model.rules.outcomes(s[0], s[1]);
            match outcomes.as_slice() {
                [c] => model.exchange_phase(*c).ok_or(Error::UnknownLabel(model.label_name(*c).into())),
                _ => Err(Error::UnknownLabel(format!("{} x {}", model.label_name(s[0]), model.label_name(s[1])))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::diag(&phases))
}

pub fn generator_matrix(model: &AnyonModelSpec, basis: &FusionBasis, i: usize) -> Result<GateMatrix> {
    BraidRepresentation::new(model, basis)?.generator(i).cloned()
}

pub fn evaluate_braid(word: &BraidWord, model: &AnyonModelSpec, basis: &FusionBasis) -> Result<GateMatrix> {
    BraidRepresentation::new(model, basis)?.evaluate(word)
}

/// Checks unitarity, Yang–Baxter `gᵢgᵢ₊₁gᵢ = gᵢ₊₁gᵢgᵢ₊₁` and far commutation
/// `gᵢgⱼ = gⱼgᵢ` (|i − j| ≥ 2) for every generator of the representation.
pub fn verify_braid_relations(model: &AnyonModelSpec, basis: &FusionBasis) -> ValidationReport {
    let mut report = ValidationReport::new();
    let rep = match BraidRepresentation::new(model, basis) {
        Ok(rep) => rep,
        Err(e) => {
            report.push("representation", false, e.to_string());
            return report;
        }
    };
    let g: Vec<&CMatrix> = rep.generators().iter().map(|g| g.matrix()).collect();
    for (k, m) in g.iter().enumerate() {
        let err = linalg::unitarity_error(m);
        report.push(format!("unitary_s{}", k + 1), err < GATE_TOL, format!("{err:.3e}"));
    }
    for i in 0..g.len().saturating_sub(1) {
        let (a, b) = (g[i], g[i + 1]);
        let err = linalg::max_abs_diff(&(a * b * a), &(b * a * b));
        report.push(format!("yang_baxter_s{}_s{}", i + 1, i + 2), err < GATE_TOL, format!("{err:.3e}"));
    }
    for i in 0..g.len() {
        for j in (i + 2)..g.len() {
            let err = linalg::max_abs_diff(&(g[i] * g[j]), &(g[j] * g[i]));
            report.push(format!("far_commute_s{}_s{}", i + 1, j + 1), err < GATE_TOL, format!("{err:.3e}"));
        }
    }
    report
}

/// A finite group of unitaries modulo global phase, in discovery order.
#[derive(Debug, Clone)]
pub struct GateGroup {
    dim: usize,
    elements: Vec<PhaseCanonicalGate>,
    index: HashMap<Vec<i64>, usize>,
}

impl GateGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[PhaseCanonicalGate] {
        &self.elements
    }

    pub fn contains(&self, gate: &GateMatrix) -> bool {
        self.index.contains_key(&PhaseCanonicalGate::new(gate).key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PhaseCanonicalGate> {
        self.elements.iter()
    }
}

/// Breadth-first closure of `generators` under multiplication, modulo
/// global phase. Fails once more than `max_size` elements are found.
pub fn group_closure(generators: &[GateMatrix], max_size: usize) -> Result<GateGroup> {
    let dim = generators.first().map(GateMatrix::dim).ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
    if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
    }
    let identity = PhaseCanonicalGate::from_matrix(&linalg::identity(dim));
    let mut index = HashMap::new();
    index.insert(identity.key.clone(), 0);
    let mut elements = vec![identity];
    let mut cursor = 0;
    while cursor < elements.len() {
        let current = elements[cursor].matrix.clone();
        cursor += 1;
        for g in generators {
            let candidate = PhaseCanonicalGate::from_matrix(&(g.matrix() * &current));
            if !index.contains_key(&candidate.key) {
                if elements.len() >= max_size {
                    return Err(Error::ClosureExceeded(max_size));
                }
                index.insert(candidate.key.clone(), elements.len());
                elements.push(candidate);
            }
        }
    }
    Ok(GateGroup { dim, elements, index })
}

/// Orbit of `start` under the group, states compared up to global phase.
/// The returned states have their global phase fixed.
pub fn reachable_states(start: &StateVector, group: &GateGroup) -> Result<Vec<StateVector>> {
    if start.dim() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), found: start.dim() });
    }
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for g in group.iter() {
        let image = g.matrix() * start.amplitudes();
        let mut entries: Vec<C64> = image.iter().copied().collect();
        linalg::fix_global_phase(&mut entries);
        let key = linalg::rounded_key(&entries);
        if seen.insert(key, ()).is_none() {
            let v = crate::linalg::CVector::from_column_slice(&entries);
            out.push(StateVector::normalized(start.register().clone(), v)?);
        }
    }
    Ok(out)
}

/// Braid-induced gates on `n_qubits` encoded qubits (first qubit most
/// significant): each qubit's `R` and `F†RF`, plus the cross-cut exchange
/// between neighbouring qubits.
pub fn register_generators(model: &AnyonModelSpec, n_qubits: usize) -> Result<Vec<GateMatrix>> {
    let vac = model.vacuum().ok_or_else(|| Error::UnknownLabel("vac".into()))?;
    let pair_basis = crate::fusion_space::standard_basis(model, 6, vac)?;
    let pair_rep = BraidRepresentation::new(model, &pair_basis)?;
    let r = model.r_matrix.clone();
    let b = half_twist(model, &r);
    let cross = pair_rep.generator(3)?.matrix().clone();
    let mut gens = Vec::new();
    for k in 0..n_qubits {
        for local in [&r, &b] {
            gens.push(GateMatrix(embed(local, k, 1, n_qubits)));
        }
    }
    for k in 0..n_qubits.saturating_sub(1) {
        gens.push(GateMatrix(embed(&cross, k, 2, n_qubits)));
    }
    Ok(gens)
}

/// `I ⊗ op ⊗ I` with `op` acting on `width` qubits starting at `first`.
pub fn embed(op: &CMatrix, first: usize, width: usize, n_qubits: usize) -> CMatrix {
    let left = linalg::identity(1 << first);
    let right = linalg::identity(1 << (n_qubits - first - width));
    linalg::kron(&linalg::kron(&left, op), &right)
}

/// Register of the encoded qubits used by [`register_generators`].
pub fn qubit_register(n_qubits: usize) -> Register {
    Register::Qubits(n_qubits)
}
