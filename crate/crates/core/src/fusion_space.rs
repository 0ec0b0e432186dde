//! Fusion-tree bases for three and six σ anyons, and the qubit encoding.
//!
//! Three σ's with total charge σ form one qubit: the "z" tree fuses anyons
//! (1, 2) first into `a ∈ {vac, ψ}` and `|0⟩ = |vac_Z⟩`, `|1⟩ = |ψ_Z⟩`. The
//! "x" tree fuses (2, 3) first; the two are related by `F`.
//!
//! Six σ's with total charge vac are split into a clock triple (1, 2, 3) and
//! a system triple (4, 5, 6). The clock triple fuses `((1 2)_a 3)_σ`; the
//! system triple is its mirror image `(4 (5 6)_a')_σ`, so that anyons 3 and
//! 4 sit next to each other across the cut and the pair (5, 6) carries the
//! system's computational label. Basis states are `(a, a')`, clock first.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::anyon_model::{su2_level2, AnyonModelSpec};
use crate::error::{Error, Result};
use crate::linalg::{self, c, cr, CMatrix, CVector, C64};
use crate::report;

/// Norm tolerance every public state must satisfy.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    /// `((1 2)_a 3)_c`
    Triple,
    /// `[((1 2)_a 3)_σ (4 (5 6)_a')_σ]_vac`
    TwoTriples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Triple {
    Clock,
    System,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionBasis {
    pub model: String,
    pub n_anyons: usize,
    pub total_charge: usize,
    pub shape: TreeShape,
    /// Intermediate labels per basis state: `[a]` or `[a, a']`.
    pub states: Vec<Vec<usize>>,
    label_names: Vec<String>,
}

impl FusionBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn n_strands(&self) -> usize {
        self.n_anyons
    }

    pub fn label_name(&self, id: usize) -> &str {
        &self.label_names[id]
    }

    pub fn state_name(&self, index: usize) -> String {
        self.states[index].iter().map(|&l| self.label_names[l].as_str()).collect::<Vec<_>>().join(",")
    }

    pub fn tree_description(&self) -> String {
        let total = &self.label_names[self.total_charge];
        match self.shape {
            TreeShape::Triple => format!("((1 2)_a 3)_{total}"),
            TreeShape::TwoTriples => format!("[((1 2)_a 3)_sigma (4 (5 6)_b)_sigma]_{total}"),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("model".into(), Value::from(self.model.clone()));
        m.insert("n_anyons".into(), Value::from(self.n_anyons));
        m.insert("total_charge".into(), Value::from(self.label_names[self.total_charge].clone()));
        m.insert("tree".into(), Value::from(self.tree_description()));
        m.insert(
            "states".into(),
            Value::Array((0..self.dim()).map(|i| Value::from(self.state_name(i))).collect()),
        );
        Value::Object(m)
    }
}

/// Canonical basis for `n_anyons ∈ {3, 6}` σ's with the given total charge,
/// ordered lexicographically by label id (vac < ψ), clock labels first.
pub fn standard_basis(model: &AnyonModelSpec, n_anyons: usize, total_charge: usize) -> Result<FusionBasis> {
    let sigma = model.label_id("sigma")?;
    let rules = &model.rules;
    let charge_name = || model.labels.get(total_charge).map_or("?".to_string(), |l| l.name.clone());
    if total_charge >= model.labels.len() {
        return Err(Error::UnknownLabel(total_charge.to_string()));
    }
    let (shape, states) = match n_anyons {
        3 => {
            let states = rules
                .outcomes(sigma, sigma)
                .into_iter()
                .filter(|&a| rules.allowed(a, sigma, total_charge))
                .map(|a| vec![a])
                .collect::<Vec<_>>();
            (TreeShape::Triple, states)
        }
        6 => {
            let pair_labels = rules.outcomes(sigma, sigma);
            let mut states = Vec::new();
            if rules.allowed(sigma, sigma, total_charge) {
                for &a in pair_labels.iter().filter(|&&a| rules.allowed(a, sigma, sigma)) {
                    for &b in pair_labels.iter().filter(|&&b| rules.allowed(sigma, b, sigma)) {
                        states.push(vec![a, b]);
                    }
                }
            }
            (TreeShape::TwoTriples, states)
        }
        n => return Err(Error::UnsupportedAnyonCount(n)),
    };
    if states.is_empty() {
        return Err(Error::EmptyBasis { n_anyons, charge: charge_name() });
    }
    if shape == TreeShape::TwoTriples && Some(total_charge) != model.vacuum() {
        return Err(Error::UnsupportedTotalCharge(charge_name()));
    }
    Ok(FusionBasis {
        model: model.name.clone(),
        n_anyons,
        total_charge,
        shape,
        states,
        label_names: model.labels.iter().map(|l| l.name.clone()).collect(),
    })
}

/// The three-σ qubit basis of SU(2)₂.
pub fn qubit_basis() -> FusionBasis {
    let model = su2_level2();
    let sigma = model.label_id("sigma").expect("built-in label");
    standard_basis(&model, 3, sigma).expect("built-in basis")
}

/// The six-σ clock/system basis of SU(2)₂.
pub fn clock_system_basis() -> FusionBasis {
    let model = su2_level2();
    let vac = model.label_id("vac").expect("built-in label");
    standard_basis(&model, 6, vac).expect("built-in basis")
}

/// What the amplitudes of a [`StateVector`] are indexed by.
#[derive(Debug, Clone, PartialEq)]
pub enum Register {
    Fusion(FusionBasis),
    /// Plain encoded qubits, clock (or first qubit) most significant.
    Qubits(usize),
}

impl Register {
    pub fn dim(&self) -> usize {
        match self {
            Register::Fusion(b) => b.dim(),
            Register::Qubits(w) => 1 << w,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Register::Fusion(b) => b.to_json(),
            Register::Qubits(w) => {
                let mut m = Map::new();
                m.insert("qubits".into(), Value::from(*w));
                Value::Object(m)
            }
        }
    }

    fn is_single_qubit(&self) -> bool {
        match self {
            Register::Fusion(b) => b.shape == TreeShape::Triple && b.dim() == 2,
            Register::Qubits(w) => *w == 1,
        }
    }

    fn is_two_triple(&self) -> bool {
        matches!(self, Register::Fusion(b) if b.shape == TreeShape::TwoTriples)
    }
}

/// Unit-norm amplitudes over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: Register,
    amplitudes: CVector,
}

impl StateVector {
    /// Fails unless the amplitudes already have unit norm.
    pub fn new(register: Register, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != register.dim() {
            return Err(Error::DimensionMismatch { expected: register.dim(), found: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalised(norm));
        }
        Ok(Self { register, amplitudes })
    }

    pub fn normalized(register: Register, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::ZeroVector);
        }
        Self::new(register, amplitudes / cr(norm))
    }

    pub fn qubit(a0: C64, a1: C64) -> Result<Self> {
        Self::normalized(Register::Qubits(1), CVector::from_column_slice(&[a0, a1]))
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Applies a gate of matching dimension. The result is renormalised to
    /// absorb rounding.
    pub fn apply(&self, gate: &CMatrix) -> Result<Self> {
        if gate.ncols() != self.dim() || gate.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: gate.ncols() });
        }
        Self::normalized(self.register.clone(), gate * &self.amplitudes)
    }

    /// Same amplitudes relabelled onto another register of equal dimension.
    pub fn with_register(&self, register: Register) -> Result<Self> {
        Self::new(register, self.amplitudes.clone())
    }

    /// Overlap `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return 0.0;
        }
        linalg::fidelity(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("basis".into(), self.register.to_json());
        m.insert("amplitudes".into(), report::vector(&self.amplitudes));
        Value::Object(m)
    }
}

/// The six one-qubit kets named in the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QubitKet {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl QubitKet {
    pub const ALL: [QubitKet; 6] =
        [QubitKet::Zero, QubitKet::One, QubitKet::Plus, QubitKet::Minus, QubitKet::PlusI, QubitKet::MinusI];

    pub fn amplitudes(self) -> [C64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            QubitKet::Zero => [cr(1.0), cr(0.0)],
            QubitKet::One => [cr(0.0), cr(1.0)],
            QubitKet::Plus => [cr(s), cr(s)],
            QubitKet::Minus => [cr(s), cr(-s)],
            QubitKet::PlusI => [cr(s), c(0.0, s)],
            QubitKet::MinusI => [cr(s), c(0.0, -s)],
        }
    }

    pub fn vector(self) -> CVector {
        CVector::from_column_slice(&self.amplitudes())
    }
}

impl FromStr for QubitKet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "0" => QubitKet::Zero,
            "1" => QubitKet::One,
            "+" => QubitKet::Plus,
            "-" => QubitKet::Minus,
            "+i" => QubitKet::PlusI,
            "-i" => QubitKet::MinusI,
            other => return Err(Error::UnknownLabel(other.to_string())),
        })
    }
}

impl fmt::Display for QubitKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QubitKet::Zero => "0",
            QubitKet::One => "1",
            QubitKet::Plus => "+",
            QubitKet::Minus => "-",
            QubitKet::PlusI => "+i",
            QubitKet::MinusI => "-i",
        })
    }
}

/// Encodes a ket into the three-σ z basis, `|0⟩ = |vac_Z⟩`, `|1⟩ = |ψ_Z⟩`.
pub fn encode_qubit(ket: QubitKet) -> StateVector {
    StateVector::new(Register::Fusion(qubit_basis()), ket.vector()).expect("unit kets")
}

/// Amplitudes over `{vac_Z, ψ_Z}` of a single encoded qubit.
pub fn decode_qubit(state: &StateVector) -> Result<[C64; 2]> {
    if !state.register.is_single_qubit() {
        return Err(Error::DimensionMismatch { expected: 2, found: state.dim() });
    }
    Ok([state.amplitudes[0], state.amplitudes[1]])
}

/// Amplitudes over the x tree labels `{vac_X, ψ_X}`, obtained with `F`.
///
/// On a six-σ state a triple must be named; `F` then acts on that factor.
/// The map is an involution because `F² = I`.
pub fn change_basis_z_to_x(model: &AnyonModelSpec, state: &StateVector, triple: Option<Triple>) -> Result<StateVector> {
    let f = &model.f_matrix;
    let gate = if state.register.is_single_qubit() {
        f.clone()
    } else if state.register.is_two_triple() {
        match triple {
            Some(Triple::Clock) => linalg::kron(f, &linalg::identity(2)),
            Some(Triple::System) => linalg::kron(&linalg::identity(2), f),
            None => return Err(Error::DimensionMismatch { expected: 2, found: state.dim() }),
        }
    } else {
        return Err(Error::DimensionMismatch { expected: 2, found: state.dim() });
    };
    state.apply(&gate)
}

/// Encoded clock ⊗ system product on the six-σ basis.
pub fn two_triple_product(clock: &StateVector, system: &StateVector) -> Result<StateVector> {
    let [c0, c1] = decode_qubit(clock)?;
    let [s0, s1] = decode_qubit(system)?;
    let amps = CVector::from_column_slice(&[c0 * s0, c0 * s1, c1 * s0, c1 * s1]);
    StateVector::normalized(Register::Fusion(clock_system_basis()), amps)
}
