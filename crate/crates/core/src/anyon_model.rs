//! Anyon theories as data: labels, fusion rules and the represented F and R
//! matrices on the two-dimensional σσ fusion channel space {vac, ψ}.

use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::braiding;
use crate::error::{Error, Result};
use crate::fusion_space;
use crate::linalg::{self, c, cr, CMatrix};
use crate::report::{self, ValidationReport};

/// Label ids of the built-in models.
pub const VAC: usize = 0;
pub const SIGMA: usize = 1;
pub const PSI: usize = 2;

/// Tolerance for the unitarity checks on model data.
pub const MODEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnyonLabel {
    pub id: usize,
    pub name: String,
}

/// Multiplicity-free fusion rules: `allowed(a, b, c)` means `c ∈ a × b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRuleTable {
    n_labels: usize,
    allowed: Vec<bool>,
}

impl FusionRuleTable {
    pub fn new(n_labels: usize) -> Self {
        Self { n_labels, allowed: vec![false; n_labels.pow(3)] }
    }

    fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n_labels + b) * self.n_labels + c
    }

    /// Adds `c ∈ a × b` together with its commuted partner.
    pub fn allow(&mut self, a: usize, b: usize, c: usize) {
        let i = self.index(a, b, c);
        let j = self.index(b, a, c);
        self.allowed[i] = true;
        self.allowed[j] = true;
    }

    /// Adds only `c ∈ a × b`; used to build deliberately broken tables.
    pub fn allow_one_sided(&mut self, a: usize, b: usize, c: usize) {
        let i = self.index(a, b, c);
        self.allowed[i] = true;
    }

    pub fn allowed(&self, a: usize, b: usize, c: usize) -> bool {
        a < self.n_labels && b < self.n_labels && c < self.n_labels && self.allowed[self.index(a, b, c)]
    }

    pub fn outcomes(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n_labels).filter(|&c| self.allowed(a, b, c)).collect()
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    /// All allowed triples in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n_labels;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.allowed(a, b, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }
}

/// One anyon theory. `f_matrix` and `r_matrix` act on the fusion channel
/// space of two σ's, ordered as `channels = [vac, ψ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnyonModelSpec {
    pub name: String,
    pub labels: Vec<AnyonLabel>,
    pub rules: FusionRuleTable,
    pub f_matrix: CMatrix,
    pub r_matrix: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Su2Level2,
    Ising,
}

impl ModelKind {
    pub fn spec(self) -> AnyonModelSpec {
        match self {
            ModelKind::Su2Level2 => su2_level2(),
            ModelKind::Ising => ising_variant(),
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "su2_2" | "su2_level2" | "SU(2)_2" => Ok(ModelKind::Su2Level2),
            "ising" => Ok(ModelKind::Ising),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Su2Level2 => "su2_2",
            ModelKind::Ising => "ising",
        })
    }
}

impl AnyonModelSpec {
    pub fn label_id(&self, name: &str) -> Result<usize> {
        self.labels
            .iter()
            .find(|l| l.name == name)
            .map(|l| l.id)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn label_name(&self, id: usize) -> &str {
        &self.labels[id].name
    }

    /// The vacuum is the unique label acting as fusion identity.
    pub fn vacuum(&self) -> Option<usize> {
        let n = self.labels.len();
        let mut found = (0..n).filter(|&v| (0..n).all(|a| self.rules.outcomes(v, a) == vec![a]));
        let first = found.next();
        match found.next() {
            Some(_) => None,
            None => first,
        }
    }

    /// Position of a fusion channel label inside the F/R channel basis.
    pub fn channel_index(&self, label: usize) -> Option<usize> {
        match self.labels.get(label).map(|l| l.name.as_str()) {
            Some("vac") => Some(0),
            Some("psi") => Some(1),
            _ => None,
        }
    }

    /// The exchange phase `R[c][c]` for two σ's in channel `c`.
    pub fn exchange_phase(&self, channel_label: usize) -> Option<linalg::C64> {
        self.channel_index(channel_label).map(|k| self.r_matrix[(k, k)])
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::from(self.name.clone()));
        m.insert(
            "labels".into(),
            Value::Array(self.labels.iter().map(|l| Value::from(l.name.clone())).collect()),
        );
        m.insert(
            "fusion_triples".into(),
            Value::Array(
                self.rules
                    .triples()
                    .into_iter()
                    .map(|(a, b, c)| {
                        Value::Array(vec![
                            Value::from(self.label_name(a)),
                            Value::from(self.label_name(b)),
                            Value::from(self.label_name(c)),
                        ])
                    })
                    .collect(),
            ),
        );
        m.insert("f_matrix".into(), report::matrix(&self.f_matrix));
        m.insert("r_matrix".into(), report::matrix(&self.r_matrix));
        Value::Object(m)
    }
}

fn su2_level2_rules() -> FusionRuleTable {
    let mut rules = FusionRuleTable::new(3);
    for a in [VAC, SIGMA, PSI] {
        rules.allow(VAC, a, a);
    }
    rules.allow(SIGMA, SIGMA, VAC);
    rules.allow(SIGMA, SIGMA, PSI);
    rules.allow(SIGMA, PSI, SIGMA);
    rules.allow(PSI, PSI, VAC);
    rules
}

fn labels() -> Vec<AnyonLabel> {
    ["vac", "sigma", "psi"]
        .iter()
        .enumerate()
        .map(|(id, name)| AnyonLabel { id, name: name.to_string() })
        .collect()
}

fn hadamard_f() -> CMatrix {
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    linalg::from_rows(&[&[s, s], &[s, -s]])
}

/// SU(2)₂: `F = (1/√2)[[1, 1], [1, −1]]`, `R = diag(1, i)`.
pub fn su2_level2() -> AnyonModelSpec {
    AnyonModelSpec {
        name: "su2_2".into(),
        labels: labels(),
        rules: su2_level2_rules(),
        f_matrix: hadamard_f(),
        r_matrix: linalg::diag(&[cr(1.0), c(0.0, 1.0)]),
    }
}

/// Ising variant: same F, with `R → i R†`.
pub fn ising_variant() -> AnyonModelSpec {
    let base = su2_level2();
    let r = base.r_matrix.adjoint() * linalg::I;
    AnyonModelSpec { name: "ising".into(), r_matrix: r, ..base }
}

/// Runs every model-level consistency check; never aborts.
pub fn validate_model(spec: &AnyonModelSpec) -> ValidationReport {
    let mut report = ValidationReport::new();

    let n = spec.labels.len();
    let dense = spec.labels.iter().enumerate().all(|(i, l)| l.id == i) && spec.rules.n_labels() == n;
    report.push("labels_dense", dense, format!("{n} labels"));

    let vacuum = spec.vacuum();
    report.push(
        "unique_vacuum",
        vacuum.is_some(),
        match vacuum {
            Some(v) => format!("vacuum = {}", spec.label_name(v)),
            None => "no unique fusion identity".into(),
        },
    );

    let mut commutative = true;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if spec.rules.allowed(a, b, c) != spec.rules.allowed(b, a, c) {
                    commutative = false;
                }
            }
        }
    }
    report.push("fusion_commutative", commutative, "");

    let identity_ok = match spec.label_id("vac") {
        Ok(v) => (0..n).all(|a| spec.rules.outcomes(v, a) == vec![a]),
        Err(_) => false,
    };
    report.push("fusion_identity", identity_ok, "vac x a = a");

    let f_err = linalg::unitarity_error(&spec.f_matrix);
    report.push("f_unitary", f_err < MODEL_TOL, format!("|F^dag F - I|_max = {f_err:.3e}"));

    let r = &spec.r_matrix;
    let off_diag = (0..r.nrows())
        .flat_map(|i| (0..r.ncols()).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .fold(0.0f64, |acc, (i, j)| acc.max(r[(i, j)].norm()));
    let r_err = linalg::unitarity_error(r);
    report.push(
        "r_unitary_diagonal",
        r_err < MODEL_TOL && off_diag < MODEL_TOL,
        format!("|R^dag R - I|_max = {r_err:.3e}, off-diagonal {off_diag:.3e}"),
    );

    if let Ok(sigma) = spec.label_id("sigma") {
        for (n_anyons, charge) in [(3usize, sigma), (6usize, spec.label_id("vac").unwrap_or(0))] {
            match fusion_space::standard_basis(spec, n_anyons, charge) {
                Ok(basis) => report.extend(
                    &format!("braid_{n_anyons}_"),
                    braiding::verify_braid_relations(spec, &basis),
                ),
                Err(e) => report.push(format!("braid_{n_anyons}_basis"), false, e.to_string()),
            }
        }
    }

    report
}
