//! Small dense complex linear algebra used throughout the crate.
//!
//! Every object here is tiny (at most 16×16), so matrices are plain dense
//! `nalgebra` matrices over `Complex<f64>`.

use nalgebra::{DMatrix, DVector};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Entries below this magnitude are treated as zero when choosing a phase
/// reference.
pub const PHASE_REFERENCE_EPS: f64 = 1e-6;

/// Grid used when hashing floating point entries.
pub const KEY_RESOLUTION: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub const I: C64 = Complex { re: 0.0, im: 1.0 };

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn from_rows(rows: &[&[C64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}

pub fn diag(entries: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

pub fn pauli_x() -> CMatrix {
    from_rows(&[&[cr(0.0), cr(1.0)], &[cr(1.0), cr(0.0)]])
}

pub fn pauli_y() -> CMatrix {
    from_rows(&[&[cr(0.0), c(0.0, -1.0)], &[c(0.0, 1.0), cr(0.0)]])
}

pub fn pauli_z() -> CMatrix {
    diag(&[cr(1.0), cr(-1.0)])
}

/// `exp(i φ Z / 2)`, the clock rotation convention used for ticks.
pub fn rot_z(phi: f64) -> CMatrix {
    diag(&[C64::from_polar(1.0, phi / 2.0), C64::from_polar(1.0, -phi / 2.0)])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `‖U†U − I‖_max`; also used for the row side when the matrix is square.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let left = max_abs_diff(&(u.adjoint() * u), &identity(n));
    let right = max_abs_diff(&(u * u.adjoint()), &identity(n));
    left.max(right)
}

pub fn hermiticity_error(h: &CMatrix) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

/// `|⟨a|b⟩|² / (‖a‖² ‖b‖²)`, i.e. overlap insensitive to global phase.
pub fn fidelity(a: &CVector, b: &CVector) -> f64 {
    let na = a.norm_squared();
    let nb = b.norm_squared();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.dotc(b).norm_sqr() / (na * nb)
}

/// Rotates `entries` by a global phase so that the first entry with
/// modulus above [`PHASE_REFERENCE_EPS`] is real and positive.
pub fn fix_global_phase(entries: &mut [C64]) {
    if let Some(reference) = entries.iter().find(|z| z.norm() > PHASE_REFERENCE_EPS) {
        let phase = reference.conj() / reference.norm();
        for z in entries.iter_mut() {
            *z *= phase;
        }
    }
}

/// Hash key of phase-fixed entries on the [`KEY_RESOLUTION`] grid. Signed
/// zeros are folded together.
pub fn rounded_key(entries: &[C64]) -> Vec<i64> {
    let scale = 1.0 / KEY_RESOLUTION;
    entries
        .iter()
        .flat_map(|z| [(z.re * scale).round() as i64, (z.im * scale).round() as i64])
        .collect()
}

/// Row-major entries of a matrix.
pub fn row_major(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Decomposes a 2×2 matrix as `h0 I + hx X + hy Y + hz Z`.
pub fn pauli_components(h: &CMatrix) -> [C64; 4] {
    assert_eq!(h.shape(), (2, 2));
    let half = cr(0.5);
    [
        (h[(0, 0)] + h[(1, 1)]) * half,
        (h[(0, 1)] + h[(1, 0)]) * half,
        (h[(1, 0)] - h[(0, 1)]) * half * c(0.0, -1.0),
        (h[(0, 0)] - h[(1, 1)]) * half,
    ]
}

/// `exp(−i H t)` for a 2×2 Hermitian `H`.
pub fn evolve_2x2(h: &CMatrix, t: f64) -> CMatrix {
    let [h0, hx, hy, hz] = pauli_components(h);
    let (h0, v) = (h0.re, [hx.re, hy.re, hz.re]);
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let global = C64::from_polar(1.0, -h0 * t);
    if len < 1e-300 {
        return identity(2) * global;
    }
    let axis = (pauli_x() * cr(v[0]) + pauli_y() * cr(v[1]) + pauli_z() * cr(v[2])) / cr(len);
    (identity(2) * cr((len * t).cos()) - axis * c(0.0, (len * t).sin())) * global
}

/// Bloch vector of a (not necessarily normalised) 2×2 density-like matrix,
/// after dividing by its trace.
pub fn bloch_vector(rho: &CMatrix) -> [f64; 3] {
    let tr = (rho[(0, 0)] + rho[(1, 1)]).re;
    let [_, x, y, z] = pauli_components(rho);
    [2.0 * x.re / tr, 2.0 * y.re / tr, 2.0 * z.re / tr]
}

/// Eigenvalues of a 2×2 Hermitian matrix, ascending.
pub fn eigenvalues_2x2(h: &CMatrix) -> [f64; 2] {
    let [h0, hx, hy, hz] = pauli_components(h);
    let r = (hx.re * hx.re + hy.re * hy.re + hz.re * hz.re).sqrt();
    [h0.re - r, h0.re + r]
}

/// Unit eigenvector for the largest eigenvalue of a 2×2 Hermitian matrix.
pub fn principal_eigenvector_2x2(h: &CMatrix) -> CVector {
    let [_, hx, hy, hz] = pauli_components(h);
    let (x, y, z) = (hx.re, hy.re, hz.re);
    let r = (x * x + y * y + z * z).sqrt();
    if r < 1e-300 {
        return CVector::from_column_slice(&[cr(1.0), cr(0.0)]);
    }
    let (x, y, z) = (x / r, y / r, z / r);
    // Bloch direction (x, y, z) → cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    let v = if z > -1.0 + 1e-15 {
        let a = ((1.0 + z) / 2.0).sqrt();
        let b = c(x, y) / cr(2.0 * a);
        [cr(a), b]
    } else {
        [cr(0.0), cr(1.0)]
    };
    CVector::from_column_slice(&v)
}

/// Orthonormal completion of the given orthonormal columns to a unitary,
/// by Gram–Schmidt over the standard basis. Columns are placed at the given
/// target positions.
pub fn complete_to_unitary(columns: &[(usize, CVector)], dim: usize) -> Option<CMatrix> {
    let mut basis: Vec<CVector> = columns.iter().map(|(_, v)| v.clone()).collect();
    let mut extra = Vec::new();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = CVector::zeros(dim);
        v[k] = cr(1.0);
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let n = v.norm();
        if n > 1e-8 {
            v /= cr(n);
            basis.push(v.clone());
            extra.push(v);
        }
    }
    if basis.len() != dim {
        return None;
    }
    let mut u = CMatrix::zeros(dim, dim);
    let mut filled = vec![false; dim];
    for (pos, v) in columns {
        if *pos >= dim || filled[*pos] {
            return None;
        }
        u.set_column(*pos, v);
        filled[*pos] = true;
    }
    let mut rest = extra.into_iter();
    for (pos, done) in filled.iter().enumerate() {
        if !done {
            u.set_column(pos, &rest.next()?);
        }
    }
    Some(u)
}
