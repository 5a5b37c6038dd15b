//! Truncated Hankel and Toeplitz matrices built from symbols.
//!
//! `Γ_u` has matrix `û_{j+k}` in the monomial basis; truncation to `N×N`
//! is the compression of the infinite matrix, with missing coefficients
//! read as zero (exact for polynomial symbols). The anti-linear operator
//! `H_u f = Γ_u f♯ = P(u conj(f))` is never realified into a matrix:
//! applying it is always "conjugate the coefficients, then multiply by
//! the Hankel matrix", which keeps the anti-linearity explicit.

use num_complex::Complex64;

use crate::hardy::{FourierVector, LaurentVector};
use crate::linalg::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense truncation of a Hankel operator: entries `û_{j+k}`, constant
/// along anti-diagonals.
#[derive(Debug, Clone)]
pub struct HankelMatrix {
    pub entries: CMatrix,
    /// Length of the symbol the matrix was built from.
    pub source_dim: usize,
}

/// Dense truncation of a Toeplitz operator: entries `φ̂_{j−k}`, constant
/// along diagonals.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    pub entries: CMatrix,
}

/// The `N×N` Hankel matrix of the symbol `u`: `entries[j][k] = û_{j+k}`.
pub fn gamma(u: &FourierVector, n: usize) -> HankelMatrix {
    assert!(n >= 1, "dimension must be positive");
    let entries = CMatrix::from_fn(n, n, |j, k| u.coeff(j + k));
    HankelMatrix {
        entries,
        source_dim: u.dim(),
    }
}

impl HankelMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Matrix of the adjoint `Γ_u* = Γ_{u♯}`: the conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        self.entries.adjoint()
    }
}

/// The Hermitian matrix `H_u² = Γ_u Γ_u*` at truncation `N`.
pub fn h_squared(u: &FourierVector, n: usize) -> CMatrix {
    let g = gamma(u, n);
    &g.entries * g.entries.adjoint()
}

/// `H̃_u² = H_{S*u}²`: the same Gram construction on the back-shifted
/// symbol.
pub fn h_squared_tilde(u: &FourierVector, n: usize) -> CMatrix {
    h_squared(&u.shift_back(), n)
}

/// Apply the anti-linear Hankel operator: `H_u f = Γ_u f♯ = P(u conj(f))`,
/// truncated to the first `n` coefficients. `f` is zero-padded (or cut)
/// to length `n` first.
pub fn apply_antilinear(u: &FourierVector, f: &FourierVector, n: usize) -> FourierVector {
    let g = gamma(u, n);
    let mut out = vec![ZERO; n];
    for k in 0..n {
        let fk = f.coeff(k).conj();
        if fk == ZERO {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            *o += g.entries[(j, k)] * fk;
        }
    }
    FourierVector::new(out).expect("finite by construction")
}

/// The `N×N` Toeplitz matrix of a two-sided symbol: `entries[j][k] = φ̂_{j−k}`.
pub fn toeplitz(phi: &LaurentVector, n: usize) -> ToeplitzMatrix {
    assert!(n >= 1, "dimension must be positive");
    let entries = CMatrix::from_fn(n, n, |j, k| phi.coeff(j as i64 - k as i64));
    ToeplitzMatrix { entries }
}
