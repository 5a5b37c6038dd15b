//! Spectral numerics for truncated Hankel and Toeplitz operators on the
//! Hardy space of the unit circle, and for the cubic Szegő equation
//! `i ∂t u = P(|u|² u)`.
//!
//! The library realizes symbols as truncated one-sided Fourier coefficient
//! vectors, builds the associated Hankel matrix `Γ_u` (entries `û_{j+k}`)
//! and Toeplitz matrix `T_φ` (entries `φ̂_{j−k}`), and evolves the Szegő
//! flow two independent ways:
//!
//! * [`flow::exact_flow`] — the Hankel-exponential representation: the
//!   evolved coefficients are `c_m = ⟨u, Σ^m q⟩` with
//!   `Σ = e^{itH²} S e^{−itH̃²}` and `q = e^{itH²} 𝟙`;
//! * [`flow::rk4_evolve`] — a pseudospectral Runge–Kutta integrator of the
//!   equation itself, used as an oracle for the formula.
//!
//! [`conserved`] audits the invariants of the flow (the `L²` norm, the
//! quartic energy, and the resolvent functional `J(x,u)`), and
//! [`experiments`] holds the two concrete constructions the rest of the
//! crate exists to reproduce: a Sobolev norm-inflation family and a
//! Toeplitz symbol whose truncated operator has an explicit kernel vector.
//!
//! ```
//! use szego_core::{flow, conserved, symbol};
//!
//! let u = symbol::plus_eps(0.5).unwrap();          // the symbol z + 0.5
//! let evolved = flow::exact_flow(&u, 1.0, 32, 32).unwrap();
//! let audit = conserved::audit(&evolved).unwrap();
//! assert!((audit.l2_norm - u.l2_norm()).abs() < 1e-10);
//! assert!((audit.dj0 + audit.l2_norm * audit.l2_norm).abs() < 1e-10);
//! ```

pub mod conserved;
pub mod error;
pub mod experiments;
mod fft;
pub mod flow;
pub mod hankel;
pub mod hardy;
pub mod linalg;
pub mod symbol;

pub use error::{Error, Result};
pub use hardy::{FourierVector, LaurentVector};
