//! The cubic Szegő flow `i ∂t u = P(|u|² u)`, evaluated two independent
//! ways: the exact Hankel-exponential representation, and a pseudospectral
//! Runge–Kutta integration of the equation itself. The two routes share no
//! machinery past the Hankel builders, so their agreement is a meaningful
//! check on both.
//!
//! The exact route rests on the auxiliary operator
//! `Σ = e^{itH²} S e^{−itH̃²}` and the unit vector `q = e^{itH²} 𝟙`: the
//! Taylor coefficients of the evolved symbol are `c_m = ⟨u, Σ^m q⟩`, and
//! `{Σ^m q}` is orthonormal, which is what makes the truncated sum a
//! norm-faithful representation.

use num_complex::Complex64;

use crate::conserved::{self, ConservedAudit};
use crate::error::{Error, Result};
use crate::hankel::{self, apply_antilinear, h_squared, h_squared_tilde};
use crate::hardy::{laurent_product, szego_project, FourierVector};
use crate::linalg::{eigh, propagator, CMatrix, CVector};

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Tail mass above which a symbol is considered too badly truncated for
/// the chosen matrix dimension.
pub const TAIL_MASS_LIMIT: f64 = 0.1;

/// The truncated auxiliary operator of the flow formula, together with
/// the cyclic vector `q` and the truncation-quality indicator of the
/// symbol it was built from.
#[derive(Debug, Clone)]
pub struct SigmaOperator {
    /// `e^{itH²} S_N e^{−itH̃²}` where `S_N` is the truncated forward
    /// shift (the top coefficient is dropped).
    pub matrix: CMatrix,
    /// `e^{itH²} e_0`; has unit norm.
    pub q: CVector,
    /// Flow time the propagators were built for.
    pub t: f64,
    /// `Σ_{k ≥ N/2} |û_k|²` of the input symbol.
    pub tail_mass: f64,
}

impl SigmaOperator {
    pub fn dim(&self) -> usize {
        self.q.len()
    }
}

/// How a [`FlowReport`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMethod {
    Exact,
    Rk4,
}

/// Time series of evolved states with their conserved-quantity audits.
#[derive(Debug, Clone)]
pub struct FlowReport {
    pub times: Vec<f64>,
    pub states: Vec<FourierVector>,
    pub audits: Vec<ConservedAudit>,
    pub method: FlowMethod,
}

/// Build `Σ` and `q` for the symbol `u` at time `t` and truncation `n`.
///
/// Requires `n ≥ dim(u)` (twice that is recommended) and rejects symbols
/// whose mass above `n/2` exceeds [`TAIL_MASS_LIMIT`].
pub fn build_sigma(u: &FourierVector, t: f64, n: usize) -> Result<SigmaOperator> {
    if u.dim() > n {
        return Err(Error::DimensionMismatch {
            what: "symbol dimension vs. truncation",
            limit: n,
            got: u.dim(),
        });
    }
    let tail_mass = u.tail_mass(n / 2);
    if tail_mass > TAIL_MASS_LIMIT {
        return Err(Error::ExcessiveTailMass {
            tail_mass,
            limit: TAIL_MASS_LIMIT,
        });
    }

    let fwd = eigh(&h_squared(u, n))?;
    let bwd = eigh(&h_squared_tilde(u, n))?;
    let p = propagator(&fwd, t);
    let q_prop = propagator(&bwd, -t);

    // S_N shifts every row of e^{-itH~^2} down by one; the top row of the
    // product is zero and the bottom row of q_prop is dropped.
    let mut shifted = CMatrix::zeros(n, n);
    if n > 1 {
        shifted
            .view_mut((1, 0), (n - 1, n))
            .copy_from(&q_prop.view((0, 0), (n - 1, n)));
    }
    let matrix = &p * shifted;
    let q = p.column(0).into_owned();

    Ok(SigmaOperator {
        matrix,
        q,
        t,
        tail_mass,
    })
}

/// Evolve `u` by the exact flow formula: returns the first `m` Taylor
/// coefficients `c_j = ⟨u, Σ^j q⟩` of the evolved symbol, with `m ≤ n`.
pub fn exact_flow(u: &FourierVector, t: f64, n: usize, m: usize) -> Result<FourierVector> {
    if m == 0 || m > n {
        return Err(Error::DimensionMismatch {
            what: "output coefficients vs. truncation",
            limit: n,
            got: m,
        });
    }
    let sigma = build_sigma(u, t, n)?;
    let u_n = CVector::from_fn(n, |j, _| u.coeff(j));
    let mut iterate = sigma.q.clone();
    let mut coeffs = Vec::with_capacity(m);
    for j in 0..m {
        coeffs.push(iterate.dotc(&u_n));
        if j + 1 < m {
            iterate = &sigma.matrix * iterate;
        }
    }
    FourierVector::new(coeffs)
}

/// Evaluate the exact flow at several times, auditing each state.
pub fn exact_flow_report(
    u: &FourierVector,
    times: &[f64],
    n: usize,
    m: usize,
) -> Result<FlowReport> {
    let mut report = FlowReport {
        times: Vec::with_capacity(times.len()),
        states: Vec::with_capacity(times.len()),
        audits: Vec::with_capacity(times.len()),
        method: FlowMethod::Exact,
    };
    for &t in times {
        let state = exact_flow(u, t, n, m)?;
        report.audits.push(conserved::audit(&state)?);
        report.states.push(state);
        report.times.push(t);
    }
    Ok(report)
}

/// Right-hand side of the evolution written as `∂t u = −i P(|u|² u)`,
/// at the working dimension of `u`: exact coefficient convolution, then
/// projection back to `dim(u)`.
pub fn szego_rhs(u: &FourierVector) -> FourierVector {
    let modulus_sq = laurent_product(&u.to_laurent(), &u.conj_reflect());
    let cubic = laurent_product(&modulus_sq, &u.to_laurent());
    szego_project(&cubic, u.dim()).scaled(MINUS_I)
}

/// Step-size heuristic: the nonlinearity is cubic, so the natural time
/// scale is `1/‖u‖²`.
pub fn default_dt(u0: &FourierVector) -> f64 {
    let n2 = u0.l2_norm().powi(2);
    1e-3 * (1.0f64).min(1.0 / n2.max(f64::MIN_POSITIVE))
}

fn rk4_step(state: &mut FourierVector, h: f64) {
    let one_half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let k1 = szego_rhs(state);
    let k2 = szego_rhs(&axpy(state, &k1, one_half));
    let k3 = szego_rhs(&axpy(state, &k2, one_half));
    let k4 = szego_rhs(&axpy(state, &k3, full));
    let w = h / 6.0;
    let coeffs: Vec<Complex64> = (0..state.dim())
        .map(|j| {
            state.coeff(j) + (k1.coeff(j) + (k2.coeff(j) + k3.coeff(j)) * 2.0 + k4.coeff(j)) * w
        })
        .collect();
    *state = FourierVector::raw(coeffs);
}

fn axpy(x: &FourierVector, y: &FourierVector, a: Complex64) -> FourierVector {
    let coeffs: Vec<Complex64> = (0..x.dim()).map(|j| x.coeff(j) + y.coeff(j) * a).collect();
    FourierVector::raw(coeffs)
}

/// Integrate a fixed-dimension state over a signed interval with uniform
/// RK4 steps of magnitude at most `dt`.
pub(crate) fn rk4_integrate(state: &mut FourierVector, span: f64, dt: f64) -> Result<()> {
    if span == 0.0 {
        return Ok(());
    }
    let steps = (span.abs() / dt).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    for s in 0..steps {
        rk4_step(state, h);
        if state
            .coeffs()
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::FlowDiverged {
                t: (s + 1) as f64 * h,
            });
        }
    }
    Ok(())
}

/// Galerkin-truncated RK4 integration of the Szegő equation.
///
/// The state is padded to `work_dim` and stepped with uniform steps of
/// size at most `dt`; states (with conserved-quantity audits) are
/// recorded every `⌈t/(100·dt)⌉`-th step and at the final time.
pub fn rk4_evolve(u0: &FourierVector, t: f64, dt: f64, work_dim: usize) -> Result<FlowReport> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::NegativeParameter {
            name: "dt",
            value: dt,
        });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeParameter {
            name: "t",
            value: t,
        });
    }
    if work_dim < u0.dim() {
        return Err(Error::DimensionMismatch {
            what: "working dimension vs. initial data",
            limit: work_dim,
            got: u0.dim(),
        });
    }

    let mut state = u0.padded(work_dim);
    let mut report = FlowReport {
        times: vec![0.0],
        states: vec![state.clone()],
        audits: vec![conserved::audit(&state)?],
        method: FlowMethod::Rk4,
    };
    if t == 0.0 {
        return Ok(report);
    }

    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let record_every = ((t / (100.0 * dt)).ceil() as usize).max(1);
    for s in 1..=steps {
        rk4_step(&mut state, h);
        if state
            .coeffs()
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::FlowDiverged { t: s as f64 * h });
        }
        if s.is_multiple_of(record_every) || s == steps {
            report.times.push(s as f64 * h);
            report.states.push(state.clone());
            report.audits.push(conserved::audit(&state)?);
        }
    }
    Ok(report)
}

/// Central-difference residual of the Lax identity
/// `dH_u/dt = [B_u, H_u]` with `B_u = (i/2) H_u² − i T_{|u|²}`.
///
/// The symbol is advanced to `±h` by RK4; the difference quotient of
/// `H_{u(±h)} f` is compared against the commutator applied to `f` at the
/// base state. The return value is the `l²` norm of the mismatch, which
/// for smooth truncation-clean symbols decays like `h²`.
pub fn lax_residual(u: &FourierVector, f: &FourierVector, h: f64, n: usize) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::NegativeParameter {
            name: "h",
            value: h,
        });
    }
    let mut u_plus = u.padded(n);
    let mut u_minus = u.padded(n);
    rk4_integrate(&mut u_plus, h, h / 4.0)?;
    rk4_integrate(&mut u_minus, -h, h / 4.0)?;

    let diff = {
        let hp = apply_antilinear(&u_plus, f, n);
        let hm = apply_antilinear(&u_minus, f, n);
        let scale = Complex64::new(1.0 / (2.0 * h), 0.0);
        CVector::from_fn(n, |j, _| (hp.coeff(j) - hm.coeff(j)) * scale)
    };

    let b_u = {
        let h2 = h_squared(u, n);
        let modulus_sq = laurent_product(&u.to_laurent(), &u.conj_reflect());
        let t_mod = hankel::toeplitz(&modulus_sq, n);
        h2 * Complex64::new(0.0, 0.5) - t_mod.entries * Complex64::new(0.0, 1.0)
    };

    let hf = apply_antilinear(u, f, n);
    let b_hf = &b_u * CVector::from_fn(n, |j, _| hf.coeff(j));
    let bf = &b_u * CVector::from_fn(n, |j, _| f.coeff(j));
    let bf_v = FourierVector::raw(bf.iter().copied().collect());
    let h_bf = apply_antilinear(u, &bf_v, n);
    let commutator = CVector::from_fn(n, |j, _| b_hf[j] - h_bf.coeff(j));

    Ok((diff - commutator).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::b_eps;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_plus(eps: f64) -> FourierVector {
        FourierVector::new(vec![c(eps, 0.0), c(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn sigma_at_time_zero() {
        let u = z_plus(0.5);
        let n = 16;
        let sigma = build_sigma(&u, 0.0, n).unwrap();
        // q = e_0 and Sigma = S_N
        assert!((sigma.q[0] - c(1.0, 0.0)).norm() < 1e-12);
        for j in 1..n {
            assert!(sigma.q[j].norm() < 1e-12);
        }
        for j in 0..n {
            for k in 0..n {
                let want = if j == k + 1 { 1.0 } else { 0.0 };
                assert!((sigma.matrix[(j, k)] - c(want, 0.0)).norm() < 1e-10);
            }
        }
        assert_eq!(sigma.tail_mass, 0.0);
    }

    #[test]
    fn sigma_annihilates_q_adjointly() {
        let sigma = build_sigma(&z_plus(0.5), 1.0, 64).unwrap();
        let sq = sigma.matrix.adjoint() * &sigma.q;
        assert!(sq.norm() < 1e-10, "Sigma* q should vanish");
        assert!((sigma.q.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parseval_sum_reaches_norm() {
        // partial sums of |c_m|^2 are monotone and land on ||u||^2 once
        // m runs out the full truncation, including at late times
        let u = z_plus(0.5);
        let norm_sq = u.l2_norm().powi(2);
        for &t in &[0.5, 1.0, 5.0] {
            let c = exact_flow(&u, t, 64, 64).unwrap();
            let mut partial = 0.0;
            for j in 0..64 {
                partial += c.coeff(j).norm_sqr();
                assert!(partial <= norm_sq + 1e-8);
            }
            assert!(
                (partial - norm_sq).abs() <= 1e-8,
                "Parseval defect {:.3e} at t={t}",
                (partial - norm_sq).abs()
            );
        }
    }

    #[test]
    fn sigma_iterates_orthonormal() {
        let sigma = build_sigma(&z_plus(0.5), 1.0, 128).unwrap();
        let mut iterates = vec![sigma.q.clone()];
        for _ in 1..21 {
            iterates.push(&sigma.matrix * iterates.last().unwrap());
        }
        for a in 0..21 {
            for b in 0..=a {
                let ip = iterates[a].dotc(&iterates[b]);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (ip - c(want, 0.0)).norm() < 1e-10,
                    "gram defect at ({a},{b})"
                );
            }
        }
    }

    #[test]
    fn sigma_rejects_bad_truncation() {
        let u = z_plus(0.5);
        assert!(matches!(
            build_sigma(&u, 1.0, 1),
            Err(Error::DimensionMismatch { .. })
        ));
        // all mass on the top half -> tail mass too big
        let spread =
            FourierVector::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            build_sigma(&spread, 1.0, 4),
            Err(Error::ExcessiveTailMass { .. })
        ));
    }

    #[test]
    fn flow_at_time_zero_is_identity() {
        let u = z_plus(0.5);
        let c0 = exact_flow(&u, 0.0, 32, 8).unwrap();
        for j in 0..8 {
            assert!((c0.coeff(j) - u.coeff(j)).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_data_rotates_in_phase() {
        // u(t) = c e^{-i|c|^2 t} solves the equation for constant data
        let amp = c(0.8, -0.3);
        let u = FourierVector::new(vec![amp]).unwrap();
        let t = 0.9;
        let flowed = exact_flow(&u, t, 16, 4).unwrap();
        let want = amp * Complex64::new(0.0, -t * amp.norm_sqr()).exp();
        assert!((flowed.coeff(0) - want).norm() < 1e-12);
        for j in 1..4 {
            assert!(flowed.coeff(j).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_zero_matches_closed_form() {
        for &eps in &[0.25, 0.5] {
            for &t in &[0.3, 1.0] {
                let got = exact_flow(&z_plus(eps), t, 64, 2).unwrap();
                let want = b_eps(eps, t);
                assert!(
                    (got.coeff(0) - want).norm() < 1e-10,
                    "b_eps mismatch at eps={eps}, t={t}"
                );
            }
        }
    }

    #[test]
    fn szego_rhs_examples() {
        // constant: -i |c|^2 c
        let amp = c(0.5, 0.25);
        let u = FourierVector::new(vec![amp]).unwrap();
        let r = szego_rhs(&u);
        assert!((r.coeff(0) - amp * c(0.0, -amp.norm_sqr())).norm() < 1e-15);

        // u = z: |z|^2 z = z on the circle
        let z = FourierVector::new(vec![ZERO, c(1.0, 0.0)]).unwrap();
        let r = szego_rhs(&z);
        assert!((r.coeff(1) - c(0.0, -1.0)).norm() < 1e-14);
        assert!(r.coeff(0).norm() < 1e-14);

        // Re<rhs, u> = 0: the L2 norm is conserved at the vector-field level
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..8 {
            let u = FourierVector::new(
                (0..12)
                    .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect(),
            )
            .unwrap();
            let r = szego_rhs(&u);
            assert!(r.inner(&u).re.abs() < 1e-12);
        }
    }

    #[test]
    fn rk4_basics() {
        let u = z_plus(0.5);
        let still = rk4_evolve(&u, 0.0, 1e-2, 8).unwrap();
        assert_eq!(still.states.len(), 1);
        assert_eq!(still.states[0], u.padded(8));
        assert_eq!(still.method, FlowMethod::Rk4);

        let report = rk4_evolve(&u, 1.0, 1e-3, 64).unwrap();
        let last = report.states.last().unwrap();
        assert!((last.l2_norm() - u.l2_norm()).abs() < 1e-8);
        assert_eq!(report.times.len(), report.states.len());
        assert_eq!(report.times.len(), report.audits.len());
        assert!((report.times.last().unwrap() - 1.0).abs() < 1e-12);

        assert!(rk4_evolve(&u, 1.0, 0.0, 64).is_err());
        assert!(rk4_evolve(&u, 1.0, 1e-3, 1).is_err());
    }

    #[test]
    fn rk4_matches_exact_flow() {
        let u = z_plus(0.5);
        let report = rk4_evolve(&u, 1.0, 1e-3, 48).unwrap();
        let exact = exact_flow(&u, 1.0, 64, 48).unwrap();
        let last = report.states.last().unwrap();
        let maxdiff = (0..48)
            .map(|j| (last.coeff(j) - exact.coeff(j)).norm())
            .fold(0.0f64, f64::max);
        assert!(maxdiff < 1e-6, "oracle disagreement {maxdiff:.3e}");

        // a second smooth symbol, geometric decay
        let g = crate::symbol::geometric(0.5, 8, 11).unwrap();
        let report = rk4_evolve(&g, 0.5, 1e-3, 48).unwrap();
        let exact = exact_flow(&g, 0.5, 96, 48).unwrap();
        let last = report.states.last().unwrap();
        let maxdiff = (0..48)
            .map(|j| (last.coeff(j) - exact.coeff(j)).norm())
            .fold(0.0f64, f64::max);
        assert!(
            maxdiff < 1e-6,
            "oracle disagreement on geometric data {maxdiff:.3e}"
        );
    }

    #[test]
    fn lax_residual_scales_quadratically() {
        let u = z_plus(0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut f: Vec<Complex64> = (0..64)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in f.iter_mut() {
            *z /= norm;
        }
        let f = FourierVector::new(f).unwrap();

        let r1 = lax_residual(&u, &f, 1e-4, 64).unwrap();
        let r2 = lax_residual(&u, &f, 5e-5, 64).unwrap();
        assert!(r1 <= 1e-6, "residual too large: {r1:.3e}");
        let ratio = r1 / r2;
        assert!(
            (3.5..=4.5).contains(&ratio),
            "central difference order wrong: ratio {ratio}"
        );

        // zero symbol: all operators vanish
        let zsym = FourierVector::zero(4);
        assert!(lax_residual(&zsym, &f, 1e-4, 16).unwrap() < 1e-14);
    }

    #[test]
    fn flow_continuity_in_symbol_and_time() {
        let u = z_plus(0.5);
        let n = 64;
        let m = 32;
        let base = exact_flow(&u, 1.0, n, m).unwrap();
        // continuity in the symbol: perturbation shrinks linearly
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let dir = FourierVector::new(
            (0..2)
                .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect(),
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for &delta in &[1e-2, 1e-3, 1e-4] {
            let pert =
                FourierVector::new((0..2).map(|j| u.coeff(j) + dir.coeff(j) * delta).collect())
                    .unwrap();
            let moved = exact_flow(&pert, 1.0, n, m).unwrap();
            let dist = (0..m)
                .map(|j| (moved.coeff(j) - base.coeff(j)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            // roughly linear: each factor-10 shrink of delta shrinks the
            // distance by at least a factor 5
            assert!(
                dist < prev / 5.0,
                "no linear decay: {dist:.3e} vs {prev:.3e}"
            );
            prev = dist;
        }
        // continuity in time
        let mut prev = f64::INFINITY;
        for &eta in &[1e-2, 1e-3] {
            let moved = exact_flow(&u, 1.0 + eta, n, m).unwrap();
            let dist = (0..m)
                .map(|j| (moved.coeff(j) - base.coeff(j)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(dist < prev / 5.0);
            prev = dist;
        }
    }
}
