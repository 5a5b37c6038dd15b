//! Truncated Hardy-space vectors and two-sided Fourier (Laurent) vectors,
//! with the elementary operations everything else is built from: inner
//! products, the `♯` involution, shifts, the Szegő projection, Sobolev
//! norms, boundary sampling and exact coefficient convolution.
//!
//! A [`FourierVector`] stores `û_0, …, û_{N−1}` for an element of `H²`;
//! coefficients past the stored range are zero by convention, so the
//! truncation dimension is an implementation artifact rather than part of
//! the mathematical object. A [`LaurentVector`] stores a symmetric range
//! `n = −K..K` of two-sided coefficients, as needed for products such as
//! `|u|²` before projection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finitely many one-sided Fourier coefficients of an `H²` element.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierVector {
    coeffs: Vec<Complex64>,
}

impl FourierVector {
    /// Wrap a coefficient vector, rejecting empty or non-finite input.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyVector);
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "Fourier coefficients",
            });
        }
        Ok(Self { coeffs })
    }

    /// Internal constructor for coefficients already known finite.
    pub(crate) fn raw(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    /// The constant function `𝟙`: coefficients `(1, 0, …, 0)`.
    pub fn one(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let mut coeffs = vec![ZERO; dim];
        coeffs[0] = ONE;
        Self { coeffs }
    }

    /// The zero vector of the given dimension.
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            coeffs: vec![ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `û_n`, zero past the stored range.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Copy resized to `dim` entries: zero-padded or truncated.
    pub fn padded(&self, dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim, ZERO);
        Self { coeffs }
    }

    /// `⟨f, g⟩ = Σ f_n conj(g_n)`, linear in `self`, anti-linear in `g`.
    /// Mixed dimensions zero-pad the shorter vector.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    /// The `H²` (= `l²`) norm of the stored coefficients.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The involution `f ↦ f♯`: conjugate every coefficient.
    pub fn sharp(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// The shift `S f = z f`: prepend a zero. The dimension grows by one
    /// so no coefficient is lost.
    pub fn shift_fwd(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.dim() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// The backward shift `S* f`: drop coefficient 0. A one-dimensional
    /// input maps to the zero vector of dimension one.
    pub fn shift_back(&self) -> Self {
        if self.dim() == 1 {
            Self::zero(1)
        } else {
            Self {
                coeffs: self.coeffs[1..].to_vec(),
            }
        }
    }

    /// Scale by a complex constant.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Sobolev `W^{s,2}` norm with weight `w(0) = 1`, `w(n) = n` for
    /// `n ≥ 1`: `sqrt(Σ w(n)^{2s} |f_n|²)`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                let w = if n == 0 {
                    1.0
                } else {
                    (n as f64).powf(2.0 * s)
                };
                w * c.norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Mass of coefficients at indices `from` and above; the truncation
    /// quality indicator used by the flow.
    pub fn tail_mass(&self, from: usize) -> f64 {
        self.coeffs
            .iter()
            .skip(from)
            .map(|c| c.norm_sqr())
            .sum::<f64>()
    }

    /// Values `f(e^{2πik/m})` for `k = 0..m` by discrete Fourier
    /// synthesis; `m` must be a power of two with `m ≥ dim`.
    pub fn boundary_samples(&self, m: usize) -> Result<Vec<Complex64>> {
        if m < self.dim() {
            return Err(Error::GridTooSmall {
                grid: m,
                needed: self.dim(),
            });
        }
        if !m.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { value: m });
        }
        let mut buf = self.coeffs.clone();
        buf.resize(m, ZERO);
        fft::inverse(&mut buf);
        Ok(buf)
    }

    /// `(mean_k |f(e^{2πik/m})|^p)^{1/p}`.
    pub fn lp_boundary_norm(&self, p: f64, m: usize) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: format!("exponent must be positive, got {p}"),
            });
        }
        let samples = self.boundary_samples(m)?;
        let mean = samples.iter().map(|z| z.norm().powf(p)).sum::<f64>() / m as f64;
        Ok(mean.powf(1.0 / p))
    }

    /// The boundary conjugate `conj(f)` as a two-sided vector: coefficient
    /// `−n` is `conj(û_n)`.
    pub fn conj_reflect(&self) -> LaurentVector {
        let k = self.dim() - 1;
        let mut lv = LaurentVector::zero(k);
        for (n, c) in self.coeffs.iter().enumerate() {
            *lv.coeff_mut(-(n as i64)) = c.conj();
        }
        lv
    }

    /// View as a two-sided vector supported on `0..dim`.
    pub fn to_laurent(&self) -> LaurentVector {
        let k = self.dim() - 1;
        let mut lv = LaurentVector::zero(k);
        for (n, c) in self.coeffs.iter().enumerate() {
            *lv.coeff_mut(n as i64) = *c;
        }
        lv
    }
}

/// Two-sided truncated Fourier coefficients, indices `−K..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentVector {
    coeffs: Vec<Complex64>, // index n stored at n + halfwidth
    halfwidth: usize,
}

impl LaurentVector {
    pub fn zero(halfwidth: usize) -> Self {
        Self {
            coeffs: vec![ZERO; 2 * halfwidth + 1],
            halfwidth,
        }
    }

    /// Wrap an odd-length coefficient vector centered at index zero.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "laurent coefficients",
                reason: format!("length must be odd and positive, got {}", coeffs.len()),
            });
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "Laurent coefficients",
            });
        }
        let halfwidth = (coeffs.len() - 1) / 2;
        Ok(Self { coeffs, halfwidth })
    }

    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    /// Coefficient at signed index `n`, zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.halfwidth as i64;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub(crate) fn coeff_mut(&mut self, n: i64) -> &mut Complex64 {
        let idx = (n + self.halfwidth as i64) as usize;
        &mut self.coeffs[idx]
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl From<&FourierVector> for LaurentVector {
    fn from(f: &FourierVector) -> Self {
        f.to_laurent()
    }
}

/// Exact coefficient convolution of two two-sided vectors: the result
/// index range is the sum of the input ranges, so nothing aliases. The
/// convolution runs through zero-padded FFTs of length the next power of
/// two at or above the sum of the input lengths; exact up to rounding.
pub fn laurent_product(a: &LaurentVector, b: &LaurentVector) -> LaurentVector {
    let la = 2 * a.halfwidth + 1;
    let lb = 2 * b.halfwidth + 1;
    let out_half = a.halfwidth + b.halfwidth;
    let p = fft::next_pow2(la + lb);
    let mut fa = a.coeffs.clone();
    fa.resize(p, ZERO);
    let mut fb = b.coeffs.clone();
    fb.resize(p, ZERO);
    fft::forward(&mut fa);
    fft::forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= y;
    }
    fft::inverse(&mut fa);
    let scale = 1.0 / p as f64;
    let mut out = LaurentVector::zero(out_half);
    for (o, &x) in out.coeffs.iter_mut().zip(fa.iter()) {
        *o = x * scale;
    }
    out
}

/// The Szegő projection at truncation: keep coefficients `0..dim`,
/// discarding negative frequencies and anything past `dim`.
pub fn szego_project(w: &LaurentVector, dim: usize) -> FourierVector {
    assert!(dim >= 1, "dimension must be positive");
    let coeffs = (0..dim).map(|n| w.coeff(n as i64)).collect();
    FourierVector { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn one_and_inner() {
        let e = FourierVector::one(3);
        assert_eq!(e.coeffs(), &[ONE, ZERO, ZERO]);
        assert_eq!(FourierVector::one(1).coeffs(), &[ONE]);
        let e4 = FourierVector::one(4);
        assert_eq!(e4.inner(&e4), ONE);

        let f = FourierVector::new(vec![c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        assert_eq!(f.inner(&f), c(5.0, 0.0));
        let a = FourierVector::new(vec![ZERO, ONE]).unwrap();
        let b = FourierVector::new(vec![ONE, ZERO]).unwrap();
        assert_eq!(a.inner(&b), ZERO);
        // mixed dimension: shorter is zero-padded
        let short = FourierVector::new(vec![ONE]).unwrap();
        let long = FourierVector::new(vec![ONE, c(0.25, 0.0)]).unwrap();
        assert_eq!(long.inner(&short), ONE);
    }

    #[test]
    fn sharp_is_involution() {
        let f = FourierVector::new(vec![ONE, c(0.0, 1.0)]).unwrap();
        assert_eq!(f.sharp().coeffs(), &[ONE, c(0.0, -1.0)]);
        assert_eq!(f.sharp().sharp(), f);
        assert_eq!(FourierVector::one(2).sharp().coeffs(), &[ONE, ZERO]);
    }

    #[test]
    fn shifts() {
        let f = FourierVector::new(vec![c(1.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert_eq!(f.shift_fwd().coeffs(), &[ZERO, c(1.0, 1.0), c(2.0, 0.0)]);
        let g = FourierVector::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_eq!(g.shift_back().coeffs(), &[c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(f.shift_fwd().shift_back(), f);
        assert_eq!(FourierVector::one(1).shift_back(), FourierVector::zero(1));
    }

    #[test]
    fn projection() {
        let mut w = LaurentVector::zero(2);
        *w.coeff_mut(-1) = c(5.0, 0.0);
        *w.coeff_mut(0) = ONE;
        *w.coeff_mut(2) = c(3.0, 0.0);
        let p = szego_project(&w, 3);
        assert_eq!(p.coeffs(), &[ONE, ZERO, c(3.0, 0.0)]);

        let mut neg = LaurentVector::zero(3);
        *neg.coeff_mut(-2) = ONE;
        assert_eq!(szego_project(&neg, 2), FourierVector::zero(2));

        let mut d = LaurentVector::zero(0);
        *d.coeff_mut(0) = c(0.0, 7.0);
        assert_eq!(szego_project(&d, 1).coeffs(), &[c(0.0, 7.0)]);
    }

    #[test]
    fn sobolev_norm_matches_closed_form() {
        // R (z^N + eps) at negative index -delta
        let (nn, eps, r, delta) = (16usize, 0.3f64, 2.0f64, 0.25f64);
        let mut coeffs = vec![ZERO; nn + 1];
        coeffs[0] = c(r * eps, 0.0);
        coeffs[nn] = c(r, 0.0);
        let f = FourierVector::new(coeffs).unwrap();
        let want = ((nn as f64).powf(-2.0 * delta) * r * r + (r * eps) * (r * eps)).sqrt();
        assert!((f.sobolev_norm(-delta) - want).abs() < 1e-14);

        // s = 0 is the plain l2 norm
        let g = FourierVector::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        assert!((g.sobolev_norm(0.0) - g.l2_norm()).abs() < 1e-15);

        // single mode N
        let mut h = vec![ZERO; 9];
        h[8] = ONE;
        let h = FourierVector::new(h).unwrap();
        assert!((h.sobolev_norm(-delta) - 8f64.powf(-delta)).abs() < 1e-15);
    }

    #[test]
    fn boundary_sampling() {
        // z at the 4th roots of unity
        let z = FourierVector::new(vec![ZERO, ONE]).unwrap();
        let s = z.boundary_samples(4).unwrap();
        assert!((s[0] - ONE).norm() < 1e-15);
        assert!((s[1] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((s[2] + ONE).norm() < 1e-15);
        assert!((s[3] + c(0.0, 1.0)).norm() < 1e-15);

        assert!((FourierVector::one(1).lp_boundary_norm(4.0, 64).unwrap() - 1.0).abs() < 1e-14);

        // |e^{iθ} + eps|^4 integrates to 1 + 4 eps^2 + eps^4
        let eps = 0.3;
        let f = FourierVector::new(vec![c(eps, 0.0), ONE]).unwrap();
        let l4 = f.lp_boundary_norm(4.0, 256).unwrap();
        let want = 1.0 + 4.0 * eps * eps + eps.powi(4);
        assert!((l4.powi(4) - want).abs() < 1e-12);

        assert!(z.boundary_samples(1).is_err());
        assert!(z.boundary_samples(6).is_err());
    }

    #[test]
    fn convolution_examples() {
        // (1+z)^2 = 1 + 2z + z^2
        let u = FourierVector::new(vec![ONE, ONE]).unwrap();
        let sq = laurent_product(&u.to_laurent(), &u.to_laurent());
        assert!((sq.coeff(0) - ONE).norm() < 1e-14);
        assert!((sq.coeff(1) - c(2.0, 0.0)).norm() < 1e-14);
        assert!((sq.coeff(2) - ONE).norm() < 1e-14);
        assert!(sq.coeff(-1).norm() < 1e-14);

        // |1+z|^2 = z^{-1} + 2 + z
        let absq = laurent_product(&u.to_laurent(), &u.conj_reflect());
        assert!((absq.coeff(-1) - ONE).norm() < 1e-14);
        assert!((absq.coeff(0) - c(2.0, 0.0)).norm() < 1e-14);
        assert!((absq.coeff(1) - ONE).norm() < 1e-14);

        let zv = FourierVector::zero(3);
        let prod = laurent_product(&u.to_laurent(), &zv.to_laurent());
        assert!(prod.l2_norm() == 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FourierVector::new(vec![]).is_err());
        assert!(FourierVector::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(LaurentVector::new(vec![ONE, ZERO]).is_err());
    }

    fn arb_coeffs(max_dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_dim)
            .prop_map(|v| v.into_iter().map(|(re, im)| c(re, im)).collect())
    }

    proptest! {
        #[test]
        fn sharp_isometric_involution(coeffs in arb_coeffs(32)) {
            let f = FourierVector::new(coeffs).unwrap();
            prop_assert_eq!(f.sharp().sharp(), f.clone());
            prop_assert_eq!(f.sharp().l2_norm(), f.l2_norm());
        }

        #[test]
        fn shift_identities(coeffs in arb_coeffs(32)) {
            let f = FourierVector::new(coeffs).unwrap();
            prop_assert_eq!(f.shift_fwd().shift_back(), f.clone());
            // S S* kills exactly coefficient 0
            let back_fwd = f.shift_back().shift_fwd().padded(f.dim());
            for n in 1..f.dim() {
                prop_assert_eq!(back_fwd.coeff(n), f.coeff(n));
            }
            prop_assert_eq!(back_fwd.coeff(0), ZERO);
        }

        #[test]
        fn parseval_at_truncation(coeffs in arb_coeffs(32)) {
            let f = FourierVector::new(coeffs).unwrap();
            let m = fft::next_pow2(2 * f.dim());
            let l2 = f.lp_boundary_norm(2.0, m).unwrap();
            prop_assert!((l2 * l2 - f.l2_norm().powi(2)).abs() < 1e-12);
        }

        #[test]
        fn convolution_matches_pointwise_product(
            a in arb_coeffs(48),
            b in arb_coeffs(48),
        ) {
            let fa = FourierVector::new(a).unwrap();
            let fb = FourierVector::new(b).unwrap();
            let conv = laurent_product(&fa.to_laurent(), &fb.to_laurent());
            let m = fft::next_pow2(4 * fa.dim().max(fb.dim()));
            let sa = fa.boundary_samples(m).unwrap();
            let sb = fb.boundary_samples(m).unwrap();
            // analyze the pointwise product back to coefficients
            let mut prod: Vec<Complex64> = sa.iter().zip(&sb).map(|(x, y)| x * y).collect();
            fft::forward(&mut prod);
            for (n, p) in prod.iter().enumerate().take((fa.dim() + fb.dim() - 1).min(m)) {
                let direct = p / m as f64;
                prop_assert!((conv.coeff(n as i64) - direct).norm() < 1e-10);
            }
        }
    }
}
