//! Chebyshev polynomials of the third kind (V_r) and fourth kind (W_r),
//! the discrete third-kind transform, local expansion evaluation, and the
//! exact power-basis expansion of W_r used by the closed-form oracle.
//!
//! Both families satisfy the same three-term recurrence
//! p_r(x) = 2x p_{r-1}(x) - p_{r-2}(x) and differ only in the degree-1
//! seed: V_1 = 2x - 1, W_1 = 2x + 1. They are related by
//! W_r(x) = (-1)^r V_r(-x).

use crate::error::{Error, Result};

/// V_r(x), third kind. Direct three-term recurrence; degrees stay small
/// (nu <= ~16) so no Clenshaw variant is needed.
pub fn eval_third_kind(degree: usize, x: f64) -> f64 {
    eval_recurrence(degree, x, 2.0 * x - 1.0)
}

/// W_r(x), fourth kind.
pub fn eval_fourth_kind(degree: usize, x: f64) -> f64 {
    eval_recurrence(degree, x, 2.0 * x + 1.0)
}

fn eval_recurrence(degree: usize, x: f64, p1: f64) -> f64 {
    if degree == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, p1);
    for _ in 2..=degree {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// Coefficients a_0..a_nu of the discrete third-kind transform applied to
/// nodal samples u_0..u_nu (sample k belongs to node beta_k):
///
///   a_r = (1/nu) * sum''_k (1 - cos(k pi/nu)) V_r[-cos(k pi/nu)] u_k,
///
/// where sum'' halves the first and last terms. The transform is linear in
/// the samples and reproduces coefficients a_0..a_{nu-1} of polynomials of
/// degree <= nu-1; it is a quasi-interpolant, not an interpolant (see the
/// `transform_is_not_interpolatory` test).
pub fn discrete_transform(samples: &[f64], nu: usize) -> Result<Vec<f64>> {
    if nu < 2 {
        return Err(Error::InvalidNu(nu));
    }
    if samples.len() != nu + 1 {
        return Err(Error::SampleCount {
            got: samples.len(),
            want: nu + 1,
        });
    }
    let nodes: Vec<f64> = (0..=nu)
        .map(|k| -(k as f64 * std::f64::consts::PI / nu as f64).cos())
        .collect();
    let mut coeffs = vec![0.0; nu + 1];
    for (r, a) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for k in 0..=nu {
            let halve = if k == 0 || k == nu { 0.5 } else { 1.0 };
            acc += halve * (1.0 + nodes[k]) * eval_third_kind(r, nodes[k]) * samples[k];
        }
        *a = acc / nu as f64;
    }
    Ok(coeffs)
}

/// A finite third-kind expansion sum_r a_r V_r[(2/h)(x - lo) - 1] attached
/// to a source interval [lo, hi].
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries3 {
    coeffs: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl ChebSeries3 {
    /// Wrap raw coefficients a_0..a_nu (nu >= 2) on [lo, hi].
    pub fn from_coefficients(coeffs: Vec<f64>, lo: f64, hi: f64) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidNu(coeffs.len().saturating_sub(1)));
        }
        if !(hi - lo > 0.0) {
            return Err(Error::InvalidMesh(format!(
                "series interval [{lo}, {hi}] must have positive length"
            )));
        }
        Ok(Self { coeffs, lo, hi })
    }

    /// Build the expansion from nodal samples via the discrete transform.
    pub fn from_samples(samples: &[f64], lo: f64, hi: f64) -> Result<Self> {
        let nu = samples.len().saturating_sub(1);
        Self::from_coefficients(discrete_transform(samples, nu)?, lo, hi)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Evaluate the expansion at x in [lo, hi].
    pub fn eval(&self, x: f64) -> Result<f64> {
        if x < self.lo || x > self.hi {
            return Err(Error::OutOfInterval {
                x,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let w = 2.0 / (self.hi - self.lo) * (x - self.lo) - 1.0;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(r, a)| a * eval_third_kind(r, w))
            .sum())
    }
}

/// Power-basis polynomial with exact integer coefficients, p_0 + p_1 x + ...
/// Holds the monomial expansion of W_r for the closed-form oracle; the
/// carrier is i128 so arithmetic stays exact well past degree 40.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialPoly {
    coeffs: Vec<i128>,
}

impl MonomialPoly {
    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }
}

/// Exact monomial coefficients of W_r, built by the recurrence
/// W_r = 2x W_{r-1} - W_{r-2} in checked integer arithmetic.
/// Leading coefficient is 2^r for r >= 1.
pub fn fourth_kind_monomials(degree: usize) -> Result<MonomialPoly> {
    let overflow = || Error::MonomialOverflow(degree);
    if degree == 0 {
        return Ok(MonomialPoly { coeffs: vec![1] });
    }
    let mut prev = vec![1i128];
    let mut cur = vec![1i128, 2];
    for _ in 2..=degree {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = c.checked_mul(2).ok_or_else(overflow)?;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = next[i].checked_sub(c).ok_or_else(overflow)?;
        }
        (prev, cur) = (cur, next);
    }
    Ok(MonomialPoly { coeffs: cur })
}
