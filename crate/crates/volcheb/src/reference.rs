//! Independent closed-form oracles: log moments, exact I values via the
//! monomial expansion of W_r, the Omega(n) moments of the error analysis,
//! and a defect checker for computed solutions.
//!
//! Nothing in this module shares code with the recurrence path in
//! `quadweights`; the whole point is that the two routes disagree only at
//! rounding level. No numerical quadrature is used anywhere here.

use crate::chebpoly::fourth_kind_monomials;
use crate::error::{Error, Result};
use crate::problems::ProblemSpec;
use crate::solver::Solution;

// ---------------------------------------------------------------------------
// Two-float (double-double) arithmetic.
//
// The monomial expansion of W_r(t + eta) has alternating coefficients up to
// ~1e5 while the integrals are O(10); a plain f64 sum loses ~1e-10 near
// eta = -1, drowning the ~1e-13 agreement the weight validation asserts.
// Inputs (integer coefficients, eta, 1 - eta) are exact, so widening the
// accumulator restores the full f64 answer.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct TwoFloat {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl TwoFloat {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn from_f64(a: f64) -> Self {
        Self { hi: a, lo: 0.0 }
    }

    /// Exact conversion; i128 values in this crate stay far below 2^106.
    fn from_i128(v: i128) -> Self {
        let hi = v as f64;
        let lo = (v - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Self { hi, lo }
    }

    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let (r_hi, r_lo) = two_sum(self.hi, -p);
        let r = r_hi + (r_lo + self.lo - e);
        let q2 = r / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Exact binomial coefficient.
fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0).
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Closed form of the weighted moment
///   integral_0^a t^m ln(c t) dt = a^(m+1) (ln(c a) - 1/(m+1)) / (m+1).
pub fn log_moment(m: usize, a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "log_moment needs a > 0 and c > 0, got a = {a}, c = {c}"
        )));
    }
    let mp1 = (m + 1) as f64;
    Ok(a.powi(m as i32 + 1) * ((c * a).ln() - 1.0 / mp1) / mp1)
}

/// Exact value of I_r(eta, h) = integral_0^(1-eta) ln((h/2) t) W_r[t + eta] dt,
/// by shifting the monomial expansion of W_r and summing log moments.
///
/// Regrouped as S1 * ln((h/2)(1-eta)) - S2 with S1, S2 pure polynomial sums
/// accumulated in two-float arithmetic, so the single log evaluation carries
/// no amplified cancellation error.
pub fn exact_i_value(r: usize, eta: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step h = {h} must be positive")));
    }
    if !(-1.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!("eta = {eta} outside [-1, 1]")));
    }
    if eta == 1.0 {
        return Ok(0.0); // empty integration range
    }
    let w = fourth_kind_monomials(r)?;
    let coeffs = w.coefficients();
    let eta_dd = TwoFloat::from_f64(eta);
    let a = TwoFloat::from_f64(1.0).add(eta_dd.neg()); // exact: 1 - eta

    // eta^t and a^(p+1) powers.
    let mut eta_pow = vec![TwoFloat::from_f64(1.0); r + 1];
    for t in 1..=r {
        eta_pow[t] = eta_pow[t - 1].mul(eta_dd);
    }

    // g_p = sum_{m >= p} w_m C(m, p) eta^(m-p): coefficient of t^p in W_r(t+eta).
    let overflow = || Error::MonomialOverflow(r);
    let mut s1 = TwoFloat::ZERO; // sum_p g_p a^(p+1) / (p+1)      = Q_r(eta)
    let mut s2 = TwoFloat::ZERO; // sum_p g_p a^(p+1) / (p+1)^2
    let mut a_pow = a; // a^(p+1)
    for p in 0..=r {
        let mut g = TwoFloat::ZERO;
        for (m, &wm) in coeffs.iter().enumerate().skip(p) {
            let int_part = wm.checked_mul(binomial(m, p)).ok_or_else(overflow)?;
            g = g.add(TwoFloat::from_i128(int_part).mul(eta_pow[m - p]));
        }
        let term = g.mul(a_pow).div_f64((p + 1) as f64);
        s1 = s1.add(term);
        s2 = s2.add(term.div_f64((p + 1) as f64));
        a_pow = a_pow.mul(a);
    }
    let log_ca = (0.5 * h * a.to_f64()).ln();
    Ok(s1.mul(TwoFloat::from_f64(log_ca)).add(s2.neg()).to_f64())
}

/// Omega(n) = integral_0^beta ln(h psi) (beta - psi)^n d psi, via the
/// harmonic-number closed form beta^(n+1) (ln(h beta) - H_(n+1)) / (n+1).
pub fn omega_value(n: usize, beta: f64, h: f64) -> Result<f64> {
    check_omega_args(beta, h)?;
    let np1 = (n + 1) as f64;
    Ok(beta.powi(n as i32 + 1) * ((h * beta).ln() - harmonic(n + 1)) / np1)
}

/// The same quantity as the binomial alternating sum
///   beta^(n+1) sum_l (-1)^l C(n,l) [(l+1) ln(h beta) - 1] / (l+1)^2.
/// Kept as a second algebraic route; the two must agree.
pub fn omega_value_alternating(n: usize, beta: f64, h: f64) -> Result<f64> {
    check_omega_args(beta, h)?;
    let log_hb = (h * beta).ln();
    let sum: f64 = (0..=n)
        .map(|l| {
            let lp1 = (l + 1) as f64;
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, l) as f64 * (lp1 * log_hb - 1.0) / (lp1 * lp1)
        })
        .sum();
    Ok(beta.powi(n as i32 + 1) * sum)
}

fn check_omega_args(beta: f64, h: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "beta = {beta} outside (0, 1]"
        )));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step h = {h} must be positive")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Defect of a computed solution against the original equation.
// ---------------------------------------------------------------------------

/// Max over sampled x of |u(x) - f(x) - integral_0^x ln(x-s) k(x,s,u(s)) ds|,
/// with u the nodal-interpolation evaluation and each subinterval integral
/// computed by exact log moments against the local interpolating polynomial
/// of the kernel composition (power basis).
///
/// Samples are the midpoints x_i + 0.37 h_i plus the x_{i1} and x_{i,nu}
/// nodes of every subinterval. `max_samples` = 0 keeps all of them;
/// otherwise an evenly strided subset of that size is used.
pub fn residual_norm(sol: &Solution, problem: &ProblemSpec, max_samples: usize) -> Result<f64> {
    let partition = sol.partition();
    let grid = sol.grid();
    let nu = grid.nu();
    let mut samples = Vec::new();
    for i in 0..partition.intervals() {
        let x_i = partition.point(i);
        let h_i = partition.step(i);
        samples.push(x_i + 0.37 * h_i);
        samples.push(x_i + grid.fraction(1) * h_i);
        samples.push(partition.point(i + 1));
    }
    if max_samples > 0 && samples.len() > max_samples {
        let stride = samples.len().div_ceil(max_samples);
        samples = samples.into_iter().step_by(stride).collect();
    }

    let mut worst: f64 = 0.0;
    for &x in &samples {
        let m = partition.covering_interval(x)?;
        let mut integral = 0.0;
        for l in 0..=m {
            let upper = if l == m { x } else { partition.point(l + 1) };
            if upper <= partition.point(l) {
                continue;
            }
            let x_l = partition.point(l);
            let h_l = partition.step(l);
            // Kernel composition at the interval's collocation nodes.
            let values: Result<Vec<f64>> = (0..=nu)
                .map(|k| {
                    let s = x_l + grid.fraction(k) * h_l;
                    problem.kernel(x, s, sol.node_value(l, k))
                })
                .collect();
            let poly = interpolate_power_basis(grid.fractions(), &values?);
            integral += log_weighted_integral(&poly, x, x_l, h_l, upper);
        }
        let f_x = problem.forcing(x)?;
        let u_x = sol.eval_nodal(x)?;
        let defect = (u_x - f_x - integral).abs();
        if !defect.is_finite() {
            return Err(Error::NonFinite {
                what: "residual".into(),
                where_: format!("x = {x}"),
            });
        }
        worst = worst.max(defect);
    }
    Ok(worst)
}

/// Newton-form interpolation through (tau_k, values_k), expanded to power
/// basis coefficients in tau.
fn interpolate_power_basis(taus: &[f64], values: &[f64]) -> Vec<f64> {
    let n = taus.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            dd[k] = (dd[k] - dd[k - 1]) / (taus[k] - taus[k - level]);
        }
    }
    // Expand prod_(j < level) (tau - tau_j) incrementally.
    let mut coeffs = vec![0.0; n];
    let mut basis = vec![0.0; n + 1];
    basis[0] = 1.0;
    let mut blen = 1usize;
    for (level, &c) in dd.iter().enumerate() {
        for p in 0..blen {
            coeffs[p] += c * basis[p];
        }
        if level + 1 < n {
            let t = taus[level];
            let mut next = vec![0.0; blen + 1];
            for p in 0..blen {
                next[p + 1] += basis[p];
                next[p] -= t * basis[p];
            }
            basis[..=blen].copy_from_slice(&next);
            blen += 1;
        }
    }
    coeffs
}

/// integral_(x_l)^(upper) ln(x - s) P((s - x_l)/h_l) ds by exact log moments,
/// where P has power-basis coefficients `poly` in tau = (s - x_l)/h_l.
fn log_weighted_integral(poly: &[f64], x: f64, x_l: f64, h_l: f64, upper: f64) -> f64 {
    // Substitute w = x - s: tau = (w0 - w)/h_l with w0 = x - x_l, and the
    // range becomes [w1, w0] with w1 = x - upper >= 0.
    let w0 = x - x_l;
    let w1 = x - upper;
    // antiderivative of w^t ln w
    let lam = |t: usize, w: f64| -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let tp1 = (t + 1) as f64;
        w.powi(t as i32 + 1) * (w.ln() - 1.0 / tp1) / tp1
    };
    let mut total = 0.0;
    for (p, &c) in poly.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        // ((w0 - w)/h)^p expanded binomially.
        for t in 0..=p {
            let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
            let coef = sign * binomial(p, t) as f64 * w0.powi((p - t) as i32) / h_l.powi(p as i32);
            total += c * coef * (lam(t, w0) - lam(t, w1));
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn log_moment_values() {
        assert!((log_moment(0, 1.0, 1.0).unwrap() - (-1.0)).abs() < 1e-15);
        assert!((log_moment(1, 1.0, 1.0).unwrap() - (-0.25)).abs() < 1e-15);
        assert!((log_moment(0, 2.0, 0.5).unwrap() - (-2.0)).abs() < 1e-15);
        assert!(log_moment(0, 0.0, 1.0).is_err());
        assert!(log_moment(0, 1.0, -1.0).is_err());
    }

    #[test]
    fn exact_i_spot_values() {
        // beta = 1/4 <=> eta = 1/2, h = 0.1: 2 beta (ln(h beta) - 1)
        let want = 2.0 * 0.25 * ((0.1f64 * 0.25).ln() - 1.0);
        assert!((exact_i_value(0, 0.5, 0.1).unwrap() - want).abs() < 1e-14);
        assert!((want - (-2.344439727056968)).abs() < 1e-12);
        // empty range at eta = 1
        for r in 0..=8 {
            assert_eq!(exact_i_value(r, 1.0, 0.7).unwrap(), 0.0);
        }
        // r = 1, eta = -1, h = 2: integral_0^2 ln t (2t - 1) dt = 2 ln 2
        let want = 2.0 * std::f64::consts::LN_2;
        assert!((exact_i_value(1, -1.0, 2.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn exact_i_matches_printed_initial_value_forms() {
        // The r <= 3 closed forms, restated independently of quadweights.
        let printed = |r: usize, eta: f64, h: f64| -> f64 {
            let beta = 0.5 * (1.0 - eta);
            let log_hb = (h * beta).ln();
            match r {
                0 => 2.0 * beta * (log_hb - 1.0),
                1 => beta * (2.0 * (2.0 + eta) * log_hb - 3.0 * (1.0 + eta)),
                2 => {
                    beta / 9.0
                        * (6.0 * (4.0 * eta * eta + 7.0 * eta + 4.0) * log_hb
                            - (44.0 * eta * eta + 47.0 * eta - 1.0))
                }
                3 => {
                    beta / 9.0
                        * (6.0 * (6.0 * eta.powi(3) + 10.0 * eta * eta + 4.0 * eta + 1.0) * log_hb
                            - (75.0 * eta.powi(3) + 83.0 * eta * eta - 13.0 * eta - 19.0))
                }
                _ => unreachable!(),
            }
        };
        let mut rng = StdRng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let eta: f64 = rng.gen_range(-1.0..1.0);
            let h: f64 = rng.gen_range(0.001..2.0);
            for r in 0..=3 {
                let oracle = exact_i_value(r, eta, h).unwrap();
                let form = printed(r, eta, h);
                let scale = form.abs().max(1.0);
                worst = worst.max((oracle - form).abs() / scale);
            }
        }
        assert!(worst <= 1e-12, "worst relative deviation {worst:e}");
    }

    #[test]
    fn omega_routes_agree() {
        let mut rng = StdRng::seed_from_u64(5);
        for n in 0..=8 {
            for _ in 0..100 {
                let beta: f64 = rng.gen_range(0.01..=1.0);
                let h: f64 = rng.gen_range(0.01..2.0);
                let a = omega_value(n, beta, h).unwrap();
                let b = omega_value_alternating(n, beta, h).unwrap();
                assert!(
                    (a - b).abs() <= 1e-13 * a.abs().max(1.0),
                    "n={n} beta={beta} h={h}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn omega_spot_values() {
        assert!((omega_value(0, 1.0, 1.0).unwrap() - (-1.0)).abs() < 1e-15);
        assert!((omega_value(1, 1.0, std::f64::consts::E).unwrap() - (-0.25)).abs() < 1e-15);
        // n = 0 coincides with the plain log moment
        for (beta, h) in [(0.3, 0.7), (0.9, 1.3), (1.0, 0.01)] {
            let om = omega_value(0, beta, h).unwrap();
            let lm = log_moment(0, beta, h).unwrap();
            assert!((om - lm).abs() < 1e-14 * om.abs().max(1.0));
        }
        assert!(omega_value(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(40, 20), 137846528820);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // P(tau) = 2 - tau + 3 tau^2 at 4 nodes
        let taus = [0.0, 0.25, 0.75, 1.0];
        let values: Vec<f64> = taus.iter().map(|&t| 2.0 - t + 3.0 * t * t).collect();
        let coeffs = interpolate_power_basis(&taus, &values);
        let want = [2.0, -1.0, 3.0, 0.0];
        for (got, want) in coeffs.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{coeffs:?}");
        }
    }

    #[test]
    fn log_weighted_integral_constant() {
        // integral_0^x ln(x - s) ds = x ln x - x, via a single full interval
        let x = 0.8;
        let got = log_weighted_integral(&[1.0], x, 0.0, x, x);
        let want = x * x.ln() - x;
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn log_weighted_integral_linear_past_interval() {
        // g(s) = s on [0, 1], target x = 1.5:
        // integral_0^1 ln(1.5 - s) s ds, antiderivative checked by parts:
        // = [ -(1.5-s)^2/2 ln(1.5-s) ... ] -- compare against closed form
        // integral = 1.5*(...) easier: integral_0^1 ln(x-s)*s ds with x=1.5
        //   sub w = x - s: integral_{0.5}^{1.5} ln w (x - w) dw
        //   = x [w ln w - w] - [w^2/2 ln w - w^2/4] evaluated 0.5..1.5
        let x: f64 = 1.5;
        let f = |w: f64| x * (w * w.ln() - w) - (w * w / 2.0 * w.ln() - w * w / 4.0);
        let want = f(1.5) - f(0.5);
        // P(tau) = tau on [0,1] (h = 1, x_l = 0) represents g(s) = s
        let got = log_weighted_integral(&[0.0, 1.0], x, 0.0, 1.0, 1.0);
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }
}
