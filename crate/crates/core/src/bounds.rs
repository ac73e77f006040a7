//! Closed-form bound evaluators.
//!
//! Everything here is a pure function of its arguments. Probability-valued
//! bounds are capped at 1 before they are returned.
//!
//! The weight function
//!
//! ```text
//! c(a) = 2 (1 - 2a + 2 sqrt(a(a+1))) / (8a - 1),   a > 1/8
//! ```
//!
//! is evaluated in the rationalized form `2 / (2 sqrt(a(a+1)) + 2a - 1)`,
//! which is the same function without the `0/0`-looking quotient near
//! `a = 1/8`. `b(a) = a c(a)` is the Hermite constant that makes
//! `exp(x - a x^2 / 2) <= 1 + x + b(a) x^2 / 2` hold for every real `x`.

use thiserror::Error;

/// Smallest admissible weight (exclusive).
pub const A_MIN: f64 = 0.125;

/// Upper end of the weight interval used by the IDLA and learning corollaries.
pub const A_COROLLARY_MAX: f64 = 0.5625;

/// Window around `p = 1/2` inside which the Kearns-Saul function returns its limit.
const PHI_LIMIT_WINDOW: f64 = 1e-9;

const ROOT_MAX_ITER: usize = 200;
const ROOT_RESIDUAL: f64 = 1e-12;

/// Rational `a` values at which `c(a)` is a simple number, as `(a, c(a))`.
pub const SPECIAL_WEIGHTS: [(f64, f64); 8] = [
    (9.0 / 55.0, 10.0),
    (4.0 / 21.0, 6.0),
    (9.0 / 40.0, 4.0),
    (25.0 / 96.0, 3.0),
    (1.0 / 3.0, 2.0),
    (9.0 / 16.0, 1.0),
    (49.0 / 72.0, 0.8),
    (0.8, 2.0 / 3.0),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("root solve did not converge after {iterations} iterations (target {target})")]
    NonConvergence { iterations: usize, target: f64 },
}

pub type Result<T> = std::result::Result<T, BoundsError>;

fn domain(msg: impl Into<String>) -> BoundsError {
    BoundsError::Domain(msg.into())
}

fn check_weight(a: f64) -> Result<()> {
    if a.is_finite() && a > A_MIN {
        Ok(())
    } else {
        Err(domain(format!("weight a = {a} must exceed 1/8")))
    }
}

fn check_corollary_weight(a: f64) -> Result<()> {
    if a.is_finite() && a > A_MIN && a <= A_COROLLARY_MAX {
        Ok(())
    } else {
        Err(domain(format!("weight a = {a} must lie in (1/8, 9/16]")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} = {v} must be positive")))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("delta = {delta} must lie in (0, 1]")))
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(domain(format!("{name} = {v} must lie in [0, 1]")))
    }
}

fn check_horizon(n: u64) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(domain("horizon n must be at least 1"))
    }
}

#[inline]
fn cap(p: f64) -> f64 {
    p.min(1.0)
}

/// The weight `a` together with its derived constants `c(a)` and `b(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParam {
    a: f64,
    c: f64,
    b: f64,
}

impl WeightParam {
    pub fn new(a: f64) -> Result<Self> {
        check_weight(a)?;
        let c = 2.0 / (2.0 * (a * (a + 1.0)).sqrt() + 2.0 * a - 1.0);
        Ok(Self { a, c, b: a * c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// Moment order `p >= 2`, its Hölder conjugate `q` and the constants
/// `B_q = q / (2q - 1)`, `C_q = B_q^(B_q / 2)` of the missing-factor bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub c: f64,
}

impl HolderPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 2.0) {
            return Err(domain(format!("moment order p = {p} must be a finite value >= 2")));
        }
        let q = p / (p - 1.0);
        let b = q / (2.0 * q - 1.0);
        Ok(Self { p, q, b, c: b.powf(b / 2.0) })
    }
}

/// `c(a)`.
pub fn weight_c(a: f64) -> Result<f64> {
    Ok(WeightParam::new(a)?.c())
}

/// `b(a) = a c(a)`.
pub fn weight_b(a: f64) -> Result<f64> {
    Ok(WeightParam::new(a)?.b())
}

/// `(1 + x + b(a) x^2 / 2) - exp(x - a x^2 / 2)`; never negative.
pub fn hermite_margin(x: f64, a: f64) -> Result<f64> {
    let w = WeightParam::new(a)?;
    Ok((1.0 + x + 0.5 * w.b() * x * x) - (x - 0.5 * a * x * x).exp())
}

/// Discriminant of `P_{a,b}(x) = (ab/2) x^2 + ((2a - b)/2) x + (a + b - 1)`.
///
/// Its only positive root in `b` is `b(a)`; for `b > b(a)` it is negative, so
/// the polynomial keeps one sign.
pub fn pab_discriminant(a: f64, b: f64) -> Result<f64> {
    check_weight(a)?;
    if !(b.is_finite() && b > 0.5) {
        return Err(domain(format!("b = {b} must exceed 1/2")));
    }
    let lin = 2.0 * a - b;
    Ok(lin * lin / 4.0 - 2.0 * a * b * (a + b - 1.0))
}

/// `P(|M_n| >= x, S_n(a) <= y) <= 2 exp(-x^2 / (2 a y))`.
pub fn exp_tail_bound(x: f64, y: f64, a: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    check_weight(a)?;
    Ok(cap(2.0 * (-x * x / (2.0 * a * y)).exp()))
}

/// `P(|M_n| / S_n(a) >= x, S_n(a) >= y) <= 2 exp(-x^2 y / (2a))`.
pub fn ratio_tail_bound(x: f64, y: f64, a: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    check_weight(a)?;
    Ok(cap(2.0 * (-x * x * y / (2.0 * a)).exp()))
}

/// `P(|M_n| / <M>_n >= x, c(a) <M>_n >= [M]_n + y) <= 2 exp(-x^2 y / (2 a c(a)^2))`.
pub fn pqv_ratio_bound(x: f64, y: f64, a: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_positive("y", y)?;
    let w = WeightParam::new(a)?;
    Ok(cap(2.0 * (-x * x * y / (2.0 * a * w.c() * w.c())).exp()))
}

/// Result of [`missing_factor_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissingFactor {
    pub holder: HolderPair,
    /// The deviation level is `x * threshold_scale`, i.e. `x / sqrt(B_q)`.
    pub threshold_scale: f64,
    pub bound: f64,
}

/// `C_q x^(-B_q) exp(-x^2 / 2)` for the event
/// `|M_n| / sqrt(a S_n(a) + E[|M_n|^p]^(2/p)) >= x / sqrt(B_q)`.
pub fn missing_factor_bound(x: f64, p: f64) -> Result<MissingFactor> {
    check_positive("x", x)?;
    let holder = HolderPair::new(p)?;
    Ok(MissingFactor {
        holder,
        threshold_scale: 1.0 / holder.b.sqrt(),
        bound: cap(holder.c * x.powf(-holder.b) * (-x * x / 2.0).exp()),
    })
}

/// Kearns-Saul exponent `phi(p) = (q - p) / log(q / p)` with `q = 1 - p`.
pub fn kearns_saul_phi(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("p = {p} must lie in (0, 1)")));
    }
    if (p - 0.5).abs() < PHI_LIMIT_WINDOW {
        return Ok(0.5);
    }
    let d = 1.0 - 2.0 * p;
    // log(q/p) = log1p((q - p) / p)
    Ok(d / (d / p).ln_1p())
}

fn check_two_point(p: f64) -> Result<()> {
    if p > 0.0 && p <= 0.5 {
        Ok(())
    } else {
        Err(domain(format!("p = {p} must lie in (0, 1/2]")))
    }
}

/// `d(a) = 4 (q^2 + pq c(a))^2 / (p^2 + pq c(a))` for the two-point AR noise.
pub fn ar_rate(a: f64, p: f64) -> Result<f64> {
    check_two_point(p)?;
    let c = weight_c(a)?;
    let q = 1.0 - p;
    let num = q * q + p * q * c;
    Ok(4.0 * num * num / (p * p + p * q * c))
}

/// Largest deviation `sqrt(a d(a))` for which [`ar_bound`] applies.
pub fn ar_max_deviation(a: f64, p: f64) -> Result<f64> {
    Ok((a * ar_rate(a, p)?).sqrt())
}

/// `P(|theta_hat_n - theta| >= x) <= 2 exp(-n p^2 x^2 / (a d(a)))`, `0 <= x <= sqrt(a d(a))`.
pub fn ar_bound(x: f64, n: u64, p: f64, a: f64) -> Result<f64> {
    check_horizon(n)?;
    let ad = a * ar_rate(a, p)?;
    if !(x >= 0.0) {
        return Err(domain(format!("x = {x} must be nonnegative")));
    }
    if x > ad.sqrt() * (1.0 + 1e-12) {
        return Err(BoundsError::Range(format!(
            "x = {x} exceeds sqrt(a d(a)) = {}",
            ad.sqrt()
        )));
    }
    Ok(cap(2.0 * (-(n as f64) * p * p * x * x / ad).exp()))
}

/// `c_n(a) = ((2n+1)/(n+1)) ((3 + c(a))/6) + (n (1 + c(a)) + 2 c(a)) / (n+1)^2`.
pub fn idla_cn(n: u64, a: f64) -> Result<f64> {
    check_horizon(n)?;
    check_corollary_weight(a)?;
    let c = weight_c(a)?;
    let nf = n as f64;
    let n1 = nf + 1.0;
    Ok((2.0 * nf + 1.0) / n1 * ((3.0 + c) / 6.0) + (nf * (1.0 + c) + 2.0 * c) / (n1 * n1))
}

/// `d_n(a) = c_n(a) + (n + 2) / (3n)`.
pub fn idla_dn(n: u64, a: f64) -> Result<f64> {
    let nf = n as f64;
    Ok(idla_cn(n, a)? + (nf + 2.0) / (3.0 * nf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdlaBounds {
    /// Bound on `P(|X_n| / n >= x)`.
    pub scaled: f64,
    /// Bound on `P(|X_n| / sqrt(n) >= x)`.
    pub sqrt_scaled: f64,
}

pub fn idla_bounds(x: f64, n: u64, a: f64) -> Result<IdlaBounds> {
    check_positive("x", x)?;
    let cn = idla_cn(n, a)?;
    let dn = idla_dn(n, a)?;
    let nf = n as f64;
    Ok(IdlaBounds {
        scaled: cap(2.0 * (-nf * x * x / (2.0 * a * cn)).exp()),
        sqrt_scaled: cap(dn.cbrt() * x.powf(-2.0 / 3.0) * (-x * x / (3.0 * dn)).exp()),
    })
}

/// Comparison bounds from the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    /// `2 exp(-x^2 / 2y)` on `{|M_n| >= x, [M]_n + <M>_n <= y}`.
    Bt2008,
    /// `2 exp(-3x^2 / 2y)` on `{|M_n| >= x, [M]_n + 2<M>_n <= y}`.
    Delyon,
    /// `2 exp(-8x^2 / 9y)` on `{|M_n| >= x, [M]_n + <M>_n <= y}`.
    Improved,
    /// Azuma-Hoeffding for IDLA: `2 exp(-3 n x^2 / 8)`.
    AzumaIdla,
    /// Gaussian-noise AR(1): `2 exp(-n x^2 / (2 (1 + y_x)))` with `h(y_x) = x^2`.
    GaussAr,
}

pub fn baseline_bound(kind: BaselineKind, x: f64, aux: f64) -> Result<f64> {
    check_positive("x", x)?;
    match kind {
        BaselineKind::Bt2008 | BaselineKind::Delyon | BaselineKind::Improved => {
            check_positive("y", aux)?;
            let rate = match kind {
                BaselineKind::Bt2008 => 0.5,
                BaselineKind::Delyon => 1.5,
                _ => 8.0 / 9.0,
            };
            Ok(cap(2.0 * (-rate * x * x / aux).exp()))
        }
        BaselineKind::AzumaIdla | BaselineKind::GaussAr => {
            if !(aux >= 1.0 && aux.fract() == 0.0) {
                return Err(domain(format!("horizon n = {aux} must be an integer >= 1")));
            }
            if kind == BaselineKind::AzumaIdla {
                Ok(cap(2.0 * (-3.0 * aux * x * x / 8.0).exp()))
            } else {
                let y = gauss_ar_root(x)?;
                Ok(cap(2.0 * (-aux * x * x / (2.0 * (1.0 + y))).exp()))
            }
        }
    }
}

/// `h(y) = (1 + y) log(1 + y) - y`.
pub fn gauss_ar_h(y: f64) -> f64 {
    (1.0 + y) * y.ln_1p() - y
}

/// Unique positive `y` with `h(y) = x^2`.
///
/// Bisection on `[0, max(2x^2, 4x)]` until the bracket is narrow, then
/// safeguarded Newton (`h'(y) = log(1 + y)`).
pub fn gauss_ar_root(x: f64) -> Result<f64> {
    check_positive("x", x)?;
    let target = x * x;
    let mut lo = 0.0_f64;
    let mut hi = (2.0 * x * x).max(4.0 * x);
    let mut iter = 0;
    while gauss_ar_h(hi) < target {
        lo = hi;
        hi *= 2.0;
        iter += 1;
        if iter >= ROOT_MAX_ITER {
            return Err(BoundsError::NonConvergence { iterations: iter, target });
        }
    }
    let mut y = 0.5 * (lo + hi);
    while iter < ROOT_MAX_ITER {
        iter += 1;
        let r = gauss_ar_h(y) - target;
        if r.abs() <= ROOT_RESIDUAL * target.max(1.0) {
            return Ok(y);
        }
        if r > 0.0 {
            hi = y;
        } else {
            lo = y;
        }
        let newton = y - r / y.ln_1p();
        // fall back to bisection while the bracket is wide or Newton leaves it
        y = if (hi - lo) < 1e-3 * hi.max(1.0) && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(BoundsError::NonConvergence { iterations: iter, target })
}

/// `sqrt(-2a (1 + c(a) v_bar) log(delta) / n)`: the width `w` with
/// `P(R_n >= R_hat_n + w) <= delta`.
pub fn learning_threshold(n: u64, a: f64, delta: f64, v_bar: f64) -> Result<f64> {
    check_horizon(n)?;
    check_corollary_weight(a)?;
    check_delta(delta)?;
    check_unit("v_bar", v_bar)?;
    let c = weight_c(a)?;
    Ok((-2.0 * a * (1.0 + c * v_bar) * delta.ln() / n as f64).sqrt())
}

/// One-sided tail `exp(-n x^2 / (2a (1 + c(a) v_bar)))` on `{R_n >= R_hat_n + x}`.
pub fn learning_tail_bound(x: f64, n: u64, a: f64, v_bar: f64) -> Result<f64> {
    check_positive("x", x)?;
    check_horizon(n)?;
    check_corollary_weight(a)?;
    check_unit("v_bar", v_bar)?;
    let c = weight_c(a)?;
    Ok(cap((-(n as f64) * x * x / (2.0 * a * (1.0 + c * v_bar))).exp()))
}

/// `m(a) = max(4 (1 + c(a)), c(a)^2) / 2`.
pub fn learning_m(a: f64) -> Result<f64> {
    let c = weight_c(a)?;
    Ok((4.0 * (1.0 + c)).max(c * c) / 2.0)
}

/// Smallest real horizon `-a m(a) log(delta)` for which `Phi_a` is invertible.
pub fn learning_min_horizon(a: f64, delta: f64) -> Result<f64> {
    check_corollary_weight(a)?;
    check_delta(delta)?;
    Ok(-a * learning_m(a)? * delta.ln())
}

fn learning_b(n: u64, a: f64, delta: f64) -> f64 {
    -2.0 * a * delta.ln() / n as f64
}

fn check_learning_horizon(n: u64, a: f64, delta: f64) -> Result<()> {
    check_horizon(n)?;
    let floor = learning_min_horizon(a, delta)?;
    if (n as f64) < floor {
        return Err(BoundsError::Range(format!(
            "n = {n} is below the invertibility floor -a m(a) log(delta) = {floor}"
        )));
    }
    Ok(())
}

/// `Phi_a(x) = x - sqrt(B (1 + c(a) x))` with `B = -2a log(delta) / n`.
pub fn learning_phi(x: f64, n: u64, a: f64, delta: f64) -> Result<f64> {
    check_learning_horizon(n, a, delta)?;
    let c = weight_c(a)?;
    let b = learning_b(n, a, delta);
    Ok(x - (b * (1.0 + c * x)).sqrt())
}

/// `Phi_a^{-1}(r) = r + c B / 2 + sqrt(B (4 + 4 c r + c^2 B)) / 2`.
pub fn learning_phi_inverse(r_hat: f64, n: u64, a: f64, delta: f64) -> Result<f64> {
    check_unit("r_hat", r_hat)?;
    check_learning_horizon(n, a, delta)?;
    let c = weight_c(a)?;
    let b = learning_b(n, a, delta);
    Ok(r_hat + 0.5 * c * b + 0.5 * (b * (4.0 + 4.0 * c * r_hat + c * c * b)).sqrt())
}

/// Cesa-Bianchi & Gentile threshold
/// `r + (36/n) L + 2 sqrt((r/n) L)` with `L = log((n r + 3) / delta)`.
pub fn cbg_threshold(r_hat: f64, n: u64, delta: f64) -> Result<f64> {
    check_unit("r_hat", r_hat)?;
    check_horizon(n)?;
    check_delta(delta)?;
    let nf = n as f64;
    let l = ((nf * r_hat + 3.0) / delta).ln();
    Ok(r_hat + 36.0 / nf * l + 2.0 * (r_hat / nf * l).sqrt())
}

/// Cesa-Bianchi, Conconi & Gentile width `sqrt(-2 log(delta) / n)`.
pub fn cbc_threshold(n: u64, delta: f64) -> Result<f64> {
    check_horizon(n)?;
    check_delta(delta)?;
    Ok((-2.0 * delta.ln() / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `c(a)` in the unrationalized form.
    fn c_literal(a: f64) -> f64 {
        2.0 * (1.0 - 2.0 * a + 2.0 * (a * (a + 1.0)).sqrt()) / (8.0 * a - 1.0)
    }

    fn b_literal(a: f64) -> f64 {
        2.0 * a * (1.0 - 2.0 * a + 2.0 * (a * (a + 1.0)).sqrt()) / (8.0 * a - 1.0)
    }

    #[test]
    fn special_weight_values() {
        for (a, c) in SPECIAL_WEIGHTS {
            assert!((weight_c(a).unwrap() - c).abs() < 1e-12, "a={a}");
        }
    }

    #[test]
    fn c_asymptote() {
        let c = weight_c(500.0).unwrap();
        assert!((c - 1.0 / 1000.0).abs() / 1e-3 < 0.01);
    }

    #[test]
    fn rationalized_c_matches_literal_form() {
        let mut a = 0.13;
        while a < 10.0 {
            let rel = (weight_c(a).unwrap() - c_literal(a)).abs() / c_literal(a);
            assert!(rel < 1e-13, "a={a} rel={rel}");
            let rel = (weight_b(a).unwrap() - b_literal(a)).abs() / b_literal(a);
            assert!(rel < 1e-13, "a={a} rel={rel}");
            a += 0.0137;
        }
    }

    #[test]
    fn weight_b_examples() {
        assert!((weight_b(1.0 / 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((weight_b(9.0 / 16.0).unwrap() - 9.0 / 16.0).abs() < 1e-12);
        let b = weight_b(100.0).unwrap();
        assert!(b > 0.5 && b < 0.5002, "{b}");
    }

    #[test]
    fn weight_domain() {
        for a in [0.125, 0.1, 0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(weight_c(a), Err(BoundsError::Domain(_))), "a={a}");
            assert!(weight_b(a).is_err());
            assert!(hermite_margin(0.0, a).is_err());
        }
    }

    #[test]
    fn hermite_examples() {
        for a in [0.2, 1.0 / 3.0, 5.0] {
            assert_eq!(hermite_margin(0.0, a).unwrap(), 0.0);
        }
        // oracle values from 40-digit evaluation of 7/3 - e^{5/6} and 1/8 - e^{-25/8}
        let m = hermite_margin(1.0, 1.0 / 3.0).unwrap();
        assert!((m - 0.032_357_442_440_508_41).abs() < 1e-12, "{m}");
        let m = hermite_margin(-2.0, 9.0 / 16.0).unwrap();
        assert!((m - 0.081_063_066_376_592_58).abs() < 1e-12, "{m}");
    }

    #[test]
    fn discriminant_examples() {
        let b = weight_b(1.0 / 3.0).unwrap();
        assert!(pab_discriminant(1.0 / 3.0, b).unwrap().abs() < 1e-12);
        assert!(pab_discriminant(1.0 / 3.0, 0.8).unwrap() < 0.0);
        assert!(pab_discriminant(1.0 / 3.0, 0.6).unwrap() > 0.0);
        assert!(pab_discriminant(1.0 / 3.0, 0.5).is_err());
        assert!(pab_discriminant(0.1, 0.8).is_err());
    }

    #[test]
    fn exp_tail_special_cases() {
        assert_eq!(exp_tail_bound(1e-9, 1.0, 1.0 / 3.0).unwrap(), 1.0);
        let v = exp_tail_bound(3.0, 3.0, 9.0 / 16.0).unwrap();
        let improved = baseline_bound(BaselineKind::Improved, 3.0, 3.0).unwrap();
        assert!((v - improved).abs() < 1e-15);
        assert!((v - 0.138_966_902_445_603_07).abs() < 1e-12, "{v}");
        let v = exp_tail_bound(3.0, 3.0, 1.0 / 3.0).unwrap();
        let delyon = baseline_bound(BaselineKind::Delyon, 3.0, 3.0).unwrap();
        assert!((v - delyon).abs() < 1e-15);
        assert!((v - 2.0 * (-4.5f64).exp()).abs() < 1e-15);
        assert!(exp_tail_bound(0.0, 1.0, 0.5).is_err());
        assert!(exp_tail_bound(1.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn ratio_bounds() {
        let v = ratio_tail_bound(1.0, 1.0, 9.0 / 16.0).unwrap();
        assert!((v - 2.0 * (-8.0f64 / 9.0).exp()).abs() < 1e-15);
        assert_eq!(ratio_tail_bound(1e-9, 1.0, 0.5).unwrap(), 1.0);
        let v = ratio_tail_bound(2.0, 1.0, 1.0 / 3.0).unwrap();
        assert!((v - 2.0 * (-6.0f64).exp()).abs() < 1e-15);

        assert_eq!(
            pqv_ratio_bound(1.0, 1.0, 9.0 / 16.0).unwrap(),
            ratio_tail_bound(1.0, 1.0, 9.0 / 16.0).unwrap()
        );
        assert_eq!(pqv_ratio_bound(1.0, 1.0, 1.0 / 3.0).unwrap(), 1.0);
        let v = pqv_ratio_bound(3.0, 1.0, 1.0 / 3.0).unwrap();
        assert!((v - 2.0 * (-27.0f64 / 8.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn missing_factor_p2() {
        let mf = missing_factor_bound(1.0, 2.0).unwrap();
        assert!((mf.holder.b - 2.0 / 3.0).abs() < 1e-15);
        assert!((mf.holder.c - (2.0f64 / 3.0).cbrt()).abs() < 1e-15);
        assert!((mf.threshold_scale - 1.5f64.sqrt()).abs() < 1e-15);
        assert!((mf.bound - (2.0f64 / 3.0).cbrt() * (-0.5f64).exp()).abs() < 1e-15);
        assert!((mf.bound - 0.529_9).abs() < 1e-4);
    }

    #[test]
    fn holder_pair_limits() {
        let h10 = HolderPair::new(10.0).unwrap();
        let h100 = HolderPair::new(100.0).unwrap();
        assert!(h10.b < h100.b && h100.b < 1.0);
        assert!(h10.c < h100.c && h100.c < 1.0);
        for p in [2.0, 3.0, 10.0, 1e6] {
            let h = HolderPair::new(p).unwrap();
            assert!((1.0 / h.p + 1.0 / h.q - 1.0).abs() < 1e-12);
            assert!(h.b >= 2.0 / 3.0 - 1e-15 && h.b < 1.0);
            assert!(h.c > 0.0 && h.c <= 1.0);
        }
        assert!(HolderPair::new(1.5).is_err());
        assert!(missing_factor_bound(0.0, 2.0).is_err());
    }

    #[test]
    fn kearns_saul_values() {
        assert_eq!(kearns_saul_phi(0.5).unwrap(), 0.5);
        assert_eq!(kearns_saul_phi(0.5 + 1e-10).unwrap(), 0.5);
        let v = kearns_saul_phi(1.0 / 3.0).unwrap();
        assert!((v - (1.0 / 3.0) / 2f64.ln()).abs() < 1e-15);
        let v = kearns_saul_phi(0.01).unwrap();
        assert!((v - 0.98 / 99f64.ln()).abs() < 1e-15);
        assert!((v - 0.2133).abs() < 1e-4);
        // symmetric in p <-> q
        let a = kearns_saul_phi(0.2).unwrap();
        let b = kearns_saul_phi(0.8).unwrap();
        assert!((a - b).abs() < 1e-15);
        for p in [0.0, 1.0, -0.1, 1.5] {
            assert!(kearns_saul_phi(p).is_err());
        }
    }

    #[test]
    fn ar_rate_values() {
        assert!((ar_rate(1.0 / 3.0, 0.5).unwrap() - 3.0).abs() < 1e-12);
        let d = ar_rate(9.0 / 16.0, 1.0 / 3.0).unwrap();
        assert!((d - 16.0 / 3.0).abs() < 1e-12);
        assert!((9.0 / 16.0 * d - 3.0).abs() < 1e-12);
        assert!((ar_rate(9.0 / 16.0, 0.5).unwrap() - 2.0).abs() < 1e-12);
        assert!(ar_rate(0.5, 0.6).is_err());
        assert!(ar_rate(0.1, 0.5).is_err());
    }

    #[test]
    fn ar_bound_remark_forms() {
        for n in [1u64, 10, 200] {
            for x in [0.1, 0.5, 1.0] {
                let v = ar_bound(x, n, 0.5, 1.0 / 3.0).unwrap();
                let r = (2.0 * (-(n as f64) * x * x / 4.0).exp()).min(1.0);
                assert!((v - r).abs() < 1e-14);
            }
            for x in [0.1, 1.0, 3f64.sqrt()] {
                let v = ar_bound(x, n, 1.0 / 3.0, 9.0 / 16.0).unwrap();
                let r = (2.0 * (-(n as f64) * x * x / 27.0).exp()).min(1.0);
                assert!((v - r).abs() < 1e-14);
            }
        }
        assert_eq!(ar_bound(0.0, 50, 0.5, 1.0 / 3.0).unwrap(), 1.0);
        assert!(matches!(ar_bound(1.01, 50, 0.5, 1.0 / 3.0), Err(BoundsError::Range(_))));
        assert!(ar_bound(0.5, 0, 0.5, 1.0 / 3.0).is_err());
    }

    #[test]
    fn idla_cn_closed_form_a_third() {
        for n in 1..=10_000u64 {
            let nf = n as f64;
            let closed = (10.0 * nf * nf + 33.0 * nf + 29.0) / (6.0 * (nf + 1.0).powi(2));
            let v = idla_cn(n, 1.0 / 3.0).unwrap();
            assert!((v - closed).abs() / closed < 1e-12, "n={n}");
        }
        assert!((idla_cn(1, 1.0 / 3.0).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn idla_cn_closed_form_a_25_96() {
        // Direct expansion of the defining formula with c = 3.
        for n in 1..=10_000u64 {
            let nf = n as f64;
            let closed = (2.0 * nf * nf + 7.0 * nf + 7.0) / (nf + 1.0).powi(2);
            let v = idla_cn(n, 25.0 / 96.0).unwrap();
            assert!((v - closed).abs() / closed < 1e-12, "n={n}");
        }
        // The printed (2n^2 + 5n + 7)/(n+1)^2 differs from the defining formula:
        // at n = 1 the formula gives 4, the printed form 7/2.
        assert!((idla_cn(1, 25.0 / 96.0).unwrap() - 4.0).abs() < 1e-12);
        // The stated ceilings 7/2 and 9/2 hold from n = 2 on.
        for n in 2..=100_000u64 {
            assert!(idla_cn(n, 25.0 / 96.0).unwrap() <= 3.5);
            assert!(idla_dn(n, 25.0 / 96.0).unwrap() <= 4.5);
        }
    }

    #[test]
    fn idla_ceilings_a_third() {
        for n in 1..=1_000_000u64 {
            assert!(idla_cn(n, 1.0 / 3.0).unwrap() <= 3.0 + 1e-12);
            assert!(idla_dn(n, 1.0 / 3.0).unwrap() <= 4.0 + 1e-12);
        }
    }

    #[test]
    fn idla_bounds_remark_forms() {
        for n in [1u64, 10, 100] {
            for x in [0.05, 0.2, 0.5, 2.0] {
                let nf = n as f64;
                let b = idla_bounds(x, n, 1.0 / 3.0).unwrap();
                assert!(b.scaled <= (2.0 * (-nf * x * x / 2.0).exp()).min(1.0) + 1e-15);
                let r = ((2.0 / x).powf(2.0 / 3.0) * (-x * x / 12.0).exp()).min(1.0);
                assert!(b.sqrt_scaled <= r + 1e-15);
                if n >= 2 {
                    let b = idla_bounds(x, n, 25.0 / 96.0).unwrap();
                    let r = (2.0 * (-96.0 * nf * x * x / 175.0).exp()).min(1.0);
                    assert!(b.scaled <= r + 1e-15);
                }
            }
        }
        assert!(idla_cn(10, 0.6).is_err());
        assert!(idla_cn(0, 0.3).is_err());
        assert!(idla_bounds(0.0, 10, 0.3).is_err());
    }

    #[test]
    fn azuma_example() {
        let v = baseline_bound(BaselineKind::AzumaIdla, 0.2, 100.0).unwrap();
        assert!((v - 2.0 * (-1.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.4463).abs() < 1e-4);
        assert!(baseline_bound(BaselineKind::AzumaIdla, 0.2, 0.5).is_err());
    }

    #[test]
    fn gauss_ar_root_solves_h() {
        let y = gauss_ar_root(0.4).unwrap();
        assert!((y - 0.617).abs() < 1e-3, "{y}");
        assert!(y <= 0.8);
        for x in [1e-4, 0.01, 0.3, 0.49, 1.0, 5.0, 40.0] {
            let y = gauss_ar_root(x).unwrap();
            assert!((gauss_ar_h(y) - x * x).abs() <= 1e-12 * (x * x).max(1.0), "x={x}");
            if x < 0.5 {
                assert!(y <= 2.0 * x);
            }
        }
        let b = baseline_bound(BaselineKind::GaussAr, 0.4, 50.0).unwrap();
        let y = gauss_ar_root(0.4).unwrap();
        assert!((b - (2.0 * (-50.0 * 0.16 / (2.0 * (1.0 + y))).exp()).min(1.0)).abs() < 1e-15);
    }

    #[test]
    fn learning_threshold_examples() {
        let t = learning_threshold(100, 1.0 / 3.0, 0.2, 1.0).unwrap();
        assert!((t - 0.179_412_257_799_410_15).abs() < 1e-12, "{t}");
        assert!((t - cbc_threshold(100, 0.2).unwrap()).abs() < 1e-15);
        let t0 = learning_threshold(100, 1.0 / 3.0, 0.2, 0.0).unwrap();
        assert!((t0 - 0.103_583_715_336_407_98).abs() < 1e-12, "{t0}");
        assert_eq!(learning_threshold(100, 1.0 / 3.0, 1.0, 0.5).unwrap(), 0.0);
        assert!(learning_threshold(100, 1.0 / 3.0, 0.0, 0.5).is_err());
        assert!(learning_threshold(100, 0.7, 0.2, 0.5).is_err());
        assert!(learning_threshold(100, 1.0 / 3.0, 0.2, 1.5).is_err());
    }

    #[test]
    fn learning_inverse_examples() {
        assert!((learning_m(1.0 / 3.0).unwrap() - 6.0).abs() < 1e-12);
        let floor = learning_min_horizon(1.0 / 3.0, 0.2).unwrap();
        assert!((floor - 2.0 * 5f64.ln()).abs() < 1e-12);
        assert!(learning_phi_inverse(0.0, 3, 1.0 / 3.0, 0.2).is_err());
        assert!(learning_phi_inverse(0.0, 4, 1.0 / 3.0, 0.2).is_ok());

        let v = learning_phi_inverse(0.0, 100, 1.0 / 3.0, 0.2).unwrap();
        // B = (2/3) ln 5 / 100; value = B + sqrt(B (4 + 4B)) / 2
        assert!((v - 0.114_867_523_936_513_1).abs() < 1e-12, "{v}");
        let back = learning_phi(v, 100, 1.0 / 3.0, 0.2).unwrap();
        assert!(back.abs() < 1e-12);
    }

    #[test]
    fn cbg_examples() {
        let v = cbg_threshold(0.0, 100, 0.2).unwrap();
        assert!((v - 0.36 * 15f64.ln()).abs() < 1e-15);
        assert!((v - 0.9749).abs() < 1e-4);
        // effective (below 1) only from n >= 36 log(15) ~ 97.5
        assert!(cbg_threshold(0.0, 97, 0.2).unwrap() > 1.0);
        assert!(cbg_threshold(0.0, 98, 0.2).unwrap() < 1.0);
        assert!(cbg_threshold(0.0, 100_000_000, 0.2).unwrap() < 1e-6);
    }
}
