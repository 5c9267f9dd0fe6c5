//! The Chernoff/saddle-point bound: B(t) ≤ W(s)/t^s for every s ≥ 0, so
//! minimizing g(s) - s log t over s gives the sharp log-scale tail bound.
//! g is strictly convex, so the stationarity equation g'(s) = log t has at
//! most one root; for t ≤ e^{g'(0)} the minimum sits at the boundary s = 0
//! with value 0.

use serde::Serialize;

use crate::coeffs::CoefficientSet;
use crate::wfunc::WFunc;
use crate::{y_of_t, Error, Result};

/// Result of one saddle solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleResult {
    pub t: f64,
    /// y = exp(t e^{-γ}), the natural tail scale.
    pub y: f64,
    pub s_star: f64,
    /// g(s*) - s* log t, the certified log-scale minimum over the bracket.
    pub log_min: f64,
    /// |g'(s*) - log t|; at a boundary minimum (s* = 0) this records the
    /// (positive) gradient excess instead.
    pub grad_residual: f64,
    pub iterations: u32,
}

impl SaddleResult {
    /// Lower edge of the honest bracket [log_min - log(3 s*), log_min] the
    /// bound-vs-truth slack allows; None at the boundary.
    pub fn lower_bracket(&self) -> Option<f64> {
        (self.s_star > 0.0).then(|| self.log_min - (3.0 * self.s_star).ln())
    }
}

/// Which estimator produced a tail estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Baseline,
    Thm1,
    Saddle,
    Thm2,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(Method::Baseline),
            "thm1" => Ok(Method::Thm1),
            "saddle" => Ok(Method::Saddle),
            "thm2" => Ok(Method::Thm2),
            other => Err(Error::domain(format!(
                "unknown method {other:?}; expected baseline|thm1|saddle|thm2"
            ))),
        }
    }
}

/// A log-scale tail estimate for A(t)/B(t).
#[derive(Debug, Clone, Serialize)]
pub struct TailEstimate {
    pub t: f64,
    pub y: f64,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub log_value: f64,
    /// Per-order contributions (j, -y·a_j/t^j) when the method is a series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<(usize, f64)>>,
}

/// The leading-order estimate log ≈ -y.
pub fn baseline_estimate(t: f64) -> TailEstimate {
    let y = y_of_t(t);
    TailEstimate {
        t,
        y,
        method: Method::Baseline,
        m: None,
        log_value: -y,
        terms: None,
    }
}

/// Minimize g(s) - s·log t over s ≥ 0 by safeguarded Newton on g'(s) = log t
/// with a bisection fallback, bracketing inside [0, 4 y log y].
pub fn minimize_chernoff(w: &WFunc, t: f64, tol: f64) -> Result<SaddleResult> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("minimize_chernoff requires t > 0, got {t}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let y = y_of_t(t);
    let lt = t.ln();
    let dtol = (tol * 0.1).clamp(1e-10, 1e-7);
    let g1_0 = w.log_w_d1(0.0, dtol)?;
    if g1_0 >= lt {
        // Boundary minimum: g' > log t everywhere, infimum at s = 0, W(0) = 1.
        return Ok(SaddleResult {
            t,
            y,
            s_star: 0.0,
            log_min: 0.0,
            grad_residual: g1_0 - lt,
            iterations: 0,
        });
    }
    let mut lo = 0.0;
    let mut hi = if y > std::f64::consts::E {
        4.0 * y * y.ln()
    } else {
        64.0
    };
    let mut grow = 0;
    while w.log_w_d1(hi, dtol)? < lt {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::internal(format!(
                "could not bracket the stationary point for t={t}"
            )));
        }
    }
    let mut s = (y * y.ln().max(1.0)).clamp(lo + 1e-6, hi * 0.99);
    let mut iterations = 0u32;
    let mut residual;
    loop {
        iterations += 1;
        let r = w.log_w_d1(s, dtol)? - lt;
        residual = r.abs();
        if r < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        if residual <= tol {
            break;
        }
        if iterations >= 100 {
            return Err(Error::internal(format!(
                "saddle solve for t={t} exhausted its iteration budget (residual {residual})"
            )));
        }
        let g2 = w.log_w_d2(s, dtol)?;
        let mut next = s - r / g2;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        s = next;
    }
    let vtol = (1e-6 * y.max(1.0)).clamp(1e-9, 0.05);
    let value = w.log_w(s, vtol)?.value;
    Ok(SaddleResult {
        t,
        y,
        s_star: s,
        log_min: value - s * lt,
        grad_residual: residual,
        iterations,
    })
}

/// The order-m series estimate: log ≈ -y (1 + Σ_{j=2}^m a_j/t^j).
pub fn thm1_estimate(t: f64, m: usize, coeffs: &CoefficientSet) -> Result<TailEstimate> {
    if !(t >= 2.0) {
        return Err(Error::domain(format!("thm1_estimate requires t >= 2, got {t}")));
    }
    if m < 2 || m > coeffs.m() {
        return Err(Error::domain(format!(
            "order m={m} outside available coefficient range 2..={}",
            coeffs.m()
        )));
    }
    let y = y_of_t(t);
    let mut terms = Vec::with_capacity(m - 1);
    let mut log_value = -y;
    let mut tp = t * t;
    for j in 2..=m {
        let contribution = -y * coeffs.a_f64(j) / tp;
        terms.push((j, contribution));
        log_value += contribution;
        tp *= t;
    }
    Ok(TailEstimate {
        t,
        y,
        method: Method::Thm1,
        m: Some(m),
        log_value,
        terms: Some(terms),
    })
}

/// Normalized distance |s* - y log y| / y of the saddle point from its
/// predicted location.
pub fn sylogy_check(w: &WFunc, t: f64) -> Result<f64> {
    if !(t >= 5.0) {
        return Err(Error::domain(format!("sylogy_check requires t >= 5, got {t}")));
    }
    let r = minimize_chernoff(w, t, 1e-8)?;
    let y = r.y;
    Ok((r.s_star - y * y.ln()).abs() / y)
}
