//! Numerically stable evaluation of g(s) = log W(s) and friends, where
//!
//! W(s) = Π_p (1 + ((1-1/p)^{-s} - 1)/p)
//!
//! is the mean value of (n/φ(n))^s. The per-prime log term is evaluated in
//! two regimes around A = -s log(1-1/p): a log1p form for small A, and the
//! exact rearrangement A - log p + log1p((p-1) e^{-A}) when e^A would
//! overflow. Truncation at a prime cutoff v leaves a tail of order
//! s/(v log v) for the value and 1.5/(v log v) for the derivatives; cutoffs
//! are chosen from those estimates, deterministically in (s, tol).

use std::sync::{Arc, Mutex};

use crate::coeffs::CoefficientSet;
use crate::primes::for_each_prime_segment;
use crate::util::{softplus, KahanSum};
use crate::{Error, Result, EULER_GAMMA};

/// Regime switch for the per-term evaluation: beyond this, e^A - 1 and e^A
/// are indistinguishable in double precision.
const LARGE_A: f64 = 30.0;

/// Smallest cutoff ever used.
const BASE_CUTOFF: f64 = 1e4;

/// Largest prime cutoff the evaluator will sieve to.
pub const MAX_CUTOFF: f64 = 1e9;

/// Minimum v/s ratio accepted by `log_w_we`.
const WE_MIN_CUTOFF_RATIO: f64 = 1.0;

/// One evaluation of log W(s) with its truncation certificate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LogWValue {
    pub s: f64,
    pub value: f64,
    /// Prime cutoff used (all primes ≤ cutoff entered the sum).
    pub cutoff: f64,
    /// Estimated magnitude of the neglected log-tail, ~ s/(v log v).
    pub tail_bound: f64,
}

struct PrimeCache {
    limit: u64,
    primes: Arc<Vec<f64>>,
}

/// Evaluator for g(s) = log W(s) with a shared, growable prime cache.
/// All methods are reentrant; the cache only ever grows.
pub struct WFunc {
    cache: Mutex<PrimeCache>,
}

impl Default for WFunc {
    fn default() -> Self {
        Self::new()
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::domain(format!("log_w requires s >= 0, got {s}")));
    }
    Ok(())
}

/// Cutoff for the value sum: tail estimate s/(v log v) ≤ tol.
pub fn value_cutoff(s: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut v = (4.0 * s).max(BASE_CUTOFF);
    while s / (v * v.ln()) > tol {
        v *= 2.0;
        if v > MAX_CUTOFF {
            return Err(Error::resource(format!(
                "cutoff for s={s}, tol={tol} exceeds {MAX_CUTOFF}"
            )));
        }
    }
    Ok(v)
}

/// Cutoff for the derivative sums: tail estimate 1.5/(v log v) ≤ tol,
/// independent of s once v ≥ 4s.
fn derivative_cutoff(s: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut v = (4.0 * s).max(BASE_CUTOFF);
    while 1.5 / (v * v.ln()) > tol {
        v *= 2.0;
        if v > MAX_CUTOFF {
            return Err(Error::resource(format!(
                "derivative cutoff for s={s}, tol={tol} exceeds {MAX_CUTOFF}"
            )));
        }
    }
    Ok(v)
}

/// log(1 + ((1-1/p)^{-s} - 1)/p), overflow-safe for any s ≥ 0.
#[inline]
fn log_w_term(s: f64, p: f64) -> f64 {
    let a = -s * (-1.0 / p).ln_1p();
    if a <= LARGE_A {
        (a.exp_m1() / p).ln_1p()
    } else {
        a - p.ln() + ((p - 1.0) * (-a).exp()).ln_1p()
    }
}

#[inline]
fn d1_term(s: f64, p: f64) -> f64 {
    let a = -s * (-1.0 / p).ln_1p();
    let mlogb = (1.0 / (p - 1.0)).ln_1p(); // -log(1 - 1/p)
    mlogb / (1.0 + (p - 1.0) * (-a).exp())
}

#[inline]
fn d2_term(s: f64, p: f64) -> f64 {
    let a = -s * (-1.0 / p).ln_1p();
    let mlogb = (1.0 / (p - 1.0)).ln_1p();
    let w = (p - 1.0) * (-a).exp();
    mlogb * mlogb * w / ((1.0 + w) * (1.0 + w))
}

impl WFunc {
    pub fn new() -> Self {
        WFunc {
            cache: Mutex::new(PrimeCache {
                limit: 0,
                primes: Arc::new(Vec::new()),
            }),
        }
    }

    /// All primes ≤ v as f64, from the shared cache (grown geometrically).
    fn primes_to(&self, v: f64) -> Result<Arc<Vec<f64>>> {
        if v > MAX_CUTOFF {
            return Err(Error::resource(format!("prime cutoff {v} exceeds {MAX_CUTOFF}")));
        }
        let needed = v.ceil() as u64;
        let mut cache = self.cache.lock().unwrap();
        if cache.limit < needed {
            let new_limit = (needed.saturating_mul(2)).max(1 << 14).min(MAX_CUTOFF as u64);
            let mut primes = Vec::new();
            for_each_prime_segment(new_limit, crate::primes::DEFAULT_SEGMENT_SIZE, |seg| {
                primes.extend(seg.iter().map(|&p| p as f64));
            })?;
            cache.limit = new_limit;
            cache.primes = Arc::new(primes);
        }
        Ok(Arc::clone(&cache.primes))
    }

    /// All primes ≤ v in ascending order (shared cache).
    pub(crate) fn primes_up_to(&self, v: f64) -> Result<Arc<Vec<f64>>> {
        let primes = self.primes_to(v)?;
        Ok(primes)
    }

    /// g(s) = log W(s), truncated so the neglected tail is ≤ tol.
    pub fn log_w(&self, s: f64, tol: f64) -> Result<LogWValue> {
        check_s(s)?;
        let v = value_cutoff(s, tol)?;
        let primes = self.primes_to(v)?;
        let mut acc = KahanSum::new();
        for &p in primes_upto(&primes, v) {
            acc.add(log_w_term(s, p));
        }
        Ok(LogWValue {
            s,
            value: acc.value(),
            cutoff: v,
            tail_bound: s / (v * v.ln()),
        })
    }

    /// g'(s) = Σ_p -log(1-1/p) / (1 + (p-1) e^{-A}); positive for all s.
    pub fn log_w_d1(&self, s: f64, tol: f64) -> Result<f64> {
        check_s(s)?;
        let v = derivative_cutoff(s, tol)?;
        let primes = self.primes_to(v)?;
        let mut acc = KahanSum::new();
        for &p in primes_upto(&primes, v) {
            acc.add(d1_term(s, p));
        }
        Ok(acc.value())
    }

    /// g''(s) = Σ_p log²(1-1/p) (p-1) e^{-A} / (1 + (p-1) e^{-A})²; positive.
    pub fn log_w_d2(&self, s: f64, tol: f64) -> Result<f64> {
        check_s(s)?;
        let v = derivative_cutoff(s, tol)?;
        let primes = self.primes_to(v)?;
        let mut acc = KahanSum::new();
        for &p in primes_upto(&primes, v) {
            acc.add(d2_term(s, p));
        }
        Ok(acc.value())
    }

    /// The truncated approximate product form
    ///   s log t_u + log(t_u/(t_v P_u))
    ///     + Σ_{p≤u} log(1 + p e^{-s/p}) + Σ_{u<p≤v} log(1 + p^{-1} e^{s/p}),
    /// comparable to log_w(s) up to O(1/log u) + O(s/(v log v)). Used for
    /// cross-validation.
    pub fn log_w_we(&self, s: f64, u: f64, v: f64) -> Result<f64> {
        if !(u >= 2.0) {
            return Err(Error::domain(format!("log_w_we requires u >= 2, got {u}")));
        }
        if !(u <= v) {
            return Err(Error::domain(format!("log_w_we requires u <= v, got u={u}, v={v}")));
        }
        if v < WE_MIN_CUTOFF_RATIO * s {
            return Err(Error::domain(format!(
                "log_w_we requires v >= {WE_MIN_CUTOFF_RATIO}·s, got v={v}, s={s}"
            )));
        }
        let primes = self.primes_to(v)?;
        let mut mert_u = KahanSum::new();
        let mut mert_rest = KahanSum::new();
        let mut theta_u = KahanSum::new();
        let mut sum_small = KahanSum::new();
        let mut sum_mid = KahanSum::new();
        for &p in primes_upto(&primes, v) {
            if p <= u {
                mert_u.add(-(-1.0 / p).ln_1p());
                theta_u.add(p.ln());
                sum_small.add(softplus(p.ln() - s / p));
            } else {
                mert_rest.add(-(-1.0 / p).ln_1p());
                sum_mid.add(softplus(s / p - p.ln()));
            }
        }
        // log(t_u / (t_v P_u)) = -mert_rest - theta_u
        Ok(s * mert_u.value() - mert_rest.value() - theta_u.value()
            + sum_small.value()
            + sum_mid.value())
    }
}

/// Solve z log z = s by Newton's method (z ≥ e for s ≥ e).
pub fn solve_z(s: f64) -> Result<f64> {
    if !(s >= std::f64::consts::E) {
        return Err(Error::domain(format!("solve_z requires s >= e, got {s}")));
    }
    let mut z = s / s.ln().max(1.0);
    if z < std::f64::consts::E {
        z = std::f64::consts::E;
    }
    for _ in 0..60 {
        let f = z * z.ln() - s;
        let step = f / (z.ln() + 1.0);
        let next = z - step;
        let next = if next < std::f64::consts::E * 0.5 {
            std::f64::consts::E * 0.5
        } else {
            next
        };
        if (next - z).abs() <= 1e-12 * z {
            return Ok(next);
        }
        z = next;
    }
    Err(Error::internal(format!("z log z = {s} did not converge")))
}

/// The order-m expansion of log W(s):
///   z log z · log(e^γ log z) - z + z Σ_{j=2}^m b_j/(log z)^j,
/// with z log z = s.
pub fn log_w_wz(s: f64, m: usize, coeffs: &CoefficientSet) -> Result<f64> {
    if !(s >= std::f64::consts::E) {
        return Err(Error::domain(format!("log_w_wz requires s >= e, got {s}")));
    }
    if m < 2 || m > coeffs.m() {
        return Err(Error::domain(format!(
            "order m={m} outside available coefficient range 2..={}",
            coeffs.m()
        )));
    }
    let z = solve_z(s)?;
    let lz = z.ln();
    let mut val = z * lz * (EULER_GAMMA + lz.ln()) - z;
    let mut pow = lz * lz;
    for j in 2..=m {
        val += z * coeffs.b_f64(j) / pow;
        pow *= lz;
    }
    Ok(val)
}

/// Prefix of an ascending prime slice with entries ≤ bound.
fn primes_upto(primes: &[f64], bound: f64) -> &[f64] {
    &primes[..primes.partition_point(|&p| p <= bound)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::compute_chain;

    fn wf() -> WFunc {
        WFunc::new()
    }

    #[test]
    fn log_w_at_zero_is_exactly_zero() {
        let v = wf().log_w(0.0, 1e-9).unwrap();
        assert_eq!(v.value, 0.0);
        assert_eq!(v.tail_bound, 0.0);
        assert!(v.cutoff >= 2.0);
    }

    #[test]
    fn log_w_at_one_matches_direct_product_oracle() {
        // W(1) = Π (1 + 1/(p(p-1))): direct product over p ≤ 10^7 plus the
        // integral tail estimate ~ 1/(V log V).
        let mut oracle = KahanSum::new();
        for_each_prime_segment(10_000_000, 1 << 20, |seg| {
            for &p in seg {
                let p = p as f64;
                oracle.add((1.0 / (p * (p - 1.0))).ln_1p());
            }
        })
        .unwrap();
        let tail = 1.0 / (1e7 * 1e7_f64.ln());
        let got = wf().log_w(1.0, 1e-8).unwrap();
        assert!(
            (got.value - oracle.value()).abs() <= tail + 1e-8,
            "log_w(1) = {} vs oracle {}",
            got.value,
            oracle.value()
        );
        // known closed form log(ζ(2)ζ(3)/ζ(6))
        assert!((got.value - 0.6645400902595785).abs() < 1e-6);
    }

    #[test]
    fn large_s_no_overflow_and_regimes_agree_at_seam() {
        let v = wf().log_w(500.0, 2e-5).unwrap();
        assert!(v.value.is_finite());
        assert!((v.value - 983.0239089223629).abs() < 1e-6);
        // both regime formulas agree to machine precision where both are safe
        let table = crate::primes::sieve_primes(200_000).unwrap();
        for &p in table.primes() {
            let p = p as f64;
            let a = -500.0 * (-1.0 / p).ln_1p();
            if (10.0..60.0).contains(&a) {
                let small = (a.exp_m1() / p).ln_1p();
                let large = a - p.ln() + ((p - 1.0) * (-a).exp()).ln_1p();
                assert!((small - large).abs() <= 1e-12 * small.abs());
            }
        }
    }

    #[test]
    fn tail_bound_dominates_cutoff_doubling() {
        let w = wf();
        for &s in &[1.0, 10.0, 300.0] {
            let a = w.log_w(s, 1e-4).unwrap();
            let b = w.log_w(s, a.tail_bound * 0.49).unwrap(); // forces cutoff >= 2x
            assert!(b.cutoff >= 2.0 * a.cutoff * 0.99);
            assert!(
                (b.value - a.value).abs() <= a.tail_bound,
                "s={s}: change {} vs bound {}",
                (b.value - a.value).abs(),
                a.tail_bound
            );
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let w = wf();
        let h = 1e-3;
        for &s in &[5.0, 50.0, 500.0] {
            let d = w.log_w_d1(s, 2e-7).unwrap();
            let fp = w.log_w(s + h, 1e-6).unwrap().value;
            let fm = w.log_w(s - h, 1e-6).unwrap().value;
            let fd = (fp - fm) / (2.0 * h);
            assert!(
                (fd - d).abs() <= 1e-6 * d.abs(),
                "s={s}: analytic {d} vs fd {fd}"
            );
        }
    }

    #[test]
    fn derivatives_positive_and_g2_has_the_right_scale() {
        let w = wf();
        for &s in &[1.0, 10.0, 100.0, 1000.0] {
            assert!(w.log_w_d1(s, 1e-7).unwrap() > 0.0);
            let g2 = w.log_w_d2(s, 1e-7).unwrap();
            assert!(g2 > 0.0);
            if s >= 10.0 {
                let scaled = g2 * s * s.ln();
                assert!(
                    (0.05..20.0).contains(&scaled),
                    "g''·s·log s = {scaled} at s={s}"
                );
            }
        }
    }

    #[test]
    fn we_form_cross_validates() {
        let w = wf();
        let u = 200.0f64;
        let s = u * u.ln();
        let we = w.log_w_we(s, u, 4.0 * s).unwrap();
        let exact = w.log_w(s, 1e-5).unwrap().value;
        let rel = (we - exact).abs() / exact.abs().max(1.0);
        assert!(rel <= 0.05, "relative deviation {rel}");
        // the approximation stays within tolerance across split points
        for &u in &[50.0, 800.0] {
            let we = w.log_w_we(s, u, 4.0 * s).unwrap();
            let rel = (we - exact).abs() / exact.abs().max(1.0);
            assert!(rel <= 0.05, "u={u}: relative deviation {rel}");
        }
    }

    #[test]
    fn we_with_equal_cutoffs_drops_second_sum() {
        let w = wf();
        // v = u: the middle range is empty; compare against the u < v value
        // with the second sum manually removed is equivalent to summing only
        // p <= u terms.
        let s = 40.0;
        let got = w.log_w_we(s, 100.0, 100.0).unwrap();
        let table = crate::primes::sieve_primes(100).unwrap();
        let mut expect = 0.0;
        for &p in table.primes() {
            let p = p as f64;
            expect += softplus(p.ln() - s / p);
            expect += s * -(-1.0 / p).ln_1p() + 0.0 - p.ln();
        }
        // log(t_u/(t_v P_u)) with u = v collapses to -theta_u
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
    }

    #[test]
    fn we_domain_errors() {
        let w = wf();
        assert!(matches!(w.log_w_we(5.0, 1.0, 10.0), Err(Error::Domain(_))));
        assert!(matches!(w.log_w_we(5.0, 20.0, 10.0), Err(Error::Domain(_))));
        assert!(matches!(
            w.log_w_we(1e6, 100.0, 200.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn solve_z_fixed_points_and_monotonicity() {
        let e = std::f64::consts::E;
        assert!((solve_z(e).unwrap() - e).abs() < 1e-12);
        let mut last = 0.0;
        for &s in &[3.0, 10.0, 100.0, 1e4, 1e6] {
            let z = solve_z(s).unwrap();
            assert!((z * z.ln() - s).abs() <= 1e-9 * s);
            assert!(z > last);
            last = z;
        }
        assert!(matches!(solve_z(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn wz_expansion_tracks_log_w() {
        let coeffs = compute_chain(4).unwrap();
        let w = wf();
        let s = 1e4;
        let z = solve_z(s).unwrap();
        let lz = z.ln();
        let exact = w.log_w(s, 1e-4).unwrap().value;
        let wz = log_w_wz(s, 4, &coeffs).unwrap();
        // desk-scale normalized residual; frozen from first calibration
        let normalized = (exact - wz).abs() * lz.powi(5) / z;
        assert!(normalized <= 2000.0, "normalized residual {normalized}");
        // the m=2 and m=4 truncations differ by exactly z(b_3/lz³ + b_4/lz⁴)
        let wz2 = log_w_wz(s, 2, &coeffs).unwrap();
        let gap = z * (coeffs.b_f64(3) / lz.powi(3) + coeffs.b_f64(4) / lz.powi(4));
        assert!(((wz - wz2) - gap).abs() < 1e-9 * gap.abs());
    }

    #[test]
    fn wz_domain_errors() {
        let coeffs = compute_chain(4).unwrap();
        assert!(matches!(log_w_wz(1.0, 4, &coeffs), Err(Error::Domain(_))));
        assert!(matches!(log_w_wz(10.0, 5, &coeffs), Err(Error::Domain(_))));
        assert!(matches!(log_w_wz(10.0, 1, &coeffs), Err(Error::Domain(_))));
    }

    #[test]
    fn g_identity_increasing_convex() {
        let w = wf();
        // g(0) = 0; strictly increasing values; strict convexity via d2 > 0
        let mut last = 0.0;
        for &s in &[0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = w.log_w(s, 1e-8).unwrap().value;
            assert!(v > last);
            last = v;
        }
    }
}
