//! The symbolic coefficient pipeline.
//!
//! Two integration-by-parts recursions generate the rational functions
//! q_j(k), r_j(k); alternating sums over k collapse them into exact ring
//! elements b_j; and a chain of series manipulations (α → β → δ → η → λ → μ)
//! turns the b_j into the c_j and finally a_j = -c_j e^{jγ}, the coefficients
//! of the order-m tail expansion.
//!
//! Everything here is exact. The only floating point is the optional numeric
//! cross-check/fallback for the alternating sums.

use num_rational::BigRational;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::zetaring::{eta_value, FormalSeries, Poly, RationalFunc, ZetaExpr};
use crate::{Error, Result};

/// All coefficient families through order m.
///
/// Index convention: `q, r, theta, rho, b, beta, delta, eta_chain, lambda,
/// mu, c, a` hold entries j = 2..=m; `alpha` holds j = 2..=m+1.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    m: usize,
    q: Vec<RationalFunc>,
    r: Vec<RationalFunc>,
    theta: Vec<ZetaExpr>,
    rho: Vec<ZetaExpr>,
    b: Vec<ZetaExpr>,
    alpha: Vec<ZetaExpr>,
    beta: Vec<ZetaExpr>,
    delta: Vec<ZetaExpr>,
    eta_chain: Vec<ZetaExpr>,
    lambda: Vec<ZetaExpr>,
    mu: Vec<ZetaExpr>,
    c: Vec<ZetaExpr>,
    a: Vec<ZetaExpr>,
}

macro_rules! indexed_getter {
    ($name:ident) => {
        /// Entry at subscript j (2-based, per the family's index range).
        pub fn $name(&self, j: usize) -> &ZetaExpr {
            &self.$name[j - 2]
        }
    };
}

impl CoefficientSet {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self, j: usize) -> &RationalFunc {
        &self.q[j - 2]
    }

    pub fn r(&self, j: usize) -> &RationalFunc {
        &self.r[j - 2]
    }

    indexed_getter!(theta);
    indexed_getter!(rho);
    indexed_getter!(b);
    indexed_getter!(alpha);
    indexed_getter!(beta);
    indexed_getter!(delta);
    indexed_getter!(eta_chain);
    indexed_getter!(lambda);
    indexed_getter!(mu);
    indexed_getter!(c);
    indexed_getter!(a);

    /// Numeric b_j (for the Lemma Wz evaluator).
    pub fn b_f64(&self, j: usize) -> f64 {
        self.b(j).eval_f64()
    }

    /// Numeric a_j (includes the e^{jγ} factor).
    pub fn a_f64(&self, j: usize) -> f64 {
        self.a(j).eval_f64()
    }

    /// SHA-256 of the canonical JSON serialization, abbreviated.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("coefficient set serializes");
        let digest = Sha256::digest(json.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        hex[..16].to_string()
    }
}

impl Serialize for CoefficientSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        fn texts<T: std::fmt::Display>(v: &[T]) -> Vec<String> {
            v.iter().map(|x| x.to_string()).collect()
        }
        let mut st = serializer.serialize_struct("CoefficientSet", 14)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("q", &texts(&self.q))?;
        st.serialize_field("r", &texts(&self.r))?;
        st.serialize_field("theta", &texts(&self.theta))?;
        st.serialize_field("rho", &texts(&self.rho))?;
        st.serialize_field("b", &texts(&self.b))?;
        st.serialize_field("alpha", &texts(&self.alpha))?;
        st.serialize_field("beta", &texts(&self.beta))?;
        st.serialize_field("delta", &texts(&self.delta))?;
        st.serialize_field("eta_chain", &texts(&self.eta_chain))?;
        st.serialize_field("lambda", &texts(&self.lambda))?;
        st.serialize_field("mu", &texts(&self.mu))?;
        st.serialize_field("c", &texts(&self.c))?;
        st.serialize_field("a", &texts(&self.a))?;
        st.end()
    }
}

enum RecursionKind {
    /// I_k(a,b) with a = k + depth; children pick up -(a+2)/(sk) and +b/(sk).
    I,
    /// J_k(a,b) with a = k - depth; children pick up +(2-a)/(sk) and -b/(sk).
    J,
}

/// Run one of the two integration-by-parts recursions, collecting the
/// coefficient of z/(log z)^j for j = 2..=m.
///
/// State: pending terms (depth d, log-power b, rational-function prefactor);
/// each carries an implicit 1/s^d which, with s = z log z, contributes
/// z^{-d} (log z)^{-d}. Applying the recursion to a pending term emits its
/// boundary value into slot j = d + b + 1 and spawns two children at depth
/// d+1. Terms whose minimal reachable j exceeds m are dropped, mirroring the
/// O_m remainder truncation; after m-1 rounds nothing is pending.
fn run_recursion(m: usize, kind: RecursionKind) -> Vec<RationalFunc> {
    let mut out = vec![RationalFunc::zero(); m - 1]; // j = 2..=m
    let mut pending: Vec<(usize, usize, RationalFunc)> =
        vec![(0, 1, RationalFunc::from_poly(Poly::one()))];
    while !pending.is_empty() {
        let mut next = Vec::new();
        for (d, b, coef) in pending {
            let j = d + b + 1;
            if j <= m {
                let boundary = coef.div_k();
                out[j - 2] = out[j - 2].add(&boundary);
            }
            // children: factors are rational functions of k over k
            let (child_a, child_b) = match kind {
                RecursionKind::I => {
                    // a = k + d: -(a+2)/k and +b/k
                    let lin = Poly::from_integers(&[-(d as i64) - 2, -1]);
                    (
                        coef.mul_poly(&lin).div_k(),
                        coef.mul_rational(&BigRational::from_integer((b as i64).into()))
                            .div_k(),
                    )
                }
                RecursionKind::J => {
                    // a = k - d: (2-a)/k = (2+d-k)/k and -b/k
                    let lin = Poly::from_integers(&[(d as i64) + 2, -1]);
                    (
                        coef.mul_poly(&lin).div_k(),
                        coef.mul_rational(&BigRational::from_integer((-(b as i64)).into()))
                            .div_k(),
                    )
                }
            };
            if (d + 1) + b + 1 <= m {
                next.push((d + 1, b, child_a));
            }
            if (d + 1) + (b + 1) + 1 <= m {
                next.push((d + 1, b + 1, child_b));
            }
        }
        pending = next;
    }
    out
}

/// q_j(k) for j = 2..=m, from the first-integral recursion.
pub fn compute_qj(m: usize) -> Result<Vec<RationalFunc>> {
    if m < 2 {
        return Err(Error::domain(format!("order m must be >= 2, got {m}")));
    }
    Ok(run_recursion(m, RecursionKind::I))
}

/// r_j(k) for j = 2..=m, from the second-integral recursion.
pub fn compute_rj(m: usize) -> Result<Vec<RationalFunc>> {
    if m < 2 {
        return Err(Error::domain(format!("order m must be >= 2, got {m}")));
    }
    Ok(run_recursion(m, RecursionKind::J))
}

/// Σ_{k≥1} (-1)^{k+1} f(k) for f with a pure k-power denominator and
/// O(1/k²) decay: partial fractions map each c/k^ν to c·η(ν).
fn alternating_sum_symbolic(f: &RationalFunc) -> Result<ZetaExpr> {
    let mut acc = ZetaExpr::zero();
    for (nu, c) in f.partial_fractions_pure_k()? {
        if nu < 2 {
            return Err(Error::Pipeline {
                message: format!("alternating sum term 1/k^{nu} does not converge fast enough"),
                offending: Box::new(f.clone()),
            });
        }
        acc = acc + eta_value(nu as u32)?.mul_rational(&c);
    }
    Ok(acc)
}

/// Numeric Σ_{k≥1} (-1)^{k+1} f(k) by repeated averaging of partial sums
/// (van Wijngaarden style). For smooth O(1/k²) terms this reaches ~1e-13
/// with a few thousand terms. This is the cross-check / fallback route;
/// the pipeline itself is symbolic.
pub fn alternating_sum_numeric(f: impl Fn(f64) -> f64) -> f64 {
    const K0: u64 = 2_000;
    const LEVELS: usize = 24;
    let sign = |k: u64| if k % 2 == 1 { 1.0 } else { -1.0 };
    let mut s = 0.0;
    for k in 1..K0 {
        s += sign(k) * f(k as f64);
    }
    // partial sums S_{K0}, S_{K0+1}, …, repeatedly averaged
    let mut row: Vec<f64> = Vec::with_capacity(LEVELS + 1);
    for i in 0..=LEVELS {
        let k = K0 + i as u64;
        s += sign(k) * f(k as f64);
        row.push(s);
    }
    for _ in 0..LEVELS {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}

/// b_j = θ_j + ρ_j for j = 2..=m, exactly.
pub fn compute_b(m: usize) -> Result<Vec<ZetaExpr>> {
    let q = compute_qj(m)?;
    let r = compute_rj(m)?;
    let mut out = Vec::with_capacity(m - 1);
    for j in 0..q.len() {
        let theta = alternating_sum_symbolic(&q[j].div_k())?;
        let rho = alternating_sum_symbolic(&r[j].div_k())?;
        out.push(theta + rho);
    }
    Ok(out)
}

/// Run the full pipeline through order m.
pub fn compute_chain(m: usize) -> Result<CoefficientSet> {
    if m < 2 {
        return Err(Error::domain(format!("order m must be >= 2, got {m}")));
    }
    let q = compute_qj(m)?;
    let r = compute_rj(m)?;
    let mut theta = Vec::with_capacity(m - 1);
    let mut rho = Vec::with_capacity(m - 1);
    let mut b = Vec::with_capacity(m - 1);
    for j in 0..q.len() {
        let th = alternating_sum_symbolic(&q[j].div_k())?;
        let rh = alternating_sum_symbolic(&r[j].div_k())?;
        b.push(&th + &rh);
        theta.push(th);
        rho.push(rh);
    }
    let b_at = |j: usize| -> &ZetaExpr { &b[j - 2] };

    // α_2 = b_2; α_k = b_k - (k-1) b_{k-1} for k = 3..=m; α_{m+1} = -m b_m.
    // The k = 3..=m range includes k = m (the displayed α_4 at m = 4 uses it).
    let mut alpha: Vec<ZetaExpr> = Vec::with_capacity(m);
    alpha.push(b_at(2).clone());
    for k in 3..=m {
        let prev = b_at(k - 1).mul_rational(&BigRational::from_integer(((k - 1) as i64).into()));
        alpha.push(b_at(k) - &prev);
    }
    alpha.push(b_at(m).mul_rational(&BigRational::from_integer((-(m as i64)).into())));

    // β_2 = α_2; β_k = α_k - β_{k-1} for k = 3..=m (α_{m+1} does not enter).
    let mut beta: Vec<ZetaExpr> = Vec::with_capacity(m - 1);
    beta.push(alpha[0].clone());
    for k in 3..=m {
        let prev = beta[k - 3].clone();
        beta.push(&alpha[k - 2] - &prev);
    }

    // δ: exp(Σ_{k=2}^m β_k ε^{k+1}); δ_k = [ε^{k+1}], k = 2..=m.
    let guard = m + 2; // reversion below needs two orders of slack
    let mut exp_arg = FormalSeries::zero(guard);
    for k in 2..=m {
        exp_arg.set_coeff(k + 1, beta[k - 2].clone());
    }
    let delta_series = exp_arg.exp()?;
    let delta: Vec<ZetaExpr> = (2..=m).map(|k| delta_series.coeff(k + 1).clone()).collect();

    // η via series reversion: with u = 1/log z, w = 1/log y,
    //   w = F(u) = u · (1 + Σ δ_k u^{k+1})^{-1},
    // exact through u^{m+2} because the truncation error sits inside the
    // parenthesis. G = F^{-1} gives u = G(w), and
    //   w / G(w) = 1 + Σ η_k w^{k+1}.
    let mut one_plus_delta = FormalSeries::one(guard);
    for k in 2..=m {
        one_plus_delta.set_coeff(k + 1, delta[k - 2].clone());
    }
    let f_series = FormalSeries::identity(guard).mul(&one_plus_delta.inverse()?)?;
    let g_series = f_series.revert()?;
    // h(w) = G(w)/w (constant term 1, known through w^{m+1})
    let mut h = FormalSeries::zero(m + 1);
    for n in 0..=m + 1 {
        h.set_coeff(n, g_series.coeff(n + 1).clone());
    }
    let winv = h.inverse()?;
    let eta_chain: Vec<ZetaExpr> = (2..=m).map(|k| winv.coeff(k + 1).clone()).collect();

    // λ: exp(Σ η_k w^k); λ_k = [w^k].
    let mut lam_arg = FormalSeries::zero(m);
    for k in 2..=m {
        lam_arg.set_coeff(k, eta_chain[k - 2].clone());
    }
    let lam_series = lam_arg.exp()?;
    let lambda: Vec<ZetaExpr> = (2..=m).map(|k| lam_series.coeff(k).clone()).collect();

    // μ: re-expand Σ_k (b_k - β_k)(log z)^{-k} in powers of w = 1/log y.
    // 1/log z = S(w) = w · (1 + Σ η_j w^{j+1})^{-1}; μ_j = [w^j] Σ (b_k-β_k) S^k.
    let mut one_plus_eta = FormalSeries::one(m);
    for j in 2..=m {
        if j + 1 <= m {
            one_plus_eta.set_coeff(j + 1, eta_chain[j - 2].clone());
        }
    }
    let s_series = FormalSeries::identity(m).mul(&one_plus_eta.inverse()?)?;
    let mut mu_series = FormalSeries::zero(m);
    let mut s_pow = FormalSeries::one(m);
    for k in 1..=m {
        s_pow = s_pow.mul(&s_series)?;
        if k >= 2 {
            let bmb = b_at(k) - &beta[k - 2];
            mu_series = mu_series.add(&s_pow.mul_expr(&bmb))?;
        }
    }
    let mu: Vec<ZetaExpr> = (2..=m).map(|k| mu_series.coeff(k).clone()).collect();

    // Internal consistency: μ_2 = b_2 - β_2 = 0 identically.
    if !mu[0].is_zero() {
        return Err(Error::internal(format!(
            "mu_2 must vanish identically, got {}",
            mu[0]
        )));
    }

    // c: (1 + Σ λ_k w^k)(-1 + Σ μ_k w^k) = -1 + Σ_{k≥2} c_k w^k.
    let mut lam_full = FormalSeries::one(m);
    for k in 2..=m {
        lam_full.set_coeff(k, lambda[k - 2].clone());
    }
    let mut mu_full = FormalSeries::zero(m);
    mu_full.set_coeff(0, ZetaExpr::from_integer(-1));
    for k in 2..=m {
        mu_full.set_coeff(k, mu[k - 2].clone());
    }
    let prod = lam_full.mul(&mu_full)?;
    if *prod.coeff(0) != ZetaExpr::from_integer(-1) || !prod.coeff(1).is_zero() {
        return Err(Error::internal(
            "final product must be -1 + 0·w + Σ c_k w^k".to_string(),
        ));
    }
    let c: Vec<ZetaExpr> = (2..=m).map(|k| prod.coeff(k).clone()).collect();

    // a_j = -c_j e^{jγ}
    let a: Vec<ZetaExpr> = c
        .iter()
        .enumerate()
        .map(|(i, cj)| (-cj).with_gamma_pow((i + 2) as u32))
        .collect();

    Ok(CoefficientSet {
        m,
        q,
        r,
        theta,
        rho,
        b,
        alpha,
        beta,
        delta,
        eta_chain,
        lambda,
        mu,
        c,
        a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zetaring::zeta_value;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pi2(n: i64, d: i64) -> ZetaExpr {
        ZetaExpr::pi_power(2, rat(n, d))
    }

    fn pi4(n: i64, d: i64) -> ZetaExpr {
        ZetaExpr::pi_power(4, rat(n, d))
    }

    fn pi6(n: i64, d: i64) -> ZetaExpr {
        ZetaExpr::pi_power(6, rat(n, d))
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunc {
        RationalFunc::new(Poly::from_integers(num), Poly::from_integers(den)).unwrap()
    }

    #[test]
    fn q_values_match_displayed_forms() {
        let q = compute_qj(4).unwrap();
        assert_eq!(q[0], rf(&[1], &[0, 1])); // 1/k
        assert_eq!(q[1], rf(&[-2, -1], &[0, 0, 1])); // -(k+2)/k^2
        assert_eq!(q[2], rf(&[6, 6, 1], &[0, 0, 0, 1])); // 1/k^2 + (k+2)(k+3)/k^3
    }

    #[test]
    fn r_values_match_displayed_forms() {
        let r = compute_rj(4).unwrap();
        assert_eq!(r[0], rf(&[1], &[0, 1])); // 1/k
        assert_eq!(r[1], rf(&[2, -1], &[0, 0, 1])); // (2-k)/k^2
        assert_eq!(r[2], rf(&[6, -6, 1], &[0, 0, 0, 1])); // (2-k)(3-k)/k^3 - 1/k^2
    }

    #[test]
    fn qr_decay_property_through_m8() {
        let q = compute_qj(8).unwrap();
        let r = compute_rj(8).unwrap();
        for f in q.iter().chain(r.iter()) {
            assert!(f.decays(), "not O(1/k): {f}");
        }
    }

    #[test]
    fn r_is_reflection_of_q() {
        // r_j(k) = -q_j(-k), a symmetry of the two recursions
        let q = compute_qj(6).unwrap();
        let r = compute_rj(6).unwrap();
        for (qj, rj) in q.iter().zip(&r) {
            for k in [1.0f64, 2.0, 3.5, 10.0] {
                assert!((rj.eval_f64(k) + qj.eval_f64(-k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn b_values_match_displayed_forms() {
        let b = compute_b(4).unwrap();
        assert_eq!(b[0], pi2(1, 6));
        assert_eq!(b[1], pi2(-1, 6));
        assert_eq!(b[2], pi2(1, 6) + pi4(7, 60));
    }

    #[test]
    fn b_matches_numeric_alternating_sums() {
        let q = compute_qj(5).unwrap();
        let r = compute_rj(5).unwrap();
        let b = compute_b(5).unwrap();
        for j in 0..b.len() {
            let qj = q[j].clone();
            let rj = r[j].clone();
            let numeric =
                alternating_sum_numeric(|k| (qj.eval_f64(k) + rj.eval_f64(k)) / k);
            assert!(
                (b[j].eval_f64() - numeric).abs() < 1e-10,
                "b_{} symbolic {} vs numeric {}",
                j + 2,
                b[j].eval_f64(),
                numeric
            );
        }
    }

    #[test]
    fn chain_m4_matches_displayed_values() {
        let ch = compute_chain(4).unwrap();
        // α
        assert_eq!(ch.alpha(2), &pi2(1, 6));
        assert_eq!(ch.alpha(3), &pi2(-1, 2));
        assert_eq!(ch.alpha(4), &(pi2(2, 3) + pi4(7, 60)));
        assert_eq!(ch.alpha(5), &(pi2(-2, 3) + pi4(-7, 15))); // -4 b_4
        // β
        assert_eq!(ch.beta(2), &pi2(1, 6));
        assert_eq!(ch.beta(3), &pi2(-2, 3));
        assert_eq!(ch.beta(4), &(pi2(4, 3) + pi4(7, 60)));
        // δ equals β through order 4
        assert_eq!(ch.delta(2), ch.beta(2));
        assert_eq!(ch.delta(3), ch.beta(3));
        assert_eq!(ch.delta(4), ch.beta(4));
        // η
        assert_eq!(ch.eta_chain(2), &pi2(-1, 6));
        assert_eq!(ch.eta_chain(3), &pi2(2, 3));
        assert_eq!(ch.eta_chain(4), &(pi2(-4, 3) + pi4(-7, 60)));
        // λ
        assert_eq!(ch.lambda(2), &pi2(-1, 6));
        assert_eq!(ch.lambda(3), &pi2(2, 3));
        assert_eq!(ch.lambda(4), &(pi2(-4, 3) + pi4(-37, 360)));
        // μ
        assert!(ch.mu(2).is_zero());
        assert_eq!(ch.mu(3), &pi2(1, 2));
        assert_eq!(ch.mu(4), &pi2(-7, 6));
        // c
        assert_eq!(ch.c(2), &pi2(1, 6));
        assert_eq!(ch.c(3), &pi2(-1, 6));
        assert_eq!(ch.c(4), &(pi2(1, 6) + pi4(37, 360)));
        // a_j = -c_j e^{jγ}
        assert_eq!(ch.a(2), &pi2(-1, 6).with_gamma_pow(2));
        assert_eq!(ch.a(3), &pi2(1, 6).with_gamma_pow(3));
        assert_eq!(ch.a(4), &(pi2(-1, 6) + pi4(-37, 360)).with_gamma_pow(4));
    }

    #[test]
    fn theta_and_rho_carry_odd_zetas_that_cancel_in_b() {
        let ch = compute_chain(4).unwrap();
        // θ_3 = -π²/12 - (3/2)ζ(3), ρ_3 = -π²/12 + (3/2)ζ(3)
        let z3 = zeta_value(3).unwrap();
        let theta3 = pi2(-1, 12) + z3.mul_rational(&rat(-3, 2));
        let rho3 = pi2(-1, 12) + z3.mul_rational(&rat(3, 2));
        assert_eq!(ch.theta(3), &theta3);
        assert_eq!(ch.rho(3), &rho3);
        assert_eq!(ch.b(3), &pi2(-1, 6));
    }

    #[test]
    fn chain_m5_extends_m4_without_changing_lower_orders() {
        let ch4 = compute_chain(4).unwrap();
        let ch5 = compute_chain(5).unwrap();
        for j in 2..=4 {
            assert_eq!(ch4.q(j), ch5.q(j));
            assert_eq!(ch4.r(j), ch5.r(j));
            assert_eq!(ch4.b(j), ch5.b(j));
            assert_eq!(ch4.beta(j), ch5.beta(j));
            assert_eq!(ch4.delta(j), ch5.delta(j));
            assert_eq!(ch4.eta_chain(j), ch5.eta_chain(j));
            assert_eq!(ch4.lambda(j), ch5.lambda(j));
            assert_eq!(ch4.mu(j), ch5.mu(j));
            assert_eq!(ch4.c(j), ch5.c(j));
            assert_eq!(ch4.a(j), ch5.a(j));
        }
        // α_k for k <= m agrees; the closing entry differs by construction
        for j in 2..=4 {
            assert_eq!(ch4.alpha(j), ch5.alpha(j));
        }
    }

    #[test]
    fn chain_m5_and_m6_values() {
        // independently derived with a computer algebra system
        let ch = compute_chain(6).unwrap();
        assert_eq!(ch.b(5), &(pi2(-1, 6) + pi4(-217, 360)));
        assert_eq!(ch.b(6), &(pi2(1, 6) + pi4(637, 360) + pi6(31, 126)));
        assert_eq!(ch.c(5), &(pi2(-1, 6) + pi4(-91, 180)));
        assert_eq!(ch.mu(5), &(pi2(2, 1) + pi4(7, 12)));
        assert_eq!(ch.lambda(5), &(pi2(13, 6) + pi4(181, 180)));
        assert_eq!(ch.eta_chain(5), &(pi2(13, 6) + pi4(67, 60)));
        // order-6 entries; these are sensitive to the reversion guard order
        assert_eq!(
            ch.eta_chain(6),
            &(pi2(-19, 6) + pi4(-1909, 360) + pi6(-31, 126))
        );
        assert_eq!(ch.mu(6), &(pi2(-3, 1) + pi4(-79, 20)));
        assert_eq!(
            ch.c(6),
            &(pi2(1, 6) + pi4(517, 360) + pi6(10313, 45360))
        );
        // numeric spot values
        assert!((ch.c(5).eval_f64() - (-50.890641200705014)).abs() < 1e-10);
        assert!((ch.a(5).eval_f64() - 912.1070520029003).abs() < 1e-9);
        assert!((ch.c(6).eval_f64() - 360.11560782079667).abs() < 1e-9);
        assert!((ch.a(6).eval_f64() - (-11495.593903890450)).abs() < 1e-7);
    }

    #[test]
    fn invariant_b_is_theta_plus_rho_and_a_is_minus_c_egamma() {
        let ch = compute_chain(6).unwrap();
        for j in 2..=6 {
            assert_eq!(ch.b(j), &(ch.theta(j) + ch.rho(j)));
            assert_eq!(ch.a(j), &(-ch.c(j)).with_gamma_pow(j as u32));
            assert_eq!(ch.a(j).gamma_pow(), j as u32);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(compute_chain(1), Err(Error::Domain(_))));
        assert!(matches!(compute_qj(0), Err(Error::Domain(_))));
    }

    #[test]
    fn content_hash_is_stable() {
        let a = compute_chain(4).unwrap().content_hash();
        let b = compute_chain(4).unwrap().content_hash();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
        assert_ne!(a, compute_chain(5).unwrap().content_hash());
    }

    #[test]
    fn alternating_sum_numeric_accuracy() {
        // Σ (-1)^{k+1} / k² = π²/12
        let v = alternating_sum_numeric(|k| 1.0 / (k * k));
        assert!((v - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-12);
    }
}
