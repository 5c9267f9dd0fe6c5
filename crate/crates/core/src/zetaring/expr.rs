use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::{Error, Result, EULER_GAMMA};

/// A monomial in the constant ring: an (even) power of π times a multiset of
/// odd zeta values ζ(r), r ≥ 3 odd, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub pi_pow: u32,
    pub zetas: Vec<u32>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial {
            pi_pow: 0,
            zetas: Vec::new(),
        }
    }

    pub fn pi(pow: u32) -> Self {
        debug_assert!(pow % 2 == 0, "pi powers are always even here");
        Monomial {
            pi_pow: pow,
            zetas: Vec::new(),
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut zetas = self.zetas.clone();
        zetas.extend_from_slice(&other.zetas);
        zetas.sort_unstable();
        Monomial {
            pi_pow: self.pi_pow + other.pi_pow,
            zetas,
        }
    }

    fn is_unit(&self) -> bool {
        self.pi_pow == 0 && self.zetas.is_empty()
    }
}

/// Exact element of the coefficient ring: a rational linear combination of
/// monomials in π and odd zeta values, with an e^γ exponent tag.
///
/// Canonical form: no zero coefficients are stored, and every even zeta value
/// has been rewritten as a rational multiple of a π power, so equality is
/// term-map equality. The zero element has `gamma_pow == 0`.
///
/// Addition of two nonzero elements with different `gamma_pow` has no
/// representation in this ring and panics; the coefficient pipeline never
/// mixes gamma weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaExpr {
    terms: BTreeMap<Monomial, BigRational>,
    gamma_pow: u32,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        ZetaExpr {
            terms: BTreeMap::new(),
            gamma_pow: 0,
        }
    }

    pub fn one() -> Self {
        ZetaExpr::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::unit(), r);
        }
        ZetaExpr {
            terms,
            gamma_pow: 0,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        ZetaExpr::from_rational(BigRational::from_integer(n.into()))
    }

    /// c · π^pow (pow even).
    pub fn pi_power(pow: u32, coef: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(Monomial::pi(pow), coef);
        }
        ZetaExpr {
            terms,
            gamma_pow: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn gamma_pow(&self) -> u32 {
        self.gamma_pow
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Multiply by e^{jγ}. Tags the whole element; a_j = -c_j e^{jγ} is then
    /// a single ring element.
    pub fn with_gamma_pow(mut self, pow: u32) -> Self {
        if !self.terms.is_empty() {
            self.gamma_pow = pow;
        }
        self
    }

    pub fn mul_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return ZetaExpr::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c * r))
            .collect();
        ZetaExpr {
            terms,
            gamma_pow: self.gamma_pow,
        }
    }

    pub fn div_integer(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        self.mul_rational(&BigRational::new(BigInt::one(), n.into()))
    }

    fn add_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Full-precision numeric value (uses π, ζ(odd), γ as f64 constants).
    pub fn eval_f64(&self) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().unwrap_or_else(|| {
                // extremely large rationals: go through a string round-trip
                format!("{}", c.numer()).parse::<f64>().unwrap()
                    / format!("{}", c.denom()).parse::<f64>().unwrap()
            });
            v *= std::f64::consts::PI.powi(m.pi_pow as i32);
            for &r in &m.zetas {
                v *= zeta_f64(r);
            }
            acc += v;
        }
        acc * (self.gamma_pow as f64 * EULER_GAMMA).exp()
    }

    /// Numeric value rounded to `precision` significant decimal digits
    /// (1 ≤ precision ≤ 17).
    pub fn numeric_eval(&self, precision: u32) -> Result<f64> {
        if !(1..=17).contains(&precision) {
            return Err(Error::domain(format!(
                "precision must be between 1 and 17 significant digits, got {precision}"
            )));
        }
        let v = self.eval_f64();
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(format!("{:.*e}", precision as usize - 1, v)
            .parse::<f64>()
            .unwrap())
    }

    /// Canonical text form, e.g. `-(1/6)*pi^2*egamma^2`.
    pub fn canonical_text(&self) -> String {
        format!("{self}")
    }
}

impl Add for &ZetaExpr {
    type Output = ZetaExpr;

    fn add(self, rhs: &ZetaExpr) -> ZetaExpr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.gamma_pow, rhs.gamma_pow,
            "cannot add ring elements with different e^gamma exponents"
        );
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            ZetaExpr::add_term(&mut terms, m.clone(), c.clone());
        }
        let gamma_pow = if terms.is_empty() { 0 } else { self.gamma_pow };
        ZetaExpr { terms, gamma_pow }
    }
}

impl Add for ZetaExpr {
    type Output = ZetaExpr;
    fn add(self, rhs: ZetaExpr) -> ZetaExpr {
        &self + &rhs
    }
}

impl Neg for &ZetaExpr {
    type Output = ZetaExpr;
    fn neg(self) -> ZetaExpr {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        ZetaExpr {
            terms,
            gamma_pow: self.gamma_pow,
        }
    }
}

impl Neg for ZetaExpr {
    type Output = ZetaExpr;
    fn neg(self) -> ZetaExpr {
        -&self
    }
}

impl Sub for &ZetaExpr {
    type Output = ZetaExpr;
    fn sub(self, rhs: &ZetaExpr) -> ZetaExpr {
        self + &(-rhs)
    }
}

impl Sub for ZetaExpr {
    type Output = ZetaExpr;
    fn sub(self, rhs: ZetaExpr) -> ZetaExpr {
        &self - &rhs
    }
}

impl Mul for &ZetaExpr {
    type Output = ZetaExpr;

    fn mul(self, rhs: &ZetaExpr) -> ZetaExpr {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                ZetaExpr::add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        let gamma_pow = if terms.is_empty() {
            0
        } else {
            self.gamma_pow + rhs.gamma_pow
        };
        ZetaExpr { terms, gamma_pow }
    }
}

impl Mul for ZetaExpr {
    type Output = ZetaExpr;
    fn mul(self, rhs: ZetaExpr) -> ZetaExpr {
        &self * &rhs
    }
}

/// Exact Bernoulli numbers B_0, B_1, …, B_n (B_1 = -1/2 convention).
fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for (j, bj) in b.iter().enumerate() {
            if j > 0 {
                // C(m+1, j) = C(m+1, j-1) * (m+2-j) / j
                binom = &binom * BigInt::from(m + 2 - j) / BigInt::from(j);
            }
            acc += BigRational::from_integer(binom.clone()) * bj;
        }
        b.push(-acc / BigRational::from_integer((m as i64 + 1).into()));
    }
    b
}

/// ζ(r) as an exact ring element.
///
/// Even r collapses to a rational multiple of π^r:
/// ζ(2n) = (-1)^{n+1} B_{2n} (2π)^{2n} / (2 (2n)!). Odd r ≥ 3 stays an
/// opaque generator (no relations are known, none are applied).
pub fn zeta_value(r: u32) -> Result<ZetaExpr> {
    if r < 2 {
        return Err(Error::domain(format!("zeta_value requires r >= 2, got {r}")));
    }
    if r % 2 == 0 {
        let n = (r / 2) as usize;
        let b = bernoulli_numbers(2 * n);
        let mut coef = b[2 * n].clone();
        if n % 2 == 0 {
            coef = -coef;
        }
        // (2π)^{2n} / (2 (2n)!) — the 2^{2n} goes into the rational part
        let mut pow2 = BigInt::one();
        let mut fact = BigInt::one();
        for i in 1..=(2 * n) {
            pow2 *= 2;
            fact *= BigInt::from(i);
        }
        coef = coef * BigRational::new(pow2, fact * BigInt::from(2));
        Ok(ZetaExpr::pi_power(r, coef))
    } else {
        let mut terms = BTreeMap::new();
        terms.insert(
            Monomial {
                pi_pow: 0,
                zetas: vec![r],
            },
            BigRational::one(),
        );
        Ok(ZetaExpr {
            terms,
            gamma_pow: 0,
        })
    }
}

/// The Dirichlet eta value η(r) = Σ_{k≥1} (-1)^{k+1} k^{-r} = (1 - 2^{1-r}) ζ(r),
/// in canonical form. Alternating sums of pure 1/k^r collapse to these.
pub fn eta_value(r: u32) -> Result<ZetaExpr> {
    if r < 2 {
        return Err(Error::domain(format!("eta_value requires r >= 2, got {r}")));
    }
    // 1 - 2^{1-r} = (2^{r-1} - 1) / 2^{r-1}
    let mut pow = BigInt::one();
    for _ in 0..(r - 1) {
        pow *= 2;
    }
    let factor = BigRational::new(&pow - BigInt::one(), pow);
    Ok(zeta_value(r)?.mul_rational(&factor))
}

/// ζ(r) as f64 by Euler–Maclaurin; accurate to full double precision for r ≥ 2.
pub(crate) fn zeta_f64(r: u32) -> f64 {
    let rf = r as f64;
    const K: u64 = 1000;
    let mut sum = 0.0;
    for k in (1..=K).rev() {
        sum += (k as f64).powi(-(r as i32));
    }
    let kf = K as f64;
    sum += kf.powf(1.0 - rf) / (rf - 1.0);
    sum -= 0.5 * kf.powf(-rf);
    sum += rf / 12.0 * kf.powf(-rf - 1.0);
    sum -= rf * (rf + 1.0) * (rf + 2.0) / 720.0 * kf.powf(-rf - 3.0);
    sum
}

// --- rendering -------------------------------------------------------------

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut parts = Vec::new();
    if m.pi_pow > 0 {
        parts.push(format!("pi^{}", m.pi_pow));
    }
    let mut i = 0;
    while i < m.zetas.len() {
        let r = m.zetas[i];
        let mut e = 1;
        while i + e < m.zetas.len() && m.zetas[i + e] == r {
            e += 1;
        }
        if e == 1 {
            parts.push(format!("zeta({r})"));
        } else {
            parts.push(format!("zeta({r})^{e}"));
        }
        i += e;
    }
    parts
}

/// Single-term style: `-(1/6)*pi^2*egamma^2`, `(3/4)*zeta(3)`, `pi^2`.
fn render_single(m: &Monomial, c: &BigRational, gamma_pow: u32) -> String {
    let neg = c.is_negative();
    let a = c.abs();
    let mut parts: Vec<String> = Vec::new();
    let coef_is_one = a.is_one();
    if !coef_is_one || (m.is_unit() && gamma_pow == 0) {
        if a.denom().is_one() {
            parts.push(format!("{}", a.numer()));
        } else {
            parts.push(format!("({a})"));
        }
    }
    parts.extend(monomial_factors(m));
    if gamma_pow == 1 {
        parts.push("egamma".to_string());
    } else if gamma_pow > 1 {
        parts.push(format!("egamma^{gamma_pow}"));
    }
    let body = parts.join("*");
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Sum-term style used inside multi-term sums: `pi^2/6`, `37*pi^4/360`,
/// `3*zeta(3)/2`.
fn render_sum_term(m: &Monomial, c: &BigRational) -> String {
    let a = c.abs();
    let factors = monomial_factors(m);
    let mut body = if a.numer().is_one() && !factors.is_empty() {
        factors.join("*")
    } else if factors.is_empty() {
        format!("{}", a.numer())
    } else {
        format!("{}*{}", a.numer(), factors.join("*"))
    };
    if !a.denom().is_one() {
        body = format!("{body}/{}", a.denom());
    }
    body
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return write!(f, "{}", render_single(m, c, self.gamma_pow));
        }
        let all_negative = self.terms.values().all(|c| c.is_negative());
        let mut body = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let term = render_sum_term(m, c);
            if i == 0 {
                if !all_negative && c.is_negative() {
                    body.push('-');
                }
                body.push_str(&term);
            } else {
                let neg = c.is_negative() && !all_negative;
                body.push_str(if neg { " - " } else { " + " });
                body.push_str(&term);
            }
        }
        let need_paren = self.gamma_pow > 0 || all_negative;
        let wrapped = if need_paren { format!("({body})") } else { body };
        let signed = if all_negative {
            format!("-{wrapped}")
        } else {
            wrapped
        };
        if self.gamma_pow == 0 {
            write!(f, "{signed}")
        } else if self.gamma_pow == 1 {
            write!(f, "{signed}*egamma")
        } else {
            write!(f, "{signed}*egamma^{}", self.gamma_pow)
        }
    }
}

impl Serialize for ZetaExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Term<'a> {
            pi: u32,
            zeta: &'a [u32],
            coef: String,
        }
        let terms: Vec<Term<'_>> = self
            .terms
            .iter()
            .map(|(m, c)| Term {
                pi: m.pi_pow,
                zeta: &m.zetas,
                coef: format!("{c}"),
            })
            .collect();
        let mut st = serializer.serialize_struct("ZetaExpr", 2)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("gamma", &self.gamma_pow)?;
        st.end()
    }
}
