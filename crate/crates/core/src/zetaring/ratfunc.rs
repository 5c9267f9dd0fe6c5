use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};

use crate::{Error, Result};

/// Polynomial in the summation index k with exact rational coefficients,
/// stored ascending with no trailing zeros (empty = zero polynomial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_integers(ascending: &[i64]) -> Self {
        Poly::from_coeffs(
            ascending
                .iter()
                .map(|&n| BigRational::from_integer(n.into()))
                .collect(),
        )
    }

    /// k^n
    pub fn k_power(n: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, r: &BigRational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Polynomial remainder of self by other (other nonzero).
    fn rem(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        let db = other.degree().expect("division by zero polynomial");
        let lb = other.leading();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let factor = r.leading() / &lb;
            let mut t = vec![BigRational::zero(); dr - db + 1];
            t[dr - db] = factor;
            r = r.sub(&other.mul(&Poly::from_coeffs(t)));
        }
        r
    }

    /// Exact division (panics if not exact).
    fn div_exact(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut r = self.clone();
        let db = other.degree().expect("division by zero polynomial");
        let lb = other.leading();
        let mut q = vec![BigRational::zero(); self.coeffs.len()];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let factor = r.leading() / &lb;
            q[dr - db] = factor.clone();
            let mut t = vec![BigRational::zero(); dr - db + 1];
            t[dr - db] = factor;
            r = r.sub(&other.mul(&Poly::from_coeffs(t)));
        }
        assert!(r.is_zero(), "polynomial division was not exact");
        Poly::from_coeffs(q)
    }

    /// Monic gcd via the Euclidean algorithm over Q.
    fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading();
        a.scale(&(BigRational::one() / lead))
    }

    pub fn eval_f64(&self, k: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * k + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let deg = self.degree().unwrap();
        let mut first = true;
        for i in (0..=deg).rev() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef_str = if a.denom().is_one() {
                format!("{}", a.numer())
            } else {
                format!("({a})")
            };
            if i == 0 {
                out.push_str(&coef_str);
            } else {
                let k_str = if i == 1 {
                    "k".to_string()
                } else {
                    format!("k^{i}")
                };
                if a.is_one() {
                    out.push_str(&k_str);
                } else {
                    out.push_str(&coef_str);
                    out.push('*');
                    out.push_str(&k_str);
                }
            }
        }
        out
    }

    /// True when every nonzero coefficient is negative.
    fn all_negative(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(|c| c.is_negative() || c.is_zero())
    }
}

/// Reduced rational function of the summation index k.
///
/// Canonical form: numerator and denominator share no polynomial factor and
/// the denominator is monic, so equality is structural. Every instance the
/// coefficient pipeline produces has a pure k-power denominator; that is
/// checked at the point of use, not assumed here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunc {
    num: Poly,
    den: Poly,
}

impl RationalFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain(
                "rational function denominator is identically zero".to_string(),
            ));
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g), den.div_exact(&g))
        } else {
            (num, den)
        };
        let lead = den.leading();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunc { num, den }
    }

    pub fn zero() -> Self {
        RationalFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn add(&self, other: &RationalFunc) -> RationalFunc {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalFunc::reduced(num, den)
    }

    pub fn neg(&self) -> RationalFunc {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFunc) -> RationalFunc {
        RationalFunc::reduced(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFunc {
        RationalFunc::reduced(self.num.mul(p), self.den.clone())
    }

    pub fn mul_rational(&self, r: &BigRational) -> RationalFunc {
        RationalFunc::reduced(self.num.scale(r), self.den.clone())
    }

    /// Divide by k.
    pub fn div_k(&self) -> RationalFunc {
        RationalFunc::reduced(self.num.clone(), self.den.mul(&Poly::k_power(1)))
    }

    /// deg(num) < deg(den): the O(1/k) decay property.
    pub fn decays(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(dn), Some(dd)) => dn < dd,
            (Some(_), None) => false,
        }
    }

    /// If the (monic) denominator is exactly k^e, returns e.
    pub fn pure_k_power_denominator(&self) -> Option<usize> {
        let deg = self.den.degree()?;
        let pure = self
            .den
            .coeffs()
            .iter()
            .take(deg)
            .all(|c| c.is_zero());
        (pure && self.den.coeff(deg).is_one()).then_some(deg)
    }

    /// Partial fractions for a pure k-power denominator: returns the list
    /// (ν, c_ν) with self = Σ c_ν / k^ν. Errors when the denominator has any
    /// other factor; the caller is expected to fall back to numeric summation.
    pub fn partial_fractions_pure_k(&self) -> Result<Vec<(usize, BigRational)>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let e = self.pure_k_power_denominator().ok_or_else(|| Error::Pipeline {
            message: "denominator is not a pure power of k".to_string(),
            offending: Box::new(self.clone()),
        })?;
        let mut out = Vec::new();
        for (i, c) in self.num.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push((e - i, c.clone()));
            }
        }
        out.sort_by_key(|&(nu, _)| nu);
        Ok(out)
    }

    pub fn eval_f64(&self, k: f64) -> f64 {
        self.num.eval_f64(k) / self.den.eval_f64(k)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_zero() {
            return write!(f, "0");
        }
        let num_str = if self.num.all_negative() {
            let flipped = self.num.neg();
            if flipped.degree() == Some(0) || flipped.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                format!("-{}", flipped.render())
            } else {
                format!("-({})", flipped.render())
            }
        } else if self.num.degree() == Some(0)
            || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            || self.den.degree() == Some(0)
        {
            self.num.render()
        } else {
            format!("({})", self.num.render())
        };
        if self.den.degree() == Some(0) {
            // monic constant denominator is 1
            write!(f, "{num_str}")
        } else {
            let den_str = self.den.render();
            let den_wrapped = if self.den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
                den_str
            } else {
                format!("({den_str})")
            };
            write!(f, "{num_str}/{den_wrapped}")
        }
    }
}

impl Serialize for RationalFunc {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
