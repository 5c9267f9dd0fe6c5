use num_rational::BigRational;

use super::ZetaExpr;
use crate::{Error, Result};

/// Truncated formal power series in one small variable ε, with [`ZetaExpr`]
/// coefficients. All arithmetic truncates consistently at ε^order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSeries {
    order: usize,
    coeffs: Vec<ZetaExpr>,
}

impl FormalSeries {
    /// Series from coefficients c_0..c_order (length must be order+1).
    pub fn new(order: usize, coeffs: Vec<ZetaExpr>) -> Result<Self> {
        if coeffs.len() != order + 1 {
            return Err(Error::domain(format!(
                "series of order {order} needs {} coefficients, got {}",
                order + 1,
                coeffs.len()
            )));
        }
        Ok(FormalSeries { order, coeffs })
    }

    pub fn zero(order: usize) -> Self {
        FormalSeries {
            order,
            coeffs: vec![ZetaExpr::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = ZetaExpr::one();
        s
    }

    /// The identity series ε.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ZetaExpr::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize) -> &ZetaExpr {
        &self.coeffs[j]
    }

    pub fn set_coeff(&mut self, j: usize, v: ZetaExpr) {
        self.coeffs[j] = v;
    }

    fn check_order(&self, other: &FormalSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::domain(format!(
                "series order mismatch: {} vs {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FormalSeries {
            order: self.order,
            coeffs,
        })
    }

    pub fn mul(&self, other: &FormalSeries) -> Result<FormalSeries> {
        self.check_order(other)?;
        let mut out = FormalSeries::zero(self.order);
        for i in 0..=self.order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.order - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j] = &out.coeffs[i + j] + &prod;
            }
        }
        Ok(out)
    }

    pub fn mul_expr(&self, c: &ZetaExpr) -> FormalSeries {
        FormalSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_rational(&self, r: &BigRational) -> FormalSeries {
        FormalSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a.mul_rational(r)).collect(),
        }
    }

    /// exp(a) for a series with zero constant term, via n b_n = Σ j a_j b_{n-j}.
    pub fn exp(&self) -> Result<FormalSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain(
                "series_exp requires zero constant term".to_string(),
            ));
        }
        let mut out = FormalSeries::one(self.order);
        for n in 1..=self.order {
            let mut acc = ZetaExpr::zero();
            for j in 1..=n {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let term = self.coeffs[j].mul_rational(&BigRational::from_integer((j as i64).into()));
                acc = &acc + &(&term * &out.coeffs[n - j]);
            }
            out.coeffs[n] = acc.div_integer(n as i64);
        }
        Ok(out)
    }

    /// self(g(ε)) for g with zero constant term (Horner, truncated).
    pub fn compose(&self, g: &FormalSeries) -> Result<FormalSeries> {
        self.check_order(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(Error::domain(
                "series composition requires inner constant term 0".to_string(),
            ));
        }
        let mut out = FormalSeries::zero(self.order);
        for j in (0..=self.order).rev() {
            out = out.mul(g)?;
            out.coeffs[0] = &out.coeffs[0] + &self.coeffs[j];
        }
        Ok(out)
    }

    /// 1/self for a series with constant term 1.
    pub fn inverse(&self) -> Result<FormalSeries> {
        if self.coeffs[0] != ZetaExpr::one() {
            return Err(Error::domain(
                "series inverse requires constant term 1".to_string(),
            ));
        }
        let mut out = FormalSeries::one(self.order);
        for n in 1..=self.order {
            let mut acc = ZetaExpr::zero();
            for i in 1..=n {
                if self.coeffs[i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[i] * &out.coeffs[n - i]);
            }
            out.coeffs[n] = -acc;
        }
        Ok(out)
    }

    /// Compositional inverse of ε·(1 + higher): the series g with
    /// self(g(ε)) = ε through ε^order. Requires a_0 = 0, a_1 = 1.
    pub fn revert(&self) -> Result<FormalSeries> {
        if !self.coeffs[0].is_zero() || self.coeffs[1] != ZetaExpr::one() {
            return Err(Error::domain(
                "series reversion requires a_0 = 0 and a_1 = 1".to_string(),
            ));
        }
        let mut g = FormalSeries::identity(self.order);
        for n in 2..=self.order {
            let comp = self.compose(&g)?;
            // self(g) = ε + c_n ε^n + O(ε^{n+1}); correct g_n by -c_n
            g.coeffs[n] = &g.coeffs[n] - &comp.coeffs[n];
        }
        Ok(g)
    }
}
