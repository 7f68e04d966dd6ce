use num_traits::{One, Zero};

use super::{int, GradedPoly, Rational};

/// A one-variable power series truncated at order `D`, stored as `D+1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries1 {
    coeffs: Vec<Rational>,
}

impl PowerSeries1 {
    /// Takes the coefficients `a_0..a_D`; an empty list is the zero series at order 0.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        PowerSeries1 { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `exp(T)`.
    pub fn exp(order: usize) -> Self {
        let mut c = Vec::with_capacity(order + 1);
        let mut fact = Rational::one();
        for k in 0..=order {
            if k > 0 {
                fact *= int(k as i64);
            }
            c.push(fact.recip());
        }
        PowerSeries1 { coeffs: c }
    }

    /// `exp(T) - 1`.
    pub fn exp_minus_one(order: usize) -> Self {
        let mut s = Self::exp(order);
        s.coeffs[0] = Rational::zero();
        s
    }

    /// `1 + T`.
    pub fn one_plus_t(order: usize) -> Self {
        let mut c = vec![Rational::zero(); order + 1];
        c[0] = Rational::one();
        if order >= 1 {
            c[1] = Rational::one();
        }
        PowerSeries1 { coeffs: c }
    }

    /// The Todd series `T / (1 - e^{-T})`.
    pub fn todd(order: usize) -> Self {
        // (1 - e^{-T}) / T = sum_k (-1)^k T^k / (k+1)!
        let mut c = Vec::with_capacity(order + 1);
        let mut fact = Rational::one();
        for k in 0..=order {
            fact *= int(k as i64 + 1);
            let v = fact.recip();
            c.push(if k % 2 == 1 { -v } else { v });
        }
        PowerSeries1 { coeffs: c }
            .invert()
            .expect("unit constant term")
    }

    /// `1 - e^{T}`.
    pub fn one_minus_exp(order: usize) -> Self {
        let e = Self::exp(order);
        PowerSeries1 {
            coeffs: e
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, q)| if k == 0 { Rational::zero() } else { -q })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.order().min(other.order());
        let mut c = vec![Rational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                c[i + j] += a * b;
            }
        }
        PowerSeries1 { coeffs: c }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn invert(&self) -> Option<Self> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let a0_inv = self.coeffs[0].recip();
        let mut inv: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        inv.push(a0_inv.clone());
        for k in 1..self.coeffs.len() {
            let mut s = Rational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &inv[k - i];
            }
            inv.push(-s * &a0_inv);
        }
        Some(PowerSeries1 { coeffs: inv })
    }

    /// Evaluates at a graded element with no constant term, truncated at `bound`.
    pub fn compose(&self, arg: &GradedPoly, bound: u32) -> GradedPoly {
        let arg = arg.clone().truncate(bound);
        let mut out = GradedPoly::constant(self.coeffs[0].clone()).truncate(bound);
        let mut power = GradedPoly::one().truncate(bound);
        for c in self.coeffs.iter().skip(1) {
            power = &power * &arg;
            if power.is_zero() {
                break;
            }
            if !c.is_zero() {
                out += &power.scale(c);
            }
        }
        out
    }
}
