//! Sparse exact-rational graded polynomials, symmetric-function bases and
//! the universal polynomials attached to one-variable power series.

mod poly;
mod series;
mod symmetric;

pub use poly::{GradedPoly, Monomial, Var, UNBOUNDED};
pub use series::PowerSeries1;
pub use symmetric::{
    elem_sym, elem_sym_polys, from_chern_basis, phi_components, phi_components_with_roots, psi_components,
    psi_components_with_roots, series_invert, to_chern_basis,
};

use num_bigint::BigInt;

/// Exact rational number; always stored in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `p` or `p/q`.
pub fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Binomial coefficient `C(n, k)` for `n >= 0`; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}
