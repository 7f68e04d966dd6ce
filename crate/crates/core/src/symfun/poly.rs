use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{rational_string, Rational};

/// Truncation bound meaning "keep every degree".
pub const UNBOUNDED: u32 = u32::MAX;

/// A polynomial variable together with its grading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Chern root number `index` of root block `block`; degree 1.
    Root { block: u16, index: u16 },
    /// Chern class `c_degree` of root block `block`.
    Chern { block: u16, degree: u16 },
    /// Tautological class of tower level `level` (1-based); degree 1.
    Taut(u16),
    /// Free generator with an explicit grade.
    Gen { id: u16, grade: u16 },
}

impl Var {
    pub fn grade(self) -> u32 {
        match self {
            Var::Root { .. } | Var::Taut(_) => 1,
            Var::Chern { degree, .. } => degree as u32,
            Var::Gen { grade, .. } => grade as u32,
        }
    }

    pub fn gen(id: u16) -> Var {
        Var::Gen { id, grade: 1 }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Root { block, index } => write!(f, "x{}_{}", block, index),
            Var::Chern { block, degree } => write!(f, "c{}[{}]", degree, block),
            Var::Taut(l) => write!(f, "xi{}", l),
            Var::Gen { id, .. } => write!(f, "t{}", id),
        }
    }
}

/// A monomial with its exponents stored sparsely, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            degree: v.grade() * e,
            exps: vec![(v, e)],
        }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs.
    pub fn from_exps<I: IntoIterator<Item = (Var, u32)>>(it: I) -> Self {
        let mut m: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in it {
            *m.entry(v).or_insert(0) += e;
        }
        let exps: Vec<_> = m.into_iter().filter(|&(_, e)| e > 0).collect();
        let degree = exps.iter().map(|&(v, e)| v.grade() * e).sum();
        Monomial { degree, exps }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        match self.exps.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    /// Splits off the power of `v`: returns `(e, m / v^e)`.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        match self.exps.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(i) => {
                let e = self.exps[i].1;
                let mut exps = self.exps.clone();
                exps.remove(i);
                (
                    e,
                    Monomial {
                        degree: self.degree - v.grade() * e,
                        exps,
                    },
                )
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, b) = (self.exps[i], other.exps[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    exps.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial {
            degree: self.degree + other.degree,
            exps,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }

    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.exps
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    name(v)
                } else {
                    format!("{}^{}", name(v), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A truncated element of a graded polynomial ring over Q.
///
/// Terms of weighted degree above `bound` are dropped by every operation.
/// Equality compares terms only, so two elements computed to different
/// truncations compare equal when their stored terms agree.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
    bound: u32,
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl Default for GradedPoly {
    fn default() -> Self {
        GradedPoly::zero()
    }
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly {
            terms: BTreeMap::new(),
            bound: UNBOUNDED,
        }
    }

    pub fn one() -> Self {
        GradedPoly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        GradedPoly::term(Monomial::one(), q)
    }

    pub fn from_int(n: i64) -> Self {
        GradedPoly::constant(super::int(n))
    }

    pub fn var(v: Var) -> Self {
        GradedPoly::term(Monomial::var_pow(v, 1), Rational::one())
    }

    pub fn term(m: Monomial, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(m, q);
        }
        GradedPoly {
            terms,
            bound: UNBOUNDED,
        }
    }

    /// Integer-coefficient linear form `Σ coeffs[i] * vars[i]`.
    pub fn linear(vars: &[Var], coeffs: &[i64]) -> Self {
        let mut p = GradedPoly::zero();
        for (&v, &c) in vars.iter().zip(coeffs) {
            if c != 0 {
                p.add_term(Monomial::var_pow(v, 1), super::int(c));
            }
        }
        p
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Lowers the truncation bound, dropping terms above it.
    pub fn truncate(mut self, bound: u32) -> Self {
        if bound < self.bound {
            self.bound = bound;
            self.terms.retain(|m, _| m.degree <= bound);
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, q: Rational) {
        if m.degree > self.bound || q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(q);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Homogeneous component of weighted degree `k`.
    pub fn component(&self, k: u32) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree == k)
                .map(|(m, q)| (m.clone(), q.clone()))
                .collect(),
            bound: self.bound,
        }
    }

    pub fn scale(&self, q: &Rational) -> GradedPoly {
        if q.is_zero() {
            return GradedPoly::zero().truncate(self.bound);
        }
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
            bound: self.bound,
        }
    }

    pub fn scale_int(&self, n: i64) -> GradedPoly {
        self.scale(&super::int(n))
    }

    /// Multiplies the degree-`k` component by `(-1)^k`.
    pub fn sign_by_degree(&self) -> GradedPoly {
        GradedPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let c = if m.degree % 2 == 1 { -c } else { c.clone() };
                    (m.clone(), c)
                })
                .collect(),
            bound: self.bound,
        }
    }

    pub fn pow(&self, mut e: u32) -> GradedPoly {
        let mut base = self.clone();
        let mut acc = GradedPoly::one().truncate(self.bound);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    /// Substitutes polynomials for variables; variables mapped to `None` are kept.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Option<GradedPoly>) -> GradedPoly {
        let mut cache: BTreeMap<(Var, u32), GradedPoly> = BTreeMap::new();
        let mut out = GradedPoly::zero().truncate(self.bound);
        for (m, q) in &self.terms {
            let mut acc = GradedPoly::constant(q.clone()).truncate(self.bound);
            let mut kept = Vec::new();
            for &(v, e) in m.exps() {
                match f(v) {
                    Some(p) => {
                        let pw = cache
                            .entry((v, e))
                            .or_insert_with(|| p.truncate(self.bound).pow(e))
                            .clone();
                        acc = &acc * &pw;
                    }
                    None => kept.push((v, e)),
                }
            }
            if !kept.is_empty() {
                acc = &acc * &GradedPoly::term(Monomial::from_exps(kept), Rational::one());
            }
            out += &acc;
        }
        out
    }

    pub fn map_vars(&self, f: &dyn Fn(Var) -> Var) -> GradedPoly {
        let mut out = GradedPoly::zero().truncate(self.bound);
        for (m, q) in &self.terms {
            out.add_term(
                Monomial::from_exps(m.exps().iter().map(|&(v, e)| (f(v), e))),
                q.clone(),
            );
        }
        out
    }

    /// Evaluates at a point.
    pub fn eval(&self, at: &dyn Fn(Var) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, q) in &self.terms {
            let mut t = q.clone();
            for &(v, e) in m.exps() {
                t *= num_traits::pow(at(v), e as usize);
            }
            total += t;
        }
        total
    }

    pub fn display_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let abs = q.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&rational_string(&abs));
            } else if abs.is_one() {
                out.push_str(&m.display_with(name));
            } else {
                out.push_str(&rational_string(&abs));
                out.push('*');
                out.push_str(&m.display_with(name));
            }
        }
        out
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&|v| v.to_string()))
    }
}

impl<'a> AddAssign<&'a GradedPoly> for GradedPoly {
    fn add_assign(&mut self, rhs: &'a GradedPoly) {
        if rhs.bound < self.bound {
            *self = std::mem::take(self).truncate(rhs.bound);
        }
        for (m, q) in &rhs.terms {
            self.add_term(m.clone(), q.clone());
        }
    }
}

impl<'a> SubAssign<&'a GradedPoly> for GradedPoly {
    fn sub_assign(&mut self, rhs: &'a GradedPoly) {
        if rhs.bound < self.bound {
            *self = std::mem::take(self).truncate(rhs.bound);
        }
        for (m, q) in &rhs.terms {
            self.add_term(m.clone(), -q);
        }
    }
}

impl<'b> Add<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &'b GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'b> Sub<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &'b GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'b> Mul<&'b GradedPoly> for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &'b GradedPoly) -> GradedPoly {
        let bound = self.bound.min(rhs.bound);
        let mut out = GradedPoly {
            terms: BTreeMap::new(),
            bound,
        };
        for (ma, qa) in &self.terms {
            for (mb, qb) in &rhs.terms {
                if (ma.degree as u64) + (mb.degree as u64) > bound as u64 {
                    continue;
                }
                out.add_term(ma.mul(mb), qa * qb);
            }
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect(),
            bound: self.bound,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<GradedPoly> for GradedPoly {
            type Output = GradedPoly;
            fn $f(self, rhs: GradedPoly) -> GradedPoly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a GradedPoly> for GradedPoly {
            type Output = GradedPoly;
            fn $f(self, rhs: &'a GradedPoly) -> GradedPoly {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        -&self
    }
}
