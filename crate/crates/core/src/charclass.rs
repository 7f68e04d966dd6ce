//! Characteristic classes of virtual bundles.
//!
//! A [`VirtualBundle`] is evaluated to a formal virtual multiset of Chern roots
//! (the splitting principle): tensor products add roots pairwise, `Λ^p` sums
//! `p`-subsets, duals negate. Additive classes are then `Σ φ(ρ)` over the
//! roots and multiplicative ones `Π ψ(ρ)`, with negative multiplicities
//! handled by series inversion.

use num_traits::One;

use crate::chern_ring::{ChernSeries, IdentityCheck, Setup};
use crate::error::{Error, Result};
use crate::symfun::{series_invert, GradedPoly, PowerSeries1, Var};

/// Largest rank accepted under `Λ^p`.
pub const MAX_LAMBDA_RANK: usize = 8;

/// Expression tree for a virtual bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VirtualBundle {
    /// A bundle declared in the ambient setup.
    Named(String),
    /// The trivial line `O`.
    Trivial,
    /// A line class `O(a_1, .., a_j)` with `c_1 = Σ a_i ξ_i` on a tower.
    Line(Vec<i64>),
    Sum(Box<VirtualBundle>, Box<VirtualBundle>),
    Tensor(Box<VirtualBundle>, Box<VirtualBundle>),
    Dual(Box<VirtualBundle>),
    Det(Box<VirtualBundle>),
    Lambda(u32, Box<VirtualBundle>),
    /// Integer multiple in the virtual group; `-1` gives the virtual negative.
    Scale(i64, Box<VirtualBundle>),
}

impl VirtualBundle {
    pub fn named(name: impl Into<String>) -> Self {
        VirtualBundle::Named(name.into())
    }
    pub fn line(coeffs: Vec<i64>) -> Self {
        VirtualBundle::Line(coeffs)
    }
    pub fn sum(a: Self, b: Self) -> Self {
        VirtualBundle::Sum(Box::new(a), Box::new(b))
    }
    pub fn diff(a: Self, b: Self) -> Self {
        VirtualBundle::sum(a, VirtualBundle::scale(-1, b))
    }
    pub fn tensor(a: Self, b: Self) -> Self {
        VirtualBundle::Tensor(Box::new(a), Box::new(b))
    }
    pub fn dual(a: Self) -> Self {
        VirtualBundle::Dual(Box::new(a))
    }
    pub fn det(a: Self) -> Self {
        VirtualBundle::Det(Box::new(a))
    }
    pub fn lambda(p: u32, a: Self) -> Self {
        VirtualBundle::Lambda(p, Box::new(a))
    }
    pub fn scale(n: i64, a: Self) -> Self {
        VirtualBundle::Scale(n, Box::new(a))
    }

    /// `Σ_i parts[i]`, or the zero bundle for an empty list.
    pub fn direct_sum(parts: Vec<VirtualBundle>) -> Self {
        parts
            .into_iter()
            .reduce(VirtualBundle::sum)
            .unwrap_or_else(|| VirtualBundle::scale(0, VirtualBundle::Trivial))
    }

    /// `λ_{-1}(V) = Σ_p (-1)^p Λ^p V` for a bundle of the given rank.
    pub fn lambda_minus_one(v: VirtualBundle, rank: usize) -> Self {
        VirtualBundle::direct_sum(
            (0..=rank as u32)
                .map(|p| {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    VirtualBundle::scale(sign, VirtualBundle::lambda(p, v.clone()))
                })
                .collect(),
        )
    }
}

/// Where the roots of the leaves of a virtual bundle come from.
pub trait RootSource {
    fn named_roots(&self, name: &str) -> Result<Vec<GradedPoly>>;
    fn line_root(&self, coeffs: &[i64]) -> Result<GradedPoly>;
    fn truncation(&self) -> u32;
}

/// A virtual root multiset `Σ n_i [B_i]` with each `B_i` an honest root list.
#[derive(Clone, Debug, Default)]
pub struct VirtualRoots {
    parts: Vec<(i64, Vec<GradedPoly>)>,
}

impl VirtualRoots {
    pub fn parts(&self) -> &[(i64, Vec<GradedPoly>)] {
        &self.parts
    }

    pub fn rank(&self) -> i64 {
        self.parts.iter().map(|(n, b)| n * b.len() as i64).sum()
    }

    /// The single honest root list, if every multiplicity is non-negative.
    fn honest(&self) -> Option<Vec<GradedPoly>> {
        let mut out = Vec::new();
        for (n, b) in &self.parts {
            if *n < 0 {
                return None;
            }
            for _ in 0..*n {
                out.extend(b.iter().cloned());
            }
        }
        Some(out)
    }
}

fn subset_sums(roots: &[GradedPoly], p: usize, start: usize, acc: &GradedPoly, out: &mut Vec<GradedPoly>) {
    if p == 0 {
        out.push(acc.clone());
        return;
    }
    for i in start..=roots.len() - p {
        let next = acc + &roots[i];
        subset_sums(roots, p - 1, i + 1, &next, out);
    }
}

/// Evaluates a virtual bundle to its formal roots.
pub fn virtual_roots(v: &VirtualBundle, src: &dyn RootSource) -> Result<VirtualRoots> {
    use VirtualBundle::*;
    let parts = match v {
        Named(name) => vec![(1, src.named_roots(name)?)],
        Trivial => vec![(1, vec![GradedPoly::zero()])],
        Line(c) => vec![(1, vec![src.line_root(c)?])],
        Sum(a, b) => {
            let mut p = virtual_roots(a, src)?.parts;
            p.extend(virtual_roots(b, src)?.parts);
            p
        }
        Tensor(a, b) => {
            let (a, b) = (virtual_roots(a, src)?, virtual_roots(b, src)?);
            let mut p = Vec::new();
            for (n, ra) in &a.parts {
                for (m, rb) in &b.parts {
                    let roots = ra
                        .iter()
                        .flat_map(|x| rb.iter().map(move |y| x + y))
                        .collect();
                    p.push((n * m, roots));
                }
            }
            p
        }
        Dual(a) => virtual_roots(a, src)?
            .parts
            .into_iter()
            .map(|(n, r)| (n, r.iter().map(|x| -x).collect()))
            .collect(),
        Det(a) => {
            let mut root = GradedPoly::zero();
            for (n, r) in virtual_roots(a, src)?.parts {
                for x in r {
                    root += &x.scale_int(n);
                }
            }
            vec![(1, vec![root])]
        }
        Lambda(p, a) => {
            let inner = virtual_roots(a, src)?;
            let roots = inner.honest().ok_or_else(|| {
                Error::MalformedVirtualBundle("exterior power of a virtual bundle with negative part".into())
            })?;
            if roots.len() > MAX_LAMBDA_RANK {
                return Err(Error::MalformedVirtualBundle(format!(
                    "exterior power of rank {} exceeds the limit {}",
                    roots.len(),
                    MAX_LAMBDA_RANK
                )));
            }
            let p = *p as usize;
            if p > roots.len() {
                Vec::new()
            } else {
                let mut sums = Vec::new();
                subset_sums(&roots, p, 0, &GradedPoly::zero(), &mut sums);
                vec![(1, sums)]
            }
        }
        Scale(n, a) => virtual_roots(a, src)?
            .parts
            .into_iter()
            .map(|(m, r)| (n * m, r))
            .collect(),
    };
    Ok(VirtualRoots {
        parts: parts.into_iter().filter(|(n, _)| *n != 0).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Additive,
    Multiplicative,
}

/// A characteristic class given by a one-variable series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharClassSpec {
    pub kind: ClassKind,
    pub series: PowerSeries1,
}

impl CharClassSpec {
    pub fn new(kind: ClassKind, series: PowerSeries1) -> Result<Self> {
        if kind == ClassKind::Multiplicative && !series.coeff(0).is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        Ok(CharClassSpec { kind, series })
    }

    /// Chern character, from `exp(T)`.
    pub fn ch(order: u32) -> Self {
        CharClassSpec {
            kind: ClassKind::Additive,
            series: PowerSeries1::exp(order as usize),
        }
    }

    /// Todd class, from `T / (1 - e^{-T})`.
    pub fn td(order: u32) -> Self {
        CharClassSpec {
            kind: ClassKind::Multiplicative,
            series: PowerSeries1::todd(order as usize),
        }
    }

    /// Total Chern class, from `1 + T`.
    pub fn total_chern(order: u32) -> Self {
        CharClassSpec {
            kind: ClassKind::Multiplicative,
            series: PowerSeries1::one_plus_t(order as usize),
        }
    }
}

/// Evaluates a characteristic class on a virtual bundle.
pub fn evaluate_class(
    spec: &CharClassSpec,
    v: &VirtualBundle,
    src: &dyn RootSource,
) -> Result<ChernSeries> {
    let bound = src.truncation().min(spec.series.order() as u32);
    let roots = virtual_roots(v, src)?;
    let out = match spec.kind {
        ClassKind::Additive => {
            let mut acc = GradedPoly::zero().truncate(bound);
            for (n, part) in roots.parts() {
                let mut s = GradedPoly::zero().truncate(bound);
                for rho in part {
                    s += &spec.series.compose(rho, bound);
                }
                acc += &s.scale_int(*n);
            }
            acc
        }
        ClassKind::Multiplicative => {
            if !spec.series.coeff(0).is_one() {
                return Err(Error::ConstantTermNotOne);
            }
            let mut acc = GradedPoly::one().truncate(bound);
            for (n, part) in roots.parts() {
                let mut prod = GradedPoly::one().truncate(bound);
                for rho in part {
                    if rho.is_zero() {
                        continue;
                    }
                    prod = &prod * &spec.series.compose(rho, bound);
                }
                let factor = if *n < 0 {
                    series_invert(&prod, bound)?
                } else {
                    prod
                };
                acc = &acc * &factor.pow(n.unsigned_abs() as u32);
            }
            acc
        }
    };
    Ok(ChernSeries::new(out))
}

pub fn ch(v: &VirtualBundle, src: &dyn RootSource) -> Result<ChernSeries> {
    evaluate_class(&CharClassSpec::ch(src.truncation()), v, src)
}

pub fn td(v: &VirtualBundle, src: &dyn RootSource) -> Result<ChernSeries> {
    evaluate_class(&CharClassSpec::td(src.truncation()), v, src)
}

/// `td` with the degree-`k` piece multiplied by `(-1)^k`.
pub fn td_star(v: &VirtualBundle, src: &dyn RootSource) -> Result<ChernSeries> {
    Ok(ChernSeries::new(td(v, src)?.sign_by_degree()))
}

/// Total Chern class `c(V)`.
pub fn total_chern(v: &VirtualBundle, src: &dyn RootSource) -> Result<ChernSeries> {
    evaluate_class(&CharClassSpec::total_chern(src.truncation()), v, src)
}

/// `Π_i (1 - e^{ρ_i})`, the Chern character of `λ_{-1}` of a bundle with these roots.
pub fn ch_lambda_minus_one_roots(roots: &[GradedPoly], bound: u32) -> GradedPoly {
    let f = PowerSeries1::one_minus_exp(bound as usize);
    let mut acc = GradedPoly::one().truncate(bound);
    for rho in roots {
        acc = &acc * &f.compose(rho, bound);
    }
    acc
}

/// `ch(λ_{-1}(E)) = Π (1 - e^{x_i})` for a declared bundle.
pub fn ch_lambda_minus_one(setup: &Setup, bundle: &str) -> Result<ChernSeries> {
    let roots = setup.named_roots(bundle)?;
    Ok(ChernSeries::new(ch_lambda_minus_one_roots(
        &roots,
        setup.truncation(),
    )))
}

/// Root source for a single bundle `E` of rank `r`, allowing `r = 0`.
struct SingleBundle {
    rank: usize,
    truncation: u32,
}

impl RootSource for SingleBundle {
    fn named_roots(&self, name: &str) -> Result<Vec<GradedPoly>> {
        if name != "E" {
            return Err(Error::UnknownBundle(name.into()));
        }
        Ok((0..self.rank)
            .map(|i| {
                GradedPoly::var(Var::Root {
                    block: 0,
                    index: i as u16,
                })
            })
            .collect())
    }
    fn line_root(&self, coeffs: &[i64]) -> Result<GradedPoly> {
        if coeffs.iter().all(|&c| c == 0) {
            Ok(GradedPoly::zero())
        } else {
            Err(Error::MalformedVirtualBundle("no tower".into()))
        }
    }
    fn truncation(&self) -> u32 {
        self.truncation
    }
}

/// Verifies `ch(λ_{-1}(E)) = c_r(E^∨) · td(E^∨)^{-1}` for a rank-`r` bundle.
///
/// The left side is evaluated through the exterior powers `Λ^p E`; it is also
/// compared against the product formula `Π (1 - e^{x_i})`, and the check only
/// holds if all three agree.
pub fn borel_serre_check(rank: usize, truncation: u32) -> Result<IdentityCheck> {
    if truncation < rank as u32 {
        return Err(Error::TruncationTooLow { rank, truncation });
    }
    let src = SingleBundle { rank, truncation };
    let e = VirtualBundle::named("E");
    let lhs = ch(&VirtualBundle::lambda_minus_one(e.clone(), rank), &src)?.into_poly();
    let product = ch_lambda_minus_one_roots(&src.named_roots("E")?, truncation);
    let dual = VirtualBundle::dual(e);
    let top = total_chern(&dual, &src)?.component(rank as u32);
    let td_inv = td(&VirtualBundle::scale(-1, dual), &src)?.into_poly();
    let rhs = &top * &td_inv;
    let mut check = IdentityCheck::compare(lhs, rhs);
    check.holds &= check.lhs == product;
    Ok(check)
}

/// Verifies `ch(λ_{-1}(E^∨)) = c_r(E) · td(E)^{-1}`, the Koszul form of the
/// Chern character of the structure sheaf of a zero locus.
pub fn restriction_normal_bundle_check(rank: usize, truncation: u32) -> Result<IdentityCheck> {
    if truncation < rank as u32 {
        return Err(Error::TruncationTooLow { rank, truncation });
    }
    let src = SingleBundle { rank, truncation };
    let e = VirtualBundle::named("E");
    let koszul = VirtualBundle::lambda_minus_one(VirtualBundle::dual(e.clone()), rank);
    let lhs = ch(&koszul, &src)?.into_poly();
    let top = total_chern(&e, &src)?.component(rank as u32);
    let td_inv = td(&VirtualBundle::scale(-1, e), &src)?.into_poly();
    Ok(IdentityCheck::compare(lhs, &top * &td_inv))
}

/// Verifies `ch(V ⊗ W) = ch(V) · ch(W)`.
pub fn ch_tensor_check(
    v: &VirtualBundle,
    w: &VirtualBundle,
    src: &dyn RootSource,
) -> Result<IdentityCheck> {
    let lhs = ch(&VirtualBundle::tensor(v.clone(), w.clone()), src)?.into_poly();
    let rhs = &*ch(v, src)? * &*ch(w, src)?;
    Ok(IdentityCheck::compare(lhs, rhs))
}

/// Rank of a virtual bundle.
pub fn rank(v: &VirtualBundle, src: &dyn RootSource) -> Result<i64> {
    Ok(virtual_roots(v, src)?.rank())
}

/// Additivity residual of an additive class; zero when `class(V⊕W) = class(V) + class(W)`.
pub fn additivity_residual(
    spec: &CharClassSpec,
    v: &VirtualBundle,
    w: &VirtualBundle,
    src: &dyn RootSource,
) -> Result<GradedPoly> {
    let both = evaluate_class(spec, &VirtualBundle::sum(v.clone(), w.clone()), src)?;
    let a = evaluate_class(spec, v, src)?;
    let b = evaluate_class(spec, w, src)?;
    Ok(match spec.kind {
        ClassKind::Additive => &(&*both - &*a) - &*b,
        ClassKind::Multiplicative => &*both - &(&*a * &*b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::rat;

    fn setup() -> Setup {
        Setup::with_bundles(&[("E", 2), ("F", 3), ("L", 1), ("M", 1)])
            .unwrap()
            .with_truncation(4)
            .unwrap()
    }

    fn named(s: &str) -> VirtualBundle {
        VirtualBundle::named(s)
    }

    #[test]
    fn ch_examples() {
        let s = setup();
        assert_eq!(*ch(&VirtualBundle::Trivial, &s).unwrap(), GradedPoly::one());
        let s2 = s.with_truncation(2).unwrap();
        let l = GradedPoly::var(s.roots("L").unwrap()[0]);
        assert_eq!(
            *ch(&named("L"), &s2).unwrap(),
            GradedPoly::one() + l.clone() + l.pow(2).scale(&rat(1, 2))
        );
        let td1 = td(&named("E"), &s).unwrap().component(1);
        let c1 = crate::chern_ring::chern_class(&s, "E", 1).unwrap();
        assert_eq!(td1, c1.scale(&rat(1, 2)));
    }

    #[test]
    fn td_star_examples() {
        let s = setup();
        let c1 = crate::chern_ring::chern_class(&s, "E", 1).unwrap();
        assert_eq!(
            td_star(&named("E"), &s).unwrap().component(1),
            c1.scale(&rat(-1, 2))
        );
        assert_eq!(*td_star(&VirtualBundle::Trivial, &s).unwrap(), GradedPoly::one());
        let d = td(&VirtualBundle::dual(named("F")), &s).unwrap();
        assert_eq!(td_star(&named("F"), &s).unwrap(), d);
    }

    #[test]
    fn lambda_minus_one_examples() {
        assert_eq!(ch_lambda_minus_one_roots(&[], 4), GradedPoly::one());
        let s = setup();
        let x = GradedPoly::var(s.roots("L").unwrap()[0]);
        let one_root = ch_lambda_minus_one(&s, "L").unwrap();
        assert_eq!(one_root.component(1), -x.clone());
        assert_eq!(one_root.component(2), x.pow(2).scale(&rat(-1, 2)));
        let two = ch_lambda_minus_one(&s, "E").unwrap();
        assert!(two.component(1).is_zero());
        assert_eq!(
            two.component(2),
            crate::chern_ring::chern_class(&s, "E", 2).unwrap().into_poly()
        );
        let via_lambda = ch(&VirtualBundle::lambda_minus_one(named("F"), 3), &s).unwrap();
        assert_eq!(via_lambda, ch_lambda_minus_one(&s, "F").unwrap());
    }

    #[test]
    fn borel_serre_small_ranks() {
        assert!(borel_serre_check(0, 4).unwrap().holds);
        assert!(borel_serre_check(1, 4).unwrap().holds);
        assert!(borel_serre_check(2, 6).unwrap().holds);
        assert_eq!(
            borel_serre_check(3, 2),
            Err(Error::TruncationTooLow {
                rank: 3,
                truncation: 2
            })
        );
    }

    #[test]
    fn restriction_small_ranks() {
        assert!(restriction_normal_bundle_check(0, 4).unwrap().holds);
        assert!(restriction_normal_bundle_check(1, 5).unwrap().holds);
        assert!(restriction_normal_bundle_check(2, 6).unwrap().holds);
    }

    #[test]
    fn ch_tensor_examples() {
        let s = setup();
        let o = VirtualBundle::Trivial;
        assert!(ch_tensor_check(&o, &o, &s).unwrap().holds);
        assert!(ch_tensor_check(&named("L"), &named("M"), &s).unwrap().holds);
        assert!(ch_tensor_check(&named("E"), &named("L"), &s).unwrap().holds);
    }

    #[test]
    fn virtual_negation_inverts() {
        let s = setup();
        let spec = CharClassSpec::td(4);
        let pos = evaluate_class(&spec, &named("F"), &s).unwrap();
        let neg = evaluate_class(&spec, &VirtualBundle::scale(-1, named("F")), &s).unwrap();
        assert_eq!(*neg, series_invert(&pos, 4).unwrap());
        assert_eq!(rank(&VirtualBundle::diff(named("E"), named("F")), &s).unwrap(), -1);
    }

    #[test]
    fn lambda_rejects_virtual_and_large() {
        let s = setup();
        let bad = VirtualBundle::lambda(2, VirtualBundle::diff(named("E"), named("L")));
        assert!(matches!(
            virtual_roots(&bad, &s),
            Err(Error::MalformedVirtualBundle(_))
        ));
        let big = VirtualBundle::lambda(2, VirtualBundle::tensor(named("F"), named("F")));
        assert!(virtual_roots(&big, &s).is_err());
        let empty = VirtualBundle::lambda(3, named("E"));
        assert_eq!(rank(&empty, &s).unwrap(), 0);
        assert_eq!(*ch(&empty, &s).unwrap(), GradedPoly::zero());
    }

    #[test]
    fn multiplicative_needs_unit() {
        assert_eq!(
            CharClassSpec::new(ClassKind::Multiplicative, PowerSeries1::exp_minus_one(3)),
            Err(Error::ConstantTermNotOne)
        );
    }
}
