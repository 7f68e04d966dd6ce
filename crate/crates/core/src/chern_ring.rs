//! Formal Chern classes of named bundles, represented through their Chern roots.
//!
//! Every bundle `E` of rank `r` in a [`Setup`] owns a block of root variables
//! `x_{E,1}..x_{E,r}` of degree 1, and `c_k(E)` is the elementary symmetric
//! polynomial `σ_k` of that block. Identities between Chern classes become
//! literal polynomial identities in the roots, so equality is exact.

use std::collections::HashSet;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::charclass::{virtual_roots, RootSource, VirtualBundle};
use crate::error::{Error, Result};
use crate::pushforward::TowerDescriptor;
use crate::symfun::{
    binomial, elem_sym, int, series_invert, to_chern_basis, GradedPoly, Monomial, Var,
};

pub const DEFAULT_TRUNCATION: u32 = 8;

fn default_truncation() -> u32 {
    DEFAULT_TRUNCATION
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDecl {
    pub name: String,
    pub rank: usize,
}

impl BundleDecl {
    pub fn new(name: impl Into<String>, rank: usize) -> Self {
        BundleDecl {
            name: name.into(),
            rank,
        }
    }
}

/// Declared bundles, the relative dimension `n` and the truncation degree `D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Setup {
    bundles: Vec<BundleDecl>,
    #[serde(default)]
    relative_dimension: u32,
    #[serde(default = "default_truncation")]
    truncation: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tower: Option<TowerDescriptor>,
}

impl Setup {
    pub fn new(bundles: Vec<BundleDecl>, relative_dimension: u32, truncation: u32) -> Result<Self> {
        let s = Setup {
            bundles,
            relative_dimension,
            truncation,
            tower: None,
        };
        s.validate()?;
        Ok(s)
    }

    /// Bundles only, relative dimension 0, default truncation.
    pub fn with_bundles(bundles: &[(&str, usize)]) -> Result<Self> {
        Setup::new(
            bundles.iter().map(|&(n, r)| BundleDecl::new(n, r)).collect(),
            0,
            DEFAULT_TRUNCATION,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: Setup =
            serde_json::from_str(text).map_err(|e| Error::InvalidSetup(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for b in &self.bundles {
            if b.rank == 0 {
                return Err(Error::InvalidSetup(format!(
                    "bundle `{}` has rank 0; use the empty virtual sum instead",
                    b.name
                )));
            }
            if !seen.insert(b.name.as_str()) {
                return Err(Error::InvalidSetup(format!("duplicate bundle `{}`", b.name)));
            }
            if b.name == "O" {
                return Err(Error::InvalidSetup("`O` is reserved for the trivial line".into()));
            }
        }
        if self.truncation < self.relative_dimension + 1 {
            return Err(Error::InvalidSetup(format!(
                "truncation {} must be at least relative dimension + 1 = {}",
                self.truncation,
                self.relative_dimension + 1
            )));
        }
        Ok(())
    }

    pub fn bundles(&self) -> &[BundleDecl] {
        &self.bundles
    }

    pub fn relative_dimension(&self) -> u32 {
        self.relative_dimension
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn tower(&self) -> Option<&TowerDescriptor> {
        self.tower.as_ref()
    }

    /// Same setup with another truncation degree.
    pub fn with_truncation(&self, truncation: u32) -> Result<Self> {
        let mut s = self.clone();
        s.truncation = truncation;
        s.validate()?;
        Ok(s)
    }

    pub fn bundle(&self, name: &str) -> Result<(usize, &BundleDecl)> {
        self.bundles
            .iter()
            .enumerate()
            .find(|(_, b)| b.name == name)
            .ok_or_else(|| Error::UnknownBundle(name.to_string()))
    }

    pub fn rank(&self, name: &str) -> Result<usize> {
        Ok(self.bundle(name)?.1.rank)
    }

    pub fn roots(&self, name: &str) -> Result<Vec<Var>> {
        let (i, b) = self.bundle(name)?;
        Ok(block_roots(i, b.rank))
    }

    pub fn root_blocks(&self) -> Vec<Vec<Var>> {
        self.bundles
            .iter()
            .enumerate()
            .map(|(i, b)| block_roots(i, b.rank))
            .collect()
    }

    pub fn var_name(&self, v: Var) -> String {
        let bundle = |b: u16| {
            self.bundles
                .get(b as usize)
                .map(|d| d.name.clone())
                .unwrap_or_else(|| format!("#{}", b))
        };
        match v {
            Var::Root { block, index } => format!("x_{}_{}", bundle(block), index + 1),
            Var::Chern { block, degree } => format!("c_{}({})", degree, bundle(block)),
            other => other.to_string(),
        }
    }

    /// Presents a root polynomial in the Chern-class basis.
    pub fn to_chern_basis(&self, p: &GradedPoly) -> Result<GradedPoly> {
        to_chern_basis(p, &self.root_blocks())
    }

    pub fn display_chern(&self, p: &GradedPoly) -> Result<String> {
        Ok(self
            .to_chern_basis(p)?
            .display_with(&|v| self.var_name(v)))
    }
}

fn block_roots(block: usize, rank: usize) -> Vec<Var> {
    (0..rank)
        .map(|i| Var::Root {
            block: block as u16,
            index: i as u16,
        })
        .collect()
}

impl RootSource for Setup {
    fn named_roots(&self, name: &str) -> Result<Vec<GradedPoly>> {
        Ok(self.roots(name)?.into_iter().map(GradedPoly::var).collect())
    }

    fn line_root(&self, coeffs: &[i64]) -> Result<GradedPoly> {
        if coeffs.iter().all(|&c| c == 0) {
            Ok(GradedPoly::zero())
        } else {
            Err(Error::MalformedVirtualBundle(
                "twisted line classes require a tower".into(),
            ))
        }
    }

    fn truncation(&self) -> u32 {
        self.truncation
    }
}

/// A truncated element of the formal Chern ring, in root variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernSeries(GradedPoly);

impl ChernSeries {
    pub fn new(p: GradedPoly) -> Self {
        ChernSeries(p)
    }

    pub fn poly(&self) -> &GradedPoly {
        &self.0
    }

    pub fn into_poly(self) -> GradedPoly {
        self.0
    }
}

impl Deref for ChernSeries {
    type Target = GradedPoly;
    fn deref(&self) -> &GradedPoly {
        &self.0
    }
}

impl From<GradedPoly> for ChernSeries {
    fn from(p: GradedPoly) -> Self {
        ChernSeries(p)
    }
}

/// Outcome of comparing two sides of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: GradedPoly,
    pub rhs: GradedPoly,
    pub residual: GradedPoly,
    pub holds: bool,
}

impl IdentityCheck {
    pub fn compare(lhs: GradedPoly, rhs: GradedPoly) -> Self {
        let residual = &lhs - &rhs;
        let holds = residual.is_zero();
        IdentityCheck {
            lhs,
            rhs,
            residual,
            holds,
        }
    }
}

/// Which sign convention Segre classes use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SegreConvention {
    /// `s_k = (-1)^k [1/c]_k`, so that `Σ_i (-1)^i s_i c_{k-i} = 0`.
    #[default]
    Signed,
    /// `s = 1/c`.
    Fulton,
}

/// `c_k(E)`; zero when `k > rank E`.
pub fn chern_class(setup: &Setup, bundle: &str, k: usize) -> Result<ChernSeries> {
    let roots = setup.roots(bundle)?;
    Ok(ChernSeries(elem_sym(k, &roots).truncate(setup.truncation)))
}

/// Chern class of the direct sum of the listed bundles, from the concatenated roots.
pub fn chern_class_of_sum(setup: &Setup, bundles: &[&str], k: usize) -> Result<ChernSeries> {
    let mut roots = Vec::new();
    for b in bundles {
        roots.extend(setup.roots(b)?);
    }
    Ok(ChernSeries(elem_sym(k, &roots).truncate(setup.truncation)))
}

/// The Whitney right-hand side `Σ_i c_i(E') c_{k-i}(E'')` over a fresh setup
/// declaring `E'` and `E''` with the given ranks.
pub fn whitney_expand(k: usize, rank1: usize, rank2: usize) -> Result<(Setup, ChernSeries)> {
    let setup = Setup::new(
        vec![BundleDecl::new("E'", rank1), BundleDecl::new("E''", rank2)],
        0,
        (k as u32).max(DEFAULT_TRUNCATION),
    )?;
    let rhs = whitney_rhs(&setup, "E'", "E''", k)?;
    Ok((setup, rhs))
}

pub fn whitney_rhs(setup: &Setup, first: &str, second: &str, k: usize) -> Result<ChernSeries> {
    let mut acc = GradedPoly::zero().truncate(setup.truncation);
    for i in 0..=k {
        acc += &(&*chern_class(setup, first, i)? * &*chern_class(setup, second, k - i)?);
    }
    Ok(ChernSeries(acc))
}

/// `(-1)^k c_k(E)`, the class `c_k(E^∨)`.
pub fn dual_class(setup: &Setup, bundle: &str, k: usize) -> Result<ChernSeries> {
    let c = chern_class(setup, bundle, k)?;
    Ok(ChernSeries(if k % 2 == 1 { -c.0 } else { c.0 }))
}

/// `c_k(E ⊗ L) = Σ_i C(r-k+i, i) c_{k-i}(E) c_1(L)^i` for a line `L`.
pub fn tensor_line(setup: &Setup, bundle: &str, line: &str, k: usize) -> Result<ChernSeries> {
    let r = setup.rank(bundle)?;
    if setup.rank(line)? != 1 {
        return Err(Error::InvalidSetup(format!("`{}` is not a line bundle", line)));
    }
    let l = chern_class(setup, line, 1)?.0;
    let mut acc = GradedPoly::zero().truncate(setup.truncation);
    if k > r {
        return Ok(ChernSeries(acc));
    }
    for i in 0..=k {
        let coeff = binomial((r - k + i) as i64, i as i64);
        let term = &*chern_class(setup, bundle, k - i)? * &l.pow(i as u32);
        acc += &term.scale_int(coeff);
    }
    Ok(ChernSeries(acc))
}

fn total_chern(setup: &Setup, bundle: &str) -> Result<GradedPoly> {
    let r = setup.rank(bundle)?;
    let mut acc = GradedPoly::zero().truncate(setup.truncation);
    for k in 0..=r {
        acc += chern_class(setup, bundle, k)?.poly();
    }
    Ok(acc)
}

/// Segre class `s_k(E)` in the chosen convention.
pub fn segre_class(
    setup: &Setup,
    bundle: &str,
    k: usize,
    convention: SegreConvention,
) -> Result<ChernSeries> {
    let inv = series_invert(&total_chern(setup, bundle)?, setup.truncation)?;
    let fulton = inv.component(k as u32);
    Ok(ChernSeries(match convention {
        SegreConvention::Fulton => fulton,
        SegreConvention::Signed if k % 2 == 1 => -fulton,
        SegreConvention::Signed => fulton,
    }))
}

/// Rebuilds `c_k(E)` from Segre classes through the convention's recurrence.
pub fn chern_from_segre(
    setup: &Setup,
    bundle: &str,
    k: usize,
    convention: SegreConvention,
) -> Result<ChernSeries> {
    if k == 0 {
        return segre_class(setup, bundle, 0, convention);
    }
    let mut acc = GradedPoly::zero().truncate(setup.truncation);
    for i in 1..=k {
        let s = segre_class(setup, bundle, i, convention)?;
        let c = chern_class(setup, bundle, k - i)?;
        let term = &*s * &*c;
        match convention {
            // c_k = Σ (-1)^{i+1} s_i c_{k-i}
            SegreConvention::Signed if i % 2 == 1 => acc += &term,
            SegreConvention::Signed => acc -= &term,
            // c_k = -Σ s_i c_{k-i}
            SegreConvention::Fulton => acc -= &term,
        }
    }
    Ok(ChernSeries(acc))
}

/// `c_1(V) = c_1(det V)`, summed over the virtual decomposition.
pub fn first_chern_det(src: &dyn RootSource, v: &VirtualBundle) -> Result<ChernSeries> {
    let roots = virtual_roots(v, src)?;
    let mut acc = GradedPoly::zero().truncate(src.truncation());
    for (n, part) in roots.parts() {
        for rho in part {
            acc += &rho.scale_int(*n);
        }
    }
    Ok(ChernSeries(acc))
}

/// Degree-`degree` component, refusing degrees beyond the truncation.
pub fn integrate_formal(s: &GradedPoly, degree: u32) -> Result<GradedPoly> {
    if degree > s.bound() {
        return Err(Error::Truncated {
            degree,
            truncation: s.bound(),
        });
    }
    Ok(s.component(degree))
}

/// `c_1(L)` as a polynomial in the roots, for a declared line.
pub fn line_class(setup: &Setup, line: &str) -> Result<GradedPoly> {
    let roots = setup.roots(line)?;
    if roots.len() != 1 {
        return Err(Error::InvalidSetup(format!("`{}` is not a line bundle", line)));
    }
    Ok(GradedPoly::term(Monomial::var_pow(roots[0], 1), int(1)))
}
