//! Picard-category invariants `(π0, π1, ε)` computed from finite data.
//!
//! A symmetric monoidal groupoid is described by a presentation of its monoid
//! of isomorphism classes, the abelian(ized) automorphism groups along one
//! cofinal chain of objects with translation maps between consecutive
//! members, and the images of the symmetry `c_{x,x}` for the monoid
//! generators. `π0` is the Grothendieck group of the monoid. `π1` is the
//! colimit of the chain, accepted only once the supplied chain has visibly
//! stabilized, and `ε` is read off from the symmetry images.

mod group;
pub mod snf;

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

pub use group::{FGAbelianGroup, GroupPresentation, GroupSummary};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};

use crate::error::{Error, Result};
use snf::mat_vec;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidPresentation {
    pub generators: usize,
    /// Each pair `(u, v)` imposes `u = v` on `N^generators`.
    #[serde(default)]
    pub relations: Vec<(Vec<u64>, Vec<u64>)>,
}

impl MonoidPresentation {
    pub fn free(generators: usize) -> Self {
        MonoidPresentation {
            generators,
            relations: Vec::new(),
        }
    }
}

/// `Z^g / ⟨u − v⟩`.
pub fn grothendieck_group(m: &MonoidPresentation) -> Result<FGAbelianGroup> {
    let rels: Vec<Vec<i64>> = m
        .relations
        .iter()
        .map(|(u, v)| {
            if u.len() != m.generators || v.len() != m.generators {
                return Err(Error::Dimension(format!(
                    "monoid relation vectors must have length {}",
                    m.generators
                )));
            }
            Ok(u.iter().zip(v).map(|(&a, &b)| a as i64 - b as i64).collect())
        })
        .collect::<Result<_>>()?;
    FGAbelianGroup::new(m.generators, &rels)
}

/// The image of `c_{x,x}` for an object `x`, as an element of the chain group
/// with index `chain_index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub object: Vec<u64>,
    pub chain_index: usize,
    pub element: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSkeleton {
    pub monoid: MonoidPresentation,
    pub chain: Vec<GroupPresentation>,
    /// `translations[k]` maps `chain[k]` to `chain[k + 1]`; rows index target generators.
    #[serde(default)]
    pub translations: Vec<IntMatrix>,
    #[serde(default)]
    pub symmetry: Vec<SymmetryElement>,
}

impl GroupoidSkeleton {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSetup(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PicardInvariants {
    pub pi0: FGAbelianGroup,
    pub pi1: FGAbelianGroup,
    /// `ε` as a matrix: rows index `π1` generators, columns `π0` generators.
    pub eps: IntMatrix,
    /// Set after rationalization; the groups then stand for `Q`-vector spaces.
    pub rational: bool,
    /// First chain index from which every connecting map is an isomorphism.
    pub stabilized_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsEntry {
    pub generator: usize,
    /// Normal-form coordinates in `π1`.
    pub value: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardReport {
    pub pi0: GroupSummary,
    pub pi1: GroupSummary,
    pub eps: Vec<EpsEntry>,
    pub eps_nontrivial: bool,
    pub rational: bool,
    pub stabilized_at: Option<usize>,
}

impl PicardInvariants {
    pub fn eps_of(&self, generator: usize) -> Vec<i64> {
        self.eps.iter().map(|row| row[generator]).collect()
    }

    pub fn eps_is_trivial(&self) -> bool {
        (0..self.pi0.generators()).all(|i| self.pi1.is_zero(&self.eps_of(i)))
    }

    /// `2ε = 0` in `π1`.
    pub fn eps_has_order_two(&self) -> bool {
        (0..self.pi0.generators()).all(|i| {
            let doubled: Vec<i64> = self.eps_of(i).iter().map(|x| 2 * x).collect();
            self.pi1.is_zero(&doubled)
        })
    }

    pub fn report(&self) -> PicardReport {
        let eps = (0..self.pi0.generators())
            .map(|i| EpsEntry {
                generator: i,
                value: self.pi1.normal_form(&self.eps_of(i)),
            })
            .collect();
        PicardReport {
            pi0: self.pi0.summary(),
            pi1: self.pi1.summary(),
            eps,
            eps_nontrivial: !self.eps_is_trivial(),
            rational: self.rational,
            stabilized_at: self.stabilized_at,
        }
    }
}

fn chain_groups(g: &GroupoidSkeleton) -> Result<Vec<FGAbelianGroup>> {
    if g.chain.is_empty() {
        return Err(Error::ChainNotStabilized("the chain is empty".into()));
    }
    if g.translations.len() + 1 != g.chain.len() {
        return Err(Error::Dimension(format!(
            "{} chain groups need {} translations, got {}",
            g.chain.len(),
            g.chain.len() - 1,
            g.translations.len()
        )));
    }
    g.chain.iter().map(FGAbelianGroup::from_presentation).collect()
}

/// Computes `(π0, π1, ε)` for a groupoid skeleton.
pub fn picardify(g: &GroupoidSkeleton) -> Result<PicardInvariants> {
    let pi0 = grothendieck_group(&g.monoid)?;
    let groups = chain_groups(g)?;
    let mut iso = Vec::with_capacity(g.translations.len());
    for (k, t) in g.translations.iter().enumerate() {
        if !groups[k].is_homomorphism(&groups[k + 1], t)? {
            return Err(Error::NonHomomorphicTranslation(k));
        }
        iso.push(groups[k].is_surjective(&groups[k + 1], t)? && groups[k].is_injective(&groups[k + 1], t)?);
    }
    let last = groups.len() - 1;
    let stabilized_at = if last == 0 {
        // a single group is its own colimit only when every automorphism group is trivial
        if groups[0].is_trivial() {
            0
        } else {
            return Err(Error::ChainNotStabilized(
                "a single nontrivial group gives no evidence of stabilization".into(),
            ));
        }
    } else {
        if !iso[last - 1] {
            return Err(Error::ChainNotStabilized(format!(
                "translation {} → {} is not an isomorphism",
                last - 1,
                last
            )));
        }
        iso.iter().rposition(|&b| !b).map_or(0, |k| k + 1)
    };
    let pi1 = groups[last].clone();

    // push a chain element forward to the last group
    let transport = |index: usize, element: &[i64]| -> Result<Vec<i64>> {
        if index > last || element.len() != groups[index].generators() {
            return Err(Error::InvalidSign(format!(
                "element does not belong to chain group {}",
                index
            )));
        }
        let mut x = element.to_vec();
        for t in &g.translations[index..] {
            x = mat_vec(t, &x);
        }
        Ok(x)
    };

    let ngen = g.monoid.generators;
    let mut eps_cols: Vec<Option<Vec<i64>>> = vec![None; ngen];
    let mut extra = Vec::new();
    for s in &g.symmetry {
        if s.object.len() != ngen {
            return Err(Error::InvalidSign("symmetry object has the wrong length".into()));
        }
        let value = transport(s.chain_index, &s.element)?;
        let unit = s.object.iter().sum::<u64>() == 1;
        match s.object.iter().position(|&c| c == 1) {
            Some(i) if unit => {
                if let Some(prev) = &eps_cols[i] {
                    let diff: Vec<i64> = prev.iter().zip(&value).map(|(a, b)| a - b).collect();
                    if !pi1.is_zero(&diff) {
                        return Err(Error::InvalidSign(format!(
                            "conflicting symmetry images for generator {}",
                            i
                        )));
                    }
                }
                eps_cols[i] = Some(value);
            }
            _ => extra.push((s.object.clone(), value)),
        }
    }
    let eps_cols: Vec<Vec<i64>> = eps_cols
        .into_iter()
        .map(|c| c.unwrap_or_else(|| vec![0; pi1.generators()]))
        .collect();
    let eps: IntMatrix = (0..pi1.generators())
        .map(|r| eps_cols.iter().map(|c| c[r]).collect())
        .collect();
    let inv = PicardInvariants {
        pi0,
        pi1,
        eps,
        rational: false,
        stabilized_at: Some(stabilized_at),
    };
    let eps_at = |obj: &[i64]| -> Vec<i64> { mat_vec(&inv.eps, obj) };

    // symmetry images of composite objects must follow from the generators
    for (obj, value) in &extra {
        let obj: Vec<i64> = obj.iter().map(|&c| c as i64).collect();
        let diff: Vec<i64> = eps_at(&obj).iter().zip(value).map(|(a, b)| a - b).collect();
        if !inv.pi1.is_zero(&diff) {
            return Err(Error::InvalidSign(
                "symmetry image of a composite object is not additive".into(),
            ));
        }
    }
    if !inv.eps_has_order_two() {
        return Err(Error::InvalidSign("2ε ≠ 0".into()));
    }
    // ε must descend to the Grothendieck group
    for rel in inv.pi0.relation_columns() {
        if !inv.pi1.is_zero(&eps_at(&rel)) {
            return Err(Error::InvalidSign(
                "ε does not respect the monoid relations".into(),
            ));
        }
    }
    Ok(inv)
}

/// `π_k ⊗ Q`: torsion and `ε` die, free ranks survive.
pub fn rationalize(p: &PicardInvariants) -> PicardInvariants {
    let pi0 = FGAbelianGroup::free(p.pi0.free_rank());
    let pi1 = FGAbelianGroup::free(p.pi1.free_rank());
    let eps = vec![vec![0; pi0.generators()]; pi1.generators()];
    PicardInvariants {
        pi0,
        pi1,
        eps,
        rational: true,
        stabilized_at: p.stabilized_at,
    }
}

/// `Hom(π0(P), π1(P'))`, the group acting simply transitively on natural
/// transformations between two functors `P → P'`.
pub fn nat_transform_torsor(p: &PicardInvariants, q: &PicardInvariants) -> FGAbelianGroup {
    p.pi0.hom(&q.pi1)
}

/// Are the maps induced on `π0` and `π1` both isomorphisms.
pub fn equivalence_check(
    p: &PicardInvariants,
    q: &PicardInvariants,
    f0: &IntMatrix,
    f1: &IntMatrix,
) -> Result<bool> {
    Ok(p.pi0.is_isomorphism(&q.pi0, f0)? && p.pi1.is_isomorphism(&q.pi1, f1)?)
}

/// A Grayson–Quillen pair `(A, A')` standing for `A' − A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectPair<T> {
    pub neg: T,
    pub pos: T,
}

impl<T> ObjectPair<T> {
    pub fn new(neg: T, pos: T) -> Self {
        ObjectPair { neg, pos }
    }
}

impl<T: Clone + Sub<Output = T>> ObjectPair<T> {
    pub fn class(&self) -> T {
        self.pos.clone() - self.neg.clone()
    }
}

/// `(A, A')·(B, B') = (A⊗B' ⊕ A'⊗B, A⊗B ⊕ A'⊗B')`.
pub fn gq_pair_product<T>(x: &ObjectPair<T>, y: &ObjectPair<T>) -> ObjectPair<T>
where
    T: Clone + Add<Output = T> + Mul<Output = T>,
{
    let (a, a1) = (x.neg.clone(), x.pos.clone());
    let (b, b1) = (y.neg.clone(), y.pos.clone());
    ObjectPair {
        neg: a.clone() * b1.clone() + a1.clone() * b.clone(),
        pos: a * b + a1 * b1,
    }
}
