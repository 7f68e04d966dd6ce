//! Finitely generated abelian groups presented as cokernels `Z^n / im R`.

use serde::{Deserialize, Serialize};

use super::snf::{integer_kernel, mat_vec, smith_normal_form, solve_integer, IntMatrix, SmithForm};
use crate::error::{Error, Result};

/// Presentation as JSON: generator count and relation vectors (each set to zero).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

/// Invariant summary `Z^free_rank ⊕ ⊕ Z/torsion_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct FGAbelianGroup {
    generators: usize,
    /// Relation columns: `generators × relation count`.
    relations: IntMatrix,
    relation_count: usize,
    snf: SmithForm,
}

impl PartialEq for FGAbelianGroup {
    /// Equality of presentations, not just of isomorphism classes.
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relation_columns() == other.relation_columns()
    }
}

impl FGAbelianGroup {
    /// `Z^generators / ⟨relations⟩`, relations given as vectors.
    pub fn new(generators: usize, relations: &[Vec<i64>]) -> Result<Self> {
        if let Some(bad) = relations.iter().find(|r| r.len() != generators) {
            return Err(Error::Dimension(format!(
                "relation of length {} in a group on {} generators",
                bad.len(),
                generators
            )));
        }
        let mut matrix = vec![vec![0; relations.len()]; generators];
        for (j, r) in relations.iter().enumerate() {
            for (i, &x) in r.iter().enumerate() {
                matrix[i][j] = x;
            }
        }
        Ok(Self::from_matrix(generators, matrix, relations.len()))
    }

    fn from_matrix(generators: usize, relations: IntMatrix, relation_count: usize) -> Self {
        let snf = smith_normal_form(&relations, generators, relation_count);
        FGAbelianGroup {
            generators,
            relations,
            relation_count,
            snf,
        }
    }

    pub fn from_presentation(p: &GroupPresentation) -> Result<Self> {
        Self::new(p.generators, &p.relations)
    }

    pub fn presentation(&self) -> GroupPresentation {
        GroupPresentation {
            generators: self.generators,
            relations: self.relation_columns(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::from_matrix(rank, vec![Vec::new(); rank], 0)
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z^free ⊕ ⊕ Z/d` from any list of moduli (not necessarily a divisibility chain).
    pub fn from_invariants(free_rank: usize, moduli: &[i64]) -> Self {
        let n = free_rank + moduli.len();
        let rels: Vec<Vec<i64>> = moduli
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut r = vec![0; n];
                r[i] = d;
                r
            })
            .collect();
        Self::new(n, &rels).expect("diagonal presentation has consistent lengths")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relation_columns(&self) -> Vec<Vec<i64>> {
        (0..self.relation_count)
            .map(|j| (0..self.generators).map(|i| self.relations[i][j]).collect())
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.snf.cokernel().1
    }

    /// Invariant factors `> 1`, each dividing the next.
    pub fn torsion(&self) -> Vec<i64> {
        self.snf.cokernel().0
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            free_rank: self.free_rank(),
            torsion: self.torsion(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.torsion().is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.torsion().iter().map(|&d| d as u128).product())
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.summary() == other.summary()
    }

    /// Canonical coordinates: torsion components reduced into `[0, d)`, then free ones.
    pub fn normal_form(&self, x: &[i64]) -> Vec<i64> {
        let y = mat_vec(&self.snf.u, x);
        let rank = self.snf.rank();
        let mut out = Vec::new();
        for (i, &d) in self.snf.diagonal.iter().enumerate() {
            if d > 1 {
                out.push(y[i].rem_euclid(d));
            }
        }
        out.extend_from_slice(&y[rank..]);
        out
    }

    pub fn is_zero(&self, x: &[i64]) -> bool {
        self.normal_form(x).iter().all(|&c| c == 0)
    }

    /// Is `x` in the relation subgroup, with a witness.
    pub fn relation_witness(&self, x: &[i64]) -> Option<Vec<i64>> {
        solve_integer(&self.relations, self.generators, self.relation_count, x)
    }

    fn check_shape(&self, target: &Self, t: &IntMatrix) -> Result<()> {
        if t.len() != target.generators || t.iter().any(|row| row.len() != self.generators) {
            return Err(Error::Dimension(format!(
                "map matrix must be {} × {}",
                target.generators, self.generators
            )));
        }
        Ok(())
    }

    /// Does `t` (target generators × source generators) send relations into relations.
    pub fn is_homomorphism(&self, target: &Self, t: &IntMatrix) -> Result<bool> {
        self.check_shape(target, t)?;
        Ok(self
            .relation_columns()
            .iter()
            .all(|r| target.is_zero(&mat_vec(t, r))))
    }

    pub fn is_surjective(&self, target: &Self, t: &IntMatrix) -> Result<bool> {
        self.check_shape(target, t)?;
        let h = target.generators;
        let cols = self.generators + target.relation_count;
        let joined: IntMatrix = (0..h)
            .map(|i| {
                let mut row = t[i].clone();
                row.extend_from_slice(&target.relations[i]);
                row
            })
            .collect();
        let snf = smith_normal_form(&joined, h, cols);
        Ok(snf.rank() == h && snf.diagonal.iter().all(|&d| d == 1))
    }

    pub fn is_injective(&self, target: &Self, t: &IntMatrix) -> Result<bool> {
        self.check_shape(target, t)?;
        let h = target.generators;
        let g = self.generators;
        let cols = g + target.relation_count;
        let joined: IntMatrix = (0..h)
            .map(|i| {
                let mut row = t[i].clone();
                row.extend(target.relations[i].iter().map(|x| -x));
                row
            })
            .collect();
        Ok(integer_kernel(&joined, h, cols)
            .iter()
            .all(|k| self.is_zero(&k[..g])))
    }

    /// Homomorphism and bijective.
    pub fn is_isomorphism(&self, target: &Self, t: &IntMatrix) -> Result<bool> {
        if !self.is_homomorphism(target, t)? {
            return Err(Error::NotAHomomorphism(
                "matrix does not respect the relations".into(),
            ));
        }
        Ok(self.is_surjective(target, t)? && self.is_injective(target, t)?)
    }

    /// `Hom(self, other)` from the invariant decompositions.
    pub fn hom(&self, other: &Self) -> Self {
        let (f, ds) = (self.free_rank(), self.torsion());
        let (f2, es) = (other.free_rank(), other.torsion());
        let mut moduli = Vec::new();
        for _ in 0..f {
            moduli.extend_from_slice(&es);
        }
        for &d in &ds {
            for &e in &es {
                let g = num_integer::gcd(d, e);
                if g > 1 {
                    moduli.push(g);
                }
            }
        }
        Self::from_invariants(f * f2, &moduli)
    }
}
