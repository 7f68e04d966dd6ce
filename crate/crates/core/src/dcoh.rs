//! Cohomology of line bundles on products of projective spaces, determinants
//! of cohomology for constant product families `F × P^m → P^m`, and Deligne
//! pairing degrees through the alternating-subset determinant formula.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pushforward::Tower;
use crate::symfun::binomial;

/// The family `X = P^{n_1} × .. × P^{n_t} × P^m → P^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub fiber: Vec<u32>,
    pub base: u32,
}

impl FamilyDescriptor {
    pub fn new(fiber: Vec<u32>, base: u32) -> Result<Self> {
        let f = FamilyDescriptor { fiber, base };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.fiber.is_empty() || self.fiber.contains(&0) || self.base == 0 {
            return Err(Error::UnsupportedFamily(
                "fiber and base dimensions must all be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Total fiber dimension `n`.
    pub fn fiber_dimension(&self) -> u32 {
        self.fiber.iter().sum()
    }
}

/// `O(d_1, .., d_t) ⊠ O_{P^m}(e)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultidegreeLineBundle {
    pub fiber: Vec<i64>,
    pub twist: i64,
}

impl MultidegreeLineBundle {
    pub fn new(fiber: Vec<i64>, twist: i64) -> Self {
        MultidegreeLineBundle { fiber, twist }
    }

    /// Parses `[d_1, .., d_t, e]`.
    pub fn from_slice(v: &[i64]) -> Option<Self> {
        let (twist, fiber) = v.split_last()?;
        Some(MultidegreeLineBundle::new(fiber.to_vec(), *twist))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        MultidegreeLineBundle {
            fiber: self.fiber.iter().zip(&other.fiber).map(|(a, b)| a + b).collect(),
            twist: self.twist + other.twist,
        }
    }

    pub fn trivial(t: usize) -> Self {
        MultidegreeLineBundle::new(vec![0; t], 0)
    }

    /// Coefficients of `c_1` on the family's tower, base class first.
    pub fn tower_coeffs(&self) -> Vec<i64> {
        std::iter::once(self.twist).chain(self.fiber.iter().copied()).collect()
    }
}

/// A graded line bundle on `P^m` up to isomorphism: `(rank, degree)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedLineDegree {
    pub rank: i64,
    pub degree: i64,
}

/// `h^0..h^n` of `O(d)` on `P^n`.
pub fn cohomology_dims(n: u32, d: i64) -> Vec<i64> {
    let n64 = n as i64;
    let mut h = vec![0; n as usize + 1];
    if d >= 0 {
        h[0] = binomial(n64 + d, n64);
    }
    if d < -n64 {
        h[n as usize] = binomial(-d - 1, n64);
    }
    h
}

/// `χ(P^n, O(d)) = Σ (-1)^i h^i`.
pub fn euler_characteristic_pn(n: u32, d: i64) -> i64 {
    cohomology_dims(n, d)
        .iter()
        .enumerate()
        .map(|(i, h)| if i % 2 == 0 { *h } else { -*h })
        .sum()
}

/// Fiber Euler characteristic by Künneth.
fn fiber_euler(fam: &FamilyDescriptor, fiber_degrees: &[i64]) -> i64 {
    fam.fiber
        .iter()
        .zip(fiber_degrees)
        .map(|(&n, &d)| euler_characteristic_pn(n, d))
        .product()
}

fn check_shape(fam: &FamilyDescriptor, l: &MultidegreeLineBundle) -> Result<()> {
    if l.fiber.len() != fam.fiber.len() {
        return Err(Error::Dimension(format!(
            "line bundle has {} fiber degrees, family has {} factors",
            l.fiber.len(),
            fam.fiber.len()
        )));
    }
    Ok(())
}

/// `det Rf_* L` as a graded line: `Rf_* L = H^•(F, O(d)) ⊗ O(e)`.
pub fn det_rf_degree(fam: &FamilyDescriptor, l: &MultidegreeLineBundle) -> Result<GradedLineDegree> {
    fam.validate()?;
    check_shape(fam, l)?;
    let rank = fiber_euler(fam, &l.fiber);
    Ok(GradedLineDegree {
        rank,
        degree: l.twist * rank,
    })
}

/// Degree of the Deligne pairing and the alternating rank sum, which vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairingDegree {
    pub degree: i64,
    pub rank_sum: i64,
}

/// `Σ_{I ⊆ {0..n}} (-1)^{n+1-|I|} deg det Rf_*(⊗_{i∈I} L_i)`.
pub fn deligne_pairing_degree(
    fam: &FamilyDescriptor,
    bundles: &[MultidegreeLineBundle],
) -> Result<PairingDegree> {
    fam.validate()?;
    let n = fam.fiber_dimension() as usize;
    if bundles.len() != n + 1 {
        return Err(Error::WrongBundleCount {
            expected: n + 1,
            got: bundles.len(),
        });
    }
    for l in bundles {
        check_shape(fam, l)?;
    }
    let mut degree = 0;
    let mut rank_sum = 0;
    for mask in 0u32..(1 << (n + 1)) {
        let mut l = MultidegreeLineBundle::trivial(fam.fiber.len());
        for (i, b) in bundles.iter().enumerate() {
            if mask & (1 << i) != 0 {
                l = l.tensor(b);
            }
        }
        let sign = if (n + 1 - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
        let g = det_rf_degree(fam, &l)?;
        degree += sign * g.degree;
        rank_sum += sign * g.rank;
    }
    Ok(PairingDegree { degree, rank_sum })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingCheck {
    pub degree: i64,
    pub pushforward_degree: i64,
    pub rank_check: bool,
    pub c1_match: bool,
}

/// Compares the pairing degree with the degree of `f_*(c_1(L_0)···c_1(L_n))`.
pub fn c1_pairing_check(
    fam: &FamilyDescriptor,
    bundles: &[MultidegreeLineBundle],
) -> Result<PairingCheck> {
    let pairing = deligne_pairing_degree(fam, bundles)?;
    let tower = Tower::for_family(fam)?;
    let lines: Vec<Vec<i64>> = bundles.iter().map(|l| l.tower_coeffs()).collect();
    let pushed = tower.pushforward_degree_of_product(&lines, 1)?;
    Ok(PairingCheck {
        degree: pairing.degree,
        pushforward_degree: pushed,
        rank_check: pairing.rank_sum == 0,
        c1_match: pairing.degree == pushed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1_over_p1() -> FamilyDescriptor {
        FamilyDescriptor::new(vec![1], 1).unwrap()
    }

    fn lb(a: i64, b: i64) -> MultidegreeLineBundle {
        MultidegreeLineBundle::new(vec![a], b)
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(cohomology_dims(1, 3), vec![4, 0]);
        assert_eq!(cohomology_dims(1, -1), vec![0, 0]);
        assert_eq!(cohomology_dims(2, -4), vec![0, 0, 3]);
        assert_eq!(cohomology_dims(2, -1), vec![0, 0, 0]);
        assert_eq!(euler_characteristic_pn(1, -3), -2);
    }

    #[test]
    fn det_examples() {
        let fam = p1_over_p1();
        assert_eq!(
            det_rf_degree(&fam, &lb(3, 5)).unwrap(),
            GradedLineDegree { rank: 4, degree: 20 }
        );
        assert_eq!(
            det_rf_degree(&fam, &lb(-1, 7)).unwrap(),
            GradedLineDegree { rank: 0, degree: 0 }
        );
        let fam = FamilyDescriptor::new(vec![1, 1], 1).unwrap();
        assert_eq!(
            det_rf_degree(&fam, &MultidegreeLineBundle::new(vec![1, 1], 2)).unwrap(),
            GradedLineDegree { rank: 4, degree: 8 }
        );
    }

    #[test]
    fn pairing_examples() {
        let fam = p1_over_p1();
        let d = deligne_pairing_degree(&fam, &[lb(2, 3), lb(5, 7)]).unwrap();
        assert_eq!(d, PairingDegree { degree: 29, rank_sum: 0 });
        let d = deligne_pairing_degree(&fam, &[lb(0, 0), lb(4, 0)]).unwrap();
        assert_eq!(d.degree, 0);
        let p2 = FamilyDescriptor::new(vec![2], 1).unwrap();
        let ls = [lb(1, 2), lb(2, 3), lb(3, 5)];
        // Σ_j b_j Π_{k≠j} a_k
        let expected = 2 * 2 * 3 + 3 * 3 + 5 * 2;
        assert_eq!(deligne_pairing_degree(&p2, &ls).unwrap().degree, expected);
        assert_eq!(
            deligne_pairing_degree(&fam, &[lb(1, 1)]),
            Err(Error::WrongBundleCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn c1_pairing_examples() {
        let fam = p1_over_p1();
        let c = c1_pairing_check(&fam, &[lb(1, 0), lb(0, 1)]).unwrap();
        assert_eq!((c.degree, c.pushforward_degree, c.c1_match), (1, 1, true));
        let c = c1_pairing_check(&fam, &[lb(2, 3), lb(5, 7)]).unwrap();
        assert_eq!((c.degree, c.pushforward_degree), (29, 29));
        let c = c1_pairing_check(&fam, &[lb(2, 0), lb(-3, 0)]).unwrap();
        assert_eq!((c.degree, c.pushforward_degree, c.rank_check), (0, 0, true));
    }

    #[test]
    fn family_validation() {
        assert!(FamilyDescriptor::new(vec![], 1).is_err());
        assert!(FamilyDescriptor::new(vec![1], 0).is_err());
        assert!(det_rf_degree(&p1_over_p1(), &MultidegreeLineBundle::new(vec![1, 1], 0)).is_err());
    }
}
