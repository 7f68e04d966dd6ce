//! Intersection rings of split projective-bundle towers over a point.
//!
//! Level `j` of a tower is `P(E_{j-1})` over level `j-1`, where `E_{j-1}` is a
//! direct sum of line classes on level `j-1` and `ξ_j = c_1(O(1))`. Projective
//! bundles parametrize lines, so `O(-1) ⊂ π^*E` and the Chow ring of level `j`
//! is free over level `j-1` on `1, ξ_j, .., ξ_j^{r-1}` with the relation
//! `Σ_i c_i(E) ξ_j^{r-i} = 0`. Pushforward uses `π_* ξ^{r-1+k} = s_k(E)` with
//! `s = 1/c(E)`.

use serde::{Deserialize, Serialize};

use crate::charclass::{ch, td, td_star, RootSource, VirtualBundle};
use crate::dcoh::{det_rf_degree, FamilyDescriptor, MultidegreeLineBundle};
use crate::error::{Error, Result};
use crate::symfun::{elem_sym_polys, series_invert, GradedPoly, Monomial, Rational, Var};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDescriptor {
    /// Each line as its `c_1` coefficients over `ξ_1..ξ_j` of the level below.
    pub lines: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub levels: Vec<LevelDescriptor>,
}

/// An iterated split projective bundle over a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    levels: Vec<Vec<Vec<i64>>>,
    dim: u32,
}

/// A reduced class on a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerClass {
    levels: usize,
    poly: GradedPoly,
}

impl TowerClass {
    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    pub fn into_poly(self) -> GradedPoly {
        self.poly
    }

    /// Number of tower levels the class lives on.
    pub fn levels(&self) -> usize {
        self.levels
    }
}

pub fn xi(level: usize) -> Var {
    Var::Taut(level as u16)
}

impl Tower {
    pub fn point() -> Self {
        Tower {
            levels: Vec::new(),
            dim: 0,
        }
    }

    /// Builds a tower; level `j` (0-based) takes lines over `ξ_1..ξ_j`.
    /// Shorter coefficient vectors are zero-padded.
    pub fn new(levels: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        let mut t = Tower::point();
        for lines in levels {
            t = t.over(lines)?;
        }
        Ok(t)
    }

    pub fn from_descriptor(d: &TowerDescriptor) -> Result<Self> {
        Tower::new(d.levels.iter().map(|l| l.lines.clone()).collect())
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor {
            levels: self
                .levels
                .iter()
                .map(|lines| LevelDescriptor {
                    lines: lines.clone(),
                })
                .collect(),
        }
    }

    /// Adds the level `P(⊕ lines)` on top.
    pub fn over(mut self, lines: Vec<Vec<i64>>) -> Result<Self> {
        let j = self.levels.len();
        if lines.is_empty() {
            return Err(Error::InvalidTower(format!("level {} has no lines", j + 1)));
        }
        let mut padded = Vec::with_capacity(lines.len());
        for mut l in lines {
            if l.len() > j {
                return Err(Error::InvalidTower(format!(
                    "line on level {} has {} coefficients, at most {} allowed",
                    j + 1,
                    l.len(),
                    j
                )));
            }
            l.resize(j, 0);
            padded.push(l);
        }
        self.dim += padded.len() as u32 - 1;
        self.levels.push(padded);
        Ok(self)
    }

    pub fn projective_space(n: u32) -> Self {
        Tower::product(&[n])
    }

    /// `P^{n_1} × .. × P^{n_k}` as successive trivial projective bundles.
    pub fn product(dims: &[u32]) -> Self {
        let mut t = Tower::point();
        for &n in dims {
            let j = t.levels.len();
            t = t
                .over(vec![vec![0; j]; n as usize + 1])
                .expect("trivial level is valid");
        }
        t
    }

    /// `P^m` (level 1) with the fiber factors of the family stacked above it.
    pub fn for_family(fam: &FamilyDescriptor) -> Result<Self> {
        fam.validate()?;
        let mut dims = vec![fam.base];
        dims.extend(&fam.fiber);
        Ok(Tower::product(&dims))
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    /// Rank of the bundle projectivized at level `j` (1-based).
    pub fn rank(&self, j: usize) -> usize {
        self.levels[j - 1].len()
    }

    /// The first `levels` levels.
    pub fn truncated(&self, levels: usize) -> Tower {
        let levels: Vec<_> = self.levels[..levels].to_vec();
        let dim = levels.iter().map(|l| l.len() as u32 - 1).sum();
        Tower { levels, dim }
    }

    pub fn xi(&self, j: usize) -> GradedPoly {
        GradedPoly::var(xi(j)).truncate(self.dim)
    }

    /// `c_1` of the line with the given coefficients over `ξ_1, ξ_2, ..`.
    pub fn line(&self, coeffs: &[i64]) -> Result<GradedPoly> {
        if coeffs.len() > self.levels.len() {
            return Err(Error::InvalidTower(format!(
                "line class has {} coefficients on a tower with {} levels",
                coeffs.len(),
                self.levels.len()
            )));
        }
        let vars: Vec<Var> = (1..=coeffs.len()).map(xi).collect();
        Ok(GradedPoly::linear(&vars, coeffs).truncate(self.dim))
    }

    /// Chern roots of the bundle projectivized at level `j`.
    pub fn level_roots(&self, j: usize) -> Vec<GradedPoly> {
        self.levels[j - 1]
            .iter()
            .map(|c| self.line(c).expect("validated"))
            .collect()
    }

    /// `c_i` of the bundle projectivized at level `j`, for `i = 0..=rank`.
    fn level_chern(&self, j: usize) -> Vec<GradedPoly> {
        elem_sym_polys(&self.level_roots(j), self.dim)
    }

    /// Segre classes `s_0..s_dim` (with `s = 1/c`) of the bundle at level `j`.
    pub fn level_segre(&self, j: usize) -> Vec<GradedPoly> {
        let total = self
            .level_chern(j)
            .iter()
            .fold(GradedPoly::zero().truncate(self.dim), |acc, c| &acc + c);
        let inv = series_invert(&total, self.dim).expect("c_0 = 1");
        (0..=self.dim).map(|k| inv.component(k)).collect()
    }

    fn check_vars(&self, p: &GradedPoly) -> Result<()> {
        for v in p.vars() {
            match v {
                Var::Taut(l) if (l as usize) >= 1 && (l as usize) <= self.levels.len() => {}
                other => {
                    return Err(Error::InvalidTower(format!(
                        "variable {} does not live on this tower",
                        other
                    )))
                }
            }
        }
        Ok(())
    }

    /// Reduces modulo the projective-bundle relations, top level first.
    pub fn reduce(&self, p: &GradedPoly) -> Result<TowerClass> {
        self.check_vars(p)?;
        let mut work = p.clone().truncate(self.dim);
        for j in (1..=self.levels.len()).rev() {
            let r = self.rank(j) as u32;
            let c = self.level_chern(j);
            // ξ^r = -Σ_{i≥1} c_i ξ^{r-i}
            let mut relation = GradedPoly::zero().truncate(self.dim);
            for (i, ci) in c.iter().enumerate().skip(1) {
                relation -= &(ci * &self.xi(j).pow(r - i as u32));
            }
            loop {
                let mut high = GradedPoly::zero().truncate(self.dim);
                let mut low = GradedPoly::zero().truncate(self.dim);
                for (m, q) in work.terms() {
                    let (e, rest) = m.split_var(xi(j));
                    if e >= r {
                        high.add_term(
                            rest.mul(&Monomial::var_pow(xi(j), e - r)),
                            q.clone(),
                        );
                    } else {
                        low.add_term(m.clone(), q.clone());
                    }
                }
                if high.is_zero() {
                    break;
                }
                work = &low + &(&high * &relation);
            }
        }
        Ok(TowerClass {
            levels: self.levels.len(),
            poly: work,
        })
    }

    /// Pushes a class forward along the top projection.
    ///
    /// `p = Σ_a ξ^a p_a` with `p_a` pulled back from below maps to
    /// `Σ_a p_a s_{a-r+1}(E)`; powers below the fiber dimension vanish.
    /// `p` need not be reduced in the top variable.
    pub fn push_level(&self, p: &GradedPoly) -> Result<TowerClass> {
        self.check_vars(p)?;
        let j = self.levels.len();
        if j == 0 {
            return Err(Error::InvalidTower("cannot push forward from a point".into()));
        }
        let r = self.rank(j) as u32;
        let segre = self.level_segre(j);
        let below = self.truncated(j - 1);
        let mut out = GradedPoly::zero().truncate(self.dim);
        for (m, q) in p.terms() {
            let (a, rest) = m.split_var(xi(j));
            if a + 1 < r {
                continue;
            }
            let k = (a + 1 - r) as usize;
            if let Some(s) = segre.get(k) {
                out += &(&GradedPoly::term(rest, q.clone()) * s);
            }
        }
        below.reduce(&out)
    }

    /// Pushes down to the sub-tower with `levels` levels.
    pub fn push_to(&self, p: &GradedPoly, levels: usize) -> Result<TowerClass> {
        let mut class = self.reduce(p)?;
        let mut current = self.clone();
        while current.num_levels() > levels {
            class = current.push_level(class.poly())?;
            current = current.truncated(current.num_levels() - 1);
        }
        Ok(class)
    }

    /// Degree of a class: its pushforward to the point.
    pub fn integrate(&self, p: &GradedPoly) -> Result<Rational> {
        Ok(self.push_to(p, 0)?.poly().constant_term())
    }

    /// Relative tangent bundle over the first `base_levels` levels, from the
    /// Euler sequences `T = π^*E ⊗ O(1) - O`.
    pub fn relative_tangent(&self, base_levels: usize) -> VirtualBundle {
        let mut parts = Vec::new();
        for j in base_levels + 1..=self.levels.len() {
            let mut unit = vec![0; j];
            unit[j - 1] = 1;
            let e = VirtualBundle::direct_sum(
                self.levels[j - 1]
                    .iter()
                    .map(|c| VirtualBundle::line(c.clone()))
                    .collect(),
            );
            parts.push(VirtualBundle::diff(
                VirtualBundle::tensor(e, VirtualBundle::line(unit)),
                VirtualBundle::Trivial,
            ));
        }
        VirtualBundle::direct_sum(parts)
    }

    pub fn tangent_bundle(&self) -> VirtualBundle {
        self.relative_tangent(0)
    }

    /// `χ(V) = ∫ ch(V) td(T)`; fails if the result is not an integer.
    pub fn euler_characteristic(&self, v: &VirtualBundle) -> Result<Rational> {
        let chv = ch(v, self)?;
        let tdt = td(&self.tangent_bundle(), self)?;
        let chi = self.integrate(&(&*chv * &*tdt))?;
        if !chi.is_integer() {
            return Err(Error::NonIntegralResult(crate::symfun::rational_string(&chi)));
        }
        Ok(chi)
    }

    /// Coefficient of `ξ_1` in `f_*(Π c_1(L_i))` pushed down to `base_levels`
    /// levels, where the base is a projective space.
    pub fn pushforward_degree_of_product(&self, lines: &[Vec<i64>], base_levels: usize) -> Result<i64> {
        let mut prod = GradedPoly::one().truncate(self.dim);
        for l in lines {
            prod = &prod * &self.line(l)?;
        }
        let pushed = self.push_to(&prod, base_levels)?;
        to_integer(&pushed.poly().coeff(&Monomial::var_pow(xi(1), 1)))
    }

    /// Relative degree `κ = ∫_{X/S} Π_{k≠i} c_1(L_k)` and the sign `(-1)^κ`
    /// of the symmetry swapping the equal slots `i` and `j`.
    pub fn symmetry_sign(
        &self,
        base_levels: usize,
        lines: &[Vec<i64>],
        i: usize,
        j: usize,
    ) -> Result<SymmetrySign> {
        let n = (self.dim - self.truncated(base_levels).dim) as usize;
        if lines.len() != n + 1 {
            return Err(Error::WrongBundleCount {
                expected: n + 1,
                got: lines.len(),
            });
        }
        if i >= lines.len() || j >= lines.len() {
            return Err(Error::Dimension("slot index out of range".into()));
        }
        if self.line(&lines[i])? != self.line(&lines[j])? {
            return Err(Error::UnequalBundles);
        }
        let mut prod = GradedPoly::one().truncate(self.dim);
        for (k, l) in lines.iter().enumerate() {
            if k != i {
                prod = &prod * &self.line(l)?;
            }
        }
        let kappa = to_integer(&self.push_to(&prod, base_levels)?.poly().constant_term())?;
        Ok(SymmetrySign {
            kappa,
            sign: if kappa % 2 == 0 { 1 } else { -1 },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetrySign {
    pub kappa: i64,
    pub sign: i64,
}

fn to_integer(q: &Rational) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::NonIntegralResult(crate::symfun::rational_string(q)));
    }
    i64::try_from(q.to_integer()).map_err(|_| Error::NonIntegralResult("overflow".into()))
}

impl RootSource for Tower {
    fn named_roots(&self, name: &str) -> Result<Vec<GradedPoly>> {
        Err(Error::UnknownBundle(name.to_string()))
    }

    fn line_root(&self, coeffs: &[i64]) -> Result<GradedPoly> {
        self.line(coeffs)
    }

    fn truncation(&self) -> u32 {
        self.dim
    }
}

/// Both sides of codimension-one Grothendieck–Riemann–Roch for a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrrReport {
    pub lhs_degree: i64,
    pub rhs_degree: String,
    pub equal: bool,
}

/// Compares `deg det Rf_* V` (cohomological, via Künneth) with the degree of
/// `f_*(ch(V) · td*(Ω_f))` in codimension one, for `V = Σ n_i L_i`.
pub fn grr_codim1_check(
    fam: &FamilyDescriptor,
    bundle: &[(i64, MultidegreeLineBundle)],
) -> Result<GrrReport> {
    let tower = Tower::for_family(fam)?;
    let mut lhs = 0;
    let mut parts = Vec::new();
    for (n, l) in bundle {
        lhs += n * det_rf_degree(fam, l)?.degree;
        parts.push(VirtualBundle::scale(*n, VirtualBundle::line(l.tower_coeffs())));
    }
    let v = VirtualBundle::direct_sum(parts);
    let cotangent = VirtualBundle::dual(tower.relative_tangent(1));
    let integrand = &*ch(&v, &tower)? * &*td_star(&cotangent, &tower)?;
    let pushed = tower.push_to(&integrand, 1)?;
    let rhs = pushed.poly().coeff(&Monomial::var_pow(xi(1), 1));
    Ok(GrrReport {
        lhs_degree: lhs,
        rhs_degree: crate::symfun::rational_string(&rhs),
        equal: Rational::from_integer(lhs.into()) == rhs,
    })
}
