use num_traits::{One, Zero};

use super::{GradedPoly, Monomial, PowerSeries1, Rational, Var};
use crate::error::{Error, Result};

/// The elementary symmetric polynomial `σ_k` of `vars`.
pub fn elem_sym(k: usize, vars: &[Var]) -> GradedPoly {
    if k == 0 {
        return GradedPoly::one();
    }
    if k > vars.len() {
        return GradedPoly::zero();
    }
    // e_j(v_1..v_i) = e_j(v_1..v_{i-1}) + v_i e_{j-1}(v_1..v_{i-1})
    let mut e: Vec<GradedPoly> = vec![GradedPoly::one()];
    e.resize(k + 1, GradedPoly::zero());
    for &v in vars {
        let x = GradedPoly::var(v);
        for j in (1..=k).rev() {
            let t = &e[j - 1] * &x;
            e[j] += &t;
        }
    }
    e.swap_remove(k)
}

/// `σ_0..σ_r` of arbitrary graded elements, truncated at `bound`.
pub fn elem_sym_polys(roots: &[GradedPoly], bound: u32) -> Vec<GradedPoly> {
    let mut e: Vec<GradedPoly> = vec![GradedPoly::one().truncate(bound)];
    e.resize(roots.len() + 1, GradedPoly::zero().truncate(bound));
    for (i, x) in roots.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let t = &e[j - 1] * x;
            e[j] += &t;
        }
    }
    e
}

fn chern_var(block: usize, degree: usize) -> Var {
    Var::Chern {
        block: block as u16,
        degree: degree as u16,
    }
}

fn check_symmetric(p: &GradedPoly, block: usize, roots: &[Var]) -> Result<()> {
    for w in roots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let swapped = p.map_vars(&|v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        });
        if swapped != *p {
            return Err(Error::NotSymmetric { block });
        }
    }
    Ok(())
}

/// Rewrites a polynomial that is symmetric within each root block in terms of
/// the elementary symmetric polynomials of the blocks.
///
/// Block `b` contributes variables `Var::Chern { block: b, degree: k }` for
/// `1 <= k <= blocks[b].len()`. Variables outside every block pass through.
pub fn to_chern_basis(p: &GradedPoly, blocks: &[Vec<Var>]) -> Result<GradedPoly> {
    let mut current = p.clone();
    for (b, roots) in blocks.iter().enumerate() {
        if roots.is_empty() {
            continue;
        }
        check_symmetric(&current, b, roots)?;
        current = reduce_block(&current, b, roots)?;
    }
    Ok(current)
}

fn reduce_block(p: &GradedPoly, block: usize, roots: &[Var]) -> Result<GradedPoly> {
    let r = roots.len();
    let elem: Vec<GradedPoly> = (0..=r).map(|k| elem_sym(k, roots)).collect();
    let mut work = p.clone();
    let mut out = GradedPoly::zero().truncate(p.bound());
    loop {
        // leading block exponent in lex order on the block variables
        let lead = work
            .terms()
            .map(|(m, _)| roots.iter().map(|&v| m.exponent(v)).collect::<Vec<u32>>())
            .max();
        let Some(alpha) = lead else { break };
        if alpha.iter().all(|&e| e == 0) {
            out += &work;
            break;
        }
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric { block });
        }
        // coefficient polynomial of x^alpha in the remaining variables
        let mut coef = GradedPoly::zero();
        for (m, q) in work.terms() {
            if roots.iter().zip(&alpha).all(|(&v, &e)| m.exponent(v) == e) {
                let rest = Monomial::from_exps(
                    m.exps().iter().copied().filter(|(v, _)| !roots.contains(v)),
                );
                coef.add_term(rest, q.clone());
            }
        }
        let mut elem_prod = GradedPoly::one();
        let mut chern_mono = Vec::new();
        for i in 0..r {
            let next = if i + 1 < r { alpha[i + 1] } else { 0 };
            let e = alpha[i] - next;
            if e > 0 {
                elem_prod = &elem_prod * &elem[i + 1].pow(e);
                chern_mono.push((chern_var(block, i + 1), e));
            }
        }
        work -= &(&coef * &elem_prod);
        out += &(&coef * &GradedPoly::term(Monomial::from_exps(chern_mono), Rational::one()));
    }
    Ok(out)
}

/// Substitutes `c_k^{(b)} ↦ σ_k(blocks[b])`, inverting [`to_chern_basis`].
pub fn from_chern_basis(p: &GradedPoly, blocks: &[Vec<Var>]) -> GradedPoly {
    p.substitute(&|v| match v {
        Var::Chern { block, degree } => blocks
            .get(block as usize)
            .map(|roots| elem_sym(degree as usize, roots)),
        _ => None,
    })
}

fn root_vars(r: usize) -> Vec<Var> {
    (0..r)
        .map(|i| Var::Root {
            block: 0,
            index: i as u16,
        })
        .collect()
}

/// The universal polynomial `Φ_k(c_1..c_k)` with `Σ_j φ_k(T_j) = Φ_k(σ_1..σ_k)`.
pub fn phi_components(phi: &PowerSeries1, k: usize) -> Result<GradedPoly> {
    phi_components_with_roots(phi, k, k)
}

/// As [`phi_components`], expanding over `r >= k` formal roots.
pub fn phi_components_with_roots(phi: &PowerSeries1, k: usize, r: usize) -> Result<GradedPoly> {
    if !phi.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    assert!(r >= k && k >= 1, "need r >= k >= 1");
    let roots = root_vars(r);
    let ck = phi.coeff(k);
    let mut power_sum = GradedPoly::zero();
    for &v in &roots {
        power_sum += &GradedPoly::term(Monomial::var_pow(v, k as u32), ck.clone());
    }
    to_chern_basis(&power_sum, &[roots])
}

/// Degree-`k` part of `Π_j ψ(T_j)` in terms of `c_1..c_k`.
pub fn psi_components(psi: &PowerSeries1, k: usize) -> Result<GradedPoly> {
    psi_components_with_roots(psi, k, k)
}

pub fn psi_components_with_roots(psi: &PowerSeries1, k: usize, r: usize) -> Result<GradedPoly> {
    if !psi.coeff(0).is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    assert!(r >= k, "need r >= k");
    let roots = root_vars(r);
    let bound = k as u32;
    let mut prod = GradedPoly::one().truncate(bound);
    for &v in &roots {
        prod = &prod * &psi.compose(&GradedPoly::var(v), bound);
    }
    to_chern_basis(&prod.component(bound), &[roots])
}

/// Inverse of a graded element with unit degree-0 part, truncated at `bound`.
pub fn series_invert(s: &GradedPoly, bound: u32) -> Result<GradedPoly> {
    let s = s.clone().truncate(bound);
    if !s.constant_term().is_one() {
        return Err(Error::UnitPartNotOne);
    }
    // 1/(1+u) = Σ (-u)^m, with u nilpotent modulo degree > bound
    let neg_u = &GradedPoly::one() - &s;
    let mut out = GradedPoly::one().truncate(bound);
    let mut power = GradedPoly::one().truncate(bound);
    loop {
        power = &power * &neg_u;
        if power.is_zero() {
            break;
        }
        out += &power;
    }
    Ok(out)
}
