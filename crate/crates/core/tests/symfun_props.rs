//! Ring axioms, the Chern-basis round trip and the universal-polynomial
//! properties of additive and multiplicative series.

use chowline_core::symfun::{
    from_chern_basis, int, phi_components, phi_components_with_roots, psi_components_with_roots,
    to_chern_basis, GradedPoly, Monomial, PowerSeries1, Rational, Var,
};
use proptest::prelude::*;

fn poly_strategy(nvars: u16, max_terms: usize) -> impl Strategy<Value = GradedPoly> {
    let term = (
        proptest::collection::vec((0..nvars, 0u32..3), 0..4),
        -10i64..=10,
    );
    proptest::collection::vec(term, 0..=max_terms).prop_map(|terms| {
        let mut p = GradedPoly::zero();
        for (exps, c) in terms {
            let m = Monomial::from_exps(exps.into_iter().map(|(v, e)| (Var::gen(v), e)));
            p.add_term(m, int(c));
        }
        p
    })
}

fn chern(block: u16, degree: u16) -> Var {
    Var::Chern { block, degree }
}

fn roots(block: u16, r: u16) -> Vec<Var> {
    (0..r).map(|index| Var::Root { block, index }).collect()
}

/// Random polynomial in `c_1..c_r` of weighted degree at most `max_deg`.
fn chern_poly_strategy(r: u16, max_deg: u32) -> impl Strategy<Value = GradedPoly> {
    let term = (proptest::collection::vec((1..=r, 0u32..3), 0..3), -10i64..=10);
    proptest::collection::vec(term, 0..5).prop_map(move |terms| {
        let mut p = GradedPoly::zero();
        for (exps, c) in terms {
            let m = Monomial::from_exps(exps.into_iter().map(|(d, e)| (chern(0, d), e)));
            if m.degree() <= max_deg {
                p.add_term(m, int(c));
            }
        }
        p
    })
}

fn series_strategy(order: usize, constant: i64) -> impl Strategy<Value = PowerSeries1> {
    proptest::collection::vec(-10i64..=10, order).prop_map(move |cs| {
        let mut coeffs = vec![int(constant)];
        coeffs.extend(cs.into_iter().map(int));
        PowerSeries1::new(coeffs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(6, 5), b in poly_strategy(6, 5), c in poly_strategy(6, 5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &GradedPoly::one(), a.clone());
    }

    #[test]
    fn truncation_commutes_with_products(a in poly_strategy(4, 4), b in poly_strategy(4, 4), d in 0u32..6) {
        let full = (&a * &b).truncate(d);
        let early = &a.clone().truncate(d) * &b.clone().truncate(d);
        prop_assert_eq!(full, early);
    }

    #[test]
    fn chern_basis_round_trip(
        (r, q) in (1u16..=4).prop_flat_map(|r| (Just(r), chern_poly_strategy(r, 6)))
    ) {
        let blocks = vec![roots(0, r)];
        let expanded = from_chern_basis(&q, &blocks);
        prop_assert_eq!(to_chern_basis(&expanded, &blocks).unwrap(), q);
    }

    #[test]
    fn phi_additivity(phi in series_strategy(6, 0), k in 1usize..=6) {
        let big = phi_components(&phi, k).unwrap();
        // c_i ↦ Σ_{m+n=i} c'_m c''_n
        let split = |i: u16| -> GradedPoly {
            let mut acc = GradedPoly::zero();
            for m in 0..=i {
                let left = if m == 0 { GradedPoly::one() } else { GradedPoly::var(chern(1, m)) };
                let right = if m == i { GradedPoly::one() } else { GradedPoly::var(chern(2, i - m)) };
                acc += &(&left * &right);
            }
            acc
        };
        let lhs = big.substitute(&|v| match v {
            Var::Chern { block: 0, degree } => Some(split(degree)),
            _ => None,
        });
        let relabel = |b: u16| big.map_vars(&|v| match v {
            Var::Chern { block: 0, degree } => chern(b, degree),
            other => other,
        });
        prop_assert_eq!(lhs, &relabel(1) + &relabel(2));
    }

    #[test]
    fn components_independent_of_root_count(
        phi in series_strategy(5, 0),
        psi in series_strategy(5, 1),
        k in 1usize..=4,
    ) {
        prop_assert_eq!(
            phi_components_with_roots(&phi, k, k).unwrap(),
            phi_components_with_roots(&phi, k, k + 2).unwrap()
        );
        prop_assert_eq!(
            psi_components_with_roots(&psi, k, k).unwrap(),
            psi_components_with_roots(&psi, k, k + 2).unwrap()
        );
    }

    #[test]
    fn series_inverse(s in series_strategy(6, 1)) {
        let inv = s.invert().unwrap();
        let prod = s.mul(&inv);
        prop_assert_eq!(prod.coeff(0), int(1));
        for k in 1..=6 {
            prop_assert_eq!(prod.coeff(k), Rational::from_integer(0.into()));
        }
    }
}
