//! Acceptance suite. Runs every criterion, prints one PASS or FAIL line per
//! criterion, and exits nonzero if any criterion fails.
//!
//! Oracles here deliberately avoid the engine's own shortcuts: total Chern
//! classes are expanded as explicit products `Π(1 + root)`, Whitney checks
//! evaluate roots at random integers and expand `Π(1 + a t)` over `i128`, and
//! the pairing and sign checks use closed-form multidegree formulas.

use std::time::{Duration, Instant};

use chowline_core::charclass::{borel_serre_check, ch, VirtualBundle};
use chowline_core::chern_ring::{
    chern_class, chern_class_of_sum, dual_class, segre_class, tensor_line, whitney_rhs,
    SegreConvention, Setup,
};
use chowline_core::dcoh::{
    cohomology_dims, deligne_pairing_degree, det_rf_degree, FamilyDescriptor,
    MultidegreeLineBundle,
};
use chowline_core::picard::{
    grothendieck_group, nat_transform_torsor, picardify, rationalize, FGAbelianGroup,
    GroupPresentation, GroupSummary, GroupoidSkeleton, MonoidPresentation, SymmetryElement,
};
use chowline_core::pushforward::{grr_codim1_check, Tower};
use chowline_core::symfun::{int, GradedPoly, Rational, Var};
use chowline_core::Error;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fmt_err(e: Error) -> String {
    e.to_string()
}

/// `Π (1 + ρ)` expanded by plain multiplication.
fn total_class_oracle(roots: &[GradedPoly], bound: u32) -> GradedPoly {
    let mut acc = GradedPoly::one().truncate(bound);
    for r in roots {
        acc = &acc * &(&GradedPoly::one() + r);
    }
    acc
}

fn root_polys(setup: &Setup, name: &str) -> Vec<GradedPoly> {
    setup
        .roots(name)
        .unwrap()
        .into_iter()
        .map(GradedPoly::var)
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for r in 0..=4 {
        let check = borel_serre_check(r, 8).map_err(fmt_err)?;
        ensure(check.holds && check.residual.is_zero(), || {
            format!("rank {}: residual {}", r, check.residual)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {:?}", elapsed))?;
    Ok(format!("ranks 0..4 at D = 8, exact zero residual, {:.2?}", elapsed))
}

/// Coefficients of `Π (1 + a t)`.
fn elementary_numeric(values: &[i128]) -> Vec<i128> {
    let mut e = vec![1i128];
    for &a in values {
        e.push(0);
        for j in (1..e.len()).rev() {
            e[j] += a * e[j - 1];
        }
    }
    e
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checks = 0;
    for r1 in 1..=3 {
        for r2 in 1..=3 {
            let setup = Setup::with_bundles(&[("A", r1), ("B", r2)]).map_err(fmt_err)?;
            let vars: Vec<Var> = setup
                .roots("A")
                .unwrap()
                .into_iter()
                .chain(setup.roots("B").unwrap())
                .collect();
            let lhs: Vec<GradedPoly> = (0..=r1 + r2)
                .map(|k| chern_class_of_sum(&setup, &["A", "B"], k).unwrap().into_poly())
                .collect();
            let rhs: Vec<GradedPoly> = (0..=r1 + r2)
                .map(|k| whitney_rhs(&setup, "A", "B", k).unwrap().into_poly())
                .collect();
            for _ in 0..100 {
                let values: Vec<i128> = vars.iter().map(|_| rng.gen_range(-9..=9)).collect();
                let at = |v: Var| -> Rational {
                    let i = vars.iter().position(|&w| w == v).unwrap();
                    int(values[i] as i64)
                };
                let oracle = elementary_numeric(&values);
                for k in 0..=r1 + r2 {
                    let want = Rational::from_integer(oracle[k].into());
                    let (l, r) = (lhs[k].eval(&at), rhs[k].eval(&at));
                    ensure(l == want && r == want, || {
                        format!("ranks ({}, {}), k = {}, roots {:?}", r1, r2, k, values)
                    })?;
                }
                checks += 1;
            }
        }
    }
    // three-step filtration A ⊂ A⊕B ⊂ A⊕B⊕C: both bracketings agree exactly
    let setup = Setup::with_bundles(&[("A", 2), ("B", 3), ("C", 2)]).map_err(fmt_err)?;
    for k in 0..=7 {
        let whole = chern_class_of_sum(&setup, &["A", "B", "C"], k).unwrap().into_poly();
        let mut left = GradedPoly::zero();
        let mut right = GradedPoly::zero();
        for i in 0..=k {
            left += &(&*chern_class_of_sum(&setup, &["A", "B"], i).unwrap()
                * &*chern_class(&setup, "C", k - i).unwrap());
            right += &(&*chern_class(&setup, "A", i).unwrap()
                * &*chern_class_of_sum(&setup, &["B", "C"], k - i).unwrap());
        }
        ensure(left == whole && right == whole, || format!("associativity fails at k = {}", k))?;
    }
    Ok(format!("{} random root evaluations, 0 failures; 3-step associativity exact", checks))
}

fn criterion_3() -> Outcome {
    for r in 1..=5 {
        let setup = Setup::with_bundles(&[("E", r)]).map_err(fmt_err)?;
        let negated: Vec<GradedPoly> = root_polys(&setup, "E").iter().map(|x| -x).collect();
        let oracle = total_class_oracle(&negated, 8);
        for k in 0..=5 {
            let engine = dual_class(&setup, "E", k).map_err(fmt_err)?.into_poly();
            ensure(engine == oracle.component(k as u32), || format!("r = {}, k = {}", r, k))?;
        }
    }
    Ok("c_k(E^∨) = (-1)^k c_k(E) for r ≤ 5, k ≤ 5".into())
}

fn criterion_4() -> Outcome {
    for r in 1..=5 {
        let setup = Setup::with_bundles(&[("E", r), ("L", 1)]).map_err(fmt_err)?;
        let l = root_polys(&setup, "L").remove(0);
        let shifted: Vec<GradedPoly> = root_polys(&setup, "E").iter().map(|x| x + &l).collect();
        let oracle = total_class_oracle(&shifted, 8);
        for k in 0..=5 {
            let engine = tensor_line(&setup, "E", "L", k).map_err(fmt_err)?.into_poly();
            ensure(engine == oracle.component(k as u32), || format!("r = {}, k = {}", r, k))?;
        }
    }
    // the alternative coefficient C(r-k+1, i) at r = 2, k = 2
    let setup = Setup::with_bundles(&[("E", 2), ("L", 1)]).map_err(fmt_err)?;
    let l = root_polys(&setup, "L").remove(0);
    let (r, k) = (2i64, 2usize);
    let mut printed = GradedPoly::zero();
    for i in 0..=k {
        let coeff = chowline_core::symfun::binomial(r - k as i64 + 1, i as i64);
        printed += &(&*chern_class(&setup, "E", k - i).unwrap() * &l.pow(i as u32)).scale_int(coeff);
    }
    let shifted: Vec<GradedPoly> = root_polys(&setup, "E").iter().map(|x| x + &l).collect();
    let oracle = total_class_oracle(&shifted, 8).component(2);
    ensure(&oracle - &printed == l.pow(2), || {
        format!("oracle minus printed = {}", &oracle - &printed)
    })?;
    Ok("shifted-root oracle matches for r, k ≤ 5; C(r-k+1, i) misses c_1(L)^2 at r = k = 2".into())
}

fn criterion_5() -> Outcome {
    for r in 1..=5 {
        let setup = Setup::with_bundles(&[("E", r)]).map_err(fmt_err)?;
        let c: Vec<GradedPoly> = (0..=8)
            .map(|k| chern_class(&setup, "E", k).unwrap().into_poly())
            .collect();
        let signed: Vec<GradedPoly> = (0..=8)
            .map(|k| segre_class(&setup, "E", k, SegreConvention::Signed).unwrap().into_poly())
            .collect();
        let fulton: Vec<GradedPoly> = (0..=8)
            .map(|k| segre_class(&setup, "E", k, SegreConvention::Fulton).unwrap().into_poly())
            .collect();
        for k in 1..=8 {
            let mut alt = GradedPoly::zero();
            let mut ful = GradedPoly::zero();
            for i in 0..=k {
                let t = &signed[i] * &c[k - i];
                if i % 2 == 0 {
                    alt += &t;
                } else {
                    alt -= &t;
                }
                ful += &(&fulton[i] * &c[k - i]);
            }
            ensure(alt.is_zero() && ful.is_zero(), || format!("r = {}, k = {}", r, k))?;
            let translated = if k % 2 == 0 { fulton[k].clone() } else { -&fulton[k] };
            ensure(signed[k] == translated, || format!("translation r = {}, k = {}", r, k))?;
        }
    }
    Ok("both conventions satisfy the recurrence for k ≤ 8, r ≤ 5".into())
}

/// `∫_{F × P^1 / P^1} Π c_1(L_i)` by the multinomial closed form on `P^n × P^1`.
fn pairing_oracle(n: usize, a: &[i64], b: &[i64]) -> i64 {
    // degree of f_* is Σ_j b_j Π_{k≠j} a_k
    (0..=n)
        .map(|j| b[j] * (0..=n).filter(|&k| k != j).map(|k| a[k]).product::<i64>())
        .sum()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let range: Vec<i64> = (-3..=3).collect();
    let mut instances = 0;
    // fiber P^1
    let fam = FamilyDescriptor::new(vec![1], 1).map_err(fmt_err)?;
    let tower = Tower::for_family(&fam).map_err(fmt_err)?;
    for &a0 in &range {
        for &b0 in &range {
            for &a1 in &range {
                for &b1 in &range {
                    let ls = [
                        MultidegreeLineBundle::new(vec![a0], b0),
                        MultidegreeLineBundle::new(vec![a1], b1),
                    ];
                    check_pairing(&fam, &tower, &ls, 1)?;
                    instances += 1;
                }
            }
        }
    }
    // fiber P^2, full grid
    let fam = FamilyDescriptor::new(vec![2], 1).map_err(fmt_err)?;
    let tower = Tower::for_family(&fam).map_err(fmt_err)?;
    for idx in 0..7usize.pow(6) {
        let mut rest = idx;
        let mut a = [0i64; 3];
        let mut b = [0i64; 3];
        for i in 0..3 {
            a[i] = (rest % 7) as i64 - 3;
            rest /= 7;
        }
        for i in 0..3 {
            b[i] = (rest % 7) as i64 - 3;
            rest /= 7;
        }
        let ls: Vec<MultidegreeLineBundle> =
            (0..3).map(|i| MultidegreeLineBundle::new(vec![a[i]], b[i])).collect();
        check_pairing(&fam, &tower, &ls, 2)?;
        instances += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {:?}", elapsed))?;
    Ok(format!("{} instances agree, rank sums all 0, {:.2?}", instances, elapsed))
}

fn check_pairing(
    fam: &FamilyDescriptor,
    tower: &Tower,
    ls: &[MultidegreeLineBundle],
    n: usize,
) -> Result<(), String> {
    let pairing = deligne_pairing_degree(fam, ls).map_err(fmt_err)?;
    let lines: Vec<Vec<i64>> = ls.iter().map(|l| l.tower_coeffs()).collect();
    let pushed = tower.pushforward_degree_of_product(&lines, 1).map_err(fmt_err)?;
    let a: Vec<i64> = ls.iter().map(|l| l.fiber[0]).collect();
    let b: Vec<i64> = ls.iter().map(|l| l.twist).collect();
    let oracle = pairing_oracle(n, &a, &b);
    ensure(
        pairing.rank_sum == 0 && pairing.degree == pushed && pushed == oracle,
        || format!("{:?}: pairing {:?}, pushforward {}, oracle {}", ls, pairing, pushed, oracle),
    )
}

fn criterion_7() -> Outcome {
    let fam = FamilyDescriptor::new(vec![1], 1).map_err(fmt_err)?;
    for a in -3..=3 {
        for b in -3..=3 {
            let l = MultidegreeLineBundle::new(vec![a], b);
            let report = grr_codim1_check(&fam, &[(1, l.clone())]).map_err(fmt_err)?;
            let det = det_rf_degree(&fam, &l).map_err(fmt_err)?.degree;
            let expected = (a + 1) * b;
            ensure(
                report.equal && report.lhs_degree == expected && det == expected
                    && report.rhs_degree == expected.to_string(),
                || format!("O({}, {}): {:?}, expected {}", a, b, report, expected),
            )?;
        }
    }
    Ok("49 line bundles O(a, b) on P^1 × P^1 → P^1, degree (a+1)b on both sides".into())
}

/// `C(n+d, n)` as a polynomial in `d`.
fn binomial_poly(n: i64, d: i64) -> Rational {
    let mut acc = Rational::one();
    for i in 1..=n {
        acc = acc * int(d + i) / int(i);
    }
    acc
}

fn criterion_8() -> Outcome {
    for n in 1..=3u32 {
        let tower = Tower::projective_space(n);
        for d in -6..=6 {
            let chi = tower
                .euler_characteristic(&VirtualBundle::line(vec![d]))
                .map_err(fmt_err)?;
            let alternating: i64 = cohomology_dims(n, d)
                .iter()
                .enumerate()
                .map(|(i, h)| if i % 2 == 0 { *h } else { -*h })
                .sum();
            let expected = binomial_poly(n as i64, d);
            ensure(chi == expected && int(alternating) == expected, || {
                format!("P^{} O({}): χ = {}, Σ(-1)^i h^i = {}, expected {}", n, d, chi, alternating, expected)
            })?;
        }
    }
    Ok("χ(P^n, O(d)) = C(n+d, n) for n ≤ 3, |d| ≤ 6, matching cohomology_dims".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in [1u32, 2] {
        let fam = FamilyDescriptor::new(vec![n], 1).map_err(fmt_err)?;
        let tower = Tower::for_family(&fam).map_err(fmt_err)?;
        let fiber = Tower::projective_space(n);
        for _ in 0..10 {
            let count = n as usize + 1;
            let mut ls: Vec<Vec<i64>> = (0..count)
                .map(|_| vec![rng.gen_range(-4..=4), rng.gen_range(-4..=4)])
                .collect();
            let i = rng.gen_range(0..count);
            let mut j = rng.gen_range(0..count - 1);
            if j >= i {
                j += 1;
            }
            ls[j] = ls[i].clone();
            let got = tower.symmetry_sign(1, &ls, i, j).map_err(fmt_err)?;
            // κ is the fiber degree of the other slots: closed form and a direct
            // integral on the fiber P^n
            let closed: i64 = (0..count).filter(|&k| k != i).map(|k| ls[k][1]).product();
            let mut prod = GradedPoly::one();
            for (k, l) in ls.iter().enumerate() {
                if k != i {
                    prod = &prod * &fiber.line(&[l[1]]).unwrap();
                }
            }
            let integral = fiber.integrate(&prod).map_err(fmt_err)?;
            let expected_sign = if closed.rem_euclid(2) == 0 { 1 } else { -1 };
            ensure(
                got.kappa == closed && integral == int(closed) && got.sign == expected_sign,
                || format!("P^{} fiber, lines {:?}, slots ({}, {}): {:?}, κ = {}", n, ls, i, j, got, closed),
            )?;
        }
    }
    Ok("20 random P^1 and P^2 fiber instances reproduce (-1)^κ".into())
}

fn criterion_10() -> Outcome {
    let z = GroupSummary { free_rank: 1, torsion: vec![] };
    let kn = grothendieck_group(&MonoidPresentation::free(1)).map_err(fmt_err)?;
    ensure(kn.summary() == z, || format!("K(N) = {:?}", kn.summary()))?;
    let m = MonoidPresentation {
        generators: 2,
        relations: vec![(vec![2, 0], vec![0, 2])],
    };
    let k = grothendieck_group(&m).map_err(fmt_err)?;
    ensure(
        k.summary() == GroupSummary { free_rank: 1, torsion: vec![2] },
        || format!("⟨a, b | 2a = 2b⟩ gives {:?}", k.summary()),
    )?;
    let z2 = GroupPresentation { generators: 1, relations: vec![vec![2]] };
    let finite_sets = GroupoidSkeleton {
        monoid: MonoidPresentation::free(1),
        chain: vec![z2.clone(); 4],
        translations: vec![vec![vec![1]]; 3],
        symmetry: vec![SymmetryElement { object: vec![1], chain_index: 0, element: vec![1] }],
    };
    let p = picardify(&finite_sets).map_err(fmt_err)?;
    ensure(
        p.pi0.summary() == z
            && p.pi1.summary() == GroupSummary { free_rank: 0, torsion: vec![2] }
            && !p.eps_is_trivial()
            && p.eps_has_order_two(),
        || format!("finite sets gave {:?}", p.report()),
    )?;
    // an ε of order 4 is refused
    let mut bad = finite_sets.clone();
    bad.chain = vec![GroupPresentation { generators: 1, relations: vec![vec![4]] }; 4];
    ensure(matches!(picardify(&bad), Err(Error::InvalidSign(_))), || {
        "order-4 sign accepted".into()
    })?;
    let q = rationalize(&p);
    ensure(
        q.pi0.summary() == z && q.pi1.is_trivial() && q.eps_is_trivial() && rationalize(&q) == q,
        || format!("rationalization gave {:?}", q.report()),
    )?;
    let hom = FGAbelianGroup::from_invariants(0, &[2]).hom(&FGAbelianGroup::from_invariants(0, &[4]));
    ensure(hom.order() == Some(2), || format!("|Hom(Z/2, Z/4)| = {:?}", hom.order()))?;
    ensure(nat_transform_torsor(&p, &p).order() == Some(2), || "torsor size".into())?;
    Ok("K(N) = Z, Z ⊕ Z/2, finite sets (Z, Z/2, ε ≠ 0), rationalization, |Hom| = 2".into())
}

fn random_tree(rng: &mut ChaCha8Rng, depth: u32) -> VirtualBundle {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..5) {
        0 => VirtualBundle::named("E"),
        1 => VirtualBundle::named("F"),
        2 => VirtualBundle::named("L"),
        3 => VirtualBundle::Trivial,
        _ => VirtualBundle::lambda(rng.gen_range(0..=2), VirtualBundle::named("F")),
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..7) {
        0 => VirtualBundle::sum(random_tree(rng, depth - 1), random_tree(rng, depth - 1)),
        1 => VirtualBundle::diff(random_tree(rng, depth - 1), random_tree(rng, depth - 1)),
        2 => VirtualBundle::dual(random_tree(rng, depth - 1)),
        3 => VirtualBundle::det(random_tree(rng, depth - 1)),
        4 => VirtualBundle::scale(rng.gen_range(-2..=2), random_tree(rng, depth - 1)),
        _ => leaf(rng),
    }
}

fn criterion_11() -> Outcome {
    let setup = Setup::new(
        vec![
            chowline_core::BundleDecl::new("E", 3),
            chowline_core::BundleDecl::new("F", 2),
            chowline_core::BundleDecl::new("L", 1),
        ],
        0,
        6,
    )
    .map_err(fmt_err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..50 {
        let v = random_tree(&mut rng, 2);
        let w = random_tree(&mut rng, 2);
        let lhs = ch(&VirtualBundle::tensor(v.clone(), w.clone()), &setup).map_err(fmt_err)?;
        let rhs = &*ch(&v, &setup).map_err(fmt_err)? * &*ch(&w, &setup).map_err(fmt_err)?;
        ensure(*lhs == rhs, || format!("tree pair {}: {:?} ⊗ {:?}", t, v, w))?;
    }
    Ok("50 random virtual tree pairs at D = 6".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Borel-Serre", criterion_1),
        ("Whitney and filtrations", criterion_2),
        ("duality", criterion_3),
        ("tensor by a line", criterion_4),
        ("Segre recurrence", criterion_5),
        ("Deligne pairing vs pushforward", criterion_6),
        ("codimension-one GRR", criterion_7),
        ("HRR integrality", criterion_8),
        ("symmetry sign", criterion_9),
        ("Picardification", criterion_10),
        ("ch multiplicativity", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} ({}): {}", i + 1, name, detail),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} ({}): {}", i + 1, name, detail);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failures, failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
