//! Subcommand bodies. Each builds a [`Report`]; none of them print.

use std::collections::HashMap;

use chowline_core::charclass::{
    borel_serre_check, ch, restriction_normal_bundle_check, VirtualBundle,
};
use chowline_core::chern_ring::{
    chern_class, chern_class_of_sum, chern_from_segre, dual_class, segre_class, tensor_line,
    whitney_expand, BundleDecl, IdentityCheck, SegreConvention, Setup, DEFAULT_TRUNCATION,
};
use chowline_core::dcoh::{c1_pairing_check, deligne_pairing_degree, FamilyDescriptor, MultidegreeLineBundle};
use chowline_core::picard::{picardify, rationalize, GroupoidSkeleton};
use chowline_core::pushforward::grr_codim1_check;
use chowline_core::symfun::{elem_sym_polys, rational_string, GradedPoly, Rational, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::evaluate::{evaluate, Context};
use crate::report::Report;
use crate::syntax::parse;
use crate::CliError;

/// Identities understood by `verify`.
pub const IDENTITIES: &[&str] = &[
    "whitney",
    "borel-serre",
    "restriction",
    "dual",
    "tensor-line",
    "segre",
    "c1-pairing",
    "ch-mult",
];

#[derive(Serialize)]
struct Component {
    degree: u32,
    value: String,
}

pub fn eval(command: &str, text: &str, ctx: &Context) -> Result<Report, CliError> {
    let expr = parse(text)?;
    let value = evaluate(&expr, ctx)?;
    let mut report = Report::new(command);
    report.result("expression", expr.to_string());
    report.result("value", ctx.setup.display_chern(&value)?);
    let components: Vec<Component> = (0..=value.max_degree().unwrap_or(0))
        .map(|d| value.component(d))
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(d, c)| {
            Ok(Component {
                degree: d as u32,
                value: ctx.setup.display_chern(&c)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    report.result("components", components);
    if let Some(tower) = &ctx.tower {
        if value.vars().iter().all(|v| matches!(v, Var::Taut(_))) {
            let reduced = tower.reduce(&value)?;
            report.result("reduced", reduced.poly().to_string());
            report.result("integral", rational_string(&tower.integrate(&value)?));
        }
    }
    Ok(report)
}

/// Parameters of `verify`.
#[derive(Clone, Debug, Default)]
pub struct VerifyParams {
    pub rank: Option<usize>,
    pub rank2: Option<usize>,
    pub k: Option<usize>,
    pub truncation: Option<u32>,
    pub count: usize,
    pub seed: u64,
    pub convention: Option<SegreConvention>,
    pub family: Option<FamilyInput>,
}

fn check_verdict(report: &mut Report, name: &str, setup: &Setup, check: &IdentityCheck) -> Result<(), CliError> {
    let residual = if check.holds {
        None
    } else {
        Some(setup.display_chern(&check.residual)?)
    };
    report.verdict(name, check.holds, residual);
    Ok(())
}

fn degrees(k: Option<usize>, max: usize) -> Vec<usize> {
    match k {
        Some(k) => vec![k],
        None => (0..=max).collect(),
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=6).into())
}

/// `e_k` of plain rationals.
fn elementary(values: &[Rational], k: usize) -> Rational {
    let mut e = vec![Rational::from_integer(1.into())];
    e.resize(values.len() + 1, Rational::from_integer(0.into()));
    for (i, a) in values.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let t = &e[j - 1] * a;
            e[j] += t;
        }
    }
    e.get(k).cloned().unwrap_or_else(|| Rational::from_integer(0.into()))
}

pub fn verify(command: &str, identity: &str, p: &VerifyParams) -> Result<Report, CliError> {
    let mut report = Report::new(command);
    let trunc = p.truncation.unwrap_or(DEFAULT_TRUNCATION);
    match identity {
        "whitney" => {
            let (r1, r2) = (p.rank.unwrap_or(2), p.rank2.unwrap_or(2));
            let ks = degrees(p.k, r1 + r2);
            let mut failures = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let mut exact = true;
            let mut residual = None;
            let mut sides = Vec::new();
            for &k in &ks {
                let (setup, rhs) = whitney_expand(k, r1, r2)?;
                let lhs = chern_class_of_sum(&setup, &["E'", "E''"], k)?;
                let check = IdentityCheck::compare(lhs.into_poly(), rhs.into_poly());
                if !check.holds && residual.is_none() {
                    residual = Some(setup.display_chern(&check.residual)?);
                }
                exact &= check.holds;
                sides.push((setup, check));
            }
            for _ in 0..p.count {
                for (k, (setup, check)) in ks.iter().zip(&sides) {
                    let mut at = HashMap::new();
                    let mut values = Vec::new();
                    for name in ["E'", "E''"] {
                        for v in setup.roots(name)? {
                            let q = random_rational(&mut rng);
                            values.push(q.clone());
                            at.insert(v, q);
                        }
                    }
                    let want = elementary(&values, *k);
                    let eval = |g: &GradedPoly| g.eval(&|v| at[&v].clone());
                    if eval(&check.lhs) != want || eval(&check.rhs) != want {
                        failures += 1;
                    }
                }
            }
            report.result("ranks", [r1, r2]);
            report.result("degrees", &ks);
            report.result("root_evaluations", p.count * ks.len());
            report.result("evaluation_failures", failures);
            report.verdict("exact", exact, residual);
            report.verdict("root_evaluation", failures == 0, None);
        }
        "borel-serre" | "restriction" => {
            let r = p.rank.unwrap_or(2);
            let check = if identity == "borel-serre" {
                borel_serre_check(r, trunc)?
            } else {
                restriction_normal_bundle_check(r, trunc)?
            };
            let setup = Setup::new(vec![BundleDecl::new("E", r.max(1))], 0, trunc)?;
            report.result("rank", r);
            report.result("truncation", trunc);
            if r > 0 {
                report.result("lhs", setup.display_chern(&check.lhs)?);
                report.result("rhs", setup.display_chern(&check.rhs)?);
            } else {
                report.result("lhs", check.lhs.to_string());
                report.result("rhs", check.rhs.to_string());
            }
            check_verdict(&mut report, identity, &setup, &check)?;
        }
        "dual" | "tensor-line" => {
            let r = p.rank.unwrap_or(3);
            let setup = Setup::new(
                vec![BundleDecl::new("E", r), BundleDecl::new("L", 1)],
                0,
                trunc,
            )?;
            let roots: Vec<GradedPoly> =
                setup.roots("E")?.into_iter().map(GradedPoly::var).collect();
            let l = GradedPoly::var(setup.roots("L")?[0]);
            let moved: Vec<GradedPoly> = if identity == "dual" {
                roots.iter().map(|x| -x).collect()
            } else {
                roots.iter().map(|x| x + &l).collect()
            };
            let oracle = elem_sym_polys(&moved, trunc);
            let ks = degrees(p.k, r.min(trunc as usize));
            for &k in &ks {
                let engine = if identity == "dual" {
                    dual_class(&setup, "E", k)?
                } else {
                    tensor_line(&setup, "E", "L", k)?
                };
                let want = oracle.get(k).cloned().unwrap_or_else(GradedPoly::zero);
                let check = IdentityCheck::compare(engine.into_poly(), want);
                check_verdict(&mut report, &format!("k={}", k), &setup, &check)?;
            }
            report.result("rank", r);
            report.result("degrees", &ks);
        }
        "segre" => {
            let r = p.rank.unwrap_or(3);
            let conv = p.convention.unwrap_or_default();
            let setup = Setup::new(vec![BundleDecl::new("E", r)], 0, trunc)?;
            let s: Vec<GradedPoly> = (0..=trunc as usize)
                .map(|k| segre_class(&setup, "E", k, conv).map(|c| c.into_poly()))
                .collect::<Result<_, _>>()?;
            let c: Vec<GradedPoly> = (0..=trunc as usize)
                .map(|k| chern_class(&setup, "E", k).map(|c| c.into_poly()))
                .collect::<Result<_, _>>()?;
            for k in 1..=trunc as usize {
                let mut acc = GradedPoly::zero();
                for i in 0..=k {
                    let term = &s[i] * &c[k - i];
                    match conv {
                        SegreConvention::Signed if i % 2 == 1 => acc -= &term,
                        _ => acc += &term,
                    }
                }
                let holds = acc.is_zero();
                let residual = if holds { None } else { Some(setup.display_chern(&acc)?) };
                report.verdict(&format!("recurrence k={}", k), holds, residual);
            }
            let rebuilt: bool = (0..=r.min(trunc as usize)).all(|k| {
                chern_from_segre(&setup, "E", k, conv).map(|x| *x == c[k]).unwrap_or(false)
            });
            report.result("rank", r);
            report.result(
                "convention",
                match conv {
                    SegreConvention::Signed => "signed",
                    SegreConvention::Fulton => "fulton",
                },
            );
            let shown: Vec<String> = s
                .iter()
                .take(r.min(4) + 1)
                .map(|x| setup.display_chern(x))
                .collect::<Result<_, _>>()?;
            report.result("segre", shown);
            report.verdict("chern_from_segre", rebuilt, None);
        }
        "c1-pairing" => {
            let fam = p
                .family
                .clone()
                .ok_or_else(|| CliError::Usage("c1-pairing needs --fiber, --base and --bundles".into()))?;
            let (fd, bundles) = fam.family_and_bundles()?;
            deligne_report(&mut report, &fd, &bundles)?;
        }
        "ch-mult" => {
            let d = p.truncation.unwrap_or(6);
            let r = p.rank.unwrap_or(3).clamp(1, 3);
            let setup = Setup::new(
                vec![BundleDecl::new("E", r), BundleDecl::new("F", 2), BundleDecl::new("L", 1)],
                0,
                d,
            )?;
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let count = if p.count == 0 { 50 } else { p.count };
            let mut failures = Vec::new();
            for i in 0..count {
                let v = random_tree(&mut rng, 2);
                let w = random_tree(&mut rng, 2);
                let lhs = ch(&VirtualBundle::tensor(v.clone(), w.clone()), &setup)?;
                let rhs = &*ch(&v, &setup)? * &*ch(&w, &setup)?;
                if *lhs != rhs {
                    failures.push(i);
                }
            }
            report.result("trees", count);
            report.result("truncation", d);
            report.result("failures", &failures);
            report.verdict("ch_tensor", failures.is_empty(), None);
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown identity `{}`; expected one of: {}",
                other,
                IDENTITIES.join(", ")
            )))
        }
    }
    Ok(report)
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

/// Family and line bundles as given on the command line or in a JSON file.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Deserialize)]
pub struct FamilyInput {
    #[serde(default)]
    pub fiber: Vec<u32>,
    #[serde(default)]
    pub base: Option<u32>,
    /// Each entry `[d_1, .., d_t, e]`.
    #[serde(default)]
    pub bundles: Option<Vec<Vec<i64>>>,
    /// For `grr`: `[d_1, .., d_t, e]` or a list of `[n, [d_1, .., d_t, e]]`.
    #[serde(default)]
    pub bundle: Option<serde_json::Value>,
}

impl FamilyInput {
    pub fn family(&self) -> Result<FamilyDescriptor, CliError> {
        let base = self
            .base
            .ok_or_else(|| CliError::Usage("the family needs a base dimension (--base)".into()))?;
        if self.fiber.is_empty() {
            return Err(CliError::Usage("the family needs fiber dimensions (--fiber)".into()));
        }
        Ok(FamilyDescriptor::new(self.fiber.clone(), base)?)
    }

    fn line(&self, v: &[i64]) -> Result<MultidegreeLineBundle, CliError> {
        if v.len() != self.fiber.len() + 1 {
            return Err(CliError::Usage(format!(
                "line bundle {:?} needs {} fiber degrees and a base twist",
                v,
                self.fiber.len()
            )));
        }
        Ok(MultidegreeLineBundle::from_slice(v).expect("nonempty"))
    }

    pub fn family_and_bundles(&self) -> Result<(FamilyDescriptor, Vec<MultidegreeLineBundle>), CliError> {
        let fam = self.family()?;
        let raw = self
            .bundles
            .as_ref()
            .ok_or_else(|| CliError::Usage("no line bundles given (--bundles)".into()))?;
        let lines = raw.iter().map(|v| self.line(v)).collect::<Result<_, _>>()?;
        Ok((fam, lines))
    }

    pub fn weighted_bundle(&self) -> Result<Vec<(i64, MultidegreeLineBundle)>, CliError> {
        let value = self
            .bundle
            .as_ref()
            .ok_or_else(|| CliError::Usage("no bundle given (--bundle)".into()))?;
        let bad = || CliError::Usage(format!("cannot read bundle {}", value));
        let items = value.as_array().ok_or_else(bad)?;
        if items.iter().all(|x| x.is_i64()) {
            let v: Vec<i64> = items.iter().map(|x| x.as_i64().unwrap()).collect();
            return Ok(vec![(1, self.line(&v)?)]);
        }
        items
            .iter()
            .map(|item| {
                let (n, l): (i64, Vec<i64>) =
                    serde_json::from_value(item.clone()).map_err(|_| bad())?;
                Ok((n, self.line(&l)?))
            })
            .collect()
    }
}

fn deligne_report(
    report: &mut Report,
    fam: &FamilyDescriptor,
    bundles: &[MultidegreeLineBundle],
) -> Result<(), CliError> {
    let pairing = deligne_pairing_degree(fam, bundles)?;
    let check = c1_pairing_check(fam, bundles)?;
    report.result("fiber", &fam.fiber);
    report.result("base", fam.base);
    report.result("degree", pairing.degree);
    report.result("rank_sum", pairing.rank_sum);
    report.result("pushforward_degree", check.pushforward_degree);
    report.result("rank_check", check.rank_check);
    report.result("c1_match", check.c1_match);
    report.verdict("rank_check", check.rank_check, None);
    report.verdict(
        "c1_match",
        check.c1_match,
        Some(format!("{} vs {}", check.degree, check.pushforward_degree)),
    );
    Ok(())
}

pub fn deligne(command: &str, input: &FamilyInput) -> Result<Report, CliError> {
    let (fam, bundles) = input.family_and_bundles()?;
    let mut report = Report::new(command);
    deligne_report(&mut report, &fam, &bundles)?;
    Ok(report)
}

pub fn grr(command: &str, input: &FamilyInput) -> Result<Report, CliError> {
    let fam = input.family()?;
    let bundle = input.weighted_bundle()?;
    let r = grr_codim1_check(&fam, &bundle)?;
    let mut report = Report::new(command);
    report.result("fiber", &fam.fiber);
    report.result("base", fam.base);
    report.result("det_degree", r.lhs_degree);
    report.result("pushforward_degree", &r.rhs_degree);
    report.verdict(
        "grr",
        r.equal,
        Some(format!("{} vs {}", r.lhs_degree, r.rhs_degree)),
    );
    Ok(report)
}

pub fn picard(command: &str, text: &str, rationalized: bool) -> Result<Report, CliError> {
    let skeleton = GroupoidSkeleton::from_json(text)?;
    let inv = picardify(&skeleton)?;
    let mut report = Report::new(command);
    report.result("invariants", inv.report());
    if rationalized {
        report.result("rationalized", rationalize(&inv).report());
    }
    report.verdict("eps_order_divides_2", inv.eps_has_order_two(), None);
    Ok(report)
}
