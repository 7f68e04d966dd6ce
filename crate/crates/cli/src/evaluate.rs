//! Validation and evaluation of parsed expressions against a setup.

use chowline_core::charclass::{self, evaluate_class, CharClassSpec, ClassKind as Kind, RootSource};
use chowline_core::chern_ring::{SegreConvention, Setup};
use chowline_core::pushforward::Tower;
use chowline_core::symfun::{rat, series_invert, GradedPoly, PowerSeries1, Rational};
use chowline_core::VirtualBundle;

use crate::syntax::{Bundle, ClassKind, Expr, Series};
use crate::CliError;

/// Named bundles from the setup, twisted lines from its tower if it has one.
pub struct Context {
    pub setup: Setup,
    pub tower: Option<Tower>,
    pub convention: SegreConvention,
}

impl Context {
    pub fn new(setup: Setup, convention: SegreConvention) -> Result<Self, CliError> {
        let tower = setup
            .tower()
            .map(Tower::from_descriptor)
            .transpose()
            .map_err(CliError::Core)?;
        Ok(Context { setup, tower, convention })
    }

    fn bound(&self) -> u32 {
        self.setup.truncation()
    }
}

impl RootSource for Context {
    fn named_roots(&self, name: &str) -> chowline_core::Result<Vec<GradedPoly>> {
        self.setup.named_roots(name)
    }

    fn line_root(&self, coeffs: &[i64]) -> chowline_core::Result<GradedPoly> {
        match &self.tower {
            Some(t) => Ok(t.line(coeffs)?.truncate(self.bound())),
            None => self.setup.line_root(coeffs),
        }
    }

    fn truncation(&self) -> u32 {
        self.bound()
    }
}

/// Checks names, degrees and line shapes before any arithmetic happens.
pub fn validate(e: &Expr, ctx: &Context) -> Result<(), CliError> {
    match e {
        Expr::Num(..) => Ok(()),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            validate(a, ctx)?;
            validate(b, ctx)
        }
        Expr::Neg(a) | Expr::Pow(a, _) => validate(a, ctx),
        Expr::Chern(k, b) | Expr::Segre(k, b) => {
            if *k < 0 {
                return Err(CliError::Validation(format!("degree {} is negative", k)));
            }
            validate_bundle(b, ctx)
        }
        Expr::Ch(b) | Expr::Td(b) | Expr::TdStar(b) | Expr::Rk(b) => validate_bundle(b, ctx),
        Expr::Class(_, s, b) => {
            if let Series::List(cs) = s {
                if cs.is_empty() {
                    return Err(CliError::Validation("empty coefficient list".into()));
                }
            }
            validate_bundle(b, ctx)
        }
    }
}

fn validate_bundle(b: &Bundle, ctx: &Context) -> Result<(), CliError> {
    match b {
        Bundle::Name(n) => ctx
            .setup
            .bundle(n)
            .map(|_| ())
            .map_err(|_| CliError::Validation(format!("unknown bundle `{}`", n))),
        Bundle::Trivial | Bundle::Int(_) => Ok(()),
        Bundle::Line(cs) => match &ctx.tower {
            Some(t) if cs.len() <= t.num_levels() => Ok(()),
            Some(t) => Err(CliError::Validation(format!(
                "O(..) has {} coefficients but the tower has {} levels",
                cs.len(),
                t.num_levels()
            ))),
            None if cs.iter().all(|&c| c == 0) => Ok(()),
            None => Err(CliError::Validation(
                "twisted lines O(..) need a tower in the setup".into(),
            )),
        },
        Bundle::Sum(a, b) | Bundle::Diff(a, b) | Bundle::Tensor(a, b) => {
            validate_bundle(a, ctx)?;
            validate_bundle(b, ctx)
        }
        Bundle::Neg(a) | Bundle::Dual(a) | Bundle::Det(a) => validate_bundle(a, ctx),
        Bundle::Lam(p, a) => {
            if *p < 0 {
                return Err(CliError::Validation(format!("exterior power {} is negative", p)));
            }
            validate_bundle(a, ctx)
        }
    }
}

pub fn to_virtual(b: &Bundle) -> VirtualBundle {
    match b {
        Bundle::Name(n) => VirtualBundle::named(n.clone()),
        Bundle::Trivial => VirtualBundle::Trivial,
        Bundle::Line(cs) => VirtualBundle::line(cs.clone()),
        Bundle::Int(n) => VirtualBundle::scale(*n, VirtualBundle::Trivial),
        Bundle::Sum(a, b) => VirtualBundle::sum(to_virtual(a), to_virtual(b)),
        Bundle::Diff(a, b) => VirtualBundle::diff(to_virtual(a), to_virtual(b)),
        Bundle::Tensor(a, b) => VirtualBundle::tensor(to_virtual(a), to_virtual(b)),
        Bundle::Neg(a) => VirtualBundle::scale(-1, to_virtual(a)),
        Bundle::Dual(a) => VirtualBundle::dual(to_virtual(a)),
        Bundle::Det(a) => VirtualBundle::det(to_virtual(a)),
        Bundle::Lam(p, a) => VirtualBundle::lambda(*p as u32, to_virtual(a)),
    }
}

fn series(s: &Series, order: usize) -> PowerSeries1 {
    match s {
        Series::Exp => PowerSeries1::exp(order),
        Series::Expm1 => PowerSeries1::exp_minus_one(order),
        Series::Todd => PowerSeries1::todd(order),
        Series::OnePlusT => PowerSeries1::one_plus_t(order),
        Series::List(cs) => PowerSeries1::new(cs.iter().map(|&(p, q)| rat(p, q)).collect()),
    }
}

/// Evaluates to a polynomial in Chern roots (and tower classes).
pub fn evaluate(e: &Expr, ctx: &Context) -> Result<GradedPoly, CliError> {
    validate(e, ctx)?;
    eval_inner(e, ctx)
}

fn eval_inner(e: &Expr, ctx: &Context) -> Result<GradedPoly, CliError> {
    let d = ctx.bound();
    Ok(match e {
        Expr::Num(p, q) => GradedPoly::constant(rat(*p, *q)).truncate(d),
        Expr::Add(a, b) => &eval_inner(a, ctx)? + &eval_inner(b, ctx)?,
        Expr::Sub(a, b) => &eval_inner(a, ctx)? - &eval_inner(b, ctx)?,
        Expr::Mul(a, b) => &eval_inner(a, ctx)? * &eval_inner(b, ctx)?,
        Expr::Neg(a) => -&eval_inner(a, ctx)?,
        Expr::Pow(a, n) => eval_inner(a, ctx)?.pow(*n),
        Expr::Chern(k, b) => {
            let c = charclass::total_chern(&to_virtual(b), ctx)?;
            c.component(*k as u32)
        }
        Expr::Segre(k, b) => {
            let c = charclass::total_chern(&to_virtual(b), ctx)?;
            let s = series_invert(&c, d)?.component(*k as u32);
            match ctx.convention {
                SegreConvention::Signed if k % 2 == 1 => -&s,
                _ => s,
            }
        }
        Expr::Ch(b) => charclass::ch(&to_virtual(b), ctx)?.into_poly(),
        Expr::Td(b) => charclass::td(&to_virtual(b), ctx)?.into_poly(),
        Expr::TdStar(b) => charclass::td_star(&to_virtual(b), ctx)?.into_poly(),
        Expr::Rk(b) => {
            GradedPoly::constant(Rational::from_integer(charclass::rank(&to_virtual(b), ctx)?.into()))
                .truncate(d)
        }
        Expr::Class(kind, s, b) => {
            let kind = match kind {
                ClassKind::Phi => Kind::Additive,
                ClassKind::Psi => Kind::Multiplicative,
            };
            let spec = CharClassSpec::new(kind, series(s, d as usize))?;
            evaluate_class(&spec, &to_virtual(b), ctx)?.into_poly()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use chowline_core::symfun::int;

    fn ctx() -> Context {
        Context::new(
            Setup::with_bundles(&[("E", 2), ("F", 3), ("L", 1)]).unwrap(),
            SegreConvention::Signed,
        )
        .unwrap()
    }

    fn eval_str(s: &str) -> GradedPoly {
        evaluate(&parse(s).unwrap(), &ctx()).unwrap()
    }

    #[test]
    fn basic_values() {
        assert!(eval_str("c(3, E)").is_zero());
        assert_eq!(eval_str("c(0, E)"), GradedPoly::one());
        assert_eq!(eval_str("rk(E*F - L)"), GradedPoly::from_int(5));
        assert_eq!(eval_str("ch(O)"), GradedPoly::one());
        assert_eq!(eval_str("td(O)").constant_term(), int(1));
        assert!(eval_str("tdstar(E) - td(dual(E))").is_zero());
        assert!(eval_str("ch(E*L) - ch(E)*ch(L)").is_zero());
        assert!(eval_str("c(1, E + F) - c(1, E) - c(1, F)").is_zero());
        assert!(eval_str("s(1, E) - c(1, E)").is_zero());
        assert!(eval_str("s(2, E) - c(1, E)^2 + c(2, E)").is_zero());
        assert!(eval_str("class(phi, exp, E) - ch(E)").is_zero());
        assert!(eval_str("class(psi, td, E) - td(E)").is_zero());
        assert!(eval_str("class(psi, 1+T, E) - c(0,E) - c(1,E) - c(2,E)").is_zero());
        assert!(eval_str("c(1, 2*E) - 2*c(1, E)").is_zero());
    }

    #[test]
    fn validation() {
        let c = ctx();
        for bad in ["c(-1,E)", "c(1,G)", "ch(lam(-1, E))", "ch(O(1))"] {
            assert!(
                matches!(evaluate(&parse(bad).unwrap(), &c), Err(CliError::Validation(_))),
                "{}",
                bad
            );
        }
        assert!(matches!(
            evaluate(&parse("class(psi, [2, 1], E)").unwrap(), &c),
            Err(CliError::Core(_))
        ));
    }
}
