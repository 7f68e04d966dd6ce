//! Surface syntax for class expressions.
//!
//! Two contexts share one token stream. In class context `*` is the ring
//! product; inside a bundle argument (`c(k, V)`, `ch(V)`, ...) `*` is the
//! tensor product, `+`/`-` are direct and virtual sums, and an integer `n`
//! stands for `n·O`. The printer emits the minimal parenthesization, so
//! printing and reparsing returns the same tree.

use std::fmt;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    Exp,
    Expm1,
    Todd,
    OnePlusT,
    /// Coefficients `c_0, c_1, ..` as literals `(numerator, denominator)`.
    List(Vec<(i64, i64)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Phi,
    Psi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Literal `p` or `p/q`, kept unreduced so it prints back verbatim.
    Num(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Chern(i64, Bundle),
    Segre(i64, Bundle),
    Ch(Bundle),
    Td(Bundle),
    TdStar(Bundle),
    Rk(Bundle),
    Class(ClassKind, Series, Bundle),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bundle {
    Name(String),
    Trivial,
    /// `O(a_1, .., a_j)` on a tower.
    Line(Vec<i64>),
    /// `n` copies of `O`.
    Int(i64),
    Sum(Box<Bundle>, Box<Bundle>),
    Diff(Box<Bundle>, Box<Bundle>),
    Tensor(Box<Bundle>, Box<Bundle>),
    Neg(Box<Bundle>),
    Dual(Box<Bundle>),
    Det(Box<Bundle>),
    Lam(i64, Box<Bundle>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{}`", n),
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, CliError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (l, c) = (line, column);
        if ch == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let single = match ch {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, line: l, column: c });
            i += 1;
            column += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| CliError::Syntax {
                line: l,
                column: c,
                message: format!("integer literal {} is too large", s),
            })?;
            column += i - start;
            out.push(Spanned { tok: Tok::Num(n), line: l, column: c });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                i += 1;
            }
            column += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l,
                column: c,
            });
            continue;
        }
        return Err(CliError::Syntax {
            line: l,
            column: c,
            message: format!("unexpected character `{}`", ch),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, CliError> {
        let s = &self.toks[self.pos];
        Err(CliError::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), CliError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", want, self.peek()))
        }
    }

    fn signed_int(&mut self) -> Result<i64, CliError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.next();
        }
        match self.next() {
            Tok::Num(n) => Ok(if negative { -n } else { n }),
            other => {
                self.pos -= 1;
                self.error(format!("expected an integer, found {}", other))
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.next();
            match self.next() {
                Tok::Num(n) if n <= u32::MAX as i64 => base = Expr::Pow(Box::new(base), n as u32),
                other => {
                    self.pos -= 1;
                    return self.error(format!("expected a nonnegative exponent, found {}", other));
                }
            }
        }
        Ok(base)
    }

    fn literal(&mut self) -> Result<(i64, i64), CliError> {
        let Tok::Num(p) = self.next() else {
            self.pos -= 1;
            return self.error("expected a number");
        };
        if *self.peek() == Tok::Slash {
            self.next();
            match self.next() {
                Tok::Num(q) if q > 0 => return Ok((p, q)),
                _ => {
                    self.pos -= 1;
                    return self.error("expected a positive denominator");
                }
            }
        }
        Ok((p, 1))
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        match self.peek().clone() {
            Tok::Num(_) => {
                let (p, q) = self.literal()?;
                Ok(Expr::Num(p, q))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek_at(1) != Tok::LParen {
                    return self.error(format!(
                        "`{}` is not a class; wrap bundles in c(k, ..), ch(..), td(..) and so on",
                        name
                    ));
                }
                self.call(&name)
            }
            other => self.error(format!("unexpected {}", other)),
        }
    }

    fn call(&mut self, name: &str) -> Result<Expr, CliError> {
        let known = ["c", "s", "ch", "td", "tdstar", "rk", "class"];
        if !known.contains(&name) {
            return self.error(format!("unknown function `{}`", name));
        }
        self.next();
        self.expect(Tok::LParen)?;
        let e = match name {
            "c" | "s" => {
                let k = self.signed_int()?;
                self.expect(Tok::Comma)?;
                let b = self.bundle()?;
                if name == "c" {
                    Expr::Chern(k, b)
                } else {
                    Expr::Segre(k, b)
                }
            }
            "ch" => Expr::Ch(self.bundle()?),
            "td" => Expr::Td(self.bundle()?),
            "tdstar" => Expr::TdStar(self.bundle()?),
            "rk" => Expr::Rk(self.bundle()?),
            _ => {
                let kind = match self.next() {
                    Tok::Ident(s) if s == "phi" => ClassKind::Phi,
                    Tok::Ident(s) if s == "psi" => ClassKind::Psi,
                    _ => {
                        self.pos -= 1;
                        return self.error("expected `phi` or `psi`");
                    }
                };
                self.expect(Tok::Comma)?;
                let series = self.series()?;
                self.expect(Tok::Comma)?;
                Expr::Class(kind, series, self.bundle()?)
            }
        };
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn series(&mut self) -> Result<Series, CliError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let series = match s.as_str() {
                    "exp" => Series::Exp,
                    "expm1" => Series::Expm1,
                    "td" => Series::Todd,
                    _ => return self.error(format!("unknown series `{}`", s)),
                };
                self.next();
                Ok(series)
            }
            Tok::Num(1) if *self.peek_at(1) == Tok::Plus => {
                self.next();
                self.next();
                match self.next() {
                    Tok::Ident(t) if t == "T" => Ok(Series::OnePlusT),
                    _ => {
                        self.pos -= 1;
                        self.error("expected `T` in `1+T`")
                    }
                }
            }
            Tok::LBracket => {
                self.next();
                let mut coeffs = Vec::new();
                loop {
                    let negative = *self.peek() == Tok::Minus;
                    if negative {
                        self.next();
                    }
                    let (p, q) = self.literal()?;
                    coeffs.push((if negative { -p } else { p }, q));
                    match self.next() {
                        Tok::Comma => continue,
                        Tok::RBracket => break,
                        other => {
                            self.pos -= 1;
                            return self.error(format!("expected `,` or `]`, found {}", other));
                        }
                    }
                }
                Ok(Series::List(coeffs))
            }
            other => self.error(format!("expected a series, found {}", other)),
        }
    }

    fn bundle(&mut self) -> Result<Bundle, CliError> {
        let mut lhs = self.bundle_term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Bundle::Sum(Box::new(lhs), Box::new(self.bundle_term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Bundle::Diff(Box::new(lhs), Box::new(self.bundle_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn bundle_term(&mut self) -> Result<Bundle, CliError> {
        let mut lhs = self.bundle_unary()?;
        while *self.peek() == Tok::Star {
            self.next();
            lhs = Bundle::Tensor(Box::new(lhs), Box::new(self.bundle_unary()?));
        }
        Ok(lhs)
    }

    fn bundle_unary(&mut self) -> Result<Bundle, CliError> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(Bundle::Neg(Box::new(self.bundle_unary()?)));
        }
        self.bundle_atom()
    }

    fn bundle_atom(&mut self) -> Result<Bundle, CliError> {
        match self.next() {
            Tok::Num(n) => Ok(Bundle::Int(n)),
            Tok::LParen => {
                let b = self.bundle()?;
                self.expect(Tok::RParen)?;
                Ok(b)
            }
            Tok::Ident(name) => {
                let call = *self.peek() == Tok::LParen;
                match (name.as_str(), call) {
                    ("O", false) => Ok(Bundle::Trivial),
                    ("O", true) => {
                        self.next();
                        let mut coeffs = vec![self.signed_int()?];
                        while *self.peek() == Tok::Comma {
                            self.next();
                            coeffs.push(self.signed_int()?);
                        }
                        self.expect(Tok::RParen)?;
                        Ok(Bundle::Line(coeffs))
                    }
                    ("dual" | "det", true) => {
                        self.next();
                        let b = Box::new(self.bundle()?);
                        self.expect(Tok::RParen)?;
                        Ok(if name == "dual" { Bundle::Dual(b) } else { Bundle::Det(b) })
                    }
                    ("lam", true) => {
                        self.next();
                        let p = self.signed_int()?;
                        self.expect(Tok::Comma)?;
                        let b = self.bundle()?;
                        self.expect(Tok::RParen)?;
                        Ok(Bundle::Lam(p, Box::new(b)))
                    }
                    ("tensor", true) => {
                        self.next();
                        let a = self.bundle()?;
                        self.expect(Tok::Comma)?;
                        let b = self.bundle()?;
                        self.expect(Tok::RParen)?;
                        Ok(Bundle::Tensor(Box::new(a), Box::new(b)))
                    }
                    (_, true) => {
                        self.pos -= 1;
                        self.error(format!("unknown bundle operation `{}`", name))
                    }
                    (_, false) => Ok(Bundle::Name(name)),
                }
            }
            other => {
                self.pos -= 1;
                self.error(format!("expected a bundle, found {}", other))
            }
        }
    }
}

/// Parses a class expression.
pub fn parse(text: &str) -> Result<Expr, CliError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after the expression", p.peek()));
    }
    Ok(e)
}

/// Parses a bundle expression on its own.
pub fn parse_bundle(text: &str) -> Result<Bundle, CliError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let b = p.bundle()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after the bundle", p.peek()));
    }
    Ok(b)
}

fn expr_prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn bundle_prec(b: &Bundle) -> u8 {
    match b {
        Bundle::Sum(..) | Bundle::Diff(..) => 1,
        Bundle::Tensor(..) => 2,
        Bundle::Neg(_) => 3,
        _ => 5,
    }
}

fn wrap(s: String, parens: bool) -> String {
    if parens {
        format!("({})", s)
    } else {
        s
    }
}

fn literal(p: i64, q: i64) -> String {
    if q == 1 {
        p.to_string()
    } else {
        format!("{}/{}", p, q)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::Exp => f.write_str("exp"),
            Series::Expm1 => f.write_str("expm1"),
            Series::Todd => f.write_str("td"),
            Series::OnePlusT => f.write_str("1+T"),
            Series::List(cs) => {
                let parts: Vec<String> = cs
                    .iter()
                    .map(|&(p, q)| if p < 0 { format!("-{}", literal(-p, q)) } else { literal(p, q) })
                    .collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Bundle::Name(n) => n.clone(),
            Bundle::Trivial => "O".into(),
            Bundle::Line(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                format!("O({})", parts.join(", "))
            }
            Bundle::Int(n) => n.to_string(),
            Bundle::Sum(a, b) | Bundle::Diff(a, b) | Bundle::Tensor(a, b) => {
                let p = bundle_prec(self);
                let op = match self {
                    Bundle::Sum(..) => " + ",
                    Bundle::Diff(..) => " - ",
                    _ => "*",
                };
                format!(
                    "{}{}{}",
                    wrap(a.to_string(), bundle_prec(a) < p),
                    op,
                    wrap(b.to_string(), bundle_prec(b) <= p)
                )
            }
            Bundle::Neg(a) => format!("-{}", wrap(a.to_string(), bundle_prec(a) < 3)),
            Bundle::Dual(a) => format!("dual({})", a),
            Bundle::Det(a) => format!("det({})", a),
            Bundle::Lam(p, a) => format!("lam({}, {})", p, a),
        };
        f.write_str(&s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Expr::Num(p, q) => literal(*p, *q),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                let p = expr_prec(self);
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    _ => "*",
                };
                format!(
                    "{}{}{}",
                    wrap(a.to_string(), expr_prec(a) < p),
                    op,
                    wrap(b.to_string(), expr_prec(b) <= p)
                )
            }
            Expr::Neg(a) => format!("-{}", wrap(a.to_string(), expr_prec(a) < 3)),
            Expr::Pow(a, n) => format!("{}^{}", wrap(a.to_string(), expr_prec(a) < 5), n),
            Expr::Chern(k, b) => format!("c({}, {})", k, b),
            Expr::Segre(k, b) => format!("s({}, {})", k, b),
            Expr::Ch(b) => format!("ch({})", b),
            Expr::Td(b) => format!("td({})", b),
            Expr::TdStar(b) => format!("tdstar({})", b),
            Expr::Rk(b) => format!("rk({})", b),
            Expr::Class(kind, series, b) => {
                let k = match kind {
                    ClassKind::Phi => "phi",
                    ClassKind::Psi => "psi",
                };
                format!("class({}, {}, {})", k, series, b)
            }
        };
        f.write_str(&s)
    }
}
