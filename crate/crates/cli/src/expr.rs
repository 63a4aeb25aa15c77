//! A small language for operator expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := primary ('^' nat)?
//! primary := number | 'nu' digit | gen | '[' expr ',' expr ']'
//!          | '{' expr ',' expr '}' | '(' expr ')'
//! gen     := ('A+' | 'A-' | 'A0' | 'P' | 'Q') '(' digits ')' | rawword
//! rawword := ('x' | 't' | 'dx' | 'dt') ('1' | '2' | '3')
//! number  := nat ('/' nat)?
//! ```
//!
//! A product whose left factor involves neither generators nor raw words is
//! a scalar multiple; every other product is a composition.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use superbi_core::scalars::ParamPoint;
use superbi_core::{GeneratorKind, Model, OperatorElement, ParamScalar, Rational, ScalarError, SubsetLabel, SuperElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenName {
    Aplus,
    Aminus,
    Azero,
    P,
    Q,
}

impl GenName {
    pub const ALL: [GenName; 5] = [GenName::Aplus, GenName::Aminus, GenName::Azero, GenName::P, GenName::Q];

    pub fn as_str(self) -> &'static str {
        match self {
            GenName::Aplus => "A+",
            GenName::Aminus => "A-",
            GenName::Azero => "A0",
            GenName::P => "P",
            GenName::Q => "Q",
        }
    }
}

/// One of the twelve single-letter operators `x_i`, `t_i`, `dx_i`, `dt_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RawWord {
    X(usize),
    T(usize),
    Dx(usize),
    Dt(usize),
}

impl RawWord {
    pub fn operator(self) -> OperatorElement {
        match self {
            RawWord::X(i) => OperatorElement::x(i),
            RawWord::T(i) => OperatorElement::theta(i),
            RawWord::Dx(i) => OperatorElement::dx(i),
            RawWord::Dt(i) => OperatorElement::dtheta(i),
        }
    }
}

impl fmt::Display for RawWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawWord::X(i) => write!(f, "x{i}"),
            RawWord::T(i) => write!(f, "t{i}"),
            RawWord::Dx(i) => write!(f, "dx{i}"),
            RawWord::Dt(i) => write!(f, "dt{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprAst {
    /// A nonnegative rational literal.
    Number(Rational),
    Param(usize),
    Generator(GenName, SubsetLabel),
    Raw(RawWord),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    ScalarMul(Box<ExprAst>, Box<ExprAst>),
    Compose(Box<ExprAst>, Box<ExprAst>),
    Power(Box<ExprAst>, u32),
    Commutator(Box<ExprAst>, Box<ExprAst>),
    Anticommutator(Box<ExprAst>, Box<ExprAst>),
}

impl ExprAst {
    /// True when the expression is a parameter-dependent scalar.
    pub fn is_scalar(&self) -> bool {
        match self {
            ExprAst::Number(_) | ExprAst::Param(_) => true,
            ExprAst::Generator(..) | ExprAst::Raw(_) => false,
            ExprAst::Power(a, _) => a.is_scalar(),
            ExprAst::Add(a, b)
            | ExprAst::Sub(a, b)
            | ExprAst::ScalarMul(a, b)
            | ExprAst::Compose(a, b)
            | ExprAst::Commutator(a, b)
            | ExprAst::Anticommutator(a, b) => a.is_scalar() && b.is_scalar(),
        }
    }

    /// Builds the product node the parser would produce for `a * b`.
    pub fn product(a: ExprAst, b: ExprAst) -> ExprAst {
        if a.is_scalar() {
            ExprAst::ScalarMul(Box::new(a), Box::new(b))
        } else {
            ExprAst::Compose(Box::new(a), Box::new(b))
        }
    }
}

fn render_subset(s: SubsetLabel) -> String {
    s.copies().map(|j| j.get().to_string()).collect()
}

/// Canonical rendering: every compound node is parenthesized, so parsing the
/// output gives back the same tree.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Number(r) => write!(f, "{r}"),
            ExprAst::Param(j) => write!(f, "nu{j}"),
            ExprAst::Generator(g, s) => write!(f, "{}({})", g.as_str(), render_subset(*s)),
            ExprAst::Raw(w) => write!(f, "{w}"),
            ExprAst::Add(a, b) => write!(f, "({a} + {b})"),
            ExprAst::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprAst::ScalarMul(a, b) | ExprAst::Compose(a, b) => write!(f, "({a}*{b})"),
            ExprAst::Power(a, n) => write!(f, "({a}^{n})"),
            ExprAst::Commutator(a, b) => write!(f, "[{a}, {b}]"),
            ExprAst::Anticommutator(a, b) => write!(f, "{{{a}, {b}}}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown generator or symbol '{0}'")]
    UnknownName(String),
    #[error("invalid subset '{0}': digits must be distinct and in 1..3")]
    InvalidSubset(String),
    #[error("number out of range: {0}")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Nat(String),
    Ident(String),
    Gen(GenName),
    Sym(char),
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Nat(s) | Token::Ident(s) => write!(f, "'{s}'"),
            Token::Gen(g) => write!(f, "'{}'", g.as_str()),
            Token::Sym(c) => write!(f, "'{c}'"),
            Token::End => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let mut take = |n: usize, i: &mut usize| {
            for &ch in &chars[*i..*i + n] {
                if ch == '\n' {
                    line += 1;
                    column = 1;
                } else {
                    column += 1;
                }
            }
            *i += n;
        };
        if c.is_whitespace() {
            take(1, &mut i);
            continue;
        }
        let token = if c.is_ascii_digit() {
            let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            let s: String = chars[i..i + len].iter().collect();
            take(len, &mut i);
            Token::Nat(s)
        } else if c == 'A' && matches!(chars.get(i + 1), Some('+' | '-')) {
            let g = if chars[i + 1] == '+' { GenName::Aplus } else { GenName::Aminus };
            take(2, &mut i);
            Token::Gen(g)
        } else if c.is_ascii_alphabetic() {
            let len = chars[i..].iter().take_while(|c| c.is_ascii_alphanumeric()).count();
            let s: String = chars[i..i + len].iter().collect();
            take(len, &mut i);
            match s.as_str() {
                "A0" => Token::Gen(GenName::Azero),
                "P" => Token::Gen(GenName::P),
                "Q" => Token::Gen(GenName::Q),
                _ => Token::Ident(s),
            }
        } else if "+-*^/,()[]{}".contains(c) {
            take(1, &mut i);
            Token::Sym(c)
        } else {
            return Err(ParseError {
                line: start_line,
                column: start_col,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_col,
        });
    }
    out.push(Spanned {
        token: Token::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn unexpected(t: &Spanned, expected: &str) -> ParseError {
        Self::error_at(
            t,
            ParseErrorKind::Unexpected {
                expected: expected.into(),
                found: t.token.to_string(),
            },
        )
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.token == Token::Sym(c) {
            Ok(())
        } else {
            Err(Self::unexpected(&t, &format!("'{c}'")))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().token == Token::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym('+') {
                acc = ExprAst::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                acc = ExprAst::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut acc = self.factor()?;
        while self.eat_sym('*') {
            acc = ExprAst::product(acc, self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.primary()?;
        if self.eat_sym('^') {
            let t = self.next();
            let Token::Nat(s) = &t.token else {
                return Err(Self::unexpected(&t, "a nonnegative integer exponent"));
            };
            let n = s
                .parse::<u32>()
                .map_err(|_| Self::error_at(&t, ParseErrorKind::BadNumber(s.clone())))?;
            return Ok(ExprAst::Power(Box::new(base), n));
        }
        Ok(base)
    }

    fn nat(t: &Spanned, s: &str) -> Result<num_bigint::BigInt, ParseError> {
        s.parse()
            .map_err(|_| Self::error_at(t, ParseErrorKind::BadNumber(s.to_string())))
    }

    fn primary(&mut self) -> Result<ExprAst, ParseError> {
        let t = self.next();
        match &t.token {
            Token::Nat(s) => {
                let num = Self::nat(&t, s)?;
                if self.eat_sym('/') {
                    let dt = self.next();
                    let Token::Nat(d) = &dt.token else {
                        return Err(Self::unexpected(&dt, "a denominator"));
                    };
                    let den = Self::nat(&dt, d)?;
                    if den.is_zero() {
                        return Err(Self::error_at(&dt, ParseErrorKind::BadNumber(format!("{s}/{d}"))));
                    }
                    return Ok(ExprAst::Number(Rational::new(num, den)));
                }
                Ok(ExprAst::Number(Rational::from_integer(num)))
            }
            Token::Gen(g) => {
                let g = *g;
                self.expect_sym('(')?;
                let dt = self.next();
                let Token::Nat(digits) = &dt.token else {
                    return Err(Self::unexpected(&dt, "a subset such as 12"));
                };
                let subset = parse_subset(digits)
                    .ok_or_else(|| Self::error_at(&dt, ParseErrorKind::InvalidSubset(digits.clone())))?;
                self.expect_sym(')')?;
                Ok(ExprAst::Generator(g, subset))
            }
            Token::Ident(name) => parse_symbol(name)
                .ok_or_else(|| Self::error_at(&t, ParseErrorKind::UnknownName(name.clone()))),
            Token::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Token::Sym(open @ ('[' | '{')) => {
                let open = *open;
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                if open == '[' {
                    self.expect_sym(']')?;
                    Ok(ExprAst::Commutator(Box::new(a), Box::new(b)))
                } else {
                    self.expect_sym('}')?;
                    Ok(ExprAst::Anticommutator(Box::new(a), Box::new(b)))
                }
            }
            _ => Err(Self::unexpected(&t, "an expression")),
        }
    }
}

fn parse_subset(digits: &str) -> Option<SubsetLabel> {
    let mut bits = 0u8;
    for c in digits.chars() {
        let d = c.to_digit(10)?;
        if !(1..=3).contains(&d) || bits & (1 << (d - 1)) != 0 {
            return None;
        }
        bits |= 1 << (d - 1);
    }
    SubsetLabel::from_bits(bits).ok()
}

fn parse_symbol(name: &str) -> Option<ExprAst> {
    let (head, index) = name.split_at(name.len().checked_sub(1)?);
    let i = index.parse::<usize>().ok().filter(|i| (1..=3).contains(i))?;
    Some(match head {
        "nu" => ExprAst::Param(i),
        "x" => ExprAst::Raw(RawWord::X(i)),
        "t" => ExprAst::Raw(RawWord::T(i)),
        "dx" => ExprAst::Raw(RawWord::Dx(i)),
        "dt" => ExprAst::Raw(RawWord::Dt(i)),
        _ => return None,
    })
}

pub fn parse_expr(text: &str) -> Result<ExprAst, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let e = parser.expr()?;
    let t = parser.peek();
    if t.token != Token::End {
        return Err(Parser::unexpected(t, "an operator or end of input"));
    }
    Ok(e)
}

fn generator(model: &Model, g: GenName, s: SubsetLabel) -> OperatorElement {
    let kind = match g {
        GenName::Aplus => GeneratorKind::Aplus,
        GenName::Aminus => GeneratorKind::Aminus,
        GenName::Azero => GeneratorKind::Azero,
        GenName::P => GeneratorKind::P,
        GenName::Q => return model.casimir(s).clone(),
    };
    model.aggregate(kind, s)
}

fn compile(ast: &ExprAst, model: &Model) -> OperatorElement {
    let bin = |a: &ExprAst, b: &ExprAst| (compile(a, model), compile(b, model));
    match ast {
        ExprAst::Number(r) => OperatorElement::scalar(ParamScalar::from_rational(r.clone())),
        ExprAst::Param(j) => OperatorElement::scalar(model.nu(*j)),
        ExprAst::Generator(g, s) => generator(model, *g, *s),
        ExprAst::Raw(w) => w.operator(),
        ExprAst::Add(a, b) => {
            let (a, b) = bin(a, b);
            &a + &b
        }
        ExprAst::Sub(a, b) => {
            let (a, b) = bin(a, b);
            &a - &b
        }
        ExprAst::ScalarMul(a, b) | ExprAst::Compose(a, b) => {
            let (a, b) = bin(a, b);
            a.compose(&b)
        }
        ExprAst::Power(a, n) => compile(a, model).pow(*n),
        ExprAst::Commutator(a, b) => {
            let (a, b) = bin(a, b);
            a.commutator(&b)
        }
        ExprAst::Anticommutator(a, b) => {
            let (a, b) = bin(a, b);
            a.anticommutator(&b)
        }
    }
}

/// Compiles the expression to a normal-ordered operator, with the parameters
/// symbolic or bound to `params`.
pub fn eval_expr(ast: &ExprAst, params: Option<&ParamPoint>) -> Result<OperatorElement, ScalarError> {
    let op = compile(ast, &Model::symbolic());
    match params {
        Some(p) => op.specialize(p),
        None => Ok(op),
    }
}

/// Applies the expression to `f` by recursion on the tree, never composing
/// two operators: products act right to left and brackets expand into
/// their two orderings.
pub fn interpret(ast: &ExprAst, model: &Model, f: &SuperElement) -> SuperElement {
    match ast {
        ExprAst::Number(r) => f.scale(&ParamScalar::from_rational(r.clone())),
        ExprAst::Param(j) => f.scale(&model.nu(*j)),
        ExprAst::Generator(g, s) => generator(model, *g, *s).apply(f),
        ExprAst::Raw(w) => w.operator().apply(f),
        ExprAst::Add(a, b) => &interpret(a, model, f) + &interpret(b, model, f),
        ExprAst::Sub(a, b) => &interpret(a, model, f) - &interpret(b, model, f),
        ExprAst::ScalarMul(a, b) | ExprAst::Compose(a, b) => interpret(a, model, &interpret(b, model, f)),
        ExprAst::Power(a, n) => (0..*n).fold(f.clone(), |g, _| interpret(a, model, &g)),
        ExprAst::Commutator(a, b) => {
            let ab = interpret(a, model, &interpret(b, model, f));
            let ba = interpret(b, model, &interpret(a, model, f));
            &ab - &ba
        }
        ExprAst::Anticommutator(a, b) => {
            let ab = interpret(a, model, &interpret(b, model, f));
            let ba = interpret(b, model, &interpret(a, model, f));
            &ab + &ba
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("1 + 2*x1^2").unwrap();
        assert_eq!(e.to_string(), "(1 + (2*(x1^2)))");
        let e = parse_expr("nu1*x1*dx1").unwrap();
        assert!(matches!(e, ExprAst::Compose(..)));
        let e = parse_expr("2*nu1*x1").unwrap();
        assert!(matches!(e, ExprAst::ScalarMul(..)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("Q(12) +\n  Q(14)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(matches!(e.kind, ParseErrorKind::InvalidSubset(_)));
        let e = parse_expr("Q(11)").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::InvalidSubset(_)));
        let e = parse_expr("B(12)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName("B".into()));
        let e = parse_expr("x1 $").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 4, ParseErrorKind::UnexpectedChar('$')));
        assert!(parse_expr("(x1").is_err());
        assert!(parse_expr("x1^-1").is_err());
    }
}
