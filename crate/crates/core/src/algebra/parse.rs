//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" int)?
//! int    := "-"? digits | "(" "-"? digits ")"
//! atom   := number | name | "(" expr ")" | "[" expr "," expr "]"
//! ```
//!
//! Positions in errors are character offsets into the input.

use num_bigint::BigInt;
use num_traits::Pow;

use super::ast::{normal_form, Bindings, Expr, Symbol};
use super::expr::OperatorExpr;
use super::poly::Rat;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Name(String),
    Punct(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int_part: String = chars[start..i].iter().collect();
            let mut value = Rat::from_integer(int_part.parse::<BigInt>().unwrap_or_default());
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if fs == i {
                    return Err(AlgebraError::Syntax {
                        pos: i,
                        msg: "expected digits after decimal point".into(),
                    });
                }
                let frac: String = chars[fs..i].iter().collect();
                let scale = BigInt::from(10).pow((i - fs) as u32);
                value += Rat::new(frac.parse::<BigInt>().expect("digits"), scale);
            }
            out.push((start, Tok::Num(value)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '′') {
                i += 1;
            }
            out.push((start, Tok::Name(chars[start..i].iter().collect())));
        } else if "+-*/^()[],".contains(c) {
            out.push((i, Tok::Punct(c)));
            i += 1;
        } else if c == '−' {
            out.push((i, Tok::Punct('-')));
            i += 1;
        } else if c == '·' {
            out.push((i, Tok::Punct('*')));
            i += 1;
        } else {
            return Err(AlgebraError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    bindings: Option<&'a Bindings>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected `{c}`")))
        }
    }

    fn unexpected(&self, msg: &str) -> AlgebraError {
        let found = match self.peek() {
            Tok::End => "end of input".to_string(),
            Tok::Num(n) => format!("number {n}"),
            Tok::Name(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
        };
        AlgebraError::Syntax {
            pos: self.pos(),
            msg: format!("{msg}, found {found}"),
        }
    }

    fn expr(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, AlgebraError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat('/') {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, AlgebraError> {
        if self.eat('-') {
            return Ok(Expr::neg(self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, AlgebraError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let negative = self.eat('-');
        let pos = self.pos();
        let n = match self.bump() {
            Tok::Num(r) if r.is_integer() => r.to_integer(),
            _ => {
                return Err(AlgebraError::Syntax {
                    pos,
                    msg: "exponent must be an integer".into(),
                })
            }
        };
        if paren {
            self.expect(')')?;
        }
        let n: i64 = i64::try_from(n).map_err(|_| AlgebraError::Syntax {
            pos,
            msg: "exponent out of range".into(),
        })?;
        Ok(Expr::pow(base, if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, AlgebraError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Expr::Num(r))
            }
            Tok::Name(name) => {
                self.bump();
                if let Some(v) = self.bindings.and_then(|b| b.get(&name)) {
                    return Ok(Expr::Bound(name, v.clone()));
                }
                Symbol::lookup(&name)
                    .map(Expr::Sym)
                    .ok_or(AlgebraError::UnknownSymbol { name, pos })
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Punct('[') => {
                self.bump();
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Expr::comm(a, b))
            }
            _ => Err(self.unexpected("expected a number, symbol, `(` or `[`")),
        }
    }
}

/// Parses text into an unsimplified tree. Names in `bindings` shadow the
/// built-in symbols.
pub fn parse_tree(text: &str, bindings: Option<&Bindings>) -> Result<Expr, AlgebraError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        bindings,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("expected an operator"));
    }
    Ok(e)
}

/// Parses and normalizes.
pub fn parse_expr(text: &str) -> Result<OperatorExpr, AlgebraError> {
    normal_form(&parse_tree(text, None)?)
}

pub fn parse_expr_with(text: &str, bindings: &Bindings) -> Result<OperatorExpr, AlgebraError> {
    normal_form(&parse_tree(text, Some(bindings))?)
}

/// Deterministic text form; `parse_expr(&render_expr(e)) == e` for any
/// normal-form `e`.
pub fn render_expr(e: &OperatorExpr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::ScalarCoeff;

    #[test]
    fn heisenberg_text() {
        let e = parse_expr("Q1*P1 - P1*Q1").unwrap();
        assert_eq!(e, OperatorExpr::i_hbar());
    }

    #[test]
    fn omega_relation_text() {
        let e = parse_expr("ω^2 - P1^2 - P2^2 - P3^2").unwrap();
        assert_eq!(e, OperatorExpr::scalar(ScalarCoeff::mass().pow(2)));
    }

    #[test]
    fn bracket_sugar_and_whitespace() {
        let a = parse_expr("[ Q1 , P1 ]").unwrap();
        let b = parse_expr("[Q1,P1]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, OperatorExpr::i_hbar());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("Q1 + $") {
            Err(AlgebraError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_expr("Q1 * foo") {
            Err(AlgebraError::UnknownSymbol { name, pos }) => {
                assert_eq!(name, "foo");
                assert_eq!(pos, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("(Q1"), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_expr("Q1 Q2"), Err(AlgebraError::Syntax { .. })));
        assert!(matches!(parse_expr("Q1^x"), Err(AlgebraError::Syntax { .. })));
    }

    #[test]
    fn division_needs_central_divisor() {
        assert!(parse_expr("P1/(omega + m)").is_ok());
        assert!(matches!(parse_expr("P1/Q1"), Err(AlgebraError::Malformed(_))));
        assert!(matches!(parse_expr("1/0"), Err(AlgebraError::Malformed(_))));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_expr("0.25*4").unwrap(), OperatorExpr::one());
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "Q1*P1*S2 - 3/2*Lam*omega/(omega + m)",
            "[Q1, omega]*Q2^2 + S3*S1*S2",
            "(P1^2 + m)/(P1*P2*omega^3) - i*hbar*t*Lam",
            "sqrt2*S1/(omega2m - 2*m) + M*E0",
        ] {
            let e = parse_expr(text).unwrap();
            let back = parse_expr(&render_expr(&e)).unwrap();
            assert_eq!(back, e, "{text} rendered as {}", render_expr(&e));
        }
    }
}
