//! Bundle-expression language: `L(1,0) + 2*L(0,-1) - 3`, with `*` for the
//! tensor product and integer literals for trivial bundles.
//!
//! Grammar (a leading minus is accepted so that every rendered element
//! parses back to itself):
//!
//! ```text
//! expr   := '-'? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := 'L' '(' int (',' int)* ')' | nat | '(' expr ')'
//! int    := '-'? nat
//! ```
//!
//! Every error carries the byte offset where parsing failed.

use crate::kring::KElement;
use std::fmt;

/// Parse failure with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Abstract syntax of a bundle expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    /// `L(a_1,...,a_m)`.
    Line(Vec<i64>),
    /// Nonnegative integer literal: the trivial bundle of that rank.
    Trivial(i64),
    Neg(Box<BundleExpr>),
    Add(Box<BundleExpr>, Box<BundleExpr>),
    Sub(Box<BundleExpr>, Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
}

impl BundleExpr {
    /// Evaluates into the K-theory ring over `m` base line classes by
    /// bilinear expansion.  The parser has already checked arities.
    pub fn eval(&self, m: usize) -> KElement {
        match self {
            BundleExpr::Line(a) => KElement::line(a.clone()),
            BundleExpr::Trivial(n) => KElement::trivial(m, *n),
            BundleExpr::Neg(x) => x.eval(m).map_neg(),
            BundleExpr::Add(x, y) => &x.eval(m) + &y.eval(m),
            BundleExpr::Sub(x, y) => &x.eval(m) - &y.eval(m),
            BundleExpr::Tensor(x, y) => &x.eval(m) * &y.eval(m),
        }
    }
}

/// Parses a bundle expression over `m` base line classes.
pub fn parse_bundle(input: &str, m: usize) -> Result<BundleExpr, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        m,
        input_len: input.len(),
    };
    let expr = p.parse_expr()?;
    if let Some((tok, off)) = p.peek() {
        return Err(ParseError {
            offset: off,
            message: format!("unexpected trailing input starting with {}", tok.describe()),
        });
    }
    Ok(expr)
}

/// Parses and evaluates in one step.
pub fn parse_element(input: &str, m: usize) -> Result<KElement, ParseError> {
    Ok(parse_bundle(input, m)?.eval(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    LineHead,
    Nat(i64),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Plus => "'+'".into(),
            Token::Minus => "'-'".into(),
            Token::Star => "'*'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::LineHead => "'L'".into(),
            Token::Nat(n) => format!("integer {n}"),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            b'-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            b'*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            b'(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            b')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            b',' => {
                out.push((Token::Comma, i));
                i += 1;
            }
            b'L' => {
                out.push((Token::LineHead, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let text = &input[start..i];
                let n: i64 = text.parse().map_err(|_| ParseError {
                    offset: start,
                    message: format!("integer literal {text} is out of range"),
                })?;
                out.push((Token::Nat(n), start));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: format!(
                        "unexpected character {:?}",
                        input[i..].chars().next().expect("nonempty")
                    ),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    m: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(&Token, usize)> {
        self.tokens.get(self.pos).map(|(t, o)| (t, *o))
    }

    fn bump(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.input_len,
            message: format!("unexpected end of input, expected {expected}"),
        }
    }

    fn expect(&mut self, want: &Token, expected: &str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((t, off)) if &t == want => Ok(off),
            Some((t, off)) => Err(ParseError {
                offset: off,
                message: format!("expected {expected}, found {}", t.describe()),
            }),
            None => Err(self.end_error(expected)),
        }
    }

    fn parse_expr(&mut self) -> Result<BundleExpr, ParseError> {
        let mut acc = if matches!(self.peek(), Some((Token::Minus, _))) {
            self.bump();
            BundleExpr::Neg(Box::new(self.parse_term()?))
        } else {
            self.parse_term()?
        };
        loop {
            match self.peek() {
                Some((Token::Plus, _)) => {
                    self.bump();
                    acc = BundleExpr::Add(Box::new(acc), Box::new(self.parse_term()?));
                }
                Some((Token::Minus, _)) => {
                    self.bump();
                    acc = BundleExpr::Sub(Box::new(acc), Box::new(self.parse_term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<BundleExpr, ParseError> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek(), Some((Token::Star, _))) {
            self.bump();
            acc = BundleExpr::Tensor(Box::new(acc), Box::new(self.parse_factor()?));
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<BundleExpr, ParseError> {
        match self.bump() {
            Some((Token::LineHead, head_off)) => {
                self.expect(&Token::LParen, "'(' after 'L'")?;
                let mut exps = vec![self.parse_int()?];
                while matches!(self.peek(), Some((Token::Comma, _))) {
                    self.bump();
                    exps.push(self.parse_int()?);
                }
                self.expect(&Token::RParen, "')' or ',' in line monomial")?;
                if exps.len() != self.m {
                    return Err(ParseError {
                        offset: head_off,
                        message: format!(
                            "line monomial has {} exponents, expected {} (--m)",
                            exps.len(),
                            self.m
                        ),
                    });
                }
                Ok(BundleExpr::Line(exps))
            }
            Some((Token::Nat(n), _)) => Ok(BundleExpr::Trivial(n)),
            Some((Token::LParen, _)) => {
                let inner = self.parse_expr()?;
                self.expect(&Token::RParen, "')'")?;
                Ok(inner)
            }
            Some((t, off)) => Err(ParseError {
                offset: off,
                message: format!("expected 'L', an integer, or '(', found {}", t.describe()),
            }),
            None => Err(self.end_error("'L', an integer, or '('")),
        }
    }

    fn parse_int(&mut self) -> Result<i64, ParseError> {
        let negative = if matches!(self.peek(), Some((Token::Minus, _))) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some((Token::Nat(n), _)) => Ok(if negative { -n } else { n }),
            Some((t, off)) => Err(ParseError {
                offset: off,
                message: format!("expected an integer exponent, found {}", t.describe()),
            }),
            None => Err(self.end_error("an integer exponent")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_and_tensor_products() {
        let e = parse_element("L(1)+L(2)", 1).unwrap();
        let expected = &KElement::line(vec![1]) + &KElement::line(vec![2]);
        assert_eq!(e, expected);

        let f = parse_element("2*L(1,0) - L(0,1)", 2).unwrap();
        let expected =
            &KElement::line(vec![1, 0]).scale_int(&2.into()) - &KElement::line(vec![0, 1]);
        assert_eq!(f, expected);
    }

    #[test]
    fn parenthesized_products_expand_bilinearly() {
        let e = parse_element("(L(1)-1)*(L(2)-1)", 1).unwrap();
        let a = &KElement::line(vec![1]) - &KElement::unit(1);
        let b = &KElement::line(vec![2]) - &KElement::unit(1);
        assert_eq!(e, a.tensor(&b).unwrap());
    }

    #[test]
    fn leading_minus_and_whitespace_are_accepted() {
        let e = parse_element("-L(2) + 1", 1).unwrap();
        let expected = &KElement::unit(1) - &KElement::line(vec![2]);
        assert_eq!(e, expected);
        let f = parse_element(" L( 1 , -2 ) ", 2).unwrap();
        assert_eq!(f, KElement::line(vec![1, -2]));
        assert_eq!(parse_element("-3", 1).unwrap(), KElement::trivial(1, -3));
    }

    #[test]
    fn rendered_elements_parse_back() {
        let cases = [
            KElement::from_terms(1, vec![(vec![2], 1), (vec![0], -1)]).unwrap(),
            KElement::from_terms(1, vec![(vec![2], -3), (vec![0], 1)]).unwrap(),
            KElement::from_terms(2, vec![(vec![1, 0], 2), (vec![0, 1], 1)]).unwrap(),
            KElement::from_terms(2, vec![(vec![-1, 2], -2), (vec![0, 0], 7)]).unwrap(),
            KElement::zero(3),
            KElement::trivial(2, 5),
        ];
        for x in cases {
            let rendered = x.to_string();
            let back = parse_element(&rendered, x.m()).unwrap();
            assert_eq!(back, x, "round-trip of {rendered}");
        }
    }

    #[test]
    fn arity_errors_point_at_the_monomial() {
        let err = parse_element("L(1,2)", 1).unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(err.message.contains("expected 1"));
        let err = parse_element("1 + L(3)", 2).unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn malformed_inputs_report_byte_offsets() {
        let err = parse_element("", 1).unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse_element("L(1", 1).unwrap_err();
        assert_eq!(err.offset, 3);
        let err = parse_element("1 +", 1).unwrap_err();
        assert_eq!(err.offset, 3);
        let err = parse_element("x", 1).unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse_element("L(1))", 1).unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.message.contains("trailing"));
        let err = parse_element("1 - - 2", 1).unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse_element("99999999999999999999", 1).unwrap_err();
        assert!(err.message.contains("out of range"));
    }
}
