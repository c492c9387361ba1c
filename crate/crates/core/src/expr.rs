//! Element expressions such as `1/3*H1 + (2-i)*E+3` or `s*(H1+H2)`, and the
//! JSON element format `{"H": {"1": "1/3"}, "E": {"+2": "i", "-1": "1"}}`.

use serde_json::{Map, Value};

use crate::chevalley::{BasisLabel, ChevalleyAlgebra, Element};
use crate::deform::Mode;
use crate::error::{Error, Result};
use crate::linalg::Gq;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Gq),
    I,
    S,
    Basis(usize),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn tokenize(alg: &ChevalleyAlgebra, src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let digits = |k: &mut usize| -> Option<usize> {
        let start = *k;
        while *k < chars.len() && chars[*k].is_ascii_digit() {
            *k += 1;
        }
        chars[start..*k].iter().collect::<String>().parse().ok()
    };
    while k < chars.len() {
        let c = chars[k];
        match c {
            ' ' | '\t' | '\n' => k += 1,
            '+' => {
                out.push(Token::Plus);
                k += 1
            }
            '-' => {
                out.push(Token::Minus);
                k += 1
            }
            '*' => {
                out.push(Token::Star);
                k += 1
            }
            '/' => {
                out.push(Token::Slash);
                k += 1
            }
            '(' => {
                out.push(Token::LParen);
                k += 1
            }
            ')' => {
                out.push(Token::RParen);
                k += 1
            }
            'i' => {
                out.push(Token::I);
                k += 1
            }
            's' => {
                out.push(Token::S);
                k += 1
            }
            'H' => {
                k += 1;
                let j = digits(&mut k).ok_or_else(|| parse_error("H needs an index"))?;
                if j == 0 || j > alg.rank() {
                    return Err(parse_error(format!("H{j} is out of range")));
                }
                out.push(Token::Basis(alg.h(j - 1)));
            }
            'E' => {
                let sign = chars.get(k + 1).copied();
                k += 2;
                let j = digits(&mut k).ok_or_else(|| parse_error("E needs a signed index"))?;
                if j == 0 || j > alg.num_positive() {
                    return Err(parse_error(format!("root index {j} is out of range")));
                }
                match sign {
                    Some('+') => out.push(Token::Basis(alg.pos(j - 1))),
                    Some('-') => out.push(Token::Basis(alg.neg(j - 1))),
                    _ => return Err(parse_error("E must be followed by + or -")),
                }
            }
            d if d.is_ascii_digit() => {
                let n = digits(&mut k).ok_or_else(|| parse_error("number too large"))?;
                let n = i64::try_from(n).map_err(|_| parse_error("number too large"))?;
                out.push(Token::Num(Gq::from_int(n)));
            }
            other => return Err(parse_error(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// A polynomial in `s` of degree ≤ 1 with coefficients that are either all
/// scalars or all algebra elements.
#[derive(Clone, Debug)]
enum Term {
    Scalar([Gq; 2]),
    Vector([Element; 2]),
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
    alg: &'a ChevalleyAlgebra,
}

fn add_vec(a: &[Gq], b: &[Gq], sign: &Gq) -> Element {
    a.iter().zip(b).map(|(x, y)| x + &(sign * y)).collect()
}

fn scale_vec(a: &[Gq], f: &Gq) -> Element {
    a.iter().map(|x| x * f).collect()
}

fn is_zero_vec(a: &[Gq]) -> bool {
    a.iter().all(|x| x.is_zero())
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn zero_vec(&self) -> Element {
        vec![Gq::zero(); self.dim]
    }

    fn combine(&self, a: Term, b: Term, sign: Gq) -> Result<Term> {
        Ok(match (a, b) {
            (Term::Scalar(x), Term::Scalar(y)) => {
                Term::Scalar([&x[0] + &(&sign * &y[0]), &x[1] + &(&sign * &y[1])])
            }
            (Term::Vector(x), Term::Vector(y)) => {
                Term::Vector([add_vec(&x[0], &y[0], &sign), add_vec(&x[1], &y[1], &sign)])
            }
            (Term::Scalar(x), Term::Vector(y)) | (Term::Vector(y), Term::Scalar(x))
                if x.iter().all(|c| c.is_zero()) =>
            {
                let y = if sign.is_one() {
                    y
                } else {
                    [scale_vec(&y[0], &sign), scale_vec(&y[1], &sign)]
                };
                Term::Vector(y)
            }
            _ => return Err(parse_error("cannot add a scalar to an algebra element")),
        })
    }

    fn multiply(&self, a: Term, b: Term) -> Result<Term> {
        let mul_s = |x: &[Gq; 2], y: &[Gq; 2]| -> Result<[Gq; 2]> {
            if !(&x[1] * &y[1]).is_zero() {
                return Err(parse_error("s appears squared"));
            }
            Ok([&x[0] * &y[0], &(&x[0] * &y[1]) + &(&x[1] * &y[0])])
        };
        Ok(match (a, b) {
            (Term::Scalar(x), Term::Scalar(y)) => Term::Scalar(mul_s(&x, &y)?),
            (Term::Scalar(x), Term::Vector(v)) | (Term::Vector(v), Term::Scalar(x)) => {
                if !x[1].is_zero() && !is_zero_vec(&v[1]) {
                    return Err(parse_error("s appears squared"));
                }
                let lo = scale_vec(&v[0], &x[0]);
                let hi = add_vec(&scale_vec(&v[1], &x[0]), &scale_vec(&v[0], &x[1]), &Gq::one());
                Term::Vector([lo, hi])
            }
            _ => return Err(parse_error("algebra elements cannot be multiplied")),
        })
    }

    fn expr(&mut self) -> Result<Term> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let sign = match t {
                Token::Plus => Gq::one(),
                Token::Minus => -Gq::one(),
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = self.combine(acc, rhs, sign)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = self.multiply(acc, rhs)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let Term::Scalar([c, z]) = rhs else {
                        return Err(parse_error("division by an algebra element"));
                    };
                    if !z.is_zero() || c.is_zero() {
                        return Err(parse_error("division by zero or by s"));
                    }
                    acc = self.multiply(acc, Term::Scalar([c.inv(), Gq::zero()]))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                let v = self.unary()?;
                self.multiply(Term::Scalar([-Gq::one(), Gq::zero()]), v)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term> {
        let t = self
            .peek()
            .cloned()
            .ok_or_else(|| parse_error("unexpected end of expression"))?;
        self.pos += 1;
        Ok(match t {
            Token::Num(n) => Term::Scalar([n, Gq::zero()]),
            Token::I => Term::Scalar([Gq::i(), Gq::zero()]),
            Token::S => Term::Scalar([Gq::zero(), Gq::one()]),
            Token::Basis(a) => Term::Vector([self.alg.basis_element(a), self.zero_vec()]),
            Token::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(parse_error("missing )"));
                }
                self.pos += 1;
                v
            }
            other => return Err(parse_error(format!("unexpected {other:?}"))),
        })
    }
}

/// Parses an element expression. In scaled mode the result is `X⁰` where
/// the expression denotes `s·X⁰`; an expression without `s` is read as `X⁰`.
pub fn parse_element(alg: &ChevalleyAlgebra, src: &str, mode: Mode) -> Result<Element> {
    let mut p = Parser {
        tokens: tokenize(alg, src)?,
        pos: 0,
        dim: alg.dim(),
        alg,
    };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(parse_error(format!("trailing input in {src:?}")));
    }
    let [lo, hi] = match v {
        Term::Vector(v) => v,
        Term::Scalar(c) if c.iter().all(|x| x.is_zero()) => [alg.zero(), alg.zero()],
        Term::Scalar(_) => return Err(parse_error("expression is a scalar, not an element")),
    };
    match mode {
        Mode::Exact if !is_zero_vec(&hi) => Err(parse_error("s is only allowed with --scaled")),
        Mode::Exact => Ok(lo),
        Mode::Scaled if is_zero_vec(&hi) => Ok(lo),
        Mode::Scaled if is_zero_vec(&lo) => Ok(hi),
        Mode::Scaled => Err(parse_error("s must multiply the whole element")),
    }
}

/// `{"H": {"j": c}, "E": {"+k": c, "-k": c}}` with 1-based indices.
pub fn element_to_json(alg: &ChevalleyAlgebra, x: &[Gq]) -> Value {
    let mut h = Map::new();
    let mut e = Map::new();
    for (a, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match alg.label(a) {
            BasisLabel::H(j) => {
                h.insert((j + 1).to_string(), Value::String(c.to_string()));
            }
            BasisLabel::Pos(k) => {
                e.insert(format!("+{}", k + 1), Value::String(c.to_string()));
            }
            BasisLabel::Neg(k) => {
                e.insert(format!("-{}", k + 1), Value::String(c.to_string()));
            }
        }
    }
    let mut out = Map::new();
    out.insert("H".into(), Value::Object(h));
    out.insert("E".into(), Value::Object(e));
    Value::Object(out)
}

fn scalar_from_json(v: &Value) -> Result<Gq> {
    match v {
        Value::String(s) => s.parse().map_err(|e: crate::linalg::scalar::ParseScalarError| parse_error(e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(Gq::from_int)
            .ok_or_else(|| parse_error(format!("non-integer number {n}; write it as a string"))),
        other => Err(parse_error(format!("expected a scalar, found {other}"))),
    }
}

/// Reads an element from its JSON object form, or from a JSON string holding
/// an expression.
pub fn element_from_json(alg: &ChevalleyAlgebra, v: &Value, mode: Mode) -> Result<Element> {
    let obj = match v {
        Value::String(s) => return parse_element(alg, s, mode),
        Value::Object(o) => o,
        other => return Err(parse_error(format!("expected an element, found {other}"))),
    };
    let mut x = alg.zero();
    for (key, part) in obj {
        let entries = part
            .as_object()
            .ok_or_else(|| parse_error(format!("{key} must map indices to scalars")))?;
        for (idx, c) in entries {
            let c = scalar_from_json(c)?;
            let slot = match key.as_str() {
                "H" => {
                    let j: usize = idx.parse().map_err(|_| parse_error(format!("bad index H{idx}")))?;
                    if j == 0 || j > alg.rank() {
                        return Err(parse_error(format!("H{j} is out of range")));
                    }
                    alg.h(j - 1)
                }
                "E" => {
                    let (sign, rest) = idx.split_at(idx.len().min(1));
                    let k: usize = rest.parse().map_err(|_| parse_error(format!("bad index E{idx}")))?;
                    if k == 0 || k > alg.num_positive() {
                        return Err(parse_error(format!("root index {k} is out of range")));
                    }
                    match sign {
                        "+" => alg.pos(k - 1),
                        "-" => alg.neg(k - 1),
                        _ => return Err(parse_error(format!("E index {idx} needs a sign"))),
                    }
                }
                other => return Err(parse_error(format!("unknown key {other:?}"))),
            };
            x[slot] += &c;
        }
    }
    Ok(x)
}
