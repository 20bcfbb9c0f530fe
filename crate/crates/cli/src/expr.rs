//! Expressions for `verdex eval`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | 'vac' | '|0>' | '(' expr ')'
//!         | FUNC '(' expr (',' expr)* ')'
//!         | GENERATOR                      a field
//!         | NAME ('[' INT (',' INT)* ']')?  a monomial factor
//! FUNC   := nprod | Y | fs | T | lambda | expzT
//! ```

use std::fmt;

use serde_json::{json, Value as Json};
use verdex_core::conformal::{lambda_bracket, LambdaPolynomial};
use verdex_core::fields::ModeField;
use verdex_core::identities::Number;
use verdex_core::series::{UniSeries, Window};
use verdex_core::{Scalar, State, VertexAlgebra};

#[derive(Debug, Clone, PartialEq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl ExprError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ExprError {
            pos,
            msg: msg.into(),
        }
    }

    /// The message with a caret under the offending column.
    pub fn render(&self, text: &str) -> String {
        let col = text[..self.pos.min(text.len())].chars().count();
        format!(
            "error at column {}: {}\n  {text}\n  {}^",
            col + 1,
            self.msg,
            " ".repeat(col)
        )
    }
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Name(String),
    Vac,
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((i, Tok::Int(s)));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                it.next();
            }
            out.push((i, Tok::Name(s)));
        } else if text[i..].starts_with("|0>") {
            for _ in 0..3 {
                it.next();
            }
            out.push((i, Tok::Vac));
        } else if "+-*/^(),[]".contains(c) {
            it.next();
            out.push((i, Tok::Sym(c)));
        } else {
            return Err(ExprError::new(i, format!("unexpected character `{c}`")));
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

#[derive(Debug, Clone)]
pub enum Value {
    Num(Scalar),
    /// `coef * f1*f2*...`, resolved against the algebra's monomial syntax.
    Mono(Scalar, Vec<String>),
    State(State),
    Field(ModeField),
    Lambda(LambdaPolynomial),
    Series(UniSeries<State>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "a number",
            Value::Mono(..) | Value::State(_) => "a state",
            Value::Field(_) => "a field",
            Value::Lambda(_) => "a λ-polynomial",
            Value::Series(_) => "a series",
        }
    }
}

const FUNCS: [&str; 6] = ["nprod", "Y", "fs", "T", "lambda", "expzT"];

struct Parser<'a> {
    v: &'a VertexAlgebra,
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        match self.bump() {
            (_, Tok::Sym(d)) if d == c => Ok(()),
            (p, t) => Err(ExprError::new(p, format!("expected `{c}`, found {}", describe(&t)))),
        }
    }

    fn is_field_name(&self, name: &str) -> bool {
        self.v
            .model()
            .generators()
            .iter()
            .any(|g| !g.central && g.name == name)
    }

    fn expr(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.term()?;
        loop {
            let neg = match self.peek() {
                Tok::Sym('+') => false,
                Tok::Sym('-') => true,
                _ => return Ok(acc),
            };
            let p = self.pos();
            self.bump();
            let rhs = self.term()?;
            let rhs = if neg { self.negate(rhs, p)? } else { rhs };
            acc = self.add(acc, rhs, p)?;
        }
    }

    fn term(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('*' | '/')) => *c,
                _ => return Ok(acc),
            };
            let p = self.pos();
            self.bump();
            let rhs = self.unary()?;
            acc = if op == '*' {
                self.mul(acc, rhs, p)?
            } else {
                self.div(acc, rhs, p)?
            };
        }
    }

    fn unary(&mut self) -> Result<Value, ExprError> {
        if self.peek() == &Tok::Sym('-') {
            let p = self.pos();
            self.bump();
            let x = self.unary()?;
            return self.negate(x, p);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, ExprError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        let p = self.pos();
        self.bump();
        let k = self.small_int()?;
        if k < 0 {
            return Err(ExprError::new(p, "negative exponents are not supported"));
        }
        let k = k as usize;
        match base {
            Value::Num(c) => Ok(Value::Num(c.pow(k as u32))),
            Value::Mono(c, f) => Ok(Value::Mono(c.pow(k as u32), f.iter().cloned().cycle().take(f.len() * k).collect())),
            other => Err(ExprError::new(p, format!("cannot raise {} to a power", other.kind()))),
        }
    }

    fn small_int(&mut self) -> Result<i64, ExprError> {
        let neg = if self.peek() == &Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (p, Tok::Int(s)) => {
                let n: i64 = s
                    .parse()
                    .map_err(|_| ExprError::new(p, format!("integer `{s}` is too large")))?;
                Ok(if neg { -n } else { n })
            }
            (p, t) => Err(ExprError::new(p, format!("expected an integer, found {}", describe(&t)))),
        }
    }

    fn atom(&mut self) -> Result<Value, ExprError> {
        let (p, t) = self.bump();
        match t {
            Tok::Int(s) => s
                .parse::<Scalar>()
                .map(Value::Num)
                .map_err(|e| ExprError::new(p, e.to_string())),
            Tok::Vac => Ok(Value::State(self.v.vacuum())),
            Tok::Sym('(') => {
                let x = self.expr()?;
                self.expect(')')?;
                Ok(x)
            }
            Tok::Name(n) if n == "vac" => Ok(Value::State(self.v.vacuum())),
            Tok::Name(n) if FUNCS.contains(&n.as_str()) && self.peek() == &Tok::Sym('(') => {
                self.call(&n, p)
            }
            Tok::Name(n) => {
                let follows = self.peek().clone();
                if self.is_field_name(&n) && !matches!(follows, Tok::Sym('[' | '^')) {
                    let f = self.v.generator(&n).expect("listed generator").clone();
                    return Ok(Value::Field(f));
                }
                let mut text = n;
                if follows == Tok::Sym('[') {
                    self.bump();
                    let mut idx = vec![self.small_int()?.to_string()];
                    while self.peek() == &Tok::Sym(',') {
                        self.bump();
                        idx.push(self.small_int()?.to_string());
                    }
                    self.expect(']')?;
                    text = format!("{text}[{}]", idx.join(","));
                }
                Ok(Value::Mono(Scalar::one(), vec![text]))
            }
            t => Err(ExprError::new(p, format!("unexpected {}", describe(&t)))),
        }
    }

    fn call(&mut self, name: &str, p: usize) -> Result<Value, ExprError> {
        self.expect('(')?;
        let mut args = Vec::new();
        if self.peek() != &Tok::Sym(')') {
            loop {
                let ap = self.pos();
                args.push((ap, self.expr()?));
                if self.peek() == &Tok::Sym(',') {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(')')?;
        let arity = |want: &[usize]| -> Result<(), ExprError> {
            if want.contains(&args.len()) {
                Ok(())
            } else {
                Err(ExprError::new(
                    p,
                    format!("{name} takes {want:?} arguments, got {}", args.len()),
                ))
            }
        };
        let v = self.v;
        let verr = |p: usize| move |e: verdex_core::VertexError| ExprError::new(p, e.to_string());
        match name {
            "nprod" => {
                arity(&[3])?;
                let n = self.int_arg(&args[2])?;
                let fa = self.field(&args[0])?;
                let b = self.state(&args[1])?;
                let _ = v.state_field(&v.fs(&fa)).map_err(verr(args[0].0))?;
                Ok(Value::State(fa.mode(n, &b)))
            }
            "Y" => {
                arity(&[1])?;
                Ok(Value::Field(self.field(&args[0])?))
            }
            "fs" => {
                arity(&[1])?;
                Ok(Value::State(v.fs(&self.field(&args[0])?)))
            }
            "T" => {
                arity(&[1])?;
                Ok(Value::State(v.translate(&self.state(&args[0])?)))
            }
            "lambda" => {
                arity(&[2])?;
                let a = self.state(&args[0])?;
                let b = self.state(&args[1])?;
                if !v.in_v_prime(&a) && a != v.vacuum() {
                    return Err(ExprError::new(args[0].0, format!("{} is outside V'", v.render(&a))));
                }
                lambda_bracket(v, &a, &b)
                    .map(Value::Lambda)
                    .map_err(|e| ExprError::new(p, e.to_string()))
            }
            "expzT" => {
                arity(&[1, 2])?;
                let n = match args.get(1) {
                    Some(a) => self.int_arg(a)?,
                    None => 4,
                };
                if n <= 0 {
                    return Err(ExprError::new(args[1].0, "the window must be positive"));
                }
                let a = self.state(&args[0])?;
                let w = Window::new(0, n).map_err(|e| ExprError::new(p, e.to_string()))?;
                v.exp_zt(&a, w).map(Value::Series).map_err(verr(p))
            }
            _ => unreachable!("FUNCS lists every name"),
        }
    }

    fn int_arg(&self, (p, a): &(usize, Value)) -> Result<i64, ExprError> {
        match a {
            Value::Num(c) if c.is_integer() => c
                .numer()
                .try_into()
                .map_err(|_| ExprError::new(*p, "integer out of range")),
            other => Err(ExprError::new(*p, format!("expected an integer, found {}", other.kind()))),
        }
    }

    fn state_of(&self, p: usize, a: &Value) -> Result<State, ExprError> {
        match a {
            Value::Num(c) => Ok(self.v.vacuum().scaled(c)),
            Value::Mono(c, f) => {
                let s = self
                    .v
                    .parse_state(&f.join("*"))
                    .map_err(|_| ExprError::new(p, format!("`{}` is not a monomial here", f.join("*"))))?;
                Ok(s.scaled(c))
            }
            Value::State(s) => Ok(s.clone()),
            Value::Field(f) => Ok(self.v.fs(f)),
            other => Err(ExprError::new(p, format!("expected a state, found {}", other.kind()))),
        }
    }

    fn state(&self, (p, a): &(usize, Value)) -> Result<State, ExprError> {
        self.state_of(*p, a)
    }

    fn field(&self, (p, a): &(usize, Value)) -> Result<ModeField, ExprError> {
        if let Value::Field(f) = a {
            return Ok(f.clone());
        }
        let s = self.state_of(*p, a)?;
        self.v
            .state_field(&s)
            .map_err(|e| ExprError::new(*p, e.to_string()))
    }

    fn negate(&self, x: Value, p: usize) -> Result<Value, ExprError> {
        let m1 = Scalar::from_int(-1);
        Ok(match x {
            Value::Num(c) => Value::Num(&c * &m1),
            Value::Mono(c, f) => Value::Mono(&c * &m1, f),
            Value::State(s) => Value::State(s.scaled(&m1)),
            Value::Field(f) => Value::Field(f.scale(&m1)),
            other => return Err(ExprError::new(p, format!("cannot negate {}", other.kind()))),
        })
    }

    fn add(&self, a: Value, b: Value, p: usize) -> Result<Value, ExprError> {
        Ok(match (a, b) {
            (Value::Num(x), Value::Num(y)) => Value::Num(&x + &y),
            (Value::Field(f), Value::Field(g)) => Value::Field(f.add(&g)),
            (a @ (Value::Num(_) | Value::Mono(..) | Value::State(_)), b) if is_stateish(&b) => {
                let (x, y) = (self.state_of(p, &a)?, self.state_of(p, &b)?);
                Value::State(&x + &y)
            }
            (a, b) => {
                return Err(ExprError::new(
                    p,
                    format!("cannot add {} and {}", a.kind(), b.kind()),
                ))
            }
        })
    }

    fn mul(&self, a: Value, b: Value, p: usize) -> Result<Value, ExprError> {
        Ok(match (a, b) {
            (Value::Num(x), Value::Num(y)) => Value::Num(&x * &y),
            (Value::Num(x), Value::Mono(c, f)) | (Value::Mono(c, f), Value::Num(x)) => {
                Value::Mono(&x * &c, f)
            }
            (Value::Mono(c, f), Value::Mono(d, g)) => {
                Value::Mono(&c * &d, f.into_iter().chain(g).collect())
            }
            (Value::Num(x), Value::State(s)) | (Value::State(s), Value::Num(x)) => {
                Value::State(s.scaled(&x))
            }
            (Value::Num(x), Value::Field(f)) | (Value::Field(f), Value::Num(x)) => {
                Value::Field(f.scale(&x))
            }
            (a, b) => {
                return Err(ExprError::new(
                    p,
                    format!("cannot multiply {} by {}", a.kind(), b.kind()),
                ))
            }
        })
    }

    fn div(&self, a: Value, b: Value, p: usize) -> Result<Value, ExprError> {
        let Value::Num(d) = b else {
            return Err(ExprError::new(p, format!("cannot divide by {}", b.kind())));
        };
        let inv = d
            .inv()
            .map_err(|_| ExprError::new(p, "division by zero"))?;
        self.mul(a, Value::Num(inv), p)
    }
}

fn is_stateish(v: &Value) -> bool {
    matches!(v, Value::Num(_) | Value::Mono(..) | Value::State(_))
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(s) => format!("`{s}`"),
        Tok::Name(s) => format!("`{s}`"),
        Tok::Vac => "`|0>`".into(),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

/// An evaluated expression, with `Mono` resolved to a state.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub value: Value,
}

pub fn evaluate(v: &VertexAlgebra, text: &str) -> Result<Evaluated, ExprError> {
    let mut p = Parser {
        v,
        toks: lex(text)?,
        at: 0,
    };
    if p.peek() == &Tok::End {
        return Err(ExprError::new(0, "empty expression"));
    }
    let value = p.expr()?;
    if p.peek() != &Tok::End {
        let (pos, t) = p.bump();
        return Err(ExprError::new(pos, format!("unexpected {}", describe(&t))));
    }
    let value = match value {
        Value::Mono(..) => Value::State(p.state_of(0, &value)?),
        other => other,
    };
    Ok(Evaluated { value })
}

fn state_json(v: &VertexAlgebra, s: &State) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|(m, c)| {
            json!({
                "monomial": v.model().render_monomial(m),
                "coefficient": Number::ExactRational { value: c.to_string() },
            })
        })
        .collect();
    json!({ "text": v.render(s), "terms": terms })
}

fn wrap(s: &str) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

impl Evaluated {
    pub fn text(&self, v: &VertexAlgebra) -> String {
        match &self.value {
            Value::Num(c) => c.to_string(),
            Value::Mono(..) => unreachable!("resolved by evaluate"),
            Value::State(s) => v.render(s),
            Value::Field(f) => f.label().to_string(),
            Value::Lambda(l) => l.render(v),
            Value::Series(s) => {
                let mut parts = Vec::new();
                for (n, x) in s.terms() {
                    let body = v.render(x);
                    parts.push(match n {
                        0 => body,
                        1 => format!("{} z", wrap(&body)),
                        _ => format!("{} z^{n}", wrap(&body)),
                    });
                }
                if parts.is_empty() {
                    parts.push("0".into());
                }
                format!("{} + O(z^{})", parts.join(" + "), s.window().hi)
            }
        }
    }

    pub fn json(&self, v: &VertexAlgebra) -> Json {
        let text = self.text(v);
        match &self.value {
            Value::Num(c) => json!({
                "kind": "scalar",
                "text": text,
                "value": Number::ExactRational { value: c.to_string() },
            }),
            Value::Mono(..) => unreachable!("resolved by evaluate"),
            Value::State(s) => {
                let mut j = state_json(v, s);
                j["kind"] = json!("state");
                j
            }
            Value::Field(f) => json!({
                "kind": "field",
                "text": text,
                "fs": state_json(v, &v.fs(f)),
            }),
            Value::Lambda(l) => json!({
                "kind": "lambda-polynomial",
                "text": text,
                "terms": l.coeffs.iter().map(|(n, s)| json!({
                    "power": n,
                    "state": state_json(v, s),
                })).collect::<Vec<_>>(),
            }),
            Value::Series(s) => json!({
                "kind": "series",
                "text": text,
                "window": [s.window().lo, s.window().hi],
                "terms": s.terms().map(|(n, x)| json!({
                    "exponent": n,
                    "state": state_json(v, x),
                })).collect::<Vec<_>>(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use verdex_core::algebras::{free_boson, free_fermion, virasoro};
    use verdex_core::{NormCtx, ScalarRing};

    fn vir() -> VertexAlgebra {
        virasoro(NormCtx::Trivial, ScalarRing::Rationals).unwrap()
    }

    fn eval(v: &VertexAlgebra, s: &str) -> String {
        evaluate(v, s).unwrap().text(v)
    }

    #[test]
    fn virasoro_products() {
        let v = vir();
        assert_eq!(eval(&v, "nprod(L, L, 3)"), "1/2 * C");
        assert_eq!(eval(&v, "nprod(L, L, 1)"), "2 * L[-2]");
        assert_eq!(eval(&v, "nprod(L, L, 0)"), "L[-3]");
        assert_eq!(eval(&v, "nprod(L, L, 2)"), "0");
        assert_eq!(eval(&v, "Y(vac)"), "I");
        assert_eq!(eval(&v, "fs(L)"), "L[-2]");
        assert_eq!(eval(&v, "T(L[-2])"), "L[-3]");
        assert_eq!(eval(&v, "lambda(L, L)"), "L[-3] + 2λ L[-2] + (1/12)λ^3 C");
    }

    #[test]
    fn boson_arithmetic() {
        let b = free_boson(NormCtx::Trivial).unwrap();
        assert_eq!(eval(&b, "fs(a)"), "x1");
        assert_eq!(eval(&b, "2*x1^2 - x2 + 1/2"), eval(&b, "-x2 + 2*x1*x1 + 1/2*|0>"));
        assert_eq!(eval(&b, "nprod(x1, x1, -1)"), "x1^2");
        assert_eq!(eval(&b, "nprod(Y(x1), x1, 1)"), "|0>");
        assert_eq!(eval(&b, "expzT(x1, 3)"), "x1 + x2 z + x3 z^2 + O(z^3)");
        assert_eq!(eval(&b, "lambda(x1, x1)"), "λ |0>");
        assert_eq!(eval(&b, "-(x1 + x2)"), eval(&b, "-x1 - x2"));
    }

    #[test]
    fn fermion_wedges() {
        let f = free_fermion(NormCtx::Trivial).unwrap();
        assert_eq!(eval(&f, "nprod(xi[1], xi[2], -1)"), "xi[1,2]");
        assert_eq!(eval(&f, "nprod(phi, phi, 0)"), "|0>");
        assert_eq!(eval(&f, "T(xi[1,2])"), "2 * xi[1,3]");
    }

    #[test]
    fn diagnostics_carry_positions() {
        let b = free_boson(NormCtx::Trivial).unwrap();
        let e = evaluate(&b, "nprod(x1, x1)").unwrap_err();
        assert_eq!(e.pos, 0);
        assert!(e.msg.contains("nprod"));
        let e = evaluate(&b, "x1 + ?").unwrap_err();
        assert_eq!(e.pos, 5);
        let e = evaluate(&b, "x1 + y7").unwrap_err();
        assert_eq!(e.pos, 3);
        let e = evaluate(&b, "T(x1").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(e.render("T(x1").contains("column 5"));
        let e = evaluate(&b, "lambda(x1, x1) * x1").unwrap_err();
        assert!(e.msg.contains("cannot multiply"));
    }
}
