//! λ-brackets `[a_λ b] = Σ λ^n a_(n) b / n!` and the axioms of a Lie
//! conformal algebra; radius certificates for the λ-coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::identities::{koszul_sign, IdentityReport, Number, Tally};
use crate::scalars::{
    binomial_scalar, factorial, factorial_valuation, radius_bound_holds, NormCtx, Scalar,
};
use crate::states::State;
use crate::vertex::{VertexAlgebra, VertexError};

#[derive(Debug, Error)]
pub enum ConformalError {
    #[error("a_({n})b / {n}! has coefficients outside the scalar ring {ring}")]
    NotDivisible { n: i64, ring: String },
    #[error("radius certificates need a p-adic norm, got {0}")]
    NotPadic(NormCtx),
    #[error(transparent)]
    Vertex(#[from] VertexError),
}

/// `Σ_n λ^n coeffs[n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPolynomial {
    pub coeffs: BTreeMap<u32, State>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaTerm {
    pub power: u32,
    pub state: String,
}

impl LambdaPolynomial {
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(State::is_zero)
    }

    pub fn coeff(&self, n: u32) -> Option<&State> {
        self.coeffs.get(&n)
    }

    /// `L[-3] + 2λ L[-2] + (1/12)λ^3 C`.
    pub fn render(&self, v: &VertexAlgebra) -> String {
        let mut out = String::new();
        for (&n, s) in &self.coeffs {
            let lam = match n {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{n}"),
            };
            let mut terms = s.terms();
            let (body, neg) = match (terms.next(), terms.next()) {
                (Some((m, c)), None) if n > 0 => {
                    let mag = c.abs();
                    let k = if mag.is_one() {
                        String::new()
                    } else if mag.is_integer() {
                        mag.to_string()
                    } else {
                        format!("({mag})")
                    };
                    (format!("{k}{lam} {}", v.model().render_monomial(m)), c.is_negative())
                }
                _ if n == 0 => (v.render(s), false),
                _ => (format!("{lam} ({})", v.render(s)), false),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let _ = write!(out, "{body}");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn terms(&self, v: &VertexAlgebra) -> Vec<LambdaTerm> {
        self.coeffs
            .iter()
            .map(|(&power, s)| LambdaTerm {
                power,
                state: v.render(s),
            })
            .collect()
    }
}

fn inv_factorial(n: i64) -> Scalar {
    Scalar::from_bigint(factorial(n as u64))
        .inv()
        .expect("factorials are nonzero")
}

/// `Σ_{n>=0} λ^n a_(n) b / n!` with rational coefficients.
fn bracket_q(v: &VertexAlgebra, a: &State, b: &State) -> Result<Vec<State>, VertexError> {
    let u = v.bound(a, b)?;
    (0..u.max(0))
        .map(|n| Ok(v.apply_mode(a, n, b)?.scaled(&inv_factorial(n))))
        .collect()
}

/// `[a_λ b]`, truncated at the vanishing bound of `Y(a)` on `b`. Fails when
/// a division by `n!` leaves the scalar ring.
pub fn lambda_bracket(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
) -> Result<LambdaPolynomial, ConformalError> {
    let mut coeffs = BTreeMap::new();
    for (n, x) in bracket_q(v, a, b)?.into_iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if !x.terms().all(|(_, c)| v.ring().contains(c)) {
            return Err(ConformalError::NotDivisible {
                n: n as i64,
                ring: v.ring().to_string(),
            });
        }
        coeffs.insert(n as u32, x);
    }
    Ok(LambdaPolynomial { coeffs })
}

fn at(p: &[State], j: usize, v: &VertexAlgebra) -> State {
    p.get(j).cloned().unwrap_or_else(|| State::zero(v.space()))
}

fn tally<'a>(v: &'a VertexAlgebra, id: &'static str, ops: &[(&str, &State)]) -> Tally<'a> {
    let mut t = Tally::new(v, id);
    for (k, s) in ops {
        t = t.state(k, s);
    }
    if let Some(c) = v.admissibility_caveat() {
        t.note(c);
    }
    t
}

/// `[Ta_λ b] = -λ [a_λ b]`.
pub fn check_l1(v: &VertexAlgebra, a: &State, b: &State) -> Result<IdentityReport, VertexError> {
    let mut t = tally(v, "conformal-L1", &[("a", a), ("b", b)]);
    let lhs = bracket_q(v, &v.translate(a), b)?;
    let base = bracket_q(v, a, b)?;
    for j in 0..lhs.len().max(base.len() + 1) {
        let mut d = at(&lhs, j, v);
        if j > 0 {
            d.add_assign(&at(&base, j - 1, v));
        }
        t.record(&d);
    }
    Ok(t.finish())
}

/// `[a_λ Tb] = (λ + T) [a_λ b]`.
pub fn check_l1_right(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
) -> Result<IdentityReport, VertexError> {
    let mut t = tally(v, "conformal-L1-right", &[("a", a), ("b", b)]);
    let lhs = bracket_q(v, a, &v.translate(b))?;
    let base = bracket_q(v, a, b)?;
    for j in 0..lhs.len().max(base.len() + 1) {
        let mut d = at(&lhs, j, v);
        d = &d - &v.translate(&at(&base, j, v));
        if j > 0 {
            d = &d - &at(&base, j - 1, v);
        }
        t.record(&d);
    }
    Ok(t.finish())
}

/// `[b_λ a] = -s [a_{-λ-T} b] = -s Σ_n (-λ-T)^n x_n`, `x_n = a_(n) b / n!`.
pub fn check_l2(v: &VertexAlgebra, a: &State, b: &State) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = tally(v, "conformal-L2", &[("a", a), ("b", b)]);
    let lhs = bracket_q(v, b, a)?;
    let x = bracket_q(v, a, b)?;
    // Coefficient of λ^j: -s Σ_{n>=j} (-1)^n C(n, j) T^{n-j} x_n.
    let mut rhs = vec![State::zero(v.space()); x.len()];
    for (n, xn) in x.iter().enumerate() {
        let mut tk = xn.clone();
        for k in 0..=n {
            if k > 0 {
                tk = v.translate(&tk);
            }
            let j = n - k;
            let c = -(&s * &Scalar::sign(n as i64)) * binomial_scalar(n as i64, j as u64);
            rhs[j].add_scaled(&tk, &c);
        }
    }
    for j in 0..lhs.len().max(rhs.len()) {
        t.record(&(&at(&lhs, j, v) - &at(&rhs, j, v)));
    }
    Ok(t.finish())
}

type Bivariate = BTreeMap<(usize, usize), State>;

fn add_bi(p: &mut Bivariate, key: (usize, usize), s: &State, c: &Scalar) {
    if s.is_zero() || c.is_zero() {
        return;
    }
    p.entry(key)
        .or_insert_with(|| State::zero(s.space()))
        .add_scaled(s, c);
}

/// `[a_λ [b_μ c]] = [[a_λ b]_{λ+μ} c] + s [b_μ [a_λ c]]` as a polynomial in
/// `λ, μ`.
pub fn check_l3(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = tally(v, "conformal-L3", &[("a", a), ("b", b), ("c", c)]);
    let one = Scalar::one();
    let mut lhs = Bivariate::new();
    for (m, y) in bracket_q(v, b, c)?.iter().enumerate() {
        for (n, z) in bracket_q(v, a, y)?.iter().enumerate() {
            add_bi(&mut lhs, (n, m), z, &one);
        }
    }
    let mut rhs = Bivariate::new();
    for (n, x) in bracket_q(v, a, b)?.iter().enumerate() {
        for (k, w) in bracket_q(v, x, c)?.iter().enumerate() {
            for i in 0..=k {
                add_bi(&mut rhs, (n + i, k - i), w, &binomial_scalar(k as i64, i as u64));
            }
        }
    }
    for (n, y) in bracket_q(v, a, c)?.iter().enumerate() {
        for (m, z) in bracket_q(v, b, y)?.iter().enumerate() {
            add_bi(&mut rhs, (n, m), z, &s);
        }
    }
    let keys: std::collections::BTreeSet<_> = lhs.keys().chain(rhs.keys()).copied().collect();
    let zero = State::zero(v.space());
    for key in keys {
        let l = lhs.get(&key).unwrap_or(&zero);
        let r = rhs.get(&key).unwrap_or(&zero);
        t.record(&(l - r));
    }
    Ok(t.finish())
}

/// The three axioms (with both forms of sesquilinearity).
pub fn check_conformal_axioms(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
) -> Result<Vec<IdentityReport>, VertexError> {
    Ok(vec![
        check_l1(v, a, b)?,
        check_l1_right(v, a, b)?,
        check_l2(v, a, b)?,
        check_l3(v, a, b, c)?,
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RadiusEntry {
    pub n: u64,
    /// `log_p ||a_(n) b||`, absent when the product vanishes or the norm is
    /// not a power of `p`.
    pub product_norm: Option<Number>,
    /// `log_p (||a_(n) b|| r_p^n / |n!|)`.
    pub exponent: Option<Number>,
    /// `r_p^n / |n!| <= 1`.
    pub holds: bool,
}

/// Exponent-scale evaluation of `||a_(n) b|| r_p^n / |n!|` for every `n`
/// below the vanishing bound.
pub fn radius_certificate(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
) -> Result<Vec<RadiusEntry>, ConformalError> {
    let p = v.ctx().prime().ok_or(ConformalError::NotPadic(v.ctx()))?;
    let u = v.bound(a, b)?;
    let mut out = Vec::new();
    for n in 0..u.max(0) as u64 {
        let x = v.apply_mode(a, n as i64, b)?;
        let holds = radius_bound_holds(n, p);
        let log = if x.is_zero() { None } else { v.norm(&x).log_p(p) };
        let den = p as i64 - 1;
        let exponent = log.map(|l| {
            // l - n/(p-1) + v_p(n!)
            let num = l * den - n as i64 + den * factorial_valuation(n, p) as i64;
            Number::exponent(p, num, den)
        });
        out.push(RadiusEntry {
            n,
            product_norm: log.map(|l| Number::ExponentScale {
                base: p,
                num: l,
                den: 1,
            }),
            exponent,
            holds,
        });
    }
    Ok(out)
}
