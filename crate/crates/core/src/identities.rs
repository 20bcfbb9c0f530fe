//! Exact checkers for the identities of a vertex algebra: Borcherds (state
//! and bivariate forms), skew-symmetry, the commutator formula, the
//! derivation property of `T`, and Dong's lemma.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::fields::{locality_order, nproduct};
use crate::scalars::{binomial_scalar, Norm, Scalar};
use crate::series::{delta_derivative, pole_coefficient, Side, Window};
use crate::states::State;
use crate::vertex::{VertexAlgebra, VertexError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactZero,
    Nonzero,
    Inconclusive,
}

/// A number in a report, tagged with its representation.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Number {
    ExactRational { value: String },
    /// `base^(num/den)`.
    ExponentScale { base: u64, num: i64, den: i64 },
    Real { value: f64 },
}

impl Number {
    /// `base^(num/den)` in lowest terms with `den > 0`.
    pub fn exponent(base: u64, num: i64, den: i64) -> Number {
        let g = num_integer::gcd(num, den).max(1) * den.signum();
        Number::ExponentScale {
            base,
            num: num / g,
            den: den / g,
        }
    }

    pub fn norm(n: &Norm) -> Number {
        Number::ExactRational {
            value: n.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub algebra: String,
    pub params: BTreeMap<String, String>,
    pub defect: Number,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityReport {
    pub fn is_exact_zero(&self) -> bool {
        self.verdict == Verdict::ExactZero
    }
}

/// Accumulates the differences of the two sides of an identity.
pub(crate) struct Tally<'a> {
    v: &'a VertexAlgebra,
    identity: &'static str,
    params: BTreeMap<String, String>,
    worst: Norm,
    exact: bool,
    note: Option<String>,
    inconclusive: bool,
}

impl<'a> Tally<'a> {
    pub(crate) fn new(v: &'a VertexAlgebra, identity: &'static str) -> Self {
        Tally {
            v,
            identity,
            params: BTreeMap::new(),
            worst: Norm::zero(),
            exact: true,
            note: None,
            inconclusive: false,
        }
    }

    pub(crate) fn param(mut self, k: &str, val: impl ToString) -> Self {
        self.params.insert(k.to_string(), val.to_string());
        self
    }

    pub(crate) fn state(self, k: &str, s: &State) -> Self {
        let r = self.v.render(s);
        self.param(k, r)
    }

    pub(crate) fn record(&mut self, diff: &State) {
        if !diff.is_zero() {
            self.exact = false;
            self.worst = self.worst.clone().max(self.v.norm(diff));
        }
    }

    pub(crate) fn inconclusive(&mut self, why: String) {
        self.inconclusive = true;
        self.note = Some(why);
    }

    pub(crate) fn note(&mut self, note: String) {
        self.note = Some(note);
    }

    pub(crate) fn finish(self) -> IdentityReport {
        let verdict = if !self.exact {
            Verdict::Nonzero
        } else if self.inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::ExactZero
        };
        IdentityReport {
            identity: self.identity.to_string(),
            algebra: self.v.name(),
            params: self.params,
            defect: Number::norm(&self.worst),
            verdict,
            note: self.note,
        }
    }
}

/// `-1` when both states are odd, else `1`.
pub(crate) fn koszul_sign(v: &VertexAlgebra, a: &State, b: &State) -> Result<Scalar, VertexError> {
    Ok(if v.parity(a)? && v.parity(b)? {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    })
}

/// Number of `j >= 0` with `j < end`, further capped at `cap` when the
/// binomial in front of the sum vanishes beyond it.
fn range_len(end: i64, cap: Option<i64>) -> i64 {
    let e = match cap {
        Some(c) => end.min(c + 1),
        None => end,
    };
    e.max(0)
}

/// `Σ_j C(m,j) (a_(n+j) b)_(m+k-j) c` against
/// `Σ_j (-1)^j C(n,j) (a_(m+n-j) b_(k+j) c - s (-1)^n b_(n+k-j) a_(m+j) c)`.
#[allow(clippy::too_many_arguments)]
pub fn check_borcherds(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    m: i64,
    n: i64,
    k: i64,
    depth_budget: i64,
) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = Tally::new(v, "borcherds")
        .state("a", a)
        .state("b", b)
        .state("c", c)
        .param("m", m)
        .param("n", n)
        .param("k", k);
    let left_len = range_len(v.bound(a, b)?.saturating_sub(n), (m >= 0).then_some(m));
    let right_end = (v.bound(b, c)?.saturating_sub(k)).max(v.bound(a, c)?.saturating_sub(m));
    let right_len = range_len(right_end, (n >= 0).then_some(n));
    if left_len > depth_budget || right_len > depth_budget {
        t.inconclusive(format!(
            "truncation needs {} terms, budget is {depth_budget}",
            left_len.max(right_len)
        ));
        return Ok(t.finish());
    }
    let mut lhs = State::zero(v.space());
    for j in 0..left_len {
        let x = v.apply_mode(a, n + j, b)?;
        if x.is_zero() {
            continue;
        }
        let coef = binomial_scalar(m, j as u64);
        lhs.add_scaled(&v.apply_mode(&x, m + k - j, c)?, &coef);
    }
    let mut rhs = State::zero(v.space());
    let second = &s * &Scalar::sign(n);
    for j in 0..right_len {
        let coef = Scalar::sign(j) * binomial_scalar(n, j as u64);
        if coef.is_zero() {
            continue;
        }
        let t1 = v.apply_mode(a, m + n - j, &v.apply_mode(b, k + j, c)?)?;
        let t2 = v.apply_mode(b, n + k - j, &v.apply_mode(a, m + j, c)?)?;
        let mut term = t1;
        term.add_scaled(&t2, &-&second);
        rhs.add_scaled(&term, &coef);
    }
    t.record(&(&lhs - &rhs));
    Ok(t.finish())
}

/// `a_(n) b = -s Σ_m (-1)^{m+n} T^(m) (b_(m+n) a)` for each `n` in `ns`.
pub fn check_skew(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    ns: &[i64],
) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = Tally::new(v, "skew")
        .state("a", a)
        .state("b", b)
        .param("n", format!("{ns:?}"));
    let u = v.bound(b, a)?;
    for &n in ns {
        let lhs = v.apply_mode(a, n, b)?;
        let mut rhs = State::zero(v.space());
        for m in 0..(u - n).max(0) {
            let inner = v.apply_mode(b, m + n, a)?;
            if inner.is_zero() {
                continue;
            }
            let tm = v.divided_power(&inner, m as u64)?;
            rhs.add_scaled(&tm, &-(&s * &Scalar::sign(m + n)));
        }
        t.record(&(&lhs - &rhs));
    }
    Ok(t.finish())
}

/// `[a_(m), b_(n)] c = Σ_j C(m,j) (a_(j) b)_(m+n-j) c`.
pub fn check_commutator(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    m: i64,
    n: i64,
) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = Tally::new(v, "commutator")
        .state("a", a)
        .state("b", b)
        .state("c", c)
        .param("m", m)
        .param("n", n);
    let mut lhs = v.apply_mode(a, m, &v.apply_mode(b, n, c)?)?;
    lhs.add_scaled(&v.apply_mode(b, n, &v.apply_mode(a, m, c)?)?, &-&s);
    let mut rhs = State::zero(v.space());
    for j in 0..range_len(v.bound(a, b)?, (m >= 0).then_some(m)) {
        let x = v.apply_mode(a, j, b)?;
        if x.is_zero() {
            continue;
        }
        rhs.add_scaled(&v.apply_mode(&x, m + n - j, c)?, &binomial_scalar(m, j as u64));
    }
    t.record(&(&lhs - &rhs));
    Ok(t.finish())
}

/// `T(a_(n) b) = (Ta)_(n) b + a_(n) (Tb)`.
pub fn t_derivation_check(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    n: i64,
) -> Result<IdentityReport, VertexError> {
    let mut t = Tally::new(v, "t-derivation")
        .state("a", a)
        .state("b", b)
        .param("n", n);
    let lhs = v.translate(&v.apply_mode(a, n, b)?);
    let rhs = &v.apply_mode(&v.translate(a), n, b)? + &v.apply_mode(a, n, &v.translate(b))?;
    t.record(&(&lhs - &rhs));
    Ok(t.finish())
}

/// `Y(a_(n) b, z)` against `Y(a, z)_(n) Y(b, z)` on probes and modes.
pub fn check_nproduct_field(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    n: i64,
    probes: &[State],
    modes: std::ops::RangeInclusive<i64>,
) -> Result<IdentityReport, VertexError> {
    let mut t = Tally::new(v, "n-product-field")
        .state("a", a)
        .state("b", b)
        .param("n", n);
    let ab = v.apply_mode(a, n, b)?;
    let prod = nproduct(&v.field_unchecked(a)?, &v.field_unchecked(b)?, n);
    for p in probes {
        for k in modes.clone() {
            let lhs = v.apply_mode(&ab, k, p)?;
            t.record(&(&lhs - &prod.mode(k, p)));
        }
    }
    Ok(t.finish())
}

/// Dong's lemma: `Y(a)_(n) Y(b)` is local with `Y(c)`. Exact zero when an
/// order `<= nmax` is found on the probes, inconclusive otherwise.
#[allow(clippy::too_many_arguments)]
pub fn check_dong(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    n: i64,
    probes: &[State],
    nmax: u32,
    window: Window,
) -> Result<IdentityReport, VertexError> {
    let mut t = Tally::new(v, "dong")
        .state("a", a)
        .state("b", b)
        .state("c", c)
        .param("n", n);
    let f = nproduct(&v.field_unchecked(a)?, &v.field_unchecked(b)?, n);
    let g = v.field_unchecked(c)?;
    let rep = locality_order(&f, &g, probes, nmax, window, v.ctx())?;
    match rep.order {
        Some(o) => t.note(format!("locality order {o}")),
        None => t.inconclusive(format!("no vanishing order up to {nmax} on the window")),
    }
    Ok(t.finish())
}

/// The bivariate Borcherds identity applied to `c`, coefficientwise on
/// `wz × ww`:
/// `a(z)b(w) i_{z,w}(z-w)^n - s b(w)a(z) i_{w,z}(z-w)^n
///  = Σ_j (a_(n+j) b)(w) ∂_w^(j) δ(z-w)`.
/// The left side is read off the pole expansions, the right side off the
/// delta-function derivatives.
pub fn check_bivariate_borcherds(
    v: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    n: i64,
    wz: Window,
    ww: Window,
) -> Result<IdentityReport, VertexError> {
    let s = koszul_sign(v, a, b)?;
    let mut t = Tally::new(v, "bivariate-borcherds")
        .state("a", a)
        .state("b", b)
        .state("c", c)
        .param("n", n)
        .param("window", format!("{wz} x {ww}"));
    let ub_c = v.bound(b, c)?;
    let ua_c = v.bound(a, c)?;
    // a_(p) c and b_(q) c for the modes the left side can reach.
    let products: Vec<(i64, State)> = {
        let mut out = Vec::new();
        let top = v.bound(a, b)? - n;
        for j in 0..top.max(0) {
            let x = v.apply_mode(a, n + j, b)?;
            if !x.is_zero() {
                out.push((j, x));
            }
        }
        out
    };
    let jmax = products.iter().map(|(j, _)| *j).max().unwrap_or(0);
    let dww = Window::new(wz.lo.min(-wz.hi) - jmax - 2, -wz.lo + 1)?;
    let deltas: Vec<_> = products
        .iter()
        .map(|(j, _)| delta_derivative(*j as u64, wz, dww))
        .collect();
    for ez in wz.iter() {
        for ew in ww.iter() {
            let mut lhs = State::zero(v.space());
            // i_{z,w}: z^{n-j} w^j, j >= 0; b_(q) c vanishes for q >= U_b(c).
            let jz_end = (ub_c + ew + 1).max(0);
            for j in 0..jz_end {
                let coef = pole_coefficient(n, Side::Zw, n - j, j);
                if coef.is_zero() {
                    continue;
                }
                let (p, q) = (n - j - ez - 1, j - ew - 1);
                let bc = v.apply_mode(b, q, c)?;
                if bc.is_zero() {
                    continue;
                }
                lhs.add_scaled(&v.apply_mode(a, p, &bc)?, &coef);
            }
            // i_{w,z}: z^i w^{n-i}, i >= 0; a_(p) c vanishes for p >= U_a(c).
            let iz_end = (ua_c + ez + 1).max(0);
            for i in 0..iz_end {
                let coef = pole_coefficient(n, Side::Wz, i, n - i);
                if coef.is_zero() {
                    continue;
                }
                let (p, q) = (i - ez - 1, n - i - ew - 1);
                let ac = v.apply_mode(a, p, c)?;
                if ac.is_zero() {
                    continue;
                }
                lhs.add_scaled(&v.apply_mode(b, q, &ac)?, &-(&coef * &s));
            }
            let mut rhs = State::zero(v.space());
            for ((_, x), d) in products.iter().zip(&deltas) {
                for ((dz, dw), coef) in d.terms() {
                    if dz != ez {
                        continue;
                    }
                    // x(w) w^{dw} = Σ x_(q) w^{dw - q - 1}
                    let q = dw - ew - 1;
                    rhs.add_scaled(&v.apply_mode(x, q, c)?, coef);
                }
            }
            t.record(&(&lhs - &rhs));
        }
    }
    Ok(t.finish())
}
