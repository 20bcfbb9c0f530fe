//! Truncated Laurent and bivariate series with explicit validity windows.
//!
//! A window is the exponent range on which coefficients are known exactly.
//! Outside it a coefficient is unknown, not zero, and every operation that
//! would need an unknown coefficient either shrinks its output window or
//! reports an error.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::scalars::{binomial_scalar, Norm, NormCtx, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("empty window [{lo}, {hi})")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("coefficient at exponent {0} lies outside the window")]
    Unknown(i64),
    #[error("coefficient at ({0}, {1}) lies outside the window")]
    Unknown2(i64, i64),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

/// Exponent range `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Window, SeriesError> {
        if lo < hi {
            Ok(Window { lo, hi })
        } else {
            Err(SeriesError::EmptyWindow { lo, hi })
        }
    }

    pub fn contains(&self, e: i64) -> bool {
        self.lo <= e && e < self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn iter(&self) -> std::ops::Range<i64> {
        self.lo..self.hi
    }

    pub fn shift(&self, by: i64) -> Window {
        Window {
            lo: self.lo + by,
            hi: self.hi + by,
        }
    }

    pub fn intersect(&self, other: &Window) -> Result<Window, SeriesError> {
        Window::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Coefficients a series can carry: scalars or states.
pub trait Coeff: Clone + PartialEq + fmt::Display {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_to(&mut self, other: &Self);
    fn scaled(&self, s: &Scalar) -> Self;
    fn coeff_norm(&self, ctx: NormCtx) -> Norm;

    fn negated(&self) -> Self {
        self.scaled(&Scalar::from_int(-1))
    }

    fn add_scaled(&mut self, other: &Self, s: &Scalar) {
        if !s.is_zero() {
            self.add_to(&other.scaled(s));
        }
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn add_to(&mut self, other: &Self) {
        *self += other;
    }

    fn scaled(&self, s: &Scalar) -> Self {
        self * s
    }

    fn coeff_norm(&self, ctx: NormCtx) -> Norm {
        crate::scalars::norm(self, ctx)
    }
}

/// Norm of a windowed object. `exact` is false when the object may have
/// support outside the window, in which case `value` is only a lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedNorm {
    pub value: Norm,
    pub exact: bool,
}

fn insert_nonzero<K: Ord, C: Coeff>(map: &mut BTreeMap<K, C>, k: K, c: C) {
    if !c.is_zero() {
        map.insert(k, c);
    }
}

/// Univariate truncated Laurent series.
#[derive(Debug, Clone, PartialEq)]
pub struct UniSeries<C> {
    coeffs: BTreeMap<i64, C>,
    window: Window,
    /// All nonzero coefficients of the represented object lie in the window.
    finite: bool,
}

impl<C: Coeff> UniSeries<C> {
    pub fn zero(window: Window) -> Self {
        UniSeries {
            coeffs: BTreeMap::new(),
            window,
            finite: true,
        }
    }

    /// Builds a truncation of a possibly infinite series; terms outside the
    /// window are dropped.
    pub fn truncated(window: Window, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            if window.contains(e) {
                let slot = coeffs.entry(e).or_insert_with(C::zero);
                slot.add_to(&c);
            }
        }
        coeffs.retain(|_, c: &mut C| !c.is_zero());
        UniSeries {
            coeffs,
            window,
            finite: false,
        }
    }

    /// A Laurent polynomial whose whole support is inside `window`.
    pub fn polynomial(
        window: Window,
        terms: impl IntoIterator<Item = (i64, C)>,
    ) -> Result<Self, SeriesError> {
        let mut s = UniSeries::zero(window);
        for (e, c) in terms {
            if !window.contains(e) {
                if c.is_zero() {
                    continue;
                }
                return Err(SeriesError::Unknown(e));
            }
            s.coeffs.entry(e).or_insert_with(C::zero).add_to(&c);
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn mark_finite(mut self, finite: bool) -> Self {
        self.finite = finite;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at `e`; zero outside the window only for finite series.
    pub fn coeff(&self, e: i64) -> Result<C, SeriesError> {
        if self.window.contains(e) || self.finite {
            Ok(self.coeffs.get(&e).cloned().unwrap_or_else(C::zero))
        } else {
            Err(SeriesError::Unknown(e))
        }
    }

    pub fn norm(&self, ctx: NormCtx) -> WindowedNorm {
        let value = self
            .coeffs
            .values()
            .map(|c| c.coeff_norm(ctx))
            .fold(Norm::zero(), Norm::max);
        WindowedNorm {
            value,
            exact: self.finite,
        }
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let mut out = UniSeries::zero(self.window);
        out.finite = self.finite;
        for (e, c) in &self.coeffs {
            insert_nonzero(&mut out.coeffs, *e, c.scaled(s));
        }
        out
    }

    /// Sum on the intersection of the two windows.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let window = if self.finite && other.finite {
            Window::new(
                self.window.lo.min(other.window.lo),
                self.window.hi.max(other.window.hi),
            )?
        } else {
            self.window.intersect(&other.window)?
        };
        let mut out = UniSeries::zero(window);
        out.finite = self.finite && other.finite;
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if window.contains(*e) {
                out.coeffs.entry(*e).or_insert_with(C::zero).add_to(c);
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Coefficients agree wherever both windows know them.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let Ok(w) = self.window.intersect(&other.window) else {
            return true;
        };
        w.iter().all(|e| match (self.coeff(e), other.coeff(e)) {
            (Ok(a), Ok(b)) => a == b,
            _ => true,
        })
    }

    /// Canonical text form, one `exponent: coefficient` line per nonzero term.
    pub fn to_canonical_text(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.coeffs {
            let _ = writeln!(s, "{e}: {c}");
        }
        s
    }
}

impl UniSeries<Scalar> {
    /// Product of two finite Laurent polynomials.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        if !(self.finite && other.finite) {
            return Err(SeriesError::Inconclusive(
                "product of truncated series needs finite support".into(),
            ));
        }
        let window = Window::new(
            self.window.lo + other.window.lo,
            self.window.hi + other.window.hi - 1,
        )?;
        let mut out = UniSeries::zero(window);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.coeffs
                    .entry(e1 + e2)
                    .or_insert_with(Scalar::zero)
                    .add_to(&(c1 * c2));
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

impl<C: Coeff> fmt::Display for UniSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) z")?,
                _ => write!(f, "({c}) z^{e}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

/// Bivariate truncated series in `z` and `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeries<C> {
    coeffs: BTreeMap<(i64, i64), C>,
    wz: Window,
    ww: Window,
    finite: bool,
}

impl<C: Coeff> BiSeries<C> {
    pub fn zero(wz: Window, ww: Window) -> Self {
        BiSeries {
            coeffs: BTreeMap::new(),
            wz,
            ww,
            finite: true,
        }
    }

    /// Truncation of a possibly infinite bivariate series.
    pub fn from_fn(wz: Window, ww: Window, mut f: impl FnMut(i64, i64) -> C) -> Self {
        let mut coeffs = BTreeMap::new();
        for ez in wz.iter() {
            for ew in ww.iter() {
                insert_nonzero(&mut coeffs, (ez, ew), f(ez, ew));
            }
        }
        BiSeries {
            coeffs,
            wz,
            ww,
            finite: false,
        }
    }

    pub fn windows(&self) -> (Window, Window) {
        (self.wz, self.ww)
    }

    pub fn is_finite(&self) -> bool {
        self.finite
    }

    pub fn mark_finite(mut self, finite: bool) -> Self {
        self.finite = finite;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, ez: i64, ew: i64) -> Result<C, SeriesError> {
        if (self.wz.contains(ez) && self.ww.contains(ew)) || self.finite {
            Ok(self.coeffs.get(&(ez, ew)).cloned().unwrap_or_else(C::zero))
        } else {
            Err(SeriesError::Unknown2(ez, ew))
        }
    }

    pub fn norm(&self, ctx: NormCtx) -> WindowedNorm {
        let value = self
            .coeffs
            .values()
            .map(|c| c.coeff_norm(ctx))
            .fold(Norm::zero(), Norm::max);
        WindowedNorm {
            value,
            exact: self.finite,
        }
    }

    /// Sum on the common window.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let wz = self.wz.intersect(&other.wz)?;
        let ww = self.ww.intersect(&other.ww)?;
        let mut out = BiSeries::zero(wz, ww);
        out.finite = false;
        for ((ez, ew), c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if wz.contains(*ez) && ww.contains(*ew) {
                out.coeffs.entry((*ez, *ew)).or_insert_with(C::zero).add_to(c);
            }
        }
        out.coeffs.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.scaled(&Scalar::from_int(-1)))
    }

    pub fn scaled(&self, s: &Scalar) -> Self {
        let mut out = BiSeries::zero(self.wz, self.ww);
        out.finite = self.finite;
        for (k, c) in &self.coeffs {
            insert_nonzero(&mut out.coeffs, *k, c.scaled(s));
        }
        out
    }

    /// Restriction to a sub-rectangle of the windows.
    pub fn restrict(&self, wz: Window, ww: Window) -> Result<Self, SeriesError> {
        let wz = self.wz.intersect(&wz)?;
        let ww = self.ww.intersect(&ww)?;
        let mut out = BiSeries::zero(wz, ww);
        out.finite = false;
        for ((ez, ew), c) in &self.coeffs {
            if wz.contains(*ez) && ww.contains(*ew) {
                out.coeffs.insert((*ez, *ew), c.clone());
            }
        }
        Ok(out)
    }

    pub fn to_canonical_text(&self) -> String {
        let mut s = String::new();
        for ((ez, ew), c) in &self.coeffs {
            let _ = writeln!(s, "({ez}, {ew}): {c}");
        }
        s
    }
}

/// Which expansion of `(z-w)^n` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Domain `|z| > |w|`.
    Zw,
    /// Domain `|w| > |z|`.
    Wz,
    /// Difference of the two expansions.
    Delta,
}

/// Coefficient of `z^ez w^ew` in the chosen expansion of `(z-w)^n`.
pub fn pole_coefficient(n: i64, side: Side, ez: i64, ew: i64) -> Scalar {
    if ez + ew != n {
        return Scalar::zero();
    }
    match side {
        Side::Zw => {
            if ew < 0 || (n >= 0 && ez < 0) {
                Scalar::zero()
            } else {
                Scalar::sign(ew) * binomial_scalar(n, ew as u64)
            }
        }
        Side::Wz => {
            if ez < 0 || (n >= 0 && ew < 0) {
                Scalar::zero()
            } else {
                Scalar::sign(n + ez) * binomial_scalar(n, ez as u64)
            }
        }
        Side::Delta => {
            pole_coefficient(n, Side::Zw, ez, ew) - pole_coefficient(n, Side::Wz, ez, ew)
        }
    }
}

pub fn expand_pole(n: i64, side: Side, wz: Window, ww: Window) -> BiSeries<Scalar> {
    let mut s = BiSeries::from_fn(wz, ww, |ez, ew| pole_coefficient(n, side, ez, ew));
    // A polynomial or its vanishing delta part is finitely supported.
    if n >= 0 {
        let inside = (0..=n).all(|r| wz.contains(n - r) && ww.contains(r));
        s.finite = inside || side == Side::Delta;
    }
    s
}

/// `∂_w^{(i)} δ(z-w) = Σ_n C(n,i) w^{n-i} z^{-n-1}` truncated to the windows.
pub fn delta_derivative(i: u64, wz: Window, ww: Window) -> BiSeries<Scalar> {
    BiSeries::from_fn(wz, ww, |ez, ew| {
        let n = -ez - 1;
        if ew == n - i as i64 {
            binomial_scalar(n, i)
        } else {
            Scalar::zero()
        }
    })
}

pub fn hasse_uni<C: Coeff>(f: &UniSeries<C>, i: u64) -> UniSeries<C> {
    let window = f.window.shift(-(i as i64));
    let mut out = UniSeries::zero(window);
    out.finite = f.finite;
    for (e, c) in &f.coeffs {
        insert_nonzero(&mut out.coeffs, e - i as i64, c.scaled(&binomial_scalar(*e, i)));
    }
    out
}

pub fn hasse_bi<C: Coeff>(f: &BiSeries<C>, var: Var, i: u64) -> BiSeries<C> {
    let s = i as i64;
    let (wz, ww) = match var {
        Var::Z => (f.wz.shift(-s), f.ww),
        Var::W => (f.wz, f.ww.shift(-s)),
    };
    let mut out = BiSeries::zero(wz, ww);
    out.finite = f.finite;
    for ((ez, ew), c) in &f.coeffs {
        let (key, e) = match var {
            Var::Z => ((ez - s, *ew), *ez),
            Var::W => ((*ez, ew - s), *ew),
        };
        insert_nonzero(&mut out.coeffs, key, c.scaled(&binomial_scalar(e, i)));
    }
    out
}

pub fn residue_uni<C: Coeff>(f: &UniSeries<C>) -> Result<C, SeriesError> {
    f.coeff(-1)
}

/// `Res_z f(z, w)` as a series in `w`.
pub fn residue_z<C: Coeff>(f: &BiSeries<C>) -> Result<UniSeries<C>, SeriesError> {
    if !f.wz.contains(-1) && !f.finite {
        return Err(SeriesError::Unknown(-1));
    }
    let mut out = UniSeries::zero(f.ww);
    out.finite = f.finite;
    for ((ez, ew), c) in &f.coeffs {
        if *ez == -1 {
            out.coeffs.insert(*ew, c.clone());
        }
    }
    Ok(out)
}

/// `(z-w)^k f`, with both lower window edges raised by `k` so that every
/// retained coefficient is exact.
pub fn mul_zw<C: Coeff>(f: &BiSeries<C>, k: u64) -> Result<BiSeries<C>, SeriesError> {
    let mut cur = f.clone();
    for _ in 0..k {
        cur = mul_zw_once(&cur)?;
    }
    Ok(cur)
}

fn mul_zw_once<C: Coeff>(f: &BiSeries<C>) -> Result<BiSeries<C>, SeriesError> {
    let (wz, ww) = if f.finite {
        (
            Window::new(f.wz.lo, f.wz.hi + 1)?,
            Window::new(f.ww.lo, f.ww.hi + 1)?,
        )
    } else {
        (
            Window::new(f.wz.lo + 1, f.wz.hi)?,
            Window::new(f.ww.lo + 1, f.ww.hi)?,
        )
    };
    let mut out: BiSeries<C> = BiSeries::zero(wz, ww);
    out.finite = f.finite;
    for ((ez, ew), c) in &f.coeffs {
        // z * c z^ez w^ew and -w * c z^ez w^ew
        for (key, neg) in [((ez + 1, *ew), false), ((*ez, ew + 1), true)] {
            if wz.contains(key.0) && ww.contains(key.1) {
                let term = if neg { c.negated() } else { c.clone() };
                out.coeffs.entry(key).or_insert_with(C::zero).add_to(&term);
            }
        }
    }
    out.coeffs.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Result of [`delta_decompose`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaDecomposition<C> {
    pub g: Vec<UniSeries<C>>,
    /// The reconstruction `Σ g_i ∂^{(i)}δ` matched `f` on every coefficient
    /// it could be compared on.
    pub clean: bool,
}

/// Extracts `g_i(w) = Res_z (z-w)^i f(z,w)` for `i = 0..=max_order`.
pub fn delta_decompose<C: Coeff>(
    f: &BiSeries<C>,
    max_order: u64,
) -> Result<DeltaDecomposition<C>, SeriesError> {
    if !f.finite && f.wz.lo + max_order as i64 > -1 {
        return Err(SeriesError::Inconclusive(format!(
            "z-window {} too narrow to extract order {max_order}",
            f.wz
        )));
    }
    if !f.finite && f.ww.len() <= max_order as usize {
        return Err(SeriesError::Inconclusive(format!(
            "w-window {} too narrow to extract order {max_order}",
            f.ww
        )));
    }
    let mut g = Vec::new();
    for i in 0..=max_order {
        let shifted = mul_zw(f, i).map_err(|e| SeriesError::Inconclusive(e.to_string()))?;
        let mut gi = residue_z(&shifted).map_err(|e| SeriesError::Inconclusive(e.to_string()))?;
        if !f.finite {
            gi.finite = false;
        }
        g.push(gi);
    }
    let clean = reconstruction_matches(f, &g);
    Ok(DeltaDecomposition { g, clean })
}

fn reconstruction_matches<C: Coeff>(f: &BiSeries<C>, g: &[UniSeries<C>]) -> bool {
    let (wz, ww) = if f.finite {
        let lo_z = f.coeffs.keys().map(|k| k.0).min().unwrap_or(0);
        let hi_z = f.coeffs.keys().map(|k| k.0).max().unwrap_or(0);
        let lo_w = f.coeffs.keys().map(|k| k.1).min().unwrap_or(0);
        let hi_w = f.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        (
            Window { lo: lo_z.min(f.wz.lo), hi: (hi_z + 1).max(f.wz.hi) },
            Window { lo: lo_w.min(f.ww.lo), hi: (hi_w + 1).max(f.ww.hi) },
        )
    } else {
        (f.wz, f.ww)
    };
    for ez in wz.iter() {
        for ew in ww.iter() {
            let mut acc = C::zero();
            let mut known = true;
            for (i, gi) in g.iter().enumerate() {
                // ∂^{(i)}δ has z^ez w^e with e = -ez-1-i and coefficient C(-ez-1, i)
                let e = -ez - 1 - i as i64;
                let c = binomial_scalar(-ez - 1, i as u64);
                if c.is_zero() {
                    continue;
                }
                match gi.coeff(ew - e) {
                    Ok(v) => acc.add_scaled(&v, &c),
                    Err(_) => {
                        known = false;
                        break;
                    }
                }
            }
            if !known {
                continue;
            }
            let Ok(fv) = f.coeff(ez, ew) else { continue };
            if fv != acc {
                return false;
            }
        }
    }
    true
}

/// `h(z,w) + Σ g_n(w) / (z-w)^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleDecomposition<C> {
    pub regular: BiSeries<C>,
    pub poles: Vec<(u64, UniSeries<C>)>,
}

/// Expands a pole decomposition in the domain given by `side` (`Zw` or
/// `Wz`), on the windows of the regular part.
pub fn partial_fractions<C: Coeff>(
    d: &PoleDecomposition<C>,
    side: Side,
) -> Result<BiSeries<C>, SeriesError> {
    let (wz, ww) = d.regular.windows();
    let mut out = d.regular.clone();
    out.finite = false;
    for (n, g) in &d.poles {
        let order = -(*n as i64) - 1;
        for ez in wz.iter() {
            for ew in ww.iter() {
                // g(w) w^e times the expansion term z^ez w^(ew-e)
                let e_pole = order - ez;
                let c = pole_coefficient(order, side, ez, e_pole);
                if c.is_zero() {
                    continue;
                }
                let gv = g.coeff(ew - e_pole)?;
                if gv.is_zero() {
                    continue;
                }
                let slot = out.coeffs.entry((ez, ew)).or_insert_with(C::zero);
                slot.add_scaled(&gv, &c);
            }
        }
    }
    out.coeffs.retain(|_, c| !c.is_zero());
    Ok(out)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn laurent(lo: i64, hi: i64) -> impl Strategy<Value = UniSeries<Scalar>> {
        proptest::collection::vec((lo..hi, -9i64..10), 0..6).prop_map(move |terms| {
            UniSeries::polynomial(
                Window::new(lo, hi).unwrap(),
                terms.into_iter().map(|(e, c)| (e, Scalar::from_int(c))),
            )
            .unwrap()
        })
    }

    /// `Σ g_i(w) ∂^{(i)}δ(z-w)` evaluated directly from the delta formula.
    fn build(gs: &[UniSeries<Scalar>], wz: Window, ww: Window) -> BiSeries<Scalar> {
        BiSeries::from_fn(wz, ww, |ez, ew| {
            let mut acc = Scalar::zero();
            for (i, g) in gs.iter().enumerate() {
                let n = -ez - 1;
                for (e, c) in g.terms() {
                    if ew - e == n - i as i64 {
                        acc += &(c * &binomial_scalar(n, i as u64));
                    }
                }
            }
            acc
        })
    }

    proptest! {
        #[test]
        fn hasse_leibniz(f in laurent(-4, 5), g in laurent(-3, 4), m in 0u64..5) {
            let lhs = hasse_uni(&f.mul(&g).unwrap(), m);
            let mut rhs = UniSeries::zero(lhs.window());
            for i in 0..=m {
                let t = hasse_uni(&f, i).mul(&hasse_uni(&g, m - i)).unwrap();
                rhs = rhs.add(&t).unwrap();
            }
            prop_assert!(lhs.agrees_with(&rhs));
            prop_assert!(rhs.agrees_with(&lhs));
        }

        #[test]
        fn decomposition_roundtrip(gs in proptest::collection::vec(laurent(-3, 4), 1..=6)) {
            let big = Window::new(-24, 24).unwrap();
            let f = build(&gs, big, big);
            let dec = delta_decompose(&f, gs.len() as u64 - 1).unwrap();
            prop_assert!(dec.clean);
            let ctx = NormCtx::PAdic { p: 3 };
            let mut max = Norm::zero();
            for (g, got) in gs.iter().zip(&dec.g) {
                for e in -3..4 {
                    prop_assert_eq!(g.coeff(e).unwrap(), got.coeff(e).unwrap());
                }
                max = max.max(g.norm(ctx).value);
            }
            prop_assert_eq!(f.norm(ctx).value, max);
        }

        #[test]
        fn pole_window_soundness(n in -6i64..4, lo in -8i64..-2, hi in 2i64..8) {
            for side in [Side::Zw, Side::Wz, Side::Delta] {
                let small = expand_pole(n, side, Window::new(lo, hi).unwrap(), Window::new(lo, hi).unwrap());
                let large = expand_pole(n, side, Window::new(lo - 6, hi + 6).unwrap(), Window::new(lo - 6, hi + 6).unwrap());
                for ez in lo..hi {
                    for ew in lo..hi {
                        prop_assert_eq!(small.coeff(ez, ew).unwrap(), large.coeff(ez, ew).unwrap());
                    }
                }
            }
        }

        #[test]
        fn partial_fraction_roundtrip(gs in proptest::collection::vec(laurent(-2, 3), 1..=4)) {
            let win = Window::new(-20, 20).unwrap();
            let d = PoleDecomposition {
                regular: BiSeries::zero(win, win).mark_finite(false),
                poles: gs.iter().cloned().enumerate().map(|(i, g)| (i as u64, g)).collect(),
            };
            let diff = partial_fractions(&d, Side::Zw).unwrap()
                .sub(&partial_fractions(&d, Side::Wz).unwrap()).unwrap();
            let dec = delta_decompose(&diff, gs.len() as u64 - 1).unwrap();
            prop_assert!(dec.clean);
            for (g, got) in gs.iter().zip(&dec.g) {
                for e in -2..3 {
                    prop_assert_eq!(g.coeff(e).unwrap(), got.coeff(e).unwrap());
                }
            }
        }
    }
}
