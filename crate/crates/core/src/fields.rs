//! Fields presented by their modes, and the product calculus on them.
//!
//! A [`ModeField`] is a lazily evaluated operator family `a_(n)` together with
//! a vanishing bound: `a_(n) v = 0` whenever `n >= bound(v)`. Every product
//! below reduces to finite mode sums through these bounds.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::scalars::{binomial_scalar, Norm, NormCtx, Scalar};
use crate::series::{mul_zw, BiSeries, UniSeries, Window};
use crate::states::{state_norm, Monomial, SpaceTag, State};

/// Bound reported for operands that are identically zero.
pub const NO_MODES: i64 = i64::MIN / 4;

/// Cached mode values per field, counted in terms; the cache is dropped
/// once it grows past this.
const MODE_CACHE_TERMS: usize = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("window {window} is too small for Nmax = {nmax}")]
    WindowTooSmall { window: Window, nmax: u32 },
    #[error("locality order of {0} and {1} is unknown")]
    UnknownLocality(String, String),
    #[error("no probe states given")]
    NoProbes,
}

type ModeFn = dyn Fn(i64, &Monomial) -> State + Send + Sync;
type BoundFn = dyn Fn(&Monomial) -> i64 + Send + Sync;

enum Node {
    Identity,
    Atom { mode: Box<ModeFn>, bound: Box<BoundFn> },
    Scale(Scalar, ModeField),
    Sum(ModeField, ModeField),
    Derivative(ModeField, u64),
    NormalOrdered(ModeField, ModeField),
    Product(ModeField, ModeField, u64),
}

#[derive(Default)]
struct ModeCache {
    map: HashMap<(i64, Monomial), State>,
    terms: usize,
}

struct Inner {
    node: Node,
    odd: bool,
    label: String,
    space: SpaceTag,
    modes: Mutex<ModeCache>,
    bounds: Mutex<HashMap<Monomial, i64>>,
}

/// A field `a(z) = Σ a_(n) z^{-n-1}`.
#[derive(Clone)]
pub struct ModeField(Arc<Inner>);

impl fmt::Debug for ModeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModeField({})", self.0.label)
    }
}

impl ModeField {
    fn make(node: Node, odd: bool, label: String, space: SpaceTag) -> ModeField {
        ModeField(Arc::new(Inner {
            node,
            odd,
            label,
            space,
            modes: Mutex::new(ModeCache::default()),
            bounds: Mutex::new(HashMap::new()),
        }))
    }

    pub fn identity(space: SpaceTag) -> ModeField {
        ModeField::make(Node::Identity, false, "I".into(), space)
    }

    /// A field given directly by its modes on basis monomials.
    pub fn atom(
        label: &str,
        odd: bool,
        space: SpaceTag,
        mode: impl Fn(i64, &Monomial) -> State + Send + Sync + 'static,
        bound: impl Fn(&Monomial) -> i64 + Send + Sync + 'static,
    ) -> ModeField {
        ModeField::make(
            Node::Atom {
                mode: Box::new(mode),
                bound: Box::new(bound),
            },
            odd,
            label.to_string(),
            space,
        )
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn is_odd(&self) -> bool {
        self.0.odd
    }

    pub fn space(&self) -> SpaceTag {
        self.0.space
    }

    pub fn relabel(&self, label: &str) -> ModeField {
        // Cheap wrapper: scaling by one keeps the modes and caches of `self`.
        ModeField::make(
            Node::Scale(Scalar::one(), self.clone()),
            self.0.odd,
            label.to_string(),
            self.0.space,
        )
    }

    pub fn scale(&self, c: &Scalar) -> ModeField {
        let label = if c.is_one() {
            self.0.label.clone()
        } else {
            format!("{c}*{}", self.0.label)
        };
        ModeField::make(Node::Scale(c.clone(), self.clone()), self.0.odd, label, self.0.space)
    }

    pub fn add(&self, other: &ModeField) -> ModeField {
        let label = format!("{} + {}", self.0.label, other.0.label);
        ModeField::make(
            Node::Sum(self.clone(), other.clone()),
            self.0.odd,
            label,
            self.0.space,
        )
    }

    fn zero_state(&self) -> State {
        State::zero(self.0.space)
    }

    /// `a_(n)` applied to a basis monomial.
    pub fn mode_mono(&self, n: i64, m: &Monomial) -> State {
        if n >= self.bound_mono(m) {
            return self.zero_state();
        }
        let key = (n, m.clone());
        if let Some(s) = self.0.modes.lock().unwrap().map.get(&key) {
            return s.clone();
        }
        let out = self.compute_mode(n, m);
        let mut cache = self.0.modes.lock().unwrap();
        if cache.terms + out.len() > MODE_CACHE_TERMS {
            *cache = ModeCache::default();
        }
        cache.terms += out.len();
        cache.map.insert(key, out.clone());
        out
    }

    /// `a_(n) v`.
    pub fn mode(&self, n: i64, v: &State) -> State {
        let mut out = self.zero_state();
        for (m, c) in v.terms() {
            out.add_scaled(&self.mode_mono(n, m), c);
        }
        out
    }

    fn compute_mode(&self, n: i64, m: &Monomial) -> State {
        match &self.0.node {
            Node::Identity => {
                if n == -1 {
                    State::monomial(self.0.space, m.clone())
                } else {
                    self.zero_state()
                }
            }
            Node::Atom { mode, .. } => mode(n, m),
            Node::Scale(c, f) => f.mode_mono(n, m).scaled(c),
            Node::Sum(f, g) => &f.mode_mono(n, m) + &g.mode_mono(n, m),
            Node::Derivative(f, k) => {
                // (∂^{(k)} a)_(n) = (-1)^k C(n, k) a_(n-k)
                let c = Scalar::sign(*k as i64) * binomial_scalar(n, *k);
                if c.is_zero() {
                    return self.zero_state();
                }
                f.mode_mono(n - *k as i64, m).scaled(&c)
            }
            Node::NormalOrdered(a, b) => {
                let v = State::monomial(self.0.space, m.clone());
                let mut out = self.zero_state();
                let ub = b.bound_mono(m);
                for j in (n - ub).max(i64::MIN / 2)..=-1 {
                    let inner = b.mode_mono(n - 1 - j, m);
                    if !inner.is_zero() {
                        out.add_assign(&a.mode(j, &inner));
                    }
                }
                let sign = koszul(a, b);
                let ua = a.bound_mono(m);
                for j in 0..ua.max(0) {
                    let inner = a.mode(j, &v);
                    if !inner.is_zero() {
                        out.add_scaled(&b.mode(n - 1 - j, &inner), &sign);
                    }
                }
                out
            }
            Node::Product(a, b, k) => {
                let k = *k as i64;
                let v = State::monomial(self.0.space, m.clone());
                let sign = koszul(a, b);
                let mut out = self.zero_state();
                for i in 0..=k {
                    let c = Scalar::sign(k - i) * binomial_scalar(k, i as u64);
                    let q = n + k - i;
                    let bv = b.mode_mono(q, m);
                    let mut term = a.mode(i, &bv);
                    let av = a.mode(i, &v);
                    if !av.is_zero() {
                        term.add_scaled(&b.mode(q, &av), &-&sign);
                    }
                    out.add_scaled(&term, &c);
                }
                out
            }
        }
    }

    /// Vanishing bound on a basis monomial.
    pub fn bound_mono(&self, m: &Monomial) -> i64 {
        if let Some(b) = self.0.bounds.lock().unwrap().get(m) {
            return *b;
        }
        let b = self.compute_bound(m);
        self.0.bounds.lock().unwrap().insert(m.clone(), b);
        b
    }

    /// Vanishing bound on a state: `a_(n) v = 0` for `n >= bound(v)`.
    pub fn bound(&self, v: &State) -> i64 {
        v.terms()
            .map(|(m, _)| self.bound_mono(m))
            .max()
            .unwrap_or(NO_MODES)
    }

    fn compute_bound(&self, m: &Monomial) -> i64 {
        match &self.0.node {
            Node::Identity => 0,
            Node::Atom { bound, .. } => bound(m),
            Node::Scale(c, f) => {
                if c.is_zero() {
                    NO_MODES
                } else {
                    f.bound_mono(m)
                }
            }
            Node::Sum(f, g) => f.bound_mono(m).max(g.bound_mono(m)),
            Node::Derivative(f, k) => {
                let u = f.bound_mono(m);
                let k = *k as i64;
                if u <= 0 {
                    (u + k).min(0)
                } else {
                    u + k
                }
            }
            Node::NormalOrdered(a, b) => {
                let v = State::monomial(self.0.space, m.clone());
                let mut u = b.bound_mono(m);
                for j in 0..a.bound_mono(m).max(0) {
                    let av = a.mode(j, &v);
                    u = u.max(b.bound(&av).saturating_add(j + 1));
                }
                u
            }
            Node::Product(a, b, k) => {
                let k = *k as i64;
                let v = State::monomial(self.0.space, m.clone());
                let mut u = b.bound_mono(m);
                let top = a.bound_mono(m).min(k + 1);
                for i in 0..top.max(0) {
                    let av = a.mode(i, &v);
                    u = u.max(b.bound(&av).saturating_add(i - k));
                }
                u
            }
        }
    }
}

fn koszul(a: &ModeField, b: &ModeField) -> Scalar {
    if a.is_odd() && b.is_odd() {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// `Σ_n a_(n) v z^{-n-1}` on the exponent window.
pub fn apply_field(a: &ModeField, v: &State, window: Window) -> UniSeries<State> {
    let bound = a.bound(v);
    UniSeries::truncated(
        window,
        window.iter().filter_map(|e| {
            let n = -e - 1;
            (n < bound).then(|| (e, a.mode(n, v)))
        }),
    )
}

/// `∂_z^{(m)} a(z)`.
pub fn field_derivative(a: &ModeField, m: u64) -> ModeField {
    if m == 0 {
        return a.clone();
    }
    let label = if m == 1 {
        format!("∂{}", paren(a.label()))
    } else {
        format!("∂^({m}){}", paren(a.label()))
    };
    ModeField::make(Node::Derivative(a.clone(), m), a.is_odd(), label, a.space())
}

fn paren(s: &str) -> String {
    if s.chars().all(|c| c.is_alphanumeric() || c == '_') {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// `:a(z) b(z):`.
pub fn normally_ordered(a: &ModeField, b: &ModeField) -> ModeField {
    let label = format!(":{} {}:", a.label(), b.label());
    ModeField::make(
        Node::NormalOrdered(a.clone(), b.clone()),
        a.is_odd() ^ b.is_odd(),
        label,
        a.space(),
    )
}

/// `a(z)_(n) b(z)` for any integer `n`.
pub fn nproduct(a: &ModeField, b: &ModeField, n: i64) -> ModeField {
    if n < 0 {
        let m = (-n - 1) as u64;
        let f = normally_ordered(&field_derivative(a, m), b);
        return f.relabel(&format!("{}_({n}){}", paren(a.label()), paren(b.label())));
    }
    let label = format!("{}_({n}){}", paren(a.label()), paren(b.label()));
    ModeField::make(
        Node::Product(a.clone(), b.clone(), n as u64),
        a.is_odd() ^ b.is_odd(),
        label,
        a.space(),
    )
}

/// `[a_(m), b_(n)] v` with the Koszul sign.
pub fn mode_commutator(a: &ModeField, b: &ModeField, m: i64, n: i64, v: &State) -> State {
    let ab = a.mode(m, &b.mode(n, v));
    let ba = b.mode(n, &a.mode(m, v));
    let mut out = ab;
    out.add_scaled(&ba, &-koszul(a, b));
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityReport {
    /// Smallest `N` with `(z-w)^N [a(z), b(w)] = 0` on every probe, or `None`
    /// when no `N <= nmax` worked.
    pub order: Option<u32>,
    /// Largest coefficient norm of `(z-w)^N [a(z), b(w)] v` over the probes,
    /// for `N = 0, 1, ...` up to the order found.
    pub defects: Vec<Norm>,
    pub nmax: u32,
}

/// Measures the locality order of `a` and `b` on the probe states.
pub fn locality_order(
    a: &ModeField,
    b: &ModeField,
    probes: &[State],
    nmax: u32,
    window: Window,
    ctx: NormCtx,
) -> Result<LocalityReport, FieldError> {
    if probes.is_empty() {
        return Err(FieldError::NoProbes);
    }
    if window.len() <= nmax as usize {
        return Err(FieldError::WindowTooSmall { window, nmax });
    }
    let mut grids: Vec<BiSeries<State>> = probes
        .iter()
        .map(|v| commutator_grid(a, b, v, window))
        .collect();
    let mut defects = Vec::new();
    for n in 0..=nmax {
        if n > 0 {
            grids = grids
                .iter()
                .map(|g| mul_zw(g, 1).expect("window checked above"))
                .collect();
        }
        let d = grids
            .iter()
            .map(|g| g.norm(ctx).value)
            .fold(Norm::zero(), Norm::max);
        let zero = grids.iter().all(|g| g.is_zero());
        defects.push(d);
        if zero {
            return Ok(LocalityReport {
                order: Some(n),
                defects,
                nmax,
            });
        }
    }
    Ok(LocalityReport {
        order: None,
        defects,
        nmax,
    })
}

/// `[a(z), b(w)] v` as a bivariate series on `window × window`.
pub fn commutator_grid(a: &ModeField, b: &ModeField, v: &State, window: Window) -> BiSeries<State> {
    let sign = koszul(a, b);
    let mut b_v: HashMap<i64, State> = HashMap::new();
    let mut a_v: HashMap<i64, State> = HashMap::new();
    for e in window.iter() {
        let n = -e - 1;
        b_v.insert(n, b.mode(n, v));
        a_v.insert(n, a.mode(n, v));
    }
    BiSeries::from_fn(window, window, |ez, ew| {
        let (m, n) = (-ez - 1, -ew - 1);
        let mut out = a.mode(m, &b_v[&n]);
        out.add_scaled(&b.mode(n, &a_v[&m]), &-&sign);
        out
    })
}

/// Largest norm of `([T, a_(n)] + n a_(n-1)) v` over probes and modes
/// `n` in `modes`; zero exactly when `[T, a(z)] = ∂_z a(z)` there.
pub fn translation_defect(
    a: &ModeField,
    t: &dyn Fn(&State) -> State,
    probes: &[State],
    modes: std::ops::RangeInclusive<i64>,
    ctx: NormCtx,
) -> (Norm, bool) {
    let mut worst = Norm::zero();
    let mut exact = true;
    for v in probes {
        let tv = t(v);
        for n in modes.clone() {
            let mut d = t(&a.mode(n, v));
            d.add_scaled(&a.mode(n, &tv), &Scalar::from_int(-1));
            d.add_scaled(&a.mode(n - 1, v), &Scalar::from_int(n));
            if !d.is_zero() {
                exact = false;
                worst = worst.max(state_norm(&d, ctx));
            }
        }
    }
    (worst, exact)
}

/// Largest norm of `[a_(m), b_(n)] v - Σ_i C(m,i) (a_(i) b)_(m+n-i) v` over
/// the probes, with the sum cut at the locality order.
pub fn mode_commutator_check(
    a: &ModeField,
    b: &ModeField,
    m: i64,
    n: i64,
    probes: &[State],
    locality: Option<u32>,
    ctx: NormCtx,
) -> Result<(Norm, bool), FieldError> {
    let order = locality.ok_or_else(|| {
        FieldError::UnknownLocality(a.label().to_string(), b.label().to_string())
    })?;
    let products: Vec<ModeField> = (0..order as i64).map(|i| nproduct(a, b, i)).collect();
    let mut worst = Norm::zero();
    let mut exact = true;
    for v in probes {
        let mut d = mode_commutator(a, b, m, n, v);
        for (i, p) in products.iter().enumerate() {
            let c = binomial_scalar(m, i as u64);
            if !c.is_zero() {
                d.add_scaled(&p.mode(m + n - i as i64, v), &-c);
            }
        }
        if !d.is_zero() {
            exact = false;
            worst = worst.max(state_norm(&d, ctx));
        }
    }
    Ok((worst, exact))
}
