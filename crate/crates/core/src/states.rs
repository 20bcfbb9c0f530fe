//! Graded state spaces over distinguished monomial bases.
//!
//! One [`Monomial`] type covers every shipped basis. Its generator list is
//! kept in the canonical word order of its space:
//!
//! * boson / transposed boson: variables `x_d` (`y_d`) ascending, repeated by
//!   multiplicity;
//! * fermion: indices strictly ascending;
//! * Virasoro / affine: creation letters in descending `(depth, label)` order,
//!   so the monomial is the PBW word applied to the vacuum;
//! * power series / diagonal: `t^k` (`x^k`) as `k` copies of one letter.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalars::{norm, Norm, NormCtx, Scalar};
use crate::series::Coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceTag {
    /// Placeholder carried by zero states that never met a basis element.
    Any,
    Boson,
    BosonT,
    Fermion,
    Virasoro,
    Affine,
    PowerSeries,
    Diagonal,
}

/// One letter of a monomial: generator `label` at mode depth `depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub label: u16,
    pub depth: u32,
}

impl Gen {
    pub fn new(label: u16, depth: u32) -> Gen {
        Gen { label, depth }
    }

    pub fn var(depth: u32) -> Gen {
        Gen { label: 0, depth }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub central: u32,
    pub gens: Vec<Gen>,
}

impl Monomial {
    pub fn vacuum() -> Monomial {
        Monomial::default()
    }

    pub fn from_gens(gens: Vec<Gen>) -> Monomial {
        Monomial { central: 0, gens }
    }

    /// Boson-style monomial from variable depths; sorts them.
    pub fn vars(depths: &[u32]) -> Monomial {
        let mut gens: Vec<Gen> = depths.iter().map(|&d| Gen::var(d)).collect();
        gens.sort();
        Monomial::from_gens(gens)
    }

    /// Fermion monomial; `None` if an index repeats.
    pub fn wedge(indices: &[u32]) -> Option<Monomial> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Monomial::vars(&v))
    }

    pub fn power(k: u32) -> Monomial {
        Monomial::from_gens(vec![Gen::var(1); k as usize])
    }

    pub fn is_vacuum(&self) -> bool {
        self.central == 0 && self.gens.is_empty()
    }

    pub fn grade(&self) -> u32 {
        self.gens.iter().map(|g| g.depth).sum()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_depth(&self) -> u32 {
        self.gens.iter().map(|g| g.depth).max().unwrap_or(0)
    }

    pub fn multiplicity(&self, g: Gen) -> usize {
        self.gens.iter().filter(|x| **x == g).count()
    }

    pub fn with_central(&self, central: u32) -> Monomial {
        Monomial {
            central,
            gens: self.gens.clone(),
        }
    }

    /// Inserts `g` keeping ascending order (commutative bases).
    pub fn insert_sorted(&self, g: Gen) -> Monomial {
        let mut gens = self.gens.clone();
        let pos = gens.partition_point(|x| *x <= g);
        gens.insert(pos, g);
        Monomial {
            central: self.central,
            gens,
        }
    }

    /// Removes one copy of `g`, if present.
    pub fn remove_one(&self, g: Gen) -> Option<Monomial> {
        let pos = self.gens.iter().position(|x| *x == g)?;
        let mut gens = self.gens.clone();
        gens.remove(pos);
        Some(Monomial {
            central: self.central,
            gens,
        })
    }
}

/// Koszul sign of `ξ_i` inside a fermion monomial: `(-1)^k` where `k` is the
/// number of indices preceding `i`; `None` if `i` does not occur.
pub fn super_sign(m: &Monomial, i: u32) -> Option<i64> {
    let pos = m.gens.iter().position(|g| g.depth == i)?;
    Some(if pos % 2 == 0 { 1 } else { -1 })
}

/// `ξ_i ∧ m` as `(sign, monomial)`; `None` when `ξ_i` already occurs.
pub fn wedge_left(m: &Monomial, i: u32) -> Option<(i64, Monomial)> {
    if m.gens.iter().any(|g| g.depth == i) {
        return None;
    }
    let before = m.gens.iter().filter(|g| g.depth < i).count();
    let sign = if before % 2 == 0 { 1 } else { -1 };
    Some((sign, m.insert_sorted(Gen::var(i))))
}

/// The odd derivation `∂/∂ξ_i` on a fermion monomial.
pub fn wedge_derivative(m: &Monomial, i: u32) -> Option<(i64, Monomial)> {
    let sign = super_sign(m, i)?;
    Some((sign, m.remove_one(Gen::var(i))?))
}

/// Sorts a word of fermion indices into canonical order, returning the sign
/// of the permutation, or `None` if an index repeats.
pub fn canonical_wedge(indices: &[u32]) -> Option<(i64, Monomial)> {
    let mut v = indices.to_vec();
    let mut sign = 1i64;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, Monomial::vars(&v)))
}

/// Finitely supported vector over a monomial basis.
#[derive(Clone, Eq)]
pub struct State {
    space: SpaceTag,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for State {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl std::hash::Hash for State {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h);
    }
}

impl State {
    pub fn zero(space: SpaceTag) -> State {
        State {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(space: SpaceTag, m: Monomial) -> State {
        State::term(space, m, Scalar::one())
    }

    pub fn term(space: SpaceTag, m: Monomial, c: Scalar) -> State {
        let mut s = State::zero(space);
        s.add_term(m, &c);
        s
    }

    pub fn from_terms(space: SpaceTag, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> State {
        let mut s = State::zero(space);
        for (m, c) in terms {
            s.add_term(m, &c);
        }
        s
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn adopt(&mut self, other: SpaceTag) {
        if self.space == SpaceTag::Any {
            self.space = other;
        }
    }

    pub fn add_assign(&mut self, other: &State) {
        self.adopt(other.space);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &State, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        self.adopt(other.space);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn scaled(&self, s: &Scalar) -> State {
        if s.is_zero() {
            return State::zero(self.space);
        }
        State {
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn map_monomials(&self, mut f: impl FnMut(&Monomial) -> State) -> State {
        let mut out = State::zero(self.space);
        for (m, c) in &self.terms {
            out.add_scaled(&f(m), c);
        }
        out
    }

    /// Largest monomial grade; `None` for the zero state.
    pub fn grade(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::grade).max()
    }

    pub fn parity_of(&self, m: &Monomial) -> bool {
        self.space == SpaceTag::Fermion && m.gens.len() % 2 == 1
    }

    /// `(even part, odd part)`.
    pub fn parity_split(&self) -> (State, State) {
        let mut even = State::zero(self.space);
        let mut odd = State::zero(self.space);
        for (m, c) in &self.terms {
            if self.parity_of(m) {
                odd.add_term(m.clone(), c);
            } else {
                even.add_term(m.clone(), c);
            }
        }
        (even, odd)
    }

    /// `Some(parity)` when every term has the same parity.
    pub fn homogeneous_parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| self.parity_of(m));
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn render_with(&self, render: impl Fn(&Monomial) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            if mag.is_one() {
                s.push_str(&render(m));
            } else {
                let _ = write!(s, "{} * {}", mag, render(m));
            }
        }
        s
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let space = self.space;
        f.write_str(&self.render_with(|m| render_monomial(space, m, &[])))
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scaled(&Scalar::from_int(-1))
    }
}

impl Coeff for State {
    fn zero() -> Self {
        State::zero(SpaceTag::Any)
    }

    fn is_zero(&self) -> bool {
        State::is_zero(self)
    }

    fn add_to(&mut self, other: &Self) {
        self.add_assign(other);
    }

    fn scaled(&self, s: &Scalar) -> Self {
        State::scaled(self, s)
    }

    fn coeff_norm(&self, ctx: NormCtx) -> Norm {
        state_norm(self, ctx)
    }
}

/// `max_i |λ_i|` over the coefficients of `v`.
pub fn state_norm(v: &State, ctx: NormCtx) -> Norm {
    v.terms
        .values()
        .map(|c| norm(c, ctx))
        .fold(Norm::zero(), Norm::max)
}

/// Grade of a nonzero state (maximum over its terms).
pub fn state_grade(v: &State) -> Option<u32> {
    v.grade()
}

fn push_power(s: &mut String, base: &str, k: usize) {
    if !s.is_empty() {
        s.push('*');
    }
    s.push_str(base);
    if k > 1 {
        let _ = write!(s, "^{k}");
    }
}

/// Canonical text of a basis monomial. `names` overrides the default
/// generator names of affine monomials (`e1`, `e2`, ...).
pub fn render_monomial(space: SpaceTag, m: &Monomial, names: &[String]) -> String {
    let mut s = String::new();
    let central = match space {
        SpaceTag::Virasoro => "C",
        _ => "K",
    };
    if m.central > 0 {
        push_power(&mut s, central, m.central as usize);
    }
    match space {
        SpaceTag::Fermion => {
            if !m.gens.is_empty() {
                let idx: Vec<String> = m.gens.iter().map(|g| g.depth.to_string()).collect();
                let _ = write!(s, "xi[{}]", idx.join(","));
            }
        }
        SpaceTag::PowerSeries | SpaceTag::Diagonal => {
            let var = if space == SpaceTag::PowerSeries { "t" } else { "x" };
            if !m.gens.is_empty() {
                push_power(&mut s, var, m.gens.len());
            } else if s.is_empty() {
                s.push('1');
            }
            return s;
        }
        _ => {
            let mut i = 0;
            while i < m.gens.len() {
                let g = m.gens[i];
                let mut j = i;
                while j < m.gens.len() && m.gens[j] == g {
                    j += 1;
                }
                let base = match space {
                    SpaceTag::BosonT => format!("y{}", g.depth),
                    SpaceTag::Virasoro => format!("L[-{}]", g.depth),
                    SpaceTag::Affine => {
                        let name = names
                            .get(g.label as usize)
                            .cloned()
                            .unwrap_or_else(|| format!("e{}", g.label + 1));
                        format!("{name}[-{}]", g.depth)
                    }
                    _ => format!("x{}", g.depth),
                };
                push_power(&mut s, &base, j - i);
                i = j;
            }
        }
    }
    if s.is_empty() {
        s.push_str("|0>");
    }
    s
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn state() -> impl Strategy<Value = State> {
        proptest::collection::vec((proptest::collection::vec(1u32..5, 0..4), -20i64..20, 1i64..9), 0..5)
            .prop_map(|terms| {
                State::from_terms(
                    SpaceTag::Boson,
                    terms
                        .into_iter()
                        .map(|(d, n, den)| (Monomial::vars(&d), Scalar::ratio(n, den))),
                )
            })
    }

    proptest! {
        #[test]
        fn ultrametric(u in state(), v in state()) {
            for ctx in [NormCtx::Trivial, NormCtx::PAdic { p: 2 }, NormCtx::PAdic { p: 3 }] {
                let s = state_norm(&(&u + &v), ctx);
                prop_assert!(s <= state_norm(&u, ctx).max(state_norm(&v, ctx)));
            }
        }

        #[test]
        fn wedge_canonicalization_idempotent(idx in proptest::collection::vec(1u32..8, 0..6)) {
            match canonical_wedge(&idx) {
                None => {
                    let mut v = idx.clone();
                    v.sort_unstable();
                    prop_assert!(v.windows(2).any(|w| w[0] == w[1]));
                }
                Some((_, m)) => {
                    let again: Vec<u32> = m.gens.iter().map(|g| g.depth).collect();
                    prop_assert_eq!(canonical_wedge(&again), Some((1, m.clone())));
                }
            }
        }

        #[test]
        fn linear_scaling(u in state(), k in -5i64..5) {
            let s = Scalar::from_int(k);
            let lhs = u.scaled(&s);
            let mut rhs = State::zero(SpaceTag::Boson);
            rhs.add_scaled(&u, &s);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
