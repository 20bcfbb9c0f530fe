//! Vertex algebras assembled from a [`Model`]: vacuum, translation, the
//! generating fields, the state-field correspondence and the closure of the
//! generators under `n`-th products.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::fields::{
    field_derivative, locality_order, nproduct, translation_defect, FieldError, ModeField,
    NO_MODES,
};
use crate::model::Model;
use crate::scalars::{factorial, norm, Norm, NormCtx, Scalar, ScalarRing};
use crate::series::{SeriesError, UniSeries, Window};
use crate::states::{Monomial, SpaceTag, State};

#[derive(Debug, Error)]
pub enum VertexError {
    #[error("axiom {axiom} fails: {witness}")]
    Axiom { axiom: String, witness: String },
    #[error("state {0} is outside V' (not reachable from the generators over the scalar ring)")]
    OutsideVPrime(String),
    #[error("state {0} mixes even and odd parts")]
    MixedParity(String),
    #[error("monomial {0} has no creation word")]
    Unreachable(String),
    #[error("the quotient by the central element minus {0} is the whole algebra")]
    QuotientIsEverything(String),
    #[error("{0} has no central quotient")]
    NotQuotientable(String),
    #[error("divided power mismatch at n = {n}: n! T^(n) a = {lhs} but T^n a = {rhs}")]
    DividedPower { n: u64, lhs: String, rhs: String },
    #[error("scalar ring {to} does not contain {from}")]
    RingMismatch { from: String, to: String },
    #[error("cannot parse state `{text}` at position {pos}: {msg}")]
    Parse { text: String, pos: usize, msg: String },
    #[error("invalid window: {0}")]
    Window(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// One field of a closure table.
#[derive(Debug, Clone)]
pub struct ClosureEntry {
    pub label: String,
    pub field: ModeField,
    pub fs: State,
}

/// One row of an admissibility probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibilityEntry {
    pub label: String,
    /// Largest `||f_(n) v|| / ||v||` seen; a lower bound for `||f||`.
    pub field_norm: Norm,
    pub fs_norm: Norm,
    /// `field_norm / fs_norm`, absent when `fs` vanishes.
    pub ratio: Option<Norm>,
}

pub struct VertexAlgebra {
    model: Arc<dyn Model>,
    ctx: NormCtx,
    ring: ScalarRing,
    gens: Vec<ModeField>,
    identity: ModeField,
    words: Mutex<HashMap<Vec<(usize, i64)>, ModeField>>,
    locality: BTreeMap<(usize, usize), u32>,
}

impl std::fmt::Debug for VertexAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VertexAlgebra({}, {}, {})", self.model.name(), self.ctx, self.ring)
    }
}

fn generator_fields(model: &Arc<dyn Model>) -> Vec<ModeField> {
    let space = model.space();
    model
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let (m1, m2) = (model.clone(), model.clone());
            ModeField::atom(
                &g.name,
                g.odd,
                space,
                move |n, mono| m1.mode(i, n, mono),
                move |mono| m2.mode_bound(i, mono),
            )
        })
        .collect()
}

const CHECK_WINDOW: (i64, i64) = (-10, 10);
const CHECK_NMAX: u32 = 8;

impl VertexAlgebra {
    /// Builds the algebra and checks the vacuum, translation and locality
    /// axioms for the generators on low-grade probes.
    pub fn new(
        model: Arc<dyn Model>,
        ctx: NormCtx,
        ring: ScalarRing,
    ) -> Result<VertexAlgebra, VertexError> {
        let gens = generator_fields(&model);
        let identity = ModeField::identity(model.space());
        let mut v = VertexAlgebra {
            model,
            ctx,
            ring,
            gens,
            identity,
            words: Mutex::new(HashMap::new()),
            locality: BTreeMap::new(),
        };
        v.check_generators()?;
        Ok(v)
    }

    fn check_generators(&mut self) -> Result<(), VertexError> {
        let vac = self.vacuum();
        let tv = self.translate(&vac);
        if !tv.is_zero() {
            return Err(VertexError::Axiom {
                axiom: "T|0> = 0".into(),
                witness: format!("T|0> = {}", self.render(&tv)),
            });
        }
        let probes = self.probes(3);
        for g in &self.gens {
            self.check_vacuum_axiom(g)?;
            self.check_translation(g, &probes, -6..=6)?;
        }
        let small = self.probes(2);
        let window = Window::new(CHECK_WINDOW.0, CHECK_WINDOW.1)?;
        for i in 0..self.gens.len() {
            for j in i..self.gens.len() {
                let (a, b) = (&self.gens[i], &self.gens[j]);
                let rep = locality_order(a, b, &small, CHECK_NMAX, window, self.ctx)?;
                let order = rep.order.ok_or_else(|| VertexError::Axiom {
                    axiom: "V.3 locality".into(),
                    witness: format!(
                        "(z-w)^N [{}(z), {}(w)] != 0 for N <= {CHECK_NMAX}",
                        a.label(),
                        b.label()
                    ),
                })?;
                self.locality.insert((i, j), order);
                self.locality.insert((j, i), order);
            }
        }
        Ok(())
    }

    fn check_vacuum_axiom(&self, f: &ModeField) -> Result<(), VertexError> {
        let vac = self.vacuum();
        for n in 0..=6 {
            let out = f.mode(n, &vac);
            if !out.is_zero() {
                return Err(VertexError::Axiom {
                    axiom: "V.1 vacuum".into(),
                    witness: format!("{}_({n})|0> = {}", f.label(), self.render(&out)),
                });
            }
        }
        Ok(())
    }

    fn check_translation(
        &self,
        f: &ModeField,
        probes: &[State],
        modes: RangeInclusive<i64>,
    ) -> Result<(), VertexError> {
        let t = |s: &State| self.translate(s);
        let (d, exact) = translation_defect(f, &t, probes, modes, self.ctx);
        if !exact {
            return Err(VertexError::Axiom {
                axiom: "V.2 translation covariance".into(),
                witness: format!("[T, {}(z)] - ∂{}(z) has norm {d} on probes", f.label(), f.label()),
            });
        }
        Ok(())
    }

    pub fn model(&self) -> &dyn Model {
        self.model.as_ref()
    }

    pub fn name(&self) -> String {
        self.model.name()
    }

    pub fn ctx(&self) -> NormCtx {
        self.ctx
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn space(&self) -> SpaceTag {
        self.model.space()
    }

    pub fn vacuum(&self) -> State {
        self.model.vacuum()
    }

    pub fn translate(&self, v: &State) -> State {
        v.map_monomials(|m| self.model.translate(m))
    }

    pub fn generators(&self) -> &[ModeField] {
        &self.gens
    }

    pub fn generator(&self, name: &str) -> Option<&ModeField> {
        self.gens.iter().find(|g| g.label() == name)
    }

    pub fn identity(&self) -> &ModeField {
        &self.identity
    }

    /// Locality order of generators `i` and `j` measured at construction.
    pub fn generator_locality(&self, i: usize, j: usize) -> Option<u32> {
        self.locality.get(&(i, j)).copied()
    }

    /// `max_m |λ_m| weight(m)`.
    pub fn norm(&self, v: &State) -> Norm {
        v.terms()
            .map(|(m, c)| &norm(c, self.ctx) * &self.model.weight(m))
            .fold(Norm::zero(), Norm::max)
    }

    pub fn render(&self, v: &State) -> String {
        v.render_with(|m| self.model.render_monomial(m))
    }

    /// Basis monomials of grade at most `grade_cap`, plus the vacuum.
    pub fn probes(&self, grade_cap: u32) -> Vec<State> {
        let mut out = vec![self.vacuum()];
        let mut seen: HashSet<State> = out.iter().cloned().collect();
        for g in 0..=grade_cap {
            for m in self.model.basis(g) {
                let s = State::monomial(self.space(), m);
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// Parses `-x1 + 3 * x2`, `1/2 * C`, `|0>` and the like.
    pub fn parse_state(&self, text: &str) -> Result<State, VertexError> {
        let err = |pos: usize, msg: &str| VertexError::Parse {
            text: text.to_string(),
            pos,
            msg: msg.to_string(),
        };
        let mut out = State::zero(self.space());
        let bytes = text.as_bytes();
        let mut depth = 0i32;
        let mut start = 0usize;
        let mut sign = Scalar::one();
        let mut pieces: Vec<(usize, &str, Scalar)> = Vec::new();
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'[' | b'(' => depth += 1,
                b']' | b')' => depth -= 1,
                b'+' | b'-' if depth == 0 => {
                    let prev = text[start..i].trim();
                    if prev.ends_with('*') || prev.ends_with('^') {
                        continue;
                    }
                    if !prev.is_empty() {
                        pieces.push((start, prev, sign));
                        sign = Scalar::one();
                    }
                    if ch == b'-' {
                        sign = -sign;
                    }
                    start = i + 1;
                }
                _ => {}
            }
        }
        let last = text[start..].trim();
        if last.is_empty() {
            return Err(err(text.len(), "expected a term"));
        }
        pieces.push((start, last, sign));
        for (pos, piece, sign) in pieces {
            let (coef, mono) = match piece.split_once('*') {
                Some((c, rest)) if c.trim().parse::<Scalar>().is_ok() => {
                    (c.trim().parse::<Scalar>().expect("checked"), rest.trim())
                }
                _ => match piece.parse::<Scalar>() {
                    Ok(c) => (c, "|0>"),
                    Err(_) => (Scalar::one(), piece),
                },
            };
            let c = &coef * &sign;
            if mono == "|0>" || mono == "vac" {
                out.add_scaled(&self.vacuum(), &c);
                continue;
            }
            let m = self
                .model
                .parse_monomial(mono)
                .ok_or_else(|| err(pos, &format!("`{mono}` is not a basis monomial")))?;
            out.add_term(m, &c);
        }
        Ok(out)
    }

    fn word_field(&self, letters: &[(usize, i64)]) -> ModeField {
        if letters.is_empty() {
            return self.identity.clone();
        }
        if let Some(f) = self.words.lock().unwrap().get(letters) {
            return f.clone();
        }
        let rest = self.word_field(&letters[1..]);
        let (g, n) = letters[0];
        let f = if letters.len() == 1 && n == -1 {
            self.gens[g].clone()
        } else if letters.len() == 1 && n < -1 {
            field_derivative(&self.gens[g], (-n - 1) as u64)
        } else {
            nproduct(&self.gens[g], &rest, n)
        };
        self.words.lock().unwrap().insert(letters.to_vec(), f.clone());
        f
    }

    /// `(c, f)` with `Y(m, z) = c f`.
    pub fn monomial_field(&self, m: &Monomial) -> Result<(Scalar, ModeField), VertexError> {
        let w = self
            .model
            .creation_word(m)
            .ok_or_else(|| VertexError::Unreachable(self.model.render_monomial(m)))?;
        Ok((w.coef, self.word_field(&w.letters)))
    }

    /// `v` lies in the `ring`-span of the states `g1_(n1) ... gk_(nk) |0>`.
    pub fn in_v_prime(&self, v: &State) -> bool {
        v.terms().all(|(m, c)| match self.model.creation_word(m) {
            Some(w) => self.ring.contains(&(&w.coef * c)),
            None => false,
        })
    }

    pub fn parity(&self, v: &State) -> Result<bool, VertexError> {
        v.homogeneous_parity()
            .ok_or_else(|| VertexError::MixedParity(self.render(v)))
    }

    /// `Y(v, z)` without the `V'` membership test.
    pub fn field_unchecked(&self, v: &State) -> Result<ModeField, VertexError> {
        let odd = self.parity(v)?;
        let mut acc: Option<ModeField> = None;
        for (m, c) in v.terms() {
            let (k, f) = self.monomial_field(m)?;
            let term = f.scale(&(&k * c));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(match acc {
            Some(f) => f.relabel(&format!("Y({})", self.render(v))),
            None => ModeField::atom(
                "0",
                odd,
                self.space(),
                {
                    let space = self.space();
                    move |_, _| State::zero(space)
                },
                |_| NO_MODES,
            ),
        })
    }

    /// The field `Y(v, z)` with `fs(Y(v, z)) = v`.
    pub fn state_field(&self, v: &State) -> Result<ModeField, VertexError> {
        if v == &self.vacuum() {
            return Ok(self.identity.clone());
        }
        if !self.in_v_prime(v) {
            return Err(VertexError::OutsideVPrime(self.render(v)));
        }
        self.field_unchecked(v)
    }

    /// `φ_(-1)|0>`.
    pub fn fs(&self, f: &ModeField) -> State {
        f.mode(-1, &self.vacuum())
    }

    /// `a_(n) v`.
    pub fn apply_mode(&self, a: &State, n: i64, v: &State) -> Result<State, VertexError> {
        let mut out = State::zero(self.space());
        if v.is_zero() {
            return Ok(out);
        }
        for (m, c) in a.terms() {
            let (k, f) = self.monomial_field(m)?;
            let r = f.mode(n, v);
            if !r.is_zero() {
                out.add_scaled(&r, &(&k * c));
            }
        }
        Ok(out)
    }

    /// `a_(n) v = 0` for `n >= bound(a, v)`.
    pub fn bound(&self, a: &State, v: &State) -> Result<i64, VertexError> {
        let mut u = NO_MODES;
        for (m, _) in a.terms() {
            let (_, f) = self.monomial_field(m)?;
            u = u.max(f.bound(v));
        }
        Ok(u)
    }

    /// `T^(n) a = a_(-n-1)|0>`.
    pub fn divided_power(&self, a: &State, n: u64) -> Result<State, VertexError> {
        self.apply_mode(a, -(n as i64) - 1, &self.vacuum())
    }

    /// `e^{zT} a = Σ T^(n) a z^n` on a window of nonnegative exponents,
    /// checking `n! T^(n) a = T^n a` on the way.
    pub fn exp_zt(&self, a: &State, window: Window) -> Result<UniSeries<State>, VertexError> {
        if window.lo < 0 {
            return Err(VertexError::Window(format!("{window} has negative exponents")));
        }
        let mut tn = a.clone();
        let mut terms = Vec::new();
        for n in 0..window.hi {
            if n > 0 {
                tn = self.translate(&tn);
            }
            if n < window.lo {
                continue;
            }
            let d = self.divided_power(a, n as u64)?;
            let lhs = d.scaled(&Scalar::from_bigint(factorial(n as u64)));
            if lhs != tn {
                return Err(VertexError::DividedPower {
                    n: n as u64,
                    lhs: self.render(&lhs),
                    rhs: self.render(&tn),
                });
            }
            terms.push((n, d));
        }
        Ok(UniSeries::truncated(window, terms))
    }

    /// Iterated `n`-th products of the generators, deduplicated by their
    /// `fs` image; every new field is checked against the vacuum,
    /// translation and locality axioms on small probes.
    pub fn closure_generate(
        &self,
        depth: u32,
        n_range: RangeInclusive<i64>,
    ) -> Result<Vec<ClosureEntry>, VertexError> {
        let mut entries = vec![ClosureEntry {
            label: "I".into(),
            field: self.identity.clone(),
            fs: self.vacuum(),
        }];
        let mut seen: HashSet<State> = HashSet::new();
        seen.insert(self.vacuum());
        for g in &self.gens {
            let fs = self.fs(g);
            if fs.is_zero() || !seen.insert(fs.clone()) {
                continue;
            }
            entries.push(ClosureEntry {
                label: g.label().to_string(),
                field: g.clone(),
                fs,
            });
        }
        let probes = self.probes(2);
        let tiny = self.probes(1);
        let window = Window::new(-8, 8)?;
        for _ in 0..depth {
            let current = entries.clone();
            for a in &current {
                for b in &current {
                    for n in n_range.clone() {
                        let h = nproduct(&a.field, &b.field, n);
                        let fs = self.fs(&h);
                        if fs.is_zero() || seen.contains(&fs) {
                            continue;
                        }
                        self.check_vacuum_axiom(&h)?;
                        self.check_translation(&h, &probes, -3..=3)?;
                        for g in &self.gens {
                            let rep = locality_order(&h, g, &tiny, 12, window, self.ctx)?;
                            if rep.order.is_none() {
                                return Err(VertexError::Axiom {
                                    axiom: "V.3 locality".into(),
                                    witness: format!(
                                        "{} and {} are not local to order 12",
                                        h.label(),
                                        g.label()
                                    ),
                                });
                            }
                        }
                        seen.insert(fs.clone());
                        entries.push(ClosureEntry {
                            label: h.label().to_string(),
                            field: h,
                            fs,
                        });
                    }
                }
            }
        }
        Ok(entries)
    }

    /// The quotient by `central - value`.
    pub fn central_quotient(&self, value: &Scalar) -> Result<VertexAlgebra, VertexError> {
        let Some(model) = self.model.with_central_value(value) else {
            return Err(VertexError::NotQuotientable(self.name()));
        };
        if !self.ring.contains(value) {
            return Err(VertexError::RingMismatch {
                from: value.to_string(),
                to: self.ring.to_string(),
            });
        }
        if norm(value, self.ctx) > Norm::one() {
            return Err(VertexError::QuotientIsEverything(value.to_string()));
        }
        VertexAlgebra::new(Arc::from(model), self.ctx, self.ring.clone())
    }

    /// The same algebra with scalars extended to `ring`.
    pub fn base_change(&self, ring: ScalarRing) -> Result<VertexAlgebra, VertexError> {
        let widens = match (&self.ring, &ring) {
            (_, ScalarRing::Rationals) => true,
            (ScalarRing::Integers { inverted: a }, ScalarRing::Integers { inverted: b }) => {
                a.iter().all(|p| b.contains(p))
            }
            _ => false,
        };
        if !widens {
            return Err(VertexError::RingMismatch {
                from: self.ring.to_string(),
                to: ring.to_string(),
            });
        }
        VertexAlgebra::new(self.model.clone(), self.ctx, ring)
    }

    /// Known obstruction to admissibility, if any.
    pub fn admissibility_caveat(&self) -> Option<String> {
        let padic = self.ctx.prime().is_some();
        match self.space() {
            SpaceTag::BosonT if padic => Some(format!(
                "{} over the {} norm is not admissible",
                self.name(),
                self.ctx
            )),
            SpaceTag::Diagonal => Some(format!("{} is not admissible", self.name())),
            _ => None,
        }
    }

    /// For each field, the largest `||f_(n) v|| / ||v||` over the probes and
    /// modes, against `||fs(f)||`. Diverging ratios refute admissibility;
    /// bounded ratios certify nothing.
    pub fn admissibility_probe(
        &self,
        fields: &[(String, ModeField)],
        probes: &[State],
        modes: RangeInclusive<i64>,
    ) -> Vec<AdmissibilityEntry> {
        fields
            .iter()
            .map(|(label, f)| {
                let mut best = Norm::zero();
                for v in probes {
                    let nv = self.norm(v);
                    if nv.is_zero() {
                        continue;
                    }
                    for n in modes.clone() {
                        let out = f.mode(n, v);
                        if let Some(r) = self.norm(&out).ratio(&nv) {
                            best = best.max(r);
                        }
                    }
                }
                let fs_norm = self.norm(&self.fs(f));
                AdmissibilityEntry {
                    label: label.clone(),
                    ratio: best.ratio(&fs_norm),
                    field_norm: best,
                    fs_norm,
                }
            })
            .collect()
    }

    /// Probe states and mode range under which the witnesses of
    /// [`Self::admissibility_witnesses`] reach their field norm. For the
    /// transposed boson `∂^(m) b` with `m = p^k - 1` acts with a unit
    /// coefficient `C(2p^k - 1, p^k)` through `b_(p^k)`, so the single
    /// variables `y_j`, `j <= p^k`, and modes up to `2p^k` suffice.
    pub fn admissibility_probes(
        &self,
        k_max: u32,
        grade_cap: u32,
    ) -> (Vec<State>, RangeInclusive<i64>) {
        match (self.space(), self.ctx.prime()) {
            (SpaceTag::BosonT, Some(p)) => {
                let top = p.pow(k_max) as u32;
                let mut probes = vec![self.vacuum()];
                probes.extend((1..=top).map(|j| State::monomial(self.space(), Monomial::vars(&[j]))));
                (probes, -2 * top as i64..=2 * top as i64)
            }
            _ => {
                let reach = grade_cap as i64 + 2;
                (self.probes(grade_cap), -reach..=reach)
            }
        }
    }

    /// Fields whose probe ratios exhibit non-admissibility: `∂^(p^k - 1) b`
    /// for the transposed boson, the projections `φ_n` for the diagonal
    /// algebra, and otherwise the generators.
    pub fn admissibility_witnesses(&self, k_max: u32) -> Vec<(String, ModeField)> {
        match (self.space(), self.ctx.prime()) {
            (SpaceTag::BosonT, Some(p)) => (0..=k_max)
                .map(|k| {
                    let m = p.pow(k) - 1;
                    let f = field_derivative(&self.gens[0], m);
                    (format!("∂^({m})b"), f)
                })
                .collect(),
            _ => self
                .gens
                .iter()
                .map(|g| (g.label().to_string(), g.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{free_boson, free_fermion, virasoro};

    fn boson() -> VertexAlgebra {
        free_boson(NormCtx::Trivial).unwrap()
    }

    fn x(v: &VertexAlgebra, s: &str) -> State {
        v.parse_state(s).unwrap()
    }

    #[test]
    fn fs_of_generators() {
        let b = boson();
        assert_eq!(b.fs(&b.gens[0]), x(&b, "x1"));
        assert_eq!(b.fs(b.identity()), b.vacuum());
        let vir = virasoro(NormCtx::Trivial, ScalarRing::Rationals).unwrap();
        assert_eq!(vir.fs(&vir.gens[0]), x(&vir, "L[-2]"));
    }

    #[test]
    fn state_field_examples() {
        let b = boson();
        let f = b.state_field(&x(&b, "x2")).unwrap();
        let d = field_derivative(&b.gens[0], 1);
        for v in b.probes(3) {
            for n in -4..4 {
                assert_eq!(f.mode(n, &v), d.mode(n, &v));
            }
        }
        let sq = b.state_field(&x(&b, "x1^2")).unwrap();
        let no = nproduct(&b.gens[0], &b.gens[0], -1);
        for v in b.probes(3) {
            for n in -4..4 {
                assert_eq!(sq.mode(n, &v), no.mode(n, &v));
            }
        }
    }

    #[test]
    fn fs_inverts_state_field() {
        let b = boson();
        for v in b.probes(5) {
            let f = b.state_field(&v).unwrap();
            assert_eq!(b.fs(&f), v);
        }
        let f = free_fermion(NormCtx::Trivial).unwrap();
        for v in f.probes(6) {
            assert_eq!(f.fs(&f.state_field(&v).unwrap()), v);
        }
    }

    #[test]
    fn parse_and_render() {
        let b = boson();
        let s = x(&b, "-x1 - 3 * x2");
        assert_eq!(b.render(&s), "-x1 - 3 * x2");
        let vir = virasoro(NormCtx::Trivial, ScalarRing::Rationals).unwrap();
        let c = x(&vir, "1/2 * C");
        assert_eq!(vir.render(&c), "1/2 * C");
        assert_eq!(x(&vir, "L[-3] + 2 * L[-2]").len(), 2);
        assert!(matches!(b.parse_state("x1 + q2"), Err(VertexError::Parse { .. })));
    }

    #[test]
    fn exp_zt_of_x1() {
        let b = boson();
        let s = b.exp_zt(&x(&b, "x1"), Window::new(0, 5).unwrap()).unwrap();
        for n in 0..5 {
            assert_eq!(
                s.coeff(n).unwrap(),
                State::monomial(SpaceTag::Boson, Monomial::vars(&[n as u32 + 1]))
            );
        }
        let vac = b.exp_zt(&b.vacuum(), Window::new(0, 4).unwrap()).unwrap();
        assert_eq!(vac.coeff(0).unwrap(), b.vacuum());
        assert!(vac.coeff(2).unwrap().is_zero());
        assert!(b.exp_zt(&b.vacuum(), Window::new(-1, 2).unwrap()).is_err());
    }

    #[test]
    fn boson_closure_depth_one() {
        let b = boson();
        let c = b.closure_generate(1, -2..=1).unwrap();
        let fs: Vec<State> = c.iter().map(|e| e.fs.clone()).collect();
        let want = ["|0>", "x1", "x2", "x1^2", "x1*x2"];
        assert_eq!(fs.len(), want.len());
        for w in want {
            assert!(fs.contains(&x(&b, w)), "{w}");
        }
        assert_eq!(b.closure_generate(0, -2..=1).unwrap().len(), 2);
    }

    #[test]
    fn transposed_boson_v_prime() {
        let bt = crate::algebras::free_boson_t(NormCtx::Trivial).unwrap();
        let y2 = x(&bt, "y2");
        assert!(matches!(bt.state_field(&y2), Err(VertexError::OutsideVPrime(_))));
        assert!(bt.state_field(&y2.scaled(&Scalar::from_int(2))).is_ok());
    }

    #[test]
    fn quotients() {
        let vir = virasoro(NormCtx::Trivial, ScalarRing::Rationals).unwrap();
        let q = vir.central_quotient(&Scalar::zero()).unwrap();
        let l2 = x(&q, "L[-2]");
        assert!(q.apply_mode(&l2, 3, &l2).unwrap().is_zero());
        let p3 = virasoro(NormCtx::padic(3).unwrap(), ScalarRing::Rationals).unwrap();
        assert!(matches!(
            p3.central_quotient(&Scalar::ratio(1, 3)),
            Err(VertexError::QuotientIsEverything(_))
        ));
        assert!(matches!(
            boson().central_quotient(&Scalar::one()),
            Err(VertexError::NotQuotientable(_))
        ));
    }
}
