//! PBW normal ordering for modes of a central extension of a loop-type Lie
//! algebra acting on its vacuum module.
//!
//! A monomial is the word `X_1 X_2 ... X_k |0>` of creation letters in
//! descending `(depth, label)` order. Applying a letter commutes it to the
//! right through the word with the bracket relations until it either finds
//! its place or reaches the vacuum.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::scalars::Scalar;
use crate::states::{Gen, Monomial, SpaceTag, State};

/// A Lie algebra basis element `label ⊗ t^mode`.
pub type Letter = (u16, i64);

pub trait LieRules: Send + Sync {
    fn annihilates_vacuum(&self, x: Letter) -> bool;
    /// `[x, y] = Σ c_z z + central * Z`.
    fn bracket(&self, x: Letter, y: Letter) -> (Vec<(Letter, Scalar)>, Scalar);
}

fn to_gen(x: Letter) -> Gen {
    debug_assert!(x.1 < 0);
    Gen::new(x.0, (-x.1) as u32)
}

fn to_letter(g: Gen) -> Letter {
    (g.label, -(g.depth as i64))
}

fn key(g: Gen) -> (u32, u16) {
    (g.depth, g.label)
}

type CacheKey = (Letter, Vec<Gen>);

pub struct PbwEngine<R> {
    rules: R,
    space: SpaceTag,
    central_value: Option<Scalar>,
    cache: Mutex<(HashMap<CacheKey, State>, usize)>,
}

/// Cached terms kept before the reordering cache is dropped.
const CACHE_TERMS: usize = 1 << 19;

impl<R: LieRules> PbwEngine<R> {
    pub fn new(rules: R, space: SpaceTag, central_value: Option<Scalar>) -> Self {
        PbwEngine {
            rules,
            space,
            central_value,
            cache: Mutex::new((HashMap::new(), 0)),
        }
    }

    pub fn rules(&self) -> &R {
        &self.rules
    }

    pub fn central_value(&self) -> Option<&Scalar> {
        self.central_value.as_ref()
    }

    /// `x . m` in PBW coordinates.
    pub fn apply(&self, x: Letter, m: &Monomial) -> State {
        let core = self.apply_core(x, &m.gens);
        if m.central == 0 {
            return core;
        }
        let mut out = State::zero(self.space);
        for (mm, c) in core.terms() {
            out.add_term(mm.with_central(mm.central + m.central), c);
        }
        out
    }

    pub fn apply_state(&self, x: Letter, v: &State) -> State {
        v.map_monomials(|m| self.apply(x, m))
    }

    fn apply_core(&self, x: Letter, gens: &[Gen]) -> State {
        let ck = (x, gens.to_vec());
        if let Some(s) = self.cache.lock().unwrap().0.get(&ck) {
            return s.clone();
        }
        let out = self.compute(x, gens);
        let mut cache = self.cache.lock().unwrap();
        if cache.1 + out.len() > CACHE_TERMS {
            *cache = (HashMap::new(), 0);
        }
        cache.1 += out.len();
        cache.0.insert(ck, out.clone());
        out
    }

    fn compute(&self, x: Letter, gens: &[Gen]) -> State {
        let kills = self.rules.annihilates_vacuum(x);
        let Some((&first, rest)) = gens.split_first() else {
            if kills {
                return State::zero(self.space);
            }
            return State::monomial(self.space, Monomial::from_gens(vec![to_gen(x)]));
        };
        if !kills && key(to_gen(x)) >= key(first) {
            let mut word = Vec::with_capacity(gens.len() + 1);
            word.push(to_gen(x));
            word.extend_from_slice(gens);
            return State::monomial(self.space, Monomial::from_gens(word));
        }
        // x f rest = f (x rest) + [x, f] rest
        let fl = to_letter(first);
        let inner = self.apply_core(x, rest);
        let mut out = inner.map_monomials(|m| self.apply(fl, m));
        let (lin, central) = self.rules.bracket(x, fl);
        for (y, c) in lin {
            out.add_scaled(&self.apply_core(y, rest), &c);
        }
        if !central.is_zero() {
            let rest_m = Monomial::from_gens(rest.to_vec());
            match &self.central_value {
                None => out.add_term(rest_m.with_central(1), &central),
                Some(v) => out.add_term(rest_m, &(&central * v)),
            }
        }
        out
    }

    /// Applies letters right to left, starting from `v`.
    pub fn apply_word(&self, letters: &[Letter], v: &State) -> State {
        let mut cur = v.clone();
        for &x in letters.iter().rev() {
            cur = self.apply_state(x, &cur);
        }
        cur
    }
}

/// A word in the enveloping algebra together with a power of the central
/// element.
pub type UWord = (u32, Vec<Letter>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// Sort key for enveloping-algebra words: ascending mode, and descending
/// label within a mode, so that sorted words applied to the vacuum are PBW
/// monomials.
fn u_key(x: Letter) -> (i64, i32) {
    (x.1, -(x.0 as i32))
}

/// Rewrites a word of the enveloping algebra into sorted words by repeatedly
/// swapping one out-of-order adjacent pair, chosen by `order`.
pub fn normal_order_word<R: LieRules>(
    rules: &R,
    word: &[Letter],
    order: RewriteOrder,
) -> BTreeMap<UWord, Scalar> {
    let mut done: BTreeMap<UWord, Scalar> = BTreeMap::new();
    let mut todo: Vec<(UWord, Scalar)> = vec![((0, word.to_vec()), Scalar::one())];
    while let Some(((cp, w), c)) = todo.pop() {
        if c.is_zero() {
            continue;
        }
        let bad: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&i| u_key(w[i]) > u_key(w[i + 1]))
            .collect();
        let Some(&i) = (match order {
            RewriteOrder::Leftmost => bad.first(),
            RewriteOrder::Rightmost => bad.last(),
        }) else {
            let slot = done.entry((cp, w)).or_insert_with(Scalar::zero);
            *slot += &c;
            continue;
        };
        let (a, b) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        todo.push(((cp, swapped), c.clone()));
        let (lin, central) = rules.bracket(a, b);
        for (y, k) in lin {
            let mut nw = w[..i].to_vec();
            nw.push(y);
            nw.extend_from_slice(&w[i + 2..]);
            todo.push(((cp, nw), &c * &k));
        }
        if !central.is_zero() {
            let mut nw = w[..i].to_vec();
            nw.extend_from_slice(&w[i + 2..]);
            todo.push(((cp + 1, nw), &c * &central));
        }
    }
    done.retain(|_, c| !c.is_zero());
    done
}

/// Applies a sorted-word expansion to the vacuum: words ending in an
/// annihilator vanish, the rest are PBW monomials.
pub fn sorted_words_on_vacuum<R: LieRules>(
    rules: &R,
    space: SpaceTag,
    words: &BTreeMap<UWord, Scalar>,
) -> State {
    let mut out = State::zero(space);
    for ((cp, w), c) in words {
        if w.iter().any(|&x| rules.annihilates_vacuum(x)) {
            continue;
        }
        let m = Monomial {
            central: *cp,
            gens: w.iter().map(|&x| to_gen(x)).collect(),
        };
        out.add_term(m, c);
    }
    out
}
