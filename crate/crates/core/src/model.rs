//! The interface every concrete algebra implements: exact generator modes on
//! basis monomials, translation, and the creation word of each monomial.

use crate::scalars::{Norm, Scalar};
use crate::states::{Monomial, SpaceTag, State};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub name: String,
    pub odd: bool,
    /// Central generators act by multiplication and only have mode `-1`.
    pub central: bool,
}

impl GeneratorInfo {
    pub fn even(name: &str) -> Self {
        GeneratorInfo {
            name: name.to_string(),
            odd: false,
            central: false,
        }
    }

    pub fn central(name: &str) -> Self {
        GeneratorInfo {
            name: name.to_string(),
            odd: false,
            central: true,
        }
    }
}

/// A monomial `m` equals `coef * g1_(n1) g2_(n2) ... gk_(nk) |0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CreationWord {
    pub coef: Scalar,
    pub letters: Vec<(usize, i64)>,
}

pub trait Model: Send + Sync {
    fn name(&self) -> String;
    fn space(&self) -> SpaceTag;
    fn generators(&self) -> Vec<GeneratorInfo>;

    fn vacuum(&self) -> State {
        State::monomial(self.space(), Monomial::vacuum())
    }

    /// `g_(n) m`.
    fn mode(&self, gen: usize, n: i64, m: &Monomial) -> State;

    /// `g_(n) m = 0` for every `n >= mode_bound(gen, m)`.
    fn mode_bound(&self, gen: usize, m: &Monomial) -> i64;

    fn translate(&self, m: &Monomial) -> State;

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord>;

    /// Basis monomials of exactly the given grade (no central factors).
    fn basis(&self, grade: u32) -> Vec<Monomial>;

    /// Weight of a basis monomial in the norm `max |λ_m| weight(m)`.
    fn weight(&self, _m: &Monomial) -> Norm {
        Norm::one()
    }

    fn render_monomial(&self, m: &Monomial) -> String;

    fn parse_monomial(&self, s: &str) -> Option<Monomial>;

    /// Value substituted for the central element, if this is a quotient.
    fn central_value(&self) -> Option<Scalar> {
        None
    }

    /// The same algebra with its central element set to `c`.
    fn with_central_value(&self, _c: &Scalar) -> Option<Box<dyn Model>> {
        None
    }
}

/// Partitions of `n` into parts `>= min_part`, parts in descending order.
pub fn partitions(n: u32, min_part: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = max.min(n);
        while p >= min {
            cur.push(p);
            go(n - p, p, min, cur, out);
            cur.pop();
            p -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// Partitions of `n` into distinct parts, descending.
pub fn strict_partitions(n: u32) -> Vec<Vec<u32>> {
    partitions(n, 1)
        .into_iter()
        .filter(|p| p.windows(2).all(|w| w[0] != w[1]))
        .collect()
}

/// Applies a word of generator modes right to left to a starting state.
pub fn apply_word(model: &dyn Model, letters: &[(usize, i64)], start: &State) -> State {
    let mut cur = start.clone();
    for &(g, n) in letters.iter().rev() {
        cur = cur.map_monomials(|m| model.mode(g, n, m));
        if cur.is_zero() {
            break;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5, 1).len(), 7);
        assert_eq!(partitions(6, 2).len(), 4);
        assert_eq!(strict_partitions(6).len(), 4);
        assert_eq!(partitions(0, 2), vec![Vec::<u32>::new()]);
        assert!(partitions(1, 2).is_empty());
    }
}
