//! Diagonal operators on `Q_p{x}` with vacuum `Σ p^i x^i` and `T = 0`,
//! truncated at a fixed degree.

use crate::model::{CreationWord, GeneratorInfo, Model};
use crate::scalars::Scalar;
use crate::states::{render_monomial, Gen, Monomial, SpaceTag, State};

/// Generators `φ_0, ..., φ_D` with `φ_i x^m = δ_{im} x^m`. Fields do not
/// depend on `z`, so only the mode `-1` is nonzero.
#[derive(Debug, Clone)]
pub struct DiagonalAlgebra {
    p: u64,
    truncation: u32,
}

impl DiagonalAlgebra {
    pub fn new(p: u64, truncation: u32) -> DiagonalAlgebra {
        DiagonalAlgebra { p, truncation }
    }

    fn p_power(&self, i: u32) -> Scalar {
        Scalar::from_int(self.p as i64).pow(i)
    }
}

impl Model for DiagonalAlgebra {
    fn name(&self) -> String {
        format!("diagonal(p={}, D={})", self.p, self.truncation)
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::Diagonal
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        (0..=self.truncation)
            .map(|i| GeneratorInfo::even(&format!("phi{i}")))
            .collect()
    }

    fn vacuum(&self) -> State {
        State::from_terms(
            SpaceTag::Diagonal,
            (0..=self.truncation).map(|i| (Monomial::power(i), self.p_power(i))),
        )
    }

    fn mode(&self, gen: usize, n: i64, m: &Monomial) -> State {
        if n == -1 && m.len() == gen {
            State::monomial(SpaceTag::Diagonal, m.clone())
        } else {
            State::zero(SpaceTag::Diagonal)
        }
    }

    fn mode_bound(&self, _gen: usize, _m: &Monomial) -> i64 {
        0
    }

    fn translate(&self, _m: &Monomial) -> State {
        State::zero(SpaceTag::Diagonal)
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        let i = m.len() as u32;
        if i > self.truncation {
            return None;
        }
        Some(CreationWord {
            coef: self.p_power(i).inv().ok()?,
            letters: vec![(i as usize, -1)],
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        // The basis is ungraded; put x^k in grade k.
        if grade <= self.truncation {
            vec![Monomial::power(grade)]
        } else {
            vec![]
        }
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::Diagonal, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let s = s.trim();
        if s == "1" {
            return Some(Monomial::vacuum());
        }
        let k = match s.strip_prefix("x") {
            Some("") => 1,
            Some(rest) => rest.strip_prefix('^')?.parse().ok()?,
            None => return None,
        };
        (k <= self.truncation).then(|| Monomial::from_gens(vec![Gen::var(1); k as usize]))
    }
}
