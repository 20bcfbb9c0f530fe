//! The free fermion on the Grassmann algebra `Z[ξ_1, ξ_2, ...]`.

use crate::model::{strict_partitions, CreationWord, GeneratorInfo, Model};
use crate::scalars::Scalar;
use crate::states::{
    render_monomial, wedge_derivative, wedge_left, Monomial, SpaceTag, State,
};

/// `φ_(n) = ∂/∂ξ_{n+1}` (n >= 0), `ξ_{-n} ∧` (n < 0);
/// `T = Σ i ξ_{i+1} ∂/∂ξ_i`.
#[derive(Debug, Clone, Default)]
pub struct FreeFermion;

impl Model for FreeFermion {
    fn name(&self) -> String {
        "fermion".into()
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::Fermion
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        vec![GeneratorInfo {
            name: "phi".into(),
            odd: true,
            central: false,
        }]
    }

    fn mode(&self, _gen: usize, n: i64, m: &Monomial) -> State {
        let hit = if n >= 0 {
            wedge_derivative(m, (n + 1) as u32)
        } else {
            wedge_left(m, (-n) as u32)
        };
        match hit {
            None => State::zero(SpaceTag::Fermion),
            Some((s, mm)) => State::term(SpaceTag::Fermion, mm, Scalar::from_int(s)),
        }
    }

    fn mode_bound(&self, _gen: usize, m: &Monomial) -> i64 {
        m.max_depth() as i64
    }

    fn translate(&self, m: &Monomial) -> State {
        // T is an even derivation with T ξ_i = i ξ_{i+1}.
        let mut out = State::zero(SpaceTag::Fermion);
        for (k, g) in m.gens.iter().enumerate() {
            let next = g.depth + 1;
            if m.gens.iter().any(|h| h.depth == next) {
                continue;
            }
            let mut gens = m.gens.clone();
            gens[k].depth = next;
            out.add_term(Monomial::from_gens(gens), &Scalar::from_int(g.depth as i64));
        }
        out
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        Some(CreationWord {
            coef: Scalar::one(),
            letters: m.gens.iter().map(|g| (0, -(g.depth as i64))).collect(),
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        strict_partitions(grade)
            .into_iter()
            .map(|p| Monomial::wedge(&p).expect("distinct parts"))
            .collect()
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::Fermion, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let s = s.trim();
        if s == "|0>" || s == "1" {
            return Some(Monomial::vacuum());
        }
        let inner = s.strip_prefix("xi[")?.strip_suffix(']')?;
        let idx: Option<Vec<u32>> = inner.split(',').map(|t| t.trim().parse().ok()).collect();
        let idx = idx?;
        if idx.contains(&0) || idx.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        Monomial::wedge(&idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes() {
        let f = FreeFermion;
        let xi1 = Monomial::wedge(&[1]).unwrap();
        assert_eq!(f.mode(0, 0, &xi1), State::monomial(SpaceTag::Fermion, Monomial::vacuum()));
        let step = f.mode(0, -2, &Monomial::vacuum());
        let both = step.map_monomials(|m| f.mode(0, -1, m));
        assert_eq!(both, State::monomial(SpaceTag::Fermion, Monomial::wedge(&[1, 2]).unwrap()));
    }

    #[test]
    fn translation() {
        let f = FreeFermion;
        let m = Monomial::wedge(&[1, 2]).unwrap();
        // T(ξ1 ξ2) = ξ2 ξ2 + 2 ξ1 ξ3 = 2 ξ1 ξ3
        assert_eq!(
            f.translate(&m),
            State::term(SpaceTag::Fermion, Monomial::wedge(&[1, 3]).unwrap(), Scalar::from_int(2))
        );
    }

    #[test]
    fn parsing() {
        let f = FreeFermion;
        assert_eq!(f.parse_monomial("xi[1,4]"), Monomial::wedge(&[1, 4]));
        assert!(f.parse_monomial("xi[4,1]").is_none());
        assert_eq!(f.render_monomial(&Monomial::wedge(&[1, 4]).unwrap()), "xi[1,4]");
    }
}
