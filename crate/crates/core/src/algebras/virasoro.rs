//! The universal Virasoro vertex algebra on the PBW basis `C^k L_{-n_1} ... L_{-n_j} |0>`.

use crate::model::{partitions, CreationWord, GeneratorInfo, Model};
use crate::pbw::{Letter, LieRules, PbwEngine};
use crate::scalars::Scalar;
use crate::states::{render_monomial, Gen, Monomial, SpaceTag, State};

use super::parse_factors;

/// `[L_m, L_n] = (m-n) L_{m+n} + δ_{m,-n} (m^3-m)/12 C`; `L_n |0> = 0` for `n >= -1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct VirasoroRules;

impl LieRules for VirasoroRules {
    fn annihilates_vacuum(&self, x: Letter) -> bool {
        x.1 >= -1
    }

    fn bracket(&self, x: Letter, y: Letter) -> (Vec<(Letter, Scalar)>, Scalar) {
        let (m, n) = (x.1, y.1);
        let mut lin = Vec::new();
        if m != n {
            lin.push(((0, m + n), Scalar::from_int(m - n)));
        }
        let central = if m == -n {
            Scalar::ratio(m * m * m - m, 12)
        } else {
            Scalar::zero()
        };
        (lin, central)
    }
}

pub struct Virasoro {
    engine: PbwEngine<VirasoroRules>,
}

impl Virasoro {
    /// `central = Some(c)` builds the quotient by `C - c`.
    pub fn new(central: Option<Scalar>) -> Virasoro {
        Virasoro {
            engine: PbwEngine::new(VirasoroRules, SpaceTag::Virasoro, central),
        }
    }

    pub fn engine(&self) -> &PbwEngine<VirasoroRules> {
        &self.engine
    }

    /// `L_n` on a basis monomial.
    pub fn l(&self, n: i64, m: &Monomial) -> State {
        self.engine.apply((0, n), m)
    }
}

impl Model for Virasoro {
    fn name(&self) -> String {
        match self.engine.central_value() {
            None => "virasoro".into(),
            Some(c) => format!("virasoro(c={c})"),
        }
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::Virasoro
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        let mut g = vec![GeneratorInfo::even("L")];
        if self.engine.central_value().is_none() {
            g.push(GeneratorInfo::central("C"));
        }
        g
    }

    fn mode(&self, gen: usize, n: i64, m: &Monomial) -> State {
        match gen {
            // L_(n) = L_{n-1}
            0 => self.l(n - 1, m),
            _ if n == -1 => State::monomial(SpaceTag::Virasoro, m.with_central(m.central + 1)),
            _ => State::zero(SpaceTag::Virasoro),
        }
    }

    fn mode_bound(&self, gen: usize, m: &Monomial) -> i64 {
        match (gen, m.grade()) {
            (0, 0) => 0,
            (0, g) => g as i64 + 2,
            _ => 0,
        }
    }

    fn translate(&self, m: &Monomial) -> State {
        self.l(-1, m)
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        let mut letters: Vec<(usize, i64)> = vec![(1, -1); m.central as usize];
        letters.extend(m.gens.iter().map(|g| (0, 1 - g.depth as i64)));
        Some(CreationWord {
            coef: Scalar::one(),
            letters,
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        partitions(grade, 2)
            .into_iter()
            .map(|p| Monomial::from_gens(p.into_iter().map(Gen::var).collect()))
            .collect()
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::Virasoro, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let mut central = 0;
        let mut depths = Vec::new();
        for (base, k) in parse_factors(s)? {
            match base.as_str() {
                "|0>" | "1" => {}
                "C" if self.engine.central_value().is_none() => central += k,
                _ => {
                    let d: i64 = base.strip_prefix("L[")?.strip_suffix(']')?.parse().ok()?;
                    if d > -2 {
                        return None;
                    }
                    depths.extend(std::iter::repeat((-d) as u32).take(k as usize));
                }
            }
        }
        // Only words already in PBW order are accepted as monomials.
        if depths.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Monomial {
            central,
            gens: depths.into_iter().map(Gen::var).collect(),
        })
    }

    fn central_value(&self) -> Option<Scalar> {
        self.engine.central_value().cloned()
    }

    fn with_central_value(&self, c: &Scalar) -> Option<Box<dyn Model>> {
        if self.engine.central_value().is_some() {
            return None;
        }
        Some(Box::new(Virasoro::new(Some(c.clone()))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::{normal_order_word, sorted_words_on_vacuum, RewriteOrder};

    fn l2() -> Monomial {
        Monomial::from_gens(vec![Gen::var(2)])
    }

    #[test]
    fn highest_weight_relations() {
        let v = Virasoro::new(None);
        let c_half = State::term(
            SpaceTag::Virasoro,
            Monomial { central: 1, gens: vec![] },
            Scalar::ratio(1, 2),
        );
        assert_eq!(v.l(2, &l2()), c_half);
        assert!(v.l(1, &l2()).is_zero());
        assert_eq!(v.l(0, &l2()), State::term(SpaceTag::Virasoro, l2(), Scalar::from_int(2)));
    }

    #[test]
    fn quotient_substitutes_central_charge() {
        let zero = Virasoro::new(Some(Scalar::zero()));
        assert!(zero.l(2, &l2()).is_zero());
        let half = Virasoro::new(Some(Scalar::ratio(1, 2)));
        assert_eq!(
            half.l(2, &l2()),
            State::term(SpaceTag::Virasoro, Monomial::vacuum(), Scalar::ratio(1, 4))
        );
    }

    #[test]
    fn engine_matches_word_rewriting() {
        let v = Virasoro::new(None);
        let words: Vec<Vec<i64>> = vec![
            vec![2, -2],
            vec![3, -2, -3],
            vec![-2, 1, -4],
            vec![1, 1, -3, -2],
            vec![-1, -3, 2, -2],
        ];
        for w in words {
            let letters: Vec<Letter> = w.iter().map(|&n| (0, n)).collect();
            let direct = v.engine.apply_word(&letters, &v.vacuum());
            for order in [RewriteOrder::Leftmost, RewriteOrder::Rightmost] {
                let sorted = normal_order_word(&VirasoroRules, &letters, order);
                let via_words = sorted_words_on_vacuum(&VirasoroRules, SpaceTag::Virasoro, &sorted);
                assert_eq!(direct, via_words, "word {w:?}");
            }
        }
    }

    #[test]
    fn parsing() {
        let v = Virasoro::new(None);
        let m = v.parse_monomial("C^2*L[-3]*L[-2]^2").unwrap();
        assert_eq!(v.render_monomial(&m), "C^2*L[-3]*L[-2]^2");
        assert!(v.parse_monomial("L[-2]*L[-3]").is_none());
        assert!(v.parse_monomial("L[-1]").is_none());
    }
}
