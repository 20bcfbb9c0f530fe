//! The commutative vertex algebra `K{r^{-1} t}` with `T = ∂_t`.
//!
//! States are polynomials in `t`; the norm is `max |λ_k| r^k`. Probes stop at
//! the configured truncation degree.

use crate::model::{CreationWord, GeneratorInfo, Model};
use crate::scalars::{Norm, Scalar};
use crate::states::{render_monomial, Monomial, SpaceTag, State};

use super::parse_factors;

/// `Y(a, z) b = (e^{zT} a) b`. The generator is `t`, whose field is
/// multiplication by `t + z`: `t_(-1)` multiplies by `t`, `t_(-2)` is the
/// identity and every other mode vanishes.
#[derive(Debug, Clone)]
pub struct PowerSeriesAlgebra {
    r: Scalar,
    truncation: u32,
}

impl PowerSeriesAlgebra {
    pub fn new(r: Scalar, truncation: u32) -> PowerSeriesAlgebra {
        PowerSeriesAlgebra { r, truncation }
    }

    pub fn radius(&self) -> &Scalar {
        &self.r
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }
}

impl Model for PowerSeriesAlgebra {
    fn name(&self) -> String {
        format!("power-series(r={})", self.r)
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::PowerSeries
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        vec![GeneratorInfo::even("t")]
    }

    fn mode(&self, _gen: usize, n: i64, m: &Monomial) -> State {
        match n {
            -1 => State::monomial(SpaceTag::PowerSeries, Monomial::power(m.len() as u32 + 1)),
            -2 => State::monomial(SpaceTag::PowerSeries, m.clone()),
            _ => State::zero(SpaceTag::PowerSeries),
        }
    }

    fn mode_bound(&self, _gen: usize, _m: &Monomial) -> i64 {
        0
    }

    fn translate(&self, m: &Monomial) -> State {
        let k = m.len() as u32;
        if k == 0 {
            return State::zero(SpaceTag::PowerSeries);
        }
        State::term(SpaceTag::PowerSeries, Monomial::power(k - 1), Scalar::from_int(k as i64))
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        Some(CreationWord {
            coef: Scalar::one(),
            letters: vec![(0, -1); m.len()],
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        if grade <= self.truncation {
            vec![Monomial::power(grade)]
        } else {
            vec![]
        }
    }

    fn weight(&self, m: &Monomial) -> Norm {
        Norm::from_rational(self.r.pow(m.len() as u32).as_rational().clone())
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::PowerSeries, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let mut k = 0;
        for (base, e) in parse_factors(s)? {
            match base.as_str() {
                "1" | "|0>" => {}
                "t" => k += e,
                _ => return None,
            }
        }
        Some(Monomial::power(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_of_t_is_t_plus_z() {
        let a = PowerSeriesAlgebra::new(Scalar::one(), 8);
        let t = Monomial::power(1);
        assert_eq!(a.mode(0, -1, &t), State::monomial(SpaceTag::PowerSeries, Monomial::power(2)));
        assert_eq!(a.mode(0, -2, &t), State::monomial(SpaceTag::PowerSeries, t.clone()));
        assert!(a.mode(0, 0, &t).is_zero());
        assert_eq!(
            a.translate(&Monomial::power(3)),
            State::term(SpaceTag::PowerSeries, Monomial::power(2), Scalar::from_int(3))
        );
    }

    #[test]
    fn weights() {
        let a = PowerSeriesAlgebra::new(Scalar::ratio(1, 2), 8);
        assert_eq!(a.weight(&Monomial::power(3)).to_string(), "1/8");
        assert_eq!(a.parse_monomial("t^3"), Some(Monomial::power(3)));
        assert_eq!(a.render_monomial(&Monomial::power(3)), "t^3");
        assert_eq!(a.render_monomial(&Monomial::vacuum()), "1");
    }
}
