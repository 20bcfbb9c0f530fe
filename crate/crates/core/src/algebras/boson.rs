//! The free boson on `Z[x_1, x_2, ...]` and its transposed form on
//! `Z[y_1, y_2, ...]`.

use crate::model::{partitions, CreationWord, GeneratorInfo, Model};
use crate::scalars::Scalar;
use crate::states::{render_monomial, Gen, Monomial, SpaceTag, State};

use super::parse_factors;

/// `a_(n) = n ∂/∂x_n` (n > 0), `x_{-n}` (n < 0), `a_(0) = 0`;
/// `T = Σ (i-1) x_i ∂/∂x_{i-1}`.
#[derive(Debug, Clone, Default)]
pub struct FreeBoson;

/// `b_(n) = ∂/∂y_n` (n > 0), `-n y_{-n}` (n < 0), `b_(0) = 0`;
/// `T = Σ i y_i ∂/∂y_{i-1}`.
#[derive(Debug, Clone, Default)]
pub struct FreeBosonT;

fn boson_mode(n: i64, m: &Monomial, transposed: bool) -> State {
    let space = if transposed { SpaceTag::BosonT } else { SpaceTag::Boson };
    if n > 0 {
        let g = Gen::var(n as u32);
        let mult = m.multiplicity(g) as i64;
        match m.remove_one(g) {
            None => State::zero(space),
            Some(rest) => {
                let c = if transposed { mult } else { n * mult };
                State::term(space, rest, Scalar::from_int(c))
            }
        }
    } else if n < 0 {
        let c = if transposed { -n } else { 1 };
        State::term(space, m.insert_sorted(Gen::var((-n) as u32)), Scalar::from_int(c))
    } else {
        State::zero(space)
    }
}

fn boson_bound(m: &Monomial) -> i64 {
    if m.gens.is_empty() {
        0
    } else {
        m.max_depth() as i64 + 1
    }
}

fn boson_translate(m: &Monomial, transposed: bool) -> State {
    let space = if transposed { SpaceTag::BosonT } else { SpaceTag::Boson };
    let mut out = State::zero(space);
    let mut seen = Vec::new();
    for g in &m.gens {
        if seen.contains(g) {
            continue;
        }
        seen.push(*g);
        let mult = m.multiplicity(*g) as i64;
        let d = g.depth as i64;
        let c = if transposed { (d + 1) * mult } else { d * mult };
        let rest = m.remove_one(*g).expect("present");
        out.add_term(rest.insert_sorted(Gen::var(g.depth + 1)), &Scalar::from_int(c));
    }
    out
}

fn parse_vars(s: &str, prefix: char) -> Option<Monomial> {
    let mut depths = Vec::new();
    for (base, k) in parse_factors(s)? {
        if base == "|0>" || base == "1" {
            continue;
        }
        let d: u32 = base.strip_prefix(prefix)?.parse().ok()?;
        if d == 0 {
            return None;
        }
        depths.extend(std::iter::repeat(d).take(k as usize));
    }
    Some(Monomial::vars(&depths))
}

fn boson_basis(grade: u32) -> Vec<Monomial> {
    partitions(grade, 1).into_iter().map(|p| Monomial::vars(&p)).collect()
}

impl Model for FreeBoson {
    fn name(&self) -> String {
        "boson".into()
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::Boson
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        vec![GeneratorInfo::even("a")]
    }

    fn mode(&self, _gen: usize, n: i64, m: &Monomial) -> State {
        boson_mode(n, m, false)
    }

    fn mode_bound(&self, _gen: usize, m: &Monomial) -> i64 {
        boson_bound(m)
    }

    fn translate(&self, m: &Monomial) -> State {
        boson_translate(m, false)
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        Some(CreationWord {
            coef: Scalar::one(),
            letters: m.gens.iter().map(|g| (0, -(g.depth as i64))).collect(),
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        boson_basis(grade)
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::Boson, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        parse_vars(s, 'x')
    }
}

impl Model for FreeBosonT {
    fn name(&self) -> String {
        "boson-t".into()
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::BosonT
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        vec![GeneratorInfo::even("b")]
    }

    fn mode(&self, _gen: usize, n: i64, m: &Monomial) -> State {
        boson_mode(n, m, true)
    }

    fn mode_bound(&self, _gen: usize, m: &Monomial) -> i64 {
        boson_bound(m)
    }

    fn translate(&self, m: &Monomial) -> State {
        boson_translate(m, true)
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        // b_(-d)|0> = d y_d
        let prod: i64 = m.gens.iter().map(|g| g.depth as i64).product();
        Some(CreationWord {
            coef: Scalar::ratio(1, prod),
            letters: m.gens.iter().map(|g| (0, -(g.depth as i64))).collect(),
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        boson_basis(grade)
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::BosonT, m, &[])
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        parse_vars(s, 'y')
    }
}

/// The homomorphism `B -> B^t`, `x_i -> i y_i`, on states.
pub fn boson_to_transposed(v: &State) -> State {
    let mut out = State::zero(SpaceTag::BosonT);
    for (m, c) in v.terms() {
        let f: i64 = m.gens.iter().map(|g| g.depth as i64).product();
        out.add_term(m.clone(), &(c * &Scalar::from_int(f)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(depths: &[u32]) -> Monomial {
        Monomial::vars(depths)
    }

    #[test]
    fn boson_modes() {
        let b = FreeBoson;
        assert_eq!(
            b.mode(0, 2, &st(&[2])),
            State::term(SpaceTag::Boson, Monomial::vacuum(), Scalar::from_int(2))
        );
        assert!(b.mode(0, 0, &st(&[1, 2])).is_zero());
        assert_eq!(
            b.translate(&st(&[2])),
            State::term(SpaceTag::Boson, st(&[3]), Scalar::from_int(2))
        );
        assert_eq!(b.mode(0, 1, &st(&[1])), State::monomial(SpaceTag::Boson, Monomial::vacuum()));
    }

    #[test]
    fn transposed_modes() {
        let b = FreeBosonT;
        assert_eq!(b.mode(0, -1, &Monomial::vacuum()), State::monomial(SpaceTag::BosonT, st(&[1])));
        let x2 = State::monomial(SpaceTag::Boson, st(&[2]));
        assert_eq!(
            boson_to_transposed(&x2),
            State::term(SpaceTag::BosonT, st(&[2]), Scalar::from_int(2))
        );
        assert_eq!(b.creation_word(&st(&[2])).unwrap().coef, Scalar::ratio(1, 2));
    }

    #[test]
    fn parse_roundtrip() {
        let b = FreeBoson;
        let m = b.parse_monomial("x1^2*x3").unwrap();
        assert_eq!(m, st(&[1, 1, 3]));
        assert_eq!(b.render_monomial(&m), "x1^2*x3");
        assert_eq!(b.parse_monomial("|0>"), Some(Monomial::vacuum()));
        assert!(b.parse_monomial("y1").is_none());
    }
}
