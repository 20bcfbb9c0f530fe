//! Universal affine vertex algebras `V(ĝ)` on the PBW basis
//! `K^k (e_{i_1} t^{-n_1}) ... (e_{i_j} t^{-n_j}) |0>`.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{CreationWord, GeneratorInfo, Model};
use crate::pbw::{Letter, LieRules, PbwEngine};
use crate::scalars::{Scalar, ScalarError};
use crate::states::{render_monomial, Gen, Monomial, SpaceTag, State};

use super::parse_factors;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieDataError {
    #[error("bracket is not antisymmetric at [{0}, {1}]")]
    Antisymmetry(String, String),
    #[error("Jacobi identity fails for ({0}, {1}, {2})")]
    Jacobi(String, String, String),
    #[error("form is not symmetric at ({0}, {1})")]
    FormSymmetry(String, String),
    #[error("form is not invariant at ({0}, {1}, {2})")]
    FormInvariance(String, String, String),
    #[error("form is degenerate")]
    Degenerate,
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("cannot parse linear combination `{0}`")]
    BadCombination(String),
    #[error("cannot parse Lie data: {0}")]
    Parse(String),
}

type Combination = Vec<(usize, Scalar)>;

/// A finite-dimensional Lie algebra over `Z[1/N]` with a symmetric form.
#[derive(Debug, Clone, PartialEq)]
pub struct LieData {
    pub name: String,
    pub labels: Vec<String>,
    /// The `N` of `Z[1/N]`.
    pub invert: u64,
    bracket: BTreeMap<(usize, usize), Combination>,
    form: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
struct RawEntry {
    left: String,
    right: String,
    value: String,
}

#[derive(Deserialize)]
struct RawLieData {
    name: Option<String>,
    invert: Option<u64>,
    labels: Vec<String>,
    #[serde(default)]
    bracket: Vec<RawEntry>,
    #[serde(default)]
    form: Vec<RawEntry>,
}

impl LieData {
    /// The one-dimensional abelian Lie algebra with `(a|a) = 1`.
    pub fn abelian_rank1() -> LieData {
        LieData {
            name: "abelian-1".into(),
            labels: vec!["a".into()],
            invert: 1,
            bracket: BTreeMap::new(),
            form: vec![vec![Scalar::one()]],
        }
    }

    /// `sl_2` with basis `e, h, f` and the trace form.
    pub fn sl2() -> LieData {
        let text = r#"
            name = "sl2"
            invert = 2
            labels = ["e", "h", "f"]
            bracket = [
              { left = "h", right = "e", value = "2*e" },
              { left = "h", right = "f", value = "-2*f" },
              { left = "e", right = "f", value = "h" },
            ]
            form = [
              { left = "e", right = "f", value = "1" },
              { left = "h", right = "h", value = "2" },
            ]
        "#;
        LieData::from_toml(text).expect("built-in data is valid")
    }

    pub fn from_toml(text: &str) -> Result<LieData, LieDataError> {
        let raw: RawLieData =
            toml::from_str(text).map_err(|e| LieDataError::Parse(e.to_string()))?;
        let mut g = LieData {
            name: raw.name.unwrap_or_else(|| "g".into()),
            labels: raw.labels,
            invert: raw.invert.unwrap_or(1),
            bracket: BTreeMap::new(),
            form: Vec::new(),
        };
        let dim = g.labels.len();
        g.form = vec![vec![Scalar::zero(); dim]; dim];
        let mut seen_form = vec![vec![false; dim]; dim];
        for e in &raw.bracket {
            let (i, j) = (g.index(&e.left)?, g.index(&e.right)?);
            let v = g.parse_combination(&e.value)?;
            if let Some(prev) = g.bracket.get(&(j, i)) {
                if normalize(&negate(prev)) != normalize(&v) {
                    return Err(LieDataError::Antisymmetry(e.left.clone(), e.right.clone()));
                }
            }
            if i == j && !normalize(&v).is_empty() {
                return Err(LieDataError::Antisymmetry(e.left.clone(), e.right.clone()));
            }
            g.bracket.insert((i, j), normalize(&v));
            g.bracket.entry((j, i)).or_insert_with(|| normalize(&negate(&v)));
        }
        for e in &raw.form {
            let (i, j) = (g.index(&e.left)?, g.index(&e.right)?);
            let v: Scalar = e
                .value
                .parse()
                .map_err(|err: ScalarError| LieDataError::Parse(err.to_string()))?;
            if seen_form[j][i] && g.form[j][i] != v {
                return Err(LieDataError::FormSymmetry(e.left.clone(), e.right.clone()));
            }
            g.form[i][j] = v.clone();
            g.form[j][i] = v;
            seen_form[i][j] = true;
            seen_form[j][i] = true;
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn index(&self, label: &str) -> Result<usize, LieDataError> {
        self.labels
            .iter()
            .position(|l| l == label.trim())
            .ok_or_else(|| LieDataError::UnknownLabel(label.trim().to_string()))
    }

    fn parse_combination(&self, s: &str) -> Result<Combination, LieDataError> {
        let bad = || LieDataError::BadCombination(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ if out.is_empty() => (1, rest),
                _ => return Err(bad()),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map(|p| p + 1)
                .unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coef, label) = match term.rsplit_once('*') {
                Some((c, l)) => (c.parse::<Scalar>().map_err(|_| bad())?, l),
                None => (Scalar::one(), term),
            };
            let idx = self.index(label)?;
            out.push((idx, coef * Scalar::from_int(sign)));
        }
        Ok(out)
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.bracket.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn form(&self, i: usize, j: usize) -> &Scalar {
        &self.form[i][j]
    }

    pub(crate) fn all_constants(&self) -> Vec<Scalar> {
        let mut v: Vec<Scalar> = self
            .bracket
            .values()
            .flat_map(|c| c.iter().map(|(_, s)| s.clone()))
            .collect();
        v.extend(self.form.iter().flatten().cloned());
        v
    }

    fn bracket_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket(i, j) {
                    out[*k] += &(&(xi * yj) * c);
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    fn form_vec(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                acc += &(&(xi * yj) * &self.form[i][j]);
            }
        }
        acc
    }

    /// Checks antisymmetry, Jacobi, symmetry, invariance and
    /// nondegeneracy of the form.
    pub fn validate(&self) -> Result<(), LieDataError> {
        let n = self.dim();
        let l = |i: usize| self.labels[i].clone();
        for i in 0..n {
            for j in 0..n {
                let ij = self.bracket_vec(&self.unit(i), &self.unit(j));
                let ji = self.bracket_vec(&self.unit(j), &self.unit(i));
                if ij.iter().zip(&ji).any(|(a, b)| !(a + b).is_zero()) {
                    return Err(LieDataError::Antisymmetry(l(i), l(j)));
                }
                if self.form[i][j] != self.form[j][i] {
                    return Err(LieDataError::FormSymmetry(l(i), l(j)));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket_vec(&a, &self.bracket_vec(&b, &c));
                    let t2 = self.bracket_vec(&b, &self.bracket_vec(&c, &a));
                    let t3 = self.bracket_vec(&c, &self.bracket_vec(&a, &b));
                    if (0..n).any(|r| !(&(&t1[r] + &t2[r]) + &t3[r]).is_zero()) {
                        return Err(LieDataError::Jacobi(l(i), l(j), l(k)));
                    }
                    let lhs = self.form_vec(&self.bracket_vec(&a, &b), &c);
                    let rhs = self.form_vec(&a, &self.bracket_vec(&b, &c));
                    if lhs != rhs {
                        return Err(LieDataError::FormInvariance(l(i), l(j), l(k)));
                    }
                }
            }
        }
        if determinant(&self.form).is_zero() {
            return Err(LieDataError::Degenerate);
        }
        Ok(())
    }
}

fn negate(v: &Combination) -> Combination {
    v.iter().map(|(i, c)| (*i, -c)).collect()
}

fn normalize(v: &Combination) -> Combination {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, c) in v {
        *m.entry(*i).or_insert_with(Scalar::zero) += c;
    }
    m.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Determinant over `Q` by Gaussian elimination.
fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        for r in col + 1..n {
            let f = a[r][col].checked_div(&p).expect("pivot is nonzero");
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= &sub;
            }
        }
    }
    det
}

pub struct AffineRules {
    g: LieData,
}

impl LieRules for AffineRules {
    fn annihilates_vacuum(&self, x: Letter) -> bool {
        x.1 >= 0
    }

    fn bracket(&self, x: Letter, y: Letter) -> (Vec<(Letter, Scalar)>, Scalar) {
        let (i, m) = (x.0 as usize, x.1);
        let (j, n) = (y.0 as usize, y.1);
        let lin = self
            .g
            .bracket(i, j)
            .iter()
            .map(|(k, c)| ((*k as u16, m + n), c.clone()))
            .collect();
        let central = if m == -n {
            self.g.form(i, j) * &Scalar::from_int(m)
        } else {
            Scalar::zero()
        };
        (lin, central)
    }
}

pub struct AffineAlgebra {
    engine: PbwEngine<AffineRules>,
}

impl AffineAlgebra {
    /// `level = Some(k)` builds the quotient by `K - k`.
    pub fn new(g: LieData, level: Option<Scalar>) -> AffineAlgebra {
        AffineAlgebra {
            engine: PbwEngine::new(AffineRules { g }, SpaceTag::Affine, level),
        }
    }

    pub fn lie(&self) -> &LieData {
        &self.engine.rules().g
    }

    fn dim(&self) -> usize {
        self.lie().dim()
    }
}

fn affine_basis(grade: u32, dim: u16) -> Vec<Monomial> {
    fn go(left: u32, max: (u32, u16), dim: u16, cur: &mut Vec<Gen>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_gens(cur.clone()));
            return;
        }
        for d in (1..=left.min(max.0)).rev() {
            for l in (0..dim).rev() {
                if (d, l) > max {
                    continue;
                }
                cur.push(Gen::new(l, d));
                go(left - d, (d, l), dim, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(grade, (grade, dim.saturating_sub(1)), dim, &mut Vec::new(), &mut out);
    out
}

impl Model for AffineAlgebra {
    fn name(&self) -> String {
        match self.engine.central_value() {
            None => format!("affine({})", self.lie().name),
            Some(k) => format!("affine({}, k={k})", self.lie().name),
        }
    }

    fn space(&self) -> SpaceTag {
        SpaceTag::Affine
    }

    fn generators(&self) -> Vec<GeneratorInfo> {
        let mut g: Vec<GeneratorInfo> =
            self.lie().labels.iter().map(|l| GeneratorInfo::even(l)).collect();
        if self.engine.central_value().is_none() {
            g.push(GeneratorInfo::central("K"));
        }
        g
    }

    fn mode(&self, gen: usize, n: i64, m: &Monomial) -> State {
        if gen < self.dim() {
            self.engine.apply((gen as u16, n), m)
        } else if n == -1 {
            State::monomial(SpaceTag::Affine, m.with_central(m.central + 1))
        } else {
            State::zero(SpaceTag::Affine)
        }
    }

    fn mode_bound(&self, gen: usize, m: &Monomial) -> i64 {
        match m.grade() {
            _ if gen >= self.dim() => 0,
            0 => 0,
            g => g as i64 + 1,
        }
    }

    fn translate(&self, m: &Monomial) -> State {
        // T = -∂_t: e t^{-n} -> n e t^{-n-1}, applied as a derivation of the word.
        let letters: Vec<Letter> = m
            .gens
            .iter()
            .map(|g| (g.label, -(g.depth as i64)))
            .collect();
        let start = State::monomial(SpaceTag::Affine, Monomial::vacuum().with_central(m.central));
        let mut out = State::zero(SpaceTag::Affine);
        for k in 0..letters.len() {
            let mut w = letters.clone();
            let depth = -w[k].1;
            w[k].1 -= 1;
            out.add_scaled(&self.engine.apply_word(&w, &start), &Scalar::from_int(depth));
        }
        out
    }

    fn creation_word(&self, m: &Monomial) -> Option<CreationWord> {
        let k = self.dim();
        let mut letters: Vec<(usize, i64)> = vec![(k, -1); m.central as usize];
        letters.extend(m.gens.iter().map(|g| (g.label as usize, -(g.depth as i64))));
        Some(CreationWord {
            coef: Scalar::one(),
            letters,
        })
    }

    fn basis(&self, grade: u32) -> Vec<Monomial> {
        affine_basis(grade, self.dim() as u16)
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        render_monomial(SpaceTag::Affine, m, &self.lie().labels)
    }

    fn parse_monomial(&self, s: &str) -> Option<Monomial> {
        let mut central = 0;
        let mut gens = Vec::new();
        for (base, k) in parse_factors(s)? {
            match base.as_str() {
                "|0>" | "1" => {}
                "K" if self.engine.central_value().is_none() => central += k,
                _ => {
                    let (name, rest) = base.split_once('[')?;
                    let d: i64 = rest.strip_suffix(']')?.parse().ok()?;
                    if d >= 0 {
                        return None;
                    }
                    let label = self.lie().labels.iter().position(|l| l == name)? as u16;
                    for _ in 0..k {
                        gens.push(Gen::new(label, (-d) as u32));
                    }
                }
            }
        }
        if gens
            .windows(2)
            .any(|w| (w[0].depth, w[0].label) < (w[1].depth, w[1].label))
        {
            return None;
        }
        Some(Monomial { central, gens })
    }

    fn central_value(&self) -> Option<Scalar> {
        self.engine.central_value().cloned()
    }

    fn with_central_value(&self, c: &Scalar) -> Option<Box<dyn Model>> {
        if self.engine.central_value().is_some() {
            return None;
        }
        Some(Box::new(AffineAlgebra::new(self.lie().clone(), Some(c.clone()))))
    }
}
