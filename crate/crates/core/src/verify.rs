//! Seeded randomized suites over the identity checkers, assembled into a
//! byte-stable report.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformal::{check_conformal_axioms, radius_certificate, RadiusEntry};
use crate::identities::{
    check_borcherds, check_commutator, check_dong, check_skew, t_derivation_check, IdentityReport,
    Number, Verdict,
};
use crate::scalars::Scalar;
use crate::series::Window;
use crate::states::{Monomial, State};
use crate::vertex::{AdmissibilityEntry, VertexAlgebra, VertexError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Borcherds,
    Skew,
    Commutator,
    #[serde(rename = "t-derivation")]
    TDerivation,
    Dong,
    Conformal,
    Admissibility,
    Radius,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Borcherds,
        Suite::Skew,
        Suite::Commutator,
        Suite::TDerivation,
        Suite::Dong,
        Suite::Conformal,
        Suite::Admissibility,
        Suite::Radius,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Borcherds => "borcherds",
            Suite::Skew => "skew",
            Suite::Commutator => "commutator",
            Suite::TDerivation => "t-derivation",
            Suite::Dong => "dong",
            Suite::Conformal => "conformal",
            Suite::Admissibility => "admissibility",
            Suite::Radius => "radius",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let alias = match s.as_str() {
            "tderiv" | "t-deriv" | "tderivation" => "t-derivation",
            other => other,
        };
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == alias)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Cases per identity suite.
    pub cases: usize,
    /// Largest grade of a random operand.
    pub grade_cap: u32,
    /// Bound on `|m|`, `|n|`, `|k|`.
    pub mode_bound: i64,
    /// Monomials per random operand, at most.
    pub max_terms: usize,
    /// Largest extra central power on a random operand.
    pub central_cap: u32,
    pub depth_budget: i64,
    pub dong_nmax: u32,
    pub dong_window: i64,
    pub dong_grade_cap: u32,
    /// `k = 0..=admissibility_k` for the witness fields.
    pub admissibility_k: u32,
    pub admissibility_grade_cap: u32,
    pub radius_pairs: usize,
    pub parallel: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            cases: 200,
            grade_cap: 6,
            mode_bound: 3,
            max_terms: 2,
            central_cap: 1,
            depth_budget: 64,
            dong_nmax: 12,
            dong_window: 8,
            dong_grade_cap: 3,
            admissibility_k: 3,
            admissibility_grade_cap: 8,
            radius_pairs: 20,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub exact_zero: usize,
    pub nonzero: usize,
    pub inconclusive: usize,
}

impl Summary {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::ExactZero => self.exact_zero += 1,
            Verdict::Nonzero => self.nonzero += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
    }

    fn absorb(&mut self, o: &Summary) {
        self.exact_zero += o.exact_zero;
        self.nonzero += o.nonzero;
        self.inconclusive += o.inconclusive;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibilityTable {
    pub entries: Vec<AdmissibilityEntry>,
    /// Log of each ratio in the base `p`, when it is a power of `p`.
    pub log_ratios: Vec<Option<Number>>,
    pub strictly_increasing: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCase {
    pub a: String,
    pub b: String,
    pub entries: Vec<RadiusEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: Suite,
    pub summary: Summary,
    pub cases: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub radius: Vec<RadiusCase>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub schema_version: u32,
    pub algebra: String,
    pub norm: String,
    pub ring: String,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub summary: Summary,
    /// Indices `suite:case` of inconclusive records.
    pub inconclusive: Vec<String>,
}

impl VerifyReport {
    pub fn has_nonzero(&self) -> bool {
        self.summary.nonzero > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// A random state of homogeneous parity whose coefficients keep it in `V'`.
pub fn random_state(
    v: &VertexAlgebra,
    rng: &mut ChaCha8Rng,
    basis: &[Monomial],
    max_terms: usize,
    central_cap: u32,
) -> State {
    let odd = rng.gen_bool(0.5);
    let model = v.model();
    let mut pool: Vec<&Monomial> = basis
        .iter()
        .filter(|m| State::monomial(v.space(), (*m).clone()).homogeneous_parity() == Some(odd))
        .collect();
    if pool.is_empty() {
        pool = basis.iter().collect();
    }
    let central_ok = model.central_value().is_none()
        && model.generators().iter().any(|g| g.central);
    let mut out = State::zero(v.space());
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let mut m = (*pool.choose(rng).expect("nonempty basis")).clone();
        if central_ok && central_cap > 0 && rng.gen_bool(0.3) {
            m = m.with_central(rng.gen_range(1..=central_cap));
        }
        let mut c = Scalar::from_int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        if let Some(w) = model.creation_word(&m) {
            c = &c * &Scalar::from_bigint(w.coef.denom().clone());
        }
        out.add_term(m, &c);
    }
    if out.is_zero() {
        v.vacuum()
    } else {
        out
    }
}

fn basis_upto(v: &VertexAlgebra, grade_cap: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::vacuum()];
    for g in 1..=grade_cap {
        out.extend(v.model().basis(g));
    }
    out
}

#[derive(Debug, Clone)]
enum Case {
    Borcherds(State, State, State, i64, i64, i64),
    Skew(State, State, Vec<i64>),
    Commutator(State, State, State, i64, i64),
    TDerivation(State, State, i64),
    Dong(State, State, State, i64),
    Conformal(State, State, State),
}

fn draw_cases(v: &VertexAlgebra, suite: Suite, cfg: &VerifyConfig) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((suite as u64 + 1) << 32));
    let cap = if suite == Suite::Dong {
        cfg.dong_grade_cap
    } else {
        cfg.grade_cap
    };
    let basis = basis_upto(v, cap);
    let mb = cfg.mode_bound;
    (0..cfg.cases)
        .map(|_| {
            let st = |rng: &mut ChaCha8Rng| {
                random_state(v, rng, &basis, cfg.max_terms, cfg.central_cap)
            };
            let a = st(&mut rng);
            let b = st(&mut rng);
            let c = st(&mut rng);
            let m = rng.gen_range(-mb..=mb);
            let n = rng.gen_range(-mb..=mb);
            let k = rng.gen_range(-mb..=mb);
            match suite {
                Suite::Borcherds => Case::Borcherds(a, b, c, m, n, k),
                Suite::Skew => Case::Skew(a, b, (-mb..=mb).collect()),
                Suite::Commutator => Case::Commutator(a, b, c, m, n),
                Suite::TDerivation => Case::TDerivation(a, b, n),
                Suite::Dong => Case::Dong(a, b, c, n),
                _ => Case::Conformal(a, b, c),
            }
        })
        .collect()
}

fn run_case(
    v: &VertexAlgebra,
    case: &Case,
    cfg: &VerifyConfig,
) -> Result<Vec<IdentityReport>, VertexError> {
    Ok(match case {
        Case::Borcherds(a, b, c, m, n, k) => {
            vec![check_borcherds(v, a, b, c, *m, *n, *k, cfg.depth_budget)?]
        }
        Case::Skew(a, b, ns) => vec![check_skew(v, a, b, ns)?],
        Case::Commutator(a, b, c, m, n) => vec![check_commutator(v, a, b, c, *m, *n)?],
        Case::TDerivation(a, b, n) => vec![t_derivation_check(v, a, b, *n)?],
        Case::Dong(a, b, c, n) => {
            let probes = v.probes(1);
            let w = Window::new(-cfg.dong_window, cfg.dong_window)?;
            vec![check_dong(v, a, b, c, *n, &probes, cfg.dong_nmax, w)?]
        }
        Case::Conformal(a, b, c) => check_conformal_axioms(v, a, b, c)?,
    })
}

fn identity_suite(v: &VertexAlgebra, suite: Suite, cfg: &VerifyConfig) -> Result<SuiteReport, VertexError> {
    let cases = draw_cases(v, suite, cfg);
    let results: Vec<Result<Vec<IdentityReport>, VertexError>> = if cfg.parallel {
        cases.par_iter().map(|c| run_case(v, c, cfg)).collect()
    } else {
        cases.iter().map(|c| run_case(v, c, cfg)).collect()
    };
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    let mut summary = Summary::default();
    for r in &out {
        summary.add(r.verdict);
    }
    Ok(SuiteReport {
        suite,
        summary,
        cases: out,
        admissibility: None,
        radius: Vec::new(),
        skipped: Vec::new(),
    })
}

fn admissibility_suite(v: &VertexAlgebra, cfg: &VerifyConfig) -> SuiteReport {
    let fields = v.admissibility_witnesses(cfg.admissibility_k);
    let (probes, modes) = v.admissibility_probes(cfg.admissibility_k, cfg.admissibility_grade_cap);
    let entries = v.admissibility_probe(&fields, &probes, modes);
    let p = v.ctx().prime();
    let log_ratios: Vec<Option<Number>> = entries
        .iter()
        .map(|e| {
            let r = e.ratio.as_ref()?;
            let p = p?;
            Some(Number::ExponentScale {
                base: p,
                num: r.log_p(p)?,
                den: 1,
            })
        })
        .collect();
    let strictly_increasing = entries.windows(2).all(|w| match (&w[0].ratio, &w[1].ratio) {
        (Some(x), Some(y)) => x < y,
        _ => false,
    });
    let note = match v.admissibility_caveat() {
        Some(c) => format!("{c}; finite probes refute admissibility, never certify it"),
        None => "finite probes refute admissibility, never certify it".to_string(),
    };
    SuiteReport {
        suite: Suite::Admissibility,
        summary: Summary::default(),
        cases: Vec::new(),
        admissibility: Some(AdmissibilityTable {
            entries,
            log_ratios,
            strictly_increasing,
            note,
        }),
        radius: Vec::new(),
        skipped: Vec::new(),
    }
}

fn radius_suite(v: &VertexAlgebra, cfg: &VerifyConfig) -> Result<SuiteReport, VertexError> {
    let mut report = SuiteReport {
        suite: Suite::Radius,
        summary: Summary::default(),
        cases: Vec::new(),
        admissibility: None,
        radius: Vec::new(),
        skipped: Vec::new(),
    };
    if v.ctx().prime().is_none() {
        report
            .skipped
            .push(format!("radius needs a p-adic norm, not {}", v.ctx()));
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((Suite::Radius as u64 + 1) << 32));
    let basis = basis_upto(v, cfg.grade_cap.min(4));
    for _ in 0..cfg.radius_pairs {
        let a = random_state(v, &mut rng, &basis, 1, 0);
        let b = random_state(v, &mut rng, &basis, 1, 0);
        let entries = match radius_certificate(v, &a, &b) {
            Ok(e) => e,
            Err(crate::conformal::ConformalError::Vertex(e)) => return Err(e),
            Err(e) => {
                report.skipped.push(e.to_string());
                continue;
            }
        };
        for e in &entries {
            report
                .summary
                .add(if e.holds { Verdict::ExactZero } else { Verdict::Nonzero });
        }
        report.radius.push(RadiusCase {
            a: v.render(&a),
            b: v.render(&b),
            entries,
        });
    }
    Ok(report)
}

/// Runs `suites` in the given order. Case lists are drawn from the seed
/// before any case is evaluated, so the report does not depend on
/// scheduling.
pub fn run_verify(
    v: &VertexAlgebra,
    suites: &[Suite],
    cfg: &VerifyConfig,
) -> Result<VerifyReport, VertexError> {
    let mut reports = Vec::new();
    for &s in suites {
        reports.push(match s {
            Suite::Admissibility => admissibility_suite(v, cfg),
            Suite::Radius => radius_suite(v, cfg)?,
            _ => identity_suite(v, s, cfg)?,
        });
    }
    let mut summary = Summary::default();
    let mut inconclusive = Vec::new();
    for r in &reports {
        summary.absorb(&r.summary);
        for (i, c) in r.cases.iter().enumerate() {
            if c.verdict == Verdict::Inconclusive {
                inconclusive.push(format!("{}:{i}", r.suite));
            }
        }
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        algebra: v.name(),
        norm: v.ctx().to_string(),
        ring: v.ring().to_string(),
        seed: cfg.seed,
        suites: reports,
        summary,
        inconclusive,
    })
}
