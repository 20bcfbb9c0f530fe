//! The TOML run configuration and algebra construction.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use verdex_core::algebras::{
    affine, commutative_power_series, diagonal, free_boson, free_boson_t, free_fermion, virasoro,
    LieData,
};
use verdex_core::verify::{Suite, VerifyConfig};
use verdex_core::{NormCtx, Scalar, ScalarRing, VertexAlgebra};

/// A scalar written either as a TOML integer or as a string like `"1/2"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl ScalarText {
    pub fn value(&self) -> Result<Scalar> {
        match self {
            ScalarText::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarText::Text(s) => s
                .parse()
                .map_err(|e| anyhow!("bad scalar `{s}`: {e}")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub kind: String,
    pub central_charge: Option<ScalarText>,
    pub level: Option<ScalarText>,
    pub lie: Option<String>,
    pub radius: Option<ScalarText>,
    pub truncation: Option<u32>,
    pub p: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarSpec {
    pub ring: Option<String>,
    pub norm: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub grade_cap: Option<u32>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    algebra: AlgebraSpec,
    #[serde(default)]
    scalars: ScalarSpec,
    #[serde(default)]
    probes: ProbeSpec,
    #[serde(default)]
    verify: Option<toml::Table>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algebra: AlgebraSpec,
    pub ctx: NormCtx,
    pub ring: ScalarRing,
    pub suites: Vec<Suite>,
    pub verify: VerifyConfig,
    base_dir: PathBuf,
}

fn parse_suites(items: &[toml::Value]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for item in items {
        let s = item
            .as_str()
            .ok_or_else(|| anyhow!("suite names must be strings, got {item}"))?;
        if s == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(s.parse().map_err(|e: String| anyhow!(e))?);
        }
    }
    out.dedup();
    Ok(out)
}

pub fn expand_suites(names: &[String]) -> Result<Vec<Suite>> {
    let values: Vec<toml::Value> = names.iter().map(|s| toml::Value::String(s.clone())).collect();
    parse_suites(&values)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        RunConfig::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: PathBuf) -> Result<RunConfig> {
        let raw: RawConfig = toml::from_str(text).context("invalid configuration")?;
        let ctx = match &raw.scalars.norm {
            Some(n) => n.parse().map_err(|e| anyhow!("bad norm `{n}`: {e}"))?,
            None => NormCtx::Trivial,
        };
        let ring = match &raw.scalars.ring {
            Some(r) => r.parse().map_err(|e| anyhow!("bad ring `{r}`: {e}"))?,
            None => ScalarRing::Rationals,
        };
        let mut suites = Vec::new();
        let mut verify = VerifyConfig::default();
        if let Some(mut table) = raw.verify {
            if let Some(v) = table.remove("suites") {
                let items = v
                    .as_array()
                    .ok_or_else(|| anyhow!("verify.suites must be an array"))?;
                suites = parse_suites(items)?;
            }
            verify = toml::Value::Table(table)
                .try_into()
                .context("invalid [verify] section")?;
        }
        if let Some(g) = raw.probes.grade_cap {
            verify.grade_cap = g;
        }
        if let Some(c) = raw.probes.count {
            verify.cases = c;
        }
        if let Some(s) = raw.probes.seed {
            verify.seed = s;
        }
        if verify.depth_budget <= 0 || verify.dong_nmax == 0 || verify.max_terms == 0 {
            bail!("budgets must be positive");
        }
        Ok(RunConfig {
            algebra: raw.algebra,
            ctx,
            ring,
            suites,
            verify,
            base_dir,
        })
    }

    fn lie_data(&self) -> Result<LieData> {
        let name = self.algebra.lie.as_deref().unwrap_or("abelian");
        Ok(match name {
            "abelian" | "abelian-1" => LieData::abelian_rank1(),
            "sl2" => LieData::sl2(),
            path => {
                let p = self.base_dir.join(path);
                let text = std::fs::read_to_string(&p)
                    .with_context(|| format!("cannot read Lie data {}", p.display()))?;
                LieData::from_toml(&text)?
            }
        })
    }

    pub fn build(&self) -> Result<VertexAlgebra> {
        let a = &self.algebra;
        let ctx = self.ctx;
        let widen = |v: VertexAlgebra| -> Result<VertexAlgebra> {
            if v.ring() == &self.ring {
                Ok(v)
            } else {
                Ok(v.base_change(self.ring.clone())?)
            }
        };
        let v = match a.kind.as_str() {
            "boson" => widen(free_boson(ctx)?)?,
            "boson-t" => widen(free_boson_t(ctx)?)?,
            "fermion" => widen(free_fermion(ctx)?)?,
            "virasoro" => {
                let v = virasoro(ctx, self.ring.clone())?;
                match &a.central_charge {
                    Some(c) => v.central_quotient(&c.value()?)?,
                    None => v,
                }
            }
            "affine" => {
                let v = affine(self.lie_data()?, ctx, self.ring.clone())?;
                match &a.level {
                    Some(k) => v.central_quotient(&k.value()?)?,
                    None => v,
                }
            }
            "power-series" => {
                let r = a
                    .radius
                    .as_ref()
                    .map(ScalarText::value)
                    .transpose()?
                    .unwrap_or_else(Scalar::one);
                commutative_power_series(r, a.truncation.unwrap_or(8), ctx)?
            }
            "diagonal" => {
                let p = a
                    .p
                    .or_else(|| ctx.prime())
                    .ok_or_else(|| anyhow!("the diagonal algebra needs a prime `p`"))?;
                diagonal(p, a.truncation.unwrap_or(8))?
            }
            other => bail!(
                "unknown algebra kind `{other}` (expected boson, boson-t, fermion, virasoro, affine, power-series or diagonal)"
            ),
        };
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, PathBuf::new())
    }

    #[test]
    fn defaults_and_overrides() {
        let c = cfg("[algebra]\nkind = \"boson\"\n[probes]\ncount = 7\nseed = 9\n").unwrap();
        assert_eq!(c.ctx, NormCtx::Trivial);
        assert_eq!(c.ring, ScalarRing::Rationals);
        assert_eq!(c.verify.cases, 7);
        assert_eq!(c.verify.seed, 9);
        assert!(c.suites.is_empty());
    }

    #[test]
    fn suites_and_verify_keys() {
        let c = cfg(
            "[algebra]\nkind = \"boson\"\n[verify]\nsuites = [\"skew\", \"tderiv\"]\ndepth_budget = 10\n",
        )
        .unwrap();
        assert_eq!(c.suites, vec![Suite::Skew, Suite::TDerivation]);
        assert_eq!(c.verify.depth_budget, 10);
        let all = cfg("[algebra]\nkind = \"boson\"\n[verify]\nsuites = [\"all\"]\n").unwrap();
        assert_eq!(all.suites.len(), Suite::ALL.len());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(cfg("[algebra]\nkind = \"boson\"\ncolour = 1\n").is_err());
        assert!(cfg("[algebra]\nkind = \"boson\"\n[verify]\nsuites = [\"nope\"]\n").is_err());
        assert!(cfg("[algebra]\nkind = \"boson\"\n[verify]\ndepth_budget = 0\n").is_err());
        assert!(cfg("[algebra]\nkind = \"boson\"\n[scalars]\nnorm = \"4-adic\"\n").is_err());
        let c = cfg("[algebra]\nkind = \"virasoro\"\n[scalars]\nring = \"Z\"\n").unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn builds_quotients() {
        let c = cfg("[algebra]\nkind = \"virasoro\"\ncentral_charge = \"1/2\"\n").unwrap();
        let v = c.build().unwrap();
        assert_eq!(v.name(), "virasoro(c=1/2)");
        let a = cfg("[algebra]\nkind = \"affine\"\nlie = \"sl2\"\nlevel = 1\n").unwrap();
        assert!(a.build().is_ok());
    }
}
