//! Concrete vertex algebras with exact generator modes.

pub mod affine;
pub mod boson;
pub mod commutative;
pub mod diagonal;
pub mod fermion;
pub mod virasoro;

use std::sync::Arc;

use thiserror::Error;

use crate::scalars::{NormCtx, Scalar, ScalarRing};
use crate::vertex::{VertexAlgebra, VertexError};

pub use affine::{AffineAlgebra, LieData, LieDataError};
pub use boson::{boson_to_transposed, FreeBoson, FreeBosonT};
pub use commutative::PowerSeriesAlgebra;
pub use diagonal::DiagonalAlgebra;
pub use fermion::FreeFermion;
pub use virasoro::Virasoro;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{what} requires {n} to be invertible in the scalar ring {ring}")]
    NotInvertible { what: String, n: u64, ring: String },
    #[error(transparent)]
    Lie(#[from] LieDataError),
    #[error(transparent)]
    Vertex(#[from] VertexError),
    #[error("{0}")]
    Invalid(String),
}

/// Splits `a^2*b*c^3` into `[(a, 2), (b, 1), (c, 3)]`.
pub(crate) fn parse_factors(s: &str) -> Option<Vec<(String, u32)>> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    for f in s.split('*') {
        let f = f.trim();
        if f.is_empty() {
            return None;
        }
        let (base, k) = match f.rsplit_once('^') {
            Some((b, k)) if !b.ends_with('[') => (b.trim(), k.trim().parse().ok()?),
            _ => (f, 1),
        };
        out.push((base.to_string(), k));
    }
    Some(out)
}

pub fn free_boson(ctx: NormCtx) -> Result<VertexAlgebra, AlgebraError> {
    Ok(VertexAlgebra::new(Arc::new(FreeBoson), ctx, ScalarRing::integers())?)
}

pub fn free_boson_t(ctx: NormCtx) -> Result<VertexAlgebra, AlgebraError> {
    Ok(VertexAlgebra::new(Arc::new(FreeBosonT), ctx, ScalarRing::integers())?)
}

pub fn free_fermion(ctx: NormCtx) -> Result<VertexAlgebra, AlgebraError> {
    Ok(VertexAlgebra::new(Arc::new(FreeFermion), ctx, ScalarRing::integers())?)
}

/// The universal Virasoro vertex algebra; 2 must be a unit of `ring`.
pub fn virasoro(ctx: NormCtx, ring: ScalarRing) -> Result<VertexAlgebra, AlgebraError> {
    if !ring.is_unit(2) {
        return Err(AlgebraError::NotInvertible {
            what: "the Virasoro algebra".into(),
            n: 2,
            ring: ring.to_string(),
        });
    }
    Ok(VertexAlgebra::new(Arc::new(Virasoro::new(None)), ctx, ring)?)
}

/// The universal affine vertex algebra of `g`; the denominator `N` of `g`
/// must be a unit of `ring`.
pub fn affine(g: LieData, ctx: NormCtx, ring: ScalarRing) -> Result<VertexAlgebra, AlgebraError> {
    g.validate()?;
    if !ring.is_unit(g.invert) {
        return Err(AlgebraError::NotInvertible {
            what: format!("the affine algebra of {}", g.name),
            n: g.invert,
            ring: ring.to_string(),
        });
    }
    for c in g.all_constants() {
        if !ring.contains(&c) {
            return Err(AlgebraError::Invalid(format!(
                "structure constant {c} does not lie in {ring}"
            )));
        }
    }
    Ok(VertexAlgebra::new(Arc::new(AffineAlgebra::new(g, None)), ctx, ring)?)
}

/// `K{r^{-1} t}` with states truncated at degree `truncation` for probes.
pub fn commutative_power_series(
    r: Scalar,
    truncation: u32,
    ctx: NormCtx,
) -> Result<VertexAlgebra, AlgebraError> {
    if r.is_zero() || r.is_negative() {
        return Err(AlgebraError::Invalid(format!("radius {r} must be positive")));
    }
    Ok(VertexAlgebra::new(
        Arc::new(PowerSeriesAlgebra::new(r, truncation)),
        ctx,
        ScalarRing::Rationals,
    )?)
}

/// The diagonal-operator algebra on `Q_p{x}` truncated at degree `truncation`.
pub fn diagonal(p: u64, truncation: u32) -> Result<VertexAlgebra, AlgebraError> {
    let ctx = NormCtx::padic(p).map_err(|e| AlgebraError::Invalid(e.to_string()))?;
    Ok(VertexAlgebra::new(
        Arc::new(DiagonalAlgebra::new(p, truncation)),
        ctx,
        ScalarRing::Rationals,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        assert_eq!(
            parse_factors("x1^2*x3").unwrap(),
            vec![("x1".to_string(), 2), ("x3".to_string(), 1)]
        );
        assert_eq!(
            parse_factors("L[-2]^3").unwrap(),
            vec![("L[-2]".to_string(), 3)]
        );
        assert!(parse_factors("x1**x2").is_none());
    }
}
