//! Potential structural complexity (P.S.C.) in the non-hierarchical context.
//!
//! The count-level closed forms are exact integer arithmetic; the uniform
//! laws are real-valued and returned unrounded. [`enumerate_psc_oracle`]
//! walks the maximally-connected graph node by node and is kept
//! independent of the closed forms so the two can be checked against each
//! other.

use crate::error::{invalid, EncapError, Result};
use crate::model::{FlatSystem, UniformSpec};

/// Default node cap for the explicit enumerators.
pub const DEFAULT_NODE_CAP: u64 = 2000;

/// Internal, external and total P.S.C. of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PscBreakdown {
    pub internal: u64,
    pub external: u64,
    pub total: u64,
}

impl PscBreakdown {
    fn new(internal: u64, external: u64) -> Self {
        Self {
            internal,
            external,
            total: internal + external,
        }
    }
}

/// First law: P.S.C. of `n` unencapsulated nodes, `n(n - 1)`.
pub fn psc_unencapsulated(n: u64) -> u64 {
    n * n.saturating_sub(1)
}

/// Internal P.S.C. of one region, `|K|(|K| - 1)`.
pub fn region_internal_psc(size: u64) -> u64 {
    psc_unencapsulated(size)
}

/// External P.S.C. of one region, `|K|(|h(G)| - |h(K)|)`.
pub fn region_external_psc(size: u64, h_total: u64, h_region: u64) -> Result<u64> {
    if h_region > h_total {
        return Err(invalid(format!(
            "region violation {h_region} exceeds system violation {h_total}"
        )));
    }
    if h_region > size {
        return Err(invalid(format!(
            "region violation {h_region} exceeds region size {size}"
        )));
    }
    Ok(size * (h_total - h_region))
}

/// Exact P.S.C. of an arbitrary flat system.
pub fn system_psc(sys: &FlatSystem) -> PscBreakdown {
    let h = sys.h();
    let (internal, external) = sys.non_empty().fold((0, 0), |(i, e), g| {
        (
            i + region_internal_psc(g.size()),
            e + g.size() * (h - g.violating),
        )
    });
    PscBreakdown::new(internal, external)
}

/// Counts the edges of the maximally-connected graph by visiting every
/// node: each node links to every other node of its own region and to
/// every violating node of every other region.
pub fn enumerate_psc_oracle(sys: &FlatSystem) -> Result<u64> {
    enumerate_psc_oracle_with_cap(sys, DEFAULT_NODE_CAP)
}

pub fn enumerate_psc_oracle_with_cap(sys: &FlatSystem, cap: u64) -> Result<u64> {
    let n = sys.n();
    if n > cap {
        return Err(EncapError::CapExceeded {
            what: "enumeration node count",
            size: n,
            cap,
        });
    }
    // node ids grouped per region; violating nodes listed separately with
    // their owning region
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(sys.regions().len());
    let mut violating: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize;
    for (ri, g) in sys.regions().iter().enumerate() {
        let ids: Vec<usize> = (next..next + g.size() as usize).collect();
        for &id in ids.iter().take(g.violating as usize) {
            violating.push((ri, id));
        }
        next += ids.len();
        members.push(ids);
    }

    let mut edges = 0u64;
    for (ri, ids) in members.iter().enumerate() {
        for &tail in ids {
            edges += ids.iter().filter(|&&head| head != tail).count() as u64;
            edges += violating
                .iter()
                .filter(|&&(owner, _)| owner != ri)
                .count() as u64;
        }
    }
    Ok(edges)
}

/// P.S.C. of a uniformly distributed graph, `n(n/r - 1 + (r - 1)p)`.
pub fn uniform_psc(spec: &UniformSpec) -> f64 {
    let UniformSpec { n, r, p } = *spec;
    n * (n / r - 1.0 + (r - 1.0) * p)
}

/// Convenience wrapper validating the triple first.
pub fn uniform_psc_of(n: f64, r: f64, p: f64) -> Result<f64> {
    Ok(uniform_psc(&UniformSpec::new(n, r, p)?))
}

fn law_args(n: u64, p: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if !p.is_finite() || p < 0.0 {
        return Err(invalid(format!("p must be a non-negative real, got {p}")));
    }
    if p == 0.0 {
        return Err(EncapError::Undefined(
            "the laws are undefined for zero violation per region".into(),
        ));
    }
    Ok((n as f64, p))
}

/// Second law: region count minimising uniform P.S.C., `sqrt(n/p)`.
pub fn r_min(n: u64, p: f64) -> Result<f64> {
    let (n, p) = law_args(n, p)?;
    Ok((n / p).sqrt())
}

/// Third law: region count at which uniform P.S.C. climbs back to the
/// unencapsulated value, `n/p`.
pub fn r_h(n: u64, p: f64) -> Result<f64> {
    let (n, p) = law_args(n, p)?;
    Ok(n / p)
}

/// Minimum uniform P.S.C. over real `r`, `n(2 sqrt(np) - 1 - p)`.
pub fn s_min(n: u64, p: f64) -> Result<f64> {
    let (n, p) = law_args(n, p)?;
    Ok(n * (2.0 * (n * p).sqrt() - 1.0 - p))
}

/// Region size at the P.S.C. minimum, `sqrt(np)`.
pub fn optimal_region_size(n: u64, p: f64) -> Result<f64> {
    let (n, p) = law_args(n, p)?;
    Ok((n * p).sqrt())
}

/// Violation per region that makes `region_size` optimal, `|K|^2 / n`.
pub fn required_violation_for_size(region_size: f64, n: u64) -> Result<f64> {
    if !(region_size >= 1.0) {
        return Err(invalid(format!("region size must be >= 1, got {region_size}")));
    }
    if (n as f64) < region_size {
        return Err(invalid(format!(
            "region size {region_size} exceeds node count {n}"
        )));
    }
    Ok(region_size * region_size / n as f64)
}

/// Integer region count recommended by the second law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recommendation {
    pub r: u64,
    pub psc: f64,
}

/// Evaluates uniform P.S.C. at `floor(r_min)` and `ceil(r_min)` and keeps
/// the smaller value; exact ties go to the smaller `r`.
pub fn recommend_regions(n: u64, p: f64) -> Result<Recommendation> {
    let raw = r_min(n, p)?;
    let lo = (raw.floor() as u64).max(1);
    let hi = (raw.ceil() as u64).max(1);
    let eval = |r: u64| uniform_psc_of(n as f64, r as f64, p).map(|psc| Recommendation { r, psc });
    let a = eval(lo)?;
    if hi == lo {
        return Ok(a);
    }
    let b = eval(hi)?;
    Ok(if b.psc < a.psc { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RegionCounts;

    fn flat(pairs: &[(i64, i64)]) -> FlatSystem {
        FlatSystem::from_counts(pairs).unwrap()
    }

    #[test]
    fn first_law() {
        assert_eq!(psc_unencapsulated(4), 12);
        assert_eq!(psc_unencapsulated(1), 0);
        assert_eq!(psc_unencapsulated(0), 0);
        assert_eq!(psc_unencapsulated(12), 132);
    }

    #[test]
    fn region_terms() {
        assert_eq!(region_internal_psc(6), 30);
        assert_eq!(region_internal_psc(0), 0);
        assert_eq!(region_internal_psc(45), 1980);
        assert_eq!(region_external_psc(45, 62, 12).unwrap(), 2250);
        assert_eq!(region_external_psc(7, 3, 3).unwrap(), 0);
        assert_eq!(region_external_psc(3, 2, 1).unwrap(), 3);
        assert!(region_external_psc(3, 1, 2).is_err());
        assert!(region_external_psc(1, 5, 2).is_err());
    }

    #[test]
    fn system_values() {
        assert_eq!(system_psc(&flat(&[(2, 1), (0, 1)])).total, 10);
        assert_eq!(system_psc(&flat(&[(1, 1), (1, 1)])).total, 8);
        let t1 = system_psc(&flat(&[(33, 12), (5, 50)]));
        assert_eq!(t1, PscBreakdown { internal: 1980 + 2970, external: 2250 + 660, total: 7860 });
    }

    #[test]
    fn oracle_values() {
        assert_eq!(enumerate_psc_oracle(&flat(&[(3, 1)])).unwrap(), 12);
        assert_eq!(enumerate_psc_oracle(&flat(&[(0, 1)])).unwrap(), 0);
        assert_eq!(enumerate_psc_oracle(&flat(&[(33, 12), (5, 50)])).unwrap(), 7860);
    }

    #[test]
    fn oracle_respects_cap() {
        let big = FlatSystem::new(vec![RegionCounts::new(2000, 1)]);
        let err = enumerate_psc_oracle(&big).unwrap_err();
        assert!(matches!(err, EncapError::CapExceeded { size: 2001, cap: 2000, .. }));
        assert!(enumerate_psc_oracle_with_cap(&big, 3000).is_ok());
    }

    #[test]
    fn uniform_values() {
        assert_eq!(uniform_psc_of(12.0, 2.0, 1.0).unwrap(), 72.0);
        assert_eq!(uniform_psc_of(12.0, 3.0, 1.0).unwrap(), 60.0);
        assert_eq!(uniform_psc_of(100.0, 10.0, 1.0).unwrap(), 1800.0);
        assert!(uniform_psc_of(12.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn laws() {
        assert!((r_min(12, 1.0).unwrap() - 3.4641).abs() < 1e-4);
        assert!((r_min(100, 2.0).unwrap() - 50f64.sqrt()).abs() < 1e-12);
        assert_eq!(r_min(1, 1.0).unwrap(), 1.0);
        assert!(matches!(r_min(12, 0.0), Err(EncapError::Undefined(_))));

        assert_eq!(r_h(12, 1.0).unwrap(), 12.0);
        assert_eq!(r_h(100, 1.0).unwrap(), 100.0);
        assert_eq!(uniform_psc_of(100.0, 100.0, 1.0).unwrap(), 9900.0);

        assert_eq!(s_min(100, 1.0).unwrap(), 1800.0);
        assert!((s_min(100, 31.0).unwrap() - 7935.5).abs() < 0.1);
        assert_eq!(s_min(1, 1.0).unwrap(), 0.0);

        assert_eq!(optimal_region_size(100, 1.0).unwrap(), 10.0);
        assert_eq!(optimal_region_size(100, 4.0).unwrap(), 20.0);
        assert_eq!(optimal_region_size(1, 1.0).unwrap(), 1.0);

        assert_eq!(required_violation_for_size(10.0, 100).unwrap(), 1.0);
        assert_eq!(required_violation_for_size(7.0, 7).unwrap(), 7.0);
        assert!((required_violation_for_size(56.0, 100).unwrap() - 31.36).abs() < 1e-9);
        assert!(required_violation_for_size(0.5, 100).is_err());
        assert!(required_violation_for_size(20.0, 10).is_err());
    }

    #[test]
    fn recommendation_breaks_ties_low() {
        let rec = recommend_regions(20, 1.0).unwrap();
        assert_eq!(rec.r, 4);
        assert_eq!(rec.psc, 140.0);
        assert_eq!(recommend_regions(100, 2.0).unwrap().r, 7);
        assert_eq!(recommend_regions(1, 1.0).unwrap().r, 1);
    }
}
