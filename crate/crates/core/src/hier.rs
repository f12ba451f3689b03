//! Relative information hiding: layered (1-D) and recursive-hierarchy (2-D)
//! contexts.
//!
//! The enumerators are authoritative. Each builds the explicit list of
//! heads a node may reach and counts them; the closed forms are checked
//! against the enumerators in tests.
//!
//! Layered rule: a node in layer `l` (0 = bottom) reaches every other node
//! of its own subsystem and the violating nodes of every other subsystem in
//! layers `max(0, l - d) ..= l`.
//!
//! Hierarchy rule: dependencies may not form towards children. A node in
//! subsystem `S` reaches the violating nodes of the ancestors of `S`, the
//! siblings of `S`, and the siblings of every ancestor.

use std::collections::BTreeSet;

use crate::error::{invalid, EncapError, Result};
use crate::model::{HierTree, LayeredSystem, RegionCounts};
use crate::psc::DEFAULT_NODE_CAP;

/// Parameters of a uniform layered system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredUniformSpec {
    pub n: f64,
    pub r: f64,
    pub layers: f64,
    pub per_layer: f64,
    pub penetration: f64,
    pub p: f64,
}

impl LayeredUniformSpec {
    pub fn new(n: f64, r: f64, layers: f64, per_layer: f64, penetration: f64, p: f64) -> Result<Self> {
        if !(n >= 1.0 && r >= 1.0 && layers >= 1.0 && per_layer >= 1.0 && p >= 0.0) {
            return Err(invalid("layered spec needs n, r, L, r_L >= 1 and p >= 0"));
        }
        if (layers * per_layer - r).abs() > 1e-9 {
            return Err(invalid(format!("r = {r} is not L * r_L = {layers} * {per_layer}")));
        }
        if !(0.0..=layers - 1.0).contains(&penetration) {
            return Err(invalid(format!(
                "penetration {penetration} outside 0..={}",
                layers - 1.0
            )));
        }
        Ok(Self {
            n,
            r,
            layers,
            per_layer,
            penetration,
            p,
        })
    }
}

/// Parameters of a uniform full `b`-ary hierarchy of depth `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierUniformSpec {
    pub n: f64,
    pub r: f64,
    pub k: u32,
    pub b: u32,
    pub p: f64,
}

impl HierUniformSpec {
    pub fn new(n: f64, k: u32, b: u32, p: f64) -> Result<Self> {
        if !(n >= 1.0 && p >= 0.0) || b == 0 {
            return Err(invalid("hierarchy spec needs n >= 1, b >= 1 and p >= 0"));
        }
        let r = full_tree_size(b as u64, k) as f64;
        Ok(Self { n, r, k, b, p })
    }
}

/// Subsystem count of a full `b`-ary tree of depth `k`.
pub fn full_tree_size(b: u64, k: u32) -> u64 {
    (0..=k).map(|i| b.pow(i)).sum()
}

/// Counts formable edges given, for each subsystem, its counts and the
/// subsystems whose violating nodes it may reach.
fn count_edges(subsystems: &[RegionCounts], visible: &[Vec<usize>]) -> u64 {
    // every node gets an explicit id; violating ids per subsystem
    let mut start = Vec::with_capacity(subsystems.len());
    let mut next = 0u64;
    for s in subsystems {
        start.push(next);
        next += s.size();
    }
    let heads_of = |j: usize| start[j]..start[j] + subsystems[j].violating;

    let mut edges = 0u64;
    for (i, s) in subsystems.iter().enumerate() {
        let own = start[i]..start[i] + s.size();
        let external: Vec<u64> = visible[i].iter().flat_map(|&j| heads_of(j)).collect();
        for tail in own.clone() {
            edges += own.clone().filter(|&head| head != tail).count() as u64;
            edges += external.len() as u64;
        }
    }
    edges
}

fn check_cap(n: u64, cap: u64) -> Result<()> {
    if n > cap {
        return Err(EncapError::CapExceeded {
            what: "enumeration node count",
            size: n,
            cap,
        });
    }
    Ok(())
}

/// P.S.C. of a layered system by enumeration.
pub fn layered_psc_enumerated(sys: &LayeredSystem) -> Result<u64> {
    layered_psc_enumerated_with_cap(sys, DEFAULT_NODE_CAP)
}

pub fn layered_psc_enumerated_with_cap(sys: &LayeredSystem, cap: u64) -> Result<u64> {
    check_cap(sys.n(), cap)?;
    let d = sys.penetration();
    let mut subsystems = Vec::new();
    let mut layer_of = Vec::new();
    for (l, layer) in sys.layers().iter().enumerate() {
        for s in layer {
            subsystems.push(*s);
            layer_of.push(l);
        }
    }
    let visible: Vec<Vec<usize>> = (0..subsystems.len())
        .map(|i| {
            let l = layer_of[i];
            (0..subsystems.len())
                .filter(|&j| j != i && layer_of[j] <= l && layer_of[j] + d >= l)
                .collect()
        })
        .collect();
    Ok(count_edges(&subsystems, &visible))
}

/// Closed form for a uniform layered system:
/// `n(n/r - 1) + (r_L^2 (d + 1)(L - d/2) - r) p n / r`.
pub fn layered_psc_formula(spec: &LayeredUniformSpec) -> f64 {
    let LayeredUniformSpec {
        n,
        r,
        layers,
        per_layer,
        penetration: d,
        p,
    } = *spec;
    n * (n / r - 1.0) + (per_layer * per_layer * (d + 1.0) * (layers - d / 2.0) - r) * p * n / r
}

/// Subsystems visible from `id` under the no-dependencies-towards-children
/// rule, excluding `id` itself.
pub fn visible_subsystems(tree: &HierTree, id: usize) -> Result<BTreeSet<usize>> {
    let mut seen = BTreeSet::new();
    let mut cur = id;
    tree.node(cur)?;
    while let Some(parent) = tree.node(cur)?.parent {
        seen.insert(parent);
        seen.extend(
            tree.node(parent)?
                .children
                .iter()
                .copied()
                .filter(|&c| c != cur),
        );
        cur = parent;
    }
    Ok(seen)
}

/// P.S.C. of a two-dimensional hierarchy by enumeration.
pub fn hier_psc_enumerated(tree: &HierTree) -> Result<u64> {
    hier_psc_enumerated_with_cap(tree, DEFAULT_NODE_CAP)
}

pub fn hier_psc_enumerated_with_cap(tree: &HierTree, cap: u64) -> Result<u64> {
    check_cap(tree.n(), cap)?;
    let subsystems: Vec<RegionCounts> = tree.nodes().iter().map(|s| s.counts).collect();
    let visible = (0..tree.len())
        .map(|i| visible_subsystems(tree, i).map(|set| set.into_iter().collect()))
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok(count_edges(&subsystems, &visible))
}

/// Closed form for a full hierarchy:
/// `n(n/r - 1) + p * sum_{i=1..k} i b^(i+1)`.
pub fn hier_psc_formula(spec: &HierUniformSpec) -> f64 {
    let HierUniformSpec { n, r, k, b, p } = *spec;
    let b = b as f64;
    let sum: f64 = (1..=k).map(|i| i as f64 * b.powi(i as i32 + 1)).sum();
    n * (n / r - 1.0) + p * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FlatSystem;
    use crate::psc::system_psc;

    fn rc(h: u64, v: u64) -> RegionCounts {
        RegionCounts::new(h, v)
    }

    #[test]
    fn single_layer_is_flat() {
        let layer = vec![rc(2, 1), rc(0, 1), rc(4, 3)];
        let sys = LayeredSystem::new(vec![layer.clone()], Some(0)).unwrap();
        let flat = FlatSystem::new(layer);
        assert_eq!(layered_psc_enumerated(&sys).unwrap(), system_psc(&flat).total);
    }

    #[test]
    fn two_stacked_units() {
        let sys = LayeredSystem::new(vec![vec![rc(0, 1)], vec![rc(0, 1)]], Some(1)).unwrap();
        assert_eq!(layered_psc_enumerated(&sys).unwrap(), 1);
        let blind = LayeredSystem::new(vec![vec![rc(0, 1)], vec![rc(0, 1)]], Some(0)).unwrap();
        assert_eq!(layered_psc_enumerated(&blind).unwrap(), 0);
    }

    #[test]
    fn penetration_bounds() {
        assert!(LayeredSystem::new(vec![vec![rc(0, 1)]; 2], Some(2)).is_err());
        assert!(LayeredUniformSpec::new(12.0, 12.0, 3.0, 4.0, 3.0, 1.0).is_err());
        assert!(LayeredUniformSpec::new(12.0, 11.0, 3.0, 4.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn layered_formula_matches_enumeration_at_twelve() {
        let spec = LayeredUniformSpec::new(12.0, 12.0, 3.0, 4.0, 2.0, 1.0).unwrap();
        let sys = LayeredSystem::uniform(3, 4, 1, 1, Some(2)).unwrap();
        let enumerated = layered_psc_enumerated(&sys).unwrap();
        // hand count: bottom layer sees 3, middle 7, top 11, four units each
        assert_eq!(enumerated, 4 * 3 + 4 * 7 + 4 * 11);
        assert_eq!(layered_psc_formula(&spec), enumerated as f64);
    }

    #[test]
    fn chain_without_penetration_is_silent() {
        for n in 1..=10u64 {
            let spec = LayeredUniformSpec::new(n as f64, n as f64, n as f64, 1.0, 0.0, 1.0).unwrap();
            assert_eq!(layered_psc_formula(&spec), 0.0);
        }
    }

    #[test]
    fn visibility_sets() {
        let t = HierTree::full(3, 3, rc(0, 1));
        assert!(visible_subsystems(&t, 0).unwrap().is_empty());
        let leaf = t.len() - 1;
        assert_eq!(visible_subsystems(&t, leaf).unwrap().len(), 9);

        let t2 = HierTree::full(2, 2, rc(0, 1));
        assert_eq!(visible_subsystems(&t2, t2.len() - 1).unwrap().len(), 4);
        assert!(matches!(visible_subsystems(&t2, 99), Err(EncapError::UnknownSubsystem(99))));
    }

    #[test]
    fn hier_small_cases() {
        assert_eq!(hier_psc_enumerated(&HierTree::single(rc(3, 2))).unwrap(), 20);
        let mut t = HierTree::single(rc(0, 1));
        t.add_child(0, rc(0, 1)).unwrap();
        assert_eq!(hier_psc_enumerated(&t).unwrap(), 1);
    }

    #[test]
    fn hier_formula_at_one_node_per_subsystem() {
        let spec = HierUniformSpec::new(7.0, 2, 2, 1.0).unwrap();
        assert_eq!(spec.r, 7.0);
        assert_eq!(hier_psc_formula(&spec), 20.0);
        let t = HierTree::full(2, 2, rc(0, 1));
        assert_eq!(hier_psc_enumerated(&t).unwrap(), 20);

        let root_only = HierUniformSpec::new(9.0, 0, 3, 1.0).unwrap();
        assert_eq!(hier_psc_formula(&root_only), 72.0);
    }
}
