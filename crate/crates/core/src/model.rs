//! Encapsulated-system data types for the three encapsulation contexts.
//!
//! Everything here is a plain count-level description: a region is just
//! the number of hidden nodes and the number of information-hiding
//! violating ("public") nodes it holds. Metric math lives in [`crate::psc`],
//! [`crate::hier`] and [`crate::metrics`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{invalid, EncapError, Result};

/// One encapsulated region: hidden and violating node counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RegionCounts {
    pub hidden: u64,
    pub violating: u64,
}

impl RegionCounts {
    pub const fn new(hidden: u64, violating: u64) -> Self {
        Self { hidden, violating }
    }

    /// Region of `size` nodes with `violating` of them public.
    pub fn with_size(size: u64, violating: u64) -> Result<Self> {
        if violating > size {
            return Err(invalid(format!(
                "violating count {violating} exceeds region size {size}"
            )));
        }
        Ok(Self::new(size - violating, violating))
    }

    pub const fn size(&self) -> u64 {
        self.hidden + self.violating
    }

    pub const fn is_empty(&self) -> bool {
        self.size() == 0
    }
}

/// Non-hierarchical encapsulated system: an ordered list of regions.
///
/// Empty regions are kept (so input order round-trips) but do not count
/// towards [`FlatSystem::r`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FlatSystem {
    regions: Vec<RegionCounts>,
}

impl FlatSystem {
    pub fn new(regions: Vec<RegionCounts>) -> Self {
        Self { regions }
    }

    /// Builds a system from signed `(hidden, violating)` pairs, rejecting
    /// negative counts.
    pub fn from_counts(pairs: &[(i64, i64)]) -> Result<Self> {
        let regions = pairs
            .iter()
            .enumerate()
            .map(|(i, &(hidden, violating))| {
                if hidden < 0 || violating < 0 {
                    return Err(invalid(format!(
                        "region {i}: counts must be non-negative, got ({hidden}, {violating})"
                    )));
                }
                Ok(RegionCounts::new(hidden as u64, violating as u64))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { regions })
    }

    /// Uniformly distributed system: `r` regions of `n / r` nodes, `p`
    /// violating nodes each.
    pub fn uniform(n: u64, r: u64, p: u64) -> Result<Self> {
        if r == 0 {
            return Err(invalid("uniform system needs at least one region"));
        }
        if !n.is_multiple_of(r) {
            return Err(invalid(format!("{r} regions do not divide {n} nodes")));
        }
        let size = n / r;
        let region = RegionCounts::with_size(size, p)?;
        Ok(Self {
            regions: vec![region; r as usize],
        })
    }

    pub fn regions(&self) -> &[RegionCounts] {
        &self.regions
    }

    /// Regions that hold at least one node.
    pub fn non_empty(&self) -> impl Iterator<Item = &RegionCounts> + '_ {
        self.regions.iter().filter(|g| !g.is_empty())
    }

    /// Order of the graph.
    pub fn n(&self) -> u64 {
        self.regions.iter().map(RegionCounts::size).sum()
    }

    /// Number of non-empty regions.
    pub fn r(&self) -> u64 {
        self.non_empty().count() as u64
    }

    /// Information-hiding violation of the whole graph.
    pub fn h(&self) -> u64 {
        self.regions.iter().map(|g| g.violating).sum()
    }

    /// Average violation per non-empty region, `None` when `r = 0`.
    pub fn p_bar(&self) -> Option<f64> {
        let r = self.r();
        (r > 0).then(|| self.h() as f64 / r as f64)
    }

    /// True when every non-empty region has the same size and the same
    /// violation count.
    pub fn is_uniform(&self) -> bool {
        let mut it = self.non_empty();
        match it.next() {
            None => true,
            Some(first) => it.all(|g| g == first),
        }
    }
}

impl FromIterator<RegionCounts> for FlatSystem {
    fn from_iter<I: IntoIterator<Item = RegionCounts>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// `(n, r, p)` triple for the uniform closed forms. `r` and `p` may be
/// real-valued (e.g. an averaged `p = h / r`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformSpec {
    pub n: f64,
    pub r: f64,
    pub p: f64,
}

impl UniformSpec {
    pub fn new(n: f64, r: f64, p: f64) -> Result<Self> {
        if !(n >= 1.0) || !n.is_finite() {
            return Err(invalid(format!("n must be >= 1, got {n}")));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(invalid(format!("r must be positive, got {r}")));
        }
        if !(p >= 0.0) || !p.is_finite() {
            return Err(invalid(format!("p must be >= 0, got {p}")));
        }
        Ok(Self { n, r, p })
    }

    /// Whether an integer uniform system with these parameters exists.
    pub fn is_realizable(&self) -> bool {
        let int = |x: f64| x.fract() == 0.0;
        if !(int(self.n) && int(self.r) && int(self.p)) || self.r < 1.0 {
            return false;
        }
        let (n, r, p) = (self.n as u64, self.r as u64, self.p as u64);
        n % r == 0 && p <= n / r
    }
}

/// One-dimensional layered system. `layers[0]` is the bottom layer.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayeredSystem {
    layers: Vec<Vec<RegionCounts>>,
    penetration: Option<usize>,
}

impl LayeredSystem {
    /// `penetration = None` means "all layers below" (`d = L - 1`).
    pub fn new(layers: Vec<Vec<RegionCounts>>, penetration: Option<usize>) -> Result<Self> {
        if let Some(d) = penetration {
            if !layers.is_empty() && d >= layers.len() {
                return Err(invalid(format!(
                    "penetration {d} must be below the layer count {}",
                    layers.len()
                )));
            }
        }
        Ok(Self {
            layers,
            penetration,
        })
    }

    /// `layers` layers of `per_layer` subsystems, each `nodes` nodes with
    /// `p` of them violating.
    pub fn uniform(
        layers: usize,
        per_layer: usize,
        nodes: u64,
        p: u64,
        penetration: Option<usize>,
    ) -> Result<Self> {
        let region = RegionCounts::with_size(nodes, p)?;
        Self::new(vec![vec![region; per_layer]; layers], penetration)
    }

    pub fn layers(&self) -> &[Vec<RegionCounts>] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Declared penetration, if any.
    pub fn declared_penetration(&self) -> Option<usize> {
        self.penetration
    }

    /// Effective penetration `d`.
    pub fn penetration(&self) -> usize {
        self.penetration
            .unwrap_or_else(|| self.layers.len().saturating_sub(1))
    }

    pub fn n(&self) -> u64 {
        self.layers.iter().flatten().map(RegionCounts::size).sum()
    }

    pub fn subsystem_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Every subsystem, ignoring layering.
    pub fn flatten(&self) -> FlatSystem {
        self.layers.iter().flatten().copied().collect()
    }
}

/// One subsystem of a [`HierTree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierNode {
    pub counts: RegionCounts,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// Two-dimensional recursive hierarchy of subsystems, stored as an arena.
/// Subsystem `0` is always the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierTree {
    nodes: Vec<HierNode>,
}

impl HierTree {
    pub fn single(counts: RegionCounts) -> Self {
        Self {
            nodes: vec![HierNode {
                counts,
                parent: None,
                children: Vec::new(),
                depth: 0,
            }],
        }
    }

    /// Appends a child under `parent` and returns its id.
    pub fn add_child(&mut self, parent: usize, counts: RegionCounts) -> Result<usize> {
        let depth = self
            .nodes
            .get(parent)
            .ok_or(EncapError::UnknownSubsystem(parent))?
            .depth
            + 1;
        let id = self.nodes.len();
        self.nodes.push(HierNode {
            counts,
            parent: Some(parent),
            children: Vec::new(),
            depth,
        });
        self.nodes[parent].children.push(id);
        Ok(id)
    }

    /// Builds a tree from `(counts, parent)` entries in arbitrary order.
    /// Exactly one entry must have no parent. Returned ids follow a
    /// breadth-first order from the root; the second value maps input
    /// index to tree id.
    pub fn from_parents(entries: &[(RegionCounts, Option<usize>)]) -> Result<(Self, Vec<usize>)> {
        let roots: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, (_, p))| p.is_none())
            .map(|(i, _)| i)
            .collect();
        let root = match roots.as_slice() {
            [root] => *root,
            [] => return Err(invalid("hierarchy has no root")),
            _ => return Err(invalid("hierarchy has more than one root")),
        };
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); entries.len()];
        for (i, (_, parent)) in entries.iter().enumerate() {
            if let Some(p) = *parent {
                if p >= entries.len() {
                    return Err(EncapError::UnknownSubsystem(p));
                }
                kids[p].push(i);
            }
        }
        let mut tree = Self::single(entries[root].0);
        let mut id_of = vec![usize::MAX; entries.len()];
        id_of[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for &c in &kids[i] {
                id_of[c] = tree.add_child(id_of[i], entries[c].0)?;
                queue.push_back(c);
            }
        }
        if id_of.contains(&usize::MAX) {
            return Err(invalid("hierarchy contains a cycle detached from the root"));
        }
        Ok((tree, id_of))
    }

    /// Full `b`-ary tree of depth `k`, every subsystem holding `counts`.
    pub fn full(b: usize, k: usize, counts: RegionCounts) -> Self {
        let mut tree = Self::single(counts);
        let mut frontier = vec![0];
        for _ in 0..k {
            let mut next = Vec::with_capacity(frontier.len() * b);
            for &parent in &frontier {
                for _ in 0..b {
                    next.push(tree.add_child(parent, counts).expect("parent exists"));
                }
            }
            frontier = next;
        }
        tree
    }

    /// Tree of `counts.len()` subsystems filled level by level with span
    /// `b`: subsystem `i > 0` is a child of `(i - 1) / b`.
    pub fn level_order(b: usize, counts: &[RegionCounts]) -> Result<Self> {
        if b == 0 {
            return Err(invalid("span-of-control must be at least 1"));
        }
        let (first, rest) = counts
            .split_first()
            .ok_or_else(|| invalid("a hierarchy needs at least one subsystem"))?;
        let mut tree = Self::single(*first);
        for (j, c) in rest.iter().enumerate() {
            let i = j + 1;
            tree.add_child((i - 1) / b, *c)?;
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> Result<&HierNode> {
        self.nodes.get(id).ok_or(EncapError::UnknownSubsystem(id))
    }

    pub fn nodes(&self) -> &[HierNode] {
        &self.nodes
    }

    /// Levels above the root.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|s| s.depth).max().unwrap_or(0)
    }

    /// Span-of-control of a subsystem.
    pub fn span(&self, id: usize) -> Result<usize> {
        Ok(self.node(id)?.children.len())
    }

    pub fn n(&self) -> u64 {
        self.nodes.iter().map(|s| s.counts.size()).sum()
    }

    pub fn flatten(&self) -> FlatSystem {
        self.nodes.iter().map(|s| s.counts).collect()
    }
}

/// Visibility of a named node extracted from source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Visibility {
    Public,
    Hidden,
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Visibility::Public => f.write_str("public"),
            Visibility::Hidden => f.write_str("hidden"),
        }
    }
}

/// Named regions holding named nodes, as produced by source scanning.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledCodebase {
    regions: BTreeMap<String, Vec<(String, Visibility)>>,
}

impl LabeledCodebase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ensures a region exists, possibly empty.
    pub fn touch_region(&mut self, region: &str) {
        self.regions.entry(region.to_owned()).or_default();
    }

    pub fn add(&mut self, region: &str, node: impl Into<String>, vis: Visibility) {
        self.regions
            .entry(region.to_owned())
            .or_default()
            .push((node.into(), vis));
    }

    /// Merges another codebase into this one.
    pub fn extend(&mut self, other: LabeledCodebase) {
        for (name, nodes) in other.regions {
            self.regions.entry(name).or_default().extend(nodes);
        }
    }

    pub fn regions(&self) -> &BTreeMap<String, Vec<(String, Visibility)>> {
        &self.regions
    }

    pub fn region_counts(&self, region: &str) -> Option<RegionCounts> {
        self.regions.get(region).map(|nodes| count(nodes))
    }

    /// Collapses to counts; regions appear in name order.
    pub fn to_flat(&self) -> FlatSystem {
        self.regions.values().map(|nodes| count(nodes)).collect()
    }
}

fn count(nodes: &[(String, Visibility)]) -> RegionCounts {
    let violating = nodes
        .iter()
        .filter(|(_, v)| *v == Visibility::Public)
        .count() as u64;
    RegionCounts::new(nodes.len() as u64 - violating, violating)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_counts_totals() {
        let sys = FlatSystem::from_counts(&[(2, 1), (0, 1)]).unwrap();
        assert_eq!((sys.n(), sys.r(), sys.h()), (4, 2, 2));

        let empty = FlatSystem::from_counts(&[]).unwrap();
        assert_eq!((empty.n(), empty.r(), empty.h()), (0, 0, 0));

        let table1 = FlatSystem::from_counts(&[(33, 12), (5, 50)]).unwrap();
        assert_eq!((table1.n(), table1.r(), table1.h()), (100, 2, 62));
    }

    #[test]
    fn from_counts_rejects_negative() {
        assert!(matches!(
            FlatSystem::from_counts(&[(1, 1), (-1, 0)]),
            Err(EncapError::Invalid(_))
        ));
    }

    #[test]
    fn empty_regions_do_not_count() {
        let sys = FlatSystem::from_counts(&[(3, 1), (0, 0)]).unwrap();
        assert_eq!(sys.r(), 1);
        assert_eq!(sys.regions().len(), 2);
    }

    #[test]
    fn uniform_construction() {
        let sys = FlatSystem::uniform(12, 3, 1).unwrap();
        assert_eq!(sys.regions(), &[RegionCounts::new(3, 1); 3]);
        assert!(sys.is_uniform());

        let one = FlatSystem::uniform(4, 1, 1).unwrap();
        assert_eq!(one.regions(), &[RegionCounts::new(3, 1)]);

        assert!(FlatSystem::uniform(12, 5, 1).is_err());
        assert!(FlatSystem::uniform(12, 3, 5).is_err());
        assert!(FlatSystem::uniform(12, 0, 1).is_err());
    }

    #[test]
    fn uniform_spec_realizability() {
        assert!(UniformSpec::new(12.0, 3.0, 1.0).unwrap().is_realizable());
        assert!(!UniformSpec::new(12.0, 5.0, 1.0).unwrap().is_realizable());
        assert!(!UniformSpec::new(100.0, 2.0, 31.5).unwrap().is_realizable());
        assert!(UniformSpec::new(12.0, 0.0, 1.0).is_err());
        assert!(UniformSpec::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn hier_from_parents_validates() {
        let c = RegionCounts::new(0, 1);
        let (tree, ids) = HierTree::from_parents(&[(c, Some(1)), (c, None)]).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(ids, vec![1, 0]);
        assert_eq!(tree.node(1).unwrap().parent, Some(0));

        assert!(HierTree::from_parents(&[(c, None), (c, None)]).is_err());
        assert!(HierTree::from_parents(&[(c, Some(1)), (c, Some(0))]).is_err());
        // root plus a two-cycle hanging off nothing
        assert!(HierTree::from_parents(&[(c, None), (c, Some(2)), (c, Some(1))]).is_err());
    }

    #[test]
    fn full_tree_shape() {
        let t = HierTree::full(3, 3, RegionCounts::new(0, 1));
        assert_eq!(t.len(), 40);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.span(0).unwrap(), 3);
    }

    #[test]
    fn codebase_collapse() {
        let mut cb = LabeledCodebase::new();
        cb.add("com.rail", "Train", Visibility::Public);
        cb.add("com.rail", "Wheel", Visibility::Hidden);
        cb.add("a", "A", Visibility::Hidden);
        let flat = cb.to_flat();
        assert_eq!(flat.regions(), &[RegionCounts::new(1, 0), RegionCounts::new(1, 1)]);
        assert_eq!(cb.region_counts("com.rail"), Some(RegionCounts::new(1, 1)));
    }
}
