//! Line-oriented manifest format.
//!
//! ```text
//! context flat|layered|hier
//! region <name> private=<int> public=<int>            # flat, layered
//! penetration <int>                                   # layered, optional
//! layer <int>                                         # layered, 1 = bottom
//! subsystem <name> parent=<name|-> private=<int> public=<int>   # hier
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{EncapError, Result};
use crate::model::{FlatSystem, HierTree, LayeredSystem, RegionCounts};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedRegion {
    pub name: String,
    pub counts: RegionCounts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestLayer {
    /// 1-based, 1 = bottom.
    pub index: usize,
    pub regions: Vec<NamedRegion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestSubsystem {
    pub region: NamedRegion,
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Manifest {
    Flat(Vec<NamedRegion>),
    Layered {
        penetration: Option<usize>,
        layers: Vec<ManifestLayer>,
    },
    Hier(Vec<ManifestSubsystem>),
}

/// Model value described by a manifest.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Flat(FlatSystem),
    Layered(LayeredSystem),
    Hier(HierTree),
}

impl Model {
    /// Every subsystem as one flat list (ignores layering/hierarchy).
    pub fn flatten(&self) -> FlatSystem {
        match self {
            Model::Flat(f) => f.clone(),
            Model::Layered(l) => l.flatten(),
            Model::Hier(t) => t.flatten(),
        }
    }
}

fn err(line: usize, message: impl Into<String>) -> EncapError {
    EncapError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_count(line: usize, key: &str, value: &str) -> Result<u64> {
    value
        .parse::<u64>()
        .map_err(|_| err(line, format!("{key} expects a non-negative integer, got '{value}'")))
}

/// Parses `key=value` tokens into a map, rejecting repeats and unknown keys.
fn parse_fields<'a>(line: usize, tokens: &[&'a str], allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut map = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected key=value, got '{tok}'")))?;
        if !allowed.contains(&k) {
            return Err(err(line, format!("unknown field '{k}'")));
        }
        if map.insert(k, v).is_some() {
            return Err(err(line, format!("field '{k}' given twice")));
        }
    }
    for k in allowed {
        if !map.contains_key(k) {
            return Err(err(line, format!("missing field '{k}'")));
        }
    }
    Ok(map)
}

fn parse_counts(line: usize, fields: &BTreeMap<&str, &str>) -> Result<RegionCounts> {
    Ok(RegionCounts::new(
        parse_count(line, "private", fields["private"])?,
        parse_count(line, "public", fields["public"])?,
    ))
}

struct Names(BTreeSet<String>);

impl Names {
    fn claim(&mut self, line: usize, name: &str) -> Result<()> {
        if !self.0.insert(name.to_owned()) {
            return Err(err(line, format!("duplicate name '{name}'")));
        }
        Ok(())
    }
}

pub fn parse_manifest(text: &str) -> Result<Manifest> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first_no, first) = lines.next().ok_or_else(|| err(1, "missing 'context' line"))?;
    let head: Vec<&str> = first.split_whitespace().collect();
    if head.len() != 2 || head[0] != "context" {
        return Err(err(first_no, "first line must be 'context flat|layered|hier'"));
    }
    let mut names = Names(BTreeSet::new());

    match head[1] {
        "flat" => {
            let mut regions = Vec::new();
            for (no, line) in lines {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match toks[0] {
                    "region" if toks.len() >= 2 => {
                        names.claim(no, toks[1])?;
                        let fields = parse_fields(no, &toks[2..], &["private", "public"])?;
                        regions.push(NamedRegion {
                            name: toks[1].to_owned(),
                            counts: parse_counts(no, &fields)?,
                        });
                    }
                    other => return Err(err(no, format!("unexpected '{other}' in a flat manifest"))),
                }
            }
            Ok(Manifest::Flat(regions))
        }
        "layered" => {
            let mut penetration = None;
            let mut layers: Vec<ManifestLayer> = Vec::new();
            let mut seen_layers = BTreeSet::new();
            for (no, line) in lines {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match (toks[0], toks.len()) {
                    ("penetration", 2) => {
                        if penetration.is_some() || !layers.is_empty() {
                            return Err(err(no, "penetration must appear once, before the first layer"));
                        }
                        penetration = Some(parse_count(no, "penetration", toks[1])? as usize);
                    }
                    ("layer", 2) => {
                        let index = parse_count(no, "layer", toks[1])? as usize;
                        if index == 0 || !seen_layers.insert(index) {
                            return Err(err(no, format!("layer {index} is zero or repeated")));
                        }
                        layers.push(ManifestLayer {
                            index,
                            regions: Vec::new(),
                        });
                    }
                    ("region", n) if n >= 2 => {
                        let layer = layers
                            .last_mut()
                            .ok_or_else(|| err(no, format!("subsystem '{}' has no layer", toks[1])))?;
                        names.claim(no, toks[1])?;
                        let fields = parse_fields(no, &toks[2..], &["private", "public"])?;
                        layer.regions.push(NamedRegion {
                            name: toks[1].to_owned(),
                            counts: parse_counts(no, &fields)?,
                        });
                    }
                    (other, _) => {
                        return Err(err(no, format!("unexpected '{other}' in a layered manifest")))
                    }
                }
            }
            if let Some(&top) = seen_layers.iter().next_back() {
                if top != seen_layers.len() {
                    return Err(err(first_no, format!("layers must be numbered 1..={}", seen_layers.len())));
                }
            }
            if let Some(d) = penetration {
                if !layers.is_empty() && d >= layers.len() {
                    return Err(err(first_no, format!("penetration {d} must be below the layer count")));
                }
            }
            Ok(Manifest::Layered { penetration, layers })
        }
        "hier" => {
            let mut subs = Vec::new();
            let mut line_of = Vec::new();
            for (no, line) in lines {
                let toks: Vec<&str> = line.split_whitespace().collect();
                match toks[0] {
                    "subsystem" if toks.len() >= 2 => {
                        names.claim(no, toks[1])?;
                        let fields = parse_fields(no, &toks[2..], &["parent", "private", "public"])?;
                        let parent = match fields["parent"] {
                            "-" => None,
                            p => Some(p.to_owned()),
                        };
                        subs.push(ManifestSubsystem {
                            region: NamedRegion {
                                name: toks[1].to_owned(),
                                counts: parse_counts(no, &fields)?,
                            },
                            parent,
                        });
                        line_of.push(no);
                    }
                    other => return Err(err(no, format!("unexpected '{other}' in a hier manifest"))),
                }
            }
            check_hierarchy(&subs, &line_of)?;
            Ok(Manifest::Hier(subs))
        }
        other => Err(err(first_no, format!("unknown context '{other}'"))),
    }
}

fn check_hierarchy(subs: &[ManifestSubsystem], line_of: &[usize]) -> Result<()> {
    if subs.is_empty() {
        return Ok(());
    }
    let index: BTreeMap<&str, usize> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.region.name.as_str(), i))
        .collect();
    let mut parent = Vec::with_capacity(subs.len());
    for (i, s) in subs.iter().enumerate() {
        parent.push(match &s.parent {
            None => None,
            Some(p) => Some(
                *index
                    .get(p.as_str())
                    .ok_or_else(|| err(line_of[i], format!("unknown parent '{p}'")))?,
            ),
        });
    }
    let roots: Vec<usize> = (0..subs.len()).filter(|&i| parent[i].is_none()).collect();
    if roots.len() != 1 {
        let line = roots.get(1).map_or(line_of[0], |&i| line_of[i]);
        return Err(err(line, format!("expected exactly one root, found {}", roots.len())));
    }
    for start in 0..subs.len() {
        let mut cur = start;
        for _ in 0..=subs.len() {
            match parent[cur] {
                Some(p) => cur = p,
                None => break,
            }
        }
        if parent[cur].is_some() {
            return Err(err(line_of[start], format!("'{}' is part of a parent cycle", subs[start].region.name)));
        }
    }
    Ok(())
}

impl Manifest {
    /// Validated model value.
    pub fn to_model(&self) -> Result<Model> {
        match self {
            Manifest::Flat(regions) => Ok(Model::Flat(regions.iter().map(|r| r.counts).collect())),
            Manifest::Layered { penetration, layers } => {
                let mut ordered = vec![Vec::new(); layers.len()];
                for l in layers {
                    ordered[l.index - 1] = l.regions.iter().map(|r| r.counts).collect();
                }
                Ok(Model::Layered(LayeredSystem::new(ordered, *penetration)?))
            }
            Manifest::Hier(subs) => {
                if subs.is_empty() {
                    return Err(crate::error::invalid("a hierarchy needs at least one subsystem"));
                }
                let index: BTreeMap<&str, usize> = subs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.region.name.as_str(), i))
                    .collect();
                let entries: Vec<(RegionCounts, Option<usize>)> = subs
                    .iter()
                    .map(|s| (s.region.counts, s.parent.as_deref().map(|p| index[p])))
                    .collect();
                Ok(Model::Hier(HierTree::from_parents(&entries)?.0))
            }
        }
    }

    /// Canonical text: input order, single spaces, trailing newline.
    pub fn to_canonical_string(&self) -> String {
        let mut out = String::new();
        let region = |out: &mut String, r: &NamedRegion| {
            let _ = writeln!(
                out,
                "region {} private={} public={}",
                r.name, r.counts.hidden, r.counts.violating
            );
        };
        match self {
            Manifest::Flat(regions) => {
                out.push_str("context flat\n");
                regions.iter().for_each(|r| region(&mut out, r));
            }
            Manifest::Layered { penetration, layers } => {
                out.push_str("context layered\n");
                if let Some(d) = penetration {
                    let _ = writeln!(out, "penetration {d}");
                }
                for l in layers {
                    let _ = writeln!(out, "layer {}", l.index);
                    l.regions.iter().for_each(|r| region(&mut out, r));
                }
            }
            Manifest::Hier(subs) => {
                out.push_str("context hier\n");
                for s in subs {
                    let _ = writeln!(
                        out,
                        "subsystem {} parent={} private={} public={}",
                        s.region.name,
                        s.parent.as_deref().unwrap_or("-"),
                        s.region.counts.hidden,
                        s.region.counts.violating
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psc::system_psc;

    #[test]
    fn flat_manifest() {
        let m = parse_manifest("context flat\nregion a private=2 public=1\nregion b private=0 public=1").unwrap();
        let Model::Flat(sys) = m.to_model().unwrap() else { panic!("flat expected") };
        assert_eq!(system_psc(&sys).total, 10);
        assert_eq!(
            m.to_canonical_string(),
            "context flat\nregion a private=2 public=1\nregion b private=0 public=1\n"
        );
    }

    #[test]
    fn empty_flat() {
        let m = parse_manifest("context flat\n").unwrap();
        assert_eq!(m, Manifest::Flat(vec![]));
        assert_eq!(m.to_model().unwrap().flatten().n(), 0);
    }

    #[test]
    fn hier_manifest() {
        let text = "context hier\nsubsystem root parent=- private=0 public=1\nsubsystem c1 parent=root private=0 public=1";
        let Model::Hier(t) = parse_manifest(text).unwrap().to_model().unwrap() else { panic!() };
        assert_eq!(t.len(), 2);
        let fwd = "context hier\nsubsystem c1 parent=root public=1 private=0\nsubsystem root parent=- private=0 public=1\n";
        assert!(parse_manifest(fwd).unwrap().to_model().is_ok());
    }

    #[test]
    fn layered_manifest() {
        let text = "# stack\ncontext layered\npenetration 0\nlayer 2\nregion top private=1 public=1\nlayer 1\nregion base private=0 public=2\n";
        let m = parse_manifest(text).unwrap();
        let Model::Layered(l) = m.to_model().unwrap() else { panic!() };
        assert_eq!(l.layers()[0], vec![RegionCounts::new(0, 2)]);
        assert_eq!(l.penetration(), 0);
        assert_eq!(parse_manifest(&m.to_canonical_string()).unwrap(), m);
    }

    fn line_of(text: &str) -> usize {
        match parse_manifest(text) {
            Err(EncapError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(line_of("context flat\nregion a private=1 public=x"), 2);
        assert_eq!(line_of("context flat\nregion a private=1 public=1\nregion a private=1 public=1"), 3);
        assert_eq!(line_of("context layered\nregion a private=1 public=1"), 2);
        assert_eq!(line_of("context hier\nsubsystem a parent=zz private=0 public=1"), 2);
        assert_eq!(
            line_of("context hier\nsubsystem r parent=- private=0 public=1\nsubsystem a parent=b private=0 public=1\nsubsystem b parent=a private=0 public=1"),
            3
        );
        assert_eq!(line_of("\n\ncontext cube"), 3);
        assert_eq!(line_of("context flat\nregion a private=1"), 2);
        assert_eq!(line_of("context layered\nlayer 1\nlayer 3"), 1);
    }
}
