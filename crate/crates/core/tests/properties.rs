use proptest::prelude::*;

use encap_core::experiments::{amc_census, min_psc, CensusMode, Context};
use encap_core::hier::{
    hier_psc_enumerated, hier_psc_formula, layered_psc_enumerated, layered_psc_formula, HierUniformSpec,
    LayeredUniformSpec,
};
use encap_core::ingest::parse_manifest;
use encap_core::metrics::{configuration_efficiency, ihv_percent};
use encap_core::model::{FlatSystem, HierTree, LayeredSystem, RegionCounts};
use encap_core::psc::{
    enumerate_psc_oracle, psc_unencapsulated, r_h, r_min, s_min, system_psc, uniform_psc_of,
};

fn region() -> impl Strategy<Value = RegionCounts> {
    (0u64..8, 0u64..6).prop_map(|(h, v)| RegionCounts::new(h, v))
}

fn flat() -> impl Strategy<Value = FlatSystem> {
    prop::collection::vec(region(), 0..8).prop_map(FlatSystem::new)
}

proptest! {
    #[test]
    fn closed_form_matches_enumeration(sys in flat()) {
        prop_assert_eq!(system_psc(&sys).total, enumerate_psc_oracle(&sys).unwrap());
    }

    #[test]
    fn region_order_does_not_matter(sys in flat(), seed in any::<u64>()) {
        let mut regions = sys.regions().to_vec();
        let k = regions.len().max(1);
        regions.rotate_left((seed as usize) % k);
        regions.reverse();
        prop_assert_eq!(system_psc(&sys), system_psc(&FlatSystem::new(regions)));
    }

    #[test]
    fn never_above_unencapsulated(sys in flat()) {
        prop_assert!(system_psc(&sys).total <= psc_unencapsulated(sys.n()));
    }

    #[test]
    fn uniform_systems_follow_the_uniform_law(r in 1u64..10, size in 1u64..10, p in 0u64..10) {
        let p = p.min(size);
        let sys = FlatSystem::uniform(r * size, r, p).unwrap();
        let law = uniform_psc_of((r * size) as f64, r as f64, p as f64).unwrap();
        prop_assert_eq!(system_psc(&sys).total as f64, law);
    }

    #[test]
    fn r_min_minimises_uniform_psc(n in 1u64..5000, p in 0.05f64..50.0, t in 0.0f64..1.0) {
        let best = uniform_psc_of(n as f64, r_min(n, p).unwrap(), p).unwrap();
        prop_assert!((best - s_min(n, p).unwrap()).abs() <= 1e-9 * best.abs().max(1.0));
        let r = 1.0 + t * (n as f64 - 1.0);
        prop_assert!(uniform_psc_of(n as f64, r, p).unwrap() >= best - 1e-9 * best.abs().max(1.0));
    }

    #[test]
    fn boundary_matches_first_law(n in 1u64..2000, p in 1u64..20) {
        let top = psc_unencapsulated(n) as f64;
        let at_rh = uniform_psc_of(n as f64, r_h(n, p as f64).unwrap(), p as f64).unwrap();
        prop_assert!((at_rh - top).abs() <= 1e-9 * top.max(1.0));
        prop_assert_eq!(uniform_psc_of(n as f64, 1.0, p as f64).unwrap(), top);
    }

    #[test]
    fn ihv_is_scale_free(n in 1u64..1000, frac in 0.0f64..=1.0, k in 1u64..50) {
        let h = (frac * n as f64).floor() as u64;
        let a = ihv_percent(n, h).unwrap();
        let b = ihv_percent(k * n, k * h).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn efficiency_is_a_unit_score(sys in flat()) {
        let m = configuration_efficiency(&sys);
        if let Some(c) = m.c_e {
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn layered_formula_matches_enumeration(
        layers in 1usize..5, per_layer in 1usize..5, nodes in 1u64..5, p in 0u64..5, d_seed in any::<usize>()
    ) {
        let p = p.min(nodes);
        let d = d_seed % layers;
        let sys = LayeredSystem::uniform(layers, per_layer, nodes, p, Some(d)).unwrap();
        let r = (layers * per_layer) as f64;
        let n = r * nodes as f64;
        let spec = LayeredUniformSpec::new(n, r, layers as f64, per_layer as f64, d as f64, p as f64).unwrap();
        prop_assert_eq!(layered_psc_enumerated(&sys).unwrap() as f64, layered_psc_formula(&spec));
    }

    #[test]
    fn deeper_penetration_never_lowers_psc(
        layers in prop::collection::vec(prop::collection::vec(region(), 1..4), 1..5)
    ) {
        let mut last = 0;
        for d in 0..layers.len() {
            let s = layered_psc_enumerated(&LayeredSystem::new(layers.clone(), Some(d)).unwrap()).unwrap();
            prop_assert!(s >= last);
            last = s;
        }
    }

    #[test]
    fn single_layer_formula_is_the_uniform_law(r in 1u64..20, size in 1u64..20, p in 0u64..20) {
        let n = (r * size) as f64;
        let spec = LayeredUniformSpec::new(n, r as f64, 1.0, r as f64, 0.0, p as f64).unwrap();
        prop_assert_eq!(layered_psc_formula(&spec), uniform_psc_of(n, r as f64, p as f64).unwrap());
    }

    #[test]
    fn hierarchy_never_exceeds_flat(b in 1usize..4, k in 0usize..4, h in 0u64..3, v in 0u64..3) {
        let t = HierTree::full(b, k, RegionCounts::new(h, v));
        prop_assert!(hier_psc_enumerated(&t).unwrap() <= system_psc(&t.flatten()).total);
    }

    #[test]
    fn hierarchy_formula_external_term_scales_with_region_size(
        b in 1u32..4, k in 0u32..4, size in 1u64..5, p in 0u64..5
    ) {
        // the closed form agrees with enumeration only at one node
        // per subsystem; in general its external term is short by n / r
        let p = p.min(size);
        let t = HierTree::full(b as usize, k as usize, RegionCounts::with_size(size, p).unwrap());
        let r = t.len() as f64;
        let n = r * size as f64;
        let spec = HierUniformSpec::new(n, k, b, p as f64).unwrap();
        let internal = n * (n / r - 1.0);
        let formula_external = hier_psc_formula(&spec) - internal;
        let enumerated_external = hier_psc_enumerated(&t).unwrap() as f64 - internal;
        prop_assert!((enumerated_external - formula_external * size as f64).abs() < 1e-6);
    }

    #[test]
    fn manifest_round_trip(sys in flat()) {
        let mut text = String::from("context flat\n");
        for (i, g) in sys.regions().iter().enumerate() {
            text.push_str(&format!("region g{i} private={} public={}\n", g.hidden, g.violating));
        }
        let m = parse_manifest(&text).unwrap();
        prop_assert_eq!(m.to_canonical_string(), text);
        prop_assert_eq!(m.to_model().unwrap().flatten(), sys);
    }
}

#[test]
fn context_ordering_holds_pointwise() {
    for n in 1..=100u64 {
        let get = |c| min_psc(n, 1, c).unwrap().unwrap();
        let (u, f, l, h) = (
            get(Context::Unencapsulated),
            get(Context::Flat),
            get(Context::Layered),
            get(Context::Hier2d),
        );
        assert!(f <= u && h <= f, "n={n}: {u} {f} {h}");
        // uniform layered splits need a divisor of n; the flat law does not
        let splittable = (3..=n / 3).any(|d| n % d == 0);
        if splittable {
            assert!(l <= f, "n={n}: flat {f} layered {l}");
        }
        // a chain of single-node layers beats the span-2 tree on these
        // small systems
        let chain_wins = [3, 5, 6, 8, 9, 10, 15].contains(&n);
        if splittable || n < 16 {
            assert_eq!(h > l, chain_wins, "n={n}: layered {l} hier {h}");
        }
    }
}

#[test]
fn anomalies_thin_out_as_regions_grow() {
    let mut last_fraction = f64::INFINITY;
    let mut last_gap = f64::INFINITY;
    for r in [2, 4, 5, 10] {
        let c = amc_census(100, r, CensusMode::Sampled { seed: 42, count: 100_000 }).unwrap();
        assert!(c.amc_fraction <= last_fraction, "r={r}: {}", c.amc_fraction);
        assert!(c.same_r_fraction > 0.0);
        let gap = c.min_gap_percent.unwrap_or(0.0);
        assert!(gap <= last_gap, "r={r}: gap {gap}");
        (last_fraction, last_gap) = (c.amc_fraction, gap);
    }
}
