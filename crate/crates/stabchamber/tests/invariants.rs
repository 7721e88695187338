//! Randomized property suites over the engine invariants that go beyond the
//! per-module unit tests: chamber disjointness under sampling, invariance of
//! the chamber data under relabeling, phase-cone containment at scale, and
//! slice/locate consistency.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_traits::Signed;
use stabchamber::chambers::{a_dagger_contains, locate, slice, Cell};
use stabchamber::cli::recheck_slice_cell;
use stabchamber::configuration::BlowUpConfig;
use stabchamber::contractions::{all_contractions, generators, ContractionSet};
use stabchamber::lattice::{ChernCharacter, NSClass};
use stabchamber::prng::SplitMix64;
use stabchamber::rat::{self, Rat};
use stabchamber::stability::{phase, phase_cone, z_eval};

fn fixture_config(name: &str) -> BlowUpConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    let text = std::fs::read_to_string(path).unwrap();
    stabchamber::document::ConfigDocument::parse(&text)
        .unwrap()
        .to_config()
        .unwrap()
}

/// No sample of a 10^4-point grid lies in two distinct open chambers, on
/// any bundled configuration. Overlaps would be reported as cells, never
/// silently merged; this asserts none occur.
#[test]
fn sampled_disjointness_on_bundled_examples() {
    for name in [
        "one_point.json",
        "two_disjoint.json",
        "three_disjoint.json",
        "chain_two.json",
        "chain_three.json",
        "two_points_on_one_curve.json",
    ] {
        let cfg = fixture_config(name);
        let n = cfg.n();
        let u = NSClass::hyperplane(n);
        // a plane with distinct weights on every exceptional direction cuts
        // through many chambers at once
        let mut v_coeffs = vec![rat::zero(); n + 1];
        for (k, coeff) in v_coeffs.iter_mut().enumerate().skip(1) {
            *coeff = rat::frac(1, 1 << (k - 1));
        }
        let v = NSClass::new(v_coeffs);
        let map = slice(&cfg, &NSClass::zero(n), &u, &v, 100, &rat::int(2)).unwrap();
        let mut chambers_seen = BTreeSet::new();
        for row in &map.cells {
            for cell in row {
                assert_ne!(*cell, Cell::Overlap, "{name}: two chambers claimed a point");
                if let Cell::Chamber(i) = cell {
                    chambers_seen.insert(*i);
                }
            }
        }
        assert!(
            !chambers_seen.is_empty(),
            "{name}: the sampling plane misses every chamber"
        );
    }
}

#[test]
fn slice_cells_match_pointwise_relocation() {
    // the (H, Chat_2) plane at Chat_1 = 0 on the chain of two
    let cfg = fixture_config("chain_two.json");
    let u = NSClass::hyperplane(2);
    let v = NSClass::from_integers(&[0, 0, 1]);
    let map = slice(&cfg, &NSClass::zero(2), &u, &v, 12, &rat::int(2)).unwrap();
    for row in 0..map.grid {
        for col in 0..map.grid {
            assert!(recheck_slice_cell(&cfg, &map, row, col).unwrap());
        }
    }
}

/// Relabeling the exceptional indices along a different linear extension of
/// the incidence order leaves every chamber verdict unchanged. The divisor
/// notes depend on the chosen order; the chambers must not.
#[test]
fn chamber_data_is_relabeling_invariant() {
    let mut rng = SplitMix64::new(314);
    for _ in 0..12 {
        let n = 2 + rng.below(4) as usize;
        let cfg = random_config(&mut rng, n);
        let Some(relabel) = alternative_extension(&cfg, &mut rng) else {
            continue;
        };
        let mut on2: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for i in 1..=n {
            if !cfg.on(i).is_empty() {
                on2.insert(relabel[i], cfg.on(i).iter().map(|&j| relabel[j]).collect());
            }
        }
        let cfg2 = BlowUpConfig::new(n, on2, vec![]);
        assert!(cfg2.violations().is_empty());

        for s in all_contractions(&cfg).unwrap() {
            let s2 =
                ContractionSet::from_indices(&s.iter().map(|i| relabel[i]).collect::<Vec<_>>());
            for _ in 0..20 {
                let alpha = NSClass::new((0..=n).map(|_| rng.rat_in(5, &[1, 2, 3])).collect());
                let alpha2 = relabel_class(&alpha, &relabel);
                assert_eq!(
                    a_dagger_contains(&cfg, &s, &alpha).unwrap(),
                    a_dagger_contains(&cfg2, &s2, &alpha2).unwrap(),
                    "relabeled chamber verdicts must agree"
                );
            }
        }
    }
}

fn relabel_class(alpha: &NSClass, relabel: &[usize]) -> NSClass {
    let n = alpha.n();
    let mut coeffs = vec![rat::zero(); n + 1];
    coeffs[0] = alpha.coeffs()[0].clone();
    for i in 1..=n {
        coeffs[relabel[i]] = alpha.coeffs()[i].clone();
    }
    NSClass::new(coeffs)
}

/// A second linear extension of the incidence DAG, as a relabeling map
/// old index -> new index, when one different from the identity exists.
fn alternative_extension(cfg: &BlowUpConfig, rng: &mut SplitMix64) -> Option<Vec<usize>> {
    let n = cfg.n();
    // successors[i] = indices that must come after i (its carriers)
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; n + 1];
    while order.len() < n {
        let mut ready: Vec<usize> = (1..=n)
            .filter(|&i| !placed[i] && (1..=n).all(|j| !cfg.on(j).contains(&i) || placed[j]))
            .collect();
        // reversed preference shuffles the extension away from the identity
        if rng.below(2) == 0 {
            ready.reverse();
        }
        let pick = ready[rng.below(ready.len() as u64) as usize];
        placed[pick] = true;
        order.push(pick);
    }
    // order lists indices from deepest to shallowest in the new labeling:
    // the new label of order[k] is k+1. Carriers must get larger labels.
    let mut relabel = vec![0usize; n + 1];
    for (k, &old) in order.iter().enumerate() {
        relabel[old] = k + 1;
    }
    for i in 1..=n {
        for &j in cfg.on(i) {
            if relabel[j] <= relabel[i] {
                return None;
            }
        }
    }
    if relabel.iter().enumerate().skip(1).all(|(i, &m)| i == m) {
        return None; // identity, nothing new to compare
    }
    Some(relabel)
}

/// Random consistent configuration of size n.
fn random_config(rng: &mut SplitMix64, n: usize) -> BlowUpConfig {
    let mut on: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for i in 1..n {
        if rng.below(2) == 0 {
            continue;
        }
        let j = i + 1 + rng.below((n - i) as u64) as usize;
        let mut carriers = BTreeSet::from([j]);
        if rng.below(3) == 0 {
            if let Some(&k) = on.get(&j).and_then(|c| c.iter().next()) {
                carriers.insert(k);
            }
        }
        on.insert(i, carriers);
    }
    let cfg = BlowUpConfig::new(n, on, vec![]);
    assert!(cfg.violations().is_empty());
    cfg
}

/// 1000 random non-negative integer combinations of generators stay inside
/// the phase cone.
#[test]
fn phase_cone_containment_at_scale() {
    let cfg = fixture_config("two_points_on_one_curve.json");
    let s = ContractionSet::full(3);
    let d = NSClass::from_integers(&[0, 3, 2, 1]);
    let cone = phase_cone(&cfg, &s, &d).unwrap();
    let gens = generators(&cfg, &s).unwrap();
    let mut rng = SplitMix64::new(2718);
    let mut combos = 0usize;
    while combos < 1000 {
        let mut total: Option<ChernCharacter> = None;
        for g in &gens {
            let k = rng.below(6) as i64;
            if k == 0 {
                continue;
            }
            let piece = g.ch.scale_int(k);
            total = Some(match total {
                None => piece,
                Some(t) => t.add(&piece).unwrap(),
            });
        }
        let Some(total) = total else { continue };
        combos += 1;
        let p = phase(&z_eval(&total, &d).unwrap()).unwrap();
        assert!(
            p >= cone.theta - 1e-12 && p <= cone.theta_prime + 1e-12,
            "phase {p} escapes the cone [{}, {}]",
            cone.theta,
            cone.theta_prime
        );
    }
}

/// Every chamber membership implies positivity of all generator charges'
/// imaginary parts; walls flip exactly the pivot form to zero.
#[test]
fn chamber_positivity_across_fixtures() {
    for name in ["chain_three.json", "two_points_on_one_curve.json"] {
        let cfg = fixture_config(name);
        let mut rng = SplitMix64::new(99);
        let nodes = all_contractions(&cfg).unwrap();
        let mut inside = 0usize;
        for _ in 0..3000 {
            let alpha = NSClass::new((0..=cfg.n()).map(|_| rng.rat_in(4, &[1, 2])).collect());
            let loc = locate(&cfg, &alpha).unwrap();
            for s in &loc.chambers {
                inside += 1;
                for g in generators(&cfg, s).unwrap() {
                    assert!(z_eval(&g.ch, &alpha).unwrap().im.is_positive());
                }
                let _ = nodes.len();
            }
        }
        assert!(inside > 0, "{name}: sampling found no chamber points");
    }
}

/// Membership is invariant under positive rational scaling on bundled data.
#[test]
fn homogeneity_on_fixtures() {
    let cfg = fixture_config("two_disjoint.json");
    let nodes = all_contractions(&cfg).unwrap();
    let mut rng = SplitMix64::new(5);
    for _ in 0..60 {
        let alpha = NSClass::new((0..=2).map(|_| rng.rat_in(6, &[1, 2, 3])).collect());
        let lambda: Rat = rat::frac(1 + rng.below(20) as i64, 1 + rng.below(20) as i64);
        for s in &nodes {
            assert_eq!(
                a_dagger_contains(&cfg, s, &alpha).unwrap(),
                a_dagger_contains(&cfg, s, &alpha.scale(&lambda)).unwrap()
            );
        }
    }
}

/// Random points of every bundled facet lie in the closures of both
/// adjacent chambers and in no open chamber.
#[test]
fn facet_samples_lie_in_both_closures() {
    use stabchamber::chambers::{chamber_graph, closure_contains, facet_contains};
    let eps = rat::frac(1, 100);
    let mut rng = SplitMix64::new(41);
    for name in [
        "one_point.json",
        "chain_two.json",
        "chain_three.json",
        "two_points_on_one_curve.json",
    ] {
        let cfg = fixture_config(name);
        let n = cfg.n();
        let graph = chamber_graph(&cfg, &eps).unwrap();
        let nodes = all_contractions(&cfg).unwrap();
        for wall in &graph.edges {
            let mut sampled = 0usize;
            let mut attempts = 0usize;
            while sampled < 10 && attempts < 400 {
                attempts += 1;
                // random point constrained to the pivot hyperplane around
                // the witness scale
                let mut coeffs = vec![rat::zero(); n + 1];
                coeffs[0] = rat::frac(1 + rng.below(4) as i64, 1);
                for (i, coeff) in coeffs.iter_mut().enumerate().skip(1) {
                    if wall.upper.contains(i) {
                        if i != wall.pivot {
                            *coeff = rat::frac(rng.below(9) as i64, 8);
                        }
                    } else {
                        // surviving indices keep small negative weights so
                        // the omega-part has a chance of being ample
                        *coeff = rat::frac(-(rng.below(3) as i64), 16);
                    }
                }
                let alpha = NSClass::new(coeffs);
                if !facet_contains(&cfg, &wall.upper, wall.pivot, &alpha).unwrap() {
                    continue;
                }
                sampled += 1;
                assert!(closure_contains(&cfg, &wall.upper, &alpha).unwrap());
                assert!(closure_contains(&cfg, &wall.lower, &alpha).unwrap());
                for s in &nodes {
                    assert!(!a_dagger_contains(&cfg, s, &alpha).unwrap());
                }
            }
            assert!(
                sampled > 0,
                "{name}: no facet sample found for pivot {}",
                wall.pivot
            );
        }
    }
}
