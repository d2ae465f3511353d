//! Task-specific sub-dataset extraction: classification, ranking, QoR
//! regression and probability labeling.

use super::flow::DesignItem;
use super::recipes::seed_job;
use crate::error::{Error, Result};
use crate::ir::NETWORK_TYPES;
use crate::sim::node_probability;

fn network_ref(item: &DesignItem, group: &str, k: usize) -> String {
    format!("{}/{group}/r{k:03}/network.graphml", item.name)
}

/// Task 1: every network of design i carries label i; labels are dense
/// 0..n−1 in the given design order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassSample {
    pub circuit_ref: String,
    pub label: usize,
}

pub fn extract_classification(items: &[DesignItem]) -> Result<Vec<ClassSample>> {
    if items.is_empty() {
        return Err(Error::usage("classification extraction needs at least one design"));
    }
    let mut out = Vec::new();
    for (label, item) in items.iter().enumerate() {
        for group in &item.groups {
            let g = super::packing_group_name(group.logic_type);
            for k in 0..group.results.len() {
                out.push(ClassSample {
                    circuit_ref: network_ref(item, g, k),
                    label,
                });
            }
        }
    }
    Ok(out)
}

/// Task 2: an oriented pair a⪯b under the (arrival, area) partial
/// order; full ties are skipped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RankingPair {
    pub circuit_ref_a: String,
    pub circuit_ref_b: String,
}

pub fn extract_ranking(items: &[DesignItem]) -> Result<Vec<RankingPair>> {
    let mut out = Vec::new();
    for item in items {
        for k in 0..item.recipes.len() {
            for (gi, ga) in item.groups.iter().enumerate() {
                for gb in &item.groups[gi + 1..] {
                    let qa = &ga.results[k].asic_qor;
                    let qb = &gb.results[k].asic_qor;
                    let ra = network_ref(item, super::packing_group_name(ga.logic_type), k);
                    let rb = network_ref(item, super::packing_group_name(gb.logic_type), k);
                    let (first, second) = if qa.arrival < qb.arrival
                        || (qa.arrival == qb.arrival && qa.area < qb.area)
                    {
                        (ra, rb)
                    } else if qb.arrival < qa.arrival
                        || (qb.arrival == qa.arrival && qb.area < qa.area)
                    {
                        (rb, ra)
                    } else {
                        continue; // full tie: pass
                    };
                    out.push(RankingPair {
                        circuit_ref_a: first,
                        circuit_ref_b: second,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Task 3: {unoptimized AIG, recipe, area, arrival} per (design,
/// recipe); the recipe at a given index is shared across designs.
#[derive(Clone, PartialEq, Debug)]
pub struct QorSample {
    pub aig_ref: String,
    pub recipe: String,
    pub area: f64,
    pub arrival: f64,
}

pub fn extract_qor(items: &[DesignItem]) -> Result<Vec<QorSample>> {
    let mut out = Vec::new();
    for item in items {
        let aig = item
            .group(crate::ir::LogicType::Aig)
            .ok_or_else(|| Error::usage("QoR extraction needs the AIG group"))?;
        for (k, recipe) in item.recipes.iter().enumerate() {
            let q = &aig.results[k].asic_qor;
            out.push(QorSample {
                aig_ref: format!("{}/raw/base_aig.graphml", item.name),
                recipe: recipe
                    .commands
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
                area: q.area,
                arrival: q.arrival,
            });
        }
    }
    Ok(out)
}

/// Task 4: per-node signal probability vector for every network.
#[derive(Clone, PartialEq, Debug)]
pub struct ProbabilitySample {
    pub network_ref: String,
    pub probabilities: Vec<f64>,
    pub seed: u64,
    pub vectors: usize,
}

pub fn extract_probability(
    items: &[DesignItem],
    vectors: usize,
    master_seed: u64,
) -> Result<Vec<ProbabilitySample>> {
    let mut out = Vec::new();
    for item in items {
        for group in &item.groups {
            let g = super::packing_group_name(group.logic_type);
            for (k, r) in group.results.iter().enumerate() {
                let seed = seed_job(master_seed, &item.name, k);
                let probabilities = node_probability(&r.network, vectors, seed)?;
                debug_assert_eq!(probabilities.len(), r.network.len());
                out.push(ProbabilitySample {
                    network_ref: network_ref(item, g, k),
                    probabilities,
                    seed,
                    vectors,
                });
            }
        }
    }
    Ok(out)
}

/// All logic-type group names in pack order.
pub fn group_names() -> [&'static str; 6] {
    let mut names = [""; 6];
    for (i, t) in NETWORK_TYPES.iter().enumerate() {
        names[i] = super::packing_group_name(*t);
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;
    use crate::map::mini_library;
    use crate::pipeline::flow::{run_flow, FlowConfig};
    use crate::sim::check_equivalence;

    fn items(n_designs: usize, recipes: usize) -> Vec<DesignItem> {
        (0..n_designs)
            .map(|d| {
                let c = random_aig(90 + d as u64, 6, 30, 2);
                let mut config = FlowConfig::new(mini_library());
                config.recipes = recipes;
                config.seed = 17;
                run_flow("t.v", b"", &c, &config).unwrap()
            })
            .collect()
    }

    #[test]
    fn classification_labels_are_dense_and_consistent() {
        let its = items(2, 3);
        let samples = extract_classification(&its).unwrap();
        assert_eq!(samples.len(), 2 * 3 * 6);
        let labels: std::collections::BTreeSet<usize> =
            samples.iter().map(|s| s.label).collect();
        assert_eq!(labels.into_iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(extract_classification(&[]).is_err());
        // same-label samples are pairwise equivalent per design
        for item in &its {
            let nets: Vec<_> = item
                .groups
                .iter()
                .flat_map(|g| g.results.iter().map(|r| &r.network))
                .collect();
            for w in nets.windows(2) {
                assert!(check_equivalence(w[0], w[1], 64).unwrap().holds());
            }
        }
    }

    #[test]
    fn ranking_pairs_follow_the_partial_order() {
        let its = items(1, 2);
        let pairs = extract_ranking(&its).unwrap();
        // antisymmetry: no pair appears in both orientations
        let set: std::collections::HashSet<(String, String)> = pairs
            .iter()
            .map(|p| (p.circuit_ref_a.clone(), p.circuit_ref_b.clone()))
            .collect();
        for p in &pairs {
            assert_ne!(p.circuit_ref_a, p.circuit_ref_b);
            assert!(!set.contains(&(p.circuit_ref_b.clone(), p.circuit_ref_a.clone())));
        }
    }

    #[test]
    fn qor_samples_share_recipes_across_designs() {
        let its = items(2, 3);
        let samples = extract_qor(&its).unwrap();
        assert_eq!(samples.len(), 6);
        for k in 0..3 {
            assert_eq!(samples[k].recipe, samples[3 + k].recipe);
        }
    }

    #[test]
    fn probability_vectors_are_exact_on_small_fixtures() {
        let its = items(1, 1);
        let samples = extract_probability(&its, 16384, 5).unwrap();
        assert_eq!(samples.len(), 6);
        for (sample, group) in samples.iter().zip(&its[0].groups) {
            let net = &group.results[0].network;
            assert_eq!(sample.probabilities.len(), net.len());
            for &p in &sample.probabilities {
                assert!((0.0..=1.0).contains(&p));
            }
            // exhaustive mode: PI entries are exactly one half
            for &pi in net.pis() {
                assert_eq!(sample.probabilities[pi as usize], 0.5);
            }
        }
    }
}
