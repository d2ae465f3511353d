//! The per-design seven-step flow: frontend conversion, recipe-driven
//! optimization, blasting, mapping, timing, and verification.

use super::convert::{to_aig, to_gtg};
use super::recipes::gen_recipes;
use crate::error::{Error, Result};
use crate::io::QorRecord;
use crate::ir::{Circuit, LogicType, NETWORK_TYPES};
use crate::map::{fpga_qor, map_asic, map_lut, sta, AsicMode, CellLibrary, LutMode};
use crate::opt::{apply_recipe, Recipe, RECIPE_LENGTH};
use crate::sim::{check_equivalence, EquivalenceVerdict};
use rayon::prelude::*;

/// Above this PI count the equivalence check switches from exhaustive
/// to a random miter with [`RANDOM_MITER_WORDS`]·64 assignments.
pub const RANDOM_MITER_WORDS: usize = 4096; // 262144 assignments

#[derive(Clone, Debug)]
pub struct FlowConfig {
    pub recipes: usize,
    pub length: usize,
    pub seed: u64,
    pub library: CellLibrary,
    pub lut_k: usize,
    pub wire_delay: f64,
    /// Worker threads; 0 uses the rayon default. Output is identical
    /// regardless of the value.
    pub jobs: usize,
}

impl FlowConfig {
    pub fn new(library: CellLibrary) -> FlowConfig {
        FlowConfig {
            recipes: 0,
            length: RECIPE_LENGTH,
            seed: 0,
            library,
            lut_k: crate::map::DEFAULT_LUT_K,
            wire_delay: 0.0,
            jobs: 0,
        }
    }
}

/// How an artifact's equivalence was established.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerdictTier {
    /// Exhaustive proof (≤16 PIs).
    Equivalent,
    /// Survived the random miter budget.
    NotFalsified,
}

impl VerdictTier {
    pub fn name(self) -> &'static str {
        match self {
            VerdictTier::Equivalent => "equivalent",
            VerdictTier::NotFalsified => "not-falsified",
        }
    }

    pub fn from_name(s: &str) -> Result<VerdictTier> {
        match s {
            "equivalent" => Ok(VerdictTier::Equivalent),
            "not-falsified" => Ok(VerdictTier::NotFalsified),
            other => Err(Error::format(format!("unknown verdict tier `{other}`"))),
        }
    }
}

/// Checks `b` against the reference `a` and aborts the flow with a
/// replayable counterexample on failure.
pub fn verify(a: &Circuit, b: &Circuit, what: &str) -> Result<VerdictTier> {
    match check_equivalence(a, b, RANDOM_MITER_WORDS)? {
        EquivalenceVerdict::Equivalent { .. } => Ok(VerdictTier::Equivalent),
        EquivalenceVerdict::NotFalsified { .. } => Ok(VerdictTier::NotFalsified),
        EquivalenceVerdict::NotEquivalent { counterexample } => {
            let bits: String = counterexample
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            Err(Error::Verification(format!(
                "{what}: differs on PI assignment {bits} (PI 0 first)"
            )))
        }
    }
}

/// One recipe's artifacts for one logic type.
#[derive(Clone, Debug)]
pub struct RecipeResult {
    pub network: Circuit,
    pub network_verdict: VerdictTier,
    pub asic: Circuit,
    pub asic_verdict: VerdictTier,
    pub fpga: Circuit,
    pub fpga_verdict: VerdictTier,
    pub asic_qor: QorRecord,
    pub fpga_qor: QorRecord,
}

#[derive(Clone, Debug)]
pub struct TypeGroup {
    pub logic_type: LogicType,
    /// Indexed by recipe id.
    pub results: Vec<RecipeResult>,
}

/// The packed per-design bundle: raw group plus one group per logic
/// type.
#[derive(Clone, Debug)]
pub struct DesignItem {
    pub name: String,
    /// Original source file name (stored in `raw/`).
    pub source_name: String,
    pub source_bytes: Vec<u8>,
    pub gtg: Circuit,
    pub base_aig: Circuit,
    pub recipes: Vec<Recipe>,
    pub groups: Vec<TypeGroup>,
    pub master_seed: u64,
}

impl DesignItem {
    pub fn group(&self, t: LogicType) -> Option<&TypeGroup> {
        self.groups.iter().find(|g| g.logic_type == t)
    }
}

/// Steps 1–7 for one design: load → GTG → base AIG → recipes →
/// per-recipe optimize/blast/map/time → verify everything. Per-recipe
/// jobs are pure and run in parallel; the result is identical for any
/// worker count.
pub fn run_flow(
    source_name: &str,
    source_bytes: &[u8],
    circuit: &Circuit,
    config: &FlowConfig,
) -> Result<DesignItem> {
    let gtg = to_gtg(circuit)?;
    verify(circuit, &gtg, "GTG conversion")?;
    let base_aig = to_aig(&gtg)?;
    verify(&gtg, &base_aig, "AIG construction")?;
    let recipes = gen_recipes(config.recipes, config.length, config.seed)?;

    let job = |recipe: &Recipe| -> Result<Vec<RecipeResult>> {
        let optimized = apply_recipe(&base_aig, recipe)?;
        let mut per_type = Vec::with_capacity(NETWORK_TYPES.len());
        for target in NETWORK_TYPES {
            let network = crate::blast::blast(&optimized, target)?;
            let network_verdict = verify(
                &base_aig,
                &network,
                &format!("recipe {} {target} network", recipe.id),
            )?;
            let asic = map_asic(&network, &config.library, AsicMode::Delay)?;
            let asic_verdict = verify(
                &network,
                &asic,
                &format!("recipe {} {target} ASIC netlist", recipe.id),
            )?;
            let fpga = map_lut(&to_aig(&network)?, config.lut_k, LutMode::Depth)?;
            let fpga_verdict = verify(
                &network,
                &fpga,
                &format!("recipe {} {target} FPGA netlist", recipe.id),
            )?;
            let asic_qor = sta(&asic, &config.library, config.wire_delay)?;
            let fq = fpga_qor(&fpga)?;
            per_type.push(RecipeResult {
                network,
                network_verdict,
                asic,
                asic_verdict,
                fpga,
                fpga_verdict,
                asic_qor,
                fpga_qor: fq,
            });
        }
        Ok(per_type)
    };

    let per_recipe: Vec<Vec<RecipeResult>> = if config.jobs == 1 {
        recipes.iter().map(job).collect::<Result<_>>()?
    } else {
        let run = || recipes.par_iter().map(job).collect::<Result<_>>();
        if config.jobs == 0 {
            run()?
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.jobs)
                .build()
                .map_err(|e| Error::usage(format!("worker pool: {e}")))?
                .install(run)?
        }
    };

    // transpose recipe-major results into per-type groups
    let mut groups: Vec<TypeGroup> = NETWORK_TYPES
        .iter()
        .map(|&t| TypeGroup {
            logic_type: t,
            results: Vec::with_capacity(recipes.len()),
        })
        .collect();
    for mut row in per_recipe {
        for group in groups.iter_mut().rev() {
            group.results.push(row.pop().unwrap());
        }
    }
    for group in &mut groups {
        group.results.reverse();
    }

    Ok(DesignItem {
        name: circuit.name.clone(),
        source_name: source_name.to_string(),
        source_bytes: source_bytes.to_vec(),
        gtg,
        base_aig,
        recipes,
        groups,
        master_seed: config.seed,
    })
}

/// Qualitative dataset observations over one design: (a) some pair of
/// recipes with identical optimized-AIG size and depth maps to
/// different area/arrival; (b) some recipe index where two logic types'
/// ASIC QoR differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Observations {
    pub same_structure_different_qor: bool,
    pub cross_type_qor_divergence: bool,
}

pub fn observations(item: &DesignItem) -> Observations {
    let mut same_structure_different_qor = false;
    if let Some(aig) = item.group(LogicType::Aig) {
        let stats: Vec<(usize, usize, f64, f64)> = aig
            .results
            .iter()
            .map(|r| {
                let s = r.network.stats();
                (s.gate_count(), s.depth, r.asic_qor.area, r.asic_qor.arrival)
            })
            .collect();
        'outer: for i in 0..stats.len() {
            for j in i + 1..stats.len() {
                let (si, sj) = (&stats[i], &stats[j]);
                if si.0 == sj.0 && si.1 == sj.1 && (si.2 != sj.2 || si.3 != sj.3) {
                    same_structure_different_qor = true;
                    break 'outer;
                }
            }
        }
    }
    let mut cross_type_qor_divergence = false;
    let n = item.recipes.len();
    'recipes: for k in 0..n {
        for a in 0..item.groups.len() {
            for b in a + 1..item.groups.len() {
                let qa = &item.groups[a].results[k].asic_qor;
                let qb = &item.groups[b].results[k].asic_qor;
                if qa.area != qb.area || qa.arrival != qb.arrival {
                    cross_type_qor_divergence = true;
                    break 'recipes;
                }
            }
        }
    }
    Observations {
        same_structure_different_qor,
        cross_type_qor_divergence,
    }
}
