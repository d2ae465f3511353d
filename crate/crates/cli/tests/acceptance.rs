//! Acceptance gate: one test per release criterion, each printing a
//! single `criterion N pass|FAIL|skip` line. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.

use lsgen_core::blast::blast;
use lsgen_core::gen::random_aig;
use lsgen_core::io::{read_aiger, write_graphml, write_recipe};
use lsgen_core::ir::{Circuit, GateType, LogicType, NETWORK_TYPES};
use lsgen_core::map::{map_asic, map_lut, mini_library, sta, AsicMode, CellLibrary, LutMode};
use lsgen_core::opt::{command_pool, run_command, strash};
use lsgen_core::pipeline::{
    gen_recipes, observations, run_flow, to_aig, verify, FlowConfig, VerdictTier,
};
use lsgen_core::sim::{evaluate, node_probability, simulate, support, SimVectors};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;

fn report(n: usize, desc: &str, ok: bool) {
    println!(
        "criterion {n:2} {} — {desc}",
        if ok { "pass" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed: {desc}");
}

/// The shared fixture corpus: five seeded AIGs, ≤12 PIs, 30–300 nodes.
fn corpus() -> Vec<Circuit> {
    [
        (1001u64, 8usize, 80usize, 5usize),
        (1002, 9, 100, 5),
        (1003, 10, 120, 6),
        (1004, 11, 150, 6),
        (1005, 12, 180, 8),
    ]
    .iter()
    .map(|&(seed, pis, ands, pos)| {
        let c = strash(&random_aig(seed, pis, ands, pos)).unwrap();
        assert!(c.pis().len() <= 12);
        let gates = c.stats().gate_count();
        assert!((30..=300).contains(&gates), "fixture size {gates}");
        c
    })
    .collect()
}

fn assert_exhaustive(tier: VerdictTier, what: &str) {
    assert_eq!(tier, VerdictTier::Equivalent, "{what} not proven exhaustively");
}

#[test]
fn c01_equivalence_preservation() {
    let lib = mini_library();
    for (f, fixture) in corpus().iter().enumerate() {
        let recipes = gen_recipes(50, 10, 2000 + f as u64).unwrap();
        for recipe in &recipes {
            // after every pass
            let mut cur = fixture.clone();
            for &cmd in &recipe.commands {
                cur = run_command(&cur, cmd).unwrap();
                assert_exhaustive(verify(fixture, &cur, "pass").unwrap(), "pass");
            }
            // every blast target and both mappings
            for target in NETWORK_TYPES {
                let network = blast(&cur, target).unwrap();
                assert_exhaustive(verify(&cur, &network, "blast").unwrap(), "blast");
                let asic = map_asic(&network, &lib, AsicMode::Delay).unwrap();
                assert_exhaustive(verify(&network, &asic, "asic").unwrap(), "asic");
                let fpga = map_lut(&to_aig(&network).unwrap(), 6, LutMode::Depth).unwrap();
                assert_exhaustive(verify(&network, &fpga, "fpga").unwrap(), "fpga");
            }
        }
    }
    report(
        1,
        "5 fixtures × 50 recipes: exhaustive equivalence after every pass, blast and mapping",
        true,
    );
}

#[test]
fn c02_blast_preserves_pi_support() {
    for (f, fixture) in corpus().iter().enumerate() {
        let recipes = gen_recipes(5, 10, 3000 + f as u64).unwrap();
        for recipe in &recipes {
            let mut cur = fixture.clone();
            for &cmd in &recipe.commands {
                cur = run_command(&cur, cmd).unwrap();
            }
            let before: Vec<_> = cur
                .pos()
                .iter()
                .map(|&p| support(&cur, p).unwrap())
                .collect();
            for target in NETWORK_TYPES {
                let network = blast(&cur, target).unwrap();
                let after: Vec<_> = network
                    .pos()
                    .iter()
                    .map(|&p| support(&network, p).unwrap())
                    .collect();
                assert_eq!(before, after, "{target} changed a PO support set");
            }
        }
    }
    report(2, "per-PO PI support sets identical across all 6 blast targets", true);
}

#[test]
fn c03_recipe_sampler_statistics() {
    // 10,000 recipes × length 10 = 100,000 command draws
    let recipes = gen_recipes(10_000, 10, 424_242).unwrap();
    let mut counts = std::collections::HashMap::new();
    for r in &recipes {
        for c in &r.commands {
            *counts.entry(*c).or_insert(0u64) += 1;
        }
    }
    let total = 100_000f64;
    // each of the 4 kinds within 25% ± 1%
    for kind_commands in [
        &["balance"][..],
        &["rewrite", "rewrite -l", "rewrite -z", "rewrite -l -z"],
        &["refactor", "refactor -l", "refactor -z", "refactor -l -z"],
        &["resub", "resub -l", "resub -z", "resub -l -z"],
    ] {
        let n: u64 = counts
            .iter()
            .filter(|(c, _)| kind_commands.contains(&c.to_string().as_str()))
            .map(|(_, n)| *n)
            .sum();
        let freq = n as f64 / total;
        assert!((freq - 0.25).abs() < 0.01, "kind frequency {freq}");
    }
    // chi-square over the 16 pool entries; the 4 balance entries are
    // indistinguishable draws, so they pool into one class of weight
    // 4/16 (12 remaining classes of weight 1/16 each; 12 dof)
    let pool: std::collections::HashSet<String> =
        command_pool().iter().map(|c| c.to_string()).collect();
    assert_eq!(pool.len(), 13);
    let mut chi2 = 0.0;
    for entry in &pool {
        let expected = if entry == "balance" {
            total * 4.0 / 16.0
        } else {
            total / 16.0
        };
        let observed = counts
            .iter()
            .find(|(c, _)| c.to_string() == *entry)
            .map(|(_, n)| *n)
            .unwrap_or(0) as f64;
        chi2 += (observed - expected).powi(2) / expected;
    }
    // chi-square critical value at p = 0.001 for 12 degrees of freedom
    assert!(chi2 < 32.909, "chi-square {chi2} rejects uniformity");

    // fixed seed reproduces byte-identical recipe files
    let mut bytes = Vec::new();
    for r in gen_recipes(100, 10, 12_345).unwrap() {
        write_recipe(&r, &mut bytes).unwrap();
    }
    let digest = format!("{:x}", Sha256::digest(&bytes));
    assert_eq!(
        digest, "1b5abe45d91ed6ec0cb5851c3dd570629287c89b6ab1f6ec84dfbf9415c8339d",
        "recipe bytes drifted from the frozen reference"
    );
    report(
        3,
        "100k draws: kinds at 25%±1%, chi-square p>0.001, byte-stable recipe files",
        true,
    );
}

#[test]
fn c04_packed_simulation_matches_naive_evaluation() {
    for seed in 0..100u64 {
        let pis = 3 + (seed % 8) as usize; // 3..=10
        let c = random_aig(5000 + seed, pis, 15 + (seed % 30) as usize, 2);
        let words = simulate(&c, &SimVectors::exhaustive(pis)).unwrap();
        for assignment_index in 0..(1usize << pis) {
            let assignment: Vec<bool> =
                (0..pis).map(|b| assignment_index >> b & 1 == 1).collect();
            let expect = evaluate(&c, &assignment).unwrap();
            for (po, &p) in c.pos().iter().enumerate() {
                let w = &words[c.node(p).fanins[0] as usize];
                let bit = w[assignment_index / 64] >> (assignment_index % 64) & 1 == 1;
                assert_eq!(bit, expect[po], "seed {seed} PO {po} index {assignment_index}");
            }
        }
    }
    report(4, "packed simulation equals naive evaluation on 100 circuits ≤10 PIs", true);
}

#[test]
fn c05_probability_labels() {
    // exhaustive probabilities equal ones(tt) / 2^pis exactly
    for seed in [61u64, 62, 63] {
        let c = random_aig(seed, 8, 40, 3);
        let prob = node_probability(&c, 1, 0).unwrap(); // ≤14 PIs: exact
        let mut ones = vec![0u64; c.len()];
        for assignment_index in 0..256usize {
            let assignment: Vec<bool> = (0..8).map(|b| assignment_index >> b & 1 == 1).collect();
            let v = SimVectors::single(&assignment);
            let words = simulate(&c, &v).unwrap();
            for (i, w) in words.iter().enumerate() {
                ones[i] += w[0] & 1;
            }
        }
        for (i, &p) in prob.iter().enumerate() {
            assert_eq!(p, ones[i] as f64 / 256.0, "node {i}");
        }
    }
    // Monte-Carlo with 16384 vectors lands within ±0.02 of exhaustive
    // on ≥99% of the nodes of a 14-PI fixture
    let c = random_aig(64, 14, 120, 3);
    let exact = node_probability(&c, 1, 0).unwrap();
    let words = simulate(&c, &SimVectors::random(14, 256, 99)).unwrap();
    let mut close = 0usize;
    for (i, w) in words.iter().enumerate() {
        let mc = w.iter().map(|x| x.count_ones() as u64).sum::<u64>() as f64 / 16384.0;
        if (mc - exact[i]).abs() <= 0.02 {
            close += 1;
        }
    }
    assert!(
        close as f64 >= 0.99 * c.len() as f64,
        "only {close}/{} nodes within ±0.02",
        c.len()
    );
    report(5, "exhaustive probabilities exact; 16384-vector estimates within ±0.02", true);
}

#[test]
fn c06_sta_matches_longest_path_oracle() {
    let lib = mini_library();
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 100 {
        seed += 1;
        let a = strash(&random_aig(7000 + seed, 4 + (seed % 3) as usize, 12, 2)).unwrap();
        let n = map_asic(&a, &lib, AsicMode::Delay).unwrap();
        if n.stats().count(GateType::Cell) > 30 {
            continue;
        }
        for wire in [0.0, 0.2] {
            let q = sta(&n, &lib, wire).unwrap();
            let oracle = longest_path(&n, &lib, wire);
            assert!((q.arrival - oracle).abs() < 1e-9, "seed {seed} wire {wire}");
        }
        checked += 1;
    }
    // 3-cell chain of unit-delay NAND2s arrives at exactly 3.0
    let nand = lib.cell_by_name("NAND2").unwrap();
    let mut chain = Circuit::new(LogicType::AsicNetlist, "chain");
    let a = chain.add_pi("a");
    let b = chain.add_pi("b");
    let mut cur = a;
    for _ in 0..3 {
        cur = chain
            .add_cell(vec![cur, b], nand.function, nand.name.clone())
            .unwrap();
    }
    chain.add_po(cur, "y");
    assert_eq!(sta(&chain, &lib, 0.0).unwrap().arrival, 3.0);
    report(6, "arrival equals path enumeration on 100 netlists; 3-cell chain is 3.0", true);
}

/// Brute-force longest-path enumeration by recursive descent.
fn longest_path(n: &Circuit, lib: &CellLibrary, wire: f64) -> f64 {
    let fanout = n.fanout_counts();
    fn arr(n: &Circuit, lib: &CellLibrary, fanout: &[u32], wire: f64, i: u32) -> f64 {
        let node = n.node(i);
        match node.gate {
            GateType::Cell => {
                let cell = lib.cell_by_name(&node.name).unwrap();
                node.fanins
                    .iter()
                    .enumerate()
                    .map(|(pin, &f)| {
                        arr(n, lib, fanout, wire, f)
                            + cell.pin_delays[pin]
                            + wire * (fanout[f as usize].saturating_sub(1)) as f64
                    })
                    .fold(0.0, f64::max)
            }
            GateType::Po | GateType::Buffer => arr(n, lib, fanout, wire, node.fanins[0]),
            _ => 0.0,
        }
    }
    n.pos()
        .iter()
        .map(|&p| arr(n, lib, &fanout, wire, p))
        .fold(0.0, f64::max)
}

#[test]
fn c07_mapping_legality() {
    let lib = mini_library();
    for fixture in corpus() {
        for target in NETWORK_TYPES {
            let network = blast(&fixture, target).unwrap();
            let aig = to_aig(&network).unwrap();
            let depth_map = map_lut(&aig, 6, LutMode::Depth).unwrap();
            let area_map = map_lut(&aig, 6, LutMode::Area).unwrap();
            for m in [&depth_map, &area_map] {
                for (_, node) in m.nodes() {
                    if node.gate == GateType::Lut {
                        assert!(node.arity() <= 6, "LUT with {} inputs", node.arity());
                    }
                }
            }
            assert!(
                depth_map.stats().depth <= area_map.stats().depth,
                "depth mode deeper than area mode"
            );
            let asic = map_asic(&network, &lib, AsicMode::Delay).unwrap();
            for (i, node) in asic.nodes() {
                if node.gate == GateType::Cell {
                    let cell = lib
                        .cell_by_name(&node.name)
                        .unwrap_or_else(|| panic!("node {i}: unknown cell `{}`", node.name));
                    assert_eq!(node.arity(), cell.inputs());
                    assert_eq!(node.tt, cell.tiled(), "cell `{}` function drifted", node.name);
                }
            }
        }
    }
    report(7, "LUTs ≤6 inputs, cell functions exact, depth-mode level ≤ area-mode", true);
}

// ---- scaled full-flow runs through the CLI binary -------------------

fn lsgen() -> &'static str {
    env!("CARGO_BIN_EXE_lsgen")
}

fn scratch(sub: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(sub);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fixture(dir: &Path, name: &str, c: &Circuit) -> PathBuf {
    let mut buf = Vec::new();
    write_graphml(c, &mut buf).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, buf).unwrap();
    path
}

fn count_files(root: &Path, suffix: &str) -> usize {
    let mut n = 0;
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else if path.file_name().unwrap().to_str().unwrap().ends_with(suffix) {
                n += 1;
            }
        }
    }
    n
}

/// Criterion 8's dataset, shared with criterion 11 to avoid a third
/// full run.
fn scaled_run() -> &'static (PathBuf, Vec<PathBuf>) {
    static RUN: OnceLock<(PathBuf, Vec<PathBuf>)> = OnceLock::new();
    RUN.get_or_init(|| {
        let dir = scratch("scaled");
        let mut c1 = corpus()[0].clone();
        c1.name = "d1".into();
        let mut c2 = corpus()[1].clone();
        c2.name = "d2".into();
        let d1 = write_fixture(&dir, "d1.graphml", &c1);
        let d2 = write_fixture(&dir, "d2.graphml", &c2);
        let out = dir.join("out_jobs8");
        let status = Command::new(lsgen())
            .arg("run-all")
            .args([&d1, &d2])
            .args(["--recipes", "100", "--seed", "77", "--jobs", "8"])
            .arg("--out")
            .arg(&out)
            .env_remove("LSGEN_JOBS")
            .env_remove("SOURCE_DATE_EPOCH")
            .status()
            .unwrap();
        assert!(status.success(), "run-all failed");
        (out, vec![d1, d2])
    })
}

#[test]
fn c08_scaled_flow_counts() {
    let (out, _) = scaled_run();
    for design in ["d1", "d2"] {
        let root = out.join(design);
        assert_eq!(count_files(&root, "network.graphml"), 600, "{design} networks");
        assert_eq!(count_files(&root, "asic.graphml"), 600, "{design} ASIC netlists");
        assert_eq!(count_files(&root, "fpga.graphml"), 600, "{design} FPGA netlists");
        let qor = count_files(&root, "asic_qor.json") + count_files(&root, "fpga_qor.json");
        assert_eq!(qor, 1200, "{design} QoR records");
        let status = Command::new(lsgen()).arg("unpack").arg(&root).status().unwrap();
        assert!(status.success(), "{design} manifest hashes failed to verify");
    }
    report(
        8,
        "run-all ×100 recipes: 600/600/600 netlists, 1200 QoR records, hashes verify",
        true,
    );
}

#[test]
fn c09_observation_self_test() {
    let mut config = FlowConfig::new(mini_library());
    config.recipes = 40;
    config.seed = 77;
    let item = run_flow("d1.graphml", b"", &corpus()[0], &config).unwrap();
    let obs = observations(&item);
    assert!(
        obs.same_structure_different_qor,
        "no same-structure pair with different mapped QoR"
    );
    assert!(obs.cross_type_qor_divergence, "no cross-type QoR divergence");
    report(9, "identical-structure QoR spread and cross-type divergence both observed", true);
}

#[test]
fn c10_external_adder_stats() {
    // Points at the released raw AIG of the `adder` design; the check
    // is skipped when the file has not been downloaded.
    let Some(path) = std::env::var_os("LSGEN_ADDER_AIG") else {
        println!("criterion 10 skip — set LSGEN_ADDER_AIG to the released adder AIG");
        return;
    };
    let c = read_aiger(&std::fs::read(&path).unwrap()).unwrap();
    let s = c.stats();
    assert_eq!(s.pis, 256);
    assert_eq!(s.pos, 129);
    assert_eq!(s.and2_count(), 1274);
    assert_eq!(s.depth, 508);
    // inverter/edge counts follow the explicit-NOT convention here and
    // are expected to differ from the published table
    println!(
        "criterion 10 note — inverters {} edges {} under the explicit-NOT convention",
        s.inverter_count(),
        s.edge_count
    );
    report(10, "adder raw AIG: PI=256 PO=129 And=1274 Depth=508", true);
}

#[test]
fn c11_determinism_across_worker_counts() {
    let (out8, designs) = scaled_run();
    let dir = scratch("scaled_jobs3");
    let out3 = dir.join("out_jobs3");
    let status = Command::new(lsgen())
        .arg("run-all")
        .args(designs)
        .args(["--recipes", "100", "--seed", "77", "--jobs", "3"])
        .arg("--out")
        .arg(&out3)
        .env_remove("LSGEN_JOBS")
        .env_remove("SOURCE_DATE_EPOCH")
        .status()
        .unwrap();
    assert!(status.success(), "run-all failed");
    for design in ["d1", "d2"] {
        let a = std::fs::read(out8.join(design).join("manifest.json")).unwrap();
        let b = std::fs::read(out3.join(design).join("manifest.json")).unwrap();
        assert_eq!(a, b, "{design} manifests differ across worker counts");
    }
    report(11, "identical seeds give byte-identical manifests for --jobs 8 and 3", true);
}
