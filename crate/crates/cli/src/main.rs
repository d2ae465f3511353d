//! `lsgen`: command-line driver for the logic-synthesis dataset
//! toolkit. Exit codes: 0 ok, 1 usage error, 2 format/structure error,
//! 3 verification failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsgen_core::blast::blast;
use lsgen_core::io::{
    read_aiger, read_graphml, read_recipe, read_verilog, write_aiger, write_graphml, write_qor,
    write_recipe, write_verilog,
};
use lsgen_core::ir::LogicType;
use lsgen_core::map::{
    fpga_qor, map_asic, map_lut, mini_library, read_library, sta, AsicMode, CellLibrary, LutMode,
};
use lsgen_core::opt::{apply_recipe, Recipe};
use lsgen_core::pipeline::{
    extract_classification, extract_probability, extract_qor, extract_ranking, gen_recipes,
    observations, pack, run_flow, to_aig, to_gtg, unpack, FlowConfig,
};
use lsgen_core::sim::{check_equivalence, EquivalenceVerdict};
use lsgen_core::{Circuit, Error, Result};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "lsgen", version, about = "Logic-synthesis dataset generation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct LibArgs {
    /// Cell library JSON; the bundled mini library when omitted.
    #[arg(long = "lib")]
    lib: Option<PathBuf>,
}

impl LibArgs {
    fn load(&self) -> Result<CellLibrary> {
        match &self.lib {
            None => Ok(mini_library()),
            Some(path) => read_library(&std::fs::read_to_string(path)?),
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum BlastTarget {
    Aig,
    Oig,
    Xag,
    Mig,
    Primary,
    Gtg,
}

impl From<BlastTarget> for LogicType {
    fn from(t: BlastTarget) -> LogicType {
        match t {
            BlastTarget::Aig => LogicType::Aig,
            BlastTarget::Oig => LogicType::Oig,
            BlastTarget::Xag => LogicType::Xag,
            BlastTarget::Mig => LogicType::Mig,
            BlastTarget::Primary => LogicType::Primary,
            BlastTarget::Gtg => LogicType::Gtg,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ExtractTask {
    Classification,
    Ranking,
    Qor,
    Probability,
}

#[derive(Subcommand)]
enum Cmd {
    /// Convert any loadable circuit to GTG (flow step 1).
    SynthGtg {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert any circuit to a strashed AIG (flow step 2).
    ToAig {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw distinct optimization recipes from the 16-entry pool.
    GenRecipes {
        #[arg(long, default_value_t = 1)]
        recipes: usize,
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one r<k>.txt per recipe here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a recipe file to an AIG.
    Optimize {
        input: PathBuf,
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blast an AIG into one of the six network types.
    Blast {
        input: PathBuf,
        #[arg(long = "type", value_enum)]
        target: BlastTarget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a network to standard cells.
    MapAsic {
        input: PathBuf,
        #[command(flatten)]
        lib: LibArgs,
        #[arg(long, default_value = "delay")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a network to K-input LUTs (converting to AIG first if needed).
    MapFpga {
        input: PathBuf,
        #[arg(long = "lut-k", default_value_t = 6)]
        lut_k: usize,
        #[arg(long, default_value = "depth")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Static timing analysis of an ASIC netlist; FPGA netlists get the
    /// depth-based QoR.
    Sta {
        input: PathBuf,
        #[command(flatten)]
        lib: LibArgs,
        #[arg(long = "wire-delay", default_value_t = 0.0)]
        wire_delay: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combinational equivalence check of two circuits.
    Verify { a: PathBuf, b: PathBuf },
    /// Run the full seven-step flow on each design and pack the results.
    RunAll {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        recipes: usize,
        #[arg(long, default_value_t = 10)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        lib: LibArgs,
        #[arg(long = "lut-k", default_value_t = 6)]
        lut_k: usize,
        #[arg(long = "wire-delay", default_value_t = 0.0)]
        wire_delay: f64,
        /// Worker threads (0 = all cores); LSGEN_JOBS overrides.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-pack an unpacked (or verified) design directory.
    Pack {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify all manifest hashes of a packed design.
    Unpack { input: PathBuf },
    /// Emit one JSON-lines dataset for a task from packed designs.
    Extract {
        #[arg(value_enum)]
        task: ExtractTask,
        designs: Vec<PathBuf>,
        #[arg(long, default_value_t = 16384)]
        vectors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Circuit statistics, or dataset observation self-tests for a
    /// packed design directory.
    Stats { input: PathBuf },
}

fn extension(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    let bytes = std::fs::read(path)?;
    let mut c = match extension(path) {
        "graphml" => read_graphml(&bytes)?,
        "aag" | "aig" => read_aiger(&bytes)?,
        "v" => read_verilog(&bytes)?,
        other => {
            return Err(Error::usage(format!(
                "unknown circuit extension `.{other}` (expected .graphml, .aag, .aig or .v)"
            )))
        }
    };
    if c.name.is_empty() {
        c.name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("design")
            .to_string();
    }
    Ok(c)
}

fn save_circuit(c: &Circuit, out: Option<&Path>) -> Result<()> {
    match out {
        None => {
            let mut buf = Vec::new();
            write_graphml(c, &mut buf)?;
            print!("{}", String::from_utf8_lossy(&buf));
            Ok(())
        }
        Some(path) => {
            let mut buf = Vec::new();
            match extension(path) {
                "graphml" => write_graphml(c, &mut buf)?,
                "aag" => write_aiger(c, &mut buf, true)?,
                "aig" => write_aiger(c, &mut buf, false)?,
                "v" => write_verilog(c, &mut buf)?,
                other => {
                    return Err(Error::usage(format!(
                        "unknown output extension `.{other}`"
                    )))
                }
            }
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, buf)?;
            Ok(())
        }
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
            Ok(())
        }
    }
}

fn jobs_override(flag: usize) -> usize {
    std::env::var("LSGEN_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(flag)
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = value.to_string();
    s.push('\n');
    s
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::SynthGtg { input, out } => {
            let c = load_circuit(&input)?;
            save_circuit(&to_gtg(&c)?, out.as_deref())
        }
        Cmd::ToAig { input, out } => {
            let c = load_circuit(&input)?;
            save_circuit(&to_aig(&c)?, out.as_deref())
        }
        Cmd::GenRecipes {
            recipes,
            length,
            seed,
            out,
        } => {
            let list = gen_recipes(recipes, length, seed)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    for (k, r) in list.iter().enumerate() {
                        let mut buf = Vec::new();
                        write_recipe(r, &mut buf)?;
                        std::fs::write(dir.join(format!("r{k:03}.txt")), buf)?;
                    }
                }
                None => {
                    for r in &list {
                        let line: Vec<String> =
                            r.commands.iter().map(|c| c.to_string()).collect();
                        println!("{}", line.join("; "));
                    }
                }
            }
            Ok(())
        }
        Cmd::Optimize { input, recipe, out } => {
            let c = load_circuit(&input)?;
            let r = read_recipe(&std::fs::read(&recipe)?)?;
            let id = recipe
                .file_stem()
                .and_then(|s| s.to_str())
                .and_then(|s| s.trim_start_matches('r').parse().ok())
                .unwrap_or(0);
            save_circuit(&apply_recipe(&c, &Recipe::new(id, r.commands))?, out.as_deref())
        }
        Cmd::Blast { input, target, out } => {
            let c = load_circuit(&input)?;
            save_circuit(&blast(&c, target.into())?, out.as_deref())
        }
        Cmd::MapAsic {
            input,
            lib,
            mode,
            out,
        } => {
            let c = load_circuit(&input)?;
            let library = lib.load()?;
            let m = map_asic(&c, &library, AsicMode::from_name(&mode)?)?;
            save_circuit(&m, out.as_deref())
        }
        Cmd::MapFpga {
            input,
            lut_k,
            mode,
            out,
        } => {
            let c = load_circuit(&input)?;
            let aig = if c.logic_type == LogicType::Aig {
                c
            } else {
                to_aig(&c)?
            };
            save_circuit(&map_lut(&aig, lut_k, LutMode::from_name(&mode)?)?, out.as_deref())
        }
        Cmd::Sta {
            input,
            lib,
            wire_delay,
            out,
        } => {
            let c = load_circuit(&input)?;
            let q = if c.logic_type == LogicType::FpgaNetlist {
                fpga_qor(&c)?
            } else {
                sta(&c, &lib.load()?, wire_delay)?
            };
            let mut buf = Vec::new();
            write_qor(&q, &mut buf)?;
            write_text(out.as_deref(), &String::from_utf8_lossy(&buf))
        }
        Cmd::Verify { a, b } => {
            let ca = load_circuit(&a)?;
            let cb = load_circuit(&b)?;
            match check_equivalence(&ca, &cb, lsgen_core::pipeline::RANDOM_MITER_WORDS)? {
                EquivalenceVerdict::Equivalent { pi_count } => {
                    println!("equivalent (exhaustive over {pi_count} inputs)");
                    Ok(())
                }
                EquivalenceVerdict::NotFalsified { vector_count } => {
                    println!("not falsified ({vector_count} random assignments)");
                    Ok(())
                }
                EquivalenceVerdict::NotEquivalent { counterexample } => {
                    let bits: String = counterexample
                        .iter()
                        .map(|&x| if x { '1' } else { '0' })
                        .collect();
                    Err(Error::Verification(format!(
                        "circuits differ on PI assignment {bits} (PI 0 first)"
                    )))
                }
            }
        }
        Cmd::RunAll {
            inputs,
            recipes,
            length,
            seed,
            lib,
            lut_k,
            wire_delay,
            jobs,
            out,
        } => {
            if inputs.is_empty() {
                return Err(Error::usage("run-all needs at least one design"));
            }
            let mut config = FlowConfig::new(lib.load()?);
            config.recipes = recipes;
            config.length = length;
            config.seed = seed;
            config.lut_k = lut_k;
            config.wire_delay = wire_delay;
            config.jobs = jobs_override(jobs);
            for input in &inputs {
                let c = load_circuit(input)?;
                let source_name = input
                    .file_name()
                    .and_then(|s| s.to_str())
                    .unwrap_or("source");
                let bytes = std::fs::read(input)?;
                let item = run_flow(source_name, &bytes, &c, &config)?;
                let root = pack(&item, &out)?;
                println!("packed {}", root.display());
            }
            Ok(())
        }
        Cmd::Pack { input, out } => {
            let item = unpack(&input)?;
            let root = pack(&item, &out)?;
            println!("packed {}", root.display());
            Ok(())
        }
        Cmd::Unpack { input } => {
            let item = unpack(&input)?;
            let networks: usize = item.groups.iter().map(|g| g.results.len()).sum();
            println!(
                "ok: design {} with {} recipes, {} networks, all hashes verified",
                item.name,
                item.recipes.len(),
                networks
            );
            Ok(())
        }
        Cmd::Extract {
            task,
            designs,
            vectors,
            seed,
            out,
        } => {
            if designs.is_empty() {
                return Err(Error::usage("extract needs at least one packed design"));
            }
            let items: Vec<_> = designs
                .iter()
                .map(|d| unpack(d))
                .collect::<Result<_>>()?;
            let mut text = String::new();
            match task {
                ExtractTask::Classification => {
                    for s in extract_classification(&items)? {
                        text += &json_line(serde_json::json!({
                            "circuit": s.circuit_ref,
                            "label": s.label,
                        }));
                    }
                }
                ExtractTask::Ranking => {
                    for p in extract_ranking(&items)? {
                        text += &json_line(serde_json::json!({
                            "better": p.circuit_ref_a,
                            "worse": p.circuit_ref_b,
                        }));
                    }
                }
                ExtractTask::Qor => {
                    for s in extract_qor(&items)? {
                        text += &json_line(serde_json::json!({
                            "aig": s.aig_ref,
                            "recipe": s.recipe,
                            "area": s.area,
                            "arrival": s.arrival,
                        }));
                    }
                }
                ExtractTask::Probability => {
                    for s in extract_probability(&items, vectors, seed)? {
                        text += &json_line(serde_json::json!({
                            "network": s.network_ref,
                            "probabilities": s.probabilities,
                            "seed": s.seed,
                            "vectors": s.vectors,
                        }));
                    }
                }
            }
            write_text(out.as_deref(), &text)
        }
        Cmd::Stats { input } => {
            if input.is_dir() {
                let item = unpack(&input)?;
                let obs = observations(&item);
                println!(
                    "observation_same_structure_different_qor: {}",
                    obs.same_structure_different_qor
                );
                println!(
                    "observation_cross_type_qor_divergence: {}",
                    obs.cross_type_qor_divergence
                );
                return Ok(());
            }
            let c = load_circuit(&input)?;
            let s = c.stats();
            println!("name: {}", c.name);
            println!("logic_type: {}", c.logic_type);
            println!("pis: {}", s.pis);
            println!("pos: {}", s.pos);
            println!("ands: {}", s.and2_count());
            println!("invs: {}", s.inverter_count());
            println!("gates: {}", s.gate_count());
            println!("edges: {}", s.edge_count);
            println!("depth: {}", s.depth);
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version exit cleanly; real argument errors are usage
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        let code = match e {
            Error::Usage(_) => 1,
            Error::Verification(_) => 3,
            _ => 2,
        };
        std::process::exit(code);
    }
}
