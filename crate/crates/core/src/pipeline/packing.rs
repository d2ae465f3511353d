//! Dataset packing (Step 7): a plain directory per design with a
//! hash-verified manifest, a `raw/` group, and one group per logic
//! type. Compression is delegated to the user; the layout is
//! language-neutral and diff-able.

use super::flow::{DesignItem, RecipeResult, TypeGroup, VerdictTier};
use crate::error::{Error, Result};
use crate::io::{
    read_graphml, read_qor, read_recipe, write_graphml, write_qor, write_recipe, write_verilog,
};
use crate::ir::{LogicType, NETWORK_TYPES};
use crate::opt::Recipe;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Creation timestamp (unix seconds). Reads SOURCE_DATE_EPOCH so packs
/// are reproducible; defaults to 0 when unset, keeping identical-seed
/// runs byte-identical.
fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn group_dir(t: LogicType) -> &'static str {
    match t {
        LogicType::Aig => "aig",
        LogicType::Oig => "oig",
        LogicType::Xag => "xag",
        LogicType::Mig => "mig",
        LogicType::Primary => "primary",
        LogicType::Gtg => "gtg",
        _ => unreachable!("netlists are not groups"),
    }
}

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "design".into()
    } else {
        s
    }
}

struct Packer {
    root: PathBuf,
    /// path -> (sha256, optional verdict tier)
    files: BTreeMap<String, (String, Option<VerdictTier>)>,
}

impl Packer {
    fn emit(&mut self, rel: &str, bytes: &[u8], verdict: Option<VerdictTier>) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.files
            .insert(rel.to_string(), (sha256_hex(bytes), verdict));
        Ok(())
    }

    fn emit_circuit(
        &mut self,
        rel_base: &str,
        c: &crate::ir::Circuit,
        verdict: Option<VerdictTier>,
    ) -> Result<()> {
        let mut graphml = Vec::new();
        write_graphml(c, &mut graphml)?;
        self.emit(&format!("{rel_base}.graphml"), &graphml, verdict)?;
        let mut verilog = Vec::new();
        write_verilog(c, &mut verilog)?;
        self.emit(&format!("{rel_base}.v"), &verilog, None)
    }
}

fn replay_script(item: &DesignItem, group: &str, k: usize) -> String {
    let src = format!("raw/{}", item.source_name);
    let recipe = format!("raw/recipes/r{k:03}.txt");
    let base = format!("{group}/r{k:03}");
    [
        format!("lsgen synth-gtg {src} --out raw/gtg.graphml"),
        "lsgen to-aig raw/gtg.graphml --out raw/base_aig.graphml".to_string(),
        format!("lsgen optimize raw/base_aig.graphml --recipe {recipe} --out {base}/opt.graphml"),
        format!("lsgen blast {base}/opt.graphml --type {group} --out {base}/network.graphml"),
        format!("lsgen map-asic {base}/network.graphml --out {base}/asic.graphml"),
        format!("lsgen map-fpga {base}/network.graphml --out {base}/fpga.graphml"),
        format!("lsgen sta {base}/asic.graphml --out {base}/asic_qor.json"),
        format!("lsgen verify raw/base_aig.graphml {base}/network.graphml"),
    ]
    .join("\n")
        + "\n"
}

/// Writes the item as `<dir>/<design>/…` and returns the design
/// directory. Every file lands in the manifest with its SHA-256.
pub fn pack(item: &DesignItem, dir: &Path) -> Result<PathBuf> {
    let design = sanitize(&item.name);
    let root = dir.join(&design);
    fs::create_dir_all(&root)?;
    let mut p = Packer {
        root: root.clone(),
        files: BTreeMap::new(),
    };

    p.emit(
        &format!("raw/{}", sanitize(&item.source_name)),
        &item.source_bytes,
        None,
    )?;
    p.emit_circuit("raw/gtg", &item.gtg, None)?;
    p.emit_circuit("raw/base_aig", &item.base_aig, None)?;
    for (k, recipe) in item.recipes.iter().enumerate() {
        let mut buf = Vec::new();
        write_recipe(recipe, &mut buf)?;
        p.emit(&format!("raw/recipes/r{k:03}.txt"), &buf, None)?;
    }

    for group in &item.groups {
        let g = group_dir(group.logic_type);
        for (k, r) in group.results.iter().enumerate() {
            let base = format!("{g}/r{k:03}");
            p.emit_circuit(
                &format!("{base}/network"),
                &r.network,
                Some(r.network_verdict),
            )?;
            p.emit_circuit(&format!("{base}/asic"), &r.asic, Some(r.asic_verdict))?;
            p.emit_circuit(&format!("{base}/fpga"), &r.fpga, Some(r.fpga_verdict))?;
            let mut buf = Vec::new();
            write_qor(&r.asic_qor, &mut buf)?;
            p.emit(&format!("{base}/asic_qor.json"), &buf, None)?;
            buf.clear();
            write_qor(&r.fpga_qor, &mut buf)?;
            p.emit(&format!("{base}/fpga_qor.json"), &buf, None)?;
            p.emit(
                &format!("{base}/replay.txt"),
                replay_script(item, g, k).as_bytes(),
                None,
            )?;
        }
    }

    let files: Vec<serde_json::Value> = p
        .files
        .iter()
        .map(|(path, (sha, verdict))| {
            let mut m = serde_json::Map::new();
            m.insert("path".into(), path.clone().into());
            m.insert("sha256".into(), sha.clone().into());
            if let Some(v) = verdict {
                m.insert("verdict".into(), v.name().into());
            }
            serde_json::Value::Object(m)
        })
        .collect();
    let manifest = serde_json::json!({
        "design": item.name,
        "source": sanitize(&item.source_name),
        "master_seed": item.master_seed,
        "recipe_count": item.recipes.len(),
        "toolkit_version": TOOLKIT_VERSION,
        "created": timestamp(),
        "files": files,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    fs::write(root.join("manifest.json"), text)?;
    Ok(root)
}

fn manifest_str<'a>(v: &'a serde_json::Value, key: &str) -> Result<&'a str> {
    v.get(key)
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::format(format!("manifest missing `{key}`")))
}

fn manifest_u64(v: &serde_json::Value, key: &str) -> Result<u64> {
    v.get(key)
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::format(format!("manifest missing `{key}`")))
}

/// Reads a packed design back, verifying every manifest hash first.
pub fn unpack(root: &Path) -> Result<DesignItem> {
    let manifest_text = fs::read(root.join("manifest.json"))
        .map_err(|_| Error::format(format!("missing file `{}`", root.join("manifest.json").display())))?;
    let manifest: serde_json::Value = serde_json::from_slice(&manifest_text)
        .map_err(|e| Error::format(format!("manifest: {e}")))?;
    let design = manifest_str(&manifest, "design")?.to_string();
    let source = manifest_str(&manifest, "source")?.to_string();
    let master_seed = manifest_u64(&manifest, "master_seed")?;
    let recipe_count = manifest_u64(&manifest, "recipe_count")? as usize;
    let files = manifest
        .get("files")
        .and_then(|f| f.as_array())
        .ok_or_else(|| Error::format("manifest missing `files`"))?;

    let mut contents: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut verdicts: BTreeMap<String, VerdictTier> = BTreeMap::new();
    for entry in files {
        let path = manifest_str(entry, "path")?;
        let sha = manifest_str(entry, "sha256")?;
        let bytes = fs::read(root.join(path))
            .map_err(|_| Error::format(format!("missing file `{path}`")))?;
        let actual = sha256_hex(&bytes);
        if actual != sha {
            return Err(Error::format(format!(
                "hash mismatch for `{path}`: manifest {sha}, file {actual}"
            )));
        }
        if let Some(v) = entry.get("verdict").and_then(|v| v.as_str()) {
            verdicts.insert(path.to_string(), VerdictTier::from_name(v)?);
        }
        contents.insert(path.to_string(), bytes);
    }
    let get = |path: &str| -> Result<&Vec<u8>> {
        contents
            .get(path)
            .ok_or_else(|| Error::format(format!("manifest lists no `{path}`")))
    };

    let source_bytes = get(&format!("raw/{source}"))?.clone();
    let gtg = read_graphml(get("raw/gtg.graphml")?)?;
    let base_aig = read_graphml(get("raw/base_aig.graphml")?)?;
    let mut recipes = Vec::with_capacity(recipe_count);
    for k in 0..recipe_count {
        let mut r = read_recipe(get(&format!("raw/recipes/r{k:03}.txt"))?)?;
        r = Recipe::new(k, r.commands);
        recipes.push(r);
    }

    let mut groups = Vec::new();
    for t in NETWORK_TYPES {
        let g = group_dir(t);
        let mut results = Vec::with_capacity(recipe_count);
        for k in 0..recipe_count {
            let base = format!("{g}/r{k:03}");
            let verdict = |suffix: &str| -> Result<VerdictTier> {
                let path = format!("{base}/{suffix}.graphml");
                verdicts
                    .get(&path)
                    .copied()
                    .ok_or_else(|| Error::format(format!("manifest has no verdict for `{path}`")))
            };
            results.push(RecipeResult {
                network: read_graphml(get(&format!("{base}/network.graphml"))?)?,
                network_verdict: verdict("network")?,
                asic: read_graphml(get(&format!("{base}/asic.graphml"))?)?,
                asic_verdict: verdict("asic")?,
                fpga: read_graphml(get(&format!("{base}/fpga.graphml"))?)?,
                fpga_verdict: verdict("fpga")?,
                asic_qor: read_qor(get(&format!("{base}/asic_qor.json"))?)?,
                fpga_qor: read_qor(get(&format!("{base}/fpga_qor.json"))?)?,
            });
        }
        groups.push(TypeGroup {
            logic_type: t,
            results,
        });
    }

    Ok(DesignItem {
        name: design,
        source_name: source,
        source_bytes,
        gtg,
        base_aig,
        recipes,
        groups,
        master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;
    use crate::map::mini_library;
    use crate::pipeline::flow::{run_flow, FlowConfig};

    fn toy_item() -> DesignItem {
        let c = random_aig(81, 8, 40, 3);
        let mut config = FlowConfig::new(mini_library());
        config.recipes = 2;
        config.seed = 3;
        run_flow("toy.v", b"// fixture\n", &c, &config).unwrap()
    }

    #[test]
    fn pack_unpack_round_trips_manifests() {
        let item = toy_item();
        let dir = tempdir("pack1");
        let root = pack(&item, &dir).unwrap();
        let manifest1 = fs::read(root.join("manifest.json")).unwrap();
        let again = unpack(&root).unwrap();
        let dir2 = tempdir("pack2");
        let root2 = pack(&again, &dir2).unwrap();
        let manifest2 = fs::read(root2.join("manifest.json")).unwrap();
        assert_eq!(manifest1, manifest2);
        fs::remove_dir_all(dir).ok();
        fs::remove_dir_all(dir2).ok();
    }

    #[test]
    fn corruption_and_deletion_are_detected() {
        let item = toy_item();
        let dir = tempdir("pack3");
        let root = pack(&item, &dir).unwrap();
        let victim = root.join("aig/r000/asic_qor.json");
        let original = fs::read(&victim).unwrap();
        fs::write(&victim, b"{}").unwrap();
        let err = unpack(&root).unwrap_err().to_string();
        assert!(err.contains("hash mismatch"), "{err}");
        fs::write(&victim, original).unwrap();
        assert!(unpack(&root).is_ok());
        fs::remove_file(&victim).unwrap();
        let err = unpack(&root).unwrap_err().to_string();
        assert!(err.contains("missing file") && err.contains("asic_qor.json"), "{err}");
        fs::remove_dir_all(dir).ok();
    }

    fn tempdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("lsgen-test-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }
}
