//! The bundled regression corpus and its runner.
//!
//! Each manifest entry names a script and the items it must contain. Proof
//! items must check under the script's configuration; sequent items must be
//! found by search unless listed under `not_found`, in which case search
//! must exhaust the manifest depth without a proof.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{apply_duality, symmetrize_sequent, InvolutionKind, LiteralInvolution};
use crate::kernel::{
    check_proof, path_string, proof_duality, search_proof, symmetrize_proof, CalculusConfig, SearchOutcome,
};
use crate::registry::{consistency_guard, GuardOutcome};
use crate::script::{parse, ConfigFlags, ItemKind, ParseError, Script, ScriptError};

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        /// File name and text of every corpus script.
        pub const FILES: &[(&str, &str)] = &[$(($name, include_str!(concat!("../corpus/", $name)))),*];
    };
}

corpus_files!(
    "c01_membership.blq",
    "c02_entries.blq",
    "c03_focus_lemma.blq",
    "c04_focus_characterization.blq",
    "c05_universal_existential.blq",
    "c06_singleton.blq",
    "c07_virtual_exists.blq",
    "c08_collapse.blq",
    "c09_par_distribution.blq",
    "c10_idempotency.blq",
    "c11_conversion.blq",
    "c12_join_distribution.blq",
    "c13_sharp_negation.blq",
    "c14_top_axioms.blq",
    "c15_bell.blq",
    "c16_nowhere.blq",
    "c17_extension.blq",
);

pub const MANIFEST: &str = include_str!("../corpus/manifest.json");

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct Manifest {
    pub depth: usize,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct ManifestEntry {
    pub id: String,
    pub description: String,
    #[serde(default)]
    pub file: Option<String>,
    pub items: Vec<String>,
    #[serde(default)]
    pub not_found: Vec<String>,
    /// Domain that `consistency_guard` must collapse.
    #[serde(default)]
    pub collapses: Option<String>,
    #[serde(default)]
    pub perp_fixed: bool,
    /// Run `not_found` goals under all sixteen flag sets.
    #[serde(default)]
    pub every_flag_set: bool,
    #[serde(default)]
    pub symmetry_over: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{file}: {source}")]
    Parse { file: String, source: ParseError },
    #[error("{file}: {source}")]
    Script { file: String, source: ScriptError },
    #[error("{0} has no config line")]
    NoConfig(String),
}

/// One verified fact about a corpus item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub item: String,
    pub what: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryResult {
    pub id: String,
    pub description: String,
    pub ok: bool,
    pub lines: Vec<CheckLine>,
}

pub fn manifest() -> Result<Manifest, CorpusError> {
    serde_json::from_str(MANIFEST).map_err(|e| CorpusError::Manifest(e.to_string()))
}

pub fn file_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A parsed corpus script with its registry and configuration.
pub struct Loaded {
    pub script: Script,
    pub registry: crate::registry::Registry,
    pub config: CalculusConfig,
    pub flags: ConfigFlags,
}

pub fn load(file: &str, text: &str) -> Result<Loaded, CorpusError> {
    let script = parse(text).map_err(|source| CorpusError::Parse {
        file: file.to_string(),
        source,
    })?;
    let script_err = |source| CorpusError::Script {
        file: file.to_string(),
        source,
    };
    let registry = script.registry().map_err(script_err)?;
    let flags = script.flags().ok_or_else(|| CorpusError::NoConfig(file.to_string()))?;
    let config = script.config_with(&registry, flags).map_err(script_err)?;
    Ok(Loaded {
        script,
        registry,
        config,
        flags,
    })
}

fn line(item: &str, what: &str, ok: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        item: item.to_string(),
        what: what.to_string(),
        ok,
        detail: detail.into(),
    }
}

fn all_flag_sets() -> Vec<ConfigFlags> {
    (0..16u8)
        .map(|m| ConfigFlags {
            left_contexts: m & 1 != 0,
            right_contexts: m & 2 != 0,
            weakening: m & 4 != 0,
            cut: m & 8 != 0,
        })
        .collect()
}

fn run_file_entry(entry: &ManifestEntry, depth: usize, file: &str) -> Result<Vec<CheckLine>, CorpusError> {
    let text = file_text(file).ok_or_else(|| CorpusError::Manifest(format!("{} names missing file {file}", entry.id)))?;
    let loaded = load(file, text)?;
    let (script, reg, cfg) = (&loaded.script, &loaded.registry, &loaded.config);
    let mut lines = Vec::new();

    let listed: BTreeSet<&str> = entry.items.iter().map(String::as_str).collect();
    let present: BTreeSet<&str> = script.items.iter().map(|i| i.name.as_str()).collect();
    for missing in listed.difference(&present) {
        lines.push(line(missing, "coverage", false, "listed in the manifest but absent from the script"));
    }
    for extra in present.difference(&listed) {
        lines.push(line(extra, "coverage", false, "present in the script but not listed in the manifest"));
    }

    let item_lines: Vec<Vec<CheckLine>> = script
        .items
        .par_iter()
        .map(|item| {
            let name = item.name.as_str();
            match &item.kind {
                ItemKind::Proof(p) => {
                    let r = check_proof(p, cfg, reg);
                    let detail = match r.first_failure() {
                        None => format!("{} nodes", r.stats.nodes),
                        Some(e) => format!("{} at {}: {}", e.rule, path_string(&e.path), e.failure),
                    };
                    vec![line(name, "checks", r.ok, detail)]
                }
                ItemKind::Sequent(s) if entry.not_found.iter().any(|n| n == name) => {
                    let flag_sets = if entry.every_flag_set {
                        all_flag_sets()
                    } else {
                        vec![loaded.flags]
                    };
                    flag_sets
                        .into_iter()
                        .map(|flags| {
                            let label = format!("not found at depth {depth} {flags:?}");
                            match script
                                .config_with(reg, flags)
                                .map_err(|e| e.to_string())
                                .and_then(|c| search_proof(s, &c, reg, depth).map_err(|e| e.to_string()))
                            {
                                Ok(SearchOutcome::NotFound { .. }) => line(name, "not_found", true, label),
                                Ok(SearchOutcome::Found(_)) => line(name, "not_found", false, format!("found: {label}")),
                                Err(e) => line(name, "not_found", false, e),
                            }
                        })
                        .collect()
                }
                ItemKind::Sequent(s) => vec![match search_proof(s, cfg, reg, depth) {
                    Ok(SearchOutcome::Found(_)) => line(name, "proves", true, format!("found within depth {depth}")),
                    Ok(SearchOutcome::NotFound { .. }) => line(name, "proves", false, "no proof found"),
                    Err(e) => line(name, "proves", false, e.to_string()),
                }],
                ItemKind::Formula(f) if entry.perp_fixed => vec![match apply_duality(f, InvolutionKind::Perp) {
                    Ok(g) if g == *f => line(name, "perp_fixed", true, "unchanged by perp"),
                    Ok(g) => line(name, "perp_fixed", false, format!("perp gives {g}")),
                    Err(e) => line(name, "perp_fixed", false, e.to_string()),
                }],
                ItemKind::Formula(f) => vec![line(name, "well_formed", f.well_formed().is_ok(), "")],
            }
        })
        .collect();
    lines.extend(item_lines.into_iter().flatten());

    if let Some(domain) = &entry.collapses {
        match consistency_guard(reg, cfg, domain) {
            Ok(GuardOutcome::Collapse(proofs)) => {
                let ok = !proofs.is_empty() && proofs.iter().all(|p| check_proof(&p.proof, cfg, reg).ok);
                lines.push(line(domain, "collapses", ok, format!("{} entry equations derived", proofs.len())));
            }
            Ok(GuardOutcome::Consistent(_)) => lines.push(line(domain, "collapses", false, "guard reports consistent")),
            Err(e) => lines.push(line(domain, "collapses", false, e.to_string())),
        }
    }
    Ok(lines)
}

fn run_symmetry(entry: &ManifestEntry, manifest: &Manifest) -> Result<Vec<CheckLine>, CorpusError> {
    let mut lines = Vec::new();
    for id in &entry.symmetry_over {
        let Some(file) = manifest.entries.iter().find(|e| e.id == *id).and_then(|e| e.file.clone()) else {
            return Err(CorpusError::Manifest(format!("{} refers to {id}, which has no file", entry.id)));
        };
        let loaded = load(&file, file_text(&file).unwrap_or_default())?;
        let (reg, cfg) = (&loaded.registry, &loaded.config);
        let results: Vec<CheckLine> = loaded
            .script
            .proofs()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(name, p)| {
                let inv = LiteralInvolution::identity_with(proof_duality(p));
                let mirrored = match symmetrize_proof(p, &inv, cfg) {
                    Ok(m) => m,
                    Err(e) => return line(name, "symmetry", false, e.to_string()),
                };
                let report = check_proof(&mirrored, cfg, reg);
                if let Some(e) = report.first_failure() {
                    return line(name, "symmetry", false, format!("mirror fails: {e}"));
                }
                if mirrored.conclusion != symmetrize_sequent(&p.conclusion, &inv) {
                    return line(name, "symmetry", false, "mirror concludes the wrong sequent");
                }
                match symmetrize_proof(&mirrored, &inv, cfg) {
                    Ok(back) if back == **p => line(name, "symmetry", true, format!("mirror of {id} checks")),
                    Ok(_) => line(name, "symmetry", false, "double mirror differs"),
                    Err(e) => line(name, "symmetry", false, e.to_string()),
                }
            })
            .collect();
        lines.extend(results);
    }
    Ok(lines)
}

/// Run every manifest entry; results are in manifest order.
pub fn run_corpus() -> Result<Vec<EntryResult>, CorpusError> {
    let manifest = manifest()?;
    let listed: BTreeSet<&str> = manifest.entries.iter().filter_map(|e| e.file.as_deref()).collect();
    if let Some((unlisted, _)) = FILES.iter().find(|(n, _)| !listed.contains(n)) {
        return Err(CorpusError::Manifest(format!("{unlisted} is not covered by any entry")));
    }
    manifest
        .entries
        .par_iter()
        .map(|entry| {
            let lines = match &entry.file {
                Some(file) => run_file_entry(entry, manifest.depth, file)?,
                None => run_symmetry(entry, &manifest)?,
            };
            Ok(EntryResult {
                id: entry.id.clone(),
                description: entry.description.clone(),
                ok: !lines.is_empty() && lines.iter().all(|l| l.ok),
                lines,
            })
        })
        .collect()
}
