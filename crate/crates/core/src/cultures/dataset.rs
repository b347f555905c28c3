//! The standard dataset: 23 culture configurations, 20 instances each, plus
//! the four extreme matrices as map anchors.
//!
//! Layout on disk:
//!
//! ```text
//! <dir>/manifest.csv          id,culture,params,seed,path
//! <dir>/instances/i000.txt    one instance file per entry
//! <dir>/anchors/ID.csv        mutual attraction matrices, no header
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{derive_seed, generate, generate_sm, Culture, CultureSpec};
use crate::error::{Error, Result};
use crate::extremes::{extreme_matrix, ExtremeKind};

pub const INSTANCES_PER_CONFIG: usize = 20;
pub const MANIFEST_FILE: &str = "manifest.csv";

pub fn standard_configs() -> Vec<Culture> {
    use Culture::*;
    let mut c = vec![Ic, TwoIc { p: 0.25 }, TwoIc { p: 0.5 }];
    c.extend([0.2, 0.4, 0.6, 0.8].map(|norm_phi| Mallows { norm_phi }));
    c.extend([1, 2].map(|d| Euclidean { d }));
    c.extend([0.05, 0.15, 0.25].map(|p| ReverseEuclidean { p, d: 2 }));
    c.extend([0.2, 0.4].map(|norm_phi| MallowsEuclidean { norm_phi, d: 2 }));
    c.extend([0.2, 0.4].map(|sigma| ExpectationsEuclidean { sigma, d: 2 }));
    c.extend([0.2, 0.4].map(|f| FameEuclidean { f, d: 2 }));
    c.extend([2, 5].map(|d| Attributes { d }));
    c.extend([0.2, 0.4, 0.6].map(|norm_phi| MallowsMd { norm_phi }));
    c
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub spec: CultureSpec,
    /// Relative to the dataset directory.
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorEntry {
    pub kind: ExtremeKind,
    /// Relative to the dataset directory.
    pub path: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
    pub anchors: Vec<AnchorEntry>,
}

impl DatasetManifest {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["id", "culture", "params", "seed", "path"])?;
        for e in &self.entries {
            w.write_record([
                e.id.as_str(),
                e.spec.culture.name(),
                &e.spec.culture.params_string(),
                &e.spec.seed.to_string(),
                &path_str(&e.path),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `manifest.csv` and whichever anchor matrices exist in `dir`.
    pub fn load(dir: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(dir.join(MANIFEST_FILE))?;
        let mut entries = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            let field = |k: usize| {
                rec.get(k).ok_or_else(|| Error::Parse {
                    line,
                    msg: "manifest row has fewer than 5 fields".into(),
                })
            };
            let culture = Culture::parse(field(1)?, field(2)?).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            let seed = field(3)?.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad seed `{}`", field(3).unwrap_or("")),
            })?;
            entries.push(ManifestEntry {
                id: field(0)?.to_string(),
                spec: CultureSpec::new(culture, seed),
                path: PathBuf::from(field(4)?),
            });
        }
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParam(format!("duplicate id {} in manifest", w[0])));
        }
        let anchors = ExtremeKind::ALL
            .iter()
            .map(|&kind| AnchorEntry {
                kind,
                path: anchor_path(kind),
            })
            .filter(|a| dir.join(&a.path).is_file())
            .collect();
        Ok(DatasetManifest { entries, anchors })
    }
}

fn anchor_path(kind: ExtremeKind) -> PathBuf {
    PathBuf::from(format!("anchors/{}.csv", kind.name()))
}

// Forward slashes on every platform so manifests are portable.
fn path_str(p: &Path) -> String {
    p.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

/// Builds the standard 460-instance SR dataset with anchors into `out_dir`.
pub fn build_dataset(two_n: usize, master_seed: u64, out_dir: &Path) -> Result<DatasetManifest> {
    build_dataset_with(&standard_configs(), INSTANCES_PER_CONFIG, two_n, master_seed, out_dir, false)
}

/// Builds `per_config` instances of each configuration. Instance `k` of
/// configuration `c` is seeded with `derive_seed(master_seed, c, k)`.
/// SR datasets also get the four anchor matrices; SM datasets have none.
pub fn build_dataset_with(
    configs: &[Culture],
    per_config: usize,
    agents: usize,
    master_seed: u64,
    out_dir: &Path,
    sm: bool,
) -> Result<DatasetManifest> {
    if agents < 2 || agents % 2 != 0 {
        return Err(Error::InvalidParam(format!("agent count must be even, got {agents}")));
    }
    for c in configs {
        c.validate()?;
    }
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..per_config).map(move |k| (c, k)))
        .collect();
    let made: Vec<(ManifestEntry, String)> = jobs
        .par_iter()
        .enumerate()
        .map(|(idx, &(c, k))| {
            let spec = CultureSpec::new(configs[c], derive_seed(master_seed, c as u64, k as u64));
            let text = if sm {
                generate_sm(&spec, agents / 2)?.to_text()
            } else {
                generate(&spec, agents)?.to_text()
            };
            let id = format!("i{idx:03}");
            let path = PathBuf::from(format!("instances/{id}.txt"));
            Ok((ManifestEntry { id, spec, path }, text))
        })
        .collect::<Result<_>>()?;

    fs::create_dir_all(out_dir.join("instances"))?;
    for (e, text) in &made {
        fs::write(out_dir.join(&e.path), text)?;
    }
    let mut anchors = Vec::new();
    if !sm && agents >= 4 {
        fs::create_dir_all(out_dir.join("anchors"))?;
        for kind in ExtremeKind::ALL {
            let path = anchor_path(kind);
            fs::write(out_dir.join(&path), extreme_matrix(kind, agents)?.to_csv())?;
            anchors.push(AnchorEntry { kind, path });
        }
    }
    let manifest = DatasetManifest {
        entries: made.into_iter().map(|(e, _)| e).collect(),
        anchors,
    };
    manifest.write_csv(&out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::parse_instance;

    #[test]
    fn standard_composition() {
        let c = standard_configs();
        assert_eq!(c.len(), 23);
        let labels: std::collections::HashSet<String> = c.iter().map(Culture::label).collect();
        assert_eq!(labels.len(), 23);
    }

    #[test]
    fn small_build_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let configs = [Culture::Ic, Culture::Euclidean { d: 1 }];
        let m = build_dataset_with(&configs, 3, 6, 5, dir.path(), false).unwrap();
        assert_eq!(m.entries.len(), 6);
        assert_eq!(m.anchors.len(), 4);
        let loaded = DatasetManifest::load(dir.path()).unwrap();
        assert_eq!(loaded, m);
        for e in &m.entries {
            let text = fs::read_to_string(dir.path().join(&e.path)).unwrap();
            let inst = parse_instance(&text).unwrap();
            assert_eq!(inst.num_agents(), 6);
        }
        let manifest = fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(manifest.starts_with("id,culture,params,seed,path\ni000,ic,,"));
        assert!(manifest.contains(",euclidean,d=1,"));
    }

    #[test]
    fn sm_build_has_no_anchors() {
        let dir = tempfile::tempdir().unwrap();
        let m = build_dataset_with(&[Culture::Ic], 2, 6, 1, dir.path(), true).unwrap();
        assert!(m.anchors.is_empty());
        let text = fs::read_to_string(dir.path().join(&m.entries[0].path)).unwrap();
        assert!(text.starts_with("sm 3\n"));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join(MANIFEST_FILE),
            "id,culture,params,seed,path\na,ic,,1,x.txt\na,ic,,2,y.txt\n",
        )
        .unwrap();
        assert!(DatasetManifest::load(dir.path()).is_err());
    }
}
