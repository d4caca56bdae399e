use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::build::{Anchor, CodeLadder, FineStep, LadderOptions};
use super::intermediate::IntermediateMatrix;
use super::rate::Rate;
use crate::error::{Error, Result};
use crate::gf2::{load_alist, save_alist};
use crate::graph::{load_typed, save_typed, TypedMatrix};
use crate::protograph::{Protograph, ThresholdReport};

/// An alist file with its type sidecar, relative to the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFiles {
    pub alist: String,
    pub types: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorEntry {
    pub rate: Rate,
    pub protograph: Protograph,
    pub intermediate_protograph: Protograph,
    pub intermediate: MatrixFiles,
    pub daughter: MatrixFiles,
    pub cprime: Vec<usize>,
    pub n4: u64,
    pub merges: Vec<(usize, usize)>,
    pub report: Option<ThresholdReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FineEntry {
    pub rate: Rate,
    pub pair: (usize, usize),
    pub matrix: MatrixFiles,
    pub intermediate: String,
    pub cprime: Vec<usize>,
}

/// On-disk description of a [`CodeLadder`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderManifest {
    pub version: String,
    pub seed: u64,
    pub k: usize,
    pub repeats: usize,
    pub n: usize,
    pub mother: MatrixFiles,
    pub mother_protograph: Protograph,
    pub anchors: Vec<AnchorEntry>,
    pub fine: Vec<Vec<FineEntry>>,
}

fn write_typed(dir: &Path, stem: &str, t: &TypedMatrix) -> Result<MatrixFiles> {
    let files = MatrixFiles { alist: format!("{stem}.alist"), types: format!("{stem}.types.json") };
    save_typed(t, dir.join(&files.alist), dir.join(&files.types))?;
    Ok(files)
}

fn read_typed(dir: &Path, f: &MatrixFiles) -> Result<TypedMatrix> {
    load_typed(dir.join(&f.alist), dir.join(&f.types))
}

/// Writes every matrix of `ladder` into `dir` and returns the manifest path.
pub fn save_ladder(ladder: &CodeLadder, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mother = write_typed(dir, "mother", &ladder.mother)?;
    let mut anchors = Vec::new();
    for (t, a) in ladder.anchors.iter().enumerate() {
        anchors.push(AnchorEntry {
            rate: a.rate,
            protograph: a.protograph.clone(),
            intermediate_protograph: a.intermediate.protograph.clone(),
            intermediate: write_typed(dir, &format!("anchor{}_int", t + 1), &a.intermediate.typed)?,
            daughter: write_typed(dir, &format!("anchor{}", t + 1), &a.daughter)?,
            cprime: a.cprime.clone(),
            n4: a.n4,
            merges: a.merges.clone(),
            report: a.report.clone(),
        });
    }
    let mut fine = Vec::new();
    for (t, steps) in ladder.fine.iter().enumerate() {
        let mut entries = Vec::new();
        for (k, s) in steps.iter().enumerate() {
            let stem = format!("fine{}_{:04}", t + 1, k + 1);
            let intermediate = format!("{stem}_int.alist");
            save_alist(&s.intermediate, dir.join(&intermediate))?;
            entries.push(FineEntry {
                rate: s.rate,
                pair: s.pair,
                matrix: write_typed(dir, &stem, &s.matrix)?,
                intermediate,
                cprime: s.cprime.clone(),
            });
        }
        fine.push(entries);
    }
    let manifest = LadderManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: ladder.options.seed,
        k: ladder.options.k,
        repeats: ladder.options.repeats,
        n: ladder.n(),
        mother,
        mother_protograph: ladder.mother_protograph.clone(),
        anchors,
        fine,
    };
    let path = dir.join("ladder.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}

/// Reads a ladder written by [`save_ladder`].
pub fn load_ladder(manifest: impl AsRef<Path>) -> Result<CodeLadder> {
    let path = manifest.as_ref();
    let dir = path.parent().unwrap_or(Path::new("."));
    let m: LadderManifest = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let mother = read_typed(dir, &m.mother)?;
    if mother.matrix.num_cols() != m.n {
        return Err(Error::DimensionMismatch { expected: m.n, found: mother.matrix.num_cols() });
    }
    let anchors = m
        .anchors
        .iter()
        .map(|a| {
            Ok(Anchor {
                rate: a.rate,
                protograph: a.protograph.clone(),
                intermediate: IntermediateMatrix::new(read_typed(dir, &a.intermediate)?, a.intermediate_protograph.clone())?,
                daughter: read_typed(dir, &a.daughter)?,
                cprime: a.cprime.clone(),
                n4: a.n4,
                merges: a.merges.clone(),
                report: a.report.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fine = m
        .fine
        .iter()
        .map(|steps| {
            steps
                .iter()
                .map(|s| {
                    Ok(FineStep {
                        rate: s.rate,
                        pair: s.pair,
                        matrix: read_typed(dir, &s.matrix)?,
                        intermediate: load_alist(dir.join(&s.intermediate))?,
                        cprime: s.cprime.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let fine_built = !fine.is_empty();
    Ok(CodeLadder {
        mother,
        mother_protograph: m.mother_protograph,
        anchors,
        fine,
        options: LadderOptions { k: m.k, repeats: m.repeats, seed: m.seed, fine: fine_built },
    })
}
