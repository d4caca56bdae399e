use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ber::BerPoint;
use super::minrate::{CycleRow, MinRatePoint, MinRateSearch};
use crate::codec::DecoderConfig;
use crate::error::{Error, Result};
use crate::ladder::Rate;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentMode {
    #[default]
    Ber,
    Minrate,
    Cycles,
}

/// An experiment description, read from JSON or TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub mode: ExperimentMode,
    pub code_id: String,
    /// Ladder manifest, relative to the spec file.
    pub ladder: Option<PathBuf>,
    /// Rates as `"num/den"`; empty means every rate of the family.
    #[serde(serialize_with = "rates_out", deserialize_with = "rates_in")]
    pub rates: Vec<Rate>,
    pub p_values: Vec<f64>,
    pub frames: u64,
    pub couples: u64,
    pub seed: u64,
    pub decoder: DecoderConfig,
    /// Also run LDPCA on the same mother matrix.
    pub baseline: bool,
    /// Stop a BER point after this many frame errors.
    pub early_abort: Option<u64>,
    pub search: MinRateSearch,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            mode: ExperimentMode::Ber,
            code_id: "ladder".into(),
            ladder: None,
            rates: Vec::new(),
            p_values: Vec::new(),
            frames: 1000,
            couples: 1000,
            seed: 0,
            decoder: DecoderConfig::default(),
            baseline: true,
            early_abort: Some(200),
            search: MinRateSearch::Sweep,
        }
    }
}

fn rates_out<S: Serializer>(rates: &[Rate], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rates.iter().map(|r| r.to_string()))
}

fn rates_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rate>, D::Error> {
    let raw: Vec<String> = Vec::deserialize(d)?;
    raw.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 || self.couples == 0 {
            return Err(Error::InvalidArgument("frames and couples must be positive".into()));
        }
        if let Some(&p) = self.p_values.iter().find(|&&p| !(p > 0.0 && p < 0.5)) {
            return Err(Error::DegenerateChannel(p));
        }
        self.decoder.validate()
    }

    /// Parses JSON or TOML, chosen by the file extension.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let spec: Self = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|e| Error::InvalidArgument(e.to_string()))?,
            _ => serde_json::from_str(&text)?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Everything an experiment produced, with what is needed to rerun it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub version: String,
    pub spec: ExperimentSpec,
    pub ber: Vec<BerPoint>,
    pub min_rate: Vec<MinRatePoint>,
    pub cycles: Vec<CycleRow>,
    pub wall_clock_s: f64,
}

impl SimResult {
    pub fn new(spec: ExperimentSpec) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            spec,
            ber: Vec::new(),
            min_rate: Vec::new(),
            cycles: Vec::new(),
            wall_clock_s: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let dir = tempfile::tempdir().unwrap();
        let toml_path = dir.path().join("s.toml");
        std::fs::write(
            &toml_path,
            "mode = \"minrate\"\nrates = [\"1/4\", \"3/8\"]\np_values = [0.02, 0.04]\ncouples = 50\nseed = 3\n\n[decoder]\nmax_iterations = 40\n",
        )
        .unwrap();
        let a = ExperimentSpec::from_path(&toml_path).unwrap();
        assert_eq!(a.mode, ExperimentMode::Minrate);
        assert_eq!(a.rates[1], Rate::new(3, 8).unwrap());
        assert_eq!(a.decoder.max_iterations, 40);
        assert_eq!(a.decoder.llr_clamp, 30.0);
        let json_path = dir.path().join("s.json");
        std::fs::write(&json_path, serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(ExperimentSpec::from_path(&json_path).unwrap(), a);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad_p = ExperimentSpec { p_values: vec![0.5], ..Default::default() };
        assert!(bad_p.validate().is_err());
        let no_frames = ExperimentSpec { frames: 0, ..Default::default() };
        assert!(no_frames.validate().is_err());
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"rates": ["x"]}"#).is_err());
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"typo": 1}"#).is_err());
    }
}
