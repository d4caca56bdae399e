use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::family::RateAdaptiveCode;
use super::spec::ExperimentSpec;
use super::stats::wilson_interval;
use crate::codec::{channel_llr, BpDecoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::ladder::Rate;
use crate::par;
use crate::rng::{derive_path, rng_from};

/// Frames decoded between early-abort checks.
const BATCH: usize = 500;

/// One CSV row: error counts at one rate and crossover probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub code_id: String,
    pub rate_num: usize,
    pub rate_den: usize,
    pub p: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// Wilson 95% interval on the BER.
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl BerPoint {
    pub fn rate(&self) -> Rate {
        Rate::new(self.rate_num, self.rate_den).expect("stored rate is valid")
    }
}

/// Source and side information of frame `f`. Frames depend only on the
/// seed, `p` and `f`, so every code and rate sees the same couples.
pub(crate) fn draw_couple(n: usize, p: f64, seed: u64, f: u64) -> (BitVector, BitVector) {
    let mut rng = rng_from(derive_path(seed, &[p.to_bits(), f]));
    let x = BitVector::random(n, 0.5, &mut rng);
    let noise = BitVector::random(n, p, &mut rng);
    let y = x.xor(&noise);
    (x, y)
}

/// Decodes `frames` couples at one point; stops after the first batch that
/// brings the frame errors to `early_abort`.
pub fn simulate_point(
    code: &dyn RateAdaptiveCode,
    rate: Rate,
    p: f64,
    frames: u64,
    seed: u64,
    cfg: DecoderConfig,
    early_abort: Option<u64>,
) -> Result<BerPoint> {
    if frames == 0 {
        return Err(Error::InvalidArgument("at least one frame is needed".into()));
    }
    let n = code.n();
    let decoder = BpDecoder::new(code.matrix(rate)?, cfg)?;
    let (mut done, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
    while done < frames {
        let batch = (frames - done).min(BATCH as u64) as usize;
        let results = par::map_range(0..batch, |i| -> Result<u64> {
            let (x, y) = draw_couple(n, p, seed, done + i as u64);
            let c = code.syndrome(rate, &x)?;
            let out = decoder.decode(&c, &channel_llr(&y, p)?)?;
            Ok(out.x_hat.hamming_distance(&x) as u64)
        });
        for r in results {
            let e = r?;
            bit_errors += e;
            frame_errors += (e > 0) as u64;
        }
        done += batch as u64;
        if early_abort.is_some_and(|limit| frame_errors >= limit) {
            break;
        }
    }
    let bits = done * n as u64;
    let (ci_low, ci_high) = wilson_interval(bit_errors, bits, 1.96);
    Ok(BerPoint {
        code_id: code.id().to_string(),
        rate_num: rate.num(),
        rate_den: rate.den(),
        p,
        frames: done,
        bit_errors,
        frame_errors,
        ber: bit_errors as f64 / bits as f64,
        fer: frame_errors as f64 / done as f64,
        ci_low,
        ci_high,
        seed,
    })
}

/// Every (code, rate, p) point of `spec`. Rates default to those every code
/// offers when `spec.rates` is empty.
pub fn simulate_ber(spec: &ExperimentSpec, codes: &[&dyn RateAdaptiveCode]) -> Result<Vec<BerPoint>> {
    spec.validate()?;
    let mut out = Vec::new();
    for code in codes {
        let rates = if spec.rates.is_empty() { code.rates() } else { spec.rates.clone() };
        for &rate in &rates {
            for &p in &spec.p_values {
                let t = Instant::now();
                let point = simulate_point(*code, rate, p, spec.frames, spec.seed, spec.decoder, spec.early_abort)?;
                log::info!(
                    "{} rate {rate} p {p}: ber {:.3e} fer {:.3e} ({} frames, {:.1?})",
                    code.id(),
                    point.ber,
                    point.fer,
                    point.frames,
                    t.elapsed()
                );
                out.push(point);
            }
        }
    }
    Ok(out)
}

/// Writes points as CSV with a header row.
pub fn write_ber_csv<W: Write>(points: &[BerPoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for p in points {
        wr.serialize(p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}
