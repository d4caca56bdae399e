use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ber::draw_couple;
use super::family::RateAdaptiveCode;
use crate::codec::{channel_llr, BpDecoder, DecoderConfig, LdpcaCode};
use crate::error::{Error, Result};
use crate::graph::count_4cycles;
use crate::ladder::{CodeLadder, Rate};
use crate::par;
use crate::protograph::binary_entropy;

/// How the rate grid is searched for the lowest rate that decodes a couple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MinRateSearch {
    /// Try every rate from the lowest up.
    #[default]
    Sweep,
    /// Binary search, assuming success is monotone in the rate.
    Bisect,
}

/// Average lowest decodable rate at one crossover probability.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinRatePoint {
    pub code_id: String,
    pub p: f64,
    pub entropy: f64,
    pub couples: u64,
    /// Couples counted at rate 1 because even the highest rate failed.
    pub never_decoded: u64,
    pub avg_rate: f64,
    pub seed: u64,
}

/// For `couples` source couples, finds the lowest rate of `code` at which
/// belief propagation returns the source exactly, and averages it. Couples
/// that never decode count at rate 1.
pub fn min_rate_experiment(
    code: &dyn RateAdaptiveCode,
    p: f64,
    couples: u64,
    seed: u64,
    cfg: DecoderConfig,
    search: MinRateSearch,
) -> Result<MinRatePoint> {
    if couples == 0 {
        return Err(Error::InvalidArgument("at least one couple is needed".into()));
    }
    let rates = code.rates();
    let decoders = rates
        .iter()
        .map(|&r| BpDecoder::new(code.matrix(r)?, cfg))
        .collect::<Result<Vec<_>>>()?;
    let n = code.n();
    let found = par::map_range(0..couples as usize, |i| -> Result<Option<usize>> {
        let (x, y) = draw_couple(n, p, seed, i as u64);
        let llr = channel_llr(&y, p)?;
        let decodes = |k: usize| -> Result<bool> {
            let c = code.syndrome(rates[k], &x)?;
            Ok(decoders[k].decode(&c, &llr)?.x_hat == x)
        };
        match search {
            MinRateSearch::Sweep => {
                for k in 0..rates.len() {
                    if decodes(k)? {
                        return Ok(Some(k));
                    }
                }
                Ok(None)
            }
            MinRateSearch::Bisect => {
                let (mut lo, mut hi) = (0, rates.len());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    if decodes(mid)? {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                Ok((lo < rates.len()).then_some(lo))
            }
        }
    });
    let (mut sum, mut never) = (0.0, 0);
    for f in found {
        match f? {
            Some(k) => sum += rates[k].as_f64(),
            None => {
                sum += 1.0;
                never += 1;
            }
        }
    }
    Ok(MinRatePoint {
        code_id: code.id().to_string(),
        p,
        entropy: binary_entropy(p),
        couples,
        never_decoded: never,
        avg_rate: sum / couples as f64,
        seed,
    })
}

/// Length-4 cycle counts of the ladder and LDPCA at one rate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleRow {
    pub rate: Rate,
    pub ours: u64,
    pub ldpca: Option<u64>,
}

/// Cycle counts at the mother and every anchor rate.
pub fn cycle_report(ladder: &CodeLadder, ldpca: &LdpcaCode) -> Vec<CycleRow> {
    let n = ladder.n();
    let mut points = vec![(ladder.mother_rate(), &ladder.mother.matrix)];
    points.extend(ladder.anchors.iter().map(|a| (a.rate, &a.daughter.matrix)));
    points
        .into_iter()
        .map(|(rate, h)| {
            let m = rate.syndrome_bits(n).expect("anchor rates are on the grid");
            CycleRow { rate, ours: count_4cycles(h), ldpca: ldpca.merged(m).ok().map(count_4cycles) }
        })
        .collect()
}

/// Writes min-rate points as CSV with a header row.
pub fn write_min_rate_csv<W: Write>(points: &[MinRatePoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for p in points {
        wr.serialize(p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CycleRecord {
    rate_num: usize,
    rate_den: usize,
    ours: u64,
    ldpca: Option<u64>,
}

/// Writes cycle rows as CSV; a missing LDPCA count is an empty field.
pub fn write_cycles_csv<W: Write>(rows: &[CycleRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        let rec = CycleRecord { rate_num: r.rate.num(), rate_den: r.rate.den(), ours: r.ours, ldpca: r.ldpca };
        wr.serialize(rec).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::peg_lift;
    use crate::ladder::{build_ladder, LadderOptions, LadderPlan};
    use crate::protograph::{fixtures, Protograph};
    use crate::sim::family::{LadderFamily, LdpcaFamily};

    fn ladder() -> CodeLadder {
        let s = fixtures::extended_4x8();
        let h1 = peg_lift(&s, 32, 1).unwrap();
        let plan = LadderPlan::from_intermediates(
            s,
            vec![
                Protograph::new(vec![vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap(),
                Protograph::new(vec![vec![1, 1]]).unwrap(),
            ],
        )
        .unwrap();
        build_ladder(&h1, &plan, &LadderOptions::new(10, 2, 0).with_fine(true)).unwrap()
    }

    #[test]
    fn noiseless_couples_need_only_the_lowest_rate() {
        let l = ladder();
        let fam = LadderFamily::new("c", &l);
        let pt = min_rate_experiment(&fam, 1e-6, 20, 0, DecoderConfig::default(), MinRateSearch::Sweep).unwrap();
        assert_eq!(pt.avg_rate, 0.125);
        assert_eq!(pt.never_decoded, 0);
    }

    #[test]
    fn rate_grows_with_p_and_stays_above_entropy() {
        let l = ladder();
        let fam = LadderFamily::new("c", &l);
        let cfg = DecoderConfig::default();
        let mut last = 0.0;
        for p in [0.01, 0.03, 0.06] {
            let pt = min_rate_experiment(&fam, p, 20, 0, cfg, MinRateSearch::Sweep).unwrap();
            assert!(pt.avg_rate > pt.entropy, "{pt:?}");
            assert!(pt.avg_rate >= last);
            last = pt.avg_rate;
        }
    }

    #[test]
    fn bisection_matches_sweep_on_most_couples() {
        let l = ladder();
        let fam = LadderFamily::new("c", &l);
        let cfg = DecoderConfig::default();
        let a = min_rate_experiment(&fam, 0.03, 30, 4, cfg, MinRateSearch::Sweep).unwrap();
        let b = min_rate_experiment(&fam, 0.03, 30, 4, cfg, MinRateSearch::Bisect).unwrap();
        assert!((a.avg_rate - b.avg_rate).abs() < 0.02, "{a:?} {b:?}");
    }

    #[test]
    fn cycle_report_shares_the_mother() {
        let l = ladder();
        let ld = LdpcaFamily::matching("l", l.mother.matrix.clone(), &LadderFamily::new("c", &l)).unwrap();
        let rows = cycle_report(&l, &ld.code);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].ldpca, Some(rows[0].ours));
        assert_eq!(rows[0].ours, count_4cycles(&l.mother.matrix));
        assert!(rows.iter().all(|r| r.ldpca.is_some()));
    }

    #[test]
    fn csv_tables() {
        let rows = vec![
            CycleRow { rate: Rate::new(1, 2).unwrap(), ours: 10, ldpca: Some(10) },
            CycleRow { rate: Rate::new(3, 8).unwrap(), ours: 12, ldpca: None },
        ];
        let mut buf = Vec::new();
        write_cycles_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "rate_num,rate_den,ours,ldpca\n1,2,10,10\n3,8,12,\n");

        let pt = MinRatePoint {
            code_id: "c".into(),
            p: 0.02,
            entropy: 0.5,
            couples: 4,
            never_decoded: 1,
            avg_rate: 0.625,
            seed: 9,
        };
        let mut buf = Vec::new();
        write_min_rate_csv(&[pt], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "code_id,p,entropy,couples,never_decoded,avg_rate,seed\nc,0.02,0.5,4,1,0.625,9\n"
        );
    }
}
