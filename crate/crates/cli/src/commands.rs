//! One function per subcommand.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::Args;
use rateladder::codec::LdpcaCode;
use rateladder::gf2::load_alist;
use rateladder::graph::{count_4cycles, load_typed, peg_lift, random_lift, realized_protograph, save_typed};
use rateladder::ladder::{build_ladder, load_ladder, plan_ladder, save_ladder, CodeLadder, LadderOptions, LadderPlan};
use rateladder::protograph::{de_threshold, extend_protograph, optimize_protograph, DeOptions, DeParams, Protograph};
use rateladder::rng::derive_seed;
use rateladder::sim::{
    cycle_report, min_rate_experiment, simulate_ber, write_ber_csv, write_cycles_csv, write_min_rate_csv, CycleRow,
    ExperimentMode, ExperimentSpec, LadderFamily, LdpcaFamily, RateAdaptiveCode, SimResult,
};
use serde::Serialize;

use crate::io::{self, stamped};
use crate::Global;

/// Density-evolution accuracy knobs; defaults favour speed.
#[derive(Args, Debug, Clone, Copy)]
pub struct DeArgs {
    /// Monte Carlo samples per protograph edge.
    #[arg(long, default_value_t = DeParams::fast().samples_per_edge)]
    pub de_samples: usize,
    /// Decoding iterations per density-evolution run.
    #[arg(long, default_value_t = DeParams::fast().max_iterations)]
    pub de_iterations: usize,
}

impl DeArgs {
    fn params(&self, seed: u64) -> DeParams {
        DeParams { samples_per_edge: self.de_samples, max_iterations: self.de_iterations, ..DeParams::fast() }
            .with_seed(seed)
    }
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    /// Check node types.
    #[arg(long)]
    pub cn: usize,
    /// Variable node types.
    #[arg(long)]
    pub vn: usize,
    /// Largest entry of the protograph.
    #[arg(long)]
    pub dmax: u32,
    /// Population size.
    #[arg(long, default_value_t = 60)]
    pub pop: usize,
    /// Generations; 0 keeps the best random candidate.
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    #[command(flatten)]
    pub de: DeArgs,
    /// Output JSON file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn optimize(g: &Global, a: OptimizeArgs) -> Result<()> {
    let seed = g.seed()?;
    let mut opts = DeOptions::new(a.cn, a.vn, a.dmax, a.pop, a.iters, seed);
    opts.de_params = a.de.params(derive_seed(seed, 1));
    if let Some(msg) = rateladder::protograph::population_advisory(a.pop, a.cn * a.vn) {
        log::warn!("{msg}");
    }
    let out = optimize_protograph(&opts)?;
    eprintln!("threshold {:.4}\n{}", out.report.threshold, out.protograph);
    io::write_json(a.out.as_deref(), &stamped(seed, &out))
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    /// Protograph JSON file.
    #[arg(long)]
    pub protograph: PathBuf,
    /// Extension factor.
    #[arg(long)]
    pub ze: usize,
    /// Output JSON file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ExtendOut<'a> {
    z_e: usize,
    source: &'a Protograph,
    protograph: &'a Protograph,
}

pub fn extend(g: &Global, a: ExtendArgs) -> Result<()> {
    let seed = g.seed()?;
    let s = io::read_protograph(&a.protograph)?;
    let ext = extend_protograph(&s, a.ze, seed)?;
    io::write_json(a.out.as_deref(), &stamped(seed, ExtendOut { z_e: a.ze, source: &s, protograph: &ext }))
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    /// Protograph JSON file.
    #[arg(long)]
    pub protograph: PathBuf,
    /// Lifting factor.
    #[arg(long)]
    pub z: usize,
    /// Place edges uniformly at random instead of by progressive edge growth.
    #[arg(long)]
    pub random: bool,
    /// Output alist file; type labels go next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct LiftMeta<'a> {
    z: usize,
    method: &'a str,
    protograph: &'a Protograph,
    rows: usize,
    cols: usize,
    cycles4: u64,
}

pub fn lift(g: &Global, a: LiftArgs) -> Result<()> {
    let seed = g.seed()?;
    let s = io::read_protograph(&a.protograph)?;
    let h = if a.random { random_lift(&s, a.z, seed)? } else { peg_lift(&s, a.z, seed)? };
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(rateladder::Error::from)?;
    }
    save_typed(&h, &a.out, io::sibling(&a.out, "types.json"))?;
    let meta = LiftMeta {
        z: a.z,
        method: if a.random { "random" } else { "peg" },
        protograph: &s,
        rows: h.matrix.num_rows(),
        cols: h.matrix.num_cols(),
        cycles4: count_4cycles(&h.matrix),
    };
    println!("{}x{} matrix, {} length-4 cycles", meta.rows, meta.cols, meta.cycles4);
    io::write_json(Some(&io::sibling(&a.out, "meta.json")), &stamped(seed, meta))
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Mother protograph JSON file, before extension.
    #[arg(long)]
    pub protograph: PathBuf,
    /// Protograph extension factor.
    #[arg(long, default_value_t = 1)]
    pub ze: usize,
    /// Lifting factor.
    #[arg(long)]
    pub z: usize,
    /// Candidate rows drawn per merge.
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    /// Independent merge passes per anchor; the fewest cycles wins.
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    /// JSON list of intermediate protographs, one per anchor; chosen by
    /// density evolution when absent.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Only build the anchor rates.
    #[arg(long)]
    pub no_fine: bool,
    #[command(flatten)]
    pub de: DeArgs,
    /// Directory for the manifest and matrices.
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn build(g: &Global, a: BuildArgs) -> Result<()> {
    let seed = g.seed()?;
    let s = io::read_protograph(&a.protograph)?;
    let s1 = extend_protograph(&s, a.ze, derive_seed(seed, 1))?;
    let plan = match &a.plan {
        Some(p) => LadderPlan::from_intermediates(s1.clone(), io::read_protograph_list(p)?)?,
        None => plan_ladder(&s1, &a.de.params(derive_seed(seed, 2)))?,
    };
    let h1 = peg_lift(&s1, a.z, derive_seed(seed, 3))?;
    let t = Instant::now();
    let opts = LadderOptions::new(a.k, a.repeats, seed).with_fine(!a.no_fine);
    let ladder = build_ladder(&h1, &plan, &opts)?;
    log::info!("ladder built in {:.1?}", t.elapsed());
    let manifest = save_ladder(&ladder, &a.out_dir)?;
    println!("mother {}x{}, {} grid rates", ladder.mother.matrix.num_rows(), ladder.n(), ladder.grid().len());
    print_cycles(&cycle_rows(&ladder)?);
    println!("manifest {}", manifest.display());
    Ok(())
}

fn cycle_rows(ladder: &CodeLadder) -> Result<Vec<CycleRow>> {
    let n = ladder.n();
    let targets = ladder.anchor_rates().iter().map(|r| r.syndrome_bits(n)).collect::<rateladder::Result<Vec<_>>>()?;
    let ldpca = LdpcaCode::new(ladder.mother.matrix.clone(), &targets)?;
    Ok(cycle_report(ladder, &ldpca))
}

fn print_cycles(rows: &[CycleRow]) {
    println!("{:>8} {:>10} {:>10}", "rate", "ladder", "ldpca");
    for r in rows {
        let ld = r.ldpca.map_or("-".to_string(), |v| v.to_string());
        println!("{:>8} {:>10} {:>10}", r.rate.to_string(), r.ours, ld);
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Experiment spec, JSON or TOML.
    #[arg(long)]
    pub spec: PathBuf,
    /// Ladder manifest; overrides the one named in the spec.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Output CSV; the full result is written next to it as JSON.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn simulate(g: &Global, a: SimulateArgs) -> Result<()> {
    let mut spec = ExperimentSpec::from_path(&a.spec).with_context(|| format!("reading {}", a.spec.display()))?;
    if let Some(s) = g.seed {
        spec.seed = s;
    }
    let manifest = match (&a.manifest, &spec.ladder) {
        (Some(m), _) => m.clone(),
        (None, Some(l)) => a.spec.parent().unwrap_or(Path::new(".")).join(l),
        (None, None) => {
            return Err(rateladder::Error::InvalidArgument("no ladder manifest given".into()).into());
        }
    };
    let ladder = load_ladder(&manifest).with_context(|| format!("loading {}", manifest.display()))?;
    let t = Instant::now();
    let ours = LadderFamily::new(spec.code_id.clone(), &ladder);
    let baseline = if spec.baseline && spec.mode != ExperimentMode::Cycles {
        Some(LdpcaFamily::matching("ldpca", ladder.mother.matrix.clone(), &ours)?)
    } else {
        None
    };
    let mut codes: Vec<&dyn RateAdaptiveCode> = vec![&ours];
    if let Some(b) = &baseline {
        codes.push(b);
    }
    let mut result = SimResult::new(spec.clone());
    let out = io::create_file(&a.out)?;
    match spec.mode {
        ExperimentMode::Ber => {
            result.ber = simulate_ber(&spec, &codes)?;
            write_ber_csv(&result.ber, out)?;
        }
        ExperimentMode::Minrate => {
            for &p in &spec.p_values {
                for code in &codes {
                    let pt = min_rate_experiment(*code, p, spec.couples, spec.seed, spec.decoder, spec.search)?;
                    log::info!("{} p {p}: H(p) {:.4}, rate {:.4}", pt.code_id, pt.entropy, pt.avg_rate);
                    result.min_rate.push(pt);
                }
            }
            write_min_rate_csv(&result.min_rate, out)?;
        }
        ExperimentMode::Cycles => {
            result.cycles = cycle_rows(&ladder)?;
            print_cycles(&result.cycles);
            write_cycles_csv(&result.cycles, out)?;
        }
    }
    result.wall_clock_s = t.elapsed().as_secs_f64();
    io::write_json(Some(&io::sibling(&a.out, "json")), &result)
}

#[derive(Args, Debug)]
pub struct CyclesArgs {
    /// An alist file or a ladder manifest.
    pub path: PathBuf,
    /// Write the per-rate counts of a ladder as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cycles(_g: &Global, a: CyclesArgs) -> Result<()> {
    if is_alist(&a.path) {
        let h = load_alist(&a.path)?;
        println!("{}", count_4cycles(&h));
        return Ok(());
    }
    let ladder = load_ladder(&a.path)?;
    let rows = cycle_rows(&ladder)?;
    print_cycles(&rows);
    if let Some(out) = &a.out {
        write_cycles_csv(&rows, io::create_file(out)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    /// A protograph JSON, an alist file or a ladder manifest.
    pub path: PathBuf,
    /// Also compute the density-evolution threshold of a protograph.
    #[arg(long)]
    pub threshold: bool,
    #[command(flatten)]
    pub de: DeArgs,
}

fn is_alist(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "alist")
}

fn describe(p: &Protograph) {
    println!("{} check types x {} variable types, rate {:.4}", p.cn_types(), p.vn_types(), p.rate());
    println!("{p}");
    println!("column degrees {:?}", p.column_degrees());
    println!("row degrees {:?}", p.row_degrees());
}

pub fn inspect(g: &Global, a: InspectArgs) -> Result<()> {
    if is_alist(&a.path) {
        let h = load_alist(&a.path)?;
        let (m, n) = (h.num_rows(), h.num_cols());
        let rw = h.row_weights();
        let cw = h.column_weights();
        println!("{m}x{n}, {} ones, rank {}", h.nnz(), h.rank());
        println!("row weights {}..={}", rw.iter().min().unwrap_or(&0), rw.iter().max().unwrap_or(&0));
        println!("column weights {}..={}", cw.iter().min().unwrap_or(&0), cw.iter().max().unwrap_or(&0));
        println!("length-4 cycles {}", count_4cycles(&h));
        let side = io::sibling(&a.path, "types.json");
        if side.exists() {
            match load_typed(&a.path, &side).and_then(|t| realized_protograph(&t)) {
                Ok(p) => println!("realized protograph\n{p}"),
                Err(e) => println!("types: {e}"),
            }
        }
        return Ok(());
    }
    let text = std::fs::read_to_string(&a.path).map_err(rateladder::Error::from)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(rateladder::Error::from)?;
    if value.get("anchors").is_some() {
        let ladder = load_ladder(&a.path)?;
        println!("mother {}x{}", ladder.mother.matrix.num_rows(), ladder.n());
        describe(&ladder.mother_protograph);
        let grid = ladder.grid();
        println!("{} grid rates from {} down to {}", grid.len(), grid[0].rate, grid[grid.len() - 1].rate);
        print_cycles(&cycle_rows(&ladder)?);
        return Ok(());
    }
    let p = io::protograph_from_value(value)?;
    describe(&p);
    if a.threshold {
        let r = de_threshold(&p, &a.de.params(g.seed()?))?;
        println!("threshold {:.4}", r.threshold);
    }
    Ok(())
}
