//! `ccdm`: subset ranking, distribution matching and experiment sweeps.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error, 1 anything else.

mod config;
mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{
    ArgMatches, Args, Command, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum,
};
use num_bigint::BigUint;
use serde::Serialize;

use ccdm::analysis::{self, DosRow};
use ccdm::architectures::{
    bl_demap_with, bl_from_bit_probabilities, bl_map_with, ordering_profile, pa_best_ordering_with,
    pa_demap_with, pa_map_with, pa_split, BlPlan, ComponentDms, PaPlan, TieBreak,
};
use ccdm::shaping::{bl_optimal_levels_with, Budget, ChannelPoint, Labeling};
use ccdm::subsetrank::{rank, unrank};
use ccdm::{
    BinaryCodec, BitWord, Composition, Execution, NbEnumCodec, Order, Rank, ShapedSequence, Subset,
};

use output::{Format, Provenance};

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Parser)]
#[command(
    name = "ccdm",
    version,
    about = "Constant-composition distribution matching via subset ranking"
)]
struct Cli {
    /// key = value file; its entries override command-line flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Run data-parallel loops sequentially.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank a subset of {1..n}.
    Rank(RankArgs),
    /// Subset with a given rank.
    Unrank(UnrankArgs),
    /// Map bits to a shaped sequence.
    Map(MapArgs),
    /// Recover the bits of a shaped sequence.
    Demap(DemapArgs),
    /// Show a PA-DM or BL-DM plan.
    Plan(PlanArgs),
    /// Emit experiment tables.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long, default_value = "lex")]
    order: Order,
    /// Comma-separated elements, e.g. 2,4,8,9.
    #[arg(long)]
    subset: String,
}

#[derive(Args)]
struct UnrankArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: usize,
    #[arg(long, default_value = "lex")]
    order: Order,
    #[arg(long)]
    rank: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    Sr,
    Pa,
    Bl,
    Nb,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Block length (sr, bl).
    #[arg(long)]
    n: Option<usize>,
    /// Weight of the marked symbol, printed as `1` (sr).
    #[arg(long)]
    w: Option<usize>,
    #[arg(long, default_value = "lex")]
    order: Order,
    /// Amplitude counts, e.g. 46,32,16,6 (pa, nb).
    #[arg(long)]
    composition: Option<String>,
    /// 1-based amplitude ordering (pa); defaults to the best ordering.
    #[arg(long)]
    ordering: Option<String>,
    /// Zero-bit count per level, most significant first (bl).
    #[arg(long)]
    zeros: Option<String>,
    /// Comma-separated symbol names used instead of 1-based indices.
    #[arg(long)]
    alpha: Option<String>,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    codec: CodecArgs,
    /// MSB-first bit string; read from stdin when absent.
    #[arg(long)]
    bits: Option<String>,
}

#[derive(Args)]
struct DemapArgs {
    #[command(flatten)]
    codec: CodecArgs,
    /// Shaped sequence; read from stdin when absent.
    #[arg(long)]
    seq: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlanScheme {
    Pa,
    Bl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    Lex,
    MinSerialism,
}

impl From<TieBreakArg> for TieBreak {
    fn from(t: TieBreakArg) -> Self {
        match t {
            TieBreakArg::Lex => TieBreak::Lex,
            TieBreakArg::MinSerialism => TieBreak::MinSerialism,
        }
    }
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum)]
    scheme: PlanScheme,
    #[arg(long)]
    composition: Option<String>,
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, value_enum, default_value = "lex")]
    tie_break: TieBreakArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    zeros: Option<String>,
    /// Derive BL levels from the AIR-optimal product distribution at this SNR.
    #[arg(long)]
    snr: Option<f64>,
    #[arg(long, default_value_t = 4)]
    m: usize,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; defaults to `<dir>/<sweep>.<ext>` or stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "CCDM_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ChannelArgs {
    /// Positive amplitudes per dimension (4 for 64QAM, 8 for 256QAM).
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// `gh:NODES` or `mc:SAMPLES`.
    #[arg(long, default_value = "gh:32")]
    budget: String,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = Budget::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "gray")]
    labeling: LabelingArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LabelingArg {
    Gray,
    Natural,
}

impl ChannelArgs {
    fn point(&self) -> anyhow::Result<ChannelPoint> {
        let budget = parse_budget(&self.budget, self.seed)?;
        let labeling = match self.labeling {
            LabelingArg::Gray => Labeling::Gray,
            LabelingArg::Natural => Labeling::Natural,
        };
        Ok(ChannelPoint::new(0.0, self.m)
            .with_budget(budget)
            .with_labeling(labeling))
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(subcommand)]
    kind: SweepKind,
}

#[derive(Subcommand)]
enum SweepKind {
    /// DoS reduction over all weights (one row per n, w).
    Dos {
        /// Block lengths, comma-separated.
        #[arg(long, default_value = "100")]
        n: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// NB, PA and BL rate losses of the MB-shaped design.
    Rateloss {
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// SNR grid in dB: `13`, `10,13,16` or `start:stop:step`.
        #[arg(long, default_value = "13")]
        snr: String,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Finite-length BMD rates of the three architectures.
    Air {
        #[arg(long, default_value = "500")]
        n: String,
        #[arg(long, default_value = "10:16:0.5")]
        snr: String,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// PA-DM with subset-ranking components against a nonbinary AC matcher.
    Pasr {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        snr: Option<String>,
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Lex and colex ranks of all w-subsets.
    Table1 {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        w: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Accumulated PA input length for every ordering.
    Ordering {
        #[arg(long, default_value = "4,3,2,1")]
        composition: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| usage(format!("invalid {what} entry '{t}'")))
        })
        .collect()
}

fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [start, stop, step] => {
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| usage(format!("invalid grid '{s}'")))
            };
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if h.is_nan() || h <= 0.0 || b < a {
                return Err(usage(format!("invalid grid '{s}'")));
            }
            let steps = ((b - a) / h + 1e-9).floor() as usize;
            (0..=steps)
                .map(|i| ((a + i as f64 * h) * 1e9).round() / 1e9)
                .collect()
        }
        [_] => parse_list(s, "grid")?,
        _ => return Err(usage(format!("invalid grid '{s}'"))),
    };
    if grid.is_empty() || grid.iter().any(|x: &f64| !x.is_finite()) {
        return Err(usage(format!("invalid grid '{s}'")));
    }
    Ok(grid)
}

fn parse_budget(s: &str, seed: u64) -> anyhow::Result<Budget> {
    let (kind, count) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("invalid budget '{s}'")))?;
    let count: usize = count
        .parse()
        .map_err(|_| usage(format!("invalid budget '{s}'")))?;
    if count == 0 {
        return Err(usage("budget must be positive"));
    }
    match kind {
        "gh" => Ok(Budget::GaussHermite { nodes: count }),
        "mc" => Ok(Budget::MonteCarlo {
            samples: count,
            seed,
        }),
        _ => Err(usage(format!("unknown budget kind '{kind}'"))),
    }
}

fn parse_composition(s: Option<&str>) -> anyhow::Result<Composition> {
    let s = s.ok_or_else(|| usage("--composition is required"))?;
    Ok(Composition::new(parse_list(s, "composition")?)?)
}

fn parse_ordering(s: &str, m: usize) -> anyhow::Result<Vec<usize>> {
    let one_based: Vec<usize> = parse_list(s, "ordering")?;
    if one_based.iter().any(|&a| a == 0 || a > m) {
        return Err(usage(format!("ordering entries must lie in 1..={m}")));
    }
    Ok(one_based.into_iter().map(|a| a - 1).collect())
}

fn require<T>(v: Option<T>, flag: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required")))
}

fn read_input(value: Option<String>) -> anyhow::Result<String> {
    match value {
        Some(v) => Ok(v.trim().to_string()),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            Ok(s.trim().to_string())
        }
    }
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

enum Codec {
    Sr(BinaryCodec),
    Pa(PaPlan),
    Bl(BlPlan),
    Nb(NbEnumCodec),
}

impl Codec {
    fn build(a: &CodecArgs, exec: Execution) -> anyhow::Result<Self> {
        Ok(match a.scheme {
            Scheme::Sr => Codec::Sr(BinaryCodec::with_order(
                require(a.n, "n")?,
                require(a.w, "w")?,
                a.order,
            )?),
            Scheme::Pa => {
                let c = parse_composition(a.composition.as_deref())?;
                let plan = match &a.ordering {
                    Some(o) => pa_split(&c, &parse_ordering(o, c.m())?)?,
                    None => pa_best_ordering_with(&c, TieBreak::Lex, exec)?.plan,
                };
                Codec::Pa(plan)
            }
            Scheme::Bl => {
                let zeros = parse_list(&require(a.zeros.clone(), "zeros")?, "zeros")?;
                Codec::Bl(BlPlan::from_zeros(require(a.n, "n")?, &zeros)?)
            }
            Scheme::Nb => Codec::Nb(NbEnumCodec::new(parse_composition(
                a.composition.as_deref(),
            )?)?),
        })
    }

    fn m(&self) -> usize {
        match self {
            Codec::Sr(_) => 2,
            Codec::Pa(p) => p.composition().m(),
            Codec::Bl(p) => p.m(),
            Codec::Nb(c) => c.composition().m(),
        }
    }

    fn alphabet(&self, alpha: Option<&str>) -> anyhow::Result<Vec<String>> {
        let m = self.m();
        if let Codec::Sr(_) = self {
            return Ok(vec!["1".into(), "0".into()]);
        }
        match alpha {
            Some(a) => {
                let names: Vec<String> = a.split(',').map(|s| s.trim().to_string()).collect();
                if names.len() != m {
                    return Err(usage(format!(
                        "--alpha needs {m} names, got {}",
                        names.len()
                    )));
                }
                Ok(names)
            }
            None => Ok((1..=m).map(|i| i.to_string()).collect()),
        }
    }

    fn separator(&self) -> &'static str {
        if let Codec::Sr(_) = self {
            ""
        } else {
            ","
        }
    }

    fn parse_sequence(&self, text: &str, alphabet: &[String]) -> anyhow::Result<ShapedSequence> {
        let tokens: Vec<String> = if self.separator().is_empty() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(String::from)
                .collect()
        } else {
            text.split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect()
        };
        let symbols = tokens
            .iter()
            .map(|t| {
                alphabet
                    .iter()
                    .position(|a| a == t)
                    .ok_or_else(|| usage(format!("unknown symbol '{t}'")))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(ShapedSequence::new(symbols, self.m())?)
    }

    fn map(&self, u: &BitWord, exec: Execution) -> ccdm::Result<ShapedSequence> {
        match self {
            Codec::Sr(c) => c.map(u),
            Codec::Pa(p) => pa_map_with(p, u, exec),
            Codec::Bl(p) => bl_map_with(p, u, exec),
            Codec::Nb(c) => c.map(u),
        }
    }

    fn demap(&self, x: &ShapedSequence, exec: Execution) -> ccdm::Result<BitWord> {
        match self {
            Codec::Sr(c) => c.demap(x),
            Codec::Pa(p) => pa_demap_with(p, x, exec),
            Codec::Bl(p) => bl_demap_with(p, x, exec),
            Codec::Nb(c) => c.demap(x),
        }
    }
}

fn print_value<T: Serialize>(cli: &Cli, text: &str, json: &T) -> anyhow::Result<()> {
    match cli.format {
        Format::Csv => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string(json)?),
    }
    Ok(())
}

fn cmd_rank(cli: &Cli, a: &RankArgs) -> anyhow::Result<()> {
    let elements: Vec<usize> = parse_list(&a.subset, "subset")?;
    let t = Subset::new(a.n, elements)?;
    if let Some(w) = a.w {
        if w != t.w() {
            return Err(usage(format!(
                "--w {w} but the subset has {} elements",
                t.w()
            )));
        }
    }
    let r = rank(&t, a.order).value;
    print_value(
        cli,
        &r.to_string(),
        &serde_json::json!({"n": a.n, "w": t.w(), "order": a.order, "subset": t.lex_list(), "rank": r.to_string()}),
    )
}

fn cmd_unrank(cli: &Cli, a: &UnrankArgs) -> anyhow::Result<()> {
    let value: BigUint = a
        .rank
        .trim()
        .parse()
        .map_err(|_| usage(format!("invalid rank '{}'", a.rank)))?;
    let t = unrank(
        &Rank {
            value,
            order: a.order,
        },
        a.n,
        a.w,
    )?;
    let list = match a.order {
        Order::Lex => t.lex_list().to_vec(),
        Order::Colex => t.colex_list(),
    };
    let text: Vec<String> = list.iter().map(ToString::to_string).collect();
    print_value(
        cli,
        &text.join(","),
        &serde_json::json!({"n": a.n, "w": a.w, "order": a.order, "rank": a.rank.trim(), "list": list}),
    )
}

fn cmd_map(cli: &Cli, a: &MapArgs) -> anyhow::Result<()> {
    let codec = Codec::build(&a.codec, exec(cli))?;
    let text = read_input(a.bits.clone())?;
    let u: BitWord = text
        .parse()
        .map_err(|e: ccdm::Error| usage(e.to_string()))?;
    let x = codec.map(&u, exec(cli))?;
    let alphabet = codec.alphabet(a.codec.alpha.as_deref())?;
    let out = x.render(&alphabet, codec.separator());
    print_value(
        cli,
        &out,
        &serde_json::json!({"bits": u.to_string(), "sequence": out}),
    )
}

fn cmd_demap(cli: &Cli, a: &DemapArgs) -> anyhow::Result<()> {
    let codec = Codec::build(&a.codec, exec(cli))?;
    let text = read_input(a.seq.clone())?;
    let alphabet = codec.alphabet(a.codec.alpha.as_deref())?;
    let x = codec.parse_sequence(&text, &alphabet)?;
    let u = codec.demap(&x, exec(cli))?;
    print_value(
        cli,
        &u.to_string(),
        &serde_json::json!({"sequence": text, "bits": u.to_string()}),
    )
}

#[derive(Serialize)]
struct StageRow {
    stage: usize,
    amplitude: Option<usize>,
    n: usize,
    w: usize,
    binomial: String,
    k: u64,
}

fn cmd_plan(cli: &Cli, a: &PlanArgs) -> anyhow::Result<()> {
    let exec = exec(cli);
    let mut prov = Provenance::new("plan");
    let rows: Vec<StageRow> = match a.scheme {
        PlanScheme::Pa => {
            let c = parse_composition(a.composition.as_deref())?;
            let plan = match &a.ordering {
                Some(o) => pa_split(&c, &parse_ordering(o, c.m())?)?,
                None => {
                    let s = pa_best_ordering_with(&c, a.tie_break.into(), exec)?;
                    prov.push("optimal_orderings", s.optimal_orderings);
                    s.plan
                }
            };
            let order: Vec<String> = plan
                .ordering()
                .iter()
                .map(|o| (o + 1).to_string())
                .collect();
            prov.push("scheme", "pa")
                .push("composition", c.to_string())
                .push("ordering", order.join(","))
                .push("total_k", plan.total_k())
                .push("nb_k", analysis::nb_input_length(&c)?);
            plan.stages()
                .iter()
                .enumerate()
                .map(|(i, s)| StageRow {
                    stage: i + 1,
                    amplitude: Some(s.amplitude + 1),
                    n: s.sub_length,
                    w: s.weight,
                    binomial: s.binomial.to_string(),
                    k: s.k,
                })
                .collect()
        }
        PlanScheme::Bl => {
            let n = require(a.n, "n")?;
            let plan = match (&a.zeros, a.snr) {
                (Some(z), _) => BlPlan::from_zeros(n, &parse_list(z, "zeros")?)?,
                (None, Some(snr)) => {
                    let point = ChannelPoint::new(snr, a.m);
                    bl_from_bit_probabilities(&bl_optimal_levels_with(&point, exec)?, n)?
                }
                (None, None) => return Err(usage("bl plan needs --zeros or --snr")),
            };
            prov.push("scheme", "bl").push("total_k", plan.total_k());
            plan.components()
                .iter()
                .enumerate()
                .map(|(i, c)| StageRow {
                    stage: i + 1,
                    amplitude: None,
                    n: c.n,
                    w: c.w,
                    binomial: ccdm::exactint::binomial(c.n as u64, c.w as u64).to_string(),
                    k: c.k,
                })
                .collect()
        }
    };
    output::emit(&output::render(&rows, &prov, cli.format)?, None)
}

fn write_table<T: Serialize>(
    cli: &Cli,
    rows: &[T],
    prov: &Provenance,
    stem: &str,
    out: &OutputArgs,
) -> anyhow::Result<()> {
    let text = output::render(rows, prov, cli.format)?;
    output::emit(
        &text,
        output::destination(out.out.clone(), out.out_dir.clone(), stem, cli.format),
    )
}

fn channel_provenance(prov: &mut Provenance, point: &ChannelPoint, snr: &str) {
    prov.push("m", point.m)
        .push("snr", snr)
        .push("budget", point.budget)
        .push("labeling", format!("{:?}", point.labeling).to_lowercase());
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> anyhow::Result<()> {
    let exec = exec(cli);
    match &a.kind {
        SweepKind::Dos { n, out } => {
            let ns: Vec<usize> = parse_list(n, "n")?;
            let rows: Vec<DosRow> = analysis::sweep_dos(&ns, exec)?;
            let mut prov = Provenance::new("sweep dos");
            prov.push("n", n);
            write_table(cli, &rows, &prov, "dos", out)
        }
        SweepKind::Rateloss {
            n,
            snr,
            channel,
            out,
        } => {
            let point = channel.point()?;
            let rows = analysis::sweep_rateloss(&parse_grid(snr)?, &point, *n, exec)?;
            let mut prov = Provenance::new("sweep rateloss");
            prov.push("n", n);
            channel_provenance(&mut prov, &point, snr);
            write_table(cli, &rows, &prov, "rateloss", out)
        }
        SweepKind::Air {
            n,
            snr,
            channel,
            out,
        } => {
            let point = channel.point()?;
            let ns: Vec<usize> = parse_list(n, "n")?;
            let rows = analysis::sweep_air(&parse_grid(snr)?, &ns, &point, exec)?;
            let mut prov = Provenance::new("sweep air");
            prov.push("n", n);
            channel_provenance(&mut prov, &point, snr);
            write_table(cli, &rows, &prov, "air", out)
        }
        SweepKind::Pasr {
            n,
            snr,
            channel,
            out,
        } => {
            let point = channel.point()?;
            let snr = snr
                .clone()
                .unwrap_or_else(|| if point.m <= 4 { "5:22:1" } else { "10:26:1" }.to_string());
            let rows = analysis::sweep_pasr(&parse_grid(&snr)?, &point, *n, exec)?;
            let mut prov = Provenance::new("sweep pasr");
            prov.push("n", n).push("tie_break", "min_serialism");
            channel_provenance(&mut prov, &point, &snr);
            write_table(cli, &rows, &prov, "pasr", out)
        }
        SweepKind::Table1 { n, w, out } => {
            let rows = analysis::table1(*n, *w)?;
            let mut prov = Provenance::new("sweep table1");
            prov.push("n", n).push("w", w);
            write_table(cli, &rows, &prov, "table1", out)
        }
        SweepKind::Ordering { composition, out } => {
            let c = parse_composition(Some(composition))?;
            let rows: Vec<_> = ordering_profile(&c)?
                .into_iter()
                .map(|mut p| {
                    p.ordering.iter_mut().for_each(|o| *o += 1);
                    p
                })
                .collect();
            let mut prov = Provenance::new("sweep ordering");
            prov.push("composition", c.to_string());
            write_table(cli, &rows, &prov, "ordering", out)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    match &cli.cmd {
        Cmd::Rank(a) => cmd_rank(cli, a),
        Cmd::Unrank(a) => cmd_unrank(cli, a),
        Cmd::Map(a) => cmd_map(cli, a),
        Cmd::Demap(a) => cmd_demap(cli, a),
        Cmd::Plan(a) => cmd_plan(cli, a),
        Cmd::Sweep(a) => cmd_sweep(cli, a),
    }
}

fn override_self(cmd: Command) -> Command {
    cmd.args_override_self(true).mut_subcommands(override_self)
}

fn parse_cli(mut args: Vec<String>) -> anyhow::Result<Result<Cli, clap::Error>> {
    if let Some(path) = config::config_path(&args) {
        for (key, value) in config::read_pairs(path.as_ref())? {
            args.push(format!("--{key}"));
            args.push(value);
        }
    }
    let matches: Result<ArgMatches, clap::Error> =
        override_self(Cli::command()).try_get_matches_from(args);
    Ok(matches.and_then(|m| Cli::from_arg_matches(&m)))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        2
    } else if err.downcast_ref::<ccdm::Error>().is_some() {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match parse_cli(args) {
        Ok(Ok(cli)) => cli,
        Ok(Err(e)) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
