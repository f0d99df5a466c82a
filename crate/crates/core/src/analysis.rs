//! Degree-of-serialism (DoS) accounting and the experiment sweeps built on it.
//!
//! DoS counts sequential loop iterations. Subset-ranking mapping places
//! `min(W, n-W)` elements one after another; loop-free colex demapping counts
//! as 1. The arithmetic-coding matcher is modelled analytically as `k`
//! mapping and `n` demapping iterations.

use std::fmt;

use serde::Serialize;

use crate::architectures::{
    bl_from_bit_probabilities, pa_best_ordering_with, BlPlan, ComponentDms, OrderingSearch,
    TieBreak,
};
use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactint::{floor_log2_pow2, multinomial};
use crate::exec::Execution;
use crate::matchers::{binary_input_length, BinaryCodec, BitWord};
use crate::shaping::{
    air_bmd_with, awgn_capacity, bl_optimal_levels_from, finite_dm_air, mb_pmf, mb_select_with,
    quantize_pmf, rate_loss, AmplitudePmf, ChannelPoint,
};
use crate::subsetrank::{rank, unrank, Order, Rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DosScheme {
    Sr,
    AcModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DosReport {
    pub scheme: DosScheme,
    pub map_dos: u64,
    pub demap_dos: u64,
}

impl DosReport {
    pub fn total(&self) -> u64 {
        self.map_dos + self.demap_dos
    }
}

/// Analytic DoS. `w_or_k` is the weight for [`DosScheme::Sr`] and the input
/// length for [`DosScheme::AcModel`].
pub fn dos(scheme: DosScheme, n: usize, w_or_k: u64) -> Result<DosReport> {
    match scheme {
        DosScheme::Sr => {
            let w = w_or_k as usize;
            if w > n {
                return Err(Error::WeightTooLarge { n, w });
            }
            Ok(DosReport {
                scheme,
                map_dos: w.min(n - w) as u64,
                demap_dos: 1,
            })
        }
        DosScheme::AcModel => Ok(DosReport {
            scheme,
            map_dos: w_or_k,
            demap_dos: n as u64,
        }),
    }
}

/// DoS observed while mapping and demapping `u` with `codec`.
pub fn measured_dos(codec: &BinaryCodec, u: &BitWord) -> Result<DosReport> {
    let (x, map_loops) = codec.map_counted(u)?;
    let (_, demap_loops) = codec.demap_counted(&x)?;
    Ok(DosReport {
        scheme: DosScheme::Sr,
        map_dos: map_loops.outer as u64,
        demap_dos: demap_loops.outer.max(1) as u64,
    })
}

/// Unreduced ratio of two DoS totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DosRatio {
    pub numerator: u64,
    pub denominator: u64,
}

impl DosRatio {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for DosRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// AC-model total over SR mapping DoS plus one, for a single binary codec.
pub fn dos_reduction(n: usize, w: usize) -> Result<DosRatio> {
    let k = binary_input_length(n, w)?;
    let ac = dos(DosScheme::AcModel, n, k)?;
    let sr = dos(DosScheme::Sr, n, w as u64)?;
    Ok(DosRatio {
        numerator: ac.total(),
        denominator: sr.map_dos + 1,
    })
}

/// Reduction of a parallel architecture against a reference AC matcher with
/// input length `ref_k` and block length `ref_n`, judged by the worst
/// component.
pub fn arch_dos_reduction(plan: &dyn ComponentDms, ref_k: u64, ref_n: usize) -> DosRatio {
    let worst = plan.worst_component().map_or(0, |c| c.serial_weight());
    DosRatio {
        numerator: ref_k + ref_n as u64,
        denominator: worst as u64 + 1,
    }
}

/// Reduction of the worst component against an AC matcher of its own size.
pub fn worst_component_dos_reduction(plan: &dyn ComponentDms) -> DosRatio {
    match plan.worst_component() {
        Some(c) => arch_dos_reduction(plan, c.k, c.n),
        None => DosRatio {
            numerator: 0,
            denominator: 1,
        },
    }
}

/// `floor(log2 N(C))`, the nonbinary matcher's input length.
pub fn nb_input_length(c: &Composition) -> Result<u64> {
    floor_log2_pow2(&multinomial(c))
}

/// Shaping design at one operating point: the MB target, its `n`-type and the
/// three matcher architectures.
#[derive(Debug, Clone)]
pub struct Design {
    pub point: ChannelPoint,
    pub n: usize,
    pub nu: f64,
    pub target: AmplitudePmf,
    pub composition: Composition,
    pub nb_k: u64,
    pub pa: OrderingSearch,
    pub bl_bit_probabilities: Vec<f64>,
    pub bl: BlPlan,
}

pub fn design(
    point: &ChannelPoint,
    n: usize,
    tie_break: TieBreak,
    exec: Execution,
) -> Result<Design> {
    let nu = mb_select_with(point, exec)?;
    let target = mb_pmf(point.m, nu)?;
    let composition = quantize_pmf(&target, n)?;
    let nb_k = nb_input_length(&composition)?;
    let pa = pa_best_ordering_with(&composition, tie_break, exec)?;
    let bl_bit_probabilities = bl_optimal_levels_from(point, &target, exec)?;
    let bl = bl_from_bit_probabilities(&bl_bit_probabilities, n)?;
    Ok(Design {
        point: *point,
        n,
        nu,
        target,
        composition,
        nb_k,
        pa,
        bl_bit_probabilities,
        bl,
    })
}

impl Design {
    pub fn nb_rate_loss(&self) -> f64 {
        rate_loss(&self.composition, self.nb_k).rate_loss
    }

    pub fn pa_rate_loss(&self) -> f64 {
        rate_loss(&self.composition, self.pa.plan.total_k()).rate_loss
    }

    pub fn bl_rate_loss(&self) -> f64 {
        self.bl.entropy() - self.bl.total_k() as f64 / self.n as f64
    }
}

fn sorted_grid(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub subset: String,
    pub lex_list: Vec<usize>,
    pub lex_rank: u64,
    pub colex_list: Vec<usize>,
    pub colex_rank: u64,
}

/// Every `w`-subset of `{1..n}` with its lex and colex ranks, in lex order.
pub fn table1(n: usize, w: usize) -> Result<Vec<Table1Row>> {
    let codec = BinaryCodec::new(n, w)?;
    let size = u64::try_from(codec.codebook_size()).map_err(|_| Error::WeightTooLarge { n, w })?;
    (0..size)
        .map(|r| {
            let t = unrank(
                &Rank {
                    value: r.into(),
                    order: Order::Lex,
                },
                n,
                w,
            )?;
            let colex = rank(&t, Order::Colex).value;
            Ok(Table1Row {
                subset: t.to_string(),
                lex_list: t.lex_list().to_vec(),
                lex_rank: r,
                colex_list: t.colex_list(),
                colex_rank: u64::try_from(&colex).expect("below a u64 codebook size"),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DosRow {
    pub n: usize,
    pub w: usize,
    pub w_over_n: f64,
    pub k: u64,
    pub sr_map_dos: u64,
    pub sr_demap_dos: u64,
    pub ac_map_dos: u64,
    pub ac_demap_dos: u64,
    pub reduction: f64,
}

/// DoS reduction over every weight for each block length.
pub fn sweep_dos(ns: &[usize], exec: Execution) -> Result<Vec<DosRow>> {
    let mut grid: Vec<(usize, usize)> = ns
        .iter()
        .flat_map(|&n| (0..=n).map(move |w| (n, w)))
        .collect();
    grid.sort_unstable();
    grid.dedup();
    exec.try_map(&grid, |&(n, w)| {
        let k = binary_input_length(n, w)?;
        let sr = dos(DosScheme::Sr, n, w as u64)?;
        let ac = dos(DosScheme::AcModel, n, k)?;
        Ok(DosRow {
            n,
            w,
            w_over_n: w as f64 / n as f64,
            k,
            sr_map_dos: sr.map_dos,
            sr_demap_dos: sr.demap_dos,
            ac_map_dos: ac.map_dos,
            ac_demap_dos: ac.demap_dos,
            reduction: dos_reduction(n, w)?.value(),
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateLossRow {
    pub snr_db: f64,
    pub m: usize,
    pub n: usize,
    pub nu: f64,
    pub composition: Vec<usize>,
    pub nb_k: u64,
    pub nb_rate_loss: f64,
    /// 1-based amplitude indices.
    pub pa_ordering: Vec<usize>,
    pub pa_stage_n: Vec<usize>,
    pub pa_stage_k: Vec<u64>,
    pub pa_stage_w: Vec<usize>,
    pub pa_k: u64,
    pub pa_rate_loss: f64,
    pub bl_zeros: Vec<usize>,
    pub bl_ones: Vec<usize>,
    pub bl_stage_k: Vec<u64>,
    pub bl_k: u64,
    pub bl_rate_loss: f64,
    pub pa_dos_reduction: String,
    pub bl_dos_reduction: String,
}

impl RateLossRow {
    pub fn from_design(d: &Design) -> Self {
        let plan = &d.pa.plan;
        RateLossRow {
            snr_db: d.point.snr_db,
            m: d.point.m,
            n: d.n,
            nu: d.nu,
            composition: d.composition.counts().to_vec(),
            nb_k: d.nb_k,
            nb_rate_loss: d.nb_rate_loss(),
            pa_ordering: plan.ordering().iter().map(|a| a + 1).collect(),
            pa_stage_n: plan.stages().iter().map(|s| s.sub_length).collect(),
            pa_stage_k: plan.stages().iter().map(|s| s.k).collect(),
            pa_stage_w: plan.stages().iter().map(|s| s.weight).collect(),
            pa_k: plan.total_k(),
            pa_rate_loss: d.pa_rate_loss(),
            bl_zeros: d.bl.levels().iter().map(|l| l.zeros).collect(),
            bl_ones: d.bl.levels().iter().map(|l| l.ones).collect(),
            bl_stage_k: d.bl.levels().iter().map(|l| l.k()).collect(),
            bl_k: d.bl.total_k(),
            bl_rate_loss: d.bl_rate_loss(),
            pa_dos_reduction: arch_dos_reduction(plan, d.nb_k, d.n).to_string(),
            bl_dos_reduction: worst_component_dos_reduction(&d.bl).to_string(),
        }
    }
}

/// Rate losses of the three architectures over an SNR grid. The PA ordering
/// is chosen with [`TieBreak::MinSerialism`].
pub fn sweep_rateloss(
    snrs: &[f64],
    template: &ChannelPoint,
    n: usize,
    exec: Execution,
) -> Result<Vec<RateLossRow>> {
    let grid = sorted_grid(snrs);
    exec.try_map(&grid, |&snr| {
        let point = ChannelPoint {
            snr_db: snr,
            ..*template
        };
        design(&point, n, TieBreak::MinSerialism, exec).map(|d| RateLossRow::from_design(&d))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AirRow {
    pub n: usize,
    pub snr_db: f64,
    pub capacity: f64,
    pub uniform: f64,
    pub asymptotic: f64,
    pub nb: f64,
    pub pa: f64,
    pub bl: f64,
    pub budget: String,
}

pub fn air_row(point: &ChannelPoint, n: usize, exec: Execution) -> Result<AirRow> {
    let d = design(point, n, TieBreak::Lex, exec)?;
    let uniform = air_bmd_with(point, &mb_pmf(point.m, 0.0)?, exec)?.bits_per_2d;
    let asymptotic = air_bmd_with(point, &d.target, exec)?.bits_per_2d;
    let typed = air_bmd_with(
        point,
        &AmplitudePmf::from_composition(&d.composition)?,
        exec,
    )?;
    let bl_air = air_bmd_with(point, &d.bl.pmf()?, exec)?.bits_per_2d;
    Ok(AirRow {
        n,
        snr_db: point.snr_db,
        capacity: awgn_capacity(point.snr_db),
        uniform,
        asymptotic,
        nb: finite_dm_air(typed.bits_per_2d, d.nb_rate_loss()),
        pa: finite_dm_air(typed.bits_per_2d, d.pa_rate_loss()),
        bl: finite_dm_air(bl_air, d.bl_rate_loss()),
        budget: typed.budget.to_string(),
    })
}

/// Finite-length BMD rates of NB, PA and BL matchers over an SNR grid.
pub fn sweep_air(
    snrs: &[f64],
    ns: &[usize],
    template: &ChannelPoint,
    exec: Execution,
) -> Result<Vec<AirRow>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let grid: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| sorted_grid(snrs).into_iter().map(move |s| (n, s)))
        .collect();
    exec.try_map(&grid, |&(n, snr)| {
        air_row(
            &ChannelPoint {
                snr_db: snr,
                ..*template
            },
            n,
            exec,
        )
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PasrRow {
    pub m: usize,
    pub n: usize,
    pub snr_db: f64,
    pub composition: Vec<usize>,
    pub nb_k: u64,
    pub pa_k: u64,
    pub extra_bits: u64,
    pub extra_rate_loss: f64,
    pub worst_serial_weight: usize,
    pub reduction_num: u64,
    pub reduction_den: u64,
    pub reduction: f64,
}

/// PA-DM built from subset-ranking components against a nonbinary AC
/// matcher, over an SNR grid. Among orderings of maximal input length the one
/// with the smallest worst-stage serialism is used.
pub fn sweep_pasr(
    snrs: &[f64],
    template: &ChannelPoint,
    n: usize,
    exec: Execution,
) -> Result<Vec<PasrRow>> {
    let grid = sorted_grid(snrs);
    exec.try_map(&grid, |&snr| {
        let point = ChannelPoint {
            snr_db: snr,
            ..*template
        };
        let nu = mb_select_with(&point, exec)?;
        let composition = quantize_pmf(&mb_pmf(point.m, nu)?, n)?;
        let nb_k = nb_input_length(&composition)?;
        let search = pa_best_ordering_with(&composition, TieBreak::MinSerialism, exec)?;
        let plan = &search.plan;
        let ratio = arch_dos_reduction(plan, nb_k, n);
        let extra_bits = nb_k - plan.total_k();
        Ok(PasrRow {
            m: point.m,
            n,
            snr_db: snr,
            composition: composition.counts().to_vec(),
            nb_k,
            pa_k: plan.total_k(),
            extra_bits,
            extra_rate_loss: extra_bits as f64 / n as f64,
            worst_serial_weight: plan.worst_component().map_or(0, |c| c.serial_weight()),
            reduction_num: ratio.numerator,
            reduction_den: ratio.denominator,
            reduction: ratio.value(),
        })
    })
}
