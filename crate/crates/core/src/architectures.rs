//! Parallel-amplitude (PA) and bit-level (BL) distribution matchers.
//!
//! Both split one nonbinary matcher into independent binary [`BinaryCodec`]s.
//! PA-DM chains one codec per amplitude: stage `i` marks the positions of
//! amplitude `ordering[i]` among the positions still free after the previous
//! stages. BL-DM runs one codec per bit of the natural-binary amplitude label
//! over the full block.
//!
//! Amplitude indices, orderings and symbols are 0-based throughout.

use std::cmp::Ordering as CmpOrdering;

use num_bigint::BigUint;
use serde::Serialize;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactint::{binomial, floor_log2_pow2};
use crate::exec::Execution;
use crate::matchers::{BinaryCodec, BitWord, ShapedSequence};
use crate::shaping::{level_marginals, quantize_probabilities, AmplitudePmf};

/// Largest alphabet for which the exhaustive ordering search is allowed.
pub const MAX_SEARCH_AMPLITUDES: usize = 10;

/// One binary sub-problem of a parallel architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentDm {
    pub n: usize,
    pub w: usize,
    pub k: u64,
}

impl ComponentDm {
    /// Weight the subset unranker actually places.
    pub fn serial_weight(&self) -> usize {
        self.w.min(self.n - self.w)
    }
}

pub trait ComponentDms {
    fn components(&self) -> Vec<ComponentDm>;

    fn total_k(&self) -> u64 {
        self.components().iter().map(|c| c.k).sum()
    }

    /// Component with the largest `min(w, n - w)`; earliest on ties.
    fn worst_component(&self) -> Option<ComponentDm> {
        self.components()
            .into_iter()
            .rev()
            .max_by_key(|c| c.serial_weight())
    }
}

#[derive(Debug, Clone)]
pub struct PaStage {
    pub amplitude: usize,
    pub sub_length: usize,
    pub weight: usize,
    pub binomial: BigUint,
    pub k: u64,
    codec: BinaryCodec,
}

impl PaStage {
    pub fn codec(&self) -> &BinaryCodec {
        &self.codec
    }
}

/// PA-DM plan. The last amplitude of the ordering has no stage; it fills the
/// positions left over after all stages.
#[derive(Debug, Clone)]
pub struct PaPlan {
    composition: Composition,
    ordering: Vec<usize>,
    stages: Vec<PaStage>,
    total_k: u64,
}

impl PaPlan {
    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn stages(&self) -> &[PaStage] {
        &self.stages
    }

    pub fn total_k(&self) -> u64 {
        self.total_k
    }

    pub fn n(&self) -> usize {
        self.composition.n()
    }

    fn stage_lengths(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.k as usize).collect()
    }
}

impl ComponentDms for PaPlan {
    fn components(&self) -> Vec<ComponentDm> {
        self.stages
            .iter()
            .map(|s| ComponentDm {
                n: s.sub_length,
                w: s.weight,
                k: s.k,
            })
            .collect()
    }
}

fn check_permutation(ordering: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    let valid = ordering.len() == m
        && ordering
            .iter()
            .all(|&a| a < m && !std::mem::replace(&mut seen[a], true));
    if valid {
        Ok(())
    } else {
        Err(Error::InvalidPermutation {
            m,
            ordering: ordering.to_vec(),
        })
    }
}

/// Splits `c` into binary stages following `ordering`.
pub fn pa_split(c: &Composition, ordering: &[usize]) -> Result<PaPlan> {
    let m = c.m();
    check_permutation(ordering, m)?;
    let mut remaining = c.n();
    let mut stages = Vec::with_capacity(m.saturating_sub(1));
    for &a in &ordering[..m - 1] {
        let weight = c.counts()[a];
        let codec = BinaryCodec::new(remaining, weight)?;
        stages.push(PaStage {
            amplitude: a,
            sub_length: remaining,
            weight,
            binomial: codec.codebook_size().clone(),
            k: codec.k(),
            codec,
        });
        remaining -= weight;
    }
    let total_k = stages.iter().map(|s| s.k).sum();
    Ok(PaPlan {
        composition: c.clone(),
        ordering: ordering.to_vec(),
        stages,
        total_k,
    })
}

/// Preference among orderings that reach the same total input length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// First in the sorted list of orderings (see [`ordering_key_cmp`]).
    #[default]
    Lex,
    /// Smallest worst-stage `min(w, n - w)`, then as `Lex`.
    MinSerialism,
}

#[derive(Debug, Clone)]
pub struct OrderingSearch {
    pub plan: PaPlan,
    /// Number of orderings reaching the maximum total input length.
    pub optimal_orderings: usize,
    pub evaluated: usize,
}

/// Sort key of an ordering: the permuted count tuple, then the index tuple.
/// Index 1 of `{4,3,2,1}` is therefore the ordering with counts `(1,2,3,4)`.
pub fn ordering_key_cmp(c: &Composition, a: &[usize], b: &[usize]) -> CmpOrdering {
    let counts = |o: &[usize]| o.iter().map(|&i| c.counts()[i]).collect::<Vec<_>>();
    counts(a).cmp(&counts(b)).then_with(|| a.cmp(b))
}

/// `floor(log2 C(len, w))` for every remaining length and every count of `c`.
struct StageBits {
    bits: Vec<Vec<u64>>,
}

impl StageBits {
    fn new(c: &Composition) -> Result<Self> {
        let bits = (0..=c.n())
            .map(|len| {
                c.counts()
                    .iter()
                    .map(|&w| {
                        if w > len {
                            Ok(0)
                        } else {
                            floor_log2_pow2(&binomial(len as u64, w as u64))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StageBits { bits })
    }

    /// (total_k, worst stage serialism)
    fn score(&self, c: &Composition, ordering: &[usize]) -> (u64, usize) {
        let mut len = c.n();
        let mut total = 0;
        let mut worst = 0;
        for &a in &ordering[..ordering.len() - 1] {
            let w = c.counts()[a];
            total += self.bits[len][a];
            worst = worst.max(w.min(len - w));
            len -= w;
        }
        (total, worst)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p
        .iter()
        .rposition(|&x| x > p[i])
        .expect("pivot has a successor");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn check_search_size(m: usize) -> Result<()> {
    if m > MAX_SEARCH_AMPLITUDES {
        Err(Error::TooManyAmplitudes {
            m,
            max: MAX_SEARCH_AMPLITUDES,
        })
    } else {
        Ok(())
    }
}

/// Exhaustive search over all `m!` orderings for the largest total input
/// length, lexicographic tie-break.
pub fn pa_best_ordering(c: &Composition) -> Result<OrderingSearch> {
    pa_best_ordering_with(c, TieBreak::Lex, Execution::default())
}

pub fn pa_best_ordering_with(
    c: &Composition,
    tie_break: TieBreak,
    exec: Execution,
) -> Result<OrderingSearch> {
    let m = c.m();
    check_search_size(m)?;
    let bits = StageBits::new(c)?;

    struct Best {
        ordering: Vec<usize>,
        total: u64,
        worst: usize,
        ties: usize,
        evaluated: usize,
    }

    let better = |cand: (&[usize], u64, usize), cur: &Best| -> bool {
        if cand.1 != cur.total {
            return cand.1 > cur.total;
        }
        if tie_break == TieBreak::MinSerialism && cand.2 != cur.worst {
            return cand.2 < cur.worst;
        }
        ordering_key_cmp(c, cand.0, &cur.ordering) == CmpOrdering::Less
    };

    // One task per leading amplitude; each walks the permutations of the rest.
    let partial = exec.map_range(m, |first| {
        let mut rest: Vec<usize> = (0..m).filter(|&a| a != first).collect();
        let mut ordering = Vec::with_capacity(m);
        let mut best: Option<Best> = None;
        loop {
            ordering.clear();
            ordering.push(first);
            ordering.extend_from_slice(&rest);
            let (total, worst) = bits.score(c, &ordering);
            match &mut best {
                None => {
                    best = Some(Best {
                        ordering: ordering.clone(),
                        total,
                        worst,
                        ties: 1,
                        evaluated: 1,
                    })
                }
                Some(b) => {
                    b.evaluated += 1;
                    if total > b.total {
                        b.ordering.clone_from(&ordering);
                        b.total = total;
                        b.worst = worst;
                        b.ties = 1;
                    } else if total == b.total {
                        b.ties += 1;
                        if better((&ordering, total, worst), b) {
                            b.ordering.clone_from(&ordering);
                            b.worst = worst;
                        }
                    }
                }
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        best.expect("every leading amplitude has at least one ordering")
    });

    let mut parts = partial.into_iter();
    let mut best = parts.next().expect("m >= 1");
    for p in parts {
        best.evaluated += p.evaluated;
        if p.total > best.total {
            best.ties = p.ties;
            best.total = p.total;
            best.ordering = p.ordering;
            best.worst = p.worst;
        } else if p.total == best.total {
            best.ties += p.ties;
            if better((&p.ordering, p.total, p.worst), &best) {
                best.ordering = p.ordering;
                best.worst = p.worst;
            }
        }
    }
    Ok(OrderingSearch {
        plan: pa_split(c, &best.ordering)?,
        optimal_orderings: best.ties,
        evaluated: best.evaluated,
    })
}

/// One ordering with its accumulated per-stage input lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingProfile {
    /// 1-based position in the sorted list of orderings.
    pub index: usize,
    pub ordering: Vec<usize>,
    pub counts: Vec<usize>,
    pub accumulated_k: Vec<u64>,
    pub total_k: u64,
}

/// Every ordering of `c`, sorted by [`ordering_key_cmp`], with accumulated
/// stage input lengths.
pub fn ordering_profile(c: &Composition) -> Result<Vec<OrderingProfile>> {
    let m = c.m();
    check_search_size(m)?;
    let bits = StageBits::new(c)?;
    let mut all = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    loop {
        all.push(p.clone());
        if !next_permutation(&mut p) {
            break;
        }
    }
    all.sort_by(|a, b| ordering_key_cmp(c, a, b));
    Ok(all
        .into_iter()
        .enumerate()
        .map(|(i, ordering)| {
            let mut len = c.n();
            let mut acc = 0;
            let accumulated_k = ordering[..m - 1]
                .iter()
                .map(|&a| {
                    acc += bits.bits[len][a];
                    len -= c.counts()[a];
                    acc
                })
                .collect();
            OrderingProfile {
                index: i + 1,
                counts: ordering.iter().map(|&a| c.counts()[a]).collect(),
                ordering,
                accumulated_k,
                total_k: acc,
            }
        })
        .collect())
}

/// Merges stage masks into an amplitude sequence.
///
/// `masks[i]` has one entry per position still free before stage `i`; a
/// `true` entry assigns that position to `ordering[i]`. Positions free after
/// the last mask take `ordering[masks.len()]`.
pub fn combine_components(n: usize, ordering: &[usize], masks: &[Vec<bool>]) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; n];
    let mut free: Vec<usize> = (0..n).collect();
    for (stage, mask) in masks.iter().enumerate() {
        if mask.len() != free.len() {
            return Err(Error::WrongLength {
                expected: free.len(),
                actual: mask.len(),
            });
        }
        let mut still_free = Vec::with_capacity(free.len());
        for (&pos, &marked) in free.iter().zip(mask) {
            if marked {
                out[pos] = Some(ordering[stage]);
            } else {
                still_free.push(pos);
            }
        }
        free = still_free;
    }
    if !free.is_empty() {
        let last = *ordering.get(masks.len()).ok_or(Error::WrongLength {
            expected: masks.len() + 1,
            actual: ordering.len(),
        })?;
        for pos in free {
            out[pos] = Some(last);
        }
    }
    Ok(out
        .into_iter()
        .map(|s| s.expect("every position assigned"))
        .collect())
}

/// Inverse of [`combine_components`] for `stages` masks.
pub fn decompose_components(
    symbols: &[usize],
    ordering: &[usize],
    stages: usize,
) -> Vec<Vec<bool>> {
    let mut free: Vec<usize> = (0..symbols.len()).collect();
    let mut masks = Vec::with_capacity(stages);
    for &a in &ordering[..stages] {
        let mask: Vec<bool> = free.iter().map(|&p| symbols[p] == a).collect();
        free.retain(|&p| symbols[p] != a);
        masks.push(mask);
    }
    masks
}

fn mask_to_block(mask: &[bool]) -> Result<ShapedSequence> {
    ShapedSequence::new(mask.iter().map(|&b| usize::from(!b)).collect(), 2)
}

pub fn pa_map(plan: &PaPlan, u: &BitWord) -> Result<ShapedSequence> {
    pa_map_with(plan, u, Execution::default())
}

pub fn pa_map_with(plan: &PaPlan, u: &BitWord, exec: Execution) -> Result<ShapedSequence> {
    if u.len() as u64 != plan.total_k {
        return Err(Error::WrongLength {
            expected: plan.total_k as usize,
            actual: u.len(),
        });
    }
    let chunks = u.split(&plan.stage_lengths())?;
    let jobs: Vec<(&PaStage, &BitWord)> = plan.stages.iter().zip(&chunks).collect();
    let masks = exec.try_map(&jobs, |(stage, chunk)| {
        stage
            .codec
            .map(chunk)
            .map(|x| x.symbols().iter().map(|&s| s == 0).collect::<Vec<bool>>())
    })?;
    let symbols = combine_components(plan.n(), &plan.ordering, &masks)?;
    ShapedSequence::new(symbols, plan.composition.m())
}

pub fn pa_demap(plan: &PaPlan, x: &ShapedSequence) -> Result<BitWord> {
    pa_demap_with(plan, x, Execution::default())
}

pub fn pa_demap_with(plan: &PaPlan, x: &ShapedSequence, exec: Execution) -> Result<BitWord> {
    if x.composition() != &plan.composition {
        return Err(Error::CompositionMismatch {
            expected: plan.composition.counts().to_vec(),
            actual: x.composition().counts().to_vec(),
        });
    }
    let masks = decompose_components(x.symbols(), &plan.ordering, plan.stages.len());
    let jobs: Vec<(&PaStage, &Vec<bool>)> = plan.stages.iter().zip(&masks).collect();
    let parts = exec.try_map(&jobs, |(stage, mask)| {
        stage.codec.demap(&mask_to_block(mask)?)
    })?;
    Ok(BitWord::concat(&parts))
}

/// One binary level of a BL-DM. `zeros` positions carry bit 0.
#[derive(Debug, Clone)]
pub struct BlLevel {
    pub zeros: usize,
    pub ones: usize,
    codec: BinaryCodec,
}

impl BlLevel {
    pub fn k(&self) -> u64 {
        self.codec.k()
    }

    pub fn codec(&self) -> &BinaryCodec {
        &self.codec
    }
}

/// BL-DM plan: level 0 is the most significant bit of the natural-binary
/// amplitude index.
#[derive(Debug, Clone)]
pub struct BlPlan {
    n: usize,
    levels: Vec<BlLevel>,
}

impl BlPlan {
    /// Plan from the number of zero bits per level.
    pub fn from_zeros(n: usize, zeros: &[usize]) -> Result<Self> {
        let levels = zeros
            .iter()
            .map(|&z| {
                Ok(BlLevel {
                    zeros: z,
                    ones: n.checked_sub(z).ok_or(Error::WeightTooLarge { n, w: z })?,
                    codec: BinaryCodec::new(n, z)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BlPlan { n, levels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        1 << self.levels.len()
    }

    pub fn levels(&self) -> &[BlLevel] {
        &self.levels
    }

    pub fn total_k(&self) -> u64 {
        self.levels.iter().map(BlLevel::k).sum()
    }

    /// Label of amplitude index `a`, level 0 first.
    pub fn label(&self, a: usize) -> Vec<bool> {
        let l = self.levels.len();
        (0..l).map(|i| (a >> (l - 1 - i)) & 1 == 1).collect()
    }

    /// Sum of the per-level binary entropies of the quantized levels.
    pub fn entropy(&self) -> f64 {
        self.levels
            .iter()
            .map(|lv| {
                Composition::new(vec![lv.zeros, lv.ones])
                    .map(|c| c.entropy())
                    .unwrap_or(0.0)
            })
            .sum()
    }

    /// Product pmf realized by the quantized levels.
    pub fn pmf(&self) -> Result<AmplitudePmf> {
        let p: Vec<f64> = self
            .levels
            .iter()
            .map(|lv| lv.zeros as f64 / self.n as f64)
            .collect();
        crate::shaping::product_pmf(&p)
    }
}

impl ComponentDms for BlPlan {
    fn components(&self) -> Vec<ComponentDm> {
        self.levels
            .iter()
            .map(|lv| ComponentDm {
                n: self.n,
                w: lv.zeros,
                k: lv.k(),
            })
            .collect()
    }
}

/// Levels from the bit marginals of the unquantized `pmf`, each quantized to
/// an `n`-type independently.
pub fn bl_factorize(pmf: &AmplitudePmf, n: usize) -> Result<BlPlan> {
    bl_from_bit_probabilities(&level_marginals(pmf)?, n)
}

/// Levels from explicit per-level `P(bit = 0)`.
pub fn bl_from_bit_probabilities(p_zero: &[f64], n: usize) -> Result<BlPlan> {
    let zeros = p_zero
        .iter()
        .map(|&p| quantize_probabilities(&[p, 1.0 - p], n).map(|c| c.counts()[0]))
        .collect::<Result<Vec<_>>>()?;
    BlPlan::from_zeros(n, &zeros)
}

pub fn bl_map(plan: &BlPlan, u: &BitWord) -> Result<ShapedSequence> {
    bl_map_with(plan, u, Execution::default())
}

pub fn bl_map_with(plan: &BlPlan, u: &BitWord, exec: Execution) -> Result<ShapedSequence> {
    let total = plan.total_k();
    if u.len() as u64 != total {
        return Err(Error::WrongLength {
            expected: total as usize,
            actual: u.len(),
        });
    }
    let lengths: Vec<usize> = plan.levels.iter().map(|lv| lv.k() as usize).collect();
    let chunks = u.split(&lengths)?;
    let jobs: Vec<(&BlLevel, &BitWord)> = plan.levels.iter().zip(&chunks).collect();
    let blocks = exec.try_map(&jobs, |(lv, chunk)| lv.codec.map(chunk))?;
    let mut symbols = vec![0usize; plan.n];
    for block in &blocks {
        for (s, &bit) in symbols.iter_mut().zip(block.symbols()) {
            *s = (*s << 1) | bit;
        }
    }
    ShapedSequence::new(symbols, plan.m())
}

pub fn bl_demap(plan: &BlPlan, x: &ShapedSequence) -> Result<BitWord> {
    bl_demap_with(plan, x, Execution::default())
}

pub fn bl_demap_with(plan: &BlPlan, x: &ShapedSequence, exec: Execution) -> Result<BitWord> {
    if x.len() != plan.n {
        return Err(Error::WrongLength {
            expected: plan.n,
            actual: x.len(),
        });
    }
    let m = plan.m();
    if let Some(&s) = x.symbols().iter().find(|&&s| s >= m) {
        return Err(Error::SymbolOutOfRange { symbol: s, m });
    }
    let depth = plan.levels.len();
    let parts = exec.try_map_range(depth, |l| {
        let bits = x
            .symbols()
            .iter()
            .map(|&s| (s >> (depth - 1 - l)) & 1)
            .collect();
        plan.levels[l].codec.demap(&ShapedSequence::new(bits, 2)?)
    })?;
    Ok(BitWord::concat(&parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Pa,
    Bl,
}

/// Number of binary component DMs: `m - 1` for PA, `log2 m` for BL.
pub fn parallelization_factor(m: usize, scheme: Scheme) -> Result<usize> {
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(m));
    }
    Ok(match scheme {
        Scheme::Pa => m - 1,
        Scheme::Bl => m.trailing_zeros() as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::multinomial;

    fn comp(c: &[usize]) -> Composition {
        Composition::new(c.to_vec()).unwrap()
    }

    #[test]
    fn natural_and_swapped_splits() {
        let c = comp(&[4, 3, 2, 1]);
        let plan = pa_split(&c, &[0, 1, 2, 3]).unwrap();
        let bcs: Vec<u64> = plan
            .stages()
            .iter()
            .map(|s| u64::try_from(&s.binomial).unwrap())
            .collect();
        assert_eq!(bcs, [210, 20, 3]);
        assert_eq!(
            plan.stages().iter().map(|s| s.k).collect::<Vec<_>>(),
            [7, 4, 1]
        );
        assert_eq!(plan.total_k(), 12);

        let plan = pa_split(&c, &[3, 2, 1, 0]).unwrap();
        let bcs: Vec<u64> = plan
            .stages()
            .iter()
            .map(|s| u64::try_from(&s.binomial).unwrap())
            .collect();
        assert_eq!(bcs, [10, 36, 35]);
        assert_eq!(plan.total_k(), 13);
    }

    #[test]
    fn design_64qam_stages() {
        let plan = pa_split(&comp(&[46, 32, 16, 6]), &[2, 1, 3, 0]).unwrap();
        let got: Vec<(usize, u64, usize)> = plan
            .stages()
            .iter()
            .map(|s| (s.sub_length, s.k, s.weight))
            .collect();
        assert_eq!(got, [(100, 60, 16), (84, 77, 32), (52, 24, 6)]);
        assert_eq!(plan.total_k(), 161);
    }

    #[test]
    fn rejects_bad_orderings() {
        let c = comp(&[2, 1, 1]);
        for bad in [&[0, 1][..], &[0, 0, 1], &[0, 1, 3]] {
            assert!(matches!(
                pa_split(&c, bad),
                Err(Error::InvalidPermutation { .. })
            ));
        }
        assert!(matches!(
            pa_best_ordering(&comp(&[1; 11])),
            Err(Error::TooManyAmplitudes { m: 11, .. })
        ));
    }

    #[test]
    fn best_ordering_small() {
        let s = pa_best_ordering(&comp(&[4, 3, 2, 1])).unwrap();
        assert_eq!(s.plan.total_k(), 13);
        assert_eq!(s.optimal_orderings, 6);
        assert_eq!(s.evaluated, 24);
        let single = pa_best_ordering(&comp(&[9])).unwrap();
        assert!(single.plan.stages().is_empty());
        assert_eq!(single.plan.total_k(), 0);
    }

    #[test]
    fn best_ordering_agrees_with_profile() {
        for c in [
            vec![4, 3, 2, 1],
            vec![5, 5, 2],
            vec![3, 3, 3, 1, 2],
            vec![46, 32, 16, 6],
        ] {
            let c = comp(&c);
            let profile = ordering_profile(&c).unwrap();
            let max = profile.iter().map(|p| p.total_k).max().unwrap();
            let first = profile.iter().find(|p| p.total_k == max).unwrap();
            for exec in [Execution::Sequential, Execution::Parallel] {
                let s = pa_best_ordering_with(&c, TieBreak::Lex, exec).unwrap();
                assert_eq!(s.plan.ordering(), &first.ordering[..]);
                assert_eq!(
                    s.optimal_orderings,
                    profile.iter().filter(|p| p.total_k == max).count()
                );
            }
        }
    }

    #[test]
    fn profile_index_one_is_ascending_counts() {
        let profile = ordering_profile(&comp(&[4, 3, 2, 1])).unwrap();
        assert_eq!(profile.len(), 24);
        assert_eq!(profile[0].counts, [1, 2, 3, 4]);
        assert_eq!(profile[23].counts, [4, 3, 2, 1]);
        assert_eq!(profile[23].accumulated_k, [7, 11, 12]);
    }

    #[test]
    fn min_serialism_keeps_total() {
        let c = comp(&[46, 32, 16, 6]);
        let lex = pa_best_ordering(&c).unwrap();
        let ms = pa_best_ordering_with(&c, TieBreak::MinSerialism, Execution::Sequential).unwrap();
        assert_eq!(lex.plan.total_k(), ms.plan.total_k());
        let worst = |p: &PaPlan| p.worst_component().unwrap().serial_weight();
        assert!(worst(&ms.plan) <= worst(&lex.plan));
    }

    #[test]
    fn four_amplitude_combiner() {
        let t = true;
        let f = false;
        let masks = vec![
            vec![t, f, f, t, f, f, t, t, f, f],
            vec![t, t, f, f, t, f],
            vec![t, f, t],
        ];
        let x = combine_components(10, &[0, 1, 2, 3], &masks).unwrap();
        assert_eq!(x, [0, 1, 1, 0, 2, 3, 0, 0, 1, 2]);
        assert_eq!(decompose_components(&x, &[0, 1, 2, 3], 3), masks);
    }

    #[test]
    fn stage_product_is_multinomial() {
        let c = comp(&[3, 0, 2, 4]);
        let mut p = vec![0, 1, 2, 3];
        loop {
            let plan = pa_split(&c, &p).unwrap();
            let prod: BigUint = plan.stages().iter().map(|s| s.binomial.clone()).product();
            assert_eq!(prod, multinomial(&c));
            if !next_permutation(&mut p) {
                break;
            }
        }
    }

    #[test]
    fn pa_roundtrip_exhaustive_small() {
        let c = comp(&[3, 2, 1]);
        let plan = pa_best_ordering(&c).unwrap().plan;
        for v in 0..1u64 << plan.total_k() {
            let u = BitWord::from_u64(v, plan.total_k() as usize).unwrap();
            let x = pa_map(&plan, &u).unwrap();
            assert_eq!(x.composition(), &c);
            assert_eq!(pa_demap(&plan, &x).unwrap(), u);
        }
    }

    #[test]
    fn pa_constant_sequence() {
        let c = comp(&[5, 0, 0]);
        let plan = pa_split(&c, &[0, 1, 2]).unwrap();
        assert_eq!(plan.total_k(), 0);
        let x = pa_map(&plan, &BitWord::zeros(0)).unwrap();
        assert_eq!(x.symbols(), &[0; 5]);
        assert!(pa_demap(&plan, &x).unwrap().is_empty());
    }

    #[test]
    fn pa_errors() {
        let plan = pa_split(&comp(&[2, 1, 1]), &[0, 1, 2]).unwrap();
        assert!(matches!(
            pa_map(&plan, &BitWord::zeros(1)),
            Err(Error::WrongLength { .. })
        ));
        let wrong = ShapedSequence::new(vec![0, 0, 0, 1], 3).unwrap();
        assert!(matches!(
            pa_demap(&plan, &wrong),
            Err(Error::CompositionMismatch { .. })
        ));
    }

    #[test]
    fn bl_levels_and_lengths() {
        let plan = BlPlan::from_zeros(100, &[78, 61]).unwrap();
        assert_eq!(
            plan.levels().iter().map(BlLevel::k).collect::<Vec<_>>(),
            [72, 92]
        );
        assert_eq!(plan.total_k(), 164);
        assert_eq!(plan.label(2), [true, false]);

        let uniform = bl_factorize(&AmplitudePmf::new(vec![0.25; 4]).unwrap(), 10).unwrap();
        assert!(uniform.levels().iter().all(|lv| lv.zeros == 5));
        let binary = bl_factorize(&AmplitudePmf::new(vec![0.7, 0.3]).unwrap(), 10).unwrap();
        assert_eq!(binary.levels().len(), 1);
        assert_eq!(binary.levels()[0].zeros, 7);
        assert!(bl_factorize(&AmplitudePmf::new(vec![0.5, 0.3, 0.2]).unwrap(), 10).is_err());
    }

    #[test]
    fn bl_roundtrip_exhaustive_small() {
        let plan = BlPlan::from_zeros(12, &[8, 5]).unwrap();
        for v in 0..1u64 << plan.total_k() {
            let u = BitWord::from_u64(v, plan.total_k() as usize).unwrap();
            let x = bl_map(&plan, &u).unwrap();
            let zeros_msb = x.symbols().iter().filter(|&&s| s < 2).count();
            let zeros_lsb = x.symbols().iter().filter(|&&s| s % 2 == 0).count();
            assert_eq!((zeros_msb, zeros_lsb), (8, 5));
            assert_eq!(bl_demap(&plan, &x).unwrap(), u);
        }
    }

    #[test]
    fn bl_single_level_is_binary_codec() {
        let plan = BlPlan::from_zeros(10, &[4]).unwrap();
        let codec = BinaryCodec::new(10, 4).unwrap();
        let u: BitWord = "1110101".parse().unwrap();
        assert_eq!(bl_map(&plan, &u).unwrap(), codec.map(&u).unwrap());
    }

    #[test]
    fn parallelization_factors() {
        assert_eq!(parallelization_factor(8, Scheme::Pa).unwrap(), 7);
        assert_eq!(parallelization_factor(8, Scheme::Bl).unwrap(), 3);
        assert_eq!(parallelization_factor(2, Scheme::Pa).unwrap(), 1);
        assert_eq!(parallelization_factor(16, Scheme::Pa).unwrap(), 15);
        assert_eq!(parallelization_factor(16, Scheme::Bl).unwrap(), 4);
        assert!(parallelization_factor(6, Scheme::Pa).is_err());
    }
}
