//! Fixed-length invertible distribution matchers.
//!
//! [`BinaryCodec`] maps `k` uniform bits to a binary block of length `n` with
//! exactly `w` marked symbols by subset unranking, and inverts the mapping by
//! subset ranking. [`NbEnumCodec`] is a nonbinary reference matcher over a
//! full composition, built on lexicographic multinomial (un)ranking.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::exactint::{binomial, floor_log2_pow2, multinomial, BinomialTable};
use crate::exec::Execution;
use crate::subsetrank::{
    rank_counted, subset_from_sequence, unrank_counted, LoopCount, Order, Subset,
};

/// Bit string, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn new(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    pub fn zeros(len: usize) -> Self {
        BitWord {
            bits: vec![false; len],
        }
    }

    /// `value` written MSB-first in exactly `len` bits.
    pub fn from_biguint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() > len as u64 {
            return Err(Error::WrongLength {
                expected: len,
                actual: value.bits() as usize,
            });
        }
        let bits = (0..len as u64).rev().map(|i| value.bit(i)).collect();
        Ok(BitWord { bits })
    }

    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        Self::from_biguint(&BigUint::from(value), len)
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        let len = self.bits.len() as u64;
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                v.set_bit(len - 1 - i as u64, true);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Splits into consecutive chunks of the given lengths.
    pub fn split(&self, lengths: &[usize]) -> Result<Vec<BitWord>> {
        let total: usize = lengths.iter().sum();
        if total != self.len() {
            return Err(Error::WrongLength {
                expected: total,
                actual: self.len(),
            });
        }
        let mut out = Vec::with_capacity(lengths.len());
        let mut start = 0;
        for &l in lengths {
            out.push(BitWord::new(self.bits[start..start + l].to_vec()));
            start += l;
        }
        Ok(out)
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitWord>) -> BitWord {
        BitWord {
            bits: parts
                .into_iter()
                .flat_map(|p| p.bits.iter().copied())
                .collect(),
        }
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBits(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitWord::new)
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A block of amplitude indices (0-based) and its realized composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShapedSequence {
    symbols: Vec<usize>,
    composition: Composition,
}

impl ShapedSequence {
    /// Wraps `symbols` over an `m`-letter alphabet, recording their composition.
    pub fn new(symbols: Vec<usize>, m: usize) -> Result<Self> {
        let composition = Composition::of_sequence(&symbols, m)?;
        Ok(ShapedSequence {
            symbols,
            composition,
        })
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Renders each symbol through `alphabet` and joins with `sep`.
    pub fn render<S: AsRef<str>>(&self, alphabet: &[S], sep: &str) -> String {
        self.symbols
            .iter()
            .map(|&s| alphabet[s].as_ref())
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn expect_composition(&self, expected: &Composition) -> Result<()> {
        if self.composition.counts() != expected.counts() {
            return Err(Error::CompositionMismatch {
                expected: expected.counts().to_vec(),
                actual: self.composition.counts().to_vec(),
            });
        }
        Ok(())
    }
}

/// How the demapper recovers the rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankMethod {
    /// Rank the subset directly in the codec's order.
    Direct,
    /// Rank the dual subset in the opposite order and reflect:
    /// `r = C(n, w) - 1 - rank_opposite(T')`.
    Dual,
}

/// Binary constant-composition matcher via subset ranking.
///
/// Output symbol `0` is the marked symbol (weight `w`), symbol `1` the other.
/// When `w > n/2` the codec unranks the `n - w` positions of the other symbol
/// instead; the external mapping contract is unchanged.
#[derive(Debug, Clone)]
pub struct BinaryCodec {
    n: usize,
    w: usize,
    k: u64,
    order: Order,
    rank_method: RankMethod,
    complement_active: bool,
    size: BigUint,
    table: Arc<BinomialTable>,
}

impl BinaryCodec {
    /// Lex mapping, loop-free dual-colex demapping.
    pub fn new(n: usize, w: usize) -> Result<Self> {
        Self::with_options(n, w, Order::Lex, RankMethod::Dual)
    }

    pub fn with_order(n: usize, w: usize, order: Order) -> Result<Self> {
        let method = match order {
            Order::Lex => RankMethod::Dual,
            Order::Colex => RankMethod::Direct,
        };
        Self::with_options(n, w, order, method)
    }

    pub fn with_options(n: usize, w: usize, order: Order, rank_method: RankMethod) -> Result<Self> {
        if w > n {
            return Err(Error::WeightTooLarge { n, w });
        }
        let complement_active = 2 * w > n;
        let effective = if complement_active { n - w } else { w };
        let table = BinomialTable::new(n, effective);
        let size = table.get(n, effective).clone();
        let k = floor_log2_pow2(&size)?;
        Ok(BinaryCodec {
            n,
            w,
            k,
            order,
            rank_method,
            complement_active,
            size,
            table: Arc::new(table),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Input length in bits, `floor(log2 C(n, w))`.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn rank_method(&self) -> RankMethod {
        self.rank_method
    }

    pub fn complement_active(&self) -> bool {
        self.complement_active
    }

    /// `min(w, n - w)`: the weight the unranker actually places.
    pub fn effective_weight(&self) -> usize {
        if self.complement_active {
            self.n - self.w
        } else {
            self.w
        }
    }

    /// Codebook of all `C(n, w)` sequences; only the first `2^k` are used.
    pub fn codebook_size(&self) -> &BigUint {
        &self.size
    }

    fn placed_symbol(&self) -> usize {
        usize::from(self.complement_active)
    }

    pub fn map(&self, u: &BitWord) -> Result<ShapedSequence> {
        self.map_counted(u).map(|(x, _)| x)
    }

    /// Maps `u` and reports the unranker's loop counts.
    pub fn map_counted(&self, u: &BitWord) -> Result<(ShapedSequence, LoopCount)> {
        if u.len() as u64 != self.k {
            return Err(Error::WrongLength {
                expected: self.k as usize,
                actual: u.len(),
            });
        }
        let r = u.to_biguint();
        let (t, loops) =
            unrank_counted(&self.table, &r, self.n, self.effective_weight(), self.order)?;
        let placed = self.placed_symbol();
        let mut symbols = vec![1 - placed; self.n];
        for &e in t.lex_list() {
            symbols[e - 1] = placed;
        }
        Ok((ShapedSequence::new(symbols, 2)?, loops))
    }

    pub fn demap(&self, x: &ShapedSequence) -> Result<BitWord> {
        self.demap_counted(x).map(|(u, _)| u)
    }

    /// Demaps `x` and reports the ranker's loop counts.
    pub fn demap_counted(&self, x: &ShapedSequence) -> Result<(BitWord, LoopCount)> {
        if x.len() != self.n {
            return Err(Error::WrongLength {
                expected: self.n,
                actual: x.len(),
            });
        }
        let expected = Composition::new(vec![self.w, self.n - self.w])?;
        x.expect_composition(&expected)?;
        let t = subset_from_sequence(x.symbols(), &self.placed_symbol());
        let (r, loops) = self.rank_subset(&t);
        if r.bits() > self.k {
            return Err(Error::NotInCodebook { k: self.k });
        }
        Ok((BitWord::from_biguint(&r, self.k as usize)?, loops))
    }

    fn rank_subset(&self, t: &Subset) -> (BigUint, LoopCount) {
        match self.rank_method {
            RankMethod::Direct => rank_counted(&self.table, t, self.order),
            RankMethod::Dual => {
                let opposite = match self.order {
                    Order::Lex => Order::Colex,
                    Order::Colex => Order::Lex,
                };
                let (r, loops) = rank_counted(&self.table, &t.dual(), opposite);
                (&self.size - BigUint::one() - r, loops)
            }
        }
    }

    /// Maps a batch of words under the given execution policy.
    pub fn map_batch(&self, words: &[BitWord], exec: Execution) -> Result<Vec<ShapedSequence>> {
        exec.try_map(words, |u| self.map(u))
    }

    pub fn demap_batch(&self, blocks: &[ShapedSequence], exec: Execution) -> Result<Vec<BitWord>> {
        exec.try_map(blocks, |x| self.demap(x))
    }
}

/// Nonbinary reference matcher: lexicographic unranking of the multiset
/// permutations of a composition, indices ordered `0 < 1 < ... < m-1`.
///
/// Not a performance path; it pins the nonbinary codebook size
/// `k = floor(log2 N(C))` and serves as an oracle for the binary architectures.
#[derive(Debug, Clone)]
pub struct NbEnumCodec {
    composition: Composition,
    k: u64,
    size: BigUint,
}

impl NbEnumCodec {
    pub fn new(composition: Composition) -> Result<Self> {
        let size = multinomial(&composition);
        let k = floor_log2_pow2(&size)?;
        Ok(NbEnumCodec {
            composition,
            k,
            size,
        })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn composition(&self) -> &Composition {
        &self.composition
    }

    pub fn codebook_size(&self) -> &BigUint {
        &self.size
    }

    pub fn map(&self, u: &BitWord) -> Result<ShapedSequence> {
        if u.len() as u64 != self.k {
            return Err(Error::WrongLength {
                expected: self.k as usize,
                actual: u.len(),
            });
        }
        let mut r = u.to_biguint();
        let mut remaining = self.composition.counts().to_vec();
        let mut len = self.composition.n();
        // Number of arrangements of the remaining multiset.
        let mut block = self.size.clone();
        let mut symbols = Vec::with_capacity(len);
        while len > 0 {
            for (a, count) in remaining.iter_mut().enumerate() {
                if *count == 0 {
                    continue;
                }
                let with_a = &block * *count / len;
                if r < with_a {
                    symbols.push(a);
                    *count -= 1;
                    block = with_a;
                    break;
                }
                r -= with_a;
            }
            len -= 1;
        }
        ShapedSequence::new(symbols, self.composition.m())
    }

    pub fn demap(&self, x: &ShapedSequence) -> Result<BitWord> {
        x.expect_composition(&self.composition)?;
        let mut r = BigUint::zero();
        let mut remaining = self.composition.counts().to_vec();
        let mut len = self.composition.n();
        let mut block = self.size.clone();
        for &s in x.symbols() {
            for &count in remaining.iter().take(s) {
                if count > 0 {
                    r += &block * count / len;
                }
            }
            block = &block * remaining[s] / len;
            remaining[s] -= 1;
            len -= 1;
        }
        if r.bits() > self.k {
            return Err(Error::NotInCodebook { k: self.k });
        }
        BitWord::from_biguint(&r, self.k as usize)
    }
}

/// `floor(log2 C(n, w))` without building a codec.
pub fn binary_input_length(n: usize, w: usize) -> Result<u64> {
    floor_log2_pow2(&binomial(n as u64, w as u64)).map_err(|_| Error::WeightTooLarge { n, w })
}
