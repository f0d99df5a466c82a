//! Exact combinatorial arithmetic.
//!
//! Binomial and multinomial coefficients are evaluated from the prime
//! factorizations of the factorials involved (Legendre's formula for the
//! exponent of `p` in `n!`). Exponent vectors are cancelled before any
//! multiplication happens, the odd-prime powers are multiplied out, and the
//! power of two is applied last as a shift. No floating point is involved
//! anywhere on this path.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};

/// Exact, arbitrary-precision count.
pub type BigCount = BigUint;

/// `n! = prod p^d_p` over the primes `p <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u64)>,
}

impl PrimeFactorization {
    /// `(prime, exponent)` pairs in ascending prime order; exponents are positive.
    pub fn factors(&self) -> &[(u64, u64)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u64 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> BigCount {
        let mut twos = 0;
        let mut acc = OddProduct::default();
        for &(p, e) in &self.factors {
            if p == 2 {
                twos = e;
            } else {
                acc.push_power(p, e);
            }
        }
        acc.finish() << twos
    }
}

static PRIMES: OnceLock<RwLock<Arc<Vec<u64>>>> = OnceLock::new();

/// Shared prime table covering at least `0..=limit`.
///
/// The table only grows; readers hold an `Arc` to a complete table.
fn primes_up_to(limit: u64) -> Arc<Vec<u64>> {
    let lock = PRIMES.get_or_init(|| RwLock::new(Arc::new(sieve(64))));
    {
        let table = lock.read().expect("prime table lock poisoned");
        if covers(&table, limit) {
            return Arc::clone(&table);
        }
    }
    let mut table = lock.write().expect("prime table lock poisoned");
    if !covers(&table, limit) {
        let bound = limit.max(2 * table.last().copied().unwrap_or(64));
        *table = Arc::new(sieve(bound));
    }
    Arc::clone(&table)
}

// A sieve table ends with a prime >= its bound, so it holds every prime up to
// its last entry.
fn covers(table: &[u64], limit: u64) -> bool {
    table.last().is_some_and(|&p| p >= limit)
}

fn sieve(bound: u64) -> Vec<u64> {
    // Sieve slightly past the bound so the table always ends with a prime >= bound.
    let mut size = (bound as usize).max(2) + 1;
    loop {
        let mut composite = vec![false; size + 1];
        let mut primes = Vec::new();
        for i in 2..=size {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= size {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        if primes.last().is_some_and(|&p| p >= bound) {
            return primes;
        }
        size *= 2;
    }
}

fn primes_not_above(n: u64) -> impl Iterator<Item = u64> {
    let table = primes_up_to(n);
    (0..table.len())
        .map(move |i| table[i])
        .take_while(move |&p| p <= n)
}

/// Exponent of the prime `p` in `n!`: `sum_i floor(n / p^i)`.
pub fn legendre_exponent(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut power = p;
    while power <= n {
        total += n / power;
        match power.checked_mul(p) {
            Some(next) => power = next,
            None => break,
        }
    }
    total
}

pub fn factorial_prime_exponents(n: u64) -> PrimeFactorization {
    let factors = primes_not_above(n)
        .map(|p| (p, legendre_exponent(n, p)))
        .collect();
    PrimeFactorization { factors }
}

/// Multiplies odd prime powers, batching small factors in a machine word.
#[derive(Default)]
struct OddProduct {
    big: Option<BigUint>,
    word: u64,
}

impl OddProduct {
    fn push(&mut self, f: u64) {
        if self.word == 0 {
            self.word = f;
            return;
        }
        match self.word.checked_mul(f) {
            Some(w) => self.word = w,
            None => {
                self.flush();
                self.word = f;
            }
        }
    }

    fn push_power(&mut self, p: u64, e: u64) {
        for _ in 0..e {
            self.push(p);
        }
    }

    fn flush(&mut self) {
        if self.word != 0 {
            let w = std::mem::take(&mut self.word);
            self.big = Some(match self.big.take() {
                Some(b) => b * w,
                None => BigUint::from(w),
            });
        }
    }

    fn finish(mut self) -> BigUint {
        self.flush();
        self.big.unwrap_or_else(BigUint::one)
    }
}

/// Evaluates `top! / prod(bottom_i!)` by exponent cancellation.
///
/// Callers guarantee the quotient is an integer (`sum bottom <= top`).
fn factorial_quotient(top: u64, bottoms: &[u64]) -> BigCount {
    let mut twos = 0;
    let mut acc = OddProduct::default();
    for p in primes_not_above(top) {
        let e = legendre_exponent(top, p)
            - bottoms
                .iter()
                .map(|&b| legendre_exponent(b, p))
                .sum::<u64>();
        if p == 2 {
            twos = e;
        } else {
            acc.push_power(p, e);
        }
    }
    acc.finish() << twos
}

/// Exact `C(n, w)`; zero when `w > n`.
pub fn binomial(n: u64, w: u64) -> BigCount {
    if w > n {
        return BigUint::zero();
    }
    let w = w.min(n - w);
    if w == 0 {
        return BigUint::one();
    }
    factorial_quotient(n, &[w, n - w])
}

/// Exact `C(n, w)` by the running product `prod (n-w+i)/i`.
///
/// Independent of the factorization path; every prefix of the product is itself
/// a binomial coefficient, so each division is exact.
pub fn binomial_multiplicative(n: u64, w: u64) -> BigCount {
    if w > n {
        return BigUint::zero();
    }
    let w = w.min(n - w);
    let mut acc = BigUint::one();
    for i in 1..=w {
        acc *= n - w + i;
        acc /= i;
    }
    acc
}

/// Exact multinomial coefficient `n! / prod(n_i!)`.
pub fn multinomial(c: &Composition) -> BigCount {
    let parts: Vec<u64> = c.counts().iter().map(|&x| x as u64).collect();
    factorial_quotient(c.n() as u64, &parts)
}

/// Returns `r` with `2^r <= x < 2^(r+1)`, i.e. the bit budget of a codebook of size `x`.
pub fn floor_log2_pow2(x: &BigCount) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    Ok(x.bits() - 1)
}

/// Dense memo of `C(a, b)` for `a <= n_max`, `b <= w_max`.
///
/// Built once by Pascal's rule and then shared read-only between threads; the
/// subset rankers look coefficients up here instead of re-deriving them.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n_max: usize,
    w_max: usize,
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl BinomialTable {
    pub fn new(n_max: usize, w_max: usize) -> Self {
        let w_max = w_max.min(n_max);
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for a in 0..=n_max {
            let width = a.min(w_max) + 1;
            let mut row = Vec::with_capacity(width);
            row.push(BigUint::one());
            for b in 1..width {
                let prev = &rows[a - 1];
                let left = &prev[b - 1];
                // prev has no entry at b only when b == a, where C(a-1, a) = 0.
                row.push(prev.get(b).map_or_else(|| left.clone(), |up| left + up));
            }
            rows.push(row);
        }
        BinomialTable {
            n_max,
            w_max,
            rows,
            zero: BigUint::zero(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn w_max(&self) -> usize {
        self.w_max
    }

    /// `C(a, b)`; zero when `b > a`.
    ///
    /// # Panics
    /// If `a > n_max` or `b > w_max` with `b <= a`.
    pub fn get(&self, a: usize, b: usize) -> &BigUint {
        if b > a {
            return &self.zero;
        }
        &self.rows[a][b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(x: u128) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(10, 4), big(210));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(7, 7), big(1));
    }

    #[test]
    fn multinomials() {
        let c = |v: &[usize]| Composition::new(v.to_vec()).unwrap();
        assert_eq!(multinomial(&c(&[4, 3, 2, 1])), big(12600));
        assert_eq!(multinomial(&c(&[17])), big(1));
        assert_eq!(multinomial(&c(&[2, 2])), big(6));
        assert_eq!(multinomial(&c(&[0, 0])), big(1));
    }

    #[test]
    fn factorial_of_21() {
        let f = factorial_prime_exponents(21);
        assert_eq!(
            f.factors(),
            &[
                (2, 18),
                (3, 9),
                (5, 4),
                (7, 3),
                (11, 1),
                (13, 1),
                (17, 1),
                (19, 1)
            ]
        );
        assert_eq!(f.value(), big(51_090_942_171_709_440_000));
        assert_eq!(f.exponent_of(23), 0);
    }

    #[test]
    fn tiny_factorials() {
        assert_eq!(factorial_prime_exponents(4).factors(), &[(2, 3), (3, 1)]);
        assert!(factorial_prime_exponents(1).factors().is_empty());
        assert!(factorial_prime_exponents(0).factors().is_empty());
        assert_eq!(factorial_prime_exponents(1).value(), big(1));
    }

    #[test]
    fn legendre_bounds() {
        for n in 0..300u64 {
            for &(p, e) in factorial_prime_exponents(n).factors() {
                assert!(p <= n && e <= n && e > 0);
            }
        }
    }

    #[test]
    fn floor_log2_examples() {
        assert_eq!(floor_log2_pow2(&big(12600)), Ok(13));
        assert_eq!(floor_log2_pow2(&big(1)), Ok(0));
        assert_eq!(floor_log2_pow2(&big(210)), Ok(7));
        assert_eq!(floor_log2_pow2(&big(20)), Ok(4));
        assert_eq!(floor_log2_pow2(&big(3)), Ok(1));
        assert_eq!(floor_log2_pow2(&big(0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn floor_log2_at_powers_of_two() {
        for r in 0..=1000u64 {
            let p = BigUint::one() << r;
            assert_eq!(floor_log2_pow2(&p), Ok(r));
            assert_eq!(floor_log2_pow2(&((p.clone() << 1) - 1u32)), Ok(r));
            if r > 0 {
                assert_eq!(floor_log2_pow2(&(p + 1u32)), Ok(r));
            }
        }
    }

    #[test]
    fn both_binomial_paths_agree() {
        for n in 0..=300u64 {
            for w in 0..=n {
                assert_eq!(binomial(n, w), binomial_multiplicative(n, w), "C({n},{w})");
            }
        }
    }

    #[test]
    fn large_binomial_exceeds_u64() {
        let c = binomial(100, 50);
        assert!(c.bits() > 64);
        assert_eq!(c.to_string(), "100891344545564193334812497256");
        assert_eq!(binomial(4096, 3), binomial_multiplicative(4096, 3));
    }

    #[test]
    fn table_matches_binomial() {
        let t = BinomialTable::new(120, 40);
        for a in 0..=120 {
            for b in 0..=40 {
                assert_eq!(t.get(a, b), &binomial(a as u64, b as u64), "C({a},{b})");
            }
        }
    }

    fn brute_permutations(counts: &[usize]) -> usize {
        // Count distinct arrangements by walking all m^n strings.
        let n: usize = counts.iter().sum();
        let m = counts.len();
        let mut total = 0;
        let mut digits = vec![0usize; n];
        loop {
            let mut seen = vec![0; m];
            for &d in &digits {
                seen[d] += 1;
            }
            if seen == counts {
                total += 1;
            }
            let mut i = 0;
            loop {
                if i == n {
                    return total;
                }
                digits[i] += 1;
                if digits[i] < m {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn multinomial_matches_enumeration() {
        for counts in [
            vec![2, 2],
            vec![3, 1, 1],
            vec![2, 2, 2],
            vec![4, 3, 1],
            vec![1, 1, 1, 1, 1],
            vec![0, 3, 2],
            vec![6, 2],
            vec![5, 4, 1],
        ] {
            let c = Composition::new(counts.clone()).unwrap();
            assert_eq!(
                multinomial(&c),
                BigUint::from(brute_permutations(&counts)),
                "{counts:?}"
            );
        }
    }

    proptest! {
        #[test]
        fn chained_binomials_equal_multinomial(
            counts in prop::collection::vec(0usize..50, 1..6),
            shuffle_seed in any::<u64>(),
        ) {
            prop_assume!(counts.iter().sum::<usize>() <= 200);
            let c = Composition::new(counts.clone()).unwrap();
            let mut order: Vec<usize> = (0..counts.len()).collect();
            // cheap deterministic shuffle
            let mut s = shuffle_seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let mut remaining = c.n() as u64;
            let mut product = BigUint::one();
            for &i in &order {
                product *= binomial(remaining, counts[i] as u64);
                remaining -= counts[i] as u64;
            }
            prop_assert_eq!(product, multinomial(&c));
        }
    }
}
