//! Bernoulli numbers, Euler polynomial values, alternating power sums, the
//! `X_p(k)` combination and the weight-four Bernoulli convolution constants.
//!
//! Convention: `B_1 = -1/2`.

use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::residue::{checked_prime_power, int, pow2, reduce_mod, Modulus, Rational, Residue};

/// Growable memo table of exact Bernoulli numbers, `table[n] = B_n`.
///
/// Filling goes through the tangent numbers (integer-only arithmetic), which is
/// what makes indices in the thousands affordable. Concurrent fills are
/// idempotent: readers get an `Arc` snapshot that never changes underneath them.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    table: RwLock<Arc<Vec<Rational>>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache shared by every evaluation.
    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    /// Snapshot holding at least `B_0 ..= B_n`.
    pub fn table(&self, n: usize) -> Arc<Vec<Rational>> {
        {
            let t = self.table.read().unwrap();
            if t.len() > n {
                return Arc::clone(&t);
            }
        }
        let mut t = self.table.write().unwrap();
        if t.len() <= n {
            // grow geometrically so a sweep over increasing primes refills rarely
            let target = n.max(t.len() + t.len() / 4);
            *t = Arc::new(bernoulli_table(target));
        }
        Arc::clone(&t)
    }

    pub fn get(&self, n: usize) -> Rational {
        self.table(n)[n].clone()
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Tangent numbers `T_1 ..= T_m` (1, 2, 16, 272, ...), index 0 unused.
fn tangent_numbers(m: usize) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); m + 1];
    if m == 0 {
        return t;
    }
    t[1] = BigInt::one();
    for k in 2..=m {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    t
}

/// `B_0 ..= B_n` via `B_{2m} = (-1)^{m-1} 2m T_m / (4^m (4^m - 1))`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    let tangent = tangent_numbers(n / 2);
    (0..=n)
        .map(|i| match i {
            0 => int(1),
            1 => Rational::new(BigInt::from(-1), BigInt::from(2)),
            _ if i % 2 == 1 => Rational::zero(),
            _ => {
                let m = i / 2;
                let four_m = BigInt::one() << (2 * m);
                let num = &tangent[m] * (2 * m);
                let den = &four_m * (&four_m - 1u32);
                let b = Rational::new(num, den);
                if m % 2 == 0 {
                    -b
                } else {
                    b
                }
            }
        })
        .collect()
}

/// `B_0 ..= B_n` from `sum_{k=0}^{m} C(m+1, k) B_k = 0`. Quadratic in big
/// rationals, kept as an independent cross-check of [`bernoulli_table`].
pub fn bernoulli_by_recurrence(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(int(1));
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += bk * Rational::from_integer(binomial(BigInt::from(m + 1), BigInt::from(k)));
        }
        b.push(-acc / int(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Rational {
    BernoulliCache::global().get(n)
}

/// `E_a(0) = 2 (1 - 2^{a+1}) B_{a+1} / (a + 1)`.
pub fn euler_zero(a: usize) -> Rational {
    let b = bernoulli(a + 1);
    int(2) * (int(1) - pow2(a as i64 + 1)) * b / int(a as i64 + 1)
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

/// `E_n(x) = sum_a C(n, a) E_a(0) x^{n-a}`.
pub fn euler_poly(n: usize, x: &Rational) -> Rational {
    (0..=n).fold(Rational::zero(), |acc, a| {
        acc + binom(n, a) * euler_zero(a) * num_traits::pow(x.clone(), n - a)
    })
}

/// Coefficient `F_{n,d,a}` of the alternating power sum expansion.
pub fn alt_sum_coefficient(n: usize, d: u64, a: usize) -> Rational {
    let d_odd = d % 2 == 1;
    if a < n {
        let sign = if d_odd { int(1) } else { int(-1) };
        sign * euler_zero(a) / int(2)
    } else if n > 0 {
        if d_odd {
            euler_zero(n)
        } else {
            Rational::zero()
        }
    } else if d_odd {
        Rational::zero()
    } else {
        int(-1)
    }
}

/// `sum_{i=1}^{d-1} (-1)^i i^n` through `sum_a C(n,a) F_{n,d,a} d^{n-a}`.
pub fn alt_power_sum(n: usize, d: u64) -> Rational {
    let dd = int(d as i64);
    (0..=n).fold(Rational::zero(), |acc, a| {
        acc + binom(n, a) * alt_sum_coefficient(n, d, a) * num_traits::pow(dd.clone(), n - a)
    })
}

/// `X_p(k) = B_{p-k}/(p-k) - B_{2p-1-k}/(2(2p-1-k))`.
pub fn chi(p: u64, k: u64) -> Rational {
    assert!(p > k, "chi needs p > k");
    let (i, j) = ((p - k) as usize, (2 * p - 1 - k) as usize);
    let table = BernoulliCache::global().table(j);
    &table[i] / int(i as i64) - &table[j] / int(2 * j as i64)
}

/// Residues of `B_0 ..= B_n` modulo `p^k`; `None` where `B_i` is not p-integral
/// (that is, where `p - 1` divides a positive even `i`).
pub fn bernoulli_residues(p: u64, k: u32, n: usize) -> Result<Vec<Option<Residue>>> {
    checked_prime_power(p, k)?;
    let table = BernoulliCache::global().table(n);
    Ok(table[..=n]
        .iter()
        .map(|b| reduce_mod(b, p, k).ok())
        .collect())
}

/// The nine sums `sum_{k=2}^{p-3} w(k) B_k B_{p-3-k}` with weights
/// `1, 2^k, 2^{p-3-k}`, each optionally divided or multiplied by `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvolutionConstants {
    pub a: Residue,
    pub b: Residue,
    pub c: Residue,
    pub d: Residue,
    pub e: Residue,
    pub f: Residue,
    pub g: Residue,
    pub j: Residue,
    pub k: Residue,
}

impl ConvolutionConstants {
    /// Constants modulo `p`.
    pub fn new(p: u64) -> Result<Self> {
        Self::with_power(p, 1)
    }

    /// Constants modulo `p^power`. Every term is p-integral for `p >= 7`.
    pub fn with_power(p: u64, power: u32) -> Result<Self> {
        assert!(p >= 7, "convolution constants need p >= 7");
        let m = checked_prime_power(p, power)?;
        let ring = Modulus::new(m);
        let bern = bernoulli_residues(p, power, (p - 3) as usize)?;
        let br = |i: u64| {
            bern[i as usize]
                .expect("B_i is p-integral for i < p - 1")
                .value()
        };
        let mut s = [0u64; 9];
        for k in (2..=p - 3).step_by(2) {
            let prod = ring.mul(br(k), br(p - 3 - k));
            let two_k = ring.pow(2, k);
            let two_rest = ring.pow(2, p - 3 - k);
            let inv_k = ring.inv(k).expect("k < p");
            let kk = k % m;
            let weights = [
                1,
                two_k,
                two_rest,
                inv_k,
                ring.mul(two_k, inv_k),
                ring.mul(two_rest, inv_k),
                kk,
                ring.mul(two_k, kk),
                ring.mul(two_rest, kk),
            ];
            for (acc, w) in s.iter_mut().zip(weights) {
                *acc = ring.add(*acc, ring.mul(w, prod));
            }
        }
        let r = |v: u64| Residue::from_raw(v, p, power, m);
        Ok(ConvolutionConstants {
            a: r(s[0]),
            b: r(s[1]),
            c: r(s[2]),
            d: r(s[3]),
            e: r(s[4]),
            f: r(s[5]),
            g: r(s[6]),
            j: r(s[7]),
            k: r(s[8]),
        })
    }
}

/// Constants at `p` reduced mod `p`.
pub fn convolution_constants(p: u64) -> Result<ConvolutionConstants> {
    ConvolutionConstants::new(p)
}
