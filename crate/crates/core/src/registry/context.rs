//! Per-(prime, power) evaluation context shared by all checks at that prime.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::evaluator::{SumEvaluator, SumFamily};
use crate::residue::{
    checked_prime_power, fermat_quotient, int, pow2, rat, reduce_mod, Modulus, Rational, Residue,
};
use crate::specialnum::{chi, BernoulliCache, ConvolutionConstants};

type SumKey = (SumFamily, Vec<i64>, u64);

/// Caches sums, Bernoulli residues and constants modulo `p^k`. Not `Sync`;
/// each worker builds its own.
pub struct Ctx {
    p: u64,
    k: u32,
    ring: Modulus,
    ev: SumEvaluator,
    sums: RefCell<HashMap<SumKey, Residue>>,
    bern: OnceCell<Vec<Option<Residue>>>,
    factorials: OnceCell<(Vec<u64>, Vec<u64>)>,
    consts: OnceCell<ConvolutionConstants>,
}

impl Ctx {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        let ring = Modulus::new(checked_prime_power(p, k)?);
        let ev = SumEvaluator::new(p, k, p - 1)?;
        Ok(Ctx {
            p,
            k,
            ring,
            ev,
            sums: RefCell::new(HashMap::new()),
            bern: OnceCell::new(),
            factorials: OnceCell::new(),
            consts: OnceCell::new(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ring(&self) -> Modulus {
        self.ring
    }

    pub fn evaluator(&self) -> &SumEvaluator {
        &self.ev
    }

    pub fn raw(&self, v: u64) -> Residue {
        self.ev.residue(v)
    }

    pub fn c(&self, n: i64) -> Residue {
        self.raw(self.ring.from_i64(n))
    }

    pub fn zero(&self) -> Residue {
        self.c(0)
    }

    pub fn r(&self, x: &Rational) -> Result<Residue> {
        reduce_mod(x, self.p, self.k)
    }

    pub fn frac(&self, num: i64, den: i64) -> Result<Residue> {
        self.r(&rat(num, den))
    }

    /// `p^e` in the ring (zero once `e >= k`).
    pub fn pp(&self, e: u32) -> Residue {
        self.raw(self.ring.pow(self.p % self.ring.get(), e as u64))
    }

    /// `2^e` for any integer `e`.
    pub fn two(&self, e: i64) -> Residue {
        let t = self.raw(self.ring.pow(2, e.unsigned_abs()));
        if e >= 0 {
            t
        } else {
            t.inv().expect("2 is a unit")
        }
    }

    pub fn inv(&self, n: i64) -> Result<Residue> {
        self.c(n).inv().ok_or(Error::NotPIntegral {
            value: format!("1/{n}"),
            p: self.p,
        })
    }

    pub fn sum_at(&self, family: SumFamily, parts: &[i64], n: u64) -> Result<Residue> {
        let key = (family, parts.to_vec(), n);
        if let Some(v) = self.sums.borrow().get(&key) {
            return Ok(*v);
        }
        let v = if parts.is_empty() {
            self.c(1)
        } else {
            self.ev
                .eval(family, &Composition::new(parts.to_vec())?, n)?
        };
        self.sums.borrow_mut().insert(key, v);
        Ok(v)
    }

    pub fn h(&self, parts: &[i64]) -> Result<Residue> {
        self.sum_at(SumFamily::H, parts, self.p - 1)
    }

    pub fn s(&self, parts: &[i64]) -> Result<Residue> {
        self.sum_at(SumFamily::S, parts, self.p - 1)
    }

    pub fn u(&self, parts: &[i64]) -> Result<Residue> {
        self.sum_at(SumFamily::U, parts, self.p - 1)
    }

    pub fn v(&self, parts: &[i64]) -> Result<Residue> {
        self.sum_at(SumFamily::V, parts, self.p - 1)
    }

    /// `H(parts; (p-1)/2)`.
    pub fn h_half(&self, parts: &[i64]) -> Result<Residue> {
        self.sum_at(SumFamily::H, parts, (self.p - 1) / 2)
    }

    pub fn h31(&self) -> Result<Residue> {
        self.h_half(&[3, 1])
    }

    fn bern_table(&self) -> &[Option<Residue>] {
        self.bern.get_or_init(|| {
            let n = 2 * self.p as usize + 4;
            let table = BernoulliCache::global().table(n);
            table[..=n]
                .iter()
                .map(|b| reduce_mod(b, self.p, self.k).ok())
                .collect()
        })
    }

    pub fn bern_exact(&self, n: u64) -> Rational {
        BernoulliCache::global().get(n as usize)
    }

    /// `B_n` modulo `p^k`.
    pub fn b(&self, n: u64) -> Result<Residue> {
        let cached = self.bern_table().get(n as usize).copied();
        match cached {
            Some(Some(v)) => Ok(v),
            Some(None) => Err(Error::NotPIntegral {
                value: format!("B_{n}"),
                p: self.p,
            }),
            None => self.r(&self.bern_exact(n)),
        }
    }

    fn bern_is_zero(n: u64) -> bool {
        n > 1 && n % 2 == 1
    }

    /// `B_n / den`, exact when the fast path would divide by p.
    pub fn b_over(&self, n: u64, den: i64) -> Result<Residue> {
        if Self::bern_is_zero(n) {
            return Ok(self.zero());
        }
        if den % self.p as i64 != 0 {
            if let Ok(b) = self.b(n) {
                return Ok(b * self.inv(den)?);
            }
        }
        self.r(&(self.bern_exact(n) / int(den)))
    }

    /// `(1 - 2^n) B_n / den`; p-integral even when `B_n` alone is not.
    pub fn ompb_over(&self, n: u64, den: i64) -> Result<Residue> {
        if Self::bern_is_zero(n) {
            return Ok(self.zero());
        }
        if den % self.p as i64 != 0 {
            if let Ok(b) = self.b(n) {
                return Ok((self.c(1) - self.two(n as i64)) * b * self.inv(den)?);
            }
        }
        self.r(&((int(1) - pow2(n as i64)) * self.bern_exact(n) / int(den)))
    }

    /// `B_{p-3}`.
    pub fn bp3(&self) -> Result<Residue> {
        self.b(self.p - 3)
    }

    pub fn q(&self) -> Result<Residue> {
        self.r(&fermat_quotient(self.p))
    }

    /// `X_p(j)`.
    pub fn x(&self, j: u64) -> Result<Residue> {
        self.r(&chi(self.p, j))
    }

    pub fn consts(&self) -> Result<ConvolutionConstants> {
        if let Some(c) = self.consts.get() {
            return Ok(*c);
        }
        let c = ConvolutionConstants::with_power(self.p, self.k)?;
        Ok(*self.consts.get_or_init(|| c))
    }

    /// `C(n, j)` modulo `p^k`.
    pub fn binom(&self, n: u64, j: u64) -> Residue {
        if j > n {
            return self.zero();
        }
        if n < self.p {
            let (f, fi) = self.factorials.get_or_init(|| {
                let mut f = vec![1 % self.ring.get(); self.p as usize];
                for i in 1..self.p as usize {
                    f[i] = self.ring.mul(f[i - 1], i as u64);
                }
                let fi = f
                    .iter()
                    .map(|&x| self.ring.inv(x).expect("i! is a unit for i < p"))
                    .collect();
                (f, fi)
            });
            let v = self.ring.mul(
                f[n as usize],
                self.ring.mul(fi[j as usize], fi[(n - j) as usize]),
            );
            return self.raw(v);
        }
        self.raw(
            self.ring
                .from_bigint(&binomial(BigInt::from(n), BigInt::from(j))),
        )
    }
}
