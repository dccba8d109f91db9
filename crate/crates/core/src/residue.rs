//! Exact rationals, p-adic valuation, and the residue rings `Z/p^k Z`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` as an exact rational; negative `e` gives `1/2^|e|`.
pub fn pow2(e: i64) -> Rational {
    let mag = BigInt::one() << e.unsigned_abs() as usize;
    if e >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    /// The valuation of zero.
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(self) -> bool {
        match self {
            Valuation::Finite(v) => v >= 0,
            Valuation::Infinite => true,
        }
    }
}

fn int_valuation(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(r)`: exponent of `p` in the numerator minus that in the denominator.
pub fn valuation(r: &Rational, p: u64) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_valuation(r.numer(), p) - int_valuation(r.denom(), p))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// `(2^{p-1} - 1) / p`, exact.
pub fn fermat_quotient(p: u64) -> Rational {
    assert!(
        p > 2 && is_prime(p),
        "fermat_quotient needs an odd prime, got {p}"
    );
    let num = (BigInt::one() << (p - 1) as usize) - BigInt::one();
    Rational::new(num, BigInt::from(p))
}

/// `p^k` when it fits in 63 bits.
pub fn checked_prime_power(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .filter(|&m| m < (1 << 63))
        .ok_or(Error::ModulusTooLarge { p, k })
}

/// Arithmetic modulo a fixed `m < 2^63`. Used directly by the hot loops of the
/// evaluator; [`Residue`] is the public value type built on top of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    m: u64,
}

impl Modulus {
    pub fn new(m: u64) -> Self {
        assert!((1..1 << 63).contains(&m));
        Modulus { m }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.m
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.m <= u32::MAX as u64 {
            a * b % self.m
        } else {
            ((a as u128 * b as u128) % self.m as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.m;
        base %= self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse by extended Euclid; `None` when `gcd(a, m) != 1`.
    pub fn inv(self, a: u64) -> Option<u64> {
        let (mut r0, mut r1) = (self.m as i128, (a % self.m) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.m as i128) as u64)
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.m as i64) as u64
    }

    pub fn from_bigint(self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.m))
            .to_u64()
            .expect("reduced value fits")
    }
}

/// An element of `Z/p^k Z`. Arithmetic between residues of different rings panics;
/// use [`Residue::project`] to move down to a smaller power first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    p: u64,
    k: u32,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i64, p: u64, k: u32) -> Result<Self> {
        let m = checked_prime_power(p, k)?;
        Ok(Self::from_raw(value.rem_euclid(m as i64) as u64, p, k, m))
    }

    pub(crate) fn from_raw(value: u64, p: u64, k: u32, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Residue {
            value,
            p,
            k,
            modulus,
        }
    }

    pub fn zero(p: u64, k: u32) -> Result<Self> {
        Self::new(0, p, k)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn ring(&self) -> Modulus {
        Modulus::new(self.modulus)
    }

    fn check_ring(&self, other: &Residue) {
        if self.p != other.p || self.k != other.k {
            panic!("{}", Error::RingMismatch(self.p, self.k, other.p, other.k));
        }
    }

    /// Image under `Z/p^k Z -> Z/p^j Z`, `j <= k`.
    pub fn project(&self, j: u32) -> Residue {
        assert!(
            j <= self.k,
            "cannot project {}^{} up to power {j}",
            self.p,
            self.k
        );
        let m = self.p.pow(j);
        Residue::from_raw(self.value % m, self.p, j, m)
    }

    pub fn pow(&self, e: u64) -> Residue {
        Residue {
            value: self.ring().pow(self.value, e),
            ..*self
        }
    }

    /// Multiplicative inverse, `None` when the value is divisible by `p`.
    pub fn inv(&self) -> Option<Residue> {
        self.ring()
            .inv(self.value)
            .map(|value| Residue { value, ..*self })
    }

    pub fn scale(&self, c: i64) -> Residue {
        let r = self.ring();
        Residue {
            value: r.mul(self.value, r.from_i64(c)),
            ..*self
        }
    }

    /// Symmetric representative in `(-m/2, m/2]`, handy for reporting small deltas.
    pub fn signed_value(&self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{} (mod {})", self.value, self.p)
        } else {
            write!(f, "{} (mod {}^{})", self.value, self.p, self.k)
        }
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check_ring(&rhs);
        Residue {
            value: self.ring().add(self.value, rhs.value),
            ..self
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check_ring(&rhs);
        Residue {
            value: self.ring().sub(self.value, rhs.value),
            ..self
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check_ring(&rhs);
        Residue {
            value: self.ring().mul(self.value, rhs.value),
            ..self
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: self.ring().neg(self.value),
            ..self
        }
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Residue {
    fn sum<I: Iterator<Item = Residue>>(mut iter: I) -> Residue {
        let first = iter
            .next()
            .expect("sum of an empty residue iterator has no ring");
        iter.fold(first, |a, b| a + b)
    }
}

/// The unique residue of `r` in `Z/p^k Z`; fails when `p` divides the denominator.
pub fn reduce_mod(r: &Rational, p: u64, k: u32) -> Result<Residue> {
    let m = checked_prime_power(p, k)?;
    let ring = Modulus::new(m);
    let den = ring.from_bigint(r.denom());
    let inv = ring.inv(den).ok_or_else(|| Error::NotPIntegral {
        value: r.to_string(),
        p,
    })?;
    let num = ring.from_bigint(r.numer());
    Ok(Residue::from_raw(ring.mul(num, inv), p, k, m))
}

/// Reduce a non-negative big integer; used for printing and for Bernoulli tables.
pub fn biguint_mod(n: &BigUint, m: u64) -> u64 {
    (n % BigUint::from(m)).to_u64().expect("reduced value fits")
}
