//! Weakly nested harmonic sums twisted by `(1-x)^{n_1}` and binomial weights,
//! and their closed forms. Exact versions take any rational `x`; the modular
//! versions work at `m = p - 1` in `Z/p^k Z`.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

use crate::evaluator::{nested_sum_exact, nested_sum_mod};
use crate::residue::{int, Modulus, Rational};

fn rpow(x: &Rational, e: u64) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

fn binom(m: u64, j: u64) -> Rational {
    Rational::from_integer(binomial(BigInt::from(m), BigInt::from(j)))
}

/// `sum_{1<=n_1<=...<=n_d<=m} ((1-x)^{n_1} - 1) / (n_1 ... n_d)`.
pub fn shifted_power_sum(m: u64, d: usize, x: &Rational) -> Rational {
    let base = Rational::one() - x;
    nested_sum_exact(d, m, true, |j, i| {
        let inv = Rational::new(BigInt::one(), BigInt::from(i));
        if j == 0 {
            (rpow(&base, i) - Rational::one()) * inv
        } else {
            inv
        }
    })
}

/// `sum_{j=1}^m (-x)^j C(m,j) / j^d`.
pub fn binomial_power_sum(m: u64, d: usize, x: &Rational) -> Rational {
    let neg = -x.clone();
    (1..=m)
        .map(|j| {
            rpow(&neg, j) * binom(m, j) / Rational::from_integer(BigInt::from(j).pow(d as u32))
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `sum_{1<=n_1<=...<=n_d<=m} (-1)^{n_d} (1-x)^{n_1} C(m, n_d) / (n_1 ... n_d)`.
pub fn signed_binomial_sum(m: u64, d: usize, x: &Rational) -> Rational {
    let base = Rational::one() - x;
    nested_sum_exact(d, m, true, |j, i| {
        let mut f = Rational::new(BigInt::one(), BigInt::from(i));
        if j == 0 {
            f *= rpow(&base, i);
        }
        if j + 1 == d {
            f *= binom(m, i);
            if i % 2 == 1 {
                f = -f;
            }
        }
        f
    })
}

/// `sum_{k=1}^m x^k / k^d - sum_{k=1}^m 1 / k^d`.
pub fn power_sum_difference(m: u64, d: usize, x: &Rational) -> Rational {
    (1..=m)
        .map(|k| (rpow(x, k) - Rational::one()) / int(k as i64).pow(d as i32))
        .fold(Rational::zero(), |a, b| a + b)
}

/// `(-1)^j C(p-1, j)` and `1 - p H(1;j) + p^2 H(1,1;j)` for `j = 0..p`, modulo `ring`.
pub fn binomial_vs_harmonic(ring: Modulus, p: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(p as usize);
    let (mut choose, mut h1, mut h11) = (1 % ring.get(), 0u64, 0u64);
    let pr = p % ring.get();
    let p2 = ring.mul(pr, pr);
    for j in 0..p {
        if j > 0 {
            let inv = ring.inv(j).expect("j < p");
            // (-1)^j C(p-1,j) = (-1)^{j-1} C(p-1,j-1) * (j - p)/j
            choose = ring.mul(choose, ring.mul(ring.sub(j % ring.get(), pr), inv));
            h11 = ring.add(h11, ring.mul(h1, inv));
            h1 = ring.add(h1, inv);
        }
        let approx = ring.add(
            ring.sub(1 % ring.get(), ring.mul(pr, h1)),
            ring.mul(p2, h11),
        );
        out.push((choose, approx));
    }
    out
}

/// Modular [`shifted_power_sum`] at `m = p - 1`, with `x` given as a residue.
pub fn shifted_power_sum_mod(ring: Modulus, p: u64, d: usize, x: u64) -> u64 {
    let pows = powers(ring, ring.sub(1 % ring.get(), x), p);
    nested_sum_mod(ring, d, p - 1, true, |j, i| {
        let inv = ring.inv(i).expect("i < p");
        if j == 0 {
            ring.mul(ring.sub(pows[i as usize], 1 % ring.get()), inv)
        } else {
            inv
        }
    })
}

fn powers(ring: Modulus, base: u64, n: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = 1 % ring.get();
    for _ in 0..n {
        out.push(acc);
        acc = ring.mul(acc, base);
    }
    out
}

/// Modular [`binomial_power_sum`] at `m = p - 1`.
pub fn binomial_power_sum_mod(ring: Modulus, p: u64, d: usize, x: u64) -> u64 {
    let rows = binomial_vs_harmonic(ring, p);
    let mut acc = 0;
    let mut xp = 1 % ring.get();
    for (j, &(signed_choose, _)) in rows.iter().enumerate().skip(1) {
        xp = ring.mul(xp, x);
        // (-x)^j C(p-1,j) = x^j (-1)^j C(p-1,j)
        let inv = ring.pow(ring.inv(j as u64).expect("j < p"), d as u64);
        acc = ring.add(acc, ring.mul(ring.mul(xp, signed_choose), inv));
    }
    acc
}

/// `sum_{j=1}^{p-1} x^j / j^d (1 - p H(1;j) + p^2 H(1,1;j))`.
pub fn truncated_binomial_sum_mod(ring: Modulus, p: u64, d: usize, x: u64) -> u64 {
    let rows = binomial_vs_harmonic(ring, p);
    let mut acc = 0;
    let mut xp = 1 % ring.get();
    for (j, &(_, approx)) in rows.iter().enumerate().skip(1) {
        xp = ring.mul(xp, x);
        let inv = ring.pow(ring.inv(j as u64).expect("j < p"), d as u64);
        acc = ring.add(acc, ring.mul(ring.mul(xp, approx), inv));
    }
    acc
}

/// Modular [`signed_binomial_sum`] at `m = p - 1`.
pub fn signed_binomial_sum_mod(ring: Modulus, p: u64, d: usize, x: u64) -> u64 {
    let rows = binomial_vs_harmonic(ring, p);
    let pows = powers(ring, ring.sub(1 % ring.get(), x), p);
    nested_sum_mod(ring, d, p - 1, true, |j, i| {
        let mut f = ring.inv(i).expect("i < p");
        if j == 0 {
            f = ring.mul(f, pows[i as usize]);
        }
        if j + 1 == d {
            // (-1)^i C(p-1,i)
            f = ring.mul(f, rows[i as usize].0);
        }
        f
    })
}

/// Modular [`power_sum_difference`] at `m = p - 1`.
pub fn power_sum_difference_mod(ring: Modulus, p: u64, d: usize, x: u64) -> u64 {
    let mut acc = 0;
    let mut xp = 1 % ring.get();
    for k in 1..p {
        xp = ring.mul(xp, x);
        let inv = ring.pow(ring.inv(k).expect("k < p"), d as u64);
        acc = ring.add(acc, ring.mul(ring.sub(xp, 1 % ring.get()), inv));
    }
    acc
}
