//! Nested sums `H`, `S`, `U`, `V` over exact rationals or modulo `p^k`.
//!
//! For a composition `s = (s_1..s_d)` and index tuple `k_1 < ... < k_d <= n`
//! (`<=` throughout for `S`), each part contributes `w(s_j)^{k_j} / k_j^{|s_j|}`:
//!
//! | family | `s_j > 0` | `s_j < 0` |
//! |--------|-----------|-----------|
//! | H, S   | 1         | -1        |
//! | U      | 1         | 2         |
//! | V      | 1         | 1/2       |
//!
//! The fast path sweeps the indices once and keeps one running partial sum per
//! prefix of the composition, so a sum costs `O(n * d)` ring operations.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::residue::{checked_prime_power, is_prime, pow2, Modulus, Rational, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumFamily {
    H,
    S,
    U,
    V,
}

impl SumFamily {
    pub fn is_weak(self) -> bool {
        self == SumFamily::S
    }
}

impl fmt::Display for SumFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SumFamily::H => "H",
            SumFamily::S => "S",
            SumFamily::U => "U",
            SumFamily::V => "V",
        };
        f.write_str(s)
    }
}

impl FromStr for SumFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "H" => Ok(SumFamily::H),
            "S" => Ok(SumFamily::S),
            "U" => Ok(SumFamily::U),
            "V" => Ok(SumFamily::V),
            other => Err(Error::InvalidArgument(format!(
                "unknown sum family {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Residue { p: u64, k: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Residue(Residue),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// Generic prefix-sweep: `dp[j]` holds the sum over the first `j` parts with the
/// last used index at most the current one. Strict inequalities update `dp`
/// from the top so index `i` is used at most once per tuple; weak ones from the
/// bottom so it may repeat.
pub fn nested_sum_mod(
    ring: Modulus,
    depth: usize,
    n: u64,
    weak: bool,
    mut factor: impl FnMut(usize, u64) -> u64,
) -> u64 {
    let mut dp = vec![0u64; depth + 1];
    dp[0] = 1 % ring.get();
    for i in 1..=n {
        if weak {
            for j in 1..=depth {
                let t = ring.mul(dp[j - 1], factor(j - 1, i));
                dp[j] = ring.add(dp[j], t);
            }
        } else {
            for j in (1..=depth).rev() {
                let t = ring.mul(dp[j - 1], factor(j - 1, i));
                dp[j] = ring.add(dp[j], t);
            }
        }
    }
    dp[depth]
}

/// Exact counterpart of [`nested_sum_mod`].
pub fn nested_sum_exact(
    depth: usize,
    n: u64,
    weak: bool,
    mut factor: impl FnMut(usize, u64) -> Rational,
) -> Rational {
    let mut dp = vec![Rational::zero(); depth + 1];
    dp[0] = Rational::one();
    for i in 1..=n {
        let order: Vec<usize> = if weak {
            (1..=depth).collect()
        } else {
            (1..=depth).rev().collect()
        };
        for j in order {
            let t = &dp[j - 1] * factor(j - 1, i);
            dp[j] += t;
        }
    }
    dp.pop().unwrap()
}

fn exact_factor(family: SumFamily, s: i64, i: u64) -> Rational {
    let e = s.unsigned_abs() as usize;
    let base = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(i), e));
    if s > 0 {
        return base;
    }
    match family {
        SumFamily::H | SumFamily::S => {
            if i % 2 == 1 {
                -base
            } else {
                base
            }
        }
        SumFamily::U => base * pow2(i as i64),
        SumFamily::V => base * pow2(-(i as i64)),
    }
}

pub fn eval_exact(family: SumFamily, c: &Composition, n: u64) -> Rational {
    let parts = c.parts();
    nested_sum_exact(parts.len(), n, family.is_weak(), |j, i| {
        exact_factor(family, parts[j], i)
    })
}

fn check_residue_args(family: SumFamily, n: u64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if n >= p {
        return Err(Error::IndexNotInvertible { n, p });
    }
    if family == SumFamily::V && p == 2 {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// Residue-mode evaluator for one ring `Z/p^k Z` and indices up to `n_max < p`.
/// Keeps inverse-power tables per exponent, so repeated sums share work.
#[derive(Debug)]
pub struct SumEvaluator {
    p: u64,
    k: u32,
    ring: Modulus,
    n_max: u64,
    inv: Vec<u64>,
    two: Vec<u64>,
    half: Vec<u64>,
    powers: RefCell<HashMap<u64, Rc<Vec<u64>>>>,
}

impl SumEvaluator {
    pub fn new(p: u64, k: u32, n_max: u64) -> Result<Self> {
        check_residue_args(SumFamily::H, n_max, p)?;
        let ring = Modulus::new(checked_prime_power(p, k)?);
        let mut inv = vec![0u64; n_max as usize + 1];
        let mut two = vec![1 % ring.get(); n_max as usize + 1];
        let mut half = two.clone();
        let inv2 = if p == 2 {
            0
        } else {
            ring.inv(2).expect("p odd")
        };
        for i in 1..=n_max as usize {
            inv[i] = ring.inv(i as u64).expect("i < p");
            two[i] = ring.add(two[i - 1], two[i - 1]);
            half[i] = ring.mul(half[i - 1], inv2);
        }
        Ok(SumEvaluator {
            p,
            k,
            ring,
            n_max,
            inv,
            two,
            half,
            powers: RefCell::new(HashMap::new()),
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

    pub fn residue(&self, value: u64) -> Residue {
        Residue::from_raw(value, self.p, self.k, self.ring.get())
    }

    /// `i^{-e}` for `i = 0..=n_max` (entry 0 unused).
    pub fn inverse_powers(&self, e: u64) -> Rc<Vec<u64>> {
        if let Some(t) = self.powers.borrow().get(&e) {
            return Rc::clone(t);
        }
        let t: Rc<Vec<u64>> = Rc::new(self.inv.iter().map(|&x| self.ring.pow(x, e)).collect());
        self.powers.borrow_mut().insert(e, Rc::clone(&t));
        t
    }

    pub fn powers_of_two(&self) -> &[u64] {
        &self.two
    }

    pub fn powers_of_half(&self) -> &[u64] {
        &self.half
    }

    /// Raw residue value of `family(parts; n)`.
    pub fn eval_raw(&self, family: SumFamily, parts: &[i64], n: u64) -> Result<u64> {
        check_residue_args(family, n, self.p)?;
        if n > self.n_max {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds the evaluator range {}",
                self.n_max
            )));
        }
        let tables: Vec<Rc<Vec<u64>>> = parts
            .iter()
            .map(|s| self.inverse_powers(s.unsigned_abs()))
            .collect();
        let ring = self.ring;
        let value = nested_sum_mod(ring, parts.len(), n, family.is_weak(), |j, i| {
            let base = tables[j][i as usize];
            if parts[j] > 0 {
                return base;
            }
            match family {
                SumFamily::H | SumFamily::S => {
                    if i % 2 == 1 {
                        ring.neg(base)
                    } else {
                        base
                    }
                }
                SumFamily::U => ring.mul(base, self.two[i as usize]),
                SumFamily::V => ring.mul(base, self.half[i as usize]),
            }
        });
        Ok(value)
    }

    pub fn eval(&self, family: SumFamily, c: &Composition, n: u64) -> Result<Residue> {
        Ok(self.residue(self.eval_raw(family, c.parts(), n)?))
    }
}

pub fn eval_mod(family: SumFamily, c: &Composition, n: u64, p: u64, k: u32) -> Result<Residue> {
    check_residue_args(family, n, p)?;
    SumEvaluator::new(p, k, n)?.eval(family, c, n)
}

pub fn eval(family: SumFamily, c: &Composition, n: u64, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Exact => Ok(Value::Exact(eval_exact(family, c, n))),
        Mode::Residue { p, k } => eval_mod(family, c, n, p, k).map(Value::Residue),
    }
}

/// `h_31 = H(3,1; (p-1)/2)` modulo `p^k`.
pub fn h31(p: u64, k: u32) -> Result<Residue> {
    eval_mod(
        SumFamily::H,
        &Composition::from_slice(&[3, 1]),
        (p - 1) / 2,
        p,
        k,
    )
}

/// Literal nested loops over all index tuples. Exponential in the depth; only
/// meant as an oracle for small `n`.
pub fn eval_naive(family: SumFamily, c: &Composition, n: u64, mode: Mode) -> Result<Value> {
    fn walk(
        family: SumFamily,
        parts: &[i64],
        lo: u64,
        n: u64,
        term: &Rational,
        out: &mut Rational,
    ) {
        let Some((&s, rest)) = parts.split_first() else {
            *out += term;
            return;
        };
        for i in lo..=n {
            let t = term * exact_factor(family, s, i);
            let next = if family.is_weak() { i } else { i + 1 };
            walk(family, rest, next, n, &t, out);
        }
    }
    if let Mode::Residue { p, .. } = mode {
        check_residue_args(family, n, p)?;
    }
    let mut total = Rational::zero();
    walk(family, c.parts(), 1, n, &Rational::one(), &mut total);
    match mode {
        Mode::Exact => Ok(Value::Exact(total)),
        Mode::Residue { p, k } => crate::residue::reduce_mod(&total, p, k).map(Value::Residue),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::{int, primes_between, rat, reduce_mod};
    use proptest::prelude::*;

    fn c(parts: &[i64]) -> Composition {
        Composition::from_slice(parts)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(eval_exact(SumFamily::H, &c(&[1, -3]), 6), rat(4769, 51840));
        assert_eq!(
            eval_mod(SumFamily::H, &c(&[1, -3]), 6, 7, 1)
                .unwrap()
                .value(),
            6
        );
        assert_eq!(eval_exact(SumFamily::U, &c(&[-1]), 3), rat(20, 3));
        assert_eq!(eval_exact(SumFamily::V, &c(&[-1]), 2), rat(5, 8));
        assert_eq!(eval_exact(SumFamily::H, &c(&[1, -2]), 3), rat(1, 12));
        assert_eq!(eval_exact(SumFamily::H, &c(&[-2]), 4), rat(-115, 144));
        assert_eq!(eval_exact(SumFamily::S, &c(&[1, 1]), 2), rat(7, 4));
        assert_eq!(eval_exact(SumFamily::H, &c(&[1, 1]), 0), int(0));
        assert_eq!(eval_exact(SumFamily::H, &c(&[1, 2, 3]), 2), int(0));
    }

    #[test]
    fn residue_mode_rejects_large_n() {
        assert_eq!(
            eval_mod(SumFamily::H, &c(&[1]), 7, 7, 1),
            Err(Error::IndexNotInvertible { n: 7, p: 7 })
        );
        assert!(eval_mod(SumFamily::H, &c(&[1]), 3, 9, 1).is_err());
    }

    #[test]
    fn naive_matches_dp_small() {
        for parts in [&[1, -3][..], &[-2, 1, 1], &[2, 2], &[-1, -1, -1]] {
            for fam in [SumFamily::H, SumFamily::S, SumFamily::U, SumFamily::V] {
                for n in 0..8 {
                    let dp = eval_exact(fam, &c(parts), n);
                    assert_eq!(
                        eval_naive(fam, &c(parts), n, Mode::Exact).unwrap(),
                        Value::Exact(dp)
                    );
                }
            }
        }
    }

    #[test]
    fn residue_matches_exact_reduction() {
        let comp = c(&[-1, 2, -1]);
        for p in [11u64, 13] {
            for k in 1..=3 {
                for fam in [SumFamily::H, SumFamily::S, SumFamily::U, SumFamily::V] {
                    let exact = eval_exact(fam, &comp, p - 1);
                    assert_eq!(
                        eval_mod(fam, &comp, p - 1, p, k).unwrap(),
                        reduce_mod(&exact, p, k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn h31_is_a_half_range_sum() {
        let p = 13;
        let exact = eval_exact(SumFamily::H, &c(&[3, 1]), 6);
        assert_eq!(h31(p, 2).unwrap(), reduce_mod(&exact, p, 2).unwrap());
    }

    #[test]
    fn reversal_relation_sample() {
        // H(s; p-1) ≡ sign(prod s)(-1)^{|s|} H(reverse s; p-1) mod p, from k -> p - k
        for p in primes_between(11, 60) {
            for parts in [&[1, -2, 3][..], &[-1, -1, 2], &[2, -3], &[-1, 2, 2, -1]] {
                let comp = c(parts);
                if comp.weight() >= p {
                    continue;
                }
                let sign = comp.sign()
                    * if comp.weight().is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                for fam in [SumFamily::H, SumFamily::S] {
                    let lhs = eval_mod(fam, &comp, p - 1, p, 1).unwrap();
                    let rhs = eval_mod(fam, &comp.reverse(), p - 1, p, 1)
                        .unwrap()
                        .scale(sign);
                    assert_eq!(lhs, rhs, "{fam}({comp}) at p={p}");
                }
            }
        }
    }

    #[test]
    fn large_exponents_reduce_by_fermat() {
        // On indices 1..p-1, i^{-(e + p - 1)} ≡ i^{-e} mod p.
        let p = 31;
        let small = eval_mod(SumFamily::H, &c(&[-3, 2]), p - 1, p, 1).unwrap();
        let big = eval_mod(SumFamily::H, &c(&[-(3 + 30), 2 + 60]), p - 1, p, 1).unwrap();
        assert_eq!(small, big);
    }

    fn signed_composition(max_weight: u64) -> impl Strategy<Value = Composition> {
        prop::collection::vec((1i64..=3, any::<bool>()), 1..=3)
            .prop_filter("weight", move |v| {
                v.iter().map(|(m, _)| *m as u64).sum::<u64>() <= max_weight
            })
            .prop_map(|v| {
                Composition::new(
                    v.into_iter()
                        .map(|(m, neg)| if neg { -m } else { m })
                        .collect(),
                )
                .unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn residue_dp_matches_naive(
            comp in signed_composition(5),
            p in prop::sample::select(vec![5u64, 7, 11, 13, 29, 97]),
            k in 1u32..=3,
            fam in prop::sample::select(vec![SumFamily::H, SumFamily::S, SumFamily::U, SumFamily::V]),
            frac in 0.0f64..1.0,
        ) {
            let n = ((p - 1) as f64 * frac) as u64;
            let n = n.min(12);
            let naive = eval_naive(fam, &comp, n, Mode::Residue { p, k }).unwrap();
            prop_assert_eq!(naive, Value::Residue(eval_mod(fam, &comp, n, p, k).unwrap()));
        }
    }
}
