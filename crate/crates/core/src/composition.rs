//! Signed compositions, the `⊕` merge, coarsenings, and odd-partition combinatorics.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::residue::{int, Rational};
use num_traits::{ToPrimitive, Zero};

/// `s ⊕ t = sign(st)(|s| + |t|)`, with `sign(0)` read as `+` so that `0 ⊕ t = t`.
pub fn oplus(s: i64, t: i64) -> i64 {
    let neg = (s < 0) != (t < 0);
    let mag = s.abs() + t.abs();
    if neg {
        -mag
    } else {
        mag
    }
}

/// Argument vector of an alternating sum: nonzero signed exponents `s_1..s_d`, `d >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(Vec<i64>);

impl Composition {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument(
                "a composition needs at least one part".into(),
            ));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("zero part in {parts:?}")));
        }
        Ok(Composition(parts))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn from_slice(parts: &[i64]) -> Self {
        Self::new(parts.to_vec()).expect("valid composition literal")
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<i64> {
        self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|s| s.unsigned_abs()).sum()
    }

    pub fn negative_count(&self) -> usize {
        self.0.iter().filter(|&&s| s < 0).count()
    }

    /// Sign of the product of all parts.
    pub fn sign(&self) -> i64 {
        if self.negative_count().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn reverse(&self) -> Composition {
        Composition(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Every composition obtained by `⊕`-merging a subset of the `d - 1` adjacent
    /// boundaries, paired with the number of merges. The first entry is `self`.
    pub fn coarsenings_with_merges(&self) -> Vec<(Composition, usize)> {
        let d = self.depth();
        (0u64..1 << (d - 1))
            .map(|mask| {
                let mut parts = vec![self.0[0]];
                for (i, &s) in self.0.iter().enumerate().skip(1) {
                    if mask >> (i - 1) & 1 == 1 {
                        let last = parts.last_mut().unwrap();
                        *last = oplus(*last, s);
                    } else {
                        parts.push(s);
                    }
                }
                (Composition(parts), mask.count_ones() as usize)
            })
            .collect()
    }

    pub fn coarsenings(&self) -> Vec<Composition> {
        self.coarsenings_with_merges()
            .into_iter()
            .map(|(c, _)| c)
            .collect()
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Every signed composition of weight `1..=max_weight`, by weight then parts.
pub fn signed_compositions(max_weight: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for w in 1..=max_weight {
        for mask in 0..1u64 << (w - 1) {
            let mut parts = Vec::new();
            let mut cur = 1i64;
            for bit in 0..w - 1 {
                if mask >> bit & 1 == 1 {
                    parts.push(cur);
                    cur = 1;
                } else {
                    cur += 1;
                }
            }
            parts.push(cur);
            for signs in 0..1u64 << parts.len() {
                out.push(
                    parts
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| if signs >> i & 1 == 1 { -x } else { x })
                        .collect(),
                );
            }
        }
    }
    out
}

/// Parse a comma-separated list of signed integers; whitespace is ignored.
/// The empty string gives the empty word.
pub fn parse_word(input: &str) -> Result<Vec<i64>> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|tok| {
            let tok: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
            match tok.parse::<i64>() {
                Ok(0) => Err(Error::Parse {
                    input: input.into(),
                    reason: "parts must be nonzero".into(),
                }),
                Ok(v) => Ok(v),
                Err(e) => Err(Error::Parse {
                    input: input.into(),
                    reason: format!("{tok:?}: {e}"),
                }),
            }
        })
        .collect()
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_word(s)?;
        if parts.is_empty() {
            return Err(Error::Parse {
                input: s.into(),
                reason: "empty composition".into(),
            });
        }
        Ok(Composition(parts))
    }
}

/// `S(c)` as the plain sum of `H` over all coarsenings of `c`.
pub fn s_from_h<T, F>(c: &Composition, mut h: F) -> T
where
    T: Add<Output = T>,
    F: FnMut(&Composition) -> T,
{
    c.coarsenings()
        .iter()
        .map(&mut h)
        .reduce(|a, b| a + b)
        .expect("at least one coarsening")
}

/// `H(c)` as the signed sum `(-1)^{ℓ(c) - ℓ(r)} S(r)` over coarsenings `r`.
pub fn h_from_s<T, F>(c: &Composition, mut s: F) -> T
where
    T: Add<Output = T> + Sub<Output = T> + Neg<Output = T>,
    F: FnMut(&Composition) -> T,
{
    let mut acc: Option<T> = None;
    for (r, merges) in c.coarsenings_with_merges() {
        let v = s(&r);
        acc = Some(match (acc, merges % 2 == 0) {
            (None, true) => v,
            (None, false) => -v,
            (Some(a), true) => a + v,
            (Some(a), false) => a - v,
        });
    }
    acc.expect("at least one coarsening")
}

/// Weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u64>);

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(
                "partition parts must be positive".into(),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.0.iter().all(|x| x % 2 == 1)
    }

    fn with_part(&self, part: u64) -> Partition {
        let mut v = self.0.clone();
        v.push(part);
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", strs.join(","))
    }
}

/// All partitions of `n`, each weakly decreasing, in reverse lexicographic order.
pub fn partitions(n: u64) -> Vec<Partition> {
    fn go(rest: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn odd_partitions(n: u64) -> Vec<Partition> {
    partitions(n)
        .into_iter()
        .filter(Partition::is_odd)
        .collect()
}

/// `e_0 ..= e_n` expanded in power sums via Newton's identities
/// `m e_m = sum_{i=1}^{m} (-1)^{i-1} p_i e_{m-i}`.
pub fn elementary_in_power_sums(n: u64) -> Vec<BTreeMap<Partition, Rational>> {
    let mut e: Vec<BTreeMap<Partition, Rational>> =
        vec![BTreeMap::from([(Partition(vec![]), int(1))])];
    for m in 1..=n {
        let mut cur: BTreeMap<Partition, Rational> = BTreeMap::new();
        for i in 1..=m {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            for (lambda, coeff) in &e[(m - i) as usize] {
                *cur.entry(lambda.with_part(i))
                    .or_insert_with(Rational::zero) += &sign * coeff;
            }
        }
        cur.retain(|_, c| !c.is_zero());
        for c in cur.values_mut() {
            *c /= int(m as i64);
        }
        e.push(cur);
    }
    e
}

/// Integer coefficient of `p_λ` in `ℓ! e_ℓ`.
pub fn c_lambda(lambda: &Partition) -> i128 {
    let n = lambda.size();
    let e = elementary_in_power_sums(n);
    let fact: i128 = (1..=n as i128).product();
    let coeff = e[n as usize]
        .get(lambda)
        .cloned()
        .unwrap_or_else(Rational::zero)
        * Rational::from_integer(fact.into());
    assert!(coeff.is_integer());
    coeff.to_integer().to_i128().expect("c_lambda fits in i128")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_composition_counts() {
        // weight w contributes 2 * 3^{w-1}
        let all = signed_compositions(4);
        assert_eq!(all.len(), 2 + 6 + 18 + 54);
        assert_eq!(all[0], vec![1]);
    }

    use proptest::prelude::*;

    fn c(parts: &[i64]) -> Composition {
        Composition::from_slice(parts)
    }

    fn part(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(oplus(2, 3), 5);
        assert_eq!(oplus(-2, 3), -5);
        assert_eq!(oplus(-2, -3), 5);
        assert_eq!(oplus(0, -4), -4);
        assert_eq!(oplus(0, 4), 4);
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(c(&[1, -2, -1]).reverse(), c(&[-1, -2, 1]));
        assert_eq!(c(&[-3]).reverse(), c(&[-3]));
        assert_eq!(c(&[1, 1, -1, -1]).reverse(), c(&[-1, -1, 1, 1]));
    }

    #[test]
    fn coarsening_examples() {
        assert_eq!(c(&[1, 1]).coarsenings(), vec![c(&[1, 1]), c(&[2])]);
        assert_eq!(c(&[1, -1]).coarsenings(), vec![c(&[1, -1]), c(&[-2])]);
        assert_eq!(c(&[1, -2, 3]).coarsenings().len(), 4);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1,-2,-1".parse::<Composition>().unwrap(), c(&[1, -2, -1]));
        assert_eq!(" 1 , - 2 ".parse::<Composition>().unwrap(), c(&[1, -2]));
        assert_eq!(c(&[1, -2, -1]).to_string(), "1,-2,-1");
        assert!("1,0".parse::<Composition>().is_err());
        assert!("".parse::<Composition>().is_err());
        assert!("1,x".parse::<Composition>().is_err());
        assert_eq!(parse_word("").unwrap(), Vec::<i64>::new());
        assert!(Composition::new(vec![]).is_err());
    }

    #[test]
    fn odd_partition_examples() {
        assert_eq!(odd_partitions(2), vec![part(&[1, 1])]);
        let o3: std::collections::BTreeSet<_> = odd_partitions(3).into_iter().collect();
        assert_eq!(o3, [part(&[1, 1, 1]), part(&[3])].into_iter().collect());
        let o4: std::collections::BTreeSet<_> = odd_partitions(4).into_iter().collect();
        assert_eq!(
            o4,
            [part(&[1, 1, 1, 1]), part(&[1, 3])].into_iter().collect()
        );
        assert_eq!(partitions(6).len(), 11);
    }

    #[test]
    fn c_lambda_small_values() {
        assert_eq!(c_lambda(&part(&[1, 1, 1, 1])), 1);
        assert_eq!(c_lambda(&part(&[3])), 2);
        assert_eq!(c_lambda(&part(&[1, 3])), 8);
        assert_eq!(c_lambda(&part(&[1, 1, 3])), 20);
        assert_eq!(c_lambda(&part(&[1, 1, 1, 3])), 40);
        assert_eq!(c_lambda(&part(&[3, 3])), 40);
        assert_eq!(c_lambda(&part(&[2])), -1);
    }

    /// Leibniz expansion of the determinant with entries in the polynomial ring
    /// generated by the power sums; monomials are keyed by partitions.
    fn determinant_expansion(n: usize) -> BTreeMap<Partition, i128> {
        // entry (i, j), 0-based: i >= j -> p_{i-j+1}; j == i+1 -> i+1; else 0
        #[derive(Clone)]
        enum Entry {
            Zero,
            Const(i128),
            Power(u64),
        }
        let entry = |i: usize, j: usize| {
            if i >= j {
                Entry::Power((i - j + 1) as u64)
            } else if j == i + 1 {
                Entry::Const((i + 1) as i128)
            } else {
                Entry::Zero
            }
        };
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut out: BTreeMap<Partition, i128> = BTreeMap::new();
        for sigma in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| sigma[i] > sigma[j])
                .count();
            let mut coeff: i128 = if inversions % 2 == 0 { 1 } else { -1 };
            let mut mono = Vec::new();
            let mut zero = false;
            for (i, &j) in sigma.iter().enumerate() {
                match entry(i, j) {
                    Entry::Zero => {
                        zero = true;
                        break;
                    }
                    Entry::Const(v) => coeff *= v,
                    Entry::Power(k) => mono.push(k),
                }
            }
            if !zero {
                *out.entry(Partition::new(mono).unwrap()).or_default() += coeff;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    #[test]
    fn newton_recursion_matches_determinant() {
        for n in 1..=6u64 {
            let det = determinant_expansion(n as usize);
            for lambda in partitions(n) {
                assert_eq!(
                    c_lambda(&lambda),
                    det.get(&lambda).copied().unwrap_or(0),
                    "λ={lambda}"
                );
            }
        }
    }

    fn composition_strategy(max_depth: usize) -> impl Strategy<Value = Composition> {
        prop::collection::vec((1i64..4, any::<bool>()), 1..=max_depth).prop_map(|v| {
            Composition::new(
                v.into_iter()
                    .map(|(m, neg)| if neg { -m } else { m })
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn oplus_commutes_and_adds_magnitudes(s in -50i64..50, t in -50i64..50) {
            prop_assume!(s != 0 && t != 0);
            prop_assert_eq!(oplus(s, t), oplus(t, s));
            prop_assert_eq!(oplus(s, t).unsigned_abs(), s.unsigned_abs() + t.unsigned_abs());
        }

        #[test]
        fn reverse_is_involutive(c in composition_strategy(6)) {
            prop_assert_eq!(c.reverse().reverse(), c);
        }

        #[test]
        fn coarsenings_preserve_weight_and_sign(c in composition_strategy(6)) {
            let all = c.coarsenings();
            prop_assert_eq!(all.len(), 1 << (c.depth() - 1));
            for r in all {
                prop_assert_eq!(r.weight(), c.weight());
                prop_assert_eq!(r.sign(), c.sign());
            }
        }

        #[test]
        fn parse_display_roundtrip(c in composition_strategy(6)) {
            prop_assert_eq!(c.to_string().parse::<Composition>().unwrap(), c);
        }
    }
}
