//! Quasi-shuffle (stuffle) algebra on words of nonzero integer letters.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::composition::{oplus, Composition};
use crate::error::Result;
use crate::evaluator::{eval, Mode, SumFamily, Value};
use crate::residue::{reduce_mod, Rational, Residue};

/// Formal rational linear combination of words; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordSum {
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl WordSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Vec<i64>) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: Vec<i64>, coeff: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(w, coeff);
        s
    }

    pub fn add_term(&mut self, w: Vec<i64>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[i64]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &WordSum) -> WordSum {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WordSum {
        let mut out = WordSum::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &WordSum) -> WordSum {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Bilinear extension of [`stuffle_product`].
    pub fn stuffle(&self, other: &WordSum) -> WordSum {
        let mut out = WordSum::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out = out.add(&stuffle_product(w1, w2).scale(&(c1 * c2)));
            }
        }
        out
    }

    /// Sum of coefficients.
    pub fn mass(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }

    /// `sum c_w H(w; n)` with `H(empty; n) = 1`.
    pub fn eval_h(&self, n: u64, mode: Mode) -> Result<Value> {
        match mode {
            Mode::Exact => {
                let mut acc = Rational::zero();
                for (w, c) in &self.terms {
                    let v = if w.is_empty() {
                        Rational::one()
                    } else {
                        match eval(SumFamily::H, &Composition::new(w.clone())?, n, mode)? {
                            Value::Exact(r) => r,
                            Value::Residue(_) => unreachable!(),
                        }
                    };
                    acc += c * v;
                }
                Ok(Value::Exact(acc))
            }
            Mode::Residue { p, k } => {
                let mut eval_word = |w: &[i64]| -> Result<Residue> {
                    if w.is_empty() {
                        return Residue::new(1, p, k);
                    }
                    match eval(SumFamily::H, &Composition::new(w.to_vec())?, n, mode)? {
                        Value::Residue(r) => Ok(r),
                        Value::Exact(_) => unreachable!(),
                    }
                };
                self.eval_with(p, k, &mut eval_word).map(Value::Residue)
            }
        }
    }

    /// `sum c_w f(w)` in `Z/p^k Z` with a caller-supplied word evaluation.
    pub fn eval_with(
        &self,
        p: u64,
        k: u32,
        f: &mut dyn FnMut(&[i64]) -> Result<Residue>,
    ) -> Result<Residue> {
        let mut acc = Residue::zero(p, k)?;
        for (w, c) in &self.terms {
            acc += reduce_mod(c, p, k)? * f(w)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = w.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{c}·({word})")?,
                (0, true) => write!(f, "-{}·({word})", -c)?,
                (_, false) => write!(f, " + {c}·({word})")?,
                (_, true) => write!(f, " - {}·({word})", -c)?,
            }
        }
        Ok(())
    }
}

/// `y_s w1 * y_t w2 = y_s (w1 * y_t w2) + y_t (y_s w1 * w2) + y_{s⊕t} (w1 * w2)`,
/// with the empty word as unit.
pub fn stuffle_product(w1: &[i64], w2: &[i64]) -> WordSum {
    fn go(w1: &[i64], w2: &[i64], memo: &mut HashMap<(usize, usize), WordSum>) -> WordSum {
        if w1.is_empty() {
            return WordSum::word(w2.to_vec());
        }
        if w2.is_empty() {
            return WordSum::word(w1.to_vec());
        }
        let key = (w1.len(), w2.len());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let (s, t) = (w1[0], w2[0]);
        let mut out = WordSum::zero();
        for (head, sub) in [
            (s, go(&w1[1..], w2, memo)),
            (t, go(w1, &w2[1..], memo)),
            (oplus(s, t), go(&w1[1..], &w2[1..], memo)),
        ] {
            for (w, c) in sub.terms {
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(head);
                word.extend(w);
                out.add_term(word, c);
            }
        }
        memo.insert(key, out.clone());
        out
    }
    // suffixes are identified by their lengths, which is sound for a fixed (w1, w2)
    go(w1, w2, &mut HashMap::new())
}

/// Whether `H(w1; n) H(w2; n)` equals the evaluation of `w1 * w2` at `n`.
pub fn homomorphism_check(w1: &[i64], w2: &[i64], n: u64, mode: Mode) -> Result<bool> {
    let lhs = WordSum::word(w1.to_vec()).eval_h(n, mode)?;
    let rhs_factor = WordSum::word(w2.to_vec()).eval_h(n, mode)?;
    let product = match (lhs, rhs_factor) {
        (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b),
        (Value::Residue(a), Value::Residue(b)) => Value::Residue(a * b),
        _ => unreachable!("same mode on both factors"),
    };
    Ok(product == stuffle_product(w1, w2).eval_h(n, mode)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::int;
    use num_bigint::BigInt;
    use num_integer::binomial;
    use proptest::prelude::*;

    #[test]
    fn five_term_example() {
        let got = stuffle_product(&[-2], &[-3, 2]);
        let mut want = WordSum::zero();
        for w in [
            vec![-2, -3, 2],
            vec![-3, -2, 2],
            vec![-3, 2, -2],
            vec![5, 2],
            vec![-3, -4],
        ] {
            want.add_term(w, int(1));
        }
        assert_eq!(got, want);
        assert_eq!(
            got.to_string(),
            "1·(-3,-4) + 1·(-3,-2,2) + 1·(-3,2,-2) + 1·(-2,-3,2) + 1·(5,2)"
        );
    }

    #[test]
    fn unit_and_small_products() {
        assert_eq!(stuffle_product(&[], &[1, -2]), WordSum::word(vec![1, -2]));
        assert_eq!(stuffle_product(&[1], &[]).to_string(), "1·(1)");
        assert_eq!(stuffle_product(&[1], &[1]).to_string(), "2·(1,1) + 1·(2)");
        assert_eq!(
            WordSum::one().stuffle(&WordSum::word(vec![3])),
            WordSum::word(vec![3])
        );
    }

    #[test]
    fn homomorphism_examples() {
        assert!(homomorphism_check(&[-2], &[-3, 2], 10, Mode::Exact).unwrap());
        assert!(homomorphism_check(&[1], &[1], 1, Mode::Exact).unwrap());
        assert!(homomorphism_check(&[-1, 2], &[1, -1], 12, Mode::Residue { p: 13, k: 2 }).unwrap());
    }

    fn delannoy(a: usize, b: usize) -> BigInt {
        (0..=a.min(b))
            .map(|j| {
                (binomial(BigInt::from(a), BigInt::from(j))
                    * binomial(BigInt::from(b), BigInt::from(j)))
                    << j
            })
            .sum()
    }

    #[test]
    fn term_count_is_delannoy() {
        for d1 in 0..=3 {
            for d2 in 0..=3 {
                let w1: Vec<i64> = (1..=d1 as i64).collect();
                let w2: Vec<i64> = (1..=d2 as i64).map(|x| -(x + 10)).collect();
                let mass = stuffle_product(&w1, &w2).mass();
                assert_eq!(
                    mass,
                    Rational::from_integer(delannoy(d1, d2)),
                    "{d1} x {d2}"
                );
            }
        }
    }

    fn word(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec((1i64..=2, any::<bool>()), 0..=max_len).prop_map(|v| {
            v.into_iter()
                .map(|(m, neg)| if neg { -m } else { m })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn commutative(a in word(3), b in word(3)) {
            prop_assert_eq!(stuffle_product(&a, &b), stuffle_product(&b, &a));
        }

        #[test]
        fn associative(a in word(2), b in word(2), c in word(2)) {
            let left = stuffle_product(&a, &b).stuffle(&WordSum::word(c.clone()));
            let right = WordSum::word(a.clone()).stuffle(&stuffle_product(&b, &c));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn homomorphism_exact(a in word(3), b in word(3), n in 0u64..9) {
            prop_assert!(homomorphism_check(&a, &b, n, Mode::Exact).unwrap());
        }
    }
}
