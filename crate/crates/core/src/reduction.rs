//! Depth-lowering congruences for `H(±a, s; p-1) mod p`.
//!
//! Both reducers fuse the head into the first tail part and return the residue
//! of the resulting weighted sum of depth-`ℓ(s)` sums. Merged exponents may
//! exceed `p - 1`; they are evaluated as genuine sums.

use num_bigint::BigInt;
use num_integer::binomial;

use crate::composition::{oplus, Composition};
use crate::error::{Error, Result};
use crate::evaluator::{SumEvaluator, SumFamily};
use crate::residue::{int, is_prime, pow2, reduce_mod, Rational, Residue};
use crate::specialnum::{bernoulli_residues, BernoulliCache};

/// One `(coefficient, composition)` term of a reduction, with all coefficients
/// already known to be p-integral.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTermSum {
    pub p: u64,
    pub terms: Vec<(Residue, Composition)>,
}

impl ReductionTermSum {
    pub fn evaluate(&self, ev: &SumEvaluator) -> Result<Residue> {
        let mut acc = Residue::zero(self.p, 1)?;
        for (c, comp) in &self.terms {
            acc += *c * ev.eval(SumFamily::H, comp, self.p - 1)?;
        }
        Ok(acc)
    }
}

fn with_head(head: i64, tail: &Composition) -> Composition {
    let mut parts = vec![head];
    parts.extend_from_slice(&tail.parts()[1..]);
    Composition::new(parts).expect("merged head is nonzero")
}

fn check_args(a: u64, p: u64) -> Result<()> {
    if !is_prime(p) || p < 3 {
        return Err(Error::NotOddPrime(p));
    }
    if a == 0 || p < a + 2 {
        return Err(Error::InvalidArgument(format!(
            "need a >= 1 and p >= a + 2 (a = {a}, p = {p})"
        )));
    }
    Ok(())
}

/// Terms of `H(a, s) ≡ -(1/a) H((a-1)⊕s_1, s') + sum_{k=1}^{p-1-a} C(p-a,k) B_k/(p-a) H((k+a-1)⊕s_1, s')`.
pub fn positive_head_terms(a: u64, tail: &Composition, p: u64) -> Result<ReductionTermSum> {
    check_args(a, p)?;
    let s1 = tail.parts()[0];
    let bern = bernoulli_residues(p, 1, (p - 1 - a) as usize)?;
    let mut terms = vec![(
        reduce_mod(&-Rational::new(1.into(), (a as i64).into()), p, 1)?,
        with_head(oplus(a as i64 - 1, s1), tail),
    )];
    let inv_pa = Residue::new((p - a) as i64, p, 1)?
        .inv()
        .expect("p - a < p");
    for k in 1..=p - 1 - a {
        if k > 1 && k % 2 == 1 {
            continue;
        }
        let bk = bern[k as usize].ok_or_else(|| Error::NotPIntegral {
            value: format!("B_{k}"),
            p,
        })?;
        let binom = reduce_mod(
            &Rational::from_integer(binomial(BigInt::from(p - a), BigInt::from(k))),
            p,
            1,
        )?;
        terms.push((
            binom * bk * inv_pa,
            with_head(oplus((k + a - 1) as i64, s1), tail),
        ));
    }
    Ok(ReductionTermSum { p, terms })
}

/// Terms of
/// `H(-a, s) ≡ (1-2^{p-a}) B_{p-a}/(p-a) (H(s) - H(-s_1, s')) - sum_{k=0}^{p-2-a} C(p-1-a,k) E_k(0)/2 H((k+a)⊕(-s_1), s')`.
pub fn negative_head_terms(a: u64, tail: &Composition, p: u64) -> Result<ReductionTermSum> {
    check_args(a, p)?;
    let s1 = tail.parts()[0];
    let table = BernoulliCache::global().table((p - a) as usize);
    // exact product: for a = 1 the Bernoulli factor alone is not p-integral
    let lead = (int(1) - pow2((p - a) as i64)) * &table[(p - a) as usize] / int((p - a) as i64);
    let lead = reduce_mod(&lead, p, 1)?;
    let mut terms = vec![(lead, tail.clone()), (-lead, with_head(-s1, tail))];
    for k in 0..=p - 2 - a {
        // E_k(0)/2 = (1 - 2^{k+1}) B_{k+1} / (k+1); zero when k+1 is odd and > 1
        if k + 1 > 1 && (k + 1) % 2 == 1 {
            continue;
        }
        let half_euler = (int(1) - pow2(k as i64 + 1)) * &table[k as usize + 1] / int(k as i64 + 1);
        let binom = Rational::from_integer(binomial(BigInt::from(p - 1 - a), BigInt::from(k)));
        let coeff = reduce_mod(&-(binom * half_euler), p, 1)?;
        terms.push((coeff, with_head(oplus((k + a) as i64, -s1), tail)));
    }
    Ok(ReductionTermSum { p, terms })
}

pub fn reduce_positive_head(a: u64, tail: &Composition, p: u64) -> Result<Residue> {
    let terms = positive_head_terms(a, tail, p)?;
    terms.evaluate(&SumEvaluator::new(p, 1, p - 1)?)
}

pub fn reduce_negative_head(a: u64, tail: &Composition, p: u64) -> Result<Residue> {
    let terms = negative_head_terms(a, tail, p)?;
    terms.evaluate(&SumEvaluator::new(p, 1, p - 1)?)
}
