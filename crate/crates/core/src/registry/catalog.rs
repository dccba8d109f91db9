//! The check catalog. Families are numbered `C01`..`C34`; ids are
//! `family.params[.variant]`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CongruenceCheck, Ctx, Expect};
use crate::binomial_sums::{
    binomial_power_sum_mod, binomial_vs_harmonic, power_sum_difference_mod, shifted_power_sum_mod,
    signed_binomial_sum_mod, truncated_binomial_sum_mod,
};
use crate::composition::{c_lambda, odd_partitions, oplus, signed_compositions, Composition};
use crate::error::Result;
use crate::residue::{rat, Residue};
use crate::stuffle::{stuffle_product, WordSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogConfig {
    /// Largest weight used when enumerating parameterized families.
    pub weight_cap: u64,
    /// Seed for the randomized families.
    pub seed: u64,
    /// Number of random draws per randomized family.
    pub random_cases: usize,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        CatalogConfig {
            weight_cap: 6,
            seed: 0,
            random_cases: 24,
        }
    }
}

type R = Result<Residue>;
/// `num / den` as a pair of small integers.
type Frac = (i64, i64);

macro_rules! fixed {
    ($out:expr, $id:expr, $min:expr, $pow:expr, |$c:ident| $lhs:expr, $rhs:expr) => {
        $out.push(CongruenceCheck::pair(
            $id,
            vec![],
            $min,
            $pow,
            move |$c: &Ctx| -> R { Ok($lhs) },
            move |$c: &Ctx| -> R { Ok($rhs) },
        ))
    };
}

fn rep(s: i64, n: usize) -> Vec<i64> {
    vec![s; n]
}

fn cat(parts: &[&[i64]]) -> Vec<i64> {
    parts.concat()
}

fn word(w: &[i64]) -> String {
    w.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn sgn(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn catalog(cfg: CatalogConfig) -> Vec<CongruenceCheck> {
    let mut out = Vec::new();
    let w = cfg.weight_cap.max(1);
    harmonic_families(&mut out, w);
    depth_two(&mut out, w);
    depth_three(&mut out, w);
    arbitrary_depth(&mut out, w);
    weight_four(&mut out);
    high_power(&mut out, w);
    randomized(&mut out, cfg);
    out
}

fn harmonic_families(out: &mut Vec<CongruenceCheck>, w: u64) {
    // C01: full-range H(k) modulo p^3
    for k in 1..=w as i64 {
        out.push(CongruenceCheck::pair(
            format!("C01.k{k}"),
            vec![k],
            // p = k + 3 is a counterexample for even k (off by 2p^2)
            k as u64 + 3 + (k % 2 == 0) as u64,
            3,
            move |c| c.h(&[k]),
            move |c| {
                let p = c.p() as i64;
                if k % 2 == 1 {
                    Ok(c.c(k * (k + 1))
                        * c.pp(2)
                        * c.b_over((p - 2 - k) as u64, 2 * (p - 2 - k))?)
                } else {
                    Ok(c.c(-2 * k) * c.x(k as u64 + 1)? * c.pp(1))
                }
            },
        ));
    }
    // C02: half-range H(k; (p-1)/2)
    for k in 1..=w as i64 {
        let power = if k > 1 && k % 2 == 1 { 2 } else { 3 };
        out.push(CongruenceCheck::pair(
            format!("C02.k{k}"),
            vec![k],
            k as u64 + 4,
            power,
            move |c| c.h_half(&[k]),
            move |c| {
                if k == 1 {
                    let q = c.q()?;
                    Ok(c.c(-2) * q + c.pp(1) * q * q
                        - c.frac(2, 3)? * c.pp(2) * q.pow(3)
                        - c.frac(7, 12)? * c.pp(2) * c.bp3()?)
                } else if k % 2 == 1 {
                    Ok(c.c(2 * ((1 << k) - 2)) * c.x(k as u64)?)
                } else {
                    Ok(c.c(-k * ((1 << (k + 1)) - 1)) * c.x(k as u64 + 1)? * c.pp(1))
                }
            },
        ));
    }
    // C03: H(-a)
    for a in 1..=w as i64 {
        out.push(CongruenceCheck::pair(
            format!("C03.a{a}"),
            vec![a],
            a as u64 + 2,
            if a % 2 == 1 { 1 } else { 2 },
            move |c| c.h(&[-a]),
            move |c| {
                let p = c.p();
                if a % 2 == 1 {
                    Ok(c.c(-2) * c.ompb_over(p - a as u64, a)?)
                } else {
                    Ok(c.c(a) * c.pp(1) * c.ompb_over(p - 1 - a as u64, a + 1)?)
                }
            },
        ));
    }
}

fn pairs(w: u64) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for a in 1..w as i64 {
        for b in 1..=w as i64 - a {
            v.push((a, b));
        }
    }
    v
}

fn triples(w: u64) -> Vec<(i64, i64, i64)> {
    let mut v = Vec::new();
    for (a, b) in pairs(w) {
        for c in 1..=w as i64 - a - b {
            v.push((a, b, c));
        }
    }
    v
}

fn depth_two(out: &mut Vec<CongruenceCheck>, w: u64) {
    for (a, b) in pairs(w) {
        let wt = a + b;
        let min_p = wt as u64 + 2;
        let tag = format!("a{a}.b{b}");
        let params = vec![a, b];
        let mut add = |variant: &str,
                       lhs: Box<dyn Fn(&Ctx) -> R + Send + Sync>,
                       rhs: Box<dyn Fn(&Ctx) -> R + Send + Sync>| {
            out.push(CongruenceCheck::pair(
                format!("C04.{tag}.{variant}"),
                params.clone(),
                min_p,
                1,
                lhs,
                rhs,
            ));
        };
        if wt % 2 == 1 {
            let choose = move |c: &Ctx| c.binom(wt as u64, a as u64);
            let base = move |c: &Ctx| -> R {
                Ok(c.c(sgn(b)) * choose(c) * c.b_over(c.p() - wt as u64, wt)?)
            };
            add("H", Box::new(move |c| c.h(&[a, b])), Box::new(base));
            add("S", Box::new(move |c| c.s(&[a, b])), Box::new(base));
            let nn = move |c: &Ctx| -> R {
                Ok(-c.ompb_over(c.p() - wt as u64, wt)? * c.c(sgn(b)) * choose(c))
            };
            add("Hnn", Box::new(move |c| c.h(&[-a, -b])), Box::new(nn));
            // S(-a,-b) = H(-a,-b) + H(a+b) and H(a+b) vanishes mod p here
            add("Snn", Box::new(move |c| c.s(&[-a, -b])), Box::new(nn));
            let mixed = move |c: &Ctx| c.ompb_over(c.p() - wt as u64, wt);
            add("Hnp", Box::new(move |c| c.h(&[-a, b])), Box::new(mixed));
            add("Hpn", Box::new(move |c| c.h(&[a, -b])), Box::new(mixed));
            add(
                "Snp",
                Box::new(move |c| c.s(&[-a, b])),
                Box::new(move |c| Ok(-mixed(c)?)),
            );
            add(
                "Spn",
                Box::new(move |c| c.s(&[a, -b])),
                Box::new(move |c| Ok(-mixed(c)?)),
            );
        } else {
            add(
                "H",
                Box::new(move |c| c.h(&[a, b])),
                Box::new(|c| Ok(c.zero())),
            );
            add(
                "S",
                Box::new(move |c| c.s(&[a, b])),
                Box::new(|c| Ok(c.zero())),
            );
            let nn = move |c: &Ctx| -> R {
                let p = c.p();
                Ok(c.c(2) * c.ompb_over(p - a as u64, a)? * c.ompb_over(p - b as u64, b)?)
            };
            add("Hnn", Box::new(move |c| c.h(&[-a, -b])), Box::new(nn));
            add("Snn", Box::new(move |c| c.s(&[-a, -b])), Box::new(nn));
        }
    }
    for (a, b) in pairs(w).into_iter().filter(|(a, b)| (a + b) % 2 == 0) {
        let wt = a + b;
        let min_p = wt as u64 + 2;
        // C05: positive head, negative tail
        let rhs5 = move |c: &Ctx| -> R {
            let p = c.p() as i64;
            let mut acc = c.zero();
            let inv = c.inv(p - a)?;
            for k in 0..p - a {
                let n = 2 * p - wt - k;
                if (k > 1 && k % 2 == 1) || (n > 1 && n % 2 == 1) {
                    continue;
                }
                acc += c.binom((p - a) as u64, k as u64)
                    * c.b(k as u64)?
                    * c.ompb_over(n as u64, n)?;
            }
            Ok(c.c(2) * inv * acc)
        };
        type Side = Box<dyn Fn(&Ctx) -> R + Send + Sync>;
        let lhs5: [(&str, Side); 4] = [
            ("H", Box::new(move |c| c.h(&[a, -b]))),
            ("S", Box::new(move |c| c.s(&[a, -b]))),
            ("Hrev", Box::new(move |c| Ok(-c.h(&[-b, a])?))),
            ("Srev", Box::new(move |c| Ok(-c.s(&[-b, a])?))),
        ];
        for (variant, lhs) in lhs5 {
            out.push(CongruenceCheck::pair(
                format!("C05.a{a}.b{b}.{variant}"),
                vec![a, b],
                min_p,
                1,
                lhs,
                rhs5,
            ));
        }
        // C06: negative head, positive tail
        let rhs6 = move |c: &Ctx| -> R {
            let p = c.p() as i64;
            let mut acc = c.zero();
            for k in 1..=p - 2 - wt {
                acc += c.binom((p - 1 - a) as u64, k as u64)
                    * c.ompb_over((k + 1) as u64, k + 1)?
                    * c.ompb_over((p - wt - k) as u64, wt + k)?;
            }
            for k in p - 1 - wt..=p - 1 - a {
                acc += c.binom((p - 1 - a) as u64, k as u64)
                    * c.ompb_over((k + 1) as u64, k + 1)?
                    * c.ompb_over((2 * p - 1 - wt - k) as u64, 1 + wt + k)?;
            }
            Ok(c.c(2) * acc)
        };
        let lhs6: [(&str, Side); 4] = [
            ("H", Box::new(move |c| c.h(&[-a, b]))),
            ("S", Box::new(move |c| c.s(&[-a, b]))),
            ("Hrev", Box::new(move |c| Ok(-c.h(&[b, -a])?))),
            ("Srev", Box::new(move |c| Ok(-c.s(&[b, -a])?))),
        ];
        for (variant, lhs) in lhs6 {
            out.push(CongruenceCheck::pair(
                format!("C06.a{a}.b{b}.{variant}"),
                vec![a, b],
                min_p,
                1,
                lhs,
                rhs6,
            ));
        }
    }
}

/// Right-hand side of the even-weight depth-three congruence for `H(a,-b,-c)`.
fn depth_three_even_rhs(c: &Ctx, a: i64, b: i64, cc: i64) -> R {
    let p = c.p() as i64;
    let wt = a + b + cc;
    let mut s1 = c.zero();
    for k in 2..=p - wt + 1 {
        if k % 2 == 1 {
            continue;
        }
        s1 += c.binom((p - a) as u64, (p - wt - k + 1) as u64)
            * c.binom((k + cc - 1) as u64, cc as u64)
            * c.ompb_over(k as u64, a * k)?
            * c.b((p - wt - k + 1) as u64)?;
    }
    let mut s2 = c.zero();
    for k in p + 1 - b - cc..=p - cc {
        if k > 1 && k % 2 == 1 {
            continue;
        }
        s2 += c.binom((p - a) as u64, (2 * p - wt - k) as u64)
            * c.binom((k + cc - 1) as u64, cc as u64)
            * c.ompb_over(k as u64, a * k)?
            * c.b((2 * p - wt - k) as u64)?;
    }
    let last = c.ompb_over((p - cc) as u64, cc)? * c.ompb_over((p - a - b) as u64, a + b)?;
    Ok(-s1 - s2 - last)
}

fn depth_three(out: &mut Vec<CongruenceCheck>, w: u64) {
    for (a, b, cc) in triples(w) {
        let wt = a + b + cc;
        let min_p = wt as u64 + 1;
        let tag = format!("a{a}.b{b}.c{cc}");
        let params = vec![a, b, cc];
        let mut add = |variant: &str,
                       lhs: Box<dyn Fn(&Ctx) -> R + Send + Sync>,
                       rhs: Box<dyn Fn(&Ctx) -> R + Send + Sync>| {
            out.push(CongruenceCheck::pair(
                format!("C07.{tag}.{variant}"),
                params.clone(),
                min_p,
                1,
                lhs,
                rhs,
            ));
        };
        if wt % 2 == 0 {
            add(
                "pnp",
                Box::new(move |c| Ok(c.c(2) * c.h(&[a, -b, cc])?)),
                Box::new(move |c| Ok(c.h(&[-(cc + b), a])? + c.h(&[cc, -(b + a)])?)),
            );
            add(
                "ppn",
                Box::new(move |c| Ok(c.c(2) * c.h(&[a, b, -cc])?)),
                Box::new(move |c| {
                    Ok(-c.h(&[-cc])? * c.h(&[b, a])?
                        + c.h(&[-(cc + b), a])?
                        + c.h(&[-cc, b + a])?)
                }),
            );
            add(
                "nnn",
                Box::new(move |c| Ok(c.c(2) * c.h(&[-a, -b, -cc])?)),
                Box::new(move |c| {
                    Ok(
                        -c.h(&[-cc])? * c.h(&[-b, -a])? - c.h(&[-cc, -b])? * c.h(&[-a])?
                            + c.h(&[cc + b, -a])?
                            + c.h(&[-cc, a + b])?,
                    )
                }),
            );
        } else {
            add(
                "pnn",
                Box::new(move |c| Ok(c.c(2) * c.h(&[a, -b, -cc])?)),
                Box::new(move |c| {
                    Ok(c.h(&[cc + b, a])? + c.h(&[-cc, -(b + a)])?
                        - c.h(&[-cc])? * c.h(&[-b, a])?)
                }),
            );
            add(
                "npn",
                Box::new(move |c| Ok(c.c(2) * c.h(&[-a, b, -cc])?)),
                Box::new(move |c| {
                    Ok(
                        -c.h(&[-cc])? * c.h(&[b, -a])? - c.h(&[-cc, b])? * c.h(&[-a])?
                            + c.h(&[-(cc + b), -a])?
                            + c.h(&[-cc, -(b + a)])?,
                    )
                }),
            );
        }
        // the depth-three stuffle identity, for every sign pattern
        for signs in 0..8 {
            let f = |i: usize, x: i64| if signs >> i & 1 == 1 { -x } else { x };
            let (al, be, ga) = (f(0, a), f(1, b), f(2, cc));
            let ws = |v: &[i64]| WordSum::word(v.to_vec());
            let expansion = stuffle_product(&[al], &[be])
                .stuffle(&ws(&[ga]))
                .sub(&stuffle_product(&[ga], &[be, al]))
                .sub(&stuffle_product(&[ga], &[oplus(be, al)]))
                .sub(&stuffle_product(&[ga, be], &[al]))
                .sub(&stuffle_product(&[oplus(ga, be)], &[al]))
                .add(&ws(&[ga, be, al]))
                .add(&ws(&[oplus(ga, be), al]))
                .add(&ws(&[ga, oplus(be, al)]))
                .add(&ws(&[oplus(oplus(ga, be), al)]));
            out.push(CongruenceCheck::pair(
                format!("C07.stuffle.{}", word(&[al, be, ga])),
                vec![al, be, ga],
                wt as u64 + 1,
                1,
                move |c| c.h(&[al, be, ga]),
                move |c| expansion.eval_with(c.p(), c.k(), &mut |v| c.h(v)),
            ));
        }
    }
    // C08: even-weight H(a,-b,-c) closed form
    for (a, b, cc) in triples(w)
        .into_iter()
        .filter(|(a, b, c)| (a + b + c) % 2 == 0)
    {
        out.push(CongruenceCheck::pair(
            format!("C08.a{a}.b{b}.c{cc}"),
            vec![a, b, cc],
            (a + b + cc) as u64 + 3,
            1,
            move |c| c.h(&[a, -b, -cc]),
            move |c| depth_three_even_rhs(c, a, b, cc),
        ));
    }
    out.push(
        CongruenceCheck::pair(
            "C08.known-fail.p7",
            vec![1, 2, 3],
            7,
            1,
            |c| c.h(&[1, -2, -3]),
            |c| depth_three_even_rhs(c, 1, 2, 3),
        )
        .only_at(7)
        .expect(Expect::KnownFail { p: 7, delta: 5 }),
    );
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Coefficients of `H^{(a)}_{d,k}(x)` (strict) or `S^{(a)}_{d,k}(x)` (weak), optionally
/// with the `(-1)^{sum i_j}` twist, as a vector indexed by the exponent `0..p`.
fn marked_sum_coefficients(
    c: &Ctx,
    a: u64,
    d: usize,
    k: usize,
    weak: bool,
    signed: bool,
) -> Vec<u64> {
    let ring = c.ring();
    let n = c.p() as usize;
    let inv = c.evaluator().inverse_powers(a);
    let wt: Vec<u64> = (0..n)
        .map(|i| {
            if i == 0 {
                0
            } else if signed && i % 2 == 1 {
                ring.neg(inv[i])
            } else {
                inv[i]
            }
        })
        .collect();
    let one = 1 % ring.get();
    // pre[j][i]: j indices in 1..=i; suf[j][m]: j indices in m..n
    let mut pre = vec![vec![0u64; n]; d + 1];
    pre[0] = vec![one; n];
    for i in 1..n {
        for j in 1..=d {
            let from = if weak {
                pre[j - 1][i]
            } else {
                pre[j - 1][i - 1]
            };
            pre[j][i] = ring.add(pre[j][i - 1], ring.mul(from, wt[i]));
        }
    }
    let mut suf = vec![vec![0u64; n + 1]; d + 1];
    suf[0] = vec![one; n + 1];
    for m in (1..n).rev() {
        for j in 1..=d {
            let from = if weak {
                suf[j - 1][m]
            } else {
                suf[j - 1][m + 1]
            };
            suf[j][m] = ring.add(suf[j][m + 1], ring.mul(from, wt[m]));
        }
    }
    let mut coeffs = vec![0u64; n];
    for i in 1..n {
        let (left, right) = if weak {
            (pre[k - 1][i], suf[d - k][i])
        } else {
            (pre[k - 1][i - 1], suf[d - k][i + 1])
        };
        coeffs[i] = ring.mul(wt[i], ring.mul(left, right));
    }
    coeffs
}

/// Compares `H_{d,k}(x)` with `-(-1)^d S_{d,d+1-k}(x)` coefficientwise in `F_p[x]`.
fn polynomial_identity(
    c: &Ctx,
    a: u64,
    d: usize,
    k: usize,
    signed: bool,
) -> Result<(Residue, Residue)> {
    let ring = c.ring();
    let lhs = marked_sum_coefficients(c, a, d, k, false, signed);
    let mut rhs = marked_sum_coefficients(c, a, d, d + 1 - k, true, signed);
    if d.is_multiple_of(2) {
        rhs.iter_mut().for_each(|x| *x = ring.neg(*x));
    }
    if let Some(i) = (0..lhs.len()).find(|&i| lhs[i] != rhs[i]) {
        return Ok((c.raw(lhs[i]), c.raw(rhs[i])));
    }
    // equal polynomials: report the common value at x = -1
    let at_minus_one = lhs.iter().enumerate().fold(0, |acc, (i, &v)| {
        if i % 2 == 0 {
            ring.add(acc, v)
        } else {
            ring.sub(acc, v)
        }
    });
    Ok((c.raw(at_minus_one), c.raw(at_minus_one)))
}

fn arbitrary_depth(out: &mut Vec<CongruenceCheck>, w: u64) {
    // C09: homogeneous sums through odd partitions
    for a in 1..=w as i64 {
        for l in 2..=(w as i64 / a) as usize {
            let min_p = a as u64 * l as u64 + 2;
            let parts: Vec<(i64, Vec<i64>)> = odd_partitions(l as u64)
                .into_iter()
                .map(|lam| {
                    (
                        c_lambda(&lam) as i64,
                        lam.parts().iter().map(|&x| -(x as i64) * a).collect(),
                    )
                })
                .collect();
            out.push(CongruenceCheck::pair(
                format!("C09.cgl.a{a}.l{l}"),
                vec![a, l as i64],
                min_p,
                1,
                move |c| Ok(c.c(factorial(l)) * c.h(&rep(-a, l))?),
                move |c| {
                    let mut acc = c.zero();
                    for (coef, lam) in &parts {
                        let mut prod = c.c(*coef);
                        for &x in lam {
                            prod *= c.h(&[x])?;
                        }
                        acc += prod;
                    }
                    Ok(acc)
                },
            ));
            if a % 2 == 0 {
                out.push(CongruenceCheck::pair(
                    format!("C09.even.a{a}.l{l}"),
                    vec![a, l as i64],
                    min_p,
                    1,
                    move |c| c.h(&rep(-a, l)),
                    |c| Ok(c.zero()),
                ));
            }
        }
    }
    for l in 2..=w.min(6) as usize {
        out.push(CongruenceCheck::pair(
            format!("C09.minus-ones.l{l}"),
            vec![l as i64],
            (l as u64 + 2).max(7),
            1,
            move |c| c.h(&rep(-1, l)),
            move |c| {
                let (q, b) = (c.q()?, c.bp3()?);
                Ok(match l {
                    2 => c.c(2) * q * q,
                    3 => c.frac(-4, 3)? * q.pow(3) - c.frac(1, 6)? * b,
                    4 => c.frac(2, 3)? * q.pow(4) + c.frac(1, 3)? * q * b,
                    // the cycle types (5) and (1,5) contribute H(-5) ≡ -3/8 B_{p-5}
                    5 => {
                        c.frac(-4, 15)? * q.pow(5)
                            - c.frac(1, 3)? * q * q * b
                            - c.frac(3, 40)? * c.b(c.p() - 5)?
                    }
                    _ => {
                        c.frac(4, 45)? * q.pow(6)
                            + c.frac(2, 9)? * q.pow(3) * b
                            + c.frac(1, 72)? * b * b
                            + c.frac(3, 20)? * q * c.b(c.p() - 5)?
                    }
                })
            },
        ));
    }
    fixed!(out, "C09.h-1.p3", 7, 3, |c| c.h(&[-1])?, {
        let (q, b) = (c.q()?, c.bp3()?);
        c.c(-2) * q + c.pp(1) * q * q
            - c.frac(2, 3)? * c.pp(2) * q.pow(3)
            - c.frac(1, 4)? * c.pp(2) * b
    });
    fixed!(
        out,
        "C09.h-1.split",
        7,
        4,
        |c| c.h(&[-1])?,
        -c.h(&[1])? + c.h_half(&[1])?
    );

    // C10: palindromes whose weight and negative count differ in parity
    for s in signed_compositions(w) {
        let comp = Composition::from_slice(&s);
        if !comp.is_palindromic()
            || (comp.weight() as usize + comp.negative_count()).is_multiple_of(2)
        {
            continue;
        }
        let min_p = comp.weight() + 2;
        let (s1, s2) = (s.clone(), s.clone());
        out.push(CongruenceCheck::pair(
            format!("C10.H.{}", word(&s)),
            s.clone(),
            min_p,
            1,
            move |c| c.h(&s1),
            |c| Ok(c.zero()),
        ));
        out.push(CongruenceCheck::pair(
            format!("C10.S.{}", word(&s)),
            s.clone(),
            min_p,
            1,
            move |c| c.s(&s2),
            |c| Ok(c.zero()),
        ));
    }

    // C11: H(-1, {1}^n) and relatives against U(-n-1)
    for n in 0..w as usize {
        let min_p = n as u64 + 3;
        let head = cat(&[&[-1], &rep(1, n)]);
        let tail = cat(&[&rep(1, n), &[-1]]);
        let sign = sgn(n as i64);
        let target = move |c: &Ctx| c.u(&[-(n as i64) - 1]);
        type Side = Box<dyn Fn(&Ctx) -> R + Send + Sync>;
        let (h1, h2, h3, h4) = (head.clone(), head, tail.clone(), tail);
        let sides: [(&str, Side); 5] = [
            ("H", Box::new(move |c| c.h(&h1))),
            ("S", Box::new(move |c| c.s(&h2))),
            ("Hrev", Box::new(move |c| Ok(c.c(sign) * c.h(&h3)?))),
            ("Srev", Box::new(move |c| Ok(c.c(sign) * c.s(&h4)?))),
            (
                "V",
                Box::new(move |c| Ok(c.c(-2 * sign) * c.v(&[-(n as i64) - 1])?)),
            ),
        ];
        for (variant, lhs) in sides {
            out.push(CongruenceCheck::pair(
                format!("C11.n{n}.{variant}"),
                vec![n as i64],
                min_p,
                1,
                lhs,
                target,
            ));
        }
    }

    // C12 and C14: one odd-one-out part in a homogeneous word
    for a in 1..=w as i64 {
        for m in 0..=(w as i64 / a - 1) as usize {
            for n in 0..=(w as i64 / a - 1) as usize - m {
                let min_p = (a * (m + n) as i64) as u64 + 3;
                let word_mn = cat(&[&rep(a, m), &[-a], &rep(a, n)]);
                let word_nm = cat(&[&rep(a, n), &[-a], &rep(a, m)]);
                let tag = format!("a{a}.m{m}.n{n}");
                let params = vec![a, m as i64, n as i64];
                let (x1, y1) = (word_mn.clone(), word_nm.clone());
                out.push(CongruenceCheck::pair(
                    format!("C12.{tag}.rev"),
                    params.clone(),
                    min_p,
                    1,
                    move |c| c.h(&x1),
                    move |c| Ok(c.c(sgn((m + n) as i64)) * c.s(&y1)?),
                ));
                let (x2, y2) = (word_mn.clone(), word_mn);
                out.push(CongruenceCheck::pair(
                    format!("C12.{tag}.same"),
                    params.clone(),
                    min_p,
                    1,
                    move |c| c.h(&x2),
                    move |c| Ok(c.c(sgn((m + n + 1) as i64 * (a + 1))) * c.s(&y2)?),
                ));
                if a % 2 == 0 {
                    let nmn = cat(&[&rep(-a, m), &[a], &rep(-a, n)]);
                    let nnm = cat(&[&rep(-a, n), &[a], &rep(-a, m)]);
                    let (x3, y3, x4) = (nmn.clone(), nmn.clone(), nmn);
                    out.push(CongruenceCheck::pair(
                        format!("C14.{tag}.same"),
                        params.clone(),
                        min_p,
                        1,
                        move |c| c.h(&x3),
                        move |c| c.s(&y3),
                    ));
                    out.push(CongruenceCheck::pair(
                        format!("C14.{tag}.rev"),
                        params,
                        min_p,
                        1,
                        move |c| c.h(&x4),
                        move |c| Ok(c.c(sgn((m + n) as i64)) * c.s(&nnm)?),
                    ));
                }
            }
        }
    }

    // C13: marked-index polynomial identities in F_p[x]
    for a in 1..=w {
        for d in 1..=(w / a) as usize {
            for k in 1..=d {
                let min_p = d as u64 * a + 3;
                let params = vec![a as i64, d as i64, k as i64];
                out.push(CongruenceCheck::joint(
                    format!("C13.plain.a{a}.d{d}.k{k}"),
                    params.clone(),
                    min_p,
                    1,
                    move |c| polynomial_identity(c, a, d, k, false),
                ));
                if a % 2 == 0 {
                    out.push(CongruenceCheck::joint(
                        format!("C13.signed.a{a}.d{d}.k{k}"),
                        params,
                        min_p,
                        1,
                        move |c| polynomial_identity(c, a, d, k, true),
                    ));
                }
            }
        }
    }
}

fn weight_four(out: &mut Vec<CongruenceCheck>) {
    // C15: relations among the convolution constants
    fixed!(out, "C15.A", 7, 1, |c| c.consts()?.a, -c.bp3()?);
    fixed!(out, "C15.G", 7, 1, |c| c.consts()?.g, c.zero());
    fixed!(out, "C15.C", 7, 1, |c| c.consts()?.c, {
        let k = c.consts()?;
        k.b - c.frac(3, 4)? * k.a
    });
    fixed!(out, "C15.K", 7, 1, |c| c.consts()?.k, {
        let k = c.consts()?;
        c.c(-3) * k.b - k.j + c.c(3) * k.a
    });

    // C16: depth two, weight four
    fixed!(
        out,
        "C16.h1-3.half",
        7,
        1,
        |c| c.h(&[1, -3])?,
        c.frac(1, 2)? * c.h(&[-2, 2])?
    );
    fixed!(out, "C16.h1-3.BA", 7, 1, |c| c.h(&[1, -3])?, {
        let k = c.consts()?;
        k.b - k.a
    });
    fixed!(out, "C16.h1-3.sum", 7, 1, |c| c.h(&[1, -3])?, {
        let p = c.p();
        let mut acc = c.zero();
        for k in 0..=p - 3 {
            if k > 1 && k % 2 == 1 {
                continue;
            }
            acc += c.two(k as i64) * c.b(k)? * c.b(p - 3 - k)?;
        }
        acc
    });
    fixed!(
        out,
        "C16.h-13",
        7,
        1,
        |c| c.h(&[-1, 3])?,
        c.frac(-1, 2)? * c.q()? * c.bp3()?
    );
    fixed!(out, "C16.h-31.first", 7, 1, |c| c.c(3) * c.h(&[-3, 1])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        c.c(3) * k.a - c.c(3) * k.b + c.frac(5, 2)? * k.d
            - c.c(2) * k.e
            - c.c(2) * k.f
            - c.frac(3, 2)? * qb
    });
    fixed!(out, "C16.h-22.first", 7, 1, |c| c.h(&[-2, 2])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        c.c(2) * k.b - c.c(2) * k.a - c.frac(5, 2)? * k.d
            + c.c(2) * k.e
            + c.c(2) * k.f
            + c.frac(3, 2)? * qb
    });
    fixed!(out, "C16.h-13.first", 7, 1, |c| c.h(&[-1, 3])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        c.frac(5, 2)? * k.d - c.c(2) * k.e - c.c(2) * k.f - c.c(2) * qb
    });
    fixed!(out, "C16.h1-3.second", 7, 1, |c| c.h(&[1, -3])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        c.c(2) * k.e - c.c(2) * k.d + c.c(2) * qb
    });
    fixed!(out, "C16.h-31.second", 7, 1, |c| c.h(&[-3, 1])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        c.c(2) * k.d - c.c(2) * k.e - c.c(2) * qb
    });
    fixed!(out, "C16.h-22.second", 7, 1, |c| c.h(&[-2, 2])?, {
        let (k, qb) = (c.consts()?, c.q()? * c.bp3()?);
        k.b - k.a + c.c(2) * k.e - c.c(2) * k.d + c.c(2) * qb
    });
    fixed!(out, "C16.h-13.second", 7, 1, |c| c.h(&[-1, 3])?, {
        let k = c.consts()?;
        c.frac(1, 3)? * (-k.j + c.c(3) * k.a - c.c(3) * k.b + c.c(2) * k.d - c.c(2) * k.e)
    });
    fixed!(
        out,
        "C16.h-31.sum",
        7,
        1,
        |c| c.c(4) * c.h(&[-3, 1])? + c.c(2) * c.h(&[-2, 2])?,
        c.zero()
    );

    // C17: depth three, weight four
    fixed!(
        out,
        "C17.h1-1-2",
        7,
        1,
        |c| c.h(&[1, -1, -2])?,
        c.frac(1, 2)? * (c.h(&[1, -3])? + c.consts()?.j)
    );
    fixed!(
        out,
        "C17.h1-2-1",
        7,
        1,
        |c| c.h(&[1, -2, -1])?,
        c.h(&[1, -3])? - c.frac(5, 4)? * c.q()? * c.bp3()?
    );
    fixed!(out, "C17.h2-1-1", 7, 1, |c| c.h(&[2, -1, -1])?, {
        -c.h(&[1, -3])? - c.frac(1, 2)? * c.consts()?.j + c.frac(3, 4)? * c.q()? * c.bp3()?
    });
    fixed!(
        out,
        "C17.h11-2",
        7,
        1,
        |c| c.c(2) * c.h(&[1, 1, -2])?,
        -c.h(&[-3, 1])?
    );
    fixed!(
        out,
        "C17.h11-2.sum",
        7,
        1,
        |c| c.c(2) * c.h(&[1, 1, -2])?,
        c.h(&[-3, 1])? + c.h(&[-2, 2])?
    );

    // C18: all weight-four values of depth at most three, through H(-2,1,1)
    let hb = |c: &Ctx| c.h(&[-2, 1, 1]);
    fixed!(out, "C18.h-211", 7, 1, |c| hb(c)?, {
        let k = c.consts()?;
        c.frac(1, 2)? * (k.a - k.b)
    });
    for s in [
        &[4][..],
        &[-4],
        &[2, 2],
        &[-2, -2],
        &[1, 3],
        &[1, -2, 1],
        &[-1, -2, -1],
    ] {
        let v = s.to_vec();
        out.push(CongruenceCheck::pair(
            format!("C18.zero.{}", word(s)),
            vec![],
            7,
            1,
            move |c| c.h(&v),
            |c| Ok(c.zero()),
        ));
    }
    // (composition, multiple of H(-2,1,1), multiple of J, multiple of q_p B_{p-3})
    let table: [(&[i64], i64, Frac, Frac); 14] = [
        (&[1, -3], -2, (0, 1), (0, 1)),
        (&[2, -2], 4, (0, 1), (0, 1)),
        (&[1, -1, 2], 3, (0, 1), (0, 1)),
        (&[-1, -3], 0, (0, 1), (1, 2)),
        (&[3, -1], 0, (0, 1), (1, 2)),
        (&[1, -1, -2], -1, (1, 2), (0, 1)),
        (&[-2, -1, -1], 2, (0, 1), (-1, 1)),
        (&[-1, 2, 1], -1, (0, 1), (5, 4)),
        (&[-1, 1, 2], 2, (0, 1), (-3, 4)),
        (&[-2, 1, -1], 3, (-1, 2), (3, 4)),
        (&[1, -2, -1], -2, (0, 1), (-5, 4)),
        (&[-1, 2, -1], -4, (1, 1), (-5, 2)),
        (&[2, -1, -1], 2, (-1, 2), (3, 4)),
        (&[-2, 1, 1], 1, (0, 1), (0, 1)),
    ];
    for (s, hbar, jc, qc) in table {
        if s == [-2, 1, 1] {
            continue;
        }
        let v = s.to_vec();
        out.push(CongruenceCheck::pair(
            format!("C18.{}", word(s)),
            vec![],
            7,
            1,
            move |c| c.h(&v),
            move |c| {
                Ok(c.c(hbar) * hb(c)?
                    + c.frac(jc.0, jc.1)? * c.consts()?.j
                    + c.frac(qc.0, qc.1)? * c.q()? * c.bp3()?)
            },
        ));
    }

    // C19: depth four
    fixed!(out, "C19.h1-1-11", 7, 1, |c| c.h(&[1, -1, -1, 1])?, {
        c.frac(-1, 2)? * (c.h(&[1, -3])? + c.consts()?.j + c.q()?.pow(4))
    });
    let h11 = |c: &Ctx| -> R {
        let q = c.q()?;
        Ok(c.frac(1, 24)? * (c.c(6) * c.consts()?.j + c.c(7) * q * c.bp3()? + c.c(8) * q.pow(4)))
    };
    fixed!(out, "C19.h-1-111", 7, 1, |c| c.h(&[-1, -1, 1, 1])?, h11(c)?);
    fixed!(out, "C19.h11-1-1", 7, 1, |c| c.h(&[1, 1, -1, -1])?, h11(c)?);
    let alt = |c: &Ctx| -> R {
        let q = c.q()?;
        Ok(c.frac(-1, 12)? * (q * c.bp3()? + c.c(2) * q.pow(4)))
    };
    fixed!(out, "C19.h-11-11", 7, 1, |c| c.h(&[-1, 1, -1, 1])?, alt(c)?);
    fixed!(out, "C19.h1-11-1", 7, 1, |c| c.h(&[1, -1, 1, -1])?, alt(c)?);
    fixed!(out, "C19.h-111-1", 7, 1, |c| c.h(&[-1, 1, 1, -1])?, {
        let q = c.q()?;
        c.frac(1, 12)? * (c.c(6) * c.h(&[1, -3])? + c.c(7) * q * c.bp3()? + c.c(2) * q.pow(4))
    });
    fixed!(
        out,
        "C19.aux.h-11",
        7,
        1,
        |c| c.h(&[-1, 1])?,
        -c.q()?.pow(2)
    );
    fixed!(
        out,
        "C19.aux.h-1-11",
        7,
        1,
        |c| c.h(&[-1, -1, 1])?,
        c.q()?.pow(3) + c.frac(7, 8)? * c.bp3()?
    );
    fixed!(out, "C19.aux.h11-1", 7, 1, |c| c.h(&[1, 1, -1])?, {
        c.frac(-1, 3)? * c.q()?.pow(3) - c.frac(7, 24)? * c.bp3()?
    });

    // C20: further depth-four values
    fixed!(out, "C20.h11-11", 7, 1, |c| c.h(&[1, 1, -1, 1])?, {
        c.c(2) * hb(c)? + c.c(3) * c.h(&[-1, 1, 1, 1])? + c.frac(1, 2)? * c.q()? * c.bp3()?
    });
    fixed!(out, "C20.h-1-11-1", 7, 1, |c| c.h(&[-1, -1, 1, -1])?, {
        let q = c.q()?;
        c.c(6) * hb(c)? + c.c(3) * c.h(&[1, -1, -1, -1])?
            - c.c(4) * q * c.bp3()?
            - c.c(2) * q.pow(4)
    });
    fixed!(out, "C20.h-1-1-1-1", 7, 1, |c| c.h(&[-1, -1, -1, -1])?, {
        let q = c.q()?;
        c.frac(1, 3)? * q * c.bp3()? + c.frac(2, 3)? * q.pow(4)
    });

    // C21: reference residues at the two known Wieferich primes
    for (p, vals) in [
        (1093u64, [1023i64, 529, 670, 952]),
        (3511, [1618, 2160, 1620, 540]),
    ] {
        type Side = Box<dyn Fn(&Ctx) -> R + Send + Sync>;
        let sides: [(&str, Side); 4] = [
            ("J", Box::new(|c| Ok(c.consts()?.j))),
            ("h1-3", Box::new(|c| c.h(&[1, -3]))),
            ("h1-1-1-1", Box::new(|c| c.h(&[1, -1, -1, -1]))),
            ("h-1111", Box::new(|c| c.h(&[-1, 1, 1, 1]))),
        ];
        for ((name, lhs), v) in sides.into_iter().zip(vals) {
            out.push(
                CongruenceCheck::pair(format!("C21.p{p}.{name}"), vec![v], p, 1, lhs, move |c| {
                    Ok(c.c(v))
                })
                .only_at(p),
            );
        }
        out.push(
            CongruenceCheck::pair(
                format!("C21.p{p}.q"),
                vec![],
                p,
                1,
                |c| c.q(),
                |c| Ok(c.zero()),
            )
            .only_at(p),
        );
        // the reference sum values are those of the reversed words
        for (name, s, v) in [
            ("h-31", [-3i64, 1].as_slice(), vals[1]),
            ("h-1-1-11", &[-1, -1, -1, 1], vals[2]),
            ("h111-1", &[1, 1, 1, -1], vals[3]),
        ] {
            let s = s.to_vec();
            out.push(
                CongruenceCheck::pair(
                    format!("C21.p{p}.{name}.rev"),
                    vec![v],
                    p,
                    1,
                    move |c| c.h(&s),
                    move |c| Ok(c.c(v)),
                )
                .only_at(p),
            );
        }
    }
}

fn high_power(out: &mut Vec<CongruenceCheck>, w: u64) {
    // C22: U sums
    fixed!(
        out,
        "C22.u-1",
        7,
        3,
        |c| c.u(&[-1])?,
        c.c(-2) * c.q()? - c.frac(7, 12)? * c.pp(2) * c.bp3()?
    );
    fixed!(out, "C22.u-2", 7, 2, |c| c.u(&[-2])?, {
        let q = c.q()?;
        -q * q + c.frac(2, 3)? * c.pp(1) * q.pow(3) + c.frac(7, 6)? * c.pp(1) * c.bp3()?
    });
    fixed!(out, "C22.u-11", 7, 2, |c| c.u(&[-1, 1])?, {
        let q = c.q()?;
        q * q - c.frac(2, 3)? * c.pp(1) * q.pow(3) - c.frac(1, 12)? * c.pp(1) * c.bp3()?
    });
    fixed!(
        out,
        "C22.u1-1",
        7,
        2,
        |c| c.u(&[1, -1])?,
        c.frac(-13, 12)? * c.pp(1) * c.bp3()?
    );
    let mod_p: [(&str, &[i64], Frac, Frac); 8] = [
        ("u-3", &[-3], (-1, 3), (-7, 24)),
        ("u-21", &[-2, 1], (1, 3), (-23, 24)),
        ("u1-2", &[1, -2], (0, 1), (5, 4)),
        ("u2-1", &[2, -1], (0, 1), (-3, 4)),
        ("u-12", &[-1, 2], (1, 3), (25, 24)),
        ("u11-1", &[1, 1, -1], (0, 1), (-1, 2)),
        ("u1-11", &[1, -1, 1], (0, 1), (1, 2)),
        ("u-111", &[-1, 1, 1], (-1, 3), (-7, 24)),
    ];
    for (name, s, qc, bc) in mod_p {
        let v = s.to_vec();
        out.push(CongruenceCheck::pair(
            format!("C22.{name}"),
            vec![],
            7,
            1,
            move |c| c.u(&v),
            move |c| Ok(c.frac(qc.0, qc.1)? * c.q()?.pow(3) + c.frac(bc.0, bc.1)? * c.bp3()?),
        ));
    }
    fixed!(
        out,
        "C22.u-4.a",
        7,
        1,
        |c| c.u(&[-4])?,
        c.h(&[-1, 1, 1, 1])?
    );
    fixed!(
        out,
        "C22.u-4.b",
        7,
        1,
        |c| c.u(&[-4])?,
        -c.h(&[1, 1, 1, -1])?
    );
    fixed!(out, "C22.u1-3", 7, 1, |c| c.u(&[1, -3])?, {
        let k = c.consts()?;
        k.a - k.b + c.frac(5, 4)? * c.q()? * c.bp3()?
    });
    fixed!(out, "C22.u-31", 7, 1, |c| c.u(&[-3, 1])?, {
        let k = c.consts()?;
        c.h(&[1, 1, 1, -1])? + k.b - k.a - c.frac(5, 4)? * c.q()? * c.bp3()?
    });

    // C23: U/V reversal modulo p^2
    for s in signed_compositions(w.min(4)) {
        let wt = s.iter().map(|x| x.unsigned_abs()).sum::<u64>();
        let min_p = (wt + 2).max(7);
        let (s1, s2, t1, t2) = (s.clone(), s.clone(), s.clone(), s.clone());
        out.push(CongruenceCheck::pair(
            format!("C23.u.{}", word(&s)),
            s.clone(),
            min_p,
            2,
            move |c| c.u(&t1),
            move |c| twisted_reversal(c, &s1, true),
        ));
        out.push(CongruenceCheck::pair(
            format!("C23.v.{}", word(&s)),
            s.clone(),
            min_p,
            2,
            move |c| c.v(&t2),
            move |c| twisted_reversal(c, &s2, false),
        ));
    }
    fixed!(out, "C23.v-1.p3", 7, 3, |c| c.v(&[-1])?, {
        -c.two(-(c.p() as i64)) * (c.u(&[-1])? + c.pp(1) * c.u(&[-2])? + c.pp(2) * c.u(&[-3])?)
    });

    // C24: binomial sums at m = p - 1
    for (xname, xv) in [
        ("xneg1", rat(-1, 1)),
        ("x2", rat(2, 1)),
        ("xhalf", rat(1, 2)),
    ] {
        for d in 1..=w.min(4) as usize {
            let [x1, y1, x2, y2, x3, y3] = std::array::from_fn(|_| xv.clone());
            out.push(CongruenceCheck::pair(
                format!("C24.shifted.{xname}.d{d}"),
                vec![d as i64],
                7,
                3,
                move |c| Ok(c.raw(shifted_power_sum_mod(c.ring(), c.p(), d, c.r(&x1)?.value()))),
                move |c| {
                    Ok(c.raw(binomial_power_sum_mod(
                        c.ring(),
                        c.p(),
                        d,
                        c.r(&y1)?.value(),
                    )))
                },
            ));
            out.push(CongruenceCheck::pair(
                format!("C24.truncated.{xname}.d{d}"),
                vec![d as i64],
                7,
                3,
                move |c| Ok(c.raw(shifted_power_sum_mod(c.ring(), c.p(), d, c.r(&x2)?.value()))),
                move |c| {
                    Ok(c.raw(truncated_binomial_sum_mod(
                        c.ring(),
                        c.p(),
                        d,
                        c.r(&y2)?.value(),
                    )))
                },
            ));
            out.push(CongruenceCheck::pair(
                format!("C24.signed.{xname}.d{d}"),
                vec![d as i64],
                7,
                3,
                move |c| {
                    Ok(c.raw(signed_binomial_sum_mod(
                        c.ring(),
                        c.p(),
                        d,
                        c.r(&x3)?.value(),
                    )))
                },
                move |c| {
                    Ok(c.raw(power_sum_difference_mod(
                        c.ring(),
                        c.p(),
                        d,
                        c.r(&y3)?.value(),
                    )))
                },
            ));
        }
    }
    out.push(CongruenceCheck::joint("C24.choose", vec![], 7, 3, |c| {
        let rows = binomial_vs_harmonic(c.ring(), c.p());
        let (a, b) = rows
            .iter()
            .skip(1)
            .find(|(a, b)| a != b)
            .copied()
            .unwrap_or(*rows.last().expect("p > 1"));
        Ok((c.raw(a), c.raw(b)))
    }));

    // C25: depth-two reversal modulo p^2
    for s in signed_compositions(w).into_iter().filter(|s| s.len() == 2) {
        let (a, b) = (s[0], s[1]);
        let min_p = (a.unsigned_abs() + b.unsigned_abs() + 2).max(7);
        out.push(CongruenceCheck::pair(
            format!("C25.{}", word(&s)),
            s.clone(),
            min_p,
            2,
            move |c| c.h(&[a, b]),
            move |c| {
                let sign = sgn(a + b) * (a.signum() * b.signum());
                let inner = c.h(&[b, a])?
                    + c.pp(1) * c.c(b.abs()) * c.h(&[b.signum() + b, a])?
                    + c.pp(1) * c.c(a.abs()) * c.h(&[b, a.signum() + a])?;
                Ok(c.c(sign) * inner)
            },
        ));
    }

    // C26: weight two and three modulo p^2, H(-1,-1) also modulo p^3
    let pqb = |c: &Ctx| -> R { Ok(c.pp(1) * c.q()? * c.bp3()?) };
    fixed!(out, "C26.h-1-1.p3", 7, 3, |c| c.h(&[-1, -1])?, {
        let q = c.q()?;
        c.c(2) * q * q
            + c.pp(1) * (c.c(2) * c.x(3)? - c.c(2) * q.pow(3))
            + c.pp(2) * (c.frac(11, 6)? * q.pow(4) + c.frac(1, 2)? * q * c.bp3()?)
    });
    fixed!(out, "C26.h-1-1.p2", 7, 2, |c| c.h(&[-1, -1])?, {
        let q = c.q()?;
        c.c(2) * q * q - c.c(2) * c.pp(1) * q.pow(3) - c.frac(1, 3)? * c.pp(1) * c.bp3()?
    });
    fixed!(out, "C26.h1-1", 7, 2, |c| c.h(&[1, -1])?, {
        let q = c.q()?;
        q * q - c.pp(1) * q.pow(3) - c.frac(13, 24)? * c.pp(1) * c.bp3()?
    });
    fixed!(out, "C26.h-11", 7, 2, |c| c.h(&[-1, 1])?, {
        let q = c.q()?;
        -q * q + c.pp(1) * q.pow(3) + c.frac(1, 24)? * c.pp(1) * c.bp3()?
    });
    fixed!(out, "C26.h-3", 7, 2, |c| c.h(&[-3])?, c.c(3) * c.x(3)?);
    fixed!(
        out,
        "C26.h-21",
        7,
        2,
        |c| c.h(&[-2, 1])?,
        c.frac(-3, 2)? * c.x(3)?
    );
    fixed!(
        out,
        "C26.h1-2",
        7,
        2,
        |c| c.h(&[1, -2])?,
        c.frac(-3, 2)? * c.x(3)?
    );
    fixed!(out, "C26.h2-1", 7, 2, |c| c.h(&[2, -1])?, {
        let k = c.consts()?;
        c.frac(-3, 2)? * c.x(3)? - c.frac(7, 6)? * pqb(c)? + c.pp(1) * (k.b - k.a)
    });
    fixed!(out, "C26.h-12", 7, 2, |c| c.h(&[-1, 2])?, {
        let k = c.consts()?;
        c.frac(-3, 2)? * c.x(3)? - c.frac(1, 6)? * pqb(c)? + c.pp(1) * (k.a - k.b)
    });

    // C27: U(-1) modulo p^4 and the inputs it rests on
    fixed!(out, "C27.u-1.p4", 7, 4, |c| c.u(&[-1])?, {
        c.c(-2) * c.q()?
            + c.frac(7, 2)? * c.x(3)? * c.pp(2)
            + c.frac(1, 2)? * c.pp(3) * c.h(&[-3, 1])?
    });
    fixed!(
        out,
        "C27.h1.p4",
        7,
        4,
        |c| c.h(&[1])?,
        c.c(2) * c.pp(2) * c.x(3)?
    );
    fixed!(
        out,
        "C27.h2.p3",
        7,
        3,
        |c| c.h(&[2])?,
        c.c(-4) * c.pp(1) * c.x(3)?
    );
    fixed!(
        out,
        "C27.h2half.p3",
        7,
        3,
        |c| c.h_half(&[2])?,
        c.c(-14) * c.pp(1) * c.x(3)?
    );
    fixed!(
        out,
        "C27.h-2.split",
        7,
        4,
        |c| c.h(&[-2])?,
        c.frac(1, 2)? * c.h_half(&[2])? - c.h(&[2])?
    );

    // C28: H(-1,-2), H(-2,-1) modulo p^2
    fixed!(out, "C28.h-1-2", 7, 2, |c| c.h(&[-1, -2])?, {
        c.frac(9, 2)? * c.x(3)? - c.frac(5, 6)? * pqb(c)? + c.frac(1, 4)? * c.pp(1) * c.h31()?
    });
    fixed!(out, "C28.h-2-1", 7, 2, |c| c.h(&[-2, -1])?, {
        c.frac(-9, 2)? * c.x(3)? - c.frac(1, 6)? * pqb(c)? - c.frac(1, 4)? * c.pp(1) * c.h31()?
    });

    // C29: depth three modulo p^2
    fixed!(out, "C29.h-1-1-1", 7, 2, |c| c.h(&[-1, -1, -1])?, {
        let q = c.q()?;
        c.frac(-4, 3)? * q.pow(3)
            + c.x(3)?
            + c.pp(1) * (c.c(2) * q.pow(4) + c.frac(2, 3)? * q * c.bp3()?)
    });
    fixed!(out, "C29.h-11-1", 7, 2, |c| c.h(&[-1, 1, -1])?, {
        let k = c.consts()?;
        c.frac(1, 2)? * c.pp(1) * (c.q()? * c.bp3()? + k.b - k.a)
    });
    fixed!(out, "C29.h1-1-1", 7, 2, |c| c.h(&[1, -1, -1])?, {
        let (q, k) = (c.q()?, c.consts()?);
        -q.pow(3)
            + c.frac(21, 4)? * c.x(3)?
            + c.pp(1)
                * (c.frac(3, 2)? * q.pow(4)
                    + c.frac(3, 8)? * q * c.bp3()?
                    + c.frac(1, 4)? * (k.a - k.b)
                    + c.frac(1, 8)? * c.h31()?)
    });
    fixed!(out, "C29.h-1-11", 7, 2, |c| c.h(&[-1, -1, 1])?, {
        let (q, k) = (c.q()?, c.consts()?);
        q.pow(3) - c.frac(21, 4)? * c.x(3)?
            + c.pp(1)
                * (c.frac(-3, 2)? * q.pow(4)
                    + c.frac(1, 8)? * q * c.bp3()?
                    + c.frac(1, 4)? * (k.a - k.b)
                    - c.frac(1, 8)? * c.h31()?)
    });
    fixed!(out, "C29.h1-11", 7, 2, |c| c.h(&[1, -1, 1])?, {
        let k = c.consts()?;
        c.c(-2) * c.h(&[1, 1, -1])?
            + c.c(3) * c.x(3)?
            + c.pp(1) * (c.frac(7, 6)? * c.q()? * c.bp3()? + k.a - k.b)
    });
    fixed!(out, "C29.h-111", 7, 2, |c| c.h(&[-1, 1, 1])?, {
        let k = c.consts()?;
        c.h(&[1, 1, -1])? - c.pp(1) * (c.frac(1, 2)? * c.q()? * c.bp3()? + k.a - k.b)
    });

    // C32, C33
    fixed!(out, "C32.h12", 7, 2, |c| c.h(&[1, 2])?, c.c(-6) * c.x(3)?);
    fixed!(out, "C32.h21", 7, 2, |c| c.h(&[2, 1])?, c.c(6) * c.x(3)?);
    fixed!(out, "C33.h11-1", 7, 2, |c| c.h(&[1, 1, -1])?, {
        let k = c.consts()?;
        c.u(&[-3])? - c.pp(1) * (c.u(&[-4])? + c.frac(7, 12)? * c.q()? * c.bp3()? + k.a - k.b)
    });

    // C34: intermediate congruences
    fixed!(
        out,
        "C34.binom.xneg1.p3",
        7,
        3,
        |c| c.u(&[-1])? - c.h(&[1])?,
        -c.pp(1) * c.h(&[-2])? + c.pp(2) * c.h(&[1, -2])? - c.c(2) * c.q()?
    );
    fixed!(
        out,
        "C34.binom.xneg1.p4",
        7,
        4,
        |c| c.u(&[-1])? - c.h(&[1])?,
        {
            -c.pp(1) * c.h(&[-2])? + c.pp(2) * c.h(&[1, -2])?
                - c.pp(3) * c.h(&[1, 1, -2])?
                - c.c(2) * c.q()?
        }
    );
    fixed!(
        out,
        "C34.binom.xhalf.v",
        7,
        3,
        |c| c.v(&[-1])? - c.h(&[1])?,
        -c.pp(1) * c.v(&[-2])? + c.pp(2) * c.v(&[1, -2])? + c.q()? * c.two(1 - c.p() as i64)
    );
    fixed!(
        out,
        "C34.binom.xhalf.u",
        7,
        3,
        |c| c.u(&[-1])? + c.two(c.p() as i64) * c.h(&[1])?,
        c.pp(2) * c.u(&[-3])? + c.pp(2) * c.u(&[-2, 1])? - c.c(2) * c.q()?
    );
    fixed!(out, "C34.binom.x2", 7, 3, |c| c.h(&[-1])? - c.h(&[1])?, {
        -c.pp(1) * c.u(&[-2])? + c.pp(2) * c.u(&[1, -2])? - c.c(2) * c.q()?
    });
    fixed!(
        out,
        "C34.trunc.xneg1.d1",
        7,
        2,
        |c| c.u(&[-1])? - c.h(&[1])?,
        c.h(&[-1])? - c.pp(1) * (c.h(&[-2])? + c.h(&[1, -1])?)
    );
    fixed!(
        out,
        "C34.trunc.x2.d1",
        7,
        3,
        |c| c.h(&[-1])? - c.h(&[1])?,
        {
            c.u(&[-1])? - c.pp(1) * (c.u(&[-2])? + c.u(&[1, -1])?)
                + c.pp(2) * (c.u(&[1, -2])? + c.u(&[1, 1, -1])?)
        }
    );
    fixed!(
        out,
        "C34.trunc.xneg1.d2.sums",
        7,
        2,
        |c| c.u(&[-1, 1])? + c.u(&[-2])?,
        {
            c.h(&[1, 1])? + c.h(&[2])? + c.h(&[-2])?
                - c.pp(1) * c.h(&[1, -2])?
                - c.pp(1) * c.h(&[-3])?
        }
    );
    fixed!(
        out,
        "C34.trunc.xneg1.d2",
        7,
        2,
        |c| c.u(&[-1, 1])? + c.u(&[-2])?,
        c.frac(13, 12)? * c.pp(1) * c.bp3()?
    );
    fixed!(
        out,
        "C34.trunc.xneg1.d3.sums",
        7,
        1,
        |c| c.u(&[-1, 1, 1])? + c.u(&[-1, 2])? + c.u(&[-2, 1])?,
        c.h(&[-3])? + c.s(&[1, 1, 1])? - c.u(&[-3])?
    );
    fixed!(
        out,
        "C34.trunc.xneg1.d3",
        7,
        1,
        |c| c.u(&[-1, 1, 1])? + c.u(&[-1, 2])? + c.u(&[-2, 1])?,
        c.frac(1, 3)? * c.q()?.pow(3) - c.frac(5, 24)? * c.bp3()?
    );
    fixed!(
        out,
        "C34.trunc.xhalf.d3.v",
        7,
        1,
        |c| c.v(&[-1, 1, 1])? + c.v(&[-2, 1])? + c.v(&[-1, 2])?,
        c.zero()
    );
    fixed!(
        out,
        "C34.trunc.xhalf.d3.u",
        7,
        1,
        |c| c.u(&[1, 1, -1])? + c.u(&[1, -2])? + c.u(&[2, -1])?,
        c.zero()
    );
    fixed!(
        out,
        "C34.s-111.binom",
        7,
        2,
        |c| {
            let s = c.s(&[-1, 1, 1])?;
            s + c.pp(1)
                * (c.u(&[-4])? + c.h(&[-1, 2, 1])? + c.h(&[-2, 1, 1])? + c.h(&[-3, 1])?
                    - c.h(&[1])? * s)
        },
        c.u(&[-3])? - c.h(&[1])?
    );
    fixed!(
        out,
        "C34.s-111.trunc",
        7,
        2,
        |c| c.s(&[-1, 1, 1])? - c.s(&[1, 1, 1])?,
        c.u(&[-3])? - c.pp(1) * c.u(&[-4])? - c.pp(1) * c.u(&[1, -3])?
    );
}

/// `2^{±p·neg} (-1)^{|s|} (W(rev s) + p sum_j |s_j| W(rev(s + e_j)))` with `W = V`
/// for `U` on the left and `W = U` for `V` on the left.
fn twisted_reversal(c: &Ctx, s: &[i64], u_side: bool) -> R {
    let neg = s.iter().filter(|&&x| x < 0).count() as i64;
    let wt: i64 = s.iter().map(|x| x.abs()).sum();
    let p = c.p() as i64;
    let other = |v: &[i64]| if u_side { c.v(v) } else { c.u(v) };
    let rev = |v: &[i64]| v.iter().rev().copied().collect::<Vec<_>>();
    let mut acc = other(&rev(s))?;
    for j in 0..s.len() {
        let mut t = s.to_vec();
        t[j] += t[j].signum();
        acc += c.pp(1) * c.c(s[j].abs()) * other(&rev(&t))?;
    }
    let scale = c.two(if u_side { p * neg } else { -p * neg });
    Ok(scale * c.c(sgn(wt)) * acc)
}

fn random_composition(rng: &mut ChaCha8Rng, max_weight: u64) -> Vec<i64> {
    let wt = rng.gen_range(1..=max_weight);
    let mut parts = Vec::new();
    let mut cur = 1i64;
    for _ in 1..wt {
        if rng.gen_bool(0.5) {
            parts.push(cur);
            cur = 1;
        } else {
            cur += 1;
        }
    }
    parts.push(cur);
    parts
        .into_iter()
        .map(|x| if rng.gen_bool(0.5) { -x } else { x })
        .collect()
}

fn randomized(out: &mut Vec<CongruenceCheck>, cfg: CatalogConfig) {
    let w = cfg.weight_cap.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // C30: reversal H(s) ≡ sign(prod s) (-1)^{|s|} H(rev s) mod p
    let mut seen = BTreeSet::new();
    for _ in 0..cfg.random_cases {
        let s = random_composition(&mut rng, w);
        if !seen.insert(s.clone()) {
            continue;
        }
        let comp = Composition::from_slice(&s);
        let factor = comp.sign() * sgn(comp.weight() as i64);
        let min_p = comp.weight() + 1;
        let rev: Vec<i64> = s.iter().rev().copied().collect();
        for (fam, strict) in [("H", true), ("S", false)] {
            let (x, y) = (s.clone(), rev.clone());
            out.push(CongruenceCheck::pair(
                format!("C30.{fam}.{}", word(&s)),
                s.clone(),
                min_p,
                1,
                move |c| if strict { c.h(&x) } else { c.s(&x) },
                move |c| Ok(c.c(factor) * if strict { c.h(&y)? } else { c.s(&y)? }),
            ));
        }
    }
    // C31: stuffle homomorphism at n = p - 1
    let mut seen = BTreeSet::new();
    for _ in 0..cfg.random_cases {
        let w1 = random_composition(&mut rng, w.max(2) - 1);
        let rest = w - w1.iter().map(|x| x.unsigned_abs()).sum::<u64>().min(w - 1);
        let w2 = random_composition(&mut rng, rest.max(1));
        if !seen.insert((w1.clone(), w2.clone())) {
            continue;
        }
        let product = stuffle_product(&w1, &w2);
        let (a, b) = (w1.clone(), w2.clone());
        out.push(CongruenceCheck::pair(
            format!("C31.{}*{}", word(&w1), word(&w2)),
            cat(&[&w1, &w2]),
            7,
            2,
            move |c| Ok(c.h(&a)? * c.h(&b)?),
            move |c| product.eval_with(c.p(), c.k(), &mut |v| c.h(v)),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_sides_of_depth_one_coincide() {
        let ctx = Ctx::new(13, 1).unwrap();
        let h = marked_sum_coefficients(&ctx, 2, 1, 1, false, false);
        let s = marked_sum_coefficients(&ctx, 2, 1, 1, true, false);
        assert_eq!(h, s);
        let (l, r) = polynomial_identity(&ctx, 2, 1, 1, false).unwrap();
        assert_eq!(l, r);
    }
}
