//! Acceptance suite: one line per criterion.
//!
//! Criterion 1 cannot be met as stated (see `EXPECTED_FAIL`): the reference
//! residues belong to the reversed words. The target succeeds when every other
//! criterion passes and criterion 1 fails with exactly the recorded discrepancy.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use amhs::binomial_sums::{
    binomial_power_sum, power_sum_difference, shifted_power_sum, signed_binomial_sum,
};
use amhs::composition::{h_from_s, s_from_h, signed_compositions};
use amhs::evaluator::{eval, eval_exact, eval_mod, eval_naive};
use amhs::reduction::{reduce_negative_head, reduce_positive_head};
use amhs::registry::{
    catalog, run_check, run_sweep, CatalogConfig, CongruenceCheck, Ctx, Status, SweepOptions,
};
use amhs::residue::{int, is_prime, primes_between, rat};
use amhs::specialnum::{alt_power_sum, bernoulli, chi, euler_zero};
use amhs::stuffle::homomorphism_check;
use amhs::{Composition, Mode, Rational, SumFamily, Value};

const EXPECTED_FAIL: &[u32] = &[1];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn comp(parts: &[i64]) -> Composition {
    Composition::from_slice(parts)
}

/// Wieferich spot values, computed under the k_1 < ... < k_d convention.
fn spot_values(p: u64) -> (Vec<u64>, Vec<u64>, f64) {
    let start = Instant::now();
    let ctx = Ctx::new(p, 1).expect("prime");
    let words: [&[i64]; 3] = [&[1, -3], &[1, -1, -1, -1], &[-1, 1, 1, 1]];
    let mut direct = vec![ctx.consts().expect("constants").j.value()];
    let mut reversed = direct.clone();
    for w in words {
        direct.push(ctx.h(w).unwrap().value());
        let rev: Vec<i64> = w.iter().rev().copied().collect();
        reversed.push(ctx.h(&rev).unwrap().value());
    }
    (direct, reversed, start.elapsed().as_secs_f64())
}

fn criterion_1() -> Outcome {
    let reference = [
        (1093u64, [1023u64, 529, 670, 952]),
        (3511, [1618, 2160, 1620, 540]),
    ];
    // values under the defined ordering; the sum entries are the negatives of the reference ones
    let expected = [
        (1093u64, [1023u64, 564, 423, 141]),
        (3511, [1618, 1351, 1891, 2971]),
    ];
    let mut notes = Vec::new();
    let mut all_match = true;
    let mut discrepancy_as_recorded = true;
    for ((p, want), (_, known)) in reference.iter().zip(expected.iter()) {
        let (direct, reversed, secs) = spot_values(*p);
        all_match &= direct == want;
        discrepancy_as_recorded &= direct == known && reversed == want;
        notes.push(format!("p={p}: computed {direct:?}, reference {want:?}, reversed words {reversed:?} ({secs:.2}s)"));
    }
    let mut o = outcome(all_match, notes.join("; "));
    if !all_match && discrepancy_as_recorded {
        o.detail
            .push_str("; discrepancy matches the recorded analysis");
    } else if !all_match {
        o.detail.push_str("; UNRECORDED discrepancy");
    }
    o
}

fn criterion_1_as_recorded(o: &Outcome) -> bool {
    o.detail
        .ends_with("discrepancy matches the recorded analysis")
}

fn criterion_2() -> Outcome {
    let check = catalog(CatalogConfig::default())
        .into_iter()
        .find(|c| c.id == "C08.known-fail.p7")
        .expect("entry");
    let r = run_check(&check, 7);
    let (Some(lhs), Some(rhs_plus_delta)) = (r.lhs, r.rhs) else {
        return outcome(false, format!("not evaluated: {:?}", r.detail));
    };
    let direct = eval_mod(SumFamily::H, &comp(&[1, -2, -3]), 6, 7, 1).unwrap();
    let rhs = rhs_plus_delta - amhs::Residue::new(5, 7, 1).unwrap();
    let delta = (lhs - rhs).value();
    outcome(
        r.status == Status::Pass && delta == 5 && direct == lhs,
        format!(
            "H(1,-2,-3;6) ≡ {} and closed form ≡ {} mod 7, difference {delta}",
            lhs.value(),
            rhs.value()
        ),
    )
}

fn family(id: &str) -> u32 {
    id[1..3].parse().unwrap_or(0)
}

fn criterion_3() -> Outcome {
    let checks = catalog(CatalogConfig::default());
    let primes = primes_between(7, 1000);
    let start = Instant::now();
    let results = run_sweep(
        &checks,
        &primes,
        SweepOptions {
            jobs: jobs(),
            power_cap: None,
            timing: false,
        },
    )
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    let in_scope = |id: &str| (1..=33).contains(&family(id));
    let evaluated = results
        .iter()
        .filter(|r| in_scope(&r.id) && r.status != Status::Skipped)
        .count();
    let failed: Vec<String> = results
        .iter()
        .filter(|r| in_scope(&r.id) && r.status == Status::Fail)
        .map(|r| format!("{}@{}", r.id, r.p))
        .collect();
    let extra_fail = results
        .iter()
        .filter(|r| !in_scope(&r.id) && r.status == Status::Fail)
        .count();
    outcome(
        failed.is_empty() && evaluated > 0,
        format!(
            "{} checks x {} primes: {evaluated} evaluated in scope, {} failed {:?}, {extra_fail} failures outside C01-C33, {secs:.1}s on {} worker(s)",
            checks.len(),
            primes.len(),
            failed.len(),
            &failed[..failed.len().min(5)],
            jobs()
        ),
    )
}

fn criterion_4() -> Outcome {
    let checks: Vec<CongruenceCheck> = catalog(CatalogConfig::default())
        .into_iter()
        .filter(|c| {
            ["C01.", "C02.", "C26.", "C27."]
                .iter()
                .any(|f| c.id.starts_with(f))
        })
        .collect();
    let powers: std::collections::HashMap<String, u32> =
        checks.iter().map(|c| (c.id.clone(), c.power)).collect();
    let results = run_sweep(
        &checks,
        &primes_between(11, 500),
        SweepOptions {
            jobs: jobs(),
            power_cap: None,
            timing: false,
        },
    )
    .unwrap();
    let ran: Vec<_> = results
        .iter()
        .filter(|r| r.status != Status::Skipped)
        .collect();
    let failed = ran.iter().filter(|r| r.status == Status::Fail).count();
    let full_power = ran.iter().all(|r| r.k == powers[&r.id]);
    let max_k = ran.iter().map(|r| r.k).max().unwrap_or(0);
    outcome(
        failed == 0 && full_power && max_k == 4 && !ran.is_empty(),
        format!(
            "{} results at full power (max p^{max_k}), {failed} failed",
            ran.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut problems = Vec::new();
    // power sums through Bernoulli numbers
    for d in 1..=20u32 {
        for n in 1..=20i64 {
            let lhs = (1..n).fold(Rational::zero(), |acc, j| acc + int(j).pow(d as i32));
            let rhs = (0..=d as usize).fold(Rational::zero(), |acc, r| {
                let c = num_integer::binomial(d as i64 + 1, r as i64);
                acc + int(c) * bernoulli(r) / int(d as i64 + 1)
                    * int(n).pow((d as usize + 1 - r) as i32)
            });
            if lhs != rhs {
                problems.push(format!("power sum n={n} d={d}"));
            }
        }
    }
    // alternating power sums through Euler polynomials
    for n in 0..=12usize {
        for d in 1..=12u64 {
            let direct = (1..d).fold(Rational::zero(), |acc, i| {
                let t = int(i as i64).pow(n as i32);
                if i % 2 == 1 {
                    acc - t
                } else {
                    acc + t
                }
            });
            if alt_power_sum(n, d) != direct {
                problems.push(format!("alternating sum n={n} d={d}"));
            }
        }
    }
    let xs = [int(-1), int(2), rat(1, 2), rat(5, 3)];
    for x in &xs {
        for d in 1..=4 {
            for m in 1..=25 {
                if shifted_power_sum(m, d, x) != binomial_power_sum(m, d, x) {
                    problems.push(format!("first binomial identity m={m} d={d} x={x}"));
                }
            }
            for m in 1..=20 {
                if signed_binomial_sum(m, d, x) != power_sum_difference(m, d, x) {
                    problems.push(format!("second binomial identity m={m} d={d} x={x}"));
                }
            }
        }
    }
    // S <-> H round trip up to depth 4
    let mut round_trips = 0;
    for s in signed_compositions(6).into_iter().filter(|s| s.len() <= 4) {
        let c = comp(&s);
        for n in [0, 3, 9] {
            let s_direct = eval_exact(SumFamily::S, &c, n);
            let h_direct = eval_exact(SumFamily::H, &c, n);
            let s_via_h = s_from_h(&c, |r| eval_exact(SumFamily::H, r, n));
            let h_via_s = h_from_s(&c, |r| eval_exact(SumFamily::S, r, n));
            round_trips += 1;
            if s_direct != s_via_h || h_direct != h_via_s {
                problems.push(format!("round trip {c} n={n}"));
            }
        }
    }
    // stuffle homomorphism on seeded random pairs
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let word = |rng: &mut ChaCha8Rng| -> Vec<i64> {
        let d = rng.gen_range(1..=3);
        (0..d)
            .map(|_| rng.gen_range(1..=3i64) * if rng.gen_bool(0.5) { -1 } else { 1 })
            .collect()
    };
    for _ in 0..200 {
        let (w1, w2) = (word(&mut rng), word(&mut rng));
        let n = rng.gen_range(0..=12);
        if !homomorphism_check(&w1, &w2, n, Mode::Exact).unwrap() {
            problems.push(format!("stuffle {w1:?}*{w2:?} n={n}"));
        }
    }
    outcome(
        problems.is_empty(),
        format!("power sums, alternating sums, two binomial identities, {round_trips} round trips, 200 stuffle pairs; {} mismatches {:?}", problems.len(), &problems[..problems.len().min(5)]),
    )
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for s in signed_compositions(4) {
        let c = comp(&s);
        for fam in [SumFamily::H, SumFamily::S, SumFamily::U, SumFamily::V] {
            for n in 0..=30 {
                count += 1;
                let fast = eval(fam, &c, n, Mode::Exact).unwrap();
                let slow = eval_naive(fam, &c, n, Mode::Exact).unwrap();
                if fast != slow {
                    bad.push(format!("{fam}({c};{n})"));
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{count} exact evaluations, {} mismatches {:?}",
            bad.len(),
            &bad[..bad.len().min(5)]
        ),
    )
}

fn criterion_7() -> Outcome {
    let b12 = bernoulli(12) == rat(-691, 2730);
    let staudt = (2..=60).step_by(2).all(|n| {
        let corr = (2..=n as u64 + 1)
            .filter(|&p| is_prime(p) && (n as u64).is_multiple_of(p - 1))
            .fold(Rational::zero(), |a, p| a + rat(1, p as i64));
        (bernoulli(n) + corr).is_integer()
    });
    let e0 = euler_zero(0) == Rational::one();
    let e1 = euler_zero(1) == rat(-1, 2);
    let x73 = chi(7, 3) == rat(-2, 165);
    outcome(
        b12 && staudt && e0 && e1 && x73,
        format!(
            "B_12 {b12}, von Staudt-Clausen to 60 {staudt}, E_0(0) {e0}, E_1(0) {e1}, X_7(3) {x73}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for p in primes_between(7, 199) {
        for a in 1..=5u64 {
            for tail in signed_compositions(6 - a) {
                let t = comp(&tail);
                for (head, got) in [
                    (a as i64, reduce_positive_head(a, &t, p)),
                    (-(a as i64), reduce_negative_head(a, &t, p)),
                ] {
                    let mut word = vec![head];
                    word.extend_from_slice(&tail);
                    let brute = eval_mod(SumFamily::H, &comp(&word), p - 1, p, 1).unwrap();
                    count += 1;
                    match got {
                        Ok(v) if v == brute => {}
                        other => {
                            bad.push(format!("H({word:?}) p={p}: {other:?} vs {}", brute.value()))
                        }
                    }
                }
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{count} reductions, {} mismatches {:?}",
            bad.len(),
            &bad[..bad.len().min(3)]
        ),
    )
}

/// Reference forms that are kept out of the catalog because they fail; reported for reference.
fn notes() -> Vec<String> {
    let mut out = Vec::new();
    // reversal with the depth sign instead of the weight sign
    let (p, s) = (11u64, [1i64, -2, 3]);
    let lhs = eval_mod(SumFamily::H, &comp(&s), p - 1, p, 1).unwrap();
    let rev = eval_mod(SumFamily::H, &comp(&[3, -2, 1]), p - 1, p, 1).unwrap();
    // sign(prod s) = -1; (-1)^depth = -1 while (-1)^weight = 1
    let (depth_form, weight_form) = (rev, -rev);
    out.push(format!(
        "reversal with (-1)^depth: H(1,-2,3) ≡ {} but the depth form gives {} mod 11; the weight form gives {}",
        lhs.value(),
        depth_form.value(),
        weight_form.value()
    ));
    // H(4) at the boundary prime p = 7
    let ctx = Ctx::new(7, 3).unwrap();
    let h4 = ctx.h(&[4]).unwrap();
    let rhs = ctx.c(-8) * ctx.x(5).unwrap() * ctx.pp(1);
    out.push(format!(
        "H(4;6) ≡ {} but -8 X_7(5) 7 ≡ {} mod 7^3",
        h4.value(),
        rhs.value()
    ));
    // the reference {-1}^5 value without the H(-5) term
    let mut misses = 0;
    for p in primes_between(7, 100) {
        let c = Ctx::new(p, 1).unwrap();
        let (q, b) = (c.q().unwrap(), c.bp3().unwrap());
        let reference = c.frac(-4, 15).unwrap() * q.pow(5) - c.frac(1, 3).unwrap() * q * q * b;
        if c.h(&[-1; 5]).unwrap() != reference {
            misses += 1;
        }
    }
    out.push(format!(
        "reference H({{-1}}^5) value fails at {misses} of {} primes below 100",
        primes_between(7, 100).len()
    ));
    if let Value::Exact(v) = eval(SumFamily::H, &comp(&[-2]), 4, Mode::Exact).unwrap() {
        out.push(format!("H(-2;4) = {v}"));
    }
    out
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (1, "spot values at 1093 and 3511", criterion_1),
        (2, "depth-three counterexample at p = 7", criterion_2),
        (3, "full sweep C01-C33, 7 <= p <= 1000", criterion_3),
        (4, "high-power checks, 11 <= p <= 500", criterion_4),
        (5, "exact identities", criterion_5),
        (6, "DP evaluator vs nested loops", criterion_6),
        (7, "special-number oracles", criterion_7),
        (8, "head reductions vs brute force", criterion_8),
    ];
    let mut ok = true;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {n} {}: {name} [{secs:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        let expected_fail = EXPECTED_FAIL.contains(&n);
        ok &= if expected_fail {
            !o.pass && (n != 1 || criterion_1_as_recorded(&o))
        } else {
            o.pass
        };
    }
    for note in notes() {
        println!("note: {note}");
    }
    if ok {
        println!("acceptance: all outcomes as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome");
        ExitCode::FAILURE
    }
}
