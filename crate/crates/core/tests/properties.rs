//! Cross-module invariants over random compositions and primes.

use proptest::prelude::*;

use amhs::composition::{h_from_s, s_from_h};
use amhs::evaluator::eval_mod;
use amhs::registry::{catalog, run_sweep, CatalogConfig, Ctx, SweepOptions};
use amhs::residue::primes_between;
use amhs::stuffle::stuffle_product;
use amhs::{Composition, SumFamily};

fn word(max_depth: usize, max_part: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(
        (1..=max_part, any::<bool>()).prop_map(|(a, neg)| if neg { -a } else { a }),
        1..=max_depth,
    )
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(primes_between(11, 113))
}

fn weight(w: &[i64]) -> u64 {
    w.iter().map(|x| x.unsigned_abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversal_uses_the_weight_sign(s in word(4, 3), p in prime()) {
        prop_assume!(weight(&s) + 1 < p);
        let c = Composition::from_slice(&s);
        let sign = c.sign() * if c.weight().is_multiple_of(2) { 1 } else { -1 };
        for fam in [SumFamily::H, SumFamily::S] {
            let lhs = eval_mod(fam, &c, p - 1, p, 1).unwrap();
            let rhs = eval_mod(fam, &c.reverse(), p - 1, p, 1).unwrap();
            prop_assert_eq!(lhs, if sign == 1 { rhs } else { -rhs });
        }
    }

    #[test]
    fn stuffle_holds_modulo_prime_powers(a in word(3, 4), b in word(3, 4), p in prime()) {
        let ctx = Ctx::new(p, 2).unwrap();
        let lhs = ctx.h(&a).unwrap() * ctx.h(&b).unwrap();
        let rhs = stuffle_product(&a, &b).eval_with(p, 2, &mut |w| ctx.h(w)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn s_and_h_convert_modulo_p(s in word(4, 4), p in prime(), n in 0u64..10) {
        let c = Composition::from_slice(&s);
        let n = n.min(p - 1);
        let h = |r: &Composition| eval_mod(SumFamily::H, r, n, p, 3).unwrap();
        let sv = |r: &Composition| eval_mod(SumFamily::S, r, n, p, 3).unwrap();
        prop_assert_eq!(s_from_h(&c, h), sv(&c));
        prop_assert_eq!(h_from_s(&c, sv), h(&c));
    }

    #[test]
    fn u_and_v_reverse_modulo_p_squared(s in word(3, 2), p in prime()) {
        prop_assume!(weight(&s) + 2 < p);
        let ctx = Ctx::new(p, 2).unwrap();
        let neg = s.iter().filter(|x| **x < 0).count() as i64;
        let sign = if weight(&s).is_multiple_of(2) { ctx.c(1) } else { ctx.c(-1) };
        let rev = |v: &[i64]| v.iter().rev().copied().collect::<Vec<_>>();
        let mut acc = ctx.v(&rev(&s)).unwrap();
        for j in 0..s.len() {
            let mut t = s.clone();
            t[j] += t[j].signum();
            acc += ctx.pp(1) * ctx.c(s[j].abs()) * ctx.v(&rev(&t)).unwrap();
        }
        prop_assert_eq!(ctx.u(&s).unwrap(), ctx.two(p as i64 * neg) * sign * acc);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn sweeps_are_scheduling_independent(seed in any::<u64>()) {
        let checks: Vec<_> = catalog(CatalogConfig { seed, ..CatalogConfig::default() })
            .into_iter()
            .filter(|c| c.id.starts_with("C30.") || c.id.starts_with("C31."))
            .collect();
        let primes = primes_between(7, 50);
        let run = |jobs| run_sweep(&checks, &primes, SweepOptions { jobs, power_cap: None, timing: false }).unwrap();
        let one = run(1);
        prop_assert!(one.iter().all(|r| r.status != amhs::registry::Status::Fail));
        prop_assert_eq!(one, run(3));
    }
}
