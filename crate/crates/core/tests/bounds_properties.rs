use mdshash_core::bounds::{
    bound_new, bound_new_real, bound_old_real, compare, thresholds, Dominant, Regime,
};
use mdshash_core::rational::ratio;
use mdshash_core::Kind;
use proptest::prelude::*;

/// Crossover located numerically: scan down from ε = 1 for the first sign
/// change of new − old, then bisect.
fn crossover_by_bisection(kind: Kind, n: u64, m: u64) -> Option<f64> {
    let diff = |e: f64| -> Option<f64> {
        let old = bound_old_real(kind, n, m, e).ok()?;
        let new = bound_new_real(kind, n, m, e).ok()?;
        Some(new - old)
    };
    let steps = 4000;
    let mut hi = 1.0;
    let d_hi = diff(hi)?;
    for i in 1..steps {
        let lo = 1.0 - i as f64 / steps as f64;
        let d_lo = diff(lo)?;
        if (d_lo > 0.0) != (d_hi > 0.0) {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                match diff(mid) {
                    Some(d) if (d > 0.0) == (d_hi > 0.0) => b = mid,
                    _ => a = mid,
                }
            }
            return Some(0.5 * (a + b));
        }
        hi = lo;
    }
    None
}

#[test]
fn closed_form_thresholds_match_bisection() {
    for m in 2..=5u64 {
        for n in [m * m + 1, m * m + 7, 100, 333, 1000, 2000] {
            if n <= m * m {
                continue;
            }
            let t = thresholds(n, m).unwrap();
            for kind in Kind::ALL {
                let Some(closed) = t.for_kind(kind) else {
                    continue;
                };
                let numeric = crossover_by_bisection(kind, n, m).expect("sign change exists");
                assert!(
                    (closed - numeric).abs() < 1e-9,
                    "{kind} n={n} m={m}: closed {closed} vs bisection {numeric}"
                );
            }
        }
    }
}

#[test]
fn crossover_identity_on_grid() {
    for m in 2..=6u64 {
        for n in m + 1..=2000 {
            let t = thresholds(n, m).unwrap();
            for kind in Kind::ALL {
                let Some(e) = t.for_kind(kind) else { continue };
                let old = bound_old_real(kind, n, m, e).unwrap();
                let new = bound_new_real(kind, n, m, e).unwrap();
                assert!(
                    (old - new).abs() <= 1e-9 * old.abs().max(new.abs()),
                    "{kind} n={n} m={m}: {old} vs {new}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn u_new_bound_strictly_decreasing(m in 2u64..8, extra in 1u64..500, a in 1i64..1000, b in 1i64..1000) {
        let n = m * m + extra;
        prop_assume!(a != b);
        let (lo, hi) = (a.min(b), a.max(b));
        let vlo = bound_new(Kind::U, n, m, &ratio(lo, 1000)).unwrap().value;
        let vhi = bound_new(Kind::U, n, m, &ratio(hi, 1000)).unwrap().value;
        prop_assert!(vlo > vhi);
    }

    #[test]
    fn verdict_follows_regime(kind_ix in 0usize..3, m in 2u64..5, n in 3u64..400, k in 1i64..=1000) {
        let kind = Kind::ALL[kind_ix];
        prop_assume!(n > m);
        let eps = ratio(k, 1000);
        let Ok(r) = compare(kind, n, m, &eps) else { return Ok(()) };
        if let (Some(regime), false) = (r.regime, r.boundary) {
            match r.dominant {
                Dominant::New => prop_assert_eq!(regime, Regime::New),
                Dominant::Old => prop_assert_eq!(regime, Regime::Old),
                _ => {}
            }
        }
        if let (Some(o), Some(nn)) = (&r.old_raw, &r.new_raw) {
            prop_assert!(r.old_n.unwrap() as f64 >= o.value - 1e-9 * o.value.abs().max(1.0));
            prop_assert!(r.new_n.unwrap() as f64 >= nn.value - 1e-9 * nn.value.abs().max(1.0));
        }
    }
}
