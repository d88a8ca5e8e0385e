//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::time::{Duration, Instant};

use mdshash_core::bounds::{
    bound_new, bound_new_real, bound_old_real, check_family_size, compare, eps4, integral_adjust,
    plotkin_eps_floor, thresholds, Dominant,
};
use mdshash_core::code::{
    parity_code, parity_mds_with_allones, rs_code, smallest_n_subcode_size, subcode_select,
    GenericCode,
};
use mdshash_core::family::{
    code_to_delta_family, code_to_family, family_to_code, linear_code_to_family, measure,
    measure_epsilon_delta, measure_epsilon_su, measure_epsilon_u, HashFamily, RangeGroup,
};
use mdshash_core::rational::{format_ratio, ratio};
use mdshash_core::Kind;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("took {:.2}s, limit {limit_secs}s", elapsed.as_secs_f64())
    })
}

/// Families built by criteria 1–4, kept for the soundness sweep.
#[derive(Default)]
struct Built(Vec<(String, HashFamily)>);

fn ac1_rs_tightness(built: &mut Built) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for q in [3u32, 5, 7] {
        for n in 3..=q as usize {
            for k in 2..n {
                let fam = linear_code_to_family(&rs_code(q, k, n).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let eps = measure_epsilon_u(&fam).map_err(|e| e.to_string())?.epsilon;
                let want = ratio((k - 1) as i64, n as i64);
                ensure(eps == want, || {
                    format!(
                        "q={q} k={k} n={n}: measured {} != {}",
                        format_ratio(&eps),
                        format_ratio(&want)
                    )
                })?;
                built.0.push((format!("rs({q},{k},{n})"), fam));
                count += 1;
            }
        }
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!(
        "{count} RS families, eps = (k-1)/n exactly, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn ac2_smallest_n(built: &mut Built) -> Outcome {
    let start = Instant::now();
    let (q, i) = (2u32, 1u32);
    let len = q.pow(i + 1) as usize;
    let size = smallest_n_subcode_size(q, i).unwrap();
    let sub = subcode_select(&parity_code(q, len).unwrap(), size).map_err(|e| e.to_string())?;
    let fam = code_to_family(&sub).map_err(|e| e.to_string())?;
    ensure(
        (fam.funcs(), fam.domain(), fam.range()) == (4, 6, 2),
        || "family is not (4; 6, 2)".into(),
    )?;
    let eps_measured = measure_epsilon_u(&fam).map_err(|e| e.to_string())?.epsilon;
    ensure(eps_measured <= ratio(1, 2), || {
        format!("measured eps {}", format_ratio(&eps_measured))
    })?;

    // parameters of the theorem: eps = 1 − 2/q^(i+1)
    let eps = ratio(1, 1) - ratio(2, len as i64);
    let raw = bound_new(Kind::U, 6, 2, &eps).map_err(|e| e.to_string())?;
    ensure((raw.value - 3.1699).abs() < 1e-4, || {
        format!("new U bound {}", raw.value)
    })?;
    ensure((raw.value / 2.0 + 1.0 - 6f64.log2()).abs() < 1e-4, || {
        "log2 6 mismatch".into()
    })?;
    let adjusted = integral_adjust(&raw, &eps, Kind::U, 2);
    ensure(adjusted == 4 && adjusted as usize == fam.funcs(), || {
        format!("adjusted N = {adjusted}")
    })?;
    let report = compare(Kind::U, 6, 2, &eps).map_err(|e| e.to_string())?;
    ensure(report.dominant == Dominant::New, || {
        format!("dominant {:?}", report.dominant)
    })?;
    built.0.push(("subfamily(2,1)".into(), fam));
    within(start.elapsed(), 1.0)?;
    Ok(format!(
        "(4; 6, 2) family, measured eps {}, new U bound {:.6}, adjusted N {adjusted}",
        format_ratio(&eps_measured),
        raw.value
    ))
}

fn ac3_delta_example() -> Outcome {
    let start = Instant::now();
    let (q, i) = (3u64, 2u32);
    let big = (q - 1).pow(i + 1);
    let n = q.pow(big as u32 - 1);
    let eps = ratio(1, 1) - ratio(2, big as i64);
    ensure(eps == ratio(3, 4), || "eps != 3/4".into())?;
    let raw = bound_new(Kind::DeltaU, n, q, &eps).map_err(|e| e.to_string())?;
    ensure((raw.value - 5.2379).abs() < 1e-4, || {
        format!("new dU bound {}", raw.value)
    })?;
    let lo = (q - 1).pow(i) as f64;
    ensure(lo < raw.value && raw.value < big as f64, || {
        format!("{} not in ({lo}, {big})", raw.value)
    })?;
    let adjusted = integral_adjust(&raw, &eps, Kind::DeltaU, q);
    ensure(adjusted >= big, || format!("adjusted N {adjusted} < {big}"))?;
    let t3 = thresholds(n, q).unwrap().eps3.value.unwrap();
    ensure(0.75 > t3, || format!("eps3 = {t3} not below 3/4"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!(
        "n = {n}: new dU bound {:.6}, adjusted N {adjusted}, eps3 {t3:.6}",
        raw.value
    ))
}

fn ac4_delta_family(built: &mut Built) -> Outcome {
    let start = Instant::now();
    let (code, _) = parity_mds_with_allones(3, 4).map_err(|e| e.to_string())?;
    let d = code.min_distance().map_err(|e| e.to_string())?;
    let fam = code_to_delta_family(&code).map_err(|e| e.to_string())?;
    let r = measure_epsilon_delta(&fam).map_err(|e| e.to_string())?;
    let want = ratio(1, 1) - ratio(d as i64, 4);
    ensure(r.epsilon == ratio(1, 2) && r.epsilon == want, || {
        format!(
            "measured {} vs 1 - D/N = {}",
            format_ratio(&r.epsilon),
            format_ratio(&want)
        )
    })?;
    ensure(r.group == Some(RangeGroup::Field), || {
        "group is not GF(3)".into()
    })?;

    // With all 27 codewords as the domain, two points always differ by a
    // multiple of e, so the worst difference is hit by every function.
    let whole = linear_code_to_family(&code).map_err(|e| e.to_string())?;
    let whole_eps = measure_epsilon_delta(&whole)
        .map_err(|e| e.to_string())?
        .epsilon;
    ensure(whole_eps == ratio(1, 1), || {
        format!("27-point family eps {}", format_ratio(&whole_eps))
    })?;

    let events = fam.domain() * (fam.domain() - 1) / 2 * 3;
    built.0.push(("delta(3,4)".into(), fam.clone()));
    within(start.elapsed(), 1.0)?;
    Ok(format!(
        "coset family ({}; {}, 3): delta-eps 1/2 = 1 - {d}/4 over {events} events; all-27-codeword domain gives delta-eps 1",
        fam.funcs(),
        fam.domain()
    ))
}

fn ac5_lemma_grids() -> Outcome {
    let start = Instant::now();
    let slack = 1e-12;
    let (mut n1, mut n3, mut n4) = (0, 0, 0);
    let mut min_margin = f64::INFINITY;
    for m in 2..=6u64 {
        for n in m + 1..=2000 {
            let t = thresholds(n, m).map_err(|e| format!("n={n} m={m}: {e}"))?;
            let e3 = t.eps3.value.unwrap();
            let inv_m = 1.0 / m as f64;
            ensure(1.0 - e3 > -slack && e3 - inv_m > -slack, || {
                format!("eps3 ordering fails n={n} m={m}: {e3}")
            })?;
            min_margin = min_margin.min(1.0 - e3).min(e3 - inv_m);
            n3 += 1;
            if n > m * m {
                let (e1, e2) = (t.eps1.value.unwrap(), t.eps2.value.unwrap());
                ensure(1.0 - e1 > -slack && e1 - e2 > -slack, || {
                    format!("eps1 ordering fails n={n} m={m}: eps1 {e1}, eps2 {e2}")
                })?;
                min_margin = min_margin.min(1.0 - e1).min(e1 - e2);
                n1 += 1;
            }
            if n > 1 << m {
                ensure(t.discriminant >= 0.0, || {
                    format!("negative discriminant n={n} m={m}")
                })?;
                let e4 = t.eps4.value.unwrap();
                ensure(1.0 - e4 > -slack && e4 - inv_m > -slack, || {
                    format!("eps4 ordering fails n={n} m={m}: eps4 {e4}")
                })?;
                min_margin = min_margin.min(1.0 - e4).min(e4 - inv_m);
                n4 += 1;
            }
        }
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!(
        "{n1} + {n3} + {n4} grid points, smallest margin {min_margin:.3e}"
    ))
}

fn ac6_crossovers() -> Outcome {
    let start = Instant::now();
    let e1 = thresholds(27, 3).unwrap().eps1.value.unwrap();
    ensure((e1 - 0.4).abs() < 1e-12, || format!("eps1(27,3) = {e1}"))?;
    let (o, n) = (
        bound_old_real(Kind::U, 27, 3, e1).unwrap(),
        bound_new_real(Kind::U, 27, 3, e1).unwrap(),
    );
    ensure((o - 5.0).abs() < 1e-9 && (n - 5.0).abs() < 1e-9, || {
        format!("U: {o} vs {n}")
    })?;

    let e3 = thresholds(4, 2).unwrap().eps3.value.unwrap();
    ensure((e3 - 0.6).abs() < 1e-12, || format!("eps3(4,2) = {e3}"))?;
    let (o2, n2) = (
        bound_old_real(Kind::DeltaU, 4, 2, e3).unwrap(),
        bound_new_real(Kind::DeltaU, 4, 2, e3).unwrap(),
    );
    ensure((o2 - 2.5).abs() < 1e-9 && (n2 - 2.5).abs() < 1e-9, || {
        format!("dU: {o2} vs {n2}")
    })?;

    let e4 = eps4(8, 2).unwrap();
    let (o3, n3) = (
        bound_old_real(Kind::SU, 8, 2, e4).unwrap(),
        bound_new_real(Kind::SU, 8, 2, e4).unwrap(),
    );
    let rel = (o3 - n3).abs() / o3.abs().max(n3.abs());
    ensure(rel < 1e-6, || format!("SU: {o3} vs {n3}, rel {rel:e}"))?;
    within(start.elapsed(), 1.0)?;
    Ok(format!(
        "U 5.0 = 5.0, dU 2.5 = 2.5, SU {o3:.6} ~ {n3:.6} (rel {rel:.1e}) at eps4 {e4:.6}"
    ))
}

fn random_family(rng: &mut ChaCha8Rng) -> HashFamily {
    let m = rng.gen_range(2..=4u32);
    let funcs = rng.gen_range(1..=8usize);
    let n = rng.gen_range(m as usize..=12);
    let rows: Vec<Vec<u32>> = (0..funcs)
        .map(|_| (0..n).map(|_| rng.gen_range(0..m)).collect())
        .collect();
    HashFamily::from_rows(&rows, m, None).unwrap()
}

/// Every column holds each value exactly N/m times.
fn random_balanced_family(rng: &mut ChaCha8Rng) -> HashFamily {
    let m = rng.gen_range(2..=4u32);
    let funcs = m as usize * rng.gen_range(1..=(8 / m as usize).max(1));
    let n = rng.gen_range(m as usize..=12);
    let cols: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let mut col: Vec<u32> = (0..funcs).map(|i| (i % m as usize) as u32).collect();
            for i in (1..col.len()).rev() {
                col.swap(i, rng.gen_range(0..=i));
            }
            col
        })
        .collect();
    HashFamily::from_words(&cols, m, None).unwrap()
}

fn ac7_floors() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut positive_floors = 0;
    for trial in 0..1000 {
        let fam = random_family(&mut rng);
        let (n, m) = (fam.domain() as u64, fam.range() as u64);
        let u = measure_epsilon_u(&fam).map_err(|e| e.to_string())?.epsilon;
        if n > m {
            let floor = plotkin_eps_floor(n, m).unwrap();
            positive_floors += 1;
            ensure(u >= floor, || {
                format!(
                    "trial {trial}: U eps {} below floor {}",
                    format_ratio(&u),
                    format_ratio(&floor)
                )
            })?;
        }
        let d = measure_epsilon_delta(&fam)
            .map_err(|e| e.to_string())?
            .epsilon;
        ensure(d >= ratio(1, m as i64), || {
            format!("trial {trial}: dU eps {} below 1/m", format_ratio(&d))
        })?;
    }
    for trial in 0..1000 {
        let fam = random_balanced_family(&mut rng);
        let r = measure_epsilon_su(&fam).map_err(|e| e.to_string())?;
        ensure(r.balanced == Some(true), || {
            format!("trial {trial}: generator produced unbalanced family")
        })?;
        ensure(r.epsilon >= ratio(1, fam.range() as i64), || {
            format!(
                "trial {trial}: SU eps {} below 1/m",
                format_ratio(&r.epsilon)
            )
        })?;
    }
    within(start.elapsed(), 10.0)?;
    Ok(format!(
        "1000 random families ({positive_floors} with positive Plotkin floor) + 1000 balanced SU candidates, {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn ac8_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut done = 0;
    while done < 100 {
        let q = rng.gen_range(2..=5u32);
        let len = rng.gen_range(2..=6usize);
        let space = (q as u64).pow(len as u32);
        let k = rng.gen_range(q as u64..=space.min(64)) as usize;
        let mut words = std::collections::BTreeSet::new();
        while words.len() < k {
            words.insert((0..len).map(|_| rng.gen_range(0..q)).collect::<Vec<u32>>());
        }
        // shuffle so the stored order is not lexicographic
        let mut words: Vec<Vec<u32>> = words.into_iter().collect();
        for i in (1..words.len()).rev() {
            words.swap(i, rng.gen_range(0..=i));
        }
        let code = GenericCode::new(q, words).map_err(|e| e.to_string())?;
        let fam = code_to_family(&code).map_err(|e| e.to_string())?;
        let back = family_to_code(&fam).map_err(|e| e.to_string())?;
        ensure(
            back.code.word_set() == code.word_set() && !back.has_duplicates(),
            || format!("round trip changed the codeword set (q={q}, N={len}, K={k})"),
        )?;
        let d = code.min_distance().map_err(|e| e.to_string())?;
        let eps = measure_epsilon_u(&fam).map_err(|e| e.to_string())?.epsilon;
        let want = BigRational::new(((len - d) as i64).into(), (len as i64).into());
        ensure(eps == want, || {
            format!(
                "eps {} != 1 - D/N = {}",
                format_ratio(&eps),
                format_ratio(&want)
            )
        })?;
        done += 1;
    }
    Ok("100 random codes (K <= 64): identity on codeword sets, eps = 1 - D/N".into())
}

fn ac9_soundness(built: &Built) -> Outcome {
    let mut checks = 0;
    for (name, fam) in &built.0 {
        let (funcs, n, m) = (fam.funcs() as u64, fam.domain() as u64, fam.range() as u64);
        let mut per_kind = vec![(Kind::U, measure(fam, Kind::U, &Default::default()))];
        if fam.group().is_some() {
            per_kind.push((
                Kind::DeltaU,
                measure(fam, Kind::DeltaU, &Default::default()),
            ));
        }
        let su = measure(fam, Kind::SU, &Default::default()).map_err(|e| e.to_string())?;
        if su.balanced == Some(true) {
            per_kind.push((Kind::SU, Ok(su)));
        }
        for (kind, report) in per_kind {
            let eps = report.map_err(|e| e.to_string())?.epsilon;
            for c in check_family_size(kind, funcs, n, m, &eps) {
                ensure(c.satisfied, || {
                    format!(
                        "{name}: N = {funcs} violates {} bound ({kind}, eps {}) raw {}",
                        c.bound,
                        format_ratio(&eps),
                        c.raw
                    )
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{} families, {checks} applicable bound checks satisfied",
        built.0.len()
    ))
}

fn main() {
    let mut built = Built::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("AC1 RS tightness", ac1_rs_tightness(&mut built)),
        ("AC2 smallest-N family q=2 i=1", ac2_smallest_n(&mut built)),
        ("AC3 delta-U worked example q=3 i=2", ac3_delta_example()),
        (
            "AC4 delta-U family from parity code (3,4)",
            ac4_delta_family(&mut built),
        ),
        ("AC5 threshold ordering grids", ac5_lemma_grids()),
        ("AC6 crossover identities", ac6_crossovers()),
        ("AC7 epsilon floors on random families", ac7_floors()),
        ("AC8 code/family round trip", ac8_round_trip()),
        (
            "AC9 soundness of constructed families",
            ac9_soundness(&built),
        ),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
