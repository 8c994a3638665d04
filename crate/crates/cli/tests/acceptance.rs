//! Acceptance run: one PASS/FAIL line per criterion. All comparisons are
//! exact; the time limits are wall-clock and apply to this process.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use condensed::descent::{
    fork_from_surjection, key_lemma_check, random_split_fork, restrict, roundtrip_beta, roundtrip_ch,
    ContravariantFunctor, HomInto, PresheafFunctor, SplitFork,
};
use condensed::finset::{all_maps, compose, FinMap, FinSet};
use condensed::plus::{check_plus_times, partitions, plus, sharp, sharp_oracle_iso, sheafification_oracle};
use condensed::presheaf::{check_star, check_times, product_presheaf, random_presheaf, NatIso, NatTrans, Presheaf};
use condensed::resolution::standard_resolution;
use condensed::site::Site;
use condensed::stone::{
    beta, beta_coproduct_iso, beta_map, enumerate_ultrafilters, powerset_algebra, spec, BetaConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Number, name, check and optional time limit in seconds.
type Criterion = (u32, &'static str, fn() -> Outcome, Option<u64>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn site() -> Site {
    Site::new(4, 2).unwrap()
}

/// Ultrafilters on `{0..n}` straight from the axioms; subsets are bitmasks,
/// families are bit vectors over subsets.
fn axiomatic_ultrafilters(n: usize) -> (usize, usize) {
    let full = (1usize << n) - 1;
    let subsets = 1usize << n;
    let (mut total, mut principal) = (0, 0);
    for fam in 0u64..1u64 << subsets {
        let has = |a: usize| fam >> a & 1 == 1;
        if has(0) || !has(full) {
            continue;
        }
        let mut ok = true;
        'outer: for a in 0..subsets {
            if has(a) == has(full & !a) {
                ok = false;
                break;
            }
            for b in 0..subsets {
                if has(a) && has(b) && !has(a & b) || has(a) && a & b == a && !has(b) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            total += 1;
            if (0..n).any(|x| (0..subsets).all(|a| has(a) == (a >> x & 1 == 1))) {
                principal += 1;
            }
        }
    }
    (total, principal)
}

fn c1() -> Outcome {
    for n in 0..=4 {
        let us = enumerate_ultrafilters(&FinSet::canonical(n), &BetaConfig::default()).map_err(|e| e.to_string())?;
        let principal = us.iter().filter(|u| u.is_principal()).count();
        ensure(us.len() == n && principal == n, || format!("size {n}: {} found, {principal} principal", us.len()))?;
        let oracle = axiomatic_ultrafilters(n);
        ensure(oracle == (n, n), || format!("size {n}: axiomatic count {oracle:?}"))?;
    }
    Ok("sizes 0..=4, 65536 candidates at size 4".into())
}

fn c2() -> Outcome {
    let sets: Vec<FinSet> = (0..=3).map(FinSet::canonical).collect();
    let betas: Vec<_> = sets.iter().map(|s| beta(s, &BetaConfig::default()).unwrap()).collect();
    let mut maps = 0;
    for (a, x) in sets.iter().enumerate() {
        for (b, y) in sets.iter().enumerate() {
            for f in all_maps(x, y) {
                maps += 1;
                let bf = beta_map(&f, &betas[a], &betas[b]).map_err(|e| e.to_string())?;
                let unit = compose(&bf, betas[a].iota()).unwrap() == compose(betas[b].iota(), &f).unwrap();
                let counit = compose(&f, betas[a].xi()).unwrap() == compose(betas[b].xi(), &bf).unwrap();
                ensure(unit && counit, || format!("{a}->{b}:{:?}", f.table()))?;
            }
        }
    }
    let expected: usize = (0..=3usize).flat_map(|m| (0..=3usize).map(move |n| n.pow(m as u32))).sum();
    ensure(maps == expected, || format!("{maps} maps checked, expected {expected}"))?;
    Ok(format!("{maps} maps"))
}

fn c3() -> Outcome {
    for a in 0..=2 {
        for b in 0..=2 {
            let iso = beta_coproduct_iso(&FinSet::canonical(a), &FinSet::canonical(b), &BetaConfig::default())
                .map_err(|e| e.to_string())?;
            let round = compose(iso.backward(), iso.forward()).unwrap().is_identity()
                && compose(iso.forward(), iso.backward()).unwrap().is_identity();
            ensure(round && iso.forward().dom().len() == a + b, || format!("|S| = {a}, |T| = {b}"))?;
        }
    }
    for n in 0..=4 {
        let points = spec(&powerset_algebra(&FinSet::canonical(n), &BetaConfig::default()).unwrap()).unwrap().len();
        ensure(points == n, || format!("spec P({n}) has {points} points"))?;
    }
    Ok("9 coproduct pairs, 5 power sets".into())
}

fn c4() -> Outcome {
    for n in 0..=4 {
        let r = standard_resolution(&FinSet::canonical(n)).map_err(|e| e.to_string())?;
        let iso = r.verify_coequalizer().map_err(|e| e.to_string())?;
        // Independent count: classes of B(X) under π1(t) ~ π2(t).
        let mut class: Vec<usize> = (0..r.b().carrier().len()).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for t in 0..r.pi1().dom().len() {
                let (i, j) = (class[r.pi1().apply_index(t)], class[r.pi2().apply_index(t)]);
                if i != j {
                    let (lo, hi) = (i.min(j), i.max(j));
                    class.iter_mut().filter(|c| **c == hi).for_each(|c| *c = lo);
                    changed = true;
                }
            }
        }
        class.sort_unstable();
        class.dedup();
        ensure(class.len() == n && iso.forward().is_iso() && iso.forward().cod().len() == n, || format!("|X| = {n}"))?;
    }
    Ok("|X| = 0..=4".into())
}

fn equalizer_size(functor: &dyn ContravariantFunctor, fork: &SplitFork) -> usize {
    let (p1, p2) = (functor.arr(&fork.p1).unwrap(), functor.arr(&fork.p2).unwrap());
    (0..p1.dom().len()).filter(|&s| p1.apply_index(s) == p2.apply_index(s)).count()
}

fn c5() -> Outcome {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let presheaves: Vec<Presheaf> = (0..4).map(|_| random_presheaf(&s, rng.random(), 3).unwrap()).collect();
    for case in 0..500 {
        let fork = random_split_fork(&mut rng, 4).map_err(|e| e.to_string())?;
        let functor: Box<dyn ContravariantFunctor> = if case % 2 == 0 {
            Box::new(HomInto(FinSet::canonical(rng.random_range(0..=3))))
        } else {
            Box::new(PresheafFunctor(presheaves[rng.random_range(0..4)].clone()))
        };
        let out = key_lemma_check(&fork, functor.as_ref()).map_err(|e| e.to_string())?;
        let fa = functor.obj(&fork.a).unwrap().len();
        ensure(out.holds && equalizer_size(functor.as_ref(), &fork) == fa, || format!("random case {case}"))?;
    }
    let mut surjections = 0;
    for a in 0..=3 {
        for b in 0..=3 {
            for f in all_maps(&FinSet::canonical(a), &FinSet::canonical(b)).filter(FinMap::is_epi) {
                surjections += 1;
                let fork = fork_from_surjection(&f).map_err(|e| e.to_string())?;
                for t in 0..=2 {
                    let functor = HomInto(FinSet::canonical(t));
                    let holds = key_lemma_check(&fork, &functor).unwrap().holds;
                    let fa = functor.obj(&fork.a).unwrap().len();
                    ensure(holds && equalizer_size(&functor, &fork) == fa, || format!("surjection {:?}", f.table()))?;
                }
            }
        }
    }
    Ok(format!("500 random forks, {surjections} surjection forks"))
}

fn inverse_pair(iso: &NatIso) -> bool {
    iso.forward().then(iso.backward()).map(|t| t.components().iter().all(FinMap::is_identity)).unwrap_or(false)
        && iso.backward().then(iso.forward()).map(|t| t.components().iter().all(FinMap::is_identity)).unwrap_or(false)
}

fn c6() -> Outcome {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..50 {
        let seed = rng.random();
        let f = sheafification_oracle(&random_presheaf(&s, seed, 3).unwrap()).unwrap();
        ensure(check_times(&f).passed() && check_star(&f).passed(), || format!("case {case}: not condensed"))?;
        let ch = roundtrip_ch(&f).map_err(|e| format!("case {case}: {e}"))?;
        let bt = roundtrip_beta(&restrict(&f).unwrap()).map_err(|e| format!("case {case}: {e}"))?;
        ensure(inverse_pair(&ch) && inverse_pair(&bt), || format!("case {case}: isos do not invert"))?;
    }
    Ok("50 presheaves".into())
}

fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

fn c7() -> Outcome {
    let counts: Vec<usize> = (0..=4).map(|n| partitions(&FinSet::canonical(n)).unwrap().len()).collect();
    let expected: Vec<usize> = (0..=4).map(|n| bell(n) + usize::from(n == 0)).collect();
    ensure(counts == expected, || format!("partition counts {counts:?}"))?;
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..100 {
        let f = random_presheaf(&s, rng.random(), 3).unwrap();
        let g = restrict(&f).unwrap();
        ensure(check_plus_times(&g).unwrap().passed(), || format!("case {case}: products"))?;
        let p = plus(&g).unwrap();
        for n in 0..=4 {
            // ∏_{x ∈ S} G(β{x}), computed from the value at a point.
            let closed = f.value(1).len().pow(n as u32);
            let leg = p.colimits[n].legs.last().unwrap();
            ensure(p.presheaf.inner().value(n).len() == closed && leg.is_iso(), || format!("case {case}, |S| = {n}"))?;
        }
    }
    Ok("counts 1,1,2,5,15 (+ empty covering), 100 presheaves".into())
}

fn c8() -> Outcome {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..100 {
        let f = random_presheaf(&s, rng.random(), 3).unwrap();
        let sh = sharp(&f).map_err(|e| format!("case {case}: {e}"))?;
        let iso = sharp_oracle_iso(&f, &sh).map_err(|e| format!("case {case}: {e}"))?;
        ensure(inverse_pair(&iso), || format!("case {case}: oracle iso does not invert"))?;
        let k = f.value(1).len();
        let sizes = (0..=4).all(|n| sh.presheaf.value(n).len() == k.pow(n as u32));
        let condensed = check_times(&sh.presheaf).passed() && check_star(&sh.presheaf).passed();
        ensure(sizes && condensed, || format!("case {case}"))?;
    }
    Ok("100 presheaves".into())
}

fn c9() -> Outcome {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..20 {
        let f = random_presheaf(&s, rng.random(), 3).unwrap();
        let g = product_presheaf(&s, &FinSet::canonical(rng.random_range(1..=3))).unwrap();
        let phi = NatTrans::find_random(&f, &g, &[], &mut rng)
            .unwrap()
            .ok_or_else(|| format!("case {case}: no map F → G"))?;
        let p = plus(&restrict(&f).unwrap()).unwrap();
        let mut pins = Vec::new();
        for n in 0..=4 {
            for x in 0..f.value(n).len() {
                pins.push((n, p.eta.component(n).apply_index(x), phi.component(n).apply_index(x)));
            }
        }
        let count = NatTrans::count(p.presheaf.inner(), &g, &pins).unwrap();
        ensure(count == 1, || format!("case {case}: {count} factorizations"))?;
    }
    Ok("20 triples".into())
}

fn c10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_condensed");
    let run = || Command::new(bin).args(["verify", "--suite", "all", "--seed", "0"]).output();
    let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
    ensure(a.status.code() == Some(0) && b.status.code() == Some(0), || {
        format!("exit codes {:?}, {:?}", a.status.code(), b.status.code())
    })?;
    ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || "reports differ".into())?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "ultrafilters are principal", c1, Some(5)),
        (2, "unit and counit identities", c2, Some(10)),
        (3, "β preserves coproducts; spec of power sets", c3, None),
        (4, "resolutions coequalize", c4, None),
        (5, "split forks go to equalizers", c5, Some(30)),
        (6, "restriction/extension round trips", c6, None),
        (7, "plus construction preserves products", c7, None),
        (8, "sharp agrees with the oracle", c8, Some(60)),
        (9, "unique factorization through the unit", c9, None),
        (10, "verify reports are deterministic", c10, None),
    ];
    let mut failures = 0;
    for (n, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > Duration::from_secs(l));
        let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {l} s"));
        match outcome {
            Ok(detail) if !over => {
                println!("PASS {n:>2} {name}: {detail} [exact; {:.2} s, {limit_text}]", elapsed.as_secs_f64())
            }
            Ok(detail) => {
                failures += 1;
                println!("FAIL {n:>2} {name}: {detail} [over time: {:.2} s, {limit_text}]", elapsed.as_secs_f64())
            }
            Err(why) => {
                failures += 1;
                println!("FAIL {n:>2} {name}: {why} [{:.2} s, {limit_text}]", elapsed.as_secs_f64())
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
