use condensed::descent::{
    extend, fork_from_surjection, key_lemma_check, random_split_fork, restrict, roundtrip_beta, roundtrip_ch,
    star_preservation_check, ContravariantFunctor, HomInto, PresheafFunctor,
};
use condensed::finset::{all_maps, FinMap, FinSet};
use condensed::plus::{
    check_plus_times, common_refinement, partitions, plus, refinement_poset, sharp, sharp_oracle_iso,
    sheafification_oracle,
};
use condensed::presheaf::{
    check_star, check_times, constant, product_presheaf, random_presheaf, representable, NatTrans, Presheaf,
};
use condensed::site::Site;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn site() -> Site {
    Site::new(4, 2).unwrap()
}

/// `|F(A)|` against the equalizer of `F(p1), F(p2)` counted element by element.
fn equalizer_size(functor: &dyn ContravariantFunctor, fork: &condensed::descent::SplitFork) -> usize {
    let (fp1, fp2) = (functor.arr(&fork.p1).unwrap(), functor.arr(&fork.p2).unwrap());
    (0..fp1.dom().len()).filter(|&s| fp1.apply_index(s) == fp2.apply_index(s)).count()
}

#[test]
fn representables_and_constants() {
    let s = site();
    for t in 0..=4 {
        let r = representable(&s, t).unwrap();
        assert!(check_times(&r).passed(), "T = {t}");
        assert!(check_star(&r).passed(), "T = {t}");
        for n in 0..=4 {
            assert_eq!(r.value(n).len(), t.pow(n as u32));
        }
    }
    let pair = constant(&s, &FinSet::canonical(2)).unwrap();
    let report = check_times(&pair);
    assert!(!report.passed());
    assert!(report.witnesses.iter().any(|w| w.context == "F(0)"));
}

#[test]
fn random_presheaves_satisfy_descent_and_the_size_formula_when_products() {
    let s = site();
    for seed in 0..40 {
        let f = random_presheaf(&s, seed, 3).unwrap();
        assert!(f.max_value_size() <= 3);
        assert!(check_star(&f).passed(), "seed {seed}");
        if check_times(&f).passed() {
            let k = f.value(1).len();
            for n in 0..=4 {
                assert_eq!(f.value(n).len(), k.pow(n as u32), "seed {seed}");
            }
        }
    }
}

#[test]
fn key_lemma_on_random_forks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = site();
    let presheaves: Vec<Presheaf> = (0..5).map(|seed| random_presheaf(&s, seed, 3).unwrap()).collect();
    for case in 0..500 {
        let fork = random_split_fork(&mut rng, 4).unwrap();
        let functor: Box<dyn ContravariantFunctor> = if case % 2 == 0 {
            Box::new(HomInto(FinSet::canonical(rng.random_range(0..=3))))
        } else {
            Box::new(PresheafFunctor(presheaves[rng.random_range(0..presheaves.len())].clone()))
        };
        let outcome = key_lemma_check(&fork, functor.as_ref()).unwrap();
        assert!(outcome.holds, "case {case}");
        assert_eq!(equalizer_size(functor.as_ref(), &fork), functor.obj(&fork.a).unwrap().len());
    }
}

#[test]
fn key_lemma_on_forks_from_surjections() {
    for a in 0..=3 {
        for b in 0..=3 {
            for f in all_maps(&FinSet::canonical(a), &FinSet::canonical(b)).filter(FinMap::is_epi) {
                let fork = fork_from_surjection(&f).unwrap();
                for t in 0..=2 {
                    let functor = HomInto(FinSet::canonical(t));
                    assert!(key_lemma_check(&fork, &functor).unwrap().holds);
                    assert_eq!(equalizer_size(&functor, &fork), functor.obj(&fork.a).unwrap().len());
                }
            }
        }
    }
}

#[test]
fn round_trips_on_condensed_presheaves() {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..12 {
        let f = sheafification_oracle(&random_presheaf(&s, rng.random(), 3).unwrap()).unwrap();
        roundtrip_ch(&f).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let g = restrict(&f).unwrap();
        roundtrip_beta(&g).unwrap();
        assert!(star_preservation_check(&g).unwrap().passed());
        assert!(check_times(&extend(&g).unwrap()).passed());
    }
}

#[test]
fn partition_posets() {
    let counts: Vec<usize> = (0..=4).map(|n| partitions(&FinSet::canonical(n)).unwrap().len()).collect();
    // Bell numbers, plus the empty covering of ∅.
    assert_eq!(counts, vec![2, 1, 2, 5, 15]);
    for n in 0..=4 {
        let base = FinSet::canonical(n);
        let ps = partitions(&base).unwrap();
        let poset = refinement_poset(&base).unwrap();
        for u in &ps {
            for v in &ps {
                let (w, _, _) = common_refinement(u, v).unwrap();
                assert!(w.refines(u).is_some() && w.refines(v).is_some());
                // Greatest lower bound.
                for z in &ps {
                    if z.refines(u).is_some() && z.refines(v).is_some() {
                        assert!(z.refines(&w).is_some());
                    }
                }
            }
        }
        assert!(poset.iter().all(|(_, _, r)| r.block_map.len() == r.from.blocks().len()));
    }
}

#[test]
fn plus_is_a_product_presheaf_with_the_discrete_closed_form() {
    let s = site();
    for seed in 0..30 {
        let f = random_presheaf(&s, seed, 3).unwrap();
        let g = restrict(&f).unwrap();
        assert!(check_plus_times(&g).unwrap().passed(), "seed {seed}");
        let p = plus(&g).unwrap();
        let k = f.value(1).len();
        for n in 0..=4 {
            assert_eq!(p.presheaf.inner().value(n).len(), k.pow(n as u32));
            assert!(p.colimits[n].legs.last().unwrap().is_iso());
        }
        // The unit is invertible exactly for product presheaves.
        assert_eq!(p.eta.is_iso(), check_times(&f).passed(), "seed {seed}");
    }
}

#[test]
fn sharp_agrees_with_the_oracle() {
    let s = site();
    for seed in 100..120 {
        let f = random_presheaf(&s, seed, 3).unwrap();
        let sh = sharp(&f).unwrap();
        assert!(check_times(&sh.presheaf).passed() && check_star(&sh.presheaf).passed());
        sharp_oracle_iso(&f, &sh).unwrap();
    }
    let r = representable(&s, 2).unwrap();
    assert!(sharp(&r).unwrap().unit.is_iso());
}

/// The number of `ψ : F⁺ → G` with `ψ∘η = φ`.
fn factorizations(f: &Presheaf, g: &Presheaf, phi: &NatTrans) -> usize {
    let p = plus(&restrict(f).unwrap()).unwrap();
    let mut pins = Vec::new();
    for n in 0..=4 {
        for s in 0..f.value(n).len() {
            pins.push((n, p.eta.component(n).apply_index(s), phi.component(n).apply_index(s)));
        }
    }
    NatTrans::count(p.presheaf.inner(), g, &pins).unwrap()
}

#[test]
fn maps_into_product_presheaves_factor_uniquely_through_the_unit() {
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    while checked < 6 {
        let f = random_presheaf(&s, rng.random(), 3).unwrap();
        let g = product_presheaf(&s, &FinSet::canonical(rng.random_range(1..=3))).unwrap();
        let Some(phi) = NatTrans::find_random(&f, &g, &[], &mut rng).unwrap() else { continue };
        assert_eq!(factorizations(&f, &g, &phi), 1);
        checked += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_outputs_are_condensed(k in 0..=3usize) {
        let s = site();
        let f = product_presheaf(&s, &FinSet::canonical(k)).unwrap();
        prop_assert!(check_times(&f).passed());
        prop_assert!(check_star(&f).passed());
    }

    #[test]
    fn plus_twice_adds_nothing(seed in any::<u64>()) {
        let f = random_presheaf(&site(), seed, 3).unwrap();
        let p = plus(&restrict(&f).unwrap()).unwrap();
        prop_assert!(plus(&p.presheaf).unwrap().eta.is_iso());
    }
}
