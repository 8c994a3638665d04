use condensed::finset::{self, all_maps, compose, FinMap, FinSet};
use condensed::resolution::{
    resolution_coproduct, resolution_map, split_epi_section, standard_resolution, WeakFiberProduct,
};
use condensed::stone::{
    beta, beta_any, beta_coproduct_iso, beta_map, enumerate_ultrafilters, powerset_algebra, recover_bijection, spec,
    spec_to_beta, BetaConfig,
};
use proptest::prelude::*;

/// Ultrafilters on `{0..n}` counted directly from the axioms, with subsets
/// written out as element lists. Returns `(count, principal count)`.
fn oracle_ultrafilters(n: usize) -> (usize, usize) {
    let subsets: Vec<Vec<usize>> = (0..1usize << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
    let index = |s: &[usize]| subsets.iter().position(|t| t.as_slice() == s).unwrap();
    let inter = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().copied().filter(|x| b.contains(x)).collect() };
    let compl = |a: &[usize]| -> Vec<usize> { (0..n).filter(|x| !a.contains(x)).collect() };
    let subset_of = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let (mut total, mut principal) = (0, 0);
    for fam in 0u64..1u64 << subsets.len() {
        let has = |s: &[usize]| fam >> index(s) & 1 == 1;
        if has(&[]) || !has(&compl(&[])) {
            continue;
        }
        let ok = subsets.iter().all(|a| {
            (has(a) || has(&compl(a)))
                && subsets
                    .iter()
                    .all(|b| (!has(a) || !has(b) || has(&inter(a, b))) && (!has(a) || !subset_of(a, b) || has(b)))
        });
        if ok {
            total += 1;
            if (0..n).any(|x| subsets.iter().all(|s| has(s) == s.contains(&x))) {
                principal += 1;
            }
        }
    }
    (total, principal)
}

fn cfg() -> BetaConfig {
    BetaConfig::default()
}

#[test]
fn ultrafilter_counts_match_the_axiomatic_oracle() {
    for n in 0..=3 {
        let us = enumerate_ultrafilters(&FinSet::canonical(n), &cfg()).unwrap();
        let (total, principal) = oracle_ultrafilters(n);
        assert_eq!((us.len(), us.iter().filter(|u| u.is_principal()).count()), (total, principal), "n = {n}");
        assert_eq!(total, n);
    }
    let us = enumerate_ultrafilters(&FinSet::canonical(4), &cfg()).unwrap();
    assert_eq!(us.len(), 4);
    assert!(us.iter().all(|u| u.is_principal()));
}

#[test]
fn beta_is_functorial_on_small_sets() {
    let sets: Vec<FinSet> = (0..=3).map(FinSet::canonical).collect();
    let betas: Vec<_> = sets.iter().map(|s| beta(s, &cfg()).unwrap()).collect();
    for (a, x) in sets.iter().enumerate() {
        assert!(beta_map(&FinMap::identity(x), &betas[a], &betas[a]).unwrap().is_identity());
        for (b, y) in sets.iter().enumerate() {
            for (c, z) in sets.iter().enumerate() {
                for f in all_maps(x, y) {
                    let bf = beta_map(&f, &betas[a], &betas[b]).unwrap();
                    for g in all_maps(y, z) {
                        let bg = beta_map(&g, &betas[b], &betas[c]).unwrap();
                        let bgf = beta_map(&compose(&g, &f).unwrap(), &betas[a], &betas[c]).unwrap();
                        assert_eq!(bgf, compose(&bg, &bf).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn unit_and_counit_are_natural_on_small_sets() {
    let sets: Vec<FinSet> = (0..=3).map(FinSet::canonical).collect();
    let betas: Vec<_> = sets.iter().map(|s| beta(s, &cfg()).unwrap()).collect();
    for (a, x) in sets.iter().enumerate() {
        for (b, y) in sets.iter().enumerate() {
            for f in all_maps(x, y) {
                let bf = beta_map(&f, &betas[a], &betas[b]).unwrap();
                assert_eq!(compose(&bf, betas[a].iota()).unwrap(), compose(betas[b].iota(), &f).unwrap());
                assert_eq!(compose(&f, betas[a].xi()).unwrap(), compose(betas[b].xi(), &bf).unwrap());
                // Dense image, finite form.
                assert_eq!(compose(&bf, betas[a].iota()).unwrap().is_epi(), f.is_epi());
            }
        }
    }
}

#[test]
fn beta_preserves_small_coproducts() {
    for a in 0..=2 {
        for b in 0..=2 {
            let (s, t) = (FinSet::canonical(a), FinSet::canonical(b));
            let iso = beta_coproduct_iso(&s, &t, &cfg()).unwrap();
            assert!(compose(iso.backward(), iso.forward()).unwrap().is_identity());
            assert!(compose(iso.forward(), iso.backward()).unwrap().is_identity());
            assert_eq!(iso.forward().dom().len(), a + b);
        }
    }
}

#[test]
fn spectrum_of_powerset_is_beta() {
    for n in 0..=3 {
        let s = FinSet::canonical(n);
        assert_eq!(spec(&powerset_algebra(&s, &cfg()).unwrap()).unwrap().len(), n);
        let iso = spec_to_beta(&s, &cfg()).unwrap();
        assert_eq!(iso.forward().cod(), beta(&s, &cfg()).unwrap().carrier());
    }
}

#[test]
fn every_iso_of_beta_sets_comes_from_a_bijection() {
    for n in 0..=3 {
        let s = FinSet::canonical(n);
        let bs = beta(&s, &cfg()).unwrap();
        for f in all_maps(&s, &s).filter(FinMap::is_iso) {
            let iso = finset::Iso::from_bijection(beta_map(&f, &bs, &bs).unwrap()).unwrap();
            assert_eq!(recover_bijection(&iso, &bs, &bs).unwrap().forward(), &f);
        }
    }
}

#[test]
fn resolution_coequalizer_recovers_the_set() {
    for n in 0..=4 {
        let r = standard_resolution(&FinSet::canonical(n)).unwrap();
        let iso = r.verify_coequalizer().unwrap();
        assert_eq!(iso.forward().cod().len(), n);
        let coeq = finset::coequalizer(r.pi1(), r.pi2()).unwrap();
        assert_eq!(coeq.apex.len(), n);
    }
}

#[test]
fn surjections_induce_surjections_at_every_level() {
    for a in 0..=3 {
        for b in 0..=3 {
            for f in all_maps(&FinSet::canonical(a), &FinSet::canonical(b)).filter(FinMap::is_epi) {
                let rm = resolution_map(&f).unwrap();
                assert!(rm.mid.is_epi() && rm.tilde.is_epi() && rm.top.is_epi(), "{:?}", f.table());
            }
        }
    }
}

#[test]
fn resolutions_of_small_coproducts_split() {
    for a in 0..=2 {
        for b in 0..=2 {
            let rc = resolution_coproduct(&FinSet::canonical(a), &FinSet::canonical(b)).unwrap();
            for iso in [&rc.level0, &rc.level1, &rc.level2] {
                assert!(compose(iso.backward(), iso.forward()).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn weak_fiber_products_mediate_all_small_cones() {
    let bq: Vec<_> = (0..=2).map(|q| beta(&FinSet::canonical(q), &cfg()).unwrap()).collect();
    for (a, b, c) in [(1, 1, 1), (2, 2, 1), (2, 1, 2), (2, 2, 2), (0, 2, 2)] {
        let (ba, bb, bc) = (
            beta(&FinSet::canonical(a), &cfg()).unwrap(),
            beta(&FinSet::canonical(b), &cfg()).unwrap(),
            beta(&FinSet::canonical(c), &cfg()).unwrap(),
        );
        for t1 in all_maps(ba.carrier(), bc.carrier()) {
            for t2 in all_maps(bb.carrier(), bc.carrier()) {
                let wfp = WeakFiberProduct::new(&t1, &t2).unwrap();
                for beta_q in &bq {
                    for q1 in all_maps(beta_q.carrier(), ba.carrier()) {
                        for q2 in all_maps(beta_q.carrier(), bb.carrier()) {
                            let commutes = compose(&t1, &q1).unwrap() == compose(&t2, &q2).unwrap();
                            match wfp.mediate(&q1, &q2, beta_q) {
                                Ok(m) => {
                                    assert!(commutes);
                                    assert_eq!(compose(wfp.proj1(), &m).unwrap(), q1);
                                    assert_eq!(compose(wfp.proj2(), &m).unwrap(), q2);
                                }
                                Err(_) => assert!(!commutes),
                            }
                        }
                    }
                }
            }
        }
    }
}

fn arb_epi() -> impl Strategy<Value = FinMap> {
    (1..=4usize, 0..=4usize).prop_flat_map(|(n, extra)| {
        // Every codomain point is hit by the first n entries, then shuffled.
        proptest::collection::vec(0..n, extra).prop_flat_map(move |tail| {
            let mut t: Vec<usize> = (0..n).collect();
            t.extend(tail);
            Just(t)
                .prop_shuffle()
                .prop_map(move |t| FinMap::from_indices(FinSet::canonical(t.len()), FinSet::canonical(n), t).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn split_epi_sections_are_sections(f in arb_epi()) {
        let bs = beta_any(f.dom(), &cfg()).unwrap();
        let bx = beta_any(f.cod(), &cfg()).unwrap();
        let bf = beta_map(&f, &bs, &bx).unwrap();
        let s = split_epi_section(&bf, &bx).unwrap();
        prop_assert!(compose(&bf, &s).unwrap().is_identity());
    }
}
