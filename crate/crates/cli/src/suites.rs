//! Verification suites run by `condensed verify`.

use condensed::descent::{
    fork_from_surjection, key_lemma_check, random_split_fork, restrict, roundtrip_beta, roundtrip_ch,
    star_preservation_check, ContravariantFunctor, HomInto, PresheafFunctor,
};
use condensed::finset::{all_maps, compose, FinMap, FinSet};
use condensed::plus::{check_plus_times, partitions, plus, sharp, sharp_oracle_iso, sheafification_oracle};
use condensed::presheaf::{
    check_star, check_times, product_presheaf, random_presheaf, representable, NatTrans, Presheaf, COFINALITY_NOTE,
};
use condensed::resolution::{resolution_coproduct, resolution_map, standard_resolution};
use condensed::site::Site;
use condensed::stone::{
    beta, beta_coproduct_iso, beta_map, enumerate_ultrafilters, powerset_algebra, spec, BetaConfig,
};
use condensed::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Verdict;

#[derive(Clone, Copy, Debug)]
pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    /// Default number of random cases, for randomized suites.
    pub default_cases: Option<usize>,
    run: fn(u64, usize) -> Verdict,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "ultrafilters",
        description: "every ultrafilter on a set of size at most 4 is principal",
        default_cases: None,
        run: |_, _| ultrafilters(),
    },
    Suite {
        name: "beta-naturality",
        description: "β is a functor and ι, ξ are natural, on all maps between sets of size at most 3",
        default_cases: None,
        run: |_, _| beta_naturality(),
    },
    Suite {
        name: "beta-coproducts",
        description: "β(S ⊔ T) ≅ βS ⊔ βT for |S|, |T| ≤ 2 and spec P(S) has |S| points",
        default_cases: None,
        run: |_, _| beta_coproducts(),
    },
    Suite {
        name: "resolution-coequalizer",
        description: "standard resolutions coequalize to X, preserve surjections and small coproducts",
        default_cases: None,
        run: |_, _| resolution_coequalizer(),
    },
    Suite {
        name: "key-lemma",
        description: "functors send split forks to equalizers",
        default_cases: Some(500),
        run: key_lemma,
    },
    Suite {
        name: "descent",
        description:
            "representables and random presheaves satisfy descent; product presheaves have |F(X)| = |F(1)|^|X|",
        default_cases: Some(50),
        run: descent,
    },
    Suite {
        name: "round-trips",
        description: "ex∘res ≅ id on condensed presheaves and res∘ex ≅ id",
        default_cases: Some(50),
        run: round_trips,
    },
    Suite {
        name: "plus-products",
        description: "G⁺ preserves products, matches the discrete-partition closed form; partition counts",
        default_cases: Some(100),
        run: plus_products,
    },
    Suite {
        name: "sharp-oracle",
        description: "sharp(F) is naturally isomorphic to ∏_x F(1) and is condensed",
        default_cases: Some(100),
        run: sharp_oracle,
    },
    Suite {
        name: "adjunction",
        description: "maps into product presheaves factor uniquely through the plus unit",
        default_cases: Some(20),
        run: adjunction,
    },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

impl Suite {
    pub fn run(&self, seed: u64, cases: Option<usize>) -> Verdict {
        let mut v = (self.run)(seed, cases.or(self.default_cases).unwrap_or(0));
        v.name = self.name.to_string();
        v
    }
}

fn site() -> Site {
    Site::new(4, 2).expect("the (4, 2) site is valid")
}

/// Runs `body` and turns an error into a failed verdict.
fn guard(v: &mut Verdict, context: impl FnOnce() -> String, body: impl FnOnce(&mut Verdict) -> Result<()>) {
    if let Err(e) = body(v) {
        v.fail(format!("{}: {e}", context()));
    }
}

fn ultrafilters() -> Verdict {
    let mut v = Verdict::new("");
    for n in 0..=4 {
        guard(
            &mut v,
            || format!("size {n}"),
            |v| {
                let us = enumerate_ultrafilters(&FinSet::canonical(n), &BetaConfig::default())?;
                let principal = us.iter().filter(|u| u.is_principal()).count();
                v.require(us.len() == n && principal == n, || {
                    format!("size {n}: {} ultrafilters, {principal} principal", us.len())
                });
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

fn beta_naturality() -> Verdict {
    let mut v = Verdict::new("");
    guard(
        &mut v,
        || "setup".into(),
        |v| {
            let sets: Vec<FinSet> = (0..=3).map(FinSet::canonical).collect();
            let betas = sets.iter().map(|s| beta(s, &BetaConfig::default())).collect::<Result<Vec<_>>>()?;
            for (a, x) in sets.iter().enumerate() {
                v.require(beta_map(&FinMap::identity(x), &betas[a], &betas[a])?.is_identity(), || {
                    format!("β(id_{a}) is not the identity")
                });
                for (b, y) in sets.iter().enumerate() {
                    for f in all_maps(x, y) {
                        v.cases += 1;
                        let bf = beta_map(&f, &betas[a], &betas[b])?;
                        let witness = || format!("{a}->{b}:{:?}", f.table());
                        v.require(compose(&bf, betas[a].iota())? == compose(betas[b].iota(), &f)?, || {
                            format!("βf∘ι ≠ ι∘f at {}", witness())
                        });
                        v.require(compose(&f, betas[a].xi())? == compose(betas[b].xi(), &bf)?, || {
                            format!("f∘ξ ≠ ξ∘βf at {}", witness())
                        });
                        v.require(compose(&bf, betas[a].iota())?.is_epi() == f.is_epi(), || {
                            format!("dense image fails at {}", witness())
                        });
                        for (c, z) in sets.iter().enumerate() {
                            for g in all_maps(y, z) {
                                let lhs = beta_map(&compose(&g, &f)?, &betas[a], &betas[c])?;
                                let rhs = compose(&beta_map(&g, &betas[b], &betas[c])?, &bf)?;
                                v.require(lhs == rhs, || {
                                    format!("β(g∘f) ≠ βg∘βf at {} then {:?}", witness(), g.table())
                                });
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    );
    v
}

fn beta_coproducts() -> Verdict {
    let mut v = Verdict::new("");
    for a in 0..=2 {
        for b in 0..=2 {
            guard(
                &mut v,
                || format!("|S| = {a}, |T| = {b}"),
                |v| {
                    let iso = beta_coproduct_iso(&FinSet::canonical(a), &FinSet::canonical(b), &BetaConfig::default())?;
                    let round = compose(iso.backward(), iso.forward())?.is_identity()
                        && compose(iso.forward(), iso.backward())?.is_identity();
                    v.require(round, || format!("|S| = {a}, |T| = {b}: iso does not round-trip"));
                    v.cases += 1;
                    Ok(())
                },
            );
        }
    }
    for n in 0..=4 {
        guard(
            &mut v,
            || format!("spec P({n})"),
            |v| {
                let points = spec(&powerset_algebra(&FinSet::canonical(n), &BetaConfig::default())?)?.len();
                v.require(points == n, || format!("spec P({n}) has {points} points"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

fn resolution_coequalizer() -> Verdict {
    let mut v = Verdict::new("");
    for n in 0..=4 {
        guard(
            &mut v,
            || format!("|X| = {n}"),
            |v| {
                let iso = standard_resolution(&FinSet::canonical(n))?.verify_coequalizer()?;
                v.require(iso.forward().cod().len() == n, || format!("|X| = {n}: wrong coequalizer"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    for a in 0..=3 {
        for b in 0..=3 {
            guard(
                &mut v,
                || format!("surjections {a}->{b}"),
                |v| {
                    for f in all_maps(&FinSet::canonical(a), &FinSet::canonical(b)).filter(FinMap::is_epi) {
                        let rm = resolution_map(&f)?;
                        v.require(rm.mid.is_epi() && rm.tilde.is_epi() && rm.top.is_epi(), || {
                            format!("{a}->{b}:{:?} does not induce surjections", f.table())
                        });
                        v.cases += 1;
                    }
                    Ok(())
                },
            );
        }
    }
    for a in 0..=2 {
        for b in 0..=2 {
            guard(
                &mut v,
                || format!("resolution of {a} ⊔ {b}"),
                |v| {
                    resolution_coproduct(&FinSet::canonical(a), &FinSet::canonical(b))?;
                    v.cases += 1;
                    Ok(())
                },
            );
        }
    }
    v
}

fn key_lemma(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = site();
    let presheaves: Vec<Presheaf> = match (0..4).map(|_| random_presheaf(&s, rng.random(), 3)).collect() {
        Ok(p) => p,
        Err(e) => {
            v.fail(format!("setup: {e}"));
            return v;
        }
    };
    for case in 0..cases {
        guard(
            &mut v,
            || format!("case {case}"),
            |v| {
                let fork = random_split_fork(&mut rng, 4)?;
                let functor: Box<dyn ContravariantFunctor> = if rng.random_bool(0.5) {
                    Box::new(HomInto(FinSet::canonical(rng.random_range(0..=3))))
                } else {
                    Box::new(PresheafFunctor(presheaves[rng.random_range(0..presheaves.len())].clone()))
                };
                v.require(key_lemma_check(&fork, functor.as_ref())?.holds, || format!("case {case}: not an equalizer"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    for a in 0..=3 {
        for b in 0..=3 {
            for f in all_maps(&FinSet::canonical(a), &FinSet::canonical(b)).filter(FinMap::is_epi) {
                guard(
                    &mut v,
                    || format!("surjection {a}->{b}:{:?}", f.table()),
                    |v| {
                        let fork = fork_from_surjection(&f)?;
                        for t in 0..=2 {
                            v.require(key_lemma_check(&fork, &HomInto(FinSet::canonical(t)))?.holds, || {
                                format!("surjection {a}->{b}:{:?} with T = {t}", f.table())
                            });
                        }
                        v.cases += 1;
                        Ok(())
                    },
                );
            }
        }
    }
    v
}

fn descent(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("").note(COFINALITY_NOTE);
    let s = site();
    for t in 0..=4 {
        guard(
            &mut v,
            || format!("representable {t}"),
            |v| {
                let r = representable(&s, t)?;
                v.require(check_star(&r).passed() && check_times(&r).passed(), || format!("representable {t} fails"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let ps = rng.random::<u64>();
        guard(
            &mut v,
            || format!("case {case} (presheaf seed {ps})"),
            |v| {
                let f = random_presheaf(&s, ps, 3)?;
                let report = check_star(&f);
                v.require(report.passed(), || format!("presheaf seed {ps}: {report}"));
                if check_times(&f).passed() {
                    let k = f.value(1).len();
                    v.require((0..=4).all(|n| f.value(n).len() == k.pow(n as u32)), || {
                        format!("presheaf seed {ps}: sizes are not powers of |F(1)|")
                    });
                }
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

fn round_trips(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("");
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let ps = rng.random::<u64>();
        guard(
            &mut v,
            || format!("case {case} (presheaf seed {ps})"),
            |v| {
                let f = sheafification_oracle(&random_presheaf(&s, ps, 3)?)?;
                roundtrip_ch(&f)?;
                let g = restrict(&f)?;
                roundtrip_beta(&g)?;
                let report = star_preservation_check(&g)?;
                v.require(report.passed(), || format!("presheaf seed {ps}: {report}"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

fn plus_products(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("");
    let expected = [2, 1, 2, 5, 15];
    for (n, &e) in expected.iter().enumerate() {
        guard(
            &mut v,
            || format!("partitions of {n}"),
            |v| {
                let count = partitions(&FinSet::canonical(n))?.len();
                v.require(count == e, || format!("{count} partitions of a {n}-set"));
                Ok(())
            },
        );
    }
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let ps = rng.random::<u64>();
        guard(
            &mut v,
            || format!("case {case} (presheaf seed {ps})"),
            |v| {
                let f = random_presheaf(&s, ps, 3)?;
                let g = restrict(&f)?;
                let report = check_plus_times(&g)?;
                v.require(report.passed(), || format!("presheaf seed {ps}: {report}"));
                let p = plus(&g)?;
                let k = f.value(1).len();
                for n in 0..=4 {
                    let closed = p.colimits[n].legs.last().is_some_and(FinMap::is_iso)
                        && p.presheaf.inner().value(n).len() == k.pow(n as u32);
                    v.require(closed, || format!("presheaf seed {ps}: closed form fails at {n}"));
                }
                v.require(p.eta.is_iso() == check_times(&f).passed(), || {
                    format!("presheaf seed {ps}: unit invertibility disagrees with the product check")
                });
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

fn sharp_oracle(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("");
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let ps = rng.random::<u64>();
        guard(
            &mut v,
            || format!("case {case} (presheaf seed {ps})"),
            |v| {
                let f = random_presheaf(&s, ps, 3)?;
                let sh = sharp(&f)?;
                sharp_oracle_iso(&f, &sh)?;
                v.require(check_times(&sh.presheaf).passed() && check_star(&sh.presheaf).passed(), || {
                    format!("presheaf seed {ps}: sharp(F) is not condensed")
                });
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}

/// Number of `ψ : F⁺ → G` with `ψ∘η = φ`.
pub fn count_factorizations(f: &Presheaf, g: &Presheaf, phi: &NatTrans) -> Result<usize> {
    let p = plus(&restrict(f)?)?;
    let mut pins = Vec::new();
    for n in 0..=f.site().max_card() {
        for s in 0..f.value(n).len() {
            pins.push((n, p.eta.component(n).apply_index(s), phi.component(n).apply_index(s)));
        }
    }
    NatTrans::count(p.presheaf.inner(), g, &pins)
}

fn adjunction(seed: u64, cases: usize) -> Verdict {
    let mut v = Verdict::new("").note("exhaustive search at desk scale; evidence for adjointness, not a proof");
    let s = site();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let ps = rng.random::<u64>();
        let k = rng.random_range(1..=3);
        guard(
            &mut v,
            || format!("case {case} (presheaf seed {ps}, |G(1)| = {k})"),
            |v| {
                let f = random_presheaf(&s, ps, 3)?;
                let g = product_presheaf(&s, &FinSet::canonical(k))?;
                // G(1) is nonempty, so some map F → G exists.
                let Some(phi) = NatTrans::find_random(&f, &g, &[], &mut rng)? else {
                    v.fail(format!("presheaf seed {ps}, |G(1)| = {k}: no map F → G found"));
                    return Ok(());
                };
                let n = count_factorizations(&f, &g, &phi)?;
                v.require(n == 1, || format!("presheaf seed {ps}, |G(1)| = {k}: {n} factorizations"));
                v.cases += 1;
                Ok(())
            },
        );
    }
    v
}
