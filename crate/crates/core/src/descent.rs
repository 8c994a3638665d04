//! Split forks and the equalizer they induce under any contravariant functor;
//! restriction to β-sets and extension along standard resolutions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, ForkEquation, Result};
use crate::finset::{self, compose, Cone, FinMap, FinSet, Iso};
use crate::label::Label;
use crate::presheaf::{check_star, CheckReport, NatIso, NatTrans, Presheaf};
use crate::resolution::{Resolution, ResolutionMap};
use crate::site::{MapId, Site};
use crate::stone::{beta_any, beta_map, BetaConfig, BetaSet};

/// `C ⇉ B → A` with a section `g` of `f` and `k : B → C` splitting the pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitFork {
    pub a: FinSet,
    pub b: FinSet,
    pub c: FinSet,
    pub f: FinMap,
    pub g: FinMap,
    pub p1: FinMap,
    pub p2: FinMap,
    pub k: FinMap,
}

impl SplitFork {
    /// Checks the four fork equations in order and reports the first failure.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: FinSet,
        b: FinSet,
        c: FinSet,
        f: FinMap,
        g: FinMap,
        p1: FinMap,
        p2: FinMap,
        k: FinMap,
    ) -> Result<Self> {
        let typed = |m: &FinMap, d: &FinSet, e: &FinSet| m.dom() == d && m.cod() == e;
        if !(typed(&f, &b, &a) && typed(&g, &a, &b) && typed(&p1, &c, &b) && typed(&p2, &c, &b) && typed(&k, &b, &c)) {
            return Err(Error::NonComposable);
        }
        if compose(&f, &p1)? != compose(&f, &p2)? {
            return Err(Error::ForkLawViolation(ForkEquation::Coequalizes));
        }
        if !compose(&f, &g)?.is_identity() {
            return Err(Error::ForkLawViolation(ForkEquation::Section));
        }
        if !compose(&p1, &k)?.is_identity() {
            return Err(Error::ForkLawViolation(ForkEquation::FirstRetraction));
        }
        if compose(&p2, &k)? != compose(&g, &f)? {
            return Err(Error::ForkLawViolation(ForkEquation::SecondRetraction));
        }
        Ok(SplitFork { a, b, c, f, g, p1, p2, k })
    }
}

/// A contravariant functor defined on (some) finite sets.
pub trait ContravariantFunctor {
    fn obj(&self, x: &FinSet) -> Result<FinSet>;
    /// `F(f) : F(cod f) → F(dom f)`.
    fn arr(&self, f: &FinMap) -> Result<FinMap>;
}

/// `X ↦ Hom(X, T)`; a map is labelled by the tuple of its values.
#[derive(Clone, Debug)]
pub struct HomInto(pub FinSet);

impl ContravariantFunctor for HomInto {
    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        let t = &self.0;
        FinSet::new(finset::all_maps(x, t).map(|h| Label::tuple(h.table().iter().map(|&j| t.get(j).clone()).collect())))
    }

    fn arr(&self, f: &FinMap) -> Result<FinMap> {
        let (src, dst) = (self.obj(f.cod())?, self.obj(f.dom())?);
        let table = src
            .iter()
            .map(|s| {
                let vals = s.as_tuple().unwrap_or_default();
                let pulled = Label::tuple(f.table().iter().map(|&j| vals[j].clone()).collect());
                dst.index_of(&pulled).ok_or(Error::NonComposable)
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(src, dst, table)
    }
}

/// A site presheaf applied to arbitrary sets through their cardinality.
#[derive(Clone, Debug)]
pub struct PresheafFunctor(pub Presheaf);

impl ContravariantFunctor for PresheafFunctor {
    fn obj(&self, x: &FinSet) -> Result<FinSet> {
        let m = self.0.site().max_card();
        if x.len() > m {
            return Err(Error::SizeBoundExceeded { what: "site object", size: x.len(), bound: m });
        }
        Ok(self.0.value(x.len()).clone())
    }

    fn arr(&self, f: &FinMap) -> Result<FinMap> {
        self.0.act(f).cloned()
    }
}

#[derive(Clone, Debug)]
pub struct KeyLemmaOutcome {
    /// `eq(F(p1), F(p2)) ⊆ F(B)`.
    pub equalizer: Cone,
    /// `F(A) ≅ eq` through `F(f)`, when it is one.
    pub iso: Option<Iso>,
    pub holds: bool,
}

/// Applies `F` to the fork and compares `F(A)` with the equalizer of `F(p1), F(p2)`.
pub fn key_lemma_check(fork: &SplitFork, functor: &dyn ContravariantFunctor) -> Result<KeyLemmaOutcome> {
    let (fp1, fp2) = (functor.arr(&fork.p1)?, functor.arr(&fork.p2)?);
    let equalizer = finset::equalizer(&fp1, &fp2)?;
    let ff = functor.arr(&fork.f)?;
    let iso = finset::factor_through_mono(&ff, &equalizer.legs[0]).and_then(|u| Iso::from_bijection(u).ok());
    let holds = iso.is_some();
    Ok(KeyLemmaOutcome { equalizer, iso, holds })
}

/// A random split fork with every carrier of size at most `max`.
///
/// `f` is a random surjection with a random section `g`; `C` consists of the
/// pairs `(y, g f y)` plus, while room remains, random extra copies of pairs
/// from the kernel pair of `f`.
pub fn random_split_fork(rng: &mut impl Rng, max: usize) -> Result<SplitFork> {
    let nb = rng.random_range(0..=max);
    let na = if nb == 0 { 0 } else { rng.random_range(1..=nb) };
    let a = FinSet::new((0..na).map(|i| Label::name(&format!("a{i}"))))?;
    let b = FinSet::canonical(nb);
    let mut order: Vec<usize> = (0..nb).collect();
    order.shuffle(rng);
    let mut f_table = vec![0; nb];
    for (pos, &y) in order.iter().enumerate() {
        f_table[y] = if pos < na { pos } else { rng.random_range(0..na) };
    }
    let f = FinMap::from_indices(b.clone(), a.clone(), f_table.clone())?;
    let g_table: Vec<usize> = (0..na)
        .map(|x| {
            let fib = f.fiber(x);
            fib[rng.random_range(0..fib.len())]
        })
        .collect();
    let g = FinMap::from_indices(a.clone(), b.clone(), g_table.clone())?;
    let kernel: Vec<(usize, usize)> =
        (0..nb).flat_map(|y| (0..nb).map(move |z| (y, z))).filter(|&(y, z)| f_table[y] == f_table[z]).collect();
    let element = |y: usize, z: usize, copy: i64| {
        Label::tuple(vec![Label::int(y as i64), Label::int(z as i64), Label::int(copy)])
    };
    let mut c_labels: Vec<Label> = (0..nb).map(|y| element(y, g_table[f_table[y]], 0)).collect();
    let mut copies: HashMap<(usize, usize), i64> = HashMap::new();
    for y in 0..nb {
        copies.insert((y, g_table[f_table[y]]), 1);
    }
    while c_labels.len() < max && !kernel.is_empty() && rng.random_bool(0.6) {
        let (y, z) = kernel[rng.random_range(0..kernel.len())];
        let n = copies.entry((y, z)).or_insert(0);
        c_labels.push(element(y, z, *n));
        *n += 1;
    }
    let c = FinSet::new(c_labels)?;
    let coord = |l: &Label, i: usize| match l.as_tuple() {
        Some(t) => match t[i] {
            Label::Int(v) => v as usize,
            _ => unreachable!("fork elements are integer triples"),
        },
        None => unreachable!("fork elements are tuples"),
    };
    let p1 = FinMap::from_indices(c.clone(), b.clone(), c.iter().map(|l| coord(l, 0)).collect())?;
    let p2 = FinMap::from_indices(c.clone(), b.clone(), c.iter().map(|l| coord(l, 1)).collect())?;
    let k_table = (0..nb)
        .map(|y| c.index_of(&element(y, g_table[f_table[y]], 0)).ok_or(Error::NonComposable))
        .collect::<Result<Vec<_>>>()?;
    let k = FinMap::from_indices(b.clone(), c.clone(), k_table)?;
    SplitFork::new(a, b, c, f, g, p1, p2, k)
}

/// The least-preimage section of a surjection.
pub fn least_section(f: &FinMap) -> Result<FinMap> {
    if !f.is_epi() {
        return Err(Error::NotEpi);
    }
    let table = (0..f.cod().len()).map(|x| f.fiber(x)[0]).collect();
    FinMap::from_indices(f.cod().clone(), f.dom().clone(), table)
}

/// The fork `β(Y ×_X Y) ⇉ βY → βX` of a surjection `f0 : Y → X`, split by
/// `β` of the least-preimage section `s` and of `y ↦ (y, s f0 y)`.
pub fn fork_from_surjection(f0: &FinMap) -> Result<SplitFork> {
    let config = BetaConfig::default();
    let s0 = least_section(f0)?;
    let (bx, by) = (beta_any(f0.cod(), &config)?, beta_any(f0.dom(), &config)?);
    let kp = finset::fiber_product(f0, f0)?;
    let bc = beta_any(&kp.apex, &config)?;
    let sf = compose(&s0, f0)?;
    let k0_table = (0..f0.dom().len())
        .map(|y| {
            let pair = Label::pair(f0.dom().get(y).clone(), f0.dom().get(sf.apply_index(y)).clone());
            kp.apex.index_of(&pair).ok_or(Error::NonComposable)
        })
        .collect::<Result<Vec<_>>>()?;
    let k0 = FinMap::from_indices(f0.dom().clone(), kp.apex.clone(), k0_table)?;
    SplitFork::new(
        bx.carrier().clone(),
        by.carrier().clone(),
        bc.carrier().clone(),
        beta_map(f0, &by, &bx)?,
        beta_map(&s0, &bx, &by)?,
        beta_map(&kp.legs[0], &bc, &by)?,
        beta_map(&kp.legs[1], &bc, &by)?,
        beta_map(&k0, &by, &bc)?,
    )
}

/// Standard resolutions of every site object and resolution maps of every
/// site map.
#[derive(Debug)]
pub struct BetaSite {
    site: Site,
    resolutions: Vec<Resolution>,
    maps: HashMap<MapId, ResolutionMap>,
}

impl BetaSite {
    fn build(site: &Site) -> Result<Self> {
        let resolutions: Vec<Resolution> = site.objects().iter().map(Resolution::new).collect::<Result<_>>()?;
        let maps = site
            .map_ids()
            .map(|id| Ok((id, ResolutionMap::new(&resolutions[id.dom], &resolutions[id.cod], site.map(id))?)))
            .collect::<Result<_>>()?;
        Ok(BetaSite { site: site.clone(), resolutions, maps })
    }

    /// Shared per `(M, N)`; construction is deterministic.
    pub fn for_site(site: &Site) -> Result<Arc<BetaSite>> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<BetaSite>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let key = (site.max_card(), site.max_cover_size());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(b) = cache.lock().expect("cache lock").get(&key) {
            return Ok(b.clone());
        }
        let built = Arc::new(BetaSite::build(site)?);
        cache.lock().expect("cache lock").insert(key, built.clone());
        Ok(built)
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn resolution(&self, n: usize) -> &Resolution {
        &self.resolutions[n]
    }

    /// `β` of the canonical object `n`.
    pub fn beta(&self, n: usize) -> &BetaSet {
        self.resolutions[n].b()
    }

    pub fn resolution_map(&self, id: MapId) -> &ResolutionMap {
        &self.maps[&id]
    }
}

/// A presheaf on β-sets. Values and actions are stored by cardinality: the
/// value at `βS` is the stored value at `|βS|`, and a map `h : βA → βB` acts
/// through `ξ_B∘h∘ι_A`.
#[derive(Clone, Debug)]
pub struct BetaPresheaf {
    beta_site: Arc<BetaSite>,
    inner: Presheaf,
}

impl BetaPresheaf {
    pub fn new(inner: Presheaf) -> Result<Self> {
        Ok(BetaPresheaf { beta_site: BetaSite::for_site(inner.site())?, inner })
    }

    pub fn inner(&self) -> &Presheaf {
        &self.inner
    }

    pub fn beta_site(&self) -> &Arc<BetaSite> {
        &self.beta_site
    }

    pub fn value_at(&self, bs: &BetaSet) -> &FinSet {
        self.inner.value(bs.carrier().len())
    }

    /// `G(h) : G(βB) → G(βA)` for `h : βA → βB`; `h` must be `β` of a map.
    pub fn act(&self, h: &FinMap, dom: &BetaSet, cod: &BetaSet) -> Result<FinMap> {
        if h.dom() != dom.carrier() || h.cod() != cod.carrier() {
            return Err(Error::NonComposable);
        }
        let underlying = compose(cod.xi(), &compose(h, dom.iota())?)?;
        if beta_map(&underlying, dom, cod)? != *h {
            return Err(Error::Invariant("map of β-sets is not β of a map".into()));
        }
        self.inner.act(&underlying).cloned()
    }
}

/// `res F`: the value at `βS` is `F(βS)`, computed by carrying `βS` to the
/// site along `ξ`; on maps, `res F(βf) = F(ξ∘βf∘ι)`.
pub fn restrict(f: &Presheaf) -> Result<BetaPresheaf> {
    let bsite = BetaSite::for_site(f.site())?;
    let site = f.site();
    let values: Vec<FinSet> = (0..=site.max_card()).map(|n| f.value(bsite.beta(n).carrier().len()).clone()).collect();
    let inner = Presheaf::from_fn(site, values, |id| {
        let mid = &bsite.resolution_map(id).mid;
        let (ba, bb) = (bsite.beta(id.dom), bsite.beta(id.cod));
        let underlying = compose(bb.xi(), &compose(mid, ba.iota())?)?;
        f.act(&underlying).cloned()
    })?;
    Ok(BetaPresheaf { beta_site: bsite, inner })
}

/// `G(B(X)) ⇉ G(B²(X))` for one site object.
#[derive(Clone, Debug)]
pub struct ResolutionPresheafData {
    pub n: usize,
    pub gb: FinSet,
    pub gb2: FinSet,
    pub g_pi1: FinMap,
    pub g_pi2: FinMap,
}

pub fn resolution_data(g: &BetaPresheaf) -> Result<Vec<ResolutionPresheafData>> {
    (0..=g.inner.site().max_card())
        .map(|n| {
            let r = g.beta_site.resolution(n);
            let g_pi1 = g.act(r.pi1(), r.b2(), r.b())?;
            let g_pi2 = g.act(r.pi2(), r.b2(), r.b())?;
            Ok(ResolutionPresheafData {
                n,
                gb: g.value_at(r.b()).clone(),
                gb2: g.value_at(r.b2()).clone(),
                g_pi1,
                g_pi2,
            })
        })
        .collect()
}

/// `ex G`: `X ↦ eq(G(B(X)) ⇉ G(B²(X)))`, acting on maps through `Bf` and the
/// equalizer's universal property.
pub fn extend(g: &BetaPresheaf) -> Result<Presheaf> {
    let data = resolution_data(g)?;
    let site = g.inner.site();
    let eqs: Vec<Cone> = data
        .iter()
        .map(|d| {
            let r = g.beta_site.resolution(d.n);
            // ξ is bijective on finite sets, so B̃ is the diagonal and π1 = π2.
            if r.pi1() != r.pi2() || d.g_pi1 != d.g_pi2 {
                return Err(Error::Invariant(format!("π1 ≠ π2 at {}", d.n)));
            }
            finset::equalizer(&d.g_pi1, &d.g_pi2)
        })
        .collect::<Result<_>>()?;
    let values: Vec<FinSet> = eqs.iter().map(|e| e.apex.clone()).collect();
    Presheaf::from_fn(site, values, |id| {
        let rm = g.beta_site.resolution_map(id);
        let (ra, rb) = (g.beta_site.resolution(id.dom), g.beta_site.resolution(id.cod));
        let g_mid = g.act(&rm.mid, ra.b(), rb.b())?;
        let through = compose(&g_mid, &eqs[id.cod].legs[0])?;
        finset::factor_through_mono(&through, &eqs[id.dom].legs[0])
            .ok_or_else(|| Error::Invariant(format!("G(Bf) leaves the equalizer at {id}")))
    })
}

/// `ex η` for a transformation between the inner presheaves of two β-presheaves.
pub fn extend_nat(eta: &NatTrans, src: &BetaPresheaf, dst: &BetaPresheaf) -> Result<NatTrans> {
    let (ex_src, ex_dst) = (extend(src)?, extend(dst)?);
    extend_nat_between(eta, src, &ex_src, &ex_dst)
}

fn extend_nat_between(eta: &NatTrans, src: &BetaPresheaf, ex_src: &Presheaf, ex_dst: &Presheaf) -> Result<NatTrans> {
    let site = ex_src.site();
    let eq_src = incl_tables(src, ex_src)?;
    let components = (0..=site.max_card())
        .map(|n| {
            let bn = src.beta_site.resolution(n).b().carrier().len();
            let c = eta.component(bn);
            let table = eq_src[n]
                .iter()
                .map(|&s| {
                    let image = c.table()[s];
                    let label = c.cod().get(image);
                    ex_dst.value(n).index_of(label).ok_or_else(|| Error::Invariant("image leaves the equalizer".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            FinMap::from_indices(ex_src.value(n).clone(), ex_dst.value(n).clone(), table)
        })
        .collect::<Result<_>>()?;
    NatTrans::new(ex_src, ex_dst, components)
}

/// Index in `G(B(n))` of each element of `(ex G)(n)`.
fn incl_tables(g: &BetaPresheaf, ex: &Presheaf) -> Result<Vec<Vec<usize>>> {
    (0..=ex.site().max_card())
        .map(|n| {
            let gb = g.value_at(g.beta_site.resolution(n).b());
            ex.value(n)
                .iter()
                .map(|l| gb.index_of(l).ok_or_else(|| Error::Invariant("equalizer element not in G(B(X))".into())))
                .collect()
        })
        .collect()
}

/// `F → ex res F`, with component `F(ξ_X)` at `X`.
pub fn ex_res_unit(f: &Presheaf) -> Result<NatTrans> {
    let g = restrict(f)?;
    let ex = extend(&g)?;
    let site = f.site();
    let components = (0..=site.max_card())
        .map(|n| {
            let r = g.beta_site.resolution(n);
            let f_xi = f.act(r.xi())?;
            let into = FinMap::from_indices(f_xi.dom().clone(), g.value_at(r.b()).clone(), f_xi.table().to_vec())?;
            let incl = incl_map(&g, &ex, n)?;
            finset::factor_through_mono(&into, &incl)
                .ok_or_else(|| Error::Invariant(format!("F(ξ) misses the equalizer at {n}")))
        })
        .collect::<Result<_>>()?;
    NatTrans::new(f, &ex, components)
}

fn incl_map(g: &BetaPresheaf, ex: &Presheaf, n: usize) -> Result<FinMap> {
    let gb = g.value_at(g.beta_site.resolution(n).b()).clone();
    let table = ex
        .value(n)
        .iter()
        .map(|l| gb.index_of(l).ok_or_else(|| Error::Invariant("equalizer element not in G(B(X))".into())))
        .collect::<Result<Vec<_>>>()?;
    FinMap::from_indices(ex.value(n).clone(), gb, table)
}

/// `G ≅ res ex G`, with component `G(ξ_{βS})` at `βS`.
pub fn roundtrip_beta(g: &BetaPresheaf) -> Result<NatIso> {
    let ex = extend(g)?;
    let res_ex = restrict(&ex)?;
    let config = BetaConfig::default();
    let site = g.inner.site();
    let components = (0..=site.max_card())
        .map(|n| {
            let bs = g.beta_site.beta(n);
            // B(βS) = β|βS|, and ξ_{βS} : B(βS) → βS.
            let bbs = beta_any(bs.carrier(), &config)?;
            let g_xi = g.act(bbs.xi(), &bbs, bs)?;
            let target = res_ex.inner.value(n);
            let table = g_xi
                .table()
                .iter()
                .map(|&j| {
                    let label = g_xi.cod().get(j);
                    target.index_of(label).ok_or_else(|| Error::Invariant("G(ξ) leaves the equalizer".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            FinMap::from_indices(g.inner.value(n).clone(), target.clone(), table)
        })
        .collect::<Result<_>>()?;
    NatIso::from_natural_bijection(NatTrans::new(&g.inner, &res_ex.inner, components)?)
}

/// `F ≅ ex res F` for presheaves satisfying descent.
pub fn roundtrip_ch(f: &Presheaf) -> Result<NatIso> {
    if !check_star(f).passed() {
        return Err(Error::StarRequired);
    }
    NatIso::from_natural_bijection(ex_res_unit(f)?)
}

/// Runs the descent check on `ex G`.
pub fn star_preservation_check(g: &BetaPresheaf) -> Result<CheckReport> {
    Ok(check_star(&extend(g)?))
}
