//! Table-backed presheaves on a [`Site`], natural transformations, and the
//! two condensed-set conditions as checks.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finset::{self, FinMap, FinSet};
use crate::label::Label;
use crate::site::{MapId, Site};
use crate::union_find::UnionFind;

#[derive(Debug, PartialEq, Eq)]
struct PresheafInner {
    site: Site,
    values: Vec<FinSet>,
    /// `restrict[a][b][code]` is `F(f) : F(b) → F(a)` for the site map `f : a → b`.
    restrict: Vec<Vec<Vec<FinMap>>>,
}

/// A contravariant functor from the site to finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presheaf(Arc<PresheafInner>);

impl Presheaf {
    /// Validates shapes and both functor laws on every map and composable pair.
    pub fn new(site: &Site, values: Vec<FinSet>, restrict: Vec<Vec<Vec<FinMap>>>) -> Result<Self> {
        let m = site.max_card();
        if values.len() != m + 1 || restrict.len() != m + 1 {
            return Err(Error::FunctorLawViolation("value table does not cover every object".into()));
        }
        for a in 0..=m {
            if restrict[a].len() != m + 1 {
                return Err(Error::FunctorLawViolation(format!("restrictions out of {a} are incomplete")));
            }
            for b in 0..=m {
                if restrict[a][b].len() != site.hom(a, b).len() {
                    return Err(Error::FunctorLawViolation(format!("restrictions {a}->{b} are incomplete")));
                }
                for (code, r) in restrict[a][b].iter().enumerate() {
                    if r.dom() != &values[b] || r.cod() != &values[a] {
                        return Err(Error::FunctorLawViolation(format!(
                            "F({}) does not run F({b}) → F({a})",
                            MapId { dom: a, cod: b, code }
                        )));
                    }
                }
            }
        }
        let p = Presheaf(Arc::new(PresheafInner { site: site.clone(), values, restrict }));
        p.check_laws()?;
        Ok(p)
    }

    /// Skips functor-law validation; only for exercising checks on broken tables.
    #[cfg(test)]
    pub(crate) fn new_unchecked(site: &Site, values: Vec<FinSet>, restrict: Vec<Vec<Vec<FinMap>>>) -> Self {
        Presheaf(Arc::new(PresheafInner { site: site.clone(), values, restrict }))
    }

    /// Builds the tables from a function on site maps, then validates.
    pub fn from_fn(
        site: &Site,
        values: Vec<FinSet>,
        mut restrict: impl FnMut(MapId) -> Result<FinMap>,
    ) -> Result<Self> {
        let m = site.max_card();
        let mut tables = vec![vec![Vec::new(); m + 1]; m + 1];
        for id in site.map_ids() {
            tables[id.dom][id.cod].push(restrict(id)?);
        }
        Presheaf::new(site, values, tables)
    }

    fn check_laws(&self) -> Result<()> {
        let site = &self.0.site;
        let m = site.max_card();
        for n in 0..=m {
            let id = site.identity(n);
            if !self.restriction(id).is_identity() {
                return Err(Error::FunctorLawViolation(format!("F(id_{n}) is not the identity")));
            }
        }
        for a in 0..=m {
            for b in 0..=m {
                let fs = site.hom(a, b);
                for c in 0..=m {
                    let gs = site.hom(b, c);
                    for (fc, f) in fs.iter().enumerate() {
                        let ff = self.0.restrict[a][b][fc].table();
                        for (gc, g) in gs.iter().enumerate() {
                            let gf: Vec<usize> = f.table().iter().map(|&j| g.table()[j]).collect();
                            let gfc = finset::encode_map(&gf, c);
                            let fgf = self.0.restrict[a][c][gfc].table();
                            let fg = self.0.restrict[b][c][gc].table();
                            if fg.iter().zip(fgf).any(|(&mid, &direct)| ff[mid] != direct) {
                                return Err(Error::FunctorLawViolation(format!(
                                    "F(g∘f) ≠ F(f)∘F(g) for f = {}, g = {}",
                                    MapId { dom: a, cod: b, code: fc },
                                    MapId { dom: b, cod: c, code: gc }
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &Site {
        &self.0.site
    }

    pub fn value(&self, n: usize) -> &FinSet {
        &self.0.values[n]
    }

    pub fn values(&self) -> &[FinSet] {
        &self.0.values
    }

    pub fn restriction(&self, id: MapId) -> &FinMap {
        &self.0.restrict[id.dom][id.cod][id.code]
    }

    /// `F(f)` for a map between arbitrary sets, carried to the site.
    pub fn act(&self, f: &FinMap) -> Result<&FinMap> {
        Ok(self.restriction(self.0.site.id_of(f)?))
    }

    /// Largest value size.
    pub fn max_value_size(&self) -> usize {
        self.0.values.iter().map(FinSet::len).max().unwrap_or(0)
    }
}

/// The presheaf `X ↦ Hom(X, T)`; a map is labelled by the tuple of its images.
pub fn representable(site: &Site, t: usize) -> Result<Presheaf> {
    if t > site.max_card() {
        return Err(Error::SizeBoundExceeded { what: "representing object", size: t, bound: site.max_card() });
    }
    let label_of = |f: &FinMap| Label::tuple(f.table().iter().map(|&j| Label::int(j as i64)).collect());
    let values: Vec<FinSet> =
        (0..=site.max_card()).map(|n| FinSet::new(site.hom(n, t).iter().map(label_of))).collect::<Result<_>>()?;
    let vals = values.clone();
    Presheaf::from_fn(site, values, |id| {
        let f = site.map(id);
        let target = &vals[id.dom];
        let table = vals[id.cod]
            .iter()
            .map(|l| {
                let images = l.as_tuple().unwrap_or_default();
                let pulled = Label::tuple(f.table().iter().map(|&i| images[i].clone()).collect());
                target.index_of(&pulled).ok_or(Error::NonComposable)
            })
            .collect::<Result<Vec<_>>>()?;
        FinMap::from_indices(vals[id.cod].clone(), target.clone(), table)
    })
}

/// The presheaf with every value `v` and every restriction the identity.
pub fn constant(site: &Site, v: &FinSet) -> Result<Presheaf> {
    let values = vec![v.clone(); site.max_card() + 1];
    Presheaf::from_fn(site, values, |_| Ok(FinMap::identity(v)))
}

/// A natural transformation between presheaves on the same site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    source: Presheaf,
    target: Presheaf,
    components: Vec<FinMap>,
}

impl NatTrans {
    /// Validates that every naturality square commutes.
    pub fn new(source: &Presheaf, target: &Presheaf, components: Vec<FinMap>) -> Result<Self> {
        if source.site() != target.site() {
            return Err(Error::NotNatural("presheaves live on different sites".into()));
        }
        let m = source.site().max_card();
        if components.len() != m + 1 {
            return Err(Error::NotNatural("missing components".into()));
        }
        for (n, c) in components.iter().enumerate() {
            if c.dom() != source.value(n) || c.cod() != target.value(n) {
                return Err(Error::NotNatural(format!("component at {n} has the wrong type")));
            }
        }
        for id in source.site().map_ids() {
            let (fs, gs) = (source.restriction(id).table(), target.restriction(id).table());
            let (ca, cb) = (components[id.dom].table(), components[id.cod].table());
            if (0..fs.len()).any(|s| ca[fs[s]] != gs[cb[s]]) {
                return Err(Error::NotNatural(format!("square fails at {id}")));
            }
        }
        Ok(NatTrans { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(f: &Presheaf) -> Self {
        let components = f.values().iter().map(FinMap::identity).collect();
        NatTrans { source: f.clone(), target: f.clone(), components }
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn component(&self, n: usize) -> &FinMap {
        &self.components[n]
    }

    pub fn components(&self) -> &[FinMap] {
        &self.components
    }

    /// `other∘self`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans> {
        if self.target != other.source {
            return Err(Error::NonComposable);
        }
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| finset::compose(b, a)).collect::<Result<_>>()?;
        Ok(NatTrans { source: self.source.clone(), target: other.target.clone(), components })
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(FinMap::is_iso)
    }

    /// Backtracking search for natural transformations `source → target`
    /// whose components satisfy every pin `(n, s, t)`: `η_n(s) = t`.
    /// `visit` is called on each solution and returns `false` to stop.
    /// Candidate values are tried in the order given by `order`.
    pub fn search(
        source: &Presheaf,
        target: &Presheaf,
        pins: &[(usize, usize, usize)],
        order: &mut dyn FnMut(usize, &mut Vec<usize>),
        visit: &mut dyn FnMut(&NatTrans) -> bool,
    ) -> Result<()> {
        let site = source.site();
        if site != target.site() {
            return Err(Error::NotNatural("presheaves live on different sites".into()));
        }
        let m = site.max_card();
        // Variables: one per element of each source value, smaller objects first.
        let mut offset = vec![0usize; m + 2];
        for n in 0..=m {
            offset[n + 1] = offset[n] + source.value(n).len();
        }
        let total = offset[m + 1];
        let obj_of: Vec<usize> = (0..=m).flat_map(|n| std::iter::repeat_n(n, source.value(n).len())).collect();
        let mut pinned: Vec<Option<usize>> = vec![None; total];
        for &(n, s, t) in pins {
            let v = offset[n] + s;
            match pinned[v] {
                Some(old) if old != t => return Ok(()),
                _ => pinned[v] = Some(t),
            }
        }
        // Constraint η_a(F(f)s) = G(f)(η_b s), attached to the later variable.
        #[derive(Clone, Copy)]
        struct Constraint {
            other: usize,
            id: MapId,
            self_is_cod: bool,
        }
        let mut constraints: Vec<Vec<Constraint>> = vec![Vec::new(); total];
        for id in site.map_ids() {
            let fs = source.restriction(id).table();
            for (s, &r) in fs.iter().enumerate() {
                let vb = offset[id.cod] + s;
                let va = offset[id.dom] + r;
                if va >= vb {
                    constraints[va].push(Constraint { other: vb, id, self_is_cod: false });
                } else {
                    constraints[vb].push(Constraint { other: va, id, self_is_cod: true });
                }
            }
        }
        let mut assignment = vec![usize::MAX; total];
        let mut candidates: Vec<Vec<usize>> = (0..total)
            .map(|v| match pinned[v] {
                Some(t) => vec![t],
                None => {
                    let mut c: Vec<usize> = (0..target.value(obj_of[v]).len()).collect();
                    order(v, &mut c);
                    c
                }
            })
            .collect();
        for (v, c) in candidates.iter_mut().enumerate() {
            c.retain(|&t| t < target.value(obj_of[v]).len());
        }
        let consistent = |assignment: &[usize], v: usize, t: usize| -> bool {
            constraints[v].iter().all(|c| {
                let g = target.restriction(c.id).table();
                let other = if c.other == v { t } else { assignment[c.other] };
                if c.self_is_cod {
                    // v = (b, s), other = (a, F(f)s)
                    other == g[t]
                } else {
                    // v = (a, F(f)s), other = (b, s)
                    t == g[other]
                }
            })
        };
        let mut stack: Vec<usize> = vec![0; total + 1];
        let mut v = 0usize;
        loop {
            if v == total {
                let components = (0..=m)
                    .map(|n| {
                        FinMap::from_indices(
                            source.value(n).clone(),
                            target.value(n).clone(),
                            assignment[offset[n]..offset[n + 1]].to_vec(),
                        )
                    })
                    .collect::<Result<_>>()?;
                let nt = NatTrans { source: source.clone(), target: target.clone(), components };
                if !visit(&nt) {
                    return Ok(());
                }
                if v == 0 {
                    return Ok(());
                }
                v -= 1;
                continue;
            }
            let mut placed = false;
            while stack[v] < candidates[v].len() {
                let t = candidates[v][stack[v]];
                stack[v] += 1;
                if consistent(&assignment, v, t) {
                    assignment[v] = t;
                    placed = true;
                    break;
                }
            }
            if placed {
                v += 1;
                if v < total {
                    stack[v] = 0;
                }
            } else {
                assignment[v] = usize::MAX;
                if v == 0 {
                    return Ok(());
                }
                v -= 1;
            }
        }
    }

    /// Number of natural transformations satisfying the pins.
    pub fn count(source: &Presheaf, target: &Presheaf, pins: &[(usize, usize, usize)]) -> Result<usize> {
        let mut n = 0;
        NatTrans::search(source, target, pins, &mut |_, _| {}, &mut |_| {
            n += 1;
            true
        })?;
        Ok(n)
    }

    /// The first natural transformation satisfying the pins, trying
    /// candidates in a seeded random order.
    pub fn find_random(
        source: &Presheaf,
        target: &Presheaf,
        pins: &[(usize, usize, usize)],
        rng: &mut impl Rng,
    ) -> Result<Option<NatTrans>> {
        let mut found = None;
        NatTrans::search(source, target, pins, &mut |_, c| c.shuffle(rng), &mut |nt| {
            found = Some(nt.clone());
            false
        })?;
        Ok(found)
    }
}

/// A natural isomorphism, as a pair of mutually inverse transformations.
#[derive(Clone, Debug)]
pub struct NatIso {
    forward: NatTrans,
    backward: NatTrans,
}

impl NatIso {
    pub fn from_natural_bijection(forward: NatTrans) -> Result<Self> {
        let components = forward
            .components
            .iter()
            .enumerate()
            .map(|(n, c)| c.inverse().ok_or_else(|| Error::NotAnIso(format!("component at {n} is not bijective"))))
            .collect::<Result<_>>()?;
        let backward = NatTrans::new(&forward.target, &forward.source, components)?;
        Ok(NatIso { forward, backward })
    }

    pub fn forward(&self) -> &NatTrans {
        &self.forward
    }

    pub fn backward(&self) -> &NatTrans {
        &self.backward
    }
}

/// One failure found by a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub context: String,
    pub failure: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: &'static str,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: &'static str) -> Self {
        CheckReport { check, witnesses: Vec::new(), notes: Vec::new() }
    }

    fn fail(&mut self, context: impl Into<String>, failure: impl Into<String>) {
        self.witnesses.push(Witness { context: context.into(), failure: failure.into() });
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.check, if self.passed() { "pass" } else { "fail" })?;
        for w in &self.witnesses {
            writeln!(f, "  {}: {}", w.context, w.failure)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

/// Is the map `v ↦ (r1(v), r2(v))` a bijection onto `|c1| × |c2|`?
fn pairing_is_bijective(r1: &FinMap, r2: &FinMap) -> std::result::Result<(), String> {
    let (n1, n2) = (r1.cod().len(), r2.cod().len());
    let n = r1.dom().len();
    if n != n1 * n2 {
        return Err(format!("|F(X)| = {n} but |F(X1)×F(X2)| = {}", n1 * n2));
    }
    let mut seen = vec![false; n];
    for v in 0..n {
        let k = r1.apply_index(v) * n2 + r2.apply_index(v);
        if seen[k] {
            return Err(format!("two elements restrict to the same pair, one is {}", r1.dom().get(v)));
        }
        seen[k] = true;
    }
    Ok(())
}

/// The × condition: `|F(∅)| = 1` and `F(X1 ⊔ X2) → F(X1) × F(X2)` is a
/// bijection for every split of every object.
pub fn check_times(f: &Presheaf) -> CheckReport {
    let mut report = CheckReport::new("products");
    let site = f.site();
    if f.value(0).len() != 1 {
        report.fail("F(0)", format!("has {} elements, expected 1", f.value(0).len()));
    }
    for n in 0..=site.max_card() {
        for n1 in 0..=n {
            let n2 = n - n1;
            let r1 = f.restriction(site.summand_inclusion(n1, n2, false));
            let r2 = f.restriction(site.summand_inclusion(n1, n2, true));
            if let Err(e) = pairing_is_bijective(r1, r2) {
                report.fail(format!("{n} = {n1} + {n2}"), e);
            }
        }
    }
    report
}

pub const COFINALITY_NOTE: &str = "descent is checked only on epimorphisms Y → X with |Y| at most the \
     cover bound; that this family is cofinal among all covers is assumed, not proved";

/// The descent condition: for every epi `f : Y → X` with `|Y| ≤ N`, `F(f)` is a
/// bijection from `F(X)` onto the equalizer of `F(Y) ⇉ F(Y ×_X Y)`.
pub fn check_star(f: &Presheaf) -> CheckReport {
    let mut report = CheckReport::new("descent");
    report.notes.push(COFINALITY_NOTE.to_string());
    let site = f.site();
    for y in 0..=site.max_cover_size() {
        for x in 0..=y {
            for (code, e) in site.hom(y, x).iter().enumerate() {
                if !e.is_epi() {
                    continue;
                }
                let id = MapId { dom: y, cod: x, code };
                if let Err(msg) = star_at(f, e) {
                    report.fail(format!("epi {id}"), msg);
                }
            }
        }
    }
    report
}

fn star_at(f: &Presheaf, e: &FinMap) -> std::result::Result<(), String> {
    let kernel = finset::fiber_product(e, e).map_err(|err| err.to_string())?;
    // Carry Y ×_X Y to the canonical object of its size.
    let to_site = finset::order_iso(&kernel.apex);
    let back = to_site.inverse().expect("order iso");
    let q1 = finset::compose(&kernel.legs[0], &back).map_err(|err| err.to_string())?;
    let q2 = finset::compose(&kernel.legs[1], &back).map_err(|err| err.to_string())?;
    let (r1, r2) = (f.act(&q1).map_err(|err| err.to_string())?, f.act(&q2).map_err(|err| err.to_string())?);
    let eq = finset::equalizer(r1, r2).map_err(|err| err.to_string())?;
    let fe = f.act(e).map_err(|err| err.to_string())?;
    let into_eq = finset::factor_through_mono(fe, &eq.legs[0])
        .ok_or_else(|| "F(f) does not land in the equalizer".to_string())?;
    if !into_eq.is_iso() {
        return Err(format!(
            "F(X) → eq has {} elements against {} in the equalizer, or is not injective",
            into_eq.dom().len(),
            into_eq.cod().len()
        ));
    }
    Ok(())
}

/// A seeded random presheaf with every value of size at most `bound`.
///
/// Starts from the free presheaf on one to three random generators (a
/// coproduct of representables), merges random pairs of elements, and closes
/// the merges under restriction. The quotient of a presheaf by a
/// restriction-stable equivalence is again a presheaf, so functor laws hold
/// by construction and nothing needs regenerating.
pub fn random_presheaf(site: &Site, seed: u64, bound: usize) -> Result<Presheaf> {
    if bound == 0 {
        return Err(Error::SizeBoundExceeded { what: "value size bound", size: 0, bound: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = site.max_card();
    let generators: Vec<usize> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..=m)).collect();

    // Free presheaf: F(n) = ⊔_i Hom(n, g_i), element (i, table).
    let mut offset = vec![0usize; m + 2];
    let mut elems: Vec<Vec<(usize, usize)>> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let e: Vec<(usize, usize)> =
            generators.iter().enumerate().flat_map(|(i, &g)| (0..site.hom(n, g).len()).map(move |c| (i, c))).collect();
        offset[n + 1] = offset[n] + e.len();
        elems.push(e);
    }
    let index_in = |n: usize, gen: usize, code: usize| -> usize {
        let before: usize = generators[..gen].iter().map(|&g| site.hom(n, g).len()).sum();
        offset[n] + before + code
    };
    // free[id][s] = global index of F(f)(s)
    let ids: Vec<MapId> = site.map_ids().filter(|id| !elems[id.cod].is_empty()).collect();
    let free: Vec<Vec<usize>> = ids
        .iter()
        .map(|&id| {
            elems[id.cod]
                .iter()
                .map(|&(i, c)| {
                    let h = MapId { dom: id.cod, cod: generators[i], code: c };
                    index_in(id.dom, i, site.compose_ids(h, id).code)
                })
                .collect()
        })
        .collect();

    let mut uf = UnionFind::new(offset[m + 1]);
    let classes_at = |uf: &mut UnionFind, n: usize| -> Vec<usize> {
        let mut roots: Vec<usize> = (offset[n]..offset[n + 1]).map(|v| uf.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    };
    // A few unconditional random merges, then enough to meet the bound.
    for _ in 0..rng.random_range(0..=3) {
        let n = rng.random_range(0..=m);
        let size = offset[n + 1] - offset[n];
        if size >= 2 {
            uf.union(offset[n] + rng.random_range(0..size), offset[n] + rng.random_range(0..size));
        }
    }
    for n in 0..=m {
        loop {
            let roots = classes_at(&mut uf, n);
            if roots.len() <= bound {
                break;
            }
            let a = roots[rng.random_range(0..roots.len())];
            let b = roots[rng.random_range(0..roots.len())];
            uf.union(a, b);
        }
    }
    // Close under restriction: s ~ t implies F(f)s ~ F(f)t.
    loop {
        let mut changed = false;
        for (k, id) in ids.iter().enumerate() {
            for s in 0..elems[id.cod].len() {
                let v = offset[id.cod] + s;
                let r = uf.find(v);
                let (img_v, img_r) = (free[k][s], free[k][r - offset[id.cod]]);
                changed |= uf.union(img_v, img_r);
            }
        }
        if !changed {
            break;
        }
    }

    let free_label = |n: usize, v: usize| -> Label {
        let (i, c) = elems[n][v - offset[n]];
        let table = finset::decode_map(c, n, generators[i]);
        Label::pair(Label::int(i as i64), Label::tuple(table.into_iter().map(|j| Label::int(j as i64)).collect()))
    };
    // Name each class by its least label.
    let mut name_of_root: std::collections::HashMap<usize, Label> = std::collections::HashMap::new();
    for n in 0..=m {
        for v in offset[n]..offset[n + 1] {
            let l = free_label(n, v);
            let r = uf.find(v);
            name_of_root
                .entry(r)
                .and_modify(|cur| {
                    if l < *cur {
                        *cur = l.clone()
                    }
                })
                .or_insert(l);
        }
    }
    let values: Vec<FinSet> = (0..=m)
        .map(|n| {
            let mut ls: Vec<Label> = (offset[n]..offset[n + 1]).map(|v| name_of_root[&uf.find(v)].clone()).collect();
            ls.sort();
            ls.dedup();
            FinSet::new(ls)
        })
        .collect::<Result<_>>()?;
    let pos: std::collections::HashMap<MapId, usize> = ids.iter().enumerate().map(|(k, id)| (*id, k)).collect();
    let vals = values.clone();
    Presheaf::from_fn(site, values, |id| {
        let (src, dst) = (&vals[id.cod], &vals[id.dom]);
        let table = match pos.get(&id) {
            None => Vec::new(),
            Some(&k) => src
                .iter()
                .map(|l| {
                    let v = (offset[id.cod]..offset[id.cod + 1])
                        .find(|&v| name_of_root[&uf.find(v)] == *l)
                        .expect("class has a member");
                    let img = free[k][v - offset[id.cod]];
                    dst.index_of(&name_of_root[&uf.find(img)]).expect("image class exists")
                })
                .collect(),
        };
        FinMap::from_indices(src.clone(), dst.clone(), table)
    })
}

/// `X ↦ ∏_{x ∈ X} F(1)` with `F(f)` given by reindexing; a ×-presheaf.
pub fn product_presheaf(site: &Site, point_value: &FinSet) -> Result<Presheaf> {
    let values: Vec<FinSet> =
        (0..=site.max_card()).map(|n| finset::product_many(&vec![point_value.clone(); n]).apex).collect();
    let k = point_value.len();
    let vals = values.clone();
    Presheaf::from_fn(site, values, |id| {
        let f = site.map(id);
        let (src, dst) = (&vals[id.cod], &vals[id.dom]);
        // Tuples are ordered with the last coordinate fastest.
        let table = (0..src.len())
            .map(|s| {
                let digits = tuple_digits(s, id.cod, k);
                let img: Vec<usize> = f.table().iter().map(|&j| digits[j]).collect();
                img.iter().fold(0, |acc, &d| acc * k + d)
            })
            .collect();
        FinMap::from_indices(src.clone(), dst.clone(), table)
    })
}

/// Coordinates of the `s`-th element of a `len`-fold product of a `k`-set.
pub fn tuple_digits(mut s: usize, len: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = s % k;
        s /= k;
    }
    d
}
