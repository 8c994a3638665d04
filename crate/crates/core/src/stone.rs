//! Ultrafilters on finite sets, the functor β with its unit ι and limit map ξ,
//! and finite Stone duality between power-set algebras and their spectra.
//!
//! Subsets of a base set are bitmasks over its canonical element order. The
//! ultrafilters on a set are found by testing every family of subsets against
//! the ultrafilter axioms; nothing assumes in advance that they are principal.
//! Only after the search has shown every point to be principal are points
//! labelled by their generating element.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::finset::{self, compose, FinMap, FinSet, Iso};
use crate::label::{Label, Side};

/// Default largest base size for exhaustive ultrafilter enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 4;
/// Hard ceiling for enumeration: `2^32` candidate families at size 5.
pub const MAX_ENUMERATION_BOUND: usize = 5;
/// Largest base for which [`beta_principal`] materializes subset families.
pub const PRINCIPAL_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetaConfig {
    pub enumeration_bound: usize,
}

impl Default for BetaConfig {
    fn default() -> Self {
        BetaConfig { enumeration_bound: DEFAULT_ENUMERATION_BOUND }
    }
}

impl BetaConfig {
    pub fn with_bound(bound: usize) -> Result<Self> {
        if bound > MAX_ENUMERATION_BOUND {
            return Err(Error::SizeBoundExceeded {
                what: "ultrafilter enumeration bound",
                size: bound,
                bound: MAX_ENUMERATION_BOUND,
            });
        }
        Ok(BetaConfig { enumeration_bound: bound })
    }
}

/// A family of subsets of an `n`-element set, as a bitset indexed by subset mask.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Family {
    n: usize,
    bits: Vec<u64>,
}

impl Family {
    fn empty(n: usize) -> Self {
        Family { n, bits: vec![0; (1usize << n).div_ceil(64)] }
    }

    fn from_small_mask(n: usize, mask: u64) -> Self {
        let mut f = Family::empty(n);
        f.bits[0] = mask;
        f
    }

    fn insert(&mut self, subset: usize) {
        self.bits[subset / 64] |= 1 << (subset % 64);
    }

    pub fn contains(&self, subset: usize) -> bool {
        self.bits[subset / 64] >> (subset % 64) & 1 == 1
    }

    pub fn base_size(&self) -> usize {
        self.n
    }

    /// Member subsets as masks, increasing.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.n).filter(|&a| self.contains(a))
    }
}

/// An ultrafilter on a finite base set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Ultrafilter {
    base: FinSet,
    members: Family,
}

impl Ultrafilter {
    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn family(&self) -> &Family {
        &self.members
    }

    pub fn contains(&self, subset: usize) -> bool {
        self.members.contains(subset)
    }

    /// The members as label sets.
    pub fn subsets(&self) -> Vec<FinSet> {
        self.members.members().map(|m| subset_of(&self.base, m)).collect()
    }

    /// The element `x` with `{x}` a member, if any.
    pub fn generator(&self) -> Option<usize> {
        (0..self.base.len()).find(|&i| self.members.contains(1 << i))
    }

    pub fn is_principal(&self) -> bool {
        self.generator().is_some()
    }

    /// The family of all subsets containing element `i`.
    pub fn principal(base: &FinSet, i: usize) -> Self {
        let n = base.len();
        let mut members = Family::empty(n);
        for a in 0..1usize << n {
            if a >> i & 1 == 1 {
                members.insert(a);
            }
        }
        Ultrafilter { base: base.clone(), members }
    }
}

pub(crate) fn subset_of(base: &FinSet, mask: usize) -> FinSet {
    let idx: Vec<usize> = (0..base.len()).filter(|&i| mask >> i & 1 == 1).collect();
    base.subset(&idx)
}

fn is_ultrafilter_mask(n: usize, fam: u64) -> bool {
    let subsets = 1usize << n;
    let full = subsets - 1;
    let has = |a: usize| fam >> a & 1 == 1;
    if !has(full) || has(0) {
        return false;
    }
    for a in 0..subsets {
        if has(a) == has(full ^ a) {
            return false;
        }
    }
    for a in (0..subsets).filter(|&a| has(a)) {
        for b in 0..subsets {
            if a & b == a && !has(b) {
                return false;
            }
            if has(b) && !has(a & b) {
                return false;
            }
        }
    }
    true
}

fn ultrafilter_masks(n: usize) -> &'static [u64] {
    static CACHE: [OnceLock<Vec<u64>>; MAX_ENUMERATION_BOUND + 1] =
        [const { OnceLock::new() }; MAX_ENUMERATION_BOUND + 1];
    CACHE[n].get_or_init(|| {
        let candidates = 1u64 << (1u32 << n);
        (0..candidates).filter(|&fam| is_ultrafilter_mask(n, fam)).collect()
    })
}

/// Every ultrafilter on `s`, found by testing all `2^(2^|s|)` families of
/// subsets. Ordered by generating element, then by family.
pub fn enumerate_ultrafilters(s: &FinSet, config: &BetaConfig) -> Result<Vec<Ultrafilter>> {
    let n = s.len();
    let bound = config.enumeration_bound.min(MAX_ENUMERATION_BOUND);
    if n > bound {
        return Err(Error::SizeBoundExceeded { what: "ultrafilter enumeration", size: n, bound });
    }
    let mut out: Vec<Ultrafilter> = ultrafilter_masks(n)
        .iter()
        .map(|&m| Ultrafilter { base: s.clone(), members: Family::from_small_mask(n, m) })
        .collect();
    out.sort_by_key(|u| (u.generator().unwrap_or(usize::MAX), u.members.bits.clone()));
    Ok(out)
}

/// The Stone–Čech compactification `βS` of a finite discrete set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaSet {
    base: FinSet,
    points: Vec<Ultrafilter>,
    carrier: FinSet,
    iota: FinMap,
    xi: FinMap,
}

impl BetaSet {
    fn from_points(base: &FinSet, points: Vec<Ultrafilter>) -> Result<Self> {
        let mut generators = Vec::with_capacity(points.len());
        for p in &points {
            generators.push(p.generator().ok_or(Error::NonPrincipalPoint(base.len()))?);
        }
        let carrier = FinSet::new(generators.iter().map(|&g| Label::principal(base.get(g).clone())))?;
        let xi = FinMap::from_indices(carrier.clone(), base.clone(), generators.clone())?;
        let mut iota_table = vec![usize::MAX; base.len()];
        for (p, &g) in generators.iter().enumerate() {
            iota_table[g] = p;
        }
        if iota_table.contains(&usize::MAX) {
            return Err(Error::Invariant("some element has no principal ultrafilter".into()));
        }
        let iota = FinMap::from_indices(base.clone(), carrier.clone(), iota_table)?;
        Ok(BetaSet { base: base.clone(), points, carrier, iota, xi })
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn points(&self) -> &[Ultrafilter] {
        &self.points
    }

    /// The underlying set of `βS`; point `p` is labelled `<x>` for its generator `x`.
    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    /// `ι_S : S → βS`, sending `x` to the principal ultrafilter at `x`.
    pub fn iota(&self) -> &FinMap {
        &self.iota
    }

    /// `ξ : β|X| → X`, sending an ultrafilter to its limit.
    pub fn xi(&self) -> &FinMap {
        &self.xi
    }

    fn index_of_family(&self, fam: &Family) -> Option<usize> {
        let g = (0..self.base.len()).find(|&i| fam.contains(1 << i))?;
        let p = self.iota.apply_index(g);
        (self.points[p].members == *fam).then_some(p)
    }
}

/// `βS`, with points found by exhaustive enumeration.
pub fn beta(s: &FinSet, config: &BetaConfig) -> Result<BetaSet> {
    BetaSet::from_points(s, enumerate_ultrafilters(s, config)?)
}

/// `βS` built directly from principal ultrafilters, for base sets beyond the
/// enumeration bound. Sound because every ultrafilter on a finite set is
/// principal, which [`enumerate_ultrafilters`] confirms up to its bound.
pub fn beta_principal(s: &FinSet) -> Result<BetaSet> {
    if s.len() > PRINCIPAL_BOUND {
        return Err(Error::SizeBoundExceeded {
            what: "principal β construction",
            size: s.len(),
            bound: PRINCIPAL_BOUND,
        });
    }
    let points = (0..s.len()).map(|i| Ultrafilter::principal(s, i)).collect();
    BetaSet::from_points(s, points)
}

/// `βS` by enumeration when within the bound, otherwise from principal points.
pub fn beta_any(s: &FinSet, config: &BetaConfig) -> Result<BetaSet> {
    if s.len() <= config.enumeration_bound {
        beta(s, config)
    } else {
        beta_principal(s)
    }
}

/// Pushes an ultrafilter forward along `f`: `{A ⊆ T : f⁻¹(A) ∈ F}`.
pub fn push_forward(f: &FinMap, u: &Ultrafilter) -> Family {
    let t = f.cod().len();
    let mut fiber_mask = vec![0usize; t];
    for (i, &j) in f.table().iter().enumerate() {
        fiber_mask[j] |= 1 << i;
    }
    let mut pre = vec![0usize; 1 << t];
    let mut fam = Family::empty(t);
    for a in 0..1usize << t {
        if a > 0 {
            let low = a.trailing_zeros() as usize;
            pre[a] = pre[a & (a - 1)] | fiber_mask[low];
        }
        if u.contains(pre[a]) {
            fam.insert(a);
        }
    }
    fam
}

/// `βf : βS → βT`.
pub fn beta_map(f: &FinMap, bs: &BetaSet, bt: &BetaSet) -> Result<FinMap> {
    if f.dom() != bs.base() || f.cod() != bt.base() {
        return Err(Error::NonComposable);
    }
    let table = bs
        .points
        .iter()
        .map(|u| {
            let fam = push_forward(f, u);
            bt.index_of_family(&fam)
                .ok_or_else(|| Error::Invariant("pushed-forward family is not a point of βT".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    FinMap::from_indices(bs.carrier.clone(), bt.carrier.clone(), table)
}

/// `β(S ⊔ T) ≅ βS ⊔ βT`. An ultrafilter on `S ⊔ T` concentrates on exactly
/// one summand and restricts to an ultrafilter there.
pub fn beta_coproduct_iso(s: &FinSet, t: &FinSet, config: &BetaConfig) -> Result<Iso> {
    let sum = finset::coproduct(s, t);
    let (bs, bt, bsum) = (beta(s, config)?, beta(t, config)?, beta(&sum.apex, config)?);
    let target = finset::coproduct(bs.carrier(), bt.carrier());
    let (ns, nt) = (s.len(), t.len());
    let left_mask = (1usize << ns) - 1;
    let forward_table = bsum
        .points
        .iter()
        .map(|u| {
            let (side_beta, width, shift, offset) =
                if u.contains(left_mask) { (&bs, ns, 0, 0) } else { (&bt, nt, ns, bs.carrier.len()) };
            let mut fam = Family::empty(width);
            for a in 0..1usize << width {
                if u.contains(a << shift) {
                    fam.insert(a);
                }
            }
            side_beta
                .index_of_family(&fam)
                .map(|p| p + offset)
                .ok_or_else(|| Error::Invariant("restricted family is not an ultrafilter".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let forward = FinMap::from_indices(bsum.carrier.clone(), target.apex.clone(), forward_table)?;
    let back_l = beta_map(&sum.legs[0], &bs, &bsum)?;
    let back_r = beta_map(&sum.legs[1], &bt, &bsum)?;
    let back_table: Vec<usize> = back_l.table().iter().chain(back_r.table().iter()).copied().collect();
    let backward = FinMap::from_indices(target.apex, bsum.carrier.clone(), back_table)?;
    Iso::new(forward, backward)
}

/// Transports an iso `βS ≅ βT` to a bijection `S ≅ T` through principal points.
pub fn recover_bijection(iso: &Iso, bs: &BetaSet, bt: &BetaSet) -> Result<Iso> {
    if iso.forward().dom() != bs.carrier() || iso.forward().cod() != bt.carrier() {
        return Err(Error::NotAnIso("iso does not run between the given β-sets".into()));
    }
    let forward = compose(bt.xi(), &compose(iso.forward(), bs.iota())?)?;
    let backward = compose(bs.xi(), &compose(iso.backward(), bt.iota())?)?;
    Iso::new(forward, backward)
}

/// A finite Boolean algebra given by operation tables over a carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolAlg {
    carrier: FinSet,
    meet: Vec<usize>,
    join: Vec<usize>,
    complement: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Largest carrier for which the axioms are checked on all triples.
pub const BOOL_ALG_BOUND: usize = 16;

impl BoolAlg {
    pub fn new(
        carrier: FinSet,
        meet: Vec<usize>,
        join: Vec<usize>,
        complement: Vec<usize>,
        bottom: usize,
        top: usize,
    ) -> Result<Self> {
        let n = carrier.len();
        if n > BOOL_ALG_BOUND {
            return Err(Error::SizeBoundExceeded { what: "Boolean algebra carrier", size: n, bound: BOOL_ALG_BOUND });
        }
        let shape_ok = meet.len() == n * n
            && join.len() == n * n
            && complement.len() == n
            && bottom < n
            && top < n
            && meet.iter().chain(&join).chain(&complement).all(|&x| x < n);
        if !shape_ok {
            return Err(Error::InvalidAlgebra("operation tables have the wrong shape".into()));
        }
        let alg = BoolAlg { carrier, meet, join, complement, bottom, top };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.carrier.len();
        let fail =
            |what: &str, a: usize| Err(Error::InvalidAlgebra(format!("{what} fails at {}", self.carrier.get(a))));
        for a in 0..n {
            if self.m(a, self.top) != a || self.j(a, self.bottom) != a {
                return fail("identity", a);
            }
            if self.m(a, self.complement[a]) != self.bottom || self.j(a, self.complement[a]) != self.top {
                return fail("complement", a);
            }
            for b in 0..n {
                if self.m(a, b) != self.m(b, a) || self.j(a, b) != self.j(b, a) {
                    return fail("commutativity", a);
                }
                if self.m(a, self.j(a, b)) != a || self.j(a, self.m(a, b)) != a {
                    return fail("absorption", a);
                }
                for c in 0..n {
                    if self.m(a, self.m(b, c)) != self.m(self.m(a, b), c)
                        || self.j(a, self.j(b, c)) != self.j(self.j(a, b), c)
                    {
                        return fail("associativity", a);
                    }
                    if self.m(a, self.j(b, c)) != self.j(self.m(a, b), self.m(a, c)) {
                        return fail("distributivity", a);
                    }
                }
            }
        }
        Ok(())
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.carrier.len() + b]
    }

    fn j(&self, a: usize, b: usize) -> usize {
        self.join[a * self.carrier.len() + b]
    }

    pub fn carrier(&self) -> &FinSet {
        &self.carrier
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.m(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.j(a, b)
    }

    pub fn complement(&self, a: usize) -> usize {
        self.complement[a]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.m(a, b) == a
    }

    /// Componentwise product algebra; elements are pairs.
    pub fn product(a: &BoolAlg, b: &BoolAlg) -> Result<BoolAlg> {
        let (na, nb) = (a.carrier.len(), b.carrier.len());
        let carrier = finset::product(&a.carrier, &b.carrier).apex;
        let idx = |x: usize, y: usize| x * nb + y;
        let n = na * nb;
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for (x1, y1, x2, y2) in (0..na).flat_map(|x1| {
            (0..nb).flat_map(move |y1| (0..na).flat_map(move |x2| (0..nb).map(move |y2| (x1, y1, x2, y2))))
        }) {
            meet[idx(x1, y1) * n + idx(x2, y2)] = idx(a.m(x1, x2), b.m(y1, y2));
            join[idx(x1, y1) * n + idx(x2, y2)] = idx(a.j(x1, x2), b.j(y1, y2));
        }
        let complement = (0..na)
            .flat_map(|x| (0..nb).map(move |y| (x, y)))
            .map(|(x, y)| idx(a.complement[x], b.complement[y]))
            .collect();
        BoolAlg::new(carrier, meet, join, complement, idx(a.bottom, b.bottom), idx(a.top, b.top))
    }
}

/// The algebra `P(S)` of all subsets of `s`; elements are `Set` labels.
pub fn powerset_algebra(s: &FinSet, config: &BetaConfig) -> Result<BoolAlg> {
    let n = s.len();
    if n > config.enumeration_bound {
        return Err(Error::SizeBoundExceeded { what: "power-set algebra", size: n, bound: config.enumeration_bound });
    }
    let mut by_label: Vec<(Label, usize)> =
        (0..1usize << n).map(|m| (Label::set(subset_of(s, m).elements().to_vec()), m)).collect();
    by_label.sort();
    let mut index_of_mask = vec![0; 1 << n];
    for (i, (_, m)) in by_label.iter().enumerate() {
        index_of_mask[*m] = i;
    }
    let size = by_label.len();
    let full = (1usize << n) - 1;
    let mut meet = vec![0; size * size];
    let mut join = vec![0; size * size];
    for (i, (_, a)) in by_label.iter().enumerate() {
        for (j, (_, b)) in by_label.iter().enumerate() {
            meet[i * size + j] = index_of_mask[a & b];
            join[i * size + j] = index_of_mask[a | b];
        }
    }
    let complement = by_label.iter().map(|(_, a)| index_of_mask[full ^ a]).collect();
    let carrier = FinSet::from_sorted(by_label.into_iter().map(|(l, _)| l).collect());
    BoolAlg::new(carrier, meet, join, complement, index_of_mask[0], index_of_mask[full])
}

fn atom_indices(b: &BoolAlg) -> Vec<usize> {
    let n = b.carrier.len();
    (0..n).filter(|&a| a != b.bottom).filter(|&a| (0..n).all(|x| !(b.leq(x, a) && x != a && x != b.bottom))).collect()
}

/// Minimal nonzero elements.
pub fn atoms(b: &BoolAlg) -> FinSet {
    b.carrier.subset(&atom_indices(b))
}

/// Ultrafilters of `b`, found by testing every subset of the carrier.
/// Each is labelled by the `Set` of its members.
pub fn spec(b: &BoolAlg) -> Result<FinSet> {
    let n = b.carrier.len();
    let mut found = Vec::new();
    for fam in 0..1u64 << n {
        let has = |a: usize| fam >> a & 1 == 1;
        if !has(b.top) || has(b.bottom) {
            continue;
        }
        let ok = (0..n).all(|a| {
            has(a) != has(b.complement[a])
                && (!has(a) || (0..n).all(|x| (!b.leq(a, x) || has(x)) && (!has(x) || has(b.m(a, x)))))
        });
        if ok {
            found.push(Label::set((0..n).filter(|&a| has(a)).map(|a| b.carrier.get(a).clone()).collect()));
        }
    }
    FinSet::new(found)
}

/// Searches for a Boolean-algebra isomorphism. Any iso restricts to a
/// bijection of atoms and every element is the join of the atoms below it,
/// so trying all atom bijections covers every candidate.
pub fn find_algebra_iso(a: &BoolAlg, b: &BoolAlg) -> Option<Iso> {
    let (atoms_a, atoms_b) = (atom_indices(a), atom_indices(b));
    if atoms_a.len() != atoms_b.len() || a.carrier.len() != b.carrier.len() {
        return None;
    }
    let n = a.carrier.len();
    let below: Vec<Vec<usize>> =
        (0..n).map(|x| (0..atoms_a.len()).filter(|&k| a.leq(atoms_a[k], x)).collect()).collect();
    let mut perm: Vec<usize> = (0..atoms_b.len()).collect();
    loop {
        let table: Vec<usize> =
            below.iter().map(|ks| ks.iter().fold(b.bottom, |acc, &k| b.j(acc, atoms_b[perm[k]]))).collect();
        let hom = (0..n).all(|x| {
            table[a.complement[x]] == b.complement[table[x]]
                && (0..n)
                    .all(|y| table[a.m(x, y)] == b.m(table[x], table[y]) && table[a.j(x, y)] == b.j(table[x], table[y]))
        });
        if hom {
            if let Ok(fwd) = FinMap::from_indices(a.carrier.clone(), b.carrier.clone(), table) {
                if let Ok(iso) = Iso::from_bijection(fwd) {
                    return Some(iso);
                }
            }
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Matches each ultrafilter of `P(S)` with the point of `βS` having the same
/// members. Fails if the two sides are not in bijection.
pub fn spec_to_beta(s: &FinSet, config: &BetaConfig) -> Result<Iso> {
    let alg = powerset_algebra(s, config)?;
    let sp = spec(&alg)?;
    let bs = beta(s, config)?;
    let mut by_members: HashMap<Vec<FinSet>, usize> = HashMap::new();
    for (i, p) in bs.points.iter().enumerate() {
        by_members.insert(p.subsets(), i);
    }
    let table = sp
        .iter()
        .map(|l| match l {
            Label::Set(members) => {
                let mut subsets: Vec<FinSet> = members
                    .iter()
                    .map(|m| match m {
                        Label::Set(xs) => FinSet::new(xs.iter().cloned()),
                        other => Err(Error::Invariant(format!("unexpected element {other}"))),
                    })
                    .collect::<Result<_>>()?;
                subsets.sort_by_key(|x| subset_mask(s, x));
                by_members
                    .get(&subsets)
                    .copied()
                    .ok_or_else(|| Error::NotAnIso("spectrum point without matching ultrafilter".into()))
            }
            other => Err(Error::Invariant(format!("unexpected spectrum label {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let fwd = FinMap::from_indices(sp, bs.carrier.clone(), table)?;
    Iso::from_bijection(fwd)
}

pub(crate) fn subset_mask(base: &FinSet, sub: &FinSet) -> usize {
    sub.iter().map(|l| 1usize << base.index_of(l).expect("subset of base")).sum()
}

/// The `Side` an element of a binary coproduct carrier belongs to.
pub fn side_of(l: &Label) -> Option<Side> {
    match l {
        Label::Tagged(s, _) => Some(*s),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> BetaConfig {
        BetaConfig::default()
    }

    /// Independent ultrafilter oracle: checks the axioms on explicit label sets.
    fn brute_force_count(n: usize) -> usize {
        let subsets: Vec<Vec<usize>> = (0..1usize << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect();
        let all: Vec<usize> = (0..n).collect();
        let is_sub = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|x| b.contains(x));
        let inter =
            |a: &Vec<usize>, b: &Vec<usize>| -> Vec<usize> { a.iter().copied().filter(|x| b.contains(x)).collect() };
        let comp = |a: &Vec<usize>| -> Vec<usize> { all.iter().copied().filter(|x| !a.contains(x)).collect() };
        let mut count = 0;
        for fam in 0..1u64 << subsets.len() {
            let members: Vec<&Vec<usize>> =
                subsets.iter().enumerate().filter(|(i, _)| fam >> i & 1 == 1).map(|(_, s)| s).collect();
            let has = |s: &Vec<usize>| members.contains(&s);
            let ok = has(&all)
                && !has(&Vec::new())
                && subsets.iter().all(|a| has(a) != has(&comp(a)))
                && members.iter().all(|a| {
                    subsets.iter().all(|b| !is_sub(a, b) || has(b)) && members.iter().all(|b| has(&inter(a, b)))
                });
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumeration_examples() {
        assert!(enumerate_ultrafilters(&FinSet::empty(), &cfg()).unwrap().is_empty());
        assert_eq!(enumerate_ultrafilters(&FinSet::canonical(1), &cfg()).unwrap().len(), 1);
        let three = enumerate_ultrafilters(&FinSet::canonical(3), &cfg()).unwrap();
        assert_eq!(three.len(), brute_force_count(3));
        assert_eq!(three.len(), 3);
        assert!(three.iter().all(Ultrafilter::is_principal));
        assert_eq!(
            enumerate_ultrafilters(&FinSet::canonical(5), &cfg()),
            Err(Error::SizeBoundExceeded { what: "ultrafilter enumeration", size: 5, bound: 4 })
        );
    }

    #[test]
    fn every_ultrafilter_is_principal_up_to_four() {
        for n in 0..=4 {
            let us = enumerate_ultrafilters(&FinSet::canonical(n), &cfg()).unwrap();
            assert_eq!(us.len(), n);
            for (i, u) in us.iter().enumerate() {
                assert_eq!(u.generator(), Some(i));
                assert_eq!(*u, Ultrafilter::principal(&FinSet::canonical(n), i));
            }
        }
    }

    #[test]
    fn beta_examples() {
        let b2 = beta(&FinSet::canonical(2), &cfg()).unwrap();
        assert_eq!(b2.carrier().len(), 2);
        assert!(b2.iota().is_iso());
        assert!(beta(&FinSet::empty(), &cfg()).unwrap().carrier().is_empty());
        let pt = FinSet::new([Label::name("*")]).unwrap();
        assert_eq!(beta(&pt, &cfg()).unwrap().carrier().len(), 1);
    }

    #[test]
    fn beta_map_examples() {
        let ab = FinSet::new([Label::name("a"), Label::name("b")]).unwrap();
        let c = FinSet::new([Label::name("c")]).unwrap();
        let (bab, bc) = (beta(&ab, &cfg()).unwrap(), beta(&c, &cfg()).unwrap());
        assert!(beta_map(&FinMap::identity(&ab), &bab, &bab).unwrap().is_identity());
        let k = FinMap::from_indices(ab.clone(), c.clone(), vec![0, 0]).unwrap();
        let bk = beta_map(&k, &bab, &bc).unwrap();
        assert_eq!(bk.table(), &[0, 0]);
        assert_eq!(bc.points()[0], Ultrafilter::principal(&c, 0));
    }

    #[test]
    fn xi_inverts_iota() {
        let b = beta(&FinSet::canonical(3), &cfg()).unwrap();
        assert!(compose(b.xi(), b.iota()).unwrap().is_identity());
        assert!(compose(b.iota(), b.xi()).unwrap().is_identity());
    }

    #[test]
    fn principal_construction_agrees_with_enumeration() {
        for n in 0..=4 {
            let s = FinSet::canonical(n);
            assert_eq!(beta(&s, &cfg()).unwrap(), beta_principal(&s).unwrap());
        }
        assert!(beta_principal(&FinSet::canonical(13)).is_err());
    }

    #[test]
    fn powerset_and_spectrum() {
        let ab = FinSet::new([Label::name("a"), Label::name("b")]).unwrap();
        let p = powerset_algebra(&ab, &cfg()).unwrap();
        let at = atoms(&p);
        assert_eq!(at.elements(), &[Label::set(vec![Label::name("a")]), Label::set(vec![Label::name("b")])]);
        for n in 0..=3 {
            let s = FinSet::canonical(n);
            assert_eq!(spec(&powerset_algebra(&s, &cfg()).unwrap()).unwrap().len(), n);
            assert_eq!(spec_to_beta(&s, &cfg()).unwrap().forward().dom().len(), n);
        }
    }

    #[test]
    fn powerset_of_coproduct_is_product() {
        for nx in 0..=2 {
            for ny in 0..=2 {
                let x = FinSet::canonical(nx);
                let y = FinSet::new((0..ny as i64).map(|i| Label::int(10 + i))).unwrap();
                let sum = finset::coproduct(&x, &y).apex;
                let lhs = powerset_algebra(&sum, &cfg()).unwrap();
                let rhs =
                    BoolAlg::product(&powerset_algebra(&x, &cfg()).unwrap(), &powerset_algebra(&y, &cfg()).unwrap())
                        .unwrap();
                assert!(find_algebra_iso(&lhs, &rhs).is_some(), "{nx} {ny}");
            }
        }
        let p1 = powerset_algebra(&FinSet::canonical(1), &cfg()).unwrap();
        let p2 = powerset_algebra(&FinSet::canonical(2), &cfg()).unwrap();
        assert!(find_algebra_iso(&p1, &p2).is_none());
    }

    #[test]
    fn invalid_algebra_is_rejected() {
        // Two elements with meet = join = constant 0 violate the identity law.
        let c = FinSet::canonical(2);
        let r = BoolAlg::new(c, vec![0; 4], vec![0; 4], vec![1, 0], 0, 1);
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn coproduct_iso_examples() {
        let e = FinSet::empty();
        let t = FinSet::canonical(2);
        let iso = beta_coproduct_iso(&e, &t, &cfg()).unwrap();
        assert_eq!(iso.forward().dom().len(), 2);
        let one = FinSet::canonical(1);
        assert_eq!(beta_coproduct_iso(&one, &one, &cfg()).unwrap().forward().dom().len(), 2);
        let iso = beta_coproduct_iso(&t, &t, &cfg()).unwrap();
        assert_eq!(iso.forward().dom().len(), 4);
        assert!(compose(iso.backward(), iso.forward()).unwrap().is_identity());
    }

    #[test]
    fn recover_bijection_examples() {
        let s = FinSet::canonical(3);
        let bs = beta(&s, &cfg()).unwrap();
        let id = Iso::identity(bs.carrier());
        assert!(recover_bijection(&id, &bs, &bs).unwrap().forward().is_identity());
        let sigma = FinMap::from_indices(s.clone(), s.clone(), vec![2, 0, 1]).unwrap();
        let bsigma = beta_map(&sigma, &bs, &bs).unwrap();
        let iso = Iso::from_bijection(bsigma).unwrap();
        assert_eq!(recover_bijection(&iso, &bs, &bs).unwrap().forward(), &sigma);
        let bt = beta(&FinSet::canonical(2), &cfg()).unwrap();
        assert!(matches!(recover_bijection(&id, &bs, &bt), Err(Error::NotAnIso(_))));
    }
}
