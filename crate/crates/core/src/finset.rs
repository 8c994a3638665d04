//! The category of finite sets: objects, total maps, limits and colimits.
//!
//! Carriers are stored sorted, and maps store their graph as indices into the
//! sorted codomain. Computed objects use canonical labels: products and fiber
//! products are tuples in lexicographic order, coproducts are `L`/`R` tagged
//! labels, and coequalizer classes are named by their least member.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::label::{Label, Side};
use crate::union_find::UnionFind;

/// A finite set of distinct labels in canonical (sorted) order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSet {
    elems: Arc<[Label]>,
}

impl FinSet {
    /// Builds a set from labels in any order; rejects duplicates.
    pub fn new(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let mut v: Vec<Label> = labels.into_iter().collect();
        v.sort();
        if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel(w[0].clone()));
        }
        Ok(FinSet { elems: v.into() })
    }

    pub fn empty() -> Self {
        FinSet { elems: Arc::from(Vec::new()) }
    }

    /// The set `{0, 1, …, n-1}` of integer labels.
    pub fn canonical(n: usize) -> Self {
        FinSet { elems: (0..n as i64).map(Label::Int).collect() }
    }

    /// Caller guarantees `v` is strictly increasing.
    pub(crate) fn from_sorted(v: Vec<Label>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "labels not strictly sorted");
        FinSet { elems: v.into() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Label] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Label> {
        self.elems.iter()
    }

    pub fn get(&self, i: usize) -> &Label {
        &self.elems[i]
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.elems.binary_search(l).ok()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.index_of(l).is_some()
    }

    /// The subset made of the elements at the given (increasing) indices.
    pub fn subset(&self, indices: &[usize]) -> FinSet {
        FinSet::from_sorted(indices.iter().map(|&i| self.elems[i].clone()).collect())
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A total function between finite sets.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinMap {
    dom: FinSet,
    cod: FinSet,
    table: Arc<[usize]>,
}

impl FinMap {
    /// Builds a map from `(input, output)` pairs.
    pub fn new(dom: FinSet, cod: FinSet, pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self> {
        let mut table = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.index_of(&x).ok_or_else(|| Error::KeyOutsideDomain(x.clone()))?;
            let j = cod.index_of(&y).ok_or(Error::ValueOutsideCodomain(y))?;
            if table[i] != usize::MAX && table[i] != j {
                return Err(Error::ConflictingAssignment(x));
            }
            table[i] = j;
        }
        if let Some(i) = table.iter().position(|&j| j == usize::MAX) {
            return Err(Error::NotTotal(dom.get(i).clone()));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(&Label) -> Label) -> Result<Self> {
        let pairs: Vec<_> = dom.iter().map(|x| (x.clone(), f(x))).collect();
        FinMap::new(dom, cod, pairs)
    }

    /// Builds a map from its graph given as codomain indices in domain order.
    pub fn from_indices(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            let missing = dom.elements().get(table.len()).cloned().unwrap_or(Label::Int(-1));
            return Err(Error::NotTotal(missing));
        }
        if let Some(&j) = table.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::ValueOutsideCodomain(Label::Int(j as i64)));
        }
        Ok(FinMap { dom, cod, table: table.into() })
    }

    pub(crate) fn from_indices_unchecked(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), dom.len());
        debug_assert!(table.iter().all(|&j| j < cod.len()));
        FinMap { dom, cod, table: table.into() }
    }

    pub fn identity(x: &FinSet) -> Self {
        FinMap { dom: x.clone(), cod: x.clone(), table: (0..x.len()).collect() }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    /// Codomain indices in domain order.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply(&self, x: &Label) -> Option<&Label> {
        self.dom.index_of(x).map(|i| self.cod.get(self.table[i]))
    }

    pub fn is_epi(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in self.table.iter() {
            hit[j] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_mono(&self) -> bool {
        let mut hit = vec![false; self.cod.len()];
        for &j in self.table.iter() {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        true
    }

    pub fn is_iso(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_mono()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_iso() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (i, &j) in self.table.iter().enumerate() {
            inv[j] = i;
        }
        Some(FinMap::from_indices_unchecked(self.cod.clone(), self.dom.clone(), inv))
    }

    /// Domain indices mapped to codomain index `j`.
    pub fn fiber(&self, j: usize) -> Vec<usize> {
        (0..self.table.len()).filter(|&i| self.table[i] == j).collect()
    }
}

impl fmt::Debug for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}↦{}", self.dom.get(i), self.cod.get(j))?;
        }
        write!(f, "] : {} → {}", self.dom, self.cod)
    }
}

/// `g∘f`.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap> {
    if f.cod != g.dom {
        return Err(Error::NonComposable);
    }
    let table = f.table.iter().map(|&j| g.table[j]).collect();
    Ok(FinMap::from_indices_unchecked(f.dom.clone(), g.cod.clone(), table))
}

/// A pair of mutually inverse maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iso {
    forward: FinMap,
    backward: FinMap,
}

impl Iso {
    pub fn new(forward: FinMap, backward: FinMap) -> Result<Self> {
        if forward.dom != backward.cod || forward.cod != backward.dom {
            return Err(Error::NotAnIso("directions do not match up".into()));
        }
        if !compose(&backward, &forward)?.is_identity() {
            return Err(Error::NotAnIso("backward∘forward is not the identity".into()));
        }
        if !compose(&forward, &backward)?.is_identity() {
            return Err(Error::NotAnIso("forward∘backward is not the identity".into()));
        }
        Ok(Iso { forward, backward })
    }

    /// Wraps a bijection together with its inverse.
    pub fn from_bijection(forward: FinMap) -> Result<Self> {
        let backward = forward.inverse().ok_or_else(|| Error::NotAnIso("map is not a bijection".into()))?;
        Ok(Iso { forward, backward })
    }

    pub fn identity(x: &FinSet) -> Self {
        Iso { forward: FinMap::identity(x), backward: FinMap::identity(x) }
    }

    pub fn forward(&self) -> &FinMap {
        &self.forward
    }

    pub fn backward(&self) -> &FinMap {
        &self.backward
    }

    pub fn inverse(&self) -> Iso {
        Iso { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `other∘self`.
    pub fn then(&self, other: &Iso) -> Result<Iso> {
        Ok(Iso {
            forward: compose(&other.forward, &self.forward)?,
            backward: compose(&self.backward, &other.backward)?,
        })
    }
}

/// A family of maps out of a common apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub apex: FinSet,
    pub legs: Vec<FinMap>,
}

/// A family of maps into a common apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocone {
    pub apex: FinSet,
    pub legs: Vec<FinMap>,
}

impl Cone {
    pub fn new(apex: FinSet, legs: Vec<FinMap>) -> Result<Self> {
        if legs.iter().any(|l| l.dom != apex) {
            return Err(Error::Invariant("cone leg does not start at the apex".into()));
        }
        Ok(Cone { apex, legs })
    }
}

impl Cocone {
    pub fn new(apex: FinSet, legs: Vec<FinMap>) -> Result<Self> {
        if legs.iter().any(|l| l.cod != apex) {
            return Err(Error::Invariant("cocone leg does not end at the apex".into()));
        }
        Ok(Cocone { apex, legs })
    }
}

/// `X × Y` with its two projections.
pub fn product(x: &FinSet, y: &FinSet) -> Cone {
    product_many(&[x.clone(), y.clone()])
}

/// The product of a list of sets; elements are tuples in lexicographic order.
/// The empty product is the one-point set `{()}`.
pub fn product_many(factors: &[FinSet]) -> Cone {
    let total: usize = factors.iter().map(FinSet::len).product();
    let mut labels = Vec::with_capacity(total);
    let mut coords: Vec<Vec<usize>> = vec![Vec::with_capacity(total); factors.len()];
    let mut digits = vec![0usize; factors.len()];
    for _ in 0..total {
        labels.push(Label::tuple(digits.iter().zip(factors).map(|(&d, s)| s.get(d).clone()).collect()));
        for (k, &d) in digits.iter().enumerate() {
            coords[k].push(d);
        }
        // Odometer with the last factor varying fastest keeps tuples sorted.
        for k in (0..factors.len()).rev() {
            digits[k] += 1;
            if digits[k] < factors[k].len() {
                break;
            }
            digits[k] = 0;
        }
    }
    let apex = FinSet::from_sorted(labels);
    let legs = coords
        .into_iter()
        .zip(factors)
        .map(|(t, s)| FinMap::from_indices_unchecked(apex.clone(), s.clone(), t))
        .collect();
    Cone { apex, legs }
}

/// `X ⊔ Y` with its two injections; elements are tagged `L`/`R`.
pub fn coproduct(x: &FinSet, y: &FinSet) -> Cocone {
    let labels: Vec<Label> = x
        .iter()
        .map(|l| Label::tagged(Side::L, l.clone()))
        .chain(y.iter().map(|l| Label::tagged(Side::R, l.clone())))
        .collect();
    let apex = FinSet::from_sorted(labels);
    let i1 = FinMap::from_indices_unchecked(x.clone(), apex.clone(), (0..x.len()).collect());
    let i2 = FinMap::from_indices_unchecked(y.clone(), apex.clone(), (x.len()..x.len() + y.len()).collect());
    Cocone { apex, legs: vec![i1, i2] }
}

/// `f ⊔ g : X ⊔ Y → X' ⊔ Y'`.
pub fn coproduct_map(f: &FinMap, g: &FinMap) -> FinMap {
    let src = coproduct(&f.dom, &g.dom);
    let dst = coproduct(&f.cod, &g.cod);
    let off = f.cod.len();
    let table = f.table.iter().copied().chain(g.table.iter().map(|&j| j + off)).collect();
    FinMap::from_indices_unchecked(src.apex, dst.apex, table)
}

/// `X ×_Z Y` for `f: X → Z`, `g: Y → Z`, with projections.
pub fn fiber_product(f: &FinMap, g: &FinMap) -> Result<Cone> {
    if f.cod != g.cod {
        return Err(Error::CodomainMismatch);
    }
    let mut labels = Vec::new();
    let (mut t1, mut t2) = (Vec::new(), Vec::new());
    for (i, &fi) in f.table.iter().enumerate() {
        for (j, &gj) in g.table.iter().enumerate() {
            if fi == gj {
                labels.push(Label::pair(f.dom.get(i).clone(), g.dom.get(j).clone()));
                t1.push(i);
                t2.push(j);
            }
        }
    }
    let apex = FinSet::from_sorted(labels);
    let p1 = FinMap::from_indices_unchecked(apex.clone(), f.dom.clone(), t1);
    let p2 = FinMap::from_indices_unchecked(apex.clone(), g.dom.clone(), t2);
    Ok(Cone { apex, legs: vec![p1, p2] })
}

fn check_parallel(f: &FinMap, g: &FinMap) -> Result<()> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::NotParallel);
    }
    Ok(())
}

/// The subset of the domain where `f` and `g` agree, with its inclusion.
pub fn equalizer(f: &FinMap, g: &FinMap) -> Result<Cone> {
    check_parallel(f, g)?;
    let keep: Vec<usize> = (0..f.dom.len()).filter(|&i| f.table[i] == g.table[i]).collect();
    let apex = f.dom.subset(&keep);
    let incl = FinMap::from_indices_unchecked(apex.clone(), f.dom.clone(), keep);
    Ok(Cone { apex, legs: vec![incl] })
}

/// The quotient of the codomain by the equivalence generated by `f(x) ~ g(x)`.
/// Each class is named by its least label.
pub fn coequalizer(f: &FinMap, g: &FinMap) -> Result<Cocone> {
    check_parallel(f, g)?;
    let mut uf = UnionFind::new(f.cod.len());
    for (&a, &b) in f.table.iter().zip(g.table.iter()) {
        uf.union(a, b);
    }
    // Classes are numbered by least member and the codomain is sorted, so the
    // least member of each class is its least label and the quotient stays sorted.
    let (count, class) = uf.classes();
    let mut reps = vec![usize::MAX; count];
    for (i, &c) in class.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = i;
        }
    }
    let apex = FinSet::from_sorted(reps.iter().map(|&i| f.cod.get(i).clone()).collect());
    let proj = FinMap::from_indices_unchecked(f.cod.clone(), apex.clone(), class);
    Ok(Cocone { apex, legs: vec![proj] })
}

/// The order-preserving bijection `X → {0,…,|X|-1}`.
pub fn order_iso(x: &FinSet) -> FinMap {
    FinMap::from_indices_unchecked(x.clone(), FinSet::canonical(x.len()), (0..x.len()).collect())
}

/// The unique `u` with `incl∘u = h`, if `h` lands in the image of the mono `incl`.
pub fn factor_through_mono(h: &FinMap, incl: &FinMap) -> Option<FinMap> {
    if h.cod != incl.cod || !incl.is_mono() {
        return None;
    }
    let mut back = vec![usize::MAX; incl.cod.len()];
    for (i, &j) in incl.table.iter().enumerate() {
        back[j] = i;
    }
    let table: Option<Vec<usize>> = h.table.iter().map(|&j| (back[j] != usize::MAX).then_some(back[j])).collect();
    Some(FinMap::from_indices_unchecked(h.dom.clone(), incl.dom.clone(), table?))
}

/// The unique `u` with `u∘epi = h`, if `h` is constant on the fibers of the epi.
pub fn factor_through_epi(h: &FinMap, epi: &FinMap) -> Option<FinMap> {
    if h.dom != epi.dom || !epi.is_epi() {
        return None;
    }
    let mut table = vec![usize::MAX; epi.cod.len()];
    for (i, &q) in epi.table.iter().enumerate() {
        let v = h.table[i];
        if table[q] == usize::MAX {
            table[q] = v;
        } else if table[q] != v {
            return None;
        }
    }
    Some(FinMap::from_indices_unchecked(epi.cod.clone(), h.cod.clone(), table))
}

/// Every map `dom → cod`, in order of the base-`|cod|` code with the first
/// domain element as least significant digit.
pub fn all_maps(dom: &FinSet, cod: &FinSet) -> AllMaps {
    let count = map_count(dom.len(), cod.len());
    AllMaps { dom: dom.clone(), cod: cod.clone(), next: 0, count }
}

/// `n^m` with `0^0 = 1`.
pub fn map_count(m: usize, n: usize) -> usize {
    n.checked_pow(m as u32).expect("hom-set size overflows usize")
}

/// Decodes a map code into its index table.
pub fn decode_map(code: usize, m: usize, n: usize) -> Vec<usize> {
    let mut c = code;
    (0..m)
        .map(|_| {
            let d = c % n;
            c /= n;
            d
        })
        .collect()
}

/// Inverse of [`decode_map`].
pub fn encode_map(table: &[usize], n: usize) -> usize {
    table.iter().rev().fold(0, |acc, &d| acc * n + d)
}

pub struct AllMaps {
    dom: FinSet,
    cod: FinSet,
    next: usize,
    count: usize,
}

impl Iterator for AllMaps {
    type Item = FinMap;

    fn next(&mut self) -> Option<FinMap> {
        if self.next >= self.count {
            return None;
        }
        let table = decode_map(self.next, self.dom.len(), self.cod.len());
        self.next += 1;
        Some(FinMap::from_indices_unchecked(self.dom.clone(), self.cod.clone(), table))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.count - self.next;
        (r, Some(r))
    }
}
