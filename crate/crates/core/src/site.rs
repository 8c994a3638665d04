//! The skeletal site of finite sets: one canonical object `{0,…,n-1}` for
//! each cardinality `n ≤ M`, with every map between them enumerated.
//!
//! Maps are identified by their code (see [`finset::encode_map`]). Any map
//! between arbitrary finite sets of size at most `M` is carried to the site
//! along the order-preserving bijections; its index table is the site map.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{self, FinMap, FinSet};

/// Largest supported `M`; hom-sets grow as `n^m`.
pub const MAX_SITE_CARD: usize = 6;

#[derive(Debug)]
struct SiteInner {
    max_card: usize,
    max_cover_size: usize,
    objects: Vec<FinSet>,
    homs: Vec<Vec<Vec<FinMap>>>,
}

#[derive(Clone, Debug)]
pub struct Site(Arc<SiteInner>);

impl PartialEq for Site {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.max_card == other.0.max_card && self.0.max_cover_size == other.0.max_cover_size)
    }
}

impl Eq for Site {}

/// A site map as `(dom card, cod card, code)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MapId {
    pub dom: usize,
    pub cod: usize,
    pub code: usize,
}

impl std::fmt::Display for MapId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let table = finset::decode_map(self.code, self.dom, self.cod);
        write!(f, "{}->{}:", self.dom, self.cod)?;
        for (i, v) in table.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Site {
    pub fn new(max_card: usize, max_cover_size: usize) -> Result<Self> {
        if max_cover_size * max_cover_size > max_card {
            return Err(Error::BoundViolation(format!(
                "cover size {max_cover_size} squared exceeds max cardinality {max_card}"
            )));
        }
        if max_card > MAX_SITE_CARD {
            return Err(Error::BoundViolation(format!("max cardinality {max_card} exceeds {MAX_SITE_CARD}")));
        }
        let objects: Vec<FinSet> = (0..=max_card).map(FinSet::canonical).collect();
        let homs = objects.iter().map(|a| objects.iter().map(|b| finset::all_maps(a, b).collect()).collect()).collect();
        Ok(Site(Arc::new(SiteInner { max_card, max_cover_size, objects, homs })))
    }

    pub fn max_card(&self) -> usize {
        self.0.max_card
    }

    pub fn max_cover_size(&self) -> usize {
        self.0.max_cover_size
    }

    pub fn objects(&self) -> &[FinSet] {
        &self.0.objects
    }

    pub fn object(&self, n: usize) -> &FinSet {
        &self.0.objects[n]
    }

    /// All maps `a → b` in code order.
    pub fn hom(&self, a: usize, b: usize) -> &[FinMap] {
        &self.0.homs[a][b]
    }

    pub fn map(&self, id: MapId) -> &FinMap {
        &self.0.homs[id.dom][id.cod][id.code]
    }

    pub fn map_ids(&self) -> impl Iterator<Item = MapId> + '_ {
        let m = self.0.max_card;
        (0..=m).flat_map(move |a| {
            (0..=m).flat_map(move |b| (0..self.0.homs[a][b].len()).map(move |code| MapId { dom: a, cod: b, code }))
        })
    }

    pub fn map_count(&self) -> usize {
        self.0.homs.iter().flatten().map(Vec::len).sum()
    }

    /// Identifies any map between sets of size at most `M` with a site map.
    pub fn id_of(&self, f: &FinMap) -> Result<MapId> {
        let (a, b) = (f.dom().len(), f.cod().len());
        let m = self.0.max_card;
        if a > m || b > m {
            return Err(Error::SizeBoundExceeded { what: "site object", size: a.max(b), bound: m });
        }
        Ok(MapId { dom: a, cod: b, code: finset::encode_map(f.table(), b) })
    }

    /// The site map corresponding to `f`.
    pub fn transport(&self, f: &FinMap) -> Result<&FinMap> {
        Ok(self.map(self.id_of(f)?))
    }

    pub fn identity(&self, n: usize) -> MapId {
        MapId { dom: n, cod: n, code: finset::encode_map(&(0..n).collect::<Vec<_>>(), n) }
    }

    /// The inclusion of `n1` or `n2` into `n1 + n2` as first or second summand.
    pub fn summand_inclusion(&self, n1: usize, n2: usize, second: bool) -> MapId {
        let n = n1 + n2;
        let table: Vec<usize> = if second { (n1..n).collect() } else { (0..n1).collect() };
        MapId { dom: table.len(), cod: n, code: finset::encode_map(&table, n) }
    }

    /// The map `1 → n` picking out `x`.
    pub fn point(&self, n: usize, x: usize) -> MapId {
        MapId { dom: 1, cod: n, code: x }
    }

    /// `g∘f` as a site map.
    pub fn compose_ids(&self, g: MapId, f: MapId) -> MapId {
        debug_assert_eq!(f.cod, g.dom);
        let ft = finset::decode_map(f.code, f.dom, f.cod);
        let gt = finset::decode_map(g.code, g.dom, g.cod);
        let t: Vec<usize> = ft.iter().map(|&j| gt[j]).collect();
        MapId { dom: f.dom, cod: g.cod, code: finset::encode_map(&t, g.cod) }
    }
}
