//! Partitions of a finite set ordered by refinement, the diagram
//! `U ↦ ∏_i G(βU_i)` over them, its colimit `G⁺`, and sheafification
//! `F♯ = ex(res(F)⁺)`.

use std::collections::HashMap;

use crate::descent::{ex_res_unit, extend, extend_nat, restrict, BetaPresheaf};
use crate::error::{Error, Result};
use crate::finset::{self, FinMap, FinSet};
use crate::label::Label;
use crate::presheaf::{check_times, product_presheaf, CheckReport, NatIso, NatTrans, Presheaf};
use crate::stone::{beta_any, beta_map, BetaConfig, BetaSet};
use crate::union_find::UnionFind;

/// Largest base set whose partitions are enumerated.
pub const PARTITION_BOUND: usize = 5;

/// A partition of `base` into blocks of element indices, ordered by least
/// element. The empty base has two partitions: the trivial one with the single
/// block `∅`, and the empty covering with no blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    base: FinSet,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates a partition given by blocks of labels.
    pub fn new(base: &FinSet, blocks: Vec<Vec<Label>>) -> Result<Self> {
        let mut idx_blocks = Vec::with_capacity(blocks.len());
        let mut seen = vec![false; base.len()];
        for block in blocks {
            if block.is_empty() && !base.is_empty() {
                return Err(Error::InvalidPartition("empty block over a nonempty base".into()));
            }
            let mut ix = Vec::with_capacity(block.len());
            for l in block {
                let i = base.index_of(&l).ok_or_else(|| Error::InvalidPartition(format!("{l} is not in the base")))?;
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("{l} lies in two blocks")));
                }
                ix.push(i);
            }
            ix.sort_unstable();
            idx_blocks.push(ix);
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("blocks do not cover the base".into()));
        }
        if base.is_empty() && idx_blocks.len() > 1 {
            return Err(Error::InvalidPartition("the empty base has at most one block".into()));
        }
        idx_blocks.sort_by_key(|b| b.first().copied());
        Ok(Partition { base: base.clone(), blocks: idx_blocks })
    }

    fn from_indices(base: &FinSet, mut blocks: Vec<Vec<usize>>) -> Self {
        blocks.sort_by_key(|b| b.first().copied());
        Partition { base: base.clone(), blocks }
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_set(&self, i: usize) -> FinSet {
        self.base.subset(&self.blocks[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_discrete(&self) -> bool {
        if self.base.is_empty() {
            self.blocks.is_empty()
        } else {
            self.blocks.iter().all(|b| b.len() == 1)
        }
    }

    /// The refinement `self → coarser`, if every block of `self` lies in a
    /// block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Option<Refinement> {
        if self.base != coarser.base {
            return None;
        }
        let mut owner = vec![usize::MAX; self.base.len()];
        for (i, b) in coarser.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = i;
            }
        }
        let block_map = self
            .blocks
            .iter()
            .map(|b| match b.first() {
                // Only the trivial partition of ∅ has an empty block.
                None => coarser.blocks.iter().position(Vec::is_empty),
                Some(&x) => {
                    let i = owner[x];
                    b.iter().all(|&y| owner[y] == i).then_some(i)
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Refinement { from: self.clone(), to: coarser.clone(), block_map })
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.base.subset(b))?;
        }
        f.write_str("}")
    }
}

/// `V → U`: each block of `V` is assigned the block of `U` containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub from: Partition,
    pub to: Partition,
    pub block_map: Vec<usize>,
}

/// All partitions of `s` by restricted-growth strings. Index 0 is the trivial
/// partition and the last one is the discrete partition.
pub fn partitions(s: &FinSet) -> Result<Vec<Partition>> {
    let n = s.len();
    if n > PARTITION_BOUND {
        return Err(Error::SizeBoundExceeded { what: "partition enumeration", size: n, bound: PARTITION_BOUND });
    }
    if n == 0 {
        return Ok(vec![Partition::from_indices(s, vec![vec![]]), Partition::from_indices(s, vec![])]);
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (x, &b) in rgs.iter().enumerate() {
            blocks[b].push(x);
        }
        out.push(Partition::from_indices(s, blocks));
        // Next restricted-growth string: rgs[i] ≤ 1 + max(rgs[..i]).
        let mut i = n - 1;
        loop {
            let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
            if i > 0 && rgs[i] <= prefix_max {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                break;
            }
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
        }
    }
}

/// Every refinement `(finer index, coarser index, refinement)`, identities included.
pub fn refinement_poset(s: &FinSet) -> Result<Vec<(usize, usize, Refinement)>> {
    let ps = partitions(s)?;
    let mut out = Vec::new();
    for (v, pv) in ps.iter().enumerate() {
        for (u, pu) in ps.iter().enumerate() {
            if let Some(r) = pv.refines(pu) {
                out.push((v, u, r));
            }
        }
    }
    Ok(out)
}

/// The partition of nonempty intersections, with its refinements onto both.
pub fn common_refinement(u: &Partition, v: &Partition) -> Result<(Partition, Refinement, Refinement)> {
    if u.base != v.base {
        return Err(Error::BaseMismatch);
    }
    let w = if u.base.is_empty() {
        let blocks = if u.is_trivial() && v.is_trivial() { vec![vec![]] } else { vec![] };
        Partition::from_indices(&u.base, blocks)
    } else {
        let mut blocks = Vec::new();
        for bu in &u.blocks {
            for bv in &v.blocks {
                let meet: Vec<usize> = bu.iter().copied().filter(|x| bv.contains(x)).collect();
                if !meet.is_empty() {
                    blocks.push(meet);
                }
            }
        }
        Partition::from_indices(&u.base, blocks)
    };
    let psi = w.refines(u).ok_or_else(|| Error::Invariant("intersection does not refine U".into()))?;
    let phi = w.refines(v).ok_or_else(|| Error::Invariant("intersection does not refine V".into()))?;
    Ok((w, psi, phi))
}

/// Coordinates of element `idx` of a product with the given factor sizes;
/// the last factor varies fastest.
fn mixed_digits(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut d = vec![0; radices.len()];
    for (slot, &r) in d.iter_mut().zip(radices).rev() {
        *slot = idx % r;
        idx /= r;
    }
    d
}

fn mixed_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// β of each subset of a base, keyed by bitmask.
struct SubsetBetas {
    base: FinSet,
    betas: HashMap<usize, BetaSet>,
}

impl SubsetBetas {
    fn new(base: &FinSet) -> Self {
        SubsetBetas { base: base.clone(), betas: HashMap::new() }
    }

    fn get(&mut self, block: &[usize]) -> Result<&BetaSet> {
        let mask = block.iter().map(|&i| 1usize << i).sum();
        if !self.betas.contains_key(&mask) {
            let b = beta_any(&self.base.subset(block), &BetaConfig::default())?;
            self.betas.insert(mask, b);
        }
        Ok(&self.betas[&mask])
    }
}

/// `F_S : U ↦ ∏_i G(βU_i)` over the partitions of `S`.
#[derive(Clone, Debug)]
pub struct PlusDiagram {
    pub base: FinSet,
    pub partitions: Vec<Partition>,
    pub carriers: Vec<FinSet>,
    /// `(v, u, F_S(U) → F_S(V))` for every refinement `V → U`.
    pub maps: Vec<(usize, usize, FinMap)>,
}

pub fn plus_diagram(g: &BetaPresheaf, s: &FinSet) -> Result<PlusDiagram> {
    let partitions = partitions(s)?;
    let mut betas = SubsetBetas::new(s);
    let carriers: Vec<FinSet> = partitions
        .iter()
        .map(|p| {
            let factors: Vec<FinSet> = p.blocks.iter().map(|b| g.inner().value(b.len()).clone()).collect();
            finset::product_many(&factors).apex
        })
        .collect();
    let radices = |p: &Partition| -> Vec<usize> { p.blocks.iter().map(|b| g.inner().value(b.len()).len()).collect() };
    let mut maps = Vec::new();
    for (v, pv) in partitions.iter().enumerate() {
        for (u, pu) in partitions.iter().enumerate() {
            let Some(r) = pv.refines(pu) else { continue };
            // G(β ι_j) : G(βU_ψ(j)) → G(βV_j) for the inclusion ι_j : V_j → U_ψ(j).
            let block_maps = pv
                .blocks
                .iter()
                .zip(&r.block_map)
                .map(|(vb, &i)| {
                    let ub = &pu.blocks[i];
                    let incl = FinMap::from_indices(
                        s.subset(vb),
                        s.subset(ub),
                        vb.iter().map(|x| ub.binary_search(x).expect("block inclusion")).collect(),
                    )?;
                    let bv = betas.get(vb)?.clone();
                    let bu = betas.get(ub)?.clone();
                    g.act(&beta_map(&incl, &bv, &bu)?, &bv, &bu)
                })
                .collect::<Result<Vec<_>>>()?;
            let (ru, rv) = (radices(pu), radices(pv));
            let table = (0..carriers[u].len())
                .map(|e| {
                    let du = mixed_digits(e, &ru);
                    let dv: Vec<usize> =
                        block_maps.iter().zip(&r.block_map).map(|(m, &i)| m.apply_index(du[i])).collect();
                    mixed_index(&dv, &rv)
                })
                .collect();
            maps.push((v, u, FinMap::from_indices(carriers[u].clone(), carriers[v].clone(), table)?));
        }
    }
    Ok(PlusDiagram { base: s.clone(), partitions, carriers, maps })
}

impl PlusDiagram {
    fn map(&self, v: usize, u: usize) -> Option<&FinMap> {
        self.maps.iter().find(|(a, b, _)| *a == v && *b == u).map(|(_, _, m)| m)
    }

    /// Identities go to identities and `W → V → U` composes.
    pub fn check_functorial(&self) -> Result<()> {
        for (v, u, m) in &self.maps {
            if v == u && !m.is_identity() {
                return Err(Error::FunctorLawViolation(format!(
                    "diagram map at {} is not the identity",
                    self.partitions[*v]
                )));
            }
        }
        for (w, v, m_wv) in &self.maps {
            for (v2, u, m_vu) in &self.maps {
                if v2 != v {
                    continue;
                }
                let m_wu = self.map(*w, *u).ok_or_else(|| Error::Invariant("refinement is not transitive".into()))?;
                if finset::compose(m_wv, m_vu)? != *m_wu {
                    return Err(Error::FunctorLawViolation(format!(
                        "diagram fails on {} → {} → {}",
                        self.partitions[*w], self.partitions[*v], self.partitions[*u]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `colim F_S` with a leg out of each `F_S(U)`.
#[derive(Clone, Debug)]
pub struct ColimitSet {
    pub apex: FinSet,
    pub legs: Vec<FinMap>,
}

/// Tagged union of all `F_S(U)` modulo `s ~ F_S(V → U)(s)`. Each class is
/// labelled `(U, s)` by its member with least partition index, then least element.
pub fn filtered_colimit(d: &PlusDiagram) -> Result<ColimitSet> {
    let mut offset = vec![0usize; d.carriers.len() + 1];
    for (i, c) in d.carriers.iter().enumerate() {
        offset[i + 1] = offset[i] + c.len();
    }
    let mut uf = UnionFind::new(offset[d.carriers.len()]);
    for (v, u, m) in &d.maps {
        for (s, &t) in m.table().iter().enumerate() {
            uf.union(offset[*u] + s, offset[*v] + t);
        }
    }
    let (count, class) = uf.classes();
    let mut labels: Vec<Option<Label>> = vec![None; count];
    for (p, c) in d.carriers.iter().enumerate() {
        for (s, l) in c.iter().enumerate() {
            let k = class[offset[p] + s];
            if labels[k].is_none() {
                labels[k] = Some(Label::pair(Label::int(p as i64), l.clone()));
            }
        }
    }
    let apex = FinSet::new(labels.into_iter().map(|l| l.expect("every class has a member")))?;
    let legs = d
        .carriers
        .iter()
        .enumerate()
        .map(|(p, c)| FinMap::from_indices(c.clone(), apex.clone(), class[offset[p]..offset[p + 1]].to_vec()))
        .collect::<Result<_>>()?;
    Ok(ColimitSet { apex, legs })
}

/// The result of [`plus`]: `G⁺`, the unit `η : G → G⁺`, and the colimit data
/// per site object.
#[derive(Clone, Debug)]
pub struct Plus {
    pub presheaf: BetaPresheaf,
    pub eta: NatTrans,
    pub diagrams: Vec<PlusDiagram>,
    pub colimits: Vec<ColimitSet>,
}

/// `G⁺(βS) = colim F_S`. A map `f : A → B` pulls a partition `U` of `B` back
/// to the blocks `f⁻¹(U_i)` that are nonempty, and acts blockwise by `G(β f|)`.
pub fn plus(g: &BetaPresheaf) -> Result<Plus> {
    let site = g.inner().site().clone();
    let m = site.max_card();
    let diagrams: Vec<PlusDiagram> = (0..=m).map(|n| plus_diagram(g, site.object(n))).collect::<Result<_>>()?;
    let colimits: Vec<ColimitSet> = diagrams.iter().map(filtered_colimit).collect::<Result<_>>()?;
    let index_of_partition: Vec<HashMap<Vec<Vec<usize>>, usize>> = diagrams
        .iter()
        .map(|d| d.partitions.iter().enumerate().map(|(i, p)| (p.blocks.clone(), i)).collect())
        .collect();
    let mut betas: Vec<SubsetBetas> = (0..=m).map(|n| SubsetBetas::new(site.object(n))).collect();
    let values: Vec<FinSet> = colimits.iter().map(|c| c.apex.clone()).collect();

    let mut tables = vec![vec![Vec::new(); m + 1]; m + 1];
    for id in site.map_ids() {
        let f = site.map(id).clone();
        let db = &diagrams[id.cod];
        let mut table = vec![usize::MAX; colimits[id.cod].apex.len()];
        for (u, pu) in db.partitions.iter().enumerate() {
            let mut pulled = Vec::new();
            let mut kept = Vec::new();
            for (i, ub) in pu.blocks.iter().enumerate() {
                let pre: Vec<usize> = (0..id.dom).filter(|&x| ub.contains(&f.apply_index(x))).collect();
                if !pre.is_empty() {
                    pulled.push(pre);
                    kept.push(i);
                }
            }
            sort_blocks(&mut pulled, &mut kept);
            let w = *index_of_partition[id.dom]
                .get(&pulled)
                .ok_or_else(|| Error::Invariant("pulled-back partition not enumerated".into()))?;
            let block_maps = pulled
                .iter()
                .zip(&kept)
                .map(|(pre, &i)| {
                    let ub = &pu.blocks[i];
                    let restricted = FinMap::from_indices(
                        site.object(id.dom).subset(pre),
                        site.object(id.cod).subset(ub),
                        pre.iter().map(|&x| ub.binary_search(&f.apply_index(x)).expect("image in block")).collect(),
                    )?;
                    let bp = betas[id.dom].get(pre)?.clone();
                    let bu = betas[id.cod].get(ub)?.clone();
                    g.act(&beta_map(&restricted, &bp, &bu)?, &bp, &bu)
                })
                .collect::<Result<Vec<_>>>()?;
            let ru: Vec<usize> = pu.blocks.iter().map(|b| g.inner().value(b.len()).len()).collect();
            let rw: Vec<usize> = pulled.iter().map(|b| g.inner().value(b.len()).len()).collect();
            for e in 0..db.carriers[u].len() {
                let du = mixed_digits(e, &ru);
                let dw: Vec<usize> = block_maps.iter().zip(&kept).map(|(bm, &i)| bm.apply_index(du[i])).collect();
                let image = colimits[id.dom].legs[w].apply_index(mixed_index(&dw, &rw));
                let class = colimits[id.cod].legs[u].apply_index(e);
                if table[class] == usize::MAX {
                    table[class] = image;
                } else if table[class] != image {
                    return Err(Error::Invariant(format!("G⁺({id}) is not well defined on colimit classes")));
                }
            }
        }
        tables[id.dom][id.cod].push(FinMap::from_indices(values[id.cod].clone(), values[id.dom].clone(), table)?);
    }
    let inner = Presheaf::new(&site, values, tables)?;
    let eta_components = (0..=m)
        .map(|n| {
            // The trivial partition has index 0 and F_S of it is G(βS) as 1-tuples.
            FinMap::from_indices(
                g.inner().value(n).clone(),
                inner.value(n).clone(),
                colimits[n].legs[0].table().to_vec(),
            )
        })
        .collect::<Result<_>>()?;
    let eta = NatTrans::new(g.inner(), &inner, eta_components)?;
    Ok(Plus { presheaf: BetaPresheaf::new(inner)?, eta, diagrams, colimits })
}

/// Sorts blocks by least element, permuting `kept` alongside.
fn sort_blocks(blocks: &mut Vec<Vec<usize>>, kept: &mut Vec<usize>) {
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| blocks[i][0]);
    *blocks = order.iter().map(|&i| blocks[i].clone()).collect();
    *kept = order.iter().map(|&i| kept[i]).collect();
}

/// Runs the product check on `G⁺`.
pub fn check_plus_times(g: &BetaPresheaf) -> Result<CheckReport> {
    Ok(check_times(plus(g)?.presheaf.inner()))
}

/// `F♯ = ex((res F)⁺)` with its unit `F → F♯`.
#[derive(Clone, Debug)]
pub struct Sharp {
    pub presheaf: Presheaf,
    pub unit: NatTrans,
}

pub fn sharp(f: &Presheaf) -> Result<Sharp> {
    let g = restrict(f)?;
    let p = plus(&g)?;
    let presheaf = extend(&p.presheaf)?;
    // F → ex res F → ex (res F)⁺
    let first = ex_res_unit(f)?;
    let second = extend_nat(&p.eta, &g, &p.presheaf)?;
    let unit = first.then(&second)?;
    Ok(Sharp { presheaf, unit })
}

/// `X ↦ ∏_{x ∈ X} F(1)`, restricting by reindexing.
pub fn sheafification_oracle(f: &Presheaf) -> Result<Presheaf> {
    product_presheaf(f.site(), f.value(1))
}

/// `F♯ ≅ oracle(F)`: `s ↦ (u⁻¹(F♯(x)(s)))_x` where `x : 1 → X` picks a point
/// and `u : F(1) → F♯(1)` is the unit at the point.
pub fn sharp_oracle_iso(f: &Presheaf, sh: &Sharp) -> Result<NatIso> {
    let oracle = sheafification_oracle(f)?;
    let site = f.site();
    let u_inv =
        sh.unit.component(1).inverse().ok_or_else(|| Error::NotAnIso("unit at the point is not bijective".into()))?;
    let k = f.value(1).len();
    let components = (0..=site.max_card())
        .map(|n| {
            let table = (0..sh.presheaf.value(n).len())
                .map(|s| {
                    let coords: Vec<usize> = (0..n)
                        .map(|x| u_inv.apply_index(sh.presheaf.restriction(site.point(n, x)).apply_index(s)))
                        .collect();
                    coords.iter().fold(0, |acc, &d| acc * k + d)
                })
                .collect();
            FinMap::from_indices(sh.presheaf.value(n).clone(), oracle.value(n).clone(), table)
        })
        .collect::<Result<_>>()?;
    NatIso::from_natural_bijection(NatTrans::new(&sh.presheaf, &oracle, components)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{check_star, constant, random_presheaf, representable};
    use crate::site::Site;

    fn bell(n: usize) -> usize {
        // Bell triangle.
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

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(&FinSet::empty()).unwrap().len(), 2);
        for n in 1..=5 {
            assert_eq!(partitions(&FinSet::canonical(n)).unwrap().len(), bell(n), "{n}");
        }
        assert_eq!(partitions(&FinSet::canonical(3)).unwrap().len(), 5);
        assert_eq!(partitions(&FinSet::canonical(4)).unwrap().len(), 15);
        let ps = partitions(&FinSet::canonical(3)).unwrap();
        assert!(ps[0].is_trivial() && ps.last().unwrap().is_discrete());
        assert!(partitions(&FinSet::canonical(6)).is_err());
    }

    #[test]
    fn refinement_rules() {
        let e = partitions(&FinSet::empty()).unwrap();
        assert!(e[1].refines(&e[0]).is_some());
        assert!(e[0].refines(&e[1]).is_none());
        let poset = refinement_poset(&FinSet::canonical(3)).unwrap();
        // 5 identities, 3 two-block partitions refine the trivial one, the
        // discrete one refines all 5.
        assert_eq!(poset.len(), 5 + 3 + 4);
    }

    #[test]
    fn common_refinement_examples() {
        let abc = FinSet::new(["a".into(), "b".into(), "c".into()]).unwrap();
        let p = |bs: Vec<Vec<&str>>| {
            Partition::new(&abc, bs.into_iter().map(|b| b.into_iter().map(Label::from).collect()).collect()).unwrap()
        };
        let u = p(vec![vec!["a", "b"], vec!["c"]]);
        let (w, psi, phi) = common_refinement(&u, &u).unwrap();
        assert_eq!(w, u);
        assert_eq!(psi.block_map, vec![0, 1]);
        assert_eq!(phi.block_map, vec![0, 1]);
        let v = p(vec![vec!["a"], vec!["b", "c"]]);
        let (w, _, _) = common_refinement(&u, &v).unwrap();
        assert_eq!(w, p(vec![vec!["a"], vec!["b"], vec!["c"]]));
        let ab = FinSet::new(["a".into(), "b".into()]).unwrap();
        let t = Partition::new(&ab, vec![vec!["a".into(), "b".into()]]).unwrap();
        let d = Partition::new(&ab, vec![vec!["a".into()], vec!["b".into()]]).unwrap();
        assert_eq!(common_refinement(&t, &d).unwrap().0, d);
        assert_eq!(common_refinement(&t, &u), Err(Error::BaseMismatch));
        assert!(matches!(Partition::new(&ab, vec![vec!["a".into()]]), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn diagram_and_colimit_closed_form() {
        let s = Site::new(4, 2).unwrap();
        let f = random_presheaf(&s, 11, 3).unwrap();
        let g = restrict(&f).unwrap();
        for n in 0..=4 {
            let d = plus_diagram(&g, s.object(n)).unwrap();
            d.check_functorial().unwrap();
            let c = filtered_colimit(&d).unwrap();
            let discrete = d.partitions.len() - 1;
            assert!(c.legs[discrete].is_iso(), "{n}");
            let expected: usize = (0..n).map(|_| g.inner().value(1).len()).product();
            assert_eq!(c.apex.len(), expected);
        }
    }

    #[test]
    fn plus_examples() {
        let s = Site::new(4, 2).unwrap();
        let c = constant(&s, &FinSet::canonical(2)).unwrap();
        let p = plus(&restrict(&c).unwrap()).unwrap();
        assert_eq!(p.presheaf.inner().value(0).len(), 1);
        assert!(check_times(p.presheaf.inner()).passed());
        let r = representable(&s, 2).unwrap();
        let p = plus(&restrict(&r).unwrap()).unwrap();
        assert!(p.eta.is_iso());
        // Applying the construction twice adds nothing.
        let pp = plus(&p.presheaf).unwrap();
        assert!(pp.eta.is_iso());
    }

    #[test]
    fn sharp_matches_oracle() {
        let s = Site::new(4, 2).unwrap();
        for seed in 0..4 {
            let f = random_presheaf(&s, seed, 3).unwrap();
            let sh = sharp(&f).unwrap();
            assert!(check_times(&sh.presheaf).passed());
            assert!(check_star(&sh.presheaf).passed());
            sharp_oracle_iso(&f, &sh).unwrap();
        }
        let two = constant(&s, &FinSet::canonical(2)).unwrap();
        let sh = sharp(&two).unwrap();
        for n in 0..=4 {
            assert_eq!(sh.presheaf.value(n).len(), 1 << n);
        }
    }
}
