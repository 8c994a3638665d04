//! The standard free resolution `B²(X) ⇉ B(X) → X`.
//!
//! `B(X) = β|X|` with `ξ_X : B(X) → X`; `B̃(X) = B(X) ×_X B(X)` with
//! projections `p_1, p_2`; `B²(X) = β|B̃(X)|` and `π_i = p_i∘ξ_{B̃(X)}`.
//! Every set is finite, so `ξ` is a bijection and `B̃(X)` is the diagonal, but
//! all of it is still built through the general constructions.

use crate::error::{Error, Result};
use crate::finset::{self, compose, Cone, FinMap, FinSet, Iso};
use crate::label::Label;
use crate::stone::{beta, beta_any, beta_coproduct_iso, beta_map, BetaConfig, BetaSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    x: FinSet,
    b: BetaSet,
    btilde: Cone,
    b2: BetaSet,
    pi1: FinMap,
    pi2: FinMap,
}

fn ensure(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(what.to_string()))
    }
}

impl Resolution {
    pub fn new(x: &FinSet) -> Result<Self> {
        Self::with_config(x, &BetaConfig::default())
    }

    pub fn with_config(x: &FinSet, config: &BetaConfig) -> Result<Self> {
        let b = beta(x, config)?;
        let btilde = finset::fiber_product(b.xi(), b.xi())?;
        let b2 = beta(&btilde.apex, config)?;
        let pi1 = compose(&btilde.legs[0], b2.xi())?;
        let pi2 = compose(&btilde.legs[1], b2.xi())?;
        let r = Resolution { x: x.clone(), b, btilde, b2, pi1, pi2 };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let xi = self.b.xi();
        ensure(xi.is_epi(), "ξ is not an epimorphism")?;
        ensure(compose(xi, &self.pi1)? == compose(xi, &self.pi2)?, "ξ∘π1 differs from ξ∘π2")?;
        let (p1, p2) = (&self.btilde.legs[0], &self.btilde.legs[1]);
        ensure(compose(xi, p1)? == compose(xi, p2)?, "B̃ square does not commute")?;
        for (i, l) in self.btilde.apex.iter().enumerate() {
            let expected = Label::pair(
                self.b.carrier().get(p1.apply_index(i)).clone(),
                self.b.carrier().get(p2.apply_index(i)).clone(),
            );
            ensure(*l == expected, "B̃ element does not match its projections")?;
        }
        let pairs_over_x = (0..self.b.carrier().len())
            .flat_map(|u| (0..self.b.carrier().len()).map(move |v| (u, v)))
            .filter(|&(u, v)| xi.apply_index(u) == xi.apply_index(v))
            .count();
        ensure(pairs_over_x == self.btilde.apex.len(), "B̃ misses a pair over X")?;
        Ok(())
    }

    pub fn x(&self) -> &FinSet {
        &self.x
    }

    /// `B(X)`.
    pub fn b(&self) -> &BetaSet {
        &self.b
    }

    pub fn xi(&self) -> &FinMap {
        self.b.xi()
    }

    /// `B̃(X) = B(X) ×_X B(X)` with its projections.
    pub fn btilde(&self) -> &Cone {
        &self.btilde
    }

    /// `B²(X)`.
    pub fn b2(&self) -> &BetaSet {
        &self.b2
    }

    pub fn pi1(&self) -> &FinMap {
        &self.pi1
    }

    pub fn pi2(&self) -> &FinMap {
        &self.pi2
    }

    /// Exhibits `coeq(π1, π2) ≅ X` with `ξ` factoring through the quotient.
    pub fn verify_coequalizer(&self) -> Result<Iso> {
        let q = finset::coequalizer(&self.pi1, &self.pi2)?;
        let proj = &q.legs[0];
        let induced = finset::factor_through_epi(self.xi(), proj)
            .ok_or_else(|| Error::NotAnIso("ξ is not constant on coequalizer classes".into()))?;
        Iso::from_bijection(induced)
    }
}

/// `standard_resolution(X)` with the default enumeration bound.
pub fn standard_resolution(x: &FinSet) -> Result<Resolution> {
    Resolution::new(x)
}

/// The map of resolutions induced by `f : X → Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionMap {
    /// `B²f`
    pub top: FinMap,
    /// `B̃f`
    pub tilde: FinMap,
    /// `Bf = βf`
    pub mid: FinMap,
    /// `f`
    pub base: FinMap,
}

impl ResolutionMap {
    pub fn new(rx: &Resolution, ry: &Resolution, f: &FinMap) -> Result<Self> {
        if f.dom() != rx.x() || f.cod() != ry.x() {
            return Err(Error::NonComposable);
        }
        let mid = beta_map(f, rx.b(), ry.b())?;
        let (tx, ty) = (rx.btilde(), ry.btilde());
        let tilde_table = (0..tx.apex.len())
            .map(|i| {
                let u = ry.b().carrier().get(mid.apply_index(tx.legs[0].apply_index(i))).clone();
                let v = ry.b().carrier().get(mid.apply_index(tx.legs[1].apply_index(i))).clone();
                ty.apex
                    .index_of(&Label::pair(u, v))
                    .ok_or_else(|| Error::Invariant("B̃f leaves the fiber product".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let tilde = FinMap::from_indices(tx.apex.clone(), ty.apex.clone(), tilde_table)?;
        let top = beta_map(&tilde, rx.b2(), ry.b2())?;
        let m = ResolutionMap { top, tilde, mid, base: f.clone() };
        m.validate(rx, ry)?;
        Ok(m)
    }

    fn validate(&self, rx: &Resolution, ry: &Resolution) -> Result<()> {
        for (px, py) in [(rx.pi1(), ry.pi1()), (rx.pi2(), ry.pi2())] {
            ensure(compose(&self.mid, px)? == compose(py, &self.top)?, "π square does not commute")?;
        }
        for k in 0..2 {
            ensure(
                compose(&ry.btilde().legs[k], &self.tilde)? == compose(&self.mid, &rx.btilde().legs[k])?,
                "B̃ projection square does not commute",
            )?;
        }
        ensure(compose(&self.base, rx.xi())? == compose(ry.xi(), &self.mid)?, "ξ square does not commute")
    }

    /// `other∘self`, componentwise.
    pub fn then(&self, other: &ResolutionMap) -> Result<ResolutionMap> {
        Ok(ResolutionMap {
            top: compose(&other.top, &self.top)?,
            tilde: compose(&other.tilde, &self.tilde)?,
            mid: compose(&other.mid, &self.mid)?,
            base: compose(&other.base, &self.base)?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.top.is_identity() && self.tilde.is_identity() && self.mid.is_identity() && self.base.is_identity()
    }
}

/// Builds both resolutions and the map between them.
pub fn resolution_map(f: &FinMap) -> Result<ResolutionMap> {
    ResolutionMap::new(&Resolution::new(f.dom())?, &Resolution::new(f.cod())?, f)
}

/// Level-wise isos from the resolution of `X ⊔ Y` to the coproduct of the
/// resolutions of `X` and `Y`.
#[derive(Clone, Debug)]
pub struct ResolutionCoproduct {
    pub level0: Iso,
    pub level1: Iso,
    pub level2: Iso,
}

pub fn resolution_coproduct(x: &FinSet, y: &FinSet) -> Result<ResolutionCoproduct> {
    let config = BetaConfig::default();
    let sum = finset::coproduct(x, y);
    let (rs, rx, ry) = (Resolution::new(&sum.apex)?, Resolution::new(x)?, Resolution::new(y)?);
    let level0 = Iso::identity(&sum.apex);
    let level1 = beta_coproduct_iso(x, y, &config)?;

    // B̃(X⊔Y) → B̃(X) ⊔ B̃(Y): both coordinates of a pair lie on the same side.
    let tsum = finset::coproduct(&rx.btilde().apex, &ry.btilde().apex);
    let btilde_s = rs.btilde();
    let phi_table = (0..btilde_s.apex.len())
        .map(|i| {
            let u = level1.forward().apply_index(btilde_s.legs[0].apply_index(i));
            let v = level1.forward().apply_index(btilde_s.legs[1].apply_index(i));
            let nx = rx.b().carrier().len();
            let (side, offset, inner) =
                if u < nx { (&rx, 0, (u, v)) } else { (&ry, rx.btilde().apex.len(), (u - nx, v - nx)) };
            let carrier = side.b().carrier();
            let pair = Label::pair(carrier.get(inner.0).clone(), carrier.get(inner.1).clone());
            side.btilde()
                .apex
                .index_of(&pair)
                .map(|k| k + offset)
                .ok_or_else(|| Error::Invariant("pair straddles both summands".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi = Iso::from_bijection(FinMap::from_indices(btilde_s.apex.clone(), tsum.apex.clone(), phi_table)?)?;
    let beta_tsum = beta(&tsum.apex, &config)?;
    let beta_phi_fwd = beta_map(phi.forward(), rs.b2(), &beta_tsum)?;
    let beta_phi_bwd = beta_map(phi.backward(), &beta_tsum, rs.b2())?;
    let beta_phi = Iso::new(beta_phi_fwd, beta_phi_bwd)?;
    let split = beta_coproduct_iso(&rx.btilde().apex, &ry.btilde().apex, &config)?;
    let level2 = beta_phi.then(&split)?;

    let pi1_sum = finset::coproduct_map(rx.pi1(), ry.pi1());
    let pi2_sum = finset::coproduct_map(rx.pi2(), ry.pi2());
    let xi_sum = finset::coproduct_map(rx.xi(), ry.xi());
    for (ps, pc) in [(rs.pi1(), &pi1_sum), (rs.pi2(), &pi2_sum)] {
        ensure(
            compose(level1.forward(), ps)? == compose(pc, level2.forward())?,
            "level-2 iso does not commute with π",
        )?;
    }
    ensure(
        compose(level0.forward(), rs.xi())? == compose(&xi_sum, level1.forward())?,
        "level-1 iso does not commute with ξ",
    )?;
    Ok(ResolutionCoproduct { level0, level1, level2 })
}

/// A section `s : βX → Y` of a surjection `f : Y → βX`: `s = ξ_Y∘βh` where
/// `h(x)` is the least preimage of `ι_X(x)`.
pub fn split_epi_section(f: &FinMap, beta_x: &BetaSet) -> Result<FinMap> {
    if f.cod() != beta_x.carrier() {
        return Err(Error::NonComposable);
    }
    if !f.is_epi() {
        return Err(Error::NotEpi);
    }
    let y = f.dom();
    let h_table: Vec<usize> = beta_x.iota().table().iter().map(|&p| f.fiber(p)[0]).collect();
    let h = FinMap::from_indices(beta_x.base().clone(), y.clone(), h_table)?;
    let beta_y = beta_any(y, &BetaConfig::default())?;
    let s = compose(beta_y.xi(), &beta_map(&h, beta_x, &beta_y)?)?;
    ensure(compose(f, &s)?.is_identity(), "f∘s is not the identity")?;
    Ok(s)
}

/// `β|P|` for `P = βT₁ ×_βS βT₂`, with `proj_i = p_i∘ξ_P`. Mediating maps
/// exist for every cone from a β-set; uniqueness is not claimed.
#[derive(Clone, Debug)]
pub struct WeakFiberProduct {
    f1: FinMap,
    f2: FinMap,
    underlying: Cone,
    carrier: BetaSet,
    proj1: FinMap,
    proj2: FinMap,
}

impl WeakFiberProduct {
    pub fn new(f1: &FinMap, f2: &FinMap) -> Result<Self> {
        let underlying = finset::fiber_product(f1, f2)?;
        let carrier = beta_any(&underlying.apex, &BetaConfig::default())?;
        let proj1 = compose(&underlying.legs[0], carrier.xi())?;
        let proj2 = compose(&underlying.legs[1], carrier.xi())?;
        ensure(compose(f1, &proj1)? == compose(f2, &proj2)?, "weak fiber product square fails")?;
        Ok(WeakFiberProduct { f1: f1.clone(), f2: f2.clone(), underlying, carrier, proj1, proj2 })
    }

    pub fn carrier(&self) -> &BetaSet {
        &self.carrier
    }

    pub fn proj1(&self) -> &FinMap {
        &self.proj1
    }

    pub fn proj2(&self) -> &FinMap {
        &self.proj2
    }

    /// `β(h∘ι_Q)` for the map `h : βQ → P` induced by the cone `(q1, q2)`.
    pub fn mediate(&self, q1: &FinMap, q2: &FinMap, beta_q: &BetaSet) -> Result<FinMap> {
        if q1.dom() != beta_q.carrier() || q2.dom() != beta_q.carrier() {
            return Err(Error::NonComposable);
        }
        if compose(&self.f1, q1)? != compose(&self.f2, q2)? {
            return Err(Error::ConeDoesNotCommute);
        }
        let p = &self.underlying.apex;
        let h_table = (0..beta_q.carrier().len())
            .map(|u| {
                let x = beta_q.carrier().get(u);
                let pair = Label::pair(q1.apply(x).unwrap().clone(), q2.apply(x).unwrap().clone());
                p.index_of(&pair).ok_or(Error::ConeDoesNotCommute)
            })
            .collect::<Result<Vec<_>>>()?;
        let h = FinMap::from_indices(beta_q.carrier().clone(), p.clone(), h_table)?;
        let m = beta_map(&compose(&h, beta_q.iota())?, beta_q, &self.carrier)?;
        ensure(
            compose(&self.proj1, &m)? == *q1 && compose(&self.proj2, &m)? == *q2,
            "mediating map does not commute with the projections",
        )?;
        Ok(m)
    }
}
