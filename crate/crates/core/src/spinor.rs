//! The spin double cover `K̃`, the spinor character of `p` and the set of
//! `K̃`-types that come from discrete series.
//!
//! An orientation of `p` is named by a reference weight: the product of the
//! root planes `β ∈ R_n` with `(β, ref) > 0`, each oriented by `β`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::chambers::{is_strongly_elliptic_regular, OrbitParam};
use crate::error::{Error, Result};
use crate::exact::{sqrt_upper, Q};
use crate::rootdata::GroupData;
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverKind {
    Isomorphism,
    DoubleCover,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverInfo {
    pub kind: CoverKind,
    /// Half the sum of the noncompact positive roots of `G`.
    pub rho_n_ref: Weight,
}

/// Which coset of `Λ` inside `Λ̃ = Λ ∪ (ρ_n + Λ)` a weight lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coset {
    Lattice,
    Shifted,
    /// `ρ_n ∈ Λ`, so the two cosets coincide.
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverWeight {
    pub coords: Weight,
    pub coset: Coset,
}

impl CoverWeight {
    /// Tags `w` with its coset, or `None` when `w ∉ Λ̃`.
    pub fn classify(g: &GroupData, w: &Weight) -> Option<Self> {
        let in_lattice = g.in_lattice(w);
        let shifted = g.in_lattice(&(w - &cover_type(g).rho_n_ref));
        let coset = match (in_lattice, shifted) {
            (true, true) => Coset::Both,
            (true, false) => Coset::Lattice,
            (false, true) => Coset::Shifted,
            (false, false) => return None,
        };
        Some(CoverWeight { coords: w.clone(), coset })
    }
}

pub fn cover_type(g: &GroupData) -> CoverInfo {
    let mut rho_n = Weight::zero(g.rank());
    for b in g.roots.noncompact_positive() {
        rho_n += b;
    }
    let rho_n_ref = rho_n.scale(Q::new(1, 2));
    let kind = if g.in_lattice(&rho_n_ref) { CoverKind::Isomorphism } else { CoverKind::DoubleCover };
    CoverInfo { kind, rho_n_ref }
}

/// `∏_{β ∈ R_n, (β, ref) > 0} (e^{β/2} - e^{-β/2})`, fully expanded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinorCharacter {
    pub terms: BTreeMap<Weight, i64>,
    pub orientation_ref: Weight,
}

impl SpinorCharacter {
    /// Largest squared norm among the weights.
    pub fn max_norm2(&self, g: &GroupData) -> Q {
        self.terms.keys().map(|w| g.norm2(w)).max().unwrap_or_else(Q::zero)
    }

    /// A rational upper bound for the largest weight norm.
    pub fn shift(&self, g: &GroupData) -> Q {
        sqrt_upper(&self.max_norm2(g))
    }
}

/// Noncompact roots positive on `ref`.
pub fn positive_noncompact(g: &GroupData, reference: &Weight) -> Vec<Weight> {
    g.roots.noncompact_positive().map(|b| if g.inner(b, reference).is_negative() { -b } else { b.clone() }).collect()
}

pub fn spinor_character(g: &GroupData, reference: &Weight) -> Result<SpinorCharacter> {
    if !is_strongly_elliptic_regular(g, reference) {
        return Err(Error::NotStronglyElliptic(reference.to_string()));
    }
    let mut terms: BTreeMap<Weight, i64> = BTreeMap::from([(Weight::zero(g.rank()), 1)]);
    for beta in positive_noncompact(g, reference) {
        let half = beta.scale(Q::new(1, 2));
        let mut next: BTreeMap<Weight, i64> = BTreeMap::new();
        for (w, c) in &terms {
            *next.entry(w + &half).or_default() += c;
            *next.entry(w - &half).or_default() -= c;
        }
        next.retain(|_, c| *c != 0);
        terms = next;
    }
    Ok(SpinorCharacter { terms, orientation_ref: reference.clone() })
}

/// `(-1)^{#{β ∈ R_n^+(λ1) : (β, λ2) < 0}}`.
///
/// Only avoidance of the noncompact walls is required, so the orientation of
/// `-λ` can be compared with that of a chamber reference.
pub fn orientation_ratio(g: &GroupData, l1: &Weight, l2: &Weight) -> Result<i64> {
    for l in [l1, l2] {
        if !g.avoids_noncompact_walls(l) {
            return Err(Error::NotStronglyElliptic(l.to_string()));
        }
    }
    let flips = positive_noncompact(g, l1).iter().filter(|b| g.inner(b, l2).is_negative()).count();
    Ok(if flips % 2 == 0 { 1 } else { -1 })
}

/// The `K̃`-type attached to a discrete series: its `ρ_c`-shifted parameter
/// is `λ` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KOutParam {
    pub mu: CoverWeight,
}

pub fn orbit_to_kout(g: &GroupData, orbit: &OrbitParam) -> KOutParam {
    let coords = orbit.lambda.clone();
    let coset = if cover_type(g).kind == CoverKind::Isomorphism { Coset::Both } else { Coset::Shifted };
    KOutParam { mu: CoverWeight { coords, coset } }
}

/// True iff `μ - ρ_c ∈ ρ_n + Λ`.
pub fn in_k_out(g: &GroupData, mu: &Weight) -> Result<bool> {
    if !g.is_k_dominant_regular(mu) {
        return Err(Error::NotDominant(mu.to_string()));
    }
    Ok(g.in_lattice(&(&(mu - g.rho_c()) - &cover_type(g).rho_n_ref)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::chambers::{enumerate_chambers, orbit_param};
    use crate::exact::{frac, q};

    fn w(v: &[Q]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn cover_kinds() {
        assert_eq!(cover_type(&bundled::sl2()).kind, CoverKind::Isomorphism);
        assert_eq!(cover_type(&bundled::su21()).kind, CoverKind::DoubleCover);
        let sp4 = cover_type(&bundled::sp4());
        assert_eq!(sp4.kind, CoverKind::DoubleCover);
        assert_eq!(sp4.rho_n_ref, w(&[frac(3, 2), frac(3, 2)]));
    }

    #[test]
    fn sl2_spinor() {
        let g = bundled::sl2();
        let s = spinor_character(&g, &w(&[frac(1, 2)])).unwrap();
        let expected = BTreeMap::from([(w(&[frac(-1, 2)]), -1), (w(&[frac(1, 2)]), 1)]);
        assert_eq!(s.terms, expected);
        assert_eq!(s.shift(&g), q(1));
    }

    #[test]
    fn spinor_top_and_total() {
        for g in [bundled::sl2(), bundled::su21(), bundled::sp4()] {
            for c in enumerate_chambers(&g) {
                let s = spinor_character(&g, &c.representative).unwrap();
                let top = g.rho_n_of(&c.representative);
                assert_eq!(s.terms.get(&top), Some(&1));
                assert_eq!(s.terms.values().sum::<i64>(), 0);
                for wt in s.terms.keys() {
                    assert_eq!(CoverWeight::classify(&g, wt).map(|c| c.coset != Coset::Lattice), Some(true));
                }
            }
        }
    }

    #[test]
    fn orientation_examples() {
        let sl2 = bundled::sl2();
        let l = w(&[q(1)]);
        assert_eq!(orientation_ratio(&sl2, &l, &l).unwrap(), 1);
        assert_eq!(orientation_ratio(&sl2, &l, &-&l).unwrap(), -1);
        let su21 = bundled::su21();
        let cs = enumerate_chambers(&su21);
        let hol = &cs[0].representative;
        let anti = &cs.last().unwrap().representative;
        assert_eq!(orientation_ratio(&su21, hol, anti).unwrap(), 1);
        assert_eq!(orientation_ratio(&su21, hol, &cs[1].representative).unwrap(), -1);
    }

    #[test]
    fn k_out_examples() {
        let su21 = bundled::su21();
        let rho = Weight::from_ints(&[1, 1]);
        let o = orbit_param(&su21, &rho).unwrap();
        let k = orbit_to_kout(&su21, &o);
        assert_eq!(k.mu.coords, rho);
        assert_eq!(k.mu.coset, Coset::Shifted);
        assert!(in_k_out(&su21, &rho).unwrap());
        // ρ_c + α1: highest weight α1 lies in Λ, not in ρ_n + Λ.
        assert!(!in_k_out(&su21, &w(&[frac(3, 2), q(0)])).unwrap());
        assert!(matches!(in_k_out(&su21, &w(&[q(-1), q(0)])), Err(Error::NotDominant(_))));
        let sl2 = bundled::sl2();
        let o = orbit_param(&sl2, &w(&[q(1)])).unwrap();
        assert_eq!(orbit_to_kout(&sl2, &o).mu.coset, Coset::Both);
        assert!(in_k_out(&sl2, &w(&[frac(3, 2)])).unwrap());
    }
}
