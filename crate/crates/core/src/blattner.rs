//! Blattner multiplicities of discrete series restricted to `K`.
//!
//! With `μ` the `ρ_c`-shifted parameter of a `K`-type,
//! `m(μ) = Σ_{w ∈ W_K} ε(w) Q_n(wμ - λ - ρ_n(λ))`, where `Q_n` counts the ways
//! of writing a weight as an ℕ-combination of the noncompact roots positive
//! on `λ`.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chambers::{c_norm2 as orbit_c_norm2, OrbitParam};
use crate::characters::{c_norm2 as ktype_c_norm2, VirtualCharacter};
use crate::error::{Error, Result};
use crate::exact::Q;
use crate::rootdata::GroupData;
use crate::spinor::positive_noncompact;
use crate::weight::Weight;

/// Memoized vector partition function over a fixed list of roots that are all
/// positive on `functional`.
pub struct NoncompactPartition<'a> {
    g: &'a GroupData,
    roots: Vec<Weight>,
    functional: Weight,
    memo: HashMap<(usize, Weight), u64>,
}

impl<'a> NoncompactPartition<'a> {
    /// Partition function over `R_n^+(ξ)` for a strongly elliptic `ξ`.
    pub fn new(g: &'a GroupData, xi: &Weight) -> Self {
        let mut roots = positive_noncompact(g, xi);
        roots.sort();
        NoncompactPartition { g, roots, functional: xi.clone(), memo: HashMap::new() }
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn count(&mut self, nu: &Weight) -> u64 {
        if !nu.is_integral() {
            return 0;
        }
        self.count_from(0, nu)
    }

    fn count_from(&mut self, idx: usize, nu: &Weight) -> u64 {
        if nu.is_zero() {
            return 1;
        }
        if idx == self.roots.len() || !self.g.inner(nu, &self.functional).is_positive() {
            return 0;
        }
        let key = (idx, nu.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let beta = self.roots[idx].clone();
        let mut rest = nu.clone();
        let mut total = 0;
        loop {
            total += self.count_from(idx + 1, &rest);
            rest = &rest - &beta;
            if self.g.inner(&rest, &self.functional).is_negative() {
                break;
            }
        }
        self.memo.insert(key, total);
        total
    }
}

/// `#{n ∈ ℕ^{R_n^+(ξ)} : Σ n_β β = ν}`.
pub fn partition_count(g: &GroupData, xi: &Weight, nu: &Weight) -> u64 {
    NoncompactPartition::new(g, xi).count(nu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CNorms {
    /// `‖λ + ρ(λ)‖²`
    #[serde(with = "crate::exact::q_str")]
    pub cg2: Q,
    /// `‖μ + ρ_c‖²`
    #[serde(with = "crate::exact::q_str")]
    pub ck2: Q,
}

pub fn c_norms(g: &GroupData, orbit: &OrbitParam, mu: &Weight) -> CNorms {
    CNorms { cg2: orbit_c_norm2(g, &orbit.lambda), ck2: ktype_c_norm2(g, mu) }
}

fn multiplicity_with(g: &GroupData, part: &mut NoncompactPartition<'_>, base: &Weight, mu: &Weight) -> Result<i64> {
    if !(mu - base).is_integral() {
        return Ok(0);
    }
    let mut total: i64 = 0;
    for w in g.weyl_k() {
        let nu = &w.apply(mu) - base;
        let c = part.count(&nu);
        total += w.sign * c as i64;
    }
    if total < 0 {
        return Err(Error::NegativeMultiplicity { at: mu.to_string(), value: total });
    }
    Ok(total)
}

/// Multiplicity of the `K`-type with parameter `μ` in the discrete series `λ`.
pub fn blattner_multiplicity(g: &GroupData, orbit: &OrbitParam, mu: &Weight) -> Result<i64> {
    let mut part = NoncompactPartition::new(g, &orbit.lambda);
    let base = &orbit.lambda + &g.rho_n_of(&orbit.lambda);
    multiplicity_with(g, &mut part, &base, mu)
}

/// The minimal `K`-type `λ + ρ_n(λ)`.
pub fn minimal_ktype(g: &GroupData, orbit: &OrbitParam) -> Weight {
    &orbit.lambda + &g.rho_n_of(&orbit.lambda)
}

/// Candidate `K`-type parameters with `c^K ≤ r`: strictly dominant points of
/// `ρ_c + Λ` (highest weights in `Λ`).
pub fn ktype_candidates(g: &GroupData, r: &Q) -> Vec<Weight> {
    let offset = g.rho_c().scale(Q::from(2));
    g.lattice_points_in_ball(&offset, &(r * r))
        .into_iter()
        .map(|x| &x - g.rho_c())
        .filter(|mu| g.is_k_dominant_regular(mu))
        .collect()
}

/// All `K`-types of the discrete series with `c^K ≤ r`, certified up to `r`.
pub fn restrict_to_k(g: &GroupData, orbit: &OrbitParam, r: &Q) -> Result<VirtualCharacter> {
    let mut out = VirtualCharacter::new(*r);
    if r.is_negative() {
        out.certified_norm = Q::zero();
        return Ok(out);
    }
    let cg2 = orbit_c_norm2(g, &orbit.lambda);
    let base = minimal_ktype(g, orbit);
    let candidates: Vec<Weight> = ktype_candidates(g, r)
        .into_iter()
        .filter(|mu| ktype_c_norm2(g, mu) >= cg2 && (mu - &base).is_integral())
        .collect();
    let values: Vec<Result<(Weight, i64)>> = candidates
        .into_par_iter()
        .map_init(
            || NoncompactPartition::new(g, &orbit.lambda),
            |part, mu| multiplicity_with(g, part, &base, &mu).map(|m| (mu, m)),
        )
        .collect();
    for v in values {
        let (mu, m) = v?;
        out.add(mu, m);
    }
    Ok(out)
}
