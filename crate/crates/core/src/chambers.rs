//! Chambers of strongly elliptic regular elements and the admissible orbit
//! parameters inside them.
//!
//! A chamber is named by its sign vector on the noncompact positive roots of
//! `G` (in the order of [`RootSet::noncompact_positive`]). Chamber ids read the
//! sign vector as a bitmask with bit `i` set when root `i` is negative, so the
//! chamber containing `ρ` is always id 0.
//!
//! [`RootSet::noncompact_positive`]: crate::rootdata::RootSet::noncompact_positive

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{from_big, Q};
use crate::lp::solve_inequalities;
use crate::rootdata::GroupData;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub id: usize,
    pub signs: Vec<i8>,
    /// An interior point found by exact linear feasibility.
    pub representative: Weight,
}

/// A Harish-Chandra parameter together with the id of its chamber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OrbitParam {
    pub lambda: Weight,
    pub chamber: usize,
}

pub fn is_strongly_elliptic_regular(g: &GroupData, lambda: &Weight) -> bool {
    g.is_k_dominant_regular(lambda) && g.avoids_noncompact_walls(lambda)
}

/// Signs of `(λ, β)` on the noncompact positive roots; zero on a wall.
pub fn sign_vector(g: &GroupData, lambda: &Weight) -> Vec<i8> {
    g.roots
        .noncompact_positive()
        .map(|b| {
            let p = g.inner(lambda, b);
            if p.is_positive() {
                1
            } else if p.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

pub fn chamber_id(signs: &[i8]) -> usize {
    signs.iter().enumerate().filter(|(_, &s)| s < 0).fold(0, |acc, (i, _)| acc | (1 << i))
}

fn signs_of_id(id: usize, len: usize) -> Vec<i8> {
    (0..len).map(|i| if id >> i & 1 == 1 { -1 } else { 1 }).collect()
}

/// Solves `(λ, α) ≥ 1` on compact simple roots and `s_i (λ, β_i) ≥ 1` on the
/// noncompact positive roots. Returns `None` when the sign vector is empty.
fn realize(g: &GroupData, signs: &[i8]) -> Option<Weight> {
    let gram = &g.datum.gram;
    let row = |v: &Weight, s: i64| -> Vec<Q> {
        (0..g.rank()).map(|j| (0..g.rank()).fold(Q::zero(), |acc, k| acc + v.0[k] * gram[k][j]) * Q::from(s)).collect()
    };
    let mut a: Vec<Vec<Q>> = g.compact_simple_roots().iter().map(|r| row(r, 1)).collect();
    a.extend(g.roots.noncompact_positive().zip(signs).map(|(b, &s)| row(b, s as i64)));
    let b = vec![Q::from(1); a.len()];
    let sol = solve_inequalities(&a, &b)?;
    Some(Weight(sol.iter().map(from_big).collect()))
}

/// The chamber with the given id, if its sign vector is realizable.
pub fn chamber_by_id(g: &GroupData, id: usize) -> Option<Chamber> {
    let len = g.roots.noncompact_positive().count();
    if id >= 1 << len {
        return None;
    }
    let signs = signs_of_id(id, len);
    realize(g, &signs).map(|representative| Chamber { id, signs, representative })
}

pub fn chamber_of(g: &GroupData, lambda: &Weight) -> Result<Chamber> {
    if !is_strongly_elliptic_regular(g, lambda) {
        return Err(Error::NotStronglyElliptic(lambda.to_string()));
    }
    let id = chamber_id(&sign_vector(g, lambda));
    Ok(chamber_by_id(g, id).expect("λ itself witnesses feasibility"))
}

/// All realizable chambers, ordered by id.
pub fn enumerate_chambers(g: &GroupData) -> Vec<Chamber> {
    let len = g.roots.noncompact_positive().count();
    (0..1usize << len).filter_map(|id| chamber_by_id(g, id)).collect()
}

/// True iff `λ - ρ(λ) ∈ Λ`.
pub fn is_admissible_orbit(g: &GroupData, lambda: &Weight) -> Result<bool> {
    if !g.is_regular(lambda) {
        return Err(Error::NotRegular(lambda.to_string()));
    }
    Ok(g.in_lattice(&(lambda - &g.rho_of(lambda))))
}

/// Checks every invariant of a Harish-Chandra parameter and tags its chamber.
pub fn orbit_param(g: &GroupData, lambda: &Weight) -> Result<OrbitParam> {
    if !is_strongly_elliptic_regular(g, lambda) {
        return Err(Error::NotStronglyElliptic(lambda.to_string()));
    }
    if !is_admissible_orbit(g, lambda)? {
        return Err(Error::InvalidDatum(format!("{lambda} is not admissible: λ - ρ(λ) ∉ Λ")));
    }
    Ok(OrbitParam { lambda: lambda.clone(), chamber: chamber_id(&sign_vector(g, lambda)) })
}

/// `c^G = ‖λ + ρ(λ)‖`, squared.
pub fn c_norm2(g: &GroupData, lambda: &Weight) -> Q {
    g.norm2(&(lambda + &g.rho_of(lambda)))
}

/// All admissible parameters of the chamber with `‖λ + ρ(λ)‖ ≤ bound`.
pub fn enumerate_orbits(g: &GroupData, chamber: &Chamber, bound: &Q) -> Vec<OrbitParam> {
    if bound.is_negative() {
        return Vec::new();
    }
    let rho = g.rho_of(&chamber.representative);
    // λ + ρ(C) runs over 2ρ(C) + Λ.
    let offset = rho.scale(Q::from(2));
    g.lattice_points_in_ball(&offset, &(bound * bound))
        .into_iter()
        .map(|y| &y - &rho)
        .filter(|l| is_strongly_elliptic_regular(g, l) && chamber_id(&sign_vector(g, l)) == chamber.id)
        .map(|lambda| OrbitParam { lambda, chamber: chamber.id })
        .collect()
}

/// Orbits of every chamber inside the ball, ordered by chamber then `λ`.
pub fn enumerate_all_orbits(g: &GroupData, bound: &Q) -> Vec<OrbitParam> {
    enumerate_chambers(g).iter().flat_map(|c| enumerate_orbits(g, c, bound)).collect()
}
