//! Brute-force reference computations used by the self-test.
//!
//! Nothing here shares code paths with the engine beyond root data and inner
//! products: partitions are enumerated coefficient by coefficient, chambers
//! are found by scanning lattice points, and the diagonal branching law is
//! inverted from a direct count of `K`-types.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, ToPrimitive};

use crate::exact::{frac, Q};
use crate::rootdata::GroupData;
use crate::weight::Weight;

/// Counts `n ∈ ℕ^roots` with `Σ n_i roots_i = ν` by enumerating every
/// coefficient vector allowed by the pairing with `functional`.
pub fn naive_partition_count(g: &GroupData, roots: &[Weight], functional: &Weight, nu: &Weight) -> u64 {
    let target = g.inner(nu, functional);
    if target.is_negative() {
        return 0;
    }
    let heights: Vec<Q> = roots.iter().map(|b| g.inner(b, functional)).collect();
    assert!(heights.iter().all(|h| h.is_positive()), "roots must be positive on the functional");
    let mut count = 0;
    let mut coeffs = vec![0i64; roots.len()];
    enumerate(&heights, target, 0, &mut coeffs, &mut |c| {
        let mut sum = Weight::zero(nu.rank());
        for (n, b) in c.iter().zip(roots) {
            sum += &b.scale(Q::from(*n));
        }
        if &sum == nu {
            count += 1;
        }
    });
    count
}

fn enumerate(heights: &[Q], budget: Q, idx: usize, coeffs: &mut Vec<i64>, visit: &mut impl FnMut(&[i64])) {
    if idx == heights.len() {
        visit(coeffs);
        return;
    }
    let max = (budget / heights[idx]).floor().to_i64().unwrap_or(0);
    for n in 0..=max {
        coeffs[idx] = n;
        enumerate(heights, budget - heights[idx] * Q::from(n), idx + 1, coeffs, visit);
    }
    coeffs[idx] = 0;
}

/// `Σ_{w ∈ W_K} ε(w) P(wμ - λ - ρ_n(λ))` with naive partitions.
pub fn naive_blattner(g: &GroupData, lambda: &Weight, mu: &Weight) -> i64 {
    let roots: Vec<Weight> =
        g.roots.noncompact_positive().map(|b| if g.inner(b, lambda).is_negative() { -b } else { b.clone() }).collect();
    let mut rho_n = Weight::zero(g.rank());
    for b in &roots {
        rho_n += b;
    }
    let base = lambda + &rho_n.scale(frac(1, 2));
    let mut total = 0;
    for w in g.weyl_group(true) {
        let nu = &w.apply(mu) - &base;
        if nu.is_integral() {
            total += w.sign * naive_partition_count(g, &roots, lambda, &nu) as i64;
        }
    }
    total
}

/// The holomorphic discrete series of `SL(2,ℝ)` with parameter `k` (in units
/// of half the root) has `K`-types `k+1, k+3, …` in the same units.
pub fn sl2_ladder(k: i64, max_weight: i64) -> BTreeSet<i64> {
    (0..).map(|m| k + 1 + 2 * m).take_while(|&n| n <= max_weight).collect()
}

/// Multiplicities of the discrete series of the diagonal `SL(2,ℝ)` in
/// `D_k ⊠ D_l`, parameters in units of half the root.
///
/// The restriction to the diagonal circle has `N(n)` = number of `(a, b)` with
/// `k+1+2a + l+1+2b = n`. Each holomorphic `D_j` contributes one `K`-type at
/// every `j+1+2m`, so `mult(j) = N(j+1) - N(j-1)`.
pub fn diagonal_sl2_multiplicities(k: i64, l: i64, max_param: i64) -> BTreeMap<i64, i64> {
    let count = |n: i64| -> i64 {
        let mut c = 0;
        for a in 0..=n.max(0) {
            let rest = n - (k + 1 + 2 * a);
            if rest < l + 1 {
                break;
            }
            if (rest - (l + 1)) % 2 == 0 {
                c += 1;
            }
        }
        c
    };
    (1..=max_param).map(|j| (j, count(j + 1) - count(j - 1))).filter(|(_, m)| *m != 0).collect()
}

/// Distinct sign vectors of strongly elliptic regular points of `Λ` within
/// the given squared radius.
pub fn sampled_sign_vectors(g: &GroupData, radius2: &Q) -> BTreeSet<Vec<i8>> {
    g.lattice_points_in_ball(&Weight::zero(g.rank()), radius2)
        .into_iter()
        .filter(|x| g.is_k_dominant_regular(x) && g.avoids_noncompact_walls(x))
        .map(|x| g.roots.noncompact_positive().map(|b| if g.inner(&x, b).is_positive() { 1 } else { -1 }).collect())
        .collect()
}

/// True iff every pairwise sum of roots that is a root has the compactness
/// forced by the flags: compact + compact and noncompact + noncompact are
/// compact, mixed sums are noncompact.
pub fn closure_rules_hold(g: &GroupData) -> bool {
    let all: Vec<(Weight, bool)> = g.roots.all().map(|r| (r.coords, r.compact)).collect();
    let lookup: BTreeMap<&Weight, bool> = all.iter().map(|(w, c)| (w, *c)).collect();
    all.iter().all(|(a, ca)| {
        all.iter().all(|(b, cb)| match lookup.get(&(a + b)) {
            Some(&c) => c == (ca == cb),
            None => true,
        })
    })
}
