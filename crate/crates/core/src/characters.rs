//! Characters of the compact group `K` (or its cover `K̃`).
//!
//! Irreducibles are named by their `ρ_c`-shifted parameter `μ`, i.e. highest
//! weight plus `ρ_c`, so `μ` is strictly dominant for `R_c^+`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::admissible::Embedding;
use crate::error::{Error, Result};
use crate::exact::{q, Q};
use crate::rootdata::GroupData;
use crate::spinor::SpinorCharacter;
use crate::weight::Weight;

/// Integer-valued function on weights with finite support.
pub type TorusCharacter = BTreeMap<Weight, i64>;

/// Finite truncation of a formal sum of irreducibles. Coefficients are exact
/// for every parameter `μ` with `c^K = ‖μ + ρ_c‖ ≤ certified_norm`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VirtualCharacter {
    pub coeffs: BTreeMap<Weight, i64>,
    #[serde(with = "crate::exact::q_str")]
    pub certified_norm: Q,
}

impl VirtualCharacter {
    pub fn new(certified_norm: Q) -> Self {
        VirtualCharacter { coeffs: BTreeMap::new(), certified_norm }
    }

    pub fn add(&mut self, mu: Weight, c: i64) {
        if c == 0 {
            return;
        }
        match self.coeffs.entry(mu) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, mu: &Weight) -> i64 {
        self.coeffs.get(mu).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms whose parameter lies in the certified ball.
    pub fn certified_terms<'a>(&'a self, g: &'a GroupData) -> impl Iterator<Item = (&'a Weight, i64)> + 'a {
        let r2 = self.certified_norm * self.certified_norm;
        self.coeffs.iter().filter(move |(mu, _)| c_norm2(g, mu) <= r2).map(|(k, v)| (k, *v))
    }
}

/// `c^K = ‖μ + ρ_c‖`, squared.
pub fn c_norm2(g: &GroupData, mu: &Weight) -> Q {
    g.norm2(&(mu + g.rho_c()))
}

/// `∏_{α ∈ R_c^+} (μ, α) / (ρ_c, α)`.
pub fn weyl_dimension(g: &GroupData, mu: &Weight) -> i64 {
    let mut d = Q::from(1);
    for a in g.roots.compact_positive() {
        d *= g.inner(mu, a) / g.inner(g.rho_c(), a);
    }
    assert!(d.is_integer(), "Weyl dimension of {mu} is not an integer");
    d.to_integer()
}

/// Multiplicities of the dominant weights of the irreducible with parameter
/// `μ`, by Freudenthal's recursion.
pub fn dominant_multiplicities(g: &GroupData, mu: &Weight) -> BTreeMap<Weight, i64> {
    let top = mu - g.rho_c();
    let pos: Vec<&Weight> = g.roots.compact_positive().collect();
    if pos.is_empty() {
        return BTreeMap::from([(top, 1)]);
    }
    let is_dominant = |v: &Weight| g.compact_simple_roots().iter().all(|a| !g.inner(v, a).is_negative());
    // Dominant weights below the top form a connected poset under positive roots.
    let mut seen: HashSet<Weight> = HashSet::from([top.clone()]);
    let mut queue = VecDeque::from([top.clone()]);
    while let Some(v) = queue.pop_front() {
        for a in &pos {
            let next = &v - a;
            if is_dominant(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let rho = g.rho_c();
    let depth = |v: &Weight| g.inner(&(&top - v), rho);
    let mut order: Vec<Weight> = seen.into_iter().collect();
    order.sort_by(|a, b| depth(a).cmp(&depth(b)).then_with(|| b.cmp(a)));

    let top_rho = g.norm2(&(&top + rho));
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    mult.insert(top.clone(), 1);
    for v in order.iter().skip(1) {
        let mut rhs = Q::zero();
        for a in &pos {
            let mut shifted = v + *a;
            loop {
                let (dom, _) = g.k_dominant(&shifted);
                // Weights along a root string are contiguous, so the first
                // miss ends the string.
                let Some(&m) = mult.get(&dom) else {
                    break;
                };
                rhs += q(2) * q(m) * g.inner(&shifted, a);
                shifted = &shifted + *a;
            }
        }
        let denom = top_rho - g.norm2(&(v + rho));
        let m = rhs / denom;
        assert!(m.is_integer() && !m.is_negative(), "Freudenthal produced {m} at {v}");
        mult.insert(v.clone(), m.to_integer());
    }
    order.into_iter().filter_map(|v| mult.get(&v).filter(|&&m| m > 0).map(|&m| (v, m))).collect()
}

/// Full weight multiplicity function of the irreducible with parameter `μ`.
pub fn weight_multiplicities(g: &GroupData, mu: &Weight) -> TorusCharacter {
    let mut out = TorusCharacter::new();
    for (v, m) in dominant_multiplicities(g, mu) {
        for w in g.weyl_k() {
            out.insert(w.apply(&v), m);
        }
    }
    out
}

/// Writes an alternating-consistent weight function as a combination of
/// irreducible characters by peeling off highest weights.
pub fn decompose(g: &GroupData, chi: &TorusCharacter) -> Result<VirtualCharacter> {
    let mut rest: TorusCharacter = chi.iter().filter(|(_, c)| **c != 0).map(|(k, v)| (k.clone(), *v)).collect();
    let mut out = VirtualCharacter::new(Q::zero());
    let rho = g.rho_c().clone();
    let is_dominant = |v: &Weight| g.compact_simple_roots().iter().all(|a| !g.inner(v, a).is_negative());
    let budget = 4 * rest.len() + 16;
    for _ in 0..budget {
        let Some(top) =
            rest.keys().max_by(|a, b| g.inner(a, &rho).cmp(&g.inner(b, &rho)).then_with(|| a.cmp(b))).cloned()
        else {
            return Ok(out);
        };
        if !is_dominant(&top) {
            return Err(Error::NonTerminating(format!("highest remaining weight {top} is not dominant")));
        }
        let c = rest[&top];
        let mu = &top + &rho;
        for (v, m) in weight_multiplicities(g, &mu) {
            let e = rest.entry(v.clone()).or_default();
            *e -= c * m;
            if *e == 0 {
                rest.remove(&v);
            }
        }
        out.add(mu, c);
    }
    Err(Error::NonTerminating("peeling did not shrink the support".into()))
}

/// Restricts the irreducible `K'`-character with parameter `mu_prime` to `K`.
pub fn branch_compact(
    gprime: &GroupData,
    g: &GroupData,
    emb: &Embedding,
    mu_prime: &Weight,
) -> Result<VirtualCharacter> {
    let mut chi = TorusCharacter::new();
    for (v, m) in weight_multiplicities(gprime, mu_prime) {
        *chi.entry(emb.project(&v)).or_default() += m;
    }
    decompose(g, &chi)
}

/// `V ⊗ S` for a `W_K`-invariant `S`, by reflecting `μ + s` into the dominant
/// chamber (terms on a compact wall vanish). The certified radius shrinks by
/// the spinor shift.
pub fn tensor_spinor(g: &GroupData, v: &VirtualCharacter, s: &SpinorCharacter) -> VirtualCharacter {
    let shift = s.shift(g);
    let certified = (v.certified_norm - shift).max(Q::zero());
    let mut acc: BTreeMap<Weight, i64> = BTreeMap::new();
    for (mu, c) in &v.coeffs {
        for (wt, sc) in &s.terms {
            let (dom, sign) = g.k_dominant(&(mu + wt));
            if g.is_k_dominant_regular(&dom) {
                *acc.entry(dom).or_default() += sign * c * sc;
            }
        }
    }
    acc.retain(|_, c| *c != 0);
    VirtualCharacter { coeffs: acc, certified_norm: certified }
}

/// Weight function of a virtual character.
pub fn character_of(g: &GroupData, v: &VirtualCharacter) -> TorusCharacter {
    let mut out = TorusCharacter::new();
    for (mu, c) in &v.coeffs {
        for (wt, m) in weight_multiplicities(g, mu) {
            *out.entry(wt).or_default() += c * m;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Pointwise product of two weight functions.
pub fn multiply(a: &TorusCharacter, b: &TorusCharacter) -> TorusCharacter {
    let mut out = TorusCharacter::new();
    for (x, cx) in a {
        for (y, cy) in b {
            *out.entry(x + y).or_default() += cx * cy;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::exact::frac;
    use crate::rootdata::RootDatum;

    fn w(v: &[Q]) -> Weight {
        Weight(v.to_vec())
    }

    /// Compact SU(2) with γ = α/2 of norm 1.
    fn su2() -> GroupData {
        GroupData::new(
            RootDatum::new(vec![vec![2]], vec![true], Some(vec![vec![q(4)]]), Some(vec![vec![frac(1, 2)]])).unwrap(),
        )
        .unwrap()
    }

    /// Compact SU(3).
    fn su3() -> GroupData {
        GroupData::new(RootDatum::new(vec![vec![2, -1], vec![-1, 2]], vec![true, true], None, None).unwrap()).unwrap()
    }

    #[test]
    fn dimensions() {
        let k = su2();
        assert_eq!(weyl_dimension(&k, k.rho_c()), 1);
        for n in 1..6 {
            assert_eq!(weyl_dimension(&k, &w(&[frac(n, 2)])), n);
        }
        assert_eq!(weyl_dimension(&bundled::sl2(), &w(&[q(3)])), 1);
        assert_eq!(weyl_dimension(&su3(), &Weight::from_ints(&[2, 2])), 8);
    }

    #[test]
    fn su2_weights() {
        let k = su2();
        let m = weight_multiplicities(&k, &w(&[frac(3, 2)]));
        let expected = TorusCharacter::from([(w(&[q(-1)]), 1), (w(&[q(0)]), 1), (w(&[q(1)]), 1)]);
        assert_eq!(m, expected);
        assert_eq!(weight_multiplicities(&k, k.rho_c()), TorusCharacter::from([(w(&[q(0)]), 1)]));
    }

    #[test]
    fn su3_adjoint_zero_weight() {
        let k = su3();
        let adj = Weight::from_ints(&[2, 2]);
        let m = weight_multiplicities(&k, &adj);
        assert_eq!(m[&Weight::zero(2)], 2);
        assert_eq!(m.values().sum::<i64>(), 8);
        for (v, c) in &m {
            for x in k.weyl_k() {
                assert_eq!(m.get(&x.apply(v)), Some(c));
            }
        }
    }

    #[test]
    fn clebsch_gordan() {
        let k = su2();
        let two = weight_multiplicities(&k, &w(&[q(1)]));
        let v = decompose(&k, &multiply(&two, &two)).unwrap();
        let expected = BTreeMap::from([(w(&[frac(1, 2)]), 1), (w(&[frac(3, 2)]), 1)]);
        assert_eq!(v.coeffs, expected);
    }

    #[test]
    fn decompose_round_trip() {
        let k = su3();
        for mu in [[1, 1], [2, 2], [3, 2], [4, 3]] {
            let mu = Weight::from_ints(&mu);
            let v = decompose(&k, &weight_multiplicities(&k, &mu)).unwrap();
            assert_eq!(v.coeffs, BTreeMap::from([(mu, 1)]));
        }
    }

    #[test]
    fn decompose_rejects_non_invariant() {
        let k = su2();
        let chi = TorusCharacter::from([(w(&[q(-1)]), 1)]);
        assert!(matches!(decompose(&k, &chi), Err(Error::NonTerminating(_))));
    }
}
