//! Admissibility of a restriction `G ⊂ G'` at the level of Cartan subalgebras.
//!
//! The asymptotic support of a discrete series of `G'` is estimated from the
//! directions of its `K'`-types, and the restriction is admissible when no
//! nonzero direction of the cone (or of a `W_{K'}`-translate) projects to zero.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blattner::{minimal_ktype, restrict_to_k};
use crate::chambers::OrbitParam;
use crate::characters::c_norm2;
use crate::error::{Error, Result};
use crate::exact::{
    determinant, from_big, mat_vec, primitive_direction, q, sqrt_lower, sqrt_upper, to_big, transpose, Matrix, Q,
};
use crate::lp::{conic_combination, nonnegative_solution};
use crate::rootdata::{GroupData, WeylElement};
use crate::spinor::positive_noncompact;
use crate::weight::Weight;

/// The projection `(t')* → t*` written on simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    #[serde(serialize_with = "crate::exact::matrix_str::serialize")]
    pub projection: Matrix,
}

impl Embedding {
    /// Checks dimensions and that the lattice of `G'` lands in the lattice of `G`.
    pub fn new(gprime: &GroupData, g: &GroupData, projection: Matrix) -> Result<Self> {
        if projection.len() != g.rank() || projection.iter().any(|r| r.len() != gprime.rank()) {
            return Err(Error::InvalidDatum(format!("projection must be {} x {}", g.rank(), gprime.rank())));
        }
        let emb = Embedding { projection };
        for b in &gprime.datum.lattice_basis {
            let image = emb.project(&Weight(b.clone()));
            if !g.in_lattice(&image) {
                return Err(Error::IncompatibleLattices(format!("{} maps to {image}", Weight(b.clone()))));
            }
        }
        Ok(emb)
    }

    pub fn identity(rank: usize) -> Self {
        Embedding { projection: crate::exact::identity(rank) }
    }

    pub fn project(&self, v: &Weight) -> Weight {
        Weight(mat_vec(&self.projection, &v.0))
    }

    pub fn is_injective(&self) -> bool {
        let cols = self.projection.first().map_or(0, Vec::len);
        let pt = transpose(&self.projection);
        cols <= self.projection.len() && !determinant(&crate::exact::mat_mul(&pt, &self.projection)).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Exactness {
    /// Every outer-shell `K'`-type up to `depth` contributed a direction.
    Exact {
        #[serde(with = "crate::exact::q_str")]
        depth: Q,
    },
    /// Only a seeded random subset of the outer shell was used.
    Sampled {
        #[serde(with = "crate::exact::q_str")]
        depth: Q,
        seed: u64,
        samples: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeDesc {
    pub generators: Vec<Weight>,
    pub exactness: Exactness,
}

impl ConeDesc {
    pub fn exact(generators: Vec<Weight>) -> Self {
        ConeDesc { generators, exactness: Exactness::Exact { depth: Q::zero() } }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Verdict {
    /// `gap` is a rational lower bound for `min ‖p(x)‖ / ‖x‖` on the cone,
    /// equal to it when `gap_exact`.
    Admissible {
        #[serde(with = "crate::exact::q_str")]
        gap: Q,
        gap_exact: bool,
    },
    NotAdmissible {
        witness: Weight,
    },
    Unknown {
        reason: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityVerdict {
    #[serde(flatten)]
    pub status: Verdict,
    pub backend: Backend,
}

/// A depth that reaches several shells past the minimal `K'`-type.
pub fn default_depth(gprime: &GroupData, orbit: &OrbitParam) -> Q {
    let min = sqrt_upper(&c_norm2(gprime, &minimal_ktype(gprime, orbit)));
    let longest = gprime.roots.positive.iter().map(|r| gprime.norm2(&r.coords)).max().unwrap_or_else(Q::zero);
    (q(4) * min + q(6) * sqrt_upper(&longest)).ceil()
}

fn outer_shell_directions(gprime: &GroupData, orbit: &OrbitParam, depth: &Q) -> Result<Vec<Weight>> {
    let support = restrict_to_k(gprime, orbit, depth)?;
    if support.is_zero() {
        return Err(Error::EmptySupport(format!("no K-types of {} up to depth {depth}", orbit.lambda)));
    }
    let apex = minimal_ktype(gprime, orbit);
    let inner2 = depth * depth / q(4);
    let mut dirs: BTreeSet<Vec<i64>> = BTreeSet::new();
    for mu in support.coeffs.keys() {
        if c_norm2(gprime, mu) < inner2 {
            continue;
        }
        let d = mu - &apex;
        if !d.is_zero() {
            dirs.insert(primitive_direction(&d.0));
        }
    }
    Ok(dirs.into_iter().map(|d| Weight::from_ints(&d)).collect())
}

/// Cone spanned by the directions from the minimal `K'`-type to the `K'`-types
/// in the outer shell `depth/2 ≤ c^{K'} ≤ depth`, reduced to a minimal
/// generating set.
pub fn asymptotic_support_cone(gprime: &GroupData, orbit: &OrbitParam, depth: &Q) -> Result<ConeDesc> {
    let dirs = outer_shell_directions(gprime, orbit, depth)?;
    Ok(ConeDesc { generators: prune_generators(&dirs), exactness: Exactness::Exact { depth: *depth } })
}

/// Same as [`asymptotic_support_cone`] but keeps only `samples` randomly chosen
/// outer-shell directions.
pub fn sampled_support_cone(
    gprime: &GroupData,
    orbit: &OrbitParam,
    depth: &Q,
    seed: u64,
    samples: usize,
) -> Result<ConeDesc> {
    let mut dirs = outer_shell_directions(gprime, orbit, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dirs.shuffle(&mut rng);
    dirs.truncate(samples.max(1));
    dirs.sort();
    Ok(ConeDesc { generators: prune_generators(&dirs), exactness: Exactness::Sampled { depth: *depth, seed, samples } })
}

/// Drops generators that are nonnegative combinations of the others.
pub fn prune_generators(gens: &[Weight]) -> Vec<Weight> {
    let mut keep: Vec<Weight> = Vec::new();
    for g in gens {
        if !g.is_zero() && !keep.contains(g) {
            keep.push(g.clone());
        }
    }
    let mut i = 0;
    while i < keep.len() {
        let others: Vec<Vec<Q>> = keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.0.clone()).collect();
        if !others.is_empty() && conic_combination(&others, &keep[i].0).is_some() {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    keep
}

/// True when the Cartan-level check decides admissibility: `K'` is a torus,
/// or `K = K'`, or the caller vouches for saturation.
pub fn cartan_check_is_conclusive(gprime: &GroupData, g: &GroupData, saturation: bool) -> bool {
    let dim_k = |x: &GroupData| x.rank() + 2 * x.roots.compact_positive().count();
    saturation || gprime.roots.compact_positive().next().is_none() || dim_k(gprime) == dim_k(g)
}

/// Finds a nonzero `x` in `w · cone` with `p(x) = 0`, for some `w`.
pub fn kernel_witness(cone: &ConeDesc, emb: &Embedding, weyl: &[WeylElement]) -> Option<Weight> {
    let dim = cone.generators.first()?.rank();
    for w in weyl {
        let gens: Vec<Weight> = cone.generators.iter().map(|g| w.apply(g)).collect();
        let images: Vec<Weight> = gens.iter().map(|g| emb.project(g)).collect();
        for j in 0..dim {
            for s in [1i64, -1] {
                // p(Σ c_i g_i) = 0 and s·(Σ c_i g_i)_j = 1 with c ≥ 0.
                let mut rows: Vec<Vec<BigRational>> =
                    (0..images[0].rank()).map(|k| images.iter().map(|im| to_big(&im.0[k])).collect()).collect();
                rows.push(gens.iter().map(|g| to_big(&(g.0[j] * q(s)))).collect());
                let mut rhs = vec![BigRational::zero(); rows.len() - 1];
                rhs.push(BigRational::one());
                if let Some(c) = nonnegative_solution(&rows, &rhs) {
                    let mut x = vec![Q::zero(); dim];
                    for (ci, g) in c.iter().zip(&gens) {
                        let ci = from_big(ci);
                        for (xk, gk) in x.iter_mut().zip(&g.0) {
                            *xk += ci * gk;
                        }
                    }
                    return Some(Weight::from_ints(&primitive_direction(&x)));
                }
            }
        }
    }
    None
}

/// The admissibility verdict for a cone of `G'` under the projection to `G`.
pub fn check_admissibility(
    gprime: &GroupData,
    g: &GroupData,
    cone: &ConeDesc,
    emb: &Embedding,
    weyl: &[WeylElement],
    conclusive: bool,
) -> Result<AdmissibilityVerdict> {
    if cone.generators.is_empty() {
        return Err(Error::DegenerateCone("the cone has no generators".into()));
    }
    let backend = match cone.exactness {
        Exactness::Exact { .. } => Backend::Exact,
        Exactness::Sampled { .. } => Backend::Sampled,
    };
    if let Some(witness) = kernel_witness(cone, emb, weyl) {
        return Ok(AdmissibilityVerdict { status: Verdict::NotAdmissible { witness }, backend });
    }
    let status = if backend == Backend::Sampled {
        Verdict::Unknown { reason: "sampled cone can only refute admissibility".into() }
    } else if !conclusive {
        Verdict::Unknown { reason: "Weyl translates do not exhaust the K'-saturation of the cone".into() }
    } else {
        let gap = truncation_gap(gprime, g, &cone.generators, emb, weyl)?;
        if !gap.rigorous {
            Verdict::Unknown { reason: "gap could only be estimated on this cone".into() }
        } else {
            Verdict::Admissible { gap: gap.value, gap_exact: gap.exact }
        }
    };
    Ok(AdmissibilityVerdict { status, backend })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    #[serde(with = "crate::exact::q_str")]
    pub value: Q,
    /// The value is the true minimum, not only a lower bound.
    pub exact: bool,
    /// The value is a proven lower bound.
    pub rigorous: bool,
}

struct Forms<'a> {
    gprime: &'a GroupData,
    g: &'a GroupData,
    emb: &'a Embedding,
}

impl Forms<'_> {
    /// `(p x, p y)` and `(x, y)'`.
    fn pair(&self, x: &Weight, y: &Weight) -> (Q, Q) {
        (self.g.inner(&self.emb.project(x), &self.emb.project(y)), self.gprime.inner(x, y))
    }
}

/// Lower bound for `min ‖p(x)‖² / ‖x‖²` on the 2-dimensional cone spanned by
/// `u` and `v`, with exactness flag.
fn edge_min(f: &Forms<'_>, u: &Weight, v: &Weight) -> (Q, bool) {
    let (a11, b11) = f.pair(u, u);
    let (a22, b22) = f.pair(v, v);
    let (a12, b12) = f.pair(u, v);
    let ends = (a11 / b11).min(a22 / b22);
    let det_b = b11 * b22 - b12 * b12;
    if det_b.is_zero() {
        return (ends, true);
    }
    // det(A - tB) = det_b t² - tr t + det_a.
    let tr = a11 * b22 + a22 * b11 - q(2) * a12 * b12;
    let det_a = a11 * a22 - a12 * a12;
    let disc = tr * tr - q(4) * det_b * det_a;
    // The smaller root has eigenvector (1, s) with s > 0 iff t·b12 > a12.
    let interior = {
        let root_gt = |c: Q| {
            let lhs = tr - q(2) * det_b * c;
            lhs.is_positive() && lhs * lhs > disc
        };
        let root_lt = |c: Q| {
            let lhs = tr - q(2) * det_b * c;
            lhs.is_negative() || lhs * lhs < disc
        };
        if b12.is_positive() {
            root_gt(a12 / b12)
        } else if b12.is_negative() {
            root_lt(a12 / b12)
        } else {
            a12.is_negative()
        }
    };
    if !interior {
        return (ends, true);
    }
    let (lo, exact) = {
        let s = sqrt_upper(&disc);
        let exact = s * s == disc;
        (((tr - s) / (q(2) * det_b)).max(Q::zero()), exact)
    };
    (lo.min(ends), exact)
}

/// `PᵀGP - t G'`, the quadratic form whose sign decides `‖p(x)‖² ≥ t ‖x‖²`.
fn shifted_form(f: &Forms<'_>, t: Q) -> Matrix {
    let n = f.gprime.rank();
    let basis: Vec<Weight> = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            Weight::from_ints(&v)
        })
        .collect();
    basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| {
                    let (a, b) = f.pair(x, y);
                    a - t * b
                })
                .collect()
        })
        .collect()
}

/// True iff `‖p(x)‖² ≥ t ‖x‖²` on the whole space (all principal minors of
/// the shifted form are nonnegative).
fn global_min_at_least(f: &Forms<'_>, t: Q) -> bool {
    let m = shifted_form(f, t);
    let n = m.len();
    (1..1usize << n).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let minor: Matrix = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect();
        !determinant(&minor).is_negative()
    })
}

/// Largest dyadic fraction `t` of `upper` (within 24 halvings) with
/// `PᵀGP - t G'` positive definite; a lower bound for the global minimum.
fn global_min_lower(f: &Forms<'_>, upper: Q) -> Q {
    let pd = |t: Q| crate::exact::is_positive_definite(&shifted_form(f, t));
    let (mut lo, mut hi) = (Q::zero(), upper);
    if !pd(lo) {
        return Q::zero();
    }
    for _ in 0..24 {
        let mid = (lo + hi) / q(2);
        if pd(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `δ = min_w min_{x ∈ w·cone} ‖p(x)‖ / ‖x‖`, as a rational lower bound.
///
/// Exact for cones with at most two generators; for larger cones a proven
/// bound is available when `p` is injective, otherwise only an estimate
/// from vertices and edges.
pub fn truncation_gap(
    gprime: &GroupData,
    g: &GroupData,
    generators: &[Weight],
    emb: &Embedding,
    weyl: &[WeylElement],
) -> Result<Gap> {
    let f = Forms { gprime, g, emb };
    let gens = prune_generators(generators);
    if gens.is_empty() {
        return Err(Error::DegenerateCone("the cone has no generators".into()));
    }
    let mut best2: Option<Q> = None;
    let mut exact = true;
    let mut rigorous = true;
    for w in weyl {
        let gw: Vec<Weight> = gens.iter().map(|x| w.apply(x)).collect();
        let mut local = gw
            .iter()
            .map(|x| {
                let (a, b) = f.pair(x, x);
                a / b
            })
            .min()
            .unwrap();
        for i in 0..gw.len() {
            for j in i + 1..gw.len() {
                let (v, e) = edge_min(&f, &gw[i], &gw[j]);
                exact &= e;
                local = local.min(v);
            }
        }
        if gw.len() > 2 {
            if global_min_at_least(&f, local) {
                // The vertex minimum is attained, so it is the minimum.
            } else if emb.is_injective() {
                exact = false;
                local = local.min(global_min_lower(&f, local));
            } else {
                exact = false;
                rigorous = false;
            }
        }
        best2 = Some(best2.map_or(local, |b: Q| b.min(local)));
    }
    let best2 = best2.unwrap();
    let value = sqrt_lower(&best2);
    if value.is_zero() {
        return Err(Error::ZeroGap);
    }
    Ok(Gap { value, exact: exact && value * value == best2, rigorous })
}

/// Gap of the cone spanned by `R_n'^+(λ')` and its `W_{K'}`-translates. Every
/// `K'`-type of the discrete series lies in `w(apex + cone)` for some `w`.
pub fn certification_gap(gprime: &GroupData, g: &GroupData, emb: &Embedding, orbit: &OrbitParam) -> Result<Gap> {
    let gens = positive_noncompact(gprime, &orbit.lambda);
    truncation_gap(gprime, g, &gens, emb, gprime.weyl_k())
}

/// Convenience wrapper: estimate the cone at `depth` and decide.
pub fn assess(
    gprime: &GroupData,
    g: &GroupData,
    emb: &Embedding,
    orbit: &OrbitParam,
    depth: &Q,
    saturation: bool,
) -> Result<(ConeDesc, AdmissibilityVerdict)> {
    let cone = asymptotic_support_cone(gprime, orbit, depth)?;
    let conclusive = cartan_check_is_conclusive(gprime, g, saturation);
    let verdict = check_admissibility(gprime, g, &cone, emb, gprime.weyl_k(), conclusive)?;
    Ok((cone, verdict))
}
