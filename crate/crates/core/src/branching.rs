//! Branching of a discrete series of `G'` to a subgroup `G`.
//!
//! The restriction `π'|_K'` is computed by Blattner's formula, restricted to
//! `K`, tensored with the spinor character `S` of `G`, and decomposed over
//! `K̃`. Since `π^G_λ|_K ⊗ S = ±[λ]` for every discrete series of `G`, the
//! coefficient of `[λ]` in the result is `±` the multiplicity of `π^G_λ`.
//!
//! Truncation is certified when the projection has a positive gap on the
//! cone of `K'`-type directions: `K'`-types beyond the radius `R` computed in
//! [`kprime_radius`] cannot reach the window of interest.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{
    assess, cartan_check_is_conclusive, certification_gap, default_depth, truncation_gap, AdmissibilityVerdict,
    Embedding, Verdict,
};
use crate::blattner::{minimal_ktype, restrict_to_k};
use crate::chambers::{c_norm2, enumerate_all_orbits, is_strongly_elliptic_regular, orbit_param, OrbitParam};
use crate::characters::{branch_compact, c_norm2 as ktype_c_norm2, tensor_spinor, VirtualCharacter};
use crate::error::{Error, Result};
use crate::exact::{frac, q, round_up, sqrt_upper, Q};
use crate::rootdata::{GroupData, RootDatum};
use crate::spinor::{in_k_out, orientation_ratio, spinor_character, SpinorCharacter};
use crate::weight::Weight;

/// A pair `G ⊂ G'` with the orientation used for the spinor twist.
#[derive(Clone, Debug)]
pub struct Pair {
    pub gprime: GroupData,
    pub g: GroupData,
    pub embedding: Embedding,
    pub orientation_ref: Weight,
    pub cartan_saturation: bool,
}

/// `ρ` for the positive system of `G`.
pub fn rho(g: &GroupData) -> Weight {
    let mut acc = Weight::zero(g.rank());
    for r in &g.roots.positive {
        acc += &r.coords;
    }
    acc.scale(frac(1, 2))
}

impl Pair {
    pub fn new(
        gprime: GroupData,
        g: GroupData,
        embedding: Embedding,
        orientation_ref: Option<Weight>,
        cartan_saturation: bool,
    ) -> Result<Self> {
        let orientation_ref = orientation_ref.unwrap_or_else(|| rho(&g));
        if !is_strongly_elliptic_regular(&g, &orientation_ref) {
            return Err(Error::NotStronglyElliptic(orientation_ref.to_string()));
        }
        Ok(Pair { gprime, g, embedding, orientation_ref, cartan_saturation })
    }

    /// `G` restricted to itself.
    pub fn identity(g: GroupData) -> Self {
        let embedding = Embedding::identity(g.rank());
        Pair::new(g.clone(), g, embedding, None, false).expect("ρ is strongly elliptic")
    }

    /// The same pair with the invariant forms of `G'` and `G` rescaled.
    pub fn with_scaled_forms(&self, cprime: Q, c: Q) -> Result<Self> {
        let scale = |d: &RootDatum, s: Q| GroupData::new(d.with_scaled_gram(s));
        Pair::new(
            scale(&self.gprime.datum, cprime)?,
            scale(&self.g.datum, c)?,
            self.embedding.clone(),
            Some(self.orientation_ref.clone()),
            self.cartan_saturation,
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct RestrictOptions {
    /// Depth of the `K'`-type cone estimate; a default is derived from `λ'`.
    pub depth: Option<Q>,
    /// Run even when admissibility is refuted, in stabilization mode.
    pub force: bool,
    /// Use two-radius stabilization even when a certified radius exists.
    pub stabilize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Certified,
    Stabilized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingEntry {
    pub orbit: OrbitParam,
    pub multiplicity: i64,
    /// `‖λ + ρ(λ)‖²`
    #[serde(with = "crate::exact::q_str")]
    pub c_norm2: Q,
    pub certified: bool,
    /// Equal values at both radii of a stabilization run (always true when certified).
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    /// One nonzero entry per chamber that carries multiplicity.
    pub witnesses: Vec<OrbitParam>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChamberCheck {
    /// The chamber holding every nonzero entry; `None` when all vanish.
    Unique {
        chamber: Option<usize>,
    },
    Violation(ViolationReport),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParityStats {
    /// Nonzero `K̃`-types inspected in the certified window.
    pub checked: usize,
    /// Those lying in `K̂_out`.
    pub in_k_out: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingResult {
    pub entries: Vec<BranchingEntry>,
    #[serde(with = "crate::exact::q_str")]
    pub cutoff: Q,
    #[serde(serialize_with = "crate::exact::opt_q_str::serialize")]
    pub gap: Option<Q>,
    pub mode: Mode,
    #[serde(with = "crate::exact::q_str")]
    pub kprime_radius: Q,
    pub verdict: AdmissibilityVerdict,
    pub chamber: ChamberCheck,
    pub parity: ParityStats,
}

impl BranchingResult {
    pub fn multiplicity(&self, lambda: &Weight) -> Option<i64> {
        self.entries.iter().find(|e| &e.orbit.lambda == lambda).map(|e| e.multiplicity)
    }

    /// Nonzero entries as a map.
    pub fn support(&self) -> BTreeMap<Weight, i64> {
        self.entries.iter().filter(|e| e.multiplicity != 0).map(|e| (e.orbit.lambda.clone(), e.multiplicity)).collect()
    }
}

/// Radius in `c^{K'}` beyond which no `K'`-type reaches `c^K ≤ r_k`, given a
/// gap `δ` on every `W_{K'}`-translate of the noncompact cone of `λ'`.
pub fn kprime_radius(pair: &Pair, orbit: &OrbitParam, r_k: &Q, delta: &Q) -> Q {
    let (gp, g) = (&pair.gprime, &pair.g);
    let apex = minimal_ktype(gp, orbit);
    let norm = |grp: &GroupData, w: &Weight| sqrt_upper(&grp.norm2(w));
    let p_apex = gp.weyl_k().iter().map(|w| norm(g, &pair.embedding.project(&w.apply(&apex)))).max().unwrap();
    let p_rho = norm(g, &pair.embedding.project(gp.rho_c()));
    let shift = p_apex + p_rho + q(2) * norm(g, g.rho_c());
    round_up(&((r_k + shift) / delta + norm(gp, gp.rho_c()) + norm(gp, &apex)), RADIUS_GRID)
}

/// Denominator of the grid radii are rounded up to.
const RADIUS_GRID: i64 = 256;

/// `Σ_{K'-types} m · (branch to K)`, tensored with `S`, certified to `r_k - Δ`.
fn ktilde_character(
    pair: &Pair,
    orbit: &OrbitParam,
    radius: &Q,
    r_k: &Q,
    s: &SpinorCharacter,
) -> Result<VirtualCharacter> {
    let upstairs = restrict_to_k(&pair.gprime, orbit, radius)?;
    let pieces: Vec<Result<(i64, VirtualCharacter)>> = upstairs
        .coeffs
        .par_iter()
        .map(|(mu, m)| branch_compact(&pair.gprime, &pair.g, &pair.embedding, mu).map(|v| (*m, v)))
        .collect();
    let mut down = VirtualCharacter::new(*r_k);
    for piece in pieces {
        let (m, v) = piece?;
        for (mu, c) in v.coeffs {
            down.add(mu, m * c);
        }
    }
    Ok(tensor_spinor(&pair.g, &down, s))
}

struct Extraction {
    values: BTreeMap<OrbitParam, i64>,
    parity: ParityStats,
}

/// Reads multiplicities off a `K̃`-character and checks that every nonzero
/// `K̃`-type in the window `c ≤ r + Δ` is the parameter of a discrete series.
fn extract(pair: &Pair, t: &VirtualCharacter, orbits: &[OrbitParam], window: &Q, strict: bool) -> Result<Extraction> {
    let g = &pair.g;
    let mut parity = ParityStats::default();
    let w2 = window * window;
    for (nu, c) in &t.coeffs {
        if ktype_c_norm2(g, nu) > w2 {
            continue;
        }
        parity.checked += 1;
        let ok = in_k_out(g, nu)?;
        if ok {
            parity.in_k_out += 1;
        }
        if strict {
            if !ok {
                return Err(Error::UnexpectedKtype { ktype: nu.to_string(), reason: "outside K_out".into() });
            }
            if !g.avoids_noncompact_walls(nu) {
                return Err(Error::UnexpectedKtype {
                    ktype: nu.to_string(),
                    reason: format!("coefficient {c} on a noncompact wall"),
                });
            }
        }
    }
    let mut values = BTreeMap::new();
    for o in orbits {
        let sign = orientation_ratio(g, &pair.orientation_ref, &-&o.lambda)?;
        let m = sign * t.get(&o.lambda);
        if strict && m < 0 {
            return Err(Error::NegativeMultiplicity { at: o.lambda.to_string(), value: m });
        }
        values.insert(o.clone(), m);
    }
    Ok(Extraction { values, parity })
}

/// Multiplicities of every discrete series of `G` with `c^G ≤ r` in the
/// restriction of the discrete series `λ'` of `G'`.
pub fn restrict_discrete_series(
    pair: &Pair,
    lambda_prime: &Weight,
    r: &Q,
    opts: &RestrictOptions,
) -> Result<BranchingResult> {
    let (gp, g) = (&pair.gprime, &pair.g);
    let orbit = orbit_param(gp, lambda_prime)?;
    let depth = opts.depth.unwrap_or_else(|| default_depth(gp, &orbit));
    let (cone, verdict) = assess(gp, g, &pair.embedding, &orbit, &depth, pair.cartan_saturation)?;
    if let Verdict::NotAdmissible { witness } = &verdict.status {
        if !opts.force {
            return Err(Error::NotAdmissiblePair(witness.to_string()));
        }
    }
    let s = spinor_character(g, &pair.orientation_ref)?;
    let delta_s = s.shift(g);
    let window = r + delta_s;
    let r_k = window + delta_s;
    let orbits = enumerate_all_orbits(g, r);

    let certifiable = matches!(verdict.status, Verdict::Admissible { .. })
        && cartan_check_is_conclusive(gp, g, pair.cartan_saturation)
        && !opts.stabilize;
    let cert_gap = if certifiable {
        certification_gap(gp, g, &pair.embedding, &orbit).ok().filter(|gap| gap.rigorous)
    } else {
        None
    };
    let gap = match &verdict.status {
        Verdict::Admissible { gap, .. } => Some(*gap),
        _ => None,
    };

    let (mode, radius, entries, parity) = if let Some(cg) = cert_gap {
        let radius = kprime_radius(pair, &orbit, &r_k, &cg.value);
        let t = ktilde_character(pair, &orbit, &radius, &r_k, &s)?;
        let ex = extract(pair, &t, &orbits, &window, true)?;
        let entries: Vec<BranchingEntry> = ex
            .values
            .into_iter()
            .map(|(o, m)| BranchingEntry {
                c_norm2: c_norm2(g, &o.lambda),
                orbit: o,
                multiplicity: m,
                certified: true,
                stable: true,
            })
            .collect();
        (Mode::Certified, radius, entries, ex.parity)
    } else {
        let estimate = truncation_gap(gp, g, &cone.generators, &pair.embedding, gp.weyl_k())
            .map(|gap| gap.value)
            .unwrap_or(frac(1, 2));
        let r1 = kprime_radius(pair, &orbit, &r_k, &estimate);
        let r2 = r1 * q(2);
        let t1 = ktilde_character(pair, &orbit, &r1, &r_k, &s)?;
        let t2 = ktilde_character(pair, &orbit, &r2, &r_k, &s)?;
        let e1 = extract(pair, &t1, &orbits, &window, false)?;
        let e2 = extract(pair, &t2, &orbits, &window, false)?;
        let entries: Vec<BranchingEntry> = e2
            .values
            .into_iter()
            .map(|(o, m)| BranchingEntry {
                c_norm2: c_norm2(g, &o.lambda),
                stable: e1.values.get(&o) == Some(&m),
                orbit: o,
                multiplicity: m,
                certified: false,
            })
            .collect();
        (Mode::Stabilized, r2, entries, e2.parity)
    };
    let chamber = verify_unique_chamber(&entries);
    Ok(BranchingResult { entries, cutoff: *r, gap, mode, kprime_radius: radius, verdict, chamber, parity })
}

/// A single multiplicity; `λ` must lie in the window `c^G ≤ r`.
pub fn multiplicity(pair: &Pair, lambda_prime: &Weight, lambda: &Weight, r: &Q, opts: &RestrictOptions) -> Result<i64> {
    let o = orbit_param(&pair.g, lambda)?;
    if c_norm2(&pair.g, &o.lambda) > r * r {
        return Err(Error::UncertifiedRange(lambda.to_string()));
    }
    let result = restrict_discrete_series(pair, lambda_prime, r, opts)?;
    Ok(result.multiplicity(lambda).unwrap_or(0))
}

/// The chamber shared by all nonzero entries, or one witness per chamber.
pub fn verify_unique_chamber(entries: &[BranchingEntry]) -> ChamberCheck {
    let mut by_chamber: BTreeMap<usize, &OrbitParam> = BTreeMap::new();
    for e in entries.iter().filter(|e| e.multiplicity != 0) {
        by_chamber.entry(e.orbit.chamber).or_insert(&e.orbit);
    }
    match by_chamber.len() {
        0 => ChamberCheck::Unique { chamber: None },
        1 => ChamberCheck::Unique { chamber: by_chamber.keys().next().copied() },
        _ => ChamberCheck::Violation(ViolationReport { witnesses: by_chamber.into_values().cloned().collect() }),
    }
}

/// True iff runs at `r1 < r2` agree on every orbit with `c^G ≤ r1`.
pub fn stabilization_check(pair: &Pair, lambda_prime: &Weight, r1: &Q, r2: &Q, opts: &RestrictOptions) -> Result<bool> {
    assert!(r1 < r2, "stabilization_check needs r1 < r2");
    let a = restrict_discrete_series(pair, lambda_prime, r1, opts)?;
    let b = restrict_discrete_series(pair, lambda_prime, r2, opts)?;
    let lim = r1 * r1;
    Ok(a.entries.iter().filter(|e| e.c_norm2 <= lim).all(|e| b.multiplicity(&e.orbit.lambda) == Some(e.multiplicity)))
}

/// Sanity guard used by callers that accept a raw cutoff.
pub fn check_cutoff(r: &Q) -> Result<()> {
    if r.is_negative() || r.is_zero() {
        return Err(Error::Config(format!("cutoff must be positive, got {r}")));
    }
    Ok(())
}
