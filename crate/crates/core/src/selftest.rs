//! Built-in acceptance suite, runnable from the command line.
//!
//! Each criterion compares the engine against a brute-force reference from
//! [`crate::oracle`] or against a structural identity. With a custom config
//! the group-level criteria run on its groups and the pipeline criteria on
//! its pair; criteria that only make sense for the bundled data are skipped.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::admissible::{assess, default_depth, Verdict};
use crate::blattner::{blattner_multiplicity, ktype_candidates, partition_count, restrict_to_k};
use crate::branching::{restrict_discrete_series, rho, BranchingResult, ChamberCheck, Mode, Pair, RestrictOptions};
use crate::bundled;
use crate::chambers::{c_norm2, enumerate_chambers, enumerate_orbits, orbit_param, OrbitParam};
use crate::characters::{c_norm2 as ktype_c_norm2, tensor_spinor};
use crate::config::Config;
use crate::error::Result;
use crate::exact::{fmt_q, frac, q, sqrt_upper, Q};
use crate::oracle;
use crate::rootdata::GroupData;
use crate::spinor::{in_k_out, orientation_ratio, positive_noncompact, spinor_character};
use crate::weight::Weight;

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    /// Raises the windows of the ladder, telescoping and pipeline criteria.
    pub cutoff: Option<Q>,
    /// Run on this config instead of the bundled data.
    pub config: Option<Config>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "criterion {:>2} {:<24} {} ({})", self.id, self.name, self.status, self.detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail)
    }
}

pub const NAMES: [&str; 10] = [
    "root-closure",
    "chamber-counts",
    "partition-oracle",
    "blattner-ladder",
    "vanishing-window",
    "telescoping",
    "branching-pipeline",
    "admissibility",
    "stability-and-scaling",
    "coset-parity",
];

type Check = std::result::Result<String, String>;

fn outcome(id: u8, check: Option<Check>) -> Outcome {
    let name = NAMES[id as usize - 1];
    match check {
        None => Outcome { id, name, status: Status::Skip, detail: "not applicable to this config".into() },
        Some(Ok(detail)) => Outcome { id, name, status: Status::Pass, detail },
        Some(Err(detail)) => Outcome { id, name, status: Status::Fail, detail },
    }
}

fn engine<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{} ({})", e, e.reason()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs every criterion and collects the outcomes in order.
pub fn run(opts: &SelftestOptions) -> Report {
    let mut parity = ParityLog::default();
    let outcomes = match &opts.config {
        None => run_bundled(opts, &mut parity),
        Some(cfg) => run_config(cfg, opts, &mut parity),
    };
    Report { outcomes }
}

fn run_bundled(opts: &SelftestOptions, parity: &mut ParityLog) -> Vec<Outcome> {
    let groups = [("sl2", bundled::sl2()), ("su21", bundled::su21()), ("sp4", bundled::sp4())];
    let expected_chambers = BTreeMap::from([("sl2", 2), ("su21", 3), ("sp4", 4)]);
    let mut out = vec![
        outcome(1, Some(root_closure(&groups))),
        outcome(2, Some(chamber_counts(&groups, &expected_chambers))),
        outcome(3, Some(partition_oracle(&groups))),
        outcome(4, Some(blattner_ladder(opts.cutoff.unwrap_or(q(25))))),
        outcome(5, Some(vanishing_window(&groups, &q(6)))),
    ];
    let telescoping_cases: Vec<(&str, GroupData, Vec<usize>)> = vec![
        ("sl2", bundled::sl2(), vec![0, 1]),
        ("su21", bundled::su21(), vec![0, 1]),
        ("sp4", bundled::sp4(), vec![0]),
    ];
    out.push(outcome(6, Some(telescoping(&telescoping_cases, opts.cutoff, parity))));
    out.push(outcome(7, Some(diagonal_pipeline(opts.cutoff.unwrap_or(q(20)), parity))));
    out.push(outcome(8, Some(admissibility_verdicts())));
    out.push(outcome(9, Some(stability_bundled(opts.cutoff.unwrap_or(q(12)), parity))));
    out.push(outcome(10, Some(parity.verdict())));
    out
}

fn run_config(cfg: &Config, opts: &SelftestOptions, parity: &mut ParityLog) -> Vec<Outcome> {
    let mut groups: Vec<(&str, GroupData)> = Vec::new();
    let mut load = |name: &'static str, sec: &crate::config::GroupSection| match sec.group() {
        Ok(g) => {
            groups.push((name, g));
            Ok(())
        }
        Err(e) => Err(format!("{name}: {e}")),
    };
    let mut load_err = load("g", &cfg.group.g).err();
    if let Some(gp) = &cfg.group.gprime {
        load_err = load_err.or(load("gprime", gp).err());
    }
    if let Some(e) = load_err {
        return (1..=10).map(|id| outcome(id, Some(Err(e.clone())))).collect();
    }
    let mut expected = BTreeMap::new();
    if let Some(n) = cfg.expect.as_ref().and_then(|e| e.chambers) {
        expected.insert("g", n);
    }
    let mut out = vec![
        outcome(1, Some(root_closure(&groups))),
        outcome(2, Some(chamber_counts(&groups, &expected))),
        outcome(3, Some(partition_oracle(&groups))),
        outcome(4, None),
        outcome(5, Some(vanishing_window(&groups, &q(6)))),
    ];
    let cases: Vec<(&str, GroupData, Vec<usize>)> =
        groups.iter().map(|(n, g)| (*n, g.clone(), enumerate_chambers(g).iter().map(|c| c.id).collect())).collect();
    out.push(outcome(6, Some(telescoping(&cases, opts.cutoff, parity))));
    if cfg.is_pair() {
        let (c7, c8, c9) = pair_criteria(cfg, opts, parity);
        out.extend([outcome(7, Some(c7)), outcome(8, Some(c8)), outcome(9, Some(c9))]);
    } else {
        out.extend([outcome(7, None), outcome(8, None), outcome(9, None)]);
    }
    out.push(outcome(10, Some(parity.verdict())));
    out
}

/// Pipeline, verdict and stability criteria for the pair of a config. A
/// refuted pair passes 7 and 9 when the pipeline refuses it.
fn pair_criteria(cfg: &Config, opts: &SelftestOptions, parity: &mut ParityLog) -> (Check, Check, Check) {
    let setup = || -> std::result::Result<(Pair, Weight, Verdict), String> {
        let pair = engine(cfg.pair())?;
        let lp = engine(cfg.orbit())?.ok_or("config has no [run] orbit")?;
        let orbit = engine(orbit_param(&pair.gprime, &lp))?;
        let depth = engine(cfg.depth())?.unwrap_or_else(|| default_depth(&pair.gprime, &orbit));
        let (_, v) = engine(assess(&pair.gprime, &pair.g, &pair.embedding, &orbit, &depth, pair.cartan_saturation))?;
        Ok((pair, lp, v.status))
    };
    let (pair, lp, verdict) = match setup() {
        Ok(x) => x,
        Err(e) => return (Err(e.clone()), Err(e.clone()), Err(e)),
    };
    let c8 = match &verdict {
        Verdict::Admissible { gap, .. } if !gap.is_positive() => Err("admissible with a nonpositive gap".into()),
        v => Ok(serde_json::to_string(v).expect("verdict serializes")),
    };
    let cutoff =
        |default: Q| -> std::result::Result<Q, String> { Ok(opts.cutoff.or(engine(cfg.cutoff())?).unwrap_or(default)) };
    if let Verdict::NotAdmissible { witness } = &verdict {
        let refused = || -> Check {
            match restrict_discrete_series(&pair, &lp, &cutoff(q(12))?, &RestrictOptions::default()) {
                Err(crate::Error::NotAdmissiblePair(w)) if w == witness.to_string() => {
                    Ok(format!("refused with witness {w}"))
                }
                Err(e) => Err(format!("refused with the wrong error: {e}")),
                Ok(_) => Err("a refuted pair produced multiplicities".into()),
            }
        };
        return (refused(), c8, refused());
    }
    let mut c7 = || -> Check {
        let r = cutoff(q(12))?;
        let res = engine(restrict_discrete_series(&pair, &lp, &r, &RestrictOptions::default()))?;
        parity.record("config pair", &res);
        pipeline_invariants(&res)?;
        Ok(format!("{} nonzero entries up to cutoff {}", res.support().len(), fmt_q(&r)))
    };
    let c7 = c7();
    let c9 = cutoff(q(8)).and_then(|r| stability(&pair, &lp, &r, parity));
    (c7, c8, c9)
}

fn root_closure(groups: &[(&str, GroupData)]) -> Check {
    let mut roots = 0;
    for (name, g) in groups {
        engine(g.roots.check_closure_rules()).map_err(|e| format!("{name}: {e}"))?;
        ensure(oracle::closure_rules_hold(g), || format!("{name}: pairwise root sums break the flag rules"))?;
        roots += g.roots.len();
    }
    Ok(format!("{} groups, {roots} roots", groups.len()))
}

fn chamber_counts(groups: &[(&str, GroupData)], expected: &BTreeMap<&str, usize>) -> Check {
    let mut found = Vec::new();
    for (name, g) in groups {
        let chambers = enumerate_chambers(g);
        for c in &chambers {
            let o = engine(crate::chambers::chamber_of(g, &c.representative))?;
            ensure(o.id == c.id, || format!("{name}: representative of chamber {} lies in {}", c.id, o.id))?;
        }
        let sampled = oracle::sampled_sign_vectors(g, &q(64));
        let signs: Vec<&Vec<i8>> = chambers.iter().map(|c| &c.signs).collect();
        ensure(sampled.iter().all(|s| signs.contains(&s)), || {
            format!("{name}: lattice scan finds an unlisted chamber")
        })?;
        if let Some(&n) = expected.get(name) {
            ensure(chambers.len() == n, || format!("{name}: {} chambers, expected {n}", chambers.len()))?;
            ensure(sampled.len() == n, || {
                format!("{name}: lattice scan finds {} chambers, expected {n}", sampled.len())
            })?;
        }
        found.push(format!("{name}={}", chambers.len()));
    }
    Ok(found.join(" "))
}

fn partition_oracle(groups: &[(&str, GroupData)]) -> Check {
    let mut checked = 0;
    for (name, g) in groups {
        for c in enumerate_chambers(g) {
            let xi = &c.representative;
            let roots = positive_noncompact(g, xi);
            for nu in g.lattice_points_in_ball(&Weight::zero(g.rank()), &q(50)) {
                let fast = partition_count(g, xi, &nu);
                let slow = oracle::naive_partition_count(g, &roots, xi, &nu);
                ensure(fast == slow, || format!("{name} chamber {}: P({nu}) = {fast}, brute force {slow}", c.id))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} weights"))
}

fn blattner_ladder(cutoff: Q) -> Check {
    let g = bundled::sl2();
    // c^K = 2|μ| in root coordinates, so μ = n/2 with n ≤ cutoff.
    let max_n = cutoff.floor().to_i64().unwrap_or(0);
    let mut checked = 0;
    for k in 1..=3 {
        let lambda = Weight(vec![frac(k, 2)]);
        let orbit = engine(orbit_param(&g, &lambda))?;
        let restricted = engine(restrict_to_k(&g, &orbit, &cutoff))?;
        let ladder = oracle::sl2_ladder(k, max_n);
        for n in -max_n..=max_n {
            let mu = Weight(vec![frac(n, 2)]);
            let expected = i64::from(ladder.contains(&n));
            let naive = oracle::naive_blattner(&g, &lambda, &mu);
            let engine_value = restricted.get(&mu);
            ensure(naive == expected && engine_value == expected, || {
                format!("k={k}, μ={mu}: engine {engine_value}, brute force {naive}, ladder {expected}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} K-types up to c^K ≤ {}", fmt_q(&cutoff)))
}

fn vanishing_window(groups: &[(&str, GroupData)], bound: &Q) -> Check {
    let mut pairs = 0;
    for (name, g) in groups {
        for c in enumerate_chambers(g) {
            for orbit in enumerate_orbits(g, &c, bound) {
                let cg2 = c_norm2(g, &orbit.lambda);
                let reach = sqrt_upper(&cg2) + q(2);
                for mu in ktype_candidates(g, &reach) {
                    let m = engine(blattner_multiplicity(g, &orbit, &mu))?;
                    let below = ktype_c_norm2(g, &mu) < cg2;
                    ensure(!(below && m != 0), || {
                        format!("{name}: λ={} has multiplicity {m} at μ={mu} below the window", orbit.lambda)
                    })?;
                    pairs += 1;
                }
                let restricted = engine(restrict_to_k(g, &orbit, &reach))?;
                for mu in restricted.coeffs.keys() {
                    ensure(ktype_c_norm2(g, mu) >= cg2, || format!("{name}: λ={} keeps μ={mu}", orbit.lambda))?;
                }
            }
        }
    }
    Ok(format!("{pairs} (λ, μ) pairs"))
}

/// Distinct values of `c^K` in the certified part of a restriction.
fn shells(g: &GroupData, mus: impl Iterator<Item = Weight>, limit2: &Q) -> usize {
    let mut norms: Vec<Q> = mus.map(|m| ktype_c_norm2(g, &m)).filter(|n| n <= limit2).collect();
    norms.sort();
    norms.dedup();
    norms.len()
}

fn telescoping(cases: &[(&str, GroupData, Vec<usize>)], cutoff: Option<Q>, parity: &mut ParityLog) -> Check {
    let mut runs = 0;
    for (name, g, chamber_ids) in cases {
        let o = rho(g);
        let s = engine(spinor_character(g, &o))?;
        let delta = s.shift(g);
        let chambers = enumerate_chambers(g);
        for id in chamber_ids {
            let Some(c) = chambers.iter().find(|c| c.id == *id) else {
                return Err(format!("{name}: no chamber {id}"));
            };
            let mut orbits = enumerate_orbits(g, c, &q(8));
            orbits.sort_by_key(|o| c_norm2(g, &o.lambda));
            orbits.truncate(2);
            ensure(!orbits.is_empty(), || format!("{name}: chamber {id} has no small orbit"))?;
            for orbit in orbits {
                telescope_one(name, g, &orbit, &o, &s, &delta, cutoff, parity)?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} parameters, at least 10 shells each"))
}

#[allow(clippy::too_many_arguments)]
fn telescope_one(
    name: &str,
    g: &GroupData,
    orbit: &OrbitParam,
    o: &Weight,
    s: &crate::spinor::SpinorCharacter,
    delta: &Q,
    cutoff: Option<Q>,
    parity: &mut ParityLog,
) -> std::result::Result<(), String> {
    let lambda = &orbit.lambda;
    let mut r = sqrt_upper(&c_norm2(g, lambda)) + delta + q(4);
    if let Some(c) = cutoff {
        r = r.max(c);
    }
    loop {
        let restricted = engine(restrict_to_k(g, orbit, &r))?;
        let t = tensor_spinor(g, &restricted, s);
        let cert2 = t.certified_norm * t.certified_norm;
        if shells(g, restricted.coeffs.keys().cloned(), &cert2) < 10 {
            r *= q(2);
            continue;
        }
        let sign = engine(orientation_ratio(g, o, &-lambda))?;
        ensure(ktype_c_norm2(g, lambda) <= cert2, || format!("{name}: λ={lambda} outside the certified range"))?;
        for (nu, c) in t.certified_terms(g) {
            let expected = if nu == lambda { sign } else { 0 };
            ensure(c == expected, || format!("{name}: λ={lambda}, coefficient {c} at {nu}, expected {expected}"))?;
            parity.note(engine(in_k_out(g, nu))?);
        }
        ensure(t.get(lambda) == sign, || format!("{name}: λ={lambda} missing from the twisted restriction"))?;
        return Ok(());
    }
}

/// Certified entries are nonnegative and the nonzero ones share a chamber.
fn pipeline_invariants(res: &BranchingResult) -> std::result::Result<(), String> {
    for e in &res.entries {
        ensure(!(e.certified && e.multiplicity < 0), || {
            format!("negative certified multiplicity at {}", e.orbit.lambda)
        })?;
    }
    match &res.chamber {
        ChamberCheck::Unique { .. } => Ok(()),
        ChamberCheck::Violation(v) => Err(format!("nonzero entries in {} chambers", v.witnesses.len())),
    }
}

fn diagonal_pipeline(cutoff: Q, parity: &mut ParityLog) -> Check {
    let pair = engine(bundled::config("diag-sl2").and_then(|c| c.pair()))?;
    let max_param = (cutoff * q(2)).floor().to_i64().unwrap_or(0);
    let mut total = 0;
    for (k, l) in [(1, 1), (1, 2), (2, 2)] {
        let lp = Weight(vec![frac(k, 2), frac(l, 2)]);
        let res = engine(restrict_discrete_series(&pair, &lp, &cutoff, &RestrictOptions::default()))?;
        parity.record("diag-sl2", &res);
        pipeline_invariants(&res)?;
        ensure(res.mode == Mode::Certified, || format!("({k},{l}): run was not certified"))?;
        let expected: BTreeMap<Weight, i64> = oracle::diagonal_sl2_multiplicities(k, l, max_param)
            .into_iter()
            .map(|(j, m)| (Weight(vec![frac(j, 2)]), m))
            .filter(|(w, _)| c_norm2(&pair.g, w) <= cutoff * cutoff)
            .collect();
        ensure(res.support() == expected, || {
            format!("({k},{l}): got {:?}, oracle {:?}", show(&res.support()), show(&expected))
        })?;
        ensure(res.chamber == ChamberCheck::Unique { chamber: Some(0) }, || format!("({k},{l}): {:?}", res.chamber))?;
        total += expected.len();
    }
    Ok(format!("{total} ladder entries, holomorphic chamber"))
}

fn show(m: &BTreeMap<Weight, i64>) -> Vec<String> {
    m.iter().map(|(w, c)| format!("{w}:{c}")).collect()
}

fn admissibility_verdicts() -> Check {
    let decide = |name: &str, lp: Weight| -> Result<Verdict> {
        let pair = bundled::config(name)?.pair()?;
        let orbit = orbit_param(&pair.gprime, &lp)?;
        let depth = default_depth(&pair.gprime, &orbit);
        Ok(assess(&pair.gprime, &pair.g, &pair.embedding, &orbit, &depth, pair.cartan_saturation)?.1.status)
    };
    let half = frac(1, 2);
    let diag = engine(decide("diag-sl2", Weight(vec![half, half])))?;
    ensure(diag == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("diag-sl2: {diag:?}"))?;
    let hol = engine(decide("hol-antihol-sl2", Weight(vec![half, -half])))?;
    ensure(hol == Verdict::NotAdmissible { witness: Weight::from_ints(&[1, -1]) }, || format!("hol-antihol: {hol:?}"))?;
    let id = engine(decide("identity-su21", Weight::from_ints(&[1, 1])))?;
    ensure(id == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("identity-su21: {id:?}"))?;
    let sl2 = bundled::sl2();
    let pair = Pair::identity(sl2.clone());
    let orbit = engine(orbit_param(&sl2, &Weight(vec![q(1)])))?;
    let (_, v) = engine(assess(&sl2, &sl2, &pair.embedding, &orbit, &q(8), false))?;
    ensure(v.status == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("identity-sl2: {:?}", v.status))?;
    Ok("diag δ=1, hol-antihol witness (1, -1), identity δ=1".into())
}

/// Doubling the cutoff keeps certified entries, and rescaling either form by
/// 3/2 keeps the multiplicity map.
fn stability(pair: &Pair, lp: &Weight, r: &Q, parity: &mut ParityLog) -> Check {
    let opts = RestrictOptions::default();
    let base = engine(restrict_discrete_series(pair, lp, r, &opts))?;
    parity.record("stability", &base);
    let wide = engine(restrict_discrete_series(pair, lp, &(r * q(2)), &opts))?;
    parity.record("stability", &wide);
    for e in base.entries.iter().filter(|e| e.certified) {
        let m = wide.multiplicity(&e.orbit.lambda).unwrap_or(0);
        ensure(m == e.multiplicity, || {
            format!("{} changed from {} to {m} when doubling", e.orbit.lambda, e.multiplicity)
        })?;
    }
    let limit = r * r;
    let restricted = |res: &BranchingResult| -> BTreeMap<Weight, i64> {
        res.support().into_iter().filter(|(w, _)| c_norm2(&pair.g, w) <= limit).collect()
    };
    let reference = restricted(&base);
    let c = frac(3, 2);
    for (cp, cg) in [(c, q(1)), (q(1), c), (c, c)] {
        let scaled = engine(pair.with_scaled_forms(cp, cg))?;
        // Norms grow by at most √(3/2) < 5/4.
        let res = engine(restrict_discrete_series(&scaled, lp, &(r * frac(5, 4)), &opts))?;
        parity.record("scaled", &res);
        let got = restricted(&res);
        ensure(got == reference, || {
            format!(
                "scaling by ({}, {}) changed the map: {:?} vs {:?}",
                fmt_q(&cp),
                fmt_q(&cg),
                show(&got),
                show(&reference)
            )
        })?;
    }
    Ok(format!("{} entries stable under doubling and rescaling", reference.len()))
}

fn stability_bundled(cutoff: Q, parity: &mut ParityLog) -> Check {
    let diag = engine(bundled::config("diag-sl2").and_then(|c| c.pair()))?;
    let a = stability(&diag, &Weight(vec![frac(1, 2), frac(1, 2)]), &cutoff, parity)?;
    let id = engine(bundled::config("identity-su21").and_then(|c| c.pair()))?;
    let b = stability(&id, &Weight::from_ints(&[1, 1]), &(cutoff / q(2)), parity)?;
    Ok(format!("diag-sl2: {a}; identity-su21: {b}"))
}

/// Running tally of `K̃`-types checked against `K̂_out` across all runs.
#[derive(Default)]
struct ParityLog {
    checked: usize,
    passed: usize,
    first_failure: Option<String>,
}

impl ParityLog {
    fn record(&mut self, label: &str, res: &BranchingResult) {
        self.checked += res.parity.checked;
        self.passed += res.parity.in_k_out;
        if res.parity.checked != res.parity.in_k_out && self.first_failure.is_none() {
            self.first_failure = Some(format!("{label}: {} of {} in K_out", res.parity.in_k_out, res.parity.checked));
        }
    }

    fn note(&mut self, ok: bool) {
        self.checked += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some("telescoping run left a K~-type outside K_out".into());
        }
    }

    fn verdict(&self) -> Check {
        if let Some(f) = &self.first_failure {
            return Err(f.clone());
        }
        ensure(self.checked > 0, || "no K~-types were inspected".into())?;
        Ok(format!("{}/{} K~-types in K_out", self.passed, self.checked))
    }
}
