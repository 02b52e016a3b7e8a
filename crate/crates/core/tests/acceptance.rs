//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or runs over its time budget.
//!
//! The reference values are computed here from scratch (Weyl groups by
//! reflection words, partitions by exhaustive enumeration, spinor products by
//! expansion, the diagonal law by counting `K`-types) and compared against
//! the engine.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use orbita::admissible::{assess, default_depth, Verdict};
use orbita::blattner::{blattner_multiplicity, partition_count, restrict_to_k};
use orbita::branching::{restrict_discrete_series, BranchingResult, ChamberCheck, Mode, Pair, RestrictOptions};
use orbita::bundled;
use orbita::chambers::{c_norm2, enumerate_chambers, enumerate_orbits, orbit_param};
use orbita::exact::{frac, q, sqrt_upper};
use orbita::spinor::{orientation_ratio, spinor_character};
use orbita::{GroupData, Weight, Q};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn w(v: &[Q]) -> Weight {
    Weight(v.to_vec())
}

fn groups() -> Vec<(&'static str, GroupData)> {
    vec![("sl2", bundled::sl2()), ("su21", bundled::su21()), ("sp4", bundled::sp4())]
}

// ---------------------------------------------------------------------------
// Reference computations

/// `s_α(v) = v - 2 (v, α)/(α, α) α`.
fn reflect(g: &GroupData, alpha: &Weight, v: &Weight) -> Weight {
    let c = q(2) * g.inner(v, alpha) / g.norm2(alpha);
    v - &alpha.scale(c)
}

/// The compact Weyl group as reflection words, deduplicated by their action
/// on a `K`-regular vector.
fn compact_weyl_words(g: &GroupData) -> Vec<Vec<Weight>> {
    let simple: Vec<Weight> = g.compact_simple_roots().to_vec();
    let probe = g.rho_c().clone();
    let mut seen: BTreeSet<Weight> = BTreeSet::from([probe.clone()]);
    let mut words: Vec<Vec<Weight>> = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    while let Some(word) = frontier.pop() {
        for a in &simple {
            let mut next = vec![a.clone()];
            next.extend(word.iter().cloned());
            let image = apply_word(g, &next, &probe);
            if seen.insert(image) {
                words.push(next.clone());
                frontier.push(next);
            }
        }
    }
    words
}

fn apply_word(g: &GroupData, word: &[Weight], v: &Weight) -> Weight {
    word.iter().rev().fold(v.clone(), |acc, a| reflect(g, a, &acc))
}

/// Noncompact roots, each made positive on `xi`.
fn noncompact_on(g: &GroupData, xi: &Weight) -> Vec<Weight> {
    g.roots.all().filter(|r| !r.compact && g.inner(&r.coords, xi).is_positive()).map(|r| r.coords).collect()
}

/// Every ℕ-combination of `roots` with pairing against `xi` at most `height`,
/// tallied by the weight it produces.
fn partition_table(g: &GroupData, roots: &[Weight], xi: &Weight, height: Q) -> HashMap<Weight, u64> {
    fn go(g: &GroupData, roots: &[Weight], xi: &Weight, left: Q, acc: Weight, out: &mut HashMap<Weight, u64>) {
        let Some((first, rest)) = roots.split_first() else {
            *out.entry(acc).or_default() += 1;
            return;
        };
        let h = g.inner(first, xi);
        let mut left = left;
        let mut acc = acc;
        while !left.is_negative() {
            go(g, rest, xi, left, acc.clone(), out);
            left -= h;
            acc = &acc + first;
        }
    }
    let mut out = HashMap::new();
    go(g, roots, xi, height, Weight::zero(g.rank()), &mut out);
    out
}

/// `Σ_{w ∈ W_K} ε(w) P(wμ - λ - ρ_n(λ))` from a partition table.
fn reference_blattner(
    g: &GroupData,
    words: &[Vec<Weight>],
    table: &HashMap<Weight, u64>,
    lambda: &Weight,
    mu: &Weight,
) -> i64 {
    let roots = noncompact_on(g, lambda);
    let mut base = lambda.clone();
    for b in &roots {
        base = &base + &b.scale(frac(1, 2));
    }
    words
        .iter()
        .map(|word| {
            let sign = if word.len() % 2 == 0 { 1 } else { -1 };
            sign * table.get(&(&apply_word(g, word, mu) - &base)).copied().unwrap_or(0) as i64
        })
        .sum()
}

/// `‖μ + ρ_c‖²`
fn ck2(g: &GroupData, mu: &Weight) -> Q {
    g.norm2(&(mu + g.rho_c()))
}

// ---------------------------------------------------------------------------
// Criteria

fn c1_root_closure() -> Check {
    let expected_positive = BTreeMap::from([("sl2", 1), ("su21", 3), ("sp4", 4)]);
    let mut checked = 0;
    for (name, g) in groups() {
        let roots: Vec<(Weight, bool)> = g.roots.all().map(|r| (r.coords, r.compact)).collect();
        ensure(roots.len() == 2 * expected_positive[name], || format!("{name}: {} roots", roots.len()))?;
        let noncompact_simple: Vec<usize> = (0..g.rank()).filter(|&i| !g.datum.compact_flags[i]).collect();
        for (r, compact) in &roots {
            // The flag is the parity of the noncompact simple-root content.
            let content: i64 = noncompact_simple.iter().map(|&i| r.0[i].to_integer()).sum();
            ensure(*compact == (content % 2 == 0), || format!("{name}: flag of {r} disagrees with its grading"))?;
        }
        let flags: HashMap<&Weight, bool> = roots.iter().map(|(r, c)| (r, *c)).collect();
        for (a, ca) in &roots {
            for (b, cb) in &roots {
                if let Some(&c) = flags.get(&(a + b)) {
                    ensure(c == (ca == cb), || format!("{name}: {a} + {b} breaks the flag rule"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} root sums"))
}

fn c2_chamber_counts() -> Check {
    let expected = BTreeMap::from([("sl2", 2), ("su21", 3), ("sp4", 4)]);
    let mut found = Vec::new();
    for (name, g) in groups() {
        // Sign vectors of strongly elliptic points on a grid of fundamental
        // coordinates in [-6, 6] with step 1/2.
        let mut signs: BTreeSet<Vec<bool>> = BTreeSet::new();
        let steps: Vec<Q> = (-12..=12).map(|i| frac(i, 2)).collect();
        let mut idx = vec![0usize; g.rank()];
        loop {
            let coeffs: Vec<Q> = idx.iter().map(|&i| steps[i]).collect();
            let x = g.from_fundamental(&coeffs);
            let k_regular = g.compact_simple_roots().iter().all(|a| g.inner(&x, a).is_positive());
            let pairings: Vec<Q> = g.roots.noncompact_positive().map(|b| g.inner(&x, b)).collect();
            if k_regular && pairings.iter().all(|p| !p.is_zero()) {
                signs.insert(pairings.iter().map(|p| p.is_positive()).collect());
            }
            let mut d = 0;
            while d < idx.len() && idx[d] == steps.len() - 1 {
                idx[d] = 0;
                d += 1;
            }
            if d == idx.len() {
                break;
            }
            idx[d] += 1;
        }
        let engine = enumerate_chambers(&g).len();
        ensure(signs.len() == expected[name], || format!("{name}: grid scan finds {}", signs.len()))?;
        ensure(engine == expected[name], || format!("{name}: engine finds {engine}, expected {}", expected[name]))?;
        found.push(format!("{name}={engine}"));
    }
    Ok(found.join(" "))
}

fn c3_partition_oracle() -> Check {
    let bound2 = q(50);
    let mut checked = 0;
    for (name, g) in groups() {
        for c in enumerate_chambers(&g) {
            let xi = &c.representative;
            let roots = noncompact_on(&g, xi);
            // (ν, ξ) ≤ ‖ν‖ ‖ξ‖ on the ball.
            let height = sqrt_upper(&(bound2 * g.norm2(xi)));
            let table = partition_table(&g, &roots, xi, height);
            for nu in g.lattice_points_in_ball(&Weight::zero(g.rank()), &bound2) {
                let expected = table.get(&nu).copied().unwrap_or(0);
                let got = partition_count(&g, xi, &nu);
                ensure(got == expected, || {
                    format!("{name} chamber {}: P({nu}) = {got}, enumeration {expected}", c.id)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} weights with ‖ν‖² ≤ 50"))
}

fn c4_blattner_ladder() -> Check {
    let g = bundled::sl2();
    let words = compact_weyl_words(&g);
    ensure(words.len() == 1, || "the compact Weyl group of SL(2,R) is trivial".into())?;
    let cutoff = q(25);
    let mut checked = 0;
    for k in 1..=3i64 {
        let lambda = w(&[frac(k, 2)]);
        let orbit = orbit_param(&g, &lambda).map_err(|e| e.to_string())?;
        let restricted = restrict_to_k(&g, &orbit, &cutoff).map_err(|e| e.to_string())?;
        let table = partition_table(&g, &noncompact_on(&g, &lambda), &lambda, q(100));
        // ‖n/2 · α‖ = |n| with (α, α) = 4, so c^K ≤ 25 means |n| ≤ 25.
        for n in -25..=25i64 {
            let mu = w(&[frac(n, 2)]);
            let ladder = n > k && (n - k - 1) % 2 == 0;
            let reference = reference_blattner(&g, &words, &table, &lambda, &mu);
            let got = restricted.get(&mu);
            ensure(reference == i64::from(ladder), || format!("k={k}, μ={mu}: enumeration gives {reference}"))?;
            ensure(got == reference, || format!("k={k}, μ={mu}: engine {got}, reference {reference}"))?;
            checked += 1;
        }
        ensure(restricted.coeffs.len() == (25 - k - 1) as usize / 2 + 1, || format!("k={k}: extra K-types"))?;
    }
    Ok(format!("{checked} K-types, c^K ≤ 25"))
}

fn c5_vanishing_window() -> Check {
    let mut pairs = 0;
    for (name, g) in groups() {
        let words = compact_weyl_words(&g);
        for c in enumerate_chambers(&g) {
            for orbit in enumerate_orbits(&g, &c, &q(7)) {
                let cg2 = c_norm2(&g, &orbit.lambda);
                let reach = sqrt_upper(&cg2) + q(3);
                let restricted = restrict_to_k(&g, &orbit, &reach).map_err(|e| e.to_string())?;
                for mu in restricted.coeffs.keys() {
                    ensure(ck2(&g, mu) >= cg2, || format!("{name}: λ={} keeps μ={mu} below c^G", orbit.lambda))?;
                }
                // Every K-dominant parameter strictly inside the window.
                let offset = g.rho_c().scale(q(2));
                let inside: Vec<Weight> = g
                    .lattice_points_in_ball(&offset, &cg2)
                    .into_iter()
                    .map(|x| &x - g.rho_c())
                    .filter(|mu| g.is_k_dominant_regular(mu) && ck2(&g, mu) < cg2)
                    .collect();
                // The table only has to reach the largest pairing ever looked up.
                let roots = noncompact_on(&g, &orbit.lambda);
                let base = roots.iter().fold(orbit.lambda.clone(), |acc, b| &acc + &b.scale(frac(1, 2)));
                let height = inside
                    .iter()
                    .flat_map(|mu| {
                        words.iter().map(|word| g.inner(&(&apply_word(&g, word, mu) - &base), &orbit.lambda))
                    })
                    .fold(q(0), |a, b| a.max(b));
                let table = partition_table(&g, &roots, &orbit.lambda, height);
                for mu in &inside {
                    let engine = blattner_multiplicity(&g, &orbit, mu).map_err(|e| e.to_string())?;
                    let reference = reference_blattner(&g, &words, &table, &orbit.lambda, mu);
                    ensure(engine == 0 && reference == 0, || {
                        format!("{name}: λ={}, μ={mu}: engine {engine}, reference {reference}", orbit.lambda)
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} (λ, μ) pairs below the window all vanish"))
}

/// `∏ (e^{β/2} - e^{-β/2})` over the noncompact roots positive on `o`.
fn reference_spinor(g: &GroupData, o: &Weight) -> BTreeMap<Weight, i64> {
    let mut terms = BTreeMap::from([(Weight::zero(g.rank()), 1i64)]);
    for b in noncompact_on(g, o) {
        let half = b.scale(frac(1, 2));
        let mut next = BTreeMap::new();
        for (x, c) in &terms {
            *next.entry(x + &half).or_insert(0) += c;
            *next.entry(x - &half).or_insert(0) -= c;
        }
        next.retain(|_, c| *c != 0);
        terms = next;
    }
    terms
}

/// `V ⊗ S` computed by reflecting `μ + s` into the `K`-dominant chamber.
fn reference_tensor(
    g: &GroupData,
    words: &[Vec<Weight>],
    v: &BTreeMap<Weight, i64>,
    s: &BTreeMap<Weight, i64>,
) -> BTreeMap<Weight, i64> {
    let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
    for (mu, c) in v {
        for (x, sc) in s {
            let y = mu + x;
            for word in words {
                let z = apply_word(g, word, &y);
                if g.compact_simple_roots().iter().all(|a| g.inner(&z, a).is_positive()) {
                    let sign = if word.len() % 2 == 0 { 1 } else { -1 };
                    *out.entry(z).or_insert(0) += sign * c * sc;
                }
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn c6_telescoping() -> Check {
    let cases: [(&str, GroupData, &[usize]); 3] =
        [("sl2", bundled::sl2(), &[0, 1]), ("su21", bundled::su21(), &[0, 1]), ("sp4", bundled::sp4(), &[0])];
    let mut runs = 0;
    for (name, g, ids) in cases {
        let words = compact_weyl_words(&g);
        let mut rho = Weight::zero(g.rank());
        for r in &g.roots.positive {
            rho = &rho + &r.coords.scale(frac(1, 2));
        }
        let s = reference_spinor(&g, &rho);
        let engine_s = spinor_character(&g, &rho).map_err(|e| e.to_string())?;
        ensure(engine_s.terms == s, || format!("{name}: spinor expansion differs"))?;
        let delta2 = s.keys().map(|x| g.norm2(x)).max().unwrap();
        let delta = sqrt_upper(&delta2);
        let chambers = enumerate_chambers(&g);
        for id in ids {
            let chamber = chambers.iter().find(|c| c.id == *id).ok_or(format!("{name}: no chamber {id}"))?;
            let mut orbits = enumerate_orbits(&g, chamber, &q(8));
            orbits.sort_by_key(|o| c_norm2(&g, &o.lambda));
            for orbit in orbits.iter().take(2) {
                let lambda = &orbit.lambda;
                let mut r = sqrt_upper(&c_norm2(&g, lambda)) + delta + q(2);
                loop {
                    let v = restrict_to_k(&g, orbit, &r).map_err(|e| e.to_string())?;
                    let limit = r - delta;
                    let limit2 = limit * limit;
                    let shells: BTreeSet<Q> = v.coeffs.keys().map(|m| ck2(&g, m)).filter(|n| *n <= limit2).collect();
                    if shells.len() < 10 {
                        r *= q(2);
                        continue;
                    }
                    let t = reference_tensor(&g, &words, &v.coeffs, &s);
                    let flips = noncompact_on(&g, &rho).iter().filter(|b| g.inner(b, &-lambda).is_negative()).count();
                    let sign = if flips % 2 == 0 { 1 } else { -1 };
                    let engine_sign = orientation_ratio(&g, &rho, &-lambda).map_err(|e| e.to_string())?;
                    ensure(sign == engine_sign, || format!("{name}: orientation sign of {lambda}"))?;
                    ensure(ck2(&g, lambda) <= limit2, || format!("{name}: {lambda} outside the certified range"))?;
                    for (nu, c) in t.iter().filter(|(nu, _)| ck2(&g, nu) <= limit2) {
                        let expected = if nu == lambda { sign } else { 0 };
                        ensure(*c == expected, || format!("{name}: λ={lambda}: coefficient {c} at {nu}"))?;
                    }
                    ensure(t.get(lambda) == Some(&sign), || format!("{name}: λ={lambda} is missing"))?;
                    // The engine's own tensor agrees on the certified range.
                    let engine_t = orbita::characters::tensor_spinor(&g, &v, &engine_s);
                    for (nu, c) in engine_t.certified_terms(&g) {
                        ensure(t.get(nu) == Some(&c), || format!("{name}: engine tensor differs at {nu}"))?;
                    }
                    runs += 1;
                    break;
                }
            }
        }
    }
    Ok(format!("{runs} parameters, ≥ 10 certified shells each"))
}

/// Discrete series of the diagonal `SL(2,ℝ)` in `D_k ⊠ D_l` (units of half
/// the root): count `K`-types `(k+1+2a) + (l+1+2b) = n`, then peel ladders.
fn diagonal_reference(k: i64, l: i64, max_j: i64) -> BTreeMap<i64, i64> {
    let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
    for a in 0..=max_j {
        for b in 0..=max_j {
            *counts.entry(k + 1 + 2 * a + l + 1 + 2 * b).or_insert(0) += 1;
        }
    }
    let mut mult = BTreeMap::new();
    let mut remaining = counts;
    for j in 1..=max_j {
        let top = remaining.get(&(j + 1)).copied().unwrap_or(0);
        if top != 0 {
            mult.insert(j, top);
            let mut n = j + 1;
            while n <= 2 * max_j + k + l + 2 {
                *remaining.entry(n).or_insert(0) -= top;
                n += 2;
            }
        }
    }
    mult
}

fn record_parity(log: &mut ParityLog, label: String, res: &BranchingResult) {
    log.push((label, res.parity.checked, res.parity.in_k_out));
}

fn c7_diagonal_pipeline(parity: &mut ParityLog) -> Check {
    let pair = bundled::config("diag-sl2").and_then(|c| c.pair()).map_err(|e| e.to_string())?;
    let cutoff = q(20);
    let mut entries = 0;
    for (k, l) in [(1, 1), (1, 2), (2, 2)] {
        let lp = w(&[frac(k, 2), frac(l, 2)]);
        let res =
            restrict_discrete_series(&pair, &lp, &cutoff, &RestrictOptions::default()).map_err(|e| e.to_string())?;
        record_parity(parity, format!("diag ({k},{l})"), &res);
        ensure(res.mode == Mode::Certified, || format!("({k},{l}): not certified"))?;
        // c^G of the parameter jγ is ‖(j + 1)γ‖ = j + 1.
        let expected: BTreeMap<Weight, i64> = diagonal_reference(k, l, 40)
            .into_iter()
            .filter(|(j, _)| *j < 20)
            .map(|(j, m)| (w(&[frac(j, 2)]), m))
            .collect();
        ensure(expected.values().all(|&m| m == 1), || "the reference ladder is multiplicity free".into())?;
        ensure(res.support() == expected, || {
            format!("({k},{l}): engine {:?}, reference {:?}", res.support(), expected)
        })?;
        for e in &res.entries {
            ensure(e.certified, || format!("({k},{l}): {} uncertified", e.orbit.lambda))?;
        }
        // The holomorphic chamber is the one with positive parameters.
        ensure(res.chamber == ChamberCheck::Unique { chamber: Some(0) }, || format!("({k},{l}): {:?}", res.chamber))?;
        let hol = orbit_param(&pair.g, &w(&[q(1)])).map_err(|e| e.to_string())?;
        ensure(hol.chamber == 0, || "chamber 0 is not the holomorphic one".into())?;
        entries += expected.len();
    }
    Ok(format!("{entries} ladder entries match the K-type count"))
}

fn c8_admissibility() -> Check {
    let verdict = |pair: &Pair, lp: Weight| -> Result<Verdict, String> {
        let orbit = orbit_param(&pair.gprime, &lp).map_err(|e| e.to_string())?;
        let depth = default_depth(&pair.gprime, &orbit);
        let (_, v) = assess(&pair.gprime, &pair.g, &pair.embedding, &orbit, &depth, pair.cartan_saturation)
            .map_err(|e| e.to_string())?;
        Ok(v.status)
    };
    let load = |name: &str| bundled::config(name).and_then(|c| c.pair()).map_err(|e| e.to_string());
    let half = frac(1, 2);
    // min over the quadrant of (a + b)² / (a² + b²) is 1, on the axes.
    for a in 0..=20 {
        for b in 0..=20 {
            if a + b > 0 {
                ensure((a + b) * (a + b) >= a * a + b * b, || "quadrant bound".into())?;
            }
        }
    }
    let diag = verdict(&load("diag-sl2")?, w(&[half, half]))?;
    ensure(diag == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("diag-sl2: {diag:?}"))?;
    let hol = verdict(&load("hol-antihol-sl2")?, w(&[half, -half]))?;
    ensure(hol == Verdict::NotAdmissible { witness: Weight::from_ints(&[1, -1]) }, || format!("hol-antihol: {hol:?}"))?;
    let id = verdict(&load("identity-su21")?, Weight::from_ints(&[1, 1]))?;
    ensure(id == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("identity-su21: {id:?}"))?;
    let id = verdict(&Pair::identity(bundled::sl2()), w(&[q(1)]))?;
    ensure(id == Verdict::Admissible { gap: q(1), gap_exact: true }, || format!("identity-sl2: {id:?}"))?;
    Ok("diag δ=1, hol-antihol witness (1, -1), identity δ=1".into())
}

fn window(res: &BranchingResult, g: &GroupData, r: &Q) -> BTreeMap<Weight, i64> {
    res.entries
        .iter()
        .filter(|e| e.certified && c_norm2(g, &e.orbit.lambda) <= r * r)
        .map(|e| (e.orbit.lambda.clone(), e.multiplicity))
        .collect()
}

fn c9_stability(parity: &mut ParityLog) -> Check {
    let cases = [
        ("diag-sl2", w(&[frac(1, 2), frac(1, 2)]), q(16)),
        ("diag-sl2", w(&[frac(1, 2), q(1)]), q(12)),
        ("identity-su21", Weight::from_ints(&[1, 1]), q(6)),
    ];
    let opts = RestrictOptions::default();
    let mut compared = 0;
    for (name, lp, r) in cases {
        let pair = bundled::config(name).and_then(|c| c.pair()).map_err(|e| e.to_string())?;
        let base = restrict_discrete_series(&pair, &lp, &r, &opts).map_err(|e| e.to_string())?;
        record_parity(parity, format!("{name} r={r}"), &base);
        let reference = window(&base, &pair.g, &r);
        ensure(!reference.is_empty(), || format!("{name}: empty window"))?;
        let wide = restrict_discrete_series(&pair, &lp, &(r * q(2)), &opts).map_err(|e| e.to_string())?;
        record_parity(parity, format!("{name} r={}", r * q(2)), &wide);
        ensure(window(&wide, &pair.g, &r) == reference, || format!("{name}: doubling the cutoff changed entries"))?;
        for (cp, cg) in [(frac(3, 2), q(1)), (q(1), frac(3, 2)), (frac(3, 2), frac(3, 2))] {
            let scaled = pair.with_scaled_forms(cp, cg).map_err(|e| e.to_string())?;
            // Norms grow by √(3/2) < 5/4, so this run certifies the old window.
            let res = restrict_discrete_series(&scaled, &lp, &(r * frac(5, 4)), &opts).map_err(|e| e.to_string())?;
            record_parity(parity, format!("{name} scaled ({cp}, {cg})"), &res);
            let got: BTreeMap<Weight, i64> = res
                .entries
                .iter()
                .filter(|e| e.certified && c_norm2(&pair.g, &e.orbit.lambda) <= r * r)
                .map(|e| (e.orbit.lambda.clone(), e.multiplicity))
                .collect();
            ensure(got == reference, || format!("{name}: scaling ({cp}, {cg}) gave {got:?}, expected {reference:?}"))?;
        }
        compared += reference.len();
    }
    Ok(format!("{compared} certified entries unchanged"))
}

fn c10_parity(parity: &[(String, usize, usize)]) -> Check {
    let mut checked = 0;
    for (label, n, ok) in parity {
        ensure(n == ok, || format!("{label}: {ok} of {n} K~-types in K_out"))?;
        checked += n;
    }
    ensure(checked > 0, || "no pipeline runs were recorded".into())?;
    Ok(format!("{checked}/{checked} K~-types in K_out over {} runs", parity.len()))
}

type ParityLog = Vec<(String, usize, usize)>;
type Criterion<'a> = (u8, &'a str, Option<Duration>, Box<dyn FnOnce(&mut ParityLog) -> Check>);

fn main() -> ExitCode {
    let mut parity: ParityLog = Vec::new();
    let secs = Duration::from_secs;
    let mut results: Vec<Criterion> = vec![
        (1, "root closure rules", Some(secs(1)), Box::new(|_| c1_root_closure())),
        (2, "chamber counts", Some(secs(1)), Box::new(|_| c2_chamber_counts())),
        (3, "partition oracle", Some(secs(10)), Box::new(|_| c3_partition_oracle())),
        (4, "Blattner ladder", Some(secs(5)), Box::new(|_| c4_blattner_ladder())),
        (5, "vanishing window", None, Box::new(|_| c5_vanishing_window())),
        (6, "telescoping identity", Some(secs(60)), Box::new(|_| c6_telescoping())),
        (7, "diagonal pipeline", Some(secs(60)), Box::new(c7_diagonal_pipeline)),
        (8, "admissibility verdicts", Some(secs(1)), Box::new(|_| c8_admissibility())),
        (9, "stability and scaling", None, Box::new(c9_stability)),
        (10, "coset parity", None, Box::new(|p| c10_parity(p))),
    ];
    let mut failed = 0;
    for (id, name, limit, f) in results.drain(..) {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| f(&mut parity)))
            .unwrap_or_else(|p| Err(format!("panicked: {}", p.downcast_ref::<String>().cloned().unwrap_or_default())));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => {
                Err(format!("took {:.2}s, budget {}s", elapsed.as_secs_f64(), l.as_secs()))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} {name:<24} PASS ({detail}; {:.2}s)", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} {name:<24} FAIL ({why})");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria PASS");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria FAIL");
        ExitCode::FAILURE
    }
}
