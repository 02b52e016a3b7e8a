//! Root data with compactness flags, the invariant form, the weight lattice
//! and the Weyl groups of `G` and `K`.
//!
//! Everything is stored in the simple-root basis of `t*`. The Cartan matrix
//! follows the convention `a_ij = 2 (α_i, α_j) / (α_i, α_i)`, so the simple
//! reflection is `s_i(v) = v - (Σ_j v_j a_ij) α_i`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{identity, inverse, is_positive_definite, mat_mul, q, scale_matrix, transpose, vec_mat, Matrix, Q};
use crate::weight::Weight;

/// Upper bound on the number of roots accepted from a Cartan matrix.
const MAX_ROOTS: usize = 4096;

/// Validated input data for a real form with a compact Cartan subgroup.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDatum {
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub compact_flags: Vec<bool>,
    pub gram: Matrix,
    pub lattice_basis: Matrix,
}

impl RootDatum {
    /// Validates the data. Missing `gram` defaults to the symmetrized Cartan
    /// form with `(α, α) = 2` on the short roots of each simple factor;
    /// missing `lattice_basis` defaults to the full weight lattice.
    pub fn new(
        cartan: Vec<Vec<i64>>,
        compact_flags: Vec<bool>,
        gram: Option<Matrix>,
        lattice_basis: Option<Matrix>,
    ) -> Result<Self> {
        let rank = cartan.len();
        validate_cartan(&cartan)?;
        if compact_flags.len() != rank {
            return Err(Error::InvalidDatum(format!("{} compactness flags for rank {rank}", compact_flags.len())));
        }
        let gram = match gram {
            Some(g) => g,
            None => symmetrized_gram(&cartan)?,
        };
        check_gram(&cartan, &gram)?;
        let lattice_basis = match lattice_basis {
            Some(b) => b,
            None => fundamental_weights(&cartan),
        };
        if lattice_basis.len() != rank || lattice_basis.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidDatum("lattice basis must be rank x rank".into()));
        }
        let inv = inverse(&lattice_basis).ok_or_else(|| Error::InvalidDatum("lattice basis is singular".into()))?;
        for i in 0..rank {
            let mut e = vec![Q::zero(); rank];
            e[i] = Q::one();
            if !vec_mat(&e, &inv).iter().all(|c| c.is_integer()) {
                return Err(Error::InvalidDatum(format!("simple root {i} is not in the lattice")));
            }
        }
        Ok(RootDatum { rank, cartan, compact_flags, gram, lattice_basis })
    }

    /// Same datum with the invariant form multiplied by `c > 0`.
    pub fn with_scaled_gram(&self, c: Q) -> Self {
        assert!(c.is_positive());
        RootDatum { gram: scale_matrix(&self.gram, c), ..self.clone() }
    }
}

fn validate_cartan(a: &[Vec<i64>]) -> Result<()> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidCartan("empty matrix".into()));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidCartan(format!("row {i} has length {}", row.len())));
        }
        if row[i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {i} is {}", row[i])));
        }
        for j in 0..n {
            if i != j && row[j] > 0 {
                return Err(Error::InvalidCartan(format!("positive off-diagonal entry ({i},{j})")));
            }
            if (row[j] == 0) != (a[j][i] == 0) {
                return Err(Error::InvalidCartan(format!("entries ({i},{j}) and ({j},{i}) disagree on zero")));
            }
        }
    }
    Ok(())
}

/// Gram matrix `G_ij = d_i a_ij` with `d` normalized to 1 on the shortest
/// simple root of every connected component.
pub fn symmetrized_gram(a: &[Vec<i64>]) -> Result<Matrix> {
    let n = a.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Q::one());
        let mut component = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                let dj = d[i].unwrap() * Q::new(a[i][j], a[j][i]);
                match d[j] {
                    None => {
                        d[j] = Some(dj);
                        component.push(j);
                        queue.push_back(j);
                    }
                    Some(existing) if existing != dj => {
                        return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                    }
                    _ => {}
                }
            }
        }
        let min = component.iter().map(|&i| d[i].unwrap()).min().unwrap();
        for &i in &component {
            d[i] = Some(d[i].unwrap() / min);
        }
    }
    Ok((0..n).map(|i| (0..n).map(|j| d[i].unwrap() * q(a[i][j])).collect()).collect())
}

fn check_gram(a: &[Vec<i64>], g: &Matrix) -> Result<()> {
    let n = a.len();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidDatum("gram must be rank x rank".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if g[i][j] != g[j][i] {
                return Err(Error::InvalidDatum("gram is not symmetric".into()));
            }
            if q(2) * g[i][j] != q(a[i][j]) * g[i][i] {
                return Err(Error::InvalidCartan(format!(
                    "entry ({i},{j}) is not 2(α_i,α_j)/(α_i,α_i) under the supplied form"
                )));
            }
        }
    }
    if !is_positive_definite(g) {
        return Err(Error::InvalidDatum("gram is not positive definite".into()));
    }
    Ok(())
}

/// Fundamental weights as rows, in simple-root coordinates.
pub fn fundamental_weights(a: &[Vec<i64>]) -> Matrix {
    let m: Matrix = a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    // α_j = Σ_k a_kj ω_k, so the rows of (Aᵀ)⁻¹ are the ω_i.
    inverse(&transpose(&m)).expect("Cartan matrix of finite type is invertible")
}

/// A root together with its compactness flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Weight,
    pub compact: bool,
}

/// All roots of a datum: positive roots (with respect to the simple roots of
/// `G`) sorted by height, each with its flag. Negatives carry the same flags.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub positive: Vec<Root>,
}

impl RootSet {
    pub fn all(&self) -> impl Iterator<Item = Root> + '_ {
        self.positive
            .iter()
            .cloned()
            .chain(self.positive.iter().map(|r| Root { coords: -&r.coords, compact: r.compact }))
    }

    pub fn len(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty()
    }

    /// `R_c^+`.
    pub fn compact_positive(&self) -> impl Iterator<Item = &Weight> + '_ {
        self.positive.iter().filter(|r| r.compact).map(|r| &r.coords)
    }

    /// Noncompact roots positive for the simple system of `G`; the reference
    /// ordering for chamber sign vectors.
    pub fn noncompact_positive(&self) -> impl Iterator<Item = &Weight> + '_ {
        self.positive.iter().filter(|r| !r.compact).map(|r| &r.coords)
    }

    pub fn noncompact_count(&self) -> usize {
        2 * self.positive.iter().filter(|r| !r.compact).count()
    }

    /// Exhaustive check of `[k,k] ⊂ k`, `[k,p] ⊂ p`, `[p,p] ⊂ k` on root sums.
    pub fn check_closure_rules(&self) -> Result<()> {
        let all: Vec<Root> = self.all().collect();
        let flag: HashMap<&Weight, bool> = all.iter().map(|r| (&r.coords, r.compact)).collect();
        for a in &all {
            for b in &all {
                let sum = &a.coords + &b.coords;
                if let Some(&c) = flag.get(&sum) {
                    let expected = a.compact == b.compact;
                    if c != expected {
                        return Err(Error::InconsistentFlags(format!(
                            "{} + {} = {} has the wrong flag",
                            a.coords, b.coords, sum
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Generates all roots, propagating compactness from the simple roots along
/// root strings and then checking the closure rules.
pub fn generate_roots(datum: &RootDatum) -> Result<RootSet> {
    validate_cartan(&datum.cartan)?;
    let n = datum.rank;
    let simple: Vec<Weight> = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            Weight::from_ints(&v)
        })
        .collect();
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut queue: VecDeque<Weight> = VecDeque::new();
    for s in &simple {
        for r in [s.clone(), -s] {
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    while let Some(root) = queue.pop_front() {
        for i in 0..n {
            let pairing: Q = (0..n).fold(Q::zero(), |acc, j| acc + root.0[j] * q(datum.cartan[i][j]));
            let mut image = root.clone();
            image.0[i] -= pairing;
            if seen.insert(image.clone()) {
                if seen.len() > MAX_ROOTS {
                    return Err(Error::InvalidCartan("root system is not finite".into()));
                }
                queue.push_back(image);
            }
        }
    }
    let mut positive: Vec<Weight> = seen.into_iter().filter(|r| r.0.iter().all(|c| !c.is_negative())).collect();
    let height = |w: &Weight| w.0.iter().fold(Q::zero(), |a, b| a + b);
    positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));

    let mut flags: HashMap<Weight, bool> = HashMap::new();
    for (i, s) in simple.iter().enumerate() {
        flags.insert(s.clone(), datum.compact_flags[i]);
    }
    for root in &positive {
        if flags.contains_key(root) {
            continue;
        }
        let (lower, simple_flag) = simple
            .iter()
            .enumerate()
            .find_map(|(i, s)| {
                let rest = root - s;
                flags.get(&rest).map(|&f| (f, datum.compact_flags[i]))
            })
            .ok_or_else(|| Error::InconsistentFlags(format!("{root} is not reachable along a root string")))?;
        flags.insert(root.clone(), lower == simple_flag);
    }
    let set = RootSet {
        positive: positive
            .into_iter()
            .map(|coords| {
                let compact = flags[&coords];
                Root { coords, compact }
            })
            .collect(),
    };
    set.check_closure_rules()?;
    Ok(set)
}

/// An element of a Weyl group acting on simple-root coordinates, with its sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: Matrix,
    pub sign: i64,
}

impl WeylElement {
    pub fn apply(&self, v: &Weight) -> Weight {
        Weight(crate::exact::mat_vec(&self.matrix, &v.0))
    }
}

/// Result of [`GroupData::half_sums`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSums {
    pub rho: Weight,
    pub rho_c: Weight,
    pub rho_n: Weight,
}

/// A root datum with its generated roots and the derived data every other
/// module reads: `ρ_c`, the compact simple roots, `W_K` and the inverse
/// lattice basis.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub datum: RootDatum,
    pub roots: RootSet,
    lattice_inv: Matrix,
    compact_simple: Vec<Weight>,
    rho_c: Weight,
    weyl_k: Vec<WeylElement>,
}

impl GroupData {
    pub fn new(datum: RootDatum) -> Result<Self> {
        let roots = generate_roots(&datum)?;
        let lattice_inv = inverse(&datum.lattice_basis).expect("validated lattice basis");
        let compact_pos: Vec<Weight> = roots.compact_positive().cloned().collect();
        let pos_set: HashSet<&Weight> = compact_pos.iter().collect();
        let compact_simple: Vec<Weight> = compact_pos
            .iter()
            .filter(|r| {
                !compact_pos.iter().any(|a| {
                    let rest = *r - a;
                    pos_set.contains(&rest)
                })
            })
            .cloned()
            .collect();
        let mut rho_c = Weight::zero(datum.rank);
        for r in &compact_pos {
            rho_c += r;
        }
        let rho_c = rho_c.scale(Q::new(1, 2));
        let mut g = GroupData { datum, roots, lattice_inv, compact_simple, rho_c, weyl_k: Vec::new() };
        g.weyl_k = g.weyl_group(true);
        Ok(g)
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// `(μ, ν)` under the configured invariant form.
    pub fn inner(&self, a: &Weight, b: &Weight) -> Q {
        let g = &self.datum.gram;
        let mut acc = Q::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                acc += ai * g[i][j] * bj;
            }
        }
        acc
    }

    pub fn norm2(&self, a: &Weight) -> Q {
        self.inner(a, a)
    }

    pub fn rho_c(&self) -> &Weight {
        &self.rho_c
    }

    pub fn compact_simple_roots(&self) -> &[Weight] {
        &self.compact_simple
    }

    pub fn is_compact(&self) -> bool {
        self.roots.noncompact_count() == 0
    }

    /// `(ξ, α) ≠ 0` for every root.
    pub fn is_regular(&self, xi: &Weight) -> bool {
        self.roots.positive.iter().all(|r| !self.inner(xi, &r.coords).is_zero())
    }

    /// `(ξ, β) ≠ 0` for every noncompact root.
    pub fn avoids_noncompact_walls(&self, xi: &Weight) -> bool {
        self.roots.noncompact_positive().all(|b| !self.inner(xi, b).is_zero())
    }

    /// `(ξ, α) > 0` for every `α ∈ R_c^+`.
    pub fn is_k_dominant_regular(&self, xi: &Weight) -> bool {
        self.compact_simple.iter().all(|a| self.inner(xi, a).is_positive())
    }

    pub fn in_lattice(&self, x: &Weight) -> bool {
        vec_mat(&x.0, &self.lattice_inv).iter().all(|c| c.is_integer())
    }

    /// Coefficients of `x` in the lattice basis.
    pub fn lattice_coords(&self, x: &Weight) -> Vec<Q> {
        vec_mat(&x.0, &self.lattice_inv)
    }

    /// `½ Σ_{α ∈ R, (α,ξ) > 0} α`, without a regularity check.
    pub fn rho_of(&self, xi: &Weight) -> Weight {
        self.half_sum_where(xi, |_| true)
    }

    /// `½ Σ_{β ∈ R_n, (β,ξ) > 0} β`, without a regularity check.
    pub fn rho_n_of(&self, xi: &Weight) -> Weight {
        self.half_sum_where(xi, |r| !r.compact)
    }

    fn half_sum_where(&self, xi: &Weight, keep: impl Fn(&Root) -> bool) -> Weight {
        let mut acc = Weight::zero(self.rank());
        for r in self.roots.all().filter(|r| keep(r)) {
            if self.inner(&r.coords, xi).is_positive() {
                acc += &r.coords;
            }
        }
        acc.scale(Q::new(1, 2))
    }

    /// `ρ(ξ)`, `ρ_c` and `ρ_n(ξ)` for a regular `ξ`.
    pub fn half_sums(&self, xi: &Weight) -> Result<HalfSums> {
        if !self.is_regular(xi) {
            return Err(Error::NotRegular(xi.to_string()));
        }
        Ok(HalfSums { rho: self.rho_of(xi), rho_c: self.rho_c.clone(), rho_n: self.rho_n_of(xi) })
    }

    /// Reflection in `α` as a matrix on simple-root coordinates.
    pub fn reflection(&self, alpha: &Weight) -> Matrix {
        let n = self.rank();
        let g_alpha: Vec<Q> =
            (0..n).map(|j| (0..n).fold(Q::zero(), |acc, k| acc + self.datum.gram[j][k] * alpha.0[k])).collect();
        let len2 = self.norm2(alpha);
        let mut m = identity(n);
        for i in 0..n {
            for j in 0..n {
                m[i][j] -= alpha.0[i] * q(2) * g_alpha[j] / len2;
            }
        }
        m
    }

    /// `W_K` (generated by compact reflections) or the full `W`.
    pub fn weyl_group(&self, compact_only: bool) -> Vec<WeylElement> {
        let gens: Vec<Matrix> = if compact_only {
            self.compact_simple.iter().map(|a| self.reflection(a)).collect()
        } else {
            (0..self.rank())
                .map(|i| {
                    let mut v = vec![0i64; self.rank()];
                    v[i] = 1;
                    self.reflection(&Weight::from_ints(&v))
                })
                .collect()
        };
        let id = WeylElement { matrix: identity(self.rank()), sign: 1 };
        let mut seen: HashSet<Matrix> = HashSet::from([id.matrix.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for s in &gens {
                let m = mat_mul(s, &w.matrix);
                if seen.insert(m.clone()) {
                    let e = WeylElement { matrix: m, sign: -w.sign };
                    out.push(e.clone());
                    queue.push_back(e);
                }
            }
        }
        out
    }

    pub fn weyl_k(&self) -> &[WeylElement] {
        &self.weyl_k
    }

    /// Moves `v` into the closed dominant chamber of `K` by compact simple
    /// reflections. Returns the image and the sign of the element used.
    pub fn k_dominant(&self, v: &Weight) -> (Weight, i64) {
        let mut v = v.clone();
        let mut sign = 1;
        'outer: loop {
            for a in &self.compact_simple {
                let p = self.inner(&v, a);
                if p.is_negative() {
                    let c = q(2) * p / self.norm2(a);
                    for (x, ai) in v.0.iter_mut().zip(&a.0) {
                        *x -= c * ai;
                    }
                    sign = -sign;
                    continue 'outer;
                }
            }
            return (v, sign);
        }
    }

    /// All points of `offset + Λ` with `‖x‖² ≤ radius2`, in lexicographic order.
    pub fn lattice_points_in_ball(&self, offset: &Weight, radius2: &Q) -> Vec<Weight> {
        if radius2.is_negative() {
            return Vec::new();
        }
        let n = self.rank();
        let gram_inv = inverse(&self.datum.gram).expect("positive definite");
        let off = self.lattice_coords(offset);
        // The i-th lattice coordinate of x is the pairing of x with a fixed
        // vector h_i; bound it by Cauchy-Schwarz.
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                let col: Vec<Q> = self.lattice_inv.iter().map(|row| row[i]).collect();
                let h2 =
                    crate::exact::mat_vec(&gram_inv, &col).iter().zip(&col).fold(Q::zero(), |acc, (a, b)| acc + a * b);
                let reach = crate::exact::sqrt_upper(&(h2 * radius2));
                ((-reach - off[i]).ceil().to_integer(), (reach - off[i]).floor().to_integer())
            })
            .collect();
        let mut out = Vec::new();
        let mut c = vec![0i64; n];
        fn rec(
            g: &GroupData,
            i: usize,
            c: &mut Vec<i64>,
            ranges: &[(i64, i64)],
            offset: &Weight,
            radius2: &Q,
            out: &mut Vec<Weight>,
        ) {
            if i == c.len() {
                let mut x = offset.clone();
                for (k, &ck) in c.iter().enumerate() {
                    if ck != 0 {
                        for (xj, bj) in x.0.iter_mut().zip(&g.datum.lattice_basis[k]) {
                            *xj += q(ck) * bj;
                        }
                    }
                }
                if g.norm2(&x) <= *radius2 {
                    out.push(x);
                }
                return;
            }
            for v in ranges[i].0..=ranges[i].1 {
                c[i] = v;
                rec(g, i + 1, c, ranges, offset, radius2, out);
            }
        }
        rec(self, 0, &mut c, &ranges, offset, radius2, &mut out);
        out.sort();
        out
    }

    /// Fundamental weights in simple-root coordinates.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        fundamental_weights(&self.datum.cartan).into_iter().map(Weight).collect()
    }

    /// Converts fundamental-weight coordinates to simple-root coordinates.
    pub fn from_fundamental(&self, coeffs: &[Q]) -> Weight {
        let f = fundamental_weights(&self.datum.cartan);
        Weight(vec_mat(coeffs, &f))
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn to_fundamental(&self, w: &Weight) -> Vec<Q> {
        (0..self.rank())
            .map(|i| (0..self.rank()).fold(Q::zero(), |acc, j| acc + w.0[j] * q(self.datum.cartan[i][j])))
            .collect()
    }
}
