//! Exact rational helpers: parsing, formatting, small dense matrices and
//! certified square-root bounds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The scalar type used throughout the engine.
pub type Q = Ratio<i64>;

/// Dense row-major rational matrix.
pub type Matrix = Vec<Vec<Q>>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(q(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

pub fn from_big(x: &BigRational) -> Q {
    let n = x.numer().to_i64().expect("numerator exceeds i64");
    let d = x.denom().to_i64().expect("denominator exceeds i64");
    Q::new(n, d)
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Q::zero(), |acc, k| acc + row[k] * b[k][j])).collect())
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter().map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y)).collect()
}

/// `vᵀ A` for a row vector `v`.
pub fn vec_mat(v: &[Q], a: &Matrix) -> Vec<Q> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| v.iter().zip(a).fold(Q::zero(), |acc, (x, row)| acc + x * row[j])).collect()
}

pub fn transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn scale_matrix(a: &Matrix, c: Q) -> Matrix {
    a.iter().map(|row| row.iter().map(|x| x * c).collect()).collect()
}

/// Gauss-Jordan inverse. Returns `None` for singular input.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(to_big).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n..].iter().map(from_big).collect()).collect())
}

pub fn determinant(a: &Matrix) -> Q {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(to_big).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    from_big(&det)
}

/// Sylvester's criterion on leading principal minors.
pub fn is_positive_definite(a: &Matrix) -> bool {
    (1..=a.len()).all(|k| {
        let minor: Matrix = a[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor) > Q::zero()
    })
}

const SQRT_SCALE: i64 = 1 << 16;

fn big_ratio_sqrt(x: &Q, round_up: bool) -> Q {
    assert!(!x.is_negative(), "square root of a negative rational");
    let (n, d) = (BigInt::from(*x.numer()), BigInt::from(*x.denom()));
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == n && &rd * &rd == d {
        return Q::new(rn.to_i64().unwrap(), rd.to_i64().unwrap());
    }
    // Round onto the grid 1/S so that denominators stay small.
    let s = BigInt::from(SQRT_SCALE);
    let scaled = &n * &s * &s;
    let (quot, rem) = scaled.div_rem(&d);
    let radicand = if round_up && !rem.is_zero() { quot + 1 } else { quot };
    let mut root = radicand.sqrt();
    if round_up && &root * &root != radicand {
        root += 1;
    }
    Q::new(root.to_i64().unwrap(), SQRT_SCALE)
}

/// A rational `u` with `u ≥ √x`, exact when `x` is a rational square.
pub fn sqrt_upper(x: &Q) -> Q {
    big_ratio_sqrt(x, true)
}

/// A rational `l` with `0 ≤ l ≤ √x`, exact when `x` is a rational square.
pub fn sqrt_lower(x: &Q) -> Q {
    big_ratio_sqrt(x, false)
}

/// Smallest multiple of `1/den` that is `≥ x`. Keeps radii on a coarse grid
/// so that squaring them stays inside `i64`.
pub fn round_up(x: &Q, den: i64) -> Q {
    Q::new((x * Q::from(den)).ceil().to_integer(), den)
}

/// Largest multiple of `1/den` that is `≤ x`.
pub fn round_down(x: &Q, den: i64) -> Q {
    Q::new((x * Q::from(den)).floor().to_integer(), den)
}

/// Scales a nonzero rational vector to the primitive integer vector on its ray.
pub fn primitive_direction(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Matrix> {
    rows.iter().map(|r| r.iter().map(|s| parse_q(s)).collect()).collect()
}

pub fn fmt_vec(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

/// Serde adapter writing a rational as a `"p/q"` string.
pub mod q_str {
    use super::{fmt_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Q>`.
pub mod opt_q_str {
    use super::{fmt_q, Q};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt_q(v)),
            None => s.serialize_none(),
        }
    }
}

/// Serde adapter writing a matrix as rows of `"p/q"` strings.
pub mod matrix_str {
    use super::{fmt_q, Matrix};
    use serde::{Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        rows.serialize(s)
    }
}
