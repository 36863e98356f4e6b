//! Exact rational scalars and the small vector helpers used everywhere else.

use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Dense rational vector.
pub type RVec = Vec<Rat>;

/// Dense rational matrix, row-major.
pub type RMat = Vec<RVec>;

#[inline]
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[inline]
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rvec(xs: &[i64]) -> RVec {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn rmat(rows: &[&[i64]]) -> RMat {
    rows.iter().map(|r| rvec(r)).collect()
}

pub fn zeros(n: usize) -> RVec {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> RVec {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn identity(n: usize) -> RMat {
    (0..n).map(|i| unit(n, i)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn add(a: &[Rat], b: &[Rat]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(s: &Rat, a: &[Rat]) -> RVec {
    a.iter().map(|x| s * x).collect()
}

pub fn neg(a: &[Rat]) -> RVec {
    a.iter().map(|x| -x).collect()
}

/// `a + s * b`
pub fn axpy(a: &[Rat], s: &Rat, b: &[Rat]) -> RVec {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn norm_sq(a: &[Rat]) -> Rat {
    dot(a, a)
}

pub fn mat_vec(m: &[RVec], x: &[Rat]) -> RVec {
    m.iter().map(|row| dot(row, x)).collect()
}

/// `mᵀ x`
pub fn mat_t_vec(m: &[RVec], x: &[Rat], cols: usize) -> RVec {
    let mut out = zeros(cols);
    for (row, xi) in m.iter().zip(x) {
        if xi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !r.is_zero() {
                *o += r * xi;
            }
        }
    }
    out
}

pub fn mat_mul(a: &[RVec], b: &[RVec], b_cols: usize) -> RMat {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| {
                    let mut acc = Rat::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[RVec], cols: usize) -> RMat {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Scales a nonzero vector to the unique primitive integer vector on the same ray.
pub fn primitive(v: &[Rat]) -> RVec {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

/// Like [`primitive`] but also fixes the sign so the first nonzero entry is positive.
pub fn primitive_line(v: &[Rat]) -> RVec {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&p),
        _ => p,
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    match x.to_f64() {
        Some(v) => v,
        None => {
            // Very large numerators/denominators: fall back to a log-scale estimate.
            let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
            let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

pub fn vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

/// Rounds a float to the nearest multiple of `2^-bits`, exactly representable as a small rational.
pub fn dyadic(x: f64, bits: u32) -> Rat {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round();
    let num = BigInt::from(n as i128);
    Rat::new(num, BigInt::one() << bits as usize)
}

pub fn dyadic_vec(v: &[f64], bits: u32) -> RVec {
    v.iter().map(|&x| dyadic(x, bits)).collect()
}

/// Parses `"p"`, `"-p"`, or `"p/q"` with `q > 0`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.sign() != Sign::Plus {
                return Err(Error::Parse(format!("rational {s:?} needs a positive denominator")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact floor of the square root of a nonnegative rational, as a rational bracket `lo <= sqrt(x) <= hi`
/// with `hi - lo <= 2^-bits`.
pub fn sqrt_bracket(x: &Rat, bits: u32) -> (Rat, Rat) {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    let mut lo = Rat::zero();
    let mut hi = if x > &Rat::one() { x.clone() } else { Rat::one() };
    let width = Rat::new(BigInt::one(), BigInt::one() << bits as usize);
    let two = rat(2);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        if &mid * &mid <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4));
        assert_eq!(format_rat(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rat(&rat(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1/-2").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(primitive(&v), rvec(&[2, -3, 0]));
        assert_eq!(primitive_line(&rvec(&[0, -2, 4])), rvec(&[0, 1, -2]));
    }

    #[test]
    fn sqrt_bracket_is_tight() {
        let (lo, hi) = sqrt_bracket(&rat(2), 30);
        assert!(&lo * &lo <= rat(2) && &hi * &hi >= rat(2));
        assert!(to_f64(&(hi - lo)) < 1e-9);
    }
}
