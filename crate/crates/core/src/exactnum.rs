//! Exact rationals and the series constants built from Bernoulli numbers.
//!
//! `Rat` is `num_rational::BigRational`, which reduces to lowest terms with a
//! positive denominator on every construction. Its `Display` already renders
//! `p/q`, or `p` when `q = 1`, which is the wire format used everywhere.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q` or `p` (surrounding whitespace allowed).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// `serde(with = ...)` adapter storing a `Rat` as its `p/q` string.
pub mod serde_rat {
    use super::{parse_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// Parses a JSON array of equal-length rows of `"p/q"` strings (bare
/// integers are accepted too).
pub fn parse_rat_matrix_json(src: &str) -> Result<Vec<Vec<Rat>>> {
    let value: serde_json::Value = serde_json::from_str(src)?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Json("expected an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Json(format!("row {} is not an array", i + 1)))?;
        let parsed = row
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => parse_rat(s),
                serde_json::Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(BigInt::from(n.as_i64().unwrap()))),
                other => Err(Error::BadRational(other.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first().map(Vec::len) {
            if parsed.len() != first {
                return Err(Error::Json(format!("row {} has {} entries, expected {first}", i + 1, parsed.len())));
            }
        }
        out.push(parsed);
    }
    Ok(out)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

static BERNOULLI: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
///
/// Values are memoized; the recurrence `sum_{k=0}^{n} C(n+1, k) B_k = 0`
/// extends the table on demand.
pub fn bernoulli(n: usize) -> Rat {
    let table = BERNOULLI.get_or_init(|| Mutex::new(vec![Rat::one()]));
    let mut table = table.lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= n {
        let j = table.len() as u64;
        let mut sum = Rat::zero();
        for (k, b) in table.iter().enumerate() {
            sum += Rat::from_integer(binomial(j + 1, k as u64)) * b;
        }
        let next = -sum / Rat::from_integer(BigInt::from(j + 1));
        table.push(next);
    }
    table[n].clone()
}

/// Coefficient of `x^{2n}` in `x / tanh(x)`, i.e. `2^{2n} B_{2n} / (2n)!`.
pub fn coth_series_coeff(n: usize) -> Rat {
    let two_n = 2 * n;
    let pow = BigInt::one() << two_n;
    bernoulli(two_n) * Rat::from_integer(pow) / Rat::from_integer(factorial(two_n as u64))
}

/// Decimal rendering of `x` with exactly `digits` fractional digits,
/// rounded half-to-even.
pub fn to_decimal(x: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = x * Rat::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = &scaled - Rat::from_integer(floor.clone());
    let half = rat(1, 2);
    let rounded = if frac > half || (frac == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    };
    let neg = rounded.is_negative();
    let mag = rounded.abs().to_string();
    let body = if digits == 0 {
        mag
    } else {
        let padded = format!("{:0>width$}", mag, width = digits + 1);
        let (ip, fp) = padded.split_at(padded.len() - digits);
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
