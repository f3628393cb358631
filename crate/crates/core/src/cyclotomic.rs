//! Exact arithmetic in `Z[ζ_n]`.
//!
//! Values are stored in the power basis `1, ζ, …, ζ^(φ(n)-1)` modulo the
//! cyclotomic polynomial `Φ_n`. That basis is a `Z`-basis, so a value is a
//! rational integer exactly when every coefficient past the constant is zero.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};

/// `Φ_n(x)`, constant term first, by exact division of `x^n - 1` by every
/// `Φ_d` with `d | n`, `d < n`.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic_poly needs n >= 1");
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    cyclotomic_poly_memo(n, &mut memo)
}

fn cyclotomic_poly_memo(n: u64, memo: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            let phi_d = cyclotomic_poly_memo(d, memo);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Precomputed reduction data for one `n`: `Φ_n` and `x^e mod Φ_n` for
/// every `0 ≤ e < n`.
#[derive(Debug)]
pub struct CyclotomicBasis {
    n: u64,
    poly: Vec<BigInt>,
    monomials: Vec<Vec<BigInt>>,
}

impl CyclotomicBasis {
    /// Shared, lazily built basis for `n`.
    pub fn get(n: u64) -> Arc<CyclotomicBasis> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(b) = cache.lock().unwrap().get(&n) {
            return b.clone();
        }
        let built = Arc::new(CyclotomicBasis::new(n));
        cache.lock().unwrap().entry(n).or_insert(built).clone()
    }

    fn new(n: u64) -> CyclotomicBasis {
        let poly = cyclotomic_poly(n);
        let deg = poly.len() - 1;
        let mut monomials = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); deg];
        cur[0] = BigInt::one();
        for _ in 0..n {
            monomials.push(cur.clone());
            // multiply by x and fold x^deg = -(poly[0] + … + poly[deg-1] x^(deg-1))
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (c, p) in cur.iter_mut().zip(&poly) {
                    *c -= &top * p;
                }
            }
        }
        CyclotomicBasis { n, poly, monomials }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `φ(n)`, the length of every coefficient vector.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// `Σ_e counts[e] ζ^e` for a table of exponent multiplicities of length `n`.
    pub fn from_counts(&self, counts: &[i64]) -> CyclotomicInt {
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                let c = BigInt::from(c);
                for (acc, m) in coeffs.iter_mut().zip(&self.monomials[e]) {
                    if !m.is_zero() {
                        *acc += &c * m;
                    }
                }
            }
        }
        CyclotomicInt { n: self.n, coeffs }
    }

    fn weighted<'a>(&self, terms: impl IntoIterator<Item = (u64, &'a BigInt)>) -> CyclotomicInt {
        let mut coeffs = vec![BigInt::zero(); self.degree()];
        for (e, w) in terms {
            if w.is_zero() {
                continue;
            }
            for (acc, m) in coeffs.iter_mut().zip(&self.monomials[(e % self.n) as usize]) {
                if !m.is_zero() {
                    *acc += w * m;
                }
            }
        }
        CyclotomicInt { n: self.n, coeffs }
    }

    /// Whether `Σ counts[e] ζ^e` is a rational integer, without allocating the value.
    pub fn counts_are_integral(&self, counts: &[i64]) -> bool {
        // higher coefficients only; the constant term is irrelevant
        (1..self.degree()).all(|j| {
            let mut acc = BigInt::zero();
            for (e, &c) in counts.iter().enumerate() {
                let m = &self.monomials[e][j];
                if c != 0 && !m.is_zero() {
                    acc += m * c;
                }
            }
            acc.is_zero()
        })
    }

    fn reduce_poly(&self, mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
        let deg = self.degree();
        for k in (deg..coeffs.len()).rev() {
            let c = std::mem::take(&mut coeffs[k]);
            if c.is_zero() {
                continue;
            }
            for (i, p) in self.poly[..deg].iter().enumerate() {
                coeffs[k - deg + i] -= &c * p;
            }
        }
        coeffs.resize(deg, BigInt::zero());
        coeffs
    }
}

/// An element of `Z[ζ_n]` in the power basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicInt {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    pub fn from_coeffs(n: u64, coeffs: Vec<BigInt>) -> Result<CyclotomicInt> {
        let deg = CyclotomicBasis::get(n).degree();
        if coeffs.len() != deg {
            return Err(Error::InvalidSpec(format!(
                "expected {deg} coefficients for n = {n}, got {}",
                coeffs.len()
            )));
        }
        Ok(CyclotomicInt { n, coeffs })
    }

    pub fn zero(n: u64) -> CyclotomicInt {
        CyclotomicInt::from_integer(n, BigInt::zero())
    }

    pub fn from_integer(n: u64, k: BigInt) -> CyclotomicInt {
        let mut coeffs = vec![BigInt::zero(); CyclotomicBasis::get(n).degree()];
        coeffs[0] = k;
        CyclotomicInt { n, coeffs }
    }

    /// `ζ_n^e`.
    pub fn root_of_unity(n: u64, e: u64) -> CyclotomicInt {
        reduce_sum(n, &[e % n])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `σ_a`, the automorphism `ζ ↦ ζ^a`.
    pub fn galois_act(&self, a: i64) -> Result<CyclotomicInt> {
        let a_red = crate::arith::reduce_signed(a, self.n);
        if gcd(a_red, self.n) != 1 && self.n != 1 {
            return Err(Error::NotAUnit(a, self.n));
        }
        let basis = CyclotomicBasis::get(self.n);
        Ok(basis.weighted(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| ((a_red * j as u64) % self.n, c)),
        ))
    }

    /// Complex conjugate, `σ_{-1}`.
    pub fn conj(&self) -> CyclotomicInt {
        self.galois_act(-1).expect("-1 is always a unit")
    }

    /// Numerical value under `ζ ↦ exp(2πi/n)`.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.n as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (j, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
            (re + c * angle.cos(), im + c * angle.sin())
        })
    }

    fn same_n(&self, other: &CyclotomicInt) {
        assert_eq!(self.n, other.n, "cyclotomic values of different orders");
    }
}

/// `Σ_{e ∈ exponents} ζ_n^e` reduced to the power basis; exponents may repeat.
pub fn reduce_sum(n: u64, exponents: &[u64]) -> CyclotomicInt {
    let basis = CyclotomicBasis::get(n);
    let mut counts = vec![0i64; n as usize];
    for &e in exponents {
        counts[(e % n) as usize] += 1;
    }
    basis.from_counts(&counts)
}

/// `Σ w_e ζ_n^e` for arbitrary integer weights.
pub fn reduce_weighted<'a>(n: u64, terms: impl IntoIterator<Item = (u64, &'a BigInt)>) -> CyclotomicInt {
    CyclotomicBasis::get(n).weighted(terms)
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.same_n(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInt { n: self.n, coeffs }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.same_n(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicInt { n: self.n, coeffs }
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self.same_n(rhs);
        let mut prod = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let coeffs = CyclotomicBasis::get(self.n).reduce_poly(prod);
        CyclotomicInt { n: self.n, coeffs }
    }
}

impl fmt::Display for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{j}")?,
                (_, false) => write!(f, "{mag}*z^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (n={})", self.n)
    }
}

/// JSON coefficient: a number when it fits in `i64`, otherwise a decimal string.
pub(crate) fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    match v {
        serde_json::Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .or_else(|| num.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("non-integer coefficient {num}")),
        serde_json::Value::String(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        other => Err(format!("unexpected coefficient {other}")),
    }
}

impl Serialize for CyclotomicInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CyclotomicInt", 2)?;
        st.serialize_field("n", &self.n)?;
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_to_json).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u64,
            coeffs: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.n == 0 {
            return Err(de::Error::custom("n must be positive"));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(bigint_from_json)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        CyclotomicInt::from_coeffs(raw.n, coeffs).map_err(de::Error::custom)
    }
}
