//! Exact algebra of periodic integer sequences.
//!
//! A sequence `I = (I_n)_{n >= 1}` has a unique formal expansion
//! `I = sum_k a_k sigma^k` over the normalized sequences
//! `sigma^k_n = k if k | n else 0`. The coefficients are recovered by Möbius
//! inversion of `I_n = sum_{k | n} k a_k`, and the sequence satisfies Dold's
//! congruences exactly when every `a_k` is an integer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{divisors, lcm_all, mobius};
use crate::poly::{cyclotomic, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("period {period} does not match {len} values")]
    LengthMismatch { period: usize, len: usize },
    #[error("index must be at least 1")]
    ZeroIndex,
    #[error("coefficient key {0} is not a positive integer")]
    BadKey(String),
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
    #[error("sequence violates Dold congruences: a_{k} = {value}")]
    NotDold { k: u64, value: BigRational },
    #[error("sequence is not a finite sigma expansion: reconstruction gives {reconstructed} instead of {expected} at n = {n}")]
    NotFinite { n: u64, expected: i64, reconstructed: BigRational },
    #[error("decomposition evaluates to the non-integer {value} at n = {n}")]
    NonIntegralValue { n: u64, value: BigRational },
    #[error("value {0} does not fit in a 64-bit integer")]
    Overflow(BigInt),
    #[error("growth estimate needs at least 8 samples, got {0}")]
    TooFewSamples(usize),
    #[error("roots of unity sum is not rational at n = {0}")]
    IrrationalEvaluation(u64),
}

/// A periodic integer sequence `I_1, I_2, ...` stored by one period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence")]
pub struct PeriodicSequence {
    period: usize,
    values: Vec<i64>,
}

#[derive(Deserialize)]
struct RawSequence {
    period: usize,
    values: Vec<i64>,
}

impl TryFrom<RawSequence> for PeriodicSequence {
    type Error = SequenceError;

    fn try_from(raw: RawSequence) -> Result<Self, Self::Error> {
        if raw.period == 0 {
            return Err(SequenceError::ZeroPeriod);
        }
        if raw.values.len() != raw.period {
            return Err(SequenceError::LengthMismatch {
                period: raw.period,
                len: raw.values.len(),
            });
        }
        Ok(Self {
            period: raw.period,
            values: raw.values,
        })
    }
}

impl PeriodicSequence {
    /// Builds a sequence whose period is the number of values given.
    pub fn new(values: Vec<i64>) -> Result<Self, SequenceError> {
        RawSequence {
            period: values.len(),
            values,
        }
        .try_into()
    }

    pub fn constant(value: i64) -> Self {
        Self {
            period: 1,
            values: vec![value],
        }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `I_n` for `n >= 1`.
    pub fn at(&self, n: u64) -> i64 {
        assert!(n >= 1, "sequences are indexed from 1");
        self.values[((n - 1) % self.period as u64) as usize]
    }

    /// `I_1 .. I_count`.
    pub fn take(&self, count: u64) -> Vec<i64> {
        (1..=count).map(|n| self.at(n)).collect()
    }

    /// The same sequence with every entry perturbed: `I_n + delta` at
    /// positions `n == position (mod period)`.
    pub fn perturbed(&self, position: usize, delta: i64) -> Self {
        let mut values = self.values.clone();
        values[position % self.period] += delta;
        Self {
            period: self.period,
            values,
        }
    }
}

/// Coefficients `a_k` of the expansion `I = sum_k a_k sigma^k`.
///
/// Only nonzero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoldDecomposition {
    coefficients: BTreeMap<u64, BigRational>,
    is_integral: bool,
}

impl DoldDecomposition {
    pub fn new(coefficients: BTreeMap<u64, BigRational>) -> Result<Self, SequenceError> {
        if coefficients.contains_key(&0) {
            return Err(SequenceError::BadKey("0".into()));
        }
        let coefficients: BTreeMap<_, _> = coefficients
            .into_iter()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        let is_integral = coefficients.values().all(|a| a.is_integer());
        Ok(Self {
            coefficients,
            is_integral,
        })
    }

    pub fn from_integers<I: IntoIterator<Item = (u64, i64)>>(
        coefficients: I,
    ) -> Result<Self, SequenceError> {
        Self::new(
            coefficients
                .into_iter()
                .map(|(k, a)| (k, BigRational::from_integer(a.into())))
                .collect(),
        )
    }

    pub fn coefficients(&self) -> &BTreeMap<u64, BigRational> {
        &self.coefficients
    }

    pub fn coefficient(&self, k: u64) -> BigRational {
        self.coefficients
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.is_integral
    }

    /// Integer coefficients, when the decomposition is integral.
    pub fn integer_coefficients(&self) -> Option<BTreeMap<u64, i64>> {
        self.coefficients
            .iter()
            .map(|(&k, a)| {
                a.is_integer()
                    .then(|| a.to_integer().to_i64())
                    .flatten()
                    .map(|v| (k, v))
            })
            .collect()
    }

    /// lcm of the support; the expanded sequence is periodic with this period.
    pub fn support_lcm(&self) -> u64 {
        lcm_all(self.coefficients.keys().copied())
    }

    /// `sum_{k | n} k a_k`, exact.
    pub fn evaluate(&self, n: u64) -> Result<BigRational, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        let term = |acc: BigRational, (&k, a): (&u64, &BigRational)| acc + a * BigRational::from_integer(k.into());
        // long supports: look up the divisors of n instead of scanning
        if self.coefficients.len() > 64 {
            let divs = divisors(n);
            return Ok(divs
                .iter()
                .filter_map(|k| self.coefficients.get_key_value(k))
                .fold(BigRational::zero(), term));
        }
        Ok(self
            .coefficients
            .iter()
            .filter(|(&k, _)| n.is_multiple_of(k))
            .fold(BigRational::zero(), term))
    }

    /// Like [`evaluate`](Self::evaluate) but insists on an integer value.
    pub fn evaluate_integer(&self, n: u64) -> Result<i64, SequenceError> {
        let v = self.evaluate(n)?;
        if !v.is_integer() {
            return Err(SequenceError::NonIntegralValue { n, value: v });
        }
        let i = v.to_integer();
        i.to_i64().ok_or(SequenceError::Overflow(i))
    }

    /// Expands the decomposition into one period of its sequence.
    pub fn to_sequence(&self) -> Result<PeriodicSequence, SequenceError> {
        let period = self.support_lcm();
        let values = (1..=period)
            .map(|n| self.evaluate_integer(n))
            .collect::<Result<Vec<_>, _>>()?;
        PeriodicSequence::new(values)
    }
}

impl fmt::Display for DoldDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(k, a)| format!("({a})·σ^{k}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, SequenceError> {
    let bad = || SequenceError::BadRational(s.to_string());
    let t = s.trim();
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
        let mut numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        return Ok(BigRational::new(numer, denom));
    }
    let r = BigRational::from_str(t).map_err(|_| bad())?;
    Ok(r)
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    coefficients: BTreeMap<u64, RationalJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Text(String),
}

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            RationalJson::Int(i) => serializer.serialize_str(&i.to_string()),
            RationalJson::Text(s) => serializer.serialize_str(s),
        }
    }
}

impl Serialize for DoldDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DecompositionJson {
            coefficients: self
                .coefficients
                .iter()
                .map(|(&k, a)| (k, RationalJson::Text(format_rational(a))))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DoldDecomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = DecompositionJson::deserialize(deserializer)?;
        let mut coefficients = BTreeMap::new();
        for (k, v) in raw.coefficients {
            let a = match v {
                RationalJson::Int(i) => BigRational::from_integer(i.into()),
                RationalJson::Text(s) => parse_rational(&s).map_err(D::Error::custom)?,
            };
            coefficients.insert(k, a);
        }
        DoldDecomposition::new(coefficients).map_err(D::Error::custom)
    }
}

fn coefficient_at(seq: &PeriodicSequence, k: u64) -> BigRational {
    let sum: BigInt = divisors(k)
        .into_iter()
        .map(|d| BigInt::from(mobius(k / d)) * BigInt::from(seq.at(d)))
        .sum();
    BigRational::new(sum, BigInt::from(k))
}

/// Coefficients of `seq` in the `sigma^k` basis.
///
/// `a_k = (1/k) sum_{d | k} mu(k/d) I_d` for `k = 1 ..= period`. A sequence
/// satisfying the congruences has no support outside the divisors of its
/// period; for other sequences the formal expansion is infinite and this
/// truncation reproduces the sequence only on `1 ..= period`
/// (see [`check_dold`]).
pub fn dold_coefficients(seq: &PeriodicSequence) -> DoldDecomposition {
    let coefficients = (1..=seq.period() as u64)
        .map(|k| (k, coefficient_at(seq, k)))
        .collect();
    DoldDecomposition::new(coefficients).expect("keys are positive by construction")
}

/// Why a sequence fails the congruences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DoldWitness {
    /// The first coefficient `a_k` (searching `k <= 2 * period`) that is not an integer.
    NonIntegral { k: u64, value: BigRational },
    /// All coefficients are integral but the formal expansion has support
    /// beyond the period, so the truncated decomposition disagrees with the
    /// sequence at `n`.
    Unreconstructed { n: u64, expected: i64, reconstructed: BigRational },
}

impl From<DoldWitness> for SequenceError {
    fn from(w: DoldWitness) -> Self {
        match w {
            DoldWitness::NonIntegral { k, value } => SequenceError::NotDold { k, value },
            DoldWitness::Unreconstructed { n, expected, reconstructed } => {
                SequenceError::NotFinite { n, expected, reconstructed }
            }
        }
    }
}

/// Outcome of a Dold congruence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoldCheck {
    pub holds: bool,
    /// Coefficients for `k <= period`, as returned by [`dold_coefficients`].
    pub decomposition: DoldDecomposition,
    /// Whether the decomposition reproduces the sequence for `n <= 2 * period`.
    pub reconstructs: bool,
    pub witness: Option<DoldWitness>,
}

pub fn check_dold(seq: &PeriodicSequence) -> DoldCheck {
    let decomposition = dold_coefficients(seq);
    let q = seq.period() as u64;
    let mismatch = (q + 1..=2 * q).find_map(|n| {
        let r = decomposition.evaluate(n).expect("n >= 1");
        (r != BigRational::from_integer(seq.at(n).into())).then_some((n, r))
    });
    let non_integral = (1..=2 * q)
        .map(|k| (k, coefficient_at(seq, k)))
        .find(|(_, a)| !a.is_integer());
    let witness = match (non_integral, &mismatch) {
        (Some((k, value)), _) => Some(DoldWitness::NonIntegral { k, value }),
        (None, Some((n, r))) => Some(DoldWitness::Unreconstructed {
            n: *n,
            expected: seq.at(*n),
            reconstructed: r.clone(),
        }),
        (None, None) => None,
    };
    DoldCheck {
        holds: witness.is_none(),
        decomposition,
        reconstructs: mismatch.is_none(),
        witness,
    }
}

/// Classical form of the congruences: `sum_{d | n} mu(n/d) I_d == 0 (mod n)`.
pub fn congruence_residue(seq: &PeriodicSequence, n: u64) -> i64 {
    let sum: i128 = divisors(n)
        .into_iter()
        .map(|d| mobius(n / d) as i128 * seq.at(d) as i128)
        .sum();
    sum.mod_floor(&(n as i128)) as i64
}

/// `e^{2 pi i exponent / order}` with `gcd(exponent, order) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub order: u64,
    pub exponent: u64,
}

impl RootOfUnity {
    /// Normalizes `e^{2 pi i j / d}` to its exact order.
    pub fn new(j: u64, d: u64) -> Self {
        assert!(d > 0);
        let j = j % d;
        let g = j.gcd(&d);
        Self {
            order: d / g,
            exponent: j / g,
        }
    }

    pub fn pow(self, n: u64) -> Self {
        let e = ((self.exponent as u128 * n as u128) % self.order as u128) as u64;
        Self::new(e, self.order)
    }

    /// All `k`-th roots of unity.
    pub fn all_of_degree(k: u64) -> impl Iterator<Item = RootOfUnity> {
        (0..k).map(move |j| Self::new(j, k))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exponent) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (d, j) => write!(f, "e^(2πi·{j}/{d})"),
        }
    }
}

/// `I_n = -sum_i lambda_i^n + sum_j mu_j^n` with every root stored symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnityForm {
    pub lambda: Vec<RootOfUnity>,
    pub mu: Vec<RootOfUnity>,
}

impl RootOfUnityForm {
    pub fn orders_lcm(&self) -> u64 {
        lcm_all(self.lambda.iter().chain(&self.mu).map(|r| r.order))
    }

    /// Evaluates the form at `n` exactly.
    pub fn evaluate(&self, n: u64) -> Result<BigInt, SequenceError> {
        if n == 0 {
            return Err(SequenceError::ZeroIndex);
        }
        // signed multiplicity of each n-th power
        let mut counts: BTreeMap<RootOfUnity, i64> = BTreeMap::new();
        for r in &self.lambda {
            *counts.entry(r.pow(n)).or_default() -= 1;
        }
        for r in &self.mu {
            *counts.entry(r.pow(n)).or_default() += 1;
        }
        counts.retain(|_, c| *c != 0);
        conjugacy_class_sum(&counts)
            .or_else(|| cyclotomic_reduction_sum(&counts))
            .ok_or(SequenceError::IrrationalEvaluation(n))
    }
}

/// When each order's roots appear with one common multiplicity, the sum is
/// that multiplicity times `mu(order)` (the sum of primitive roots).
fn conjugacy_class_sum(counts: &BTreeMap<RootOfUnity, i64>) -> Option<BigInt> {
    let mut by_order: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for (r, &c) in counts {
        by_order.entry(r.order).or_default().push(c);
    }
    let mut total = BigInt::zero();
    for (d, cs) in by_order {
        let primitive = crate::arith::totient(d) as usize;
        if cs.len() != primitive || cs.iter().any(|&c| c != cs[0]) {
            return None;
        }
        total += BigInt::from(cs[0]) * BigInt::from(mobius(d));
    }
    Some(total)
}

/// General route: write the sum as a polynomial in a primitive `L`-th root
/// and reduce modulo `Phi_L`; the sum is rational iff the remainder is constant.
fn cyclotomic_reduction_sum(counts: &BTreeMap<RootOfUnity, i64>) -> Option<BigInt> {
    let l = lcm_all(counts.keys().map(|r| r.order));
    let mut coeffs = vec![BigInt::zero(); l as usize];
    for (r, &c) in counts {
        coeffs[(r.exponent * (l / r.order)) as usize] += c;
    }
    let (_, rem) = IntPoly::new(coeffs).div_rem_monic(&cyclotomic(l));
    match rem.degree() {
        None => Some(BigInt::zero()),
        Some(0) => Some(rem.coeffs()[0].clone()),
        Some(_) => None,
    }
}

/// Expands `I = sum a_k sigma^k` into roots of unity using
/// `sigma^k_n = sum_{zeta^k = 1} zeta^n`: each positive `a_k` contributes
/// `a_k` copies of the `k`-th roots to `mu`, each negative one `|a_k|` copies
/// to `lambda`.
pub fn roots_of_unity_form(seq: &PeriodicSequence) -> Result<RootOfUnityForm, SequenceError> {
    let check = check_dold(seq);
    if let Some(w) = check.witness {
        return Err(w.into());
    }
    let mut form = RootOfUnityForm {
        lambda: Vec::new(),
        mu: Vec::new(),
    };
    for (&k, a) in check.decomposition.coefficients() {
        let count = a.to_integer().abs().to_u64().ok_or(SequenceError::Overflow(a.to_integer()))?;
        let target = if a.is_positive() {
            &mut form.mu
        } else {
            &mut form.lambda
        };
        for _ in 0..count {
            target.extend(RootOfUnity::all_of_degree(k));
        }
    }
    form.lambda.sort();
    form.mu.sort();
    Ok(form)
}

fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Estimate of `limsup log|I_n| / n` from `I_1 .. I_N`.
///
/// Takes the maximum of `log|I_n| / n` over the tail window `N/2 <= n <= N`
/// (zero entries count as 0). This is a lower-bound style estimator: it is
/// exact for geometric growth and close to zero for bounded sequences once
/// `N` is large.
pub fn growth_exponent(samples: &[BigInt]) -> Result<f64, SequenceError> {
    let len = samples.len();
    if len < 8 {
        return Err(SequenceError::TooFewSamples(len));
    }
    let start = len.div_ceil(2);
    let best = (start..=len)
        .map(|n| {
            let v = &samples[n - 1];
            if v.is_zero() {
                0.0
            } else {
                ln_abs(v) / n as f64
            }
        })
        .fold(0.0_f64, f64::max);
    Ok(best)
}

/// The window `(first, last)` of indices used by [`growth_exponent`].
pub fn growth_window(len: usize) -> (usize, usize) {
    (len.div_ceil(2), len)
}
