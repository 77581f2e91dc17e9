//! Dense univariate polynomials with big integer coefficients.
//!
//! Only what the spectrum checks need: products, exact division by monic
//! divisors and cyclotomic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Coefficients are stored lowest degree first and kept free of trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![BigInt::one()])
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        Self::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Removes the largest power of `x` dividing the polynomial and returns
    /// the stripped polynomial together with that power.
    pub fn strip_x_power(&self) -> (IntPoly, usize) {
        let s = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (IntPoly::new(self.coeffs[s..].to_vec()), s)
    }

    /// Reversed polynomial `x^deg p(1/x)`.
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        IntPoly::new(c)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    /// Division with remainder by a monic polynomial. Exact over the integers.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs[..dd].iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// The `d`-th cyclotomic polynomial, computed as `(x^d - 1) / prod_{e | d, e < d} Phi_e`.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d > 0);
    let mut p = IntPoly::x_pow_minus_one(d as usize);
    for e in crate::arith::divisors(d) {
        if e == d {
            break;
        }
        let (q, r) = p.div_rem_monic(&cyclotomic(e));
        debug_assert!(r.is_zero());
        p = q;
    }
    p
}

/// All cyclotomic polynomials `Phi_1 .. Phi_bound`, index `d - 1`.
pub fn cyclotomic_table(bound: u64) -> Vec<IntPoly> {
    let mut table: Vec<IntPoly> = Vec::with_capacity(bound as usize);
    for d in 1..=bound {
        let mut p = IntPoly::x_pow_minus_one(d as usize);
        for e in crate::arith::divisors(d) {
            if e == d {
                break;
            }
            p = p.div_rem_monic(&table[e as usize - 1]).0;
        }
        table.push(p);
    }
    table
}
