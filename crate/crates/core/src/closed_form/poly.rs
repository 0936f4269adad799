use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficients in ascending degree, no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![BigInt::one()])
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|a| -a).collect())
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Poly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Poly(self.0.iter().map(|a| a / &c).collect())
    }

    /// `lc(b)^e * self mod b` for the appropriate `e`, good enough for gcds.
    fn pseudo_rem(&self, b: &Poly) -> Poly {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.lead().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().clone();
            let shift = dr - db;
            let mut next: Vec<BigInt> = r.0.iter().map(|c| c * &lb).collect();
            for (i, c) in b.0.iter().enumerate() {
                next[i + shift] -= c * &lr;
            }
            r = Poly::new(next);
            r = r.primitive_part();
        }
        r
    }

    /// Greatest common divisor over the rationals, returned primitive with a
    /// positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        if a.is_zero() {
            return a;
        }
        if a.degree() == Some(0) {
            return Poly::one();
        }
        if a.lead().is_negative() {
            a = a.neg();
        }
        a
    }

    /// Exact quotient in `Z[x]`; `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        let Some(dn) = self.degree() else {
            return Some(Poly::zero());
        };
        if dn < dd {
            return None;
        }
        let lead = divisor.lead();
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); dn - dd + 1];
        for shift in (0..=dn - dd).rev() {
            let top = &rem[shift + dd];
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (i, c) in divisor.0.iter().enumerate() {
                    rem[i + shift] -= &q * c;
                }
            }
            quot[shift] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Poly::new(quot))
    }

    /// Keeps terms of degree `<= max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Poly {
        Poly::new(self.0.iter().take(max_degree + 1).cloned().collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// A power series written as `numerator / denominator` with the denominator
/// normalized to constant term 1 and the fraction in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalGF {
    numerator: Poly,
    denominator: Poly,
}

impl RationalGF {
    /// Reduces to lowest terms and normalizes `denominator(0) = 1`.
    pub fn new(numerator: Poly, denominator: Poly) -> Result<Self> {
        if denominator.coeff(0).is_zero() {
            return Err(Error::BadDenominator("0".into()));
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.is_zero() || g == Poly::one() {
            (numerator, denominator)
        } else {
            (
                numerator.div_exact(&g).expect("gcd divides numerator"),
                denominator.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let c0 = den.coeff(0);
        if c0 == -BigInt::one() {
            num = num.neg();
            den = den.neg();
        } else if !c0.is_one() {
            // Only a common integer factor can still be removed.
            let common = num.content().gcd(&den.content());
            if common.is_zero() || !(&c0 % &common).is_zero() || !(&c0 / &common).abs().is_one() {
                return Err(Error::BadDenominator(c0.to_string()));
            }
            let s = &c0 / &common;
            num = Poly::new(num.coeffs().iter().map(|a| a / &common * &s).collect());
            den = Poly::new(den.coeffs().iter().map(|a| a / &common * &s).collect());
        }
        Ok(RationalGF { numerator: num, denominator: den })
    }

    pub fn numerator(&self) -> &Poly {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    /// Coefficients of `x^1 ..= x^count`.
    pub fn expand(&self, count: usize) -> Vec<BigInt> {
        expand_gf(self, count)
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// Power-series coefficients of `x^1 ..= x^count` by running the linear
/// recursion encoded in the denominator.
pub fn expand_gf(gf: &RationalGF, count: usize) -> Vec<BigInt> {
    if count == 0 {
        return Vec::new();
    }
    let den = gf.denominator.coeffs();
    debug_assert!(den[0].is_one());
    let mut a: Vec<BigInt> = Vec::with_capacity(count + 1);
    for m in 0..=count {
        let mut v = gf.numerator.coeff(m);
        for j in 1..den.len().min(m + 1) {
            if !den[j].is_zero() {
                v -= &den[j] * &a[m - j];
            }
        }
        a.push(v);
    }
    a.split_off(1)
}
