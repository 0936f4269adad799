//! Constant-state counters for `k = 1, 2, 3` and the generating functions
//! behind them.
//!
//! Sequences are indexed from 1 and read as zero at every index `<= 0`, which
//! makes the coupled `F`/`G`/`H` systems total.

mod poly;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perm::{Count, CountTable, GapSpec, Provenance, Variant};

pub use poly::{expand_gf, Poly, RationalGF};

/// `lead * a_n = c_1 a_{n-1} + ... + c_r a_{n-r}` for every `n >= valid_from`,
/// with `a_1 ..= a_s` given explicitly.
///
/// `lead` is 1 for every recurrence produced from an integer sequence with a
/// rational generating function; it is kept so rational fits of arbitrary
/// input can still be written with coprime integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    lead: BigInt,
    coefficients: Vec<BigInt>,
    initial: Vec<BigInt>,
    valid_from: usize,
}

impl Recurrence {
    pub fn new(coefficients: Vec<BigInt>, initial: Vec<BigInt>, valid_from: usize) -> Result<Self> {
        Recurrence::with_lead(BigInt::one(), coefficients, initial, valid_from)
    }

    pub fn with_lead(
        lead: BigInt,
        coefficients: Vec<BigInt>,
        initial: Vec<BigInt>,
        valid_from: usize,
    ) -> Result<Self> {
        let r = coefficients.len();
        if r == 0 || coefficients[r - 1].is_zero() {
            return Err(Error::Precondition("recurrence needs a nonzero last coefficient".into()));
        }
        if lead.is_zero() {
            return Err(Error::Precondition("recurrence lead must be nonzero".into()));
        }
        if initial.len() < r || valid_from < r + 1 || valid_from > initial.len() + 1 {
            return Err(Error::Precondition(format!(
                "order {r} recurrence with {} initial terms cannot start at n = {valid_from}",
                initial.len()
            )));
        }
        Ok(Recurrence { lead, coefficients, initial, valid_from })
    }

    pub fn from_i64(coefficients: &[i64], initial: &[i64], valid_from: usize) -> Result<Self> {
        Recurrence::new(
            coefficients.iter().map(|&c| c.into()).collect(),
            initial.iter().map(|&c| c.into()).collect(),
            valid_from,
        )
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn lead(&self) -> &BigInt {
        &self.lead
    }

    /// `c_1 ..= c_r`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn initial(&self) -> &[BigInt] {
        &self.initial
    }

    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    /// `lead - c_1 x - ... - c_r x^r`.
    pub fn denominator(&self) -> Poly {
        let mut d = vec![self.lead.clone()];
        d.extend(self.coefficients.iter().map(|c| -c));
        Poly::new(d)
    }

    /// Next term after `seq` by the recurrence (rounding toward zero if
    /// `lead` does not divide).
    fn step(&self, seq: &[BigInt]) -> BigInt {
        let m = seq.len();
        let mut acc = BigInt::zero();
        for (j, c) in self.coefficients.iter().enumerate() {
            if let Some(prev) = m.checked_sub(j + 1).map(|i| &seq[i]) {
                acc += c * prev;
            }
        }
        if self.lead.is_one() {
            acc
        } else {
            acc / &self.lead
        }
    }

    /// `a_1 ..= a_count`.
    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        let start = self.valid_from - 1;
        let mut seq: Vec<BigInt> = self.initial.iter().take(count.min(start)).cloned().collect();
        while seq.len() < count {
            let next = self.step(&seq);
            seq.push(next);
        }
        seq
    }

    /// Extends `seed` by `count` terms.
    pub fn predict(&self, seed: &[BigInt], count: usize) -> Vec<BigInt> {
        let mut seq = seed.to_vec();
        for _ in 0..count {
            let next = self.step(&seq);
            seq.push(next);
        }
        seq.split_off(seed.len())
    }
}

fn to_count(v: BigInt) -> Count {
    match v.into_parts() {
        (Sign::Minus, _) => panic!("negative count"),
        (_, mag) => mag,
    }
}

fn table(k: u32, terms: Vec<BigInt>) -> CountTable {
    CountTable::new(
        GapSpec(k),
        Variant::Anchored,
        Provenance::ClosedForm,
        terms.into_iter().map(to_count).collect(),
    )
}

/// Only the identity is 1-bounded and anchored.
pub fn count_k1(n: u32) -> Count {
    assert!(n >= 1);
    BigUint::one()
}

/// `R_1 = R_2 = R_3 = 1`, `R_n = R_{n-1} + R_{n-3}`.
pub fn count_k2(n: u32) -> Count {
    assert!(n >= 1);
    let (mut a, mut b, mut c) = (BigUint::one(), BigUint::one(), BigUint::one());
    for _ in 4..=n {
        let next = &c + &a;
        a = b;
        b = c;
        c = next;
    }
    c
}

pub const K3_INITIAL: [i64; 8] = [1, 1, 1, 2, 6, 14, 28, 56];
pub const K3_COEFFICIENTS: [i64; 8] = [2, -1, 2, 1, 1, 0, -1, -1];

pub fn k2_recurrence() -> Recurrence {
    Recurrence::from_i64(&[1, 0, 1], &[1, 1, 1], 4).expect("valid")
}

pub fn k3_recurrence() -> Recurrence {
    Recurrence::from_i64(&K3_COEFFICIENTS, &K3_INITIAL, 9).expect("valid")
}

/// Eight seeds, then the depth-8 recurrence from `n = 9`.
pub fn count_k3(n: u32) -> Count {
    assert!(n >= 1);
    to_count(k3_recurrence().terms(n as usize).pop().expect("n >= 1"))
}

/// `F`, `G`, `H` for `n = 1 ..= 5`, established by filtered enumeration and
/// re-checked in the tests.
pub const FGH_SEEDS: [[i64; 5]; 3] = [[1, 1, 1, 2, 6], [1, 1, 2, 4, 10], [0, 0, 0, 2, 3]];

/// `a_n` with the zero convention for `n <= 0`.
fn at(seq: &[BigInt], n: i64) -> BigInt {
    if n <= 0 {
        BigInt::zero()
    } else {
        seq[n as usize - 1].clone()
    }
}

fn fgh_raw(max_n: u32) -> [Vec<BigInt>; 3] {
    let (mut f, mut g, mut h) = (Vec::new(), Vec::new(), Vec::new());
    for n in 1..=max_n as i64 {
        if n <= 5 {
            let i = n as usize - 1;
            f.push(FGH_SEEDS[0][i].into());
            g.push(FGH_SEEDS[1][i].into());
            h.push(FGH_SEEDS[2][i].into());
            continue;
        }
        let fn_ = at(&g, n - 1) + at(&h, n - 1) + at(&f, n - 5);
        f.push(fn_);
        let gn = at(&f, n) + at(&g, n - 2) + at(&f, n - 3) + at(&g, n - 4) + at(&h, n - 2);
        g.push(gn);
        let hn = at(&f, n - 3) + at(&g, n - 3) + at(&f, n - 4) + at(&g, n - 5) + at(&h, n - 3);
        h.push(hn);
    }
    [f, g, h]
}

/// Joint tables of the three mutually recursive classes:
/// `F` anchored, `G` starting at 1 or 2, `H` starting at 3 without the Joker.
pub fn fgh_table(max_n: u32) -> (CountTable, CountTable, CountTable) {
    let [f, g, h] = fgh_raw(max_n);
    (table(3, f), table(3, g), table(3, h))
}

/// `F` and `G` from the system with `H` eliminated. Only `F_1 = 1` is seeded;
/// every other term follows from the two relations and the zero convention.
pub fn fg_two_term_table(max_n: u32) -> (CountTable, CountTable) {
    let (mut f, mut g): (Vec<BigInt>, Vec<BigInt>) = (Vec::new(), Vec::new());
    for n in 1..=max_n as i64 {
        let fn_ = if n == 1 {
            BigInt::one()
        } else {
            at(&g, n - 1) + at(&f, n - 4) + at(&g, n - 2) - at(&f, n - 2) + at(&f, n - 5)
        };
        f.push(fn_);
        let gn = at(&f, n) + at(&g, n - 2) + at(&g, n - 3) + at(&g, n - 4) + at(&f, n - 5);
        g.push(gn);
    }
    (table(3, f), table(3, g))
}

/// `H_n = F_{n-3} + G_{n-1} - F_{n-1}`.
pub fn h_eliminated(n: u32) -> Count {
    assert!(n >= 1);
    let [f, g, _] = fgh_raw(n);
    let n = n as i64;
    let v = at(&f, n - 3) + at(&g, n - 1) - at(&f, n - 1);
    to_count(v)
}

/// `x / (1 - x - x^3)`.
pub fn gf_k2() -> RationalGF {
    RationalGF::new(Poly::from_i64(&[0, 1]), Poly::from_i64(&[1, -1, 0, -1])).expect("valid")
}

/// `(x - x^2 - x^4) / (1 - 2x + x^2 - 2x^3 - x^4 - x^5 + x^7 + x^8)`.
pub fn gf_k3() -> RationalGF {
    RationalGF::new(
        Poly::from_i64(&[0, 1, -1, 0, -1]),
        Poly::from_i64(&[1, -2, 1, -2, -1, -1, 0, 1, 1]),
    )
    .expect("valid")
}

/// Closed-form table for `k <= 3`, anchored.
pub fn closed_table(k: GapSpec, max_n: u32) -> Result<CountTable> {
    let terms: Vec<BigInt> = match k.get() {
        1 => vec![BigInt::one(); max_n as usize],
        2 => k2_recurrence().terms(max_n as usize),
        3 => k3_recurrence().terms(max_n as usize),
        other => {
            return Err(Error::Precondition(format!("no closed form for k = {other}")));
        }
    };
    Ok(table(k.get(), terms))
}

/// Divides out a content factor, keeping the sign of the first element.
pub(crate) fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    if v.first().is_some_and(Signed::is_negative) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn k1_k2_values() {
        assert_eq!(count_k1(1), 1u32.into());
        assert_eq!(count_k1(7), 1u32.into());
        assert_eq!(count_k1(100), 1u32.into());
        assert_eq!(count_k2(3), 1u32.into());
        assert_eq!(count_k2(7), 6u32.into());
        assert_eq!(count_k2(12), 41u32.into());
    }

    #[test]
    fn k3_values() {
        assert_eq!(count_k3(8), 56u32.into());
        assert_eq!(count_k3(9), 118u32.into());
        assert_eq!(count_k3(10), 254u32.into());
        for (i, &v) in K3_INITIAL.iter().enumerate() {
            assert_eq!(count_k3(i as u32 + 1), BigUint::from(v as u64));
        }
    }

    #[test]
    fn k3_recurrence_holds_at_eight_with_zero_convention() {
        let f = k3_recurrence().terms(8);
        let mut padded = vec![BigInt::zero()];
        padded.extend(f.iter().cloned()); // padded[n] = F_n, padded[0] = F_0 = 0
        let rhs: BigInt = K3_COEFFICIENTS
            .iter()
            .enumerate()
            .map(|(j, &c)| BigInt::from(c) * &padded[8 - (j + 1)])
            .sum();
        assert_eq!(rhs, padded[8]);
    }

    #[test]
    fn fgh_examples() {
        let (f, g, h) = fgh_table(10);
        assert_eq!(g.get(8), Some(&93u32.into()));
        assert_eq!(h.get(6), Some(&5u32.into()));
        assert_eq!(f.get(7), Some(&28u32.into()));
        let expected_g = [1u32, 1, 2, 4, 10, 22, 45, 93];
        for (i, v) in expected_g.iter().enumerate() {
            assert_eq!(g.get(i as i64 + 1), Some(&(*v).into()));
        }
    }

    #[test]
    fn two_term_examples() {
        let (f, g) = fg_two_term_table(9);
        assert_eq!(f.get(1), Some(&1u32.into()));
        assert_eq!(f.get(5), Some(&6u32.into()));
        assert_eq!(g.get(5), Some(&10u32.into()));
        assert_eq!(f.get(9), Some(&118u32.into()));
    }

    #[test]
    fn h_elimination_examples() {
        assert_eq!(h_eliminated(1), 0u32.into());
        assert_eq!(h_eliminated(4), 2u32.into());
        assert_eq!(h_eliminated(5), 3u32.into());
        assert_eq!(h_eliminated(6), 5u32.into());
    }

    #[test]
    fn systems_agree() {
        let n = 120;
        let (f3, g3, h3) = fgh_table(n);
        let (f2, g2) = fg_two_term_table(n);
        let closed = closed_table(GapSpec(3), n).unwrap();
        assert_eq!(f3.terms(), f2.terms());
        assert_eq!(g3.terms(), g2.terms());
        assert_eq!(f3.terms(), closed.terms());
        for m in 1..=n {
            assert_eq!(Some(&h_eliminated(m)), h3.get(m as i64));
        }
    }

    #[test]
    fn generating_functions() {
        let g2 = gf_k2();
        assert_eq!(g2.numerator(), &Poly::from_i64(&[0, 1]));
        assert_eq!(g2.denominator(), &Poly::from_i64(&[1, -1, 0, -1]));
        assert_eq!(expand_gf(&g2, 7), big(&[1, 1, 1, 2, 3, 4, 6]));
        let g3 = gf_k3();
        assert_eq!(g3.numerator(), &Poly::from_i64(&[0, 1, -1, 0, -1]));
        assert_eq!(g3.denominator().coeff(0), BigInt::one());
        assert_eq!(expand_gf(&g3, 8), big(&K3_INITIAL));
        assert_eq!(g3.numerator().gcd(g3.denominator()), Poly::one());
    }

    #[test]
    fn recurrence_validation() {
        assert!(Recurrence::from_i64(&[1, 0], &[1, 1], 3).is_err());
        assert!(Recurrence::from_i64(&[1, 1], &[1], 2).is_err());
        assert!(Recurrence::from_i64(&[1, 1], &[1, 1], 2).is_err());
        let r = k2_recurrence();
        assert_eq!(r.predict(&big(&[1, 1, 1]), 4), big(&[2, 3, 4, 6]));
        assert!(r.predict(&big(&[1, 1, 1]), 0).is_empty());
        let r3 = k3_recurrence();
        assert_eq!(r3.predict(&big(&K3_INITIAL), 2), big(&[118, 254]));
    }
}
