//! Word-size prime field arithmetic for screening and solving recurrence
//! systems, plus CRT and rational reconstruction to lift solutions back to Q.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug)]
pub(super) struct Field {
    p: u64,
}

impl Field {
    pub(super) fn new(p: u64) -> Self {
        Field { p }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    pub(super) fn reduce(self, x: &BigInt) -> u64 {
        let r = x.mod_floor(&BigInt::from(self.p));
        u64::try_from(r).expect("residue fits")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let f = Field::new(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, in descending order.
pub(super) fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime(n) {
            n -= 2;
        }
        let p = n;
        n -= 2;
        Some(p)
    })
}

/// Gaussian elimination of an augmented system `[A | b]` over the field.
/// Returns a solution (free unknowns zero, `None` if inconsistent) and
/// whether `A` has full column rank.
pub(super) fn solve(mut m: Vec<Vec<u64>>, unknowns: usize, f: Field) -> (Option<Vec<u64>>, bool) {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = f.inv(m[row][col]);
        for v in &mut m[row][col..=unknowns] {
            *v = f.mul(*v, inv);
        }
        let (top, rest) = m.split_at_mut(row + 1);
        let pivot_row = &top[row];
        for r in rest.iter_mut() {
            let factor = r[col];
            if factor == 0 {
                continue;
            }
            for j in col..=unknowns {
                r[j] = f.sub(r[j], f.mul(factor, pivot_row[j]));
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let full = pivots.len() == unknowns;
    if m[row..].iter().any(|r| r[unknowns] != 0) {
        return (None, full);
    }
    let mut x = vec![0u64; unknowns];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = m[r][unknowns];
        for j in c + 1..unknowns {
            acc = f.sub(acc, f.mul(m[r][j], x[j]));
        }
        x[c] = acc;
    }
    (Some(x), full)
}

/// Lifts `x ≡ a (mod m)` to the residue mod `m * p` that is also `≡ b (mod
/// p)`. The caller multiplies `m` by `p` afterwards.
pub(super) fn crt(a: &mut BigInt, m: &BigInt, b: u64, f: Field) {
    let t = f.mul(f.sub(b, f.reduce(a)), f.inv(f.reduce(m)));
    *a += m * BigInt::from(t);
}

/// The fraction `n/d` with `|n|, d <= sqrt(m/2)` congruent to `a` mod `m`,
/// if one exists.
pub(super) fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p > 1 << 61 && is_prime(p)));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(561));
        assert!(!is_prime(1));
    }

    #[test]
    fn field_solve() {
        let f = Field::new(101);
        // x + y = 3, x - y = 1
        let (x, full) = solve(vec![vec![1, 1, 3], vec![1, 100, 1], vec![2, 2, 6]], 2, f);
        assert_eq!(x, Some(vec![2, 1]));
        assert!(full);
        assert_eq!(solve(vec![vec![1, 1, 3], vec![2, 2, 7]], 2, f), (None, false));
        assert_eq!(solve(vec![vec![1, 0, 3], vec![0, 1, 1], vec![1, 1, 5]], 2, f), (None, true));
        let (x, full) = solve(vec![vec![1, 1, 3], vec![2, 2, 6]], 2, f);
        assert!(x.is_some() && !full);
    }

    #[test]
    fn lift_fraction() {
        let q = BigRational::new(BigInt::from(-7), BigInt::from(3));
        let mut a = BigInt::zero();
        let mut m = BigInt::one();
        for p in primes().take(2) {
            let f = Field::new(p);
            let r = f.mul(f.reduce(&BigInt::from(-7)), f.inv(3));
            crt(&mut a, &m, r, f);
            m *= p;
        }
        assert_eq!(rational_reconstruct(&a, &m), Some(q));
        assert_eq!(rational_reconstruct(&BigInt::from(5), &BigInt::from(1_000_003)), Some(BigInt::from(5).into()));
    }
}
