//! Exact discovery of linear recurrences and rational generating functions
//! from count tables.
//!
//! Candidate orders are tried in increasing order. For each order the fit is
//! an overdetermined Hankel-style system `a_n = c_1 a_{n-1} + ... + c_r a_{n-r}`.
//! A word-size prime screens each order and, when the system has full rank,
//! the solution is lifted to Q by CRT and rational reconstruction; otherwise
//! it is solved by fraction-free elimination. Either way a recurrence is
//! accepted only after it reproduces every supplied term past its transient
//! in exact integer arithmetic.

mod modp;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::closed_form::{expand_gf, primitive, Poly, RationalGF, Recurrence};
use crate::error::{Error, Result};
use crate::frontier;
use crate::perm::{GapSpec, Variant};

/// Equations beyond the number of unknowns demanded of every fit.
const SLACK: usize = 4;

/// Minimum table length for a confident search up to `max_order`.
pub fn required_terms(max_order: usize) -> usize {
    2 * max_order + SLACK
}

/// Rows `n = first ..= len` (1-based) of the order-`order` system.
fn system(terms: &[BigInt], order: usize, first: usize) -> Vec<Vec<BigInt>> {
    (first..=terms.len())
        .map(|n| {
            let mut row: Vec<BigInt> = (1..=order).map(|j| terms[n - 1 - j].clone()).collect();
            row.push(terms[n - 1].clone());
            row
        })
        .collect()
}

/// Solves an augmented integer system `[A | b]` exactly. Fraction-free
/// elimination keeps every entry an integer minor; free unknowns are set to
/// zero. `None` if inconsistent.
fn solve(mut m: Vec<Vec<BigInt>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let (top, rest) = m.split_at_mut(row + 1);
        let pivot_row = &top[row];
        for r in rest.iter_mut() {
            let factor = r[col].clone();
            for j in col + 1..=unknowns {
                let v = &pivot_row[col] * &r[j] - &factor * &pivot_row[j];
                r[j] = v / &prev;
            }
            r[col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivots.push((row, col));
        row += 1;
    }
    if m[row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = BigRational::from_integer(m[r][unknowns].clone());
        for j in c + 1..unknowns {
            if !x[j].is_zero() {
                acc -= &x[j] * BigRational::from_integer(m[r][j].clone());
            }
        }
        x[c] = acc / BigRational::from_integer(m[r][c].clone());
    }
    Some(x)
}

/// Whether `lead * a_n = sum c_j a_{n-j}` at (1-based) `n > r`.
fn holds_at(terms: &[BigInt], lead: &BigInt, coeffs: &[BigInt], n: usize) -> bool {
    let rhs: BigInt = coeffs.iter().enumerate().map(|(j, c)| c * &terms[n - 2 - j]).sum();
    lead * &terms[n - 1] == rhs
}

/// Whether the relation holds for every `n` in `from ..= terms.len()`.
fn holds(terms: &[BigInt], lead: &BigInt, coeffs: &[BigInt], from: usize) -> bool {
    (from.max(coeffs.len() + 1)..=terms.len()).all(|n| holds_at(terms, lead, coeffs, n))
}

/// Primes tried before the modular path gives up and defers to exact
/// elimination.
const MAX_PRIMES: usize = 512;

enum Screen {
    Rejected,
    Found(BigInt, Vec<BigInt>),
    Undecided,
}

/// Modular fit of the rows `first .. first + block`. An inconsistency with
/// full column rank mod p is an inconsistency over Q, because some maximal
/// minor is then a unit mod p and the rational solution reduces cleanly.
fn modular_fit(terms: &[BigInt], order: usize, first: usize, block: usize) -> Screen {
    let last_row = first + block - 1;
    let mut acc = vec![BigInt::zero(); order];
    let mut modulus = BigInt::one();
    let mut previous: Option<Vec<BigRational>> = None;
    for p in modp::primes().take(MAX_PRIMES) {
        let f = modp::Field::new(p);
        let res: Vec<u64> = terms[..last_row].iter().map(|t| f.reduce(t)).collect();
        let rows = (first..=last_row)
            .map(|n| {
                let mut row: Vec<u64> = (1..=order).map(|j| res[n - 1 - j]).collect();
                row.push(res[n - 1]);
                row
            })
            .collect();
        let (x, full) = modp::solve(rows, order, f);
        let Some(x) = x.filter(|_| full) else {
            return if full { Screen::Rejected } else { Screen::Undecided };
        };
        for (a, r) in acc.iter_mut().zip(x) {
            modp::crt(a, &modulus, r, f);
        }
        modulus *= p;
        let lifted: Option<Vec<BigRational>> =
            acc.iter().map(|a| modp::rational_reconstruct(a, &modulus)).collect();
        let Some(lifted) = lifted else {
            previous = None;
            continue;
        };
        if previous.as_ref() == Some(&lifted) {
            let (lead, coeffs) = integral(&lifted);
            if (first..=last_row).all(|n| holds_at(terms, &lead, &coeffs, n)) {
                // The block has a unique solution, so this is the only candidate.
                return if holds(terms, &lead, &coeffs, first) {
                    Screen::Found(lead, coeffs)
                } else {
                    Screen::Rejected
                };
            }
        }
        previous = Some(lifted);
    }
    Screen::Undecided
}

/// Integer form `(lead, c_1..c_r)` with content 1 and positive lead.
fn integral(x: &[BigRational]) -> (BigInt, Vec<BigInt>) {
    let l = x.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let mut v = vec![l.clone()];
    v.extend(x.iter().map(|q| q.numer() * (&l / q.denom())));
    primitive(&mut v);
    let lead = v.remove(0);
    (lead, v)
}

/// Fits an order-`order` recurrence valid from `n = transient + order + 1`.
fn fit_at(terms: &[BigInt], order: usize, transient: usize) -> Option<(BigInt, Vec<BigInt>)> {
    let first = transient + order + 1;
    if first > terms.len() {
        return None;
    }
    // Reject cheaply on a leading block, then confirm on every term.
    let block = (order + SLACK).min(terms.len() + 1 - first);
    match modular_fit(terms, order, first, block) {
        Screen::Rejected => return None,
        Screen::Found(lead, coeffs) => return Some((lead, coeffs)),
        Screen::Undecided => {}
    }
    let head = system(terms, order, first);
    let x = solve(head[..block].to_vec(), order)?;
    let (lead, coeffs) = integral(&x);
    if holds(terms, &lead, &coeffs, first) {
        return Some((lead, coeffs));
    }
    let x = solve(head, order)?;
    let (lead, coeffs) = integral(&x);
    holds(terms, &lead, &coeffs, first).then_some((lead, coeffs))
}

/// Whether some order-`order` recurrence (last coefficient possibly zero)
/// fits `terms` from index `transient + order + 1` on.
pub fn fits(terms: &[BigInt], order: usize, transient: usize) -> bool {
    fit_at(terms, order, transient).is_some()
}

/// Largest transient tried at `order`, keeping at least `order + SLACK`
/// equations.
fn max_transient(len: usize, order: usize, max_order: usize) -> Option<usize> {
    len.checked_sub(2 * order + SLACK).map(|t| t.min(max_order))
}

/// Minimal-order linear recurrence with integer coefficients fitting every
/// term after a transient of at most `max_order` terms.
///
/// `Ok(None)` means no recurrence of order `<= max_order` fits; too short a
/// table is reported as [`Error::InsufficientData`] instead.
pub fn find_recurrence(terms: &[BigInt], max_order: usize) -> Result<Option<Recurrence>> {
    if max_order == 0 {
        return Err(Error::Precondition("max_order must be at least 1".into()));
    }
    let needed = required_terms(max_order);
    if terms.len() < needed {
        return Err(Error::InsufficientData { needed, got: terms.len() });
    }
    if terms.iter().all(Zero::is_zero) {
        // Trivially recurrent; any order-1 relation fits.
        let rec = Recurrence::new(vec![BigInt::one()], vec![BigInt::zero()], 2)?;
        return Ok(Some(rec));
    }
    for order in 1..=max_order {
        let Some(t_max) = max_transient(terms.len(), order, max_order) else {
            break;
        };
        // A fit valid from some start is valid from every later start, so
        // the longest transient decides whether this order works at all.
        let Some((lead, coeffs)) = fit_at(terms, order, t_max) else {
            continue;
        };
        if coeffs[order - 1].is_zero() {
            continue;
        }
        let mut from = t_max + order + 1;
        while from > order + 1 && holds_at(terms, &lead, &coeffs, from - 1) {
            from -= 1;
        }
        let initial = terms[..from - 1].to_vec();
        return Recurrence::with_lead(lead, coeffs, initial, from).map(Some);
    }
    Ok(None)
}

/// Generating function `sum a_n x^n` implied by `rec` and the table it was
/// mined from, in lowest terms.
pub fn to_gf(rec: &Recurrence, terms: &[BigInt]) -> Result<RationalGF> {
    let den = rec.denominator();
    let mut series = vec![BigInt::zero()];
    series.extend(terms.iter().cloned());
    let product = den.mul(&Poly::new(series));
    let keep = rec.valid_from() - 1;
    for degree in keep + 1..=terms.len() {
        if !product.coeff(degree).is_zero() {
            return Err(Error::CancellationFailure { degree });
        }
    }
    RationalGF::new(product.truncate(keep), den)
}

/// Extends `seed` by `count` terms.
pub fn predict(rec: &Recurrence, seed: &[BigInt], count: usize) -> Vec<BigInt> {
    rec.predict(seed, count)
}

/// Outcome of a rationality probe for one `k`. The result is numerical
/// evidence gathered from a finite table, not a proof.
#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub k: u32,
    pub terms_used: usize,
    pub holdout: usize,
    pub max_order: usize,
    pub recurrence: Option<Recurrence>,
    pub gf: Option<RationalGF>,
    /// All held-out terms predicted exactly.
    pub holdout_match: bool,
    pub state_space_size: usize,
}

impl ProbeReport {
    pub fn order(&self) -> Option<usize> {
        self.recurrence.as_ref().map(Recurrence::order)
    }
}

/// Default order bound for a table of `terms_n` terms.
pub fn default_max_order(terms_n: usize) -> usize {
    (terms_n.saturating_sub(SLACK) / 2).max(1)
}

/// Mines the first `terms_n` anchored counts for `k` and checks the result
/// on `holdout` further terms from the same sweep.
pub fn conjecture_probe(
    k: GapSpec,
    terms_n: usize,
    holdout: usize,
    max_order: Option<usize>,
) -> Result<ProbeReport> {
    let max_order = max_order.unwrap_or_else(|| default_max_order(terms_n));
    let needed = required_terms(max_order);
    if terms_n < needed {
        return Err(Error::InsufficientData { needed, got: terms_n });
    }
    let table = frontier::term_table(k, Variant::Anchored, (terms_n + holdout) as u32);
    let all: Vec<BigInt> = table.terms().iter().map(|c| BigInt::from(c.clone())).collect();
    let (train, held) = all.split_at(terms_n);
    let recurrence = find_recurrence(train, max_order)?;
    let (gf, holdout_match) = match &recurrence {
        Some(rec) => {
            let gf = to_gf(rec, train)?;
            let predicted = rec.predict(train, holdout);
            debug_assert_eq!(expand_gf(&gf, terms_n), train);
            (Some(gf), predicted == held)
        }
        None => (None, false),
    };
    Ok(ProbeReport {
        k: k.get(),
        terms_used: terms_n,
        holdout,
        max_order,
        recurrence,
        gf,
        holdout_match,
        state_space_size: frontier::state_space_size(k),
    })
}

/// Sign-normalized denominator of a recurrence as `1 - c_1 x - ...`, useful
/// for reports.
pub fn denominator_coeffs(rec: &Recurrence) -> Vec<BigInt> {
    let d = rec.denominator();
    let mut v = d.coeffs().to_vec();
    if v.first().is_some_and(Signed::is_negative) {
        v.iter_mut().for_each(|c| *c = -&*c);
    }
    v
}
