use num_bigint::BigInt;
use proptest::prelude::*;

use kbound::closed_form::closed_table;
use kbound::enumerate::{count_brute, enumerate};
use kbound::frontier::{canonicalize, count_dp};
use kbound::oeis::{align, compare, parse_bfile, to_bfile};
use kbound::closed_form::expand_gf;
use kbound::seqmine::{find_recurrence, fits, to_gf};
use kbound::structure::{decompose_k2, k2_decompositions, reconstruct_k2, K2Decomposition};
use kbound::{Count, CountTable, GapSpec, Permutation, Provenance, Variant};

fn gap(k: u32) -> GapSpec {
    GapSpec::new(k).unwrap()
}

fn big(v: &[Count]) -> Vec<BigInt> {
    v.iter().map(|c| BigInt::from(c.clone())).collect()
}

fn arb_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|v| Permutation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversal_preserves_boundedness(p in arb_permutation(12), k in 1u32..6) {
        prop_assert_eq!(p.is_k_bounded(gap(k)), p.reversed().is_k_bounded(gap(k)));
        prop_assert_eq!(p.reversed().reversed(), p.clone());
        let g = p.gaps();
        let mut rg: Vec<i64> = p.reversed().gaps().iter().map(|x| -x).collect();
        rg.reverse();
        prop_assert_eq!(g, rg);
    }

    #[test]
    fn boundedness_is_monotone_in_k(p in arb_permutation(12), k in 1u32..8) {
        if p.is_k_bounded(gap(k)) {
            prop_assert!(p.is_k_bounded(gap(k + 1)));
        }
    }

    #[test]
    fn counts_grow_with_k(k in 1u32..5, n in 1u32..10) {
        for variant in [Variant::Anchored, Variant::Free] {
            prop_assert!(count_dp(gap(k), n, variant).unwrap() <= count_dp(gap(k + 1), n, variant).unwrap());
        }
    }

    #[test]
    fn endpoint_counts_are_symmetric(k in 1u32..5, n in 2u32..10, s in 1u32..10, e in 1u32..10) {
        prop_assume!(s <= n && e <= n && s != e);
        let fwd = count_dp(gap(k), n, Variant::Endpoints { start: s, end: e }).unwrap();
        let back = count_dp(gap(k), n, Variant::Endpoints { start: e, end: s }).unwrap();
        let mirrored = count_dp(gap(k), n, Variant::Endpoints { start: n + 1 - s, end: n + 1 - e }).unwrap();
        prop_assert_eq!(&fwd, &back);
        prop_assert_eq!(&fwd, &mirrored);
    }

    #[test]
    fn enumerated_permutations_satisfy_their_contract(k in 1u32..5, n in 1u32..9) {
        let mut prev: Option<Permutation> = None;
        for p in enumerate(gap(k), n, Variant::Anchored).unwrap() {
            prop_assert!(p.is_k_bounded(gap(k)) && p.is_anchored());
            if let Some(q) = &prev {
                prop_assert!(q.entries() < p.entries());
            }
            prev = Some(p);
        }
    }

    #[test]
    fn anchored_set_is_closed_under_reverse_complement(k in 1u32..5, n in 1u32..9) {
        let all: Vec<Permutation> = enumerate(gap(k), n, Variant::Anchored).unwrap().collect();
        for p in &all {
            let rc: Vec<u32> = p.entries().iter().rev().map(|&v| n + 1 - v).collect();
            prop_assert!(all.contains(&Permutation::new(rc).unwrap()));
        }
    }

    #[test]
    fn canonicalize_is_idempotent_and_keeps_pairing(slots in prop::collection::vec(0u8..12, 0..8)) {
        let c = canonicalize(&slots);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(c.len(), slots.len());
        for i in 0..slots.len() {
            prop_assert_eq!(slots[i] < 3, c[i] < 3);
            if slots[i] < 3 {
                prop_assert_eq!(slots[i], c[i]);
            }
            for j in 0..slots.len() {
                if slots[i] >= 3 && slots[j] >= 3 {
                    prop_assert_eq!(slots[i] == slots[j], c[i] == c[j]);
                }
            }
        }
    }

    #[test]
    fn k2_round_trip(n in 1u32..16, pick in any::<prop::sample::Index>()) {
        let decs = k2_decompositions(n);
        let d = &decs[pick.index(decs.len())];
        let p = reconstruct_k2(d).unwrap();
        prop_assert_eq!(&decompose_k2(&p).unwrap(), d);
        prop_assert_eq!(K2Decomposition::new(n, d.swaps().iter().copied()).unwrap(), d.clone());
    }

    #[test]
    fn miner_is_scale_invariant(k in 1u32..4, c in 1i64..50) {
        let terms = big(closed_table(gap(k), 40).unwrap().terms());
        let scaled: Vec<BigInt> = terms.iter().map(|t| t * c).collect();
        let a = find_recurrence(&terms, 12).unwrap().unwrap();
        let b = find_recurrence(&scaled, 12).unwrap().unwrap();
        prop_assert_eq!(a.coefficients(), b.coefficients());
        prop_assert_eq!(a.lead(), b.lead());
    }

    #[test]
    fn miner_tolerates_dropped_prefix(k in 2u32..4, drop in 0usize..6) {
        let terms = big(closed_table(gap(k), 60).unwrap().terms());
        let a = find_recurrence(&terms, 16).unwrap().unwrap();
        let b = find_recurrence(&terms[drop..], 16).unwrap().unwrap();
        prop_assert_eq!(a.coefficients(), b.coefficients());
        prop_assert!(b.valid_from() <= a.valid_from());
    }

    #[test]
    fn miner_tolerates_zero_prefix(k in 2u32..4, zeros in 1usize..6) {
        let terms = big(closed_table(gap(k), 60).unwrap().terms());
        let mut padded = vec![BigInt::from(0); zeros];
        padded.extend(terms.iter().cloned());
        let a = find_recurrence(&terms, 16).unwrap().unwrap();
        let b = find_recurrence(&padded, 16).unwrap().unwrap();
        prop_assert_eq!(a.denominator(), b.denominator());
    }

    #[test]
    fn compare_mismatch_is_symmetric(at in 0usize..30, bump in 1u64..1000) {
        let ours = closed_table(gap(3), 30).unwrap();
        let mut terms = ours.terms().to_vec();
        terms[at] += bump;
        let theirs = CountTable::with_offset(None, None, Provenance::Oeis, 1, terms);
        let ab = align(&ours, &theirs, 0);
        let ba = align(&theirs, &ours, 0);
        prop_assert_eq!(ab.first_mismatch, Some(at as i64 + 1));
        prop_assert_eq!(ab.first_mismatch, ba.first_mismatch);
        prop_assert_eq!(ab.matched, ba.matched);
    }

    #[test]
    fn bfile_round_trip(offset in -3i64..4, values in prop::collection::vec(any::<u64>(), 0..30)) {
        let terms: Vec<Count> = values.into_iter().map(Count::from).collect();
        let t = CountTable::with_offset(None, None, Provenance::Oeis, offset, terms);
        let back = parse_bfile(&to_bfile(&t)).unwrap();
        prop_assert_eq!(back.terms(), t.terms());
        if !t.is_empty() {
            prop_assert_eq!(back.offset(), offset);
        }
    }

    #[test]
    fn compare_is_antisymmetric_in_shift(offset in -2i64..5) {
        let ours = closed_table(gap(3), 30).unwrap();
        let theirs = CountTable::with_offset(None, None, Provenance::Oeis, offset, ours.terms().to_vec());
        let ab = compare(&ours, &theirs);
        let ba = compare(&theirs, &ours);
        prop_assert!(ab.best.is_full_match() && ba.best.is_full_match());
        prop_assert_eq!(ab.best.shift, offset - 1);
        prop_assert_eq!(ba.best.shift, 1 - offset);
        prop_assert_eq!(ab.best.overlap, ba.best.overlap);
    }

    #[test]
    fn variant_text_round_trip(s in 1u32..50, e in 1u32..50) {
        for v in [Variant::Anchored, Variant::Free, Variant::Endpoints { start: s, end: e }] {
            prop_assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
    }
}

#[test]
fn brute_and_sweep_agree_on_random_endpoints() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    runner
        .run(&(1u32..5, 2u32..9, 1u32..9, 1u32..9), |(k, n, s, e)| {
            if s > n || e > n || s == e {
                return Ok(());
            }
            let v = Variant::Endpoints { start: s, end: e };
            prop_assert_eq!(count_dp(gap(k), n, v).unwrap(), count_brute(gap(k), n, v).unwrap());
            Ok(())
        })
        .unwrap();
}

#[test]
fn mined_recurrences_round_trip_and_are_minimal() {
    for (k, len, max_order) in [(1, 30, 8), (2, 40, 8), (3, 60, 12), (4, 80, 38)] {
        let terms = big(closed_or_dp(k, len).terms());
        let rec = find_recurrence(&terms, max_order).unwrap().unwrap();
        let gf = to_gf(&rec, &terms).unwrap();
        assert_eq!(expand_gf(&gf, terms.len()), terms, "k={k}");
        let r = rec.order();
        if r == 1 {
            continue;
        }
        let t_max = (len as usize).saturating_sub(2 * (r - 1) + 4).min(max_order);
        for t in 0..=t_max {
            assert!(!fits(&terms, r - 1, t), "k={k}: order {} fits with transient {t}", r - 1);
        }
    }
}

fn closed_or_dp(k: u32, len: u32) -> CountTable {
    if k <= 3 {
        closed_table(gap(k), len).unwrap()
    } else {
        kbound::frontier::term_table(gap(k), Variant::Anchored, len)
    }
}
