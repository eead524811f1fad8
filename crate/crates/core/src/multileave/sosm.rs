//! Sample-only-scored multileaving.
//!
//! Construction: at every position a ranker with unplaced documents is drawn
//! uniformly and its best unplaced document is appended. Scoring: each
//! ranker's ordering is restricted to the documents actually shown, and a
//! click on `d` credits the ranker `1 / rank(d)` in that restriction.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use super::{ClickVector, CreditVector, DocId, MultileavedList, RankedList};
use crate::env::resolve;
use crate::model::{ArmId, DuelOutcome};
use crate::{Error, Result};

/// Merges `lists` into a list of at most `k` documents.
pub fn sosm_multileave(lists: &[RankedList], k: usize, rng: &mut dyn RngCore) -> MultileavedList {
    let mut out: Vec<DocId> = Vec::with_capacity(k);
    let mut next = vec![0usize; lists.len()];
    let mut live: Vec<usize> = (0..lists.len()).filter(|&r| !lists[r].is_empty()).collect();
    while out.len() < k && !live.is_empty() {
        let pick = rng.random_range(0..live.len());
        let r = live[pick];
        let docs = lists[r].docs();
        while next[r] < docs.len() && out.contains(&docs[next[r]]) {
            next[r] += 1;
        }
        if next[r] == docs.len() {
            live.swap_remove(pick);
            continue;
        }
        out.push(docs[next[r]]);
        next[r] += 1;
    }
    MultileavedList(out)
}

/// Rank (1-based) of every sample document in `full` restricted to the
/// sample. Documents missing from `full` come last, in sample order.
pub fn restricted_ranks(full: &RankedList, sample: &MultileavedList) -> Vec<usize> {
    let mut keys: Vec<(bool, usize, usize)> = sample
        .docs()
        .iter()
        .enumerate()
        .map(|(idx, d)| match full.docs().iter().position(|x| x == d) {
            Some(pos) => (false, pos, idx),
            None => (true, idx, idx),
        })
        .collect();
    keys.sort_unstable();
    let mut ranks = vec![0; sample.len()];
    for (rank, &(_, _, idx)) in keys.iter().enumerate() {
        ranks[idx] = rank + 1;
    }
    ranks
}

/// Rank of `d` in `full` restricted to the sample's documents.
pub fn restricted_rank(full: &RankedList, sample: &MultileavedList, d: DocId) -> Result<usize> {
    let idx = sample
        .docs()
        .iter()
        .position(|&x| x == d)
        .ok_or(Error::DocumentNotInSample)?;
    Ok(restricted_ranks(full, sample)[idx])
}

/// Credit of each ranker: sum of reciprocal restricted ranks of clicked documents.
pub fn sosm_score(sample: &MultileavedList, clicks: &ClickVector, lists: &[RankedList]) -> CreditVector {
    if clicks.is_empty() {
        return vec![0.0; lists.len()];
    }
    lists
        .iter()
        .map(|full| {
            let ranks = restricted_ranks(full, sample);
            clicks
                .iter()
                .filter(|&&p| p < ranks.len())
                .map(|&p| 1.0 / ranks[p] as f64)
                .sum()
        })
        .collect()
}

/// One duel per unordered pair of rankers; the higher credit wins and ties
/// are settled by a fair coin. Arms are the positions in `credits`.
pub fn infer_pairwise_wins(credits: &[f64], rng: &mut dyn RngCore) -> Vec<DuelOutcome> {
    let n = credits.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(resolve(ArmId(i), credits[i], ArmId(j), credits[j], rng));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn list(ids: &[u32]) -> RankedList {
        ids.iter().map(|&i| DocId(i)).collect()
    }

    fn sample(ids: &[u32]) -> MultileavedList {
        MultileavedList(ids.iter().map(|&i| DocId(i)).collect())
    }

    #[test]
    fn identical_lists_give_common_prefix() {
        let l = list(&[4, 2, 9, 7, 1]);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sosm_multileave(&[l.clone(), l.clone()], 3, &mut rng);
            assert_eq!(m.docs(), &l.docs()[..3]);
            let m = sosm_multileave(&[l.clone(), l.clone()], 10, &mut rng);
            assert_eq!(m.docs(), l.docs());
        }
    }

    #[test]
    fn disjoint_lists_enumerate_legal_interleavings() {
        // d1=1,d2=2 from A; d3=3,d4=4 from B
        let (a, b) = (list(&[1, 2]), list(&[3, 4]));
        let legal: [[u32; 4]; 6] = [
            [1, 2, 3, 4],
            [1, 3, 2, 4],
            [1, 3, 4, 2],
            [3, 1, 2, 4],
            [3, 1, 4, 2],
            [3, 4, 1, 2],
        ];
        let mut seen = [false; 6];
        for seed in 0..400 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sosm_multileave(&[a.clone(), b.clone()], 4, &mut rng);
            let got: Vec<u32> = m.docs().iter().map(|d| d.0).collect();
            let idx = legal
                .iter()
                .position(|l| l[..] == got[..])
                .expect("illegal interleaving");
            seen[idx] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn depth_one_takes_a_top_document() {
        let (a, b) = (list(&[5, 6]), list(&[7, 8]));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let m = sosm_multileave(&[a.clone(), b.clone()], 1, &mut rng);
            assert_eq!(m.len(), 1);
            assert!(m.docs()[0] == DocId(5) || m.docs()[0] == DocId(7));
        }
    }

    #[test]
    fn restricted_rank_examples() {
        // x=10, b=11, a=12, y=13, c=14
        let full = list(&[10, 11, 12, 13, 14]);
        let s = sample(&[12, 11, 14]);
        assert_eq!(restricted_rank(&full, &s, DocId(11)).unwrap(), 1);
        assert_eq!(restricted_rank(&full, &s, DocId(14)).unwrap(), 3);
        assert_eq!(restricted_rank(&full, &sample(&[13]), DocId(13)).unwrap(), 1);
        assert_eq!(restricted_rank(&full, &s, DocId(10)), Err(Error::DocumentNotInSample));
        // absent documents go last, in sample order
        let s = sample(&[99, 12, 98]);
        assert_eq!(restricted_ranks(&full, &s), vec![2, 1, 3]);
    }

    #[test]
    fn score_examples() {
        let full = list(&[10, 11, 12, 13, 14]);
        let s = sample(&[12, 11, 14]);
        assert_eq!(sosm_score(&s, &vec![], std::slice::from_ref(&full)), vec![0.0]);
        // clicks on a (pos 0) and c (pos 2): restriction [b, a, c]
        let credit = sosm_score(&s, &vec![0, 2], std::slice::from_ref(&full));
        assert!((credit[0] - (0.5 + 1.0 / 3.0)).abs() < 1e-12);
        let twin = sosm_score(&s, &vec![1], &[full.clone(), full]);
        assert_eq!(twin[0], twin[1]);
    }

    #[test]
    fn pairwise_inference() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = infer_pairwise_wins(&[0.8, 0.3], &mut rng);
        assert_eq!(out, vec![DuelOutcome::new(ArmId(0), ArmId(1))]);
        let out = infer_pairwise_wins(&[0.9, 0.5, 0.1], &mut rng);
        assert_eq!(
            out,
            vec![
                DuelOutcome::new(ArmId(0), ArmId(1)),
                DuelOutcome::new(ArmId(0), ArmId(2)),
                DuelOutcome::new(ArmId(1), ArmId(2)),
            ]
        );
        let n = 100_000;
        let zero_wins = (0..n)
            .filter(|_| infer_pairwise_wins(&[0.5, 0.5], &mut rng)[0].winner == ArmId(0))
            .count();
        assert!((zero_wins as f64 / n as f64 - 0.5).abs() < 0.005);
    }

    fn arb_lists() -> impl Strategy<Value = Vec<Vec<u32>>> {
        proptest::collection::vec(
            proptest::sample::subsequence((0u32..25).collect::<Vec<_>>(), 1..15).prop_shuffle(),
            2..6,
        )
    }

    proptest! {
        #[test]
        fn multileave_is_well_formed(lists in arb_lists(), seed in 0u64..1000, k in 1usize..12) {
            let lists: Vec<RankedList> = lists.iter().map(|l| list(l)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sosm_multileave(&lists, k, &mut rng);
            prop_assert!(m.len() <= k);
            let mut seen = m.docs().to_vec();
            seen.sort();
            seen.dedup();
            prop_assert_eq!(seen.len(), m.len());
            for d in m.docs() {
                prop_assert!(lists.iter().any(|l| l.docs().contains(d)));
            }
            let union: alloc::collections::BTreeSet<_> = lists.iter().flat_map(|l| l.docs().iter().copied()).collect();
            prop_assert_eq!(m.len(), k.min(union.len()));
        }

        #[test]
        fn score_is_permutation_equivariant(lists in arb_lists(), seed in 0u64..1000, clicks in proptest::collection::btree_set(0usize..10, 0..5)) {
            let lists: Vec<RankedList> = lists.iter().map(|l| list(l)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sosm_multileave(&lists, 10, &mut rng);
            let clicks: ClickVector = clicks.into_iter().filter(|&c| c < m.len()).collect();
            let base = sosm_score(&m, &clicks, &lists);
            let mut rev = lists.clone();
            rev.reverse();
            let mut flipped = sosm_score(&m, &clicks, &rev);
            flipped.reverse();
            prop_assert_eq!(base.clone(), flipped);
            prop_assert!(base.iter().all(|&c| c >= 0.0));
        }
    }
}
