use alloc::vec::Vec;

fn dcg(grades: impl Iterator<Item = u8>) -> f64 {
    grades
        .enumerate()
        .map(|(i, g)| (libm::exp2(g as f64) - 1.0) / libm::log2(i as f64 + 2.0))
        .sum()
}

/// NDCG at depth `k` of a ranking whose documents carry `ranking` grades.
/// `all` holds every grade judged for the query and defines the ideal
/// ordering. Queries without any relevant document score 0.
pub fn ndcg_at_k(ranking: &[u8], all: &[u8], k: usize) -> f64 {
    let mut ideal: Vec<u8> = all.to_vec();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = dcg(ideal.into_iter().take(k));
    if idcg == 0.0 {
        return 0.0;
    }
    dcg(ranking.iter().copied().take(k)) / idcg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        assert!((ndcg_at_k(&[2, 0, 1], &[2, 1, 0], 3) - 0.963_940_433_316_653).abs() < 1e-12);
        assert_eq!(ndcg_at_k(&[2, 1, 0], &[0, 1, 2], 3), 1.0);
        assert_eq!(ndcg_at_k(&[0, 0], &[0, 0], 2), 0.0);
        assert_eq!(ndcg_at_k(&[], &[], 10), 0.0);
        // only the top position counts at depth 1
        assert_eq!(ndcg_at_k(&[1, 0], &[1, 0], 1), 1.0);
        assert_eq!(ndcg_at_k(&[0, 1], &[1, 0], 1), 0.0);
    }

    #[test]
    fn bounded_by_one() {
        let all = [3u8, 0, 2, 4, 1, 1, 0, 2];
        let mut r = all;
        for shift in 0..8 {
            r.rotate_left(1);
            let v = ndcg_at_k(&r, &all, 5);
            assert!((0.0..=1.0 + 1e-12).contains(&v), "{shift}: {v}");
        }
    }
}
