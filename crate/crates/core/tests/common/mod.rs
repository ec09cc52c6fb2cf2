//! Seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rocbird::{Dataset, DichotomousStats};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(k: usize) -> Vec<String> {
    (0..k).map(|c| format!("c{c}")).collect()
}

/// Binary dataset with 2..=max_n instances, both classes present, and scores
/// drawn from a small grid so that ties are common.
pub fn tied_binary(rng: &mut ChaCha8Rng, max_n: usize) -> Dataset {
    let n = rng.gen_range(2..=max_n);
    let levels = rng.gen_range(2..=12);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    labels[0] = 0;
    labels[1] = 1;
    let rows = labels
        .iter()
        .map(|&y| {
            // Mildly informative so curves are not all on the diagonal.
            let shift = if y == 1 { rng.gen_range(0..3) } else { 0 };
            let s = (rng.gen_range(0..levels) + shift) as f64 / levels as f64;
            vec![1.0 - s, s]
        })
        .collect();
    Dataset::new(names(2), labels, rows).unwrap()
}

/// K-class dataset with every class present and scores on a coarse grid.
pub fn tied_multiclass(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Dataset {
    assert!(n >= k);
    let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    for (c, l) in labels.iter_mut().take(k).enumerate() {
        *l = c;
    }
    let rows = labels
        .iter()
        .map(|&y| {
            (0..k)
                .map(|c| {
                    let bump = if c == y { rng.gen_range(0..4) } else { 0 };
                    (rng.gen_range(0..10) + bump) as f64 / 10.0
                })
                .collect()
        })
        .collect();
    Dataset::new(names(k), labels, rows).unwrap()
}

/// Balanced K-class dataset whose scores ignore the labels.
pub fn chance_dataset(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Dataset {
    let labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    let rows = (0..n)
        .map(|_| (0..k).map(|_| rng.gen::<f64>()).collect())
        .collect();
    Dataset::new(names(k), labels, rows).unwrap()
}

/// Random valid stats with positive margins: half from small integer counts
/// (zero cells included), half from continuous cells.
pub fn fuzz_stats(rng: &mut ChaCha8Rng) -> DichotomousStats {
    loop {
        let cells: [f64; 4] = if rng.gen_bool(0.5) {
            std::array::from_fn(|_| rng.gen_range(0..=50) as f64)
        } else {
            std::array::from_fn(|_| rng.gen::<f64>())
        };
        let total: f64 = cells.iter().sum();
        let (rp, rn) = (cells[0] + cells[2], cells[1] + cells[3]);
        if rp == 0.0 || rn == 0.0 {
            continue;
        }
        let [tp, fp, fn_, tn] = cells.map(|v| v / total);
        return DichotomousStats::new(tp, fp, fn_, tn).unwrap();
    }
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half, by enumerating every pair.
pub fn pairwise_auc(scores: &[f64], positive: &[bool]) -> f64 {
    let (mut halves, mut pairs) = (0u64, 0u64);
    for (i, &si) in scores.iter().enumerate() {
        if !positive[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if positive[j] {
                continue;
            }
            pairs += 1;
            halves += if si > sj {
                2
            } else if si == sj {
                1
            } else {
                0
            };
        }
    }
    halves as f64 / (2 * pairs) as f64
}

pub fn one_vs_rest(dataset: &Dataset, c: usize) -> (Vec<f64>, Vec<bool>) {
    let scores = dataset.column(c).collect();
    let positive = dataset.labels().iter().map(|&y| y == c).collect();
    (scores, positive)
}

/// ROC points (fpr, tpr) of a strict `score > theta` sweep, recomputed from
/// scratch for every distinct threshold.
pub fn brute_roc(scores: &[f64], positive: &[bool]) -> Vec<(f64, f64)> {
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    thresholds.push(f64::NEG_INFINITY);
    let rp = positive.iter().filter(|&&p| p).count() as f64;
    let rn = positive.len() as f64 - rp;
    thresholds
        .iter()
        .map(|&t| {
            let tp = scores
                .iter()
                .zip(positive)
                .filter(|(&s, &p)| p && s > t)
                .count() as f64;
            let fp = scores
                .iter()
                .zip(positive)
                .filter(|(&s, &p)| !p && s > t)
                .count() as f64;
            (fp / rn, tp / rp)
        })
        .collect()
}
