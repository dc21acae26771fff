use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` Latin-hypercube points over the box `dims`.
///
/// Along every dimension the `n` values fall in distinct strata of width
/// `(high − low)/n`. The result is a function of `seed`.
pub fn latin_hypercube_sample(n: usize, dims: &[(f64, f64)], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![Vec::with_capacity(dims.len()); n];
    for &(lo, hi) in dims {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(&mut rng);
        for (point, s) in points.iter_mut().zip(strata) {
            let u: f64 = rng.random();
            point.push(lo + (hi - lo) * (s as f64 + u) / n as f64);
        }
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_sample_per_stratum() {
        let pts = latin_hypercube_sample(4, &[(0.0, 1.0)], 3);
        let mut strata: Vec<usize> = pts.iter().map(|p| (p[0] * 4.0).floor() as usize).collect();
        strata.sort();
        assert_eq!(strata, vec![0, 1, 2, 3]);
    }

    #[test]
    fn single_sample_stays_in_range() {
        let pts = latin_hypercube_sample(1, &[(2.0, 5.0)], 0);
        assert!(pts[0][0] >= 2.0 && pts[0][0] <= 5.0);
    }

    #[test]
    fn deterministic_per_seed() {
        let dims = [(0.0, 1.0), (-3.0, 3.0)];
        assert_eq!(
            latin_hypercube_sample(10, &dims, 9),
            latin_hypercube_sample(10, &dims, 9)
        );
        assert_ne!(
            latin_hypercube_sample(10, &dims, 9),
            latin_hypercube_sample(10, &dims, 10)
        );
    }
}
