//! Mallows sampling with the normalized dispersion parameter.

use rand::Rng;

/// Expected number of inversions of a Mallows(φ) sample over `m` elements.
///
/// Repeated insertion places the i-th element k slots from the end with
/// probability ∝ φ^k, independently for each i, so the expectation is a sum
/// of per-step means.
pub fn expected_swap_distance(phi: f64, m: usize) -> f64 {
    let mut total = 0.0;
    for i in 1..=m {
        let (mut num, mut den, mut w) = (0.0, 0.0, 1.0);
        for k in 0..i {
            num += k as f64 * w;
            den += w;
            w *= phi;
        }
        total += num / den;
    }
    total
}

/// The φ whose expected swap distance is `norm_phi · m(m−1)/4`.
///
/// Expected distance is increasing in φ, so bisection applies. The ends are
/// exact: 0 maps to 0 and 1 maps to 1.
pub fn norm_phi_to_phi(norm_phi: f64, m: usize) -> f64 {
    if norm_phi <= 0.0 {
        return 0.0;
    }
    if norm_phi >= 1.0 {
        return 1.0;
    }
    if m < 2 {
        return norm_phi;
    }
    let target = norm_phi * (m * (m - 1)) as f64 / 4.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let e = expected_swap_distance(mid, m);
        if (e - target).abs() <= 1e-10 {
            break;
        }
        if e < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

/// One Mallows sample around `center` with dispersion `phi`.
pub fn mallows_sample_phi<R: Rng + ?Sized>(center: &[usize], phi: f64, rng: &mut R) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(center.len());
    for (i, &x) in center.iter().enumerate() {
        // weights φ^k for inserting k slots before the end, k = 0..=i
        let mut total = 0.0;
        let mut w = 1.0;
        for _ in 0..=i {
            total += w;
            w *= phi;
        }
        let u = rng.random::<f64>() * total;
        let (mut acc, mut w, mut k) = (0.0, 1.0, 0usize);
        while k < i {
            acc += w;
            if u < acc {
                break;
            }
            w *= phi;
            k += 1;
        }
        out.insert(i - k, x);
    }
    out
}

/// One sample from the normalized Mallows model around `center`.
pub fn mallows_sample<R: Rng + ?Sized>(center: &[usize], norm_phi: f64, rng: &mut R) -> Vec<usize> {
    mallows_sample_phi(center, norm_phi_to_phi(norm_phi, center.len()), rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutual_attraction::swap_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn endpoints_are_exact() {
        assert_eq!(norm_phi_to_phi(0.0, 10), 0.0);
        assert_eq!(norm_phi_to_phi(1.0, 10), 1.0);
        assert_eq!(expected_swap_distance(1.0, 10), 22.5);
        assert_eq!(expected_swap_distance(0.0, 10), 0.0);
    }

    #[test]
    fn conversion_hits_target() {
        for &(np, m) in &[(0.2, 10usize), (0.5, 10), (0.8, 7), (0.5, 3)] {
            let phi = norm_phi_to_phi(np, m);
            let e = expected_swap_distance(phi, m);
            assert!((e - np * (m * (m - 1)) as f64 / 4.0).abs() < 1e-9, "{np} {m}");
        }
    }

    #[test]
    fn zero_dispersion_returns_center() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = vec![4, 2, 0, 1, 3];
        for _ in 0..20 {
            assert_eq!(mallows_sample(&c, 0.0, &mut rng), c);
        }
    }

    #[test]
    fn empirical_mean_swap_distance() {
        let m = 10;
        let center: Vec<usize> = (0..m).collect();
        let phi = norm_phi_to_phi(0.5, m);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples = 10_000;
        let ds: Vec<f64> = (0..samples)
            .map(|_| swap_distance(&center, &mallows_sample_phi(&center, phi, &mut rng)).unwrap() as f64)
            .collect();
        let mean = ds.iter().sum::<f64>() / samples as f64;
        let var = ds.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let se = (var / samples as f64).sqrt();
        assert!((mean - 11.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    fn frequencies(phi: f64, samples: usize, seed: u64) -> std::collections::HashMap<Vec<usize>, usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = std::collections::HashMap::new();
        for _ in 0..samples {
            *f.entry(mallows_sample_phi(&[0, 1, 2], phi, &mut rng)).or_insert(0) += 1;
        }
        f
    }

    #[test]
    fn uniform_at_full_dispersion() {
        let samples = 10_000;
        let f = frequencies(1.0, samples, 5);
        assert_eq!(f.len(), 6);
        let exp = samples as f64 / 6.0;
        let chi2: f64 = f.values().map(|&o| (o as f64 - exp).powi(2) / exp).sum();
        // 5 degrees of freedom, 99.9th percentile
        assert!(chi2 < 20.52, "chi2 {chi2}");
    }

    #[test]
    fn probability_ratio_follows_phi() {
        let samples = 20_000;
        let f = frequencies(0.5, samples, 8);
        let zero = f[&vec![0, 1, 2]] as f64;
        let one = (f[&vec![1, 0, 2]] + f[&vec![0, 2, 1]]) as f64 / 2.0;
        let ratio = one / zero;
        // P(swap-0) = 1/Z with Z = (1)(1+φ)(1+φ+φ²) = 2.625
        let p0 = 1.0 / 2.625;
        let p1 = 0.5 / 2.625;
        // delta-method standard error of the ratio, with the multinomial
        // covariance between the two frequencies included
        let n = samples as f64;
        let se = ratio * ((1.0 - p0) / (n * p0) + (1.0 + 2.0 * p1) / (2.0 * n * p1)).sqrt();
        assert!((ratio - 0.5).abs() < 3.0 * se, "ratio {ratio} se {se}");
    }
}
