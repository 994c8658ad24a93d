use rand::Rng;

use super::{BoxSpec, PointSet};
use crate::rng::{rng_from_seed, SimRng};

/// Samples a unit-intensity Poisson process in `bounds`.
///
/// The point count is Poisson with mean equal to the box volume, and points
/// are independent and uniform. The result depends only on `(bounds, seed)`.
pub fn sample_poisson(bounds: BoxSpec, seed: u64) -> PointSet {
    let mut rng = rng_from_seed(seed);
    let count = poisson_count(&mut rng, bounds.intensity());
    let side = bounds.side();
    let coords: Vec<f64> = (0..count * bounds.dimension())
        .map(|_| rng.gen::<f64>() * side)
        .collect();
    PointSet::from_raw(bounds, coords, seed)
}

/// Draws a Poisson variate: sequential inversion below mean 30, PTRS above.
pub fn poisson_count(rng: &mut SimRng, mean: f64) -> usize {
    if mean <= 0.0 {
        0
    } else if mean < 30.0 {
        poisson_inversion(rng, mean)
    } else {
        poisson_ptrs(rng, mean)
    }
}

fn poisson_inversion(rng: &mut SimRng, mean: f64) -> usize {
    let u: f64 = rng.gen();
    let mut k = 0usize;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 && cdf < u {
            // rounding left the tail unreachable
            break;
        }
    }
    k
}

/// Hörmann's transformed rejection with squeeze.
fn poisson_ptrs(rng: &mut SimRng, mean: f64) -> usize {
    let slam = mean.sqrt();
    let loglam = mean.ln();
    let b = 0.931 + 2.53 * slam;
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let vr = 0.9277 - 3.6224 / (b - 2.0);
    loop {
        let u = rng.gen::<f64>() - 0.5;
        let v: f64 = rng.gen();
        let us = 0.5 - u.abs();
        let k = ((2.0 * a / us + b) * u + mean + 0.43).floor();
        if us >= 0.07 && v <= vr {
            return k as usize;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        let lhs = v.ln() + inv_alpha.ln() - (a / (us * us) + b).ln();
        let rhs = -mean + k * loglam - ln_gamma(k + 1.0);
        if lhs <= rhs {
            return k as usize;
        }
    }
}

/// Lanczos approximation of ln Γ(x) for x > 0.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn ln_gamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            fact *= n as f64;
            assert!((ln_gamma(n as f64 + 1.0) - fact.ln()).abs() < 1e-10, "n={n}");
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-10);
    }

    #[test]
    fn same_seed_same_points() {
        let b = BoxSpec::planar(200.0).unwrap();
        let a = sample_poisson(b, 5);
        let c = sample_poisson(b, 5);
        assert_eq!(a.coords(), c.coords());
        assert_ne!(a.coords(), sample_poisson(b, 6).coords());
    }

    #[test]
    fn mean_count_over_many_seeds() {
        let b = BoxSpec::planar(100.0).unwrap();
        let total: usize = (0..10_000u64).map(|s| sample_poisson(b, s).len()).sum();
        let mean = total as f64 / 10_000.0;
        assert!((mean - 100.0).abs() <= 3.0, "mean {mean}");
    }

    fn moments(mean: f64, draws: usize) -> (f64, f64) {
        let mut rng = rng_from_seed(mean.to_bits());
        let xs: Vec<f64> = (0..draws).map(|_| poisson_count(&mut rng, mean) as f64).collect();
        let m = xs.iter().sum::<f64>() / draws as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (draws - 1) as f64;
        (m, v)
    }

    #[test]
    fn both_samplers_have_poisson_moments() {
        for &mean in &[0.5, 4.0, 29.5, 30.0, 250.0, 65536.0] {
            let draws = 40_000;
            let (m, v) = moments(mean, draws);
            let se = (mean / draws as f64).sqrt();
            assert!((m - mean).abs() < 5.0 * se, "mean {mean}: got {m}");
            assert!((v / mean - 1.0).abs() < 0.05, "mean {mean}: variance {v}");
        }
    }

    #[test]
    fn coordinates_inside_box() {
        let b = BoxSpec::new(300.0, 3).unwrap();
        let ps = sample_poisson(b, 11);
        assert!(ps.points().all(|p| b.contains(p)));
    }
}
