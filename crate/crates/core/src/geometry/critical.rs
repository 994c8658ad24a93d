//! Critical radii: the planar closed form and the boundary-aware root of
//! `E(r) = ∫ exp(-|B(x, r) ∩ box|) dx = 1`.

use super::{BoxSpec, Norm};
use crate::error::{Error, Result};

/// Default quadrature resolution per axis.
pub const DEFAULT_RESOLUTION: usize = 256;

/// `sqrt(ln n / pi)`: the radius at which `pi r^2 = ln n`.
pub fn r0_planar(intensity_n: f64) -> Result<f64> {
    if !(intensity_n > 1.0) {
        return Err(Error::InvalidParameter(format!("need n > 1, got {intensity_n}")));
    }
    Ok((intensity_n.ln() / std::f64::consts::PI).sqrt())
}

/// Volume of the `r`-ball around `center`, clipped to the box.
///
/// Midpoint grid over the first `d - 1` axes of the (clipped) bounding cube,
/// with the ball's extent along the last axis computed exactly per cell.
pub fn ball_box_volume(
    center: &[f64],
    r: f64,
    bounds: &BoxSpec,
    norm: Norm,
    resolution: usize,
) -> Result<f64> {
    if center.len() != bounds.dimension() {
        return Err(Error::DimensionMismatch { expected: bounds.dimension(), got: center.len() });
    }
    if !bounds.contains(center) {
        return Err(Error::OutsideBox(center.to_vec()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    Ok(clipped_ball_volume(center, r, bounds.side(), norm, resolution))
}

fn clipped_ball_volume(center: &[f64], r: f64, side: f64, norm: Norm, m: usize) -> f64 {
    let d = center.len();
    let last = center[d - 1];
    let extent = |h: f64| (last + h).min(side) - (last - h).max(0.0);
    if d == 1 {
        return extent(r).max(0.0);
    }

    // per-axis cell midpoints (as offsets from the center) and widths
    let axes: Vec<(Vec<f64>, f64)> = center[..d - 1]
        .iter()
        .map(|&c| {
            let lo = (c - r).max(0.0);
            let hi = (c + r).min(side);
            let w = (hi - lo) / m as f64;
            let mids = (0..m).map(|i| lo + (i as f64 + 0.5) * w - c).collect();
            (mids, w)
        })
        .collect();
    let cell: f64 = axes.iter().map(|(_, w)| w).product();
    if cell == 0.0 {
        return 0.0;
    }

    let p = norm.p();
    let rp = if norm.is_max() { 0.0 } else { r.powf(p) };
    let mut idx = vec![0usize; d - 1];
    let mut total = 0.0;
    loop {
        let h = if norm.is_max() {
            r
        } else if p == 2.0 {
            let s: f64 = idx.iter().zip(&axes).map(|(&i, (m, _))| m[i] * m[i]).sum();
            let rem = r * r - s;
            if rem > 0.0 { rem.sqrt() } else { 0.0 }
        } else {
            let s: f64 = idx.iter().zip(&axes).map(|(&i, (m, _))| m[i].abs().powf(p)).sum();
            let rem = rp - s;
            if rem > 0.0 { rem.powf(1.0 / p) } else { 0.0 }
        };
        if h > 0.0 {
            total += extent(h).max(0.0);
        }

        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d - 1 {
                return total * cell;
            }
        }
    }
}

/// Expected number of isolated points `E(r)` of a unit-intensity process.
///
/// The box is symmetric under reflection in each axis, so the integrand only
/// depends on each coordinate's distance `t` to the nearer face; for
/// `t >= r` it no longer depends on that axis at all. The integral therefore
/// splits into terms indexed by how many axes sit in the boundary layer.
pub fn expected_isolated(bounds: &BoxSpec, norm: Norm, r: f64, resolution: usize) -> f64 {
    let d = bounds.dimension();
    let side = bounds.side();
    let half = side / 2.0;
    let layer = r.min(half);
    let outer = (resolution / 4).max(8);
    let cell = layer / outer as f64;

    let mut total = 0.0;
    for j in 0..=d {
        let bulk = half - layer;
        let bulk_factor = if d - j == 0 { 1.0 } else { bulk.powi((d - j) as i32) };
        if bulk_factor == 0.0 {
            continue;
        }
        let mut center = vec![half; d];
        let integral = if j == 0 {
            (-clipped_ball_volume(&center, r, side, norm, resolution)).exp()
        } else {
            let mut idx = vec![0usize; j];
            let mut acc = 0.0;
            'cells: loop {
                for (c, &i) in center.iter_mut().zip(&idx) {
                    *c = (i as f64 + 0.5) * cell;
                }
                acc += (-clipped_ball_volume(&center, r, side, norm, resolution)).exp();
                let mut k = 0;
                loop {
                    idx[k] += 1;
                    if idx[k] < outer {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                    if k == j {
                        break 'cells;
                    }
                }
            }
            acc * cell.powi(j as i32)
        };
        total += binomial(d, j) * bulk_factor * integral;
    }
    total * 2f64.powi(d as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Solves `E(r0) = 1` by bisection at the default resolution.
pub fn r0_general(bounds: &BoxSpec, norm: Norm, tol: f64) -> Result<f64> {
    r0_general_with(bounds, norm, tol, DEFAULT_RESOLUTION)
}

/// Solves `E(r0) = 1` by bisection; `E` is strictly decreasing in `r`.
pub fn r0_general_with(bounds: &BoxSpec, norm: Norm, tol: f64, resolution: usize) -> Result<f64> {
    let n = bounds.intensity();
    if !(n > 1.0) {
        return Err(Error::InvalidParameter(format!("need n > 1, got {n}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let d = bounds.dimension();
    let e = |r: f64| expected_isolated(bounds, norm, r, resolution);

    let mut lo = 1e-9 * bounds.side();
    let e_lo = e(lo);
    let guess = (n.ln() / norm.unit_ball_volume(d)).powf(1.0 / d as f64);
    let cap = bounds.side() * d as f64 * 2.0;
    let mut hi = guess.min(cap);
    let mut e_hi = e(hi);
    while e_hi >= 1.0 && hi < cap {
        hi = (hi * 1.5).min(cap);
        e_hi = e(hi);
    }
    if !(e_lo > 1.0 && e_hi < 1.0) {
        return Err(Error::Bracket { lo, hi, e_lo, e_hi });
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let v = e(mid);
        if (v - 1.0).abs() <= tol {
            return Ok(mid);
        }
        if v > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn r0_planar_examples() {
        assert!((r0_planar(E.powf(PI)).unwrap() - 1.0).abs() < 1e-12);
        assert!((r0_planar(E.powf(4.0 * PI)).unwrap() - 2.0).abs() < 1e-12);
        // sqrt(ln 1e6 / pi) = sqrt(13.815510557964274 / 3.141592653589793)
        assert!((r0_planar(1e6).unwrap() - 2.0970).abs() < 1e-3);
        assert!(r0_planar(1.0).is_err());
        assert!(r0_planar(0.5).is_err());
    }

    #[test]
    fn disk_in_the_middle() {
        let b = BoxSpec::planar(10_000.0).unwrap();
        let v = ball_box_volume(&[50.0, 50.0], 3.0, &b, Norm::EUCLIDEAN, 256).unwrap();
        let exact = PI * 9.0;
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
    }

    #[test]
    fn half_disk_on_an_edge() {
        let b = BoxSpec::planar(10_000.0).unwrap();
        let v = ball_box_volume(&[0.0, 50.0], 3.0, &b, Norm::EUCLIDEAN, 256).unwrap();
        let exact = PI * 9.0 / 2.0;
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
        let v = ball_box_volume(&[50.0, 0.0], 3.0, &b, Norm::EUCLIDEAN, 256).unwrap();
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
    }

    #[test]
    fn max_norm_quarter_square_at_a_corner() {
        let b = BoxSpec::planar(10_000.0).unwrap();
        let v = ball_box_volume(&[0.0, 0.0], 3.0, &b, Norm::MAX, 256).unwrap();
        assert!((v / 9.0 - 1.0).abs() < 0.01, "{v}");
        let v = ball_box_volume(&[100.0, 100.0], 3.0, &b, Norm::MAX, 256).unwrap();
        assert!((v / 9.0 - 1.0).abs() < 0.01, "{v}");
    }

    #[test]
    fn sphere_in_three_dimensions() {
        let b = BoxSpec::new(1e6, 3).unwrap();
        let v = ball_box_volume(&[50.0, 50.0, 50.0], 2.0, &b, Norm::EUCLIDEAN, 128).unwrap();
        let exact = 4.0 / 3.0 * PI * 8.0;
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
    }

    #[test]
    fn center_outside_box() {
        let b = BoxSpec::planar(100.0).unwrap();
        assert!(matches!(
            ball_box_volume(&[11.0, 1.0], 1.0, &b, Norm::EUCLIDEAN, 64),
            Err(Error::OutsideBox(_))
        ));
    }

    #[test]
    fn clipped_never_exceeds_unclipped() {
        let b = BoxSpec::planar(400.0).unwrap();
        for &norm in &[Norm::EUCLIDEAN, Norm::MANHATTAN, Norm::MAX, Norm::new(3.0).unwrap()] {
            let full = norm.unit_ball_volume(2) * 4.0;
            for &(x, y) in &[(0.0, 0.0), (1.0, 7.0), (10.0, 10.0), (19.0, 3.0)] {
                let v = ball_box_volume(&[x, y], 2.0, &b, norm, 256).unwrap();
                assert!(v <= full * (1.0 + 1e-3), "{norm} at ({x},{y}): {v} > {full}");
            }
            let v = ball_box_volume(&[10.0, 10.0], 2.0, &b, norm, 256).unwrap();
            assert!((v / full - 1.0).abs() < 0.01);
        }
    }

    #[test]
    fn volume_grows_with_radius() {
        let b = BoxSpec::planar(400.0).unwrap();
        let mut prev = 0.0;
        for i in 1..40 {
            let v = ball_box_volume(&[1.5, 0.5], i as f64 * 0.25, &b, Norm::EUCLIDEAN, 256).unwrap();
            assert!(v >= prev - 1e-3 * v, "r={}", i as f64 * 0.25);
            prev = v;
        }
    }

    #[test]
    fn isolated_count_without_boundary_is_n_exp_minus_area() {
        // a one-dimensional box where the interval never reaches a face is
        // exactly n e^{-2r} away from the two layers of width r
        let b = BoxSpec::new(100.0, 1).unwrap();
        let r = 1.0;
        let e = expected_isolated(&b, Norm::EUCLIDEAN, r, 256);
        // exact: (100 - 2r) e^{-2r} + 2 * ∫_0^r e^{-(t + r)} dt
        let exact = 98.0 * (-2.0f64).exp() + 2.0 * ((-1.0f64).exp() - (-2.0f64).exp());
        assert!((e - exact).abs() < 1e-4, "{e} vs {exact}");
    }

    #[test]
    fn r0_general_root_contract() {
        let b = BoxSpec::planar(1e6).unwrap();
        let tol = 1e-3;
        let r0 = r0_general(&b, Norm::EUCLIDEAN, tol).unwrap();
        let e = expected_isolated(&b, Norm::EUCLIDEAN, r0, DEFAULT_RESOLUTION);
        assert!((e - 1.0).abs() <= tol);
        let planar = r0_planar(1e6).unwrap();
        assert!(r0 >= planar && r0 <= 1.2 * planar, "r0={r0} planar={planar}");
    }

    #[test]
    fn r0_general_ratio_at_1e8() {
        let b = BoxSpec::planar(1e8).unwrap();
        let r0 = r0_general(&b, Norm::EUCLIDEAN, 1e-3).unwrap();
        let ratio = PI * r0 * r0 / 1e8f64.ln();
        assert!((1.0..=1.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn r0_general_rejects_small_n() {
        let b = BoxSpec::planar(1.0).unwrap();
        assert!(r0_general(&b, Norm::EUCLIDEAN, 1e-3).is_err());
    }

    #[test]
    fn r0_general_in_three_dimensions() {
        let b = BoxSpec::new(1e5, 3).unwrap();
        let r0 = r0_general_with(&b, Norm::EUCLIDEAN, 1e-3, 64).unwrap();
        let central = (1e5f64.ln() / (4.0 / 3.0 * PI)).cbrt();
        assert!(r0 > central, "r0={r0} central={central}");
        assert!((expected_isolated(&b, Norm::EUCLIDEAN, r0, 64) - 1.0).abs() <= 1e-3);
    }
}
