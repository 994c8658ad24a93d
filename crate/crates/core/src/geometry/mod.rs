//! Boxes, norms, and Poisson point sets.

mod critical;
mod sampling;

pub use critical::{
    ball_box_volume, expected_isolated, r0_general, r0_general_with, r0_planar,
    DEFAULT_RESOLUTION,
};
pub use sampling::{poisson_count, sample_poisson};

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

/// A `d`-dimensional hypercube of volume `intensity_n`.
///
/// A unit-intensity Poisson process in this box has `intensity_n` points on
/// average.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    intensity_n: f64,
    dimension: usize,
}

impl BoxSpec {
    pub fn new(intensity_n: f64, dimension: usize) -> Result<Self> {
        if !(intensity_n.is_finite() && intensity_n > 0.0) {
            return Err(Error::InvalidBox(format!("intensity must be positive, got {intensity_n}")));
        }
        if dimension == 0 {
            return Err(Error::InvalidBox("dimension must be at least 1".into()));
        }
        Ok(Self { intensity_n, dimension })
    }

    /// The planar box `S_n` of area `n`.
    pub fn planar(intensity_n: f64) -> Result<Self> {
        Self::new(intensity_n, 2)
    }

    pub fn intensity(&self) -> f64 {
        self.intensity_n
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn volume(&self) -> f64 {
        self.intensity_n
    }

    pub fn side(&self) -> f64 {
        match self.dimension {
            1 => self.intensity_n,
            2 => self.intensity_n.sqrt(),
            3 => self.intensity_n.cbrt(),
            d => self.intensity_n.powf(1.0 / d as f64),
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        let side = self.side();
        point.len() == self.dimension && point.iter().all(|&x| (0.0..=side).contains(&x))
    }
}

/// A `p`-norm with `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norm {
    p: f64,
}

impl Norm {
    pub const EUCLIDEAN: Norm = Norm { p: 2.0 };
    pub const MANHATTAN: Norm = Norm { p: 1.0 };
    pub const MAX: Norm = Norm { p: f64::INFINITY };

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("norm exponent must be >= 1, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_max(&self) -> bool {
        self.p.is_infinite()
    }

    /// Distance between equal-length coordinate slices.
    #[inline]
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        if self.p == 2.0 {
            diffs.map(|t| t * t).sum::<f64>().sqrt()
        } else if self.p == 1.0 {
            diffs.sum()
        } else if self.p.is_infinite() {
            diffs.fold(0.0, f64::max)
        } else {
            diffs.map(|t| t.powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        }
    }

    /// Volume of the unit ball of this norm in `d` dimensions.
    pub fn unit_ball_volume(&self, d: usize) -> f64 {
        if self.is_max() {
            return 2f64.powi(d as i32);
        }
        // (2 Γ(1 + 1/p))^d / Γ(1 + d/p)
        let p = self.p;
        let ln = d as f64 * (2f64.ln() + sampling::ln_gamma(1.0 + 1.0 / p))
            - sampling::ln_gamma(1.0 + d as f64 / p);
        ln.exp()
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_max() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "max" => Ok(Norm::MAX),
            t => {
                let p: f64 = t
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad norm `{s}`")))?;
                Norm::new(p)
            }
        }
    }
}

/// Distance between two points, checking dimensions.
pub fn distance(a: &[f64], b: &[f64], norm: Norm) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(norm.dist(a, b))
}

/// A realization of a Poisson process in a box.
///
/// Coordinates are stored row-major: point `i` occupies
/// `coords[i * d .. (i + 1) * d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    bounds: BoxSpec,
    coords: Vec<f64>,
    seed: u64,
}

impl PointSet {
    /// Builds a point set from explicit points. Every point must lie in the box.
    pub fn from_points(bounds: BoxSpec, points: &[Vec<f64>], seed: u64) -> Result<Self> {
        let d = bounds.dimension();
        let mut coords = Vec::with_capacity(points.len() * d);
        for p in points {
            if p.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.len() });
            }
            if !bounds.contains(p) {
                return Err(Error::OutsideBox(p.clone()));
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { bounds, coords, seed })
    }

    pub(crate) fn from_raw(bounds: BoxSpec, coords: Vec<f64>, seed: u64) -> Self {
        debug_assert_eq!(coords.len() % bounds.dimension(), 0);
        Self { bounds, coords, seed }
    }

    pub fn bounds(&self) -> &BoxSpec {
        &self.bounds
    }

    pub fn dimension(&self) -> usize {
        self.bounds.dimension()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dimension();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dimension())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize, norm: Norm) -> f64 {
        norm.dist(self.point(i), self.point(j))
    }

    /// Returns a copy with points reordered so that new index `k` holds old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> PointSet {
        assert_eq!(perm.len(), self.len());
        let mut coords = Vec::with_capacity(self.coords.len());
        for &old in perm {
            coords.extend_from_slice(self.point(old));
        }
        PointSet { bounds: self.bounds, coords, seed: self.seed }
    }

    /// Writes the point-set text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# n={} d={} seed={} count={}",
            self.bounds.intensity(),
            self.dimension(),
            self.seed,
            self.len()
        )?;
        for p in self.points() {
            let line: Vec<String> = p.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Reads the point-set text format.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))??;
        let fields = parse_header(&header, 1)?;
        let get = |key: &str| {
            fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| parse_err(1, format!("header lacks `{key}`")))
        };
        let n: f64 = get("n")?.parse().map_err(|_| parse_err(1, "bad n"))?;
        let d: usize = get("d")?.parse().map_err(|_| parse_err(1, "bad d"))?;
        let seed: u64 = get("seed")?.parse().map_err(|_| parse_err(1, "bad seed"))?;
        let count: usize = get("count")?.parse().map_err(|_| parse_err(1, "bad count"))?;
        let bounds = BoxSpec::new(n, d)?;

        let mut coords = Vec::with_capacity(count * d);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            let lineno = idx + 2;
            if line.trim().is_empty() {
                continue;
            }
            let before = coords.len();
            for tok in line.split_whitespace() {
                coords.push(tok.parse::<f64>().map_err(|_| parse_err(lineno, "bad coordinate"))?);
            }
            if coords.len() - before != d {
                return Err(parse_err(lineno, format!("expected {d} coordinates")));
            }
        }
        if coords.len() != count * d {
            return Err(parse_err(1, format!("header says {count} points, found {}", coords.len() / d)));
        }
        let ps = PointSet { bounds, coords, seed };
        if let Some(p) = ps.points().find(|p| !bounds.contains(p)) {
            return Err(Error::OutsideBox(p.to_vec()));
        }
        Ok(ps)
    }
}

/// Splits a `# key=value key=value` header line.
pub(crate) fn parse_header(line: &str, lineno: usize) -> Result<Vec<(String, String)>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| parse_err(lineno, "header must start with `#`"))?;
    body.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| parse_err(lineno, format!("malformed field `{kv}`")))
        })
        .collect()
}
