//! Quality indicators for bi-objective fronts: exact 2-D hypervolume and
//! inverted generational distance, both computed in a normalized objective
//! space derived from a reference front.

use crate::error::{Error, Result};

/// Affine map taking raw objective vectors into `[0, 1]^2` using the ideal
/// and nadir points of a reference front, plus the hypervolume reference
/// point expressed in normalized coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationContext {
    pub ideal: [f64; 2],
    pub nadir: [f64; 2],
    pub ref_point: [f64; 2],
}

impl NormalizationContext {
    /// Derives ideal/nadir from the componentwise extremes of a reference
    /// front and fixes the hypervolume reference at (1.1, 1.1) in normalized
    /// space, slightly beyond the nadir so extreme points still contribute.
    pub fn from_reference(reference: &[Vec<f64>]) -> Result<Self> {
        if reference.is_empty() {
            return Err(Error::InvalidConfig("empty reference front".into()));
        }
        let mut ideal = [f64::INFINITY; 2];
        let mut nadir = [f64::NEG_INFINITY; 2];
        for p in reference {
            if p.len() != 2 {
                return Err(Error::InvalidConfig(format!(
                    "expected 2 objectives, got {}",
                    p.len()
                )));
            }
            for m in 0..2 {
                ideal[m] = ideal[m].min(p[m]);
                nadir[m] = nadir[m].max(p[m]);
            }
        }
        for m in 0..2 {
            if !(nadir[m] - ideal[m] > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "degenerate reference range in objective {m}: [{}, {}]",
                    ideal[m], nadir[m]
                )));
            }
        }
        Ok(Self { ideal, nadir, ref_point: [1.1, 1.1] })
    }

    pub fn normalize(&self, f: &[f64]) -> [f64; 2] {
        [
            (f[0] - self.ideal[0]) / (self.nadir[0] - self.ideal[0]),
            (f[1] - self.ideal[1]) / (self.nadir[1] - self.ideal[1]),
        ]
    }
}

/// Exact hypervolume of a bi-objective front (minimization) against
/// `ctx.ref_point`, computed in normalized space.
///
/// Points at or beyond the reference point in either objective contribute
/// nothing and are dropped; among the rest only the lower-left staircase
/// matters, so after sorting by the first objective the area is a sum of
/// disjoint vertical strips.
pub fn hv_2d(front: &[Vec<f64>], ctx: &NormalizationContext) -> Result<f64> {
    let [r0, r1] = ctx.ref_point;
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(front.len());
    for f in front {
        if f.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "expected 2 objectives, got {}",
                f.len()
            )));
        }
        let z = ctx.normalize(f);
        if !z[0].is_finite() || !z[1].is_finite() {
            return Err(Error::InvalidArgument("non-finite objective value".into()));
        }
        if z[0] < r0 && z[1] < r1 {
            pts.push(z);
        }
    }
    if pts.is_empty() {
        return Ok(0.0);
    }

    // Ascending in z1; ties resolved by z2 so the scan below keeps only the
    // staircase (strictly decreasing z2).
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    let mut stair: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if stair.last().map_or(true, |q| p[1] < q[1]) {
            stair.push(p);
        }
    }

    let mut hv = 0.0;
    for i in 0..stair.len() {
        let width = if i + 1 < stair.len() {
            stair[i + 1][0] - stair[i][0]
        } else {
            r0 - stair[i][0]
        };
        hv += width * (r1 - stair[i][1]);
    }
    Ok(hv)
}

/// Inverted generational distance: mean Euclidean distance (in normalized
/// space) from each reference point to its nearest front point. Lower is
/// better; zero iff every reference point coincides with a front point.
pub fn igd(front: &[Vec<f64>], reference: &[Vec<f64>], ctx: &NormalizationContext) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::InvalidArgument("empty reference front".into()));
    }
    if front.is_empty() {
        return Err(Error::InvalidArgument("empty front".into()));
    }
    let front_n: Vec<[f64; 2]> = front.iter().map(|f| ctx.normalize(f)).collect();
    let mut total = 0.0;
    for r in reference {
        let rz = ctx.normalize(r);
        let nearest = front_n
            .iter()
            .map(|z| ((z[0] - rz[0]).powi(2) + (z[1] - rz[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min);
        total += nearest;
    }
    Ok(total / reference.len() as f64)
}
