//! Points on right circular helices and the skip-m subsequences built from them.
//!
//! Terminals live on the unit-radius helix `P_j = (cos jω, sin jω, α j ω)`.
//! Steiner points of the sausage tree live on a coaxial helix of the same
//! pitch `2πα` and a smaller radius fixed by the 120° condition.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Result, SrfError};

/// Angular step `omega` (radians) and pitch parameter `alpha` (pitch = 2πα).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixParams {
    pub omega: f64,
    pub alpha: f64,
}

impl HelixParams {
    /// Validated constructor: `omega` in (0, 2π), `alpha` ≥ 0, both finite.
    pub fn new(omega: f64, alpha: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0 && omega < TAU) {
            return Err(SrfError::domain(format!("omega = {omega} outside (0, 2pi)")));
        }
        Self::check_alpha(alpha)?;
        Ok(HelixParams { omega, alpha })
    }

    /// Like [`HelixParams::new`] but accepts any positive angular step.
    ///
    /// Symmetry images `2πN − ω` with `N ≥ 2` leave the principal interval
    /// while still describing a valid helix.
    pub fn wrapped(omega: f64, alpha: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(SrfError::domain(format!("omega = {omega} must be positive")));
        }
        Self::check_alpha(alpha)?;
        Ok(HelixParams { omega, alpha })
    }

    fn check_alpha(alpha: f64) -> Result<()> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(SrfError::domain(format!("alpha = {alpha} must be finite and >= 0")));
        }
        Ok(())
    }

    /// The product `αω`, the rise per step.
    #[inline]
    pub fn rise(&self) -> f64 {
        self.alpha * self.omega
    }
}

/// Number of steps between linked points; `m − 1` points are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SkipCount(u32);

impl SkipCount {
    pub const ONE: SkipCount = SkipCount(1);

    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(SrfError::spec("skip count must be >= 1"));
        }
        Ok(SkipCount(m))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub(crate) fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// `1..=m_max` as skip counts.
    pub fn up_to(m_max: SkipCount) -> impl Iterator<Item = SkipCount> {
        (1..=m_max.0).map(SkipCount)
    }
}

impl std::fmt::Display for SkipCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Point3;
    #[inline]
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    #[inline]
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    #[inline]
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Terminal `P_j` on the unit helix.
pub fn terminal_point(j: u64, p: HelixParams) -> Point3 {
    let theta = j as f64 * p.omega;
    Point3::new(theta.cos(), theta.sin(), p.alpha * theta)
}

/// The first `n` terminals `P_0..P_{n-1}`.
pub fn terminals(n: usize, p: HelixParams) -> Vec<Point3> {
    (0..n as u64).map(|j| terminal_point(j, p)).collect()
}

/// Steiner point `S_k` of the helical ansatz for skip class `m`.
///
/// The radius is `r_m(ω, α)`; the angular and vertical stations match `P_k`.
pub fn steiner_point_ansatz(k: i64, p: HelixParams, m: SkipCount) -> Result<Point3> {
    if !(p.alpha > 0.0) {
        return Err(SrfError::domain("steiner ansatz requires alpha > 0"));
    }
    let r = analytic::radius(m, p)?;
    let theta = k as f64 * p.omega;
    Ok(Point3::new(r * theta.cos(), r * theta.sin(), p.alpha * theta))
}

/// Recovers the cumulative angle of a point on a helix of pitch `2πα`.
///
/// The in-plane angle comes from `atan2` normalized to `[0, 2π)`, which is
/// the same as the arctangent plus the quadrant correction `π⌊q/2⌋`. Whole
/// turns come from `2π⌊z / (2πα)⌋`. When rounding puts the planar angle
/// on the other side of a turn boundary from the floor term, the result is
/// moved by one turn toward `z / α`.
pub fn recover_angle(s: Point3, alpha: f64) -> Result<f64> {
    if s.x == 0.0 && s.y == 0.0 {
        return Err(SrfError::domain("angle undefined on the helix axis"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(SrfError::domain("angle recovery requires alpha > 0"));
    }
    let mut planar = s.y.atan2(s.x);
    if planar < 0.0 {
        planar += TAU;
    }
    let turns = (s.z / (TAU * alpha)).floor();
    let mut angle = planar + TAU * turns;
    let lifted = s.z / alpha;
    if angle - lifted > PI {
        angle -= TAU;
    } else if lifted - angle > PI {
        angle += TAU;
    }
    Ok(angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Terminal,
    Steiner,
}

/// One skip-`m` subsequence `start, start+m, …, start + l_max·m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsequenceSpec {
    start: usize,
    skip: SkipCount,
    n: usize,
    kind: PointKind,
    l_max: usize,
}

impl SubsequenceSpec {
    /// Checks `0 ≤ start ≤ m−1 ≤ n−1` (terminals) or `≤ n−2` (Steiner points)
    /// and derives `l_max`.
    pub fn new(start: usize, skip: SkipCount, n: usize, kind: PointKind) -> Result<Self> {
        let m = skip.get() as usize;
        let reserve = match kind {
            PointKind::Terminal => 1,
            PointKind::Steiner => 2,
        };
        if n < reserve + 1 {
            return Err(SrfError::spec(format!("n = {n} too small for {kind:?} subsequences")));
        }
        if m - 1 > n - reserve {
            return Err(SrfError::spec(format!(
                "skip m = {m} exceeds the allowed {} for n = {n}",
                n - reserve + 1
            )));
        }
        if start > m - 1 {
            return Err(SrfError::spec(format!("start {start} must be <= m - 1 = {}", m - 1)));
        }
        // start <= m-1 <= n-reserve, so the numerator is non-negative
        let l_max = (n - start - reserve) / m;
        Ok(SubsequenceSpec {
            start,
            skip,
            n,
            kind,
            l_max,
        })
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn skip(&self) -> SkipCount {
        self.skip
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> PointKind {
        self.kind
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }
}

pub fn subsequence_indices(spec: &SubsequenceSpec) -> Vec<usize> {
    let m = spec.skip.get() as usize;
    (0..=spec.l_max).map(|l| spec.start + l * m).collect()
}

/// All `m` subsequences of the given kind, starts `0..m`.
///
/// For Steiner points the start-0 class contains `S_0`, which is not a vertex
/// of the sausage tree (its Steiner vertices are `S_1..S_{n-2}`); use
/// [`steiner_partition`] for the tree's own vertex set.
pub fn subsequence_family(skip: SkipCount, n: usize, kind: PointKind) -> Result<Vec<Vec<usize>>> {
    (0..skip.get() as usize)
        .map(|start| SubsequenceSpec::new(start, skip, n, kind).map(|s| subsequence_indices(&s)))
        .collect()
}

/// Skip-`m` classes of the sausage Steiner vertices `S_1..S_{n-2}`.
pub fn steiner_partition(skip: SkipCount, n: usize) -> Result<Vec<Vec<usize>>> {
    let mut family = subsequence_family(skip, n, PointKind::Steiner)?;
    if let Some(first) = family.first_mut() {
        first.retain(|&k| k != 0);
    }
    family.retain(|class| !class.is_empty());
    Ok(family)
}
