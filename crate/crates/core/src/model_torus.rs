//! The bifoliated model torus `T_i = (R/(2i+2)Z) x (R/Z)`.
//!
//! The stable foliation is tangent to `sin(πx) ∂x + cos(πx) ∂y`. Its leaves
//! are the vertical circles at integer `x` and the graphs
//! `y = ln|sin(πx)|/π + c` in between. The unstable foliation is the image
//! of the stable one under `τ_{1/2}`.
//!
//! Coordinates are generic over [`Coord`], implemented exactly for
//! [`Rational64`] and with a `1e-12` tolerance for `f64`.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::types::Foliation;

/// Comparison tolerance for floating-point coordinates.
pub const FLOAT_TOL: f64 = 1e-12;

/// Scalar type usable as a torus coordinate.
pub trait Coord:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_ratio(num: i64, den: i64) -> Self;
    fn floor_to_i64(self) -> i64;
    fn to_f64(self) -> f64;
    /// Equality up to the representation tolerance; exact for rationals.
    fn near(self, other: Self) -> bool;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Reduce into `[0, period)`.
    fn wrap(self, period: i64) -> Self {
        let p = Self::from_int(period);
        let q = (self / p).floor_to_i64();
        let r = self - p * Self::from_int(q);
        if r.near(p) || r < Self::from_int(0) && r.near(Self::from_int(0)) {
            Self::from_int(0)
        } else {
            r
        }
    }

    /// The nearest integer if `self` is one (within tolerance).
    fn as_integer(self) -> Option<i64> {
        let f = self.floor_to_i64();
        if self.near(Self::from_int(f)) {
            Some(f)
        } else if self.near(Self::from_int(f + 1)) {
            Some(f + 1)
        } else {
            None
        }
    }
}

impl Coord for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn floor_to_i64(self) -> i64 {
        self.floor().to_integer()
    }

    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn near(self, other: Self) -> bool {
        self == other
    }
}

impl Coord for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn floor_to_i64(self) -> i64 {
        self.floor() as i64
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn near(self, other: Self) -> bool {
        (self - other).abs() <= FLOAT_TOL
    }
}

/// Circumference `2i+2` of the `x` direction of `T_i`.
pub fn period(i: u32) -> i64 {
    2 * i as i64 + 2
}

/// A point of `T_i`, always stored normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de>"))]
pub struct TorusPoint<C = f64> {
    pub i: u32,
    pub x: C,
    pub y: C,
}

impl<C: Coord> TorusPoint<C> {
    pub fn new(i: u32, x: C, y: C) -> Result<Self> {
        if i == 0 {
            return Err(Error::OutOfRange("torus index i must be >= 1".into()));
        }
        Ok(Self::normalized(i, x, y))
    }

    fn normalized(i: u32, x: C, y: C) -> Self {
        TorusPoint {
            i,
            x: x.wrap(period(i)),
            y: y.wrap(1),
        }
    }

    /// Equality of points modulo the lattice, within coordinate tolerance.
    pub fn same_as(&self, other: &Self) -> bool {
        let p = period(self.i);
        let dx = (self.x - other.x).wrap(p);
        let dy = (self.y - other.y).wrap(1);
        self.i == other.i
            && (dx.near(C::from_int(0)) || dx.near(C::from_int(p)))
            && (dy.near(C::from_int(0)) || dy.near(C::from_int(1)))
    }
}

/// A Reeb annulus of one of the two model foliations on `T_i`.
///
/// The s-annulus `j` is `[j, j+1] x S¹`; the u-annulus `j` is `[j−1/2, j+1/2] x S¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReebAnnulusId {
    pub i: u32,
    pub foliation: Foliation,
    pub j: u32,
}

impl ReebAnnulusId {
    pub fn new(i: u32, foliation: Foliation, j: i64) -> Self {
        ReebAnnulusId {
            i,
            foliation,
            j: j.rem_euclid(period(i)) as u32,
        }
    }

    /// Closed `x`-interval of the annulus, with the lower end in `[−1/2, 2i+2)`.
    pub fn interval<C: Coord>(&self) -> (C, C) {
        let lo = C::from_int(self.j as i64) - offset::<C>(self.foliation);
        (lo, lo + C::from_int(1))
    }
}

fn offset<C: Coord>(foliation: Foliation) -> C {
    match foliation {
        Foliation::S => C::from_int(0),
        Foliation::U => C::half(),
    }
}

/// All `2i+2` Reeb annuli of a foliation on `T_i`, in index order.
pub fn reeb_annuli(i: u32, foliation: Foliation) -> Vec<ReebAnnulusId> {
    (0..period(i)).map(|j| ReebAnnulusId::new(i, foliation, j)).collect()
}

/// The `x`-positions of the `2i+2` compact leaves of a foliation on `T_i`.
pub fn compact_leaf_positions<C: Coord>(i: u32, foliation: Foliation) -> Vec<C> {
    (0..period(i))
        .map(|j| (C::from_int(j) - offset::<C>(foliation)).wrap(period(i)))
        .collect()
}

/// Result of [`annulus_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusLocation {
    pub annulus: ReebAnnulusId,
    /// The point lies on a compact leaf; `annulus` is then the one on its `+x` side.
    pub on_boundary: bool,
}

pub fn annulus_of<C: Coord>(p: &TorusPoint<C>, foliation: Foliation) -> AnnulusLocation {
    let t = p.x + offset::<C>(foliation);
    let (j, on_boundary) = match t.as_integer() {
        Some(j) => (j, true),
        None => (t.floor_to_i64(), false),
    };
    AnnulusLocation {
        annulus: ReebAnnulusId::new(p.i, foliation, j),
        on_boundary,
    }
}

/// The height profile `g` of the noncompact leaves: `y = g(x) + c`.
pub fn leaf_profile(foliation: Foliation, x: f64) -> f64 {
    match foliation {
        Foliation::S => (PI * x).sin().abs().ln() / PI,
        Foliation::U => (PI * x).cos().abs().ln() / PI,
    }
}

/// Reduce a real number into `[0, 1)`.
pub fn wrap_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A leaf of one of the model foliations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de>"))]
pub struct ModelLeaf<C = f64> {
    pub i: u32,
    pub foliation: Foliation,
    pub kind: LeafKind<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "C: Serialize", deserialize = "C: Deserialize<'de>"))]
pub enum LeafKind<C = f64> {
    Compact { x0: C },
    Noncompact { annulus: ReebAnnulusId, c: f64 },
}

pub fn leaf_through<C: Coord>(p: &TorusPoint<C>, foliation: Foliation) -> ModelLeaf<C> {
    let loc = annulus_of(p, foliation);
    let kind = if loc.on_boundary {
        LeafKind::Compact { x0: p.x }
    } else {
        let c = wrap_unit(p.y.to_f64() - leaf_profile(foliation, p.x.to_f64()));
        LeafKind::Noncompact {
            annulus: loc.annulus,
            c,
        }
    };
    ModelLeaf {
        i: p.i,
        foliation,
        kind,
    }
}

/// Horizontal translation `(x, y) ↦ (x + v, y)`.
pub fn tau<C: Coord>(p: &TorusPoint<C>, v: C) -> TorusPoint<C> {
    TorusPoint::normalized(p.i, p.x + v, p.y)
}

/// The symmetry `(x, y) ↦ (1 − x, y)`.
pub fn theta<C: Coord>(p: &TorusPoint<C>) -> TorusPoint<C> {
    theta_about(p, 0)
}

/// The reflection `(x, y) ↦ (2j + 1 − x, y)` across the core of s-annulus `j`.
///
/// Conjugate to [`theta`] by `τ_j`; it preserves both foliations and all
/// leaf constants.
pub fn theta_about<C: Coord>(p: &TorusPoint<C>, j: i64) -> TorusPoint<C> {
    TorusPoint::normalized(p.i, C::from_int(2 * j + 1) - p.x, p.y)
}

/// The open region of one Reeb annulus between two noncompact leaves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelStrip {
    pub i: u32,
    pub foliation: Foliation,
    pub annulus: u32,
    pub c_lo: f64,
    pub c_hi: f64,
}

impl ModelStrip {
    pub fn new(i: u32, foliation: Foliation, annulus: u32, c_lo: f64, c_hi: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&c_lo) || !(0.0..=1.0).contains(&c_hi) || c_lo >= c_hi {
            return Err(Error::InvalidModel(format!(
                "strip constants ({c_lo}, {c_hi}) must satisfy 0 <= lo < hi <= 1"
            )));
        }
        if annulus as i64 >= period(i) {
            return Err(Error::OutOfRange(format!("annulus {annulus} on T_{i}")));
        }
        Ok(ModelStrip {
            i,
            foliation,
            annulus,
            c_lo,
            c_hi,
        })
    }

    pub fn width(&self) -> f64 {
        self.c_hi - self.c_lo
    }

    pub fn contains(&self, p: &TorusPoint<f64>) -> bool {
        match leaf_through(p, self.foliation).kind {
            LeafKind::Noncompact { annulus, c } => {
                annulus.j == self.annulus && c > self.c_lo && c < self.c_hi
            }
            LeafKind::Compact { .. } => false,
        }
    }
}

/// Sample the noncompact leaf with constant `c` in annulus `j`.
///
/// Returns polylines in `[0, 2i+2) x [0, 1]`, split where the leaf wraps
/// around the `y` circle. Each split point is located by bisection, so a
/// piece ending at `y = 0` (or `1`) is followed by one starting at `y = 1`
/// (or `0`) at the same `x`.
pub fn sample_leaf(
    i: u32,
    foliation: Foliation,
    j: u32,
    c: f64,
    samples: usize,
    margin: f64,
) -> Vec<Vec<(f64, f64)>> {
    let (lo, hi) = ReebAnnulusId::new(i, foliation, j as i64).interval::<f64>();
    let (a, b) = (lo + margin, hi - margin);
    let lift = |x: f64| leaf_profile(foliation, x) + c;
    let shift = |x: f64| x.rem_euclid(period(i) as f64);
    let samples = samples.max(2);
    let xs: Vec<f64> = (0..samples)
        .map(|k| a + (b - a) * k as f64 / (samples - 1) as f64)
        .collect();

    let mut pieces = Vec::new();
    let mut current = vec![(shift(xs[0]), wrap_unit(lift(xs[0])))];
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (f0, f1) = (lift(x0).floor() as i64, lift(x1).floor() as i64);
        // Integer levels crossed between the two samples, in travel order.
        let levels: Vec<i64> = if f1 > f0 {
            (f0 + 1..=f1).collect()
        } else {
            (f1 + 1..=f0).rev().collect()
        };
        let rising = f1 > f0;
        for level in levels {
            let xc = bisect(|x| lift(x) - level as f64, x0, x1);
            let (end, start) = if rising { (1.0, 0.0) } else { (0.0, 1.0) };
            current.push((shift(xc), end));
            pieces.push(std::mem::take(&mut current));
            current.push((shift(xc), start));
        }
        current.push((shift(x1), wrap_unit(lift(x1))));
    }
    pieces.push(current);
    pieces.retain(|p| p.len() >= 2);
    pieces
}

/// Root of a continuous function with a sign change on `[a, b]`.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    0.5 * (a + b)
}
