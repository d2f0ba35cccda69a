//! Gluing maps `φ̄^m`, strips, rectangles and the periodic orbits `α_j`.
//!
//! A point `p` of an exit torus `T_i^{out}` is charted by the coordinates
//! of `σ(p)` in `T_i^{in}`, so the unstable annulus `A_i^{j,u}` occupies
//! `[j, j+1]` like its stable partner. In these charts the gluing
//! `T_i^{out} → T_i^{in}` is the translation by `−1/2` for `i ≤ 2m` and by
//! `+1/2` otherwise.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::PI;

use crate::error::{check_range, Error, Result};
use crate::homology::{alpha_class, H1Vector};
use crate::model_torus::{leaf_profile, period, theta_about, Coord, ModelStrip, ReebAnnulusId, TorusPoint};
use crate::plug_model::{dynamical_e2, frame_sign, LaminationAnnulus, Sigma, TorusRef};
use crate::types::{Chirality, Foliation, Side};

/// The two possible restrictions of `φ̄^m` to an exit torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Translation {
    /// `τ_{−1/2} ∘ σ`
    MinusHalfSigma,
    /// `τ_{+1/2} ∘ σ`
    PlusHalfSigma,
}

impl Translation {
    pub fn shift<C: Coord>(self) -> C {
        match self {
            Translation::MinusHalfSigma => -C::half(),
            Translation::PlusHalfSigma => C::half(),
        }
    }

    /// Family of rectangle components produced on the entrance torus.
    pub fn chirality(self) -> Chirality {
        match self {
            Translation::MinusHalfSigma => Chirality::L,
            Translation::PlusHalfSigma => Chirality::R,
        }
    }
}

/// The gluing `φ̄^m` of the exit boundary onto the entrance boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingMap {
    pub n: u32,
    pub m: u32,
}

impl GluingMap {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        check_range("n", n as i64, 1, i64::MAX)?;
        check_range("m", m as i64, 0, 2 * n as i64)?;
        Ok(GluingMap { n, m })
    }

    pub fn restriction(&self, i: u32) -> Result<Translation> {
        check_range("i", i as i64, 1, 4 * self.n as i64)?;
        Ok(if i <= 2 * self.m {
            Translation::MinusHalfSigma
        } else {
            Translation::PlusHalfSigma
        })
    }

    /// Image of a point of `T_i^{out}`, given in its σ-chart.
    pub fn apply<C: Coord>(&self, p: &TorusPoint<C>) -> Result<TorusPoint<C>> {
        let v = self.restriction(p.i)?.shift::<C>();
        TorusPoint::new(p.i, p.x + v, p.y)
    }
}

pub fn gluing_restriction(n: u32, m: u32, i: u32) -> Result<Translation> {
    GluingMap::new(n, m)?.restriction(i)
}

/// `x`-interval of a lamination annulus in the chart of its torus.
pub fn chart_interval(a: &LaminationAnnulus) -> (Rational64, Rational64) {
    let in_side = match a.torus().side {
        Side::In => *a,
        Side::Out => a.sigma(),
    };
    ReebAnnulusId::new(a.i, Foliation::S, in_side.j as i64).interval()
}

/// Image of `A_i^{j,u}` under `φ̄^m`, as an `x`-interval of `T_i^{in}`.
pub fn glued_unstable_interval(n: u32, m: u32, i: u32, j: u32) -> Result<(Rational64, Rational64)> {
    let v = gluing_restriction(n, m, i)?.shift::<Rational64>();
    let (lo, hi) = chart_interval(&LaminationAnnulus {
        i,
        j,
        foliation: Foliation::U,
    });
    Ok((lo + v, hi + v))
}

/// Length of the overlap of two arcs of the circle `R/pZ`.
fn arc_overlap(a: (Rational64, Rational64), b: (Rational64, Rational64), p: i64) -> Rational64 {
    let zero = Rational64::from_int(0);
    [-1i64, 0, 1]
        .iter()
        .map(|t| {
            let shift = Rational64::from_int(t * p);
            let lo = a.0.max(b.0 + shift);
            let hi = a.1.min(b.1 + shift);
            (hi - lo).max(zero)
        })
        .fold(zero, |acc, v| acc + v)
}

fn wrapped(iv: (Rational64, Rational64), p: i64) -> (Rational64, Rational64) {
    let lo = iv.0.wrap(p);
    (lo, lo + (iv.1 - iv.0))
}

/// Stable annuli of `T_i^{in}` met by the glued image of `A_i^{j,u}`.
pub fn annulus_intersection_pattern(n: u32, m: u32, i: u32, j: u32) -> Result<BTreeSet<u32>> {
    let p = period(i);
    check_range("j", j as i64, 0, p - 1)?;
    let image = wrapped(glued_unstable_interval(n, m, i, j)?, p);
    Ok((0..p as u32)
        .filter(|&l| {
            let s = chart_interval(&LaminationAnnulus {
                i,
                j: l,
                foliation: Foliation::S,
            });
            arc_overlap(image, s, p) > Rational64::from_int(0)
        })
        .collect())
}

/// Compact stable leaves strictly inside the glued image of `A_i^{j,u}`.
pub fn compact_leaves_inside(n: u32, m: u32, i: u32, j: u32) -> Result<Vec<u32>> {
    let p = period(i);
    let (lo, hi) = glued_unstable_interval(n, m, i, j)?;
    let first = lo.floor_to_i64() + 1;
    Ok((first..)
        .take_while(|&x| Rational64::from_int(x) < hi)
        .map(|x| x.rem_euclid(p) as u32)
        .collect())
}

/// Identifier of one of the four strips attached to `α_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StripId {
    /// Torus index `2j−1` or `2j`.
    pub torus: u32,
    pub foliation: Foliation,
}

impl StripId {
    /// Crossing map `Θ`: `D^s_{2j−1} → D^u_{2j}` and `D^s_{2j} → D^u_{2j−1}`.
    pub fn theta(&self) -> Option<StripId> {
        (self.foliation == Foliation::S).then(|| StripId {
            torus: partner(self.torus),
            foliation: Foliation::U,
        })
    }

    pub fn theta_inverse(&self) -> Option<StripId> {
        (self.foliation == Foliation::U).then(|| StripId {
            torus: partner(self.torus),
            foliation: Foliation::S,
        })
    }

    pub fn sigma(&self) -> StripId {
        StripId {
            torus: self.torus,
            foliation: self.foliation.other(),
        }
    }
}

fn partner(torus: u32) -> u32 {
    if torus % 2 == 1 {
        torus + 1
    } else {
        torus - 1
    }
}

/// Leaf-constant intervals of the stable strips of the tori `T_{2j−1}`, `T_{2j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripConstants {
    pub odd: (f64, f64),
    pub even: (f64, f64),
}

impl Default for StripConstants {
    fn default() -> Self {
        StripConstants {
            odd: (0.2, 0.45),
            even: (0.55, 0.8),
        }
    }
}

/// A strip on a boundary torus, inside the lamination annulus `A^{1,·}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlugStrip {
    pub id: StripId,
    pub torus: TorusRef,
    pub annulus: LaminationAnnulus,
    pub c_lo: f64,
    pub c_hi: f64,
}

impl PlugStrip {
    /// The strip as a region of the model torus, in the chart of its torus.
    pub fn model(&self) -> Result<ModelStrip> {
        let j = chart_interval(&self.annulus).0.floor_to_i64() as u32;
        ModelStrip::new(self.torus.i, Foliation::S, j, self.c_lo, self.c_hi)
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.c_lo, self.c_hi)
    }
}

/// The strips `D^s_{2j−1}, D^s_{2j}, D^u_{2j−1}, D^u_{2j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripQuad {
    pub j: u32,
    pub strips: Vec<PlugStrip>,
}

impl StripQuad {
    pub fn get(&self, id: StripId) -> Option<&PlugStrip> {
        self.strips.iter().find(|s| s.id == id)
    }

    pub fn stable_odd(&self) -> &PlugStrip {
        &self.strips[0]
    }

    pub fn stable_even(&self) -> &PlugStrip {
        &self.strips[1]
    }
}

pub fn select_strips(n: u32, j: u32, constants: &StripConstants) -> Result<StripQuad> {
    check_range("j", j as i64, 1, 2 * n as i64)?;
    let stable = |torus: u32, (c_lo, c_hi): (f64, f64)| -> Result<PlugStrip> {
        let strip = PlugStrip {
            id: StripId {
                torus,
                foliation: Foliation::S,
            },
            torus: TorusRef { i: torus, side: Side::In },
            annulus: LaminationAnnulus {
                i: torus,
                j: 1,
                foliation: Foliation::S,
            },
            c_lo,
            c_hi,
        };
        strip.model()?;
        Ok(strip)
    };
    let s_odd = stable(2 * j - 1, constants.odd)?;
    let s_even = stable(2 * j, constants.even)?;
    // D^u_i = σ(D^s_i), equivalently Θ of the partner stable strip.
    let unstable = |s: &PlugStrip| PlugStrip {
        id: s.id.sigma(),
        torus: s.torus.sigma(),
        annulus: s.annulus.sigma(),
        ..*s
    };
    let (u_odd, u_even) = (unstable(&s_odd), unstable(&s_even));
    Ok(StripQuad {
        j,
        strips: vec![s_odd, s_even, u_odd, u_even],
    })
}

/// One branch `(u, v) ↦ (μ(u − p), q + v/μ)` of the crossing model.
///
/// `u` is the normalized stable-leaf constant (expanded), `v` the
/// normalized unstable-leaf constant (contracted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineLeg {
    pub p: f64,
    pub q: f64,
}

impl AffineLeg {
    pub fn apply(&self, mu: f64, (u, v): (f64, f64)) -> (f64, f64) {
        (mu * (u - self.p), self.q + v / mu)
    }

    pub fn inverse(&self, mu: f64, (u, v): (f64, f64)) -> (f64, f64) {
        (u / mu + self.p, mu * (v - self.q))
    }

    /// The leg `S ∘ G⁻¹ ∘ S`, where `S` swaps `u` and `v`.
    pub fn swapped_inverse(&self) -> AffineLeg {
        AffineLeg { p: self.q, q: self.p }
    }
}

/// Uniformly hyperbolic affine model of the return map `(φ̄^m ∘ Θ)²`.
///
/// `legs[0]` carries the rectangle on `T_{2j−1}` across the one on
/// `T_{2j}`, `legs[1]` carries it back.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingModel {
    pub mu: f64,
    pub legs: [AffineLeg; 2],
    pub strips: StripConstants,
}

impl Default for CrossingModel {
    fn default() -> Self {
        CrossingModel::symmetric(3.0, 0.3, 0.4).expect("default crossing model is markovian")
    }
}

impl CrossingModel {
    /// A model whose second leg is `S ∘ G1⁻¹ ∘ S`.
    pub fn symmetric(mu: f64, p: f64, q: f64) -> Result<Self> {
        let first = AffineLeg { p, q };
        let model = CrossingModel {
            mu,
            legs: [first, first.swapped_inverse()],
            strips: StripConstants::default(),
        };
        model.validate()?;
        Ok(model)
    }

    pub fn with_mu(mu: f64) -> Result<Self> {
        // Keep the default offsets at the same fraction of the Markov limit.
        let scale = (1.0 - 1.0 / mu) * 1.5;
        CrossingModel::symmetric(mu, 0.3 * scale, 0.4 * scale)
    }

    /// Each leg must cross the unit square fully in both directions.
    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 1.0) {
            return Err(Error::InvalidModel(format!("expansion μ={} must exceed 1", self.mu)));
        }
        let limit = 1.0 - 1.0 / self.mu;
        for (k, leg) in self.legs.iter().enumerate() {
            for (name, v) in [("p", leg.p), ("q", leg.q)] {
                if !(0.0..=limit).contains(&v) {
                    return Err(Error::InvalidModel(format!(
                        "leg {k}: {name}={v} outside [0, {limit}], rectangles would not be markovian"
                    )));
                }
            }
        }
        let (a, b) = (self.strips.odd, self.strips.even);
        for (lo, hi) in [a, b] {
            if !(0.0 <= lo && lo < hi && hi <= 1.0) {
                return Err(Error::InvalidModel(format!("strip constants ({lo}, {hi}) are empty or out of [0, 1]")));
            }
        }
        Ok(())
    }

    /// The model seen through `σ`, which reverses the flow.
    pub fn sigma_conjugate(&self) -> CrossingModel {
        CrossingModel {
            legs: [self.legs[1].swapped_inverse(), self.legs[0].swapped_inverse()],
            ..*self
        }
    }

    /// The return map `G2 ∘ G1`.
    pub fn return_map(&self, z: (f64, f64)) -> (f64, f64) {
        self.legs[1].apply(self.mu, self.legs[0].apply(self.mu, z))
    }

    /// Affine coefficients of the return map: `u ↦ μ²u − cu`, `v ↦ cv + v/μ²`.
    fn return_coefficients(&self) -> (f64, f64) {
        let mu = self.mu;
        let [g1, g2] = self.legs;
        (mu * mu * g1.p + mu * g2.p, g2.q + g1.q / mu)
    }

    /// The contraction whose fixed point is that of [`Self::return_map`].
    fn contraction(&self, (u, v): (f64, f64)) -> (f64, f64) {
        let mu2 = self.mu * self.mu;
        let (cu, cv) = self.return_coefficients();
        ((u + cu) / mu2, cv + v / mu2)
    }

    /// Nested Markov boxes: points whose return-map orbit stays in the
    /// unit square for `depth` steps forward (in `u`) and backward (in `v`).
    pub fn markov_refinement(&self, depth: usize) -> UnitBox {
        let mut b = UnitBox::unit();
        for _ in 0..depth {
            let (u0, v0) = self.contraction((b.u.0, b.v.0));
            let (u1, v1) = self.contraction((b.u.1, b.v.1));
            b = UnitBox {
                u: (u0.max(0.0), u1.min(1.0)),
                v: (v0.max(0.0), v1.min(1.0)),
            };
        }
        b
    }

    /// Fixed point of the return map by iterating its inverse in the
    /// expanding direction and the map itself in the contracting one.
    pub fn fixed_point(&self, start: (f64, f64), tol: f64, max_iter: usize) -> Result<FixedPoint> {
        self.validate()?;
        let residual = |z: (f64, f64)| {
            let h = self.return_map(z);
            (h.0 - z.0).abs().max((h.1 - z.1).abs())
        };
        let mut z = start;
        for iterations in 0..=max_iter {
            let r = residual(z);
            if r < tol {
                return Ok(FixedPoint {
                    point: z,
                    residual: r,
                    iterations,
                });
            }
            z = self.contraction(z);
        }
        Err(Error::NonConvergence {
            iterations: max_iter,
            residual: residual(z),
        })
    }
}

/// A box in normalized leaf-constant coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitBox {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl UnitBox {
    pub fn unit() -> Self {
        UnitBox { u: (0.0, 1.0), v: (0.0, 1.0) }
    }

    pub fn contains(&self, (u, v): (f64, f64)) -> bool {
        self.u.0 <= u && u <= self.u.1 && self.v.0 <= v && v <= self.v.1
    }

    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u.0 + self.u.1), 0.5 * (self.v.0 + self.v.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
}

/// `F(x) = ln|tan(πx)|/π`, the difference of the stable and unstable profiles.
pub fn level_function(x: f64) -> f64 {
    leaf_profile(Foliation::S, x) - leaf_profile(Foliation::U, x)
}

/// Solution of `F(x) = level` in `(3/2, 2)` for R and `(1, 3/2)` for L.
pub fn solve_level(level: f64, chirality: Chirality) -> f64 {
    let t = (PI * level).exp().atan() / PI;
    match chirality {
        Chirality::R => 2.0 - t,
        Chirality::L => 1.0 + t,
    }
}

/// One component of `φ̄^m(D^u_i) ∩ D^s_i` on the torus `T_i`.
///
/// In leaf constants it is the box `a ∈ a_range`, `b ∈ b_range`; its points
/// satisfy `F(x) = b − a + level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectBox {
    pub torus: u32,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub x_range: (f64, f64),
}

impl RectBox {
    fn new(torus: u32, a_range: (f64, f64), b_range: (f64, f64), level: i64) -> Self {
        let lo = solve_level(b_range.0 - a_range.1 + level as f64, Chirality::R);
        let hi = solve_level(b_range.1 - a_range.0 + level as f64, Chirality::R);
        RectBox {
            torus,
            a_range,
            b_range,
            x_range: (lo.min(hi), lo.max(hi)),
        }
    }

    /// The reflected box under `ϑ` conjugated to the core of annulus 1.
    pub fn theta(&self) -> RectBox {
        let reflect = |x: f64| theta_about(&TorusPoint { i: self.torus, x, y: 0.0 }, 1).x;
        let (a, b) = (reflect(self.x_range.0), reflect(self.x_range.1));
        RectBox {
            x_range: (a.min(b), a.max(b)),
            ..*self
        }
    }

    /// The point of the box with normalized leaf constants `(u, v)`.
    pub fn point(&self, (u, v): (f64, f64), level: i64, chirality: Chirality) -> (f64, f64, TorusPoint<f64>) {
        let a = lerp(self.a_range, u);
        let b = lerp(self.b_range, v);
        let x = solve_level(b - a + level as f64, chirality);
        let y = leaf_profile(Foliation::S, x) + a;
        (a, b, TorusPoint::new(self.torus, x, y).expect("torus index is positive"))
    }
}

fn lerp((lo, hi): (f64, f64), t: f64) -> f64 {
    lo + (hi - lo) * t
}

/// A chosen pair of rectangle components `R̄_{2j−1}`, `R̄_{2j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleChoice {
    pub j: u32,
    pub chirality: Chirality,
    /// Level `ℓ` of the component.
    pub component: i64,
    pub odd: RectBox,
    pub even: RectBox,
}

impl RectangleChoice {
    pub fn theta(&self) -> RectangleChoice {
        RectangleChoice {
            chirality: match self.chirality {
                Chirality::R => Chirality::L,
                Chirality::L => Chirality::R,
            },
            odd: self.odd.theta(),
            even: self.even.theta(),
            ..*self
        }
    }
}

/// Component levels in enumeration order `0, 1, −1, 2, −2, …`.
pub fn component_levels() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 })
}

/// R-type components for `α_j`, independent of `m`.
pub fn r_components(model: &CrossingModel, n: u32, j: u32, count: usize) -> Result<Vec<RectangleChoice>> {
    model.validate()?;
    let quad = select_strips(n, j, &model.strips)?;
    let odd = quad.stable_odd().interval();
    let even = quad.stable_even().interval();
    for (lo, hi) in [odd, even] {
        // Both boxes of a torus use the same interval; components merge once the widths add to 1.
        if 2.0 * (hi - lo) >= 1.0 {
            return Err(Error::InvalidModel(format!(
                "strip width {} makes consecutive components overlap",
                hi - lo
            )));
        }
    }
    Ok(component_levels()
        .take(count)
        .map(|level| RectangleChoice {
            j,
            chirality: Chirality::R,
            component: level,
            odd: RectBox::new(2 * j - 1, odd, odd, level),
            even: RectBox::new(2 * j, even, even, level),
        })
        .collect())
}

/// The first `count` components used to build `α_j` in `W^m`.
pub fn rectangles(model: &CrossingModel, n: u32, m: u32, j: u32, count: usize) -> Result<Vec<RectangleChoice>> {
    let chirality = gluing_restriction(n, m, 2 * j)?.chirality();
    let r = r_components(model, n, j, count)?;
    Ok(match chirality {
        Chirality::R => r,
        Chirality::L => r.iter().map(RectangleChoice::theta).collect(),
    })
}

/// Report of [`locate_periodic_orbit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    pub m: u32,
    pub j: u32,
    pub rectangle: RectangleChoice,
    /// Normalized coordinates of the fixed point in the odd rectangle.
    pub normalized: (f64, f64),
    /// Leaf constants `(a, b)` on `T_{2j−1}` and `T_{2j}`.
    pub leaf_constants: [(f64, f64); 2],
    pub points: [TorusPoint<f64>; 2],
    pub residual: f64,
    pub iterations: usize,
    /// Tori crossed by the orbit, in order.
    pub itinerary: Vec<u32>,
}

/// Stopping residual. The contracting coordinate is only pinned to within
/// `residual / (1 − 1/μ²)`, so this sits well below the 1e-9 target.
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITER: usize = 500;

/// The periodic orbit `α_j` of the glued flow, through the rectangle
/// component `component` (a level `ℓ`).
pub fn locate_periodic_orbit(model: &CrossingModel, n: u32, m: u32, j: u32, component: i64) -> Result<PeriodicOrbit> {
    locate_periodic_orbit_from(model, n, m, j, component, (0.5, 0.5))
}

pub fn locate_periodic_orbit_from(
    model: &CrossingModel,
    n: u32,
    m: u32,
    j: u32,
    component: i64,
    start: (f64, f64),
) -> Result<PeriodicOrbit> {
    let rank = component_levels()
        .position(|l| l == component)
        .expect("every integer level is enumerated");
    let rectangle = rectangles(model, n, m, j, rank + 1)?[rank];
    let fp = model.fixed_point(start, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)?;
    let image = model.legs[0].apply(model.mu, fp.point);
    let (a0, b0, p0) = rectangle.odd.point(fp.point, component, rectangle.chirality);
    let (a1, b1, p1) = rectangle.even.point(image, component, rectangle.chirality);
    Ok(PeriodicOrbit {
        m,
        j,
        rectangle,
        normalized: fp.point,
        leaf_constants: [(a0, b0), (a1, b1)],
        points: [p0, p1],
        residual: fp.residual,
        iterations: fp.iterations,
        itinerary: itinerary(j),
    })
}

/// Tori visited by following `Θ` and the gluing from `D^s_{2j−1}` until return.
pub fn itinerary(j: u32) -> Vec<u32> {
    let start = StripId {
        torus: 2 * j - 1,
        foliation: Foliation::S,
    };
    let mut tori = vec![start.torus];
    let mut current = start;
    loop {
        let exit = current.theta().expect("stable strips have a Θ-image");
        // The gluing maps the exit torus T_i^{out} onto T_i^{in}.
        current = StripId {
            torus: exit.torus,
            foliation: Foliation::S,
        };
        if current == start {
            break;
        }
        tori.push(current.torus);
    }
    tori
}

/// Whether the local stable manifold of `α_j` is an annulus rather than a
/// Möbius band.
///
/// Each crossing of a torus transports the stable orientation by the frame
/// sign of that torus; the boundary conventions alternate with the parity
/// of `i`, so the normalized sign per crossing is the frame sign times
/// `(−1)^{i+1}`. The band is an annulus when the product is `+1`.
pub fn local_stable_annulus(n: u32, m: u32, j: u32) -> Result<bool> {
    GluingMap::new(n, m)?;
    check_range("j", j as i64, 1, 2 * n as i64)?;
    let product: i64 = itinerary(j)
        .into_iter()
        .map(|i| {
            let frame = frame_sign(i, Foliation::S, dynamical_e2(Foliation::S)).as_i64();
            let convention = if i % 2 == 1 { 1 } else { -1 };
            frame * convention
        })
        .product();
    Ok(product == 1)
}

/// `(n, m, k)` naming the flow `Z^m` on the surgered manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowDescriptor {
    pub n: u32,
    pub m: u32,
    pub k: i64,
    /// `|k|` needed for hyperbolicity, if known; metadata only.
    pub hyperbolicity_threshold: Option<u64>,
}

impl FlowDescriptor {
    pub fn new(n: u32, m: u32, k: i64) -> Result<Self> {
        GluingMap::new(n, m)?;
        if k == 0 {
            return Err(Error::Precondition("surgery coefficient k must be nonzero".into()));
        }
        Ok(FlowDescriptor {
            n,
            m,
            k,
            hyperbolicity_threshold: None,
        })
    }

    pub fn above_threshold(&self) -> Option<bool> {
        self.hyperbolicity_threshold.map(|t| self.k.unsigned_abs() >= t)
    }
}

/// Meridian and longitude of the torus bounding a tubular neighborhood of `α_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryFraming {
    pub j: u32,
    pub k: i64,
    pub meridian: H1Vector,
    pub longitude: H1Vector,
    /// Class of `μ_j + k λ_j`, the meridian after surgery.
    pub surgered_meridian: H1Vector,
}

pub fn surgery_framing(n: u32, j: u32, k: i64) -> Result<SurgeryFraming> {
    if k == 0 {
        return Err(Error::Precondition("surgery coefficient k must be nonzero".into()));
    }
    let longitude = alpha_class(j, n)?;
    let meridian = H1Vector::zero(n);
    let surgered_meridian = &meridian + &(k * &longitude);
    Ok(SurgeryFraming {
        j,
        k,
        meridian,
        longitude,
        surgered_meridian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_torus::{leaf_through, LeafKind};
    use approx::assert_abs_diff_eq;

    #[test]
    fn restriction_examples() {
        for i in 1..=8 {
            assert_eq!(gluing_restriction(2, 0, i).unwrap(), Translation::PlusHalfSigma);
        }
        assert_eq!(gluing_restriction(1, 1, 2).unwrap(), Translation::MinusHalfSigma);
        assert_eq!(gluing_restriction(1, 1, 3).unwrap(), Translation::PlusHalfSigma);
        assert!(gluing_restriction(1, 3, 1).is_err());
        assert!(gluing_restriction(1, 1, 5).is_err());
        assert!(gluing_restriction(1, 1, 0).is_err());
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(annulus_intersection_pattern(1, 1, 1, 0).unwrap(), BTreeSet::from([3, 0]));
        assert_eq!(annulus_intersection_pattern(1, 0, 1, 0).unwrap(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn one_compact_leaf_inside_each_image() {
        for n in 1..=2 {
            for m in 0..=2 * n {
                for i in 1..=4 * n {
                    for j in 0..period(i) as u32 {
                        let leaves = compact_leaves_inside(n, m, i, j).unwrap();
                        assert_eq!(leaves.len(), 1);
                        let pattern: Vec<u32> = annulus_intersection_pattern(n, m, i, j).unwrap().into_iter().collect();
                        assert_eq!(pattern.len(), 2);
                    }
                }
            }
        }
    }

    #[test]
    fn strip_examples() {
        let q = select_strips(1, 1, &StripConstants::default()).unwrap();
        let s1 = q.get(StripId { torus: 1, foliation: Foliation::S }).unwrap();
        assert_eq!(s1.annulus, LaminationAnnulus { i: 1, j: 1, foliation: Foliation::S });
        let image = q.get(s1.id.theta().unwrap()).unwrap();
        assert_eq!(image.annulus, LaminationAnnulus { i: 2, j: 1, foliation: Foliation::U });
        for s in q.strips.iter().filter(|s| s.id.foliation == Foliation::S) {
            let st = s.id.theta().unwrap().sigma();
            assert_eq!(st, StripId { torus: partner(s.id.torus), foliation: Foliation::S });
            assert_eq!(st.theta().unwrap().sigma(), s.id);
        }
        for s in q.strips.iter().filter(|s| s.id.foliation == Foliation::U) {
            let ts = s.id.sigma().theta().unwrap();
            assert_eq!(ts.sigma().theta().unwrap(), s.id);
            assert_eq!(s.id.theta_inverse().unwrap().theta().unwrap(), s.id);
        }
        assert!(select_strips(1, 3, &StripConstants::default()).is_err());
    }

    #[test]
    fn rectangle_boxes_solve_the_level_equation() {
        let model = CrossingModel::default();
        for choice in r_components(&model, 2, 2, 5).unwrap() {
            for rect in [choice.odd, choice.even] {
                let (a, b, p) = rect.point((0.3, 0.8), choice.component, Chirality::R);
                assert!(p.x > rect.x_range.0 - 1e-12 && p.x < rect.x_range.1 + 1e-12);
                let cs = match leaf_through(&p, Foliation::S).kind {
                    LeafKind::Noncompact { c, annulus } => {
                        assert_eq!(annulus.j, 1);
                        c
                    }
                    k => panic!("{k:?}"),
                };
                assert_abs_diff_eq!(cs, a, epsilon = 1e-9);
                // The glued unstable leaf through p has constant b in the exit chart.
                let back = TorusPoint::new(p.i, p.x - 0.5, p.y).unwrap();
                match leaf_through(&back, Foliation::S).kind {
                    LeafKind::Noncompact { c, annulus } => {
                        assert_eq!(annulus.j, 1);
                        assert_abs_diff_eq!(c, b, epsilon = 1e-9);
                    }
                    k => panic!("{k:?}"),
                }
            }
        }
    }

    #[test]
    fn l_components_are_theta_images() {
        let model = CrossingModel::default();
        let l = rectangles(&model, 2, 2, 1, 4).unwrap();
        let r = rectangles(&model, 2, 0, 1, 4).unwrap();
        for (lc, rc) in l.iter().zip(&r) {
            assert_eq!(lc.chirality, Chirality::L);
            assert_eq!(*lc, rc.theta());
            assert!(lc.odd.x_range.0 >= 1.0 && lc.odd.x_range.1 <= 1.5);
            assert!(rc.odd.x_range.0 >= 1.5 && rc.odd.x_range.1 <= 2.0);
        }
        assert!(rectangles(&model, 2, 2, 1, 0).unwrap().is_empty());
    }

    #[test]
    fn components_independent_of_m_above_j() {
        let model = CrossingModel::default();
        for j in 1..=4 {
            for m in 0..j {
                for m2 in 0..j {
                    assert_eq!(
                        rectangles(&model, 2, m, j, 5).unwrap(),
                        rectangles(&model, 2, m2, j, 5).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn invalid_models_rejected() {
        assert!(CrossingModel::symmetric(1.0, 0.0, 0.0).is_err());
        assert!(CrossingModel::symmetric(3.0, 0.9, 0.1).is_err());
        let mut wide = CrossingModel::default();
        wide.strips.odd = (0.0, 0.6);
        assert!(r_components(&wide, 1, 1, 1).is_err());
        let mut empty = CrossingModel::default();
        empty.strips.even = (0.5, 0.5);
        assert!(rectangles(&empty, 1, 0, 1, 1).is_err());
    }

    #[test]
    fn fixed_point_matches_closed_form() {
        let model = CrossingModel::default();
        let mu: f64 = 3.0;
        let (p, q) = (0.3, 0.4);
        let expected = mu * (mu * p + q) / (mu * mu - 1.0);
        let orbit = locate_periodic_orbit(&model, 1, 0, 1, 0).unwrap();
        assert_abs_diff_eq!(orbit.normalized.0, expected, epsilon = 1e-9);
        assert_abs_diff_eq!(orbit.normalized.1, expected, epsilon = 1e-9);
        assert!(orbit.residual < 1e-9);
        assert_eq!(orbit.itinerary, vec![1, 2]);
    }

    #[test]
    fn fixed_point_from_corners() {
        let model = CrossingModel::default();
        let base = model.fixed_point((0.5, 0.5), 1e-12, 500).unwrap().point;
        for corner in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            let fp = model.fixed_point(corner, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER).unwrap();
            assert_abs_diff_eq!(fp.point.0, base.0, epsilon = 1e-9);
            assert_abs_diff_eq!(fp.point.1, base.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn refinement_keeps_the_fixed_point() {
        let model = CrossingModel::default();
        let fp = model.fixed_point((0.5, 0.5), 1e-12, 500).unwrap().point;
        let mut previous = UnitBox::unit();
        for depth in 1..8 {
            let b = model.markov_refinement(depth);
            assert!(b.contains(fp));
            assert!(previous.contains((b.u.0, b.v.0)) && previous.contains((b.u.1, b.v.1)));
            let again = model.fixed_point(b.center(), 1e-12, 500).unwrap().point;
            assert!(b.contains(again) && UnitBox::unit().contains(again));
            previous = b;
        }
    }

    #[test]
    fn sigma_conjugate_swaps_the_fixed_point() {
        let model = CrossingModel {
            legs: [AffineLeg { p: 0.1, q: 0.5 }, AffineLeg { p: 0.2, q: 0.05 }],
            ..CrossingModel::default()
        };
        let a = model.fixed_point((0.5, 0.5), 1e-12, 500).unwrap().point;
        let b = model.sigma_conjugate().fixed_point((0.5, 0.5), 1e-12, 500).unwrap().point;
        assert_abs_diff_eq!(a.0, b.1, epsilon = 1e-10);
        assert_abs_diff_eq!(a.1, b.0, epsilon = 1e-10);
        assert_eq!(model.sigma_conjugate().sigma_conjugate(), model);
        let sym = CrossingModel::default();
        assert_eq!(sym.sigma_conjugate(), sym);
    }

    #[test]
    fn framing_examples() {
        let f = surgery_framing(2, 1, 1).unwrap();
        assert_eq!(f.surgered_meridian, alpha_class(1, 2).unwrap());
        assert!(f.meridian.is_zero());
        let f = surgery_framing(2, 2, -2).unwrap();
        assert_eq!(f.surgered_meridian, -2 * &alpha_class(2, 2).unwrap());
        assert_eq!(f.surgered_meridian.at(4), -2);
        assert!(surgery_framing(2, 1, 0).is_err());
        for k in [-5, 1, 9] {
            for j in 1..=4 {
                assert_eq!(surgery_framing(2, j, k).unwrap().surgered_meridian.at(2 * j as usize), k);
            }
        }
    }

    #[test]
    fn stable_manifolds_are_annuli() {
        for n in 1..=3 {
            for m in 0..=2 * n {
                for j in 1..=2 * n {
                    assert!(local_stable_annulus(n, m, j).unwrap());
                }
            }
        }
        assert!(local_stable_annulus(1, 0, 3).is_err());
    }

    #[test]
    fn flow_descriptor() {
        let mut d = FlowDescriptor::new(2, 3, -7).unwrap();
        assert_eq!(d.above_threshold(), None);
        d.hyperbolicity_threshold = Some(5);
        assert_eq!(d.above_threshold(), Some(true));
        assert!(FlowDescriptor::new(2, 5, 7).is_err());
        assert!(FlowDescriptor::new(2, 1, 0).is_err());
    }
}
