//! Intersection-number calculus over the transverse tori `T_1..T_{4n}`.
//!
//! A homology class is represented only through its algebraic intersection
//! numbers with the `4n` tori. Periodic orbits cross the tori positively,
//! so every orbit class has nonnegative entries; the decision procedures
//! below look for configurations that would force a negative entry.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_range, Error, Result};
use crate::types::{Handedness, Sign};

/// Intersection numbers with `T_1..T_{4n}`; `t[0]` is the number for `T_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct H1Vector {
    pub t: Vec<i64>,
}

impl H1Vector {
    pub fn zero(n: u32) -> Self {
        H1Vector {
            t: vec![0; 4 * n as usize],
        }
    }

    pub fn from_vec(t: Vec<i64>) -> Result<Self> {
        if t.is_empty() || !t.len().is_multiple_of(4) {
            return Err(Error::Malformed(format!(
                "H1 vector length {} is not a positive multiple of 4",
                t.len()
            )));
        }
        Ok(H1Vector { t })
    }

    pub fn n(&self) -> u32 {
        (self.t.len() / 4) as u32
    }

    /// Intersection number with `T_i` (1-based).
    pub fn at(&self, i: usize) -> i64 {
        self.t[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.t.iter().all(|&v| v == 0)
    }

    /// First torus (1-based) with a negative entry.
    pub fn first_negative(&self) -> Option<usize> {
        self.t.iter().position(|&v| v < 0).map(|p| p + 1)
    }
}

impl Add for &H1Vector {
    type Output = H1Vector;
    fn add(self, rhs: &H1Vector) -> H1Vector {
        assert_eq!(self.t.len(), rhs.t.len(), "H1 vectors of different rank");
        H1Vector {
            t: self.t.iter().zip(&rhs.t).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &H1Vector {
    type Output = H1Vector;
    fn sub(self, rhs: &H1Vector) -> H1Vector {
        self + &(-rhs)
    }
}

impl Neg for &H1Vector {
    type Output = H1Vector;
    fn neg(self) -> H1Vector {
        H1Vector {
            t: self.t.iter().map(|v| -v).collect(),
        }
    }
}

impl Mul<&H1Vector> for i64 {
    type Output = H1Vector;
    fn mul(self, rhs: &H1Vector) -> H1Vector {
        H1Vector {
            t: rhs.t.iter().map(|v| self * v).collect(),
        }
    }
}

/// Class of the orbit `α_j`: one crossing each with `T_{2j−1}` and `T_{2j}`.
pub fn alpha_class(j: u32, n: u32) -> Result<H1Vector> {
    check_range("j", j as i64, 1, 2 * n as i64)?;
    let mut v = H1Vector::zero(n);
    v.t[2 * j as usize - 2] = 1;
    v.t[2 * j as usize - 1] = 1;
    Ok(v)
}

/// Crossing counts `s_j` of the orbits `α_j` through a new Birkhoff annulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewLozengeData {
    pub s: Vec<u32>,
}

impl NewLozengeData {
    /// Validated data: length `2n`, not identically zero.
    pub fn new(s: Vec<u32>) -> Result<Self> {
        let data = NewLozengeData { s };
        data.validate()?;
        Ok(data)
    }

    /// Crossing data of a single orbit `α_j`.
    pub fn unit(j: u32, n: u32) -> Result<Self> {
        check_range("j", j as i64, 1, 2 * n as i64)?;
        let mut s = vec![0; 2 * n as usize];
        s[j as usize - 1] = 1;
        Ok(NewLozengeData { s })
    }

    pub fn validate(&self) -> Result<()> {
        if self.s.is_empty() {
            return Err(Error::Malformed("empty crossing vector".into()));
        }
        if self.s.iter().all(|&v| v == 0) {
            return Err(Error::Precondition(
                "a new Birkhoff annulus must be crossed by some α_j".into(),
            ));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        (self.s.len() / 2) as u32
    }

    /// The class `Σ_j s_j [α_j]`.
    pub fn weighted_class(&self) -> H1Vector {
        let n = self.n();
        let mut v = H1Vector::zero(n);
        for (j, &sj) in self.s.iter().enumerate() {
            v.t[2 * j] += sj as i64;
            v.t[2 * j + 1] += sj as i64;
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigKind {
    TwoNewAdjacent,
    OldNewOldBridge,
}

/// One orbit/annulus configuration in the orbit space.
///
/// `orbit_classes` lists the corner orbits in order; `None` marks an orbit
/// whose class is unknown (any nonnegative vector). `signs` holds one
/// co-orientation flag per new annulus: the relation across annulus `A_l`
/// reads `[left] + [right] = signs[l] · k · Σ_j s_l^j [α_j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub kind: ConfigKind,
    pub orbit_classes: Vec<Option<H1Vector>>,
    pub new_annuli: Vec<NewLozengeData>,
    pub signs: Vec<Sign>,
    pub k: i64,
}

impl Configuration {
    /// Two new lozenges sharing the corner `ω2`, with the default
    /// co-orientation flags `(−, +)`.
    pub fn two_new_adjacent(
        omega: [Option<H1Vector>; 3],
        s1: NewLozengeData,
        s2: NewLozengeData,
        k: i64,
    ) -> Self {
        Configuration {
            kind: ConfigKind::TwoNewAdjacent,
            orbit_classes: omega.to_vec(),
            new_annuli: vec![s1, s2],
            signs: vec![Sign::Minus, Sign::Plus],
            k,
        }
    }

    /// Old corners `ω1`, `ω2` joined by one new lozenge.
    pub fn bridge(omega1: H1Vector, omega2: H1Vector, s: NewLozengeData, k: i64) -> Self {
        Configuration {
            kind: ConfigKind::OldNewOldBridge,
            orbit_classes: vec![Some(omega1), Some(omega2)],
            new_annuli: vec![s],
            signs: vec![Sign::Minus],
            k,
        }
    }

    fn check_arity(&self, kind: ConfigKind, orbits: usize, annuli: usize) -> Result<()> {
        if self.kind != kind
            || self.orbit_classes.len() != orbits
            || self.new_annuli.len() != annuli
            || self.signs.len() != annuli
        {
            return Err(Error::Malformed(format!(
                "{:?} expects {orbits} orbit classes and {annuli} annuli, got {:?} with {} and {}",
                kind,
                self.kind,
                self.orbit_classes.len(),
                self.new_annuli.len()
            )));
        }
        let n = self.new_annuli[0].n();
        let ranks_agree = self.new_annuli.iter().all(|a| a.n() == n && a.s.len() == 2 * n as usize)
            && self.orbit_classes.iter().flatten().all(|c| c.n() == n);
        if !ranks_agree {
            return Err(Error::Malformed("inputs of different rank n".into()));
        }
        Ok(())
    }
}

/// Which corner orbit of a configuration is forced to be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitRole {
    Omega1,
    Omega2,
    Omega3,
}

/// The sign argument behind a `Forbidden` verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based torus index.
    pub torus: usize,
    pub role: OrbitRole,
    /// The largest value `Int(role, T_torus)` can take, always negative.
    /// When two known classes contradict each other it is minus their gap.
    pub bound: i64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Int({:?}, T_{}) <= {} < 0 contradicts positive transversality",
            self.role, self.torus, self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Decision {
    Forbidden(Witness),
    Consistent,
}

impl Decision {
    pub fn is_forbidden(&self) -> bool {
        matches!(self, Decision::Forbidden(_))
    }
}

/// Lemma on adjacent new lozenges, as an integer feasibility problem.
///
/// With `A = ε1 k S1` and `B = ε2 k S2`, the relations
/// `ω1 + ω2 = A` and `ω3 + ω2 = B` are solved torus by torus over
/// nonnegative integers, pinning the orbits whose class is known.
pub fn decide_two_new_adjacent(cfg: &Configuration) -> Result<Decision> {
    cfg.check_arity(ConfigKind::TwoNewAdjacent, 3, 2)?;
    if cfg.k == 0 {
        return Err(Error::Precondition("surgery coefficient k must be nonzero".into()));
    }
    for a in &cfg.new_annuli {
        a.validate()?;
    }
    let rhs: Vec<H1Vector> = cfg
        .new_annuli
        .iter()
        .zip(&cfg.signs)
        .map(|(a, sign)| (sign.as_i64() * cfg.k) * &a.weighted_class())
        .collect();
    let value = |role: usize, i: usize| cfg.orbit_classes[role].as_ref().map(|c| c.at(i));
    let n_tori = rhs[0].t.len();
    for i in 1..=n_tori {
        let (a, b) = (rhs[0].at(i), rhs[1].at(i));
        if let Some(w) = torus_witness(i, a, b, [value(0, i), value(1, i), value(2, i)]) {
            return Ok(Decision::Forbidden(w));
        }
    }
    Ok(Decision::Consistent)
}

/// Feasibility of `w1 + w2 = a`, `w3 + w2 = b` with `w ≥ 0` on one torus.
fn torus_witness(i: usize, a: i64, b: i64, fixed: [Option<i64>; 3]) -> Option<Witness> {
    let fail = |role, bound| Some(Witness { torus: i, role, bound });
    let roles = [OrbitRole::Omega1, OrbitRole::Omega2, OrbitRole::Omega3];
    for (role, v) in roles.iter().zip(fixed) {
        if let Some(v) = v.filter(|v| *v < 0) {
            return fail(*role, v);
        }
    }
    // Every pinned class determines w2.
    let mut determined: Vec<(OrbitRole, i64)> = Vec::new();
    if let Some(w2) = fixed[1] {
        determined.push((OrbitRole::Omega2, w2));
    }
    if let Some(w1) = fixed[0] {
        determined.push((OrbitRole::Omega1, a - w1));
    }
    if let Some(w3) = fixed[2] {
        determined.push((OrbitRole::Omega3, b - w3));
    }
    match determined.first() {
        None => {
            // w2 free: the best choice is w2 = 0.
            if a < 0 {
                return fail(OrbitRole::Omega1, a);
            }
            if b < 0 {
                return fail(OrbitRole::Omega3, b);
            }
            None
        }
        Some(&(_, w2)) => {
            if let Some(&(role, other)) = determined.iter().find(|(_, v)| *v != w2) {
                // Two pinned classes force different values of ω2; report the gap.
                return fail(role, -(other - w2).abs());
            }
            if w2 < 0 {
                return fail(OrbitRole::Omega2, w2);
            }
            if fixed[0].is_none() && a - w2 < 0 {
                return fail(OrbitRole::Omega1, a - w2);
            }
            if fixed[2].is_none() && b - w2 < 0 {
                return fail(OrbitRole::Omega3, b - w2);
            }
            None
        }
    }
}

/// Lemma on an old–new–old bridge.
///
/// Both old corners are disjoint from the tori, so their classes vanish and
/// the relation across the new annulus forces `k · s_j = 0` for every `j`.
pub fn decide_bridge(cfg: &Configuration) -> Result<Decision> {
    cfg.check_arity(ConfigKind::OldNewOldBridge, 2, 1)?;
    let classes: Vec<&H1Vector> = cfg.orbit_classes.iter().flatten().collect();
    if classes.len() != 2 || classes.iter().any(|c| !c.is_zero()) {
        return Err(Error::Precondition(
            "both old corner classes must be known and vanish on every torus".into(),
        ));
    }
    let rhs = (cfg.signs[0].as_i64() * cfg.k) * &cfg.new_annuli[0].weighted_class();
    let lhs = classes[0] + classes[1];
    for j0 in 1..=cfg.new_annuli[0].s.len() {
        let i = 2 * j0;
        if lhs.at(i) != rhs.at(i) {
            return Ok(Decision::Forbidden(Witness {
                torus: i,
                role: OrbitRole::Omega2,
                bound: -(rhs.at(i) - lhs.at(i)).abs(),
            }));
        }
    }
    Ok(Decision::Consistent)
}

/// Lemma on even extensions of an old odd SA annulus.
///
/// The new boundary orbit `β` satisfies `β = −α − kS` for an R-type
/// annulus and `β = −α + kS` for an L-type one, where `α` is the old
/// boundary class and `S = Σ s_j α_j`. Only the sign of `k` matters.
pub fn decide_sa_extension(
    handedness: Handedness,
    k_sign: Sign,
    s: &NewLozengeData,
    boundary: &H1Vector,
) -> Result<Decision> {
    s.validate()?;
    let class = s.weighted_class();
    if class.t.len() != boundary.t.len() {
        return Err(Error::Malformed("inputs of different rank n".into()));
    }
    let chirality = match handedness {
        Handedness::R => -1,
        Handedness::L => 1,
    };
    let beta = &(-boundary) + &((chirality * k_sign.as_i64()) * &class);
    Ok(match beta.first_negative() {
        Some(i) => Decision::Forbidden(Witness {
            torus: i,
            role: OrbitRole::Omega2,
            bound: beta.at(i),
        }),
        None => Decision::Consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum PowerObstruction {
    Obstructed { torus: usize },
    Unobstructed,
}

/// Necessary condition for `a^p` and `b^q` to be freely homotopic.
///
/// `Unobstructed` only means the intersection numbers agree; it is not a
/// proof that the powers are homotopic.
pub fn power_homotopy_obstruction(p: i64, q: i64, a: &H1Vector, b: &H1Vector) -> Result<PowerObstruction> {
    if p == 0 || q == 0 {
        return Err(Error::Precondition("powers must be nonzero".into()));
    }
    if a.t.len() != b.t.len() {
        return Err(Error::Malformed("inputs of different rank n".into()));
    }
    Ok(
        match a.t.iter().zip(&b.t).position(|(x, y)| p * x != q * y) {
            Some(pos) => PowerObstruction::Obstructed { torus: pos + 1 },
            None => PowerObstruction::Unobstructed,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[u32]) -> NewLozengeData {
        NewLozengeData::new(v.to_vec()).unwrap()
    }

    #[test]
    fn alpha_class_examples() {
        assert_eq!(alpha_class(1, 1).unwrap().t, vec![1, 1, 0, 0]);
        assert_eq!(alpha_class(2, 2).unwrap().t, vec![0, 0, 1, 1, 0, 0, 0, 0]);
        let total = (1..=6).fold(H1Vector::zero(3), |acc, j| &acc + &alpha_class(j, 3).unwrap());
        assert!(total.t.iter().all(|&v| v == 1));
        assert!(alpha_class(0, 1).is_err());
        assert!(alpha_class(3, 1).is_err());
    }

    #[test]
    fn alpha_classes_independent() {
        // Each class owns the coordinate 2j−1 exclusively, so the matrix is in echelon form.
        for n in 1..=4 {
            for j in 1..=2 * n {
                for other in 1..=2 * n {
                    let v = alpha_class(other, n).unwrap();
                    assert_eq!(v.at(2 * j as usize - 1) != 0, j == other);
                }
            }
        }
    }

    #[test]
    fn two_new_adjacent_zero_boundary() {
        let cfg = Configuration::two_new_adjacent(
            [Some(H1Vector::zero(1)), None, None],
            s(&[0, 1]),
            s(&[0, 1]),
            7,
        );
        match decide_two_new_adjacent(&cfg).unwrap() {
            Decision::Forbidden(w) => {
                assert_eq!(w.torus, 3);
                assert_eq!(w.role, OrbitRole::Omega2);
                assert_eq!(w.bound, -7);
            }
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn two_new_adjacent_rejects_empty_lozenge() {
        let zero = NewLozengeData { s: vec![0, 0] };
        let cfg = Configuration::two_new_adjacent([None, None, None], zero.clone(), zero, 7);
        assert!(matches!(decide_two_new_adjacent(&cfg), Err(Error::Precondition(_))));
        assert!(NewLozengeData::new(vec![0, 0]).is_err());
    }

    #[test]
    fn two_new_adjacent_arity() {
        let mut cfg = Configuration::two_new_adjacent([None, None, None], s(&[1, 0]), s(&[1, 0]), 3);
        cfg.orbit_classes.pop();
        assert!(matches!(decide_two_new_adjacent(&cfg), Err(Error::Malformed(_))));
        let b = Configuration::bridge(H1Vector::zero(1), H1Vector::zero(1), s(&[1, 0]), 3);
        assert!(matches!(decide_two_new_adjacent(&b), Err(Error::Malformed(_))));
    }

    #[test]
    fn bridge_examples() {
        let z = || H1Vector::zero(1);
        let cfg = Configuration::bridge(z(), z(), s(&[1, 0]), 7);
        assert!(decide_bridge(&cfg).unwrap().is_forbidden());
        match decide_bridge(&cfg).unwrap() {
            Decision::Forbidden(w) => assert_eq!(w.torus, 2),
            d => panic!("{d:?}"),
        }
        let vacuous = Configuration::bridge(z(), z(), NewLozengeData { s: vec![0, 0] }, 7);
        assert_eq!(decide_bridge(&vacuous).unwrap(), Decision::Consistent);
        let bad = Configuration::bridge(alpha_class(1, 1).unwrap(), z(), s(&[1, 0]), 7);
        assert!(matches!(decide_bridge(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn sa_extension_examples() {
        let z = H1Vector::zero(2);
        let r = decide_sa_extension(Handedness::R, Sign::Plus, &s(&[0, 1, 0, 0]), &z).unwrap();
        assert!(r.is_forbidden());
        let l = decide_sa_extension(Handedness::L, Sign::Minus, &s(&[1, 0, 0, 0]), &z).unwrap();
        assert!(l.is_forbidden());
        for v in [[1, 0, 0, 0], [0, 2, 1, 0], [3, 3, 3, 3]] {
            let d = decide_sa_extension(Handedness::R, Sign::Minus, &s(&v), &z).unwrap();
            assert_eq!(d, Decision::Consistent);
        }
    }

    #[test]
    fn power_obstruction_examples() {
        let v = |t: &[i64]| H1Vector::from_vec(t.to_vec()).unwrap();
        assert_eq!(
            power_homotopy_obstruction(1, 1, &v(&[1, 1, 0, 0]), &v(&[0, 0, 1, 1])).unwrap(),
            PowerObstruction::Obstructed { torus: 1 }
        );
        assert_eq!(
            power_homotopy_obstruction(2, 1, &v(&[1, 0, 0, 0]), &v(&[2, 0, 0, 0])).unwrap(),
            PowerObstruction::Unobstructed
        );
        assert_eq!(
            power_homotopy_obstruction(3, 2, &v(&[1, 0, 0, 0]), &v(&[1, 0, 0, 0])).unwrap(),
            PowerObstruction::Obstructed { torus: 1 }
        );
        assert!(power_homotopy_obstruction(0, 2, &v(&[1, 0, 0, 0]), &v(&[1, 0, 0, 0])).is_err());
    }

    fn crossing(n: u32) -> impl Strategy<Value = NewLozengeData> {
        prop::collection::vec(0u32..=3, 2 * n as usize)
            .prop_filter("nonzero", |v| v.iter().any(|&x| x > 0))
            .prop_map(|s| NewLozengeData { s })
    }

    proptest! {
        #[test]
        fn exactly_one_handedness_extends(s in crossing(2), k in prop_oneof![-100i64..=-1, 1i64..=100]) {
            let z = H1Vector::zero(2);
            let sign = Sign::of(k).unwrap();
            let l = decide_sa_extension(Handedness::L, sign, &s, &z).unwrap().is_forbidden();
            let r = decide_sa_extension(Handedness::R, sign, &s, &z).unwrap().is_forbidden();
            prop_assert!(l != r);
        }

        #[test]
        fn relabeling_alpha_indices(
            s1 in crossing(2),
            s2 in crossing(2),
            k in prop_oneof![-5i64..=-1, 1i64..=5],
            perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
            pin_first in any::<bool>(),
        ) {
            let permute_s = |d: &NewLozengeData| {
                let mut out = vec![0; 4];
                for (j, &v) in d.s.iter().enumerate() {
                    out[perm[j]] = v;
                }
                NewLozengeData { s: out }
            };
            let pin = if pin_first { Some(H1Vector::zero(2)) } else { None };
            let a = Configuration::two_new_adjacent([pin.clone(), None, None], s1.clone(), s2.clone(), k);
            let b = Configuration::two_new_adjacent([pin, None, None], permute_s(&s1), permute_s(&s2), k);
            prop_assert_eq!(
                decide_two_new_adjacent(&a).unwrap().is_forbidden(),
                decide_two_new_adjacent(&b).unwrap().is_forbidden()
            );
            let z = || H1Vector::zero(2);
            let c = Configuration::bridge(z(), z(), s1.clone(), k);
            let d = Configuration::bridge(z(), z(), permute_s(&s1), k);
            prop_assert_eq!(decide_bridge(&c).unwrap().is_forbidden(), decide_bridge(&d).unwrap().is_forbidden());
        }
    }
}
