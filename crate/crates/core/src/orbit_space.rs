//! Lozenges, chains and fan-type clusters in the orbit space of `Z^m`.
//!
//! Nothing here is embedded in the plane. A lozenge is two corner orbits
//! together with the quadrant it occupies at each corner; two lozenges are
//! edge-adjacent when they share a half-leaf, i.e. a (corner, foliation,
//! half) triple.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::handedness::{SAAnnulus, SaComponent, SaTag};
use crate::homology::{decide_bridge, decide_two_new_adjacent, Configuration, Decision, H1Vector, NewLozengeData, Witness};
use crate::plug_model::BoundaryOrbit;
use crate::types::{Foliation, Sign};

/// Identifier of a corner orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerId {
    /// A lift of the boundary orbit `γ_i^{j,±}`, translated `deck` times by `α`.
    Old { i: u32, j: u32, sign: Sign, deck: i64 },
    /// An orbit created by a new lozenge.
    Fresh(u32),
}

impl CornerId {
    pub fn is_old(&self) -> bool {
        matches!(self, CornerId::Old { .. })
    }

    pub fn boundary_orbit(&self) -> Option<BoundaryOrbit> {
        match *self {
            CornerId::Old { i, j, sign, .. } => Some(BoundaryOrbit::new(i, j, sign)),
            CornerId::Fresh(_) => None,
        }
    }

    pub fn deck_shift(&self, d: i64) -> CornerId {
        match *self {
            CornerId::Old { i, j, sign, deck } => CornerId::Old { i, j, sign, deck: deck + d },
            fresh => fresh,
        }
    }
}

impl fmt::Display for CornerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CornerId::Old { i, j, sign, deck } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                write!(f, "γ_{i}^{{{j},{s}}}@{deck}")
            }
            CornerId::Fresh(id) => write!(f, "ν{id}"),
        }
    }
}

/// Which stable and unstable half-leaves bound a quadrant at a corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Quadrant {
    pub s: Sign,
    pub u: Sign,
}

impl Quadrant {
    pub const PP: Quadrant = Quadrant { s: Sign::Plus, u: Sign::Plus };

    pub fn half(&self, foliation: Foliation) -> Sign {
        match foliation {
            Foliation::S => self.s,
            Foliation::U => self.u,
        }
    }

    /// The quadrant whose `first` half is positive and other half negative.
    fn leading(first: Foliation) -> Quadrant {
        match first {
            Foliation::S => Quadrant { s: Sign::Plus, u: Sign::Minus },
            Foliation::U => Quadrant { s: Sign::Minus, u: Sign::Plus },
        }
    }

    /// The quadrant across the half-leaf of `foliation`.
    fn across(&self, foliation: Foliation) -> Quadrant {
        match foliation {
            Foliation::S => Quadrant { u: self.u.flip(), ..*self },
            Foliation::U => Quadrant { s: self.s.flip(), ..*self },
        }
    }
}

/// One of the four edges of a lozenge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfLeaf {
    pub corner: CornerId,
    pub foliation: Foliation,
    pub half: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceId {
    /// Slot `k` of the periodic chain of `T_i′`.
    Old { i: u32, slot: i64 },
    New(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Age {
    Old,
    New,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lozenge {
    pub id: PieceId,
    pub corner_a: CornerId,
    pub corner_b: CornerId,
    pub quad_a: Quadrant,
    pub quad_b: Quadrant,
    /// Present exactly for new lozenges.
    pub new_data: Option<NewLozengeData>,
}

impl Lozenge {
    pub fn age(&self) -> Age {
        match self.id {
            PieceId::Old { .. } => Age::Old,
            PieceId::New(_) => Age::New,
        }
    }

    pub fn edges(&self) -> [HalfLeaf; 4] {
        let e = |corner, q: Quadrant, foliation| HalfLeaf {
            corner,
            foliation,
            half: q.half(foliation),
        };
        [
            e(self.corner_a, self.quad_a, Foliation::S),
            e(self.corner_a, self.quad_a, Foliation::U),
            e(self.corner_b, self.quad_b, Foliation::S),
            e(self.corner_b, self.quad_b, Foliation::U),
        ]
    }

    pub fn corners(&self) -> [CornerId; 2] {
        [self.corner_a, self.corner_b]
    }

    pub fn quadrant_at(&self, corner: CornerId) -> Option<Quadrant> {
        if corner == self.corner_a {
            Some(self.quad_a)
        } else if corner == self.corner_b {
            Some(self.quad_b)
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.corner_a == self.corner_b {
            return Err(Error::Malformed(format!("lozenge {:?} has equal corners", self.id)));
        }
        match (self.age(), &self.new_data) {
            (Age::Old, None) => Ok(()),
            (Age::New, Some(d)) => d.validate(),
            (Age::Old, Some(_)) => Err(Error::Malformed(format!("old lozenge {:?} carries new data", self.id))),
            (Age::New, None) => Err(Error::Malformed(format!("new lozenge {:?} lacks crossing data", self.id))),
        }
    }

    pub fn deck_shift(&self, d: i64, period: i64) -> Lozenge {
        Lozenge {
            id: match self.id {
                PieceId::Old { i, slot } => PieceId::Old { i, slot: slot + d * period },
                new => new,
            },
            corner_a: self.corner_a.deck_shift(d),
            corner_b: self.corner_b.deck_shift(d),
            ..self.clone()
        }
    }
}

/// The foliation of the shared edge, if the two lozenges share one.
pub fn edge_adjacent(a: &Lozenge, b: &Lozenge) -> Option<Foliation> {
    let ea = a.edges();
    b.edges().iter().find(|e| ea.contains(e)).map(|e| e.foliation)
}

/// An ordered fan: consecutive lozenges share an edge of type `labels[l]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanCluster {
    pub lozenges: Vec<Lozenge>,
    pub labels: Vec<Foliation>,
    pub tag: Option<SaTag>,
}

impl FanCluster {
    pub fn len(&self) -> usize {
        self.lozenges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lozenges.is_empty()
    }

    /// Alternation, recorded labels, and no corner shared by three lozenges.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() + 1 != self.lozenges.len().max(1) {
            return Err(Error::Malformed(format!(
                "{} lozenges need {} labels, got {}",
                self.lozenges.len(),
                self.lozenges.len().saturating_sub(1),
                self.labels.len()
            )));
        }
        check_alternation(&self.labels)?;
        for (l, pair) in self.lozenges.windows(2).enumerate() {
            if edge_adjacent(&pair[0], &pair[1]) != Some(self.labels[l]) {
                return Err(Error::Malformed(format!("lozenges {l} and {} do not share a {} edge", l + 1, self.labels[l])));
            }
        }
        if let Some(c) = triple_corner(&self.lozenges) {
            return Err(Error::Malformed(format!("three lozenges share the corner {c}")));
        }
        Ok(())
    }
}

pub(crate) fn check_alternation(labels: &[Foliation]) -> Result<()> {
    match labels.windows(2).position(|w| w[0] == w[1]) {
        Some(l) => Err(Error::Alternation(l + 1)),
        None => Ok(()),
    }
}

fn triple_corner(lozenges: &[Lozenge]) -> Option<CornerId> {
    let mut count: BTreeMap<CornerId, usize> = BTreeMap::new();
    for c in lozenges.iter().flat_map(Lozenge::corners) {
        *count.entry(c).or_default() += 1;
    }
    count.into_iter().find(|&(_, c)| c >= 3).map(|(c, _)| c)
}

/// The `ℤ`-indexed chain of lozenges attached to the torus `T_i′`.
///
/// `L_k` has corners `v_k`, `v_{k+1}`; it occupies the `(s+, u+)` quadrant
/// at `v_k`, and at `v_{k+1}` the quadrant sharing its `f_k` half-leaf with
/// `L_{k+1}`, where `f_k` is `s` for odd `k` and `u` for even `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OldChain {
    pub i: u32,
}

pub fn build_old_chain(i: u32) -> Result<OldChain> {
    if i == 0 {
        return Err(Error::OutOfRange("torus index i must be >= 1".into()));
    }
    Ok(OldChain { i })
}

impl OldChain {
    pub fn period(&self) -> i64 {
        4 * self.i as i64 + 4
    }

    pub fn corner(&self, k: i64) -> CornerId {
        let p = self.period();
        let r = k.rem_euclid(p);
        CornerId::Old {
            i: self.i,
            j: (r / 2) as u32,
            sign: if r % 2 == 0 { Sign::Plus } else { Sign::Minus },
            deck: k.div_euclid(p),
        }
    }

    /// Shared-edge type between `L_k` and `L_{k+1}`.
    pub fn label(k: i64) -> Foliation {
        if k.rem_euclid(2) == 1 {
            Foliation::S
        } else {
            Foliation::U
        }
    }

    pub fn lozenge(&self, k: i64) -> Lozenge {
        Lozenge {
            id: PieceId::Old { i: self.i, slot: k },
            corner_a: self.corner(k),
            corner_b: self.corner(k + 1),
            quad_a: Quadrant::PP,
            quad_b: Quadrant::leading(OldChain::label(k)),
            new_data: None,
        }
    }

    /// `L_start, …, L_{start+len−1}` as an ordered fan.
    pub fn window(&self, start: i64, len: usize) -> FanCluster {
        let lozenges = (0..len as i64).map(|t| self.lozenge(start + t)).collect();
        let labels = (0..len.saturating_sub(1) as i64).map(|t| OldChain::label(start + t)).collect();
        FanCluster { lozenges, labels, tag: None }
    }

    /// Slot of the chain removed by the puncture in each period.
    pub fn punctured_slot(&self, deck: i64) -> i64 {
        deck * self.period()
    }

    /// Index `[(i+1)/2]` of the orbit `α` whose crossing punctures `T_i′`.
    pub fn puncturing_orbit(&self) -> u32 {
        self.i.div_ceil(2)
    }
}

/// If every lozenge is an old lozenge of one chain, its `(i, slot)` run.
pub fn match_old_subchain(lozenges: &[Lozenge]) -> Option<(u32, i64)> {
    let (i, first) = match lozenges.first()?.id {
        PieceId::Old { i, slot } => (i, slot),
        PieceId::New(_) => return None,
    };
    let chain = OldChain { i };
    lozenges
        .iter()
        .enumerate()
        .all(|(t, l)| *l == chain.lozenge(first + t as i64))
        .then_some((i, first))
}

/// The old fan `C_i`: one period of the chain minus the punctured slot.
pub fn old_fan_cluster(i: u32) -> Result<FanCluster> {
    let chain = build_old_chain(i)?;
    let start = chain.punctured_slot(0) + 1;
    Ok(chain.window(start, (chain.period() - 1) as usize))
}

/// A free edge of a fan where a new lozenge may be attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    /// Position of the host lozenge in the fan.
    pub host: usize,
    pub edge: HalfLeaf,
}

pub fn attachment_sites(fan: &FanCluster) -> Vec<Site> {
    let used: Vec<HalfLeaf> = fan
        .lozenges
        .iter()
        .flat_map(|l| l.edges())
        .collect();
    fan.lozenges
        .iter()
        .enumerate()
        .flat_map(|(host, l)| l.edges().into_iter().map(move |edge| Site { host, edge }))
        .filter(|s| used.iter().filter(|e| **e == s.edge).count() == 1)
        .collect()
}

/// The new lozenge sharing the site's edge with its host, with a fresh far corner.
pub fn attach_new(fan: &FanCluster, site: Site, fresh: u32, data: NewLozengeData) -> Result<Lozenge> {
    let host = fan
        .lozenges
        .get(site.host)
        .ok_or_else(|| Error::OutOfRange(format!("site host {} outside the fan", site.host)))?;
    let q = host
        .quadrant_at(site.edge.corner)
        .ok_or_else(|| Error::Malformed("site edge is not at a corner of its host".into()))?;
    let l = Lozenge {
        id: PieceId::New(fresh),
        corner_a: site.edge.corner,
        corner_b: CornerId::Fresh(fresh),
        quad_a: q.across(site.edge.foliation),
        quad_b: Quadrant::PP,
        new_data: Some(data),
    };
    l.validate()?;
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeTag {
    /// `C_i`
    C,
    /// `C_i^u`
    Cu,
    /// `C_i^s`
    Cs,
    /// `C_i^{us}`
    Cus,
}

impl ShapeTag {
    pub fn size(self, i: u32) -> usize {
        let base = 4 * i as usize + 3;
        match self {
            ShapeTag::C => base,
            ShapeTag::Cu | ShapeTag::Cs => base + 1,
            ShapeTag::Cus => base + 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalShape {
    pub tag: ShapeTag,
    pub i: u32,
}

impl fmt::Display for MaximalShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sup = match self.tag {
            ShapeTag::C => "",
            ShapeTag::Cu => "^u",
            ShapeTag::Cs => "^s",
            ShapeTag::Cus => "^us",
        };
        write!(f, "C_{}{}", self.i, sup)
    }
}

/// Why a cluster is not one of the fan-type maximal shapes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Rejection {
    /// Two edge-adjacent new lozenges fail the intersection-number test.
    TwoNewAdjacent { witness: Witness },
    /// A new lozenge joining two old corners fails the intersection-number test.
    OldNewOldBridge { witness: Witness },
    /// Alternation, path shape or the triple-corner rule is violated.
    FanRule { detail: String },
    NoOldFan { detail: String },
    UnmatchedShape { size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    Shape(MaximalShape),
    NotClassifiable(Rejection),
}

fn adjacency(lozenges: &[Lozenge]) -> Vec<(usize, usize, Foliation)> {
    let mut out = Vec::new();
    for a in 0..lozenges.len() {
        for b in a + 1..lozenges.len() {
            if let Some(f) = edge_adjacent(&lozenges[a], &lozenges[b]) {
                out.push((a, b, f));
            }
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize, Foliation)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b, _) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn corner_class(c: CornerId, n: u32) -> Option<H1Vector> {
    // Old corners are boundary orbits of the plug and miss every torus.
    c.is_old().then(|| H1Vector::zero(n))
}

fn shared_corner(a: &Lozenge, b: &Lozenge) -> Option<CornerId> {
    a.corners().into_iter().find(|c| b.corners().contains(c))
}

/// Classify a cluster against the fan-type maximal shapes.
///
/// New lozenges are first run through the intersection-number filters
/// with surgery coefficient `k`; the survivors must then form an
/// alternating path extending a single old fan `C_i` at its ends.
pub fn classify_maximal(lozenges: &[Lozenge], k: i64) -> Result<Classification> {
    if lozenges.is_empty() {
        return Err(Error::NotACluster("no lozenges".into()));
    }
    for l in lozenges {
        l.validate()?;
    }
    let edges = adjacency(lozenges);
    if !connected(lozenges.len(), &edges) {
        return Err(Error::NotACluster("lozenges are not connected through shared edges".into()));
    }
    let reject = |r| Ok(Classification::NotClassifiable(r));

    let old: Vec<&Lozenge> = lozenges.iter().filter(|l| l.age() == Age::Old).collect();
    let fan_i = match locate_old_fan(&old) {
        Ok(found) => found,
        Err(detail) => return reject(Rejection::NoOldFan { detail }),
    };
    let (i, first_slot) = fan_i;

    for (a, b, _) in &edges {
        let (la, lb) = (&lozenges[*a], &lozenges[*b]);
        if let (Some(sa), Some(sb)) = (&la.new_data, &lb.new_data) {
            let n = sa.n();
            let w2 = shared_corner(la, lb);
            let far = |l: &Lozenge| l.corners().into_iter().find(|c| Some(*c) != w2);
            let class = |c: Option<CornerId>| c.and_then(|c| corner_class(c, n));
            let cfg = Configuration::two_new_adjacent(
                [class(far(la)), class(w2), class(far(lb))],
                sa.clone(),
                sb.clone(),
                k,
            );
            if let Decision::Forbidden(witness) = decide_two_new_adjacent(&cfg)? {
                return reject(Rejection::TwoNewAdjacent { witness });
            }
        }
    }
    for l in lozenges {
        if let Some(s) = &l.new_data {
            if l.corner_a.is_old() && l.corner_b.is_old() {
                let z = H1Vector::zero(s.n());
                let cfg = Configuration::bridge(z.clone(), z, s.clone(), k);
                if let Decision::Forbidden(witness) = decide_bridge(&cfg)? {
                    return reject(Rejection::OldNewOldBridge { witness });
                }
            }
        }
    }

    let path = match fan_path(lozenges.len(), &edges) {
        Ok(p) => p,
        Err(detail) => return reject(Rejection::FanRule { detail }),
    };
    let labels: Vec<Foliation> = path
        .windows(2)
        .map(|w| edge_adjacent(&lozenges[w[0]], &lozenges[w[1]]).expect("path edges are adjacencies"))
        .collect();
    if let Err(Error::Alternation(l)) = check_alternation(&labels) {
        return reject(Rejection::FanRule {
            detail: format!("shared edges {l} and {} along the fan have the same type", l + 1),
        });
    }
    if let Some(c) = triple_corner(lozenges) {
        return reject(Rejection::FanRule {
            detail: format!("three lozenges share the corner {c}"),
        });
    }

    let last_slot = first_slot + 4 * i as i64 + 2;
    let slot_of = |idx: usize| match lozenges[idx].id {
        PieceId::Old { slot, .. } => Some(slot),
        PieceId::New(_) => None,
    };
    let mut front = false;
    let mut back = false;
    for (a, b, f) in &edges {
        for (x, y) in [(*a, *b), (*b, *a)] {
            if lozenges[x].age() == Age::New {
                match (slot_of(y), f) {
                    (Some(s), Foliation::U) if s == first_slot => front = true,
                    (Some(s), Foliation::S) if s == last_slot => back = true,
                    _ => {}
                }
            }
        }
    }
    let news = lozenges.len() - old.len();
    let tag = match (news, front, back) {
        (0, _, _) => ShapeTag::C,
        (1, true, false) => ShapeTag::Cu,
        (1, false, true) => ShapeTag::Cs,
        (2, true, true) => ShapeTag::Cus,
        _ => return reject(Rejection::UnmatchedShape { size: lozenges.len() }),
    };
    Ok(Classification::Shape(MaximalShape { tag, i }))
}

/// The `(i, first slot)` of the unique old fan among `old`.
fn locate_old_fan(old: &[&Lozenge]) -> std::result::Result<(u32, i64), String> {
    let slots: BTreeSet<(u32, i64)> = old
        .iter()
        .filter_map(|l| match l.id {
            PieceId::Old { i, slot } => Some((i, slot)),
            PieceId::New(_) => None,
        })
        .collect();
    let tori: BTreeSet<u32> = slots.iter().map(|(i, _)| *i).collect();
    let i = match tori.len() {
        0 => return Err("cluster has no old lozenge".into()),
        1 => *tori.first().expect("one element"),
        _ => return Err(format!("old lozenges come from several tori {tori:?}")),
    };
    let chain = OldChain { i };
    let first = slots.first().expect("nonempty").1;
    let expected = chain.period() as usize - 1;
    if first.rem_euclid(chain.period()) != 1 || slots.len() != expected || slots.last().map(|s| s.1) != Some(first + expected as i64 - 1) {
        return Err(format!(
            "old lozenges of T_{i} do not form one period of the chain minus its punctured slot"
        ));
    }
    if old.iter().any(|l| match l.id {
        PieceId::Old { slot, .. } => **l != chain.lozenge(slot),
        PieceId::New(_) => false,
    }) {
        return Err("old lozenge with corners differing from the chain".into());
    }
    Ok((i, first))
}

/// Vertex order of the adjacency graph if it is a simple path.
fn fan_path(n: usize, edges: &[(usize, usize, Foliation)]) -> std::result::Result<Vec<usize>, String> {
    let mut nbrs = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    if let Some(v) = nbrs.iter().position(|x| x.len() > 2) {
        return Err(format!("lozenge {v} is edge-adjacent to {} others", nbrs[v].len()));
    }
    if edges.len() + 1 != n {
        return Err("the shared edges close up into a cycle".into());
    }
    let start = nbrs.iter().position(|x| x.len() <= 1).expect("an acyclic graph has a leaf");
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = nbrs[cur].iter().find(|&&x| x != prev) {
        path.push(next);
        prev = cur;
        cur = next;
    }
    Ok(path)
}

/// Every cluster made of `C_i` plus new lozenges at up to `max_new` distinct sites.
pub fn attachment_corpus(i: u32, max_new: usize, data: &NewLozengeData) -> Result<Vec<Vec<Lozenge>>> {
    let fan = old_fan_cluster(i)?;
    let sites = attachment_sites(&fan);
    let mut out = Vec::new();
    let mut choose = vec![Vec::<usize>::new()];
    for size in 1..=max_new {
        let mut next = Vec::new();
        for c in &choose {
            let from = c.last().map_or(0, |x| x + 1);
            for s in from..sites.len() {
                let mut d = c.clone();
                d.push(s);
                next.push(d);
            }
        }
        for subset in &next {
            let mut cluster = fan.lozenges.clone();
            for (t, &s) in subset.iter().enumerate() {
                cluster.push(attach_new(&fan, sites[s], t as u32, data.clone())?);
            }
            out.push(cluster);
        }
        choose = next;
        debug_assert!(choose.iter().all(|c| c.len() == size));
    }
    out.insert(0, fan.lozenges);
    Ok(out)
}

/// Attach new lozenges at the `u`-end and/or `s`-end of `C_i`.
pub fn extended_fan(i: u32, u_end: bool, s_end: bool, data: &NewLozengeData) -> Result<FanCluster> {
    let fan = old_fan_cluster(i)?;
    let sites = attachment_sites(&fan);
    let last = fan.len() - 1;
    let front = sites
        .iter()
        .copied()
        .find(|s| s.host == 0 && s.edge.corner == fan.lozenges[0].corner_a && s.edge.foliation == Foliation::U);
    let back = sites
        .iter()
        .copied()
        .find(|s| s.host == last && s.edge.corner == fan.lozenges[last].corner_b && s.edge.foliation == Foliation::S);
    let mut lozenges = Vec::new();
    let mut labels = Vec::new();
    if u_end {
        let site = front.expect("the first lozenge has a free u edge at its first corner");
        lozenges.push(attach_new(&fan, site, 0, data.clone())?);
        labels.push(Foliation::U);
    }
    lozenges.extend(fan.lozenges.iter().cloned());
    labels.extend(fan.labels.iter().copied());
    if s_end {
        let site = back.expect("the last lozenge has a free s edge at its last corner");
        lozenges.push(attach_new(&fan, site, 1, data.clone())?);
        labels.push(Foliation::S);
    }
    let out = FanCluster { lozenges, labels, tag: None };
    out.validate()?;
    Ok(out)
}

/// Translate an SA annulus into the fan of lozenges it photographs.
pub fn photo(sa: &SAAnnulus) -> Result<FanCluster> {
    sa.validate()?;
    let k = sa.components.len();
    let lozenges = (0..k)
        .map(|l| {
            let next = sa.labels.get(l).copied().unwrap_or_else(|| match l.checked_sub(1) {
                Some(p) => sa.labels[p].other(),
                None => Foliation::S,
            });
            Lozenge {
                id: sa.components[l].piece,
                corner_a: sa.orbits[l],
                corner_b: sa.orbits[l + 1],
                quad_a: Quadrant::PP,
                quad_b: Quadrant::leading(next),
                new_data: sa.components[l].new_data.clone(),
            }
        })
        .collect();
    Ok(FanCluster {
        lozenges,
        labels: sa.labels.clone(),
        tag: Some(sa.tag),
    })
}

pub fn photo_inverse(fan: &FanCluster) -> Result<SAAnnulus> {
    fan.validate()?;
    let tag = fan
        .tag
        .ok_or_else(|| Error::Malformed("fan carries no SA annulus tag".into()))?;
    let first = fan
        .lozenges
        .first()
        .ok_or_else(|| Error::Malformed("empty fan".into()))?;
    let mut orbits = vec![first.corner_a];
    orbits.extend(fan.lozenges.iter().map(|l| l.corner_b));
    let sa = SAAnnulus {
        components: fan
            .lozenges
            .iter()
            .map(|l| SaComponent {
                piece: l.id,
                new_data: l.new_data.clone(),
            })
            .collect(),
        orbits,
        labels: fan.labels.clone(),
        tag,
    };
    sa.validate()?;
    Ok(sa)
}

/// Node/edge lists for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyList {
    pub nodes: Vec<AdjacencyNode>,
    pub edges: Vec<AdjacencyEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyNode {
    pub index: usize,
    pub piece: PieceId,
    pub age: Age,
    pub corners: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyEdge {
    pub a: usize,
    pub b: usize,
    pub foliation: Foliation,
}

pub fn adjacency_list(lozenges: &[Lozenge]) -> AdjacencyList {
    AdjacencyList {
        nodes: lozenges
            .iter()
            .enumerate()
            .map(|(index, l)| AdjacencyNode {
                index,
                piece: l.id,
                age: l.age(),
                corners: [l.corner_a.to_string(), l.corner_b.to_string()],
            })
            .collect(),
        edges: adjacency(lozenges)
            .into_iter()
            .map(|(a, b, foliation)| AdjacencyEdge { a, b, foliation })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::handedness::SaOrigin;
    use crate::types::Handedness;
    use proptest::prelude::*;

    fn data(n: u32) -> NewLozengeData {
        NewLozengeData::unit(1, n).unwrap()
    }

    #[test]
    fn chain_labels_alternate_and_consecutive_are_adjacent() {
        let chain = build_old_chain(1).unwrap();
        assert_eq!(chain.period(), 8);
        let w = chain.window(1, 8);
        assert_eq!(w.labels, [Foliation::S, Foliation::U].repeat(4)[..7].to_vec());
        w.validate().unwrap();
        let a = chain.lozenge(1);
        let b = chain.lozenge(3);
        assert_eq!(edge_adjacent(&a, &b), None);
    }

    #[test]
    fn sharing_only_a_corner_is_not_adjacency() {
        let fan = old_fan_cluster(1).unwrap();
        let sites = attachment_sites(&fan);
        // Two new lozenges on opposite sides of the old corner v_2.
        let v2 = fan.lozenges[0].corner_b;
        let at: Vec<Site> = sites.iter().copied().filter(|s| s.edge.corner == v2).collect();
        assert_eq!(at.len(), 2);
        let x = attach_new(&fan, at[0], 0, data(1)).unwrap();
        assert_eq!(edge_adjacent(&x, &fan.lozenges[1]), None);
        assert!(edge_adjacent(&x, &fan.lozenges[0]).is_some());
    }

    #[test]
    fn corners_enumerate_boundary_orbits() {
        for i in 1..=4 {
            let chain = build_old_chain(i).unwrap();
            let orbits: BTreeSet<BoundaryOrbit> = (0..chain.period())
                .map(|k| chain.corner(k).boundary_orbit().unwrap())
                .collect();
            assert_eq!(orbits.len() as i64, chain.period());
        }
    }

    #[test]
    fn deck_action() {
        let chain = build_old_chain(2).unwrap();
        let p = chain.period();
        for k in -20..20 {
            assert_eq!(chain.lozenge(k).deck_shift(1, p), chain.lozenge(k + p));
            assert_eq!(chain.lozenge(k).deck_shift(2, p), chain.lozenge(k + 2 * p));
        }
    }

    #[test]
    fn fan_sizes_and_sites() {
        for i in 1..=8 {
            let fan = old_fan_cluster(i).unwrap();
            assert_eq!(fan.len(), 4 * i as usize + 3);
            fan.validate().unwrap();
            let sites = attachment_sites(&fan);
            assert_eq!(sites.len(), 8 * i as usize + 8);
        }
        assert_eq!(old_fan_cluster(7).unwrap().len(), 31);
    }

    #[test]
    fn end_sites_present() {
        let fan = old_fan_cluster(1).unwrap();
        let sites = attachment_sites(&fan);
        let first = fan.lozenges[0].corner_a;
        let last = fan.lozenges[6].corner_b;
        assert!(sites.iter().any(|s| s.host == 0 && s.edge.corner == first && s.edge.foliation == Foliation::U));
        assert!(sites.iter().any(|s| s.host == 6 && s.edge.corner == last && s.edge.foliation == Foliation::S));
    }

    #[test]
    fn classify_examples() {
        let fan = old_fan_cluster(2).unwrap();
        assert_eq!(
            classify_maximal(&fan.lozenges, 7).unwrap(),
            Classification::Shape(MaximalShape { tag: ShapeTag::C, i: 2 })
        );
        for (u, s, tag) in [(true, false, ShapeTag::Cu), (false, true, ShapeTag::Cs), (true, true, ShapeTag::Cus)] {
            let ext = extended_fan(2, u, s, &data(1)).unwrap();
            assert_eq!(ext.len(), tag.size(2));
            assert_eq!(classify_maximal(&ext.lozenges, 7).unwrap(), Classification::Shape(MaximalShape { tag, i: 2 }));
        }
    }

    #[test]
    fn two_new_adjacent_rejected() {
        let fan = old_fan_cluster(1).unwrap();
        let sites = attachment_sites(&fan);
        let v2 = fan.lozenges[0].corner_b;
        let at: Vec<Site> = sites.iter().copied().filter(|s| s.edge.corner == v2).collect();
        let mut cluster = fan.lozenges.clone();
        cluster.push(attach_new(&fan, at[0], 0, data(1)).unwrap());
        cluster.push(attach_new(&fan, at[1], 1, data(1)).unwrap());
        assert!(edge_adjacent(&cluster[7], &cluster[8]).is_some());
        for k in [-7, 7] {
            match classify_maximal(&cluster, k).unwrap() {
                Classification::NotClassifiable(Rejection::TwoNewAdjacent { .. }) => {}
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn bridge_rejected() {
        let fan = old_fan_cluster(1).unwrap();
        let mut cluster = fan.lozenges.clone();
        let first = fan.lozenges[0].corner_a;
        let q = fan.lozenges[0].quad_a;
        cluster.push(Lozenge {
            id: PieceId::New(0),
            corner_a: first,
            corner_b: fan.lozenges[6].corner_b,
            quad_a: q.across(Foliation::U),
            quad_b: Quadrant { s: Sign::Minus, u: Sign::Minus },
            new_data: Some(data(1)),
        });
        match classify_maximal(&cluster, 3).unwrap() {
            Classification::NotClassifiable(Rejection::OldNewOldBridge { witness }) => assert_eq!(witness.torus, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(classify_maximal(&[], 1).is_err());
        let chain = build_old_chain(1).unwrap();
        let apart = vec![chain.lozenge(1), chain.lozenge(4)];
        assert!(matches!(classify_maximal(&apart, 1), Err(Error::NotACluster(_))));
        let partial = vec![chain.lozenge(1), chain.lozenge(2)];
        assert!(matches!(
            classify_maximal(&partial, 1).unwrap(),
            Classification::NotClassifiable(Rejection::NoOldFan { .. })
        ));
        assert!(build_old_chain(0).is_err());
    }

    #[test]
    fn corpus_only_yields_known_outcomes() {
        for i in 1..=3 {
            let corpus = attachment_corpus(i, 2, &data(2)).unwrap();
            let sites = 8 * i as usize + 8;
            assert_eq!(corpus.len(), 1 + sites + sites * (sites - 1) / 2);
            let mut shapes = BTreeSet::new();
            for cluster in &corpus {
                match classify_maximal(cluster, 7).unwrap() {
                    Classification::Shape(s) => {
                        assert_eq!(s.i, i);
                        assert_eq!(cluster.len(), s.tag.size(i));
                        shapes.insert(format!("{s}"));
                    }
                    Classification::NotClassifiable(r) => {
                        assert!(!matches!(r, Rejection::NoOldFan { .. }));
                    }
                }
            }
            assert_eq!(shapes.len(), 4);
        }
    }

    #[test]
    fn photo_round_trip() {
        let sa = SAAnnulus::old(1, 1, 1).unwrap();
        let fan = photo(&sa).unwrap();
        assert_eq!(fan.len(), 7);
        assert_eq!(fan.labels, sa.labels);
        assert_eq!(fan.lozenges, old_fan_cluster(1).unwrap().lozenges);
        assert_eq!(photo_inverse(&fan).unwrap(), sa);
        let mut bad = sa.clone();
        bad.labels[2] = bad.labels[1];
        assert!(matches!(photo(&bad), Err(Error::Alternation(_))));
    }

    #[test]
    fn old_windows_match_the_chain() {
        for i in 1..=3 {
            let chain = build_old_chain(i).unwrap();
            for start in -10..10 {
                for len in 1..6 {
                    let w = chain.window(start, len);
                    assert_eq!(match_old_subchain(&w.lozenges), Some((i, start)));
                }
            }
            let mut w = chain.window(0, 3).lozenges;
            w.swap(1, 2);
            assert_eq!(match_old_subchain(&w), None);
        }
    }

    #[test]
    fn adjacency_json_shape() {
        let fan = old_fan_cluster(1).unwrap();
        let adj = adjacency_list(&fan.lozenges);
        assert_eq!(adj.nodes.len(), 7);
        assert_eq!(adj.edges.len(), 6);
    }

    proptest! {
        #[test]
        fn deck_commutes_with_photo(i in 1u32..4, d in -3i64..3, m in 0u32..3) {
            let sa = SAAnnulus::old(1, i.min(4), m).unwrap();
            let p = build_old_chain(sa_i(&sa)).unwrap().period();
            let mut shifted = sa.clone();
            for c in &mut shifted.components {
                if let PieceId::Old { slot, .. } = &mut c.piece {
                    *slot += d * p;
                }
            }
            for o in &mut shifted.orbits {
                *o = o.deck_shift(d);
            }
            let lhs = photo(&shifted).unwrap().lozenges;
            let rhs: Vec<Lozenge> = photo(&sa).unwrap().lozenges.iter().map(|l| l.deck_shift(d, p)).collect();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn photo_inverse_round_trips(len in 1usize..12, s_first in any::<bool>(), h in any::<bool>()) {
            let len = len | 1;
            let labels: Vec<Foliation> = (0..len - 1)
                .map(|l| if (l % 2 == 0) == s_first { Foliation::S } else { Foliation::U })
                .collect();
            let sa = SAAnnulus {
                components: (0..len).map(|l| SaComponent { piece: PieceId::New(l as u32), new_data: Some(data(1)) }).collect(),
                orbits: (0..=len).map(|l| CornerId::Fresh(100 + l as u32)).collect(),
                labels,
                tag: SaTag { n: 1, origin: SaOrigin::Extended(1), handedness: Some(if h { Handedness::L } else { Handedness::R }) },
            };
            let fan = photo(&sa).unwrap();
            fan.validate().unwrap();
            prop_assert_eq!(photo_inverse(&fan).unwrap(), sa);
        }
    }

    fn sa_i(sa: &SAAnnulus) -> u32 {
        match sa.tag.origin {
            SaOrigin::Old(i) | SaOrigin::Extended(i) => i,
        }
    }
}
