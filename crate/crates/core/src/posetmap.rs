//! Maps between graded posets: validated construction, the three
//! equivalent tests for strong formal subdivisions, restrictions above and
//! below an element, extension along an order ideal, factorization into
//! elementary subdivision steps, and cutting a poset along a codimension
//! one sphere.

use crate::poset::{from_relations, Poset, PosetError};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum MapError {
    #[error("unknown element id {0}")]
    UnknownElement(String),
    #[error("assignment is missing source element {0}")]
    NotTotal(String),
    #[error("assignment repeats source element {0}")]
    DuplicateAssignment(String),
    #[error("map is not order preserving: {x} < {y} but images are not ordered")]
    NotOrderPreserving { x: String, y: String },
    #[error("map is not rank increasing at {0}")]
    NotRankIncreasing(String),
    #[error("map is not surjective: {0} has empty preimage")]
    NotSurjective(String),
    #[error("map does not send the minimum to the minimum")]
    RankShiftNonzero,
    #[error("composition mismatch: {0}")]
    Mismatch(String),
    #[error("map is not a strong formal subdivision: {0}")]
    NotSFS(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("{0} is not a lower order ideal of the ambient poset")]
    NotLowerOrderIdeal(String),
    #[error("id collision between the source and the ambient poset: {0}")]
    IdCollision(String),
    #[error("shared id {0} must map to itself")]
    InconsistentSharedId(String),
    #[error("invalid cut specification: {0}")]
    InvalidCutSpec(String),
    #[error("the intersection of the cut halves is empty")]
    EmptyI,
    #[error("no unique minimal upper bound for {0}")]
    NoUniqueJoin(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A validated order preserving, rank increasing, surjective map between
/// graded posets that sends minimum to minimum.
#[derive(Clone, Debug)]
pub struct PosetMap {
    source: Poset,
    target: Poset,
    /// source index -> target index
    assignment: Vec<usize>,
    /// Always zero: the difference of the minimum ranks.
    rank_shift: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfsMethod {
    Definition,
    Characterization,
    NearCriterion,
    All,
}

#[derive(Clone, Debug)]
pub struct SfsResult {
    pub ok: bool,
    pub witness: Option<String>,
}

/// Builds and validates a poset map from an id assignment.
pub fn build_map(
    source: Poset,
    target: Poset,
    assignment: &[(String, String)],
) -> Result<PosetMap, MapError> {
    let mut image: Vec<Option<usize>> = vec![None; source.len()];
    for (sid, tid) in assignment {
        let si = source
            .index_of(sid)
            .ok_or_else(|| MapError::UnknownElement(sid.clone()))?;
        let ti = target
            .index_of(tid)
            .ok_or_else(|| MapError::UnknownElement(tid.clone()))?;
        if image[si].is_some() {
            return Err(MapError::DuplicateAssignment(sid.clone()));
        }
        image[si] = Some(ti);
    }
    let mut map = Vec::with_capacity(source.len());
    for (i, img) in image.iter().enumerate() {
        map.push(img.ok_or_else(|| MapError::NotTotal(source.id(i).to_string()))?);
    }
    for &(x, y) in source.cover_pairs() {
        if !target.leq_idx(map[x], map[y]) {
            return Err(MapError::NotOrderPreserving {
                x: source.id(x).to_string(),
                y: source.id(y).to_string(),
            });
        }
    }
    for y in 0..source.len() {
        if target.rank_of(map[y]) < source.rank_of(y) {
            return Err(MapError::NotRankIncreasing(source.id(y).to_string()));
        }
    }
    let mut hit = vec![false; target.len()];
    for &t in &map {
        hit[t] = true;
    }
    if let Some(missing) = (0..target.len()).find(|&t| !hit[t]) {
        return Err(MapError::NotSurjective(target.id(missing).to_string()));
    }
    if map[source.min_index()] != target.min_index() {
        return Err(MapError::RankShiftNonzero);
    }
    Ok(PosetMap {
        source,
        target,
        assignment: map,
        rank_shift: 0,
    })
}

impl PosetMap {
    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn rank_shift(&self) -> i64 {
        self.rank_shift
    }

    pub fn apply_idx(&self, y: usize) -> usize {
        self.assignment[y]
    }

    pub fn apply(&self, id: &str) -> Result<&str, MapError> {
        let i = self
            .source
            .index_of(id)
            .ok_or_else(|| MapError::UnknownElement(id.to_string()))?;
        Ok(self.target.id(self.assignment[i]))
    }

    pub fn assignment_id_pairs(&self) -> Vec<(String, String)> {
        (0..self.source.len())
            .map(|i| {
                (
                    self.source.id(i).to_string(),
                    self.target.id(self.assignment[i]).to_string(),
                )
            })
            .collect()
    }

    /// Source indices in each fiber, indexed by target element.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut f = vec![Vec::new(); self.target.len()];
        for (y, &x) in self.assignment.iter().enumerate() {
            f[x].push(y);
        }
        f
    }

    /// True when every fiber is a single element mapped to an element with
    /// the same id.
    pub fn is_identity_like(&self) -> bool {
        self.source.len() == self.target.len()
            && (0..self.source.len())
                .all(|y| self.source.id(y) == self.target.id(self.assignment[y]))
    }
}

fn sign(r: usize) -> i64 {
    if r.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Tests whether the map is a strong formal subdivision, by the requested
/// method. With `SfsMethod::All`, all three are computed and must agree.
pub fn is_sfs(map: &PosetMap, method: SfsMethod) -> Result<SfsResult, MapError> {
    if !map.source.all_intervals_balanced() {
        return Err(MapError::PreconditionFailed(
            "source is not lower Eulerian".into(),
        ));
    }
    if !map.target.all_intervals_balanced() {
        return Err(MapError::PreconditionFailed(
            "target is not lower Eulerian".into(),
        ));
    }
    match method {
        SfsMethod::Definition => Ok(sfs_by_definition(map)),
        SfsMethod::Characterization => Ok(sfs_by_characterization(map)),
        SfsMethod::NearCriterion => Ok(sfs_by_near_criterion(map)),
        SfsMethod::All => {
            let a = sfs_by_definition(map);
            let b = sfs_by_characterization(map);
            let c = sfs_by_near_criterion(map);
            assert_eq!(
                a.ok, b.ok,
                "definition and characterization disagree: {:?} vs {:?}",
                a.witness, b.witness
            );
            assert_eq!(
                a.ok, c.ok,
                "definition and fiber criterion disagree: {:?} vs {:?}",
                a.witness, c.witness
            );
            Ok(a)
        }
    }
}

/// Strong surjectivity: above every source element there is an element of
/// full rank in every fiber over the upset of its image.
fn strong_surjectivity_witness(map: &PosetMap, fibers: &[Vec<usize>]) -> Option<String> {
    let g = &map.source;
    let b = &map.target;
    for y in 0..g.len() {
        let fy = map.assignment[y];
        for x in 0..b.len() {
            if !b.leq_idx(fy, x) {
                continue;
            }
            let hit = fibers[x]
                .iter()
                .any(|&y2| g.leq_idx(y, y2) && g.rank_of(y2) == b.rank_of(x));
            if !hit {
                return Some(format!(
                    "no element of rank {} above {} in the fiber over {}",
                    b.rank_of(x),
                    g.id(y),
                    b.id(x)
                ));
            }
        }
    }
    None
}

fn sfs_by_definition(map: &PosetMap) -> SfsResult {
    let fibers = map.fibers();
    if let Some(w) = strong_surjectivity_witness(map, &fibers) {
        return SfsResult {
            ok: false,
            witness: Some(w),
        };
    }
    let g = &map.source;
    let b = &map.target;
    for y in 0..g.len() {
        let fy = map.assignment[y];
        for x in 0..b.len() {
            if !b.leq_idx(fy, x) {
                continue;
            }
            let total: i64 = fibers[x]
                .iter()
                .filter(|&&y2| g.leq_idx(y, y2))
                .map(|&y2| sign(g.rank_of(y2)))
                .sum();
            if total != sign(b.rank_of(x)) {
                return SfsResult {
                    ok: false,
                    witness: Some(format!(
                        "alternating fiber sum over {} above {} is {}, expected {}",
                        b.id(x),
                        g.id(y),
                        total,
                        sign(b.rank_of(x))
                    )),
                };
            }
        }
    }
    SfsResult {
        ok: true,
        witness: None,
    }
}

fn sfs_by_characterization(map: &PosetMap) -> SfsResult {
    let fibers = map.fibers();
    if let Some(w) = strong_surjectivity_witness(map, &fibers) {
        return SfsResult {
            ok: false,
            witness: Some(w),
        };
    }
    let g = &map.source;
    let b = &map.target;
    for y in 0..g.len() {
        let fy = map.assignment[y];
        // sums[x] accumulates the signed count of y' >= y with image <= x.
        let mut sums = vec![0i64; b.len()];
        for y2 in 0..g.len() {
            if !g.leq_idx(y, y2) {
                continue;
            }
            let fy2 = map.assignment[y2];
            let s = sign(g.rank_of(y2));
            for x in 0..b.len() {
                if b.leq_idx(fy2, x) {
                    sums[x] += s;
                }
            }
        }
        for x in 0..b.len() {
            if !b.leq_idx(fy, x) {
                continue;
            }
            let expected = if fy == x { sign(b.rank_of(x)) } else { 0 };
            if sums[x] != expected {
                return SfsResult {
                    ok: false,
                    witness: Some(format!(
                        "cumulative signed sum over {} above {} is {}, expected {}",
                        b.id(x),
                        g.id(y),
                        sums[x],
                        expected
                    )),
                };
            }
        }
    }
    SfsResult {
        ok: true,
        witness: None,
    }
}

fn sfs_by_near_criterion(map: &PosetMap) -> SfsResult {
    let g = &map.source;
    let b = &map.target;
    for x in 0..b.len() {
        if x == b.min_index() {
            continue;
        }
        let pre_closed: Vec<usize> = (0..g.len())
            .filter(|&y| b.leq_idx(map.assignment[y], x))
            .collect();
        let gamma_x = match g.induced(&pre_closed, None) {
            Ok(p) => p,
            Err(e) => {
                return SfsResult {
                    ok: false,
                    witness: Some(format!(
                        "preimage of the ideal below {} is not a graded poset: {e}",
                        b.id(x)
                    )),
                }
            }
        };
        let cls = gamma_x.classify();
        if !cls.near_eulerian {
            return SfsResult {
                ok: false,
                witness: Some(format!(
                    "preimage of the ideal below {} is not near-Eulerian",
                    b.id(x)
                )),
            };
        }
        if cls.rank != b.rank_of(x) {
            return SfsResult {
                ok: false,
                witness: Some(format!(
                    "preimage of the ideal below {} has rank {}, expected {}",
                    b.id(x),
                    cls.rank,
                    b.rank_of(x)
                )),
            };
        }
        let expected_boundary: BTreeSet<String> = (0..g.len())
            .filter(|&y| {
                let fy = map.assignment[y];
                fy != x && b.leq_idx(fy, x)
            })
            .map(|y| g.id(y).to_string())
            .collect();
        let actual_boundary: BTreeSet<String> = cls
            .boundary_ids
            .expect("near-Eulerian classification carries boundary ids")
            .into_iter()
            .collect();
        if expected_boundary != actual_boundary {
            return SfsResult {
                ok: false,
                witness: Some(format!(
                    "boundary of the preimage below {} is not the preimage of the open ideal",
                    b.id(x)
                )),
            };
        }
    }
    SfsResult {
        ok: true,
        witness: None,
    }
}

/// The restriction to the preimage of the closed ideal below `x`, mapping
/// onto the interval [min, x].
pub fn restrict_below(map: &PosetMap, x: &str) -> Result<PosetMap, MapError> {
    let xi = map
        .target
        .index_of(x)
        .ok_or_else(|| MapError::UnknownElement(x.to_string()))?;
    let keep: Vec<usize> = (0..map.source.len())
        .filter(|&y| map.target.leq_idx(map.assignment[y], xi))
        .collect();
    let sub_source = map.source.induced(&keep, None)?;
    let sub_target = map
        .target
        .interval(map.target.id(map.target.min_index()), Some(x))?;
    let assignment: Vec<(String, String)> = keep
        .iter()
        .map(|&y| {
            (
                map.source.id(y).to_string(),
                map.target.id(map.assignment[y]).to_string(),
            )
        })
        .collect();
    build_map(sub_source, sub_target, &assignment)
}

/// The restriction to the filter above `y`, mapping onto the filter above
/// its image (both re-rooted).
pub fn restrict_above(map: &PosetMap, y: &str) -> Result<PosetMap, MapError> {
    let yi = map
        .source
        .index_of(y)
        .ok_or_else(|| MapError::UnknownElement(y.to_string()))?;
    let sub_source = map.source.interval(y, None)?;
    let sub_target = map
        .target
        .interval(map.target.id(map.assignment[yi]), None)?;
    let assignment: Vec<(String, String)> = (0..map.source.len())
        .filter(|&z| map.source.leq_idx(yi, z))
        .map(|z| {
            (
                map.source.id(z).to_string(),
                map.target.id(map.assignment[z]).to_string(),
            )
        })
        .collect();
    build_map(sub_source, sub_target, &assignment)
}

/// Extends a map along an ambient poset: the target must sit inside `b` as
/// a lower order ideal, and the extension is the identity on the rest.
/// Returns the extended map from the glued source into `b`.
pub fn extension(map: &PosetMap, b: &Poset) -> Result<PosetMap, MapError> {
    let gamma = &map.target;
    let mut gamma_in_b: Vec<usize> = Vec::with_capacity(gamma.len());
    for i in 0..gamma.len() {
        let bi = b.index_of(gamma.id(i)).ok_or_else(|| {
            MapError::NotLowerOrderIdeal(format!("element {} is missing", gamma.id(i)))
        })?;
        gamma_in_b.push(bi);
    }
    let in_gamma: HashSet<usize> = gamma_in_b.iter().copied().collect();
    for &bi in &gamma_in_b {
        for z in 0..b.len() {
            if b.leq_idx(z, bi) && !in_gamma.contains(&z) {
                return Err(MapError::NotLowerOrderIdeal(format!(
                    "{} lies below {} but is missing",
                    b.id(z),
                    b.id(bi)
                )));
            }
        }
    }
    for i in 0..gamma.len() {
        for j in 0..gamma.len() {
            if gamma.leq_idx(i, j) != b.leq_idx(gamma_in_b[i], gamma_in_b[j]) {
                return Err(MapError::NotLowerOrderIdeal(format!(
                    "order on {{{}, {}}} disagrees with the ambient poset",
                    gamma.id(i),
                    gamma.id(j)
                )));
            }
        }
    }
    let rest: Vec<usize> = (0..b.len()).filter(|i| !in_gamma.contains(i)).collect();
    let pi = &map.source;
    for &r in &rest {
        if pi.index_of(b.id(r)).is_some() {
            return Err(MapError::IdCollision(b.id(r).to_string()));
        }
    }
    let mut elements: Vec<String> = pi.ids().to_vec();
    elements.extend(rest.iter().map(|&r| b.id(r).to_string()));
    let mut relations: Vec<(String, String)> = Vec::new();
    for i in 0..pi.len() {
        for j in 0..pi.len() {
            if pi.lt_idx(i, j) {
                relations.push((pi.id(i).to_string(), pi.id(j).to_string()));
            }
        }
    }
    for &r1 in &rest {
        for &r2 in &rest {
            if b.lt_idx(r1, r2) {
                relations.push((b.id(r1).to_string(), b.id(r2).to_string()));
            }
        }
    }
    for y in 0..pi.len() {
        let img_in_b = gamma_in_b[map.assignment[y]];
        for &r in &rest {
            if b.leq_idx(img_in_b, r) {
                relations.push((pi.id(y).to_string(), b.id(r).to_string()));
            }
        }
    }
    let extended_source = from_relations(None, elements, &relations)?;
    let mut assignment: Vec<(String, String)> = (0..pi.len())
        .map(|y| {
            (
                pi.id(y).to_string(),
                gamma.id(map.assignment[y]).to_string(),
            )
        })
        .collect();
    for &r in &rest {
        assignment.push((b.id(r).to_string(), b.id(r).to_string()));
    }
    build_map(extended_source, b.clone(), &assignment)
}

/// The composition `outer` after `inner`. The intermediate posets must
/// agree exactly (same ids and covers).
pub fn compose(outer: &PosetMap, inner: &PosetMap) -> Result<PosetMap, MapError> {
    if !inner.target.is_same(&outer.source) {
        return Err(MapError::Mismatch(
            "the target of the inner map differs from the source of the outer map".into(),
        ));
    }
    let assignment: Vec<(String, String)> = (0..inner.source.len())
        .map(|y| {
            let mid_id = inner.target.id(inner.assignment[y]);
            let mid_idx = outer
                .source
                .index_of(mid_id)
                .expect("identical posets share ids");
            (
                inner.source.id(y).to_string(),
                outer.target.id(outer.assignment[mid_idx]).to_string(),
            )
        })
        .collect();
    build_map(inner.source.clone(), outer.target.clone(), &assignment)
}

/// Factors a strong formal subdivision onto an Eulerian poset into
/// elementary steps, one per target element in (rank, id) order. The list
/// is returned outermost first, so composing it right to left recovers the
/// map. Identity factors are kept.
pub fn intermediate_factorization(map: &PosetMap) -> Result<Vec<PosetMap>, MapError> {
    let check = is_sfs(map, SfsMethod::Definition)?;
    if !check.ok {
        return Err(MapError::NotSFS(
            check.witness.unwrap_or_else(|| "not a subdivision".into()),
        ));
    }
    if !map.target.classify().eulerian {
        return Err(MapError::PreconditionFailed(
            "factorization target must be Eulerian".into(),
        ));
    }
    for i in 0..map.source.len() {
        if let Some(t) = map.target.index_of(map.source.id(i)) {
            if map.assignment[i] != t {
                return Err(MapError::InconsistentSharedId(map.source.id(i).to_string()));
            }
        }
    }
    let order = map.target.indices_by_rank();
    factorization_with_order(map, &order)
}

/// The factorization driver, parameterized by the linear extension of the
/// target used to peel off fibers.
pub fn factorization_with_order(
    map: &PosetMap,
    order: &[usize],
) -> Result<Vec<PosetMap>, MapError> {
    let g = &map.source;
    let b = &map.target;
    assert_eq!(order.len(), b.len(), "order must list every target element");
    assert_eq!(order[0], b.min_index(), "order must start at the minimum");
    for w in order.windows(2) {
        assert!(
            b.rank_of(w[0]) <= b.rank_of(w[1]),
            "order must be a linear extension by rank"
        );
    }
    let n = b.len() - 1;
    // intermediate poset for prefix length i: fibers over order[0..=i], plus
    // the remaining target elements.
    let intermediate = |i: usize| -> Result<Poset, MapError> {
        let prefix: HashSet<usize> = order[..=i].iter().copied().collect();
        let pre: Vec<usize> = (0..g.len())
            .filter(|&y| prefix.contains(&map.assignment[y]))
            .collect();
        let rest: Vec<usize> = order[i + 1..].to_vec();
        let mut elements: Vec<String> = pre.iter().map(|&y| g.id(y).to_string()).collect();
        elements.extend(rest.iter().map(|&x| b.id(x).to_string()));
        let mut relations: Vec<(String, String)> = Vec::new();
        for &y1 in &pre {
            for &y2 in &pre {
                if g.lt_idx(y1, y2) {
                    relations.push((g.id(y1).to_string(), g.id(y2).to_string()));
                }
            }
        }
        for &x1 in &rest {
            for &x2 in &rest {
                if b.lt_idx(x1, x2) {
                    relations.push((b.id(x1).to_string(), b.id(x2).to_string()));
                }
            }
        }
        for &y in &pre {
            for &x in &rest {
                if b.leq_idx(map.assignment[y], x) {
                    relations.push((g.id(y).to_string(), b.id(x).to_string()));
                }
            }
        }
        Ok(from_relations(None, elements, &relations)?)
    };
    let mut posets: Vec<Poset> = Vec::with_capacity(b.len());
    for i in 0..b.len() {
        posets.push(intermediate(i)?);
    }
    assert!(
        posets[0].is_same(b),
        "the first intermediate poset must be the target"
    );
    assert!(
        posets[n].is_same(g),
        "the last intermediate poset must be the source"
    );
    let mut factors: Vec<PosetMap> = Vec::with_capacity(n);
    for i in (1..=n).rev() {
        let xi = order[i];
        let source = posets[i].clone();
        let target = posets[i - 1].clone();
        let assignment: Vec<(String, String)> = source
            .ids()
            .iter()
            .map(|id| {
                let in_fiber = g
                    .index_of(id)
                    .map(|y| map.assignment[y] == xi)
                    .unwrap_or(false);
                if in_fiber {
                    (id.clone(), b.id(xi).to_string())
                } else {
                    (id.clone(), id.clone())
                }
            })
            .collect();
        let step = build_map(source, target, &assignment)?;
        let step_check = is_sfs(&step, SfsMethod::Definition)?;
        assert!(
            step_check.ok,
            "factorization step onto {} is not a subdivision: {:?}",
            b.id(xi),
            step_check.witness
        );
        factors.push(step);
    }
    for (i, p) in posets.iter().enumerate() {
        if i > 0 && i < n {
            assert!(
                p.classify().eulerian,
                "intermediate poset {i} must be Eulerian"
            );
        }
    }
    Ok(factors)
}

/// Data describing a cut: the element to split and the two closed halves
/// of the open ideal below it.
#[derive(Clone, Debug)]
pub struct CutSpec {
    pub x0: String,
    pub sigma1: Vec<String>,
    pub sigma2: Vec<String>,
}

/// The validated, index-level form of a cut specification.
pub struct CutData {
    pub x0: usize,
    pub sigma1: Vec<usize>,
    pub sigma2: Vec<usize>,
    pub intersection: Vec<usize>,
}

/// Validates a cut specification: the halves must be near-Eulerian lower
/// ideals covering the open ideal below x0 and meeting in their common
/// boundary. The intersection is always recomputed.
pub fn validate_cut(p: &Poset, spec: &CutSpec) -> Result<CutData, MapError> {
    let cls = p.classify();
    if !cls.near_eulerian {
        return Err(MapError::PreconditionFailed(
            "cut requires a near-Eulerian poset".into(),
        ));
    }
    let x0 = p
        .index_of(&spec.x0)
        .ok_or_else(|| MapError::UnknownElement(spec.x0.clone()))?;
    let k = p.rank_of(x0);
    if k < 2 {
        return Err(MapError::InvalidCutSpec(format!(
            "{} has rank {k}, but a cut needs rank at least 2",
            spec.x0
        )));
    }
    let resolve = |ids: &[String]| -> Result<Vec<usize>, MapError> {
        ids.iter()
            .map(|id| {
                p.index_of(id)
                    .ok_or_else(|| MapError::UnknownElement(id.clone()))
            })
            .collect()
    };
    let sigma1 = resolve(&spec.sigma1)?;
    let sigma2 = resolve(&spec.sigma2)?;
    let check_half = |name: &str, sigma: &[usize]| -> Result<(), MapError> {
        let set: HashSet<usize> = sigma.iter().copied().collect();
        for &s in sigma {
            if !p.lt_idx(s, x0) {
                return Err(MapError::InvalidCutSpec(format!(
                    "{name} contains {}, which is not strictly below {}",
                    p.id(s),
                    spec.x0
                )));
            }
            for z in 0..p.len() {
                if p.lt_idx(z, s) && !set.contains(&z) {
                    return Err(MapError::InvalidCutSpec(format!(
                        "{name} is not a lower ideal: misses {}",
                        p.id(z)
                    )));
                }
            }
        }
        let induced = p.induced(sigma, None)?;
        let c = induced.classify();
        if !c.near_eulerian || c.rank + 1 != k {
            return Err(MapError::InvalidCutSpec(format!(
                "{name} is not near-Eulerian of rank {}",
                k - 1
            )));
        }
        Ok(())
    };
    check_half("sigma1", &sigma1)?;
    check_half("sigma2", &sigma2)?;
    let set1: HashSet<usize> = sigma1.iter().copied().collect();
    let set2: HashSet<usize> = sigma2.iter().copied().collect();
    let union: HashSet<usize> = set1.union(&set2).copied().collect();
    let open_ideal: HashSet<usize> = (0..p.len()).filter(|&z| p.lt_idx(z, x0)).collect();
    if union != open_ideal {
        return Err(MapError::InvalidCutSpec(format!(
            "the halves do not cover the open ideal below {}",
            spec.x0
        )));
    }
    let mut intersection: Vec<usize> = set1.intersection(&set2).copied().collect();
    intersection.sort();
    if intersection.is_empty() {
        return Err(MapError::EmptyI);
    }
    let boundary_of = |sigma: &[usize]| -> Result<BTreeSet<String>, MapError> {
        let induced = p.induced(sigma, None)?;
        Ok(induced
            .classify()
            .boundary_ids
            .expect("validated half is near-Eulerian")
            .into_iter()
            .collect())
    };
    let inter_ids: BTreeSet<String> = intersection.iter().map(|&i| p.id(i).to_string()).collect();
    if boundary_of(&sigma1)? != inter_ids {
        return Err(MapError::InvalidCutSpec(
            "the intersection is not the boundary of sigma1".into(),
        ));
    }
    if boundary_of(&sigma2)? != inter_ids {
        return Err(MapError::InvalidCutSpec(
            "the intersection is not the boundary of sigma2".into(),
        ));
    }
    Ok(CutData {
        x0,
        sigma1,
        sigma2,
        intersection,
    })
}

/// Cuts the poset at x0 along the sphere separating the two halves: x0 is
/// replaced by two copies glued along a new element over the intersection.
/// Returns the cut poset and the subdivision collapsing it back.
pub fn cut(p: &Poset, spec: &CutSpec) -> Result<(Poset, PosetMap), MapError> {
    let data = validate_cut(p, spec)?;
    let x0 = data.x0;
    let old: Vec<usize> = (0..p.len()).filter(|&z| z != x0).collect();
    let mut taken: HashSet<String> = old.iter().map(|&z| p.id(z).to_string()).collect();
    let mut fresh = |base: String| -> String {
        let mut id = base;
        while taken.contains(&id) {
            id.push('\'');
        }
        taken.insert(id.clone());
        id
    };
    let y_id = fresh(format!("{}.y", spec.x0));
    let x1_id = fresh(format!("{}.1", spec.x0));
    let x2_id = fresh(format!("{}.2", spec.x0));
    let mut elements: Vec<String> = old.iter().map(|&z| p.id(z).to_string()).collect();
    elements.push(y_id.clone());
    elements.push(x1_id.clone());
    elements.push(x2_id.clone());
    let mut relations: Vec<(String, String)> = Vec::new();
    for &a in &old {
        for &b in &old {
            if p.lt_idx(a, b) {
                relations.push((p.id(a).to_string(), p.id(b).to_string()));
            }
        }
    }
    let above: Vec<usize> = (0..p.len()).filter(|&z| p.lt_idx(x0, z)).collect();
    for &i in &data.intersection {
        relations.push((p.id(i).to_string(), y_id.clone()));
    }
    for &s in &data.sigma1 {
        relations.push((p.id(s).to_string(), x1_id.clone()));
    }
    for &s in &data.sigma2 {
        relations.push((p.id(s).to_string(), x2_id.clone()));
    }
    relations.push((y_id.clone(), x1_id.clone()));
    relations.push((y_id.clone(), x2_id.clone()));
    for &z in &above {
        relations.push((y_id.clone(), p.id(z).to_string()));
        relations.push((x1_id.clone(), p.id(z).to_string()));
        relations.push((x2_id.clone(), p.id(z).to_string()));
    }
    let name = p.name().map(|n| format!("cut({n},{})", spec.x0));
    let gamma = from_relations(name, elements, &relations)?;
    let mut assignment: Vec<(String, String)> = old
        .iter()
        .map(|&z| (p.id(z).to_string(), p.id(z).to_string()))
        .collect();
    assignment.push((y_id, spec.x0.clone()));
    assignment.push((x1_id, spec.x0.clone()));
    assignment.push((x2_id, spec.x0.clone()));
    let map = build_map(gamma, p.clone(), &assignment)?;
    let check = is_sfs(&map, SfsMethod::Definition)?;
    if !check.ok {
        return Err(MapError::NotSFS(
            check.witness.unwrap_or_else(|| "cut map".into()),
        ));
    }
    Ok((map.source().clone(), map))
}

/// Computes a carrier assignment: each source element goes to the least
/// upper bound in `b` of the images of the atoms below it.
pub fn carrier_assignment(
    gamma: &Poset,
    b: &Poset,
    vertex_images: &[(String, String)],
) -> Result<Vec<(String, String)>, MapError> {
    let mut vmap: HashMap<usize, usize> = HashMap::new();
    for (gid, bid) in vertex_images {
        let gi = gamma
            .index_of(gid)
            .ok_or_else(|| MapError::UnknownElement(gid.clone()))?;
        let bi = b
            .index_of(bid)
            .ok_or_else(|| MapError::UnknownElement(bid.clone()))?;
        vmap.insert(gi, bi);
    }
    let mut assignment = Vec::with_capacity(gamma.len());
    for x in 0..gamma.len() {
        let images: Vec<usize> = (0..gamma.len())
            .filter(|&v| gamma.rank_of(v) == 1 && gamma.leq_idx(v, x))
            .map(|v| {
                vmap.get(&v).copied().ok_or_else(|| {
                    MapError::PreconditionFailed(format!("no image for vertex {}", gamma.id(v)))
                })
            })
            .collect::<Result<_, _>>()?;
        let candidates: Vec<usize> = (0..b.len())
            .filter(|&z| images.iter().all(|&im| b.leq_idx(im, z)))
            .collect();
        let minimal: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&z| !candidates.iter().any(|&w| b.lt_idx(w, z)))
            .collect();
        if minimal.len() != 1 {
            return Err(MapError::NoUniqueJoin(gamma.id(x).to_string()));
        }
        assignment.push((gamma.id(x).to_string(), b.id(minimal[0]).to_string()));
    }
    Ok(assignment)
}
