//! Finite graded posets with a unique minimum: construction with full
//! validation, order queries over a dense reachability matrix, Eulerian /
//! lower Eulerian / near-Eulerian classification, and the basic derived
//! posets (intervals, boundary, semisuspension, dual, adjoined maximum).

use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element id {0}")]
    DuplicateElement(String),
    #[error("unknown element id {0}")]
    UnknownElement(String),
    #[error("cover relation contains a cycle")]
    CycleError,
    #[error("no unique minimal element (minimal elements: {0:?})")]
    NoUniqueMin(Vec<String>),
    #[error("not graded: relation {lower} < {upper} joins rank {lower_rank} to rank {upper_rank}")]
    NotGraded {
        lower: String,
        upper: String,
        lower_rank: usize,
        upper_rank: usize,
    },
    #[error("elements {x} and {y} are not comparable")]
    NotComparable { x: String, y: String },
    #[error("poset has no unique maximal element")]
    NoMax,
    #[error("operation undefined for a rank zero poset")]
    RankZero,
    #[error("poset has an empty boundary")]
    EmptyBoundary,
    #[error("relations are not transitively closed: {x} < {y} < {z} but {x} < {z} is missing")]
    NotTransitive { x: String, y: String, z: String },
}

fn bit_get(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 == 1
}

fn bit_set(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1u64 << (i & 63);
}

/// A finite graded poset with unique minimum. The order relation is
/// materialized as a dense bitset matrix at build time.
#[derive(Clone, Debug)]
pub struct Poset {
    name: Option<String>,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    cover_pairs: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    rank: Vec<usize>,
    words: usize,
    /// `leq_rows[i]` has bit `j` set iff `i <= j`.
    leq_rows: Vec<Vec<u64>>,
    /// `geq_rows[i]` has bit `j` set iff `j <= i`.
    geq_rows: Vec<Vec<u64>>,
    min: usize,
    max: Option<usize>,
}

/// Classification of a graded poset. `boundary_ids` is populated exactly
/// when the poset is near-Eulerian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetClassification {
    pub graded: bool,
    pub has_max: bool,
    pub eulerian: bool,
    pub lower_eulerian: bool,
    pub near_eulerian: bool,
    pub boundary_ids: Option<Vec<String>>,
    pub rank: usize,
}

/// Builds and validates a poset from element ids and cover relations.
/// Ranks are always recomputed as longest-path distance from the minimum.
pub fn build_poset(
    name: Option<String>,
    elements: Vec<String>,
    covers: Vec<(String, String)>,
) -> Result<Poset, PosetError> {
    let n = elements.len();
    let mut index: HashMap<String, usize> = HashMap::with_capacity(n);
    for (i, id) in elements.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(PosetError::DuplicateElement(id.clone()));
        }
    }
    let mut cover_pairs: Vec<(usize, usize)> = Vec::with_capacity(covers.len());
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(covers.len());
    for (lo, hi) in &covers {
        let &li = index
            .get(lo)
            .ok_or_else(|| PosetError::UnknownElement(lo.clone()))?;
        let &hi_i = index
            .get(hi)
            .ok_or_else(|| PosetError::UnknownElement(hi.clone()))?;
        if li == hi_i {
            return Err(PosetError::CycleError);
        }
        if seen.insert((li, hi_i)) {
            cover_pairs.push((li, hi_i));
        }
    }
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut down: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    for &(lo, hi) in &cover_pairs {
        up[lo].push(hi);
        down[hi].push(lo);
        indegree[hi] += 1;
    }
    let sources: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut topo: Vec<usize> = Vec::with_capacity(n);
    {
        let mut deg = indegree.clone();
        let mut queue: VecDeque<usize> = sources.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &up[v] {
                deg[w] -= 1;
                if deg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    if topo.len() != n {
        return Err(PosetError::CycleError);
    }
    if sources.len() != 1 {
        return Err(PosetError::NoUniqueMin(
            sources.iter().map(|&i| elements[i].clone()).collect(),
        ));
    }
    let min = sources[0];
    let mut rank = vec![0usize; n];
    for &v in &topo {
        for &w in &up[v] {
            rank[w] = rank[w].max(rank[v] + 1);
        }
    }
    for &(lo, hi) in &cover_pairs {
        if rank[hi] != rank[lo] + 1 {
            return Err(PosetError::NotGraded {
                lower: elements[lo].clone(),
                upper: elements[hi].clone(),
                lower_rank: rank[lo],
                upper_rank: rank[hi],
            });
        }
    }
    let words = n.div_ceil(64).max(1);
    let mut leq_rows = vec![vec![0u64; words]; n];
    for &v in topo.iter().rev() {
        let mut row = vec![0u64; words];
        bit_set(&mut row, v);
        for &w in &up[v] {
            for k in 0..words {
                row[k] |= leq_rows[w][k];
            }
        }
        leq_rows[v] = row;
    }
    let mut geq_rows = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if bit_get(&leq_rows[i], j) {
                bit_set(&mut geq_rows[j], i);
            }
        }
    }
    let maximal: Vec<usize> = (0..n).filter(|&i| up[i].is_empty()).collect();
    let max = if maximal.len() == 1 {
        Some(maximal[0])
    } else {
        None
    };
    Ok(Poset {
        name,
        ids: elements,
        index,
        cover_pairs,
        up,
        down,
        rank,
        words,
        leq_rows,
        geq_rows,
        min,
        max,
    })
}

/// Builds a poset from a transitively closed set of strict relations; the
/// cover relations are recovered by transitive reduction.
pub fn from_relations(
    name: Option<String>,
    elements: Vec<String>,
    relations: &[(String, String)],
) -> Result<Poset, PosetError> {
    let n = elements.len();
    let mut index: HashMap<String, usize> = HashMap::with_capacity(n);
    for (i, id) in elements.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(PosetError::DuplicateElement(id.clone()));
        }
    }
    let words = n.div_ceil(64).max(1);
    let mut above = vec![vec![0u64; words]; n];
    let mut below = vec![vec![0u64; words]; n];
    for (lo, hi) in relations {
        let &li = index
            .get(lo)
            .ok_or_else(|| PosetError::UnknownElement(lo.clone()))?;
        let &hi_i = index
            .get(hi)
            .ok_or_else(|| PosetError::UnknownElement(hi.clone()))?;
        if li == hi_i {
            return Err(PosetError::CycleError);
        }
        bit_set(&mut above[li], hi_i);
        bit_set(&mut below[hi_i], li);
    }
    for x in 0..n {
        for y in 0..n {
            if !bit_get(&above[x], y) {
                continue;
            }
            for k in 0..words {
                let missing = above[y][k] & !above[x][k];
                if missing != 0 {
                    let z = (k << 6) + missing.trailing_zeros() as usize;
                    return Err(PosetError::NotTransitive {
                        x: elements[x].clone(),
                        y: elements[y].clone(),
                        z: elements[z].clone(),
                    });
                }
            }
        }
    }
    let mut covers: Vec<(String, String)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if !bit_get(&above[x], y) {
                continue;
            }
            let mut strictly_between = false;
            for k in 0..words {
                let mut m = above[x][k] & below[y][k];
                if k == x >> 6 {
                    m &= !(1u64 << (x & 63));
                }
                if k == y >> 6 {
                    m &= !(1u64 << (y & 63));
                }
                if m != 0 {
                    strictly_between = true;
                    break;
                }
            }
            if !strictly_between {
                covers.push((elements[x].clone(), elements[y].clone()));
            }
        }
    }
    build_poset(name, elements, covers)
}

impl Poset {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require_index(&self, id: &str) -> Result<usize, PosetError> {
        self.index_of(id)
            .ok_or_else(|| PosetError::UnknownElement(id.to_string()))
    }

    pub fn rank_of(&self, i: usize) -> usize {
        self.rank[i]
    }

    /// The rank of the poset: the largest element rank.
    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn leq_idx(&self, x: usize, y: usize) -> bool {
        bit_get(&self.leq_rows[x], y)
    }

    pub fn lt_idx(&self, x: usize, y: usize) -> bool {
        x != y && self.leq_idx(x, y)
    }

    pub fn min_index(&self) -> usize {
        self.min
    }

    pub fn max_index(&self) -> Option<usize> {
        self.max
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn down_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn cover_pairs(&self) -> &[(usize, usize)] {
        &self.cover_pairs
    }

    pub fn cover_id_pairs(&self) -> Vec<(String, String)> {
        self.cover_pairs
            .iter()
            .map(|&(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
            .collect()
    }

    pub fn maximal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn upset_indices(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq_idx(x, y)).collect()
    }

    pub fn downset_indices(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq_idx(x, y)).collect()
    }

    /// Indices of the order ideal generated by `gens`.
    pub fn ideal_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut bits = vec![0u64; self.words];
        for &g in gens {
            for k in 0..self.words {
                bits[k] |= self.geq_rows[g][k];
            }
        }
        (0..self.len()).filter(|&i| bit_get(&bits, i)).collect()
    }

    /// Element indices sorted by (rank, id); a linear extension.
    pub fn indices_by_rank(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len()).collect();
        v.sort_by(|&a, &b| {
            self.rank[a]
                .cmp(&self.rank[b])
                .then_with(|| self.ids[a].cmp(&self.ids[b]))
        });
        v
    }

    /// An id based on `base` that does not clash with existing elements.
    pub fn fresh_id(&self, base: &str) -> String {
        let mut id = base.to_string();
        while self.index.contains_key(&id) {
            id.push('\'');
        }
        id
    }

    /// Same element set and same cover relation, element names matched by id.
    pub fn is_same(&self, other: &Poset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut my_ids: Vec<&String> = self.ids.iter().collect();
        let mut their_ids: Vec<&String> = other.ids.iter().collect();
        my_ids.sort();
        their_ids.sort();
        if my_ids != their_ids {
            return false;
        }
        let mine: HashSet<(String, String)> = self.cover_id_pairs().into_iter().collect();
        let theirs: HashSet<(String, String)> = other.cover_id_pairs().into_iter().collect();
        mine == theirs
    }

    /// True when the number of even-rank and odd-rank elements agree in
    /// every interval [x, y] with x < y.
    pub fn all_intervals_balanced(&self) -> bool {
        let n = self.len();
        let mut even = vec![0u64; self.words];
        let mut odd = vec![0u64; self.words];
        for i in 0..n {
            if self.rank[i].is_multiple_of(2) {
                bit_set(&mut even, i);
            } else {
                bit_set(&mut odd, i);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x == y || !self.leq_idx(x, y) {
                    continue;
                }
                let mut even_count = 0u32;
                let mut odd_count = 0u32;
                for k in 0..self.words {
                    let m = self.leq_rows[x][k] & self.geq_rows[y][k];
                    even_count += (m & even[k]).count_ones();
                    odd_count += (m & odd[k]).count_ones();
                }
                if even_count != odd_count {
                    return false;
                }
            }
        }
        true
    }

    fn is_eulerian_bounded(&self) -> bool {
        self.max.is_some() && self.all_intervals_balanced()
    }

    /// The generators of the boundary ideal: elements of rank `n - 1` with
    /// exactly one cover, where `n` is the poset rank.
    fn boundary_generators(&self) -> Vec<usize> {
        let n = self.max_rank();
        if n == 0 {
            return Vec::new();
        }
        (0..self.len())
            .filter(|&i| self.rank[i] + 1 == n && self.up[i].len() == 1)
            .collect()
    }

    /// Classifies the poset, computing the near-Eulerian property both by
    /// the direct alternating-sum criterion and by the semisuspension
    /// construction, and asserting the two agree.
    pub fn classify(&self) -> PosetClassification {
        let n = self.max_rank();
        let has_max = self.max.is_some();
        let lower_eulerian = self.all_intervals_balanced();
        let eulerian = has_max && lower_eulerian;
        let mut boundary_ids = None;
        let near_criterion = self.near_eulerian_criterion(lower_eulerian, &mut boundary_ids);
        let near_oracle = self.near_eulerian_by_semisuspension();
        assert_eq!(
            near_criterion, near_oracle,
            "near-Eulerian criterion and semisuspension construction disagree on poset {:?}",
            self.name
        );
        if eulerian && n > 0 {
            assert!(
                near_criterion,
                "Eulerian poset of positive rank must be near-Eulerian: {:?}",
                self.name
            );
        }
        if !near_criterion {
            boundary_ids = None;
        }
        PosetClassification {
            graded: true,
            has_max,
            eulerian,
            lower_eulerian,
            near_eulerian: near_criterion,
            boundary_ids,
            rank: n,
        }
    }

    fn near_eulerian_criterion(
        &self,
        lower_eulerian: bool,
        boundary_ids: &mut Option<Vec<String>>,
    ) -> bool {
        let n = self.max_rank();
        if n == 0 || !lower_eulerian {
            return false;
        }
        if self.maximal_indices().iter().any(|&i| self.rank[i] != n) {
            return false;
        }
        let gens = self.boundary_generators();
        if gens.is_empty() {
            return false;
        }
        let ideal = self.ideal_indices(&gens);
        let mut in_ideal = vec![0u64; self.words];
        for &i in &ideal {
            bit_set(&mut in_ideal, i);
        }
        let mut even = vec![0u64; self.words];
        let mut odd = vec![0u64; self.words];
        for i in 0..self.len() {
            if self.rank[i].is_multiple_of(2) {
                bit_set(&mut even, i);
            } else {
                bit_set(&mut odd, i);
            }
        }
        let sign = |r: usize| if r.is_multiple_of(2) { 1i64 } else { -1i64 };
        for x in 0..self.len() {
            let mut full = 0i64;
            let mut ideal_part = 0i64;
            for k in 0..self.words {
                let m = self.leq_rows[x][k];
                full += (m & even[k]).count_ones() as i64 - (m & odd[k]).count_ones() as i64;
                let mi = m & in_ideal[k];
                ideal_part +=
                    (mi & even[k]).count_ones() as i64 - (mi & odd[k]).count_ones() as i64;
            }
            if bit_get(&in_ideal, x) {
                if full != 0 || ideal_part != sign(n + 1) {
                    return false;
                }
            } else if full != sign(n) {
                return false;
            }
        }
        *boundary_ids = Some(ideal.iter().map(|&i| self.ids[i].clone()).collect());
        true
    }

    /// Near-Eulerian iff the semisuspension with a maximum adjoined is
    /// Eulerian. Any failure to construct those posets means the answer is
    /// negative.
    fn near_eulerian_by_semisuspension(&self) -> bool {
        let Ok(semi) = self.semisuspension() else {
            return false;
        };
        let Ok(closed) = semi.adjoin_max(None) else {
            return false;
        };
        closed.is_eulerian_bounded()
    }

    /// Restriction of the order to a subset of element indices. The subset
    /// must be convex so that cover relations restrict exactly; all callers
    /// pass ideals, filters, or intervals.
    pub fn induced(&self, keep: &[usize], name: Option<String>) -> Result<Poset, PosetError> {
        let keep_set: HashSet<usize> = keep.iter().copied().collect();
        let elements: Vec<String> = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let covers: Vec<(String, String)> = self
            .cover_pairs
            .iter()
            .filter(|&&(a, b)| keep_set.contains(&a) && keep_set.contains(&b))
            .map(|&(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
            .collect();
        build_poset(name, elements, covers)
    }

    /// The closed interval [x, y], or the filter [x, oo) when `y` is None,
    /// as a poset in its own right (ranks re-based at x).
    pub fn interval(&self, x: &str, y: Option<&str>) -> Result<Poset, PosetError> {
        let xi = self.require_index(x)?;
        let keep: Vec<usize> = match y {
            Some(y) => {
                let yi = self.require_index(y)?;
                if !self.leq_idx(xi, yi) {
                    return Err(PosetError::NotComparable {
                        x: x.to_string(),
                        y: y.to_string(),
                    });
                }
                (0..self.len())
                    .filter(|&z| self.leq_idx(xi, z) && self.leq_idx(z, yi))
                    .collect()
            }
            None => self.upset_indices(xi),
        };
        self.induced(&keep, None)
    }

    /// The boundary ideal: generated by the rank n-1 elements with exactly
    /// one cover. For an Eulerian poset this is everything but the maximum.
    pub fn boundary(&self) -> Result<Poset, PosetError> {
        if self.max_rank() == 0 {
            return Err(PosetError::RankZero);
        }
        let gens = self.boundary_generators();
        if gens.is_empty() {
            return Err(PosetError::EmptyBoundary);
        }
        let ideal = self.ideal_indices(&gens);
        let name = self.name.as_ref().map(|n| format!("boundary({n})"));
        self.induced(&ideal, name)
    }

    /// Adds a new maximal element covering the boundary generators.
    pub fn semisuspension(&self) -> Result<Poset, PosetError> {
        if self.max_rank() == 0 {
            return Err(PosetError::RankZero);
        }
        let gens = self.boundary_generators();
        if gens.is_empty() {
            return Err(PosetError::EmptyBoundary);
        }
        let q = self.fresh_id("q");
        let mut elements = self.ids.clone();
        elements.push(q.clone());
        let mut covers = self.cover_id_pairs();
        for &g in &gens {
            covers.push((self.ids[g].clone(), q.clone()));
        }
        let name = self.name.as_ref().map(|n| format!("semisuspension({n})"));
        build_poset(name, elements, covers)
    }

    /// Adds a new maximum covering every maximal element. Fails with
    /// NotGraded when the maximal elements do not share a rank.
    pub fn adjoin_max(&self, id: Option<&str>) -> Result<Poset, PosetError> {
        let top = self.fresh_id(id.unwrap_or("1hat"));
        let mut elements = self.ids.clone();
        elements.push(top.clone());
        let mut covers = self.cover_id_pairs();
        for i in self.maximal_indices() {
            covers.push((self.ids[i].clone(), top.clone()));
        }
        build_poset(self.name.clone(), elements, covers)
    }

    /// The dual poset: requires a unique maximum, which becomes the new
    /// minimum; ranks are recomputed from it.
    pub fn dual(&self) -> Result<Poset, PosetError> {
        if self.max.is_none() {
            return Err(PosetError::NoMax);
        }
        let covers: Vec<(String, String)> = self
            .cover_pairs
            .iter()
            .map(|&(a, b)| (self.ids[b].clone(), self.ids[a].clone()))
            .collect();
        let name = self.name.as_ref().map(|n| format!("dual({n})"));
        build_poset(name, self.ids.clone(), covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn quick(elements: &[&str], covers: &[(&str, &str)]) -> Poset {
        build_poset(
            None,
            elements.iter().map(|s| s.to_string()).collect(),
            covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .expect("test poset builds")
    }

    fn diamond() -> Poset {
        quick(
            &["0", "x", "y", "1"],
            &[("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")],
        )
    }

    fn subdivided_segment() -> Poset {
        quick(
            &["0", "v1", "m", "v2", "e1", "e2"],
            &[
                ("0", "v1"),
                ("0", "m"),
                ("0", "v2"),
                ("v1", "e1"),
                ("m", "e1"),
                ("m", "e2"),
                ("v2", "e2"),
            ],
        )
    }

    #[test]
    fn build_validation_errors() {
        let r = build_poset(None, vec!["a".into(), "a".into()], vec![]);
        assert!(matches!(r, Err(PosetError::DuplicateElement(_))));

        let r = build_poset(
            None,
            vec!["a".into(), "b".into()],
            vec![("a".into(), "c".into())],
        );
        assert!(matches!(r, Err(PosetError::UnknownElement(_))));

        let r = build_poset(
            None,
            vec!["a".into(), "b".into()],
            vec![("a".into(), "b".into()), ("b".into(), "a".into())],
        );
        assert!(matches!(r, Err(PosetError::CycleError)));

        let r = build_poset(None, vec!["a".into(), "b".into()], vec![]);
        assert!(matches!(r, Err(PosetError::NoUniqueMin(_))));

        // A redundant relation forces a rank jump of two.
        let r = build_poset(
            None,
            vec!["0".into(), "x".into(), "1".into()],
            vec![
                ("0".into(), "x".into()),
                ("x".into(), "1".into()),
                ("0".into(), "1".into()),
            ],
        );
        assert!(matches!(r, Err(PosetError::NotGraded { .. })));
    }

    #[test]
    fn ranks_and_order_queries() {
        let p = diamond();
        assert_eq!(p.max_rank(), 2);
        assert_eq!(p.rank_of(p.index_of("0").unwrap()), 0);
        assert_eq!(p.rank_of(p.index_of("x").unwrap()), 1);
        assert_eq!(p.rank_of(p.index_of("1").unwrap()), 2);
        let x = p.index_of("x").unwrap();
        let y = p.index_of("y").unwrap();
        let top = p.index_of("1").unwrap();
        assert!(p.leq_idx(x, top));
        assert!(!p.leq_idx(x, y));
        assert!(p.lt_idx(p.min_index(), top));
        assert_eq!(p.max_index(), Some(top));
    }

    #[test]
    fn classify_diamond_and_singleton() {
        let c = diamond().classify();
        assert!(c.eulerian && c.lower_eulerian && c.has_max);
        assert!(
            c.near_eulerian,
            "Eulerian of positive rank is near-Eulerian"
        );
        assert_eq!(c.rank, 2);
        assert_eq!(
            c.boundary_ids.as_deref(),
            Some(&["0".to_string(), "x".to_string(), "y".to_string()][..])
        );

        let s = quick(&["0"], &[]).classify();
        assert!(s.eulerian && s.lower_eulerian && s.has_max);
        assert!(!s.near_eulerian);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn classify_b1_near_eulerian() {
        let b1 = quick(&["0", "a"], &[("0", "a")]);
        let c = b1.classify();
        assert!(c.eulerian);
        assert!(c.near_eulerian);
        assert_eq!(c.boundary_ids.as_deref(), Some(&["0".to_string()][..]));
    }

    #[test]
    fn classify_subdivided_segment() {
        let p = subdivided_segment();
        let c = p.classify();
        assert!(!c.has_max);
        assert!(c.lower_eulerian);
        assert!(!c.eulerian);
        assert!(c.near_eulerian);
        assert_eq!(c.rank, 2);
        let mut ids = c.boundary_ids.unwrap();
        ids.sort();
        assert_eq!(
            ids,
            vec!["0".to_string(), "v1".to_string(), "v2".to_string()]
        );
    }

    #[test]
    fn classify_rejects_two_atom_fan() {
        // Two maximal atoms: lower Eulerian but not near-Eulerian.
        let p = quick(&["0", "a", "b"], &[("0", "a"), ("0", "b")]);
        let c = p.classify();
        assert!(c.lower_eulerian);
        assert!(!c.eulerian);
        assert!(!c.near_eulerian);
    }

    #[test]
    fn boundary_of_subdivided_segment() {
        let b = subdivided_segment().boundary().expect("boundary exists");
        let mut ids: Vec<&str> = b.ids().iter().map(|s| s.as_str()).collect();
        ids.sort();
        assert_eq!(ids, vec!["0", "v1", "v2"]);
        assert_eq!(b.max_rank(), 1);
    }

    #[test]
    fn semisuspension_closes_subdivided_segment_into_a_triangle() {
        let semi = subdivided_segment()
            .semisuspension()
            .expect("semisuspension");
        assert_eq!(semi.len(), 7);
        let q = semi.index_of("q").expect("new element q");
        assert_eq!(semi.rank_of(q), 2);
        let mut under_q: Vec<&str> = semi.down_covers(q).iter().map(|&i| semi.id(i)).collect();
        under_q.sort();
        assert_eq!(under_q, vec!["v1", "v2"]);
        // Three vertices, three edges, each edge covering two vertices.
        assert_eq!((0..semi.len()).filter(|&i| semi.rank_of(i) == 1).count(), 3);
        let edges: Vec<usize> = (0..semi.len()).filter(|&i| semi.rank_of(i) == 2).collect();
        assert_eq!(edges.len(), 3);
        for e in edges {
            assert_eq!(semi.down_covers(e).len(), 2);
        }
        let closed = semi.adjoin_max(None).expect("adjoin max");
        assert!(closed.classify().eulerian);
    }

    #[test]
    fn interval_and_filter() {
        let p = subdivided_segment();
        let i = p.interval("0", Some("e1")).expect("interval");
        assert_eq!(i.len(), 4);
        assert!(i.classify().eulerian);

        let f = p.interval("m", None).expect("filter");
        let mut ids: Vec<&str> = f.ids().iter().map(|s| s.as_str()).collect();
        ids.sort();
        assert_eq!(ids, vec!["e1", "e2", "m"]);
        assert_eq!(f.max_rank(), 1);
        assert_eq!(f.rank_of(f.index_of("m").unwrap()), 0);

        assert!(matches!(
            p.interval("e1", Some("v1")),
            Err(PosetError::NotComparable { .. })
        ));
        assert!(matches!(
            p.interval("zz", None),
            Err(PosetError::UnknownElement(_))
        ));
    }

    #[test]
    fn filters_of_near_eulerian_posets() {
        let p = subdivided_segment();
        // Boundary element: the filter is again near-Eulerian.
        let f = p.interval("v1", None).expect("filter at v1");
        assert!(f.classify().near_eulerian);
        // Interior element: the filter plus a maximum is Eulerian.
        let f = p.interval("m", None).expect("filter at m");
        let closed = f.adjoin_max(None).expect("adjoin max");
        assert!(closed.classify().eulerian);
    }

    #[test]
    fn dual_poset() {
        let p = quick(
            &["0", "x", "y", "xy"],
            &[("0", "x"), ("0", "y"), ("x", "xy"), ("y", "xy")],
        );
        let d = p.dual().expect("dual");
        assert_eq!(d.max_rank(), 2);
        assert_eq!(d.rank_of(d.index_of("xy").unwrap()), 0);
        assert_eq!(d.rank_of(d.index_of("0").unwrap()), 2);
        assert!(d.classify().eulerian);

        let no_max = subdivided_segment();
        assert!(matches!(no_max.dual(), Err(PosetError::NoMax)));
    }

    #[test]
    fn adjoin_max_freshens_ids() {
        let p = quick(&["0", "1hat"], &[("0", "1hat")]);
        let q = p.adjoin_max(None).expect("adjoin");
        assert!(q.index_of("1hat'").is_some());
        assert_eq!(q.max_rank(), 2);
    }

    #[test]
    fn from_relations_reduces_and_validates() {
        let p = from_relations(
            None,
            vec!["0".into(), "x".into(), "1".into()],
            &[
                ("0".into(), "x".into()),
                ("x".into(), "1".into()),
                ("0".into(), "1".into()),
            ],
        )
        .expect("chain builds");
        assert_eq!(p.cover_pairs().len(), 2);
        assert_eq!(p.max_rank(), 2);

        let r = from_relations(
            None,
            vec!["0".into(), "x".into(), "1".into()],
            &[("0".into(), "x".into()), ("x".into(), "1".into())],
        );
        assert!(matches!(r, Err(PosetError::NotTransitive { .. })));
    }

    #[test]
    fn rank_zero_guards() {
        let s = quick(&["0"], &[]);
        assert!(matches!(s.boundary(), Err(PosetError::RankZero)));
        assert!(matches!(s.semisuspension(), Err(PosetError::RankZero)));
    }
}
