//! Standard poset constructions: Boolean lattices, polygon face lattices,
//! products, joins, pyramids, barycentric subdivisions, and face posets of
//! simplicial complexes given by facets.

use crate::poset::{build_poset, from_relations, Poset, PosetError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("join operands must both have a minimum and a maximum")]
    JoinOperandMissingBounds,
    #[error("boolean lattice rank must be at most 9")]
    BooleanTooLarge,
    #[error("polygon needs at least 2 vertices")]
    PolygonTooSmall,
}

/// The Boolean lattice of rank `n`: subsets of {1, ..., n}. Ids are the
/// sorted digit strings, with "0" for the empty set.
pub fn boolean(n: usize) -> Result<Poset, ConstructionError> {
    if n > 9 {
        return Err(ConstructionError::BooleanTooLarge);
    }
    let id_of = |mask: usize| -> String {
        if mask == 0 {
            return "0".to_string();
        }
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (b'1' + i as u8) as char)
            .collect()
    };
    let elements: Vec<String> = (0..1usize << n).map(id_of).collect();
    let mut covers = Vec::new();
    for mask in 0..1usize << n {
        for i in 0..n {
            if mask >> i & 1 == 0 {
                covers.push((id_of(mask), id_of(mask | 1 << i)));
            }
        }
    }
    Ok(build_poset(Some(format!("B{n}")), elements, covers)?)
}

/// The face lattice of an n-gon: a minimum, vertices v1..vn, edges e1..en
/// with ei = {vi, v(i+1)} cyclically, and a maximum face F.
pub fn polygon(n: usize) -> Result<Poset, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::PolygonTooSmall);
    }
    let mut elements = vec!["0".to_string()];
    for i in 1..=n {
        elements.push(format!("v{i}"));
    }
    for i in 1..=n {
        elements.push(format!("e{i}"));
    }
    elements.push("F".to_string());
    let mut covers = Vec::new();
    for i in 1..=n {
        covers.push(("0".to_string(), format!("v{i}")));
        let j = i % n + 1;
        covers.push((format!("v{i}"), format!("e{i}")));
        covers.push((format!("v{j}"), format!("e{i}")));
        covers.push((format!("e{i}"), "F".to_string()));
    }
    Ok(build_poset(Some(format!("polygon{n}")), elements, covers)?)
}

/// The Cartesian product with componentwise order.
pub fn cartesian_product(p: &Poset, q: &Poset) -> Result<Poset, ConstructionError> {
    let pair_id = |x: usize, y: usize| format!("({},{})", p.id(x), q.id(y));
    let mut elements = Vec::with_capacity(p.len() * q.len());
    for x in 0..p.len() {
        for y in 0..q.len() {
            elements.push(pair_id(x, y));
        }
    }
    let mut covers = Vec::new();
    for x in 0..p.len() {
        for y in 0..q.len() {
            for &x2 in p.up_covers(x) {
                covers.push((pair_id(x, y), pair_id(x2, y)));
            }
            for &y2 in q.up_covers(y) {
                covers.push((pair_id(x, y), pair_id(x, y2)));
            }
        }
    }
    let name = match (p.name(), q.name()) {
        (Some(a), Some(b)) => Some(format!("({a} x {b})")),
        _ => None,
    };
    Ok(build_poset(name, elements, covers)?)
}

/// The join: the maximum of P and the minimum of Q are removed, and every
/// remaining element of P is placed below every remaining element of Q.
pub fn join(p: &Poset, q: &Poset) -> Result<Poset, ConstructionError> {
    let p_top = p
        .max_index()
        .ok_or(ConstructionError::JoinOperandMissingBounds)?;
    let q_bot = q.min_index();
    if q.max_index().is_none() {
        return Err(ConstructionError::JoinOperandMissingBounds);
    }
    let p_part: Vec<usize> = (0..p.len()).filter(|&i| i != p_top).collect();
    let q_part: Vec<usize> = (0..q.len()).filter(|&i| i != q_bot).collect();
    let mut taken: BTreeSet<String> = p_part.iter().map(|&i| p.id(i).to_string()).collect();
    let mut q_ids: BTreeMap<usize, String> = BTreeMap::new();
    for &i in &q_part {
        let mut id = q.id(i).to_string();
        while taken.contains(&id) {
            id.push('\'');
        }
        taken.insert(id.clone());
        q_ids.insert(i, id);
    }
    let mut elements: Vec<String> = p_part.iter().map(|&i| p.id(i).to_string()).collect();
    elements.extend(q_part.iter().map(|&i| q_ids[&i].clone()));
    let mut relations = Vec::new();
    for &a in &p_part {
        for &b in &p_part {
            if p.lt_idx(a, b) {
                relations.push((p.id(a).to_string(), p.id(b).to_string()));
            }
        }
    }
    for &a in &q_part {
        for &b in &q_part {
            if q.lt_idx(a, b) {
                relations.push((q_ids[&a].clone(), q_ids[&b].clone()));
            }
        }
    }
    for &a in &p_part {
        for &b in &q_part {
            relations.push((p.id(a).to_string(), q_ids[&b].clone()));
        }
    }
    let name = match (p.name(), q.name()) {
        (Some(a), Some(b)) => Some(format!("({a} * {b})")),
        _ => None,
    };
    Ok(from_relations(name, elements, &relations)?)
}

/// The pyramid: the Cartesian product with the rank one Boolean lattice.
pub fn pyramid(p: &Poset) -> Result<Poset, ConstructionError> {
    let b1 = boolean(1)?;
    let mut out = cartesian_product(p, &b1)?;
    out.set_name(p.name().map(|n| format!("Pyr({n})")));
    Ok(out)
}

/// The product of polytope face lattices: a new minimum below the
/// componentwise product of the proper parts.
pub fn polytope_product(p: &Poset, q: &Poset) -> Result<Poset, ConstructionError> {
    let p_part: Vec<usize> = (0..p.len()).filter(|&i| i != p.min_index()).collect();
    let q_part: Vec<usize> = (0..q.len()).filter(|&i| i != q.min_index()).collect();
    let pair_id = |x: usize, y: usize| format!("({},{})", p.id(x), q.id(y));
    let mut elements = vec!["0".to_string()];
    for &x in &p_part {
        for &y in &q_part {
            elements.push(pair_id(x, y));
        }
    }
    let mut covers = Vec::new();
    for &x in &p_part {
        for &y in &q_part {
            if p.rank_of(x) == 1 && q.rank_of(y) == 1 {
                covers.push(("0".to_string(), pair_id(x, y)));
            }
            for &x2 in p.up_covers(x) {
                covers.push((pair_id(x, y), pair_id(x2, y)));
            }
            for &y2 in q.up_covers(y) {
                covers.push((pair_id(x, y), pair_id(x, y2)));
            }
        }
    }
    let name = match (p.name(), q.name()) {
        (Some(a), Some(b)) => Some(format!("({a} . {b})")),
        _ => None,
    };
    Ok(build_poset(name, elements, covers)?)
}

/// The barycentric subdivision: the poset of chains through the minimum,
/// ordered by inclusion, together with the assignment sending each chain to
/// its top element (the data of the canonical subdivision map).
pub fn barycentric(p: &Poset) -> Result<(Poset, Vec<(String, String)>), ConstructionError> {
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![vec![p.min_index()]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        for z in 0..p.len() {
            if p.lt_idx(last, z) {
                let mut next = chain.clone();
                next.push(z);
                stack.push(next);
            }
        }
        chains.push(chain);
    }
    let chain_id = |c: &[usize]| {
        c.iter()
            .map(|&i| p.id(i).to_string())
            .collect::<Vec<_>>()
            .join("|")
    };
    let elements: Vec<String> = chains.iter().map(|c| chain_id(c)).collect();
    let mut covers = Vec::new();
    for c in &chains {
        if c.len() < 2 {
            continue;
        }
        for drop in 1..c.len() {
            let mut sub: Vec<usize> = c.clone();
            sub.remove(drop);
            covers.push((chain_id(&sub), chain_id(c)));
        }
    }
    let assignment: Vec<(String, String)> = chains
        .iter()
        .map(|c| {
            let top = *c.last().expect("chains are nonempty");
            (chain_id(c), p.id(top).to_string())
        })
        .collect();
    let name = p.name().map(|n| format!("Bary({n})"));
    Ok((build_poset(name, elements, covers)?, assignment))
}

/// The face poset of the simplicial complex generated by the given facets,
/// including the empty face as minimum. Ids are the sorted vertex tokens,
/// concatenated directly when every token is a single character and joined
/// with "|" otherwise.
pub fn simplicial_face_poset(facets: &[Vec<String>]) -> Result<Poset, ConstructionError> {
    let mut faces: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut multi_char = false;
    for facet in facets {
        let mut tokens: Vec<String> = facet.clone();
        tokens.sort();
        tokens.dedup();
        multi_char |= tokens.iter().any(|t| t.len() > 1);
        let k = tokens.len();
        for mask in 0..1usize << k {
            let face: Vec<String> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| tokens[i].clone())
                .collect();
            faces.insert(face);
        }
    }
    if faces.is_empty() {
        faces.insert(Vec::new());
    }
    let sep = if multi_char { "|" } else { "" };
    let face_id = |f: &[String]| {
        if f.is_empty() {
            "0".to_string()
        } else {
            f.join(sep)
        }
    };
    let elements: Vec<String> = faces.iter().map(|f| face_id(f)).collect();
    let mut covers = Vec::new();
    for f in &faces {
        if f.is_empty() {
            continue;
        }
        for drop in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(drop);
            covers.push((face_id(&sub), face_id(f)));
        }
    }
    Ok(build_poset(None, elements, covers)?)
}
