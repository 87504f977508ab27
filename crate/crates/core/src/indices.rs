//! Flag enumeration and the derived indices: flag vectors and enumerators,
//! the ab-index, the cd-index (classic and refined), the local cd-index,
//! and the mixed cd-index of a strong formal subdivision, together with the
//! pyramid and barycentric recursions and the cd-level effect of a cut.

use crate::constructions::{barycentric, boolean, cartesian_product, ConstructionError};
use crate::ncpoly::{ab_to_cd, specialize, Letter, MixedPoly, MixedWord, NCPoly, NcError, Word, Q};
use crate::poset::{Poset, PosetError};
use crate::posetmap::{
    is_sfs, restrict_below, validate_cut, CutSpec, MapError, PosetMap, SfsMethod,
};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Error, Debug)]
pub enum IndexError {
    #[error("poset out of scope: {0}")]
    NotInScope(String),
    #[error("non-integral coefficient in a pyramid recursion")]
    NonIntegralResult,
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CdMode {
    Classic,
    Refined,
}

/// The flag vector: chain counts by rank set. Rank r contributes bit r-1
/// of the mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    rank: usize,
    alpha: Vec<u128>,
}

impl FlagVector {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn alpha(&self, mask: usize) -> u128 {
        self.alpha[mask]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, u128)> + '_ {
        self.alpha.iter().copied().enumerate()
    }
}

/// Counts chains through the minimum by the set of ranks they visit.
pub fn flag_vector(p: &Poset) -> FlagVector {
    let n = p.max_rank();
    assert!(n <= 20, "flag enumeration is limited to rank 20");
    let size = 1usize << n;
    let order = p.indices_by_rank();
    let min = p.min_index();
    let mut rows: Vec<Vec<u128>> = vec![Vec::new(); p.len()];
    let mut alpha = vec![0u128; size];
    alpha[0] = 1;
    for &z in &order {
        let r = p.rank_of(z);
        if z == min {
            continue;
        }
        let bit = 1usize << (r - 1);
        let mut row = vec![0u128; size];
        row[bit] = 1;
        for &w in &order {
            if p.rank_of(w) >= r {
                break;
            }
            if w == min || !p.lt_idx(w, z) {
                continue;
            }
            for (mask, &count) in rows[w].iter().enumerate() {
                if count != 0 {
                    row[mask | bit] += count;
                }
            }
        }
        for (mask, &count) in row.iter().enumerate() {
            if count != 0 {
                alpha[mask] += count;
            }
        }
        rows[z] = row;
    }
    FlagVector { rank: n, alpha }
}

/// The flag enumerator: words of degree n with b marking the ranks visited.
pub fn flag_enumerator(p: &Poset) -> NCPoly {
    let fv = flag_vector(p);
    let n = fv.rank();
    let mut out = NCPoly::zero();
    for (mask, count) in fv.entries() {
        if count == 0 {
            continue;
        }
        let letters: Vec<Letter> = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    Letter::B
                } else {
                    Letter::A
                }
            })
            .collect();
        out.add_term(Word::from_letters(letters), Q::from_integer(count.into()));
    }
    out
}

/// The ab-index: the flag enumerator with a replaced by a - b.
pub fn ab_index(p: &Poset) -> NCPoly {
    let mut subst = BTreeMap::new();
    let mut a_minus_b = NCPoly::letter(Letter::A);
    a_minus_b.add_term(Word::letter(Letter::B), -Q::one());
    subst.insert(Letter::A, a_minus_b);
    specialize(&flag_enumerator(p), &subst)
}

/// Replaces c and d with their primed copies.
pub fn prime_cd(p: &NCPoly) -> NCPoly {
    let mut subst = BTreeMap::new();
    subst.insert(Letter::C, NCPoly::letter(Letter::Cp));
    subst.insert(Letter::D, NCPoly::letter(Letter::Dp));
    specialize(p, &subst)
}

/// The cd-index. In refined mode the rank zero poset contributes e instead
/// of 1; every other case, including all recursive calls, is classic.
pub fn cd_index(p: &Poset, mode: CdMode) -> Result<NCPoly, IndexError> {
    if p.max_rank() == 0 {
        return Ok(match mode {
            CdMode::Classic => NCPoly::one(),
            CdMode::Refined => NCPoly::letter(Letter::E),
        });
    }
    if let Ok(closed) = p.adjoin_max(None) {
        if closed.classify().eulerian {
            let (f, g, e0) = ab_to_cd(&ab_index(p))?;
            assert!(
                g.is_zero() && e0.is_zero(),
                "ab-index of a poset with Eulerian closure must be a pure cd-polynomial"
            );
            return Ok(f);
        }
    }
    let cls = p.classify();
    if cls.eulerian {
        return cd_index(&p.boundary()?, CdMode::Classic);
    }
    if cls.near_eulerian {
        let lphi = local_cd_index(p)?;
        let phi_boundary = cd_index(&p.boundary()?, CdMode::Classic)?;
        return Ok(lphi.add(&phi_boundary));
    }
    Err(IndexError::NotInScope(format!(
        "cd-index needs an Eulerian or near-Eulerian poset{}",
        p.name().map(|n| format!(" ({n})")).unwrap_or_default()
    )))
}

/// The local cd-index: zero on Eulerian posets of positive rank, and the
/// semisuspension defect on near-Eulerian posets.
pub fn local_cd_index(p: &Poset) -> Result<NCPoly, IndexError> {
    if p.max_rank() == 0 {
        return Ok(NCPoly::one());
    }
    let cls = p.classify();
    if cls.eulerian {
        return Ok(NCPoly::zero());
    }
    if cls.near_eulerian {
        let phi_semi = cd_index(&p.semisuspension()?, CdMode::Classic)?;
        let phi_boundary = cd_index(&p.boundary()?, CdMode::Classic)?;
        let c = NCPoly::letter(Letter::C);
        return Ok(phi_semi.sub(&phi_boundary.mul(&c)));
    }
    Err(IndexError::NotInScope(format!(
        "local cd-index needs an Eulerian or near-Eulerian poset{}",
        p.name().map(|n| format!(" ({n})")).unwrap_or_default()
    )))
}

/// The mixed cd-index of a strong formal subdivision onto an Eulerian
/// poset: local data of the fibers in primed letters times the refined
/// cd-indices of the upper intervals.
pub fn mixed_cd_index(map: &PosetMap) -> Result<MixedPoly, IndexError> {
    let check = is_sfs(map, SfsMethod::Characterization)?;
    if !check.ok {
        return Err(IndexError::Map(MapError::NotSFS(
            check.witness.unwrap_or_else(|| "no witness".into()),
        )));
    }
    let b = map.target();
    let cls = b.classify();
    if !cls.eulerian {
        return Err(IndexError::NotInScope(
            "mixed cd-index needs an Eulerian target".into(),
        ));
    }
    let top = b.max_index().expect("Eulerian posets have a maximum");
    let top_id = b.id(top).to_string();
    let mut omega = MixedPoly::zero();
    for x in 0..b.len() {
        let fiber = restrict_below(map, b.id(x))?;
        let lphi = prime_cd(&local_cd_index(fiber.source())?);
        if lphi.is_zero() {
            continue;
        }
        let upper = if x == top {
            NCPoly::letter(Letter::E)
        } else {
            cd_index(&b.interval(b.id(x), Some(&top_id))?, CdMode::Classic)?
        };
        for (pw, pc) in lphi.terms() {
            for (uw, uc) in upper.terms() {
                let mw = if uw.is_e() {
                    MixedWord::new(pw.clone(), Word::one(), true)
                } else {
                    MixedWord::new(pw.clone(), uw.clone(), false)
                }
                .expect("local and interval factors form a valid mixed word");
                omega.add_term(mw, pc.clone() * uc.clone());
            }
        }
    }
    let n = b.max_rank() as i64;
    assert_eq!(
        omega.homogeneous_degree(),
        Some(n - 1),
        "mixed cd-index must be homogeneous of degree rank - 1"
    );
    Ok(omega)
}

/// The cd-index of a pyramid from the cd-index of the base and the pairs
/// (cd-index below, cd-index above) over all proper elements, with
/// multiplicity.
pub fn pyramid_cd(phi: &NCPoly, interval_data: &[(NCPoly, NCPoly)]) -> Result<NCPoly, IndexError> {
    let c = NCPoly::letter(Letter::C);
    let d = NCPoly::letter(Letter::D);
    let mut total = phi.mul(&c).add(&c.mul(phi));
    for (lower, upper) in interval_data {
        total = total.add(&lower.mul(&d).mul(upper));
    }
    let half = total.scale(&(Q::one() / Q::from_integer(2.into())));
    if !half.is_integral() {
        return Err(IndexError::NonIntegralResult);
    }
    Ok(half)
}

/// cd-indices of the Boolean lattices B_1 ... B_n by the pyramid recursion.
pub fn boolean_cd(n: usize) -> Result<Vec<NCPoly>, IndexError> {
    let mut phis: Vec<NCPoly> = vec![NCPoly::one(); 2.min(n + 1)];
    for m in 2..=n {
        // The base is B_(m-1); its C(m-1, r) proper elements of rank r split
        // it into B_r below and B_(m-1-r) above.
        let mut data = Vec::new();
        for r in 1..m - 1 {
            let count = binomial(m - 1, r);
            for _ in 0..count {
                data.push((phis[r].clone(), phis[m - 1 - r].clone()));
            }
        }
        let next = pyramid_cd(&phis[m - 1], &data)?;
        phis.push(next);
    }
    Ok(phis)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut out = 1usize;
    for i in 0..k.min(n - k) {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// Local cd-indices of the barycentric subdivisions of B_1 ... B_n by the
/// commutator recursion over flag subdivisions of the simplex boundary.
pub fn bary_local_cd(n: usize) -> Result<Vec<NCPoly>, IndexError> {
    let c = NCPoly::letter(Letter::C);
    let d = NCPoly::letter(Letter::D);
    let half = Q::one() / Q::from_integer(2.into());
    let phis = boolean_cd(n.max(1))?;
    let mut lphi: Vec<NCPoly> = vec![NCPoly::one(), NCPoly::zero()];
    let mut sphere_cache: Vec<Option<Poset>> = vec![None; n + 1];
    for m in 2..=n {
        let mut ds = phis[m].clone();
        for i in 1..m {
            let coeff = Q::from_integer((binomial(m, i) as i64).into());
            ds = ds.add(&lphi[i].mul(&phis[m - i]).scale(&coeff));
        }
        let mut total = c.mul(&ds).sub(&ds.mul(&c));
        for t_mask in 1..(1usize << (m - 1)) {
            let t: Vec<usize> = (0..m - 1).filter(|i| t_mask >> i & 1 == 1).collect();
            let mut parts = Vec::new();
            let mut prev = 0usize;
            for &i in &t {
                parts.push(i + 1 - prev);
                prev = i + 1;
            }
            parts.push(m - prev);
            let mut f_t = factorial(m);
            for &part in &parts {
                f_t /= factorial(part);
            }
            let mut l_t: Option<Poset> = None;
            for &part in &parts {
                let sphere = sphere_poset(&mut sphere_cache, part)?;
                l_t = Some(match l_t {
                    None => sphere,
                    Some(acc) => cartesian_product(&acc, &sphere)?,
                });
            }
            let phi_l = cd_index(&l_t.expect("at least one part"), CdMode::Classic)?;
            let term = phis[t.len()]
                .mul(&d)
                .mul(&phi_l)
                .scale(&Q::from_integer((f_t as i64).into()));
            total = total.add(&term);
        }
        let next = total.scale(&half);
        assert!(
            next.is_integral(),
            "local cd recursion must produce integral coefficients"
        );
        lphi.push(next);
    }
    lphi.truncate(n + 1);
    Ok(lphi)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product::<u128>().max(1)
}

fn sphere_poset(cache: &mut [Option<Poset>], k: usize) -> Result<Poset, IndexError> {
    if cache[k].is_none() {
        let (bary, _) = barycentric(&boolean(k)?)?;
        cache[k] = Some(bary.boundary()?);
    }
    Ok(cache[k].clone().expect("just inserted"))
}

/// The cd-level effect of a cut: the cd-index of the separating sphere,
/// times d, times the cd-index of the filter above the cut element.
pub fn cut_cd_delta(p: &Poset, spec: &CutSpec) -> Result<NCPoly, IndexError> {
    let data = validate_cut(p, spec)?;
    let sphere = p.induced(&data.intersection, None)?;
    let phi_sphere = cd_index(&sphere, CdMode::Classic)?;
    let upper = p.interval(&spec.x0, None)?;
    let phi_upper = cd_index(&upper, CdMode::Classic)?;
    let d = NCPoly::letter(Letter::D);
    Ok(phi_sphere.mul(&d).mul(&phi_upper))
}
