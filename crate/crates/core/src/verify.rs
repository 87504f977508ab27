//! A fixture corpus of strong formal subdivisions together with
//! executable checkers for the identities tying the cd-index, the local
//! and mixed cd-indices, and their commutative images to one another.
//!
//! Every checker computes both sides of its identity from scratch; no
//! intermediate value is shared or cached between the two sides, so a
//! passing report is two independent computations agreeing exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::constructions::{
    barycentric, boolean, polygon, polytope_product, simplicial_face_poset,
};
use crate::hpoly::{
    double_prime, g_poly, g_prime, h_omega, h_poly, h_prime_omega, l_omega, l_prime_omega,
    local_h_poly, mixed_h_poly, prime_shift, CommMono, CommPoly, HError,
};
use crate::indices::{cd_index, cut_cd_delta, local_cd_index, mixed_cd_index, CdMode, IndexError};
use crate::ncpoly::{
    comodule_rho, coproduct, q_int, specialize_mixed, Letter, MixedPoly, MixedWord, NCPoly,
    NcError, Tensor, Word,
};
use crate::poset::{build_poset, Poset, PosetError};
use crate::posetmap::{
    build_map, carrier_assignment, compose, cut, extension, is_sfs, restrict_above, restrict_below,
    CutSpec, MapError, PosetMap, SfsMethod,
};

#[derive(Error, Debug)]
pub enum VerifyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error(transparent)]
    H(#[from] HError),
}

/// A named subdivision fixture.
pub struct CorpusEntry {
    pub name: String,
    pub map: PosetMap,
}

fn entry(name: String, map: PosetMap) -> CorpusEntry {
    CorpusEntry { name, map }
}

/// The identity subdivision of a poset.
pub fn identity_map(p: &Poset) -> PosetMap {
    let assignment: Vec<(String, String)> =
        p.ids().iter().map(|id| (id.clone(), id.clone())).collect();
    build_map(p.clone(), p.clone(), &assignment).expect("the identity assignment is a valid map")
}

/// The barycentric subdivision map of the Boolean lattice of rank `n`,
/// sending each chain to its maximal element.
pub fn barycentric_map(n: usize) -> PosetMap {
    let b = boolean(n).expect("Boolean lattice");
    let (sd, assignment) = barycentric(&b).expect("barycentric subdivision");
    build_map(sd, b, &assignment).expect("the chain-to-maximum assignment is a valid map")
}

fn simplicial(facets: &[&str]) -> Poset {
    let lists: Vec<Vec<String>> = facets
        .iter()
        .map(|f| f.chars().map(|c| c.to_string()).collect())
        .collect();
    simplicial_face_poset(&lists).expect("simplicial complex")
}

fn carrier_map(gamma: Poset, b: Poset, vertex_images: &[(&str, &str)]) -> PosetMap {
    let images: Vec<(String, String)> = vertex_images
        .iter()
        .map(|&(g, t)| (g.to_string(), t.to_string()))
        .collect();
    let assignment = carrier_assignment(&gamma, &b, &images).expect("carrier assignment");
    build_map(gamma, b, &assignment).expect("carrier map")
}

/// Replaces the facet 123 of the tetrahedron by the pyramid over its
/// boundary; the subdivided boundary is the triangular bipyramid.
pub fn bipyramid_map() -> PosetMap {
    let gamma = simplicial(&["124", "134", "234", "125", "135", "235"])
        .adjoin_max(Some("T"))
        .expect("closed bipyramid");
    let b = boolean(4).expect("tetrahedron");
    carrier_map(
        gamma,
        b,
        &[("1", "1"), ("2", "2"), ("3", "3"), ("4", "4"), ("5", "123")],
    )
}

/// The stellar subdivision of the tetrahedron boundary at an interior
/// point of the edge 12.
pub fn stellar_tetrahedron_map() -> PosetMap {
    let gamma = simplicial(&["134", "234", "135", "235", "145", "245"])
        .adjoin_max(Some("T"))
        .expect("closed stellar tetrahedron");
    let b = boolean(4).expect("tetrahedron");
    carrier_map(
        gamma,
        b,
        &[("1", "1"), ("2", "2"), ("3", "3"), ("4", "4"), ("5", "12")],
    )
}

/// The stellar subdivision of a solid triangle at an interior point.
pub fn stellar_triangle_map() -> PosetMap {
    let gamma = simplicial(&["124", "134", "234"]);
    let b = polygon(3).expect("triangle");
    carrier_map(
        gamma,
        b,
        &[("1", "v1"), ("2", "v2"), ("3", "v3"), ("4", "F")],
    )
}

/// A subdivision between two near-Eulerian disks: the stellar triangle
/// complex with the triangle 124 subdivided again at a new vertex.
pub fn disk_refinement_map() -> PosetMap {
    let gamma = simplicial(&["125", "145", "245", "134", "234"]);
    let b = simplicial(&["124", "134", "234"]);
    carrier_map(
        gamma,
        b,
        &[("1", "1"), ("2", "2"), ("3", "3"), ("4", "4"), ("5", "124")],
    )
}

/// The face lattice of the 3-cube.
pub fn cube() -> Poset {
    polytope_product(&polygon(4).expect("square"), &boolean(2).expect("segment")).expect("cube")
}

/// The triangulation of the solid cube into five tetrahedra: a central
/// one spanned by four pairwise nonadjacent vertices and four corners.
pub fn cube_triangulation_map() -> PosetMap {
    let gamma = simplicial(&["1368", "1236", "1348", "1568", "3678"]);
    let b = cube();
    carrier_map(
        gamma,
        b,
        &[
            ("1", "(v1,1)"),
            ("2", "(v2,1)"),
            ("3", "(v3,1)"),
            ("4", "(v4,1)"),
            ("5", "(v1,2)"),
            ("6", "(v2,2)"),
            ("7", "(v3,2)"),
            ("8", "(v4,2)"),
        ],
    )
}

/// A base poset with a cut specification, ready to run.
pub struct CutFixture {
    pub name: String,
    pub base: Poset,
    pub spec: CutSpec,
}

impl CutFixture {
    pub fn run(&self) -> PosetMap {
        cut(&self.base, &self.spec).expect("fixture cut").1
    }
}

fn spec(x0: &str, sigma1: &[&str], sigma2: &[&str]) -> CutSpec {
    CutSpec {
        x0: x0.to_string(),
        sigma1: sigma1.iter().map(|s| s.to_string()).collect(),
        sigma2: sigma2.iter().map(|s| s.to_string()).collect(),
    }
}

/// The midpoint subdivision of a segment as a cut through the maximum.
pub fn segment_cut_fixture() -> CutFixture {
    CutFixture {
        name: "segment:cut:12".into(),
        base: boolean(2).expect("segment"),
        spec: spec("12", &["0", "1"], &["0", "2"]),
    }
}

/// The closed boundary path of a polygon from vertex `from` to vertex
/// `to`, walking in increasing direction and wrapping around.
fn polygon_path(n: usize, from: usize, to: usize) -> Vec<String> {
    let mut ids = vec!["0".to_string()];
    let mut k = from;
    loop {
        ids.push(format!("v{k}"));
        if k == to {
            break;
        }
        ids.push(format!("e{k}"));
        k = k % n + 1;
    }
    ids
}

/// Every single-cut subdivision of the polygons with 3 to 6 vertices: a
/// midpoint cut on each boundary edge and a diagonal cut of the face for
/// each vertex pair.
pub fn polygon_cut_fixtures() -> Vec<CutFixture> {
    let mut out = Vec::new();
    for n in 3..=6 {
        let base = polygon(n).expect("polygon");
        for i in 1..=n {
            let vi = format!("v{i}");
            let vj = format!("v{}", i % n + 1);
            out.push(CutFixture {
                name: format!("polygon{n}:edge:e{i}"),
                base: base.clone(),
                spec: spec(&format!("e{i}"), &["0", &vi], &["0", &vj]),
            });
        }
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(CutFixture {
                    name: format!("polygon{n}:diagonal:v{i}-v{j}"),
                    base: base.clone(),
                    spec: CutSpec {
                        x0: "F".into(),
                        sigma1: polygon_path(n, i, j),
                        sigma2: polygon_path(n, j, i),
                    },
                });
            }
        }
    }
    out
}

/// A sequence of cuts applied one after another; the composite map goes
/// from the final subdivision onto the base poset.
pub struct CutSequence {
    pub name: String,
    pub base: Poset,
    pub specs: Vec<CutSpec>,
}

impl CutSequence {
    /// The single cut maps, the one applied to the base first.
    pub fn stages(&self) -> Vec<PosetMap> {
        let mut maps = Vec::new();
        let mut current = self.base.clone();
        for s in &self.specs {
            let (next, map) = cut(&current, s).expect("fixture cut");
            current = next;
            maps.push(map);
        }
        maps
    }

    /// The composite subdivision map onto the base poset.
    pub fn composite(&self) -> PosetMap {
        let mut stages = self.stages().into_iter();
        let mut total = stages
            .next()
            .expect("a cut sequence has at least one stage");
        for m in stages {
            total = compose(&total, &m).expect("fixture stages compose");
        }
        total
    }
}

/// Composite subdivisions obtained by cutting twice, including cuts of
/// elements created by the first cut.
pub fn cut_sequences() -> Vec<CutSequence> {
    vec![
        CutSequence {
            name: "segment:double".into(),
            base: boolean(2).expect("segment"),
            specs: vec![
                spec("12", &["0", "1"], &["0", "2"]),
                spec("12.1", &["0", "1"], &["0", "12.y"]),
            ],
        },
        CutSequence {
            name: "polygon3:edges:e1,e2".into(),
            base: polygon(3).expect("triangle"),
            specs: vec![
                spec("e1", &["0", "v1"], &["0", "v2"]),
                spec("e2", &["0", "v2"], &["0", "v3"]),
            ],
        },
        CutSequence {
            name: "polygon3:nested:e1".into(),
            base: polygon(3).expect("triangle"),
            specs: vec![
                spec("e1", &["0", "v1"], &["0", "v2"]),
                spec("e1.1", &["0", "v1"], &["0", "e1.y"]),
            ],
        },
        CutSequence {
            name: "polygon4:diagonal,midpoint".into(),
            base: polygon(4).expect("square"),
            specs: vec![
                CutSpec {
                    x0: "F".into(),
                    sigma1: polygon_path(4, 1, 3),
                    sigma2: polygon_path(4, 3, 1),
                },
                spec("F.y", &["0", "v1"], &["0", "v3"]),
            ],
        },
        CutSequence {
            name: "polygon5:edge,diagonal".into(),
            base: polygon(5).expect("pentagon"),
            specs: vec![
                spec("e1", &["0", "v1"], &["0", "v2"]),
                spec(
                    "F",
                    &["0", "e1.y", "e1.2", "v2", "e2", "v3", "e3", "v4"],
                    &["0", "v4", "e4", "v5", "e5", "v1", "e1.1", "e1.y"],
                ),
            ],
        },
        CutSequence {
            name: "polygon6:two-diagonals".into(),
            base: polygon(6).expect("hexagon"),
            specs: vec![
                CutSpec {
                    x0: "F".into(),
                    sigma1: polygon_path(6, 1, 4),
                    sigma2: polygon_path(6, 4, 1),
                },
                spec(
                    "F.1",
                    &["0", "v1", "e1", "v2", "e2", "v3"],
                    &["0", "v3", "e3", "v4", "F.y", "v1"],
                ),
            ],
        },
    ]
}

/// The positive fixture corpus: identities, barycentric subdivisions,
/// the simplicial examples, one segment cut, all single polygon cuts,
/// the composed cut sequences, and restrictions and extensions of
/// barycentric maps.
pub fn sfs_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=4 {
        out.push(entry(
            format!("identity:boolean{n}"),
            identity_map(&boolean(n).expect("Boolean lattice")),
        ));
    }
    out.push(entry(
        "identity:polygon4".into(),
        identity_map(&polygon(4).expect("square")),
    ));
    out.push(entry(
        "identity:polygon5".into(),
        identity_map(&polygon(5).expect("pentagon")),
    ));
    out.push(entry("identity:cube".into(), identity_map(&cube())));
    for n in 1..=4 {
        out.push(entry(format!("sigma{n}"), barycentric_map(n)));
    }
    out.push(entry("bipyramid".into(), bipyramid_map()));
    out.push(entry(
        "stellar-tetrahedron".into(),
        stellar_tetrahedron_map(),
    ));
    out.push(entry("stellar-triangle".into(), stellar_triangle_map()));
    out.push(entry("cube-triangulation".into(), cube_triangulation_map()));
    out.push(entry("disk-refinement".into(), disk_refinement_map()));
    let seg = segment_cut_fixture();
    out.push(entry(seg.name.clone(), seg.run()));
    for f in polygon_cut_fixtures() {
        out.push(entry(f.name.clone(), f.run()));
    }
    for s in cut_sequences() {
        out.push(entry(s.name.clone(), s.composite()));
    }
    let s3 = barycentric_map(3);
    let s4 = barycentric_map(4);
    out.push(entry(
        "sigma3:below:12".into(),
        restrict_below(&s3, "12").expect("restriction"),
    ));
    out.push(entry(
        "sigma4:below:123".into(),
        restrict_below(&s4, "123").expect("restriction"),
    ));
    out.push(entry(
        "sigma3:above:0|1".into(),
        restrict_above(&s3, "0|1").expect("restriction"),
    ));
    out.push(entry(
        "sigma4:above:0|1".into(),
        restrict_above(&s4, "0|1").expect("restriction"),
    ));
    let s2 = barycentric_map(2);
    out.push(entry(
        "sigma2:extension:boolean3".into(),
        extension(&s2, &boolean(3).expect("Boolean lattice")).expect("extension"),
    ));
    out.push(entry(
        "sigma2:extension:boolean4".into(),
        extension(&s2, &boolean(4).expect("Boolean lattice")).expect("extension"),
    ));
    out
}

fn fixture_poset(elements: &[&str], covers: &[(&str, &str)]) -> Poset {
    build_poset(
        None,
        elements.iter().map(|s| s.to_string()).collect(),
        covers
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect(),
    )
    .expect("fixture poset")
}

fn fixture_map(source: Poset, target: Poset, assignment: &[(&str, &str)]) -> PosetMap {
    let pairs: Vec<(String, String)> = assignment
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect();
    build_map(source, target, &pairs).expect("fixture map")
}

/// Deliberately broken maps: each is order preserving, rank increasing
/// and surjective, yet fails the subdivision conditions.
pub fn negative_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    // A subdivided segment with its midpoint folded onto one endpoint.
    let folded = fixture_poset(
        &["0", "p", "m", "q", "s1", "s2"],
        &[
            ("0", "p"),
            ("0", "m"),
            ("0", "q"),
            ("p", "s1"),
            ("m", "s1"),
            ("m", "s2"),
            ("q", "s2"),
        ],
    );
    out.push(entry(
        "negative:midpoint-fold".into(),
        fixture_map(
            folded,
            boolean(2).expect("segment"),
            &[
                ("0", "0"),
                ("p", "1"),
                ("m", "1"),
                ("q", "2"),
                ("s1", "12"),
                ("s2", "12"),
            ],
        ),
    ));
    // A square folded onto a triangle.
    out.push(entry(
        "negative:square-fold".into(),
        fixture_map(
            polygon(4).expect("square"),
            polygon(3).expect("triangle"),
            &[
                ("0", "0"),
                ("v1", "v1"),
                ("v2", "v2"),
                ("v3", "v3"),
                ("v4", "v1"),
                ("e1", "e1"),
                ("e2", "e2"),
                ("e3", "e3"),
                ("e4", "e1"),
                ("F", "F"),
            ],
        ),
    ));
    // A triangle with a doubled face: the fiber over the face is wrong.
    let doubled = fixture_poset(
        &["0", "v1", "v2", "v3", "e1", "e2", "e3", "F", "F2"],
        &[
            ("0", "v1"),
            ("0", "v2"),
            ("0", "v3"),
            ("v1", "e1"),
            ("v2", "e1"),
            ("v2", "e2"),
            ("v3", "e2"),
            ("v3", "e3"),
            ("v1", "e3"),
            ("e1", "F"),
            ("e2", "F"),
            ("e3", "F"),
            ("e1", "F2"),
            ("e2", "F2"),
            ("e3", "F2"),
        ],
    );
    out.push(entry(
        "negative:doubled-face".into(),
        fixture_map(
            doubled,
            polygon(3).expect("triangle"),
            &[
                ("0", "0"),
                ("v1", "v1"),
                ("v2", "v2"),
                ("v3", "v3"),
                ("e1", "e1"),
                ("e2", "e2"),
                ("e3", "e3"),
                ("F", "F"),
                ("F2", "F"),
            ],
        ),
    ));
    // Two atoms over one.
    let two = fixture_poset(&["0", "p", "q"], &[("0", "p"), ("0", "q")]);
    out.push(entry(
        "negative:doubled-point".into(),
        fixture_map(
            two,
            boolean(1).expect("point"),
            &[("0", "0"), ("p", "1"), ("q", "1")],
        ),
    ));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Decomposition,
    LocalDecomposition,
    Comodule,
    MixedMaps,
    CutLemma,
    Examples,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Theorem::Decomposition => "decomposition",
            Theorem::LocalDecomposition => "local-decomposition",
            Theorem::Comodule => "comodule",
            Theorem::MixedMaps => "mixed-maps",
            Theorem::CutLemma => "cut-lemma",
            Theorem::Examples => "examples",
        };
        f.write_str(name)
    }
}

/// A single compared equality inside a report.
#[derive(Clone, Debug)]
pub struct EqualityCheck {
    pub label: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

/// The outcome of one verifier run on one instance.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub theorem: Theorem,
    pub instance: String,
    pub checks: Vec<EqualityCheck>,
}

impl VerifyReport {
    fn new(theorem: Theorem, instance: String) -> VerifyReport {
        VerifyReport {
            theorem,
            instance,
            checks: Vec::new(),
        }
    }

    fn record(&mut self, label: &str, pass: bool, lhs: String, rhs: String) {
        self.checks.push(EqualityCheck {
            label: label.to_string(),
            lhs,
            rhs,
            pass,
        });
    }

    fn check_eq<T: PartialEq + fmt::Display>(&mut self, label: &str, lhs: &T, rhs: &T) {
        self.record(label, lhs == rhs, lhs.to_string(), rhs.to_string());
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("theorem: {}\n", self.theorem));
        out.push_str(&format!("instance: {}\n", self.instance));
        for c in &self.checks {
            if c.pass {
                out.push_str(&format!("  [pass] {}: {}\n", c.label, c.lhs));
            } else {
                out.push_str(&format!(
                    "  [FAIL] {}: lhs = {} ; rhs = {}\n",
                    c.label, c.lhs, c.rhs
                ));
            }
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn require_sfs(map: &PosetMap) -> Result<(), VerifyError> {
    let check = is_sfs(map, SfsMethod::Characterization)?;
    if !check.ok {
        return Err(MapError::NotSFS(
            check
                .witness
                .unwrap_or_else(|| "fails the subdivision conditions".into()),
        )
        .into());
    }
    Ok(())
}

fn describe(map: &PosetMap) -> String {
    let s = map.source().name().unwrap_or("source").to_string();
    let t = map.target().name().unwrap_or("target").to_string();
    format!(
        "{s} ({} elements) -> {t} ({} elements)",
        map.source().len(),
        map.target().len()
    )
}

/// The induced subposet of the source lying over the principal ideal of
/// the target element with index `x`.
fn preimage_ideal(map: &PosetMap, x: usize) -> Result<Poset, VerifyError> {
    let keep: Vec<usize> = (0..map.source().len())
        .filter(|&y| map.target().leq_idx(map.apply_idx(y), x))
        .collect();
    Ok(map.source().induced(&keep, None)?)
}

fn mixed_tensor_text(t: &Tensor<MixedWord, Word>) -> String {
    let parts: Vec<String> = t
        .terms()
        .map(|((l, r), q)| format!("{q}*({} (x) {})", l.render(), r.render()))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn word_tensor_text(t: &Tensor<Word, Word>) -> String {
    let parts: Vec<String> = t
        .terms()
        .map(|((l, r), q)| format!("{q}*({} (x) {})", l.render(), r.render()))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Checks that the cd-index of the source equals the sum over target
/// elements of the local cd-index of the fiber ideal times the cd-index
/// of the upper interval.
pub fn verify_decomposition(map: &PosetMap) -> Result<VerifyReport, VerifyError> {
    require_sfs(map)?;
    let b = map.target();
    if !b.classify().eulerian {
        return Err(
            IndexError::NotInScope("the decomposition needs an Eulerian target".into()).into(),
        );
    }
    let gamma = map.source();
    let lhs = cd_index(gamma, CdMode::Classic)?;
    let mut rhs = NCPoly::zero();
    for x in 0..b.len() {
        let ideal = preimage_ideal(map, x)?;
        let local = local_cd_index(&ideal)?;
        if local.is_zero() {
            continue;
        }
        let upper = b.interval(b.id(x), None)?;
        rhs = rhs.add(&local.mul(&cd_index(&upper, CdMode::Classic)?));
    }
    let mut report = VerifyReport::new(Theorem::Decomposition, describe(map));
    report.check_eq("decomposition", &lhs, &rhs);
    let cls = gamma.classify();
    if cls.eulerian && cls.rank > 0 {
        report.check_eq(
            "local-index-vanishes",
            &local_cd_index(gamma)?,
            &NCPoly::zero(),
        );
        let expected = cls.rank as i64 - 1;
        report.record(
            "homogeneous",
            lhs.homogeneous_degree() == Some(expected),
            format!("{:?}", lhs.homogeneous_degree()),
            format!("Some({expected})"),
        );
    }
    Ok(report)
}

/// Checks the boundary/interior split of the local cd-index of the
/// source of a subdivision between near-Eulerian posets.
pub fn verify_local_decomposition(map: &PosetMap) -> Result<VerifyReport, VerifyError> {
    require_sfs(map)?;
    let pi = map.source();
    let gamma = map.target();
    let pcls = pi.classify();
    let gcls = gamma.classify();
    if !pcls.near_eulerian || !gcls.near_eulerian {
        return Err(IndexError::NotInScope(
            "the local decomposition needs near-Eulerian source and target".into(),
        )
        .into());
    }
    let boundary: BTreeSet<String> = gcls.boundary_ids.unwrap_or_default().into_iter().collect();
    let lhs = local_cd_index(pi)?;
    let mut rhs = NCPoly::zero();
    for y in 0..gamma.len() {
        let ideal = preimage_ideal(map, y)?;
        let local = local_cd_index(&ideal)?;
        if local.is_zero() {
            continue;
        }
        let upper = gamma.interval(gamma.id(y), None)?;
        let factor = if boundary.contains(gamma.id(y)) {
            local_cd_index(&upper)?
        } else {
            cd_index(&upper, CdMode::Classic)?
        };
        rhs = rhs.add(&local.mul(&factor));
    }
    let mut report = VerifyReport::new(Theorem::LocalDecomposition, describe(map));
    report.check_eq("local-decomposition", &lhs, &rhs);
    Ok(report)
}

/// Checks the comodule property of the mixed cd-index, the coalgebra
/// morphism property of the cd-index on the target, and the two
/// specializations of the mixed index.
pub fn verify_comodule(map: &PosetMap) -> Result<VerifyReport, VerifyError> {
    let omega = mixed_cd_index(map)?;
    let b = map.target();
    let lhs = comodule_rho(&omega);
    let mut rhs: Tensor<MixedWord, Word> = Tensor::zero();
    for x in 0..b.len() {
        let sub = restrict_below(map, b.id(x))?;
        let omega_x = mixed_cd_index(&sub)?;
        let upper = cd_index(&b.interval(b.id(x), None)?, CdMode::Refined)?;
        for (mw, qm) in omega_x.terms() {
            for (w, qw) in upper.terms() {
                rhs.add_term(mw.clone(), w.clone(), qm.clone() * qw.clone());
            }
        }
    }
    let mut report = VerifyReport::new(Theorem::Comodule, describe(map));
    report.record(
        "comodule",
        lhs.sub(&rhs).is_zero(),
        mixed_tensor_text(&lhs),
        mixed_tensor_text(&rhs),
    );
    let phi_b = cd_index(b, CdMode::Refined)?;
    let delta_lhs = coproduct(&phi_b);
    let mut delta_rhs: Tensor<Word, Word> = Tensor::zero();
    let min_id = b.id(b.min_index()).to_string();
    for x in 0..b.len() {
        let low = cd_index(&b.interval(&min_id, Some(b.id(x)))?, CdMode::Refined)?;
        let high = cd_index(&b.interval(b.id(x), None)?, CdMode::Refined)?;
        for (wl, ql) in low.terms() {
            for (wh, qh) in high.terms() {
                delta_rhs.add_term(wl.clone(), wh.clone(), ql.clone() * qh.clone());
            }
        }
    }
    report.record(
        "coalgebra-morphism",
        delta_lhs.sub(&delta_rhs).is_zero(),
        word_tensor_text(&delta_lhs),
        word_tensor_text(&delta_rhs),
    );
    let to_source: BTreeMap<Letter, NCPoly> = BTreeMap::from([
        (Letter::Cp, NCPoly::letter(Letter::C)),
        (Letter::Dp, NCPoly::letter(Letter::D)),
        (Letter::E, NCPoly::one()),
    ]);
    report.check_eq(
        "specializes-to-source",
        &specialize_mixed(&omega, &to_source),
        &cd_index(map.source(), CdMode::Classic)?,
    );
    let to_target: BTreeMap<Letter, NCPoly> = BTreeMap::from([
        (Letter::Cp, NCPoly::zero()),
        (Letter::Dp, NCPoly::zero()),
        (Letter::E, NCPoly::one()),
    ]);
    report.check_eq(
        "specializes-to-target",
        &specialize_mixed(&omega, &to_target),
        &cd_index(b, CdMode::Classic)?,
    );
    Ok(report)
}

/// Checks that the commutative linear maps send the mixed cd-index to
/// the h-, local h- and mixed h-polynomials computed directly from the
/// posets, and the primed variants to their shifted images.
pub fn verify_mixed_maps(map: &PosetMap) -> Result<VerifyReport, VerifyError> {
    let omega = mixed_cd_index(map)?;
    let gamma = map.source();
    let b = map.target();
    let mut report = VerifyReport::new(Theorem::MixedMaps, describe(map));
    report.check_eq("h", &h_omega(&omega), &h_poly(gamma)?);
    report.check_eq("local-h", &l_omega(&omega), &local_h_poly(map)?);
    report.check_eq("mixed-h", &h_prime_omega(&omega), &mixed_h_poly(map)?);
    let n = b.max_rank() as u32;
    report.check_eq(
        "local-h-primed",
        &l_prime_omega(&omega),
        &prime_shift(&local_h_poly(map)?, n),
    );
    report.check_eq(
        "g-primed",
        &g_prime(&cd_index(b, CdMode::Classic)?),
        &double_prime(&g_poly(b)?),
    );
    Ok(report)
}

/// Checks that a cut changes the cd-index by the product of the
/// intersection index, d, and the upper interval index.
pub fn verify_cut_lemma(p: &Poset, spec: &CutSpec) -> Result<VerifyReport, VerifyError> {
    let (pi, _) = cut(p, spec)?;
    let lhs = cd_index(&pi, CdMode::Classic)?.sub(&cd_index(p, CdMode::Classic)?);
    let rhs = cut_cd_delta(p, spec)?;
    let mut report = VerifyReport::new(
        Theorem::CutLemma,
        format!("cut of {} at {}", p.name().unwrap_or("poset"), spec.x0),
    );
    report.check_eq("cut-lemma", &lhs, &rhs);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    Polygon,
    Boundary3,
    Triangulation,
}

fn rank_pair_count(map: &PosetMap, source_rank: usize, target_rank: usize) -> i64 {
    (0..map.source().len())
        .filter(|&y| {
            map.source().rank_of(y) == source_rank
                && map.target().rank_of(map.apply_idx(y)) == target_rank
        })
        .count() as i64
}

fn count_rank(p: &Poset, r: usize) -> i64 {
    (0..p.len()).filter(|&i| p.rank_of(i) == r).count() as i64
}

fn mixed_term(out: &mut MixedPoly, coeff: i64, primed: &[Letter], unprimed: &[Letter], e: bool) {
    out.add_term(
        MixedWord::new(
            Word::from_letters(primed.to_vec()),
            Word::from_letters(unprimed.to_vec()),
            e,
        )
        .expect("closed form words are well formed"),
        q_int(coeff),
    );
}

fn comm_term(out: &mut CommPoly, coeff: i64, t: u32, tp: u32, u: u32, up: u32) {
    out.add_term(CommMono { t, tp, u, up }, q_int(coeff));
}

/// Checks the closed forms for the mixed cd-index and mixed h-polynomial
/// of polygon subdivisions, boundary subdivisions of 3-polytopes, and
/// interior-free triangulations of 3-polytopes.
pub fn verify_example_formulas(
    kind: ExampleKind,
    map: &PosetMap,
) -> Result<VerifyReport, VerifyError> {
    require_sfs(map)?;
    let b = map.target();
    let bcls = b.classify();
    let mut report = VerifyReport::new(Theorem::Examples, format!("{kind:?}: {}", describe(map)));
    match kind {
        ExampleKind::Polygon => {
            let n = count_rank(b, 1);
            if !(bcls.eulerian && bcls.rank == 3 && n >= 3 && n == count_rank(b, 2)) {
                return Err(VerifyError::ShapeMismatch(
                    "the target is not a polygon".into(),
                ));
            }
            let beta = rank_pair_count(map, 1, 2);
            let gamma_count = rank_pair_count(map, 1, 3);
            let eps = rank_pair_count(map, 2, 3);
            let mut omega = MixedPoly::zero();
            mixed_term(&mut omega, 1, &[], &[Letter::C, Letter::C], false);
            mixed_term(&mut omega, n - 2, &[], &[Letter::D], false);
            mixed_term(&mut omega, beta, &[Letter::Dp], &[], false);
            mixed_term(
                &mut omega,
                gamma_count,
                &[Letter::Dp, Letter::Cp],
                &[],
                true,
            );
            mixed_term(
                &mut omega,
                eps - gamma_count,
                &[Letter::Cp, Letter::Dp],
                &[],
                true,
            );
            report.check_eq("mixed-cd-closed-form", &omega, &mixed_cd_index(map)?);
            let mut h = CommPoly::zero();
            comm_term(&mut h, 1, 0, 0, 3, 3);
            comm_term(&mut h, n - 3 + beta, 1, 1, 2, 2);
            comm_term(&mut h, gamma_count, 1, 2, 2, 1);
            comm_term(&mut h, gamma_count, 2, 1, 1, 2);
            report.check_eq("mixed-h-closed-form", &h, &mixed_h_poly(map)?);
        }
        ExampleKind::Boundary3 => {
            if !(bcls.eulerian && bcls.rank == 4) {
                return Err(VerifyError::ShapeMismatch(
                    "the target is not the face lattice of a 3-polytope".into(),
                ));
            }
            if !map.source().classify().eulerian {
                return Err(VerifyError::ShapeMismatch(
                    "the source must subdivide only the boundary".into(),
                ));
            }
            let f0 = count_rank(b, 1);
            let f2 = count_rank(b, 3);
            let beta = rank_pair_count(map, 1, 2);
            let gamma_count = rank_pair_count(map, 1, 3);
            let eps = rank_pair_count(map, 2, 3);
            let mut omega = MixedPoly::zero();
            mixed_term(
                &mut omega,
                1,
                &[],
                &[Letter::C, Letter::C, Letter::C],
                false,
            );
            mixed_term(&mut omega, f0 - 2, &[], &[Letter::D, Letter::C], false);
            mixed_term(&mut omega, f2 - 2, &[], &[Letter::C, Letter::D], false);
            mixed_term(&mut omega, beta, &[Letter::Dp], &[Letter::C], false);
            mixed_term(
                &mut omega,
                gamma_count,
                &[Letter::Dp, Letter::Cp],
                &[],
                false,
            );
            mixed_term(
                &mut omega,
                eps - gamma_count,
                &[Letter::Cp, Letter::Dp],
                &[],
                false,
            );
            report.check_eq("mixed-cd-closed-form", &omega, &mixed_cd_index(map)?);
            let mut h = CommPoly::zero();
            comm_term(&mut h, 1, 0, 0, 4, 4);
            comm_term(&mut h, f0 - 4 + beta, 1, 1, 3, 3);
            comm_term(&mut h, gamma_count, 1, 2, 3, 2);
            comm_term(&mut h, gamma_count, 2, 1, 2, 3);
            comm_term(&mut h, -gamma_count, 2, 2, 2, 2);
            report.check_eq("mixed-h-closed-form", &h, &mixed_h_poly(map)?);
        }
        ExampleKind::Triangulation => {
            if !(bcls.eulerian && bcls.rank == 4) {
                return Err(VerifyError::ShapeMismatch(
                    "the target is not the face lattice of a 3-polytope".into(),
                ));
            }
            let fibers = map.fibers();
            for x in 0..b.len() {
                let allowed: &[usize] = if b.rank_of(x) == 3 {
                    &[2, 3]
                } else if b.rank_of(x) == 4 {
                    &[3, 4]
                } else {
                    continue;
                };
                for &y in &fibers[x] {
                    if !allowed.contains(&map.source().rank_of(y)) {
                        return Err(VerifyError::ShapeMismatch(format!(
                            "the fiber over {} contains rank {}",
                            b.id(x),
                            map.source().rank_of(y)
                        )));
                    }
                }
            }
            let f0 = count_rank(b, 1);
            let f1 = count_rank(b, 2);
            let f2 = count_rank(b, 3);
            let cells = count_rank(map.source(), 4);
            let mut omega = MixedPoly::zero();
            mixed_term(
                &mut omega,
                1,
                &[],
                &[Letter::C, Letter::C, Letter::C],
                false,
            );
            mixed_term(&mut omega, f0 - 2, &[], &[Letter::D, Letter::C], false);
            mixed_term(&mut omega, f2 - 2, &[], &[Letter::C, Letter::D], false);
            mixed_term(
                &mut omega,
                2 * f1 - 3 * f2,
                &[Letter::Cp, Letter::Dp],
                &[],
                false,
            );
            mixed_term(
                &mut omega,
                cells - 1,
                &[Letter::Cp, Letter::Cp, Letter::Dp],
                &[],
                true,
            );
            mixed_term(&mut omega, cells - 1, &[Letter::Dp, Letter::Dp], &[], true);
            report.check_eq("mixed-cd-closed-form", &omega, &mixed_cd_index(map)?);
            let mut h = CommPoly::zero();
            comm_term(&mut h, 1, 0, 0, 4, 4);
            comm_term(&mut h, f0 - 4, 1, 1, 3, 3);
            report.check_eq("mixed-h-closed-form", &h, &mixed_h_poly(map)?);
            report.check_eq(
                "mixed-h-matches-identity",
                &mixed_h_poly(map)?,
                &mixed_h_poly(&identity_map(b))?,
            );
        }
    }
    Ok(report)
}
