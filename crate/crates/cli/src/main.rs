//! Command line front end for the cdindex library.
//!
//! `construct` writes poset and map documents to disk, `check` classifies
//! them, and the remaining subcommands compute invariants or run the
//! theorem verifiers. Exit codes: 0 on success (and on a passing `verify`),
//! 1 on domain errors or a failing `verify`, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cdindex::{
    ab_index, barycentric, boolean, build_map, build_poset, cartesian_product, cd_index, cube, cut,
    f_map, flag_vector, g_map, g_poly, g_prime, g_star, h_omega, h_poly, h_prime_omega,
    intermediate_factorization, is_sfs, join, l_omega, l_prime_omega, local_cd_index, local_h_poly,
    mixed_cd_index, mixed_h_poly, polygon, polytope_product, pyramid, simplicial_face_poset,
    verify_comodule, verify_cut_lemma, verify_decomposition, verify_example_formulas,
    verify_local_decomposition, verify_mixed_maps, CdMode, CutSpec, ExampleKind, FlagVector,
    MixedPoly, NCPoly, Poset, PosetMap, SfsMethod, VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "cdindex",
    version,
    about = "Flag-enumerative invariants of graded posets"
)]
struct Cli {
    /// Output format: plain text or a JSON document with the same content.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Build a poset (for some kinds also a map) and write it to a file.
    Construct(ConstructArgs),
    /// Classify a poset file, or test a map file for the subdivision property.
    Check(CheckArgs),
    /// Flag vector and the ab/cd family of indices.
    Index(IndexArgs),
    /// Commutative h, g, local h and mixed h polynomials.
    Hpoly(HpolyArgs),
    /// Apply one of the linear maps to a polynomial given as text.
    Map(MapArgs),
    /// Mixed cd-index of a subdivision map file.
    MixedCd(MixedCdArgs),
    /// Run a theorem checker; exits 0 exactly when every equality holds.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    kind: ConstructKind,
}

#[derive(Args)]
struct OutArg {
    /// Where to write the poset document.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Boolean lattice of rank n.
    Boolean {
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Face lattice of an n-gon.
    Polygon {
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Face lattice of the 3-cube.
    Cube {
        #[command(flatten)]
        out: OutArg,
    },
    /// Face poset of the simplicial complex with the given facets,
    /// each a comma separated vertex list such as 1,2,4.
    Simplicial {
        #[arg(required = true)]
        facets: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Barycentric subdivision of the poset in FILE; --map also writes
    /// the subdivision map as a self-contained map document.
    Bary {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
        /// Also write the map from the subdivision back onto FILE.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Cartesian product of two poset files.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product of two face lattices: minimums fused, maximums paired.
    PolytopeProduct {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Join of two poset files.
    Join {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pyramid over the poset in FILE.
    Pyramid {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Order dual of the poset in FILE.
    Dual {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Boundary of a near-Eulerian poset.
    Boundary {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Semisuspension of a near-Eulerian poset.
    Semisuspension {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Adjoin a new maximum, optionally with a chosen id.
    AdjoinMax {
        input: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// The interval [x, y]; with y omitted, everything above x.
    Interval {
        input: PathBuf,
        x: String,
        y: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Cut the poset in FILE along a cut specification file; --map also
    /// writes the collapse map from the cut poset back onto FILE.
    Cut {
        input: PathBuf,
        spec: PathBuf,
        #[command(flatten)]
        out: OutArg,
        /// Also write the map from the cut poset back onto FILE.
        #[arg(long)]
        map: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Poset or map document; map documents are recognized by their
    /// assignment field.
    input: PathBuf,
    /// Subdivision test to run on a map document.
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Also factor a subdivision map into elementary steps.
    #[arg(long)]
    factor: bool,
    /// Drop identity factors from the factorization listing.
    #[arg(long, requires = "factor")]
    drop_identities: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Definition,
    Characterization,
    NearCriterion,
    All,
}

#[derive(Args)]
struct IndexArgs {
    /// Which invariant to print.
    #[arg(long, value_enum)]
    kind: IndexKind,
    /// Rank zero convention for the cd-index.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Poset file; a map file for --kind mixed-cd.
    input: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexKind {
    Flag,
    Ab,
    Cd,
    LocalCd,
    MixedCd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classic,
    Refined,
}

#[derive(Args)]
struct HpolyArgs {
    /// Which polynomial to print.
    #[arg(long, value_enum)]
    kind: HKind,
    /// Poset file for h and g; a map file for local-h and mixed-h.
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum HKind {
    H,
    G,
    LocalH,
    MixedH,
}

#[derive(Args)]
struct MapArgs {
    /// Linear map to apply.
    #[arg(long, value_enum)]
    op: MapOp,
    /// Input polynomial: ab/cd words for f, g, gstar and gprime,
    /// mixed words for h, l, lprime and hprime.
    poly: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapOp {
    F,
    G,
    Gstar,
    Gprime,
    H,
    L,
    Lprime,
    Hprime,
}

#[derive(Args)]
struct MixedCdArgs {
    /// Map file.
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Statement to check.
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    /// Map file; a poset file for --theorem cut-lemma.
    input: PathBuf,
    /// Cut specification file, required by --theorem cut-lemma.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Closed-form family, required by --theorem examples.
    #[arg(long, value_enum)]
    kind: Option<ExampleKindArg>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    Decomposition,
    LocalDecomposition,
    Comodule,
    MixedMaps,
    CutLemma,
    Examples,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleKindArg {
    Polygon,
    Boundary3,
    Triangulation,
}

impl From<ExampleKindArg> for ExampleKind {
    fn from(k: ExampleKindArg) -> ExampleKind {
        match k {
            ExampleKindArg::Polygon => ExampleKind::Polygon,
            ExampleKindArg::Boundary3 => ExampleKind::Boundary3,
            ExampleKindArg::Triangulation => ExampleKind::Triangulation,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PosetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PosetRef {
    Path(String),
    Inline(PosetDoc),
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    source: PosetRef,
    target: PosetRef,
    assignment: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct CutSpecDoc {
    x0: String,
    sigma1: Vec<String>,
    sigma2: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let format = cli.format;
    match cli.command {
        Command::Construct(args) => run_construct(args.kind, format),
        Command::Check(args) => run_check(args, format),
        Command::Index(args) => run_index(args, format),
        Command::Hpoly(args) => run_hpoly(args, format),
        Command::Map(args) => run_map(args, format),
        Command::MixedCd(args) => run_mixed_cd(args, format),
        Command::Verify(args) => run_verify(args, format),
    }
}

fn usage(msg: &str) -> Result<ExitCode> {
    eprintln!("usage error: {msg}");
    Ok(ExitCode::from(2))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing document")?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn poset_doc(p: &Poset) -> PosetDoc {
    PosetDoc {
        name: p.name().map(|s| s.to_string()),
        elements: p.ids().to_vec(),
        covers: p.cover_id_pairs(),
    }
}

fn doc_to_poset(doc: PosetDoc) -> Result<Poset> {
    build_poset(doc.name, doc.elements, doc.covers).map_err(Into::into)
}

fn load_poset(path: &Path) -> Result<Poset> {
    doc_to_poset(read_json(path)?)
}

fn resolve_poset_ref(side: PosetRef, base: &Path) -> Result<Poset> {
    match side {
        PosetRef::Path(p) => load_poset(&base.join(p)),
        PosetRef::Inline(doc) => doc_to_poset(doc),
    }
}

fn map_from_doc(doc: MapDoc, base: &Path) -> Result<PosetMap> {
    let source = resolve_poset_ref(doc.source, base)?;
    let target = resolve_poset_ref(doc.target, base)?;
    build_map(source, target, &doc.assignment).map_err(Into::into)
}

fn load_map(path: &Path) -> Result<PosetMap> {
    let doc: MapDoc = read_json(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    map_from_doc(doc, base)
}

fn load_cut_spec(path: &Path) -> Result<CutSpec> {
    let doc: CutSpecDoc = read_json(path)?;
    Ok(CutSpec {
        x0: doc.x0,
        sigma1: doc.sigma1,
        sigma2: doc.sigma2,
    })
}

fn map_pairs(map: &PosetMap) -> Vec<(String, String)> {
    let source = map.source();
    let target = map.target();
    (0..source.len())
        .map(|i| {
            (
                source.id(i).to_string(),
                target.id(map.apply_idx(i)).to_string(),
            )
        })
        .collect()
}

fn poset_summary(p: &Poset) -> String {
    format!(
        "{} ({} elements, rank {})",
        p.name().unwrap_or("-"),
        p.len(),
        p.max_rank()
    )
}

fn print_value(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializing output")
    );
}

fn emit_poly(format: Format, kind: &str, text: &str) {
    match format {
        Format::Text => println!("{text}"),
        Format::Structured => print_value(&json!({ "kind": kind, "value": text })),
    }
}

fn run_construct(kind: ConstructKind, format: Format) -> Result<ExitCode> {
    let mut lines: Vec<String> = Vec::new();
    let mut entries: Vec<Value> = Vec::new();

    let mut emit_poset = |path: &Path, p: &Poset| -> Result<()> {
        write_json(path, &poset_doc(p))?;
        lines.push(format!("wrote {}: {}", path.display(), poset_summary(p)));
        entries.push(json!({
            "path": path.display().to_string(),
            "kind": "poset",
            "name": p.name(),
            "elements": p.len(),
            "rank": p.max_rank(),
        }));
        Ok(())
    };

    let mut map_output: Option<(PathBuf, MapDoc, String, String)> = None;

    match kind {
        ConstructKind::Boolean { n, out } => emit_poset(&out.output, &boolean(n)?)?,
        ConstructKind::Polygon { n, out } => emit_poset(&out.output, &polygon(n)?)?,
        ConstructKind::Cube { out } => emit_poset(&out.output, &cube())?,
        ConstructKind::Simplicial { facets, out } => {
            let parsed: Vec<Vec<String>> = facets
                .iter()
                .map(|f| f.split(',').map(|v| v.trim().to_string()).collect())
                .collect();
            emit_poset(&out.output, &simplicial_face_poset(&parsed)?)?;
        }
        ConstructKind::Bary { input, out, map } => {
            let base = load_poset(&input)?;
            let (subdivision, assignment) = barycentric(&base)?;
            emit_poset(&out.output, &subdivision)?;
            if let Some(map_path) = map {
                let doc = MapDoc {
                    source: PosetRef::Inline(poset_doc(&subdivision)),
                    target: PosetRef::Inline(poset_doc(&base)),
                    assignment,
                };
                map_output = Some((
                    map_path,
                    doc,
                    poset_summary(&subdivision),
                    poset_summary(&base),
                ));
            }
        }
        ConstructKind::Product { a, b, out } => {
            emit_poset(
                &out.output,
                &cartesian_product(&load_poset(&a)?, &load_poset(&b)?)?,
            )?;
        }
        ConstructKind::PolytopeProduct { a, b, out } => {
            emit_poset(
                &out.output,
                &polytope_product(&load_poset(&a)?, &load_poset(&b)?)?,
            )?;
        }
        ConstructKind::Join { a, b, out } => {
            emit_poset(&out.output, &join(&load_poset(&a)?, &load_poset(&b)?)?)?;
        }
        ConstructKind::Pyramid { input, out } => {
            emit_poset(&out.output, &pyramid(&load_poset(&input)?)?)?;
        }
        ConstructKind::Dual { input, out } => {
            emit_poset(&out.output, &load_poset(&input)?.dual()?)?;
        }
        ConstructKind::Boundary { input, out } => {
            emit_poset(&out.output, &load_poset(&input)?.boundary()?)?;
        }
        ConstructKind::Semisuspension { input, out } => {
            emit_poset(&out.output, &load_poset(&input)?.semisuspension()?)?;
        }
        ConstructKind::AdjoinMax { input, id, out } => {
            emit_poset(&out.output, &load_poset(&input)?.adjoin_max(id.as_deref())?)?;
        }
        ConstructKind::Interval { input, x, y, out } => {
            emit_poset(
                &out.output,
                &load_poset(&input)?.interval(&x, y.as_deref())?,
            )?;
        }
        ConstructKind::Cut {
            input,
            spec,
            out,
            map,
        } => {
            let base = load_poset(&input)?;
            let cut_spec = load_cut_spec(&spec)?;
            let (cut_poset, cut_map) = cut(&base, &cut_spec)?;
            emit_poset(&out.output, &cut_poset)?;
            if let Some(map_path) = map {
                let doc = MapDoc {
                    source: PosetRef::Inline(poset_doc(&cut_poset)),
                    target: PosetRef::Inline(poset_doc(&base)),
                    assignment: map_pairs(&cut_map),
                };
                map_output = Some((
                    map_path,
                    doc,
                    poset_summary(&cut_poset),
                    poset_summary(&base),
                ));
            }
        }
    }

    if let Some((path, doc, src, tgt)) = map_output {
        let assignments = doc.assignment.len();
        write_json(&path, &doc)?;
        lines.push(format!(
            "wrote {}: map {} -> {} ({} assignments)",
            path.display(),
            src,
            tgt,
            assignments
        ));
        entries.push(json!({
            "path": path.display().to_string(),
            "kind": "map",
            "source": src,
            "target": tgt,
            "assignments": assignments,
        }));
    }

    match format {
        Format::Text => {
            for line in &lines {
                println!("{line}");
            }
        }
        Format::Structured => print_value(&json!({ "written": entries })),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_check(args: CheckArgs, format: Format) -> Result<ExitCode> {
    let value: Value = read_json(&args.input)?;
    if value.get("assignment").is_some() {
        check_map(args, value, format)
    } else {
        if args.factor {
            return usage("--factor applies to map documents only");
        }
        check_poset(value, format)
    }
}

fn check_poset(value: Value, format: Format) -> Result<ExitCode> {
    let doc: PosetDoc = serde_json::from_value(value).context("parsing poset document")?;
    let p = doc_to_poset(doc)?;
    let cls = p.classify();
    match format {
        Format::Text => {
            println!("kind: poset");
            println!("name: {}", p.name().unwrap_or("-"));
            println!("elements: {}", p.len());
            println!("rank: {}", cls.rank);
            println!("graded: {}", cls.graded);
            println!("has-max: {}", cls.has_max);
            println!("eulerian: {}", cls.eulerian);
            println!("lower-eulerian: {}", cls.lower_eulerian);
            println!("near-eulerian: {}", cls.near_eulerian);
            match &cls.boundary_ids {
                Some(ids) => println!("boundary: {}", ids.join(" ")),
                None => println!("boundary: -"),
            }
        }
        Format::Structured => print_value(&json!({
            "kind": "poset",
            "name": p.name(),
            "elements": p.len(),
            "rank": cls.rank,
            "graded": cls.graded,
            "has_max": cls.has_max,
            "eulerian": cls.eulerian,
            "lower_eulerian": cls.lower_eulerian,
            "near_eulerian": cls.near_eulerian,
            "boundary": cls.boundary_ids,
        })),
    }
    Ok(ExitCode::SUCCESS)
}

fn check_map(args: CheckArgs, value: Value, format: Format) -> Result<ExitCode> {
    let doc: MapDoc = serde_json::from_value(value).context("parsing map document")?;
    let base = args.input.parent().unwrap_or_else(|| Path::new("."));
    let map = map_from_doc(doc, base)?;

    let methods: Vec<(&str, SfsMethod)> = match args.method {
        MethodArg::Definition => vec![("definition", SfsMethod::Definition)],
        MethodArg::Characterization => vec![("characterization", SfsMethod::Characterization)],
        MethodArg::NearCriterion => vec![("near-criterion", SfsMethod::NearCriterion)],
        MethodArg::All => vec![
            ("definition", SfsMethod::Definition),
            ("characterization", SfsMethod::Characterization),
            ("near-criterion", SfsMethod::NearCriterion),
        ],
    };

    let mut results: Vec<(&str, bool, Option<String>)> = Vec::new();
    for (label, method) in methods {
        let outcome = is_sfs(&map, method)?;
        results.push((label, outcome.ok, outcome.witness));
    }

    let factors = if args.factor {
        let all = intermediate_factorization(&map)?;
        let total = all.len();
        let kept: Vec<&PosetMap> = all
            .iter()
            .filter(|f| !(args.drop_identities && is_identity_factor(f)))
            .collect();
        Some((
            total,
            kept.iter().map(|f| factor_entry(f)).collect::<Vec<_>>(),
        ))
    } else {
        None
    };

    match format {
        Format::Text => {
            println!("kind: map");
            println!("source: {}", poset_summary(map.source()));
            println!("target: {}", poset_summary(map.target()));
            for (label, ok, witness) in &results {
                match witness {
                    Some(w) if !ok => println!("sfs[{label}]: false ({w})"),
                    _ => println!("sfs[{label}]: {ok}"),
                }
            }
            if let Some((total, entries)) = &factors {
                println!("factors: {} of {}", entries.len(), total);
                for (i, (src, tgt, identity)) in entries.iter().enumerate() {
                    println!(
                        "  step {}: {} -> {} elements, identity: {}",
                        i + 1,
                        src,
                        tgt,
                        identity
                    );
                }
            }
        }
        Format::Structured => {
            let sfs: Vec<Value> = results
                .iter()
                .map(
                    |(label, ok, witness)| json!({ "method": label, "ok": ok, "witness": witness }),
                )
                .collect();
            let mut out = json!({
                "kind": "map",
                "source": poset_summary(map.source()),
                "target": poset_summary(map.target()),
                "sfs": sfs,
            });
            if let Some((total, entries)) = &factors {
                let list: Vec<Value> = entries
                    .iter()
                    .enumerate()
                    .map(|(i, (src, tgt, identity))| {
                        json!({
                            "step": i + 1,
                            "source_elements": src,
                            "target_elements": tgt,
                            "identity": identity,
                        })
                    })
                    .collect();
                out["factors"] = json!({ "total": total, "listed": list });
            }
            print_value(&out);
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// An elementary factor is an identity step exactly when the peeled fiber
/// was a single element, which makes the underlying map an order
/// isomorphism (possibly relabeling that one element).
fn is_identity_factor(m: &PosetMap) -> bool {
    let s = m.source();
    let t = m.target();
    if s.len() != t.len() {
        return false;
    }
    (0..s.len())
        .all(|i| (0..s.len()).all(|j| s.lt_idx(i, j) == t.lt_idx(m.apply_idx(i), m.apply_idx(j))))
}

fn factor_entry(f: &PosetMap) -> (usize, usize, bool) {
    (f.source().len(), f.target().len(), is_identity_factor(f))
}

fn flag_set(mask: usize, rank: usize) -> Vec<usize> {
    (0..rank)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect()
}

fn emit_flag(fv: &FlagVector, format: Format) {
    match format {
        Format::Text => {
            println!("rank: {}", fv.rank());
            for (mask, count) in fv.entries() {
                let set = flag_set(mask, fv.rank())
                    .iter()
                    .map(|r| r.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!("{{{set}}}: {count}");
            }
        }
        Format::Structured => {
            let entries: Vec<Value> = fv
                .entries()
                .map(|(mask, count)| {
                    json!({
                        "ranks": flag_set(mask, fv.rank()),
                        "count": count.to_string(),
                    })
                })
                .collect();
            print_value(&json!({
                "kind": "flag",
                "rank": fv.rank(),
                "entries": entries,
            }));
        }
    }
}

fn run_index(args: IndexArgs, format: Format) -> Result<ExitCode> {
    if args.mode.is_some() && args.kind != IndexKind::Cd {
        return usage("--mode applies to --kind cd only");
    }
    match args.kind {
        IndexKind::Flag => {
            let p = load_poset(&args.input)?;
            emit_flag(&flag_vector(&p), format);
        }
        IndexKind::Ab => {
            let p = load_poset(&args.input)?;
            emit_poly(format, "ab", &ab_index(&p).to_string());
        }
        IndexKind::Cd => {
            let p = load_poset(&args.input)?;
            let mode = match args.mode.unwrap_or(ModeArg::Classic) {
                ModeArg::Classic => CdMode::Classic,
                ModeArg::Refined => CdMode::Refined,
            };
            emit_poly(format, "cd", &cd_index(&p, mode)?.to_string());
        }
        IndexKind::LocalCd => {
            let p = load_poset(&args.input)?;
            emit_poly(format, "local-cd", &local_cd_index(&p)?.to_string());
        }
        IndexKind::MixedCd => {
            let map = load_map(&args.input)?;
            emit_poly(format, "mixed-cd", &mixed_cd_index(&map)?.to_string());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_hpoly(args: HpolyArgs, format: Format) -> Result<ExitCode> {
    let (kind, poly) = match args.kind {
        HKind::H => ("h", h_poly(&load_poset(&args.input)?)?),
        HKind::G => ("g", g_poly(&load_poset(&args.input)?)?),
        HKind::LocalH => ("local-h", local_h_poly(&load_map(&args.input)?)?),
        HKind::MixedH => ("mixed-h", mixed_h_poly(&load_map(&args.input)?)?),
    };
    emit_poly(format, kind, &poly.to_string());
    Ok(ExitCode::SUCCESS)
}

fn run_map(args: MapArgs, format: Format) -> Result<ExitCode> {
    let (kind, poly) = match args.op {
        MapOp::F => ("f", f_map(&NCPoly::parse(&args.poly)?)),
        MapOp::G => ("g", g_map(&NCPoly::parse(&args.poly)?)),
        MapOp::Gstar => ("gstar", g_star(&NCPoly::parse(&args.poly)?)),
        MapOp::Gprime => ("gprime", g_prime(&NCPoly::parse(&args.poly)?)),
        MapOp::H => ("h", h_omega(&MixedPoly::parse(&args.poly)?)),
        MapOp::L => ("l", l_omega(&MixedPoly::parse(&args.poly)?)),
        MapOp::Lprime => ("lprime", l_prime_omega(&MixedPoly::parse(&args.poly)?)),
        MapOp::Hprime => ("hprime", h_prime_omega(&MixedPoly::parse(&args.poly)?)),
    };
    emit_poly(format, kind, &poly.to_string());
    Ok(ExitCode::SUCCESS)
}

fn run_mixed_cd(args: MixedCdArgs, format: Format) -> Result<ExitCode> {
    let map = load_map(&args.input)?;
    emit_poly(format, "mixed-cd", &mixed_cd_index(&map)?.to_string());
    Ok(ExitCode::SUCCESS)
}

fn report_value(report: &VerifyReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "label": c.label,
                "lhs": c.lhs,
                "rhs": c.rhs,
                "pass": c.pass,
            })
        })
        .collect();
    json!({
        "theorem": report.theorem.to_string(),
        "instance": report.instance,
        "checks": checks,
        "result": if report.pass() { "PASS" } else { "FAIL" },
    })
}

fn run_verify(args: VerifyArgs, format: Format) -> Result<ExitCode> {
    if args.spec.is_some() && args.theorem != TheoremArg::CutLemma {
        return usage("--spec applies to --theorem cut-lemma only");
    }
    if args.kind.is_some() && args.theorem != TheoremArg::Examples {
        return usage("--kind applies to --theorem examples only");
    }
    let report = match args.theorem {
        TheoremArg::CutLemma => {
            let Some(spec_path) = args.spec else {
                return usage("--theorem cut-lemma needs --spec");
            };
            let p = load_poset(&args.input)?;
            let spec = load_cut_spec(&spec_path)?;
            verify_cut_lemma(&p, &spec)?
        }
        TheoremArg::Examples => {
            let Some(kind) = args.kind else {
                return usage("--theorem examples needs --kind");
            };
            let map = load_map(&args.input)?;
            verify_example_formulas(kind.into(), &map)?
        }
        TheoremArg::Decomposition => verify_decomposition(&load_map(&args.input)?)?,
        TheoremArg::LocalDecomposition => verify_local_decomposition(&load_map(&args.input)?)?,
        TheoremArg::Comodule => verify_comodule(&load_map(&args.input)?)?,
        TheoremArg::MixedMaps => verify_mixed_maps(&load_map(&args.input)?)?,
    };
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Structured => print_value(&report_value(&report)),
    }
    Ok(if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
