//! `cosetgeo` command-line interface.
//!
//! Every command prints one JSON document on stdout. Failures print
//! `{"error": kind, "message": text}` on stderr and exit with 2 (invalid
//! input), 3 (resource limit) or 4 (verification mismatch).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cosetgeo::{
    best_labeling, build, catalog_names, extract_geometries, find_mermin_square, find_pentagram, low_index_subgroups,
    matches_dessin, max_commuting_geometry, parse_word, passport_of, pentagram_lines, score, stored_dessin,
    todd_coxeter, verify_mermin_square, verify_pentagram, Candidate, CommutationMode, ContextVerdict,
    ContextualityReport, CosetTable, Dessin, HyperplaneMode, IncidenceStructure, PauliOp, Presentation,
    RationalMap, Word, DEFAULT_MAX_COSETS,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cosetgeo", version, about = "Coset tables, dessins, geometries and coset contextuality")]
struct Cli {
    /// Worker threads for searches and extraction (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Iterated,
    Pairwise,
}

impl From<Mode> for CommutationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Iterated => CommutationMode::Iterated,
            Mode::Pairwise => CommutationMode::Pairwise,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Labels {
    /// The dessin's own transversal.
    Default,
    /// Best over every letter-priority transversal.
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum HyperMode {
    Brute,
    Veldkamp,
    Pairwise,
}

#[derive(Subcommand)]
enum Command {
    /// Low-index subgroup search, or Todd-Coxeter for explicit generators.
    Enumerate {
        /// F, G, G', G'' or a comma-separated relator list such as "bb,a^3".
        #[arg(long, default_value = "G")]
        presentation: String,
        #[arg(long, required_unless_present = "subgroup")]
        index: Option<usize>,
        /// Comma-separated subgroup generators; runs coset enumeration.
        #[arg(long, conflicts_with = "index")]
        subgroup: Option<String>,
        /// Emit every subgroup instead of one per conjugacy class.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Directory for per-table dessin and coset-table files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signature, transversals and extracted geometries of a dessin.
    Analyze {
        #[arg(long)]
        dessin: PathBuf,
        /// Directory for DOT and geometry files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contextuality of a geometry on the edges of a dessin.
    Score {
        #[arg(long)]
        dessin: PathBuf,
        /// Geometry file on the dessin's edge numbering; every extracted
        /// geometry is scored when omitted.
        #[arg(long)]
        geometry: Option<PathBuf>,
        /// Restrict to one mode; both are reported by default.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value = "default")]
        labels: Labels,
    },
    /// Reconstructs the rows of the contextuality/hyperplane table.
    Table1 {
        /// `NAME=FILE` dessin for a row without a built-in route (repeatable).
        #[arg(long = "dessin")]
        dessins: Vec<String>,
        #[arg(long, value_enum, default_value = "iterated")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "all")]
        labels: Labels,
    },
    /// Pauli-operator contexts.
    Pauli {
        #[command(subcommand)]
        what: PauliCommand,
    },
    /// Checks a rational function against a dessin passport.
    BelyiCheck {
        /// For example "(4/27)*x^6/(x^2-1)^2".
        #[arg(long, allow_hyphen_values = true)]
        function: String,
        #[arg(long)]
        dessin: Option<PathBuf>,
    },
    /// Counts geometric hyperplanes.
    Hyperplanes {
        /// Catalog name or geometry JSON file.
        #[arg(long)]
        geometry: String,
        #[arg(long, value_enum, default_value = "veldkamp")]
        mode: HyperMode,
        /// Include every hyperplane (1-based points).
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum PauliCommand {
    /// Searches for (or verifies) a two-qubit Mermin square.
    MerminSquare {
        /// Nine operators, row-major, comma-separated.
        #[arg(long)]
        ops: Option<String>,
    },
    /// Searches for (or verifies) a three-qubit pentagram.
    Pentagram {
        /// Ten operators, comma-separated, on the standard pentagram lines.
        #[arg(long)]
        ops: Option<String>,
    },
    /// Geometry of a maximal commuting set on `n` qubits.
    Maxset {
        n: usize,
        /// Comma-separated generators; defaults to single-qubit Z's.
        #[arg(long)]
        generators: Option<String>,
    },
}

enum Failure {
    Core(cosetgeo::Error),
    Io(String),
    /// A completed check whose verdict is negative; the report is still
    /// printed.
    Mismatch(Value),
}

impl From<cosetgeo::Error> for Failure {
    fn from(e: cosetgeo::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<Value, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            return fail("argument", &e.to_string(), 2);
        }
    }
    match run(cli.command) {
        Ok(v) => emit(&v, ExitCode::SUCCESS),
        Err(Failure::Mismatch(v)) => emit(&v, ExitCode::from(4)),
        Err(Failure::Io(m)) => fail("io", &m, 2),
        Err(Failure::Core(e)) => {
            use cosetgeo::Error as E;
            let (kind, code) = match &e {
                E::ResourceLimit { .. } => ("resource_limit", 3),
                E::Verification(_) => ("verification", 4),
                E::Invariant(_) => ("invariant", 1),
                E::Parse { .. } => ("parse", 2),
                E::UnknownGeometry(_) => ("unknown_geometry", 2),
                E::Intransitive { .. } => ("intransitive", 2),
                E::Disconnected { .. } => ("disconnected", 2),
                E::NotPolygon(_) => ("not_polygon", 2),
                E::Format(_) => ("format", 2),
                E::DegreeMismatch { .. } | E::PointOutOfRange { .. } | E::Argument(_) => ("argument", 2),
            };
            fail(kind, &e.to_string(), code)
        }
    }
}

/// A closed stdout (for example `| head`) is not an error of the command.
fn emit(v: &Value, code: ExitCode) -> ExitCode {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    code
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Enumerate {
            presentation,
            index,
            subgroup,
            all,
            max_cosets,
            out,
        } => enumerate(&presentation, index, subgroup.as_deref(), all, max_cosets, out.as_deref()),
        Command::Analyze { dessin, out } => analyze(&dessin, out.as_deref()),
        Command::Score {
            dessin,
            geometry,
            mode,
            labels,
        } => score_command(&dessin, geometry.as_deref(), mode, labels),
        Command::Table1 { dessins, mode, labels } => table1(&dessins, mode.into(), labels),
        Command::Pauli { what } => pauli(what),
        Command::BelyiCheck { function, dessin } => belyi_check(&function, dessin.as_deref()),
        Command::Hyperplanes { geometry, mode, list } => hyperplanes(&geometry, mode, list),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn presentation(selector: &str) -> Result<Presentation, Failure> {
    if let Ok(p) = Presentation::by_name(selector) {
        return Ok(p);
    }
    let relators = words(selector)?;
    Ok(Presentation::custom(relators)?)
}

fn words(list: &str) -> Result<Vec<Word>, Failure> {
    Ok(list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_word)
        .collect::<Result<_, _>>()?)
}

fn dessin_summary(d: &Dessin) -> Value {
    json!({
        "n": d.degree(),
        "g0": d.g0().to_string(),
        "g1": d.g1().to_string(),
        "g_inf": d.g_inf().to_string(),
        "signature": d.signature(),
        "passport": d.passport(),
        "group_order": d.group().order().to_string(),
    })
}

fn enumerate(
    selector: &str,
    index: Option<usize>,
    subgroup: Option<&str>,
    all: bool,
    max_cosets: usize,
    out: Option<&Path>,
) -> Outcome {
    let p = presentation(selector)?;
    let start = Instant::now();
    let tables: Vec<CosetTable> = match (subgroup, index) {
        (Some(gens), _) => vec![todd_coxeter(&p, &words(gens)?, max_cosets)?],
        (None, Some(n)) => low_index_subgroups(&p, n, !all)?,
        (None, None) => unreachable!("clap requires --index or --subgroup"),
    };
    let mut entries = Vec::with_capacity(tables.len());
    for (k, t) in tables.iter().enumerate() {
        let d = Dessin::from_coset_table(t)?;
        let mut entry = dessin_summary(&d);
        entry["id"] = json!(k + 1);
        entry["transversal"] = json!(t.transversal().iter().map(Word::to_string).collect::<Vec<_>>());
        if let Some(dir) = out {
            write(dir, &format!("dessin_{:04}.json", k + 1), &d.to_json()?)?;
            write(dir, &format!("table_{:04}.json", k + 1), &t.to_json()?)?;
        }
        entries.push(entry);
    }
    let mut genera = std::collections::BTreeMap::new();
    for e in &entries {
        *genera.entry(e["signature"]["genus"].to_string()).or_insert(0usize) += 1;
    }
    Ok(json!({
        "presentation": selector,
        "index": tables.first().map(CosetTable::index).or(index),
        "up_to_conjugacy": subgroup.is_none() && !all,
        "count": tables.len(),
        "genus_counts": genera,
        "seconds": start.elapsed().as_secs_f64(),
        "tables": entries,
    }))
}

fn load_dessin(path: &Path) -> Result<(Dessin, Vec<Word>), Failure> {
    let (d, labels) = Dessin::from_json(&read(path)?)?;
    let labels = labels.unwrap_or_else(|| d.labels().to_vec());
    Ok((d, labels))
}

fn load_geometry(spec: &str) -> Result<IncidenceStructure, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        Ok(IncidenceStructure::from_json(&read(path)?)?)
    } else {
        Ok(build(spec)?)
    }
}

/// Catalog names isomorphic to `s`, one per distinct catalog structure.
fn recognize(s: &IncidenceStructure) -> Vec<&'static str> {
    catalog_names()
        .iter()
        .copied()
        .filter(|name| {
            build(name).is_ok_and(|c| c.points() == s.points() && c.line_count() == s.line_count() && c.is_isomorphic(s))
        })
        .collect()
}

fn geometry_summary(s: &IncidenceStructure) -> Value {
    let mut sizes = s.line_sizes();
    sizes.sort_unstable();
    sizes.dedup();
    json!({
        "points": s.points(),
        "lines": s.line_count(),
        "line_sizes": sizes,
        "polygon_order": s.polygon_order(),
        "recognized": recognize(s),
    })
}

fn analyze(path: &Path, out: Option<&Path>) -> Outcome {
    let (d, labels) = load_dessin(path)?;
    let mut geometries = Vec::new();
    for (k, g) in extract_geometries(&d).iter().enumerate() {
        let mut entry = geometry_summary(&g.structure);
        entry["stabilizer_order"] = json!(g.class.order.to_string());
        entry["stabilizer_class"] = json!(g.class.name());
        if let Some(dir) = out {
            let name = format!("geometry_{}", k + 1);
            write(dir, &format!("{name}.json"), &g.structure.to_json()?)?;
            write(dir, &format!("{name}.dot"), &g.structure.to_dot_incidence())?;
        }
        geometries.push(entry);
    }
    if let Some(dir) = out {
        write(dir, "dessin.dot", &d.to_dot(&labels))?;
    }
    let mut report = dessin_summary(&d);
    report["genus"] = json!(d.genus());
    report["labels"] = json!(labels.iter().map(Word::to_string).collect::<Vec<_>>());
    report["label_variants"] = json!(d
        .labels_variants()
        .iter()
        .map(|v| v.iter().map(Word::to_string).collect::<Vec<_>>())
        .collect::<Vec<_>>());
    report["geometries"] = Value::Array(geometries);
    Ok(report)
}

fn best(
    s: &IncidenceStructure,
    d: &Dessin,
    labels: &[Word],
    choice: Labels,
    mode: CommutationMode,
) -> Result<(ContextualityReport, Option<usize>), Failure> {
    if choice == Labels::Default {
        return Ok((score(s, labels, d, mode)?, None));
    }
    let candidates: Vec<Candidate> = d
        .labels_variants()
        .into_iter()
        .enumerate()
        .map(|(variant, labels)| Candidate {
            dessin: d.clone(),
            labels,
            variant,
            structure: s.clone(),
        })
        .collect();
    let (report, i) = best_labeling(s, &candidates, mode)?;
    Ok((report, Some(candidates[i].variant)))
}

fn report_value(r: &ContextualityReport, variant: Option<usize>) -> Value {
    let mut v = r.to_json_value();
    v["label_variant"] = json!(variant);
    v
}

fn score_command(path: &Path, geometry: Option<&Path>, mode: Option<Mode>, labels: Labels) -> Outcome {
    let (d, default_labels) = load_dessin(path)?;
    let targets: Vec<(IncidenceStructure, Option<String>)> = match geometry {
        Some(g) => vec![(IncidenceStructure::from_json(&read(g)?)?, None)],
        None => extract_geometries(&d)
            .into_iter()
            .map(|g| (g.structure, Some(g.class.name())))
            .collect(),
    };
    let modes: Vec<CommutationMode> = match mode {
        Some(m) => vec![m.into()],
        None => vec![CommutationMode::Iterated, CommutationMode::Pairwise],
    };
    let mut reports = Vec::new();
    for (s, class) in &targets {
        let mut by_mode = serde_json::Map::new();
        for &m in &modes {
            let (r, variant) = best(s, &d, &default_labels, labels, m)?;
            by_mode.insert(m.as_str().to_string(), report_value(&r, variant));
        }
        let mut entry = geometry_summary(s);
        entry["stabilizer_class"] = json!(class);
        entry["reports"] = Value::Object(by_mode);
        reports.push(entry);
    }
    Ok(json!({ "dessin": dessin_summary(&d), "geometries": reports }))
}

fn log2_hyperplanes(s: &IncidenceStructure) -> Result<(usize, f64), Failure> {
    let h = s.hyperplanes(HyperplaneMode::Veldkamp)?.len();
    Ok((h, (h as f64).log2()))
}

/// Finds the genus-1 index-9 dessin on `⟨a,b | b²⟩` and its order-2 grid.
fn mermin_row() -> Result<Option<(Dessin, IncidenceStructure)>, Failure> {
    let grid = build("grid(3,3)")?;
    for t in low_index_subgroups(&Presentation::modular(), 9, true)? {
        let d = Dessin::from_coset_table(&t)?;
        if d.genus() != 1 {
            continue;
        }
        for g in extract_geometries(&d) {
            if g.class.order == 2u32.into() && g.structure.is_isomorphic(&grid) {
                return Ok(Some((d, g.structure)));
            }
        }
    }
    Ok(None)
}

fn table1(supplied: &[String], mode: CommutationMode, labels: Labels) -> Outcome {
    let mut external = std::collections::HashMap::new();
    for item in supplied {
        let (name, file) = item
            .split_once('=')
            .ok_or_else(|| cosetgeo::Error::Argument(format!("expected NAME=FILE, got {item:?}")))?;
        external.insert(name.trim().to_lowercase(), PathBuf::from(file.trim()));
    }
    let rows = ["GQ(2,1)", "GQ(2,2)", "GQ(2,4)", "GH(2,1)", "GO(2,1)", "GH(2,2)", "dual GH(2,2)"];
    let mut out = Vec::new();
    for name in rows {
        let geometry = build(name)?;
        let (h, log2h) = log2_hyperplanes(&geometry)?;
        let source: Option<(Dessin, IncidenceStructure, Vec<Word>, &str)> =
            if let Some(file) = external.get(&name.to_lowercase()) {
                let (d, l) = load_dessin(file)?;
                let s = extract_geometries(&d)
                    .into_iter()
                    .map(|g| g.structure)
                    .find(|s| s.is_isomorphic(&geometry))
                    .ok_or_else(|| {
                        cosetgeo::Error::Verification(format!("supplied dessin does not stabilize {name}"))
                    })?;
                Some((d, s, l, "supplied dessin"))
            } else if name == "GQ(2,1)" {
                mermin_row()?.map(|(d, s)| {
                    let l = d.labels().to_vec();
                    (d, s, l, "computed: index-9 search on <a,b | b^2>")
                })
            } else if let Some(d) = stored_dessin(name)? {
                let l = d.labels().to_vec();
                Some((d, geometry.clone(), l, "stored index-63 dessin on <a,b | b^2, a^4, (ab)^7, (a,b)^6>"))
            } else {
                None
            };
        let mut row = json!({
            "geometry": name,
            "l": geometry.line_count(),
            "h": h,
            "log2_h": log2h,
            "log2_h_rounded": log2h.round() as u64,
        });
        match source {
            Some((d, s, l, provenance)) => {
                let (r, variant) = best(&s, &d, &l, labels, mode)?;
                row["u"] = json!(r.u);
                row["c"] = json!(r.c().to_string());
                row["l_over_u"] = json!(r.l_over_u().map(|q| q.to_string()));
                row["l_over_u_decimal"] = json!(r.l_over_u().map(|q| *q.numer() as f64 / *q.denom() as f64));
                row["mode"] = json!(r.mode.as_str());
                row["label_variant"] = json!(variant);
                row["provenance"] = json!(provenance);
            }
            None => {
                row["u"] = Value::Null;
                row["provenance"] = json!("requires externally supplied dessin");
            }
        }
        out.push(row);
    }
    Ok(json!({ "rows": out }))
}

fn ops(list: &str) -> Result<Vec<PauliOp>, Failure> {
    Ok(list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(PauliOp::parse)
        .collect::<Result<_, _>>()?)
}

fn verdict_value(v: &ContextVerdict, ops: &[PauliOp]) -> Value {
    json!({
        "operators": ops.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "signs": v.signs,
        "negative_lines": v.negative_lines,
        "valid": v.valid,
    })
}

fn count_error(what: &str, want: usize, got: usize) -> Failure {
    cosetgeo::Error::Argument(format!("{what} needs {want} operators, got {got}")).into()
}

fn pauli(what: PauliCommand) -> Outcome {
    match what {
        PauliCommand::MerminSquare { ops: given } => {
            let grid = match given {
                Some(text) => {
                    let list = ops(&text)?;
                    if list.len() != 9 {
                        return Err(count_error("a Mermin square", 9, list.len()));
                    }
                    [[list[0], list[1], list[2]], [list[3], list[4], list[5]], [list[6], list[7], list[8]]]
                }
                None => find_mermin_square().ok_or_else(|| cosetgeo::Error::Verification("no square found".into()))?,
            };
            let flat: Vec<PauliOp> = grid.iter().flatten().copied().collect();
            let v = verify_mermin_square(&grid)?;
            let mut value = verdict_value(&v, &flat);
            value["lines"] = json!(["row 1", "row 2", "row 3", "column 1", "column 2", "column 3"]);
            if v.valid { Ok(value) } else { Err(Failure::Mismatch(value)) }
        }
        PauliCommand::Pentagram { ops: given } => {
            let list: [PauliOp; 10] = match given {
                Some(text) => {
                    let list = ops(&text)?;
                    let got = list.len();
                    list.try_into().map_err(|_| count_error("a pentagram", 10, got))?
                }
                None => find_pentagram().ok_or_else(|| cosetgeo::Error::Verification("no pentagram found".into()))?,
            };
            let lines = pentagram_lines();
            let v = verify_pentagram(&list, &lines)?;
            let mut value = verdict_value(&v, &list);
            value["lines"] = json!(lines.iter().map(|l| l.map(|p| p + 1)).collect::<Vec<_>>());
            if v.valid { Ok(value) } else { Err(Failure::Mismatch(value)) }
        }
        PauliCommand::Maxset { n, generators } => {
            let gens = match generators {
                Some(text) => ops(&text)?,
                None => (0..n)
                    .map(|j| PauliOp::parse(&(0..n).map(|i| if i == j { 'Z' } else { 'I' }).collect::<String>()))
                    .collect::<Result<_, _>>()?,
            };
            if gens.len() != n {
                return Err(count_error("a maximal commuting set", n, gens.len()));
            }
            let (s, list) = max_commuting_geometry(&gens)?;
            Ok(json!({
                "qubits": n,
                "operators": list.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lines": s.lines().iter().map(|l| l.iter().map(|p| p + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "geometry": geometry_summary(&s),
            }))
        }
    }
}

fn belyi_check(function: &str, dessin: Option<&Path>) -> Outcome {
    let f = RationalMap::parse(function)?;
    let pp = passport_of(&f)?;
    let mut value = json!({ "function": f.to_string(), "passport": pp });
    let Some(path) = dessin else {
        return if pp.belyi { Ok(value) } else { Err(Failure::Mismatch(value)) };
    };
    let (d, _) = load_dessin(path)?;
    let matched = matches_dessin(&f, &d)?;
    value["dessin_passport"] = json!(d.passport());
    value["match"] = json!(matched);
    if matched && pp.belyi { Ok(value) } else { Err(Failure::Mismatch(value)) }
}

fn hyperplanes(spec: &str, mode: HyperMode, list: bool) -> Outcome {
    let s = load_geometry(spec)?;
    let mode = match mode {
        HyperMode::Brute => HyperplaneMode::Brute,
        HyperMode::Veldkamp => HyperplaneMode::Veldkamp,
        HyperMode::Pairwise => HyperplaneMode::VeldkampPairwise,
    };
    let start = Instant::now();
    let hs = s.hyperplanes(mode)?;
    let log2h = (hs.len() as f64).log2();
    let mut value = json!({
        "geometry": s.name().unwrap_or(spec),
        "points": s.points(),
        "lines": s.line_count(),
        "h": hs.len(),
        "log2_h": log2h,
        "log2_h_rounded": log2h.round() as u64,
        "seconds": start.elapsed().as_secs_f64(),
    });
    if list {
        value["hyperplanes"] = json!(hs
            .iter()
            .map(|h| h.points().iter().map(|p| p + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>());
    }
    Ok(value)
}
