//! Command-line front end: load, validate, analyze, derive, compose, join,
//! and export signed product tables.
//!
//! Exit codes: 0 all checks pass, 1 a queried check failed or a witness was
//! found, 2 usage or load error. Structured output is a single document on
//! stdout; diagnostics and notes go to stderr. Given the same inputs every
//! subcommand produces byte-identical output.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use igroupoid::analysis::{
    almost_deterministic_closure, assert_product_closed, classify_relation, deterministic_core,
    inverse_closed, pip_elements, powerful_graph_check, reevaluate_sop, restriction_lattice,
    sop_detect, special_check,
};
use igroupoid::constructions::band_compose;
use igroupoid::fixtures;
use igroupoid::format::{
    join_spec_from_json, structure_from_json, structure_to_json, table_from_json, table_to_json,
    typed_from_json, typed_to_json,
};
use igroupoid::oracle::{derive_table, generate_structure, oracle_vs_table, parity_notes, StructureKind};
use igroupoid::sampler::{s3_cayley, Sampler};
use igroupoid::typed::{join_build, validate_typed, TypedReport};
use igroupoid::validate::{validate_table, CheckStatus, ValidationReport};
use igroupoid::{Cell, MultiTable, Sign};

#[derive(Parser)]
#[command(name = "igt", version, about = "Signed set-valued product tables: validate, analyze, derive")]
struct Cli {
    /// Report format for stdout documents.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Window bound override for rule-backed windowed tables.
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Seed for randomized property sweeps; the seed fully determines the sweep.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the axiom battery on a table file.
    Validate {
        file: PathBuf,
        /// Treat the file as a typed (sorted) table and run the typed battery.
        #[arg(long)]
        typed: bool,
    },
    /// Report structural properties of a table. With no section flags,
    /// classification, order witnesses, the restriction lattice, and the
    /// potentially-infinite part are all reported.
    Analyze {
        file: PathBuf,
        /// Search for a strict-order witness.
        #[arg(long)]
        sop: bool,
        /// Build the lattice of canonical restrictions.
        #[arg(long)]
        lattice: bool,
        /// Classify the described binary relation.
        #[arg(long)]
        classify: bool,
        /// List labels that can appear in unbounded cells.
        #[arg(long)]
        pip: bool,
        /// Check negative-word commutation up to --max-word.
        #[arg(long)]
        special: bool,
        /// Word-length bound for --special.
        #[arg(long, default_value_t = 4)]
        max_word: u32,
        /// Power bound for the --sop witness search.
        #[arg(long, default_value_t = 8)]
        max_power: u32,
        /// Comma-separated generator labels for the graph criteria.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        powerful: Option<Vec<String>>,
        /// Run N seeded random tables through the closure property suite.
        #[arg(long)]
        sweep: Option<u32>,
    },
    /// Derive a product table from a relational structure by brute force.
    Derive {
        file: PathBuf,
        /// Write the table here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a relational structure from a named family.
    Gen {
        kind: GenKind,
        /// Comma-separated key=value parameters, e.g. n=10,max-label=5.
        #[arg(long, default_value = "")]
        params: String,
        /// Write the structure here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Derive from a structure and compare against an expected table.
    Diff { structure: PathBuf, table: PathBuf },
    /// Build a composite table from parts.
    Compose {
        #[command(subcommand)]
        what: ComposeCmd,
    },
    /// Build a typed join table from a spec file.
    Join {
        spec: PathBuf,
        /// Write the typed table here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Fold a word of labels through a table, left to right.
    /// Put labels after `--` so negative names are not read as flags.
    Power {
        file: PathBuf,
        #[arg(last = true, required = true)]
        labels: Vec<String>,
    },
    /// Emit a DOT graph export.
    ExportDot {
        file: PathBuf,
        /// Export the restriction lattice as a Hasse diagram.
        #[arg(long)]
        lattice: bool,
        /// Write the DOT text here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// List or emit the bundled example tables.
    Fixtures {
        /// List the bundled fixture names.
        #[arg(long)]
        list: bool,
        /// Emit this fixture as a table document.
        name: Option<String>,
        /// Write the emitted fixture here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write every bundled fixture into --dir.
        #[arg(long)]
        write_all: bool,
        /// Target directory for --write-all.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Chain,
    Path,
    Tree,
    Cayley,
    Successor,
    Thm52,
}

#[derive(Subcommand)]
enum ComposeCmd {
    /// Band composition of a negative monoid with a positive monoid.
    Band {
        neg: PathBuf,
        pos: PathBuf,
        /// Write the composed table here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}

fn run(cli: &Cli) -> i32 {
    match &cli.cmd {
        Cmd::Validate { file, typed } => cmd_validate(cli, file, *typed),
        Cmd::Analyze {
            file,
            sop,
            lattice,
            classify,
            pip,
            special,
            max_word,
            max_power,
            powerful,
            sweep,
        } => cmd_analyze(
            cli, file, *sop, *lattice, *classify, *pip, *special, *max_word, *max_power,
            powerful.as_deref(), *sweep,
        ),
        Cmd::Derive { file, out } => cmd_derive(file, out.as_ref()),
        Cmd::Gen { kind, params, out } => cmd_gen(*kind, params, out.as_ref()),
        Cmd::Diff { structure, table } => cmd_diff(cli, structure, table),
        Cmd::Compose { what } => match what {
            ComposeCmd::Band { neg, pos, out } => cmd_compose_band(cli, neg, pos, out.as_ref()),
        },
        Cmd::Join { spec, out } => cmd_join(spec, out.as_ref()),
        Cmd::Power { file, labels } => cmd_power(cli, file, labels),
        Cmd::ExportDot { file, lattice, out } => cmd_export_dot(cli, file, *lattice, out.as_ref()),
        Cmd::Fixtures {
            list,
            name,
            out,
            write_all,
            dir,
        } => cmd_fixtures(cli, *list, name.as_deref(), out.as_ref(), *write_all, dir.as_ref()),
    }
}

// ---- plumbing ----

fn load_text(path: &PathBuf) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        2
    })
}

fn load_table(path: &PathBuf, window: Option<u32>) -> Result<MultiTable, i32> {
    let text = load_text(path)?;
    let table = table_from_json(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        2
    })?;
    Ok(match window {
        Some(w) if table.window().is_some() => override_window(&table, w),
        _ => table,
    })
}

/// Rebuild a windowed table with a different declared bound. The stored
/// cells are unchanged; only the bound reported on overflow moves.
fn override_window(t: &MultiTable, w: u32) -> MultiTable {
    let a = t.alphabet().clone();
    let mut products = BTreeMap::new();
    let mut infinite = BTreeSet::new();
    let mut empty = BTreeSet::new();
    for u in t.alphabet().ids() {
        for v in t.alphabet().ids() {
            match t.cell(u, v) {
                Cell::Value { set, infinite: inf } => {
                    products.insert((u, v), set.clone());
                    if inf {
                        infinite.insert((u, v));
                    }
                }
                Cell::Empty => {
                    empty.insert((u, v));
                }
                Cell::OutOfWindow => {}
            }
        }
    }
    MultiTable::windowed(a, w, products, infinite, empty, t.unbounded())
        .expect("cells of a valid table rebuild under any bound")
}

fn emit_doc(doc: &str, out: Option<&PathBuf>, what: &str) -> i32 {
    match out {
        Some(p) => match fs::write(p, doc) {
            Ok(()) => {
                eprintln!("{what} written to {}", p.display());
                0
            }
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                2
            }
        },
        None => {
            print!("{doc}");
            0
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

fn status_text(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::VacuousPass => "vacuous-pass",
        CheckStatus::Fail => "fail",
        CheckStatus::SkippedWindow => "skipped-window",
    }
}

// ---- validate ----

fn render_validation_text(report: &ValidationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!(
            "{:3} {:<44} {}\n",
            c.id.name(),
            c.title,
            status_text(c.status)
        ));
        if let Some(w) = &c.witness {
            out.push_str(&format!("    witness [{}]: {}\n", w.labels.join(", "), w.detail));
        }
        if c.skipped_instances > 0 {
            out.push_str(&format!(
                "    ({} instances skipped by window)\n",
                c.skipped_instances
            ));
        }
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.passed() { "pass" } else { "fail" }
    ));
    out
}

fn render_typed_text(report: &TypedReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        out.push_str(&format!(
            "{:<12} {:<44} {}\n",
            c.name,
            c.title,
            status_text(c.status)
        ));
        if let Some(w) = &c.witness {
            out.push_str(&format!("    witness: {w}\n"));
        }
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.passed() { "pass" } else { "fail" }
    ));
    out
}

fn cmd_validate(cli: &Cli, file: &PathBuf, typed: bool) -> i32 {
    if typed {
        let text = match load_text(file) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let table = match typed_from_json(&text) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", file.display());
                return 2;
            }
        };
        let report = validate_typed(&table);
        let doc = match cli.format {
            Format::Json => pretty(&serde_json::to_value(&report).expect("typed report")),
            Format::Text => render_typed_text(&report),
        };
        print!("{doc}");
        return i32::from(!report.passed());
    }
    let table = match load_table(file, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let report = validate_table(&table);
    let doc = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&report).expect("report")),
        Format::Text => render_validation_text(&report),
    };
    print!("{doc}");
    i32::from(!report.passed())
}

// ---- analyze ----

#[allow(clippy::too_many_arguments)]
fn cmd_analyze(
    cli: &Cli,
    file: &PathBuf,
    sop: bool,
    lattice: bool,
    classify: bool,
    pip: bool,
    special: bool,
    max_word: u32,
    max_power: u32,
    powerful: Option<&[String]>,
    sweep: Option<u32>,
) -> i32 {
    let table = match load_table(file, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let default_all =
        !(sop || lattice || classify || pip || special || powerful.is_some() || sweep.is_some());
    let mut failed = false;
    let mut sections = serde_json::Map::new();
    let mut text = String::new();

    if classify || default_all {
        let class = classify_relation(&table);
        text.push_str(&format!(
            "classify: transitive={} partial-order={} equivalence={}\n",
            class.transitive, class.partial_order, class.equivalence
        ));
        sections.insert("classify".into(), serde_json::to_value(class).expect("classify"));
    }

    if sop || default_all {
        let a = table.alphabet();
        let eligible =
            a.ids().any(|u| a.sign(u) == Sign::Neg) && !table.unbounded().neg;
        let witness = sop_detect(&table, max_power);
        let reevaluated = witness
            .as_ref()
            .map(|w| reevaluate_sop(&table, w))
            .unwrap_or(false);
        match &witness {
            Some(w) => {
                let kind = match w.kind {
                    igroupoid::analysis::SopWitnessKind::DirectClosure => "direct-closure",
                    igroupoid::analysis::SopWitnessKind::PowerClosure => "power-closure",
                };
                text.push_str(&format!(
                    "sop: {kind} witness, set {{{}}}{}{}, re-evaluation {}\n",
                    w.set.join(","),
                    w.element
                        .as_ref()
                        .map(|e| format!(", element {e}"))
                        .unwrap_or_default(),
                    w.power
                        .map(|n| format!(", power {n}"))
                        .unwrap_or_default(),
                    if reevaluated { "ok" } else { "failed" }
                ));
                if !reevaluated {
                    failed = true;
                }
            }
            None => {
                if eligible {
                    text.push_str(&format!(
                        "sop: no witness up to power {max_power} on a finite negative part\n"
                    ));
                    failed = true;
                } else {
                    text.push_str("sop: not applicable (negative part empty or unbounded)\n");
                }
            }
        }
        sections.insert(
            "sop".into(),
            json!({
                "eligible": eligible,
                "witness": witness,
                "reevaluated": if witness.is_some() { Value::Bool(reevaluated) } else { Value::Null },
            }),
        );
    }

    if lattice || default_all {
        match restriction_lattice(&table) {
            Ok(l) => {
                text.push_str(&format!(
                    "lattice: {} nodes, {} edges\n",
                    l.nodes.len(),
                    l.edges.len()
                ));
                for node in &l.nodes {
                    text.push_str(&format!(
                        "  {}: {{{}}}\n",
                        node.names.join(" = "),
                        node.labels.join(",")
                    ));
                }
                sections.insert("lattice".into(), serde_json::to_value(&l).expect("lattice"));
            }
            Err(e) => {
                text.push_str(&format!("lattice: failed: {e}\n"));
                sections.insert("lattice".into(), json!({ "error": e.to_string() }));
                failed = true;
            }
        }
    }

    if pip || default_all {
        let elements = pip_elements(&table);
        let names: Vec<&str> = elements.iter().map(|u| table.alphabet().name(u)).collect();
        text.push_str(&format!("pip: {{{}}}\n", names.join(",")));
        sections.insert("pip".into(), json!(names));
    }

    if special {
        match special_check(&table, max_word) {
            Ok(report) => {
                text.push_str(&format!(
                    "special: {} (bound {}, {} skipped)\n",
                    if report.pass { "pass" } else { "fail" },
                    report.bound,
                    report.skipped
                ));
                if let Some((word, right, label)) = &report.witness {
                    text.push_str(&format!(
                        "  witness: word [{}] * {right} strands label {label}\n",
                        word.join(", ")
                    ));
                }
                if !report.pass {
                    failed = true;
                }
                sections.insert("special".into(), serde_json::to_value(&report).expect("special"));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }

    if let Some(gens) = powerful {
        let mut ids = Vec::new();
        for g in gens {
            match table.alphabet().resolve(g) {
                Ok(id) => ids.push(id),
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
        }
        match powerful_graph_check(&table, &ids) {
            Ok(report) => {
                text.push_str(&format!(
                    "powerful: {} zero-free={} pairwise-meets={} acl-disjoint={} ({} skipped)\n",
                    if report.pass { "pass" } else { "fail" },
                    report.zero_free,
                    report.pairwise_meets,
                    report
                        .acl_disjoint
                        .map(|b| b.to_string())
                        .unwrap_or_else(|| "n/a".to_string()),
                    report.skipped
                ));
                for d in [&report.zero_free_detail, &report.pairwise_detail]
                    .into_iter()
                    .flatten()
                {
                    text.push_str(&format!("  {d}\n"));
                }
                if !report.pass {
                    failed = true;
                }
                sections.insert("powerful".into(), serde_json::to_value(&report).expect("powerful"));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }

    if let Some(n) = sweep {
        let (report, sweep_failed) = run_sweep(cli.seed, n);
        text.push_str(&format!(
            "sweep: {} tables from seed {}, {} failures\n",
            n, cli.seed, report["failures"]
        ));
        if let Some(first) = report["first_failure"].as_str() {
            text.push_str(&format!("  first failure: {first}\n"));
        }
        if sweep_failed {
            failed = true;
        }
        sections.insert("sweep".into(), report);
    }

    let doc = match cli.format {
        Format::Json => pretty(&Value::Object(sections)),
        Format::Text => text,
    };
    print!("{doc}");
    i32::from(failed)
}

/// Closure property suite over seeded random valid tables: the axiom
/// battery, product- and inverse-closure of the deterministic core and the
/// almost-deterministic closure, and lattice construction.
fn run_sweep(seed: u64, n: u32) -> (Value, bool) {
    let mut sampler = Sampler::new(seed);
    let mut failures = 0u32;
    let mut first_failure: Option<String> = None;
    for i in 0..n {
        let table = sampler.valid_table();
        let mut problems = Vec::new();
        if !validate_table(&table).passed() {
            problems.push("axiom battery failed".to_string());
        }
        let d = deterministic_core(&table);
        let ad = almost_deterministic_closure(&table);
        for (name, set) in [("deterministic core", &d), ("almost-deterministic closure", &ad)] {
            if let Err(e) = assert_product_closed(&table, name, set) {
                problems.push(e.to_string());
            }
            if !inverse_closed(&table, set) {
                problems.push(format!("{name} is not inverse-closed"));
            }
        }
        if let Err(e) = restriction_lattice(&table) {
            problems.push(e.to_string());
        }
        if !problems.is_empty() {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!("table {i}: {}", problems.join("; ")));
            }
        }
    }
    let failed = failures > 0;
    (
        json!({
            "seed": seed,
            "tables": n,
            "failures": failures,
            "first_failure": first_failure,
        }),
        failed,
    )
}

// ---- derive / gen / diff ----

fn cmd_derive(file: &PathBuf, out: Option<&PathBuf>) -> i32 {
    let text = match load_text(file) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let structure = match structure_from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return 2;
        }
    };
    let table = match derive_table(&structure) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    for note in parity_notes(&table) {
        eprintln!(
            "note: {}*{} = {{{}}} strictly contains {{{}}}",
            note.left,
            note.right,
            note.derived.join(","),
            note.baseline.join(",")
        );
    }
    emit_doc(&table_to_json(&table), out, "table")
}

fn params_map(params: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    if params.is_empty() {
        return Ok(map);
    }
    for piece in params.split(',') {
        let (k, v) = piece
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{piece}`"))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn want_u32(map: &BTreeMap<String, String>, key: &str) -> Result<u32, String> {
    let raw = map
        .get(key)
        .ok_or_else(|| format!("missing parameter `{key}`"))?;
    raw.parse()
        .map_err(|_| format!("parameter `{key}` must be a non-negative integer, got `{raw}`"))
}

fn group_rows(name: &str) -> Option<Vec<Vec<String>>> {
    match name {
        "klein" => Some(fixtures::klein_cayley()),
        "s3" => Some(s3_cayley()),
        _ => {
            let n: usize = name.strip_prefix('z')?.parse().ok()?;
            if n == 0 {
                return None;
            }
            Some(fixtures::cyclic_cayley(n))
        }
    }
}

fn cmd_gen(kind: GenKind, params: &str, out: Option<&PathBuf>) -> i32 {
    let map = match params_map(params) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let want_group = |map: &BTreeMap<String, String>| -> Result<Vec<Vec<String>>, String> {
        let name = map
            .get("group")
            .ok_or_else(|| "missing parameter `group`".to_string())?;
        group_rows(name).ok_or_else(|| {
            format!("unknown group `{name}` (expected z<n>, klein, or s3)")
        })
    };
    let kind = match (|| -> Result<StructureKind, String> {
        Ok(match kind {
            GenKind::Chain => StructureKind::Chain {
                n: want_u32(&map, "n")?,
            },
            GenKind::Path => StructureKind::PathGraph {
                n: want_u32(&map, "n")?,
                max_label: want_u32(&map, "max-label")?,
            },
            GenKind::Tree => StructureKind::Tree {
                degree: want_u32(&map, "degree")?,
                radius: want_u32(&map, "radius")?,
                max_label: want_u32(&map, "max-label")?,
            },
            GenKind::Cayley => StructureKind::Cayley {
                cayley: want_group(&map)?,
            },
            GenKind::Successor => StructureKind::SuccessorLine {
                n: want_u32(&map, "n")?,
                max_label: want_u32(&map, "max-label")?,
            },
            GenKind::Thm52 => StructureKind::DenseOrderWithPolygon {
                n: want_u32(&map, "n")?,
                cayley: want_group(&map)?,
            },
        })
    })() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let structure = match generate_structure(&kind) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    emit_doc(&structure_to_json(&structure), out, "structure")
}

fn cmd_diff(cli: &Cli, structure: &PathBuf, table: &PathBuf) -> i32 {
    let text = match load_text(structure) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let s = match structure_from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", structure.display());
            return 2;
        }
    };
    let expected = match load_table(table, None) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let report = match oracle_vs_table(&s, &expected) {
        Ok(r) => r,
        Err(igroupoid::Error::AlphabetMismatch(detail)) => {
            eprintln!("alphabet mismatch: {detail}");
            return 1;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let doc = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&report).expect("diff report")),
        Format::Text => {
            if report.is_empty() {
                "derived table matches expected table\n".to_string()
            } else {
                let mut s = String::new();
                for c in &report.cells {
                    s.push_str(&format!(
                        "{}*{}: derived {} expected {}\n",
                        c.left, c.right, c.derived, c.expected
                    ));
                }
                s.push_str(&format!("{} cells differ\n", report.cells.len()));
                s
            }
        }
    };
    print!("{doc}");
    i32::from(!report.is_empty())
}

// ---- compose / join / power / export ----

fn cmd_compose_band(cli: &Cli, neg: &PathBuf, pos: &PathBuf, out: Option<&PathBuf>) -> i32 {
    let neg_table = match load_table(neg, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let pos_table = match load_table(pos, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match band_compose(&neg_table, &pos_table) {
        Ok(t) => emit_doc(&table_to_json(&t), out, "table"),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_join(spec: &PathBuf, out: Option<&PathBuf>) -> i32 {
    let text = match load_text(spec) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed = match join_spec_from_json(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", spec.display());
            return 2;
        }
    };
    match join_build(&parsed.sorts, &parsed.components, &parsed.cross) {
        Ok(t) => emit_doc(&typed_to_json(&t), out, "typed table"),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn cmd_power(cli: &Cli, file: &PathBuf, labels: &[String]) -> i32 {
    let table = match load_table(file, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let mut word = Vec::new();
    for name in labels {
        match table.alphabet().resolve(name) {
            Ok(id) => word.push(id),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    match table.word_product(&word) {
        Ok(set) => {
            let doc = match cli.format {
                Format::Json => {
                    let names: Vec<&str> =
                        set.iter().map(|u| table.alphabet().name(u)).collect();
                    pretty(&json!(names))
                }
                Format::Text => format!("{}\n", table.alphabet().render(&set)),
            };
            print!("{doc}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cmd_export_dot(cli: &Cli, file: &PathBuf, lattice: bool, out: Option<&PathBuf>) -> i32 {
    if !lattice {
        eprintln!("error: export-dot requires --lattice");
        return 2;
    }
    let table = match load_table(file, cli.window) {
        Ok(t) => t,
        Err(code) => return code,
    };
    match restriction_lattice(&table) {
        Ok(l) => emit_doc(&l.to_dot(), out, "dot graph"),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

// ---- fixtures ----

fn fixture_table(name: &str, window: Option<u32>) -> Option<MultiTable> {
    match (name, window) {
        ("line-graph", Some(w)) => Some(fixtures::line_graph(w)),
        ("omega-star", Some(w)) => Some(fixtures::omega_star(w)),
        ("z-successor", Some(w)) => Some(fixtures::z_successor(w)),
        _ => fixtures::by_name(name),
    }
}

fn cmd_fixtures(
    cli: &Cli,
    list: bool,
    name: Option<&str>,
    out: Option<&PathBuf>,
    write_all: bool,
    dir: Option<&PathBuf>,
) -> i32 {
    if list {
        let doc = match cli.format {
            Format::Json => {
                let entries: Vec<Value> = fixtures::FIXTURE_NAMES
                    .iter()
                    .map(|n| json!({ "name": n, "description": fixtures::describe(n) }))
                    .collect();
                pretty(&json!(entries))
            }
            Format::Text => {
                let mut s = String::new();
                for n in fixtures::FIXTURE_NAMES {
                    s.push_str(&format!("{n:<14} {}\n", fixtures::describe(n).unwrap_or("")));
                }
                s
            }
        };
        print!("{doc}");
        return 0;
    }
    if write_all {
        let Some(dir) = dir else {
            eprintln!("error: --write-all requires --dir");
            return 2;
        };
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: {}: {e}", dir.display());
            return 2;
        }
        for n in fixtures::FIXTURE_NAMES {
            let table = fixture_table(n, cli.window).expect("bundled manifest");
            let path = dir.join(format!("{n}.json"));
            if let Err(e) = fs::write(&path, table_to_json(&table)) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
            eprintln!("wrote {}", path.display());
        }
        return 0;
    }
    let Some(name) = name else {
        eprintln!("error: give a fixture name, --list, or --write-all");
        return 2;
    };
    match fixture_table(name, cli.window) {
        Some(t) => emit_doc(&table_to_json(&t), out, "table"),
        None => {
            eprintln!("error: unknown fixture `{name}`");
            2
        }
    }
}
