//! `polyglue`: command-line access to polyhedra with identified faces.
//!
//! Exit codes: 0 success, 1 valid input but a negative answer, 2 input
//! error, 3 internal consistency error.

use std::fs;
use std::io::{self, Read, Write};
use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyglue::moves::{self, RemovalOrder};
use polyglue::report::{self, SCHEMA_VERSION};
use polyglue::{catalog, export, pif, quotient, AttachPoint, Error, Outcome, Polyhedron, Verdict};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "polyglue", version, about = "Polyhedra with identified faces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Input PIF file, `-` for standard input.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled searches and random moves.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of schemes a search evaluates.
    #[arg(long, global = true, default_value_t = 100_000)]
    limit: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Manifold,
    Distinguished,
    Special,
    Simple,
    Cellular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKind {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the input and run the structural audit.
    Validate,
    /// Pairings, edge classes and vertex classes.
    Info,
    /// Remove needless vertices.
    Normalize,
    /// Cells, local models and components of the scar.
    Scar,
    /// Link surface of every vertex class.
    Links,
    /// Integral homology of the produced space.
    Homology,
    /// Every predicate at once; `--expect` turns it into a query.
    Classify {
        #[arg(long, value_enum)]
        expect: Vec<Property>,
    },
    /// Remove cycle-2 edge classes while possible.
    Minimize {
        /// Try classes in reverse name order.
        #[arg(long)]
        reversed: bool,
    },
    /// Decide whether two polyhedra are related by cycle-2 moves.
    Alike { left: String, right: String },
    /// Apply a single move.
    Move {
        #[command(subcommand)]
        action: MoveAction,
    },
    /// Print a catalog entry, or list the entries when no name is given.
    Catalog { name: Option<String> },
    /// Enumerate identification schemes on a ball.
    Search {
        /// Named ball (`cube`, `octahedron`, `dodecahedron`, `lens-P`);
        /// otherwise the ball of the input polyhedron.
        #[arg(long)]
        ball: Option<String>,
    },
    /// Export as Graphviz or as a JSON classification.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
    },
}

#[derive(Subcommand)]
enum MoveAction {
    /// Split a face and its partner along a new pair of chords.
    InsertChord {
        #[arg(long)]
        face: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Attach a dangling edge at a corner or at the middle of a side.
    InsertDangling {
        #[arg(long)]
        face: String,
        #[arg(long, required_unless_present = "side", conflicts_with = "side")]
        corner: Option<usize>,
        #[arg(long)]
        side: Option<usize>,
    },
    /// Remove the cycle-2 edge class of a label.
    Remove {
        #[arg(long)]
        label: String,
    },
    /// Seeded random insertions.
    Random {
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InternalConsistency(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Report {
    text: String,
    json: Value,
    /// False when a query was answered in the negative.
    yes: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, yes: true }
    }

    fn polyhedron(p: &Polyhedron, extra: Value) -> Self {
        let text = pif::serialize(p);
        let mut json = json!({ "name": p.name(), "pif": text });
        merge(&mut json, extra);
        Report::new(text, json)
    }
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<Polyhedron, Failure> {
    let text = read_source(path)?;
    pif::parse(&text).map_err(|e| {
        let shown = if path == "-" { "<stdin>" } else { path };
        match e.kind {
            pif::PifErrorKind::Semantic(Error::InternalConsistency(_)) => Failure::Internal(format!("{shown}: {e}")),
            _ => Failure::Input(format!("{shown}: {e}")),
        }
    })
}

fn signed(sign: polyglue::Sign, name: &str) -> String {
    format!("{}{}", sign.symbol(), name)
}

fn info(p: &Polyhedron) -> Report {
    let ball = p.ball();
    let edges = p.edge_classes();
    let vertices = p.vertex_classes();
    let mut text = format!(
        "name: {}\nball: {} faces, {} edges, {} vertices\nstandard: {}\npairings:\n",
        p.name(),
        ball.face_count(),
        ball.label_count(),
        ball.vertex_count(),
        p.is_standard()
    );
    let pairs = p.named_pairings();
    for (a, b, k) in &pairs {
        text.push_str(&format!("  {a} ~ {b} offset {k}\n"));
    }
    text.push_str("edge classes:\n");
    let edge_json: Vec<Value> = edges
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let members: Vec<String> = c
                .labels
                .iter()
                .zip(&c.orientations)
                .map(|(&l, &s)| signed(s, ball.label_name(l)))
                .collect();
            text.push_str(&format!("  e{i}: cycle {}: {}\n", c.cycle(), members.join(" ")));
            json!({ "cycle": c.cycle(), "labels": members })
        })
        .collect();
    text.push_str("vertex classes:\n");
    let vertex_json: Vec<Value> = vertices
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let members: Vec<usize> = c.vertices.iter().map(|v| v.0).collect();
            let shown: Vec<String> = members.iter().map(|v| format!("v{v}")).collect();
            text.push_str(&format!("  p{i}: order {}: {}\n", c.order(), shown.join(" ")));
            json!({ "order": c.order(), "vertices": members })
        })
        .collect();
    let json = json!({
        "name": p.name(),
        "counts": { "V": ball.vertex_count(), "E": ball.label_count(), "F": ball.face_count() },
        "standard": p.is_standard(),
        "pairings": pairs,
        "edge_classes": edge_json,
        "vertex_classes": vertex_json,
    });
    Report::new(text, json)
}

fn scar(p: &Polyhedron) -> Result<Report, Failure> {
    let summary = quotient::summarize(p)?;
    let cellular = quotient::is_cellular(p)?;
    let special = quotient::is_special(p)?;
    let s = &summary.scar;
    let names = p.ball().label_names();
    let (v, e, f) = s.counts();
    let mut text = format!(
        "scar of {}: {v} vertices, {e} edges, {f} faces, Euler characteristic {}\n",
        p.name(),
        s.euler_characteristic()
    );
    for (i, c) in s.vertex_cells.iter().enumerate() {
        text.push_str(&format!(
            "  p{i}: order {}, {}\n",
            c.order(),
            summary.models.vertices[i]
        ));
    }
    for (i, c) in s.edge_cells.iter().enumerate() {
        let (t, h) = s.edge_ends[i];
        text.push_str(&format!(
            "  e{i}: cycle {}, p{t} -> p{h}, {}\n",
            c.cycle(),
            summary.models.edges[i]
        ));
    }
    let boundaries: Vec<Vec<String>> = s
        .face_boundaries
        .iter()
        .map(|b| b.iter().map(|&(e, sign)| signed(sign, &format!("e{e}"))).collect())
        .collect();
    for (i, pairing) in s.face_cells.iter().enumerate() {
        text.push_str(&format!(
            "  f{i}: {} ~ {}, boundary {}, {}\n",
            p.ball().face_name(pairing.face_a),
            p.ball().face_name(pairing.face_b),
            boundaries[i].join(" "),
            summary.models.faces[i]
        ));
    }
    let comps = &summary.components;
    for (dim, list) in [(2, &comps.two), (1, &comps.one), (0, &comps.zero)] {
        for (i, c) in list.iter().enumerate() {
            text.push_str(&format!(
                "  {dim}-component {i}: {} faces, {} edges, {} vertices, {}\n",
                c.faces.len(),
                c.edges.len(),
                c.vertices.len(),
                if c.open_cell { "open cell" } else { "not an open cell" }
            ));
        }
    }
    text.push_str(&format!(
        "simple: {}  cellular: {}  special: {}\n",
        summary.simple, cellular.cellular, special
    ));
    if let Some(d) = &cellular.diagnostic {
        text.push_str(&format!("note: {d}\n"));
    }
    let edge_classes: Vec<Vec<&str>> = s
        .edge_cells
        .iter()
        .map(|c| c.labels.iter().map(|l| names[l.0].as_str()).collect())
        .collect();
    let json = json!({
        "name": p.name(),
        "counts": { "V_q": v, "E_q": e, "F_q": f },
        "chi_scar": s.euler_characteristic(),
        "edge_classes": edge_classes,
        "edge_ends": s.edge_ends,
        "face_boundaries": boundaries,
        "local_models": summary.models,
        "components": summary.components,
        "simple": summary.simple,
        "cellular": cellular,
        "special": special,
    });
    Ok(Report::new(text, json))
}

fn links(p: &Polyhedron) -> Result<Report, Failure> {
    let links = quotient::vertex_links(p)?;
    let mut text = String::new();
    for l in &links {
        text.push_str(&format!(
            "p{}: {} points, {} arcs, {} disks, chi {}, genus {}, scar graph {}\n",
            l.class, l.points, l.arcs, l.disks, l.chi, l.genus, l.graph.shape
        ));
    }
    Ok(Report::new(text, json!({ "name": p.name(), "links": links })))
}

fn classify(p: &Polyhedron, expect: &[Property]) -> Result<Report, Failure> {
    let c = report::classify(p)?;
    let mut failed = Vec::new();
    for &e in expect {
        let (name, holds) = match e {
            Property::Manifold => ("manifold", c.manifold),
            Property::Distinguished => ("distinguished", c.distinguished),
            Property::Special => ("special", c.special),
            Property::Simple => ("simple", c.simple),
            Property::Cellular => ("cellular", c.cellular),
        };
        if !holds {
            failed.push(name);
        }
    }
    for name in &failed {
        eprintln!("{}: expected {name}, but it is not", p.name());
    }
    let json = serde_json::to_value(&c).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report {
        text: c.to_text(),
        json,
        yes: failed.is_empty(),
    })
}

fn minimize(p: &Polyhedron, reversed: bool) -> Report {
    let order = if reversed {
        RemovalOrder::Reversed
    } else {
        RemovalOrder::Lexicographic
    };
    let result = moves::minimize_with(p, order);
    let q = result.outcome.polyhedron();
    let unremovable: &[Vec<String>] = match &result.outcome {
        Outcome::Stuck { unremovable, .. } => unremovable,
        _ => &[],
    };
    let classes = |list: &[Vec<String>]| {
        list.iter()
            .map(|c| format!("{{{}}}", c.join(",")))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut text = format!("# outcome: {}\n", result.outcome.kind());
    if !result.removal_trace.is_empty() {
        text.push_str(&format!("# removed: {}\n", classes(&result.removal_trace)));
    }
    if !unremovable.is_empty() {
        text.push_str(&format!("# unremovable: {}\n", classes(unremovable)));
    }
    text.push_str(&pif::serialize(q));
    let mut report = Report::polyhedron(
        q,
        json!({
            "outcome": result.outcome.kind(),
            "removal_trace": result.removal_trace,
            "unremovable": unremovable,
        }),
    );
    report.text = text;
    report
}

fn alike(left: &str, right: &str) -> Result<Report, Failure> {
    let (a, b) = (load(left)?, load(right)?);
    let r = moves::alike(&a, &b)?;
    let verdict = match r.verdict {
        Verdict::Alike => "alike",
        Verdict::NotAlike => "not alike",
        Verdict::Undecided => "undecided",
    };
    let text = format!(
        "{verdict}: {}\n{}: {}\n{}: {}\n",
        r.reason,
        a.name(),
        r.left.outcome.kind(),
        b.name(),
        r.right.outcome.kind()
    );
    let json = json!({
        "left": a.name(),
        "right": b.name(),
        "verdict": r.verdict,
        "reason": r.reason,
        "left_outcome": r.left.outcome.kind(),
        "right_outcome": r.right.outcome.kind(),
    });
    Ok(Report {
        text,
        json,
        yes: r.verdict == Verdict::Alike,
    })
}

fn apply_move(p: &Polyhedron, action: &MoveAction, seed: u64) -> Result<Report, Failure> {
    let q = match action {
        MoveAction::InsertChord { face, from, to } => moves::insert_chord(p, face, *from, *to)?,
        MoveAction::InsertDangling { face, corner, side } => {
            let at = match (corner, side) {
                (Some(c), _) => AttachPoint::Corner(*c),
                (None, Some(s)) => AttachPoint::Side(*s),
                (None, None) => return Err(Failure::Input("give --corner or --side".into())),
            };
            moves::insert_dangling(p, face, at)?
        }
        MoveAction::Remove { label } => moves::remove_cycle2(p, label)?,
        MoveAction::Random { count } => catalog::random_insertions(p, *count, seed)?,
    };
    Ok(Report::polyhedron(&q, json!({})))
}

fn catalog_entry(name: Option<&str>) -> Result<Report, Failure> {
    match name {
        Some(name) => Ok(Report::polyhedron(&catalog::by_name(name)?, json!({}))),
        None => {
            let names: Vec<String> = catalog::entries().iter().map(|p| p.name().to_string()).collect();
            let text = names.iter().map(|n| format!("{n}\n")).collect();
            Ok(Report::new(
                text,
                json!({ "entries": names, "families": ["lens-P-Q", "annulus-N"] }),
            ))
        }
    }
}

fn search(g: &Global, ball: Option<&str>) -> Result<Report, Failure> {
    let ball = match ball {
        Some(name) => catalog::ball_by_name(name)?,
        None => load(&g.input)?.ball().clone(),
    };
    let limits = catalog::SearchLimits {
        max_schemes: g.limit,
        seed: g.seed,
    };
    let r = catalog::search_schemes(&ball, limits)?;
    let mut text = format!(
        "ball: {}\nschemes: {} total, {} evaluated{}\nmanifolds: {}  non-manifolds: {}  distinguished: {}\n",
        r.ball,
        r.total,
        r.evaluated,
        if r.limit_exceeded { " (seeded sample)" } else { "" },
        r.summary.manifolds,
        r.summary.non_manifolds,
        r.summary.distinguished
    );
    for rec in r.records.iter().filter(|r| r.distinguished) {
        let pairs: Vec<String> = rec.pairs.iter().map(|(a, b, k)| format!("{a}~{b}:{k}")).collect();
        text.push_str(&format!("distinguished #{}: {} ({})\n", rec.index, pairs.join(" "), rec.h1));
    }
    let json = serde_json::to_value(&r).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report::new(text, json))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let g = &cli.global;
    let input = || load(&g.input);
    match &cli.command {
        Command::Validate => {
            let p = input()?;
            quotient::audit(&p)?;
            let ball = p.ball();
            let text = format!(
                "{}: valid ({} faces, {} edges, {} vertices)\n",
                p.name(),
                ball.face_count(),
                ball.label_count(),
                ball.vertex_count()
            );
            Ok(Report::new(text, json!({ "name": p.name(), "valid": true })))
        }
        Command::Info => Ok(info(&input()?)),
        Command::Normalize => {
            let p = input()?;
            let q = p.standard_form();
            Ok(Report::polyhedron(&q, json!({ "changed": !p.is_standard() })))
        }
        Command::Scar => scar(&input()?),
        Command::Links => links(&input()?),
        Command::Homology => {
            let p = input()?;
            let h = quotient::homology(&p)?;
            let json = json!({ "name": p.name(), "homology": h, "chi_quotient": quotient::chi_quotient(&p) });
            Ok(Report::new(format!("{h}\n"), json))
        }
        Command::Classify { expect } => classify(&input()?, expect),
        Command::Minimize { reversed } => Ok(minimize(&input()?, *reversed)),
        Command::Alike { left, right } => alike(left, right),
        Command::Move { action } => apply_move(&input()?, action, g.seed),
        Command::Catalog { name } => catalog_entry(name.as_deref()),
        Command::Search { ball } => search(g, ball.as_deref()),
        Command::Export { kind } => {
            let p = input()?;
            match kind {
                ExportKind::Dot => Ok(Report::new(export::to_dot(&p), json!({ "dot": export::to_dot(&p) }))),
                ExportKind::Json => {
                    let c = report::classify(&p)?;
                    let json = serde_json::to_value(&c).map_err(|e| Failure::Internal(e.to_string()))?;
                    let text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
                    Ok(Report::new(text, json))
                }
            }
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut json = json!({ "schema_version": SCHEMA_VERSION });
            merge(&mut json, report.json.clone());
            serde_json::to_string_pretty(&json).expect("serializable") + "\n"
        }
    }
}

fn emit(out: &str, path: Option<&PathBuf>) -> io::Result<()> {
    match path {
        Some(path) => fs::write(path, out),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(out.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match panic::catch_unwind(|| run(&cli)) {
        Ok(result) => result,
        Err(_) => Err(Failure::Internal("internal invariant violated".into())),
    };
    match outcome {
        Ok(report) => {
            if let Err(e) = emit(&render(&report, cli.global.format), cli.global.output.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.yes { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
