//! Command-line front end. `run` parses arguments, writes to the given sinks
//! and returns the process exit code.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Coloring, Graph};
use crate::io::{parse_coloring, parse_graph, write_coloring, write_edge_list};
use crate::perm::Perm;
use crate::pipeline::{aut, iso};
use crate::testkit::{brute_aut, brute_iso, gen_instance, random_permutation, GeneratorConfig, ORACLE_MAX_N};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NON_ISOMORPHIC: i32 = 1;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_NOT_CHORDAL: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "chordiso", version, about = "Automorphism groups and isomorphism of chordal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Threshold {
    /// Upper bound on the leafage. Without it the bound is found by
    /// iterative deepening over 2, 4, 8, ...
    #[arg(long = "leafage-bound", value_name = "L")]
    leafage_bound: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Automorphism group of a chordal graph (graph6 or edge list).
    Aut {
        graph: PathBuf,
        /// Vertex coloring, one `vertex color` pair per line.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[command(flatten)]
        threshold: Threshold,
        #[arg(long)]
        json: bool,
    },
    /// Isomorphism test; exits 1 and prints `non-isomorphic` when none exists.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        threshold: Threshold,
        #[arg(long)]
        json: bool,
    },
    /// Random chordal graph from subtrees of a host tree with few leaves.
    Gen {
        /// Number of vertices.
        n: usize,
        /// Maximum number of leaves of the host tree.
        leaves: usize,
        /// Seed; may also be given with --seed.
        #[arg(value_name = "SEED")]
        seed_pos: Option<u64>,
        /// Output file, or directory when --count is given. Stdout if absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of graphs; seeds are consecutive.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        twinless: bool,
        /// Also write a random coloring next to each graph.
        #[arg(long)]
        colored: bool,
    },
    /// Cross-checks every graph of a corpus directory against the oracles.
    Verify {
        dir: PathBuf,
        #[command(flatten)]
        threshold: Threshold,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Result of one automorphism computation.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub digest: String,
    pub n: usize,
    pub order: String,
    pub generators: Vec<Vec<usize>>,
    pub leafage_bound: usize,
    pub millis: u128,
    pub verified: bool,
}

#[derive(Serialize)]
struct AutJson<'a> {
    order: &'a str,
    generators: &'a [Vec<usize>],
    leafage_bound: usize,
    n: usize,
}

#[derive(Serialize)]
struct IsoJson<'a> {
    result: &'a str,
    mapping: Option<&'a [usize]>,
}

#[derive(Serialize)]
struct VerifyJson {
    checked: usize,
    mismatches: Vec<String>,
}

/// FNV-1a over the canonical edge-list text.
fn digest(g: &Graph) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in write_edge_list(g).bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::from)
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotChordal => EXIT_NOT_CHORDAL,
        Error::Parse { .. } | Error::InvalidGraph(_) => EXIT_PARSE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_INTERNAL,
    }
}

pub fn aut_report(g: &Graph, pi: Option<&Coloring>, threshold: Option<usize>) -> Result<RunReport> {
    let start = Instant::now();
    let res = aut(g, pi, threshold)?;
    let unit = Coloring::unit(g.n());
    let pi = pi.unwrap_or(&unit);
    let verified = res.group.generators().iter().all(|p| g.is_automorphism(p.images()) && pi.is_color_preserving(p.images()));
    if !verified {
        return Err(Error::NotIsomorphism("emitted generator is not an automorphism".into()));
    }
    Ok(RunReport {
        digest: digest(g),
        n: g.n(),
        order: res.group.order().to_string(),
        generators: res.group.generators().iter().map(|p| p.images().to_vec()).collect(),
        leafage_bound: res.threshold,
        millis: start.elapsed().as_millis(),
        verified,
    })
}

fn cycles_text(images: &[usize]) -> String {
    let p = Perm::from_images(images.to_vec()).expect("report holds permutations");
    p.cycles().iter().map(|c| format!("({})", c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))).collect()
}

fn print_report(r: &RunReport, json: bool, out: &mut dyn Write) -> std::io::Result<()> {
    if json {
        let j = AutJson { order: &r.order, generators: &r.generators, leafage_bound: r.leafage_bound, n: r.n };
        writeln!(out, "{}", serde_json::to_string(&j).expect("plain data serializes"))
    } else {
        writeln!(out, "digest: {}", r.digest)?;
        writeln!(out, "n: {}", r.n)?;
        writeln!(out, "order: {}", r.order)?;
        writeln!(out, "leafage_bound: {}", r.leafage_bound)?;
        writeln!(out, "time_ms: {}", r.millis)?;
        writeln!(out, "verified: {}", r.verified)?;
        writeln!(out, "generators: {}", r.generators.len())?;
        for g in &r.generators {
            writeln!(out, "{}", cycles_text(g))?;
        }
        Ok(())
    }
}

fn cmd_aut(graph: &Path, coloring: Option<&Path>, threshold: Option<usize>, json: bool, out: &mut dyn Write) -> Result<i32> {
    let g = load_graph(graph)?;
    let pi = coloring.map(|p| read(p).and_then(|t| parse_coloring(&t, g.n()))).transpose()?;
    let r = aut_report(&g, pi.as_ref(), threshold)?;
    print_report(&r, json, out)?;
    Ok(EXIT_OK)
}

fn cmd_iso(a: &Path, b: &Path, threshold: Option<usize>, json: bool, out: &mut dyn Write) -> Result<i32> {
    let (x, y) = (load_graph(a)?, load_graph(b)?);
    let m = iso(&x, &y, threshold)?;
    let images = m.as_ref().map(|p| p.images());
    if json {
        let j = IsoJson { result: if m.is_some() { "isomorphic" } else { "non-isomorphic" }, mapping: images };
        writeln!(out, "{}", serde_json::to_string(&j).expect("plain data serializes"))?;
    } else if let Some(images) = images {
        writeln!(out, "isomorphic")?;
        writeln!(out, "{}", images.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))?;
    } else {
        writeln!(out, "non-isomorphic")?;
    }
    Ok(if m.is_some() { EXIT_OK } else { EXIT_NON_ISOMORPHIC })
}

struct GenArgs {
    n: usize,
    leaves: usize,
    seed: u64,
    out: Option<PathBuf>,
    count: Option<usize>,
    twinless: bool,
    colored: bool,
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    if a.leaves == 0 {
        return Err(Error::Precondition("leaves must be at least 1".into()));
    }
    let make = |seed: u64| {
        let mut cfg = GeneratorConfig::new(a.n, a.leaves, seed);
        cfg.twinless = a.twinless;
        cfg.colored = a.colored;
        gen_instance(&cfg)
    };
    match (a.count, &a.out) {
        (Some(count), Some(dir)) => {
            fs::create_dir_all(dir)?;
            for i in 0..count {
                let seed = a.seed + i as u64;
                let inst = make(seed);
                let stem = format!("g{:04}_s{seed}", i);
                fs::write(dir.join(format!("{stem}.edges")), write_edge_list(&inst.graph))?;
                if a.colored {
                    fs::write(dir.join(format!("{stem}.col")), write_coloring(&inst.coloring))?;
                }
            }
        }
        (Some(_), None) => return Err(Error::Precondition("--count needs an output directory".into())),
        (None, Some(file)) => {
            let inst = make(a.seed);
            fs::write(file, write_edge_list(&inst.graph))?;
            if a.colored {
                fs::write(file.with_extension("col"), write_coloring(&inst.coloring))?;
            }
        }
        (None, None) => {
            let inst = make(a.seed);
            write!(out, "{}", write_edge_list(&inst.graph))?;
        }
    }
    Ok(EXIT_OK)
}

fn is_graph_file(p: &Path) -> bool {
    matches!(p.extension().and_then(|e| e.to_str()), Some("edges" | "g6" | "txt"))
}

/// Checks one graph: generators, order against the brute-force oracle or an
/// `.order` sidecar, and isomorphism with a relabeled copy.
fn verify_one(path: &Path, threshold: Option<usize>, seed: u64) -> Result<Vec<String>> {
    let name = path.display().to_string();
    let g = load_graph(path)?;
    let col = path.with_extension("col");
    let pi = if col.exists() { parse_coloring(&read(&col)?, g.n())? } else { Coloring::unit(g.n()) };
    let r = aut_report(&g, Some(&pi), threshold)?;
    let mut bad = Vec::new();
    let expected = path.with_extension("order");
    if expected.exists() {
        let want = read(&expected)?.trim().to_string();
        if want != r.order {
            bad.push(format!("{name}: order {} but sidecar says {want}", r.order));
        }
    }
    if g.n() <= ORACLE_MAX_N {
        let want = brute_aut(&g, &pi)?.order().to_string();
        if want != r.order {
            bad.push(format!("{name}: order {} but brute force gives {want}", r.order));
        }
    }
    let p = random_permutation(g.n(), seed);
    let h = g.relabel(p.images());
    match iso(&g, &h, threshold)? {
        Some(m) if g.is_isomorphism_to(&h, m.images()) => {}
        _ => bad.push(format!("{name}: relabeled copy not recognized as isomorphic")),
    }
    if g.n() <= ORACLE_MAX_N && brute_iso(&g, &h)?.is_none() {
        bad.push(format!("{name}: oracle rejects relabeled copy"));
    }
    Ok(bad)
}

fn cmd_verify(dir: &Path, threshold: Option<usize>, seed: u64, json: bool, out: &mut dyn Write) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<std::io::Result<_>>()?;
    files.retain(|p| is_graph_file(p));
    files.sort();
    let mut mismatches = Vec::new();
    for (i, f) in files.iter().enumerate() {
        match verify_one(f, threshold, seed.wrapping_add(i as u64)) {
            Ok(bad) => mismatches.extend(bad),
            Err(e) => mismatches.push(format!("{}: {e}", f.display())),
        }
    }
    if json {
        let j = VerifyJson { checked: files.len(), mismatches };
        writeln!(out, "{}", serde_json::to_string(&j).expect("plain data serializes"))?;
        return Ok(if j.mismatches.is_empty() { EXIT_OK } else { EXIT_MISMATCH });
    }
    for m in &mismatches {
        writeln!(out, "MISMATCH {m}")?;
    }
    writeln!(out, "checked {} graphs, {} mismatches", files.len(), mismatches.len())?;
    Ok(if mismatches.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let res = match cli.command {
        Command::Aut { graph, coloring, threshold, json } => {
            cmd_aut(&graph, coloring.as_deref(), threshold.leafage_bound, json, out)
        }
        Command::Iso { a, b, threshold, json } => cmd_iso(&a, &b, threshold.leafage_bound, json, out),
        Command::Gen { n, leaves, seed_pos, out: path, seed, count, twinless, colored } => {
            let seed = seed.or(seed_pos).unwrap_or(0);
            cmd_gen(GenArgs { n, leaves, seed, out: path, count, twinless, colored }, out)
        }
        Command::Verify { dir, threshold, seed, json } => cmd_verify(&dir, threshold.leafage_bound, seed, json, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
