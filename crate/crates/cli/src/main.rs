//! `banlat`: batch entry points over JSON files or stdin.

mod commands;
mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use banlat::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{digest, finish, render_text};

#[derive(Parser, Debug)]
#[command(
    name = "banlat",
    version,
    about = "Finite modular lattices, regular rings, traces and coordinatization"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub(crate) format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0, global = true)]
    pub(crate) seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub(crate) threads: Option<usize>,
    /// Read input JSON from this file instead of stdin.
    #[arg(long, short, global = true)]
    pub(crate) input: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Finite lattices and Banaschewski functions.
    #[command(subcommand)]
    Lattice(commands::lattice::LatticeCmd),
    /// Finite rings.
    #[command(subcommand)]
    Ring(commands::ring::RingCmd),
    /// Banaschewski traces.
    #[command(subcommand)]
    Trace(commands::staged::TraceCmd),
    /// The complemented extension of a staged lattice.
    #[command(subcommand)]
    Embed(commands::staged::EmbedCmd),
    /// Directed ring systems and coordinatization.
    #[command(subcommand)]
    Coord(commands::coord::CoordCmd),
}

/// Lazily read input text, recorded for the report digest.
pub struct Input {
    path: Option<PathBuf>,
    text: Option<String>,
}

impl Input {
    fn new(path: Option<PathBuf>) -> Self {
        Input { path, text: None }
    }

    pub fn text(&mut self) -> Result<&str> {
        if self.text.is_none() {
            let mut s = String::new();
            match &self.path {
                Some(p) => {
                    s = std::fs::read_to_string(p)
                        .map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?
                }
                None => {
                    std::io::stdin()
                        .read_to_string(&mut s)
                        .map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
                }
            }
            self.text = Some(s);
        }
        Ok(self.text.as_deref().unwrap())
    }

    /// The input, or the `key` witness of a piped report.
    pub fn object(&mut self, key: &str) -> Result<String> {
        let text = self.text()?;
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        match value.as_object() {
            Some(obj) if obj.contains_key("command") && obj.contains_key("witnesses") => obj
                ["witnesses"]
                .get(key)
                .map(|v| v.to_string())
                .ok_or_else(|| Error::Malformed(format!("piped report has no `{key}` witness"))),
            _ => Ok(text.to_string()),
        }
    }

    /// The input, or an object holding the listed witnesses of a piped report.
    pub fn fields(&mut self, keys: &[&str]) -> Result<String> {
        let text = self.text()?;
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        match value.as_object() {
            Some(obj) if obj.contains_key("command") && obj.contains_key("witnesses") => {
                let w = &obj["witnesses"];
                let picked: serde_json::Map<String, serde_json::Value> = keys
                    .iter()
                    .filter_map(|&k| w.get(k).map(|v| (k.to_string(), v.clone())))
                    .collect();
                Ok(serde_json::Value::Object(picked).to_string())
            }
            _ => Ok(text.to_string()),
        }
    }

    fn consumed(&self) -> &str {
        self.text.as_deref().unwrap_or("")
    }
}

/// Arguments that enter the input digest; the thread count is left out so
/// reports do not depend on it.
fn digest_args(args: impl Iterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_next = false;
    for a in args {
        if std::mem::take(&mut skip_next) {
            continue;
        }
        if a == "--threads" {
            skip_next = true;
        } else if !a.starts_with("--threads=") {
            out.push(a);
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
        {
            eprintln!("banlat: {e}");
        }
    }
    let args = digest_args(std::env::args().skip(1));
    let mut input = Input::new(cli.global.input.clone());
    let started = Instant::now();
    let (name, result) = match &cli.group {
        Group::Lattice(c) => commands::lattice::run(c, &cli.global, &mut input),
        Group::Ring(c) => commands::ring::run(c, &mut input),
        Group::Trace(c) => commands::staged::run_trace(c, &mut input),
        Group::Embed(c) => commands::staged::run_embed(c, &mut input),
        Group::Coord(c) => commands::coord::run(c, &mut input),
    };
    let (report, code) = finish(&name, digest(&args, input.consumed()), started, result);
    match cli.global.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string(&report).expect("reports serialize")
        ),
        Format::Text => print!("{}", render_text(&report)),
    }
    ExitCode::from(code as u8)
}
