// Copyright 2026 The bellgem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `bellgem` command-line front end.
//!
//! Every subcommand writes one JSON document (sorted keys) to stdout and
//! diagnostics to stderr. Exit status is 0 when all requested checks pass,
//! 1 when a check fails, and 2 on bad input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bellgem::entangle::{n_tangle, verify_theorem2, verify_theorem2_sampled};
use bellgem::gem::{e_label_table, Bell, Gem, GemLevel, LazyGem};
use bellgem::synth::{registry_entry, search, FigureId, GateCounts};
use bellgem::{to_canonical_json, BasisIndex, Circuit, SparseState};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Highest level verified exhaustively; above it, checks are sampled.
const EXHAUSTIVE_MAX_LEVEL: u32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bellgem", version, about = "Bell gem bases: generation, exact verification, circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the canonical gem of a level as JSON.
    Gen {
        #[arg(long)]
        level: u32,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check orthonormality (theorem 1) and maximal tangle (theorem 2).
    Verify {
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Theorem::All)]
        theorem: Theorem,
        /// Seed for sampled mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample size for sampled mode.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Exact n-tangle of a state file.
    Tangle {
        #[arg(long)]
        state: PathBuf,
    },
    /// Run a circuit file on a basis input such as `0101`.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: String,
    },
    /// Re-run the circuit search for a figure and compare with the registry.
    Synth {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        figure: u8,
        /// Maximum gate count; the figure's default when absent.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Print a registered circuit and its verification record.
    Show {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        figure: u8,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    All,
}

/// Result of a subcommand: the JSON document and whether its checks passed.
struct Outcome {
    doc: Value,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { level, out } => gen(level, out.as_deref()),
        Command::Verify { level, theorem, seed, samples } => verify(level, theorem, seed, samples),
        Command::Tangle { state } => tangle(&state),
        Command::Simulate { circuit, input } => simulate(&circuit, &input),
        Command::Synth { figure, budget } => synth(figure, budget),
        Command::Show { figure } => show(figure),
    };
    match result.and_then(emit) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(outcome: Option<Outcome>) -> Result<bool> {
    let Some(Outcome { doc, passed }) = outcome else {
        return Ok(true);
    };
    let mut out = io::stdout().lock();
    writeln!(out, "{}", to_canonical_json(&doc)?)?;
    Ok(passed)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Streams `{"count","e_labels"?,"elements","level","qubits"}` without holding
/// level 4 in memory. Each element is `{"index","label","state"}`.
fn write_gem(w: &mut impl Write, level: GemLevel) -> Result<usize> {
    let count = if level.n() == 1 {
        let g = Gem::generate(1)?;
        write!(w, "{{\"count\":{},\"elements\":[", g.len())?;
        for (i, (s, b)) in g.elements().iter().zip(Bell::ALL).enumerate() {
            write_element(w, i, b.name(), s)?;
        }
        g.len()
    } else {
        let g = LazyGem::canonical(level.n())?;
        write!(w, "{{\"count\":{},", g.len())?;
        if level.n() == 2 {
            write!(w, "\"e_labels\":{},", to_canonical_json(&e_label_table(&g.materialize()?)?)?)?;
        }
        w.write_all(b"\"elements\":[")?;
        for i in 0..g.len() {
            write_element(w, i, &g.recipe(i)?.to_string(), &g.element(i)?)?;
        }
        g.len()
    };
    writeln!(w, "],\"level\":{},\"qubits\":{}}}", level.n(), level.qubits())?;
    w.flush()?;
    Ok(count)
}

fn write_element(w: &mut impl Write, index: usize, label: &str, s: &SparseState) -> Result<()> {
    if index > 0 {
        w.write_all(b",")?;
    }
    let record = json!({ "index": index, "label": label, "state": s });
    w.write_all(to_canonical_json(&record)?.as_bytes())?;
    Ok(())
}

fn gen(level: u32, out: Option<&Path>) -> Result<Option<Outcome>> {
    let level = GemLevel::new(level)?;
    match out {
        None => {
            let count = write_gem(&mut BufWriter::new(io::stdout().lock()), level)?;
            eprintln!("{count} elements on {} qubits", level.qubits());
            Ok(None)
        }
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            let count = write_gem(&mut BufWriter::new(file), level)?;
            eprintln!("wrote {count} elements on {} qubits to {}", level.qubits(), path.display());
            let doc = json!({
                "elements": count,
                "level": level.n(),
                "out": path.display().to_string(),
                "qubits": level.qubits(),
            });
            Ok(Some(Outcome { doc, passed: true }))
        }
    }
}

enum Source {
    Full(Gem),
    Sampled(LazyGem),
}

fn verify(level: u32, theorem: Theorem, seed: u64, samples: usize) -> Result<Option<Outcome>> {
    let level = GemLevel::new(level)?;
    let sampled = level.n() > EXHAUSTIVE_MAX_LEVEL;
    if sampled && samples == 0 {
        bail!("--samples must be positive in sampled mode");
    }
    let mut doc = json!({ "level": level.n(), "mode": if sampled { "sampled" } else { "exhaustive" } });
    let mut passed = true;
    let source = if sampled {
        eprintln!("level {} is checked on {samples} sampled elements (seed {seed})", level.n());
        doc["seed"] = json!(seed);
        doc["samples"] = json!(samples);
        Source::Sampled(LazyGem::canonical(level.n())?)
    } else {
        Source::Full(Gem::generate(level.n())?)
    };
    if theorem != Theorem::Two {
        let report = match &source {
            Source::Full(g) => g.verify_orthonormal(),
            Source::Sampled(g) => g.verify_orthonormal_sampled(samples, seed)?,
        };
        eprintln!("theorem 1: {} inner products, {} violations", report.inner_products, report.violations.len());
        passed &= report.passed;
        doc["theorem1"] = serde_json::to_value(&report)?;
    }
    if theorem != Theorem::One {
        let report = match &source {
            Source::Full(g) => verify_theorem2(g)?,
            Source::Sampled(g) => verify_theorem2_sampled(g, samples, seed)?,
        };
        eprintln!(
            "theorem 2: {} elements, {} not maximally entangled",
            report.elements_checked,
            report.non_maximal.len()
        );
        passed &= report.passed;
        doc["theorem2"] = serde_json::to_value(&report)?;
    }
    doc["passed"] = json!(passed);
    Ok(Some(Outcome { doc, passed }))
}

fn tangle(path: &Path) -> Result<Option<Outcome>> {
    let state: SparseState = read(path)?.parse().with_context(|| format!("malformed state file {}", path.display()))?;
    let tau = n_tangle(&state)?;
    let doc = json!({
        "maximal": tau.is_maximal(),
        "qubits": state.qubits(),
        "tau": tau.to_string(),
        "tau_decimal": tau.value().to_decimal_string(),
    });
    Ok(Some(Outcome { doc, passed: true }))
}

fn simulate(path: &Path, input: &str) -> Result<Option<Outcome>> {
    let circuit: Circuit = read(path)?.parse().with_context(|| format!("in circuit file {}", path.display()))?;
    let (index, width): (BasisIndex, u32) = BasisIndex::parse_bitstring(input)?;
    if width != circuit.width() {
        bail!("input {input} has {width} qubits but the circuit has {}", circuit.width());
    }
    let state = circuit.simulate(index)?;
    Ok(Some(Outcome { doc: serde_json::to_value(&state)?, passed: true }))
}

fn synth(figure: u8, budget: Option<usize>) -> Result<Option<Outcome>> {
    let figure = FigureId::new(figure)?;
    let budget = budget.unwrap_or(figure.default_budget());
    let registered = registry_entry(figure)?;
    let task = figure.task(&Gem::generate(2)?, budget)?;
    let outcome = search(&task)?;
    let mut doc = json!({
        "budget": budget,
        "figure": figure.number(),
        "stats": outcome.stats,
    });
    let passed = match outcome.circuit {
        None => {
            eprintln!("figure {figure}: not found within budget {budget}");
            doc["status"] = json!("not found within budget");
            doc["circuit"] = Value::Null;
            false
        }
        Some(c) => {
            let matches = c == registered.circuit;
            if !matches {
                eprintln!("figure {figure}: search result differs from the registered circuit");
            }
            doc["status"] = json!("found");
            doc["gate_counts"] = serde_json::to_value(GateCounts::of(&c))?;
            doc["circuit"] = json!(c.to_string());
            doc["matches_registry"] = json!(matches);
            matches
        }
    };
    Ok(Some(Outcome { doc, passed }))
}

fn show(figure: u8) -> Result<Option<Outcome>> {
    let entry = registry_entry(FigureId::new(figure)?)?;
    eprint!("{}", entry.circuit);
    let doc = json!({
        "circuit": entry.circuit.to_string(),
        "figure": entry.figure.number(),
        "record": entry.record(),
    });
    Ok(Some(Outcome { doc, passed: entry.report.passed }))
}
