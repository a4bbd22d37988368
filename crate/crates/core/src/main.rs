use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use gstable::corpus;
use gstable::report::{self, AnalysisReport, SystemSpec, Verdict};
use gstable::spec::ProblemSpec;
use gstable::{Error, Result};

/// Stability, extension obstructions and Schreier systems for modules over GF(p).
#[derive(Parser)]
#[command(name = "gstable", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses of a problem file and emit a witness-carrying report.
    Analyze {
        spec: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest group that may be enumerated.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Re-certify every witness in a report without repeating searches.
    Verify { report: PathBuf },
    /// Run the bundled instances, verify each report and compare with the known verdicts.
    Corpus {
        /// Only instances whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Write each problem and its report to this directory.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check a standalone Schreier system, build its extension and decide splitting.
    Schreier { system: PathBuf },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn to_json<T: Serialize>(x: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Decided(b) => b.to_string(),
        Verdict::Open(s) => s.clone(),
    }
}

fn summary(r: &AnalysisReport) -> Vec<String> {
    let mut lines = vec![format!("{}: {} ms", if r.problem.name.is_empty() { "problem" } else { &r.problem.name }, r.timing_ms)];
    if let Some(s) = &r.stability {
        let mut line = format!("  g-stable: {}", verdict(&s.g_stable));
        if let Some(n) = &s.numerical {
            line += &format!(" (induced restriction = {} copies)", n.copies);
        }
        if s.pair_only == Some(true) {
            line += " (Q is stable, the pair is not)";
        }
        lines.push(line);
    }
    if let Some(o) = &r.obstruction {
        let route = serde_json::to_value(o.route).map(|v| v.as_str().unwrap_or_default().to_string()).unwrap_or_default();
        lines.push(format!("  obstruction: trivial = {} ({route}, dim J = {})", verdict(&o.trivial), o.cocycle_dim));
        if let Some(t) = &o.tensor {
            lines.push(format!("  tensor: dim Y = {}, {} layer(s)", t.y.first().map_or(0, |m| m.rows()), o.layers.len()));
        }
    }
    if let Some(e) = &r.extension {
        lines.push(format!("  extends to G: {}", verdict(&e.extends)));
    }
    if let Some(g) = &r.gr {
        match (&g.socle, &g.skipped) {
            (Some(s), _) => lines.push(format!("  gr: socle layers {:?}", s.layer_dims)),
            (None, Some(why)) => lines.push(format!("  gr: skipped ({why})")),
            _ => {}
        }
    }
    if let Some(s) = &r.schreier {
        lines.push(format!("  extension group: |U| = {}, order {}, split = {}", s.u_order, s.extension_order, verdict(&s.split)));
    }
    if let Some(o) = &r.observability {
        lines.push(format!("  split observable: {}", verdict(&o.observable)));
    }
    for (a, why) in &r.skipped {
        lines.push(format!("  {a}: skipped ({why})"));
    }
    lines
}

fn analyze(spec: &Path, out: Option<&Path>, seed: Option<u64>, cap: Option<usize>) -> Result<ExitCode> {
    let mut spec: ProblemSpec = read_json(spec)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(c) = cap {
        spec.caps.group = c;
    }
    let report = report::run(&spec)?;
    let json = to_json(&report)?;
    match out {
        Some(path) => {
            fs::write(path, json)?;
            for line in summary(&report) {
                println!("{line}");
            }
        }
        None => print!("{json}"),
    }
    Ok(if report.has_negative() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn verify(path: &Path) -> Result<ExitCode> {
    let report: AnalysisReport = read_json(path)?;
    let outcome = report::verify(&report)?;
    for c in &outcome.checks {
        match &c.detail {
            Some(d) => println!("{} {}: {d}", if c.ok { "ok  " } else { "FAIL" }, c.name),
            None => println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.name),
        }
    }
    Ok(if outcome.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_corpus(filter: Option<&str>, emit: Option<&Path>) -> Result<ExitCode> {
    if let Some(dir) = emit {
        fs::create_dir_all(dir)?;
    }
    let mut failed = 0;
    let mut total = 0;
    for inst in corpus::instances() {
        if filter.is_some_and(|f| !inst.name.contains(f)) {
            continue;
        }
        total += 1;
        let report = report::run(&inst.spec)?;
        let outcome = report::verify(&report)?;
        let stable = report.stability.as_ref().map(|s| s.g_stable.clone());
        let extends = report.extension.as_ref().map(|e| e.extends.clone());
        let matches = stable == inst.expected.stable.map(Verdict::Decided)
            && extends == inst.expected.extends.map(Verdict::Decided);
        let ok = matches && outcome.passed();
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:<32} stable={:<6} extends={:<10} verify={} {} ms",
            if ok { "ok  " } else { "FAIL" },
            inst.name,
            stable.as_ref().map_or("-".into(), verdict),
            extends.as_ref().map_or("-".into(), verdict),
            if outcome.passed() { "pass" } else { "fail" },
            report.timing_ms
        );
        if let Some(dir) = emit {
            fs::write(dir.join(format!("{}.problem.json", inst.name)), to_json(&inst.spec)?)?;
            fs::write(dir.join(format!("{}.report.json", inst.name)), to_json(&report)?)?;
        }
    }
    println!("{} of {total} instances as expected", total - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn schreier(path: &Path) -> Result<ExitCode> {
    let spec: SystemSpec = read_json(path)?;
    let out = report::analyze_system(&spec)?;
    print!("{}", to_json(&out)?);
    Ok(if out.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze { spec, out, seed, cap } => analyze(spec, out.as_deref(), *seed, *cap),
        Command::Verify { report } => verify(report),
        Command::Corpus { filter, emit } => run_corpus(filter.as_deref(), emit.as_deref()),
        Command::Schreier { system } => schreier(system),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let err = serde_json::json!({ "error": e.kind(), "message": e.to_string(), "path": e.path() });
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
