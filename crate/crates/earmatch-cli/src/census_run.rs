use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;

use earmatch::census::{run_census, CensusConfig, CensusSummary};

use crate::CliError;

pub struct CensusArgs {
    pub max_n: usize,
    pub k: usize,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub max_m: Option<usize>,
}

fn merge(into: &mut CensusSummary, part: CensusSummary) {
    into.records += part.records;
    into.nodes += part.nodes;
    into.canonical_calls += part.canonical_calls;
    for (acc, add) in into.counts.iter_mut().zip(part.counts) {
        acc.records += add.records;
        acc.matching_covered += add.matching_covered;
        acc.minimal += add.minimal;
        for (h, v) in acc.h.iter_mut().zip(add.h) {
            *h += v;
        }
        for (e, v) in acc.extendable.iter_mut().zip(add.extendable) {
            *e += v;
        }
        for (e, v) in acc.minimal_extendable.iter_mut().zip(add.minimal_extendable) {
            *e += v;
        }
    }
    into.violations.extend(part.violations);
    into.conjecture_notes.extend(part.conjecture_notes);
}

fn config(args: &CensusArgs, shard_index: usize, shard_count: usize) -> CensusConfig {
    let mut cfg = CensusConfig::new(args.max_n, args.k);
    cfg.max_m = args.max_m;
    cfg.shard_index = shard_index;
    cfg.shard_count = shard_count;
    cfg.fail_fast = false;
    cfg
}

/// Runs the census, streaming one record per line into `<out>/records.jsonl`
/// when an output directory is given, and prints the summary document to
/// standard output. With several jobs the generation tree is split into one
/// shard per worker and the lines interleave in arrival order.
pub fn run(args: &CensusArgs) -> Result<ExitCode, CliError> {
    let mut writer: Option<BufWriter<fs::File>> = match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|err| CliError::io(dir, err))?;
            let path = dir.join("records.jsonl");
            let file = fs::File::create(&path).map_err(|err| CliError::io(&path, err))?;
            Some(BufWriter::new(file))
        }
        None => None,
    };
    let jobs = args.jobs.max(1);
    let summary = if jobs == 1 {
        let mut line_error = None;
        let summary = run_census(&config(args, 0, 1), |record, _| {
            if let (Some(w), None) = (writer.as_mut(), &line_error) {
                let result = serde_json::to_string(record)
                    .map_err(|e| CliError::Message(e.to_string()))
                    .and_then(|line| {
                        writeln!(w, "{line}").map_err(|err| CliError::Message(err.to_string()))
                    });
                if let Err(err) = result {
                    line_error = Some(err);
                }
            }
        })
        .map_err(|e| CliError::Message(e.to_string()))?;
        if let Some(err) = line_error {
            return Err(err);
        }
        summary
    } else {
        let (tx, rx) = mpsc::channel::<String>();
        let mut workers = Vec::new();
        for shard in 0..jobs {
            let cfg = config(args, shard, jobs);
            let tx = tx.clone();
            let emit = writer.is_some();
            workers.push(thread::spawn(move || {
                run_census(&cfg, |record, _| {
                    if emit {
                        let line = serde_json::to_string(record).expect("record serializes");
                        tx.send(line).expect("collector outlives workers");
                    }
                })
            }));
        }
        drop(tx);
        if let Some(w) = writer.as_mut() {
            for line in rx {
                writeln!(w, "{line}").map_err(|err| CliError::Message(err.to_string()))?;
            }
        }
        let mut merged: Option<CensusSummary> = None;
        for worker in workers {
            let part = worker
                .join()
                .map_err(|_| CliError::Message("census worker panicked".into()))?
                .map_err(|e| CliError::Message(e.to_string()))?;
            match merged.as_mut() {
                Some(summary) => merge(summary, part),
                None => merged = Some(part),
            }
        }
        merged.expect("at least one worker ran")
    };
    if let Some(w) = writer.as_mut() {
        w.flush().map_err(|err| CliError::Message(err.to_string()))?;
    }
    let mut doc = serde_json::to_value(&summary).map_err(|e| CliError::Message(e.to_string()))?;
    doc["schema"] = serde_json::json!(1);
    let rendered =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Message(e.to_string()))?;
    if let Some(dir) = &args.out {
        let path = dir.join("summary.json");
        fs::write(&path, format!("{rendered}\n")).map_err(|err| CliError::io(&path, err))?;
    }
    println!("{rendered}");
    eprintln!(
        "records {}  nodes {}  violations {}  notes {}",
        summary.records,
        summary.nodes,
        summary.violations.len(),
        summary.conjecture_notes.len()
    );
    Ok(if summary.violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
