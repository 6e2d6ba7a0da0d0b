use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use rigidrel::kernel::tuple::power;
use rigidrel::kernel::{PartialUnaryFn, Relation};
use rigidrel::rigidity::is_hereditarily_ell_rigid;
use serde::{Deserialize, Serialize};

use crate::Outcome;

/// Largest `k^h` the census accepts: `2^16` relations.
pub const MAX_CELLS: usize = 16;
const CHUNK: u64 = 4096;

#[derive(Debug, clap::Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    ell: usize,
    /// JSONL destination; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary destination. Defaults to standard output when --out is
    /// given, standard error otherwise.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Start at this relation rank, keeping earlier records already in --out.
    #[arg(long)]
    resume_from: Option<u64>,
    /// Add elapsed_micros to each record. Output is then not reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub k: usize,
    pub h: usize,
    pub ell: usize,
    pub relation_rank: u64,
    pub verdict: bool,
    pub failing_function: Option<PartialUnaryFn>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_micros: Option<u64>,
}

#[derive(Debug, Default, Serialize)]
struct Summary {
    k: usize,
    h: usize,
    ell: usize,
    relations: u64,
    rigid: u64,
    not_rigid: u64,
}

impl Summary {
    fn add(&mut self, verdict: bool) {
        self.relations += 1;
        if verdict {
            self.rigid += 1;
        } else {
            self.not_rigid += 1;
        }
    }
}

fn classify_one(args: &ClassifyArgs, rank: u64) -> rigidrel::Result<ClassificationRecord> {
    let start = args.timings.then(Instant::now);
    let rho = Relation::from_relation_rank(args.k, args.h, rank)?;
    let report = is_hereditarily_ell_rigid(&rho, args.ell)?;
    Ok(ClassificationRecord {
        k: args.k,
        h: args.h,
        ell: args.ell,
        relation_rank: rank,
        verdict: report.verdict,
        failing_function: report.failing_function,
        elapsed_micros: start.map(|s| s.elapsed().as_micros() as u64),
    })
}

/// Records already in `path` with rank below `from`, rewritten in place.
fn keep_prefix(path: &PathBuf, from: u64, summary: &mut Summary) -> io::Result<()> {
    let Ok(file) = File::open(path) else {
        return Ok(());
    };
    let mut kept = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        let rec: ClassificationRecord = serde_json::from_str(&line)?;
        if rec.relation_rank < from {
            summary.add(rec.verdict);
            kept.push(line);
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    for line in kept {
        writeln!(w, "{line}")?;
    }
    w.flush()
}

pub fn run(args: &ClassifyArgs) -> Outcome {
    let cells = power(args.k, args.h)
        .filter(|&c| c <= MAX_CELLS)
        .ok_or_else(|| {
            format!(
                "classify needs k^h <= {MAX_CELLS}, got k = {}, h = {}",
                args.k, args.h
            )
        })?;
    if args.ell == 0 || args.ell > args.k {
        return Err(format!("ell = {} is out of range for k = {}", args.ell, args.k).into());
    }
    let end: u64 = 1 << cells;
    let start = args.resume_from.unwrap_or(1).max(1);
    let mut summary = Summary {
        k: args.k,
        h: args.h,
        ell: args.ell,
        ..Summary::default()
    };

    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => {
            if args.resume_from.is_some() {
                keep_prefix(path, start, &mut summary)?;
                Box::new(BufWriter::new(
                    fs::OpenOptions::new()
                        .append(true)
                        .create(true)
                        .open(path)?,
                ))
            } else {
                Box::new(BufWriter::new(File::create(path)?))
            }
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };

    let mut lo = start;
    while lo < end {
        let hi = (lo + CHUNK).min(end);
        let records: Vec<ClassificationRecord> = (lo..hi)
            .into_par_iter()
            .map(|r| classify_one(args, r))
            .collect::<rigidrel::Result<_>>()?;
        for rec in &records {
            summary.add(rec.verdict);
            serde_json::to_writer(&mut sink, rec)?;
            sink.write_all(b"\n")?;
        }
        eprintln!("classified ranks {lo}..{hi} of {end}");
        lo = hi;
    }
    sink.flush()?;
    drop(sink);

    let summary_sink: Box<dyn Write> = match (&args.summary, &args.out) {
        (Some(path), _) => Box::new(File::create(path)?),
        (None, Some(_)) => Box::new(io::stdout().lock()),
        (None, None) => Box::new(io::stderr().lock()),
    };
    let mut w = csv::Writer::from_writer(summary_sink);
    w.serialize(&summary)?;
    w.flush()?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_omits_timing_unless_present() {
        let rec = ClassificationRecord {
            k: 2,
            h: 2,
            ell: 2,
            relation_rank: 11,
            verdict: true,
            failing_function: None,
            elapsed_micros: None,
        };
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"k":2,"h":2,"ell":2,"relation_rank":11,"verdict":true,"failing_function":null}"#
        );
        let back: ClassificationRecord =
            serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        assert_eq!(back.relation_rank, 11);
    }

    #[test]
    fn summary_counts_verdicts() {
        let mut s = Summary::default();
        for v in [true, false, false] {
            s.add(v);
        }
        assert_eq!((s.relations, s.rigid, s.not_rigid), (3, 1, 2));
    }
}
