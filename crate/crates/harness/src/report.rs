//! Result rows and their CSV form.

use std::io::Write;
use std::path::Path;

use crate::stats::{rel_dev, Summary};

pub const HEADER: [&str; 10] = [
    "experiment",
    "k",
    "n",
    "trials",
    "seed",
    "statistic",
    "mean",
    "stddev",
    "theory",
    "rel_dev",
];

/// One named statistic of one experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub k: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub statistic: String,
    pub mean: f64,
    pub stddev: f64,
    pub theory: Option<f64>,
    pub rel_dev: Option<f64>,
}

impl ResultRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        experiment: &str,
        k: usize,
        n: usize,
        trials: usize,
        seed: u64,
        statistic: &str,
        s: Summary,
        theory: Option<f64>,
    ) -> Self {
        ResultRow {
            experiment: experiment.to_string(),
            k,
            n,
            trials,
            seed,
            statistic: statistic.to_string(),
            mean: s.mean,
            stddev: s.stddev,
            theory,
            rel_dev: theory.and_then(|t| rel_dev(s.mean, t)),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes the header and rows, one `\n`-terminated line each.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.k.to_string(),
            r.n.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            r.statistic.clone(),
            num(r.mean),
            num(r.stddev),
            opt(r.theory),
            opt(r.rel_dev),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8")
}

/// [`write_csv`] into a file at `path`.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> anyhow::Result<()> {
    let f = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(f))?;
    Ok(())
}
