// Copyright 2026 The gpar-miner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for I/O or input parse
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgAction, Parser};
use thiserror::Error;

use crate::graph::{load_facts, FactFormat, GraphError};
use crate::miner::{enumerate_rules, parse_ratio, score_rules, MinerError, MiningConfig};
use crate::patterns::template;
use crate::report::{build_report, write_report, write_rules, OutputFormat};

#[derive(Debug, Parser)]
#[command(name = "gpar-miner", version, about = "Mine graph-pattern association rules from a TSV fact file")]
pub struct CliArgs {
    /// Fact file: subject TAB relation TAB object per line.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
    /// Minimum head coverage, as a decimal ("0.01") or fraction ("1/100").
    #[arg(long, default_value = "0.01")]
    pub min_hc: String,
    #[arg(long, default_value_t = 1)]
    pub min_support: u64,
    /// Comma-separated template ids in 1..=20, or "all".
    #[arg(long, default_value = "all")]
    pub templates: String,
    /// Require distinct pattern variables to bind distinct nodes.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub injective: bool,
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Prefix the rule table with a standard-vs-PCA comparison summary.
    #[arg(long)]
    pub report: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: String,
        #[source]
        source: GraphError,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Input { .. } => 2,
        }
    }
}

impl From<MinerError> for CliError {
    fn from(e: MinerError) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn parse_templates(text: &str) -> Result<Vec<u8>, CliError> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok((1..=20).collect());
    }
    let mut ids = Vec::new();
    for part in text.split(',') {
        let id: u8 =
            part.trim().parse().ok().filter(|&id| template(id).is_some()).ok_or_else(|| {
                CliError::Usage(format!("bad template id {:?}; expected 1..=20 or \"all\"", part.trim()))
            })?;
        ids.push(id);
    }
    ids.sort_unstable();
    ids.dedup();
    Ok(ids)
}

impl CliArgs {
    pub fn mining_config(&self) -> Result<MiningConfig, CliError> {
        let config = MiningConfig {
            min_head_coverage: parse_ratio(&self.min_hc)?,
            injective: self.injective,
            template_ids: parse_templates(&self.templates)?,
            min_support: self.min_support,
            top_k: self.top_k,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Run the miner for parsed arguments.
pub fn run(args: &CliArgs) -> Result<(), CliError> {
    let mut config = args.mining_config()?;
    let threads = match args.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {threads} worker threads: {e}")))?;

    let input = args.input.display().to_string();
    let timer = Instant::now();
    let file = File::open(&args.input).map_err(|source| CliError::Io { path: input.clone(), source })?;
    let graph = load_facts(BufReader::new(file), FactFormat::Tsv).map_err(|source| match source {
        GraphError::Io { source, .. } => CliError::Io { path: input.clone(), source },
        source => CliError::Input { path: input.clone(), source },
    })?;
    log::info!(
        "loaded {} facts, {} nodes, {} relations from {} in {:.2?}",
        graph.fact_count(),
        graph.node_count(),
        graph.relation_count(),
        input,
        timer.elapsed()
    );

    // The comparison summary covers every rule; top-k only trims the tables.
    let top_k = config.top_k;
    if args.report {
        config.top_k = None;
    }
    let timer = Instant::now();
    let collection = pool.install(|| enumerate_rules(&graph, &config))?;
    log::info!("enumerated {} candidate rules in {:.2?}", collection.len(), timer.elapsed());
    let timer = Instant::now();
    let stats = pool.install(|| score_rules(&graph, &collection, &config))?;
    log::info!("scored {} rules meeting the thresholds in {:.2?}", stats.len(), timer.elapsed());

    let (sink, target): (Box<dyn Write>, String) = match &args.output {
        Some(path) => {
            let file =
                File::create(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            (Box::new(BufWriter::new(file)), path.display().to_string())
        }
        None => (Box::new(BufWriter::new(io::stdout().lock())), "<stdout>".to_string()),
    };
    let written = if args.report {
        let report = build_report(&stats, top_k.unwrap_or(stats.len()));
        write_report(&report, args.format, sink)
    } else {
        write_rules(&stats, args.format, sink)
    };
    written.map_err(|source| CliError::Io { path: target.clone(), source })?;
    log::info!("wrote output to {target}");
    Ok(())
}

/// Parse `argv` and run; returns the process exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match CliArgs::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gpar-miner: {e}");
            e.exit_code()
        }
    }
}
