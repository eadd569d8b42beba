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

//! Standard-vs-PCA comparison reports and rule table output.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::RelationId;
use crate::matcher::MatchCounts;
use crate::miner::{format_ratio, rank_by_pca, rank_by_std, RuleStats};
use crate::patterns::{template, Rule};

/// Decimal places for confidences and head coverage in output files.
pub const RATIO_PLACES: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Json,
}

/// A percentage with two decimal places, stored as hundredths of a percent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percentage(pub u32);

impl fmt::Display for Percentage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl Serialize for Percentage {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Percentage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let parse = || -> Option<Percentage> {
            let (int, frac) = text.split_once('.')?;
            if frac.len() != 2 {
                return None;
            }
            Some(Percentage(int.parse::<u32>().ok()? * 100 + frac.parse::<u32>().ok()?))
        };
        parse().ok_or_else(|| serde::de::Error::custom(format!("bad percentage {text:?}")))
    }
}

/// Split 100% across `counts` in hundredths so the parts sum exactly to
/// 100.00 (largest remainder; earlier buckets win ties). All zero when the
/// total is zero.
pub fn apportion_percentages<const N: usize>(counts: [u64; N]) -> [Percentage; N] {
    let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    let mut out = [Percentage(0); N];
    if total == 0 {
        return out;
    }
    let mut remainders = [(0u128, 0usize); N];
    let mut assigned = 0u128;
    for (i, &c) in counts.iter().enumerate() {
        let scaled = u128::from(c) * 10_000;
        out[i] = Percentage((scaled / total) as u32);
        assigned += scaled / total;
        remainders[i] = (scaled % total, i);
    }
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, i) in remainders.iter().take((10_000 - assigned) as usize) {
        out[i].0 += 1;
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total_rules: u64,
    pub std_greater: u64,
    pub pca_greater: u64,
    pub ties: u64,
    pub std_greater_pct: Percentage,
    pub pca_greater_pct: Percentage,
    pub ties_pct: Percentage,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub summary: ReportSummary,
    pub top_by_std: Vec<RuleStats>,
    pub top_by_pca: Vec<RuleStats>,
}

/// Classify every rule by exact comparison of its two confidences and keep
/// the `top_k` rules under each ranking.
pub fn build_report(stats: &[RuleStats], top_k: usize) -> ComparisonReport {
    let (mut std_greater, mut pca_greater, mut ties) = (0u64, 0u64, 0u64);
    for s in stats {
        match s.std_conf.cmp(&s.pca_conf) {
            std::cmp::Ordering::Greater => std_greater += 1,
            std::cmp::Ordering::Less => pca_greater += 1,
            std::cmp::Ordering::Equal => ties += 1,
        }
    }
    let [std_greater_pct, pca_greater_pct, ties_pct] = apportion_percentages([std_greater, pca_greater, ties]);

    let top = |cmp: fn(&RuleStats, &RuleStats) -> std::cmp::Ordering| {
        let mut v = stats.to_vec();
        v.sort_by(cmp);
        v.truncate(top_k);
        v
    };
    ComparisonReport {
        summary: ReportSummary {
            total_rules: stats.len() as u64,
            std_greater,
            pca_greater,
            ties,
            std_greater_pct,
            pca_greater_pct,
            ties_pct,
        },
        top_by_std: top(rank_by_std),
        top_by_pca: top(rank_by_pca),
    }
}

pub const TSV_HEADER: &str = "rule\tsupport\tbody_pairs\tpca_pairs\thead_size\thead_coverage\tstd_conf\tpca_conf";

fn write_tsv_rows<W: Write>(sink: &mut W, stats: &[RuleStats]) -> io::Result<()> {
    writeln!(sink, "{TSV_HEADER}")?;
    for s in stats {
        writeln!(
            sink,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.text,
            s.support,
            s.body_pairs,
            s.pca_pairs,
            s.head_size,
            format_ratio(s.head_coverage, RATIO_PLACES),
            format_ratio(s.std_conf, RATIO_PLACES),
            format_ratio(s.pca_conf, RATIO_PLACES)
        )?;
    }
    Ok(())
}

/// Write `report` to `sink`.
///
/// TSV: a `#`-prefixed summary block, the column header, then one row per
/// rule of the standard-confidence ranking. JSON: the whole report, with
/// exact integer counts and decimal strings for ratios.
pub fn write_report<W: Write>(report: &ComparisonReport, format: OutputFormat, mut sink: W) -> io::Result<()> {
    match format {
        OutputFormat::Tsv => {
            let s = &report.summary;
            writeln!(sink, "# total_rules\t{}", s.total_rules)?;
            writeln!(sink, "# std_greater\t{}\t{}", s.std_greater, s.std_greater_pct)?;
            writeln!(sink, "# pca_greater\t{}\t{}", s.pca_greater, s.pca_greater_pct)?;
            writeln!(sink, "# ties\t{}\t{}", s.ties, s.ties_pct)?;
            write_tsv_rows(&mut sink, &report.top_by_std)?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, report)?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}

#[derive(Serialize, Deserialize)]
struct RuleTable<T> {
    rules: T,
}

/// Write a plain rule table without a summary block.
pub fn write_rules<W: Write>(stats: &[RuleStats], format: OutputFormat, mut sink: W) -> io::Result<()> {
    match format {
        OutputFormat::Tsv => write_tsv_rows(&mut sink, stats)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, &RuleTable { rules: stats })?;
            writeln!(sink)?;
        }
    }
    sink.flush()
}

/// Parse a JSON rule table written by [`write_rules`].
pub fn read_rules_json(text: &str) -> serde_json::Result<Vec<RuleStats>> {
    Ok(serde_json::from_str::<RuleTable<Vec<RuleStats>>>(text)?.rules)
}

/// Wire form of [`RuleStats`].
#[derive(Serialize, Deserialize)]
struct RuleRecord {
    rule: String,
    template_id: u8,
    body_relations: Vec<RelationId>,
    head_relation: RelationId,
    support: u64,
    body_pairs: u64,
    pca_pairs: u64,
    head_size: u64,
    head_coverage: String,
    std_conf: String,
    pca_conf: String,
}

impl Serialize for RuleStats {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RuleRecord {
            rule: self.text.clone(),
            template_id: self.rule.template().id,
            body_relations: self.rule.body_relations().to_vec(),
            head_relation: self.rule.head_relation(),
            support: self.support,
            body_pairs: self.body_pairs,
            pca_pairs: self.pca_pairs,
            head_size: self.head_size,
            head_coverage: format_ratio(self.head_coverage, RATIO_PLACES),
            std_conf: format_ratio(self.std_conf, RATIO_PLACES),
            pca_conf: format_ratio(self.pca_conf, RATIO_PLACES),
        }
        .serialize(s)
    }
}

// Ratios are rebuilt from the integer counts; the decimal strings are for
// readers only.
impl<'de> Deserialize<'de> for RuleStats {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = RuleRecord::deserialize(d)?;
        let t =
            template(r.template_id).ok_or_else(|| D::Error::custom(format!("unknown template {}", r.template_id)))?;
        let rule = Rule::new(t, r.body_relations, r.head_relation).map_err(D::Error::custom)?;
        let counts = MatchCounts { support: r.support, body_pairs: r.body_pairs, pca_pairs: r.pca_pairs };
        RuleStats::from_counts(rule, r.rule, counts, r.head_size)
            .ok_or_else(|| D::Error::custom("rule record has a zero denominator"))
    }
}
