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

//! C ABI over the `gpar-miner` engine.
//!
//! Every entry point returns a [`GparStatus`] (or a plain value for pure
//! accessors) and never unwinds across the boundary. Handles are opaque and
//! must be released with the matching `*_free` function. On failure the
//! message for the calling thread is available from
//! [`gpar_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gpar_miner::report::{build_report, write_report, write_rules};
use gpar_miner::{load_facts, mine, FactFormat, Graph, GraphError, MinerError, MiningConfig, OutputFormat, RuleStats};
use num_rational::Ratio;

/// Result codes shared by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GparStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidConfig = 5,
    OutOfRange = 6,
    UnknownRelation = 7,
    Panic = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GparFormat {
    Tsv = 0,
    Json = 1,
}

impl From<GparFormat> for OutputFormat {
    fn from(f: GparFormat) -> Self {
        match f {
            GparFormat::Tsv => OutputFormat::Tsv,
            GparFormat::Json => OutputFormat::Json,
        }
    }
}

/// Bit `i` selects template `i + 1`.
pub const GPAR_ALL_TEMPLATES: u32 = (1 << 20) - 1;

/// Mining parameters. Fill with [`gpar_config_default`] before editing.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GparMiningConfig {
    /// Minimum head coverage as an exact fraction.
    pub min_hc_numer: u64,
    pub min_hc_denom: u64,
    pub min_support: u64,
    /// Nonzero for injective matching.
    pub injective: u8,
    pub template_mask: u32,
    /// Zero keeps every rule.
    pub top_k: usize,
    /// Zero uses the global thread pool.
    pub threads: usize,
}

/// Counts and exact confidences of one mined rule.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GparRuleInfo {
    pub template_id: u8,
    pub support: u64,
    pub body_pairs: u64,
    pub pca_pairs: u64,
    pub head_size: u64,
    pub head_coverage_numer: u64,
    pub head_coverage_denom: u64,
    pub std_conf_numer: u64,
    pub std_conf_denom: u64,
    pub pca_conf_numer: u64,
    pub pca_conf_denom: u64,
}

/// Standard against PCA confidence over a whole rule set.
/// Percentages are in hundredths and sum to 10000 for a non-empty set.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GparReportSummary {
    pub total_rules: u64,
    pub std_greater: u64,
    pub pca_greater: u64,
    pub ties: u64,
    pub std_greater_hundredths: u32,
    pub pca_greater_hundredths: u32,
    pub ties_hundredths: u32,
}

/// Opaque loaded graph.
pub struct GparGraph {
    graph: Graph,
}

/// Opaque ranked rule list.
pub struct GparRuleSet {
    rules: Vec<RuleStats>,
    texts: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(GparStatus, String);

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let status = match e {
            GraphError::Io { .. } => GparStatus::Io,
            GraphError::UnknownRelation(_) => GparStatus::UnknownRelation,
            _ => GparStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<MinerError> for Failure {
    fn from(e: MinerError) -> Self {
        Failure(GparStatus::InvalidConfig, e.to_string())
    }
}

fn io_failure(path: &str, e: std::io::Error) -> Failure {
    Failure(GparStatus::Io, format!("{path}: {e}"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> GparStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GparStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {message}"));
            GparStatus::Panic
        }
    }
}

unsafe fn non_null<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(GparStatus::NullArgument, format!("{name} is null")))
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(GparStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GparStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(GparStatus::NullArgument, "out is null".into()));
    }
    Ok(())
}

/// Message for the last failed call on this thread, or null.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gpar_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn gpar_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Load a tab-separated fact file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_load_file(path: *const c_char, out: *mut *mut GparGraph) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let path = c_str(path, "path")?;
        let file = File::open(path).map_err(|e| io_failure(path, e))?;
        let graph = load_facts(BufReader::new(file), FactFormat::Tsv)?;
        *out = Box::into_raw(Box::new(GparGraph { graph }));
        Ok(())
    })
}

/// Load tab-separated facts from memory.
///
/// # Safety
/// `data` must point to `len` readable bytes and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_load_tsv(data: *const u8, len: usize, out: *mut *mut GparGraph) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let bytes = if len == 0 { &[][..] } else { std::slice::from_raw_parts(non_null(data, "data")?, len) };
        let graph = load_facts(bytes, FactFormat::Tsv)?;
        *out = Box::into_raw(Box::new(GparGraph { graph }));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from a `gpar_graph_load_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_free(graph: *mut GparGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_node_count(graph: *const GparGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_relation_count(graph: *const GparGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.relation_count())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_fact_count(graph: *const GparGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.fact_count())
}

/// Number of facts carrying the named relation.
///
/// # Safety
/// `graph` must be a live handle, `relation` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_graph_relation_size(
    graph: *const GparGraph,
    relation: *const c_char,
    out: *mut usize,
) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let g = &non_null(graph, "graph")?.graph;
        let name = c_str(relation, "relation")?;
        let r = g
            .relation_id(name)
            .ok_or_else(|| Failure(GparStatus::UnknownRelation, format!("unknown relation {name}")))?;
        *out = g.relation_size(r)?;
        Ok(())
    })
}

/// Defaults: head coverage 1/100, support 1, injective, all templates.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_config_default(out: *mut GparMiningConfig) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let d = MiningConfig::default();
        *out = GparMiningConfig {
            min_hc_numer: *d.min_head_coverage.numer(),
            min_hc_denom: *d.min_head_coverage.denom(),
            min_support: d.min_support,
            injective: u8::from(d.injective),
            template_mask: GPAR_ALL_TEMPLATES,
            top_k: 0,
            threads: 0,
        };
        Ok(())
    })
}

fn to_config(c: &GparMiningConfig) -> Result<MiningConfig, Failure> {
    if c.min_hc_denom == 0 {
        return Err(Failure(GparStatus::InvalidConfig, "min head coverage denominator is zero".into()));
    }
    if c.template_mask & !GPAR_ALL_TEMPLATES != 0 {
        return Err(Failure(
            GparStatus::InvalidConfig,
            format!("template mask {:#x} has bits above 20", c.template_mask),
        ));
    }
    let config = MiningConfig {
        min_head_coverage: Ratio::new(c.min_hc_numer, c.min_hc_denom),
        injective: c.injective != 0,
        template_ids: (1..=20u8).filter(|id| c.template_mask & (1 << (id - 1)) != 0).collect(),
        min_support: c.min_support,
        top_k: (c.top_k > 0).then_some(c.top_k),
    };
    config.validate()?;
    Ok(config)
}

/// Mine ranked rules from `graph`.
///
/// # Safety
/// `graph` and `config` must be live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_mine(
    graph: *const GparGraph,
    config: *const GparMiningConfig,
    out: *mut *mut GparRuleSet,
) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let g = &non_null(graph, "graph")?.graph;
        let raw = non_null(config, "config")?;
        let config = to_config(raw)?;
        let rules = if raw.threads == 0 {
            mine(g, &config)?
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(raw.threads)
                .build()
                .map_err(|e| Failure(GparStatus::InvalidConfig, e.to_string()))?;
            pool.install(|| mine(g, &config))?
        };
        let texts = rules.iter().map(|s| CString::new(s.text.as_str()).unwrap_or_default()).collect();
        *out = Box::into_raw(Box::new(GparRuleSet { rules, texts }));
        Ok(())
    })
}

/// # Safety
/// `rules` must come from [`gpar_mine`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_free(rules: *mut GparRuleSet) {
    if !rules.is_null() {
        drop(Box::from_raw(rules));
    }
}

/// # Safety
/// `rules` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_len(rules: *const GparRuleSet) -> usize {
    rules.as_ref().map_or(0, |r| r.rules.len())
}

/// # Safety
/// `rules` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_get(rules: *const GparRuleSet, index: usize, out: *mut GparRuleInfo) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let set = non_null(rules, "rules")?;
        let s = set.rules.get(index).ok_or_else(|| {
            Failure(GparStatus::OutOfRange, format!("index {index} out of range for {} rules", set.rules.len()))
        })?;
        *out = GparRuleInfo {
            template_id: s.rule.template().id,
            support: s.support,
            body_pairs: s.body_pairs,
            pca_pairs: s.pca_pairs,
            head_size: s.head_size,
            head_coverage_numer: *s.head_coverage.numer(),
            head_coverage_denom: *s.head_coverage.denom(),
            std_conf_numer: *s.std_conf.numer(),
            std_conf_denom: *s.std_conf.denom(),
            pca_conf_numer: *s.pca_conf.numer(),
            pca_conf_denom: *s.pca_conf.denom(),
        };
        Ok(())
    })
}

/// Rendered rule text, or null when `index` is out of range.
/// The string is owned by the rule set.
///
/// # Safety
/// `rules` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_text(rules: *const GparRuleSet, index: usize) -> *const c_char {
    rules.as_ref().and_then(|r| r.texts.get(index)).map_or(ptr::null(), |c| c.as_ptr())
}

fn write_to(path: &str, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), Failure> {
    let file = File::create(Path::new(path)).map_err(|e| io_failure(path, e))?;
    let mut sink = BufWriter::new(file);
    f(&mut sink).and_then(|_| sink.flush()).map_err(|e| io_failure(path, e))
}

/// Write every rule with its counts and confidences.
///
/// # Safety
/// `rules` must be live and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_write(
    rules: *const GparRuleSet,
    path: *const c_char,
    format: GparFormat,
) -> GparStatus {
    guard(|| {
        let set = non_null(rules, "rules")?;
        let path = c_str(path, "path")?;
        write_to(path, |w| write_rules(&set.rules, format.into(), w))
    })
}

/// Write the confidence comparison report with `top_k` rules per ranking.
///
/// # Safety
/// `rules` must be live and `path` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_write_report(
    rules: *const GparRuleSet,
    path: *const c_char,
    format: GparFormat,
    top_k: usize,
) -> GparStatus {
    guard(|| {
        let set = non_null(rules, "rules")?;
        let path = c_str(path, "path")?;
        let report = build_report(&set.rules, top_k);
        write_to(path, |w| write_report(&report, format.into(), w))
    })
}

/// # Safety
/// `rules` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gpar_rules_summary(rules: *const GparRuleSet, out: *mut GparReportSummary) -> GparStatus {
    guard(|| {
        check_out(out)?;
        let set = non_null(rules, "rules")?;
        let s = build_report(&set.rules, 0).summary;
        *out = GparReportSummary {
            total_rules: s.total_rules,
            std_greater: s.std_greater,
            pca_greater: s.pca_greater,
            ties: s.ties,
            std_greater_hundredths: s.std_greater_pct.0,
            pca_greater_hundredths: s.pca_greater_pct.0,
            ties_hundredths: s.ties_pct.0,
        };
        Ok(())
    })
}
