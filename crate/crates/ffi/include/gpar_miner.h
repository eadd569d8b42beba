#ifndef GPAR_MINER_H
#define GPAR_MINER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bit `i` selects template `i + 1`.
 */
#define GPAR_ALL_TEMPLATES ((1 << 20) - 1)

typedef enum GparFormat {
  GPAR_FORMAT_TSV = 0,
  GPAR_FORMAT_JSON = 1,
} GparFormat;

/**
 * Result codes shared by every fallible call.
 */
typedef enum GparStatus {
  GPAR_STATUS_OK = 0,
  GPAR_STATUS_NULL_ARGUMENT = 1,
  GPAR_STATUS_INVALID_UTF8 = 2,
  GPAR_STATUS_IO = 3,
  GPAR_STATUS_PARSE = 4,
  GPAR_STATUS_INVALID_CONFIG = 5,
  GPAR_STATUS_OUT_OF_RANGE = 6,
  GPAR_STATUS_UNKNOWN_RELATION = 7,
  GPAR_STATUS_PANIC = 99,
} GparStatus;

/**
 * Opaque loaded graph.
 */
typedef struct GparGraph GparGraph;

/**
 * Opaque ranked rule list.
 */
typedef struct GparRuleSet GparRuleSet;

/**
 * Mining parameters. Fill with [`gpar_config_default`] before editing.
 */
typedef struct GparMiningConfig {
  /**
   * Minimum head coverage as an exact fraction.
   */
  uint64_t min_hc_numer;
  uint64_t min_hc_denom;
  uint64_t min_support;
  /**
   * Nonzero for injective matching.
   */
  uint8_t injective;
  uint32_t template_mask;
  /**
   * Zero keeps every rule.
   */
  size_t top_k;
  /**
   * Zero uses the global thread pool.
   */
  size_t threads;
} GparMiningConfig;

/**
 * Counts and exact confidences of one mined rule.
 */
typedef struct GparRuleInfo {
  uint8_t template_id;
  uint64_t support;
  uint64_t body_pairs;
  uint64_t pca_pairs;
  uint64_t head_size;
  uint64_t head_coverage_numer;
  uint64_t head_coverage_denom;
  uint64_t std_conf_numer;
  uint64_t std_conf_denom;
  uint64_t pca_conf_numer;
  uint64_t pca_conf_denom;
} GparRuleInfo;

/**
 * Standard against PCA confidence over a whole rule set.
 * Percentages are in hundredths and sum to 10000 for a non-empty set.
 */
typedef struct GparReportSummary {
  uint64_t total_rules;
  uint64_t std_greater;
  uint64_t pca_greater;
  uint64_t ties;
  uint32_t std_greater_hundredths;
  uint32_t pca_greater_hundredths;
  uint32_t ties_hundredths;
} GparReportSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gpar_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *gpar_version(void);

/**
 * Load a tab-separated fact file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum GparStatus gpar_graph_load_file(const char *path, struct GparGraph **out);

/**
 * Load tab-separated facts from memory.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be writable.
 */
enum GparStatus gpar_graph_load_tsv(const uint8_t *data, size_t len, struct GparGraph **out);

/**
 * # Safety
 * `graph` must come from a `gpar_graph_load_*` call and not be freed twice.
 */
void gpar_graph_free(struct GparGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t gpar_graph_node_count(const struct GparGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t gpar_graph_relation_count(const struct GparGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t gpar_graph_fact_count(const struct GparGraph *graph);

/**
 * Number of facts carrying the named relation.
 *
 * # Safety
 * `graph` must be a live handle, `relation` NUL-terminated, `out` writable.
 */
enum GparStatus gpar_graph_relation_size(const struct GparGraph *graph,
                                         const char *relation,
                                         size_t *out);

/**
 * Defaults: head coverage 1/100, support 1, injective, all templates.
 *
 * # Safety
 * `out` must be writable.
 */
enum GparStatus gpar_config_default(struct GparMiningConfig *out);

/**
 * Mine ranked rules from `graph`.
 *
 * # Safety
 * `graph` and `config` must be live, `out` writable.
 */
enum GparStatus gpar_mine(const struct GparGraph *graph,
                          const struct GparMiningConfig *config,
                          struct GparRuleSet **out);

/**
 * # Safety
 * `rules` must come from [`gpar_mine`] and not be freed twice.
 */
void gpar_rules_free(struct GparRuleSet *rules);

/**
 * # Safety
 * `rules` must be null or a live handle.
 */
size_t gpar_rules_len(const struct GparRuleSet *rules);

/**
 * # Safety
 * `rules` must be a live handle and `out` writable.
 */
enum GparStatus gpar_rules_get(const struct GparRuleSet *rules,
                               size_t index,
                               struct GparRuleInfo *out);

/**
 * Rendered rule text, or null when `index` is out of range.
 * The string is owned by the rule set.
 *
 * # Safety
 * `rules` must be null or a live handle.
 */
const char *gpar_rules_text(const struct GparRuleSet *rules, size_t index);

/**
 * Write every rule with its counts and confidences.
 *
 * # Safety
 * `rules` must be live and `path` NUL-terminated.
 */
enum GparStatus gpar_rules_write(const struct GparRuleSet *rules,
                                 const char *path,
                                 enum GparFormat format);

/**
 * Write the confidence comparison report with `top_k` rules per ranking.
 *
 * # Safety
 * `rules` must be live and `path` NUL-terminated.
 */
enum GparStatus gpar_rules_write_report(const struct GparRuleSet *rules,
                                        const char *path,
                                        enum GparFormat format,
                                        size_t top_k);

/**
 * # Safety
 * `rules` must be live and `out` writable.
 */
enum GparStatus gpar_rules_summary(const struct GparRuleSet *rules, struct GparReportSummary *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GPAR_MINER_H */
