#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vlcurate/record.hpp"

namespace vlcurate {

enum class Reason {
  kPass,
  kFailComplexity,
  kFailAction,
  kFailTextspot,
  kFailScore,
  kFailNoParse,
};

std::string_view reason_name(Reason reason);

struct FilterDecision {
  bool keep = true;
  Reason reason = Reason::kPass;

  static FilterDecision pass() { return {true, Reason::kPass}; }
  static FilterDecision fail(Reason r) { return {false, r}; }
  friend bool operator==(const FilterDecision&, const FilterDecision&) = default;
};

inline constexpr std::size_t kDefaultMinComplexity = 1;
inline constexpr double kDefaultSpotConfidence = 0.8;
inline constexpr std::size_t kDefaultSpotChars = 5;
inline constexpr double kDefaultMinScore = 0.35;

// Keeps records whose caption complexity is at least `min_level`. An empty
// caption counts as level 0 even without a parse.
FilterDecision complexity_filter(const CaptionRecord& record,
                                 std::size_t min_level = kDefaultMinComplexity);

// Keeps records whose caption contains at least one action.
FilterDecision action_filter(const CaptionRecord& record);

// Drops a record when one spot with confidence >= conf_threshold shares a
// run of at least min_match_chars normalized characters with the caption.
FilterDecision textspot_filter(const CaptionRecord& record,
                               double conf_threshold = kDefaultSpotConfidence,
                               std::size_t min_match_chars = kDefaultSpotChars);

// Keeps records with alignment_score >= min_score; records without a score
// pass.
FilterDecision score_filter(const CaptionRecord& record,
                            double min_score = kDefaultMinScore);

// ASCII lowercase with every non-alphanumeric byte removed.
std::string normalize_for_spotting(std::string_view text);

// True if some window of `min_chars` consecutive characters of `spot`
// occurs in `caption`. Both arguments are already normalized.
bool spot_overlaps(std::string_view spot, std::string_view caption,
                   std::size_t min_chars);

enum class FilterKind { kScore, kComplexity, kAction, kTextspot };

std::string_view filter_name(FilterKind kind);

// Parses "score,c,a,t" (long names complexity/action/textspot also accepted).
// An empty string yields no filters. Throws InputError on unknown or
// repeated names.
std::vector<FilterKind> parse_filter_list(std::string_view text);

struct FilterParams {
  std::size_t min_complexity = kDefaultMinComplexity;
  double spot_confidence = kDefaultSpotConfidence;
  std::size_t spot_chars = kDefaultSpotChars;
  double min_score = kDefaultMinScore;
};

struct PipelineConfig {
  std::vector<FilterKind> filters;
  FilterParams params;
  std::size_t threads = 1;
};

FilterDecision apply_filter(FilterKind kind, const CaptionRecord& record,
                            const FilterParams& params);

struct PipelineOutcome {
  FilterDecision decision;
  // Position in PipelineConfig::filters of the filter that dropped the record.
  std::optional<std::size_t> failed_filter;
};

// Runs the enabled filters in order and stops at the first failure.
PipelineOutcome evaluate(const CaptionRecord& record, const PipelineConfig& config);

struct FilterCounts {
  std::size_t examined = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

struct FilterStats {
  std::size_t lines = 0;       // non-blank input lines
  std::size_t malformed = 0;   // lines that did not parse as a record
  std::size_t kept = 0;        // records emitted
  std::vector<FilterKind> filters;
  std::vector<FilterCounts> per_filter;  // parallel to `filters`

  std::size_t valid() const { return lines - malformed; }
  std::size_t dropped() const;
  // kept / valid records; 1 for an empty stream.
  double retained_fraction() const;
  void merge(const FilterStats& other);
};

// Reads line-delimited records, writes the lines of kept records verbatim and
// in input order. Malformed lines are tallied and skipped.
FilterStats run_pipeline(std::istream& in, std::ostream& out,
                         const PipelineConfig& config);

// Tab-separated report: filter, examined, kept, dropped, pct_of_full.
void write_stats(std::ostream& out, const FilterStats& stats);

}  // namespace vlcurate
