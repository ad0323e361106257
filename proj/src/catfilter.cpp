#include "vlcurate/catfilter.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <thread>

#include "vlcurate/semgraph.hpp"

namespace vlcurate {

namespace {

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

struct LineResult {
  bool malformed = false;
  PipelineOutcome outcome;
};

constexpr std::size_t kChunkLines = 4096;

}  // namespace

std::string_view reason_name(Reason reason) {
  switch (reason) {
    case Reason::kPass: return "PASS";
    case Reason::kFailComplexity: return "FAIL_COMPLEXITY";
    case Reason::kFailAction: return "FAIL_ACTION";
    case Reason::kFailTextspot: return "FAIL_TEXTSPOT";
    case Reason::kFailScore: return "FAIL_SCORE";
    case Reason::kFailNoParse: return "FAIL_NO_PARSE";
  }
  return "?";
}

FilterDecision complexity_filter(const CaptionRecord& record, std::size_t min_level) {
  std::size_t level = 0;
  if (!blank(record.caption)) {
    if (!record.parse) return FilterDecision::fail(Reason::kFailNoParse);
    level = complexity(build_graph(*record.parse));
  }
  return level >= min_level ? FilterDecision::pass()
                            : FilterDecision::fail(Reason::kFailComplexity);
}

FilterDecision action_filter(const CaptionRecord& record) {
  if (!record.parse) {
    return blank(record.caption) ? FilterDecision::fail(Reason::kFailAction)
                                 : FilterDecision::fail(Reason::kFailNoParse);
  }
  return action_count(build_graph(*record.parse)) >= 1
             ? FilterDecision::pass()
             : FilterDecision::fail(Reason::kFailAction);
}

std::string normalize_for_spotting(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool spot_overlaps(std::string_view spot, std::string_view caption,
                   std::size_t min_chars) {
  if (min_chars == 0) return true;
  if (spot.size() < min_chars || caption.size() < min_chars) return false;
  // Any longer common run contains a common run of exactly min_chars.
  for (std::size_t i = 0; i + min_chars <= spot.size(); ++i) {
    if (caption.find(spot.substr(i, min_chars)) != std::string_view::npos) return true;
  }
  return false;
}

FilterDecision textspot_filter(const CaptionRecord& record, double conf_threshold,
                               std::size_t min_match_chars) {
  if (record.spots.empty()) return FilterDecision::pass();
  const std::string caption = normalize_for_spotting(record.caption);
  for (const OcrSpot& spot : record.spots) {
    if (spot.confidence < conf_threshold) continue;
    if (spot_overlaps(normalize_for_spotting(spot.text), caption, min_match_chars)) {
      return FilterDecision::fail(Reason::kFailTextspot);
    }
  }
  return FilterDecision::pass();
}

FilterDecision score_filter(const CaptionRecord& record, double min_score) {
  if (!record.alignment_score) return FilterDecision::pass();
  return *record.alignment_score >= min_score ? FilterDecision::pass()
                                              : FilterDecision::fail(Reason::kFailScore);
}

std::string_view filter_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::kScore: return "score";
    case FilterKind::kComplexity: return "complexity";
    case FilterKind::kAction: return "action";
    case FilterKind::kTextspot: return "textspot";
  }
  return "?";
}

std::vector<FilterKind> parse_filter_list(std::string_view text) {
  std::vector<FilterKind> out;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    std::string name(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view() : text.substr(comma + 1);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name.empty()) continue;
    FilterKind kind;
    if (name == "score") {
      kind = FilterKind::kScore;
    } else if (name == "c" || name == "complexity") {
      kind = FilterKind::kComplexity;
    } else if (name == "a" || name == "action") {
      kind = FilterKind::kAction;
    } else if (name == "t" || name == "textspot") {
      kind = FilterKind::kTextspot;
    } else {
      throw InputError("unknown filter '" + name + "'");
    }
    if (std::find(out.begin(), out.end(), kind) != out.end()) {
      throw InputError("filter '" + name + "' listed twice");
    }
    out.push_back(kind);
  }
  return out;
}

FilterDecision apply_filter(FilterKind kind, const CaptionRecord& record,
                            const FilterParams& params) {
  switch (kind) {
    case FilterKind::kScore: return score_filter(record, params.min_score);
    case FilterKind::kComplexity: return complexity_filter(record, params.min_complexity);
    case FilterKind::kAction: return action_filter(record);
    case FilterKind::kTextspot:
      return textspot_filter(record, params.spot_confidence, params.spot_chars);
  }
  return FilterDecision::pass();
}

PipelineOutcome evaluate(const CaptionRecord& record, const PipelineConfig& config) {
  for (std::size_t i = 0; i < config.filters.size(); ++i) {
    const FilterDecision d = apply_filter(config.filters[i], record, config.params);
    if (!d.keep) return {d, i};
  }
  return {FilterDecision::pass(), std::nullopt};
}

std::size_t FilterStats::dropped() const {
  std::size_t total = 0;
  for (const auto& c : per_filter) total += c.dropped;
  return total;
}

double FilterStats::retained_fraction() const {
  return valid() == 0 ? 1.0
                      : static_cast<double>(kept) / static_cast<double>(valid());
}

void FilterStats::merge(const FilterStats& other) {
  if (per_filter.empty() && filters.empty()) {
    filters = other.filters;
    per_filter.assign(other.per_filter.size(), {});
  }
  lines += other.lines;
  malformed += other.malformed;
  kept += other.kept;
  for (std::size_t i = 0; i < per_filter.size() && i < other.per_filter.size(); ++i) {
    per_filter[i].examined += other.per_filter[i].examined;
    per_filter[i].kept += other.per_filter[i].kept;
    per_filter[i].dropped += other.per_filter[i].dropped;
  }
}

FilterStats run_pipeline(std::istream& in, std::ostream& out,
                         const PipelineConfig& config) {
  FilterStats total;
  total.filters = config.filters;
  total.per_filter.assign(config.filters.size(), {});
  const std::size_t threads = std::max<std::size_t>(1, config.threads);

  std::vector<std::string> chunk;
  std::vector<LineResult> results;

  auto classify = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i].outcome = evaluate(parse_record(chunk[i]), config);
      } catch (const InputError&) {
        results[i].malformed = true;
      }
    }
  };

  auto flush = [&] {
    results.assign(chunk.size(), {});
    if (threads == 1 || chunk.size() < 2 * threads) {
      classify(0, chunk.size());
    } else {
      // Each worker owns a disjoint slice of `results`.
      std::vector<std::thread> workers;
      const std::size_t per = (chunk.size() + threads - 1) / threads;
      for (std::size_t begin = 0; begin < chunk.size(); begin += per) {
        workers.emplace_back(classify, begin, std::min(chunk.size(), begin + per));
      }
      for (auto& w : workers) w.join();
    }
    FilterStats part;
    part.filters = config.filters;
    part.per_filter.assign(config.filters.size(), {});
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      ++part.lines;
      if (results[i].malformed) {
        ++part.malformed;
        continue;
      }
      const auto& outcome = results[i].outcome;
      const std::size_t reached =
          outcome.failed_filter ? *outcome.failed_filter + 1 : config.filters.size();
      for (std::size_t f = 0; f < reached; ++f) {
        ++part.per_filter[f].examined;
        ++part.per_filter[f].kept;
      }
      if (outcome.failed_filter) {
        --part.per_filter[*outcome.failed_filter].kept;
        ++part.per_filter[*outcome.failed_filter].dropped;
      } else {
        ++part.kept;
        out << chunk[i] << '\n';
      }
    }
    total.merge(part);
    chunk.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    chunk.push_back(std::move(line));
    if (chunk.size() == kChunkLines) flush();
  }
  flush();
  return total;
}

void write_stats(std::ostream& out, const FilterStats& stats) {
  const double full = static_cast<double>(stats.valid());
  auto pct = [&](std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f",
                  full == 0 ? 100.0 : 100.0 * static_cast<double>(n) / full);
    return std::string(buf);
  };
  out << "filter\texamined\tkept\tdropped\tpct_of_full\n";
  out << "read\t" << stats.lines << '\t' << stats.valid() << '\t' << stats.malformed
      << '\t' << pct(stats.valid()) << '\n';
  for (std::size_t i = 0; i < stats.filters.size(); ++i) {
    const FilterCounts& c = stats.per_filter[i];
    out << filter_name(stats.filters[i]) << '\t' << c.examined << '\t' << c.kept << '\t'
        << c.dropped << '\t' << pct(c.kept) << '\n';
  }
}

}  // namespace vlcurate
