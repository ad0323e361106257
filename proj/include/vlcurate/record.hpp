#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlcurate/conllu.hpp"

namespace vlcurate {

struct OcrSpot {
  std::string text;
  double confidence = 0.0;  // in [0, 1]
};

// One image-text sample. Image pixels are not carried; OCR spots stand in for
// the image-side evidence the filters need.
struct CaptionRecord {
  std::string id;
  std::string caption;
  std::optional<DependencyParse> parse;
  std::vector<OcrSpot> spots;
  std::optional<double> alignment_score;  // in [0, 1]
};

// Parses one JSON line:
//   {"id": "...", "caption": "...", "conllu": "1\tA\t...", "spots":
//    [{"text": "...", "confidence": 0.9}], "alignment_score": 0.41}
// `conllu`, `spots` and `alignment_score` may be absent or null.
// Throws InputError (or ParseError for a bad embedded parse).
CaptionRecord parse_record(std::string_view line);

std::string to_json_line(const CaptionRecord& record);

}  // namespace vlcurate
