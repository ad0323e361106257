#include "vlcurate/record.hpp"

#include <json.hpp>

namespace vlcurate {

namespace {

using nlohmann::json;

double unit_interval(const json& value, const char* what) {
  if (!value.is_number()) throw InputError(std::string(what) + " must be a number");
  const double v = value.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string(what) + " must lie in [0, 1]");
  }
  return v;
}

}  // namespace

CaptionRecord parse_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("record must be a JSON object");

  CaptionRecord rec;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    throw InputError("record needs a non-empty string id");
  }
  rec.id = id->get<std::string>();

  const auto caption = j.find("caption");
  if (caption != j.end() && !caption->is_null()) {
    if (!caption->is_string()) throw InputError("caption must be a string");
    rec.caption = caption->get<std::string>();
  }

  const auto conllu = j.find("conllu");
  if (conllu != j.end() && !conllu->is_null()) {
    if (!conllu->is_string()) throw InputError("conllu must be a string");
    rec.parse = parse_conllu(conllu->get_ref<const std::string&>());
  }

  const auto spots = j.find("spots");
  if (spots != j.end() && !spots->is_null()) {
    if (!spots->is_array()) throw InputError("spots must be an array");
    for (const json& s : *spots) {
      if (!s.is_object() || !s.contains("text") || !s["text"].is_string()) {
        throw InputError("each spot needs a string text");
      }
      rec.spots.push_back({s["text"].get<std::string>(),
                           unit_interval(s.value("confidence", json()), "spot confidence")});
    }
  }

  const auto score = j.find("alignment_score");
  if (score != j.end() && !score->is_null()) {
    rec.alignment_score = unit_interval(*score, "alignment_score");
  }
  return rec;
}

std::string to_json_line(const CaptionRecord& record) {
  json j;
  j["id"] = record.id;
  j["caption"] = record.caption;
  if (record.parse) j["conllu"] = to_conllu(*record.parse);
  json spots = json::array();
  for (const auto& s : record.spots) {
    spots.push_back({{"text", s.text}, {"confidence", s.confidence}});
  }
  j["spots"] = std::move(spots);
  if (record.alignment_score) j["alignment_score"] = *record.alignment_score;
  return j.dump();
}

}  // namespace vlcurate
