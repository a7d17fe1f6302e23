#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/catalog.hpp"
#include "regscope/classes.hpp"
#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/paths.hpp"

namespace regscope {

// Registry/file modification kinds we extract from behavior reports. Reads
// and opens are deliberately absent: presence at a location only counts when
// the sample changed something there.
enum class EventOp {
  RegSetValue,
  RegCreateKey,
  RegDeleteKey,
  FileWrite,
  FileCreate,
  FileDelete,
  Other,  // unrecognized kinds; ignored by feature extraction
};

inline const char* event_op_name(EventOp op) {
  switch (op) {
    case EventOp::RegSetValue: return "RegSetValue";
    case EventOp::RegCreateKey: return "RegCreateKey";
    case EventOp::RegDeleteKey: return "RegDeleteKey";
    case EventOp::FileWrite: return "FileWrite";
    case EventOp::FileCreate: return "FileCreate";
    case EventOp::FileDelete: return "FileDelete";
    case EventOp::Other: return "Other";
  }
  return "Other";
}

inline EventOp event_op_from_name(std::string_view name) {
  if (name == "RegSetValue") return EventOp::RegSetValue;
  if (name == "RegCreateKey") return EventOp::RegCreateKey;
  if (name == "RegDeleteKey") return EventOp::RegDeleteKey;
  if (name == "FileWrite") return EventOp::FileWrite;
  if (name == "FileCreate") return EventOp::FileCreate;
  if (name == "FileDelete") return EventOp::FileDelete;
  return EventOp::Other;
}

struct SandboxEvent {
  EventOp op = EventOp::Other;
  std::string path;              // raw, as logged by the sandbox
  std::optional<double> ts;      // seconds since detonation, when present
};

enum class ReportSource { Native, CuckooLike };

struct SandboxReport {
  std::string sample_id;    // never empty
  std::string sample_name;  // display name; falls back to sample_id
  Os os = Os::Unknown;
  ReportSource source = ReportSource::Native;
  std::vector<SandboxEvent> events;
};

enum class ReportFormat { Auto, Native, Cuckoo };

// Lenient OS sniffing for sandbox metadata ("win7x64", "windows 8.1", ...).
inline Os parse_os_hint(std::string_view hint) {
  std::string h = detail::ascii_lower(hint);
  auto has = [&h](std::string_view needle) {
    return h.find(needle) != std::string::npos;
  };
  if (has("win10") || has("windows 10") || has("windows10")) return Os::Win10;
  if (has("8.1") || has("win8") || has("windows 8") || has("windows8"))
    return Os::Win8_1;
  if (has("win7") || has("windows 7") || has("windows7")) return Os::Win7;
  return Os::Unknown;
}

namespace ingest_detail {

using json = nlohmann::json;

[[noreturn]] inline void malformed(const std::string& why) {
  fail(ErrorCode::MalformedReport, why);
}

inline json parse_json(std::string_view text, std::size_t byte_base = 0) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed("json parse error at byte " + std::to_string(byte_base + e.byte) +
              ": " + e.what());
  }
}

inline std::string require_string(const json& obj, const char* key,
                                  const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty())
    malformed(ctx + ": missing or empty '" + key + "'");
  return it->get<std::string>();
}

inline SandboxEvent parse_native_event(const json& e, const std::string& ctx) {
  if (!e.is_object()) malformed(ctx + ": event is not an object");
  SandboxEvent ev;
  ev.op = event_op_from_name(e.value("op", std::string()));
  ev.path = require_string(e, "path", ctx);
  if (auto it = e.find("ts"); it != e.end() && it->is_number())
    ev.ts = it->get<double>();
  return ev;
}

inline SandboxReport parse_native_wrapper(const json& doc) {
  if (!doc.is_object()) malformed("report is not a JSON object");
  SandboxReport r;
  r.source = ReportSource::Native;
  r.sample_id = require_string(doc, "sample_id", "report");
  if (auto it = doc.find("sample_name"); it != doc.end() && it->is_string())
    r.sample_name = it->get<std::string>();
  if (r.sample_name.empty()) r.sample_name = r.sample_id;
  if (auto it = doc.find("os"); it != doc.end() && it->is_string()) {
    auto exact = os_from_name(it->get<std::string>());
    r.os = exact ? *exact : parse_os_hint(it->get<std::string>());
  }
  if (auto it = doc.find("events"); it != doc.end()) {
    if (!it->is_array()) malformed("'events' must be an array");
    std::size_t i = 0;
    for (const json& e : *it)
      r.events.push_back(
          parse_native_event(e, "event " + std::to_string(i++)));
  }
  return r;
}

// Behavior-summary list name -> event kind, in the fixed order events are
// emitted so output never depends on JSON object ordering.
inline const std::vector<std::pair<const char*, EventOp>>& summary_lists() {
  static const std::vector<std::pair<const char*, EventOp>> lists = {
      {"regkey_written", EventOp::RegSetValue},
      {"regkey_created", EventOp::RegCreateKey},
      {"regkey_deleted", EventOp::RegDeleteKey},
      {"file_written", EventOp::FileWrite},
      {"file_created", EventOp::FileCreate},
      {"file_recreated", EventOp::FileCreate},
      {"file_deleted", EventOp::FileDelete},
  };
  return lists;
}

inline SandboxReport parse_cuckoo(const json& doc) {
  if (!doc.is_object()) malformed("report is not a JSON object");
  SandboxReport r;
  r.source = ReportSource::CuckooLike;

  // Identity: prefer content hashes, fall back to filename, then task id.
  if (doc.contains("target") && doc["target"].is_object() &&
      doc["target"].contains("file") && doc["target"]["file"].is_object()) {
    const json& file = doc["target"]["file"];
    for (const char* key : {"sha256", "md5", "name"})
      if (file.contains(key) && file[key].is_string() &&
          !file[key].get<std::string>().empty()) {
        r.sample_id = file[key].get<std::string>();
        break;
      }
    if (file.contains("name") && file["name"].is_string())
      r.sample_name = file["name"].get<std::string>();
  }
  if (doc.contains("info") && doc["info"].is_object()) {
    const json& info = doc["info"];
    if (r.sample_id.empty() && info.contains("id") &&
        info["id"].is_number_integer())
      r.sample_id = "task-" + std::to_string(info["id"].get<long long>());
    for (const char* key : {"platform", "machine"}) {
      if (r.os != Os::Unknown) break;
      if (!info.contains(key)) continue;
      const json& v = info[key];
      if (v.is_string()) {
        r.os = parse_os_hint(v.get<std::string>());
      } else if (v.is_object()) {
        for (const char* sub : {"name", "label", "platform"})
          if (v.contains(sub) && v[sub].is_string()) {
            r.os = parse_os_hint(v[sub].get<std::string>());
            if (r.os != Os::Unknown) break;
          }
      }
    }
  }
  if (r.sample_id.empty()) malformed("no sample identity in report");
  if (r.sample_name.empty()) r.sample_name = r.sample_id;

  if (!doc.contains("behavior") || !doc["behavior"].is_object() ||
      !doc["behavior"].contains("summary") ||
      !doc["behavior"]["summary"].is_object())
    malformed("behavior.summary missing");
  const json& summary = doc["behavior"]["summary"];
  for (const auto& [key, op] : summary_lists()) {
    auto it = summary.find(key);
    if (it == summary.end()) continue;
    if (!it->is_array())
      malformed(std::string("behavior.summary.") + key + " must be an array");
    for (const json& entry : *it) {
      if (!entry.is_string())
        malformed(std::string("behavior.summary.") + key +
                  " entries must be strings");
      r.events.push_back(SandboxEvent{op, entry.get<std::string>(), {}});
    }
  }
  return r;
}

}  // namespace ingest_detail

// Loads one behavior report. Native reports are either a single JSON object
// ({"sample_id","sample_name","os","events":[...]}) or JSON-lines with the
// wrapper on line 1 and one event object per following line. Cuckoo-like
// reports are the familiar report.json layout; only behavior.summary is
// consulted for events. Auto mode sniffs the layout from the parsed object.
//
// Throws Error(MalformedReport) with a byte offset for JSON syntax errors
// and a field path for structural ones.
inline SandboxReport load_report(std::string_view text,
                                 ReportFormat fmt = ReportFormat::Auto) {
  using ingest_detail::json;

  // JSON-lines fallback only applies when the whole document fails to parse
  // as one value and the format allows native.
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& outer) {
    if (fmt == ReportFormat::Cuckoo)
      ingest_detail::malformed("json parse error at byte " +
                               std::to_string(outer.byte) + ": " +
                               outer.what());
    // split into (offset, line) pairs so errors can cite byte positions
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    for (std::size_t start = 0; start < text.size();) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!detail::trim(line).empty()) lines.push_back({start, line});
      start = end + 1;
    }
    if (lines.empty()) ingest_detail::malformed("empty report");

    SandboxReport r = ingest_detail::parse_native_wrapper(
        ingest_detail::parse_json(lines[0].second, lines[0].first));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      json j = ingest_detail::parse_json(lines[i].second, lines[i].first);
      r.events.push_back(ingest_detail::parse_native_event(
          j, "line object at byte " + std::to_string(lines[i].first)));
    }
    return r;
  }

  if (fmt == ReportFormat::Cuckoo) return ingest_detail::parse_cuckoo(doc);
  if (fmt == ReportFormat::Native)
    return ingest_detail::parse_native_wrapper(doc);
  if (doc.is_object() && doc.contains("behavior"))
    return ingest_detail::parse_cuckoo(doc);
  return ingest_detail::parse_native_wrapper(doc);
}

// ---------------------------------------------------------------------------
// Report -> labeled sample
// ---------------------------------------------------------------------------

struct ReportExtraction {
  LabeledSample sample;
  FeatureExtraction features;      // fired locations + evidence paths
  std::size_t skipped_paths = 0;   // events whose path failed to parse
  std::size_t ignored_events = 0;  // EventOp::Other
};

// Runs every modification event through the normalizer and matcher.
// Unparseable paths are tallied, never fatal: sandbox logs contain device
// paths and pipe names that are simply not catalog material.
inline ReportExtraction extract_report(
    const SandboxReport& report, const LocationMatcher& matcher,
    std::size_t width = kStandardFeatureWidth) {
  ReportExtraction out;
  std::vector<ArtifactPath> paths;
  for (const SandboxEvent& ev : report.events) {
    if (ev.op == EventOp::Other) {
      ++out.ignored_events;
      continue;
    }
    try {
      paths.push_back(parse_path(ev.path));
    } catch (const Error&) {
      ++out.skipped_paths;
    }
  }
  out.features = extract_features(paths, matcher, width);
  out.sample.features = out.features.features;
  out.sample.os = report.os;
  out.sample.sample_name =
      report.sample_name.empty() ? report.sample_id : report.sample_name;
  return out;
}

inline LabeledSample report_to_sample(
    const SandboxReport& report, Class label, const LocationMatcher& matcher,
    std::size_t width = kStandardFeatureWidth) {
  ReportExtraction rx = extract_report(report, matcher, width);
  rx.sample.label = label;
  return rx.sample;
}

// ---------------------------------------------------------------------------
// Reputation labeling
// ---------------------------------------------------------------------------

struct ReputationVerdict {
  std::string sample_id;
  int positives = 0;  // engines flagging the sample
  int total = 0;      // engines consulted
};

inline constexpr int kDefaultReputationThreshold = 5;

// Crisp labeling rule: at or above the engine threshold the sample is
// malicious, below it clean. Family attribution never comes from reputation
// counts; that is the name parser's job.
inline Class label_from_reputation(
    const ReputationVerdict& v, int threshold = kDefaultReputationThreshold) {
  return v.positives >= threshold ? Class::Malware : Class::Cleanware;
}

class ReputationSource {
 public:
  virtual ~ReputationSource() = default;
  virtual std::optional<ReputationVerdict> lookup(
      const std::string& sample_id) = 0;
};

// Offline source: a JSON object mapping sample id to
// {"positives": n, "total": m}.
class FileReputationSource : public ReputationSource {
 public:
  explicit FileReputationSource(std::string_view json_text) {
    using ingest_detail::json;
    json doc;
    try {
      doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::MalformedReport,
           "reputation json parse error at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object())
      fail(ErrorCode::MalformedReport, "reputation file must be an object");
    for (auto& [id, entry] : doc.items()) {
      if (!entry.is_object() || !entry.contains("positives") ||
          !entry["positives"].is_number_integer())
        fail(ErrorCode::MalformedReport,
             "reputation entry '" + id + "' needs integer 'positives'");
      ReputationVerdict v;
      v.sample_id = id;
      v.positives = entry["positives"].get<int>();
      v.total = entry.value("total", 0);
      map_.emplace(id, v);
    }
  }

  std::optional<ReputationVerdict> lookup(
      const std::string& sample_id) override {
    auto it = map_.find(sample_id);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<std::string, ReputationVerdict> map_;
};

}  // namespace regscope
