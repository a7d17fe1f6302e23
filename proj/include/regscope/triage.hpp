#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/catalog.hpp"
#include "regscope/classes.hpp"
#include "regscope/ingest.hpp"
#include "regscope/ml/model.hpp"

namespace regscope {

// Examiner-priority ordering for fired locations: the profile/system pair
// first (hot in every malware family), then the family persistence sets,
// then the installer/vendor block, then everything else by id. Reports list
// evidence in this order so the most diagnostic locations lead.
inline int location_significance_rank(int id) {
  static const int kPriority[] = {17, 18, 2,  3,  1,  8,  19, 4,  14, 20,
                                  13, 21, 45, 38, 37, 40, 42, 43, 44, 39};
  int i = 0;
  for (int p : kPriority) {
    if (p == id) return i;
    ++i;
  }
  return 1000 + id;
}

struct TriageReport {
  std::string sample_name;
  std::string sample_id;
  Os os = Os::Unknown;
  Class predicted = Class::Cleanware;
  std::vector<Class> classes;
  std::vector<double> distribution;

  struct FiredLocation {
    int id = 0;
    std::string pattern;       // display form of the catalog pattern
    std::string example_path;  // first event that hit it
  };
  std::vector<FiredLocation> fired;  // significance order

  std::size_t matched_events = 0;
  std::size_t unmatched_events = 0;
  std::size_t skipped_paths = 0;
  std::size_t ignored_events = 0;
  std::string model_fingerprint;
  std::string catalog_version;
};

inline TriageReport make_triage_report(const TriageModel& model,
                                       const SandboxReport& report,
                                       const Catalog& catalog,
                                       const LocationMatcher& matcher) {
  ReportExtraction rx = extract_report(report, matcher, model.n_features);
  Prediction p = predict(model, rx.sample.features);

  TriageReport out;
  out.sample_name = rx.sample.sample_name;
  out.sample_id = report.sample_id;
  out.os = report.os;
  out.predicted = p.label;
  out.classes = model.classes;
  out.distribution = p.distribution;
  out.matched_events = rx.features.matched_events;
  out.unmatched_events = rx.features.unmatched_events;
  out.skipped_paths = rx.skipped_paths;
  out.ignored_events = rx.ignored_events;
  out.model_fingerprint = model_id(model);
  out.catalog_version = catalog.version_tag();

  for (const auto& [id, example] : rx.features.example_by_location) {
    TriageReport::FiredLocation f;
    f.id = id;
    if (const ArtifactLocation* loc = catalog.find(id))
      f.pattern = to_string(loc->pattern);
    f.example_path = example;
    out.fired.push_back(std::move(f));
  }
  std::sort(out.fired.begin(), out.fired.end(),
            [](const TriageReport::FiredLocation& a,
               const TriageReport::FiredLocation& b) {
              int ra = location_significance_rank(a.id);
              int rb = location_significance_rank(b.id);
              return ra != rb ? ra < rb : a.id < b.id;
            });
  return out;
}

inline std::string render_triage_text(const TriageReport& r) {
  std::string out;
  char buf[64];
  out += "sample:   " + r.sample_name;
  if (!r.sample_id.empty() && r.sample_id != r.sample_name)
    out += " (" + r.sample_id + ")";
  out += "\nguest os: " + std::string(os_name(r.os)) + "\n";
  out += "verdict:  " + std::string(class_name(r.predicted)) + "\n";
  out += "distribution:\n";
  for (std::size_t i = 0; i < r.classes.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "  %-10s %.4f\n",
                  class_name(r.classes[i]), r.distribution[i]);
    out += buf;
  }
  if (r.fired.empty()) {
    out += "catalog locations: none fired\n";
  } else {
    out += "catalog locations (" + std::to_string(r.fired.size()) +
           " fired, most significant first):\n";
    for (const auto& f : r.fired) {
      std::snprintf(buf, sizeof(buf), "  P%-3d ", f.id);
      out += buf;
      out += f.pattern;
      out += "\n        e.g. " + f.example_path + "\n";
    }
  }
  std::snprintf(buf, sizeof(buf),
                "events: %zu matched, %zu unmatched, %zu skipped",
                r.matched_events, r.unmatched_events, r.skipped_paths);
  out += buf;
  if (r.ignored_events) {
    std::snprintf(buf, sizeof(buf), ", %zu ignored", r.ignored_events);
    out += buf;
  }
  out += "\nmodel:    " + r.model_fingerprint + "\n";
  out += "catalog:  " + r.catalog_version + "\n";
  return out;
}

inline nlohmann::json triage_to_json(const TriageReport& r) {
  nlohmann::json out;
  out["sample_name"] = r.sample_name;
  out["sample_id"] = r.sample_id;
  out["os"] = os_name(r.os);
  out["verdict"] = class_name(r.predicted);
  nlohmann::json dist;
  for (std::size_t i = 0; i < r.classes.size(); ++i)
    dist[class_name(r.classes[i])] = r.distribution[i];
  out["distribution"] = std::move(dist);
  nlohmann::json fired = nlohmann::json::array();
  for (const auto& f : r.fired) {
    fired.push_back({{"id", f.id},
                     {"pattern", f.pattern},
                     {"example_path", f.example_path}});
  }
  out["fired_locations"] = std::move(fired);
  out["matched_events"] = r.matched_events;
  out["unmatched_events"] = r.unmatched_events;
  out["skipped_paths"] = r.skipped_paths;
  out["ignored_events"] = r.ignored_events;
  out["model"] = r.model_fingerprint;
  out["catalog"] = r.catalog_version;
  return out;
}

}  // namespace regscope
