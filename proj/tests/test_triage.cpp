#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "regscope/datagen.hpp"
#include "regscope/ingest.hpp"
#include "regscope/ml/tree.hpp"
#include "regscope/triage.hpp"

using namespace regscope;
using Catch::Matchers::ContainsSubstring;
using nlohmann::json;

namespace {

const char* kReportText = R"({
  "sample_id": "deadbeef",
  "sample_name": "invoice.exe",
  "os": "Win7",
  "events": [
    {"op": "RegSetValue", "path": "HKEY_LOCAL_MACHINE\\SOFTWARE\\Classes\\CLSID\\{42}", "ts": 0.5},
    {"op": "RegCreateKey", "path": "HKLM\\SYSTEM\\Setup\\foo"},
    {"op": "FileWrite", "path": "C:\\autoexec.bat"},
    {"op": "FileCreate", "path": "C:\\Users\\eve\\AppData"},
    {"op": "FileWrite", "path": "C:\\Windows\\System32\\drivers\\bad.sys"},
    {"op": "RegSetValue", "path": "HKEY_LOCAL_MACHINE\\SYSTEM\\ControlSet001\\Control\\Nls\\CustomLocale\\en-US"},
    {"op": "RegSetValue", "path": "HKEY_CURRENT_CONFIG\\System"},
    {"op": "FileWrite", "path": "\\Device\\HarddiskVolume2\\x"},
    {"op": "RegOpenKey", "path": "HKLM\\SOFTWARE\\ignored"}
  ]
})";

TriageModel fixture_model() {
  return train_decision_tree(generate_dataset(default_profiles(), 20, 3), 6, 1);
}

}  // namespace

TEST_CASE("priority locations rank ahead of the id ordering") {
  CHECK(location_significance_rank(17) == 0);
  CHECK(location_significance_rank(18) == 1);
  CHECK(location_significance_rank(2) == 2);
  CHECK(location_significance_rank(1) == 4);
  CHECK(location_significance_rank(39) == 19);
  // everything off the priority list ranks behind it, ordered by id
  CHECK(location_significance_rank(5) == 1005);
  CHECK(location_significance_rank(47) == 1047);
  CHECK(location_significance_rank(5) < location_significance_rank(23));
  CHECK(location_significance_rank(21) < location_significance_rank(5));
}

TEST_CASE("triage reports collect evidence in significance order") {
  const Catalog& catalog = Catalog::builtin();
  LocationMatcher matcher(catalog);
  TriageModel model = fixture_model();
  SandboxReport report = load_report(kReportText);

  TriageReport tr = make_triage_report(model, report, catalog, matcher);

  CHECK(tr.sample_name == "invoice.exe");
  CHECK(tr.sample_id == "deadbeef");
  CHECK(tr.os == Os::Win7);
  CHECK(tr.classes == model.classes);
  CHECK(tr.model_fingerprint == model_id(model));
  CHECK(tr.catalog_version == catalog.version_tag());

  CHECK(tr.matched_events == 6);
  CHECK(tr.unmatched_events == 1);  // HKEY_CURRENT_CONFIG\System
  CHECK(tr.skipped_paths == 1);     // device path
  CHECK(tr.ignored_events == 1);    // RegOpenKey

  // P17 and P18 lead, then P1; off-list ids trail in id order
  REQUIRE(tr.fired.size() == 6);
  CHECK(tr.fired[0].id == 17);
  CHECK(tr.fired[1].id == 18);
  CHECK(tr.fired[2].id == 1);
  CHECK(tr.fired[3].id == 21);
  CHECK(tr.fired[4].id == 5);
  CHECK(tr.fired[5].id == 23);

  CHECK(tr.fired[0].example_path == "C:\\Users\\eve\\AppData");
  CHECK(tr.fired[1].example_path == "C:\\Windows\\System32\\drivers\\bad.sys");
  CHECK_THAT(tr.fired[0].pattern, ContainsSubstring("%USER%"));
  CHECK_THAT(tr.fired[0].pattern, ContainsSubstring("appdata"));
  CHECK_THAT(tr.fired[1].pattern, ContainsSubstring("system32"));

  // the verdict is exactly the model's prediction on the extracted features
  ReportExtraction rx = extract_report(report, matcher, model.n_features);
  Prediction p = predict(model, rx.sample.features);
  CHECK(tr.predicted == p.label);
  CHECK(tr.distribution == p.distribution);
}

TEST_CASE("text rendering shows the verdict and ordered evidence") {
  const Catalog& catalog = Catalog::builtin();
  LocationMatcher matcher(catalog);
  TriageModel model = fixture_model();
  TriageReport tr =
      make_triage_report(model, load_report(kReportText), catalog, matcher);
  std::string text = render_triage_text(tr);

  CHECK_THAT(text, ContainsSubstring("sample:   invoice.exe (deadbeef)"));
  CHECK_THAT(text, ContainsSubstring("guest os: Win7"));
  CHECK_THAT(text, ContainsSubstring("verdict:  " +
                                     std::string(class_name(tr.predicted))));
  CHECK_THAT(text, ContainsSubstring("distribution:"));
  CHECK_THAT(text, ContainsSubstring(
                       "catalog locations (6 fired, most significant first):"));
  CHECK_THAT(text, ContainsSubstring(
                       "events: 6 matched, 1 unmatched, 1 skipped, 1 ignored"));
  CHECK_THAT(text, ContainsSubstring("model:    " + tr.model_fingerprint));
  CHECK_THAT(text, ContainsSubstring("catalog:  " + tr.catalog_version));
  CHECK_THAT(text, ContainsSubstring("e.g. C:\\Users\\eve\\AppData"));

  // evidence lines appear in significance order (padded id column)
  std::size_t p17 = text.find("  P17  ");
  std::size_t p18 = text.find("  P18  ");
  std::size_t p1 = text.find("  P1   ");
  std::size_t p21 = text.find("  P21  ");
  std::size_t p5 = text.find("  P5   ");
  std::size_t p23 = text.find("  P23  ");
  REQUIRE(p17 != std::string::npos);
  REQUIRE(p23 != std::string::npos);
  CHECK(p17 < p18);
  CHECK(p18 < p1);
  CHECK(p1 < p21);
  CHECK(p21 < p5);
  CHECK(p5 < p23);
}

TEST_CASE("json rendering mirrors the report fields") {
  const Catalog& catalog = Catalog::builtin();
  LocationMatcher matcher(catalog);
  TriageModel model = fixture_model();
  TriageReport tr =
      make_triage_report(model, load_report(kReportText), catalog, matcher);
  json doc = triage_to_json(tr);

  CHECK(doc["sample_name"] == "invoice.exe");
  CHECK(doc["sample_id"] == "deadbeef");
  CHECK(doc["os"] == "Win7");
  CHECK(doc["verdict"] == class_name(tr.predicted));
  CHECK(doc["matched_events"] == 6);
  CHECK(doc["unmatched_events"] == 1);
  CHECK(doc["skipped_paths"] == 1);
  CHECK(doc["ignored_events"] == 1);
  CHECK(doc["model"] == tr.model_fingerprint);
  CHECK(doc["catalog"] == tr.catalog_version);

  REQUIRE(doc["fired_locations"].is_array());
  REQUIRE(doc["fired_locations"].size() == 6);
  std::vector<int> ids;
  for (const auto& f : doc["fired_locations"]) {
    ids.push_back(f["id"].get<int>());
    CHECK(f.contains("pattern"));
    CHECK(f.contains("example_path"));
  }
  CHECK(ids == std::vector<int>{17, 18, 1, 21, 5, 23});

  REQUIRE(doc["distribution"].is_object());
  double sum = 0;
  for (std::size_t i = 0; i < tr.classes.size(); ++i) {
    const char* name = class_name(tr.classes[i]);
    REQUIRE(doc["distribution"].contains(name));
    CHECK(doc["distribution"][name].get<double>() == tr.distribution[i]);
    sum += tr.distribution[i];
  }
  CHECK(sum == Catch::Approx(1.0));
}

TEST_CASE("reports without catalog hits render cleanly") {
  const Catalog& catalog = Catalog::builtin();
  LocationMatcher matcher(catalog);
  TriageModel model = fixture_model();
  SandboxReport report =
      load_report(R"({"sample_id": "quiet", "events": []})");

  TriageReport tr = make_triage_report(model, report, catalog, matcher);
  CHECK(tr.fired.empty());
  CHECK(tr.matched_events == 0);
  CHECK(tr.sample_name == "quiet");

  std::string text = render_triage_text(tr);
  CHECK_THAT(text, ContainsSubstring("catalog locations: none fired"));
  // identical display name and id collapse to one mention
  CHECK_THAT(text, ContainsSubstring("sample:   quiet\n"));
  CHECK_THAT(text, !ContainsSubstring("(quiet)"));
  CHECK_THAT(text, ContainsSubstring("guest os: Unknown"));
}
