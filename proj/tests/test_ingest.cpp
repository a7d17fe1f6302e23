#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "regscope/ingest.hpp"

using namespace regscope;
using nlohmann::json;

namespace {

auto code_is(ErrorCode want) {
  return Catch::Matchers::Predicate<Error>(
      [want](const Error& e) { return e.code() == want; });
}

}  // namespace

TEST_CASE("native report parses ops, paths and metadata") {
  json doc = {
      {"sample_id", "abc123"},
      {"sample_name", "dropper.exe"},
      {"os", "Win7"},
      {"events",
       {
           {{"op", "RegSetValue"},
            {"path", "HKLM\\Software\\Run"},
            {"ts", 1.5}},
           {{"op", "FileCreate"}, {"path", "C:\\Windows\\System32\\x.dll"}},
           {{"op", "ProcessCreate"}, {"path", "C:\\x.exe"}},
       }},
  };
  SandboxReport r = load_report(doc.dump(), ReportFormat::Native);
  CHECK(r.sample_id == "abc123");
  CHECK(r.sample_name == "dropper.exe");
  CHECK(r.os == Os::Win7);
  CHECK(r.source == ReportSource::Native);
  REQUIRE(r.events.size() == 3);
  CHECK(r.events[0].op == EventOp::RegSetValue);
  CHECK(r.events[0].ts == 1.5);
  CHECK(r.events[1].op == EventOp::FileCreate);
  CHECK_FALSE(r.events[1].ts.has_value());
  // unknown op names survive as Other
  CHECK(r.events[2].op == EventOp::Other);
}

TEST_CASE("native report falls back to lenient os hints and id as name") {
  SandboxReport r = load_report(
      R"({"sample_id":"x","os":"windows 8.1 x64"})", ReportFormat::Native);
  CHECK(r.os == Os::Win8_1);
  CHECK(r.sample_name == "x");
}

TEST_CASE("json-lines native layout: wrapper line plus event lines") {
  std::string text =
      "{\"sample_id\":\"jl-1\",\"os\":\"Win10\"}\n"
      "\n"
      "{\"op\":\"RegCreateKey\",\"path\":\"HKCU\\\\Software\\\\Evil\"}\n"
      "{\"op\":\"FileDelete\",\"path\":\"C:\\\\tmp\\\\a\"}\n";
  SandboxReport r = load_report(text);
  CHECK(r.sample_id == "jl-1");
  CHECK(r.os == Os::Win10);
  REQUIRE(r.events.size() == 2);
  CHECK(r.events[0].op == EventOp::RegCreateKey);
  CHECK(r.events[1].op == EventOp::FileDelete);
}

TEST_CASE("json-lines errors cite byte offsets") {
  std::string text = "{\"sample_id\":\"jl-2\"}\n{not json}\n";
  try {
    load_report(text);
    FAIL("expected MalformedReport");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedReport);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("byte"));
  }
}

TEST_CASE("native report validation errors") {
  CHECK_THROWS_MATCHES(load_report("{}", ReportFormat::Native), Error,
                       code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(
      load_report(R"({"sample_id":""})", ReportFormat::Native), Error,
      code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(
      load_report(R"({"sample_id":"x","events":[{"op":"FileWrite"}]})",
                  ReportFormat::Native),
      Error, code_is(ErrorCode::MalformedReport));  // event without path
  CHECK_THROWS_MATCHES(
      load_report(R"({"sample_id":"x","events":{}})", ReportFormat::Native),
      Error, code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(load_report("", ReportFormat::Native), Error,
                       code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(load_report("[1,2]", ReportFormat::Native), Error,
                       code_is(ErrorCode::MalformedReport));
}

TEST_CASE("cuckoo-like report: identity, platform, summary lists") {
  json doc;
  doc["info"] = {{"id", 42}, {"platform", "windows7"}};
  doc["target"]["file"] = {{"name", "mal.exe"},
                           {"md5", "d41d8cd98f00b204e9800998ecf8427e"},
                           {"sha256", "deadbeef"}};
  doc["behavior"]["summary"] = {
      {"regkey_written", {"HKLM\\Software\\Run\\evil"}},
      {"regkey_created", {"HKCU\\Software\\Evil"}},
      {"regkey_deleted", {"HKLM\\Software\\Gone"}},
      {"file_written", {"C:\\Windows\\System32\\a.dll"}},
      {"file_created", {"C:\\Users\\bob\\AppData\\b.exe"}},
      {"file_recreated", {"C:\\Users\\bob\\AppData\\c.exe"}},
      {"file_deleted", {"C:\\tmp\\d"}},
  };
  SandboxReport r = load_report(doc.dump(), ReportFormat::Cuckoo);
  CHECK(r.sample_id == "deadbeef");  // sha256 preferred
  CHECK(r.sample_name == "mal.exe");
  CHECK(r.os == Os::Win7);
  CHECK(r.source == ReportSource::CuckooLike);
  REQUIRE(r.events.size() == 7);
  // events come out in the fixed list order, not JSON key order
  CHECK(r.events[0].op == EventOp::RegSetValue);
  CHECK(r.events[1].op == EventOp::RegCreateKey);
  CHECK(r.events[2].op == EventOp::RegDeleteKey);
  CHECK(r.events[3].op == EventOp::FileWrite);
  CHECK(r.events[4].op == EventOp::FileCreate);
  CHECK(r.events[5].op == EventOp::FileCreate);
  CHECK(r.events[6].op == EventOp::FileDelete);
}

TEST_CASE("cuckoo identity falls back md5, name, then task id") {
  json doc;
  doc["behavior"]["summary"] = json::object();
  doc["target"]["file"] = {{"md5", "abcd"}};
  CHECK(load_report(doc.dump(), ReportFormat::Cuckoo).sample_id == "abcd");

  doc["target"]["file"] = {{"name", "sample.bin"}};
  CHECK(load_report(doc.dump(), ReportFormat::Cuckoo).sample_id ==
        "sample.bin");

  doc.erase("target");
  doc["info"] = {{"id", 7}};
  CHECK(load_report(doc.dump(), ReportFormat::Cuckoo).sample_id == "task-7");

  doc.erase("info");
  CHECK_THROWS_MATCHES(load_report(doc.dump(), ReportFormat::Cuckoo), Error,
                       code_is(ErrorCode::MalformedReport));
}

TEST_CASE("cuckoo machine object supplies the guest os") {
  json doc;
  doc["info"]["machine"] = {{"name", "cuckoo-win10-1"}};
  doc["target"]["file"] = {{"sha256", "ff"}};
  doc["behavior"]["summary"] = json::object();
  CHECK(load_report(doc.dump(), ReportFormat::Cuckoo).os == Os::Win10);
}

TEST_CASE("cuckoo report without behavior summary is malformed") {
  json doc;
  doc["target"]["file"] = {{"sha256", "ff"}};
  CHECK_THROWS_MATCHES(load_report(doc.dump(), ReportFormat::Cuckoo), Error,
                       code_is(ErrorCode::MalformedReport));
  doc["behavior"] = {{"processes", json::array()}};
  CHECK_THROWS_MATCHES(load_report(doc.dump(), ReportFormat::Cuckoo), Error,
                       code_is(ErrorCode::MalformedReport));
  doc["behavior"]["summary"] = {{"regkey_written", "not-a-list"}};
  CHECK_THROWS_MATCHES(load_report(doc.dump(), ReportFormat::Cuckoo), Error,
                       code_is(ErrorCode::MalformedReport));
}

TEST_CASE("auto format sniffs cuckoo by the behavior key") {
  json cuckoo;
  cuckoo["target"]["file"] = {{"sha256", "ff"}};
  cuckoo["behavior"]["summary"] = {{"file_written", {"C:\\x"}}};
  CHECK(load_report(cuckoo.dump()).source == ReportSource::CuckooLike);
  CHECK(load_report(R"({"sample_id":"n"})").source == ReportSource::Native);
  // explicit native wins over the sniff
  CHECK_THROWS_AS(load_report(cuckoo.dump(), ReportFormat::Native), Error);
}

TEST_CASE("extraction skips unparseable paths and ignores Other events") {
  SandboxReport r;
  r.sample_id = "s1";
  r.sample_name = "s1.exe";
  r.os = Os::Win7;
  r.events = {
      {EventOp::RegSetValue, "HKLM\\SOFTWARE\\Microsoft\\Windows\\Foo", {}},
      {EventOp::FileWrite, "\\Device\\HarddiskVolume1\\weird", {}},
      {EventOp::Other, "C:\\ignored\\by\\op", {}},
      {EventOp::FileCreate, "C:\\Windows\\System32\\x.sys", {}},
  };
  LocationMatcher matcher(Catalog::builtin());
  ReportExtraction rx = extract_report(r, matcher, 47);
  CHECK(rx.skipped_paths == 1);
  CHECK(rx.ignored_events == 1);
  CHECK(rx.features.matched_events == 2);
  CHECK(rx.sample.sample_name == "s1.exe");
  CHECK(rx.sample.os == Os::Win7);
  CHECK(rx.sample.features.test_location(8));
  CHECK(rx.sample.features.test_location(18));

  LabeledSample s = report_to_sample(r, Class::Trojan, matcher, 47);
  CHECK(s.label == Class::Trojan);
  CHECK(s.features == rx.sample.features);
}

TEST_CASE("reputation thresholding labels malware at or above the bar") {
  ReputationVerdict v;
  v.positives = 5;
  CHECK(label_from_reputation(v) == Class::Malware);
  v.positives = 4;
  CHECK(label_from_reputation(v) == Class::Cleanware);
  v.positives = 0;
  CHECK(label_from_reputation(v) == Class::Cleanware);
  v.positives = 1;
  CHECK(label_from_reputation(v, 1) == Class::Malware);
}

TEST_CASE("file reputation source looks up verdicts by sample id") {
  FileReputationSource src(
      R"({"aaa":{"positives":12,"total":60},"bbb":{"positives":0}})");
  auto hit = src.lookup("aaa");
  REQUIRE(hit.has_value());
  CHECK(hit->positives == 12);
  CHECK(hit->total == 60);
  auto zero = src.lookup("bbb");
  REQUIRE(zero.has_value());
  CHECK(zero->total == 0);
  CHECK_FALSE(src.lookup("ccc").has_value());

  CHECK_THROWS_MATCHES(FileReputationSource("[]"), Error,
                       code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(FileReputationSource(R"({"x":{}})"), Error,
                       code_is(ErrorCode::MalformedReport));
  CHECK_THROWS_MATCHES(FileReputationSource("{"), Error,
                       code_is(ErrorCode::MalformedReport));
}
