#pragma once

// Shared fixtures for the test suite: a random raw-path generator whose
// outputs always parse, a naive reference implementation of longest-prefix
// matching, and a tiny subprocess harness for exercising the CLI binary
// (path taken from the REGSCOPE_BIN environment variable).

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regscope/catalog.hpp"
#include "regscope/paths.hpp"
#include "regscope/rng.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate =
          base / ("regscope-test-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter_++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    std::abort();
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Random raw paths. Roots, separators, casing, padding and duplicated
// separators are all randomized, but the first component is always a
// recognized root so parse_path() succeeds.
// ---------------------------------------------------------------------------

inline std::string mutate_case(std::string s, regscope::SplitMix64& rng) {
  for (char& c : s) {
    std::uint64_t r = rng.next_below(3);
    if (c >= 'a' && c <= 'z' && r == 0) c = static_cast<char>(c - 'a' + 'A');
    if (c >= 'A' && c <= 'Z' && r == 1) c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

inline std::string random_raw_path(regscope::SplitMix64& rng) {
  static const char* kRoots[] = {
      "HKEY_LOCAL_MACHINE", "HKEY_CURRENT_USER", "HKEY_USERS",
      "HKEY_CLASSES_ROOT",  "HKEY_CURRENT_CONFIG",
      "HKLM", "HKCU", "HKU", "HKCR",
      "C:", "D:", "x:", "%SYSTEMDRIVE%", "Documents and Settings"};
  static const char* kSegments[] = {
      "SOFTWARE",       "Microsoft",    "Windows",     "CurrentVersion",
      "Explorer",       "Run",          "Classes",     "Policies",
      "SYSTEM",         "ControlSet001","CurrentControlSet", "Control",
      "Nls",            "Session",      "Users",       "Public",
      "Documents",      "AppData",      "Local",       "Temp",
      "System32",       "INF",          "Fonts",       "Adobe",
      "Office",         "Uninstall",    "exefile",     "shell",
      "open",           "command",      "Start Menu",  "Programs",
      "Startup",        "Program Files","Wow6432Node", "Interface",
      "value.dat",      "evil.exe",     "%USER%",      "%NAME%",
      "S-1-5-21-1004336348-1177238915-682003330-1003", "S-1-5-18",
      "Documents and Settings"};

  std::string root = kRoots[rng.next_below(std::size(kRoots))];
  if (root != "%SYSTEMDRIVE%" && root != "Documents and Settings" &&
      rng.next_below(2) == 0)
    root = mutate_case(root, rng);

  std::string sep = rng.next_below(4) == 0 ? "/" : "\\";
  std::string out = root;
  std::uint64_t depth = rng.next_below(7);
  for (std::uint64_t i = 0; i < depth; ++i) {
    out += sep;
    if (rng.next_below(8) == 0) out += sep;  // doubled separator
    if (rng.next_below(10) == 0) out += " ";
    std::string seg = kSegments[rng.next_below(std::size(kSegments))];
    if (seg[0] != '%' && rng.next_below(3) == 0) seg = mutate_case(seg, rng);
    out += seg;
    if (rng.next_below(10) == 0) out += " ";
  }
  if (rng.next_below(6) == 0) out += sep;  // trailing separator
  return out;
}

// ---------------------------------------------------------------------------
// Naive longest-prefix oracle: linear scan over all catalog patterns with
// wildcard-aware segment comparison, deepest match wins, ties to lowest id.
// ---------------------------------------------------------------------------

inline bool wildcard_prefix(const regscope::ArtifactPath& pattern,
                            const regscope::ArtifactPath& path) {
  if (pattern.kind != path.kind || pattern.root != path.root) return false;
  if (pattern.segments.size() > path.segments.size()) return false;
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    if (regscope::is_wildcard_segment(pattern.segments[i])) continue;
    if (pattern.segments[i] != path.segments[i]) return false;
  }
  return true;
}

inline std::optional<int> naive_match(const regscope::Catalog& catalog,
                                      const regscope::ArtifactPath& path) {
  std::optional<int> best;
  std::size_t best_depth = 0;
  for (const auto& loc : catalog.locations()) {
    if (!wildcard_prefix(loc.pattern, path)) continue;
    std::size_t depth = loc.pattern.segments.size();
    if (!best || depth > best_depth || (depth == best_depth && loc.id < *best)) {
      best = loc.id;
      best_depth = depth;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// CLI harness.
// ---------------------------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string cli_binary() {
  const char* bin = std::getenv("REGSCOPE_BIN");
  return bin ? bin : "";
}

inline std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

// Runs the CLI with the given arguments, capturing stdout/stderr. Extra
// environment variables can be supplied as NAME=value pairs.
inline CliResult run_cli(const std::vector<std::string>& args,
                         const std::vector<std::string>& env = {}) {
  CliResult r;
  std::string bin = cli_binary();
  if (bin.empty()) return r;

  TempDir dir;
  std::string out_path = dir.file("stdout");
  std::string err_path = dir.file("stderr");
  std::string cmd;
  for (const std::string& e : env) {
    std::size_t eq = e.find('=');
    cmd += e.substr(0, eq + 1) + shell_quote(e.substr(eq + 1)) + " ";
  }
  cmd += shell_quote(bin);
  for (const std::string& a : args) cmd += " " + shell_quote(a);
  cmd += " >" + shell_quote(out_path) + " 2>" + shell_quote(err_path);

  int status = std::system(cmd.c_str());
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}

}  // namespace testutil
