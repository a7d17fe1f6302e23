#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "regscope/errors.hpp"
#include "regscope/paths.hpp"

namespace regscope {

// ---------------------------------------------------------------------------
// Artifact catalog: the numbered registry/filesystem locations that dead-box
// triage checks for. Each location is a normalized path pattern whose
// segments may include single-segment wildcards (%USER%, %SID%, %NAME%).
// ---------------------------------------------------------------------------

struct ArtifactLocation {
  int id = 0;             // 1-based; "P<id>" in reports and CSV headers
  ArtifactPath pattern;   // normalized, may contain wildcard segments
  std::string raw;        // manifest spelling, verbatim
  std::string note;       // duplicate flags etc.; empty for most rows
};

// The bundled catalog, one location per line: P<id><TAB><raw path>.
// Lines are kept verbatim from the source survey, including inconsistent
// casing, trailing separators, a stray space in P36 and a stray '%' in P40;
// the parser is expected to absorb that noise. P44 and P47 are duplicates in
// the original numbering and are kept so ids stay aligned with published
// figures.
inline constexpr std::string_view kBuiltinManifest =
    R"(# builtin artifact catalog v1
P1	HKEY_LOCAL_MACHINE\SYSTEM\ControlSet001\Control\Nls\CustomLocale\en-US
P2	HKEY_LOCAL_MACHINE\SYSTEM\ControlSet001\Control\Nls
P3	HKEY_LOCAL_MACHINE\SYSTEM\ControlSet001\Control\SESSION
P4	HKEY_LOCAL_MACHINE\SYSTEM\ControlSet001\Control
P5	HKEY_LOCAL_MACHINE\SYSTEM
P6	HKEY_LOCAL_MACHINE\Software\Microsoft\Rpc
P7	HKEY_LOCAL_MACHINE\SOFTWARE\Wow6432Node\Microsoft\Windows\CurrentVersion
P8	HKEY_LOCAL_MACHINE\SOFTWARE\Microsoft\
P9	HKEY_LOCAL_MACHINE\SOFTWARE\Wow6432Node\Microsoft\
P10	HKEY_CURRENT_USER\Software\Microsoft\Windows NT\CurrentVersion\Windows
P11	HKEY_CURRENT_USER\Software\Microsoft\Windows\CurrentVersion\Setup
P12	HKEY_CURRENT_USER\SOFTWARE\Microsoft\Windows\CurrentVersion\Uninstall
P13	HKEY_CURRENT_USER\SOFTWARE\Microsoft\Windows\CurrentVersion\
P14	HKEY_CURRENT_USER\SOFTWARE\Microsoft\Windows\CurrentVersion\Explorer
P15	Documents and Settings\[user name]\Start Menu\Programs\Startup
P16	%systemdrive%\Documents and Settings\[User Name]\Local Settings\Temp
P17	%Systemdrive%\Users\victim_user\AppData\
P18	%Systemdrive%\Windows\System32
P19	%Systemdrive%\Windows\INF\
P20	%Systemdrive%\Windows\Globalization\Sorting\sortdefault.nls
P21	%Systemdrive%\
P22	HKEY_LOCAL_MACHINE\software\policies
P23	HKEY_LOCAL_MACHINE\SOFTWARE\Classes\
P24	HKEY_CURRENT_USER\Software\Microsoft
P25	HKEY_CURRENT_USER\Software\Microsoft\Windows\CurrentVersion\Explorer\Shell Folders
P26	HKEY_LOCAL_MACHINE\Software\Microsoft\Windows\CurrentVersion\explorer\UserShell
P27	HKEY_LOCAL_MACHINE\Software\Microsoft\Windows\CurrentVersion\RunServices
P28	HKEY_CLASSES_ROOT\exefile\shell\open\command
P29	HKEY_CLASSES_ROOT\comfile\shell\open\command
P30	HKEY_LOCAL_MACHINE\Software\CLASSES\batfile\shell\open\command
P31	HKEY_LOCAL_MACHINE\Software\CLASSES\exefile\shell\open\command
P32	HKEY_LOCAL_MACHINE\SOFTWARE\Microsoft\Windows NT\CurrentVersion\Winlogon\Shell
P33	HKEY_LOCAL_MACHINE\Software\Microsoft\Active Setup\Installed Components\KeyName
P34	HKEY_LOCAL_MACHINE\Software\Microsoft\Windows\CurrentVersion\Explorer\Advanced\Start_ShowDownloads
P35	HKEY_CURRENT_USER\Control Panel\Desktop
P36	HKEY_LOCAL_MACHINE \SOFTWARE\Classes\Interface
P37	HKEY_LOCAL_MACHINE\SOFTWARE\Microsoft\Windows\CurrentVersion\Uninstall\software_name
P38	HKEY_LOCAL_MACHINE\SOFTWARE\Policies\Microsoft\Windows\CurrentVersion\Internet Settings\ZoneMapKey
P39	HKEY_CURRENT_USER\Software\Microsoft\Office\Software_name
P40	HKEY_USERS%\% account id %\Software\Adobe\
P41	HKEY_LOCAL_MACHINE\Software\Classes
P42	HKEY_CLASSES_ROOT\software_name
P43	HKEY_LOCAL_MACHINE\software\microsoft\windows\currentversion\appmanagement\arpcache\
P44	%Systemdrive%\Users\Public\Documents
P45	%systemdrive%\Program Files\Software_name\
P46	%SYSTEMDRIVE%\Windows\Fonts
P47	%Systemdrive%\Users\Public\Documents
)";

// Width of the standard feature vector: one bit per builtin location.
inline constexpr std::size_t kStandardFeatureWidth = 47;

namespace detail {

// Catalog placeholder spellings -> wildcard tokens. Compared case-insensitive
// after trimming; positional rules in normalize() already cover the
// user-name forms, these handle them wherever they appear.
inline std::optional<std::string_view> placeholder_wildcard(
    std::string_view seg) {
  if (iequals(seg, "software_name") || iequals(seg, "keyname"))
    return kNameToken;
  if (iequals(seg, "[user name]") || iequals(seg, "victim_user"))
    return kUserToken;
  if (iequals(seg, "% account id %") || iequals(seg, "account id"))
    return kSidToken;
  return std::nullopt;
}

}  // namespace detail

// Parses one catalog pattern: a normal path whose placeholder segments
// become wildcards. Note "% account id %" is split-proof because splitting
// only happens on separators; the '%'s stay inside the segment.
inline ArtifactPath parse_location_pattern(std::string_view raw) {
  ArtifactPath p = parse_path(raw);
  for (std::string& seg : p.segments)
    if (auto wild = detail::placeholder_wildcard(seg)) seg = std::string(*wild);
  return p;
}

class Catalog {
 public:
  // Parses manifest text: '#' comment lines and blank lines are skipped,
  // every other line must be P<id><TAB><raw path>. Throws
  // Error(ManifestInvalid) on malformed lines, duplicate or non-positive
  // ids, or patterns that do not parse as paths.
  static Catalog from_manifest(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start < text.size();) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }

    Catalog cat;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::string_view line = lines[i];
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;

      auto bad = [&](const std::string& why) {
        fail(ErrorCode::ManifestInvalid,
             "line " + std::to_string(i + 1) + ": " + why);
      };
      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) bad("expected P<id><TAB><path>");
      std::string_view id_tok = line.substr(0, tab);
      std::string_view raw = line.substr(tab + 1);
      if (id_tok.size() < 2 || id_tok[0] != 'P') bad("id must look like P<n>");
      int id = 0;
      for (char c : id_tok.substr(1)) {
        if (c < '0' || c > '9') bad("id must look like P<n>");
        id = id * 10 + (c - '0');
        if (id > 1000000) bad("id out of range");
      }
      if (id <= 0) bad("id must be positive");
      if (detail::trim(raw).empty()) bad("missing path");

      ArtifactLocation loc;
      loc.id = id;
      loc.raw = std::string(raw);
      try {
        loc.pattern = parse_location_pattern(raw);
      } catch (const Error& e) {
        bad(std::string("bad pattern: ") + e.what());
      }
      cat.locations_.push_back(std::move(loc));
    }
    if (cat.locations_.empty())
      fail(ErrorCode::ManifestInvalid, "manifest has no locations");

    std::map<int, std::size_t> by_id;
    for (std::size_t i = 0; i < cat.locations_.size(); ++i) {
      int id = cat.locations_[i].id;
      if (!by_id.emplace(id, i).second)
        fail(ErrorCode::ManifestInvalid,
             "duplicate id P" + std::to_string(id));
    }
    // Stable order by id regardless of file order.
    std::vector<ArtifactLocation> sorted;
    sorted.reserve(cat.locations_.size());
    for (const auto& [id, idx] : by_id)
      sorted.push_back(std::move(cat.locations_[idx]));
    cat.locations_ = std::move(sorted);

    // Duplicate patterns are legal (published numbering repeats rows); they
    // are flagged so reports can explain why the higher id never fires.
    for (std::size_t i = 0; i < cat.locations_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (cat.locations_[i].pattern == cat.locations_[j].pattern) {
          cat.locations_[i].note =
              "duplicate of P" + std::to_string(cat.locations_[j].id);
          break;
        }
    return cat;
  }

  static const Catalog& builtin() {
    static const Catalog cat = from_manifest(kBuiltinManifest);
    return cat;
  }

  const std::vector<ArtifactLocation>& locations() const { return locations_; }
  std::size_t size() const { return locations_.size(); }

  const ArtifactLocation* find(int id) const {
    for (const auto& loc : locations_)
      if (loc.id == id) return &loc;
    return nullptr;
  }

  int max_id() const {
    int m = 0;
    for (const auto& loc : locations_)
      if (loc.id > m) m = loc.id;
    return m;
  }

  // Round-trips the catalog back into manifest text.
  std::string to_manifest() const {
    std::string out;
    for (const auto& loc : locations_) {
      out += "P" + std::to_string(loc.id) + "\t" + loc.raw + "\n";
    }
    return out;
  }

  // Short content fingerprint, surfaced in triage reports so an analyst can
  // tell which catalog produced a feature vector.
  std::string version_tag() const;

 private:
  std::vector<ArtifactLocation> locations_;
};

// ---------------------------------------------------------------------------
// Longest-prefix matcher. Patterns form a trie keyed by (kind, root) and
// normalized segments; wildcard segments get their own edge that matches any
// single concrete segment. An event path matches the deepest pattern node
// that is a whole-segment prefix of it; ties on depth go to the lowest id.
// ---------------------------------------------------------------------------

class LocationMatcher {
 public:
  explicit LocationMatcher(const Catalog& catalog) {
    for (const ArtifactLocation& loc : catalog.locations()) {
      int node = root_node(loc.pattern.kind, loc.pattern.root);
      for (const std::string& seg : loc.pattern.segments) {
        if (is_wildcard_segment(seg)) {
          if (nodes_[node].wild < 0) {
            nodes_[node].wild = new_node();
          }
          node = nodes_[node].wild;
        } else {
          auto [it, inserted] = nodes_[node].kids.try_emplace(seg, 0);
          if (inserted) it->second = new_node();
          node = it->second;
        }
      }
      // Locations are fed in ascending id order, so first writer wins the
      // lowest-id tie-break for duplicate patterns.
      if (nodes_[node].location == 0) nodes_[node].location = loc.id;
    }
  }

  // Returns the id of the longest matching pattern, or nullopt.
  std::optional<int> match(const ArtifactPath& p) const {
    auto root = roots_.find({p.kind == PathKind::Registry ? 0 : 1, p.root});
    if (root == roots_.end()) return std::nullopt;

    int best_id = 0;
    std::size_t best_depth = 0;
    // Wildcards allow several live trie positions per depth; the frontier
    // stays tiny (catalog-sized), so a simple stack walk is plenty.
    std::vector<std::pair<int, std::size_t>> stack{{root->second, 0}};
    while (!stack.empty()) {
      auto [node, depth] = stack.back();
      stack.pop_back();
      int loc = nodes_[node].location;
      if (loc != 0 &&
          (best_id == 0 || depth > best_depth ||
           (depth == best_depth && loc < best_id))) {
        best_id = loc;
        best_depth = depth;
      }
      if (depth < p.segments.size()) {
        auto kid = nodes_[node].kids.find(p.segments[depth]);
        if (kid != nodes_[node].kids.end())
          stack.push_back({kid->second, depth + 1});
        if (nodes_[node].wild >= 0)
          stack.push_back({nodes_[node].wild, depth + 1});
      }
    }
    if (best_id == 0) return std::nullopt;
    return best_id;
  }

 private:
  struct Node {
    std::map<std::string, int> kids;
    int wild = -1;
    int location = 0;  // 0 = no pattern ends here
  };

  int new_node() {
    nodes_.push_back(Node{});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int root_node(PathKind kind, const std::string& root) {
    auto key = std::make_pair(kind == PathKind::Registry ? 0 : 1, root);
    auto [it, inserted] = roots_.try_emplace(key, 0);
    if (inserted) it->second = new_node();
    return it->second;
  }

  std::vector<Node> nodes_;
  std::map<std::pair<int, std::string>, int> roots_;
};

// ---------------------------------------------------------------------------
// Feature vectors: one bit per catalog location id (bit i <-> P(i+1)).
// ---------------------------------------------------------------------------

class FeatureVector {
 public:
  explicit FeatureVector(std::size_t width = kStandardFeatureWidth)
      : bits_(width, 0) {}

  std::size_t size() const { return bits_.size(); }

  bool test(std::size_t i) const { return i < bits_.size() && bits_[i] != 0; }

  // Sets the bit for location id (1-based). Ids beyond the width are
  // silently ignored: a wider custom catalog still produces fixed-width
  // vectors for models trained at that width.
  void set_location(int id) {
    if (id >= 1 && static_cast<std::size_t>(id) <= bits_.size())
      bits_[static_cast<std::size_t>(id) - 1] = 1;
  }

  bool test_location(int id) const {
    return id >= 1 && test(static_cast<std::size_t>(id) - 1);
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const FeatureVector& a, const FeatureVector& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const FeatureVector& a, const FeatureVector& b) {
    return !(a == b);
  }

 private:
  std::vector<std::uint8_t> bits_;
};

// Per-event match outcome plus the aggregate vector, used by triage reports.
struct FeatureExtraction {
  FeatureVector features;
  std::size_t matched_events = 0;
  std::size_t unmatched_events = 0;
  // First event path seen per fired location, as display evidence.
  std::map<int, std::string> example_by_location;
};

inline FeatureExtraction extract_features(
    const std::vector<ArtifactPath>& events, const LocationMatcher& matcher,
    std::size_t width = kStandardFeatureWidth) {
  FeatureExtraction out;
  out.features = FeatureVector(width);
  for (const ArtifactPath& p : events) {
    if (auto id = matcher.match(p)) {
      out.features.set_location(*id);
      ++out.matched_events;
      out.example_by_location.try_emplace(
          *id, p.raw.empty() ? to_string(p) : p.raw);
    } else {
      ++out.unmatched_events;
    }
  }
  return out;
}

inline FeatureVector build_feature_vector(
    const std::vector<ArtifactPath>& events, const LocationMatcher& matcher,
    std::size_t width = kStandardFeatureWidth) {
  return extract_features(events, matcher, width).features;
}

// FNV-1a 64-bit, used for stable content fingerprints (catalog versions,
// model ids). Not cryptographic; collision resistance is irrelevant here.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

inline std::string Catalog::version_tag() const {
  return std::to_string(size()) + "loc-" +
         hex64(fnv1a64(to_manifest())).substr(0, 8);
}

}  // namespace regscope
