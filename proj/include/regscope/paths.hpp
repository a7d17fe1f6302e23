#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regscope/errors.hpp"

namespace regscope {

enum class PathKind { Registry, Filesystem };

inline const char* path_kind_name(PathKind k) {
  return k == PathKind::Registry ? "registry" : "filesystem";
}

namespace detail {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'A' && x <= 'Z') x = static_cast<char>(x - 'A' + 'a');
    if (y >= 'A' && y <= 'Z') y = static_cast<char>(y - 'A' + 'a');
    if (x != y) return false;
  }
  return true;
}

}  // namespace detail

// Canonical root spellings. Registry roots are the full hive names;
// filesystem paths all collapse onto the %SYSTEMDRIVE% pseudo-root because
// dead-box analysis cannot trust drive letters.
inline constexpr const char* kSystemDriveRoot = "%SYSTEMDRIVE%";

inline const std::vector<std::string>& hive_roots() {
  static const std::vector<std::string> roots = {
      "HKEY_LOCAL_MACHINE", "HKEY_CURRENT_USER", "HKEY_USERS",
      "HKEY_CLASSES_ROOT", "HKEY_CURRENT_CONFIG"};
  return roots;
}

// alias -> canonical hive. This table is the normative alias set; the
// normalization property tests enumerate it.
inline const std::vector<std::pair<std::string, std::string>>& hive_aliases() {
  static const std::vector<std::pair<std::string, std::string>> aliases = {
      {"HKLM", "HKEY_LOCAL_MACHINE"},
      {"HKCU", "HKEY_CURRENT_USER"},
      {"HKU", "HKEY_USERS"},
      {"HKCR", "HKEY_CLASSES_ROOT"},
  };
  return aliases;
}

// Wildcard/placeholder segments produced by normalization or by catalog
// patterns. They survive case folding in their canonical uppercase form.
inline constexpr std::string_view kUserToken = "%USER%";
inline constexpr std::string_view kSidToken = "%SID%";
inline constexpr std::string_view kNameToken = "%NAME%";

inline bool is_wildcard_segment(std::string_view s) {
  return s == kUserToken || s == kSidToken || s == kNameToken;
}

// A parsed, normalized artifact path: either a registry key/value path or a
// filesystem path, reduced to a canonical root plus case-folded segments.
// Equality ignores `raw` (two spellings of the same location compare equal).
struct ArtifactPath {
  PathKind kind = PathKind::Registry;
  std::string root;                    // canonical hive or %SYSTEMDRIVE%
  std::vector<std::string> segments;   // normalized components
  std::string raw;                     // original input, for reporting only

  friend bool operator==(const ArtifactPath& a, const ArtifactPath& b) {
    return a.kind == b.kind && a.root == b.root && a.segments == b.segments;
  }
  friend bool operator!=(const ArtifactPath& a, const ArtifactPath& b) {
    return !(a == b);
  }
};

namespace detail {

// S-1-... account ids: "S-1-" followed by digits and dashes only.
inline bool looks_like_sid(std::string_view s) {
  if (s.size() < 4) return false;
  if (!(s[0] == 'S' || s[0] == 's') || s[1] != '-' || s[2] != '1' ||
      s[3] != '-')
    return false;
  bool digit_seen = false;
  for (std::size_t i = 4; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') { digit_seen = true; continue; }
    if (c == '-') continue;
    return false;
  }
  return digit_seen;
}

inline bool is_drive_token(std::string_view s) {
  return s.size() == 2 && s[1] == ':' &&
         ((s[0] >= 'A' && s[0] <= 'Z') || (s[0] >= 'a' && s[0] <= 'z'));
}

struct RootInfo {
  PathKind kind;
  std::string canonical;
  bool keep_token_as_segment = false;  // "Documents and Settings" root form
};

// Recognizes the first path component as a root. Tolerates surrounding
// whitespace (already trimmed by the splitter) and stray trailing '%' on a
// hive name, both of which occur in real catalogs.
inline std::optional<RootInfo> recognize_root(std::string_view token) {
  std::string_view t = token;
  while (!t.empty() && t.back() == '%' &&
         !(t.size() >= 2 && t.front() == '%')) {
    // strip '%' glued to a bare hive name, but leave %SYSTEMDRIVE%-style
    // tokens (leading '%') intact
    t.remove_suffix(1);
  }
  for (const auto& hive : hive_roots())
    if (iequals(t, hive)) return RootInfo{PathKind::Registry, hive};
  for (const auto& [alias, hive] : hive_aliases())
    if (iequals(t, alias)) return RootInfo{PathKind::Registry, hive};
  if (is_drive_token(token))
    return RootInfo{PathKind::Filesystem, kSystemDriveRoot};
  if (iequals(token, kSystemDriveRoot))
    return RootInfo{PathKind::Filesystem, kSystemDriveRoot};
  // Rootless profile-directory form: treat the component as both root marker
  // and first segment.
  if (iequals(token, "Documents and Settings"))
    return RootInfo{PathKind::Filesystem, kSystemDriveRoot, true};
  return std::nullopt;
}

// Splits on '\' and '/', trimming whitespace per component and dropping
// empties (collapses doubled or trailing separators).
inline std::vector<std::string> split_components(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '\\' || raw[i] == '/') {
      std::string_view piece = trim(raw.substr(start, i - start));
      if (!piece.empty()) out.emplace_back(piece);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

// Rewrites an ArtifactPath into canonical form. Idempotent; total for paths
// produced by parse_path. Rules, in order:
//   1. hive aliases expand to full names (roots are re-canonicalized)
//   2. drive-letter roots collapse to %SYSTEMDRIVE%
//   3. the segment following "Users" or "Documents and Settings" collapses
//      to %USER% (account names, including "Public", are noise)
//   4. an account id (S-1-...) directly under HKEY_USERS collapses to %SID%
//   5. segments fold to ASCII lowercase; placeholder tokens keep their
//      canonical uppercase spelling
//   6. "CurrentControlSet" rewrites to "ControlSet001", the hive name the
//      link resolves to in an offline image
inline ArtifactPath normalize(ArtifactPath p) {
  // (1)+(2): root canonicalization. Tolerates aliases and case variants in
  // hand-built values; parse_path roots are already canonical.
  if (auto info = detail::recognize_root(p.root)) {
    p.kind = info->kind;
    p.root = info->canonical;
    // keep_token_as_segment only matters at parse time
  }

  // (3): user-profile collapse, case-insensitive on the marker segment.
  for (std::size_t i = 1; i < p.segments.size(); ++i) {
    const std::string& prev = p.segments[i - 1];
    if (detail::iequals(prev, "Users") ||
        detail::iequals(prev, "Documents and Settings")) {
      if (!is_wildcard_segment(p.segments[i])) p.segments[i] = kUserToken;
    }
  }

  // (4): SID collapse directly under HKEY_USERS.
  if (p.kind == PathKind::Registry && p.root == "HKEY_USERS" &&
      !p.segments.empty() && detail::looks_like_sid(p.segments[0]))
    p.segments[0] = std::string(kSidToken);

  // (5)+(6): case folding and control-set aliasing.
  for (std::string& seg : p.segments) {
    if (detail::iequals(seg, kUserToken)) { seg = kUserToken; continue; }
    if (detail::iequals(seg, kSidToken)) { seg = kSidToken; continue; }
    if (detail::iequals(seg, kNameToken)) { seg = kNameToken; continue; }
    seg = detail::ascii_lower(seg);
    if (seg == "currentcontrolset") seg = "controlset001";
  }
  return p;
}

// Parses a raw event or catalog path. Accepts '\' and '/' separators,
// repeated/trailing separators, surrounding whitespace per component, hive
// aliases, drive letters, %SYSTEMDRIVE%, and the rootless
// "Documents and Settings\..." profile form. The result is normalized.
//
// Throws Error(EmptyPath) when no components survive splitting and
// Error(UnknownRoot) when the first component is not a recognized root.
inline ArtifactPath parse_path(std::string_view raw) {
  std::vector<std::string> comps = detail::split_components(raw);
  if (comps.empty()) fail(ErrorCode::EmptyPath, "no path components in input");

  auto info = detail::recognize_root(comps[0]);
  if (!info)
    fail(ErrorCode::UnknownRoot,
         "unrecognized root '" + comps[0] + "' in '" + std::string(raw) + "'");

  ArtifactPath p;
  p.kind = info->kind;
  p.root = info->canonical;
  p.raw = std::string(raw);
  std::size_t first = info->keep_token_as_segment ? 0 : 1;
  p.segments.assign(comps.begin() + static_cast<std::ptrdiff_t>(first),
                    comps.end());
  return normalize(std::move(p));
}

// Whole-segment prefix relation on normalized paths (reflexive).
inline bool is_prefix_of(const ArtifactPath& prefix, const ArtifactPath& p) {
  if (prefix.kind != p.kind || prefix.root != p.root) return false;
  if (prefix.segments.size() > p.segments.size()) return false;
  for (std::size_t i = 0; i < prefix.segments.size(); ++i)
    if (prefix.segments[i] != p.segments[i]) return false;
  return true;
}

// Canonical display form: root + '\' + segments. A bare root renders with a
// trailing separator so it reads as a location, not a token.
inline std::string to_string(const ArtifactPath& p) {
  std::string out = p.root;
  out.push_back('\\');
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    if (i) out.push_back('\\');
    out += p.segments[i];
  }
  return out;
}

}  // namespace regscope
