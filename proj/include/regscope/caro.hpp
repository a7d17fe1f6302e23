#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regscope/classes.hpp"
#include "regscope/errors.hpp"
#include "regscope/paths.hpp"  // detail::trim / ascii_lower / iequals

namespace regscope {

// A vendor detection name decomposed into its conventional fields. Vendors
// write the same scheme three ways (dotted, colon+slash, uri), and real
// feeds add spacing typos and stray file extensions; the parser absorbs all
// of that. Only `family` is guaranteed non-empty.
struct CaroName {
  std::string raw;
  std::string type;                   // e.g. "Trojan-Spy"; may be empty
  std::string platform;               // e.g. "Win32"; may be empty
  std::string family;                 // never empty on successful parse
  std::string variant;                // dotted tail, e.g. "a" or "SdBot.e"
  std::vector<std::string> suffixes;  // "!"-modifiers, in order
  std::string residue;                // trailing junk (file extension)
  bool conforming = true;
  std::string nonconforming_reason;   // set when conforming == false
};

namespace caro_detail {

// Type tokens are recognized by prefix so compound forms (Trojan-Spy,
// Trojan-Dropper, Ransom.Win32...) classify without an exhaustive list.
inline bool is_type_token(std::string_view tok) {
  static const char* kPrefixes[] = {"trojan",  "backdoor", "virus",
                                    "rootkit", "adware",   "spyware",
                                    "ransom",  "virtool",  "hacktool"};
  std::string t = detail::ascii_lower(tok);
  for (const char* p : kPrefixes)
    if (t.rfind(p, 0) == 0) return true;
  if (t.rfind("worm", 0) == 0) return true;          // Worm, WormX
  if (t.size() >= 5 && t.compare(t.size() - 5, 5, "-worm") == 0) return true;
  return false;
}

inline bool is_worm_type(std::string_view tok) {
  std::string t = detail::ascii_lower(tok);
  if (t.rfind("worm", 0) == 0) return true;
  return t.size() >= 5 && t.compare(t.size() - 5, 5, "-worm") == 0;
}

// Closed platform set. Deliberately excludes "Generic": names like
// Generic/GenericKD are engine family labels, not platforms.
inline bool is_platform_token(std::string_view tok) {
  static const char* kPlatforms[] = {
      "win32", "w32",  "win64", "w64",   "win16", "msil",      "vbs",
      "js",    "vba",  "html",  "java",  "elf",   "androidos", "android",
      "macos", "osx",  "linux", "unix",  "script"};
  std::string t = detail::ascii_lower(tok);
  for (const char* p : kPlatforms)
    if (t == p) return true;
  return false;
}

// File extensions that show up glued onto detection names when a feed leaks
// the scanned filename into the label.
inline bool is_file_extension(std::string_view tok) {
  static const char* kExts[] = {"exe", "dll",  "doc", "docx", "xls", "xlsx",
                                "scr", "bat",  "msi", "pdf",  "htm", "html",
                                "hta", "zip",  "js",  "vbs"};
  std::string t = detail::ascii_lower(tok);
  for (const char* e : kExts)
    if (t == e) return true;
  return false;
}

}  // namespace caro_detail

// Parses a detection name. Accepted surface syntaxes:
//   dotted   Type.Platform.Family.Variant...
//   slashed  Type/Platform.Family.Variant   (also Platform/Family...)
//   colon    Type:Platform/Family.Variant!suffix
//   uri      type://platform/family.group...
// Field order is type, platform, family, variant chain; every field except
// family is optional. "!suffix" modifiers belong on the final token; a
// trailing file-extension token becomes residue. Both cases flag the name
// nonconforming but still yield the structured fields.
//
// Throws Error(Unparseable) when no family token can be derived.
inline CaroName parse_caro(std::string_view raw) {
  CaroName out;
  out.raw = std::string(raw);

  // Collapse the three surface syntaxes into one separator alphabet.
  std::string text(raw);
  if (auto pos = text.find("://"); pos != std::string::npos)
    text.replace(pos, 3, "/");
  std::replace(text.begin(), text.end(), ':', '/');

  // Tokenize on '.' and '/', trimming spacing noise, dropping empties.
  std::vector<std::string> tokens;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '.' || text[i] == '/') {
      std::string_view piece = detail::trim(
          std::string_view(text).substr(start, i - start));
      if (!piece.empty()) tokens.emplace_back(piece);
      start = i + 1;
    }
  }
  if (tokens.empty())
    fail(ErrorCode::Unparseable, "no tokens in '" + out.raw + "'");

  std::vector<std::string> reasons;

  // Trailing file extension -> residue, never part of the variant chain.
  if (tokens.size() >= 2 && caro_detail::is_file_extension(tokens.back())) {
    out.residue = tokens.back();
    tokens.pop_back();
    reasons.push_back("trailing file extension '" + out.residue + "'");
  }

  // Pull '!' modifiers out of the tokens. Conforming names carry them on the
  // final token only.
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t bang = tokens[i].find('!');
    if (bang == std::string::npos) {
      ++i;
      continue;
    }
    std::string body = tokens[i].substr(0, bang);
    std::string rest = tokens[i].substr(bang + 1);
    for (std::size_t p = 0;;) {
      std::size_t q = rest.find('!', p);
      std::string piece = rest.substr(p, q == std::string::npos ? q : q - p);
      if (!piece.empty()) out.suffixes.push_back(piece);
      if (q == std::string::npos) break;
      p = q + 1;
    }
    if (i + 1 != tokens.size())
      reasons.push_back("'!' modifier not on final token");
    if (body.empty()) {
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      tokens[i] = std::move(body);
      ++i;
    }
  }

  // Positional assignment: [type] [platform] family [variant...].
  std::size_t idx = 0;
  if (idx < tokens.size() && caro_detail::is_type_token(tokens[idx]))
    out.type = tokens[idx++];
  if (idx < tokens.size() && caro_detail::is_platform_token(tokens[idx]))
    out.platform = tokens[idx++];
  if (idx >= tokens.size())
    fail(ErrorCode::Unparseable,
         "no family token in '" + out.raw + "'");
  out.family = tokens[idx++];
  for (; idx < tokens.size(); ++idx) {
    if (!out.variant.empty()) out.variant.push_back('.');
    out.variant += tokens[idx];
  }

  if (!reasons.empty()) {
    out.conforming = false;
    for (std::size_t i = 0; i < reasons.size(); ++i) {
      if (i) out.nonconforming_reason += "; ";
      out.nonconforming_reason += reasons[i];
    }
  }
  return out;
}

// Canonical dotted rendering. parse_caro(format_caro(n)) == n for every
// conforming parse result (round-trip property).
inline std::string format_caro(const CaroName& n) {
  std::string out;
  auto append = [&out](std::string_view piece) {
    if (piece.empty()) return;
    if (!out.empty()) out.push_back('.');
    out += piece;
  };
  append(n.type);
  append(n.platform);
  append(n.family);
  append(n.variant);
  for (const std::string& s : n.suffixes) {
    out.push_back('!');
    out += s;
  }
  append(n.residue);
  return out;
}

// Coarse class from the name alone. Precedence: trojan-/worm-type tokens
// first, then a "bot" substring anywhere in type or family. Names that hit
// none of these rules get no class (generic detections, cleanware, junk).
inline std::optional<Class> coarse_class(const CaroName& n) {
  std::string type = detail::ascii_lower(n.type);
  if (type.rfind("trojan", 0) == 0) return Class::Trojan;
  if (!n.type.empty() && caro_detail::is_worm_type(n.type)) return Class::Worm;
  std::string family = detail::ascii_lower(n.family);
  if (type.find("bot") != std::string::npos ||
      family.find("bot") != std::string::npos)
    return Class::Botnet;
  return std::nullopt;
}

}  // namespace regscope
