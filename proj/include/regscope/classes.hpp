#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "regscope/errors.hpp"

namespace regscope {

// Sample classes and their wire codes. The enumerator order below is the
// canonical order used everywhere a deterministic ordering over classes is
// needed (CSV columns, confusion-matrix axes, argmax tie-breaks).
enum class Class : int {
  Cleanware = 0,
  Malware = 1,    // generic malicious, family unknown
  Worm = -1,
  Botnet = -2,
  Trojan = -3,
};

inline constexpr std::array<Class, 5> kClassOrder = {
    Class::Cleanware, Class::Malware, Class::Worm, Class::Botnet,
    Class::Trojan};

inline int class_code(Class c) { return static_cast<int>(c); }

inline std::optional<Class> class_from_code(int code) {
  switch (code) {
    case 0: return Class::Cleanware;
    case 1: return Class::Malware;
    case -1: return Class::Worm;
    case -2: return Class::Botnet;
    case -3: return Class::Trojan;
    default: return std::nullopt;
  }
}

inline const char* class_name(Class c) {
  switch (c) {
    case Class::Cleanware: return "cleanware";
    case Class::Malware: return "malware";
    case Class::Worm: return "worm";
    case Class::Botnet: return "botnet";
    case Class::Trojan: return "trojan";
  }
  return "?";
}

inline std::optional<Class> class_from_name(std::string_view name) {
  for (Class c : kClassOrder)
    if (name == class_name(c)) return c;
  return std::nullopt;
}

// Position in kClassOrder; total over all enumerators.
inline std::size_t class_rank(Class c) {
  for (std::size_t i = 0; i < kClassOrder.size(); ++i)
    if (kClassOrder[i] == c) return i;
  return kClassOrder.size();
}

// Which label alphabet an experiment runs over.
//   Flat5          - all five classes as-is
//   BinaryCleanMal - cleanware vs malicious; family labels coerce to Malware
//   Family4        - cleanware + the three families; generic Malware invalid
enum class ClassSet { Flat5, BinaryCleanMal, Family4 };

inline const char* class_set_name(ClassSet s) {
  switch (s) {
    case ClassSet::Flat5: return "flat5";
    case ClassSet::BinaryCleanMal: return "binary";
    case ClassSet::Family4: return "family4";
  }
  return "?";
}

inline std::optional<ClassSet> class_set_from_name(std::string_view name) {
  if (name == "flat5") return ClassSet::Flat5;
  if (name == "binary") return ClassSet::BinaryCleanMal;
  if (name == "family4") return ClassSet::Family4;
  return std::nullopt;
}

// Maps a raw label into the given set. Returns nullopt when the label has no
// representation there (generic Malware under Family4).
inline std::optional<Class> coerce_class(Class c, ClassSet set) {
  switch (set) {
    case ClassSet::Flat5:
      return c;
    case ClassSet::BinaryCleanMal:
      return c == Class::Cleanware ? Class::Cleanware : Class::Malware;
    case ClassSet::Family4:
      if (c == Class::Malware) return std::nullopt;
      return c;
  }
  return std::nullopt;
}

// Guest OS a behavior report was captured on.
enum class Os { Win7, Win8_1, Win10, Unknown };

inline const char* os_name(Os os) {
  switch (os) {
    case Os::Win7: return "Win7";
    case Os::Win8_1: return "Win8.1";
    case Os::Win10: return "Win10";
    case Os::Unknown: return "Unknown";
  }
  return "Unknown";
}

inline std::optional<Os> os_from_name(std::string_view name) {
  if (name == "Win7") return Os::Win7;
  if (name == "Win8.1") return Os::Win8_1;
  if (name == "Win10") return Os::Win10;
  if (name == "Unknown") return Os::Unknown;
  return std::nullopt;
}

}  // namespace regscope
