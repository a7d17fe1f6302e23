#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "regscope/catalog.hpp"
#include "regscope/classes.hpp"
#include "regscope/errors.hpp"

namespace regscope {

// One triaged sample: its artifact bits plus label and capture metadata.
struct LabeledSample {
  FeatureVector features{kStandardFeatureWidth};
  Class label = Class::Cleanware;
  Os os = Os::Unknown;
  std::string sample_name;

  friend bool operator==(const LabeledSample& a, const LabeledSample& b) {
    return a.features == b.features && a.label == b.label && a.os == b.os &&
           a.sample_name == b.sample_name;
  }
};

struct Dataset {
  std::vector<LabeledSample> samples;
  ClassSet class_set = ClassSet::Flat5;

  std::size_t size() const { return samples.size(); }

  std::size_t feature_width() const {
    return samples.empty() ? kStandardFeatureWidth : samples[0].features.size();
  }

  // Distinct classes present, in canonical class order.
  std::vector<Class> class_list() const {
    std::vector<Class> out;
    for (Class c : kClassOrder) {
      for (const auto& s : samples)
        if (s.label == c) {
          out.push_back(c);
          break;
        }
    }
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.class_set == b.class_set && a.samples == b.samples;
  }
};

namespace csv_detail {

inline bool needs_quoting(std::string_view field) {
  for (char c : field)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
  return false;
}

inline void append_field(std::string& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

// Splits one line into fields, honoring double-quoted fields with ""
// escapes. Embedded newlines are not supported (sample names never carry
// them); an unterminated quote is a format error.
inline std::vector<std::string> split_line(std::string_view line,
                                           std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (in_quotes)
    fail(ErrorCode::MalformedDataset,
         "line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace csv_detail

// Dataset CSV layout: header `sample,os,label,P1,...,Pn`, then one row per
// sample with the display name (RFC 4180 quoting), OS tag, signed label
// code, and one 0/1 cell per catalog location.
inline std::string save_dataset(const Dataset& ds) {
  std::size_t width = ds.feature_width();
  std::string out = "sample,os,label";
  for (std::size_t i = 1; i <= width; ++i)
    out += ",P" + std::to_string(i);
  out.push_back('\n');
  for (const LabeledSample& s : ds.samples) {
    if (s.features.size() != width)
      fail(ErrorCode::DimensionMismatch,
           "sample '" + s.sample_name + "' has width " +
               std::to_string(s.features.size()) + ", dataset width " +
               std::to_string(width));
    csv_detail::append_field(out, s.sample_name);
    out.push_back(',');
    out += os_name(s.os);
    out.push_back(',');
    out += std::to_string(class_code(s.label));
    for (std::size_t i = 0; i < width; ++i) {
      out.push_back(',');
      out.push_back(s.features.test(i) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

// Parses dataset CSV. Labels are coerced into `set`; a label with no
// representation there (generic malware under Family4) is a format error, as
// are unknown OS tags, non-binary feature cells, and row-length mismatches.
inline Dataset load_dataset(std::string_view text,
                            ClassSet set = ClassSet::Flat5) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) fail(ErrorCode::MalformedDataset, "empty file");

  std::vector<std::string> header = csv_detail::split_line(lines[0], 1);
  if (header.size() < 4 || header[0] != "sample" || header[1] != "os" ||
      header[2] != "label")
    fail(ErrorCode::MalformedDataset,
         "header must start with sample,os,label,P1,...");
  std::size_t width = header.size() - 3;
  for (std::size_t i = 0; i < width; ++i)
    if (header[3 + i] != "P" + std::to_string(i + 1))
      fail(ErrorCode::MalformedDataset,
           "feature columns must be P1..Pn in order, got '" + header[3 + i] +
               "'");

  Dataset ds;
  ds.class_set = set;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::vector<std::string> f = csv_detail::split_line(lines[li], li + 1);
    auto bad = [&](const std::string& why) {
      fail(ErrorCode::MalformedDataset,
           "line " + std::to_string(li + 1) + ": " + why);
    };
    if (f.size() != width + 3)
      bad("expected " + std::to_string(width + 3) + " fields, got " +
          std::to_string(f.size()));

    LabeledSample s;
    s.sample_name = f[0];
    auto os = os_from_name(f[1]);
    if (!os) bad("unknown os '" + f[1] + "'");
    s.os = *os;

    int code = 0;
    try {
      std::size_t used = 0;
      code = std::stoi(f[2], &used);
      if (used != f[2].size()) bad("label is not an integer: '" + f[2] + "'");
    } catch (const std::exception&) {
      bad("label is not an integer: '" + f[2] + "'");
    }
    auto cls = class_from_code(code);
    if (!cls) bad("unknown label code " + f[2]);
    auto coerced = coerce_class(*cls, set);
    if (!coerced)
      bad("label '" + std::string(class_name(*cls)) +
          "' not representable in class set '" + class_set_name(set) + "'");
    s.label = *coerced;

    s.features = FeatureVector(width);
    for (std::size_t i = 0; i < width; ++i) {
      if (f[3 + i] == "1")
        s.features.set_location(static_cast<int>(i + 1));
      else if (f[3 + i] != "0")
        bad("feature cell P" + std::to_string(i + 1) +
            " must be 0 or 1, got '" + f[3 + i] + "'");
    }
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// Re-labels a dataset into another class set. Throws on unrepresentable
// labels (Family4 cannot hold generic malware).
inline Dataset coerce_dataset(const Dataset& ds, ClassSet set) {
  Dataset out;
  out.class_set = set;
  out.samples = ds.samples;
  for (LabeledSample& s : out.samples) {
    auto c = coerce_class(s.label, set);
    if (!c)
      fail(ErrorCode::InvalidArgument,
           "label '" + std::string(class_name(s.label)) +
               "' not representable in class set '" + class_set_name(set) +
               "'");
    s.label = *c;
  }
  return out;
}

}  // namespace regscope
