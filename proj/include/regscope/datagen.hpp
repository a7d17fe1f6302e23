#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "regscope/catalog.hpp"
#include "regscope/classes.hpp"
#include "regscope/dataset.hpp"
#include "regscope/errors.hpp"
#include "regscope/rng.hpp"

namespace regscope {

// Per-class Bernoulli profile: hit_prob[i] is the probability that location
// P(i+1) fires for a sample of this class.
struct ClassProfile {
  Class cls = Class::Cleanware;
  std::array<double, kStandardFeatureWidth> hit_prob{};
};

namespace datagen_detail {

inline ClassProfile make_profile(Class cls, double background_low,
                                 double background_tail,
                                 std::initializer_list<int> high_ids,
                                 double high) {
  ClassProfile p;
  p.cls = cls;
  for (std::size_t i = 0; i < kStandardFeatureWidth; ++i)
    p.hit_prob[i] = (i < 34) ? background_low : background_tail;
  for (int id : high_ids) p.hit_prob[static_cast<std::size_t>(id - 1)] = high;
  return p;
}

}  // namespace datagen_detail

// Built-in class behavior profiles, qualitative shape:
//  - all three malware families hit the profile/system locations P17, P18
//    often and their own persistence/config sets besides;
//  - trojans also favor control-set and explorer keys (P1, P2, P4, P14,
//    P19, P20);
//  - bots favor machine-software and user-software hives (P1, P2, P8, P13);
//  - worms favor system-wide spread points (P4, P8, P13, P20, P21);
//  - cleanware concentrates on the installer/vendor block P37..P45 and is
//    low everywhere malware is high.
// Background rates: 0.10 for P1-P34, 0.05 for the P35+ tail on malware,
// 0.10 everywhere unlisted for cleanware.
inline std::vector<ClassProfile> default_profiles() {
  using datagen_detail::make_profile;
  std::vector<ClassProfile> out;
  out.push_back(make_profile(Class::Cleanware, 0.10, 0.10,
                             {37, 38, 39, 40, 41, 42, 43, 44, 45}, 0.80));
  out.push_back(make_profile(Class::Worm, 0.10, 0.05,
                             {4, 8, 13, 17, 18, 20, 21}, 0.80));
  out.push_back(make_profile(Class::Botnet, 0.10, 0.05,
                             {1, 2, 8, 13, 17, 18}, 0.80));
  out.push_back(make_profile(Class::Trojan, 0.10, 0.05,
                             {1, 2, 4, 14, 17, 18, 19, 20}, 0.80));
  return out;
}

// Stress variant: every probability moved halfway toward 0.5, shrinking the
// class separation without changing which locations are informative.
inline std::vector<ClassProfile> hard_profiles() {
  std::vector<ClassProfile> out = default_profiles();
  for (ClassProfile& p : out)
    for (double& v : p.hit_prob) v = 0.5 * v + 0.25;
  return out;
}

// Draws n_per_class samples per profile. Determinism layout: profile i uses
// SplitMix64(derive_seed(seed, i)); within a sample, bits are drawn for
// P1..P47 in order (one next_double per bit). Sample names are
// "<class>-<j>" and the guest OS cycles Win7, Win8.1, Win10.
inline Dataset generate_dataset(const std::vector<ClassProfile>& profiles,
                                std::size_t n_per_class, std::uint64_t seed) {
  if (profiles.empty())
    fail(ErrorCode::InvalidProfile, "no profiles given");
  if (n_per_class == 0)
    fail(ErrorCode::InvalidArgument, "n_per_class must be positive");
  for (const ClassProfile& p : profiles)
    for (double v : p.hit_prob)
      if (!(v >= 0.0 && v <= 1.0))
        fail(ErrorCode::InvalidProfile,
             std::string("hit probability out of [0,1] for class '") +
                 class_name(p.cls) + "'");

  static const Os kOsCycle[3] = {Os::Win7, Os::Win8_1, Os::Win10};
  Dataset ds;
  ds.class_set = ClassSet::Flat5;
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    const ClassProfile& prof = profiles[pi];
    SplitMix64 rng(derive_seed(seed, pi));
    for (std::size_t j = 0; j < n_per_class; ++j) {
      LabeledSample s;
      s.label = prof.cls;
      s.os = kOsCycle[j % 3];
      s.sample_name =
          std::string(class_name(prof.cls)) + "-" + std::to_string(j);
      s.features = FeatureVector(kStandardFeatureWidth);
      for (std::size_t i = 0; i < kStandardFeatureWidth; ++i)
        if (rng.next_double() < prof.hit_prob[i])
          s.features.set_location(static_cast<int>(i + 1));
      ds.samples.push_back(std::move(s));
    }
  }
  return ds;
}

// Profile CSV: header class,P1,...,P47; one row per profile with the class
// name and fixed-precision probabilities.
inline std::string profiles_to_csv(const std::vector<ClassProfile>& profiles) {
  std::string out = "class";
  for (std::size_t i = 1; i <= kStandardFeatureWidth; ++i)
    out += ",P" + std::to_string(i);
  out.push_back('\n');
  char buf[32];
  for (const ClassProfile& p : profiles) {
    out += class_name(p.cls);
    for (double v : p.hit_prob) {
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      out.push_back(',');
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

inline std::vector<ClassProfile> profiles_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.size() < 2)
    fail(ErrorCode::InvalidProfile, "profile csv needs a header and rows");

  auto split = [](std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i)
      if (i == line.size() || line[i] == ',') {
        out.emplace_back(line.substr(start, i - start));
        start = i + 1;
      }
    return out;
  };

  std::vector<std::string> header = split(lines[0]);
  if (header.size() != kStandardFeatureWidth + 1 || header[0] != "class")
    fail(ErrorCode::InvalidProfile,
         "profile csv header must be class,P1,...,P" +
             std::to_string(kStandardFeatureWidth));
  for (std::size_t i = 1; i < header.size(); ++i)
    if (header[i] != "P" + std::to_string(i))
      fail(ErrorCode::InvalidProfile, "bad header column '" + header[i] + "'");

  std::vector<ClassProfile> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::vector<std::string> f = split(lines[li]);
    if (f.size() != kStandardFeatureWidth + 1)
      fail(ErrorCode::InvalidProfile,
           "line " + std::to_string(li + 1) + ": wrong field count");
    ClassProfile p;
    auto cls = class_from_name(f[0]);
    if (!cls)
      fail(ErrorCode::InvalidProfile,
           "line " + std::to_string(li + 1) + ": unknown class '" + f[0] +
               "'");
    p.cls = *cls;
    for (std::size_t i = 0; i < kStandardFeatureWidth; ++i) {
      try {
        std::size_t used = 0;
        p.hit_prob[i] = std::stod(f[i + 1], &used);
        if (used != f[i + 1].size()) throw std::invalid_argument("trail");
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidProfile,
             "line " + std::to_string(li + 1) + ": bad probability '" +
                 f[i + 1] + "'");
      }
      if (!(p.hit_prob[i] >= 0.0 && p.hit_prob[i] <= 1.0))
        fail(ErrorCode::InvalidProfile,
             "line " + std::to_string(li + 1) + ": probability out of [0,1]");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace regscope
