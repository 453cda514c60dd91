#pragma once

// Line-delimited sample files.
//
//   {"n":2,"k":1,"alpha":0,"beta":1}
//   [[0.25],[0.5]]
//   [[0.75],[0.125]]
//
// The first record is the header; every following non-blank line is one
// profile written as n lists of k numbers. Values are written with 17
// significant digits so a save/load cycle is exact.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "ssg/model.hpp"

namespace ssg {

inline std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_samples(std::ostream& out, const SampleSet& sample) {
  out << "{\"n\":" << sample.bidders() << ",\"k\":" << sample.items()
      << ",\"alpha\":" << format_exact(sample.range().lo)
      << ",\"beta\":" << format_exact(sample.range().hi) << "}\n";
  for (const auto& profile : sample) {
    out << '[';
    for (std::size_t i = 0; i < profile.bidders(); ++i) {
      if (i != 0) out << ',';
      out << '[';
      for (std::size_t j = 0; j < profile.items(); ++j) {
        if (j != 0) out << ',';
        out << format_exact(profile(i, j));
      }
      out << ']';
    }
    out << "]\n";
  }
}

inline void save_samples(const std::string& path, const SampleSet& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_samples(out, sample);
}

struct SampleShape {
  std::size_t bidders = 1;
  std::size_t items = 1;
  Range range{};
};

inline SampleSet read_samples(std::istream& in, const SampleShape& declared,
                              const std::string& origin = "<stream>") {
  using nlohmann::json;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<ValuationProfile> profiles;
  auto fail = [&](const std::string& what) {
    throw ParseError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(std::string("malformed record: ") + e.what());
    }
    if (!have_header) {
      if (!record.is_object()) fail("first record must be the {n, k, alpha, beta} header");
      try {
        const auto n = record.at("n").get<std::size_t>();
        const auto k = record.at("k").get<std::size_t>();
        const Range range{record.at("alpha").get<double>(), record.at("beta").get<double>()};
        if (n != declared.bidders || k != declared.items) {
          fail("header dimensions (" + std::to_string(n) + ", " + std::to_string(k) +
               ") do not match the declared (" + std::to_string(declared.bidders) + ", " +
               std::to_string(declared.items) + ")");
        }
        if (!(range == declared.range)) fail("header range does not match the declared range");
      } catch (const json::exception& e) {
        fail(std::string("bad header: ") + e.what());
      }
      have_header = true;
      continue;
    }
    if (!record.is_array() || record.size() != declared.bidders) {
      fail("dimension mismatch: expected " + std::to_string(declared.bidders) + " bidder rows");
    }
    std::vector<double> values;
    values.reserve(declared.bidders * declared.items);
    for (const auto& row : record) {
      if (!row.is_array() || row.size() != declared.items) {
        fail("dimension mismatch: expected " + std::to_string(declared.items) + " item values");
      }
      for (const auto& v : row) {
        if (!v.is_number()) fail("non-numeric value");
        const double x = v.get<double>();
        if (!declared.range.contains(x)) {
          fail("value " + format_exact(x) + " out of range [" + format_exact(declared.range.lo) +
               ", " + format_exact(declared.range.hi) + "]");
        }
        values.push_back(x);
      }
    }
    profiles.emplace_back(declared.bidders, declared.items, std::move(values), declared.range);
  }
  if (profiles.empty()) throw ParseError(origin + ": empty sample");
  return SampleSet(std::move(profiles), declared.range, LoadedFrom{origin});
}

inline SampleSet load_samples(const std::string& path, const SampleShape& declared) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_samples(in, declared, path);
}

// Reads the header only, for callers that do not know the shape in advance.
inline SampleShape peek_sample_shape(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto header = nlohmann::json::parse(line);
      return SampleShape{header.at("n").get<std::size_t>(), header.at("k").get<std::size_t>(),
                         Range{header.at("alpha").get<double>(), header.at("beta").get<double>()}};
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": bad header: " + e.what());
    }
  }
  throw ParseError(path + ": empty sample");
}

}  // namespace ssg
