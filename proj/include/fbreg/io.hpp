#pragma once

#include <string>

#include "fbreg/grid.hpp"

namespace fbreg {

// Binary field format: magic "VFB1", u32 version = 1, u32 n, u32 m,
// u64 dims[n], f64 origin[n], f64 spacing, then m * prod(dims) f64 values,
// node-lexicographic with the last axis fastest and the component index
// innermost. Little-endian throughout. Round trips are bit-exact.
void write_field(const std::string& path, const VectorField& u);
VectorField read_field(const std::string& path);

// Locale-free numeric formatting ('.' decimal, shortest round-trip digits).
std::string format_double(double v);

// Minimal CSV writer with a fixed header; all numbers via format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);

 private:
  struct Impl;
  Impl* impl_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fbreg
