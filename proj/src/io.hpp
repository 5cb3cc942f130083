#ifndef CHLAB_IO_HPP
#define CHLAB_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"

namespace chlab {

// All CSV numbers print with 17 significant digits (bit-exact doubles).
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void close();

 private:
  struct Impl;
  Impl* impl_;
};

// Fields serialize as CSV columns (x, value)...
void field_to_csv(const Field& f, const std::string& path);
Field field_from_csv(const std::string& path);

// ...and as raw little-endian doubles for checkpointing (values only).
void field_to_binary(const Field& f, const std::string& path);
Field field_from_binary(const Grid& g, const std::string& path);

void doubles_to_binary(const std::vector<double>& v, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a 64-bit fingerprints (hex) for manifest determinism checks.
uint64_t fnv1a64(const void* data, size_t len);
std::string fnv1a64_hex(const std::string& bytes);
std::string file_fingerprint(const std::string& path);

}  // namespace chlab

#endif
