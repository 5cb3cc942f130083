#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace chlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  size_t n_cols;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out)
    throw Error(ErrorKind::Io, "cannot open for writing: " + path);
  impl_->n_cols = columns.size();
  for (size_t i = 0; i < columns.size(); ++i)
    impl_->out << (i ? "," : "") << columns[i];
  impl_->out << "\n";
}

CsvWriter::~CsvWriter() {
  close();
  delete impl_;
}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == impl_->n_cols, ErrorKind::Io, "csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    impl_->out << (i ? "," : "") << format_double(values[i]);
  impl_->out << "\n";
}

void CsvWriter::close() {
  if (impl_->out.is_open()) impl_->out.close();
}

void field_to_csv(const Field& f, const std::string& path) {
  CsvWriter w(path, {"x", "value"});
  for (int j = 0; j < f.size(); ++j) w.row({f.grid.node(j), f[j]});
}

Field field_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open: " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> xs, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    require(comma != std::string::npos, ErrorKind::Io,
            "malformed field csv line in " + path);
    xs.push_back(std::stod(line.substr(0, comma)));
    vs.push_back(std::stod(line.substr(comma + 1)));
  }
  const int n = static_cast<int>(vs.size());
  require(n >= 16, ErrorKind::Io, "field csv too short: " + path);
  const double dx = xs[1] - xs[0];
  for (int j = 1; j + 1 < n; ++j)
    require(std::fabs(xs[static_cast<size_t>(j + 1)] - xs[static_cast<size_t>(j)] - dx) <
                1e-9 * std::fabs(dx),
            ErrorKind::Io, "field csv grid is not uniform: " + path);
  Grid g = Grid::make(n, dx * n);
  Field f(g);
  f.values = vs;
  return f;
}

void field_to_binary(const Field& f, const std::string& path) {
  doubles_to_binary(f.values, path);
}

void doubles_to_binary(const std::vector<double>& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Field field_from_binary(const Grid& g, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open: " + path);
  Field f(g);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  require(in.gcount() == static_cast<std::streamsize>(f.values.size() * sizeof(double)),
          ErrorKind::Io, "binary field shorter than grid: " + path);
  return f;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open for writing: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

uint64_t fnv1a64(const void* data, size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return fnv1a64_hex(os.str());
}

}  // namespace chlab
