#include "fbreg/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>

namespace fbreg {

namespace {

template <typename T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw InputError("field file: truncated");
  return v;
}

}  // namespace

void write_field(const std::string& path, const VectorField& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("write_field: cannot open " + path);
  os.write("VFB1", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid.n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.m));
  for (int a = 0; a < u.grid.n; ++a)
    put<std::uint64_t>(os, static_cast<std::uint64_t>(u.grid.dims[static_cast<size_t>(a)]));
  for (int a = 0; a < u.grid.n; ++a) put<double>(os, u.grid.origin[static_cast<size_t>(a)]);
  put<double>(os, u.grid.h);
  os.write(reinterpret_cast<const char*>(u.values.data()),
           static_cast<std::streamsize>(u.values.size() * sizeof(double)));
  if (!os) throw InputError("write_field: write failed for " + path);
}

VectorField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "VFB1", 4) != 0)
    throw InputError("read_field: bad magic, not a field file");
  const auto version = get<std::uint32_t>(is);
  if (version != 1) throw InputError("read_field: unsupported version");
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  const auto m = static_cast<int>(get<std::uint32_t>(is));
  if (n < 1 || n > 3 || m < 1 || m > kMaxCodim) throw InputError("read_field: bad n or m");
  std::array<std::int64_t, 3> dims{1, 1, 1};
  for (int a = 0; a < n; ++a) dims[static_cast<size_t>(a)] = static_cast<std::int64_t>(get<std::uint64_t>(is));
  Point origin{0, 0, 0};
  for (int a = 0; a < n; ++a) origin[static_cast<size_t>(a)] = get<double>(is);
  const double h = get<double>(is);
  Grid g(n, dims, origin, h);
  VectorField u(g, m);
  is.read(reinterpret_cast<char*>(u.values.data()),
          static_cast<std::streamsize>(u.values.size() * sizeof(double)));
  if (!is) throw InputError("read_field: truncated payload");
  return u;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CsvWriter::Impl {
  std::ofstream os;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->os.open(path);
  if (!impl_->os) throw InputError("CsvWriter: cannot open " + path);
  for (size_t i = 0; i < header.size(); ++i)
    impl_->os << header[i] << (i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    impl_->os << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot open " + path + " for writing");
  os << content;
}

}  // namespace fbreg
