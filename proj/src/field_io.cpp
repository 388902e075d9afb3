#include "ahlfors/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ahlfors/errors.hpp"

namespace ahlfors {

namespace {

constexpr const char* kMagic = "GFLD1";

void byteswap_doubles(char* bytes, size_t count) {
  for (size_t k = 0; k < count; ++k) {
    char* p = bytes + 8 * k;
    std::swap(p[0], p[7]);
    std::swap(p[1], p[6]);
    std::swap(p[2], p[5]);
    std::swap(p[3], p[4]);
  }
}

std::string header_line(const GridShape& s, int rank, int sym) {
  std::ostringstream h;
  h << kMagic << " n=" << s.n << " shape=";
  for (int a = 0; a < s.n; ++a) {
    if (a) h << ',';
    h << s.dims[size_t(a)];
  }
  h << " rank=" << rank << " sym=" << sym
    << " layout=component-major dtype=f64le\n";
  return h.str();
}

void write_raw(const std::string& path, const GridShape& s, int rank, int sym,
               const std::vector<ArrayXd>& comps) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  const std::string header = header_line(s, rank, sym);
  out.write(header.data(), std::streamsize(header.size()));
  for (const ArrayXd& c : comps) {
    const size_t bytes = sizeof(double) * size_t(c.size());
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(c.data()), std::streamsize(bytes));
    } else {
      std::vector<char> buf(bytes);
      std::memcpy(buf.data(), c.data(), bytes);
      byteswap_doubles(buf.data(), size_t(c.size()));
      out.write(buf.data(), std::streamsize(bytes));
    }
  }
  if (!out) throw Error("write failed: " + path);
}

std::map<std::string, std::string> parse_pairs(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream words(line);
  std::string word;
  words >> word;  // magic, already checked
  while (words >> word) {
    const size_t eq = word.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= word.size())
      throw ShapeMismatch("field file: malformed header token '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return kv;
}

int parse_int(const std::map<std::string, std::string>& kv,
              const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end())
    throw ShapeMismatch("field file: header missing '" + key + "'");
  size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(it->second, &used);
  } catch (const std::exception&) {
    throw ShapeMismatch("field file: bad integer for '" + key + "'");
  }
  if (used != it->second.size())
    throw ShapeMismatch("field file: bad integer for '" + key + "'");
  return value;
}

}  // namespace

FieldAny read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);

  char magic[5];
  in.read(magic, 5);
  if (in.gcount() != 5 || std::memcmp(magic, kMagic, 5) != 0)
    throw BadMagic("field file: not a GFLD1 file: " + path);

  std::string rest;
  if (!std::getline(in, rest))
    throw ShapeMismatch("field file: unterminated header");
  const auto kv = parse_pairs(kMagic + rest);

  const int n = parse_int(kv, "n");
  const int rank = parse_int(kv, "rank");
  const int sym = parse_int(kv, "sym");
  if (kv.find("shape") == kv.end())
    throw ShapeMismatch("field file: header missing 'shape'");
  if (kv.find("layout") == kv.end() || kv.at("layout") != "component-major")
    throw ShapeMismatch("field file: unsupported layout");
  if (kv.find("dtype") == kv.end() || kv.at("dtype") != "f64le")
    throw ShapeMismatch("field file: unsupported dtype");

  std::vector<Index> axes;
  {
    std::istringstream ss(kv.at("shape"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t used = 0;
      long v = 0;
      try {
        v = std::stol(item, &used);
      } catch (const std::exception&) {
        throw ShapeMismatch("field file: bad shape entry '" + item + "'");
      }
      if (used != item.size())
        throw ShapeMismatch("field file: bad shape entry '" + item + "'");
      axes.push_back(Index(v));
    }
  }

  GridShape s;
  try {
    s = GridShape::make(n, axes);
  } catch (const BadShape& e) {
    throw ShapeMismatch(std::string("field file: ") + e.what());
  }

  int comps = 0;
  if (rank == 0 && sym == 0) comps = 1;
  else if (rank == 1 && sym == 0) comps = n;
  else if (rank == 2 && sym == 1) comps = sym_count(n);
  else if (rank == 2 && sym == -1) comps = asym_count(n);
  else throw ShapeMismatch("field file: unsupported rank/sym combination");

  std::vector<ArrayXd> data;
  data.reserve(size_t(comps));
  for (int k = 0; k < comps; ++k) {
    ArrayXd c(s.total);
    const size_t bytes = sizeof(double) * size_t(s.total);
    in.read(reinterpret_cast<char*>(c.data()), std::streamsize(bytes));
    if (size_t(in.gcount()) != bytes)
      throw TruncatedPayload("field file: payload ends early in " + path);
    if constexpr (std::endian::native != std::endian::little)
      byteswap_doubles(reinterpret_cast<char*>(c.data()), size_t(s.total));
    data.push_back(std::move(c));
  }
  if (in.peek() != std::ifstream::traits_type::eof())
    throw ShapeMismatch("field file: trailing bytes after payload");

  if (rank == 0) return ScalarField{s, std::move(data)};
  if (rank == 1) return OneFormField{s, std::move(data)};
  if (sym == 1) return SymTensorField{s, std::move(data)};
  return TwoFormField{s, std::move(data)};
}

void write_field(const std::string& path, const ScalarField& f) {
  write_raw(path, f.shape, 0, 0, f.comp);
}
void write_field(const std::string& path, const OneFormField& f) {
  write_raw(path, f.shape, 1, 0, f.comp);
}
void write_field(const std::string& path, const TwoFormField& f) {
  write_raw(path, f.shape, 2, -1, f.comp);
}
void write_field(const std::string& path, const SymTensorField& f) {
  write_raw(path, f.shape, 2, 1, f.comp);
}
void write_field(const std::string& path, const FieldAny& f) {
  std::visit([&path](const auto& field) { write_field(path, field); }, f);
}

}  // namespace ahlfors
