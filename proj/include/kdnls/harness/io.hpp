#pragma once

// Text and binary persistence: shortest round-trip floats, CSV tables,
// snapshots, FNV-1a content hashes.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "kdnls/spectral/field.hpp"

namespace kdnls {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw Error("table " + name + ": row width mismatch");
    rows.push_back(std::move(row));
  }
  void add(const std::vector<double>& row) {
    std::vector<std::string> r;
    r.reserve(row.size());
    for (double v : row) r.push_back(format_double(v));
    add(std::move(r));
  }
  std::string csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error("cannot write " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// "KDNLS1 n L t\n" then re/im doubles for modes -n/2 .. n/2-1.
inline std::string snapshot_bytes(const ComplexField& f) {
  const auto& g = f.grid;
  std::string out = "KDNLS1 " + std::to_string(g.size()) + " " + format_double(g.half_length()) + " " +
                    format_double(f.t) + "\n";
  const long half = static_cast<long>(g.size() / 2);
  const std::size_t head = out.size();
  out.resize(head + 16 * g.size());
  char* p = out.data() + head;
  for (long j = -half; j < half; ++j) {
    const cplx c = f.coeffs[g.slot(j)];
    const double re = c.real(), im = c.imag();
    std::memcpy(p, &re, 8);
    std::memcpy(p + 8, &im, 8);
    p += 16;
  }
  return out;
}

inline ComplexField parse_snapshot(std::string_view bytes) {
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw Error("snapshot: missing header");
  std::istringstream hs{std::string(bytes.substr(0, nl))};
  std::string magic, ls, ts;
  std::size_t n = 0;
  hs >> magic >> n >> ls >> ts;
  if (magic != "KDNLS1" || !hs) throw Error("snapshot: bad header");
  double L = 0.0, t = 0.0;
  if (std::from_chars(ls.data(), ls.data() + ls.size(), L).ec != std::errc() ||
      std::from_chars(ts.data(), ts.data() + ts.size(), t).ec != std::errc())
    throw Error("snapshot: bad header numbers");
  if (bytes.size() != nl + 1 + 16 * n) throw Error("snapshot: payload size does not match n");
  SpectralGrid g = make_grid(n, L);
  CVec c(n);
  const char* p = bytes.data() + nl + 1;
  const long half = static_cast<long>(n / 2);
  for (long j = -half; j < half; ++j) {
    double re, im;
    std::memcpy(&re, p, 8);
    std::memcpy(&im, p + 8, 8);
    c[g.slot(j)] = cplx(re, im);
    p += 16;
  }
  return ComplexField(g, std::move(c), t);
}

inline void write_snapshot(const std::filesystem::path& path, const ComplexField& f) {
  write_text(path, snapshot_bytes(f));
}

inline ComplexField read_snapshot(const std::filesystem::path& path) { return parse_snapshot(read_text(path)); }

}  // namespace kdnls
