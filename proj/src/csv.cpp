#include "archicop/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "archicop/errors.hpp"

namespace archicop {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

bool try_parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

double parse_double(std::string_view s) {
  double v = 0.0;
  if (!try_parse_double(s, v)) throw ArgumentError("not a number: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      width = fields.size();
      double dummy = 0.0;
      bool numeric = true;
      for (auto f : fields) numeric = numeric && try_parse_double(f, dummy);
      if (!numeric) {
        for (auto f : fields) t.header.emplace_back(f);
        continue;
      }
    }
    if (fields.size() != width) {
      throw ArgumentError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                          " fields, found " + std::to_string(fields.size()));
    }
    std::vector<std::string> row;
    row.reserve(fields.size());
    for (auto f : fields) row.emplace_back(f);
    t.rows.push_back(std::move(row));
  }
  if (is.bad()) throw Error("csv: read error");
  return t;
}

Matrix read_matrix(std::istream& is) {
  const CsvTable t = read_csv(is);
  if (t.rows.empty()) return {};
  Matrix m(t.rows.size(), t.rows.front().size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double v = 0.0;
      if (!try_parse_double(t.rows[i][j], v)) {
        throw ArgumentError("csv data row " + std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                            ": not a number: '" + t.rows[i][j] + "'");
      }
      m(i, j) = v;
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_matrix(in);
}

void write_matrix(std::ostream& os, const Matrix& m, const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) os << (j ? "," : "") << header[j];
    os << '\n';
  }
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    os << line;
  }
}

void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    try {
      writer(out);
      out.flush();
      if (!out) throw Error("write to '" + tmp.string() + "' failed");
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename output into '" + path + "'");
  }
}

}  // namespace archicop
