#include "csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace satcs::csv {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& token, const std::string& context) {
  const char* s = token.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s, &end);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == s || end == nullptr || *end != '\0')
    throw IoError("bad numeric field '" + token + "' in " + context);
  return v;
}

long long parse_int(const std::string& token, const std::string& context) {
  const char* s = token.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s, &end, 10);
  while (end != nullptr && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
  if (end == s || end == nullptr || *end != '\0' || errno == ERANGE)
    throw IoError("bad integer field '" + token + "' in " + context);
  return v;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

void write_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v[i]) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

void write_int_vector(const std::string& path, const Eigen::VectorXi& v) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
  if (!out) throw IoError("write failed for " + path);
}

Eigen::MatrixXd read_matrix(const std::string& path, Eigen::Index expected_cols) {
  auto lines = read_lines(path);
  const Eigen::Index rows = static_cast<Eigen::Index>(lines.size());
  Eigen::Index cols = expected_cols;
  if (rows > 0) {
    auto first = split_fields(lines[0]);
    if (cols >= 0 && static_cast<Eigen::Index>(first.size()) != cols)
      throw IoError(path + ": expected " + std::to_string(cols) + " columns, got " +
                    std::to_string(first.size()));
    cols = static_cast<Eigen::Index>(first.size());
  }
  if (cols < 0) cols = 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    auto fields = split_fields(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw IoError(path + ": ragged row " + std::to_string(i));
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = parse_double(fields[j], path);
  }
  return m;
}

Eigen::VectorXd read_vector(const std::string& path) {
  auto lines = read_lines(path);
  Eigen::VectorXd v(static_cast<Eigen::Index>(lines.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = parse_double(lines[i], path);
  return v;
}

Eigen::VectorXi read_int_vector(const std::string& path) {
  auto lines = read_lines(path);
  Eigen::VectorXi v(static_cast<Eigen::Index>(lines.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = static_cast<int>(parse_int(lines[i], path));
  return v;
}

void write_kv(const std::string& path,
              const std::vector<std::pair<std::string, std::string>>& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << ',' << v << '\n';
  if (!out) throw IoError("write failed for " + path);
}

std::map<std::string, std::string> read_kv(const std::string& path) {
  std::map<std::string, std::string> out;
  for (const auto& line : read_lines(path)) {
    auto fields = split_fields(line);
    if (fields.size() != 2) throw IoError(path + ": expected key,value rows");
    out[fields[0]] = fields[1];
  }
  return out;
}

}  // namespace satcs::csv
