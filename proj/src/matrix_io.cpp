#include "privctl/matrix_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace privctl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) throw FormatError("empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE)
    throw FormatError("bad numeric field '" + t + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_matrix_csv(const std::string& name, const Matrix& M) {
  std::string out = "# " + name + " " + std::to_string(M.rows()) + " " +
                    std::to_string(M.cols()) + "\n";
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out += ',';
      out += format_double(M(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::filesystem::path& path,
                      const std::string& name, const Matrix& M) {
  write_text(path, format_matrix_csv(name, M));
}

Matrix parse_matrix_csv(const std::string& text, std::string* name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing matrix header");
  std::istringstream header(line);
  std::string hash, label;
  long rows = -1, cols = -1;
  header >> hash >> label >> rows >> cols;
  if (hash != "#" || rows < 0 || cols < 0)
    throw FormatError("malformed matrix header '" + line + "'");
  if (name) *name = label;

  Matrix M(rows, cols);
  long r = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (r >= rows) throw FormatError("more rows than the header declares");
    std::istringstream row(line);
    std::string field;
    long c = 0;
    while (std::getline(row, field, ',')) {
      if (c >= cols) throw FormatError("row " + std::to_string(r) + " too long");
      M(r, c++) = parse_double(field);
    }
    if (c != cols) throw FormatError("row " + std::to_string(r) + " too short");
    ++r;
  }
  if (r != rows) throw FormatError("fewer rows than the header declares");
  return M;
}

Matrix read_matrix_csv(const std::filesystem::path& path, std::string* name) {
  try {
    return parse_matrix_csv(read_text(path), name);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError("line " + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  return parse_key_values(read_text(path));
}

void write_key_values(const std::filesystem::path& path, const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  write_text(path, out);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace privctl
