#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "privctl/linalg.hpp"

namespace privctl {

class FormatError : public Error {
 public:
  using Error::Error;
};

// Matrix files are plain CSV. The first line is a header
//   # <name> <rows> <cols>
// followed by `rows` lines of `cols` comma-separated values in row-major
// order, each printed with 17 significant digits so that values round-trip
// exactly through text.

std::string format_matrix_csv(const std::string& name, const Matrix& M);
void write_matrix_csv(const std::filesystem::path& path,
                      const std::string& name, const Matrix& M);

/// Parses a matrix file. Throws FormatError on malformed input or when the
/// body disagrees with the header dimensions.
Matrix parse_matrix_csv(const std::string& text, std::string* name = nullptr);
Matrix read_matrix_csv(const std::filesystem::path& path,
                       std::string* name = nullptr);

/// `key=value` text files, one entry per line; `#` starts a comment.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(const std::filesystem::path& path, const KeyValues& kv);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Formats a scalar with 17 significant digits.
std::string format_double(double v);

}  // namespace privctl
