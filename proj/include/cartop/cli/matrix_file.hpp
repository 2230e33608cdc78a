#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cartop/linalg.hpp"

namespace cartop::cli {

/// Malformed input file; maps to exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix file text:
///
///   {"dim": d, "entries": [[re, im], ...]}
///
/// with d*d pairs in row-major order. Numbers carry 17 significant digits so
/// write -> read reproduces every finite double bit for bit.
ComplexMatrix parse_matrix(std::string_view text);
std::string format_matrix(const ComplexMatrix& m);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cartop::cli
