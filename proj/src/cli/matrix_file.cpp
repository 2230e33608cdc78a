#include "cartop/cli/matrix_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cartop/cli/report.hpp"
#include "cartop/errors.hpp"

namespace cartop::cli {

namespace {

double finite_number(const Json& j, std::size_t index) {
  if (!j.is_number()) {
    std::ostringstream msg;
    msg << "entry " << index << ": expected a number";
    throw ParseError(msg.str());
  }
  const double x = j.get<double>();
  if (!std::isfinite(x)) {
    std::ostringstream msg;
    msg << "entry " << index << ": non-finite value";
    throw ParseError(msg.str());
  }
  return x;
}

}  // namespace

ComplexMatrix parse_matrix(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed matrix file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ParseError("matrix file must be an object with \"dim\" and \"entries\"");
  const Json& dim_j = j.at("dim");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1)
    throw ParseError("\"dim\" must be a positive integer");
  const auto dim = static_cast<std::size_t>(dim_j.get<long long>());
  const Json& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != dim * dim) {
    std::ostringstream msg;
    msg << "\"entries\" must hold " << dim * dim << " [re, im] pairs";
    throw ParseError(msg.str());
  }
  std::vector<Complex> values;
  values.reserve(dim * dim);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Json& pair = entries[i];
    if (!pair.is_array() || pair.size() != 2) {
      std::ostringstream msg;
      msg << "entry " << i << ": expected [re, im]";
      throw ParseError(msg.str());
    }
    values.emplace_back(finite_number(pair[0], i), finite_number(pair[1], i));
  }
  return ComplexMatrix(dim, std::move(values));
}

std::string format_matrix(const ComplexMatrix& m) { return to_text(matrix_json(m)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace cartop::cli
