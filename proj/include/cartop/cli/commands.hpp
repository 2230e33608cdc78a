#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cartop/cli/matrix_file.hpp"
#include "cartop/cli/report.hpp"
#include "cartop/epr.hpp"

namespace cartop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitDomain = 4;

/// A parsed matrix file together with the SHA-256 of its bytes.
struct InputMatrix {
  std::string role;
  ComplexMatrix matrix;
  std::string sha256;

  static InputMatrix load(std::string role, const std::filesystem::path& path);
  static InputMatrix from_text(std::string role, std::string_view text);
};

struct CommandOutput {
  Json report;
  std::string summary;
  /// Newline-terminated record stream (epr-sim, direct-sim only).
  std::string records;
};

struct SimOptions {
  std::size_t shots = 10000;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::optional<Source> source;
  unsigned threads = 1;
};

CommandOutput cmd_decompose(const InputMatrix& a, std::optional<double> tol);
CommandOutput cmd_expval(const InputMatrix& a, const InputMatrix& state);
CommandOutput cmd_epr_sim(const InputMatrix& a, const SimOptions& opts);
/// `state` defaults to the maximally mixed state.
CommandOutput cmd_direct_sim(const InputMatrix& a, const std::optional<InputMatrix>& state,
                             const SimOptions& opts);
CommandOutput cmd_reck(const InputMatrix& u);
CommandOutput cmd_eig(const InputMatrix& h);

/// Parses argv-style arguments (without the program name), runs the
/// subcommand and maps failures to exit codes: 2 usage/parse, 3 invariant
/// violation, 4 domain precondition.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartop::cli
