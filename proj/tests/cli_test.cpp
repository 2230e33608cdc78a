#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <sys/wait.h>

#include "cartop/cli/commands.hpp"
#include "cartop/cli/matrix_file.hpp"
#include "cartop/cli/report.hpp"
#include "support/random_ops.hpp"

namespace cartop::cli {
namespace {

using namespace cartop::testing;
namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cartop_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string put(const std::string& name, const ComplexMatrix& m) {
    const fs::path p = dir_ / name;
    write_file(p, format_matrix(m));
    return p.string();
  }
  std::string put_text(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    write_file(p, text);
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST(FormatDouble, SeventeenDigitsAndFloatMarker) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-0.0), "-0.0");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1e300), "1.0000000000000001e+300");
}

TEST(MatrixFile, RoundTripIsBitExact) {
  Rng rng(61);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::vector<double> special{0.0, -0.0, std::numeric_limits<double>::denorm_min(),
                              std::numeric_limits<double>::min(), std::numeric_limits<double>::max(),
                              -std::numeric_limits<double>::max(), 1.0 / 3.0};
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 1 + rep % 6;
    std::vector<Complex> e(d * d);
    for (std::size_t k = 0; k < e.size(); ++k) {
      auto draw = [&] {
        if (k < special.size() && rep == 0) return special[k];
        double x;
        do x = std::bit_cast<double>(bits(rng));
        while (!std::isfinite(x));
        return x;
      };
      const double re = draw();
      e[k] = {re, draw()};
    }
    const ComplexMatrix m(d, e);
    const ComplexMatrix back = parse_matrix(format_matrix(m));
    ASSERT_EQ(back.dim(), d);
    for (std::size_t k = 0; k < e.size(); ++k) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(back.entries()[k].real()),
                std::bit_cast<std::uint64_t>(e[k].real()));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(back.entries()[k].imag()),
                std::bit_cast<std::uint64_t>(e[k].imag()));
    }
  }
}

TEST(MatrixFile, ParseErrors) {
  EXPECT_THROW(parse_matrix("not json"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"dim": 2, "entries": [[1, 0]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"dim": 0, "entries": []})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"dim": 1, "entries": [[1]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"dim": 1, "entries": [["a", 0]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"dim": 1, "entries": [[1e400, 0]]})"), ParseError);
  EXPECT_THROW(parse_matrix(R"({"entries": [[1, 0]]})"), ParseError);
  EXPECT_EQ(parse_matrix(R"({"dim": 1, "entries": [[2, -3]]})")(0, 0), Complex(2.0, -3.0));
}

TEST(Report, TextLayout) {
  const Json j{{"a", 1}, {"b", Json::array({0.5, -0.0})}, {"c", Json{{"d", "x"}}}};
  EXPECT_EQ(to_text(j), "{\n  \"a\": 1,\n  \"b\": [0.5, -0.0],\n  \"c\": {\n    \"d\": \"x\"\n  }\n}\n");
  EXPECT_EQ(to_line(j), "{\"a\": 1, \"b\": [0.5, -0.0], \"c\": {\"d\": \"x\"}}");
}

TEST(Report, Sha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, DecomposeExampleOperator) {
  const auto a = put("a.json", lowering());
  ASSERT_EQ(run({"decompose", a}), 0) << err_.str();
  const Json r = Json::parse(out_.str());
  EXPECT_EQ(parse_matrix(r["a1"].dump()), Complex(0.5, 0.0) * sigma_x());
  EXPECT_LE(max_abs_diff(parse_matrix(r["a2"].dump()), Complex(-0.5, 0.0) * sigma_y()), 0.0);
  EXPECT_FALSE(r["normal"].get<bool>());
  EXPECT_EQ(r["roundtrip_residual"].get<double>(), 0.0);
  EXPECT_EQ(r["manifest"]["subcommand"], "decompose");
  EXPECT_EQ(r["manifest"]["inputs"][0]["sha256"], sha256_hex(read_file(a)));
}

TEST_F(CliTest, DecomposeSelfAdjointAndScalar) {
  ASSERT_EQ(run({"decompose", put("z.json", sigma_z())}), 0);
  Json r = Json::parse(out_.str());
  EXPECT_EQ(frobenius_norm(parse_matrix(r["a2"].dump())), 0.0);
  EXPECT_TRUE(r["normal"].get<bool>());

  ASSERT_EQ(run({"decompose", put("s.json", ComplexMatrix(1, {Complex(2.5, -4.0)})), "--out", path("o.json")}), 0);
  EXPECT_NE(out_.str().find("Re a = 2.5, Im a = -4"), std::string::npos) << out_.str();
  r = Json::parse(read_file(path("o.json")));
  EXPECT_EQ(parse_matrix(r["a1"].dump())(0, 0), Complex(2.5, 0.0));
  EXPECT_EQ(parse_matrix(r["a2"].dump())(0, 0).real(), -4.0);
}

TEST_F(CliTest, ParseFailureExitsTwo) {
  EXPECT_EQ(run({"decompose", put_text("bad.json", "{")}), 2);
  EXPECT_NE(err_.str().find("[parse]"), std::string::npos);
  EXPECT_EQ(run({"decompose", path("missing.json")}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
}

TEST_F(CliTest, Expval) {
  const auto a = put("a.json", lowering());
  const auto mixed = put("mixed.json", Complex(0.5, 0.0) * ComplexMatrix::identity(2));
  ASSERT_EQ(run({"expval", a, mixed}), 0) << err_.str();
  Json r = Json::parse(out_.str());
  EXPECT_EQ(r["expectation"], Json::array({0.0, 0.0}));

  const auto ket0 = put("ket0.json", ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
  ASSERT_EQ(run({"expval", put("z.json", sigma_z()), ket0}), 0);
  r = Json::parse(out_.str());
  EXPECT_EQ(r["expectation"], Json::array({1.0, 0.0}));

  Rng rng(62);
  for (std::size_t d : {2, 3, 5}) {
    ASSERT_EQ(run({"expval", put("r.json", random_matrix(rng, d)), put("rho.json", random_density(rng, d))}), 0);
    EXPECT_LE(Json::parse(out_.str())["additivity_residual"].get<double>(), 1e-12);
  }
}

TEST_F(CliTest, ExpvalInvalidDensityExitsThreeNamingInvariant) {
  const auto a = put("a.json", lowering());
  EXPECT_EQ(run({"expval", a, put("id.json", ComplexMatrix::identity(2))}), 3);
  EXPECT_NE(err_.str().find("[unit-trace]"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"expval", a, put("l.json", lowering())}), 3);
  EXPECT_NE(err_.str().find("[hermiticity]"), std::string::npos);
  EXPECT_EQ(run({"expval", a, put("neg.json", ComplexMatrix{{1.5, 0.0}, {0.0, -0.5}})}), 3);
  EXPECT_NE(err_.str().find("[positivity]"), std::string::npos);
  EXPECT_EQ(run({"expval", a, put("m3.json", Complex(1.0 / 3, 0.0) * ComplexMatrix::identity(3))}), 2);
}

TEST_F(CliTest, EprSimExampleOperator) {
  const auto a = put("a.json", lowering());
  ASSERT_EQ(run({"epr-sim", a, "--shots", "100000", "--seed", "42", "--records", path("rec.ndjson")}), 0)
      << err_.str();
  const Json r = Json::parse(out_.str());
  EXPECT_EQ(r["source"], "singlet");
  EXPECT_EQ(r["report"]["exact"], Json::array({0.0, 0.0}));
  EXPECT_EQ(r["report"]["within_5_sigma"], Json::array({true, true}));
  EXPECT_EQ(r["manifest"]["seed"], 42);
  EXPECT_EQ(r["manifest"]["shots"], 100000);
  EXPECT_LE(r["certainty_off_mass"].get<double>(), 1e-12);

  std::ifstream rec(path("rec.ndjson"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(rec, line)) {
    const Json s = Json::parse(line);
    EXPECT_EQ(s["shot"], n);
    EXPECT_EQ(std::abs(s["combined_re"].get<double>()), 0.5);
    EXPECT_EQ(std::abs(s["combined_im"].get<double>()), 0.5);
    ++n;
  }
  EXPECT_EQ(n, 100000u);
}

TEST_F(CliTest, EprSimHermitianRecordsAreReal) {
  Rng rng(63);
  ASSERT_EQ(run({"epr-sim", put("h.json", random_hermitian(rng, 3)), "--shots", "2000", "--records",
                 path("rec.ndjson")}),
            0);
  std::ifstream rec(path("rec.ndjson"));
  std::string line;
  while (std::getline(rec, line)) EXPECT_EQ(Json::parse(line)["combined_im"].get<double>(), 0.0);
}

TEST_F(CliTest, EprSimDeterministicAndShotsValidated) {
  const auto a = put("a.json", lowering());
  ASSERT_EQ(run({"epr-sim", a, "--shots", "5000", "--seed", "3", "--out", path("r1.json"), "--records", path("s1")}), 0);
  ASSERT_EQ(run({"epr-sim", a, "--shots", "5000", "--seed", "3", "--out", path("r2.json"), "--records", path("s2"),
                 "--threads", "3"}),
            0);
  EXPECT_EQ(read_file(path("r1.json")), read_file(path("r2.json")));
  EXPECT_EQ(read_file(path("s1")), read_file(path("s2")));
  EXPECT_EQ(run({"epr-sim", a, "--shots", "0"}), 2);
  EXPECT_EQ(run({"epr-sim", put("one.json", ComplexMatrix::identity(1))}), 2);
  EXPECT_EQ(run({"epr-sim", put("three.json", ComplexMatrix::identity(3)), "--source", "singlet"}), 2);
}

TEST_F(CliTest, DirectSim) {
  EXPECT_EQ(run({"direct-sim", put("a.json", lowering())}), 4);
  EXPECT_NE(err_.str().find("commutator_norm = 0.70710678118654757"), std::string::npos) << err_.str();

  const std::vector<Complex> z{{1.0, 2.0}, {3.0, -1.0}};
  ASSERT_EQ(run({"direct-sim", put("d.json", ComplexMatrix::diagonal(std::span<const Complex>(z))), "--shots",
                 "20000"}),
            0)
      << err_.str();
  Json r = Json::parse(out_.str());
  EXPECT_EQ(r["report"]["exact"], Json::array({2.0, 0.5}));
  EXPECT_EQ(r["report"]["within_5_sigma"], Json::array({true, true}));

  const auto ket0 = put("ket0.json", ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}});
  ASSERT_EQ(run({"direct-sim", put("z.json", sigma_z()), ket0, "--records", path("rec")}), 0);
  std::ifstream rec(path("rec"));
  std::string line;
  while (std::getline(rec, line)) {
    const Json s = Json::parse(line);
    EXPECT_EQ(s["combined_re"].get<double>(), 1.0);
    EXPECT_EQ(s["combined_im"].get<double>(), 0.0);
  }
}

TEST_F(CliTest, Reck) {
  ASSERT_EQ(run({"reck", put("id.json", ComplexMatrix::identity(3))}), 0);
  Json r = Json::parse(out_.str());
  EXPECT_TRUE(r["plan"]["factors"].empty());

  Rng rng(64);
  ASSERT_EQ(run({"reck", put("u.json", random_unitary(rng, 4))}), 0);
  r = Json::parse(out_.str());
  EXPECT_LE(r["factor_count"].get<std::size_t>(), 6u);
  EXPECT_LE(r["reconstruction_residual"].get<double>(), 1e-10);
  EXPECT_EQ(r["plan"]["factors"][0].size(), 4u);

  EXPECT_EQ(run({"reck", put("h.json", sigma_x() + sigma_z())}), 3);
  EXPECT_NE(err_.str().find("[unitarity]"), std::string::npos);
}

TEST_F(CliTest, Eig) {
  for (const auto& m : {sigma_x(), sigma_z()}) {
    ASSERT_EQ(run({"eig", put("p.json", m)}), 0);
    const Json r = Json::parse(out_.str());
    EXPECT_NEAR(r["eigenvalues"][0].get<double>(), -1.0, 1e-15);
    EXPECT_NEAR(r["eigenvalues"][1].get<double>(), 1.0, 1e-15);
  }
  Rng rng(65);
  ASSERT_EQ(run({"eig", put("h.json", random_hermitian(rng, 8))}), 0);
  EXPECT_LE(Json::parse(out_.str())["reconstruction_residual"].get<double>(), 1e-10);
  EXPECT_EQ(run({"eig", put("l.json", lowering())}), 3);
  EXPECT_NE(err_.str().find("[hermiticity]"), std::string::npos);
}

#ifdef CARTOP_CLI_PATH
int exit_status(const std::string& cmd) {
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

TEST_F(CliTest, ExecutableExitCodes) {
  const std::string exe = CARTOP_CLI_PATH;
  const std::string quiet = " >/dev/null 2>&1";
  const auto a = put("a.json", lowering());
  EXPECT_EQ(exit_status(exe + " decompose " + a + quiet), 0);
  EXPECT_EQ(exit_status(exe + " direct-sim " + a + quiet), 4);
  EXPECT_EQ(exit_status(exe + " eig " + a + quiet), 3);
  EXPECT_EQ(exit_status(exe + " epr-sim " + a + " --shots 0" + quiet), 2);
  EXPECT_EQ(exit_status(exe + " --help" + quiet), 0);
}
#endif

}  // namespace
}  // namespace cartop::cli
