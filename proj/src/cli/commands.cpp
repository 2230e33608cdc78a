#include "cartop/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "cartop/decompose.hpp"
#include "cartop/errors.hpp"
#include "cartop/multiport.hpp"

#ifndef CARTOP_VERSION
#define CARTOP_VERSION "0.0.0"
#endif

namespace cartop::cli {

namespace {

constexpr double kRoundTripTol = 1e-12;
constexpr double kReconstructionTol = 1e-10;

double scale(const ComplexMatrix& m) { return std::max(1.0, frobenius_norm(m)); }

Json inputs_json(std::initializer_list<const InputMatrix*> inputs) {
  Json arr = Json::array();
  for (const auto* in : inputs)
    if (in != nullptr) arr.push_back(Json{{"role", in->role}, {"sha256", in->sha256}});
  return arr;
}

Json manifest(std::string_view subcommand, Json inputs, Json tolerances) {
  return Json{{"subcommand", subcommand},
              {"artifact_version", CARTOP_VERSION},
              {"inputs", std::move(inputs)},
              {"tolerances", std::move(tolerances)}};
}

void add_sim_fields(Json& m, const SimOptions& opts) {
  m["seed"] = opts.seed;
  m["shots"] = opts.shots;
  m["shot_batch"] = kShotBatch;
  m["rng"] = RandomStream::kAlgorithm;
}

void require_within(std::string_view invariant, double value, double limit) {
  if (value > limit) {
    std::ostringstream msg;
    msg.precision(17);
    msg << invariant << " " << value << " exceeds " << limit;
    throw InvariantError(std::string(invariant), value, msg.str());
  }
}

std::string complex_text(Complex z) {
  std::ostringstream s;
  s.precision(10);
  s << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return s.str();
}

bool within_sigma(double mean, double exact, double se) {
  return std::abs(mean - exact) <= 5.0 * se + 1e-12;
}

Json protocol_json(const ProtocolReport& r) {
  return Json{{"mode", to_string(r.mode)},
              {"dim", r.dim},
              {"commutator_norm", r.commutator_norm},
              {"normal", r.normal},
              {"mean", complex_json(r.mean)},
              {"stderr", Json::array({r.stderr_re, r.stderr_im})},
              {"exact", complex_json(r.exact)},
              {"exact_a1", r.exact_a1},
              {"exact_a2", r.exact_a2},
              {"within_5_sigma", Json::array({within_sigma(r.mean.real(), r.exact.real(), r.stderr_re),
                                              within_sigma(r.mean.imag(), r.exact.imag(), r.stderr_im)})},
              {"shots", r.shots},
              {"seed", r.seed},
              {"rng", r.rng}};
}

std::string records_text(const std::vector<ShotRecord>& records) {
  std::string out;
  out.reserve(records.size() * 96);
  for (const auto& r : records) {
    out += to_line(Json{{"shot", r.shot},
                        {"outcome1", r.outcome1},
                        {"outcome2", r.outcome2},
                        {"lambda1", r.lambda1},
                        {"lambda2", r.lambda2},
                        {"combined_re", r.combined.real()},
                        {"combined_im", r.combined.imag()}});
    out += '\n';
  }
  return out;
}

std::string protocol_summary(std::string_view title, const ProtocolReport& r) {
  std::ostringstream s;
  s << title << " (dim " << r.dim << ", " << r.shots << " shots, seed " << r.seed << ")\n"
    << "  mean   = " << complex_text(r.mean) << "\n"
    << "  stderr = " << r.stderr_re << " (re), " << r.stderr_im << " (im)\n"
    << "  exact  = " << complex_text(r.exact) << "\n";
  return s.str();
}

Source parse_source(const std::string& s, std::size_t dim) {
  if (s == "singlet") return Source::singlet;
  if (s == "canonical") return Source::canonical;
  return default_source(dim);
}

}  // namespace

InputMatrix InputMatrix::load(std::string role, const std::filesystem::path& path) {
  return from_text(std::move(role), read_file(path));
}

InputMatrix InputMatrix::from_text(std::string role, std::string_view text) {
  return {std::move(role), parse_matrix(text), sha256_hex(text)};
}

CommandOutput cmd_decompose(const InputMatrix& a, std::optional<double> tol) {
  const ComplexMatrix& m = a.matrix;
  const double ntol = tol.value_or(default_normality_tol(m));
  const CartesianDecomposition d = decompose(m, ntol);
  const double residual = frobenius_norm(m - recompose(d));
  const double h1 = hermiticity_defect(d.a1), h2 = hermiticity_defect(d.a2);
  require_within("roundtrip-residual", residual, kRoundTripTol * scale(m));
  require_within("hermiticity", std::max(h1, h2), kRoundTripTol * scale(m));

  CommandOutput out;
  out.report = Json{{"manifest", manifest("decompose", inputs_json({&a}),
                                          Json{{"normality_tol", ntol}, {"roundtrip_tol", kRoundTripTol}})},
                    {"dim", m.dim()},
                    {"a1", matrix_json(d.a1)},
                    {"a2", matrix_json(d.a2)},
                    {"commutator_norm", d.commutator_norm},
                    {"normal", d.normal},
                    {"roundtrip_residual", residual},
                    {"hermiticity_defect", Json::array({h1, h2})}};
  std::ostringstream s;
  s << "decompose (dim " << m.dim() << ")\n";
  if (m.dim() == 1)
    s << "  a = " << complex_text(m(0, 0)) << ": Re a = " << d.a1(0, 0).real()
      << ", Im a = " << d.a2(0, 0).real() << "\n";
  s << "  ||[A1,A2]||_F = " << d.commutator_norm << " (tol " << ntol << ")\n"
    << "  normal = " << (d.normal ? "true" : "false") << "\n"
    << "  round-trip residual = " << residual << "\n";
  out.summary = s.str();
  return out;
}

CommandOutput cmd_expval(const InputMatrix& a, const InputMatrix& state) {
  const DensityState rho(state.matrix);
  const CartesianDecomposition d = decompose(a.matrix);
  const Complex value = expectation(rho, a.matrix);
  const Complex t1 = expectation(rho, d.a1), t2 = expectation(rho, d.a2);
  const double residual = std::abs(value - (t1 + Complex{0.0, 1.0} * t2));

  CommandOutput out;
  out.report = Json{{"manifest", manifest("expval", inputs_json({&a, &state}), Json::object())},
                    {"dim", a.matrix.dim()},
                    {"expectation", complex_json(value)},
                    {"expectation_a1", complex_json(t1)},
                    {"expectation_a2", complex_json(t2)},
                    {"additivity_residual", residual}};
  std::ostringstream s;
  s << "expval (dim " << a.matrix.dim() << ")\n"
    << "  Tr(rho A)  = " << complex_text(value) << "\n"
    << "  Tr(rho A1) = " << complex_text(t1) << "\n"
    << "  Tr(rho A2) = " << complex_text(t2) << "\n"
    << "  additivity residual = " << residual << "\n";
  out.summary = s.str();
  return out;
}

CommandOutput cmd_epr_sim(const InputMatrix& a, const SimOptions& opts) {
  const std::size_t dim = a.matrix.dim();
  ProtocolConfig cfg{a.matrix,
                     opts.source.value_or(default_source(dim)),
                     opts.shots,
                     opts.seed,
                     Mode::counterfactual,
                     opts.tol.value_or(default_normality_tol(a.matrix)),
                     opts.threads};
  const ProtocolRun run = run_protocol(cfg);
  const MirrorObservable mirror = mirror_observable(real_part(a.matrix), cfg.source);

  CommandOutput out;
  Json m = manifest("epr-sim", inputs_json({&a}), Json{{"normality_tol", cfg.normality_tol}});
  add_sim_fields(m, opts);
  out.report = Json{{"manifest", std::move(m)},
                    {"source", to_string(cfg.source)},
                    {"certainty_off_mass", mirror.off_correspondence_mass},
                    {"report", protocol_json(run.report)}};
  out.summary = protocol_summary("epr-sim, " + std::string(to_string(cfg.source)) + " source", run.report);
  out.records = records_text(run.records);
  return out;
}

CommandOutput cmd_direct_sim(const InputMatrix& a, const std::optional<InputMatrix>& state,
                             const SimOptions& opts) {
  const DensityState rho = state ? DensityState(state->matrix)
                                 : DensityState::maximally_mixed(a.matrix.dim());
  const double tol = opts.tol.value_or(default_normality_tol(a.matrix));
  const ProtocolRun run = direct_joint_measure(a.matrix, rho, opts.shots, opts.seed, tol, opts.threads);

  CommandOutput out;
  Json m = manifest("direct-sim", inputs_json({&a, state ? &*state : nullptr}),
                    Json{{"normality_tol", tol}});
  add_sim_fields(m, opts);
  out.report = Json{{"manifest", std::move(m)},
                    {"state", state ? "file" : "maximally_mixed"},
                    {"report", protocol_json(run.report)}};
  out.summary = protocol_summary("direct-sim", run.report);
  out.records = records_text(run.records);
  return out;
}

CommandOutput cmd_reck(const InputMatrix& u) {
  const MultiportPlan plan = reck_decompose(u.matrix);
  const double residual = frobenius_norm(reconstruct(plan) - u.matrix);
  require_within("reconstruction-residual", residual, kReconstructionTol);

  Json factors = Json::array();
  for (const auto& f : plan.factors) factors.push_back(Json::array({f.m, f.n, f.theta, f.phi}));
  Json phases = Json::array();
  for (const auto& z : plan.output_phases) phases.push_back(complex_json(z));

  CommandOutput out;
  out.report = Json{{"manifest", manifest("reck", inputs_json({&u}),
                                          Json{{"unitarity_tol", kUnitaryTol}, {"null_tol", kNullTol}})},
                    {"plan", Json{{"dim", plan.dim},
                                  {"factors", std::move(factors)},
                                  {"output_phases", std::move(phases)}}},
                    {"factor_count", plan.factors.size()},
                    {"reconstruction_residual", residual}};
  std::ostringstream s;
  s << "reck (dim " << plan.dim << ")\n"
    << "  factors = " << plan.factors.size() << " (max " << plan.dim * (plan.dim - 1) / 2 << ")\n"
    << "  reconstruction residual = " << residual << "\n";
  out.summary = s.str();
  return out;
}

CommandOutput cmd_eig(const InputMatrix& h) {
  const HermitianEigensystem es = hermitian_eig(h.matrix);
  const double residual = frobenius_norm(reconstruct(es) - h.matrix);
  const double unitarity = unitarity_defect(es.vectors);
  require_within("reconstruction-residual", residual, kReconstructionTol * scale(h.matrix));
  require_within("unitarity", unitarity, kReconstructionTol);

  CommandOutput out;
  out.report = Json{{"manifest", manifest("eig", inputs_json({&h}), Json{{"hermitian_tol", kHermitianTol}})},
                    {"dim", h.matrix.dim()},
                    {"eigenvalues", es.eigenvalues},
                    {"vectors", matrix_json(es.vectors)},
                    {"reconstruction_residual", residual},
                    {"unitarity_defect", unitarity}};
  std::ostringstream s;
  s << "eig (dim " << h.matrix.dim() << ")\n  eigenvalues =";
  for (double v : es.eigenvalues) s << " " << v;
  s << "\n  reconstruction residual = " << residual << "\n";
  out.summary = s.str();
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartesian decomposition of operators and counterfactual EPR measurement", "cartop"};
  app.require_subcommand(1);

  std::string operator_path, state_path, out_path, records_path, source_name = "auto";
  std::optional<double> tol;
  SimOptions sim;

  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the JSON report here; print a summary instead");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--shots", sim.shots, "Number of shots")->check(CLI::PositiveNumber);
    sub->add_option("--seed", sim.seed, "Random seed");
    sub->add_option("--tol", tol, "Normality tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--records", records_path, "Write newline-delimited shot records here");
    sub->add_option("--threads", sim.threads, "Worker threads (output does not depend on this)")
        ->check(CLI::PositiveNumber);
    add_out(sub);
  };

  auto* dec = app.add_subcommand("decompose", "Split A into self-adjoint parts A1 + i A2");
  dec->add_option("operator", operator_path, "Operator matrix file")->required();
  dec->add_option("--tol", tol, "Normality tolerance")->check(CLI::PositiveNumber);
  add_out(dec);

  auto* ev = app.add_subcommand("expval", "Complex expectation value Tr(rho A)");
  ev->add_option("operator", operator_path, "Operator matrix file")->required();
  ev->add_option("state", state_path, "Density matrix file")->required();
  add_out(ev);

  auto* epr = app.add_subcommand("epr-sim", "Counterfactual EPR measurement of A");
  epr->add_option("operator", operator_path, "Operator matrix file")->required();
  epr->add_option("--source", source_name, "Entangled source")
      ->check(CLI::IsMember({"auto", "singlet", "canonical"}));
  add_sim(epr);

  auto* direct = app.add_subcommand("direct-sim", "Direct joint measurement of a normal A");
  direct->add_option("operator", operator_path, "Operator matrix file")->required();
  direct->add_option("state", state_path, "Density matrix file (default: maximally mixed)");
  add_sim(direct);

  auto* reck = app.add_subcommand("reck", "Two-level rotation mesh for a unitary");
  reck->add_option("unitary", operator_path, "Unitary matrix file")->required();
  add_out(reck);

  auto* eig = app.add_subcommand("eig", "Spectrum of a Hermitian matrix");
  eig->add_option("hermitian", operator_path, "Hermitian matrix file")->required();
  add_out(eig);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error [usage]: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CommandOutput result;
    if (dec->parsed()) {
      result = cmd_decompose(InputMatrix::load("operator", operator_path), tol);
    } else if (ev->parsed()) {
      result = cmd_expval(InputMatrix::load("operator", operator_path),
                          InputMatrix::load("state", state_path));
    } else if (epr->parsed()) {
      sim.tol = tol;
      InputMatrix a = InputMatrix::load("operator", operator_path);
      if (source_name != "auto") sim.source = parse_source(source_name, a.matrix.dim());
      result = cmd_epr_sim(a, sim);
    } else if (direct->parsed()) {
      sim.tol = tol;
      std::optional<InputMatrix> state;
      if (!state_path.empty()) state = InputMatrix::load("state", state_path);
      result = cmd_direct_sim(InputMatrix::load("operator", operator_path), state, sim);
    } else if (reck->parsed()) {
      result = cmd_reck(InputMatrix::load("unitary", operator_path));
    } else {
      result = cmd_eig(InputMatrix::load("hermitian", operator_path));
    }

    if (!records_path.empty()) write_file(records_path, result.records);
    if (!out_path.empty()) {
      write_file(out_path, to_text(result.report));
      out << result.summary;
    } else {
      out << to_text(result.report);
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error [parse]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error [dimension]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "error [" << e.invariant() << "]: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InternalConsistencyError& e) {
    err << "error [internal-consistency]: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const NonNormalError& e) {
    err.precision(17);
    err << "error [normality]: " << e.what() << "\ncommutator_norm = " << e.commutator_norm() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "error [usage]: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cartop::cli
