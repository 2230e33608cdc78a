#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cartop/decompose.hpp"
#include "cartop/epr.hpp"
#include "cartop/errors.hpp"
#include "cartop/multiport.hpp"

namespace py = pybind11;
using namespace cartop;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1))
    throw DimensionError("expected a square 2-D array, got shape of rank " + std::to_string(a.ndim()));
  const std::size_t d = a.shape(0);
  return ComplexMatrix(d, std::vector<Complex>(a.data(), a.data() + d * d));
}

CArray to_array(const ComplexMatrix& m) {
  const py::ssize_t d = m.dim();
  return CArray(std::vector<py::ssize_t>{d, d}, m.entries().data());
}

template <class T>
py::array_t<T> to_vec(const std::vector<T>& v) {
  return py::array_t<T>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())}, v.data());
}

DensityState to_density(const CArray& a) {
  if (a.ndim() == 1) {
    return DensityState::from_pure(PureState(std::vector<Complex>(a.data(), a.data() + a.shape(0))));
  }
  return DensityState(to_matrix(a));
}

Source parse_source(const std::string& s, std::size_t d) {
  if (s == "auto") return default_source(d);
  if (s == "singlet") return Source::singlet;
  if (s == "canonical") return Source::canonical;
  throw std::invalid_argument("source must be 'auto', 'singlet' or 'canonical'");
}

py::dict eig_dict(const HermitianEigensystem& es) {
  py::dict d;
  d["eigenvalues"] = to_vec(es.eigenvalues);
  d["vectors"] = to_array(es.vectors);
  return d;
}

py::dict plan_dict(const MultiportPlan& plan) {
  py::list factors;
  for (const auto& f : plan.factors) factors.append(py::make_tuple(f.m, f.n, f.theta, f.phi));
  py::dict d;
  d["dim"] = plan.dim;
  d["factors"] = factors;
  d["output_phases"] = to_vec(plan.output_phases);
  return d;
}

MultiportPlan plan_from(const py::dict& d) {
  MultiportPlan plan;
  plan.dim = d["dim"].cast<std::size_t>();
  for (auto item : d["factors"]) {
    const auto t = item.cast<std::tuple<std::size_t, std::size_t, double, double>>();
    plan.factors.push_back({std::get<0>(t), std::get<1>(t), std::get<2>(t), std::get<3>(t)});
  }
  plan.output_phases = d["output_phases"].cast<std::vector<Complex>>();
  return plan;
}

py::dict run_dict(const ProtocolRun& run, bool with_records) {
  const auto& r = run.report;
  py::dict d;
  d["mode"] = std::string(to_string(r.mode));
  d["dim"] = r.dim;
  d["mean"] = r.mean;
  d["stderr"] = py::make_tuple(r.stderr_re, r.stderr_im);
  d["exact"] = r.exact;
  d["exact_a1"] = r.exact_a1;
  d["exact_a2"] = r.exact_a2;
  d["commutator_norm"] = r.commutator_norm;
  d["normal"] = r.normal;
  d["shots"] = r.shots;
  d["seed"] = r.seed;
  d["rng"] = r.rng;
  if (with_records) {
    const std::size_t n = run.records.size();
    std::vector<std::size_t> o1(n), o2(n);
    std::vector<double> l1(n), l2(n);
    std::vector<Complex> c(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = run.records[i];
      o1[i] = s.outcome1, o2[i] = s.outcome2, l1[i] = s.lambda1, l2[i] = s.lambda2, c[i] = s.combined;
    }
    py::dict rec;
    rec["outcome1"] = to_vec(o1);
    rec["outcome2"] = to_vec(o2);
    rec["lambda1"] = to_vec(l1);
    rec["lambda2"] = to_vec(l2);
    rec["combined"] = to_vec(c);
    d["records"] = rec;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_cartop, m) {
  m.doc() = "Cartesian decomposition of operators and two-particle counterfactual measurement";

  static py::exception<DimensionError> dim_err(m, "DimensionError", PyExc_ValueError);
  static py::exception<InvariantError> inv_err(m, "InvariantError", PyExc_ValueError);
  static py::exception<NonNormalError> nn_err(m, "NonNormalError", PyExc_ValueError);
  static py::exception<InternalConsistencyError> ic_err(m, "InternalConsistencyError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NonNormalError& e) {
      py::object err = py::reinterpret_borrow<py::object>(nn_err)(e.what());
      err.attr("commutator_norm") = e.commutator_norm();
      PyErr_SetObject(nn_err.ptr(), err.ptr());
    } catch (const InvariantError& e) {
      py::object err = py::reinterpret_borrow<py::object>(inv_err)(e.what());
      err.attr("invariant") = e.invariant();
      err.attr("measured") = e.measured();
      PyErr_SetObject(inv_err.ptr(), err.ptr());
    } catch (const DimensionError& e) {
      dim_err(e.what());
    } catch (const InternalConsistencyError& e) {
      ic_err(e.what());
    }
  });

  m.def("real_part", [](const CArray& a) { return to_array(real_part(to_matrix(a))); });
  m.def("imag_part", [](const CArray& a) { return to_array(imag_part(to_matrix(a))); });

  m.def(
      "decompose",
      [](const CArray& a, std::optional<double> tol) {
        const ComplexMatrix mat = to_matrix(a);
        const auto d = tol ? decompose(mat, *tol) : decompose(mat);
        py::dict out;
        out["a1"] = to_array(d.a1);
        out["a2"] = to_array(d.a2);
        out["commutator_norm"] = d.commutator_norm;
        out["normality_tol"] = d.normality_tol;
        out["normal"] = d.normal;
        return out;
      },
      py::arg("a"), py::arg("tol") = py::none());

  m.def(
      "recompose",
      [](const CArray& a1, const CArray& a2) {
        return to_array(to_matrix(a1) + Complex(0.0, 1.0) * to_matrix(a2));
      },
      py::arg("a1"), py::arg("a2"));

  m.def(
      "is_normal",
      [](const CArray& a, std::optional<double> tol) {
        const ComplexMatrix mat = to_matrix(a);
        return is_normal(mat, tol ? *tol : default_normality_tol(mat));
      },
      py::arg("a"), py::arg("tol") = py::none());

  m.def("hermitian_eig", [](const CArray& h) { return eig_dict(hermitian_eig(to_matrix(h))); });

  m.def(
      "expectation", [](const CArray& state, const CArray& a) { return expectation(to_density(state), to_matrix(a)); },
      py::arg("state"), py::arg("a"),
      "State may be a density matrix or a normalized state vector.");

  m.def(
      "run_protocol",
      [](const CArray& a, std::size_t shots, std::uint64_t seed, const std::string& source, std::optional<double> tol,
         unsigned threads, bool records) {
        const ComplexMatrix op = to_matrix(a);
        ProtocolConfig cfg{op, parse_source(source, op.dim()), shots, seed, Mode::counterfactual, tol.value_or(0.0),
                           threads};
        ProtocolRun run;
        {
          py::gil_scoped_release release;
          run = run_protocol(cfg);
        }
        return run_dict(run, records);
      },
      py::arg("a"), py::arg("shots"), py::arg("seed"), py::arg("source") = "auto", py::arg("tol") = py::none(),
      py::arg("threads") = 1u, py::arg("records") = false);

  m.def(
      "direct_joint_measure",
      [](const CArray& a, const CArray& state, std::size_t shots, std::uint64_t seed, std::optional<double> tol,
         unsigned threads, bool records) {
        const ComplexMatrix op = to_matrix(a);
        const DensityState rho = to_density(state);
        ProtocolRun run;
        {
          py::gil_scoped_release release;
          run = direct_joint_measure(op, rho, shots, seed, tol.value_or(0.0), threads);
        }
        return run_dict(run, records);
      },
      py::arg("a"), py::arg("state"), py::arg("shots"), py::arg("seed"), py::arg("tol") = py::none(),
      py::arg("threads") = 1u, py::arg("records") = false);

  m.def(
      "verify_certainty",
      [](const CArray& h, const std::string& source, std::size_t shots, std::uint64_t seed, unsigned threads) {
        const ComplexMatrix op = to_matrix(h);
        const auto r = verify_certainty(op, parse_source(source, op.dim()), shots, seed, threads);
        py::dict d;
        d["shots"] = r.shots;
        d["seed"] = r.seed;
        d["agreements"] = r.agreements;
        d["agreement_fraction"] = r.agreement_fraction;
        d["off_correspondence_mass"] = r.off_correspondence_mass;
        return d;
      },
      py::arg("h"), py::arg("source") = "auto", py::arg("shots") = 10000, py::arg("seed") = 1,
      py::arg("threads") = 1u);

  m.def("reck_decompose", [](const CArray& u) { return plan_dict(reck_decompose(to_matrix(u))); });
  m.def("reconstruct", [](const py::dict& plan) { return to_array(reconstruct(plan_from(plan))); });

  m.def("realize_measurement", [](const CArray& h) {
    const auto r = realize_measurement(to_matrix(h));
    py::dict d;
    d["eigenvalues"] = to_vec(r.eigenvalues);
    d["plan"] = plan_dict(r.plan);
    return d;
  });

  m.def(
      "network_born_check",
      [](const CArray& state, const CArray& h) {
        const auto c = network_born_check(to_density(state), realize_measurement(to_matrix(h)));
        py::dict d;
        d["mode_probabilities"] = to_vec(c.mode_probabilities);
        d["network_probabilities"] = to_vec(c.network_probabilities);
        d["born_probabilities"] = to_vec(c.born.probabilities);
        d["eigenvalues"] = to_vec(c.born.eigenvalues);
        d["max_abs_difference"] = c.max_abs_difference;
        return d;
      },
      py::arg("state"), py::arg("h"));
}
