#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chiralrbm/errors.hpp>
#include <chiralrbm/experiments.hpp>
#include <chiralrbm/fitting.hpp>
#include <chiralrbm/lyapunov.hpp>
#include <chiralrbm/model.hpp>
#include <chiralrbm/newman.hpp>
#include <chiralrbm/resolvent.hpp>
#include <chiralrbm/rng.hpp>
#include <chiralrbm/sampling.hpp>
#include <chiralrbm/table.hpp>

namespace py = pybind11;
using namespace chiralrbm;

namespace {

// Columns as a dict of lists, in column order.
py::dict table_to_dict(const Table& t) {
  py::dict out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    py::list col;
    for (const auto& row : t.rows)
      std::visit([&](const auto& v) { col.append(v); }, row[c]);
    out[py::str(t.columns[c])] = col;
  }
  return out;
}

ModelKind kind_arg(const std::string& s) { return parse_model_kind(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random block-tridiagonal chiral operators: sampling, resolvents, Lyapunov spectra";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidDimension>(m, "InvalidDimension", base.ptr());
  py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", base.ptr());
  py::register_exception<SingularMatrix>(m, "SingularMatrix", base.ptr());
  py::register_exception<NotInvertible>(m, "NotInvertible", base.ptr());
  py::register_exception<NearSpectrum>(m, "NearSpectrum", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("child", &RngStream::child)
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", &RngStream::uniform)
      .def("normal", &RngStream::normal)
      .def_property_readonly("counter", &RngStream::counter);

  m.def("sample_ginibre", &sample_ginibre, py::arg("W"), py::arg("rng"));
  m.def("sample_gue", &sample_gue, py::arg("W"), py::arg("rng"));
  m.def("sample_real_ginibre", &sample_real_ginibre, py::arg("W"), py::arg("rng"));

  py::class_<BlockTridiagonalOperator>(m, "BlockTridiagonalOperator")
      .def(py::init<int, int, std::vector<ComplexMatrix>, std::vector<ComplexMatrix>>(),
           py::arg("n"), py::arg("W"), py::arg("V"), py::arg("T"))
      .def_property_readonly("n", &BlockTridiagonalOperator::blocks)
      .def_property_readonly("W", &BlockTridiagonalOperator::width)
      .def_property_readonly("dimension", &BlockTridiagonalOperator::dimension)
      .def_property_readonly("V", &BlockTridiagonalOperator::diagonal)
      .def_property_readonly("T", &BlockTridiagonalOperator::hopping)
      .def("has_zero_diagonal", &BlockTridiagonalOperator::has_zero_diagonal)
      .def("to_dense", [](const BlockTridiagonalOperator& H) { return to_dense(H); })
      .def("to_json", [](const BlockTridiagonalOperator& H) { return to_json(H).dump(); })
      .def_static("from_json", [](const std::string& s) {
        return operator_from_json(nlohmann::json::parse(s));
      });

  m.def("build_model", [](const std::string& kind, int n, int W, RngStream& rng) {
    return build_model(kind_arg(kind), n, W, rng);
  }, py::arg("kind"), py::arg("n"), py::arg("W"), py::arg("rng"));
  m.def("chiral_operator", [](int n, int W) { return ChiralOperator(n, W).to_dense(); },
        py::arg("n"), py::arg("W"));
  m.def("anticommutator_norm", &anticommutator_norm);

  m.def("dagger_inverse", &dagger_inverse, py::arg("M"), py::arg("condition_cap") = kConditionCap);
  m.def("zero_energy_corner_block", &zero_energy_corner_block);
  m.def("zero_energy_corner_log_norm", &zero_energy_corner_log_norm);
  m.def("resolvent_block",
        [](const BlockTridiagonalOperator& H, std::complex<double> z, int x, int y,
           const std::string& method, const std::string& norm) {
          ResolventOptions o;
          if (method == "auto") o.method = ResolventMethod::automatic;
          else if (method == "dense") o.method = ResolventMethod::dense;
          else if (method == "block") o.method = ResolventMethod::block_recursion;
          else throw ConfigError("unknown method: " + method);
          if (norm == "operator") o.norm = BlockNorm::operator_norm;
          else if (norm == "frobenius") o.norm = BlockNorm::frobenius;
          else throw ConfigError("unknown norm: " + norm);
          const auto r = resolvent_block(H, z, x, y, o);
          return py::make_tuple(r.block, r.norm);
        },
        py::arg("H"), py::arg("z"), py::arg("x"), py::arg("y"), py::arg("method") = "auto",
        py::arg("norm") = "operator",
        "Block (x, y) of (H - z)^-1 and its norm.");

  m.def("fractional_moment_estimate",
        [](int n, int W, std::complex<double> z, double s, int samples, const std::string& kind,
           int x, int y, std::uint64_t seed, int workers) {
          FractionalMomentConfig c;
          c.n = n; c.W = W; c.z = z; c.x = x; c.y = y; c.samples = samples;
          c.kind = kind_arg(kind);
          const auto e = fractional_moment_estimate(c, s, RngStream(seed, 0), workers);
          py::dict d;
          d["s"] = e.s; d["mean"] = e.mean; d["std_error"] = e.std_error;
          d["samples"] = e.samples; d["failures"] = e.failures;
          d["failure_fraction"] = e.failure_fraction;
          return d;
        },
        py::arg("n"), py::arg("W"), py::arg("z"), py::arg("s"), py::arg("samples") = 100,
        py::arg("kind") = "full", py::arg("x") = 1, py::arg("y") = 0, py::arg("seed") = 0,
        py::arg("workers") = 0);

  m.def("log_norm_corner",
        [](int n, int W, int samples, std::uint64_t seed, int workers, const std::string& kind) {
          return log_norm_corner(n, W, samples, RngStream(seed, 0), workers, kind_arg(kind));
        },
        py::arg("n"), py::arg("W"), py::arg("samples"), py::arg("seed") = 0,
        py::arg("workers") = 0, py::arg("kind") = "chiral");

  m.def("digamma_half_integer", &digamma_half_integer, py::arg("twice_x"));
  m.def("newman_exponent", &newman_exponent, py::arg("W"), py::arg("k"));
  m.def("complex_newman_exponent", &complex_newman_exponent, py::arg("W"), py::arg("k"));
  m.def("newman_asymptotic", &newman_asymptotic, py::arg("W"), py::arg("k"));
  m.def("newman_decay_rate", &newman_decay_rate, py::arg("W"));
  m.def("complex_newman_decay_rate", &complex_newman_decay_rate, py::arg("W"));

  m.def("estimate_lyapunov",
        [](int W, long steps, long burn_in, std::uint64_t seed, const std::string& kind,
           const std::string& field, const std::string& odd, double odd_scale) {
          FactorSpec spec;
          spec.W = W;
          spec.odd_scale = odd_scale;
          if (kind == "ginibre") spec.kind = FactorKind::ginibre;
          else if (kind == "pair") spec.kind = FactorKind::pair;
          else throw ConfigError("unknown factor kind: " + kind);
          if (field == "complex") spec.field = GinibreField::complex;
          else if (field == "real") spec.field = GinibreField::real;
          else throw ConfigError("unknown field: " + field);
          if (odd == "ginibre") spec.odd = OddFactor::ginibre;
          else if (odd == "identity") spec.odd = OddFactor::identity;
          else throw ConfigError("unknown odd factor: " + odd);
          FactorGenerator gen(spec, RngStream(seed, 0));
          const auto e = estimate_lyapunov(gen, steps, burn_in);
          return table_to_dict(lyapunov_table(e));
        },
        py::arg("W"), py::arg("steps") = 10000, py::arg("burn_in") = 100, py::arg("seed") = 0,
        py::arg("kind") = "ginibre", py::arg("field") = "complex", py::arg("odd") = "ginibre",
        py::arg("odd_scale") = 1.0);

  m.def("fit_exponential_decay",
        [](const std::vector<double>& n, const std::vector<double>& y,
           const std::vector<double>& se) {
          if (n.size() != y.size() || n.size() != se.size())
            throw InvalidDimension("n, mean and std_error must have equal length");
          std::vector<DecayPoint> pts;
          for (std::size_t i = 0; i < n.size(); ++i) pts.push_back({n[i], y[i], se[i]});
          const auto f = fit_exponential_decay(pts);
          py::dict d;
          d["slope"] = f.slope; d["slope_std_error"] = f.slope_std_error;
          d["intercept"] = f.intercept; d["intercept_std_error"] = f.intercept_std_error;
          d["chi2"] = f.chi2; d["dof"] = f.dof; d["reduced_chi2"] = f.reduced_chi2();
          return d;
        },
        py::arg("n"), py::arg("mean_log_norm"), py::arg("std_error"));
  m.def("fit_power_law",
        [](const std::vector<double>& W, const std::vector<double>& mu) {
          return table_to_dict(scaling_fit_table(fit_power_law(W, mu)));
        },
        py::arg("W"), py::arg("mu"));

  m.def("run_decay_scan",
        [](std::vector<int> widths, std::vector<int> blocks, int samples, std::uint64_t seed,
           int workers, const std::string& kind, int fit_min) {
          DecayScanConfig c;
          c.widths = std::move(widths);
          c.blocks = std::move(blocks);
          c.samples = samples; c.seed = seed; c.workers = workers;
          c.kind = kind_arg(kind);
          c.fit_min_blocks_per_width = fit_min;
          const auto scan = run_decay_scan(c);
          py::dict d;
          d["cells"] = table_to_dict(decay_cells_table(scan));
          d["fits"] = table_to_dict(decay_fits_table(scan));
          if (scan.scaling) d["scaling"] = table_to_dict(scaling_fit_table(*scan.scaling));
          else d["scaling"] = py::none();
          return d;
        },
        py::arg("widths") = std::vector<int>{1, 2, 4},
        py::arg("blocks") = std::vector<int>{8, 16, 32, 48, 64, 96, 128},
        py::arg("samples") = 200, py::arg("seed") = 0, py::arg("workers") = 0,
        py::arg("kind") = "chiral", py::arg("fit_min_blocks_per_width") = 8);
}
