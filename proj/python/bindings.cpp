#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wigdec/coherence.hpp"
#include "wigdec/error.hpp"
#include "wigdec/shiftmodels.hpp"
#include "wigdec/specfun.hpp"
#include "wigdec/version.hpp"
#include "wigdec/wavepacket.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace wigdec;

namespace {

StateCase as_case(const std::string &name) { return parse_state_case(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shift-averaged Wigner functions and decoherence of split wave packets";
  m.attr("__version__") = std::string(kVersion);

  // Library errors surface as ValueError; the message starts with the kind.
  py::register_exception<Error>(m, "WigdecError", PyExc_ValueError);

  py::class_<GaussianPacket>(m, "GaussianPacket")
      .def(py::init([](double x0, double k0, double delta) {
             GaussianPacket p{x0, k0, delta};
             p.validate();
             return p;
           }),
           "x0"_a = 0.0, "k0"_a = 1.7, "delta"_a = 1.1)
      .def_readwrite("x0", &GaussianPacket::x0)
      .def_readwrite("k0", &GaussianPacket::k0)
      .def_readwrite("delta", &GaussianPacket::delta)
      .def("__repr__", [](const GaussianPacket &p) {
        return "GaussianPacket(x0=" + std::to_string(p.x0) + ", k0=" + std::to_string(p.k0) +
               ", delta=" + std::to_string(p.delta) + ")";
      });

  py::class_<GaussianShift>(m, "GaussianShift")
      .def(py::init<double, double>(), "delta0"_a = 0.0, "sigma"_a = 0.0)
      .def_readwrite("delta0", &GaussianShift::delta0)
      .def_readwrite("sigma", &GaussianShift::sigma);
  py::class_<TwoTone>(m, "TwoTone")
      .def(py::init<double, double, int>(), "delta0"_a = 0.0, "delta1"_a = 1.0, "j"_a = 1)
      .def_readwrite("delta0", &TwoTone::delta0)
      .def_readwrite("delta1", &TwoTone::delta1)
      .def_readwrite("j", &TwoTone::j);
  py::class_<GoldenMean>(m, "GoldenMean")
      .def(py::init<double, double>(), "delta0"_a = 0.0, "delta1"_a = 1.0)
      .def_readwrite("delta0", &GoldenMean::delta0)
      .def_readwrite("delta1", &GoldenMean::delta1);

  py::class_<coherence::CoherenceReport>(m, "CoherenceReport")
      .def_readonly("norm_N", &coherence::CoherenceReport::norm_N)
      .def_readonly("purity", &coherence::CoherenceReport::purity)
      .def_readonly("epsilon", &coherence::CoherenceReport::epsilon)
      .def_readonly("entropy", &coherence::CoherenceReport::entropy)
      .def_property_readonly("path",
                             [](const coherence::CoherenceReport &r) { return std::string(coherence::to_string(r.path)); });

  m.attr("GOLDEN_MEAN") = shiftmodels::kGoldenMean;

  m.def("fibonacci", &shiftmodels::fibonacci, "n"_a);
  m.def("fibonacci_ratio", [](int j) {
    const auto r = shiftmodels::fibonacci_ratio(j);
    return py::make_tuple(r.num, r.den);
  }, "j"_a, "(f_j, f_{j+1}) as a tuple of integers");

  m.def("elliptic_f", [](double beta, double gamma) { return specfun::elliptic_f({beta, gamma}); },
        "beta"_a, "gamma"_a);
  m.def("elliptic_k", &specfun::elliptic_k, "gamma"_a);

  m.def("density",
        py::vectorize([](ShiftModel model, double shift) { return shiftmodels::density(model, shift); }),
        "model"_a, "shift"_a, "Shift density; raises at a caustic");
  m.def("shift_at", py::vectorize([](ShiftModel model, double theta) {
          return shiftmodels::shift_at(model, theta);
        }),
        "model"_a, "theta"_a);
  m.def("entropy",
        [](const ShiftModel &model, std::size_t n_samples) {
          TrajectoryWindow w;
          w.n_samples = n_samples;
          return shiftmodels::entropy(model, w);
        },
        "model"_a, "n_samples"_a = std::size_t{1} << 16, "Differential entropy in nats");
  m.def("count_critical_points", &shiftmodels::count_critical_points, "model"_a);

  m.def("pure_wigner",
        py::vectorize([](GaussianPacket p, std::string state_case, double shift, double x, double k) {
          return wavepacket::pure_wigner(p, as_case(state_case), shift, x, k);
        }),
        "packet"_a, "state_case"_a, "shift"_a, "x"_a, "k"_a);
  m.def("averaged_wigner",
        py::vectorize([](GaussianPacket p, std::string state_case, ShiftModel model, double x,
                         double k) { return coherence::averaged_wigner(as_case(state_case), p, model, x, k); }),
        "packet"_a, "state_case"_a, "model"_a, "x"_a, "k"_a);
  m.def("analytic_epsilon",
        [](const GaussianPacket &p, const std::string &state_case, const GaussianShift &model) {
          return coherence::analytic_epsilon(as_case(state_case), p, model);
        },
        "packet"_a, "state_case"_a, "model"_a);
  m.def("coherence_report",
        [](const GaussianPacket &p, const std::string &state_case, const ShiftModel &model, const std::string &path,
           bool compute_entropy) {
          coherence::AveragingOptions options;
          options.compute_entropy = compute_entropy;
          return coherence::coherence_report(as_case(state_case), p, model, coherence::parse_path(path), options);
        },
        "packet"_a, "state_case"_a, "model"_a, "path"_a = "kernel", "compute_entropy"_a = true);
}
