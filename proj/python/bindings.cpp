// pybind11 bindings for the admmreg core: operators, the penalty, the
// solver loop, and the experiment generators.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <stdexcept>

#include "admmreg/admm.hpp"
#include "admmreg/errors.hpp"
#include "admmreg/experiments.hpp"
#include "admmreg/io.hpp"
#include "admmreg/metrics.hpp"
#include "admmreg/oracle.hpp"

namespace py = pybind11;
using namespace admmreg;

namespace {

template <typename T>
py::array_t<T> make_array_1d(std::size_t n) {
  return py::array_t<T>(std::vector<py::ssize_t>{static_cast<py::ssize_t>(n)});
}

GridVector to_grid(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  Shape shape(arr.ndim());
  for (py::ssize_t d = 0; d < arr.ndim(); ++d) shape[(std::size_t)d] = (std::size_t)arr.shape(d);
  std::vector<double> values(arr.data(), arr.data() + arr.size());
  return GridVector(std::move(values), std::move(shape));
}

py::array_t<double> to_numpy(const GridVector& g) {
  std::vector<py::ssize_t> shape(g.shape.begin(), g.shape.end());
  py::array_t<double> arr(shape);
  std::copy(g.values.begin(), g.values.end(), arr.mutable_data());
  return arr;
}

FrameFamily parse_family(const std::string& name) {
  if (name == "haar") return FrameFamily::haar;
  if (name == "linear_bspline") return FrameFamily::linear_bspline;
  throw ParameterError("unknown frame family: " + name + " (haar | linear_bspline)");
}

XSolverKind parse_solver(const std::string& name) {
  if (name == "auto") return XSolverKind::automatic;
  if (name == "spectral") return XSolverKind::spectral;
  if (name == "dense") return XSolverKind::dense;
  if (name == "cg") return XSolverKind::cg;
  throw ParameterError("unknown x solver: " + name + " (auto | spectral | dense | cg)");
}

const char* kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::dense: return "dense";
    case OperatorKind::circulant1d: return "circulant1d";
    case OperatorKind::circulant2d: return "circulant2d";
    case OperatorKind::gradient2d: return "gradient2d";
    case OperatorKind::identity: return "identity";
    case OperatorKind::tight_frame: return "tight_frame";
  }
  return "unknown";
}

DenseMatrix to_matrix(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw ParameterError("matrix must be 2D");
  DenseMatrix m((std::size_t)arr.shape(0), (std::size_t)arr.shape(1));
  std::copy(arr.data(), arr.data() + arr.size(), m.data.begin());
  return m;
}

Penalty make_penalty(double nu, const std::optional<py::array_t<double>>& weights) {
  if (!weights) return Penalty(nu);
  py::array_t<double, py::array::c_style | py::array::forcecast> w(*weights);
  return Penalty(nu, std::vector<double>(w.data(), w.data() + w.size()));
}

py::dict run_admm(const std::shared_ptr<LinearOperator>& a,
                  const std::shared_ptr<LinearOperator>& w, const py::array_t<double>& b,
                  const Penalty& penalty, double rho1, double rho2, double tau, double delta,
                  std::size_t max_iter, const std::string& x_solver, double cg_tol,
                  std::size_t cg_max_iter, const std::optional<py::array_t<double>>& ground_truth,
                  bool check_invariants) {
  AdmmConfig cfg;
  cfg.rho1 = rho1;
  cfg.rho2 = rho2;
  cfg.tau = tau;
  cfg.delta = delta;
  cfg.max_iter = max_iter;
  cfg.x_solver = parse_solver(x_solver);
  cfg.cg_tol = cg_tol;
  cfg.cg_max_iter = cg_max_iter;
  cfg.check_invariants = check_invariants;

  AdmmSolver solver(*a, *w, to_grid(b), penalty, cfg);
  std::optional<GridVector> truth;
  if (ground_truth) truth = to_grid(*ground_truth);
  RunResult run = solver.run(truth ? &*truth : nullptr);

  const std::size_t n = run.trace.size();
  py::array_t<double> r_norm = make_array_1d<double>(n), s_norm = make_array_1d<double>(n),
                      energy = make_array_1d<double>(n), f_y = make_array_1d<double>(n),
                      err = make_array_1d<double>(n), psnr_tr = make_array_1d<double>(n);
  py::array_t<std::int64_t> ks = make_array_1d<std::int64_t>(n),
                            inner = make_array_1d<std::int64_t>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TraceRecord& rec = run.trace[i];
    ks.mutable_data()[i] = (std::int64_t)rec.k;
    r_norm.mutable_data()[i] = rec.r_norm;
    s_norm.mutable_data()[i] = rec.s_norm;
    energy.mutable_data()[i] = rec.E;
    f_y.mutable_data()[i] = rec.f_y;
    err.mutable_data()[i] = rec.err.value_or(std::nan(""));
    psnr_tr.mutable_data()[i] = rec.psnr.value_or(std::nan(""));
    inner.mutable_data()[i] = (std::int64_t)rec.inner_iters;
  }
  py::dict trace;
  trace["k"] = ks;
  trace["r_norm"] = r_norm;
  trace["s_norm"] = s_norm;
  trace["E"] = energy;
  trace["f_y"] = f_y;
  trace["err"] = err;
  trace["psnr"] = psnr_tr;
  trace["inner_iters"] = inner;

  py::dict out;
  out["x"] = to_numpy(run.state.x);
  out["y"] = to_numpy(run.state.y);
  out["k_stop"] = run.k_stop;
  out["stop_reason"] = to_string(run.stop_reason);
  out["stop_threshold"] = run.stop_threshold;
  out["trace"] = trace;
  out["wall_ms"] = run.wall_ms;
  if (check_invariants) {
    py::dict inv;
    inv["max_subgradient_violation"] = run.invariants.max_subgradient_violation;
    inv["max_multiplier_mismatch"] = run.invariants.max_multiplier_mismatch;
    inv["max_energy_increase"] = run.invariants.max_energy_increase;
    inv["max_decrement_violation"] = run.invariants.max_decrement_violation;
    out["invariants"] = inv;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ADMM iterative regularization for ill-posed linear inverse problems";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<UnsupportedOperatorError>(m, "UnsupportedOperatorError",
                                                   PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  py::class_<LinearOperator, std::shared_ptr<LinearOperator>>(m, "LinearOperator")
      .def("apply", [](const LinearOperator& op, const py::array_t<double>& u) {
        return to_numpy(op.apply(to_grid(u)));
      })
      .def("apply_adjoint", [](const LinearOperator& op, const py::array_t<double>& v) {
        return to_numpy(op.apply_adjoint(to_grid(v)));
      })
      .def_property_readonly("domain_shape",
                             [](const LinearOperator& op) {
                               return py::tuple(py::cast(op.domain_shape()));
                             })
      .def_property_readonly("range_shape",
                             [](const LinearOperator& op) {
                               return py::tuple(py::cast(op.range_shape()));
                             })
      .def_property_readonly("kind",
                             [](const LinearOperator& op) { return kind_name(op.kind()); });

  m.def("identity", [](const std::vector<std::size_t>& shape) {
    return std::shared_ptr<LinearOperator>(std::make_shared<IdentityOperator>(Shape(shape)));
  });
  m.def("dense", [](const py::array_t<double>& matrix) {
    return std::shared_ptr<LinearOperator>(std::make_shared<DenseOperator>(to_matrix(matrix)));
  });
  m.def("circulant1d", [](const py::array_t<double>& kernel) {
    py::array_t<double, py::array::c_style | py::array::forcecast> k(kernel);
    return std::shared_ptr<LinearOperator>(std::make_shared<CirculantOperator1D>(
        std::vector<double>(k.data(), k.data() + k.size())));
  });
  m.def("circulant2d", [](const py::array_t<double>& kernel) {
    py::array_t<double, py::array::c_style | py::array::forcecast> k(kernel);
    if (k.ndim() != 2) throw ParameterError("circulant2d kernel must be 2D");
    return std::shared_ptr<LinearOperator>(std::make_shared<CirculantOperator2D>(
        std::vector<double>(k.data(), k.data() + k.size()), (std::size_t)k.shape(0),
        (std::size_t)k.shape(1)));
  });
  m.def("gradient2d", [](std::size_t rows, std::size_t cols) {
    return std::shared_ptr<LinearOperator>(std::make_shared<GradientOperator2D>(rows, cols));
  });
  m.def("tight_frame", [](const std::string& family, std::size_t levels, std::size_t rows,
                          std::size_t cols) {
    return std::shared_ptr<LinearOperator>(
        std::make_shared<TightFrameOperator>(parse_family(family), levels, rows, cols));
  }, py::arg("family"), py::arg("levels"), py::arg("rows"), py::arg("cols"));
  m.def("gaussian_kernel_1d", [](double gamma, std::size_t n) {
    return std::shared_ptr<LinearOperator>(make_gaussian_kernel_1d(gamma, n));
  }, py::arg("gamma"), py::arg("n"));
  m.def("blur_operator", [](const py::array_t<double>& psf, std::size_t rows, std::size_t cols) {
    py::array_t<double, py::array::c_style | py::array::forcecast> k(psf);
    if (k.ndim() != 2) throw ParameterError("psf must be 2D");
    Psf p;
    p.rows = (std::size_t)k.shape(0);
    p.cols = (std::size_t)k.shape(1);
    p.data.assign(k.data(), k.data() + k.size());
    return std::shared_ptr<LinearOperator>(make_blur_operator(p, rows, cols));
  }, py::arg("psf"), py::arg("rows"), py::arg("cols"));
  m.def("frame_penalty_weights",
        [](const std::shared_ptr<LinearOperator>& frame, double detail_weight,
           double lowpass_weight) {
          const auto* tf = dynamic_cast<const TightFrameOperator*>(frame.get());
          if (!tf) throw ParameterError("frame_penalty_weights expects a tight_frame operator");
          std::vector<double> w = frame_penalty_weights(*tf, detail_weight, lowpass_weight);
          py::array_t<double> arr = make_array_1d<double>(w.size());
          std::copy(w.begin(), w.end(), arr.mutable_data());
          return arr;
        },
        py::arg("frame"), py::arg("detail_weight") = 1.0, py::arg("lowpass_weight") = 0.0);

  py::class_<Penalty>(m, "Penalty")
      .def(py::init([](double nu, const std::optional<py::array_t<double>>& weights) {
             return make_penalty(nu, weights);
           }),
           py::arg("nu"), py::arg("weights") = py::none())
      .def_property_readonly("nu", &Penalty::nu)
      .def("value", [](const Penalty& f, const py::array_t<double>& y) {
        return f.value(to_grid(y));
      })
      .def("prox", [](const Penalty& f, const py::array_t<double>& v, double rho2) {
        return to_numpy(f.prox(to_grid(v), rho2));
      }, py::arg("v"), py::arg("rho2"))
      .def("subgradient_from_prox",
           [](const Penalty& f, const py::array_t<double>& v, const py::array_t<double>& y,
              double rho2) {
             return to_numpy(f.subgradient_from_prox(to_grid(v), to_grid(y), rho2));
           }, py::arg("v"), py::arg("y"), py::arg("rho2"))
      .def("check_subgradient",
           [](const Penalty& f, const py::array_t<double>& y, const py::array_t<double>& mu,
              double tol) { return f.check_subgradient(to_grid(y), to_grid(mu), tol); },
           py::arg("y"), py::arg("mu"), py::arg("tol") = 1e-9)
      .def("bregman",
           [](const Penalty& f, const py::array_t<double>& ybar, const py::array_t<double>& y,
              const py::array_t<double>& mu) {
             return f.bregman(to_grid(ybar), to_grid(y), to_grid(mu));
           }, py::arg("ybar"), py::arg("y"), py::arg("mu"));

  m.def("run_admm", &run_admm, py::arg("a"), py::arg("w"), py::arg("b"), py::arg("penalty"),
        py::arg("rho1") = 1000.0, py::arg("rho2") = 10.0, py::arg("tau") = 1.0001,
        py::arg("delta") = 0.0, py::arg("max_iter") = 500, py::arg("x_solver") = "auto",
        py::arg("cg_tol") = 1e-10, py::arg("cg_max_iter") = 500,
        py::arg("ground_truth") = py::none(), py::arg("check_invariants") = false);

  m.def("phantom", [](std::size_t n) { return to_numpy(gen_phantom(n)); }, py::arg("n"));
  m.def("psf_gaussian", [](std::size_t size, double sigma) {
    Psf p = gen_psf_gaussian(size, sigma);
    py::array_t<double> arr({(py::ssize_t)p.rows, (py::ssize_t)p.cols});
    std::copy(p.data.begin(), p.data.end(), arr.mutable_data());
    return arr;
  }, py::arg("size"), py::arg("sigma"));
  m.def("psf_motion", [](double length, double angle_deg) {
    Psf p = gen_psf_motion(length, angle_deg);
    py::array_t<double> arr({(py::ssize_t)p.rows, (py::ssize_t)p.cols});
    std::copy(p.data.begin(), p.data.end(), arr.mutable_data());
    return arr;
  }, py::arg("length"), py::arg("angle_deg"));
  m.def("add_noise", [](const py::array_t<double>& b, double delta, std::uint64_t seed) {
    return to_numpy(add_noise(to_grid(b), delta, seed));
  }, py::arg("b"), py::arg("delta"), py::arg("seed"));
  m.def("psnr", [](const py::array_t<double>& u, const py::array_t<double>& ref, double peak) {
    return psnr(to_grid(u), to_grid(ref), peak);
  }, py::arg("u"), py::arg("ref"), py::arg("peak") = 255.0);

  m.def("oracle_solve_small",
        [](const py::array_t<double>& a, const py::array_t<double>& b, const Penalty& f) {
          py::array_t<double, py::array::c_style | py::array::forcecast> bb(b);
          OracleSolution sol = solve_small(to_matrix(a),
                                           std::vector<double>(bb.data(), bb.data() + bb.size()),
                                           f);
          py::dict out;
          out["status"] = sol.status == OracleStatus::optimal ? "optimal" : "infeasible";
          if (sol.status == OracleStatus::optimal) {
            out["x"] = to_numpy(sol.x);
            out["objective"] = sol.objective;
            py::array_t<double> lam = make_array_1d<double>(sol.lambda.size());
            std::copy(sol.lambda.begin(), sol.lambda.end(), lam.mutable_data());
            out["lam"] = lam;
          }
          return out;
        }, py::arg("a"), py::arg("b"), py::arg("penalty"));

  m.def("read_pgm", [](const std::string& path) { return to_numpy(read_pgm(path)); });
  m.def("write_pgm", [](const std::string& path, const py::array_t<double>& img) {
    write_pgm(path, to_grid(img));
  });
}
