#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qpsh/convex_body.hpp"
#include "qpsh/dirac.hpp"
#include "qpsh/dirichlet.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/forms.hpp"
#include "qpsh/hmatrix.hpp"
#include "qpsh/io.hpp"
#include "qpsh/psh.hpp"
#include "qpsh/sampling.hpp"
#include "qpsh/scalar_field.hpp"
#include "qpsh/valuation.hpp"

namespace py = pybind11;
using namespace qpsh;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (n, n, 4) array <-> quaternionic matrix
QMatrix to_qmatrix(const Array& a) {
  if (a.ndim() != 3 || a.shape(0) != a.shape(1) || a.shape(2) != 4)
    throw PreconditionError("expected an array of shape (n, n, 4)");
  const int n = static_cast<int>(a.shape(0));
  const auto r = a.unchecked<3>();
  QMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Quaternion(r(i, j, 0), r(i, j, 1), r(i, j, 2), r(i, j, 3));
  return m;
}

HMatrix to_hmatrix(const Array& a) { return HMatrix::from_matrix(to_qmatrix(a)); }

Array from_qmatrix(const QMatrix& m) {
  const int n = m.size();
  Array out({n, n, 4});
  auto w = out.mutable_unchecked<3>();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Quaternion& q = m(i, j);
      w(i, j, 0) = q.t, w(i, j, 1) = q.x, w(i, j, 2) = q.y, w(i, j, 3) = q.z;
    }
  return out;
}

std::vector<HMatrix> to_hmatrices(const std::vector<Array>& as) {
  std::vector<HMatrix> out;
  for (const auto& a : as) out.push_back(to_hmatrix(a));
  return out;
}

RealPolynomial poly(const std::string& json) { return io::polynomial_from_json(io::Json::parse(json)); }

std::vector<std::vector<double>> rows(const Array& a) {
  if (a.ndim() != 2) throw PreconditionError("expected a 2-d array of points");
  std::vector<std::vector<double>> out(a.shape(0));
  const auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) out[i].push_back(r(i, j));
  return out;
}

Point4 point4(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

}  // namespace

PYBIND11_MODULE(_qpsh, m) {
  m.doc() = "Quaternionic linear algebra, plurisubharmonic functions and valuations";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("quaternion_multiply", [](std::array<double, 4> p, std::array<double, 4> q) {
    const Quaternion r = Quaternion(p[0], p[1], p[2], p[3]) * Quaternion(q[0], q[1], q[2], q[3]);
    return std::array<double, 4>{r.t, r.x, r.y, r.z};
  });

  m.def("moore_det", [](const Array& a) { return moore_det(to_hmatrix(a)); });
  m.def("real_embedding", [](const Array& a) { return Eigen::MatrixXd(real_embedding(to_hmatrix(a))); });
  m.def("mixed_discriminant", [](const std::vector<Array>& as) { return mixed_discriminant(to_hmatrices(as)); });
  m.def("is_positive_definite", [](const Array& a) { return is_positive_definite(to_hmatrix(a)); });
  m.def("min_embedding_eigenvalue", [](const Array& a) { return min_embedding_eigenvalue(to_hmatrix(a)); });
  m.def("aleksandrov_gap", [](const std::vector<Array>& as, const Array& x) {
    return aleksandrov_gap(to_hmatrices(as), to_hmatrix(x));
  });
  m.def("signature_of_B", [](const std::vector<Array>& as, int n) {
    const Signature s = signature_of_B(to_hmatrices(as), n);
    return py::make_tuple(s.pluses, s.minuses, s.zeros);
  });
  m.def("conj_transform", [](const Array& a, const Array& c) {
    return from_qmatrix(conj_transform(to_hmatrix(a), to_qmatrix(c)).matrix());
  });
  m.def("random_positive_definite", [](std::uint64_t seed, int n) {
    Rng rng(seed);
    return from_qmatrix(random_positive_definite(rng, n).matrix());
  });
  m.def("random_hyperhermitian", [](std::uint64_t seed, int n) {
    Rng rng(seed);
    return from_qmatrix(random_hyperhermitian(rng, n).matrix());
  });

  m.def("hessian", [](const std::string& p, std::vector<double> point) {
    return from_qmatrix(hessian(ScalarField::polynomial(poly(p)), point).matrix());
  });
  m.def("ma_density", [](const std::string& p, std::vector<double> point) {
    return ma_density(ScalarField::polynomial(poly(p)), point);
  });
  m.def("is_psh", [](const std::string& p, const Array& samples) {
    const auto pts = rows(samples);
    const PshVerdict v = is_psh_hessian(ScalarField::polynomial(poly(p)), pts);
    py::dict out;
    out["is_psh"] = v.is_psh;
    out["is_strict"] = v.is_strict;
    if (v.witness) {
      out["witness_point"] = v.witness->point;
      out["witness_eigenvalue"] = v.witness->eigenvalue;
    }
    return out;
  });

  m.def("solve_dirichlet", [](const std::string& f, const std::string& phi, double h, double tol) {
    const auto boundary = ScalarField::polynomial(poly(phi));
    const BoundaryFunction g = [&](const Point4& q) { return boundary.value(q).t; };
    DirichletOptions opts;
    opts.relative_tolerance = tol;
    const BallGrid grid = solve_n1(ScalarField::polynomial(poly(f)), g, h, opts);
    Eigen::MatrixXd nodes(grid.interior.size(), 4);
    for (std::size_t r = 0; r < grid.interior.size(); ++r) {
      const Point4 c = grid.coords(grid.interior[r]);
      for (int a = 0; a < 4; ++a) nodes(static_cast<Eigen::Index>(r), a) = c[a];
    }
    const SolutionError e = solution_error(grid, g);
    py::dict out;
    out["nodes"] = nodes;
    out["values"] = Eigen::VectorXd(grid.values);
    out["iterations"] = grid.iterations;
    out["max_principle"] = grid.max_principle_holds;
    out["sup_error_vs_boundary_data"] = e.sup;
    return out;
  }, py::arg("f"), py::arg("phi"), py::arg("h") = 0.125, py::arg("tol") = 1e-12);

  m.def("valuation", [](const std::string& body, int n, int k, double delta, int samples, std::uint64_t seed) {
    ValuationSpec spec;
    spec.n = n;
    spec.k = k;
    spec.v = k == n ? WeightField::none(n) : WeightField::constant_identity(n, n - k);
    spec.delta = delta;
    spec.samples = samples;
    spec.seed = seed;
    spec.validate();
    const ValuationResult r = valuation(io::body_from_json(io::Json::parse(body)), spec);
    return py::make_tuple(r.value, r.standard_error);
  }, py::arg("body"), py::arg("n") = 1, py::arg("k") = 1, py::arg("delta") = 0.1, py::arg("samples") = 1 << 14,
     py::arg("seed") = 1);

  m.def("hkt_flat_check", [](const std::string& p, const Array& samples) {
    const auto pts = rows(samples);
    const HktReport r = hkt_flat_check(poly(p), pts);
    py::dict out;
    out["metric_positive"] = r.metric_positive;
    out["omega_is_20"] = r.omega_is_20;
    out["d_omega_zero"] = r.d_omega_zero;
    out["max_d_omega"] = r.max_d_omega;
    return out;
  });
  m.def("quarter_identity_deviation", [](const std::string& p, std::vector<double> point) {
    const RealPolynomial f = poly(p);
    const HMatrix h = hessian(ScalarField::polynomial(f), point);
    return max_abs_diff(t_map(ddj(f), point).g.matrix(), 0.25 * h.matrix());
  });
}
