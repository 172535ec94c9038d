#include "commands.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "qpsh/convex_body.hpp"
#include "qpsh/dirac.hpp"
#include "qpsh/dirichlet.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/forms.hpp"
#include "qpsh/psh.hpp"
#include "qpsh/sampling.hpp"
#include "qpsh/valuation.hpp"
#include "qpsh/weight.hpp"

namespace qpsh::cli {

using io::fmt;
using io::Json;

std::string Report::csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

namespace {

// ---- config helpers ---------------------------------------------------------

int get_int(const Json& c, const char* key, int def) {
  if (!c.contains(key)) return def;
  if (!c[key].is_number_integer()) throw ParseError(std::string("'") + key + "' must be an integer");
  return c[key].get<int>();
}

double get_double(const Json& c, const char* key, double def) {
  if (!c.contains(key)) return def;
  if (!c[key].is_number()) throw ParseError(std::string("'") + key + "' must be a number");
  return c[key].get<double>();
}

bool get_bool(const Json& c, const char* key, bool def) {
  if (!c.contains(key)) return def;
  if (!c[key].is_boolean()) throw ParseError(std::string("'") + key + "' must be a boolean");
  return c[key].get<bool>();
}

std::string get_string(const Json& c, const char* key, std::string def) {
  if (!c.contains(key)) return def;
  if (!c[key].is_string()) throw ParseError(std::string("'") + key + "' must be a string");
  return c[key].get<std::string>();
}

std::vector<double> get_doubles(const Json& c, const char* key, std::vector<double> def) {
  return c.contains(key) ? io::vector_from_json(c[key]) : def;
}

std::vector<int> get_ints(const Json& c, const char* key, std::vector<int> def) {
  if (!c.contains(key)) return def;
  std::vector<int> out;
  for (double v : io::vector_from_json(c[key])) out.push_back(static_cast<int>(v));
  return out;
}

/// "matrices" or "matrix" from the config, otherwise `count` generated ones.
std::vector<HMatrix> matrices(const Json& c, Rng& rng, int count,
                              const std::function<HMatrix(Rng&, int)>& gen, int fixed_n = 0) {
  std::vector<HMatrix> out;
  if (c.contains("matrices")) {
    for (const auto& m : c["matrices"]) out.push_back(io::hmatrix_from_json(m));
    return out;
  }
  if (c.contains("matrix")) return {io::hmatrix_from_json(c["matrix"])};
  const int n = get_int(c, "n", fixed_n);
  for (int s = 0; s < get_int(c, "count", count); ++s) out.push_back(gen(rng, n > 0 ? n : rng.integer(1, 4)));
  return out;
}

std::vector<std::vector<double>> sample_points(Rng& rng, int dim, int count, double radius) {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < count; ++i) pts.push_back(random_point(rng, dim, radius));
  return pts;
}

double relative(double dev, double scale) { return dev / std::max(1.0, std::fabs(scale)); }

std::string flag(bool b) { return b ? "1" : "0"; }

// ---- quat_core / hyperherm_la ----------------------------------------------

Report moore_det_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  const int range = get_int(ctx.config, "range", 3);
  const auto mats = matrices(ctx.config, rng, 50,
                             [&](Rng& r, int n) { return random_integer_hyperhermitian(r, n, -range, range); });
  Report rep;
  rep.header = {"index", "n", "moore_det", "embedding_det", "deviation"};
  double worst = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const double md = moore_det(mats[i]);
    const double rd = real_embedding(mats[i]).determinant();
    const double dev = relative(std::fabs(std::pow(md, 4) - rd), rd);
    worst = std::max(worst, dev);
    rep.row({std::to_string(i), std::to_string(mats[i].size()), fmt(md), fmt(rd), fmt(dev)});
  }
  rep.pass = worst <= 1e-8;
  rep.summary = {{"matrices", mats.size()}, {"max_deviation", worst}, {"fourth_power_oracle", rep.pass}};
  return rep;
}

Report mixed_disc_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  std::vector<std::vector<HMatrix>> tuples;
  if (ctx.config.contains("tuples")) {
    for (const auto& t : ctx.config["tuples"]) {
      std::vector<HMatrix> tuple;
      for (const auto& m : t) tuple.push_back(io::hmatrix_from_json(m));
      tuples.push_back(std::move(tuple));
    }
  } else {
    const int n = get_int(ctx.config, "n", 3);
    for (int s = 0; s < get_int(ctx.config, "count", 20); ++s) {
      std::vector<HMatrix> tuple;
      for (int i = 0; i < n; ++i) tuple.push_back(random_integer_hyperhermitian(rng, n, -3, 3));
      tuples.push_back(std::move(tuple));
    }
  }
  Report rep;
  rep.header = {"index", "n", "mixed_discriminant", "symmetry_deviation", "diagonal_deviation"};
  double sym = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    const double v = mixed_discriminant(t);
    std::vector<HMatrix> rev(t.rbegin(), t.rend());
    const double ds = relative(std::fabs(mixed_discriminant(rev) - v), v);
    const std::vector<HMatrix> same(t.size(), t[0]);
    const double md = moore_det(t[0]);
    const double dd = relative(std::fabs(mixed_discriminant(same) - md), md);
    sym = std::max(sym, ds);
    diag = std::max(diag, dd);
    rep.row({std::to_string(i), std::to_string(t[0].size()), fmt(v), fmt(ds), fmt(dd)});
  }
  rep.summary = {{"tuples", tuples.size()},
                 {"max_symmetry_deviation", sym},
                 {"max_diagonal_deviation", diag},
                 {"symmetric", sym <= 1e-9},
                 {"diagonal_is_moore_det", diag <= 1e-9}};
  rep.pass = sym <= 1e-9 && diag <= 1e-9;
  return rep;
}

Report sylvester_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  const auto mats = matrices(ctx.config, rng, 200, [](Rng& r, int n) {
    // spectra straddling zero
    return random_positive_definite(r, n, 0.0) - r.uniform(0.0, 1.5 * n) * HMatrix::identity(n);
  });
  Report rep;
  rep.header = {"index", "n", "sylvester", "min_eigenvalue", "agree"};
  int disagreements = 0, positive = 0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const bool s = is_positive_definite(mats[i]);
    const double ev = min_embedding_eigenvalue(mats[i]);
    const bool agree = s == (ev > 0.0);
    disagreements += !agree;
    positive += s;
    rep.row({std::to_string(i), std::to_string(mats[i].size()), flag(s), fmt(ev), flag(agree)});
  }
  rep.pass = disagreements == 0;
  rep.summary = {{"matrices", mats.size()}, {"positive_definite", positive}, {"disagreements", disagreements}};
  return rep;
}

Report aleksandrov_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  const int n = get_int(ctx.config, "n", 3);
  if (n < 2) throw PreconditionError("aleksandrov: n >= 2 required");
  Report rep;
  rep.header = {"index", "n", "gap", "scale", "proportional_gap"};
  double worst = 0.0, worst_prop = 0.0;
  for (int s = 0; s < get_int(ctx.config, "count", 100); ++s) {
    std::vector<HMatrix> as;
    for (int i = 0; i < n - 1; ++i) as.push_back(random_positive_definite(rng, n));
    const HMatrix x = random_hyperhermitian(rng, n);
    auto scale_of = [&](const HMatrix& y) {
      std::vector<HMatrix> ax(as), aa(as), xx(as.begin(), as.end() - 1);
      ax.push_back(y);
      aa.push_back(as.back());
      xx.push_back(y);
      xx.push_back(y);
      const double dx = mixed_discriminant(ax);
      return std::max({1.0, dx * dx, std::fabs(mixed_discriminant(aa) * mixed_discriminant(xx))});
    };
    const double gap = aleksandrov_gap(as, x), scale = scale_of(x);
    const HMatrix prop = rng.uniform(-2.0, 2.0) * as.back();
    const double pgap = aleksandrov_gap(as, prop);
    worst = std::min(worst, gap / scale);
    worst_prop = std::max(worst_prop, std::fabs(pgap) / scale_of(prop));
    rep.row({std::to_string(s), std::to_string(n), fmt(gap), fmt(scale), fmt(pgap)});
  }
  rep.pass = worst >= -1e-9 && worst_prop <= 1e-9;
  rep.summary = {{"min_relative_gap", worst},
                 {"max_relative_proportional_gap", worst_prop},
                 {"inequality", worst >= -1e-9},
                 {"equality_case", worst_prop <= 1e-9}};
  return rep;
}

Report signature_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  Report rep;
  rep.header = {"index", "n", "pluses", "minuses", "zeros", "expected"};
  int mismatches = 0, index = 0;
  for (int n : get_ints(ctx.config, "n", {2, 3})) {
    if (n < 2) throw PreconditionError("signature: n >= 2 required");
    const Signature want{1, n * (2 * n - 1) - 1, 0};
    for (int s = 0; s < get_int(ctx.config, "count", 10); ++s) {
      std::vector<HMatrix> as;
      for (int i = 0; i < n - 2; ++i) as.push_back(random_positive_definite(rng, n));
      const Signature sig = signature_of_B(as, n);
      mismatches += !(sig == want);
      rep.row({std::to_string(index++), std::to_string(n), std::to_string(sig.pluses), std::to_string(sig.minuses),
               std::to_string(sig.zeros), flag(sig == want)});
    }
  }
  rep.pass = mismatches == 0;
  rep.summary = {{"tuples", index}, {"mismatches", mismatches}};
  return rep;
}

// ---- dirac_calc --------------------------------------------------------------

Report dirac_check_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  const int n = get_int(ctx.config, "n", 2);
  Report rep;
  rep.header = {"kind", "index", "deviation"};
  double comm = 0.0, trans = 0.0;
  for (int s = 0; s < get_int(ctx.config, "fields", 50); ++s) {
    const auto f = ScalarField::polynomial(random_polynomial(rng, 4 * n, 4, 8, false));
    const auto pts = sample_points(rng, 4 * n, 4, 1.0);
    double dev = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto a = dbar(d(f, j), i), b = d(dbar(f, i), j);
        for (const auto& p : pts) {
          const Quaternion va = a.value(p);
          dev = std::max(dev, relative(max_abs_diff(va, b.value(p)), abs(va)));
        }
      }
    comm = std::max(comm, dev);
    rep.row({"commutator", std::to_string(s), fmt(dev)});
  }
  for (int s = 0; s < get_int(ctx.config, "maps", 20); ++s) {
    const auto f = ScalarField::polynomial(random_real_polynomial(rng, 4 * n, 4, 8));
    const QMatrix a = random_qmatrix(rng, n);
    const double dev = check_transformation(f, a, sample_points(rng, 4 * n, 4, 1.0));
    trans = std::max(trans, dev);
    rep.row({"transformation", std::to_string(s), fmt(dev)});
  }
  rep.pass = comm <= 1e-10 && trans <= 1e-8;
  rep.summary = {{"n", n},
                 {"max_commutator_deviation", comm},
                 {"max_transformation_deviation", trans},
                 {"commute", comm <= 1e-10},
                 {"transformation_law", trans <= 1e-8}};
  return rep;
}

// ---- psh_ma ------------------------------------------------------------------

RealPolynomial field_from_config(const Json& c, Rng& rng, int default_n) {
  if (c.contains("field")) return io::polynomial_from_json(c["field"]);
  return random_strictly_psh(rng, default_n);
}

Report psh_check_cmd(const RunContext& ctx) {
  Rng rng(ctx.seed);
  const RealPolynomial p =
      ctx.config.contains("field") ? io::polynomial_from_json(ctx.config["field"])
                                   : io::polynomial_from_json(Json{{"builtin", "norm_sq"}, {"n", 2}});
  if (p.nvars() % 4 != 0) throw PreconditionError("psh-check: field needs 4n variables");
  const int n = p.nvars() / 4;
  const auto f = ScalarField::polynomial(p);
  const auto pts = sample_points(rng, 4 * n, get_int(ctx.config, "samples", 20), get_double(ctx.config, "radius", 1.0));
  const int dirs = get_int(ctx.config, "directions", 8);
  const PshVerdict verdict = is_psh_hessian(f, pts);

  Report rep;
  rep.header = {"index", "min_eigenvalue", "min_line_laplacian", "agree"};
  int disagreements = 0;
  const std::vector<Quaternion> origin{Quaternion()};
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const HMatrix h = hessian(f, pts[s]);
    const double ev = min_embedding_eigenvalue(h);
    // random unit directions plus the worst direction of the real embedding
    std::vector<std::vector<Quaternion>> bs;
    for (int t = 0; t < dirs; ++t) {
      std::vector<Quaternion> b;
      double norm = 0.0;
      for (int i = 0; i < n; ++i) {
        b.push_back(rng.quaternion(-1, 1));
        norm += norm_sq(b.back());
      }
      for (auto& q : b) q = q / std::sqrt(norm);
      bs.push_back(b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(real_embedding(h));
    std::vector<Quaternion> worst;
    for (int i = 0; i < n; ++i) {
      const auto v = es.eigenvectors().col(0);
      worst.emplace_back(v[4 * i], v[4 * i + 1], v[4 * i + 2], v[4 * i + 3]);
    }
    bs.push_back(worst);
    double line = std::numeric_limits<double>::infinity();
    for (const auto& b : bs) line = std::min(line, line_laplacian(f, pts[s], b, origin[0]));
    const double tol = 1e-9 * (1.0 + h.max_abs());
    const bool agree = (ev >= -tol) == (line >= -tol);
    disagreements += !agree;
    rep.row({std::to_string(s), fmt(ev), fmt(line), flag(agree)});
  }
  rep.pass = disagreements == 0;
  rep.summary = {{"n", n}, {"is_psh", verdict.is_psh}, {"is_strict", verdict.is_strict}, {"disagreements", disagreements}};
  if (verdict.witness)
    rep.summary["witness"] = {{"point", verdict.witness->point}, {"eigenvalue", verdict.witness->eigenvalue}};
  return rep;
}

std::function<double(const Point4&)> grid_function(const std::string& name) {
  if (name == "max_t0") return [](const Point4& y) { return std::max(y[0], 0.0); };
  if (name == "abs_t") return [](const Point4& y) { return std::fabs(y[0]); };
  if (name == "norm_sq") return [](const Point4& y) { return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]; };
  if (name == "cube_support")
    return [](const Point4& y) { return std::fabs(y[0]) + std::fabs(y[1]) + std::fabs(y[2]) + std::fabs(y[3]); };
  if (name == "ball_support")
    return [](const Point4& y) { return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]); };
  throw ParseError("unknown grid field '" + name + "'");
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  // least squares slope of log y against log x
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Report ma_measure_cmd(const RunContext& ctx) {
  const Json& c = ctx.config;
  Report rep;
  rep.header = {"delta", "psi_id", "integral", "residual"};
  const std::string mode = get_string(c, "mode", "mollified");
  if (mode == "perturbed") {
    // u_N = u + |q|^2 / N against the limit pairing at N = infinity
    Rng rng(ctx.seed);
    const RealPolynomial u = field_from_config(c, rng, get_int(c, "n", 2));
    const int n = u.nvars() / 4;
    const auto psi = tensor_bump(std::vector<double>(4 * n, 0.0), get_double(c, "psi_radius", 0.5), "psi");
    const int samples = get_int(c, "samples", 1 << 14);
    RealPolynomial norm(4 * n);
    for (int v = 0; v < 4 * n; ++v) {
      RealPolynomial::Exponent e(4 * n, 0);
      e[v] = 2;
      norm.add_term(e, 1.0);
    }
    auto pairing = [&](const RealPolynomial& p) {
      const auto f = ScalarField::polynomial(p);
      return qmc_integrate(psi, [&](std::span<const double> y) { return ma_density(f, y); }, samples);
    };
    const double limit = pairing(u);
    std::vector<double> ns, errs;
    for (int nn : get_ints(c, "N", {4, 8, 16})) {
      const double v = pairing(u + (1.0 / nn) * norm);
      ns.push_back(nn);
      errs.push_back(std::fabs(v - limit));
      rep.row({fmt(1.0 / nn), psi.id, fmt(v), fmt(errs.back())});
    }
    const double slope = fitted_slope(ns, errs);
    rep.pass = std::fabs(slope + 1.0) <= 0.2;
    rep.summary = {{"mode", mode}, {"n", n}, {"limit", limit}, {"fitted_slope", slope}, {"rate_one_over_n", rep.pass}};
    return rep;
  }
  if (mode != "mollified") throw ParseError("ma-measure: mode must be 'mollified' or 'perturbed'");
  const std::string field = get_string(c, "field", "max_t0");
  const auto spec = GridSpec::cube(get_double(c, "lo", -1.0), get_double(c, "hi", 1.0), get_int(c, "cells", 20));
  const GridField u = GridField::sample(spec, grid_function(field));
  const auto deltas = get_doubles(c, "deltas", {0.4, 0.3, 0.2});
  Json per_psi = Json::array();
  bool finite = true;
  for (double r : get_doubles(c, "psi_radii", {0.3, 0.4, 0.5})) {
    const auto psi = tensor_bump({0.0, 0.0, 0.0, 0.0}, r, "bump_" + fmt(r));
    const auto vals = ma_integral_mollified(u, psi, deltas);
    const double raw = ma_pairing_grid(u, psi);
    Json diffs = Json::array();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double res = i ? std::fabs(vals[i] - vals[i - 1]) : 0.0;
      if (i) diffs.push_back(res);
      finite = finite && std::isfinite(vals[i]);
      rep.row({fmt(deltas[i]), psi.id, fmt(vals[i]), fmt(res)});
    }
    per_psi.push_back({{"psi_id", psi.id}, {"unmollified", raw}, {"successive_differences", diffs}});
  }
  rep.pass = finite;
  rep.summary = {{"mode", mode}, {"field", field}, {"grid_h", spec.h}, {"weights", per_psi}};
  return rep;
}

Report blocki_cmd(const RunContext& ctx) {
  const Json& c = ctx.config;
  const std::string kase = get_string(c, "case", "box-pair");
  const double hw = get_double(c, "half_width", 0.4);
  const auto spec = GridSpec::cube(-hw, hw, get_int(c, "cells", 32));
  auto box = [](double a, double b) {
    // support of [a, b] x [-1, 1]^3
    return [a, b](const Point4& y) {
      return std::max(a * y[0], b * y[0]) + std::fabs(y[1]) + std::fabs(y[2]) + std::fabs(y[3]);
    };
  };
  GridField f, g;
  if (kase == "box-pair") {
    f = GridField::sample(spec, box(-1.0, 0.0));
    g = GridField::sample(spec, box(0.0, 1.0));
  } else if (kase == "nested") {
    f = GridField::sample(spec, [&](const Point4& y) { return 0.5 * box(-1.0, 1.0)(y); });
    g = GridField::sample(spec, box(-1.0, 1.0));
  } else if (kase == "equal") {
    f = g = GridField::sample(spec, box(-1.0, 1.0));
  } else {
    throw ParseError("blocki: case must be box-pair, nested or equal");
  }
  const auto psi = tensor_bump({0.0, 0.0, 0.0, 0.0}, get_double(c, "psi_radius", 0.15), "psi");
  const auto deltas = get_doubles(c, "deltas", {0.2, 0.1, 0.05});
  Report rep;
  rep.header = {"delta", "psi_id", "integral", "residual"};
  std::vector<double> res;
  bool identity = true;
  const GridField mx = pointwise_max(f, g);
  for (double d : deltas) {
    const double pair = ma_pairing_grid(mollify(mx, d), psi);
    const double r = blocki_residual(f, g, WeightField::none(1), psi, d);
    res.push_back(r);
    // the identity itself: residual at rounding level of the pairing
    identity = identity && r <= 1e-12 * std::max(1.0, std::fabs(pair));
    rep.row({fmt(d), psi.id, fmt(pair), fmt(r)});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < res.size(); ++i) decreasing = decreasing && res[i] < res[i - 1];
  const bool exact = std::all_of(res.begin(), res.end(), [](double r) { return r == 0.0; });
  rep.pass = kase == "box-pair" ? identity : exact;
  rep.summary = {{"case", kase},
                 {"grid_h", spec.h},
                 {"residuals", res},
                 {"identity_to_rounding", identity},
                 {"exactly_zero", exact},
                 {"strictly_decreasing", decreasing},
                 {"final_over_first", res.empty() || res[0] == 0.0 ? 0.0 : res.back() / res[0]}};
  return rep;
}

// ---- dirichlet ---------------------------------------------------------------

Report dirichlet_cmd(const RunContext& ctx) {
  const Json& c = ctx.config;
  const std::string kase = get_string(c, "case", "harmonic-t");
  auto r2 = [](const Point4& q) { return q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]; };
  RealPolynomial f = RealPolynomial::constant(4, 0.0);
  BoundaryFunction exact;
  if (kase == "harmonic-t") {
    exact = [](const Point4& q) { return q[0]; };
  } else if (kase == "constant") {
    exact = [](const Point4&) { return 1.0; };
  } else if (kase == "harmonic-quadratic") {
    exact = [](const Point4& q) { return q[0] * q[0] - q[1] * q[1] + q[2] * q[3]; };
  } else if (kase == "paraboloid") {
    f = RealPolynomial::constant(4, 8.0);
    exact = r2;
  } else if (kase == "quartic") {
    f = 24.0 * io::polynomial_from_json(Json{{"builtin", "norm_sq"}});
    exact = [r2](const Point4& q) { return r2(q) * r2(q); };
  } else {
    throw ParseError("dirichlet: unknown case '" + kase + "'");
  }
  DirichletOptions opts;
  opts.relative_tolerance = get_double(c, "tolerance", 1e-12);
  Report rep;
  rep.header = {"h", "sup_error", "l2_error", "iterations"};
  std::vector<double> hs = get_doubles(c, "hs", {0.125}), sups;
  bool max_principle = true;
  for (double h : hs) {
    const BallGrid g = solve_n1(ScalarField::polynomial(f), exact, h, opts);
    const SolutionError e = solution_error(g, exact);
    sups.push_back(e.sup);
    max_principle = max_principle && g.max_principle_holds;
    rep.row({fmt(h), fmt(e.sup), fmt(e.l2), std::to_string(g.iterations)});
  }
  Json orders = Json::array();
  for (std::size_t i = 1; i < hs.size(); ++i)
    orders.push_back(std::log(sups[i - 1] / sups[i]) / std::log(hs[i - 1] / hs[i]));
  rep.pass = max_principle;
  rep.summary = {{"case", kase}, {"orders", orders}, {"max_principle", max_principle}};
  return rep;
}

// ---- valuations ----------------------------------------------------------------

Report valuation_cmd(const RunContext& ctx) {
  const Json& c = ctx.config;
  ValuationSpec base;
  base.n = get_int(c, "n", 1);
  base.k = get_int(c, "k", 1);
  if (base.n < 1 || base.k < 1 || base.k > base.n) throw PreconditionError("valuation: need 1 <= k <= n");
  base.v = base.k == base.n ? WeightField::none(base.n) : WeightField::constant_identity(base.n, base.n - base.k);
  base.inner = get_double(c, "inner", 0.5);
  base.outer = get_double(c, "outer", 2.0);
  base.samples = get_int(c, "samples", base.n == 1 ? 1 << 16 : 1 << 18);
  base.kernel_nodes = get_int(c, "kernel_nodes", 512);
  base.replicates = get_int(c, "replicates", 8);
  base.seed = ctx.seed;
  base.threads = ctx.threads;

  std::vector<std::pair<std::string, ConvexBody>> bodies;
  if (c.contains("bodies")) {
    for (const auto& b : c["bodies"]) bodies.emplace_back(get_string(b, "id", "body"), io::body_from_json(b.at("body")));
  } else {
    const int d = 4 * base.n;
    bodies.emplace_back("cube", ConvexBody::box(std::vector<double>(d, -1.0), std::vector<double>(d, 1.0)));
  }
  Report rep;
  rep.header = {"body_id", "k", "delta", "value", "stderr"};
  Json results = Json::array();
  bool finite = true;
  for (double delta : get_doubles(c, "deltas", {0.1})) {
    ValuationSpec spec = base;
    spec.delta = delta;
    spec.validate();
    const KernelRule rule = KernelRule::build(spec.n, delta, spec.kernel_nodes);
    for (const auto& [id, body] : bodies) {
      if (body.dim() != 4 * spec.n) throw PreconditionError("valuation: body '" + id + "' has the wrong dimension");
      const ValuationResult r = valuation(body, spec, rule);
      finite = finite && std::isfinite(r.value);
      rep.row({id, std::to_string(spec.k), fmt(delta), fmt(r.value), fmt(r.standard_error)});
      results.push_back({{"body_id", id}, {"delta", delta}, {"value", r.value}, {"stderr", r.standard_error}});
    }
  }
  rep.pass = finite;
  rep.summary = {{"n", base.n},      {"k", base.k},         {"samples", base.samples},
                 {"replicates", base.replicates}, {"kernel_nodes", base.kernel_nodes}, {"results", results}};
  return rep;
}

// ---- hypercomplex_flat -------------------------------------------------------

Report hkt_check_cmd(const RunContext& ctx) {
  const Json& c = ctx.config;
  Rng rng(ctx.seed);
  std::vector<RealPolynomial> pots;
  if (c.contains("potentials")) {
    for (const auto& p : c["potentials"]) pots.push_back(io::polynomial_from_json(p));
  } else {
    for (int n : {1, 2}) {
      pots.push_back(io::polynomial_from_json(Json{{"builtin", "norm_sq"}, {"n", n}}));
      for (int s = 0; s < 2; ++s) pots.push_back(random_strictly_psh(rng, n));
    }
  }
  const bool strict = get_bool(c, "strict", true);
  const int samples = get_int(c, "samples", 5);
  Report rep;
  rep.header = {"index", "n", "metric_positive", "omega_is_20", "max_d_omega", "quarter_deviation", "reality_defect",
                "passed"};
  int failures = 0;
  double worst_quarter = 0.0;
  for (std::size_t i = 0; i < pots.size(); ++i) {
    const auto& p = pots[i];
    if (p.nvars() % 4 != 0 || p.nvars() / 4 > Form::kMaxN) throw PreconditionError("hkt-check: need 4n variables, n <= 4");
    const int n = p.nvars() / 4;
    const auto pts = sample_points(rng, 4 * n, samples, 1.0);
    const HktReport h = hkt_flat_check(p, pts);
    const Form eta = ddj(p);
    const auto field = ScalarField::polynomial(p);
    double quarter = 0.0;
    for (const auto& x : pts) {
      const HMatrix hess = hessian(field, x);
      quarter = std::max(quarter, relative(max_abs_diff(t_map(eta, x).g.matrix(), 0.25 * hess.matrix()), hess.max_abs()));
    }
    const double real_def = reality_defect(eta);
    const bool ok = h.passed(strict) && quarter <= 1e-10 && real_def <= 1e-12 * std::max(1.0, eta.max_abs_coeff());
    failures += !ok;
    worst_quarter = std::max(worst_quarter, quarter);
    rep.row({std::to_string(i), std::to_string(n), flag(h.metric_positive), flag(h.omega_is_20), fmt(h.max_d_omega),
             fmt(quarter), fmt(real_def), flag(ok)});
  }
  rep.pass = failures == 0;
  rep.summary = {{"potentials", pots.size()},
                 {"strict", strict},
                 {"failures", failures},
                 {"max_quarter_deviation", worst_quarter},
                 {"j_table", {kJTable.c1, kJTable.c2}}};
  return rep;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all{
      {"moore-det", "Moore determinants with the fourth-power embedding oracle", moore_det_cmd,
       Json{{"count", 30}}},
      {"mixed-disc", "mixed discriminants of matrix tuples", mixed_disc_cmd, Json{{"n", 3}, {"count", 10}}},
      {"sylvester", "Sylvester criterion against embedding eigenvalues", sylvester_cmd, Json{{"count", 100}}},
      {"aleksandrov", "Aleksandrov-Fenchel type inequality gaps", aleksandrov_cmd, Json{{"n", 3}, {"count", 30}}},
      {"signature", "signature of the mixed-discriminant quadratic form", signature_cmd, Json{{"count", 3}}},
      {"dirac-check", "Dirac operator commutation and Hessian transformation law", dirac_check_cmd,
       Json{{"fields", 10}, {"maps", 5}}},
      {"psh-check", "Hessian versus right-line criteria for plurisubharmonicity", psh_check_cmd,
       Json{{"field", {{"builtin", "norm_sq"}, {"n", 2}}}, {"samples", 10}}},
      {"ma-measure", "Monge-Ampere pairings under mollification or perturbation", ma_measure_cmd,
       Json{{"mode", "perturbed"}, {"n", 2}, {"samples", 4096}}},
      {"blocki", "max/min identity residuals for the n = 1 Monge-Ampere measure", blocki_cmd,
       Json{{"case", "nested"}, {"cells", 16}, {"deltas", {0.2, 0.1}}}},
      {"dirichlet", "Dirichlet problem in the unit ball of H", dirichlet_cmd,
       Json{{"case", "paraboloid"}, {"hs", {0.25, 0.125}}}},
      {"valuation", "quaternionic Kazarnovskii-type valuations of convex bodies", valuation_cmd,
       Json{{"samples", 4096}}},
      {"hkt-check", "flat-space HKT identities for psh potentials", hkt_check_cmd, Json{{"samples", 3}}},
  };
  return all;
}

}  // namespace qpsh::cli
