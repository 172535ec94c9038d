#include "qpsh/forms.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "qpsh/dirac.hpp"
#include "qpsh/errors.hpp"
#include "qpsh/scalar_field.hpp"

namespace qpsh {

namespace {

using cd = std::complex<double>;
using Mask = Form::Mask;

constexpr cd kI{0.0, 1.0};

int parity(Mask m) { return std::popcount(m) & 1; }

// Appends symbol s after the symbols in `mask`; returns the sign (0 if s is
// already present).
int append_sign(Mask mask, int s) {
  if (mask & (Mask{1} << s)) return 0;
  return parity(mask >> (s + 1)) ? -1 : 1;
}

// Sign of a ^ b in canonical order (0 on overlap).
int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int sign = 1;
  for (Mask rest = b; rest; rest &= rest - 1) {
    const int t = std::countr_zero(rest);
    if (parity(a >> (t + 1))) sign = -sign;
  }
  return sign;
}

std::vector<int> symbols_of(Mask m) {
  std::vector<int> s;
  for (; m; m &= m - 1) s.push_back(std::countr_zero(m));
  return s;
}

// Value of basis covector `s` on the real vector v.
cd covector_value(int n, int s, std::span<const double> v) {
  const bool bar = s >= 2 * n;
  const int a = bar ? s - 2 * n : s;
  const int r = a / 2;
  cd val = (a % 2 == 0) ? cd(v[4 * r], v[4 * r + 1]) : cd(v[4 * r + 2], -v[4 * r + 3]);
  return bar ? std::conj(val) : val;
}

// d/dw_a or d/dwbar_a of a polynomial in the real coordinates.
ComplexPolynomial complex_partial(const ComplexPolynomial& p, int a, bool bar) {
  const int r = a / 2;
  if (a % 2 == 0) {
    // w = t + x i
    const ComplexPolynomial dt = p.derivative(4 * r), dx = p.derivative(4 * r + 1);
    return cd(0.5) * dt + (bar ? cd(0, 0.5) : cd(0, -0.5)) * dx;
  }
  // w = y - z i
  const ComplexPolynomial dy = p.derivative(4 * r + 2), dz = p.derivative(4 * r + 3);
  return cd(0.5) * dy + (bar ? cd(0, -0.5) : cd(0, 0.5)) * dz;
}

std::pair<int, int> type_of(int n, Mask m) {
  const Mask holo = (Mask{1} << (2 * n)) - 1;
  return {std::popcount(m & holo), std::popcount(m >> (2 * n))};
}

ComplexPolynomial to_complex(const RealPolynomial& p) {
  return p.map_coefficients<cd>([](double c) { return cd(c); });
}

// dX_p written in the complex basis.
Form real_covector(int n, int p) {
  const int r = p / 4, c = p % 4;
  const int nv = 4 * n;
  Form f(n);
  const int a = (c < 2) ? 2 * r : 2 * r + 1;
  cd hol, anti;
  switch (c) {
    case 0: hol = 0.5, anti = 0.5; break;                    // dt
    case 1: hol = cd(0, -0.5), anti = cd(0, 0.5); break;     // dx
    case 2: hol = 0.5, anti = 0.5; break;                    // dy
    default: hol = cd(0, 0.5), anti = cd(0, -0.5); break;    // dz
  }
  f.add(Mask{1} << a, ComplexPolynomial::constant(nv, hol));
  f.add(Mask{1} << (2 * n + a), ComplexPolynomial::constant(nv, anti));
  return f;
}

// sum_{p<q} m(p, q) dX_p ^ dX_q
Form real_two_form(int n, const std::vector<std::vector<ComplexPolynomial>>& m) {
  const int d = 4 * n;
  std::vector<Form> dx;
  for (int p = 0; p < d; ++p) dx.push_back(real_covector(n, p));
  Form out(n);
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q) {
      if (m[p][q].empty()) continue;
      Form w = wedge(dx[p], dx[q]);
      for (const auto& [mask, c] : w.terms()) out.add(mask, c * m[p][q]);
    }
  return out;
}

// Symbolic B(e_p, e_q) = eta(e_p, e_q j) for a 2-form eta.
std::vector<std::vector<ComplexPolynomial>> j_pairing(const Form& eta) {
  const int n = eta.n(), d = 4 * n;
  const Eigen::MatrixXd rj = right_unit_matrix(n, 2);
  std::vector<std::vector<ComplexPolynomial>> b(d, std::vector<ComplexPolynomial>(d, ComplexPolynomial(d)));
  std::vector<double> ep(d), eqj(d);
  for (const auto& [mask, coef] : eta.terms()) {
    const auto s = symbols_of(mask);
    if (s.size() != 2) throw PreconditionError("j_pairing: 2-form required");
    for (int p = 0; p < d; ++p) {
      std::fill(ep.begin(), ep.end(), 0.0);
      ep[p] = 1.0;
      for (int q = 0; q < d; ++q) {
        for (int c = 0; c < d; ++c) eqj[c] = rj(c, q);
        const cd k = covector_value(n, s[0], ep) * covector_value(n, s[1], eqj) -
                     covector_value(n, s[1], ep) * covector_value(n, s[0], eqj);
        if (k != cd(0.0)) b[p][q] += k * coef;
      }
    }
  }
  return b;
}

}  // namespace

Form::Form(int n) : n_(n) {
  if (n < 1 || n > kMaxN) throw PreconditionError("Form: n out of range");
}

Form Form::function(const ComplexPolynomial& f) {
  if (f.nvars() % 4 != 0) throw PreconditionError("Form::function: need 4n variables");
  Form w(f.nvars() / 4);
  w.add(0, f);
  return w;
}

Form Form::function(const RealPolynomial& f) { return function(to_complex(f)); }

Form Form::monomial(int n, std::span<const int> symbols, const ComplexPolynomial& coef) {
  Form w(n);
  Mask m = 0;
  int sign = 1;
  for (int s : symbols) {
    if (s < 0 || s >= 4 * n) throw PreconditionError("Form::monomial: bad symbol");
    const int e = append_sign(m, s);
    if (e == 0) return w;
    sign *= e;
    m |= Mask{1} << s;
  }
  w.add(m, cd(sign) * coef);
  return w;
}

void Form::add(Mask basis, const ComplexPolynomial& coef) {
  if (coef.nvars() != 4 * n_) throw PreconditionError("Form: coefficient has wrong variable count");
  if (coef.empty()) return;
  auto [it, inserted] = terms_.try_emplace(basis, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.empty()) terms_.erase(it);
  }
}

bool Form::is_pure() const {
  if (terms_.empty()) return true;
  const auto t = type_of(n_, terms_.begin()->first);
  for (const auto& [m, c] : terms_)
    if (type_of(n_, m) != t) return false;
  return true;
}

std::pair<int, int> Form::bidegree(std::pair<int, int> fallback) const {
  if (terms_.empty()) return fallback;
  if (!is_pure()) throw PreconditionError("Form: mixed bidegree");
  return type_of(n_, terms_.begin()->first);
}

Form Form::component(int p, int q) const {
  Form out(n_);
  for (const auto& [m, c] : terms_)
    if (type_of(n_, m) == std::pair{p, q}) out.add(m, c);
  return out;
}

double Form::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mask, c] : terms_) m = std::max(m, c.max_abs_coeff());
  return m;
}

std::complex<double> Form::evaluate(std::span<const double> point,
                                    std::span<const std::vector<double>> vectors) const {
  const int k = static_cast<int>(vectors.size());
  cd total = 0.0;
  for (const auto& [mask, coef] : terms_) {
    const auto s = symbols_of(mask);
    if (static_cast<int>(s.size()) != k) throw PreconditionError("Form::evaluate: degree mismatch");
    // determinant of covector_value(s_i, v_j) by permutation expansion
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    cd det = 0.0;
    do {
      int inversions = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
          if (perm[i] > perm[j]) ++inversions;
      cd prod = (inversions % 2) ? -1.0 : 1.0;
      for (int i = 0; i < k; ++i) prod *= covector_value(n_, s[i], vectors[perm[i]]);
      det += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += coef(point) * det;
  }
  return total;
}

Form Form::at(std::span<const double> point) const {
  Form out(n_);
  for (const auto& [m, c] : terms_) out.add(m, ComplexPolynomial::constant(4 * n_, c(point)));
  return out;
}

Form& Form::operator+=(const Form& o) {
  if (o.n_ != n_) throw PreconditionError("Form: dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (o.n_ != n_) throw PreconditionError("Form: dimension mismatch");
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

Form operator*(std::complex<double> c, const Form& f) {
  Form out(f.n());
  for (const auto& [m, p] : f.terms()) out.add(m, c * p);
  return out;
}

Form conj(const Form& f) {
  const int n = f.n();
  Form out(n);
  for (const auto& [mask, coef] : f.terms()) {
    Mask m = 0;
    int sign = 1;
    for (int s : symbols_of(mask)) {
      const int t = s < 2 * n ? s + 2 * n : s - 2 * n;
      sign *= append_sign(m, t);
      m |= Mask{1} << t;
    }
    out.add(m, cd(sign) * coef.map_coefficients<cd>([](const cd& c) { return std::conj(c); }));
  }
  return out;
}

Form wedge(const Form& a, const Form& b) {
  if (a.n() != b.n()) throw PreconditionError("wedge: dimension mismatch");
  Form out(a.n());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s != 0) out.add(ma | mb, cd(s) * (ca * cb));
    }
  return out;
}

namespace {

Form exterior(const Form& f, bool bar) {
  const int n = f.n();
  Form out(n);
  for (const auto& [mask, coef] : f.terms())
    for (int a = 0; a < 2 * n; ++a) {
      const int s = bar ? 2 * n + a : a;
      if (mask & (Mask{1} << s)) continue;
      // d(coef) ^ basis: the new covector goes in front
      const int sign = parity(mask & ((Mask{1} << s) - 1)) ? -1 : 1;
      const ComplexPolynomial d = complex_partial(coef, a, bar);
      if (!d.empty()) out.add(mask | (Mask{1} << s), cd(sign) * d);
    }
  return out;
}

}  // namespace

Form del(const Form& f) { return exterior(f, false); }
Form delbar(const Form& f) { return exterior(f, true); }

Form J_act(const Form& f, JTable table) {
  const int n = f.n();
  Form out(n);
  for (const auto& [mask, coef] : f.terms()) {
    Mask m = 0;
    int sign = 1;
    for (int s : symbols_of(mask)) {
      const bool bar = s >= 2 * n;
      const int a = bar ? s - 2 * n : s;
      const int partner = (a % 2 == 0) ? a + 1 : a - 1;
      sign *= (a % 2 == 0) ? table.c1 : table.c2;
      const int t = bar ? partner : 2 * n + partner;
      const int e = append_sign(m, t);
      sign *= e;
      m |= Mask{1} << t;
    }
    if (sign != 0) out.add(m, cd(sign) * coef);
  }
  return out;
}

Form J_inverse(const Form& f, JTable table) {
  Form out(f.n());
  for (const auto& [mask, coef] : f.terms()) {
    Form single(f.n());
    single.add(mask, coef);
    const double s = (std::popcount(mask) % 2) ? -1.0 : 1.0;
    out += cd(s) * J_act(single, table);
  }
  return out;
}

Form del_J(const Form& f, JTable table) { return J_inverse(delbar(J_act(f, table)), table); }

Form ddj(const RealPolynomial& f, JTable table) { return del(del_J(Form::function(f), table)); }

double reality_defect(const Form& w, JTable table) {
  return (conj(J_act(w, table)) - w).max_abs_coeff();
}

bool is_real_form(const Form& w, JTable table, double tol) {
  return reality_defect(w, table) <= tol * std::max(1.0, w.max_abs_coeff());
}

Eigen::MatrixXd right_unit_matrix(int n, int unit) { return right_scalar_matrix(n, Quaternion::unit(unit)); }

bool is_nonneg(const Form& w, std::span<const std::vector<double>> points,
               std::span<const std::vector<double>> vectors, double tol) {
  const int n = w.n();
  const Eigen::MatrixXd rj = right_unit_matrix(n, 2);
  for (const auto& p : points)
    for (const auto& y : vectors) {
      const Eigen::VectorXd yj = rj * Eigen::Map<const Eigen::VectorXd>(y.data(), 4 * n);
      const std::vector<std::vector<double>> pair{y, std::vector<double>(yj.data(), yj.data() + 4 * n)};
      if (w.evaluate(p, pair).real() < -tol) return false;
    }
  return true;
}

TMapResult t_map(const Form& eta, std::span<const double> point, JTable) {
  const int n = eta.n(), d = 4 * n;
  const auto b = j_pairing(eta.at(point));
  Eigen::MatrixXd s(d, d);
  double scale = 0.0, asym = 0.0;
  const std::vector<double> origin(d, 0.0);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const cd bpq = b[p][q](origin), bqp = b[q][p](origin);
      scale = std::max(scale, std::abs(bpq));
      // real part symmetric, imaginary part antisymmetric
      asym = std::max({asym, std::fabs(bpq.real() - bqp.real()), std::fabs(bpq.imag() + bqp.imag())});
      s(p, q) = 0.5 * (bpq.real() + bqp.real());
    }
  double residual = 0.0;
  TMapResult r{from_real_form(s, &residual), 0.0};
  asym = std::max(asym, residual);
  r.asymmetry = scale > 0.0 ? asym / scale : asym;
  if (r.asymmetry > 1e-9)
    throw NumericalError("t_map: eta(A, A j) is not a hyperhermitian form; J table inconsistent");
  return r;
}

Form hkt_omega(const RealPolynomial& f, JTable table) {
  const Form eta = ddj(f, table);
  const int n = eta.n(), d = 4 * n;
  const auto b = j_pairing(eta);
  // g(X, Y) = sum X_p S_pq Y_q with S the symmetric part of B
  std::vector<std::vector<ComplexPolynomial>> g(d, std::vector<ComplexPolynomial>(d, ComplexPolynomial(d)));
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) g[p][q] = cd(0.5) * (b[p][q] + b[q][p]);
  const Eigen::MatrixXd rj = right_unit_matrix(n, 2), rk = right_unit_matrix(n, 3);
  std::vector<std::vector<ComplexPolynomial>> omega(d, std::vector<ComplexPolynomial>(d, ComplexPolynomial(d)));
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int r = 0; r < d; ++r) {
        // omega_L(e_p, e_q) = g(e_p L, e_q), column p of rL is e_p L
        if (rj(r, p) != 0.0) omega[p][q] += cd(rj(r, p)) * g[r][q];
        if (rk(r, p) != 0.0) omega[p][q] += cd(0.0, -rk(r, p)) * g[r][q];
      }
  return real_two_form(n, omega);
}

HktReport hkt_flat_check(const RealPolynomial& f, std::span<const std::vector<double>> samples,
                         JTable table) {
  HktReport rep;
  const Form eta = ddj(f, table);
  rep.metric_positive = true;
  for (const auto& p : samples)
    if (!is_positive_definite(t_map(eta, p, table).g)) rep.metric_positive = false;
  const Form omega = hkt_omega(f, table);
  const double scale = std::max(1.0, omega.max_abs_coeff());
  rep.omega_is_20 = (omega - omega.component(2, 0)).max_abs_coeff() <= 1e-12 * scale;
  rep.max_d_omega = del(omega).max_abs_coeff();
  rep.d_omega_zero = rep.max_d_omega <= 1e-12 * scale;
  return rep;
}

std::vector<JTableCheck> j_table_checks(std::span<const RealPolynomial> potentials,
                                        std::span<const std::vector<double>> points) {
  std::vector<JTableCheck> out;
  for (int c1 : {-1, 1})
    for (int c2 : {-1, 1}) {
      JTableCheck chk;
      chk.table = {c1, c2};
      const int n = potentials.empty() ? 1 : potentials[0].nvars() / 4;
      chk.involution = true;
      for (int s = 0; s < 4 * n; ++s) {
        const int sym[1] = {s};
        const Form e = Form::monomial(n, sym, ComplexPolynomial::constant(4 * n, 1.0));
        if (!(J_act(J_act(e, chk.table), chk.table) + e).is_zero()) chk.involution = false;
      }
      chk.reality = true;
      for (const auto& f : potentials) {
        const Form eta = ddj(f, chk.table);
        if (!is_real_form(eta, chk.table)) chk.reality = false;
        const ScalarField field = ScalarField::polynomial(f);
        for (const auto& p : points) {
          try {
            const HMatrix g = t_map(eta, p, chk.table).g;
            const HMatrix h = hessian(field, p);
            const double scale = std::max(1.0, h.max_abs());
            chk.quarter_deviation = std::max(
                chk.quarter_deviation, max_abs_diff(g.matrix(), 0.25 * h.matrix()) / scale);
          } catch (const NumericalError&) {
            chk.quarter_deviation = std::numeric_limits<double>::infinity();
          }
        }
      }
      out.push_back(chk);
    }
  return out;
}

}  // namespace qpsh
