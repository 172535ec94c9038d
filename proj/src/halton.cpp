#include "qpsh/halton.hpp"

#include <cmath>
#include <numeric>

#include "qpsh/errors.hpp"
#include "qpsh/sampling.hpp"

namespace qpsh {

namespace {

std::vector<int> first_primes(int count) {
  std::vector<int> p;
  for (int c = 2; static_cast<int>(p.size()) < count; ++c) {
    bool prime = true;
    for (int q : p) {
      if (q * q > c) break;
      if (c % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) p.push_back(c);
  }
  return p;
}

}  // namespace

Halton::Halton(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("Halton: dimension out of range");
  bases_ = first_primes(dim);
  for (int b : bases_) digits_.push_back(static_cast<int>(std::ceil(53.0 * std::log(2.0) / std::log(b))));
}

Halton::Halton(int dim, std::uint64_t scramble_seed) : Halton(dim) {
  Rng rng(scramble_seed);
  perms_.resize(dim);
  for (int d = 0; d < dim; ++d) {
    const int b = bases_[d];
    auto& p = perms_[d];
    p.resize(static_cast<std::size_t>(digits_[d]) * b);
    for (int pos = 0; pos < digits_[d]; ++pos) {
      int* block = p.data() + static_cast<std::size_t>(pos) * b;
      std::iota(block, block + b, 0);
      // Fisher-Yates with the portable integer draw
      for (int i = b - 1; i > 0; --i) std::swap(block[i], block[rng.integer(0, i)]);
    }
  }
}

void Halton::point(std::uint64_t index, double* out) const {
  for (int d = 0; d < dim_; ++d) {
    const int b = bases_[d];
    const double inv = 1.0 / b;
    double scale = inv, x = 0.0;
    std::uint64_t k = index;
    for (int pos = 0; pos < digits_[d]; ++pos) {
      int digit = static_cast<int>(k % b);
      k /= b;
      if (!perms_.empty()) digit = perms_[d][static_cast<std::size_t>(pos) * b + digit];
      else if (k == 0 && digit == 0) break;
      x += digit * scale;
      scale *= inv;
    }
    out[d] = x < 1.0 ? x : std::nextafter(1.0, 0.0);
  }
}

std::vector<double> Halton::point(std::uint64_t index) const {
  std::vector<double> p(dim_);
  point(index, p.data());
  return p;
}

}  // namespace qpsh
