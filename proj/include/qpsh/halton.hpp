#pragma once

#include <cstdint>
#include <vector>

namespace qpsh {

/// Halton points in [0,1)^dim with optional random digit scrambling.
///
/// Dimension d uses the d-th prime as base. With a seed, every digit
/// position of every dimension gets its own random permutation of
/// {0..b-1}; the same seed always produces the same sequence. Digits are
/// expanded until b^-D drops below 2^-53.
class Halton {
 public:
  static constexpr int kMaxDim = 32;

  explicit Halton(int dim);
  Halton(int dim, std::uint64_t scramble_seed);

  int dim() const { return dim_; }
  /// The index-th point (index >= 0) written into out[0..dim).
  void point(std::uint64_t index, double* out) const;
  std::vector<double> point(std::uint64_t index) const;

 private:
  int dim_;
  std::vector<int> bases_;
  std::vector<int> digits_;
  // perms_[d][pos * base + digit]; empty when unscrambled
  std::vector<std::vector<int>> perms_;
};

}  // namespace qpsh
