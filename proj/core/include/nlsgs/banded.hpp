#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlsgs {

/// Symmetric band matrix stored by lower diagonals: entry (i, i-k) for k = 0..bandwidth.
class SymmetricBand {
 public:
  SymmetricBand() = default;
  SymmetricBand(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return p_; }

  /// Entry (i, j) with |i - j| <= bandwidth; symmetric access.
  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;
  void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

  /// a*this + b*other (same shape).
  SymmetricBand combine(double a, const SymmetricBand& other, double b) const;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<double> data_;  // row-major, (p+1) per row, data_[i*(p+1)+k] = A(i, i-k)
};

/// LDL^T factorization without pivoting. Works for SPD matrices and, when it does not
/// break down, counts negative pivots (Sylvester inertia) for indefinite ones.
class BandLDLT {
 public:
  explicit BandLDLT(const SymmetricBand& a);

  void solve(std::span<const double> b, std::span<double> x) const;
  std::size_t negative_pivots() const { return negative_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> l_;  // same layout as SymmetricBand; diagonal slot holds D
  std::size_t negative_ = 0;
};

}  // namespace nlsgs
