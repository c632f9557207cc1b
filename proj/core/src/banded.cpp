#include "nlsgs/banded.hpp"

#include <algorithm>
#include <cmath>

#include "nlsgs/errors.hpp"

namespace nlsgs {

SymmetricBand::SymmetricBand(std::size_t n, std::size_t bandwidth)
    : n_(n), p_(bandwidth), data_(n * (bandwidth + 1), 0.0) {}

double& SymmetricBand::at(std::size_t i, std::size_t j) {
  if (j > i) std::swap(i, j);
  return data_[i * (p_ + 1) + (i - j)];
}

double SymmetricBand::at(std::size_t i, std::size_t j) const {
  if (j > i) std::swap(i, j);
  if (i - j > p_) return 0.0;
  return data_[i * (p_ + 1) + (i - j)];
}

void SymmetricBand::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = &data_[i * (p_ + 1)];
    y[i] += row[0] * x[i];
    for (std::size_t k = 1; k <= p_ && k <= i; ++k) {
      y[i] += row[k] * x[i - k];
      y[i - k] += row[k] * x[i];
    }
  }
}

std::vector<double> SymmetricBand::diagonal() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = data_[i * (p_ + 1)];
  return d;
}

SymmetricBand SymmetricBand::combine(double a, const SymmetricBand& other, double b) const {
  if (other.n_ != n_ || other.p_ != p_) throw ContractViolation("band shapes differ");
  SymmetricBand out(n_, p_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = a * data_[k] + b * other.data_[k];
  return out;
}

BandLDLT::BandLDLT(const SymmetricBand& a) : n_(a.size()), p_(a.bandwidth()) {
  const std::size_t w = p_ + 1;
  l_.assign(n_ * w, 0.0);
  auto L = [&](std::size_t i, std::size_t j) -> double& { return l_[i * w + (i - j)]; };
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t k0 = j >= p_ ? j - p_ : 0;
    double d = a.at(j, j);
    for (std::size_t k = k0; k < j; ++k) {
      const double ljk = L(j, k);
      d -= ljk * ljk * L(k, k);
    }
    if (d == 0.0 || !std::isfinite(d)) throw NumericalFailure("band LDL^T: zero pivot");
    L(j, j) = d;
    if (d < 0.0) ++negative_;
    const std::size_t iend = std::min(n_ - 1, j + p_);
    for (std::size_t i = j + 1; i <= iend; ++i) {
      const std::size_t m0 = i >= p_ ? i - p_ : 0;
      double s = a.at(i, j);
      for (std::size_t k = std::max(k0, m0); k < j; ++k) s -= L(i, k) * L(j, k) * L(k, k);
      L(i, j) = s / d;
    }
  }
}

void BandLDLT::solve(std::span<const double> b, std::span<double> x) const {
  const std::size_t w = p_ + 1;
  auto L = [&](std::size_t i, std::size_t j) { return l_[i * w + (i - j)]; };
  std::copy(b.begin(), b.end(), x.begin());
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t k0 = i >= p_ ? i - p_ : 0;
    double s = x[i];
    for (std::size_t k = k0; k < i; ++k) s -= L(i, k) * x[k];
    x[i] = s;
  }
  for (std::size_t i = 0; i < n_; ++i) x[i] /= L(i, i);
  for (std::size_t ii = n_; ii-- > 0;) {
    const std::size_t iend = std::min(n_ - 1, ii + p_);
    double s = x[ii];
    for (std::size_t k = ii + 1; k <= iend; ++k) s -= L(k, ii) * x[k];
    x[ii] = s;
  }
}

}  // namespace nlsgs
