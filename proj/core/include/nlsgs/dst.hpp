#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlsgs {

/// Type-I discrete sine transform on a 1D or 2D array of interior nodes (FFTW RODFT00).
/// forward: Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / (n+1)) per axis; the transform is its own
/// inverse up to the factor returned by inverse_scale(). Execution is reentrant.
class SineTransform {
 public:
  explicit SineTransform(std::vector<std::size_t> shape);
  ~SineTransform();
  SineTransform(const SineTransform&) = delete;
  SineTransform& operator=(const SineTransform&) = delete;

  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  double inverse_scale() const { return inverse_scale_; }

  /// out may alias in.
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  std::vector<std::size_t> shape_;
  std::size_t size_;
  double inverse_scale_;
  void* plan_ = nullptr;
};

}  // namespace nlsgs
