#include "nlsgs/dst.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "nlsgs/errors.hpp"

namespace nlsgs {

namespace {
// FFTW planning is not thread-safe; execution with new-array calls is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SineTransform::SineTransform(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 2) throw ContractViolation("sine transform: 1D or 2D");
  size_ = 1;
  inverse_scale_ = 1.0;
  for (auto n : shape_) {
    size_ *= n;
    inverse_scale_ /= 2.0 * static_cast<double>(n + 1);
  }
  std::vector<double> scratch(size_);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (shape_.size() == 1) {
    plan_ = fftw_plan_r2r_1d(static_cast<int>(shape_[0]), scratch.data(), scratch.data(),
                             FFTW_RODFT00, flags);
  } else {
    plan_ = fftw_plan_r2r_2d(static_cast<int>(shape_[0]), static_cast<int>(shape_[1]),
                             scratch.data(), scratch.data(), FFTW_RODFT00, FFTW_RODFT00, flags);
  }
  if (!plan_) throw InternalError("FFTW could not create a sine-transform plan");
}

SineTransform::~SineTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void SineTransform::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != size_ || out.size() != size_) throw ContractViolation("sine transform size");
  if (in.data() != out.data()) std::copy(in.begin(), in.end(), out.begin());
  fftw_execute_r2r(static_cast<fftw_plan>(plan_), out.data(), out.data());
}

}  // namespace nlsgs
