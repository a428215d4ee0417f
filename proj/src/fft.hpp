#pragma once

#include <complex>
#include <memory>

namespace weylkit::detail {

/// In-place complex DFT on an n^rank row-major grid. Plans are created once
/// (creation is serialized); execution is reentrant.
class FftPlan {
 public:
  FftPlan(int rank, int n);

  /// rank 0 plans are identities.
  void forward(std::complex<double>* data) const;
  /// Unnormalized inverse.
  void backward(std::complex<double>* data) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace weylkit::detail
