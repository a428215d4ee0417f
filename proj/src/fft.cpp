#include "fft.hpp"

#include "weylkit/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace weylkit::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct FftPlan::Impl {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

FftPlan::FftPlan(int rank, int n) {
  auto impl = std::make_shared<Impl>();
  if (rank > 0) {
    std::vector<int> dims(static_cast<std::size_t>(rank), n);
    std::size_t total = 1;
    for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    impl->fwd = fftw_plan_dft(rank, dims.data(), buf, buf, FFTW_FORWARD, flags);
    impl->bwd = fftw_plan_dft(rank, dims.data(), buf, buf, FFTW_BACKWARD, flags);
    if (!impl->fwd || !impl->bwd) throw NumericError("fft: plan creation failed");
  }
  impl_ = std::move(impl);
}

void FftPlan::forward(std::complex<double>* data) const {
  if (!impl_->fwd) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(impl_->fwd, buf, buf);
}

void FftPlan::backward(std::complex<double>* data) const {
  if (!impl_->bwd) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(impl_->bwd, buf, buf);
}

}  // namespace weylkit::detail
