#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

namespace thinsw {

using cplx = std::complex<double>;

namespace detail {

/// FFTW planning is not thread-safe; plans are created once under a lock and
/// executed through the new-array interface afterwards. FFTW_ESTIMATE keeps
/// planning free of timing measurements, so results are reproducible.
class FftPlanCache {
 public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan get(int dim, int n, bool forward) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dim, n, forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second.get();
    const std::size_t real_size = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
    const std::size_t cplx_size = dim == 1 ? std::size_t(n / 2 + 1) : std::size_t(n) * (n / 2 + 1);
    std::vector<double> r(real_size);
    std::vector<cplx> c(cplx_size);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (dim == 1)
      plan = forward ? fftw_plan_dft_r2c_1d(n, r.data(), cp, flags)
                     : fftw_plan_dft_c2r_1d(n, cp, r.data(), flags);
    else
      plan = forward ? fftw_plan_dft_r2c_2d(n, n, r.data(), cp, flags)
                     : fftw_plan_dft_c2r_2d(n, n, cp, r.data(), flags);
    auto [it, _] = plans_.emplace(key, PlanPtr(plan));
    return it->second.get();
  }

 private:
  struct PlanDeleter {
    void operator()(fftw_plan p) const {
      if (p) fftw_destroy_plan(p);
    }
  };
  using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;
  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, PlanPtr> plans_;
};

}  // namespace detail

/// Real-to-half-complex transform normalized so that
/// f(x) = sum_k c_k exp(i k.x) over the full (conjugate-symmetric) spectrum.
inline std::vector<cplx> forward_transform(int dim, int n, std::span<const double> values) {
  const std::size_t cplx_size = dim == 1 ? std::size_t(n / 2 + 1) : std::size_t(n) * (n / 2 + 1);
  std::vector<double> in(values.begin(), values.end());
  std::vector<cplx> out(cplx_size);
  fftw_execute_dft_r2c(detail::FftPlanCache::instance().get(dim, n, true), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& c : out) c *= scale;
  return out;
}

inline std::vector<double> inverse_transform(int dim, int n, std::span<const cplx> coef) {
  std::vector<cplx> in(coef.begin(), coef.end());  // c2r destroys its input
  std::vector<double> out(dim == 1 ? std::size_t(n) : std::size_t(n) * n);
  fftw_execute_dft_c2r(detail::FftPlanCache::instance().get(dim, n, false),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
  return out;
}

}  // namespace thinsw
