#include "trigwave/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace trigwave::fft {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, Direction dir) {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, dir);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // Planning overwrites the arrays, so plan on scratch buffers. The plan is
    // later executed through fftw_execute_dft on caller arrays, hence
    // FFTW_UNALIGNED.
    std::vector<std::complex<double>> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()),
        dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void transform(std::span<std::complex<double>> data, Direction dir) {
  if (data.empty()) return;
  fftw_plan plan = cache().get(static_cast<int>(data.size()), dir);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  // In-place execution requires an in-place plan; copy through a buffer.
  std::vector<std::complex<double>> out(data.size());
  fftw_execute_dft(plan, ptr, reinterpret_cast<fftw_complex*>(out.data()));
  std::copy(out.begin(), out.end(), data.begin());
}

}  // namespace trigwave::fft
