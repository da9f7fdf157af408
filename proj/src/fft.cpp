#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace fourq::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  fftw_plan plan = cache().get(static_cast<int>(data.size()));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  // new-array execute is thread-safe; only planning needs the lock
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace fourq::detail
