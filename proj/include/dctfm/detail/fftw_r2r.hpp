#pragma once

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace dctfm::detail {

enum class R2rKind { redft10, redft01 };

// Plans are created once per (size, kind) and executed through the
// new-array interface, which FFTW documents as thread-safe. Only planning
// needs the lock.
class R2rPlanCache {
 public:
  R2rPlanCache() = default;
  R2rPlanCache(const R2rPlanCache&) = delete;
  R2rPlanCache& operator=(const R2rPlanCache&) = delete;

  ~R2rPlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  static R2rPlanCache& instance() {
    static R2rPlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, R2rKind kind) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<double> in(n), out(n);
    const fftw_r2r_kind fk = kind == R2rKind::redft10 ? FFTW_REDFT10 : FFTW_REDFT01;
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), fk,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, R2rKind>, fftw_plan> plans_;
};

// Unnormalised FFTW r2r transform; `out` must have the same size as `in`.
inline void execute_r2r(R2rKind kind, std::span<double> in, std::span<double> out) {
  fftw_plan plan = R2rPlanCache::instance().get(in.size(), kind);
  fftw_execute_r2r(plan, in.data(), out.data());
}

}  // namespace dctfm::detail
