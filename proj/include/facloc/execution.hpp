#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <utility>

namespace facloc {

enum class Execution { Serial, Parallel };

enum class Status { Pass, Fail, Inconclusive };

/// Result of one enumerated instance. `Payload` is only set for non-passing
/// instances.
template <class Payload>
struct InstanceResult {
  Status status = Status::Pass;
  std::optional<Payload> payload;

  static InstanceResult pass() { return {}; }
  static InstanceResult fail(Payload p) { return {Status::Fail, std::move(p)}; }
  static InstanceResult inconclusive(Payload p) { return {Status::Inconclusive, std::move(p)}; }
};

template <class Payload>
struct ScanResult {
  Status status = Status::Pass;
  std::optional<Payload> payload;
  std::uint64_t index = 0;  // instance that produced `payload`
};

/// Runs fn(i) for i in [0, count) and merges: the lowest-index Fail wins; if
/// nothing fails, the lowest-index Inconclusive is reported. The result is the
/// same for Serial and Parallel execution and for any thread count. An
/// exception thrown by fn is rethrown after the loop (lowest index first).
template <class Payload, class Fn>
ScanResult<Payload> scan(std::uint64_t count, Execution exec, Fn&& fn) {
  ScanResult<Payload> fail{Status::Fail, std::nullopt, count};
  ScanResult<Payload> inconclusive{Status::Inconclusive, std::nullopt, count};

  if (exec == Execution::Serial) {
    for (std::uint64_t i = 0; i < count; ++i) {
      InstanceResult<Payload> r = fn(i);
      if (r.status == Status::Fail) return {Status::Fail, std::move(r.payload), i};
      if (r.status == Status::Inconclusive && i < inconclusive.index) {
        inconclusive.index = i;
        inconclusive.payload = std::move(r.payload);
      }
    }
  } else {
    std::atomic<std::uint64_t> first_fail{count};
    std::uint64_t error_index = count;
    std::exception_ptr error;
    std::mutex mu;
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto i = static_cast<std::uint64_t>(s);
      if (i > first_fail.load(std::memory_order_relaxed)) continue;
      try {
        InstanceResult<Payload> r = fn(i);
        if (r.status == Status::Pass) continue;
        std::lock_guard lock(mu);
        if (r.status == Status::Fail && i < fail.index) {
          fail.index = i;
          fail.payload = std::move(r.payload);
          first_fail.store(i, std::memory_order_relaxed);
        } else if (r.status == Status::Inconclusive && i < inconclusive.index) {
          inconclusive.index = i;
          inconclusive.payload = std::move(r.payload);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
    // An exception past the first failure would not have been reached serially.
    if (error && error_index < fail.index) std::rethrow_exception(error);
    if (fail.index < count) return fail;
  }
  if (inconclusive.index < count) return inconclusive;
  return {};
}

}  // namespace facloc
