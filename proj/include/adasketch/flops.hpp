#pragma once

#include <cstdint>

// Flop accounting. One multiply-add counts as one flop. Every kernel in
// kernels.hpp charges the calling thread's counter; a solve runs on a single
// thread, so a FlopScope around it measures exactly that solve.

namespace adasketch::flops {

void add(std::uint64_t n) noexcept;

/// Running total for the calling thread.
std::uint64_t thread_total() noexcept;

class FlopScope {
 public:
  FlopScope() noexcept : start_(thread_total()) {}
  std::uint64_t count() const noexcept { return thread_total() - start_; }

 private:
  std::uint64_t start_;
};

}  // namespace adasketch::flops
