#include "adasketch/flops.hpp"

namespace adasketch::flops {

namespace {
thread_local std::uint64_t t_total = 0;
}

void add(std::uint64_t n) noexcept { t_total += n; }

std::uint64_t thread_total() noexcept { return t_total; }

}  // namespace adasketch::flops
