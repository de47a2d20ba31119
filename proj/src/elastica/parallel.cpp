// SPDX-License-Identifier: Apache-2.0
#include "elastica/parallel.hpp"

namespace elastica {

namespace {
std::atomic<int> thread_cap{1};
}

void set_max_threads(int n) noexcept { thread_cap.store(std::max(1, n)); }

int max_threads() noexcept { return thread_cap.load(); }

}  // namespace elastica
