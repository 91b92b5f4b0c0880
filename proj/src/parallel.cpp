#include "srip/parallel.hpp"

namespace srip {

namespace {
std::atomic<unsigned> g_thread_limit{0};
}

void set_thread_limit(unsigned n) noexcept { g_thread_limit.store(n); }

unsigned thread_limit() noexcept {
  const unsigned n = g_thread_limit.load();
  if (n != 0) return n;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace srip
