#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fwdreg/kernels.hpp"

namespace fwdreg::kernels {
namespace {

const KernelTable* detect() noexcept {
  if (const char* env = std::getenv("FWDREG_KERNELS"); env && std::string_view(env) == "scalar") {
    return &scalar_table();
  }
  if (const auto* t = avx2_table()) return t;
  if (const auto* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool select(Backend backend) noexcept {
  const KernelTable* table = nullptr;
  switch (backend) {
    case Backend::scalar: table = &scalar_table(); break;
    case Backend::avx2: table = avx2_table(); break;
    case Backend::neon: table = neon_table(); break;
  }
  if (!table) return false;
  slot().store(table, std::memory_order_release);
  return true;
}

std::string_view backend_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

}  // namespace fwdreg::kernels
