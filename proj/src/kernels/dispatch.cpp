#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "fbstab/kernels.hpp"

namespace fbstab::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(FBSTAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* forced = std::getenv("FBSTAB_SIMD")) {
    const std::string name(forced);
    if (name == "scalar") return Backend::kScalar;
    if (name == "avx2" && cpu_has_avx2()) return Backend::kAvx2;
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) noexcept {
  return b == Backend::kScalar || (b == Backend::kAvx2 && cpu_has_avx2());
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void set_active_backend(Backend b) {
  if (!backend_available(b)) {
    throw InvalidArgument("kernel backend '" + std::string(backend_name(b)) +
                          "' is not available on this machine");
  }
  current().store(b, std::memory_order_relaxed);
}

const KernelTable& table(Backend b) {
#if defined(FBSTAB_HAVE_AVX2)
  if (b == Backend::kAvx2) {
    if (!cpu_has_avx2()) throw InvalidArgument("AVX2 kernels requested on a CPU without AVX2");
    return detail::kAvx2Table;
  }
#endif
  if (b != Backend::kScalar) throw InvalidArgument("kernel backend not compiled in");
  return detail::kScalarTable;
}

std::shared_ptr<const TwiddleTable> twiddles(std::size_t size) {
  if (size == 0) throw InvalidArgument("twiddle table size must be positive");
  static std::mutex mutex;
  // Small tables stay resident; large ones live only while someone holds them.
  constexpr std::size_t kResidentLimit = std::size_t{1} << 20;
  static std::map<std::size_t, std::shared_ptr<const TwiddleTable>> resident;
  static std::map<std::size_t, std::weak_ptr<const TwiddleTable>> transient;
  std::lock_guard lock(mutex);
  if (auto it = resident.find(size); it != resident.end()) return it->second;
  if (auto it = transient.find(size); it != transient.end()) {
    if (auto live = it->second.lock()) return live;
  }
  auto table = std::make_shared<TwiddleTable>();
  table->size = size;
  table->cos.resize(size);
  table->sin.resize(size);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) {
    const double angle = step * static_cast<double>(k);
    table->cos[k] = std::cos(angle);
    table->sin[k] = std::sin(angle);
  }
  // Exact values at the quarter points keep symmetric filters exactly real.
  table->cos[0] = 1.0;
  table->sin[0] = 0.0;
  if (size % 2 == 0) {
    table->cos[size / 2] = -1.0;
    table->sin[size / 2] = 0.0;
  }
  if (size % 4 == 0) {
    table->cos[size / 4] = 0.0;
    table->sin[size / 4] = 1.0;
    table->cos[3 * size / 4] = 0.0;
    table->sin[3 * size / 4] = -1.0;
  }
  if (size <= kResidentLimit) {
    resident[size] = table;
  } else {
    transient[size] = table;
  }
  return table;
}

std::vector<cplx> SplitComplex::to_complex() const {
  std::vector<cplx> out(size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = {re[m], im[m]};
  return out;
}

SplitComplex SplitComplex::from_complex(std::span<const cplx> values) {
  SplitComplex out(values.size());
  for (std::size_t m = 0; m < values.size(); ++m) {
    out.re[m] = values[m].real();
    out.im[m] = values[m].imag();
  }
  return out;
}

SplitComplex eval_on_grid(const FiniteSeq& x, std::size_t M) {
  SplitComplex out(M);
  if (x.is_zero()) return out;
  const auto tw = twiddles(M);
  const SplitComplex c = SplitComplex::from_complex(x.coeffs());
  active().trig_eval(c.re.data(), c.im.data(), c.size(), x.offset(), *tw, out.re.data(),
                     out.im.data());
  return out;
}

}  // namespace fbstab::kernels
