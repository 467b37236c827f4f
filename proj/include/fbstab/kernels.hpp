#pragma once

// Data-parallel grid kernels. Every kernel has a scalar reference version and
// (on x86-64) an AVX2 version; the active variant is selected at runtime from
// the CPU features, or forced with FBSTAB_SIMD=scalar|avx2.
//
// Complex data is passed split (separate real and imaginary arrays) so the
// vector variants can load four lanes at once.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "fbstab/seq.hpp"

namespace fbstab::kernels {

enum class Backend { kScalar, kAvx2 };

std::string_view backend_name(Backend b) noexcept;
bool backend_available(Backend b) noexcept;

/// Backend used by the library-level operations.
Backend active_backend() noexcept;

/// Throws InvalidArgument when `b` is not available on this CPU/build.
void set_active_backend(Backend b);

/// Restores the previous backend on scope exit.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend b) : previous_(active_backend()) { set_active_backend(b); }
  ~ScopedBackend() { set_active_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

/// cos / sin of 2 pi k / size for k = 0..size-1.
struct TwiddleTable {
  std::size_t size = 0;
  std::vector<double> cos;
  std::vector<double> sin;
};

/// Shared, cached twiddle table for a given size (thread-safe).
std::shared_ptr<const TwiddleTable> twiddles(std::size_t size);

struct SplitComplex {
  std::vector<double> re;
  std::vector<double> im;

  SplitComplex() = default;
  explicit SplitComplex(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  std::size_t size() const noexcept { return re.size(); }
  cplx at(std::size_t m) const noexcept { return {re[m], im[m]}; }
  std::vector<cplx> to_complex() const;
  static SplitComplex from_complex(std::span<const cplx> values);
};

struct KernelTable {
  /// out[m] = sum_t c[t] exp(-2 pi i (offset + t) m / M) for m = 0..M-1,
  /// where M = tw.size.
  void (*trig_eval)(const double* c_re, const double* c_im, std::size_t taps,
                    std::int64_t offset, const TwiddleTable& tw, double* out_re,
                    double* out_im);

  /// acc[m] *= src[(factor * m) mod M] for m = 0..M-1.
  void (*dilated_mul)(const double* src_re, const double* src_im, std::size_t M,
                      std::uint64_t factor, double* acc_re, double* acc_im);

  /// out[m] = |z[m]|^2 + |z[(m + M/2) mod M]|^2, M even.
  void (*half_shift_energy)(const double* re, const double* im, std::size_t M, double* out);

  /// Eigenvalues of A(m)^* A(m) with A(m) = (1/sqrt 2) [[g_m, h_m], [g_m', h_m']]
  /// where ' denotes the index shifted by M/2 (M even).
  void (*pair_eigs)(const double* g_re, const double* g_im, const double* h_re,
                    const double* h_im, std::size_t M, double* lambda_min, double* lambda_max);

  /// max_m |z[m]|^2.
  double (*max_abs2)(const double* re, const double* im, std::size_t M);
};

const KernelTable& table(Backend b);
inline const KernelTable& active() { return table(active_backend()); }

/// Evaluates the trigonometric polynomial of `x` on a grid of size M.
SplitComplex eval_on_grid(const FiniteSeq& x, std::size_t M);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(FBSTAB_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace fbstab::kernels
