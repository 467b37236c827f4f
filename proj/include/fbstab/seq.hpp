#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbstab/errors.hpp"

namespace fbstab {

using cplx = std::complex<double>;

/// Coefficients with magnitude below this are dropped from either end.
inline constexpr double kTrimTolerance = 1e-14;

/// Default tolerance for coefficient-wise sequence comparison.
inline constexpr double kSeqEqualTolerance = 1e-12;

/// A finitely supported complex sequence on the integers.
///
/// Stored as an offset (index of the first coefficient) plus a trimmed
/// coefficient vector: the first and last stored entries are nonzero, or the
/// vector is empty and the offset is 0 (the canonical zero sequence).
/// Values are immutable once constructed.
class FiniteSeq {
 public:
  FiniteSeq() = default;
  FiniteSeq(std::int64_t offset, std::vector<cplx> coeffs);

  static FiniteSeq from_real(std::int64_t offset, std::span<const double> coeffs);
  static FiniteSeq from_real(std::int64_t offset, std::initializer_list<double> coeffs);
  static FiniteSeq delta(std::int64_t k, cplx value = 1.0);

  std::int64_t offset() const noexcept { return offset_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// First and last index of the support. Undefined for the zero sequence.
  std::int64_t first() const noexcept { return offset_; }
  std::int64_t last() const noexcept {
    return offset_ + static_cast<std::int64_t>(coeffs_.size()) - 1;
  }

  /// x(n); zero outside the support.
  cplx operator[](std::int64_t n) const noexcept;

  /// True when every imaginary part is at most `tol` in magnitude.
  bool is_real(double tol = 0.0) const noexcept;

  FiniteSeq scaled(cplx factor) const;

  friend FiniteSeq operator+(const FiniteSeq& a, const FiniteSeq& b);
  friend FiniteSeq operator-(const FiniteSeq& a, const FiniteSeq& b);

 private:
  std::int64_t offset_ = 0;
  std::vector<cplx> coeffs_;
};

/// max_n |a(n) - b(n)| over the union of supports.
double max_abs_diff(const FiniteSeq& a, const FiniteSeq& b);

/// Coefficient-wise equality within `tol` after index alignment.
bool approx_equal(const FiniteSeq& a, const FiniteSeq& b, double tol = kSeqEqualTolerance);

/// Equality up to an integer translation: b = T^k a for some k.
bool approx_equal_up_to_shift(const FiniteSeq& a, const FiniteSeq& b,
                              double tol = kSeqEqualTolerance);

inline bool operator==(const FiniteSeq& a, const FiniteSeq& b) { return approx_equal(a, b); }

/// Equispaced grid xi_m = m / N, m = 0..N-1, on the torus.
class Grid {
 public:
  explicit Grid(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  double point(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(size_);
  }

 private:
  std::size_t size_;
};

/// x^(xi_m) = sum_n x(n) e^{-2 pi i n m / N} by direct summation.
std::vector<cplx> dtft_eval(const FiniteSeq& x, const Grid& grid);

/// x^(xi) at a single real frequency.
cplx dtft_at(const FiniteSeq& x, double xi);

/// (x * h)(k) = sum_n h(n) x(k - n).
FiniteSeq convolve(const FiniteSeq& x, const FiniteSeq& h);

/// Involution: result(k) = conj(x(-k)).
FiniteSeq involute(const FiniteSeq& x);

/// D^j x(n) = x(2^j n).
FiniteSeq downsample(const FiniteSeq& x, int j = 1);

/// U^j x(2^j m) = x(m), zero elsewhere.
FiniteSeq upsample(const FiniteSeq& x, int j = 1);

/// T^k x(n) = x(n - k).
FiniteSeq translate(const FiniteSeq& x, std::int64_t k);

double norm_sq(const FiniteSeq& x);

/// <x, y> = sum_n x(n) conj(y(n)).
cplx inner(const FiniteSeq& x, const FiniteSeq& y);

}  // namespace fbstab
