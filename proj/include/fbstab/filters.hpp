#pragma once

#include <string>
#include <string_view>

#include "fbstab/seq.hpp"

namespace fbstab {

/// Tolerance for the low-pass / high-pass axioms on a filter pair.
inline constexpr double kLowpassTolerance = 1e-9;

/// Remainder thresholds used by factor(): at most kDivisibleTolerance counts
/// as an exact zero, at least kNotDivisibleTolerance as a genuine remainder.
/// Anything in between is reported instead of guessed.
inline constexpr double kDivisibleTolerance = 1e-9;
inline constexpr double kNotDivisibleTolerance = 1e-6;

/// h^(xi) = sqrt(2) ((1 + e^{-2 pi i xi}) / 2)^n p^(xi) with p^(0) = 1.
struct FactoredLowpass {
  int n = 1;
  FiniteSeq p = FiniteSeq::delta(0);
};

/// Throws InvalidArgument unless n >= 1 and |p^(0) - 1| < 1e-10.
void validate(const FactoredLowpass& f);

/// Throws AxiomViolation unless h^(0) = sqrt(2) and h^(1/2) = 0 within tol.
void check_lowpass(const FiniteSeq& h, double tol = kLowpassTolerance);

/// Throws AxiomViolation unless g^(0) = 0 within tol.
void check_highpass(const FiniteSeq& g, double tol = kLowpassTolerance);

/// A validated (low-pass, high-pass) pair.
class FilterPair {
 public:
  /// Checks the axioms and throws AxiomViolation on failure.
  static FilterPair make(FiniteSeq h, FiniteSeq g, double tol = kLowpassTolerance);

  const FiniteSeq& h() const noexcept { return h_; }
  const FiniteSeq& g() const noexcept { return g_; }

  /// True when both filters have real coefficients.
  bool is_real() const noexcept { return h_.is_real() && g_.is_real(); }

 private:
  FilterPair(FiniteSeq h, FiniteSeq g) : h_(std::move(h)), g_(std::move(g)) {}
  FiniteSeq h_;
  FiniteSeq g_;
};

/// (delta_0 + delta_1) / sqrt(2).
FiniteSeq haar();

/// Five-tap symmetric family on -2..2 with centre tap sqrt(2) a.
FiniteSeq burt_adelson(double a);

/// The same filter as burt_adelson(a), in factored form (n = 2).
FactoredLowpass burt_adelson_factored(double a);

/// n = 3, p = -a delta_{-1} + (1 + 2a) delta_0 - a delta_1.
FactoredLowpass higher_order(double a);

/// g(k) = (-1)^{k-1} conj(h(1-k)), so g^(xi) = e^{-2 pi i xi} conj(h^(xi + 1/2)).
/// Only real low-pass filters are accepted.
FiniteSeq orthogonal_highpass(const FiniteSeq& h);

/// FilterPair::make(h, orthogonal_highpass(h)).
FilterPair orthogonal_pair(const FiniteSeq& h);

/// sqrt(2) b^{*n} * p with b = (delta_0 + delta_1) / 2.
FiniteSeq assemble(const FactoredLowpass& f);

/// Inverse of assemble up to an integer shift. The cosine order n is the
/// number of exact divisions by b; p is re-centred so its support is as
/// symmetric about 0 as possible.
FactoredLowpass factor(const FiniteSeq& h);

enum class Family { kBurtAdelson, kHigherOrder };

/// "burt-adelson" or "higher-order"; throws InvalidArgument otherwise.
Family parse_family(std::string_view name);
std::string_view family_name(Family f) noexcept;

FactoredLowpass family_factored(Family f, double a);
FiniteSeq family_lowpass(Family f, double a);

/// family_factored on the closed range a >= 0. Both families remain valid
/// low-pass filters at a = 0, which parameter sweeps may start from.
FactoredLowpass family_factored_closed(Family f, double a);

}  // namespace fbstab
