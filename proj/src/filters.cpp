#include "fbstab/filters.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fbstab {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// h^(0) and h^(1/2) as exact coefficient sums.
cplx value_at_zero(const FiniteSeq& h) {
  cplx acc = 0.0;
  for (const auto& c : h.coeffs()) acc += c;
  return acc;
}

cplx value_at_half(const FiniteSeq& h) {
  cplx acc = 0.0;
  for (std::int64_t n = h.first(); !h.is_zero() && n <= h.last(); ++n) {
    acc += (n % 2 == 0) ? h[n] : -h[n];
  }
  return acc;
}

void require_positive(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("family parameter a must be positive, got " + std::to_string(a));
  }
}

// One synthetic division by b = (delta_0 + delta_1) / 2. Returns the quotient
// and writes |remainder|.
FiniteSeq divide_by_cosine_factor(const FiniteSeq& h, double& remainder) {
  const auto c = h.coeffs();
  if (c.size() < 2) {
    remainder = c.empty() ? 0.0 : std::abs(c[0]);
    return {};
  }
  std::vector<cplx> q(c.size() - 1);
  q[0] = 2.0 * c[0];
  for (std::size_t k = 1; k + 1 < c.size(); ++k) q[k] = 2.0 * c[k] - q[k - 1];
  remainder = std::abs(c.back() - 0.5 * q.back());
  return FiniteSeq(h.offset(), std::move(q));
}

}  // namespace

void validate(const FactoredLowpass& f) {
  if (f.n < 1) throw InvalidArgument("cosine-factor order n must be >= 1");
  const double dev = std::abs(value_at_zero(f.p) - 1.0);
  if (!(dev < 1e-10)) {
    throw InvalidArgument("p^(0) must equal 1 (deviation " + std::to_string(dev) + ")");
  }
}

void check_lowpass(const FiniteSeq& h, double tol) {
  const double at0 = std::abs(value_at_zero(h) - kSqrt2);
  if (!(at0 < tol)) throw AxiomViolation("h^(0) = sqrt(2)", at0, tol);
  const double at_half = std::abs(value_at_half(h));
  if (!(at_half < tol)) throw AxiomViolation("h^(1/2) = 0", at_half, tol);
}

void check_highpass(const FiniteSeq& g, double tol) {
  const double at0 = std::abs(value_at_zero(g));
  if (!(at0 < tol)) throw AxiomViolation("g^(0) = 0", at0, tol);
}

FilterPair FilterPair::make(FiniteSeq h, FiniteSeq g, double tol) {
  check_lowpass(h, tol);
  check_highpass(g, tol);
  return FilterPair(std::move(h), std::move(g));
}

FiniteSeq haar() { return FiniteSeq::from_real(0, {1.0 / kSqrt2, 1.0 / kSqrt2}); }

FiniteSeq burt_adelson(double a) {
  require_positive(a);
  const double outer = kSqrt2 * (0.25 - 0.5 * a);
  const double inner = kSqrt2 * 0.25;
  FiniteSeq h = FiniteSeq::from_real(-2, {outer, inner, kSqrt2 * a, inner, outer});
  check_lowpass(h);
  return h;
}

FactoredLowpass burt_adelson_factored(double a) {
  require_positive(a);
  return family_factored_closed(Family::kBurtAdelson, a);
}

FactoredLowpass higher_order(double a) {
  require_positive(a);
  return family_factored_closed(Family::kHigherOrder, a);
}

FactoredLowpass family_factored_closed(Family family, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw InvalidArgument("family parameter a must be >= 0, got " + std::to_string(a));
  }
  FactoredLowpass f =
      family == Family::kBurtAdelson
          ? FactoredLowpass{2, FiniteSeq::from_real(-1, {1.0 - 2.0 * a, 4.0 * a - 1.0, 1.0 - 2.0 * a})}
          : FactoredLowpass{3, FiniteSeq::from_real(-1, {-a, 1.0 + 2.0 * a, -a})};
  validate(f);
  return f;
}

FiniteSeq orthogonal_highpass(const FiniteSeq& h) {
  check_lowpass(h);
  if (!h.is_real(kTrimTolerance)) {
    throw InvalidArgument("orthogonal high-pass is only defined here for real low-pass filters");
  }
  // g(k) = (-1)^{k-1} conj(h(1-k)); k runs over 1 - last .. 1 - first.
  const std::int64_t lo = 1 - h.last();
  std::vector<cplx> out(h.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    const std::int64_t k = lo + static_cast<std::int64_t>(t);
    const double sign = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
    out[t] = sign * std::conj(h[1 - k]);
  }
  return FiniteSeq(lo, std::move(out));
}

FilterPair orthogonal_pair(const FiniteSeq& h) {
  return FilterPair::make(h, orthogonal_highpass(h));
}

FiniteSeq assemble(const FactoredLowpass& f) {
  validate(f);
  const FiniteSeq b = FiniteSeq::from_real(0, {0.5, 0.5});
  FiniteSeq h = f.p.scaled(kSqrt2);
  for (int i = 0; i < f.n; ++i) h = convolve(h, b);
  check_lowpass(h);
  return h;
}

FactoredLowpass factor(const FiniteSeq& h) {
  check_lowpass(h);
  FiniteSeq rest = h;
  int n = 0;
  while (rest.size() >= 2) {
    double remainder = 0.0;
    FiniteSeq quotient = divide_by_cosine_factor(rest, remainder);
    if (remainder <= kDivisibleTolerance) {
      rest = std::move(quotient);
      ++n;
      continue;
    }
    if (remainder < kNotDivisibleTolerance) {
      throw Error("cannot decide the cosine-factor order: division remainder " +
                  std::to_string(remainder) + " is between " +
                  std::to_string(kDivisibleTolerance) + " and " +
                  std::to_string(kNotDivisibleTolerance));
    }
    break;
  }
  // check_lowpass guarantees a zero at 1/2, so at least one division succeeds.
  if (n == 0) throw AxiomViolation("h^(1/2) = 0", std::abs(value_at_half(h)), kDivisibleTolerance);
  const auto width = static_cast<std::int64_t>(rest.size()) - 1;
  FiniteSeq p = translate(rest.scaled(1.0 / kSqrt2), -width / 2 - rest.offset());
  FactoredLowpass f{n, std::move(p)};
  validate(f);
  return f;
}

Family parse_family(std::string_view name) {
  if (name == "burt-adelson") return Family::kBurtAdelson;
  if (name == "higher-order") return Family::kHigherOrder;
  throw InvalidArgument("unknown filter family '" + std::string(name) +
                        "' (expected burt-adelson or higher-order)");
}

std::string_view family_name(Family f) noexcept {
  return f == Family::kBurtAdelson ? "burt-adelson" : "higher-order";
}

FactoredLowpass family_factored(Family f, double a) {
  return f == Family::kBurtAdelson ? burt_adelson_factored(a) : higher_order(a);
}

FiniteSeq family_lowpass(Family f, double a) {
  return f == Family::kBurtAdelson ? burt_adelson(a) : assemble(higher_order(a));
}

}  // namespace fbstab
