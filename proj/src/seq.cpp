#include "fbstab/seq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fbstab/kernels.hpp"

namespace fbstab {

AxiomViolation::AxiomViolation(std::string axiom, double measured, double tolerance)
    : Error("filter axiom violated: " + axiom + " (measured deviation " +
            std::to_string(measured) + ", tolerance " + std::to_string(tolerance) + ")"),
      axiom_(std::move(axiom)),
      measured_(measured),
      tolerance_(tolerance) {}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t pow2(int j) {
  if (j < 0 || j > 62) throw InvalidArgument("dyadic exponent out of range: " + std::to_string(j));
  return std::int64_t{1} << j;
}

}  // namespace

FiniteSeq::FiniteSeq(std::int64_t offset, std::vector<cplx> coeffs)
    : offset_(offset), coeffs_(std::move(coeffs)) {
  auto significant = [](const cplx& c) { return std::abs(c) >= kTrimTolerance; };
  const auto head = std::find_if(coeffs_.begin(), coeffs_.end(), significant);
  if (head == coeffs_.end()) {
    coeffs_.clear();
    offset_ = 0;
    return;
  }
  const auto tail = std::find_if(coeffs_.rbegin(), coeffs_.rend(), significant).base();
  offset_ += head - coeffs_.begin();
  coeffs_.erase(tail, coeffs_.end());
  coeffs_.erase(coeffs_.begin(), head);
}

FiniteSeq FiniteSeq::from_real(std::int64_t offset, std::span<const double> coeffs) {
  return FiniteSeq(offset, std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

FiniteSeq FiniteSeq::from_real(std::int64_t offset, std::initializer_list<double> coeffs) {
  return FiniteSeq(offset, std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

FiniteSeq FiniteSeq::delta(std::int64_t k, cplx value) { return FiniteSeq(k, {value}); }

cplx FiniteSeq::operator[](std::int64_t n) const noexcept {
  if (coeffs_.empty() || n < first() || n > last()) return 0.0;
  return coeffs_[static_cast<std::size_t>(n - offset_)];
}

bool FiniteSeq::is_real(double tol) const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](const cplx& c) { return std::abs(c.imag()) <= tol; });
}

FiniteSeq FiniteSeq::scaled(cplx factor) const {
  std::vector<cplx> out(coeffs_);
  for (auto& c : out) c *= factor;
  return FiniteSeq(offset_, std::move(out));
}

namespace {

template <class Op>
FiniteSeq combine(const FiniteSeq& a, const FiniteSeq& b, Op op) {
  if (a.is_zero() && b.is_zero()) return {};
  const std::int64_t lo = a.is_zero() ? b.first() : b.is_zero() ? a.first() : std::min(a.first(), b.first());
  const std::int64_t hi = a.is_zero() ? b.last() : b.is_zero() ? a.last() : std::max(a.last(), b.last());
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t n = lo; n <= hi; ++n) out[static_cast<std::size_t>(n - lo)] = op(a[n], b[n]);
  return FiniteSeq(lo, std::move(out));
}

}  // namespace

FiniteSeq operator+(const FiniteSeq& a, const FiniteSeq& b) {
  return combine(a, b, [](cplx x, cplx y) { return x + y; });
}

FiniteSeq operator-(const FiniteSeq& a, const FiniteSeq& b) {
  return combine(a, b, [](cplx x, cplx y) { return x - y; });
}

double max_abs_diff(const FiniteSeq& a, const FiniteSeq& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  const std::int64_t lo = a.is_zero() ? b.first() : b.is_zero() ? a.first() : std::min(a.first(), b.first());
  const std::int64_t hi = a.is_zero() ? b.last() : b.is_zero() ? a.last() : std::max(a.last(), b.last());
  double worst = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
  return worst;
}

bool approx_equal(const FiniteSeq& a, const FiniteSeq& b, double tol) {
  return max_abs_diff(a, b) < tol;
}

bool approx_equal_up_to_shift(const FiniteSeq& a, const FiniteSeq& b, double tol) {
  if (a.is_zero() || b.is_zero()) return approx_equal(a, b, tol);
  // Trimming makes both representations start at a significant coefficient,
  // but a coefficient just above the trim threshold could still misalign the
  // two; try the neighbouring shifts as well.
  const std::int64_t base = b.first() - a.first();
  for (std::int64_t k : {base, base - 1, base + 1}) {
    if (approx_equal(translate(a, k), b, tol)) return true;
  }
  return false;
}

Grid::Grid(std::size_t size) : size_(size) {
  if (size < 2) throw InvalidArgument("grid size must be at least 2, got " + std::to_string(size));
}

std::vector<cplx> dtft_eval(const FiniteSeq& x, const Grid& grid) {
  return kernels::eval_on_grid(x, grid.size()).to_complex();
}

cplx dtft_at(const FiniteSeq& x, double xi) {
  cplx acc = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const auto n = static_cast<double>(x.offset() + static_cast<std::int64_t>(t));
    // Reduce n * xi mod 1 before scaling by 2 pi to keep the phase accurate.
    double phase = n * xi;
    phase -= std::floor(phase);
    acc += x.coeffs()[t] * std::polar(1.0, -2.0 * std::numbers::pi * phase);
  }
  return acc;
}

FiniteSeq convolve(const FiniteSeq& x, const FiniteSeq& h) {
  if (x.is_zero() || h.is_zero()) return {};
  const auto xc = x.coeffs();
  const auto hc = h.coeffs();
  std::vector<cplx> out(xc.size() + hc.size() - 1, 0.0);
  for (std::size_t i = 0; i < xc.size(); ++i) {
    for (std::size_t k = 0; k < hc.size(); ++k) out[i + k] += xc[i] * hc[k];
  }
  return FiniteSeq(x.offset() + h.offset(), std::move(out));
}

FiniteSeq involute(const FiniteSeq& x) {
  if (x.is_zero()) return {};
  std::vector<cplx> out(x.coeffs().rbegin(), x.coeffs().rend());
  for (auto& c : out) c = std::conj(c);
  return FiniteSeq(-x.last(), std::move(out));
}

FiniteSeq downsample(const FiniteSeq& x, int j) {
  if (j < 1) throw InvalidArgument("downsample order must be >= 1");
  if (x.is_zero()) return {};
  const std::int64_t step = pow2(j);
  const std::int64_t lo = -floor_div(-x.first(), step);  // ceil(first / step)
  const std::int64_t hi = floor_div(x.last(), step);
  if (lo > hi) return {};
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t n = lo; n <= hi; ++n) out[static_cast<std::size_t>(n - lo)] = x[n * step];
  return FiniteSeq(lo, std::move(out));
}

FiniteSeq upsample(const FiniteSeq& x, int j) {
  if (j < 1) throw InvalidArgument("upsample order must be >= 1");
  if (x.is_zero()) return {};
  const std::int64_t step = pow2(j);
  std::vector<cplx> out(static_cast<std::size_t>((static_cast<std::int64_t>(x.size()) - 1) * step + 1),
                        0.0);
  for (std::size_t t = 0; t < x.size(); ++t) out[t * static_cast<std::size_t>(step)] = x.coeffs()[t];
  return FiniteSeq(x.offset() * step, std::move(out));
}

FiniteSeq translate(const FiniteSeq& x, std::int64_t k) {
  if (x.is_zero()) return {};
  return FiniteSeq(x.offset() + k, std::vector<cplx>(x.coeffs().begin(), x.coeffs().end()));
}

double norm_sq(const FiniteSeq& x) {
  double acc = 0.0;
  for (const auto& c : x.coeffs()) acc += std::norm(c);
  return acc;
}

cplx inner(const FiniteSeq& x, const FiniteSeq& y) {
  if (x.is_zero() || y.is_zero()) return 0.0;
  const std::int64_t lo = std::max(x.first(), y.first());
  const std::int64_t hi = std::min(x.last(), y.last());
  cplx acc = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) acc += x[n] * std::conj(y[n]);
  return acc;
}

}  // namespace fbstab
