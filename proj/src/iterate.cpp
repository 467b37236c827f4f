#include "fbstab/iterate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

namespace fbstab {
namespace {

void check_order(int j, int j_max) {
  if (j < 1) throw InvalidArgument("order j must be >= 1, got " + std::to_string(j));
  if (j > j_max) {
    throw InvalidArgument("order j = " + std::to_string(j) + " exceeds the limit " +
                          std::to_string(j_max));
  }
}

void check_support(const FiniteSeq& h, int L) {
  if (L < 0) throw InvalidArgument("support radius L must be >= 0");
  if (!h.is_zero() && (h.first() < -L || h.last() > L)) {
    throw InvalidArgument("filter support [" + std::to_string(h.first()) + ", " +
                          std::to_string(h.last()) + "] is not inside [-" + std::to_string(L) +
                          ", " + std::to_string(L) + "]");
  }
}

}  // namespace

IteratedFilters iterate_filters(const FilterPair& pair, int j, int j_max) {
  check_order(j, j_max);
  IteratedFilters out;
  out.j = j;
  out.h_list.reserve(static_cast<std::size_t>(j));
  out.g_list.reserve(static_cast<std::size_t>(j));
  out.h_list.push_back(pair.h());
  out.g_list.push_back(pair.g());
  for (int l = 2; l <= j; ++l) {
    const FiniteSeq& prev = out.h_list.back();
    out.g_list.push_back(convolve(prev, upsample(pair.g(), l - 1)));
    out.h_list.push_back(convolve(prev, upsample(pair.h(), l - 1)));
  }
  return out;
}

std::vector<double> AnalysisOutput::energies() const {
  std::vector<double> e;
  e.reserve(channels.size() + 1);
  for (const auto& c : channels) e.push_back(norm_sq(c));
  e.push_back(norm_sq(lowpass_residual));
  return e;
}

AnalysisOutput analyze(const FilterPair& pair, const FiniteSeq& x, int j, int j_max) {
  const IteratedFilters it = iterate_filters(pair, j, j_max);
  AnalysisOutput out;
  out.order = j;
  out.channels.reserve(static_cast<std::size_t>(j));
  for (int l = 1; l <= j; ++l) out.channels.push_back(downsample(convolve(x, involute(it.g(l))), l));
  out.lowpass_residual = downsample(convolve(x, involute(it.h(j))), j);
  return out;
}

AnalysisOutput analyze_cascade(const FilterPair& pair, const FiniteSeq& x, int j) {
  if (j < 1) throw InvalidArgument("order j must be >= 1, got " + std::to_string(j));
  const FiniteSeq hbar = involute(pair.h());
  const FiniteSeq gbar = involute(pair.g());
  AnalysisOutput out;
  out.order = j;
  out.channels.reserve(static_cast<std::size_t>(j));
  FiniteSeq r = x;
  for (int l = 1; l <= j; ++l) {
    out.channels.push_back(downsample(convolve(r, gbar), 1));
    r = downsample(convolve(r, hbar), 1);
  }
  out.lowpass_residual = std::move(r);
  return out;
}

std::vector<double> energy_profile(const FilterPair& pair, const FiniteSeq& x, int j_max) {
  return analyze_cascade(pair, x, j_max).energies();
}

Eigen::VectorXcd TransferMatrix::to_vector(const FiniteSeq& x) const {
  check_support(x, L);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * L + 1);
  for (int m = -L; m <= L; ++m) v(m + L) = x[m];
  return v;
}

FiniteSeq TransferMatrix::from_vector(const Eigen::VectorXcd& v) const {
  return FiniteSeq(-L, std::vector<cplx>(v.data(), v.data() + v.size()));
}

FiniteSeq TransferMatrix::apply(const FiniteSeq& x) const {
  return from_vector(entries * to_vector(x));
}

TransferMatrix transfer_matrix(const FiniteSeq& h, int L) {
  check_support(h, L);
  check_lowpass(h);
  TransferMatrix t;
  t.L = L;
  const int dim = 2 * L + 1;
  t.entries = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = -L; k <= L; ++k) {
    for (int m = -L; m <= L; ++m) t.entries(k + L, m + L) = h[2 * k - m];
  }
  return t;
}

ContractionCertificate contraction_certificate(const FiniteSeq& h, int L) {
  const TransferMatrix t = transfer_matrix(h, L);
  ContractionCertificate c;
  c.L = L;
  c.hypothesis_holds = true;
  for (std::int64_t n = h.first(); !h.is_zero() && n <= h.last(); ++n) {
    const cplx v = h[n];
    if (v.real() < -1e-12 || std::abs(v.imag()) > 1e-12) c.hypothesis_holds = false;
    ((n % 2 == 0) ? c.even_sum : c.odd_sum) += v;
  }
  const double target = 1.0 / std::numbers::sqrt2;
  c.sums_ok = std::abs(c.even_sum - target) < 1e-10 && std::abs(c.odd_sum - target) < 1e-10;
  // Direct eigenvalues: the matrix is tiny, and unlike power iteration this
  // is not fooled by complex or equal-modulus dominant eigenvalues.
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(t.entries, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue solver failed on the transfer matrix");
  c.spectral_radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  c.verdict = c.hypothesis_holds && c.spectral_radius <= target + 1e-9;
  return c;
}

}  // namespace fbstab
