#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fbstab/filters.hpp"
#include "fbstab/seq.hpp"

namespace fbstab {

/// Largest order accepted by iterate_filters / analyze unless overridden.
inline constexpr int kDefaultMaxOrder = 20;

/// h_l and g_l for l = 1..j, where h_l = h_{l-1} * U^{l-1} h and
/// g_l = h_{l-1} * U^{l-1} g (h_0 = delta_0).
struct IteratedFilters {
  int j = 0;
  std::vector<FiniteSeq> h_list;
  std::vector<FiniteSeq> g_list;

  const FiniteSeq& h(int l) const { return h_list.at(static_cast<std::size_t>(l - 1)); }
  const FiniteSeq& g(int l) const { return g_list.at(static_cast<std::size_t>(l - 1)); }
};

IteratedFilters iterate_filters(const FilterPair& pair, int j, int j_max = kDefaultMaxOrder);

/// Output of the order-j analysis operator.
struct AnalysisOutput {
  int order = 0;
  std::vector<FiniteSeq> channels;  ///< D^l(x * involute(g_l)), l = 1..j
  FiniteSeq lowpass_residual;       ///< D^j(x * involute(h_j))

  /// ||channel_l||^2 for l = 1..j followed by ||residual||^2.
  std::vector<double> energies() const;
};

/// Direct form: builds g_l, h_j and filters x with them.
AnalysisOutput analyze(const FilterPair& pair, const FiniteSeq& x, int j,
                       int j_max = kDefaultMaxOrder);

/// Tree form: repeatedly filters with involute(g) / involute(h) and
/// downsamples by 2. Same result as analyze, but the working signal shrinks
/// at every level so it has no practical limit on j.
AnalysisOutput analyze_cascade(const FilterPair& pair, const FiniteSeq& x, int j);

/// [||(Fx)_1||^2, ..., ||(Fx)_{j_max}||^2, ||(F_{j_max} x)_{j_max+1}||^2].
std::vector<double> energy_profile(const FilterPair& pair, const FiniteSeq& x, int j_max);

/// Matrix of x -> D(x * h) on sequences supported in [-L, L].
struct TransferMatrix {
  int L = 0;
  Eigen::MatrixXcd entries;  ///< entries(k + L, m + L) = h(2k - m)

  /// Coefficients of x on -L..L; throws if x has support outside.
  Eigen::VectorXcd to_vector(const FiniteSeq& x) const;
  FiniteSeq from_vector(const Eigen::VectorXcd& v) const;
  FiniteSeq apply(const FiniteSeq& x) const;
};

/// Requires support(h) in [-L, L] and the low-pass axioms.
TransferMatrix transfer_matrix(const FiniteSeq& h, int L);

struct ContractionCertificate {
  int L = 0;
  bool hypothesis_holds = false;  ///< every h(k) >= -1e-12 (real part, zero imaginary part)
  cplx even_sum = 0.0;
  cplx odd_sum = 0.0;
  bool sums_ok = false;  ///< both sums equal 1/sqrt(2) within 1e-10
  double spectral_radius = 0.0;
  bool verdict = false;  ///< hypothesis_holds and spectral_radius <= 1/sqrt(2) + 1e-9
};

ContractionCertificate contraction_certificate(const FiniteSeq& h, int L);

}  // namespace fbstab
