#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qdmaps/channels.hpp"
#include "qdmaps/errors.hpp"
#include "qdmaps/matrix.hpp"

namespace qdmaps {

/// Transfer matrix acting on row-major vectorized states, together with the
/// times it connects. `t_from == t0` marks a full map from the preparation
/// time; `t_from > t0` marks an intermediate map whose construction assumed
/// preparation at t0.
struct AMap {
  ComplexMatrix matrix;
  double t_from;
  double t_to;
  double t0;
};

enum class Verdict { cp_ok, cp_violated };

inline std::string verdict_name(Verdict v) {
  return v == Verdict::cp_ok ? "cp-ok" : "cp-violated";
}

/// Result of a complete-positivity probe of an intermediate map.
struct WitnessReport {
  double min_eigenvalue;
  std::pair<double, double> interval;  // (t1, t2)
  double t0;
  Verdict verdict;
};

enum class PVerdict { p_ok, p_violated };

inline std::string p_verdict_name(PVerdict v) {
  return v == PVerdict::p_ok ? "p-ok" : "p-violated";
}

/// Result of a positivity probe of an intermediate Pauli-diagonal map: the
/// largest |transfer eigenvalue| of the intermediate map. Values above 1 mean
/// some Bloch component grows, so the map cannot be positive.
struct PWitnessReport {
  double max_abs_eigenvalue;
  std::pair<double, double> interval;
  double t0;
  PVerdict verdict;
};

namespace detail {

struct PauliEigenvalues {
  double x;
  double y;
  double z;
};

/// Pauli transfer eigenvalues of the elapsed-time channel. Only defined for
/// the Pauli-diagonal families (dephasing + the eternal three-rate channel).
inline PauliEigenvalues map_eigenvalues(const ChannelFamily& fam, double elapsed) {
  if (is_single_p_dephasing(fam)) {
    const double p = mixing_p(fam, elapsed);
    return {p, p, 1.0};
  }
  if (std::holds_alternative<Enm>(fam)) {
    // l_i = exp(-2 int_0^dt (Gamma - gamma_i)); with rates (1, 1, -tanh) the
    // integrals close to l1 = l2 = ((1 + e^{-2 dt})/2)^2 and l3 = e^{-4 dt}.
    const double e2 = std::exp(-2.0 * elapsed);
    const double l12 = 0.25 * (1.0 + e2) * (1.0 + e2);
    return {l12, l12, std::exp(-4.0 * elapsed)};
  }
  throw FamilyMismatchError("map_eigenvalues: family '" + family_name(fam) +
                            "' is not Pauli-diagonal");
}

/// Computational-basis transfer matrix of a Pauli-diagonal channel with
/// transfer eigenvalues (lx, ly, lz).
inline ComplexMatrix pauli_transfer_a(const PauliEigenvalues& l) {
  ComplexMatrix a(4, 4);
  a(0, 0) = 0.5 * (1.0 + l.z);
  a(0, 3) = 0.5 * (1.0 - l.z);
  a(3, 0) = 0.5 * (1.0 - l.z);
  a(3, 3) = 0.5 * (1.0 + l.z);
  a(1, 1) = 0.5 * (l.x + l.y);
  a(1, 2) = 0.5 * (l.x - l.y);
  a(2, 1) = 0.5 * (l.x - l.y);
  a(2, 2) = 0.5 * (l.x + l.y);
  return a;
}

/// Transfer matrix of amplitude damping with (signed) amplitude alpha:
/// populations relax toward |0><0| by alpha^2, coherences scale by alpha.
inline ComplexMatrix damping_a(double alpha) {
  ComplexMatrix a(4, 4);
  a(0, 0) = 1.0;
  a(0, 3) = 1.0 - alpha * alpha;
  a(1, 1) = alpha;
  a(2, 2) = alpha;
  a(3, 3) = alpha * alpha;
  return a;
}

inline void require_ordering(double t, double t0) {
  if (!(t0 >= 0.0) || !(t >= t0) || !std::isfinite(t) || !std::isfinite(t0))
    throw PreconditionError("a_matrix: need finite t >= t0 >= 0");
}

/// Raises the construction-time singularity error if the map at elapsed time
/// tau cannot be inverted to build an intermediate map.
inline void check_invertible_at(const ChannelFamily& fam, double tau) {
  if (is_amplitude_damping(fam)) {
    const double alpha = damping_amplitude(fam, tau);
    if (alpha * alpha < 1e-9)
      throw SingularMatrixError(
          "intermediate_a: initial map fully damped, not invertible", alpha * alpha);
    return;
  }
  const PauliEigenvalues l = map_eigenvalues(fam, tau);
  const double m = std::min(std::abs(l.x), std::min(std::abs(l.y), std::abs(l.z)));
  if (m < 1e-9)
    throw SingularMatrixError("intermediate_a: initial map singular (transfer eigenvalue ~0)",
                              m);
}

}  // namespace detail

/// Transfer matrix of the channel from preparation time t0 to t. All families
/// are elapsed-time maps, so the matrix depends on t - t0 only.
inline AMap a_matrix(const ChannelFamily& fam, double t, double t0) {
  detail::require_ordering(t, t0);
  const double tau = t - t0;
  if (is_amplitude_damping(fam))
    return AMap{detail::damping_a(detail::damping_amplitude(fam, tau)), t0, t, t0};
  return AMap{detail::pauli_transfer_a(detail::map_eigenvalues(fam, tau)), t0, t, t0};
}

/// Intermediate map from t1 to t2 of an evolution prepared at t0, built as
/// A(t2, t0) A(t1, t0)^{-1}.
inline AMap intermediate_a(const ChannelFamily& fam, double t2, double t1, double t0) {
  detail::require_ordering(t1, t0);
  if (!(t2 >= t1) || !std::isfinite(t2))
    throw PreconditionError("intermediate_a: need finite t2 >= t1");
  detail::check_invertible_at(fam, t1 - t0);
  const AMap full2 = a_matrix(fam, t2, t0);
  const AMap full1 = a_matrix(fam, t1, t0);
  return AMap{full2.matrix * inverse(full1.matrix), t1, t2, t0};
}

/// Index reshuffle between the transfer matrix and the Choi matrix:
/// B[2j'+j][2k'+k] = A[2j'+k'][2j+k]. Exact entry permutation, self-inverse.
inline ComplexMatrix involution(const ComplexMatrix& a) {
  if (a.rows() != 4 || a.cols() != 4) throw ShapeError("involution: expected a 4x4 matrix");
  ComplexMatrix b(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t jp = r >> 1, j = r & 1;
      const std::size_t kp = c >> 1, k = c & 1;
      b(r, c) = a(2 * jp + kp, 2 * j + k);
    }
  return b;
}

inline ChoiMat involution(const AMap& a) {
  const ChoiKind kind = a.t_from == a.t0 ? ChoiKind::full_map : ChoiKind::intermediate;
  return ChoiMat{involution(a.matrix), kind};
}

/// Complete-positivity witness: the smallest eigenvalue of the intermediate
/// map's Choi matrix on [t1, t2] for an evolution prepared at t0. Negative
/// beyond the tolerance means the interval breaks CP-divisibility.
inline WitnessReport cp_witness(const ChannelFamily& fam, double t1, double t2, double t0,
                                double tolerance = 1e-9) {
  if (!(t2 > t1)) throw PreconditionError("cp_witness: need t2 > t1");
  const ChoiMat choi = involution(intermediate_a(fam, t2, t1, t0));
  const HermitianEigenResult eig = hermitian_eig(choi.matrix);
  const double min_eig = eig.eigenvalues.back();
  return WitnessReport{min_eig, {t1, t2}, t0,
                       min_eig < -tolerance ? Verdict::cp_violated : Verdict::cp_ok};
}

/// Positivity witness for Pauli-diagonal families: the largest magnitude
/// among the intermediate map's transfer eigenvalues l_i(t2-t0)/l_i(t1-t0).
/// A value above 1 + tolerance certifies broken P-divisibility.
inline PWitnessReport p_witness(const ChannelFamily& fam, double t1, double t2, double t0,
                                double tolerance = 1e-9) {
  if (!is_pauli(fam))
    throw FamilyMismatchError("p_witness: family '" + family_name(fam) +
                              "' is not Pauli-diagonal");
  if (!(t2 > t1)) throw PreconditionError("p_witness: need t2 > t1");
  detail::require_ordering(t1, t0);
  detail::check_invertible_at(fam, t1 - t0);
  const detail::PauliEigenvalues l1 = detail::map_eigenvalues(fam, t1 - t0);
  const detail::PauliEigenvalues l2 = detail::map_eigenvalues(fam, t2 - t0);
  const double m = std::max(std::abs(l2.x / l1.x),
                            std::max(std::abs(l2.y / l1.y), std::abs(l2.z / l1.z)));
  return PWitnessReport{m, {t1, t2}, t0,
                        m > 1.0 + tolerance ? PVerdict::p_violated : PVerdict::p_ok};
}

/// Temporal self-similarity witness: holding the interior interval [t1, t2]
/// fixed in absolute time, vary the preparation time over `t0_grid` and
/// report the largest trace-norm distance between the resulting intermediate
/// Choi matrices. Zero (within tolerance) on the grid is necessary for the
/// family to be temporally self-similar. An empty grid selects the default
/// {0, 0.25, 0.5, 1.0} * t1.
inline double tss_witness(const ChannelFamily& fam, double t1, double t2,
                          std::vector<double> t0_grid = {}) {
  if (!(t2 >= t1) || !(t1 >= 0.0)) throw PreconditionError("tss_witness: need t2 >= t1 >= 0");
  if (t0_grid.empty()) t0_grid = {0.0, 0.25 * t1, 0.5 * t1, t1};
  std::vector<ComplexMatrix> chois;
  chois.reserve(t0_grid.size());
  for (double t0 : t0_grid) {
    if (!(t0 >= 0.0) || !(t0 <= t1))
      throw PreconditionError("tss_witness: every t0 must satisfy 0 <= t0 <= t1");
    chois.push_back(involution(intermediate_a(fam, t2, t1, t0)).matrix);
  }
  double witness = 0.0;
  for (std::size_t i = 0; i + 1 < chois.size(); ++i)
    for (std::size_t j = i + 1; j < chois.size(); ++j)
      witness = std::max(witness, trace_norm(chois[i] - chois[j]));
  return witness;
}

}  // namespace qdmaps
