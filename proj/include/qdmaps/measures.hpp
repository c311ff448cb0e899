#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qdmaps/channels.hpp"
#include "qdmaps/errors.hpp"
#include "qdmaps/maps.hpp"
#include "qdmaps/matrix.hpp"
#include "qdmaps/quadrature.hpp"

namespace qdmaps {

/// Normalization of the generator-distance measure: `d_factor` and `unit`
/// weight the rate mismatch by the trace norm of the corresponding
/// generator-Choi difference (4 resp. 2 for dephasing, (1+sqrt(2)) resp. half
/// that for damping); `rate_distance` uses the bare rate mismatch.
enum class MeasureConvention { d_factor, unit, rate_distance };

inline std::string convention_name(MeasureConvention c) {
  switch (c) {
    case MeasureConvention::d_factor:
      return "d-factor";
    case MeasureConvention::unit:
      return "unit";
    default:
      return "rate-distance";
  }
}

/// Value of a generator-distance measure together with how it was computed.
struct MeasureResult {
  double value;
  double optimizer_rate;  // the constant comparison rate the value is taken at
  MeasureConvention convention;
  double quadrature_error_estimate;
  double horizon;  // T
};

struct HolevoPoint {
  double t;
  double bound;  // bits
};

/// Von Neumann entropy in bits of a density matrix (PSD within -1e-9 on
/// eigenvalues, unit trace within 1e-8).
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw ShapeError("von_neumann_entropy: matrix is not square");
  const Complex tr = rho.trace();
  if (std::abs(tr - Complex(1.0)) > 1e-8)
    throw DomainError("von_neumann_entropy: trace is not 1");
  const HermitianEigenResult eig = hermitian_eig(rho);
  double s = 0.0;
  for (double l : eig.eigenvalues) {
    if (l < -1e-9)
      throw DomainError("von_neumann_entropy: negative eigenvalue " + std::to_string(l));
    if (l > 0.0) s -= l * std::log2(l);
  }
  return std::max(0.0, s);
}

/// Holevo bound on the accessible information distinguishing an equiprobable
/// pair of states: S((rho1+rho2)/2) - (S(rho1)+S(rho2))/2, in bits.
inline double holevo_bound(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  const double mix = von_neumann_entropy(0.5 * (rho1 + rho2));
  const double avg = 0.5 * (von_neumann_entropy(rho1) + von_neumann_entropy(rho2));
  return std::max(0.0, mix - avg);
}

/// Holevo-bound distinguishability of the pair prepared as |+> and |-> and
/// evolved from time 0, sampled on `t_grid`. Pauli-diagonal families only.
inline std::vector<HolevoPoint> holevo_curve(const ChannelFamily& fam,
                                             const std::vector<double>& t_grid) {
  if (!is_pauli(fam))
    throw FamilyMismatchError("holevo_curve: family '" + family_name(fam) +
                              "' is not Pauli-diagonal");
  const ComplexMatrix plus = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  const ComplexMatrix minus = ComplexMatrix::from_rows({{0.5, -0.5}, {-0.5, 0.5}});
  std::vector<HolevoPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const AMap map = a_matrix(fam, t, 0.0);
    const ComplexMatrix r1 = unvectorize(map.matrix * vectorize(plus));
    const ComplexMatrix r2 = unvectorize(map.matrix * vectorize(minus));
    out.push_back({t, holevo_bound(r1, r2)});
  }
  return out;
}

/// The scalar canonical rate the measures compare: gamma_3 for Pauli-diagonal
/// families (the x/y rates are family constants and cancel in differences),
/// the damping rate for amplitude damping.
inline double scalar_decay_rate(const ChannelFamily& fam, double t) {
  const GeneratorRates r = decay_rate(fam, t);
  return std::visit(detail::overloaded{[](const PauliRates& pr) { return pr.z; },
                                       [](const DampingRate& dr) { return dr.value; }},
                    r);
}

namespace detail {

inline double qds_scalar_rate(const ChannelFamily& fam) {
  const GeneratorRates r = qds_limit_rate(fam);
  return std::visit(overloaded{[](const PauliRates& pr) { return pr.z; },
                               [](const DampingRate& dr) { return dr.value; }},
                    r);
}

/// Trace-norm weight of a unit scalar-rate mismatch. The generator-Choi
/// difference is linear in the scalar rate, so its trace norm factorizes into
/// this weight times |gamma(t) - c|; computing the weight once from
/// generator_choi keeps the measure tied to the definitional matrix norm.
inline double distance_prefactor(const ChannelFamily& fam, MeasureConvention conv) {
  if (conv == MeasureConvention::rate_distance) return 1.0;
  const ChoiConvention cc = conv == MeasureConvention::d_factor ? ChoiConvention::d_factor
                                                                : ChoiConvention::unit;
  const GeneratorRates unit_diff =
      is_amplitude_damping(fam) ? GeneratorRates{DampingRate{1.0}}
                                : GeneratorRates{PauliRates{0.0, 0.0, 1.0}};
  return trace_norm(generator_choi(unit_diff, cc).matrix);
}

/// Families whose canonical rate has poles inside a zero crossing of an
/// underlying analytic factor are scanned for such crossings before
/// integrating: quadrature points essentially never land within the 1e-9
/// pointwise floor, yet the rate is non-integrable across the crossing.
inline void check_generator_regular(const ChannelFamily& fam, double horizon) {
  const Rtn* rtn = std::get_if<Rtn>(&fam);
  const Nmad* nmad = std::get_if<Nmad>(&fam);
  if (rtn == nullptr && nmad == nullptr) return;

  auto factor = [&](double t) {
    return rtn != nullptr ? rtn_scaled_p(*rtn, t) : nmad_decoherence(*nmad, t);
  };

  const int n = 4096;
  double prev_t = 0.0;
  double prev_v = factor(0.0);  // equals 1 for both families
  for (int i = 1; i <= n; ++i) {
    const double t = horizon * static_cast<double>(i) / n;
    const double v = factor(t);
    if (std::abs(v) < 1e-9)
      throw GeneratorSingularityError("generator singular inside the horizon", t);
    if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_t, hi = t;
      double flo = prev_v;
      for (int k = 0; k < 80; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = factor(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      throw GeneratorSingularityError("generator singular inside the horizon",
                                      0.5 * (lo + hi));
    }
    prev_t = t;
    prev_v = v;
  }
}

inline MeasureResult zeta_impl(const ChannelFamily& fam, double horizon,
                               MeasureConvention conv, std::optional<double> fixed_rate) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw PreconditionError("measure horizon T must be positive and finite");
  check_generator_regular(fam, horizon);

  const double weight = distance_prefactor(fam, conv);
  auto rate = [&](double t) { return scalar_decay_rate(fam, t); };

  double c;
  if (fixed_rate) {
    c = *fixed_rate;
  } else {
    // The objective J(c) = int |gamma(t) - c| is convex with its minimum in
    // the closed hull of the rate's range intersected with c >= 0: the
    // comparison generator must itself be a valid semigroup generator, so
    // negative constant rates are not admissible (this is what puts the
    // minimizer at c = 0 for the eternal channel's negative rate).
    const int n = 1025;
    double lo = rate(0.0), hi = lo;
    for (int i = 1; i <= n; ++i) {
      const double r = rate(horizon * static_cast<double>(i) / n);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    lo = std::max(0.0, lo);
    hi = std::max(0.0, hi);
    if (hi - lo < 1e-15) {
      c = lo;
    } else {
      auto objective = [&](double cc) {
        return adaptive_simpson([&](double t) { return std::abs(rate(t) - cc); }, 0.0,
                                horizon, 1e-8, 64)
            .value;
      };
      c = minimize_convex(objective, lo, hi, 1e-12 * std::max(1.0, hi - lo), 200).argmin;
    }
  }

  const QuadratureResult q =
      adaptive_simpson([&](double t) { return std::abs(rate(t) - c); }, 0.0, horizon, 1e-8, 64);
  return MeasureResult{weight * q.value / horizon, c, conv,
                       weight * q.error_estimate / horizon, horizon};
}

}  // namespace detail

/// Time-averaged minimal trace-norm distance between the instantaneous
/// generator's Choi matrix and that of the best constant-rate generator:
/// min_c (1/T) int_0^T ||h(t) - h_c||_1 dt, minimized over the scalar rate by
/// ternary search (the objective is convex).
inline MeasureResult zeta(const ChannelFamily& fam, double horizon,
                          MeasureConvention convention = MeasureConvention::d_factor) {
  return detail::zeta_impl(fam, horizon, convention, std::nullopt);
}

/// Same integrand as zeta with the comparison rate pinned at the family's
/// semigroup-limit rate instead of minimized.
inline MeasureResult zeta_upper_bound(const ChannelFamily& fam, double horizon,
                                      MeasureConvention convention = MeasureConvention::d_factor) {
  return detail::zeta_impl(fam, horizon, convention, detail::qds_scalar_rate(fam));
}

/// The bare rate mismatch min_c (1/T) int_0^T |gamma(t) - c| dt, without the
/// generator-Choi trace-norm weight.
inline MeasureResult rate_distance(const ChannelFamily& fam, double horizon) {
  return detail::zeta_impl(fam, horizon, MeasureConvention::rate_distance, std::nullopt);
}

}  // namespace qdmaps
