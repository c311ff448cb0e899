#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "qdmaps/errors.hpp"
#include "qdmaps/matrix.hpp"

namespace qdmaps {

// ---------------------------------------------------------------------------
// Qubit constants
// ---------------------------------------------------------------------------

inline ComplexMatrix pauli_x() {
  return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
}

inline ComplexMatrix pauli_y() {
  return ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
}

inline ComplexMatrix pauli_z() {
  return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
}

inline ComplexMatrix lowering_op() {
  return ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
}

/// Projector onto the maximally entangled state (|00> + |11>)/sqrt(2).
inline ComplexMatrix bell_phi_plus() {
  ComplexMatrix p(4, 4);
  p(0, 0) = p(0, 3) = p(3, 0) = p(3, 3) = 0.5;
  return p;
}

inline ComplexMatrix bell_phi_minus() {
  ComplexMatrix p(4, 4);
  p(0, 0) = p(3, 3) = 0.5;
  p(0, 3) = p(3, 0) = -0.5;
  return p;
}

inline ComplexMatrix bell_psi_plus() {
  ComplexMatrix p(4, 4);
  p(1, 1) = p(1, 2) = p(2, 1) = p(2, 2) = 0.5;
  return p;
}

inline ComplexMatrix bell_psi_minus() {
  ComplexMatrix p(4, 4);
  p(1, 1) = p(2, 2) = 0.5;
  p(1, 2) = p(2, 1) = -0.5;
  return p;
}

// ---------------------------------------------------------------------------
// Channel families
// ---------------------------------------------------------------------------
//
// Each family is an elapsed-time map: the channel from t0 to t depends only on
// t - t0. Dephasing families are parameterized by a mixing factor p(t) acting
// on the coherences; amplitude-damping families by a damping amplitude;
// the eternally non-Markovian family by its three Pauli transfer eigenvalues.
//
// Bandwidth-type parameters admit the boundary values that select the exact
// semigroup limit (+inf where the limit is "infinitely fast bath", 0 where it
// is "infinitely slow power-law tail"); everything else must be positive and
// finite.

namespace detail {

inline void require_positive_finite(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(what) + " must be positive and finite");
}

inline void require_positive_or_inf(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace detail

/// Dephasing under Ornstein-Uhlenbeck noise.
/// p(t) = exp(-(rate/2) (t + (e^{-bandwidth t} - 1)/bandwidth));
/// bandwidth = +inf selects the semigroup limit p(t) = e^{-rate t / 2}.
struct Oun {
  double rate;       // inverse effective relaxation time (CLI: --G)
  double bandwidth;  // noise bandwidth (CLI: --g)

  Oun(double rate_, double bandwidth_) : rate(rate_), bandwidth(bandwidth_) {
    detail::require_positive_finite(rate, "Oun rate");
    detail::require_positive_or_inf(bandwidth, "Oun bandwidth");
  }
};

/// Dephasing under power-law noise.
/// p(t) = exp(-rate t (g t + 2) / (2 (g t + 1)^2)) with g = inv_bandwidth;
/// inv_bandwidth = 0 selects the semigroup limit p(t) = e^{-rate t}.
struct Pln {
  double rate;           // inverse effective relaxation time (CLI: --G)
  double inv_bandwidth;  // inverse noise bandwidth (CLI: --g)

  Pln(double rate_, double inv_bandwidth_) : rate(rate_), inv_bandwidth(inv_bandwidth_) {
    detail::require_positive_finite(rate, "Pln rate");
    if (!(inv_bandwidth >= 0.0) || !std::isfinite(inv_bandwidth))
      throw DomainError("Pln inv_bandwidth must be finite and >= 0");
  }
};

/// Ornstein-Uhlenbeck dephasing with an oscillatory spectral modulation.
/// p(t) = exp(-(rate/2) u(t) v(t)) with
///   u(t) = t + (e^{-t/r} - 1) r ... written with r = 1/bandwidth-time; here
/// the stored `bandwidth` plays the role of the correlation parameter r:
///   u(t) = t + (e^{-bandwidth t} - 1)/bandwidth  (same shape as Oun with g=r)
///   v(t) = cos^2(t/r) + sin^2(t/r)/modulation,   r = bandwidth.
/// bandwidth = +inf selects the semigroup limit p(t) = e^{-rate t / 2}.
struct ModOun {
  double rate;        // overall decay scale (CLI: --a)
  double bandwidth;   // correlation parameter r (CLI: --r)
  double modulation;  // spectral modulation depth k, any nonzero real (CLI: --k)

  ModOun(double rate_, double bandwidth_, double modulation_)
      : rate(rate_), bandwidth(bandwidth_), modulation(modulation_) {
    detail::require_positive_finite(rate, "ModOun rate");
    detail::require_positive_or_inf(bandwidth, "ModOun bandwidth");
    if (modulation == 0.0 || !std::isfinite(modulation))
      throw DomainError("ModOun modulation must be nonzero and finite");
  }
};

/// Dephasing under random telegraph noise.
/// p(t) = e^{-bandwidth t} (cos(w t) + (bandwidth/w) sin(w t)) in the
/// underdamped regime w^2 = 4 coupling^2 - bandwidth^2 > 0, hyperbolic
/// otherwise; both regimes are one analytic function of
/// s = bandwidth^2 - 4 coupling^2.
struct Rtn {
  double coupling;   // telegraph coupling strength (CLI: --gamma0)
  double bandwidth;  // spectral bandwidth / flipping rate (CLI: --g)

  Rtn(double coupling_, double bandwidth_) : coupling(coupling_), bandwidth(bandwidth_) {
    detail::require_positive_finite(coupling, "Rtn coupling");
    detail::require_positive_finite(bandwidth, "Rtn bandwidth");
  }
};

/// Amplitude damping with a constant rate (the semigroup channel).
/// Damping amplitude alpha(t) = e^{-coupling t / 2}.
struct Ad {
  double coupling;  // spontaneous decay rate (CLI: --gamma0)

  explicit Ad(double coupling_) : coupling(coupling_) {
    detail::require_positive_finite(coupling, "Ad coupling");
  }
};

/// Amplitude damping from a Lorentzian bath without the flat-spectrum limit.
/// The damping amplitude is the decoherence function
///   G(t) = e^{-spectral_width t/2} [ (spectral_width) sinhc + cosh ](l t / 2)
/// with l^2 = spectral_width (spectral_width - 2 coupling); G oscillates
/// through zero in the strong-coupling regime spectral_width < 2 coupling.
struct Nmad {
  double coupling;        // system-bath coupling gamma0 (CLI: --gamma0)
  double spectral_width;  // Lorentzian spectral width (CLI: --g)

  Nmad(double coupling_, double spectral_width_)
      : coupling(coupling_), spectral_width(spectral_width_) {
    detail::require_positive_finite(coupling, "Nmad coupling");
    detail::require_positive_finite(spectral_width, "Nmad spectral_width");
  }
};

/// Eternally non-Markovian Pauli channel: unit rates on x and y, rate
/// -tanh(t) on z. Pauli transfer eigenvalues
///   l1(t) = l2(t) = ((1 + e^{-2t})/2)^2,  l3(t) = e^{-4t}.
struct Enm {};

using ChannelFamily = std::variant<Oun, Pln, ModOun, Rtn, Ad, Nmad, Enm>;

inline bool is_single_p_dephasing(const ChannelFamily& fam) {
  return std::holds_alternative<Oun>(fam) || std::holds_alternative<Pln>(fam) ||
         std::holds_alternative<ModOun>(fam) || std::holds_alternative<Rtn>(fam);
}

inline bool is_pauli(const ChannelFamily& fam) {
  return is_single_p_dephasing(fam) || std::holds_alternative<Enm>(fam);
}

inline bool is_amplitude_damping(const ChannelFamily& fam) {
  return std::holds_alternative<Ad>(fam) || std::holds_alternative<Nmad>(fam);
}

inline std::string family_name(const ChannelFamily& fam) {
  struct Namer {
    std::string operator()(const Oun&) const { return "oun"; }
    std::string operator()(const Pln&) const { return "pln"; }
    std::string operator()(const ModOun&) const { return "modoun"; }
    std::string operator()(const Rtn&) const { return "rtn"; }
    std::string operator()(const Ad&) const { return "ad"; }
    std::string operator()(const Nmad&) const { return "nmad"; }
    std::string operator()(const Enm&) const { return "enm"; }
  };
  return std::visit(Namer{}, fam);
}

// ---------------------------------------------------------------------------
// Generator rates
// ---------------------------------------------------------------------------

/// Canonical rates multiplying the three Pauli dissipators.
struct PauliRates {
  double x;
  double y;
  double z;
};

/// Canonical rate multiplying the lowering-operator dissipator.
struct DampingRate {
  double value;
};

using GeneratorRates = std::variant<PauliRates, DampingRate>;

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

/// cosh(sqrt(s) t), analytically continued to cos(sqrt(-s) t) for s < 0.
inline double branch_cosh(double s, double t) {
  const double x = s * t * t;
  if (std::abs(x) < 1e-8) return 1.0 + x / 2.0 + x * x / 24.0 + x * x * x / 720.0;
  if (s > 0.0) return std::cosh(std::sqrt(s) * t);
  return std::cos(std::sqrt(-s) * t);
}

/// sinh(sqrt(s) t)/sqrt(s), continued to sin(sqrt(-s) t)/sqrt(-s); tends to t
/// as s t^2 -> 0. Shares its Taylor series in s t^2 across the branch point,
/// which keeps p(t) and the rates continuous through s = 0.
inline double branch_sinhc(double s, double t) {
  const double x = s * t * t;
  if (std::abs(x) < 1e-8) return t * (1.0 + x / 6.0 + x * x / 120.0 + x * x * x / 5040.0);
  if (s > 0.0) {
    const double w = std::sqrt(s);
    return std::sinh(w * t) / w;
  }
  const double w = std::sqrt(-s);
  return std::sin(w * t) / w;
}

inline double rtn_discriminant(const Rtn& f) {
  return f.bandwidth * f.bandwidth - 4.0 * f.coupling * f.coupling;
}

/// e^{bandwidth t} p(t) for random telegraph noise; its zeros are the
/// generator singularities.
inline double rtn_scaled_p(const Rtn& f, double t) {
  const double s = rtn_discriminant(f);
  return branch_cosh(s, t) + f.bandwidth * branch_sinhc(s, t);
}

inline double nmad_discriminant(const Nmad& f) {
  return f.spectral_width * (f.spectral_width - 2.0 * f.coupling);
}

inline double nmad_decoherence(const Nmad& f, double t) {
  const double s = nmad_discriminant(f);
  const double half = 0.5 * t;
  if (s * half * half >= 400.0) {
    // Overdamped far regime in exponential-sum form: cosh/sinh overflow for
    // wide spectra long before the function itself leaves [0, 1].
    const double w = std::sqrt(s);
    const double ratio = f.spectral_width / w;
    return 0.5 * ((1.0 + ratio) * std::exp((w - f.spectral_width) * half) +
                  (1.0 - ratio) * std::exp(-(w + f.spectral_width) * half));
  }
  return std::exp(-f.spectral_width * half) *
         (f.spectral_width * branch_sinhc(s, half) + branch_cosh(s, half));
}

inline void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("time must be finite and >= 0");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Family observables
// ---------------------------------------------------------------------------

/// Mixing factor p(t) of a dephasing family: the factor by which coherences
/// are scaled after an elapsed time t. Rejects amplitude-damping families and
/// the three-rate Pauli family, which have no single mixing factor.
inline double mixing_p(const ChannelFamily& fam, double t) {
  detail::require_time(t);
  return std::visit(
      detail::overloaded{
          [&](const Oun& f) {
            if (std::isinf(f.bandwidth)) return std::exp(-0.5 * f.rate * t);
            return std::exp(-0.5 * f.rate * (t + std::expm1(-f.bandwidth * t) / f.bandwidth));
          },
          [&](const Pln& f) {
            const double gt = f.inv_bandwidth * t;
            const double denom = (gt + 1.0) * (gt + 1.0);
            return std::exp(-f.rate * t * (gt + 2.0) / (2.0 * denom));
          },
          [&](const ModOun& f) {
            if (std::isinf(f.bandwidth)) return std::exp(-0.5 * f.rate * t);
            const double u = t + std::expm1(-f.bandwidth * t) / f.bandwidth;
            const double phase = t / f.bandwidth;
            const double s2 = std::sin(phase) * std::sin(phase);
            const double v = 1.0 - (1.0 - 1.0 / f.modulation) * s2;
            return std::exp(-0.5 * f.rate * u * v);
          },
          [&](const Rtn& f) {
            const double s = detail::rtn_discriminant(f);
            if (s * t * t >= 400.0) {
              // Overdamped far regime: the e^{-bandwidth t} * cosh product
              // hits 0 * inf; the exponential-sum form stays finite.
              const double w = std::sqrt(s);
              const double ratio = f.bandwidth / w;
              return 0.5 * ((1.0 + ratio) * std::exp((w - f.bandwidth) * t) +
                            (1.0 - ratio) * std::exp(-(w + f.bandwidth) * t));
            }
            return std::exp(-f.bandwidth * t) * detail::rtn_scaled_p(f, t);
          },
          [&](const auto&) -> double {
            throw FamilyMismatchError("mixing_p: family '" + family_name(fam) +
                                      "' has no single mixing factor");
          }},
      fam);
}

/// Canonical generator rates at time t (the t -> 0+ limit at t = 0). For
/// random telegraph noise the rate diverges at zeros of the mixing factor and
/// for Lorentzian amplitude damping at zeros of the decoherence function;
/// both raise a generator-singularity error near those points.
inline GeneratorRates decay_rate(const ChannelFamily& fam, double t) {
  detail::require_time(t);
  return std::visit(
      detail::overloaded{
          [&](const Oun& f) -> GeneratorRates {
            const double z = std::isinf(f.bandwidth)
                                 ? 0.25 * f.rate
                                 : -0.25 * f.rate * std::expm1(-f.bandwidth * t);
            return PauliRates{0.0, 0.0, z};
          },
          [&](const Pln& f) -> GeneratorRates {
            const double w = 1.0 + f.inv_bandwidth * t;
            return PauliRates{0.0, 0.0, 0.5 * f.rate / (w * w * w)};
          },
          [&](const ModOun& f) -> GeneratorRates {
            if (std::isinf(f.bandwidth)) return PauliRates{0.0, 0.0, 0.25 * f.rate};
            const double u = t + std::expm1(-f.bandwidth * t) / f.bandwidth;
            const double du = -std::expm1(-f.bandwidth * t);
            const double phase = t / f.bandwidth;
            const double s2 = std::sin(phase) * std::sin(phase);
            const double v = 1.0 - (1.0 - 1.0 / f.modulation) * s2;
            const double dv =
                (1.0 / f.modulation - 1.0) * std::sin(2.0 * phase) / f.bandwidth;
            return PauliRates{0.0, 0.0, 0.25 * f.rate * (du * v + u * dv)};
          },
          [&](const Rtn& f) -> GeneratorRates {
            const double s = detail::rtn_discriminant(f);
            if (s * t * t >= 400.0) {
              // Overdamped far regime: sc/h in tanh form saturates instead of
              // overflowing; h has no zeros on this branch.
              const double w = std::sqrt(s);
              const double th = std::tanh(w * t);
              return PauliRates{
                  0.0, 0.0, 2.0 * f.coupling * f.coupling * th / (w + f.bandwidth * th)};
            }
            const double sc = detail::branch_sinhc(s, t);
            const double h = detail::branch_cosh(s, t) + f.bandwidth * sc;
            if (std::abs(h) < 1e-9)
              throw GeneratorSingularityError(
                  "decay_rate: rtn generator singular (mixing factor zero)", t);
            return PauliRates{0.0, 0.0, 2.0 * f.coupling * f.coupling * sc / h};
          },
          [&](const Enm&) -> GeneratorRates { return PauliRates{1.0, 1.0, -std::tanh(t)}; },
          [&](const Ad& f) -> GeneratorRates { return DampingRate{f.coupling}; },
          [&](const Nmad& f) -> GeneratorRates {
            const double s = detail::nmad_discriminant(f);
            if (s * t * t >= 1600.0) {
              // Overdamped far regime (argument t/2, so the threshold is 4x
              // the one in nmad_decoherence): tanh form, G has no zeros here.
              const double w = std::sqrt(s);
              const double th = std::tanh(0.5 * w * t);
              return DampingRate{2.0 * f.coupling * f.spectral_width * th /
                                 (w + f.spectral_width * th)};
            }
            const double g_val = detail::nmad_decoherence(f, t);
            if (std::abs(g_val) < 1e-9)
              throw GeneratorSingularityError(
                  "decay_rate: nmad generator singular (decoherence function zero)", t);
            const double half = 0.5 * t;
            const double sc = detail::branch_sinhc(s, half);
            const double h = f.spectral_width * sc + detail::branch_cosh(s, half);
            return DampingRate{2.0 * f.coupling * f.spectral_width * sc / h};
          }},
      fam);
}

/// Rates of the semigroup obtained in the memoryless limit of the family.
inline GeneratorRates qds_limit_rate(const ChannelFamily& fam) {
  return std::visit(
      detail::overloaded{
          [](const Oun& f) -> GeneratorRates { return PauliRates{0.0, 0.0, 0.25 * f.rate}; },
          [](const Pln& f) -> GeneratorRates { return PauliRates{0.0, 0.0, 0.5 * f.rate}; },
          [](const ModOun& f) -> GeneratorRates { return PauliRates{0.0, 0.0, 0.25 * f.rate}; },
          [](const Rtn&) -> GeneratorRates {
            // The memoryless limit of telegraph dephasing (fast flipping,
            // bandwidth >> coupling) has vanishing rate.
            return PauliRates{0.0, 0.0, 0.0};
          },
          [](const Ad& f) -> GeneratorRates { return DampingRate{f.coupling}; },
          [](const Nmad& f) -> GeneratorRates { return DampingRate{f.coupling}; },
          [](const Enm&) -> GeneratorRates { return PauliRates{1.0, 1.0, 0.0}; }},
      fam);
}

/// Decoherence function G(t) of the Lorentzian amplitude-damping family
/// (G(0) = 1; crosses zero in the strong-coupling regime).
inline double decoherence_function(const Nmad& fam, double t) {
  detail::require_time(t);
  return detail::nmad_decoherence(fam, t);
}

namespace detail {

/// Damping amplitude alpha(t): the factor scaling the excited-state
/// amplitude, so the excited population decays by alpha^2.
inline double damping_amplitude(const ChannelFamily& fam, double t) {
  return std::visit(
      overloaded{[&](const Ad& f) { return std::exp(-0.5 * f.coupling * t); },
                 [&](const Nmad& f) { return nmad_decoherence(f, t); },
                 [&](const auto&) -> double {
                   throw FamilyMismatchError("family '" + family_name(fam) +
                                             "' is not amplitude damping");
                 }},
      fam);
}

}  // namespace detail

/// Excited-population damping factor lambda(t) = 1 - alpha(t)^2 of an
/// amplitude-damping family.
inline double damping_factor(const ChannelFamily& fam, double t) {
  detail::require_time(t);
  const double alpha = detail::damping_amplitude(fam, t);
  return std::visit(detail::overloaded{
                        [&](const Ad& f) { return -std::expm1(-f.coupling * t); },
                        [&](const auto&) { return 1.0 - alpha * alpha; }},
                    fam);
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

/// Kraus operators of the elapsed-time channel. Dephasing families get the
/// two-operator {I, Z} mixture, amplitude-damping families the standard pair;
/// the three-rate Pauli family has no supported static Kraus form here.
inline std::vector<ComplexMatrix> kraus_operators(const ChannelFamily& fam, double t) {
  detail::require_time(t);
  if (is_single_p_dephasing(fam)) {
    const double p = mixing_p(fam, t);
    if (std::abs(p) > 1.0 + 1e-12)
      throw DomainError("kraus_operators: mixing factor " + std::to_string(p) +
                        " outside [-1, 1], channel is not CPTP");
    const double wp = std::min(1.0, std::max(0.0, 0.5 * (1.0 + p)));
    const double wm = std::min(1.0, std::max(0.0, 0.5 * (1.0 - p)));
    std::vector<ComplexMatrix> ks;
    ks.push_back(std::sqrt(wp) * ComplexMatrix::identity(2));
    ks.push_back(std::sqrt(wm) * pauli_z());
    return ks;
  }
  if (is_amplitude_damping(fam)) {
    const double alpha = detail::damping_amplitude(fam, t);
    if (std::abs(alpha) > 1.0 + 1e-12)
      throw DomainError("kraus_operators: damping amplitude outside [-1, 1]");
    const double lam = std::min(1.0, std::max(0.0, 1.0 - alpha * alpha));
    ComplexMatrix k0(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = alpha;
    ComplexMatrix k1(2, 2);
    k1(0, 1) = std::sqrt(lam);
    std::vector<ComplexMatrix> ks;
    ks.push_back(k0);
    ks.push_back(k1);
    return ks;
  }
  throw UnsupportedRepresentationError(
      "kraus_operators: no static Kraus representation for family '" + family_name(fam) + "'");
}

/// What a Choi matrix describes: a completed channel, an intermediate map
/// between two interior times, or a generator increment.
enum class ChoiKind { full_map, intermediate, generator };

/// A 4x4 Hermitian Choi matrix together with its role. Full-map kind is PSD
/// with trace 2; intermediate kind has trace 2 but may fail positivity (that
/// failure is the CP-indivisibility witness); generator kind is traceless.
struct ChoiMat {
  ComplexMatrix matrix;
  ChoiKind kind;
};

/// Normalization convention for generator Choi matrices: `d_factor` scales by
/// the Hilbert-space dimension d = 2, `unit` leaves the maximally entangled
/// projector normalized.
enum class ChoiConvention { d_factor, unit };

/// Choi matrix of the canonical generator with the given rates: the dissipator
/// applied to one half of the maximally entangled projector. Hermitian and
/// traceless by construction.
inline ChoiMat generator_choi(const GeneratorRates& rates,
                              ChoiConvention convention = ChoiConvention::d_factor) {
  const double scale = convention == ChoiConvention::d_factor ? 2.0 : 1.0;
  const ComplexMatrix bell = bell_phi_plus();
  const ComplexMatrix eye2 = ComplexMatrix::identity(2);

  ComplexMatrix h = std::visit(
      detail::overloaded{
          [&](const PauliRates& r) {
            ComplexMatrix acc(4, 4);
            const ComplexMatrix ops[3] = {pauli_x(), pauli_y(), pauli_z()};
            const double rs[3] = {r.x, r.y, r.z};
            double total = 0.0;
            for (int i = 0; i < 3; ++i) {
              const ComplexMatrix w = kron(ops[i], eye2);
              acc = acc + rs[i] * (w * bell * w.dagger());
              total += rs[i];
            }
            return acc - total * bell;
          },
          [&](const DampingRate& r) {
            const ComplexMatrix low = kron(lowering_op(), eye2);
            const ComplexMatrix jump = low * bell * low.dagger();
            const ComplexMatrix number = kron(
                ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}}), eye2);
            const ComplexMatrix anti = 0.5 * (number * bell + bell * number);
            return r.value * (jump - anti);
          }},
      rates);

  h = scale * h;
  return ChoiMat{0.5 * (h + h.dagger()), ChoiKind::generator};
}

}  // namespace qdmaps
