#pragma once

// Rotationally symmetric Riemannian metrics on the unit sphere S^2.
//
// Every supported family can be written, for a tangent vector u at p, as
//
//   g_p(u, v) = scale * <u, v> + axial(p_z) * u_z * v_z
//
// with a constant scale and a polynomial axial coefficient. The geodesic
// equation and the meridian length then have closed forms, which the rest
// of the library relies on.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "zollab/errors.hpp"
#include "zollab/vec3.hpp"

namespace zollab {

inline constexpr double kSphereTolerance = 1e-9;

// Odd polynomial h(z) = sum_k a_k z^(2k+1) with h(1) = 0 and sup|h| < 1 on
// [-1, 1]. Used as the meridional stretch profile of a Zoll metric of
// revolution, g = (1 + h(cos t))^2 dt^2 + sin^2 t dphi^2.
class OddProfile {
 public:
  OddProfile() = default;

  explicit OddProfile(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) {
      coeffs_.push_back(0.0);
    }
    double sum = 0.0;
    for (double a : coeffs_) {
      if (!std::isfinite(a)) {
        throw ConstructionError("odd profile: non-finite coefficient");
      }
      sum += a;
    }
    if (std::abs(sum) > 1e-12) {
      throw ConstructionError("odd profile: h(1) = " + std::to_string(sum) + " but must vanish");
    }
    // h = (1 - z^2) q with q odd; q's coefficients are partial sums of h's.
    quotient_.resize(coeffs_.size() > 1 ? coeffs_.size() - 1 : 1, 0.0);
    double partial = 0.0;
    for (std::size_t k = 0; k + 1 < coeffs_.size(); ++k) {
      partial += coeffs_[k];
      quotient_[k] = partial;
    }
    constexpr int kSamples = 20001;
    for (int i = 0; i < kSamples; ++i) {
      const double z = -1.0 + 2.0 * i / (kSamples - 1);
      if (std::abs(value(z)) >= 1.0) {
        throw ConstructionError("odd profile: |h| reaches 1 near z = " + std::to_string(z));
      }
    }
  }

  // h(z) = a z (1 - z^2), the classical family of Zoll examples.
  static OddProfile besse(double a) { return OddProfile({a, -a}); }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  double value(double z) const noexcept { return odd_eval(coeffs_, z); }
  double derivative(double z) const noexcept { return odd_derivative(coeffs_, z); }

  // q(z) = h(z) / (1 - z^2), an odd polynomial since h(+-1) = 0.
  double quotient(double z) const noexcept { return odd_eval(quotient_, z); }
  double quotient_derivative(double z) const noexcept { return odd_derivative(quotient_, z); }

 private:
  static double odd_eval(const std::vector<double>& c, double z) noexcept {
    const double z2 = z * z;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * z2 + *it;
    }
    return acc * z;
  }

  static double odd_derivative(const std::vector<double>& c, double z) noexcept {
    const double z2 = z * z;
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) {
      acc = acc * z2 + static_cast<double>(2 * k + 1) * c[k];
    }
    return acc;
  }

  std::vector<double> coeffs_{0.0};
  std::vector<double> quotient_{0.0};
};

struct Round {
  double radius = 1.0;
};

// Pullback of the Euclidean metric under (x, y, z) -> (x, y, r z).
struct EllipsoidOfRevolution {
  double r = 1.0;
};

struct ZollRevolution {
  OddProfile h;
};

enum class MetricFamily { kRound, kEllipsoid, kZoll };

class MetricSpec {
 public:
  using Variant = std::variant<Round, EllipsoidOfRevolution, ZollRevolution>;

  MetricSpec() : MetricSpec(Round{}) {}

  MetricSpec(Variant v) {  // NOLINT(google-explicit-constructor)
    if (const auto* round = std::get_if<Round>(&v)) {
      if (!(round->radius > 0.0) || !std::isfinite(round->radius)) {
        throw ConstructionError("round metric: radius must be positive");
      }
      scale_ = round->radius * round->radius;
    } else if (const auto* ell = std::get_if<EllipsoidOfRevolution>(&v)) {
      if (!(ell->r > 0.0 && ell->r <= 1.0)) {
        throw ConstructionError("ellipsoid metric: r must lie in (0, 1]");
      }
      constant_axial_ = ell->r * ell->r - 1.0;
    }
    variant_ = std::move(v);
  }

  static MetricSpec round(double radius = 1.0) { return MetricSpec(Round{radius}); }
  static MetricSpec ellipsoid(double r) { return MetricSpec(EllipsoidOfRevolution{r}); }
  static MetricSpec zoll(OddProfile h) { return MetricSpec(ZollRevolution{std::move(h)}); }

  const Variant& variant() const noexcept { return variant_; }

  MetricFamily family() const noexcept { return static_cast<MetricFamily>(variant_.index()); }

  std::string describe() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, Round>) {
            return "round(radius=" + std::to_string(m.radius) + ")";
          } else if constexpr (std::is_same_v<T, EllipsoidOfRevolution>) {
            return "ellipsoid(r=" + std::to_string(m.r) + ")";
          } else {
            return "zoll(h(0.5)=" + std::to_string(m.h.value(0.5)) + ")";
          }
        },
        variant_);
  }

  // Isotropic factor: scale() * <u, v>.
  double scale() const noexcept { return scale_; }

  // Coefficient of u_z v_z as a function of the height z.
  double axial(double z) const noexcept {
    if (const auto* zoll = std::get_if<ZollRevolution>(&variant_)) {
      return zoll->h.quotient(z) * (2.0 + zoll->h.value(z));
    }
    return constant_axial_;
  }

  double axial_derivative(double z) const noexcept {
    if (const auto* zoll = std::get_if<ZollRevolution>(&variant_)) {
      const auto& h = zoll->h;
      return h.quotient_derivative(z) * (2.0 + h.value(z)) + h.quotient(z) * h.derivative(z);
    }
    return 0.0;
  }

  // g_p(u, v) without precondition checks. The Zoll correction is dropped
  // within 1e-8 of the poles, where its limit is zero.
  double dot(const Vec3& p, const Vec3& u, const Vec3& v) const noexcept {
    double g = scale_ * zollab::dot(u, v);
    if (constant_axial_ != 0.0) {
      g += constant_axial_ * (u.z * v.z);
    } else if (family() == MetricFamily::kZoll && std::abs(p.z) <= 1.0 - 1e-8) {
      g += axial(p.z) * (u.z * v.z);
    }
    return g;
  }

  double norm(const Vec3& p, const Vec3& u) const noexcept { return std::sqrt(dot(p, u, u)); }

  // Speed of the meridian parametrized by polar angle t in [0, pi].
  double meridian_speed(double t) const noexcept {
    const double s = std::sin(t);
    return std::sqrt(scale_ + axial(std::cos(t)) * s * s);
  }

  // Tangential part of the geodesic acceleration: unit-speed geodesics
  // satisfy x'' = geodesic_correction(x, x') - |x'|^2 x.
  Vec3 geodesic_correction(const Vec3& p, const Vec3& v) const noexcept {
    const double z = p.z;
    const double beta = axial(z);
    const double coeff =
        (zollab::dot(v, v) * beta * z - 0.5 * axial_derivative(z) * v.z * v.z) /
        (scale_ + beta * (1.0 - z * z));
    return coeff * Vec3{-z * p.x, -z * p.y, 1.0 - z * p.z};
  }

 private:
  Variant variant_;
  double scale_ = 1.0;
  double constant_axial_ = 0.0;
};

namespace detail {

inline void require_on_sphere(const Vec3& p) {
  if (std::abs(norm(p) - 1.0) > kSphereTolerance) {
    throw PreconditionError("point is not on the unit sphere");
  }
}

inline void require_tangent(const Vec3& p, const Vec3& u) {
  if (std::abs(dot(p, u)) > kSphereTolerance * std::max(1.0, norm(u))) {
    throw PreconditionError("vector is not tangent to the sphere at the base point");
  }
}

}  // namespace detail

// g_p(u, v) with preconditions: |p| = 1 and u, v tangent at p (1e-9).
inline double metric_eval(const MetricSpec& spec, const Vec3& p, const Vec3& u, const Vec3& v) {
  detail::require_on_sphere(p);
  detail::require_tangent(p, u);
  detail::require_tangent(p, v);
  return spec.dot(p, u, v);
}

// Closed-form tangential geodesic correction (see MetricSpec::geodesic_correction).
inline Vec3 covariant_acceleration(const MetricSpec& spec, const Vec3& p, const Vec3& v) {
  detail::require_on_sphere(p);
  detail::require_tangent(p, v);
  if (norm(v) == 0.0) {
    throw PreconditionError("covariant acceleration needs a nonzero velocity");
  }
  return spec.geodesic_correction(p, v);
}

// Same quantity, built only from metric_eval: Christoffel symbols of the
// polar chart (t, phi) by central differences with step 1e-5. Not defined
// at the poles.
inline Vec3 covariant_acceleration_fd(const MetricSpec& spec, const Vec3& p, const Vec3& v,
                                      double step = 1e-5) {
  detail::require_on_sphere(p);
  detail::require_tangent(p, v);
  if (std::abs(p.z) > 1.0 - 1e-6) {
    throw PreconditionError("finite-difference Christoffel data undefined at the poles");
  }
  const double t0 = std::acos(std::clamp(p.z, -1.0, 1.0));
  const double phi0 = std::atan2(p.y, p.x);

  struct Chart {
    Vec3 x, dt, dphi;
  };
  auto chart = [](double t, double phi) {
    const double st = std::sin(t), ct = std::cos(t), sp = std::sin(phi), cp = std::cos(phi);
    return Chart{{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-st * sp, st * cp, 0.0}};
  };
  // Metric components (g_tt, g_tphi, g_phiphi).
  auto components = [&](double t, double phi) {
    const Chart c = chart(t, phi);
    return std::array<double, 3>{spec.dot(c.x, c.dt, c.dt), spec.dot(c.x, c.dt, c.dphi),
                                 spec.dot(c.x, c.dphi, c.dphi)};
  };

  const auto g = components(t0, phi0);
  std::array<std::array<double, 3>, 2> dg{};  // dg[k] = d/dq^k of (g_tt, g_tphi, g_phiphi)
  {
    const auto gp = components(t0 + step, phi0);
    const auto gm = components(t0 - step, phi0);
    const auto hp = components(t0, phi0 + step);
    const auto hm = components(t0, phi0 - step);
    for (int i = 0; i < 3; ++i) {
      dg[0][i] = (gp[i] - gm[i]) / (2.0 * step);
      dg[1][i] = (hp[i] - hm[i]) / (2.0 * step);
    }
  }
  auto dcomp = [&](int k, int i, int j) { return dg[k][i + j]; };

  const double det = g[0] * g[2] - g[1] * g[1];
  const double inv[2][2] = {{g[2] / det, -g[1] / det}, {-g[1] / det, g[0] / det}};

  double gamma[2][2][2] = {};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 2; ++l) {
          acc += inv[k][l] * (dcomp(i, j, l) + dcomp(j, i, l) - dcomp(l, i, j));
        }
        gamma[k][i][j] = 0.5 * acc;
      }
    }
  }

  const Chart c = chart(t0, phi0);
  const double qd[2] = {dot(v, c.dt) / dot(c.dt, c.dt), dot(v, c.dphi) / dot(c.dphi, c.dphi)};
  double qdd[2] = {};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        qdd[k] -= gamma[k][i][j] * qd[i] * qd[j];
      }
    }
  }
  const double st = std::sin(t0), ct = std::cos(t0), sp = std::sin(phi0), cp = std::cos(phi0);
  const Vec3 x_tt = -c.x;
  const Vec3 x_tphi{-ct * sp, ct * cp, 0.0};
  const Vec3 x_phiphi{-st * cp, -st * sp, 0.0};
  const Vec3 accel = qdd[0] * c.dt + qdd[1] * c.dphi + qd[0] * qd[0] * x_tt +
                     2.0 * qd[0] * qd[1] * x_tphi + qd[1] * qd[1] * x_phiphi;
  return project_tangent(p, accel);
}

// Length of the closed meridian through both poles. Composite Simpson on
// [0, pi], doubled until successive estimates differ by less than 1e-10.
inline double meridian_length(const MetricSpec& spec) {
  const double a = 0.0, b = std::numbers::pi;
  auto simpson = [&](int intervals) {
    const double h = (b - a) / intervals;
    double acc = spec.meridian_speed(a) + spec.meridian_speed(b);
    for (int i = 1; i < intervals; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * spec.meridian_speed(a + i * h);
    }
    return acc * h / 3.0;
  };
  int intervals = 16;
  double previous = simpson(intervals);
  for (int iter = 0; iter < 24; ++iter) {
    intervals *= 2;
    const double current = simpson(intervals);
    if (std::abs(current - previous) < 1e-10) {
      return 2.0 * current;
    }
    previous = current;
  }
  return 2.0 * previous;
}

}  // namespace zollab
