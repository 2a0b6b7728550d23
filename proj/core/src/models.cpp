#include "spectralgap/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "spectralgap/errors.hpp"

namespace spectralgap {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(double K, double N) {
  std::ostringstream os;
  os.precision(17);
  os << "(K=" << K << ", N=" << N << ")";
  return os.str();
}

}  // namespace

CurvatureDimension::CurvatureDimension(double K, double N) : K_(K), N_(N) {
  if (!std::isfinite(K) || !std::isfinite(N)) {
    throw PreconditionError("curvature-dimension pair must be finite " + describe(K, N));
  }
  if (N < 1.0) {
    throw PreconditionError("dimension bound N must be >= 1 " + describe(K, N));
  }
  if (K > 0.0 && N == 1.0) {
    throw PreconditionError("K > 0 with N = 1 is not admissible " + describe(K, N));
  }
}

double CurvatureDimension::L() const {
  if (N_ == 1.0) throw DomainError("L = K/(N-1) undefined for N = 1");
  return K_ / (N_ - 1.0);
}

std::optional<double> d_max(const CurvatureDimension& cd) {
  if (cd.K() > 0.0 && cd.N() > 1.0) return kPi * std::sqrt((cd.N() - 1.0) / cd.K());
  return std::nullopt;
}

double drift_T(const CurvatureDimension& cd, double x) {
  if (cd.N() == 1.0) throw DomainError("drift T undefined for N = 1");
  const double L = cd.L();
  if (L == 0.0) return 0.0;
  if (L > 0.0) {
    const double s = std::sqrt(L);
    if (std::abs(s * x) >= 0.5 * kPi) throw DomainError("drift T evaluated at or beyond tan singularity");
    return s * std::tan(s * x);
  }
  // K < 0: weight cosh^{N-1}, hence T = -sqrt(-L) tanh(sqrt(-L) x).
  const double s = std::sqrt(-L);
  return -s * std::tanh(s * x);
}

double weight_rho(const CurvatureDimension& cd, double x) {
  if (cd.N() == 1.0 || cd.K() == 0.0) return 1.0;
  const double p = cd.N() - 1.0;
  const double L = cd.L();
  if (L > 0.0) {
    const double s = std::sqrt(L);
    if (std::abs(s * x) > 0.5 * kPi * (1.0 + 1e-14)) throw DomainError("weight evaluated outside model domain");
    return std::pow(std::max(0.0, std::cos(s * x)), p);
  }
  return std::pow(std::cosh(std::sqrt(-L) * x), p);
}

SymmetricModel::SymmetricModel(CurvatureDimension cd, double d)
    : cd_(cd), d_(d), endpoint_(EndpointKind::Regular) {
  if (!(d > 0.0) || !std::isfinite(d)) throw PreconditionError("interval length d must be positive and finite");
  if (const auto dm = d_max(cd_)) {
    if (d_ > *dm * (1.0 + 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "d = " << d_ << " exceeds d_max = " << *dm << " for " << describe(cd_.K(), cd_.N());
      throw PreconditionError(os.str());
    }
    if (d_ >= *dm * (1.0 - 1e-12)) {
      d_ = *dm;
      endpoint_ = EndpointKind::Singular;
    }
  }
}

double SymmetricModel::drift(double x) const {
  if (cd_.drift_free()) return 0.0;
  return (cd_.N() - 1.0) * drift_T(cd_, x);
}

double SymmetricModel::weight(double x) const { return weight_rho(cd_, x); }

SingularEndpoint SymmetricModel::singular_endpoint(Side side) const {
  if (endpoint_ != EndpointKind::Singular) throw DomainError("symmetric model endpoints are regular");
  const double p = cd_.N() - 1.0;
  return {side == Side::Left ? left() : right(), side, p, -p * cd_.L() / 3.0};
}

OneSidedModel::OneSidedModel(double R, double l) : R_(R), l_(l) {
  if (!std::isfinite(R) || !std::isfinite(l) || !(l > 1.0)) {
    throw PreconditionError("one-sided model needs finite R and l > 1");
  }
  family_ = R > 0.0 ? OneSidedFamily::Trig : (R == 0.0 ? OneSidedFamily::Power : OneSidedFamily::Hyperbolic);
}

double OneSidedModel::a() const {
  return family_ == OneSidedFamily::Trig ? -kPi / (2.0 * std::sqrt(L())) : 0.0;
}

double OneSidedModel::right_end() const {
  return family_ == OneSidedFamily::Trig ? -a() : std::numeric_limits<double>::infinity();
}

double OneSidedModel::drift(double s) const {
  const double p = l_ - 1.0;
  switch (family_) {
    case OneSidedFamily::Trig: {
      const double r = std::sqrt(L());
      if (std::abs(r * s) >= 0.5 * kPi) throw DomainError("one-sided drift at singular endpoint");
      return p * r * std::tan(r * s);
    }
    case OneSidedFamily::Power:
      if (!(s > 0.0)) throw DomainError("one-sided drift at singular endpoint");
      return -p / s;
    case OneSidedFamily::Hyperbolic: {
      if (!(s > 0.0)) throw DomainError("one-sided drift at singular endpoint");
      const double r = std::sqrt(-L());
      return -p * r / std::tanh(r * s);
    }
  }
  return 0.0;
}

SingularEndpoint OneSidedModel::left_endpoint() const {
  const double p = l_ - 1.0;
  return {a(), Side::Left, p, -p * L() / 3.0};
}

SingularEndpoint OneSidedModel::right_endpoint() const {
  if (family_ != OneSidedFamily::Trig) throw DomainError("only the Trig family has a singular right endpoint");
  const double p = l_ - 1.0;
  return {right_end(), Side::Right, p, -p * L() / 3.0};
}

double one_sided_density(const OneSidedModel& model, double s) {
  const double p = model.l() - 1.0;
  const double a = model.a();
  if (!(s >= a) || s > model.right_end()) throw DomainError("density evaluated outside the family domain");
  switch (model.family()) {
    case OneSidedFamily::Trig: {
      if (s == a || s == model.right_end()) return 0.0;
      return std::pow(std::max(0.0, std::cos(std::sqrt(model.L()) * s)), p);
    }
    case OneSidedFamily::Power:
      return std::pow(s, p);
    case OneSidedFamily::Hyperbolic:
      return std::pow(std::sinh(std::sqrt(-model.L()) * s), p);
  }
  return 0.0;
}

namespace {

struct SeriesCoefficients {
  double c1, c2, c3;
};

SeriesCoefficients series(const SingularEndpoint& e, double lambda) {
  const double p = e.exponent;
  const double q = e.regular_slope;
  const double c1 = -lambda / (2.0 * (p + 1.0));
  const double c2 = -(lambda + 2.0 * q) * c1 / (4.0 * (p + 3.0));
  // The t^3 drift coefficient of sin^p and sinh^p weights is -q^2/(5p);
  // it first enters at c3.
  const double r = p > 0.0 ? -q * q / (5.0 * p) : 0.0;
  const double c3 = -((lambda + 4.0 * q) * c2 + 2.0 * r * c1) / (6.0 * (p + 5.0));
  return {c1, c2, c3};
}

double inward_sign(Side side) { return side == Side::Left ? 1.0 : -1.0; }

}  // namespace

double frobenius_truncation(const SingularEndpoint& endpoint, double lambda, double v0, double h0) {
  const auto c = series(endpoint, lambda);
  return std::abs(v0 * c.c3) * std::pow(h0, 6);
}

std::pair<double, double> frobenius_start(const SingularEndpoint& endpoint, double lambda, double v0,
                                          double h0, double max_error) {
  if (!(h0 > 0.0)) throw PreconditionError("Frobenius offset h0 must be positive");
  if (max_error > 0.0 && frobenius_truncation(endpoint, lambda, v0, h0) > max_error) {
    throw PreconditionError("Frobenius offset h0 too large for requested tolerance");
  }
  const auto c = series(endpoint, lambda);
  const double t2 = h0 * h0;
  const double v = v0 * (1.0 + t2 * (c.c1 + t2 * c.c2));
  const double dvdt = v0 * h0 * (2.0 * c.c1 + 4.0 * c.c2 * t2);
  return {v, inward_sign(endpoint.side) * dvdt};
}

double frobenius_offset(const SingularEndpoint& endpoint, double lambda, double length, double abs_tol,
                        double start_fraction) {
  double h0 = start_fraction * length;
  while (h0 > 1e-12 * length && frobenius_truncation(endpoint, lambda, 1.0, h0) > abs_tol) h0 *= 0.5;
  return h0;
}

double frobenius_regular_slope(const SingularEndpoint& endpoint, double lambda, double v, double h0) {
  const auto c = series(endpoint, lambda);
  const double t2 = h0 * h0;
  const double amplitude = v / (1.0 + t2 * (c.c1 + t2 * c.c2));
  return inward_sign(endpoint.side) * amplitude * h0 * (2.0 * c.c1 + 4.0 * c.c2 * t2);
}

}  // namespace spectralgap
