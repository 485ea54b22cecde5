#pragma once

// Closed-form ε calculators for GHZ and graph-state verification, and the
// translation of a verification ε into a realization distance.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "graphmerge/errors.hpp"

namespace graphmerge::bounds {

using Rational = boost::multiprecision::cpp_rational;
using Float50 = boost::multiprecision::cpp_bin_float_50;

/// 2√(2ε − ε²) for ε ∈ [0, 1].
inline double realization_bound(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw OutOfRange("realization bound needs 0 <= eps <= 1, got " + std::to_string(eps));
  }
  return 2.0 * std::sqrt(eps * (2.0 - eps));
}

namespace detail {

inline void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw OutOfRange(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

} // namespace detail

/// p·(1 − F).
inline double translate_fidelity(double p, double fidelity) {
  detail::check_unit(p, "p");
  detail::check_unit(fidelity, "fidelity");
  return p * (1.0 - fidelity);
}

/// δ + η².
inline double translate_eta_delta(double eta, double delta) {
  detail::check_unit(eta, "eta");
  detail::check_unit(delta, "delta");
  return delta + eta * eta;
}

struct BoundResult {
  double epsilon = 0.0;
  /// Absent when ε lies outside [0, 1].
  std::optional<double> realization_epsilon;
  bool out_of_range = false;

  void finish() {
    out_of_range = !(epsilon >= 0.0 && epsilon <= 1.0);
    if (!out_of_range) realization_epsilon = realization_bound(epsilon);
  }
};

struct GhzBound : BoundResult {
  /// (4n+1)/2^{S/2} exactly; present when S is even.
  std::optional<Rational> exact;
};

/// ε = (4n + 1) / 2^{S/2}.
inline GhzBound ghz_epsilon(std::uint64_t n, std::uint64_t S) {
  if (n < 1) throw InvalidParameters("GHZ bound needs n >= 1");
  GhzBound out;
  if (S % 2 == 0) {
    Rational r(boost::multiprecision::cpp_int(4 * n + 1));
    r /= boost::multiprecision::cpp_int(1) << static_cast<unsigned>(S / 2);
    out.exact = r;
    out.epsilon = static_cast<double>(r);
  } else {
    out.epsilon = static_cast<double>(4 * n + 1) * std::exp2(-static_cast<double>(S) / 2.0);
  }
  out.finish();
  return out;
}

struct GraphBoundInput {
  double J = 0.0;
  std::uint64_t lambda = 0;
  double c = 0.0;
  double m = 0.0;
  double n = 0.0;
};

struct GraphBound : BoundResult {
  double sum = 0.0;           // Σ_{x=0}^{λ} (1−1/n)^x ((1/n)·J^{−2cm/3})^{λ−x}
  double p0 = 0.0;            // (1 − sum)^J
  double one_minus_p0 = 0.0;  // kept separately, p0 is often 1 − tiny
  double eta0 = 0.0;          // (1/λ − 1/λ²) + (1+1/λ)(√c + 1/2)/J
};

namespace detail {

inline void check_graph_input(const GraphBoundInput& in) {
  if (!(in.J > 0.0 && in.c > 0.0 && in.m > 0.0 && in.n >= 1.0 && in.lambda >= 1)) {
    throw InvalidParameters("graph bound needs J, c, m > 0, n >= 1 and lambda >= 1");
  }
}

inline void check_graph_output(double p0, double eta0) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) {
    throw InvalidParameters("p0 = " + std::to_string(p0) + " lies outside [0, 1]");
  }
  if (!(eta0 >= 0.0)) throw InvalidParameters("eta0 = " + std::to_string(eta0) + " is negative");
}

/// Neumaier compensated sum.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
    else comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace detail

/// ε = 1 − p₀ + 2η₀ − η₀². Terms are formed in log space so that the
/// (1−1/n)^x and J^{−2cm/3} powers do not underflow to zero prematurely.
inline GraphBound graph_epsilon(const GraphBoundInput& in) {
  detail::check_graph_input(in);
  const double lam = static_cast<double>(in.lambda);
  const double log_q = -std::log(in.n) - (2.0 * in.c * in.m / 3.0) * std::log(in.J);
  detail::CompensatedSum acc;
  if (in.n == 1.0) {
    acc.add(std::exp(lam * log_q)); // only x = 0 survives
  } else {
    const double log_a = std::log1p(-1.0 / in.n);
    for (std::uint64_t x = 0; x <= in.lambda; ++x) {
      const double xd = static_cast<double>(x);
      acc.add(std::exp(xd * log_a + (lam - xd) * log_q));
    }
  }
  GraphBound out;
  out.sum = acc.value();
  if (out.sum > 1.0) {
    throw InvalidParameters("sum " + std::to_string(out.sum) + " exceeds 1, so p0 is undefined");
  }
  out.one_minus_p0 = -std::expm1(in.J * std::log1p(-out.sum));
  out.p0 = 1.0 - out.one_minus_p0;
  out.eta0 = (1.0 / lam - 1.0 / (lam * lam)) + (1.0 + 1.0 / lam) * (std::sqrt(in.c) + 0.5) / in.J;
  detail::check_graph_output(out.p0, out.eta0);
  out.epsilon = out.one_minus_p0 + 2.0 * out.eta0 - out.eta0 * out.eta0;
  out.finish();
  return out;
}

struct GraphBoundHp {
  Float50 sum;
  Float50 one_minus_p0;
  Float50 eta0;
  Float50 epsilon;
};

/// The same quantities in 50-digit binary floating point, summed directly.
inline GraphBoundHp graph_epsilon_high_precision(const GraphBoundInput& in) {
  detail::check_graph_input(in);
  const Float50 J(in.J);
  const Float50 n(in.n);
  const Float50 lam(in.lambda);
  const Float50 one(1);
  const Float50 q = (one / n) * pow(J, -(Float50(2) * Float50(in.c) * Float50(in.m) / 3));
  const Float50 a = one - one / n;
  GraphBoundHp out;
  for (std::uint64_t x = 0; x <= in.lambda; ++x) {
    const Float50 ax = x == 0 ? one : Float50(pow(a, static_cast<int>(x)));
    out.sum += ax * pow(q, static_cast<int>(in.lambda - x));
  }
  if (out.sum > one) throw InvalidParameters("sum exceeds 1, so p0 is undefined");
  out.one_minus_p0 = one - pow(one - out.sum, J);
  out.eta0 = (one / lam - one / (lam * lam)) + (one + one / lam) * (sqrt(Float50(in.c)) + Float50(0.5)) / J;
  detail::check_graph_output(static_cast<double>(one - out.one_minus_p0), static_cast<double>(out.eta0));
  out.epsilon = out.one_minus_p0 + 2 * out.eta0 - out.eta0 * out.eta0;
  return out;
}

/// Relative agreement of the fast and high-precision paths, in significant digits.
inline double agreeing_digits(double fast, const Float50& precise) {
  if (precise == 0) return fast == 0.0 ? 50.0 : 0.0;
  const Float50 rel = abs((Float50(fast) - precise) / precise);
  if (rel == 0) return 50.0;
  return -static_cast<double>(log10(rel));
}

} // namespace graphmerge::bounds
