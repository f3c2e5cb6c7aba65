#include "pblab/reg_sum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>

namespace pblab {

namespace {

#if defined(__SIZEOF_FLOAT128__) && !defined(__clang__)
using Wide = __float128;
#else
using Wide = long double;
#endif

Wide wide_abs(Wide x) { return x < 0 ? -x : x; }

// Beyond this degree the damped partial sums at eta_max cancel too much even
// in the wide type for the cross-check to mean anything.
constexpr int kMaxCrossCheckDegree = 8;

}  // namespace

std::string to_string(SumMethod m) {
  switch (m) {
    case SumMethod::ordinary: return "ordinary";
    case SumMethod::abel_numeric: return "abel_numeric";
    case SumMethod::abel_exact: return "abel_exact";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Exact values

Rational bernoulli(int n) {
  if (n < 0) throw ArgumentError("bernoulli: negative index");
  static std::mutex mutex;
  static std::vector<Rational> cache{Rational(1)};
  std::lock_guard lock(mutex);
  while (static_cast<int>(cache.size()) <= n) {
    const int m = static_cast<int>(cache.size());
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rational acc = 0;
    boost::multiprecision::cpp_int binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      acc += Rational(binom) * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    cache.push_back(-acc / (m + 1));
  }
  return cache[n];
}

Rational abel_exact_alternating(int mono_degree) {
  if (mono_degree < 0) throw ArgumentError("abel_exact_alternating: negative degree");
  if (mono_degree == 0) return Rational(1, 2);
  const int m = mono_degree;
  const boost::multiprecision::cpp_int pow2 = boost::multiprecision::cpp_int(1) << (m + 1);
  return -Rational(pow2 - 1) * bernoulli(m + 1) / (m + 1);
}

cplx abel_exact_polynomial(std::span<const cplx> monomial_coeffs) {
  cplx acc{};
  for (std::size_t m = 0; m < monomial_coeffs.size(); ++m) {
    if (monomial_coeffs[m] == cplx{}) continue;
    acc += monomial_coeffs[m] * abel_exact_alternating(static_cast<int>(m)).convert_to<double>();
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Numeric

std::vector<double> default_eta_schedule() { return {0.90, 0.925, 0.95, 0.97, 0.985, 0.995}; }

namespace {

void validate_schedule(std::span<const double> eta) {
  if (eta.size() < 2) throw ArgumentError("abel_numeric: schedule needs at least two points");
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(eta[i] > 0.0 && eta[i] < 1.0)) throw ArgumentError("abel_numeric: eta outside (0,1)");
    if (i > 0 && !(eta[i] > eta[i - 1])) {
      throw ArgumentError("abel_numeric: schedule must be strictly increasing");
    }
  }
}

// Polynomial through (t_i, y_i) evaluated at t = 0 (Neville).
Wide neville_at_zero(std::span<const Wide> t, std::vector<Wide> y) {
  const std::size_t n = t.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      y[i] = (t[i + level] * y[i] - t[i] * y[i + 1]) / (t[i + level] - t[i]);
    }
  }
  return y[0];
}

constexpr std::int64_t kTailWindow = 64;

struct WideTerm {
  Wide re = 0;
  Wide im = 0;
  double magnitude() const {
    return std::hypot(static_cast<double>(re), static_cast<double>(im));
  }
};

// Shared driver; `term(k)` yields WideTerm so callers that know the series
// symbolically can avoid rounding every term to double first.
template <class TermGetter>
RegularizedSum abel_numeric_impl(TermGetter&& term, std::span<const double> eta_schedule,
                                 const AbelNumericOptions& options,
                                 std::optional<std::int64_t> available) {
  validate_schedule(eta_schedule);
  const double eta_max = eta_schedule.back();
  const double log_eta = std::log(eta_max);
  const double tail_factor = 1.0 / (1.0 - eta_max);
  auto damped_tail = [&](const WideTerm& c, std::int64_t k) {
    return c.magnitude() * std::exp(static_cast<double>(k) * log_eta) * tail_factor;
  };

  std::vector<WideTerm> c;
  if (options.truncation) {
    const std::int64_t K = *options.truncation;
    if (K < 1) throw ArgumentError("abel_numeric: truncation must be positive");
    if (available && K > *available) {
      throw TruncationError("abel_numeric: truncation " + std::to_string(K) + " exceeds the " +
                                std::to_string(*available) + " available terms",
                            *available);
    }
    c.reserve(static_cast<std::size_t>(K));
    for (std::int64_t k = 0; k < K; ++k) c.push_back(term(k));
    double worst = 0.0;
    for (std::int64_t k = std::max<std::int64_t>(0, K - kTailWindow); k < K; ++k) {
      worst = std::max(worst, damped_tail(c[k], k));
    }
    if (worst > options.tail_tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "abel_numeric: damped tail %.3g at eta=%.4g has not decayed below %.3g "
                    "within K=%lld terms",
                    worst, eta_max, options.tail_tol, static_cast<long long>(K));
      throw TruncationError(buf, available.value_or(K));
    }
  } else {
    const std::int64_t limit = std::min(available.value_or(options.max_terms), options.max_terms);
    std::int64_t quiet = 0;
    for (std::int64_t k = 0; k < limit; ++k) {
      c.push_back(term(k));
      quiet = damped_tail(c.back(), k) <= options.tail_tol ? quiet + 1 : 0;
      if (quiet >= kTailWindow && k >= 2 * kTailWindow) break;
    }
    if (quiet < kTailWindow || static_cast<std::int64_t>(c.size()) < 2 * kTailWindow) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "abel_numeric: damped tail at eta=%.4g did not fall below %.3g within %lld "
                    "terms",
                    eta_max, options.tail_tol, static_cast<long long>(c.size()));
      throw TruncationError(buf, available.value_or(static_cast<std::int64_t>(c.size())));
    }
  }

  std::vector<Wide> t(eta_schedule.size());
  std::vector<Wide> re(eta_schedule.size());
  std::vector<Wide> im(eta_schedule.size());
  for (std::size_t i = 0; i < eta_schedule.size(); ++i) {
    const Wide eta = static_cast<Wide>(eta_schedule[i]);
    t[i] = Wide(1) - eta;
    Wide p = 1;
    Wide sr = 0;
    Wide si = 0;
    for (const WideTerm& ck : c) {
      sr += p * ck.re;
      si += p * ck.im;
      p *= eta;
    }
    re[i] = sr;
    im[i] = si;
  }
  const Wide vr = neville_at_zero(t, re);
  const Wide vi = neville_at_zero(t, im);
  // Dropping the point farthest from eta = 1 estimates extrapolation error.
  const auto t_short = std::span<const Wide>(t).subspan(1);
  const Wide rr = neville_at_zero(t_short, {re.begin() + 1, re.end()});
  const Wide ri = neville_at_zero(t_short, {im.begin() + 1, im.end()});

  RegularizedSum out;
  out.value = {static_cast<double>(vr), static_cast<double>(vi)};
  out.method = SumMethod::abel_numeric;
  out.diagnostics.terms_used = static_cast<std::int64_t>(c.size());
  out.diagnostics.eta_schedule.assign(eta_schedule.begin(), eta_schedule.end());
  out.diagnostics.extrapolation_residual =
      std::hypot(static_cast<double>(wide_abs(vr - rr)), static_cast<double>(wide_abs(vi - ri)));
  return out;
}

}  // namespace

RegularizedSum abel_numeric(const TermFn& terms, std::span<const double> eta_schedule,
                            const AbelNumericOptions& options,
                            std::optional<std::int64_t> available) {
  auto get = [&](std::int64_t k) {
    const cplx z = terms(k);
    return WideTerm{static_cast<Wide>(z.real()), static_cast<Wide>(z.imag())};
  };
  return abel_numeric_impl(get, eta_schedule, options, available);
}

RegularizedSum abel_numeric_alternating(std::span<const cplx> monomial_coeffs,
                                        std::span<const double> eta_schedule,
                                        const AbelNumericOptions& options) {
  std::vector<Wide> cr, ci;
  for (const auto& z : monomial_coeffs) {
    cr.push_back(static_cast<Wide>(z.real()));
    ci.push_back(static_cast<Wide>(z.imag()));
  }
  auto get = [&](std::int64_t k) {
    const Wide x = static_cast<Wide>(k);
    WideTerm w;
    for (std::size_t m = cr.size(); m-- > 0;) {
      w.re = w.re * x + cr[m];
      w.im = w.im * x + ci[m];
    }
    if (k % 2 != 0) {
      w.re = -w.re;
      w.im = -w.im;
    }
    return w;
  };
  return abel_numeric_impl(get, eta_schedule, options, std::nullopt);
}

// ---------------------------------------------------------------------------
// Patterns

cplx PolynomialPattern::term(std::int64_t s) const {
  if (s < offset || (s - offset) % stride != 0) return {};
  const std::int64_t k = (s - offset) / stride;
  cplx p{};
  for (auto it = monomial_coeffs.rbegin(); it != monomial_coeffs.rend(); ++it) {
    p = p * static_cast<double>(k) + *it;
  }
  return (sign < 0 && (k % 2 != 0)) ? -p : p;
}

std::string PolynomialPattern::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s * poly(degree %d) on s = %d + %d k",
                sign < 0 ? "(-1)^k" : "(+1)^k", degree(), offset, stride);
  return buf;
}

namespace {

// Signed Stirling numbers of the first kind s(j, m), j, m <= n.
std::vector<std::vector<double>> stirling_first(int n) {
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(n + 1, 0.0));
  s[0][0] = 1.0;
  for (int j = 0; j < n; ++j) {
    for (int m = 0; m <= j + 1; ++m) {
      const double from_lower = m > 0 ? s[j][m - 1] : 0.0;
      s[j + 1][m] = from_lower - j * s[j][m];
    }
  }
  return s;
}

// Minimal-degree polynomial through u_0..u_{n-1}, as monomial coefficients.
std::optional<std::vector<cplx>> fit_polynomial(const std::vector<cplx>& u,
                                                const PatternOptions& opt) {
  const int n = static_cast<int>(u.size());
  double umax = 0.0;
  for (const auto& z : u) umax = std::max(umax, std::abs(z));
  if (umax == 0.0) return std::vector<cplx>{cplx{}};

  std::vector<cplx> level = u;
  std::vector<cplx> leading{u[0]};  // Delta^j u_0
  for (int degree = 0; degree <= opt.max_degree; ++degree) {
    if (n < degree + 1 + opt.verify_terms) return std::nullopt;
    // next difference level = Delta^{degree+1}
    std::vector<cplx> next(level.size() - 1);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) next[i] = level[i + 1] - level[i];
    // Delta^{d} u_i spans u_i .. u_{i+d}; compare with those magnitudes only,
    // so large late terms cannot hide a nonzero difference among small ones.
    const int span = degree + 1;
    bool vanishes = true;
    for (std::size_t i = 0; i < next.size() && vanishes; ++i) {
      double local = 0.0;
      for (int r = 0; r <= span; ++r) local = std::max(local, std::abs(u[i + r]));
      vanishes = std::abs(next[i]) <= opt.tol * std::ldexp(local, span);
    }
    if (vanishes) {
      const auto s = stirling_first(degree);
      std::vector<cplx> coeffs(degree + 1);
      double factorial = 1.0;
      for (int j = 0; j <= degree; ++j) {
        if (j > 0) factorial *= j;
        for (int m = 0; m <= j; ++m) coeffs[m] += leading[j] * (s[j][m] / factorial);
      }
      return coeffs;
    }
    level = std::move(next);
    leading.push_back(level[0]);
  }
  return std::nullopt;
}

}  // namespace

std::optional<PolynomialPattern> detect_polynomial_pattern(std::span<const cplx> terms,
                                                           const PatternOptions& options) {
  double scale = 0.0;
  for (const auto& z : terms) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return std::nullopt;
  const double zero_tol = 1e-13 * scale;

  std::vector<int> nz;
  for (std::size_t s = 0; s < terms.size(); ++s) {
    if (std::abs(terms[s]) > zero_tol) nz.push_back(static_cast<int>(s));
  }
  if (nz.size() < 2) return std::nullopt;
  int g = 0;
  for (int s : nz) g = std::gcd(g, s - nz.front());

  std::optional<PolynomialPattern> best;
  for (int d = 1; d <= g; ++d) {
    if (g % d != 0) continue;
    const int off = nz.front() % d;
    std::vector<cplx> sub;
    for (std::size_t s = off; s < terms.size(); s += d) sub.push_back(terms[s]);
    for (int sign : {-1, +1}) {
      std::vector<cplx> u(sub.size());
      for (std::size_t k = 0; k < sub.size(); ++k) u[k] = (sign < 0 && k % 2) ? -sub[k] : sub[k];
      auto coeffs = fit_polynomial(u, options);
      if (!coeffs) continue;
      PolynomialPattern p{off, d, sign, std::move(*coeffs)};
      if (!best || p.degree() < best->degree()) best = std::move(p);
    }
    if (best) return best;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Classification

Series Series::finite(std::vector<cplx> terms) {
  const auto n = static_cast<std::int64_t>(terms.size());
  auto shared = std::make_shared<std::vector<cplx>>(std::move(terms));
  return {[shared](std::int64_t k) {
            return k < static_cast<std::int64_t>(shared->size()) ? (*shared)[k] : cplx{};
          },
          n, std::nullopt, false};
}

Series Series::exact_finite(std::vector<cplx> terms) {
  Series s = finite(std::move(terms));
  s.zero_beyond = true;
  return s;
}

Series Series::alternating_polynomial(std::vector<cplx> monomial_coeffs) {
  PolynomialPattern p{0, 1, -1, std::move(monomial_coeffs)};
  auto fn = [p](std::int64_t k) { return p.term(k); };
  return {fn, std::nullopt, p, false};
}

std::optional<RegularizedSum> try_ordinary(const Series& series, const ClassifyOptions& options) {
  const std::int64_t n = series.available.value_or(options.ordinary_terms);
  RegularizedSum out;
  out.method = SumMethod::ordinary;
  out.diagnostics.terms_used = n;
  if (n == 0) return out;
  if (series.zero_beyond && series.available) {
    for (std::int64_t k = 0; k < n; ++k) out.value += series.term(k);
    return out;
  }

  std::vector<cplx> c(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) c[k] = series.term(k);
  cplx sum{};
  for (const auto& z : c) sum += z;
  const std::int64_t window = std::max<std::int64_t>(4, n / 4);
  double tail = 0.0;
  for (std::int64_t k = std::max<std::int64_t>(0, n - window); k < n; ++k) tail += std::abs(c[k]);
  // A short finite series with a nonzero last term says nothing about decay.
  if (n <= window && std::abs(c.back()) != 0.0) return std::nullopt;
  if (tail > options.ordinary_tol * std::max(1.0, std::abs(sum))) return std::nullopt;
  out.value = sum;
  return out;
}

RegularizedSum classify_and_sum(const Series& series, const ClassifyOptions& options) {
  if (auto ord = try_ordinary(series, options)) return *ord;

  std::optional<PolynomialPattern> pattern = series.hint;
  const std::int64_t prefix = std::min<std::int64_t>(series.available.value_or(256), 256);
  std::vector<cplx> head(static_cast<std::size_t>(prefix));
  for (std::int64_t k = 0; k < prefix; ++k) head[k] = series.term(k);

  if (pattern) {
    double scale = 0.0;
    for (const auto& z : head) scale = std::max(scale, std::abs(z));
    for (std::int64_t k = 0; k < prefix; ++k) {
      if (std::abs(head[k] - pattern->term(k)) > 1e-9 * std::max(1.0, scale)) {
        throw ArgumentError("classify_and_sum: hint disagrees with term " + std::to_string(k));
      }
    }
  } else if (options.detect_pattern) {
    pattern = detect_polynomial_pattern(head);
  }

  if (pattern) {
    if (pattern->sign > 0) {
      throw NotSummableError("terms follow " + pattern->describe() +
                             " with no alternation; the Abel limit diverges");
    }
    RegularizedSum out;
    out.value = abel_exact_polynomial(pattern->monomial_coeffs);
    out.method = SumMethod::abel_exact;
    out.diagnostics.pattern = pattern->describe();
    out.diagnostics.terms_used = prefix;
    if (options.cross_check && pattern->degree() <= kMaxCrossCheckDegree) {
      const auto numeric = abel_numeric_alternating(pattern->monomial_coeffs,
                                                    options.eta_schedule, options.numeric);
      const double residual = std::abs(numeric.value - out.value);
      out.diagnostics.cross_check_residual = residual;
      out.diagnostics.eta_schedule = numeric.diagnostics.eta_schedule;
      out.diagnostics.extrapolation_residual = numeric.diagnostics.extrapolation_residual;
      const double allowed = std::max(options.cross_check_tol * std::max(1.0, std::abs(out.value)),
                                      10.0 * numeric.diagnostics.extrapolation_residual);
      if (residual > allowed) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "classify_and_sum: exact %.12g and numeric %.12g Abel values disagree",
                      out.value.real(), numeric.value.real());
        throw AccuracyError(buf);
      }
    }
    return out;
  }

  try {
    return abel_numeric(series.term, options.eta_schedule, options.numeric, series.available);
  } catch (const TruncationError& e) {
    if (series.available) throw;
    throw NotSummableError(e.what());
  }
}

}  // namespace pblab
