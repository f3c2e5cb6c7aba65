#include "pblab/dist_coeffs.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pblab/errors.hpp"
#include "pblab/simd/kernels.hpp"

namespace pblab {

namespace {

void check_shape(int trusted, int guard, const char* who) {
  if (trusted < 1) throw ArgumentError(std::string(who) + ": trusted size must be >= 1");
  if (guard < 0) throw ArgumentError(std::string(who) + ": guard must be >= 0");
}

void require_same_shape(const CoeffGrid2D& a, const CoeffGrid2D& b) {
  if (!a.has_same_shape(b)) {
    throw ArgumentError("grid shapes differ: (" + std::to_string(a.trusted_size()) + "+" +
                        std::to_string(a.guard()) + ") vs (" + std::to_string(b.trusted_size()) +
                        "+" + std::to_string(b.guard()) + ")");
  }
}

}  // namespace

CoeffGrid2D::CoeffGrid2D(int trusted, int guard)
    : trusted_(trusted), guard_(guard), dim_(trusted + guard) {
  check_shape(trusted, guard, "CoeffGrid2D");
  data_.assign(static_cast<std::size_t>(dim_) * dim_, cplx{});
}

CoeffGrid2D::CoeffGrid2D(int trusted, int guard, std::vector<cplx> data)
    : trusted_(trusted), guard_(guard), dim_(trusted + guard), data_(std::move(data)) {
  check_shape(trusted, guard, "CoeffGrid2D");
  if (data_.size() != static_cast<std::size_t>(dim_) * dim_) {
    throw ArgumentError("CoeffGrid2D: data length " + std::to_string(data_.size()) +
                        " does not match side " + std::to_string(dim_));
  }
}

cplx CoeffGrid2D::at(BasisIndex2D idx) const {
  if (idx.n1 < 0 || idx.n2 < 0 || idx.n1 >= dim_ || idx.n2 >= dim_) {
    throw ArgumentError("CoeffGrid2D::at: index outside stored square");
  }
  return (*this)(idx.n1, idx.n2);
}

cplx CoeffGrid2D::value_or_zero(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= dim_ || n2 >= dim_) return {};
  return (*this)(n1, n2);
}

CoeffGrid2D CoeffGrid2D::cropped(int trusted, int guard) const {
  check_shape(trusted, guard, "CoeffGrid2D::cropped");
  if (trusted > trusted_ || trusted + guard > dim_) {
    throw ArgumentError("CoeffGrid2D::cropped: cannot grow a grid");
  }
  const int side = trusted + guard;
  std::vector<cplx> out(static_cast<std::size_t>(side) * side);
  for (int i = 0; i < side; ++i) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset(i, 0)), side,
                out.begin() + static_cast<std::ptrdiff_t>(i) * side);
  }
  return CoeffGrid2D(trusted, guard, std::move(out));
}

double CoeffGrid2D::max_abs() const { return simd::max_abs(data_); }

double CoeffGrid2D::max_abs_trusted() const {
  double m = 0.0;
  for (int i = 0; i < trusted_; ++i) m = std::max(m, simd::max_abs(row(i).first(trusted_)));
  return m;
}

CoeffGrid2D linear_combination(cplx c1, const CoeffGrid2D& f, cplx c2, const CoeffGrid2D& g) {
  require_same_shape(f, g);
  std::vector<cplx> out(f.data().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c1 * f.data()[i] + c2 * g.data()[i];
  return CoeffGrid2D(f.trusted_size(), f.guard(), std::move(out));
}

CoeffGrid2D operator+(const CoeffGrid2D& a, const CoeffGrid2D& b) {
  return linear_combination(1.0, a, 1.0, b);
}

CoeffGrid2D operator-(const CoeffGrid2D& a, const CoeffGrid2D& b) {
  return linear_combination(1.0, a, -1.0, b);
}

CoeffGrid2D operator*(cplx c, const CoeffGrid2D& a) {
  std::vector<cplx> out(a.data_.size());
  std::transform(a.data_.begin(), a.data_.end(), out.begin(), [c](cplx z) { return c * z; });
  return CoeffGrid2D(a.trusted_, a.guard_, std::move(out));
}

CoeffGrid2D delta_diff_coeffs(cplx alpha, int trusted, int guard) {
  check_shape(trusted, guard, "delta_diff_coeffs");
  return CoeffGrid2D::from_function(trusted, guard,
                                    [&](int n1, int n2) { return n1 == n2 ? alpha : cplx{}; });
}

CoeffGrid2D delta_sum_coeffs(cplx beta, int trusted, int guard) {
  check_shape(trusted, guard, "delta_sum_coeffs");
  return CoeffGrid2D::from_function(trusted, guard, [&](int n1, int n2) {
    if (n1 != n2) return cplx{};
    return (n1 % 2 == 0) ? beta : -beta;
  });
}

CoeffGrid2D basis_element(BasisIndex2D idx, int trusted, int guard) {
  check_shape(trusted, guard, "basis_element");
  if (idx.n1 < 0 || idx.n2 < 0 || idx.n1 >= trusted + guard || idx.n2 >= trusted + guard) {
    throw ArgumentError("basis_element: index outside grid");
  }
  return CoeffGrid2D::from_function(trusted, guard, [&](int n1, int n2) {
    return (n1 == idx.n1 && n2 == idx.n2) ? cplx{1.0} : cplx{};
  });
}

// c_{n1,n2} = s^{-1} sum_{i,j} W_i W_j h_{n1}(u_i) h_{n2}(u_j) f(u_i/s, u_j/s)
CoeffGrid2D project_function(const std::function<cplx(double, double)>& f, int trusted,
                             const OscillatorParams& params, int guard, int order) {
  check_shape(trusted, guard, "project_function");
  const int side = trusted + guard;
  if (order <= 0) order = default_quadrature_order(side - 1);
  check_quadrature_order(side - 1, order);

  const auto& rule = gauss_hermite_rule(order);
  const auto table = hermite_table(rule.nodes, side - 1);
  const double s = params.scale();
  const auto q = static_cast<Eigen::Index>(rule.nodes.size());

  // H(i, n) = h_n(u_i)
  Eigen::MatrixXd h(q, side);
  for (int n = 0; n < side; ++n) {
    for (Eigen::Index i = 0; i < q; ++i) h(i, n) = table[static_cast<std::size_t>(n) * q + i];
  }
  Eigen::MatrixXcd samples(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j < q; ++j) {
      samples(i, j) = rule.full_weights[i] * rule.full_weights[j] *
                      f(rule.nodes[i] / s, rule.nodes[j] / s);
    }
  }
  const Eigen::MatrixXcd hc = h.cast<cplx>();
  const Eigen::MatrixXcd coeffs = hc.transpose() * samples * hc / s;
  return CoeffGrid2D::from_function(trusted, guard,
                                    [&](int n1, int n2) { return coeffs(n1, n2); });
}

double delta_pairing_quadrature(DeltaKind kind, int n1, int n2, const OscillatorParams& params,
                                Precision precision) {
  if (n1 < 0 || n2 < 0) throw ArgumentError("delta_pairing_quadrature: negative index");
  const int order = default_quadrature_order(std::max(n1, n2));
  const double sign = kind == DeltaKind::sum ? -1.0 : 1.0;
  if (precision == Precision::extended) {
    const long double s = sign;
    return static_cast<double>(overlap_quadrature_extended(
        [&](long double x) { return hermite_eval_extended(n2, s * x, params); }, n1, params,
        order));
  }
  return overlap_quadrature([&](double x) { return hermite_eval(n2, sign * x, params); }, n1,
                            params, order);
}

NormalizationPair NormalizationPair::symmetric(double ab) {
  if (!(ab > 0.0) || !std::isfinite(ab)) {
    throw ArgumentError("NormalizationPair::symmetric: product must be positive");
  }
  const double r = std::sqrt(ab);
  return {cplx{r}, cplx{r}};
}

nlohmann::json to_json(const CoeffGrid2D& grid) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (const auto& z : grid.data()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  nlohmann::json doc;
  doc["n"] = grid.trusted_size();
  doc["g"] = grid.guard();
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc;
}

CoeffGrid2D grid_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const int g = doc.at("g").get<int>();
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    if (re.size() != im.size()) throw ArgumentError("grid json: re/im length mismatch");
    std::vector<cplx> data(re.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] = {re[i].get<double>(), im[i].get<double>()};
    }
    return CoeffGrid2D(n, g, std::move(data));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("grid json: ") + e.what());
  }
}

void write_csv_trusted(std::ostream& out, const CoeffGrid2D& grid) {
  const auto old = out.precision(17);
  out << "n1,n2,re,im\n";
  for (int i = 0; i < grid.trusted_size(); ++i) {
    for (int j = 0; j < grid.trusted_size(); ++j) {
      const cplx z = grid(i, j);
      out << i << ',' << j << ',' << z.real() << ',' << z.imag() << '\n';
    }
  }
  out.precision(old);
}

}  // namespace pblab
