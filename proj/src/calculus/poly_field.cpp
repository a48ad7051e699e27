#include "kornlab/calculus/poly_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kornlab::calculus {

Polynomial::Polynomial(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > 3) throw ValidationError("polynomial dimension must be 1, 2 or 3");
  if (degree < 0 || degree > kMaxDegree) {
    throw ValidationError("polynomial degree must lie in [0, " + std::to_string(kMaxDegree) + "]");
  }
  std::size_t size = 1;
  for (int i = 0; i < dim; ++i) size *= static_cast<std::size_t>(degree + 1);
  c_.assign(size, 0.0);
}

std::size_t Polynomial::index(const std::vector<int>& e) const {
  if (static_cast<int>(e.size()) != dim_) throw ValidationError("exponent vector has the wrong length");
  std::size_t idx = 0;
  int total = 0;
  for (int i = dim_ - 1; i >= 0; --i) {
    if (e[i] < 0 || e[i] > degree_) throw ValidationError("exponent out of range");
    total += e[i];
    idx = idx * (degree_ + 1) + static_cast<std::size_t>(e[i]);
  }
  if (total > degree_) throw ValidationError("monomial exceeds the polynomial degree");
  return idx;
}

void Polynomial::for_each_exponent(const std::function<void(const std::vector<int>&)>& f) const {
  std::vector<int> e(dim_, 0);
  while (true) {
    if (std::accumulate(e.begin(), e.end(), 0) <= degree_) f(e);
    int i = 0;
    while (i < dim_ && ++e[i] > degree_) e[i++] = 0;
    if (i == dim_) break;
  }
}

Polynomial Polynomial::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw ValidationError("derivative axis out of range");
  Polynomial d(dim_, degree_);
  for_each_exponent([&](const std::vector<int>& e) {
    if (e[axis] == 0) return;
    std::vector<int> lower = e;
    --lower[axis];
    d.coeff(lower) += e[axis] * coeff(e);
  });
  return d;
}

double Polynomial::operator()(const Vec& x) const {
  if (x.size() != dim_) throw ValidationError("evaluation point has the wrong dimension");
  double sum = 0.0;
  for_each_exponent([&](const std::vector<int>& e) {
    const double a = coeff(e);
    if (a == 0.0) return;
    double m = a;
    for (int i = 0; i < dim_; ++i) m *= std::pow(x(i), e[i]);
    sum += m;
  });
  return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_ || o.degree_ != degree_) throw ValidationError("polynomial shapes differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.dim_ != dim_ || o.degree_ != degree_) throw ValidationError("polynomial shapes differ");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::abs(x));
  return m;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(double s, Polynomial a) { return a *= s; }

PolyField::PolyField(int dim_, int degree_) : dim(dim_), degree(degree_) {
  for (int k = 0; k < dim; ++k) components.emplace_back(dim, degree);
}

Vec PolyField::operator()(const Vec& x) const {
  Vec y(dim);
  for (int k = 0; k < dim; ++k) y(k) = components[k](x);
  return y;
}

PolyField random_poly_field(int dim, int degree, std::mt19937_64& rng) {
  PolyField v(dim, degree);
  std::normal_distribution<double> g;
  for (auto& p : v.components) p.for_each_exponent([&](const std::vector<int>& e) { p.coeff(e) = g(rng); });
  return v;
}

std::vector<std::vector<Polynomial>> symmetric_gradient(const PolyField& v) {
  const int n = v.dim;
  std::vector<std::vector<Polynomial>> s(n, std::vector<Polynomial>(n, Polynomial(n, v.degree)));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s[j][k] = 0.5 * (v.components[k].derivative(j) + v.components[j].derivative(k));
  return s;
}

double check_identity(const PolyField& v) {
  const int n = v.dim;
  const auto s = symmetric_gradient(v);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Polynomial lhs = v.components[k].derivative(j).derivative(i);
        const Polynomial rhs = s[j][k].derivative(i) + s[i][k].derivative(j) - s[i][j].derivative(k);
        worst = std::max(worst, (lhs - rhs).max_abs_coeff());
      }
  return worst;
}

double check_laplacian_identity(const PolyField& v) {
  const int n = v.dim;
  const auto s = symmetric_gradient(v);
  Polynomial div(n, v.degree);
  for (int i = 0; i < n; ++i) div += v.components[i].derivative(i);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    Polynomial lap(n, v.degree), rhs(n, v.degree);
    for (int i = 0; i < n; ++i) {
      lap += v.components[k].derivative(i).derivative(i);
      rhs += 2.0 * s[i][k].derivative(i);
    }
    rhs -= div.derivative(k);
    worst = std::max(worst, (lap - rhs).max_abs_coeff());
  }
  return worst;
}

double check_identity_fd(const FieldEvaluator& v, int dim, double h, const std::vector<Vec>& points) {
  if (!(h > 0)) throw ValidationError("finite-difference step must be positive");
  if (dim < 1 || dim > 3) throw ValidationError("dimension must be 1, 2 or 3");
  std::vector<Vec> pts = points;
  if (pts.empty()) {
    const double grid[3] = {0.2, 0.5, 0.8};
    const int count = static_cast<int>(std::pow(3, dim));
    for (int m = 0; m < count; ++m) {
      Vec x(dim);
      int r = m;
      for (int i = 0; i < dim; ++i, r /= 3) x(i) = grid[r % 3];
      pts.push_back(x);
    }
  }
  auto e = [&](int i) {
    Vec u = Vec::Zero(dim);
    u(i) = h;
    return u;
  };
  auto eval = [&](const Vec& x) {
    const Vec y = v(x);
    if (y.size() != dim || !y.allFinite()) throw NumericalError("field evaluation is not a finite vector of the right size");
    return y;
  };
  // central-difference sym∇v at y
  auto sym = [&](const Vec& y, int j, int k) {
    const double djvk = (eval(y + e(j))(k) - eval(y - e(j))(k)) / (2 * h);
    const double dkvj = (eval(y + e(k))(j) - eval(y - e(k))(j)) / (2 * h);
    return 0.5 * (djvk + dkvj);
  };
  double worst = 0.0;
  for (const Vec& x : pts) {
    if (x.size() != dim) throw ValidationError("sample point has the wrong dimension");
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          double lhs;
          if (i == j) {
            lhs = (eval(x + e(i))(k) - 2 * eval(x)(k) + eval(x - e(i))(k)) / (h * h);
          } else {
            lhs = (eval(x + e(i) + e(j))(k) - eval(x + e(i) - e(j))(k) - eval(x - e(i) + e(j))(k) +
                   eval(x - e(i) - e(j))(k)) /
                  (4 * h * h);
          }
          auto d = [&](int a, int b, int c) { return (sym(x + e(a), b, c) - sym(x - e(a), b, c)) / (2 * h); };
          const double rhs = d(i, j, k) + d(j, i, k) - d(k, i, j);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return worst;
}

}  // namespace kornlab::calculus
