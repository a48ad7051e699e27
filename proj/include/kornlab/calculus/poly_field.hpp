#pragma once

#include "kornlab/core.hpp"

#include <functional>
#include <random>
#include <vector>

namespace kornlab::calculus {

inline constexpr int kMaxDegree = 6;

// Polynomial in N variables with double coefficients, stored densely over
// the exponent box {0..degree}^N; entries of total degree > degree stay 0.
class Polynomial {
 public:
  Polynomial(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }

  double coeff(const std::vector<int>& exponents) const { return c_[index(exponents)]; }
  double& coeff(const std::vector<int>& exponents) { return c_[index(exponents)]; }
  const std::vector<double>& coefficients() const { return c_; }

  Polynomial derivative(int axis) const;
  double operator()(const Vec& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  double max_abs_coeff() const;

  /// Calls f(exponents) for every exponent with total degree <= degree.
  void for_each_exponent(const std::function<void(const std::vector<int>&)>& f) const;

 private:
  std::size_t index(const std::vector<int>& e) const;

  int dim_;
  int degree_;
  std::vector<double> c_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(double s, Polynomial a);

/// Vector field with one polynomial per component, all of the same degree.
struct PolyField {
  int dim;
  int degree;
  std::vector<Polynomial> components;

  PolyField(int dim, int degree);
  Vec operator()(const Vec& x) const;
};

/// Coefficients drawn from N(0, 1) for every monomial up to the degree.
PolyField random_poly_field(int dim, int degree, std::mt19937_64& rng);

/// sym∇v as polynomials: entry (j, k) = ½(∂_j v_k + ∂_k v_j).
std::vector<std::vector<Polynomial>> symmetric_gradient(const PolyField& v);

/// max over (i, j, k) and coefficients of
///   ∂_i∂_j v_k − (∂_i sym_jk + ∂_j sym_ik − ∂_k sym_ij).
double check_identity(const PolyField& v);

/// Contraction over i = j of the identity:
///   max coefficient of Δv − (2 div sym∇v − ∇ div v).
double check_laplacian_identity(const PolyField& v);

using FieldEvaluator = std::function<Vec(const Vec&)>;

/// Finite-difference version of check_identity: central second differences
/// for ∂_i∂_j v_k, central differences of central-difference sym∇v on the
/// right-hand side.  Maximum absolute residual over the sample points
/// (default: the grid {0.2, 0.5, 0.8}^N).  Throws ValidationError for h <= 0.
double check_identity_fd(const FieldEvaluator& v, int dim, double h, const std::vector<Vec>& points = {});

}  // namespace kornlab::calculus
