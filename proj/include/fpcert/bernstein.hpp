#pragma once

#include "fpcert/polynomial.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpcert {

using MultiIndex = std::vector<unsigned>;

struct DegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TensorTooLarge : std::length_error {
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxBernsteinTensor = 100'000'000;

// Bernstein coefficients of multi-degree k over [0,1]^n, first axis fastest.
class BernsteinTensor {
 public:
  BernsteinTensor() = default;
  BernsteinTensor(MultiIndex degree, std::vector<Rational> coeffs);

  const MultiIndex& degree() const { return degree_; }
  std::size_t nvars() const { return degree_.size(); }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  std::size_t linear_index(const MultiIndex& alpha) const;
  MultiIndex multi_index(std::size_t linear) const;
  const Rational& at(const MultiIndex& alpha) const { return coeffs_[linear_index(alpha)]; }
  const Rational& operator[](std::size_t linear) const { return coeffs_[linear]; }

  Rational min() const;
  Rational max() const;
  Interval enclosure() const { return {min(), max()}; }

  // alpha_i in {0, k_i} for every axis.
  bool is_vertex(const MultiIndex& alpha) const;

  // sum_alpha b_alpha B_{k,alpha}(x) expanded in the monomial basis.
  Polynomial to_polynomial() const;

  friend bool operator==(const BernsteinTensor& a, const BernsteinTensor& b) {
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  MultiIndex degree_;
  std::vector<Rational> coeffs_;
};

// Throws TensorTooLarge past kMaxBernsteinTensor entries.
std::size_t tensor_size(const MultiIndex& k);

BernsteinTensor bernstein_coeffs(const Polynomial& p, const MultiIndex& k);

// Degree elevation along each axis to k2 >= k.
BernsteinTensor elevate(const BernsteinTensor& t, const MultiIndex& k2);

struct LinearBound {
  Rational upper;                 // max_alpha sum_j |b_alpha(s_j)|
  bool sharp = false;             // some maximizer is a vertex of the index box
  std::vector<MultiIndex> argmax;
  std::vector<Rational> sums;     // sum_j |b_alpha(s_j)| per alpha, linear order
  std::size_t coefficient_count = 0;
};

// Componentwise max multi-degree of the s_j.
MultiIndex common_degree(const std::vector<Polynomial>& s, std::size_t n);

LinearBound linear_bound(const std::vector<Polynomial>& s, const MultiIndex& k);

// Row alpha holds the coefficients of e_1..e_m in b_alpha of sum_j s_j e_j.
std::vector<std::vector<Rational>> affine_forms(const std::vector<Polynomial>& s, const MultiIndex& k);

// Range of a univariate polynomial on [0,1]. Exact whenever every critical
// point is dyadic, otherwise enclosed on intervals of width <= 2^-resolution.
Interval univariate_range(const Polynomial& p, unsigned resolution = 48);

}  // namespace fpcert
