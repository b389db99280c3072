#include "fpcert/bernstein.hpp"

#include <functional>
#include <map>

namespace fpcert {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Applies `mat` (new_len x old_len) along one axis of a dense tensor.
std::vector<Rational> transform_axis(const std::vector<Rational>& data, const MultiIndex& dims, std::size_t axis,
                                     const Matrix& mat) {
  const std::size_t old_len = dims[axis] + 1;
  const std::size_t new_len = mat.size();
  std::size_t stride = 1;
  for (std::size_t i = 0; i < axis; ++i) stride *= dims[i] + 1;
  const std::size_t outer = data.size() / (old_len * stride);

  std::vector<Rational> out(outer * new_len * stride);
  std::vector<Rational> fiber(old_len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < stride; ++in) {
      const std::size_t src = o * old_len * stride + in;
      const std::size_t dst = o * new_len * stride + in;
      bool nonzero = false;
      for (std::size_t b = 0; b < old_len; ++b) {
        fiber[b] = data[src + b * stride];
        nonzero = nonzero || fiber[b] != 0;
      }
      if (!nonzero) continue;
      for (std::size_t a = 0; a < new_len; ++a) {
        Rational acc = 0;
        for (std::size_t b = 0; b < old_len; ++b)
          if (mat[a][b] != 0 && fiber[b] != 0) acc += mat[a][b] * fiber[b];
        out[dst + a * stride] = acc;
      }
    }
  }
  return out;
}

// C(a,b) / C(k,b) for b <= a.
const Matrix& monomial_to_bernstein(unsigned k) {
  static thread_local std::map<unsigned, Matrix> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  Matrix mat(k + 1, std::vector<Rational>(k + 1));
  for (unsigned a = 0; a <= k; ++a)
    for (unsigned b = 0; b <= a; ++b) {
      mat[a][b] = Rational(binomial(a, b), binomial(k, b));
      mat[a][b].canonicalize();
    }
  return cache.emplace(k, std::move(mat)).first->second;
}

// Monomial coefficient of x^g in C(k,a) x^a (1-x)^(k-a), stored at [g][a].
Matrix bernstein_to_monomial(unsigned k) {
  Matrix mat(k + 1, std::vector<Rational>(k + 1));
  for (unsigned a = 0; a <= k; ++a)
    for (unsigned g = a; g <= k; ++g) {
      Integer v = binomial(k, a) * binomial(k - a, g - a);
      if ((g - a) % 2 == 1) v = -v;
      mat[g][a] = Rational(v);
    }
  return mat;
}

Matrix elevation_step(unsigned k) {
  Matrix mat(k + 2, std::vector<Rational>(k + 1));
  for (unsigned i = 0; i <= k + 1; ++i) {
    Rational w(i, k + 1);
    w.canonicalize();
    if (i >= 1) mat[i][i - 1] = w;
    if (i <= k) mat[i][i] = Rational(1) - w;
  }
  return mat;
}

int sign_variations(const std::vector<Rational>& v) {
  int count = 0, last = 0;
  for (const auto& c : v) {
    const int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

std::vector<Rational> univariate_bernstein_on(const Polynomial& p, const Rational& a, const Rational& b, unsigned deg) {
  const AffineMap map{a, b - a};
  Polynomial q = affine_substitute(p, std::span<const AffineMap>(&map, 1));
  return bernstein_coeffs(q, {deg}).coeffs();
}

}  // namespace

BernsteinTensor::BernsteinTensor(MultiIndex degree, std::vector<Rational> coeffs)
    : degree_(std::move(degree)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != tensor_size(degree_)) throw std::invalid_argument("tensor size does not match degree");
}

std::size_t BernsteinTensor::linear_index(const MultiIndex& alpha) const {
  if (alpha.size() != degree_.size()) throw std::invalid_argument("multi-index has wrong length");
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > degree_[i]) throw std::out_of_range("multi-index exceeds degree");
    idx += alpha[i] * stride;
    stride *= degree_[i] + 1;
  }
  return idx;
}

MultiIndex BernsteinTensor::multi_index(std::size_t linear) const {
  MultiIndex alpha(degree_.size());
  for (std::size_t i = 0; i < degree_.size(); ++i) {
    alpha[i] = static_cast<unsigned>(linear % (degree_[i] + 1));
    linear /= degree_[i] + 1;
  }
  return alpha;
}

Rational BernsteinTensor::min() const {
  Rational r = coeffs_.at(0);
  for (const auto& c : coeffs_)
    if (c < r) r = c;
  return r;
}

Rational BernsteinTensor::max() const {
  Rational r = coeffs_.at(0);
  for (const auto& c : coeffs_)
    if (c > r) r = c;
  return r;
}

bool BernsteinTensor::is_vertex(const MultiIndex& alpha) const {
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] != 0 && alpha[i] != degree_[i]) return false;
  return true;
}

Polynomial BernsteinTensor::to_polynomial() const {
  std::vector<Rational> data = coeffs_;
  for (std::size_t axis = 0; axis < degree_.size(); ++axis)
    data = transform_axis(data, degree_, axis, bernstein_to_monomial(degree_[axis]));
  Polynomial p(nvars());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] == 0) continue;
    const MultiIndex g = multi_index(i);
    p.add_term(Monomial(std::vector<std::uint16_t>(g.begin(), g.end())), data[i]);
  }
  return p;
}

std::size_t tensor_size(const MultiIndex& k) {
  std::size_t size = 1;
  for (unsigned ki : k) {
    size *= std::size_t(ki) + 1;
    if (size > kMaxBernsteinTensor)
      throw TensorTooLarge("Bernstein tensor exceeds " + std::to_string(kMaxBernsteinTensor) + " coefficients");
  }
  return size;
}

BernsteinTensor bernstein_coeffs(const Polynomial& p, const MultiIndex& k) {
  if (p.nvars() != k.size()) throw DegreeError("degree vector length differs from variable count");
  const auto d = p.multidegree();
  for (std::size_t i = 0; i < k.size(); ++i)
    if (d[i] > k[i]) throw DegreeError("Bernstein degree below the polynomial's multi-degree");

  std::vector<Rational> data(tensor_size(k));
  BernsteinTensor shape(k, std::vector<Rational>(data.size()));
  for (const auto& [mono, c] : p.terms()) {
    MultiIndex g(mono.exponents().begin(), mono.exponents().end());
    data[shape.linear_index(g)] = c;
  }
  for (std::size_t axis = 0; axis < k.size(); ++axis)
    if (k[axis] > 0) data = transform_axis(data, k, axis, monomial_to_bernstein(k[axis]));
  return BernsteinTensor(k, std::move(data));
}

BernsteinTensor elevate(const BernsteinTensor& t, const MultiIndex& k2) {
  if (k2.size() != t.nvars()) throw DegreeError("elevation degree has wrong length");
  for (std::size_t i = 0; i < k2.size(); ++i)
    if (k2[i] < t.degree()[i]) throw DegreeError("elevation target below current degree");
  tensor_size(k2);

  MultiIndex dims = t.degree();
  std::vector<Rational> data = t.coeffs();
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    while (dims[axis] < k2[axis]) {
      data = transform_axis(data, dims, axis, elevation_step(dims[axis]));
      ++dims[axis];
    }
  }
  return BernsteinTensor(std::move(dims), std::move(data));
}

MultiIndex common_degree(const std::vector<Polynomial>& s, std::size_t n) {
  MultiIndex k(n, 0);
  for (const auto& p : s) {
    if (p.nvars() != n) throw DegreeError("coefficient polynomial has wrong variable count");
    const auto d = p.multidegree();
    for (std::size_t i = 0; i < n; ++i) k[i] = std::max(k[i], d[i]);
  }
  return k;
}

LinearBound linear_bound(const std::vector<Polynomial>& s, const MultiIndex& k) {
  const std::size_t size = tensor_size(k);
  LinearBound out;
  out.sums.assign(size, Rational(0));
  for (const auto& p : s) {
    const BernsteinTensor t = bernstein_coeffs(p, k);
    for (std::size_t i = 0; i < size; ++i)
      if (t[i] != 0) out.sums[i] += abs(t[i]);
    out.coefficient_count += size;
  }
  out.upper = out.sums[0];
  for (const auto& v : out.sums)
    if (v > out.upper) out.upper = v;
  const BernsteinTensor shape(k, std::vector<Rational>(size));
  for (std::size_t i = 0; i < size; ++i) {
    if (out.sums[i] != out.upper) continue;
    out.argmax.push_back(shape.multi_index(i));
    out.sharp = out.sharp || shape.is_vertex(out.argmax.back());
  }
  return out;
}

std::vector<std::vector<Rational>> affine_forms(const std::vector<Polynomial>& s, const MultiIndex& k) {
  const std::size_t size = tensor_size(k);
  std::vector<std::vector<Rational>> forms(size, std::vector<Rational>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) {
    const BernsteinTensor t = bernstein_coeffs(s[j], k);
    for (std::size_t i = 0; i < size; ++i) forms[i][j] = t[i];
  }
  return forms;
}

Interval univariate_range(const Polynomial& p, unsigned resolution) {
  if (p.nvars() != 1) throw std::invalid_argument("univariate_range expects one variable");
  const unsigned deg = p.total_degree();
  auto value = [&](const Rational& x) { return p.evaluate(std::span<const Rational>(&x, 1)); };
  Interval range = hull(Interval(value(Rational(0))), Interval(value(Rational(1))));
  if (deg <= 1) return range;

  Polynomial dp(1);
  for (const auto& [mono, c] : p.terms())
    if (mono[0] > 0) dp.add_term(Monomial::variable(1, 0, mono[0] - 1), Rational(c * mono[0]));
  const unsigned ddeg = deg - 1;

  // Critical points of p are roots of dp; isolate them by bisection on Bernstein sign changes.
  std::function<void(const Rational&, const Rational&, unsigned)> isolate = [&](const Rational& a, const Rational& b,
                                                                               unsigned depth) {
    if (sign_variations(univariate_bernstein_on(dp, a, b, ddeg)) == 0) return;
    Rational mid = (a + b) / 2;
    Rational dmid = dp.evaluate(std::span<const Rational>(&mid, 1));
    if (dmid == 0) range = hull(range, Interval(value(mid)));
    if (depth >= resolution) {
      const auto local = univariate_bernstein_on(p, a, b, deg);
      Interval enc(local[0]);
      for (const auto& c : local) enc = hull(enc, Interval(c));
      range = hull(range, enc);
      return;
    }
    isolate(a, mid, depth + 1);
    isolate(mid, b, depth + 1);
  };
  isolate(Rational(0), Rational(1), 0);
  return range;
}

}  // namespace fpcert
