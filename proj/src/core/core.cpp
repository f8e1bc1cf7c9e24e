#include "lorentz/core.hpp"

#include <algorithm>
#include <charconv>

namespace lorentz {

Vec::Vec(int size) : size_(size) {
  if (size < 2 || size > kMaxCoords) {
    throw DimensionError("vector size must be in [2, " + std::to_string(kMaxCoords) + "]");
  }
}

Vec::Vec(std::initializer_list<double> coords) : Vec(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Vec Vec::from(const std::vector<double>& coords) {
  Vec v(static_cast<int>(coords.size()));
  std::copy(coords.begin(), coords.end(), v.c_.begin());
  return v;
}

double Vec::norm() const {
  double s = 0.0;
  for (int i = 0; i < size_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

double Vec::space_norm() const {
  double s = 0.0;
  for (int i = 1; i < size_; ++i) s += c_[i] * c_[i];
  return std::sqrt(s);
}

std::vector<double> Vec::to_vector() const { return {c_.begin(), c_.begin() + size_}; }

std::string Vec::str() const {
  std::string out = "(";
  for (int i = 0; i < size_; ++i) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, c_[i]);
    if (i) out += ", ";
    out.append(buf, r.ptr);
  }
  return out + ")";
}

Vec& Vec::operator+=(const Vec& o) {
  require_same_dim(*this, o);
  for (int i = 0; i < size_; ++i) c_[i] += o.c_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  require_same_dim(*this, o);
  for (int i = 0; i < size_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < size_; ++i) c_[i] *= s;
  return *this;
}

bool Vec::operator==(const Vec& o) const {
  if (size_ != o.size_) return false;
  for (int i = 0; i < size_; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec time_axis(int size) {
  Vec v(size);
  v[0] = 1.0;
  return v;
}

double minkowski_form(const Vec& u, const Vec& v, double eps) {
  require_same_dim(u, v);
  if (!(eps >= 0.0)) throw DomainError("epsilon must be >= 0");
  const double c = (1.0 + eps) * (1.0 + eps);
  double s = -c * u[0] * v[0];
  for (int i = 1; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double wick_norm(const Vec& v) { return v.norm(); }

CausalClass causal_classify(const Vec& v, double eps) {
  const double w2 = dot(v, v);
  if (w2 == 0.0) return {CausalKind::spacelike, Orientation::none};
  const double b = minkowski_form(v, v, eps);
  const Orientation o = v.t() > 0 ? Orientation::future : Orientation::past;
  if (std::abs(b) <= kLightlikeBand * w2) return {CausalKind::lightlike, o};
  if (b < 0) return {CausalKind::timelike, o};
  return {CausalKind::spacelike, Orientation::none};
}

bool causally_precedes(const Event& x, const Event& y, double eps) {
  const Vec d = y - x;
  if (dot(d, d) == 0.0) return true;
  const CausalClass c = causal_classify(d, eps);
  return c.causal() && c.orientation == Orientation::future;
}

bool causally_related(const Event& x, const Event& y, double eps) {
  return causally_precedes(x, y, eps) || causally_precedes(y, x, eps);
}

double time_separation(const Event& x, const Event& y) {
  if (!causally_precedes(x, y)) {
    throw CausalityError("time_separation needs x <= y: " + x.str() + " -> " + y.str());
  }
  const Vec d = y - x;
  const double w2 = dot(d, d);
  const double b = minkowski_form(d, d);
  if (std::abs(b) <= kLightlikeBand * w2) return 0.0;
  return std::sqrt(-b);
}

double rho_interval(const ProjectiveInterval& j, double s, double t) {
  if (!(j.lower < j.upper)) throw DomainError("empty interval");
  if (std::isinf(j.lower) && std::isinf(j.upper)) {
    throw DomainError("rho_interval: the full line is not a projective interval");
  }
  if (!j.contains(s) || !j.contains(t)) throw DomainError("rho_interval: point outside interval");
  const double a = j.lower, b = j.upper;
  if (std::isinf(b)) return std::abs(std::log((t - a) / (s - a)));
  if (std::isinf(a)) return std::abs(std::log((b - s) / (b - t)));
  return std::abs(std::log(((t - a) * (b - s)) / ((s - a) * (b - t))));
}

namespace {

// Position of r along the line p + s (q - p), checking collinearity.
double line_param(const Vec& p, const Vec& q, const Vec& r) {
  const Vec d = q - p;
  const double dd = dot(d, d);
  const double s = dot(r - p, d) / dd;
  const Vec off = r - (p + s * d);
  const double scale = std::max({p.norm(), q.norm(), r.norm(), 1.0});
  if (off.norm() > 1e-8 * scale) throw DomainError("cross_ratio_log: points are not collinear");
  return s;
}

}  // namespace

double cross_ratio_log(const Endpoint& a, const Vec& p, const Vec& q, const Endpoint& b) {
  require_same_dim(p, q);
  if (!a.infinite) require_same_dim(a.point, p);
  if (!b.infinite) require_same_dim(b.point, p);
  if (p == q) return 0.0;
  if (a.infinite && b.infinite) return 0.0;
  // Parametrize by p -> 0, q -> 1.
  constexpr double slack = 1e-12;
  if (!a.infinite) {
    const double sa = line_param(p, q, a.point);
    if (!(sa < slack)) throw DomainError("cross_ratio_log: a must precede p");
  }
  if (!b.infinite) {
    const double sb = line_param(p, q, b.point);
    if (!(sb > 1.0 - slack)) throw DomainError("cross_ratio_log: b must follow q");
  }
  const auto dist = [](const Vec& u, const Vec& v) { return (u - v).norm(); };
  if (b.infinite) {
    const double pa = dist(p, a.point), qa = dist(q, a.point);
    if (pa == 0.0) throw DomainError("cross_ratio_log: p coincides with a");
    return std::abs(std::log(qa / pa));
  }
  if (a.infinite) {
    const double bp = dist(b.point, p), bq = dist(b.point, q);
    if (bq == 0.0) throw DomainError("cross_ratio_log: q coincides with b");
    return std::abs(std::log(bp / bq));
  }
  const double qa = dist(q, a.point), bp = dist(b.point, p);
  const double pa = dist(p, a.point), bq = dist(b.point, q);
  if (pa == 0.0 || bq == 0.0) throw DomainError("cross_ratio_log: interior point on an endpoint");
  return std::abs(std::log((qa * bp) / (pa * bq)));
}

Matrix::Matrix(int size) : size_(size) {
  if (size < 2 || size > kMaxCoords) throw DimensionError("matrix size out of range");
}

Matrix Matrix::identity(int size) {
  Matrix m(size);
  for (int i = 0; i < size; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::boost(int size, int axis, double phi) {
  if (axis < 1 || axis >= size) throw DimensionError("boost axis out of range");
  Matrix m = identity(size);
  m(0, 0) = m(axis, axis) = std::cosh(phi);
  m(0, axis) = m(axis, 0) = std::sinh(phi);
  return m;
}

Matrix Matrix::rotation(int size, int i, int j, double angle) {
  if (i < 1 || j < 1 || i >= size || j >= size || i == j) {
    throw DimensionError("rotation plane out of range");
  }
  Matrix m = identity(size);
  m(i, i) = m(j, j) = std::cos(angle);
  m(i, j) = -std::sin(angle);
  m(j, i) = std::sin(angle);
  return m;
}

Vec Matrix::operator*(const Vec& v) const {
  if (v.size() != size_) throw DimensionError("matrix/vector size mismatch");
  Vec out(size_);
  for (int r = 0; r < size_; ++r) {
    double s = 0.0;
    for (int c = 0; c < size_; ++c) s += (*this)(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (o.size_ != size_) throw DimensionError("matrix size mismatch");
  Matrix out(size_);
  for (int r = 0; r < size_; ++r)
    for (int c = 0; c < size_; ++c) {
      double s = 0.0;
      for (int k = 0; k < size_; ++k) s += (*this)(r, k) * o(k, c);
      out(r, c) = s;
    }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(size_);
  for (int r = 0; r < size_; ++r)
    for (int c = 0; c < size_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

bool is_lorentz(const Matrix& a, double tol) {
  const int n = a.size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double s = -a(0, r) * a(0, c);
      for (int k = 1; k < n; ++k) s += a(k, r) * a(k, c);
      const double eta = r != c ? 0.0 : (r == 0 ? -1.0 : 1.0);
      if (std::abs(s - eta) > tol) return false;
    }
  return true;
}

ConformalMap ConformalMap::similarity(double lambda, const Matrix& a, const Vec& shift) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("similarity needs lambda > 0");
  if (a.size() != shift.size()) throw DimensionError("similarity size mismatch");
  if (!is_lorentz(a)) throw DomainError("similarity linear part is not in O(1,n)");
  ConformalMap g;
  g.kind_ = Kind::similarity;
  g.size_ = a.size();
  g.lambda_ = lambda;
  g.a_ = a;
  g.shift_ = shift;
  return g;
}

ConformalMap ConformalMap::inversion(int size) {
  ConformalMap g;
  g.kind_ = Kind::inversion;
  g.size_ = size;
  g.a_ = Matrix::identity(size);
  g.shift_ = Vec(size);
  return g;
}

Vec ConformalMap::apply(const Vec& x) const {
  if (x.size() != size_) throw DimensionError("conformal map size mismatch");
  if (kind_ == Kind::similarity) return lambda_ * (a_ * x) + shift_;
  const double b = minkowski_form(x, x);
  if (std::abs(b) <= kLightlikeBand * dot(x, x)) {
    throw DomainError("inversion undefined on the light cone of the origin: " + x.str());
  }
  return x / b;
}

ConformalMap ConformalMap::inverse() const {
  if (kind_ == Kind::inversion) return *this;
  // A^{-1} = η A^T η for A in O(1,n).
  Matrix inv = a_.transpose();
  for (int i = 1; i < size_; ++i) {
    inv(0, i) = -inv(0, i);
    inv(i, 0) = -inv(i, 0);
  }
  const Vec back = -(1.0 / lambda_) * (inv * shift_);
  return similarity(1.0 / lambda_, inv, back);
}

Vec apply_conformal(const ConformalMap& g, const Vec& x) { return g.apply(x); }

}  // namespace lorentz
