#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentz {

inline constexpr int kMaxCoords = 8;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLightlikeBand = 1e-10;

class LorentzError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public LorentzError {
 public:
  using LorentzError::LorentzError;
};

/// A pair of points is not in the causal relation an operation requires.
class CausalityError : public LorentzError {
 public:
  using LorentzError::LorentzError;
};

/// Point outside the domain, bad descriptor, failed audit.
class DomainError : public LorentzError {
 public:
  using LorentzError::LorentzError;
};

/// Disconnected graph, degenerate pseudo-distance, optimizer failure.
class SolverError : public LorentzError {
 public:
  using LorentzError::LorentzError;
};

/// Event or vector in R^{1,n}: index 0 is time, 1..n are space.
class Vec {
 public:
  Vec() = default;
  explicit Vec(int size);
  Vec(std::initializer_list<double> coords);
  static Vec from(const std::vector<double>& coords);

  int size() const { return size_; }
  int space_dim() const { return size_ - 1; }
  double t() const { return c_[0]; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }

  double norm() const;
  double space_norm() const;
  std::vector<double> to_vector() const;
  std::string str() const;

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a *= 1.0 / s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  bool operator==(const Vec& o) const;

 private:
  std::array<double, kMaxCoords> c_{};
  int size_ = 0;
};

using Event = Vec;

void require_same_dim(const Vec& a, const Vec& b);
double dot(const Vec& a, const Vec& b);
Vec time_axis(int size);

/// b_ε(u,v) = -(1+ε)^2 u_t v_t + Σ u_i v_i.
double minkowski_form(const Vec& u, const Vec& v, double eps = 0.0);
double wick_norm(const Vec& v);

enum class CausalKind { timelike, lightlike, spacelike };
enum class Orientation { future, past, none };

struct CausalClass {
  CausalKind kind;
  Orientation orientation;
  bool causal() const { return kind != CausalKind::spacelike; }
};

/// Nonzero vectors with |b_ε(v,v)| <= 1e-10 |v|^2 count as lightlike.
CausalClass causal_classify(const Vec& v, double eps = 0.0);

/// y - x future causal or zero, lightlike band included.
bool causally_precedes(const Event& x, const Event& y, double eps = 0.0);
bool causally_related(const Event& x, const Event& y, double eps = 0.0);

/// sqrt(|b(y-x,y-x)|) for x <= y. Throws CausalityError otherwise.
double time_separation(const Event& x, const Event& y);

struct ProjectiveInterval {
  double lower = -1.0;
  double upper = 1.0;
  bool contains(double s) const { return s > lower && s < upper; }
};

/// Projective distance on an interval of the real line.
double rho_interval(const ProjectiveInterval& j, double s, double t);

/// Endpoint of a segment on an affine line; may sit at infinity.
struct Endpoint {
  Vec point;
  bool infinite = false;
  static Endpoint at(const Vec& p) { return Endpoint{p, false}; }
  static Endpoint at_infinity(int size) { return Endpoint{Vec(size), true}; }
};

/// |ln(|q-a||b-p| / (|p-a||b-q|))| for a, p, q, b on a common line in that order.
double cross_ratio_log(const Endpoint& a, const Vec& p, const Vec& q,
                       const Endpoint& b);

/// (1+n)x(1+n) matrix, row major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int size);
  static Matrix identity(int size);
  /// Boost with rapidity `phi` in the (t, x_axis) plane.
  static Matrix boost(int size, int axis, double phi);
  /// Rotation by `angle` in the (x_i, x_j) plane, 1 <= i < j <= n.
  static Matrix rotation(int size, int i, int j, double angle);

  int size() const { return size_; }
  double& operator()(int r, int c) { return m_[r * kMaxCoords + c]; }
  double operator()(int r, int c) const { return m_[r * kMaxCoords + c]; }
  Vec operator*(const Vec& v) const;
  Matrix operator*(const Matrix& o) const;
  Matrix transpose() const;

 private:
  std::array<double, kMaxCoords * kMaxCoords> m_{};
  int size_ = 0;
};

/// True if A^T η A = η within tol (entrywise).
bool is_lorentz(const Matrix& a, double tol = 1e-9);

/// Similarity x -> λAx + τ with A in O(1,n), or the inversion x -> x / b(x,x).
class ConformalMap {
 public:
  enum class Kind { similarity, inversion };

  static ConformalMap similarity(double lambda, const Matrix& a, const Vec& shift);
  static ConformalMap inversion(int size);

  Kind kind() const { return kind_; }
  int size() const { return size_; }
  double lambda() const { return lambda_; }
  const Matrix& linear() const { return a_; }
  const Vec& shift() const { return shift_; }

  Vec apply(const Vec& x) const;
  ConformalMap inverse() const;

 private:
  Kind kind_ = Kind::similarity;
  int size_ = 0;
  double lambda_ = 1.0;
  Matrix a_;
  Vec shift_;
};

Vec apply_conformal(const ConformalMap& g, const Vec& x);

}  // namespace lorentz
