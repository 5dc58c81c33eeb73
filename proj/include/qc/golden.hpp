#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

namespace qc {

/// a + b*tau over the rationals, tau = (1+sqrt5)/2.
class GoldenNum {
 public:
  GoldenNum() = default;
  GoldenNum(int v) : a_(v) {}
  GoldenNum(long v) : a_(v) {}
  GoldenNum(mpq_class a, mpq_class b = 0) : a_(std::move(a)), b_(std::move(b)) {
    a_.canonicalize();
    b_.canonicalize();
  }

  static GoldenNum tau() { return {0, 1}; }
  static GoldenNum sigma() { return {-1, 1}; }  // 1/tau
  static GoldenNum frac(long num, long den) { return {mpq_class(num, den), 0}; }

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }

  GoldenNum operator-() const { return {-a_, -b_}; }
  GoldenNum& operator+=(const GoldenNum& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  GoldenNum& operator-=(const GoldenNum& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  GoldenNum& operator*=(const GoldenNum& o);
  GoldenNum& operator/=(const GoldenNum& o);

  friend GoldenNum operator+(GoldenNum x, const GoldenNum& y) { return x += y; }
  friend GoldenNum operator-(GoldenNum x, const GoldenNum& y) { return x -= y; }
  friend GoldenNum operator*(GoldenNum x, const GoldenNum& y) { return x *= y; }
  friend GoldenNum operator/(GoldenNum x, const GoldenNum& y) { return x /= y; }

  friend bool operator==(const GoldenNum& x, const GoldenNum& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const GoldenNum& x, const GoldenNum& y) { return !(x == y); }
  friend bool operator<(const GoldenNum& x, const GoldenNum& y) { return (x - y).sign() < 0; }
  friend bool operator>(const GoldenNum& x, const GoldenNum& y) { return y < x; }
  friend bool operator<=(const GoldenNum& x, const GoldenNum& y) { return !(y < x); }
  friend bool operator>=(const GoldenNum& x, const GoldenNum& y) { return !(x < y); }

  /// Galois conjugate, tau -> 1 - tau.
  GoldenNum conj() const { return {a_ + b_, -b_}; }
  /// x * conj(x) = a^2 + ab - b^2.
  mpq_class norm() const { return a_ * a_ + a_ * b_ - b_ * b_; }
  GoldenNum inverse() const;
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  /// exact sign, no floating point
  int sign() const;
  mpz_class floor() const;
  mpz_class ceil() const;
  GoldenNum abs() const { return sign() < 0 ? -*this : *this; }

  /// correctly rounded double (MPFR, conjugate form when a and b*tau cancel)
  double to_double() const;

  /// "a/b + c/d t"
  std::string str() const;
  static GoldenNum parse(const std::string& s);

  /// a + b, the "Euclidean norm" weight of a quaternionic norm A + B sqrt5
  mpq_class euclid_weight() const { return a_ + b_; }

  std::size_t hash() const;

 private:
  mpq_class a_, b_;
};

inline std::ostream& operator<<(std::ostream& o, const GoldenNum& x) { return o << x.str(); }
inline int sign(const GoldenNum& x) { return x.sign(); }
inline GoldenNum conj(const GoldenNum& x) { return x.conj(); }
inline GoldenNum abs(const GoldenNum& x) { return x.abs(); }
inline GoldenNum tau_pow(int k) {
  GoldenNum r = 1, t = k >= 0 ? GoldenNum::tau() : GoldenNum::sigma();
  for (int i = 0; i < (k >= 0 ? k : -k); ++i) r *= t;
  return r;
}

struct DirichletFlag {
  bool is_dirichlet = false;
  std::optional<std::pair<mpz_class, mpz_class>> witness;
};

/// a + b tau with a, b integers
DirichletFlag dirichlet(const GoldenNum& x);

/// three-way exact comparison
inline int cmp(const GoldenNum& x, const GoldenNum& y) { return (x - y).sign(); }

}  // namespace qc

template <>
struct std::hash<qc::GoldenNum> {
  std::size_t operator()(const qc::GoldenNum& x) const { return x.hash(); }
};

namespace Eigen {
template <>
struct NumTraits<qc::GoldenNum> : GenericNumTraits<qc::GoldenNum> {
  typedef qc::GoldenNum Real;
  typedef qc::GoldenNum NonInteger;
  typedef qc::GoldenNum Nested;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 32
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace qc {

template <int R, int C = 1>
using GMat = Eigen::Matrix<GoldenNum, R, C>;
using Vec2 = GMat<2>;
using Vec3 = GMat<3>;
using Vec4 = GMat<4>;
using Mat3 = GMat<3, 3>;
using Mat4 = GMat<4, 4>;

/// float view of any golden matrix
template <typename Derived>
auto to_double(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<double, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_double();
  return r;
}

template <typename A, typename B>
GoldenNum dot(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& y) {
  GoldenNum s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * y(i);
  return s;
}

template <typename A>
GoldenNum squared_norm(const Eigen::MatrixBase<A>& x) {
  return dot(x, x);
}

/// lexicographic by real value
template <typename A>
int lex_cmp(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<A>& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (int c = cmp(x(i), y(i))) return c;
  return 0;
}

template <typename V>
struct LexLess {
  bool operator()(const V& x, const V& y) const { return lex_cmp(x, y) < 0; }
};

template <typename V>
struct VecHash {
  std::size_t operator()(const V& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (Eigen::Index i = 0; i < v.size(); ++i) h = (h ^ v(i).hash()) * 0x100000001b3ull;
    return h;
  }
};

template <typename V>
struct VecEq {
  bool operator()(const V& x, const V& y) const { return x == y; }
};

}  // namespace qc
