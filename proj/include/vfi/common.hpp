#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace vfi {

// Fields and domains live in R^n with 2 <= n <= kMaxDim.
inline constexpr int kMaxDim = 8;

enum class ErrorCode {
  InvalidParams,
  InvalidDimension,
  InvalidAspect,
  OutOfChart,
  OutOfTube,
  NotUnique,
  NoConvergence,
  SingularPoint,
  QuadratureUnderResolved,
  BCViolated,
  ZeroField,
  DomainNotConvex,
  AxisTooClose,
  SupportTouchesBoundary,
  UnsupportedDomainForSearch,
  RankDeficient,
  NotPositiveDefinite,
  EigenNoConvergence,
  ConfigError,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// ---------------------------------------------------------------------------
// Small dense vector/matrix with runtime dimension and inline storage.
// Value types; no heap, cheap to copy.
// ---------------------------------------------------------------------------

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> a{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  Vec(std::initializer_list<double> xs) : n(int(xs.size())) {
    int i = 0;
    for (double x : xs) a[i++] = x;
  }

  double& operator[](int i) { return a[i]; }
  double operator[](int i) const { return a[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[i] += o.a[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n; ++i) a[i] -= o.a[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n; ++i) a[i] *= s;
    return *this;
  }

  friend Vec operator+(Vec l, const Vec& r) { return l += r; }
  friend Vec operator-(Vec l, const Vec& r) { return l -= r; }
  friend Vec operator*(Vec l, double s) { return l *= s; }
  friend Vec operator*(double s, Vec r) { return r *= s; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += a[i] * o.a[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  static Vec zero(int dim) { return Vec(dim); }
  static Vec unit(int dim, int i) {
    Vec v(dim);
    v[i] = 1.0;
    return v;
  }
};

struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) {}

  double& operator()(int i, int j) { return a[i * kMaxDim + j]; }
  double operator()(int i, int j) const { return a[i * kMaxDim + j]; }

  Mat transpose() const {
    Mat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = (*this)(j, i);
    return m;
  }
  double trace() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
  }
  double frobenius2() const {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * (*this)(i, j);
    return s;
  }
  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  friend Mat operator+(Mat l, const Mat& r) { return l += r; }
  Mat operator*(double s) const {
    Mat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = (*this)(i, j) * s;
    return m;
  }
  Vec operator*(const Vec& v) const {
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
};

// Shortest-round-trip-safe decimal formatting; used for every number that
// lands in a CSV/JSON artifact so that repeated runs are byte-identical.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace vfi
