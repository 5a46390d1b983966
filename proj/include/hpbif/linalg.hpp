#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <type_traits>

namespace hpbif {

using cplx = std::complex<double>;

template <typename T>
struct Vector4 {
  std::array<T, 4> v{};

  constexpr Vector4() = default;
  constexpr Vector4(T a, T b, T c, T d) : v{a, b, c, d} {}

  constexpr T& operator[](std::size_t i) { return v[i]; }
  constexpr const T& operator[](std::size_t i) const { return v[i]; }

  auto begin() { return v.begin(); }
  auto end() { return v.end(); }
  auto begin() const { return v.begin(); }
  auto end() const { return v.end(); }

  static constexpr std::size_t size() { return 4; }

  static constexpr Vector4 unit(std::size_t i) {
    Vector4 r;
    r[i] = T(1);
    return r;
  }

  Vector4& operator+=(const Vector4& o) {
    for (std::size_t i = 0; i < 4; ++i) v[i] += o[i];
    return *this;
  }
  Vector4& operator-=(const Vector4& o) {
    for (std::size_t i = 0; i < 4; ++i) v[i] -= o[i];
    return *this;
  }
  template <typename S>
  Vector4& operator*=(S s) {
    for (auto& x : v) x *= s;
    return *this;
  }

  friend Vector4 operator+(Vector4 a, const Vector4& b) { return a += b; }
  friend Vector4 operator-(Vector4 a, const Vector4& b) { return a -= b; }
  friend Vector4 operator-(Vector4 a) {
    for (auto& x : a.v) x = -x;
    return a;
  }
  friend bool operator==(const Vector4&, const Vector4&) = default;
};

template <typename T, typename S>
  requires std::is_arithmetic_v<S> || std::is_same_v<S, T>
Vector4<T> operator*(S s, Vector4<T> a) {
  for (auto& x : a.v) x *= s;
  return a;
}

template <typename T, typename S>
  requires std::is_arithmetic_v<S> || std::is_same_v<S, T>
Vector4<T> operator*(Vector4<T> a, S s) {
  return s * a;
}

inline Vector4<cplx> operator*(cplx s, const Vector4<double>& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

template <typename T>
Vector4<T> operator/(Vector4<T> a, T s) {
  for (auto& x : a.v) x /= s;
  return a;
}

inline Vector4<cplx> operator/(Vector4<cplx> a, double s) {
  for (auto& x : a.v) x /= s;
  return a;
}

using Vec4 = Vector4<double>;
using CVec4 = Vector4<cplx>;

template <typename T>
struct Matrix4 {
  std::array<std::array<T, 4>, 4> a{};

  constexpr Matrix4() = default;

  constexpr T& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
  constexpr const T& operator()(std::size_t i, std::size_t j) const {
    return a[i][j];
  }

  static constexpr Matrix4 identity() {
    Matrix4 m;
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix4 from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    Matrix4 m;
    std::size_t i = 0;
    for (const auto& r : rows) {
      std::size_t j = 0;
      for (const auto& x : r) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  static Matrix4 diagonal(const Vector4<T>& d) {
    Matrix4 m;
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = d[i];
    return m;
  }

  Vector4<T> column(std::size_t j) const {
    return {a[0][j], a[1][j], a[2][j], a[3][j]};
  }

  Matrix4 transpose() const {
    Matrix4 t;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) t(i, j) = a[j][i];
    return t;
  }

  T trace() const { return a[0][0] + a[1][1] + a[2][2] + a[3][3]; }

  Matrix4& operator+=(const Matrix4& o) {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a[i][j] += o.a[i][j];
    return *this;
  }
  Matrix4& operator-=(const Matrix4& o) {
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a[i][j] -= o.a[i][j];
    return *this;
  }
  friend Matrix4 operator+(Matrix4 x, const Matrix4& y) { return x += y; }
  friend Matrix4 operator-(Matrix4 x, const Matrix4& y) { return x -= y; }
  friend Matrix4 operator*(T s, Matrix4 x) {
    for (auto& r : x.a)
      for (auto& e : r) e *= s;
    return x;
  }
  friend Matrix4 operator*(const Matrix4& x, const Matrix4& y) {
    Matrix4 r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) += x(i, k) * y(k, j);
    return r;
  }
  friend Vector4<T> operator*(const Matrix4& x, const Vector4<T>& y) {
    Vector4<T> r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) r[i] += x(i, j) * y[j];
    return r;
  }
  friend bool operator==(const Matrix4&, const Matrix4&) = default;
};

using Mat4 = Matrix4<double>;
using CMat4 = Matrix4<cplx>;

inline CVec4 operator*(const Mat4& m, const CVec4& x) {
  CVec4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i] += m(i, j) * x[j];
  return r;
}

inline CVec4 complexify(const Vec4& x) { return {x[0], x[1], x[2], x[3]}; }

inline CMat4 complexify(const Mat4& m) {
  CMat4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) = m(i, j);
  return r;
}

inline Vec4 real_part(const CVec4& x) {
  return {x[0].real(), x[1].real(), x[2].real(), x[3].real()};
}
inline Vec4 imag_part(const CVec4& x) {
  return {x[0].imag(), x[1].imag(), x[2].imag(), x[3].imag()};
}
inline CVec4 conj(const CVec4& x) {
  return {std::conj(x[0]), std::conj(x[1]), std::conj(x[2]), std::conj(x[3])};
}

inline double dot(const Vec4& x, const Vec4& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

/// Sesquilinear product conjugating the first argument: sum conj(p_i) q_i.
inline cplx inner(const CVec4& p, const CVec4& q) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += std::conj(p[i]) * q[i];
  return s;
}

template <typename T>
double norm2(const Vector4<T>& x) {
  double s = 0.0;
  for (const auto& e : x) s += std::norm(e);
  return std::sqrt(s);
}

template <typename T>
double norm_inf(const Vector4<T>& x) {
  double m = 0.0;
  for (const auto& e : x) m = std::max(m, std::abs(e));
  return m;
}

/// Maximum absolute row sum.
template <typename T>
double norm_inf(const Matrix4<T>& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

template <typename T>
bool all_finite(const Vector4<T>& x) {
  for (const auto& e : x) {
    if constexpr (std::is_same_v<T, cplx>) {
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    } else {
      if (!std::isfinite(e)) return false;
    }
  }
  return true;
}

template <typename T>
bool all_finite(const Matrix4<T>& m) {
  for (std::size_t i = 0; i < 4; ++i)
    if (!all_finite(Vector4<T>{m(i, 0), m(i, 1), m(i, 2), m(i, 3)}))
      return false;
  return true;
}

}  // namespace hpbif
