#pragma once

#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bredonk/exactla.hpp"

namespace bredonk {

namespace detail {

// Integer coefficients, lowest degree first.
using IntPoly = std::vector<Integer>;

inline IntPoly poly_divide_exact(IntPoly num, const IntPoly& den) {
  IntPoly q(num.size() - den.size() + 1);
  for (std::size_t i = q.size(); i-- > 0;) {
    Integer c = num[i + den.size() - 1];  // den is monic
    q[i] = c;
    for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  return q;
}

inline const IntPoly& cyclotomic_polynomial(int n) {
  static std::mutex mu;
  static std::map<int, IntPoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  IntPoly p(n + 1, Integer(0));
  p[0] = -1;
  p[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    // recursion would re-lock; compute divisors' polynomials bottom-up instead
    IntPoly phi_d;
    if (auto it = cache.find(d); it != cache.end()) {
      phi_d = it->second;
    } else {
      IntPoly q(d + 1, Integer(0));
      q[0] = -1;
      q[d] = 1;
      for (int e = 1; e < d; ++e)
        if (d % e == 0) q = poly_divide_exact(q, cache.at(e));
      cache[d] = q;
      phi_d = q;
    }
    p = poly_divide_exact(p, phi_d);
  }
  return cache[n] = p;
}

}  // namespace detail

// Element of Q(zeta_n) stored as sum c_k zeta_n^k over k in [0,n). The
// representation is not unique; canonical() reduces modulo Phi_n.
class Cyclotomic {
 public:
  Cyclotomic() : n_(1), c_(1, Rational(0)) {}
  explicit Cyclotomic(int n) : n_(n), c_(n, Rational(0)) {}

  static Cyclotomic root(int n, long k) {
    Cyclotomic z(n);
    long r = ((k % n) + n) % n;
    z.c_[r] = 1;
    return z;
  }
  static Cyclotomic rational(const Rational& q, int n = 1) {
    Cyclotomic z(n);
    z.c_[0] = q;
    return z;
  }
  // e^{2 pi i q}, q rational.
  static Cyclotomic phase(const Rational& q) {
    Rational f = q - Rational(floor_div(q));
    long den = f.get_den().get_si();
    long num = f.get_num().get_si();
    return root(static_cast<int>(den), num);
  }

  int order() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  Cyclotomic lifted(int m) const {
    if (m % n_) throw std::invalid_argument("cyclotomic lift to a non-multiple order");
    Cyclotomic z(m);
    int step = m / n_;
    for (int k = 0; k < n_; ++k) z.c_[k * step] = c_[k];
    return z;
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    int m = std::lcm(a.n_, b.n_);
    Cyclotomic x = a.lifted(m), y = b.lifted(m);
    for (int k = 0; k < m; ++k) x.c_[k] += y.c_[k];
    return x;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    return a + b.scaled(Rational(-1));
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    int m = std::lcm(a.n_, b.n_);
    Cyclotomic x = a.lifted(m), y = b.lifted(m), z(m);
    for (int i = 0; i < m; ++i) {
      if (x.c_[i] == 0) continue;
      for (int j = 0; j < m; ++j)
        if (y.c_[j] != 0) z.c_[(i + j) % m] += x.c_[i] * y.c_[j];
    }
    return z;
  }
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  Cyclotomic scaled(const Rational& q) const {
    Cyclotomic z(*this);
    for (auto& v : z.c_) v *= q;
    return z;
  }

  Cyclotomic conj() const {
    Cyclotomic z(n_);
    for (int k = 0; k < n_; ++k) z.c_[(n_ - k) % n_] = c_[k];
    return z;
  }

  // Coefficients modulo Phi_n, length phi(n).
  std::vector<Rational> canonical() const {
    const auto& phi = detail::cyclotomic_polynomial(n_);
    std::size_t deg = phi.size() - 1;
    std::vector<Rational> r(c_);
    for (std::size_t i = r.size(); i-- > deg;) {
      if (r[i] == 0) continue;
      Rational c = r[i];
      for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * Rational(phi[j]);
    }
    r.resize(deg);
    return r;
  }

  bool is_zero() const {
    for (const auto& v : canonical())
      if (v != 0) return false;
    return true;
  }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

  std::optional<Rational> as_rational() const {
    auto can = canonical();
    for (std::size_t i = 1; i < can.size(); ++i)
      if (can[i] != 0) return std::nullopt;
    return can.empty() ? Rational(0) : can[0];
  }

  // Canonical order-n coefficients, for sorting and printing.
  std::vector<Rational> key(int n) const { return lifted(std::lcm(n, n_)).canonical(); }

  std::string str() const {
    if (auto q = as_rational()) return q->get_str();
    std::string s;
    for (int k = 0; k < n_; ++k) {
      if (c_[k] == 0) continue;
      if (!s.empty()) s += " + ";
      s += c_[k].get_str() + "*z" + std::to_string(n_) + "^" + std::to_string(k);
    }
    return s;
  }

  static Integer floor_div(const Rational& q) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
  }

 private:
  int n_;
  std::vector<Rational> c_;
};

// Fractional part in [0,1).
inline Rational frac(const Rational& q) { return q - Rational(Cyclotomic::floor_div(q)); }

}  // namespace bredonk
