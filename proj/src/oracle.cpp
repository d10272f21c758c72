#include "cpotts/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace cpotts::oracle {

namespace {

using cd = std::complex<double>;

cd root(int N, long k) {
  const double pi = std::acos(-1.0);
  return std::polar(1.0, 2 * pi * double(((k % N) + N) % N) / N);
}

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// odometer over Z_N^L
template <class F>
void for_each_state(int N, int L, F&& f) {
  std::vector<int> n(L, 0);
  for (;;) {
    f(n);
    int j = L - 1;
    while (j >= 0 && ++n[j] == N) n[j--] = 0;
    if (j < 0) return;
  }
}

long index_of(int N, const std::vector<int>& n) {
  long i = 0;
  for (int v : n) i = i * N + v;
  return i;
}

cd qfact(int N, int n) {
  cd r = 1;
  for (int k = 1; k <= n; ++k) r *= (1.0 - root(N, k)) / (1.0 - root(N, 1));
  return r;
}

Eigen::MatrixXcd mpow(const Eigen::MatrixXcd& a, int e) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  for (int k = 0; k < e; ++k) r = r * a;
  return r;
}

}  // namespace

long count_compositions(int N, int L, long target) {
  long c = 0;
  for_each_state(N, L, [&](const std::vector<int>& n) {
    long s = 0;
    for (int v : n) s += v;
    if (s == target) ++c;
  });
  return c;
}

long sector_size(int N, int L, int c) {
  long k = 0;
  for_each_state(N, L, [&](const std::vector<int>& n) {
    long s = 0;
    for (int v : n) s += v;
    if (s % N == c) ++k;
  });
  return k;
}

std::vector<long long> q_integer_poly(int n) { return std::vector<long long>(std::max(n, 0), 1); }

std::vector<long long> gaussian_binomial_poly(int a, int b) {
  if (b < 0 || b > a) return {0};
  if (b == 0 || b == a) return {1};
  auto x = gaussian_binomial_poly(a - 1, b - 1);
  auto y = gaussian_binomial_poly(a - 1, b);
  std::vector<long long> r(std::max(x.size(), y.size() + b), 0);
  for (size_t k = 0; k < x.size(); ++k) r[k] += x[k];
  for (size_t k = 0; k < y.size(); ++k) r[k + b] += y[k];
  return r;
}

cd at_root_of_unity(const std::vector<long long>& c, int N) {
  cd r = 0;
  for (size_t k = 0; k < c.size(); ++k) r += double(c[k]) * root(N, static_cast<long>(k));
  return r;
}

Eigen::MatrixXcd site_Z(int N, int L, int j) {
  long d = ipow(N, L);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for_each_state(N, L, [&](const std::vector<int>& n) {
    long i = index_of(N, n);
    m(i, i) = root(N, n[j - 1]);
  });
  return m;
}

Eigen::MatrixXcd site_X(int N, int L, int j) {
  long d = ipow(N, L);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for_each_state(N, L, [&](const std::vector<int>& n) {
    auto u = n;
    u[j - 1] = (u[j - 1] + 1) % N;
    m(index_of(N, u), index_of(N, n)) = 1;
  });
  return m;
}

Eigen::MatrixXcd site_e(int N, int L, int j) {
  Eigen::MatrixXcd Z = site_Z(N, L, j), X = site_X(N, L, j);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(Z.rows(), Z.cols());
  return X.adjoint() * (one - Z) / (1.0 - root(N, 1));
}

Eigen::MatrixXcd site_f(int N, int L, int j) {
  Eigen::MatrixXcd Z = site_Z(N, L, j), X = site_X(N, L, j);
  Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(Z.rows(), Z.cols());
  return (one - Z) * X / (1.0 - root(N, 1));
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return a * b - b * a; }

Eigen::MatrixXcd divided_power(int N, int L, Kind kind, int m) {
  long d = ipow(N, L);
  std::vector<Eigen::MatrixXcd> Z, E, F;
  for (int j = 1; j <= L; ++j) {
    Z.push_back(site_Z(N, L, j));
    E.push_back(site_e(N, L, j));
    F.push_back(site_f(N, L, j));
  }
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  for_each_state(N, L, [&](const std::vector<int>& n) {
    long s = 0;
    for (int v : n) s += v;
    if (s != m) return;
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(d, d);
    for (int j = 0; j < L; ++j) {
      int before = 0, after = 0;
      for (int l = 0; l < j; ++l) before += n[l];
      for (int l = j + 1; l < L; ++l) after += n[l];
      Eigen::MatrixXcd site;
      cd c = 1.0 / qfact(N, n[j]);
      switch (kind) {
        case Kind::C0:
          site = mpow(Z[j], after) * mpow(E[j], n[j]) * root(N, long(j) * n[j]);
          break;
        case Kind::B1:
          site = mpow(F[j], n[j]) * mpow(Z[j], before) * root(N, -long(j + 1) * n[j]);
          break;
        case Kind::CL1:
          site = mpow(Z[j], before) * mpow(E[j], n[j]);
          break;
        case Kind::BL:
          site = mpow(F[j], n[j]) * mpow(Z[j], after);
          break;
      }
      term = term * (c * site);
    }
    total += term;
  });
  return total;
}

std::vector<Eigen::MatrixXcd> monodromy_entry(int N, int L, int a, int b) {
  long d = ipow(N, L);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  cd w = root(N, 1);
  // local entry (al, be) at site j as {t^0, t^1} coefficients
  auto local = [&](int j, int al, int be) -> std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> {
    Eigen::MatrixXcd Z = site_Z(N, L, j), X = site_X(N, L, j);
    if (al == 0 && be == 0) return {I, -w * Z};
    if (al == 0 && be == 1) return {Eigen::MatrixXcd::Zero(d, d), -w * (I - Z) * X};
    if (al == 1 && be == 0) return {X.adjoint() * (I - Z), Eigen::MatrixXcd::Zero(d, d)};
    return {w * Z, -w * I};
  };
  std::vector<Eigen::MatrixXcd> out(L + 1, Eigen::MatrixXcd::Zero(d, d));
  for (long path = 0; path < (1L << (L - 1)); ++path) {
    std::vector<int> v(L + 1);
    v[0] = a;
    v[L] = b;
    for (int k = 1; k < L; ++k) v[k] = (path >> (k - 1)) & 1;
    std::vector<Eigen::MatrixXcd> poly{I};
    for (int j = 1; j <= L; ++j) {
      auto [c0, c1] = local(j, v[j - 1], v[j]);
      std::vector<Eigen::MatrixXcd> next(poly.size() + 1, Eigen::MatrixXcd::Zero(d, d));
      for (size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k] * c0;
        next[k + 1] += poly[k] * c1;
      }
      poly = std::move(next);
    }
    for (size_t k = 0; k < poly.size() && k < out.size(); ++k) out[k] += poly[k];
  }
  return out;
}

nlohmann::json run(const std::string& name, const nlohmann::json& in) {
  if (name == "compositions") return count_compositions(in.at("N"), in.at("L"), in.at("target"));
  if (name == "sector_size") return sector_size(in.at("N"), in.at("L"), in.at("c"));
  if (name == "gaussian_binomial") {
    auto p = gaussian_binomial_poly(in.at("a"), in.at("b"));
    auto v = at_root_of_unity(p, in.at("N"));
    return {{"poly", p}, {"value", {v.real(), v.imag()}}};
  }
  throw std::invalid_argument("unknown oracle " + name);
}

}  // namespace cpotts::oracle
