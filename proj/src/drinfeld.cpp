#include "cpotts/drinfeld.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cpotts/cyclo.hpp"

namespace cpotts {

int drinfeld_degree(int N, int L, int Q) {
  if (Q < 0 || Q >= N) throw std::invalid_argument("Q out of range");
  long top = static_cast<long>(L) * (N - 1) - Q;
  return top < 0 ? -1 : static_cast<int>(top / N);
}

std::vector<mpz_class> count_compositions(int N, int L, int Q) {
  int top = L * (N - 1);
  std::vector<mpz_class> ways(top + 1, 0);
  ways[0] = 1;
  for (int j = 0; j < L; ++j) {
    std::vector<mpz_class> next(top + 1, 0);
    for (int s = 0; s <= top; ++s) {
      if (sgn(ways[s]) == 0) continue;
      for (int n = 0; n < N && s + n <= top; ++n) next[s + n] += ways[s];
    }
    ways = std::move(next);
  }
  std::vector<mpz_class> out;
  for (int m = 0; m <= drinfeld_degree(N, L, Q); ++m) out.push_back(ways[m * N + Q]);
  return out;
}

std::vector<mpz_class> series_coefficients(int N, int L, int Q) {
  int top = L * (N - 1);
  // (1 - t^N)^L
  std::vector<mpz_class> num(top + 1, 0);
  mpz_class b = 1;
  for (int i = 0; i <= L && i * N <= top; ++i) {
    num[i * N] = (i % 2 ? -b : b);
    b = b * (L - i) / (i + 1);
  }
  std::vector<Cyclo> total(top + 1, Cyclo(N, {}));
  for (int a = 0; a < N; ++a) {
    // (1 - omega^a t)^{-L} = sum_k C(L+k-1, k) omega^{ak} t^k
    std::vector<Cyclo> inv(top + 1);
    mpz_class c = 1;
    for (int k = 0; k <= top; ++k) {
      inv[k] = Cyclo(mpq_class(c)) * omega_pow(N, static_cast<long>(a) * k);
      c = c * (L + k) / (k + 1);
    }
    Cyclo phase = omega_pow(N, -static_cast<long>(Q) * a);
    for (int d = 0; d <= top; ++d) {
      Cyclo s(N, {});
      for (int i = 0; i <= d; ++i)
        if (sgn(num[i]) != 0) s += Cyclo(mpq_class(num[i])) * inv[d - i];
      total[d] += phase * s;
    }
  }
  std::vector<mpz_class> out;
  for (int m = 0; m <= drinfeld_degree(N, L, Q); ++m) {
    Cyclo v = total[m * N + Q] * Cyclo(mpq_class(1, N));
    if (!v.is_rational() || v.coeff(0).get_den() != 1) throw std::logic_error("series coefficient not an integer");
    out.push_back(v.coeff(0).get_num());
  }
  return out;
}

std::vector<mpz_class> compute_coefficients(int N, int L, int Q) {
  auto a = count_compositions(N, L, Q);
  auto b = series_coefficients(N, L, Q);
  if (a != b) {
    std::ostringstream os;
    os << "Drinfeld coefficient routes disagree for N=" << N << " L=" << L << " Q=" << Q;
    throw std::logic_error(os.str());
  }
  return a;
}

namespace {

using cld = std::complex<long double>;

// value, derivative and the scale sum_k |c_k||z|^k
void horner(const std::vector<long double>& c, cld z, cld& p, cld& dp, long double& scale) {
  p = 0;
  dp = 0;
  scale = 0;
  long double az = std::abs(z);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + c[k];
    scale = scale * az + std::abs(c[k]);
  }
}

template <class C>
std::vector<C> poly_from_roots(const std::vector<C>& r) {
  std::vector<C> c{C(1)};
  for (const auto& z : r) {
    std::vector<C> n(c.size() + 1, C(0));
    for (size_t k = 0; k < c.size(); ++k) {
      n[k + 1] += c[k];
      n[k] -= z * c[k];
    }
    c = std::move(n);
  }
  return c;
}

template <class C>
Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> lagrange_coefficients(const std::vector<C>& roots) {
  int m = static_cast<int>(roots.size());
  Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> beta(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<C> others;
    C denom(1);
    for (int l = 0; l < m; ++l) {
      if (l == j) continue;
      others.push_back(roots[l]);
      denom *= roots[j] - roots[l];
    }
    auto c = poly_from_roots(others);
    for (int n = 0; n < m; ++n) beta(j, n) = c[n] / denom;
  }
  return beta;
}

std::vector<cld> polished_roots(const std::vector<mpz_class>& lambda, RootStats& st) {
  int m = static_cast<int>(lambda.size()) - 1;
  if (m < 1) throw std::invalid_argument("find_roots needs degree >= 1");
  std::vector<long double> c;
  for (const auto& x : lambda) c.push_back(static_cast<long double>(x.get_d()));
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -static_cast<double>(c[i] / c[m]);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cld> roots;
  for (int i = 0; i < m; ++i) roots.push_back(cld(es.eigenvalues()[i]));
  st = RootStats{};
  for (auto& z : roots) {
    for (int it = 0; it < 60; ++it) {
      cld p, dp;
      long double sc;
      horner(c, z, p, dp, sc);
      if (std::abs(p) <= 1e-20L * sc || dp == cld(0)) break;
      cld step = p / dp;
      z -= step;
      if (std::abs(step) <= 1e-20L * std::abs(z)) break;
    }
    cld p, dp;
    long double sc;
    horner(c, z, p, dp, sc);
    st.max_residual = std::max(st.max_residual, static_cast<double>(std::abs(p) / sc));
  }
  std::sort(roots.begin(), roots.end(), [](cld a, cld b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  st.min_separation = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      st.min_separation =
          std::min(st.min_separation, static_cast<double>(std::abs(roots[i] - roots[j]) /
                                                          std::max(std::abs(roots[i]), std::abs(roots[j]))));
  if (st.min_separation < 1e-8) throw DegenerateRoots("degenerate Drinfeld roots");
  return roots;
}

std::vector<cd> narrow(const std::vector<cld>& v) {
  std::vector<cd> r;
  for (auto z : v) r.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  return r;
}

Eigen::MatrixXcd narrow(const Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>& m) {
  Eigen::MatrixXcd r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      r(i, j) = cd(static_cast<double>(m(i, j).real()), static_cast<double>(m(i, j).imag()));
  return r;
}

std::vector<cld> inverses(const std::vector<cld>& v) {
  std::vector<cld> r;
  for (auto z : v) r.push_back(cld(1) / z);
  return r;
}

std::vector<cld> s_values(const std::vector<cld>& roots, const Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>& beta,
                          int n_lo, int n_hi) {
  std::vector<cld> S;
  for (int n = n_lo; n <= n_hi; ++n) {
    cld s = 0;
    for (size_t m = 0; m < roots.size(); ++m) s += beta(m, 0) * std::pow(roots[m], -n);
    S.push_back(s);
  }
  return S;
}

template <class C>
double vandermonde_residual_t(const std::vector<C>& nodes, const Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>& beta) {
  using M = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  int m = static_cast<int>(nodes.size());
  M V(m, m);  // V(n, k) = z_k^n
  for (int n = 0; n < m; ++n)
    for (int k = 0; k < m; ++k) V(n, k) = std::pow(nodes[k], n);
  M I = M::Identity(m, m);
  auto a = (beta * V - I).cwiseAbs().maxCoeff();
  auto b = (V * beta - I).cwiseAbs().maxCoeff();
  return static_cast<double>(std::max(a, b));
}

}  // namespace

std::vector<cd> find_roots(const std::vector<mpz_class>& lambda, RootStats* stats) {
  RootStats st;
  auto r = polished_roots(lambda, st);
  if (stats) *stats = st;
  return narrow(r);
}

Eigen::MatrixXcd compute_beta(const std::vector<cd>& roots) { return lagrange_coefficients(roots); }

Eigen::MatrixXcd compute_beta_star(const std::vector<cd>& roots) {
  std::vector<cd> inv;
  for (auto z : roots) inv.push_back(1.0 / z);
  return compute_beta(inv);
}

std::vector<cd> compute_S(const std::vector<cd>& roots, const Eigen::MatrixXcd& beta, int n_max) {
  std::vector<cd> S;
  for (int n = 0; n <= n_max; ++n) {
    cd s = 0;
    for (size_t m = 0; m < roots.size(); ++m) s += beta(m, 0) * std::pow(roots[m], -n);
    S.push_back(s);
  }
  return S;
}

double vandermonde_residual(const std::vector<cd>& nodes, const Eigen::MatrixXcd& beta) {
  return vandermonde_residual_t(nodes, beta);
}

double vandermonde_backward_error(const std::vector<cd>& nodes, const Eigen::MatrixXcd& beta) {
  int m = static_cast<int>(nodes.size());
  Eigen::MatrixXcd V(m, m);
  for (int n = 0; n < m; ++n)
    for (int k = 0; k < m; ++k) V(n, k) = std::pow(nodes[k], n);
  Eigen::MatrixXd scale = beta.cwiseAbs() * V.cwiseAbs();
  Eigen::MatrixXd err = (beta * V - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs();
  return err.cwiseQuotient(scale.cwiseMax(1.0)).maxCoeff();
}

DrinfeldData make_drinfeld(int N, int L, int Q, int n_max) {
  DrinfeldData d;
  d.N = N;
  d.L = L;
  d.Q = Q;
  d.mQ = drinfeld_degree(N, L, Q);
  d.lambda = compute_coefficients(N, L, Q);
  if (n_max < 0) n_max = d.mQ;
  if (d.mQ >= 1) {
    auto roots = polished_roots(d.lambda, d.stats);
    auto beta = lagrange_coefficients(roots);
    d.roots = narrow(roots);
    d.beta = narrow(beta);
    d.beta_star = narrow(lagrange_coefficients(inverses(roots)));
    std::vector<cd> inv;
    for (auto z : d.roots) inv.push_back(1.0 / z);
    double r1 = vandermonde_backward_error(d.roots, d.beta);
    double r2 = vandermonde_backward_error(inv, d.beta_star);
    if (!(std::max(r1, r2) <= 1e-8)) {
      std::ostringstream os;
      os << "Vandermonde inverse ill-conditioned, residual " << std::max(r1, r2);
      throw IllConditioned(os.str());
    }
    d.roots_ext = roots;
    d.S_ext = s_values(roots, beta, 0, n_max);
    d.S = narrow(d.S_ext);
  } else {
    d.S.assign(n_max + 1, 0.0);
    d.S[0] = 1.0;
    d.S_ext.assign(n_max + 1, 0.0L);
    d.S_ext[0] = 1.0L;
  }
  return d;
}

cd d_from_roots(const DrinfeldData& d, int m) {
  cd s = 0;
  for (auto z : d.roots) s -= std::pow(z, -m);
  return s;
}

std::vector<CheckRecord> verify_drinfeld(int N, int L, int Q) {
  std::vector<CheckRecord> out;
  nlohmann::json in = {{"N", N}, {"L", L}, {"Q", Q}};
  auto a = count_compositions(N, L, Q);
  auto b = series_coefficients(N, L, Q);
  out.push_back(exact_check("drinfeld.routes", "roots", in, a == b));
  int mQ = drinfeld_degree(N, L, Q);
  out.push_back(exact_check("drinfeld.degree", "roots", in, static_cast<int>(a.size()) == mQ + 1));

  // sum over all Q of all Lambda^Q_m is N^L, per Q it is N^{L-1}
  mpz_class total = 0, expect;
  for (const auto& x : a) total += x;
  mpz_ui_pow_ui(expect.get_mpz_t(), N, L - 1);
  bool positive = std::all_of(a.begin(), a.end(), [](const mpz_class& x) { return sgn(x) > 0; });
  out.push_back(exact_check("drinfeld.sum", "coeff1", in, total == expect && positive,
                            "sum = " + total.get_str() + ", N^{L-1} = " + expect.get_str()));

  auto partner = count_compositions(N, L, (N - Q) % N);
  bool sym = true;
  if (Q == 0) {
    for (int j = 0; j <= mQ; ++j) sym = sym && a[mQ - j] == a[j];
  } else {
    sym = partner.size() == a.size();
    for (int j = 0; sym && j <= mQ; ++j) sym = a[mQ - j] == partner[j];
  }
  out.push_back(exact_check("drinfeld.symmetry", "coeff2", in, sym));
  if (mQ < 1) return out;

  DrinfeldData d;
  try {
    d = make_drinfeld(N, L, Q);
  } catch (const std::exception& e) {
    out.push_back(exact_check("drinfeld.root_solve", "roots", in, false, e.what()));
    return out;
  }
  out.push_back(residual_check("drinfeld.root_residual", "roots", in, d.stats.max_residual, 1e-12));
  std::vector<cd> inv;
  for (auto z : d.roots) inv.push_back(1.0 / z);
  auto inv_ext = inverses(d.roots_ext);
  out.push_back(residual_check("drinfeld.vandermonde", "vdm", in,
                               vandermonde_residual_t(d.roots_ext, lagrange_coefficients(d.roots_ext)), 1e-10));
  out.push_back(residual_check("drinfeld.vandermonde_inverse", "vdmstar", in,
                               vandermonde_residual_t(inv_ext, lagrange_coefficients(inv_ext)), 1e-10));

  double b0 = 0;
  for (int m = 0; m < mQ; ++m) {
    cd prod = 1.0;
    for (int l = 0; l < mQ; ++l)
      if (l != m) prod *= d.roots[m] - d.roots[l];
    cd closed = -a[0].get_d() / (a[mQ].get_d() * d.roots[m]) / prod;
    b0 = std::max(b0, std::abs(closed - d.beta(m, 0)) / std::max(1.0, std::abs(closed)));
  }
  out.push_back(residual_check("drinfeld.beta_first_column", "beta0", in, b0, 1e-10));

  double rec_err = 0;
  int worst = 0;
  int n_max = static_cast<int>(d.S_ext.size()) - 1;
  for (int m = 0; m <= n_max; ++m) {
    std::complex<long double> s = 0;
    for (int n = 0; n <= m; ++n)
      if (m - n <= mQ) s += static_cast<long double>(a[m - n].get_d()) * d.S_ext[n];
    long double want = m == 0 ? a[0].get_d() : 0.0;
    double r = static_cast<double>(std::abs(s - want) / a[0].get_d());
    if (r > rec_err) rec_err = r, worst = m;
  }
  out.push_back(residual_check("drinfeld.s_recursion", "lsq", in, rec_err, 1e-9,
                               "m = 0.." + std::to_string(n_max) + ", worst m = " + std::to_string(worst)));

  double init_err = std::abs(d.S[0] - 1.0);
  for (int n = 1 - mQ; n < 0; ++n) {
    cd s = 0;
    for (int m = 0; m < mQ; ++m) s += d.beta(m, 0) * std::pow(d.roots[m], -n);
    init_err = std::max(init_err, std::abs(s));
  }
  out.push_back(residual_check("drinfeld.s_initial", "sq", in, init_err, 1e-10));

  // roots of P_{N-Q} are the inverses of those of P_Q
  auto proots = find_roots(partner);
  double pair = 0;
  for (auto z : inv) {
    double best = INFINITY;
    for (auto w : proots) best = std::min(best, std::abs(z - w) / std::max(1.0, std::abs(z)));
    pair = std::max(pair, best);
  }
  out.push_back(residual_check("drinfeld.inverse_roots", "coeff2", in, pair, 1e-9));
  return out;
}

}  // namespace cpotts
