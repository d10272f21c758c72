#include "cpotts/cyclo.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cpotts {

namespace {

using IPoly = std::vector<long long>;

// exact division of integer polynomials, divisor monic
IPoly poly_div(IPoly a, const IPoly& b) {
  int db = static_cast<int>(b.size()) - 1;
  int da = static_cast<int>(a.size()) - 1;
  IPoly q(da - db + 1, 0);
  for (int k = da; k >= db; --k) {
    long long c = a[k];
    q[k - db] = c;
    if (c == 0) continue;
    for (int i = 0; i <= db; ++i) a[k - db + i] -= c * b[i];
  }
  for (int i = 0; i < db; ++i)
    if (a[i] != 0) throw std::logic_error("cyclotomic division not exact");
  return q;
}

IPoly cyclotomic(int N) {
  IPoly p(N + 1, 0);
  p[0] = -1;
  p[N] = 1;
  for (int d = 1; d < N; ++d)
    if (N % d == 0) p = poly_div(p, cyclotomic(d));
  return p;
}

std::unique_ptr<CycloContext> make_context(int N) {
  auto c = std::make_unique<CycloContext>();
  c->N = N;
  c->poly = cyclotomic(N);
  c->phi = static_cast<int>(c->poly.size()) - 1;
  int top = std::max(N, 2 * c->phi - 1);
  c->xpow.assign(top, IPoly(c->phi, 0));
  IPoly cur(c->phi, 0);
  cur[0] = 1;
  for (int k = 0; k < top; ++k) {
    c->xpow[k] = cur;
    // multiply by x and reduce
    long long lead = cur[c->phi - 1];
    for (int i = c->phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    for (int i = 0; i < c->phi; ++i) cur[i] -= lead * c->poly[i];
  }
  return c;
}

}  // namespace

const CycloContext& cyclo_context(int N) {
  if (N < 1) throw std::invalid_argument("cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloContext>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, make_context(N)).first;
  return *it->second;
}

Cyclo::Cyclo(long v) {
  if (v != 0) c_.push_back(mpq_class(v));
}

Cyclo::Cyclo(const mpq_class& v) {
  if (v != 0) c_.push_back(v);
}

Cyclo::Cyclo(int N, std::vector<mpq_class> coeffs) : n_(N) {
  const auto& ctx = cyclo_context(N);
  c_.assign(ctx.phi, mpq_class(0));
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0) continue;
    if (static_cast<int>(k) < ctx.phi) {
      c_[k] += coeffs[k];
    } else if (k < ctx.xpow.size()) {
      for (int i = 0; i < ctx.phi; ++i)
        if (ctx.xpow[k][i]) c_[i] += coeffs[k] * static_cast<long>(ctx.xpow[k][i]);
    } else {
      // omega^k = omega^{k mod N}
      Cyclo t = omega_pow(N, static_cast<long>(k));
      for (int i = 0; i < ctx.phi; ++i) c_[i] += coeffs[k] * t.c_[i];
    }
  }
}

mpq_class Cyclo::coeff(int k) const {
  return k < static_cast<int>(c_.size()) ? c_[k] : mpq_class(0);
}

bool Cyclo::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (size_t k = 1; k < c_.size(); ++k)
    if (c_[k] != 0) return false;
  return true;
}

void Cyclo::lift(int N) {
  if (n_ == N) return;
  if (n_ != 0) throw std::invalid_argument("mixing cyclotomic orders");
  n_ = N;
  c_.resize(cyclo_context(N).phi, mpq_class(0));
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  if (o.n_ != 0) lift(o.n_);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), mpq_class(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
  if (o.n_ != 0) lift(o.n_);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), mpq_class(0));
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Cyclo& Cyclo::operator*=(const Cyclo& o) {
  if (is_rational() && n_ == 0) {
    mpq_class s = coeff(0);
    Cyclo r = o;
    for (auto& v : r.c_) v *= s;
    return *this = r;
  }
  if (o.n_ == 0 || o.is_rational()) {
    if (o.n_ != 0) lift(o.n_);
    mpq_class s = o.coeff(0);
    for (auto& v : c_) v *= s;
    return *this;
  }
  lift(o.n_);
  const auto& ctx = cyclo_context(n_);
  int phi = ctx.phi;
  std::vector<mpq_class> prod(2 * phi - 1, mpq_class(0));
  for (int i = 0; i < phi; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < phi; ++j)
      if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
  }
  std::vector<mpq_class> r(prod.begin(), prod.begin() + phi);
  for (int k = phi; k < 2 * phi - 1; ++k) {
    if (prod[k] == 0) continue;
    for (int i = 0; i < phi; ++i)
      if (ctx.xpow[k][i]) r[i] += prod[k] * static_cast<long>(ctx.xpow[k][i]);
  }
  c_ = std::move(r);
  return *this;
}

Cyclo Cyclo::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(omega)");
  if (n_ == 0 || is_rational()) {
    Cyclo r = *this;
    mpq_class v = 1 / coeff(0);
    r.c_.assign(r.c_.size(), mpq_class(0));
    r.c_[0] = v;
    return r;
  }
  const auto& ctx = cyclo_context(n_);
  int phi = ctx.phi;
  // columns: this * x^j, solve M y = e_0
  std::vector<std::vector<mpq_class>> M(phi, std::vector<mpq_class>(phi + 1));
  for (int j = 0; j < phi; ++j) {
    std::vector<mpq_class> e(phi, mpq_class(0));
    e[j] = 1;
    Cyclo col = *this * Cyclo(n_, e);
    for (int i = 0; i < phi; ++i) M[i][j] = col.c_[i];
  }
  M[0][phi] = 1;
  for (int col = 0, row = 0; col < phi; ++col, ++row) {
    int piv = row;
    while (M[piv][col] == 0) ++piv;
    std::swap(M[piv], M[row]);
    mpq_class inv = 1 / M[row][col];
    for (int k = col; k <= phi; ++k) M[row][k] *= inv;
    for (int i = 0; i < phi; ++i) {
      if (i == row || M[i][col] == 0) continue;
      mpq_class f = M[i][col];
      for (int k = col; k <= phi; ++k) M[i][k] -= f * M[row][k];
    }
  }
  std::vector<mpq_class> y(phi);
  for (int i = 0; i < phi; ++i) y[i] = M[i][phi];
  return Cyclo(n_, y);
}

bool operator==(const Cyclo& a, const Cyclo& b) {
  size_t n = std::max(a.c_.size(), b.c_.size());
  for (size_t k = 0; k < n; ++k)
    if (a.coeff(static_cast<int>(k)) != b.coeff(static_cast<int>(k))) return false;
  return true;
}

std::string Cyclo::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < c_.size(); ++k) os << (k ? "," : "") << c_[k].get_str();
  if (c_.empty()) os << "0";
  os << "]";
  return os.str();
}

Cyclo omega_pow(int N, long k) {
  const auto& ctx = cyclo_context(N);
  long r = ((k % N) + N) % N;
  std::vector<mpq_class> c(ctx.phi);
  for (int i = 0; i < ctx.phi; ++i) c[i] = static_cast<long>(ctx.xpow[r][i]);
  return Cyclo(N, c);
}

Cyclo q_integer(int N, long n) {
  if (n < 0) throw std::domain_error("q_integer needs n >= 0");
  std::vector<mpq_class> c(std::min<long>(n, N), mpq_class(0));
  for (long k = 0; k < n; ++k) c[k % N] += 1;
  return Cyclo(N, c);
}

Cyclo q_factorial(int N, long n) {
  if (n < 0) throw std::domain_error("q_factorial needs n >= 0");
  Cyclo r = omega_pow(N, 0);
  for (long k = 1; k <= n; ++k) r *= q_integer(N, k);
  return r;
}

Cyclo gaussian_binomial(int N, long a, long b) {
  if (b < 0 || b > a) throw std::domain_error("gaussian_binomial needs 0 <= b <= a");
  // row of q-Pascal: [a choose b] = [a-1 choose b-1] + q^b [a-1 choose b]
  std::vector<Cyclo> row(b + 1, Cyclo(N, {}));
  row[0] = omega_pow(N, 0);
  for (long n = 1; n <= a; ++n)
    for (long k = std::min(n, b); k >= 1; --k) row[k] = row[k - 1] + omega_pow(N, k) * row[k];
  return row[b];
}

std::complex<double> omega_c(int N, long k) {
  double a = 2.0 * std::numbers::pi * static_cast<double>(((k % N) + N) % N) / N;
  return {std::cos(a), std::sin(a)};
}

std::complex<double> to_complex(const Cyclo& x) {
  std::complex<double> s = 0;
  int N = x.order();
  for (size_t k = 0; k < x.coeffs().size(); ++k) {
    double v = x.coeffs()[k].get_d();
    s += N ? v * omega_c(N, static_cast<long>(k)) : std::complex<double>(v);
  }
  return s;
}

std::vector<long long> integer_coeffs(const Cyclo& x) {
  std::vector<long long> r;
  for (const auto& v : x.coeffs()) {
    if (v.get_den() != 1) throw std::domain_error("not a cyclotomic integer");
    if (!v.get_num().fits_slong_p()) throw std::overflow_error("coefficient too large");
    r.push_back(v.get_num().get_si());
  }
  return r;
}

long exact_rank(CycloMatrix m) {
  long rank = 0;
  Eigen::Index rows = m.rows(), cols = m.cols();
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = rank; r < rows; ++r)
      if (!m(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    m.row(piv).swap(m.row(rank));
    Cyclo inv = m(rank, c).inverse();
    for (Eigen::Index k = c; k < cols; ++k) m(rank, k) *= inv;
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (m(r, c).is_zero()) continue;
      Cyclo f = m(r, c);
      for (Eigen::Index k = c; k < cols; ++k)
        if (!m(rank, k).is_zero()) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

}  // namespace cpotts
