#include "cpotts/zmat.hpp"

#include <cmath>
#include <type_traits>

namespace cpotts {

namespace {

constexpr double kInt128Bits = 125.0;

using u128 = unsigned __int128;

i128 iabs(i128 v) { return v < 0 ? -v : v; }

double mag(const i128& v) { return static_cast<double>(static_cast<long double>(iabs(v))); }
double mag(const mpz_class& v) { return std::fabs(v.get_d()); }

bool nz(const i128& v) { return v != 0; }
bool nz(const mpz_class& v) { return sgn(v) != 0; }

void addmul(i128& c, const i128& a, const i128& b) { c += a * b; }
void addmul(mpz_class& c, const mpz_class& a, const mpz_class& b) {
  mpz_addmul(c.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

i128 from_mpz_i128(const mpz_class& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 125) throw IntOverflow("value exceeds int128 range");
  mpz_class a = abs(v);
  mpz_class hi = a >> 64;
  mpz_class lo = a - (hi << 64);
  u128 r = (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
  i128 s = static_cast<i128>(r);
  return sgn(v) < 0 ? -s : s;
}

template <class Int>
Int from_mpz(const mpz_class& v) {
  if constexpr (std::is_same_v<Int, i128>)
    return from_mpz_i128(v);
  else
    return v;
}

template <class Int>
Int from_ll(long long v) {
  return Int(static_cast<long>(v));
}

template <class Int>
double max_mag(const typename ZwMatrix<Int>::Plane& p) {
  double m = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) m = std::max(m, mag(p.data()[i]));
  return m;
}

template <class Int>
using PlaneT = typename ZwMatrix<Int>::Plane;

// C += A * B, skipping zeros of B and, via row lists, zeros of A
template <class Int>
void plane_mul_add(const PlaneT<Int>& A, const PlaneT<Int>& B, PlaneT<Int>& C,
                   const std::vector<std::vector<int>>& arows) {
  const Eigen::Index n = A.rows(), inner = A.cols(), m = B.cols();
  for (Eigen::Index j = 0; j < m; ++j) {
    Int* c = C.col(j).data();
    for (Eigen::Index k = 0; k < inner; ++k) {
      const Int& bkj = B(k, j);
      if (!nz(bkj)) continue;
      const Int* a = A.col(k).data();
      const auto& rows = arows[k];
      if (static_cast<Eigen::Index>(rows.size()) * 3 < n) {
        for (int i : rows) addmul(c[i], a[i], bkj);
      } else {
        for (Eigen::Index i = 0; i < n; ++i) addmul(c[i], a[i], bkj);
      }
    }
  }
}

template <class Int>
std::vector<std::vector<int>> nonzero_rows(const PlaneT<Int>& A) {
  std::vector<std::vector<int>> r(A.cols());
  for (Eigen::Index k = 0; k < A.cols(); ++k)
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (nz(A(i, k))) r[k].push_back(static_cast<int>(i));
  return r;
}

double reduction_growth(const CycloContext& ctx) {
  double worst = 1;
  for (int i = 0; i < ctx.phi; ++i) {
    double s = 1;
    for (int k = ctx.phi; k < 2 * ctx.phi - 1; ++k) s += std::fabs(static_cast<double>(ctx.xpow[k][i]));
    worst = std::max(worst, s);
  }
  return worst;
}

template <class Int>
std::vector<PlaneT<Int>> reduce_planes(std::vector<PlaneT<Int>> acc, const CycloContext& ctx) {
  const int phi = ctx.phi;
  for (int k = phi; k < static_cast<int>(acc.size()); ++k) {
    for (int i = 0; i < phi; ++i) {
      long long f = ctx.xpow[k][i];
      if (f == 0) continue;
      Int fi = from_ll<Int>(f);
      for (Eigen::Index e = 0; e < acc[k].size(); ++e)
        if (nz(acc[k].data()[e])) addmul(acc[i].data()[e], acc[k].data()[e], fi);
    }
  }
  acc.resize(phi);
  return acc;
}

u128 ugcd(u128 a, u128 b) {
  while (b) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

mpz_class to_mpz(const i128& v) {
  u128 a = static_cast<u128>(v < 0 ? -v : v);
  mpz_class hi(static_cast<unsigned long>(a >> 64));
  mpz_class lo(static_cast<unsigned long>(a & ~static_cast<unsigned long>(0)));
  mpz_class r = (hi << 64) + lo;
  return v < 0 ? mpz_class(-r) : r;
}

mpz_class to_mpz(const mpz_class& v) { return v; }

template <class Int>
ZwMatrix<Int>::ZwMatrix(int N, Eigen::Index rows, Eigen::Index cols) : n_(N) {
  const auto& ctx = cyclo_context(N);
  p_.assign(ctx.phi, Plane::Constant(rows, cols, Int(0)));
}

template <class Int>
ZwMatrix<Int> ZwMatrix<Int>::identity(int N, Eigen::Index n) {
  ZwMatrix r(N, n, n);
  for (Eigen::Index i = 0; i < n; ++i) r.p_[0](i, i) = Int(1);
  return r;
}

template <class Int>
void ZwMatrix<Int>::add_to(Eigen::Index r, Eigen::Index c, const std::vector<long long>& z, long long sign) {
  for (size_t k = 0; k < z.size(); ++k)
    if (z[k]) p_[k](r, c) += from_ll<Int>(sign * z[k]);
}

template <class Int>
Cyclo ZwMatrix<Int>::at(Eigen::Index r, Eigen::Index c) const {
  std::vector<mpq_class> v(p_.size());
  for (size_t k = 0; k < p_.size(); ++k) v[k] = mpq_class(to_mpz(p_[k](r, c)));
  return Cyclo(n_, v);
}

template <class Int>
ZwMatrix<Int> ZwMatrix<Int>::col(Eigen::Index c) const {
  ZwMatrix r;
  r.n_ = n_;
  for (const auto& p : p_) r.p_.push_back(p.col(c));
  return r;
}

template <class Int>
ZwMatrix<Int> ZwMatrix<Int>::row(Eigen::Index i) const {
  ZwMatrix r;
  r.n_ = n_;
  for (const auto& p : p_) r.p_.push_back(p.row(i));
  return r;
}

template <class Int>
ZwMatrix<Int> product(const ZwMatrix<Int>& a, const ZwMatrix<Int>& b) {
  if (a.cols() != b.rows() || a.order() != b.order())
    throw std::invalid_argument("ZwMatrix product shape mismatch");
  const auto& ctx = cyclo_context(a.order());
  const int phi = ctx.phi;
  if constexpr (std::is_same_v<Int, i128>) {
    double ma = 0, mb = 0;
    for (int k = 0; k < phi; ++k) {
      ma = std::max(ma, max_mag<Int>(a.plane(k)));
      mb = std::max(mb, max_mag<Int>(b.plane(k)));
    }
    if (ma > 0 && mb > 0) {
      double bits = std::log2(ma) + std::log2(mb) + std::log2(static_cast<double>(a.cols()) + 1) +
                    std::log2(static_cast<double>(phi)) + std::log2(reduction_growth(ctx));
      if (bits > kInt128Bits) throw IntOverflow("int128 product bound exceeded");
    }
  }
  std::vector<PlaneT<Int>> acc(2 * phi - 1, PlaneT<Int>::Constant(a.rows(), b.cols(), Int(0)));
  std::vector<std::vector<std::vector<int>>> arows(phi);
  for (int ia = 0; ia < phi; ++ia) arows[ia] = nonzero_rows<Int>(a.plane(ia));
  for (int ia = 0; ia < phi; ++ia)
    for (int ib = 0; ib < phi; ++ib)
      plane_mul_add<Int>(a.plane(ia), b.plane(ib), acc[ia + ib], arows[ia]);
  auto red = reduce_planes<Int>(std::move(acc), ctx);
  ZwMatrix<Int> r(a.order(), a.rows(), b.cols());
  for (int k = 0; k < phi; ++k) r.plane(k) = std::move(red[k]);
  return r;
}

template <class Int>
ZwMatrix<Int> sum(const ZwMatrix<Int>& a, const ZwMatrix<Int>& b, const Int& ca, const Int& cb) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.order() != b.order())
    throw std::invalid_argument("ZwMatrix sum shape mismatch");
  if constexpr (std::is_same_v<Int, i128>) {
    double ma = 0, mb = 0;
    for (int k = 0; k < a.phi(); ++k) {
      ma = std::max(ma, max_mag<Int>(a.plane(k)));
      mb = std::max(mb, max_mag<Int>(b.plane(k)));
    }
    double tot = ma * mag(ca) + mb * mag(cb);
    if (tot > 0 && std::log2(tot) > kInt128Bits) throw IntOverflow("int128 sum bound exceeded");
  }
  ZwMatrix<Int> r(a.order(), a.rows(), a.cols());
  for (int k = 0; k < a.phi(); ++k) {
    auto& rp = r.plane(k);
    const auto& ap = a.plane(k);
    const auto& bp = b.plane(k);
    for (Eigen::Index e = 0; e < rp.size(); ++e) {
      addmul(rp.data()[e], ap.data()[e], ca);
      addmul(rp.data()[e], bp.data()[e], cb);
    }
  }
  return r;
}

template <class Int>
ZwMatrix<Int> times_omega(const ZwMatrix<Int>& a, long k) {
  const auto& ctx = cyclo_context(a.order());
  const int N = a.order(), phi = ctx.phi;
  ZwMatrix<Int> r(N, a.rows(), a.cols());
  for (int j = 0; j < phi; ++j) {
    const auto& col = ctx.xpow[((j + k) % N + N) % N];
    for (int i = 0; i < phi; ++i) {
      if (!col[i]) continue;
      Int f = from_ll<Int>(col[i]);
      for (Eigen::Index e = 0; e < r.plane(i).size(); ++e)
        if (nz(a.plane(j).data()[e])) addmul(r.plane(i).data()[e], a.plane(j).data()[e], f);
    }
  }
  return r;
}

template <class Int>
ZwMatrix<Int> times(const ZwMatrix<Int>& a, const std::vector<long long>& z) {
  ZwMatrix<Int> r(a.order(), a.rows(), a.cols());
  for (size_t k = 0; k < z.size(); ++k)
    if (z[k]) r = sum(r, times_omega(a, static_cast<long>(k)), Int(1), from_ll<Int>(z[k]));
  return r;
}

template <class Int>
bool is_zero(const ZwMatrix<Int>& a) {
  for (int k = 0; k < a.phi(); ++k)
    for (Eigen::Index e = 0; e < a.plane(k).size(); ++e)
      if (nz(a.plane(k).data()[e])) return false;
  return true;
}

template <class Int>
mpz_class content(const ZwMatrix<Int>& a) {
  if constexpr (std::is_same_v<Int, i128>) {
    u128 g = 0;
    for (int k = 0; k < a.phi(); ++k)
      for (Eigen::Index e = 0; e < a.plane(k).size(); ++e) {
        i128 v = a.plane(k).data()[e];
        if (v == 0) continue;
        g = ugcd(g, static_cast<u128>(v < 0 ? -v : v));
        if (g == 1) return 1;
      }
    return to_mpz(static_cast<i128>(g));
  } else {
    mpz_class g = 0;
    for (int k = 0; k < a.phi(); ++k)
      for (Eigen::Index e = 0; e < a.plane(k).size(); ++e) {
        const auto& v = a.plane(k).data()[e];
        if (sgn(v) == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        if (g == 1) return g;
      }
    return g;
  }
}

template <class Int>
void divide_exact(ZwMatrix<Int>& a, const mpz_class& g) {
  if (g == 1) return;
  Int gi = from_mpz<Int>(g);
  for (int k = 0; k < a.phi(); ++k)
    for (Eigen::Index e = 0; e < a.plane(k).size(); ++e) {
      auto& v = a.plane(k).data()[e];
      if (!nz(v)) continue;
      if constexpr (std::is_same_v<Int, i128>)
        v /= gi;
      else
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), gi.get_mpz_t());
    }
}

template <class Int>
double log2_max_abs(const ZwMatrix<Int>& a) {
  double m = 0;
  for (int k = 0; k < a.phi(); ++k) m = std::max(m, max_mag<Int>(a.plane(k)));
  return m > 0 ? std::log2(m) : -1.0;
}

template <class Int>
Eigen::MatrixXcd to_complex(const ZwMatrix<Int>& a, double scale) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
  for (int k = 0; k < a.phi(); ++k) {
    std::complex<double> w = omega_c(a.order(), k) * scale;
    const auto& p = a.plane(k);
    for (Eigen::Index e = 0; e < p.size(); ++e) {
      if (!nz(p.data()[e])) continue;
      double v;
      if constexpr (std::is_same_v<Int, i128>)
        v = static_cast<double>(static_cast<long double>(p.data()[e]));
      else
        v = p.data()[e].get_d();
      r.data()[e] += v * w;
    }
  }
  return r;
}

template <class To, class From>
ZwMatrix<To> convert(const ZwMatrix<From>& a) {
  ZwMatrix<To> r(a.order(), a.rows(), a.cols());
  for (int k = 0; k < a.phi(); ++k)
    for (Eigen::Index e = 0; e < a.plane(k).size(); ++e) {
      const auto& v = a.plane(k).data()[e];
      if (!nz(v)) continue;
      if constexpr (std::is_same_v<To, From>)
        r.plane(k).data()[e] = v;
      else
        r.plane(k).data()[e] = from_mpz<To>(to_mpz(v));
    }
  return r;
}

template <class Int>
CycloMatrix to_cyclo(const ZwMatrix<Int>& a) {
  CycloMatrix r(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r(i, j) = a.at(i, j);
  return r;
}

template <class Int>
void normalize(Scaled<Int>& s) {
  mpz_class g = content(s.m);
  if (g == 0) {
    s.scale = 0;
    return;
  }
  divide_exact(s.m, g);
  s.scale *= g;
}

template <class Int>
Scaled<Int> product(const Scaled<Int>& a, const Scaled<Int>& b) {
  Scaled<Int> r{a.scale * b.scale, product(a.m, b.m)};
  normalize(r);
  return r;
}

template <class Int>
Scaled<Int> commutator(const Scaled<Int>& a, const Scaled<Int>& b) {
  Scaled<Int> r{a.scale * b.scale, sum(product(a.m, b.m), product(b.m, a.m), Int(1), Int(-1))};
  normalize(r);
  return r;
}

template <class Int>
Scaled<Int> combine(const mpq_class& ca, const Scaled<Int>& a, const mpq_class& cb, const Scaled<Int>& b) {
  mpq_class sa = ca * a.scale, sb = cb * b.scale;
  if (sgn(sa) == 0) return Scaled<Int>{sb, b.m};
  if (sgn(sb) == 0) return Scaled<Int>{sa, a.m};
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), sa.get_num_mpz_t(), sb.get_num_mpz_t());
  mpz_lcm(den.get_mpz_t(), sa.get_den_mpz_t(), sb.get_den_mpz_t());
  mpq_class f(num, den);
  f.canonicalize();
  mpq_class ia = sa / f, ib = sb / f;
  Scaled<Int> r{f, sum(a.m, b.m, from_mpz<Int>(ia.get_num()), from_mpz<Int>(ib.get_num()))};
  normalize(r);
  return r;
}

template <class Int>
Scaled<Int> scaled(const mpq_class& c, Scaled<Int> a) {
  a.scale *= c;
  return a;
}

template <class Int>
Scaled<Int> times(const Scaled<Int>& a, const Cyclo& c) {
  mpz_class d = 1;
  for (const auto& v : c.coeffs()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
  std::vector<long long> z;
  for (const auto& v : c.coeffs()) {
    mpz_class n = v.get_num() * (d / v.get_den());
    if (!n.fits_slong_p()) throw IntOverflow("scalar coefficient too large");
    z.push_back(n.get_si());
  }
  if (c.order() == 0 && !z.empty()) {
    // bare rational
    Scaled<Int> r{a.scale * mpq_class(static_cast<long>(z[0])) / d, a.m};
    return r;
  }
  Scaled<Int> r{a.scale / d, times(a.m, z)};
  normalize(r);
  return r;
}

template <class Int>
bool is_zero(const Scaled<Int>& a) {
  return sgn(a.scale) == 0 || is_zero(a.m);
}

template <class Int>
bool equal(const Scaled<Int>& a, const Scaled<Int>& b) {
  return is_zero(combine(mpq_class(1), a, mpq_class(-1), b));
}

template <class Int>
Eigen::MatrixXcd to_complex(const Scaled<Int>& a) {
  return to_complex(a.m, a.scale.get_d());
}

#define CPOTTS_ZW_INSTANTIATE(Int)                                                                   \
  template class ZwMatrix<Int>;                                                                      \
  template ZwMatrix<Int> product(const ZwMatrix<Int>&, const ZwMatrix<Int>&);                        \
  template ZwMatrix<Int> sum(const ZwMatrix<Int>&, const ZwMatrix<Int>&, const Int&, const Int&);    \
  template ZwMatrix<Int> times_omega(const ZwMatrix<Int>&, long);  \
  template ZwMatrix<Int> times(const ZwMatrix<Int>&, const std::vector<long long>&);  \
  template Scaled<Int> times(const Scaled<Int>&, const Cyclo&);                                    \
  template bool is_zero(const ZwMatrix<Int>&);                                                       \
  template mpz_class content(const ZwMatrix<Int>&);                                                  \
  template void divide_exact(ZwMatrix<Int>&, const mpz_class&);                                      \
  template double log2_max_abs(const ZwMatrix<Int>&);                                                \
  template Eigen::MatrixXcd to_complex(const ZwMatrix<Int>&, double);                                \
  template CycloMatrix to_cyclo(const ZwMatrix<Int>&);                                               \
  template void normalize(Scaled<Int>&);                                                             \
  template Scaled<Int> product(const Scaled<Int>&, const Scaled<Int>&);                              \
  template Scaled<Int> commutator(const Scaled<Int>&, const Scaled<Int>&);                           \
  template Scaled<Int> combine(const mpq_class&, const Scaled<Int>&, const mpq_class&, const Scaled<Int>&); \
  template Scaled<Int> scaled(const mpq_class&, Scaled<Int>);                                        \
  template bool is_zero(const Scaled<Int>&);                                                         \
  template bool equal(const Scaled<Int>&, const Scaled<Int>&);                                       \
  template Eigen::MatrixXcd to_complex(const Scaled<Int>&);

CPOTTS_ZW_INSTANTIATE(i128)
CPOTTS_ZW_INSTANTIATE(mpz_class)

template ZwMatrix<mpz_class> convert(const ZwMatrix<i128>&);
template ZwMatrix<i128> convert(const ZwMatrix<mpz_class>&);
template ZwMatrix<i128> convert(const ZwMatrix<i128>&);

}  // namespace cpotts
