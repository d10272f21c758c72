#include "cpotts/monodromy.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cpotts {

namespace {

ExactOperator zero_operator(int N, int L, int shift) {
  long dim = full_dim(N, L);
  return ExactOperator{N, L, ((shift % N) + N) % N, Eigen::SparseMatrix<Cyclo>(dim, dim)};
}

OperatorPolynomial poly_mul(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  const auto& a0 = a.coeffs.front();
  const auto& b0 = b.coeffs.front();
  OperatorPolynomial r;
  r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, zero_operator(a0.N, a0.L, a0.shift + b0.shift));
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].m.nonZeros() == 0) continue;
    for (size_t j = 0; j < b.coeffs.size(); ++j) {
      if (b.coeffs[j].m.nonZeros() == 0) continue;
      r.coeffs[i + j] = add(r.coeffs[i + j], compose(a.coeffs[i], b.coeffs[j]));
    }
  }
  return r;
}

OperatorPolynomial poly_add(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial r = a.coeffs.size() >= b.coeffs.size() ? a : b;
  const OperatorPolynomial& s = a.coeffs.size() >= b.coeffs.size() ? b : a;
  for (size_t k = 0; k < s.coeffs.size(); ++k) r.coeffs[k] = add(r.coeffs[k], s.coeffs[k]);
  return r;
}

void trim(OperatorPolynomial& p) {
  while (p.coeffs.size() > 1 && p.coeffs.back().m.nonZeros() == 0) p.coeffs.pop_back();
}

ExactOperator coefficient(const OperatorPolynomial& p, int k, int shift) {
  if (k >= 0 && k < static_cast<int>(p.coeffs.size())) return p.coeffs[k];
  const auto& c = p.coeffs.front();
  return zero_operator(c.N, c.L, shift);
}

bool sparse_equal(const Eigen::SparseMatrix<Cyclo>& a, const Eigen::SparseMatrix<Cyclo>& b) {
  Eigen::SparseMatrix<Cyclo> d = a - b;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(d, k); it; ++it)
      if (!it.value().is_zero()) return false;
  return true;
}

nlohmann::json nl(int N, int L) { return {{"N", N}, {"L", L}}; }

// ---- exact bivariate operator-polynomial identities on Z[omega] matrices ----

using ZM = ZwMatrix<i128>;
using ZPoly = std::vector<ZM>;
using Mono = std::pair<int, int>;
using ScalarPoly = std::map<Mono, Cyclo>;

struct Factor {
  const ZPoly* p;
  int var;  // 0 = x, 1 = y; constants are length-1 polynomials
};

struct Term {
  ScalarPoly scalar;
  std::vector<Factor> factors;
};

ScalarPoly mono(const Cyclo& c, int i = 0, int j = 0) { return {{{i, j}, c}}; }

ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) {
  for (const auto& [k, v] : b) a[k] = a.count(k) ? a[k] + v : v;
  return a;
}

ScalarPoly operator*(const Cyclo& c, ScalarPoly a) {
  for (auto& [k, v] : a) v = c * v;
  return a;
}

class Identity {
 public:
  Identity(int N, long dim) : n_(N), dim_(dim) {}

  void add(const ScalarPoly& s, std::initializer_list<Factor> fs) { terms_.push_back({s, fs}); }

  // empty string on success, else the first nonzero coefficient entry
  std::string residual() const {
    std::map<Mono, ZM> total;
    for (const auto& t : terms_) {
      std::map<Mono, ZM> prod;
      bool first = true;
      for (const auto& f : t.factors) {
        std::map<Mono, ZM> next;
        for (size_t k = 0; k < f.p->size(); ++k) {
          const ZM& c = (*f.p)[k];
          if (is_zero(c)) continue;
          Mono dk = f.var == 0 ? Mono{static_cast<int>(k), 0} : Mono{0, static_cast<int>(k)};
          if (first) {
            accumulate(next, dk, c);
            continue;
          }
          for (const auto& [m, a] : prod) accumulate(next, {m.first + dk.first, m.second + dk.second}, product(a, c));
        }
        prod = std::move(next);
        first = false;
      }
      for (const auto& [m, a] : prod)
        for (const auto& [sm, sc] : t.scalar) {
          if (sc.is_zero()) continue;
          accumulate(total, {m.first + sm.first, m.second + sm.second}, times(a, integer_coeffs(Cyclo(n_, {}) + sc)));
        }
    }
    for (const auto& [m, a] : total) {
      if (is_zero(a)) continue;
      for (Eigen::Index c = 0; c < a.cols(); ++c)
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
          Cyclo v = a.at(r, c);
          if (v.is_zero()) continue;
          std::ostringstream os;
          os << "coefficient x^" << m.first << " y^" << m.second << " entry (" << r << "," << c << ") = " << v.str();
          return os.str();
        }
    }
    return {};
  }

 private:
  static void accumulate(std::map<Mono, ZM>& acc, Mono m, const ZM& a) {
    auto it = acc.find(m);
    if (it == acc.end())
      acc.emplace(m, a);
    else
      it->second = sum(it->second, a);
  }

  int n_;
  long dim_;
  std::vector<Term> terms_;
};

ZPoly zpoly_t(const OperatorPolynomial& p) {
  ZPoly r;
  for (const auto& c : t_coefficients(p)) r.push_back(to_zw(c.N, c.m));
  return r;
}

ZPoly zconst(const ExactOperator& op) { return {to_zw(op.N, op.m)}; }

ZPoly zpow(const ZM& a, int n, long dim) {
  ZM r = ZM::identity(a.order(), dim);
  for (int k = 0; k < n; ++k) r = product(r, a);
  return {r};
}

CheckRecord identity_record(const std::string& id, const std::string& rel, nlohmann::json inputs,
                            const Identity& I) {
  Stopwatch sw;
  std::string res = I.residual();
  auto r = exact_check(id, rel, std::move(inputs), res.empty(), res);
  r.seconds = sw.seconds();
  return r;
}

}  // namespace

LocalSquare build_local_square(int N, int L, int j) {
  auto I = identity_operator(N, L);
  auto Z = build_Z(N, L, j);
  auto X = build_X(N, L, j);
  auto Xi = build_Xinv(N, L, j);
  auto oneMinusZ = add(I, scale(Cyclo(-1), Z));
  LocalSquare s;
  s[0][0].coeffs = {I, Z};
  s[0][1].coeffs = {zero_operator(N, L, 1), compose(oneMinusZ, X)};
  s[1][0].coeffs = {compose(Xi, oneMinusZ)};
  s[1][1].coeffs = {scale(omega_pow(N, 1), Z), I};
  return s;
}

MonodromyFamily build_monodromy(int N, int L) {
  if (L < 1) throw std::invalid_argument("monodromy needs L >= 1");
  LocalSquare U = build_local_square(N, L, 1);
  for (int j = 2; j <= L; ++j) {
    LocalSquare loc = build_local_square(N, L, j);
    LocalSquare next;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next[a][b] = poly_add(poly_mul(U[a][0], loc[0][b]), poly_mul(U[a][1], loc[1][b]));
    U = std::move(next);
  }
  MonodromyFamily f;
  f.N = N;
  f.L = L;
  f.A = U[0][0];
  f.B = U[0][1];
  f.C = U[1][0];
  f.D = U[1][1];
  for (auto* p : {&f.A, &f.B, &f.C, &f.D}) trim(*p);
  return f;
}

std::vector<ExactOperator> t_coefficients(const OperatorPolynomial& p) {
  std::vector<ExactOperator> r;
  for (size_t k = 0; k < p.coeffs.size(); ++k) {
    const auto& c = p.coeffs[k];
    Cyclo f = omega_pow(c.N, static_cast<long>(k));
    if (k % 2) f = -f;
    r.push_back(scale(f, c));
  }
  return r;
}

Tau2Block build_tau2_block(const MonodromyFamily& fam, int Q) {
  Tau2Block t{fam.N, fam.L, Q, {}};
  auto At = t_coefficients(fam.A);
  auto Dt = t_coefficients(fam.D);
  Cyclo wq = omega_pow(fam.N, -Q);
  size_t deg = std::max(At.size(), Dt.size());
  for (size_t k = 0; k < deg; ++k) {
    ExactOperator s = k < At.size() ? At[k] : zero_operator(fam.N, fam.L, 0);
    if (k < Dt.size()) s = add(s, scale(wq, Dt[k]));
    t.coeffs.push_back(sector_block(s, 0));
  }
  return t;
}

Eigen::SparseMatrix<Cyclo> evaluate(const Tau2Block& tau, const Cyclo& t) {
  Eigen::SparseMatrix<Cyclo> r = tau.coeffs.front();
  Cyclo tk = omega_pow(tau.N, 0);
  for (size_t k = 1; k < tau.coeffs.size(); ++k) {
    tk *= t;
    Eigen::SparseMatrix<Cyclo> term = tau.coeffs[k];
    for (Eigen::Index c = 0; c < term.outerSize(); ++c)
      for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(term, c); it; ++it) it.valueRef() = tk * it.value();
    r = r + term;
  }
  return r;
}

Eigen::MatrixXcd evaluate(const Tau2Block& tau, std::complex<double> t) {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(tau.coeffs.front().rows(), tau.coeffs.front().cols());
  std::complex<double> tk = 1;
  for (const auto& c : tau.coeffs) {
    for (Eigen::Index k = 0; k < c.outerSize(); ++k)
      for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(c, k); it; ++it) r(it.row(), it.col()) += tk * to_complex(it.value());
    tk *= t;
  }
  return r;
}

std::shared_ptr<const MonodromyFamily> shared_monodromy(int N, int L) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonodromyFamily>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{N, L}];
  if (!slot) slot = std::make_shared<const MonodromyFamily>(build_monodromy(N, L));
  return slot;
}

std::shared_ptr<const Tau2Block> shared_tau2(int N, int L, int Q) {
  Q = ((Q % N) + N) % N;
  auto fam = shared_monodromy(N, L);
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Tau2Block>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{N, L, Q}];
  if (!slot) slot = std::make_shared<const Tau2Block>(build_tau2_block(*fam, Q));
  return slot;
}

std::vector<ZwMatrix<i128>> to_zw(const Tau2Block& tau) {
  std::vector<ZwMatrix<i128>> r;
  for (const auto& c : tau.coeffs) r.push_back(to_zw(tau.N, c));
  return r;
}

std::vector<Cyclo> ground_eigenvalue(int N, int L, int Q, bool antiferro) {
  std::vector<Cyclo> r;
  Cyclo wq = omega_pow(N, -Q);
  mpz_class binom = 1;
  for (int k = 0; k <= L; ++k) {
    Cyclo sign(k % 2 ? -1 : 1);
    Cyclo a = sign * omega_pow(N, k) * Cyclo(mpq_class(binom));  // (1 - omega t)^L
    Cyclo b = sign * Cyclo(mpq_class(binom));                    // (1 - t)^L
    r.push_back(antiferro ? wq * a + b : a + wq * b);
    binom = binom * (L - k) / (k + 1);
  }
  return r;
}

std::vector<CheckRecord> verify_leading_coefficients(const MonodromyFamily& fam) {
  const int N = fam.N, L = fam.L;
  std::vector<CheckRecord> out;
  auto I = identity_operator(N, L);
  auto prodZ = I;
  for (int j = 1; j <= L; ++j) prodZ = compose(prodZ, build_Z(N, L, j));
  auto eq = [&](const ExactOperator& a, const ExactOperator& b) { return sparse_equal(a.m, b.m); };
  auto zero = [&](const ExactOperator& a) { return is_zero(a); };

  out.push_back(exact_check("monodromy.A0", "AD", nl(N, L), eq(coefficient(fam.A, 0, 0), I)));
  out.push_back(exact_check("monodromy.DL", "AD", nl(N, L), eq(coefficient(fam.D, L, 0), I)));
  out.push_back(exact_check("monodromy.AL", "AD", nl(N, L), eq(coefficient(fam.A, L, 0), prodZ)));
  out.push_back(exact_check("monodromy.D0", "AD", nl(N, L),
                            eq(coefficient(fam.D, 0, 0), scale(omega_pow(N, L), prodZ))));
  out.push_back(exact_check("monodromy.CL", "AD", nl(N, L), zero(coefficient(fam.C, L, N - 1))));
  out.push_back(exact_check("monodromy.B0", "AD", nl(N, L), zero(coefficient(fam.B, 0, 1))));
  bool degrees = fam.A.degree() <= L && fam.B.degree() <= L && fam.C.degree() <= L && fam.D.degree() <= L;
  out.push_back(exact_check("monodromy.degrees", "ABCD", nl(N, L), degrees));

  Cyclo omw = omega_pow(N, 0) - omega_pow(N, 1);
  auto BL = zero_operator(N, L, 1), C0 = zero_operator(N, L, -1);
  auto B1 = zero_operator(N, L, 1), CL1 = zero_operator(N, L, -1);
  for (int j = 1; j <= L; ++j) {
    auto left = I, right = I;
    for (int m = 1; m < j; ++m) left = compose(left, build_Z(N, L, m));
    for (int m = j + 1; m <= L; ++m) right = compose(right, build_Z(N, L, m));
    auto f = build_f(N, L, j), e = build_e(N, L, j);
    BL = add(BL, compose(left, f));
    C0 = add(C0, scale(omega_pow(N, j - 1), compose(left, e)));
    B1 = add(B1, scale(omega_pow(N, L - j), compose(f, right)));
    CL1 = add(CL1, compose(e, right));
  }
  out.push_back(exact_check("monodromy.BL", "BC", nl(N, L), eq(coefficient(fam.B, L, 1), scale(omw, BL))));
  out.push_back(exact_check("monodromy.C0", "BC", nl(N, L), eq(coefficient(fam.C, 0, N - 1), scale(omw, C0))));
  out.push_back(exact_check("monodromy.B1", "BC", nl(N, L), eq(coefficient(fam.B, 1, 1), scale(omw, B1))));
  out.push_back(
      exact_check("monodromy.CLm1", "BC", nl(N, L), eq(coefficient(fam.C, L - 1, N - 1), scale(omw, CL1))));
  return out;
}

std::vector<CheckRecord> verify_ground_states(const MonodromyFamily& fam) {
  const int N = fam.N, L = fam.L;
  std::vector<CheckRecord> out;
  SectorBasis s0 = enumerate_sector(N, L, 0);
  long omega_idx = s0.index_of(std::vector<int>(L, 0));
  long bar_idx = s0.index_of(std::vector<int>(L, N - 1));
  for (int Q = 0; Q < N; ++Q) {
    Stopwatch sw;
    Tau2Block tau = build_tau2_block(fam, Q);
    for (bool anti : {false, true}) {
      long idx = anti ? bar_idx : omega_idx;
      nlohmann::json in = {{"N", N}, {"L", L}, {"Q", Q}};
      std::string id = anti ? "monodromy.ground_omega_bar" : "monodromy.ground_omega";
      if (idx < 0) {
        out.push_back(exact_check(id, anti ? "ground2" : "ground1", in, false,
                                  "state outside the charge-0 sector (L(N-1) not divisible by N)"));
        continue;
      }
      auto ev = ground_eigenvalue(N, L, Q, anti);
      std::string detail;
      for (size_t k = 0; k < std::max(ev.size(), tau.coeffs.size()) && detail.empty(); ++k) {
        Cyclo expect = k < ev.size() ? ev[k] : Cyclo(0);
        if (k >= tau.coeffs.size()) {
          if (!expect.is_zero()) detail = "missing t^" + std::to_string(k);
          continue;
        }
        for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(tau.coeffs[k], idx); it; ++it) {
          Cyclo want = it.row() == idx ? expect : Cyclo(0);
          if (!(it.value() - want).is_zero())
            detail = "t^" + std::to_string(k) + " row " + std::to_string(it.row()) + " = " + it.value().str();
        }
        if (tau.coeffs[k].coeff(idx, idx).is_zero() && !expect.is_zero())
          detail = "t^" + std::to_string(k) + " diagonal vanishes";
      }
      auto r = exact_check(id, anti ? "ground2" : "ground1", in, detail.empty(), detail);
      r.seconds = sw.seconds();
      out.push_back(r);
    }
  }
  return out;
}

CheckRecord verify_tau2_commuting(const Tau2Block& tau) {
  Stopwatch sw;
  auto z = to_zw(tau);
  std::string detail;
  for (size_t i = 0; i < z.size() && detail.empty(); ++i)
    for (size_t j = i + 1; j < z.size() && detail.empty(); ++j)
      if (!is_zero(sum(product(z[i], z[j]), product(z[j], z[i]), i128(1), i128(-1))))
        detail = "[tau_" + std::to_string(i) + ", tau_" + std::to_string(j) + "] != 0";
  auto r = exact_check("monodromy.tau2_commuting", "tau2q", {{"N", tau.N}, {"L", tau.L}, {"Q", tau.Q}},
                       detail.empty(), detail);
  r.seconds = sw.seconds();
  return r;
}

CheckRecord verify_d0_identity(const MonodromyFamily& fam) {
  auto d0 = sector_block(coefficient(fam.D, 0, 0), 0);
  Eigen::SparseMatrix<Cyclo> I(d0.rows(), d0.cols());
  std::vector<Eigen::Triplet<Cyclo>> t;
  for (Eigen::Index k = 0; k < d0.rows(); ++k) t.emplace_back(k, k, omega_pow(fam.N, 0));
  I.setFromTriplets(t.begin(), t.end());
  return exact_check("monodromy.D0_identity", "tauCB", nl(fam.N, fam.L), sparse_equal(d0, I));
}

std::vector<CheckRecord> verify_three_term_relations(const MonodromyFamily& fam) {
  const int N = fam.N;
  const long dim = full_dim(N, fam.L);
  ZPoly A = zpoly_t(fam.A), B = zpoly_t(fam.B), C = zpoly_t(fam.C), D = zpoly_t(fam.D);
  Cyclo one = omega_pow(N, 0), wi = omega_pow(N, -1), omi = one - wi;
  // (y - omega^{-1} x) and (y - x)
  ScalarPoly ywx = mono(one, 0, 1) + mono(-wi, 1, 0);
  ScalarPoly yx = mono(one, 0, 1) + mono(-one, 1, 0);
  ScalarPoly y = mono(one, 0, 1);
  auto X = [](const ZPoly& p) { return Factor{&p, 0}; };
  auto Y = [](const ZPoly& p) { return Factor{&p, 1}; };
  std::vector<CheckRecord> out;
  nlohmann::json in = nl(N, fam.L);

  Identity y1(N, dim);
  y1.add(ywx, {X(A), Y(B)});
  y1.add(-one * yx, {Y(B), X(A)});
  y1.add(-omi * y, {Y(A), X(B)});
  out.push_back(identity_record("monodromy.yang_baxter_1", "YBE1", in, y1));

  Identity y2(N, dim);
  y2.add(ywx, {Y(A), X(C)});
  y2.add(-wi * yx, {X(C), Y(A)});
  y2.add(-omi * y, {X(A), Y(C)});
  out.push_back(identity_record("monodromy.yang_baxter_2", "YBE2", in, y2));

  Identity y3(N, dim);
  y3.add(ywx, {X(C), Y(D)});
  y3.add(-one * yx, {Y(D), X(C)});
  y3.add(-omi * y, {Y(C), X(D)});
  out.push_back(identity_record("monodromy.yang_baxter_3", "YBE3", in, y3));

  Identity y4(N, dim);
  y4.add(ywx, {Y(B), X(D)});
  y4.add(-wi * yx, {X(D), Y(B)});
  y4.add(-omi * y, {X(B), Y(D)});
  out.push_back(identity_record("monodromy.yang_baxter_4", "YBE4", in, y4));

  const char* names[] = {"A", "B", "C", "D"};
  const ZPoly* polys[] = {&A, &B, &C, &D};
  for (int k = 0; k < 4; ++k) {
    Identity c(N, dim);
    c.add(mono(one), {X(*polys[k]), Y(*polys[k])});
    c.add(mono(-one), {Y(*polys[k]), X(*polys[k])});
    out.push_back(identity_record(std::string("monodromy.commuting_") + names[k], "fourcomm", in, c));
  }
  return out;
}

std::vector<CheckRecord> verify_boundary_and_induction(const MonodromyFamily& fam, int n_max) {
  const int N = fam.N, L = fam.L;
  const long dim = full_dim(N, L);
  ZPoly A = zpoly_t(fam.A), B = zpoly_t(fam.B), C = zpoly_t(fam.C), D = zpoly_t(fam.D);
  ZPoly AL = zconst(coefficient(fam.A, L, 0)), D0 = zconst(coefficient(fam.D, 0, 0));
  ZPoly B1 = zconst(coefficient(fam.B, 1, 1)), BL = zconst(coefficient(fam.B, L, 1));
  ZPoly C0 = zconst(coefficient(fam.C, 0, N - 1)), CL1 = zconst(coefficient(fam.C, L - 1, N - 1));
  Cyclo one = omega_pow(N, 0), w = omega_pow(N, 1), wi = omega_pow(N, -1);
  Cyclo omi = one - wi, wm1 = w - one;
  auto V = [](const ZPoly& p) { return Factor{&p, 0}; };
  ScalarPoly v = mono(one, 1, 0);
  std::vector<CheckRecord> out;
  nlohmann::json in = nl(N, L);

  auto rec = [&](const std::string& id, const std::string& rel, const Identity& I, nlohmann::json inputs) {
    out.push_back(identity_record(id, rel, std::move(inputs), I));
  };

  {
    Identity a(N, dim), b(N, dim);
    a.add(mono(one), {V(AL), V(B)});
    a.add(mono(-w), {V(B), V(AL)});
    b.add(mono(one), {V(D0), V(B)});
    b.add(mono(-w), {V(B), V(D0)});
    rec("monodromy.boundary1_A", "com1", a, in);
    rec("monodromy.boundary1_D", "com1", b, in);
  }
  {
    Identity a(N, dim);
    a.add(v, {V(A), V(B1)});
    a.add(-w * v, {V(B1), V(A)});
    a.add(mono(-omi), {V(B)});
    rec("monodromy.boundary2", "com2", a, in);
  }
  {
    Identity a(N, dim), b(N, dim);
    a.add(mono(one), {V(A), V(BL)});
    a.add(mono(-one), {V(BL), V(A)});
    a.add(mono(-omi), {V(AL), V(B)});
    b.add(mono(omi), {V(AL), V(B)});
    b.add(mono(-wm1), {V(B), V(AL)});
    rec("monodromy.boundary3", "com3", a, in);
    rec("monodromy.boundary3_alt", "com3", b, in);
  }
  {
    Identity a(N, dim), b(N, dim), c(N, dim), d(N, dim);
    a.add(mono(one), {V(AL), V(C)});
    a.add(mono(-wi), {V(C), V(AL)});
    b.add(mono(one), {V(D0), V(C)});
    b.add(mono(-wi), {V(C), V(D0)});
    c.add(mono(one), {V(A), V(C0)});
    c.add(mono(-wi), {V(C0), V(A)});
    c.add(mono(-omi), {V(C)});
    d.add(mono(one), {V(A), V(CL1)});
    d.add(mono(-one), {V(CL1), V(A)});
    d.add(-wm1 * v, {V(C), V(AL)});
    rec("monodromy.boundary4_AL", "com4", a, in);
    rec("monodromy.boundary4_D0", "com4", b, in);
    rec("monodromy.boundary4_C0", "com4", c, in);
    rec("monodromy.boundary4_CLm1", "com4", d, in);
  }
  {
    Identity a(N, dim), b(N, dim), c(N, dim), d(N, dim);
    a.add(mono(one), {V(D), V(C0)});
    a.add(mono(-one), {V(C0), V(D)});
    a.add(mono(omi), {V(C), V(D0)});
    b.add(mono(one), {V(D), V(CL1)});
    b.add(mono(-wi), {V(CL1), V(D)});
    b.add(wm1 * v, {V(C)});
    c.add(v, {V(D), V(B1)});
    c.add(-one * v, {V(B1), V(D)});
    c.add(mono(omi), {V(B), V(D0)});
    d.add(mono(one), {V(D), V(BL)});
    d.add(mono(-w), {V(BL), V(D)});
    d.add(mono(wm1), {V(B)});
    rec("monodromy.boundary5_C0", "com5", a, in);
    rec("monodromy.boundary5_CLm1", "com5", b, in);
    rec("monodromy.boundary5_B1", "com5", c, in);
    rec("monodromy.boundary5_BL", "com5", d, in);
  }

  for (int n = 1; n <= n_max; ++n) {
    ZPoly C0n = zpow(C0[0], n, dim), C0n1 = zpow(C0[0], n - 1, dim);
    ZPoly B1n = zpow(B1[0], n, dim), B1n1 = zpow(B1[0], n - 1, dim);
    ZPoly CLn = zpow(CL1[0], n, dim), CLn1 = zpow(CL1[0], n - 1, dim);
    ZPoly BLn = zpow(BL[0], n, dim), BLn1 = zpow(BL[0], n - 1, dim);
    Cyclo qn = q_integer(N, n), wn = omega_pow(N, n), wmn = omega_pow(N, -n), w1n = omega_pow(N, 1 - n);
    nlohmann::json inn = {{"N", N}, {"L", L}, {"n", n}};
    Identity i1(N, dim), i2(N, dim), i3(N, dim), i4(N, dim), i5(N, dim), i6(N, dim), i7(N, dim), i8(N, dim);
    i1.add(mono(one), {V(A), V(C0n)});
    i1.add(mono(-wmn), {V(C0n), V(A)});
    i1.add(mono(-(wm1 * wmn * qn)), {V(C0n1), V(C)});
    i2.add(mono(one), {V(D), V(C0n)});
    i2.add(mono(-one), {V(C0n), V(D)});
    i2.add(mono(wm1 * wmn * qn), {V(C0n1), V(C), V(D0)});
    i3.add(v, {V(A), V(B1n)});
    i3.add(-wn * v, {V(B1n), V(A)});
    i3.add(mono(-(omi * qn)), {V(B1n1), V(B)});
    i4.add(v, {V(D), V(B1n)});
    i4.add(-one * v, {V(B1n), V(D)});
    i4.add(mono(omi * qn), {V(B1n1), V(B), V(D0)});
    i5.add(mono(one), {V(A), V(CLn)});
    i5.add(mono(-one), {V(CLn), V(A)});
    i5.add(-(wm1 * w1n * qn) * v, {V(CLn1), V(C), V(AL)});
    i6.add(mono(one), {V(D), V(CLn)});
    i6.add(mono(-wmn), {V(CLn), V(D)});
    i6.add((wm1 * w1n * qn) * v, {V(CLn1), V(C)});
    i7.add(mono(one), {V(A), V(BLn)});
    i7.add(mono(-one), {V(BLn), V(A)});
    i7.add(mono(-(wm1 * qn)), {V(BLn1), V(B), V(AL)});
    i8.add(mono(one), {V(D), V(BLn)});
    i8.add(mono(-wn), {V(BLn), V(D)});
    i8.add(mono(wm1 * qn), {V(BLn1), V(B)});
    const Identity* ids[] = {&i1, &i2, &i3, &i4, &i5, &i6, &i7, &i8};
    for (int k = 0; k < 8; ++k) {
      rec("monodromy.induction_" + std::to_string(k + 1), "ind" + std::to_string(k + 1), *ids[k], inn);
    }
  }
  return out;
}

}  // namespace cpotts
