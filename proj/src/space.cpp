#include "cpotts/space.hpp"

#include <stdexcept>

namespace cpotts {

long full_dim(int N, int L, long cap) {
  if (N < 2 || L < 1) throw std::invalid_argument("need N >= 2 and L >= 1");
  long d = 1;
  for (int j = 0; j < L; ++j) {
    d *= N;
    if (d > cap) throw std::length_error("state space exceeds size cap");
  }
  return d;
}

std::vector<int> decode_state(int N, int L, long idx) {
  std::vector<int> s(L);
  for (int j = L - 1; j >= 0; --j) {
    s[j] = static_cast<int>(idx % N);
    idx /= N;
  }
  return s;
}

long encode_state(int N, const std::vector<int>& s) {
  long idx = 0;
  for (int v : s) idx = idx * N + v;
  return idx;
}

int state_charge(int N, const std::vector<int>& s) {
  long c = 0;
  for (int v : s) c += v;
  return static_cast<int>(c % N);
}

long SectorBasis::index_of(const std::vector<int>& s) const {
  if (static_cast<int>(s.size()) != L) return -1;
  for (int v : s)
    if (v < 0 || v >= N) return -1;
  return sector_of_full[encode_state(N, s)];
}

SectorBasis enumerate_sector(int N, int L, int c, long cap) {
  if (c < 0 || c >= N) throw std::invalid_argument("charge out of range");
  long dim = full_dim(N, L, cap * N);
  if (dim / N > cap) throw std::length_error("sector exceeds size cap");
  SectorBasis b;
  b.N = N;
  b.L = L;
  b.c = c;
  b.sector_of_full.assign(dim, -1);
  for (long i = 0; i < dim; ++i) {
    auto s = decode_state(N, L, i);
    if (state_charge(N, s) != c) continue;
    b.sector_of_full[i] = b.size();
    b.full_index.push_back(i);
    b.states.push_back(std::move(s));
  }
  return b;
}

namespace {

using Trip = Eigen::Triplet<Cyclo>;

// single-site monomial: |a> -> coeff(a) |target(a)>
template <class Fn>
ExactOperator site_operator(int N, int L, int j, int shift, Fn fn) {
  if (j < 1 || j > L) throw std::out_of_range("site index out of range");
  long dim = full_dim(N, L);
  std::vector<Trip> t;
  t.reserve(dim);
  for (long i = 0; i < dim; ++i) {
    auto s = decode_state(N, L, i);
    auto [a2, c] = fn(s[j - 1]);
    if (c.is_zero()) continue;
    s[j - 1] = a2;
    t.emplace_back(encode_state(N, s), i, c);
  }
  ExactOperator op;
  op.N = N;
  op.L = L;
  op.shift = ((shift % N) + N) % N;
  op.m.resize(dim, dim);
  op.m.setFromTriplets(t.begin(), t.end());
  return op;
}

}  // namespace

ExactOperator identity_operator(int N, int L) {
  ExactOperator op;
  op.N = N;
  op.L = L;
  long dim = full_dim(N, L);
  std::vector<Trip> t;
  for (long i = 0; i < dim; ++i) t.emplace_back(i, i, omega_pow(N, 0));
  op.m.resize(dim, dim);
  op.m.setFromTriplets(t.begin(), t.end());
  return op;
}

ExactOperator build_Z(int N, int L, int j) {
  return site_operator(N, L, j, 0, [N](int a) { return std::pair{a, omega_pow(N, a)}; });
}

ExactOperator build_X(int N, int L, int j) {
  return site_operator(N, L, j, 1, [N](int a) { return std::pair{(a + 1) % N, omega_pow(N, 0)}; });
}

ExactOperator build_Xinv(int N, int L, int j) {
  return site_operator(N, L, j, -1, [N](int a) { return std::pair{(a + N - 1) % N, omega_pow(N, 0)}; });
}

ExactOperator build_e(int N, int L, int j) {
  return site_operator(N, L, j, -1, [N](int a) { return std::pair{(a + N - 1) % N, q_integer(N, a)}; });
}

ExactOperator build_f(int N, int L, int j) {
  return site_operator(N, L, j, 1, [N](int a) { return std::pair{(a + 1) % N, q_integer(N, a + 1)}; });
}

template <class S>
void prune(LinearOperator<S>& a) {
  if constexpr (std::is_same_v<S, Cyclo>)
    a.m.prune([](Eigen::Index, Eigen::Index, const S& v) { return !v.is_zero(); });
  else
    a.m.prune([](Eigen::Index, Eigen::Index, const S& v) { return v != S(0); });
}

template <class S>
LinearOperator<S> compose(const LinearOperator<S>& a, const LinearOperator<S>& b) {
  if (a.N != b.N || a.L != b.L) throw std::invalid_argument("operator spaces differ");
  LinearOperator<S> r{a.N, a.L, (a.shift + b.shift) % a.N, Eigen::SparseMatrix<S>(a.m * b.m)};
  prune(r);
  return r;
}

template <class S>
LinearOperator<S> add(const LinearOperator<S>& a, const LinearOperator<S>& b) {
  if (a.N != b.N || a.L != b.L) throw std::invalid_argument("operator spaces differ");
  if (a.shift != b.shift && a.m.nonZeros() && b.m.nonZeros())
    throw std::invalid_argument("adding operators with different charge shifts");
  LinearOperator<S> r{a.N, a.L, a.m.nonZeros() ? a.shift : b.shift, Eigen::SparseMatrix<S>(a.m + b.m)};
  prune(r);
  return r;
}

template <class S>
LinearOperator<S> scale(const S& c, const LinearOperator<S>& a) {
  LinearOperator<S> r = a;
  for (Eigen::Index k = 0; k < r.m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(r.m, k); it; ++it) it.valueRef() = c * it.value();
  prune(r);
  return r;
}

template <class S>
LinearOperator<S> commutator(const LinearOperator<S>& a, const LinearOperator<S>& b) {
  auto ab = compose(a, b);
  auto ba = compose(b, a);
  return add(ab, scale(S(-1), ba));
}

template <class S>
bool is_zero(const LinearOperator<S>& a) {
  for (Eigen::Index k = 0; k < a.m.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(a.m, k); it; ++it) {
      if constexpr (std::is_same_v<S, Cyclo>) {
        if (!it.value().is_zero()) return false;
      } else if (it.value() != S(0)) {
        return false;
      }
    }
  return true;
}

template <class S>
Eigen::SparseMatrix<S> sector_block(const LinearOperator<S>& a, int c_in) {
  SectorBasis in = enumerate_sector(a.N, a.L, ((c_in % a.N) + a.N) % a.N);
  SectorBasis out = enumerate_sector(a.N, a.L, (in.c + a.shift) % a.N);
  std::vector<Eigen::Triplet<S>> t;
  for (long col = 0; col < in.size(); ++col)
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(a.m, in.full_index[col]); it; ++it) {
      long r = out.sector_of_full[it.row()];
      if (r < 0) throw std::logic_error("operator leaves its declared charge sector");
      t.emplace_back(r, col, it.value());
    }
  Eigen::SparseMatrix<S> b(out.size(), in.size());
  b.setFromTriplets(t.begin(), t.end());
  return b;
}

template <class S>
bool respects_grading(const LinearOperator<S>& a) {
  for (Eigen::Index k = 0; k < a.m.outerSize(); ++k) {
    int cin = state_charge(a.N, decode_state(a.N, a.L, k));
    for (typename Eigen::SparseMatrix<S>::InnerIterator it(a.m, k); it; ++it)
      if (state_charge(a.N, decode_state(a.N, a.L, it.row())) != (cin + a.shift) % a.N) return false;
  }
  return true;
}

FloatOperator to_complex(const ExactOperator& a) {
  FloatOperator r{a.N, a.L, a.shift, Eigen::SparseMatrix<std::complex<double>>(a.m.rows(), a.m.cols())};
  std::vector<Eigen::Triplet<std::complex<double>>> t;
  for (Eigen::Index k = 0; k < a.m.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(a.m, k); it; ++it)
      t.emplace_back(it.row(), it.col(), to_complex(it.value()));
  r.m.setFromTriplets(t.begin(), t.end());
  return r;
}

CycloMatrix to_dense(const Eigen::SparseMatrix<Cyclo>& a) {
  CycloMatrix d = CycloMatrix::Constant(a.rows(), a.cols(), Cyclo(0));
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(a, k); it; ++it) d(it.row(), it.col()) = it.value();
  return d;
}

CycloMatrix to_dense(const ExactOperator& a) { return to_dense(a.m); }

Eigen::MatrixXcd to_dense(const FloatOperator& a) { return Eigen::MatrixXcd(a.m); }

ZwMatrix<i128> to_zw(int N, const Eigen::SparseMatrix<Cyclo>& a) {
  ZwMatrix<i128> r(N, a.rows(), a.cols());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(a, k); it; ++it)
      r.add_to(it.row(), it.col(), integer_coeffs(Cyclo(N, {}) + it.value()));
  return r;
}

ZwMatrix<i128> to_zw(int N, const CycloMatrix& a) {
  ZwMatrix<i128> r(N, a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) r.add_to(i, j, integer_coeffs(Cyclo(N, {}) + a(i, j)));
  return r;
}

nlohmann::json triplets(const ExactOperator& a) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < a.m.outerSize(); ++k)
    for (Eigen::SparseMatrix<Cyclo>::InnerIterator it(a.m, k); it; ++it) {
      Cyclo v = Cyclo(a.N, {}) + it.value();
      nlohmann::json c = nlohmann::json::array();
      for (const auto& q : v.coeffs()) c.push_back(q.get_str());
      out.push_back({it.row(), it.col(), c});
    }
  return out;
}

#define CPOTTS_SPACE_INSTANTIATE(S)                                                          \
  template LinearOperator<S> compose(const LinearOperator<S>&, const LinearOperator<S>&);    \
  template LinearOperator<S> add(const LinearOperator<S>&, const LinearOperator<S>&);        \
  template LinearOperator<S> scale(const S&, const LinearOperator<S>&);                      \
  template LinearOperator<S> commutator(const LinearOperator<S>&, const LinearOperator<S>&); \
  template void prune(LinearOperator<S>&);                                                   \
  template bool is_zero(const LinearOperator<S>&);                                           \
  template Eigen::SparseMatrix<S> sector_block(const LinearOperator<S>&, int);               \
  template bool respects_grading(const LinearOperator<S>&);

CPOTTS_SPACE_INSTANTIATE(Cyclo)
CPOTTS_SPACE_INSTANTIATE(std::complex<double>)

}  // namespace cpotts
