#include "cpotts/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cpotts/cyclo.hpp"
#include "cpotts/monodromy.hpp"
#include "cpotts/space.hpp"

namespace cpotts {

namespace {

cd omega(int N, long k) { return omega_c(N, k); }

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double to_d(const mpz_class& x) { return x.get_d(); }

nlohmann::json cj(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

nlohmann::json base_inputs(int N, int L, int Q, double kp, cd lp, cd lq) {
  return {{"N", N}, {"L", L}, {"Q", Q}, {"kp", kp}, {"lambda_p", cj(lp)}, {"lambda_q", cj(lq)}};
}

// P(z) = sum_m Lambda_m z^m
cd poly(const std::vector<mpz_class>& lam, cd z) {
  cd r = 0;
  for (size_t m = lam.size(); m-- > 0;) r = r * z + to_d(lam[m]);
  return r;
}

}  // namespace

CurvePoint curve_point(int N, double kp, cd lambda) {
  double k = std::sqrt(1 - kp * kp);
  CurvePoint c;
  c.lambda = lambda;
  c.x = std::pow((1.0 - kp / lambda) / k, 1.0 / N);
  c.y = std::pow((1.0 - kp * lambda) / k, 1.0 / N);
  c.mu = std::pow(lambda, 1.0 / N);
  return c;
}

CurvePoint prime(const CurvePoint& p) { return {p.y, p.x, 1.0 / p.mu, 1.0 / p.lambda}; }

double curve_residual(int N, double kp, const CurvePoint& p) {
  double k = std::sqrt(1 - kp * kp);
  double r = std::abs(k * std::pow(p.x, N) - (1.0 - kp / p.lambda));
  r = std::max(r, std::abs(k * std::pow(p.y, N) - (1.0 - kp * p.lambda)));
  r = std::max(r, std::abs(std::pow(p.mu, N) - p.lambda));
  return r;
}

SuperintegrableParams make_params(int N, double kp, cd lambda_p, cd lambda_q) {
  if (!(kp > 0 && kp < 1)) throw std::invalid_argument("k' must lie in (0, 1)");
  SuperintegrableParams s;
  s.N = N;
  s.kp = kp;
  s.k = std::sqrt(1 - kp * kp);
  s.p = curve_point(N, kp, lambda_p);
  s.q = curve_point(N, kp, lambda_q);
  s.t_p = s.p.x * s.p.y;
  s.t_q = s.q.x * s.q.y;
  s.lambda_p_plus_one = std::abs(lambda_p - 1.0) < 1e-14;
  s.lambda_p_minus_one = std::abs(lambda_p + 1.0) < 1e-14;
  s.curve_residual = std::max(curve_residual(N, kp, s.p), curve_residual(N, kp, s.q));
  if (s.curve_residual > 1e-12) throw std::runtime_error("curve residual " + std::to_string(s.curve_residual));
  return s;
}

cd solve_theta(const SuperintegrableParams& s, cd z) {
  cd rhs = (s.kp + 1 / s.kp - s.k * s.k * std::pow(s.t_p, s.N) * z / s.kp) / 2.0;
  cd th = std::acosh(rhs) / 2.0;
  if (th.real() < 0) th = -th;
  if (th.real() == 0 && th.imag() < 0) th = -th;
  return th;
}

double theta_residual(const SuperintegrableParams& s, cd z, cd theta) {
  cd rhs = s.kp + 1 / s.kp - s.k * s.k * std::pow(s.t_p, s.N) * z / s.kp;
  return std::abs(2.0 * std::cosh(2.0 * theta) - rhs) / std::max(1.0, std::abs(rhs));
}

cd z_from_theta(double kp, cd lambda_p, cd theta) {
  return (std::exp(2.0 * theta) - kp) * (std::exp(-2.0 * theta) - kp) / ((1.0 - kp * lambda_p) * (1.0 - kp / lambda_p));
}

cd factor_A(cd theta, cd lambda_q) { return std::cosh(theta) * (1.0 - 1.0 / lambda_q); }
cd factor_B(cd theta, cd lambda_q) { return std::sinh(theta) * (1.0 + 1.0 / lambda_q); }

namespace {

// t_p exponent of D^2 making the product identity hold: rN - N m_Q (N for Q != 0, 0 for Q = 0)
int tp_power(int N, int L, int mQ) { return (N - 1) * L - N * mQ; }

std::vector<cd> ladder(cd pre, const std::vector<cd>& A, const std::vector<cd>& B, int sign) {
  int m = static_cast<int>(A.size());
  std::vector<cd> out;
  for (int s = 0; s < (1 << m); ++s) {
    cd v = pre;
    for (int j = 0; j < m; ++j) v *= A[j] + double(sign * ((s >> j & 1) ? -1 : 1)) * B[j];
    out.push_back(v);
  }
  return out;
}

}  // namespace

SpectralLadder predicted_spectrum(const SuperintegrableParams& s, int L, int Q, const DrinfeldData& d,
                                  const DrinfeldData& dbar) {
  const int N = s.N;
  SpectralLadder r;
  r.Q = Q;
  r.mQ = d.mQ;
  r.z = d.roots;
  r.zbar = dbar.roots;
  for (cd z : d.roots) {
    cd th = solve_theta(s, z);
    r.theta.push_back(th);
    r.A.push_back(factor_A(th, s.q.lambda));
    r.B.push_back(factor_B(th, s.q.lambda));
  }
  for (cd z : dbar.roots) {
    cd th = solve_theta(s, z);
    r.theta_bar.push_back(th);
    r.Abar.push_back(factor_A(th, s.q.lambda));
    r.Bbar.push_back(factor_B(th, s.q.lambda));
  }
  double kk = s.kp / (s.k * s.k);
  cd tp = std::pow(s.t_p, tp_power(N, L, d.mQ));
  r.D = std::sqrt(double(N) * tp * to_d(dbar.lambda.front()) * std::pow(kk, d.mQ));
  r.Dhat = std::sqrt(omega(N, Q) * double(N) * tp * to_d(d.lambda.front()) * std::pow(kk, d.mQ));
  r.a = ladder(std::pow(s.q.x, Q) * r.D, r.A, r.B, 1);
  r.b = ladder(std::pow(s.q.y, (N - Q) % N) * r.Dhat, r.Abar, r.Bbar, 1);
  return r;
}

double product_identity_residual(const SuperintegrableParams& s, int L, const DrinfeldData& d, bool omega_twist) {
  const int N = s.N;
  // d is the polynomial on the right; ladder b uses index N - Q roots with the omega^Q twist
  int Q = omega_twist ? (N - d.Q) % N : d.Q;
  double kk = s.kp / (s.k * s.k);
  cd D2 = double(N) * std::pow(s.t_p, tp_power(N, L, d.mQ)) * to_d(d.lambda.back()) * std::pow(kk, d.mQ);
  if (omega_twist) D2 *= omega(N, Q);
  auto G = [&](cd lq) {
    cd v = 1;
    for (cd z : d.roots) {
      cd th = solve_theta(s, z);
      v *= factor_A(th, lq) + factor_B(th, lq);
    }
    return v;
  };
  cd lhs = D2 * G(s.q.lambda) * G(1.0 / s.q.lambda);
  cd t = s.t_q / s.t_p;
  cd rhs = double(N) * std::pow(s.t_p, (N - 1) * L) * poly(d.lambda, std::pow(t, N));
  if (omega_twist) rhs *= omega(N, Q);
  return rel(lhs, rhs);
}

Dressing build_dressing(double kp, cd z, cd theta, cd lambda_p) {
  if (std::abs(z - 1.0) < 1e-12) throw std::domain_error("z = 1: eps singular");
  cd sh = 2.0 * std::sinh(2.0 * theta);
  if (std::abs(sh) < 1e-12) throw std::domain_error("sinh 2theta = 0");
  Dressing d;
  d.z = z;
  d.theta = theta;
  d.lambda_p = lambda_p;
  d.eps = 1.0 / std::sqrt(kp * (z - 1.0) * lambda_p);
  cd e = d.eps, ep = std::exp(theta), em = std::exp(-theta);
  d.M << e * kp * lambda_p, -e * kp * lambda_p, e * kp * lambda_p * z, e * (z - 1.0 - kp * z * lambda_p);
  d.Nm << e * (lambda_p * z - lambda_p - kp * z), e * kp, -e * kp * z, e * kp;
  cd den = d.M(1, 1) * ep + d.Nm(1, 1) * em;
  cd s22 = std::sqrt(den / sh);
  cd s12 = (d.M(0, 1) * ep + d.Nm(0, 1) * em) / den * s22;
  cd s21 = (std::exp(-2.0 * theta) - kp) / (s12 * sh);
  cd s11 = (std::exp(2.0 * theta) - kp) / (s22 * sh);
  d.S << s11, s12, s21, s22;
  d.R << s22, s21 / z, z * s12, s11;
  return d;
}

Eigen::Matrix2cd dressing_closed_form(double kp, cd theta, cd lambda, cd s22) {
  cd e2 = std::exp(2.0 * theta), sh = 2.0 * std::sinh(2.0 * theta);
  Eigen::Matrix2cd m;
  m << (e2 - kp) / (sh * s22), (lambda - kp) * s22 / (e2 - kp),
      (e2 - kp) * (1.0 / e2 - kp) / (sh * (lambda - kp) * s22), s22;
  return m;
}

Eigen::MatrixXcd lift(const Eigen::Matrix2cd& m, const Sl2Family& f, int j) {
  long n = f.H.at(j).rows();
  Eigen::MatrixXcd r = 0.5 * (m(0, 0) + m(1, 1)) * Eigen::MatrixXcd::Identity(n, n);
  r += 0.5 * (m(0, 0) - m(1, 1)) * f.H[j] + m(0, 1) * f.Ep[j] + m(1, 0) * f.Em[j];
  return r;
}

cd kappa(const SuperintegrableParams& s, bool hat) {
  cd r = 1.0 / std::sqrt(double(s.N));
  for (int j = 1; j < s.N; ++j) r *= hat ? s.p.x - omega(s.N, j) * s.q.y : s.p.y - omega(s.N, j) * s.q.x;
  return r;
}

namespace {

std::vector<cd> weight_W(int N, const CurvePoint& p, const CurvePoint& q) {
  std::vector<cd> w(N, 1.0);
  for (int n = 1; n < N; ++n)
    w[n] = w[n - 1] * (p.mu / q.mu) * (q.y - omega(N, n) * p.x) / (p.y - omega(N, n) * q.x);
  return w;
}

std::vector<cd> weight_Wbar(int N, const CurvePoint& p, const CurvePoint& q) {
  std::vector<cd> w(N, 1.0);
  for (int n = 1; n < N; ++n)
    w[n] = w[n - 1] * (p.mu * q.mu) * (omega(N, 1) * p.x - omega(N, n) * q.x) / (q.y - omega(N, n) * p.y);
  return w;
}

}  // namespace

Eigen::MatrixXcd cp_transfer(const SuperintegrableParams& s, int L, int Q, bool hat) {
  const int N = s.N;
  auto basis = enumerate_sector(N, L, 0);
  long dim = basis.size();
  CurvePoint q = hat ? CurvePoint{s.q.y, s.q.x, 1.0 / s.q.mu, 1.0 / s.q.lambda} : s.q;
  CurvePoint pp = prime(s.p);
  std::vector<cd> w1, w2;
  if (hat) {
    w1 = weight_Wbar(N, s.p, q);
    w2 = weight_W(N, pp, q);
  } else {
    w1 = weight_W(N, s.p, q);
    w2 = weight_Wbar(N, pp, q);
  }
  auto heights = [&](const std::vector<int>& n, int d) {
    std::vector<int> h(L);
    h[0] = d;
    for (int J = 0; J + 1 < L; ++J) h[J + 1] = ((h[J] - n[J]) % N + N) % N;
    return h;
  };
  auto md = [N](int a) { return ((a % N) + N) % N; };
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(dim, dim);
  for (long a = 0; a < dim; ++a)
    for (long b = 0; b < dim; ++b) {
      auto hp = heights(basis.states[b], 0);
      cd tot = 0;
      for (int d = 0; d < N; ++d) {
        auto h = heights(basis.states[a], d);
        cd v = 1;
        for (int J = 0; J < L; ++J) {
          int J1 = (J + 1) % L;
          if (hat)
            v *= w1[md(h[J] - hp[J])] * w2[md(h[J] - hp[J1])];
          else
            v *= w1[md(h[J] - hp[J])] * w2[md(h[J1] - hp[J])];
        }
        tot += omega(N, -Q * d) * v;
      }
      T(b, a) = tot;
    }
  return T * std::pow(kappa(s, hat), L);
}

namespace {

struct Tower {
  std::vector<Eigen::VectorXcd> base, X, Y;
};

// X_s = prod_j R_j prod_{s_j = 1} E_j anchor, Y_s the same with S_j
Tower build_tower(const Sl2Action& f, const std::vector<Dressing>& dr, const Eigen::VectorXcd& anchor, bool minus) {
  Tower t;
  int m = static_cast<int>(dr.size());
  using St = Sl2Action::Step;
  for (int s = 0; s < (1 << m); ++s) {
    std::vector<St> word;
    for (int j = 0; j < m; ++j)
      if (s >> j & 1) word.push_back({minus ? Sl2Action::Op::Em : Sl2Action::Op::Ep, j});
    auto wx = word, wy = word;
    for (int j = 0; j < m; ++j) {
      wx.push_back({Sl2Action::Op::Lift, j, dr[j].R});
      wy.push_back({Sl2Action::Op::Lift, j, dr[j].S});
    }
    t.base.push_back(f.apply(word, anchor));
    t.X.push_back(f.apply(wx, anchor));
    t.Y.push_back(f.apply(wy, anchor));
  }
  return t;
}

Eigen::VectorXcd unit(long dim, long i) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(i) = 1;
  return v;
}

// nearest eigenvalue distance, relative
double nearest(const Eigen::VectorXcd& ev, cd v) {
  double best = 1e300;
  for (long i = 0; i < ev.size(); ++i) best = std::min(best, std::abs(ev(i) - v) / std::max(std::abs(v), 1e-300));
  return best;
}

// minimal residual of T x - (+-c) y relative to |T x|
double prop_residual(const Eigen::VectorXcd& tx, const Eigen::VectorXcd& y, cd c) {
  double n = std::max(tx.norm(), 1e-300);
  return std::min((tx - c * y).norm(), (tx + c * y).norm()) / n;
}

Eigen::MatrixXcd tau_at(int N, int L, int Q, cd t) { return evaluate(*shared_tau2(N, L, Q), t); }

cd ground_value(int N, int L, int Q, bool anti, cd t) {
  auto c = ground_eigenvalue(N, L, Q, anti);
  cd v = 0;
  for (size_t k = c.size(); k-- > 0;) v = v * t + to_complex(c[k]);
  return v;
}

std::vector<Dressing> dressings(const SuperintegrableParams& s, const std::vector<cd>& roots) {
  std::vector<Dressing> out;
  for (cd z : roots) out.push_back(build_dressing(s.kp, z, solve_theta(s, z), s.p.lambda));
  return out;
}

cd eig_constant_a(const SuperintegrableParams& s, int Q, const DrinfeldData& d, const DrinfeldData& db) {
  const int N = s.N;
  double kk = s.kp / (s.k * s.k);
  int m = d.mQ;
  cd c2 = double(N) * to_d(db.lambda.front()) * std::pow(kk, m) * std::pow(-s.p.lambda, m);
  if (Q != 0) c2 *= std::pow(s.q.x, 2 * Q) * std::pow(s.p.y, 2 * (N - Q));
  return std::sqrt(c2);
}

cd eig_constant_b(const SuperintegrableParams& s, int Q, const DrinfeldData& d, const DrinfeldData& db) {
  const int N = s.N;
  double kk = s.kp / (s.k * s.k);
  int m = db.mQ;
  cd c2 = double(N) * to_d(d.lambda.front()) * std::pow(kk, m) * std::pow(-s.p.lambda, m);
  if (Q != 0)
    c2 *= omega(N, 2 * Q) * std::pow(s.q.y, 2 * (N - Q)) * std::pow(s.p.x, 2 * Q) *
          std::pow(s.p.lambda / s.q.lambda, 2);
  return std::sqrt(c2);
}

double max_rel_entry(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

int numeric_rank(const std::vector<Eigen::VectorXcd>& vs) {
  if (vs.empty()) return 0;
  Eigen::MatrixXcd m(vs[0].size(), vs.size());
  for (size_t i = 0; i < vs.size(); ++i) m.col(i) = vs[i] / vs[i].norm();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  auto sv = svd.singularValues();
  int r = 0;
  for (long i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-9 * sv(0)) ++r;
  return r;
}

}  // namespace

std::vector<CheckRecord> verify_spectrum(int N, int L, int Q, const SpectrumConfig& cfg) {
  std::vector<CheckRecord> out;
  Q = ((Q % N) + N) % N;
  auto ln = build_loop_numeric(N, L, Q);
  const auto& d = ln.drinfeld;
  const auto& db = ln.drinfeld_bar;
  auto basis = enumerate_sector(N, L, 0);
  long dim = basis.size();
  Eigen::VectorXcd om = unit(dim, basis.index_of(omega_state(L)));
  Eigen::VectorXcd omb = unit(dim, basis.index_of(omega_bar_state(N, L)));
  nlohmann::json in0 = {{"N", N}, {"L", L}, {"Q", Q}, {"kp", cfg.kp}, {"lambda_p", cj(cfg.lambda_p)}};

  // parametrization pieces independent of q
  auto s0 = make_params(N, cfg.kp, cfg.lambda_p, cfg.lambda_q.front());
  out.push_back(residual_check("spectrum.curve_point", "curve", in0, s0.curve_residual, 1e-12));
  {
    double th = 0, rt = 0, pair = 0;
    for (cd z : d.roots) {
      cd t = solve_theta(s0, z);
      th = std::max(th, theta_residual(s0, z, t));
      rt = std::max(rt, rel(z_from_theta(s0.kp, s0.p.lambda, t), z));
      double best = 1e300;
      for (cd zb : db.roots) best = std::min(best, rel(1.0 / zb, z));
      if (Q != 0) pair = std::max(pair, best);
    }
    out.push_back(residual_check("spectrum.theta_solve", "theta", in0, th, 1e-10));
    out.push_back(residual_check("spectrum.theta_round_trip", "ljtjtozj", in0, rt, 1e-9));
    out.push_back(residual_check("spectrum.root_pairing", "theta", in0, pair, 1e-9,
                                 "roots of P_{N-Q} are inverses of roots of P_Q"));
  }
  auto dr = dressings(s0, d.roots);
  auto drb = dressings(s0, db.roots);
  {
    double det = 0, m3 = 0, rea = 0;
    for (const auto* v : {&dr, &drb})
      for (const auto& x : *v) {
        det = std::max({det, std::abs(x.S.determinant() - 1.0), std::abs(x.R.determinant() - 1.0)});
        Eigen::Matrix2cd De, Dp;
        De << std::exp(-x.theta), 0, 0, std::exp(x.theta);
        Dp << std::exp(x.theta), 0, 0, std::exp(-x.theta);
        Eigen::Matrix2cd Ri = x.R.inverse();
        m3 = std::max({m3, max_rel_entry(x.S * De * Ri, x.M), max_rel_entry(-(x.S * Dp * Ri), x.Nm)});
        cd lhs = x.S(1, 0) * x.S(0, 1) * 2.0 * std::sinh(2.0 * x.theta);
        rea = std::max(rea, rel(lhs, std::exp(-2.0 * x.theta) - s0.kp));
      }
    out.push_back(residual_check("spectrum.det", "Sij", in0, det, 1e-10, "det S_j = det R_j = 1"));
    out.push_back(residual_check("spectrum.dressing_product", "matrix3", in0, m3, 1e-9));
    out.push_back(residual_check("spectrum.sij_rearranged", "Sij", in0, rea, 1e-9));
  }
  Sl2Action act(N, L, Q, false), actb(N, L, (N - Q) % N, true);
  auto ta = build_tower(act, dr, om, false);
  auto tb = build_tower(actb, drb, omb, true);
  {
    int ra = numeric_rank(ta.X), rb = numeric_rank(tb.X);
    int want = 1 << d.mQ, wantb = 1 << db.mQ;
    out.push_back(exact_check("spectrum.tower_rank", "evector", in0, ra == want && rb == wantb,
                              "ranks " + std::to_string(ra) + ", " + std::to_string(rb)));
    cd t(0.41, -0.27);
    auto tau = tau_at(N, L, Q, t);
    double res = 0;
    for (int tw = 0; tw < 2; ++tw) {
      const auto& vs = tw ? tb.X : ta.X;
      // Omega carries the ferromagnetic eigenvalue, Omega-bar the partner one
      cd g = ground_value(N, L, Q, tw == 1, t);
      for (const auto& x : vs) res = std::max(res, (tau * x - g * x).norm() / (std::abs(g) * x.norm()));
    }
    out.push_back(residual_check("spectrum.tau_eigen", "ground1", in0, res, 1e-9,
                                 "tower vectors are tau_2 eigenvectors"));
  }

  for (cd lq : cfg.lambda_q) {
    auto s = make_params(N, cfg.kp, cfg.lambda_p, lq);
    auto in = base_inputs(N, L, Q, cfg.kp, cfg.lambda_p, lq);
    auto lad = predicted_spectrum(s, L, Q, d, db);
    out.push_back(residual_check("spectrum.product_identity", "gg2", in, product_identity_residual(s, L, d, false), 1e-8));
    out.push_back(residual_check("spectrum.product_identity_twisted", "gg3", in, product_identity_residual(s, L, db, true), 1e-8));

    auto T = cp_transfer(s, L, Q, false);
    auto Th = cp_transfer(s, L, Q, true);
    cd t = s.t_q / s.t_p;
    auto tau = tau_at(N, L, Q, t);
    out.push_back(residual_check("spectrum.commute", "tau2q", in, (T * tau - tau * T).norm() / (T.norm() * tau.norm()),
                                 cfg.tol_anchor));
    int rN = (N - 1) * L;
    double pre = std::pow(double(N), 1.0 - 0.5 * L);
    cd want = pre * std::pow(s.p.y, rN) * std::pow(s.q.x / s.p.y, Q) *
             poly(d.lambda, std::pow(s.q.x, N) / std::pow(s.p.y, N));
    cd want_hat = pre * std::pow(s.p.x, rN) * std::pow(s.q.y / s.p.x, Q) *
              poly(d.lambda, std::pow(s.q.y, N) / std::pow(s.p.x, N));
    cd got = om.dot(T * om), goth = om.dot(Th * om);
    out.push_back(residual_check("spectrum.anchor", "oto", in, rel(got, want), cfg.tol_anchor,
                                 "kappa = " + std::to_string(std::abs(kappa(s, false)))));
    out.push_back(residual_check("spectrum.anchor_hat", "ohto", in, rel(goth, want_hat), cfg.tol_anchor));
    {
      double r1 = 0, r3 = 0;
      cd xqN = std::pow(s.q.x, N), ypN = std::pow(s.p.y, N), xpN = std::pow(s.p.x, N), yqN = std::pow(s.q.y, N);
      for (int m = 0; m < d.mQ; ++m) {
        cd z = d.roots[m];
        Eigen::VectorXcd bra = ln.sl2.Em[m].adjoint() * om;  // <Omega| E^-
        cd lhs1 = got / bra.dot(T * om);
        r1 = std::max(r1, rel(lhs1, (xqN - ypN * z) / (xqN - ypN)));
        cd lhs3 = goth / om.dot(Th * (ln.sl2.Ep[m] * om));
        r3 = std::max(r3, rel(lhs3, -(xpN - yqN / z) / (xpN - yqN)));
      }
      out.push_back(residual_check("spectrum.ratio_a", "ratio1", in, r1, cfg.tol_ratio));
      out.push_back(residual_check("spectrum.ratio_b", "ratio3", in, r3, cfg.tol_ratio));
    }
    {
      cd ca = eig_constant_a(s, Q, d, db), cb = eig_constant_b(s, Q, d, db);
      double ra = 0, rb = 0;
      auto pa = ladder(1.0, lad.A, lad.B, 1);
      auto pb = ladder(1.0, lad.Abar, lad.Bbar, -1);
      for (size_t i = 0; i < ta.X.size(); ++i) ra = std::max(ra, prop_residual(T * ta.X[i], ta.Y[i], ca * pa[i]));
      for (size_t i = 0; i < tb.X.size(); ++i) rb = std::max(rb, prop_residual(T * tb.X[i], tb.Y[i], cb * pb[i]));
      cd printed_a = std::pow(s.q.x, Q) * lad.D;
      cd printed_b = std::pow(s.q.y, (N - Q) % N) * lad.Dhat;
      auto ratio = [](cd a, cd b) {
        cd r = a / b;
        return "derived/printed constant = " + std::to_string(r.real()) + (r.imag() < 0 ? "" : "+") +
               std::to_string(r.imag()) + "i";
      };
      out.push_back(residual_check("spectrum.eigvector_a", "eig", in, ra, cfg.tol_vector, ratio(ca, printed_a)));
      out.push_back(residual_check("spectrum.eigvector_b", "eig2", in, rb, cfg.tol_vector, ratio(cb, printed_b)));
    }
    {
      double kk = 0;
      cd tt = s.t_q / s.t_p;
      cd ga = std::pow(tt, Q) * double(N) * std::pow(s.t_p, rN) * poly(d.lambda, std::pow(tt, N));
      cd gb = Q == 0 ? ga
                     : omega(N, Q) * std::pow(tt, N - Q) * double(N) * std::pow(s.t_p, rN) *
                           poly(db.lambda, std::pow(tt, N));
      Eigen::MatrixXcd P = Th * T;
      for (const auto& x : ta.X) kk = std::max(kk, (P * x - ga * x).norm() / (std::abs(ga) * x.norm()));
      for (const auto& x : tb.X) kk = std::max(kk, (P * x - gb * x).norm() / (std::abs(gb) * x.norm()));
      out.push_back(residual_check("spectrum.hat_product", "transfer2", in, kk, cfg.tol_vector,
                                   "T-hat T scalar on both towers"));
    }
    {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
      const auto& ev = es.eigenvalues();
      double wa = 0, wb = 0;
      for (cd v : lad.a) wa = std::max(wa, nearest(ev, v));
      for (cd v : lad.b) wb = std::max(wb, nearest(ev, v));
      out.push_back(residual_check("spectrum.containment_a", "eigent", in, wa, cfg.tol_ladder,
                                   "ladder x_q^Q D_Q prod(A +- B) against eig(T_Q)"));
      out.push_back(residual_check("spectrum.containment_b", "eigent", in, wb, cfg.tol_ladder,
                                   "ladder y_q^{N-Q} Dhat_Q prod(A* +- B*) against eig(T_Q)"));
    }
    {
      // lambda_p = -1: R = -S up to sign, so the ground block of T_Q is diagonal on X_s
      auto sm = make_params(N, cfg.kp, cd(-1, 0), lq);
      auto lm = predicted_spectrum(sm, L, Q, d, db);
      auto Tm = cp_transfer(sm, L, Q, false);
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Tm, false);
      cd c = eig_constant_a(sm, Q, d, db);
      auto vals = ladder(c, lm.A, lm.B, 1);
      double w1 = 0, w2 = 0;
      for (cd v : vals) {
        w1 = std::max(w1, nearest(es.eigenvalues(), v));
        w2 = std::max(w2, nearest(es.eigenvalues(), -v));
      }
      auto im = in;
      im["lambda_p"] = cj(cd(-1, 0));
      out.push_back(residual_check("spectrum.containment_lambda_m1", "eigent", im, std::min(w1, w2), cfg.tol_ladder,
                                   "informational: derived constant at lambda_p = -1"));
    }
  }
  return out;
}

std::vector<CheckRecord> verify_q0_dressing(int N, int L, const SpectrumConfig& cfg) {
  std::vector<CheckRecord> out;
  auto ln = build_loop_numeric(N, L, 0);
  const auto& d = ln.drinfeld;
  auto basis = enumerate_sector(N, L, 0);
  long dim = basis.size();
  Eigen::VectorXcd om = unit(dim, basis.index_of(omega_state(L)));
  Eigen::VectorXcd omb = unit(dim, basis.index_of(omega_bar_state(N, L)));
  nlohmann::json in0 = {{"N", N}, {"L", L}, {"Q", 0}, {"kp", cfg.kp}, {"lambda_p", cj(cfg.lambda_p)}};
  auto s = make_params(N, cfg.kp, cfg.lambda_p, cfg.lambda_q.front());
  const double kp = cfg.kp;

  {
    cd prod = 1;
    for (cd z : d.roots) prod *= -z;
    out.push_back(residual_check("q0.vieta", "transfer1f", in0, std::abs(prod - 1.0), 1e-9,
                                 "prod_j (-z_j) = 1"));
  }
  double mn = 0, sj = 0, rj = 0, rs = 0, sw = 0;
  for (cd z : d.roots) {
    cd th = solve_theta(s, z);
    auto x = build_dressing(kp, z, th, s.p.lambda);
    cd lp = s.p.lambda;
    cd eb = 1.0 / std::sqrt(kp * (z - 1.0) * lp);
    Eigen::Matrix2cd M1, N1;
    M1 << eb * kp * lp, -eb * kp * lp, eb * kp * lp * z, eb * (z - 1.0 - kp * z * lp);
    N1 << -eb * (lp - z * lp + kp * z), eb * kp, -eb * kp * z, eb * kp;
    Eigen::Matrix2cd De, Dp;
    De << std::exp(-th), 0, 0, std::exp(th);
    Dp << std::exp(th), 0, 0, std::exp(-th);
    Eigen::Matrix2cd Mc = x.S * De * x.R.inverse(), Nc = -(x.S * Dp * x.R.inverse());
    double scale = std::max(Mc.cwiseAbs().maxCoeff(), Nc.cwiseAbs().maxCoeff());
    mn = std::max({mn, max_rel_entry(Mc, M1), max_rel_entry(Nc, N1), std::abs(Mc(1, 0) + z * Mc(0, 1)) / scale,
                   std::abs(Nc(1, 0) + z * Nc(0, 1)) / scale, std::abs(eb * eb * kp * (z - 1.0) * lp - 1.0)});
    sj = std::max(sj, max_rel_entry(x.S, dressing_closed_form(kp, th, lp, x.S(1, 1))));
    rj = std::max(rj, max_rel_entry(x.R, dressing_closed_form(kp, th, 1.0 / lp, x.R(1, 1))));
    cd e2 = std::exp(2.0 * th);
    cd ratio2 = -(e2 - lp) * (lp - kp) / ((e2 - 1.0 / lp) * (1.0 - kp * lp));
    rs = std::max(rs, rel(std::pow(x.R(1, 1) / x.S(1, 1), 2), ratio2));
    // p <-> p': same theta and z, lambda_p -> 1/lambda_p
    auto y = build_dressing(kp, z, th, 1.0 / lp);
    sw = std::max({sw, max_rel_entry(y.S, x.R), max_rel_entry(y.R, x.S)});
  }
  out.push_back(residual_check("q0.m_entries", "mnij1", in0, mn, cfg.tol_q0,
                               "m21 = -z m12, n21 = -z n12, bareps normalization"));
  out.push_back(residual_check("q0.s_closed_form", "sjuneq", in0, sj, cfg.tol_q0));
  out.push_back(residual_check("q0.r_closed_form", "rjuneq", in0, rj, cfg.tol_q0));
  out.push_back(residual_check("q0.r_from_s", "rjtosj", in0, rs, cfg.tol_q0, "(r22/s22)^2"));
  out.push_back(residual_check("q0.swap", "rjtosj", in0, sw, cfg.tol_q0,
                               "lambda_p -> 1/lambda_p exchanges R and S"));

  for (int sign : {1, -1}) {
    auto sp = make_params(N, kp, cd(sign, 0), cfg.lambda_q.front());
    double worst = 0;
    for (cd z : d.roots) {
      auto x = build_dressing(kp, z, solve_theta(sp, z), sp.p.lambda);
      Eigen::Matrix2cd B = x.S;
      if (sign == 1) B.col(1) *= -1.0;  // S sigma^z
      cd c = x.R(0, 0) / B(0, 0);
      cd want = sign == 1 ? cd(-1, 0) : cd(1, 0);
      worst = std::max({worst, max_rel_entry(x.R, c * B), std::abs(c * c - want)});
    }
    auto in = in0;
    in["lambda_p"] = cj(cd(sign, 0));
    out.push_back(residual_check(sign == 1 ? "q0.lambda_plus1" : "q0.lambda_minus1", "Rij", in, worst,
                                 cfg.tol_q0, sign == 1 ? "R = +-i S sigma^z" : "R = +-S"));
  }

  {
    Eigen::VectorXcd ket = om, bra = om;
    for (int j = 0; j < d.mQ; ++j) {
      ket = ln.sl2.Ep[j] * ket;
      bra = ln.sl2.Em[j].transpose() * bra;  // <Omega| E^-_1 ... E^-_r as a row
    }
    double r = std::max((ket - omb).norm(), (bra - omb).norm());
    out.push_back(residual_check("q0.barred_anchor", "obo", in0, r, cfg.tol_q0));
  }
  for (cd lq : cfg.lambda_q) {
    auto sp = make_params(N, kp, cfg.lambda_p, lq);
    auto T = cp_transfer(sp, L, 0, false);
    cd a = omb.dot(T * om), b = om.dot(T * omb);
    out.push_back(residual_check("q0.anchor_symmetry", "otbo", base_inputs(N, L, 0, kp, cfg.lambda_p, lq), rel(a, b),
                                 cfg.tol_q0));
  }
  return out;
}

nlohmann::json spectrum_summary(int N, int L, int Q, const SpectrumConfig& cfg) {
  Q = ((Q % N) + N) % N;
  auto ln = build_loop_numeric(N, L, Q);
  nlohmann::json j;
  j["N"] = N;
  j["L"] = L;
  j["Q"] = Q;
  j["kp"] = cfg.kp;
  j["lambda_p"] = cj(cfg.lambda_p);
  j["branches"] = {{"x_y_mu", "principal N-th roots"},
                   {"theta", "principal acosh / 2, Re theta >= 0"},
                   {"eps", "principal square root"},
                   {"s22", "principal square root"}};
  for (cd lq : cfg.lambda_q) {
    auto s = make_params(N, cfg.kp, cfg.lambda_p, lq);
    auto lad = predicted_spectrum(s, L, Q, ln.drinfeld, ln.drinfeld_bar);
    auto T = cp_transfer(s, L, Q, false);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
    nlohmann::json e;
    e["lambda_q"] = cj(lq);
    e["point_p"] = {{"x", cj(s.p.x)}, {"y", cj(s.p.y)}, {"mu", cj(s.p.mu)}};
    e["point_q"] = {{"x", cj(s.q.x)}, {"y", cj(s.q.y)}, {"mu", cj(s.q.mu)}};
    e["kappa"] = cj(kappa(s, false));
    e["kappa_hat"] = cj(kappa(s, true));
    for (cd v : lad.theta) e["theta"].push_back(cj(v));
    for (cd v : lad.a) e["ladder_a"].push_back(cj(v));
    for (cd v : lad.b) e["ladder_b"].push_back(cj(v));
    e["D"] = cj(lad.D);
    e["Dhat"] = cj(lad.Dhat);
    e["eig_constant_a"] = cj(eig_constant_a(s, Q, ln.drinfeld, ln.drinfeld_bar));
    e["eig_constant_b"] = cj(eig_constant_b(s, Q, ln.drinfeld, ln.drinfeld_bar));
    for (long i = 0; i < es.eigenvalues().size(); ++i) e["eigenvalues"].push_back(cj(es.eigenvalues()(i)));
    j["points"].push_back(e);
  }
  return j;
}

}  // namespace cpotts
