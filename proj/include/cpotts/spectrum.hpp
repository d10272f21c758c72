#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "cpotts/drinfeld.hpp"
#include "cpotts/loopalg.hpp"
#include "cpotts/report.hpp"

namespace cpotts {

// (x, y, mu) on the chiral Potts curve, lambda = mu^N
struct CurvePoint {
  cd x, y, mu, lambda;
};

struct SuperintegrableParams {
  int N = 0;
  double kp = 0, k = 0;
  CurvePoint p, q;
  cd t_p, t_q;
  bool lambda_p_plus_one = false, lambda_p_minus_one = false;
  double curve_residual = 0;
};

// principal N-th roots: x = ((1 - k'/lambda)/k)^{1/N}, y = ((1 - k' lambda)/k)^{1/N}, mu = lambda^{1/N}
CurvePoint curve_point(int N, double kp, cd lambda);
// p' = (y_p, x_p, 1/mu_p)
CurvePoint prime(const CurvePoint& p);
double curve_residual(int N, double kp, const CurvePoint& p);

// throws std::invalid_argument unless 0 < k' < 1, std::runtime_error on curve residual > 1e-12
SuperintegrableParams make_params(int N, double kp, cd lambda_p, cd lambda_q);

// 2 cosh 2theta = k' + 1/k' - k^2 t_p^N z / k', Re theta >= 0
cd solve_theta(const SuperintegrableParams& s, cd z);
double theta_residual(const SuperintegrableParams& s, cd z, cd theta);
// z = (e^{2theta} - k')(e^{-2theta} - k') / ((1 - k' lambda_p)(1 - k'/lambda_p))
cd z_from_theta(double kp, cd lambda_p, cd theta);

struct SpectralLadder {
  int Q = 0, mQ = 0;
  std::vector<cd> z, theta, A, B;
  cd D, Dhat;
  // ladder a: x_q^Q D_Q prod (A +- B) with index Q roots;
  // ladder b: y_q^{N-Q} Dhat_Q prod (A* +- B*) with index N-Q roots; bit j of the index is s_j
  std::vector<cd> a, b;
  std::vector<cd> zbar, theta_bar, Abar, Bbar;
};

// A = cosh theta (1 - 1/lambda), B = sinh theta (1 + 1/lambda)
cd factor_A(cd theta, cd lambda_q);
cd factor_B(cd theta, cd lambda_q);

SpectralLadder predicted_spectrum(const SuperintegrableParams& s, int L, int Q, const DrinfeldData& d,
                                  const DrinfeldData& dbar);

// G(lambda) G(1/lambda) versus N t_p^{rN} Lambda-weighted product, relative
double product_identity_residual(const SuperintegrableParams& s, int L, const DrinfeldData& d, bool omega_twist);

struct Dressing {
  cd z, theta, lambda_p, eps;
  Eigen::Matrix2cd M, Nm, S, R;
};

// M/N per the generalized Q != 0 form, eps^2 k'(z - 1) lambda_p = 1 (principal),
// S from the fixed s22 choice, R from r22 = s11, r21 = z s12, r12 = s21/z, r11 = s22.
// Throws std::domain_error at z = 1 or sinh 2theta = 0.
Dressing build_dressing(double kp, cd z, cd theta, cd lambda_p);
// closed form of S in terms of theta, lambda and s22; R is the same with 1/lambda and r22
Eigen::Matrix2cd dressing_closed_form(double kp, cd theta, cd lambda, cd s22);

// c0 1 + c1 H_j + c2 E+_j + c3 E-_j from a 2x2 array
Eigen::MatrixXcd lift(const Eigen::Matrix2cd& m, const Sl2Family& f, int j);

// kappa = N^{-1/2} prod_{j=1}^{N-1} (y_p - omega^j x_q); hat: (x_p - omega^j y_q)
cd kappa(const SuperintegrableParams& s, bool hat);
// T_Q(x_q, y_q) or T-hat_Q(y_q, x_q) on the charge-0 sector, rescaled by kappa^L
Eigen::MatrixXcd cp_transfer(const SuperintegrableParams& s, int L, int Q, bool hat);

struct SpectrumConfig {
  double kp = 0.37;
  cd lambda_p{0.61, 0.23};
  std::vector<cd> lambda_q{{1.3, -0.4}, {0.7, 0.9}};
  double tol_anchor = 1e-8, tol_ratio = 1e-8, tol_vector = 1e-7, tol_ladder = 1e-7, tol_q0 = 1e-9;
};

std::vector<CheckRecord> verify_spectrum(int N, int L, int Q, const SpectrumConfig& cfg = {});
// Q = 0 corrected dressing: closed forms, r22/s22 relation, p <-> p' swap, lambda_p = +-1, anchor symmetry
std::vector<CheckRecord> verify_q0_dressing(int N, int L, const SpectrumConfig& cfg = {});

// ladders, measured constants and branch choices for the CLI
nlohmann::json spectrum_summary(int N, int L, int Q, const SpectrumConfig& cfg);

}  // namespace cpotts
