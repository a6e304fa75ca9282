#ifndef CHEMCHAOS_LCE_HPP
#define CHEMCHAOS_LCE_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "chemchaos/polysys.hpp"
#include "chemchaos/sim.hpp"

namespace chemchaos {

struct LceOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double tau = 0.0;      // 0 selects the default window
    int series_stride = 1; // record every k-th window
};

/// Finite-time Lyapunov exponent estimates from the discrete-QR recursion:
/// the tangent basis is integrated alongside the trajectory, re-orthonormalized
/// every tau time units, and the per-window log |R_ii| accumulate into
/// lambda_i(t) = sum(log R_ii)/t. Exponents are reported in descending order.
struct LceSeries {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> lambdas;           // descending at each time
    std::vector<Eigen::VectorXd> accumulated_logs;  // lambda * t, same order
    double tau = 0.0;
    double final_time = 0.0;
    Eigen::VectorXd final_lambdas;
    double trace_average = 0.0;  // time average of div f along the trajectory
    std::optional<DivergenceEvent> divergence;
};

/// Default window: 0.5 time units, shrunk when the Jacobian at the initial
/// state is large so that one window's tangent growth stays comfortably
/// inside double range.
double default_tau(const PolySystem& s, const Eigen::VectorXd& x0);

/// QR factorization with the R diagonal forced non-negative; a is consumed
/// as workspace. Rank-deficient input yields a zero diagonal entry.
void qr_nonnegative(Eigen::MatrixXd a, Eigen::MatrixXd& q, Eigen::VectorXd& rdiag);

LceSeries lce_qr(const PolySystem& s, const Eigen::VectorXd& x0, double t_end,
                 const LceOptions& opts = {});

/// Max per-exponent discrepancy at t_end between the system and its image
/// under an invertible change of variables (same tau on both runs).
double lce_invariance_check(const PolySystem& s, const AffineMap& a, const Eigen::VectorXd& x0,
                            double t_end, const LceOptions& opts = {});

}  // namespace chemchaos

#endif
