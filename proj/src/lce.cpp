#include "chemchaos/lce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemchaos/ode.hpp"

namespace chemchaos {

namespace {

// State layout: [x (n) | W column-major (n*n) | trace quadrature (1)].
struct VariationalRhs {
    const CompiledSystem* cs;
    int n;
    mutable Eigen::MatrixXd jac;

    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        cs->eval(y.data(), dy.data());
        cs->jacobian(y.data(), jac);
        Eigen::Map<const Eigen::MatrixXd> w(y.data() + n, n, n);
        Eigen::Map<Eigen::MatrixXd> dw(dy.data() + n, n, n);
        dw.noalias() = jac * w;
        dy[n + n * n] = jac.trace();
    }
};

// Householder QR with the R diagonal forced non-negative (the matching
// columns of Q flip sign). No allocations beyond the caller's workspace.
void qr_positive(Eigen::MatrixXd& a, Eigen::MatrixXd& q, Eigen::VectorXd& rdiag,
                 Eigen::VectorXd& v) {
    const int n = static_cast<int>(a.rows());
    q.setIdentity(n, n);
    for (int k = 0; k < n - 1; ++k) {
        double norm = a.col(k).tail(n - k).norm();
        if (norm == 0.0) continue;
        const double alpha = a(k, k) >= 0 ? -norm : norm;
        v.segment(k, n - k) = a.col(k).tail(n - k);
        v[k] -= alpha;
        const double vsq = v.segment(k, n - k).squaredNorm();
        if (vsq == 0.0) continue;
        for (int c = k; c < n; ++c) {
            const double dot = v.segment(k, n - k).dot(a.col(c).tail(n - k));
            a.col(c).tail(n - k) -= (2.0 * dot / vsq) * v.segment(k, n - k);
        }
        for (int c = 0; c < n; ++c) {
            const double dot = v.segment(k, n - k).dot(q.row(c).segment(k, n - k));
            q.row(c).segment(k, n - k) -= (2.0 * dot / vsq) * v.segment(k, n - k).transpose();
        }
    }
    for (int i = 0; i < n; ++i) {
        rdiag[i] = a(i, i);
        if (rdiag[i] < 0.0) {
            rdiag[i] = -rdiag[i];
            q.col(i) = -q.col(i);
        }
    }
}

}  // namespace

void qr_nonnegative(Eigen::MatrixXd a, Eigen::MatrixXd& q, Eigen::VectorXd& rdiag) {
    Eigen::VectorXd v(a.rows());
    q.resize(a.rows(), a.cols());
    rdiag.resize(a.rows());
    qr_positive(a, q, rdiag, v);
}

double default_tau(const PolySystem& s, const Eigen::VectorXd& x0) {
    const double jnorm = evaluate_jacobian(s, x0).norm();  // Frobenius
    return std::min(0.5, 100.0 / (1.0 + jnorm));
}

LceSeries lce_qr(const PolySystem& s, const Eigen::VectorXd& x0, double t_end,
                 const LceOptions& opts) {
    const int n = s.dim;
    if (x0.size() != n) throw std::invalid_argument("lce_qr: initial state has wrong dimension");
    if (!(t_end > 0)) throw std::invalid_argument("lce_qr: t_end must be positive");
    const double tau = opts.tau > 0 ? opts.tau : default_tau(s, x0);
    const long windows = static_cast<long>(std::ceil(t_end / tau - 1e-9));

    CompiledSystem cs(s);
    VariationalRhs rhs{&cs, n, Eigen::MatrixXd(n, n)};
    Dopri5<VariationalRhs> stepper(rhs, n + n * n + 1, opts.rtol, opts.atol);

    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(n + n * n + 1);
    y0.head(n) = x0;
    Eigen::Map<Eigen::MatrixXd>(y0.data() + n, n, n).setIdentity();
    stepper.init(0.0, y0);

    LceSeries out;
    out.tau = tau;
    Eigen::VectorXd cum = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd wmat(n, n), qmat(n, n);
    Eigen::VectorXd rdiag(n), hh(n);
    const int stride = std::max(1, opts.series_stride);

    double last_quadrature = 0.0;
    auto record = [&](double t) {
        Eigen::VectorXd lam = cum / t;
        std::sort(lam.data(), lam.data() + n, std::greater<double>());
        out.times.push_back(t);
        out.lambdas.push_back(lam);
        out.accumulated_logs.push_back(lam * t);
        last_quadrature = stepper.state()[n + n * n];
    };

    for (long w = 1; w <= windows; ++w) {
        const double wend = tau * static_cast<double>(w);
        bool dead = false;
        while (stepper.time() < wend) {
            if (!stepper.step(wend)) {
                out.divergence =
                    DivergenceEvent{stepper.time(), stepper.state().head(n), "step size underflow"};
                dead = true;
                break;
            }
            const auto& y = stepper.state();
            if (!y.allFinite() || y.head(n).norm() > 1e12) {
                out.divergence = DivergenceEvent{stepper.time(), y.head(n),
                                                 "state norm exceeded divergence bound"};
                dead = true;
                break;
            }
        }
        if (dead) break;
        wmat = Eigen::Map<const Eigen::MatrixXd>(stepper.state().data() + n, n, n);
        qr_positive(wmat, qmat, rdiag, hh);
        for (int i = 0; i < n; ++i) {
            if (!(rdiag[i] > 0.0))
                throw std::runtime_error("lce_qr: rank collapse in window " + std::to_string(w) +
                                         " (R diagonal entry " + std::to_string(i + 1) + " vanished)");
            cum[i] += std::log(rdiag[i]);
        }
        Eigen::Map<Eigen::MatrixXd>(stepper.mutable_state().data() + n, n, n) = qmat;
        stepper.refresh_derivative();
        if (w % stride == 0 || w == windows) record(stepper.time());
    }

    if (!out.times.empty()) {
        out.final_time = out.times.back();
        out.final_lambdas = out.lambdas.back();
        out.trace_average = last_quadrature / out.final_time;
    } else {
        out.final_time = 0.0;
        out.final_lambdas = Eigen::VectorXd::Zero(n);
    }
    return out;
}

double lce_invariance_check(const PolySystem& s, const AffineMap& a, const Eigen::VectorXd& x0,
                            double t_end, const LceOptions& opts) {
    LceOptions both = opts;
    if (both.tau <= 0) both.tau = default_tau(s, x0);
    LceSeries base = lce_qr(s, x0, t_end, both);
    LceSeries image = lce_qr(apply_affine(s, a), a.map_point(x0), t_end, both);
    if (base.divergence || image.divergence)
        throw std::runtime_error("lce_invariance_check: trajectory diverged");
    return (base.final_lambdas - image.final_lambdas).cwiseAbs().maxCoeff();
}

}  // namespace chemchaos
