#ifndef CHEMCHAOS_ODE_HPP
#define CHEMCHAOS_ODE_HPP

#include <Eigen/Core>
#include <cmath>
#include <limits>

namespace chemchaos {

/// Embedded Dormand-Prince 5(4) pair with PI step-size control and the
/// classic fourth-order dense output. RHS is any functor
/// void(const VectorXd& y, VectorXd& dy). First-same-as-last is exploited,
/// so an accepted step costs six fresh evaluations.
template <class Rhs>
class Dopri5 {
  public:
    Dopri5(Rhs rhs, int n, double rtol, double atol)
        : rhs_(std::move(rhs)), n_(n), rtol_(rtol), atol_(atol) {
        for (Eigen::VectorXd* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &yerr_, &ynew_,
                                   &rc1_, &rc2_, &rc3_, &rc4_, &rc5_})
            v->resize(n);
    }

    void init(double t0, const Eigen::VectorXd& y0) {
        t_ = t0;
        y_ = y0;
        rhs_(y_, k1_);
        facold_ = 1e-4;
        h_ = initial_step();
    }

    double time() const { return t_; }
    const Eigen::VectorXd& state() const { return y_; }
    Eigen::VectorXd& mutable_state() { return y_; }
    double step_size() const { return h_; }
    long accepted() const { return naccept_; }
    long rejected() const { return nreject_; }

    /// Refresh k1 after the caller mutated the state (e.g. re-orthonormalized).
    void refresh_derivative() { rhs_(y_, k1_); }

    /// One accepted step with size capped at tlimit - t. Returns false on
    /// step-size underflow or a non-finite state.
    bool step(double tlimit) {
        const double eps = std::numeric_limits<double>::epsilon();
        for (int attempt = 0; attempt < 1000; ++attempt) {
            double h = std::min(h_, tlimit - t_);
            if (!(h > 0)) h = tlimit - t_;
            if (!(h > eps * 16.0 * std::max(1.0, std::abs(t_)))) return false;
            const bool clipped = h < h_;

            stages(h);
            const double err = error_norm(h);
            if (!std::isfinite(err)) {
                h_ = h * 0.1;
                ++nreject_;
                continue;
            }
            if (err <= 1.0) {
                prepare_dense(h);
                tprev_ = t_;
                hlast_ = h;
                t_ += h;
                if (std::abs(tlimit - t_) <= eps * 32.0 * std::max(1.0, std::abs(tlimit))) t_ = tlimit;
                y_.swap(ynew_);
                k1_.swap(k7_);
                const double facold = std::max(err, 1e-4);
                double fac11 = std::pow(err, kExpo1);
                double fac = fac11 / std::pow(facold_, kBeta);
                fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
                double hnew = h / fac;
                facold_ = facold;
                if (!clipped) h_ = hnew;
                ++naccept_;
                return true;
            }
            ++nreject_;
            const double fac11 = std::pow(err, kExpo1);
            h_ = h / std::min(kFacc1, fac11 / kSafe);
        }
        return false;
    }

    /// Unconditionally accepted step of exactly h (order verification runs).
    void step_fixed(double h) {
        stages(h);
        prepare_dense(h);
        tprev_ = t_;
        hlast_ = h;
        t_ += h;
        y_.swap(ynew_);
        k1_.swap(k7_);
        ++naccept_;
    }

    double previous_time() const { return tprev_; }

    /// Dense evaluation at any t in [previous_time, time] of the last step.
    void dense(double t, Eigen::VectorXd& out) const {
        const double theta = (t - tprev_) / hlast_;
        const double theta1 = 1.0 - theta;
        out = rc1_ + theta * (rc2_ + theta1 * (rc3_ + theta * (rc4_ + theta1 * rc5_)));
    }

  private:
    static constexpr double kSafe = 0.9;
    static constexpr double kBeta = 0.04;
    static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    static constexpr double kFacc1 = 5.0;   // max step decrease factor
    static constexpr double kFacc2 = 0.1;   // max step increase is 1/kFacc2

    double initial_step() {
        double dnf = 0.0, dny = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y_[i]);
            dnf += (k1_[i] / sk) * (k1_[i] / sk);
            dny += (y_[i] / sk) * (y_[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        ytmp_ = y_ + h * k1_;
        rhs_(ytmp_, k2_);
        double der2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y_[i]);
            der2 += ((k2_[i] - k1_[i]) / sk) * ((k2_[i] - k1_[i]) / sk);
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(der2, std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                         : std::pow(0.01 / der12, 0.2);
        return std::min(100.0 * h, h1);
    }

    void stages(double h) {
        ytmp_ = y_ + h * (kA21 * k1_);
        rhs_(ytmp_, k2_);
        ytmp_ = y_ + h * (kA31 * k1_ + kA32 * k2_);
        rhs_(ytmp_, k3_);
        ytmp_ = y_ + h * (kA41 * k1_ + kA42 * k2_ + kA43 * k3_);
        rhs_(ytmp_, k4_);
        ytmp_ = y_ + h * (kA51 * k1_ + kA52 * k2_ + kA53 * k3_ + kA54 * k4_);
        rhs_(ytmp_, k5_);
        ytmp_ = y_ + h * (kA61 * k1_ + kA62 * k2_ + kA63 * k3_ + kA64 * k4_ + kA65 * k5_);
        rhs_(ytmp_, k6_);
        ynew_ = y_ + h * (kA71 * k1_ + kA73 * k3_ + kA74 * k4_ + kA75 * k5_ + kA76 * k6_);
        rhs_(ynew_, k7_);
        yerr_ = h * (kE1 * k1_ + kE3 * k3_ + kE4 * k4_ + kE5 * k5_ + kE6 * k6_ + kE7 * k7_);
    }

    double error_norm(double) const {
        double err = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double sk = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            const double e = yerr_[i] / sk;
            err += e * e;
        }
        return std::sqrt(err / n_);
    }

    void prepare_dense(double h) {
        rc1_ = y_;
        rc2_ = ynew_ - y_;
        rc3_ = h * k1_ - rc2_;
        rc4_ = rc2_ - h * k7_ - rc3_;
        rc5_ = h * (kD1 * k1_ + kD3 * k3_ + kD4 * k4_ + kD5 * k5_ + kD6 * k6_ + kD7 * k7_);
    }

    // Dormand-Prince coefficients.
    static constexpr double kA21 = 1.0 / 5.0;
    static constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
    static constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
    static constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                            kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
    static constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                            kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
    static constexpr double kA71 = 35.0 / 384.0, kA73 = 500.0 / 1113.0, kA74 = 125.0 / 192.0,
                            kA75 = -2187.0 / 6784.0, kA76 = 11.0 / 84.0;
    static constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                            kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;
    static constexpr double kD1 = -12715105075.0 / 11282082432.0, kD3 = 87487479700.0 / 32700410799.0,
                            kD4 = -10690763975.0 / 1880347072.0, kD5 = 701980252875.0 / 199316789632.0,
                            kD6 = -1453857185.0 / 822651844.0, kD7 = 69997945.0 / 29380423.0;

    Rhs rhs_;
    int n_;
    double rtol_, atol_;
    double t_ = 0.0, h_ = 0.0, facold_ = 1e-4;
    double tprev_ = 0.0, hlast_ = 0.0;
    long naccept_ = 0, nreject_ = 0;
    Eigen::VectorXd y_, ynew_, ytmp_, yerr_;
    Eigen::VectorXd k1_, k2_, k3_, k4_, k5_, k6_, k7_;
    Eigen::VectorXd rc1_, rc2_, rc3_, rc4_, rc5_;
};

}  // namespace chemchaos

#endif
