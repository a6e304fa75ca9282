#ifndef CHEMCHAOS_SIM_HPP
#define CHEMCHAOS_SIM_HPP

#include <Eigen/Core>
#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "chemchaos/polysys.hpp"

namespace chemchaos {

/// Double-precision compilation of a PolySystem for tight evaluation
/// loops: the right-hand side, its Jacobian, and per-equation magnitude
/// sums used as cancellation-aware scales.
class CompiledSystem {
  public:
    explicit CompiledSystem(const PolySystem& s);

    int dim() const { return dim_; }
    void eval(const double* x, double* f) const;
    void eval_with_magnitude(const double* x, double* f, double* mag) const;
    void jacobian(const double* x, Eigen::MatrixXd& j) const;

  private:
    struct Term {
        double coeff;
        int first;  // index into factors_
        int count;
    };
    int dim_;
    std::vector<Term> terms_;
    std::vector<int> eq_begin_;  // dim+1 offsets into terms_
    std::vector<Term> jterms_;
    std::vector<int> jac_begin_;  // dim*dim+1 offsets into jterms_
    std::vector<int> factors_;

    double eval_term(const Term& t, const double* x) const {
        double v = t.coeff;
        for (int k = 0; k < t.count; ++k) v *= x[factors_[t.first + k]];
        return v;
    }
};

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    int samples = 1000;        // dense-output points, uniform on [0, t_end]
    double max_norm = 1e12;    // divergence threshold
    long max_steps = 50000000L;
    double fixed_step = 0.0;   // > 0 disables step control (convergence studies)
};

struct DivergenceEvent {
    double time = 0.0;
    Eigen::VectorXd last_state;
    std::string reason;
};

struct TrajectoryMeta {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double rtol = 0.0;
    double atol = 0.0;
    double min_component = 0.0;       // over all accepted step endpoints
    double min_component_time = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    TrajectoryMeta meta;
    std::optional<DivergenceEvent> divergence;
};

Trajectory integrate(const PolySystem& s, const Eigen::VectorXd& x0, double t_end,
                     const IntegrateOptions& opts = {});

struct Equilibrium {
    Eigen::VectorXd point;
    Eigen::VectorXcd jacobian_eigenvalues;
    bool stable = false;  // all real parts strictly negative
    double residual = 0.0;
};

struct EquilibriumOptions {
    int n_starts = 64;
    int max_iterations = 120;
    double dedupe_rel = 1e-8;
};

/// Damped Newton iterations from a deterministic low-discrepancy seed set
/// in the box; converged points are deduplicated and classified by the
/// eigenvalues of the Jacobian.
std::vector<Equilibrium> find_equilibria(const PolySystem& s, const Eigen::VectorXd& box_lo,
                                         const Eigen::VectorXd& box_hi,
                                         const EquilibriumOptions& opts = {});

struct PositivityViolation {
    double time = 0.0;
    int component = 0;
    double value = 0.0;
};

/// First stored sample with a component below -atol, if any.
std::optional<PositivityViolation> monitor_positivity(const Trajectory& t, double atol = 1e-9);

}  // namespace chemchaos

#endif
