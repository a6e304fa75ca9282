#include "chemchaos/sim.hpp"

#include <algorithm>
#include <cmath>

#include "chemchaos/ode.hpp"

namespace chemchaos {

CompiledSystem::CompiledSystem(const PolySystem& s) : dim_(s.dim) {
    auto compile_poly = [&](const Poly& p, std::vector<Term>& terms) {
        for (const auto& m : p) {
            Term t;
            t.coeff = m.coeff.to_double();
            t.first = static_cast<int>(factors_.size());
            t.count = 0;
            for (int k = 0; k < dim_; ++k)
                for (int e = 0; e < m.exps[k]; ++e) {
                    factors_.push_back(k);
                    ++t.count;
                }
            terms.push_back(t);
        }
    };
    eq_begin_.push_back(0);
    for (const auto& eq : s.eqs) {
        compile_poly(eq, terms_);
        eq_begin_.push_back(static_cast<int>(terms_.size()));
    }
    auto jac = chemchaos::jacobian(s);
    jac_begin_.push_back(0);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            compile_poly(jac[i][k], jterms_);
            jac_begin_.push_back(static_cast<int>(jterms_.size()));
        }
}

void CompiledSystem::eval(const double* x, double* f) const {
    for (int i = 0; i < dim_; ++i) {
        double acc = 0.0;
        for (int t = eq_begin_[i]; t < eq_begin_[i + 1]; ++t) acc += eval_term(terms_[t], x);
        f[i] = acc;
    }
}

void CompiledSystem::eval_with_magnitude(const double* x, double* f, double* mag) const {
    for (int i = 0; i < dim_; ++i) {
        double acc = 0.0, m = 0.0;
        for (int t = eq_begin_[i]; t < eq_begin_[i + 1]; ++t) {
            const double v = eval_term(terms_[t], x);
            acc += v;
            m += std::abs(v);
        }
        f[i] = acc;
        mag[i] = m;
    }
}

void CompiledSystem::jacobian(const double* x, Eigen::MatrixXd& j) const {
    j.resize(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            double acc = 0.0;
            const int cell = i * dim_ + k;
            for (int t = jac_begin_[cell]; t < jac_begin_[cell + 1]; ++t)
                acc += eval_term(jterms_[t], x);
            j(i, k) = acc;
        }
}

namespace {

struct SystemRhs {
    const CompiledSystem* cs;
    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        cs->eval(y.data(), dy.data());
    }
};

}  // namespace

Trajectory integrate(const PolySystem& s, const Eigen::VectorXd& x0, double t_end,
                     const IntegrateOptions& opts) {
    if (!(t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(opts.rtol > 0) || !(opts.atol > 0))
        throw std::invalid_argument("integrate: tolerances must be positive");
    if (x0.size() != s.dim) throw std::invalid_argument("integrate: initial state has wrong dimension");

    CompiledSystem cs(s);
    Dopri5<SystemRhs> stepper(SystemRhs{&cs}, s.dim, opts.rtol, opts.atol);
    stepper.init(0.0, x0);

    Trajectory out;
    out.meta.rtol = opts.rtol;
    out.meta.atol = opts.atol;
    out.meta.min_component = x0.minCoeff();
    out.meta.min_component_time = 0.0;

    const int nsamp = std::max(1, opts.samples);
    out.times.reserve(nsamp + 1);
    out.states.reserve(nsamp + 1);
    out.times.push_back(0.0);
    out.states.push_back(x0);
    int next_sample = 1;

    Eigen::VectorXd interp(s.dim);
    long steps = 0;
    while (stepper.time() < t_end) {
        if (++steps > opts.max_steps) {
            out.divergence = DivergenceEvent{stepper.time(), stepper.state(), "step budget exhausted"};
            break;
        }
        if (opts.fixed_step > 0) {
            stepper.step_fixed(std::min(opts.fixed_step, t_end - stepper.time()));
        } else if (!stepper.step(t_end)) {
            out.divergence = DivergenceEvent{stepper.time(), stepper.state(), "step size underflow"};
            break;
        }
        const Eigen::VectorXd& y = stepper.state();
        if (!y.allFinite() || y.norm() > opts.max_norm) {
            out.divergence = DivergenceEvent{stepper.time(), y, "state norm exceeded divergence bound"};
            break;
        }
        const double mc = y.minCoeff();
        if (mc < out.meta.min_component) {
            out.meta.min_component = mc;
            out.meta.min_component_time = stepper.time();
        }
        while (next_sample <= nsamp) {
            const double ts = t_end * next_sample / nsamp;
            if (ts > stepper.time() * (1.0 + 1e-14)) break;
            stepper.dense(std::min(ts, stepper.time()), interp);
            out.times.push_back(ts);
            out.states.push_back(interp);
            ++next_sample;
        }
    }
    out.meta.steps_accepted = stepper.accepted();
    out.meta.steps_rejected = stepper.rejected();
    return out;
}

std::optional<PositivityViolation> monitor_positivity(const Trajectory& t, double atol) {
    for (std::size_t k = 0; k < t.states.size(); ++k) {
        for (int i = 0; i < t.states[k].size(); ++i) {
            if (t.states[k][i] < -atol) return PositivityViolation{t.times[k], i, t.states[k][i]};
        }
    }
    return std::nullopt;
}

namespace {

double halton(long index, int base) {
    double f = 1.0, r = 0.0;
    long i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

constexpr int kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19};

// Newton with backtracking; convergence is judged against the evaluation's
// own magnitude scale so that systems with large cancelling terms still
// terminate at their floating-point floor.
bool newton_polish(const CompiledSystem& cs, Eigen::VectorXd& x, int max_iter, double* residual) {
    const int n = cs.dim();
    Eigen::VectorXd f(n), mag(n), fnew(n), magnew(n), step(n), xnew(n);
    Eigen::MatrixXd jac(n, n);
    cs.eval_with_magnitude(x.data(), f.data(), mag.data());
    auto converged = [&](const Eigen::VectorXd& fv, const Eigen::VectorXd& mv) {
        for (int i = 0; i < n; ++i)
            if (std::abs(fv[i]) > 1e-12 * (1.0 + mv[i])) return false;
        return true;
    };
    for (int it = 0; it < max_iter; ++it) {
        if (!f.allFinite() || !x.allFinite()) return false;
        if (converged(f, mag)) break;
        cs.jacobian(x.data(), jac);
        step = jac.partialPivLu().solve(-f);
        if (!step.allFinite()) return false;
        double lambda = 1.0;
        const double f0 = f.norm();
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            xnew = x + lambda * step;
            cs.eval_with_magnitude(xnew.data(), fnew.data(), magnew.data());
            if (fnew.allFinite() && (fnew.norm() < f0 || converged(fnew, magnew))) {
                x = xnew;
                f = fnew;
                mag = magnew;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) return false;
    }
    *residual = f.norm();
    return converged(f, mag);
}

}  // namespace

std::vector<Equilibrium> find_equilibria(const PolySystem& s, const Eigen::VectorXd& box_lo,
                                         const Eigen::VectorXd& box_hi,
                                         const EquilibriumOptions& opts) {
    const int n = s.dim;
    if (box_lo.size() != n || box_hi.size() != n)
        throw std::invalid_argument("find_equilibria: box has wrong dimension");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(box_lo[i]) || !std::isfinite(box_hi[i]) || !(box_lo[i] <= box_hi[i]))
            throw std::invalid_argument("find_equilibria: box must be finite and ordered");

    CompiledSystem cs(s);
    std::vector<Equilibrium> found;
    std::vector<Eigen::VectorXd> noise_radius;  // numerical indistinguishability per root
    Eigen::VectorXd x(n), f(n), mag(n);
    Eigen::MatrixXd jac(n, n);
    for (int seed = 0; seed < opts.n_starts; ++seed) {
        for (int i = 0; i < n; ++i) {
            const double u = halton(seed + 1, kHaltonBases[i % 8]);
            x[i] = box_lo[i] + u * (box_hi[i] - box_lo[i]);
        }
        double residual = 0.0;
        Eigen::VectorXd root = x;
        if (!newton_polish(cs, root, opts.max_iterations, &residual)) continue;
        bool inside = true;
        for (int i = 0; i < n; ++i) {
            const double span = box_hi[i] - box_lo[i];
            if (root[i] < box_lo[i] - 0.05 * span || root[i] > box_hi[i] + 0.05 * span) inside = false;
        }
        if (!inside) continue;

        // Roots closer than the residual floor maps them through the Jacobian
        // are the same equilibrium seen through rounding noise.
        cs.eval_with_magnitude(root.data(), f.data(), mag.data());
        cs.jacobian(root.data(), jac);
        Eigen::VectorXd floor_f(n);
        for (int i = 0; i < n; ++i) floor_f[i] = 1e-12 * (1.0 + mag[i]);
        Eigen::VectorXd kappa = jac.partialPivLu().solve(floor_f).cwiseAbs();
        if (!kappa.allFinite()) kappa.setZero();  // singular Jacobian: fall back to plain dedupe

        int duplicate = -1;
        for (std::size_t e = 0; e < found.size() && duplicate < 0; ++e) {
            bool close = true;
            for (int i = 0; i < n; ++i) {
                const double scale = std::max({1.0, std::abs(root[i]), std::abs(found[e].point[i])});
                const double tol = std::max(opts.dedupe_rel * scale,
                                            8.0 * std::max(kappa[i], noise_radius[e][i]));
                if (std::abs(root[i] - found[e].point[i]) > tol) close = false;
            }
            if (close) duplicate = static_cast<int>(e);
        }
        if (duplicate >= 0) {
            if (residual < found[duplicate].residual) {
                found[duplicate].point = root;
                found[duplicate].residual = residual;
                Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);
                found[duplicate].jacobian_eigenvalues = solver.eigenvalues();
                found[duplicate].stable = true;
                for (int i = 0; i < n; ++i)
                    if (found[duplicate].jacobian_eigenvalues[i].real() >= 0.0)
                        found[duplicate].stable = false;
            }
            continue;
        }
        Equilibrium eq;
        eq.point = root;
        eq.residual = residual;
        Eigen::EigenSolver<Eigen::MatrixXd> solver(jac);
        eq.jacobian_eigenvalues = solver.eigenvalues();
        eq.stable = true;
        for (int i = 0; i < n; ++i)
            if (eq.jacobian_eigenvalues[i].real() >= 0.0) eq.stable = false;
        found.push_back(std::move(eq));
        noise_radius.push_back(kappa);
    }
    std::sort(found.begin(), found.end(), [](const Equilibrium& a, const Equilibrium& b) {
        for (int i = 0; i < a.point.size(); ++i)
            if (a.point[i] != b.point[i]) return a.point[i] < b.point[i];
        return false;
    });
    return found;
}

}  // namespace chemchaos
