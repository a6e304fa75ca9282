#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "chemchaos/catalog.hpp"
#include "chemchaos/crn.hpp"
#include "chemchaos/io.hpp"
#include "chemchaos/lce.hpp"
#include "chemchaos/qcm.hpp"
#include "chemchaos/sim.hpp"

namespace fs = std::filesystem;
using namespace chemchaos;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // semantically false: non-chemical, infeasible plan
constexpr int kExitUsage = 2;     // bad flags, unparsable input

struct InputSelector {
    std::string id;
    std::string file;
    std::string epsilon;
    std::string mu;
};

void add_input_flags(CLI::App* cmd, InputSelector& sel) {
    auto* id = cmd->add_option("--id", sel.id, "catalog id");
    auto* file = cmd->add_option("--file", sel.file, "system definition file");
    id->excludes(file);
    cmd->add_option("--epsilon", sel.epsilon, "epsilon for parametric entries (rational or decimal)");
    cmd->add_option("--mu", sel.mu, "mu for parametric entries (rational or decimal)");
}

Rational param_or(const std::string& text, const std::optional<Rational>& fallback,
                  const char* name) {
    if (!text.empty()) return Rational::from_string(text);
    if (fallback) return *fallback;
    throw std::invalid_argument(std::string("missing required parameter --") + name);
}

struct LoadedSystem {
    PolySystem system;
    std::string label;
    Rational eps{0};
    Rational mu{0};
    bool parametric = false;
};

LoadedSystem load_system(const InputSelector& sel) {
    if (sel.id.empty() == sel.file.empty())
        throw std::invalid_argument("exactly one of --id or --file is required");
    LoadedSystem out;
    if (!sel.file.empty()) {
        out.system = system_from_json(read_file(sel.file));
        out.label = sel.file;
        return out;
    }
    const CatalogEntry& entry = catalog_get(sel.id);
    if (entry.kind == CatalogEntry::Kind::Plan)
        throw std::invalid_argument("catalog id '" + sel.id + "' is a plan; use the transform command");
    out.label = sel.id;
    if (entry.kind == CatalogEntry::Kind::ParametricCds) {
        out.parametric = true;
        out.eps = param_or(sel.epsilon, entry.default_eps, "epsilon");
        out.mu = param_or(sel.mu, entry.default_mu, "mu");
        out.system = catalog_instantiate(sel.id, out.eps, out.mu);
    } else {
        out.system = catalog_instantiate(sel.id);
    }
    return out;
}

Eigen::VectorXd parse_ic(const std::string& text, int dim) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(Rational::from_string(tok).to_double());
    if (static_cast<int>(values.size()) != dim)
        throw std::invalid_argument("--ic needs " + std::to_string(dim) + " comma-separated values");
    Eigen::VectorXd out(dim);
    for (int i = 0; i < dim; ++i) out[i] = values[i];
    return out;
}

Eigen::VectorXd initial_condition(const LoadedSystem& sys, const std::string& ic_flag,
                                  const std::string& id) {
    if (!ic_flag.empty()) return parse_ic(ic_flag, sys.system.dim);
    if (!id.empty() && catalog_has(id) && catalog_get(id).has_reference_ic)
        return to_double_vector(catalog_reference_ic(id, sys.eps, sys.mu));
    throw std::invalid_argument("--ic is required for this input");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

std::string constraint_table(const QcmReport& rep) {
    std::ostringstream os;
    os << "constraint                          lhs                rhs        relation  margin\n";
    for (const auto& c : rep.constraints) {
        std::ostringstream lhs, rhs, margin;
        lhs << c.lhs.to_double();
        rhs << c.rhs.to_double();
        margin << c.margin().to_double();
        os << c.name;
        for (std::size_t pad = c.name.size(); pad < 36; ++pad) os << ' ';
        os << lhs.str();
        for (std::size_t pad = lhs.str().size(); pad < 19; ++pad) os << ' ';
        os << rhs.str();
        for (std::size_t pad = rhs.str().size(); pad < 11; ++pad) os << ' ';
        os << (c.strict ? ">   " : ">=  ") << "      " << margin.str()
           << (c.satisfied ? "" : "   [not satisfied]") << "\n";
    }
    return os.str();
}

json report_json(const QcmReport& rep) {
    json j;
    j["chemical"] = rep.chemical;
    json viols = json::array();
    for (const auto& v : rep.violations) {
        viols.push_back({{"equation", v.equation + 1},
                         {"coeff", v.monomial.coeff.to_string()},
                         {"exps", v.monomial.exps}});
    }
    j["violations"] = viols;
    json cons = json::array();
    for (const auto& c : rep.constraints) {
        cons.push_back({{"name", c.name},
                        {"lhs", c.lhs.to_string()},
                        {"rhs", c.rhs.to_string()},
                        {"strict", c.strict},
                        {"satisfied", c.satisfied},
                        {"margin", c.margin().to_string()}});
    }
    j["constraints"] = cons;
    j["notes"] = rep.notes;
    return j;
}

std::string lce_csv(const LceSeries& s) {
    std::string out = "t";
    const int n = s.final_lambdas.size();
    for (int i = 1; i <= n; ++i) out += ",lambda" + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        out += format_double(s.times[k]);
        for (int i = 0; i < n; ++i) out += "," + format_double(s.lambdas[k][i]);
        out += "\n";
    }
    return out;
}

std::string trajectory_csv(const Trajectory& t) { return series_csv(t.times, t.states, "x"); }

int worker_threads() {
    if (const char* env = std::getenv("CHEMCHAOS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 2 : static_cast<int>(hc);
}

void run_parallel(std::vector<std::function<void()>> tasks) {
    std::atomic<std::size_t> next{0};
    const int nthreads = std::max(1, std::min<int>(worker_threads(), static_cast<int>(tasks.size())));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    tasks[i]();
                } catch (...) {
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int cmd_list() {
    for (const auto& e : catalog_entries()) {
        std::cout << e.id;
        for (std::size_t pad = e.id.size(); pad < 24; ++pad) std::cout << ' ';
        switch (e.kind) {
            case CatalogEntry::Kind::FixedSystem: std::cout << "system      "; break;
            case CatalogEntry::Kind::ParametricCds: std::cout << "cds(eps,mu) "; break;
            case CatalogEntry::Kind::Plan: std::cout << "plan        "; break;
        }
        if (!e.expected_complexity.empty()) std::cout << e.expected_complexity << "  ";
        std::cout << e.title << "\n";
    }
    return kExitOk;
}

int cmd_show(const InputSelector& sel, const std::string& out_path) {
    const CatalogEntry& entry = catalog_get(sel.id);
    if (entry.kind == CatalogEntry::Kind::Plan) {
        const Rational eps = param_or(sel.epsilon, entry.default_eps, "epsilon");
        const Rational mu = param_or(sel.mu, entry.default_mu, "mu");
        emit(out_path, plan_to_json(catalog_plan(sel.id, eps, mu)));
        return kExitOk;
    }
    LoadedSystem sys = load_system(sel);
    std::string doc = system_to_json(sys.system);
    if (!entry.expected_canonical_label.empty()) {
        Crn canonical = canonical_crn(sys.system);
        doc += "# canonical reactions " + crn_complexity(canonical).label() + "\n";
        doc += render(canonical);
        Crn fused = fuse(canonical);
        doc += "# fused reactions " + crn_complexity(fused).label() + "\n";
        doc += render(fused);
    }
    emit(out_path, doc);
    return kExitOk;
}

int cmd_check(const InputSelector& sel) {
    LoadedSystem sys = load_system(sel);
    ChemicalReport rep = is_chemical(sys.system);
    Complexity cx = complexity(sys.system);
    std::cout << sys.label << ": " << (rep.chemical ? "chemical" : "not chemical")
              << ", complexity " << cx.label() << "\n";
    for (const auto& v : rep.violations) {
        std::cout << "  equation " << (v.equation + 1) << ": monomial with coefficient "
                  << v.monomial.coeff.to_string() << " and exponents (";
        for (std::size_t k = 0; k < v.monomial.exps.size(); ++k)
            std::cout << (k ? "," : "") << v.monomial.exps[k];
        std::cout << ") is not chemical\n";
    }
    return rep.chemical ? kExitOk : kExitNegative;
}

int cmd_transform(const std::string& plan_file, const std::string& plan_id,
                  const std::string& eps_text, const std::string& mu_text,
                  const std::string& out_dir) {
    QcmPlan plan;
    if (!plan_id.empty()) {
        const CatalogEntry& entry = catalog_get(plan_id);
        const Rational eps = param_or(eps_text, entry.default_eps, "epsilon");
        const Rational mu = param_or(mu_text, entry.default_mu, "mu");
        plan = catalog_plan(plan_id, eps, mu);
    } else if (!plan_file.empty()) {
        plan = plan_from_json(read_file(plan_file));
        if (!eps_text.empty()) plan.epsilon = Rational::from_string(eps_text);
        if (!mu_text.empty()) plan.mu = Rational::from_string(mu_text);
    } else {
        throw std::invalid_argument("one of --plan or --plan-id is required");
    }
    QcmReport rep = execute_plan(plan);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / "perturbed.json").string(), system_to_json(rep.perturbed));
        write_file((fs::path(out_dir) / "translated.json").string(), system_to_json(rep.translated));
        write_file((fs::path(out_dir) / "rescaled.json").string(), system_to_json(rep.rescaled));
        write_file((fs::path(out_dir) / "constraints.txt").string(), constraint_table(rep));
        write_file((fs::path(out_dir) / "report.json").string(), report_json(rep).dump(2) + "\n");
    }
    std::cout << "result: " << (rep.chemical ? "chemical" : "not chemical") << ", complexity "
              << complexity(rep.rescaled).label() << "\n";
    std::cout << constraint_table(rep);
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
    if (!rep.chemical) {
        for (const auto& c : rep.constraints)
            if (!c.satisfied) {
                std::cout << "infeasible: " << c.name << " fails (margin "
                          << c.margin().to_double() << ")\n";
                break;
            }
        for (const auto& v : rep.violations) {
            std::cout << "violation: equation " << (v.equation + 1) << " keeps coefficient "
                      << v.monomial.coeff.to_double() << " on a non-chemical monomial\n";
        }
        return kExitNegative;
    }
    return kExitOk;
}

int cmd_crn(const InputSelector& sel, bool do_fuse, bool degrees, bool emit_ode,
            const std::string& out_path) {
    LoadedSystem sys = load_system(sel);
    ChemicalReport chem = is_chemical(sys.system);
    if (!chem.chemical) {
        const auto& v = chem.violations.front();
        std::cerr << "not chemical: equation " << (v.equation + 1)
                  << " carries the non-chemical monomial with coefficient "
                  << v.monomial.coeff.to_string() << "\n";
        return kExitNegative;
    }
    Crn network = canonical_crn(sys.system);
    if (do_fuse) network = fuse(network);
    std::string doc;
    if (degrees) doc += "# degrees " + crn_complexity(network).label() + "\n";
    doc += emit_ode ? system_to_json(crn_to_cds(network)) : render(network);
    emit(out_path, doc);
    return kExitOk;
}

int cmd_simulate(const InputSelector& sel, const std::string& ic_flag, double t_end, int samples,
                 double rtol, double atol, const std::string& out_path) {
    LoadedSystem sys = load_system(sel);
    Eigen::VectorXd x0 = initial_condition(sys, ic_flag, sel.id);
    IntegrateOptions opts;
    opts.rtol = rtol;
    opts.atol = atol;
    opts.samples = samples;
    Trajectory t = integrate(sys.system, x0, t_end, opts);
    emit(out_path, trajectory_csv(t));
    if (t.divergence) {
        std::cerr << "divergence at t = " << t.divergence->time << ": " << t.divergence->reason
                  << "\n";
        return kExitNegative;
    }
    return kExitOk;
}

int cmd_lce(const InputSelector& sel, const std::string& ic_flag, double t_end, double tau,
            double rtol, double atol, int stride, const std::string& out_path) {
    LoadedSystem sys = load_system(sel);
    Eigen::VectorXd x0 = initial_condition(sys, ic_flag, sel.id);
    LceOptions opts;
    opts.rtol = rtol;
    opts.atol = atol;
    opts.tau = tau;
    opts.series_stride = stride;
    LceSeries series = lce_qr(sys.system, x0, t_end, opts);
    emit(out_path, lce_csv(series));
    const auto& lam = series.final_lambdas;
    double min_abs = std::abs(lam[0]);
    for (int i = 0; i < lam.size(); ++i) min_abs = std::min(min_abs, std::abs(lam[i]));
    std::cout << "t_end=" << series.final_time << " tau=" << series.tau << " lambda=(";
    for (int i = 0; i < lam.size(); ++i) std::cout << (i ? "," : "") << lam[i];
    std::cout << ") sum=" << lam.sum() << " min|lambda|=" << min_abs
              << " positive=" << (lam[0] > 0 ? "yes" : "no")
              << " dissipative=" << (lam.sum() < 0 ? "yes" : "no") << "\n";
    if (series.divergence) {
        std::cerr << "divergence at t = " << series.divergence->time << ": "
                  << series.divergence->reason << "\n";
        return kExitNegative;
    }
    return kExitOk;
}

struct PanelSpec {
    std::string panel;
    std::string system_label;
    std::string kind;  // "trajectory" or "lce"
    PolySystem system;
    Eigen::VectorXd ic;
    double t_end;
    double rtol;
    std::string file;
};

int cmd_reproduce(const std::string& figure, const std::string& out_dir, double t_traj,
                  double t_lce) {
    fs::create_directories(out_dir);
    std::vector<PanelSpec> panels;
    json manifest;
    manifest["figure"] = figure;

    auto add_pair = [&](const std::string& tag, const std::string& label, const PolySystem& s,
                        const Eigen::VectorXd& ic, double rtol) {
        panels.push_back({tag + "-trajectory", label, "trajectory", s, ic, t_traj, rtol,
                          figure + "_" + tag + "_trajectory.csv"});
        panels.push_back(
            {tag + "-lce", label, "lce", s, ic, t_lce, rtol, figure + "_" + tag + "_lce.csv"});
    };

    struct FigureRow {
        std::string base_id;
        std::string plan_id;
        std::string cds_id;
        Rational eps, mu;
    };
    const std::map<std::string, FigureRow> rows = {
        {"fig2", {"rossler-reflected", "chemical-rossler-plan", "chemical-rossler", rat(1, 1000),
                  rat(1, 100)}},
        {"fig3", {"sprott-p-perm", "cds-one-wing-plan", "cds-one-wing", rat(1, 100), rat(1, 100)}},
        {"fig4", {"sprott-c-variant", "cds-two-wing-plan", "cds-two-wing", rat(1, 1000),
                  rat(1, 100)}},
        {"fig5", {"se17-variant", "cds-hidden-plan", "cds-hidden", rat(1, 100000), rat(1, 100000)}},
    };

    PolySystem hidden_ds;
    PolySystem hidden_cds;
    Eigen::VectorXd hidden_cds_ic;
    if (figure == "fig1") {
        const std::vector<std::pair<std::string, std::pair<Rational, Rational>>> cds = {
            {"cds-one-wing", {rat(1, 100), rat(1, 100)}},
            {"cds-two-wing", {rat(1, 1000), rat(1, 100)}},
            {"cds-hidden", {rat(1, 100000), rat(1, 100000)}},
        };
        const char* tags[] = {"a", "b", "c"};
        for (std::size_t i = 0; i < cds.size(); ++i) {
            const auto& [id, em] = cds[i];
            PolySystem s = catalog_instantiate(id, em.first, em.second);
            Eigen::VectorXd ic = to_double_vector(catalog_reference_ic(id, em.first, em.second));
            panels.push_back({std::string(tags[i]), id, "trajectory", s, ic, t_traj, 1e-12,
                              figure + "_" + id + "_trajectory.csv"});
        }
    } else if (rows.count(figure)) {
        const FigureRow& row = rows.at(figure);
        PolySystem base = catalog_instantiate(row.base_id);
        Eigen::VectorXd base_ic = to_double_vector(catalog_reference_ic(row.base_id));
        add_pair("ds", row.base_id, base, base_ic, 1e-9);
        QcmReport rep = execute_plan(catalog_plan(row.plan_id, row.eps, row.mu));
        add_pair("perturbed", row.plan_id + " (perturbed stage)", rep.perturbed, base_ic, 1e-9);
        PolySystem cds = catalog_instantiate(row.cds_id, row.eps, row.mu);
        Eigen::VectorXd cds_ic = to_double_vector(catalog_reference_ic(row.cds_id, row.eps, row.mu));
        add_pair("cds", row.cds_id, cds, cds_ic, 1e-12);
        if (figure == "fig5") {
            hidden_ds = base;
            hidden_cds = cds;
            hidden_cds_ic = cds_ic;
        }
    } else {
        throw std::invalid_argument("unknown figure id '" + figure + "' (fig1..fig5)");
    }

    std::vector<std::function<void()>> tasks;
    for (const auto& p : panels) {
        tasks.push_back([&, p] {
            const fs::path path = fs::path(out_dir) / p.file;
            if (p.kind == "trajectory") {
                IntegrateOptions opts;
                opts.rtol = p.rtol;
                opts.atol = 1e-12;
                opts.samples = 20000;
                Trajectory t = integrate(p.system, p.ic, p.t_end, opts);
                write_file(path.string(), trajectory_csv(t));
            } else {
                LceOptions opts;
                opts.rtol = p.rtol;
                opts.atol = 1e-12;
                const double tau = default_tau(p.system, p.ic);
                opts.series_stride =
                    std::max(1L, static_cast<long>(std::ceil(p.t_end / tau)) / 2000);
                LceSeries series = lce_qr(p.system, p.ic, p.t_end, opts);
                write_file(path.string(), lce_csv(series));
            }
        });
    }
    run_parallel(std::move(tasks));

    json jpanels = json::array();
    for (const auto& p : panels) {
        json jp;
        jp["panel"] = p.panel;
        jp["system"] = p.system_label;
        jp["kind"] = p.kind;
        jp["file"] = p.file;
        jp["t_end"] = p.t_end;
        json ic = json::array();
        for (int i = 0; i < p.ic.size(); ++i) ic.push_back(p.ic[i]);
        jp["ic"] = ic;
        jpanels.push_back(jp);
    }

    if (figure == "fig5") {
        std::string csv = "system,x,y,z,stable,residual\n";
        auto dump = [&](const std::string& label, const PolySystem& s, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
            for (const auto& e : find_equilibria(s, lo, hi)) {
                csv += label;
                for (int i = 0; i < e.point.size(); ++i) csv += "," + format_double(e.point[i]);
                csv += std::string(",") + (e.stable ? "yes" : "no") + "," +
                       format_double(e.residual) + "\n";
            }
        };
        dump("ds", hidden_ds, -10 * Eigen::VectorXd::Ones(3), 10 * Eigen::VectorXd::Ones(3));
        IntegrateOptions opts;
        opts.rtol = 1e-12;
        opts.atol = 1e-12;
        opts.samples = 4000;
        Trajectory t = integrate(hidden_cds, hidden_cds_ic, 200.0, opts);
        Eigen::VectorXd lo = t.states.front(), hi = t.states.front();
        for (const auto& x : t.states) {
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
        }
        Eigen::VectorXd span = hi - lo;
        lo = (lo - 0.5 * span).cwiseMax(Eigen::VectorXd::Zero(3));
        hi += 0.5 * span;
        dump("cds", hidden_cds, lo, hi);
        write_file((fs::path(out_dir) / (figure + "_equilibria.csv")).string(), csv);
        manifest["equilibria"] = figure + "_equilibria.csv";
    }

    manifest["panels"] = jpanels;
    write_file((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    std::cout << "wrote " << panels.size() << " panel files to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polynomial dynamical systems, quasi-chemical transforms, reaction networks, "
                 "and chaos diagnostics"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list catalog entries");

    InputSelector show_sel;
    std::string show_out;
    auto* show = app.add_subcommand("show", "emit a catalog system (or plan) document");
    show->add_option("--id", show_sel.id, "catalog id")->required();
    show->add_option("--epsilon", show_sel.epsilon, "epsilon for parametric entries");
    show->add_option("--mu", show_sel.mu, "mu for parametric entries");
    show->add_option("--out", show_out, "output file (stdout default)");

    InputSelector check_sel;
    auto* check = app.add_subcommand("check", "chemicality verdict and complexity label");
    add_input_flags(check, check_sel);

    std::string plan_file, plan_id, tr_eps, tr_mu, tr_out;
    auto* transform = app.add_subcommand("transform", "execute a construction plan");
    transform->add_option("--plan", plan_file, "plan definition file");
    transform->add_option("--plan-id", plan_id, "catalog plan id");
    transform->add_option("--epsilon", tr_eps, "override epsilon");
    transform->add_option("--mu", tr_mu, "override mu");
    transform->add_option("--out", tr_out, "output directory for the three stages");

    InputSelector crn_sel;
    bool crn_fuse = false, crn_degrees = false, crn_ode = false;
    std::string crn_out;
    auto* crn = app.add_subcommand("crn", "compile a chemical system to a reaction network");
    add_input_flags(crn, crn_sel);
    crn->add_flag("--canonical", "canonical network (default)");
    crn->add_flag("--fuse", crn_fuse, "fuse reactions sharing reactants and rate");
    crn->add_flag("--degrees", crn_degrees, "print the degree label");
    crn->add_flag("--emit-ode", crn_ode, "emit the mass-action ODE system instead");
    crn->add_option("--out", crn_out, "output file (stdout default)");

    InputSelector sim_sel;
    std::string sim_ic, sim_out;
    double sim_tend = 100.0, sim_rtol = 1e-9, sim_atol = 1e-12;
    int sim_samples = 5000;
    auto* simulate = app.add_subcommand("simulate", "integrate a trajectory, emit CSV");
    add_input_flags(simulate, sim_sel);
    simulate->add_option("--ic", sim_ic, "initial condition a,b,c (catalog default if omitted)");
    simulate->add_option("--t-end", sim_tend, "integration horizon");
    simulate->add_option("--samples", sim_samples, "number of output samples");
    simulate->add_option("--rtol", sim_rtol, "relative tolerance");
    simulate->add_option("--atol", sim_atol, "absolute tolerance");
    simulate->add_option("--out", sim_out, "output CSV file (stdout default)");

    InputSelector lce_sel;
    std::string lce_ic, lce_out;
    double lce_tend = 1000.0, lce_tau = 0.0, lce_rtol = 1e-9, lce_atol = 1e-12;
    int lce_stride = 1;
    auto* lce = app.add_subcommand("lce", "finite-time Lyapunov exponents, emit CSV + summary");
    add_input_flags(lce, lce_sel);
    lce->add_option("--ic", lce_ic, "initial condition a,b,c (catalog default if omitted)");
    lce->add_option("--t-end", lce_tend, "horizon");
    lce->add_option("--tau", lce_tau, "re-orthonormalization window (auto if omitted)");
    lce->add_option("--rtol", lce_rtol, "relative tolerance");
    lce->add_option("--atol", lce_atol, "absolute tolerance");
    lce->add_option("--stride", lce_stride, "record every k-th window");
    lce->add_option("--out", lce_out, "output CSV file (stdout default)");

    std::string rep_fig, rep_out;
    double rep_ttraj = 500.0, rep_tlce = 50.0;
    auto* reproduce = app.add_subcommand("reproduce", "emit the reference figure datasets");
    reproduce->add_option("figure", rep_fig, "figure id: fig1..fig5")->required();
    reproduce->add_option("--out", rep_out, "output directory")->required();
    reproduce->add_option("--t-end", rep_ttraj, "trajectory horizon");
    reproduce->add_option("--t-lce", rep_tlce, "exponent-series horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (list->parsed()) return cmd_list();
        if (show->parsed()) return cmd_show(show_sel, show_out);
        if (check->parsed()) return cmd_check(check_sel);
        if (transform->parsed()) return cmd_transform(plan_file, plan_id, tr_eps, tr_mu, tr_out);
        if (crn->parsed()) return cmd_crn(crn_sel, crn_fuse, crn_degrees, crn_ode, crn_out);
        if (simulate->parsed())
            return cmd_simulate(sim_sel, sim_ic, sim_tend, sim_samples, sim_rtol, sim_atol, sim_out);
        if (lce->parsed())
            return cmd_lce(lce_sel, lce_ic, lce_tend, lce_tau, lce_rtol, lce_atol, lce_stride,
                           lce_out);
        if (reproduce->parsed()) return cmd_reproduce(rep_fig, rep_out, rep_ttraj, rep_tlce);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: cannot parse input document: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNegative;
    }
    return kExitUsage;
}
