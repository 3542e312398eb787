#include "anisodg/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "anisodg/assembly.hpp"
#include "anisodg/basis.hpp"
#include "anisodg/condition.hpp"
#include "anisodg/direct.hpp"
#include "anisodg/krylov.hpp"

namespace anisodg {

using nlohmann::json;

namespace {

template <typename T>
std::vector<T> scalar_or_list(const json& v)
{
    if (v.is_array()) {
        return v.get<std::vector<T>>();
    }
    return {v.get<T>()};
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || it.key() == a;
        }
        if (!ok) {
            throw Error("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

AmgParams parse_amg(const json& j)
{
    check_keys(j, {"strength_theta", "prolongator_omega", "coarse_size", "max_levels", "pre_sweeps",
                   "post_sweeps", "smoother", "jacobi_omega"},
               "precond.amg");
    AmgParams p;
    p.strength_theta = j.value("strength_theta", p.strength_theta);
    p.prolongator_omega = j.value("prolongator_omega", p.prolongator_omega);
    p.coarse_size = j.value("coarse_size", p.coarse_size);
    p.max_levels = j.value("max_levels", p.max_levels);
    p.pre_sweeps = j.value("pre_sweeps", p.pre_sweeps);
    p.post_sweeps = j.value("post_sweeps", p.post_sweeps);
    p.jacobi_omega = j.value("jacobi_omega", p.jacobi_omega);
    const std::string sm = j.value("smoother", std::string("gauss-seidel"));
    if (sm == "gauss-seidel") {
        p.smoother = AmgSmoother::GaussSeidel;
    } else if (sm == "jacobi") {
        p.smoother = AmgSmoother::Jacobi;
    } else {
        throw Error("config: unknown AMG smoother '" + sm + "'");
    }
    return p;
}

json optional_json(const auto& v)
{
    if (v) {
        return json(*v);
    }
    return nullptr;
}

template <typename T>
std::optional<T> json_optional(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return std::nullopt;
    }
    return j.at(key).get<T>();
}

} // namespace

RunConfig RunConfig::from_json(const json& j)
{
    check_keys(j, {"command", "case", "d_perp", "omega", "mesh", "k", "d_par", "levels", "scheme", "beta",
                   "penalty", "solver", "preconditioner", "tol", "max_iterations", "restart", "condest",
                   "kappa2", "baseline", "lanczos_max_iterations", "precond", "output", "seed",
                   "description"},
               "config");
    RunConfig c;
    c.source = j;
    c.command = j.value("command", c.command);
    if (!j.contains("case")) {
        throw Error("config: missing 'case'");
    }
    c.case_name = j.at("case").get<std::string>();
    c.d_perp = j.value("d_perp", c.d_perp);
    c.omega = j.value("omega", c.omega);
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        check_keys(m, {"family", "n_r", "n_theta", "n_x", "n_y", "jitter", "seed", "r_in", "r_out", "x0", "x1",
                       "y0", "y1", "theta_per_r", "x_per_level", "y_per_level"},
                   "mesh");
        auto& mc = c.mesh;
        mc.family = json_optional<std::string>(m, "family");
        mc.n_r = m.value("n_r", mc.n_r);
        mc.n_theta = m.value("n_theta", mc.n_theta);
        mc.n_x = m.value("n_x", mc.n_x);
        mc.n_y = m.value("n_y", mc.n_y);
        mc.jitter = m.value("jitter", mc.jitter);
        mc.seed = m.value("seed", mc.seed);
        mc.r_in = json_optional<double>(m, "r_in");
        mc.r_out = json_optional<double>(m, "r_out");
        mc.x0 = json_optional<double>(m, "x0");
        mc.x1 = json_optional<double>(m, "x1");
        mc.y0 = json_optional<double>(m, "y0");
        mc.y1 = json_optional<double>(m, "y1");
        mc.theta_per_r = m.value("theta_per_r", mc.theta_per_r);
        mc.x_per_level = m.value("x_per_level", mc.x_per_level);
        mc.y_per_level = m.value("y_per_level", mc.y_per_level);
    }
    if (j.contains("k")) c.ks = scalar_or_list<int>(j.at("k"));
    if (j.contains("d_par")) c.d_pars = scalar_or_list<double>(j.at("d_par"));
    if (j.contains("levels")) c.levels = scalar_or_list<int>(j.at("levels"));
    c.scheme = j.value("scheme", c.scheme);
    c.beta = j.value("beta", c.beta);
    c.penalty = j.value("penalty", c.penalty);
    c.solver = j.value("solver", c.solver);
    c.preconditioner = j.value("preconditioner", c.preconditioner);
    c.tol = j.value("tol", c.tol);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.restart = j.value("restart", c.restart);
    c.condest = j.value("condest", c.condest);
    c.kappa2 = j.value("kappa2", c.kappa2);
    c.baseline = j.value("baseline", c.baseline);
    c.lanczos_max_iterations = j.value("lanczos_max_iterations", c.lanczos_max_iterations);
    if (j.contains("precond")) {
        const json& p = j.at("precond");
        check_keys(p, {"jacobi_omega", "jacobi_sweeps", "inner_tol", "inner_max_iterations", "use_radial",
                       "use_circular", "schwarz_dense_limit", "schwarz_weight", "amg"},
                   "precond");
        auto& o = c.precond;
        o.jacobi_omega = p.value("jacobi_omega", o.jacobi_omega);
        o.jacobi_sweeps = p.value("jacobi_sweeps", o.jacobi_sweeps);
        o.inner_tol = p.value("inner_tol", o.inner_tol);
        o.inner_max_iterations = p.value("inner_max_iterations", o.inner_max_iterations);
        o.use_radial = p.value("use_radial", o.use_radial);
        o.use_circular = p.value("use_circular", o.use_circular);
        o.schwarz_dense_limit = p.value("schwarz_dense_limit", o.schwarz_dense_limit);
        o.schwarz_weight = p.value("schwarz_weight", o.schwarz_weight);
        if (p.contains("amg")) {
            o.amg = parse_amg(p.at("amg"));
        }
    }
    c.output = j.value("output", c.output);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

void RunConfig::validate() const
{
    if (command != "solve" && command != "convergence" && command != "cond" && command != "precond") {
        throw Error("config: unknown command '" + command + "'");
    }
    if (ks.empty() || d_pars.empty()) {
        throw Error("config: sweep lists must be nonempty");
    }
    for (int k : ks) {
        if (k < 1 || k > kMaxDegree) {
            throw Error("config: k must lie in [1, 8]");
        }
    }
    for (int l : levels) {
        if (l < 1) {
            throw Error("config: levels must be positive");
        }
    }
    if (!(tol > 0.0 && tol < 1.0)) {
        throw Error("config: tol must lie in (0, 1)");
    }
    if (scheme != "ipdg" && scheme != "cg") {
        throw Error("config: scheme must be ipdg or cg");
    }
    if (beta != 1.0 && beta != -1.0) {
        throw Error("config: beta must be +1 or -1");
    }
    parse_penalty(penalty);
    if (solver != "direct" && solver != "cg" && solver != "gmres" && solver != "fgmres") {
        throw Error("config: unknown solver '" + solver + "'");
    }
    if (preconditioner != "none") {
        parse_variant(preconditioner);
        if (scheme != "ipdg") {
            throw Error("config: preconditioners apply to the ipdg scheme only");
        }
        if (solver == "direct") {
            throw Error("config: a preconditioner needs a Krylov solver");
        }
    }
    if (max_iterations < 1 || restart < 1) {
        throw Error("config: iteration limits must be positive");
    }
    for (double d : d_pars) {
        if (!(d_perp > 0.0 && d >= d_perp)) {
            throw Error("config: need d_par >= d_perp > 0");
        }
    }
    get_case(case_name, {d_pars.front(), d_perp, omega});
}

json apply_overrides(json j, const std::vector<std::string>& overrides)
{
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error("override '" + o + "' is not key=value");
        }
        const std::string key = o.substr(0, eq);
        const std::string text = o.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded()) {
            value = text;
        }
        std::string pointer = "/";
        for (char ch : key) {
            pointer += ch == '.' ? '/' : ch;
        }
        j[json::json_pointer(pointer)] = value;
    }
    return j;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config " + path.string());
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw Error("config " + path.string() + " is not valid JSON");
    }
    return RunConfig::from_json(apply_overrides(std::move(j), overrides));
}

namespace {

struct Point {
    int k;
    double d_par;
    int level;  // 0 when no levels are configured
};

std::vector<Point> sweep(const RunConfig& c)
{
    std::vector<Point> pts;
    const std::vector<int> levels = c.levels.empty() ? std::vector<int>{0} : c.levels;
    for (int k : c.ks) {
        for (double d : c.d_pars) {
            for (int l : levels) {
                pts.push_back({k, d, l});
            }
        }
    }
    return pts;
}

MeshSpec mesh_for(const RunConfig& c, const ProblemCase& problem, int level)
{
    MeshSpec s = problem.domain;
    const auto& m = c.mesh;
    if (m.family) {
        s.family = parse_mesh_family(*m.family);
    }
    if (is_annulus(s.family) != is_annulus(problem.domain.family)) {
        throw Error("config: mesh family does not fit the domain of case '" + problem.name + "'");
    }
    s.n_r = m.n_r;
    s.n_theta = m.n_theta;
    s.n_x = m.n_x;
    s.n_y = m.n_y;
    if (level > 0) {
        s.n_r = level;
        s.n_theta = m.theta_per_r * level;
        s.n_x = m.x_per_level * level;
        s.n_y = m.y_per_level * level;
    }
    s.jitter_amplitude = m.jitter;
    s.jitter_seed = m.seed;
    if (m.r_in) s.r_in = *m.r_in;
    if (m.r_out) s.r_out = *m.r_out;
    if (m.x0) s.x0 = *m.x0;
    if (m.x1) s.x1 = *m.x1;
    if (m.y0) s.y0 = *m.y0;
    if (m.y1) s.y1 = *m.y1;
    return s;
}

struct Discrete {
    ProblemCase problem;
    Mesh mesh;
    DofMap dofs;
    AssembledSystem system;
};

Discrete discretize(const RunConfig& c, const Point& p)
{
    const ProblemParams params{p.d_par, c.d_perp, c.omega};
    ProblemCase problem = get_case(c.case_name, params);
    Mesh mesh = build_mesh(mesh_for(c, problem, p.level));
    if (c.scheme == "cg") {
        DofMap dofs = build_dofmap(mesh, p.k, Continuity::CG);
        AssembledSystem sys = assemble_cg(mesh, dofs, problem);
        return {std::move(problem), std::move(mesh), std::move(dofs), std::move(sys)};
    }
    DofMap dofs = build_dofmap(mesh, p.k, Continuity::DG);
    AssembledSystem sys = assemble_ipdg(mesh, dofs, problem, c.beta, parse_penalty(c.penalty));
    return {std::move(problem), std::move(mesh), std::move(dofs), std::move(sys)};
}

StudyRow row_header(const RunConfig& c, const Point& p, const Discrete& d)
{
    StudyRow r;
    r.case_name = c.case_name;
    r.family = mesh_family_name(d.mesh.spec.family);
    const bool annulus = is_annulus(d.mesh.spec.family);
    r.n_r = annulus ? d.mesh.spec.n_r : 0;
    r.n_theta = annulus ? d.mesh.spec.n_theta : 0;
    r.n_x = annulus ? 0 : d.mesh.spec.n_x;
    r.n_y = annulus ? 0 : d.mesh.spec.n_y;
    r.level = p.level;
    r.k = p.k;
    r.d_par = p.d_par;
    r.scheme = c.scheme;
    r.penalty = c.penalty;
    r.beta = c.beta;
    r.solver = c.solver;
    r.preconditioner = c.preconditioner;
    r.dofs = d.system.num_dofs;
    r.h = d.mesh.h;
    return r;
}

std::shared_ptr<const SparseDirectSolver> factorize(const AssembledSystem& sys)
{
    const bool spd = sys.scheme == Scheme::CG || sys.beta == 1.0;
    return std::make_shared<const SparseDirectSolver>(
        sys.a, spd ? SparseDirectSolver::Kind::Cholesky : SparseDirectSolver::Kind::LU);
}

SolveReport krylov(const RunConfig& c, const std::string& solver, const LinearOperator& a,
                   std::span<const double> b, std::span<double> x, const LinearOperator* m)
{
    if (solver == "cg") {
        return cg_solve(a, b, x, {c.tol, c.max_iterations}, m);
    }
    GmresOptions o;
    o.tol = c.tol;
    o.max_iterations = c.max_iterations;
    o.restart = c.restart;
    o.flexible = solver == "fgmres";
    return gmres_solve(a, b, x, o, m);
}

std::vector<double> solve_system(const RunConfig& c, const Discrete& d, StudyRow& row,
                                 const LinearOperator* m)
{
    std::vector<double> x(d.system.num_dofs, 0.0);
    if (c.solver == "direct") {
        factorize(d.system)->solve(d.system.rhs, x);
        return x;
    }
    const bool sym = d.system.scheme == Scheme::CG || d.system.beta == 1.0;
    const auto a = LinearOperator::from_matrix(d.system.a, sym);
    const auto rep = krylov(c, c.solver, a, d.system.rhs, x, m);
    row.iterations = rep.iterations;
    row.converged = rep.converged;
    row.final_residual = rep.final_residual();
    row.residuals = rep.residuals;
    return x;
}

void record_error(const Discrete& d, std::span<const double> x, StudyRow& row)
{
    if (!d.problem.has_exact()) {
        return;
    }
    if (d.system.scheme == Scheme::CG) {
        const auto full = expand_free(d.dofs, x, d.system.dirichlet_values);
        row.l2_error = l2_error(d.mesh, d.dofs, full, d.problem);
    } else {
        row.l2_error = l2_error(d.mesh, d.dofs, x, d.problem);
    }
}

template <typename Fn>
StudyReport run_rows(const std::string& command, const RunConfig& c, Fn&& fn)
{
    StudyReport report;
    report.command = command;
    report.config = c.source;
    for (const Point& p : sweep(c)) {
        const auto t0 = std::chrono::steady_clock::now();
        StudyRow row;
        try {
            Discrete d = discretize(c, p);
            row = row_header(c, p, d);
            fn(d, row);
        } catch (const Error& e) {
            row.case_name = c.case_name;
            row.k = p.k;
            row.d_par = p.d_par;
            row.level = p.level;
            row.scheme = c.scheme;
            row.penalty = c.penalty;
            row.beta = c.beta;
            row.solver = c.solver;
            row.preconditioner = c.preconditioner;
            row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(std::move(row));
    }
    return report;
}

void fill_orders(StudyReport& report)
{
    // Orders along each (k, d_par) series, in sweep order.
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        auto& cur = report.rows[i];
        const auto& prev = report.rows[i - 1];
        if (cur.k != prev.k || cur.d_par != prev.d_par || cur.level == prev.level) {
            continue;
        }
        if (cur.l2_error && prev.l2_error && *cur.l2_error > 0.0 && *prev.l2_error > 0.0) {
            const double e[2] = {*prev.l2_error, *cur.l2_error};
            const double h[2] = {prev.h, cur.h};
            cur.order = convergence_order(e, h).front();
        }
    }
}

std::shared_ptr<PreconditionerStack> preconditioner_for(const RunConfig& c, const Discrete& d)
{
    return build_preconditioner(parse_variant(c.preconditioner), d.mesh, d.dofs, d.problem, d.system.a,
                                c.precond);
}

void record_cond1(const Discrete& d, StudyRow& row)
{
    const auto solver = factorize(d.system);
    const auto inv = SparseDirectSolver::as_operator(solver);
    row.cond1 = condest_1norm(d.system.a, inv);
}

} // namespace

StudyReport run_solve(const RunConfig& c)
{
    return run_rows("solve", c, [&](const Discrete& d, StudyRow& row) {
        std::shared_ptr<PreconditionerStack> stack;
        LinearOperator m;
        if (c.preconditioner != "none") {
            stack = preconditioner_for(c, d);
            m = PreconditionerStack::as_operator(stack);
        }
        const auto x = solve_system(c, d, row, stack ? &m : nullptr);
        record_error(d, x, row);
    });
}

StudyReport run_convergence(const RunConfig& c)
{
    StudyReport r = run_solve(c);
    r.command = "convergence";
    fill_orders(r);
    return r;
}

StudyReport run_cond_study(const RunConfig& c)
{
    return run_rows("cond", c, [&](const Discrete& d, StudyRow& row) {
        record_cond1(d, row);
        if (c.kappa2) {
            LanczosOptions lo;
            lo.max_iterations = c.lanczos_max_iterations;
            lo.seed = static_cast<unsigned>(c.seed);
            const auto a = LinearOperator::from_matrix(d.system.a, true);
            Cond2Estimate est;
            if (c.preconditioner != "none") {
                const auto stack = preconditioner_for(c, d);
                const auto m = PreconditionerStack::as_operator(stack);
                est = spd_cond2(a, &m, lo);
            } else {
                est = spd_cond2(a, nullptr, lo);
            }
            row.cond2 = est.cond;
        }
    });
}

StudyReport run_precond_study(const RunConfig& c)
{
    if (c.preconditioner == "none") {
        throw Error("precond: config names no preconditioner");
    }
    return run_rows("precond", c, [&](const Discrete& d, StudyRow& row) {
        const auto stack = preconditioner_for(c, d);
        const auto m = PreconditionerStack::as_operator(stack);
        const auto x = solve_system(c, d, row, &m);
        record_error(d, x, row);
        if (stack->inner_stats().applications > 0) {
            row.inner_iterations = stack->inner_stats().iterations;
        }
        if (c.baseline) {
            std::vector<double> y(d.system.num_dofs, 0.0);
            const auto a = LinearOperator::from_matrix(d.system.a, c.beta == 1.0);
            const std::string base = c.solver == "fgmres" ? "gmres" : c.solver;
            const auto rep = krylov(c, base, a, d.system.rhs, y, nullptr);
            row.baseline_iterations = rep.iterations;
            row.baseline_converged = rep.converged;
            row.baseline_residuals = rep.residuals;
        }
        if (c.condest) {
            record_cond1(d, row);
        }
        if (c.kappa2) {
            LanczosOptions lo;
            lo.max_iterations = c.lanczos_max_iterations;
            lo.seed = static_cast<unsigned>(c.seed);
            const auto a = LinearOperator::from_matrix(d.system.a, true);
            row.cond2 = spd_cond2(a, &m, lo).cond;
        }
    });
}

StudyReport run_command(const std::string& command, const RunConfig& config)
{
    if (command == "solve") return run_solve(config);
    if (command == "convergence") return run_convergence(config);
    if (command == "cond") return run_cond_study(config);
    if (command == "precond") return run_precond_study(config);
    throw Error("unknown command '" + command + "'");
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{
        "case", "family", "n_r", "n_theta", "n_x", "n_y", "level", "k", "d_par", "scheme", "penalty", "beta",
        "solver", "preconditioner", "dofs", "h", "l2_error", "order", "iterations", "converged",
        "final_residual", "baseline_iterations", "baseline_converged", "cond1", "cond2",
        "inner_iterations", "error"};
    return cols;
}

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

template <typename T>
std::string fmt_int(const std::optional<T>& v)
{
    return v ? std::to_string(*v) : "";
}

std::string fmt_bool(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch == '\n' ? ' ' : ch);
    }
    return out + "\"";
}

} // namespace

std::string report_csv(const StudyReport& report)
{
    std::ostringstream out;
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (const auto& r : report.rows) {
        const std::vector<std::string> f{
            r.case_name, r.family, std::to_string(r.n_r), std::to_string(r.n_theta), std::to_string(r.n_x),
            std::to_string(r.n_y), std::to_string(r.level), std::to_string(r.k), fmt(r.d_par), r.scheme,
            r.penalty, fmt(r.beta), r.solver, r.preconditioner, std::to_string(r.dofs), fmt(r.h),
            fmt(r.l2_error), fmt(r.order), fmt_int(r.iterations), fmt_bool(r.converged),
            fmt(r.final_residual), fmt_int(r.baseline_iterations), fmt_bool(r.baseline_converged),
            fmt(r.cond1), fmt(r.cond2), fmt_int(r.inner_iterations), csv_escape(r.error.value_or(""))};
        for (std::size_t i = 0; i < f.size(); ++i) {
            out << (i ? "," : "") << f[i];
        }
        out << '\n';
    }
    return out.str();
}

json report_to_json(const StudyReport& report)
{
    json j;
    j["command"] = report.command;
    j["version"] = report.version;
    j["config"] = report.config;
    j["rows"] = json::array();
    for (const auto& r : report.rows) {
        json o;
        o["case"] = r.case_name;
        o["family"] = r.family;
        o["n_r"] = r.n_r;
        o["n_theta"] = r.n_theta;
        o["n_x"] = r.n_x;
        o["n_y"] = r.n_y;
        o["level"] = r.level;
        o["k"] = r.k;
        o["d_par"] = r.d_par;
        o["scheme"] = r.scheme;
        o["penalty"] = r.penalty;
        o["beta"] = r.beta;
        o["solver"] = r.solver;
        o["preconditioner"] = r.preconditioner;
        o["dofs"] = r.dofs;
        o["h"] = r.h;
        o["l2_error"] = optional_json(r.l2_error);
        o["order"] = optional_json(r.order);
        o["iterations"] = optional_json(r.iterations);
        o["converged"] = optional_json(r.converged);
        o["final_residual"] = optional_json(r.final_residual);
        o["baseline_iterations"] = optional_json(r.baseline_iterations);
        o["baseline_converged"] = optional_json(r.baseline_converged);
        o["cond1"] = optional_json(r.cond1);
        o["cond2"] = optional_json(r.cond2);
        o["inner_iterations"] = optional_json(r.inner_iterations);
        o["error"] = optional_json(r.error);
        o["seconds"] = r.seconds;
        o["residuals"] = r.residuals;
        o["baseline_residuals"] = r.baseline_residuals;
        j["rows"].push_back(std::move(o));
    }
    return j;
}

StudyReport report_from_json(const json& j)
{
    StudyReport report;
    report.command = j.at("command").get<std::string>();
    report.version = j.at("version").get<std::string>();
    report.config = j.at("config");
    for (const auto& o : j.at("rows")) {
        StudyRow r;
        r.case_name = o.at("case").get<std::string>();
        r.family = o.at("family").get<std::string>();
        r.n_r = o.at("n_r").get<int>();
        r.n_theta = o.at("n_theta").get<int>();
        r.n_x = o.at("n_x").get<int>();
        r.n_y = o.at("n_y").get<int>();
        r.level = o.at("level").get<int>();
        r.k = o.at("k").get<int>();
        r.d_par = o.at("d_par").get<double>();
        r.scheme = o.at("scheme").get<std::string>();
        r.penalty = o.at("penalty").get<std::string>();
        r.beta = o.at("beta").get<double>();
        r.solver = o.at("solver").get<std::string>();
        r.preconditioner = o.at("preconditioner").get<std::string>();
        r.dofs = o.at("dofs").get<int>();
        r.h = o.at("h").get<double>();
        r.l2_error = json_optional<double>(o, "l2_error");
        r.order = json_optional<double>(o, "order");
        r.iterations = json_optional<int>(o, "iterations");
        r.converged = json_optional<bool>(o, "converged");
        r.final_residual = json_optional<double>(o, "final_residual");
        r.baseline_iterations = json_optional<int>(o, "baseline_iterations");
        r.baseline_converged = json_optional<bool>(o, "baseline_converged");
        r.cond1 = json_optional<double>(o, "cond1");
        r.cond2 = json_optional<double>(o, "cond2");
        r.inner_iterations = json_optional<long>(o, "inner_iterations");
        r.error = json_optional<std::string>(o, "error");
        r.seconds = o.at("seconds").get<double>();
        r.residuals = o.at("residuals").get<std::vector<double>>();
        r.baseline_residuals = o.at("baseline_residuals").get<std::vector<double>>();
        report.rows.push_back(std::move(r));
    }
    return report;
}

void write_outputs(const StudyReport& report, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p);
        if (!out || !(out << text) || !out.flush()) {
            throw Error("cannot write " + p.string());
        }
    };
    write(dir / "report.csv", report_csv(report));
    write(dir / "report.json", report_to_json(report).dump(1) + "\n");
    write(dir / "config.echo.json", report.config.dump(2) + "\n");
}

} // namespace anisodg
