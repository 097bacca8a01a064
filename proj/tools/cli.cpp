#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfns/problems.hpp"
#include "sfns/solvers.hpp"

namespace sfns::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CommonOptions {
    double re = 10.0;
    double tol = 1e-3;
    double lin_tol = 1e-8;
    std::string precond = "jacobi";
    int quad = kDefaultAssemblyQuadrature;
    int error_quad = kDefaultErrorQuadrature;
    std::string out = ".";
    std::vector<double> continuation;
    int max_newton = 25;
    std::string initial_guess = "stokes";
    std::string norm = "full";
    int samples = 33;

    NewtonConfig newton() const {
        NewtonConfig c;
        c.tol = tol;
        c.max_newton = max_newton;
        c.initial_guess = initial_guess == "zero" ? InitialGuess::Zero : InitialGuess::Stokes;
        c.continuation = continuation;
        return c;
    }
    SolverConfig linear() const {
        SolverConfig c;
        c.rel_tol = lin_tol;
        c.preconditioner = precond == "none" ? Preconditioner::None : Preconditioner::Jacobi;
        return c;
    }
    AssemblyOptions assembly() const { return {quad, Execution::Parallel}; }
    NormKind norm_kind() const { return norm == "seminorm" ? NormKind::Seminorm : NormKind::Full; }

    void validate() const {
        if (!(re > 0.0) || !std::isfinite(re)) throw InvalidArgument("--re must be positive");
        if (!(tol > 0.0)) throw InvalidArgument("--tol must be positive");
        if (!(lin_tol > 0.0)) throw InvalidArgument("--lin-tol must be positive");
        if (samples < 2) throw InvalidArgument("--samples must be >= 2");
        newton().validate();
        linear().validate();
        gauss_rule(quad);
        gauss_rule(error_quad);
    }
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_samples = true) {
    cmd->add_option("--re", o.re, "Reynolds number")->capture_default_str();
    cmd->add_option("--tol", o.tol, "Newton tolerance on residual and step norms")->capture_default_str();
    cmd->add_option("--lin-tol", o.lin_tol, "BiCGSTAB relative residual tolerance")->capture_default_str();
    cmd->add_option("--precond", o.precond, "BiCGSTAB preconditioner")
        ->check(CLI::IsMember({"none", "jacobi"}))
        ->capture_default_str();
    cmd->add_option("--quad", o.quad, "Gauss points per axis for assembly")
        ->check(CLI::Range(1, 10))
        ->capture_default_str();
    cmd->add_option("--error-quad", o.error_quad, "Gauss points per axis for error norms")
        ->check(CLI::Range(1, 10))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--continuation", o.continuation, "Increasing Reynolds ramp, comma separated")
        ->delimiter(',');
    cmd->add_option("--max-newton", o.max_newton, "Newton iteration cap")->capture_default_str();
    cmd->add_option("--initial-guess", o.initial_guess, "Newton starting point")
        ->check(CLI::IsMember({"stokes", "zero"}))
        ->capture_default_str();
    cmd->add_option("--norm", o.norm, "H1/H2 error columns as full norms or seminorms")
        ->check(CLI::IsMember({"full", "seminorm"}))
        ->capture_default_str();
    if (with_samples) {
        cmd->add_option("--samples", o.samples, "Field samples per axis in field.csv")->capture_default_str();
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_double(double v) {
    if (v == 0.0) v = 0.0;  // no "-0" in output
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void write_field_csv(const fs::path& path, const DiscreteField& field, int n) {
    std::ostringstream os;
    os << "x,y,psi,u,v\n";
    for (const auto& s : sample_field(field, n)) {
        os << fmt_double(s.x) << ',' << fmt_double(s.y) << ',' << fmt_double(s.psi) << ',' << fmt_double(s.u) << ','
           << fmt_double(s.v) << '\n';
    }
    write_text(path, os.str());
}

void write_profile_csv(const fs::path& path, const char* header, const std::vector<ProfilePoint>& points) {
    std::ostringstream os;
    os << header << '\n';
    for (const auto& p : points) os << fmt_double(p.coordinate) << ',' << fmt_double(p.velocity) << '\n';
    write_text(path, os.str());
}

json errors_json(const std::optional<ErrorReport>& e) {
    if (!e) return nullptr;
    return json{{"l2", e->l2}, {"h1", e->h1}, {"h2", e->h2}};
}

/// One solve's worth of output, whatever the method.
struct RunRecord {
    std::string method;
    double re = 0.0;
    LevelStats coarse;
    std::optional<LevelStats> fine;
    std::optional<ErrorReport> errors;
    std::string norm = "full";
    bool converged = false;
    std::string failure;
    double wall_seconds = 0.0;
};

json stats_json(const RunRecord& r) {
    const LevelStats& last = r.fine ? *r.fine : r.coarse;
    json j;
    j["method"] = r.method;
    j["re"] = r.re;
    j["coarse_h"] = r.coarse.h;
    j["fine_h"] = last.h;
    j["newton_iters"] = r.coarse.newton_iters;
    j["fine_newton_iters"] = r.fine ? json(r.fine->newton_iters) : json(nullptr);
    j["bicgstab_iters_coarse"] = r.coarse.bicgstab_iters;
    j["bicgstab_iters_fine"] = r.fine ? r.fine->bicgstab_iters : std::vector<int>{};
    j["bicgstab_iters_initial"] = r.coarse.initial_guess_iters;
    j["residual"] = last.final_residual;
    j["residual_history"] = r.coarse.residual_history;
    j["errors"] = errors_json(r.errors);
    j["error_norm_kind"] = r.norm;
    j["free_dofs"] = json{{"coarse", r.coarse.free_dofs}, {"fine", r.fine ? json(r.fine->free_dofs) : json(nullptr)}};
    j["fine_nonlinear_residual_evals"] = r.fine ? json(r.fine->nonlinear_residual_evals) : json(nullptr);
    j["fine_linear_solves"] = r.fine ? json(r.fine->linear_solves) : json(nullptr);
    j["linear_converged"] = r.coarse.linear_converged && (!r.fine || r.fine->linear_converged);
    j["converged"] = r.converged;
    if (!r.failure.empty()) j["failure"] = r.failure;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

void write_stats(const fs::path& dir, const RunRecord& r) {
    write_text(dir / "stats.json", stats_json(r).dump(2) + "\n");
}

enum class ForceKind { Manufactured, Zero };

VectorField force_for(ForceKind kind, double re) {
    if (kind == ForceKind::Zero) return [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
    return manufactured_f(re);
}

struct Solved {
    RunRecord record;
    std::optional<DiscreteField> field;
};

Solved run_one_level(const CommonOptions& o, int nx, int ny, ForceKind force, const BoundarySpec& bc,
                     bool manufactured) {
    Solved s;
    s.record.method = "one-level";
    s.record.re = o.re;
    s.record.norm = o.norm;
    const auto t0 = std::chrono::steady_clock::now();
    FeSpace space(build_uniform(nx, ny), bc);
    try {
        OneLevelResult r = solve_one_level(space, o.re, force_for(force, o.re), o.newton(), o.linear(), o.assembly());
        s.record.wall_seconds = seconds_since(t0);
        s.record.coarse = r.stats;
        s.record.converged = true;
        s.field.emplace(space, std::move(r.psi));
    } catch (const NewtonFailure& e) {
        s.record.wall_seconds = seconds_since(t0);
        s.record.coarse = e.stats();
        s.record.failure = e.what();
        s.field.emplace(space, e.best_iterate());
    } catch (const LinearSolveFailure& e) {
        s.record.wall_seconds = seconds_since(t0);
        s.record.coarse = e.stats();
        s.record.failure = e.what();
    }
    if (manufactured && s.field) {
        s.record.errors = error_norms(*s.field, ManufacturedProblem(o.re), o.error_quad, o.norm_kind());
    }
    return s;
}

Solved run_two_level(const CommonOptions& o, int nh, int fine_n, ForceKind force, const BoundarySpec& bc,
                     bool manufactured) {
    Solved s;
    s.record.method = "two-level";
    s.record.re = o.re;
    s.record.norm = o.norm;
    TwoLevelConfig cfg;
    cfg.coarse_nx = cfg.coarse_ny = nh;
    cfg.fine_nx = cfg.fine_ny = fine_n;
    cfg.newton = o.newton();
    cfg.linear = o.linear();
    cfg.assembly = o.assembly();
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        TwoLevelResult r = solve_two_level(cfg, o.re, force_for(force, o.re), bc);
        s.record.wall_seconds = seconds_since(t0);
        s.record.coarse = r.coarse_stats;
        s.record.fine = r.fine_stats;
        s.record.converged = true;
        s.field.emplace(r.fine_space, std::move(r.fine));
    } catch (const NewtonFailure& e) {
        s.record.wall_seconds = seconds_since(t0);
        s.record.coarse = e.stats();
        s.record.failure = e.what();
    } catch (const LinearSolveFailure& e) {
        s.record.wall_seconds = seconds_since(t0);
        s.record.failure = e.what();
        if (e.fine_level()) {
            s.record.fine = e.stats();
        } else {
            s.record.coarse = e.stats();
        }
    }
    if (manufactured && s.field) {
        s.record.errors = error_norms(*s.field, ManufacturedProblem(o.re), o.error_quad, o.norm_kind());
    }
    return s;
}

ForceKind parse_force(const std::string& f) {
    return f == "zero" ? ForceKind::Zero : ForceKind::Manufactured;
}

int finish(const fs::path& dir, const Solved& s, int samples) {
    write_stats(dir, s.record);
    if (s.field) write_field_csv(dir / "field.csv", *s.field, samples);
    if (!s.record.converged) {
        std::cerr << "solver failure: " << s.record.failure << '\n';
        return kExitSolverFailure;
    }
    return kExitOk;
}

std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string table_row(const RunRecord& r) {
    const LevelStats& last = r.fine ? *r.fine : r.coarse;
    std::ostringstream os;
    os << r.method << ',' << fmt_double(r.re) << ',' << fmt_double(r.coarse.h) << ',' << fmt_double(last.h) << ','
       << r.coarse.newton_iters << ',' << join_ints(r.coarse.bicgstab_iters) << ','
       << (r.fine ? join_ints(r.fine->bicgstab_iters) : std::string()) << ',' << r.coarse.free_dofs << ','
       << last.free_dofs << ',';
    if (r.errors) {
        os << fmt_double(r.errors->l2) << ',' << fmt_double(r.errors->h1) << ',' << fmt_double(r.errors->h2);
    } else {
        os << ",,";
    }
    os << ',' << (r.converged ? 1 : 0) << ',' << fmt_double(r.wall_seconds) << '\n';
    return os.str();
}

double rate(double e_coarse, double e_fine, double h_coarse, double h_fine) {
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

int print_scaling(const std::vector<double>& hs, const std::string& element) {
    std::cout << "element,exponent,H,h,residual\n";
    for (ElementKind kind : kAllElementKinds) {
        const bool all = element == "all";
        const std::string key = kind == ElementKind::Argyris          ? "argyris"
                                : kind == ElementKind::CloughTocher   ? "clough-tocher"
                                : kind == ElementKind::BognerFoxSchmit ? "bfs"
                                                                       : "bicubic-spline";
        if (!all && key != element) continue;
        for (double big_h : hs) {
            const double h = scaling_h_for_H(kind, big_h);
            const double p = scaling_exponent(kind);
            const double residual = std::abs(h * std::pow(-std::log(h), -0.25) - std::pow(big_h, p));
            std::cout << element_name(kind) << ',' << (p == 2.5 ? "5/2" : "3/2") << ',' << fmt_double(big_h) << ','
                      << fmt_double(h) << ',' << fmt_double(residual) << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Stream-function Navier-Stokes solver: one-level Newton and two-level discretization"};
    app.require_subcommand(1);

    // one-level
    CommonOptions one;
    int one_nx = 8;
    std::optional<int> one_ny;
    std::string one_force = "manufactured";
    auto* c_one = app.add_subcommand("one-level", "Newton solve on a single mesh");
    add_common(c_one, one);
    c_one->add_option("--nx", one_nx, "Elements per axis")->capture_default_str();
    c_one->add_option("--ny", one_ny, "Elements along y (defaults to --nx)");
    c_one->add_option("--f", one_force, "Body force")
        ->check(CLI::IsMember({"manufactured", "zero"}))
        ->capture_default_str();

    // two-level
    CommonOptions two;
    int two_nh = 4;
    std::optional<int> two_fine;
    bool two_same = false;
    std::string two_force = "manufactured";
    auto* c_two = app.add_subcommand("two-level", "Coarse Newton solve plus one fine linear solve");
    add_common(c_two, two);
    c_two->add_option("--nh,--nx", two_nh, "Coarse elements per axis")->capture_default_str();
    auto* fine_opt = c_two->add_option("--fine-nx", two_fine, "Fine elements per axis (default 2*nh)");
    c_two->add_flag("--fine-equals-coarse", two_same, "Use the coarse mesh as the fine mesh")->excludes(fine_opt);
    c_two->add_option("--f", two_force, "Body force")
        ->check(CLI::IsMember({"manufactured", "zero"}))
        ->capture_default_str();

    // cavity
    CommonOptions cav;
    cav.re = 1.0;
    cav.samples = 65;
    int cav_nh = 16;
    std::optional<int> cav_fine;
    bool cav_one_level = false;
    double lid_speed = 1.0;
    int profile_samples = 65;
    auto* c_cav = app.add_subcommand("cavity", "Lid-driven cavity (two-level unless --one-level)");
    add_common(c_cav, cav);
    c_cav->add_option("--nh,--nx", cav_nh, "Coarse elements per axis")->capture_default_str();
    c_cav->add_option("--fine-nx", cav_fine, "Fine elements per axis (default 2*nh)");
    c_cav->add_flag("--one-level", cav_one_level, "Newton solve directly on the fine mesh");
    c_cav->add_option("--lid-speed", lid_speed, "Tangential lid velocity")->capture_default_str();
    c_cav->add_option("--profile-samples", profile_samples, "Points per velocity profile")->capture_default_str();

    // convergence
    CommonOptions conv;
    std::string conv_mode = "one-level";
    std::vector<int> conv_sizes;
    std::vector<double> conv_res;
    int conv_nh = 16;
    auto* c_conv = app.add_subcommand("convergence", "Error table over mesh sizes or Reynolds numbers");
    add_common(c_conv, conv, false);
    c_conv->add_option("--mode", conv_mode, "Solver")
        ->check(CLI::IsMember({"one-level", "two-level"}))
        ->capture_default_str();
    auto* sizes_opt = c_conv->add_option("--sizes", conv_sizes, "Mesh sizes (coarse sizes for two-level)")
                          ->delimiter(',');
    c_conv->add_option("--re-sweep", conv_res, "Reynolds numbers at fixed mesh")->delimiter(',')->excludes(sizes_opt);
    c_conv->add_option("--nh,--nx", conv_nh, "Mesh size for --re-sweep")->capture_default_str();

    // scaling
    std::vector<double> scaling_h = {0.25, 0.125, 0.0625};
    std::string scaling_element = "all";
    auto* c_scale = app.add_subcommand("scaling", "Recommended fine width h for coarse widths H");
    c_scale->add_option("--H", scaling_h, "Coarse mesh widths")->delimiter(',')->capture_default_str();
    c_scale->add_option("--element", scaling_element, "Element family")
        ->check(CLI::IsMember({"all", "argyris", "clough-tocher", "bfs", "bicubic-spline"}))
        ->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_one->parsed()) {
            one.validate();
            if (one_nx < 1 || one_ny.value_or(one_nx) < 1) throw InvalidArgument("mesh sizes must be >= 1");
            const fs::path dir = ensure_dir(one.out);
            const Solved s = run_one_level(one, one_nx, one_ny.value_or(one_nx), parse_force(one_force),
                                           ClampedHomogeneous{}, true);
            return finish(dir, s, one.samples);
        }
        if (c_two->parsed()) {
            two.validate();
            if (two_nh < 1) throw InvalidArgument("--nh must be >= 1");
            const int fine = two_same ? two_nh : two_fine.value_or(2 * two_nh);
            const fs::path dir = ensure_dir(two.out);
            const Solved s = run_two_level(two, two_nh, fine, parse_force(two_force), ClampedHomogeneous{}, true);
            return finish(dir, s, two.samples);
        }
        if (c_cav->parsed()) {
            cav.validate();
            if (cav_nh < 1) throw InvalidArgument("--nh must be >= 1");
            if (profile_samples < 2) throw InvalidArgument("--profile-samples must be >= 2");
            const int fine = cav_fine.value_or(2 * cav_nh);
            const CavityProblem problem{cav.re, lid_speed};
            const fs::path dir = ensure_dir(cav.out);
            const Solved s = cav_one_level
                                 ? run_one_level(cav, fine, fine, ForceKind::Zero, problem.boundary(), false)
                                 : run_two_level(cav, cav_nh, fine, ForceKind::Zero, problem.boundary(), false);
            const int code = finish(dir, s, cav.samples);
            if (s.field) {
                write_profile_csv(dir / "profile_u.csv", "y,u",
                                  velocity_profile(*s.field, {ProfileAxis::Vertical, 0.5}, profile_samples));
                write_profile_csv(dir / "profile_v.csv", "x,v",
                                  velocity_profile(*s.field, {ProfileAxis::Horizontal, 0.5}, profile_samples));
            }
            return code;
        }
        if (c_conv->parsed()) {
            conv.validate();
            const fs::path dir = ensure_dir(conv.out);
            const bool two_level = conv_mode == "two-level";
            std::vector<RunRecord> rows;
            if (!conv_res.empty()) {
                for (double re : conv_res) {
                    CommonOptions o = conv;
                    o.re = re;
                    o.validate();
                    rows.push_back(two_level ? run_two_level(o, conv_nh, 2 * conv_nh, ForceKind::Manufactured,
                                                             ClampedHomogeneous{}, true)
                                                   .record
                                             : run_one_level(o, conv_nh, conv_nh, ForceKind::Manufactured,
                                                             ClampedHomogeneous{}, true)
                                                   .record);
                }
            } else {
                if (conv_sizes.empty()) conv_sizes = two_level ? std::vector<int>{4, 7, 8} : std::vector<int>{8, 14, 16};
                for (int n : conv_sizes) {
                    if (n < 1) throw InvalidArgument("--sizes entries must be >= 1");
                    rows.push_back(two_level ? run_two_level(conv, n, 2 * n, ForceKind::Manufactured,
                                                             ClampedHomogeneous{}, true)
                                                   .record
                                             : run_one_level(conv, n, n, ForceKind::Manufactured,
                                                             ClampedHomogeneous{}, true)
                                                   .record);
                }
            }
            std::ostringstream table;
            table << "method,re,coarse_h,fine_h,newton_iters,bicgstab_iters_coarse,bicgstab_iters_fine,"
                     "free_dofs_coarse,free_dofs_fine,l2,h1,h2,converged,wall_seconds\n";
            for (const auto& r : rows) table << table_row(r);
            write_text(dir / "table.csv", table.str());

            std::ostringstream rates;
            rates << "h_from,h_to,rate_l2,rate_h1,rate_h2\n";
            if (conv_res.empty()) {
                for (std::size_t i = 1; i < rows.size(); ++i) {
                    const auto& a = rows[i - 1];
                    const auto& b = rows[i];
                    if (!a.errors || !b.errors) continue;
                    const double ha = a.fine ? a.fine->h : a.coarse.h;
                    const double hb = b.fine ? b.fine->h : b.coarse.h;
                    rates << fmt_double(ha) << ',' << fmt_double(hb) << ','
                          << fmt_double(rate(a.errors->l2, b.errors->l2, ha, hb)) << ','
                          << fmt_double(rate(a.errors->h1, b.errors->h1, ha, hb)) << ','
                          << fmt_double(rate(a.errors->h2, b.errors->h2, ha, hb)) << '\n';
                }
            }
            write_text(dir / "rates.csv", rates.str());
            std::cout << table.str();
            bool ok = true;
            for (const auto& r : rows) ok = ok && r.converged;
            return ok ? kExitOk : kExitSolverFailure;
        }
        if (c_scale->parsed()) {
            return print_scaling(scaling_h, scaling_element);
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    }
    return kExitUsage;
}

}  // namespace sfns::cli
