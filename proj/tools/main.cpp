// epsol command-line front end. Talks to the solver exclusively through the
// C API in epsol/epsol.h; owns file output (atomic temp+rename writes) and
// exit codes: 0 ok, 1 verification failure, 2 invalid parameters or config,
// 3 numerical failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epsol/epsol.h"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(epsol_status status) {
    switch (status) {
        case EPSOL_OK:
            return 0;
        case EPSOL_ERR_INVALID_ARGUMENT:
        case EPSOL_ERR_DOMAIN:
        case EPSOL_ERR_INADMISSIBLE:
            return kExitBadConfig;
        default:
            return kExitNumerical;
    }
}

[[noreturn]] void die(epsol_status status) {
    std::fprintf(stderr, "epsol: %s: %s\n", epsol_status_name(status), epsol_last_error());
    std::exit(exit_code_for(status));
}

void check(epsol_status status) {
    if (status != EPSOL_OK) die(status);
}

struct ParamsHandle {
    epsol_params* p = nullptr;
    ~ParamsHandle() { epsol_params_free(p); }
};

struct ProfileHandle {
    epsol_profile* p = nullptr;
    ~ProfileHandle() { epsol_profile_free(p); }
};

struct RemaindersHandle {
    epsol_remainders* p = nullptr;
    ~RemaindersHandle() { epsol_remainders_free(p); }
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

// Write-to-temp then rename, so a failed run never leaves a partial file.
void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f) {
            std::fprintf(stderr, "epsol: cannot open %s for writing\n", tmp.c_str());
            std::exit(kExitBadConfig);
        }
        const size_t written = std::fwrite(contents.data(), 1, contents.size(), f);
        const int rc = std::fclose(f);
        if (written != contents.size() || rc != 0) {
            std::fprintf(stderr, "epsol: short write to %s\n", tmp.c_str());
            fs::remove(tmp);
            std::exit(kExitNumerical);
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::fprintf(stderr, "epsol: cannot rename %s to %s: %s\n", tmp.c_str(),
                     target.c_str(), ec.message().c_str());
        fs::remove(tmp);
        std::exit(kExitBadConfig);
    }
}

struct CommonFlags {
    double sigma = 0.0;
    double gamma = 1.0;
    std::vector<double> epsilons;
    double dxi = 1e-3;
    double xi_max = 60.0;
    double tail_cut = 1e-12;
    double alpha = -1.0;  // negative: default sqrt(2 V gamma)/2
    bool alpha_given = false;
    std::string out_path;
    std::string format;
};

void add_solver_flags(CLI::App* cmd, CommonFlags& flags, bool wants_epsilon) {
    cmd->add_option("--sigma", flags.sigma, "temperature ratio sigma >= 0");
    cmd->add_option("--gamma", flags.gamma, "wave speed gamma > 0");
    if (wants_epsilon)
        cmd->add_option("--epsilon", flags.epsilons,
                        "amplitude parameter (repeat for a sweep ladder)");
    cmd->add_option("--dxi", flags.dxi, "RK4 step (default 1e-3)");
    cmd->add_option("--xi-max", flags.xi_max, "march horizon (default 60)");
    cmd->add_option("--tail-cut", flags.tail_cut, "tail stop on n-1 (default 1e-12)");
    cmd->add_option("--alpha", flags.alpha,
                    "weight rate for remainders (default sqrt(2*V*gamma)/2)");
}

epsol_solve_options solve_options_from(const CommonFlags& flags) {
    epsol_solve_options options;
    epsol_solve_options_init(&options);
    options.dxi = flags.dxi;
    options.xi_max = flags.xi_max;
    options.tail_cut = flags.tail_cut;
    return options;
}

void require_positive_alpha(const CommonFlags& flags) {
    if (flags.alpha_given && !(flags.alpha > 0.0)) {
        std::fprintf(stderr, "epsol: --alpha must be > 0\n");
        std::exit(kExitBadConfig);
    }
}

int run_solve(const CommonFlags& flags) {
    require_positive_alpha(flags);
    if (flags.epsilons.size() != 1) {
        std::fprintf(stderr, "epsol: solve needs exactly one --epsilon\n");
        return kExitBadConfig;
    }
    if (!flags.format.empty() && flags.format != "csv") {
        std::fprintf(stderr, "epsol: solve emits csv\n");
        return kExitBadConfig;
    }
    if (flags.out_path.empty()) {
        std::fprintf(stderr, "epsol: solve needs --out\n");
        return kExitBadConfig;
    }
    ParamsHandle params;
    check(epsol_params_create(flags.sigma, flags.gamma, flags.epsilons[0], &params.p));
    const epsol_solve_options options = solve_options_from(flags);
    ProfileHandle half, full;
    check(epsol_solve_half(params.p, &options, &half.p));
    check(epsol_profile_mirror(half.p, &full.p));
    RemaindersHandle rem;
    check(epsol_remainders_compute(full.p, flags.alpha, &rem.p));

    const size_t count = epsol_profile_size(full.p);
    const double* xi = epsol_profile_xi(full.p);
    const double* excess = epsol_profile_n_excess(full.p);
    const double* u = epsol_profile_u(full.p);
    const double* phi = epsol_profile_phi(full.p);
    const double* efield = epsol_profile_efield(full.p);
    const double* nk = epsol_remainders_kdv(rem.p);
    const double* nr = epsol_remainders_n(rem.p);
    const double* ur = epsol_remainders_u(rem.p);
    const double* pr = epsol_remainders_phi(rem.p);

    std::string csv;
    csv.reserve(count * 160 + 64);
    csv += "xi,n,u,phi,E,n_kdv,n_R,u_R,phi_R\n";
    for (size_t i = 0; i < count; ++i) {
        csv += fmt17(xi[i]);
        csv += ',';
        csv += fmt17(1.0 + excess[i]);
        csv += ',';
        csv += fmt17(u[i]);
        csv += ',';
        csv += fmt17(phi[i]);
        csv += ',';
        csv += fmt17(efield[i]);
        csv += ',';
        csv += fmt17(nk[i]);
        csv += ',';
        csv += fmt17(nr[i]);
        csv += ',';
        csv += fmt17(ur[i]);
        csv += ',';
        csv += fmt17(pr[i]);
        csv += '\n';
    }
    write_file_atomic(flags.out_path, csv);
    return 0;
}

int run_sweep(const CommonFlags& flags) {
    require_positive_alpha(flags);
    if (flags.epsilons.size() < 3) {
        std::fprintf(stderr, "epsol: need >= 3 epsilons\n");
        return kExitBadConfig;
    }
    if (!flags.format.empty() && flags.format != "json") {
        std::fprintf(stderr, "epsol: sweep emits json\n");
        return kExitBadConfig;
    }
    if (flags.out_path.empty()) {
        std::fprintf(stderr, "epsol: sweep needs --out\n");
        return kExitBadConfig;
    }
    const epsol_solve_options options = solve_options_from(flags);
    epsol_report* report = nullptr;
    check(epsol_sweep(flags.sigma, flags.gamma, flags.epsilons.data(),
                      flags.epsilons.size(), &options, flags.alpha, 2, &report));
    char* json = nullptr;
    const epsol_status status = epsol_report_json(report, &json);
    if (status != EPSOL_OK) {
        epsol_report_free(report);
        die(status);
    }
    std::string text(json);
    text += '\n';
    epsol_string_free(json);
    epsol_report_free(report);
    write_file_atomic(flags.out_path, text);
    return 0;
}

int run_roots(const CommonFlags& flags) {
    if (flags.epsilons.size() != 1) {
        std::fprintf(stderr, "epsol: roots needs exactly one --epsilon\n");
        return kExitBadConfig;
    }
    ParamsHandle params;
    check(epsol_params_create(flags.sigma, flags.gamma, flags.epsilons[0], &params.p));
    epsol_admissibility adm;
    check(epsol_check_admissible(params.p, &adm));
    if (!adm.admissible) {
        // Reuse the solver's message with the violated bound.
        epsol_critical_densities unused;
        const epsol_status status = epsol_critical_densities_solve(params.p, &unused);
        std::printf("admissible=false\n");
        die(status == EPSOL_OK ? EPSOL_ERR_INADMISSIBLE : status);
    }
    epsol_critical_densities roots;
    check(epsol_critical_densities_solve(params.p, &roots));
    double lambda = 0.0;
    check(epsol_saddle_rate(params.p, &lambda));
    std::printf("admissible=true\n");
    std::printf("V=%s\n", fmt17(epsol_params_sound_speed(params.p)).c_str());
    std::printf("J=%s\n", fmt17(epsol_params_frame_speed(params.p)).c_str());
    std::printf("zeta=%s\n", fmt17(roots.zeta).c_str());
    std::printf("n_c=%s\n", fmt17(roots.n_c).c_str());
    std::printf("n_ce=%s\n", fmt17(roots.n_ce).c_str());
    std::printf("n_star=%s\n", fmt17(roots.n_star).c_str());
    if (roots.has_sonic) std::printf("n_s=%s\n", fmt17(roots.n_s).c_str());
    std::printf("lambda=%s\n", fmt17(lambda).c_str());
    return 0;
}

int run_kdv_check(const CommonFlags& flags, bool finite_differences) {
    const double sound_speed = std::sqrt(1.0 + flags.sigma);
    double residual = 0.0;
    check(epsol_kdv_residual_max(flags.gamma, sound_speed, -10.0, 10.0,
                                 std::min(flags.dxi, 1e-2), finite_differences,
                                 &residual));
    std::printf("gamma=%s\n", fmt17(flags.gamma).c_str());
    std::printf("V=%s\n", fmt17(sound_speed).c_str());
    std::printf("derivatives=%s\n", finite_differences ? "finite-difference" : "analytic");
    std::printf("max_residual=%s\n", fmt17(residual).c_str());
    return 0;
}

int run_verify(const CommonFlags& flags, bool defaults_only) {
    epsol_solve_options options = solve_options_from(flags);
    epsol_verify_result* result = nullptr;
    check(epsol_verify_run(defaults_only ? nullptr : &options, &result));
    const size_t count = epsol_verify_count(result);
    for (size_t i = 0; i < count; ++i) std::printf("%s\n", epsol_verify_line(result, i));
    const bool all = epsol_verify_all_passed(result) != 0;
    std::printf("%s\n", all ? "verify: all criteria passed" : "verify: FAILURES present");
    epsol_verify_result_free(result);
    return all ? 0 : kExitVerifyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"solitary-wave solver and verification toolkit for the "
                 "Euler-Poisson system in the stretched traveling frame"};
    app.require_subcommand(1);

    CommonFlags flags;
    bool kdv_fd = false;

    CLI::App* solve = app.add_subcommand(
        "solve", "integrate one solitary wave and write the profile CSV");
    add_solver_flags(solve, flags, true);
    solve->add_option("--out", flags.out_path, "output file");
    solve->add_option("--format", flags.format, "csv");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "run a decreasing-epsilon convergence campaign, write JSON report");
    add_solver_flags(sweep, flags, true);
    sweep->add_option("--out", flags.out_path, "output file");
    sweep->add_option("--format", flags.format, "json");

    CLI::App* roots = app.add_subcommand(
        "roots", "print critical constants and densities for one parameter set");
    add_solver_flags(roots, flags, true);

    CLI::App* kdv = app.add_subcommand(
        "kdv-check", "evaluate the traveling KdV identity residual");
    add_solver_flags(kdv, flags, false);
    kdv->add_flag("--fd", kdv_fd, "use finite-difference derivatives");

    CLI::App* verify = app.add_subcommand(
        "verify", "run the full acceptance suite, one PASS/FAIL line per criterion");
    add_solver_flags(verify, flags, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadConfig;
    }

    if (solve->parsed()) {
        flags.alpha_given = solve->count("--alpha") > 0;
        return run_solve(flags);
    }
    if (sweep->parsed()) {
        flags.alpha_given = sweep->count("--alpha") > 0;
        return run_sweep(flags);
    }
    if (roots->parsed()) return run_roots(flags);
    if (kdv->parsed()) return run_kdv_check(flags, kdv_fd);
    if (verify->parsed()) {
        // Overrides apply only when given; default run uses library defaults.
        const bool defaults_only = verify->count("--dxi") == 0 &&
                                   verify->count("--xi-max") == 0 &&
                                   verify->count("--tail-cut") == 0;
        return run_verify(flags, defaults_only);
    }
    return kExitBadConfig;
}
