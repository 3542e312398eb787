#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anisodg/precond.hpp"

namespace anisodg {

inline constexpr const char* kLibraryVersion = "anisodg 0.1.0";

struct MeshConfig {
    /// Defaults to the case's own mesh family.
    std::optional<std::string> family;
    int n_r = 8;
    int n_theta = 32;
    int n_x = 8;
    int n_y = 8;
    double jitter = 0.15;
    std::uint64_t seed = 1;
    std::optional<double> r_in, r_out, x0, x1, y0, y1;
    /// Refinement levels: annulus N_r = level, N_theta = theta_per_r * level;
    /// rectangle N_x = x_per_level * level, N_y = y_per_level * level.
    int theta_per_r = 4;
    int x_per_level = 1;
    int y_per_level = 1;
};

struct RunConfig {
    std::string command = "solve";
    std::string case_name;
    double d_perp = 1.0;
    double omega = 1.0;
    MeshConfig mesh;
    std::vector<int> ks{1};
    std::vector<double> d_pars{1.0};
    /// Empty: a single run with the explicit mesh counts.
    std::vector<int> levels;
    std::string scheme = "ipdg";
    double beta = 1.0;
    std::string penalty = "alpha1";
    /// direct | cg | gmres | fgmres
    std::string solver = "direct";
    /// none | bdg-exact | bdg-inexact
    std::string preconditioner = "none";
    double tol = 1e-6;
    int max_iterations = 5000;
    int restart = 200;
    /// 1-norm condition estimate of the system matrix.
    bool condest = false;
    /// Lanczos 2-norm condition number of the preconditioned operator.
    bool kappa2 = false;
    /// Also run the unpreconditioned Krylov solve.
    bool baseline = false;
    int lanczos_max_iterations = 300;
    PrecondOptions precond;
    std::string output;
    std::uint64_t seed = 12345;

    /// The JSON the config was parsed from (after overrides).
    nlohmann::json source;

    static RunConfig from_json(const nlohmann::json& j);
    void validate() const;
};

/// Applies `key=value` overrides (dotted keys, JSON or bare-string values).
nlohmann::json apply_overrides(nlohmann::json j, const std::vector<std::string>& overrides);
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

struct StudyRow {
    std::string case_name;
    std::string family;
    int n_r = 0, n_theta = 0, n_x = 0, n_y = 0;
    int level = 0;
    int k = 1;
    double d_par = 1.0;
    std::string scheme;
    std::string penalty;
    double beta = 1.0;
    std::string solver;
    std::string preconditioner;
    int dofs = 0;
    double h = 0.0;
    std::optional<double> l2_error;
    std::optional<double> order;
    std::optional<int> iterations;
    std::optional<bool> converged;
    std::optional<double> final_residual;
    std::optional<int> baseline_iterations;
    std::optional<bool> baseline_converged;
    std::optional<double> cond1;
    std::optional<double> cond2;
    std::optional<long> inner_iterations;
    std::optional<std::string> error;
    /// JSON only.
    double seconds = 0.0;
    std::vector<double> residuals;
    std::vector<double> baseline_residuals;

    friend bool operator==(const StudyRow&, const StudyRow&) = default;
};

struct StudyReport {
    std::string command;
    std::string version = kLibraryVersion;
    nlohmann::json config;
    std::vector<StudyRow> rows;

    friend bool operator==(const StudyReport&, const StudyReport&) = default;
};

StudyReport run_solve(const RunConfig& config);
StudyReport run_convergence(const RunConfig& config);
StudyReport run_cond_study(const RunConfig& config);
StudyReport run_precond_study(const RunConfig& config);
/// Dispatches on solve | convergence | cond | precond.
StudyReport run_command(const std::string& command, const RunConfig& config);

/// Column order of report.csv.
const std::vector<std::string>& csv_columns();
std::string report_csv(const StudyReport& report);
nlohmann::json report_to_json(const StudyReport& report);
StudyReport report_from_json(const nlohmann::json& j);
/// report.csv, report.json, config.echo.json.
void write_outputs(const StudyReport& report, const std::filesystem::path& dir);

} // namespace anisodg
