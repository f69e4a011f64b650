#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace floq {

enum class pipeline { exact, magnus_direct, magnus_rot, vanvleck_rot, keff_rot };

pipeline parse_pipeline(const std::string& name);
std::string pipeline_name(pipeline p);

/// Bad configuration, detected before any computation.
struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct grid_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct sweep_config {
    double gamma = 0.01;
    double phi = 0.0;
    double e_min = 0.0, e_max = 2.0;
    int e_count = 20;
    double omega_min = 0.3, omega_max = 8.0;
    int omega_count = 20;
    pipeline pipe = pipeline::exact;
    int order = 1;
    int x_range = 5;
    int steps_per_period = 2000;
    /// Points with omega below this are emitted as NaN.
    double omega_floor = 0.3;
    std::string output_path;
    int workers = 1;

    void validate() const;
    double e_at(int j) const;
    double omega_at(int i) const;
};

struct sweep_record {
    double e = 0, omega = 0;
    double mu_min = 0;
    bool has_lindbladian = false;
    double frobenius_to_exact = 0;
    int best_branch = 0;
    bool degenerate_flag = false;
    long wall_time_ms = 0;
};

struct sweep_summary {
    std::size_t points = 0;
    std::size_t non_lindbladian = 0;
    std::size_t nan_points = 0;
    std::size_t degenerate = 0;
    std::size_t failed = 0;
    double wall_seconds = 0;
};

/// One grid point; never throws for numerical failures, which come back as NaN.
sweep_record evaluate_point(const sweep_config& cfg, double e, double omega, bool* failed = nullptr);

/// Row-major over omega then E, independent of the worker count.
std::vector<sweep_record> run_sweep(const sweep_config& cfg, sweep_summary* summary = nullptr);

extern const char* const csv_header;

void write_csv(std::ostream& os, const std::vector<sweep_record>& rows);
std::vector<sweep_record> read_csv(std::istream& is);
std::vector<sweep_record> read_csv_file(const std::string& path);

std::string metadata_json(const sweep_config& cfg, const sweep_summary& summary);

/// A point counts as non-Lindbladian when its mu_min is a number (possibly +inf) at or above tol_mu.
std::size_t count_non_lindbladian(const std::vector<sweep_record>& rows);

struct phase_comparison {
    std::size_t points = 0;
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    long difference = 0;  ///< count_a - count_b
};

phase_comparison compare_phases(const std::vector<sweep_record>& a, const std::vector<sweep_record>& b);
phase_comparison compare_phases(const std::string& csv_a, const std::string& csv_b);

}  // namespace floq
