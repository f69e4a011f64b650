#include "floq/sweep.hpp"

#include "floq/expansions.hpp"
#include "floq/markovianity.hpp"
#include "floq/propagator.hpp"
#include "floq/rotating_frame.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace floq {

namespace {

const double nan_v = std::numeric_limits<double>::quiet_NaN();

struct pipeline_entry {
    pipeline p;
    const char* name;
    int max_order;
};

const pipeline_entry pipelines[] = {
    {pipeline::exact, "exact", 1},
    {pipeline::magnus_direct, "magnus-direct", 3},
    {pipeline::magnus_rot, "magnus-rot", 2},
    {pipeline::vanvleck_rot, "vanvleck-rot", 3},
    {pipeline::keff_rot, "keff-rot", 3},
};

const pipeline_entry& entry(pipeline p)
{
    for (const auto& e : pipelines)
        if (e.p == p) return e;
    throw std::logic_error("unknown pipeline");
}

sweep_record nan_record(double e, double omega)
{
    sweep_record r;
    r.e = e;
    r.omega = omega;
    r.mu_min = nan_v;
    r.frobenius_to_exact = nan_v;
    return r;
}

cmat approximate_generator(const sweep_config& cfg, const model_params& p)
{
    switch (cfg.pipe) {
    case pipeline::magnus_direct:
        return magnus_order(driven_qubit_series<double>(p.gamma, p.drive_e, p.phi), p.omega, cfg.order).generator;
    case pipeline::magnus_rot:
    case pipeline::vanvleck_rot:
    case pipeline::keff_rot: {
        const auto s = rotfr_components(p, rotating_n_max(p.z())).components;
        if (cfg.pipe == pipeline::magnus_rot) return magnus_order(s, p.omega, cfg.order, frame_tag::rotating).generator;
        if (cfg.pipe == pipeline::keff_rot) return vanvleck_keff(s, p.omega, cfg.order, frame_tag::rotating).generator;
        return vanvleck_floquet_generator(s, p.omega, cfg.order, 0.0, frame_tag::rotating).generator;
    }
    case pipeline::exact: break;
    }
    throw std::logic_error("approximate_generator called for the exact pipeline");
}

std::string fmt_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

pipeline parse_pipeline(const std::string& name)
{
    for (const auto& e : pipelines)
        if (name == e.name) return e.p;
    throw usage_error("unknown pipeline '" + name + "'");
}

std::string pipeline_name(pipeline p) { return entry(p).name; }

void sweep_config::validate() const
{
    auto fail = [](const std::string& m) { throw usage_error(m); };
    if (e_count < 2 || omega_count < 2) fail("grid counts must be >= 2");
    if (!(gamma >= 0) || !std::isfinite(gamma)) fail("gamma must be nonnegative");
    if (!std::isfinite(phi)) fail("phi must be finite");
    if (!(e_min >= 0) || !(e_max >= e_min)) fail("need 0 <= e-min <= e-max");
    if (!(omega_min > 0) || !(omega_max >= omega_min)) fail("need 0 < omega-min <= omega-max");
    if (!(omega_floor >= 0)) fail("omega-floor must be nonnegative");
    if (x_range < 1) fail("x-range must be >= 1");
    if (steps_per_period < 100) fail("steps-per-period must be >= 100");
    if (workers < 1) fail("workers must be >= 1");
    const int top = entry(pipe).max_order;
    if (pipe != pipeline::exact && (order < 1 || order > top)) {
        std::ostringstream os;
        os << "pipeline " << pipeline_name(pipe) << " supports orders 1.." << top << ", got " << order;
        fail(os.str());
    }
}

double sweep_config::e_at(int j) const { return e_min + (e_max - e_min) * j / (e_count - 1); }
double sweep_config::omega_at(int i) const { return omega_min + (omega_max - omega_min) * i / (omega_count - 1); }

sweep_record evaluate_point(const sweep_config& cfg, double e, double omega, bool* failed)
{
    const auto start = std::chrono::steady_clock::now();
    if (failed) *failed = false;
    sweep_record r = nan_record(e, omega);
    if (omega < cfg.omega_floor) return r;

    try {
        model_params p{cfg.gamma, e, omega, cfg.phi};
        const cmat map = one_cycle_map(p, 0.0, cfg.steps_per_period);
        /// Time average of L(t): resolves resonant degeneracies and ties between branches.
        const cmat mean = driven_qubit_series<double>(p.gamma, p.drive_e, p.phi)[0];
        const markovianity_verdict exact = assess_map(map, p.period(), cfg.x_range, &mean);
        r.degenerate_flag = exact.degenerate_spectrum_flag;

        if (cfg.pipe == pipeline::exact) {
            if (!r.degenerate_flag) {
                r.mu_min = exact.mu_min;
                r.frobenius_to_exact = 0.0;
                r.best_branch = exact.best_branch.empty() ? 0 : exact.best_branch.front();
            }
        } else if (!r.degenerate_flag) {
            const cmat k = approximate_generator(cfg, p);
            const markovianity_verdict v = assess_generator(k);
            r.mu_min = v.mu_min;
            if (exact.generator.size() == k.size()) r.frobenius_to_exact = frobenius_distance(k, exact.generator);
        }
    } catch (const std::exception&) {
        if (failed) *failed = true;
        r = nan_record(e, omega);
    }
    r.has_lindbladian = !std::isnan(r.mu_min) && r.mu_min < tol_mu;
    r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::vector<sweep_record> run_sweep(const sweep_config& cfg, sweep_summary* summary)
{
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const int n = cfg.e_count * cfg.omega_count;
    std::vector<sweep_record> rows(static_cast<size_t>(n));
    std::vector<char> failed(static_cast<size_t>(n), 0);

    auto work = [&](int lo, int hi) {
        for (int idx = lo; idx < hi; ++idx) {
            bool f = false;
            rows[static_cast<size_t>(idx)] = evaluate_point(cfg, cfg.e_at(idx % cfg.e_count), cfg.omega_at(idx / cfg.e_count), &f);
            failed[static_cast<size_t>(idx)] = f;
        }
    };
    const int workers = std::min(cfg.workers, n);
    if (workers == 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
        for (auto& t : pool) t.join();
    }

    if (summary) {
        *summary = sweep_summary{};
        summary->points = rows.size();
        summary->non_lindbladian = count_non_lindbladian(rows);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (std::isnan(rows[i].mu_min)) ++summary->nan_points;
            if (rows[i].degenerate_flag) ++summary->degenerate;
            if (failed[i]) ++summary->failed;
        }
        summary->wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return rows;
}

const char* const csv_header = "e,omega,mu_min,has_lindbladian,frobenius_to_exact,best_branch,degenerate_flag,wall_time_ms";

void write_csv(std::ostream& os, const std::vector<sweep_record>& rows)
{
    os << csv_header << '\n';
    for (const auto& r : rows)
        os << fmt_double(r.e) << ',' << fmt_double(r.omega) << ',' << fmt_double(r.mu_min) << ','
           << (r.has_lindbladian ? 1 : 0) << ',' << fmt_double(r.frobenius_to_exact) << ',' << r.best_branch << ','
           << (r.degenerate_flag ? 1 : 0) << ',' << r.wall_time_ms << '\n';
}

std::vector<sweep_record> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw std::runtime_error("unexpected CSV header: " + line);
    std::vector<sweep_record> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 8) throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected 8 fields");
        auto num = [&](const std::string& s) {
            char* end = nullptr;
            const double v = std::strtod(s.c_str(), &end);
            if (end == s.c_str() || *end != '\0')
                throw std::runtime_error("CSV line " + std::to_string(lineno) + ": bad number '" + s + "'");
            return v;
        };
        sweep_record r;
        r.e = num(f[0]);
        r.omega = num(f[1]);
        r.mu_min = num(f[2]);
        r.has_lindbladian = num(f[3]) != 0;
        r.frobenius_to_exact = num(f[4]);
        r.best_branch = static_cast<int>(num(f[5]));
        r.degenerate_flag = num(f[6]) != 0;
        r.wall_time_ms = static_cast<long>(num(f[7]));
        rows.push_back(r);
    }
    return rows;
}

std::vector<sweep_record> read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

std::string metadata_json(const sweep_config& cfg, const sweep_summary& summary)
{
    nlohmann::ordered_json j;
    j["code_version"] = "0.1.0";
    j["config"] = {
        {"gamma", cfg.gamma},
        {"phi", cfg.phi},
        {"e_min", cfg.e_min},
        {"e_max", cfg.e_max},
        {"e_count", cfg.e_count},
        {"omega_min", cfg.omega_min},
        {"omega_max", cfg.omega_max},
        {"omega_count", cfg.omega_count},
        {"pipeline", pipeline_name(cfg.pipe)},
        {"order", cfg.order},
        {"x_range", cfg.x_range},
        {"omega_floor", cfg.omega_floor},
        {"workers", cfg.workers},
    };
    j["integrator"] = {{"scheme", "rk4-fixed-step"}, {"steps_per_period", cfg.steps_per_period}};
    j["tolerances"] = {{"tol_mu", tol_mu}, {"tol_psd", tol_psd}, {"tol_pair", tol_pair}, {"cond_max", cond_max}};
    j["summary"] = {
        {"points", summary.points},
        {"non_lindbladian", summary.non_lindbladian},
        {"nan_points", summary.nan_points},
        {"degenerate", summary.degenerate},
        {"failed", summary.failed},
        {"wall_seconds", summary.wall_seconds},
    };
    return j.dump(2) + "\n";
}

std::size_t count_non_lindbladian(const std::vector<sweep_record>& rows)
{
    std::size_t n = 0;
    for (const auto& r : rows)
        if (!std::isnan(r.mu_min) && !(r.mu_min < tol_mu)) ++n;
    return n;
}

phase_comparison compare_phases(const std::vector<sweep_record>& a, const std::vector<sweep_record>& b)
{
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << "grid mismatch: " << a.size() << " vs " << b.size() << " points";
        throw grid_mismatch(os.str());
    }
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].e != b[i].e || a[i].omega != b[i].omega) {
            std::ostringstream os;
            os << "grid mismatch at row " << i + 1 << ": (" << a[i].e << ", " << a[i].omega << ") vs (" << b[i].e
               << ", " << b[i].omega << ")";
            throw grid_mismatch(os.str());
        }
    phase_comparison c;
    c.points = a.size();
    c.count_a = count_non_lindbladian(a);
    c.count_b = count_non_lindbladian(b);
    c.difference = static_cast<long>(c.count_a) - static_cast<long>(c.count_b);
    return c;
}

phase_comparison compare_phases(const std::string& csv_a, const std::string& csv_b)
{
    return compare_phases(read_csv_file(csv_a), read_csv_file(csv_b));
}

}  // namespace floq
