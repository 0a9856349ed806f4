// paultrap: batch CLI for Paul-trap dynamics, stability scans, continuous
// position-measurement densities, and nondemolition-variable checks.
// Subcommands: simulate, stability, measure, qnd, env-report.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paultrap/errors.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/model.hpp"
#include "paultrap/qnd.hpp"
#include "paultrap/rpif.hpp"
#include "paultrap/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace paultrap;

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("PAULTRAP_LOG");
    if (!env) return LogLevel::info;
    const std::string v(env);
    if (v == "quiet") return LogLevel::quiet;
    if (v == "debug") return LogLevel::debug;
    return LogLevel::info;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << "[paultrap] " << msg << "\n";
}

/// Fixed 17-significant-digit formatting for byte-identical reruns.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hash(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct RunConfig {
    json doc;
    std::string config_hash;
    fs::path out_dir;
    double tol = 1e-10;
    int jobs = 1;
    bool diagnostics = false;
    model::PhysicalConstants consts = model::PhysicalConstants::scaled();
    std::string units = "scaled";
};

RunConfig load_config(const std::string& config_path, const std::string& out_dir,
                      double tol, int jobs, const std::string& units,
                      bool diagnostics) {
    RunConfig cfg;
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw ValidationError("config file not readable: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string raw = ss.str();
    cfg.config_hash = fnv1a_hash(raw);
    try {
        cfg.doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    cfg.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (!fs::is_directory(cfg.out_dir))
        throw ValidationError("output directory not writable: " + out_dir);
    if (!(tol > 0.0) || tol > 1e-3)
        throw ValidationError("key 'tol': must be in (0, 1e-3]");
    cfg.tol = tol;
    cfg.jobs = std::max(1, jobs);
    cfg.diagnostics = diagnostics;
    cfg.units = units;
    if (units == "si") {
        cfg.consts = model::PhysicalConstants::si();
    } else if (units == "scaled") {
        cfg.consts = model::PhysicalConstants::scaled();
    } else {
        throw ValidationError("key 'units': must be 'si' or 'scaled'");
    }
    return cfg;
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key))
        throw ValidationError("config: missing key '" + key + "'");
    if (!j[key].is_number())
        throw ValidationError("config: key '" + key + "' must be a number");
    return j[key].get<double>();
}

const json& require_object(const json& j, const std::string& key) {
    if (!j.contains(key))
        throw ValidationError("config: missing key '" + key + "'");
    if (!j[key].is_object())
        throw ValidationError("config: key '" + key + "' must be an object");
    return j[key];
}

model::EffectiveCoefficients read_coefficients(const RunConfig& cfg) {
    if (cfg.doc.contains("trap")) {
        const model::TrapInput in = model::parse_trap_input(cfg.doc["trap"].dump());
        return model::derive_coefficients(in, cfg.consts);
    }
    const json& c = require_object(cfg.doc, "coefficients");
    model::EffectiveCoefficients out;
    out.U = require_number(c, "U");
    out.V = require_number(c, "V");
    out.g = require_number(c, "g");
    out.omega = require_number(c, "omega");
    out.mass = c.contains("mass") ? require_number(c, "mass") : 1.0;
    if (!(out.mass > 0.0))
        throw ValidationError("config: key 'mass' must be positive");
    return out;
}

json provenance(const RunConfig& cfg) {
    return json{{"config_hash", cfg.config_hash},
                {"tol", cfg.tol},
                {"units", cfg.units}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

void write_json(const fs::path& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

std::string csv_header(const RunConfig& cfg) {
    return "# config_hash=" + cfg.config_hash + " tol=" + fmt(cfg.tol) +
           " units=" + cfg.units + "\n";
}

void write_gnuplot_stub(const fs::path& path, const std::string& csv,
                        const std::string& title, const std::string& using_spec) {
    std::ostringstream os;
    os << "# gnuplot stub; run: gnuplot " << path.filename().string() << "\n"
       << "set datafile commentschars '#'\n"
       << "set title '" << title << "'\n"
       << "plot '" << csv << "' using " << using_spec << " with lines\n"
       << "pause -1\n";
    write_text(path, os.str());
}

rpif::MeasurementRecord read_record(const json& r) {
    rpif::MeasurementRecord rec;
    rec.t_start = require_number(r, "t_start");
    rec.t_end = require_number(r, "t_end");
    if (!r.contains("delta_a"))
        throw ValidationError("config: missing key 'delta_a' (number or \"unmonitored\")");
    if (r["delta_a"].is_string()) {
        if (r["delta_a"].get<std::string>() != "unmonitored")
            throw ValidationError("config: key 'delta_a' string value must be 'unmonitored'");
    } else if (r["delta_a"].is_number()) {
        rec.delta_a = r["delta_a"].get<double>();
        if (!r.contains("samples") || !r["samples"].is_array())
            throw ValidationError("config: key 'samples' must be an array for a monitored record");
        for (const auto& s : r["samples"]) {
            if (!s.is_number())
                throw ValidationError("config: key 'samples' entries must be numbers");
            rec.samples.push_back(s.get<double>());
        }
    } else {
        throw ValidationError("config: key 'delta_a' must be a number or 'unmonitored'");
    }
    try {
        rec.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("config: record: ") + e.what());
    }
    return rec;
}

// ---------------------------------------------------------------- simulate

int run_simulate(const RunConfig& cfg) {
    const auto coeffs = read_coefficients(cfg);
    const double t0 = require_number(cfg.doc, "t_start");
    const double t1 = require_number(cfg.doc, "t_end");
    if (!(t1 > t0)) throw ValidationError("config: key 't_end' must exceed 't_start'");
    const double x0 = require_number(cfg.doc, "x0");
    const double v0 = require_number(cfg.doc, "v0");
    const int samples = cfg.doc.contains("samples")
                            ? int(require_number(cfg.doc, "samples"))
                            : 1000;
    if (samples < 2) throw ValidationError("config: key 'samples' must be >= 2");

    const mathieu::CoefficientFunction coeff{coeffs.U, coeffs.V, coeffs.omega, 0.0};
    auto basis = std::make_shared<mathieu::FundamentalBasis>(
        mathieu::fundamental_basis(coeff, t0, t1, cfg.tol));
    const auto traj = trajectory::forced_solution_green(basis, x0, v0, coeffs.g);

    std::ostringstream csv;
    csv << csv_header(cfg) << "t,x,xdot";
    if (cfg.diagnostics) csv << ",residual";
    csv << "\n";
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * double(i) / double(samples - 1);
        csv << fmt(t) << "," << fmt(traj.eval(t).real()) << ","
            << fmt(traj.eval_slope(t).real());
        if (cfg.diagnostics) {
            const double r = std::abs(traj.eval_accel(t) + coeff.at(t) * traj.eval(t) +
                                      coeffs.g);
            csv << "," << fmt(r);
        }
        csv << "\n";
    }
    write_text(cfg.out_dir / "trajectory.csv", csv.str());
    write_gnuplot_stub(cfg.out_dir / "trajectory.gp", "trajectory.csv",
                       "Paul trap trajectory", "1:2");
    log_info("wrote trajectory.csv (" + std::to_string(samples) + " rows)");
    return 0;
}

// ---------------------------------------------------------------- stability

int run_stability(const RunConfig& cfg) {
    const double a_min = require_number(cfg.doc, "a_min");
    const double a_max = require_number(cfg.doc, "a_max");
    const int a_count = int(require_number(cfg.doc, "a_count"));
    const double q_min = require_number(cfg.doc, "q_min");
    const double q_max = require_number(cfg.doc, "q_max");
    const int q_count = int(require_number(cfg.doc, "q_count"));
    const double omega =
        cfg.doc.contains("omega") ? require_number(cfg.doc, "omega") : 2.0;
    if (a_count < 1 || q_count < 1)
        throw ValidationError("config: keys 'a_count'/'q_count' must be >= 1");
    if (!(omega > 0.0)) throw ValidationError("config: key 'omega' must be positive");

    const std::size_t total = std::size_t(a_count) * std::size_t(q_count);
    std::vector<std::string> rows(total);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total || failed.load()) return;
            const std::size_t ia = idx / q_count;
            const std::size_t iq = idx % q_count;
            const double a = a_count == 1 ? a_min
                                          : a_min + (a_max - a_min) * double(ia) /
                                                        double(a_count - 1);
            const double q = q_count == 1 ? q_min
                                          : q_min + (q_max - q_min) * double(iq) /
                                                        double(q_count - 1);
            try {
                const mathieu::CoefficientFunction coeff{
                    a * omega * omega / 4.0, q * omega * omega / 2.0, omega, 0.0};
                const auto v = mathieu::stability(coeff, cfg.tol);
                rows[idx] = fmt(a) + "," + fmt(q) + "," +
                            fmt(std::abs(v.multiplier1)) + "," +
                            fmt(std::abs(v.multiplier2)) + "," +
                            mathieu::to_string(v.classification) + "\n";
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure = e.what();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < cfg.jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw NumericalError("stability scan failed: " + failure);

    std::ostringstream csv;
    csv << csv_header(cfg) << "a,q,mu1_abs,mu2_abs,classification\n";
    for (const std::string& row : rows) csv << row;
    write_text(cfg.out_dir / "stability.csv", csv.str());
    write_gnuplot_stub(cfg.out_dir / "stability.gp", "stability.csv",
                       "Floquet stability scan", "1:2");
    log_info("wrote stability.csv (" + std::to_string(total) + " rows)");
    return 0;
}

// ---------------------------------------------------------------- measure

json density_to_json(const rpif::ProbabilityValue& p) {
    return json{{"density", p.density},
                {"log_density", p.log_density},
                {"factors",
                 {{"log_norm", p.log_norm},
                  {"log_record", p.log_record},
                  {"log_action", p.log_action},
                  {"log_endpoint", p.log_endpoint},
                  {"log_integral", p.log_integral}}},
                {"mean_record_approximation", p.mean_record_approximation}};
}

int run_measure(const RunConfig& cfg) {
    const auto coeffs = read_coefficients(cfg);
    const json& ep = require_object(cfg.doc, "endpoints");
    const double xp = require_number(ep, "x_start");
    const double xpp = require_number(ep, "x_end");

    if (cfg.doc.contains("records")) {
        if (!cfg.doc["records"].is_array())
            throw ValidationError("config: key 'records' must be an array");
        std::vector<rpif::MeasurementRecord> records;
        for (const auto& r : cfg.doc["records"]) records.push_back(read_record(r));
        const auto sweep =
            rpif::record_sweep(coeffs, cfg.consts, records, xp, xpp, cfg.tol);
        std::ostringstream csv;
        csv << csv_header(cfg) << "index,mean_a,delta_a,density,log_density\n";
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            csv << i << "," << fmt(records[i].mean()) << ","
                << (records[i].monitored() ? fmt(*records[i].delta_a) : "inf") << ","
                << fmt(sweep[i].density) << "," << fmt(sweep[i].log_density) << "\n";
        }
        write_text(cfg.out_dir / "measure_sweep.csv", csv.str());
        write_gnuplot_stub(cfg.out_dir / "measure_sweep.gp", "measure_sweep.csv",
                           "record sweep", "2:5");
        log_info("wrote measure_sweep.csv (" + std::to_string(sweep.size()) + " rows)");
        return 0;
    }

    if (!cfg.doc.contains("record"))
        throw ValidationError("config: missing key 'record' (or 'records')");
    const auto rec = read_record(cfg.doc["record"]);
    const auto p = rpif::probability_density(coeffs, cfg.consts, rec, xp, xpp, cfg.tol);
    json out = density_to_json(p);
    out["provenance"] = provenance(cfg);
    write_json(cfg.out_dir / "measure.json", out);
    log_info("wrote measure.json");
    return 0;
}

// ---------------------------------------------------------------- qnd

int run_qnd(const RunConfig& cfg) {
    const auto coeffs = read_coefficients(cfg);
    const double t0 = require_number(cfg.doc, "t_start");
    const double t1 = require_number(cfg.doc, "t_end");
    if (!(t1 > t0)) throw ValidationError("config: key 't_end' must exceed 't_start'");
    const double x0 = require_number(cfg.doc, "x0");
    const double v0 = require_number(cfg.doc, "v0");

    const mathieu::CoefficientFunction coeff{coeffs.U, coeffs.V, coeffs.omega, 0.0};
    auto X = std::make_shared<SolutionGrid>(
        mathieu::integrate(coeff, t0, t1, x0, v0, cfg.tol));
    const auto ratio = qnd::canonical_ratio(X, coeffs.mass);
    const double residual_max = qnd::qnd_residual(ratio, coeffs);

    const int samples = 1000;
    std::ostringstream csv;
    csv << csv_header(cfg) << "t,ratio\n";
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * double(i) / double(samples - 1);
        csv << fmt(t) << "," << fmt(ratio.at(t)) << "\n";
    }
    const fs::path csv_path = cfg.out_dir / "ratio.csv";
    write_text(csv_path, csv.str());

    json out{{"residual_max", residual_max},
             {"pole_times", ratio.pole_times},
             {"ratio_csv_path", csv_path.string()},
             {"provenance", provenance(cfg)}};
    write_json(cfg.out_dir / "qnd.json", out);
    log_info("wrote qnd.json, ratio.csv");
    return 0;
}

// ---------------------------------------------------------------- env-report

int run_env_report(const RunConfig& cfg) {
    if (!cfg.doc.contains("trap"))
        throw ValidationError("config: missing key 'trap'");
    const model::TrapInput in = model::parse_trap_input(cfg.doc["trap"].dump());
    const double excursion = require_number(cfg.doc, "excursion");
    const double m_nb = require_number(cfg.doc, "neighbor_mass");
    const double d = require_number(cfg.doc, "neighbor_distance");
    const auto rep = model::environment_report(in, cfg.consts, excursion, m_nb, d);

    json out{{"third_order_term", rep.third_order_term},
             {"neighbor_potential", rep.neighbor_potential},
             {"ratio", rep.ratio},
             {"note",
              "order-of-magnitude comparison of per-unit-mass potentials; "
              "no claim about which dominates"},
             {"provenance", provenance(cfg)}};
    write_json(cfg.out_dir / "env_report.json", out);
    log_info("wrote env_report.json");
    return 0;
}

void emit_error(const std::string& kind, const std::string& message) {
    const json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Paul trap dynamics, stability, measurement and QND toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, units = "scaled";
    double tol = 1e-10;
    int jobs = 1;
    bool diagnostics = false;

    for (const auto& name :
         {"simulate", "stability", "measure", "qnd", "env-report"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config path")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--jobs", jobs, "worker count for sweeps");
        sub->add_option("--tol", tol, "integration tolerance");
        sub->add_option("--units", units, "si or scaled");
        if (std::string(name) == "simulate")
            sub->add_flag("--diagnostics", diagnostics, "add residual column");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error("validation", e.what());
        return 2;
    }

    try {
        const RunConfig cfg =
            load_config(config_path, out_dir, tol, jobs, units, diagnostics);
        const std::string mode = app.get_subcommands().front()->get_name();
        log_info("mode=" + mode + " config_hash=" + cfg.config_hash);
        if (mode == "simulate") return run_simulate(cfg);
        if (mode == "stability") return run_stability(cfg);
        if (mode == "measure") return run_measure(cfg);
        if (mode == "qnd") return run_qnd(cfg);
        if (mode == "env-report") return run_env_report(cfg);
        emit_error("validation", "unknown mode " + mode);
        return 2;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return 2;
    } catch (const IntegrationError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const DegenerateBvpError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const ZeroCrossingError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const NumericalError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 3;
    }
}
