// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "twrs/errors.hpp"

namespace twrs {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

cmat scaled_identity_precoder(const SystemConfig& cfg) {
    return std::sqrt(cfg.p_b / cfg.n_b) * cmat::Identity(cfg.n_b, cfg.n_u);
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::NoBsPrecoding: return "no-bs-precoding";
        case Method::Proposed: return "proposed";
        case Method::BoundOnly: return "bound-only";
    }
    throw std::invalid_argument("method_name: unknown method");
}

Method parse_method(const std::string& name) {
    if (name == "no-bs-precoding") return Method::NoBsPrecoding;
    if (name == "proposed") return Method::Proposed;
    if (name == "bound-only") return Method::BoundOnly;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected no-bs-precoding, proposed or bound-only)");
}

void ExperimentSpec::validate_spec() const {
    validate(config);
    validate(correlation);
    if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    if (sigma_values.empty()) {
        throw std::invalid_argument("ExperimentSpec: sigma_values must be nonempty");
    }
    double prev = 0.0;
    for (const double s : sigma_values) {
        if (s <= prev) {
            throw std::invalid_argument(
                "ExperimentSpec: sigma_values must be positive and ascending");
        }
        prev = s;
    }
    if (methods.empty()) throw std::invalid_argument("ExperimentSpec: methods must be nonempty");
}

std::uint64_t trial_seed(std::uint64_t master_seed, int sigma_index, int trial_index,
                         Method method) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(sigma_index),
                                     static_cast<std::uint64_t>(trial_index),
                                     static_cast<std::uint64_t>(method)});
}

TrialRecord run_trial(const ExperimentSpec& spec, double sigma, std::uint64_t seed,
                      Method method) {
    SystemConfig cfg = spec.config;
    cfg.sigma = sigma;
    validate(cfg);

    TrialRecord record;
    record.sigma = sigma;
    record.method = method;
    record.gamma_star = kNan;
    record.worst_rate = kNan;

    constexpr int kMaxAttempts = 32;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(attempt == 0 ? seed
                             : derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        const ChannelSet ch = draw_channels(rng, cfg, spec.correlation);
        try {
            switch (method) {
                case Method::BoundOnly: {
                    const auto eff = effective_matrices(ch, scaled_identity_precoder(cfg), cfg);
                    const auto bound = minimax_bound(build_rs_quadforms(eff, cfg));
                    record.gamma_hat = bound.gamma_hat;
                    record.worst_rate =
                        spec.rate_prelog * std::log2(1.0 + bound.gamma_hat);
                    break;
                }
                case Method::NoBsPrecoding:
                case Method::Proposed: {
                    cmat w = scaled_identity_precoder(cfg);
                    if (method == Method::Proposed) {
                        const BsSolveResult bs =
                            bs_iterate(ch, cfg, spec.bs_tol, spec.bs_max_iters);
                        w = bs.w;
                        record.bs_iters = bs.iters;
                        record.used_h0 = bs.used_h0;
                    }
                    const auto eff = effective_matrices(ch, w, cfg);
                    const RsSolveResult rs = bisection_solve(
                        build_rs_quadforms(eff, cfg), spec.lm, spec.bis_tol);
                    record.gamma_star = rs.gamma_star;
                    record.gamma_hat = rs.gamma_hat;
                    record.lm_iters_total = rs.lm_iters_total;
                    record.bisection_iters = rs.bisection_iters;
                    record.worst_rate = worst_user_rate(rs.per_stream_sinr, spec.rate_prelog);
                    break;
                }
            }
            return record;
        } catch (const SingularChannelError&) {
            std::fprintf(stderr, "twrs: redrawing singular channel (seed %llu, attempt %d)\n",
                         static_cast<unsigned long long>(seed), attempt + 1);
        } catch (const IllConditionedError&) {
            std::fprintf(stderr, "twrs: redrawing ill-conditioned trial (seed %llu, attempt %d)\n",
                         static_cast<unsigned long long>(seed), attempt + 1);
        }
    }
    throw std::runtime_error("run_trial: exceeded channel redraw attempts");
}

std::vector<TrialRecord> run_sweep(const ExperimentSpec& spec) {
    spec.validate_spec();

    struct Task {
        int sigma_index;
        int trial_index;
        int method_index;
    };
    std::vector<Task> tasks;
    tasks.reserve(spec.sigma_values.size() * spec.trials * spec.methods.size());
    for (int si = 0; si < static_cast<int>(spec.sigma_values.size()); ++si) {
        for (int t = 0; t < spec.trials; ++t) {
            for (int mi = 0; mi < static_cast<int>(spec.methods.size()); ++mi) {
                tasks.push_back({si, t, mi});
            }
        }
    }

    std::vector<TrialRecord> records(tasks.size());
    const unsigned hw = std::thread::hardware_concurrency();
    const int jobs = spec.jobs > 0 ? spec.jobs : static_cast<int>(hw > 0 ? hw : 1);

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const auto worker = [&]() {
        for (std::size_t k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1)) {
            try {
                const Task& task = tasks[k];
                const Method method = spec.methods[task.method_index];
                const std::uint64_t seed =
                    trial_seed(spec.master_seed, task.sigma_index, task.trial_index, method);
                records[k] =
                    run_trial(spec, spec.sigma_values[task.sigma_index], seed, method);
                records[k].trial_index = task.trial_index;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Raw rows, already in deterministic (sigma, trial, method) order.
    std::ofstream raw(spec.output_path, std::ios::trunc);
    if (!raw) {
        throw std::runtime_error("run_sweep: cannot open '" + spec.output_path +
                                 "' for writing");
    }
    raw << csv_header() << '\n';
    for (const TrialRecord& record : records) {
        raw << csv_row(record, spec.config.p_r) << '\n';
    }
    raw.flush();
    if (!raw) {
        throw std::runtime_error("run_sweep: write failed for '" + spec.output_path + "'");
    }

    // Per-(sigma, method) means.
    const std::string agg_path = spec.output_path + ".agg.csv";
    std::ofstream agg(agg_path, std::ios::trunc);
    if (!agg) {
        throw std::runtime_error("run_sweep: cannot open '" + agg_path + "' for writing");
    }
    agg << "sigma,method,records,mean_gamma_star,mean_gamma_hat,mean_worst_rate,"
           "mean_bs_iters,mean_lm_iters_total,mean_bisection_iters,used_h0_fraction,snr\n";
    for (int si = 0; si < static_cast<int>(spec.sigma_values.size()); ++si) {
        for (int mi = 0; mi < static_cast<int>(spec.methods.size()); ++mi) {
            double sum_star = 0.0, sum_hat = 0.0, sum_rate = 0.0;
            double sum_bs = 0.0, sum_lm = 0.0, sum_bis = 0.0, sum_h0 = 0.0;
            int n = 0, n_star = 0;
            for (const TrialRecord& record : records) {
                if (record.sigma != spec.sigma_values[si] ||
                    record.method != spec.methods[mi]) {
                    continue;
                }
                ++n;
                if (!std::isnan(record.gamma_star)) {
                    sum_star += record.gamma_star;
                    ++n_star;
                }
                sum_hat += record.gamma_hat;
                sum_rate += record.worst_rate;
                sum_bs += record.bs_iters;
                sum_lm += record.lm_iters_total;
                sum_bis += record.bisection_iters;
                sum_h0 += record.used_h0 ? 1.0 : 0.0;
            }
            const double sigma = spec.sigma_values[si];
            agg << fmt17(sigma) << ',' << method_name(spec.methods[mi]) << ',' << n << ','
                << fmt17(n_star > 0 ? sum_star / n_star : kNan) << ','
                << fmt17(sum_hat / n) << ',' << fmt17(sum_rate / n) << ','
                << fmt17(sum_bs / n) << ',' << fmt17(sum_lm / n) << ','
                << fmt17(sum_bis / n) << ',' << fmt17(sum_h0 / n) << ','
                << fmt17(spec.config.p_r / (sigma * sigma)) << '\n';
        }
    }
    agg.flush();
    if (!agg) {
        throw std::runtime_error("run_sweep: write failed for '" + agg_path + "'");
    }
    return records;
}

std::string csv_header() {
    return "sigma,trial_index,method,gamma_star,gamma_hat,worst_rate,bs_iters,"
           "lm_iters_total,bisection_iters,used_h0,snr";
}

std::string csv_row(const TrialRecord& record, double power_rs) {
    std::ostringstream row;
    row << fmt17(record.sigma) << ',' << record.trial_index << ','
        << method_name(record.method) << ',' << fmt17(record.gamma_star) << ','
        << fmt17(record.gamma_hat) << ',' << fmt17(record.worst_rate) << ','
        << record.bs_iters << ',' << record.lm_iters_total << ','
        << record.bisection_iters << ',' << (record.used_h0 ? 1 : 0) << ','
        << fmt17(power_rs / (record.sigma * record.sigma));
    return row.str();
}

std::string record_to_json(const TrialRecord& record) {
    nlohmann::json j;
    j["sigma"] = record.sigma;
    j["trial_index"] = record.trial_index;
    j["method"] = method_name(record.method);
    if (std::isnan(record.gamma_star)) {
        j["gamma_star"] = nullptr;
    } else {
        j["gamma_star"] = record.gamma_star;
    }
    j["gamma_hat"] = record.gamma_hat;
    j["worst_rate"] = record.worst_rate;
    j["bs_iters"] = record.bs_iters;
    j["lm_iters_total"] = record.lm_iters_total;
    j["bisection_iters"] = record.bisection_iters;
    j["used_h0"] = record.used_h0;
    return j.dump(2);
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_spec: cannot open '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_spec: '" + path + "' is not valid JSON: " + e.what());
    }

    ExperimentSpec spec;
    if (j.contains("config")) {
        const auto& c = j.at("config");
        spec.config.n_b = c.value("n_b", spec.config.n_b);
        spec.config.n_r = c.value("n_r", spec.config.n_r);
        spec.config.n_u = c.value("n_u", spec.config.n_u);
        spec.config.p_u = c.value("p_u", spec.config.p_u);
        spec.config.p_b = c.value("p_b", spec.config.p_b);
        spec.config.p_r = c.value("p_r", spec.config.p_r);
        spec.config.sigma_r = c.value("sigma_r", spec.config.sigma_r);
        spec.config.sigma = c.value("sigma", spec.config.sigma);
    }
    if (j.contains("correlation")) {
        const auto& c = j.at("correlation");
        spec.correlation.rho_bs = c.value("rho_bs", spec.correlation.rho_bs);
        spec.correlation.rho_rs = c.value("rho_rs", spec.correlation.rho_rs);
        spec.correlation.rho_ms = c.value("rho_ms", spec.correlation.rho_ms);
    }
    spec.sigma_values = j.value("sigma_values", spec.sigma_values);
    spec.trials = j.value("trials", spec.trials);
    spec.master_seed = j.value("master_seed", spec.master_seed);
    if (j.contains("methods")) {
        spec.methods.clear();
        for (const auto& name : j.at("methods")) {
            spec.methods.push_back(parse_method(name.get<std::string>()));
        }
    }
    spec.output_path = j.value("output_path", spec.output_path);
    spec.rate_prelog = j.value("rate_prelog", spec.rate_prelog);
    spec.jobs = j.value("jobs", spec.jobs);
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        spec.lm.max_iters = s.value("lm_max_iters", spec.lm.max_iters);
        spec.lm.residual_tol = s.value("lm_residual_tol", spec.lm.residual_tol);
        spec.lm.step_tol = s.value("lm_step_tol", spec.lm.step_tol);
        spec.bis_tol = s.value("bis_tol", spec.bis_tol);
        spec.bs_tol = s.value("bs_tol", spec.bs_tol);
        spec.bs_max_iters = s.value("bs_max_iters", spec.bs_max_iters);
    }
    spec.validate_spec();
    return spec;
}

}  // namespace twrs
