// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "twrs/harness.hpp"
#include "twrs/oracle.hpp"
#include "twrs/rng.hpp"

namespace {

twrs::ExperimentSpec load_or_default(const std::string& config_path) {
    if (config_path.empty()) return twrs::ExperimentSpec{};
    return twrs::load_spec(config_path);
}

std::vector<double> linspace(double lo, double hi, int steps) {
    std::vector<double> values;
    if (steps <= 1) {
        values.push_back(lo);
        return values;
    }
    for (int i = 0; i < steps; ++i) {
        values.push_back(lo + (hi - lo) * i / (steps - 1));
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo simulator for max-min SINR precoding in a "
                 "multiuser amplify-and-forward two-way relay cell"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    // run: full sweep, CSV output
    auto* run = app.add_subcommand("run", "Run a seeded sigma sweep and write CSV records");
    int trials = 0;
    double sigma_min = 0.0, sigma_max = 0.0;
    int sigma_steps = 0;
    std::vector<std::string> method_names;
    std::string out_path;
    int jobs = -1;
    double rate_prelog = -1.0;
    run->add_option("--config", config_path, "JSON experiment spec (defaults when omitted)");
    run->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
        seed_given = true;
    });
    run->add_option("--trials", trials, "channel realizations per sigma point");
    run->add_option("--sigma-min", sigma_min, "lowest terminal noise level");
    run->add_option("--sigma-max", sigma_max, "highest terminal noise level");
    run->add_option("--sigma-steps", sigma_steps, "number of sigma points");
    run->add_option("--methods", method_names,
                    "subset of {no-bs-precoding, proposed, bound-only}");
    run->add_option("--out", out_path, "output CSV path");
    run->add_option("--jobs", jobs, "worker threads (0 = hardware)");
    run->add_option("--rate-prelog", rate_prelog, "rate prefactor (default 0.5)");

    // trial: one record as JSON
    auto* trial = app.add_subcommand("trial", "Run one trial and print the record as JSON");
    double trial_sigma = 1.0;
    std::string trial_method = "proposed";
    trial->add_option("--config", config_path, "JSON experiment spec");
    trial->add_option("--sigma", trial_sigma, "terminal noise level")->required();
    trial->add_option("--seed", seed, "trial seed")->required();
    trial->add_option("--method", trial_method, "no-bs-precoding | proposed | bound-only");

    // oracle: random-search baseline on a reduced instance
    auto* oracle = app.add_subcommand(
        "oracle", "Compare the relay solver against random search on a reduced instance");
    std::int64_t samples = 1000000;
    oracle->add_option("--config", config_path, "JSON experiment spec");
    oracle->add_option("--samples", samples, "random-search sample count");
    oracle->add_option("--seed", seed, "seed for the reduced instance and the search");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            twrs::ExperimentSpec spec = load_or_default(config_path);
            if (seed_given) spec.master_seed = seed;
            if (trials > 0) spec.trials = trials;
            if (sigma_steps > 0) {
                spec.sigma_values = linspace(sigma_min, sigma_max, sigma_steps);
            }
            if (!method_names.empty()) {
                spec.methods.clear();
                for (const auto& name : method_names) {
                    spec.methods.push_back(twrs::parse_method(name));
                }
            }
            if (!out_path.empty()) spec.output_path = out_path;
            if (jobs >= 0) spec.jobs = jobs;
            if (rate_prelog > 0.0) spec.rate_prelog = rate_prelog;

            const auto records = twrs::run_sweep(spec);
            std::cout << "wrote " << records.size() << " records to " << spec.output_path
                      << " (aggregates: " << spec.output_path << ".agg.csv)\n";
        } else if (trial->parsed()) {
            twrs::ExperimentSpec spec = load_or_default(config_path);
            const auto record = twrs::run_trial(spec, trial_sigma, seed,
                                                twrs::parse_method(trial_method));
            std::cout << twrs::record_to_json(record) << '\n';
        } else if (oracle->parsed()) {
            twrs::ExperimentSpec spec = load_or_default(config_path);
            // Shrink to a 2-antenna relay with one user so exhaustive random
            // search stays meaningful at 10^6 samples.
            twrs::SystemConfig cfg = spec.config;
            cfg.n_r = 2;
            cfg.n_u = 1;
            cfg.n_b = 1;
            twrs::Rng rng(twrs::derive_seed(seed, {0}));
            const auto ch = twrs::draw_channels(rng, cfg, spec.correlation);
            const twrs::cmat w =
                std::sqrt(cfg.p_b / cfg.n_b) * twrs::cmat::Identity(cfg.n_b, cfg.n_u);
            const auto forms =
                twrs::build_rs_quadforms(twrs::effective_matrices(ch, w, cfg), cfg);

            const auto solver = twrs::bisection_solve(forms, spec.lm, spec.bis_tol);
            const auto search = twrs::random_search_rs(forms, samples,
                                                       twrs::derive_seed(seed, {1}));
            std::printf("solver   gamma_star = %.12g (bound %.12g)\n", solver.gamma_star,
                        solver.gamma_hat);
            std::printf("search   best_gamma = %.12g over %lld samples\n", search.best_gamma,
                        static_cast<long long>(search.samples));
            std::printf("ratio    solver/search = %.6f\n",
                        solver.gamma_star / search.best_gamma);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
