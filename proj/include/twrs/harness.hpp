// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twrs/bs_solver.hpp"
#include "twrs/channel.hpp"
#include "twrs/rs_solver.hpp"
#include "twrs/system_config.hpp"

namespace twrs {

enum class Method {
    NoBsPrecoding = 0,  // W = sqrt(p_b / n_b) * I, relay solve only
    Proposed = 1,       // BS equalization first, then relay solve
    BoundOnly = 2,      // records the minimax bound under the scaled identity
};

std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Full description of one Monte-Carlo sweep. Defaults reproduce the
/// reference simulation setup (6-antenna relay, 3 users, 10^1.5 W budgets,
/// exponentially correlated Rayleigh fading).
struct ExperimentSpec {
    SystemConfig config;
    CorrelationSpec correlation;
    std::vector<double> sigma_values = {0.01, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    int trials = 1000;
    std::uint64_t master_seed = 1;
    std::vector<Method> methods = {Method::NoBsPrecoding, Method::Proposed,
                                   Method::BoundOnly};
    std::string output_path = "sweep.csv";
    double rate_prelog = 0.5;
    LmParams lm;
    double bis_tol = 1e-3;
    double bs_tol = 3e-2;
    int bs_max_iters = 50;
    int jobs = 0;  // 0 = hardware concurrency

    void validate_spec() const;
};

/// One solved channel realization. gamma_star and the iteration counters are
/// NaN / zero for the bound-only method.
struct TrialRecord {
    double sigma = 0.0;
    int trial_index = 0;
    Method method = Method::Proposed;
    double gamma_star = 0.0;
    double gamma_hat = 0.0;
    double worst_rate = 0.0;
    int bs_iters = 0;
    int lm_iters_total = 0;
    int bisection_iters = 0;
    bool used_h0 = false;
};

/// Runs one seeded trial: channel draw, the method's precoding pipeline, and
/// the record of bounds, SINRs and iteration counts. Numerically singular
/// channel draws are redrawn from sub-seeds derived from (seed, attempt).
TrialRecord run_trial(const ExperimentSpec& spec, double sigma, std::uint64_t seed,
                      Method method);

/// Runs the whole sweep and writes one CSV row per (sigma, trial, method) to
/// spec.output_path plus per-(sigma, method) means to a companion
/// "<output>.agg.csv" file. Output bytes depend only on the spec contents.
/// Returns the records in row order.
std::vector<TrialRecord> run_sweep(const ExperimentSpec& spec);

/// Seed of a single trial: derive_seed(master, {sigma_index, trial_index,
/// method_id}).
std::uint64_t trial_seed(std::uint64_t master_seed, int sigma_index, int trial_index,
                         Method method);

/// Reads an ExperimentSpec from JSON; missing fields keep their defaults.
ExperimentSpec load_spec(const std::string& path);

/// One record as a JSON object (used by the `trial` CLI subcommand).
std::string record_to_json(const TrialRecord& record);

/// CSV header shared by the raw and trial outputs.
std::string csv_header();

/// One CSV row; floating point fields use 17 significant digits.
std::string csv_row(const TrialRecord& record, double power_rs);

}  // namespace twrs
