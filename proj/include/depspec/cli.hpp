// Copyright 2026 The depspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end: spectrum, verify, sweep and search subcommands.
//
// Exit codes:
//   0  success
//   1  verify: the exact sigma falls outside the bounds
//   2  parse or usage error (including randomness requested without --seed)
//   3  infeasible model (bad bias, infeasible eps or joint, no admissible function)
//   4  instance exceeds the capacity of the chosen method
//
// Reports go to standard output (or --file), diagnostics to standard error.

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "depspec/bounds.hpp"
#include "depspec/core.hpp"
#include "depspec/explore.hpp"
#include "depspec/funlang.hpp"
#include "depspec/report.hpp"
#include "depspec/sources.hpp"
#include "depspec/spectral.hpp"
#include "depspec/verify.hpp"

namespace depspec::cli {

enum ExitCode : int { kOk = 0, kSandwichFailed = 1, kUsage = 2, kInfeasible = 3, kCapacity = 4 };

namespace detail {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline PairSource make_source(std::optional<double> bias, std::optional<double> eps, const std::string &joint) {
    if (!joint.empty()) {
        std::vector<double> cells;
        std::stringstream ss(joint);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                size_t used = 0;
                cells.push_back(std::stod(item, &used));
                if (used != item.size()) {
                    throw UsageError("bad number in --joint: '" + item + "'");
                }
            } catch (const std::logic_error &) {
                throw UsageError("bad number in --joint: '" + item + "'");
            }
        }
        if (cells.size() != 4) {
            throw UsageError("--joint takes four comma-separated probabilities a,b,c,d");
        }
        return PairSource::from_joint(cells[0], cells[1], cells[2], cells[3]);
    }
    if (!bias || !eps) {
        throw UsageError("give --bias and --eps, or --joint");
    }
    return PairSource::from_eps(*bias, *eps);
}

inline SweepGrid parse_grid(const std::string &text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        size_t used = 0;
        try {
            parts.push_back(std::stod(item, &used));
        } catch (const std::logic_error &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw UsageError("--grid must look like start:stop:step");
        }
    }
    if (parts.size() != 3) {
        throw UsageError("--grid must look like start:stop:step");
    }
    return SweepGrid{parts[0], parts[1], parts[2]};
}

inline void emit(const std::string &text, const std::string &file, std::ostream &out) {
    if (file.empty()) {
        out << text;
        return;
    }
    std::ofstream f(file, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open output file '" + file + "'");
    }
    f << text;
}

/// Wraps a report body with the command echo and the wall time.
inline Json document(const std::string &name, const std::vector<std::string> &args, const Json &inputs,
                     const Json &body, double seconds) {
    Json doc;
    doc["version"] = kReportVersion;
    doc["command"] = Json{{"name", name}, {"args", args}};
    doc["inputs"] = inputs;
    for (const auto &[key, value] : body.items()) {
        if (key != "version" && key != "command") {
            doc[key] = value;
        }
    }
    doc["wall_time_s"] = seconds;
    return doc;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Runs one command line; argv[0] is the program name.
inline int run(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Dependency spectra of Boolean functions and disagreement bounds for correlated sources"};
    app.require_subcommand(1);

    // spectrum
    std::string fn;
    double spec_bias = 0.5;
    bool by_weight = false;
    std::string out_format = "json";
    std::string file;
    auto *spectrum_cmd = app.add_subcommand("spectrum", "Dependency spectrum of one function");
    spectrum_cmd->add_option("--fn", fn, "Function specification")->required();
    spectrum_cmd->add_option("--bias", spec_bias, "Source bias P(X=1)")->required();
    spectrum_cmd->add_flag("--by-weight", by_weight, "Aggregate by mask weight");
    spectrum_cmd->add_option("--out", out_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    spectrum_cmd->add_option("--file", file, "Write output to this path");

    // verify
    std::string fn_e, fn_f, joint, oracle_name = "auto";
    std::optional<double> bias, eps;
    std::optional<uint64_t> samples, seed;
    unsigned threads = 1;
    auto *verify_cmd = app.add_subcommand("verify", "Check the disagreement bounds against exact oracles");
    verify_cmd->add_option("--fn-e", fn_e, "First function")->required();
    verify_cmd->add_option("--fn-f", fn_f, "Second function")->required();
    verify_cmd->add_option("--bias", bias, "Source bias P(X=1)");
    verify_cmd->add_option("--eps", eps, "Flip probability P(X != Y)");
    verify_cmd->add_option("--joint", joint, "Raw joint pi(0,0),pi(0,1),pi(1,0),pi(1,1)");
    verify_cmd->add_option("--oracle", oracle_name, "auto, brute, spectral or mc")
        ->check(CLI::IsMember({"auto", "brute", "spectral", "mc"}));
    verify_cmd->add_option("--samples", samples, "Monte Carlo sample count");
    verify_cmd->add_option("--seed", seed, "Seed for all randomness");
    verify_cmd->add_option("--threads", threads, "Worker threads for Monte Carlo");
    verify_cmd->add_option("--file", file, "Write output to this path");

    // sweep
    std::string grid_text = "0:0.5:0.05";
    auto *sweep_cmd = app.add_subcommand("sweep", "Bounds and exact sigma over an eps grid");
    sweep_cmd->add_option("--fn-e", fn_e, "First function")->required();
    sweep_cmd->add_option("--fn-f", fn_f, "Second function")->required();
    sweep_cmd->add_option("--bias", bias, "Source bias P(X=1)")->required();
    sweep_cmd->add_option("--grid", grid_text, "start:stop:step");
    sweep_cmd->add_option("--samples", samples, "Monte Carlo sample count");
    sweep_cmd->add_option("--seed", seed, "Seed for all randomness");
    std::string sweep_format = "csv";
    sweep_cmd->add_option("--out", sweep_format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
    sweep_cmd->add_option("--file", file, "Write output to this path");

    // search
    SearchConstraint constraint;
    std::string mode = "exhaustive";
    auto *search_cmd = app.add_subcommand("search", "Best-agreement pair under a minimum effective length");
    search_cmd->add_option("--n", constraint.n, "Number of inputs")->required();
    search_cmd->add_option("--min-len", constraint.min_len, "Minimum effective length L");
    search_cmd->add_option("--eps", constraint.eps, "Flip probability P(X != Y)");
    search_cmd->add_option("--bias", constraint.bias, "Source bias P(X=1)");
    search_cmd->add_option("--mode", mode, "exhaustive or anneal")->check(CLI::IsMember({"exhaustive", "anneal"}));
    search_cmd->add_flag("--same-fn", constraint.same_fn, "Restrict to e = f");
    search_cmd->add_option("--seed", seed, "Seed for annealing");
    search_cmd->add_option("--iterations", constraint.iterations, "Annealing iterations");
    search_cmd->add_option("--chains", constraint.chains, "Independent annealing chains");
    search_cmd->add_option("--t0", constraint.schedule.initial_temperature, "Initial temperature");
    search_cmd->add_option("--cooling", constraint.schedule.cooling, "Geometric cooling factor per iteration");
    search_cmd->add_option("--file", file, "Write output to this path");

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        if (spectrum_cmd->parsed()) {
            const BooleanFunction f = parse(fn);
            const BinarySource src(spec_bias);
            const CoefficientVector c = coefficients_fast(embed(f, src));
            const DependencySpectrum s = spectrum(c);
            if (out_format == "csv") {
                detail::emit(by_weight ? weight_profile_csv(weight_profile(s)) : spectrum_csv(c, s), file, out);
            } else {
                const Json body = spectrum_json(f, src, c, s, by_weight);
                const Json inputs{{"fn", fn}, {"bias", spec_bias}, {"by_weight", by_weight}};
                detail::emit(detail::document("spectrum", args, inputs, body, detail::seconds_since(start)).dump(2) +
                                 "\n",
                             file, out);
            }
            return kOk;
        }

        if (verify_cmd->parsed()) {
            if (samples && !seed) {
                throw detail::UsageError("--samples needs --seed (randomness is never seeded implicitly)");
            }
            const BooleanFunction e = parse(fn_e);
            const BooleanFunction f = parse(fn_f);
            const PairSource s = detail::make_source(bias, eps, joint);
            SandwichOptions opts;
            opts.oracle = oracle_name == "brute"      ? Oracle::brute
                          : oracle_name == "spectral" ? Oracle::spectral
                          : oracle_name == "mc"       ? Oracle::mc
                                                      : Oracle::automatic;
            opts.samples = samples;
            opts.seed = seed;
            opts.threads = threads;
            if (opts.oracle == Oracle::mc && !samples) {
                throw detail::UsageError("--oracle mc needs --samples and --seed");
            }
            if (s.outside_proven_regime()) {
                err << "warning: eps = " << s.eps() << " is outside the proven regime"
                    << (s.eps() > 0.5 ? " (eps > 1/2)\n" : " (per-letter correlation exceeds 1 - 2 eps)\n");
            }
            const DisagreementReport rep = sandwich_report(e, f, s, opts);
            Json inputs{{"fn_e", fn_e}, {"fn_f", fn_f}, {"oracle", oracle_name}};
            if (!joint.empty()) {
                inputs["joint"] = joint;
            } else {
                inputs["bias"] = *bias;
                inputs["eps"] = *eps;
            }
            if (samples) {
                inputs["samples"] = *samples;
                inputs["seed"] = *seed;
            }
            const Json doc =
                detail::document("verify", args, inputs, report_json(e, f, s, rep), detail::seconds_since(start));
            detail::emit(doc.dump(2) + "\n", file, out);
            if (!rep.oracles_agree) {
                err << "warning: exact oracles disagree\n";
            }
            if (rep.oracle == Oracle::mc || rep.sandwich_ok) {
                return kOk;
            }
            err << "sandwich violated: sigma = " << rep.sigma_exact << " outside [" << rep.bounds.lower << ", "
                << rep.bounds.upper << "]\n";
            return kSandwichFailed;
        }

        if (sweep_cmd->parsed()) {
            if (samples && !seed) {
                throw detail::UsageError("--samples needs --seed (randomness is never seeded implicitly)");
            }
            const BooleanFunction e = parse(fn_e);
            const BooleanFunction f = parse(fn_f);
            const SweepResult sweep = eps_sweep(e, f, *bias, detail::parse_grid(grid_text), samples, seed);
            for (const auto &w : sweep.warnings) {
                err << "warning: " << w << '\n';
            }
            if (sweep_format == "csv") {
                detail::emit(sweep_csv(sweep), file, out);
            } else {
                Json body{{"e", format(e)}, {"f", format(f)}, {"bias", *bias}};
                for (const auto &[k, v] : sweep_json(sweep).items()) {
                    body[k] = v;
                }
                const Json inputs{{"fn_e", fn_e}, {"fn_f", fn_f}, {"bias", *bias}, {"grid", grid_text}};
                detail::emit(detail::document("sweep", args, inputs, body, detail::seconds_since(start)).dump(2) + "\n",
                             file, out);
            }
            return kOk;
        }

        if (search_cmd->parsed()) {
            constraint.mode = mode == "anneal" ? SearchMode::annealing : SearchMode::exhaustive;
            if (constraint.mode == SearchMode::annealing) {
                if (!seed) {
                    throw detail::UsageError("--mode anneal needs --seed (randomness is never seeded implicitly)");
                }
                constraint.seed = *seed;
            }
            const SearchResult result = search(constraint);
            const Json doc = detail::document("search", args, to_json(constraint), search_json(constraint, result),
                                              detail::seconds_since(start));
            detail::emit(doc.dump(2) + "\n", file, out);
            return kOk;
        }
    } catch (const ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CapacityError &e) {
        err << "error: " << e.what() << '\n';
        return kCapacity;
    } catch (const ModelError &e) {
        err << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const DegenerateFunctionError &e) {
        err << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace depspec::cli
