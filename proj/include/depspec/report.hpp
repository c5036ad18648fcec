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

// JSON and CSV forms of spectra, disagreement reports, sweeps and search results.
// Numbers are written in shortest round-trip form; key order is fixed.

#include <charconv>
#include <sstream>
#include <string>

#include "json.hpp"

#include "depspec/explore.hpp"
#include "depspec/funlang.hpp"
#include "depspec/spectral.hpp"
#include "depspec/verify.hpp"

namespace depspec {

inline constexpr const char *kReportVersion = "depspec-report/1";

using Json = nlohmann::ordered_json;

inline std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Uppercase hex without prefix, e.g. mask {1, 2} -> "3".
inline std::string mask_hex(SubsetMask m) {
    char buf[16];
    auto res = std::to_chars(buf, buf + sizeof(buf), m.bits, 16);
    std::string out(buf, res.ptr);
    for (char &c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

/// One row per mask: mask,weight,coefficient,variance.
inline std::string spectrum_csv(const CoefficientVector &c, const DependencySpectrum &s) {
    std::ostringstream out;
    out << "mask,weight,coefficient,variance\n";
    for (uint32_t m = 0; m < s.P.size(); ++m) {
        out << mask_hex(SubsetMask(m)) << ',' << std::popcount(m) << ',' << format_number(c.c[m]) << ','
            << format_number(s.P[m]) << '\n';
    }
    return out.str();
}

inline std::string weight_profile_csv(const WeightProfile &w) {
    std::ostringstream out;
    out << "weight,mass\n";
    for (size_t k = 0; k < w.W.size(); ++k) {
        out << k << ',' << format_number(w.W[k]) << '\n';
    }
    return out.str();
}

inline Json to_json(const WeightProfile &w) {
    Json j;
    j["by_weight"] = w.W;
    j["min_effective_length"] = w.min_effective_length ? Json(*w.min_effective_length) : Json(nullptr);
    j["mean_effective_length"] = w.mean_effective_length ? Json(*w.mean_effective_length) : Json(nullptr);
    return j;
}

inline Json spectrum_json(const BooleanFunction &f, const BinarySource &src, const CoefficientVector &c,
                          const DependencySpectrum &s, bool by_weight) {
    Json j;
    j["version"] = kReportVersion;
    j["command"] = "spectrum";
    j["fn"] = format(f);
    j["n"] = f.n();
    j["bias"] = src.p();
    j["q"] = bias(f, src);
    j["total"] = s.total();
    const WeightProfile w = weight_profile(s);
    j["weight_profile"] = to_json(w);
    if (!by_weight) {
        Json rows = Json::array();
        for (uint32_t m = 0; m < s.P.size(); ++m) {
            rows.push_back(
                Json{{"mask", mask_hex(SubsetMask(m))}, {"weight", std::popcount(m)}, {"coefficient", c.c[m]},
                     {"variance", s.P[m]}});
        }
        j["spectrum"] = std::move(rows);
    }
    return j;
}

inline Json to_json(const MCEstimate &mc) {
    return Json{{"estimate", mc.estimate}, {"stderr", mc.std_error}, {"samples", mc.samples}, {"seed", mc.seed}};
}

inline Json to_json(const BoundPair &b) {
    return Json{{"lower", b.lower},
                {"upper", b.upper},
                {"lower_clamped", b.lower_display()},
                {"upper_clamped", b.upper_display()},
                {"t1", b.t1},
                {"t2", b.t2}};
}

/// The report body: version, e, f, n, bias, eps, q, r, spectrum_summary, bounds, exact, mc?,
/// pearson?, sandwich_ok, plus regime and oracle-agreement flags.
inline Json report_json(const BooleanFunction &e, const BooleanFunction &f, const PairSource &s,
                        const DisagreementReport &rep) {
    Json j;
    j["version"] = kReportVersion;
    j["e"] = format(e);
    j["f"] = format(f);
    j["n"] = rep.n;
    j["bias"] = s.p_x();
    if (s.p_y() != s.p_x()) {
        j["bias_y"] = s.p_y();
    }
    j["eps"] = s.eps();
    j["joint"] = s.joint();
    j["q"] = rep.q;
    j["r"] = rep.r;
    j["spectrum_summary"] = Json{{"by_weight", weight_profile(rep.spectrum_e).W},
                                 {"by_weight_f", weight_profile(rep.spectrum_f).W}};
    j["bounds"] = to_json(rep.bounds);
    Json exact{{"sigma", rep.sigma_exact}, {"oracle", to_string(rep.oracle)}};
    if (rep.cross_check_sigma) {
        exact["cross_check"] = Json{{"oracle", to_string(rep.cross_check_oracle)},
                                    {"sigma", *rep.cross_check_sigma},
                                    {"agree", rep.oracles_agree}};
    }
    j["exact"] = std::move(exact);
    if (rep.mc) {
        j["mc"] = to_json(*rep.mc);
    }
    if (rep.pearson) {
        j["pearson"] = *rep.pearson;
    }
    j["sandwich_ok"] = rep.sandwich_ok;
    j["letter_correlation"] = s.letter_correlation();
    j["regime"] = rep.outside_proven_regime ? "outside proven regime" : "proven";
    return j;
}

/// Header: eps,lower,upper,exact,mc_estimate,mc_stderr. Monte Carlo cells are empty when absent.
inline std::string sweep_csv(const SweepResult &sweep) {
    std::ostringstream out;
    out << "eps,lower,upper,exact,mc_estimate,mc_stderr\n";
    for (const auto &row : sweep.rows) {
        out << format_number(row.eps) << ',' << format_number(row.lower) << ',' << format_number(row.upper) << ','
            << format_number(row.sigma_exact) << ',';
        if (row.mc) {
            out << format_number(row.mc->estimate) << ',' << format_number(row.mc->std_error);
        } else {
            out << ',';
        }
        out << '\n';
    }
    return out.str();
}

inline Json sweep_json(const SweepResult &sweep) {
    Json rows = Json::array();
    for (const auto &row : sweep.rows) {
        Json r{{"eps", row.eps}, {"lower", row.lower}, {"upper", row.upper}, {"exact", row.sigma_exact}};
        if (row.mc) {
            r["mc"] = to_json(*row.mc);
        }
        rows.push_back(std::move(r));
    }
    return Json{{"rows", std::move(rows)}, {"warnings", sweep.warnings}};
}

inline Json to_json(const SearchConstraint &c) {
    return Json{{"n", c.n},
                {"min_len", c.min_len},
                {"eps", c.eps},
                {"bias", c.bias},
                {"mode", c.mode == SearchMode::exhaustive ? "exhaustive" : "anneal"},
                {"same_fn", c.same_fn},
                {"seed", c.seed},
                {"iterations", c.iterations},
                {"chains", c.chains},
                {"t0", c.schedule.initial_temperature},
                {"cooling", c.schedule.cooling}};
}

/// A report for the winning pair plus the constraint echo and search outputs.
inline Json search_json(const SearchConstraint &c, const SearchResult &result) {
    const PairSource s = PairSource::from_eps(c.bias, c.eps);
    Json j = report_json(result.best_e, result.best_f, s, sandwich_report(result.best_e, result.best_f, s));
    j["constraint"] = to_json(c);
    j["agreement"] = result.agreement;
    j["lower_bound_at_best"] = result.lower_bound_at_best;
    j["candidates"] = result.candidates;
    if (c.mode == SearchMode::annealing) {
        j["trace"] = result.trace;
    }
    return j;
}

}  // namespace depspec
