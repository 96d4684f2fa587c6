// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "drc/analytic.hpp"
#include "drc/errors.hpp"

// Continuous-time Markov model of a (9,6) stripe: states count the healthy
// blocks from 9 down to 5, where state 5 means data loss.
namespace drc::reliability {

enum class Placement { Flat, Hierarchical };

inline const char* placement_name(Placement p) { return p == Placement::Flat ? "flat" : "hierarchical"; }

inline constexpr double kTiB = 1099511627776.0;
inline constexpr double kDaySeconds = 86400.0;

struct Scenario {
    Placement placement = Placement::Hierarchical;
    bool correlated = false;
    double lambda1 = 0.25;           // independent failures per node-year
    double lambda2 = 0.005;          // correlated failures per node-year
    double gamma_bps = 1e9;          // cross-rack repair bandwidth, bits per second
    double capacity_bytes = kTiB;    // data stored per node
    double days_per_year = 365.0;
};

inline constexpr std::size_t kStates = 5;  // 9, 8, 7, 6, 5 healthy blocks
inline constexpr std::size_t kLoss = 4;

struct MarkovModel {
    std::array<int, kStates> healthy{9, 8, 7, 6, 5};
    // rate[i][j] is the transition rate from state i to state j, per year.
    std::array<std::array<double, kStates>, kStates> rate{};
    double mu_single = 0;  // repair rate out of state 8
    double mu_multi = 0;   // repair rate out of states 7 and 6

    double outflow(std::size_t i) const {
        double s = 0;
        for (std::size_t j = 0; j < kStates; ++j)
            if (j != i) s += rate[i][j];
        return s;
    }
};

// Repair rates in repairs per year. A single failure moves the minimum
// cross-rack traffic of the placement; a multi-failure repair fetches k
// whole blocks.
inline MarkovModel build_chain(const Scenario& sc) {
    if (!(sc.lambda1 > 0) || sc.lambda2 < 0 || sc.gamma_bps < 0 || !(sc.capacity_bytes > 0) || !(sc.days_per_year > 0))
        throw ModelError("failure rates and capacity must be positive, bandwidth non-negative");
    const double bytes_per_year = sc.gamma_bps / 8.0 * sc.days_per_year * kDaySeconds;
    const double capacity = sc.capacity_bytes;
    const double single_traffic = sc.placement == Placement::Flat
                                      ? analytic_cross_rack_traffic(CodeKind::MSR, 9, 6, 9).to_double()
                                      : analytic_cross_rack_traffic(CodeKind::DRC, 9, 6, 3).to_double();
    MarkovModel m;
    m.mu_single = bytes_per_year / (single_traffic * capacity);
    m.mu_multi = bytes_per_year / (6.0 * capacity);
    const double l1 = sc.lambda1, l2 = sc.correlated ? sc.lambda2 : 0.0;
    for (std::size_t i = 0; i < kLoss; ++i) m.rate[i][i + 1] = m.healthy[i] * l1;
    m.rate[0][1] += 9.0 * l2;
    if (sc.placement == Placement::Hierarchical) {
        m.rate[0][2] += 9.0 * l2 * l2;
        m.rate[0][3] += 3.0 * l2 * l2 * l2;
    }
    m.rate[1][0] = m.mu_single;
    m.rate[2][1] = m.mu_multi;
    m.rate[3][2] = m.mu_multi;
    return m;
}

// Expected time to absorption from state 9, in years. Transient states are
// eliminated one at a time from the loss end. Each elimination folds the
// removed state's paths and holding time into its neighbours using only sums
// and products of non-negative terms, so the stiff repair/failure ratio does
// not cost precision through cancellation.
inline double mttdl(const MarkovModel& m) {
    auto r = m.rate;
    std::array<double, kStates> hold{};
    hold.fill(1.0);
    auto out = [&](std::size_t i, std::size_t live) {
        double s = r[i][kLoss];
        for (std::size_t j = 0; j < live; ++j)
            if (j != i) s += r[i][j];
        return s;
    };
    for (std::size_t k = kLoss - 1; k >= 1; --k) {
        const double ok = out(k, k + 1);
        if (!(ok > 0)) throw ModelError("Markov chain has no path to data loss");
        for (std::size_t i = 0; i < k; ++i) {
            if (r[i][k] == 0) continue;
            const double f = r[i][k] / ok;
            hold[i] += f * hold[k];
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) r[i][j] += f * r[k][j];
            r[i][kLoss] += f * r[k][kLoss];
            r[i][k] = 0;
        }
    }
    const double t = hold[0] / r[0][kLoss];
    if (!std::isfinite(t) || t <= 0) throw ModelError("MTTDL is not finite and positive");
    return t;
}

inline double mttdl(const Scenario& s) { return mttdl(build_chain(s)); }

// Three significant figures in scientific notation, e.g. 4.08E+07.
inline std::string format_sci3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2E", v);
    return buf;
}

struct TableRow {
    Placement placement;
    bool correlated;
    double inv_lambda1_years;
    double gamma_bps;
    double mttdl_years;
};

struct TableGrid {
    std::vector<double> inv_lambda1_years{2, 4, 6, 8, 10};
    std::vector<double> gamma_bps{1e9};
    double lambda2 = 0.005;
    double days_per_year = 365.0;
};

inline TableGrid table1_grid() { return {}; }

inline TableGrid table2_grid() {
    TableGrid g;
    g.inv_lambda1_years = {4};
    g.gamma_bps = {0.2e9, 0.5e9, 1e9, 2e9};
    return g;
}

inline std::vector<TableRow> mttdl_table(const TableGrid& grid) {
    std::vector<TableRow> rows;
    for (auto gamma : grid.gamma_bps)
        for (auto inv : grid.inv_lambda1_years) {
            if (!(inv > 0)) throw ModelError("1/lambda1 must be positive");
            for (auto p : {Placement::Flat, Placement::Hierarchical})
                for (bool corr : {false, true}) {
                    Scenario s;
                    s.placement = p;
                    s.correlated = corr;
                    s.lambda1 = 1.0 / inv;
                    s.lambda2 = grid.lambda2;
                    s.gamma_bps = gamma;
                    s.days_per_year = grid.days_per_year;
                    rows.push_back({p, corr, inv, gamma, mttdl(s)});
                }
        }
    return rows;
}

inline std::string table_to_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "placement,correlated,inv_lambda1_years,gamma_gbps,mttdl_years\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%g", r.inv_lambda1_years, r.gamma_bps / 1e9);
        os << placement_name(r.placement) << "," << (r.correlated ? "yes" : "no") << "," << buf << ","
           << format_sci3(r.mttdl_years) << "\n";
    }
    return os.str();
}

}  // namespace drc::reliability
