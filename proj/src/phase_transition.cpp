#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "bandsurf/errors.hpp"
#include "bandsurf/recovery.hpp"
#include "bandsurf/rng.hpp"

namespace bandsurf {

namespace {

struct Row {
    std::vector<std::size_t> counts;  // per factor
};

std::vector<Row> expand_rows(const PhaseConfig& config) {
    std::vector<Row> rows;
    if (config.factors.size() == 1) {
        if (!config.component_counts.empty()) {
            for (const auto& c : config.component_counts) rows.push_back(Row{c});
        }
        for (std::size_t n : config.sample_counts) rows.push_back(Row{{n}});
    } else {
        if (!config.sample_counts.empty()) {
            throw std::invalid_argument("multi-factor experiments take per-component counts, not total counts");
        }
        for (const auto& c : config.component_counts) rows.push_back(Row{c});
    }
    for (const auto& r : rows) {
        if (r.counts.size() != config.factors.size()) {
            throw std::invalid_argument("per-component count row does not match the number of factors");
        }
    }
    return rows;
}

} // namespace

std::vector<PhaseRow> phase_transition(const PhaseConfig& config) {
    if (config.factors.empty()) throw std::invalid_argument("phase transition needs at least one factor support");
    const std::size_t dims = config.factors.front().dims();
    for (const auto& f : config.factors) {
        if (f.dims() != dims) throw DimensionMismatch(dims, f.dims());
        if (!f.is_symmetric()) throw std::invalid_argument("factor supports must be symmetric about the origin");
    }
    if (!(config.tol > 0.0) || !(config.residual_tol > 0.0)) {
        throw std::invalid_argument("tolerances must be positive");
    }
    const std::vector<Row> rows = expand_rows(config);

    SupportSet total = config.factors.front();
    for (std::size_t i = 1; i < config.factors.size(); ++i) total = minkowski_sum(total, config.factors[i]);
    const SupportSet gamma = config.gamma.value_or(total);
    if (gamma.dims() != dims) throw DimensionMismatch(dims, gamma.dims());
    const std::size_t expected = shift_complement(gamma, total).size();
    if (expected == 0) throw std::invalid_argument("lifting support does not contain the surface support");

    std::vector<std::size_t> max_counts(config.factors.size(), 0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.counts.size(); ++i) max_counts[i] = std::max(max_counts[i], r.counts[i]);
    }

    std::vector<std::vector<TrialOutcome>> outcomes(config.trials, std::vector<TrialOutcome>(rows.size()));

    auto run_trial = [&](std::size_t t) {
        const std::uint64_t ts = mix_seed(config.seed, t);
        std::vector<PointCloud> draws;
        PointCloud heldout(dims);
        for (std::size_t i = 0; i < config.factors.size(); ++i) {
            const TrigPolynomial poly = random_real_poly_with_zero_set(config.factors[i], mix_seed(ts, i));
            PointCloud s = sample_zero_set(poly, max_counts[i], mix_seed(ts, 100 + i));
            draws.push_back(PointCloud(s.points(), std::vector<int>(s.size(), static_cast<int>(i) + 1)));
            heldout.append(sample_zero_set(poly, config.heldout_per_factor, mix_seed(ts, 200 + i)));
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            PointCloud cloud(dims);
            for (std::size_t i = 0; i < draws.size(); ++i) cloud.append(draws[i].slice(0, rows[r].counts[i]));
            outcomes[t][r] = evaluate_recovery(cloud, heldout, gamma, expected, config.tol, config.residual_tol);
        }
    };

    std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(config.trials, 1));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t t = next++; t < config.trials; t = next++) {
            try {
                run_trial(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = config.trials;
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<PhaseRow> table;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        PhaseRow row;
        row.per_component = rows[r].counts;
        row.total = std::accumulate(rows[r].counts.begin(), rows[r].counts.end(), std::size_t{0});
        row.trials = config.trials;
        row.expected_null_dim = expected;
        row.null_dim_counts.assign(gamma.size() + 1, 0);
        for (std::size_t t = 0; t < config.trials; ++t) {
            const auto& o = outcomes[t][r];
            row.successes += o.success ? 1 : 0;
            ++row.null_dim_counts[std::min(o.null_dim, gamma.size())];
        }
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace bandsurf
