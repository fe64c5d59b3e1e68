#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "dcp/draws.hpp"
#include "dcp/error.hpp"
#include "dcp/rng.hpp"
#include "dcp/scores.hpp"

namespace dcp {

// Analytic stand-ins for trained distribution-generating predictors: they map
// an input window to a draw vector with known ground-truth structure.

struct GaussianKnown {
    std::function<double(const std::vector<double>&)> mu_fn;
    std::function<double(const std::vector<double>&)> sigma_fn;
    int m_draws = 100;
};

struct QuantileGrid {
    // 99 pseudo-draws at tau = 0.01 .. 0.99; monotonicity in tau is not
    // enforced, so quantile crossings pass through unchanged.
    std::function<double(const std::vector<double>&, double)> quantile_fn;
    int levels = 99;
};

struct EmpiricalDraws {
    std::vector<double> draws;
};

using OracleDGP = std::variant<GaussianKnown, QuantileGrid, EmpiricalDraws>;

inline DrawVector draw(const OracleDGP& dgp, const std::vector<double>& x, Rng& rng) {
    if (const auto* g = std::get_if<GaussianKnown>(&dgp)) {
        const double mu = g->mu_fn(x);
        const double sigma = g->sigma_fn(x);
        std::vector<double> d(static_cast<std::size_t>(g->m_draws));
        for (double& v : d) v = rng.normal(mu, sigma);
        return summarize_draws(std::move(d));
    }
    if (const auto* q = std::get_if<QuantileGrid>(&dgp)) {
        std::vector<double> d(static_cast<std::size_t>(q->levels));
        for (int i = 0; i < q->levels; ++i) {
            const double tau = static_cast<double>(i + 1) / static_cast<double>(q->levels + 1);
            d[static_cast<std::size_t>(i)] = q->quantile_fn(x, tau);
        }
        return summarize_draws(std::move(d));
    }
    return summarize_draws(std::get<EmpiricalDraws>(dgp).draws);
}

// Exhaustive reference for the root-finder: the outermost grid points whose
// score stays at or below qhat.
template <typename F>
std::pair<double, double> brute_force_conformal_set(F&& score, double qhat,
                                                    const std::vector<double>& y_grid) {
    bool found = false;
    double lo = 0.0, hi = 0.0;
    for (double y : y_grid) {
        if (score(y) <= qhat) {
            if (!found) lo = y;
            hi = y;
            found = true;
        }
    }
    if (!found) raise(Errc::NoMember, "no grid point lies inside the conformal set");
    return {lo, hi};
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace dcp
