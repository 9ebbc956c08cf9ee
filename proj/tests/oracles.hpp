#pragma once

#include <array>

#include "mpmv/market.hpp"

namespace testutil {

// Exact-enumeration cost oracle for a two-period single-asset market.
//
// The model drives wealth with Gaussian increments, but the cost
// mu E[(X - Y)^2] - E[X] of a deterministic strategy depends on the noise
// only through its first two moments (the dynamics are linear and the
// objective quadratic). Replacing each increment by a +/-1 coin with the
// same mean and variance therefore reproduces the exact cost while making
// full enumeration over the four outcomes possible.
struct BinomialCostOracle {
    double r0 = 1.0, r1 = 1.0;  // per-period risk-free gross returns
    double gamma = 0.0;         // excess return, both periods
    double sigma = 0.0;         // volatility, both periods
    double mu = 1.0;
    double x = 1.0;
    double y = 1.0;

    double cost(double p0, double p1) const {
        double sum_sq = 0.0, sum_x = 0.0;
        for (int w0 : {-1, 1}) {
            const double x1 = r0 * x + gamma * p0 + p0 * sigma * w0;
            const double y1 = r0 * y + gamma * p0;
            for (int w1 : {-1, 1}) {
                const double x2 = r1 * x1 + gamma * p1 + p1 * sigma * w1;
                const double y2 = r1 * y1 + gamma * p1;
                sum_sq += (x2 - y2) * (x2 - y2);
                sum_x += x2;
            }
        }
        return mu * sum_sq / 4.0 - sum_x / 4.0;
    }

    struct GridMin {
        double cost;
        double p0, p1;
    };

    // Argmin over the square grid {lo, lo+step, ..., hi}^2.
    GridMin grid_minimum(double lo, double hi, double step) const {
        GridMin best{cost(lo, lo), lo, lo};
        const int count = static_cast<int>((hi - lo) / step + 0.5) + 1;
        for (int i = 0; i < count; ++i) {
            const double p0 = lo + i * step;
            for (int j = 0; j < count; ++j) {
                const double p1 = lo + j * step;
                const double c = cost(p0, p1);
                if (c < best.cost) best = {c, p0, p1};
            }
        }
        return best;
    }

    mpmv::MarketParams market() const {
        mpmv::Vec b = mpmv::Vec::Constant(1, r0 + gamma);
        mpmv::Mat sg = mpmv::Mat::Constant(1, 1, sigma);
        std::vector<double> r = {r0, r1};
        std::vector<mpmv::Vec> bs = {b, mpmv::Vec::Constant(1, r1 + gamma)};
        std::vector<mpmv::Mat> sgs = {sg, sg};
        return mpmv::MarketParams::from_schedules(std::move(r), std::move(bs), std::move(sgs));
    }
};

}  // namespace testutil
