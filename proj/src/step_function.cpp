#include "stablemc/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "stablemc/errors.hpp"
#include "stablemc/kernels.hpp"

namespace stablemc {

StepFunction::StepFunction(double initial_value, std::vector<double> jump_times,
                           std::vector<double> values)
    : initial_(initial_value), times_(std::move(jump_times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) {
        throw DomainError("StepFunction: jump_times and values must have equal length");
    }
    double prev = 0.0;
    for (const double t : times_) {
        if (!(t > prev && t <= 1.0)) {
            throw DomainError("StepFunction: jump times must be strictly increasing in (0,1]");
        }
        prev = t;
    }
}

double StepFunction::operator()(double t) const {
    // Index of the last jump time <= t.
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return initial_;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

StepFunction StepFunction::compressed() const {
    std::vector<double> t, v;
    double current = initial_;
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (values_[i] != current) {
            t.push_back(times_[i]);
            v.push_back(values_[i]);
            current = values_[i];
        }
    }
    return StepFunction(initial_, std::move(t), std::move(v));
}

double StepFunction::max_abs() const {
    const double m =
        kernels::active().reduce_max_abs_dev(values_.data(), values_.size(), 0.0);
    return std::max(m, std::fabs(initial_));
}

TimeChange::TimeChange() : dom_{0.0, 1.0}, img_{0.0, 1.0} {}

TimeChange::TimeChange(std::vector<double> domain_nodes, std::vector<double> image_nodes)
    : dom_(std::move(domain_nodes)), img_(std::move(image_nodes)) {
    if (dom_.size() != img_.size() || dom_.size() < 2) {
        throw DomainError("TimeChange: need matching node lists with at least the endpoints");
    }
    if (dom_.front() != 0.0 || img_.front() != 0.0 || dom_.back() != 1.0 || img_.back() != 1.0) {
        throw DomainError("TimeChange: must fix 0 and 1");
    }
    for (std::size_t i = 1; i < dom_.size(); ++i) {
        if (!(dom_[i] > dom_[i - 1]) || !(img_[i] > img_[i - 1])) {
            throw DomainError("TimeChange: nodes must be strictly increasing");
        }
    }
}

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

double TimeChange::operator()(double t) const { return interp(dom_, img_, t); }

double TimeChange::inverse_at(double v) const { return interp(img_, dom_, v); }

TimeChange TimeChange::inverse() const { return TimeChange(img_, dom_); }

double TimeChange::max_dev() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dom_.size(); ++i) {
        m = std::max(m, std::fabs(img_[i] - dom_[i]));
    }
    return m;
}

StepFunction compose_time_change(const StepFunction& x, const TimeChange& lambda) {
    std::vector<double> t;
    std::vector<double> v;
    t.reserve(x.node_count());
    v.reserve(x.node_count());
    double initial = x.initial_value();
    for (std::size_t i = 0; i < x.node_count(); ++i) {
        const double pre = lambda.inverse_at(x.jump_times()[i]);
        if (pre <= 0.0) {
            initial = x.values()[i];
            continue;
        }
        if (!t.empty() && pre <= t.back()) {
            // Preimages collapsed to the same point: keep the latest value.
            v.back() = x.values()[i];
            continue;
        }
        t.push_back(std::min(pre, 1.0));
        v.push_back(x.values()[i]);
    }
    return StepFunction(initial, std::move(t), std::move(v));
}

double sup_norm(const StepFunction& x, const StepFunction& y) {
    double m = std::fabs(x.initial_value() - y.initial_value());
    std::size_t i = 0, j = 0;
    double vx = x.initial_value();
    double vy = y.initial_value();
    const auto& xt = x.jump_times();
    const auto& yt = y.jump_times();
    while (i < xt.size() || j < yt.size()) {
        const double tx = i < xt.size() ? xt[i] : std::numeric_limits<double>::infinity();
        const double ty = j < yt.size() ? yt[j] : std::numeric_limits<double>::infinity();
        if (tx <= ty) vx = x.values()[i++];
        if (ty <= tx) vy = y.values()[j++];
        m = std::max(m, std::fabs(vx - vy));
    }
    return m;
}

std::vector<double> sample_on_grid(const StepFunction& x, std::span<const double> grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = x(grid[i]);
    return out;
}

namespace {

// Cost of a concrete time change, evaluated exactly.
double realized_cost(const StepFunction& x, const StepFunction& y, const TimeChange& lambda) {
    return std::max(lambda.max_dev(), sup_norm(compose_time_change(x, lambda), y));
}

// Min-max alignment of the two jump sets. Returns the matched (y_time, x_time)
// node pairs of the best path; the caller realizes and re-evaluates them.
// Grid cell (i,j) means pieces xv_i / yv_j currently face each other.
std::vector<std::pair<double, double>> best_matching(const StepFunction& x,
                                                     const StepFunction& y) {
    const auto& sx = x.jump_times();
    const auto& sy = y.jump_times();
    const std::size_t m = sx.size();
    const std::size_t k = sy.size();
    auto xval = [&](std::size_t i) { return i == 0 ? x.initial_value() : x.values()[i - 1]; };
    auto yval = [&](std::size_t j) { return j == 0 ? y.initial_value() : y.values()[j - 1]; };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g((m + 1) * (k + 1), inf);
    std::vector<std::uint8_t> step((m + 1) * (k + 1), 0);  // 1=dx, 2=dy, 3=diag
    auto at = [&](std::size_t i, std::size_t j) -> double& { return g[i * (k + 1) + j]; };

    at(0, 0) = std::fabs(xval(0) - yval(0));
    for (std::size_t i = 0; i <= m; ++i) {
        for (std::size_t j = 0; j <= k; ++j) {
            const double cur = at(i, j);
            if (cur == inf) continue;
            if (i < m) {
                const double c = std::max(cur, std::fabs(xval(i + 1) - yval(j)));
                if (c < at(i + 1, j)) {
                    at(i + 1, j) = c;
                    step[(i + 1) * (k + 1) + j] = 1;
                }
            }
            if (j < k) {
                const double c = std::max(cur, std::fabs(xval(i) - yval(j + 1)));
                if (c < at(i, j + 1)) {
                    at(i, j + 1) = c;
                    step[i * (k + 1) + j + 1] = 2;
                }
            }
            if (i < m && j < k) {
                // A matched pair becomes a lambda node (t_y -> s_x); interior
                // times only, so the node list stays strictly increasing
                // against the fixed endpoints.
                if (sx[i] < 1.0 && sy[j] < 1.0) {
                    const double c = std::max(cur, std::max(std::fabs(sx[i] - sy[j]),
                                                            std::fabs(xval(i + 1) - yval(j + 1))));
                    if (c < at(i + 1, j + 1)) {
                        at(i + 1, j + 1) = c;
                        step[(i + 1) * (k + 1) + j + 1] = 3;
                    }
                }
            }
        }
    }

    std::vector<std::pair<double, double>> matched;  // (domain = y time, image = x time)
    std::size_t i = m, j = k;
    while (i != 0 || j != 0) {
        switch (step[i * (k + 1) + j]) {
            case 3:
                matched.emplace_back(sy[j - 1], sx[i - 1]);
                --i;
                --j;
                break;
            case 1:
                --i;
                break;
            default:
                --j;
                break;
        }
    }
    std::reverse(matched.begin(), matched.end());
    return matched;
}

}  // namespace

SkorohodResult skorohod_distance(const StepFunction& x_in, const StepFunction& y_in,
                                 int resolution, std::size_t matching_cap) {
    if (resolution < 2) {
        throw DomainError("skorohod_distance: resolution must be >= 2");
    }
    const StepFunction x = x_in.compressed();
    const StepFunction y = y_in.compressed();

    SkorohodResult res;
    res.upper_bound = sup_norm(x, y);  // identity candidate

    auto realize_matching = [&](const std::vector<std::pair<double, double>>& matched) {
        std::vector<double> dom{0.0};
        std::vector<double> img{0.0};
        for (const auto& [ty, sx] : matched) {
            if (ty > dom.back() && sx > img.back() && ty < 1.0 && sx < 1.0) {
                dom.push_back(ty);
                img.push_back(sx);
            }
        }
        dom.push_back(1.0);
        img.push_back(1.0);
        const TimeChange lambda(std::move(dom), std::move(img));
        res.upper_bound = std::min(res.upper_bound, realized_cost(x, y, lambda));
    };

    if (x.node_count() <= matching_cap && y.node_count() <= matching_cap) {
        res.matching_exhausted = true;
        // Both orders are aligned and realized, which keeps the result
        // symmetric in (x, y) by construction.
        realize_matching(best_matching(x, y));
        auto mirrored = best_matching(y, x);
        for (auto& [a, b] : mirrored) std::swap(a, b);
        realize_matching(mirrored);
    } else {
        res.matching_exhausted = false;
        res.resolution_advisory = true;
        // Tent deformations lambda_c(t) = t + c * 2 * min(t, 1-t), swept over
        // +-resolution steps together with their inverses; strict increase
        // needs |c| < 1/2.
        for (int s = -resolution + 1; s < resolution; ++s) {
            if (s == 0) continue;
            const double c = 0.5 * static_cast<double>(s) / static_cast<double>(resolution);
            const TimeChange lambda({0.0, 0.5, 1.0}, {0.0, 0.5 + c, 1.0});
            res.upper_bound = std::min(res.upper_bound, realized_cost(x, y, lambda));
            res.upper_bound = std::min(res.upper_bound, realized_cost(x, y, lambda.inverse()));
        }
    }
    return res;
}

}  // namespace stablemc
