#include "icebuckets/scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ice {

EstimationScale::EstimationScale(double epsilon, std::uint32_t num_symbols)
    : epsilon_(epsilon) {
    if (epsilon < 0.0) {
        throw std::domain_error("EstimationScale: epsilon must be >= 0");
    }
    if (num_symbols < 2) {
        throw std::invalid_argument("EstimationScale: need at least 2 symbols");
    }
    values_.resize(num_symbols);
    values_[0] = 0.0;
    if (epsilon == 0.0) {
        for (std::uint32_t l = 1; l < num_symbols; ++l) {
            values_[l] = static_cast<double>(l);
        }
        return;
    }
    const double e2 = epsilon * epsilon;
    const double growth = 1.0 + 2.0 * e2;
    const double offset = 1.0 + e2;
    for (std::uint32_t l = 1; l < num_symbols; ++l) {
        values_[l] = growth * values_[l - 1] + offset;
    }
}

double EstimationScale::value(std::uint32_t l) const {
    if (l >= values_.size()) {
        throw std::out_of_range("EstimationScale::value: symbol out of range");
    }
    return values_[l];
}

double EstimationScale::step(std::uint32_t l) const {
    if (l + 1 >= values_.size()) {
        throw std::out_of_range("EstimationScale::step: top symbol has no successor");
    }
    return values_[l + 1] - values_[l];
}

double capacity(double epsilon, std::uint32_t num_symbols) {
    if (epsilon < 0.0) {
        throw std::domain_error("capacity: epsilon must be >= 0");
    }
    if (num_symbols < 2) {
        throw std::invalid_argument("capacity: need at least 2 symbols");
    }
    const double top = static_cast<double>(num_symbols - 1);
    if (epsilon == 0.0) {
        return top;
    }
    const double e2 = epsilon * epsilon;
    const double t = top * std::log1p(2.0 * e2);
    if (t > 700.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::expm1(t) / (2.0 * e2) * (1.0 + e2);
}

double epsilon_for_capacity(double max_count, std::uint32_t num_symbols) {
    if (max_count < 0.0) {
        throw std::domain_error("epsilon_for_capacity: M must be >= 0");
    }
    if (num_symbols < 2) {
        throw std::invalid_argument("epsilon_for_capacity: need at least 2 symbols");
    }
    if (max_count <= static_cast<double>(num_symbols - 1)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (capacity(hi, num_symbols) < max_count) {
        hi *= 2.0;
    }
    // 200 halvings collapse the bracket to adjacent doubles; keep the upper
    // end so the returned scale can actually hold M.
    for (int i = 0; i < 200 && lo < hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (capacity(mid, num_symbols) < max_count) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

EpsilonSquaredBounds epsilon_squared_bounds(double max_count, std::uint32_t num_symbols) {
    const double top = static_cast<double>(num_symbols - 1);
    if (num_symbols < 2 || max_count <= top || 6.0 * max_count <= top) {
        throw std::domain_error("epsilon_squared_bounds: require M > L-1 and 6M > L-1");
    }
    EpsilonSquaredBounds b;
    b.lower = std::log((2.0 * max_count + 1.0) / (2.0 * top + 1.0)) / (2.0 * top);
    b.upper = 3.0 * std::log(6.0 * max_count / top) / top;
    return b;
}

BitBounds bits_required(double max_count, double epsilon) {
    if (max_count <= 0.0) {
        throw std::domain_error("bits_required: M must be > 0");
    }
    if (epsilon <= 0.0 || epsilon >= 1.0) {
        throw std::domain_error("bits_required: epsilon must be in (0, 1)");
    }
    const double e2 = epsilon * epsilon;
    const double log_num = std::log((2.0 * max_count + 1.0) * e2 + 1.0);
    BitBounds b;
    b.exact_symbols = 1.0 + (log_num - std::log1p(e2)) / std::log1p(2.0 * e2);
    const double common = std::log2(log_num) + std::log2(1.0 / e2);
    b.lower_bits = static_cast<int>(std::ceil(-1.0 + common));
    b.upper_bits = static_cast<int>(std::ceil(1.0 + common));
    return b;
}

int bits_per_symbol(double max_count, double epsilon) {
    const BitBounds b = bits_required(max_count, epsilon);
    return static_cast<int>(std::ceil(std::log2(std::ceil(b.exact_symbols))));
}

double epsilon_from_chebyshev(double beta, double rho) {
    if (beta <= 0.0 || beta > 1.0 || rho <= 0.0 || rho > 1.0) {
        throw std::domain_error("epsilon_from_chebyshev: beta, rho must be in (0, 1]");
    }
    return beta * std::sqrt(rho);
}

double delta_from_epsilon(double epsilon) {
    if (epsilon < 0.0) {
        throw std::domain_error("delta_from_epsilon: epsilon must be >= 0");
    }
    const double e2 = epsilon * epsilon;
    return std::sqrt(e2 / (1.0 + e2));
}

UpscaleTarget upscale_target_symbol(const EstimationScale& from,
                                    const EstimationScale& to,
                                    std::uint32_t symbol) {
    const double a = from.value(symbol);
    if (a == 0.0) {
        return {0, 0.0};
    }
    if (a >= to.max_value()) {
        throw std::overflow_error(
            "upscale_target_symbol: value not representable on target scale");
    }
    const std::uint32_t top = to.num_symbols() - 1;
    std::uint32_t lp;
    if (to.epsilon() == 0.0) {
        lp = static_cast<std::uint32_t>(std::floor(a));
    } else {
        const double e2 = to.epsilon() * to.epsilon();
        const double raw =
            std::log1p(2.0 * e2 * a / (1.0 + e2)) / std::log1p(2.0 * e2);
        lp = static_cast<std::uint32_t>(std::clamp(std::floor(raw), 0.0,
                                                   static_cast<double>(top - 1)));
    }
    // The closed form is exact in reals; in doubles it can land one off.
    while (lp > 0 && to.value(lp) > a) {
        --lp;
    }
    while (lp + 1 < top && to.value(lp + 1) <= a) {
        ++lp;
    }
    const double low = to.value(lp);
    const double high = to.value(lp + 1);
    double p = (a - low) / (high - low);
    p = std::clamp(p, 0.0, std::nextafter(1.0, 0.0));
    return {lp, p};
}

namespace {

// One LP constraint, rewritten as beta >= intercept - alpha * slope.
struct ConstraintLine {
    double intercept;  // c_l / A(l)
    double slope;      // A(l)
};

}  // namespace

double upscale_error_lp(double eps_from, double eps_to, std::uint32_t num_symbols) {
    if (!(0.0 < eps_from && eps_from < eps_to)) {
        throw std::domain_error("upscale_error_lp: require 0 < eps_from < eps_to");
    }
    const EstimationScale from(eps_from, num_symbols);
    const EstimationScale to(eps_to, num_symbols);

    // beta >= u_l - alpha * v_l for every symbol; l = 0 is vacuous.
    std::vector<ConstraintLine> lines;
    lines.reserve(num_symbols - 1);
    for (std::uint32_t l = 1; l < num_symbols; ++l) {
        const double a = from.value(l);
        const UpscaleTarget t = upscale_target_symbol(from, to, l);
        const double c = (to.value(t.symbol + 1) - a) * (a - to.value(t.symbol));
        lines.push_back({c / a, a});
    }

    // Drop constraints dominated by another line (smaller slope, larger
    // intercept), then keep the upper envelope of the rest. Candidate vertices
    // are the envelope breakpoints plus the axis intersections.
    std::sort(lines.begin(), lines.end(), [](const ConstraintLine& x, const ConstraintLine& y) {
        return x.slope < y.slope;
    });
    // A line is dominated if one with slope <= its own has intercept >= its own.
    std::vector<ConstraintLine> kept;
    double running_max = -std::numeric_limits<double>::infinity();
    for (const auto& ln : lines) {
        if (ln.intercept > running_max) {
            kept.push_back(ln);
            running_max = ln.intercept;
        }
    }

    // Upper envelope of beta(alpha) = intercept - slope * alpha over kept lines
    // (slopes increasing, intercepts increasing): standard hull sweep.
    std::vector<ConstraintLine> hull;
    auto cross = [](const ConstraintLine& x, const ConstraintLine& y) {
        // alpha where the two lines meet
        return (y.intercept - x.intercept) / (y.slope - x.slope);
    };
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        // iterate from steepest (largest slope); hull stores lines in order of
        // decreasing slope so breakpoints increase in alpha
        const ConstraintLine& ln = *it;
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], ln) <= cross(hull[hull.size() - 2], hull.back())) {
            hull.pop_back();
        }
        hull.push_back(ln);
    }

    auto beta_needed = [&hull](double alpha) {
        double best = 0.0;
        for (const auto& ln : hull) {
            best = std::max(best, ln.intercept - alpha * ln.slope);
        }
        return best;
    };

    const double e2 = eps_from * eps_from;
    auto objective = [&](double alpha) {
        return e2 + alpha * (1.0 + e2) + beta_needed(alpha);
    };

    std::vector<double> candidates;
    candidates.push_back(0.0);
    for (const auto& ln : hull) {
        candidates.push_back(ln.intercept / ln.slope);  // beta = 0 crossing
    }
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const double alpha = cross(hull[i - 1], hull[i]);
        if (alpha > 0.0) {
            candidates.push_back(alpha);
        }
    }

    double best = std::numeric_limits<double>::infinity();
    for (double alpha : candidates) {
        if (alpha < 0.0) {
            continue;
        }
        best = std::min(best, objective(alpha));
    }
    return best;
}

}  // namespace ice
