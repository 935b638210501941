#ifndef ICEBUCKETS_SCALE_HPP_
#define ICEBUCKETS_SCALE_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace ice {

// One counter scale: the error parameter epsilon together with the
// precomputed estimation values A(0..L-1).
//
//   A(l) = ((1 + 2 eps^2)^l - 1) / (2 eps^2) * (1 + eps^2)
//
// The table is built with the recursion A(l+1) = (1+2 eps^2) A(l) + (1+eps^2),
// which is numerically stabler than repeated exponentiation. For eps = 0 the
// function is the identity and counting is exact.
class EstimationScale {
public:
    EstimationScale(double epsilon, std::uint32_t num_symbols);

    double epsilon() const { return epsilon_; }
    std::uint32_t num_symbols() const { return static_cast<std::uint32_t>(values_.size()); }

    // A(l). Throws std::out_of_range for l >= L.
    double value(std::uint32_t l) const;

    // Step size D(l) = A(l+1) - A(l). Throws std::out_of_range for l >= L-1;
    // the top symbol has no successor and the caller must upscale.
    double step(std::uint32_t l) const;

    // Capacity of this scale, A(L-1).
    double max_value() const { return values_.back(); }

    std::span<const double> values() const { return values_; }

private:
    double epsilon_;
    std::vector<double> values_;
};

// Capacity m(eps) = A_eps(L-1); may be +inf for large eps * L in doubles.
double capacity(double epsilon, std::uint32_t num_symbols);

// Smallest eps whose capacity reaches M. Zero when M <= L-1; otherwise a
// binary search refined until the bracket collapses, returning the upper end
// so that capacity(result, L) >= M.
double epsilon_for_capacity(double max_count, std::uint32_t num_symbols);

// Analytic brackets on eps^2 for a given capacity.
struct EpsilonSquaredBounds {
    double lower;  // ln((2M+1)/(2L-1)) / (2(L-1))
    double upper;  // 3 ln(6M/(L-1)) / (L-1)
};

EpsilonSquaredBounds epsilon_squared_bounds(double max_count, std::uint32_t num_symbols);

// Per-symbol memory needed to count to M with error eps.
struct BitBounds {
    int lower_bits;
    int upper_bits;
    double exact_symbols;  // un-rounded L solving A_eps(L-1) = M
};

// Throws std::domain_error unless M > 0 and 0 < eps < 1.
BitBounds bits_required(double max_count, double epsilon);

// ceil(log2(ceil(exact L))) for the same inputs; always within
// [lower_bits, upper_bits] of bits_required.
int bits_per_symbol(double max_count, double epsilon);

// eps giving P(relative error >= beta) <= rho, via Chebyshev: sqrt(beta^2 rho).
double epsilon_from_chebyshev(double beta, double rho);

// delta with which the recursion (A(l+1)-A(l))(1-delta^2) = 1 + 2 delta^2 A(l)
// holds: sqrt(eps^2 / (1 + eps^2)).
double delta_from_epsilon(double epsilon);

// Result of mapping a symbol onto another scale.
struct UpscaleTarget {
    std::uint32_t symbol;  // l' with A'(l') <= A(l) < A'(l'+1)
    double promote_prob;   // (A(l) - A'(l')) / (A'(l'+1) - A'(l')), in [0, 1)
};

// Locate the target symbol when moving l from one scale to another. The
// closed-form floor expression is validated against the bracket and nudged
// by +-1 where floating-point log rounding misplaces it. Throws
// std::overflow_error if A_from(l) is not representable on the target scale
// (possible only when downscaling).
UpscaleTarget upscale_target_symbol(const EstimationScale& from,
                                    const EstimationScale& to,
                                    std::uint32_t symbol);

// Upper bound on the mean squared relative error after an upscale from
// eps_from to eps_to: minimizes eps^2 + alpha (1+eps^2) + beta over
// alpha, beta >= 0 subject to, for every symbol l,
//   (A'(l'+1) - A(l)) (A(l) - A'(l')) <= alpha A(l)^2 + beta A(l).
double upscale_error_lp(double eps_from, double eps_to, std::uint32_t num_symbols);

}  // namespace ice

#endif  // ICEBUCKETS_SCALE_HPP_
