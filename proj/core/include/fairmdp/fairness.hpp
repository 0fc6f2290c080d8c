#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fairmdp {

enum class FairnessKind { MaxMin, Proportional, Alpha };

/// How the max-min gradient is taken: the log-sum-exp soft-min surrogate
/// (differentiable, used by the continuous solver) or the exact
/// subgradient (indicator of one argmin, ties to the lowest agent index).
enum class MaxMinGradient { Softmin, ExactSubgradient };

/// Welfare function over per-agent value vectors. alpha == 1 is
/// normalized to Proportional at construction: the alpha-fair family is
/// defined piecewise with log at alpha = 1.
struct FairnessObjective {
    FairnessKind kind = FairnessKind::MaxMin;
    double alpha = 0.0;
    double epsilon_floor = 0.1;
    double softmin_temperature = 1e-3;  // only used for max-min gradients

    static FairnessObjective max_min(double eps = 0.1, double tau = 1e-3);
    static FairnessObjective proportional(double eps = 0.1);
    static FairnessObjective alpha_fair(double a, double eps = 0.1);

    /// Accepts "max-min" | "proportional" | "alpha:<float>".
    static FairnessObjective parse(std::string_view text, double eps = 0.1);

    std::string name() const;
};

/// Exact objective value. Domain: every v_i >= epsilon_floor for
/// proportional/alpha (throws std::domain_error naming the first
/// offending agent); relaxed to v_i >= 0 for max-min.
double evaluate(const FairnessObjective& f, std::span<const double> v);

/// Soft-min value -tau * log sum exp(-v_i / tau); lies within
/// [min v - tau log N, min v].
double evaluate_softmin(const FairnessObjective& f, std::span<const double> v);

std::vector<double> gradient(const FairnessObjective& f, std::span<const double> v,
                             MaxMinGradient mode = MaxMinGradient::Softmin);

/// C_F: eps^-alpha for alpha fairness, 1/eps for proportional, 1/N for max-min.
double lipschitz_constant(const FairnessObjective& f, int num_agents);

/// Objective extended below the epsilon floor by the tangent line at the
/// floor. Coincides with evaluate() on the domain, stays concave and
/// monotone everywhere, and keeps gradients bounded by C_F, so optimizer
/// iterates with out-of-domain values (pessimistic rewards) remain finite.
double evaluate_guarded(const FairnessObjective& f, std::span<const double> v);
std::vector<double> gradient_guarded(const FairnessObjective& f, std::span<const double> v,
                                     MaxMinGradient mode = MaxMinGradient::Softmin);

}  // namespace fairmdp
