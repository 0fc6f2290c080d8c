#include "fairmdp/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <stdexcept>

namespace fairmdp {

namespace {

constexpr double kDomainSlack = 1e-9;

void check_params(const FairnessObjective& f) {
    if (f.epsilon_floor <= 0.0) throw std::invalid_argument("fairness: epsilon_floor must be > 0");
    if (f.kind == FairnessKind::Alpha && f.alpha <= 0.0)
        throw std::invalid_argument("fairness: alpha must be > 0");
    if (f.softmin_temperature <= 0.0)
        throw std::invalid_argument("fairness: softmin_temperature must be > 0");
}

void check_domain(const FairnessObjective& f, std::span<const double> v) {
    double bound = f.kind == FairnessKind::MaxMin ? 0.0 : f.epsilon_floor;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < bound - kDomainSlack) {
            throw std::domain_error("fairness: agent " + std::to_string(i) + " value " +
                                    std::to_string(v[i]) + " below " +
                                    (f.kind == FairnessKind::MaxMin ? "0" : "epsilon floor"));
        }
    }
}

std::vector<double> softmin_weights(std::span<const double> v, double tau) {
    double lo = *std::min_element(v.begin(), v.end());
    std::vector<double> w(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = std::exp(-(v[i] - lo) / tau);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

}  // namespace

FairnessObjective FairnessObjective::max_min(double eps, double tau) {
    FairnessObjective f{FairnessKind::MaxMin, 0.0, eps, tau};
    check_params(f);
    return f;
}

FairnessObjective FairnessObjective::proportional(double eps) {
    FairnessObjective f{FairnessKind::Proportional, 0.0, eps, 1e-3};
    check_params(f);
    return f;
}

FairnessObjective FairnessObjective::alpha_fair(double a, double eps) {
    if (a == 1.0) return proportional(eps);
    FairnessObjective f{FairnessKind::Alpha, a, eps, 1e-3};
    check_params(f);
    return f;
}

FairnessObjective FairnessObjective::parse(std::string_view text, double eps) {
    if (text == "max-min") return max_min(eps);
    if (text == "proportional") return proportional(eps);
    if (text.starts_with("alpha:")) {
        std::string_view num = text.substr(6);
        double a = 0.0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), a);
        if (ec != std::errc{} || ptr != num.data() + num.size() || a <= 0.0)
            throw std::invalid_argument("fairness: bad alpha in '" + std::string(text) + "'");
        return alpha_fair(a, eps);
    }
    throw std::invalid_argument("fairness: unknown kind '" + std::string(text) +
                                "' (expected max-min | proportional | alpha:<float>)");
}

std::string FairnessObjective::name() const {
    switch (kind) {
        case FairnessKind::MaxMin: return "max-min";
        case FairnessKind::Proportional: return "proportional";
        case FairnessKind::Alpha: return "alpha:" + std::to_string(alpha);
    }
    return "?";
}

double evaluate(const FairnessObjective& f, std::span<const double> v) {
    check_params(f);
    if (v.empty()) throw std::invalid_argument("fairness: empty value vector");
    check_domain(f, v);
    switch (f.kind) {
        case FairnessKind::MaxMin:
            return *std::min_element(v.begin(), v.end());
        case FairnessKind::Proportional: {
            double total = 0.0;
            for (double x : v) total += std::log(x);
            return total;
        }
        case FairnessKind::Alpha: {
            double total = 0.0;
            for (double x : v) total += std::pow(x, 1.0 - f.alpha) / (1.0 - f.alpha);
            return total;
        }
    }
    return 0.0;
}

double evaluate_softmin(const FairnessObjective& f, std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("fairness: empty value vector");
    double tau = f.softmin_temperature;
    double lo = *std::min_element(v.begin(), v.end());
    double total = 0.0;
    for (double x : v) total += std::exp(-(x - lo) / tau);
    return lo - tau * std::log(total);
}

std::vector<double> gradient(const FairnessObjective& f, std::span<const double> v,
                             MaxMinGradient mode) {
    check_params(f);
    if (v.empty()) throw std::invalid_argument("fairness: empty value vector");
    check_domain(f, v);
    std::vector<double> g(v.size());
    switch (f.kind) {
        case FairnessKind::MaxMin:
            if (mode == MaxMinGradient::Softmin) return softmin_weights(v, f.softmin_temperature);
            g[std::min_element(v.begin(), v.end()) - v.begin()] = 1.0;
            return g;
        case FairnessKind::Proportional:
            for (std::size_t i = 0; i < v.size(); ++i) g[i] = 1.0 / v[i];
            return g;
        case FairnessKind::Alpha:
            for (std::size_t i = 0; i < v.size(); ++i) g[i] = std::pow(v[i], -f.alpha);
            return g;
    }
    return g;
}

double lipschitz_constant(const FairnessObjective& f, int num_agents) {
    check_params(f);
    switch (f.kind) {
        case FairnessKind::MaxMin: return 1.0 / num_agents;
        case FairnessKind::Proportional: return 1.0 / f.epsilon_floor;
        case FairnessKind::Alpha: return std::pow(f.epsilon_floor, -f.alpha);
    }
    return 0.0;
}

double evaluate_guarded(const FairnessObjective& f, std::span<const double> v) {
    check_params(f);
    if (v.empty()) throw std::invalid_argument("fairness: empty value vector");
    double eps = f.epsilon_floor;
    switch (f.kind) {
        case FairnessKind::MaxMin:
            return *std::min_element(v.begin(), v.end());
        case FairnessKind::Proportional: {
            double total = 0.0;
            for (double x : v)
                total += x >= eps ? std::log(x) : std::log(eps) + (x - eps) / eps;
            return total;
        }
        case FairnessKind::Alpha: {
            double total = 0.0;
            double at_eps = std::pow(eps, 1.0 - f.alpha) / (1.0 - f.alpha);
            double slope = std::pow(eps, -f.alpha);
            for (double x : v)
                total += x >= eps ? std::pow(x, 1.0 - f.alpha) / (1.0 - f.alpha)
                                  : at_eps + slope * (x - eps);
            return total;
        }
    }
    return 0.0;
}

std::vector<double> gradient_guarded(const FairnessObjective& f, std::span<const double> v,
                                     MaxMinGradient mode) {
    check_params(f);
    if (v.empty()) throw std::invalid_argument("fairness: empty value vector");
    double eps = f.epsilon_floor;
    std::vector<double> g(v.size());
    switch (f.kind) {
        case FairnessKind::MaxMin:
            if (mode == MaxMinGradient::Softmin) return softmin_weights(v, f.softmin_temperature);
            g[std::min_element(v.begin(), v.end()) - v.begin()] = 1.0;
            return g;
        case FairnessKind::Proportional:
            for (std::size_t i = 0; i < v.size(); ++i) g[i] = v[i] >= eps ? 1.0 / v[i] : 1.0 / eps;
            return g;
        case FairnessKind::Alpha: {
            double slope = std::pow(eps, -f.alpha);
            for (std::size_t i = 0; i < v.size(); ++i)
                g[i] = v[i] >= eps ? std::pow(v[i], -f.alpha) : slope;
            return g;
        }
    }
    return g;
}

}  // namespace fairmdp
