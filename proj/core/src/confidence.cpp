#include "fairmdp/confidence.hpp"

#include <cmath>
#include <stdexcept>

namespace fairmdp {

double transition_log_term(int S, int A, int H, int K, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    return std::log(12.0 * S * S * A * H * static_cast<double>(K) / delta);
}

double reward_log_term(int S, int A, int H, int N, int K, double delta) {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    return 2.0 * std::log(3.0 * S * A * H * N * static_cast<double>(K) / delta);
}

double reward_width(double log_term, long long n) {
    double m = static_cast<double>(n > 1 ? n : 1);
    return std::sqrt(log_term / m);
}

double transition_width(double log_term, double p_bar, long long n) {
    double m = static_cast<double>(n > 1 ? n : 1);
    return std::sqrt(4.0 * p_bar * (1.0 - p_bar) * log_term / m) + 14.0 * log_term / (3.0 * m);
}

}  // namespace fairmdp
