#pragma once

#include "gpftk/integer.hpp"

#include <cmath>
#include <span>

namespace gpftk::bounds {

// Free constants of the bound shapes.  The underlying theorems are
// ineffective, so these are always caller-supplied.
struct BoundParams {
    double kappa = 1.0;
    double epsilon = 0.5;
    double mu = 1.0;

    void validate() const {
        if (!(kappa > 0) || !(epsilon > 0) || !(mu > 0))
            throw domain_error("BoundParams: all constants must be positive");
    }
};

// log*_k(t): the k-th iterate of log when defined and >= 1, otherwise 1.
inline double iter_log(unsigned k, double t) {
    if (k < 1) throw domain_error("iter_log: k must be >= 1");
    double v = t;
    for (unsigned i = 0; i < k; ++i) {
        if (!(v > 0)) return 1.0;
        v = std::log(v);
    }
    return v >= 1.0 ? v : 1.0;
}

// exp(kappa * sqrt(log N * log*_2 N))
inline double szpiro_shape(double N, double kappa) {
    if (!(N >= 2)) throw domain_error("szpiro_shape: N must be >= 2");
    if (!(kappa > 0)) throw domain_error("szpiro_shape: kappa must be positive");
    return std::exp(kappa * std::sqrt(std::log(N) * iter_log(2, N)));
}

// kappa * (log*_2 n)^2 / log*_3 n
inline double gpf_shape(double n, double kappa) {
    if (!(n >= 2)) throw domain_error("gpf_shape: n must be >= 2");
    if (!(kappa > 0)) throw domain_error("gpf_shape: kappa must be positive");
    double l2 = iter_log(2, n);
    return kappa * l2 * l2 / iter_log(3, n);
}

// exp(gpf_shape)
inline double radical_shape(double n, double kappa) { return std::exp(gpf_shape(n, kappa)); }

// (log*_2 n)(log*_3 n)/(log*_4 n)
inline double stewart_yu_shape(double n) {
    if (!(n >= 2)) throw domain_error("stewart_yu_shape: n must be >= 2");
    return iter_log(2, n) * iter_log(3, n) / iter_log(4, n);
}

// B = exp(sqrt(log* R * log*_2 R))
inline double b_of_r(double R) {
    if (!(R >= 2)) throw domain_error("b_of_r: R must be >= 2");
    return std::exp(std::sqrt(iter_log(1, R) * iter_log(2, R)));
}

// kappa * N log N
inline double murty_pasten_rhs(double N, double kappa) {
    if (!(N >= 2)) throw domain_error("murty_pasten_rhs: N must be >= 2");
    if (!(kappa > 0)) throw domain_error("murty_pasten_rhs: kappa must be positive");
    return kappa * N * std::log(N);
}

// kappa * N^(11/2 + epsilon)
inline double shimura_rhs(double N, double kappa, double epsilon) {
    if (!(N >= 2)) throw domain_error("shimura_rhs: N must be >= 2");
    if (!(kappa > 0) || !(epsilon > 0)) throw domain_error("shimura_rhs: bad parameters");
    return kappa * std::pow(N, 5.5 + epsilon);
}

// kappa^m * (Nv / log Nv) * log max(e, Nv * h_xi) * prod h_gens
inline double lfl_rhs(double kappa, unsigned m, double norm_v, double h_xi,
                      std::span<const double> h_gens) {
    if (m < 1) throw domain_error("lfl_rhs: m must be >= 1");
    if (h_gens.size() != m) throw domain_error("lfl_rhs: h_gens size must equal m");
    if (!(norm_v >= 2)) throw domain_error("lfl_rhs: norm must be >= 2");
    if (!(kappa > 0) || !(h_xi > 0)) throw domain_error("lfl_rhs: bad parameters");
    double acc = std::pow(kappa, static_cast<double>(m));
    acc *= norm_v / std::log(norm_v);
    acc *= std::log(std::max(std::exp(1.0), norm_v * h_xi));
    for (double h : h_gens) acc *= h;
    return acc;
}

}  // namespace gpftk::bounds
