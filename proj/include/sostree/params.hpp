#ifndef SOSTREE_PARAMS_HPP
#define SOSTREE_PARAMS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace sostree {

// Nearest-neighbour coupling J, one-level next-nearest-neighbour coupling J1
// (both in energy units, either sign) and inverse temperature beta > 0.
struct CouplingParams {
    double J;
    double J1;
    double beta;

    CouplingParams(double J_, double J1_, double beta_) : J(J_), J1(J1_), beta(beta_) {
        if (!std::isfinite(J) || !std::isfinite(J1))
            throw std::invalid_argument("CouplingParams: couplings must be finite");
        if (!std::isfinite(beta) || beta <= 0.0)
            throw std::invalid_argument("CouplingParams: beta must be positive, got " +
                                        std::to_string(beta_));
    }
};

// Boltzmann weights theta = exp(beta*J), theta1 = exp(beta*J1). Everything
// downstream works in these coordinates; J and beta never reappear.
struct ThetaParams {
    double theta;
    double theta1;

    ThetaParams(double theta_, double theta1_) : theta(theta_), theta1(theta1_) {
        if (!std::isfinite(theta) || theta <= 0.0 || !std::isfinite(theta1) || theta1 <= 0.0)
            throw std::invalid_argument("ThetaParams: weights must be positive and finite");
    }

    static ThetaParams from_couplings(const CouplingParams& c) {
        return ThetaParams(std::exp(c.beta * c.J), std::exp(c.beta * c.J1));
    }
};

// Root probability ratios u = Z1/Z0, v = Z2/Z0. State of the ratio map.
struct RootRatios {
    double u;
    double v;

    RootRatios(double u_, double v_) : u(u_), v(v_) {
        if (!std::isfinite(u) || u <= 0.0 || !std::isfinite(v) || v <= 0.0)
            throw std::invalid_argument("RootRatios: ratios must be positive and finite");
    }
};

} // namespace sostree

#endif
