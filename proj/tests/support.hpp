#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/euler_lagrange.hpp"
#include "rftrack/config.hpp"
#include "rftrack/simulator.hpp"

namespace testing_support {

using namespace rftrack;

inline ArmModel reference_arm() { return reference_experiment().sim.model; }

inline oracle::Arm to_oracle(const ArmModel& m)
{
    return {m.link_lengths, m.link_masses, m.com_offsets, m.link_inertias, m.gravity};
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    Vec vec(int n, double lo, double hi)
    {
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }
    JointState state(int n) { return {vec(n, -std::numbers::pi, std::numbers::pi), vec(n, -2.0, 2.0)}; }

private:
    std::mt19937_64 rng_;
};

inline double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).norm() / std::max(b.norm(), 1e-12);
}

}  // namespace testing_support
