#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace omegalab::flows {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.1;
    double min_step = 1e-12;

    /// Same tolerances, no cap on the step: for slow tails where steps grow
    /// as the vector field collapses.
    static IntegratorConfig long_horizon() {
        IntegratorConfig cfg;
        cfg.max_step = std::numeric_limits<double>::infinity();
        return cfg;
    }

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("integrator tolerances must be positive");
        if (!(min_step > 0.0) || !(min_step <= max_step)) {
            throw std::invalid_argument("integrator steps must satisfy 0 < min_step <= max_step");
        }
    }
};

/// Thrown when step-size control drives the step below min_step. Carries the
/// last accepted time and state.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, std::vector<double> state)
        : std::runtime_error(what), t_(t), state_(std::move(state)) {}

    double time() const { return t_; }
    const std::vector<double>& state() const { return state_; }

private:
    double t_;
    std::vector<double> state_;
};

template <std::size_t N>
struct IntegrationResult {
    double t = 0.0;
    std::array<double, N> y{};
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    bool stopped = false;  // observer asked to stop before t_end
};

/// Adaptive Dormand-Prince 5(4) pair with local extrapolation.
///
/// - `project` is applied to every accepted state (e.g. clamping to a domain).
/// - `step_cap(t, y)` bounds the next step on top of cfg.max_step.
/// - `observe(t, y)` is called after every accepted step; returning false stops.
template <std::size_t N>
class DormandPrince {
public:
    using State = std::array<double, N>;
    using Rhs = std::function<State(double, const State&)>;

    std::function<void(State&)> project;
    std::function<double(double, const State&)> step_cap;
    std::function<bool(double, const State&)> observe;
    std::size_t max_steps = 10'000'000;

    IntegrationResult<N> integrate(const Rhs& f, State y, double t0, double t1, const IntegratorConfig& cfg) const {
        cfg.validate();
        IntegrationResult<N> res;
        res.t = t0;
        res.y = y;
        if (!(t1 >= t0)) throw std::invalid_argument("integration end precedes start");
        if (t1 == t0) return res;

        double t = t0;
        double h = std::min({cfg.max_step, t1 - t0, 1e-2});
        State k1 = f(t, y);

        while (t < t1) {
            if (res.accepted + res.rejected >= max_steps) {
                throw IntegrationError("integrator exceeded its step budget", t, {y.begin(), y.end()});
            }
            double cap = cfg.max_step;
            if (step_cap) cap = std::min(cap, step_cap(t, y));
            const double remaining = t1 - t;
            h = std::min({h, cap, remaining});
            // do not leave a sliver the next step cannot resolve
            if (remaining - h < cfg.min_step) h = remaining;

            State y_new{};
            State err{};
            State k7{};
            step(f, t, y, k1, h, y_new, err, k7);

            double norm = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
                norm = std::max(norm, std::fabs(err[i]) / scale);
            }
            if (!std::isfinite(norm)) norm = 1e10;

            if (norm <= 1.0) {
                t = (h == remaining) ? t1 : t + h;
                y = y_new;
                if (project) {
                    project(y);
                    k1 = f(t, y);
                } else {
                    k1 = k7;
                }
                ++res.accepted;
                h *= norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
                if (observe && !observe(t, y)) {
                    res.stopped = true;
                    break;
                }
            } else {
                ++res.rejected;
                h *= std::max(0.2, 0.9 * std::pow(norm, -0.25));
                if (h < cfg.min_step) {
                    throw IntegrationError("step size fell below min_step", t, {y.begin(), y.end()});
                }
            }
        }
        res.t = t;
        res.y = y;
        return res;
    }

private:
    static void step(const Rhs& f, double t, const State& y, const State& k1, double h, State& y_new, State& err,
                     State& k7) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        // b - b_hat
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        State tmp{};
        auto combine = [&](auto&&... terms) {
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (... + (terms.first * (*terms.second)[i]));
            return tmp;
        };
        using P = std::pair<double, const State*>;

        const State k2 = f(t + c2 * h, combine(P{a21, &k1}));
        const State k3 = f(t + c3 * h, combine(P{a31, &k1}, P{a32, &k2}));
        const State k4 = f(t + c4 * h, combine(P{a41, &k1}, P{a42, &k2}, P{a43, &k3}));
        const State k5 = f(t + c5 * h, combine(P{a51, &k1}, P{a52, &k2}, P{a53, &k3}, P{a54, &k4}));
        const State k6 = f(t + h, combine(P{a61, &k1}, P{a62, &k2}, P{a63, &k3}, P{a64, &k4}, P{a65, &k5}));
        y_new = combine(P{b1, &k1}, P{b3, &k3}, P{b4, &k4}, P{b5, &k5}, P{b6, &k6});
        k7 = f(t + h, y_new);
        for (std::size_t i = 0; i < N; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        }
    }
};

}  // namespace omegalab::flows
