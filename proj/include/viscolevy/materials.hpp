#pragma once

#include <span>
#include <vector>

#include "viscolevy/bernstein.hpp"
#include "viscolevy/matrix_material.hpp"
#include "viscolevy/numerics.hpp"

namespace viscolevy {

// Dictionary constructors. Parameters follow the impulse responses:
//   spring(a)          f = 1/a
//   dashpot(a)         f = a t
//   maxwell(G, eta)    f = 1/G + t/eta
//   kelvin_voigt(a, b) f = (1/a)(1 - exp(-(a/b) t))
//   stable_material    f = c t^alpha / (alpha Gamma(alpha))
// A dashpot of viscosity eta is dashpot(1 / eta).
Material spring(double a);
Material dashpot(double a);
Material maxwell(double modulus, double viscosity);
Material kelvin_voigt(double a, double b);
Material stable_material(double alpha, double c);
Material prony(double constant_L, double drift_K, std::vector<LevyAtom> atoms);

/// Series coupling: impulse responses add.
Material series(const Material& first, const Material& second);

/// Parallel coupling: relaxation functions add. Exact for atoms-only and
/// pure stable (same index) inputs; throws UnsupportedRepresentation otherwise.
Material parallel(const Material& first, const Material& second);

/// As above, falling back to a sampled impulse response on `grid` when no
/// exact conjugate exists.
Material parallel(const Material& first, const Material& second, const TimeGrid& grid);

struct LoadStep {
    double time = 0.0;
    double jump = 0.0;
};

struct LoadRamp {
    double start = 0.0;
    double end = 1.0;
    double rate = 0.0;
};

/// Piecewise load: jumps at given times plus constant-rate ramps on [start, end).
class LoadHistory {
public:
    LoadHistory() = default;
    /// Validates (times >= 0, start < end) and orders by time.
    LoadHistory(std::vector<LoadStep> steps, std::vector<LoadRamp> ramps);

    static LoadHistory unit_step(double time = 0.0) { return LoadHistory({{time, 1.0}}, {}); }

    const std::vector<LoadStep>& steps() const { return steps_; }
    const std::vector<LoadRamp>& ramps() const { return ramps_; }

    /// Q(t), right-continuous.
    double value(double t) const;
    /// Rate of the active ramps at t (right-continuous).
    double rate(double t) const;

    LoadHistory scaled(double factor) const;
    /// Superposition of two histories.
    LoadHistory operator+(const LoadHistory& other) const;

private:
    std::vector<LoadStep> steps_;
    std::vector<LoadRamp> ramps_;
};

/// q(t) = int_[0,t] f(t - tau) dQ(tau) on the grid. Ramp windows are
/// integrated by the trapezoid rule with panels no wider than grid.step.
std::vector<double> respond_creep(const Material& material, const LoadHistory& load,
                                  const TimeGrid& grid);

/// Vector version for an m x m material: loads[j] drives observable j.
std::vector<Eigen::VectorXd> respond_creep(const MatrixMaterialD& material,
                                           std::span<const LoadHistory> loads,
                                           const TimeGrid& grid);

struct Impulse {
    double time = 0.0;
    double mass = 0.0;
};

struct RelaxationResponse {
    std::vector<double> values;     ///< regular part of Q on the grid
    std::vector<Impulse> impulses;  ///< beta delta_0 hits from strain jumps
    double beta = 0.0;
};

/// Q(t) = int_[0,t] r(t - tau) dq(tau). Exact relaxation representation when
/// available (atoms-only or pure stable), numeric inversion otherwise.
RelaxationResponse respond_relaxation(const Material& material, const LoadHistory& strain,
                                      const TimeGrid& grid);

}  // namespace viscolevy
