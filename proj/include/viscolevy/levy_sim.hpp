#pragma once

// Monte Carlo side of the material <-> process correspondence.
//
// A scalar material f = L + K t + sum w (1 - e^{-x t}) + stable part is the
// Laplace exponent (shifted by L) of the subordinator started at L with drift
// K, jumps of size x at intensity w, and a one-sided stable component:
//
//   E[exp(-lambda (X_tau - X_0))] = exp(-tau phi(lambda)),  phi = f - L.
//
// A finite-activity process Y in R^m with start Y0, Gaussian covariance Sigma
// and jump atoms (y, intensity) maps back to the matrix material
//
//   f_ij(t) = Y0_i Y0_j + t Sigma_ij + sum intensity (1 - e^{-t|y|^2}) y_i y_j / |y|^2.
//
// Randomness: path k draws from its own mt19937_64 stream seeded from
// (seed, k), so results depend on (seed, path count) but never on the number
// of worker threads.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "viscolevy/bernstein.hpp"
#include "viscolevy/matrix_material.hpp"
#include "viscolevy/numerics.hpp"

namespace viscolevy {

struct SubordinatorSpec {
    double start = 0.0;  ///< X_0 = L
    double drift = 0.0;  ///< K
    LevyMeasure levy;    ///< atoms read as (jump size, intensity)
    friend bool operator==(const SubordinatorSpec&, const SubordinatorSpec&) = default;
};

/// Local characteristics of a finite-activity process with independent
/// increments. The drift of the Levy-Khintchine triple does not enter the
/// material map and is not carried.
struct PaisCharacteristics {
    Eigen::VectorXd start;  ///< Y0
    Eigen::MatrixXd sigma;  ///< Gaussian covariance per unit time, symmetric PSD
    struct JumpAtom {
        Eigen::VectorXd point;  ///< jump y != 0
        double intensity = 0.0;
    };
    std::vector<JumpAtom> jump_atoms;

    Eigen::Index dim() const { return start.size(); }
};

/// Throws InvalidArgument for mismatched sizes, non-PSD sigma, zero jump
/// points or non-positive intensities.
void validate(const PaisCharacteristics& c);

struct JumpRecord {
    double time = 0.0;
    Eigen::VectorXd size;
};

struct Path {
    std::vector<double> times;  ///< increasing, times.front() = 0, times.back() = horizon
    Eigen::MatrixXd values;     ///< dim x times.size()
    std::vector<JumpRecord> jumps;
    bool has_jump_records = true;
    /// Continuous (Gaussian) part at the horizon, Y^c_tau, and its realized
    /// quadratic variation over the recorded increments.
    Eigen::VectorXd continuous_terminal;
    Eigen::MatrixXd continuous_realized_qv;

    Eigen::Index dim() const { return values.rows(); }
    double horizon() const { return times.back(); }
    /// Right-continuous step reconstruction from the recorded values.
    Eigen::VectorXd value_at(double t) const;
};

struct SimulationOptions {
    unsigned workers = 1;
    /// Recording steps on [0, horizon]; stable increments and the Gaussian
    /// part are sampled on this grid, atom jumps at their exact times.
    std::size_t record_steps = 64;
};

/// Field-identity bijection with analytic materials (Composed, Sum and
/// Sampled materials are rejected with UnsupportedRepresentation).
SubordinatorSpec subordinator_from_material(const Material& material);
Material material_from_subordinator(const SubordinatorSpec& spec);

/// phi(lambda) = K lambda + sum w (1 - e^{-lambda x}) + c lambda^alpha / Gamma(1 + alpha).
double laplace_exponent(const SubordinatorSpec& spec, double lambda);

/// Exact in distribution: event-driven compound Poisson jumps and
/// Chambers-Mallows-Stuck stable increments on the recording grid.
Path sample_path(const SubordinatorSpec& spec, double horizon, std::uint64_t seed,
                 const SimulationOptions& options = {});

/// Draws S with E[exp(-lambda S)] = exp(-lambda^alpha), alpha in (0, 1).
template <typename Rng>
double sample_positive_stable(double alpha, Rng& rng);

struct McEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    double analytic = 0.0;
    std::size_t paths = 0;
};

/// Mean of exp(-lambda (X_tau - X_0)) over n_paths paths against
/// exp(-tau phi(lambda)).
McEstimate mc_laplace_check(const SubordinatorSpec& spec, double lambda, double tau,
                            std::size_t n_paths, std::uint64_t seed,
                            const SimulationOptions& options = {});

/// Closed-form matrix material of a finite-activity process (atoms at rates
/// |y|^2 carrying intensity y y^T / |y|^2, drift Sigma, constant Y0 Y0^T).
MatrixMaterialD material_from_characteristics(const PaisCharacteristics& c);

/// Scalar material -> characteristics with Y0 = +sqrt(L), Sigma = K and
/// atom (lambda, w) -> jump sqrt(lambda) at intensity w. Atoms only.
PaisCharacteristics characteristics_from_material(const Material& material);

/// Brownian part with covariance t Sigma on n_gauss_steps increments plus
/// compound Poisson jumps recorded at their exact times.
Path sample_pais_path(const PaisCharacteristics& c, double horizon, std::size_t n_gauss_steps,
                      std::uint64_t seed);

enum class ContinuousTerm {
    terminal_square,    ///< t Y^c_1 (Y^c_1)^T, the recorded terminal value
    realized_variance,  ///< t sum of squared recorded increments of Y^c
};

struct MaterialEstimate {
    std::vector<double> times;
    std::vector<Eigen::MatrixXd> mean;
    std::vector<Eigen::MatrixXd> stderr_;
    std::size_t paths = 0;
};

/// Path average of Y0 Y0^T + t C + sum_jumps (1 - e^{-t|dY|^2}) dY dY^T / |dY|^2,
/// with C from `term`. Paths must have horizon 1 and jump records
/// (MissingJumpRecords otherwise).
MaterialEstimate estimate_material_from_paths(std::span<const Path> paths,
                                              std::span<const double> times,
                                              ContinuousTerm term = ContinuousTerm::terminal_square,
                                              unsigned workers = 1);

/// Same estimator, generating paths on the fly without storing them.
MaterialEstimate estimate_material(const PaisCharacteristics& c, std::span<const double> times,
                                   std::size_t n_paths, std::uint64_t seed,
                                   std::size_t n_gauss_steps = 8,
                                   ContinuousTerm term = ContinuousTerm::terminal_square,
                                   unsigned workers = 1);

/// Stream seed for path `index` (splitmix64 mixing).
std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------

template <typename Rng>
double sample_positive_stable(double alpha, Rng& rng) {
    constexpr double pi = 3.14159265358979323846;
    double u = 0.0;
    while (u == 0.0) u = std::generate_canonical<double, 53>(rng);
    u *= pi;
    double e = 0.0;
    while (e == 0.0) e = -std::log1p(-std::generate_canonical<double, 53>(rng));
    const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
    const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
    return a * b;
}

}  // namespace viscolevy
