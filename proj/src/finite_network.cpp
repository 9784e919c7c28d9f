#include "viscolevy/finite_network.hpp"

namespace viscolevy {

double verify_evolution(const QuadraticFormPairD& pair, const MatrixMaterialD& material,
                        std::span<const LoadHistory> loads, const TimeGrid& grid,
                        const EvolutionOptions& options) {
    validate(pair);
    if (grid.start != 0.0) throw GridMismatch("evolution grid must start at t = 0");
    const auto m = static_cast<Eigen::Index>(pair.observables.size());
    if (material.dim != m || static_cast<Eigen::Index>(loads.size()) != m)
        throw InvalidArgument("material and loads must match the observable count");

    const auto eig = generalized_eigen<double>(pair.A, pair.B);
    const double fastest = eig.eigenvalues.maxCoeff();
    if (fastest > 0.0 && 1.0 / fastest < options.min_resolvable_time)
        throw StepSizeError("fastest relaxation time " + std::to_string(1.0 / fastest) +
                            " is below the resolvable floor " +
                            std::to_string(options.min_resolvable_time));

    const double h = grid.step;
    const auto n = pair.A.rows();
    const Eigen::MatrixXd stepper = pair.B + h * pair.A;
    Eigen::LLT<Eigen::MatrixXd> solver(stepper);
    if (solver.info() != Eigen::Success) throw StepSizeError("implicit Euler matrix is singular");

    const auto expected = respond_creep(material, loads, grid);
    Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
    double residual = expected.front().cwiseAbs().maxCoeff();
    Eigen::VectorXd force(n);
    for (std::size_t i = 1; i < grid.count; ++i) {
        force.setZero();
        for (Eigen::Index j = 0; j < m; ++j)
            force(pair.observables[j]) = loads[static_cast<std::size_t>(j)].value(grid[i]);
        q = solver.solve(pair.B * q + h * force);
        for (Eigen::Index j = 0; j < m; ++j)
            residual = std::max(residual, std::abs(q(pair.observables[j]) - expected[i](j)));
    }
    return residual;
}

}  // namespace viscolevy
