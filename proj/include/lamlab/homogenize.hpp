#pragma once

#include "lamlab/algebra2d.hpp"
#include "lamlab/energy.hpp"
#include "lamlab/laminate.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lamlab {

/// Shear gamma on x2 in (t_prev, t).
struct ShearBand {
    double gamma = 0.0;
    double t = 1.0;
};

struct MicrostructureSpec {
    SlipSystem slip = SlipSystem::from_theta(kPi / 4.0);
    Matrix2 rotation = Matrix2::identity();
    std::vector<ShearBand> bands{{0.0, 1.0}};
    double epsilon = 0.25;
    /// Laminate period as a fraction of the soft-layer thickness epsilon * lambda.
    double laminate_period = 0.25;
    double domain_side = 1.0;
    int grid_n = 256;
};

/// Cells per side giving at least `cells_per_feature` cells across both the soft
/// layer and the laminate period.
int grid_for(double epsilon, double laminate_period, double lambda, double side, int cells_per_feature);

/// N with lambda N + (1 - lambda) R = R (I + gamma e1 (x) e2).
Matrix2 soft_gradient(const Matrix2& rotation, double gamma, double lambda);

/// Cell-centred gradient pattern. Values live in a palette: entry 0 is R, band i
/// owns entries 1 + 2i (F+) and 2 + 2i (F-).
struct GradientField {
    int n = 0;
    double side = 1.0;
    std::vector<Matrix2> palette;
    std::vector<LaminateDecomposition> laminates;
    std::vector<std::uint16_t> index;   ///< row-major, row j = x2
    std::vector<std::uint8_t> soft;     ///< centre lies in a soft layer
    std::vector<std::uint8_t> flagged;  ///< a corner sees a different value than the centre

    const Matrix2& at(int i, int j) const { return palette[index[static_cast<std::size_t>(j) * n + i]]; }
    double cell_area() const { return (side / n) * (side / n); }
};

/// Throws PreconditionError on invalid bands or fewer than 4 cells across the finest feature.
GradientField build_gradient_field(const MicrostructureSpec& spec, double tol = kDefaultTol);

struct EnergyReport {
    double epsilon = 0.0;
    double hlam = 0.0;
    double e_eps = 0.0;
    double target = 0.0;
    double rel_error = 0.0;
    double flagged_area = 0.0;
    Matrix2 avg_gradient;
    Matrix2 avg_gradient_target;
    double avg_gradient_deviation = 0.0;  ///< Frobenius distance of the two averages
};

/// Soft-cell energy with W at membership tolerance 1e-6, against
/// lambda l^2 sum_i (t_i - t_{i-1}) / l W_hom(N_i). Where W_hom is only bounded the
/// target uses the laminate's achieved energy.
EnergyReport energy_of_field(const GradientField& field, const MicrostructureSpec& spec);

/// One report per epsilon; grid_n follows grid_for(..., cells_per_feature).
std::vector<EnergyReport> epsilon_sweep(const MicrostructureSpec& base, const std::vector<double>& eps_list,
                                        int cells_per_feature = 8);

/// Fixed-tree pairwise sum, independent of thread schedule.
double pairwise_sum(std::span<const double> values);

struct AveragingRow {
    double epsilon = 0.0;
    double deviation = 0.0;
};

/// |mean over (0,1)^2 of g(x / eps) - mean_g| by cell-centre sampling on grid_n^2 cells.
std::vector<AveragingRow> averaging_check(const std::function<double(double, double)>& g, double mean_g,
                                          const std::vector<double>& eps_list, int grid_n);

}  // namespace lamlab
