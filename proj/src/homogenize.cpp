#include "lamlab/homogenize.hpp"

#include "lamlab/errors.hpp"
#include "lamlab/parallel.hpp"
#include "lamlab/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace lamlab {

namespace {

// floor/ceil that treat values within 1e-9 of an integer as that integer, so that
// t / eps = 2.9999999999999996 snaps to 3.
long snap_floor(double x)
{
    const double r = std::round(x);
    return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? static_cast<long>(r)
                                                                : static_cast<long>(std::floor(x));
}

long snap_ceil(double x)
{
    const double r = std::round(x);
    return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? static_cast<long>(r)
                                                                : static_cast<long>(std::ceil(x));
}

void validate(const MicrostructureSpec& spec)
{
    const double l = spec.domain_side;
    if (!(l > 0.0)) {
        throw PreconditionError("domain side must be positive");
    }
    if (!(spec.epsilon > 0.0 && spec.epsilon <= l)) {
        throw PreconditionError("epsilon must lie in (0, l]");
    }
    if (!(spec.laminate_period > 0.0)) {
        throw PreconditionError("laminate period must be positive");
    }
    if (spec.bands.empty()) {
        throw PreconditionError("at least one shear band is required");
    }
    double prev = 0.0;
    for (const ShearBand& b : spec.bands) {
        if (!(b.t > prev)) {
            throw PreconditionError("band ends must increase from 0");
        }
        prev = b.t;
    }
    if (std::abs(prev - l) > 1e-12 * l) {
        throw PreconditionError("last band must end at the domain side");
    }
    if (std::abs(spec.rotation.det() - 1.0) > 1e-12 ||
        frobenius_distance(spec.rotation.transpose() * spec.rotation, Matrix2::identity()) > 1e-12) {
        throw PreconditionError("rotation must lie in SO(2)");
    }
    const double lam = spec.slip.lambda();
    const double feature = std::min(spec.epsilon * lam, spec.laminate_period * spec.epsilon * lam);
    if (spec.grid_n < 4.0 * l / feature * (1.0 - 1e-12)) {
        throw PreconditionError("grid_n = " + std::to_string(spec.grid_n) + " resolves the finest feature (" +
                                std::to_string(feature) + ") with fewer than 4 cells");
    }
}

}  // namespace

int grid_for(double epsilon, double laminate_period, double lambda, double side, int cells_per_feature)
{
    const double feature = std::min(epsilon * lambda, laminate_period * epsilon * lambda);
    return static_cast<int>(snap_ceil(cells_per_feature * side / feature));
}

Matrix2 soft_gradient(const Matrix2& rotation, double gamma, double lambda)
{
    return rotation * (Matrix2::identity() + (gamma / lambda) * outer({1.0, 0.0}, {0.0, 1.0}));
}

GradientField build_gradient_field(const MicrostructureSpec& spec, double tol)
{
    validate(spec);
    const SlipSystem& s = spec.slip;
    const double lam = s.lambda();
    const double eps = spec.epsilon;
    const double l = spec.domain_side;
    const double period = spec.laminate_period * eps * lam;

    GradientField field;
    field.n = spec.grid_n;
    field.side = l;
    field.palette.push_back(spec.rotation);

    const long n_layers = snap_ceil(l / eps) + 1;
    std::vector<int> layer_band(static_cast<std::size_t>(n_layers), -1);
    double prev = 0.0;
    for (std::size_t i = 0; i < spec.bands.size(); ++i) {
        const Matrix2 ni = soft_gradient(spec.rotation, spec.bands[i].gamma, lam);
        const LaminateDecomposition d = decompose(ni, s, tol);
        field.laminates.push_back(d);
        field.palette.push_back(d.f_plus);
        field.palette.push_back(d.f_minus);
        // Layers [k eps, (k+1) eps) inside the snapped band.
        const long kmin = snap_ceil(prev / eps);
        const long kmax = snap_floor(spec.bands[i].t / eps);
        for (long k = std::max(0L, kmin); k + 1 <= kmax && k < n_layers; ++k) {
            layer_band[static_cast<std::size_t>(k)] = static_cast<int>(i);
        }
        prev = spec.bands[i].t;
    }

    auto phase = [&](double x1, double x2) -> std::uint16_t {
        const double q = x2 / eps;
        const double kf = std::floor(q);
        if (q - kf >= lam) {
            return 0;
        }
        const long k = static_cast<long>(kf);
        if (k < 0 || k >= n_layers || layer_band[static_cast<std::size_t>(k)] < 0) {
            return 0;
        }
        const int b = layer_band[static_cast<std::size_t>(k)];
        const LaminateDecomposition& d = field.laminates[static_cast<std::size_t>(b)];
        const double u = (x1 * d.n.x + (x2 - kf * eps) * d.n.y) / period;
        const double fr = u - std::floor(u);
        return static_cast<std::uint16_t>(fr < d.mu ? 1 + 2 * b : 2 + 2 * b);
    };

    const int n = spec.grid_n;
    const double h = l / n;
    const double inset = 0.5 * h * (1.0 - 1e-9);
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    field.index.assign(cells, 0);
    field.soft.assign(cells, 0);
    field.flagged.assign(cells, 0);
    parallel_for(n, [&](int j) {
        const double x2 = (j + 0.5) * h;
        const double q = x2 / eps;
        const bool soft_row = q - std::floor(q) < lam;
        for (int i = 0; i < n; ++i) {
            const double x1 = (i + 0.5) * h;
            const std::size_t idx = static_cast<std::size_t>(j) * n + i;
            const std::uint16_t p = phase(x1, x2);
            field.index[idx] = p;
            field.soft[idx] = soft_row ? 1 : 0;
            const Matrix2& centre = field.palette[p];
            bool differs = false;
            for (const auto& [dx, dy] : {std::pair{-1, -1}, std::pair{1, -1}, std::pair{-1, 1}, std::pair{1, 1}}) {
                if (!(field.palette[phase(x1 + dx * inset, x2 + dy * inset)] == centre)) {
                    differs = true;
                    break;
                }
            }
            field.flagged[idx] = differs ? 1 : 0;
        }
    });
    return field;
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

EnergyReport energy_of_field(const GradientField& field, const MicrostructureSpec& spec)
{
    const SlipSystem& s = spec.slip;
    const double lam = s.lambda();
    const int n = field.n;
    const double area = field.cell_area();

    std::vector<double> w(field.palette.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = w_condensed(field.palette[k], s, 1e-6).as_double();
    }

    // Per row: energy, flagged area, four gradient entries.
    constexpr int kCols = 6;
    std::vector<std::array<double, kCols>> rows(static_cast<std::size_t>(n));
    parallel_for(n, [&](int j) {
        std::array<std::vector<double>, kCols> parts;
        for (auto& p : parts) {
            p.resize(static_cast<std::size_t>(n));
        }
        for (int i = 0; i < n; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * n + i;
            const Matrix2& f = field.palette[field.index[idx]];
            parts[0][i] = field.soft[idx] ? w[field.index[idx]] : 0.0;
            parts[1][i] = field.flagged[idx] ? 1.0 : 0.0;
            parts[2][i] = f.m11;
            parts[3][i] = f.m12;
            parts[4][i] = f.m21;
            parts[5][i] = f.m22;
        }
        for (int c = 0; c < kCols; ++c) {
            rows[static_cast<std::size_t>(j)][c] = pairwise_sum(parts[c]);
        }
    });
    std::array<double, kCols> totals{};
    std::vector<double> column(static_cast<std::size_t>(n));
    for (int c = 0; c < kCols; ++c) {
        for (int j = 0; j < n; ++j) {
            column[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)][c];
        }
        totals[c] = pairwise_sum(column);
    }

    EnergyReport r;
    r.epsilon = spec.epsilon;
    r.hlam = spec.laminate_period;
    r.e_eps = totals[0] * area;
    r.flagged_area = totals[1] * area;
    const double cells = static_cast<double>(n) * n;
    r.avg_gradient = {totals[2] / cells, totals[3] / cells, totals[4] / cells, totals[5] / cells};

    const double l = spec.domain_side;
    double weighted = 0.0;
    Matrix2 n_bar;
    double prev = 0.0;
    for (std::size_t i = 0; i < spec.bands.size(); ++i) {
        const double frac = (spec.bands[i].t - prev) / l;
        const Matrix2 ni = soft_gradient(spec.rotation, spec.bands[i].gamma, lam);
        const HomEnergy e = w_hom(ni, s, kDefaultTol);
        const double wi = e.is_known() ? e.value.as_double() : field.laminates[i].energy;
        weighted += frac * wi;
        n_bar = n_bar + frac * ni;
        prev = spec.bands[i].t;
    }
    r.target = lam * l * l * weighted;
    r.rel_error = std::abs(r.e_eps - r.target) / std::max(r.target, 1e-12);
    r.avg_gradient_target = lam * n_bar + (1.0 - lam) * spec.rotation;
    r.avg_gradient_deviation = frobenius_distance(r.avg_gradient, r.avg_gradient_target);
    return r;
}

std::vector<EnergyReport> epsilon_sweep(const MicrostructureSpec& base, const std::vector<double>& eps_list,
                                        int cells_per_feature)
{
    std::vector<EnergyReport> out;
    for (double eps : eps_list) {
        MicrostructureSpec spec = base;
        spec.epsilon = eps;
        spec.grid_n = grid_for(eps, base.laminate_period, base.slip.lambda(), base.domain_side, cells_per_feature);
        const GradientField field = build_gradient_field(spec);
        out.push_back(energy_of_field(field, spec));
    }
    return out;
}

std::vector<AveragingRow> averaging_check(const std::function<double(double, double)>& g, double mean_g,
                                          const std::vector<double>& eps_list, int grid_n)
{
    if (grid_n < 1) {
        throw PreconditionError("averaging_check needs grid_n >= 1");
    }
    std::vector<AveragingRow> out;
    const double h = 1.0 / grid_n;
    for (double eps : eps_list) {
        std::vector<double> rows(static_cast<std::size_t>(grid_n));
        parallel_for(grid_n, [&](int j) {
            std::vector<double> vals(static_cast<std::size_t>(grid_n));
            const double y2 = (j + 0.5) * h / eps;
            for (int i = 0; i < grid_n; ++i) {
                vals[static_cast<std::size_t>(i)] = g((i + 0.5) * h / eps, y2);
            }
            rows[static_cast<std::size_t>(j)] = pairwise_sum(vals);
        });
        const double mean = pairwise_sum(rows) / (static_cast<double>(grid_n) * grid_n);
        out.push_back({eps, std::abs(mean - mean_g)});
    }
    return out;
}

}  // namespace lamlab
