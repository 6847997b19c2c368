#include "lamlab/cli.hpp"

#include "lamlab/errors.hpp"
#include "lamlab/homogenize.hpp"
#include "lamlab/laminate.hpp"
#include "lamlab/oracle.hpp"
#include "lamlab/regions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace lamlab {

using ojson = nlohmann::ordered_json;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<double> parse_numbers(const std::string& text, char sep, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError(what + ": cannot parse '" + item + "' as a number");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
            ++used;
        }
        if (used != item.size() || !std::isfinite(v)) {
            throw UsageError(what + ": cannot parse '" + item + "' as a number");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> parse_fixed(const std::string& text, std::size_t count, const std::string& what)
{
    std::vector<double> v = parse_numbers(text, ',', what);
    if (v.size() != count) {
        throw UsageError(what + ": expected " + std::to_string(count) + " comma-separated numbers");
    }
    return v;
}

Vector2 vector_from_json(const nlohmann::json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw InvalidSlipSystem(std::string("config: slip.") + key + " must be a two-number array");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

ojson energy_json(double x)
{
    if (std::isinf(x)) {
        return "inf";
    }
    return x;
}

ojson matrix_json(const Matrix2& m) { return ojson::array({m.m11, m.m12, m.m21, m.m22}); }

// Writes to --out if given, else to the command stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw UsageError("cannot open output file '" + path + "'");
            }
            stream_ = &file_;
        }
    }
    std::ostream& os() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

std::string csv_energy(double x) { return format_number(x); }

struct Flags {
    std::string config_path;
    std::optional<double> theta;
    std::string v1;
    std::string v2;
    std::optional<double> lambda;
    std::optional<double> tol;
    std::optional<double> laminate_tol;
    std::optional<double> range;
    std::optional<int> n;
    std::optional<int> n_dirs;
};

Config resolve(const Flags& f)
{
    Config c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path, std::ios::binary);
        if (!in) {
            throw UsageError("cannot read config file '" + f.config_path + "'");
        }
        std::stringstream buf;
        buf << in.rdbuf();
        c = parse_config(buf.str());
    }
    if (f.theta) {
        c.theta = *f.theta;
        c.explicit_vectors = false;
    }
    if (!f.v1.empty() || !f.v2.empty()) {
        if (f.v1.empty() || f.v2.empty()) {
            throw UsageError("--v1 and --v2 must be given together");
        }
        const auto a = parse_fixed(f.v1, 2, "--v1");
        const auto b = parse_fixed(f.v2, 2, "--v2");
        c.v1 = {a[0], a[1]};
        c.v2 = {b[0], b[1]};
        c.explicit_vectors = true;
    }
    if (f.lambda) c.lambda = *f.lambda;
    if (f.tol) c.manifold_tol = *f.tol;
    if (f.laminate_tol) c.laminate_tol = *f.laminate_tol;
    if (f.range) c.range = *f.range;
    if (f.n) c.n = *f.n;
    if (f.n_dirs) c.n_dirs = *f.n_dirs;
    if (!(c.manifold_tol > 0.0) || !(c.laminate_tol > 0.0)) {
        throw UsageError("tolerances must be positive");
    }
    if (!(c.range > 0.0) || c.n < 1) {
        throw UsageError("grid needs range > 0 and n >= 1");
    }
    return c;
}

Matrix2 target_matrix(const std::string& matrix, const std::string& bc)
{
    if (matrix.empty() == bc.empty()) {
        throw UsageError("give exactly one of --matrix and --bc");
    }
    if (!matrix.empty()) {
        const auto m = parse_fixed(matrix, 4, "--matrix");
        return {m[0], m[1], m[2], m[3]};
    }
    const auto v = parse_fixed(bc, 2, "--bc");
    return bc_to_matrix(v[0], v[1]);
}

void require_det_one(const Matrix2& f, double tol)
{
    if (std::abs(f.det() - 1.0) > tol) {
        throw OffManifold("|det F - 1| = " + format_number(std::abs(f.det() - 1.0)) + " exceeds tolerance " +
                          format_number(tol));
    }
}

std::vector<ShearBand> parse_bands(const std::string& text)
{
    std::vector<ShearBand> bands;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_numbers(item, ':', "--gamma-bands");
        if (v.size() != 2) {
            throw UsageError("--gamma-bands: each band is gamma:t_end");
        }
        bands.push_back({v[0], v[1]});
    }
    if (bands.empty()) {
        throw UsageError("--gamma-bands: no bands given");
    }
    return bands;
}

}  // namespace

SlipSystem Config::slip() const
{
    return explicit_vectors ? SlipSystem::from_vectors(v1, v2, lambda) : SlipSystem::from_theta(theta, lambda);
}

Config parse_config(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidSlipSystem(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw InvalidSlipSystem("config: top level must be an object");
    }
    Config c;
    auto number = [](const nlohmann::json& node, const char* name) {
        if (!node.is_number()) {
            throw InvalidSlipSystem(std::string("config: ") + name + " must be a number");
        }
        return node.get<double>();
    };
    auto integer = [](const nlohmann::json& node, const char* name) {
        if (!node.is_number_integer()) {
            throw InvalidSlipSystem(std::string("config: ") + name + " must be an integer");
        }
        return node.get<int>();
    };
    if (j.contains("slip")) {
        const auto& s = j["slip"];
        if (!s.is_object()) {
            throw InvalidSlipSystem("config: slip must be an object");
        }
        if (s.contains("theta") && (s.contains("v1") || s.contains("v2"))) {
            throw InvalidSlipSystem("config: slip takes either theta or v1/v2, not both");
        }
        if (s.contains("theta")) {
            c.theta = number(s["theta"], "slip.theta");
        } else if (s.contains("v1") && s.contains("v2")) {
            c.v1 = vector_from_json(s["v1"], "v1");
            c.v2 = vector_from_json(s["v2"], "v2");
            c.explicit_vectors = true;
        } else {
            throw InvalidSlipSystem("config: slip needs theta or both v1 and v2");
        }
    }
    if (j.contains("lambda")) c.lambda = number(j["lambda"], "lambda");
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("manifold")) c.manifold_tol = number(t["manifold"], "tolerances.manifold");
        if (t.contains("laminate")) c.laminate_tol = number(t["laminate"], "tolerances.laminate");
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("range")) c.range = number(g["range"], "grid.range");
        if (g.contains("n")) c.n = integer(g["n"], "grid.n");
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        if (o.contains("n_dirs")) c.n_dirs = integer(o["n_dirs"], "oracle.n_dirs");
    }
    // Validate eagerly so the diagnostic names the broken invariant.
    (void)c.slip();
    return c;
}

std::string format_number(double x)
{
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"lamlab: relaxed two-slip energies, laminates and homogenization"};
    app.require_subcommand(1);
    app.footer(
        "Slip convention for --theta: v3 = (0,-1), v1 = (sin t, cos t), v2 = (-sin t, cos t).\n"
        "--matrix a,b,c,d is row-major [[a,b],[c,d]].\n"
        "Exit codes: 0 ok, 2 usage/config error, 3 domain error.");

    Flags flags;
    app.add_option("--config", flags.config_path, "JSON config file");
    app.add_option("--theta", flags.theta, "half-angle between the slips, in [pi/4, pi/2)");
    app.add_option("--v1", flags.v1, "first slip direction x,y");
    app.add_option("--v2", flags.v2, "second slip direction x,y");
    app.add_option("--lambda", flags.lambda, "soft volume fraction in (0,1)");
    app.add_option("--tol", flags.tol, "manifold membership tolerance");
    app.add_option("--laminate-tol", flags.laminate_tol, "laminate tolerance");
    app.add_option("--range", flags.range, "(b,c) grid half-width");
    app.add_option("--n", flags.n, "(b,c) grid cells per side");
    app.add_option("--n-dirs", flags.n_dirs, "oracle directions");

    std::string matrix;
    std::string bc;
    std::string out_path;

    auto* classify_cmd = app.add_subcommand("classify", "region and relaxed energy of one matrix");
    auto* laminate_cmd = app.add_subcommand("laminate", "laminate decomposition of one matrix");
    for (auto* cmd : {classify_cmd, laminate_cmd}) {
        cmd->add_option("--matrix", matrix, "a,b,c,d");
        cmd->add_option("--bc", bc, "b,c");
    }

    bool no_refine = false;
    auto* verify_cmd = app.add_subcommand("verify-envelope", "oracle against closed forms on the (b,c) grid");
    verify_cmd->add_flag("--no-refine", no_refine, "skip golden-section refinement");

    auto* regionmap_cmd = app.add_subcommand("regionmap", "region labels and energies on the (b,c) grid");

    double zmax = 3.0;
    int samples = 301;
    auto* hplot_cmd = app.add_subcommand("hplot", "h, h*, h_perp, h_perp* on [0, zmax]");
    hplot_cmd->add_option("--zmax", zmax, "largest z");
    hplot_cmd->add_option("--samples", samples, "number of z values");

    std::string bands_text = "0.4:1";
    std::string eps_text = "0.25,0.125,0.0625,0.03125";
    double hlam = 0.25;
    int cells_per_feature = 8;
    double rotation_angle = 0.0;
    auto* homog_cmd = app.add_subcommand("homogenize", "energy of the layered microstructure over an epsilon sweep");
    homog_cmd->add_option("--gamma-bands", bands_text, "gamma:t_end,... over (0,1)");
    homog_cmd->add_option("--eps-list", eps_text, "comma-separated layer periods");
    homog_cmd->add_option("--hlam", hlam, "laminate period as a fraction of eps*lambda");
    homog_cmd->add_option("--cells-per-feature", cells_per_feature, "grid resolution of the finest feature");
    homog_cmd->add_option("--rotation", rotation_angle, "angle of R in radians");

    std::string gamma_range = "-2:2:401";
    auto* whomgamma_cmd = app.add_subcommand("whomgamma", "W_hom(gamma) along simple shears (orthogonal slips)");
    whomgamma_cmd->add_option("--gamma-range", gamma_range, "a:b:n");

    for (auto* cmd : {classify_cmd, laminate_cmd, verify_cmd, regionmap_cmd, hplot_cmd, homog_cmd, whomgamma_cmd}) {
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const Config cfg = resolve(flags);
        const SlipSystem s = cfg.slip();
        Sink sink(out_path, out);
        std::ostream& os = sink.os();

        if (classify_cmd->parsed()) {
            const Matrix2 f = target_matrix(matrix, bc);
            require_det_one(f, cfg.manifold_tol);
            const RegionLabel label = classify(f, s, cfg.manifold_tol);
            const HomEnergy e = w_hom(f, s, cfg.manifold_tol);
            ojson j;
            j["region"] = std::string(to_string(label.tag));
            ojson boundary = ojson::array();
            for (Region r : label.boundary) {
                boundary.push_back(std::string(to_string(r)));
            }
            j["boundary"] = boundary;
            if (e.is_known()) {
                j["whom"] = energy_json(e.value.as_double());
            } else {
                j["whom"] = nullptr;
                j["bounds"] = {{"lower", e.lower}, {"upper", e.upper}};
            }
            j["det_residual"] = std::abs(f.det() - 1.0);
            os << j.dump(2) << "\n";
        } else if (laminate_cmd->parsed()) {
            const Matrix2 f = target_matrix(matrix, bc);
            require_det_one(f, cfg.manifold_tol);
            const LaminateDecomposition d = decompose(f, s, cfg.laminate_tol);
            const DecompositionResiduals r = verify_decomposition(d, f, s);
            ojson j;
            j["kind"] = std::string(to_string(d.kind));
            j["f_plus"] = matrix_json(d.f_plus);
            j["f_minus"] = matrix_json(d.f_minus);
            j["mu"] = d.mu;
            j["a"] = ojson::array({d.a.x, d.a.y});
            j["n"] = ojson::array({d.n.x, d.n.y});
            j["energy"] = d.energy;
            j["tangency"] = d.tangency;
            j["tie"] = d.tie;
            j["residuals"] = {{"convex_combination", r.convex_combination},
                              {"rank_one", r.rank_one},
                              {"manifold", r.manifold},
                              {"energy_equality", r.energy_equality},
                              {"preserved_vector", r.preserved_vector}};
            os << j.dump(2) << "\n";
        } else if (verify_cmd->parsed()) {
            OracleOptions opt;
            opt.n_dirs = cfg.n_dirs;
            opt.refine = !no_refine;
            const auto rows = envelope_scan(s, cfg.range, cfg.n, opt, cfg.manifold_tol);
            os << "b,c,region,closed,oracle,discrepancy,slack_lo,slack_hi\n";
            for (const EnvelopeRow& r : rows) {
                os << format_number(r.b) << ',' << format_number(r.c) << ',' << to_string(r.region) << ',';
                if (r.known) {
                    os << csv_energy(r.closed) << ',' << csv_energy(r.oracle) << ',' << format_number(r.discrepancy)
                       << ",,\n";
                } else {
                    os << ',' << csv_energy(r.oracle) << ",," << format_number(r.slack_lo) << ','
                       << format_number(r.slack_hi) << '\n';
                }
            }
        } else if (regionmap_cmd->parsed()) {
            const auto cells = region_map(s, cfg.range, cfg.n, cfg.manifold_tol);
            os << "b,c,region,boundary,whom,lower,upper\n";
            for (const RegionCell& c : cells) {
                os << format_number(c.b) << ',' << format_number(c.c) << ',' << to_string(c.label.tag) << ','
                   << c.label.boundary_string() << ',';
                if (c.energy.is_known()) {
                    os << csv_energy(c.energy.value.as_double()) << ",,\n";
                } else {
                    os << ',' << format_number(c.energy.lower) << ',' << format_number(c.energy.upper) << '\n';
                }
            }
        } else if (hplot_cmd->parsed()) {
            if (samples < 2 || !(zmax > 0.0)) {
                throw UsageError("hplot needs --samples >= 2 and --zmax > 0");
            }
            const double th = s.theta();
            const double st = std::sin(th);
            const double ct = std::cos(th);
            os << "z,h,h_star,h_perp,h_perp_star\n";
            for (int k = 0; k < samples; ++k) {
                const double z = zmax * k / (samples - 1);
                os << format_number(z) << ',' << format_number(h_family(z, th, HKind::H)) << ',';
                if (z >= st) {
                    os << format_number(h_family(z, th, HKind::HStar));
                }
                os << ',' << format_number(h_family(z, th, HKind::HPerp)) << ',';
                if (z >= ct) {
                    os << format_number(h_family(z, th, HKind::HPerpStar));
                }
                os << '\n';
            }
        } else if (homog_cmd->parsed()) {
            MicrostructureSpec spec;
            spec.slip = s;
            spec.rotation = Matrix2::rotation(rotation_angle);
            spec.bands = parse_bands(bands_text);
            spec.laminate_period = hlam;
            if (cells_per_feature < 4) {
                throw UsageError("--cells-per-feature must be at least 4");
            }
            const auto eps = parse_numbers(eps_text, ',', "--eps-list");
            const auto reports = epsilon_sweep(spec, eps, cells_per_feature);
            os << "epsilon,hlam,e_eps,target,rel_error,flagged_area\n";
            for (const EnergyReport& r : reports) {
                os << format_number(r.epsilon) << ',' << format_number(r.hlam) << ',' << csv_energy(r.e_eps) << ','
                   << format_number(r.target) << ',' << format_number(r.rel_error) << ','
                   << format_number(r.flagged_area) << '\n';
            }
        } else if (whomgamma_cmd->parsed()) {
            const auto v = parse_numbers(gamma_range, ':', "--gamma-range");
            if (v.size() != 3 || v[2] < 2 || v[2] != std::floor(v[2])) {
                throw UsageError("--gamma-range: expected a:b:n with integer n >= 2");
            }
            const int count = static_cast<int>(v[2]);
            os << "gamma,whom\n";
            for (int k = 0; k < count; ++k) {
                const double g = v[0] + (v[1] - v[0]) * k / (count - 1);
                os << format_number(g) << ',' << format_number(w_hom_scalar(g, s)) << '\n';
            }
        }
        os.flush();
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidSlipSystem& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace lamlab
