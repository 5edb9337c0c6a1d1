#include "floodecon/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace floodecon {

namespace {

[[noreturn]] void load_error(const std::string& path, const std::string& what) {
    throw std::runtime_error("hazard grid '" + path + "': " + what);
}

double interp_log_rp(double rp_lo, double v_lo, double rp_hi, double v_hi, double t_star) {
    const double denom = std::log(rp_hi) - std::log(rp_lo);
    if (denom <= 0.0) return v_lo;
    const double w = (std::log(t_star) - std::log(rp_lo)) / denom;
    return v_lo + w * (v_hi - v_lo);
}

}  // namespace

double HazardGrid::intensity_at(std::size_t idx, double return_period) const {
    const std::size_t n = return_periods.size();
    if (n == 0) return 0.0;
    if (return_period <= return_periods.front()) return layers.front()[idx];
    if (return_period >= return_periods.back()) return layers.back()[idx];
    std::size_t hi = 1;
    while (hi < n && return_periods[hi] < return_period) ++hi;
    if (return_period == return_periods[hi]) return layers[hi][idx];
    return interp_log_rp(return_periods[hi - 1], layers[hi - 1][idx],
                         return_periods[hi], layers[hi][idx], return_period);
}

HazardGrid HazardGrid::zeroed() const {
    HazardGrid out = *this;
    for (auto& layer : out.layers) std::fill(layer.begin(), layer.end(), 0.0);
    out.max_intensity = 0.0;
    return out;
}

ImpactCurve ImpactCurve::default_curve() {
    return ImpactCurve{{{0.0, 0.0}, {6.0, 1.0}}};
}

HazardField HazardField::zero(int width, int height, int step_index) {
    HazardField f;
    f.width = width;
    f.height = height;
    f.intensities.assign(static_cast<std::size_t>(width) * height, 0.0);
    f.step_index = step_index;
    return f;
}

void validate_grid(const HazardGrid& grid) {
    if (grid.width <= 0 || grid.height <= 0)
        throw std::runtime_error("hazard grid: non-positive dimensions");
    if (grid.return_periods.empty())
        throw std::runtime_error("hazard grid: no return periods");
    for (std::size_t k = 0; k < grid.return_periods.size(); ++k) {
        if (grid.return_periods[k] <= 0.0)
            throw std::runtime_error("hazard grid: return period " + std::to_string(k) + " is not positive");
        if (k > 0 && grid.return_periods[k] <= grid.return_periods[k - 1])
            throw std::runtime_error("hazard grid: return periods not strictly increasing at index " + std::to_string(k));
    }
    if (grid.layers.size() != grid.return_periods.size())
        throw std::runtime_error("hazard grid: layer count does not match return period count");
    const std::size_t n_cells = grid.cell_count();
    double max_seen = 0.0;
    for (std::size_t k = 0; k < grid.layers.size(); ++k) {
        if (grid.layers[k].size() != n_cells)
            throw std::runtime_error("hazard grid: layer " + std::to_string(k) + " has wrong cell count");
        for (std::size_t i = 0; i < n_cells; ++i) {
            const double v = grid.layers[k][i];
            if (!(v >= 0.0))
                throw std::runtime_error("hazard grid: negative intensity at layer " + std::to_string(k) +
                                         " cell " + std::to_string(i));
            if (k > 0 && v < grid.layers[k - 1][i])
                throw std::runtime_error(
                    "hazard grid: non-monotone intensity at cell (" + std::to_string(i % grid.width) + "," +
                    std::to_string(i / grid.width) + "): RP" + std::to_string(grid.return_periods[k]) +
                    " layer is below RP" + std::to_string(grid.return_periods[k - 1]) + " layer");
            max_seen = std::max(max_seen, v);
        }
    }
    if (grid.max_intensity != max_seen)
        throw std::runtime_error("hazard grid: max_intensity does not match layer maximum");
}

void validate_curve(const ImpactCurve& curve) {
    if (curve.points.empty()) throw std::runtime_error("impact curve: empty");
    if (curve.points.front().first != 0.0 || curve.points.front().second != 0.0)
        throw std::runtime_error("impact curve: first knot must be (0, 0)");
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto [x, r] = curve.points[i];
        if (r < 0.0 || r > 1.0)
            throw std::runtime_error("impact curve: damage ratio outside [0,1] at knot " + std::to_string(i));
        if (i > 0) {
            if (x <= curve.points[i - 1].first)
                throw std::runtime_error("impact curve: intensities not strictly increasing at knot " + std::to_string(i));
            if (r < curve.points[i - 1].second)
                throw std::runtime_error("impact curve: damage ratios decreasing at knot " + std::to_string(i));
        }
    }
}

HazardGrid load_hazard_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) load_error(path, "cannot open file");

    HazardGrid grid;
    std::size_t n_rps = 0;
    if (!(in >> grid.width >> grid.height >> n_rps)) load_error(path, "malformed header (need: width height n_rps)");
    if (grid.width <= 0 || grid.height <= 0) load_error(path, "non-positive dimensions");
    if (n_rps == 0) load_error(path, "zero return periods");

    grid.return_periods.resize(n_rps);
    for (std::size_t k = 0; k < n_rps; ++k) {
        if (!(in >> grid.return_periods[k])) load_error(path, "missing return period " + std::to_string(k));
    }

    const std::size_t n_cells = grid.cell_count();
    grid.layers.assign(n_rps, std::vector<double>(n_cells));
    for (std::size_t k = 0; k < n_rps; ++k) {
        for (std::size_t i = 0; i < n_cells; ++i) {
            if (!(in >> grid.layers[k][i]))
                load_error(path, "missing value at layer " + std::to_string(k) + " cell (" +
                                     std::to_string(i % grid.width) + "," + std::to_string(i / grid.width) + ")");
        }
    }
    std::string trailing;
    if (in >> trailing) load_error(path, "trailing data after last raster: '" + trailing + "'");

    grid.max_intensity = 0.0;
    for (const auto& layer : grid.layers)
        for (double v : layer) grid.max_intensity = std::max(grid.max_intensity, v);

    try {
        validate_grid(grid);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " [" + path + "]");
    }
    return grid;
}

ImpactCurve load_impact_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("impact curve '" + path + "': cannot open file");
    ImpactCurve curve;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, r;
        if (!(ls >> x)) continue;  // blank/comment line
        if (!(ls >> r))
            throw std::runtime_error("impact curve '" + path + "': line " + std::to_string(line_no) +
                                     ": expected 'intensity damage_ratio'");
        curve.points.emplace_back(x, r);
    }
    try {
        validate_curve(curve);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string(e.what()) + " [" + path + "]");
    }
    return curve;
}

double interpolate_return_period(const std::vector<std::pair<double, double>>& knots, double t_star) {
    if (knots.empty()) return 0.0;
    if (t_star <= knots.front().first) return knots.front().second;
    if (t_star >= knots.back().first) return knots.back().second;
    std::size_t hi = 1;
    while (hi < knots.size() && knots[hi].first < t_star) ++hi;
    if (t_star == knots[hi].first) return knots[hi].second;
    return interp_log_rp(knots[hi - 1].first, knots[hi - 1].second, knots[hi].first, knots[hi].second, t_star);
}

HazardField sample_step_hazard(const HazardGrid& grid, double dt_years, RngStream& rng, int step_index) {
    HazardField field = HazardField::zero(grid.width, grid.height, step_index);
    const double min_rp = grid.return_periods.front();
    const double event_prob = dt_years / min_rp;
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
        const double u = rng.uniform();
        if (u > event_prob) continue;  // no event at this cell
        // u <= dt/min_rp implies T* = dt/u >= min_rp; u == 0 gives +inf,
        // which the interpolation clamps to the largest return period
        const double t_star = dt_years / u;
        field.intensities[i] = grid.intensity_at(i, t_star);
    }
    return field;
}

double damage_ratio(const ImpactCurve& curve, double intensity) {
    const auto& pts = curve.points;
    if (intensity <= pts.front().first) return pts.front().second;
    if (intensity >= pts.back().first) return pts.back().second;
    std::size_t hi = 1;
    while (hi < pts.size() && pts[hi].first < intensity) ++hi;
    if (intensity == pts[hi].first) return pts[hi].second;
    const double w = (intensity - pts[hi - 1].first) / (pts[hi].first - pts[hi - 1].first);
    return pts[hi - 1].second + w * (pts[hi].second - pts[hi - 1].second);
}

double neighborhood_peak(const HazardField& field, Cell center, int radius, const HazardGrid& grid) {
    if (grid.max_intensity <= 0.0) return 0.0;
    const int x_lo = std::max(0, center.x - radius);
    const int x_hi = std::min(field.width - 1, center.x + radius);
    const int y_lo = std::max(0, center.y - radius);
    const int y_hi = std::min(field.height - 1, center.y + radius);
    double peak = 0.0;
    for (int y = y_lo; y <= y_hi; ++y)
        for (int x = x_lo; x <= x_hi; ++x)
            peak = std::max(peak, field.intensities[static_cast<std::size_t>(y) * field.width + x]);
    return peak / grid.max_intensity;
}

}  // namespace floodecon
