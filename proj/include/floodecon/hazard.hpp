#pragma once

#include <string>
#include <utility>
#include <vector>

#include "floodecon/rng.hpp"

namespace floodecon {

struct Cell {
    int x = 0;
    int y = 0;
};

inline int chebyshev_distance(Cell a, Cell b) {
    const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx > dy ? dx : dy;
}

// Gridded hazard intensities (e.g. flood depth in meters), one raster per
// return period. Loaded from the text format described in the README:
//
//   width height n_rps
//   rp_1 rp_2 ... rp_n          (ascending, years)
//   <height rows of width values>   repeated once per return period
//
// Invariants enforced at load time: return periods strictly increasing,
// all intensities >= 0, and per-cell intensity non-decreasing in return
// period (a 1000-yr event is at least as severe as a 100-yr one).
struct HazardGrid {
    int width = 0;
    int height = 0;
    std::vector<double> return_periods;
    std::vector<std::vector<double>> layers;  // layers[k][y * width + x]
    double max_intensity = 0.0;

    std::size_t cell_count() const { return static_cast<std::size_t>(width) * height; }
    std::size_t cell_index(Cell c) const { return static_cast<std::size_t>(c.y) * width + c.x; }
    bool in_bounds(Cell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }

    // intensity at one cell for an arbitrary return period, log-linear
    // between layers and clamped to the knot range
    double intensity_at(std::size_t idx, double return_period) const;

    // all layer intensities set to zero (dimensions and RPs kept)
    HazardGrid zeroed() const;
};

// Piecewise-linear vulnerability curve mapping hazard intensity to a
// damage ratio in [0,1]. First knot must be (0, 0); intensities strictly
// increasing; ratios non-decreasing.
struct ImpactCurve {
    std::vector<std::pair<double, double>> points;  // (intensity, damage ratio)

    static ImpactCurve default_curve();  // (0 m, 0) -> (6 m, 1) linear
};

// Per-cell realized intensities for one step.
struct HazardField {
    int width = 0;
    int height = 0;
    std::vector<double> intensities;
    int step_index = 0;

    std::size_t cell_index(Cell c) const { return static_cast<std::size_t>(c.y) * width + c.x; }
    double at(Cell c) const { return intensities[cell_index(c)]; }

    static HazardField zero(int width, int height, int step_index);
};

HazardGrid load_hazard_grid(const std::string& path);
ImpactCurve load_impact_curve(const std::string& path);

// Validation entry points, also used by the loaders.
void validate_grid(const HazardGrid& grid);
void validate_curve(const ImpactCurve& curve);

// Log-linear interpolation over (return period, intensity) knots: linear
// in ln(T) between adjacent knots, exact at knots, clamped outside.
double interpolate_return_period(const std::vector<std::pair<double, double>>& knots, double t_star);

// Draws one event realization per cell. Per cell: u ~ U(0,1); no event
// when u > dt / min(RP); otherwise the implied return period T* = dt / u
// is clamped to the knot range and the cell's layers are interpolated.
// The per-step exceedance probability of the RP-T layer value is dt / T.
// Cells are visited in row-major order so a fixed seed gives a fixed field.
HazardField sample_step_hazard(const HazardGrid& grid, double dt_years, RngStream& rng, int step_index = 0);

// Piecewise-linear damage ratio; clamps to the last knot above the curve.
double damage_ratio(const ImpactCurve& curve, double intensity);

// Max intensity within Chebyshev distance <= radius of center, divided by
// grid.max_intensity; 0 when the grid is all-zero.
double neighborhood_peak(const HazardField& field, Cell center, int radius, const HazardGrid& grid);

}  // namespace floodecon
