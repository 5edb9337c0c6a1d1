#include "floodecon/charts.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace floodecon {

namespace {

constexpr double kWidth = 820;
constexpr double kHeight = 500;
constexpr double kLeft = 70, kRight = 20, kTop = 48, kBottom = 52;

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// round a raw tick spacing to 1/2/5 * 10^k
double nice_step(double span, int target_ticks) {
    const double raw = span / std::max(1, target_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    double n = 10.0;
    if (r <= 1.0) n = 1.0;
    else if (r <= 2.0) n = 2.0;
    else if (r <= 5.0) n = 5.0;
    return n * mag;
}

}  // namespace

void write_line_chart_svg(const std::string& path, const std::string& title, const std::string& y_label,
                          const std::vector<ChartSeries>& series) {
    if (series.empty()) throw std::runtime_error("empty series");
    std::size_t n = 0;
    double y_min = 0.0, y_max = 0.0;
    bool any = false;
    for (const auto& s : series) {
        n = std::max(n, s.values.size());
        for (double v : s.values) {
            if (!any) { y_min = y_max = v; any = true; }
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (!any || n == 0) throw std::runtime_error("empty series");
    y_min = std::min(0.0, y_min);
    if (y_max <= y_min) y_max = y_min + 1.0;
    y_max += 0.05 * (y_max - y_min);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const auto sx = [&](double step) {
        return n > 1 ? kLeft + plot_w * (step - 1.0) / (static_cast<double>(n) - 1.0) : kLeft + plot_w / 2.0;
    };
    const auto sy = [&](double v) { return kTop + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("charts: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\" font-weight=\"bold\">" << title << "</text>\n";

    // frame
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    // y ticks + gridlines
    const double ystep = nice_step(y_max - y_min, 5);
    for (double v = std::ceil(y_min / ystep) * ystep; v <= y_max + 1e-12; v += ystep) {
        const double y = sy(v);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    // x ticks
    const double xstep = nice_step(static_cast<double>(n), 8);
    for (double v = xstep; v <= static_cast<double>(n) + 1e-9; v += xstep) {
        const double x = sx(v);
        out << "<line x1=\"" << x << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << x << "\" y2=\""
            << kTop + plot_h + 4 << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << kTop + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">step</text>\n"
        << "<text x=\"16\" y=\"" << kTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
        << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    for (const auto& s : series) {
        if (s.values.empty()) continue;
        if (s.values.size() == 1) {
            out << "<circle cx=\"" << sx(1) << "\" cy=\"" << sy(s.values[0]) << "\" r=\"3\" fill=\"" << s.color
                << "\"/>\n";
            continue;
        }
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) out << ' ';
            out << fmt(sx(static_cast<double>(i + 1))) << ',' << fmt(sy(s.values[i]));
        }
        out << "\"/>\n";
    }

    // legend, top-left inside the frame
    double ly = kTop + 14;
    for (const auto& s : series) {
        out << "<line x1=\"" << kLeft + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + 34 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + 40 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ly += 15;
    }
    out << "</svg>\n";
}

namespace {

const char* kBlue = "#1f77b4";
const char* kOrange = "#ff7f0e";
const char* kGreen = "#2ca02c";
const char* kRed = "#d62728";
const char* kPurple = "#9467bd";
const char* kBrown = "#8c564b";

std::vector<double> column(const std::vector<MetricsFrame>& ms, double MetricsFrame::*field) {
    std::vector<double> out;
    out.reserve(ms.size());
    for (const auto& m : ms) out.push_back(m.*field);
    return out;
}

}  // namespace

std::vector<std::string> emit_charts(const std::vector<MetricsFrame>* baseline,
                                     const std::vector<MetricsFrame>* hazard, const std::string& out_dir) {
    if ((!baseline || baseline->empty()) && (!hazard || hazard->empty()))
        throw std::runtime_error("empty series");
    if (baseline && baseline->empty()) throw std::runtime_error("empty series");
    if (hazard && hazard->empty()) throw std::runtime_error("empty series");
    std::filesystem::create_directories(out_dir);

    std::vector<std::string> written;
    const auto save = [&](const std::string& name, const std::string& title, const std::string& ylab,
                          std::vector<ChartSeries> series) {
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        write_line_chart_svg(path, title, ylab, series);
        written.push_back(path);
    };

    // two-scenario overlay of one column, optionally split by sector
    const auto overlay = [&](double MetricsFrame::*field, const char* base_label, const char* haz_label) {
        std::vector<ChartSeries> s;
        if (baseline) s.push_back({base_label, column(*baseline, field), kBlue});
        if (hazard) s.push_back({haz_label, column(*hazard, field), kRed});
        return s;
    };

    {
        std::vector<ChartSeries> s;
        if (baseline) {
            s.push_back({"baseline commodity", column(*baseline, &MetricsFrame::mean_production_commodity), kBlue});
            s.push_back({"baseline manufacturer", column(*baseline, &MetricsFrame::mean_production_manufacturer),
                         kGreen});
        }
        if (hazard) {
            s.push_back({"hazard commodity", column(*hazard, &MetricsFrame::mean_production_commodity), kRed});
            s.push_back({"hazard manufacturer", column(*hazard, &MetricsFrame::mean_production_manufacturer),
                         kOrange});
        }
        save("a_production.svg", "Mean firm production by sector", "units / step", s);
    }
    {
        std::vector<ChartSeries> s;
        if (baseline) {
            s.push_back({"baseline commodity", column(*baseline, &MetricsFrame::mean_firm_money_commodity), kBlue});
            s.push_back({"baseline manufacturer", column(*baseline, &MetricsFrame::mean_firm_money_manufacturer),
                         kGreen});
        }
        if (hazard) {
            s.push_back({"hazard commodity", column(*hazard, &MetricsFrame::mean_firm_money_commodity), kRed});
            s.push_back({"hazard manufacturer", column(*hazard, &MetricsFrame::mean_firm_money_manufacturer),
                         kOrange});
        }
        save("b_firm_money.svg", "Mean firm money by sector", "money", s);
    }
    save("c_labor.svg", "Mean labor supplied per household", "labor units",
         overlay(&MetricsFrame::mean_labor_supplied, "baseline", "hazard"));
    save("d_price.svg", "Mean goods price", "price",
         overlay(&MetricsFrame::mean_price, "baseline", "hazard"));
    save("e_wage.svg", "Mean wage", "wage", overlay(&MetricsFrame::mean_wage, "baseline", "hazard"));
    save("f_unemployment.svg", "Unemployment rate", "rate",
         overlay(&MetricsFrame::unemployment_rate, "baseline", "hazard"));
    save("g_household_money.svg", "Mean household money", "money",
         overlay(&MetricsFrame::mean_household_money, "baseline", "hazard"));

    const auto bottlenecks = [&](const std::vector<MetricsFrame>& ms) {
        return std::vector<ChartSeries>{{"labor-limited", column(ms, &MetricsFrame::share_labor_limited), kPurple},
                                        {"capital-limited", column(ms, &MetricsFrame::share_capital_limited), kBrown},
                                        {"input-limited", column(ms, &MetricsFrame::share_input_limited), kGreen}};
    };
    if (baseline)
        save("h_bottlenecks_baseline.svg", "Bottleneck shares (baseline)", "share of producing firms",
             bottlenecks(*baseline));
    if (hazard)
        save("i_bottlenecks_hazard.svg", "Bottleneck shares (hazard)", "share of producing firms",
             bottlenecks(*hazard));
    return written;
}

}  // namespace floodecon
