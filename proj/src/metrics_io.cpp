// SPDX-License-Identifier: Apache-2.0
#include "sijscc/metrics_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sijscc/errors.hpp"

namespace sijscc {

namespace {

std::string fmt_double(double v, const char* spec = "%.6f") {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace

std::string metrics_csv_string(const std::vector<MetricsRecord>& records) {
    std::ostringstream os;
    os << "dataset_id,snr_db,ratio,psnr_db,ssim,n_images\n";
    for (const auto& r : records) {
        os << r.dataset_id << ',' << fmt_double(r.snr_db, "%g") << ',' << r.ratio_num << '/'
           << r.ratio_den << ',' << fmt_double(r.psnr_db) << ',' << fmt_double(r.ssim) << ','
           << r.n_images << '\n';
    }
    return os.str();
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write metrics csv: " + path);
    out << metrics_csv_string(records);
}

std::vector<MetricsRecord> read_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open metrics csv: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("dataset_id,", 0) != 0)
        throw IngestError("not a metrics csv: " + path);
    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        MetricsRecord r;
        std::getline(ss, r.dataset_id, ',');
        std::getline(ss, field, ',');
        r.snr_db = std::stod(field);
        std::getline(ss, field, ',');
        if (auto slash = field.find('/'); slash != std::string::npos) {
            r.ratio_num = std::stol(field.substr(0, slash));
            r.ratio_den = std::stol(field.substr(slash + 1));
        }
        std::getline(ss, field, ',');
        r.psnr_db = field == "inf" ? std::numeric_limits<double>::infinity() : std::stod(field);
        std::getline(ss, field, ',');
        r.ssim = std::stod(field);
        std::getline(ss, field, ',');
        r.n_images = std::stoi(field);
        records.push_back(std::move(r));
    }
    return records;
}

void write_metrics_json(const std::string& path, const std::vector<MetricsRecord>& records,
                        const nlohmann::json& run_meta) {
    nlohmann::json j;
    j["meta"] = run_meta;
    j["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        j["records"].push_back({{"dataset_id", r.dataset_id},
                                {"snr_db", r.snr_db},
                                {"ratio", std::to_string(r.ratio_num) + "/" +
                                              std::to_string(r.ratio_den)},
                                {"psnr_db", std::isinf(r.psnr_db) ? 1e9 : r.psnr_db},
                                {"psnr_infinite", std::isinf(r.psnr_db)},
                                {"ssim", r.ssim},
                                {"n_images", r.n_images}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write metrics json: " + path);
    out << j.dump(2) << "\n";
}

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct AxisTicks {
    double lo, hi;
    std::vector<double> ticks;
};

AxisTicks nice_axis(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    AxisTicks ax;
    ax.lo = std::floor(lo / step) * step;
    ax.hi = std::ceil(hi / step) * step;
    for (double t = ax.lo; t <= ax.hi + 1e-9 * step; t += step) ax.ticks.push_back(t);
    return ax;
}

} // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series) {
    const int width = 800, height = 560;
    const double ml = 70, mr = 160, mt = 48, mb = 56;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y)) continue;
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    if (xlo > xhi) {
        xlo = 0;
        xhi = 1;
        ylo = 0;
        yhi = 1;
    }
    AxisTicks xa = nice_axis(xlo, xhi);
    AxisTicks ya = nice_axis(ylo, yhi);
    auto px = [&](double x) {
        return ml + (x - xa.lo) / (xa.hi - xa.lo) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ya.lo) / (ya.hi - ya.lo) * (height - mt - mb);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\" "
       << "font-family=\"sans-serif\">" << title << "</text>\n";
    // frame + grid
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << (width - ml - mr)
       << "\" height=\"" << (height - mt - mb) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : xa.ticks) {
        os << "<line x1=\"" << px(t) << "\" y1=\"" << mt << "\" x2=\"" << px(t) << "\" y2=\""
           << (height - mb) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << px(t) << "\" y=\"" << (height - mb + 18)
           << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">"
           << fmt_double(t, "%g") << "</text>\n";
    }
    for (double t : ya.ticks) {
        os << "<line x1=\"" << ml << "\" y1=\"" << py(t) << "\" x2=\"" << (width - mr)
           << "\" y2=\"" << py(t) << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << (ml - 8) << "\" y=\"" << (py(t) + 4)
           << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">"
           << fmt_double(t, "%g") << "</text>\n";
    }
    os << "<text x=\"" << (ml + (width - ml - mr) / 2) << "\" y=\"" << (height - 14)
       << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\">" << xlabel
       << "</text>\n";
    os << "<text x=\"20\" y=\"" << (mt + (height - mt - mb) / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\" font-family=\"sans-serif\" "
       << "transform=\"rotate(-90 20 " << (mt + (height - mt - mb) / 2) << ")\">" << ylabel
       << "</text>\n";
    // series
    for (size_t si = 0; si < series.size(); ++si) {
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (auto [x, y] : series[si].points)
            if (std::isfinite(y)) os << px(x) << "," << py(y) << " ";
        os << "\"/>\n";
        for (auto [x, y] : series[si].points)
            if (std::isfinite(y))
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
                   << color << "\"/>\n";
        const double lx = width - mr + 12, lyy = mt + 16 + 20.0 * si;
        os << "<line x1=\"" << lx << "\" y1=\"" << lyy << "\" x2=\"" << (lx + 24) << "\" y2=\""
           << lyy << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << (lx + 30) << "\" y=\"" << (lyy + 4)
           << "\" font-size=\"12\" font-family=\"sans-serif\">" << series[si].label
           << "</text>\n";
    }
    os << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write plot: " + path);
    out << os.str();
}

} // namespace sijscc
