// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sijscc/metrics.hpp"

namespace sijscc {

// CSV schema: dataset_id,snr_db,ratio,psnr_db,ssim,n_images
// ratio is the reduced fraction (e.g. 1/6); infinite PSNR is written as "inf".
std::string metrics_csv_string(const std::vector<MetricsRecord>& records);
void write_metrics_csv(const std::string& path, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

void write_metrics_json(const std::string& path, const std::vector<MetricsRecord>& records,
                        const nlohmann::json& run_meta);

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

// Minimal self-contained SVG line plot (one polyline per series, legend,
// labelled axes). Written deterministically so identical inputs give
// identical bytes.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<PlotSeries>& series);

} // namespace sijscc
