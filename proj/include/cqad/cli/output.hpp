#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cqad/response.hpp"
#include "cqad/spectral.hpp"
#include "cqad/timedomain.hpp"

namespace cqad::cli {

// 17 significant digits; "nan" for NaN.
std::string fmt(double x);

// Header row, LF endings, one line per row; rows are pre-formatted cells.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// omega_rad_s, freq_GHz, re, im, abs2
void write_spectrum_csv(const std::filesystem::path& path, const ResponseSpectrum& s);
// flux_phi0, freq_GHz, abs2 (long format)
void write_fluxmap_csv(const std::filesystem::path& path, const FluxMap& map, const Eigen::MatrixXd& values);
// t_s, pJ, out_left, out_right, out_gate
void write_trace_csv(const std::filesystem::path& path, const TimeTrace& trace);
// omega_rad_s, re_A, im_A, re_H, im_H
void write_factors_csv(const std::filesystem::path& path, int n, const Eigen::ArrayXd& omega, double tau);

struct Series {
    std::string label;
    Eigen::ArrayXd x, y;
};

void write_line_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series);

// Rows = y axis (flux), columns = x axis (frequency). NaN cells are hatched grey.
void write_heatmap_svg(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                       const Eigen::MatrixXd& values);

}  // namespace cqad::cli
