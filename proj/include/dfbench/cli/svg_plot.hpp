#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dfbench::cli {

/// Static scatter of the first two coordinate columns, one colour per class,
/// with a legend entry per class. Output depends only on the inputs.
std::string render_scatter_svg(const Eigen::MatrixXd& coordinates, std::span<const int> labels,
                               const std::vector<std::string>& class_names, const std::string& title);

}  // namespace dfbench::cli
