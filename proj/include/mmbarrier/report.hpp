#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmbarrier/barrier.hpp"

namespace mmbarrier {

/// One line of barrier output.
struct ReportRow {
  std::string id;
  /// Absent for alpha barriers.
  std::optional<double> p;
  double kappa = 0.0;
  double barrier = 0.0;
  std::array<double, 3> theta{};
  std::string rank_mode;
  bool clamped = false;
  /// Empty on success, otherwise the failure message (barrier is NaN).
  std::string error;

  double numerator_bits = 0.0;
  double denominator_bits = 0.0;
};

ReportRow make_row(const std::string& id, std::optional<double> p, double kappa, const BarrierResult& result);
ReportRow make_error_row(const std::string& id, std::optional<double> p, double kappa, const std::string& error);

/// Fixed-point rendering; NaN renders as "nan".
std::string format_fixed(double value, int decimals);

/// Columns id,p,kappa,barrier,theta1,theta2,theta3,rank_mode,clamped.
std::string to_csv(const std::vector<ReportRow>& rows, int decimals = 6);

std::string to_json(const std::vector<ReportRow>& rows);

/// Aligned text table with 4 decimals, the layout of the CW_q barrier table.
std::string to_table(const std::vector<ReportRow>& rows, const std::string& id_header = "id");

/// Self-contained SVG line chart of (x, y) points.
std::string to_svg(const std::vector<std::pair<double, double>>& points, const std::string& title,
                   const std::string& x_label, const std::string& y_label);

}  // namespace mmbarrier
