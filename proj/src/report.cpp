#include "mmbarrier/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace mmbarrier {
namespace {

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

ReportRow make_row(const std::string& id, std::optional<double> p, double kappa, const BarrierResult& result) {
  ReportRow row;
  row.id = id;
  row.p = p;
  row.kappa = kappa;
  row.barrier = result.value;
  row.theta = result.theta_star.values();
  row.rank_mode = to_string(result.rank_mode);
  row.clamped = result.clamped;
  row.numerator_bits = result.numerator_bits;
  row.denominator_bits = result.denominator_bits;
  return row;
}

ReportRow make_error_row(const std::string& id, std::optional<double> p, double kappa, const std::string& error) {
  ReportRow row;
  row.id = id;
  row.p = p;
  row.kappa = kappa;
  row.barrier = std::nan("");
  row.theta = {std::nan(""), std::nan(""), std::nan("")};
  row.rank_mode = "-";
  row.error = error;
  return row;
}

std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out << std::fixed << std::setprecision(decimals) << value;
  std::string s = out.str();
  // Avoid "-0.000000".
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string to_csv(const std::vector<ReportRow>& rows, int decimals) {
  std::ostringstream out;
  out << "id,p,kappa,barrier,theta1,theta2,theta3,rank_mode,clamped\n";
  for (const auto& r : rows) {
    out << r.id << ',' << (r.p ? format_fixed(*r.p, decimals) : "") << ',' << format_fixed(r.kappa, decimals) << ','
        << format_fixed(r.barrier, decimals) << ',' << format_fixed(r.theta[0], decimals) << ','
        << format_fixed(r.theta[1], decimals) << ',' << format_fixed(r.theta[2], decimals) << ',' << r.rank_mode << ','
        << (r.clamped ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<ReportRow>& rows) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["id"] = r.id;
    j["p"] = r.p ? number(*r.p) : nlohmann::json(nullptr);
    j["kappa"] = r.kappa;
    j["barrier"] = number(r.barrier);
    j["theta"] = {number(r.theta[0]), number(r.theta[1]), number(r.theta[2])};
    j["rank_mode"] = r.rank_mode;
    j["clamped"] = r.clamped;
    j["numerator_bits"] = number(r.numerator_bits);
    j["denominator_bits"] = number(r.denominator_bits);
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string to_table(const std::vector<ReportRow>& rows, const std::string& id_header) {
  const bool symmetric = std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.error.empty() && std::abs(r.theta[1] - r.theta[2]) < 1e-9;
  });
  std::size_t width = id_header.size();
  for (const auto& r : rows) width = std::max(width, r.id.size());

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << id_header << "  barrier  theta1  ";
  out << (symmetric ? "theta2=theta3" : "theta2  theta3") << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.id << "  ";
    if (!r.error.empty()) {
      out << "error: " << r.error << '\n';
      continue;
    }
    out << format_fixed(r.barrier, 4) << "   " << format_fixed(r.theta[0], 4) << "  " << format_fixed(r.theta[1], 4);
    if (!symmetric) out << "  " << format_fixed(r.theta[2], 4);
    if (r.clamped) out << "  (clamped)";
    out << '\n';
  }
  return out.str();
}

std::string to_svg(const std::vector<std::pair<double, double>>& points, const std::string& title,
                   const std::string& x_label, const std::string& y_label) {
  constexpr double kW = 640, kH = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!points.empty()) {
    x0 = x1 = points.front().first;
    y0 = y1 = points.front().second;
    for (const auto& [x, y] : points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  const auto sy = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
      << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << xml_escape(title) << "</text>\n";
  // Axes.
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
      << "\" stroke=\"black\"/>\n";
  constexpr int kTicks = 4;
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x0 + (x1 - x0) * t / kTicks;
    const double yv = y0 + (y1 - y0) * t / kTicks;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << kH - kBottom << "\" x2=\"" << sx(xv) << "\" y2=\""
        << kH - kBottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(xv) << "\" y=\"" << kH - kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_fixed(xv, 3)
        << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kLeft << "\" y2=\"" << sy(yv)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_fixed(yv, 3)
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (kTop + kH - kBottom) / 2 << "\" transform=\"rotate(-90 16 "
      << (kTop + kH - kBottom) / 2 << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(y_label) << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#d4a017\" stroke-width=\"2\" points=\"";
  for (std::size_t n = 0; n < points.size(); ++n) {
    out << (n ? " " : "") << sx(points[n].first) << ',' << sy(points[n].second);
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

}  // namespace mmbarrier
