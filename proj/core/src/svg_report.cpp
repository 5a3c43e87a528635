#include "nirbench/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nirbench {

namespace {

constexpr int kW = 640, kH = 640;
constexpr double kMargin = 60.0;

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Mapper {
  double x0, x1, y0, y1;  // data ranges
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); }
  double py(double y) const { return kH - kMargin - (y - y0) / (y1 - y0) * (kH - 2 * kMargin); }
};

std::string svg_open(const std::string& title) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n"
     << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">" << title << "</text>\n";
  return os.str();
}

std::string axes(const Mapper& m, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream os;
  os << "<line x1=\"" << m.px(m.x0) << "\" y1=\"" << m.py(m.y0) << "\" x2=\"" << m.px(m.x1)
     << "\" y2=\"" << m.py(m.y0) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << m.px(m.x0) << "\" y1=\"" << m.py(m.y0) << "\" x2=\"" << m.px(m.x0)
     << "\" y2=\"" << m.py(m.y1) << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 16
     << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << xlabel
     << "</text>\n"
     << "<text x=\"18\" y=\"" << kH / 2
     << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 " << kH / 2 << ")\">" << ylabel << "</text>\n";
  return os.str();
}

std::string scatter(const Mapper& m, const std::vector<double>& x, const std::vector<double>& y,
                    const std::string& color) {
  std::ostringstream os;
  for (std::size_t i = 0; i < x.size(); ++i)
    os << "<circle cx=\"" << num(m.px(x[i])) << "\" cy=\"" << num(m.py(y[i]))
       << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
  return os.str();
}

std::string polyline(const Mapper& m, const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, const std::string& dash = "") {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\"";
  if (!dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
  os << " points=\"";
  for (auto& [x, y] : pts) os << num(m.px(x)) << "," << num(m.py(y)) << " ";
  os << "\"/>\n";
  return os.str();
}

}  // namespace

std::string clarke_grid_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                            const std::string& title) {
  Mapper m{0, 600, 0, 600};
  std::ostringstream os;
  os << svg_open(title) << axes(m, "reference glucose (mg/dL)", "predicted glucose (mg/dL)");
  // zone boundary segments of the 1987 grid
  const double d3 = 175.0 / 3.0;
  std::vector<std::vector<std::pair<double, double>>> lines = {
      {{0, 0}, {600, 600}},                       // identity
      {{70.0 / 1.2, 70}, {600, 720}},             // upper A edge (pred = 1.2 ref)
      {{70, 56}, {600, 480}},                     // lower A edge (pred = 0.8 ref)
      {{0, 70}, {d3, 70}},                        // upper-left D floor
      {{d3, 70}, {70, 84}},                       // 1.2 ref segment to B
      {{0, 180}, {70, 180}},                      // D/E ceiling
      {{70, 180}, {70, 600}},                     // E right edge
      {{70, 0}, {70, 56}},                        // hypo box right edge
      {{180, 0}, {180, 70}},                      // lower E left edge
      {{240, 70}, {240, 180}},                    // lower D left edge
      {{240, 180}, {600, 180}},                   // lower D ceiling
      {{240, 70}, {600, 70}},                     // lower D floor
      {{130, 0}, {180, 70}},                      // lower C wedge
      {{70, 180}, {290, 400}},                    // upper C edge (pred = ref + 110)
      {{290, 400}, {290, 600}},                   // upper C right edge
  };
  for (auto& seg : lines) {
    std::vector<std::pair<double, double>> clipped;
    for (auto& [x, y] : seg) clipped.push_back({std::min(x, 600.0), std::min(y, 600.0)});
    os << polyline(m, clipped, "gray");
  }
  os << scatter(m, ref, pred, "steelblue");
  os << "</svg>\n";
  return os.str();
}

std::string bland_altman_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                             const std::string& title) {
  auto ba = bland_altman(pred, ref);
  std::vector<double> mean(ref.size()), diff(ref.size());
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    mean[i] = 0.5 * (ref[i] + pred[i]);
    diff[i] = pred[i] - ref[i];
    lo = std::min(lo, mean[i]);
    hi = std::max(hi, mean[i]);
  }
  double dspan = std::max(std::abs(ba.loa_low), std::abs(ba.loa_high)) * 1.5 + 1.0;
  Mapper m{lo - 10, hi + 10, -dspan, dspan};
  std::ostringstream os;
  os << svg_open(title) << axes(m, "mean of methods (mg/dL)", "difference (mg/dL)");
  for (double level : {ba.bias, ba.loa_low, ba.loa_high})
    os << polyline(m, {{m.x0, level}, {m.x1, level}}, level == ba.bias ? "black" : "red", "6,4");
  os << scatter(m, mean, diff, "steelblue");
  os << "</svg>\n";
  return os.str();
}

std::string linearity_svg(const std::vector<double>& ref, const std::vector<double>& pred,
                          const std::string& title) {
  auto fit = linearity(pred, ref);
  Mapper m{40, 420, 40, 420};
  std::ostringstream os;
  os << svg_open(title) << axes(m, "reference glucose (mg/dL)", "predicted glucose (mg/dL)");
  os << polyline(m, {{m.x0, m.x0}, {m.x1, m.x1}}, "red", "6,4");  // unity slope
  os << polyline(m, {{m.x0, fit.intercept + fit.slope * m.x0}, {m.x1, fit.intercept + fit.slope * m.x1}},
                 "blue");
  os << scatter(m, ref, pred, "steelblue");
  os << "<text x=\"" << kW - 200 << "\" y=\"48\" font-size=\"12\" font-family=\"sans-serif\">"
     << "slope " << num(fit.slope) << ", r " << num(fit.r) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string loss_history_svg(const std::vector<nn::EpochRow>& history, const std::string& title) {
  double lo = 1e300, hi = -1e300;
  for (const auto& r : history) {
    for (double v : {r.train_data, r.val_data}) {
      if (v > 0) {
        lo = std::min(lo, std::log10(v));
        hi = std::max(hi, std::log10(v));
      }
    }
  }
  if (lo > hi) { lo = 0; hi = 1; }
  Mapper m{0, history.empty() ? 1.0 : static_cast<double>(history.back().epoch), lo, hi + 0.1};
  std::ostringstream os;
  os << svg_open(title) << axes(m, "epoch", "log10 loss");
  std::vector<std::pair<double, double>> tr, va;
  for (const auto& r : history) {
    if (r.train_data > 0) tr.push_back({static_cast<double>(r.epoch), std::log10(r.train_data)});
    if (r.val_data > 0) va.push_back({static_cast<double>(r.epoch), std::log10(r.val_data)});
  }
  os << polyline(m, tr, "steelblue") << polyline(m, va, "darkorange");
  os << "<text x=\"" << kW - 220 << "\" y=\"48\" font-size=\"12\" fill=\"steelblue\" "
        "font-family=\"sans-serif\">train</text>\n"
     << "<text x=\"" << kW - 160 << "\" y=\"48\" font-size=\"12\" fill=\"darkorange\" "
        "font-family=\"sans-serif\">validation</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string radar_svg(const std::vector<ModelReport>& reports) {
  // Six criteria, each mapped to [0,1] with larger = better.
  const std::vector<std::string> axis_names = {"RMSE", "MARD", "Clarke A", "within 15%",
                                               "parameters", "inference"};
  const int n_axes = 6;
  std::vector<std::vector<double>> scores;
  auto lower_better = [&](double v, double lo, double hi) {
    return hi > lo ? 1.0 - (v - lo) / (hi - lo) : 1.0;
  };
  auto higher_better = [&](double v, double lo, double hi) {
    return hi > lo ? (v - lo) / (hi - lo) : 1.0;
  };
  double r_lo = 1e300, r_hi = -1e300, m_lo = 1e300, m_hi = -1e300, p_lo = 1e300, p_hi = -1e300,
         i_lo = 1e300, i_hi = -1e300, a_lo = 1e300, a_hi = -1e300, w_lo = 1e300, w_hi = -1e300;
  for (const auto& r : reports) {
    r_lo = std::min(r_lo, r.rmse_mgdl); r_hi = std::max(r_hi, r.rmse_mgdl);
    m_lo = std::min(m_lo, r.mard_pct); m_hi = std::max(m_hi, r.mard_pct);
    a_lo = std::min(a_lo, r.clarke_zone_pct[0]); a_hi = std::max(a_hi, r.clarke_zone_pct[0]);
    w_lo = std::min(w_lo, r.within_15pct); w_hi = std::max(w_hi, r.within_15pct);
    double lp = std::log10(static_cast<double>(std::max<std::int64_t>(r.param_count, 1)));
    p_lo = std::min(p_lo, lp); p_hi = std::max(p_hi, lp);
    double li = std::log10(std::max(r.inference_ns_per_sample, 1.0));
    i_lo = std::min(i_lo, li); i_hi = std::max(i_hi, li);
  }
  for (const auto& r : reports) {
    scores.push_back({
        lower_better(r.rmse_mgdl, r_lo, r_hi),
        lower_better(r.mard_pct, m_lo, m_hi),
        higher_better(r.clarke_zone_pct[0], a_lo, a_hi),
        higher_better(r.within_15pct, w_lo, w_hi),
        lower_better(std::log10(static_cast<double>(std::max<std::int64_t>(r.param_count, 1))), p_lo, p_hi),
        lower_better(std::log10(std::max(r.inference_ns_per_sample, 1.0)), i_lo, i_hi),
    });
  }

  const double cx = kW / 2.0, cy = kH / 2.0 + 10, radius = 220;
  std::ostringstream os;
  os << svg_open("model comparison radar");
  for (int a = 0; a < n_axes; ++a) {
    double ang = -M_PI / 2 + 2 * M_PI * a / n_axes;
    double x = cx + radius * std::cos(ang), y = cy + radius * std::sin(ang);
    os << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(x) << "\" y2=\""
       << num(y) << "\" stroke=\"lightgray\"/>\n";
    os << "<text x=\"" << num(cx + (radius + 24) * std::cos(ang)) << "\" y=\""
       << num(cy + (radius + 24) * std::sin(ang))
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << axis_names[a]
       << "</text>\n";
  }
  const std::vector<std::string> colors = {"steelblue", "darkorange", "seagreen",
                                           "firebrick", "mediumpurple", "goldenrod"};
  for (std::size_t s = 0; s < scores.size(); ++s) {
    os << "<polygon fill=\"" << colors[s % colors.size()] << "\" fill-opacity=\"0.15\" stroke=\""
       << colors[s % colors.size()] << "\" points=\"";
    for (int a = 0; a < n_axes; ++a) {
      double ang = -M_PI / 2 + 2 * M_PI * a / n_axes;
      double rr = radius * std::clamp(scores[s][a], 0.0, 1.0);
      os << num(cx + rr * std::cos(ang)) << "," << num(cy + rr * std::sin(ang)) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"40\" y=\"" << 40 + 16 * static_cast<int>(s) << "\" font-size=\"11\" fill=\""
       << colors[s % colors.size()] << "\" font-family=\"sans-serif\">" << reports[s].model_id
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nirbench
