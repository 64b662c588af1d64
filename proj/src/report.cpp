#include "confpred/report.hpp"

#include <cmath>
#include <cstdio>

namespace confpred {

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  bool neg_zero = s.size() > 1 && s[0] == '-';
  for (std::size_t i = 1; neg_zero && i < s.size(); ++i)
    if (s[i] != '0' && s[i] != '.') neg_zero = false;
  return neg_zero ? s.substr(1) : s;
}

int grid_decimals(double step) {
  for (int d = 0; d <= 9; ++d) {
    double scaled = step * std::pow(10.0, d);
    if (std::fabs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, scaled)) return d;
  }
  return 9;
}

std::string fraction_str(const PValue& p) {
  return std::to_string(p.count) + "/" + std::to_string(p.total);
}

std::string pvalue_str(const PValue& p) {
  return fraction_str(p) + " (" + fmt_fixed(p.value(), 2) + ")";
}

std::string label_str(const Label& lab) {
  if (std::holds_alternative<std::string>(lab)) return std::get<std::string>(lab);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", std::get<double>(lab));
  return std::string(buf);
}

std::string interval_str(const Interval& iv, int decimals) {
  return "[" + fmt_fixed(iv.lo, decimals) + ", " + fmt_fixed(iv.hi, decimals) + "]";
}

std::string region_str(const RealRegion& r, int decimals) {
  if (r.empty()) return "(empty)";
  std::string out;
  for (std::size_t i = 0; i < r.parts().size(); ++i) {
    if (i) out += " or ";
    out += interval_str(r.parts()[i], decimals);
  }
  return out;
}

std::string label_set_str(const LabelSet& s) {
  if (s.labels.empty()) return "(empty)";
  std::string out = "{";
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    if (i) out += ", ";
    out += label_str(s.labels[i]);
  }
  out += "}";
  return out;
}

}  // namespace confpred
