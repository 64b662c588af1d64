#pragma once

#include <string>

#include "confpred/example.hpp"
#include "confpred/rational.hpp"
#include "confpred/region.hpp"

namespace confpred {

// Fixed-point float rendering used by every report so that repeated runs are
// byte identical.  Negative zero is normalized away.
std::string fmt_fixed(double v, int decimals);

// Decimal places needed to print multiples of step exactly (0 for step 1,
// 1 for step 0.1, 2 for step 0.25, ...).
int grid_decimals(double step);

std::string fraction_str(const PValue& p);  // "2/25"
std::string pvalue_str(const PValue& p);    // "2/25 (0.08)"

std::string label_str(const Label& lab);

std::string interval_str(const Interval& iv, int decimals);
std::string region_str(const RealRegion& r, int decimals);
std::string label_set_str(const LabelSet& s);

}  // namespace confpred
