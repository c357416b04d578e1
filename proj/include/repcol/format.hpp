#pragma once

#include <string>

namespace repcol {

// 12 significant digits, the precision used for every text output.
std::string format_number(double v);

}  // namespace repcol
