#pragma once

#include <string>

namespace torsion {

/// Rounds to 12 significant digits so serialised output diffs cleanly.
double round12(double x);

/// "%.12g"
std::string format12(double x);

}  // namespace torsion
