#pragma once

#include <string>

namespace kcmap {

/// Formats with exactly six decimal places, ties to even, never exponent
/// notation. Emitted tables stay byte-stable across platforms.
std::string format_fixed6(double v);

} // namespace kcmap
