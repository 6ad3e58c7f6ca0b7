#include "eitcav/units.hpp"

// Header-only conversions; this unit keeps the target list symmetric with the headers.
namespace eitcav {
static_assert(from_mhz(1.0) == kTwoPi);
}  // namespace eitcav
