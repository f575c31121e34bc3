#ifndef CACWB_TEXT_HPP
#define CACWB_TEXT_HPP

#include <string>

namespace cacwb {

/// Shortest decimal with at most 12 significant digits that parses back to
/// the same double; falls back to 12 digits. No locale dependence. This is
/// the one float format used in every CSV the tool emits.
std::string format_double(double x);

} // namespace cacwb

#endif
