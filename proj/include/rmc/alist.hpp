#pragma once

#include <iosfwd>

#include "rmc/protograph.hpp"

namespace rmc {

// Standard alist text format: "N M", max column/row degree, per-column then
// per-row degree lists, then 1-based index lists padded with zeros to the
// maximum degree.
void write_alist(const QcCode& code, std::ostream& out);

// Parses the format back; z is not recoverable from an alist, so it is 1.
QcCode read_alist(std::istream& in);

}  // namespace rmc
