#pragma once

#include <string>
#include <variant>

#include "ahlfors/fields.hpp"

namespace ahlfors {

// One field per file. Format: a single ASCII header line
//
//   GFLD1 n=<n> shape=<N1,...,Nn> rank=<0|1|2> sym=<0|1|-1> layout=component-major dtype=f64le
//
// terminated by '\n', followed immediately by the payload: 64-bit
// little-endian floats, component-major (packed order for rank 2: upper
// triangle for sym=1, strict upper for sym=-1), row-major within each
// component. The payload length must match the header exactly; reading back
// what was written is bitwise identity.

using FieldAny =
    std::variant<ScalarField, OneFormField, TwoFormField, SymTensorField>;

// Throws BadMagic when the file does not start with "GFLD1", ShapeMismatch
// for a malformed header or trailing bytes, TruncatedPayload when the payload
// ends early.
FieldAny read_field(const std::string& path);

void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const OneFormField& f);
void write_field(const std::string& path, const TwoFormField& f);
void write_field(const std::string& path, const SymTensorField& f);
void write_field(const std::string& path, const FieldAny& f);

}  // namespace ahlfors
