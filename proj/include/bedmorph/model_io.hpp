#pragma once

#include <string>

#include "bedmorph/dmd.hpp"

namespace bedmorph {

// DMDMODEL v1 container: ASCII magic "DMDMODEL v1\n", a length-prefixed JSON
// metadata block (shapes, dt, rank, vectorization order, array manifest),
// then one record per array: u64 LE byte length, raw little-endian float64
// payload (real and imaginary planes as separate arrays), u32 LE CRC-32 of
// the payload. Round-tripping reproduces every model field bit-exactly.

void save_model(const DmdModel& model, const std::string& path);
DmdModel load_model(const std::string& path);

}  // namespace bedmorph
