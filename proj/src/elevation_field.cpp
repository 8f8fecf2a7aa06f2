#include "bedmorph/elevation_field.hpp"

#include <cmath>
#include <string>

#include "bedmorph/errors.hpp"

namespace bedmorph {

void validate(const ElevationField& field) {
  if (field.nx < 2 || field.ny < 1 || field.nt < 3) {
    raise(ErrorCode::InvalidArgument,
          "grid must satisfy nx >= 2, ny >= 1, nt >= 3; got nx=" +
              std::to_string(field.nx) + " ny=" + std::to_string(field.ny) +
              " nt=" + std::to_string(field.nt));
  }
  if (!(field.dx > 0.0) || !(field.dy > 0.0) || !(field.dt > 0.0)) {
    raise(ErrorCode::InvalidArgument, "dx, dy, dt must be strictly positive");
  }
  if (field.values.size() != field.sample_count()) {
    raise(ErrorCode::InvalidArgument,
          "value count " + std::to_string(field.values.size()) +
              " does not match nx*ny*nt = " + std::to_string(field.sample_count()));
  }
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    if (!std::isfinite(field.values[idx])) {
      raise(ErrorCode::NonFiniteInput,
            "non-finite sample at flat index " + std::to_string(idx));
    }
  }
}

}  // namespace bedmorph
