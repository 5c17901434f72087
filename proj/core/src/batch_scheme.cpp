#include "sgdinf/batch_scheme.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sgdinf/errors.hpp"

namespace sgdinf {

BatchScheme::BatchScheme(double c, double beta) : c_(c), beta_(beta) {
  if (!(c > 0.0)) {
    throw ConfigError("BatchScheme: C must be positive, got " +
                      std::to_string(c));
  }
  if (!(beta > 1.0)) {
    throw ConfigError("BatchScheme: beta must exceed 1, got " +
                      std::to_string(beta));
  }
  // a_2 >= 2 makes the whole sequence strictly increasing: for k >= 2 the
  // increment C((k+1)^beta - k^beta) >= C beta 2^(beta-1) >= beta > 1.
  if (boundary(2) < 2) {
    throw ConfigError(
        "BatchScheme: floor(C * 2^beta) < 2, boundary sequence would not be "
        "strictly increasing (C=" +
        std::to_string(c) + ", beta=" + std::to_string(beta) + ")");
  }
}

BatchScheme BatchScheme::for_alpha(double c, double alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) {
    throw ConfigError("BatchScheme: alpha must lie in (0.5, 1), got " +
                      std::to_string(alpha));
  }
  BatchScheme scheme(c, 2.0 / (1.0 - alpha));
  scheme.alpha_hint_ = alpha;
  return scheme;
}

std::int64_t BatchScheme::boundary(std::int64_t k) const {
  if (k < 1) throw ConfigError("BatchScheme: boundary index must be >= 1");
  if (k == 1) return 1;
  const double value = std::floor(c_ * std::pow(static_cast<double>(k), beta_));
  // Saturate past the representable step range; a saturated boundary is
  // simply never reached.
  if (value >= 9.0e18) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(value);
}

std::int64_t BatchScheme::batch_count(std::int64_t n) const {
  if (n < 1) throw ConfigError("BatchScheme: batch_count needs n >= 1");
  std::int64_t m = 1;
  while (boundary(m + 1) <= n) ++m;
  return m;
}

BatchCursor make_cursor(const BatchScheme& scheme) {
  BatchCursor cursor;
  cursor.next_boundary = scheme.boundary(2);
  return cursor;
}

void advance(BatchCursor& cursor, const BatchScheme& scheme) {
  const std::int64_t next_step = cursor.step() + 1;
  if (next_step == cursor.next_boundary) {
    ++cursor.m;
    cursor.t = cursor.next_boundary;
    cursor.l = 1;
    cursor.next_boundary = scheme.boundary(cursor.m + 1);
  } else {
    ++cursor.l;
  }
}

}  // namespace sgdinf
