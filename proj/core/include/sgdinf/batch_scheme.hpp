#pragma once

#include <cstdint>
#include <optional>

namespace sgdinf {

// Boundary sequence of the motivating batches:
//   a_1 = 1,  a_k = floor(C * k^beta) for k >= 2,
// strictly increasing. Boundaries are evaluated on demand, one ahead of the
// current batch, so no total sample size is ever assumed.
//
// With the step decay exponent alpha in (0.5, 1), the rate-optimal growth
// exponent is beta = 2 / (1 - alpha); that is the default unless beta is
// given explicitly.
class BatchScheme {
 public:
  // Explicit growth exponent (beta > 1).
  BatchScheme(double c, double beta);

  // beta = 2 / (1 - alpha); alpha is kept for reporting.
  static BatchScheme for_alpha(double c, double alpha);

  // a_k for k >= 1.
  std::int64_t boundary(std::int64_t k) const;

  // Number of batches M with a_M <= n < a_{M+1}.
  std::int64_t batch_count(std::int64_t n) const;

  double c() const { return c_; }
  double beta() const { return beta_; }
  std::optional<double> alpha_hint() const { return alpha_hint_; }

 private:
  double c_;
  double beta_;
  std::optional<double> alpha_hint_;
};

// Position of step i inside the motivating-batch layout:
//   m  -- index of the batch containing i,
//   t  -- first step of that batch (t_i = a_m),
//   l  -- window length l_i = i - t_i + 1,
//   next_boundary -- a_{m+1}, the only boundary ever needed ahead.
struct BatchCursor {
  std::int64_t m = 1;
  std::int64_t t = 1;
  std::int64_t l = 1;
  std::int64_t next_boundary = 0;

  std::int64_t step() const { return t + l - 1; }
};

// Cursor positioned at step i = 1.
BatchCursor make_cursor(const BatchScheme& scheme);

// Moves the cursor from step i to i + 1, resetting the window when i + 1
// opens a new motivating batch.
void advance(BatchCursor& cursor, const BatchScheme& scheme);

}  // namespace sgdinf
