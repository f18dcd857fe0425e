#pragma once

namespace kd::losses {

// Composite loss result. Components are stored already weighted (the KL and
// Wasserstein entries include their lambda factors), so total is always the
// plain sum of the applicable components.
struct LossValue {
  double total = 0.0;
  double hard_bce = 0.0;
  double soft_bce = 0.0;
  double kl_term = 0.0;
  double wasserstein_term = 0.0;
};

}  // namespace kd::losses
