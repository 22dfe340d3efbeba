#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "atdev/analytic_model.h"
#include "atdev/dataset.h"

namespace atdev {

enum class SimCase {
  Indep61,          // x1..x5 ~ U(-1,1); y = x1 + x2^2 + x3^3 + 0.8 x2 x4
  Additive621,      // x2 = 0.8 x1 + e, x3 = -x1 + e; y = x1^2 + x2
  Interaction622,   // x2 = -x1 + e, x3 ~ U(-1,1); y = x1 + x2 + x1 x2
  Complex623,       // x4 = x2 + e, x5 = -x3 + e; y = x1 + (3x2^2-1)/2 + (4x3^3-3x3)/2 + 0.8 x2 x4
  Le71Indep,        // x1..x5 ~ U(-1,1), same response as Complex623
  Le71Corr,         // same recipe as Complex623
  BivariateNormal,  // (x1, x2) bivariate normal, response from a catalog model
};

std::string to_string(SimCase c);
// Accepts the canonical names plus case1/case2/case3.
SimCase parse_sim_case(std::string_view s);

struct BivariateNormalParams {
  double mu1 = 0.0, mu2 = 0.0;
  double sd1 = 1.0, sd2 = 1.0;
  double rho = 0.0;
  ModelId model = ModelId::AdditiveLinear;

  bool operator==(const BivariateNormalParams&) const = default;
};

// Every "e" above is an independent N(0, noise_sd^2) draw, as is the additive
// response noise.
struct SimSpec {
  SimCase id = SimCase::Indep61;
  std::size_t n = 100000;
  double noise_sd = 0.1;
  std::uint64_t seed = 1;
  BivariateNormalParams bvn;

  // Throws UsageError for n == 0, negative noise or an invalid bivariate
  // normal (sd <= 0, |rho| >= 1, model not two-dimensional).
  void validate() const;

  bool operator==(const SimSpec&) const = default;
};

// Columns x1..xp and response y. Bit-identical for identical specs.
Dataset generate(const SimSpec& spec);

// Noise-free regression function of the case.
AnalyticModel generating_model(const SimSpec& spec);

// Var(f) / (Var(f) + noise_sd^2) under the population distribution, computed
// exactly by tensor Gauss quadrature over the independent base draws.
double theoretical_r2(const SimSpec& spec);

}  // namespace atdev
