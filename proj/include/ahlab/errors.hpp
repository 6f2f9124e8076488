#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ahlab {

enum class Errc {
  degenerate_metric,
  dimension_mismatch,
  positivity_loss,
  convexity_loss,
  domain,
  insufficient_data,
  ill_conditioned,
  hypothesis_violation,
  precondition,
  tolerance,
  no_finite_radius,
  reduction_undefined,
  out_of_span,
  non_invertible_map,
  blow_up,
  config,
  io,
};

std::string_view to_string(Errc code);

// Single exception type for the library. `where` carries the radial
// coordinate (r, rho or t) at which an integration or check failed, if any.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<double> where = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        where_(where) {}

  Errc code() const noexcept { return code_; }
  std::optional<double> where() const noexcept { return where_; }

 private:
  Errc code_;
  std::optional<double> where_;
};

}  // namespace ahlab
