#include "ahlab/errors.hpp"

namespace ahlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::degenerate_metric: return "degenerate metric";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::positivity_loss: return "positivity loss";
    case Errc::convexity_loss: return "convexity loss";
    case Errc::domain: return "domain error";
    case Errc::insufficient_data: return "insufficient data";
    case Errc::ill_conditioned: return "ill-conditioned";
    case Errc::hypothesis_violation: return "hypothesis violation";
    case Errc::precondition: return "precondition violated";
    case Errc::tolerance: return "tolerance not reached";
    case Errc::no_finite_radius: return "no finite radius";
    case Errc::reduction_undefined: return "reduction undefined";
    case Errc::out_of_span: return "out of span";
    case Errc::non_invertible_map: return "non-invertible map";
    case Errc::blow_up: return "blow-up";
    case Errc::config: return "config error";
    case Errc::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace ahlab
