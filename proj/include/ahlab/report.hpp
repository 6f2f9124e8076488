#pragma once

#include "ahlab/comparison.hpp"
#include "ahlab/compactification.hpp"
#include "ahlab/decay_fit.hpp"
#include "ahlab/gallery.hpp"
#include "ahlab/riccati.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ahlab {

using Json = nlohmann::ordered_json;

/// A table written as one comment line naming columns with units, then
/// comma-separated rows with round-trip precision.
struct CsvTable {
  std::string title;
  std::vector<std::string> columns;  // "name [unit]"
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const Json& value);

/// r, lambda, both envelopes (NaN where inactive), |lambda - 1|.
CsvTable to_csv(const ScalarTrajectory& traj, const EnvelopeReport& rep);
/// r, eigenvalue extremes of S and g, symmetry defect.
CsvTable to_csv(const ShapeMetricTrajectory& traj);
CsvTable to_csv(const ModelTrajectory& traj);
/// r, y, dy.
CsvTable to_csv(const ParticularSolution& ps);
/// r, max |dW|, max |d gbar|.
CsvTable to_csv(const TangentialTrajectory& traj);
/// One row per (rho, y, component): direction 0 is rho, then tangential.
CsvTable to_csv(const GbarDerivativeGrid& grid);
/// rho, sup_y value, fitted power law.
CsvTable to_csv(const ExponentCheck& check);

Json to_json(const DecayFit& fit);
Json to_json(const EnvelopeReport& rep);
Json to_json(const ComparisonReport& rep);
Json to_json(const RoundTripReport& rep);
Json to_json(const ExponentReport& rep);
Json to_json(const FuzzSummary& summary);
Json to_json(const CoefBoundsReport& rep);
Json to_json(const DominanceReport& rep);
Json to_json(const LipschitzReport& rep);
Json to_json(const ExponentCheck& check);
Json to_json(const CounterexampleAudit& audit);

}  // namespace ahlab
