#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>

#include <json.hpp>

#include "ricci/construction.hpp"
#include "ricci/report.hpp"
#include "ricci/solver.hpp"

namespace ricci {

/// Binary field snapshot (.rdf): 64-byte little-endian header
/// (magic "RDF1", format version, a, n_r, n_theta, clustering, collar,
/// flow time t) followed by one f64 per node, center first, rings in
/// order. Round-trips bit-exactly.
void save_field(const ScalarField& f, double t, const std::filesystem::path& file);
std::pair<ScalarField, double> load_field(const std::filesystem::path& file);

/// CSV dump (r, theta, value), 17 significant digits.
void dump_field_csv(const ScalarField& f, std::ostream& os);

/// Trajectory directory: manifest.json + snap_NNNN.rdf per snapshot +
/// diagnostics.csv (t, dt, min u, max u, min K, max K).
void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir);
Trajectory load_trajectory(const std::filesystem::path& dir);

/// Construction directory: k_NNN/ trajectory dirs, limit/ trajectory dir
/// and summary.json (convergence history, monotonicity margins, barrier
/// pre-checks of the limit).
void save_construction(const ConstructionResult& res, const std::filesystem::path& dir);

nlohmann::json report_json(const VerifierReport& rep);
VerifierReport report_from_json(const nlohmann::json& j);

/// Bundle of reports: {format_version, all_pass, reports: [...]}.
nlohmann::json report_bundle(std::span<const VerifierReport> reports);

} // namespace ricci
