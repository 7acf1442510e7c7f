#include "ricci/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <sstream>

#include "ricci/errors.hpp"
#include "ricci/metrics.hpp"
#include "ricci/verify.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; add byte swapping for this platform");

namespace ricci {
namespace {

constexpr char kMagic[4] = {'R', 'D', 'F', '1'};
constexpr std::uint32_t kFormatVersion = 1;

struct Header {
    char magic[4];
    std::uint32_t version;
    double a;
    std::uint32_t n_r;
    std::uint32_t n_theta;
    double clustering;
    double collar;
    double t;
    char reserved[16];
};
static_assert(sizeof(Header) == 64, "snapshot header must be exactly 64 bytes");

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

} // namespace

void save_field(const ScalarField& f, double t, const std::filesystem::path& file) {
    const DiscGrid& g = *f.grid();
    Header h{};
    std::memcpy(h.magic, kMagic, 4);
    h.version = kFormatVersion;
    h.a = g.radius();
    h.n_r = std::uint32_t(g.n_r());
    h.n_theta = std::uint32_t(g.n_theta());
    h.clustering = g.clustering();
    h.collar = g.collar();
    h.t = t;

    std::ofstream os(file, std::ios::binary);
    if (!os) throw IoError(fmt::format("cannot open '{}' for writing", file.string()));
    os.write(reinterpret_cast<const char*>(&h), sizeof h);
    os.write(reinterpret_cast<const char*>(f.values().data()),
             std::streamsize(f.size() * sizeof(double)));
    if (!os) throw IoError(fmt::format("write failed for '{}'", file.string()));
}

std::pair<ScalarField, double> load_field(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw IoError(fmt::format("cannot open '{}'", file.string()));
    Header h{};
    is.read(reinterpret_cast<char*>(&h), sizeof h);
    if (!is || std::memcmp(h.magic, kMagic, 4) != 0)
        throw IoError(fmt::format("'{}' is not a field snapshot", file.string()));
    if (h.version != kFormatVersion)
        throw IoError(fmt::format("'{}': unsupported format version {}", file.string(),
                                  h.version));
    GridPtr grid = build_grid(h.a, int(h.n_r), int(h.n_theta), h.clustering, h.collar);
    ScalarField f(grid);
    is.read(reinterpret_cast<char*>(f.values().data()),
            std::streamsize(f.size() * sizeof(double)));
    if (!is) throw IoError(fmt::format("'{}': truncated value payload", file.string()));
    return {std::move(f), h.t};
}

void dump_field_csv(const ScalarField& f, std::ostream& os) {
    const DiscGrid& g = *f.grid();
    os << "r,theta,value\n";
    os << "0,0," << fmt17(f[0]) << "\n";
    const auto radii = g.radii();
    for (int i = 1; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
            os << fmt17(radii[i]) << ',' << fmt17(g.theta(j)) << ','
               << fmt17(f.at(i, j)) << "\n";
}

namespace {

nlohmann::json grid_json(const DiscGrid& g) {
    return {{"a", g.radius()},
            {"n_r", g.n_r()},
            {"n_theta", g.n_theta()},
            {"clustering", g.clustering()},
            {"collar", g.collar()}};
}

nlohmann::json config_json(const FlowConfig& cfg) {
    return {{"scheme", cfg.scheme == Scheme::ExplicitRk2 ? "explicit-rk2" : "semi-implicit"},
            {"cfl_safety", cfg.cfl_safety},
            {"dt_max", std::isfinite(cfg.dt_max) ? nlohmann::json(cfg.dt_max)
                                                 : nlohmann::json("inf")},
            {"tolerance", cfg.tolerance},
            {"max_linear_iters", cfg.max_linear_iters},
            {"snapshot_times", cfg.snapshot_times}};
}

FlowConfig config_from_json(const nlohmann::json& j) {
    FlowConfig cfg;
    cfg.scheme = j.at("scheme") == "semi-implicit" ? Scheme::SemiImplicit
                                                   : Scheme::ExplicitRk2;
    cfg.cfl_safety = j.at("cfl_safety").get<double>();
    cfg.dt_max = j.at("dt_max").is_string() ? std::numeric_limits<double>::infinity()
                                            : j.at("dt_max").get<double>();
    cfg.tolerance = j.at("tolerance").get<double>();
    cfg.max_linear_iters = j.at("max_linear_iters").get<int>();
    cfg.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    return cfg;
}

nlohmann::json policy_json(const BoundaryPolicy& p) {
    switch (p.kind()) {
    case BoundaryPolicy::Kind::Frozen:
        return {{"kind", "frozen"}};
    case BoundaryPolicy::Kind::ConstantCurvatureEvolution:
        return {{"kind", "constant-curvature-evolution"}, {"c0", p.c0()}};
    case BoundaryPolicy::Kind::Prescribed:
        return {{"kind", "prescribed"}};
    }
    return {};
}

BoundaryPolicy policy_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "frozen") return BoundaryPolicy::frozen();
    if (kind == "constant-curvature-evolution")
        return BoundaryPolicy::constant_curvature(j.at("c0").get<double>());
    throw IoError(fmt::format(
        "boundary policy '{}' cannot be reconstructed from a manifest", kind));
}

} // namespace

void save_trajectory(const Trajectory& traj, const std::filesystem::path& dir) {
    if (traj.snapshots.empty()) throw UsageError("save_trajectory: empty trajectory");
    if (traj.policy.kind() == BoundaryPolicy::Kind::Prescribed)
        throw UsageError("save_trajectory: prescribed boundary policies are not persistable");
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["format_version"] = 1;
    manifest["grid"] = grid_json(*traj.grid());
    manifest["config"] = config_json(traj.config);
    manifest["policy"] = policy_json(traj.policy);
    manifest["metadata"] = traj.metadata;
    manifest["diagnostics"] = "diagnostics.csv";

    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t m = 0; m < traj.snapshots.size(); ++m) {
        const std::string name = fmt::format("snap_{:04d}.rdf", m);
        save_field(traj.snapshots[m].u, traj.snapshots[m].t, dir / name);
        snaps.push_back({{"t", traj.snapshots[m].t}, {"file", name}});
    }
    manifest["snapshots"] = snaps;

    {
        std::ofstream os(dir / "diagnostics.csv");
        if (!os) throw IoError("cannot write diagnostics.csv");
        os << "t,dt,u_min,u_max,K_min,K_max\n";
        for (const auto& d : traj.diagnostics)
            os << fmt17(d.t) << ',' << fmt17(d.dt) << ',' << fmt17(d.u_min) << ','
               << fmt17(d.u_max) << ',' << fmt17(d.K_min) << ',' << fmt17(d.K_max) << "\n";
    }
    std::ofstream os(dir / "manifest.json");
    if (!os) throw IoError("cannot write manifest.json");
    os << manifest.dump(2) << "\n";
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
    std::ifstream is(dir / "manifest.json");
    if (!is) throw IoError(fmt::format("no manifest.json under '{}'", dir.string()));
    nlohmann::json manifest = nlohmann::json::parse(is);
    if (manifest.at("format_version").get<int>() != 1)
        throw IoError("unsupported trajectory format version");

    Trajectory traj;
    traj.config = config_from_json(manifest.at("config"));
    traj.policy = policy_from_json(manifest.at("policy"));
    if (manifest.contains("metadata"))
        traj.metadata = manifest.at("metadata").get<std::map<std::string, std::string>>();

    for (const auto& s : manifest.at("snapshots")) {
        auto [f, t] = load_field(dir / s.at("file").get<std::string>());
        if (std::fabs(t - s.at("t").get<double>()) > 1e-12 * std::max(1.0, std::fabs(t)))
            throw IoError("manifest and snapshot header disagree on t");
        traj.snapshots.push_back({t, std::move(f)});
    }

    if (std::ifstream diag(dir / "diagnostics.csv"); diag) {
        std::string line;
        std::getline(diag, line); // header
        while (std::getline(diag, line)) {
            if (line.empty()) continue;
            StepDiag d{};
            std::istringstream ls(line);
            char comma;
            ls >> d.t >> comma >> d.dt >> comma >> d.u_min >> comma >> d.u_max >> comma >>
                d.K_min >> comma >> d.K_max;
            if (!ls.fail()) traj.diagnostics.push_back(d);
        }
    }
    return traj;
}

void save_construction(const ConstructionResult& res, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < res.per_k.size(); ++i)
        save_trajectory(res.per_k[i], dir / fmt::format("k_{:03d}", res.plan.k_list[i]));
    save_trajectory(res.limit, dir / "limit");

    nlohmann::json summary;
    summary["format_version"] = 1;
    summary["plan"] = {{"k_list", res.plan.k_list},
                       {"eta", res.plan.eta},
                       {"T", res.plan.T},
                       {"snapshot_times", res.plan.snapshot_times},
                       {"limit_tol", res.plan.limit_tol},
                       {"base_n_r", res.plan.base_n_r},
                       {"n_r_per_k", res.plan.n_r_per_k},
                       {"n_theta", res.plan.n_theta},
                       {"clustering", res.plan.clustering},
                       {"collar", res.plan.collar},
                       {"reference_radius", res.plan.reference_radius}};
    summary["reference_grid"] = grid_json(*res.ref_grid);

    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : res.pairs)
        pairs.push_back({{"k_lo", p.k_lo},
                         {"k_hi", p.k_hi},
                         {"sup_diff", p.sup_diff},
                         {"violation", p.violation}});
    summary["convergence"] = {
        {"pairs", pairs},
        {"converged_per_snapshot", res.converged_per_snapshot},
        {"all_converged", res.all_converged}};

    // barrier pre-checks of the limit estimate
    {
        std::vector<double> eps{res.plan.snapshot_times.size() > 1
                                    ? res.plan.snapshot_times[1]
                                    : res.plan.T};
        auto [params, proxy] = admissibility_report(res.limit, eps);
        auto barriers = barrier_report(res.limit, res.limit.snapshots.front().u, params.C);
        nlohmann::json pre;
        pre["C_measured"] = params.C;
        pre["completeness_proxy"] = report_json(proxy);
        for (const auto& b : barriers) pre[b.check] = report_json(b);
        summary["barrier_prechecks"] = pre;
    }

    std::ofstream os(dir / "summary.json");
    if (!os) throw IoError("cannot write summary.json");
    os << summary.dump(2) << "\n";
}

nlohmann::json report_json(const VerifierReport& rep) {
    return {{"check", rep.check},
            {"pass", rep.pass},
            {"margin", rep.margin},
            {"location", {{"t", rep.where.t}, {"r", rep.where.r}, {"theta", rep.where.theta}}},
            {"tolerance", rep.tolerance},
            {"domain", rep.domain}};
}

VerifierReport report_from_json(const nlohmann::json& j) {
    VerifierReport rep;
    rep.check = j.at("check").get<std::string>();
    rep.pass = j.at("pass").get<bool>();
    rep.margin = j.at("margin").get<double>();
    rep.tolerance = j.at("tolerance").get<double>();
    rep.domain = j.at("domain").get<std::string>();
    rep.where.t = j.at("location").at("t").get<double>();
    rep.where.r = j.at("location").at("r").get<double>();
    rep.where.theta = j.at("location").at("theta").get<double>();
    return rep;
}

nlohmann::json report_bundle(std::span<const VerifierReport> reports) {
    nlohmann::json out;
    out["format_version"] = 1;
    bool all = true;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        all = all && r.pass;
        arr.push_back(report_json(r));
    }
    out["all_pass"] = all;
    out["reports"] = arr;
    return out;
}

} // namespace ricci
