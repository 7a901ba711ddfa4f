// Acceptance runs: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "polylab/cli.hpp"
#include "test_helpers.hpp"

namespace polylab {
namespace {

constexpr std::uint64_t kSeed = 7;
constexpr double kPi = std::numbers::pi;

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [miss]");
  }
};

std::string f(double v, int digits = 3) { return format_fixed(v, digits); }

ExperimentConfig replicated(ExperimentKind kind, int d, int ell, std::vector<long> grid, int reps) {
  ExperimentConfig cfg;
  cfg.name = std::string(to_string(kind)) + "_d" + std::to_string(d);
  cfg.kind = kind;
  cfg.body = ConvexBody::ball(d);
  cfg.ell = ell;
  cfg.n_grid = std::move(grid);
  cfg.replications = reps;
  cfg.master_seed = kSeed;
  return cfg;
}

const std::vector<long> kGrid2{32, 64, 128, 256, 512, 1024};
const std::vector<long> kGrid3{32, 64, 128, 256, 512};

// Variance records are shared with the normality checks: both use the same
// disjoint (n, replication) streams.
std::vector<RunRecord> g_d2_ell2, g_d3_ell3;

void variance_exponent_check(Line& line, int d, const std::vector<int>& ells,
                             const std::vector<long>& grid, int reps,
                             std::vector<RunRecord>& keep_top) {
  const auto cfg = replicated(ExperimentKind::Variance, d, ells.front(), grid, reps);
  auto tables = collect_records(prepare(cfg, ells), 0);
  const double target = variance_exponent(d);
  for (std::size_t k = 0; k < ells.size(); ++k) {
    const auto rep = variance_from_records(tables[k]);
    line.require(std::abs(rep.fit.slope - target) <= 0.35,
                 "ell=" + std::to_string(ells[k]) + " slope " + f(rep.fit.slope) + " +- " +
                     f(rep.fit.slope_stderr));
  }
  keep_top = std::move(tables.back());
}

void criterion1(Line& line) { variance_exponent_check(line, 2, {1, 2}, kGrid2, 4000, g_d2_ell2); }

void criterion2(Line& line) {
  variance_exponent_check(line, 3, {1, 2, 3}, kGrid3, 2000, g_d3_ell3);
}

void criterion3(Line& line) {
  for (const auto& [d, grid, reps] :
       {std::tuple{2, kGrid2, 4000}, std::tuple{3, kGrid3, 2000}}) {
    const auto cfg = replicated(ExperimentKind::MeanDeficit, d, d, grid, reps);
    const auto rep = run_mean_deficit_experiment(cfg, 0);
    line.require(std::abs(rep.fit.slope - mean_deficit_exponent(d)) <= 0.15,
                 "d=" + std::to_string(d) + " slope " + f(rep.fit.slope) + " (plateau " +
                     f(rep.plateau_previous) + " -> " + f(rep.plateau) + ")");
  }
}

void criterion4(Line& line) {
  for (const auto& [d, records, threshold] :
       {std::tuple{2, &g_d2_ell2, 0.05}, std::tuple{3, &g_d3_ell3, 0.06}}) {
    const auto res = clt_from_records(*records);
    double at256 = 1.0, first = res.per_n.front().kolmogorov, at512 = 1.0;
    for (const auto& r : res.per_n) {
      if (r.n == 256) at256 = r.kolmogorov;
      if (r.n == 512) at512 = r.kolmogorov;
    }
    line.require(at256 < threshold, "d=" + std::to_string(d) + " d_K(256)=" + f(at256, 4));
    line.require(at512 <= first + 0.02,
                 "d_K(32)=" + f(first, 4) + " d_K(512)=" + f(at512, 4));
  }
}

void criterion5(Line& line) {
  auto cfg = replicated(ExperimentKind::Containment, 2, 2, {500}, 2000);
  cfg.c_alpha = 4.0;
  const double strong = run_containment_experiment(cfg, 0).rows[0].failure;
  line.require(strong <= 0.01, "c=4 n=500 failure " + f(strong, 4));
  cfg.c_alpha = 0.01;
  cfg.n_grid = {16};
  const double weak = run_containment_experiment(cfg, 0).rows[0].failure;
  line.require(weak >= 0.5, "c=0.01 n=16 failure " + f(weak, 4));
}

void criterion6(Line& line) {
  std::vector<double> eps;
  for (int i = 0; i <= 12; ++i) eps.push_back(1e-6 * std::pow(10.0, i / 4.0));
  for (int d : {2, 3}) {
    const auto caps = cap_exponent_check(d, eps);
    const double fwd = (d - 1.0) / (d + 1.0), rev = (d + 1.0) / (d - 1.0);
    line.require(std::abs(caps.boundary_vs_volume.slope - fwd) <= 0.02,
                 "d=" + std::to_string(d) + " " + f(caps.boundary_vs_volume.slope, 4) + " vs " +
                     f(fwd, 4));
    line.require(std::abs(caps.volume_vs_boundary.slope - rev) <= 0.02,
                 f(caps.volume_vs_boundary.slope, 4) + " vs " + f(rev, 4));
  }
}

void criterion7(Line& line) {
  const std::vector<double> grid{0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5};
  for (const auto& [d, ell] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
    RngStream rng(kSeed, static_cast<std::uint64_t>(10 * d + ell));
    const auto rep = run_grassmannian_experiment(d, ell, grid, 1000000, rng);
    line.require(std::abs(rep.fit.slope - (d - ell)) <= 0.15,
                 "(" + std::to_string(d) + "," + std::to_string(ell) + ") slope " +
                     f(rep.fit.slope));
  }
}

void criterion8(Line& line) {
  const auto rep = efron_stein_estimate(replicated(ExperimentKind::EfronStein, 2, 2, kGrid2, 4000), 0);
  line.require(std::abs(rep.fit.slope - variance_exponent(2)) <= 0.4, "J slope " + f(rep.fit.slope));
  double min_ratio = 1e300;
  for (const auto& r : rep.rows) min_ratio = std::min(min_ratio, r.ratio);
  line.require(min_ratio >= 0.8, "min J/Var " + f(min_ratio));
}

void criterion9(Line& line) {
  bool cube_ok = true;
  std::ostringstream worst;
  for (int d = 2; d <= 4; ++d) {
    const Polytope cube = convex_hull(testing::cube_corners(d), d);
    for (int ell = 1; ell <= d; ++ell) {
      const double expected = binomial(d, ell);
      if (has_exact_path(d, ell)) {
        const double v = intrinsic_volume(cube, ell);
        if (!(std::abs(v - expected) <= 1e-9 * expected)) {
          cube_ok = false;
          worst << " d=" << d << ",ell=" << ell << ":" << v;
        }
      } else {
        const auto est = kubota_estimate(cube, ell, make_panel(d, ell, 100000, kSeed));
        if (!(std::abs(est.value - expected) <= 4.0 * est.standard_error)) {
          cube_ok = false;
          worst << " d=" << d << ",ell=" << ell << ":" << est.value << "+-" << est.standard_error;
        }
      }
    }
  }
  line.require(cube_ok, "cube V_ell = C(d,ell)" + worst.str());

  const auto ball = ConvexBody::ball(3);
  bool ball_ok = true;
  for (int ell = 1; ell <= 3; ++ell) {
    const auto est = kubota_estimate(ball, ell, make_panel(3, ell, 100000, kSeed + ell));
    const double ref = reference_intrinsic_volume(ball, ell);
    ball_ok = ball_ok && std::abs(est.value - ref) <= 4.0 * est.standard_error + 1e-12 * ref;
  }
  line.require(ball_ok, "ball d=3 closed form vs panel");

  bool simplex_ok = true;
  for (int d = 2; d <= 6; ++d) {
    const double v = volume(convex_hull(testing::unit_simplex(d), d));
    simplex_ok = simplex_ok && std::abs(v * std::tgamma(d + 1.0) - 1.0) <= 1e-12;
  }
  line.require(simplex_ok, "simplex volume 1/d!");

  double radius_err = 0.0;
  for (double t = 0.01; t < 0.5; t += 0.01) {
    radius_err = std::max(radius_err, std::abs(surface_body_radius(t, 2) - std::cos(kPi * t)));
    radius_err = std::max(radius_err, std::abs(surface_body_radius(t, 3) - (1.0 - 2.0 * t)));
  }
  line.require(radius_err <= 1e-10, "surface-body radius error " + format_g17(radius_err));
}

void criterion10(Line& line) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "polylab_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string campaign = (root / "campaign.json").string();
  write_text_file(campaign, R"({"output_dir": "unused", "threads": 0, "experiments": [
    {"name": "var", "kind": "variance", "body": {"kind": "ball", "dim": 3}, "ell": 2,
     "n_grid": [16, 32, 64], "replications": 200, "master_seed": 7},
    {"name": "es", "kind": "efron-stein", "body": {"kind": "ellipsoid", "semiaxes": [1, 1.5, 0.5]},
     "ell": 3, "n_grid": [16, 24, 32], "replications": 100, "master_seed": 8},
    {"name": "kub", "kind": "clt", "body": {"kind": "ball", "dim": 4}, "ell": 2,
     "n_grid": [20], "replications": 100, "master_seed": 9, "panel_size": 16}]})");
  std::ostringstream sink;
  for (const char* threads : {"1", "8"}) {
    const int code = run_command({"campaign", "--config", campaign, "--threads", threads, "--out",
                                  (root / threads).string()},
                                 sink, sink);
    line.require(code == kExitOk, std::string("threads=") + threads + " exit " + std::to_string(code));
  }
  for (const char* name : {"var", "es", "kub"}) {
    const std::string file = std::string(name) + "_records.csv";
    line.require(read_text_file(root / "1" / file) == read_text_file(root / "8" / file),
                 file + " identical");
  }
}

}  // namespace
}  // namespace polylab

int main() {
  using namespace polylab;
  const std::vector<std::pair<const char*, std::function<void(Line&)>>> criteria{
      {"variance exponent d=2", criterion1},
      {"variance exponent d=3", criterion2},
      {"mean-deficit exponent", criterion3},
      {"normal approximation", criterion4},
      {"surface-body containment", criterion5},
      {"cap exponents", criterion6},
      {"grassmannian angle measure", criterion7},
      {"efron-stein diagnostic", criterion8},
      {"exact values", criterion9},
      {"determinism across thread counts", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(line);
    } catch (const std::exception& e) {
      line.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", line.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, line.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !line.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
