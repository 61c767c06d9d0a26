// Acceptance battery for the waveguide resonance solver. Each criterion runs
// standalone:  acceptance <n>  with n in 1..11, or  acceptance all.  Every run
// prints exactly one line per criterion, "criterion n: PASS (...)" or
// "criterion n: FAIL (...)", and exits 0 only if everything requested passed.
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "starkwg/config.hpp"
#include "starkwg/distortion.hpp"
#include "starkwg/eigensolve.hpp"
#include "starkwg/geometry.hpp"
#include "starkwg/grid.hpp"
#include "starkwg/hamiltonian.hpp"
#include "starkwg/operator_matrix.hpp"
#include "starkwg/records.hpp"
#include "starkwg/resonance.hpp"
#include "starkwg/validation.hpp"

namespace fs = std::filesystem;
using namespace starkwg;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

GuideGeometry reference_guide() {
  return GuideGeometry(1.0, make_bump_profile(0.5, 4.0));
}

RealOperator wrap(const Eigen::SparseMatrix<double>& A) {
  return RealOperator{A, MatrixStructure::real_symmetric};
}

ComplexOperator wrap(const Eigen::SparseMatrix<std::complex<double>>& A) {
  return ComplexOperator{A, MatrixStructure::complex_symmetric};
}

GridSpec make_grid(double L_minus, double L_plus, int N_s, int N_u) {
  GridSpec g;
  g.L_minus = L_minus;
  g.L_plus = L_plus;
  g.N_s = N_s;
  g.N_u = N_u;
  return g;
}

// Shared setup for the production resonance runs: tilt 0.2, cutoff scale
// steepened to alpha = 0.45 so the distortion stays inside its trust region
// at the field intensities swept here.
ResonanceOptions production_resonance_options() {
  ResonanceOptions r;
  r.alpha = 0.45;
  return r;
}

GridSpec sweep_grid() { return make_grid(-470.0, 40.0, 6374, 24); }

fs::path data_dir() {
  const char* env = std::getenv("STARKWG_ACCEPT_DIR");
  fs::path p = env != nullptr ? fs::path(env) : fs::temp_directory_path();
  fs::create_directories(p);
  return p;
}

fs::path sweep_estimates_path() { return data_dir() / "sweep_estimates.jsonl"; }

std::vector<ResonanceEstimate> run_production_sweep() {
  const GuideGeometry geom = reference_guide();
  const GridSpec grid = sweep_grid();
  const ResonanceOptions ropts = production_resonance_options();
  std::vector<double> Fs;
  for (int j = 0; j < 8; ++j) Fs.push_back(1e-5 * std::pow(10.0, j / 7.0));

  const BoundState bs = bound_state_reference(geom, grid, ropts.solver);
  const std::vector<ResonanceEstimate> ests = field_sweep(
      geom, grid, 0.2, bs.E0, Fs, {}, ropts, [](const ResonanceEstimate&) {});

  std::ofstream out(sweep_estimates_path());
  for (const ResonanceEstimate& e : ests) out << estimate_json(e).dump() << "\n";
  return ests;
}

// 1. The reference bend binds below the open-guide threshold, and halving the
//    longitudinal step moves the ground energy by at most 1e-4, inside two
//    minutes of wall time.
Outcome criterion_1() {
  const auto t0 = Clock::now();
  const GuideGeometry geom = reference_guide();
  const SolverOptions opts;
  const double E0_h =
      bound_state_reference(geom, make_grid(-30.0, 30.05, 1200, 24), opts).E0;
  const double E0_h2 =
      bound_state_reference(geom, make_grid(-30.0, 30.05, 2401, 24), opts).E0;
  const double dt = seconds_since(t0);
  const double pi2 = M_PI * M_PI;
  const double diff = std::abs(E0_h - E0_h2);

  Outcome o;
  o.pass = E0_h < pi2 && diff <= 1e-4 && dt <= 120.0;
  o.detail = "E0=" + fmt("%.12f", E0_h) + " refined=" + fmt("%.12f", E0_h2) +
             " |diff|=" + fmt("%.3e", diff) + " threshold=" + fmt("%.6f", pi2) +
             " t=" + fmt("%.1f", dt) + "s";
  return o;
}

// 2. A small real distortion is a change of variables: the three lowest
//    eigenvalues move only at discretization order, so the deviation shrinks
//    like h^2 under refinement (ratio in [2.5, 6] between the two grids).
Outcome criterion_2() {
  const GuideGeometry geom = reference_guide();
  const FieldConfig field{0.5, 0.2};
  const DistortionField df =
      distortion_field(field, build_cutoff(-1.0, 0.4), 0.25);
  const double theta = 0.5 * df.theta0();

  const EquivalenceReport coarse = unitary_equivalence_check(
      geom, field, make_grid(-12.0, 6.0, 600, 16), df, theta, 3);
  const EquivalenceReport fine = unitary_equivalence_check(
      geom, field, make_grid(-12.0, 6.0, 1201, 33), df, theta, 3);

  Outcome o;
  const bool sane = coarse.max_deviation > 0.0 && fine.max_deviation > 0.0;
  const double ratio =
      sane ? coarse.max_deviation / fine.max_deviation
           : std::numeric_limits<double>::quiet_NaN();
  o.pass = sane && ratio >= 2.5 && ratio <= 6.0;
  o.detail = "theta=" + fmt("%.4e", theta) +
             " dev_coarse=" + fmt("%.4e", coarse.max_deviation) +
             " dev_fine=" + fmt("%.4e", fine.max_deviation) +
             " ratio=" + fmt("%.4f", ratio);
  return o;
}

// 3. Over a log sweep of F in [1e-3, 1e-2] times the binding gap, the
//    resonance converges to the bound state: |Z - E0| strictly decreases as F
//    shrinks and ends below 1e-2 gap. Domains grow with the turning point
//    -gap / (F cos eta) plus the absorption margin, at fixed step 0.08.
Outcome criterion_3() {
  const GuideGeometry geom = reference_guide();
  const ResonanceOptions ropts = production_resonance_options();
  const double L_minus[5] = {-1079.60, -662.00, -462.48, -412.96, -496.64};
  const int N_s[5] = {13994, 8774, 6280, 5661, 6707};

  const GridSpec top_grid = make_grid(L_minus[4], 40.0, N_s[4], 24);
  const double gap =
      bound_state_reference(geom, top_grid, ropts.solver).gap();

  std::vector<double> dist(5);
  std::string rows;
  for (int k = 4; k >= 0; --k) {
    const double F = gap * std::pow(10.0, -3.0 + 0.25 * k);
    const GridSpec grid = make_grid(L_minus[k], 40.0, N_s[k], 24);
    const BoundState bs = bound_state_reference(geom, grid, ropts.solver);
    const ResonanceEstimate est =
        locate_resonance(geom, FieldConfig{F, 0.2}, grid, bs.E0, {}, ropts);
    dist[k] = std::abs(est.Z - bs.E0);
    rows += " F=" + fmt("%.3e", F) + ":" + fmt("%.3e", dist[k]);
  }

  bool monotone = true;
  for (int k = 4; k > 0; --k) monotone = monotone && dist[k] > dist[k - 1];
  const double limit = 1e-2 * gap;

  Outcome o;
  o.pass = monotone && dist[0] <= limit;
  o.detail = "gap=" + fmt("%.4e", gap) + rows +
             (monotone ? " monotone" : " NOT monotone") +
             " smallest=" + fmt("%.3e", dist[0]) + " limit=" + fmt("%.3e", limit);
  return o;
}

// 4. The widths over a full decade of F follow ln|Im Z| = ln c1 - c2 / F with
//    r^2 >= 0.99 and c2 > 0 on at least five uncensored points, inside thirty
//    minutes; the same fit recovers a synthetic law to 1e-10.
Outcome criterion_4() {
  const auto t0 = Clock::now();
  const std::vector<ResonanceEstimate> ests = run_production_sweep();
  const WidthFit fit = fit_width_law(ests);
  const double dt = seconds_since(t0);

  std::vector<ResonanceEstimate> syn;
  const double c1_true = 3.7e-4;
  const double c2_true = 1.9e-4;
  for (int j = 0; j < 8; ++j) {
    ResonanceEstimate e;
    e.F = 1e-5 * std::pow(10.0, j / 7.0);
    e.Z = std::complex<double>(9.85, -c1_true * std::exp(-c2_true / e.F));
    e.residual = 1e-16;
    syn.push_back(e);
  }
  const WidthFit sfit = fit_width_law(syn);
  const bool syn_ok = sfit.ok() &&
                      std::abs(sfit.c2 - c2_true) <= 1e-10 * c2_true &&
                      std::abs(sfit.c1 - c1_true) <= 1e-10 * c1_true;

  Outcome o;
  const bool decade = fit.F_max >= 10.0 * fit.F_min * (1.0 - 1e-12);
  o.pass = fit.ok() && fit.n_used >= 5 && decade && fit.r_squared >= 0.99 &&
           fit.c2 > 0.0 && syn_ok && dt <= 1800.0;
  o.detail = "n_used=" + std::to_string(fit.n_used) +
             " r2=" + fmt("%.5f", fit.r_squared) + " c2=" + fmt("%.4e", fit.c2) +
             " c1=" + fmt("%.4e", fit.c1) + " F=[" + fmt("%.1e", fit.F_min) +
             "," + fmt("%.1e", fit.F_max) + "]" +
             (syn_ok ? " synthetic_ok" : " synthetic_BAD") +
             " t=" + fmt("%.0f", dt) + "s";
  return o;
}

// 5. Every accepted resonance estimate keeps its imaginary part on the decay
//    side up to solver noise: Im Z <= 1e-10 + 10 residual.
Outcome criterion_5() {
  std::vector<std::pair<double, double>> rows;  // (im, residual)
  std::ifstream in(sweep_estimates_path());
  if (in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json j = nlohmann::json::parse(line);
      rows.emplace_back(j.at("Z")[1].get<double>(),
                        j.at("residual").get<double>());
    }
  }
  if (rows.empty()) {
    for (const ResonanceEstimate& e : run_production_sweep())
      rows.emplace_back(e.Z.imag(), e.residual);
  }

  double worst = -std::numeric_limits<double>::infinity();
  bool all_ok = true;
  for (const auto& [im, residual] : rows) {
    const double margin = im - (1e-10 + 10.0 * residual);
    worst = std::max(worst, margin);
    all_ok = all_ok && margin <= 0.0;
  }

  Outcome o;
  o.pass = all_ok && !rows.empty();
  o.detail = "n=" + std::to_string(rows.size()) +
             " worst_margin=" + fmt("%.3e", worst);
  return o;
}

// 6. The distortion-strength plateau is genuine: the spread of Z across the
//    accepted beta window stays within ten times the plateau score, and the
//    score itself is below 1e-3 of the binding gap.
Outcome criterion_6() {
  const GuideGeometry geom = reference_guide();
  const GridSpec grid = sweep_grid();
  const ResonanceOptions ropts = production_resonance_options();
  const BoundState bs = bound_state_reference(geom, grid, ropts.solver);
  const ResonanceEstimate est = locate_resonance(
      geom, FieldConfig{1.2e-5, 0.2}, grid, bs.E0, {}, ropts);

  Outcome o;
  o.pass = est.spread <= 10.0 * est.plateau_score &&
           est.plateau_score <= 1e-3 * bs.gap();
  o.detail = "score=" + fmt("%.3e", est.plateau_score) +
             " spread=" + fmt("%.3e", est.spread) +
             " limit=" + fmt("%.3e", 1e-3 * bs.gap()) +
             " beta=" + fmt("%.4e", est.beta_used);
  return o;
}

// 7. Weyl states at energies below and above the threshold drive the residual
//    down strictly as the window index grows through 4, 6, 8, each energy
//    within a minute on the fixed fine grid.
Outcome criterion_7() {
  const GuideGeometry geom = reference_guide();
  const FieldConfig field{12.0, 0.0};
  const GridSpec grid = make_grid(-16.0, 5.0, 2560, 24);

  Outcome o;
  o.pass = true;
  for (double E : {-1.0, 5.0}) {
    const auto t0 = Clock::now();
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::string rs;
    for (int n : {4, 6, 8}) {
      WeylParams wp;
      wp.E = E;
      wp.n = n;
      wp.alpha_exp = 0.75;
      wp.law = WeylWindowLaw::linear;
      const double r = weyl_residual(geom, field, grid, wp);
      monotone = monotone && r < prev;
      prev = r;
      rs += fmt(" %.4e", r);
    }
    const double dt = seconds_since(t0);
    o.pass = o.pass && monotone && dt <= 60.0;
    o.detail += "E=" + fmt("%.0f", E) + ":" + rs +
                (monotone ? " decreasing" : " NOT decreasing") +
                " t=" + fmt("%.2f", dt) + "s  ";
  }
  return o;
}

// 8. The tilted transverse channel opens quadratically: E1(F) minus the
//    first-order shift F sin(eta) d/2 above (pi/d)^2 is bounded by C F^2 with
//    C stable within a factor of two across three intensities.
Outcome criterion_8() {
  const double eta = 0.9;
  const double pi2 = M_PI * M_PI;
  double Cmin = std::numeric_limits<double>::infinity();
  double Cmax = 0.0;
  std::string rows;
  for (double F : {0.2, 0.4, 0.8}) {
    const TiltedMode tm = tilted_transverse_mode(1.0, F, eta, 2000);
    const double dev = std::abs(tm.E1 - pi2 - F * std::sin(eta) * 0.5);
    const double C = dev / (F * F);
    Cmin = std::min(Cmin, C);
    Cmax = std::max(Cmax, C);
    rows += " F=" + fmt("%.1f", F) + ":C=" + fmt("%.4e", C);
  }

  Outcome o;
  o.pass = Cmax / Cmin <= 2.0;
  o.detail = rows + " ratio=" + fmt("%.4f", Cmax / Cmin);
  return o;
}

// 9. The outgoing longitudinal state obeys the quarter-power amplitude law:
//    |phi| (lambda - F cos(eta) s)^{1/4} is constant to 1% over the deep-left
//    third of the evaluation window.
Outcome criterion_9() {
  const double F = 0.5;
  const double eta = 0.0;
  const double lambda = 1.0;
  const int n = 80001;
  const double s_lo = -20.0;
  const double s_hi = 4.0;
  std::vector<double> sg(n);
  const double h = (s_hi - s_lo) / (n - 1);
  for (int i = 0; i < n; ++i) sg[i] = s_lo + i * h;

  const AiryState st = airy_scattering_state(F, eta, lambda, sg);
  const double w = F * std::cos(eta);
  const int third = n / 3;
  double amax = 0.0;
  double amin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < third; ++i) {
    const double amp =
        std::abs(st.phi[i]) * std::pow(lambda - w * sg[i], 0.25);
    amax = std::max(amax, amp);
    amin = std::min(amin, amp);
  }
  const double constancy = (amax - amin) / (0.5 * (amax + amin));

  Outcome o;
  o.pass = constancy <= 0.01;
  o.detail = "constancy=" + fmt("%.3e", constancy) + " over s=[" +
             fmt("%.1f", s_lo) + "," + fmt("%.1f", sg[third - 1]) + "]";
  return o;
}

// 10. The measured exponential decay rate of the bound state is positive and
//     moves by less than 10% when the truncated domain is doubled.
Outcome criterion_10() {
  const GuideGeometry geom = reference_guide();
  const SolverOptions opts;

  const GridSpec gA = make_grid(-100.0, 108.0, 4159, 24);
  const BoundState bsA = bound_state_reference(geom, gA, opts);
  const double aA = decay_rate(geom, gA, bsA.phi0).a;

  const GridSpec gB = make_grid(-200.0, 216.0, 8319, 24);
  const BoundState bsB = bound_state_reference(geom, gB, opts);
  const double aB = decay_rate(geom, gB, bsB.phi0).a;

  const double rel = std::abs(aA - aB) / std::abs(aA);

  Outcome o;
  o.pass = aA > 0.0 && aB > 0.0 && rel <= 0.10;
  o.detail = "a=" + fmt("%.6f", aA) + " doubled=" + fmt("%.6f", aB) +
             " rel_change=" + fmt("%.3f", rel);
  return o;
}

// 11. On problems up to dimension 2000 the sparse solvers match dense or
//     closed-form oracles within ten times the tolerance, and a rerun is
//     bitwise identical.
Outcome criterion_11() {
  Outcome o;
  o.pass = true;
  const auto note = [&](bool ok, const std::string& what) {
    o.pass = o.pass && ok;
    o.detail += what + (ok ? " ok  " : " BAD  ");
  };
  const SolverOptions opts;
  const double band = 10.0 * opts.tol;

  {  // fixed diagonal, exact answer
    Eigen::SparseMatrix<double> D(3, 3);
    D.insert(0, 0) = 3.0;
    D.insert(1, 1) = 1.0;
    D.insert(2, 2) = 2.0;
    D.makeCompressed();
    SolverOptions so;
    so.k = 2;
    so.krylov_dim = 3;
    const auto pairs = lowest_symmetric(wrap(D), so);
    note(pairs.size() == 2 && std::abs(pairs[0].value - 1.0) <= 1e-12 &&
             std::abs(pairs[1].value - 2.0) <= 1e-12,
         "diagonal");
  }

  {  // random symmetric band matrix against a dense solve
    const Eigen::SparseMatrix<double> B = [] {
      std::vector<Eigen::Triplet<double>> trips;
      std::mt19937_64 rng(0x5eed5eedull);
      const auto unit = [&] {
        return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
      };
      const int n = 1200;
      for (int i = 0; i < n; ++i) {
        trips.emplace_back(i, i, 4.0 + unit());
        for (int b = 1; b <= 6 && i + b < n; ++b) {
          const double v = 0.5 * unit();
          trips.emplace_back(i, i + b, v);
          trips.emplace_back(i + b, i, v);
        }
      }
      Eigen::SparseMatrix<double> M(n, n);
      M.setFromTriplets(trips.begin(), trips.end());
      M.makeCompressed();
      return M;
    }();
    SolverOptions so;
    so.k = 5;
    const auto pairs = lowest_symmetric(wrap(B), so);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense{
        Eigen::MatrixXd(B)};
    bool ok = pairs.size() == 5;
    for (std::size_t i = 0; ok && i < pairs.size(); ++i)
      ok = std::abs(pairs[i].value - dense.eigenvalues()[i]) <= band;
    const int below = count_below(
        wrap(B), 0.5 * (dense.eigenvalues()[2] + dense.eigenvalues()[3]));
    note(ok && below == 3, "band1200");

    const auto rerun = lowest_symmetric(wrap(B), so);
    bool bitwise = rerun.size() == pairs.size();
    for (std::size_t i = 0; bitwise && i < pairs.size(); ++i) {
      bitwise = std::memcmp(&rerun[i].value, &pairs[i].value,
                            sizeof(double)) == 0 &&
                rerun[i].vector.size() == pairs[i].vector.size() &&
                std::memcmp(rerun[i].vector.data(), pairs[i].vector.data(),
                            sizeof(std::complex<double>) *
                                pairs[i].vector.size()) == 0;
    }
    note(bitwise, "rerun_real");
  }

  {  // complex symmetric band matrix against a dense solve near a shift
    const int n = 400;
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    std::mt19937_64 rng(0x13579bdfull);
    const auto unit = [&] { return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0; };
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, i, std::complex<double>(4.0 + unit(), 0.3 * unit()));
      for (int b = 1; b <= 4 && i + b < n; ++b) {
        const std::complex<double> v(0.5 * unit(), 0.2 * unit());
        trips.emplace_back(i, i + b, v);
        trips.emplace_back(i + b, i, v);
      }
    }
    Eigen::SparseMatrix<std::complex<double>> C(n, n);
    C.setFromTriplets(trips.begin(), trips.end());
    C.makeCompressed();
    const std::complex<double> sigma(4.0, 0.1);
    SolverOptions so;
    so.k = 3;
    const auto pairs =
        nearest_to_shift(wrap(C), sigma, so);
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> dense{
        Eigen::MatrixXcd(C)};
    std::complex<double> best = dense.eigenvalues()[0];
    for (int i = 1; i < n; ++i)
      if (std::abs(dense.eigenvalues()[i] - sigma) < std::abs(best - sigma))
        best = dense.eigenvalues()[i];
    note(!pairs.empty() && std::abs(pairs[0].value - best) <= band,
         "complex400");

    const auto rerun = nearest_to_shift(wrap(C), sigma, so);
    bool bitwise = !rerun.empty() &&
                   std::memcmp(&rerun[0].value, &pairs[0].value,
                               sizeof(std::complex<double>)) == 0 &&
                   std::memcmp(rerun[0].vector.data(), pairs[0].vector.data(),
                               sizeof(std::complex<double>) *
                                   pairs[0].vector.size()) == 0;
    note(bitwise, "rerun_complex");
  }

  {  // 1-D Dirichlet Laplacian at dimension 2000, closed-form spectrum
    const int n = 2000;
    const double L = 1.0;
    const double h = L / (n + 1);
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i) {
      trips.emplace_back(i, i, 2.0 / (h * h));
      if (i + 1 < n) {
        trips.emplace_back(i, i + 1, -1.0 / (h * h));
        trips.emplace_back(i + 1, i, -1.0 / (h * h));
      }
    }
    Eigen::SparseMatrix<double> T(n, n);
    T.setFromTriplets(trips.begin(), trips.end());
    T.makeCompressed();
    SolverOptions so;
    so.k = 3;
    const auto pairs = lowest_symmetric(wrap(T), so);
    bool ok = pairs.size() == 3;
    for (int j = 1; ok && j <= 3; ++j) {
      const double exact =
          (4.0 / (h * h)) * std::pow(std::sin(j * M_PI * h / (2.0 * L)), 2);
      ok = std::abs(pairs[j - 1].value - exact) <= band;
    }
    note(ok, "dirichlet2000");
  }

  {  // straight guide: Kronecker sum of two closed-form spectra
    const GuideGeometry straight(1.0, make_bump_profile(0.0, 4.0));
    const GridSpec grid = make_grid(-2.0, 6.0, 40, 12);
    const OperatorMatrix H = assemble_H(straight, grid);
    SolverOptions so;
    so.k = 2;
    const auto pairs = lowest_symmetric(H, so);
    const double hs = grid.h_s();
    const double lon1 =
        (4.0 / (hs * hs)) * std::pow(std::sin(M_PI * hs / (2.0 * 8.0)), 2);
    const double exact = lon1 + transverse_eigenvalue_fd(1.0, 1, 12);
    note(pairs.size() == 2 && std::abs(pairs[0].value - exact) <= band,
         "straight_guide");
  }

  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..11 | all>\n", argv[0]);
    return 64;
  }

  std::vector<int> todo;
  if (std::string(argv[1]) == "all") {
    for (int n = 1; n <= 11; ++n) todo.push_back(n);
  } else {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 11) {
      std::fprintf(stderr, "usage: %s <criterion 1..11 | all>\n", argv[0]);
      return 64;
    }
    todo.push_back(n);
  }

  Outcome (*const table[11])() = {
      criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
      criterion_11};

  bool all_pass = true;
  for (int n : todo) {
    Outcome out;
    try {
      out = table[n - 1]();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d: %s (%s)\n", n, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
