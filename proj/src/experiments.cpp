#include <algorithm>
#include <cmath>
#include <numeric>

#include "altspin/dynamics.hpp"
#include "altspin/error.hpp"
#include "altspin/experiments.hpp"
#include "experiment_impl.hpp"

namespace altspin::detail {

namespace {

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> table = [] {
    std::map<std::string, Schema> s;
    const Schema ground{{"lambda", "delta", "b"}, {"b"}, {{"lambda", "0"}, {"delta", "1"}, {"b", "0"}}, {}, 16};

    s["phase_gap"] = ground;
    s["phase_gap"].options = {{"gap_threshold", "0.05"}};
    s["symmetry_labels"] = ground;
    s["symmetry_labels"].options = {{"label_tol", "1e-8"}};
    s["correlators"] = ground;
    s["correlators"].options = {{"beta", "1e4"}};
    s["static_entanglement"] = ground;
    s["static_entanglement"].options = {{"beta", "1e4"}};
    s["beta_max"] = ground;
    s["beta_max"].options = {{"beta_min", "0.01"}, {"beta_max", "100"}, {"beta_points", "60"}};
    s["beta_max"].max_sites = 12;

    s["quench_ggm"] = {{"lambda", "delta", "b", "t"},
                       {"t"},
                       {{"lambda0", "-0.5"}, {"delta0", "1"}, {"b0", "0.25"}, {"lambda", "-0.5"}, {"delta", "1"},
                        {"b", "0.25"}, {"t", ""}},
                       {{"initial", "ground"}, {"ggm_mode", "restricted"}, {"backend", "auto"}},
                       14};
    s["dqpt_map"] = {{"lambda", "delta", "b"},
                     {"b"},
                     {{"lambda0", ""}, {"delta0", "1"}, {"b0", ""}, {"lambda", ""}, {"delta", "1"}, {"b", ""}},
                     {{"t_max", "200"},
                      {"dt", "0.1"},
                      {"echo_threshold", "0.01"},
                      {"kappa", "20"},
                      {"min_slope_change", "0.05"},
                      {"ggm_mode", "restricted"}},
                     14};
    s["entropy_bands"] = {{"t"},
                          {"t"},
                          {{"delta", "1"}, {"b", "0.25"}},
                          {{"set_a", "-2.0, -1.8, -1.6"},
                           {"set_b", "-0.1, 0, 0.1"},
                           {"set_c", "0.6, 0.8, 1.0"},
                           {"t_max", "200"},
                           {"dt", "0.1"},
                           {"transient_min", "2"},
                           {"transient_max", "30"},
                           {"steady_min", "150"},
                           {"steady_max", "200"}},
                          14};
    s["commutator_check"] = {{"n", "lambda", "b"},
                             {},
                             {{"lambda0", "-0.5"}, {"lambda", "0.5"}, {"delta", "1"}, {"b", "0.25"}},
                             {{"b_alt", "1.0"}},
                             10};
    return s;
  }();
  return table;
}

std::optional<double> cell_value(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

SpectraOptions spectra_options(const ScanConfig& cfg) {
  SpectraOptions opt;
  opt.seed = cfg.seed;
  return opt;
}

GgmMode parse_ggm_mode(const std::string& s) {
  if (s == "restricted") return GgmMode::Restricted;
  if (s == "full") return GgmMode::Full;
  throw_config("ggm_mode must be 'restricted' or 'full', got '" + s + "'");
}

// Zero-temperature (or fixed-beta) reduced pairs for every field value of
// one (lambda, delta) job.
class PairStates {
 public:
  PairStates(int n, double lambda, double delta, double beta, const SpectraOptions& opt)
      : n_(n), lambda_(lambda), delta_(delta), beta_(beta), opt_(opt) {
    if (n <= kThermalMaxSites) {
      SpectraOptions full = opt;
      full.full = true;
      spectra_ = std::make_shared<const ZeroFieldSpectra>(zero_field_spectra(n, lambda, delta, full));
      t12_.emplace(spectra_, std::vector<int>{1, 2});
      t23_.emplace(spectra_, std::vector<int>{2, 3});
    }
  }

  std::pair<DensityMatrix, DensityMatrix> at(double b) const {
    if (spectra_) return {t12_->at(b, beta_), t23_->at(b, beta_)};
    const GibbsState g = low_temperature_state({n_, lambda_, delta_, b}, beta_, 1e-14, opt_);
    const int k12[] = {1, 2};
    const int k23[] = {2, 3};
    return {g.reduced(k12), g.reduced(k23)};
  }

  std::shared_ptr<const ZeroFieldSpectra> spectra() const { return spectra_; }

 private:
  int n_;
  double lambda_, delta_, beta_;
  SpectraOptions opt_;
  std::shared_ptr<const ZeroFieldSpectra> spectra_;
  std::optional<ThermalReducedTable> t12_, t23_;
};

// ---------------------------------------------------------------------------

class PhaseGap : public Experiment {
 public:
  using Experiment::Experiment;
  std::vector<std::string> value_columns() const override {
    return {"e0", "e1", "gap", "degeneracy", "gapless", "ground_mz"};
  }
  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    const auto opt = spectra_options(cfg_);
    ZeroFieldSpectra spectra = zero_field_spectra(cfg_.n, value(first, "lambda"), value(first, "delta"), opt);
    const double threshold = option("gap_threshold");
    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const GroundManifold gm = ground_manifold(spectra, value(points_[row], "b"), opt);
      const bool one_mz =
          std::all_of(gm.state_mz.begin(), gm.state_mz.end(), [&](int m) { return m == gm.state_mz[0]; });
      out.push_back({{cell(gm.e0), cell(gm.e1), cell(gm.gap), cell_int(gm.degeneracy),
                      cell_int(gm.gap < threshold ? 1 : 0), one_mz ? cell_int(gm.state_mz[0]) : std::string()},
                     {}});
    }
    return out;
  }
};

class SymmetryLabelScan : public Experiment {
 public:
  using Experiment::Experiment;
  std::vector<std::string> value_columns() const override { return {"mz_display", "k", "p", "z", "degeneracy"}; }
  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    const auto opt = spectra_options(cfg_);
    ZeroFieldSpectra spectra = zero_field_spectra(cfg_.n, value(first, "lambda"), value(first, "delta"), opt);
    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const GroundManifold gm = ground_manifold(spectra, value(points_[row], "b"), opt);
      const SymmetryLabels l = label_ground_manifold(gm, option("label_tol"));
      auto opt_int = [](const std::optional<int>& v) { return v ? cell_int(*v) : std::string(); };
      out.push_back({{cell_int(l.mz_display), opt_int(l.k), opt_int(l.p), cell_int(l.z), cell_int(gm.degeneracy)},
                     {}});
    }
    return out;
  }
};

class Correlators : public Experiment {
 public:
  using Experiment::Experiment;
  std::vector<std::string> value_columns() const override { return {"czz_12", "czz_23"}; }
  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    const PairStates pairs(cfg_.n, value(first, "lambda"), value(first, "delta"), option("beta"),
                           spectra_options(cfg_));
    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const auto [r12, r23] = pairs.at(value(points_[row], "b"));
      out.push_back({{cell(classical_correlator_zz(r12)), cell(classical_correlator_zz(r23))}, {}});
    }
    return out;
  }
};

class StaticEntanglement : public Experiment {
 public:
  using Experiment::Experiment;
  std::vector<std::string> value_columns() const override {
    return {"e_ln_12", "e_ln_23", "czz_12", "czz_23", "ggm", "degeneracy"};
  }
  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    const double lambda = value(first, "lambda");
    const double delta = value(first, "delta");
    const auto opt = spectra_options(cfg_);
    const PairStates pairs(cfg_.n, lambda, delta, option("beta"), opt);
    // GGM needs the ground manifold; full spectra already contain it.
    std::optional<ZeroFieldSpectra> low;
    if (!pairs.spectra()) low = zero_field_spectra(cfg_.n, lambda, delta, opt);

    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const double b = value(points_[row], "b");
      const auto [r12, r23] = pairs.at(b);
      const GroundManifold gm = low ? ground_manifold(*low, b, opt) : ground_manifold(*pairs.spectra(), b);
      // GGM is a pure-state measure: undefined on a degenerate manifold.
      const std::optional<double> g =
          gm.unique() ? std::optional<double>(ggm(gm.states.front()).value) : std::nullopt;
      out.push_back({{cell(log_negativity(r12)), cell(log_negativity(r23)), cell(classical_correlator_zz(r12)),
                      cell(classical_correlator_zz(r23)), cell(g), cell_int(gm.degeneracy)},
                     {}});
    }
    return out;
  }
};

class BetaMax : public Experiment {
 public:
  explicit BetaMax(const ScanConfig& cfg) : Experiment(cfg) {
    lo_ = option("beta_min");
    hi_ = option("beta_max");
    const double points = option("beta_points");
    if (!(lo_ > 0.0) || hi_ < lo_ || hi_ > 100.0) throw_config("beta range must satisfy 0 < beta_min <= beta_max <= 100");
    if (points < 1.0 || points != std::floor(points)) throw_config("beta_points must be a positive integer");
    const int count = lo_ == hi_ ? 1 : static_cast<int>(points);
    for (int i = 0; i < count; ++i) {
      grid_.push_back(count == 1 ? hi_ : std::exp(std::log(lo_) + (std::log(hi_) - std::log(lo_)) * i / (count - 1)));
    }
  }

  std::vector<std::string> value_columns() const override {
    return {"beta_max_12", "e_ln_max_12", "interior_12", "beta_max_23", "e_ln_max_23", "interior_23"};
  }

  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    SpectraOptions opt = spectra_options(cfg_);
    opt.full = true;
    const auto spectra = std::make_shared<const ZeroFieldSpectra>(
        zero_field_spectra(cfg_.n, value(first, "lambda"), value(first, "delta"), opt));
    const ThermalReducedTable t12(spectra, {1, 2});
    const ThermalReducedTable t23(spectra, {2, 3});
    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const double b = value(points_[row], "b");
      RowResult r;
      for (const auto* table : {&t12, &t23}) {
        const auto best = maximize([&](double beta) { return log_negativity(table->at(b, beta)); });
        r.cells.push_back(best.beta ? cell(*best.beta) : std::string());
        r.cells.push_back(cell(best.value));
        r.cells.push_back(best.beta ? cell_int(best.interior ? 1 : 0) : std::string());
      }
      out.push_back(std::move(r));
    }
    return out;
  }

 private:
  struct Best {
    std::optional<double> beta;
    double value = 0.0;
    bool interior = false;
  };

  template <class F>
  Best maximize(F f) const {
    std::vector<double> vals;
    for (const double beta : grid_) vals.push_back(f(beta));
    const double top = *std::max_element(vals.begin(), vals.end());
    Best best;
    best.value = top;
    if (top <= 1e-12) return best;  // never entangled: no argmax
    // Last grid point within round-off of the maximum, so a curve that
    // saturates towards large beta reports the boundary.
    std::size_t i = vals.size() - 1;
    while (vals[i] < top - 1e-10 * std::max(1.0, top)) --i;
    if (i + 1 == vals.size()) {
      best.beta = grid_.back();
      return best;
    }
    // Golden-section search in log(beta) on the bracketing cells.
    double a = std::log(grid_[i == 0 ? 0 : i - 1]);
    double c = std::log(grid_[i + 1]);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = c - g * (c - a), x2 = a + g * (c - a);
    double f1 = f(std::exp(x1)), f2 = f(std::exp(x2));
    for (int it = 0; it < 80 && c - a > 1e-10; ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (c - a);
        f2 = f(std::exp(x2));
      } else {
        c = x2;
        x2 = x1;
        f2 = f1;
        x1 = c - g * (c - a);
        f1 = f(std::exp(x1));
      }
    }
    const double xm = f1 > f2 ? x1 : x2;
    const double fm = std::max(f1, f2);
    best.interior = true;
    if (fm >= vals[i]) {
      best.beta = std::exp(xm);
      best.value = fm;
    } else {
      best.beta = grid_[i];
    }
    return best;
  }

  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> grid_;
};

// Ground state (or Neel state) shared by every job of a quench scan.
StateVector initial_state(const ScanConfig& cfg, const std::string& kind, const HamiltonianParams& p) {
  if (kind == "neel") return neel_state(cfg.n);
  if (kind != "ground") throw_config("initial must be 'ground' or 'neel', got '" + kind + "'");
  QuenchSpec spec;
  spec.initial = p;
  spec.final_params = p;
  spec.times = {0.0};
  return prepare_initial_state(spec, spectra_options(cfg));
}

class QuenchGgm : public Experiment {
 public:
  explicit QuenchGgm(const ScanConfig& cfg) : Experiment(cfg) {
    backend_ = option_text("backend");
    if (backend_ != "auto" && backend_ != "eigen" && backend_ != "chebyshev") {
      throw_config("backend must be auto, eigen or chebyshev");
    }
    mode_ = parse_ggm_mode(option_text("ggm_mode"));
    if (mode_ == GgmMode::Full && cfg.n > kFullGgmMaxSites) throw_config("full GGM is limited to n <= 10");
    try {
      const GridPoint none;
      psi0_ = initial_state(cfg_, option_text("initial"),
                            {cfg_.n, value(none, "lambda0"), value(none, "delta0"), value(none, "b0")});
      ggm_.emplace(psi0_->basis_ptr(), mode_);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      setup_error_ = e.what();
    }
  }

  std::vector<std::string> value_columns() const override { return {"ggm", "echo"}; }

  std::vector<RowResult> run(const Job& job) const override {
    if (!setup_error_.empty()) throw Error(ErrorKind::Parameter, "initial state: " + setup_error_);
    const auto& first = points_[job.rows.front()];
    const HamiltonianParams final_params{cfg_.n, value(first, "lambda"), value(first, "delta"), value(first, "b")};
    std::vector<double> times;
    for (const auto row : job.rows) times.push_back(value(points_[row], "t"));
    for (const double t : times) {
      if (t < 0.0) throw_parameter("times must be non-negative");
    }
    const bool eigen = backend_ == "eigen" || (backend_ == "auto" && times.size() > 8);

    std::vector<RowResult> out(job.rows.size());
    auto emit = [&](std::size_t j, const cplx* amps, double echo) {
      out[j].cells = {cell(ggm_->evaluate(amps).value), cell(std::clamp(echo, 0.0, 1.0))};
    };
    if (eigen) {
      const QuenchEvolution ev(*psi0_, final_params);
      constexpr std::size_t kChunk = 256;
      for (std::size_t first_t = 0; first_t < times.size(); first_t += kChunk) {
        const auto count = std::min(kChunk, times.size() - first_t);
        const Eigen::MatrixXcd block = ev.states_at(std::span<const double>(times).subspan(first_t, count));
        for (std::size_t j = 0; j < count; ++j) {
          emit(first_t + j, block.col(static_cast<Eigen::Index>(j)).data(), ev.echo_at(times[first_t + j]));
        }
      }
    } else {
      const SparseOperator h = build_hamiltonian(final_params, psi0_->basis_ptr());
      std::vector<std::size_t> order(times.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });
      StateVector psi = *psi0_;
      double now = 0.0;
      for (const auto j : order) {
        if (times[j] > now) psi = chebyshev_propagate(h, psi, times[j] - now);
        now = times[j];
        emit(j, psi.amplitudes().data(), std::norm(psi0_->inner(psi)));
      }
    }
    return out;
  }

  std::vector<std::pair<std::string, double>> summarize(
      const std::vector<std::vector<std::string>>& values) const override {
    std::vector<std::pair<std::string, double>> out;
    std::map<double, std::pair<std::size_t, std::size_t>> hi49, hi40;  // t -> (count, total)
    std::size_t total = 0, n49 = 0, n40 = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto g = cell_value(values[i][0]);
      if (!g) continue;
      const double t = points_[i].at.at("t");
      ++total;
      ++hi49[t].second;
      ++hi40[t].second;
      if (*g > 0.49) ++n49, ++hi49[t].first;
      if (*g > 0.4) ++n40, ++hi40[t].first;
    }
    if (total == 0) return out;
    out.emplace_back("fraction_ggm_gt_0.49", static_cast<double>(n49) / total);
    out.emplace_back("fraction_ggm_gt_0.4", static_cast<double>(n40) / total);
    if (hi49.size() > 1 && hi49.size() <= 16) {
      for (const auto& [t, c] : hi49) {
        out.emplace_back("fraction_ggm_gt_0.49_at_t=" + format_real(t), static_cast<double>(c.first) / c.second);
        const auto& c40 = hi40.at(t);
        out.emplace_back("fraction_ggm_gt_0.4_at_t=" + format_real(t), static_cast<double>(c40.first) / c40.second);
      }
    }
    return out;
  }

 private:
  std::string backend_;
  GgmMode mode_ = GgmMode::Restricted;
  std::optional<StateVector> psi0_;
  std::optional<GgmEvaluator> ggm_;
  std::string setup_error_;
};

class DqptMap : public Experiment {
 public:
  explicit DqptMap(const ScanConfig& cfg) : Experiment(cfg) {
    if (!(option("dt") > 0.0) || !(option("t_max") > option("dt"))) throw_config("need 0 < dt < t_max");
    trace_.echo_threshold = option("echo_threshold");
    trace_.kinks.kappa = option("kappa");
    trace_.kinks.min_slope_change = option("min_slope_change");
    trace_.ggm_mode = parse_ggm_mode(option_text("ggm_mode"));
    times_ = uniform_times(option("t_max"), option("dt"));
    try {
      const GridPoint none;
      psi0_ = initial_state(cfg_, "ground",
                            {cfg_.n, value(none, "lambda0"), value(none, "delta0"), value(none, "b0")});
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      setup_error_ = e.what();
    }
  }

  std::vector<std::string> value_columns() const override {
    return {"t_star", "t_kink", "min_echo", "critical_count", "kink_count"};
  }

  // The initial state is sector-pure and the field only adds -B m^z inside a
  // sector, so every field value of a job shares one trace.
  std::vector<RowResult> run(const Job& job) const override {
    if (!setup_error_.empty()) throw Error(ErrorKind::Parameter, "initial state: " + setup_error_);
    const auto& first = points_[job.rows.front()];
    const HamiltonianParams final_params{cfg_.n, value(first, "lambda"), value(first, "delta"), value(first, "b")};
    const QuenchTrace tr = run_quench(*psi0_, final_params, times_, trace_);
    auto first_of = [](const std::vector<double>& v) {
      return v.empty() ? std::optional<double>() : std::optional<double>(v.front());
    };
    const RowResult r{{cell(first_of(tr.critical_times)), cell(first_of(tr.kink_times)),
                       cell(*std::min_element(tr.echo.begin(), tr.echo.end())),
                       cell_int(static_cast<long long>(tr.critical_times.size())),
                       cell_int(static_cast<long long>(tr.kink_times.size()))},
                      {}};
    return std::vector<RowResult>(job.rows.size(), r);
  }

 private:
  TraceOptions trace_;
  std::vector<double> times_;
  std::optional<StateVector> psi0_;
  std::string setup_error_;
};

class EntropyBands : public Experiment {
 public:
  explicit EntropyBands(const ScanConfig& cfg) : Experiment(cfg) {
    const auto* t_axis = cfg_.axis("t");
    times_ = t_axis ? t_axis->values : uniform_times(option("t_max"), option("dt"));
    if (times_.size() < 2) throw_config("entropy_bands needs at least two times");
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) throw_config("entropy_bands times must increase");
    }
    points_.clear();
    jobs_.clear();
    const std::pair<const char*, const char*> sets[] = {{"A", "set_a"}, {"B", "set_b"}, {"C", "set_c"}};
    for (const auto& [label, key] : sets) {
      const auto lambdas = parse_real_list(option_text(key), key);
      if (lambdas.empty()) throw_config(std::string(key) + " is empty");
      for (const double lambda : lambdas) {
        Job job;
        for (const double t : times_) {
          job.rows.push_back(points_.size());
          GridPoint p;
          p.label = label;
          p.at = {{"lambda", lambda}, {"t", t}};
          p.coords = {label, cell(lambda), cell(t)};
          points_.push_back(std::move(p));
        }
        jobs_.push_back(std::move(job));
      }
    }
  }

  std::vector<std::string> coordinate_columns() const override { return {"set", "lambda", "t"}; }
  std::vector<std::string> value_columns() const override { return {"half_entropy"}; }

  std::vector<RowResult> run(const Job& job) const override {
    const auto& first = points_[job.rows.front()];
    const GridPoint none;
    TraceOptions opt;
    opt.ggm = false;
    opt.half_entropy = true;
    const QuenchTrace tr = run_quench(neel_state(cfg_.n),
                                      {cfg_.n, first.at.at("lambda"), value(none, "delta"), value(none, "b")},
                                      times_, opt);
    std::vector<RowResult> out;
    for (const double s : tr.half_entropy) out.push_back({{cell(s)}, {}});
    return out;
  }

  std::vector<std::pair<std::string, double>> summarize(
      const std::vector<std::vector<std::string>>& values) const override {
    const double t1 = option("transient_min"), t2 = option("transient_max");
    const double s1 = option("steady_min"), s2 = option("steady_max");
    std::map<std::string, std::map<double, std::pair<double, double>>> span;  // set -> t -> (min, max)
    std::map<std::string, std::pair<double, std::size_t>> steady;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto s = cell_value(values[i][0]);
      if (!s) continue;
      const auto& p = points_[i];
      const double t = p.at.at("t");
      if (t >= t1 - 1e-9 && t <= t2 + 1e-9) {
        auto [it, fresh] = span[p.label].try_emplace(t, *s, *s);
        if (!fresh) {
          it->second.first = std::min(it->second.first, *s);
          it->second.second = std::max(it->second.second, *s);
        }
      }
      if (t >= s1 - 1e-9 && t <= s2 + 1e-9) {
        steady[p.label].first += *s;
        ++steady[p.label].second;
      }
    }
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [label, by_t] : span) {
      double width = 0.0;
      for (const auto& [t, mm] : by_t) width = std::max(width, mm.second - mm.first);
      out.emplace_back("band_width_" + label, width);
    }
    for (const auto& [label, acc] : steady) out.emplace_back("steady_mean_" + label, acc.first / acc.second);
    return out;
  }

 private:
  std::vector<double> times_;
};

class CommutatorCheck : public Experiment {
 public:
  explicit CommutatorCheck(const ScanConfig& cfg) : Experiment(cfg) {
    for (const auto& p : points_) {
      const int n = site_count(p);
      if (n < 4 || n > 10 || n % 2 != 0) throw_config("commutator_check needs even n within [4, 10]");
    }
  }

  std::vector<std::string> value_columns() const override { return {"max_deviation", "b_dependence", "rhs_max"}; }

  std::vector<RowResult> run(const Job& job) const override {
    std::vector<RowResult> out;
    for (const auto row : job.rows) {
      const auto& p = points_[row];
      const int n = site_count(p);
      const double lambda0 = value(p, "lambda0"), lambda = value(p, "lambda");
      const double delta = value(p, "delta"), b = value(p, "b");
      auto commutator = [&](double field) {
        const Eigen::MatrixXcd h1 = build_hamiltonian({n, lambda, delta, field}).to_dense();
        const Eigen::MatrixXcd h0 = build_hamiltonian({n, lambda0, delta, field}).to_dense();
        return Eigen::MatrixXcd(h1 * h0 - h0 * h1);
      };
      const Eigen::MatrixXcd c = commutator(b);
      const Eigen::MatrixXcd rhs = build_commutator_rhs(lambda0, lambda, n).to_dense();
      out.push_back({{cell((c - rhs).cwiseAbs().maxCoeff()), cell((c - commutator(option("b_alt"))).cwiseAbs().maxCoeff()),
                      cell(rhs.cwiseAbs().maxCoeff())},
                     {}});
    }
    return out;
  }

 private:
  int site_count(const GridPoint& p) const {
    const auto it = p.at.find("n");
    return it == p.at.end() ? cfg_.n : static_cast<int>(std::lround(it->second));
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::string cell(double v) { return format_real(v); }
std::string cell(std::optional<double> v) { return v ? format_real(*v) : std::string(); }
std::string cell_int(long long v) { return std::to_string(v); }

const Schema& schema_for(const std::string& experiment) {
  const auto& all = schemas();
  const auto it = all.find(experiment);
  if (it == all.end()) throw_config("unknown experiment '" + experiment + "'");
  return it->second;
}

Experiment::Experiment(const ScanConfig& cfg) : cfg_(cfg), schema_(schema_for(cfg.experiment)) { layout_cartesian(); }

std::vector<std::string> Experiment::coordinate_columns() const {
  std::vector<std::string> out;
  for (const auto& a : cfg_.axes) out.push_back(a.name);
  return out;
}

std::vector<std::pair<std::string, double>> Experiment::summarize(const std::vector<std::vector<std::string>>&) const {
  return {};
}

void Experiment::layout_cartesian() {
  const std::size_t total = cfg_.grid_size();
  std::map<std::vector<double>, std::size_t> job_of;
  points_.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    GridPoint p;
    std::vector<double> key;
    std::size_t rest = flat;
    std::vector<std::size_t> idx(cfg_.axes.size());
    for (std::size_t a = cfg_.axes.size(); a-- > 0;) {
      idx[a] = rest % cfg_.axes[a].values.size();
      rest /= cfg_.axes[a].values.size();
    }
    for (std::size_t a = 0; a < cfg_.axes.size(); ++a) {
      const auto& axis = cfg_.axes[a];
      const double v = axis.values[idx[a]];
      p.at[axis.name] = v;
      p.coords.push_back(axis.name == "n" ? cell_int(std::lround(v)) : cell(v));
      if (std::find(schema_.inner.begin(), schema_.inner.end(), axis.name) == schema_.inner.end()) key.push_back(v);
    }
    // Without inner axes every point is its own job.
    if (schema_.inner.empty()) key.push_back(static_cast<double>(flat));
    const auto [it, fresh] = job_of.try_emplace(key, jobs_.size());
    if (fresh) jobs_.emplace_back();
    jobs_[it->second].rows.push_back(flat);
    points_.push_back(std::move(p));
  }
}

double Experiment::value(const GridPoint& p, const std::string& key) const {
  if (const auto it = p.at.find(key); it != p.at.end()) return it->second;
  if (const auto it = cfg_.fixed.find(key); it != cfg_.fixed.end()) return parse_real(it->second, "[fixed] " + key);
  const auto d = schema_.fixed.find(key);
  if (d == schema_.fixed.end() || d->second.empty()) throw_config("missing value for '" + key + "'");
  return parse_real(d->second, key);
}

std::string Experiment::option_text(const std::string& key) const {
  if (const auto it = cfg_.options.find(key); it != cfg_.options.end()) return it->second;
  return schema_.options.at(key);
}

double Experiment::option(const std::string& key) const { return parse_real(option_text(key), "[options] " + key); }

int Experiment::column(const std::string& name) const {
  const auto cols = value_columns();
  const auto it = std::find(cols.begin(), cols.end(), name);
  return it == cols.end() ? -1 : static_cast<int>(it - cols.begin());
}

std::unique_ptr<Experiment> make_experiment(const ScanConfig& cfg) {
  std::unique_ptr<Experiment> e;
  const auto& name = cfg.experiment;
  if (name == "phase_gap") e = std::make_unique<PhaseGap>(cfg);
  else if (name == "symmetry_labels") e = std::make_unique<SymmetryLabelScan>(cfg);
  else if (name == "correlators") e = std::make_unique<Correlators>(cfg);
  else if (name == "static_entanglement") e = std::make_unique<StaticEntanglement>(cfg);
  else if (name == "beta_max") e = std::make_unique<BetaMax>(cfg);
  else if (name == "quench_ggm") e = std::make_unique<QuenchGgm>(cfg);
  else if (name == "dqpt_map") e = std::make_unique<DqptMap>(cfg);
  else if (name == "entropy_bands") e = std::make_unique<EntropyBands>(cfg);
  else if (name == "commutator_check") e = std::make_unique<CommutatorCheck>(cfg);
  else throw_config("unknown experiment '" + name + "'");
  return e;
}

}  // namespace altspin::detail

namespace altspin {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, schema] : detail::schemas()) out.push_back(name);
    return out;
  }();
  return names;
}

}  // namespace altspin
