#include "qcount/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qcount {

namespace {

std::string format_double(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

double parse_double(const std::string& field) { return std::stod(field); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

void run_in_pool(std::uint64_t trials,
                 const std::function<void(std::uint64_t)>& body) {
  const std::size_t workers = worker_pool_size(trials);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < trials; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next.fetch_add(1); i < trials;
           i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (std::thread& t : pool) t.join();
}

void fill_result_columns(TrialRow& row, const EstimateResult& result) {
  row.k_hat = result.k_hat;
  if (result.final_interval.has_value()) {
    row.theta_min = result.final_interval->theta_min();
    row.theta_max = result.final_interval->theta_max();
  }
  row.t_step1 = result.t_step1;
  row.iters_step2 = result.iterations_step2;
  row.grover_apps = result.ledger.grover_applications;
  row.oracle_queries = result.ledger.oracle_queries;
  row.step1_queries = result.ledger.step1_queries;
  row.step2_queries = result.ledger.step2_queries;
  row.coin_flips = result.ledger.coin_flips;
  row.conforming = result.conforming;
}

}  // namespace

std::string csv_row(const TrialRow& row) {
  std::ostringstream out;
  out << row.trial << ',' << row.n << ',' << format_double(row.k_true) << ','
      << format_double(row.epsilon) << ',' << format_double(row.delta) << ','
      << row.seed << ',' << row.backend << ',' << format_double(row.k_hat)
      << ',' << format_double(row.theta_min) << ','
      << format_double(row.theta_max) << ',' << row.t_step1 << ','
      << row.iters_step2 << ',' << row.grover_apps << ','
      << row.oracle_queries << ',' << row.coin_flips << ','
      << (row.success ? 1 : 0) << ',' << (row.conforming ? 1 : 0) << ','
      << format_double(row.wall_ms);
  return out.str();
}

std::string json_row(const TrialRow& row) {
  nlohmann::json j;
  j["trial"] = row.trial;
  j["n"] = row.n;
  j["k_true"] = row.k_true;
  j["epsilon"] = row.epsilon;
  j["delta"] = row.delta;
  j["seed"] = row.seed;
  j["backend"] = row.backend;
  j["k_hat"] = row.k_hat;
  j["theta_min"] = row.theta_min;
  j["theta_max"] = row.theta_max;
  j["t_step1"] = row.t_step1;
  j["iters_step2"] = row.iters_step2;
  j["grover_apps"] = row.grover_apps;
  j["oracle_queries"] = row.oracle_queries;
  j["step1_queries"] = row.step1_queries;
  j["step2_queries"] = row.step2_queries;
  j["coin_flips"] = row.coin_flips;
  j["success"] = row.success;
  j["conforming"] = row.conforming;
  j["wall_ms"] = row.wall_ms;
  return j.dump();
}

TrialRow parse_csv_row(const std::string& line) {
  const std::vector<std::string> f = split_csv(line);
  if (f.size() != 18) {
    throw std::invalid_argument("csv row must have 18 fields");
  }
  TrialRow row;
  row.trial = std::stoull(f[0]);
  row.n = std::stoull(f[1]);
  row.k_true = parse_double(f[2]);
  row.epsilon = parse_double(f[3]);
  row.delta = parse_double(f[4]);
  row.seed = std::stoull(f[5]);
  row.backend = f[6];
  row.k_hat = parse_double(f[7]);
  row.theta_min = parse_double(f[8]);
  row.theta_max = parse_double(f[9]);
  row.t_step1 = std::stoi(f[10]);
  row.iters_step2 = std::stoi(f[11]);
  row.grover_apps = std::stoull(f[12]);
  row.oracle_queries = std::stoull(f[13]);
  row.coin_flips = std::stoull(f[14]);
  row.success = f[15] == "1";
  row.conforming = f[16] == "1";
  row.wall_ms = parse_double(f[17]);
  return row;
}

std::uint64_t trial_stream_seed(std::uint64_t master_seed,
                                std::uint64_t trial) {
  std::uint64_t state = master_seed;
  splitmix64(state);
  state ^= trial + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
  return splitmix64(state);
}

std::size_t worker_pool_size(std::uint64_t trials) {
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QCOUNT_THREADS")) {
    const unsigned long cap = std::strtoul(env, nullptr, 10);
    if (cap >= 1) workers = static_cast<std::size_t>(cap);
  }
  return static_cast<std::size_t>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(trials, 1)));
}

std::vector<TrialRow> run_count_trials(const CountRunSpec& spec) {
  spec.config.validate();
  const MarkedSetProblem base = [&] {
    std::vector<std::uint64_t> marked(spec.k);
    for (std::uint64_t i = 0; i < spec.k; ++i) marked[i] = i;
    return MarkedSetProblem(spec.n, std::move(marked));
  }();

  std::vector<TrialRow> rows(spec.trials);
  run_in_pool(spec.trials, [&](std::uint64_t trial) {
    const auto start = std::chrono::steady_clock::now();
    const EstimateResult result =
        approximate_count(base, spec.config,
                          trial_stream_seed(spec.master_seed, trial),
                          spec.backend);
    const auto stop = std::chrono::steady_clock::now();

    TrialRow& row = rows[trial];
    row.trial = trial;
    row.n = spec.n;
    row.k_true = static_cast<double>(spec.k);
    row.epsilon = spec.config.epsilon;
    row.delta = spec.config.delta;
    row.seed = spec.master_seed;
    row.backend = spec.backend;
    fill_result_columns(row, result);
    row.success =
        spec.k == 0
            ? result.k_hat == 0.0
            : (result.k_hat > (1.0 - spec.config.epsilon) * spec.k &&
               result.k_hat < (1.0 + spec.config.epsilon) * spec.k);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  });
  return rows;
}

std::vector<TrialRow> run_amplitude_trials(const AmplitudeRunSpec& spec) {
  spec.config.validate();
  const AmplitudeProblem problem{spec.a};

  std::vector<TrialRow> rows(spec.trials);
  run_in_pool(spec.trials, [&](std::uint64_t trial) {
    const auto start = std::chrono::steady_clock::now();
    const EstimateResult result =
        estimate_amplitude(problem, spec.config,
                           trial_stream_seed(spec.master_seed, trial),
                           spec.backend);
    const auto stop = std::chrono::steady_clock::now();

    TrialRow& row = rows[trial];
    row.trial = trial;
    row.n = 0;
    row.k_true = spec.a;
    row.epsilon = spec.config.epsilon;
    row.delta = spec.config.delta;
    row.seed = spec.master_seed;
    row.backend = spec.backend;
    fill_result_columns(row, result);
    row.success = result.k_hat > (1.0 - spec.config.epsilon) * spec.a &&
                  result.k_hat < (1.0 + spec.config.epsilon) * spec.a;
    row.wall_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
  });
  return rows;
}

LemmaCheckResult run_lemma_check(std::uint64_t sweeps, std::uint64_t seed) {
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");

  LemmaCheckResult result;
  result.sweeps = sweeps;
  Rng rng = Rng::derive(seed, 0x4c454d4d41ULL);  // "LEMMA"

  const auto record = [&result](std::uint64_t sweep, const char* check,
                                const AngleInterval& interval, double theta,
                                std::int64_t r, double value,
                                std::uint64_t& counter) {
    ++counter;
    if (result.violations.size() < 1000) {
      result.violations.push_back(LemmaViolation{
          sweep, check, interval.gamma(), interval.theta_min(),
          interval.theta_max(), theta, r, value});
    }
  };

  for (std::uint64_t sweep = 0; sweep < sweeps; ++sweep) {
    const double sampled_gamma = 0.01 + rng.next_double() * (0.2 - 0.01);
    const double theta_max =
        (std::numbers::pi / 1000.0) * (1.0 - rng.next_double() * 0.999999);
    const AngleInterval interval(theta_max / (1.0 + sampled_gamma), theta_max);
    const double gamma = interval.gamma();
    const RotationChoice choice = choose_r(interval);

    if (choice.r % 2 == 0 || choice.r < 1) {
      record(sweep, "odd", interval, 0.0, choice.r, 0.0,
             result.violations_odd);
    }

    const double theta_min = interval.theta_min();
    const double mid = 0.5 * (theta_min + theta_max);
    for (double theta : {theta_min, mid, theta_max}) {
      const auto [lo, hi] = r_bounds(interval, theta);
      const double r = static_cast<double>(choice.r);
      if (r < lo || r > hi) {
        // Signed excess: positive above the upper bound, negative below the
        // lower one.
        record(sweep, "bounds", interval, theta, choice.r,
               r > hi ? r - hi : r - lo, result.violations_bounds);
      }
    }

    // |r*theta_min mod 2pi| <= theta_min
    const double residue = std::remainder(
        static_cast<double>(choice.r) * theta_min, 2.0 * std::numbers::pi);
    if (std::abs(residue) > theta_min * (1.0 + 1e-9)) {
      record(sweep, "residue", interval, theta_min, choice.r, residue,
             result.violations_residue);
    }

    const auto heads_prob = [&](double theta) {
      const double s = std::sin(static_cast<double>(choice.r) * theta);
      return s * s;
    };

    // Lower subrange: heads must stay improbable.
    const double lower_hi = theta_max / (1.0 + 0.9 * gamma);
    for (double theta :
         {theta_min, theta_min + rng.next_double() * (lower_hi - theta_min),
          lower_hi}) {
      const double p = heads_prob(theta);
      if (p > 0.47) {
        record(sweep, "upper047", interval, theta, choice.r, p,
               result.violations_upper047);
      }
    }

    // Upper subrange: heads must dominate.
    const double upper_lo = (1.0 + 0.9 * gamma) * theta_min;
    for (double theta :
         {upper_lo, upper_lo + rng.next_double() * (theta_max - upper_lo),
          theta_max}) {
      const double p = heads_prob(theta);
      if (p < 0.662) {
        record(sweep, "lower0662", interval, theta, choice.r, p,
               result.violations_lower0662);
      }
    }
  }
  return result;
}

double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("regression needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("degenerate x values");
  return (n * sxy - sx * sy) / denom;
}

ScalingStudyResult run_scaling_study(const std::vector<ScalingCell>& grid,
                                     std::uint64_t trials_per_cell,
                                     std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("scaling grid must be nonempty");
  if (trials_per_cell < 1) {
    throw std::invalid_argument("trials_per_cell must be >= 1");
  }

  ScalingStudyResult result;
  double envelope_c = 0.0;
  std::uint64_t cell_index = 0;
  for (const ScalingCell& cell : grid) {
    CountRunSpec spec;
    spec.n = cell.n;
    spec.k = cell.k;
    spec.config.epsilon = cell.epsilon;
    spec.config.delta = cell.delta;
    spec.master_seed = trial_stream_seed(seed, cell_index++);
    spec.trials = trials_per_cell;
    const std::vector<TrialRow> rows = run_count_trials(spec);

    std::vector<double> totals, step1s, step2s;
    totals.reserve(rows.size());
    for (const TrialRow& row : rows) {
      totals.push_back(static_cast<double>(row.grover_apps));
      step1s.push_back(static_cast<double>(row.step1_queries));
      step2s.push_back(static_cast<double>(row.step2_queries));
      if (cell.k >= 1) {
        const double envelope_unit = theoretical_envelope(
            static_cast<double>(cell.n), static_cast<double>(cell.k),
            cell.epsilon, cell.delta, 1.0);
        envelope_c = std::max(
            envelope_c, static_cast<double>(row.grover_apps) / envelope_unit);
      }
    }
    ScalingCellStats stats;
    stats.cell = cell;
    stats.trials = trials_per_cell;
    stats.median_total = quantile(totals, 0.5);
    stats.q1_total = quantile(totals, 0.25);
    stats.q3_total = quantile(totals, 0.75);
    stats.median_step1 = quantile(step1s, 0.5);
    stats.median_step2 = quantile(step2s, 0.5);
    result.cells.push_back(stats);
  }

  if (result.cells.size() >= 2) {
    // eps axis: cells sharing (n, k, delta), distinct eps
    std::vector<double> xe, ye, xk, yk;
    const ScalingCell& first = result.cells.front().cell;
    for (const ScalingCellStats& stats : result.cells) {
      if (stats.cell.n == first.n && stats.cell.k == first.k &&
          stats.cell.delta == first.delta) {
        xe.push_back(std::log(1.0 / stats.cell.epsilon));
        ye.push_back(std::log(stats.median_step2));
      }
      if (stats.cell.n == first.n && stats.cell.epsilon == first.epsilon &&
          stats.cell.delta == first.delta && stats.cell.k >= 1) {
        xk.push_back(0.5 * std::log(static_cast<double>(stats.cell.n) /
                                    static_cast<double>(stats.cell.k)));
        yk.push_back(std::log(stats.median_total));
      }
    }
    const auto distinct = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return std::unique(v.begin(), v.end()) - v.begin();
    };
    if (xe.size() >= 2 && distinct(xe) >= 2) {
      result.eps_slope = regression_slope(xe, ye);
    }
    if (xk.size() >= 2 && distinct(xk) >= 2) {
      result.sqrt_nk_slope = regression_slope(xk, yk);
    }
    result.envelope_c = envelope_c;
  }
  return result;
}

}  // namespace qcount
