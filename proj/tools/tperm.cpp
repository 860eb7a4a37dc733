// tperm: command-line front end for the tensor permanent library.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tperm/approximator.hpp"
#include "tperm/bench.hpp"
#include "tperm/coeff_series.hpp"
#include "tperm/json_io.hpp"
#include "tperm/permanent.hpp"
#include "tperm/sampling.hpp"
#include "tperm/symmetric.hpp"
#include "tperm/verify.hpp"

namespace {

using tperm::Complex;
using tperm::Error;
using tperm::ErrorCode;
using tperm::Json;

struct Global {
  unsigned threads = 1;
  bool deterministic = false;
  std::string out;
  std::string csv;
};

// Usage problems found after CLI11 has parsed the flags.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Complex parse_complex(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw UsageError(std::string(flag) + " expects RE or RE,IM, got '" + text + "'");
    }
    return v;
  };
  const std::string_view all(text);
  if (comma == std::string::npos) return Complex{number(all), 0.0};
  return Complex{number(all.substr(0, comma)), number(all.substr(comma + 1))};
}

tperm::EntryKind parse_kind(const std::string& name) {
  if (auto k = tperm::parse_entry_kind(name)) return *k;
  throw UsageError("unknown --kind '" + name +
                   "' (complex-gaussian, real-gaussian, shifted-rademacher)");
}

tperm::Tensor load(const std::string& input) {
  if (input == "-") return tperm::read_tensor(std::cin);
  return tperm::read_tensor_file(input);
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    tperm::write_text_file(g.out, text);
  }
}

void emit_csv(const Global& g, const std::string& text) {
  if (!g.csv.empty()) tperm::write_text_file(g.csv, text);
}

Json error_json(std::string_view code, const std::string& message) {
  Json j;
  j["error"]["code"] = code;
  j["error"]["message"] = message;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and approximate permanents of random complex tensors"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores); results do not depend on it");
  app.add_flag("--deterministic", g.deterministic, "Omit wall-clock fields so output is byte-identical");
  app.add_option("--out", g.out, "Primary output file (default: stdout)");
  app.add_option("--csv", g.csv, "CSV output file, where the subcommand has one");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a random tensor");
  std::string kind_name = "complex-gaussian";
  std::string mu_text = "0";
  int d = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  sample->add_option("--kind", kind_name, "Entry distribution");
  sample->add_option("--mu", mu_text, "Mean, RE or RE,IM");
  sample->add_option("--d", d, "Order")->required();
  sample->add_option("--n", n, "Dimension")->required();
  sample->add_option("--seed", seed, "Master seed");
  sample->add_option("--stream", stream, "Stream id");

  // exact
  std::string input = "-";
  double budget = tperm::kDefaultWorkBudget;
  auto* exact = app.add_subcommand("exact", "Exact permanent");
  bool with_log = false;
  exact->add_option("--input", input, "Tensor JSON file, - for stdin");
  exact->add_flag("--log", with_log, "Include the log-magnitude/argument form");
  exact->add_option("--budget", budget, "Maximum (n!)^(d-1)");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "Coefficients a_0..a_t");
  int t = 0;
  coeffs->add_option("--input", input, "Tensor JSON file, - for stdin");
  coeffs->add_option("--t", t, "Truncation order")->required();
  coeffs->add_option("--budget", budget, "Maximum C(n,k)^d (k!)^(d-1) per coefficient");

  // identity-check
  auto* identity = app.add_subcommand("identity-check", "Residual of the series identity at z");
  std::string z_text;
  identity->add_option("--input", input, "Tensor JSON file, - for stdin");
  identity->add_option("--z", z_text, "z, RE or RE,IM")->required();
  identity->add_option("--budget", budget, "Work budget");

  // stats
  auto* stats = app.add_subcommand("stats", "Hyperplane scores, V_k, D_k and V'_k");
  int kmax = 0;
  std::string xi_text = "0";
  stats->add_option("--input", input, "Tensor JSON file, - for stdin");
  stats->add_option("--kmax", kmax, "Largest k")->required();
  stats->add_option("--xi", xi_text, "Quasi-variance used for V'_k, RE or RE,IM");

  // approx
  auto* approx = app.add_subcommand("approx", "Approximate permanent of R");
  double epsilon = 0.5;
  std::optional<int> t_override;
  std::string method = "series";
  double c = 0.1;
  double rho = 0.1;
  approx->add_option("--input", input, "Tensor JSON file, - for stdin");
  approx->add_option("--mu", mu_text, "Mean of the entries, RE or RE,IM")->required();
  approx->add_option("--epsilon", epsilon, "Target relative error in (0,1)")->required();
  approx->add_option("--t", t_override, "Override the truncation order");
  approx->add_option("--method", method, "series, ptas or auto")
      ->check(CLI::IsMember({"series", "ptas", "auto"}));
  approx->add_option("--xi", xi_text, "Quasi-variance for the closed form");
  approx->add_option("--c", c, "Admissibility exponent");
  approx->add_option("--rho", rho, "Dispatch exponent in (0, 1/8)");
  approx->add_option("--budget", budget, "Work budget per coefficient");

  // verify
  auto* verify = app.add_subcommand("verify", "Monte Carlo checks of the moment and concentration laws");
  std::string experiment;
  std::vector<int> dims;
  int trials = 0;
  std::optional<int> kmax_opt;
  std::string z_exp = "1";
  std::string mu_exp = "1";
  std::string thresholds_path;
  std::string trials_csv;
  verify->add_option("--experiment", experiment, "moments, concentration, closeness or end-to-end")
      ->required()
      ->check(CLI::IsMember({"moments", "concentration", "closeness", "end-to-end"}));
  verify->add_option("--kind", kind_name, "Entry distribution");
  verify->add_option("--d", d, "Order")->required();
  verify->add_option("--n", dims, "Dimension(s), comma separated")->required()->delimiter(',');
  verify->add_option("--trials", trials, "Trials")->required();
  verify->add_option("--seed", seed, "Master seed");
  verify->add_option("--kmax", kmax_opt, "Largest k (moments: 2, concentration: 3)");
  verify->add_option("--epsilon", epsilon, "Epsilon for closeness and end-to-end");
  verify->add_option("--z", z_exp, "z for closeness, RE or RE,IM");
  verify->add_option("--mu", mu_exp, "Mean for end-to-end, RE or RE,IM");
  verify->add_option("--t", t_override, "Truncation order for closeness");
  verify->add_option("--thresholds", thresholds_path, "JSON file mapping row names to frozen upper bounds");
  verify->add_option("--trials-csv", trials_csv, "Per-trial CSV file");

  // bench
  auto* bench = app.add_subcommand("bench", "Time coefficient_a over a (d, n, k) grid");
  std::vector<int> bench_d, bench_n, bench_k;
  double min_seconds = 0.05;
  double bench_budget = 1e11;
  bench->add_option("--d", bench_d, "Orders, comma separated")->delimiter(',');
  bench->add_option("--n", bench_n, "Dimensions, comma separated")->delimiter(',');
  bench->add_option("--k", bench_k, "Coefficient orders, comma separated")->delimiter(',');
  bench->add_option("--seed", seed, "Seed of the timed tensor");
  bench->add_option("--budget", bench_budget, "Skip rows above this predicted work");
  bench->add_option("--min-seconds", min_seconds, "Repeat each row for at least this long");
  std::string summary_path;
  bench->add_option("--summary", summary_path, "JSON file with the rows and fitted slopes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << tperm::dump(error_json("usage", e.what()));
    return 2;
  }

  try {
    if (*sample) {
      const auto dist = tperm::make_distribution(parse_kind(kind_name), parse_complex(mu_text, "--mu"));
      const auto tensor = tperm::sample_tensor(dist, d, n, tperm::SeedSpec{seed, stream},
                                               tperm::kDefaultStorageCap, g.threads);
      emit(g, tperm::tensor_to_json(tensor).dump() + "\n");
    } else if (*exact) {
      const auto tensor = load(input);
      const auto p = tperm::permanent_exact(tensor, tperm::ExactOptions{budget, g.threads});
      Json j;
      if (with_log) {
        j = tperm::permanent_to_json(p);
      } else {
        j["value"] = tperm::complex_to_json(p.value);
      }
      emit(g, tperm::dump(j));
    } else if (*coeffs) {
      const auto tensor = load(input);
      const auto s = tperm::coefficients_upto(tensor, t, tperm::SeriesOptions{budget, g.threads});
      emit(g, tperm::dump(tperm::series_to_json(s)));
    } else if (*identity) {
      const auto tensor = load(input);
      const Complex z = parse_complex(z_text, "--z");
      Json j;
      j["z"] = tperm::complex_to_json(z);
      j["residual"] = tperm::verify_identity(tensor, z, tperm::SeriesOptions{budget, g.threads});
      emit(g, tperm::dump(j));
    } else if (*stats) {
      const auto tensor = load(input);
      const Complex xi = parse_complex(xi_text, "--xi");
      const auto scores = tperm::hyperplane_scores(tensor);
      const auto v = tperm::V_coeffs(scores, kmax);
      const auto dk = tperm::D_moments(scores, std::max(kmax, 1));
      Json j;
      Json cj = Json::array();
      for (const Complex& s : scores.scores) cj.push_back(tperm::complex_to_json(s));
      j["scores"] = std::move(cj);
      j["V"] = tperm::series_to_json(v);
      Json dj = Json::array();
      for (int k = 1; k <= kmax; ++k) dj.push_back(tperm::complex_to_json(dk[k]));
      j["D"] = std::move(dj);
      j["xi"] = tperm::complex_to_json(xi);
      j["Vprime"] = tperm::series_to_json(
          tperm::vprime_recursion(kmax >= 1 ? v.coefficients[1] : Complex{0.0, 0.0}, xi, kmax));
      emit(g, tperm::dump(j));
    } else if (*approx) {
      const auto tensor = load(input);
      const Complex mu = parse_complex(mu_text, "--mu");
      const Complex xi = parse_complex(xi_text, "--xi");
      tperm::ApproxOptions opts;
      opts.t = t_override;
      opts.c = c;
      opts.series = tperm::SeriesOptions{budget, g.threads};
      tperm::ApproxResult r;
      if (method == "series") {
        r = tperm::approx_permanent(tensor, mu, epsilon, opts);
      } else if (method == "ptas") {
        r = tperm::ptas_estimate(tensor, mu, xi, opts);
      } else {
        r = tperm::ptas_dispatch(tensor, mu, xi, epsilon, rho, opts);
      }
      emit(g, tperm::dump(tperm::approx_to_json(r)));
    } else if (*verify) {
      tperm::VerifyOptions opts;
      opts.threads = g.threads;
      opts.timing = !g.deterministic;
      if (!thresholds_path.empty()) {
        std::ifstream in(thresholds_path);
        if (!in) throw Error(ErrorCode::kIo, "cannot open " + thresholds_path);
        Json th;
        try {
          th = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
          throw Error(ErrorCode::kParse, std::string("invalid thresholds JSON: ") + e.what());
        }
        if (!th.is_object()) throw Error(ErrorCode::kParse, "thresholds must be a JSON object");
        for (const auto& [key, value] : th.items()) {
          if (!value.is_number()) throw Error(ErrorCode::kParse, "threshold " + key + " is not a number");
          opts.thresholds[key] = value.get<double>();
        }
      }
      const auto kind = parse_kind(kind_name);
      tperm::ExperimentReport r;
      if (experiment == "concentration") {
        r = tperm::concentration_experiment(kind, d, dims, kmax_opt.value_or(3), trials, seed, opts);
      } else {
        if (dims.size() != 1) throw UsageError("--n takes a single value for " + experiment);
        const int n1 = dims.front();
        if (experiment == "moments") {
          r = tperm::moment_experiment(kind, d, n1, kmax_opt.value_or(2), trials, seed, opts);
        } else if (experiment == "closeness") {
          r = tperm::closeness_experiment(kind, d, n1, epsilon, parse_complex(z_exp, "--z"), trials,
                                          seed, opts, t_override);
        } else {
          r = tperm::end_to_end_experiment(kind, d, n1, parse_complex(mu_exp, "--mu"), epsilon,
                                           trials, seed, opts);
        }
      }
      emit(g, tperm::dump(tperm::report_to_json(r)));
      emit_csv(g, tperm::report_rows_csv(r));
      if (!trials_csv.empty()) tperm::write_text_file(trials_csv, r.trial_csv);
    } else if (*bench) {
      tperm::BenchGrid grid;
      grid.orders = bench_d;
      grid.dims = bench_n;
      grid.ks = bench_k;
      grid.seed = seed;
      grid.budget = bench_budget;
      grid.min_seconds = min_seconds;
      grid.timing = !g.deterministic;
      grid.threads = g.threads;
      const auto report = tperm::run_bench(grid);
      Json j;
      Json rows = Json::array();
      for (const auto& row : report.rows) {
        Json x;
        x["d"] = row.d;
        x["n"] = row.n;
        x["k"] = row.k;
        x["subtensor_count"] = row.subtensor_count ? Json(*row.subtensor_count) : Json(nullptr);
        x["predicted_work"] = row.predicted_work;
        x["seconds"] = row.seconds ? Json(*row.seconds) : Json(nullptr);
        x["status"] = row.status;
        rows.push_back(std::move(x));
      }
      j["rows"] = std::move(rows);
      Json slopes = Json::array();
      for (const auto& s : report.slopes) {
        Json x;
        x["d"] = s.d;
        x["n"] = s.n;
        x["points"] = s.points;
        x["slope"] = s.slope ? Json(*s.slope) : Json(nullptr);
        slopes.push_back(std::move(x));
      }
      j["slopes"] = std::move(slopes);
      emit(g, tperm::bench_csv(report));
      emit_csv(g, tperm::bench_csv(report));
      if (!summary_path.empty()) tperm::write_text_file(summary_path, tperm::dump(j));
      for (const auto& s : report.slopes) {
        if (s.slope) {
          std::cerr << "log-log slope d=" << s.d << " n=" << s.n << ": " << *s.slope << " ("
                    << s.points << " points)\n";
        }
      }
    }
  } catch (const UsageError& e) {
    std::cerr << tperm::dump(error_json("usage", e.what()));
    return 2;
  } catch (const Error& e) {
    std::cerr << tperm::dump(error_json(tperm::error_code_name(e.code()), e.what()));
    return 1;
  } catch (const std::exception& e) {
    std::cerr << tperm::dump(error_json("internal", e.what()));
    return 1;
  }
  return 0;
}
