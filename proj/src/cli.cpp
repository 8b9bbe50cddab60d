#include "specsense/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "specsense/acceptance.hpp"
#include "specsense/auc.hpp"
#include "specsense/detection.hpp"
#include "specsense/entropy.hpp"
#include "specsense/errors.hpp"
#include "specsense/montecarlo.hpp"

namespace specsense::cli {
namespace {

// An argument problem detected after parsing; `flag` names the culprit.
struct ArgumentError : std::runtime_error {
  ArgumentError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string param_text(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return number(v.get<double>());
  return v.dump();
}

const CLI::Validator kGreaterThanOne =
    CLI::Validator([](std::string& s) -> std::string {
      try {
        if (std::stod(s) > 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value must be a number greater than 1, got " + s;
    }, "NUMBER > 1");

struct ChannelFlags {
  double m = 1.0;
  double ms = 2.0;
  double snr_db = 0.0;
  CLI::Option* m_opt = nullptr;
  CLI::Option* ms_opt = nullptr;
  CLI::Option* snr_opt = nullptr;

  void add(CLI::App* app) {
    m_opt = app->add_option("--m", m, "multipath shape m")->check(CLI::PositiveNumber);
    ms_opt = app->add_option("--ms", ms, "shadowing shape m_s")->check(kGreaterThanOne);
    snr_opt = app->add_option("--snr-db", snr_db, "mean SNR in dB");
  }
  void require_all() const {
    for (const CLI::Option* o : {m_opt, ms_opt, snr_opt}) {
      if (o->count() == 0) throw ArgumentError(o->get_name(), "required");
    }
  }
  FadingParams params() const { return FadingParams::from_db(m, ms, snr_db); }
  void describe(nlohmann::ordered_json& p) const {
    p["m"] = m;
    p["ms"] = ms;
    p["snr_db"] = snr_db;
  }
};

struct SimFlags {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = kDefaultSeed;
  unsigned streams = 16;

  void add(CLI::App* app) {
    app->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::Range(std::uint64_t{1000}, std::uint64_t{1} << 40));
    app->add_option("--seed", seed, "random seed");
    app->add_option("--streams", streams, "independent random substreams")->check(CLI::Range(1u, 4096u));
  }
  SimConfig config() const {
    SimConfig s;
    s.trials = trials;
    s.seed = seed;
    s.stream_count = streams;
    return s;
  }
  void describe(nlohmann::ordered_json& p) const {
    p["trials"] = trials;
    p["seed"] = seed;
    p["streams"] = streams;
  }
};

std::optional<FusionRule> parse_fusion(const std::string& s) {
  if (s == "or") return FusionRule::Or;
  if (s == "and") return FusionRule::And;
  return std::nullopt;
}

// "lo:hi:n" for n log-spaced points, or a comma-separated list.
std::vector<double> parse_pf_grid(const std::string& text) {
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
      if (parts.size() != 3) throw std::invalid_argument("expected lo:hi:n");
      const double lo = std::stod(parts[0]);
      const double hi = std::stod(parts[1]);
      const int n = std::stoi(parts[2]);
      if (!(lo > 0.0 && hi < 1.0 && lo < hi && n >= 2)) throw std::invalid_argument("need 0 < lo < hi < 1, n >= 2");
      return log_spaced(lo, hi, n);
    }
    std::vector<double> grid;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) grid.push_back(std::stod(part));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw std::invalid_argument("values must lie in (0, 1)");
      if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("values must increase");
    }
    if (grid.empty()) throw std::invalid_argument("empty grid");
    return grid;
  } catch (const std::invalid_argument& e) {
    throw ArgumentError("--pf-grid", e.what());
  } catch (const std::out_of_range& e) {
    throw ArgumentError("--pf-grid", "number out of range");
  }
}

struct Sweep {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    return v;
  }
};

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  try {
    if (parts.size() != 4 || (parts[0] != "m" && parts[0] != "ms")) throw std::invalid_argument("");
    Sweep s{parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoi(parts[3])};
    if (s.steps < 1 || s.hi < s.lo) throw std::invalid_argument("");
    if (s.name == "m" && !(s.lo > 0.0)) throw std::invalid_argument("");
    if (s.name == "ms" && !(s.lo > 1.0)) throw std::invalid_argument("");
    return s;
  } catch (const std::exception&) {
    throw ArgumentError("--sweep", "expected m:lo:hi:steps or ms:lo:hi:steps with m > 0, m_s > 1, got " + text);
  }
}

std::string join_command(const std::vector<std::string>& args) {
  std::string s = "specsense";
  for (const std::string& a : args) s += " " + a;
  return s;
}

}  // namespace

void write_csv(const OutputRecord& record, std::ostream& out) {
  std::vector<std::string> header{"schema_version", "command"};
  std::vector<std::string> prefix{record.schema_version, record.command};
  for (const auto& [key, value] : record.parameters.items()) {
    header.push_back(key);
    prefix.push_back(param_text(value));
  }
  for (const std::string& c : record.columns) header.push_back(c);
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << "\r\n";
  };
  emit(header);
  for (const auto& row : record.rows) {
    std::vector<std::string> fields = prefix;
    for (double v : row) fields.push_back(number(v));
    emit(fields);
  }
}

void write_json(const OutputRecord& record, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = record.schema_version;
  doc["command"] = record.command;
  doc["parameters"] = record.parameters;
  doc["columns"] = record.columns;
  doc["rows"] = record.rows;
  out << doc.dump(2) << "\n";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-detection spectrum sensing over F composite fading channels", "specsense"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

  OutputRecord record;
  record.command = join_command(args);
  std::function<void()> action;

  // roc
  auto* roc = app.add_subcommand("roc", "ROC curve (Pd against Pf)");
  struct {
    int u = 2;
    ChannelFlags channel;
    bool awgn = false;
    std::string pf_grid;
    std::string fusion = "none";
    int users = 1;
    int sls = 1;
    double noise_db = 0.0;
    bool simulate = false;
    SimFlags sim;
  } roc_f;
  roc->add_option("--u", roc_f.u, "time-bandwidth product")->check(CLI::PositiveNumber);
  roc_f.channel.add(roc);
  roc->add_flag("--awgn", roc_f.awgn, "fixed SNR instead of F fading");
  roc->add_option("--pf-grid", roc_f.pf_grid, "lo:hi:n log-spaced, or a comma-separated list");
  roc->add_option("--fusion", roc_f.fusion, "hard-decision fusion rule")->check(CLI::IsMember({"or", "and", "none"}));
  roc->add_option("--users", roc_f.users, "collaborating users")->check(CLI::PositiveNumber);
  roc->add_option("--sls", roc_f.sls, "square-law selection branches")->check(CLI::PositiveNumber);
  roc->add_option("--noise-db", roc_f.noise_db, "noise power uncertainty in dB")->check(CLI::NonNegativeNumber);
  roc->add_flag("--simulate", roc_f.simulate, "add Monte Carlo estimates");
  roc_f.sim.add(roc);
  roc->callback([&] {
    action = [&] {
      if (roc_f.channel.snr_opt->count() == 0) throw ArgumentError("--snr-db", "required");
      if (!roc_f.awgn && (roc_f.channel.m_opt->count() == 0 || roc_f.channel.ms_opt->count() == 0)) {
        throw ArgumentError(roc_f.channel.m_opt->count() == 0 ? "--m" : "--ms", "required unless --awgn is given");
      }
      RocRequest req;
      req.u = roc_f.u;
      req.noise_uncertainty_db = roc_f.noise_db;
      req.fusion = parse_fusion(roc_f.fusion);
      req.users = roc_f.users;
      req.branches = roc_f.sls;
      if (!roc_f.pf_grid.empty()) req.pf_grid = parse_pf_grid(roc_f.pf_grid);
      if (roc_f.awgn) {
        req.channel = AwgnChannel{db_to_linear(roc_f.channel.snr_db)};
      } else {
        req.channel = roc_f.channel.params();
      }
      if (roc_f.simulate) {
        if (roc_f.awgn) throw ArgumentError("--simulate", "needs a fading channel");
        if (req.fusion && req.branches > 1) throw ArgumentError("--simulate", "cannot combine --fusion with --sls");
      }
      const RocCurve curve = roc_curve(req);

      auto& p = record.parameters;
      p["u"] = roc_f.u;
      if (roc_f.awgn) {
        p["channel"] = "awgn";
        p["snr_db"] = roc_f.channel.snr_db;
      } else {
        p["channel"] = "F";
        roc_f.channel.describe(p);
      }
      p["fusion"] = roc_f.fusion;
      p["users"] = req.fusion ? roc_f.users : 1;
      p["sls"] = roc_f.sls;
      p["noise_db"] = roc_f.noise_db;
      p["sweep"] = curve.sweep;
      record.columns = {"pf", "pd", "threshold"};
      if (roc_f.simulate) {
        roc_f.sim.describe(p);
        record.columns.insert(record.columns.end(), {"pd_sim", "ci95"});
      }
      const SimConfig sim = roc_f.sim.config();
      for (const RocPoint& pt : curve.points) {
        std::vector<double> row{pt.pfa, pt.pd, pt.threshold};
        if (roc_f.simulate) {
          const FadingParams fp = std::get<FadingParams>(req.channel);
          const DetectorConfig cfg{req.u, pt.threshold, req.noise_uncertainty_db};
          SimResult r;
          if (req.fusion) {
            r = simulate_fusion(cfg, fp, req.users, *req.fusion, sim);
          } else {
            const std::vector<FadingParams> branches(static_cast<std::size_t>(req.branches), fp);
            r = simulate_sls(cfg, branches, sim);
          }
          row.push_back(r.estimate);
          row.push_back(r.ci95_halfwidth);
        }
        record.rows.push_back(std::move(row));
      }
    };
  });

  // pd
  auto* pd = app.add_subcommand("pd", "fading-averaged detection probability");
  struct {
    int u = 2;
    double threshold = 0.0;
    double pf = 0.0;
    ChannelFlags channel;
    double noise_db = 0.0;
    double rel_tol = SeriesControl{}.rel_tol;
    int max_terms = SeriesControl{}.max_terms;
    bool check = false;
  } pd_f;
  pd->add_option("--u", pd_f.u, "time-bandwidth product")->check(CLI::PositiveNumber);
  auto* threshold_opt = pd->add_option("--threshold", pd_f.threshold, "energy threshold lambda")->check(CLI::NonNegativeNumber);
  auto* pf_opt = pd->add_option("--pf", pd_f.pf, "false-alarm target (sets the threshold)")->check(CLI::Range(0.0, 1.0));
  threshold_opt->excludes(pf_opt);
  pd_f.channel.add(pd);
  pd->add_option("--noise-db", pd_f.noise_db, "noise power uncertainty in dB")->check(CLI::NonNegativeNumber);
  pd->add_option("--rel-tol", pd_f.rel_tol, "series relative tolerance")->check(CLI::PositiveNumber);
  pd->add_option("--max-terms", pd_f.max_terms, "series term limit")->check(CLI::Range(10, 10'000'000));
  pd->add_flag("--check", pd_f.check, "also evaluate the quadrature reference");
  pd->callback([&] {
    action = [&] {
      pd_f.channel.require_all();
      if (threshold_opt->count() == 0 && pf_opt->count() == 0) throw ArgumentError("--threshold", "give --threshold or --pf");
      if (pf_opt->count() && !(pd_f.pf > 0.0 && pd_f.pf < 1.0)) throw ArgumentError("--pf", "must lie in (0, 1)");
      const double lambda = pf_opt->count() ? threshold_for_pfa(pd_f.u, pd_f.pf) : pd_f.threshold;
      const DetectorConfig cfg{pd_f.u, lambda, pd_f.noise_db};
      const FadingParams fp = pd_f.channel.params();
      const SeriesResult r = average_pd_series(cfg, fp, SeriesControl{pd_f.rel_tol, pd_f.max_terms});
      auto& p = record.parameters;
      p["u"] = pd_f.u;
      p["threshold"] = lambda;
      pd_f.channel.describe(p);
      p["noise_db"] = pd_f.noise_db;
      p["rel_tol"] = pd_f.rel_tol;
      p["max_terms"] = pd_f.max_terms;
      record.columns = {"pd", "pf", "terms", "last_term"};
      std::vector<double> row{r.value, pfa(cfg), static_cast<double>(r.terms), r.last_term};
      if (pd_f.check) {
        record.columns.push_back("pd_quadrature");
        row.push_back(average_pd_quadrature(cfg, fp));
      }
      record.rows.push_back(std::move(row));
    };
  });

  // auc
  auto* auc_cmd = app.add_subcommand("auc", "area under the ROC curve");
  struct {
    int u = 2;
    ChannelFlags channel;
    std::vector<std::string> sweeps;
    bool awgn = false;
  } auc_f;
  auc_cmd->add_option("--u", auc_f.u, "time-bandwidth product")->check(CLI::PositiveNumber);
  auc_f.channel.add(auc_cmd);
  auc_cmd->add_option("--sweep", auc_f.sweeps, "m:lo:hi:steps or ms:lo:hi:steps (repeatable)");
  auc_cmd->add_flag("--awgn", auc_f.awgn, "instantaneous AUC at the fixed SNR");
  auc_cmd->callback([&] {
    action = [&] {
      if (auc_f.channel.snr_opt->count() == 0) throw ArgumentError("--snr-db", "required");
      auto& p = record.parameters;
      p["u"] = auc_f.u;
      p["snr_db"] = auc_f.channel.snr_db;
      if (auc_f.awgn) {
        if (!auc_f.sweeps.empty()) throw ArgumentError("--sweep", "not available with --awgn");
        p["channel"] = "awgn";
        record.columns = {"auc"};
        record.rows.push_back({auc_instantaneous(auc_f.u, db_to_linear(auc_f.channel.snr_db))});
        return;
      }
      std::vector<double> ms_values{auc_f.channel.ms};
      std::vector<double> m_values{auc_f.channel.m};
      for (const std::string& text : auc_f.sweeps) {
        const Sweep s = parse_sweep(text);
        (s.name == "m" ? m_values : ms_values) = s.values();
        p["sweep_" + s.name] = text;
      }
      p["channel"] = "F";
      record.columns = {"m", "ms", "auc"};
      for (double m : m_values) {
        for (double ms : ms_values) {
          record.rows.push_back({m, ms, auc_average(auc_f.u, FadingParams::from_db(m, ms, auc_f.channel.snr_db))});
        }
      }
    };
  });

  // entropy
  auto* entropy = app.add_subcommand("entropy", "Shannon, cross and relative entropies");
  struct {
    ChannelFlags channel;
    bool table1 = false;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
  } ent_f;
  ent_f.channel.add(entropy);
  entropy->add_flag("--table1", ent_f.table1, "the eight reference channels (m, m_s) x SNR");
  entropy->add_option("--samples", ent_f.samples, "samples for the maximum likelihood fits")->check(CLI::Range(std::size_t{100}, std::size_t{100'000'000}));
  entropy->add_option("--seed", ent_f.seed, "random seed");
  entropy->callback([&] {
    action = [&] {
      std::vector<std::array<double, 3>> rows;
      if (ent_f.table1) {
        for (double db : {5.0, 15.0}) {
          for (double m : {2.0, 20.0}) {
            for (double ms : {3.0, 30.0}) rows.push_back({m, ms, db});
          }
        }
      } else {
        ent_f.channel.require_all();
        rows.push_back({ent_f.channel.m, ent_f.channel.ms, ent_f.channel.snr_db});
      }
      auto& p = record.parameters;
      p["samples"] = ent_f.samples;
      p["seed"] = ent_f.seed;
      record.columns = {"m", "ms", "snr_db", "h_p", "h_pq_ray", "h_pq_nak", "kl_ray", "kl_nak",
                        "m_hat", "mean_snr_n_db", "mean_snr_r_db"};
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [m, ms, db] = rows[i];
        const EntropyReport r = entropy_report(FadingParams::from_db(m, ms, db), ent_f.samples, ent_f.seed + i);
        record.rows.push_back({m, ms, db, r.shannon_bits, r.cross_rayleigh_bits, r.cross_nakagami_bits,
                               r.kl_rayleigh_bits, r.kl_nakagami_bits, r.m_hat, linear_to_db(r.mean_snr_n),
                               linear_to_db(r.mean_snr_r)});
      }
    };
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates beside their closed forms");
  struct {
    std::string kind = "pd";
    int u = 2;
    double threshold = 0.0;
    double pf = 0.1;
    ChannelFlags channel;
    double noise_db = 0.0;
    int users = 2;
    std::string rule = "or";
    int branches = 2;
    bool h0 = false;
    SimFlags sim;
  } sim_f;
  simulate->add_option("--kind", sim_f.kind, "what to simulate")->check(CLI::IsMember({"pd", "fusion", "sls", "auc"}));
  simulate->add_option("--u", sim_f.u, "time-bandwidth product")->check(CLI::PositiveNumber);
  auto* sim_threshold = simulate->add_option("--threshold", sim_f.threshold, "energy threshold lambda")->check(CLI::NonNegativeNumber);
  auto* sim_pf = simulate->add_option("--pf", sim_f.pf, "per-user, per-branch false-alarm target (default 0.1)")->check(CLI::Range(0.0, 1.0));
  sim_threshold->excludes(sim_pf);
  sim_f.channel.add(simulate);
  simulate->add_option("--noise-db", sim_f.noise_db, "noise power uncertainty in dB")->check(CLI::NonNegativeNumber);
  simulate->add_option("--users", sim_f.users, "collaborating users (fusion)")->check(CLI::PositiveNumber);
  simulate->add_option("--rule", sim_f.rule, "fusion rule")->check(CLI::IsMember({"or", "and"}));
  simulate->add_option("--branches", sim_f.branches, "SLS branches (sls)")->check(CLI::PositiveNumber);
  simulate->add_flag("--h0", sim_f.h0, "simulate the signal-absent hypothesis (fusion, sls)");
  sim_f.sim.add(simulate);
  simulate->callback([&] {
    action = [&] {
      sim_f.channel.require_all();
      if (!sim_threshold->count() && !(sim_f.pf > 0.0 && sim_f.pf < 1.0)) throw ArgumentError("--pf", "must lie in (0, 1)");
      const double lambda = sim_threshold->count() ? sim_f.threshold : threshold_for_pfa(sim_f.u, sim_f.pf);
      const DetectorConfig cfg{sim_f.u, lambda, sim_f.noise_db};
      const FadingParams fp = sim_f.channel.params();
      const SimConfig sim = sim_f.sim.config();
      const Hypothesis h = sim_f.h0 ? Hypothesis::H0 : Hypothesis::H1;
      if (sim_f.h0 && (sim_f.kind == "pd" || sim_f.kind == "auc")) throw ArgumentError("--h0", "only for fusion and sls");
      auto& p = record.parameters;
      p["kind"] = sim_f.kind;
      p["u"] = sim_f.u;
      p["threshold"] = lambda;
      sim_f.channel.describe(p);
      p["noise_db"] = sim_f.noise_db;
      sim_f.sim.describe(p);
      SimResult r;
      double analytic = 0.0;
      if (sim_f.kind == "pd") {
        r = simulate_average_pd(cfg, fp, sim);
        analytic = average_pd(cfg, fp);
      } else if (sim_f.kind == "fusion") {
        const FusionRule rule = *parse_fusion(sim_f.rule);
        p["users"] = sim_f.users;
        p["rule"] = sim_f.rule;
        p["hypothesis"] = sim_f.h0 ? "H0" : "H1";
        r = simulate_fusion(cfg, fp, sim_f.users, rule, sim, h);
        analytic = sim_f.h0 ? collaborative_pfa(pfa(cfg), sim_f.users, rule)
                            : collaborative_pd(average_pd(cfg, fp), sim_f.users, rule);
      } else if (sim_f.kind == "sls") {
        const std::vector<FadingParams> branches(static_cast<std::size_t>(sim_f.branches), fp);
        p["branches"] = sim_f.branches;
        p["hypothesis"] = sim_f.h0 ? "H0" : "H1";
        r = simulate_sls(cfg, branches, sim, h);
        analytic = sim_f.h0 ? sls_pfa(cfg.u, cfg.threshold, sim_f.branches) : sls_average_pd(cfg, branches);
      } else {
        r = simulate_auc(sim_f.u, fp, sim);
        analytic = auc_average(sim_f.u, fp);
      }
      record.columns = {"estimate", "ci95", "analytic"};
      record.rows.push_back({r.estimate, r.ci95_halfwidth, analytic});
    };
  });

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the acceptance checks");
  std::vector<int> only;
  std::uint64_t selftest_seed = AcceptanceOptions{}.seed;
  selftest->add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 9));
  selftest->add_option("--seed", selftest_seed, "random seed");
  bool selftest_ok = true;
  bool is_selftest = false;
  selftest->callback([&] {
    is_selftest = true;
    action = [&] {
      AcceptanceOptions opts;
      opts.only = only;
      opts.seed = selftest_seed;
      const auto results = run_acceptance(opts);
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const CriterionResult& r : results) {
        selftest_ok = selftest_ok && r.passed;
        if (format == "json") {
          doc.push_back({{"criterion", r.id}, {"title", r.title}, {"passed", r.passed},
                         {"detail", r.detail}, {"seconds", r.seconds}});
        } else {
          out << format_criterion(r) << "\n";
        }
      }
      if (format == "json") {
        nlohmann::ordered_json wrapper;
        wrapper["schema_version"] = kSchemaVersion;
        wrapper["command"] = record.command;
        wrapper["criteria"] = doc;
        out << wrapper.dump(2) << "\n";
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    action();
    if (is_selftest) return selftest_ok ? 0 : 1;
    for (const auto& row : record.rows) {
      for (double v : row) {
        if (!std::isfinite(v)) throw ConvergenceError("non-finite value in output");
      }
    }
    if (format == "json") {
      write_json(record, out);
    } else {
      write_csv(record, out);
    }
    return 0;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    err << "parameters: " << record.command << "\n";
    return 1;
  }
}

}  // namespace specsense::cli
