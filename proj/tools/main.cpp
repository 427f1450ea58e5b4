#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facmech/audit.hpp"
#include "facmech/corpus.hpp"
#include "facmech/io.hpp"
#include "facmech/mechanisms.hpp"
#include "facmech/model.hpp"
#include "facmech/search.hpp"

namespace fm = facmech;

namespace {

struct ResolvedInstance {
  fm::Instance instance;
  std::string id;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// A file path wins when it exists; otherwise the string is a corpus name.
ResolvedInstance resolve_instance(const std::string& source) {
  if (std::filesystem::exists(source)) {
    fm::Instance instance = fm::instance_from_json(read_file(source));
    std::string id = fm::instance_digest(instance);
    return {std::move(instance), std::move(id)};
  }
  std::optional<fm::Instance> found = fm::lookup_instance(source);
  if (!found) {
    throw std::invalid_argument("unknown instance '" + source +
                                "': neither a readable file nor a corpus name");
  }
  return {std::move(*found), source};
}

fm::MechanismSpec resolve_mechanism(const std::string& name) {
  std::optional<fm::MechanismSpec> spec = fm::parse_mechanism(name);
  if (!spec) throw std::invalid_argument("unknown mechanism '" + name + "'");
  return *spec;
}

fm::InformationSetting resolve_setting(const std::string& name) {
  std::optional<fm::InformationSetting> setting = fm::setting_from_string(name);
  if (!setting) throw std::invalid_argument("unknown setting '" + name + "'");
  return *setting;
}

void emit(const std::string& report, const std::string& out_path) {
  std::cout << report;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write report file: " + out_path);
    out << report;
  }
}

// Best welfare a single facility can reach on its own; k must be 1.
fm::Rat facility_best(const fm::Instance& instance, int facility) {
  std::vector<fm::Rat> candidates = instance.approver_positions(facility);
  if (candidates.empty()) return fm::Rat(0);
  std::optional<fm::Rat> best;
  for (const fm::Rat& y : candidates) {
    fm::Rat welfare = fm::social_welfare(instance, fm::Outcome::of({fm::Placement{facility, y}}));
    if (!best || welfare > *best) best = std::move(welfare);
  }
  return *best;
}

std::vector<std::string> split_name(const std::string& name) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = name.find(':', start);
    if (colon == std::string::npos) {
      tokens.push_back(name.substr(start));
      return tokens;
    }
    tokens.push_back(name.substr(start, colon - start));
    start = colon + 1;
  }
}

int parse_count(const std::string& token, const char* what) {
  try {
    std::size_t used = 0;
    int value = std::stoi(token, &used);
    if (used == token.size()) return value;
  } catch (...) {
  }
  throw std::invalid_argument(std::string("reproduce: bad ") + what + " '" + token + "'");
}

fm::Rat parse_rat(const std::string& token, const char* what) {
  std::optional<fm::Rat> value = fm::parse_rational(token);
  if (!value) {
    throw std::invalid_argument(std::string("reproduce: bad ") + what + " '" + token + "'");
  }
  return *value;
}

struct CheckTable {
  std::ostringstream rows;
  bool ok = true;

  void line(const std::string& label, const std::string& expected, const std::string& computed,
            bool match) {
    rows << "  " << std::left << std::setw(46) << label << std::setw(14) << expected
         << std::setw(14) << computed << (match ? "ok" : "MISMATCH") << '\n';
  }
  void value(const std::string& label, const fm::Rat& expected, const fm::Rat& computed) {
    bool match = expected == computed;
    ok = ok && match;
    line(label, fm::to_fraction_string(expected), fm::to_fraction_string(computed), match);
  }
  void truth(const std::string& label, bool holds) {
    ok = ok && holds;
    line(label, "yes", holds ? "yes" : "no", holds);
  }
  void note(const std::string& text) { rows << "  note: " << text << '\n'; }
};

void reproduce_fig1(const fm::Rat& eps, CheckTable& table) {
  fm::InstancePair pair = fm::fig1_pair(eps);
  table.value("facility 1 approvers (base)", fm::Rat(2), fm::Rat(pair.base.approver_count(1)));
  table.value("facility 2 approvers (base)", fm::Rat(2), fm::Rat(pair.base.approver_count(2)));
  table.value("optimal welfare (variant)", fm::Rat(2), fm::optimal_choice(pair.variant).welfare);
  table.value("facility 2 best welfare (variant)", 1 + eps, facility_best(pair.variant, 2));
  fm::MechanismSpec middle;
  table.value("middle ratio (variant)", fm::Rat(2),
              fm::approximation_ratio(middle, pair.variant).ratio);
}

void reproduce_fig2(CheckTable& table) {
  fm::InstancePair pair = fm::fig2_pair();
  fm::MechanismSpec middle;
  table.value("optimal welfare (base)", fm::Rat(13, 6), fm::optimal_choice(pair.base).welfare);
  table.value("middle welfare (base)", fm::Rat(11, 6),
              fm::expected_welfare(pair.base, fm::middle_rule(pair.base)));
  table.value("middle ratio (base)", fm::Rat(13, 11),
              fm::approximation_ratio(middle, pair.base).ratio);
  table.value("facility 1 best welfare (variant)", fm::Rat(11, 6), facility_best(pair.variant, 1));
  table.value("facility 2 best welfare (variant)", fm::Rat(13, 6), facility_best(pair.variant, 2));
}

void reproduce_random_median_lb(const fm::Rat& eps, CheckTable& table) {
  fm::InstancePair pair = fm::random_median_lb_pair(eps);
  table.value("facility 1 best welfare (variant)", fm::Rat(2), facility_best(pair.variant, 1));
  table.value("facility 2 best welfare (variant)", 1 + 2 * eps, facility_best(pair.variant, 2));
  table.note("facility 2's best welfare evaluates to 1 + 2*eps, not 1 + eps");
  fm::MechanismSpec mirror;
  mirror.kind = fm::MechanismKind::Mirror;
  table.value("mirror ratio (variant)", fm::Rat(4) / (3 + 2 * eps),
              fm::approximation_ratio(mirror, pair.variant).ratio);
}

void reproduce_fig3(int n, const fm::Rat& eps, CheckTable& table) {
  fm::InstancePair pair = fm::fig3_pair(n, eps);
  fm::MechanismSpec rd;
  rd.kind = fm::MechanismKind::RandomDictatorship;
  table.value("dictatorship utility, truthful (last agent)", fm::Rat(1, n),
              fm::expected_agent_utility(pair.base, n - 1, fm::apply_mechanism(rd, pair.base)));
  table.value("dictatorship utility, after the move", fm::Rat(n - 1, n) * (fm::Rat(1, 2) - eps),
              fm::expected_agent_utility(pair.base, n - 1, fm::apply_mechanism(rd, pair.variant)));
}

void reproduce_prd(CheckTable& table) {
  fm::Instance prd = fm::prd_instance();
  table.value("optimal welfare", fm::Rat(30), fm::optimal_choice(prd).welfare);
  for (const fm::Rat& p : {fm::Rat(0), fm::Rat(1, 4), fm::Rat(1, 2)}) {
    fm::MechanismSpec rd;
    rd.kind = fm::MechanismKind::RandomDictatorship;
    rd.tie_rule = fm::DictatorTieRule::Fixed;
    rd.fixed_p = p;
    fm::Rat denominator = (3 + p) * 225 + 200;
    table.value("fixed:" + fm::to_fraction_string(p) + " welfare", denominator / 50,
                fm::expected_welfare(prd, fm::apply_mechanism(rd, prd)));
    table.value("fixed:" + fm::to_fraction_string(p) + " ratio", 1500 / denominator,
                fm::approximation_ratio(rd, prd).ratio);
  }
  fm::MechanismSpec proportional_tie;
  proportional_tie.kind = fm::MechanismKind::RandomDictatorship;
  proportional_tie.tie_rule = fm::DictatorTieRule::Proportional;
  table.value("proportional-tie welfare", fm::Rat(527, 26),
              fm::expected_welfare(prd, fm::apply_mechanism(proportional_tie, prd)));
  table.value("proportional-tie ratio", fm::Rat(780, 527),
              fm::approximation_ratio(proportional_tie, prd).ratio);
}

void reproduce_km_nongsp(int m, int k, CheckTable& table) {
  fm::Instance instance = fm::km_nongsp_instance(m, k);
  bool one_each = true;
  for (int j = 1; j <= m; ++j) one_each = one_each && instance.approver_count(j) == 1;
  table.truth("every facility has exactly one approver", one_each);

  fm::MechanismSpec km;
  km.kind = fm::MechanismKind::KmMiddle;
  fm::Lottery lottery = fm::apply_mechanism(km, instance);
  const fm::Outcome& picked = lottery.entries().front().outcome;
  bool lowest = picked.size() == k;
  for (int i = 0; i < picked.size() && lowest; ++i) {
    const fm::Placement& placement = picked.placements()[static_cast<std::size_t>(i)];
    lowest = placement.facility == i + 1 && placement.location == fm::Rat(1, 2);
  }
  table.truth("selects the k lowest-index facilities at 1/2", lowest);

  fm::DeviationSpace space;
  space.setting = fm::InformationSetting::KnownPositions;
  fm::AuditReport audit = fm::audit_group_strategyproof(km, instance, space, 2);
  table.truth("coalition audit fails", !audit.passed);
  if (!audit.passed) {
    const fm::Violation& violation = audit.violations.front();
    std::string wanted =
        "{" + std::to_string(k + 1) + ", " + std::to_string(k + 2) + "}";
    table.truth("first violating coalition is " + wanted,
                violation.members.size() == 2 && violation.members[0].agent == k &&
                    violation.members[1].agent == k + 1);
    table.value("coalition utility before", fm::Rat(0), violation.members[0].utility_before);
    table.value("coalition utility after", fm::Rat(1), violation.members[0].utility_after);
  }
}

void reproduce_km_lb(int m, int k, const fm::Rat& eps, CheckTable& table) {
  std::vector<fm::Instance> sequence = fm::km_lb_sequence(m, k, eps);
  table.value("sequence length", fm::Rat(m - k + 1), fm::Rat(sequence.size()));
  fm::MechanismSpec km;
  km.kind = fm::MechanismKind::KmMiddle;
  fm::Rat bound = (1 + eps) * k;
  for (std::size_t j = 0; j < sequence.size(); ++j) {
    table.value("selected-set welfare, step " + std::to_string(j), bound,
                fm::expected_welfare(sequence[j], fm::apply_mechanism(km, sequence[j])));
  }
  table.value("optimal welfare, final step", fm::Rat(2 * k),
              fm::optimal_choice(sequence.back()).welfare);
}

void reproduce_rd_worst_case(CheckTable& table) {
  fm::Instance instance = fm::rd_worst_case_instance();
  fm::MechanismSpec rd;
  rd.kind = fm::MechanismKind::RandomDictatorship;
  table.value("dictatorship welfare", fm::Rat(2),
              fm::expected_welfare(instance, fm::apply_mechanism(rd, instance)));
  table.value("optimal welfare", fm::Rat(3), fm::optimal_choice(instance).welfare);
  table.value("ratio", fm::Rat(3, 2), fm::approximation_ratio(rd, instance).ratio);
}

int run_reproduce(const std::string& name) {
  std::vector<std::string> tokens = split_name(name);
  std::string head = tokens.front();
  tokens.erase(tokens.begin());

  CheckTable table;
  if (head == "fig1" || head == "random-median-lb") {
    if (tokens.size() > 1) throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    fm::Rat eps = tokens.empty() ? fm::Rat(1, 100) : parse_rat(tokens[0], "eps");
    if (head == "fig1") {
      reproduce_fig1(eps, table);
    } else {
      reproduce_random_median_lb(eps, table);
    }
  } else if (head == "fig2") {
    if (!tokens.empty()) throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    reproduce_fig2(table);
  } else if (head == "fig3") {
    if (tokens.size() > 2) throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    int n = tokens.empty() ? 4 : parse_count(tokens[0], "n");
    fm::Rat eps = tokens.size() < 2 ? fm::Rat(1, 100) : parse_rat(tokens[1], "eps");
    reproduce_fig3(n, eps, table);
  } else if (head == "prd") {
    if (!tokens.empty()) throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    reproduce_prd(table);
  } else if (head == "km-nongsp") {
    if (tokens.size() != 0 && tokens.size() != 2) {
      throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    }
    int m = tokens.empty() ? 4 : parse_count(tokens[0], "m");
    int k = tokens.empty() ? 2 : parse_count(tokens[1], "k");
    reproduce_km_nongsp(m, k, table);
  } else if (head == "km-lb") {
    if (tokens.size() == 1 || tokens.size() > 3) {
      throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    }
    int m = tokens.empty() ? 4 : parse_count(tokens[0], "m");
    int k = tokens.empty() ? 2 : parse_count(tokens[1], "k");
    fm::Rat eps = tokens.size() < 3 ? fm::Rat(1, 100) : parse_rat(tokens[2], "eps");
    reproduce_km_lb(m, k, eps, table);
  } else if (head == "rd-worst-case") {
    if (!tokens.empty()) throw std::invalid_argument("reproduce: unknown name '" + name + "'");
    reproduce_rd_worst_case(table);
  } else {
    throw std::invalid_argument("reproduce: unknown name '" + name + "'");
  }

  std::cout << name << '\n';
  std::cout << "  " << std::left << std::setw(46) << "check" << std::setw(14) << "expected"
            << std::setw(14) << "computed" << "status" << '\n';
  std::cout << table.rows.str();
  std::cout << (table.ok ? "all checks match" : "MISMATCH detected") << '\n';
  return table.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"facility-location mechanism workbench"};
  app.require_subcommand(1);

  std::string mechanism;
  std::string instance;
  std::string setting = "general";
  std::string format = "json";
  std::string out;
  std::string klass = "sum";
  std::string reproduce_name;
  int grid = 4;
  bool group = false;
  int max_coalition = 1;
  long long eval_cap = 20'000'000;
  int n = 4;
  int m = 2;
  int k = 1;
  int search_grid = 8;
  int restarts = 16;
  std::uint64_t seed = 0;
  long long iters = 10'000;
  long long budget = 100'000;

  CLI::App* cmd_eval = app.add_subcommand("eval", "run a mechanism and print its lottery");
  cmd_eval->add_option("--mechanism", mechanism, "mechanism name, e.g. middle or rd:fixed:1/2")
      ->required();
  cmd_eval->add_option("--instance", instance, "instance file or corpus name")->required();
  cmd_eval->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_opt = app.add_subcommand("opt", "print the welfare-optimal placement");
  cmd_opt->add_option("--instance", instance, "instance file or corpus name")->required();
  cmd_opt->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_audit = app.add_subcommand("audit", "search misreports for utility gains");
  cmd_audit->add_option("--mechanism", mechanism, "mechanism name")->required();
  cmd_audit->add_option("--instance", instance, "instance file or corpus name")->required();
  cmd_audit->add_option("--setting", setting, "general | known-preferences | known-positions");
  cmd_audit->add_option("--grid", grid, "misreport position grid denominator");
  cmd_audit->add_flag("--group", group, "audit coalitions, not just single agents");
  cmd_audit->add_option("--max-coalition", max_coalition, "largest coalition size (with --group)");
  cmd_audit->add_option("--eval-cap", eval_cap, "abort above this many deviation evaluations");
  cmd_audit->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_audit->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_ratio = app.add_subcommand("ratio", "approximation ratio on one instance");
  cmd_ratio->add_option("--mechanism", mechanism, "mechanism name")->required();
  cmd_ratio->add_option("--instance", instance, "instance file or corpus name")->required();
  cmd_ratio->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_search = app.add_subcommand("search", "hill-climb for worst-case instances");
  cmd_search->add_option("--mechanism", mechanism, "mechanism name")->required();
  cmd_search->add_option("--n", n, "number of agents");
  cmd_search->add_option("--m", m, "number of facilities");
  cmd_search->add_option("--k", k, "facilities to place");
  cmd_search->add_option("--class", klass, "sum | min | max")
      ->check(CLI::IsMember({"sum", "min", "max"}));
  cmd_search->add_option("--grid", search_grid, "position grid denominator");
  cmd_search->add_option("--seed", seed, "RNG seed")->required();
  cmd_search->add_option("--iters", iters, "total evaluation budget");
  cmd_search->add_option("--restarts", restarts, "independent restarts");
  cmd_search->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_conjecture =
      app.add_subcommand("conjecture", "probe the proportional-tie dictatorship rule");
  cmd_conjecture->add_option("--seed", seed, "RNG seed")->required();
  cmd_conjecture->add_option("--budget", budget, "search evaluation budget");
  cmd_conjecture->add_option("--out", out, "also write the report to this file");

  CLI::App* cmd_reproduce =
      app.add_subcommand("reproduce", "recompute a corpus instance's published values");
  cmd_reproduce->add_option("name", reproduce_name, "corpus name, e.g. fig2 or km-lb:4:2:1/100")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_eval) {
      ResolvedInstance resolved = resolve_instance(instance);
      fm::MechanismSpec spec = resolve_mechanism(mechanism);
      fm::Lottery lottery = fm::apply_mechanism(spec, resolved.instance);
      emit(fm::eval_report_to_json(fm::to_string(spec), resolved.id, resolved.instance, lottery),
           out);
      return 0;
    }
    if (*cmd_opt) {
      ResolvedInstance resolved = resolve_instance(instance);
      fm::OptimalResult result = fm::optimal_choice(resolved.instance);
      emit(fm::opt_report_to_json(resolved.id, resolved.instance, result), out);
      return 0;
    }
    if (*cmd_audit) {
      ResolvedInstance resolved = resolve_instance(instance);
      fm::MechanismSpec spec = resolve_mechanism(mechanism);
      fm::DeviationSpace space;
      space.setting = resolve_setting(setting);
      space.grid_den = grid;
      space.eval_cap = eval_cap;
      fm::AuditReport report =
          group ? fm::audit_group_strategyproof(spec, resolved.instance, space, max_coalition)
                : fm::audit_strategyproof(spec, resolved.instance, space);
      report.instance_id = resolved.id;
      emit(format == "csv" ? fm::audit_report_to_csv(report) : fm::audit_report_to_json(report),
           out);
      return report.passed ? 0 : 1;
    }
    if (*cmd_ratio) {
      ResolvedInstance resolved = resolve_instance(instance);
      fm::MechanismSpec spec = resolve_mechanism(mechanism);
      fm::RatioReport report = fm::approximation_ratio(spec, resolved.instance);
      report.instance_id = resolved.id;
      emit(fm::ratio_report_to_json(report), out);
      return report.within_bound ? 0 : 1;
    }
    if (*cmd_search) {
      fm::SearchConfig config;
      config.mechanism = resolve_mechanism(mechanism);
      config.n = n;
      config.m = m;
      config.k = k;
      std::optional<fm::UtilityClass> utility = fm::utility_class_from_string(klass);
      if (!utility) throw std::invalid_argument("unknown utility class '" + klass + "'");
      config.utility_class = *utility;
      config.grid_den = search_grid;
      config.seed = seed;
      config.restarts = restarts;
      config.iterations = iters;
      fm::SearchResult result = fm::worst_case_search(config);
      emit(fm::search_result_to_json(result), out);
      return fm::within_documented_bound(config.mechanism, result.max_ratio, result.infinite)
                 ? 0
                 : 1;
    }
    if (*cmd_conjecture) {
      fm::ConjectureReport report = fm::conjecture_scan(seed, budget);
      emit(fm::conjecture_report_to_json(report), out);
      return 0;
    }
    if (*cmd_reproduce) return run_reproduce(reproduce_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
