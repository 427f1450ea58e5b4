#include "facmech/corpus.hpp"

#include <charconv>
#include <stdexcept>

namespace facmech {

namespace {

void check_eps(const Rat& eps, const char* name) {
  if (eps <= 0 || eps >= Rat(1, 2)) {
    throw std::invalid_argument(std::string(name) + ": eps must lie in (0, 1/2)");
  }
}

Agent agent(std::initializer_list<int> ids, Rat x) {
  return Agent{std::move(x), Preference::from_ids(ids)};
}

std::optional<int> parse_int(const std::string& token) {
  int value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::vector<std::string> split(const std::string& name) {
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

// Consumes a trailing "prime" token; the caller picks base or variant.
bool take_prime(std::vector<std::string>& tokens) {
  if (!tokens.empty() && tokens.back() == "prime") {
    tokens.pop_back();
    return true;
  }
  return false;
}

std::optional<Instance> from_pair(const InstancePair& pair, bool prime) {
  return prime ? pair.variant : pair.base;
}

}  // namespace

InstancePair fig1_pair(const Rat& eps) {
  check_eps(eps, "fig1");
  Instance base = Instance::create(
      {agent({2}, eps), agent({1}, eps), agent({2}, Rat(1)), agent({1}, Rat(1))}, 2, 1);
  Instance variant = base.with_agent(1, agent({1}, Rat(1)));
  return {std::move(base), std::move(variant)};
}

InstancePair fig2_pair() {
  Instance base = Instance::create({agent({2}, Rat(0)), agent({1, 2}, Rat(1, 6)),
                                    agent({1, 2}, Rat(5, 6)), agent({1}, Rat(1))},
                                   2, 1);
  Instance variant = base.with_agent(1, agent({2}, Rat(1, 6)));
  return {std::move(base), std::move(variant)};
}

InstancePair random_median_lb_pair(const Rat& eps) {
  check_eps(eps, "random-median-lb");
  Instance base = Instance::create(
      {agent({2}, eps), agent({1}, eps), agent({2}, 1 - eps), agent({1}, 1 - eps)}, 2, 1);
  Instance variant = base.with_agent(3, agent({1}, eps));
  return {std::move(base), std::move(variant)};
}

InstancePair fig3_pair(int n, const Rat& eps) {
  if (n < 4) throw std::invalid_argument("fig3: needs n >= 4");
  check_eps(eps, "fig3");
  Rat inner = Rat(1, 2) - eps;
  std::vector<Agent> agents;
  agents.push_back(agent({1}, Rat(0)));
  for (int i = 0; i < n - 2; ++i) agents.push_back(agent({1, 2}, inner));
  agents.push_back(agent({2}, Rat(1)));
  Instance base = Instance::create(std::move(agents), 2, 1);
  Instance variant = base.with_agent(n - 1, agent({2}, inner));
  return {std::move(base), std::move(variant)};
}

Instance prd_instance() {
  std::vector<Agent> agents;
  for (int i = 0; i < 15; ++i) agents.push_back(agent({1, 2}, Rat(0)));
  for (int i = 0; i < 15; ++i) agents.push_back(agent({1}, Rat(0)));
  for (int i = 0; i < 10; ++i) agents.push_back(agent({1}, Rat(1)));
  for (int i = 0; i < 10; ++i) agents.push_back(agent({2}, Rat(1)));
  return Instance::create(std::move(agents), 2, 1);
}

Instance km_nongsp_instance(int m, int k) {
  if (m < 4) throw std::invalid_argument("km-nongsp: needs m >= 4");
  if (k < 2 || k > m - 2) throw std::invalid_argument("km-nongsp: needs 2 <= k <= m-2");
  std::vector<Agent> agents;
  for (int i = 1; i <= m; ++i) agents.push_back(agent({i}, Rat(1, 2)));
  return Instance::create(std::move(agents), m, k);
}

std::vector<Instance> km_lb_sequence(int m, int k, const Rat& eps) {
  if (k < 1) throw std::invalid_argument("km-lb: needs k >= 1");
  if (2 * k > m) throw std::invalid_argument("km-lb: needs 2k <= m");
  check_eps(eps, "km-lb");
  std::vector<Agent> agents;
  for (int j = 1; j <= m; ++j) {
    agents.push_back(agent({j}, eps));
    agents.push_back(agent({j}, Rat(1)));
  }
  std::vector<Instance> sequence;
  sequence.push_back(Instance::create(std::move(agents), m, k));
  for (int j = 1; j <= m - k; ++j) {
    int moved = 2 * (k + j - 1);  // the eps approver of facility k+j
    sequence.push_back(
        sequence.back().with_agent(moved, agent({k + j}, Rat(1))));
  }
  return sequence;
}

Instance rd_worst_case_instance() {
  return Instance::create({agent({1}, Rat(0)), agent({1}, Rat(0)), agent({1}, Rat(0)),
                           agent({1}, Rat(1)), agent({2}, Rat(0)), agent({2}, Rat(1))},
                          2, 1);
}

std::optional<Instance> lookup_instance(const std::string& name) {
  std::vector<std::string> tokens = split(name);
  std::string head = tokens.front();
  tokens.erase(tokens.begin());

  if (head == "fig1" || head == "random-median-lb") {
    bool prime = take_prime(tokens);
    Rat eps(1, 100);
    if (tokens.size() == 1) {
      std::optional<Rat> parsed = parse_rational(tokens[0]);
      if (!parsed) return std::nullopt;
      eps = std::move(*parsed);
    } else if (!tokens.empty()) {
      return std::nullopt;
    }
    return from_pair(head == "fig1" ? fig1_pair(eps) : random_median_lb_pair(eps), prime);
  }
  if (head == "fig2") {
    bool prime = take_prime(tokens);
    if (!tokens.empty()) return std::nullopt;
    return from_pair(fig2_pair(), prime);
  }
  if (head == "fig3") {
    bool prime = take_prime(tokens);
    int n = 4;
    Rat eps(1, 100);
    if (tokens.size() >= 1) {
      std::optional<int> parsed = parse_int(tokens[0]);
      if (!parsed) return std::nullopt;
      n = *parsed;
    }
    if (tokens.size() == 2) {
      std::optional<Rat> parsed = parse_rational(tokens[1]);
      if (!parsed) return std::nullopt;
      eps = std::move(*parsed);
    }
    if (tokens.size() > 2) return std::nullopt;
    return from_pair(fig3_pair(n, eps), prime);
  }
  if (head == "prd") {
    if (!tokens.empty()) return std::nullopt;
    return prd_instance();
  }
  if (head == "km-nongsp") {
    if (tokens.empty()) return km_nongsp_instance();
    if (tokens.size() != 2) return std::nullopt;
    std::optional<int> m = parse_int(tokens[0]);
    std::optional<int> k = parse_int(tokens[1]);
    if (!m || !k) return std::nullopt;
    return km_nongsp_instance(*m, *k);
  }
  if (head == "km-lb") {
    int m = 4;
    int k = 2;
    Rat eps(1, 100);
    int index = 0;
    if (tokens.size() == 1 || tokens.size() > 4) return std::nullopt;
    if (tokens.size() >= 2) {
      std::optional<int> pm = parse_int(tokens[0]);
      std::optional<int> pk = parse_int(tokens[1]);
      if (!pm || !pk) return std::nullopt;
      m = *pm;
      k = *pk;
    }
    if (tokens.size() >= 3) {
      std::optional<Rat> parsed = parse_rational(tokens[2]);
      if (!parsed) return std::nullopt;
      eps = std::move(*parsed);
    }
    if (tokens.size() == 4) {
      std::optional<int> parsed = parse_int(tokens[3]);
      if (!parsed) return std::nullopt;
      index = *parsed;
    }
    std::vector<Instance> sequence = km_lb_sequence(m, k, eps);
    if (index < 0 || index >= static_cast<int>(sequence.size())) {
      throw std::invalid_argument("km-lb: step index must lie in [0, " +
                                  std::to_string(sequence.size() - 1) + "]");
    }
    return sequence[static_cast<std::size_t>(index)];
  }
  if (head == "rd-worst-case") {
    if (!tokens.empty()) return std::nullopt;
    return rd_worst_case_instance();
  }
  return std::nullopt;
}

std::vector<std::string> corpus_names() {
  return {"fig1", "fig2", "random-median-lb", "fig3",
          "prd",  "km-nongsp", "km-lb", "rd-worst-case"};
}

}  // namespace facmech
