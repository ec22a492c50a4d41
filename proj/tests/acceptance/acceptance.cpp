// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "compocheck/cli.hpp"
#include "compocheck/rules.hpp"
#include "compocheck/simulator.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace compocheck;

namespace {

// Pinned tolerances.
constexpr double kDelegationExampleBudgetMs = 1000.0;
constexpr int kClassificationRows = 13;
constexpr int kForbiddenRows = 5;
constexpr int kW007Ports = 1000;
constexpr int kHierarchies = 500;
constexpr int kMaxClassifiers = 20;
constexpr int kRandomWellFormed = 100;
constexpr int kMaxChain = 20;
constexpr int kRepeats = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

oracle::Names names(const InterfaceSet& set) { return {set.begin(), set.end()}; }

bool reports(const CheckReport& report, std::string_view code, std::string_view subject) {
  for (const auto& diagnostic : report.diagnostics) {
    if (diagnostic.code == code && diagnostic.subject == subject) return true;
  }
  return false;
}

std::set<std::string> finding_codes(const CheckReport& report) {
  std::set<std::string> out;
  for (const auto& diagnostic : report.diagnostics) {
    if (diagnostic.severity != Severity::Note) out.insert(diagnostic.code);
  }
  return out;
}

std::string shape_name(EndShape shape) {
  switch (shape) {
    case EndShape::Part:
      return "part";
    case EndShape::PartPort:
      return "partport";
    case EndShape::SelfPort:
      return "selfport";
    case EndShape::Invalid:
      break;
  }
  return "invalid";
}

Outcome delegation_example() {
  const auto start = std::chrono::steady_clock::now();
  const auto model = fixtures::load("delegation.csm");
  const TypeSystem types(model);
  const auto report = check_model(model);
  const auto& a = *model.find_class("A");
  const std::vector<InterfaceSet> expected{{"I"}, {"J", "L"}, {"K"}};
  bool sets_ok = true;
  std::string got;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto transported = types.transported_interfaces(a, a.connectors[i]);
    sets_ok &= transported.computable && transported.interfaces == expected[i];
    got += (i ? " " : "") + to_string(transported.interfaces);
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream detail;
  detail << "transported " << got << ", check " << (report.passed ? "passed" : "failed") << ", " << ms
         << " ms (limit " << kDelegationExampleBudgetMs << " ms)";
  return {sets_ok && report.passed && ms < kDelegationExampleBudgetMs, detail.str()};
}

Outcome classification_table() {
  const auto model = fixtures::load("classification.csm");
  const TypeSystem types(model);
  const auto report = check_model(model);
  const auto& c = *model.find_class("C");
  int matched = 0;
  int forbidden = 0;
  int forbidden_reported = 0;
  for (std::size_t i = 0; i < c.connectors.size(); ++i) {
    const auto& connector = c.connectors[i];
    const auto e1 = types.resolve_end(c, connector.end1);
    const auto e2 = types.resolve_end(c, connector.end2);
    const auto expected = oracle::expected_link_kind(shape_name(e1.shape), e1.is_required_port(),
                                                     shape_name(e2.shape), e2.is_required_port());
    matched += std::string(to_string(types.classify_link(c, connector))) == expected;
    if (expected != "Forbidden") continue;
    ++forbidden;
    const auto path = connector_path(c, i);
    // Two ports of the same direction on parts are W002; anything touching the composite's own port is W001.
    const bool between_parts = e1.shape == EndShape::PartPort && e2.shape == EndShape::PartPort;
    forbidden_reported += reports(report, between_parts ? "W002" : "W001", path);
  }
  std::ostringstream detail;
  detail << matched << "/" << c.connectors.size() << " rows match (want " << kClassificationRows << "), "
         << forbidden_reported << "/" << forbidden << " forbidden rows reported as W001/W002 (want "
         << kForbiddenRows << ")";
  const bool pass = static_cast<int>(c.connectors.size()) == kClassificationRows && matched == kClassificationRows &&
                    forbidden == kForbiddenRows && forbidden_reported == kForbiddenRows;
  return {pass, detail.str()};
}

Outcome mutation_pairs() {
  int good = 0;
  std::string failures;
  for (int code = 0; code <= 11; ++code) {
    const auto number = std::to_string(code);
    const auto padded = std::string(3 - number.size(), '0') + number;
    const auto expected = "W" + padded;
    const auto violation = check_model(fixtures::load("mutations/w" + padded + "_violation.csm"));
    const auto fix = check_model(fixtures::load("mutations/w" + padded + "_fix.csm"));
    const bool ok = finding_codes(violation) == std::set<std::string>{expected} && fix.passed &&
                    finding_codes(fix).empty();
    good += ok;
    if (!ok) failures += " " + expected;
  }
  return {good == 12, std::to_string(good) + "/12 rule pairs exact" + (failures.empty() ? "" : ";" + failures)};
}

Outcome w007_oracle() {
  gen::Rng rng(0x5EED0007);
  int disagreements = 0;
  int overlapping = 0;
  for (int round = 0; round < kW007Ports; ++round) {
    const auto model = synthesize_deleg_associations(gen::port_fan(rng));
    const TypeSystem types(model);
    const oracle::Closures reference(model);
    const auto& hub = *model.find_class("Hub");
    std::vector<oracle::Names> sets;
    for (const auto& connector : hub.connectors) {
      if (!connector.association) sets.push_back(reference.transported_untyped(hub, connector));
    }
    const bool expected = !oracle::pairwise_disjoint(sets);
    bool reported = false;
    for (const auto& diagnostic : rule_pairwise_disjoint(types)) reported |= diagnostic.subject == "Hub.p";
    disagreements += expected != reported;
    overlapping += expected;
  }
  return {disagreements == 0, std::to_string(kW007Ports) + " ports, " + std::to_string(overlapping) +
                                  " overlapping, " + std::to_string(disagreements) + " disagreements"};
}

Outcome closure_oracle() {
  gen::Rng rng(0x5EED0005);
  int disagreements = 0;
  long comparisons = 0;
  for (int round = 0; round < kHierarchies; ++round) {
    const auto model = gen::hierarchy(rng, kMaxClassifiers);
    if (!validate_integrity(model).empty()) return {false, "generator produced an invalid hierarchy"};
    const TypeSystem types(model);
    const oracle::Closures reference(model);
    auto compare = [&](bool same) {
      ++comparisons;
      disagreements += !same;
    };
    for (const auto& iface : model.interfaces) compare(names(types.parents_of(iface.name)) == reference.parents(iface.name));
    for (const auto& cls : model.classes) {
      compare(names(types.parents_of(cls.name)) == reference.parents(cls.name));
      compare(names(types.class_interfaces(cls.name)) == reference.class_interfaces(cls.name));
      for (const auto& port : cls.ports) compare(names(types.port_interfaces(port)) == reference.port_interfaces(port));
    }
  }
  return {disagreements == 0, std::to_string(kHierarchies) + " hierarchies, " + std::to_string(comparisons) +
                                  " comparisons, " + std::to_string(disagreements) + " disagreements"};
}

Outcome routing_safety() {
  std::vector<Model> models{fixtures::load("atm.csm.json"), fixtures::load("delegation.csm")};
  gen::Rng rng(0x5EED0006);
  for (int i = 0; i < kRandomWellFormed; ++i) models.push_back(synthesize_deleg_associations(gen::well_formed(rng)));

  int unsafe = 0;
  int not_clean = 0;
  int undetected_drops = 0;
  long requests = 0;
  for (const auto& model : models) {
    not_clean += !check_model(model).passed;
    const auto graph = instantiate(model, *model.root);
    const auto sim = simulate(model, *model.root, full_injections(graph));
    requests += static_cast<long>(sim.trace.requests.size());
    const oracle::Closures reference(model);
    bool safe = sim.safety.safe && sim.safety.delivered == static_cast<int>(sim.trace.requests.size());
    for (const auto& request : sim.trace.requests) {
      if (request.at == "<env>") continue;
      const auto holder = graph.find_holder(request.at);
      if (!holder || graph.holders()[*holder].kind != HolderKind::Component) {
        safe = false;
        continue;
      }
      const auto& cls = graph.components()[graph.holders()[*holder].index].cls->name;
      safe &= reference.class_interfaces(cls).count(request.interface) != 0;
    }
    unsafe += !safe;

    const auto broken = gen::drop_connector(model, *model.root, 0);
    const auto broken_graph = instantiate(broken, *model.root);
    const auto broken_sim = simulate(broken, *model.root, full_injections(broken_graph));
    undetected_drops += broken_sim.safety.stuck < 1;
  }
  std::ostringstream detail;
  detail << models.size() << " models, " << requests << " requests, " << unsafe << " unsafe, " << not_clean
         << " not rule-clean, " << undetected_drops << " dropped connectors with no stuck request";
  return {unsafe == 0 && not_clean == 0 && undetected_drops == 0, detail.str()};
}

Outcome relay_chains() {
  std::string mismatches;
  for (int k = 1; k <= kMaxChain; ++k) {
    const auto model = synthesize_deleg_associations(gen::relay_chain(k));
    const auto sim = simulate(model, "C0", {{"c0.p", "I", ""}});
    if (static_cast<int>(sim.trace.events.size()) != k || sim.safety.delivered != 1) {
      mismatches += " k=" + std::to_string(k) + ":" + std::to_string(sim.trace.events.size());
    }
  }
  return {mismatches.empty(), "k = 1.." + std::to_string(kMaxChain) + (mismatches.empty() ? ", events == k" : mismatches)};
}

std::string capture(const cli::CliConfig& config) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(config, out, err);
  return std::to_string(code) + "\n" + out.str() + "\n" + err.str();
}

// Separate processes, so address-space layout cannot leak into the output.
std::string capture_process(const std::string& command, const std::string& file) {
  const auto line = std::string(COMPOCHECK_CLI) + " " + command + " --output json '" + file + "' 2>&1";
  std::string out;
  if (FILE* pipe = popen(line.c_str(), "r")) {
    char buffer[4096];
    std::size_t n = 0;
    while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
    out += "\nexit " + std::to_string(pclose(pipe));
  }
  return out;
}

Outcome determinism() {
  std::vector<std::string> files;
  const auto root = std::filesystem::path(fixtures::path(""));
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  int differing = 0;
  int runs = 0;
  for (const auto& file : files) {
    for (auto command : {cli::Command::Check, cli::Command::Simulate}) {
      cli::CliConfig config;
      config.command = command;
      config.input_path = file;
      config.output = cli::OutputFormat::Json;
      const auto first = capture(config);
      for (int i = 1; i < kRepeats; ++i) differing += capture(config) != first;
      runs += kRepeats;
    }
    for (const char* command : {"check", "simulate"}) {
      const auto first = capture_process(command, file);
      for (int i = 1; i < kRepeats; ++i) differing += capture_process(command, file) != first;
      runs += kRepeats;
    }
  }
  return {differing == 0 && !files.empty(), std::to_string(files.size()) + " fixtures, " + std::to_string(runs) +
                                                " runs, " + std::to_string(differing) + " differing outputs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"delegation example transported sets and timing", delegation_example},
      {"link classification table", classification_table},
      {"rule mutation pairs", mutation_pairs},
      {"W007 against pairwise-intersection oracle", w007_oracle},
      {"closure oracle equivalence", closure_oracle},
      {"routing type safety", routing_safety},
      {"linear transit on relay chains", relay_chains},
      {"determinism of reports and traces", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": "
              << outcome.detail << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
