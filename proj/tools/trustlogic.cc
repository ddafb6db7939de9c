// Copyright 2026 The trustlogic Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "trustlogic/workspace.h"

#ifndef TRUSTLOGIC_CORPUS_DIR
#define TRUSTLOGIC_CORPUS_DIR "corpus"
#endif

namespace {

using namespace trustlogic;

constexpr int kUsageError = 3;

int Emit(const QueryReport& r, bool as_json) {
  std::cout << (as_json ? ReportToJson(r) + "\n" : RenderReport(r));
  return ExitCode(r.verdict);
}

std::optional<std::vector<std::string>> FromList(const std::string& from) {
  if (from.empty()) return std::nullopt;
  std::vector<std::string> out;
  std::string cur;
  for (char c : from + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

int RunCorpus(const std::string& dir, const QueryOptions& opts) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".tl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no .tl files in " << dir << "\n";
    return kUsageError;
  }
  size_t failed = 0, total = 0;
  for (const fs::path& f : files) {
    Workspace ws = LoadWorkspace(f.string());
    auto results = CheckExpectations(ws, opts);
    size_t bad = 0;
    for (const ExpectationResult& r : results) bad += !r.ok;
    std::cout << (bad ? "FAIL " : "PASS ") << f.filename().string() << " (" << results.size() - bad
              << "/" << results.size() << ")\n";
    for (const ExpectationResult& r : results) {
      if (!r.ok) {
        std::cout << "  line " << r.expectation.line << ": " << r.expectation.text << " -> "
                  << r.detail << "\n";
      }
    }
    failed += bad;
    total += results.size();
  }
  std::cout << (failed ? "FAIL" : "PASS") << " corpus: " << total - failed << "/" << total
            << " expectations\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trustlogic: modal trust logic workbench"};
  app.require_subcommand(1);

  std::string file, formula, from, threshold, dir = TRUSTLOGIC_CORPUS_DIR;
  std::vector<double> probs;
  QueryOptions opts;
  bool as_json = false;

  auto add_query = [&](const std::string& name, const std::string& help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("file", file, "workspace file")->required();
    c->add_option("formula", formula, "goal formula")->required();
    c->add_option("--from", from, "comma-separated assumption names");
    c->add_flag("--json", as_json, "structured output");
    return c;
  };
  CLI::App* prove = add_query("prove", "prove a goal from the workspace assumptions");
  prove->add_option("--budget", opts.budget, "search nodes, 0 for unlimited");
  CLI::App* term = add_query("term", "prove, extract and normalize the proof term");
  term->add_option("--budget", opts.budget, "search nodes, 0 for unlimited");
  CLI::App* cm = add_query("countermodel", "search for a refuting Kripke frame");
  cm->add_option("--worlds", opts.worlds, "largest frame size")->check(CLI::Range(1, 64));

  CLI::App* derive = app.add_subcommand("trust-derive", "saturate the trust graph");
  derive->add_option("file", file, "workspace file")->required();
  derive->add_flag("--verify", opts.verify, "re-prove every derived edge");
  derive->add_option("--budget", opts.budget, "search nodes per obligation");
  derive->add_flag("--json", as_json, "structured output");

  CLI::App* risk = app.add_subcommand("risk", "failure risk of a k-of-n threshold");
  risk->add_option("threshold", threshold, "KofN, e.g. 2of3")->required();
  risk->add_option("probabilities", probs, "per-source failure probabilities")->required();
  risk->add_flag("--json", as_json, "structured output");

  CLI::App* corpus = app.add_subcommand("corpus", "example corpus");
  corpus->require_subcommand(1);
  CLI::App* run = corpus->add_subcommand("run", "check every corpus file's expectations");
  run->add_option("--dir", dir, "corpus directory");
  run->add_option("--budget", opts.budget, "search nodes per prove expectation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    opts.from = FromList(from);
    if (prove->parsed()) return Emit(ProveQuery(LoadWorkspace(file), formula, opts), as_json);
    if (term->parsed()) return Emit(TermQuery(LoadWorkspace(file), formula, opts), as_json);
    if (cm->parsed()) return Emit(CountermodelQuery(LoadWorkspace(file), formula, opts), as_json);
    if (derive->parsed()) return Emit(TrustDeriveQuery(LoadWorkspace(file), opts), as_json);
    if (risk->parsed()) return Emit(RiskQuery(threshold, probs), as_json);
    if (run->parsed()) return RunCorpus(dir, opts);
  } catch (const WorkspaceError& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
