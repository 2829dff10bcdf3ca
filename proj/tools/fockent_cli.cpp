// Copyright 2026 The fockent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fockent command-line front end.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockent/errors.hpp"
#include "fockent/fock.hpp"
#include "fockent/phase_reference.hpp"
#include "fockent/random_states.hpp"
#include "fockent/sector.hpp"
#include "fockent/state_io.hpp"
#include "fockent/transfer.hpp"
#include "fockent/uncertainty.hpp"

namespace {

using nlohmann::json;
using namespace fockent;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitIo = 4;
constexpr int kExitViolation = 5;

constexpr double kSlackTolerance = 1e-9;

struct GlobalOptions {
  std::string format = "json";
  std::string out;
  std::uint64_t seed = 42;
};

double r12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", r12(x));
  return buf;
}

void round_numbers(json& j) {
  if (j.is_number_float()) {
    j = r12(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& v : j) round_numbers(v);
  }
}

json complex_json(Amplitude z) { return json::array({z.real(), z.imag()}); }

json report(const std::string& command, const GlobalOptions& g, json inputs, json results,
            json tolerances) {
  json r = {{"command", command},
            {"inputs", std::move(inputs)},
            {"seed", g.seed},
            {"results", std::move(results)},
            {"tolerances", std::move(tolerances)}};
  round_numbers(r);
  return r;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json sector_table(const std::vector<SectorEntanglement>& rows) {
  json t = json::array();
  for (const auto& s : rows) t.push_back({{"n", s.n}, {"probability", s.probability}, {"entanglement", s.entanglement}});
  return t;
}

std::string sector_csv(const std::vector<SectorEntanglement>& rows) {
  std::string s = "n,probability,entanglement\n";
  for (const auto& r : rows) s += std::to_string(r.n) + "," + g12(r.probability) + "," + g12(r.entanglement) + "\n";
  return s;
}

json warnings_json(const std::vector<std::string>& w) { return json(w); }

// ---------------------------------------------------------------- ep

struct EpOptions {
  std::string statefile;
};

int cmd_ep(const GlobalOptions& g, const EpOptions& o) {
  const LoadedState loaded = load_state_file(o.statefile);
  std::vector<std::string> warnings;
  if (loaded.warning) warnings.push_back(*loaded.warning);
  const auto rows = sector_entanglements(loaded.state);
  const double ep = particle_entanglement(loaded.state);
  const double e = entropy_of_entanglement(loaded.state);
  if (g.format == "csv") {
    emit(sector_csv(rows), g.out);
  } else {
    emit(dump(report("ep", g, {{"statefile", o.statefile}},
                     {{"particle_entanglement", ep},
                      {"entropy_of_entanglement", e},
                      {"sectors", sector_table(rows)},
                      {"warnings", warnings_json(warnings)}},
                     {{"sector_probability_floor", 1e-14}, {"eigenvalue_clip", kEigenClip}})),
         g.out);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- transfer

struct TransferOptions {
  std::string statefile;
  int M = 32;
  int grid = 0;
  std::string path = "exact";
  int headroom = -1;
};

AncillaSpec default_ancilla(int M) {
  // largest nbar with nbar + 10 sqrt(nbar) <= M
  const double root = std::sqrt(25.0 + M) - 5.0;
  return coherent_coefficients(root * root, M);
}

int cmd_transfer(const GlobalOptions& g, const TransferOptions& o) {
  if (o.M < 1) throw DomainError("--M must be >= 1");
  const LoadedState loaded = load_state_file(o.statefile);
  std::vector<std::string> warnings;
  if (loaded.warning) warnings.push_back(*loaded.warning);

  const AncillaSpec anc = default_ancilla(o.M);
  if (anc.warning()) warnings.push_back(*anc.warning());
  ProtocolConfig config{loaded.state, anc, anc, std::nullopt};
  if (o.headroom >= 0) config.sink_headroom = o.headroom;

  const DensityOperator exact = run_transfer(config);
  json results;
  json inputs = {{"statefile", o.statefile}, {"M", o.M}, {"path", o.path},
                 {"ancilla", {{"kind", "coherent"}, {"mean", anc.mean()}}}};
  if (o.headroom >= 0) inputs["headroom"] = o.headroom;

  const DensityOperator* out = &exact;
  std::optional<DensityOperator> quad;
  if (o.path == "quadrature") {
    const int K = o.grid > 0 ? o.grid : 2 * o.M + 3;
    inputs["grid"] = K;
    quad = phase_grid_register_state(config, K);
    out = &*quad;
    results["trace_distance_to_exact"] = trace_distance(*quad, exact);
    results["distance_bound"] = 3.0 / (o.M + 1);
  }

  std::vector<SectorEntanglement> rows;
  try {
    rows = register_sector_entanglements(*out);
    results["sectors"] = sector_table(rows);
    results["average_entanglement"] = register_sector_entanglement(*out);
  } catch (const DomainError& e) {
    warnings.push_back(std::string("sector entanglement unavailable: ") + e.what());
  }
  try {
    json outcomes = json::array();
    for (const auto& m : equal_different_measurement(*out)) {
      outcomes.push_back({{"outcome", m.label}, {"probability", m.probability}, {"entanglement", m.entanglement}});
    }
    results["equal_different"] = outcomes;
  } catch (const LayoutError&) {
    // only defined for two binary registers per site
  }
  results["register_state"] = density_to_json(*out);
  results["warnings"] = warnings_json(warnings);

  if (g.format == "csv") {
    emit(sector_csv(rows), g.out);
  } else {
    emit(dump(report("transfer", g, inputs, results,
                     {{"validation_trace", 1e-10}, {"validation_hermitian", 1e-12}})),
         g.out);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- measure

struct MeasureOptions {
  double ntr = 100;
  double local_scale = 10;
  int grid = 0;
  double varphi = 0;
};

json visibility_json(const VisibilityReport& r) {
  return {{"C", complex_json(r.C)},
          {"varphi", r.varphi},
          {"vis2_full", r.visibility2},
          {"vis2_model", r.model_visibility2},
          {"ef", r.ef},
          {"ef_oracle", r.ef_oracle},
          {"ef_bound", r.bound},
          {"transported_mean", r.transported_mean},
          {"transported_variance", r.transported_variance},
          {"grid", r.grid}};
}

int cmd_measure(const GlobalOptions& g, const MeasureOptions& o) {
  const VisibilityReport r = coherent_visibility_report(o.ntr, o.local_scale, o.grid, o.varphi);
  if (g.format == "csv") {
    emit("ntr,vis2_full,vis2_model,ef,ef_oracle,ef_bound\n" + g12(o.ntr) + "," + g12(r.visibility2) +
             "," + g12(r.model_visibility2) + "," + g12(r.ef) + "," + g12(r.ef_oracle) + "," +
             g12(r.bound) + "\n",
         g.out);
  } else {
    emit(dump(report("measure", g,
                     {{"ntr", o.ntr}, {"local_scale", o.local_scale}, {"grid", o.grid}, {"varphi", o.varphi}},
                     visibility_json(r), {{"coherent_window_sigmas", 10.0}})),
         g.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::vector<double> ntr_list;
  double local_scale = 10;
};

int cmd_sweep(const GlobalOptions& g, const SweepOptions& o) {
  if (o.ntr_list.empty()) throw DomainError("--ntr-list must not be empty");
  std::vector<VisibilityReport> rows;
  for (double n : o.ntr_list) rows.push_back(coherent_visibility_report(n, o.local_scale));

  bool increasing = true;
  bool below_bound = true;
  json table = json::array();
  std::string csv = "ntr,vis2_full,vis2_model,ef,ef_bound\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i > 0 && !(r.ef > rows[i - 1].ef)) increasing = false;
    if (r.ef > r.bound + 1e-6) below_bound = false;
    table.push_back({{"ntr", o.ntr_list[i]},
                     {"vis2_full", r.visibility2},
                     {"vis2_model", r.model_visibility2},
                     {"ef", r.ef},
                     {"ef_bound", r.bound}});
    csv += g12(o.ntr_list[i]) + "," + g12(r.visibility2) + "," + g12(r.model_visibility2) + "," +
           g12(r.ef) + "," + g12(r.bound) + "\n";
  }
  const json rep = report("sweep", g, {{"ntr_list", o.ntr_list}, {"local_scale", o.local_scale}},
                          {{"rows", table}, {"ef_strictly_increasing", increasing}, {"ef_within_bound", below_bound}},
                          {{"bound_slack", 1e-6}});
  if (g.format == "csv") {
    emit(csv, g.out);
    if (!g.out.empty()) std::cout << dump(rep);
  } else {
    emit(dump(rep), g.out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
  int seeds = 100;
  int s = 256;
  std::vector<double> nbar{25.0, 250.0};
};

int physical_truncation(const PureState& state, int s) {
  int hi = 0;
  for (const auto& [label, amp] : state.amplitudes()) hi = std::max({hi, label[0], label[1]});
  while (hi > s - std::sqrt(static_cast<double>(s))) ++s;
  return s;
}

struct BoundsRow {
  std::string label;
  int s;
  int resampled;
  UncertaintyReport robertson;
  UncertaintyReport visibility;
  double identity_residual;
};

BoundsRow evaluate(std::string label, const PureState& state, int s, int resampled) {
  const UncertaintyOptions opts{s, 0.0};
  BoundsRow row{std::move(label), s, resampled, robertson_checks(state, opts),
                visibility_bound_check(state, opts), 0.0};
  const auto& r = row.robertson;
  row.identity_residual = std::abs(r.var_cos + r.var_sin - (1.0 - r.c2));
  return row;
}

int cmd_bounds(const GlobalOptions& g, const BoundsOptions& o) {
  if (o.nbar.size() != 2) throw DomainError("--nbar takes two values");
  std::vector<BoundsRow> rows;
  std::vector<PureState> states;
  for (int i = 0; i < o.seeds; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(g.seed), static_cast<std::uint32_t>(g.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    auto sample = random_physical_two_mode(rng, o.s, i % 2 == 0);
    rows.push_back(evaluate("random/" + std::to_string(i), sample.state, o.s, sample.resampled));
    states.push_back(std::move(sample.state));
  }
  {
    const int n = std::min(3, o.s / 4);
    PureState number = PureState::basis_state(two_mode_layout(o.s), BasisLabel{n, n + 2});
    rows.push_back(evaluate("number_product", number, o.s, 0));
    states.push_back(std::move(number));
  }
  {
    const double big = std::max(o.nbar[0], o.nbar[1]);
    const AncillaSpec window = coherent_window(big);
    int s = o.s;
    while (window.M() > s - std::sqrt(static_cast<double>(s))) ++s;
    PureState pair = coherent_pair(o.nbar[0], o.nbar[1], s);
    s = physical_truncation(pair, s);
    rows.push_back(evaluate("coherent_pair", pair, s, 0));
    states.push_back(std::move(pair));
  }

  int violations = 0;
  int resampled = 0;
  double max_residual = 0.0;
  json out_rows = json::array();
  json offending = json::array();
  std::string csv = "state,s,inequality,lhs,rhs,slack\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    resampled += row.resampled;
    max_residual = std::max(max_residual, row.identity_residual);
    json slacks = json::object();
    int bad = 0;
    for (const auto* rep : {&row.robertson, &row.visibility}) {
      for (const auto& q : rep->inequalities) {
        slacks[q.name] = q.slack;
        if (q.slack < -kSlackTolerance) ++bad;
        csv += row.label + "," + std::to_string(row.s) + "," + q.name + "," + g12(q.lhs) + "," +
               g12(q.rhs) + "," + g12(q.slack) + "\n";
      }
    }
    violations += bad;
    json entry = {{"state", row.label},
                  {"s", row.s},
                  {"resampled", row.resampled},
                  {"c2", row.robertson.c2},
                  {"mean_sin", row.robertson.mean_sin},
                  {"var_na", row.robertson.var_na},
                  {"var_nb", row.robertson.var_nb},
                  {"product", row.visibility.product},
                  {"slacks", slacks},
                  {"diagnostics", row.visibility.diagnostics}};
    out_rows.push_back(std::move(entry));
    if (bad > 0) offending.push_back({{"state", row.label}, {"serialized", state_to_json(states[k])}});
  }
  const bool pass = violations == 0;
  const json rep = report("bounds", g, {{"seeds", o.seeds}, {"s", o.s}, {"nbar", o.nbar}},
                          {{"states", out_rows},
                           {"summary",
                            {{"states", rows.size()},
                             {"violations", violations},
                             {"resampled", resampled},
                             {"max_identity_residual", max_residual},
                             {"pass", pass}}},
                           {"offending", offending}},
                          {{"slack", kSlackTolerance}, {"physical_tail", 1e-10}});
  emit(g.format == "csv" ? csv : dump(rep), g.out);
  return pass ? kExitOk : kExitViolation;
}

template <typename F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-entanglement and phase-reference calculations"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Write output to this path instead of stdout");
  app.add_option("--seed", g.seed, "Seed for random-state generation");

  EpOptions ep;
  auto* ep_cmd = app.add_subcommand("ep", "Particle entanglement of a state file");
  ep_cmd->add_option("statefile", ep.statefile)->required();

  TransferOptions tr;
  auto* tr_cmd = app.add_subcommand("transfer", "Simulate the entanglement-transfer protocol");
  tr_cmd->add_option("statefile", tr.statefile)->required();
  tr_cmd->add_option("--M", tr.M, "Ancilla truncation");
  tr_cmd->add_option("--grid", tr.grid, "Phase grid size for the quadrature path");
  tr_cmd->add_option("--path", tr.path)->check(CLI::IsMember({"exact", "quadrature"}));
  tr_cmd->add_option("--headroom", tr.headroom, "Sink capacity above M");

  MeasureOptions me;
  auto* me_cmd = app.add_subcommand("measure", "Phase-difference measurement with coherent ancillas");
  me_cmd->add_option("--ntr", me.ntr, "Mean transported particle number");
  me_cmd->add_option("--local-scale", me.local_scale, "Local amplitude mean as a multiple of ntr");
  me_cmd->add_option("--grid", me.grid, "Minimum phase grid size");
  me_cmd->add_option("--varphi", me.varphi, "Measured phase difference");

  SweepOptions sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Visibility and E_F table over transported numbers");
  sw_cmd->add_option("--ntr-list", sw.ntr_list)->delimiter(',')->required();
  sw_cmd->add_option("--local-scale", sw.local_scale);

  BoundsOptions bo;
  auto* bo_cmd = app.add_subcommand("bounds", "Check phase-number uncertainty inequalities");
  bo_cmd->add_option("--seeds", bo.seeds)->check(CLI::NonNegativeNumber);
  bo_cmd->add_option("--s", bo.s)->check(CLI::Range(16, 1 << 14));
  bo_cmd->add_option("--nbar", bo.nbar)->delimiter(',')->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitFailure;
  if (*ep_cmd) code = guarded([&] { return cmd_ep(g, ep); });
  if (*tr_cmd) code = guarded([&] { return cmd_transfer(g, tr); });
  if (*me_cmd) code = guarded([&] { return cmd_measure(g, me); });
  if (*sw_cmd) code = guarded([&] { return cmd_sweep(g, sw); });
  if (*bo_cmd) code = guarded([&] { return cmd_bounds(g, bo); });
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  std::cerr << "wall-time: " << g12(wall.count()) << " s\n";
  return code;
}
