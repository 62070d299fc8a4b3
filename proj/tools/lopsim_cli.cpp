/**
 * Copyright 2026 The lopsim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <string>

#include "lopsim/error_analysis.hpp"

namespace {

using namespace lopsim;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitIo = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt10(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string fmt_complex(complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g%+.10gi", z.real(), z.imag());
  return buf;
}

complex parse_complex(const std::string& text) {
  std::size_t comma = text.find(',');
  try {
    if (comma == std::string::npos) return complex{std::stod(text), 0.0};
    return complex{std::stod(text.substr(0, comma)),
                   std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("cannot parse complex number '" + text + "' (want re[,im])");
  }
}

Encoding parse_encoding(const std::string& name) {
  if (name == "pol") return Encoding::Polarization;
  if (name == "klm") return Encoding::DualRailKlm;
  throw UsageError("unknown encoding '" + name + "' (want pol or klm)");
}

InputQubit make_qubit(complex alpha, complex beta) {
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-6)
    throw UsageError("|alpha|^2 + |beta|^2 must equal 1");
  const double norm = std::sqrt(norm2);
  return InputQubit(alpha / norm, beta / norm);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output path '" + path + "'");
  return out;
}

void write_table(const std::string& path, const std::string& format,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_output(path);
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json rec = json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) rec[columns[i]] = row[i];
      arr.push_back(rec);
    }
    out << arr.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::string render_key(const OccupationKey& key) {
  std::string s = "|";
  for (std::size_t m = 0; m < key.size(); ++m) {
    if (m) s += ",";
    if (key[m].total() == 0) s += "-";
    s.append(std::size_t(key[m].h), 'H');
    s.append(std::size_t(key[m].v), 'V');
  }
  return s + ">";
}

// ---------------------------------------------------------------------------
// teleport
// ---------------------------------------------------------------------------

int cmd_teleport(Encoding enc, int n, const DetectorModel& detector,
                 const InputQubit& q, const std::string& format,
                 const std::string& out_path, double prune_eps,
                 std::uint64_t mc_samples, std::uint64_t seed) {
  const TeleportResult result = teleport(q, n, enc, detector, prune_eps);

  struct Agg {
    double p = 0.0;
    double min_fidelity = 1.0;
  };
  std::map<std::tuple<TeleportStatus, int, int>, Agg> groups;
  double p_status[4] = {0, 0, 0, 0};
  double min_success_fidelity = 1.0;
  for (const auto& b : result.branches) {
    Agg& g = groups[{b.status, b.selected_mode, b.correction_exponent}];
    g.p += b.probability;
    if (b.status == TeleportStatus::Success) {
      const double f = fidelity(
          b.output_state, teleport_success_reference(q, n, b.selected_mode, enc));
      g.min_fidelity = std::min(g.min_fidelity, f);
      min_success_fidelity = std::min(min_success_fidelity, f);
    }
    p_status[int(b.status)] += b.probability;
  }

  std::cout << "teleport encoding=" << encoding_name(enc) << " n=" << n
            << " eta=" << fmt10(detector.eta) << " dark=" << fmt10(detector.dark_mean)
            << " alpha=" << fmt_complex(q.alpha) << " beta=" << fmt_complex(q.beta)
            << "\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& [key, g] : groups) {
    const auto [status, k, m] = key;
    const bool success = status == TeleportStatus::Success;
    std::cout << "branch status=" << teleport_status_name(status) << " k=" << k
              << " m=" << m << " p=" << fmt10(g.p)
              << " fidelity=" << (success ? fmt10(g.min_fidelity) : "-") << "\n";
    rows.push_back({teleport_status_name(status), std::to_string(k),
                    std::to_string(m), fmt10(g.p),
                    success ? fmt10(g.min_fidelity) : ""});
  }
  std::cout << "p_success " << fmt10(p_status[int(TeleportStatus::Success)]) << "\n"
            << "p_failure_all_v " << fmt10(p_status[int(TeleportStatus::FailureAllV)])
            << "\n"
            << "p_failure_all_h " << fmt10(p_status[int(TeleportStatus::FailureAllH)])
            << "\n"
            << "p_loss_detected " << fmt10(p_status[int(TeleportStatus::LossDetected)])
            << "\n"
            << "min_success_fidelity " << fmt10(min_success_fidelity) << "\n"
            << "truncation_bound " << fmt10(result.truncation_bound) << "\n";

  if (mc_samples > 0) {
    const MonteCarloReport mc = monte_carlo_check(q, n, enc, detector, mc_samples, seed);
    std::cout << "mc_samples " << mc.samples << " seed " << mc.seed << "\n"
              << "mc_p_f " << fmt10(mc.p_f_estimate) << " exact " << fmt10(mc.p_f_exact)
              << " sigma " << fmt10(mc.p_f_sigma) << "\n"
              << "mc_p_nde " << fmt10(mc.p_nde_estimate) << " exact "
              << fmt10(mc.p_nde_exact) << " sigma " << fmt10(mc.p_nde_sigma) << "\n";
  }

  if (!out_path.empty())
    write_table(out_path, format, {"status", "k", "m", "probability", "fidelity"},
                rows);
  if (result.truncation_bound > kMaxTruncationBound) throw PrecisionError(result.truncation_bound);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// csign
// ---------------------------------------------------------------------------

int cmd_csign(Encoding enc, int n, const DetectorModel& detector,
              const InputQubit& qa, const InputQubit& qb, bool minimal,
              bool number_resolving, const std::string& format,
              const std::string& out_path, double prune_eps) {
  const FockState input =
      enc == Encoding::Polarization
          ? tensor(polarization_qubit_state(qa), polarization_qubit_state(qb))
          : tensor(single_rail_qubit_state(qa), single_rail_qubit_state(qb));

  std::vector<CsignBranch> branches;
  if (minimal) {
    if (enc != Encoding::Polarization)
      throw UsageError("the minimal csign setup uses the polarization encoding");
    branches = csign_minimal(input, build_t_prime_n(1, enc), detector,
                             number_resolving, prune_eps);
    n = 1;
  } else {
    branches = csign(input, n, enc, detector, prune_eps);
  }

  auto reference = [&](const CsignBranch& b) {
    FockState s{std::size_t(2 * n)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        OccupationKey key(std::size_t(2 * n), ModeOcc{});
        auto fill = [&](int base, int k, int bit) {
          for (int m = 0; m < n; ++m) {
            auto& occ = key[std::size_t(base + m)];
            if (m == k - 1) {
              if (enc == Encoding::Polarization)
                occ = bit == 0 ? ModeOcc{1, 0} : ModeOcc{0, 1};
              else if (bit == 1)
                occ = ModeOcc{1, 0};
            } else if (enc == Encoding::Polarization) {
              occ = m < k - 1 ? ModeOcc{1, 0} : ModeOcc{0, 1};
            } else if (m >= k) {
              occ = ModeOcc{1, 0};
            }
          }
        };
        fill(0, b.k_a, i);
        fill(n, b.k_b, j);
        s.add_term(key, (i == 0 ? qa.alpha : qa.beta) * (j == 0 ? qb.alpha : qb.beta) *
                            ((i == 1 && j == 1) ? -1.0 : 1.0));
      }
    s.prune();
    return s;
  };

  double p_success = 0.0, min_fidelity = 1.0, p_total = 0.0;
  std::vector<std::vector<std::string>> rows;
  for (const auto& b : branches) {
    p_total += b.probability;
    std::string fid = "";
    if (b.success()) {
      const double f = fidelity(b.output_state, reference(b));
      p_success += b.probability;
      min_fidelity = std::min(min_fidelity, f);
      fid = fmt10(f);
    }
    rows.push_back({teleport_status_name(b.status_a), teleport_status_name(b.status_b),
                    std::to_string(b.k_a), std::to_string(b.k_b),
                    std::to_string(b.exponent_a), std::to_string(b.exponent_b),
                    fmt10(b.probability), fid});
  }
  std::cout << "csign encoding=" << encoding_name(enc) << " n=" << n
            << (minimal ? " setup=minimal" : " setup=double-teleport")
            << " number_resolving=" << (number_resolving ? 1 : 0) << "\n"
            << "p_success " << fmt10(p_success) << "\n"
            << "p_total " << fmt10(p_total) << "\n"
            << "min_success_fidelity " << fmt10(min_fidelity) << "\n";
  if (!out_path.empty())
    write_table(out_path, format,
                {"status_a", "status_b", "k_a", "k_b", "m_a", "m_b", "probability",
                 "fidelity"},
                rows);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prep
// ---------------------------------------------------------------------------

int cmd_prep(const std::string& chain, const DetectorModel& detector,
             bool dump_amplitudes, const std::string& format,
             const std::string& out_path) {
  double probability = 0.0, min_fidelity = 1.0;
  FockState state{0};

  if (chain == "tprime1_klm") {
    const PreparedState p = build_t_prime_1_klm_via_ns();
    probability = p.success_probability;
    min_fidelity = fidelity(p.state, build_t_prime_n(1, Encoding::DualRailKlm));
    state = p.state.normalized();
  } else if (chain == "tprime1_pol") {
    const PreparedState p = build_t_prime_1_polarization();
    probability = p.success_probability;
    min_fidelity = fidelity(p.state, build_t_prime_n(1, Encoding::Polarization));
    state = p.state.normalized();
  } else if (chain == "bell_to_ghz") {
    const auto branches = bell_to_ghz(bell_pair_phi_plus(), bell_pair_phi_plus(), detector);
    const FockState target = ghz_state();
    bool have = false;
    for (const auto& b : branches) {
      if (b.status != FusionStatus::Success) continue;
      probability += b.probability;
      min_fidelity = std::min(min_fidelity, fidelity(b.corrected_state, target));
      if (!have) {
        state = b.corrected_state;
        have = true;
      }
    }
  } else if (chain == "ghz_to_cluster") {
    const auto branches = ghz_to_cluster(ghz_state(), ghz_state(), detector);
    const FockState target = build_t_prime_n(1, Encoding::Polarization);
    bool have = false;
    for (const auto& b : branches) {
      if (b.status != FusionStatus::Success) continue;
      probability += b.probability;
      min_fidelity = std::min(min_fidelity, fidelity(b.corrected_state, target));
      if (!have) {
        state = b.corrected_state;
        have = true;
      }
    }
  } else {
    throw UsageError("unknown chain '" + chain +
                     "' (want tprime1_klm, tprime1_pol, bell_to_ghz, ghz_to_cluster)");
  }

  std::cout << "prep chain=" << chain << "\n"
            << "success_probability " << fmt10(probability) << "\n"
            << "fidelity " << fmt10(min_fidelity) << "\n";
  if (dump_amplitudes) {
    for (const auto& [key, amp] : state.sorted_terms()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " %.12f %.12f", amp.real(), amp.imag());
      std::cout << "amp " << render_key(key) << buf << "\n";
    }
  }
  if (!out_path.empty())
    write_table(out_path, format, {"chain", "success_probability", "fidelity"},
                {{chain, fmt10(probability), fmt10(min_fidelity)}});
  return kExitOk;
}

// ---------------------------------------------------------------------------
// error-analysis
// ---------------------------------------------------------------------------

int cmd_error_analysis(const std::vector<Encoding>& encodings,
                       const std::vector<int>& ns, const std::vector<double>& etas,
                       const std::vector<double>& darks, const InputQubit& q,
                       const std::string& format, const std::string& out_path,
                       bool plot_data, double prune_eps) {
  SweepGrid grid{encodings, ns, etas, darks};
  const std::vector<ErrorReport> reports = sweep(grid, q, prune_eps);

  const std::vector<std::string> columns{"encoding", "n",     "eta",  "dark",
                                         "p_success", "p_f",  "p_nde", "p_e",
                                         "trunc_bound", "alpha", "beta"};
  std::vector<std::vector<std::string>> rows;
  for (const ErrorReport& r : reports)
    rows.push_back({encoding_name(r.encoding), std::to_string(r.n), fmt10(r.eta),
                    fmt10(r.dark_mean), fmt10(r.p_success), fmt10(r.p_f),
                    fmt10(r.p_nde), fmt10(r.p_e), fmt10(r.truncation_bound),
                    fmt_complex(r.input.alpha), fmt_complex(r.input.beta)});

  if (!out_path.empty()) {
    write_table(out_path, format, columns, rows);
  } else {
    for (std::size_t i = 0; i < columns.size(); ++i)
      std::cout << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        std::cout << row[i] << (i + 1 < row.size() ? "," : "\n");
  }

  if (plot_data) {
    const std::filesystem::path dir =
        out_path.empty() ? std::filesystem::path(".")
                         : std::filesystem::path(out_path).parent_path();
    const double eta = etas.front(), dark = darks.front();
    auto point = [&](Encoding enc, int n) {
      return analyze_teleport(q, n, enc, DetectorModel{eta, dark}, prune_eps);
    };
    {
      std::ofstream f = open_output((dir / "fig2.dat").string());
      f << "# n p_f p_e (klm, eta=" << fmt10(eta) << ", dark=" << fmt10(dark) << ")\n";
      for (int n : ns) {
        const ErrorReport r = point(Encoding::DualRailKlm, n);
        f << n << " " << fmt10(r.p_f) << " " << fmt10(r.p_e) << "\n";
      }
    }
    {
      std::ofstream f = open_output((dir / "fig3.dat").string());
      f << "# n p_f_klm p_f_pol (eta=" << fmt10(eta) << ", dark=" << fmt10(dark)
        << ")\n";
      for (int n : ns) {
        f << n << " " << fmt10(point(Encoding::DualRailKlm, n).p_f) << " "
          << fmt10(point(Encoding::Polarization, n).p_f) << "\n";
      }
    }
    {
      std::ofstream f = open_output((dir / "fig4.dat").string());
      f << "# n p_e_pol p_e_klm (eta=" << fmt10(eta) << ", dark=" << fmt10(dark)
        << ")\n";
      for (int n : ns) {
        f << n << " " << fmt10(point(Encoding::Polarization, n).p_e) << " "
          << fmt10(point(Encoding::DualRailKlm, n).p_e) << "\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact linear-optics teleportation and gate simulator"};
  app.require_subcommand(1);

  std::string encoding_name_opt = "pol";
  int n = 1;
  double eta = 1.0, dark = 0.0;
  bool ideal = false;
  std::string alpha_text = "0.7071067811865476";
  std::string beta_text = "0.7071067811865476";
  std::string format = "csv", out_path;
  double prune_eps = 1e-16;
  std::uint64_t seed = 1, mc_samples = 0;

  std::string config_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--encoding", encoding_name_opt, "qubit encoding: pol or klm");
    cmd->add_option("--n", n, "ancilla size parameter n");
    cmd->add_option("--eta", eta, "detector quantum efficiency");
    cmd->add_option("--dark", dark, "detector dark-count mean per gate window");
    cmd->add_flag("--ideal", ideal, "shortcut for --eta 1 --dark 0");
    cmd->add_option("--alpha", alpha_text, "input amplitude alpha as re[,im]");
    cmd->add_option("--beta", beta_text, "input amplitude beta as re[,im]");
    cmd->add_option("--format", format, "output format: csv or json");
    cmd->add_option("--out", out_path, "output file path");
    cmd->add_option("--prune-eps", prune_eps, "joint probability pruning threshold");
    cmd->add_option("--seed", seed, "RNG seed (Monte-Carlo cross-check mode)");
    cmd->add_option("--mc-samples", mc_samples,
                    "Monte-Carlo cross-check sample count (0 = exact only)");
  };

  CLI::App* c_teleport = app.add_subcommand("teleport", "run one teleportation");
  add_common(c_teleport);

  CLI::App* c_csign = app.add_subcommand("csign", "run the CSIGN gate");
  bool minimal = false, non_resolving = false;
  std::string alpha2_text = "1", beta2_text = "0";
  add_common(c_csign);
  c_csign->add_flag("--minimal", minimal, "use the minimal four-photon setup");
  c_csign->add_flag("--non-resolving", non_resolving,
                    "classify with non-number-resolving detectors (minimal setup)");
  c_csign->add_option("--alpha2", alpha2_text, "second qubit amplitude alpha");
  c_csign->add_option("--beta2", beta2_text, "second qubit amplitude beta");

  CLI::App* c_prep = app.add_subcommand("prep", "run a state-preparation chain");
  std::string chain = "tprime1_pol";
  bool dump_amplitudes = false;
  add_common(c_prep);
  c_prep->add_option("--chain", chain,
                     "tprime1_klm | tprime1_pol | bell_to_ghz | ghz_to_cluster");
  c_prep->add_flag("--dump-amplitudes", dump_amplitudes,
                   "print sorted amplitudes of the prepared state");

  CLI::App* c_err = app.add_subcommand("error-analysis", "sweep detector errors");
  std::string enc_grid = "both";
  std::vector<int> n_grid{2, 3, 4};
  std::vector<double> eta_grid{0.8};
  std::vector<double> dark_grid{1e-7};
  bool plot_data = false;
  add_common(c_err);
  c_err->add_option("--encodings", enc_grid, "pol, klm or both");
  c_err->add_option("--n-grid", n_grid, "list of n values");
  c_err->add_option("--eta-grid", eta_grid, "list of efficiencies");
  c_err->add_option("--dark-grid", dark_grid, "list of dark-count means");
  c_err->add_flag("--plot-data", plot_data,
                  "also write fig2.dat/fig3.dat/fig4.dat plot files");

  // Flat key=value config support with flags > config > defaults precedence:
  // config entries are appended as options unless the flag is already given.
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string cfg_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size())
        cfg_file = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0)
        cfg_file = args[i].substr(9);
    }
    if (!cfg_file.empty()) {
      std::ifstream in(cfg_file);
      if (!in) throw UsageError("cannot read config file '" + cfg_file + "'");
      auto given = [&](const std::string& opt) {
        for (const std::string& a : args)
          if (a == opt || a.rfind(opt + "=", 0) == 0) return true;
        return false;
      };
      std::string line;
      while (std::getline(in, line)) {
        const std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        const std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
          throw UsageError("bad config line (want key=value): " + line);
        const std::string key =
            line.substr(start, line.find_last_not_of(" \t", eq - 1) + 1 - start);
        std::string value = line.substr(eq + 1);
        const std::size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos
                    ? ""
                    : value.substr(vs, value.find_last_not_of(" \t\r") + 1 - vs);
        const std::string opt = "--" + key;
        if (given(opt)) continue;
        if (value == "true") {
          args.push_back(opt);
        } else if (value == "false") {
          // flag left at its default
        } else {
          args.push_back(opt);
          std::istringstream vs_stream(value);
          std::string token;
          while (vs_stream >> token) args.push_back(token);
        }
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(int(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ideal) {
      eta = 1.0;
      dark = 0.0;
    }
    if (eta < 0.0 || eta > 1.0) throw UsageError("--eta must be in [0,1]");
    if (dark < 0.0) throw UsageError("--dark must be >= 0");
    if (n < 1) throw UsageError("--n must be >= 1");
    if (format != "csv" && format != "json")
      throw UsageError("--format must be csv or json");
    const DetectorModel detector{eta, dark};
    const InputQubit q = make_qubit(parse_complex(alpha_text), parse_complex(beta_text));

    if (c_teleport->parsed())
      return cmd_teleport(parse_encoding(encoding_name_opt), n, detector, q, format,
                          out_path, prune_eps, mc_samples, seed);
    if (c_csign->parsed()) {
      const InputQubit qb =
          make_qubit(parse_complex(alpha2_text), parse_complex(beta2_text));
      return cmd_csign(parse_encoding(encoding_name_opt), n, detector, q, qb, minimal,
                       !non_resolving, format, out_path, prune_eps);
    }
    if (c_prep->parsed())
      return cmd_prep(chain, detector, dump_amplitudes, format, out_path);
    if (c_err->parsed()) {
      std::vector<Encoding> encodings;
      if (enc_grid == "both")
        encodings = {Encoding::DualRailKlm, Encoding::Polarization};
      else
        encodings = {parse_encoding(enc_grid)};
      for (int nn : n_grid)
        if (nn < 1) throw UsageError("--n-grid entries must be >= 1");
      for (double e : eta_grid)
        if (e < 0.0 || e > 1.0) throw UsageError("--eta-grid entries must be in [0,1]");
      for (double d : dark_grid)
        if (d < 0.0) throw UsageError("--dark-grid entries must be >= 0");
      return cmd_error_analysis(encodings, n_grid, eta_grid, dark_grid, q, format,
                                out_path, plot_data, prune_eps);
    }
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << " (bound " << fmt10(e.truncation_bound)
              << ")\n";
    return kExitPrecision;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}
