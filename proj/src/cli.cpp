#include "infonet/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "infonet/error.hpp"
#include "infonet/estimators.hpp"
#include "infonet/fisher.hpp"
#include "infonet/json_io.hpp"
#include "infonet/network.hpp"
#include "infonet/simulator.hpp"
#include "infonet/trace.hpp"

#ifndef INFONET_VERSION
#define INFONET_VERSION "0.0.0"
#endif

namespace infonet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 initialisation failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return hex.str();
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

// Files of one command. Written only after all computation succeeded; any
// failure before commit() deletes whatever was already written.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    for (auto it = created_dirs_.rbegin(); it != created_dirs_.rend(); ++it) fs::remove(*it, ec);
  }

  void add(const fs::path& relative, std::string content) { pending_.emplace_back(relative, std::move(content)); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [rel, content] : pending_) out.push_back(rel.generic_string());
    return out;
  }

  void write_all() {
    for (const auto& [rel, content] : pending_) {
      const fs::path target = dir_ / rel;
      make_dirs(target.parent_path());
      std::ofstream f(target, std::ios::binary | std::ios::trunc);
      if (!f) throw Error(ErrorCode::Io, "cannot write " + target.string());
      written_.push_back(target);
      f << content;
      if (!f) throw Error(ErrorCode::Io, "write failed for " + target.string());
    }
  }

  void commit() { committed_ = true; }

 private:
  void make_dirs(const fs::path& dir) {
    if (dir.empty() || fs::exists(dir)) return;
    make_dirs(dir.parent_path());
    fs::create_directory(dir);
    created_dirs_.push_back(dir);
  }

  fs::path dir_;
  std::vector<std::pair<fs::path, std::string>> pending_;
  std::vector<fs::path> written_;
  std::vector<fs::path> created_dirs_;
  bool committed_ = false;
};

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json manifest(const std::string& command, const std::vector<std::string>& args, ordered_json config,
                      const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                      ordered_json seeds) {
  ordered_json digests = ordered_json::array();
  for (const auto& path : inputs) digests.push_back({{"path", path}, {"sha256", file_sha256(path)}});
  ordered_json m;
  m["command"] = command;
  m["argv"] = args;
  m["tool_version"] = INFONET_VERSION;
  m["config"] = std::move(config);
  m["inputs"] = std::move(digests);
  m["outputs"] = outputs;
  m["seeds"] = std::move(seeds);
  m["timestamp"] = utc_timestamp();
  return m;
}

void finish(OutputSet& outputs, const std::string& command, const std::vector<std::string>& args,
            ordered_json config, const std::vector<std::string>& inputs, ordered_json seeds) {
  const std::string manifest_name = command + ".manifest.json";
  auto names = outputs.names();
  outputs.add(manifest_name, dump(manifest(command, args, std::move(config), inputs, names, std::move(seeds))));
  outputs.write_all();
  outputs.commit();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaMismatch, path + ": " + e.what());
  }
}

std::optional<TraceFormat> format_flag(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name == "csv") return TraceFormat::Csv;
  if (name == "jsonl") return TraceFormat::Jsonl;
  throw Error(ErrorCode::InvalidConfig, "--format must be csv or jsonl");
}

struct AnalysisFlags {
  int k = EstimatorConfig{}.history_k;
  double epsilon = SymbolizerConfig{}.stationary_threshold;
  int sectors = SymbolizerConfig{}.sectors;
  std::string direction = "y2x";
  std::string format;

  SymbolizerConfig sym() const {
    SymbolizerConfig c{epsilon, sectors};
    c.validate();
    return c;
  }
  EstimatorConfig est() const {
    EstimatorConfig c{k};
    c.validate();
    return c;
  }
  ordered_json to_json() const {
    return {{"k", k}, {"epsilon", epsilon}, {"sectors", sectors}, {"direction", direction}};
  }
};

void add_analysis_flags(CLI::App* app, AnalysisFlags& f, bool with_k = true) {
  if (with_k) app->add_option("--k", f.k, "history length k (>= 1)");
  app->add_option("--epsilon", f.epsilon, "stationary threshold in meters");
  app->add_option("--sectors", f.sectors, "number of direction sectors");
  app->add_option("--direction", f.direction, "y2x or x2y");
  app->add_option("--format", f.format, "trace format (csv or jsonl); default from extension");
}

std::vector<TEMatrix> matrices_from_traces(const std::vector<std::string>& files, const AnalysisFlags& f) {
  const auto sym = f.sym();
  const auto est = f.est();
  const auto dir = direction_from_string(f.direction);
  const auto fmt = format_flag(f.format);
  std::vector<TEMatrix> out;
  for (const auto& file : files) out.push_back(te_matrix(read_trace_file(file, fmt), sym, est, dir));
  return out;
}

// ---------------------------------------------------------------------------

int cmd_te(const std::vector<std::string>& args, const std::vector<std::string>& files, const AnalysisFlags& f,
           const std::string& out_dir, std::ostream& out) {
  auto matrices = matrices_from_traces(files, f);
  OutputSet outputs(out_dir);
  std::set<std::string> ids;
  for (const auto& m : matrices) {
    if (!ids.insert(m.game_id).second)
      throw Error(ErrorCode::InconsistentGames, "two inputs share the game id '" + m.game_id + "'");
    outputs.add(m.game_id + ".te.json", dump(to_json(m)));
  }
  finish(outputs, "te", args, f.to_json(), files, ordered_json::array());
  out << "wrote " << matrices.size() << " TE matrices to " << out_dir << "\n";
  return kExitOk;
}

int cmd_diagram(const std::vector<std::string>& args, const std::vector<std::string>& files,
                const AnalysisFlags& f, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  std::vector<TEMatrix> matrices;
  std::vector<std::string> traces;
  for (const auto& file : files) {
    if (fs::path(file).extension() == ".json")
      matrices.push_back(matrix_from_json(read_json_file(file)));
    else
      traces.push_back(file);
  }
  if (!matrices.empty() && !traces.empty())
    throw Error(ErrorCode::InconsistentGames, "mix of matrix files and trace files");
  if (!traces.empty()) matrices = matrices_from_traces(traces, f);
  if (matrices.empty()) throw Error(ErrorCode::InconsistentGames, "no games given");
  if (matrices.size() < 3)
    err << "warning: only " << matrices.size() << " game(s); a mode over fewer than 3 games is weak evidence\n";

  const auto diagram = build_diagram(matrices);
  OutputSet outputs(out_dir);
  outputs.add("diagram.json", dump(to_json(diagram)));
  auto config = traces.empty() ? ordered_json{{"direction", std::string(to_string(diagram.direction))}} : f.to_json();
  finish(outputs, "diagram", args, std::move(config), files, ordered_json::array());
  out << "hub: " << diagram.hub << "\n";
  return kExitOk;
}

std::optional<double> parse_theta_dir(const std::string& name) {
  constexpr std::string_view prefix = "theta=";
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  const char* first = name.data() + prefix.size();
  const char* last = name.data() + name.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw Error(ErrorCode::InvalidConfig, "bad sweep directory '" + name + "'");
  return v;
}

int cmd_fisher(const std::vector<std::string>& args, const std::string& sweep_dir, int hub, double beta,
               const std::string& label, const AnalysisFlags& f, const std::string& out_dir, std::ostream& out) {
  if (hub < kFirstAgent || hub > kLastAgent) throw Error(ErrorCode::InvalidConfig, "--hub must be in 2..11");
  if (!fs::is_directory(sweep_dir)) throw Error(ErrorCode::Io, "not a directory: " + sweep_dir);
  const auto sym = f.sym();
  const auto fmt = format_flag(f.format);
  const EntityId hub_id{target_side(direction_from_string(f.direction)), hub};

  std::map<double, fs::path> groups;
  for (const auto& entry : fs::directory_iterator(sweep_dir)) {
    if (!entry.is_directory()) continue;
    if (auto theta = parse_theta_dir(entry.path().filename().string())) {
      if (!groups.emplace(*theta, entry.path()).second)
        throw Error(ErrorCode::InvalidConfig, "two sweep directories share theta " + format_sig12(*theta));
    }
  }
  if (groups.size() < 3)
    throw Error(ErrorCode::GridTooSmall, "need at least 3 theta groups, found " + std::to_string(groups.size()));

  std::map<double, std::vector<SymbolSeries>> sweep;
  std::vector<std::string> inputs;
  for (const auto& [theta, dir] : groups) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && (fmt || trace_format_from_path(entry.path()))) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorCode::EmptyEnsemble, "no trace files in " + dir.string());
    auto& ensemble = sweep[theta];
    for (const auto& file : files) {
      ensemble.push_back(symbolize(increments_of(read_trace_file(file, fmt), hub_id), sym));
      inputs.push_back(file.string());
    }
  }

  auto curve = fisher_curve(sweep, beta, label);
  curve.hub = hub;
  OutputSet outputs(out_dir);
  outputs.add("fisher.json", dump(to_json(curve)));
  outputs.add("fisher.csv", fisher_csv(curve));
  auto config = f.to_json();
  config.erase("k");
  config["hub"] = hub;
  config["beta"] = beta;
  config["label"] = label;
  finish(outputs, "fisher", args, std::move(config), inputs, ordered_json::array());
  out << "theta_star: " << format_sig12(curve.theta_star) << "\n";
  return kExitOk;
}

ordered_json scenario_json(const ScenarioConfig& sc) {
  ordered_json couplings = ordered_json::array();
  for (const auto& c : sc.couplings) couplings.push_back({c.y_agent, c.x_agent, c.strength});
  return {{"couplings", couplings},         {"free_agent_step", sc.free_agent_step},
          {"cycles", sc.cycles},            {"theta", sc.theta},
          {"theta_critical", sc.theta_critical}, {"ball_step", sc.ball_step},
          {"ball_rest", sc.ball_rest},
          {"critical_agent", sc.critical_agent}, {"critical_base", sc.critical_base},
          {"critical_noise", sc.critical_noise}};
}

std::string serialize_trace(const GameTrace& trace, TraceFormat fmt) {
  std::ostringstream s;
  write_trace(s, trace, fmt);
  return s.str();
}

std::string trace_extension(TraceFormat fmt) { return fmt == TraceFormat::Csv ? ".csv" : ".jsonl"; }

int cmd_simulate(const std::vector<std::string>& args, const std::string& config_path,
                 std::optional<std::uint64_t> seed_flag, const std::string& name, const std::string& format,
                 const std::string& out_dir, std::ostream& out) {
  const auto file = read_scenario_file(config_path);
  const auto scenario = scenario_from_file(file);
  const auto seed = seed_flag ? seed_flag : file.seed;
  if (!seed) throw Error(ErrorCode::InvalidConfig, "missing required key 'seed' (or pass --seed)");
  const auto fmt = format_flag(format).value_or(TraceFormat::Csv);

  OutputSet outputs(out_dir);
  outputs.add(name + trace_extension(fmt), serialize_trace(simulate_match(scenario, *seed, name), fmt));
  finish(outputs, "simulate", args, scenario_json(scenario), {config_path}, ordered_json::array({*seed}));
  out << "wrote " << (fs::path(out_dir) / (name + trace_extension(fmt))).string() << "\n";
  return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& args, const std::string& config_path,
              std::optional<std::uint64_t> seed_flag, const std::string& format, const std::string& out_dir,
              std::ostream& out) {
  const auto cfg = sweep_from_file(read_scenario_file(config_path), seed_flag);
  const auto fmt = format_flag(format).value_or(TraceFormat::Csv);

  OutputSet outputs(out_dir);
  ordered_json seeds = ordered_json::array();
  for (std::size_t m = 0; m < cfg.grid.thetas.size(); ++m) {
    const std::string dir = "theta=" + format_sig12(cfg.grid.thetas[m]);
    for (std::size_t g = 0; g < static_cast<std::size_t>(cfg.games_per_theta); ++g) {
      const auto trace = sweep_game(cfg, m, g);
      outputs.add(fs::path(dir) / (trace.game_id() + trace_extension(fmt)), serialize_trace(trace, fmt));
      seeds.push_back({{"theta_index", m}, {"game", g}, {"seed", derive_seed(cfg.seed, m, g)}});
    }
  }
  ordered_json config = scenario_json(cfg.scenario);
  config.erase("theta");
  ordered_json grid = ordered_json::array();
  for (double t : cfg.grid.thetas) grid.push_back(t);
  config["grid"] = grid;
  config["label"] = cfg.grid.label;
  config["games_per_theta"] = cfg.games_per_theta;
  config["seed"] = cfg.seed;
  finish(outputs, "sweep", args, std::move(config), {config_path}, std::move(seeds));
  out << "wrote " << cfg.grid.thetas.size() * static_cast<std::size_t>(cfg.games_per_theta) << " traces to "
      << out_dir << "\n";
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& args, const std::string& diagram_path,
               const std::string& fisher_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const auto diagram = diagram_from_json(read_json_file(diagram_path));
  const auto curve = fisher_from_json(read_json_file(fisher_path));
  if (curve.hub && *curve.hub != diagram.hub)
    err << "warning: Fisher curve was computed for agent " << *curve.hub << " but the diagram hub is "
        << diagram.hub << "\n";

  const auto peak = std::max_element(curve.values.begin(), curve.values.end());
  std::ostringstream s;
  s << "Interaction diagram (" << to_string(diagram.direction) << ", " << diagram.games.size() << " games)\n";
  s << "  hub: " << diagram.hub << (diagram.hub_tiebreak_used ? " (tie-break used)" : "") << "\n";
  s << "  incoming:";
  for (const auto& [j, c] : diagram.incoming) s << " " << j << ":" << c;
  s << "\n  responders:";
  for (const auto& [i, j] : diagram.responder) s << " " << i << "->" << j;
  s << "\nFisher sweep over " << curve.grid.label << " (" << curve.grid.thetas.size() << " points, beta "
    << format_sig12(curve.beta) << ")\n";
  s << "  theta*: " << format_sig12(curve.theta_star) << "\n";
  s << "  peak F: " << format_sig12(*peak) << "\n";

  std::string incoming_csv = "agent,incoming\n";
  for (const auto& [j, c] : diagram.incoming) incoming_csv += std::to_string(j) + "," + std::to_string(c) + "\n";
  std::string responder_csv = "source,responder\n";
  for (const auto& [i, j] : diagram.responder) responder_csv += std::to_string(i) + "," + std::to_string(j) + "\n";

  OutputSet outputs(out_dir);
  outputs.add("summary.txt", s.str());
  outputs.add("incoming.csv", incoming_csv);
  outputs.add("responders.csv", responder_csv);
  outputs.add("fisher_curve.csv", fisher_csv(curve));
  finish(outputs, "report", args, ordered_json::object(), {diagram_path, fisher_path}, ordered_json::array());
  out << s.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interaction networks and Fisher-information parameter selection for multi-agent traces"};
  app.set_version_flag("--version", INFONET_VERSION);
  app.require_subcommand(1);

  AnalysisFlags flags;
  std::vector<std::string> files;
  std::string out_dir = ".";
  std::string config_path, sweep_dir, diagram_path, fisher_path, name = "game", label = "theta";
  std::optional<std::uint64_t> seed;
  int hub = 0;
  double beta = kDefaultBeta;

  auto* te = app.add_subcommand("te", "conditional TE matrix per game");
  te->add_option("traces", files, "trace files")->required();
  add_analysis_flags(te, flags);
  te->add_option("--out", out_dir, "output directory");

  auto* diagram = app.add_subcommand("diagram", "information-base diagram and hub");
  diagram->add_option("inputs", files, "TE matrix JSON files or trace files")->required();
  add_analysis_flags(diagram, flags);
  diagram->add_option("--out", out_dir, "output directory");

  auto* fisher = app.add_subcommand("fisher", "Fisher curve over a theta sweep");
  fisher->add_option("sweep_dir", sweep_dir, "directory of theta=<value> subdirectories")->required();
  fisher->add_option("--hub", hub, "hub agent index (2..11)")->required();
  fisher->add_option("--beta", beta, "additive smoothing constant");
  fisher->add_option("--label", label, "parameter name");
  add_analysis_flags(fisher, flags, false);
  fisher->add_option("--out", out_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "generate one synthetic match");
  simulate->add_option("config", config_path, "scenario file")->required();
  simulate->add_option("--seed", seed, "64-bit seed (overrides the file)");
  simulate->add_option("--name", name, "game id and file stem");
  simulate->add_option("--format", flags.format, "csv or jsonl");
  simulate->add_option("--out", out_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "generate a theta sweep");
  sweep_cmd->add_option("config", config_path, "scenario file with a grid")->required();
  sweep_cmd->add_option("--seed", seed, "64-bit seed (overrides the file)");
  sweep_cmd->add_option("--format", flags.format, "csv or jsonl");
  sweep_cmd->add_option("--out", out_dir, "output directory");

  auto* report = app.add_subcommand("report", "text summary and plot data");
  report->add_option("diagram", diagram_path, "diagram JSON")->required();
  report->add_option("fisher", fisher_path, "Fisher JSON")->required();
  report->add_option("--out", out_dir, "output directory");

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  try {
    if (*te) return cmd_te(args, files, flags, out_dir, out);
    if (*diagram) return cmd_diagram(args, files, flags, out_dir, out, err);
    if (*fisher) return cmd_fisher(args, sweep_dir, hub, beta, label, flags, out_dir, out);
    if (*simulate) return cmd_simulate(args, config_path, seed, name, flags.format, out_dir, out);
    if (*sweep_cmd) return cmd_sweep(args, config_path, seed, flags.format, out_dir, out);
    if (*report) return cmd_report(args, diagram_path, fisher_path, out_dir, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const json::exception& e) {
    err << "error: SchemaMismatch: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace infonet::cli
