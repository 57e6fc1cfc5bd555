// fibnim: Grundy tables, position analysis, verification sweeps and the game
// service for Fibonacci nim.

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>

#include "fibnim/cli.hpp"
#include "fibnim/http.hpp"
#include "fibnim/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int serve(fibnim::Tokens horizon, fibnim::Tokens ceiling, const std::string& host, int port, std::size_t capacity,
          const std::string& snapshot) {
  std::shared_ptr<const fibnim::GrundyTable> table;
  try {
    table = std::make_shared<const fibnim::GrundyTable>(fibnim::build_table(horizon, {.ceiling = ceiling}));
  } catch (const fibnim::CeilingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  fibnim::Service service(table, {.capacity = capacity});
  if (!snapshot.empty()) service.load_snapshot(snapshot);

  httplib::Server server;
  fibnim::mount(server, service);
  const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  std::cout << "listening on http://" << host << ':' << bound << " (table_horizon " << horizon << ")" << std::endl;

  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen_after_bind();
  g_server = nullptr;

  if (!snapshot.empty()) service.save_snapshot(snapshot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fibnim::cli;

  CLI::App app{"Fibonacci nim: exact Grundy values, analysis and play"};
  app.require_subcommand(1);

  std::optional<fibnim::Tokens> max_n;
  std::string format = "pretty";
  std::string out_path;
  fibnim::Tokens ceiling = fibnim::TableOptions{}.ceiling;
  const std::map<std::string, OutputFormat> formats{
      {"pretty", OutputFormat::pretty}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--max-n", max_n, "table horizon (overrides FIBNIM_MAX_N)");
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"pretty", "csv", "json"}));
    cmd->add_option("--out", out_path, "write output to PATH instead of stdout");
    cmd->add_option("--ceiling", ceiling, "refuse tables larger than this");
  };

  auto* table_cmd = app.add_subcommand("table", "print Grundy values G(n, r) for n <= max-n");
  add_common(table_cmd);

  std::string heaps;
  auto* analyze_cmd = app.add_subcommand("analyze", "analyze a heap list such as 12,7:6 (exit 0 = N, 2 = P)");
  analyze_cmd->add_option("heaps", heaps, "comma-separated tokens[:cap] items")->required();
  add_common(analyze_cmd);

  VerifySelection sel;
  auto* verify_cmd = app.add_subcommand("verify", "sweep the known results against the exact table");
  verify_cmd->add_flag("--small-values", sel.small_values, "classification of values 0-3");
  verify_cmd->add_flag("--growth", sel.growth, "growth laws of starting positions, h and j");
  verify_cmd->add_flag("--lemma", sel.lemma, "smallest-part lemma for n - k");
  verify_cmd->add_flag("--strategy", sel.strategy, "removing z_1(n) wins from every non-Fibonacci start");
  add_common(verify_cmd);

  int port = 8080;
  std::string host = "127.0.0.1";
  std::size_t capacity = fibnim::ServiceConfig{}.capacity;
  std::string snapshot;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP game service");
  serve_cmd->add_option("--port", port, "port to listen on (0 = ephemeral)");
  serve_cmd->add_option("--host", host, "address to bind");
  serve_cmd->add_option("--max-n", max_n, "largest heap the service accepts (overrides FIBNIM_MAX_N)");
  serve_cmd->add_option("--capacity", capacity, "maximum live sessions");
  serve_cmd->add_option("--snapshot", snapshot, "load sessions from PATH at start, save on shutdown");
  serve_cmd->add_option("--ceiling", ceiling, "refuse tables larger than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CliConfig cfg;
  cfg.format = formats.at(format);
  cfg.ceiling = ceiling;
  try {
    cfg.max_n = resolve_horizon(max_n, serve_cmd->parsed() ? kServeDefaultHorizon : fibnim::kDefaultHorizon);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  if (serve_cmd->parsed()) return serve(cfg.max_n, cfg.ceiling, host, port, capacity, snapshot);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "error: cannot open " << out_path << '\n';
      return 1;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  if (table_cmd->parsed()) return cmd_table(cfg, out, std::cerr);
  if (analyze_cmd->parsed()) return cmd_analyze(cfg, heaps, out, std::cerr);
  return cmd_verify(cfg, sel, out, std::cerr);
}
