#include <iostream>

#include <CLI11.hpp>

#include "zifazah/cli.hpp"
#include "zifazah/http_server.hpp"

int main(int argc, char** argv) {
  using namespace zifazah;
  CLI::App app{"zifazah: fiber-tract visualization scripts"};
  app.require_subcommand(1);

  RunOptions run;
  std::string synthetic, view;
  auto* run_cmd = app.add_subcommand("run", "execute a script and export the scene");
  run_cmd->add_option("script", run.script_path, "script file")->required();
  auto* data_opt = run_cmd->add_option("--data", "ZFZ model used for every LOAD");
  run_cmd->add_option("--synthetic", synthetic, "synthetic model <seed>,<n> used for every LOAD")->excludes(data_opt);
  run_cmd->add_option("--view", view, "view direction x,y,z");
  run_cmd->add_option("--export", "write the scene document here");
  run_cmd->add_flag("--meshes", run.meshes, "include tessellated meshes in the export");

  std::vector<std::string> check_paths;
  auto* check_cmd = app.add_subcommand("check", "parse scripts and report diagnostics");
  check_cmd->add_option("scripts", check_paths, "script files")->required();

  std::uint64_t seed = 1;
  int n = 10;
  std::string out_path;
  auto* gen_cmd = app.add_subcommand("generate", "write a synthetic ZFZ model");
  gen_cmd->add_option("--seed", seed, "generator seed");
  gen_cmd->add_option("--n", n, "fibers per bundle");
  gen_cmd->add_option("--out", out_path, "output path")->required();

  int port = port_from_env();
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "run the session service");
  serve_cmd->add_option("--port", port, "listen port (default from ZIFAZAH_PORT, else 8080)");
  serve_cmd->add_option("--host", host, "listen address");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    if (const auto* o = run_cmd->get_option("--data"); o->count()) run.data_path = o->as<std::string>();
    if (const auto* o = run_cmd->get_option("--export"); o->count()) run.export_path = o->as<std::string>();
    if (!synthetic.empty()) {
      run.synthetic = parse_synthetic_spec(synthetic);
      if (!run.synthetic) {
        std::cerr << "error: --synthetic expects <seed>,<n> with n >= 1\n";
        return 2;
      }
    }
    if (!view.empty()) {
      const auto v = detail::parse_vector(view);
      if (!v || !is_finite(*v) || !(norm(*v) > 0)) {
        std::cerr << "error: --view expects a non-zero vector x,y,z\n";
        return 2;
      }
      run.view = ViewSpec::toward(*v);
    }
    return cli_run(run, std::cout, std::cerr);
  }
  if (*check_cmd) return cli_check(check_paths, std::cout);
  if (*gen_cmd) return cli_generate(seed, n, out_path, std::cerr);

  ServiceApi api;
  httplib::Server server;
  bind_routes(server, api);
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}
