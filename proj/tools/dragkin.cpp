// dragkin: batch runner for photon kinetics, sweeps, pulse propagation and
// observables. See `dragkin schema` for the configuration format.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dragkin/cli.hpp"

namespace {

using namespace dragkin::cli;

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("failed reading config '" + path + "'");
  return ss.str();
}

void emit(Table const& table, Format format, std::string const& path) {
  std::ostringstream buf;
  if (format == Format::csv) {
    write_csv(table, buf);
  } else {
    write_json(table, buf);
  }
  if (path.empty() || path == "-") {
    std::cout << buf.str();
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output '" + path + "'");
  out << buf.str();
  out.close();
  if (!out) throw IoError("failed writing output '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutual-drag photon kinetics: evolution, sweeps, pulse propagation, observables"};
  app.set_version_flag("--version", std::string("dragkin ") + kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_name;
  unsigned threads = 1;

  for (char const* name : {"evolve", "sweep", "pulse", "doppler", "observables"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " task");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  }
  auto* validate = app.add_subcommand("validate", "check a configuration against the schema");
  validate->add_option("--config", config_path, "JSON run configuration")->required();
  app.add_subcommand("schema", "print the configuration schema, unit conventions and exit codes");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  auto* chosen = app.get_subcommands().front();
  std::string const command = chosen->get_name();
  if (command == "schema") {
    std::cout << export_schema();
    return kOk;
  }

  try {
    auto const doc = parse_json_text(read_file(config_path));
    if (command == "validate") {
      auto const rc = parse_config(doc);
      std::cout << "ok: " << to_string(rc.task) << " config_hash=" << rc.hash << "\n";
      return kOk;
    }
    auto const rc = parse_config(doc, parse_task(command));
    Format format = rc.output.format;
    if (!format_name.empty()) format = format_name == "json" ? Format::json : Format::csv;
    std::string const path = out_path.empty() ? rc.output.path : out_path;
    auto const table = run(rc, threads);
    emit(table, format, path);
    return kOk;
  } catch (ConfigError const& e) {
    std::cerr << "dragkin: " << e.what() << "\n";
    return kConfigError;
  } catch (IoError const& e) {
    std::cerr << "dragkin: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (dragkin::Error const& e) {
    std::cerr << "dragkin: domain error: " << e.what() << "\n";
    return kDomainError;
  }
}
