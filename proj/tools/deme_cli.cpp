// deme: operator tool for a deliberation deployment.
//
//   deme serve --addr 127.0.0.1:8080 --data-dir ./data
//   deme add-member --name "Alice"
//   deme import-doc --file charter.txt --title "Charter" --author mem-000001
//   deme export --out backup.deme
//   deme import --in backup.deme
//
// --data-dir defaults to $DEME_DATA_DIR. On success each command prints a
// single value on stdout; diagnostics go to stderr; exit status is 0 or 1.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "deme/api.hpp"
#include "deme/error.hpp"
#include "deme/service.hpp"
#include "deme/utf8.hpp"

namespace {

deme::api::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

std::pair<std::string, int> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("address must be host:port, got '" + addr + "'");
  const auto host = addr.substr(0, colon);
  const int port = std::stoi(addr.substr(colon + 1));
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range in '" + addr + "'");
  return {host.empty() ? "0.0.0.0" : host, port};
}

int serve(const std::string& data_dir, const std::string& addr) {
  deme::Service service(data_dir);
  deme::api::Server server(service);
  const auto [host, port] = split_addr(addr);
  const auto bound = server.bind(host, port);
  if (!bound) {
    std::cerr << "deme: cannot bind " << addr << "\n";
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << host << ":" << *bound << std::endl;
  std::cerr << "deme: serving " << data_dir << " (" << service.store().last_seq() << " events) on " << host << ":"
            << *bound << "\n";
  server.listen();
  g_server = nullptr;
  return 0;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  auto text = buf.str();
  if (!deme::utf8::is_valid(text)) {
    throw deme::Error(deme::ErrorCode::InvalidEncoding, "encoding error: " + path + " is not valid UTF-8");
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document-centered deliberation server and operator tool"};
  app.require_subcommand(1);

  std::string data_dir;
  if (const char* env = std::getenv("DEME_DATA_DIR")) data_dir = env;
  auto add_data_dir = [&](CLI::App* cmd) {
    auto* opt = cmd->add_option("--data-dir", data_dir, "Data directory (default: $DEME_DATA_DIR)");
    if (data_dir.empty()) opt->required();
  };

  std::string addr = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API");
  serve_cmd->add_option("--addr", addr, "Listen address host:port (port 0 picks one)");
  add_data_dir(serve_cmd);

  std::string name;
  auto* member_cmd = app.add_subcommand("add-member", "Register a member; prints the member id");
  member_cmd->add_option("--name", name, "Display name")->required();
  add_data_dir(member_cmd);

  std::string file, title, author;
  auto* doc_cmd = app.add_subcommand("import-doc", "Create a document from a UTF-8 text file; prints its id");
  doc_cmd->add_option("--file", file, "Text file")->required();
  doc_cmd->add_option("--title", title, "Document title")->required();
  doc_cmd->add_option("--author", author, "Author member id")->required();
  add_data_dir(doc_cmd);

  std::string out_path;
  auto* export_cmd = app.add_subcommand("export", "Write an archive of the whole deployment");
  export_cmd->add_option("--out", out_path, "Archive path")->required();
  add_data_dir(export_cmd);

  std::string in_path;
  auto* import_cmd = app.add_subcommand("import", "Load an archive into an empty data directory");
  import_cmd->add_option("--in", in_path, "Archive path")->required();
  add_data_dir(import_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*serve_cmd) return serve(data_dir, addr);
    if (*member_cmd) {
      deme::Service service(data_dir);
      std::cout << service.add_member(name) << "\n";
    } else if (*doc_cmd) {
      const auto body = read_text_file(file);
      deme::Service service(data_dir);
      std::cout << service.create_document(title, body, author) << "\n";
    } else if (*export_cmd) {
      deme::Service service(data_dir);
      service.export_archive(out_path);
      std::cout << out_path << "\n";
    } else if (*import_cmd) {
      deme::Service service(data_dir);
      service.import_archive(in_path);
      std::cout << service.store().last_seq() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "deme: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
