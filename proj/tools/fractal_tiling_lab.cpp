#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/pipeline.hpp"
#include "ftl/scene.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRefused = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 1;

struct Args {
  std::string command;
  std::string scene;
  std::optional<double> delta;
  std::optional<int> eps_per_decade;
  std::string out;
  std::string format = "json";
  std::vector<std::string> methods;
  std::vector<int> ks;
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(8) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void print_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) w[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string cell = c < r.size() ? r[c] : "";
      std::cout << std::left << std::setw(static_cast<int>(w[c])) << cell << (c + 1 < header.size() ? "  " : "");
    }
    std::cout << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto x : w) rule.push_back(std::string(x, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
}

void print_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) std::cout << (c ? "," : "") << csv_field(r[c]);
    std::cout << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void emit(const std::string& format, const json& doc, const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
  if (format == "json")
    std::cout << doc.dump(2) << '\n';
  else if (format == "csv")
    print_csv(header, rows);
  else
    print_table(header, rows);
}

std::vector<std::vector<std::string>> method_table(const std::vector<ftl::MethodRow>& rows, double delta) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    std::vector<std::string> line = {r.method, r.status};
    if (r.result) {
      line.push_back(num(r.result->value));
      line.push_back(num(r.result->error_estimate));
      line.push_back(num(r.result->delta.value_or(delta)));
      line.push_back(r.result->lattice_note);
    } else {
      line.insert(line.end(), {"", "", num(delta), r.reason});
    }
    out.push_back(line);
  }
  return out;
}

const std::vector<std::string> kMethodHeader = {"method", "status", "value", "error", "delta", "note"};

bool any_refused(const std::vector<ftl::MethodRow>& rows) {
  for (const auto& r : rows)
    if (r.status == "refused") return true;
  return false;
}

void write_json(const std::string& dir, const std::string& name, const json& doc) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir + "/" + name) << doc.dump(2) << '\n';
}

int run(const Args& a) {
  if (a.command == "presets") {
    if (!a.scene.empty()) {
      std::cout << ftl::preset_json(a.scene).dump(2) << '\n';
      return kExitOk;
    }
    json doc = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& n : ftl::preset_names()) {
      const auto p = ftl::preset_json(n);
      const std::string desc = p.value("description", std::string());
      doc.push_back({{"name", n}, {"description", desc}});
      rows.push_back({n, desc});
    }
    emit(a.format, doc, {"name", "description"}, rows);
    return kExitOk;
  }

  if (a.scene.empty()) throw ftl::ConfigError("--scene is required for '" + a.command + "'");
  ftl::Scene scene = ftl::load_scene(a.scene);
  ftl::PipelineOptions opt;
  opt.delta = a.delta;
  opt.eps_per_decade = a.eps_per_decade;
  ftl::Pipeline p(scene, opt);
  const std::string out_dir = !a.out.empty() ? a.out : scene.output;

  if (a.command == "dim") {
    const json doc = p.dim_report();
    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, v] : doc.items()) rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    emit(a.format, doc, {"quantity", "value"}, rows);
    if (!out_dir.empty()) write_json(out_dir, "dim.json", doc);
    return kExitOk;
  }

  if (a.command == "content" || a.command == "curvature") {
    std::vector<ftl::MethodRow> rows;
    if (a.command == "content")
      rows = p.contents(!a.methods.empty() ? a.methods : scene.methods);
    else
      rows = p.curvatures(!a.ks.empty() ? a.ks : scene.curvature_k);
    json doc;
    doc["scene"] = scene.name;
    doc["delta"] = p.delta();
    doc["eps_per_decade"] = p.per_decade();
    doc["dimension"] = p.dim_report();
    json jr = json::array();
    for (const auto& r : rows) jr.push_back(ftl::to_json(r));
    doc["rows"] = jr;
    doc["agreement"] = ftl::agreement_flags(rows);
    emit(a.format, doc, kMethodHeader, method_table(rows, p.delta()));
    if (!out_dir.empty()) {
      write_json(out_dir, a.command + ".json", doc);
      p.export_samples(out_dir + "/samples");
    }
    return any_refused(rows) ? kExitRefused : kExitOk;
  }

  if (a.command == "check") {
    const auto reports = p.all_checks();
    json doc;
    doc["scene"] = scene.name;
    doc["delta"] = p.delta();
    json jr = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      jr.push_back(ftl::to_json(r));
      rows.push_back({r.name, ftl::to_string(r.verdict), num(r.delta), r.detail});
    }
    doc["checks"] = jr;
    emit(a.format, doc, {"check", "verdict", "delta", "detail"}, rows);
    if (!out_dir.empty()) write_json(out_dir, "check.json", doc);
    return kExitOk;
  }

  if (a.command == "render") {
    const std::string dir = out_dir.empty() ? "render_" + scene.name : out_dir;
    p.render(dir);
    json doc = p.tiling_report();
    doc["scene"] = scene.name;
    doc["out"] = dir;
    std::vector<std::vector<std::string>> rows;
    for (const auto& [k, v] : doc.items()) rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    emit(a.format, doc, {"quantity", "value"}, rows);
    return kExitOk;
  }

  throw ftl::ConfigError("unknown command '" + a.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minkowski contents and fractal curvatures of self-similar sets and tilings"};
  app.require_subcommand(1, 1);
  Args a;
  for (const char* name : {"dim", "content", "curvature", "check", "render", "presets"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--scene", a.scene, "scene JSON file or preset name");
    sub->add_option("--delta", a.delta, "raster resolution")->check(CLI::PositiveNumber);
    sub->add_option("--eps-per-decade", a.eps_per_decade, "eps samples per decade")->check(CLI::PositiveNumber);
    sub->add_option("--out", a.out, "output directory");
    sub->add_option("--format", a.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
    if (std::string(name) == "content") sub->add_option("--methods", a.methods, "content methods (default: all)");
    if (std::string(name) == "curvature") sub->add_option("--k", a.ks, "curvature indices (default: 0..d-1)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  a.command = app.get_subcommands().front()->get_name();
  try {
    return run(a);
  } catch (const ftl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ftl::ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ftl::PreconditionError& e) {
    std::cerr << "precondition refused (" << e.condition() << "): " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
}
