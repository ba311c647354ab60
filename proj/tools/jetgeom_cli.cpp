// jetgeom: verify curvature identities, conformal transformation laws and
// generalized quasi-Einstein structure on user metrics at sampled points.

#include "jetgeom/curvature.hpp"
#include "jetgeom/verify.hpp"
#include "jetgeom/zoo.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

namespace {

using json = nlohmann::ordered_json;

json tensor_to_json(const jetgeom::TensorValue& t) {
  // nested arrays in slot order
  std::function<json(std::size_t, std::size_t, int)> build =
      [&](std::size_t offset, std::size_t stride, int depth) -> json {
    json arr = json::array();
    if (depth == t.rank() - 1) {
      for (int i = 0; i < t.dim(); ++i)
        arr.push_back(t.data()[offset + std::size_t(i)]);
      return arr;
    }
    std::size_t sub = stride / std::size_t(t.dim());
    for (int i = 0; i < t.dim(); ++i)
      arr.push_back(build(offset + std::size_t(i) * sub, sub, depth + 1));
    return arr;
  };
  if (t.rank() == 0) return t.data()[0];
  return build(0, t.size(), 0);
}

std::vector<double> parse_point(const std::string& text, int dim) {
  std::vector<double> p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    p.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (int(p.size()) != dim)
    throw std::invalid_argument("point has " + std::to_string(p.size()) +
                                " coordinates, chart needs " +
                                std::to_string(dim));
  return p;
}

int cmd_verify(const std::string& config_path, const std::string& instance,
               const std::vector<std::string>& suites, int samples, long seed,
               const std::string& out) {
  jetgeom::RunConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config " << config_path << "\n";
      return 2;
    }
    json j;
    try {
      in >> j;
    } catch (const std::exception& err) {
      std::cerr << "error: config parse failure: " << err.what() << "\n";
      return 2;
    }
    config = jetgeom::RunConfig::from_json(j);
  }
  if (!instance.empty()) config.instance = instance;
  if (!suites.empty()) config.suites = suites;
  if (samples > 0) config.samples = samples;
  if (seed >= 0) config.seed = std::uint64_t(seed);
  if (!out.empty()) config.out_path = out;

  jetgeom::VerificationReport rep = jetgeom::run(config);

  for (const auto& s : rep.suites) {
    if (s.skipped) {
      std::printf("SKIP  %-24s %s\n", s.name.c_str(), s.skip_reason.c_str());
      continue;
    }
    for (const auto& id : s.identities) {
      const char* verdict = id.expected_failure
                                ? (id.pass ? "XFAIL" : "XPASS")
                                : (id.pass ? "PASS " : "FAIL ");
      std::printf("%s %-22s %-36s max %.3e tol %.3e%s%s\n", verdict,
                  s.name.c_str(), id.name.c_str(), id.max_residual,
                  id.tolerance, id.note.empty() ? "" : "  # ",
                  id.note.c_str());
    }
  }
  std::printf("%s %s (dim %d, %d samples, seed %llu)\n",
              rep.passed() ? "OK" : "FAILED", rep.instance_name.c_str(),
              rep.dim, rep.samples, (unsigned long long)rep.seed);
  if (!config.out_path.empty())
    std::printf("report written to %s\n", config.out_path.c_str());
  return rep.passed() ? 0 : 1;
}

int cmd_curvature(const std::string& instance, const std::string& point_text) {
  jetgeom::ZooInstance z = jetgeom::instance_by_key(instance);
  std::vector<double> p = parse_point(point_text, z.metric.dim());
  jetgeom::CurvaturePack pk = jetgeom::curvature_pack(z.metric.jet(p));

  json out;
  out["instance"] = z.name;
  out["point"] = p;
  out["metric"] = tensor_to_json(pk.jet.metric_tensor());
  out["metric_inverse"] = tensor_to_json(pk.jet.inverse_tensor());
  out["christoffel"] = tensor_to_json(pk.gamma);
  out["riemann"] = tensor_to_json(pk.riemann);
  out["ricci"] = tensor_to_json(pk.ricci);
  out["scalar"] = pk.scalar;
  if (pk.n >= 3) {
    out["weyl"] = tensor_to_json(pk.weyl);
    out["schouten"] = tensor_to_json(pk.schouten);
    out["cotton"] = tensor_to_json(pk.cotton);
  }
  if (pk.n >= 4) out["div_weyl"] = tensor_to_json(pk.div_weyl);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-based curvature verifier for generalized "
               "quasi-Einstein structures"};
  app.require_subcommand(1);

  std::string config_path, instance, out, point_text;
  std::vector<std::string> suites;
  int samples = -1;
  long seed = -1;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--config", config_path, "JSON config file");
  verify->add_option("--instance", instance, "zoo instance key");
  verify->add_option("--suite", suites,
                     "suite name (repeatable): curvature-identities, "
                     "conformal-laws, gqe, splitting, all");
  verify->add_option("--samples", samples, "sample point count");
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--out", out, "report output path");

  CLI::App* list = app.add_subcommand("list-instances", "print the zoo catalog");

  CLI::App* curv = app.add_subcommand(
      "curvature", "print the curvature pack at a point as JSON");
  curv->add_option("--instance", instance, "zoo instance key")->required();
  curv->add_option("--point", point_text, "comma-separated coordinates")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed())
      return cmd_verify(config_path, instance, suites, samples, seed, out);
    if (list->parsed()) {
      for (const auto& [key, desc] : jetgeom::instance_catalog())
        std::printf("%-22s %s\n", key.c_str(), desc.c_str());
      return 0;
    }
    if (curv->parsed()) return cmd_curvature(instance, point_text);
  } catch (const jetgeom::ParseError& err) {
    std::cerr << "expression error: " << err.what() << "\n";
    return 2;
  } catch (const jetgeom::DomainError& err) {
    std::cerr << "domain error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
