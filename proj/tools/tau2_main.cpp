#include "tau2loop/runner.hpp"
#include "tau2loop/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

// "0.5", "-1.2", "0.3+0.2i", "0.3-0.2i", "1i"
tau2::Cplx parse_complex(const std::string& s) {
  if (s.empty()) throw CLI::ValidationError("--t", "empty complex literal");
  std::string body = s;
  bool imag_only = false;
  if (body.back() == 'i' || body.back() == 'j') {
    body.pop_back();
    imag_only = true;
  }
  // find a +/- separating real and imaginary parts (not at position 0, not
  // following an exponent marker)
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E')
      split = i;
  }
  try {
    if (!imag_only) return {std::stod(body), 0.0};
    if (split == std::string::npos) return {0.0, body.empty() ? 1.0 : std::stod(body)};
    return {std::stod(body.substr(0, split)), std::stod(body.substr(split))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--t", "cannot parse complex literal \"" + s + "\"");
  }
}

void add_lattice_flags(CLI::App* cmd, tau2::RunConfig& rc) {
  cmd->add_option("--N", rc.n, "states per spin")->check(CLI::Range(2L, 64L));
  cmd->add_option("--L", rc.l, "chain length")->check(CLI::PositiveNumber);
}

std::vector<std::string> t_raw;

void add_run_flags(CLI::App* cmd, tau2::RunConfig& rc) {
  add_lattice_flags(cmd, rc);
  cmd->add_option("--Q", rc.q_list, "Fourier labels (default: all)");
  cmd->add_option("--seed", rc.seed, "PRNG seed for sampled checks");
  cmd->add_option("--samples", rc.samples, "sampled-state count");
  cmd->add_option("--tol", rc.tol, "numeric tolerance");
  cmd->add_option("--t", t_raw, "t sample, e.g. 0.5 or 0.3+0.2i (repeatable)");
  cmd->add_option("--cache-dir", rc.cache_dir, "operator cache directory");
  cmd->add_option("--out", rc.out_path, "output path");
  cmd->add_option("--workers", rc.workers, "worker threads")->check(CLI::PositiveNumber);
}

void finalize_t(tau2::RunConfig& rc) {
  for (const auto& s : t_raw) rc.t_samples.push_back(parse_complex(s));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"superintegrable tau2 operator algebra verifier"};
  app.set_version_flag("--version", tau2::kToolVersion);
  app.require_subcommand(1);

  tau2::RunConfig rc;

  auto* verify = app.add_subcommand("verify", "run verification checks");
  add_run_flags(verify, rc);
  verify->add_option("--check", rc.checks, "check ids to run (default: all)");

  auto* gen = app.add_subcommand("gen", "build and cache operators");
  add_run_flags(gen, rc);

  auto* drinfeld = app.add_subcommand("drinfeld", "print the Lambda table and Drinfeld roots");
  add_run_flags(drinfeld, rc);

  auto* spectrum = app.add_subcommand("spectrum", "emit the eigenvalue multiplicity CSV");
  add_run_flags(spectrum, rc);

  auto* decompose = app.add_subcommand("decompose", "run the sl2 decomposition pipeline");
  add_run_flags(decompose, rc);

  std::string report_path;
  auto* report = app.add_subcommand("report", "pretty-print a stored JSON report");
  report->add_option("path", report_path, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    finalize_t(rc);
    if (verify->parsed()) {
      tau2::Report rep = tau2::run(rc);
      std::cout << rep.pretty();
      for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
      if (!rc.out_path.empty()) std::cout << "report written to " << rc.out_path << "\n";
      return rep.all_ok() ? 0 : 1;
    }
    if (gen->parsed()) {
      for (const auto& name : tau2::gen_operators(rc)) std::cout << name << "\n";
      return 0;
    }
    if (drinfeld->parsed()) {
      tau2::LatticeConfig config(rc.n, rc.l);
      if (!config.loop_compatible()) {
        std::cerr << "L must be a multiple of N\n";
        return 2;
      }
      tau2::DrinfeldData d = tau2::lambda_coefficients(config);
      for (std::size_t i = 0; i < d.lambdas.size(); ++i)
        std::cout << (i ? " " : "") << d.lambdas[i].str();
      std::cout << "\n";
      tau2::RootSet roots = tau2::drinfeld_roots(d, rc.tol);
      std::cout << "roots:";
      for (auto z : roots.roots) std::cout << " (" << z.real() << "," << z.imag() << ")";
      std::cout << "\nseparation " << roots.separation << " residual " << roots.residual
                << "\n";
      return 0;
    }
    if (spectrum->parsed()) {
      std::string csv = tau2::spectrum_csv(rc);
      if (rc.out_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(rc.out_path);
        out << csv;
      }
      return 0;
    }
    if (decompose->parsed()) {
      tau2::Json j = tau2::decompose_summary(rc);
      if (!rc.out_path.empty()) {
        std::ofstream out(rc.out_path);
        out << j.dump(2) << "\n";
      }
      std::cout << j.dump(2) << "\n";
      return j.contains("error") ? 2 : 0;
    }
    if (report->parsed()) {
      std::ifstream in(report_path);
      if (!in) {
        std::cerr << "cannot open " << report_path << "\n";
        return 2;
      }
      tau2::Json j = tau2::Json::parse(in);
      std::cout << "tool " << j.at("tool_version").get<std::string>() << ", schema "
                << j.at("schema").get<int>() << "\n";
      for (const auto& c : j.at("checks")) {
        std::cout << c.at("status").get<std::string>() << "  " << c.at("id").get<std::string>();
        if (c.contains("params")) std::cout << "  " << c.at("params").dump();
        if (c.contains("witness")) std::cout << "\n      " << c.at("witness").dump();
        std::cout << "\n";
      }
      const auto& s = j.at("summary");
      std::cout << "pass " << s.at("pass") << ", fail " << s.at("fail") << ", skip "
                << s.at("skip") << "\n";
      return s.at("fail").get<long>() == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
