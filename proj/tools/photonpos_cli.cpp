// Command-line front end: verification suite, eigenfunction export, packet
// evolution, and frame export.  Exit codes: 0 success, 1 failed checks,
// 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "photonpos/bundle.hpp"
#include "photonpos/dynamics.hpp"
#include "photonpos/operators.hpp"
#include "photonpos/verify.hpp"

using nlohmann::json;
using namespace photonpos;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  GridSpec grid{64, 48, 56, 3.0};
  std::string mode = "analytic";
  double h = 1e-5;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  std::string measure = "bb";
  std::string chart = "south";
  std::string suite = "all";
  int threads = 1;
  int packets = 20;
  int points = 5;
  std::string config_path;
  std::string grid_json;  // inline override, e.g. '{"Nr":32}'
};

void add_common_flags(CLI::App* sub, Options& o) {
  sub->set_help_flag("--help", "print help");  // frees -h for the step flag
  sub->add_option("--config", o.config_path, "JSON config file");
  sub->add_option("--grid", o.grid_json, "grid spec as inline JSON");
  sub->add_option("--mode", o.mode, "analytic|fd|richardson")
      ->check(CLI::IsMember({"analytic", "fd", "richardson"}));
  sub->add_option("--h", o.h, "finite-difference step scale");
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--format", o.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--measure", o.measure, "bb (d3k/|k|) or d3k")
      ->check(CLI::IsMember({"bb", "d3k"}));
  sub->add_option("--chart", o.chart, "south|north")
      ->check(CLI::IsMember({"south", "north"}));
  sub->add_option("--threads", o.threads, "worker cap (results unchanged)");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return j;
}

// File values fill in whatever was not given on the command line.
void apply_config_file(const CLI::App* sub, Options& o) {
  if (o.config_path.empty()) return;
  const json j = load_json_file(o.config_path);
  auto unset = [sub](const std::string& flag) {
    return sub->count(flag) == 0;
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "grid") {
      if (unset("--grid")) o.grid = GridSpec::from_json(value);
    } else if (key == "mode") {
      if (unset("--mode")) o.mode = value.get<std::string>();
    } else if (key == "h") {
      if (unset("--h")) o.h = value.get<double>();
    } else if (key == "seed") {
      if (unset("--seed")) o.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      if (unset("--out")) o.out = value.get<std::string>();
    } else if (key == "format") {
      if (unset("--format")) o.format = value.get<std::string>();
    } else if (key == "measure") {
      if (unset("--measure")) o.measure = value.get<std::string>();
    } else if (key == "chart") {
      if (unset("--chart")) o.chart = value.get<std::string>();
    } else if (key == "suite") {
      o.suite = value.get<std::string>();
    } else if (key == "threads") {
      if (unset("--threads")) o.threads = value.get<int>();
    } else if (key == "packets") {
      o.packets = value.get<int>();
    } else if (key == "points") {
      o.points = value.get<int>();
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
}

void finalize(const CLI::App* sub, Options& o) {
  apply_config_file(sub, o);
  if (!o.grid_json.empty()) {
    try {
      o.grid = GridSpec::from_json(json::parse(o.grid_json));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad --grid JSON: ") + e.what());
    }
  }
}

DiffEngine engine_of(const Options& o) {
  if (o.mode == "analytic") return DiffEngine::analytic();
  if (o.mode == "fd") return DiffEngine::central(o.h);
  return DiffEngine::richardson(o.h);
}

FrameField frame_of(const Options& o) {
  return o.chart == "north" ? FrameField::north() : FrameField::south();
}

void write_output(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + o.out);
  f << text;
}

int cmd_verify(const Options& o) {
  VerifyConfig vc;
  vc.grid = o.grid;
  vc.engine = engine_of(o);
  vc.measure = (o.measure == "d3k") ? Measure::D3K : Measure::BB;
  vc.seed = o.seed;
  vc.packets = o.packets;
  vc.points_per_packet = o.points;
  const FrameField ff = frame_of(o);

  std::vector<CheckReport> reports;
  if (o.suite == "axiom" || o.suite == "all") {
    auto r = run_axiom_suite(ff, vc);
    reports.insert(reports.end(), r.begin(), r.end());
  }
  if (o.suite == "gauge" || o.suite == "all") {
    auto r = run_gauge_suite(ff, vc);
    reports.insert(reports.end(), r.begin(), r.end());
  }
  if (reports.empty()) throw ConfigError("unknown suite '" + o.suite + "'");
  std::sort(reports.begin(), reports.end(),
            [](const CheckReport& a, const CheckReport& b) {
              return a.id < b.id;
            });
  write_output(o, report_json(reports).dump(2) + "\n");
  return all_pass(reports) ? 0 : 1;
}

struct EigenArgs {
  std::vector<double> x{0.0, 0.0, 0.0};
  int helicity = 1;
  std::string rep = "c2-cartesian";
};

int cmd_eigen(const Options& o, const EigenArgs& a) {
  if (a.x.size() != 3) throw ConfigError("--x needs three components");
  if (a.helicity != 1 && a.helicity != -1)
    throw ConfigError("--helicity must be 1 or -1");
  const Vec3 X(a.x[0], a.x[1], a.x[2]);
  const QuadratureGrid grid(o.grid);

  std::ostringstream csv;
  int skipped = 0;
  if (a.rep == "c2-cartesian" || a.rep == "c2-polarization") {
    const Basis2 basis = (a.rep == "c2-cartesian") ? Basis2::Cartesian
                                                   : Basis2::Polarization;
    const Section2 f = eigenfunction_c2(X, a.helicity, basis);
    csv << "k1,k2,k3,re_f1,im_f1,re_f2,im_f2\n";
    for (const Vec3& k : grid.nodes()) {
      const CVec2 v = f.eval(k);
      csv << num(k[0]) << ',' << num(k[1]) << ',' << num(k[2]) << ','
          << num(v[0].real()) << ',' << num(v[0].imag()) << ','
          << num(v[1].real()) << ',' << num(v[1].imag()) << '\n';
    }
  } else if (a.rep == "field3-south" || a.rep == "field3-north") {
    const FrameField ff = (a.rep == "field3-south") ? FrameField::south()
                                                    : FrameField::north();
    const WaveField3 psi = eigenfunction_field3(X, a.helicity, ff);
    csv << "k1,k2,k3,re1,im1,re2,im2,re3,im3\n";
    for (const Vec3& k : grid.nodes()) {
      CVec3 v;
      try {
        v = psi.eval(k);
      } catch (const DomainError&) {
        ++skipped;
        continue;
      }
      csv << num(k[0]) << ',' << num(k[1]) << ',' << num(k[2]);
      for (int i = 0; i < 3; ++i)
        csv << ',' << num(v[i].real()) << ',' << num(v[i].imag());
      csv << '\n';
    }
  } else {
    throw ConfigError("unknown rep '" + a.rep + "'");
  }
  if (skipped > 0)
    std::cerr << "warning: skipped " << skipped
              << " grid points on the excluded ray\n";
  write_output(o, csv.str());
  return 0;
}

struct PacketSpec {
  Vec3 K0{0.0, 0.0, -3.0};
  double s = 0.3;
  int helicity = 1;
  Vec3 X0 = Vec3::Zero();
};

PacketSpec packet_from_json(const json& j) {
  PacketSpec p;
  for (const auto& [key, value] : j.items()) {
    if (key == "K0" || key == "X0") {
      if (!value.is_array() || value.size() != 3)
        throw ConfigError("packet: '" + key + "' must be a 3-array");
      Vec3& target = (key == "K0") ? p.K0 : p.X0;
      for (int i = 0; i < 3; ++i) target[i] = value.at(i).get<double>();
    } else if (key == "s") {
      p.s = value.get<double>();
    } else if (key == "helicity") {
      p.helicity = value.get<int>();
    } else {
      throw ConfigError("packet: unknown key '" + key + "'");
    }
  }
  return p;
}

int cmd_evolve(const Options& o, const std::string& packet_path,
               const std::vector<double>& times, double c) {
  PacketSpec p;
  if (!packet_path.empty()) p = packet_from_json(load_json_file(packet_path));
  const FrameField ff = frame_of(o);
  WaveField3 psi;
  try {
    psi = gaussian_packet(p.K0, p.s, p.helicity, ff, p.X0);
  } catch (const Error& e) {
    throw ConfigError(std::string("packet: ") + e.what());
  }
  const QuadratureGrid grid(o.grid);
  const DiffEngine d = engine_of(o);
  const Vec3 v = expectation_direction(psi, grid) * c;

  std::ostringstream csv;
  csv << "t,X1,X2,X3,V1,V2,V3\n";
  for (const double t : times) {
    const Vec3 x = expectation_position(ff, evolve(psi, t, c), grid, d);
    csv << num(t);
    for (int i = 0; i < 3; ++i) csv << ',' << num(x[i]);
    for (int i = 0; i < 3; ++i) csv << ',' << num(v[i]);
    csv << '\n';
  }
  write_output(o, csv.str());
  return 0;
}

int cmd_export_frame(const Options& o, const std::vector<double>& kflat) {
  const FrameField ff = frame_of(o);
  if (!kflat.empty()) {
    if (kflat.size() != 3) throw ConfigError("--k needs three components");
    const Vec3 k(kflat[0], kflat[1], kflat[2]);
    write_output(o, frame_to_json(ff.frame(k), k).dump(2) + "\n");
    return 0;
  }
  const QuadratureGrid grid(o.grid);
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "k1,k2,k3,E11,E21,E31,E12,E22,E32,E13,E23,E33\n";
    int skipped = 0;
    for (const Vec3& k : grid.nodes()) {
      if (!ff.contains(k)) {
        ++skipped;
        continue;
      }
      const Mat3 E = ff.E(k);
      csv << num(k[0]) << ',' << num(k[1]) << ',' << num(k[2]);
      for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) csv << ',' << num(E(r, c));
      csv << '\n';
    }
    if (skipped > 0)
      std::cerr << "warning: skipped " << skipped
                << " grid points on the excluded ray\n";
    write_output(o, csv.str());
    return 0;
  }
  json arr = json::array();
  for (const Vec3& k : grid.nodes()) {
    if (!ff.contains(k)) continue;
    arr.push_back(frame_to_json(ff.frame(k), k));
  }
  write_output(o, arr.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photon position operator toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  Options vo, eo, wo, fo;
  EigenArgs ea;
  std::vector<double> times{0.0};
  double light_speed = 1.0;
  std::string packet_path;
  std::vector<double> kpoint;

  CLI::App* verify = app.add_subcommand("verify", "run the identity suite");
  add_common_flags(verify, vo);
  verify->add_option("--suite", vo.suite, "axiom|gauge|all")
      ->check(CLI::IsMember({"axiom", "gauge", "all"}));
  verify->add_option("--packets", vo.packets, "random packets per check");
  verify->add_option("--points", vo.points, "evaluation points per packet");

  CLI::App* eigen = app.add_subcommand("eigen", "export an eigenfunction");
  add_common_flags(eigen, eo);
  eigen->add_option("--x", ea.x, "position eigenvalue (3 components)")
      ->expected(3);
  eigen->add_option("--helicity", ea.helicity, "+1 or -1");
  eigen->add_option(
      "--rep", ea.rep,
      "field3-south|field3-north|c2-cartesian|c2-polarization");

  CLI::App* evolve = app.add_subcommand("evolve", "evolve a Gaussian packet");
  add_common_flags(evolve, wo);
  evolve->add_option("--t", times, "sample times")->expected(-1);
  evolve->add_option("--c", light_speed, "speed of light");
  evolve->add_option("--packet", packet_path, "packet spec JSON file");

  CLI::App* expf = app.add_subcommand("export-frame", "export frame triads");
  add_common_flags(expf, fo);
  expf->add_option("--k", kpoint, "single wavevector (3 components)")
      ->expected(3);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      finalize(verify, vo);
      return cmd_verify(vo);
    }
    if (eigen->parsed()) {
      finalize(eigen, eo);
      return cmd_eigen(eo, ea);
    }
    if (evolve->parsed()) {
      finalize(evolve, wo);
      return cmd_evolve(wo, packet_path, times, light_speed);
    }
    finalize(expf, fo);
    return cmd_export_frame(fo, kpoint);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
