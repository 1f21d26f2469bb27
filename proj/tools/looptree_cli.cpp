// Command-line surface: sampling of the discrete objects, round-trip
// verification, desk-scale invariance batteries, continuum simulation and
// metric-space comparisons. All tabular outputs are CSV with a one-line
// schema header; summaries are JSON. Exit codes: 0 ok, 2 input error,
// 3 property violation.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "looptree/experiments.hpp"

using namespace looptree;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
  uint64_t seed = 1;
  int64_t threads = 1;
  std::string out = ".";
  std::string config;
};

std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadInput, "cannot open config " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// config entries override flags
void apply_config(GlobalOpts& g, std::map<std::string, std::string>& extra) {
  if (g.config.empty()) return;
  auto kv = read_config(g.config);
  for (auto& [key, value] : kv) {
    if (key == "seed") g.seed = std::stoull(value);
    else if (key == "threads") g.threads = std::stoll(value);
    else if (key == "out") g.out = value;
    else extra[key] = value;
  }
}

std::vector<int64_t> parse_int_list(const std::string& s) {
  std::vector<int64_t> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoll(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadInput, "cannot write " + path.string());
  out << content;
}

json stats_json(const DegreeSequence& seq) {
  auto st = seq.stats();
  return json{{"n", st.n},
              {"edges", st.edges},
              {"inner_faces", st.inner},
              {"leaves", st.leaves},
              {"sigma2", st.sigma2},
              {"sigma", std::sqrt(static_cast<double>(st.sigma2))},
              {"rho", seq.rho()}};
}

int cmd_sample(const GlobalOpts& g, const std::string& kind, const std::string& degrees_file) {
  DegreeSequence seq = DegreeSequence::load_file(degrees_file);
  Rng rng(g.seed);
  fs::create_directories(g.out);
  json summary;
  summary["kind"] = kind;
  summary["seed"] = g.seed;
  summary["degrees"] = stats_json(seq);
  std::vector<std::string> checks;

  auto path = sample_excursion(seq, rng);
  checks.push_back("excursion_positive");
  {
    std::ostringstream csv;
    path.export_csv(csv, g.seed, seq.rho());
    write_file(fs::path(g.out) / "path.csv", csv.str());
  }
  if (kind == "forest" || kind == "looptree" || kind == "labelled-looptree" || kind == "map") {
    auto forest = forest_from_path(path);
    auto lt = looptree_from_forest(forest);
    if (luka_of_looptree(lt).values() != path.values())
      throw Error(ErrorKind::MismatchFound, "path round trip failed");
    checks.push_back("path_roundtrip");
    {
      std::ostringstream csv;
      lt.export_edges_csv(csv);
      write_file(fs::path(g.out) / "looptree_edges.csv", csv.str());
      std::ostringstream emb;
      lt.export_embedding(emb);
      write_file(fs::path(g.out) / "looptree_embedding.csv", emb.str());
    }
    if (kind == "labelled-looptree" || kind == "map") {
      auto lab = good_labelling_uniform(lt, rng.next_u64());
      auto z = label_process(lt, lab);
      {
        std::ostringstream csv;
        export_labels_csv(csv, lt, z);
        write_file(fs::path(g.out) / "labels.csv", csv.str());
      }
      checks.push_back("labels_good");
      if (kind == "map") {
        auto m = map_from_labelled_looptree(lt, z);
        auto faces = m.faces();
        if (m.num_vertices() - m.num_edges() + faces.count() != 2)
          throw Error(ErrorKind::MismatchFound, "Euler count failed");
        checks.push_back("euler");
        auto d = bfs_distances(m, m.vstar());
        int64_t zmin = *std::min_element(z.begin(), z.end());
        for (int64_t j = 0; j <= lt.num_edges(); ++j)
          if (d[static_cast<size_t>(lt.corner_vertex(j))] != z[static_cast<size_t>(j)] - zmin + 1)
            throw Error(ErrorKind::MismatchFound, "distance identity failed");
        checks.push_back("distance_identity");
        std::ostringstream ms;
        m.save(ms);
        write_file(fs::path(g.out) / "map.txt", ms.str());
        json face_hist = json::object();
        std::map<int64_t, int64_t> hist;
        for (int64_t deg : faces.degree) hist[deg]++;
        for (auto& [deg, c] : hist) face_hist[std::to_string(deg)] = c;
        summary["face_degree_histogram"] = face_hist;
      }
    }
  } else {
    throw Error(ErrorKind::BadInput, "unknown kind: " + kind);
  }
  summary["checks_passed"] = checks;
  write_file(fs::path(g.out) / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_roundtrip(const GlobalOpts& g, const std::string& degrees_file, int64_t num_seeds) {
  DegreeSequence seq = DegreeSequence::load_file(degrees_file);
  for (int64_t s = 0; s < num_seeds; ++s) {
    Rng rng = Rng::stream(g.seed, static_cast<uint64_t>(s));
    auto path = sample_excursion(seq, rng);
    auto lt = looptree_from_forest(forest_from_path(path));
    if (luka_of_looptree(lt).values() != path.values())
      throw Error(ErrorKind::MismatchFound, "path -> forest -> looptree -> path mismatch");
    auto lab = good_labelling_uniform(lt, rng.next_u64());
    auto z = label_process(lt, lab);
    auto m = map_from_labelled_looptree(lt, z);
    auto back = looptree_from_pointed_map(m);
    if (luka_of_looptree(back.lt).values() != path.values() || back.z != z)
      throw Error(ErrorKind::MismatchFound, "looptree -> map -> looptree mismatch");
  }
  std::cout << "PASS roundtrip: " << num_seeds << " instances\n";
  return 0;
}

int cmd_invariance(const GlobalOpts& g, ExperimentSpec spec) {
  spec.seed = g.seed;
  spec.threads = g.threads;
  spec.out_dir = g.out;
  auto report = run_invariance(spec);
  fs::create_directories(g.out);
  json summary;
  for (const auto& row : report.rows) {
    std::ostringstream csv;
    csv << "replica,label_at_uniform,pair_distance,radius,root_distance,spinal\n";
    for (size_t r = 0; r < row.samples.size(); ++r) {
      const auto& s = row.samples[r];
      csv << r << "," << s.label_at_uniform << "," << s.pair_distance << "," << s.radius << ","
          << s.root_distance << "," << s.spinal << "\n";
    }
    write_file(fs::path(g.out) / ("invariance_n" + std::to_string(row.n) + ".csv"), csv.str());
    summary["sizes"].push_back(json{{"n", row.n},
                                    {"sigma", row.sigma},
                                    {"median_spinal", row.median_spinal},
                                    {"median_radius", row.median_radius}});
  }
  for (const auto& ks : report.ks)
    summary["ks"].push_back(json{{"what", ks.what}, {"statistic", ks.statistic}, {"p", ks.p_value}});
  write_file(fs::path(g.out) / "invariance_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_continuum(const GlobalOpts& g, const ThetaParams& params, int64_t grid, int64_t jmax,
                  double label_a) {
  params.validate();
  Rng rng(g.seed);
  auto bridge = sample_ei_bridge(params, grid, jmax, rng);
  auto x = vervaat_continuum(bridge, rng);
  ContinuumLoopMetric metric(x);
  Rng label_rng(g.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<double> times(static_cast<size_t>(grid) + 1);
  for (int64_t k = 0; k <= grid; ++k)
    times[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(grid);
  auto z = snake_labels(metric, label_a, times, label_rng);

  fs::create_directories(g.out);
  std::ostringstream csv;
  csv << "t,X,C,C_delta_0.2,C_delta_0.05,Z\n";
  for (int64_t k = 0; k <= grid; ++k) {
    double t = times[static_cast<size_t>(k)];
    csv << t << "," << x.eval(t) << "," << metric.c_grid()[static_cast<size_t>(k)] << ","
        << metric.continuous_part(t, 0.2) << "," << metric.continuous_part(t, 0.05) << ","
        << z[static_cast<size_t>(k)] << "\n";
  }
  write_file(fs::path(g.out) / "continuum.csv", csv.str());
  json summary{{"grid", grid},
               {"jmax", jmax},
               {"kept_jumps", x.jumps().size()},
               {"dropped_l2_mass", x.dropped_l2_mass()},
               {"seed", g.seed}};
  write_file(fs::path(g.out) / "continuum_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_mm_ghp(const std::string& file_a, const std::string& file_b, const std::string& strategy) {
  auto a = FiniteMMSpace::load(file_a);
  auto b = FiniteMMSpace::load(file_b);
  GhpStrategy s = strategy == "greedy" ? GhpStrategy::GreedyTransport : GhpStrategy::IndexAligned;
  double eps = ghp_upper(a, b, s);
  json out{{"ghp_upper", eps}, {"strategy", strategy}, {"a_points", a.size()}, {"b_points", b.size()}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation, bijection and verification toolkit for random bipartite maps and looptrees"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global seed");
  app.add_option("--threads", g.threads, "worker threads");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "key=value config file overriding flags");

  auto* sample = app.add_subcommand("sample", "sample a discrete object and export it");
  std::string kind = "map", degrees;
  sample->add_option("--kind", kind, "forest | looptree | labelled-looptree | map");
  sample->add_option("--degrees", degrees, "degree sequence file");

  auto* roundtrip = app.add_subcommand("roundtrip", "verify bijection round trips");
  std::string rt_degrees;
  int64_t rt_seeds = 100;
  roundtrip->add_option("--degrees", rt_degrees, "degree sequence file");
  roundtrip->add_option("--seeds", rt_seeds, "number of seeded instances");

  auto* invariance = app.add_subcommand("invariance", "rescaled statistics along a size ladder");
  std::string family = "quadrangulation", sizes_str = "1000,10000";
  std::string theta0_str, thetas_str;
  double inv_delta = 0.1;
  int64_t replicas = 200;
  invariance->add_option("--family", family, "quadrangulation | theta");
  invariance->add_option("--sizes", sizes_str, "comma separated ladder of n");
  invariance->add_option("--replicas", replicas, "replicas per size");
  invariance->add_option("--delta", inv_delta, "spinal statistic cutoff");
  invariance->add_option("--theta0", theta0_str, "theta0 for the theta family");
  invariance->add_option("--thetas", thetas_str, "comma separated theta list");

  auto* continuum = app.add_subcommand("continuum", "simulate the continuum objects");
  double c_theta0 = 1.0, c_rho = 0.0, c_a = 1.0 / 3.0;
  std::string c_thetas;
  int64_t c_grid = 1 << 12, c_jmax = 64;
  continuum->add_option("--theta0", c_theta0, "Brownian weight");
  continuum->add_option("--thetas", c_thetas, "comma separated jump sizes");
  continuum->add_option("--rho", c_rho, "boundary parameter");
  continuum->add_option("--grid", c_grid, "grid intervals");
  continuum->add_option("--jmax", c_jmax, "jump truncation");
  continuum->add_option("--a", c_a, "label field parameter");

  auto* luka = app.add_subcommand("luka", "path level commands");
  auto* luka_sample = luka->add_subcommand("sample", "sample a first-passage excursion");
  std::string luka_degrees;
  luka_sample->add_option("--degrees", luka_degrees, "degree sequence file");

  auto* labels_cmd = app.add_subcommand("labels", "labelling commands");
  auto* labels_sample = labels_cmd->add_subcommand("sample", "sample a uniform good labelling");
  std::string labels_degrees;
  labels_sample->add_option("--degrees", labels_degrees, "degree sequence file");

  auto* map_cmd = app.add_subcommand("map", "map level commands");
  auto* map_from = map_cmd->add_subcommand("from-looptree", "build the pointed map");
  std::string map_degrees;
  map_from->add_option("--degrees", map_degrees, "degree sequence file");
  auto* map_check = map_cmd->add_subcommand("roundtrip-check", "verify map round trips");
  std::string check_degrees;
  int64_t check_seeds = 100;
  map_check->add_option("--degrees", check_degrees, "degree sequence file");
  map_check->add_option("--seeds", check_seeds, "number of seeded instances");
  auto* map_profile = map_cmd->add_subcommand("profile", "distance profile to the pointed vertex");
  std::string profile_degrees, profile_map;
  map_profile->add_option("--degrees", profile_degrees, "degree sequence file");
  map_profile->add_option("--map", profile_map, "map file (half-edge text format)");

  auto* mm = app.add_subcommand("mm", "metric measure space commands");
  auto* mm_ghp = mm->add_subcommand("ghp", "GHP upper bound between two stored spaces");
  std::string mm_a, mm_b, mm_strategy = "aligned";
  mm_ghp->add_option("--a", mm_a, "first space (binary)")->required();
  mm_ghp->add_option("--b", mm_b, "second space (binary)")->required();
  mm_ghp->add_option("--strategy", mm_strategy, "aligned | greedy");

  try {
    app.parse(argc, argv);
    std::map<std::string, std::string> extra;
    apply_config(g, extra);
    if (extra.count("degrees")) degrees = rt_degrees = luka_degrees = labels_degrees = map_degrees =
                                    check_degrees = profile_degrees = extra["degrees"];
    if (extra.count("kind")) kind = extra["kind"];
    if (extra.count("sizes")) sizes_str = extra["sizes"];
    if (extra.count("replicas")) replicas = std::stoll(extra["replicas"]);
    if (extra.count("delta")) inv_delta = std::stod(extra["delta"]);
    if (extra.count("family")) family = extra["family"];
    if (extra.count("grid")) c_grid = std::stoll(extra["grid"]);
    if (extra.count("jmax")) c_jmax = std::stoll(extra["jmax"]);

    auto need = [](const std::string& value, const char* what) {
      if (value.empty()) throw Error(ErrorKind::BadInput, std::string("missing --") + what);
      return value;
    };

    if (sample->parsed()) return cmd_sample(g, kind, need(degrees, "degrees"));
    if (roundtrip->parsed()) return cmd_roundtrip(g, need(rt_degrees, "degrees"), rt_seeds);
    if (invariance->parsed()) {
      ExperimentSpec spec;
      spec.family = family == "theta" ? ExperimentSpec::Family::Theta
                                      : ExperimentSpec::Family::Quadrangulation;
      if (spec.family == ExperimentSpec::Family::Theta) {
        if (!theta0_str.empty()) spec.theta.theta0 = std::stod(theta0_str);
        if (!thetas_str.empty()) spec.theta.thetas = parse_double_list(thetas_str);
      }
      spec.sizes = parse_int_list(sizes_str);
      spec.replicas = replicas;
      spec.delta = inv_delta;
      return cmd_invariance(g, spec);
    }
    if (continuum->parsed()) {
      ThetaParams params;
      params.theta0 = c_theta0;
      params.rho = c_rho;
      if (!c_thetas.empty()) params.thetas = parse_double_list(c_thetas);
      return cmd_continuum(g, params, c_grid, c_jmax, c_a);
    }
    if (luka_sample->parsed()) {
      DegreeSequence seq = DegreeSequence::load_file(need(luka_degrees, "degrees"));
      Rng rng(g.seed);
      auto path = sample_excursion(seq, rng);
      fs::create_directories(g.out);
      std::ostringstream csv;
      path.export_csv(csv, g.seed, seq.rho());
      write_file(fs::path(g.out) / "path.csv", csv.str());
      std::cout << "wrote path.csv (E_n = " << path.length() << ")\n";
      return 0;
    }
    if (labels_sample->parsed())
      return cmd_sample(g, "labelled-looptree", need(labels_degrees, "degrees"));
    if (map_from->parsed()) return cmd_sample(g, "map", need(map_degrees, "degrees"));
    if (map_check->parsed()) return cmd_roundtrip(g, need(check_degrees, "degrees"), check_seeds);
    if (map_profile->parsed()) {
      BipartiteMap m = [&]() {
        if (!profile_map.empty()) {
          std::ifstream in(profile_map);
          if (!in) throw Error(ErrorKind::BadInput, "cannot open " + profile_map);
          return BipartiteMap::load(in);
        }
        if (profile_degrees.empty()) throw Error(ErrorKind::BadInput, "need --degrees or --map");
        DegreeSequence seq = DegreeSequence::load_file(profile_degrees);
        Rng rng(g.seed);
        auto path = sample_excursion(seq, rng);
        auto lt = looptree_from_forest(forest_from_path(path));
        return map_from_labelled_looptree(lt, good_labelling_uniform(lt, rng.next_u64()));
      }();
      auto ps = profile_stats(m);
      json out{{"radius", ps.radius},
               {"root_distance", ps.root_distance},
               {"root_edge_distance", ps.root_edge_distance}};
      out["histogram"] = ps.histogram;
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (mm_ghp->parsed()) return cmd_mm_ghp(mm_a, mm_b, mm_strategy);
    std::cerr << "no command selected\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::MismatchFound ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
