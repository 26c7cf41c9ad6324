#include "brepforge/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "brepforge/config.hpp"
#include "brepforge/dataset.hpp"
#include "brepforge/error.hpp"
#include "brepforge/mltasks.hpp"
#include "brepforge/pipeline.hpp"

namespace brepforge::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Stream ids for the per-file generators of `points` and `defect`; the seed
// half mixes the user seed with the building id.
constexpr std::uint64_t kPointsStream = 0x706f696e7473;  // "points"
constexpr std::uint64_t kDefectStream = 0x646566656374;  // "defect"

struct ConfigOpts {
  std::string file;
  std::vector<std::string> sets;
};

void add_config_opts(CLI::App* app, ConfigOpts& o) {
  app->add_option("--config", o.file, "key = value configuration file");
  app->add_option("--set", o.sets, "override one key, e.g. --set filter.min_room_area=9 (repeatable)");
}

config::GenConfig load_config(const ConfigOpts& o, const std::optional<fs::path>& base = std::nullopt) {
  config::GenConfig cfg;
  if (base && fs::exists(*base)) config::apply(cfg, config::parse_pairs(dataset::read_file(*base)));
  std::map<std::string, std::string> pairs;
  if (!o.file.empty()) pairs = config::parse_pairs(dataset::read_file(o.file));
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::Config, "--set expects key=value, got '" + s + "'");
    pairs[s.substr(0, eq)] = s.substr(eq + 1);
  }
  config::apply(cfg, pairs);
  cfg.validate();
  return cfg;
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(0..n-1) on `jobs` threads. The first failure by index is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create directory " + dir.string());
}

std::vector<fs::path> brep_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 10 && name.ends_with(".brep.json")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string raw(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- gen

struct GenOpts {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 0;
  ConfigOpts cfg;
};

int cmd_gen(const GenOpts& o, std::ostream& out, std::ostream& err) {
  if (o.seed > UINT64_MAX - (o.count - 1)) throw Error(ErrorKind::Config, "seed range overflows");
  const config::GenConfig cfg = load_config(o.cfg);
  const fs::path dir = o.out;
  ensure_dir(dir);

  struct Outcome {
    std::optional<BuildingMeta> meta;
    std::optional<dataset::Discard> discard;
  };
  std::vector<Outcome> results(o.count);
  parallel_for(o.count, resolve_jobs(o.jobs), [&](std::size_t i) {
    pipeline::Sample s = pipeline::produce(o.seed + i, cfg);
    if (s.building) {
      dataset::export_building(*s.building, dir, cfg.write_obj);
      results[i].meta = std::move(s.building->meta);
    } else {
      results[i].discard = *s.discard;
    }
  });

  dataset::DatasetMeta ds;
  std::map<std::string, int> by_reason;
  for (Outcome& r : results) {
    if (r.meta) {
      ds.records.push_back(std::move(*r.meta));
    } else {
      ds.discard_log.push_back(*r.discard);
      ++by_reason[dataset::to_string(r.discard->reason)];
    }
  }
  dataset::write_file(dir / "meta.json", dataset::dataset_meta_json(ds));
  dataset::write_file(dir / "discards.csv", dataset::discards_csv(ds));
  dataset::write_file(dir / "config.txt", config::canonical_text(cfg));
  if (ds.records.empty()) {
    err << "warning: every sample was discarded; meta.npy not written\n";
  } else {
    dataset::write_meta_npy(ds, dir / "meta.npy");
  }

  std::string command = "brepforge gen --count " + std::to_string(o.count) + " --seed " + std::to_string(o.seed);
  for (const std::string& s : o.cfg.sets) command += " --set " + s;
  json manifest;
  manifest["tool"] = "brepforge";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["config_hash"] = config::config_hash(cfg);
  manifest["seeds"] = {{"first", o.seed}, {"last", o.seed + o.count - 1}};
  manifest["counts"] = {{"generated", o.count}, {"exported", ds.records.size()}, {"discarded", ds.discard_log.size()}};
  json reasons = json::object();
  for (const auto& [k, v] : by_reason) reasons[k] = v;
  manifest["discards_by_reason"] = reasons;
  dataset::write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  out << "generated " << o.count << ", exported " << ds.records.size() << ", discarded " << ds.discard_log.size()
      << " -> " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct DirOpts {
  std::string dir;
  ConfigOpts cfg;
};

std::string check_pattern(const BuildingMeta& m) {
  int total = 0;
  for (int k = 0; k < kMaxStoreys; ++k) {
    const int want = k < m.storey_count ? m.storey_count - k : 0;
    if (m.room_per_floor[k] != want) return "room_per_floor breaks the descending pattern";
    total += want;
  }
  if (m.room_total != total) return "room_total is not the triangular number of storey_count";
  return {};
}

int cmd_validate(const DirOpts& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.dir;
  const auto files = brep_files(dir);
  if (files.empty()) {
    err << "warning: no .brep.json files in " << dir.string() << "\n";
    return kExitOk;
  }
  const config::GenConfig cfg = load_config(o.cfg, dir / "config.txt");
  std::size_t failed = 0;
  for (const fs::path& f : files) {
    std::vector<std::string> problems;
    try {
      const dataset::BrepFile b = dataset::parse_brep_json(dataset::read_file(f));
      if (const auto s = dataset::check_solid(b.solid); !s.ok) problems.push_back(s.diagnostic);
      if (b.solid.label != brep::Label::Good) problems.push_back("labelled DEFECT");
      const fs::path meta_path = dir / (mltasks::id_of(f.string()) + ".meta.json");
      if (fs::exists(meta_path)) {
        const BuildingMeta m = dataset::parse_meta_json(dataset::read_file(meta_path));
        for (const auto& v : dataset::check_rooms(m, cfg.filter).violations)
          problems.push_back("storey " + std::to_string(v.storey) + " room " + std::to_string(v.room) + ": " + v.reason);
        if (const std::string p = check_pattern(m); !p.empty()) problems.push_back(p);
        const auto r = dataset::recompute(b.plan);
        if (r.storey_count != m.storey_count || r.room_total != m.room_total || r.footprint_area != m.footprint_area)
          problems.push_back("meta disagrees with the B-Rep file");
      }
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
    if (!problems.empty()) {
      ++failed;
      for (const std::string& p : problems) out << "FAIL " << f.filename().string() << ": " << p << "\n";
    }
  }
  out << files.size() << " checked, " << files.size() - failed << " passed, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- stats

struct StatsOpts {
  std::string dir;
  std::string csv;
};

int cmd_stats(const StatsOpts& o, std::ostream& out, std::ostream&) {
  const dataset::DatasetMeta ds = dataset::parse_dataset_meta_json(dataset::read_file(fs::path(o.dir) / "meta.json"));
  const dataset::Stats s = dataset::stats(ds);
  out << dataset::stats_text(s);
  if (!o.csv.empty()) dataset::write_file(o.csv, dataset::stats_csv(s));
  return kExitOk;
}

// ---------------------------------------------------------------- points

struct PointsOpts {
  std::string dir;
  std::size_t n = mltasks::kDefaultPoints;
  std::string mode = "cube";
  std::uint64_t seed = 0;
  std::string out;
  bool f32 = false;
  unsigned jobs = 0;
};

int cmd_points(const PointsOpts& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.dir;
  const auto files = brep_files(dir);
  const fs::path dest = o.out.empty() ? dir / "points" : fs::path(o.out);
  ensure_dir(dest);
  const mltasks::NormMode mode = o.mode == "sphere" ? mltasks::NormMode::UnitSphere : mltasks::NormMode::UnitCube;
  std::vector<std::optional<mltasks::RegressionRow>> labels(files.size());
  parallel_for(files.size(), resolve_jobs(o.jobs), [&](std::size_t i) {
    const std::string id = mltasks::id_of(files[i].string());
    const dataset::BrepFile b = dataset::parse_brep_json(dataset::read_file(files[i]));
    SeededRng rng(o.seed ^ config::fnv1a64(id), kPointsStream);
    mltasks::PointCloud c = mltasks::sample_points(brep::triangulate(b.solid), o.n, mode, rng);
    c.source_id = id;
    dataset::write_file(dest / (id + ".xyz"), mltasks::to_xyz(c));
    if (o.f32) dataset::write_file(dest / (id + ".f32"), mltasks::to_f32(c));
    const fs::path meta_path = dir / (id + ".meta.json");
    if (fs::exists(meta_path)) {
      mltasks::RegressionRow row = mltasks::truth_row(dataset::parse_meta_json(dataset::read_file(meta_path)));
      row.filename = id + ".xyz";
      labels[i] = row;
    }
  });
  std::vector<mltasks::RegressionRow> rows;
  for (auto& l : labels)
    if (l) rows.push_back(std::move(*l));
  dataset::write_file(dest / "labels.csv", mltasks::regression_csv(rows));
  if (files.empty()) err << "warning: no .brep.json files in " << dir.string() << "\n";
  out << "sampled " << files.size() << " clouds of " << o.n << " points (" << mltasks::to_string(mode) << ") -> "
      << dest.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- defect

struct DefectOpts {
  std::string dir;
  int ratio = 2;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 0;
};

int cmd_defect(const DefectOpts& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.dir;
  const fs::path dest = o.out.empty() ? dir : fs::path(o.out);
  ensure_dir(dest);
  std::vector<fs::path> good;
  for (const fs::path& f : brep_files(dir))
    if (!mltasks::is_defect_name(f.filename().string())) good.push_back(f);
  std::vector<char> skipped(good.size(), 0);
  parallel_for(good.size(), resolve_jobs(o.jobs), [&](std::size_t i) {
    const dataset::BrepFile b = dataset::parse_brep_json(dataset::read_file(good[i]));
    if (b.solid.label != brep::Label::Good) {
      skipped[i] = 1;
      return;
    }
    const std::string id = mltasks::id_of(good[i].string());
    for (int k = 1; k <= o.ratio; ++k) {
      SeededRng rng(o.seed ^ config::fnv1a64(id), kDefectStream + static_cast<std::uint64_t>(k));
      const std::string name = mltasks::defect_id(id, k);
      dataset::write_file(dest / (name + ".brep.json"),
                          dataset::brep_json(name, mltasks::inject_defect(b.solid, rng), b.plan));
    }
  });
  const auto n_skipped = static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), 1));
  if (n_skipped > 0) err << "warning: skipped " << n_skipped << " files already labelled DEFECT\n";
  const std::size_t done = good.size() - n_skipped;
  out << "wrote " << done * static_cast<std::size_t>(o.ratio) << " defect variants of " << done << " buildings -> "
      << dest.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalOpts {
  std::string predictions;
  std::string truth;
};

int cmd_eval_binary(const EvalOpts& o, std::ostream& out, std::ostream& err) {
  const auto m = mltasks::eval_binary(mltasks::parse_binary_csv(dataset::read_file(o.predictions)));
  out << "tp " << m.tp << " fn " << m.fn << " fp " << m.fp << " tn " << m.tn << "\n";
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.1f%%", 100.0 * m.accuracy);
  out << "accuracy " << fixed3(m.accuracy) << " (" << pct << ") raw " << raw(m.accuracy) << "\n";
  out << "precision " << fixed3(m.precision) << " raw " << raw(m.precision) << "\n";
  out << "recall " << fixed3(m.recall) << " raw " << raw(m.recall) << "\n";
  out << "f1 " << fixed3(m.f1) << " raw " << raw(m.f1) << "\n";
  if (m.degenerate) err << "warning: a metric had a zero denominator and is reported as 0\n";
  return kExitOk;
}

int cmd_eval_regression(const EvalOpts& o, std::ostream& out, std::ostream&) {
  const auto preds = mltasks::parse_regression_csv(dataset::read_file(o.predictions));
  std::vector<mltasks::RegressionRow> truths;
  if (fs::is_directory(o.truth)) {
    const auto ds = dataset::parse_dataset_meta_json(dataset::read_file(fs::path(o.truth) / "meta.json"));
    for (const BuildingMeta& m : ds.records) truths.push_back(mltasks::truth_row(m));
  } else {
    truths = mltasks::parse_regression_csv(dataset::read_file(o.truth));
  }
  const auto m = mltasks::eval_regression(preds, truths);
  out << "buildings " << m.count << "\n";
  const std::pair<const char*, double> rows[] = {{"storey_accuracy", m.storey_accuracy}, {"storey_mae", m.storey_mae},
                                                  {"roomtot_mae", m.roomtot_mae},       {"roomtot_rmse", m.roomtot_rmse},
                                                  {"avgarea_mae", m.avgarea_mae},       {"perfloor_mae", m.perfloor_mae}};
  for (const auto& [name, v] : rows) out << name << " " << fixed3(v) << " raw " << raw(v) << "\n";
  return kExitOk;
}

int exit_code_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io:
    case ErrorKind::Parse:
    case ErrorKind::Join:
    case ErrorKind::Config: return kExitUsage;
    default: return kExitFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural multi-storey building B-Rep dataset generator", "brepforge"};
  app.set_help_flag("--help", "print this help message and exit");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* g = app.add_subcommand("gen", "generate buildings for seeds seed..seed+count-1");
  g->add_option("--count", gen.count, "number of samples")->required()->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
  g->add_option("--seed", gen.seed, "first sample seed")->capture_default_str();
  g->add_option("--out", gen.out, "output directory")->required();
  g->add_option("--jobs", gen.jobs, "worker threads (0 = all cores)")->envname("BREPFORGE_JOBS");
  add_config_opts(g, gen.cfg);

  DirOpts val;
  CLI::App* v = app.add_subcommand("validate", "re-check every exported building in a directory");
  v->add_option("dir", val.dir, "dataset directory")->required();
  add_config_opts(v, val.cfg);

  StatsOpts st;
  CLI::App* s = app.add_subcommand("stats", "storey, room-area and footprint histograms of a dataset");
  s->add_option("dir", st.dir, "dataset directory")->required();
  s->add_option("--csv", st.csv, "also write the histograms as CSV to this file");

  PointsOpts pts;
  CLI::App* p = app.add_subcommand("points", "sample surface point clouds");
  p->add_option("dir", pts.dir, "dataset directory")->required();
  p->add_option("--n", pts.n, "points per cloud")->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  p->add_option("--mode", pts.mode, "normalization")->capture_default_str()->check(CLI::IsMember({"cube", "sphere"}));
  p->add_option("--seed", pts.seed, "sampling seed")->capture_default_str();
  p->add_option("--out", pts.out, "output directory (default <dir>/points)");
  p->add_flag("--f32", pts.f32, "also write raw float32 clouds");
  p->add_option("--jobs", pts.jobs, "worker threads (0 = all cores)")->envname("BREPFORGE_JOBS");

  DefectOpts def;
  CLI::App* d = app.add_subcommand("defect", "write open-shell variants of every GOOD building");
  d->add_option("dir", def.dir, "dataset directory")->required();
  d->add_option("--defect-ratio,--ratio", def.ratio, "defect variants per GOOD building")
      ->capture_default_str()
      ->check(CLI::Range(1, 1000));
  d->add_option("--seed", def.seed, "defect seed")->capture_default_str();
  d->add_option("--out", def.out, "output directory (default <dir>)");
  d->add_option("--jobs", def.jobs, "worker threads (0 = all cores)")->envname("BREPFORGE_JOBS");

  EvalOpts eb, er;
  CLI::App* e = app.add_subcommand("eval", "score predictions");
  e->require_subcommand(1);
  CLI::App* eb_app = e->add_subcommand("binary", "GOOD/DEFECT predictions; truth comes from the file names");
  eb_app->add_option("predictions", eb.predictions, "CSV with header filename,prediction")->required();
  CLI::App* er_app = e->add_subcommand("regression", "attribute predictions against ground truth");
  er_app->add_option("predictions", er.predictions, "prediction CSV")->required();
  er_app->add_option("--truth", er.truth, "dataset directory or truth CSV")->required();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("brepforge");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out, err);
    if (v->parsed()) return cmd_validate(val, out, err);
    if (s->parsed()) return cmd_stats(st, out, err);
    if (p->parsed()) return cmd_points(pts, out, err);
    if (d->parsed()) return cmd_defect(def, out, err);
    if (eb_app->parsed()) return cmd_eval_binary(eb, out, err);
    if (er_app->parsed()) return cmd_eval_regression(er, out, err);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return exit_code_of(ex.kind());
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace brepforge::cli
