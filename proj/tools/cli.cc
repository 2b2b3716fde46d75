// Copyright 2026 The chfkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "chfkit/correlations.h"
#include "chfkit/dataset.h"
#include "chfkit/error.h"
#include "chfkit/eval.h"
#include "chfkit/hybrid.h"

namespace chfkit::cli {
namespace {

// Usage problems detected after CLI11 has parsed the flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CHFKIT_SEED")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("CHFKIT_SEED is not an unsigned integer: '" +
                       std::string(s) + "'");
    }
    return v;
  }
  return 0;
}

void warn_envelope(std::span<const ChfRecord> records, std::ostream& err) {
  const EnvelopeReport rep = validate_envelope(records);
  for (const EnvelopeFlag& f : rep.flags) {
    if (f.field == EnvelopeField::kQcr) continue;
    err << "warning: row " << f.index << ": " << to_string(f.field) << " = "
        << num(f.value) << " outside the annulus data envelope\n";
  }
}

void write_indices(std::ostream& out, std::string_view key,
                   const std::vector<std::size_t>& idx) {
  out << key;
  for (std::size_t i : idx) out << ' ' << i;
  out << '\n';
}

std::vector<std::size_t> complement(std::size_t n,
                                    const std::vector<std::size_t>& a,
                                    const std::vector<std::size_t>& b) {
  std::vector<bool> used(n, false);
  for (std::size_t i : a) {
    if (i < n) used[i] = true;
  }
  for (std::size_t i : b) {
    if (i < n) used[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

SplitFile require_split(const std::string& path, std::size_t n_records) {
  SplitFile s = read_split_file(path);
  if (s.n_records && *s.n_records != n_records) {
    throw InputError(path + ": split was made for " +
                     std::to_string(*s.n_records) + " records, data has " +
                     std::to_string(n_records));
  }
  for (std::size_t i : s.test) {
    if (i >= n_records) {
      throw InputError(path + ": test index " + std::to_string(i) +
                       " out of range for " + std::to_string(n_records) +
                       " records");
    }
  }
  return s;
}

// --- subcommands -------------------------------------------------------------

struct DheArgs {
  double d_outer = 0.0;
  double d_inner = 0.0;
};

int cmd_dhe(const DheArgs& a, std::ostream& out) {
  const double d_he = heated_equivalent_diameter(a.d_outer, a.d_inner);
  out << "d_he_m: " << num(d_he) << '\n';
  out << "d_he_mm: " << num(d_he * 1000.0) << '\n';
  return kExitOk;
}

struct SynthArgs {
  std::optional<std::uint64_t> seed;
  long long n = 0;
  std::string out;
  double noise = 0.03;
  double bias_scale = 1.0;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  if (a.n < 1) throw UsageError("--n must be >= 1");
  SynthOptions opts;
  opts.noise_sigma = a.noise;
  opts.bias_scale = a.bias_scale;
  const auto records =
      synth_generate(resolve_seed(a.seed), static_cast<std::size_t>(a.n), opts);
  save_csv(a.out, records);
  out << "records: " << records.size() << '\n';
  out << "path: " << a.out << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string data;
  std::string kind;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string history;
  std::string split;
  std::optional<double> lr0;
  std::optional<int> batch;
  std::optional<int> max_epochs;
  std::optional<int> patience;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = parse_model_kind(a.kind);
  if (!kind) throw UsageError("unknown --kind '" + a.kind + "'");
  const std::uint64_t seed = resolve_seed(a.seed);

  const auto records = load_csv(a.data);
  warn_envelope(records, err);

  TrainConfig cfg;
  if (a.lr0) cfg.lr0 = *a.lr0;
  if (a.batch) cfg.batch_size = *a.batch;
  if (a.max_epochs) cfg.max_epochs = *a.max_epochs;
  if (a.patience) cfg.patience = *a.patience;
  try {
    validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  const FitResult fit = fit_model(records, *kind, seed, cfg);
  save(fit.bundle, a.out);

  const std::string history_path = a.history.empty() ? a.out + ".history.csv" : a.history;
  {
    std::ofstream h = open_out(history_path);
    h << "epoch_index,train_loss,val_loss,lr\n";
    const TrainHistory& hist = fit.history;
    for (std::size_t e = 0; e < hist.lr.size(); ++e) {
      h << e << ',' << num(hist.train_loss[e]) << ',' << num(hist.val_loss[e])
        << ',' << num(hist.lr[e]) << '\n';
    }
    if (!h) throw IoError("write failed: " + history_path);
  }

  const std::string split_path = a.split.empty() ? a.out + ".split" : a.split;
  SplitFile sf;
  sf.seed = seed;
  sf.n_records = records.size();
  sf.train = fit.split.train_index;
  sf.validation = fit.split.validation_index;
  sf.test = fit.split.test_index;
  write_split_file(split_path, sf);

  out << "kind: " << to_string(*kind) << '\n';
  out << "seed: " << seed << '\n';
  out << "records: " << records.size() << '\n';
  out << "train: " << fit.split.train.size() << '\n';
  out << "validation: " << fit.split.validation.size() << '\n';
  out << "test: " << fit.split.test.size() << '\n';
  out << "best_epoch: " << fit.history.best_epoch << '\n';
  out << "stopped_epoch: " << fit.history.stopped_epoch << '\n';
  out << "best_val_loss: "
      << num(fit.history.val_loss[static_cast<std::size_t>(fit.history.best_epoch - 1)])
      << '\n';
  out << "bundle: " << a.out << '\n';
  out << "history: " << history_path << '\n';
  out << "split: " << split_path << '\n';
  return kExitOk;
}

struct ModelChoice {
  std::string kind;
  std::string corr;
  std::string bundle;
};

// Returns a predictor and a tag naming the model.
std::pair<std::function<double(const OperatingPoint&)>, std::string> make_predictor(
    const ModelChoice& m) {
  if (!m.corr.empty()) {
    if (!m.kind.empty()) throw UsageError("--kind and --corr are exclusive");
    const auto corr = parse_correlation(m.corr);
    if (!corr) throw UsageError("unknown --corr '" + m.corr + "'");
    return {[c = *corr](const OperatingPoint& op) { return heat_balance_chf(c, op); },
            "base-" + std::string(to_string(*corr))};
  }
  if (m.bundle.empty()) {
    if (!m.kind.empty() && !parse_model_kind(m.kind)) {
      throw UsageError("unknown --kind '" + m.kind + "'");
    }
    throw UsageError(m.kind.empty() ? "one of --corr or --bundle is required"
                                    : "--kind " + m.kind + " requires --bundle");
  }
  auto bundle = std::make_shared<ModelBundle>(load(m.bundle));
  if (!m.kind.empty()) {
    const auto kind = parse_model_kind(m.kind);
    if (!kind) throw UsageError("unknown --kind '" + m.kind + "'");
    if (*kind != bundle->kind) {
      throw UsageError("--kind " + m.kind + " does not match bundle kind " +
                       std::string(to_string(bundle->kind)));
    }
  }
  std::string tag(to_string(bundle->kind));
  return {[bundle](const OperatingPoint& op) { return predict(*bundle, op); }, tag};
}

struct PredictArgs {
  ModelChoice model;
  std::string data;
  std::string out;
  std::optional<double> dhe_mm, length, pressure, mass_flux, dh_sub;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const bool single = a.dhe_mm || a.length || a.pressure || a.mass_flux || a.dh_sub;
  if (single == !a.data.empty()) {
    throw UsageError("give either --data or all operating-point flags");
  }
  if (single && !(a.dhe_mm && a.length && a.pressure && a.mass_flux && a.dh_sub)) {
    throw UsageError(
        "single-point prediction needs --dhe-mm, --length, --pressure, "
        "--mass-flux and --dh-sub");
  }
  const auto [predictor, tag] = make_predictor(a.model);

  if (single) {
    const OperatingPoint op{*a.dhe_mm / 1000.0, *a.length, *a.pressure,
                            *a.mass_flux, *a.dh_sub};
    ChfRecord probe{op, 1.0, std::nullopt, ""};
    warn_envelope(std::span<const ChfRecord>(&probe, 1), err);
    out << "model: " << tag << '\n';
    out << "q_chf_kw_m2: " << num(predictor(op)) << '\n';
    return kExitOk;
  }

  const auto records = load_csv(a.data);
  warn_envelope(records, err);
  std::ostringstream text;
  text << "row,predicted_kw_m2,model\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    double q = 0.0;
    try {
      q = predictor(records[i].op);
    } catch (const NumericError& e) {
      throw NumericError("row " + std::to_string(i) + ": " + e.what());
    }
    text << i << ',' << num(q) << ',' << tag << '\n';
  }
  if (a.out.empty()) {
    out << text.str();
  } else {
    std::ofstream f = open_out(a.out);
    f << text.str();
    if (!f) throw IoError("write failed: " + a.out);
  }
  return kExitOk;
}

struct EvalArgs {
  ModelChoice model;
  std::string data;
  std::string split;
  std::string parity;
  bool json = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const auto [predictor, tag] = make_predictor(a.model);
  const auto records = load_csv(a.data);
  const SplitFile sf = require_split(a.split, records.size());
  if (sf.test.empty()) throw InputError(a.split + ": empty test partition");

  std::vector<double> preds;
  std::vector<double> actuals;
  for (std::size_t i : sf.test) {
    try {
      preds.push_back(predictor(records[i].op));
    } catch (const NumericError& e) {
      throw NumericError("row " + std::to_string(i) + ": " + e.what());
    }
    actuals.push_back(records[i].q_cr);
  }
  const EvalReport r = metrics(preds, actuals, tag);
  if (!a.parity.empty()) parity_export(r, a.parity);

  if (a.json) {
    nlohmann::ordered_json j;
    j["model"] = tag;
    j["n_points"] = r.n_points;
    j["mu_error_pct"] = r.mu_error;
    j["max_error_pct"] = r.max_error;
    j["std_error_pct"] = r.std_error;
    j["rrmse_pct"] = r.rrmse;
    j["f_gt10_pct"] = r.f_gt10;
    out << j.dump(2) << '\n';
  } else {
    out << "model: " << tag << '\n';
    out << "n_points: " << r.n_points << '\n';
    out << "mu_error_pct: " << num(r.mu_error) << '\n';
    out << "max_error_pct: " << num(r.max_error) << '\n';
    out << "std_error_pct: " << num(r.std_error) << '\n';
    out << "rrmse_pct: " << num(r.rrmse) << '\n';
    out << "f_gt10_pct: " << num(r.f_gt10) << '\n';
  }
  return kExitOk;
}

struct PcaArgs {
  std::string data;
  std::optional<std::uint64_t> seed;
  std::string split;
  std::string out;
};

int cmd_pca_check(const PcaArgs& a, std::ostream& out) {
  const auto records = load_csv(a.data);
  SplitDataset parts;
  if (a.split.empty()) {
    parts = split(records, resolve_seed(a.seed));
  } else {
    SplitFile sf = require_split(a.split, records.size());
    std::vector<std::size_t> val = sf.validation.value_or(std::vector<std::size_t>{});
    std::vector<std::size_t> train =
        sf.train ? *sf.train : complement(records.size(), sf.test, val);
    parts = split_from_indices(records, std::move(train), std::move(val),
                               sf.test, sf.seed.value_or(0));
  }

  std::vector<Features> train_x;
  for (const ChfRecord& r : parts.train) train_x.push_back(features_of(r.op));
  const Pca2 pca = pca_fit(train_x);

  std::vector<Point2> train_p;
  std::vector<Point2> test_p;
  for (const Features& f : train_x) train_p.push_back(pca.project(f));
  for (const ChfRecord& r : parts.test) test_p.push_back(pca.project(features_of(r.op)));
  const Containment c = hull_and_containment(train_p, test_p);

  if (!a.out.empty()) {
    const std::string proj_path = a.out + ".projections.csv";
    std::ofstream p = open_out(proj_path);
    p << "set,row,pc1,pc2,inside\n";
    for (std::size_t i = 0; i < train_p.size(); ++i) {
      p << "train," << parts.train_index[i] << ',' << num(train_p[i].x) << ','
        << num(train_p[i].y) << ",1\n";
    }
    for (std::size_t i = 0; i < test_p.size(); ++i) {
      p << "test," << parts.test_index[i] << ',' << num(test_p[i].x) << ','
        << num(test_p[i].y) << ',' << (c.inside[i] ? 1 : 0) << '\n';
    }
    if (!p) throw IoError("write failed: " + proj_path);

    const std::string hull_path = a.out + ".hull.csv";
    std::ofstream h = open_out(hull_path);
    h << "pc1,pc2\n";
    for (const Point2& v : c.hull.vertices) h << num(v.x) << ',' << num(v.y) << '\n';
    if (!h) throw IoError("write failed: " + hull_path);
  }

  const std::size_t inside = c.inside_count();
  out << "train_points: " << train_p.size() << '\n';
  out << "test_points: " << test_p.size() << '\n';
  out << "explained_variance: " << num(pca.explained_variance[0]) << ' '
      << num(pca.explained_variance[1]) << '\n';
  out << "hull_vertices: " << c.hull.vertices.size() << '\n';
  out << "inside: " << inside << '\n';
  out << "outside: " << test_p.size() - inside << '\n';
  for (std::size_t i = 0; i < test_p.size(); ++i) {
    if (!c.inside[i]) out << "outside_row: " << parts.test_index[i] << '\n';
  }
  out << "all_inside: " << (inside == test_p.size() ? "true" : "false") << '\n';
  return kExitOk;
}

}  // namespace

void write_split_file(const std::filesystem::path& path, const SplitFile& s) {
  std::ofstream out = open_out(path);
  out << "# chfkit split\n";
  if (s.seed) out << "seed " << *s.seed << '\n';
  if (s.n_records) out << "n " << *s.n_records << '\n';
  if (s.train) write_indices(out, "train", *s.train);
  if (s.validation) write_indices(out, "validation", *s.validation);
  write_indices(out, "test", s.test);
  if (!out) throw IoError("write failed: " + path.string());
}

SplitFile read_split_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  SplitFile s;
  bool have_test = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    std::vector<unsigned long long> values;
    for (std::string tok; ss >> tok;) {
      unsigned long long v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                         ": bad index '" + tok + "'");
      }
      values.push_back(v);
    }
    std::vector<std::size_t> idx(values.begin(), values.end());
    if (key == "seed" && values.size() == 1) {
      s.seed = values[0];
    } else if (key == "n" && values.size() == 1) {
      s.n_records = values[0];
    } else if (key == "train") {
      s.train = idx;
    } else if (key == "validation") {
      s.validation = idx;
    } else if (key == "test") {
      s.test = idx;
      have_test = true;
    } else {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                       ": unexpected '" + key + "'");
    }
  }
  if (!have_test) throw ParseError(path.string() + ": missing 'test' line");
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Critical heat flux in internally heated annuli: correlations, "
               "hybrid models, evaluation"};
  app.name(args.empty() ? "chfkit" : args[0]);
  app.require_subcommand(1);

  DheArgs dhe;
  auto* sc_dhe = app.add_subcommand("dhe", "Heated equivalent diameter of an annulus");
  sc_dhe->add_option("--do", dhe.d_outer, "Outer wall diameter (m)")->required();
  sc_dhe->add_option("--di", dhe.d_inner, "Inner heated wall diameter (m)")->required();

  SynthArgs synth;
  auto* sc_synth = app.add_subcommand("synth", "Write a synthetic CHF dataset");
  sc_synth->add_option("--seed", synth.seed, "Generator seed (falls back to CHFKIT_SEED)");
  sc_synth->add_option("--n", synth.n, "Number of records")->required();
  sc_synth->add_option("--out", synth.out, "Output CSV")->required();
  sc_synth->add_option("--noise", synth.noise, "Relative noise sigma")->capture_default_str();
  sc_synth->add_option("--bias-scale", synth.bias_scale, "Multiplier on the injected bias")
      ->capture_default_str();

  TrainArgs tr;
  auto* sc_train = app.add_subcommand("train", "Train a pure or hybrid model");
  sc_train->add_option("--data", tr.data, "Input CSV")->required();
  sc_train->add_option("--kind", tr.kind, "pure|hybrid-biasi|hybrid-bowring|hybrid-katto")
      ->required();
  sc_train->add_option("--seed", tr.seed, "Split/init/shuffle seed (falls back to CHFKIT_SEED)");
  sc_train->add_option("--out", tr.out, "Bundle path")->required();
  sc_train->add_option("--history", tr.history, "History CSV (default <out>.history.csv)");
  sc_train->add_option("--split", tr.split, "Split index file (default <out>.split)");
  sc_train->add_option("--lr0", tr.lr0, "Initial learning rate");
  sc_train->add_option("--batch", tr.batch, "Mini-batch size");
  sc_train->add_option("--max-epochs", tr.max_epochs, "Epoch cap");
  sc_train->add_option("--patience", tr.patience, "Early-stopping patience (epochs)");

  PredictArgs pr;
  auto* sc_pred = app.add_subcommand("predict", "Predict CHF for one point or a CSV");
  sc_pred->add_option("--kind", pr.model.kind, "Model kind (with --bundle)");
  sc_pred->add_option("--corr", pr.model.corr, "biasi|bowring|katto");
  sc_pred->add_option("--bundle", pr.model.bundle, "Trained model bundle");
  sc_pred->add_option("--data", pr.data, "Input CSV (batch mode)");
  sc_pred->add_option("--out", pr.out, "Output CSV (batch mode; default stdout)");
  sc_pred->add_option("--dhe-mm", pr.dhe_mm, "Heated equivalent diameter (mm)");
  sc_pred->add_option("--length", pr.length, "Heated length (m)");
  sc_pred->add_option("--pressure", pr.pressure, "Pressure (MPa)");
  sc_pred->add_option("--mass-flux", pr.mass_flux, "Mass flux (kg/m^2/s)");
  sc_pred->add_option("--dh-sub", pr.dh_sub, "Inlet subcooling (kJ/kg)");

  EvalArgs ev;
  auto* sc_eval = app.add_subcommand("eval", "Evaluate a model on the held-out test rows");
  sc_eval->add_option("--data", ev.data, "Input CSV")->required();
  sc_eval->add_option("--split", ev.split, "Split index file from train")->required();
  sc_eval->add_option("--kind", ev.model.kind, "Model kind (with --bundle)");
  sc_eval->add_option("--corr", ev.model.corr, "biasi|bowring|katto");
  sc_eval->add_option("--bundle", ev.model.bundle, "Trained model bundle");
  sc_eval->add_option("--parity", ev.parity, "Parity CSV output");
  sc_eval->add_flag("--json", ev.json, "Print metrics as JSON");

  PcaArgs pca;
  auto* sc_pca = app.add_subcommand("pca-check", "PCA + convex-hull coverage of the test rows");
  sc_pca->add_option("--data", pca.data, "Input CSV")->required();
  sc_pca->add_option("--seed", pca.seed, "Split seed (falls back to CHFKIT_SEED)");
  sc_pca->add_option("--split", pca.split, "Split index file (overrides --seed)");
  sc_pca->add_option("--out", pca.out, "Output prefix for projection and hull CSVs");

  std::vector<std::string> argv_rev(args.size() > 1 ? args.begin() + 1 : args.end(),
                                    args.end());
  std::reverse(argv_rev.begin(), argv_rev.end());
  try {
    app.parse(argv_rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*sc_dhe) return cmd_dhe(dhe, out);
    if (*sc_synth) return cmd_synth(synth, out);
    if (*sc_train) return cmd_train(tr, out, err);
    if (*sc_pred) return cmd_predict(pr, out, err);
    if (*sc_eval) return cmd_eval(ev, out);
    if (*sc_pca) return cmd_pca_check(pca, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidGeometry& e) {
    err << "invalid geometry: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitParse;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace chfkit::cli
