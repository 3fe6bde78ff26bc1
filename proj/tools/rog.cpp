// Copyright 2026 The RoG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rog: synthesize, corrupt, fit, predict, evaluate, theory checks, benchmark.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rog/rog.hpp"

namespace fs = std::filesystem;

namespace rog::cli {

/// Option bag shared by every subcommand; each reads the fields it needs.
struct Options {
  std::uint64_t seed = 0;
  std::string out = "rog_out";
  std::string config;
  std::vector<std::string> layers;
  std::vector<std::string> layer_ids;
  std::vector<std::string> val_layers;
  std::vector<std::string> donors;
  std::string manifest;
  std::string split = "train";
  std::string val_split;
  std::string model;
  std::string estimator = "mcd";
  std::optional<double> delta_out;
  double rate = 0.0;
  std::string noise;
  std::optional<std::size_t> keep;
  std::size_t restarts = 10;
  std::optional<std::size_t> imax;
  bool exact = false;
  std::string priors = "uniform";
  std::optional<double> ridge;
  std::optional<std::size_t> val_size;
  // synth
  int classes = 10;
  Eigen::Index dim = 16;
  std::size_t n_per_class = 1000;
  std::size_t val_per_class = 100;
  std::size_t test_per_class = 500;
  double mean_norm = 3.0;
  double sigma2 = 1.0;
  double out_sigma2 = 4.0;
  double out_mean_norm = 6.0;
  // theory / bench
  std::string check = "theorem1";
  std::vector<std::size_t> n_grid;
  std::vector<double> delta_grid;
  std::string suite = "synthetic";
  std::vector<double> layer_noise;
  // convert
  std::string input;
};

void write_text(const fs::path& path, const std::string& text) { write_file(path, text); }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

McdConfig mcd_config(const Options& o, std::size_t default_imax) {
  McdConfig cfg;
  cfg.restarts = o.restarts;
  cfg.max_iters = o.imax.value_or(default_imax);
  cfg.mode = o.exact ? McdMode::kExact : McdMode::kCStep;
  cfg.ridge = o.ridge;
  cfg.seed = o.seed;
  if (o.priors == "uniform") {
    cfg.priors = PriorKind::kUniform;
  } else if (o.priors == "subset-size") {
    cfg.priors = PriorKind::kSubsetSize;
  } else {
    throw ConfigError("unknown prior '" + o.priors + "' (expected uniform or subset-size)");
  }
  return cfg;
}

std::vector<std::string> ids_for(const std::vector<std::string>& paths, const std::vector<std::string>& given) {
  if (!given.empty()) {
    if (given.size() != paths.size()) throw ConfigError("--layer-id count must match --layer count");
    return given;
  }
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (std::size_t l = 0; l < paths.size(); ++l) {
    std::string id = fs::path(paths[l]).stem().string();
    if (!seen.insert(id).second) id += "_" + std::to_string(l);
    seen.insert(id);
    ids.push_back(id);
  }
  return ids;
}

LayeredFeatureSet load_layers(const std::vector<std::string>& paths) {
  if (paths.empty()) throw ConfigError("at least one --layer is required");
  std::vector<FeatureSet> layers;
  for (const auto& p : paths) layers.push_back(load_feature_set(p));
  return LayeredFeatureSet(std::move(layers));
}

/// Layers from --manifest/--split or from --layer paths, with their ids.
std::pair<LayeredFeatureSet, std::vector<std::string>> input_layers(const Options& o, const std::string& split) {
  if (!o.manifest.empty()) {
    auto m = load_manifest(o.manifest);
    return {load_split(m, split), layer_ids(m)};
  }
  return {load_layers(o.layers), ids_for(o.layers, o.layer_ids)};
}

Json noise_sidecar(const std::string& first_layer) {
  if (first_layer.empty()) return Json::object();
  auto side = fs::path(first_layer);
  side.replace_extension(".noise.json");
  return fs::exists(side) ? read_json(side) : Json::object();
}

// ---------------------------------------------------------------- synth

void cmd_synth(const Options& o) {
  if (o.classes < 2) throw SpecError("--classes must be >= 2");
  if (o.dim < 1) throw SpecError("--dim must be >= 1");
  SynthSpec spec;
  spec.class_means = random_class_means(o.classes, o.dim, o.mean_norm, o.seed);
  spec.sigma2 = o.sigma2;
  spec.out_sigma2 = o.out_sigma2;
  spec.delta_out = o.delta_out.value_or(0.0);
  spec.validate();
  const fs::path out(o.out);
  auto emit = [&](const std::string& name, std::size_t n, double delta, std::uint64_t tag) {
    SynthSpec s = spec;
    s.n_per_class = n;
    s.delta_out = delta;
    s.seed = make_rng(o.seed, {0x73796e7468ULL, tag})();
    auto data = synthesize(s);
    save_feature_set(data.data, out / (name + ".rogf"));
    return data;
  };
  auto train = emit("train", o.n_per_class, spec.delta_out, 1);
  save_mask(train.mask, mask_path_for(out / "train.rogf"));
  emit("val", o.val_per_class, spec.delta_out, 2);
  emit("test", o.test_per_class, 0.0, 3);
  std::ostringstream md;
  md << "# synth\n\n| split | rows |\n|---|---|\n"
     << "| train | " << train.data.size() << " |\n| val | " << o.val_per_class * o.classes << " |\n"
     << "| test | " << o.test_per_class * o.classes << " |\n";
  write_text(out / "report.md", md.str());
}

// ---------------------------------------------------------------- corrupt

void cmd_corrupt(const Options& o) {
  if (o.layers.empty()) throw ConfigError("corrupt needs at least one --layer");
  NoiseSpec spec;
  spec.kind = parse_noise_kind(o.noise.empty() ? "uniform" : o.noise);
  spec.rate = o.rate;
  spec.seed = o.seed;
  if (!o.donors.empty() && o.donors.size() != o.layers.size()) throw ConfigError("--donor count must match --layer");
  const fs::path out(o.out);
  std::optional<std::vector<bool>> first_mask;
  for (std::size_t l = 0; l < o.layers.size(); ++l) {
    auto ds = load_feature_set(o.layers[l]);
    if (spec.kind == NoiseKind::kFlip) spec.flip_map = cyclic_flip_map(ds.num_classes());
    std::optional<FeatureSet> donor;
    if (!o.donors.empty()) donor = load_feature_set(o.donors[l]);
    auto noisy = inject_noise(ds, spec, donor ? &*donor : nullptr);
    if (first_mask && *first_mask != noisy.mask) throw ValidationError("layers disagree on corrupted rows");
    first_mask = noisy.mask;
    const auto name = fs::path(o.layers[l]).filename();
    const auto target = out / name;
    save_feature_set(noisy.data, target);
    save_mask(noisy.mask, mask_path_for(target));
    auto side = target;
    side.replace_extension(".noise.json");
    write_json(side, Json{{"noise_kind", std::string(to_string(spec.kind))}, {"rate", spec.rate}, {"seed", o.seed}});
  }
}

// ---------------------------------------------------------------- fit

void cmd_fit(const Options& o) {
  const auto kind = parse_estimator_kind(o.estimator);
  auto [train, ids] = input_layers(o, o.split);
  FitOptions fopt;
  fopt.mcd = mcd_config(o, 2);
  std::optional<LayeredFeatureSet> val;
  if (train.num_layers() > 1) {
    if (!o.val_layers.empty()) {
      val = load_layers(o.val_layers);
    } else if (!o.manifest.empty() && !o.val_split.empty()) {
      val = load_split(load_manifest(o.manifest), o.val_split);
    } else {
      const auto n = static_cast<std::size_t>(train.size());
      auto parts = split(train, o.val_size.value_or(std::max<std::size_t>(1, n / 10)), o.seed);
      train = std::move(parts.first);
      val = std::move(parts.second);
    }
  }
  std::vector<EnsembleLayer> layers;
  for (std::size_t l = 0; l < train.num_layers(); ++l) {
    layers.push_back({ids[l], fit_classifier(train.layer(l), kind, fopt)});
  }
  auto model = val ? assemble_ensemble(std::move(layers), *val, o.keep) : assemble_ensemble(std::move(layers), train, {});
  Json extra{{"estimator", o.estimator}};
  auto noise = noise_sidecar(o.layers.empty() ? std::string() : o.layers.front());
  if (noise.contains("noise_kind")) {
    extra["noise_kind"] = noise["noise_kind"];
    extra["rate"] = noise["rate"];
  }
  const fs::path out(o.out);
  save_ensemble(model, out / "model", extra);
  if (kind == EstimatorKind::kMcd && train.num_layers() == 1) {
    write_json(out / "model" / "mcd.json", mcd_to_json(mcd_estimate(train.layer(0), fopt.mcd)));
  }
  std::ostringstream md;
  md << "# fit\n\nestimator: " << o.estimator << "\n\n| layer | dim | weight |\n|---|---|---|\n";
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    md << "| " << model.layers[l].id << " | " << model.layers[l].params.dim() << " | " << fmt(model.weights(l))
       << " |\n";
  }
  write_text(out / "report.md", md.str());
}

// ---------------------------------------------------------------- predict / eval

EnsembleModel load_model(const Options& o) {
  if (o.model.empty()) throw ConfigError("--model is required");
  fs::path p(o.model);
  if (fs::is_directory(p)) p = fs::exists(p / "model" / "ensemble.json") ? p / "model" / "ensemble.json" : p / "ensemble.json";
  return load_ensemble(p);
}

void cmd_predict(const Options& o) {
  auto model = load_model(o);
  auto [data, ids] = input_layers(o, o.split);
  const Matrix post = ensemble_posteriors(model, data);
  const auto labels = argmax_rows(post);
  std::ostringstream os;
  os << "row,label";
  for (Eigen::Index c = 0; c < post.cols(); ++c) os << ",p" << c;
  os << '\n' << std::setprecision(10);
  for (Eigen::Index i = 0; i < post.rows(); ++i) {
    os << i << ',' << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < post.cols(); ++c) os << ',' << post(i, c);
    os << '\n';
  }
  write_text(fs::path(o.out) / "predictions.csv", os.str());
}

void cmd_eval(const Options& o) {
  fs::path bundle_path(o.model);
  if (fs::is_directory(bundle_path)) {
    bundle_path = fs::exists(bundle_path / "model" / "ensemble.json") ? bundle_path / "model" / "ensemble.json"
                                                                      : bundle_path / "ensemble.json";
  }
  const Json bundle = read_json(bundle_path);
  auto model = load_ensemble(bundle_path);
  auto [data, ids] = input_layers(o, o.split);
  const Matrix post = ensemble_posteriors(model, data);
  const auto pred = argmax_rows(post);
  const double acc = accuracy(pred, data.labels());
  const double nll = mean_nll(post, data.labels());
  const Vector per_class = per_class_accuracy(pred, data.labels(), data.num_classes());
  const std::string estimator = bundle.value("estimator", std::string("unknown"));
  const std::string noise_kind = !o.noise.empty() ? o.noise : bundle.value("noise_kind", std::string("none"));
  const double rate = !o.noise.empty() ? o.rate : bundle.value("rate", 0.0);
  const std::string split_name = o.manifest.empty() ? (o.split == "train" ? std::string("test") : o.split) : o.split;
  const fs::path out(o.out);
  write_json(out / "metrics.json", Json{{"split", split_name},
                                        {"estimator", estimator},
                                        {"noise_kind", noise_kind},
                                        {"rate", rate},
                                        {"n", data.size()},
                                        {"accuracy", acc},
                                        {"nll", nll},
                                        {"per_class_accuracy", vector_to_json(per_class)}});
  std::ostringstream csv;
  csv << "split,estimator,noise_kind,rate,accuracy,nll\n"
      << split_name << ',' << estimator << ',' << noise_kind << ',' << fmt(rate) << ',' << fmt(acc, 10) << ','
      << fmt(nll, 10) << '\n';
  write_text(out / "metrics.csv", csv.str());
  std::ostringstream md;
  md << "# eval\n\n| split | estimator | noise | rate | accuracy | nll |\n|---|---|---|---|---|---|\n| " << split_name
     << " | " << estimator << " | " << noise_kind << " | " << fmt(rate) << " | " << fmt(acc) << " | " << fmt(nll)
     << " |\n\n| class | accuracy |\n|---|---|\n";
  for (Eigen::Index c = 0; c < per_class.size(); ++c) md << "| " << c << " | " << fmt(per_class(c)) << " |\n";
  write_text(out / "report.md", md.str());
  std::cout << "accuracy " << fmt(acc) << " nll " << fmt(nll) << '\n';
}

// ---------------------------------------------------------------- theory

void theory_theorem1(const Options& o) {
  SynthSpec base;
  const int classes = o.classes;
  base.class_means = random_class_means(classes, o.dim, o.mean_norm, o.seed);
  base.sigma2 = o.sigma2;
  base.out_sigma2 = o.out_sigma2;
  const auto n_grid = o.n_grid.empty() ? std::vector<std::size_t>{1000, 10000, 100000} : o.n_grid;
  const auto deltas = o.delta_grid.empty() ? std::vector<double>{o.delta_out.value_or(0.25)} : o.delta_grid;
  const auto reports = theorem1_report(base, mcd_config(o, 100), n_grid, deltas, o.seed);
  std::ostringstream csv;
  csv << theory_csv_header() << '\n' << std::setprecision(8);
  Json rows = Json::array();
  for (const auto& r : reports) {
    const double em = r.mean_error_mcd.mean();
    const double es = r.mean_error_sample.mean();
    csv << r.n_samples << ',' << r.delta_out << ',' << em << ',' << es << ',' << r.phi_mcd << ',' << r.phi_sample << ','
        << r.margin_ratio << ',' << r.bound_mcd << ',' << r.bound_sample << '\n';
    rows.push_back(Json{{"n", r.n_samples},
                        {"delta_out", r.delta_out},
                        {"err_mcd_l1", em},
                        {"err_sample_l1", es},
                        {"phi_mcd", r.phi_mcd},
                        {"phi_sample", r.phi_sample},
                        {"margin_ratio", r.margin_ratio},
                        {"bound_mcd", r.bound_mcd},
                        {"bound_sample", r.bound_sample},
                        {"delta_mcd", r.delta_mcd},
                        {"a3_holds", r.a3_holds},
                        {"a4_holds", r.a4_holds},
                        {"warnings", r.warnings}});
    for (const auto& w : r.warnings) std::cerr << "warning (n=" << r.n_samples << ", delta=" << r.delta_out << "): " << w << '\n';
  }
  const fs::path out(o.out);
  write_text(out / "theory.csv", csv.str());
  write_json(out / "theory.json", rows);
  std::ostringstream md;
  md << "# theory: theorem1\n\n| n | delta_out | err_mcd_l1 | err_sample_l1 | phi_mcd | phi_sample | margin_ratio | "
        "bound_mcd | bound_sample |\n|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    md << "| " << r.n_samples << " | " << r.delta_out << " | " << fmt(r.mean_error_mcd.mean(), 4) << " | "
       << fmt(r.mean_error_sample.mean(), 4) << " | " << fmt(r.phi_mcd, 4) << " | " << fmt(r.phi_sample, 4) << " | "
       << fmt(r.margin_ratio, 4) << " | " << fmt(r.bound_mcd, 4) << " | " << fmt(r.bound_sample, 4) << " |\n";
  }
  write_text(out / "report.md", md.str());
  std::cout << csv.str();
}

void theory_lemma1(const Options& o) {
  const Eigen::Index d = o.dim;
  SynthSpec spec;
  spec.class_means = Matrix::Constant(1, d, 2.0 / std::sqrt(static_cast<double>(d)));
  spec.sigma2 = o.sigma2;
  spec.out_sigma2 = o.out_sigma2;
  spec.delta_out = o.delta_out.value_or(0.25);
  spec.n_per_class = o.n_grid.empty() ? 100000 : o.n_grid.front();
  spec.seed = o.seed;
  spec.validate();
  const auto limits = lemma1_limits(spec, 0);
  Rng rng = make_rng(spec.seed, {0x6c656d6d61ULL});
  const Matrix x = synthesize_class(spec.class_means.row(0).transpose(), spec.sigma2, spec.outlier_mean(),
                                    spec.out_sigma2, spec.delta_out, spec.n_per_class, rng)
                       .points;
  const auto sample = mean_cov(x);
  const auto mcd = mcd_fit_class(x, mcd_config(o, 100));
  const Matrix mix_cov = limits.mixture_covariance();
  struct Row {
    std::string quantity;
    double closed_form;
    double empirical;
  };
  const double dd = static_cast<double>(d);
  std::vector<Row> rows = {
      {"sample_mean_0", limits.mixture_mean(0), sample.mean(0)},
      {"sample_var_trace_per_dim", mix_cov.trace() / dd, sample.cov.trace() / dd},
      {"mcd_mean_0", limits.mcd_mean(0), mcd.stats.mean(0)},
      {"mcd_var_trace_per_dim", limits.mcd_variance, mcd.stats.covariance.trace() / dd},
  };
  std::ostringstream csv;
  csv << "quantity,closed_form,empirical\n" << std::setprecision(8);
  std::ostringstream md;
  md << "# theory: lemma1\n\nn = " << spec.n_per_class << ", d = " << d << ", delta_out = " << spec.delta_out
     << "\n\n| quantity | closed form | empirical |\n|---|---|---|\n";
  for (const auto& r : rows) {
    csv << r.quantity << ',' << r.closed_form << ',' << r.empirical << '\n';
    md << "| " << r.quantity << " | " << fmt(r.closed_form) << " | " << fmt(r.empirical) << " |\n";
  }
  const fs::path out(o.out);
  write_text(out / "lemma1.csv", csv.str());
  write_text(out / "report.md", md.str());
  std::cout << md.str();
}

void theory_breakdown(const Options& o) {
  const std::size_t n = o.n_grid.empty() ? 100 : o.n_grid.front();
  const Eigen::Index d = o.dim;
  Rng rng = make_rng(o.seed, {0x627265616bULL});
  Matrix base(static_cast<Eigen::Index>(n), d);
  fill_gaussian(base, 0, base.rows(), Vector::Zero(d), 1.0, rng);
  std::vector<double> fractions;
  if (o.delta_grid.empty()) {
    for (std::size_t m = 0; m < n / 2; ++m) fractions.push_back(static_cast<double>(m) / static_cast<double>(n));
  } else {
    fractions = o.delta_grid;
  }
  std::ostringstream csv;
  csv << "estimator,fraction,replaced,displacement,error,log_eig_min,log_eig_max,broken\n" << std::setprecision(8);
  std::ostringstream md;
  md << "# theory: breakdown\n\nn = " << n << ", d = " << d << "\n\n| estimator | clean error | breakdown fraction |\n|---|---|---|\n";
  for (auto est : {LocationEstimator::kSample, LocationEstimator::kMcd}) {
    BreakdownConfig cfg;
    cfg.estimator = est;
    cfg.mcd = mcd_config(o, 100);
    cfg.mcd.init = McdInit::kElemental;
    cfg.mcd.restarts = std::max<std::size_t>(o.restarts, 50);
    const auto r = breakdown_sweep(base, Vector::Zero(d), fractions, cfg);
    const char* name = est == LocationEstimator::kSample ? "sample" : "mcd";
    for (const auto& row : r.rows) {
      csv << name << ',' << row.fraction << ',' << row.replaced << ',' << row.displacement << ',' << row.error << ','
          << row.log_eig_min << ',' << row.log_eig_max << ',' << (row.error > cfg.factor * r.reference_error) << '\n';
    }
    md << "| " << name << " | " << fmt(r.clean_error) << " | "
       << (r.breakdown_fraction ? fmt(*r.breakdown_fraction) : std::string("none")) << " |\n";
  }
  const fs::path out(o.out);
  write_text(out / "breakdown.csv", csv.str());
  write_text(out / "report.md", md.str());
  std::cout << md.str();
}

void cmd_theory(const Options& o) {
  if (o.check == "theorem1") return theory_theorem1(o);
  if (o.check == "lemma1") return theory_lemma1(o);
  if (o.check == "breakdown") return theory_breakdown(o);
  throw ConfigError("unknown --check '" + o.check + "' (expected theorem1, lemma1 or breakdown)");
}

// ---------------------------------------------------------------- bench

void cmd_bench(const Options& o) {
  if (o.suite != "synthetic") throw ConfigError("unknown --suite '" + o.suite + "' (expected synthetic)");
  BenchConfig cfg;
  cfg.classes = o.classes;
  cfg.dim = o.dim;
  cfg.n_per_class = o.n_per_class;
  cfg.val_per_class = o.val_per_class;
  cfg.test_per_class = o.test_per_class;
  cfg.mean_norm = o.mean_norm;
  cfg.sigma2 = o.sigma2;
  cfg.out_sigma2 = o.out_sigma2;
  cfg.out_mean_norm = o.out_mean_norm;
  if (!o.layer_noise.empty()) cfg.layer_noise = o.layer_noise;
  if (!o.delta_grid.empty()) cfg.deltas = o.delta_grid;
  if (o.keep) cfg.keep = *o.keep;
  cfg.mcd = mcd_config(o, 2);
  cfg.seed = o.seed;
  const auto result = run_bench(cfg);
  const fs::path out(o.out);
  write_text(out / "bench.csv", bench_csv(result));
  const auto table = bench_markdown(result, cfg.deltas);
  write_text(out / "report.md", "# bench: synthetic\n\n" + table);
  std::cout << table;
}

// ---------------------------------------------------------------- convert

void cmd_convert(const Options& o) {
  if (o.input.empty()) throw ConfigError("--in is required");
  save_feature_set(load_feature_set(o.input), o.out);
}

// ---------------------------------------------------------------- driver

/// Moves values from the --config JSON into argv as flags, skipping any flag
/// already given on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  const Json cfg = read_json(path);
  if (!cfg.is_object()) throw ConfigError("--config must hold a JSON object");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (auto& ch : flag) ch = ch == '_' ? '-' : ch;
    if (flag == "--config" || given(flag)) continue;
    auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& v : value) {
        extra.push_back(flag);
        extra.push_back(scalar(v));
      }
    } else {
      extra.push_back(flag);
      extra.push_back(scalar(value));
    }
  }
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

Json resolved_config(const CLI::App& sub) {
  Json j{{"command", sub.get_name()}};
  for (const auto* opt : sub.get_options()) {
    const auto name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_expected_max() > 1 || res.size() > 1) {
        j[name] = res;
      } else if (opt->get_type_size() == 0) {
        j[name] = true;
      } else {
        j[name] = res.empty() ? std::string() : res.front();
      }
    } else if (opt->get_type_size() == 0) {
      j[name] = false;
    } else {
      const auto def = opt->get_default_str();
      if (def == "{}") {
        j[name] = Json::array();
      } else if (def.empty()) {
        j[name] = nullptr;
      } else {
        j[name] = def;
      }
    }
  }
  return j;
}

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"Robust generative classifier toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--out", o.out, "output path");
    sub->add_option("--config", o.config, "JSON file of flag values; flags override it");
  };
  auto mcd_flags = [&](CLI::App* sub) {
    sub->add_option("--restarts", o.restarts, "MCD restarts R")->check(CLI::PositiveNumber);
    sub->add_option("--imax", o.imax, "C-steps per restart");
    sub->add_flag("--exact", o.exact, "exhaustive MCD search");
    sub->add_option("--priors", o.priors, "uniform or subset-size");
    sub->add_option("--ridge", o.ridge, "absolute covariance ridge");
  };
  auto inputs = [&](CLI::App* sub) {
    sub->add_option("--layer", o.layers, "feature file (repeatable)");
    sub->add_option("--layer-id", o.layer_ids, "layer id (repeatable, aligned with --layer)");
    sub->add_option("--manifest", o.manifest, "exporter manifest.json");
    sub->add_option("--split", o.split, "split name in the manifest");
  };
  auto synth_shape = [&](CLI::App* sub) {
    sub->add_option("--classes", o.classes, "number of classes");
    sub->add_option("--dim", o.dim, "feature dimension");
    sub->add_option("--n-per-class", o.n_per_class, "training rows per class");
    sub->add_option("--val-per-class", o.val_per_class, "validation rows per class");
    sub->add_option("--test-per-class", o.test_per_class, "test rows per class");
    sub->add_option("--mean-norm", o.mean_norm, "norm of every class mean");
    sub->add_option("--sigma2", o.sigma2, "clean variance");
    sub->add_option("--out-sigma2", o.out_sigma2, "outlier variance");
    sub->add_option("--delta-out", o.delta_out, "outlier fraction");
  };

  auto* synth = app.add_subcommand("synth", "write contaminated synthetic train/val/test files");
  common(synth);
  synth_shape(synth);

  auto* corrupt = app.add_subcommand("corrupt", "inject label or open-set noise");
  common(corrupt);
  corrupt->add_option("--layer", o.layers, "feature file (repeatable; same rows are corrupted in each)");
  corrupt->add_option("--noise", o.noise, "uniform, flip or open-set");
  corrupt->add_option("--rate", o.rate, "fraction of rows to corrupt");
  corrupt->add_option("--donor", o.donors, "open-set donor file per layer");

  auto* fit = app.add_subcommand("fit", "fit a generative classifier per layer");
  common(fit);
  inputs(fit);
  mcd_flags(fit);
  fit->add_option("--estimator", o.estimator, "sample, mcd, lts-euclid or tkm");
  fit->add_option("--val-layer", o.val_layers, "validation file per layer");
  fit->add_option("--val-split", o.val_split, "validation split name in the manifest");
  fit->add_option("--val-size", o.val_size, "rows held out for weights when no validation is given");
  fit->add_option("--keep", o.keep, "validation rows kept by the filter");
  fit->add_option("--rate", o.rate, "recorded noise rate");
  fit->add_option("--noise", o.noise, "recorded noise kind");

  auto* predict_cmd = app.add_subcommand("predict", "write posteriors for a feature set");
  common(predict_cmd);
  inputs(predict_cmd);
  predict_cmd->add_option("--model", o.model, "ensemble.json or a fit output directory");

  auto* eval = app.add_subcommand("eval", "accuracy and NLL of a model");
  common(eval);
  inputs(eval);
  eval->add_option("--model", o.model, "ensemble.json or a fit output directory");
  eval->add_option("--noise", o.noise, "noise kind reported in the metrics");
  eval->add_option("--rate", o.rate, "noise rate reported in the metrics");

  auto* theory = app.add_subcommand("theory", "check estimator limits on synthetic data");
  common(theory);
  mcd_flags(theory);
  theory->add_option("--check", o.check, "theorem1, lemma1 or breakdown");
  theory->add_option("--n-grid", o.n_grid, "samples per class (repeatable)");
  theory->add_option("--delta-grid", o.delta_grid, "outlier fractions (repeatable)");
  theory->add_option("--classes", o.classes, "number of classes");
  theory->add_option("--dim", o.dim, "feature dimension");
  theory->add_option("--mean-norm", o.mean_norm, "norm of every class mean");
  theory->add_option("--sigma2", o.sigma2, "clean variance");
  theory->add_option("--out-sigma2", o.out_sigma2, "outlier variance");
  theory->add_option("--delta-out", o.delta_out, "outlier fraction");

  auto* bench = app.add_subcommand("bench", "estimator x contamination accuracy table");
  common(bench);
  synth_shape(bench);
  mcd_flags(bench);
  bench->add_option("--suite", o.suite, "synthetic");
  bench->add_option("--out-mean-norm", o.out_mean_norm, "norm of the shared outlier mean");
  bench->add_option("--delta-grid", o.delta_grid, "outlier fractions (repeatable)");
  bench->add_option("--layer-noise", o.layer_noise, "extra noise variance per layer (repeatable)");
  bench->add_option("--keep", o.keep, "validation rows kept by the filter");

  auto* convert = app.add_subcommand("convert", "convert between csv and rogf by extension");
  common(convert);
  convert->add_option("--in", o.input, "input file")->required();

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = merge_config(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorCategory::kConfig);
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub != convert) {
      write_json(fs::path(o.out) / "config.json", resolved_config(*sub));
    }
    if (sub == synth) cmd_synth(o);
    if (sub == corrupt) cmd_corrupt(o);
    if (sub == fit) cmd_fit(o);
    if (sub == predict_cmd) cmd_predict(o);
    if (sub == eval) cmd_eval(o);
    if (sub == theory) cmd_theory(o);
    if (sub == bench) cmd_bench(o);
    if (sub == convert) cmd_convert(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorCategory::kData);
  }
  return 0;
}

}  // namespace rog::cli

int main(int argc, char** argv) { return rog::cli::run(argc, argv); }
