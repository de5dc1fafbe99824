#include "gazeattn/cli.hpp"

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gazeattn/assembly.hpp"
#include "gazeattn/checkpoint.hpp"
#include "gazeattn/json_io.hpp"
#include "gazeattn/report.hpp"
#include "gazeattn/runtime.hpp"
#include "gazeattn/splits.hpp"
#include "gazeattn/synthetic.hpp"

namespace gazeattn {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

/// Ties CLI flags to config-file keys with flag > file > default precedence,
/// and serializes the fully resolved configuration back out.
class ConfigBinder {
 public:
  template <class T>
  void bind(CLI::Option* opt, std::string key, T* field) {
    entries_.push_back(
        {std::move(key), opt,
         [field](const json& j) { *field = j.get<T>(); },
         [field]() { return json(*field); }});
  }

  void apply_file(const fs::path& config_path) {
    std::ifstream in(config_path);
    if (!in)
      throw ConfigError("config", "cannot open " + config_path.string());
    json file_cfg;
    try {
      in >> file_cfg;
    } catch (const json::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    if (!file_cfg.is_object())
      throw ConfigError("config", "config file must hold a JSON object");
    for (const auto& [key, value] : file_cfg.items()) {
      if (key == "command") continue;  // echoed metadata, not a setting
      auto* entry = find(key);
      if (!entry) throw ConfigError(key, "unknown key in config file");
      if (entry->opt && entry->opt->count() > 0) continue;  // flag wins
      try {
        entry->set(value);
      } catch (const json::exception&) {
        throw ConfigError(key, "wrong type in config file");
      }
    }
  }

  json resolved(const std::string& command) const {
    json j;
    j["command"] = command;
    for (const auto& e : entries_) j[e.key] = e.get();
    return j;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> set;
    std::function<json()> get;
  };

  Entry* find(const std::string& key) {
    for (auto& e : entries_)
      if (e.key == key) return &e;
    return nullptr;
  }

  std::vector<Entry> entries_;
};

void require_input(const std::string& key, const std::string& path) {
  if (path.empty()) throw ConfigError(key, "required path is missing");
  if (!fs::exists(path))
    throw ConfigError(key, "path does not exist: " + path);
}

void echo_config(const ConfigBinder& binder, const std::string& command,
                 const fs::path& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream out(out_dir / "resolved_config.json", std::ios::trunc);
  if (!out)
    throw IoError("cannot write resolved config under " + out_dir.string());
  out << binder.resolved(command).dump(2) << "\n";
}

// Common knobs shared by the training subcommands.
struct TrainFlags {
  double lr = 0.0;  // defaults filled per stage before binding
  int batch = 0;
  int max_epochs = 0;
  int plateau_patience = 0;
  double plateau_factor = 0.0;
  int early_patience = 0;
  double min_delta = 0.0;

  void bind(CLI::App* cmd, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--lr", lr, "learning rate"), "lr", &lr);
    binder.bind(cmd->add_option("--batch", batch, "batch size"), "batch",
                &batch);
    binder.bind(cmd->add_option("--max-epochs", max_epochs, "epoch cap"),
                "max_epochs", &max_epochs);
    binder.bind(cmd->add_option("--plateau-patience", plateau_patience,
                                "epochs without improvement before lr drops"),
                "plateau_patience", &plateau_patience);
    binder.bind(cmd->add_option("--plateau-factor", plateau_factor,
                                "lr multiplier on plateau"),
                "plateau_factor", &plateau_factor);
    binder.bind(cmd->add_option("--early-patience", early_patience,
                                "epochs without improvement before stopping"),
                "early_patience", &early_patience);
    binder.bind(cmd->add_option("--min-delta", min_delta,
                                "required improvement margin"),
                "min_delta", &min_delta);
  }

  void fill_from(const TrainConfig& defaults) {
    lr = defaults.learning_rate;
    batch = defaults.batch_size;
    max_epochs = defaults.max_epochs;
    plateau_patience = defaults.plateau_patience;
    plateau_factor = defaults.plateau_factor;
    early_patience = defaults.early_stop_patience;
    min_delta = defaults.min_delta;
  }

  TrainConfig apply_to(TrainConfig cfg, std::uint64_t seed) const {
    cfg.learning_rate = lr;
    cfg.batch_size = batch;
    cfg.max_epochs = max_epochs;
    cfg.plateau_patience = plateau_patience;
    cfg.plateau_factor = plateau_factor;
    cfg.early_stop_patience = early_patience;
    cfg.min_delta = min_delta;
    cfg.seed = seed;
    return cfg;
  }
};

BackboneConfig backbone_from_flags(const std::string& arch_name, int side) {
  const auto arch = arch_from_string(arch_name);
  if (!arch)
    throw UnknownArchitecture("unknown architecture id \"" + arch_name +
                              "\"");
  BackboneConfig cfg = *arch == Arch::Tiny ? BackboneConfig::tiny()
                                           : BackboneConfig::vgg16();
  if (side > 0) cfg.input_side = side;
  return cfg;
}

std::unique_ptr<FaceDetector> make_detector(const std::string& name) {
  if (name == "full-frame") return std::make_unique<FullFrameDetector>();
  if (name == "blob") return std::make_unique<BrightBlobDetector>();
  throw ConfigError("detector", "unknown detector \"" + name +
                                    "\" (expected full-frame or blob)");
}

void save_history_json(const ModelCheckpoint& ckpt, const fs::path& path) {
  json j = json::array();
  for (const auto& e : ckpt.history) {
    json row;
    to_json(row, e);
    j.push_back(row);
  }
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns artifacts under --out and echoes its
// resolved configuration for reproducibility.
// ---------------------------------------------------------------------------

struct SynthCmd {
  int subjects = 8;
  int per_class = 30;
  int gaze_per_subject = 250;
  std::uint64_t seed = 0;
  int image_side = 64;
  double disc_radius = 7.0;
  double pitch_table = -0.2;
  double yaw_cobot = 0.3;
  double pitch_range = 0.6;
  double yaw_range = 0.6;
  double boundary_margin = 0.05;
  std::string out;
  std::string config;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "synth-data", "generate the synthetic gaze/attention datasets");
    binder.bind(cmd->add_option("--subjects", subjects, "subject count"),
                "subjects", &subjects);
    binder.bind(cmd->add_option("--per-class", per_class,
                                "attention images per class per subject"),
                "per_class", &per_class);
    binder.bind(cmd->add_option("--gaze-per-subject", gaze_per_subject,
                                "gaze images per subject"),
                "gaze_per_subject", &gaze_per_subject);
    binder.bind(cmd->add_option("--seed", seed, "rng seed"), "seed", &seed);
    binder.bind(cmd->add_option("--image-side", image_side,
                                "rendered image side in pixels"),
                "image_side", &image_side);
    binder.bind(cmd->add_option("--disc-radius", disc_radius, "disc radius"),
                "disc_radius", &disc_radius);
    binder.bind(cmd->add_option("--pitch-table", pitch_table,
                                "Table zone threshold (rad)"),
                "pitch_table", &pitch_table);
    binder.bind(cmd->add_option("--yaw-cobot", yaw_cobot,
                                "Cobot zone threshold (rad)"),
                "yaw_cobot", &yaw_cobot);
    binder.bind(cmd->add_option("--pitch-range", pitch_range,
                                "gaze pitch sampling range (rad)"),
                "pitch_range", &pitch_range);
    binder.bind(cmd->add_option("--yaw-range", yaw_range,
                                "gaze yaw sampling range (rad)"),
                "yaw_range", &yaw_range);
    binder.bind(cmd->add_option("--boundary-margin", boundary_margin,
                                "margin kept from zone thresholds (rad)"),
                "boundary_margin", &boundary_margin);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    if (out.empty()) throw ConfigError("out", "output directory is required");

    SyntheticConfig cfg;
    cfg.subjects = subjects;
    cfg.per_class = per_class;
    cfg.gaze_per_subject = gaze_per_subject;
    cfg.seed = seed;
    cfg.image_side = image_side;
    cfg.disc_radius = disc_radius;
    cfg.geometry = ZoneGeometry{pitch_table, yaw_cobot, pitch_range,
                                yaw_range, boundary_margin};
    cfg.out_dir = out;
    echo_config(binder, "synth-data", out);
    const auto result = generate_synthetic(cfg);
    std::cout << "wrote " << result.gaze_images << " gaze images and "
              << result.attention_images << " attention images under " << out
              << "\n";
  }
};

struct TrainGazeCmd {
  std::string manifest;
  std::string backbone = "tiny";
  int side = 0;
  int val_count = 2;
  std::string val_subjects;  // comma-separated override
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  TrainFlags flags;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand("train-gaze",
                                   "train the gaze-direction regressor");
    flags.fill_from(TrainConfig::gaze_defaults());
    binder.bind(cmd->add_option("--manifest", manifest, "gaze manifest"),
                "manifest", &manifest);
    binder.bind(cmd->add_option("--backbone", backbone, "tiny | vgg16"),
                "backbone", &backbone);
    binder.bind(cmd->add_option("--side", side,
                                "input side (0 = architecture default)"),
                "side", &side);
    binder.bind(cmd->add_option("--val-count", val_count,
                                "subjects reserved for validation"),
                "val_count", &val_count);
    binder.bind(cmd->add_option("--val-subjects", val_subjects,
                                "comma-separated validation subject ids"),
                "val_subjects", &val_subjects);
    binder.bind(cmd->add_option("--seed", seed, "rng seed"), "seed", &seed);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    flags.bind(cmd, binder);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  std::set<std::string> pick_validation(const GazeManifest& m) const {
    if (!val_subjects.empty()) {
      std::set<std::string> ids;
      std::stringstream ss(val_subjects);
      std::string id;
      while (std::getline(ss, id, ','))
        if (!id.empty()) ids.insert(id);
      if (ids.empty()) throw ConfigError("val_subjects", "no ids given");
      return ids;
    }
    // Default: the last val_count subjects in sorted order are reserved.
    const auto subs = subjects_of(m);
    if (val_count < 1 || val_count >= static_cast<int>(subs.size()))
      throw ConfigError("val_count",
                        "must leave at least one training subject");
    return {subs.end() - val_count, subs.end()};
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    require_input("manifest", manifest);
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "train-gaze", out);

    const auto loaded = load_gaze_manifest(manifest);
    const auto split = split_by_subject(loaded, pick_validation(loaded));

    BackboneConfig bcfg = backbone_from_flags(backbone, side);
    GazeModel model = build_gaze_model(bcfg, seed);
    TrainConfig tcfg = flags.apply_to(TrainConfig::gaze_defaults(), seed);

    PrepareOptions prep;
    prep.side = bcfg.input_side;
    const auto train_samples = prepare_gaze_samples(split.train, prep);
    const auto val_samples = prepare_gaze_samples(split.val, prep);

    const auto ckpt = train_gaze(model, train_samples, val_samples, tcfg);
    save_checkpoint(ckpt, fs::path(out) / "gaze.ckpt");
    save_history_json(ckpt, fs::path(out) / "history.json");
    const auto& last = ckpt.history.back();
    std::cout << "gaze model: " << ckpt.history.size()
              << " epochs, best val MAE "
              << *std::min_element(
                     ckpt.history.begin(), ckpt.history.end(),
                     [](const EpochStats& a, const EpochStats& b) {
                       return a.val_loss < b.val_loss;
                     })->val_loss
              << " rad (last " << *last.val_loss << ")\n";
  }
};

struct TransferTrainCmd {
  std::string gaze_ckpt;
  std::string manifest;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
  TrainFlags flags;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "transfer-train",
        "transfer a gaze checkpoint into an attention classifier");
    flags.fill_from(TrainConfig::attention_defaults());
    binder.bind(cmd->add_option("--gaze-ckpt", gaze_ckpt, "gaze checkpoint"),
                "gaze_ckpt", &gaze_ckpt);
    binder.bind(
        cmd->add_option("--manifest", manifest, "attention manifest"),
        "manifest", &manifest);
    binder.bind(cmd->add_option("--seed", seed, "rng seed"), "seed", &seed);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    flags.bind(cmd, binder);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    require_input("gaze_ckpt", gaze_ckpt);
    require_input("manifest", manifest);
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "transfer-train", out);

    const auto source = load_checkpoint(gaze_ckpt);
    AttentionModel model =
        transfer_to_attention(source, Rng::derive(seed, 1));
    TrainConfig tcfg = flags.apply_to(TrainConfig::attention_defaults(), seed);

    PrepareOptions prep;
    prep.side = model.config.input_side;
    const auto prepared = prepare_attention_samples(
        load_attention_manifest(manifest), prep);

    const auto ckpt = train_attention(model, prepared.samples, tcfg);
    save_checkpoint(ckpt, fs::path(out) / "attention.ckpt");
    save_history_json(ckpt, fs::path(out) / "history.json");
    std::cout << "attention model: " << ckpt.history.size()
              << " epochs, final train loss "
              << ckpt.history.back().train_loss << "\n";
  }
};

struct LosoCmd {
  std::string manifest;
  std::string gaze_ckpt;
  std::string backbone = "tiny";
  int side = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::string config;
  TrainFlags flags;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "loso", "leave-one-subject-out evaluation of the transfer pipeline");
    flags.fill_from(TrainConfig::attention_defaults());
    binder.bind(
        cmd->add_option("--manifest", manifest, "attention manifest"),
        "manifest", &manifest);
    binder.bind(cmd->add_option("--gaze-ckpt", gaze_ckpt,
                                "gaze checkpoint to transfer from "
                                "(random backbone when omitted)"),
                "gaze_ckpt", &gaze_ckpt);
    binder.bind(cmd->add_option("--backbone", backbone,
                                "tiny | vgg16 (no --gaze-ckpt only)"),
                "backbone", &backbone);
    binder.bind(cmd->add_option("--side", side,
                                "input side (0 = architecture default)"),
                "side", &side);
    binder.bind(cmd->add_option("--seed", seed, "rng seed"), "seed", &seed);
    binder.bind(cmd->add_option("--jobs", jobs, "parallel fold training"),
                "jobs", &jobs);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    flags.bind(cmd, binder);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    require_input("manifest", manifest);
    if (!gaze_ckpt.empty()) require_input("gaze_ckpt", gaze_ckpt);
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "loso", out);

    ModelCheckpoint source;
    if (!gaze_ckpt.empty()) {
      source = load_checkpoint(gaze_ckpt);
    } else {
      const BackboneConfig bcfg = backbone_from_flags(backbone, side);
      const GazeModel fresh = build_gaze_model(bcfg, seed);
      TrainConfig tcfg = TrainConfig::gaze_defaults();
      tcfg.seed = seed;
      source = checkpoint_from(fresh, tcfg, {});
    }

    const auto loaded = load_attention_manifest(manifest);
    ImageCache cache;
    PrepareOptions prep;
    prep.side = source.backbone.input_side;
    prep.cache = &cache;

    const TrainConfig base_cfg =
        flags.apply_to(TrainConfig::attention_defaults(), seed);
    const auto all_subjects = subjects_of(loaded);

    // Trains a fold and saves its checkpoint, keyed by the held-out
    // subject (the one missing from the fold's training manifest).
    AttentionTrainer trainer = [&](const AttentionManifest& train_manifest,
                                   std::uint64_t fold_seed) {
      AttentionModel model = transfer_to_attention(source, fold_seed);
      TrainConfig tcfg = base_cfg;
      tcfg.seed = fold_seed;
      const auto prepared = prepare_attention_samples(train_manifest, prep);
      const auto ckpt = train_attention(model, prepared.samples, tcfg);

      const auto train_subjects = subjects_of(train_manifest);
      std::string held_out = "unknown";
      for (const auto& s : all_subjects)
        if (!std::binary_search(train_subjects.begin(), train_subjects.end(),
                                s)) {
          held_out = s;
          break;
        }
      save_checkpoint(ckpt, fs::path(out) / ("fold_" + held_out + ".ckpt"));
      return model;
    };

    LosoRunOptions opts;
    opts.seed = seed;
    opts.jobs = jobs;
    opts.prepare = prep;
    const auto report = run_loso(loaded, trainer, opts);

    render_report(report, out);
    std::cout << report_table_text(report);
  }
};

struct EvalAssemblyCmd {
  std::string models;  // directory of *.ckpt or comma-separated list
  std::string annotations;
  std::string videos_root;
  std::string test_manifest;
  std::string detector = "blob";
  double crop_margin = 0.1;
  std::string out;
  std::string config;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "eval-assembly",
        "build an assembly test set and evaluate attention models on it");
    binder.bind(cmd->add_option("--models", models,
                                "checkpoint directory or comma list"),
                "models", &models);
    binder.bind(cmd->add_option("--annotations", annotations,
                                "segment annotation manifest"),
                "annotations", &annotations);
    binder.bind(cmd->add_option("--videos-root", videos_root,
                                "directory video locators resolve against"),
                "videos_root", &videos_root);
    binder.bind(cmd->add_option("--test-manifest", test_manifest,
                                "prebuilt attention test manifest"),
                "test_manifest", &test_manifest);
    binder.bind(cmd->add_option("--detector", detector,
                                "face detector: blob | full-frame"),
                "detector", &detector);
    binder.bind(cmd->add_option("--crop-margin", crop_margin, "crop margin"),
                "crop_margin", &crop_margin);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  std::vector<fs::path> checkpoint_paths() const {
    std::vector<fs::path> paths;
    if (fs::is_directory(models)) {
      for (const auto& e : fs::directory_iterator(models))
        if (e.path().extension() == ".ckpt") paths.push_back(e.path());
      std::sort(paths.begin(), paths.end());
    } else {
      std::stringstream ss(models);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) paths.emplace_back(item);
    }
    if (paths.empty())
      throw ConfigError("models", "no checkpoints found in \"" + models +
                                      "\"");
    return paths;
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    if (models.empty()) throw ConfigError("models", "required");
    if (annotations.empty() == test_manifest.empty())
      throw ConfigError(
          "annotations",
          "give exactly one of --annotations or --test-manifest");
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "eval-assembly", out);

    const auto det = make_detector(detector);

    AttentionManifest test;
    if (!annotations.empty()) {
      require_input("annotations", annotations);
      require_input("videos_root", videos_root);
      const auto segs = load_segment_manifest(annotations);
      AssemblyBuildOptions build;
      build.out_dir = fs::path(out) / "test_set";
      build.detector = det.get();
      build.crop_margin = crop_margin;
      const fs::path root = videos_root;
      const auto result = build_assembly_test_set(
          segs.records,
          [&](const fs::path& locator) {
            return open_frame_source(root / locator);
          },
          build);
      write_rejection_csv(fs::path(out) / "rejections.csv",
                          result.rejections);
      save_manifest(fs::path(out) / "test_set" / "test.jsonl",
                    result.manifest);
      test = result.manifest;
      std::cout << "test set: " << test.records.size() << " images, "
                << result.rejections.size() << " rejected\n";
      if (test.records.empty()) {
        std::cout << "nothing to evaluate\n";
        return;
      }
    } else {
      require_input("test_manifest", test_manifest);
      test = load_attention_manifest(test_manifest);
    }

    std::vector<AttentionModel> loaded;
    for (const auto& p : checkpoint_paths())
      loaded.push_back(attention_model_from(load_checkpoint(p)));

    PrepareOptions prep;
    prep.side = loaded.front().config.input_side;
    prep.crop_margin = crop_margin;
    // Crops were already cut while building; precomputed boxes otherwise.
    const auto prepared = prepare_attention_samples(test, prep);
    if (prepared.samples.empty())
      throw EmptyDataset("no evaluable samples in the test set");

    const auto reports = evaluate_models(loaded, prepared.samples);
    const auto aggregated = aggregate_folds(reports);
    render_report(aggregated, out);
    std::cout << report_table_text(aggregated);
  }
};

struct InferCmd {
  std::string ckpt;
  std::string frames;
  std::string replay;
  std::string detector = "full-frame";
  int window = 7;
  double dwell = 2.0;
  double fps = 25.0;
  std::string out;
  std::string config;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "infer", "streaming inference + cobot adaptation commands");
    binder.bind(cmd->add_option("--ckpt", ckpt, "attention checkpoint"),
                "ckpt", &ckpt);
    binder.bind(cmd->add_option("--frames", frames,
                                "video file or directory of frames"),
                "frames", &frames);
    binder.bind(cmd->add_option("--replay", replay,
                                "event log to replay instead of frames"),
                "replay", &replay);
    binder.bind(cmd->add_option("--detector", detector,
                                "face detector: blob | full-frame"),
                "detector", &detector);
    binder.bind(cmd->add_option("--window", window,
                                "majority smoothing window (frames)"),
                "window", &window);
    binder.bind(cmd->add_option("--dwell", dwell,
                                "hysteresis dwell before switching (s)"),
                "dwell", &dwell);
    binder.bind(cmd->add_option("--fps", fps,
                                "fallback fps for frame directories"),
                "fps", &fps);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    if (frames.empty() == replay.empty())
      throw ConfigError("frames", "give exactly one of --frames or --replay");
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "infer", out);

    std::vector<AttentionEvent> events;
    if (!replay.empty()) {
      require_input("replay", replay);
      events = read_event_log(replay);
    } else {
      require_input("frames", frames);
      require_input("ckpt", ckpt);
      const auto model = attention_model_from(load_checkpoint(ckpt));
      const auto det = make_detector(detector);
      auto source = open_frame_source(frames, fps);
      events = stream_classify(*source, model, *det);
    }

    const auto states = smooth_majority(events, window);
    const auto commands = adapt_policy(events, states, dwell);
    write_event_log(fs::path(out) / "events.jsonl", events);
    write_command_log(fs::path(out) / "commands.jsonl", events, commands);
    std::cout << events.size() << " events -> " << commands.size()
              << " commands\n";
  }
};

struct ReportCmd {
  std::string from;
  std::string out;
  std::string config;
  ConfigBinder binder;

  void setup(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "report", "re-render report files from a report.json");
    binder.bind(cmd->add_option("--from", from, "report.json to render"),
                "from", &from);
    binder.bind(cmd->add_option("--out", out, "output directory"), "out",
                &out);
    cmd->add_option("--config", config, "JSON config file");
    cmd->callback([this] { run(); });
  }

  void run() {
    if (!config.empty()) binder.apply_file(config);
    require_input("from", from);
    if (out.empty()) throw ConfigError("out", "output directory is required");
    echo_config(binder, "report", out);
    render_report(load_report_json(from), out);
    std::cout << report_table_text(load_report_json(from));
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"gaze-based attention recognition pipeline"};
  app.require_subcommand(1);

  SynthCmd synth;
  TrainGazeCmd train_gaze_cmd;
  TransferTrainCmd transfer;
  LosoCmd loso;
  EvalAssemblyCmd eval_assembly;
  InferCmd infer;
  ReportCmd report;

  synth.setup(app);
  train_gaze_cmd.setup(app);
  transfer.setup(app);
  loso.setup(app);
  eval_assembly.setup(app);
  infer.setup(app);
  report.setup(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownCommand& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnknownArchitecture& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("gazeattn");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace gazeattn
