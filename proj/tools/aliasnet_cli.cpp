// aliasnet command-line driver. Talks to the engine only through the C API.

#include <aliasnet/aliasnet.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitUsage = 2;

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

int exit_code_for(an_status s) {
  switch (s) {
    case AN_ERR_ARGUMENT:
    case AN_ERR_FORMAT:
    case AN_ERR_IO:
      return kExitUsage;
    default:
      return kExitCompute;
  }
}

void check(an_status s, const std::string& context) {
  if (s == AN_OK) return;
  throw Failure(exit_code_for(s), context + ": " + an_last_error() + " [" + an_status_name(s) + "]");
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Mask = std::unique_ptr<an_mask, Deleter<an_mask, an_mask_free>>;
using Sequence = std::unique_ptr<an_sequence, Deleter<an_sequence, an_sequence_free>>;
using KSpace = std::unique_ptr<an_kspace, Deleter<an_kspace, an_kspace_free>>;
using TrainSet = std::unique_ptr<an_trainset, Deleter<an_trainset, an_trainset_free>>;
using Model = std::unique_ptr<an_model, Deleter<an_model, an_model_free>>;
using TrainLog = std::unique_ptr<an_train_log, Deleter<an_train_log, an_train_log_free>>;
using Recon = std::unique_ptr<an_recon, Deleter<an_recon, an_recon_free>>;
using MetricTable = std::unique_ptr<an_metric_table, Deleter<an_metric_table, an_metric_table_free>>;

template <class Handle, class Raw = typename Handle::element_type>
Handle load(an_status (*fn)(const char*, Raw**), const std::string& path) {
  Raw* raw = nullptr;
  check(fn(path.c_str(), &raw), "cannot load " + path);
  return Handle(raw);
}

std::string num(double v) {
  char buf[64];
  an_format_number(v, buf, sizeof buf);
  return buf;
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure(kExitUsage, "cannot create directory " + dir.string() + ": " + ec.message());
}

// 8-bit binary graymap, [0, 1] mapped linearly onto 0..255.
void write_pgm(const fs::path& path, const std::vector<double>& pixels, uint32_t n) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure(kExitUsage, "cannot write " + path.string());
  out << "P5\n" << n << ' ' << n << "\n255\n";
  for (double v : pixels) {
    const double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0))));
  }
  if (!out) throw Failure(kExitUsage, "write failed for " + path.string());
}

std::vector<double> sequence_frame(const an_sequence* seq, size_t t) {
  const uint32_t n = an_sequence_size(seq);
  std::vector<double> px(static_cast<size_t>(n) * n);
  check(an_sequence_frame(seq, t, px.data(), px.size()), "frame " + std::to_string(t));
  return px;
}

std::vector<double> recon_frame(const an_recon* recon, size_t t, uint32_t n) {
  std::vector<double> px(static_cast<size_t>(n) * n);
  check(an_recon_frame(recon, t, px.data(), px.size()), "reconstructed frame " + std::to_string(t));
  return px;
}

uint32_t side_of(size_t dim) {
  const auto n = static_cast<uint32_t>(std::lround(std::sqrt(static_cast<double>(dim))));
  if (static_cast<size_t>(n) * n != dim)
    throw Failure(kExitCompute, "training data dimension " + std::to_string(dim) + " is not a square image");
  return n;
}

std::vector<uint32_t> model_dims(const an_model* model) {
  size_t len = 0;
  check(an_model_dims(model, nullptr, 0, &len), "model dims");
  std::vector<uint32_t> dims(len);
  check(an_model_dims(model, dims.data(), dims.size(), &len), "model dims");
  return dims;
}

std::string join(const std::vector<uint32_t>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

std::vector<uint32_t> parse_dims(const std::string& text) {
  std::vector<uint32_t> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      dims.push_back(static_cast<uint32_t>(v));
    } catch (const std::exception&) {
      throw Failure(kExitUsage, "invalid --dims entry \"" + item + "\"");
    }
  }
  if (dims.size() < 2) throw Failure(kExitUsage, "--dims needs at least two sizes, e.g. 1024,256");
  return dims;
}

// ---- shared option groups -------------------------------------------------

struct SeedOption {
  std::optional<uint64_t> flag;
  uint64_t resolve() const {
    if (flag) return *flag;
    if (const char* env = std::getenv("ALIASNET_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') throw Failure(kExitUsage, std::string("invalid ALIASNET_SEED \"") + env + "\"");
      return v;
    }
    return 0;
  }
};

struct IstaOptions {
  an_ista_config cfg{};
  IstaOptions() { an_ista_config_default(&cfg); }
  void add(CLI::App* app) {
    app->add_option("--ista-lambda", cfg.lambda, "Differential CS l1 weight")->capture_default_str();
    app->add_option("--ista-iters", cfg.max_iters, "Differential CS iteration budget")->capture_default_str();
    app->add_option("--ista-tol", cfg.tol, "relative objective change that stops ISTA")->capture_default_str();
    app->add_option("--ista-step", cfg.step, "ISTA step size in (0, 1]")->capture_default_str();
  }
};

// ---- gen-data --------------------------------------------------------------

struct GenData {
  std::string out = "data";
  uint32_t n = 32;
  size_t frames = 64;
  size_t sequences = 10;
  size_t test_frames = 48;
  size_t period = 24;
  double motion = 0.15;
  double noise = 0.0;
  std::string mask = "radial:8";
  SeedOption seed;

  void add(CLI::App* app) {
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_option("--n", n, "image side")->capture_default_str();
    app->add_option("--frames", frames, "frames per training sequence")->capture_default_str();
    app->add_option("--sequences", sequences, "number of training sequences")->capture_default_str();
    app->add_option("--test-frames", test_frames, "frames in the held-out sequence")->capture_default_str();
    app->add_option("--period", period, "frames per motion cycle")->capture_default_str();
    app->add_option("--motion", motion, "motion amplitude in [0, 0.3]")->capture_default_str();
    app->add_option("--noise", noise, "k-space noise standard deviation")->capture_default_str();
    app->add_option("--mask", mask, "full | radial:L | uniform:F | vd:FRACTION:DECAY")->capture_default_str();
    app->add_option("--seed", seed.flag, "seed (falls back to ALIASNET_SEED, then 0)");
  }

  int run() const {
    if (sequences < 1) throw Failure(kExitUsage, "--sequences must be >= 1");
    const uint64_t s = seed.resolve();
    an_mask* m = nullptr;
    check(an_mask_from_spec(mask.c_str(), n, s, &m), "mask " + mask);
    Mask mask_h(m);

    std::vector<Sequence> train;
    for (size_t k = 0; k < sequences; ++k) {
      an_sequence* seq = nullptr;
      check(an_sequence_dynamic_phantom(n, frames, period, motion, s + 1 + k, &seq), "training sequence");
      train.emplace_back(seq);
    }
    // The held-out subject uses a seed outside the training range.
    an_sequence* test = nullptr;
    check(an_sequence_dynamic_phantom(n, test_frames, period, motion, s + 1 + sequences + 1000, &test),
          "test sequence");
    Sequence test_h(test);

    std::vector<const an_sequence*> parts;
    for (const auto& q : train) parts.push_back(q.get());
    an_trainset* set = nullptr;
    check(an_trainset_build(parts.data(), parts.size(), mask_h.get(), noise, s, &set), "training set");
    TrainSet set_h(set);
    an_sequence* joined = nullptr;
    check(an_sequence_concat(parts.data(), parts.size(), &joined), "concatenate");
    Sequence joined_h(joined);
    an_kspace* ks = nullptr;
    check(an_acquire(test_h.get(), mask_h.get(), noise, s ^ 0x5EED7E57ULL, &ks), "acquire test k-space");
    KSpace ks_h(ks);

    const fs::path dir(out);
    ensure_dir(dir);
    check(an_mask_save(mask_h.get(), (dir / "mask.mrt").c_str()), "save mask");
    check(an_sequence_save(joined_h.get(), (dir / "train_frames.mrt").c_str()), "save training frames");
    check(an_trainset_save(set_h.get(), (dir / "train_set.mrt").c_str()), "save training set");
    check(an_sequence_save(test_h.get(), (dir / "test_frames.mrt").c_str()), "save test frames");
    check(an_kspace_save(ks_h.get(), (dir / "test_kspace.mrt").c_str()), "save test k-space");

    std::ofstream meta(dir / "meta.txt");
    meta << "n=" << n << "\nmask=" << mask << "\nmask_fraction=" << num(an_mask_fraction(mask_h.get()))
         << "\nmask_count=" << an_mask_count(mask_h.get()) << "\nsequences=" << sequences << "\nframes=" << frames
         << "\ntest_frames=" << test_frames << "\nperiod=" << period << "\nmotion=" << num(motion)
         << "\nnoise=" << num(noise) << "\nseed=" << s << "\ntrain_pairs=" << an_trainset_columns(set_h.get())
         << "\n";
    if (!meta) throw Failure(kExitUsage, "cannot write " + (dir / "meta.txt").string());

    std::cout << "wrote " << dir.string() << ": " << an_trainset_columns(set_h.get()) << " training pairs, "
              << test_frames << " test frames, mask " << mask << " (fraction " << num(an_mask_fraction(mask_h.get()))
              << ")\n";
    return kExitOk;
  }
};

// ---- train -------------------------------------------------------------

struct Train {
  std::string data = "data/train_set.mrt";
  std::string out = "model.sdae";
  std::string report_dir;
  uint32_t depth = 3;
  std::string dims;
  an_train_config cfg{};
  SeedOption seed;

  Train() { an_train_config_default(&cfg); }

  void add(CLI::App* app) {
    app->add_option("--data", data, "training set file")->capture_default_str();
    app->add_option("--out", out, "model file to write")->capture_default_str();
    app->add_option("--report-dir", report_dir, "directory for per-layer cost CSVs (default: next to the model)");
    app->add_option("--depth", depth, "number of hidden layers, 1..4")->capture_default_str();
    app->add_option("--dims", dims, "explicit sizes d,h1,..,hL (overrides --depth)");
    app->add_option("--epochs", cfg.epochs)->capture_default_str();
    app->add_option("--lr", cfg.learning_rate, "learning rate")->capture_default_str();
    app->add_option("--momentum", cfg.momentum)->capture_default_str();
    app->add_option("--batch", cfg.batch_size, "mini-batch size")->capture_default_str();
    app->add_option("--lambda", cfg.lambda_sparse, "sparsity weight on the deepest layer")->capture_default_str();
    app->add_option("--eps", cfg.smooth_eps, "l1 smoothing")->capture_default_str();
    app->add_option("--val-fraction", cfg.validation_fraction)->capture_default_str();
    app->add_option("--seed", seed.flag, "seed (falls back to ALIASNET_SEED, then 0)");
  }

  int run() {
    cfg.seed = seed.resolve();
    auto set = load<TrainSet>(an_trainset_load, data);
    const uint32_t n = side_of(an_trainset_dim(set.get()));
    std::vector<uint32_t> arch;
    if (!dims.empty()) {
      arch = parse_dims(dims);
    } else {
      if (depth < 1 || depth > 4) throw Failure(kExitUsage, "--depth must be in 1..4");
      size_t len = 0;
      arch.resize(depth + 1);
      check(an_default_dims(n, depth, arch.data(), arch.size(), &len), "architecture");
    }
    std::cout << "training dims [" << join(arch) << "] on " << an_trainset_columns(set.get()) << " pairs\n";

    an_model* model = nullptr;
    an_train_log* log = nullptr;
    check(an_model_train(set.get(), arch.data(), arch.size(), &cfg, &model, &log), "train");
    Model model_h(model);
    TrainLog log_h(log);

    const fs::path model_path(out);
    ensure_dir(model_path.parent_path());
    check(an_model_save(model_h.get(), out.c_str()), "save model");
    const fs::path rdir = report_dir.empty() ? model_path.parent_path() : fs::path(report_dir);
    ensure_dir(rdir);
    const std::string stem = model_path.stem().string();
    for (size_t l = 0; l < an_train_log_layers(log_h.get()); ++l) {
      const fs::path csv = rdir / (stem + "_layer" + std::to_string(l + 1) + ".csv");
      check(an_train_log_write_csv(log_h.get(), l, csv.c_str()), "write report");
      const size_t epochs = an_train_log_epochs(log_h.get(), l);
      double first = 0, last = 0, val = 0;
      check(an_train_log_cost(log_h.get(), l, 0, &first, &val), "report");
      check(an_train_log_cost(log_h.get(), l, epochs - 1, &last, &val), "report");
      std::cout << "layer " << l + 1 << ": cost " << num(first) << " -> " << num(last) << " (val " << num(val)
                << "), report " << csv.string() << "\n";
    }
    std::cout << "wrote " << out << "\n";
    return kExitOk;
  }
};

// ---- reconstruct ---------------------------------------------------------

Model load_model_for(const std::string& path, an_method method, uint32_t n) {
  if (method != AN_METHOD_SDAE) return Model(nullptr);
  if (path.empty()) throw Failure(kExitUsage, "method sdae needs --model");
  auto model = load<Model>(an_model_load, path);
  const auto dims = model_dims(model.get());
  if (dims.front() != static_cast<size_t>(n) * n)
    throw Failure(kExitCompute, "model " + path + " expects " + std::to_string(dims.front()) +
                                    " pixels but the frames are " + std::to_string(n) + "x" + std::to_string(n) +
                                    " (" + std::to_string(static_cast<size_t>(n) * n) + ")");
  return model;
}

an_method method_of(const std::string& name) {
  an_method m{};
  check(an_method_parse(name.c_str(), &m), "--method");
  return m;
}

struct Reconstruct {
  std::string kspace = "data/test_kspace.mrt";
  std::string mask = "data/mask.mrt";
  std::string method = "sdae";
  std::string model;
  std::string out = "recon.mrt";
  std::string pgm_dir;
  std::string traces;
  IstaOptions ista;

  void add(CLI::App* app) {
    app->add_option("--kspace", kspace, "k-space frames file")->capture_default_str();
    app->add_option("--mask", mask, "mask file")->capture_default_str();
    app->add_option("--method", method, "zero_filled | diff_cs | sdae")->capture_default_str();
    app->add_option("--model", model, "model file (sdae)");
    app->add_option("--out", out, "reconstructed frames file")->capture_default_str();
    app->add_option("--pgm-dir", pgm_dir, "also write every frame as a graymap here");
    app->add_option("--traces", traces, "write Differential CS objective traces to this CSV");
    ista.add(app);
  }

  int run() {
    auto ks = load<KSpace>(an_kspace_load, kspace);
    auto m = load<Mask>(an_mask_load, mask);
    const an_method meth = method_of(method);
    const uint32_t n = an_kspace_size(ks.get());
    auto mdl = load_model_for(model, meth, n);

    an_recon* r = nullptr;
    check(an_online_reconstruct(ks.get(), m.get(), meth, mdl.get(), &ista.cfg, &r), "reconstruct");
    Recon recon(r);
    an_sequence* imgs = nullptr;
    check(an_recon_images(recon.get(), &imgs), "collect frames");
    Sequence imgs_h(imgs);
    ensure_dir(fs::path(out).parent_path());
    check(an_sequence_save(imgs_h.get(), out.c_str()), "save frames");
    if (!traces.empty()) check(an_recon_write_traces_csv(recon.get(), traces.c_str()), "write traces");
    if (!pgm_dir.empty()) {
      ensure_dir(pgm_dir);
      for (size_t t = 0; t < an_recon_frames(recon.get()); ++t) {
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu.pgm", method.c_str(), t);
        write_pgm(fs::path(pgm_dir) / name, recon_frame(recon.get(), t, n), n);
      }
    }
    double total = 0.0;
    for (size_t t = 0; t < an_recon_frames(recon.get()); ++t) total += an_recon_latency(recon.get(), t);
    std::cout << method << ": " << an_recon_frames(recon.get()) << " frames, mean latency "
              << num(total / static_cast<double>(an_recon_frames(recon.get()))) << " s, wrote " << out << "\n";
    return kExitOk;
  }
};

// ---- compare -------------------------------------------------------------

struct Compare {
  std::string model = "model.sdae";
  std::string truth = "data/test_frames.mrt";
  std::string kspace = "data/test_kspace.mrt";
  std::string mask = "data/mask.mrt";
  std::string out = "results";
  std::string dataset = "phantom";
  std::string image_frames = "0";
  IstaOptions ista;

  void add(CLI::App* app) {
    app->add_option("--model", model, "SDAE model file")->capture_default_str();
    app->add_option("--truth", truth, "clean frames file")->capture_default_str();
    app->add_option("--kspace", kspace, "k-space frames file")->capture_default_str();
    app->add_option("--mask", mask, "mask file")->capture_default_str();
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_option("--dataset", dataset, "dataset label for the CSVs")->capture_default_str();
    app->add_option("--image-frames", image_frames, "comma-separated frames to export as graymaps")
        ->capture_default_str();
    ista.add(app);
  }

  int run() {
    auto ks = load<KSpace>(an_kspace_load, kspace);
    auto m = load<Mask>(an_mask_load, mask);
    auto gt = load<Sequence>(an_sequence_load, truth);
    const uint32_t n = an_kspace_size(ks.get());
    if (an_sequence_size(gt.get()) != n || an_sequence_frames(gt.get()) != an_kspace_frames(ks.get()))
      throw Failure(kExitCompute, "truth " + truth + " and k-space " + kspace + " disagree in size or frame count");
    auto mdl = load_model_for(model, AN_METHOD_SDAE, n);

    an_metric_table* tbl = nullptr;
    check(an_metric_table_create(&tbl), "metric table");
    MetricTable table(tbl);
    const fs::path dir(out);
    const fs::path img_dir = dir / "images";
    ensure_dir(img_dir);

    const auto picks = split_list(image_frames);
    std::vector<size_t> frames_out;
    for (const auto& p : picks) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(p.c_str(), &end, 10);
      if (end == p.c_str() || *end != '\0') throw Failure(kExitUsage, "invalid --image-frames entry \"" + p + "\"");
      frames_out.push_back(static_cast<size_t>(v));
    }
    for (size_t t : frames_out)
      if (t < an_sequence_frames(gt.get()))
        write_pgm(img_dir / ("truth_" + std::to_string(t) + ".pgm"), sequence_frame(gt.get(), t), n);

    for (an_method meth : {AN_METHOD_ZERO_FILLED, AN_METHOD_DIFF_CS, AN_METHOD_SDAE}) {
      const std::string name = an_method_name(meth);
      an_recon* r = nullptr;
      check(an_online_reconstruct(ks.get(), m.get(), meth, meth == AN_METHOD_SDAE ? mdl.get() : nullptr, &ista.cfg,
                                  &r),
            name);
      Recon recon(r);
      check(an_metric_table_add_recon(table.get(), dataset.c_str(), name.c_str(), recon.get(), gt.get()), "score");
      for (size_t t : frames_out) {
        if (t >= an_recon_frames(recon.get())) continue;
        const auto est = recon_frame(recon.get(), t, n);
        const auto ref = sequence_frame(gt.get(), t);
        std::vector<double> diff(est.size());
        // Difference magnified ten times, then clipped by the graymap writer.
        for (size_t i = 0; i < est.size(); ++i) diff[i] = std::min(1.0, 10.0 * std::abs(est[i] - ref[i]));
        write_pgm(img_dir / (name + "_" + std::to_string(t) + ".pgm"), est, n);
        write_pgm(img_dir / (name + "_" + std::to_string(t) + "_diff.pgm"), diff, n);
      }
      double nm = 0, ns = 0, sm = 0, ss = 0;
      check(an_metric_table_summary(table.get(), dataset.c_str(), name.c_str(), &nm, &ns, &sm, &ss), "summary");
      std::cout << name << ": nmse " << num(nm) << " +- " << num(ns) << ", ssim " << num(sm) << " +- " << num(ss)
                << "\n";
    }
    check(an_metric_table_write_csv(table.get(), (dir / "metrics.csv").c_str()), "write metrics");
    check(an_metric_table_write_summary_csv(table.get(), (dir / "summary.csv").c_str()), "write summary");
    std::cout << "wrote " << (dir / "metrics.csv").string() << " and " << (dir / "summary.csv").string() << "\n";
    return kExitOk;
  }
};

// ---- benchmark -----------------------------------------------------------

struct Benchmark {
  std::string kspace;
  std::string mask;
  std::string model;
  std::string dims;
  uint32_t n = 100;
  size_t frames = 10;
  std::string mask_spec = "radial:24";
  std::string methods = "zero_filled,diff_cs,sdae";
  uint32_t warmup = 1;
  uint32_t reps = 3;
  double acquisition_rate = 7.0;
  std::string out = "latency.csv";
  IstaOptions ista;
  SeedOption seed;

  void add(CLI::App* app) {
    app->add_option("--kspace", kspace, "k-space frames file (default: synthesize phantom frames)");
    app->add_option("--mask", mask, "mask file (with --kspace)");
    app->add_option("--model", model, "SDAE model file");
    app->add_option("--dims", dims, "random-weight model with these sizes instead of --model");
    app->add_option("--n", n, "side of synthesized frames")->capture_default_str();
    app->add_option("--frames", frames, "number of synthesized frames")->capture_default_str();
    app->add_option("--mask-spec", mask_spec, "mask for synthesized frames")->capture_default_str();
    app->add_option("--methods", methods, "comma-separated methods to time")->capture_default_str();
    app->add_option("--warmup", warmup, "untimed passes")->capture_default_str();
    app->add_option("--reps", reps, "timed passes")->capture_default_str();
    app->add_option("--acquisition-rate", acquisition_rate, "frames per second the SDAE must beat")
        ->capture_default_str();
    app->add_option("--out", out, "latency CSV")->capture_default_str();
    app->add_option("--seed", seed.flag, "seed (falls back to ALIASNET_SEED, then 0)");
    ista.add(app);
  }

  int run() {
    const uint64_t s = seed.resolve();
    KSpace ks;
    Mask m;
    if (!kspace.empty()) {
      if (mask.empty()) throw Failure(kExitUsage, "--kspace needs --mask");
      ks = load<KSpace>(an_kspace_load, kspace);
      m = load<Mask>(an_mask_load, mask);
    } else {
      an_mask* raw_mask = nullptr;
      check(an_mask_from_spec(mask_spec.c_str(), n, s, &raw_mask), "mask " + mask_spec);
      m.reset(raw_mask);
      an_sequence* seq = nullptr;
      check(an_sequence_dynamic_phantom(n, frames, 24, 0.15, s, &seq), "phantom");
      Sequence seq_h(seq);
      an_kspace* raw_ks = nullptr;
      check(an_acquire(seq_h.get(), m.get(), 0.0, s, &raw_ks), "acquire");
      ks.reset(raw_ks);
    }
    const uint32_t side = an_kspace_size(ks.get());

    Model mdl;
    const auto names = split_list(methods);
    const bool wants_sdae = std::find(names.begin(), names.end(), "sdae") != names.end();
    if (wants_sdae) {
      if (!dims.empty()) {
        const auto d = parse_dims(dims);
        an_model* raw = nullptr;
        check(an_model_random(d.data(), d.size(), s, &raw), "random model");
        mdl.reset(raw);
      } else if (!model.empty()) {
        mdl = load<Model>(an_model_load, model);
      } else {
        size_t len = 0;
        std::vector<uint32_t> d(4);
        check(an_default_dims(side, 3, d.data(), d.size(), &len), "architecture");
        an_model* raw = nullptr;
        check(an_model_random(d.data(), d.size(), s, &raw), "random model");
        mdl.reset(raw);
      }
      const auto d = model_dims(mdl.get());
      if (d.front() != static_cast<size_t>(side) * side)
        throw Failure(kExitCompute, "model expects " + std::to_string(d.front()) + " pixels but frames are " +
                                        std::to_string(side) + "x" + std::to_string(side));
      std::cout << "sdae dims [" << join(d) << "]\n";
    }

    std::ostringstream csv;
    csv << "method,frames,mean_s,std_s,fps\n";
    std::optional<double> sdae_fps;
    for (const auto& name : names) {
      const an_method meth = method_of(name);
      an_latency lat{};
      check(an_benchmark_method(ks.get(), m.get(), meth, meth == AN_METHOD_SDAE ? mdl.get() : nullptr, &ista.cfg,
                                warmup, reps, &lat),
            "benchmark " + name);
      csv << name << ',' << lat.frames << ',' << num(lat.mean_s) << ',' << num(lat.std_s) << ',' << num(lat.fps)
          << '\n';
      std::cout << name << ": " << num(lat.mean_s) << " s/frame, " << num(lat.fps) << " fps\n";
      if (meth == AN_METHOD_SDAE) sdae_fps = lat.fps;
    }
    ensure_dir(fs::path(out).parent_path());
    std::ofstream file(out);
    file << csv.str();
    if (!file) throw Failure(kExitUsage, "cannot write " + out);
    if (sdae_fps) {
      const bool ok = *sdae_fps > acquisition_rate;
      std::cout << (ok ? "PASS" : "FAIL") << ": sdae " << num(*sdae_fps) << " fps vs acquisition rate "
                << num(acquisition_rate) << " fps\n";
    }
    return kExitOk;
  }
};

// ---- mask-preview --------------------------------------------------------

struct MaskPreview {
  std::string mask = "radial:24";
  uint32_t n = 100;
  std::string out = "mask.pgm";
  std::string save;
  SeedOption seed;

  void add(CLI::App* app) {
    app->add_option("--mask", mask, "mask spec")->capture_default_str();
    app->add_option("--n", n, "side")->capture_default_str();
    app->add_option("--out", out, "graymap with k-space centered")->capture_default_str();
    app->add_option("--save", save, "also store the mask file here");
    app->add_option("--seed", seed.flag, "seed (falls back to ALIASNET_SEED, then 0)");
  }

  int run() const {
    an_mask* raw = nullptr;
    check(an_mask_from_spec(mask.c_str(), n, seed.resolve(), &raw), "mask " + mask);
    Mask m(raw);
    std::vector<uint8_t> bits(static_cast<size_t>(n) * n);
    check(an_mask_bits(m.get(), bits.data(), bits.size()), "mask bits");
    // Shift DC from the corner to the middle for viewing.
    std::vector<double> px(bits.size());
    for (uint32_t r = 0; r < n; ++r)
      for (uint32_t c = 0; c < n; ++c) px[((r + n / 2) % n) * n + (c + n / 2) % n] = bits[r * n + c];
    ensure_dir(fs::path(out).parent_path());
    write_pgm(out, px, n);
    if (!save.empty()) check(an_mask_save(m.get(), save.c_str()), "save mask");
    std::cout << mask << " at n=" << n << ": " << an_mask_count(m.get()) << " samples, fraction "
              << num(an_mask_fraction(m.get())) << "\n";
    return kExitOk;
  }
};

// --config <file> supplies `key=value` lines that become `--key value`
// arguments placed before the real ones, so the command line wins.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::vector<std::string> from_file;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config" && args[i].rfind("--config=", 0) != 0) {
      out.push_back(args[i]);
      continue;
    }
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Failure(kExitUsage, "--config needs a file");
      path = args[++i];
    } else {
      path = args[i].substr(9);
    }
    std::ifstream in(path);
    if (!in) throw Failure(kExitUsage, "cannot read config " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw Failure(kExitUsage, path + ":" + std::to_string(line_no) + ": expected key=value");
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      if (key.empty()) throw Failure(kExitUsage, path + ":" + std::to_string(line_no) + ": empty key");
      from_file.push_back("--" + key);
      from_file.push_back(trim(line.substr(eq + 1)));
    }
  }
  // Insert file values right after the subcommand name.
  if (!from_file.empty()) {
    if (out.empty() || out.front().rfind("-", 0) == 0)
      throw Failure(kExitUsage, "--config must follow a subcommand");
    out.insert(out.begin() + 1, from_file.begin(), from_file.end());
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aliasnet: undersampled MRI reconstruction with stacked denoising autoencoders", "aliasnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(an_version()));
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GenData gen;
  Train train;
  Reconstruct recon;
  Compare compare;
  Benchmark bench;
  MaskPreview preview;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate phantom sequences, mask, training set and test k-space");
  auto* train_cmd = app.add_subcommand("train", "greedy layer-wise SDAE training");
  auto* recon_cmd = app.add_subcommand("reconstruct", "online reconstruction of a k-space sequence");
  auto* compare_cmd = app.add_subcommand("compare", "score zero_filled, diff_cs and sdae against the truth");
  auto* bench_cmd = app.add_subcommand("benchmark", "per-frame latency of each method");
  auto* preview_cmd = app.add_subcommand("mask-preview", "render a sampling mask as a graymap");
  gen.add(gen_cmd);
  train.add(train_cmd);
  recon.add(recon_cmd);
  compare.add(compare_cmd);
  bench.add(bench_cmd);
  preview.add(preview_cmd);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kExitUsage;
    }
    if (*gen_cmd) return gen.run();
    if (*train_cmd) return train.run();
    if (*recon_cmd) return recon.run();
    if (*compare_cmd) return compare.run();
    if (*bench_cmd) return bench.run();
    if (*preview_cmd) return preview.run();
    return kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.what() << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
}
