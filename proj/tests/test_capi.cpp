// Exercises the shared library through its C header only.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include "aliasnet/aliasnet.h"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path = fs::temp_directory_path() / ("aliasnet_capi_" + std::to_string(::getpid()));
  TempDir() { fs::create_directories(path); }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path scratch(const std::string& name) {
  static const TempDir dir;
  return dir.path / name;
}

struct MaskDel { void operator()(an_mask* p) const { an_mask_free(p); } };
struct SeqDel { void operator()(an_sequence* p) const { an_sequence_free(p); } };
struct KsDel { void operator()(an_kspace* p) const { an_kspace_free(p); } };
struct SetDel { void operator()(an_trainset* p) const { an_trainset_free(p); } };
struct ModelDel { void operator()(an_model* p) const { an_model_free(p); } };
struct LogDel { void operator()(an_train_log* p) const { an_train_log_free(p); } };
struct ReconDel { void operator()(an_recon* p) const { an_recon_free(p); } };
struct TableDel { void operator()(an_metric_table* p) const { an_metric_table_free(p); } };

using Mask = std::unique_ptr<an_mask, MaskDel>;
using Seq = std::unique_ptr<an_sequence, SeqDel>;
using Ks = std::unique_ptr<an_kspace, KsDel>;
using Set = std::unique_ptr<an_trainset, SetDel>;
using Model = std::unique_ptr<an_model, ModelDel>;
using Log = std::unique_ptr<an_train_log, LogDel>;
using Recon = std::unique_ptr<an_recon, ReconDel>;
using Table = std::unique_ptr<an_metric_table, TableDel>;

Mask make_mask(const char* spec, uint32_t n) {
  an_mask* m = nullptr;
  REQUIRE(an_mask_from_spec(spec, n, 1, &m) == AN_OK);
  return Mask(m);
}

Seq make_phantom(uint32_t n, size_t frames, uint64_t seed) {
  an_sequence* s = nullptr;
  REQUIRE(an_sequence_dynamic_phantom(n, frames, 8, 0.1, seed, &s) == AN_OK);
  return Seq(s);
}

}  // namespace

TEST_CASE("capi: status names and errors") {
  CHECK(std::string(an_status_name(AN_OK)) == "ok");
  CHECK(std::string(an_status_name(AN_ERR_FORMAT)) == "format error");
  CHECK(std::string(an_version()) == "0.1.0");

  an_mask* m = nullptr;
  CHECK(an_mask_from_spec("uniform:3", 8, 0, &m) == AN_ERR_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::string(an_last_error()).size() > 0);

  CHECK(an_mask_from_spec("full", 8, 0, &m) == AN_OK);
  CHECK(std::string(an_last_error()).empty());
  an_mask_free(m);

  CHECK(an_mask_from_spec(nullptr, 8, 0, &m) == AN_ERR_ARGUMENT);
  CHECK(an_mask_from_spec("full", 8, 0, nullptr) == AN_ERR_ARGUMENT);
  CHECK(an_mask_load("/nonexistent/dir/mask.mrt", &m) == AN_ERR_IO);

  // null handles read as empty
  CHECK(an_mask_size(nullptr) == 0);
  CHECK(an_sequence_frames(nullptr) == 0);
  CHECK(an_model_depth(nullptr) == 0);
  an_mask_free(nullptr);
  an_model_free(nullptr);
}

TEST_CASE("capi: mask queries and round trip") {
  Mask m = make_mask("radial:8", 32);
  CHECK(an_mask_size(m.get()) == 32);
  const size_t count = an_mask_count(m.get());
  CHECK(an_mask_fraction(m.get()) == doctest::Approx(count / 1024.0));

  std::vector<uint8_t> bits(1024);
  CHECK(an_mask_bits(m.get(), bits.data(), 10) == AN_ERR_DIMENSION);
  REQUIRE(an_mask_bits(m.get(), bits.data(), bits.size()) == AN_OK);
  size_t ones = 0;
  for (auto b : bits) ones += b;
  CHECK(ones == count);
  CHECK(bits[0] == 1);

  const auto path = scratch("mask.mrt").string();
  REQUIRE(an_mask_save(m.get(), path.c_str()) == AN_OK);
  an_mask* raw = nullptr;
  REQUIRE(an_mask_load(path.c_str(), &raw) == AN_OK);
  Mask back(raw);
  std::vector<uint8_t> bits2(1024);
  REQUIRE(an_mask_bits(back.get(), bits2.data(), bits2.size()) == AN_OK);
  CHECK(bits == bits2);

  // a sequence file is not a mask
  Seq s = make_phantom(32, 2, 3);
  const auto spath = scratch("seq.mrt").string();
  REQUIRE(an_sequence_save(s.get(), spath.c_str()) == AN_OK);
  CHECK(an_mask_load(spath.c_str(), &raw) != AN_OK);
}

TEST_CASE("capi: sequences") {
  std::vector<double> data(2 * 16, 0.25);
  an_sequence* raw = nullptr;
  CHECK(an_sequence_create(4, 2, data.data(), data.size() - 1, &raw) == AN_ERR_DIMENSION);
  REQUIRE(an_sequence_create(4, 2, data.data(), data.size(), &raw) == AN_OK);
  Seq s(raw);
  CHECK(an_sequence_size(s.get()) == 4);
  CHECK(an_sequence_frames(s.get()) == 2);
  std::vector<double> frame(16);
  REQUIRE(an_sequence_frame(s.get(), 1, frame.data(), frame.size()) == AN_OK);
  CHECK(frame[5] == 0.25);
  CHECK(an_sequence_frame(s.get(), 2, frame.data(), frame.size()) != AN_OK);

  const an_sequence* parts[] = {s.get(), s.get()};
  REQUIRE(an_sequence_concat(parts, 2, &raw) == AN_OK);
  Seq joined(raw);
  CHECK(an_sequence_frames(joined.get()) == 4);

  Seq p = make_phantom(16, 3, 7);
  const auto path = scratch("p.mrt").string();
  REQUIRE(an_sequence_save(p.get(), path.c_str()) == AN_OK);
  REQUIRE(an_sequence_load(path.c_str(), &raw) == AN_OK);
  Seq q(raw);
  std::vector<double> a(256), b(256);
  for (size_t t = 0; t < 3; ++t) {
    REQUIRE(an_sequence_frame(p.get(), t, a.data(), a.size()) == AN_OK);
    REQUIRE(an_sequence_frame(q.get(), t, b.data(), b.size()) == AN_OK);
    CHECK(a == b);
  }
}

TEST_CASE("capi: full mask zero-filled reproduces the frames") {
  Seq p = make_phantom(16, 3, 11);
  Mask full = make_mask("full", 16);
  an_kspace* kraw = nullptr;
  REQUIRE(an_acquire(p.get(), full.get(), 0.0, 5, &kraw) == AN_OK);
  Ks k(kraw);
  CHECK(an_kspace_frames(k.get()) == 3);
  CHECK(an_kspace_size(k.get()) == 16);

  an_sequence* zraw = nullptr;
  REQUIRE(an_zero_filled(k.get(), full.get(), &zraw) == AN_OK);
  Seq z(zraw);
  std::vector<double> a(256), b(256);
  for (size_t t = 0; t < 3; ++t) {
    an_sequence_frame(p.get(), t, a.data(), a.size());
    an_sequence_frame(z.get(), t, b.data(), b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-12));
  }

  Mask wrong = make_mask("full", 8);
  CHECK(an_zero_filled(k.get(), wrong.get(), &zraw) == AN_ERR_DIMENSION);
}

TEST_CASE("capi: default dims and random model") {
  size_t len = 0;
  CHECK(an_default_dims(32, 3, nullptr, 0, &len) == AN_OK);
  CHECK(len == 4);
  std::vector<uint32_t> dims(len);
  REQUIRE(an_default_dims(32, 3, dims.data(), dims.size(), &len) == AN_OK);
  CHECK(dims == std::vector<uint32_t>{1024, 256, 64, 16});

  const uint32_t small[] = {16, 8, 4};
  an_model* raw = nullptr;
  REQUIRE(an_model_random(small, 3, 9, &raw) == AN_OK);
  Model m(raw);
  CHECK(an_model_depth(m.get()) == 2);

  std::vector<double> x(16, 0.5), y(16);
  size_t mv = 0, sg = 0;
  REQUIRE(an_model_reconstruct_counted(m.get(), x.data(), y.data(), y.size(), &mv, &sg) == AN_OK);
  CHECK(mv == 4);
  CHECK(sg == 3);
  std::vector<double> y2(16);
  REQUIRE(an_model_reconstruct(m.get(), x.data(), y2.data(), y2.size()) == AN_OK);
  CHECK(y == y2);
  CHECK(an_model_reconstruct(m.get(), x.data(), y2.data(), 15) == AN_ERR_DIMENSION);

  const uint32_t bad[] = {16};
  CHECK(an_model_random(bad, 1, 0, &raw) != AN_OK);
}

TEST_CASE("capi: train, save, load, reconstruct") {
  Seq a = make_phantom(16, 6, 1);
  Seq b = make_phantom(16, 6, 2);
  Mask mask = make_mask("radial:4", 16);
  const an_sequence* seqs[] = {a.get(), b.get()};
  an_trainset* sraw = nullptr;
  REQUIRE(an_trainset_build(seqs, 2, mask.get(), 0.0, 3, &sraw) == AN_OK);
  Set set(sraw);
  CHECK(an_trainset_dim(set.get()) == 256);
  CHECK(an_trainset_columns(set.get()) == 12);
  std::vector<double> in(256), tgt(256);
  REQUIRE(an_trainset_column(set.get(), 0, in.data(), tgt.data(), 256) == AN_OK);
  REQUIRE(an_trainset_column(set.get(), 0, nullptr, tgt.data(), 256) == AN_OK);

  an_train_config cfg;
  an_train_config_default(&cfg);
  cfg.epochs = 5;
  cfg.batch_size = 4;
  const uint32_t dims[] = {256, 32, 8};
  an_model* mraw = nullptr;
  an_train_log* lraw = nullptr;
  REQUIRE(an_model_train(set.get(), dims, 3, &cfg, &mraw, &lraw) == AN_OK);
  Model model(mraw);
  Log log(lraw);
  CHECK(an_train_log_layers(log.get()) == 2);
  CHECK(an_train_log_epochs(log.get(), 0) == 5);
  double tr = 0, va = 0;
  REQUIRE(an_train_log_cost(log.get(), 1, 4, &tr, &va) == AN_OK);
  CHECK(std::isfinite(tr));
  CHECK(an_train_log_cost(log.get(), 2, 0, &tr, &va) != AN_OK);

  const auto path = scratch("m.sdae").string();
  REQUIRE(an_model_save(model.get(), path.c_str()) == AN_OK);
  an_model* back_raw = nullptr;
  REQUIRE(an_model_load(path.c_str(), &back_raw) == AN_OK);
  Model back(back_raw);
  size_t len = 0;
  std::vector<uint32_t> got(3);
  REQUIRE(an_model_dims(back.get(), got.data(), got.size(), &len) == AN_OK);
  CHECK(got == std::vector<uint32_t>{256, 32, 8});
  std::vector<double> y1(256), y2(256);
  an_model_reconstruct(model.get(), in.data(), y1.data(), 256);
  an_model_reconstruct(back.get(), in.data(), y2.data(), 256);
  CHECK(y1 == y2);

  // training the same set twice is bit-identical
  an_model* again_raw = nullptr;
  REQUIRE(an_model_train(set.get(), dims, 3, &cfg, &again_raw, nullptr) == AN_OK);
  Model again(again_raw);
  an_model_reconstruct(again.get(), in.data(), y2.data(), 256);
  CHECK(y1 == y2);

  // bad config surfaces as an argument error
  cfg.learning_rate = -1.0;
  CHECK(an_model_train(set.get(), dims, 3, &cfg, &again_raw, nullptr) == AN_ERR_ARGUMENT);
}

TEST_CASE("capi: online reconstruction and metric tables") {
  Seq p = make_phantom(16, 4, 21);
  Mask mask = make_mask("radial:6", 16);
  an_kspace* kraw = nullptr;
  REQUIRE(an_acquire(p.get(), mask.get(), 0.0, 1, &kraw) == AN_OK);
  Ks k(kraw);

  an_method m;
  CHECK(an_method_parse("diff_cs", &m) == AN_OK);
  CHECK(m == AN_METHOD_DIFF_CS);
  CHECK(an_method_parse("kalman", &m) == AN_ERR_ARGUMENT);
  CHECK(std::string(an_method_name(AN_METHOD_ZERO_FILLED)) == "zero_filled");

  an_recon* rraw = nullptr;
  CHECK(an_online_reconstruct(k.get(), mask.get(), AN_METHOD_SDAE, nullptr, nullptr, &rraw) == AN_ERR_ARGUMENT);
  REQUIRE(an_online_reconstruct(k.get(), mask.get(), AN_METHOD_DIFF_CS, nullptr, nullptr, &rraw) == AN_OK);
  Recon r(rraw);
  CHECK(an_recon_frames(r.get()) == 4);
  CHECK(an_recon_iterations(r.get(), 0) == 0);
  CHECK(an_recon_iterations(r.get(), 1) > 0);
  CHECK(an_recon_latency(r.get(), 1) >= 0.0);

  const auto traces = scratch("traces.csv").string();
  REQUIRE(an_recon_write_traces_csv(r.get(), traces.c_str()) == AN_OK);
  CHECK(fs::file_size(traces) > 0);

  an_metric_table* traw = nullptr;
  REQUIRE(an_metric_table_create(&traw) == AN_OK);
  Table t(traw);
  REQUIRE(an_metric_table_add_recon(t.get(), "phantom", "diff_cs", r.get(), p.get()) == AN_OK);
  CHECK(an_metric_table_rows(t.get()) == 4);
  double nm = 0, ns = 0, sm = 0, ss = 0;
  REQUIRE(an_metric_table_summary(t.get(), "phantom", "diff_cs", &nm, &ns, &sm, &ss) == AN_OK);
  CHECK(nm > 0.0);
  CHECK(nm < 1.0);
  CHECK(sm <= 1.0);
  CHECK(an_metric_table_summary(t.get(), "phantom", "sdae", &nm, &ns, &sm, &ss) != AN_OK);

  const auto csv = scratch("metrics.csv").string();
  REQUIRE(an_metric_table_write_csv(t.get(), csv.c_str()) == AN_OK);
  std::FILE* f = std::fopen(csv.c_str(), "r");
  REQUIRE(f);
  char line[128] = {};
  REQUIRE(std::fgets(line, sizeof line, f));
  std::fclose(f);
  CHECK(std::string(line) == "dataset,method,frame,nmse,ssim,latency_s\n");
}

TEST_CASE("capi: metrics") {
  std::vector<double> x(256), zero(256, 0.0);
  for (size_t i = 0; i < x.size(); ++i) x[i] = 0.1 + 0.01 * i;
  double v = -1;
  REQUIRE(an_nmse(x.data(), x.data(), 16, &v) == AN_OK);
  CHECK(v == 0.0);
  REQUIRE(an_nmse(zero.data(), x.data(), 16, &v) == AN_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(an_nmse(x.data(), zero.data(), 16, &v) != AN_OK);
  REQUIRE(an_ssim(x.data(), x.data(), 16, 1.0, &v) == AN_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(an_ssim(x.data(), x.data(), 16, 0.0, &v) == AN_ERR_ARGUMENT);
}

namespace {
int fill_index(void*, size_t index, double* out, size_t len) {
  for (size_t i = 0; i < len; ++i) out[i] = static_cast<double>(index);
  return 0;
}
int fail_on_two(void*, size_t index, double* out, size_t len) {
  for (size_t i = 0; i < len; ++i) out[i] = 0.0;
  return index == 2 ? 1 : 0;
}
int drifting(void* user, size_t, double* out, size_t len) {
  auto* calls = static_cast<int*>(user);
  ++*calls;
  for (size_t i = 0; i < len; ++i) out[i] = *calls;
  return 0;
}
}  // namespace

TEST_CASE("capi: benchmark") {
  an_latency lat{};
  REQUIRE(an_benchmark(fill_index, nullptr, 4, 5, 1, 2, &lat) == AN_OK);
  CHECK(lat.frames == 5);
  CHECK(lat.mean_s >= 0.0);
  CHECK(an_benchmark(fail_on_two, nullptr, 4, 5, 0, 1, &lat) == AN_ERR_ARGUMENT);
  CHECK(std::string(an_last_error()).find("frame 2") != std::string::npos);
  int calls = 0;
  CHECK(an_benchmark(drifting, &calls, 4, 3, 0, 2, &lat) == AN_ERR_NONDETERMINISM);
  CHECK(an_benchmark(nullptr, nullptr, 4, 3, 0, 1, &lat) == AN_ERR_ARGUMENT);

  Seq p = make_phantom(16, 3, 4);
  Mask mask = make_mask("radial:6", 16);
  an_kspace* kraw = nullptr;
  REQUIRE(an_acquire(p.get(), mask.get(), 0.0, 1, &kraw) == AN_OK);
  Ks k(kraw);
  REQUIRE(an_benchmark_method(k.get(), mask.get(), AN_METHOD_DIFF_CS, nullptr, nullptr, 0, 1, &lat) == AN_OK);
  CHECK(lat.frames == 3);
  CHECK(lat.fps > 0.0);
}

TEST_CASE("capi: format_number") {
  char buf[32];
  CHECK(an_format_number(0.25, buf, sizeof buf) == 4);
  CHECK(std::string(buf) == "0.25");
  an_format_number(0.1 + 0.2, buf, sizeof buf);
  CHECK(std::stod(buf) == 0.1 + 0.2);
}
