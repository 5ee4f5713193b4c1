#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "aliasnet/kspace.hpp"
#include "aliasnet/report.hpp"
#include "aliasnet/tensor_io.hpp"
#include "doctest.h"

using namespace aliasnet;

namespace {

std::vector<std::byte> bytes_of(std::initializer_list<int> v) {
  std::vector<std::byte> out;
  for (int b : v) out.push_back(static_cast<std::byte>(b));
  return out;
}

}  // namespace

TEST_CASE("tensor byte layout") {
  const Tensor t{{1, 2}, {1.0, -2.0}};
  const auto bytes = encode_tensor(t);
  // "MRT1", rank 2, dims 1 and 2, then two little-endian doubles.
  const auto expect = bytes_of({'M', 'R', 'T', '1', 2, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0,
                                0, 0, 0, 0, 0, 0, 0xF0, 0x3F, 0, 0, 0, 0, 0, 0, 0, 0xC0});
  CHECK(bytes == expect);
  const auto back = decode_tensor(bytes);
  CHECK(back.dims == t.dims);
  CHECK(back.values == t.values);
}

TEST_CASE("tensor decode errors carry offsets") {
  const auto good = encode_tensor(Tensor{{2, 2}, {1, 2, 3, 4}});
  auto bad_magic = good;
  bad_magic[3] = std::byte{'2'};
  try {
    decode_tensor(bad_magic);
    FAIL("expected format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("MRT1") != std::string::npos);
    CHECK(e.offset() == 0);
  }
  for (std::size_t cut : {std::size_t{2}, std::size_t{6}, std::size_t{13}, good.size() - 3}) {
    CHECK_THROWS_AS(decode_tensor(std::span(good.data(), cut)), FormatError);
  }
  auto extra = good;
  extra.push_back(std::byte{1});
  CHECK_THROWS_AS(decode_tensor(extra), FormatError);
  CHECK_THROWS_AS(encode_tensor(Tensor{{2, 2}, {1, 2, 3}}), DimensionError);
}

TEST_CASE("typed conversions round-trip") {
  RealImage img(3);
  for (std::size_t i = 0; i < img.area(); ++i) img[i] = 0.1 * static_cast<double>(i);
  CHECK(image_from_tensor(decode_tensor(encode_tensor(to_tensor(img)))) == img);

  const auto mask = mask_radial(16, 3, 0);
  const auto mt = to_tensor(mask);
  CHECK(mt.dims == std::vector<std::uint32_t>{16, 16});
  CHECK(mask_from_tensor(mt) == mask);
  auto fuzzy = mt;
  fuzzy.values[5] = 0.5;
  CHECK_THROWS_AS(mask_from_tensor(fuzzy), ArgumentError);
  auto no_dc = mt;
  no_dc.values[0] = 0.0;
  CHECK_THROWS_AS(mask_from_tensor(no_dc), ArgumentError);

  ComplexGrid g(4);
  for (std::size_t i = 0; i < g.area(); ++i) g[i] = Complex(static_cast<double>(i), -0.5 * static_cast<double>(i));
  const std::vector<ComplexGrid> cframes{g, g};
  const auto ct = frames_to_tensor(std::span<const ComplexGrid>(cframes));
  CHECK(ct.dims == std::vector<std::uint32_t>{2, 4, 4, 2});
  CHECK(ct.values[2] == 1.0);
  CHECK(ct.values[3] == -0.5);
  CHECK(complex_frames_from_tensor(ct) == cframes);

  const std::vector<RealImage> rframes{img, img, img};
  const auto rt = frames_to_tensor(std::span<const RealImage>(rframes));
  CHECK(rt.dims == std::vector<std::uint32_t>{3, 3, 3});
  CHECK(real_frames_from_tensor(rt) == rframes);
  CHECK(real_frames_from_tensor(to_tensor(img)) == std::vector<RealImage>{img});

  CHECK_THROWS_AS(image_from_tensor(Tensor{{2, 3}, std::vector<double>(6)}), DimensionError);
  CHECK_THROWS_AS(complex_frames_from_tensor(rt), DimensionError);
}

TEST_CASE("files and metadata") {
  const std::filesystem::path dir = "tensor_io_tmp";
  std::filesystem::create_directories(dir);
  const Tensor t{{3}, {0.5, 1.5, 2.5}};
  write_tensor(dir / "t.mrt", t);
  CHECK(read_tensor(dir / "t.mrt").values == t.values);
  CHECK_THROWS_AS(read_tensor(dir / "missing.mrt"), IoError);
  CHECK_THROWS_AS(write_tensor(dir / "no_such_dir" / "t.mrt", t), IoError);

  const Metadata meta{{"n", "32"}, {"mask", "radial:8"}, {"note", "a=b"}};
  write_metadata(dir / "meta.txt", meta);
  CHECK(read_metadata(dir / "meta.txt") == meta);
  std::FILE* f = std::fopen((dir / "bad.txt").c_str(), "w");
  std::fputs("novalue\n", f);
  std::fclose(f);
  CHECK_THROWS_AS(read_metadata(dir / "bad.txt"), ArgumentError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 123456789.125}) {
    const auto s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(0.25) == "0.25");
  CHECK(format_number(3.0) == "3");
}

TEST_CASE("metric summaries and CSV files") {
  const std::vector<MetricRow> rows{{"toy", "a", 0, 0.1, 0.9, 0.01},
                                    {"toy", "a", 1, 0.3, 0.7, 0.03},
                                    {"toy", "b", 0, 0.5, 0.5, 0.002}};
  const auto summary = summarize(rows);
  REQUIRE(summary.size() == 2);
  CHECK(summary[0].method == "a");
  CHECK(summary[0].frames == 2);
  CHECK(summary[0].nmse_mean == doctest::Approx(0.2));
  CHECK(summary[0].nmse_std == doctest::Approx(0.1));
  CHECK(summary[0].ssim_std == doctest::Approx(0.1));
  CHECK(summary[0].latency_mean_s == doctest::Approx(0.02));
  CHECK(summary[1].nmse_std == 0.0);

  const std::filesystem::path p = "metrics_tmp.csv", q = "summary_tmp.csv";
  write_metrics_csv(p, rows);
  const auto table = read_csv(p);
  REQUIRE(table.size() == 4);
  CHECK(table[0] == std::vector<std::string>{"dataset", "method", "frame", "nmse", "ssim", "latency_s"});
  CHECK(table[2] == std::vector<std::string>{"toy", "a", "1", "0.3", "0.7", "0.03"});
  write_summary_csv(q, summary);
  const auto st = read_csv(q);
  REQUIRE(st.size() == 3);
  CHECK(st[0] == std::vector<std::string>{"dataset", "method", "frames", "nmse_mean", "nmse_std", "ssim_mean",
                                          "ssim_std", "latency_mean_s"});
  CHECK(std::strtod(st[1][3].c_str(), nullptr) == summary[0].nmse_mean);
  std::filesystem::remove(p);
  std::filesystem::remove(q);

  TrainReport report;
  report.train_cost = {3.0, 2.0};
  report.val_cost = {3.5, 2.5};
  write_train_report_csv(p, report);
  const auto tr = read_csv(p);
  REQUIRE(tr.size() == 3);
  CHECK(tr[0] == std::vector<std::string>{"epoch", "train_cost", "val_cost"});
  CHECK(tr[2] == std::vector<std::string>{"2", "2", "2.5"});

  FrameEstimate a, b;
  b.objective_trace = {4.0, 1.0};
  const std::vector<FrameEstimate> est{a, b};
  write_objective_traces_csv(p, est);
  const auto ot = read_csv(p);
  REQUIRE(ot.size() == 3);
  CHECK(ot[0] == std::vector<std::string>{"frame", "iter", "objective"});
  CHECK(ot[1] == std::vector<std::string>{"1", "0", "4"});
  std::filesystem::remove(p);
}
