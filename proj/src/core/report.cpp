#include "aliasnet/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace aliasnet {

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::vector<MethodSummary> summarize(std::span<const MetricRow> rows) {
  std::vector<MethodSummary> out;
  std::map<std::pair<std::string, std::string>, std::vector<const MetricRow*>> groups;
  for (const auto& row : rows) {
    auto& members = groups[{row.dataset, row.method}];
    if (members.empty()) out.push_back(MethodSummary{row.dataset, row.method});
    members.push_back(&row);
  }
  for (auto& s : out) {
    const auto& members = groups[{s.dataset, s.method}];
    const double count = static_cast<double>(members.size());
    s.frames = members.size();
    for (const auto* r : members) {
      s.nmse_mean += r->nmse;
      s.ssim_mean += r->ssim;
      s.latency_mean_s += r->latency_s;
    }
    s.nmse_mean /= count;
    s.ssim_mean /= count;
    s.latency_mean_s /= count;
    for (const auto* r : members) {
      s.nmse_std += (r->nmse - s.nmse_mean) * (r->nmse - s.nmse_mean);
      s.ssim_std += (r->ssim - s.ssim_mean) * (r->ssim - s.ssim_mean);
    }
    s.nmse_std = std::sqrt(s.nmse_std / count);
    s.ssim_std = std::sqrt(s.ssim_std / count);
  }
  return out;
}

void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricRow> rows) {
  auto out = open_csv(path);
  out << "dataset,method,frame,nmse,ssim,latency_s\n";
  for (const auto& r : rows)
    out << r.dataset << ',' << r.method << ',' << r.frame << ',' << format_number(r.nmse) << ','
        << format_number(r.ssim) << ',' << format_number(r.latency_s) << '\n';
  finish(out, path);
}

void write_summary_csv(const std::filesystem::path& path, std::span<const MethodSummary> summary) {
  auto out = open_csv(path);
  out << "dataset,method,frames,nmse_mean,nmse_std,ssim_mean,ssim_std,latency_mean_s\n";
  for (const auto& s : summary)
    out << s.dataset << ',' << s.method << ',' << s.frames << ',' << format_number(s.nmse_mean) << ','
        << format_number(s.nmse_std) << ',' << format_number(s.ssim_mean) << ',' << format_number(s.ssim_std) << ','
        << format_number(s.latency_mean_s) << '\n';
  finish(out, path);
}

void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report) {
  auto out = open_csv(path);
  out << "epoch,train_cost,val_cost\n";
  for (std::size_t e = 0; e < report.train_cost.size(); ++e) {
    out << e + 1 << ',' << format_number(report.train_cost[e]) << ',';
    if (e < report.val_cost.size()) out << format_number(report.val_cost[e]);
    out << '\n';
  }
  finish(out, path);
}

void write_objective_traces_csv(const std::filesystem::path& path, std::span<const FrameEstimate> estimates) {
  auto out = open_csv(path);
  out << "frame,iter,objective\n";
  for (std::size_t f = 0; f < estimates.size(); ++f)
    for (std::size_t k = 0; k < estimates[f].objective_trace.size(); ++k)
      out << f << ',' << k << ',' << format_number(estimates[f].objective_trace[k]) << '\n';
  finish(out, path);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace aliasnet
