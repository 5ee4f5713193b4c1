#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aliasnet/baselines.hpp"
#include "aliasnet/sdae.hpp"

namespace aliasnet {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

struct MetricRow {
  std::string dataset;
  std::string method;
  std::size_t frame = 0;
  double nmse = 0.0;
  double ssim = 0.0;
  double latency_s = 0.0;
};

struct MethodSummary {
  std::string dataset;
  std::string method;
  std::size_t frames = 0;
  double nmse_mean = 0.0;
  double nmse_std = 0.0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
  double latency_mean_s = 0.0;
};

/// Groups rows by (dataset, method) in first-seen order. Standard deviations
/// are population (divide by count).
std::vector<MethodSummary> summarize(std::span<const MetricRow> rows);

/// dataset,method,frame,nmse,ssim,latency_s
void write_metrics_csv(const std::filesystem::path& path, std::span<const MetricRow> rows);
/// dataset,method,frames,nmse_mean,nmse_std,ssim_mean,ssim_std,latency_mean_s
void write_summary_csv(const std::filesystem::path& path, std::span<const MethodSummary> summary);
/// epoch,train_cost,val_cost
void write_train_report_csv(const std::filesystem::path& path, const TrainReport& report);
/// frame,iter,objective
void write_objective_traces_csv(const std::filesystem::path& path, std::span<const FrameEstimate> estimates);

/// Minimal CSV reader for the files above (no quoting).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace aliasnet
