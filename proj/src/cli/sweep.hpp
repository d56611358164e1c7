#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "yieldnet/model.hpp"

namespace yieldnet::cli {

enum class SweepParam { mu, sigma2, m, c, delta };

SweepParam parse_sweep_param(std::string_view name);
std::string_view to_string(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::mu;
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
  GameParams base;
  bool couple_delta = false;  // recompute delta = m s_max at each point
  std::vector<std::string> metrics;  // empty: all
};

struct SweepRow {
  std::size_t index = 0;
  double value = 0.0;
  std::string status;  // "ok" or "skip:<reason>"
  double z = 0.0;
  double y = 0.0;
  std::size_t k_star = 0;
  std::size_t k_opt = 0;
  std::size_t degree = 0;
  std::size_t links = 0;
  double welfare_eq = 0.0;
  double welfare_opt = 0.0;
  std::optional<double> pos;
  bool verified = false;
};

const std::vector<std::string>& sweep_metric_columns();

/// Grid values from + k step for k = 0..floor((to - from) / step).
std::vector<double> sweep_grid(const SweepSpec& spec);

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index, double value);

/// Rows in grid order; `threads` only changes wall time.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1);

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

std::string format_double(double x);

}  // namespace yieldnet::cli
