#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "skewreg/experiment.hpp"
#include "skewreg/metrics.hpp"

namespace skewreg {

enum class OutputFormat { Table, Json, Csv };

inline OutputFormat parse_format(std::string_view name) {
  if (name == "table") {
    return OutputFormat::Table;
  }
  if (name == "json") {
    return OutputFormat::Json;
  }
  if (name == "csv") {
    return OutputFormat::Csv;
  }
  throw std::invalid_argument("parse_format: unknown format '" +
                              std::string(name) +
                              "' (expected table, json, csv)");
}

namespace detail {

inline std::string fixed(double v, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string opt_fixed(const std::optional<double>& v, int decimals = 4,
                             const char* absent = "-") {
  return v ? fixed(*v, decimals) : std::string(absent);
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// RegionReport

inline nlohmann::json to_json(const RegionMetrics& m) {
  return {{"count", m.count},
          {"mae", detail::opt_json(m.mae)},
          {"rmse", detail::opt_json(m.rmse)},
          {"gmean", detail::opt_json(m.gmean)}};
}

inline nlohmann::json to_json(const RegionReport& r) {
  nlohmann::json per_bin = nlohmann::json::array();
  for (const PerBinError& e : r.per_bin_errors) {
    per_bin.push_back({{"bin", e.bin},
                       {"count", e.count},
                       {"mean_abs_error", e.mean_abs_error}});
  }
  return {{"all", to_json(r.all)},
          {"many", to_json(r.many)},
          {"medium", to_json(r.medium)},
          {"few", to_json(r.few)},
          {"pearson_r", detail::opt_json(r.pearson_r)},
          {"per_bin_errors", per_bin}};
}

/// Aligned-column text table: one row per region, metric columns.
inline std::string format_table(const RegionReport& r) {
  std::string out;
  out += "region    count       MAE      RMSE    G-Mean\n";
  const auto row = [&](const char* name, const RegionMetrics& m) {
    out += name;
    out += detail::pad(std::to_string(m.count), 9);
    out += detail::pad(detail::opt_fixed(m.mae), 10);
    out += detail::pad(detail::opt_fixed(m.rmse), 10);
    out += detail::pad(detail::opt_fixed(m.gmean), 10);
    out += '\n';
  };
  row("All   ", r.all);
  row("Many  ", r.many);
  row("Med.  ", r.medium);
  row("Few   ", r.few);
  out += "pearson_r(train count, test MAE per bin): " +
         detail::opt_fixed(r.pearson_r) + "\n";
  return out;
}

inline std::string format_csv(const RegionReport& r) {
  std::string out = "region,count,mae,rmse,gmean\n";
  const auto row = [&](const char* name, const RegionMetrics& m) {
    out += name;
    out += ',' + std::to_string(m.count);
    out += ',' + detail::opt_fixed(m.mae, 9, "");
    out += ',' + detail::opt_fixed(m.rmse, 9, "");
    out += ',' + detail::opt_fixed(m.gmean, 9, "");
    out += '\n';
  };
  row("all", r.all);
  row("many", r.many);
  row("medium", r.medium);
  row("few", r.few);
  return out;
}

inline std::string format_report(const RegionReport& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Json:
      return to_json(r).dump(2) + "\n";
    case OutputFormat::Csv:
      return format_csv(r);
    case OutputFormat::Table:
      return format_table(r);
  }
  return {};
}

// ---------------------------------------------------------------------------
// ComparisonReport

inline nlohmann::json to_json(const MetricAgg& a) {
  return {{"n", a.n},
          {"mean", detail::opt_json(a.mean)},
          {"std", detail::opt_json(a.stddev)}};
}

inline nlohmann::json to_json(const RegionAgg& a) {
  return {{"mean_count", a.mean_count},
          {"mae", to_json(a.mae)},
          {"rmse", to_json(a.rmse)},
          {"gmean", to_json(a.gmean)}};
}

inline nlohmann::json to_json(const RelativeChange& c) {
  return {{"mae_pct", detail::opt_json(c.mae_pct)},
          {"rmse_pct", detail::opt_json(c.rmse_pct)},
          {"gmean_pct", detail::opt_json(c.gmean_pct)}};
}

inline nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json schemes = nlohmann::json::array();
  for (const SchemeStats& s : r.schemes) {
    nlohmann::json js = {{"scheme", to_string(s.scheme)},
                         {"all", to_json(s.all)},
                         {"many", to_json(s.many)},
                         {"medium", to_json(s.medium)},
                         {"few", to_json(s.few)},
                         {"pearson_r", to_json(s.pearson)}};
    // Negative percentages mean the error decreased relative to vanilla.
    js["change_vs_vanilla_pct"] =
        (s.change_all && s.change_few)
            ? nlohmann::json{{"all", to_json(*s.change_all)},
                             {"few", to_json(*s.change_few)}}
            : nlohmann::json(nullptr);
    schemes.push_back(std::move(js));
  }
  return {{"repetitions", r.repetitions},
          {"base_seed", r.base_seed},
          {"schemes", schemes}};
}

namespace detail {

inline std::string mean_std(const MetricAgg& a) {
  if (!a.mean) {
    return "-";
  }
  return fixed(*a.mean, 3) + "+-" + fixed(*a.stddev, 3);
}

}  // namespace detail

/// Scheme rows with All/Few columns per metric, plus a relative-change block.
inline std::string format_table(const ComparisonReport& r) {
  std::string out;
  out += "scheme     |        MAE:All        MAE:Few |       RMSE:All       RMSE:Few |     G-Mean:All     G-Mean:Few\n";
  char line[256];
  for (const SchemeStats& s : r.schemes) {
    std::snprintf(line, sizeof(line),
                  "%-10s | %14s %14s | %14s %14s | %14s %14s\n",
                  to_string(s.scheme), detail::mean_std(s.all.mae).c_str(),
                  detail::mean_std(s.few.mae).c_str(),
                  detail::mean_std(s.all.rmse).c_str(),
                  detail::mean_std(s.few.rmse).c_str(),
                  detail::mean_std(s.all.gmean).c_str(),
                  detail::mean_std(s.few.gmean).c_str());
    out += line;
  }
  bool header_done = false;
  for (const SchemeStats& s : r.schemes) {
    if (s.scheme == WeightScheme::Vanilla || !s.change_all || !s.change_few) {
      continue;
    }
    if (!header_done) {
      out += "change vs vanilla, percent (negative = improvement):\n";
      header_done = true;
    }
    std::snprintf(line, sizeof(line),
                  "%-10s | MAE all %s%% few %s%% | RMSE all %s%% few %s%% | "
                  "G-Mean all %s%% few %s%%\n",
                  to_string(s.scheme),
                  detail::opt_fixed(s.change_all->mae_pct, 1).c_str(),
                  detail::opt_fixed(s.change_few->mae_pct, 1).c_str(),
                  detail::opt_fixed(s.change_all->rmse_pct, 1).c_str(),
                  detail::opt_fixed(s.change_few->rmse_pct, 1).c_str(),
                  detail::opt_fixed(s.change_all->gmean_pct, 1).c_str(),
                  detail::opt_fixed(s.change_few->gmean_pct, 1).c_str());
    out += line;
  }
  std::snprintf(line, sizeof(line), "repetitions: %zu, base seed: %llu\n",
                r.repetitions,
                static_cast<unsigned long long>(r.base_seed));
  out += line;
  return out;
}

/// One row per (scheme, region). Change columns are filled only on the All
/// and Few rows of non-vanilla schemes.
inline std::string format_csv(const ComparisonReport& r) {
  std::string out =
      "scheme,region,mean_count,mae_mean,mae_std,rmse_mean,rmse_std,"
      "gmean_mean,gmean_std,pearson_mean,mae_change_pct,rmse_change_pct,"
      "gmean_change_pct\n";
  const auto cell = [](const std::optional<double>& v) {
    return detail::opt_fixed(v, 6, "");
  };
  for (const SchemeStats& s : r.schemes) {
    const struct {
      const char* name;
      const RegionAgg& agg;
      const std::optional<RelativeChange>& change;
    } rows[] = {
        {"all", s.all, s.scheme == WeightScheme::Vanilla ? std::optional<RelativeChange>{} : s.change_all},
        {"many", s.many, {}},
        {"medium", s.medium, {}},
        {"few", s.few, s.scheme == WeightScheme::Vanilla ? std::optional<RelativeChange>{} : s.change_few},
    };
    for (const auto& row : rows) {
      out += to_string(s.scheme);
      out += ',';
      out += row.name;
      out += ',' + detail::fixed(row.agg.mean_count, 1);
      out += ',' + cell(row.agg.mae.mean) + ',' + cell(row.agg.mae.stddev);
      out += ',' + cell(row.agg.rmse.mean) + ',' + cell(row.agg.rmse.stddev);
      out += ',' + cell(row.agg.gmean.mean) + ',' + cell(row.agg.gmean.stddev);
      out += ',' + cell(s.pearson.mean);
      if (row.change) {
        out += ',' + cell(row.change->mae_pct) + ',' +
               cell(row.change->rmse_pct) + ',' + cell(row.change->gmean_pct);
      } else {
        out += ",,,";
      }
      out += '\n';
    }
  }
  return out;
}

inline std::string format_report(const ComparisonReport& r,
                                 OutputFormat format) {
  switch (format) {
    case OutputFormat::Json:
      return to_json(r).dump(2) + "\n";
    case OutputFormat::Csv:
      return format_csv(r);
    case OutputFormat::Table:
      return format_table(r);
  }
  return {};
}

/// Writes a formatted report to a stream (stdout) or file path.
inline void emit_report(const ComparisonReport& r, OutputFormat format,
                        std::ostream& out) {
  out << format_report(r, format);
}

inline void emit_report(const ComparisonReport& r, OutputFormat format,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("emit_report: cannot open '" + path +
                             "' for writing");
  }
  out << format_report(r, format);
  if (!out) {
    throw std::runtime_error("emit_report: write to '" + path + "' failed");
  }
}

}  // namespace skewreg
